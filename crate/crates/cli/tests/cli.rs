use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ehd-neutral"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

/// Data rows of a CSV body, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn roots_of_a_perfect_cube() {
    let o = run(&["roots", "--a", "1", "--M", "0", "--Ra", "0"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 2);
    assert_eq!(r[0], ["-1.000000000000", "0.000000000000", "3"]);
    assert_eq!(r[1], ["1.000000000000", "0.000000000000", "3"]);
}

#[test]
fn roots_report_the_bifurcation_hit() {
    let o = run(&["roots", "--a", "1", "--M", "0.897497", "--Ra", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("# bifurcation S0∩S1 double_root=-1.165443"));

    let j = json(&run(&[
        "roots", "--a", "1", "--M", "1.242811", "--Ra", "1", "--format", "json",
    ]));
    assert_eq!(j["bifurcation"]["surface"], "S0∩S2");
    assert!(j["vieta"]["sum"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn roots_reject_nonpositive_wavenumber() {
    let o = run(&["roots", "--a", "0", "--M", "1", "--Ra", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("wavenumber must be positive"));
    assert!(stdout(&o).is_empty());
}

#[test]
fn roots_reject_nonpositive_cluster_tolerance() {
    let o = run(&[
        "roots",
        "--a",
        "1",
        "--M",
        "0",
        "--Ra",
        "0",
        "--cluster-tol",
        "0",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn critical_classical_minimum() {
    let o = run(&[
        "critical",
        "--M",
        "0",
        "--method",
        "spectral-legendre",
        "--N",
        "16",
    ]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("a,M,Ra,method,resolution,converged\n"));
    let r = &rows(&text)[0];
    let (a, ra): (f64, f64) = (r[0].parse().unwrap(), r[2].parse().unwrap());
    assert!(
        (a - 3.117).abs() < 0.01 && (ra - 1707.762).abs() < 0.05,
        "{r:?}"
    );
    assert_eq!(r[3], "spectral-legendre");
    assert_eq!(r[4], "16");
    assert_eq!(r[5], "true");
}

#[test]
fn critical_at_fixed_wavenumber() {
    let j = json(&run(&[
        "critical",
        "--a",
        "3.117",
        "--M",
        "10",
        "--method",
        "spectral-legendre",
        "--N",
        "6",
        "--format",
        "json",
    ]));
    let rec = &j[0];
    assert_eq!(rec["a"], 3.117);
    assert_eq!(rec["M"], 10.0);
    let ra = rec["Ra"].as_f64().unwrap();
    assert!((1707.0..1760.0).contains(&ra));
}

#[test]
fn critical_oracle_matches_spectral() {
    let ra = |method: &str| -> f64 {
        let o = run(&["critical", "--M", "0", "--method", method]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        rows(&stdout(&o))[0][2].parse().unwrap()
    };
    let (fd, sp) = (ra("fd-oracle"), ra("spectral-legendre"));
    assert!((fd - sp).abs() <= 1e-3 * sp);
}

#[test]
fn critical_exit_codes() {
    assert_eq!(
        code(&run(&["critical", "--M", "0", "--method", "bogus"])),
        2
    );
    assert_eq!(
        code(&run(&[
            "critical",
            "--M",
            "0",
            "--method",
            "fd-oracle",
            "--N",
            "100"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "critical", "--M", "0", "--a-lo", "4", "--a-hi", "2"
        ])),
        2
    );
    assert_eq!(code(&run(&["critical", "--M", "0", "--a-tol", "0"])), 2);
    // smallest root lies beyond the secular scan at this wavenumber
    let o = run(&[
        "critical",
        "--a",
        "0.0001",
        "--M",
        "0",
        "--method",
        "secular-direct",
    ]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("secular"), "{}", stderr(&o));
}

#[test]
fn table1_flags_suspect_entries() {
    let o = run(&["table1"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 9);
    let row = |a: &str, m: &str| r.iter().find(|x| x[0] == a && x[1] == m).unwrap().clone();
    assert_eq!(row("1.5000", "0")[9], "SCP");
    assert_eq!(row("10.0000", "0")[9], "SLP SCP");
    assert_eq!(row("3.1170", "0")[9], "");
    let slp: f64 = row("3.1170", "0")[2].parse().unwrap();
    assert!((1707.0..=1760.0).contains(&slp));
    assert!(
        r.iter().all(|x| x[4].parse::<f64>().is_ok()),
        "oracle column filled"
    );
}

#[test]
fn sweep_endpoints_and_plot_files() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("surface");
    let o = run(&["sweep", "--M", "0,1000", "--plot", prefix.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    let ra: Vec<f64> = r.iter().map(|x| x[2].parse().unwrap()).collect();
    assert!((ra[0] - 1707.76).abs() < 0.05);
    assert!((ra[1] - 2065.034).abs() < 0.01 * 2065.034);

    let plot = std::fs::read_to_string(dir.path().join("surface.ra.dat")).unwrap();
    let data: Vec<&str> = plot.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 2);
    assert!(data.iter().all(|l| l.split_whitespace().count() == 2));
    assert!(dir.path().join("surface.a.dat").exists());
}

#[test]
fn sweep_single_value() {
    let o = run(&["sweep", "--M", "0"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&stdout(&o)).len(), 1);
}

#[test]
fn sweep_json_is_ascending() {
    let j = json(&run(&["sweep", "--M", "0,10,100,1000", "--format", "json"]));
    let recs = j.as_array().unwrap();
    assert_eq!(recs.len(), 4);
    let ra: Vec<f64> = recs.iter().map(|r| r["Ra"].as_f64().unwrap()).collect();
    assert!(ra.windows(2).all(|w| w[0] < w[1]), "{ra:?}");
    for key in ["a", "M", "Ra", "method", "resolution", "converged"] {
        assert!(recs[0].get(key).is_some(), "{key}");
    }
}

#[test]
fn sweep_rejects_unsorted_lists() {
    assert_eq!(code(&run(&["sweep", "--M", "1000,0"])), 2);
}

#[test]
fn sweep_keeps_partial_output_on_failure() {
    let o = run(&[
        "sweep",
        "--M",
        "0,10",
        "--method",
        "secular-direct",
        "--a-lo",
        "0.0001",
        "--a-hi",
        "0.0002",
    ]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).starts_with("a,M,Ra,method,resolution,converged\n"));
    assert!(stderr(&o).contains("M=0") && stderr(&o).contains("M=10"));
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = [
        "sweep",
        "--M",
        "0,10,100,1000",
        "--method",
        "spectral-chebyshev",
        "--N",
        "12",
    ];
    let serial = bin()
        .args(args)
        .env("EHD_NEUTRAL_THREADS", "1")
        .output()
        .unwrap();
    let parallel = bin()
        .args(args)
        .env("EHD_NEUTRAL_THREADS", "4")
        .output()
        .unwrap();
    let auto = bin()
        .args(args)
        .env("EHD_NEUTRAL_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&serial), 0);
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(serial.stdout, auto.stdout);
    assert_eq!(run(&["table1"]).stdout, run(&["table1"]).stdout);
}

#[test]
fn bad_thread_setting_is_a_usage_error() {
    let o = bin()
        .args(["sweep", "--M", "0"])
        .env("EHD_NEUTRAL_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn output_file_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("point.csv");
    let o = run(&[
        "critical",
        "--a",
        "3.117",
        "--M",
        "0",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).is_empty());
    assert!(std::fs::read_to_string(path)
        .unwrap()
        .starts_with("a,M,Ra,"));
}

#[test]
fn secular_and_solve_ra() {
    let o = run(&["secular", "--a", "3.117", "--M", "0", "--Ra", "1500"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&stdout(&o))[0][5], "false");

    let o = run(&[
        "solve-ra", "--a", "3.117", "--M", "0", "--ra-lo", "1000", "--ra-hi", "3000", "--step",
        "10",
    ]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 1);
    assert_eq!(r[0][2], "1707.761893");
    assert_eq!(r[0][3], "secular-direct");

    let o = run(&[
        "solve-ra", "--a", "1", "--M", "0", "--ra-lo", "1", "--ra-hi", "100", "--step", "10",
    ]);
    assert_eq!(code(&o), 3);
    assert_eq!(
        code(&run(&["secular", "--a", "-1", "--M", "0", "--Ra", "1"])),
        2
    );
}

#[test]
fn validate_reports_agreement() {
    let j = json(&run(&[
        "validate", "--a", "3.117", "--M", "0", "--format", "json",
    ]));
    let rel: f64 = j["rel_spectral_oracle"].as_str().unwrap().parse().unwrap();
    assert!(rel <= 1e-3);
    assert_eq!(j["false_secular"], "false");
    assert_eq!(j["ns1_zero_nearby"], "false");
    assert_eq!(code(&run(&["validate", "--a", "0", "--M", "0"])), 2);
}
