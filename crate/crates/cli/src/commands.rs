use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ehd_core::charpoly::{
    bifurcation_scan, build_charpoly, find_roots_with_tol, DEFAULT_CLUSTER_TOL,
};
use ehd_core::neutral::{
    cross_validate, minimize_over_a_with_tol, validate_m_list, NeutralPoint, Solver, SweepResult,
    DEFAULT_A_TOL,
};
use ehd_core::secular::{secular_function, solve_ra};
use ehd_core::{Error, FlowParams};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::args::*;
use crate::output::{self, emit, opt, round};
use crate::Failure;

fn core_err(module: &str, e: Error) -> Failure {
    match e {
        Error::InvalidWavenumber(_) | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
        _ => Failure::Numerical(format!("{module}: {e}")),
    }
}

fn flow(a: f64, m: f64) -> Result<FlowParams, Failure> {
    FlowParams::new(a, m).map_err(|e| core_err("params", e))
}

fn write(text: &str, out: &OutputArgs) -> Result<(), Failure> {
    emit(text, out.output.as_deref()).map_err(Failure::Io)
}

pub fn roots(args: &RootsArgs) -> Result<(), Failure> {
    let p = &args.point;
    let params = flow(p.a, p.m)?;
    let poly = build_charpoly(params, p.ra);
    let set = find_roots_with_tol(&poly, args.cluster_tol.unwrap_or(DEFAULT_CLUSTER_TOL))
        .map_err(|e| core_err("charpoly", e))?;
    let vieta = set.vieta(&poly);
    let hit = bifurcation_scan(params, p.ra);

    let text = match p.out.format {
        Format::Csv => {
            let mut s = String::from("re,im,multiplicity\n");
            for c in set.clusters() {
                writeln!(
                    s,
                    "{:.12},{:.12},{}",
                    c.center.re, c.center.im, c.multiplicity
                )
                .unwrap();
            }
            writeln!(
                s,
                "# vieta sum={:.3e} product={:.3e} conjugacy={:.3e} parity={:.3e}",
                vieta.sum, vieta.product, vieta.conjugacy, vieta.parity
            )
            .unwrap();
            match hit {
                None => s.push_str("# bifurcation none\n"),
                Some(h) => {
                    write!(s, "# bifurcation {}", h.surface.label()).unwrap();
                    if let Some(l) = h.double_root {
                        write!(s, " double_root={l:.6}").unwrap();
                    }
                    if let Some((q, dq)) = h.residuals {
                        write!(s, " residual_q={q:.3e} residual_dq={dq:.3e}").unwrap();
                    }
                    s.push('\n');
                }
            }
            s
        }
        Format::Json => {
            let roots: Vec<_> = set
                .clusters()
                .iter()
                .map(|c| json!({"re": c.center.re, "im": c.center.im, "multiplicity": c.multiplicity}))
                .collect();
            let bif = hit.map(|h| {
                json!({
                    "surface": h.surface.label(),
                    "double_root": h.double_root,
                    "residual_q": h.residuals.map(|r| r.0),
                    "residual_dq": h.residuals.map(|r| r.1),
                    "m_offset": h.m_offset,
                })
            });
            output::json(&json!({
                "a": p.a, "M": p.m, "Ra": p.ra,
                "roots": roots,
                "multiplicities": set.multiplicities(),
                "vieta": {"sum": vieta.sum, "product": vieta.product, "conjugacy": vieta.conjugacy, "parity": vieta.parity},
                "bifurcation": bif,
            }))
        }
    };
    write(&text, &p.out)
}

fn minimize(m: f64, bracket: &BracketArgs, solver: Solver) -> ehd_core::Result<NeutralPoint> {
    let tol = bracket.a_tol.unwrap_or(DEFAULT_A_TOL);
    minimize_over_a_with_tol(m, bracket.a_lo, bracket.a_hi, solver, tol)
}

pub fn critical(args: &CriticalArgs) -> Result<(), Failure> {
    let solver = args.solver.method.solver(args.solver.n);
    let point = match args.a {
        Some(a) => solver.solve(flow(a, args.m)?),
        None => {
            flow(args.bracket.a_lo, args.m)?;
            minimize(args.m, &args.bracket, solver)
        }
    }
    .map_err(|e| core_err("neutral", e))?;
    write(&output::points(&[point], args.out.format), &args.out)
}

fn plot_file(
    path: &Path,
    columns: &str,
    digits: usize,
    rows: impl Iterator<Item = (f64, f64)>,
) -> Result<(), Failure> {
    let mut s = format!("# {columns}\n");
    for (x, y) in rows {
        writeln!(s, "{x} {y:.digits$}").unwrap();
    }
    fs::write(path, s).map_err(Failure::Io)
}

fn with_suffix(prefix: &Path, suffix: &str) -> std::path::PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    s.into()
}

pub fn sweep(args: &SweepArgs) -> Result<(), Failure> {
    validate_m_list(&args.m).map_err(|e| core_err("neutral", e))?;
    flow(args.bracket.a_lo, 0.0)?;
    let solver = args.solver.method.solver(args.solver.n);
    let outcomes: Vec<_> = args
        .m
        .par_iter()
        .map(|&m| minimize(m, &args.bracket, solver))
        .collect();
    let result = SweepResult::from_outcomes(&args.m, outcomes);

    write(&output::points(&result.points, args.out.format), &args.out)?;
    if let Some(prefix) = &args.plot {
        plot_file(
            &with_suffix(prefix, ".ra.dat"),
            "M Ra_min",
            6,
            result.points.iter().map(|p| (p.m, p.ra)),
        )?;
        plot_file(
            &with_suffix(prefix, ".a.dat"),
            "M a_c",
            4,
            result.points.iter().map(|p| (p.m, p.a)),
        )?;
    }
    if !result.monotone {
        eprintln!("warning: Ra_min is not non-decreasing in M over the solved points");
    }
    if result.failures.is_empty() {
        return Ok(());
    }
    let msg: Vec<String> = result
        .failures
        .iter()
        .map(|f| format!("M={}: {}", f.m, f.error))
        .collect();
    Err(Failure::Numerical(format!("neutral: {}", msg.join("; "))))
}

pub fn secular(args: &PointArgs) -> Result<(), Failure> {
    let params = flow(args.a, args.m)?;
    let v = secular_function(params, args.ra).map_err(|e| core_err("secular", e))?;
    let text = match args.out.format {
        Format::Csv => format!(
            "a,M,Ra,value,log_scale,degenerate\n{:.4},{},{:.6},{:.12e},{:.6},{}\n",
            args.a, args.m, args.ra, v.value, v.log_scale, v.degenerate
        ),
        Format::Json => output::json(&json!({
            "a": round(args.a, 4), "M": args.m, "Ra": round(args.ra, 6),
            "value": v.value, "log_scale": v.log_scale, "degenerate": v.degenerate,
        })),
    };
    write(&text, &args.out)
}

pub fn solve_ra_cmd(args: &SolveRaArgs) -> Result<(), Failure> {
    let params = flow(args.a, args.m)?;
    let pts =
        solve_ra(params, args.ra_lo, args.ra_hi, args.step).map_err(|e| core_err("secular", e))?;
    write(&output::points(&pts, args.out.format), &args.out)
}

#[derive(Debug, Clone, Copy)]
struct PublishedRow {
    a: f64,
    m: f64,
    slp: f64,
    scp: f64,
}

const PUBLISHED: [PublishedRow; 9] = [
    PublishedRow {
        a: 3.117,
        m: 0.0,
        slp: 1734.120,
        scp: 1775.955,
    },
    PublishedRow {
        a: 3.117,
        m: 10.0,
        slp: 1734.154,
        scp: 1775.987,
    },
    PublishedRow {
        a: 3.117,
        m: 1000.0,
        slp: 2082.802,
        scp: 2100.935,
    },
    PublishedRow {
        a: 1.5,
        m: 0.0,
        slp: 3116.286,
        scp: 31199.286,
    },
    PublishedRow {
        a: 1.5,
        m: 5.0,
        slp: 3116.381,
        scp: 3199.289,
    },
    PublishedRow {
        a: 10.0,
        m: 0.0,
        slp: 11409.157,
        scp: 14909.559,
    },
    PublishedRow {
        a: 10.0,
        m: 100.0,
        slp: 14414.05,
        scp: 14419.963,
    },
    PublishedRow {
        a: 10.0,
        m: 500.0,
        slp: 14531.694,
        scp: 14994.747,
    },
    PublishedRow {
        a: 20.0,
        m: 0.0,
        slp: 166779.036,
        scp: 182878.881,
    },
];

/// Printed values further than this from the oracle are flagged.
pub const TABLE1_FLAG_TOL: f64 = 0.05;
pub const TABLE1_SLP_N: usize = 6;
pub const TABLE1_SCP_N: usize = 11;
pub const TABLE1_ORACLE_GRID: usize = 2000;

#[derive(Debug, Serialize)]
struct Table1Row {
    a: f64,
    #[serde(rename = "M")]
    m: f64,
    #[serde(rename = "Ra_SLP")]
    ra_slp: Option<f64>,
    #[serde(rename = "Ra_SCP")]
    ra_scp: Option<f64>,
    #[serde(rename = "Ra_oracle")]
    ra_oracle: Option<f64>,
    #[serde(rename = "printed_SLP")]
    printed_slp: f64,
    #[serde(rename = "printed_SCP")]
    printed_scp: f64,
    /// Relative deviation of the printed values from the oracle, in percent.
    #[serde(rename = "dev_SLP_pct")]
    dev_slp: Option<f64>,
    #[serde(rename = "dev_SCP_pct")]
    dev_scp: Option<f64>,
    flag: String,
}

fn table1_row(row: PublishedRow) -> Table1Row {
    let mut errors = Vec::new();
    let mut run = |label: &str, solver: Solver| match FlowParams::new(row.a, row.m)
        .and_then(|p| solver.solve(p))
    {
        Ok(p) => Some(round(p.ra, 6)),
        Err(e) => {
            errors.push(format!("{label}: {e}"));
            None
        }
    };
    let ra_slp = run("SLP", Solver::legendre(TABLE1_SLP_N));
    let ra_scp = run("SCP", Solver::chebyshev(TABLE1_SCP_N));
    let ra_oracle = run("oracle", Solver::fd(TABLE1_ORACLE_GRID));
    let dev = |printed: f64| ra_oracle.map(|o| round(100.0 * (printed - o) / o, 2));
    let (dev_slp, dev_scp) = (dev(row.slp), dev(row.scp));

    let mut flags: Vec<String> = Vec::new();
    for (label, d) in [("SLP", dev_slp), ("SCP", dev_scp)] {
        if d.is_some_and(|d| d.abs() > 100.0 * TABLE1_FLAG_TOL) {
            flags.push(label.into());
        }
    }
    flags.extend(errors.into_iter().map(|e| format!("error {e}")));
    Table1Row {
        a: row.a,
        m: row.m,
        ra_slp,
        ra_scp,
        ra_oracle,
        printed_slp: row.slp,
        printed_scp: row.scp,
        dev_slp,
        dev_scp,
        flag: flags.join(" "),
    }
}

pub fn table1(args: &OutputArgs) -> Result<(), Failure> {
    let rows: Vec<Table1Row> = PUBLISHED.par_iter().map(|&r| table1_row(r)).collect();
    let text = match args.format {
        Format::Csv => {
            let mut s =
                String::from("a,M,Ra_SLP,Ra_SCP,Ra_oracle,printed_SLP,printed_SCP,dev_SLP_pct,dev_SCP_pct,flag\n");
            for r in &rows {
                writeln!(
                    s,
                    "{:.4},{},{},{},{},{:.3},{:.3},{},{},{}",
                    r.a,
                    r.m,
                    opt(r.ra_slp, 6),
                    opt(r.ra_scp, 6),
                    opt(r.ra_oracle, 6),
                    r.printed_slp,
                    r.printed_scp,
                    opt(r.dev_slp, 2),
                    opt(r.dev_scp, 2),
                    r.flag
                )
                .unwrap();
            }
            s
        }
        Format::Json => output::json(&rows),
    };
    write(&text, args)
}

pub fn validate(args: &ValidateArgs) -> Result<(), Failure> {
    let params = flow(args.a, args.m)?;
    let cv = cross_validate(params).map_err(|e| core_err("neutral", e))?;
    let ra = |r: &ehd_core::Result<NeutralPoint>| match r {
        Ok(p) => format!("{:.6}", p.ra),
        Err(e) => format!("error: {e}"),
    };
    let rel = |x: Option<f64>| x.map(|v| format!("{v:.3e}")).unwrap_or_default();
    let mut rows: Vec<(&str, String)> = vec![
        ("Ra_secular", ra(&cv.secular)),
        ("Ra_spectral", ra(&cv.spectral)),
        ("Ra_oracle", ra(&cv.oracle)),
        ("rel_secular_spectral", rel(cv.secular_vs_spectral)),
        ("rel_secular_oracle", rel(cv.secular_vs_oracle)),
        ("rel_spectral_oracle", rel(cv.spectral_vs_oracle)),
        ("false_secular", cv.false_secular.to_string()),
        ("s0_Ra", format!("{:.6}", cv.s0.ra)),
        ("s0_det_modulus", format!("{:.3e}", cv.s0.det_modulus)),
        ("s0_multiple_root", cv.s0.multiple_root.to_string()),
        ("s0_zero_nearby", cv.s0.zero_nearby.to_string()),
        (
            "bifurcation",
            cv.bifurcation
                .map_or("none".into(), |h| h.surface.label().to_string()),
        ),
    ];
    if let Some(ns) = cv.ns1 {
        rows.push(("ns1_Ra", format!("{:.6}", ns.ra)));
        rows.push(("ns1_det_modulus", format!("{:.3e}", ns.det_modulus)));
        rows.push(("ns1_zero_nearby", ns.zero_nearby.to_string()));
    }
    let text = match args.out.format {
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            for (k, v) in &rows {
                writeln!(s, "{k},{v}").unwrap();
            }
            s
        }
        Format::Json => {
            let map: serde_json::Map<String, serde_json::Value> = rows
                .into_iter()
                .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
                .collect();
            output::json(&map)
        }
    };
    write(&text, &args.out)
}
