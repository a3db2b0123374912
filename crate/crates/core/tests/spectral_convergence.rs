use ehd_core::spectral::{assemble, critical_ra, strong_residual, BasisKind};
use ehd_core::FlowParams;
use proptest::prelude::*;

fn ra(a: f64, m: f64, n: usize, kind: BasisKind) -> f64 {
    critical_ra(FlowParams::new(a, m).unwrap(), n, kind)
        .unwrap()
        .ra_min
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bases_agree_at_convergence(a in 1.0f64..10.0, m in 0.0f64..1000.0) {
        let l = ra(a, m, 24, BasisKind::ShiftedLegendre);
        let c = ra(a, m, 24, BasisKind::ShiftedChebyshev);
        prop_assert!((l - c).abs() <= 1e-3 * l, "a={} M={}: {} vs {}", a, m, l, c);
    }
}

#[test]
fn classical_value_at_sixteen_modes() {
    let r = ra(3.117, 0.0, 16, BasisKind::ShiftedLegendre);
    assert!((r - 1707.76).abs() <= 0.5, "{r}");
}

#[test]
fn six_modes_bracket_the_tabulated_value() {
    let r0 = ra(3.117, 0.0, 6, BasisKind::ShiftedLegendre);
    let r10 = ra(3.117, 10.0, 6, BasisKind::ShiftedLegendre);
    assert!((1707.0..=1760.0).contains(&r0), "{r0}");
    assert!(r10 > r0 && r10 - r0 < 1e-3 * r0, "{r0} -> {r10}");
}

#[test]
fn small_m_raises_the_threshold_only_slightly() {
    let r0 = ra(3.117, 0.0, 16, BasisKind::ShiftedLegendre);
    let r10 = ra(3.117, 10.0, 16, BasisKind::ShiftedLegendre);
    assert!(r10 > r0 && r10 - r0 < 1e-3 * r0);
}

#[test]
fn threshold_grows_with_m() {
    let r = |m| ra(3.117, m, 24, BasisKind::ShiftedLegendre);
    let (r0, r100, r1000) = (r(0.0), r(100.0), r(1000.0));
    assert!(r1000 > r100 && r100 > r0, "{r0} {r100} {r1000}");
}

#[test]
fn truncation_error_shrinks_and_is_tiny_by_24_modes() {
    for (a, m) in [
        (1.0, 0.0),
        (3.117, 0.0),
        (3.117, 1000.0),
        (5.0, 100.0),
        (10.0, 0.0),
        (10.0, 500.0),
    ] {
        let gaps: Vec<f64> = [8, 16, 24]
            .iter()
            .map(|&n| {
                let coarse = ra(a, m, n, BasisKind::ShiftedLegendre);
                let fine = ra(a, m, n + 8, BasisKind::ShiftedLegendre);
                (coarse - fine).abs() / fine
            })
            .collect();
        assert!(gaps[1] <= gaps[0], "a={a} M={m}: {gaps:?}");
        assert!(gaps[2] <= 1e-6, "a={a} M={m}: {gaps:?}");
    }
}

#[test]
fn eigenfunction_satisfies_the_sixth_order_equation() {
    for (a, m) in [(3.117, 0.0), (3.117, 100.0), (2.0, 10.0)] {
        let sys = assemble(
            FlowParams::new(a, m).unwrap(),
            24,
            BasisKind::ShiftedLegendre,
        )
        .unwrap();
        let r = ehd_core::spectral::smallest_eigen(&sys).unwrap();
        let res = strong_residual(&sys, r.ra_min, 50).unwrap();
        assert!(res <= 1e-6, "a={a} M={m}: {res:e}");
    }
}
