use ehd_core::spectral::{assemble, basis_beta, basis_phi, BasisKind};
use ehd_core::FlowParams;

const KINDS: [BasisKind; 2] = [BasisKind::ShiftedLegendre, BasisKind::ShiftedChebyshev];

#[test]
fn every_member_meets_its_endpoint_conditions() {
    for kind in KINDS {
        for i in 1..=30 {
            let phi = basis_phi(i, kind);
            let beta = basis_beta(i, kind);
            let dbeta = beta.derivative();
            for z in [-0.5, 0.5] {
                assert!(
                    phi.eval(z).abs() <= 1e-14,
                    "{kind:?} phi_{i}({z}) = {:e}",
                    phi.eval(z)
                );
                assert!(
                    beta.eval(z).abs() <= 1e-14,
                    "{kind:?} beta_{i}({z}) = {:e}",
                    beta.eval(z)
                );
                assert!(
                    dbeta.eval(z).abs() <= 1e-14,
                    "{kind:?} beta_{i}'({z}) = {:e}",
                    dbeta.eval(z)
                );
            }
        }
    }
}

#[test]
fn members_are_linearly_independent_by_degree() {
    for kind in KINDS {
        for i in 1..=30 {
            assert_eq!(basis_phi(i, kind).degree(), i + 1);
            assert_eq!(basis_beta(i, kind).degree(), i + 3);
        }
    }
}

#[test]
fn legendre_blocks_are_banded() {
    for (a, m) in [(3.117, 0.0), (3.117, 1000.0), (10.0, 100.0)] {
        let sys = assemble(
            FlowParams::new(a, m).unwrap(),
            20,
            BasisKind::ShiftedLegendre,
        )
        .unwrap();
        let blocks = [
            sys.a_block(0, 0),
            sys.a_block(0, 1),
            sys.a_block(1, 0),
            sys.a_block(1, 1),
            sys.b_block(0, 1),
        ];
        for (b, block) in blocks.iter().enumerate() {
            let scale = block.amax();
            if scale == 0.0 {
                continue;
            }
            for k in 0..sys.n {
                for i in 0..sys.n {
                    if k.abs_diff(i) > 4 {
                        assert!(
                            block[(k, i)].abs() <= 1e-12 * scale,
                            "block {b} ({k},{i}) = {:e}",
                            block[(k, i)]
                        );
                    }
                }
            }
        }
    }
}
