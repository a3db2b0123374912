//! Finite-difference reference solution.
//!
//! The sixth-order problem is written as three coupled second-order
//! equations on a uniform grid `z_j = −½ + j/n`:
//!
//! ```text
//! (D² − a²) F = U,   (D² − a²) U = W,   (D² − a²) W + M a² DF = −Ra a² F
//! ```
//!
//! with `F = U = 0` and a second-order one-sided `DU = 0` at both walls; `W`
//! is free at the walls. Central differences throughout, unknowns interleaved
//! per node so the matrix is banded. The smallest positive `Ra` comes from
//! subspace iteration on `A⁻¹B`, and grids `n` and `2n` are combined by
//! Richardson extrapolation. Nothing here is shared with [`crate::spectral`]
//! or [`crate::secular`].

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::DMatrix;

use crate::linalg::BandMatrix;
use crate::{Error, FlowParams, Result};

pub const MIN_GRID: usize = 200;
/// Largest admissible gap between the extrapolated and fine-grid values.
pub const RICHARDSON_TOL: f64 = 5e-3;

const BLOCK: usize = 8;
const MAX_SWEEPS: usize = 400;
/// Ritz values stagnate near 1e-11 relative on fine grids (the operator
/// condition grows like n⁶).
const RITZ_TOL: f64 = 1e-10;
const REALITY_TOL: f64 = 1e-8;

/// Sparse right-hand side: `B x` only has entries in the `W` equations.
fn apply_b(x: &[f64], n: usize, a2h2: f64) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for j in 1..n {
        out[3 * j + 2] = -a2h2 * x[3 * j];
    }
    out
}

fn build(params: FlowParams, n: usize) -> BandMatrix {
    let a = params.a();
    let a2 = a * a;
    let h = 1.0 / n as f64;
    let dim = 3 * (n + 1);
    let (kl, ku) = (7, 5);
    let mut m = BandMatrix::zeros(dim, kl, ku);
    let f = |j: usize| 3 * j;
    let u = |j: usize| 3 * j + 1;
    let w = |j: usize| 3 * j + 2;
    // Second-difference rows are multiplied by h².
    let diag = -2.0 - a2 * h * h;
    let adv = params.m() * a2 * h / 2.0;

    for j in [0, n] {
        m.add(f(j), f(j), 1.0);
        m.add(u(j), u(j), 1.0);
    }
    // DU = 0: (−3U_0 + 4U_1 − U_2)/(2h) and its mirror.
    m.add(w(0), u(0), -3.0);
    m.add(w(0), u(1), 4.0);
    m.add(w(0), u(2), -1.0);
    m.add(w(n), u(n), 3.0);
    m.add(w(n), u(n - 1), -4.0);
    m.add(w(n), u(n - 2), 1.0);

    for j in 1..n {
        m.add(f(j), f(j - 1), 1.0);
        m.add(f(j), f(j), diag);
        m.add(f(j), f(j + 1), 1.0);
        m.add(f(j), u(j), -h * h);

        m.add(u(j), u(j - 1), 1.0);
        m.add(u(j), u(j), diag);
        m.add(u(j), u(j + 1), 1.0);
        m.add(u(j), w(j), -h * h);

        m.add(w(j), w(j - 1), 1.0);
        m.add(w(j), w(j), diag);
        m.add(w(j), w(j + 1), 1.0);
        m.add(w(j), f(j + 1), adv);
        m.add(w(j), f(j - 1), -adv);
    }
    m
}

fn orthonormalize(vs: &mut [Vec<f64>]) {
    // Modified Gram–Schmidt, twice for stability.
    for _ in 0..2 {
        for i in 0..vs.len() {
            for j in 0..i {
                let d: f64 = vs[i].iter().zip(&vs[j]).map(|(x, y)| x * y).sum();
                let (head, tail) = vs.split_at_mut(i);
                tail[0]
                    .iter_mut()
                    .zip(&head[j])
                    .for_each(|(x, y)| *x -= d * y);
            }
            let norm = vs[i].iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 0.0 {
                vs[i].iter_mut().for_each(|x| *x /= norm);
            }
        }
    }
}

/// Smallest positive `Ra` on a single grid with `n` intervals.
pub fn fd_eigenvalue(params: FlowParams, n: usize) -> Result<f64> {
    if n < MIN_GRID {
        return Err(Error::InvalidArgument(
            "finite-difference grid needs at least 200 intervals",
        ));
    }
    let h = 1.0 / n as f64;
    let a2h2 = params.a() * params.a() * h * h;
    let lu = build(params, n).factor()?;
    let dim = 3 * (n + 1);

    let mut basis: Vec<Vec<f64>> = (0..BLOCK)
        .map(|k| {
            (0..dim)
                .map(|i| {
                    let z = (i / 3) as f64 * h;
                    let mode = (k + 1) as f64 * core::f64::consts::PI * z;
                    if k % 2 == 0 {
                        mode.sin()
                    } else {
                        (mode + 0.3).cos() * z * (1.0 - z)
                    }
                })
                .collect()
        })
        .collect();
    orthonormalize(&mut basis);

    let mut last = f64::NAN;
    for sweep in 0..MAX_SWEEPS {
        let images: Vec<Vec<f64>> = basis
            .iter()
            .map(|x| lu.solve(&apply_b(x, n, a2h2)))
            .collect();
        // Rayleigh–Ritz on span(basis): H = Xᵀ T X
        let mut hm = DMatrix::zeros(BLOCK, BLOCK);
        for i in 0..BLOCK {
            for j in 0..BLOCK {
                hm[(i, j)] = basis[i]
                    .iter()
                    .zip(&images[j])
                    .map(|(x, y)| x * y)
                    .sum::<f64>();
            }
        }
        let ritz = hm.complex_eigenvalues();
        // Eigenvalues of A⁻¹B are 1/Ra; the largest positive real one wins.
        let best = ritz
            .iter()
            .filter(|z| z.re > 0.0 && z.im.abs() <= REALITY_TOL * z.re)
            .map(|z| z.re)
            .fold(0.0, f64::max);
        let ra = if best > 0.0 { 1.0 / best } else { f64::NAN };
        if sweep > 3 && ra.is_finite() && (ra - last).abs() <= RITZ_TOL * ra {
            return Ok(ra);
        }
        last = ra;
        basis = images;
        orthonormalize(&mut basis);
    }
    Err(Error::NonConvergence {
        what: "finite-difference subspace iteration",
        residual: last,
    })
}

/// Richardson-extrapolated oracle value from grids `n` and `2n`.
pub fn fd_oracle(params: FlowParams, n: usize) -> Result<f64> {
    let coarse = fd_eigenvalue(params, n)?;
    let fine = fd_eigenvalue(params, 2 * n)?;
    let extrapolated = (4.0 * fine - coarse) / 3.0;
    let gap = (extrapolated - fine).abs();
    if gap > RICHARDSON_TOL * extrapolated.abs() {
        return Err(Error::NonConvergence {
            what: "Richardson extrapolation",
            residual: gap,
        });
    }
    Ok(extrapolated)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_too_small_is_rejected() {
        let p = FlowParams::new(3.117, 0.0).unwrap();
        assert!(fd_eigenvalue(p, 100).is_err());
    }

    #[test]
    fn second_order_convergence() {
        let p = FlowParams::new(3.117, 0.0).unwrap();
        let r200 = fd_eigenvalue(p, 200).unwrap();
        let r400 = fd_eigenvalue(p, 400).unwrap();
        let r800 = fd_eigenvalue(p, 800).unwrap();
        let ratio = (r200 - r400) / (r400 - r800);
        assert!((ratio - 4.0).abs() < 0.2, "ratio {ratio}");
    }
}
