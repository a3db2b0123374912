//! Dense real polynomials in the monomial basis and a simultaneous-iteration
//! root finder.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::{Error, Result};

/// Real polynomial, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| k as f64 * c)
                .collect(),
        )
    }

    /// `p^{(k)}(z) / k!`, the k-th Taylor coefficient at `z`.
    pub fn taylor_coeff(&self, k: usize, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate().skip(k).rev() {
            acc = acc * z + c * binomial(i, k);
        }
        acc
    }

    /// Magnitude bound for `taylor_coeff(k, z)` built from absolute values;
    /// the natural scale for rounding error in that evaluation.
    pub fn taylor_scale(&self, k: usize, z: Complex64) -> f64 {
        let r = z.norm();
        let mut acc = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate().skip(k).rev() {
            acc = acc * r + c.abs() * binomial(i, k);
        }
        acc
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// All complex roots of a polynomial by Aberth–Ehrlich iteration.
///
/// Roots of multiplicity `m` are only resolved to about `ε^{1/m}`; callers
/// cluster and certify them separately.
pub fn aberth_roots(p: &Poly, max_iter: usize) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let lead = p.coeffs()[n];
    if n == 0 || lead == 0.0 {
        return Err(Error::InvalidArgument(
            "polynomial must have positive degree and nonzero leading coefficient",
        ));
    }
    let dp = p.derivative();

    // Fujiwara-style radius, scaled down so the circle straddles the roots.
    let radius = (0..n)
        .map(|k| (p.coeffs()[k] / lead).abs().powf(1.0 / (n - k) as f64))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut frozen = vec![false; n];
    for _ in 0..max_iter {
        let mut moved = false;
        for k in 0..n {
            if frozen[k] {
                continue;
            }
            let pk = p.eval_complex(z[k]);
            if pk == Complex64::new(0.0, 0.0) {
                frozen[k] = true;
                continue;
            }
            let ratio = pk / dp.eval_complex(z[k]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                frozen[k] = true;
            } else {
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(Error::NonConvergence {
            what: "Aberth iteration",
            residual: f64::INFINITY,
        });
    }
    Ok(z)
}

/// Newton refinement that only accepts steps which reduce `|p|`.
pub fn polish(p: &Poly, z: Complex64, steps: usize) -> Complex64 {
    let dp = p.derivative();
    let mut best = z;
    let mut best_res = p.eval_complex(z).norm();
    for _ in 0..steps {
        if best_res == 0.0 {
            break;
        }
        let d = dp.eval_complex(best);
        if d.norm() == 0.0 {
            break;
        }
        let cand = best - p.eval_complex(best) / d;
        let res = p.eval_complex(cand).norm();
        if res < best_res {
            best = cand;
            best_res = res;
        } else {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_coefficients_match_derivatives() {
        // (x - 2)^3 = x^3 - 6x^2 + 12x - 8
        let p = Poly::new(vec![-8.0, 12.0, -6.0, 1.0]);
        let z = Complex64::new(2.0, 0.0);
        assert_eq!(p.taylor_coeff(0, z).norm(), 0.0);
        assert_eq!(p.taylor_coeff(1, z).norm(), 0.0);
        assert_eq!(p.taylor_coeff(2, z).norm(), 0.0);
        assert_eq!(p.taylor_coeff(3, z), Complex64::new(1.0, 0.0));
        let x = Complex64::new(0.3, -1.1);
        let d = p.derivative().eval_complex(x);
        assert!((p.taylor_coeff(1, x) - d).norm() < 1e-13);
        let d2 = p.derivative().derivative().eval_complex(x) / 2.0;
        assert!((p.taylor_coeff(2, x) - d2).norm() < 1e-13);
    }

    #[test]
    fn aberth_finds_roots_of_unity() {
        let p = Poly::new(vec![-1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let roots = aberth_roots(&p, 200).unwrap();
        for r in &roots {
            assert!((r.norm() - 1.0).abs() < 1e-13);
            assert!(p.eval_complex(*r).norm() < 1e-13);
        }
    }

    #[test]
    fn aberth_rejects_constant() {
        assert!(aberth_roots(&Poly::new(vec![3.0]), 10).is_err());
    }
}
