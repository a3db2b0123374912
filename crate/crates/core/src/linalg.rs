//! Small dense complex determinants and a banded real LU solver.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::{Error, Result};

/// Determinant split as `mantissa · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledDet {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

/// Determinant of a row-major `n × n` complex matrix.
///
/// Each row is first divided by its largest modulus (accumulated into
/// `log_scale`); the mantissa is then the determinant of the row-equilibrated
/// matrix, computed by Gaussian elimination with partial pivoting.
pub fn scaled_determinant(mut m: Vec<Complex64>, n: usize) -> ScaledDet {
    assert_eq!(m.len(), n * n);
    let mut log_scale = 0.0;
    for row in m.chunks_mut(n) {
        let s = row.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if s > 0.0 {
            row.iter_mut().for_each(|z| *z /= s);
            log_scale += s.ln();
        }
    }

    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| m[i * n + k].norm().total_cmp(&m[j * n + k].norm()))
            .unwrap();
        let pivot = m[p * n + k];
        if pivot.norm() == 0.0 {
            return ScaledDet {
                mantissa: Complex64::new(0.0, 0.0),
                log_scale,
            };
        }
        if p != k {
            for j in 0..n {
                m.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        det *= pivot;
        for i in (k + 1)..n {
            let f = m[i * n + k] / pivot;
            if f.norm() == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                let v = m[k * n + j];
                m[i * n + j] -= f * v;
            }
        }
    }
    ScaledDet {
        mantissa: det,
        log_scale,
    }
}

/// Square banded matrix with `kl` sub- and `ku` super-diagonals, stored with
/// room for the fill-in that partial pivoting produces.
#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![0.0; n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl);
        i * self.width + (j + self.kl - i)
    }

    /// Add `v` to entry `(i, j)`; the entry must lie inside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band"
        );
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            0.0
        } else {
            self.data[self.slot(i, j)]
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku + 1).min(self.n);
                (lo..hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// LU factorization with partial pivoting, consuming the matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let kl = self.kl;
        let reach = self.ku + self.kl;
        let mut piv = vec![0usize; n];
        let scale = self.data.iter().map(|v| v.abs()).fold(0.0, f64::max);
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let p = (k..=last)
                .max_by(|&i, &j| self.get(i, k).abs().total_cmp(&self.get(j, k).abs()))
                .unwrap();
            piv[k] = p;
            let pivot = self.get(p, k);
            if pivot.abs() <= f64::EPSILON * scale * 1e-4 {
                return Err(Error::SingularReduction(f64::INFINITY));
            }
            let cmax = (k + reach).min(n - 1);
            if p != k {
                for j in k..=cmax {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
            }
            for i in (k + 1)..=last {
                let si = self.slot(i, k);
                let f = self.data[si] / pivot;
                self.data[si] = f;
                if f == 0.0 {
                    continue;
                }
                for j in (k + 1)..=cmax {
                    let v = self.data[self.slot(k, j)];
                    let s = self.slot(i, j);
                    self.data[s] -= f * v;
                }
            }
        }
        Ok(BandLu { m: self, piv })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    m: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    #[allow(clippy::needless_range_loop)]
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.m.n;
        let kl = self.m.kl;
        let reach = self.m.ku + self.m.kl;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in (k + 1)..=(k + kl).min(n - 1) {
                x[i] -= self.m.data[self.m.slot(i, k)] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in (k + 1)..=(k + reach).min(n - 1) {
                s -= self.m.data[self.m.slot(k, j)] * x[j];
            }
            x[k] = s / self.m.data[self.m.slot(k, k)];
        }
        x
    }
}
