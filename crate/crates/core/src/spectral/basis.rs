//! Expansion functions that satisfy the boundary conditions by
//! construction.
//!
//! Polynomials are stored as coefficient series in the classical family on
//! `x = 2z ∈ [−1, 1]`, so endpoint values and derivatives stay exact at high
//! degree where monomial coefficients would cancel catastrophically.
//!
//! Index conventions (all indices start at 1):
//!
//! | basis     | `φ_i`                         | `β_i`                                                     |
//! |-----------|-------------------------------|-----------------------------------------------------------|
//! | Legendre  | `∫_{−½}^{z} L*_i`             | `∫_{−½}^{z}∫_{−½}^{s} L*_{i+1}`                           |
//! | Chebyshev | `T*_{i−1} − T*_{i+1}`         | `T*_{i−1} − 2(i+1)/(i+2)·T*_{i+1} + i/(i+2)·T*_{i+3}`     |
//!
//! The double integral of `L*_1` does not vanish at `z = ½`, hence the shift
//! for the Legendre `β`. Starting the Chebyshev families at `T*_0` keeps the
//! lowest even mode in the trial space.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    ShiftedLegendre,
    ShiftedChebyshev,
}

impl BasisKind {
    pub fn label(self) -> &'static str {
        match self {
            BasisKind::ShiftedLegendre => "shifted-legendre",
            BasisKind::ShiftedChebyshev => "shifted-chebyshev",
        }
    }
}

/// `Σ c_k Q_k(2z)` with `Q = P` (Legendre) or `T` (Chebyshev).
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    kind: BasisKind,
    coeffs: Vec<f64>,
}

impl Series {
    pub fn new(kind: BasisKind, coeffs: Vec<f64>) -> Self {
        Self { kind, coeffs }
    }

    /// The single shifted polynomial `Q_k(2z)`.
    pub fn unit(kind: BasisKind, k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self { kind, coeffs: c }
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0)
    }

    pub fn add_scaled(&self, other: &Series, s: f64) -> Series {
        assert_eq!(self.kind, other.kind);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| {
                self.coeffs.get(k).copied().unwrap_or(0.0)
                    + s * other.coeffs.get(k).copied().unwrap_or(0.0)
            })
            .collect();
        Series {
            kind: self.kind,
            coeffs,
        }
    }

    pub fn scale(&self, s: f64) -> Series {
        Series {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Value at `z ∈ [−½, ½]`.
    pub fn eval(&self, z: f64) -> f64 {
        let x = 2.0 * z;
        match self.kind {
            BasisKind::ShiftedLegendre => {
                // Clenshaw with P_{k+1} = ((2k+1) x P_k − k P_{k−1}) / (k+1)
                let mut b1 = 0.0;
                let mut b2 = 0.0;
                for k in (0..self.coeffs.len()).rev() {
                    let kf = k as f64;
                    let alpha = (2.0 * kf + 1.0) / (kf + 1.0) * x;
                    let beta = -(kf + 1.0) / (kf + 2.0);
                    let b0 = self.coeffs[k] + alpha * b1 + beta * b2;
                    b2 = b1;
                    b1 = b0;
                }
                b1
            }
            BasisKind::ShiftedChebyshev => {
                let mut b1 = 0.0;
                let mut b2 = 0.0;
                for k in (1..self.coeffs.len()).rev() {
                    let b0 = self.coeffs[k] + 2.0 * x * b1 - b2;
                    b2 = b1;
                    b1 = b0;
                }
                self.coeffs.first().copied().unwrap_or(0.0) + x * b1 - b2
            }
        }
    }

    /// `d/dz`, exact coefficient recurrence.
    pub fn derivative(&self) -> Series {
        let n = self.coeffs.len();
        if n <= 1 {
            return Series {
                kind: self.kind,
                coeffs: vec![0.0],
            };
        }
        let c = &self.coeffs;
        let mut d = vec![0.0; n - 1];
        match self.kind {
            BasisKind::ShiftedLegendre => {
                // d_k = (2k+1) Σ_{j>k, j−k odd} c_j
                let mut odd_tail = [0.0f64; 2];
                for k in (0..n - 1).rev() {
                    odd_tail[(k + 1) % 2] += c[k + 1];
                    d[k] = (2 * k + 1) as f64 * odd_tail[(k + 1) % 2];
                }
            }
            BasisKind::ShiftedChebyshev => {
                // d_{k−1} = d_{k+1} + 2k c_k, then halve d_0
                let mut next = 0.0;
                let mut next2 = 0.0;
                for k in (1..n).rev() {
                    let v = next2 + 2.0 * k as f64 * c[k];
                    d[k - 1] = v;
                    next2 = next;
                    next = v;
                }
                d[0] *= 0.5;
            }
        }
        // chain rule for x = 2z
        d.iter_mut().for_each(|v| *v *= 2.0);
        Series {
            kind: self.kind,
            coeffs: d,
        }
    }

    /// `∫_{−½}^{z}` of a Legendre series.
    pub fn integral_from_left(&self) -> Series {
        assert_eq!(
            self.kind,
            BasisKind::ShiftedLegendre,
            "integration is only needed for Legendre"
        );
        let n = self.coeffs.len();
        let mut out = vec![0.0; n + 1];
        // ∫_{−1}^{x} P_k = (P_{k+1} − P_{k−1}) / (2k+1), k ≥ 1; ∫ P_0 = P_1 + P_0
        for (k, &ck) in self.coeffs.iter().enumerate() {
            if ck == 0.0 {
                continue;
            }
            if k == 0 {
                out[0] += ck;
                out[1] += ck;
            } else {
                let s = ck / (2 * k + 1) as f64;
                out[k + 1] += s;
                out[k - 1] -= s;
            }
        }
        // dz = dx / 2
        out.iter_mut().for_each(|v| *v *= 0.5);
        Series {
            kind: self.kind,
            coeffs: out,
        }
    }

    /// `(D² − a²)` applied to the series.
    pub fn helmholtz(&self, a: f64) -> Series {
        self.derivative().derivative().add_scaled(self, -a * a)
    }
}

/// Trial function `φ_i` for `F`; vanishes at `z = ±½`.
pub fn basis_phi(i: usize, kind: BasisKind) -> Series {
    assert!(i >= 1, "basis indices start at 1");
    match kind {
        BasisKind::ShiftedLegendre => Series::unit(kind, i).integral_from_left(),
        BasisKind::ShiftedChebyshev => {
            Series::unit(kind, i - 1).add_scaled(&Series::unit(kind, i + 1), -1.0)
        }
    }
}

/// Trial function `β_i` for `U`; value and first derivative vanish at
/// `z = ±½`.
pub fn basis_beta(i: usize, kind: BasisKind) -> Series {
    assert!(i >= 1, "basis indices start at 1");
    match kind {
        BasisKind::ShiftedLegendre => Series::unit(kind, i + 1)
            .integral_from_left()
            .integral_from_left(),
        // (i+2)·[T*_{i−1} − 2(i+1)/(i+2)·T*_{i+1} + i/(i+2)·T*_{i+3}]; the
        // integer form makes endpoint evaluation exact.
        BasisKind::ShiftedChebyshev => {
            let j = i as f64;
            Series::unit(kind, i - 1)
                .scale(j + 2.0)
                .add_scaled(&Series::unit(kind, i + 1), -2.0 * (j + 1.0))
                .add_scaled(&Series::unit(kind, i + 3), j)
        }
    }
}

/// The Chebyshev combination with the literal index origin,
/// `T*_i − 2(i+2)/(i+3)·T*_{i+2} + (i+1)/(i+3)·T*_{i+4}`.
pub fn chebyshev_beta_printed(i: usize) -> Series {
    let k = BasisKind::ShiftedChebyshev;
    let j = i as f64;
    Series::unit(k, i)
        .add_scaled(&Series::unit(k, i + 2), -2.0 * (j + 2.0) / (j + 3.0))
        .add_scaled(&Series::unit(k, i + 4), (j + 1.0) / (j + 3.0))
}

/// Nodes and weights on `[−½, ½]` such that `Σ w_k f(z_k) = ∫ f w dz`
/// exactly for polynomials of degree `< 2n`, with `w ≡ 1` (Legendre) or
/// `w = 1/√(¼ − z²)` (Chebyshev).
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(kind: BasisKind, n: usize) -> Self {
        match kind {
            BasisKind::ShiftedLegendre => gauss_legendre(n),
            BasisKind::ShiftedChebyshev => {
                // ∫ f(z) dz / √(¼ − z²) = ∫ f(x/2) dx / √(1 − x²)
                let nodes = (1..=n)
                    .map(|k| 0.5 * (PI * (2 * k - 1) as f64 / (2 * n) as f64).cos())
                    .collect();
                Quadrature {
                    nodes,
                    weights: vec![PI / n as f64; n],
                }
            }
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }
}

fn gauss_legendre(n: usize) -> Quadrature {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by recurrence
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                x
            } else {
                p1
            };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        nodes[i] = 0.5 * x;
        weights[i] = 0.5 * 2.0 / ((1.0 - x * x) * dp * dp);
    }
    Quadrature { nodes, weights }
}
