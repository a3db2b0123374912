//! Galerkin discretization of the split problem
//!
//! ```text
//! (D² − a²)² U = −Ra a² F − M a² DF,   (D² − a²) F = U,   F = U = DU = 0 at z = ±½
//! ```
//!
//! with `U = Σ U_i β_i`, `F = Σ F_i φ_i`, the first equation tested against
//! `β_k` and the second against `φ_k`.

mod basis;

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub use basis::{basis_beta, basis_phi, chebyshev_beta_printed, BasisKind, Quadrature, Series};

use crate::{Error, FlowParams, Result};

/// Smallest truncation accepted by [`assemble`].
pub const MIN_TRUNCATION: usize = 4;
/// Extra modes used by the spurious-eigenvalue filter.
pub const FILTER_EXTRA_MODES: usize = 4;
/// Relative movement between `N` and `N + 4` above which an eigenvalue is
/// discarded as spurious.
pub const FILTER_TOL: f64 = 0.01;
const SINGULAR_COND: f64 = 1e12;
const REALITY_TOL: f64 = 1e-8;

/// Assembled matrices of `A x = Ra B x`, unknowns ordered
/// `(U_1..U_N, F_1..F_N)`.
///
/// Rows `1..N`: `⟨(D²−a²)²U + Ma²DF, β_k⟩ = −Ra a² ⟨F, β_k⟩`.
/// Rows `N+1..2N`: `⟨(D²−a²)F − U, φ_k⟩ = 0`.
#[derive(Debug, Clone)]
pub struct SpectralSystem {
    pub n: usize,
    pub basis: BasisKind,
    pub params: FlowParams,
    pub a_mat: DMatrix<f64>,
    pub b_mat: DMatrix<f64>,
}

impl SpectralSystem {
    /// Block `(row_block, col_block)` of `A`, each index 0 (U / β rows) or
    /// 1 (F / φ rows).
    pub fn a_block(&self, row: usize, col: usize) -> DMatrix<f64> {
        self.a_mat
            .view((row * self.n, col * self.n), (self.n, self.n))
            .into_owned()
    }

    pub fn b_block(&self, row: usize, col: usize) -> DMatrix<f64> {
        self.b_mat
            .view((row * self.n, col * self.n), (self.n, self.n))
            .into_owned()
    }
}

pub fn assemble(params: FlowParams, n: usize, basis: BasisKind) -> Result<SpectralSystem> {
    if n < MIN_TRUNCATION {
        return Err(Error::InvalidArgument("truncation N must be at least 4"));
    }
    let a = params.a();
    let a2 = a * a;
    let phi: Vec<Series> = (1..=n).map(|i| basis_phi(i, basis)).collect();
    let beta: Vec<Series> = (1..=n).map(|i| basis_beta(i, basis)).collect();

    // Highest integrand degree is deg β_N + deg β_N ≤ 2N + 6.
    let quad = Quadrature::new(basis, n + 6);
    let sample = |s: &Series| -> Vec<f64> { quad.nodes.iter().map(|&z| s.eval(z)).collect() };

    let beta_v: Vec<Vec<f64>> = beta.iter().map(&sample).collect();
    let phi_v: Vec<Vec<f64>> = phi.iter().map(&sample).collect();
    let biharm_beta_v: Vec<Vec<f64>> = beta
        .iter()
        .map(|b| sample(&b.helmholtz(a).helmholtz(a)))
        .collect();
    let dphi_v: Vec<Vec<f64>> = phi.iter().map(|p| sample(&p.derivative())).collect();
    let helm_phi_v: Vec<Vec<f64>> = phi.iter().map(|p| sample(&p.helmholtz(a))).collect();

    let ip = |f: &[f64], g: &[f64]| -> f64 {
        quad.weights
            .iter()
            .zip(f.iter().zip(g))
            .map(|(w, (x, y))| w * x * y)
            .sum()
    };

    let mut a_mat = DMatrix::zeros(2 * n, 2 * n);
    let mut b_mat = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        for i in 0..n {
            a_mat[(k, i)] = ip(&biharm_beta_v[i], &beta_v[k]);
            a_mat[(k, n + i)] = params.m() * a2 * ip(&dphi_v[i], &beta_v[k]);
            b_mat[(k, n + i)] = -a2 * ip(&phi_v[i], &beta_v[k]);
            a_mat[(n + k, i)] = -ip(&beta_v[i], &phi_v[k]);
            a_mat[(n + k, n + i)] = ip(&helm_phi_v[i], &phi_v[k]);
        }
    }
    Ok(SpectralSystem {
        n,
        basis,
        params,
        a_mat,
        b_mat,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub ra_min: f64,
    /// All eigenvalues of the reduced problem at `N`, sorted by real part.
    pub spectrum: Vec<Complex64>,
    pub spurious_filtered: usize,
    pub n_used: usize,
    /// Relative distance from `ra_min` to the nearest eigenvalue at `N + 4`.
    pub movement: f64,
}

fn condition(m: &DMatrix<f64>) -> f64 {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// `K` and `P` of the reduced problem `K F = Ra P F`, after eliminating `U`
/// through the second block row `H U = G F`.
fn reduce(sys: &SpectralSystem) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let a_uu = sys.a_block(0, 0);
    let coupling = sys.a_block(0, 1);
    let h = -sys.a_block(1, 0);
    let g = sys.a_block(1, 1);
    let p = sys.b_block(0, 1);

    let cond_h = condition(&h);
    if !(cond_h <= SINGULAR_COND) {
        return Err(Error::SingularReduction(cond_h));
    }
    let u_of_f = h
        .lu()
        .solve(&g)
        .ok_or(Error::SingularReduction(f64::INFINITY))?;
    // A_UU U + C F = Ra P F
    let k = a_uu * u_of_f + coupling;
    Ok((k, p))
}

/// All eigenvalues `Ra` of the reduced problem.
pub fn spectrum(sys: &SpectralSystem) -> Result<Vec<Complex64>> {
    let (k, p) = reduce(sys)?;
    // The eigenvalues of K⁻¹P are 1/Ra; the physical ones are the largest,
    // so they carry rounding relative to 1/Ra_min rather than to the
    // O(N⁶) top of the spectrum.
    let inv = k
        .lu()
        .solve(&p)
        .ok_or(Error::SingularReduction(f64::INFINITY))?;
    let mut ev: Vec<Complex64> = inv
        .complex_eigenvalues()
        .iter()
        .filter(|mu| mu.norm() > 0.0)
        .map(|mu| mu.inv())
        .collect();
    ev.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(ev)
}

/// Smallest physical eigenvalue. Eigenvalues that move by more than
/// [`FILTER_TOL`] when the truncation grows by [`FILTER_EXTRA_MODES`] are
/// discarded as spurious.
pub fn smallest_eigen(sys: &SpectralSystem) -> Result<EigenResult> {
    let coarse = spectrum(sys)?;
    let fine_sys = assemble(sys.params, sys.n + FILTER_EXTRA_MODES, sys.basis)?;
    let fine = spectrum(&fine_sys)?;

    let converged = |z: &Complex64| fine.iter().any(|w| (z - w).norm() <= FILTER_TOL * z.norm());
    let retained: Vec<Complex64> = coarse.iter().copied().filter(|z| converged(z)).collect();
    let spurious_filtered = coarse.len() - retained.len();

    let ra_min = retained
        .iter()
        .filter(|z| z.re > 0.0 && z.im.abs() <= REALITY_TOL * z.re.abs())
        .map(|z| z.re)
        .fold(f64::INFINITY, f64::min);
    if !ra_min.is_finite() {
        return Err(Error::NoPhysicalEigenvalue);
    }
    let movement = fine
        .iter()
        .map(|w| (w - ra_min).norm() / ra_min)
        .fold(f64::INFINITY, f64::min);
    Ok(EigenResult {
        ra_min,
        spectrum: coarse,
        spurious_filtered,
        n_used: sys.n,
        movement,
    })
}

/// Coefficients `F_i` of the eigenfunction for eigenvalue `ra`, normalized
/// to unit Euclidean norm.
pub fn eigenvector(sys: &SpectralSystem, ra: f64) -> Result<DVector<f64>> {
    let (k, p) = reduce(sys)?;
    let m = k - p * ra;
    let svd = m.svd(false, true);
    let v_t = svd.v_t.ok_or(Error::NonConvergence {
        what: "SVD",
        residual: f64::NAN,
    })?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .unwrap();
    Ok(v_t.row(imin).transpose())
}

/// Strong-form residual of `(D²−a²)³F + Ra a² F + M a² DF` at `points`
/// interior points, relative to the largest of the three terms.
pub fn strong_residual(sys: &SpectralSystem, ra: f64, points: usize) -> Result<f64> {
    let coeffs = eigenvector(sys, ra)?;
    let a = sys.params.a();
    let mut f = Series::new(sys.basis, alloc::vec![0.0]);
    for (i, c) in coeffs.iter().enumerate() {
        f = f.add_scaled(&basis_phi(i + 1, sys.basis), *c);
    }
    let l3 = f.helmholtz(a).helmholtz(a).helmholtz(a);
    let df = f.derivative();
    let a2 = a * a;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for j in 1..=points {
        let z = -0.5 + j as f64 / (points + 1) as f64;
        let t1 = l3.eval(z);
        let t2 = ra * a2 * f.eval(z);
        let t3 = sys.params.m() * a2 * df.eval(z);
        worst = worst.max((t1 + t2 + t3).abs());
        scale = scale.max(t1.abs()).max(t2.abs()).max(t3.abs());
    }
    Ok(worst / scale)
}

/// Assemble at `(params, N, basis)` and return the smallest physical `Ra`.
pub fn critical_ra(params: FlowParams, n: usize, basis: BasisKind) -> Result<EigenResult> {
    smallest_eigen(&assemble(params, n, basis)?)
}
