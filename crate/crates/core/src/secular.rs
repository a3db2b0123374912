//! Direct method: the general solution `Σ P_i(z) e^{λ_i z}` substituted into
//! the boundary conditions gives a 6×6 determinant whose zeros in `Ra` are
//! the eigenvalues.
//!
//! Row order is `F(−½), F(½), D²F(−½), D²F(½), D(D²−a²)F(−½), D(D²−a²)F(½)`.
//! A root of multiplicity `m` contributes columns for `z^l e^{λz} / l!`,
//! `l = 0..m`, i.e. the `l`-th λ-derivative of the generic column over `l!`.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::charpoly::{build_charpoly, find_roots, RootCluster, RootSet};
use crate::linalg::scaled_determinant;
use crate::neutral::{Method, NeutralPoint};
use crate::{Error, FlowParams, Result};

/// Column generator: the six boundary functionals applied to
/// `z^order · e^{λz} / order!`.
pub fn bc_row_values(lambda: Complex64, a: f64, order: usize) -> [Complex64; 6] {
    // Each functional is g(λ)·e^{λ z0}; take d^l/dλ^l / l! by Leibniz.
    // g as Taylor coefficients around λ: g(λ+h) = Σ g_k h^k.
    let l = lambda;
    let a2 = a * a;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    // F: g = 1
    let g_f = [one, zero, zero, zero];
    // D²F: g = λ²
    let g_d2 = [l * l, l * 2.0, one, zero];
    // D(D² − a²)F: g = λ³ − a²λ
    let g_d3 = [l * l * l - l * a2, l * l * 3.0 - a2, l * 3.0, one];

    let mut out = [zero; 6];
    for (side, z0) in [-0.5f64, 0.5].into_iter().enumerate() {
        let e = (l * z0).exp();
        // exp Taylor coefficient: z0^j / j!
        let mut et = [0.0f64; 8];
        et[0] = 1.0;
        for j in 1..8 {
            et[j] = et[j - 1] * z0 / j as f64;
        }
        let coeff = |g: &[Complex64; 4]| -> Complex64 {
            (0..=order.min(3))
                .map(|k| g[k] * exp_taylor(&et, z0, order - k))
                .sum::<Complex64>()
                * e
        };
        out[side] = coeff(&g_f);
        out[2 + side] = coeff(&g_d2);
        out[4 + side] = coeff(&g_d3);
    }
    out
}

fn exp_taylor(table: &[f64; 8], z0: f64, j: usize) -> f64 {
    if j < table.len() {
        table[j]
    } else {
        (1..=j).fold(1.0, |acc, i| acc * z0 / i as f64)
    }
}

/// Determinant of the boundary-condition matrix, `value · exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecularValue {
    pub value: Complex64,
    pub log_scale: f64,
    /// Two order-0 columns share a root, so the determinant vanishes
    /// identically; not a secular point.
    pub degenerate: bool,
}

impl SecularValue {
    pub fn full(&self) -> Complex64 {
        self.value * self.log_scale.exp()
    }

    pub fn check(self) -> Result<Self> {
        if self.degenerate {
            Err(Error::Degenerate)
        } else {
            Ok(self)
        }
    }
}

/// `(root, derivative order)` pairs, one per column.
pub fn column_plan(roots: &RootSet) -> Vec<(Complex64, usize)> {
    roots
        .clusters()
        .iter()
        .flat_map(|c| (0..c.multiplicity).map(move |l| (c.center, l)))
        .collect()
}

pub fn det_from_columns(columns: &[(Complex64, usize)], a: f64) -> SecularValue {
    assert_eq!(columns.len(), 6, "six columns required");
    let degenerate = columns.iter().enumerate().any(|(i, &(zi, li))| {
        columns[i + 1..]
            .iter()
            .any(|&(zj, lj)| li == lj && (zi - zj).norm() <= 1e-14 * (1.0 + zi.norm()))
    });
    let mut m = alloc::vec![Complex64::new(0.0, 0.0); 36];
    for (j, &(lambda, order)) in columns.iter().enumerate() {
        for (i, v) in bc_row_values(lambda, a, order).into_iter().enumerate() {
            m[i * 6 + j] = v;
        }
    }
    let d = scaled_determinant(m, 6);
    SecularValue {
        value: d.mantissa,
        log_scale: d.log_scale,
        degenerate,
    }
}

/// Secular determinant for a root set, confluent columns at multiple roots.
pub fn secular_det(roots: &RootSet, a: f64) -> SecularValue {
    det_from_columns(&column_plan(roots), a)
}

/// `Δ` divided by the (confluent) Vandermonde product of the roots.
///
/// Both factors are alternating in the roots, so the quotient is a symmetric
/// function of them: real for real parameters, independent of column order,
/// and continuous when roots collide. Its zeros in `Ra` are exactly the
/// eigenvalues, which makes it the function to bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedSecular {
    /// Real part of the mantissa; carries the sign.
    pub value: f64,
    pub imag: f64,
    pub log_scale: f64,
    /// Rounding scale for `value`: Hadamard bound of the row-equilibrated
    /// matrix divided by `|V|`, in the same units as `value`.
    pub noise_scale: f64,
    pub degenerate: bool,
}

pub fn reduced_secular(roots: &RootSet, a: f64) -> Result<ReducedSecular> {
    let cols = column_plan(roots);
    let sv = det_from_columns(&cols, a);

    let clusters: &[RootCluster] = roots.clusters();
    let mut vand = Complex64::new(1.0, 0.0);
    let mut log_v = 0.0;
    for i in 0..clusters.len() {
        for j in (i + 1)..clusters.len() {
            let d = clusters[j].center - clusters[i].center;
            let k = (clusters[i].multiplicity * clusters[j].multiplicity) as i32;
            let n = d.norm();
            if n == 0.0 {
                return Ok(ReducedSecular {
                    value: 0.0,
                    imag: 0.0,
                    log_scale: sv.log_scale,
                    noise_scale: 0.0,
                    degenerate: true,
                });
            }
            vand *= (d / n).powi(k);
            log_v += k as f64 * n.ln();
        }
    }
    let q = sv.value / vand;

    // Hadamard bound of the equilibrated matrix.
    let mut m = alloc::vec![0.0f64; 36];
    for (j, &(lambda, order)) in cols.iter().enumerate() {
        for (i, v) in bc_row_values(lambda, a, order).into_iter().enumerate() {
            m[i * 6 + j] = v.norm();
        }
    }
    for row in m.chunks_mut(6) {
        let s = row.iter().cloned().fold(0.0, f64::max);
        if s > 0.0 {
            row.iter_mut().for_each(|v| *v /= s);
        }
    }
    let hadamard: f64 = (0..6)
        .map(|j| {
            (0..6)
                .map(|i| m[i * 6 + j] * m[i * 6 + j])
                .sum::<f64>()
                .sqrt()
        })
        .product();

    Ok(ReducedSecular {
        value: q.re,
        imag: q.im,
        log_scale: sv.log_scale - log_v,
        noise_scale: hadamard,
        degenerate: sv.degenerate,
    })
}

const REALITY_TOL: f64 = 1e-8;

/// The real secular function `Δ/V` at `(a, M, Ra)`, sign-carrying mantissa
/// only (the positive factor `exp(log_scale)` is dropped).
pub fn secular_function(params: FlowParams, ra: f64) -> Result<ReducedSecular> {
    let roots = find_roots(&build_charpoly(params, ra))?;
    let r = reduced_secular(&roots, params.a())?;
    // Relative to the determinant's own rounding scale: near a zero the
    // value itself is tiny while the imaginary part stays at noise level.
    if r.imag.abs() > REALITY_TOL * r.value.abs().max(r.noise_scale) {
        return Err(Error::NonConvergence {
            what: "secular reality check",
            residual: r.imag.abs(),
        });
    }
    Ok(r)
}

/// Blocks of the `M = 0` determinant in the `cosh`/`sinh` basis, written
/// with `m_i = tanh(λ_i/2)` and `μ_i = λ_i² − a²`:
///
/// ```text
/// odd  = det [ m_i ; λ_i² m_i ; λ_i μ_i ]
/// even = det [ 1   ; λ_i²     ; λ_i μ_i m_i ]
/// ```
///
/// With columns ordered `λ₁, λ₂, λ₃, −λ₁, −λ₂, −λ₃` (see [`m0_paired_columns`]),
/// `Δ = −64 · Π cosh²(λ_i/2) · odd · even`.
pub fn m0_block_factor(roots: &RootSet, a: f64) -> Result<(Complex64, Complex64)> {
    let reps = m0_representatives(roots)?;
    let a2 = a * a;
    let mut m = [Complex64::new(0.0, 0.0); 3];
    let mut mu = [Complex64::new(0.0, 0.0); 3];
    for (k, &l) in reps.iter().enumerate() {
        let c = (l * 0.5).cosh();
        if c.norm() < 1e-8 {
            return Err(Error::NearPole(c.norm()));
        }
        m[k] = (l * 0.5).sinh() / c;
        mu[k] = l * l - a2;
    }
    let l = reps;
    let odd = det3([
        [m[0], m[1], m[2]],
        [l[0] * l[0] * m[0], l[1] * l[1] * m[1], l[2] * l[2] * m[2]],
        [l[0] * mu[0], l[1] * mu[1], l[2] * mu[2]],
    ]);
    let one = Complex64::new(1.0, 0.0);
    let even = det3([
        [one, one, one],
        [l[0] * l[0], l[1] * l[1], l[2] * l[2]],
        [
            l[0] * mu[0] * m[0],
            l[1] * mu[1] * m[1],
            l[2] * mu[2] * m[2],
        ],
    ]);
    Ok((odd, even))
}

/// `−64 · Π cosh²(λ_i/2)` for the representatives used by
/// [`m0_block_factor`].
pub fn m0_prefactor(roots: &RootSet) -> Result<Complex64> {
    let reps = m0_representatives(roots)?;
    Ok(reps
        .iter()
        .map(|&l| {
            let c = (l * 0.5).cosh();
            c * c
        })
        .product::<Complex64>()
        * -64.0)
}

/// Column order `λ₁, λ₂, λ₃, −λ₁, −λ₂, −λ₃` matching [`m0_prefactor`].
pub fn m0_paired_columns(roots: &RootSet) -> Result<[(Complex64, usize); 6]> {
    let r = m0_representatives(roots)?;
    Ok([
        (r[0], 0),
        (r[1], 0),
        (r[2], 0),
        (-r[0], 0),
        (-r[1], 0),
        (-r[2], 0),
    ])
}

/// One root from each `±λ` pair: those with positive real part, or on the
/// imaginary axis with positive imaginary part.
fn m0_representatives(roots: &RootSet) -> Result<[Complex64; 3]> {
    if roots.has_multiple_root() {
        return Err(Error::InvalidArgument(
            "block factorization needs six distinct roots",
        ));
    }
    let all = roots.roots();
    let scale = 1.0 + roots.max_modulus();
    let tol = 1e-9 * scale;
    let reps: Vec<Complex64> = all
        .iter()
        .copied()
        .filter(|z| z.re > tol || (z.re.abs() <= tol && z.im > 0.0))
        .collect();
    if reps.len() != 3 {
        return Err(Error::InvalidArgument("roots are not in ± pairs (M ≠ 0?)"));
    }
    for r in &reps {
        let mirrored = all.iter().any(|z| (z + r).norm() <= 1e-8 * scale);
        if !mirrored {
            return Err(Error::InvalidArgument("roots are not in ± pairs (M ≠ 0?)"));
        }
    }
    Ok([reps[0], reps[1], reps[2]])
}

fn det3(m: [[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

const BISECTION_REL_TOL: f64 = 1e-10;

/// Sign of the secular function, or `None` where it is degenerate or
/// numerically zero.
fn secular_sign(params: FlowParams, ra: f64) -> Result<Option<f64>> {
    let r = secular_function(params, ra)?;
    if r.degenerate || r.value == 0.0 {
        return Ok(None);
    }
    Ok(Some(r.value.signum()))
}

fn bisect(params: FlowParams, mut lo: f64, mut hi: f64, mut s_lo: f64) -> Result<(f64, bool)> {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo) <= BISECTION_REL_TOL * mid.abs().max(1e-300) {
            return Ok((mid, true));
        }
        match secular_sign(params, mid)? {
            None => return Ok((mid, true)),
            Some(s) if s == s_lo => {
                lo = mid;
                s_lo = s;
            }
            Some(_) => hi = mid,
        }
    }
    let mid = 0.5 * (lo + hi);
    Ok((mid, (hi - lo) <= BISECTION_REL_TOL * mid.abs()))
}

fn point(params: FlowParams, ra: f64, resolution: usize, converged: bool) -> NeutralPoint {
    NeutralPoint {
        a: params.a(),
        m: params.m(),
        ra,
        method: Method::SecularDirect,
        resolution,
        converged,
    }
}

/// All zeros of the secular function on a uniform `Ra` grid, refined by
/// bisection, ascending.
pub fn solve_ra(
    params: FlowParams,
    ra_lo: f64,
    ra_hi: f64,
    step: f64,
) -> Result<Vec<NeutralPoint>> {
    if !(ra_lo < ra_hi) || !(step > 0.0) {
        return Err(Error::InvalidArgument("need ra_lo < ra_hi and step > 0"));
    }
    let n = ((ra_hi - ra_lo) / step).ceil() as usize;
    let grid: Vec<f64> = (0..=n)
        .map(|k| (ra_lo + k as f64 * step).min(ra_hi))
        .collect();
    let found = scan(params, &grid)?;
    if found.is_empty() {
        return Err(Error::NoRootInRange {
            lo: ra_lo,
            hi: ra_hi,
        });
    }
    Ok(found
        .into_iter()
        .map(|(ra, ok)| point(params, ra, grid.len(), ok))
        .collect())
}

fn scan(params: FlowParams, grid: &[f64]) -> Result<Vec<(f64, bool)>> {
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for &ra in grid {
        let s = match secular_sign(params, ra)? {
            Some(s) => s,
            None => continue,
        };
        if let Some((ra_prev, s_prev)) = prev {
            if s != s_prev {
                out.push(bisect(params, ra_prev, ra, s_prev)?);
            }
        }
        prev = Some((ra, s));
    }
    Ok(out)
}

/// Smallest positive zero of the secular function, found by a geometric scan
/// upward from `Ra = 1` (ratio 1.02) and refined by bisection.
pub fn smallest_secular_root(params: FlowParams) -> Result<NeutralPoint> {
    const START: f64 = 1.0;
    const RATIO: f64 = 1.02;
    const LIMIT: f64 = 1e10;
    let mut prev: Option<(f64, f64)> = None;
    let mut ra = START;
    let mut count = 0usize;
    while ra <= LIMIT {
        count += 1;
        if let Some(s) = secular_sign(params, ra)? {
            if let Some((ra_prev, s_prev)) = prev {
                if s != s_prev {
                    let (root, ok) = bisect(params, ra_prev, ra, s_prev)?;
                    return Ok(point(params, root, count, ok));
                }
            }
            prev = Some((ra, s));
        }
        ra *= RATIO;
    }
    Err(Error::NoRootInRange {
        lo: START,
        hi: LIMIT,
    })
}
