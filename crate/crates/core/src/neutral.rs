//! Critical points and neutral surfaces.
//!
//! For fixed `M` the neutral curve `Ra(a)` is minimized over the wavenumber;
//! sweeping `M` traces the neutral surface. [`cross_validate`] runs the three
//! independent solvers at one point and reports how well they agree.

use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::charpoly::{bifurcation_scan, build_charpoly, find_roots, ns_curve, BifurcationHit};
use crate::secular::{secular_det, secular_function, smallest_secular_root};
use crate::spectral::{critical_ra, BasisKind};
use crate::{oracle, Error, FlowParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    SecularDirect,
    SpectralLegendre,
    SpectralChebyshev,
    FdOracle,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::SecularDirect => "secular-direct",
            Method::SpectralLegendre => "spectral-legendre",
            Method::SpectralChebyshev => "spectral-chebyshev",
            Method::FdOracle => "fd-oracle",
        }
    }
}

/// A solved point `(a, M, Ra)` on the neutral surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeutralPoint {
    pub a: f64,
    pub m: f64,
    pub ra: f64,
    pub method: Method,
    /// Truncation `N` (spectral), grid intervals `n` (oracle) or number of
    /// scan points (secular).
    pub resolution: usize,
    pub converged: bool,
}

/// Spectral eigenvalues that move by less than this between `N` and `N + 4`
/// count as converged.
pub const SPECTRAL_CONVERGED_TOL: f64 = 1e-4;

/// A method together with its resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Solver {
    pub method: Method,
    pub resolution: usize,
}

impl Solver {
    pub fn secular() -> Self {
        Self {
            method: Method::SecularDirect,
            resolution: 0,
        }
    }

    pub fn legendre(n: usize) -> Self {
        Self {
            method: Method::SpectralLegendre,
            resolution: n,
        }
    }

    pub fn chebyshev(n: usize) -> Self {
        Self {
            method: Method::SpectralChebyshev,
            resolution: n,
        }
    }

    pub fn fd(n: usize) -> Self {
        Self {
            method: Method::FdOracle,
            resolution: n,
        }
    }

    /// Smallest positive `Ra` at a fixed point.
    pub fn solve(&self, params: FlowParams) -> Result<NeutralPoint> {
        let point = |ra: f64, resolution: usize, converged: bool| NeutralPoint {
            a: params.a(),
            m: params.m(),
            ra,
            method: self.method,
            resolution,
            converged,
        };
        let p = match self.method {
            Method::SecularDirect => smallest_secular_root(params)?,
            Method::SpectralLegendre | Method::SpectralChebyshev => {
                let basis = if self.method == Method::SpectralLegendre {
                    BasisKind::ShiftedLegendre
                } else {
                    BasisKind::ShiftedChebyshev
                };
                let r = critical_ra(params, self.resolution, basis)?;
                point(
                    r.ra_min,
                    self.resolution,
                    r.movement <= SPECTRAL_CONVERGED_TOL,
                )
            }
            Method::FdOracle => point(
                oracle::fd_oracle(params, self.resolution)?,
                self.resolution,
                true,
            ),
        };
        if !(p.ra > 0.0) {
            return Err(Error::NoPhysicalEigenvalue);
        }
        Ok(p)
    }
}

pub const DEFAULT_A_TOL: f64 = 1e-4;
const SCREEN_POINTS: usize = 5;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

pub fn minimize_over_a(m: f64, a_lo: f64, a_hi: f64, solver: Solver) -> Result<NeutralPoint> {
    minimize_over_a_with_tol(m, a_lo, a_hi, solver, DEFAULT_A_TOL)
}

/// Golden-section search for `min_a Ra(a, M)` on `[a_lo, a_hi]` down to an
/// interval of width `a_tol`.
///
/// Five interior samples screen the bracket first; more than one local
/// minimum among them is reported as [`Error::NotUnimodal`].
pub fn minimize_over_a_with_tol(
    m: f64,
    a_lo: f64,
    a_hi: f64,
    solver: Solver,
    a_tol: f64,
) -> Result<NeutralPoint> {
    if !(a_lo > 0.0 && a_lo < a_hi) {
        return Err(Error::InvalidArgument(
            "wavenumber bracket must satisfy 0 < a_lo < a_hi",
        ));
    }
    if !(a_tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    golden_minimize(|a| solver.solve(FlowParams::new(a, m)?), a_lo, a_hi, a_tol)
}

fn golden_minimize(
    eval: impl Fn(f64) -> Result<NeutralPoint>,
    a_lo: f64,
    a_hi: f64,
    a_tol: f64,
) -> Result<NeutralPoint> {
    let step = (a_hi - a_lo) / (SCREEN_POINTS + 1) as f64;
    let samples: Vec<NeutralPoint> = (0..=SCREEN_POINTS + 1)
        .map(|k| {
            eval(if k == SCREEN_POINTS + 1 {
                a_hi
            } else {
                a_lo + k as f64 * step
            })
        })
        .collect::<Result<_>>()?;
    let ra: Vec<f64> = samples.iter().map(|p| p.ra).collect();
    let last = ra.len() - 1;
    let minima = (0..=last)
        .filter(|&i| {
            let left = i == 0 || ra[i] < ra[i - 1];
            let right = i == last || ra[i] <= ra[i + 1];
            left && right
        })
        .count();
    if minima > 1 {
        return Err(Error::NotUnimodal {
            lo: a_lo,
            hi: a_hi,
            minima,
        });
    }
    let k = (0..=last).min_by(|&i, &j| ra[i].total_cmp(&ra[j])).unwrap();
    let mut lo = samples[k.saturating_sub(1)].a;
    let mut hi = samples[(k + 1).min(last)].a;

    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = eval(c)?;
    let mut fd = eval(d)?;
    let mut all_converged = samples.iter().all(|p| p.converged);
    while hi - lo > a_tol {
        all_converged &= fc.converged && fd.converged;
        if fc.ra < fd.ra {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = eval(c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = eval(d)?;
        }
    }
    let mut best = [fc, fd, samples[k]]
        .into_iter()
        .min_by(|x, y| x.ra.total_cmp(&y.ra))
        .unwrap();
    best.converged = all_converged && best.converged;
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepFailure {
    pub m: f64,
    pub error: Error,
}

/// Critical points along an ascending list of `M` values.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub points: Vec<NeutralPoint>,
    pub failures: Vec<SweepFailure>,
    /// `Ra_min` is non-decreasing in `M` over the solved points.
    pub monotone: bool,
}

impl SweepResult {
    /// Assemble a sweep from per-`M` outcomes given in the same order as
    /// `m_values`.
    pub fn from_outcomes(m_values: &[f64], outcomes: Vec<Result<NeutralPoint>>) -> Self {
        let mut points = Vec::new();
        let mut failures = Vec::new();
        for (&m, outcome) in m_values.iter().zip(outcomes) {
            match outcome {
                Ok(p) => points.push(p),
                Err(error) => failures.push(SweepFailure { m, error }),
            }
        }
        let monotone = points.windows(2).all(|w| w[1].ra >= w[0].ra);
        SweepResult {
            points,
            failures,
            monotone,
        }
    }

    pub fn a_critical(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.a).collect()
    }
}

pub fn validate_m_list(m_values: &[f64]) -> Result<()> {
    if m_values.is_empty() {
        return Err(Error::InvalidArgument("M list must not be empty"));
    }
    if m_values.iter().any(|m| !m.is_finite()) || m_values.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("M list must be strictly ascending"));
    }
    Ok(())
}

pub fn sweep_m(m_values: &[f64], a_lo: f64, a_hi: f64, solver: Solver) -> Result<SweepResult> {
    validate_m_list(m_values)?;
    let outcomes = m_values
        .iter()
        .map(|&m| minimize_over_a(m, a_lo, a_hi, solver))
        .collect();
    Ok(SweepResult::from_outcomes(m_values, outcomes))
}

/// Truncation used for the spectral leg of [`cross_validate`].
pub const CROSS_SPECTRAL_N: usize = 24;
/// Grid used for the oracle leg of [`cross_validate`].
pub const CROSS_ORACLE_GRID: usize = 2000;
/// A secular root no eigen-method confirms within this is flagged.
pub const FALSE_SECULAR_TOL: f64 = 5e-3;
const PROBE_WIDTH: f64 = 1e-3;

/// Behaviour of the secular function at a special `Ra`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub ra: f64,
    /// The secular function changes sign within `±0.1 %` of `ra`.
    pub zero_nearby: bool,
    /// `|Δ|` of the row-equilibrated matrix at `ra` (confluent columns at
    /// multiple roots).
    pub det_modulus: f64,
    pub multiple_root: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossValidation {
    pub params: FlowParams,
    pub secular: Result<NeutralPoint>,
    pub spectral: Result<NeutralPoint>,
    pub oracle: Result<NeutralPoint>,
    pub secular_vs_spectral: Option<f64>,
    pub secular_vs_oracle: Option<f64>,
    pub spectral_vs_oracle: Option<f64>,
    /// The secular root matches neither eigen-method within 0.5 %.
    pub false_secular: bool,
    /// `Ra = a⁴`: one characteristic root is zero.
    pub s0: Probe,
    pub bifurcation: Option<BifurcationHit>,
    /// `Ra` on `NS₁`, probed only when `M = 0`.
    pub ns1: Option<Probe>,
}

fn rel(x: &Result<NeutralPoint>, y: &Result<NeutralPoint>) -> Option<f64> {
    match (x, y) {
        (Ok(p), Ok(q)) => Some((p.ra - q.ra).abs() / q.ra.abs()),
        _ => None,
    }
}

fn probe(params: FlowParams, ra: f64) -> Result<Probe> {
    let roots = find_roots(&build_charpoly(params, ra))?;
    let det = secular_det(&roots, params.a());
    let sign = |r: f64| -> Result<f64> { Ok(secular_function(params, r)?.value.signum()) };
    let lo = sign(ra * (1.0 - PROBE_WIDTH))?;
    let hi = sign(ra * (1.0 + PROBE_WIDTH))?;
    Ok(Probe {
        ra,
        zero_nearby: lo != hi,
        det_modulus: det.value.norm(),
        multiple_root: roots.has_multiple_root(),
    })
}

/// Solve at one `(a, M)` with the direct method, the Legendre spectral
/// method (`N = 24`) and the finite-difference oracle, and compare.
pub fn cross_validate(params: FlowParams) -> Result<CrossValidation> {
    let secular = Solver::secular().solve(params);
    let spectral = Solver::legendre(CROSS_SPECTRAL_N).solve(params);
    let oracle = Solver::fd(CROSS_ORACLE_GRID).solve(params);

    let secular_vs_spectral = rel(&secular, &spectral);
    let secular_vs_oracle = rel(&secular, &oracle);
    let spectral_vs_oracle = rel(&spectral, &oracle);
    let confirmed = |d: Option<f64>| d.is_some_and(|v| v <= FALSE_SECULAR_TOL);
    let false_secular =
        secular.is_ok() && !confirmed(secular_vs_spectral) && !confirmed(secular_vs_oracle);

    let a = params.a();
    let a4 = a * a * a * a;
    let s0 = probe(params, a4)?;
    let bifurcation = bifurcation_scan(params, a4);
    let ns1 = if params.m() == 0.0 {
        Some(probe(params, ns_curve(1, a))?)
    } else {
        None
    };

    Ok(CrossValidation {
        params,
        secular,
        spectral,
        oracle,
        secular_vs_spectral,
        secular_vs_oracle,
        spectral_vs_oracle,
        false_secular,
        s0,
        bifurcation,
        ns1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_brackets() {
        assert!(minimize_over_a(0.0, 0.0, 4.0, Solver::legendre(8)).is_err());
        assert!(minimize_over_a(0.0, 4.0, 2.0, Solver::legendre(8)).is_err());
    }

    #[test]
    fn rejects_unsorted_m_lists() {
        assert!(sweep_m(&[1000.0, 0.0], 2.0, 4.0, Solver::legendre(8)).is_err());
        assert!(sweep_m(&[], 2.0, 4.0, Solver::legendre(8)).is_err());
        assert!(sweep_m(&[1.0, 1.0], 2.0, 4.0, Solver::legendre(8)).is_err());
    }

    #[test]
    fn singleton_sweep_equals_direct_minimization() {
        let s = sweep_m(&[0.0], 2.0, 4.0, Solver::legendre(10)).unwrap();
        let d = minimize_over_a(0.0, 2.0, 4.0, Solver::legendre(10)).unwrap();
        assert_eq!(s.points, alloc::vec![d]);
        assert!(s.failures.is_empty() && s.monotone);
    }

    fn synthetic(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<NeutralPoint> {
        move |a| {
            Ok(NeutralPoint {
                a,
                m: 0.0,
                ra: f(a),
                method: Method::FdOracle,
                resolution: 0,
                converged: true,
            })
        }
    }

    #[test]
    fn golden_section_finds_parabola_vertex() {
        let p = golden_minimize(synthetic(|a| 5.0 + (a - 2.6391).powi(2)), 1.0, 8.0, 1e-6).unwrap();
        assert!((p.a - 2.6391).abs() < 1e-6);
        assert!(p.converged);
    }

    #[test]
    fn two_minima_are_detected() {
        // minima near a = 2 and a = 6 on [1, 7]
        let f = |a: f64| (a - 2.0).powi(2) * (a - 6.0).powi(2) + 0.1 * a;
        match golden_minimize(synthetic(f), 1.0, 7.0, 1e-4) {
            Err(Error::NotUnimodal { minima, .. }) => assert_eq!(minima, 2),
            other => panic!("expected NotUnimodal, got {other:?}"),
        }
    }

    #[test]
    fn monotone_curve_converges_to_endpoint() {
        let p = golden_minimize(synthetic(|a| a), 1.0, 3.0, 1e-5).unwrap();
        assert!((p.a - 1.0).abs() < 1e-4);
    }

    #[test]
    fn sweep_keeps_failures_per_point() {
        let r = SweepResult::from_outcomes(
            &[0.0, 1.0],
            alloc::vec![
                Err(Error::NotUnimodal {
                    lo: 1.0,
                    hi: 2.0,
                    minima: 2
                }),
                Err(Error::NoPhysicalEigenvalue)
            ],
        );
        assert_eq!(r.failures.len(), 2);
        assert!(r.points.is_empty());
    }
}
