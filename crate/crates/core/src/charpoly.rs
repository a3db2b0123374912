//! Characteristic polynomial of the sixth-order operator, its roots, and the
//! bifurcation sets where roots coalesce.
//!
//! For `F = e^{λz}` the operator gives
//! `p(λ) = (λ² − a²)³ + M a² λ + Ra a²`, i.e.
//! `λ⁶ − 3a²λ⁴ + 3a⁴λ² + Ma²λ + (Ra a² − a⁶)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)]
use num_traits::Float;

use num_complex::Complex64;

use crate::poly::{aberth_roots, polish, Poly};
use crate::{FlowParams, Result};

/// Default relative distance below which polished roots are merged.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-6;

/// Radius inside which a group of roots is merged only if the derivative
/// certificate at its center passes. Multiple roots computed in double
/// precision spread by about `ε^{1/m}`.
const COARSE_CLUSTER_TOL: f64 = 1e-3;
const CERTIFICATE_TOL: f64 = 1e-8;
const ABERTH_MAX_ITER: usize = 500;

/// Monic degree-6 characteristic polynomial, constant term first.
#[derive(Debug, Clone, PartialEq)]
pub struct CharPoly {
    coeffs: [f64; 7],
    params: FlowParams,
    ra: f64,
}

pub fn build_charpoly(params: FlowParams, ra: f64) -> CharPoly {
    let a2 = params.a() * params.a();
    let coeffs = [
        ra * a2 - a2 * a2 * a2,
        params.m() * a2,
        3.0 * a2 * a2,
        0.0,
        -3.0 * a2,
        0.0,
        1.0,
    ];
    CharPoly { coeffs, params, ra }
}

impl CharPoly {
    pub fn coeffs(&self) -> &[f64; 7] {
        &self.coeffs
    }

    pub fn params(&self) -> FlowParams {
        self.params
    }

    pub fn ra(&self) -> f64 {
        self.ra
    }

    pub fn as_poly(&self) -> Poly {
        Poly::new(self.coeffs.to_vec())
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

/// A root together with its algebraic multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub center: Complex64,
    pub multiplicity: usize,
}

/// The six characteristic roots, grouped by multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    clusters: Vec<RootCluster>,
    cluster_tol: f64,
}

impl RootSet {
    /// Build from explicit clusters. Used to construct confluent or
    /// deliberately degenerate column sets.
    pub fn from_clusters(clusters: Vec<RootCluster>, cluster_tol: f64) -> Self {
        Self {
            clusters,
            cluster_tol,
        }
    }

    pub fn clusters(&self) -> &[RootCluster] {
        &self.clusters
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// Each root repeated according to its multiplicity.
    pub fn roots(&self) -> Vec<Complex64> {
        self.clusters
            .iter()
            .flat_map(|c| core::iter::repeat_n(c.center, c.multiplicity))
            .collect()
    }

    /// Multiplicities sorted in descending order, e.g. `[2, 1, 1, 1, 1]`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut m: Vec<usize> = self.clusters.iter().map(|c| c.multiplicity).collect();
        m.sort_unstable_by(|a, b| b.cmp(a));
        m
    }

    pub fn has_multiple_root(&self) -> bool {
        self.clusters.iter().any(|c| c.multiplicity > 1)
    }

    pub fn max_modulus(&self) -> f64 {
        self.clusters
            .iter()
            .map(|c| c.center.norm())
            .fold(0.0, f64::max)
    }
}

/// Vieta and symmetry residuals of a root set, each normalised as a
/// relative quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VietaResiduals {
    /// `|Σλ| / (1 + max|λ|)`.
    pub sum: f64,
    /// `|Πλ − (Ra a² − a⁶)| / (1 + |Ra a² − a⁶|)`.
    pub product: f64,
    /// Distance from the root multiset to its conjugate, over `1 + max|λ|`.
    pub conjugacy: f64,
    /// Distance from the root multiset to its negation, over `1 + max|λ|`.
    /// Only expected to vanish when `M = 0`.
    pub parity: f64,
}

impl RootSet {
    pub fn vieta(&self, p: &CharPoly) -> VietaResiduals {
        let roots = self.roots();
        let scale = 1.0 + self.max_modulus();
        let c0 = p.coeffs()[0];
        let sum: Complex64 = roots.iter().sum();
        let prod: Complex64 = roots.iter().product();
        VietaResiduals {
            sum: sum.norm() / scale,
            product: (prod - c0).norm() / (1.0 + c0.abs()),
            conjugacy: multiset_distance(&roots, |z| z.conj()) / scale,
            parity: multiset_distance(&roots, |z| -z) / scale,
        }
    }
}

/// Largest distance in a greedy matching of `roots` against `f(roots)`.
fn multiset_distance(roots: &[Complex64], f: impl Fn(Complex64) -> Complex64) -> f64 {
    let mut pool: Vec<Complex64> = roots.iter().map(|&z| f(z)).collect();
    let mut worst: f64 = 0.0;
    for z in roots {
        let (k, d) = pool
            .iter()
            .enumerate()
            .map(|(k, w)| (k, (w - z).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        worst = worst.max(d);
        pool.swap_remove(k);
    }
    worst
}

pub fn find_roots(p: &CharPoly) -> Result<RootSet> {
    find_roots_with_tol(p, DEFAULT_CLUSTER_TOL)
}

/// Roots of `p`, polished by Newton, made exactly conjugate-closed, and
/// clustered into multiplicities.
pub fn find_roots_with_tol(p: &CharPoly, cluster_tol: f64) -> Result<RootSet> {
    let poly = p.as_poly();
    let raw = aberth_roots(&poly, ABERTH_MAX_ITER)?;
    let polished: Vec<Complex64> = raw.into_iter().map(|z| polish(&poly, z, 8)).collect();
    let roots = conjugate_close(polished);

    let max_mod = roots.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let target = 1e-10 * max_mod.powi(6).max(1.0);
    let residual = roots.iter().map(|&z| p.eval(z).norm()).fold(0.0, f64::max);
    if !(residual <= target) {
        return Err(crate::Error::NonConvergence {
            what: "characteristic roots",
            residual,
        });
    }

    let clusters = cluster(&poly, &roots, cluster_tol);
    Ok(RootSet {
        clusters,
        cluster_tol,
    })
}

/// Pair each root in the upper half plane with its nearest mirror image and
/// replace both by an exact conjugate pair; the rest become real.
fn conjugate_close(mut pending: Vec<Complex64>) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(pending.len());
    while !pending.is_empty() {
        let (k, _) = pending
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.im.total_cmp(&y.1.im))
            .unwrap();
        let z = pending.swap_remove(k);
        if z.im <= 1e-12 * (1.0 + z.norm()) || pending.is_empty() {
            out.push(Complex64::new(z.re, 0.0));
            out.extend(pending.drain(..).map(|w| Complex64::new(w.re, 0.0)));
            break;
        }
        let (j, _) = pending
            .iter()
            .enumerate()
            .min_by(|x, y| (x.1 - z.conj()).norm().total_cmp(&(y.1 - z.conj()).norm()))
            .unwrap();
        let w = pending.swap_remove(j);
        let c = (z + w.conj()) * 0.5;
        out.push(c);
        out.push(c.conj());
    }
    out
}

fn components(roots: &[Complex64], tol: f64) -> Vec<Vec<usize>> {
    let n = roots.len();
    let mut label: Vec<usize> = (0..n).collect();
    // Single linkage; n = 6 so quadratic passes are fine.
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let scale = 1.0 + roots[i].norm().max(roots[j].norm());
                if (roots[i] - roots[j]).norm() <= tol * scale && label[i] != label[j] {
                    let (lo, hi) = (label[i].min(label[j]), label[i].max(label[j]));
                    label.iter_mut().filter(|l| **l == hi).for_each(|l| *l = lo);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        match groups.iter_mut().find(|g| label[g[0]] == label[i]) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

fn centroid(roots: &[Complex64], idx: &[usize]) -> Complex64 {
    idx.iter().map(|&i| roots[i]).sum::<Complex64>() / idx.len() as f64
}

/// Refine a candidate `m`-fold root by Newton on `p^{(m-1)}`, which has a
/// simple root there.
fn refine_multiple(poly: &Poly, z: Complex64, m: usize) -> Complex64 {
    let mut d = poly.clone();
    for _ in 0..(m - 1) {
        d = d.derivative();
    }
    let z = polish(&d, z, 8);
    if z.im.abs() <= 1e-12 * (1.0 + z.norm()) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// True when `p^{(j)}(z)/j!` is at rounding level for every `j < m`.
pub(crate) fn certifies_multiplicity(poly: &Poly, z: Complex64, m: usize, tol: f64) -> bool {
    (0..m).all(|j| {
        poly.taylor_coeff(j, z).norm() <= tol * poly.taylor_scale(j, z).max(f64::MIN_POSITIVE)
    })
}

fn cluster(poly: &Poly, roots: &[Complex64], tol: f64) -> Vec<RootCluster> {
    let fine = components(roots, tol);
    let coarse = components(roots, COARSE_CLUSTER_TOL.max(tol));

    let mut clusters = Vec::new();
    for group in &coarse {
        let m = group.len();
        if m > 1 {
            let c = refine_multiple(poly, centroid(roots, group), m);
            if certifies_multiplicity(poly, c, m, CERTIFICATE_TOL) {
                clusters.push(RootCluster {
                    center: c,
                    multiplicity: m,
                });
                continue;
            }
        }
        // Fall back to the fine grouping inside this coarse group.
        for sub in fine.iter().filter(|f| group.contains(&f[0])) {
            let center = if sub.len() == 1 {
                roots[sub[0]]
            } else {
                refine_multiple(poly, centroid(roots, sub), sub.len())
            };
            clusters.push(RootCluster {
                center,
                multiplicity: sub.len(),
            });
        }
    }
    clusters.sort_by(|x, y| {
        x.center
            .re
            .total_cmp(&y.center.re)
            .then(x.center.im.total_cmp(&y.center.im))
    });
    clusters
}

/// Curve `NS_n`: `Ra = ((2n − 1)²π² + a²)³ / a²`.
pub fn ns_curve(n: u32, a: f64) -> f64 {
    let k = (2 * n - 1) as f64 * PI;
    let s = k * k + a * a;
    s * s * s / (a * a)
}

/// The two branches `S₁`, `S₂` of the bifurcation surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    One,
    Two,
}

impl Branch {
    /// `+1` for branch one, `−1` for branch two: the sign in `90 ± 10√21`.
    fn sign(self) -> f64 {
        match self {
            Branch::One => 1.0,
            Branch::Two => -1.0,
        }
    }
}

/// `M = (33 ∓ 3√21)·√(90 ± 10√21)·a³ / 250`.
pub fn s_i_m(a: f64, branch: Branch) -> f64 {
    let r21 = 21f64.sqrt();
    let s = branch.sign();
    (33.0 - s * 3.0 * r21) * (90.0 + s * 10.0 * r21).sqrt() * a * a * a / 250.0
}

/// Double root `−(a/10)·√(90 ± 10√21)` of the reduced quintic on `S₀ ∩ S_i`.
pub fn s_i_double_root(a: f64, branch: Branch) -> f64 {
    -(a / 10.0) * (90.0 + branch.sign() * 10.0 * 21f64.sqrt()).sqrt()
}

/// `q(λ) = λ⁵ − 3a²λ³ + 3a⁴λ + Ma²`, the cofactor of `λ` in `p` on `Ra = a⁴`.
pub fn reduced_quintic(a: f64, m: f64) -> Poly {
    let a2 = a * a;
    Poly::new(vec![m * a2, 3.0 * a2 * a2, 0.0, -3.0 * a2, 0.0, 1.0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    S0,
    S1,
    S2,
    S0S1,
    S0S2,
}

impl Surface {
    pub fn label(self) -> &'static str {
        match self {
            Surface::S0 => "S0",
            Surface::S1 => "S1",
            Surface::S2 => "S2",
            Surface::S0S1 => "S0∩S1",
            Surface::S0S2 => "S0∩S2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationHit {
    pub surface: Surface,
    pub double_root: Option<f64>,
    /// `(|q(λ)|, |q′(λ)|)` at the reported double root, with `q` taken on
    /// the exact branch `M = s_i_m(a, i)`.
    pub residuals: Option<(f64, f64)>,
    /// `M − s_i_m(a, i)` for the matched branch.
    pub m_offset: Option<f64>,
}

const S0_TOL: f64 = 1e-9;
const BRANCH_TOL: f64 = 1e-6;

pub fn bifurcation_scan(params: FlowParams, ra: f64) -> Option<BifurcationHit> {
    let a = params.a();
    let m = params.m();
    let a4 = a * a * a * a;
    let on_s0 = (ra - a4).abs() <= S0_TOL * a4;
    let branch = [Branch::One, Branch::Two].into_iter().find(|&b| {
        let target = s_i_m(a, b);
        (m - target).abs() <= BRANCH_TOL * target.abs()
    });

    match (on_s0, branch) {
        (false, None) => None,
        (true, None) => Some(BifurcationHit {
            surface: Surface::S0,
            double_root: None,
            residuals: None,
            m_offset: None,
        }),
        (false, Some(b)) => Some(BifurcationHit {
            surface: if b == Branch::One {
                Surface::S1
            } else {
                Surface::S2
            },
            double_root: None,
            residuals: None,
            m_offset: Some(m - s_i_m(a, b)),
        }),
        (true, Some(b)) => {
            let lambda = s_i_double_root(a, b);
            let q = reduced_quintic(a, s_i_m(a, b));
            let res = (q.eval(lambda).abs(), q.derivative().eval(lambda).abs());
            Some(BifurcationHit {
                surface: if b == Branch::One {
                    Surface::S0S1
                } else {
                    Surface::S0S2
                },
                double_root: Some(lambda),
                residuals: Some(res),
                m_offset: Some(m - s_i_m(a, b)),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(a: f64, m: f64) -> FlowParams {
        FlowParams::new(a, m).unwrap()
    }

    fn close(x: f64, y: f64, rel: f64) -> bool {
        (x - y).abs() <= rel * y.abs().max(1e-300)
    }

    #[test]
    fn charpoly_on_s0_has_zero_constant_term() {
        let p = build_charpoly(params(1.0, 0.0), 1.0);
        assert_eq!(p.coeffs()[0], 0.0);
        assert_eq!(p.coeffs()[6], 1.0);
        assert_eq!(p.coeffs()[5], 0.0);
        assert_eq!(p.coeffs()[3], 0.0);
    }

    #[test]
    fn charpoly_constant_term_at_classical_point() {
        let a: f64 = 3.117;
        let p = build_charpoly(params(a, 0.0), 1707.762);
        let expected = 1707.762 * a * a - a.powi(6);
        assert!(close(p.coeffs()[0], expected, 1e-14));
        assert!((p.coeffs()[0] - 15674.976).abs() < 1e-3);
        // (λ² − a²)³ + Ra a² at λ = 0
        let direct = (-a * a).powi(3) + 1707.762 * a * a;
        assert!(close(p.eval(Complex64::new(0.0, 0.0)).re, direct, 1e-12));
    }

    #[test]
    fn charpoly_matches_factored_form() {
        let pr = params(1.7, -3.2);
        let p = build_charpoly(pr, 412.0);
        let a2 = 1.7 * 1.7;
        for z in [
            Complex64::new(0.3, 0.9),
            Complex64::new(-2.5, 0.1),
            Complex64::new(4.0, -3.0),
        ] {
            let w = z * z - a2;
            let direct = w * w * w + z * (-3.2 * a2) + 412.0 * a2;
            assert!((p.eval(z) - direct).norm() <= 1e-12 * direct.norm().max(1.0));
        }
    }

    #[test]
    fn perfect_cube_gives_two_triple_roots() {
        let rs = find_roots(&build_charpoly(params(1.0, 0.0), 0.0)).unwrap();
        assert_eq!(rs.multiplicities(), vec![3, 3]);
        let centers: Vec<f64> = rs.clusters().iter().map(|c| c.center.re).collect();
        assert!((centers[0] + 1.0).abs() < 1e-12);
        assert!((centers[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn exact_branch_point_gives_double_root() {
        let m = s_i_m(1.0, Branch::One);
        let rs = find_roots(&build_charpoly(params(1.0, m), 1.0)).unwrap();
        assert_eq!(rs.multiplicities(), vec![2, 1, 1, 1, 1]);
        let double = rs.clusters().iter().find(|c| c.multiplicity == 2).unwrap();
        assert!((double.center.re + 1.165443).abs() < 1e-6);
        assert!(rs.roots().iter().any(|z| z.norm() == 0.0));
    }

    #[test]
    fn rounded_branch_value_is_near_double_root() {
        let rs = find_roots(&build_charpoly(params(1.0, 0.897497), 1.0)).unwrap();
        let nearest = rs
            .roots()
            .iter()
            .map(|z| (z - Complex64::new(-1.165443, 0.0)).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-3);
    }

    #[test]
    fn vieta_at_generic_point() {
        let rs = find_roots(&build_charpoly(params(2.0, 5.0), 300.0)).unwrap();
        assert_eq!(rs.multiplicities(), vec![1; 6]);
        let roots = rs.roots();
        let sum: Complex64 = roots.iter().sum();
        let prod: Complex64 = roots.iter().product();
        assert!(sum.norm() <= 1e-10 * (1.0 + rs.max_modulus()));
        assert!((prod - 1136.0).norm() <= 1e-8 * 1137.0);
    }

    #[test]
    fn ns_curve_values() {
        assert!(close(ns_curve(1, PI), 8.0 * PI.powi(4), 1e-14));
        assert!((ns_curve(1, PI) - 779.273).abs() < 1e-3);
        let a = PI / 2f64.sqrt();
        assert!(close(ns_curve(1, a), 27.0 * PI.powi(4) / 4.0, 1e-13));
        assert!((ns_curve(1, a) - 657.511).abs() < 1e-3);
        let direct = (9.0 * PI * PI + 1.0).powi(3);
        assert!(close(ns_curve(2, 1.0), direct, 1e-14));
        assert!((ns_curve(2, 1.0) - 724_790.611).abs() < 1e-3);
    }

    #[test]
    fn ns_curve_minimum_is_at_pi_over_root_two() {
        let a0 = PI / 2f64.sqrt();
        let f0 = ns_curve(1, a0);
        for da in [-1e-3, 1e-3, -0.1, 0.1] {
            assert!(ns_curve(1, a0 + da) > f0);
        }
    }

    #[test]
    fn branch_values() {
        assert!((s_i_m(1.0, Branch::One) - 0.897497).abs() < 1e-6);
        assert!((s_i_m(1.0, Branch::Two) - 1.242811).abs() < 1e-6);
        assert!(close(
            s_i_m(2.0, Branch::One),
            8.0 * s_i_m(1.0, Branch::One),
            1e-14
        ));
        assert!((s_i_m(2.0, Branch::One) - 7.179976).abs() < 1e-5);
    }

    #[test]
    fn scan_reports_s0_intersections() {
        let hit = bifurcation_scan(params(1.0, 0.897497), 1.0).unwrap();
        assert_eq!(hit.surface, Surface::S0S1);
        assert!((hit.double_root.unwrap() + 1.165443).abs() < 1e-6);
        let (q, dq) = hit.residuals.unwrap();
        assert!(q <= 1e-8 && dq <= 1e-8);

        let hit = bifurcation_scan(params(1.0, 1.242811), 1.0).unwrap();
        assert_eq!(hit.surface, Surface::S0S2);
        assert!((hit.double_root.unwrap() + 0.664637).abs() < 1e-6);

        let hit = bifurcation_scan(params(1.0, 5.0), 1.0).unwrap();
        assert_eq!(hit.surface, Surface::S0);
        assert!(hit.double_root.is_none());

        assert!(bifurcation_scan(params(1.0, 5.0), 2.0).is_none());
        let hit = bifurcation_scan(params(1.0, s_i_m(1.0, Branch::Two)), 7.0).unwrap();
        assert_eq!(hit.surface, Surface::S2);
    }

    #[test]
    fn reduced_quintic_times_lambda_is_charpoly_on_s0() {
        let (a, m) = (1.3, 2.4);
        let p = build_charpoly(params(a, m), a.powi(4));
        let q = reduced_quintic(a, m);
        for x in [-2.0, -0.3, 0.7, 1.9] {
            let z = Complex64::new(x, 0.0);
            assert!((p.eval(z).re - x * q.eval(x)).abs() < 1e-12 * (1.0 + p.eval(z).norm()));
        }
    }
}
