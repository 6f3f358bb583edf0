//! Numerical zeros, closed-form zeros of the `eta = 2` derivative family,
//! rotation-orbit grouping and the r-star probe.
//!
//! The solver is Aberth-Ehrlich simultaneous iteration in `f64`. Positions
//! live in `f64`, but whenever plain Horner evaluation cannot be trusted the
//! Newton ratio `P(z)/P'(z)` is taken from adaptive fixed-point evaluation
//! (falling back to exact) at the dyadic point `z`, so ill-conditioned monomial-basis polynomials (degree ~100
//! Fibonacci polynomials cancel through 45 decimal digits) still converge to
//! the nearest representable roots. Multiplicities never come from numeric
//! clustering: they are the exponents of Yun's square-free decomposition.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{bigint_log2, rational_to_f64, ExactPolyError, IntPolynomial, Rational};
use crate::rbonacci::{build_recurrence, RBonacciParams};
use crate::vieta::{derivative_spec, upsilon_psi, DerivativeSpec, VietaError};

/// Default residual target for every reported root.
pub const DEFAULT_RESIDUAL: f64 = 1e-10;
/// Relative tolerance used when matching a root against a rotated root.
pub const ORBIT_TOLERANCE: f64 = 1e-8;
const MAX_ITERATIONS: usize = 800;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("polynomial has no zeros to find (degree {0:?})")]
    Constant(Option<usize>),
    #[error("root iteration did not converge after {iterations} iterations (worst residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("orbit of {value} has {found} members under rotation by 2pi/{r}")]
    OrbitIncomplete { value: Complex64, found: usize, r: usize },
    #[error("invalid closed-form request: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Poly(#[from] ExactPolyError),
}

impl From<VietaError> for RootError {
    fn from(e: VietaError) -> Self {
        RootError::InvalidSpec(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: usize,
    /// `|P(z)/lc(P)| / max(1, |z|)^deg`
    pub residual: f64,
}

/// All zeros of a polynomial with multiplicities, grouped into rotation
/// orbits under `z -> z e^{2 pi i / r}`. With `r = 1` every root is its own
/// orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRootSet {
    pub roots: Vec<Root>,
    pub orbit_ids: Vec<usize>,
    pub r: usize,
    pub degree: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RootRecord {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
    pub orbit_id: usize,
    pub residual: f64,
}

impl ComplexRootSet {
    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    /// Every root repeated according to its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
            .collect()
    }

    pub fn orbit_count(&self) -> usize {
        self.orbit_ids.iter().max().map_or(0, |m| m + 1)
    }

    /// Member indices of each orbit, in orbit-id order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.orbit_count()];
        for (i, &id) in self.orbit_ids.iter().enumerate() {
            out[id].push(i);
        }
        out
    }

    /// Regroup under rotation by `2 pi / r`. Roots match when they share a
    /// multiplicity and lie within [`ORBIT_TOLERANCE`] (relative) of an exact
    /// rotation. Zero forms its own orbit.
    pub fn with_orbits(mut self, r: usize) -> Result<Self, RootError> {
        assert!(r >= 1);
        let n = self.roots.len();
        let mut ids = vec![usize::MAX; n];
        let mut next = 0;
        let w = Complex64::from_polar(1.0, TAU / r as f64);
        for i in 0..n {
            if ids[i] != usize::MAX {
                continue;
            }
            ids[i] = next;
            let base = self.roots[i];
            if base.value.norm() == 0.0 {
                next += 1;
                continue;
            }
            let mut found = 1;
            let mut target = base.value;
            for _ in 1..r {
                target *= w;
                let hit = (0..n)
                    .filter(|&j| ids[j] == usize::MAX && self.roots[j].multiplicity == base.multiplicity)
                    .map(|j| (j, (self.roots[j].value - target).norm()))
                    .filter(|&(_, d)| d <= 2.0 * ORBIT_TOLERANCE * base.value.norm())
                    .min_by(|a, b| a.1.total_cmp(&b.1));
                if let Some((j, _)) = hit {
                    ids[j] = next;
                    found += 1;
                }
            }
            if found != r {
                return Err(RootError::OrbitIncomplete {
                    value: base.value,
                    found,
                    r,
                });
            }
            next += 1;
        }
        self.orbit_ids = ids;
        self.r = r;
        Ok(self)
    }

    pub fn records(&self) -> Vec<RootRecord> {
        self.roots
            .iter()
            .zip(&self.orbit_ids)
            .map(|(root, &orbit_id)| RootRecord {
                re: root.value.re,
                im: root.value.im,
                multiplicity: root.multiplicity,
                orbit_id,
                residual: root.residual,
            })
            .collect()
    }

    /// `re,im,multiplicity,orbit_id,residual` with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity,orbit_id,residual\n");
        for rec in self.records() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{},{},{:.16e}",
                rec.re, rec.im, rec.multiplicity, rec.orbit_id, rec.residual
            );
        }
        out
    }
}

/// All complex zeros of `p` with exact multiplicities.
///
/// The zero root is split off exactly, the rest goes through Yun's
/// decomposition, and each square-free factor is solved by Aberth iteration
/// with exact Newton ratios. Fails with `NonConvergence` rather than
/// returning any root whose residual against `p` exceeds `target_residual`.
pub fn find_roots(p: &IntPolynomial, target_residual: f64) -> Result<ComplexRootSet, RootError> {
    let degree = match p.degree() {
        Some(d) if d >= 1 => d,
        other => return Err(RootError::Constant(other)),
    };
    let zero_mult = p.zero_root_multiplicity();
    let rest = p.unshift(zero_mult);
    let mut roots = Vec::new();
    if zero_mult > 0 {
        roots.push(Root {
            value: Complex64::new(0.0, 0.0),
            multiplicity: zero_mult,
            residual: 0.0,
        });
    }
    let mut iterations = 0;
    for (factor, mult) in rest.square_free_decomposition()? {
        let solved = solve_square_free(&factor);
        iterations = iterations.max(solved.iterations);
        for z in solved.roots {
            roots.push(Root {
                value: z,
                multiplicity: mult,
                residual: residual(p, z),
            });
        }
    }
    let worst = roots.iter().map(|r| r.residual).fold(0.0, f64::max);
    if !(worst <= target_residual) {
        return Err(RootError::NonConvergence {
            iterations,
            residual: worst,
        });
    }
    roots.sort_by(|a, b| {
        root_order(a.value)
            .total_cmp(&root_order(b.value))
            .then(a.value.norm().total_cmp(&b.value.norm()))
    });
    let orbit_ids = (0..roots.len()).collect();
    Ok(ComplexRootSet {
        roots,
        orbit_ids,
        r: 1,
        degree,
    })
}

/// Sort key: zero first, then argument in `[0, 2 pi)`.
fn root_order(z: Complex64) -> f64 {
    if z.norm() == 0.0 {
        -1.0
    } else {
        z.arg().rem_euclid(TAU)
    }
}

/// `|P(z)/lc(P)| / max(1, |z|)^deg`, evaluated exactly then rounded.
pub fn residual(p: &IntPolynomial, z: Complex64) -> f64 {
    let Some(lead) = p.leading() else {
        return 0.0;
    };
    let value = p.eval_wide(z);
    if value.is_zero() {
        return 0.0;
    }
    let deg = p.degree().unwrap_or(0) as f64;
    let log2 = value.abs_log2() - bigint_log2(lead) - deg * z.norm().log2().max(0.0);
    log2.exp2()
}

struct Solved {
    roots: Vec<Complex64>,
    iterations: usize,
}

/// Newton ratio `P(z)/P'(z)`, from `f64` Horner when its running error bound
/// leaves a wide margin, otherwise from adaptive-precision evaluation.
struct NewtonRatio<'a> {
    poly: &'a IntPolynomial,
    deriv: IntPolynomial,
    monic: Vec<f64>,
    monic_deriv: Vec<f64>,
}

impl<'a> NewtonRatio<'a> {
    fn new(poly: &'a IntPolynomial) -> Self {
        let deriv = poly.formal_derivative(1);
        let monic = poly.monic_f64();
        let lead = poly.leading().expect("nonzero");
        let monic_deriv = deriv
            .coeffs()
            .iter()
            .map(|c| crate::exactpoly::ratio_to_f64(c, lead))
            .collect();
        NewtonRatio {
            poly,
            deriv,
            monic,
            monic_deriv,
        }
    }

    fn horner(coeffs: &[f64], z: Complex64) -> Option<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut bound = 0.0;
        let zn = z.norm();
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
            bound = bound * zn + acc.norm();
        }
        let slack = 8.0 * coeffs.len() as f64 * f64::EPSILON * bound;
        (acc.is_finite() && slack.is_finite() && acc.norm() > 1e3 * slack).then_some(acc)
    }

    fn at(&self, z: Complex64) -> Complex64 {
        if let (Some(p), Some(dp)) = (Self::horner(&self.monic, z), Self::horner(&self.monic_deriv, z)) {
            return p / dp;
        }
        let p = self.poly.eval_accurate(z);
        if p.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        let dp = self.deriv.eval_accurate(z);
        if dp.is_zero() {
            // stationary point: nudge off it
            return Complex64::new(1e-6 * z.norm().max(1.0), 1e-6 * z.norm().max(1.0));
        }
        p.ratio(&dp)
    }
}

/// Starting points from the Newton polygon of `log2 |a_i|`: each edge of the
/// upper convex hull from `i` to `j` puts `j - i` points on a circle whose
/// radius is the edge's slope, `(|a_i| / |a_j|)^(1/(j-i))`. Angles within a
/// circle are equispaced with a golden-angle offset per circle, so the
/// starting set never shares the polynomial's own rotation symmetry.
fn initial_guesses(poly: &IntPolynomial) -> Vec<Complex64> {
    let points: Vec<(usize, f64)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
        .map(|(i, c)| (i, bigint_log2(c)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or below the chord a..pt
            let cross = (b.0 as f64 - a.0 as f64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let golden = PI * (3.0 - 5f64.sqrt());
    let mut out = Vec::with_capacity(poly.degree().unwrap_or(0));
    for (edge, pair) in hull.windows(2).enumerate() {
        let ((i, li), (j, lj)) = (pair[0], pair[1]);
        let count = j - i;
        let radius = ((li - lj) / count as f64).exp2();
        let offset = golden * (edge as f64 + 1.0) + 0.5;
        for k in 0..count {
            let angle = TAU * k as f64 / count as f64 + offset;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

fn solve_square_free(poly: &IntPolynomial) -> Solved {
    let m = poly.degree().expect("nonconstant factor");
    if m == 1 {
        let z = -rational_to_f64(&Rational::new(poly.coeff(0), poly.coeff(1)));
        return Solved {
            roots: vec![Complex64::new(z, 0.0)],
            iterations: 0,
        };
    }
    let ratio = NewtonRatio::new(poly);
    let mut z = initial_guesses(poly);
    let mut done = vec![false; m];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let n = ratio.at(z[i]);
            if n.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let repulsion: Complex64 = (0..m).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let denom = Complex64::new(1.0, 0.0) - n * repulsion;
            let step = if denom.is_finite() && denom.norm() > 0.0 {
                n / denom
            } else {
                n
            };
            if !step.is_finite() {
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                done[i] = true;
            }
        }
    }
    // Newton polish with exact ratios
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let step = ratio.at(*zi);
            if step.norm() == 0.0 || !step.is_finite() {
                break;
            }
            let candidate = *zi - step;
            let size = |w: Complex64| poly.eval_accurate(w).abs_log2();
            if size(candidate) <= size(*zi) {
                *zi = candidate;
            } else {
                break;
            }
        }
    }
    Solved { roots: z, iterations }
}

/// Largest relative distance from `z e^{2 pi i / r}` to the nearest found
/// root of the same multiplicity, over all nonzero roots.
pub fn rotation_closure_defect(set: &ComplexRootSet, r: usize) -> f64 {
    let w = Complex64::from_polar(1.0, TAU / r as f64);
    set.roots
        .iter()
        .filter(|root| root.value.norm() > 0.0)
        .map(|root| {
            let target = root.value * w;
            set.roots
                .iter()
                .filter(|other| other.multiplicity == root.multiplicity)
                .map(|other| (other.value - target).norm() / root.value.norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// One representative per nonzero orbit, each with argument in the window
/// `(pi - 2 pi / r, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRoots {
    pub representatives: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
    pub rule: String,
}

/// Angular offset of `z` below `pi`, in `[0, 2 pi)`, with values a hair
/// under `2 pi` folded onto zero so that `-1 - 0i` counts as argument `pi`.
fn offset_below_pi(z: Complex64) -> f64 {
    let d = (PI - z.arg()).rem_euclid(TAU);
    if TAU - d < 1e-9 {
        0.0
    } else {
        d
    }
}

pub fn reference_roots(set: &ComplexRootSet) -> Result<ReferenceRoots, RootError> {
    let r = set.r;
    let mut representatives = Vec::new();
    let mut multiplicities = Vec::new();
    for orbit in set.orbits() {
        let first = set.roots[orbit[0]];
        if first.value.norm() == 0.0 {
            continue;
        }
        if orbit.len() != r {
            return Err(RootError::OrbitIncomplete {
                value: first.value,
                found: orbit.len(),
                r,
            });
        }
        let best = orbit
            .iter()
            .map(|&i| set.roots[i].value)
            .min_by(|a, b| offset_below_pi(*a).total_cmp(&offset_below_pi(*b)))
            .expect("nonempty orbit");
        representatives.push(best);
        multiplicities.push(first.multiplicity);
    }
    Ok(ReferenceRoots {
        representatives,
        multiplicities,
        rule: format!("arg in (pi - 2pi/{r}, pi]"),
    })
}

/// Zeros of `R_{rn+p}^{(t)}` for the `eta = 2` member of the derivative
/// family, straight from the quadratic satisfied by the r-th powers.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticOrbitRoots {
    pub spec: DerivativeSpec,
    pub upsilon: Rational,
    pub psi: Rational,
    pub y_plus: Complex64,
    pub y_minus: Complex64,
    /// r-th roots of `y_plus` (k = 0..r) followed by those of `y_minus`
    pub roots: Vec<Complex64>,
    /// `psi^2 = 4 upsilon`, both `y` values coincide
    pub degenerate: bool,
}

/// `x = ((psi +- sqrt(psi^2 - 4 upsilon)) / 2)^(1/r) e^{2 k pi i / r}`.
pub fn quadratic_orbit_roots(r: usize, n: usize, p: usize) -> Result<QuadraticOrbitRoots, RootError> {
    if r < 2 || n < 1 || (r - 1) * n < 3 {
        return Err(RootError::InvalidSpec(format!(
            "two reference zeros need (r-1)n >= 3, got r={r} n={n}"
        )));
    }
    let spec = derivative_spec(r, n, p, (r - 1) * n - 2)?;
    debug_assert_eq!(spec.eta, 2);
    debug_assert_eq!(
        spec.t as i64,
        (r * (r - 1) * n) as i64 - 2 * r as i64 - (1 - p as i64) * (r as i64 - 1)
    );
    let (upsilon, psi) = upsilon_psi(&spec);
    let disc = &psi * &psi - Rational::from_integer(4.into()) * &upsilon;
    let degenerate = num_traits::Zero::is_zero(&disc);
    let psi_f = rational_to_f64(&psi);
    let ups_f = rational_to_f64(&upsilon);
    let sqrt_disc = Complex64::new(rational_to_f64(&disc), 0.0).sqrt();
    let psi_c = Complex64::new(psi_f, 0.0);
    let plus = (psi_c + sqrt_disc) / 2.0;
    let minus = (psi_c - sqrt_disc) / 2.0;
    // recover the cancelling branch from the product
    let (y_plus, y_minus) = if degenerate || sqrt_disc.im != 0.0 {
        (plus, minus)
    } else if psi_f < 0.0 {
        (Complex64::new(ups_f, 0.0) / minus, minus)
    } else {
        (plus, Complex64::new(ups_f, 0.0) / plus)
    };
    let mut roots = Vec::with_capacity(2 * r);
    for y in [y_plus, y_minus] {
        let modulus = y.norm().powf(1.0 / r as f64);
        for k in 0..r {
            let angle = (y.arg() + TAU * k as f64) / r as f64;
            roots.push(Complex64::from_polar(modulus, angle));
        }
    }
    Ok(QuadraticOrbitRoots {
        spec,
        upsilon,
        psi,
        y_plus,
        y_minus,
        roots,
        degenerate,
    })
}

/// Smallest `d` such that the two multisets can be paired one-to-one with
/// every pair within `d`. `None` when the sizes differ.
pub fn matching_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    if a.is_empty() {
        return Some(0.0);
    }
    let dist: Vec<Vec<f64>> = a.iter().map(|x| b.iter().map(|y| (x - y).norm()).collect()).collect();
    let mut candidates: Vec<f64> = dist.iter().flatten().copied().collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(&dist, candidates[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(candidates[lo])
}

fn perfect_matching(dist: &[Vec<f64>], limit: f64) -> bool {
    fn augment(u: usize, dist: &[Vec<f64>], limit: f64, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for v in 0..dist.len() {
            if dist[u][v] <= limit && !seen[v] {
                seen[v] = true;
                if owner[v].is_none_or(|w| augment(w, dist, limit, seen, owner)) {
                    owner[v] = Some(u);
                    return true;
                }
            }
        }
        false
    }
    let n = dist.len();
    let mut owner = vec![None; n];
    (0..n).all(|u| augment(u, dist, limit, &mut vec![false; n], &mut owner))
}

#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    /// sector `[2 pi k / r, 2 pi (k+1) / r)`
    pub sector: usize,
    pub innermost_re: f64,
    pub innermost_im: f64,
    pub y_re: f64,
    pub y_im: f64,
    /// `|x^r + 1|` for the innermost root
    pub distance_to_minus_one: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct YImage {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

/// Geometry of the zeros of `R_{rn+p}` relative to the zeros of `x^r + 1`.
#[derive(Debug, Clone, Serialize)]
pub struct StarProbeReport {
    pub r: usize,
    pub n: usize,
    pub p: usize,
    pub degree: usize,
    pub zero_multiplicity: usize,
    pub orbit_count: usize,
    pub branches: Vec<Branch>,
    /// `x^r` for one representative per nonzero orbit
    pub y_images: Vec<YImage>,
    pub min_branch_distance: Option<f64>,
    pub max_residual: f64,
}

impl StarProbeReport {
    pub fn summary(&self) -> String {
        let mut out = format!(
            "R_{} (r={} n={} p={}): degree {}, zero multiplicity {}, {} nonzero orbits, max residual {:.3e}\n",
            self.r * self.n + self.p,
            self.r,
            self.n,
            self.p,
            self.degree,
            self.zero_multiplicity,
            self.orbit_count,
            self.max_residual
        );
        for b in &self.branches {
            let _ = writeln!(
                out,
                "  sector {}: innermost {:.6}{:+.6}i, x^r = {:.6}{:+.6}i, distance to -1: {:.3e}",
                b.sector, b.innermost_re, b.innermost_im, b.y_re, b.y_im, b.distance_to_minus_one
            );
        }
        match self.min_branch_distance {
            Some(d) => {
                let _ = writeln!(out, "branch distance to -1: {d:.3e}");
            }
            None => out.push_str("branch distance to -1: n/a (no nonzero zeros)\n"),
        }
        out
    }
}

pub fn star_probe(r: usize, n: usize, p: usize, target_residual: f64) -> Result<StarProbeReport, RootError> {
    let params = RBonacciParams::new(r, r * n + p).map_err(|e| RootError::InvalidSpec(e.to_string()))?;
    let poly = build_recurrence(params);
    let set = find_roots(&poly, target_residual)?.with_orbits(r)?;
    let reference = reference_roots(&set)?;
    let sector_width = TAU / r as f64;
    let mut branches = Vec::new();
    for sector in 0..r {
        let innermost = set
            .roots
            .iter()
            .map(|root| root.value)
            .filter(|z| z.norm() > 0.0)
            .filter(|z| ((z.arg().rem_euclid(TAU) / sector_width).floor() as usize).min(r - 1) == sector)
            .min_by(|a, b| a.norm().total_cmp(&b.norm()));
        if let Some(z) = innermost {
            let y = z.powu(r as u32);
            branches.push(Branch {
                sector,
                innermost_re: z.re,
                innermost_im: z.im,
                y_re: y.re,
                y_im: y.im,
                distance_to_minus_one: (y + 1.0).norm(),
            });
        }
    }
    let y_images = reference
        .representatives
        .iter()
        .zip(&reference.multiplicities)
        .map(|(z, &m)| {
            let y = z.powu(r as u32);
            YImage {
                re: y.re,
                im: y.im,
                multiplicity: m,
            }
        })
        .collect();
    let min_branch_distance = branches.iter().map(|b| b.distance_to_minus_one).min_by(f64::total_cmp);
    Ok(StarProbeReport {
        r,
        n,
        p,
        degree: set.degree,
        zero_multiplicity: poly.zero_root_multiplicity(),
        orbit_count: reference.representatives.len(),
        branches,
        y_images,
        min_branch_distance,
        max_residual: set.max_residual(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbonacci::build_derivative_closed_form;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn b6_has_five_quadruple_roots() {
        let b6 = p(&[1, 0, 0, 0, 0, 1]).pow(4);
        let set = find_roots(&b6, DEFAULT_RESIDUAL).unwrap();
        assert_eq!(set.roots.len(), 5);
        assert!(set.roots.iter().all(|r| r.multiplicity == 4));
        for root in &set.roots {
            assert!((root.value.powu(5) + 1.0).norm() < 1e-12);
        }
        assert_eq!(set.total_multiplicity(), 20);
    }

    #[test]
    fn cube_roots_of_minus_one() {
        let set = find_roots(&p(&[1, 0, 0, 1]), DEFAULT_RESIDUAL).unwrap();
        let want = [
            Complex64::new(-1.0, 0.0),
            Complex64::from_polar(1.0, PI / 3.0),
            Complex64::from_polar(1.0, -PI / 3.0),
        ];
        let got = set.expanded();
        assert!(matching_distance(&got, &want).unwrap() < 1e-14);
    }

    #[test]
    fn t6_derivative_matches_closed_form() {
        let poly = p(&[144, 0, 0, 3360, 0, 0, 5040]);
        let set = find_roots(&poly, DEFAULT_RESIDUAL).unwrap();
        let closed = quadratic_orbit_roots(3, 2, 0).unwrap();
        assert!(matching_distance(&set.expanded(), &closed.roots).unwrap() < 1e-10);
        for z in &closed.roots {
            assert!(poly.eval(*z).norm() < 1e-9);
        }
    }

    #[test]
    fn constant_rejected() {
        assert!(matches!(find_roots(&p(&[3]), 1e-10), Err(RootError::Constant(Some(0)))));
        assert!(matches!(
            find_roots(&IntPolynomial::zero(), 1e-10),
            Err(RootError::Constant(None))
        ));
    }

    #[test]
    fn orbit_grouping_and_reference() {
        let set = find_roots(&p(&[0, 1, 0, 0, 1]), DEFAULT_RESIDUAL)
            .unwrap()
            .with_orbits(3)
            .unwrap();
        assert_eq!(set.orbit_count(), 2);
        let refs = reference_roots(&set).unwrap();
        assert_eq!(refs.representatives.len(), 1);
        assert!(close(refs.representatives[0], Complex64::new(-1.0, 0.0), 1e-14));

        let b6 = find_roots(&p(&[1, 0, 0, 0, 0, 1]).pow(4), DEFAULT_RESIDUAL)
            .unwrap()
            .with_orbits(5)
            .unwrap();
        let refs = reference_roots(&b6).unwrap();
        assert_eq!(refs.representatives.len(), 1);
        assert!(close(refs.representatives[0], Complex64::new(-1.0, 0.0), 1e-14));
        assert_eq!(refs.multiplicities, vec![4]);
    }

    #[test]
    fn wrong_modulus_is_orbit_incomplete() {
        let set = find_roots(&p(&[1, 0, 0, 1]), DEFAULT_RESIDUAL).unwrap();
        assert!(matches!(set.with_orbits(2), Err(RootError::OrbitIncomplete { .. })));
    }

    #[test]
    fn q8_closed_form_values() {
        let q = quadratic_orbit_roots(4, 2, 0).unwrap();
        assert_eq!(q.roots.len(), 8);
        assert!(q
            .roots
            .iter()
            .any(|z| close(*z, Complex64::new(0.127788, 0.127788), 1e-6)));
        assert!(q
            .roots
            .iter()
            .any(|z| close(*z, Complex64::new(0.36255, 0.36255), 1e-5)));
        // Vieta at the level of y
        assert!((q.y_plus + q.y_minus - rational_to_f64(&q.psi)).norm() < 1e-12);
        assert!((q.y_plus * q.y_minus - rational_to_f64(&q.upsilon)).norm() < 1e-12);
    }

    #[test]
    fn fibonacci_corollary_instance() {
        let q = quadratic_orbit_roots(2, 3, 1).unwrap();
        assert_eq!(q.spec.t, 2);
        let poly = build_derivative_closed_form(RBonacciParams::new(2, 7).unwrap(), 2);
        let set = find_roots(&poly, DEFAULT_RESIDUAL).unwrap();
        assert!(matching_distance(&set.expanded(), &q.roots).unwrap() < 1e-10);
    }

    #[test]
    fn quadratic_requires_two_reference_zeros() {
        assert!(matches!(quadratic_orbit_roots(2, 2, 0), Err(RootError::InvalidSpec(_))));
        assert!(matches!(quadratic_orbit_roots(3, 2, 3), Err(RootError::InvalidSpec(_))));
    }

    #[test]
    fn matching_is_bottleneck_optimal() {
        let a = [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
        let b = [Complex64::new(1.1, 0.0), Complex64::new(0.1, 0.0)];
        assert!((matching_distance(&a, &b).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(matching_distance(&a, &b[..1]), None);
    }

    #[test]
    fn probe_examples() {
        let rep = star_probe(3, 1, 1, DEFAULT_RESIDUAL).unwrap();
        assert!(rep.min_branch_distance.unwrap() < 1e-10);
        let rep = star_probe(2, 3, 0, DEFAULT_RESIDUAL).unwrap();
        let mut ys: Vec<f64> = rep.y_images.iter().map(|y| y.re).collect();
        ys.sort_by(f64::total_cmp);
        assert!((ys[0] + 3.0).abs() < 1e-12 && (ys[1] + 1.0).abs() < 1e-12);
        assert!(rep.y_images.iter().all(|y| y.im.abs() < 1e-12));
        let rep = star_probe(3, 3, 0, DEFAULT_RESIDUAL).unwrap();
        assert!(rep.min_branch_distance.unwrap() > 0.0);
    }

    #[test]
    fn csv_layout() {
        let set = find_roots(&p(&[0, 1, 0, 0, 1]), DEFAULT_RESIDUAL)
            .unwrap()
            .with_orbits(3)
            .unwrap();
        let csv = set.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("re,im,multiplicity,orbit_id,residual"));
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(
            first,
            [
                "0.0000000000000000e0",
                "0.0000000000000000e0",
                "1",
                "0",
                "0.0000000000000000e0"
            ]
        );
        assert_eq!(csv.lines().count(), 5);
    }
}
