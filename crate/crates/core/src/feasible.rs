//! The parameter set Σ over which the interpolation constant is minimized.
//!
//! A point carries two interpolation weights `β₁ ∈ (θ, 1)`, `β₂ ∈ (0, θ)`, a
//! Riesz order `σ`, and four exponents. The large-time part of the estimate
//! splits `1/p = β₁/r₁ + (1-β₁)/q₁`, the small-time part
//! `1/p = β₂/q₂ + (1-β₂)/r₂`; `r₁, q₂` are paired with `(s₁, p₁)` and
//! `q₁, r₂` with `(s₂, p₂)`.
//!
//! Formula-level helpers ([`sigma_lower_bound`], [`r1_interval`],
//! [`r2_interval`], [`derive_q`]) use the pair labels exactly as given.
//! [`in_sigma`] and [`sample_sigma`] first reorient the problem so that pair 1
//! carries the larger level (see [`GnsProblem::oriented`]); points are always
//! expressed in oriented labels.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GnsError, Result};
use crate::exponents::{GnsProblem, LebesgueExponent};

/// Tolerance for equality-type constraints.
pub const CLOSED_TOL: f64 = 1e-12;
/// Membership margin used by the sampler.
pub const SAMPLE_MARGIN: f64 = 1e-9;
const BETA_BUFFER: f64 = 1e-4;
const COLLAPSE_TOL: f64 = 1e-15;

/// A candidate point of Σ, in oriented labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaPoint {
    pub beta1: f64,
    pub beta2: f64,
    pub r1: LebesgueExponent,
    pub r2: LebesgueExponent,
    pub q1: LebesgueExponent,
    pub q2: LebesgueExponent,
    pub sigma: f64,
}

impl SigmaPoint {
    /// `β₁/r₁`, the large-time share of `1/p` carried by pair 1.
    pub fn x1(&self) -> f64 {
        self.beta1 * self.r1.recip()
    }

    /// `(1-β₂)/r₂`, the small-time share of `1/p` carried by pair 2.
    pub fn x2(&self) -> f64 {
        (1.0 - self.beta2) * self.r2.recip()
    }
}

/// An open interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        !(self.hi > self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    fn clamp_to(&self, lo: f64, hi: f64) -> Interval {
        Interval { lo: self.lo.max(lo), hi: self.hi.min(hi) }
    }
}

/// Strict constraints must clear the requested margin; closed ones only need
/// to hold up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginKind {
    Strict,
    Closed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Margin {
    pub name: &'static str,
    pub value: f64,
    pub kind: MarginKind,
}

/// Signed distances of a point to every constraint of Σ.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub ok: bool,
    pub margin: f64,
    pub margins: Vec<Margin>,
}

impl FeasibilityReport {
    fn from_margins(margins: Vec<Margin>, margin: f64) -> Self {
        let ok = margins.iter().all(|m| match m.kind {
            MarginKind::Strict => m.value > margin,
            MarginKind::Closed => m.value >= -CLOSED_TOL,
        });
        Self { ok, margin, margins }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.margins.iter().find(|m| m.name == name).map(|m| m.value)
    }

    /// Names of the constraints that fail.
    pub fn violations(&self) -> Vec<&'static str> {
        self.margins
            .iter()
            .filter(|m| match m.kind {
                MarginKind::Strict => !(m.value > self.margin),
                MarginKind::Closed => !(m.value >= -CLOSED_TOL),
            })
            .map(|m| m.name)
            .collect()
    }

    /// Smallest strict margin.
    pub fn min_strict(&self) -> f64 {
        self.margins
            .iter()
            .filter(|m| m.kind == MarginKind::Strict)
            .map(|m| m.value)
            .fold(f64::INFINITY, f64::min)
    }
}

/// `E_j(σ) = 1/p_j - (s_j - s - 2σ)/d`, the largest admissible reciprocal of
/// an exponent smoothed into `(s_j, p_j)` at order `s + 2σ - s_j`.
fn ceiling1(problem: &GnsProblem, sigma: f64) -> f64 {
    problem.p1.recip() - (problem.s1 - problem.s - 2.0 * sigma) / problem.dim()
}

fn ceiling2(problem: &GnsProblem, sigma: f64) -> f64 {
    problem.p2.recip() - (problem.s2 - problem.s - 2.0 * sigma) / problem.dim()
}

/// Smoothing orders `(s + 2σ - s₁, s + 2σ - s₂)`.
pub fn smoothing_orders(problem: &GnsProblem, sigma: f64) -> (f64, f64) {
    let base = problem.s + 2.0 * sigma;
    (base - problem.s1, base - problem.s2)
}

/// `max(0, (s₂ - s)/2 - d/(2p₂))`.
pub fn sigma_lower_bound(problem: &GnsProblem) -> f64 {
    (0.5 * (problem.s2 - problem.s) - 0.5 * problem.dim() * problem.p2.recip()).max(0.0)
}

/// Unclamped interval for `β₁/r₁`: `(1/p - (1-β₁)E₂, β₁E₁)`.
pub fn r1_interval_raw(problem: &GnsProblem, sigma: f64, beta1: f64) -> Interval {
    Interval {
        lo: problem.p.recip() - (1.0 - beta1) * ceiling2(problem, sigma),
        hi: beta1 * ceiling1(problem, sigma),
    }
}

/// Unclamped interval for `(1-β₂)/r₂`: `(1/p - β₂E₁, (1-β₂)E₂)`.
pub fn r2_interval_raw(problem: &GnsProblem, sigma: f64, beta2: f64) -> Interval {
    Interval {
        lo: problem.p.recip() - beta2 * ceiling1(problem, sigma),
        hi: (1.0 - beta2) * ceiling2(problem, sigma),
    }
}

/// Interval for `β₁/r₁`, intersected with `[0, β₁]`.
pub fn r1_interval(problem: &GnsProblem, sigma: f64, beta1: f64) -> Interval {
    r1_interval_raw(problem, sigma, beta1).clamp_to(0.0, beta1)
}

/// Interval for `(1-β₂)/r₂`, intersected with `[0, 1-β₂]`.
pub fn r2_interval(problem: &GnsProblem, sigma: f64, beta2: f64) -> Interval {
    r2_interval_raw(problem, sigma, beta2).clamp_to(0.0, 1.0 - beta2)
}

/// `1/q₁ = (1/p - β₁/r₁)/(1-β₁)` and `1/q₂ = (1/p - (1-β₂)/r₂)/β₂`.
pub fn derive_q(
    problem: &GnsProblem,
    beta1: f64,
    beta2: f64,
    r1: LebesgueExponent,
    r2: LebesgueExponent,
) -> Result<(LebesgueExponent, LebesgueExponent)> {
    let u = problem.p.recip();
    let q1 = (u - beta1 * r1.recip()) / (1.0 - beta1);
    let q2 = (u - (1.0 - beta2) * r2.recip()) / beta2;
    let make = |recip: f64, name: &str| {
        LebesgueExponent::from_recip(recip).map_err(|_| {
            GnsError::OutOfRange(format!("derived 1/{name} = {recip} is outside [0, 1]"))
        })
    };
    Ok((make(q1, "q1")?, make(q2, "q2")?))
}

/// Exponents of `t` in the small-time and large-time integrands, computed
/// term by term from the smoothing constants they come from.
pub fn time_exponents(problem: &GnsProblem, point: &SigmaPoint) -> (f64, f64) {
    let (o1, o2) = smoothing_orders(problem, point.sigma);
    let half_d = 0.5 * problem.dim();
    let (u1, u2) = (problem.p1.recip(), problem.p2.recip());
    let small = point.sigma
        - 1.0
        - point.beta2 * (0.5 * o1 + half_d * (u1 - point.q2.recip()))
        - (1.0 - point.beta2) * (0.5 * o2 + half_d * (u2 - point.r2.recip()));
    let large = point.sigma
        - 1.0
        - point.beta1 * (0.5 * o1 + half_d * (u1 - point.r1.recip()))
        - (1.0 - point.beta1) * (0.5 * o2 + half_d * (u2 - point.q1.recip()));
    (small, large)
}

/// Checks every constraint of Σ for a point in oriented labels. Strict
/// constraints must exceed `margin`.
pub fn in_sigma(problem: &GnsProblem, point: &SigmaPoint, margin: f64) -> FeasibilityReport {
    let problem = problem.oriented();
    let theta = match problem.theta() {
        Ok(t) => t.value(),
        Err(_) => {
            return FeasibilityReport::from_margins(
                vec![Margin { name: "admissible", value: f64::NEG_INFINITY, kind: MarginKind::Strict }],
                margin,
            )
        }
    };
    let u = problem.p.recip();
    let (u1, u2) = (problem.p1.recip(), problem.p2.recip());
    let sigma = point.sigma;
    let (e1, e2) = (ceiling1(&problem, sigma), ceiling2(&problem, sigma));
    let (o1, o2) = smoothing_orders(&problem, sigma);
    let (b1, b2) = (point.beta1, point.beta2);
    let (x1, x2) = (point.x1(), point.x2());
    let i1 = r1_interval_raw(&problem, sigma, b1);
    let i2 = r2_interval_raw(&problem, sigma, b2);

    use MarginKind::{Closed, Strict};
    let m = |name, value, kind| Margin { name, value, kind };
    let mut margins = vec![
        m("beta1_lower", b1 - theta, Strict),
        m("beta1_upper", 1.0 - b1, Strict),
        m("beta2_lower", b2, Strict),
        m("beta2_upper", theta - b2, Strict),
        m("sigma_positive", sigma, Strict),
        m("sigma_lower", sigma - (0.5 * (problem.s2 - problem.s) - 0.5 * problem.dim() * u2), Strict),
        m("r1_interval_lower", x1 - i1.lo, Strict),
        m("r1_interval_upper", i1.hi - x1, Strict),
        m("r2_interval_lower", x2 - i2.lo, Strict),
        m("r2_interval_upper", i2.hi - x2, Strict),
        m("q1_induced", e2 - point.q1.recip(), Strict),
        m("q2_induced", e1 - point.q2.recip(), Strict),
        m("q1_split", -(u - x1 - (1.0 - b1) * point.q1.recip()).abs(), Closed),
        m("q2_split", -(u - x2 - b2 * point.q2.recip()).abs(), Closed),
    ];
    if o1 >= 0.0 {
        margins.push(m("r1_direction", u1 - point.r1.recip(), Closed));
        margins.push(m("q2_direction", u1 - point.q2.recip(), Closed));
    }
    if o2 >= 0.0 {
        margins.push(m("r2_direction", u2 - point.r2.recip(), Closed));
        margins.push(m("q1_direction", u2 - point.q1.recip(), Closed));
    }
    if !margins.iter().all(|m| m.value.is_finite()) {
        margins.push(m("finite", f64::NEG_INFINITY, Strict));
    }
    FeasibilityReport::from_margins(margins, margin)
}

/// Range of `β₁/r₁` allowed by every constraint at fixed `(β₁, σ)`, shrunk by
/// `margin` on the strict sides. A degenerate closed range is returned as a
/// single point.
pub(crate) fn x1_range(problem: &GnsProblem, sigma: f64, beta1: f64, margin: f64) -> Option<(f64, f64)> {
    let u = problem.p.recip();
    let (o1, o2) = smoothing_orders(problem, sigma);
    let mut lo = 0.0f64.max(u - (1.0 - beta1));
    let mut hi = beta1.min(u);
    if o1 >= 0.0 {
        hi = hi.min(beta1 * problem.p1.recip());
    }
    if o2 >= 0.0 {
        lo = lo.max(u - (1.0 - beta1) * problem.p2.recip());
    }
    combine(lo, hi, r1_interval_raw(problem, sigma, beta1), margin)
}

/// As [`x1_range`] for `(1-β₂)/r₂`.
pub(crate) fn x2_range(problem: &GnsProblem, sigma: f64, beta2: f64, margin: f64) -> Option<(f64, f64)> {
    let u = problem.p.recip();
    let (o1, o2) = smoothing_orders(problem, sigma);
    let mut lo = 0.0f64.max(u - beta2);
    let mut hi = (1.0 - beta2).min(u);
    if o2 >= 0.0 {
        hi = hi.min((1.0 - beta2) * problem.p2.recip());
    }
    if o1 >= 0.0 {
        lo = lo.max(u - beta2 * problem.p1.recip());
    }
    combine(lo, hi, r2_interval_raw(problem, sigma, beta2), margin)
}

fn combine(closed_lo: f64, closed_hi: f64, open: Interval, margin: f64) -> Option<(f64, f64)> {
    if closed_hi < closed_lo - COLLAPSE_TOL {
        return None;
    }
    let (olo, ohi) = (open.lo + margin, open.hi - margin);
    if closed_hi - closed_lo <= COLLAPSE_TOL {
        let x = closed_lo.max(0.0);
        return (olo < x && x < ohi).then_some((x, x));
    }
    let lo = closed_lo.max(olo);
    let hi = closed_hi.min(ohi);
    (lo < hi).then_some((lo, hi))
}

/// Builds a point from the two shares, deriving the exponents.
pub(crate) fn assemble(
    problem: &GnsProblem,
    beta1: f64,
    beta2: f64,
    sigma: f64,
    x1: f64,
    x2: f64,
) -> Result<SigmaPoint> {
    let r1 = LebesgueExponent::from_recip(x1 / beta1)?;
    let r2 = LebesgueExponent::from_recip(x2 / (1.0 - beta2))?;
    let (q1, q2) = derive_q(problem, beta1, beta2, r1, r2)?;
    Ok(SigmaPoint { beta1, beta2, r1, r2, q1, q2, sigma })
}

/// Buffer kept between the β draws and θ, 0, 1.
pub(crate) fn beta_buffer(theta: f64) -> f64 {
    BETA_BUFFER.min(0.25 * theta).min(0.25 * (1.0 - theta))
}

/// Draws one candidate; `None` when a range turned out empty.
fn draw(problem: &GnsProblem, theta: f64, lb: f64, rng: &mut ChaCha8Rng) -> Option<SigmaPoint> {
    let delta = beta_buffer(theta);
    let beta1 = rng.random_range(theta + delta..1.0 - delta);
    let beta2 = rng.random_range(delta..theta - delta);
    let sigma = lb + 10f64.powf(rng.random_range(-6.0..1.0));
    let (lo1, hi1) = x1_range(problem, sigma, beta1, SAMPLE_MARGIN)?;
    let (lo2, hi2) = x2_range(problem, sigma, beta2, SAMPLE_MARGIN)?;
    let x1 = if hi1 > lo1 { rng.random_range(lo1..hi1) } else { lo1 };
    let x2 = if hi2 > lo2 { rng.random_range(lo2..hi2) } else { lo2 };
    assemble(problem, beta1, beta2, sigma, x1, x2).ok()
}

/// Up to `n` points of Σ drawn with a seeded generator: uniform β's inside
/// their ranges, `σ = lb + 10^U(-6,1)`, uniform shares inside their current
/// ranges. Every returned point passes [`in_sigma`] with margin `1e-9`.
pub fn sample_sigma(problem: &GnsProblem, n: usize, seed: u64) -> Result<Vec<SigmaPoint>> {
    let theta = problem.theta()?.value();
    let oriented = problem.oriented();
    let theta = if oriented == *problem { theta } else { 1.0 - theta };
    let lb = sigma_lower_bound(&oriented);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = 100 * n.max(1);
    let mut out = Vec::with_capacity(n);
    for _ in 0..attempts {
        if out.len() == n {
            break;
        }
        if let Some(point) = draw(&oriented, theta, lb, &mut rng) {
            if in_sigma(problem, &point, SAMPLE_MARGIN).ok {
                out.push(point);
            }
        }
    }
    if out.is_empty() && n > 0 {
        return Err(GnsError::EmptyFeasible { attempts });
    }
    Ok(out)
}

/// θ in oriented labels.
pub fn oriented_theta(problem: &GnsProblem) -> Result<f64> {
    let theta = problem.theta()?.value();
    Ok(if problem.oriented() == *problem { theta } else { 1.0 - theta })
}
