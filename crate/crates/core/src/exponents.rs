//! Lebesgue exponents, interpolation problems and their admissibility.
//!
//! Every formula downstream is affine in reciprocal exponents, so an exponent
//! `p ∈ [1, ∞]` is stored as `1/p ∈ [0, 1]` with `∞ ↔ 0`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{GnsError, Result};

/// Slack allowed when a derived reciprocal lands a rounding error outside
/// `[0, 1]`; such values are snapped onto the boundary.
pub const RECIP_SNAP: f64 = 1e-12;

/// Tolerance used to decide whether a real number is an integer.
pub const INTEGER_TOL: f64 = 1e-9;

/// An exponent `p ∈ [1, ∞]`, held as its reciprocal.
///
/// The Hölder conjugate is kept alongside so that [`conjugate`](Self::conjugate)
/// is an exact involution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueExponent {
    recip: f64,
    conj_recip: f64,
}

impl LebesgueExponent {
    pub const ONE: Self = Self {
        recip: 1.0,
        conj_recip: 0.0,
    };
    pub const INFINITY: Self = Self {
        recip: 0.0,
        conj_recip: 1.0,
    };

    /// Builds an exponent from its reciprocal `1/p ∈ [0, 1]`.
    pub fn from_recip(recip: f64) -> Result<Self> {
        if !recip.is_finite() || !(-RECIP_SNAP..=1.0 + RECIP_SNAP).contains(&recip) {
            return Err(GnsError::OutOfRange(format!(
                "reciprocal exponent {recip} is outside [0, 1]"
            )));
        }
        let recip = recip.clamp(0.0, 1.0);
        Ok(Self {
            recip,
            conj_recip: 1.0 - recip,
        })
    }

    /// Builds an exponent from `p ∈ [1, ∞]`; `f64::INFINITY` maps to `∞`.
    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(GnsError::OutOfRange(format!(
                "exponent {p} is outside [1, inf]"
            )));
        }
        if p.is_infinite() {
            return Ok(Self::INFINITY);
        }
        Self::from_recip(1.0 / p)
    }

    #[inline]
    pub fn recip(self) -> f64 {
        self.recip
    }

    /// Reciprocal of the conjugate exponent, `1 - 1/p`.
    #[inline]
    pub fn conj_recip(self) -> f64 {
        self.conj_recip
    }

    /// The exponent itself; `f64::INFINITY` for `p = ∞`.
    pub fn value(self) -> f64 {
        if self.recip == 0.0 {
            f64::INFINITY
        } else {
            1.0 / self.recip
        }
    }

    pub fn is_infinite(self) -> bool {
        self.recip == 0.0
    }

    pub fn is_one(self) -> bool {
        self.recip == 1.0
    }

    /// True for `1 < p < ∞`.
    pub fn is_interior(self) -> bool {
        self.recip > 0.0 && self.recip < 1.0
    }

    /// Hölder conjugate `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        Self {
            recip: self.conj_recip,
            conj_recip: self.recip,
        }
    }
}

impl TryFrom<f64> for LebesgueExponent {
    type Error = GnsError;

    fn try_from(p: f64) -> Result<Self> {
        Self::new(p)
    }
}

impl From<LebesgueExponent> for f64 {
    fn from(p: LebesgueExponent) -> f64 {
        p.value()
    }
}

impl fmt::Display for LebesgueExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.value())
        }
    }
}

/// Accepts `inf`/`infinity`, a fraction `a/b`, or a decimal.
impl FromStr for LebesgueExponent {
    type Err = GnsError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let lower = t.to_ascii_lowercase();
        if matches!(lower.as_str(), "inf" | "infinity" | "∞") {
            return Ok(Self::INFINITY);
        }
        let bad = || GnsError::Parse(format!("cannot parse exponent {s:?}"));
        if let Some((num, den)) = t.split_once('/') {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if num <= 0.0 || den <= 0.0 || !num.is_finite() || !den.is_finite() {
                return Err(bad());
            }
            if num < den {
                return Err(GnsError::OutOfRange(format!(
                    "exponent {s} is outside [1, inf]"
                )));
            }
            // 1/(a/b) = b/a, one rounding instead of two.
            return Self::from_recip(den / num);
        }
        let p: f64 = t.parse().map_err(|_| bad())?;
        Self::new(p)
    }
}

/// Hölder conjugate.
pub fn conjugate(u: LebesgueExponent) -> LebesgueExponent {
    u.conjugate()
}

/// The exponent `q` with `1/q + 1/r = 1 + 1/p` (Young's relation).
pub fn young_partner(p: LebesgueExponent, r: LebesgueExponent) -> Result<LebesgueExponent> {
    let recip = 1.0 + p.recip() - r.recip();
    LebesgueExponent::from_recip(recip).map_err(|_| {
        GnsError::OutOfRange(format!(
            "Young partner of p={p}, r={r} would have reciprocal {recip}"
        ))
    })
}

/// Which of the two outer pairs carries the larger scaling level
/// `1/p_j - s_j/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `1/p₂ - s₂/d < 1/p - s/d < 1/p₁ - s₁/d`.
    Direct,
    /// `1/p₁ - s₁/d < 1/p - s/d < 1/p₂ - s₂/d`; the pairs are swapped before
    /// the feasible set is built.
    Swapped,
}

/// A homogeneous interpolation inequality
/// `‖|∇|^s f‖_p ≤ C ‖|∇|^{s₁} f‖_{p₁}^θ ‖|∇|^{s₂} f‖_{p₂}^{1-θ}` on `ℝ^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnsProblem {
    pub d: u32,
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
    pub p: LebesgueExponent,
    pub p1: LebesgueExponent,
    pub p2: LebesgueExponent,
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub admissible: bool,
    /// Signed gap between the target level and the level of pair 2.
    pub left_margin: f64,
    /// Signed gap between the level of pair 1 and the target level.
    pub right_margin: f64,
    /// Orientation under which the margins are reported.
    pub orientation: Orientation,
    /// Minimum margin the check was run with.
    pub required_margin: f64,
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "admissible={} left_margin={} right_margin={} orientation={:?}",
            self.admissible, self.left_margin, self.right_margin, self.orientation
        )
    }
}

/// The interpolation weight θ ∈ (0, 1).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Theta(f64);

impl Theta {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl GnsProblem {
    /// Convenience constructor from plain exponents (`f64::INFINITY` allowed).
    pub fn from_values(d: u32, s: f64, p: f64, s1: f64, p1: f64, s2: f64, p2: f64) -> Result<Self> {
        if d == 0 {
            return Err(GnsError::Domain("dimension must be positive".into()));
        }
        Ok(Self {
            d,
            s,
            s1,
            s2,
            p: LebesgueExponent::new(p)?,
            p1: LebesgueExponent::new(p1)?,
            p2: LebesgueExponent::new(p2)?,
        })
    }

    pub fn dim(&self) -> f64 {
        f64::from(self.d)
    }

    /// Scaling level `1/p - s/d` of the target seminorm.
    pub fn level(&self) -> f64 {
        self.p.recip() - self.s / self.dim()
    }

    pub fn level1(&self) -> f64 {
        self.p1.recip() - self.s1 / self.dim()
    }

    pub fn level2(&self) -> f64 {
        self.p2.recip() - self.s2 / self.dim()
    }

    /// `K = 1/p₁ - 1/p₂ - (s₁ - s₂)/d`, the level gap of the outer pairs.
    pub fn level_gap(&self) -> f64 {
        self.p1.recip() - self.p2.recip() - (self.s1 - self.s2) / self.dim()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    pub fn theta(&self) -> Result<Theta> {
        theta(self)
    }

    pub fn orientation(&self) -> Orientation {
        if self.level1() >= self.level2() {
            Orientation::Direct
        } else {
            Orientation::Swapped
        }
    }

    /// The same inequality with pair 1 carrying the larger level; θ becomes
    /// 1 - θ when the pairs are swapped.
    pub fn oriented(&self) -> GnsProblem {
        match self.orientation() {
            Orientation::Direct => *self,
            Orientation::Swapped => GnsProblem {
                s1: self.s2,
                s2: self.s1,
                p1: self.p2,
                p2: self.p1,
                ..*self
            },
        }
    }
}

/// Raw interpolation weight; not checked against `(0, 1)`.
fn raw_theta(problem: &GnsProblem) -> Option<f64> {
    let denom = problem.level1() - problem.level2();
    if denom == 0.0 || !denom.is_finite() {
        return None;
    }
    Some((problem.level() - problem.level2()) / denom)
}

/// θ solving `1/p - s/d = θ(1/p₁ - s₁/d) + (1-θ)(1/p₂ - s₂/d)`.
pub fn theta(problem: &GnsProblem) -> Result<Theta> {
    let report = validate(problem);
    if !report.admissible {
        return Err(GnsError::Inadmissible(report.to_string()));
    }
    let value = raw_theta(problem)
        .ok_or_else(|| GnsError::Inadmissible("outer levels coincide".into()))?;
    if !(value > 0.0 && value < 1.0) {
        return Err(GnsError::Inadmissible(format!("theta = {value} is not in (0, 1)")));
    }
    Ok(Theta(value))
}

/// Checks that the target level lies strictly between the outer levels.
pub fn validate(problem: &GnsProblem) -> ValidationReport {
    validate_with_margin(problem, 0.0)
}

/// As [`validate`], requiring both margins to exceed `margin`.
pub fn validate_with_margin(problem: &GnsProblem, margin: f64) -> ValidationReport {
    let orientation = problem.orientation();
    let sign = match orientation {
        Orientation::Direct => 1.0,
        Orientation::Swapped => -1.0,
    };
    let left_margin = sign * (problem.level() - problem.level2());
    let right_margin = sign * (problem.level1() - problem.level());
    let dim_ok = problem.d >= 1;
    let finite = [problem.s, problem.s1, problem.s2].iter().all(|v| v.is_finite());
    ValidationReport {
        admissible: dim_ok && finite && left_margin > margin && right_margin > margin,
        left_margin,
        right_margin,
        orientation,
        required_margin: margin,
    }
}

fn is_integer(x: f64) -> bool {
    (x - x.round()).abs() < INTEGER_TOL
}

fn is_natural(x: f64) -> bool {
    is_integer(x) && x.round() >= 1.0
}

fn is_natural0(x: f64) -> bool {
    is_integer(x) && x.round() >= 0.0
}

fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() < INTEGER_TOL
}

/// The exceptional configuration `s₂ ∈ ℕ, p₂ = 1, 0 < s₂ - s₁ ≤ 1 - 1/p₁` under
/// which the inhomogeneous inequality fails. Advisory only.
pub fn brezis_mironescu_exception(
    s1: f64,
    p1: LebesgueExponent,
    s2: f64,
    p2: LebesgueExponent,
) -> bool {
    let gap = s2 - s1;
    is_natural(s2) && p2.is_one() && gap > 0.0 && gap <= p1.conj_recip() + INTEGER_TOL
}

/// Known configurations where the homogeneous inequality fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureCase {
    /// `d = 1`, `p₂ = 1`, `s₁ = s₂ - 1 + 1/p₁` with the listed ranges for `s`.
    OneDimL1,
    /// `s₁ - d/p₁ = s₂ - d/p₂ = s ∈ ℕ₀`, `p = ∞`.
    CriticalLInfinity,
    /// `s₁ ≤ s ≤ s₂`, one-dimensional `p₂ = 1` sub-case.
    IntermediateOneDim,
    /// `s₁ ≤ s ≤ s₂`, `p₁ = p = ∞`, `s₂ = s + d/p₂` sub-case.
    IntermediateLInfinity,
}

/// Matches `problem` against the enumerated failure cases. Advisory only; the
/// admissibility chain excludes all of them.
pub fn known_failure_case(problem: &GnsProblem) -> Option<FailureCase> {
    let GnsProblem {
        d, s, s1, s2, p, p1, p2,
    } = *problem;
    let dim = f64::from(d);
    let theta = raw_theta(problem);
    let p1_open = p1.is_interior();
    let p1_half_open = p1.recip() < 1.0; // 1 < p₁ ≤ ∞
    let s1_critical = approx_eq(s1, s2 - 1.0 + p1.recip());
    let in_theta_window = |th: f64| {
        let lo = s2 + th * p1.recip() - 1.0;
        let hi = s2 + th * p1.recip() - th;
        lo < s && s < hi
    };

    // The intermediate-order cases refine the first two; report the more
    // specific one.
    if s1 <= s && s <= s2 {
        if d == 1
            && is_natural(s2)
            && p1_open
            && p2.is_one()
            && s1_critical
            && theta.is_some_and(in_theta_window)
            && s >= s1
        {
            return Some(FailureCase::IntermediateOneDim);
        }
        if p1.is_infinite()
            && p2.is_interior()
            && p.is_infinite()
            && approx_eq(s1, s)
            && is_natural0(s)
            && approx_eq(s2, s + dim * p2.recip())
        {
            return Some(FailureCase::IntermediateLInfinity);
        }
    }
    if d == 1 && is_natural0(s2) && p1_half_open && p2.is_one() && s1_critical {
        let first = p1_open && approx_eq(s, s2 - 1.0);
        let second = theta.is_some_and(in_theta_window);
        if first || second {
            return Some(FailureCase::OneDimL1);
        }
    }

    let crit1 = s1 - dim * p1.recip();
    let crit2 = s2 - dim * p2.recip();
    if s1 < s2
        && approx_eq(crit1, s)
        && approx_eq(crit2, s)
        && is_natural0(s)
        && p.is_infinite()
        && !(p1.is_infinite() && p2.is_one())
    {
        return Some(FailureCase::CriticalLInfinity);
    }

    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp(p: f64) -> LebesgueExponent {
        LebesgueExponent::new(p).unwrap()
    }

    fn agmon() -> GnsProblem {
        GnsProblem::from_values(1, 0.0, f64::INFINITY, 1.0, 2.0, 0.0, 2.0).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(exp(2.0).conjugate().value(), 2.0);
        assert!(exp(1.0).conjugate().is_infinite());
        let p = "4/3".parse::<LebesgueExponent>().unwrap();
        assert_eq!(p.conjugate().value(), 4.0);
        for r in [0.0, 0.1, 0.3, 0.75, 1.0, 0.123456789] {
            let u = LebesgueExponent::from_recip(r).unwrap();
            assert_eq!(u.conjugate().conjugate(), u);
            assert_eq!(u.conjugate().recip(), 1.0 - r);
        }
    }

    #[test]
    fn young_partner_examples() {
        assert_eq!(young_partner(exp(2.0), exp(1.0)).unwrap().value(), 2.0);
        let q = young_partner(exp(2.0), "4/3".parse().unwrap()).unwrap();
        assert!((q.value() - 4.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            young_partner(exp(1.0), exp(2.0)),
            Err(GnsError::OutOfRange(_))
        ));
    }

    #[test]
    fn reciprocal_round_trip() {
        for p in [1.0, 4.0 / 3.0, 2.0, 3.0, f64::INFINITY] {
            let e = exp(p);
            assert_eq!(e.value(), p);
            assert_eq!(LebesgueExponent::from_recip(e.recip()).unwrap(), e);
        }
    }

    #[test]
    fn parse_forms() {
        assert!("inf".parse::<LebesgueExponent>().unwrap().is_infinite());
        assert_eq!("4/3".parse::<LebesgueExponent>().unwrap().recip(), 0.75);
        assert_eq!("2.5".parse::<LebesgueExponent>().unwrap().recip(), 0.4);
        assert!("0.5".parse::<LebesgueExponent>().is_err());
        assert!("1/2".parse::<LebesgueExponent>().is_err());
        assert!("abc".parse::<LebesgueExponent>().is_err());
    }

    #[test]
    fn theta_examples() {
        assert!((agmon().theta().unwrap().value() - 0.5).abs() < 1e-15);
        let p = GnsProblem::from_values(2, 0.0, 4.0, 1.0, 2.0, 0.0, 2.0).unwrap();
        assert!((p.theta().unwrap().value() - 0.5).abs() < 1e-15);
        // s = s₂, p = p₂ sits on the left endpoint.
        let p = GnsProblem::from_values(1, 0.0, 2.0, 1.0, 2.0, 0.0, 2.0).unwrap();
        assert!(matches!(p.theta(), Err(GnsError::Inadmissible(_))));
    }

    #[test]
    fn validate_examples() {
        let r = agmon().validate();
        assert!(r.admissible);
        assert!((r.left_margin - 0.5).abs() < 1e-15 && (r.right_margin - 0.5).abs() < 1e-15);

        let p = GnsProblem::from_values(1, 1.0, 2.0, 1.0, 2.0, 0.0, 2.0).unwrap();
        let r = p.validate();
        assert!(!r.admissible);
        assert_eq!(r.right_margin, 0.0);

        let p = GnsProblem::from_values(3, 1.0, 2.0, 2.0, 2.0, 0.0, 2.0).unwrap();
        let r = p.validate();
        assert!(r.admissible);
        assert!((r.left_margin - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.right_margin - 1.0 / 3.0).abs() < 1e-15);

        assert!(!validate_with_margin(&agmon(), 0.6).admissible);
    }

    #[test]
    fn orientation_swap_preserves_theta_complement() {
        let p = agmon();
        assert_eq!(p.orientation(), Orientation::Swapped);
        let o = p.oriented();
        assert_eq!(o.orientation(), Orientation::Direct);
        assert!(o.level_gap() > 0.0);
        let t = p.theta().unwrap().value();
        let to = o.theta().unwrap().value();
        assert!((t + to - 1.0).abs() < 1e-15);
    }

    #[test]
    fn brezis_mironescu_examples() {
        assert!(brezis_mironescu_exception(0.5, exp(2.0), 1.0, exp(1.0)));
        assert!(!brezis_mironescu_exception(0.5, exp(2.0), 1.0, exp(2.0)));
        assert!(!brezis_mironescu_exception(1.0, exp(2.0), 1.5, exp(1.0)));
        // gap 1 exceeds 1 - 1/p₁ = 1/2
        assert!(!brezis_mironescu_exception(0.0, exp(2.0), 1.0, exp(1.0)));
    }

    #[test]
    fn failure_case_examples() {
        let case1 = GnsProblem::from_values(1, 0.0, f64::INFINITY, 0.5, 2.0, 1.0, 1.0).unwrap();
        assert_eq!(known_failure_case(&case1), Some(FailureCase::OneDimL1));

        let case2 =
            GnsProblem::from_values(2, 0.0, f64::INFINITY, 2.0 / 3.0, 3.0, 4.0 / 3.0, 1.5).unwrap();
        assert_eq!(known_failure_case(&case2), Some(FailureCase::CriticalLInfinity));
        assert!(!case2.validate().admissible);

        let case3b =
            GnsProblem::from_values(1, 0.0, f64::INFINITY, 0.0, f64::INFINITY, 0.5, 2.0).unwrap();
        assert_eq!(known_failure_case(&case3b), Some(FailureCase::IntermediateLInfinity));

        assert_eq!(known_failure_case(&agmon()), None);
    }
}
