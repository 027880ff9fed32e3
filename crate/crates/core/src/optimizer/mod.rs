//! The interpolation-constant objective on Σ and its minimization.
//!
//! Writing `|∇|^s f` as `Γ(σ)^{-1} ∫₀^∞ t^{σ-1} |∇|^{s+2σ} e^{tΔ} f dt`,
//! splitting the time integral at `t₀` and bounding each half by Hölder and
//! the smoothing estimate gives, with `N_j = ‖|∇|^{s_j} f‖_{p_j}` and
//! `κ = (d/2)K`,
//!
//! ```text
//! Γ(σ)·‖|∇|^s f‖_p ≤ C_s N₁^{β₂} N₂^{1-β₂} t₀^{(θ-β₂)κ} / ((θ-β₂)κ)
//!                  + C_l N₁^{β₁} N₂^{1-β₁} t₀^{-(β₁-θ)κ} / ((β₁-θ)κ).
//! ```
//!
//! Choosing `t₀` to equalize the two terms yields the objective
//! `4/(dKΓ(σ)) (C_s/(θ-β₂))^{(β₁-θ)/(β₁-β₂)} (C_l/(β₁-θ))^{(θ-β₂)/(β₁-β₂)}`.

mod certificate;
mod nelder_mead;

pub use certificate::{BoundCertificate, ObjectiveForm, SampleRecord};
pub use nelder_mead::{nelder_mead, SimplexResult};

use rayon::prelude::*;

use crate::error::{GnsError, Result};
use crate::exponents::{GnsProblem, LebesgueExponent};
use crate::feasible::{
    assemble, in_sigma, oriented_theta, sample_sigma, sigma_lower_bound, smoothing_orders,
    x1_range, x2_range, SigmaPoint, CLOSED_TOL, SAMPLE_MARGIN,
};
use crate::parabolic::{ln_a_par, ParabolicParams};
use crate::specialfn::log_gamma_unchecked;

/// Value assigned to rejected simplex vertices (the search runs on logs).
const PENALTY: f64 = 1e10;

/// Search settings for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub sample_per_start: usize,
    pub max_iters: usize,
    pub rel_tol: f64,
    pub seed: u64,
    /// Initial width of the σ search range above its lower bound.
    pub sigma_window: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            starts: 16,
            sample_per_start: 16,
            max_iters: 2000,
            rel_tol: 1e-9,
            seed: 0,
            sigma_window: 10.0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.sample_per_start == 0 || self.max_iters == 0 {
            return Err(GnsError::Domain("optimizer counts must be at least 1".into()));
        }
        if !(self.rel_tol > 0.0) || !(self.sigma_window > 0.0) {
            return Err(GnsError::Domain("rel_tol and sigma_window must be positive".into()));
        }
        Ok(())
    }
}

/// Logarithms of the pieces of the objective at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveParts {
    pub theta: f64,
    pub kappa: f64,
    pub ln_c_small: f64,
    pub ln_c_large: f64,
    pub ln_gamma_sigma: f64,
}

fn ln_par(out: LebesgueExponent, input: LebesgueExponent, order: f64, d: u32) -> Result<f64> {
    // Direction constraints are closed and checked to CLOSED_TOL; an input
    // that misses by rounding is the diagonal case.
    let gap = input.recip() - out.recip();
    let input = if gap < 0.0 && gap >= -CLOSED_TOL { out } else { input };
    ln_a_par(&ParabolicParams { p: out, r: input, s: order, d })
}

/// Evaluates the smoothing constants; `problem` must already be oriented.
fn parts_oriented(problem: &GnsProblem, theta: f64, point: &SigmaPoint) -> Result<ObjectiveParts> {
    let (o1, o2) = smoothing_orders(problem, point.sigma);
    let d = problem.d;
    let ln_c_small = point.beta2 * ln_par(point.q2, problem.p1, o1, d)?
        + (1.0 - point.beta2) * ln_par(point.r2, problem.p2, o2, d)?;
    let ln_c_large = point.beta1 * ln_par(point.r1, problem.p1, o1, d)?
        + (1.0 - point.beta1) * ln_par(point.q1, problem.p2, o2, d)?;
    Ok(ObjectiveParts {
        theta,
        kappa: 0.5 * problem.dim() * problem.level_gap(),
        ln_c_small,
        ln_c_large,
        ln_gamma_sigma: log_gamma_unchecked(point.sigma),
    })
}

/// Smoothing constants of the small-time and large-time halves at a
/// feasible point.
pub fn objective_parts(problem: &GnsProblem, point: &SigmaPoint) -> Result<ObjectiveParts> {
    require_feasible(problem, point)?;
    let theta = oriented_theta(problem)?;
    parts_oriented(&problem.oriented(), theta, point)
}

fn require_feasible(problem: &GnsProblem, point: &SigmaPoint) -> Result<()> {
    let report = in_sigma(problem, point, 0.0);
    if report.ok {
        Ok(())
    } else {
        Err(GnsError::Infeasible(report.violations().join(", ")))
    }
}

fn ln_value(parts: &ObjectiveParts, beta1: f64, beta2: f64) -> f64 {
    let ObjectiveParts { theta, kappa, ln_c_small, ln_c_large, ln_gamma_sigma } = *parts;
    let span = beta1 - beta2;
    (2.0f64).ln() - kappa.ln() - ln_gamma_sigma
        + (beta1 - theta) / span * (ln_c_small - (theta - beta2).ln())
        + (theta - beta2) / span * (ln_c_large - (beta1 - theta).ln())
}

/// Log of the objective without the feasibility check; `problem` oriented.
pub(crate) fn ln_objective_oriented(problem: &GnsProblem, theta: f64, point: &SigmaPoint) -> Result<f64> {
    let parts = parts_oriented(problem, theta, point)?;
    Ok(ln_value(&parts, point.beta1, point.beta2))
}

/// The interpolation constant certified by a point of Σ.
pub fn objective(problem: &GnsProblem, point: &SigmaPoint) -> Result<f64> {
    let parts = objective_parts(problem, point)?;
    Ok(ln_value(&parts, point.beta1, point.beta2).exp())
}

/// The closed form as usually displayed, with the two Hölder exponents in
/// the opposite positions. Kept for comparison; it is not a valid bound in
/// general.
pub fn displayed_objective(problem: &GnsProblem, point: &SigmaPoint) -> Result<f64> {
    let p = objective_parts(problem, point)?;
    let (b1, b2, theta) = (point.beta1, point.beta2, p.theta);
    let span = b1 - b2;
    let ln = (2.0f64).ln() - p.kappa.ln() - p.ln_gamma_sigma
        + (theta - b2) / span * (p.ln_c_small - (theta - b2).ln())
        + (b1 - theta) / span * (p.ln_c_large - (b1 - theta).ln());
    Ok(ln.exp())
}

/// Orients `(norm1, norm2)` along with the problem.
fn oriented_norms(problem: &GnsProblem, norm1: f64, norm2: f64) -> (f64, f64) {
    if problem.oriented() == *problem {
        (norm1, norm2)
    } else {
        (norm2, norm1)
    }
}

/// Log of the splitting time equalizing the two halves, for seminorms
/// `norm1` of pair 1 and `norm2` of pair 2 (in the problem's own labels).
pub fn ln_equalizing_t0(problem: &GnsProblem, point: &SigmaPoint, norm1: f64, norm2: f64) -> Result<f64> {
    if !(norm1 > 0.0 && norm2 > 0.0) {
        return Err(GnsError::Domain("norms must be positive".into()));
    }
    let parts = objective_parts(problem, point)?;
    let (n1, n2) = oriented_norms(problem, norm1, norm2);
    let (b1, b2, theta) = (point.beta1, point.beta2, parts.theta);
    let ln_rhs = (b1 - b2) * (n1 / n2).ln() + ((theta - b2) / (b1 - theta)).ln()
        + parts.ln_c_large
        - parts.ln_c_small;
    Ok(ln_rhs / ((b1 - b2) * parts.kappa))
}

/// The splitting time equalizing the two halves. Fails when it is not a
/// normal float; [`ln_equalizing_t0`] covers that range.
pub fn equalizing_t0(problem: &GnsProblem, point: &SigmaPoint, norm1: f64, norm2: f64) -> Result<f64> {
    let ln_t0 = ln_equalizing_t0(problem, point, norm1, norm2)?;
    let t0 = ln_t0.exp();
    if t0.is_normal() {
        Ok(t0)
    } else {
        Err(GnsError::Domain(format!("equalizing time e^{ln_t0} is out of floating-point range")))
    }
}

/// The two-term bound at splitting time `t0`, divided by
/// `norm1^θ norm2^{1-θ}` so it is comparable with the objective.
pub fn two_term_value(
    problem: &GnsProblem,
    point: &SigmaPoint,
    t0: f64,
    norm1: f64,
    norm2: f64,
) -> Result<f64> {
    if !(t0 > 0.0) || !t0.is_finite() {
        return Err(GnsError::Domain("splitting time must be positive".into()));
    }
    two_term_value_ln(problem, point, t0.ln(), norm1, norm2)
}

/// As [`two_term_value`], with the splitting time given by its logarithm.
pub fn two_term_value_ln(
    problem: &GnsProblem,
    point: &SigmaPoint,
    ln_t0: f64,
    norm1: f64,
    norm2: f64,
) -> Result<f64> {
    if !(norm1 > 0.0 && norm2 > 0.0) || !ln_t0.is_finite() {
        return Err(GnsError::Domain("norms must be positive and the time finite".into()));
    }
    let parts = objective_parts(problem, point)?;
    let (n1, n2) = oriented_norms(problem, norm1, norm2);
    let (l1, l2) = (n1.ln(), n2.ln());
    let (b1, b2, theta, kappa) = (point.beta1, point.beta2, parts.theta, parts.kappa);
    let small = parts.ln_c_small + b2 * l1 + (1.0 - b2) * l2 + (theta - b2) * kappa * ln_t0
        - ((theta - b2) * kappa).ln();
    let large = parts.ln_c_large + b1 * l1 + (1.0 - b1) * l2 - (b1 - theta) * kappa * ln_t0
        - ((b1 - theta) * kappa).ln();
    let top = small.max(large);
    let ln_sum = top + ((small - top).exp() + (large - top).exp()).ln();
    Ok((ln_sum - parts.ln_gamma_sigma - theta * l1 - (1.0 - theta) * l2).exp())
}

fn logistic(y: f64) -> f64 {
    1.0 / (1.0 + (-y).exp())
}

fn logit(v: f64) -> f64 {
    let v = v.clamp(1e-12, 1.0 - 1e-12);
    (v / (1.0 - v)).ln()
}

fn softplus(y: f64) -> f64 {
    if y > 30.0 {
        y
    } else {
        y.exp().ln_1p()
    }
}

fn softplus_inv(v: f64) -> f64 {
    if v > 30.0 {
        v
    } else {
        v.exp_m1().max(1e-300).ln()
    }
}

/// Maps the five unconstrained search coordinates onto Σ.
struct Chart<'a> {
    problem: &'a GnsProblem,
    theta: f64,
    lb: f64,
    window: f64,
}

impl Chart<'_> {
    fn point(&self, y: &[f64]) -> Option<SigmaPoint> {
        let beta1 = self.theta + (1.0 - self.theta) * logistic(y[0]);
        let beta2 = self.theta * logistic(y[1]);
        let offset = softplus(y[2]);
        if !(offset > 0.0) || offset > self.window {
            return None;
        }
        let sigma = self.lb + offset;
        let (lo1, hi1) = x1_range(self.problem, sigma, beta1, SAMPLE_MARGIN)?;
        let (lo2, hi2) = x2_range(self.problem, sigma, beta2, SAMPLE_MARGIN)?;
        let x1 = lo1 + (hi1 - lo1) * logistic(y[3]);
        let x2 = lo2 + (hi2 - lo2) * logistic(y[4]);
        assemble(self.problem, beta1, beta2, sigma, x1, x2).ok()
    }

    fn coords(&self, pt: &SigmaPoint) -> Vec<f64> {
        let share = |x: f64, range: Option<(f64, f64)>| match range {
            Some((lo, hi)) if hi > lo => logit((x - lo) / (hi - lo)),
            _ => 0.0,
        };
        vec![
            logit((pt.beta1 - self.theta) / (1.0 - self.theta)),
            logit(pt.beta2 / self.theta),
            softplus_inv(pt.sigma - self.lb),
            share(pt.x1(), x1_range(self.problem, pt.sigma, pt.beta1, SAMPLE_MARGIN)),
            share(pt.x2(), x2_range(self.problem, pt.sigma, pt.beta2, SAMPLE_MARGIN)),
        ]
    }

    fn ln_value(&self, original: &GnsProblem, y: &[f64]) -> f64 {
        let Some(pt) = self.point(y) else { return PENALTY };
        if !in_sigma(original, &pt, SAMPLE_MARGIN).ok {
            return PENALTY;
        }
        ln_objective_oriented(self.problem, self.theta, &pt).unwrap_or(PENALTY)
    }
}

/// Result of one start.
struct StartOutcome {
    point: SigmaPoint,
    ln_value: f64,
    samples: Vec<SampleRecord>,
}

fn run_start(problem: &GnsProblem, config: &OptimizerConfig, index: usize) -> Result<StartOutcome> {
    let oriented = problem.oriented();
    let theta = oriented_theta(problem)?;
    let lb = sigma_lower_bound(&oriented);
    let seed = config.seed.wrapping_add(index as u64);
    let draws = sample_sigma(problem, config.sample_per_start, seed)?;

    let mut samples = Vec::with_capacity(draws.len());
    let mut best: Option<(SigmaPoint, f64)> = None;
    for pt in draws {
        let ln = ln_objective_oriented(&oriented, theta, &pt)?;
        samples.push(SampleRecord { point: pt, value: ln.exp() });
        if best.is_none_or(|(_, b)| ln < b) {
            best = Some((pt, ln));
        }
    }
    let (mut best_pt, mut best_ln) = best.ok_or(GnsError::EmptyFeasible { attempts: 0 })?;

    let mut window = config.sigma_window.max(best_pt.sigma - lb);
    for round in 0..2 {
        let chart = Chart { problem: &oriented, theta, lb, window };
        let y0 = chart.coords(&best_pt);
        let result = nelder_mead(
            |y| chart.ln_value(problem, y),
            &y0,
            0.5,
            config.max_iters,
            config.rel_tol,
        );
        if result.value < best_ln {
            if let Some(pt) = chart.point(&result.x) {
                let ln = ln_objective_oriented(&oriented, theta, &pt)?;
                if ln < best_ln && in_sigma(problem, &pt, SAMPLE_MARGIN).ok {
                    best_pt = pt;
                    best_ln = ln;
                }
            }
        }
        // Widen the σ range once if the optimum presses against its edge.
        if round == 0 && best_pt.sigma - lb >= 0.99 * window {
            window *= 4.0;
        } else {
            break;
        }
    }
    Ok(StartOutcome { point: best_pt, ln_value: best_ln, samples })
}

/// Multi-start minimization of the objective over Σ. Start `i` draws
/// `sample_per_start` feasible points with seed `seed + i`, then refines the
/// best of them by simplex descent. Starts run in parallel and are merged by
/// index, so the result depends only on `(problem, config)`.
pub fn minimize(problem: &GnsProblem, config: &OptimizerConfig) -> Result<BoundCertificate> {
    config.validate()?;
    let theta = problem.theta()?;
    let outcomes: Vec<Result<StartOutcome>> = (0..config.starts)
        .into_par_iter()
        .map(|i| run_start(problem, config, i))
        .collect();
    let mut best: Option<StartOutcome> = None;
    let mut samples = Vec::new();
    for outcome in outcomes {
        let mut outcome = outcome?;
        samples.append(&mut outcome.samples);
        if best.as_ref().is_none_or(|b| outcome.ln_value < b.ln_value) {
            best = Some(outcome);
        }
    }
    let best = best.ok_or(GnsError::EmptyFeasible { attempts: 0 })?;
    let value = objective(problem, &best.point)?;
    let displayed = displayed_objective(problem, &best.point)?;
    Ok(BoundCertificate {
        problem: *problem,
        theta,
        point: best.point,
        value,
        objective_form: ObjectiveForm::T0Substituted,
        displayed_value: displayed,
        margins: in_sigma(problem, &best.point, 0.0),
        config: *config,
        sample: samples,
    })
}
