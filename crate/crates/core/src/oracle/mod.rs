//! Numerical verification on centered Gaussians.
//!
//! Fourier convention: `f̂(ξ) = ∫ f(x) e^{-ix·ξ} dx`, so `|∇|^s` has symbol
//! `|ξ|^s` and `e^{tΔ}` has symbol `e^{-t|ξ|²}`. Every norm of
//! `|∇|^s e^{tΔ} f` is computed from the radial Fourier inversion of the
//! closed-form transform; nothing here reuses the bounds being checked.
//!
//! Gaussians are Schwartz functions rather than compactly supported; the
//! inequalities extend to them by density.

mod bessel;
mod profile;
mod sweep;

pub use bessel::bessel_j0;
pub use sweep::{SweepReport, SweepRow, DOMINATION_TOL};

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{GnsError, Result};
use crate::exponents::{GnsProblem, LebesgueExponent};
use crate::optimizer::BoundCertificate;
use crate::parabolic::{bound_at_time, heat_kernel_norm, young_constant, ParabolicParams};
use crate::quadrature::{gauss_kronrod, tanh_sinh};
use crate::specialfn::{heat_deriv_l1_bound, log_gamma_unchecked};

use profile::{golden_max, sphere_area, Profile};

/// `e^{-a|x|²}` on `ℝ^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialTestFunction {
    width: f64,
    d: u32,
}

impl RadialTestFunction {
    pub fn new(width: f64, d: u32) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() {
            return Err(GnsError::Domain(format!("width must be positive, got {width}")));
        }
        if !(1..=3).contains(&d) {
            return Err(GnsError::Domain(format!("oracle supports d in 1..=3, got {d}")));
        }
        Ok(Self { width, d })
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn dim(&self) -> u32 {
        self.d
    }

    pub fn value(&self, r: f64) -> f64 {
        (-self.width * r * r).exp()
    }

    /// `(π/a)^{d/2} e^{-|ξ|²/(4a)}`.
    pub fn fourier(&self, k: f64) -> f64 {
        (PI / self.width).powf(0.5 * f64::from(self.d)) * (-k * k / (4.0 * self.width)).exp()
    }

    /// `‖e^{-a|x|²}‖_p = (π/(pa))^{d/(2p)}`.
    pub fn norm(&self, p: LebesgueExponent) -> f64 {
        gaussian_norm(self.width, p, self.d)
    }

    /// `x ↦ f(λx)`.
    pub fn dilate(&self, lambda: f64) -> Result<Self> {
        Self::new(self.width * lambda * lambda, self.d)
    }

    /// `e^{tΔ} f = A e^{-a'|x|²}`; returns `(A, a')`.
    pub fn heat_evolved(&self, t: f64) -> (f64, f64) {
        let g = 1.0 + 4.0 * self.width * t;
        (g.powf(-0.5 * f64::from(self.d)), self.width / g)
    }
}

fn gaussian_norm(width: f64, p: LebesgueExponent, d: u32) -> f64 {
    if p.is_infinite() {
        return 1.0;
    }
    let pv = p.value();
    (PI / (pv * width)).powf(f64::from(d) / (2.0 * pv))
}

/// `G_t(x) = (4πt)^{-d/2} e^{-|x|²/(4t)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatKernel {
    t: f64,
    d: u32,
}

impl HeatKernel {
    pub fn new(t: f64, d: u32) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(GnsError::Domain(format!("time must be positive, got {t}")));
        }
        if d == 0 {
            return Err(GnsError::Domain("dimension must be positive".into()));
        }
        Ok(Self { t, d })
    }

    pub fn value(&self, r: f64) -> f64 {
        (4.0 * PI * self.t).powf(-0.5 * f64::from(self.d)) * (-r * r / (4.0 * self.t)).exp()
    }

    pub fn norm(&self, q: LebesgueExponent) -> Result<f64> {
        heat_kernel_norm(self.t, q, self.d)
    }
}

/// `‖|∇|^s e^{tΔ} f‖_p`, by radial Fourier inversion and quadrature.
pub fn fractional_heat_norm(f: &RadialTestFunction, s: f64, t: f64, p: LebesgueExponent) -> Result<f64> {
    Profile::new(f.d, s, f.width, t)?.lp_norm(p)
}

/// `(|∇|^s e^{tΔ} f)(x)` at `|x| = r`.
pub fn fractional_heat_value(f: &RadialTestFunction, s: f64, t: f64, r: f64) -> Result<f64> {
    Profile::new(f.d, s, f.width, t)?.value(r)
}

/// `‖|∇|^s e^{tΔ} f‖₂` from the frequency side,
/// `((2π)^{-d} ∫ |ξ|^{2s} e^{-2t|ξ|²} |f̂(ξ)|² dξ)^{1/2}`.
pub fn plancherel_l2_norm(f: &RadialTestFunction, s: f64, t: f64) -> Result<f64> {
    let df = f64::from(f.d);
    if !(s > -0.5 * df) {
        return Err(GnsError::Domain(format!("|∇|^{s} of a Gaussian is not in L² on R^{}", f.d)));
    }
    if !(t >= 0.0) {
        return Err(GnsError::Domain(format!("time must be nonnegative, got {t}")));
    }
    let c = 0.25 / f.width + t;
    let upper = (60.0 / c).sqrt();
    let power = 2.0 * s + df - 1.0;
    let res = tanh_sinh(
        |k: f64| if k <= 0.0 { 0.0 } else { k.powf(power) * (-2.0 * c * k * k).exp() },
        0.0,
        upper,
        1e-13,
        12,
    );
    if !(res.error <= 1e-10 * res.value) {
        return Err(GnsError::Accuracy { estimate: res.error / res.value, target: 1e-10 });
    }
    let squared = (2.0 * PI).powf(-df) * sphere_area(f.d) * (PI / f.width).powf(df) * res.value;
    Ok(squared.sqrt())
}

/// One point of a smoothing-estimate sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicGridPoint {
    pub d: u32,
    pub s: f64,
    /// Input exponent.
    pub r: LebesgueExponent,
    /// Output exponent.
    pub p: LebesgueExponent,
    pub t: f64,
}

impl ParabolicGridPoint {
    pub fn params(&self) -> ParabolicParams {
        ParabolicParams { p: self.p, r: self.r, s: self.s, d: self.d }
    }
}

pub const STANDARD_ORDERS: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 3.5, -0.25];
pub const STANDARD_TIMES: [f64; 3] = [0.1, 1.0, 10.0];
pub const STANDARD_WIDTHS: [f64; 3] = [0.5, 1.0, 2.0];

/// `(r, p)` pairs of the standard sweep.
pub fn standard_exponent_pairs() -> [(LebesgueExponent, LebesgueExponent); 5] {
    let one = LebesgueExponent::ONE;
    let two = LebesgueExponent::from_recip(0.5).expect("1/2 is a valid reciprocal");
    let four = LebesgueExponent::from_recip(0.25).expect("1/4 is a valid reciprocal");
    let inf = LebesgueExponent::INFINITY;
    [(one, two), (two, two), (one, inf), (two, inf), (two, four)]
}

/// Every admissible combination of the standard orders, exponent pairs and
/// times in the given dimensions.
pub fn standard_parabolic_grid(dims: &[u32]) -> Vec<ParabolicGridPoint> {
    let mut out = Vec::new();
    for &d in dims {
        for s in STANDARD_ORDERS {
            for (r, p) in standard_exponent_pairs() {
                for t in STANDARD_TIMES {
                    let pt = ParabolicGridPoint { d, s, r, p, t };
                    if pt.params().check().is_ok() {
                        out.push(pt);
                    }
                }
            }
        }
    }
    out
}

/// Measures `‖|∇|^s e^{tΔ} f‖_p / ‖f‖_r` on every grid point and width and
/// compares it with [`bound_at_time`].
pub fn check_parabolic(grid: &[ParabolicGridPoint], widths: &[f64]) -> Result<SweepReport> {
    if widths.is_empty() {
        return Err(GnsError::Domain("at least one width is required".into()));
    }
    for pt in grid {
        pt.params().check()?;
        if !(1..=3).contains(&pt.d) {
            return Err(GnsError::Domain(format!("oracle supports d in 1..=3, got {}", pt.d)));
        }
    }
    // Points sharing (d, s, t, width) share one profile.
    let mut groups: Vec<(u32, f64, f64, f64, Vec<LebesgueExponent>)> = Vec::new();
    let mut index: HashMap<(u32, u64, u64, u64), usize> = HashMap::new();
    for pt in grid {
        for &w in widths {
            let key = (pt.d, pt.s.to_bits(), pt.t.to_bits(), w.to_bits());
            let g = *index.entry(key).or_insert_with(|| {
                groups.push((pt.d, pt.s, pt.t, w, Vec::new()));
                groups.len() - 1
            });
            if !groups[g].4.contains(&pt.p) {
                groups[g].4.push(pt.p);
            }
        }
    }
    let norms: Vec<Result<Vec<f64>>> = groups
        .par_iter()
        .map(|(d, s, t, w, ps)| {
            let profile = Profile::new(*d, *s, *w, *t)?;
            ps.iter().map(|&p| profile.lp_norm(p)).collect()
        })
        .collect();
    let mut lookup: HashMap<(u32, u64, u64, u64, u64), f64> = HashMap::new();
    for ((d, s, t, w, ps), res) in groups.iter().zip(norms) {
        for (p, v) in ps.iter().zip(res?) {
            lookup.insert((*d, s.to_bits(), t.to_bits(), w.to_bits(), p.recip().to_bits()), v);
        }
    }
    let mut rows = Vec::with_capacity(grid.len() * widths.len());
    for pt in grid {
        let bound = bound_at_time(&pt.params(), pt.t)?;
        for &w in widths {
            let f = RadialTestFunction::new(w, pt.d)?;
            let key = (pt.d, pt.s.to_bits(), pt.t.to_bits(), w.to_bits(), pt.p.recip().to_bits());
            let measured = lookup[&key] / f.norm(pt.r);
            rows.push(
                SweepRow {
                    check: "parabolic",
                    d: pt.d,
                    s: pt.s,
                    r: Some(pt.r.to_string()),
                    p: pt.p.to_string(),
                    t: Some(pt.t),
                    width: w,
                    dilation: None,
                    measured,
                    bound,
                    slack: 0.0,
                    ok: false,
                }
                .judge(),
            );
        }
    }
    Ok(SweepReport { rows, dilation_spread: None })
}

/// `‖|∇|^s f‖_p / (‖|∇|^{s₁} f‖_{p₁}^θ ‖|∇|^{s₂} f‖_{p₂}^{1-θ})`.
pub fn gns_ratio(problem: &GnsProblem, f: &RadialTestFunction) -> Result<f64> {
    let theta = problem.theta()?.value();
    let lhs = fractional_heat_norm(f, problem.s, 0.0, problem.p)?;
    let n1 = fractional_heat_norm(f, problem.s1, 0.0, problem.p1)?;
    let n2 = fractional_heat_norm(f, problem.s2, 0.0, problem.p2)?;
    Ok(lhs / (n1.powf(theta) * n2.powf(1.0 - theta)))
}

/// Checks a certificate on Gaussians of every width, each dilated by every
/// factor (`a → aλ²`), and records how far the ratio moves under dilation.
pub fn check_gns(certificate: &BoundCertificate, widths: &[f64], dilations: &[f64]) -> Result<SweepReport> {
    if widths.is_empty() || dilations.is_empty() {
        return Err(GnsError::Domain("at least one width and one dilation are required".into()));
    }
    certificate.check()?;
    let problem = certificate.problem;
    let cases: Vec<(f64, f64)> = widths
        .iter()
        .flat_map(|&w| dilations.iter().map(move |&l| (w, l)))
        .collect();
    let ratios: Vec<Result<f64>> = cases
        .par_iter()
        .map(|&(w, l)| gns_ratio(&problem, &RadialTestFunction::new(w, problem.d)?.dilate(l)?))
        .collect();
    let mut rows = Vec::with_capacity(cases.len());
    for (&(w, l), ratio) in cases.iter().zip(ratios) {
        rows.push(
            SweepRow {
                check: "gns",
                d: problem.d,
                s: problem.s,
                r: None,
                p: problem.p.to_string(),
                t: None,
                width: w,
                dilation: Some(l),
                measured: ratio?,
                bound: certificate.value,
                slack: 0.0,
                ok: false,
            }
            .judge(),
        );
    }
    let mut spread: f64 = 0.0;
    for chunk in rows.chunks(dilations.len()) {
        let lo = chunk.iter().map(|r| r.measured).fold(f64::INFINITY, f64::min);
        let hi = chunk.iter().map(|r| r.measured).fold(f64::NEG_INFINITY, f64::max);
        spread = spread.max((hi - lo) / lo);
    }
    Ok(SweepReport { rows, dilation_spread: Some(spread) })
}

/// Coefficients (in `ρ = |x|²/(4t)`) of `P_n` with
/// `(-Δ)ⁿ G_t = t^{-n} (4πt)^{-d/2} P_n(ρ) e^{-ρ}`.
fn heat_power_polynomial(n: u32, d: u32) -> Vec<f64> {
    let half_d = 0.5 * f64::from(d);
    let mut p = vec![1.0];
    for _ in 0..n {
        // -Δ(P e^{-ρ}) t = -[ρ(P'' - 2P' + P) + (d/2)(P' - P)] e^{-ρ}.
        let deg = p.len() - 1;
        let mut next = vec![0.0; deg + 2];
        for (k, &a) in p.iter().enumerate() {
            let kf = k as f64;
            // ρ·P: ρ^{k+1}
            next[k + 1] -= a;
            // -2ρP': ρ^k with factor -2k
            next[k] += 2.0 * kf * a;
            // ρP'': ρ^{k-1} with factor k(k-1)
            if k >= 1 {
                next[k - 1] -= kf * (kf - 1.0) * a + half_d * kf * a;
            }
            next[k] += half_d * a;
        }
        p = next;
    }
    p
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * x + a)
}

/// `(‖(-Δ)ⁿ G_t‖₁ measured by quadrature, Γ(d/2+n) 2ⁿ / Γ(d/2) · t^{-n})`.
pub fn heat_l1_deriv_check(n: u32, d: u32, t: f64) -> Result<(f64, f64)> {
    if n > 8 {
        return Err(GnsError::Domain(format!("derivative order {n} exceeds 8")));
    }
    if !(1..=3).contains(&d) {
        return Err(GnsError::Domain(format!("oracle supports d in 1..=3, got {d}")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(GnsError::Domain(format!("time must be positive, got {t}")));
    }
    let poly = heat_power_polynomial(n, d);
    let upper = 12.0;
    let integrand = |u: f64| poly_eval(&poly, u * u).abs() * (-u * u).exp() * u.powi(d as i32 - 1);
    // Split at the sign changes of P_n(u²).
    let steps = 4000;
    let h = upper / steps as f64;
    let mut cuts = vec![0.0];
    for i in 0..steps {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        let (fa, fb) = (poly_eval(&poly, a * a), poly_eval(&poly, b * b));
        if fa != 0.0 && (fa < 0.0) != (fb < 0.0) {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if (poly_eval(&poly, mid * mid) < 0.0) == (fa < 0.0) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            cuts.push(0.5 * (lo + hi));
        }
    }
    cuts.push(upper);
    let mut total = 0.0;
    let mut error = 0.0;
    for w in cuts.windows(2) {
        let res = gauss_kronrod(integrand, w[0], w[1], 0.0, 1e-13, 200);
        total += res.value;
        error += res.error;
    }
    if !(error <= 1e-11 * total) {
        return Err(GnsError::Accuracy { estimate: error / total, target: 1e-11 });
    }
    let half_d = 0.5 * f64::from(d);
    let scale = t.powi(-(n as i32));
    let measured = 2.0 / log_gamma_unchecked(half_d).exp() * total * scale;
    Ok((measured, heat_deriv_l1_bound(n, d) * scale))
}

/// `ln(‖f * g‖_p / (‖f‖_q ‖g‖_r))` for `f = e^{-α|x|²}`, `g = e^{-β|x|²}`.
fn ln_young_ratio(p: LebesgueExponent, q: LebesgueExponent, r: LebesgueExponent, d: u32, alpha: f64, beta: f64) -> f64 {
    let sum = alpha + beta;
    let amplitude = 0.5 * f64::from(d) * (PI / sum).ln();
    amplitude + gaussian_norm(alpha * beta / sum, p, d).ln()
        - gaussian_norm(alpha, q, d).ln()
        - gaussian_norm(beta, r, d).ln()
}

/// Largest Young ratio over Gaussian pairs with widths from `widths`,
/// polished by golden-section search in the second width; returns
/// `(best_ratio, A_Y)`.
pub fn young_extremizer_check(
    p: LebesgueExponent,
    q: LebesgueExponent,
    r: LebesgueExponent,
    d: u32,
    widths: &[f64],
) -> Result<(f64, f64)> {
    let constant = young_constant(p, q, r, d)?;
    if widths.is_empty() || widths.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(GnsError::Domain("widths must be positive and nonempty".into()));
    }
    let mut sorted = widths.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut best = (f64::NEG_INFINITY, 0, 0);
    for (i, &a) in sorted.iter().enumerate() {
        for (j, &b) in sorted.iter().enumerate() {
            let v = ln_young_ratio(p, q, r, d, a, b);
            if v > best.0 {
                best = (v, i, j);
            }
        }
    }
    let (grid_ln, i, j) = best;
    let alpha = sorted[i];
    let lo = sorted[j.saturating_sub(1)].ln();
    let hi = sorted[(j + 1).min(sorted.len() - 1)].ln();
    let polished = golden_max(|lb| Ok(ln_young_ratio(p, q, r, d, alpha, lb.exp())), lo, hi)?;
    Ok((grid_ln.max(polished).exp(), constant))
}

/// Geometric width grid `2^{k/8}`, `|k| ≤ 40`.
pub fn default_young_widths() -> Vec<f64> {
    (-40..=40).map(|k| 2f64.powf(f64::from(k) / 8.0)).collect()
}
