//! Closed-form constants of the smoothing estimate
//! `‖|∇|^s e^{tΔ} f‖_p ≤ A_par(p, r, s, d) t^{-s/2 - D} ‖f‖_r`,
//! `D = (d/2)(1/r - 1/p)`, together with the sharp Young constant and heat
//! kernel norms they are built from.
//!
//! Everything is evaluated in log space; the public `a_par` exponentiates
//! once at the end.

use crate::error::{GnsError, Result};
use crate::exponents::{young_partner, LebesgueExponent};
use crate::specialfn::{ln_min_product_power, log_gamma_unchecked};

const TRIPLE_TOL: f64 = 1e-12;
const EVEN_TOL: f64 = 1e-12;

/// `-u ln u` with `φ(0) = 0`; `(1/p) ln p` in terms of `u = 1/p`.
fn phi(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        -u * u.ln()
    }
}

/// Inputs of the smoothing constant: output exponent `p`, input exponent
/// `r`, derivative order `s` and dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParabolicParams {
    pub p: LebesgueExponent,
    pub r: LebesgueExponent,
    pub s: f64,
    pub d: u32,
}

/// `D = (d/2)(1/r - 1/p)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SmoothingGap(f64);

impl SmoothingGap {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Which display of the even-order, `r < p` constant to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AParForm {
    /// The constant obtained by following the proof; the default.
    #[default]
    Proof,
    /// The compact closed form as usually stated. It differs from
    /// [`AParForm::Proof`] by `(d/(2q'²))^D` and does not reduce to the heat
    /// kernel norm at `s = 0`; kept for comparison only.
    Compact,
}

impl ParabolicParams {
    /// Checks `r ≤ p` and, for negative orders, `-s < d(1/r - 1/p)`.
    pub fn new(p: LebesgueExponent, r: LebesgueExponent, s: f64, d: u32) -> Result<Self> {
        let params = Self { p, r, s, d };
        params.check()?;
        Ok(params)
    }

    pub fn dim(&self) -> f64 {
        f64::from(self.d)
    }

    pub fn gap(&self) -> SmoothingGap {
        SmoothingGap(0.5 * self.dim() * (self.r.recip() - self.p.recip()))
    }

    /// Exponent of `t` in the estimate: `-s/2 - D`.
    pub fn time_exponent(&self) -> f64 {
        -0.5 * self.s - self.gap().value()
    }

    pub fn check(&self) -> Result<()> {
        if self.d == 0 {
            return Err(GnsError::Domain("dimension must be positive".into()));
        }
        if !self.s.is_finite() {
            return Err(GnsError::Domain(format!("order must be finite, got {}", self.s)));
        }
        if self.r.recip() < self.p.recip() {
            return Err(GnsError::InvalidRegime(format!(
                "input exponent r={} exceeds output exponent p={}",
                self.r, self.p
            )));
        }
        if self.s < 0.0 {
            let room = self.dim() * (self.r.recip() - self.p.recip());
            if -self.s >= room {
                return Err(GnsError::InvalidRegime(format!(
                    "Sobolev endpoint: negative order s={} needs -s < d(1/r - 1/p) = {room}",
                    self.s
                )));
            }
        }
        Ok(())
    }
}

/// Sharp Young constant for `‖f * g‖_p ≤ A_Y ‖f‖_q ‖g‖_r`; equals 1 unless
/// all three exponents lie in `(1, ∞)`.
pub fn young_constant(
    p: LebesgueExponent,
    q: LebesgueExponent,
    r: LebesgueExponent,
    d: u32,
) -> Result<f64> {
    ln_young_constant(p, q, r, d).map(f64::exp)
}

pub fn ln_young_constant(
    p: LebesgueExponent,
    q: LebesgueExponent,
    r: LebesgueExponent,
    d: u32,
) -> Result<f64> {
    let residual = q.recip() + r.recip() - 1.0 - p.recip();
    if residual.abs() > TRIPLE_TOL {
        return Err(GnsError::TripleMismatch { residual });
    }
    if !(p.is_interior() && q.is_interior() && r.is_interior()) {
        return Ok(0.0);
    }
    let (up, uq, ur) = (p.recip(), q.recip(), r.recip());
    let bracket = phi(1.0 - up) + phi(uq) + phi(ur) - phi(up) - phi(1.0 - uq) - phi(1.0 - ur);
    Ok(0.5 * f64::from(d) * bracket)
}

/// `‖G_t‖_q = (4πt)^{-(d/2)(1 - 1/q)} q^{-d/(2q)}`.
pub fn heat_kernel_norm(t: f64, q: LebesgueExponent, d: u32) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(GnsError::Domain(format!("time must be positive, got {t}")));
    }
    let half_d = 0.5 * f64::from(d);
    let ln = -half_d * q.conj_recip() * (4.0 * std::f64::consts::PI * t).ln() - half_d * phi(q.recip());
    Ok(ln.exp())
}

/// `ln(Γ((d+s)/2) 2^{s/2} / Γ(d/2))`: the L¹ factor of `|∇|^s G_1` for even `s`.
fn ln_even_derivative_factor(s: f64, d: f64) -> f64 {
    log_gamma_unchecked(0.5 * (d + s)) - log_gamma_unchecked(0.5 * d)
        + 0.5 * s * std::f64::consts::LN_2
}

/// `ln(A_Y (4π)^{-D} q^{-d/(2q)})`, the constant of `‖G_t * f‖_p`.
fn ln_kernel_young(params: &ParabolicParams) -> Result<(f64, LebesgueExponent)> {
    let q = young_partner(params.p, params.r)?;
    let ln_ay = ln_young_constant(params.p, q, params.r, params.d)?;
    let big_d = params.gap().value();
    let ln = ln_ay - big_d * (4.0 * std::f64::consts::PI).ln() - 0.5 * params.dim() * phi(q.recip());
    Ok((ln, q))
}

fn is_even_integer(s: f64) -> bool {
    let half = 0.5 * s;
    (half - half.round()).abs() < EVEN_TOL
}

/// Natural logarithm of [`a_par`].
pub fn ln_a_par(params: &ParabolicParams) -> Result<f64> {
    ln_a_par_with(params, AParForm::Proof)
}

pub fn ln_a_par_with(params: &ParabolicParams, form: AParForm) -> Result<f64> {
    params.check()?;
    let d = params.dim();
    let s = params.s;
    let big_d = params.gap().value();

    if s < 0.0 {
        let (ln_k, _) = ln_kernel_young(params)?;
        return Ok(ln_k + log_gamma_unchecked(big_d + 0.5 * s) - log_gamma_unchecked(big_d));
    }

    if is_even_integer(s) {
        let s = 2.0 * (0.5 * s).round();
        if big_d == 0.0 {
            return Ok(ln_even_derivative_factor(s, d));
        }
        let (ln_k, q) = ln_kernel_young(params)?;
        return Ok(match form {
            AParForm::Proof => {
                ln_k + ln_even_derivative_factor(s, d) + ln_min_product_power(0.5 * s, big_d)?
            }
            AParForm::Compact => {
                let x = 0.5 * s + big_d;
                ln_k + s * std::f64::consts::LN_2
                    - 0.5 * d * phi(q.conj_recip())
                    + log_gamma_unchecked(0.5 * (d + s))
                    - log_gamma_unchecked(0.5 * d)
                    - if s > 0.0 { 0.5 * s * s.ln() } else { 0.0 }
                    + x * x.ln()
            }
        });
    }

    let floor = (0.5 * s).floor();
    let upper = ParabolicParams { s: 2.0 * floor + 2.0, ..*params };
    Ok(ln_a_par_with(&upper, form)?
        + log_gamma_unchecked(0.5 * s + big_d)
        - log_gamma_unchecked(floor + 1.0 + big_d))
}

/// The `t`-free constant `A_par(p, r, s, d)`.
pub fn a_par(params: &ParabolicParams) -> Result<f64> {
    ln_a_par(params).map(f64::exp)
}

pub fn a_par_with(params: &ParabolicParams, form: AParForm) -> Result<f64> {
    ln_a_par_with(params, form).map(f64::exp)
}

/// `A_par t^{-s/2 - D}`.
pub fn bound_at_time(params: &ParabolicParams, t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(GnsError::Domain(format!("time must be positive, got {t}")));
    }
    Ok((ln_a_par(params)? + params.time_exponent() * t.ln()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_kronrod;
    use std::f64::consts::PI;

    fn exp(v: f64) -> LebesgueExponent {
        LebesgueExponent::new(v).unwrap()
    }

    fn params(p: f64, r: f64, s: f64, d: u32) -> ParabolicParams {
        ParabolicParams::new(exp(p), exp(r), s, d).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn young_constant_values() {
        assert_eq!(young_constant(exp(2.0), exp(2.0), exp(1.0), 3).unwrap(), 1.0);
        assert_eq!(young_constant(LebesgueExponent::INFINITY, exp(2.0), exp(2.0), 2).unwrap(), 1.0);
        let q = LebesgueExponent::from_recip(0.75).unwrap();
        let v = young_constant(exp(2.0), q, q, 1).unwrap();
        // Hand evaluation: (2^{1/2} (4/3)^{3/2} / (2^{1/2} 4^{1/2}))^{1/2}
        let hand = ((4.0f64 / 3.0).powf(1.5) / 2.0).sqrt();
        assert!(rel(v, hand) < 1e-14);
        assert!((v - 0.87738).abs() < 1e-5);
        assert!(matches!(
            young_constant(exp(2.0), exp(2.0), exp(2.0), 1),
            Err(GnsError::TripleMismatch { .. })
        ));
    }

    #[test]
    fn heat_kernel_norm_values() {
        for t in [0.1, 1.0, 10.0] {
            for d in 1..=3 {
                assert!((heat_kernel_norm(t, LebesgueExponent::ONE, d).unwrap() - 1.0).abs() < 1e-15);
            }
        }
        let sup = heat_kernel_norm(0.3, LebesgueExponent::INFINITY, 2).unwrap();
        assert!(rel(sup, 1.0 / (4.0 * PI * 0.3)) < 1e-14);
        // ‖G₁‖₂ in d = 1 by quadrature.
        let g = |x: f64| (-x * x / 4.0).exp() / (4.0 * PI).sqrt();
        let l2 = gauss_kronrod(|x| g(x) * g(x), -40.0, 40.0, 0.0, 1e-14, 200).value.sqrt();
        let v = heat_kernel_norm(1.0, exp(2.0), 1).unwrap();
        assert!(rel(v, l2) < 1e-12);
        assert!(rel(v, (8.0 * PI).powf(-0.25)) < 1e-14);
        assert!(heat_kernel_norm(0.0, exp(2.0), 1).is_err());
    }

    #[test]
    fn diagonal_values() {
        for p in [1.0, 2.0, f64::INFINITY] {
            for d in 1..=3 {
                assert!((a_par(&params(p, p, 0.0, d)).unwrap() - 1.0).abs() < 1e-12);
                assert!((a_par(&params(p, p, 2.0, d)).unwrap() - f64::from(d)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_order_matches_kernel_norm() {
        let v = a_par(&params(2.0, 1.0, 0.0, 1)).unwrap();
        let kernel = heat_kernel_norm(1.0, exp(2.0), 1).unwrap();
        assert!(rel(v, kernel) < 1e-14);
        assert!((v - 0.44662).abs() < 1e-5);
        let at4 = bound_at_time(&params(2.0, 1.0, 0.0, 1), 4.0).unwrap();
        assert!(rel(at4, v * 4f64.powf(-0.25)) < 1e-14);
    }

    #[test]
    fn bound_at_time_examples() {
        assert!((bound_at_time(&params(2.0, 2.0, 0.0, 1), 7.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((bound_at_time(&params(2.0, 2.0, 2.0, 3), 2.0).unwrap() - 1.5).abs() < 1e-14);
    }

    #[test]
    fn negative_order() {
        let v = a_par(&params(f64::INFINITY, 2.0, -0.5, 2)).unwrap();
        let hand = (4.0 * PI).powf(-0.5) * 2f64.powf(-0.5) * (log_gamma_unchecked(0.25) - log_gamma_unchecked(0.5)).exp();
        assert!(rel(v, hand) < 1e-13);
        let err = ParabolicParams::new(LebesgueExponent::INFINITY, exp(2.0), -1.0, 2).unwrap_err();
        assert!(err.to_string().contains("Sobolev endpoint"));
        assert!(ParabolicParams::new(exp(1.0), exp(1.0), -1.0, 2).is_err());
        assert!(ParabolicParams::new(exp(1.0), exp(2.0), 0.0, 2).is_err());
    }

    #[test]
    fn blow_up_at_sobolev_endpoint() {
        // d(1/r - 1/p) = 1 for r = 1, p = 2, d = 2.
        let near = a_par(&params(2.0, 1.0, -(1.0 - 1e-3), 2)).unwrap();
        let far = a_par(&params(2.0, 1.0, -(1.0 - 1e-1), 2)).unwrap();
        assert!(near > far);
    }

    #[test]
    fn fractional_branch_splices_from_below() {
        for m in [1.0, 2.0] {
            for d in 1..=3 {
                for (p, r) in [(2.0, 1.0), (f64::INFINITY, 2.0)] {
                    let even = a_par(&params(p, r, 2.0 * m, d)).unwrap();
                    let below = a_par(&params(p, r, 2.0 * m - 1e-7, d)).unwrap();
                    let ratio = below / even;
                    assert!((0.99..=1.01).contains(&ratio), "m={m} d={d}: {ratio}");
                    assert!((ratio - 1.0).abs() < 1e-6);
                }
            }
        }
    }

    #[test]
    fn fractional_branch_formula() {
        let pr = params(4.0, 2.0, 1.0, 1);
        let big_d = pr.gap().value();
        let upper = a_par(&params(4.0, 2.0, 2.0, 1)).unwrap();
        let want = upper * (log_gamma_unchecked(0.5 + big_d) - log_gamma_unchecked(1.0 + big_d)).exp();
        assert!(rel(a_par(&pr).unwrap(), want) < 1e-14);
    }

    #[test]
    fn diagonal_limit_of_even_branch() {
        // M(s/2, 0) = 1, so the r < p expression collapses to the r = p one.
        for s in [0.0, 2.0, 4.0] {
            for d in 1..=3 {
                let diag = a_par(&params(3.0, 3.0, s, d)).unwrap();
                let hand = ln_even_derivative_factor(s, f64::from(d)).exp();
                assert!(rel(diag, hand) < 1e-15);
            }
        }
    }

    #[test]
    fn compact_form_ratio() {
        for (p, r, s, d) in [(2.0, 1.0, 0.0, 1), (4.0, 2.0, 2.0, 2), (f64::INFINITY, 1.5, 4.0, 3)] {
            let pr = params(p, r, s, d);
            let q = young_partner(pr.p, pr.r).unwrap();
            let big_d = pr.gap().value();
            let proof = a_par(&pr).unwrap();
            let compact = a_par_with(&pr, AParForm::Compact).unwrap();
            let factor = (f64::from(d) / 2.0 * q.conj_recip() * q.conj_recip()).powf(big_d);
            assert!(rel(compact / proof, factor) < 1e-12, "{p} {r} {s} {d}");
        }
    }
}
