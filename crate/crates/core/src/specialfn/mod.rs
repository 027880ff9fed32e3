//! Special functions used by the constants and by the verification oracle.

mod bell;
mod gamma;

pub use bell::{
    bell_complete, bell_via_generating_function, for_each_partition, heat_deriv_l1_bound,
    heat_deriv_partition_sum, BellInput, MAX_BELL_DEGREE,
};
pub use gamma::{ln_gamma_ratio, log_gamma};
pub(crate) use gamma::log_gamma_unchecked;

use crate::error::{GnsError, Result};

/// `x ln x` with `0 ln 0 = 0`.
pub(crate) fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `ln min_{λ∈[0,1]} λ^{-α} (1-λ)^{-β} = (α+β)ln(α+β) - α ln α - β ln β`.
pub fn ln_min_product_power(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha >= 0.0 && beta >= 0.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(GnsError::Domain(format!(
            "min_product_power needs nonnegative arguments, got ({alpha}, {beta})"
        )));
    }
    Ok(xlogx(alpha + beta) - xlogx(alpha) - xlogx(beta))
}

/// `min_{λ∈[0,1]} λ^{-α}(1-λ)^{-β} = (α+β)^{α+β} / (α^α β^β)`, attained at
/// `λ = α/(α+β)`. With a zero argument the minimum is 1 (attained at an
/// endpoint).
pub fn min_product_power(alpha: f64, beta: f64) -> Result<f64> {
    ln_min_product_power(alpha, beta).map(f64::exp)
}

/// `∫₀^∞ x^{-α} (1+x)^{-β} dx = Γ(α+β-1) Γ(1-α) / Γ(β)` for `α < 1`,
/// `β > 1 - α`.
pub fn beta_integral(alpha: f64, beta: f64) -> Result<f64> {
    if !(alpha < 1.0 && alpha + beta > 1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(GnsError::Domain(format!(
            "beta_integral needs alpha < 1 and beta > 1 - alpha, got ({alpha}, {beta})"
        )));
    }
    let ln = log_gamma_unchecked(alpha + beta - 1.0) + log_gamma_unchecked(1.0 - alpha)
        - log_gamma_unchecked(beta);
    Ok(ln.exp())
}
