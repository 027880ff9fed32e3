//! Complete exponential Bell polynomials and the partition sums behind the
//! L¹ norm of `(-Δ)ⁿ G_t`.

use crate::error::{GnsError, Result};

use super::gamma::log_gamma_unchecked;

/// Largest degree accepted; `ℓ!` and the partition count stay manageable.
pub const MAX_BELL_DEGREE: usize = 20;

/// Arguments of `B_ℓ(x₁, …, x_ℓ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellInput {
    x: Vec<f64>,
}

impl BellInput {
    pub fn new(x: Vec<f64>) -> Self {
        Self { x }
    }

    pub fn ell(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }
}

/// Visits every multiplicity vector `r` with `Σ j r_j = ℓ`; `r[j-1]` is the
/// multiplicity of part `j`.
pub fn for_each_partition(ell: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(part: usize, remaining: usize, r: &mut [usize], visit: &mut dyn FnMut(&[usize])) {
        if part == 0 {
            if remaining == 0 {
                visit(r);
            }
            return;
        }
        for mult in 0..=remaining / part {
            r[part - 1] = mult;
            rec(part - 1, remaining - mult * part, r, visit);
        }
        r[part - 1] = 0;
    }
    let mut r = vec![0; ell];
    rec(ell, ell, &mut r, &mut visit);
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn check_degree(ell: usize) -> Result<()> {
    if ell > MAX_BELL_DEGREE {
        return Err(GnsError::Size(format!(
            "Bell degree {ell} exceeds {MAX_BELL_DEGREE}"
        )));
    }
    Ok(())
}

/// `B_ℓ(x) = ℓ! Σ_{r ∈ R(ℓ)} Π_j (x_j / j!)^{r_j} / r_j!` by direct summation.
pub fn bell_complete(input: &BellInput) -> Result<f64> {
    let ell = input.ell();
    check_degree(ell)?;
    let scaled: Vec<f64> = input
        .x()
        .iter()
        .enumerate()
        .map(|(i, x)| x / factorial(i + 1))
        .collect();
    let mut total = 0.0;
    for_each_partition(ell, |r| {
        let mut term = 1.0;
        for (j, &mult) in r.iter().enumerate() {
            if mult > 0 {
                term *= scaled[j].powi(mult as i32) / factorial(mult);
            }
        }
        total += term;
    });
    Ok(factorial(ell) * total)
}

/// `∂_λ^ℓ exp(λσ/(1-λ))` at `λ = 0`, from the power series of the exponential
/// of `σ Σ_{j≥1} λ^j`.
pub fn bell_via_generating_function(ell: usize, sigma: f64) -> Result<f64> {
    check_degree(ell)?;
    // e_n: Taylor coefficients of exp(g), g_k = σ for k ≥ 1.
    // n e_n = Σ_{k=1}^n k g_k e_{n-k}
    let mut e = vec![0.0; ell + 1];
    e[0] = 1.0;
    for n in 1..=ell {
        let mut acc = 0.0;
        for k in 1..=n {
            acc += k as f64 * sigma * e[n - k];
        }
        e[n] = acc / n as f64;
    }
    Ok(factorial(ell) * e[ell])
}

/// The t-free factor `Γ(d/2 + n) 2ⁿ / Γ(d/2)` bounding `t^n ‖(-Δ)ⁿ G_t‖₁`.
pub fn heat_deriv_l1_bound(n: u32, d: u32) -> f64 {
    let half_d = f64::from(d) / 2.0;
    let n = f64::from(n);
    (log_gamma_unchecked(half_d + n) - log_gamma_unchecked(half_d) + n * std::f64::consts::LN_2)
        .exp()
}

/// The double sum
/// `n! Σ_k Γ(d/2+k) / (k! Γ(d/2)²) Σ_{r ∈ R(n-k)} Γ(d/2 + |r|₁) Π 1/r_j!`
/// obtained by expanding `(-∂_t)ⁿ G_t` with Leibniz and Faà di Bruno and
/// integrating the Gaussian moments. It equals [`heat_deriv_l1_bound`].
pub fn heat_deriv_partition_sum(n: u32, d: u32) -> Result<f64> {
    let n = n as usize;
    check_degree(n)?;
    let half_d = f64::from(d) / 2.0;
    let lg_half_d = log_gamma_unchecked(half_d);
    let mut total = 0.0;
    for k in 0..=n {
        let outer = (log_gamma_unchecked(half_d + k as f64) - 2.0 * lg_half_d).exp() / factorial(k);
        let mut inner = 0.0;
        for_each_partition(n - k, |r| {
            let parts: usize = r.iter().sum();
            let denom: f64 = r.iter().map(|&m| factorial(m)).product();
            inner += log_gamma_unchecked(half_d + parts as f64).exp() / denom;
        });
        total += outer * inner;
    }
    Ok(factorial(n) * total)
}
