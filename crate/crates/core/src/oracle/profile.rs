//! Radial profile of `|∇|^s e^{tΔ} e^{-a|x|²}` on `ℝ^d`, `d ≤ 3`.
//!
//! With `c = 1/(4a) + t` the Fourier transform of the function is
//! `(π/a)^{d/2} |ξ|^s e^{-c|ξ|²}`, so
//!
//! ```text
//! h(r) = (2π)^{-d} (π/a)^{d/2} ∫₀^∞ k^{s+d-1} e^{-ck²} Ω_d(kr) dk,
//! Ω₁(x) = 2 cos x,  Ω₂(x) = 2π J₀(x),  Ω₃(x) = 4π sin(x)/x.
//! ```
//!
//! The integral is evaluated by adaptive quadrature while `r²/(4c) ≤ 40` and
//! by the large-argument expansion of Kummer's function beyond that.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;

use crate::error::{GnsError, Result};
use crate::exponents::LebesgueExponent;
use crate::quadrature::{gauss_kronrod, tanh_sinh};
use crate::specialfn::log_gamma_unchecked;

use super::bessel::bessel_j0;

/// `r²/(4c)` beyond which the expansion replaces quadrature.
const Z_SWITCH: f64 = 40.0;
/// `ck²` at which the frequency integral is truncated (`e^{-60} ≈ 1e-26`).
const FREQ_CUTOFF: f64 = 60.0;
pub(crate) const GRID_POINTS: usize = 4096;
/// Relative accuracy requested from the outer integrals.
const OUTER_REL: f64 = 1e-11;
/// Relative error estimate above which an outer integral is refused.
pub(crate) const OUTER_TARGET: f64 = 1e-8;
const INNER_TARGET: f64 = 1e-10;
/// Relative size below which profile values are indistinguishable from zero.
const NOISE_FLOOR: f64 = 1e-9;

fn omega(d: u32, x: f64) -> f64 {
    match d {
        1 => 2.0 * x.cos(),
        2 => 2.0 * PI * bessel_j0(x),
        _ => {
            let sinc = if x.abs() < 1e-4 { 1.0 - x * x / 6.0 } else { x.sin() / x };
            4.0 * PI * sinc
        }
    }
}

/// `1/Γ(x)` for any real `x`, zero at the poles.
fn recip_gamma(x: f64) -> f64 {
    if x > 0.0 {
        return (-log_gamma_unchecked(x)).exp();
    }
    if (x - x.round()).abs() < 1e-12 {
        return 0.0;
    }
    // Reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π.
    (PI * x).sin() * log_gamma_unchecked(1.0 - x).exp() / PI
}

/// Surface area of the unit sphere in `ℝ^d`.
pub(crate) fn sphere_area(d: u32) -> f64 {
    let half = 0.5 * f64::from(d);
    2.0 * PI.powf(half) / log_gamma_unchecked(half).exp()
}

pub(crate) struct Profile {
    d: u32,
    s: f64,
    c: f64,
    half_order: f64,
    /// `(2π)^{-d} (π/a)^{d/2}`.
    prefactor: f64,
    subst: i32,
    inner_scale: f64,
    radius: f64,
    cache: RefCell<HashMap<u64, f64>>,
    grid: RefCell<Option<Vec<f64>>>,
}

impl Profile {
    pub(crate) fn new(d: u32, s: f64, width: f64, t: f64) -> Result<Self> {
        if !(1..=3).contains(&d) {
            return Err(GnsError::Domain(format!("oracle supports d in 1..=3, got {d}")));
        }
        let df = f64::from(d);
        if !(s > -df) || !s.is_finite() {
            return Err(GnsError::Domain(format!("order s={s} must exceed -d={}", -df)));
        }
        if !(width > 0.0) || !width.is_finite() {
            return Err(GnsError::Domain(format!("width must be positive, got {width}")));
        }
        if !(t >= 0.0) || !t.is_finite() {
            return Err(GnsError::Domain(format!("time must be nonnegative, got {t}")));
        }
        let c = 0.25 / width + t;
        let half_order = 0.5 * (df + s);
        let prefactor = (2.0 * PI).powi(-(d as i32)) * (PI / width).powf(0.5 * df);
        let subst = if (s - s.round()).abs() < 1e-12 { 1 } else { 4 };
        let inner_scale = 0.5 * log_gamma_unchecked(half_order).exp() * omega(d, 0.0);
        Ok(Self {
            d,
            s,
            c,
            half_order,
            prefactor,
            subst,
            inner_scale,
            radius: (4.0 * Z_SWITCH * c).sqrt(),
            cache: RefCell::new(HashMap::new()),
            grid: RefCell::new(None),
        })
    }

    /// True when the profile is a Gaussian times a polynomial.
    fn gaussian_tail(&self) -> bool {
        self.s >= 0.0 && (0.5 * self.s - (0.5 * self.s).round()).abs() < 1e-12
    }

    /// The frequency integral at `c = 1`.
    fn unit_integral(&self, rho: f64) -> Result<f64> {
        let z = 0.25 * rho * rho;
        if z > Z_SWITCH {
            return Ok(self.unit_expansion(rho));
        }
        let m = self.subst;
        let mf = f64::from(m);
        let power = mf * 2.0 * self.half_order - 1.0;
        let upper = FREQ_CUTOFF.powf(0.5 / mf);
        let d = self.d;
        let res = gauss_kronrod(
            |u: f64| {
                if u <= 0.0 {
                    return if power == 0.0 { mf * omega(d, 0.0) } else { 0.0 };
                }
                let k = u.powi(m);
                mf * u.powf(power) * (-k * k).exp() * omega(d, k * rho)
            },
            0.0,
            upper,
            1e-12 * self.inner_scale,
            0.0,
            400,
        );
        let target = INNER_TARGET * self.inner_scale;
        if !(res.error <= target) {
            return Err(GnsError::Accuracy { estimate: res.error / self.inner_scale, target: INNER_TARGET });
        }
        Ok(res.value)
    }

    /// `π^{d/2} Γ(A) (2/ρ)^{2A} / Γ(-s/2) · Σ (A)_n (s/2+1)_n / n! z^{-n}`.
    fn unit_expansion(&self, rho: f64) -> f64 {
        if self.gaussian_tail() {
            return 0.0;
        }
        let a = self.half_order;
        let b2 = 0.5 * self.s + 1.0;
        let z = 0.25 * rho * rho;
        let mut term: f64 = 1.0;
        let mut sum: f64 = 1.0;
        let mut last = f64::INFINITY;
        for n in 1..200 {
            let nf = f64::from(n);
            let next = term * (a + nf - 1.0) * (b2 + nf - 1.0) / (nf * z);
            if next.abs() >= last || next.abs() < 1e-17 * sum.abs() {
                break;
            }
            last = next.abs();
            term = next;
            sum += term;
        }
        let df = f64::from(self.d);
        let ln_mag = 0.5 * df * PI.ln() + log_gamma_unchecked(a) + 2.0 * a * (2.0 / rho).ln();
        ln_mag.exp() * recip_gamma(-0.5 * self.s) * sum
    }

    /// `∫₀^∞ k^{s+d-1} e^{-ck²} Ω_d(kr) dk`, memoized.
    pub(crate) fn radial(&self, r: f64) -> Result<f64> {
        let key = r.to_bits();
        if let Some(v) = self.cache.borrow().get(&key) {
            return Ok(*v);
        }
        let v = self.c.powf(-self.half_order) * self.unit_integral(r / self.c.sqrt())?;
        self.cache.borrow_mut().insert(key, v);
        Ok(v)
    }

    /// `h(r)` itself.
    pub(crate) fn value(&self, r: f64) -> Result<f64> {
        Ok(self.prefactor * self.radial(r)?)
    }

    fn grid_step(&self) -> f64 {
        self.radius / GRID_POINTS as f64
    }

    fn with_grid<T>(&self, f: impl FnOnce(&[f64]) -> T) -> Result<T> {
        if self.grid.borrow().is_none() {
            let step = self.grid_step();
            let vals = (0..=GRID_POINTS)
                .map(|i| self.radial(i as f64 * step))
                .collect::<Result<Vec<_>>>()?;
            *self.grid.borrow_mut() = Some(vals);
        }
        let grid = self.grid.borrow();
        Ok(f(grid.as_ref().expect("grid was just filled")))
    }

    /// Sign changes of the profile on `[0, R]`, refined by bisection. Changes
    /// between values at the quadrature noise level are ignored.
    fn zeros(&self) -> Result<Vec<f64>> {
        let step = self.grid_step();
        let brackets = self.with_grid(|g| {
            let peak = g.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let floor = NOISE_FLOOR * peak;
            (0..GRID_POINTS)
                .filter(|&i| {
                    (g[i] < 0.0) != (g[i + 1] < 0.0) && g[i].abs().max(g[i + 1].abs()) > floor
                })
                .map(|i| (i as f64 * step, (i + 1) as f64 * step, g[i]))
                .collect::<Vec<_>>()
        })?;
        let mut out = Vec::with_capacity(brackets.len());
        for (mut lo, mut hi, f_lo) in brackets {
            let neg_lo = f_lo < 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let v = self.radial(mid)?;
                if v == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (v < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        Ok(out)
    }

    /// `sup |∫ k^{s+d-1} e^{-ck²} Ω_d(kr) dk|` over `r ≥ 0`.
    fn radial_sup(&self) -> Result<f64> {
        let step = self.grid_step();
        let (best, best_val) = self.with_grid(|g| {
            let mut best = 0;
            for (i, v) in g.iter().enumerate() {
                if v.abs() > g[best].abs() {
                    best = i;
                }
            }
            (best, g[best].abs())
        })?;
        let lo = best.saturating_sub(1) as f64 * step;
        let hi = ((best + 1).min(GRID_POINTS)) as f64 * step;
        let polished = golden_max(|r| self.radial(r).map(f64::abs), lo, hi)?;
        Ok(polished.max(best_val))
    }

    /// `∫₀^∞ |·|^p r^{d-1} dr` of the radial integral.
    fn radial_power_integral(&self, p: f64) -> Result<f64> {
        let df = f64::from(self.d);
        if !self.gaussian_tail() && !(2.0 * self.half_order * p > df) {
            return Err(GnsError::Domain(format!(
                "|∇|^{} of a Gaussian is not in L^{p} on R^{}",
                self.s, self.d
            )));
        }
        let failure: RefCell<Option<GnsError>> = RefCell::new(None);
        let integrand = |r: f64| match self.radial(r) {
            Ok(v) if v == 0.0 => 0.0,
            Ok(v) => v.abs().powf(p) * r.powf(df - 1.0),
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        };
        let mut cuts = vec![0.0];
        cuts.extend(self.zeros()?);
        cuts.push(self.radius);
        // Trapezoid estimate on the grid, used to set absolute tolerances.
        let step = self.grid_step();
        let rough = self.with_grid(|g| {
            g.iter()
                .enumerate()
                .map(|(i, v)| v.abs().powf(p) * (i as f64 * step).powf(df - 1.0))
                .sum::<f64>()
                * step
        })?;
        let mut total = 0.0;
        let mut error = 0.0;
        for w in cuts.windows(2) {
            let res = gauss_kronrod(integrand, w[0], w[1], 1e-3 * OUTER_REL * rough, OUTER_REL, 1000);
            total += res.value;
            error += res.error;
        }
        if !self.gaussian_tail() {
            let radius = self.radius;
            let res = tanh_sinh(
                |v: f64| {
                    let r = radius / v;
                    if !(v > 0.0) || !r.is_finite() {
                        return 0.0;
                    }
                    let y = integrand(r);
                    if y == 0.0 {
                        0.0
                    } else {
                        y * (radius / v) / v
                    }
                },
                0.0,
                1.0,
                1e-12,
                12,
            );
            total += res.value;
            error += res.error;
        }
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        if !(error <= OUTER_TARGET * total.abs()) {
            return Err(GnsError::Accuracy { estimate: error / total.abs(), target: OUTER_TARGET });
        }
        Ok(total)
    }

    /// `‖h‖_p`.
    pub(crate) fn lp_norm(&self, p: LebesgueExponent) -> Result<f64> {
        if p.is_infinite() {
            return Ok(self.prefactor * self.radial_sup()?);
        }
        let pv = p.value();
        let integral = self.radial_power_integral(pv)?;
        Ok(self.prefactor * (sphere_area(self.d) * integral).powf(1.0 / pv))
    }
}

/// Maximizes a unimodal `f` on `[lo, hi]` by golden-section search.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> Result<f64>, lo: f64, hi: f64) -> Result<f64> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    let mut best = f1.max(f2).max(f(lo)?).max(f(hi)?);
    for _ in 0..80 {
        if (b - a) <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        }
        best = best.max(f1).max(f2);
    }
    Ok(best)
}
