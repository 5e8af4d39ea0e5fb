//! Two-parameter Mittag-Leffler function `E_{η,μ}(z)` on the non-positive
//! real axis.
//!
//! The evaluator picks a representation by region:
//!
//! * `|z| ≤ 1`: the defining power series `Σ z^k / Γ(ηk+μ)`, summed with
//!   Neumaier compensation.
//! * `|z| > 1`, when the algebraic expansion `-Σ z^{-k} / Γ(μ-ηk)` reaches
//!   full double precision before its smallest term: that expansion.
//! * `η = 1`: Euler-type integrals over `[0, 1]` with a positive weight.
//! * `η < 1`: the Hankel contour collapsed onto the negative real axis,
//!   which yields a real integral against `e^{-r}`.
//!
//! Outside the validated envelope an [`Error::UnsupportedRange`] is
//! returned instead of a degraded value.

pub mod gamma;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use gamma::{gamma_fn, is_gamma_pole, ln_gamma, rgamma, sin_pi};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_breaks, integrate_power_graded, integrate_power_singular, QuadOptions};

/// Smallest order accepted by [`ml_eval`].
pub const ETA_MIN: f64 = 0.1;
/// Range of the second parameter for `η < 1`.
pub const MU_RANGE: (f64, f64) = (0.1, 3.0);
/// Upper bound on `μ` when `η = 1` (the Euler integrals hold for any `μ > 0`).
pub const MU_MAX_EXPONENTIAL: f64 = 64.0;
/// Largest `|z|` evaluated by quadrature; beyond it only the algebraic
/// expansion is used, and only when it converges to full precision.
pub const Z_MAX: f64 = 1e4;

const SERIES_RADIUS: f64 = 1.0;
const SERIES_MAX_TERMS: usize = 500;
const ASYMPTOTIC_MAX_TERMS: usize = 4000;
const RAY_CUTOFF: f64 = 80.0;
const GRADE: u32 = 4;

/// Parameters and argument of one evaluation of `E_{η,μ}(z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MLQuery {
    pub eta: f64,
    pub mu: f64,
    pub z: f64,
}

impl MLQuery {
    pub fn new(eta: f64, mu: f64, z: f64) -> Result<Self> {
        let q = Self { eta, mu, z };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eta > 0.0) || !self.mu.is_finite() || !(self.z <= 0.0) {
            return Err(Error::Domain(format!(
                "Mittag-Leffler query needs eta > 0 and z <= 0 (eta={}, mu={}, z={})",
                self.eta, self.mu, self.z
            )));
        }
        Ok(())
    }
}

/// Evaluate `E_{η,μ}(z)` for `z ≤ 0`.
pub fn ml_eval(q: &MLQuery) -> Result<f64> {
    q.validate()?;
    let MLQuery { eta, mu, z } = *q;
    check_envelope(eta, mu)?;
    let x = -z;
    if x == 0.0 {
        return Ok(rgamma(mu));
    }
    if x <= SERIES_RADIUS {
        return Ok(power_series(eta, mu, x));
    }
    if eta == 1.0 && mu == 1.0 {
        return Ok((-x).exp());
    }
    if let Some(v) = asymptotic_if_exact(eta, mu, x) {
        return Ok(v);
    }
    if x > Z_MAX {
        return Err(Error::UnsupportedRange(format!(
            "E_{{{eta},{mu}}}(-{x}): |z| above {Z_MAX} and the algebraic expansion does not reach full precision"
        )));
    }
    if eta == 1.0 {
        euler_integral(mu, x)
    } else {
        hankel_integral(eta, mu, x)
    }
}

/// Convenience wrapper around [`ml_eval`].
pub fn mittag_leffler(eta: f64, mu: f64, z: f64) -> Result<f64> {
    ml_eval(&MLQuery { eta, mu, z })
}

/// `t^{η-1} E_{η,η}(-c t^η)`, the resolvent kernel of `∂_t^η u + c u = f`.
pub fn relaxation_kernel(eta: f64, c: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!("relaxation kernel needs t > 0 (t={t})")));
    }
    if !(c >= 0.0) || !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::Domain(format!(
            "relaxation kernel needs 0 < eta <= 1 and c >= 0 (eta={eta}, c={c})"
        )));
    }
    if eta == 1.0 {
        return Ok((-c * t).exp());
    }
    let e = mittag_leffler(eta, eta, -c * t.powf(eta))?;
    Ok(t.powf(eta - 1.0) * e)
}

/// Truncated algebraic expansion `E_{η,μ}(-x) ≈ Σ_{k=1}^{terms} (-1)^{k+1} x^{-k} / Γ(μ-ηk)`.
pub fn ml_asymptotic(eta: f64, mu: f64, x: f64, terms: usize) -> f64 {
    (1..=terms).map(|k| asymptotic_term(eta, mu, x, k)).sum()
}

fn check_envelope(eta: f64, mu: f64) -> Result<()> {
    let ok = if eta == 1.0 {
        mu >= MU_RANGE.0 && mu <= MU_MAX_EXPONENTIAL
    } else {
        (ETA_MIN..1.0).contains(&eta) && mu >= MU_RANGE.0 && mu <= MU_RANGE.1
    };
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedRange(format!(
            "E_{{eta,mu}} validated for eta in [{ETA_MIN}, 1], mu in [{}, {}] (mu up to {MU_MAX_EXPONENTIAL} when eta = 1); got eta={eta}, mu={mu}",
            MU_RANGE.0, MU_RANGE.1
        )))
    }
}

fn power_series(eta: f64, mu: f64, x: f64) -> f64 {
    let mut sum = rgamma(mu);
    let mut comp = 0.0;
    let mut xk = 1.0;
    let mut small = 0;
    for k in 1..SERIES_MAX_TERMS {
        xk *= -x;
        let arg = eta * k as f64 + mu;
        let term = if arg > 170.0 {
            xk.signum() * (k as f64 * x.ln() - ln_gamma(arg)).exp()
        } else {
            xk * rgamma(arg)
        };
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        // require two consecutive negligible terms so a zero of 1/Γ does not stop early
        if term.abs() <= 1e-17 * (sum + comp).abs() && arg > 2.0 {
            small += 1;
            if small >= 2 {
                break;
            }
        } else {
            small = 0;
        }
    }
    sum + comp
}

fn asymptotic_term(eta: f64, mu: f64, x: f64, k: usize) -> f64 {
    let y = mu - eta * k as f64;
    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
    if is_gamma_pole(y) {
        return 0.0;
    }
    if y > 0.0 {
        return sign * x.powi(-(k as i32)) * rgamma(y);
    }
    // 1/Γ(y) = sin(πy) Γ(1-y) / π, kept in logarithms
    let mag = (ln_gamma(1.0 - y) - k as f64 * x.ln()).exp() / PI;
    sign * sin_pi(y) * mag
}

// Sum the algebraic expansion up to its smallest envelope term; return it
// only when that term certifies full double precision.
fn asymptotic_if_exact(eta: f64, mu: f64, x: f64) -> Option<f64> {
    let lnx = x.ln();
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut best_env = f64::INFINITY;
    for k in 1..=ASYMPTOTIC_MAX_TERMS {
        let y = eta * k as f64 + 1.0 - mu;
        // |1/Γ(μ-ηk)| ≤ Γ(1-μ+ηk)/π once the argument is negative
        let env = if y > 0.0 {
            (ln_gamma(y) - k as f64 * lnx).exp() / PI
        } else {
            (-(k as f64) * lnx).exp() * rgamma(mu - eta * k as f64).abs()
        };
        if y > 1.0 && env > best_env {
            break;
        }
        best_env = best_env.min(env);
        let term = asymptotic_term(eta, mu, x, k);
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
        if env <= 1e-18 * (sum + comp).abs() {
            break;
        }
    }
    let s = sum + comp;
    if s == 0.0 || !s.is_finite() {
        return None;
    }
    let mut remainder = best_env;
    if eta == 1.0 {
        // exponentially small part e^{-x} x^{1-μ}/… on the Stokes line
        remainder += (-x + (1.0 - mu) * lnx).exp();
    }
    if remainder <= 1e-16 * s.abs() {
        Some(s)
    } else {
        None
    }
}

fn quad_opts() -> QuadOptions {
    QuadOptions::rel(1e-12).with_abs(1e-300)
}

fn inner_breaks(x: f64) -> Vec<f64> {
    let mut pts = vec![0.0];
    for k in [4.0, 40.0] {
        if k / x < 0.5 {
            pts.push(k / x);
        }
    }
    pts.push(0.5);
    pts
}

// η = 1, written in w = 1 - v so the mass near v = 1 sits next to w = 0.
fn euler_integral(mu: f64, x: f64) -> Result<f64> {
    let opts = quad_opts();
    let near = inner_breaks(x);
    if mu > 1.0 {
        // E = (1/Γ(μ-1)) ∫_0^1 e^{-xw} (1-w)^{μ-2} dw
        let p = mu - 1.0;
        let smooth = integrate_breaks(|w: f64| (-x * w).exp() * (1.0 - w).powf(p - 1.0), &near, &opts)?;
        let tail = integrate_power_singular(|v: f64| (-x * (1.0 - v)).exp(), p, 0.5, &opts)?;
        return Ok((smooth.value + tail.value) * rgamma(p));
    }
    // μ < 1: E = (1/Γ(μ)) [e^{-x} + x ∫_0^1 e^{-xw} (1 - (1-w)^{μ-1}) dw]
    let m1 = mu - 1.0;
    let smooth = integrate_breaks(
        |w: f64| (-x * w).exp() * -(m1 * (-w).ln_1p()).exp_m1(),
        &near,
        &opts,
    )?;
    // ∫_0^{1/2} e^{-x(1-v)} (1 - v^{μ-1}) dv, the singular piece by substitution
    let plain = ((-x * 0.5).exp() - (-x).exp()) / x;
    let sing = integrate_power_singular(|v: f64| (-x * (1.0 - v)).exp(), mu, 0.5, &opts)?;
    let total = (-x).exp() + x * (smooth.value + plain - sing.value);
    Ok(total * rgamma(mu))
}

// η < 1: E = (1/π) ∫_ε^∞ e^{-r} r^{η-μ} N(r)/D(r) dr + circle(ε), where
// N = r^η sin μπ - x sin (η-μ)π and D = r^{2η} + 2x r^η cos ηπ + x².
fn hankel_integral(eta: f64, mu: f64, x: f64) -> Result<f64> {
    let opts = quad_opts();
    let sin_mu = sin_pi(mu);
    let sin_em = sin_pi(eta - mu);
    let cos_e = (PI * eta).cos();
    let smooth = |r: f64| {
        let re = r.powf(eta);
        let num = re * sin_mu - x * sin_em;
        let den = re * re + 2.0 * x * re * cos_e + x * x;
        (-r).exp() * num / den
    };
    let p = eta - mu + 1.0;
    let r0 = x.powf(1.0 / eta);
    let mut breaks = Vec::new();
    let push_pole = |pts: &mut Vec<f64>, lo: f64| {
        if r0 > lo && r0 < RAY_CUTOFF {
            for f in [0.5, 1.0, 2.0] {
                let b = r0 * f;
                if b > lo && b < RAY_CUTOFF {
                    pts.push(b);
                }
            }
        }
    };
    let value = if p >= 0.25 {
        // r^{η-μ} = r^{p-1}: substitution on [0, b], plain rule afterwards
        let b = if r0 < 2.0 { 0.5 * r0 } else { 1.0 };
        let head = integrate_power_graded(smooth, p, b, GRADE, &opts)?;
        breaks.push(b);
        push_pole(&mut breaks, b);
        breaks.push(RAY_CUTOFF);
        let rest = integrate_breaks(|r: f64| r.powf(p - 1.0) * smooth(r), &breaks, &opts)?;
        (head.value + rest.value) / PI
    } else {
        let eps = if (0.5..=2.0).contains(&r0) { r0 / 3.0 } else { 1.0 };
        breaks.push(eps);
        push_pole(&mut breaks, eps);
        breaks.push(RAY_CUTOFF);
        let ray = integrate_breaks(|r: f64| r.powf(p - 1.0) * smooth(r), &breaks, &opts)?;
        let circle = integrate(
            |theta: f64| {
                let s = Complex64::from_polar(eps, theta);
                let f = s.exp() * s.powf(p) / (s.powf(eta) + x);
                f.re
            },
            0.0,
            PI,
            &opts,
        )?;
        (ray.value + circle.value) / PI
    };
    Ok(value)
}
