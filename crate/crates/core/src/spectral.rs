//! Exact eigenmode solution of the one-way coupled pair
//! `u_t - u_xx = 0`, `∂^β v - v_xx = u` on `(0, π)` with `v(0) = 0`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mittag_leffler::{mittag_leffler, rgamma};
use crate::quadrature::{integrate, integrate_breaks, QuadOptions};
use crate::subdiff_fd::Profile;

/// Default number of retained modes.
pub const DEFAULT_MODES: usize = 64;

/// `λ_n = n²`, `n ≥ 1`.
pub fn eigenvalue(n: usize) -> f64 {
    (n * n) as f64
}

/// `φ_n(x) = √(2/π) sin(nx)`, orthonormal in `L²(0, π)`.
pub fn eigenfunction(n: usize, x: f64) -> f64 {
    (2.0 / PI).sqrt() * (n as f64 * x).sin()
}

/// `(u₀, φ_n)` for `n = 1..=n_modes`. Closed forms for the built-in
/// profiles on `(0, π)`, adaptive quadrature for custom ones.
pub fn mode_coefficients(u0: &Profile, n_modes: usize) -> Result<Vec<f64>> {
    let norm = (2.0 / PI).sqrt();
    (1..=n_modes)
        .map(|n| {
            let nf = n as f64;
            Ok(match u0 {
                Profile::Zero => 0.0,
                Profile::Sine => {
                    if n == 1 {
                        (PI / 2.0).sqrt()
                    } else {
                        0.0
                    }
                }
                Profile::Parabola => {
                    if n % 2 == 1 {
                        norm * 4.0 / (nf * nf * nf)
                    } else {
                        0.0
                    }
                }
                Profile::Tent => match n % 4 {
                    1 => norm * 2.0 / (nf * nf),
                    3 => -norm * 2.0 / (nf * nf),
                    _ => 0.0,
                },
                Profile::Custom(f) => {
                    let breaks: Vec<f64> = (0..=n).map(|j| PI * j as f64 / n as f64).collect();
                    let opts = QuadOptions::rel(1e-12).with_abs(1e-15);
                    integrate_breaks(|x| f(x) * eigenfunction(n, x), &breaks, &opts)?.value
                }
            })
        })
        .collect()
}

/// `∫₀ᵗ τ^{β-1} E_{β,β}(-λτ^β) e^{-λ(t-τ)} dτ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeConvolution {
    pub lambda: f64,
    pub beta: f64,
    pub t: f64,
    pub value: f64,
}

impl ModeConvolution {
    pub fn new(lambda: f64, beta: f64, t: f64) -> Result<Self> {
        Ok(Self {
            lambda,
            beta,
            t,
            value: mode_convolution(lambda, beta, t)?,
        })
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("order beta must lie in (0, 1), got {beta}")))
    }
}

/// Value of the mode convolution with relative accuracy about `1e-10`.
pub fn mode_convolution(lambda: f64, beta: f64, t: f64) -> Result<f64> {
    check_beta(beta)?;
    if !(lambda > 0.0) || !(t >= 0.0) {
        return Err(Error::Domain(format!("mode convolution needs lambda > 0 and t >= 0 (lambda={lambda}, t={t})")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let opts = QuadOptions::rel(1e-11);
    let split = (0.5 * t).max(t - 40.0 / lambda);
    let mut err = None;
    let mut near = |tau: f64| -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        match mittag_leffler(beta, beta, -lambda * tau.powf(beta)) {
            Ok(e) => tau.powf(beta - 1.0) * e * (-lambda * (t - tau)).exp(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let mut breaks = vec![split];
    for d in [4.0, 1.0] {
        let p = t - d / lambda;
        if p > split {
            breaks.push(p);
        }
    }
    breaks.push(t);
    let upper = integrate_breaks(&mut near, &breaks, &opts)?.value;
    if let Some(e) = err.take() {
        return Err(e);
    }
    // τ = σ^{1/β} removes the τ^{β-1} singularity at the origin
    let inv_beta = 1.0 / beta;
    let top = split.powf(beta);
    let mut far = |sigma: f64| -> f64 {
        match mittag_leffler(beta, beta, -lambda * sigma) {
            Ok(e) => inv_beta * e * (-lambda * (t - sigma.powf(inv_beta))).exp(),
            Err(e) => {
                err.get_or_insert(e);
                0.0
            }
        }
    };
    let mut sbreaks = vec![0.0];
    for d in [1.0, 10.0, 100.0] {
        let p = d / lambda;
        if p < top {
            sbreaks.push(p);
        }
    }
    sbreaks.push(top);
    let lower = integrate_breaks(&mut far, &sbreaks, &opts.with_abs(1e-13 * upper.abs()))?.value;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(lower + upper)
}

/// Mode coefficients of the exact solution at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSolution {
    pub beta: f64,
    pub n_modes: usize,
    pub t: f64,
    pub u0_coeffs: Vec<f64>,
    pub u_coeffs: Vec<f64>,
    pub v_coeffs: Vec<f64>,
}

impl SpectralSolution {
    pub fn eigenvalues(&self) -> Vec<f64> {
        (1..=self.n_modes).map(eigenvalue).collect()
    }

    /// `‖u(t)‖` by Parseval.
    pub fn u_norm(&self) -> f64 {
        self.u_coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// `‖v(t)‖` by Parseval.
    pub fn v_norm(&self) -> f64 {
        self.v_coeffs.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Bound on the `L²` norm of the discarded modes of `v`, using
    /// `|v_n| ≤ |(u₀, φ_n)| / λ_n` and `Σ_{n>N} (u₀, φ_n)² ≤ ‖u₀‖²`.
    pub fn v_tail_bound(&self, u0_norm: f64) -> f64 {
        u0_norm / eigenvalue(self.n_modes + 1)
    }

    /// `v(x, t)` summed over the retained modes.
    pub fn v_at(&self, x: f64) -> f64 {
        self.v_coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * eigenfunction(i + 1, x))
            .sum()
    }
}

/// `u_n(t) = e^{-λ_n t}(u₀, φ_n)` and `v_n(t) = (u₀, φ_n)·(mode convolution)`.
/// Modes with a zero coefficient are skipped.
pub fn decoupled_solve(u0_coeffs: &[f64], beta: f64, t: f64, n_modes: usize) -> Result<SpectralSolution> {
    check_beta(beta)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("decoupled solve needs t > 0, got {t}")));
    }
    let n_modes = n_modes.min(u0_coeffs.len());
    let mut u = Vec::with_capacity(n_modes);
    let mut v = Vec::with_capacity(n_modes);
    for (i, &c) in u0_coeffs.iter().take(n_modes).enumerate() {
        let lambda = eigenvalue(i + 1);
        u.push(c * (-lambda * t).exp());
        v.push(if c == 0.0 { 0.0 } else { c * mode_convolution(lambda, beta, t)? });
    }
    Ok(SpectralSolution {
        beta,
        n_modes,
        t,
        u0_coeffs: u0_coeffs[..n_modes].to_vec(),
        u_coeffs: u,
        v_coeffs: v,
    })
}

/// `t^{β(j+1)+k-j} / Γ(βj+k-j+β+1)`.
pub fn q_integral(t: f64, j: u32, k: u32, beta: f64) -> f64 {
    let m = (k - j) as f64;
    let e = beta * (j as f64 + 1.0) + m;
    t.powf(e) * rgamma(e + 1.0)
}

/// Both sides of the rearrangement
/// `Σ_k (-λ)^k Σ_{j≤k} t^{βj+k-j}/Γ(βj+k-j+β+1) = Σ_k (-λt^β)^k E_{1,β(k+1)+1}(-λt)`,
/// each truncated after `k_max`.
///
/// The truncated sums are only meaningful where the series have converged;
/// when either of the last two terms exceeds `1e-9`, or the largest term
/// is big enough for cancellation to cost more than `1e-10`, the result is
/// reported as unsupported.
pub fn r_series_identity(lambda: f64, beta: f64, t: f64, k_max: u32) -> Result<(f64, f64)> {
    check_beta(beta)?;
    if !(lambda >= 0.0 && t >= 0.0 && lambda * t <= 5.0) {
        return Err(Error::Domain(format!(
            "R-series identity evaluated for lambda >= 0, t >= 0, lambda*t <= 5 (lambda={lambda}, t={t})"
        )));
    }
    if k_max < 20 {
        return Err(Error::Domain(format!("k_max must be at least 20, got {k_max}")));
    }
    let mut lhs = 0.0;
    let mut rhs = 0.0;
    let mut largest: f64 = 0.0;
    let mut last = [0.0f64; 2];
    for k in 0..=k_max {
        let inner: f64 = (0..=k)
            .map(|j| {
                let e = beta * j as f64 + (k - j) as f64;
                t.powf(e) * rgamma(e + beta + 1.0)
            })
            .sum();
        let l = (-lambda).powi(k as i32) * inner;
        let mu = beta * (k as f64 + 1.0) + 1.0;
        let r = (-lambda * t.powf(beta)).powi(k as i32) * mittag_leffler(1.0, mu, -lambda * t)?;
        lhs += l;
        rhs += r;
        largest = largest.max(l.abs()).max(r.abs());
        if k + 1 >= k_max {
            last[(k + 1 - k_max) as usize] = l.abs().max(r.abs());
        }
    }
    let tail = last[0].max(last[1]);
    if tail > 1e-9 || largest * f64::EPSILON * k_max as f64 > 1e-10 {
        return Err(Error::UnsupportedRange(format!(
            "R-series not converged after {k_max} terms (lambda={lambda}, beta={beta}, t={t}): last term {tail:e}, largest {largest:e}"
        )));
    }
    Ok((lhs, rhs))
}

/// Limit pattern `u_∞ = 𝒜⁻³u₀` in mode coefficients.
pub fn u_infinity(u0_coeffs: &[f64]) -> Vec<f64> {
    u0_coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c / eigenvalue(i + 1).powi(3))
        .collect()
}

/// Large-time expansion of `v_n(t)` from
/// `1/((s+λ)(s^β+λ)) = Σ_{a,b≥0} (-1)^{a+b} s^{a+βb} / λ^{a+b+2}`:
/// `v_n ≈ c_n Σ (-1)^{a+b} t^{-1-a-βb} / (Γ(-a-βb) λ^{a+b+2})` over `b ≥ 1`
/// and `a + βb ≤ 2 + β`. The leading term is
/// `c_n t^{-1-β} / (-Γ(-β) λ³)`.
pub fn asymptotic_v(u0_coeffs: &[f64], beta: f64, t: f64) -> Result<Vec<f64>> {
    check_beta(beta)?;
    if !(t >= 10.0) {
        return Err(Error::Domain(format!("asymptotic expansion used for t >= 10, got {t}")));
    }
    let mut terms = Vec::new();
    for a in 0..=2u32 {
        for b in 1u32.. {
            let e = a as f64 + beta * b as f64;
            if e > 2.0 + beta + 1e-12 {
                break;
            }
            let sign = if (a + b) % 2 == 0 { 1.0 } else { -1.0 };
            terms.push((a + b + 2, sign * t.powf(-1.0 - e) * rgamma(-e)));
        }
    }
    Ok(u0_coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let l = eigenvalue(i + 1);
            c * terms.iter().map(|&(p, w)| w / l.powi(p as i32)).sum::<f64>()
        })
        .collect())
}

/// Leading term `c_n t^{-1-β} / (-Γ(-β) λ_n³)` alone.
pub fn leading_v(u0_coeffs: &[f64], beta: f64, t: f64) -> Vec<f64> {
    let lead = -rgamma(-beta) * t.powf(-1.0 - beta);
    u_infinity(u0_coeffs).iter().map(|c| c * lead).collect()
}

/// Numerical `(f, g)` in `L²(0, π)`, used to check orthonormality.
pub fn inner_product(f: impl Fn(f64) -> f64, g: impl Fn(f64) -> f64) -> Result<f64> {
    Ok(integrate(|x| f(x) * g(x), 0.0, PI, &QuadOptions::rel(1e-13).with_abs(1e-15))?.value)
}
