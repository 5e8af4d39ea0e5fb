use std::f64::consts::PI;

use num_complex::Complex64;

use super::poles::find_poles;
use crate::error::{Error, Result};
use crate::mittag_leffler::sin_pi;
use crate::quadrature::{integrate_breaks, integrate_power_singular, QuadOptions};

const X_CUTOFF: f64 = 80.0;

/// Laplace transform of the special relaxation system:
/// `Û(s) = s^{α-1}(s^β+c₁)/D(s)`, `V̂(s) = c₂ s^{α-1}/D(s)` with
/// `D(s) = (s^α+c₁)(s^β+c₁) - c₂²` on the principal branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceSymbol {
    pub alpha: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
}

impl LaplaceSymbol {
    pub fn new(alpha: f64, beta: f64, c1: f64, c2: f64) -> Result<Self> {
        let sym = Self { alpha, beta, c1, c2 };
        sym.validate()?;
        Ok(sym)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            problems.push(format!("alpha must lie in (0, 1], got {}", self.alpha));
        }
        if !(self.beta > 0.0 && self.beta <= self.alpha) {
            problems.push(format!("beta must lie in (0, alpha], got {}", self.beta));
        }
        if !(self.c1 > self.c2 && self.c2 > 0.0) {
            problems.push(format!("need c1 > c2 > 0, got c1={}, c2={}", self.c1, self.c2));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }

    pub fn denominator(&self, s: Complex64) -> Complex64 {
        (s.powf(self.alpha) + self.c1) * (s.powf(self.beta) + self.c1) - self.c2 * self.c2
    }

    pub fn denominator_derivative(&self, s: Complex64) -> Complex64 {
        let (a, b) = (self.alpha, self.beta);
        a * s.powf(a - 1.0) * (s.powf(b) + self.c1) + b * s.powf(b - 1.0) * (s.powf(a) + self.c1)
    }

    pub fn u_hat(&self, s: Complex64) -> Complex64 {
        s.powf(self.alpha - 1.0) * (s.powf(self.beta) + self.c1) / self.denominator(s)
    }

    pub fn v_hat(&self, s: Complex64) -> Complex64 {
        self.c2 * s.powf(self.alpha - 1.0) / self.denominator(s)
    }
}

/// `q(r) = D(r e^{iπ})`, expanded into real and imaginary parts.
pub fn q_of_r(sym: &LaplaceSymbol, r: f64) -> Complex64 {
    let LaplaceSymbol { alpha, beta, c1, c2 } = *sym;
    let ra = r.powf(alpha);
    let rb = r.powf(beta);
    let rab = ra * rb;
    let re = (c1 * c1 - c2 * c2) + c1 * (ra * cos_pi(alpha) + rb * cos_pi(beta)) + rab * cos_pi(alpha + beta);
    let im = c1 * (ra * sin_pi(alpha) + rb * sin_pi(beta)) + rab * sin_pi(alpha + beta);
    Complex64::new(re, im)
}

/// Closed forms of `(Im(e^{iαπ} q̄(r)), Im(p(r) q̄(r)))`, where
/// `p(r) = e^{iαπ}(c₁ + r^β e^{iβπ})`.
pub fn im_parts(sym: &LaplaceSymbol, r: f64) -> (f64, f64) {
    let LaplaceSymbol { alpha, beta, c1, c2 } = *sym;
    let d = c1 * c1 - c2 * c2;
    let rb = r.powf(beta);
    let sa = sin_pi(alpha);
    let eq = d * sa + c1 * rb * sin_pi(alpha - beta) - r.powf(alpha) * rb * sin_pi(beta);
    let pq = c1 * d * sa + (c1 * c1 * sin_pi(alpha - beta) + d * sin_pi(alpha + beta)) * rb + c1 * sa * rb * rb;
    (eq, pq)
}

fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

/// Inverse Laplace transform of `(Û, V̂)` by collapsing the Bromwich line
/// onto the negative real axis. Poles off the cut are located once and
/// contribute residues.
#[derive(Debug, Clone)]
pub struct BranchCutInverter {
    pub symbol: LaplaceSymbol,
    pub poles: Vec<Complex64>,
    opts: QuadOptions,
}

impl BranchCutInverter {
    pub fn new(symbol: LaplaceSymbol) -> Result<Self> {
        symbol.validate()?;
        let radius = 4.0 * symbol.c1.max(symbol.c2).powf(1.0 / symbol.alpha.min(symbol.beta));
        let poles = if symbol.alpha == 1.0 && symbol.beta == 1.0 {
            Vec::new()
        } else {
            find_poles(&symbol, radius)?
        };
        Ok(Self {
            symbol,
            poles,
            opts: QuadOptions::rel(1e-12).with_abs(1e-300),
        })
    }

    /// `(U(t), V(t))` for `t ≥ 1`.
    pub fn eval(&self, t: f64) -> Result<(f64, f64)> {
        if !(t >= 1.0) {
            return Err(Error::UnsupportedRange(format!(
                "branch-cut inversion is validated for t >= 1 (t={t}); use the Picard solver for small times"
            )));
        }
        let sym = &self.symbol;
        if sym.alpha == 1.0 && sym.beta == 1.0 {
            return Err(Error::Domain("alpha = beta = 1 has no branch cut; poles lie on the negative axis".into()));
        }
        // In x = r t the weight is e^{-x} x^{p-1}; for α = 1 the integrands
        // carry an extra factor r^β, which is folded into the power.
        let (p, extra) = if sym.alpha < 1.0 { (sym.alpha, 0.0) } else { (1.0 + sym.beta, sym.beta) };
        let scale = t.powf(-(sym.alpha + extra)) / PI;
        let integrand = |x: f64, which: usize| {
            let r = x / t;
            let q = q_of_r(sym, r);
            let (eq, pq) = im_parts(sym, r);
            let num = if which == 0 { pq } else { sym.c2 * eq };
            let num = if extra > 0.0 { num / r.powf(extra) } else { num };
            (-x).exp() * num / q.norm_sqr()
        };
        let mut out = [0.0; 2];
        for (which, slot) in out.iter_mut().enumerate() {
            let head = integrate_power_singular(|x| integrand(x, which), p, 1.0, &self.opts)?;
            let tail = integrate_breaks(
                |x: f64| x.powf(p - 1.0) * integrand(x, which),
                &[1.0, 4.0, 16.0, X_CUTOFF],
                &self.opts,
            )?;
            *slot = scale * (head.value + tail.value);
        }
        let (ru, rv) = self.residues(t);
        Ok((out[0] + ru, out[1] + rv))
    }

    fn residues(&self, t: f64) -> (f64, f64) {
        let sym = &self.symbol;
        let mut u = 0.0;
        let mut v = 0.0;
        for &z in &self.poles {
            let common = z.powf(sym.alpha - 1.0) * (z * t).exp() / sym.denominator_derivative(z);
            u += (common * (z.powf(sym.beta) + sym.c1)).re;
            v += (common * sym.c2).re;
        }
        (u, v)
    }
}

/// One-shot inversion at time `t`; see [`BranchCutInverter`].
pub fn branch_cut_invert(sym: &LaplaceSymbol, t: f64) -> Result<(f64, f64)> {
    BranchCutInverter::new(*sym)?.eval(t)
}
