use std::cell::Cell;

use super::OdeSpec;
use crate::error::{Error, Result};
use crate::mittag_leffler::mittag_leffler;
use crate::quadrature::{integrate, integrate_power_graded, kronrod21_nodes, QuadOptions};

/// Discretization and stopping rule for [`picard_solve`].
#[derive(Debug, Clone, Copy)]
pub struct PicardOptions {
    pub t_max: f64,
    pub n_steps: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub keep_iterates: bool,
}

impl PicardOptions {
    pub fn new(t_max: f64, n_steps: usize) -> Self {
        Self {
            t_max,
            n_steps,
            tol: 1e-12,
            max_iter: 200,
            keep_iterates: false,
        }
    }

    pub fn keep_iterates(mut self) -> Self {
        self.keep_iterates = true;
        self
    }
}

/// Sampled solution of the fractional ODE system.
#[derive(Debug, Clone)]
pub struct OdePath {
    pub times: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// `(U_m, V_m)` for `m = 0, 1, ...` when requested; `U_0 = V_0 = 0`.
    pub iterates: Vec<(Vec<f64>, Vec<f64>)>,
}

// Product-integration weights for ∫_0^{t_n} k(τ) y(t_n - τ) dτ with y
// piecewise linear on the grid: the integral equals
// Σ_{m=1}^{n} (A_m y_{n-m} + B_m y_{n-m+1}).
struct ProductWeights {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl ProductWeights {
    fn new(order: f64, c: f64, h: f64, n: usize) -> Result<Self> {
        let opts = QuadOptions::rel(1e-13).with_abs(1e-300);
        let failure: Cell<Option<Error>> = Cell::new(None);
        let ml = |x: f64| match mittag_leffler(order, order, -c * x.powf(order)) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        };
        let mut a = vec![0.0; n + 1];
        let mut b = vec![0.0; n + 1];
        for m in 1..=n {
            let lo = (m - 1) as f64 * h;
            let hi = m as f64 * h;
            let k = |t: f64| t.powf(order - 1.0) * ml(t);
            let (wa, wb) = if m == 1 && order < 1.0 {
                // τ^{order-1} removed by substitution
                let ra = integrate_power_graded(|t| ml(t) * (t / h), order, h, 4, &opts).map_err(|e| failure.take().unwrap_or(e))?;
                let rb = integrate_power_graded(|t| ml(t) * ((h - t) / h), order, h, 4, &opts).map_err(|e| failure.take().unwrap_or(e))?;
                (ra.value, rb.value)
            } else {
                // one kernel evaluation per node serves both weights
                let (mut ak, mut ag, mut bk, mut bg) = (0.0, 0.0, 0.0, 0.0);
                for (t, wk, wg) in kronrod21_nodes(lo, hi) {
                    let kv = k(t);
                    let (sa, sb) = (kv * (t - lo) / h, kv * (hi - t) / h);
                    ak += wk * sa;
                    ag += wg * sa;
                    bk += wk * sb;
                    bg += wg * sb;
                }
                let loose = |k: f64, g: f64| (k - g).abs() > 1e-9 * k.abs();
                if loose(ak, ag) || loose(bk, bg) {
                    let ra = integrate(|t| k(t) * ((t - lo) / h), lo, hi, &opts).map_err(|e| failure.take().unwrap_or(e))?;
                    let rb = integrate(|t| k(t) * ((hi - t) / h), lo, hi, &opts).map_err(|e| failure.take().unwrap_or(e))?;
                    (ra.value, rb.value)
                } else {
                    (ak, bk)
                }
            };
            if let Some(e) = failure.take() {
                return Err(e);
            }
            a[m] = wa;
            b[m] = wb;
        }
        Ok(Self { a, b })
    }

    fn apply(&self, y: &[f64], n: usize) -> f64 {
        let mut s = 0.0;
        for m in 1..=n {
            s += self.a[m] * y[n - m] + self.b[m] * y[n - m + 1];
        }
        s
    }
}

/// Solve the system by Picard iteration on its Volterra integral form,
/// starting from `(U_0, V_0) = (0, 0)`.
pub fn picard_solve(spec: &OdeSpec, opts: &PicardOptions) -> Result<OdePath> {
    spec.validate()?;
    if !(opts.t_max > 0.0) || opts.n_steps < 16 || !(opts.tol > 0.0) {
        return Err(Error::Domain(format!(
            "Picard solver needs t_max > 0, n_steps >= 16, tol > 0 (got {}, {}, {})",
            opts.t_max, opts.n_steps, opts.tol
        )));
    }
    let n = opts.n_steps;
    let h = opts.t_max / n as f64;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();

    let w_alpha = ProductWeights::new(spec.alpha, spec.eta1, h, n)?;
    let w_beta = ProductWeights::new(spec.beta, spec.eta2, h, n)?;

    let base = |order: f64, damping: f64, init: f64, src: &Option<super::Forcing>, w: &ProductWeights| -> Result<Vec<f64>> {
        let samples: Option<Vec<f64>> = src.as_ref().map(|s| times.iter().map(|&t| s.eval(t)).collect());
        times
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let relax = if init == 0.0 {
                    0.0
                } else {
                    init * mittag_leffler(order, 1.0, -damping * t.powf(order))?
                };
                let forced = samples.as_ref().map_or(0.0, |y| w.apply(y, i));
                Ok(relax + forced)
            })
            .collect()
    };
    let u1 = base(spec.alpha, spec.eta1, spec.a, &spec.f, &w_alpha)?;
    let v1 = base(spec.beta, spec.eta2, spec.b, &spec.g, &w_beta)?;

    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut iterates = Vec::new();
    if opts.keep_iterates {
        iterates.push((u.clone(), v.clone()));
    }
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        let u_next: Vec<f64> = (0..=n).map(|i| u1[i] + spec.mu1 * w_alpha.apply(&v, i)).collect();
        let v_next: Vec<f64> = (0..=n).map(|i| v1[i] + spec.mu2 * w_beta.apply(&u, i)).collect();
        let diff = u_next
            .iter()
            .zip(&u)
            .chain(v_next.iter().zip(&v))
            .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
        u = u_next;
        v = v_next;
        iterations += 1;
        if opts.keep_iterates {
            iterates.push((u.clone(), v.clone()));
        }
        if !diff.is_finite() {
            return Err(Error::Consistency(format!("Picard iterate {iterations} is not finite")));
        }
        if diff < opts.tol {
            converged = true;
            break;
        }
    }
    Ok(OdePath {
        times,
        u,
        v,
        iterations,
        converged,
        iterates,
    })
}

/// True when every recorded iterate dominates its predecessor pointwise,
/// up to a few units of rounding in the compared values.
pub fn picard_monotonicity(iterates: &[(Vec<f64>, Vec<f64>)]) -> bool {
    let nondecreasing = |prev: &[f64], next: &[f64]| {
        prev.iter()
            .zip(next)
            .all(|(&p, &q)| q >= p - 8.0 * f64::EPSILON * p.abs().max(q.abs()))
    };
    iterates
        .windows(2)
        .all(|w| nondecreasing(&w[0].0, &w[1].0) && nondecreasing(&w[0].1, &w[1].1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_ode::Forcing;

    #[test]
    fn weights_integrate_the_kernel() {
        // Σ (A_m + B_m) = ∫_0^T τ^{α-1} E_{α,α}(-cτ^α) dτ = T^α E_{α,α+1}(-cT^α)
        let (alpha, c, t, n) = (0.6, 1.5, 3.0, 64);
        let w = ProductWeights::new(alpha, c, t / n as f64, n).unwrap();
        let total: f64 = (1..=n).map(|m| w.a[m] + w.b[m]).sum();
        let exact = t.powf(alpha) * mittag_leffler(alpha, alpha + 1.0, -c * t.powf(alpha)).unwrap();
        assert!((total - exact).abs() < 1e-12 * exact, "{total} vs {exact}");
    }

    #[test]
    fn decoupled_case_is_the_relaxation_function() {
        let mut spec = OdeSpec::relaxation(0.5, 0.5, 1.0, 0.0);
        spec.eta2 = 1.0;
        let path = picard_solve(&spec, &PicardOptions::new(10.0, 256).keep_iterates()).unwrap();
        assert!(path.converged);
        assert_eq!(path.iterations, 2);
        for (t, u) in path.times.iter().zip(&path.u) {
            let e = mittag_leffler(0.5, 1.0, -t.sqrt()).unwrap();
            assert!((u - e).abs() < 1e-14);
        }
        assert!(path.v.iter().all(|&v| v == 0.0));
        assert_eq!(path.iterates[1], path.iterates[2]);
    }

    #[test]
    fn classical_case_matches_matrix_exponential() {
        let (c1, c2) = (2.0, 1.0);
        let spec = OdeSpec::relaxation(1.0, 1.0, c1, c2);
        let path = picard_solve(&spec, &PicardOptions::new(5.0, 2000)).unwrap();
        assert!(path.converged);
        for (i, &t) in path.times.iter().enumerate() {
            let (l1, l2) = (((c2 - c1) * t).exp(), (-(c1 + c2) * t).exp());
            let (u, v) = (0.5 * (l1 + l2), 0.5 * (l1 - l2));
            assert!((path.u[i] - u).abs() < 2e-6, "t={t}: {} vs {u}", path.u[i]);
            assert!((path.v[i] - v).abs() < 2e-6, "t={t}: {} vs {v}", path.v[i]);
        }
    }

    #[test]
    fn one_way_coupling_matches_integrated_relaxation() {
        // η₂ = 0, μ₁ = 0: V = μ₂ J^β U = μ₂ t^β E_{α,β+1}(-η₁ t^α)
        let spec = OdeSpec {
            alpha: 0.9,
            beta: 0.6,
            a: 1.0,
            b: 0.0,
            eta1: 1.0,
            eta2: 0.0,
            mu1: 0.0,
            mu2: 0.5,
            f: None,
            g: None,
        };
        let path = picard_solve(&spec, &PicardOptions::new(4.0, 1024)).unwrap();
        for (i, &t) in path.times.iter().enumerate().skip(256) {
            let exact = 0.5 * t.powf(0.6) * mittag_leffler(0.9, 1.6, -t.powf(0.9)).unwrap();
            assert!((path.v[i] - exact).abs() < 1e-5 * exact, "t={t}: {} vs {exact}", path.v[i]);
        }
    }

    #[test]
    fn constant_source_without_coupling() {
        // ∂^α U + U = 1, U(0) = 0  =>  U = t^α E_{α,α+1}(-t^α)
        let spec = OdeSpec {
            alpha: 0.7,
            beta: 0.7,
            a: 0.0,
            b: 0.0,
            eta1: 1.0,
            eta2: 1.0,
            mu1: 0.0,
            mu2: 0.0,
            f: Some(Forcing::new(|_| 1.0)),
            g: None,
        };
        let path = picard_solve(&spec, &PicardOptions::new(3.0, 300)).unwrap();
        let t = 3.0f64;
        let exact = t.powf(0.7) * mittag_leffler(0.7, 1.7, -t.powf(0.7)).unwrap();
        assert!((path.u[300] - exact).abs() < 1e-12, "{} vs {exact}", path.u[300]);
    }

    #[test]
    fn iterates_increase_and_stay_positive() {
        let spec = OdeSpec::relaxation(0.9, 0.5, 2.0, 1.0);
        let path = picard_solve(&spec, &PicardOptions::new(10.0, 200).keep_iterates()).unwrap();
        assert!(path.converged);
        assert!(picard_monotonicity(&path.iterates));
        assert!(path.u.iter().all(|&u| u > 0.0));
        assert!(path.v[1..].iter().all(|&v| v > 0.0));
    }

    #[test]
    fn monotonicity_detects_a_decrease() {
        let its = vec![(vec![0.0, 0.0], vec![0.0, 0.0]), (vec![1.0, 1.0], vec![0.0, 1.0]), (vec![1.0, 0.9], vec![0.0, 1.0])];
        assert!(!picard_monotonicity(&its));
        assert!(picard_monotonicity(&its[..2]));
    }

    #[test]
    fn kernel_errors_are_not_masked_by_quadrature() {
        let spec = OdeSpec::relaxation(0.3, 0.06, 0.5, 0.025);
        let err = picard_solve(&spec, &PicardOptions::new(10.0, 50)).unwrap_err();
        assert!(matches!(err, Error::UnsupportedRange(_)), "{err}");
    }

    #[test]
    fn rejects_short_grids() {
        let spec = OdeSpec::relaxation(0.9, 0.5, 2.0, 1.0);
        assert!(picard_solve(&spec, &PicardOptions::new(1.0, 8)).is_err());
    }
}
