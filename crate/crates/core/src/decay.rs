//! Decay exponents of norm time series.

use crate::error::{Error, Result};
use crate::subdiff_fd::{Grid, History};

/// Minimum number of in-window samples for a fit.
pub const MIN_FIT_SAMPLES: usize = 10;
/// Log-uniform sample count used by [`fit_decay`].
pub const FIT_POINTS: usize = 64;

/// A norm sampled at strictly increasing times.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
}

impl NormSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::Domain(format!(
                "series has {} times but {} values",
                times.len(),
                values.len()
            )));
        }
        if let Some(w) = times.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::Domain(format!("times not strictly increasing at index {}", w + 1)));
        }
        if let Some(i) = values.iter().position(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Domain(format!("value {} at index {i} is not a finite non-negative norm", values[i])));
        }
        Ok(Self { times, values })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Samples with `lo ≤ t ≤ hi`.
    pub fn window(&self, lo: f64, hi: f64) -> NormSeries {
        let (times, values) = self
            .times
            .iter()
            .zip(&self.values)
            .filter(|(t, _)| **t >= lo && **t <= hi)
            .map(|(t, v)| (*t, *v))
            .unzip();
        NormSeries { times, values }
    }
}

/// Least-squares power law `value ≈ e^{intercept} t^{exponent}` on a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub window: (f64, f64),
    pub exponent: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub samples: usize,
}

/// `ln(value) / ln(t)` at each sample.
pub fn pointwise_exponent(series: &NormSeries) -> Result<NormSeries> {
    let mut out = Vec::with_capacity(series.len());
    for (&t, &v) in series.times.iter().zip(&series.values) {
        if !(t > 1.0) {
            return Err(Error::Domain(format!("pointwise exponent needs t > 1, got {t}")));
        }
        if !(v > 0.0) {
            return Err(Error::Domain(format!("pointwise exponent needs a positive value, got {v} at t = {t}")));
        }
        out.push(v.ln() / t.ln());
    }
    Ok(NormSeries {
        times: series.times.clone(),
        values: out,
    })
}

fn check_window(window: (f64, f64)) -> Result<()> {
    let (lo, hi) = window;
    if !(lo >= 1.0 && hi > lo && hi.is_finite()) {
        return Err(Error::Domain(format!("fit window [{lo}, {hi}] must satisfy 1 ≤ lo < hi")));
    }
    Ok(())
}

/// Straight-line fit through `(ln t, ln value)` over every sample in `window`.
pub fn fit_exponent(series: &NormSeries, window: (f64, f64)) -> Result<DecayFit> {
    check_window(window)?;
    let w = series.window(window.0, window.1);
    if w.len() < MIN_FIT_SAMPLES {
        return Err(Error::InsufficientSamples {
            found: w.len(),
            required: MIN_FIT_SAMPLES,
        });
    }
    if w.values.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroSeries(format!(
            "norm vanishes on [{}, {}]; no decay exponent exists",
            window.0, window.1
        )));
    }
    if let Some(i) = w.values.iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroSeries(format!("norm is zero at t = {} inside the fit window", w.times[i])));
    }
    let xs: Vec<f64> = w.times.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = w.values.iter().map(|v| v.ln()).collect();
    let m = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / m;
    let ybar = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - xbar) * (x - xbar);
        sxy += (x - xbar) * (y - ybar);
    }
    let exponent = sxy / sxx;
    let intercept = ybar - exponent * xbar;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum();
    Ok(DecayFit {
        window,
        exponent,
        intercept,
        rms_residual: (rss / m).sqrt(),
        samples: xs.len(),
    })
}

/// Keep the sample nearest to each of `points` log-uniform times in
/// `window`, dropping duplicates.
pub fn log_resample(series: &NormSeries, window: (f64, f64), points: usize) -> NormSeries {
    let w = series.window(window.0, window.1);
    if w.is_empty() || points < 2 {
        return w;
    }
    let (a, b) = (window.0.ln(), window.1.ln());
    let mut picked: Vec<usize> = Vec::with_capacity(points);
    for p in 0..points {
        let target = (a + (b - a) * p as f64 / (points - 1) as f64).exp();
        let idx = w.times.partition_point(|&t| t < target);
        let best = match (idx.checked_sub(1), (idx < w.len()).then_some(idx)) {
            (Some(l), Some(r)) => {
                if target - w.times[l] <= w.times[r] - target {
                    l
                } else {
                    r
                }
            }
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => continue,
        };
        if picked.last() != Some(&best) {
            picked.push(best);
        }
    }
    NormSeries {
        times: picked.iter().map(|&i| w.times[i]).collect(),
        values: picked.iter().map(|&i| w.values[i]).collect(),
    }
}

/// Default window `[T/5, T]`.
pub fn default_window(horizon: f64) -> (f64, f64) {
    (horizon / 5.0, horizon)
}

/// [`fit_exponent`] on [`FIT_POINTS`] log-uniform samples of the window.
pub fn fit_decay(series: &NormSeries, window: (f64, f64)) -> Result<DecayFit> {
    check_window(window)?;
    let resampled = log_resample(series, window, FIT_POINTS);
    let mut fit = fit_exponent(&resampled, window)?;
    fit.window = window;
    Ok(fit)
}

/// Composite trapezoid approximation of the L² norm of nodal samples.
pub fn l2_norm(profile: &[f64], dx: f64) -> f64 {
    let n = profile.len();
    if n == 0 {
        return 0.0;
    }
    let mut s: f64 = profile.iter().map(|u| u * u).sum();
    s -= 0.5 * (profile[0] * profile[0] + profile[n - 1] * profile[n - 1]);
    (s * dx).sqrt()
}

/// L² norm of component `k` at every level of a history.
pub fn norm_series(history: &History, grid: &Grid, k: usize) -> NormSeries {
    let times = (0..history.levels()).map(|n| grid.t(n)).collect();
    let values = (0..history.levels())
        .map(|n| l2_norm(history.component(n, k), grid.dx()))
        .collect();
    NormSeries { times, values }
}

/// Expected decay rate: `-γ` where `γ` is the smallest order among
/// components with nonzero data, unless that order is one, in which case
/// `-(1 + α_K)` with `α_K` the smallest order overall.
pub fn conjecture_rate(orders: &[f64], nonzero: &[bool]) -> Option<f64> {
    let smallest_active = orders
        .iter()
        .zip(nonzero)
        .filter(|(_, nz)| **nz)
        .map(|(a, _)| *a)
        .fold(None, |m: Option<f64>, a| Some(m.map_or(a, |m| m.min(a))))?;
    if smallest_active < 1.0 {
        Some(-smallest_active)
    } else {
        let lowest = orders.iter().copied().fold(f64::INFINITY, f64::min);
        Some(-(1.0 + lowest))
    }
}
