//! Globally adaptive Gauss–Kronrod quadrature (10-point Gauss, 21-point
//! Kronrod) with QUADPACK-style error scaling.
//!
//! Integrable endpoint singularities of power type are handled by
//! [`integrate_power_singular`], which removes the singular factor with a
//! change of variables before handing the smooth remainder to the adaptive
//! rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_576_444_880,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 0.0,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl QuadOptions {
    pub fn rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_abs(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    // error estimate is at the rounding floor and cannot shrink by bisection
    at_floor: bool,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    let mut at_floor = false;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * res_abs;
        if error <= floor {
            error = floor;
            at_floor = true;
        }
    }
    Segment {
        a,
        b,
        value,
        error,
        at_floor,
    }
}

/// Nodes of the 21-point Kronrod rule on `[a, b]` with their Kronrod and
/// embedded 10-point Gauss weights (zero for nodes outside the Gauss rule).
pub fn kronrod21_nodes(a: f64, b: f64) -> [(f64, f64, f64); 21] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(center, WGK[10] * half, 0.0); 21];
    for j in 0..10 {
        let dx = half * XGK[j];
        let wg = if j % 2 == 1 { WG[j / 2] * half } else { 0.0 };
        out[2 * j] = (center - dx, WGK[j] * half, wg);
        out[2 * j + 1] = (center + dx, WGK[j] * half, wg);
    }
    out
}

/// Integrate `f` over `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult> {
    integrate_breaks(f, &[a, b], opts)
}

/// Integrate `f` over `[points[0], points[last]]`, starting from the
/// subdivision given by `points` (which must be non-decreasing).
pub fn integrate_breaks<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if points.len() < 2 {
        return Err(Error::Domain("quadrature needs at least two points".into()));
    }
    let mut heap = BinaryHeap::new();
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    for w in points.windows(2) {
        if !(w[1] >= w[0]) {
            return Err(Error::Domain(format!("breakpoints not increasing: {} then {}", w[0], w[1])));
        }
        if w[1] > w[0] {
            heap.push(kronrod21(&mut f, w[0], w[1]));
        }
    }
    let mut intervals = heap.len();
    let mut total: f64 = heap.iter().map(|s| s.value).sum();
    let mut err: f64 = heap.iter().map(|s| s.error).sum();
    loop {
        let tol = opts.abs_tol.max(opts.rel_tol * total.abs());
        if err <= tol || heap.is_empty() || err <= settled_error * (1.0 + 1e-12) {
            return Ok(QuadResult {
                value: total,
                error: err,
                intervals,
            });
        }
        if intervals >= opts.max_intervals {
            return Err(Error::Quadrature {
                a: points[0],
                b: points[points.len() - 1],
                estimate: total,
                error: err,
                intervals,
            });
        }
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.at_floor || (worst.b - worst.a) <= 1e3 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b {
            // Cannot be refined further in double precision.
            settled_value += worst.value;
            settled_error += worst.error;
            continue;
        }
        let left = kronrod21(&mut f, worst.a, mid);
        let right = kronrod21(&mut f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        intervals += 1;
        if intervals % 64 == 0 {
            // Re-sum to keep the running totals free of drift.
            total = heap.iter().map(|s| s.value).sum::<f64>() + settled_value;
            err = heap.iter().map(|s| s.error).sum::<f64>() + settled_error;
        }
    }
}

/// Compute `∫_0^b x^(p-1) g(x) dx` for `p > 0` via `x = σ^(1/p)`, which turns
/// the integrand into `g(σ^(1/p)) / p` on `[0, b^p]`.
pub fn integrate_power_singular<G: FnMut(f64) -> f64>(
    mut g: G,
    p: f64,
    b: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(p > 0.0) || !(b >= 0.0) {
        return Err(Error::Domain(format!("power-singular quadrature needs p > 0, b >= 0 (p={p}, b={b})")));
    }
    let inv_p = 1.0 / p;
    let upper = b.powf(p);
    let res = integrate(|s: f64| g(s.powf(inv_p)), 0.0, upper, opts)?;
    Ok(QuadResult {
        value: res.value * inv_p,
        error: res.error * inv_p,
        intervals: res.intervals,
    })
}

/// Like [`integrate_power_singular`], but with the graded map
/// `x = u^(m/p)`, which also flattens fractional powers `x^γ` hidden in `g`
/// (they become `u^(mγ/p)`).
pub fn integrate_power_graded<G: FnMut(f64) -> f64>(
    mut g: G,
    p: f64,
    b: f64,
    grade: u32,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    if !(p > 0.0) || !(b >= 0.0) || grade == 0 {
        return Err(Error::Domain(format!(
            "graded quadrature needs p > 0, b >= 0, grade >= 1 (p={p}, b={b}, grade={grade})"
        )));
    }
    let m = grade as f64;
    let expo = m / p;
    let upper = b.powf(p / m);
    let res = integrate(
        |u: f64| {
            let um1 = u.powi(grade as i32 - 1);
            um1 * g(u.powf(expo))
        },
        0.0,
        upper,
        opts,
    )?;
    Ok(QuadResult {
        value: res.value * expo,
        error: res.error * expo,
        intervals: res.intervals,
    })
}
