use std::f64::consts::PI;

use num_complex::Complex64;

use super::laplace::LaplaceSymbol;
use crate::error::{Error, Result};

const EDGE_SEGMENTS: usize = 64;
const MAX_ARG_DEPTH: usize = 48;
const MAX_SPLIT_DEPTH: usize = 40;
// Off-center split so zeros on symmetric positions do not land on edges.
const SPLIT: f64 = 0.513_7;

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    /// Split into an `n × n` grid of sub-rectangles.
    pub fn grid(&self, n: usize) -> Vec<Rect> {
        let cut = |lo: f64, hi: f64, i: usize| {
            if i == 0 {
                lo
            } else if i == n {
                hi
            } else {
                let f = if n == 2 { SPLIT } else { i as f64 / n as f64 + 0.0137 / n as f64 };
                lo + (hi - lo) * f
            }
        };
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(Rect::new(
                    cut(self.x0, self.x1, i),
                    cut(self.x0, self.x1, i + 1),
                    cut(self.y0, self.y1, j),
                    cut(self.y0, self.y1, j + 1),
                ));
            }
        }
        out
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
        ]
    }
}

fn arg_change<F: Fn(Complex64) -> Complex64>(f: &F, z0: Complex64, w0: Complex64, z1: Complex64, w1: Complex64, depth: usize) -> Result<f64> {
    let d = (w1 / w0).arg();
    if d.abs() <= PI / 3.0 {
        return Ok(d);
    }
    if depth >= MAX_ARG_DEPTH {
        return Err(Error::Consistency(format!("argument of f varies too fast near {z0} on the contour")));
    }
    let zm = 0.5 * (z0 + z1);
    let wm = f(zm);
    if wm == Complex64::new(0.0, 0.0) {
        return Err(Error::Consistency(format!("zero of f on the contour at {zm}")));
    }
    Ok(arg_change(f, z0, w0, zm, wm, depth + 1)? + arg_change(f, zm, wm, z1, w1, depth + 1)?)
}

/// Number of zeros of `f` inside `rect`, by the argument principle.
pub fn count_zeros<F: Fn(Complex64) -> Complex64>(f: &F, rect: &Rect) -> Result<usize> {
    let c = rect.corners();
    let mut total = 0.0;
    for k in 0..4 {
        let (a, b) = (c[k], c[(k + 1) % 4]);
        let mut z0 = a;
        let mut w0 = f(z0);
        for i in 1..=EDGE_SEGMENTS {
            let z1 = a + (b - a) * (i as f64 / EDGE_SEGMENTS as f64);
            let w1 = f(z1);
            if w0 == Complex64::new(0.0, 0.0) || w1 == Complex64::new(0.0, 0.0) {
                return Err(Error::Consistency(format!("zero of f on the contour near {z1}")));
            }
            total += arg_change(f, z0, w0, z1, w1, 0)?;
            z0 = z1;
            w0 = w1;
        }
    }
    let winding = total / (2.0 * PI);
    let n = winding.round();
    if (winding - n).abs() > 0.1 || n < 0.0 {
        return Err(Error::Consistency(format!("non-integer winding number {winding}")));
    }
    Ok(n as usize)
}

fn newton<F, D>(f: &F, df: &D, mut z: Complex64) -> Option<Complex64>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    for _ in 0..60 {
        let step = f(z) / df(z);
        if !step.re.is_finite() || !step.im.is_finite() {
            return None;
        }
        z -= step;
        if step.norm() <= 1e-14 * z.norm().max(1e-300) {
            return Some(z);
        }
    }
    None
}

/// Locate all zeros of `f` inside `rect`: counting by the argument
/// principle, bisecting until each cell holds one zero, then Newton.
pub fn find_zeros<F, D>(f: &F, df: &D, rect: &Rect) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    let n = count_zeros(f, rect)?;
    locate(f, df, rect, n, 0)
}

fn locate<F, D>(f: &F, df: &D, rect: &Rect, count: usize, depth: usize) -> Result<Vec<Complex64>>
where
    F: Fn(Complex64) -> Complex64,
    D: Fn(Complex64) -> Complex64,
{
    if count == 0 {
        return Ok(Vec::new());
    }
    if count == 1 {
        if let Some(z) = newton(f, df, rect.center()) {
            if rect.contains(z) {
                return Ok(vec![z]);
            }
        }
    }
    if depth >= MAX_SPLIT_DEPTH {
        return Err(Error::Consistency(format!("could not isolate {count} zero(s) in {rect:?}")));
    }
    let mut out = Vec::new();
    let mut seen = 0;
    for sub in rect.grid(2) {
        let c = count_zeros(f, &sub)?;
        seen += c;
        out.extend(locate(f, df, &sub, c, depth + 1)?);
    }
    if seen != count {
        return Err(Error::Consistency(format!(
            "zero count {count} in {rect:?} but {seen} across its quarters"
        )));
    }
    Ok(out)
}

/// Zeros of `(s^α+c₁)(s^β+c₁) - c₂²` with `|arg s| < π` and `|Re s|, |Im s| ≤ radius`.
///
/// The search covers both half planes so that a zero with non-negative real
/// part is reported as an error rather than silently used. Zero counts are
/// checked at two subdivision levels before refinement.
pub fn find_poles(sym: &LaplaceSymbol, search_radius: f64) -> Result<Vec<Complex64>> {
    sym.validate()?;
    if sym.alpha == 1.0 && sym.beta == 1.0 {
        return Err(Error::Domain(
            "alpha = beta = 1: the poles lie on the negative real axis; the branch-cut search needs alpha < 1 or beta < 1".into(),
        ));
    }
    if !(search_radius > 0.0) {
        return Err(Error::Domain(format!("search radius must be positive, got {search_radius}")));
    }
    let f = |s: Complex64| sym.denominator(s);
    let df = |s: Complex64| sym.denominator_derivative(s);
    // Upper half plane only; zeros come in conjugate pairs, and the real
    // axis carries none (D > c₁² - c₂² on the positive axis, the cut on the negative).
    let delta = 1e-9 * search_radius;
    let upper = Rect::new(-search_radius, search_radius, delta, search_radius);
    let total = count_zeros(&f, &upper)?;
    let level1: usize = upper.grid(2).iter().map(|r| count_zeros(&f, r)).sum::<Result<usize>>()?;
    let cells = upper.grid(4);
    let mut level2 = 0;
    let mut found = Vec::new();
    for cell in &cells {
        let c = count_zeros(&f, cell)?;
        level2 += c;
        found.extend(locate(&f, &df, cell, c, 0)?);
    }
    if total != level1 || total != level2 {
        return Err(Error::Consistency(format!(
            "pole counts disagree across resolutions: {total}, {level1}, {level2}"
        )));
    }
    let mut poles = Vec::with_capacity(2 * found.len());
    for z in found {
        if !(z.re < 0.0) || z.im == 0.0 {
            return Err(Error::Consistency(format!(
                "pole {z} violates the left-half-plane, off-axis hypothesis"
            )));
        }
        poles.push(z);
        poles.push(z.conj());
    }
    Ok(poles)
}
