//! Gamma function on the real line.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// True when `x` is 0, -1, -2, ...
pub fn is_gamma_pole(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

/// `sin(πx)`, exact at integers and accurate for large `|x|`.
pub fn sin_pi(x: f64) -> f64 {
    if x == x.round() {
        return 0.0;
    }
    // reduce to r in [-1, 1]
    let r = x - 2.0 * (x / 2.0).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

// Lanczos sum and the shifted argument for x >= 0.5.
fn lanczos(x: f64) -> (f64, f64) {
    let xm = x - 1.0;
    let mut a = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        a += c / (xm + i as f64);
    }
    (a, xm + LANCZOS_G + 0.5)
}

/// Γ(x). Negative non-integer arguments use the reflection formula.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() || is_gamma_pole(x) {
        return Err(Error::Domain(format!("Gamma has a pole at {x}")));
    }
    Ok(gamma_unchecked(x))
}

fn gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        return PI / (sin_pi(x) * gamma_unchecked(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x == x.round() && x <= 23.0 {
        // exact factorials
        let mut f = 1.0;
        let mut k = 2.0;
        while k < x {
            f *= k;
            k += 1.0;
        }
        return f;
    }
    let (a, t) = lanczos(x);
    // split the power to avoid overflow near the top of the range
    let p = t.powf(0.5 * (x - 0.5));
    (2.0 * PI).sqrt() * a * p * (p * (-t).exp())
}

/// ln|Γ(x)| for x not a pole.
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        return (PI / sin_pi(x).abs()).ln() - ln_gamma(1.0 - x);
    }
    let (a, t) = lanczos(x);
    LN_SQRT_2PI + (x - 0.5) * t.ln() - t + a.ln()
}

/// 1/Γ(x), with the value 0 at the poles x = 0, -1, -2, ...
pub fn rgamma(x: f64) -> f64 {
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x > 171.0 {
        return (-ln_gamma(x)).exp();
    }
    if x < 0.5 {
        // 1/Γ(x) = sin(πx) Γ(1-x) / π
        let g = gamma_unchecked(1.0 - x);
        if g.is_finite() {
            return sin_pi(x) * g / PI;
        }
        return sin_pi(x).signum() * f64::INFINITY;
    }
    1.0 / gamma_unchecked(x)
}
