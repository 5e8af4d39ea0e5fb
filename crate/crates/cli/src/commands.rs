//! The `mlf`, `ode`, `oracle` and `decay` subcommands as library functions.

use std::io::Read;

use serde::{Deserialize, Serialize};
use subdiff_core::decay::{fit_decay, DecayFit, NormSeries};
use subdiff_core::frac_ode::{picard_solve, BranchCutInverter, LaplaceSymbol, OdeSpec, PicardOptions};
use subdiff_core::mittag_leffler::mittag_leffler;
use subdiff_core::spectral::{decoupled_solve, leading_v, mode_coefficients, DEFAULT_MODES};
use subdiff_core::subdiff_fd::Profile;

use crate::error::{CliError, CliResult};
use crate::output::CsvTable;

/// `E_{η,μ}(z)`.
pub fn mlf(eta: f64, mu: f64, z: f64) -> CliResult<f64> {
    Ok(mittag_leffler(eta, mu, z)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OdeMethod {
    Picard,
    Laplace,
}

/// Parameters of the `ode` subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeRequest {
    pub alpha: f64,
    pub beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub t_max: f64,
    pub method: OdeMethod,
    /// Picard: time steps on `[0, t_max]`. Laplace: log-spaced points on `[1, t_max]`.
    pub points: usize,
}

/// `n` log-uniform points on `[lo, hi]`.
pub fn log_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 || hi <= lo {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
        })
        .collect()
}

/// Columns `t, u, v` of the relaxation system with `a = 1`, `b = 0`.
pub fn ode_table(req: &OdeRequest) -> CliResult<CsvTable> {
    let mut problems = Vec::new();
    if !(req.t_max > 0.0 && req.t_max.is_finite()) {
        problems.push(format!("t_max must be positive and finite, got {}", req.t_max));
    }
    if req.method == OdeMethod::Laplace && !(req.t_max >= 1.0) {
        problems.push(format!("t_max must be >= 1 for the laplace method, got {}", req.t_max));
    }
    if req.points == 0 {
        problems.push("points must be positive".to_owned());
    }
    let spec = OdeSpec::relaxation(req.alpha, req.beta, req.c1, req.c2);
    if let Err(e) = spec.validate() {
        problems.extend(e.to_string().trim_start_matches("domain error: ").split("; ").map(str::to_owned));
    }
    if !problems.is_empty() {
        return Err(CliError::Validation(problems));
    }
    let mut table = CsvTable::new(vec!["t".into(), "u".into(), "v".into()]);
    match req.method {
        OdeMethod::Picard => {
            let path = picard_solve(&spec, &PicardOptions::new(req.t_max, req.points))?;
            if !path.converged {
                return Err(CliError::Numerical(format!(
                    "picard iteration did not converge after {} iterations",
                    path.iterations
                )));
            }
            for i in 0..path.times.len() {
                table.rows.push(vec![path.times[i], path.u[i], path.v[i]]);
            }
        }
        OdeMethod::Laplace => {
            let inv = BranchCutInverter::new(LaplaceSymbol::new(req.alpha, req.beta, req.c1, req.c2)?)?;
            for t in log_points(1.0, req.t_max, req.points) {
                let (u, v) = inv.eval(t)?;
                table.rows.push(vec![t, u, v]);
            }
        }
    }
    Ok(table)
}

fn l2(c: &[f64]) -> f64 {
    c.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// `t, v_exact, v_asymptotic, ratio` for the one-way pair with `u₀ = sin x`
/// on log-spaced times in `[10, t_max]`.
pub fn oracle_table(beta: f64, t_max: f64, points: usize) -> CliResult<CsvTable> {
    let mut problems = Vec::new();
    if !(beta > 0.0 && beta < 1.0) {
        problems.push(format!("beta must lie in (0, 1), got {beta}"));
    }
    if !(t_max >= 10.0 && t_max.is_finite()) {
        problems.push(format!("t_max must be finite and >= 10, got {t_max}"));
    }
    if points == 0 {
        problems.push("points must be positive".to_owned());
    }
    if !problems.is_empty() {
        return Err(CliError::Validation(problems));
    }
    let coeffs = mode_coefficients(&Profile::Sine, DEFAULT_MODES)?;
    let mut table = CsvTable::new(vec!["t".into(), "v_exact".into(), "v_asymptotic".into(), "ratio".into()]);
    for t in log_points(10.0, t_max, points) {
        let exact = decoupled_solve(&coeffs, beta, t, DEFAULT_MODES)?.v_norm();
        let asym = l2(&leading_v(&coeffs, beta, t));
        table.rows.push(vec![t, exact, asym, exact / asym]);
    }
    Ok(table)
}

/// Fit of one column of a norm-series CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnFit {
    pub column: String,
    pub fit: DecayFit,
}

/// Read a CSV whose first column is `t` and fit every norm column
/// (`pointwise_exp_*` columns are skipped). The default window is
/// `[T/5, T]` with `T` the last time.
pub fn decay_fits<R: Read>(input: R, window: Option<(f64, f64)>) -> CliResult<Vec<ColumnFit>> {
    let mut reader = csv::Reader::from_reader(input);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.first().map(String::as_str) != Some("t") {
        return Err(CliError::validation("first csv column must be named t"));
    }
    let columns: Vec<usize> = (1..header.len())
        .filter(|&i| !header[i].starts_with("pointwise_exp"))
        .collect();
    if columns.is_empty() {
        return Err(CliError::validation("csv has no norm columns"));
    }
    let mut times = Vec::new();
    let mut values = vec![Vec::new(); columns.len()];
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        let parse = |i: usize| -> CliResult<f64> {
            let s = record.get(i).unwrap_or("");
            s.trim()
                .parse()
                .map_err(|_| CliError::validation(format!("row {}: cannot parse {:?} in column {}", line + 2, s, header[i])))
        };
        times.push(parse(0)?);
        for (slot, &c) in values.iter_mut().zip(&columns) {
            slot.push(parse(c)?);
        }
    }
    let horizon = *times.last().ok_or_else(|| CliError::validation("csv has no data rows"))?;
    let window = window.unwrap_or((horizon / 5.0, horizon));
    columns
        .iter()
        .zip(values)
        .map(|(&c, v)| {
            let series = NormSeries::new(times.clone(), v)?;
            Ok(ColumnFit {
                column: header[c].clone(),
                fit: fit_decay(&series, window)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_points_hit_both_ends() {
        let p = log_points(1.0, 100.0, 3);
        assert_eq!(p[0], 1.0);
        assert_eq!(p[2], 100.0);
        assert!((p[1] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn mlf_of_zero_argument_is_reciprocal_gamma() {
        assert_eq!(mlf(0.5, 1.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn ode_validation_lists_every_problem() {
        let req = OdeRequest {
            alpha: 1.5,
            beta: 0.5,
            c1: 2.0,
            c2: 1.0,
            t_max: 0.5,
            method: OdeMethod::Laplace,
            points: 0,
        };
        let CliError::Validation(p) = ode_table(&req).unwrap_err() else { panic!() };
        assert_eq!(p.len(), 3, "{p:?}");
    }

    #[test]
    fn picard_table_starts_at_initial_data() {
        let req = OdeRequest {
            alpha: 0.9,
            beta: 0.5,
            c1: 2.0,
            c2: 1.0,
            t_max: 1.0,
            method: OdeMethod::Picard,
            points: 64,
        };
        let t = ode_table(&req).unwrap();
        assert_eq!(t.rows.len(), 65);
        assert_eq!(t.rows[0], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn oracle_ratio_tends_to_one() {
        let t = oracle_table(0.5, 1000.0, 3).unwrap();
        let r: Vec<f64> = t.rows.iter().map(|row| row[3]).collect();
        assert!((r[2] - 1.0).abs() < 0.02, "{r:?}");
        assert!((r[2] - 1.0).abs() < (r[0] - 1.0).abs());
    }

    #[test]
    fn decay_fits_recover_a_power_law() {
        let mut csv = String::from("t,norm_1,pointwise_exp_1\n");
        for n in 1..=1000 {
            let t = n as f64;
            csv.push_str(&format!("{t},{},{}\n", 3.0 * t.powf(-1.5), -1.5));
        }
        let fits = decay_fits(csv.as_bytes(), None).unwrap();
        assert_eq!(fits.len(), 1);
        assert_eq!(fits[0].column, "norm_1");
        assert!((fits[0].fit.exponent + 1.5).abs() < 1e-10);
    }

    #[test]
    fn decay_rejects_bad_header() {
        assert!(matches!(decay_fits("x,y\n1,2\n".as_bytes(), None), Err(CliError::Validation(_))));
    }
}
