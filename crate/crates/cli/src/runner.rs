//! Finite-difference experiments: simulate, measure norms, fit decay rates.

use std::fmt;
use std::time::Instant;

use serde::Serialize;
use subdiff_core::decay::{conjecture_rate, fit_decay, l2_norm, DecayFit, NormSeries};
use subdiff_core::frac_ode::{check_decay_assumption, poincare_constant};
use subdiff_core::subdiff_fd::{
    assemble_block_matrix, gershgorin_margin, simulate, stability_condition, Grid, History, Scheme, SystemSpec,
};

use crate::config::PdeConfig;
use crate::error::CliResult;
use crate::output::CsvTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitSummary {
    pub window: [f64; 2],
    pub exponent: f64,
    pub intercept: f64,
    pub rms_residual: f64,
    pub samples: usize,
}

impl From<DecayFit> for FitSummary {
    fn from(f: DecayFit) -> Self {
        Self {
            window: [f.window.0, f.window.1],
            exponent: f.exponent,
            intercept: f.intercept,
            rms_residual: f.rms_residual,
            samples: f.samples,
        }
    }
}

/// Summary of one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub config: PdeConfig,
    /// One fit per component norm.
    pub fits: Vec<FitSummary>,
    /// Fit of the norm of the whole solution vector.
    pub solution_fit: FitSummary,
    /// Rate predicted by the lowest order with nonzero initial data.
    pub expected_rate: Option<f64>,
    pub stability_condition: bool,
    /// The stability condition holds with equality somewhere.
    pub stability_equality: bool,
    /// `min (|center| - radius)` over the Gershgorin disks of the implicit matrix.
    pub gershgorin_margin: Option<f64>,
    pub decay_assumption: bool,
    pub wall_time_seconds: f64,
}

/// A finished run: report, norm series and the CSV table.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: RunReport,
    pub norms: Vec<NormSeries>,
    pub solution_norm: NormSeries,
    pub csv: CsvTable,
}

/// Validate, build and integrate the system described by `config`.
pub fn simulate_config(config: &PdeConfig) -> CliResult<(Grid, SystemSpec, History)> {
    let (grid, spec) = config.build()?;
    let scheme: Scheme = config.resolved().scheme.expect("resolved").into();
    let history = simulate(&spec, &grid, scheme)?;
    Ok((grid, spec, history))
}

fn norms_of(history: &History, grid: &Grid) -> (Vec<NormSeries>, NormSeries) {
    let k = history.components();
    let times: Vec<f64> = (0..history.levels()).map(|n| grid.t(n)).collect();
    let values: Vec<Vec<f64>> = (0..k)
        .map(|c| (0..history.levels()).map(|n| l2_norm(history.component(n, c), grid.dx())).collect())
        .collect();
    let total = (0..history.levels())
        .map(|n| values.iter().map(|v| v[n] * v[n]).sum::<f64>().sqrt())
        .collect();
    let norms = values
        .into_iter()
        .map(|v| NormSeries {
            times: times.clone(),
            values: v,
        })
        .collect();
    (norms, NormSeries { times, values: total })
}

fn pointwise(t: f64, v: f64) -> f64 {
    if t > 1.0 && v > 0.0 {
        v.ln() / t.ln()
    } else {
        f64::NAN
    }
}

/// Columns `t, norm_1..K, pointwise_exp_1..K` every `stride` steps, always
/// including the final level.
pub fn norm_table(norms: &[NormSeries], stride: usize) -> CsvTable {
    let k = norms.len();
    let mut header = vec!["t".to_owned()];
    header.extend((1..=k).map(|i| format!("norm_{i}")));
    header.extend((1..=k).map(|i| format!("pointwise_exp_{i}")));
    let mut table = CsvTable::new(header);
    let levels = norms.first().map_or(0, |s| s.len());
    let mut idx: Vec<usize> = (0..levels).step_by(stride.max(1)).collect();
    if levels > 0 && idx.last() != Some(&(levels - 1)) {
        idx.push(levels - 1);
    }
    for n in idx {
        let t = norms[0].times[n];
        let mut row = vec![t];
        row.extend(norms.iter().map(|s| s.values[n]));
        row.extend(norms.iter().map(|s| pointwise(t, s.values[n])));
        table.rows.push(row);
    }
    table
}

/// Run the experiment, write the CSV when an output path is configured and
/// fit the decay exponents.
pub fn run(config: &PdeConfig) -> CliResult<RunOutcome> {
    let start = Instant::now();
    let resolved = config.resolved();
    let (grid, spec, history) = simulate_config(config)?;
    let (norms, solution_norm) = norms_of(&history, &grid);
    let csv = norm_table(&norms, resolved.stride.expect("resolved"));
    if let Some(path) = &resolved.output {
        csv.write_to(Some(path))?;
    }
    let [lo, hi] = resolved.fit_window.expect("resolved");
    let fits = norms
        .iter()
        .map(|s| fit_decay(s, (lo, hi)).map(FitSummary::from))
        .collect::<Result<Vec<_>, _>>()?;
    let solution_fit = fit_decay(&solution_norm, (lo, hi))?.into();
    let nonzero: Vec<bool> = spec.initials.iter().map(|p| !p.is_zero()).collect();
    let slack = spec.stability_slack(&grid);
    let scheme: Scheme = resolved.scheme.expect("resolved").into();
    let gershgorin = match scheme {
        Scheme::FullyImplicit => Some(gershgorin_margin(&assemble_block_matrix(&spec, &grid, 1)?)),
        Scheme::SemiImplicit => None,
    };
    let couplings = resolved.couplings.as_ref().expect("resolved");
    let k = couplings.len();
    let upper = (0..k).flat_map(|r| (r + 1..k).map(move |c| (r, c))).map(|(r, c)| couplings[r][c].abs());
    let lower = (0..k).flat_map(|r| (0..r).map(move |c| (r, c))).map(|(r, c)| couplings[r][c].abs());
    let kappa0 = spec.diffusivities.iter().copied().fold(f64::INFINITY, f64::min);
    let assumption = check_decay_assumption(
        kappa0,
        poincare_constant(grid.length),
        upper.fold(0.0, f64::max),
        lower.fold(0.0, f64::max),
    );
    let report = RunReport {
        config: resolved,
        fits,
        solution_fit,
        expected_rate: conjecture_rate(&spec.orders, &nonzero),
        stability_condition: stability_condition(&spec, &grid),
        stability_equality: slack == 0.0,
        gershgorin_margin: gershgorin,
        decay_assumption: assumption,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok(RunOutcome {
        report,
        norms,
        solution_norm,
        csv,
    })
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "orders {:?}, initial case {}, scheme {}",
            c.orders,
            serde_json::to_value(c.initial_case).expect("serializes"),
            serde_json::to_value(c.scheme.expect("resolved")).expect("serializes")
        )?;
        let horizon = c.horizon.expect("resolved");
        let steps = c.steps.expect("resolved");
        writeln!(
            f,
            "grid: {} cells on [0, {:.6}], {} steps of {} up to T = {}",
            c.cells.expect("resolved"),
            c.length.expect("resolved"),
            steps,
            horizon / steps as f64,
            horizon
        )?;
        let [lo, hi] = c.fit_window.expect("resolved");
        writeln!(f, "fitted decay exponents on [{lo}, {hi}]:")?;
        for (i, fit) in self.fits.iter().enumerate() {
            writeln!(f, "  component {}: {:+.4} (rms {:.2e})", i + 1, fit.exponent, fit.rms_residual)?;
        }
        writeln!(
            f,
            "  solution:    {:+.4} (rms {:.2e})",
            self.solution_fit.exponent, self.solution_fit.rms_residual
        )?;
        match self.expected_rate {
            Some(r) => writeln!(f, "expected rate from the lowest active order: {r:+.4}")?,
            None => writeln!(f, "expected rate: none (all initial data vanish)")?,
        }
        let equality = if self.stability_equality { " (with equality)" } else { "" };
        writeln!(f, "stability condition: {}{equality}", self.stability_condition)?;
        if let Some(m) = self.gershgorin_margin {
            writeln!(f, "gershgorin margin min(|center| - radius): {m:.15}")?;
        }
        writeln!(f, "decay assumption kappa0 / C^2 > sup|c_kl|: {}", self.decay_assumption)?;
        write!(f, "wall time: {:.2} s", self.wall_time_seconds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::InitialCase;
    use crate::error::CliError;

    fn small(orders: Vec<f64>, case: InitialCase) -> PdeConfig {
        let mut c = PdeConfig::new(orders, case);
        c.cells = Some(16);
        c.horizon = Some(50.0);
        c.steps = Some(100);
        c
    }

    #[test]
    fn csv_columns_and_stride() {
        let out = run(&small(vec![0.9, 0.5], InitialCase::Ii)).unwrap();
        assert_eq!(out.csv.header, ["t", "norm_1", "norm_2", "pointwise_exp_1", "pointwise_exp_2"]);
        assert_eq!(out.csv.rows.len(), 11);
        assert_eq!(out.csv.rows[1][0], 5.0);
        assert!(out.csv.rows[0][3].is_nan());
        assert_eq!(out.report.fits.len(), 2);
        assert_eq!(out.report.expected_rate, Some(-0.9));
        assert!(out.report.stability_condition && out.report.stability_equality);
        assert!(!out.report.decay_assumption);
        assert!(out.report.gershgorin_margin.unwrap() >= 1.0 - 1e-12);
    }

    #[test]
    fn zero_data_is_rejected_as_zero_series() {
        let mut c = small(vec![0.9, 0.5], InitialCase::Ii);
        c.couplings = Some(vec![vec![0.0, 0.0], vec![0.0, 0.0]]);
        let err = run(&c).unwrap_err();
        let CliError::Validation(p) = err else { panic!("{err}") };
        assert!(p[0].contains("zero series"), "{p:?}");
    }

    #[test]
    fn reruns_are_bit_identical() {
        let c = small(vec![1.0, 0.7, 0.5], InitialCase::Iii);
        let a = run(&c).unwrap().csv.to_string().unwrap();
        let b = run(&c).unwrap().csv.to_string().unwrap();
        assert_eq!(a, b);
    }
}
