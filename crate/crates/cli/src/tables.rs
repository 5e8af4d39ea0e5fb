//! The two K = 3 tables of decay rates: `w₀ ≡ 0` and `v₀ = w₀ ≡ 0`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::config::{InitialCase, PdeConfig};
use crate::error::CliResult;
use crate::runner::run;

/// Tolerance on the fitted exponent of each row.
pub const TABLE_TOLERANCE: f64 = 0.07;

/// One table row: orders and the reported decay power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableEntry {
    pub orders: [f64; 3],
    pub rate: f64,
}

const fn entry(beta: f64, gamma: f64, rate: f64) -> TableEntry {
    TableEntry {
        orders: [1.0, beta, gamma],
        rate,
    }
}

/// Rows with `w₀ ≡ 0`.
pub const TABLE_1: [TableEntry; 6] = [
    entry(0.5, 0.3, -0.5),
    entry(0.5, 0.5, -0.5),
    entry(0.7, 0.5, -0.7),
    entry(1.0, 0.3, -1.3),
    entry(1.0, 0.5, -1.5),
    entry(1.0, 0.7, -1.7),
];

/// Rows with `v₀ = w₀ ≡ 0`.
pub const TABLE_2: [TableEntry; 6] = [
    entry(0.5, 0.3, -1.3),
    entry(0.5, 0.5, -1.5),
    entry(0.7, 0.5, -1.5),
    entry(1.0, 0.3, -1.3),
    entry(1.0, 0.5, -1.5),
    entry(1.0, 0.7, -1.7),
];

/// Discretization shared by every row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub cells: usize,
    pub horizon: f64,
    pub steps: usize,
    pub tolerance: f64,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            cells: crate::config::DEFAULT_CELLS,
            horizon: crate::config::DEFAULT_HORIZON,
            steps: (crate::config::DEFAULT_HORIZON / crate::config::DEFAULT_DT) as usize,
            tolerance: TABLE_TOLERANCE,
        }
    }
}

/// Outcome of one row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowResult {
    /// 1 or 2.
    pub table: usize,
    pub entry: TableEntry,
    /// Exponent fitted to the norm of the whole solution.
    pub fitted: f64,
    /// Exponents fitted to each component norm.
    pub components: Vec<f64>,
    /// Rate predicted by the lowest order with nonzero initial data.
    pub conjecture: Option<f64>,
    pub pass: bool,
}

/// Configuration of one row.
pub fn row_config(table: usize, entry: &TableEntry, opts: &TableOptions) -> PdeConfig {
    let case = if table == 1 { InitialCase::Ii } else { InitialCase::Iii };
    let mut c = PdeConfig::new(entry.orders.to_vec(), case);
    c.cells = Some(opts.cells);
    c.horizon = Some(opts.horizon);
    c.steps = Some(opts.steps);
    c
}

/// Run all twelve rows in parallel.
pub fn run_tables(opts: &TableOptions) -> CliResult<Vec<RowResult>> {
    let jobs: Vec<(usize, TableEntry)> = TABLE_1
        .iter()
        .map(|e| (1, *e))
        .chain(TABLE_2.iter().map(|e| (2, *e)))
        .collect();
    jobs.par_iter()
        .map(|&(table, entry)| {
            let report = run(&row_config(table, &entry, opts))?.report;
            let fitted = report.solution_fit.exponent;
            Ok(RowResult {
                table,
                entry,
                fitted,
                components: report.fits.iter().map(|f| f.exponent).collect(),
                conjecture: report.expected_rate,
                pass: (fitted - entry.rate).abs() <= opts.tolerance,
            })
        })
        .collect()
}

/// Render the rows as two plain-text tables.
pub fn format_tables(rows: &[RowResult], tolerance: f64) -> String {
    let mut out = String::new();
    let captions = ["Table 1: w0 = 0", "Table 2: v0 = w0 = 0"];
    for (t, caption) in captions.iter().enumerate() {
        let _ = writeln!(out, "{caption} (tolerance {tolerance})");
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>5} | {:>7} {:>8} | {:>8} {:>8} {:>8} | {:>10} | status",
            "alpha", "beta", "gamma", "rate", "fitted", "|u|", "|v|", "|w|", "conjecture"
        );
        for r in rows.iter().filter(|r| r.table == t + 1) {
            let [a, b, g] = r.entry.orders;
            let _ = write!(out, "{a:>5.1} {b:>5.1} {g:>5.1} | {:>7.2} {:>8.4} |", r.entry.rate, r.fitted);
            for c in &r.components {
                let _ = write!(out, " {c:>8.4}");
            }
            let conj = r.conjecture.map_or("-".to_owned(), |c| format!("{c:.2}"));
            let _ = writeln!(out, " | {conj:>10} | {}", if r.pass { "PASS" } else { "FAIL" });
        }
        out.push('\n');
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    let _ = write!(out, "{} of {} rows within tolerance", rows.len() - failed, rows.len());
    out
}
