//! JSON configuration of finite-difference runs.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use subdiff_core::subdiff_fd::{Grid, PairCase, Profile, Scheme, SystemSpec, TripleCase};

use crate::error::{CliError, CliResult};

pub const DEFAULT_CELLS: usize = 128;
pub const DEFAULT_HORIZON: f64 = 1000.0;
pub const DEFAULT_DT: f64 = 0.25;
pub const DEFAULT_STRIDE: usize = 10;

/// Initial-data case: `i`/`ii` for two components, `i`/`ii`/`iii` for three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "iii")]
    Iii,
}

impl InitialCase {
    pub fn profiles(self, k: usize) -> Option<Vec<Profile>> {
        match (k, self) {
            (2, InitialCase::I) => Some(vec![Profile::Sine, Profile::Tent]),
            (2, InitialCase::Ii) => Some(vec![Profile::Sine, Profile::Zero]),
            (3, InitialCase::I) => Some(vec![Profile::Parabola, Profile::Sine, Profile::Tent]),
            (3, InitialCase::Ii) => Some(vec![Profile::Sine, Profile::Tent, Profile::Zero]),
            (3, InitialCase::Iii) => Some(vec![Profile::Sine, Profile::Zero, Profile::Zero]),
            _ => None,
        }
    }

    pub fn pair(self) -> Option<PairCase> {
        match self {
            InitialCase::I => Some(PairCase::BothNonzero),
            InitialCase::Ii => Some(PairCase::SecondZero),
            InitialCase::Iii => None,
        }
    }

    pub fn triple(self) -> TripleCase {
        match self {
            InitialCase::I => TripleCase::AllNonzero,
            InitialCase::Ii => TripleCase::ThirdZero,
            InitialCase::Iii => TripleCase::OnlyFirst,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemeName {
    SemiImplicit,
    FullyImplicit,
}

impl From<SchemeName> for Scheme {
    fn from(s: SchemeName) -> Self {
        match s {
            SchemeName::SemiImplicit => Scheme::SemiImplicit,
            SchemeName::FullyImplicit => Scheme::FullyImplicit,
        }
    }
}

/// A finite-difference run. Omitted optional fields take the documented
/// defaults; [`PdeConfig::resolved`] fills them in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PdeConfig {
    /// Orders `α_1 ≥ … ≥ α_K` in `(0, 1]`, with `K` equal to 2 or 3.
    pub orders: Vec<f64>,
    pub initial_case: InitialCase,
    /// Default: all ones.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffusivities: Option<Vec<f64>>,
    /// Default: 1 on the diagonal, -1 (K = 2) or -0.5 (K = 3) elsewhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub couplings: Option<Vec<Vec<f64>>>,
    /// Default: π.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cells: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    /// Default: `horizon / 0.25`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<SchemeName>,
    /// CSV row every `stride` steps. Default 10.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stride: Option<usize>,
    /// Default: `[horizon / 5, horizon]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

const KNOWN_KEYS: &[&str] = &[
    "orders",
    "initial_case",
    "diffusivities",
    "couplings",
    "length",
    "cells",
    "horizon",
    "steps",
    "scheme",
    "stride",
    "fit_window",
    "output",
];

fn default_couplings(k: usize) -> Vec<Vec<f64>> {
    let off = if k == 2 { -1.0 } else { -0.5 };
    (0..k)
        .map(|r| (0..k).map(|c| if r == c { 1.0 } else { off }).collect())
        .collect()
}

impl PdeConfig {
    pub fn new(orders: Vec<f64>, initial_case: InitialCase) -> Self {
        Self {
            orders,
            initial_case,
            diffusivities: None,
            couplings: None,
            length: None,
            cells: None,
            horizon: None,
            steps: None,
            scheme: None,
            stride: None,
            fit_window: None,
            output: None,
        }
    }

    /// Parse a JSON document, reporting every unknown key at once.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| CliError::validation(format!("config is not valid JSON: {e}")))?;
        let Value::Object(map) = &value else {
            return Err(CliError::validation("config must be a JSON object"));
        };
        let unknown: Vec<String> = map
            .keys()
            .filter(|k| !KNOWN_KEYS.contains(&k.as_str()))
            .map(|k| format!("unknown key `{k}`"))
            .collect();
        let mut problems = unknown;
        for required in ["orders", "initial_case"] {
            if !map.contains_key(required) {
                problems.push(format!("missing key `{required}`"));
            }
        }
        if problems.is_empty() {
            return serde_json::from_value(value).map_err(|e| CliError::validation(format!("config: {e}")));
        }
        let known: serde_json::Map<String, Value> = map
            .iter()
            .filter(|(k, _)| KNOWN_KEYS.contains(&k.as_str()))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        if let Ok(partial) = serde_json::from_value::<Self>(Value::Object(known)) {
            if let Err(CliError::Validation(more)) = partial.validate() {
                problems.extend(more);
            }
        }
        Err(CliError::Validation(problems))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn components(&self) -> usize {
        self.orders.len()
    }

    /// The same run with every default written out.
    pub fn resolved(&self) -> Self {
        let k = self.components();
        let horizon = self.horizon.unwrap_or(DEFAULT_HORIZON);
        Self {
            orders: self.orders.clone(),
            initial_case: self.initial_case,
            diffusivities: Some(self.diffusivities.clone().unwrap_or_else(|| vec![1.0; k])),
            couplings: Some(self.couplings.clone().unwrap_or_else(|| default_couplings(k))),
            length: Some(self.length.unwrap_or(PI)),
            cells: Some(self.cells.unwrap_or(DEFAULT_CELLS)),
            horizon: Some(horizon),
            steps: Some(self.steps.unwrap_or_else(|| (horizon / DEFAULT_DT).round().max(1.0) as usize)),
            scheme: Some(self.scheme.unwrap_or(SchemeName::FullyImplicit)),
            stride: Some(self.stride.unwrap_or(DEFAULT_STRIDE)),
            fit_window: Some(self.fit_window.unwrap_or([horizon / 5.0, horizon])),
            output: self.output.clone(),
        }
    }

    /// Check every field and return all violations together.
    pub fn validate(&self) -> CliResult<()> {
        let c = self.resolved();
        let k = c.components();
        let mut p = Vec::new();
        if k != 2 && k != 3 {
            p.push(format!("orders: expected 2 or 3 entries, got {k}"));
        }
        for (i, a) in c.orders.iter().enumerate() {
            if !(*a > 0.0 && *a <= 1.0) {
                p.push(format!("orders[{i}]: must lie in (0, 1], got {a}"));
            }
        }
        if c.orders.windows(2).any(|w| w[1] > w[0]) {
            p.push(format!("orders: must be non-increasing, got {:?}", c.orders));
        }
        if c.initial_case.profiles(k).is_none() && (k == 2 || k == 3) {
            p.push(format!("initial_case: case {:?} is not defined for {k} components", c.initial_case));
        }
        let d = c.diffusivities.as_ref().expect("resolved");
        if d.len() != k {
            p.push(format!("diffusivities: expected {k} entries, got {}", d.len()));
        }
        for (i, v) in d.iter().enumerate() {
            if !(*v > 0.0 && v.is_finite()) {
                p.push(format!("diffusivities[{i}]: must be positive, got {v}"));
            }
        }
        let cp = c.couplings.as_ref().expect("resolved");
        if cp.len() != k || cp.iter().any(|r| r.len() != k) {
            p.push(format!("couplings: expected a {k}x{k} matrix"));
        } else {
            for (i, row) in cp.iter().enumerate() {
                if !(row[i] >= 0.0) {
                    p.push(format!("couplings[{i}][{i}]: diagonal must be non-negative, got {}", row[i]));
                }
                for (j, v) in row.iter().enumerate() {
                    if !v.is_finite() {
                        p.push(format!("couplings[{i}][{j}]: must be finite, got {v}"));
                    }
                }
            }
        }
        let length = c.length.expect("resolved");
        if !(length > 0.0 && length.is_finite()) {
            p.push(format!("length: must be positive, got {length}"));
        }
        let cells = c.cells.expect("resolved");
        if cells < 2 {
            p.push(format!("cells: must be at least 2, got {cells}"));
        }
        let horizon = c.horizon.expect("resolved");
        if !(horizon > 0.0 && horizon.is_finite()) {
            p.push(format!("horizon: must be positive, got {horizon}"));
        }
        let steps = c.steps.expect("resolved");
        if steps < 2 {
            p.push(format!("steps: must be at least 2, got {steps}"));
        }
        let stride = c.stride.expect("resolved");
        if stride == 0 {
            p.push("stride: must be at least 1".to_owned());
        }
        let [lo, hi] = c.fit_window.expect("resolved");
        if !(lo >= 1.0 && hi > lo && hi <= horizon) {
            p.push(format!("fit_window: need 1 <= lo < hi <= horizon, got [{lo}, {hi}]"));
        }
        if p.is_empty() {
            Ok(())
        } else {
            Err(CliError::Validation(p))
        }
    }

    /// Validated grid and system.
    pub fn build(&self) -> CliResult<(Grid, SystemSpec)> {
        self.validate()?;
        let c = self.resolved();
        let k = c.components();
        let grid = Grid::new(
            c.length.expect("resolved"),
            c.cells.expect("resolved"),
            c.horizon.expect("resolved"),
            c.steps.expect("resolved"),
        )?;
        let initials = c.initial_case.profiles(k).expect("validated");
        let spec = SystemSpec::constant(
            c.orders.clone(),
            c.diffusivities.clone().expect("resolved"),
            c.couplings.clone().expect("resolved"),
            initials,
        );
        spec.validate(&grid)?;
        Ok((grid, spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_resolves_to_defaults() {
        let c = PdeConfig::from_json(r#"{"orders": [0.9, 0.5], "initial_case": "ii"}"#).unwrap();
        let r = c.resolved();
        assert_eq!(r.steps, Some(4000));
        assert_eq!(r.cells, Some(128));
        assert_eq!(r.fit_window, Some([200.0, 1000.0]));
        assert_eq!(r.couplings, Some(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]));
        assert_eq!(r.scheme, Some(SchemeName::FullyImplicit));
        let (grid, spec) = c.build().unwrap();
        assert_eq!(grid.dt(), 0.25);
        assert!(spec.initials[1].is_zero());
    }

    #[test]
    fn unknown_keys_are_all_reported() {
        let err = PdeConfig::from_json(r#"{"orders": [0.9, 0.5], "initial_case": "i", "dt": 1, "colour": 2}"#)
            .unwrap_err();
        let CliError::Validation(p) = err else { panic!() };
        assert_eq!(p.len(), 2);
        assert!(p.iter().any(|s| s.contains("`dt`")) && p.iter().any(|s| s.contains("`colour`")));
    }

    #[test]
    fn unknown_keys_and_bad_fields_are_reported_together() {
        let err = PdeConfig::from_json(r#"{"orders": [1.5, 0.5], "initial_case": "ii", "colour": 2}"#).unwrap_err();
        let CliError::Validation(p) = err else { panic!() };
        assert!(p.iter().any(|s| s.contains("`colour`")), "{p:?}");
        assert!(p.iter().any(|s| s.starts_with("orders[0]")), "{p:?}");
    }

    #[test]
    fn every_violated_field_is_listed() {
        let mut c = PdeConfig::new(vec![0.5, 0.9, 1.5], InitialCase::I);
        c.cells = Some(1);
        c.steps = Some(0);
        c.stride = Some(0);
        c.diffusivities = Some(vec![1.0, -1.0]);
        let CliError::Validation(p) = c.validate().unwrap_err() else { panic!() };
        for field in ["orders[2]", "orders:", "diffusivities:", "diffusivities[1]", "cells", "steps", "stride"] {
            assert!(p.iter().any(|s| s.starts_with(field)), "{field} missing from {p:?}");
        }
    }

    #[test]
    fn case_iii_needs_three_components() {
        let c = PdeConfig::new(vec![1.0, 0.5], InitialCase::Iii);
        assert!(c.validate().is_err());
        assert!(PdeConfig::new(vec![1.0, 0.5, 0.3], InitialCase::Iii).validate().is_ok());
    }

    #[test]
    fn snapshot_round_trips() {
        let c = PdeConfig::from_json(r#"{"orders": [1.0, 0.7, 0.5], "initial_case": "iii", "cells": 32}"#).unwrap();
        let first = c.resolved().to_json();
        let again = PdeConfig::from_json(&first).unwrap().to_json();
        assert_eq!(first, again);
    }
}
