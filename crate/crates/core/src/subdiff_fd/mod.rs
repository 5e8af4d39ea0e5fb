//! L1 finite-difference solver for weakly coupled subdiffusion systems
//! `∂^{α_k}(u_k - u_k(0)) - d_k ∂xx u_k + Σ_ℓ c_{kℓ} u_ℓ = F_k` on `(0, L)`
//! with homogeneous Dirichlet conditions.

mod banded;
mod history;
mod l1;
mod stepper;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use banded::{
    banded_solve, disks_outside_unit_ball, gershgorin_disks, gershgorin_margin, BandedLu, BandedMatrix,
    Factorization, Thomas,
};
pub use history::History;
pub use l1::{l1_weights, L1Weights};
pub use stepper::{assemble_block_matrix, simulate, step_fully_implicit, step_semi_implicit, Scheme, Stepper};

/// Uniform space-time grid: `I` cells on `[0, L]` and `N` steps on `[0, T]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub length: f64,
    pub cells: usize,
    pub horizon: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(length: f64, cells: usize, horizon: f64, steps: usize) -> Result<Self> {
        let g = Self {
            length,
            cells,
            horizon,
            steps,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.length > 0.0 && self.length.is_finite()) {
            problems.push(format!("length must be positive, got {}", self.length));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            problems.push(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.cells < 2 {
            problems.push(format!("cells must be at least 2, got {}", self.cells));
        }
        if self.steps < 2 {
            problems.push(format!("steps must be at least 2, got {}", self.steps));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }

    pub fn dx(&self) -> f64 {
        self.length / self.cells as f64
    }

    pub fn dt(&self) -> f64 {
        self.horizon / self.steps as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.dx()
    }

    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt()
    }

    /// Number of space nodes including both boundary nodes.
    pub fn nodes(&self) -> usize {
        self.cells + 1
    }
}

type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type SpaceTimeFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A coefficient or source sampled at grid points.
#[derive(Clone)]
pub enum Field {
    Constant(f64),
    /// `space(x) * time(t)`.
    Separable { space: SpaceFn, time: SpaceFn },
    /// Values on the grid, `values[n * nodes + i]`.
    Tabulated { nodes: usize, values: Arc<Vec<f64>> },
    General(SpaceTimeFn),
}

impl Field {
    pub fn zero() -> Self {
        Field::Constant(0.0)
    }

    pub fn separable(
        space: impl Fn(f64) -> f64 + Send + Sync + 'static,
        time: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Field::Separable {
            space: Arc::new(space),
            time: Arc::new(time),
        }
    }

    pub fn general(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Field::General(Arc::new(f))
    }

    /// Value at node `i` and level `n`, located at `(x, t)`.
    pub fn at(&self, i: usize, n: usize, x: f64, t: f64) -> f64 {
        match self {
            Field::Constant(c) => *c,
            Field::Separable { space, time } => space(x) * time(t),
            Field::Tabulated { nodes, values } => values[n * nodes + i],
            Field::General(f) => f(x, t),
        }
    }

    pub fn on_grid(&self, grid: &Grid, i: usize, n: usize) -> f64 {
        self.at(i, n, grid.x(i), grid.t(n))
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Field::Constant(c) => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Constant(c) => write!(f, "Constant({c})"),
            Field::Separable { .. } => write!(f, "Separable(..)"),
            Field::Tabulated { nodes, values } => write!(f, "Tabulated({} x {nodes})", values.len() / nodes.max(&1)),
            Field::General(_) => write!(f, "General(..)"),
        }
    }
}

/// Initial profiles on `[0, L]`, all vanishing at both ends.
#[derive(Clone)]
pub enum Profile {
    Zero,
    /// `sin(πx/L)`.
    Sine,
    /// `x(L - x)`.
    Parabola,
    /// `L/2 - |x - L/2|`.
    Tent,
    Custom(SpaceFn),
}

impl Profile {
    pub fn eval(&self, x: f64, length: f64) -> f64 {
        match self {
            Profile::Zero => 0.0,
            Profile::Sine => (std::f64::consts::PI * x / length).sin(),
            Profile::Parabola => x * (length - x),
            Profile::Tent => 0.5 * length - (x - 0.5 * length).abs(),
            Profile::Custom(f) => f(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Profile::Zero)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Profile::Zero => "zero",
            Profile::Sine => "sine",
            Profile::Parabola => "parabola",
            Profile::Tent => "tent",
            Profile::Custom(_) => "custom",
        }
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Initial data for the two-component experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCase {
    /// `u₀ = sin x`, `v₀ = tent`.
    BothNonzero,
    /// `u₀ = sin x`, `v₀ = 0`.
    SecondZero,
}

/// Initial data for the three-component experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TripleCase {
    /// parabola, sine, tent.
    AllNonzero,
    /// sine, tent, zero.
    ThirdZero,
    /// sine, zero, zero.
    OnlyFirst,
}

/// The coupled system with its coefficients, sources and initial data.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub orders: Vec<f64>,
    pub diffusivities: Vec<f64>,
    pub couplings: Vec<Vec<Field>>,
    pub sources: Vec<Field>,
    pub initials: Vec<Profile>,
}

impl SystemSpec {
    /// Homogeneous system with constant couplings and zero sources.
    pub fn constant(orders: Vec<f64>, diffusivities: Vec<f64>, couplings: Vec<Vec<f64>>, initials: Vec<Profile>) -> Self {
        let k = orders.len();
        Self {
            orders,
            diffusivities,
            couplings: couplings
                .into_iter()
                .map(|row| row.into_iter().map(Field::Constant).collect())
                .collect(),
            sources: vec![Field::zero(); k],
            initials,
        }
    }

    /// Two components with `d = 1`, `c₁₁ = c₂₂ = 1`, `c₁₂ = c₂₁ = -1`.
    pub fn coupled_pair(alpha: f64, beta: f64, case: PairCase) -> Self {
        let v0 = match case {
            PairCase::BothNonzero => Profile::Tent,
            PairCase::SecondZero => Profile::Zero,
        };
        Self::constant(
            vec![alpha, beta],
            vec![1.0, 1.0],
            vec![vec![1.0, -1.0], vec![-1.0, 1.0]],
            vec![Profile::Sine, v0],
        )
    }

    /// Three components with `d = 1`, unit diagonal and `-0.5` off the diagonal.
    pub fn coupled_triple(orders: [f64; 3], case: TripleCase) -> Self {
        let initials = match case {
            TripleCase::AllNonzero => vec![Profile::Parabola, Profile::Sine, Profile::Tent],
            TripleCase::ThirdZero => vec![Profile::Sine, Profile::Tent, Profile::Zero],
            TripleCase::OnlyFirst => vec![Profile::Sine, Profile::Zero, Profile::Zero],
        };
        let c = |k: usize, l: usize| if k == l { 1.0 } else { -0.5 };
        Self::constant(
            orders.to_vec(),
            vec![1.0; 3],
            (0..3).map(|k| (0..3).map(|l| c(k, l)).collect()).collect(),
            initials,
        )
    }

    /// `u_t - u_xx = 0`, `∂^β v - v_xx = u`, started from `(u₀, 0)`.
    pub fn one_way_pair(beta: f64, u0: Profile) -> Self {
        Self::constant(
            vec![1.0, beta],
            vec![1.0, 1.0],
            vec![vec![0.0, 0.0], vec![-1.0, 0.0]],
            vec![u0, Profile::Zero],
        )
    }

    pub fn components(&self) -> usize {
        self.orders.len()
    }

    /// True when no coupling depends on time.
    pub fn couplings_are_constant(&self) -> bool {
        self.couplings.iter().flatten().all(|c| c.as_constant().is_some())
    }

    fn sample_points(&self, grid: &Grid, field: &Field) -> Vec<(usize, usize)> {
        if field.as_constant().is_some() {
            vec![(0, 0)]
        } else {
            (0..=grid.steps)
                .flat_map(|n| (1..grid.cells).map(move |i| (i, n)))
                .collect()
        }
    }

    /// Check every structural requirement and report all violations at once.
    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let mut problems = Vec::new();
        if let Err(Error::Domain(msg)) = grid.validate() {
            problems.push(msg);
        }
        let k = self.components();
        if !(1..=3).contains(&k) {
            problems.push(format!("component count must be 1, 2 or 3, got {k}"));
        }
        for (name, len) in [
            ("diffusivities", self.diffusivities.len()),
            ("couplings", self.couplings.len()),
            ("sources", self.sources.len()),
            ("initials", self.initials.len()),
        ] {
            if len != k {
                problems.push(format!("{name} has {len} entries, expected {k}"));
            }
        }
        for (row, c) in self.couplings.iter().enumerate() {
            if c.len() != k {
                problems.push(format!("coupling row {row} has {} entries, expected {k}", c.len()));
            }
        }
        for (i, &a) in self.orders.iter().enumerate() {
            if !(a > 0.0 && a <= 1.0) {
                problems.push(format!("order {i} must lie in (0, 1], got {a}"));
            }
        }
        if self.orders.windows(2).any(|w| w[1] > w[0]) {
            problems.push(format!("orders must be non-increasing, got {:?}", self.orders));
        }
        for (i, &d) in self.diffusivities.iter().enumerate() {
            if !(d > 0.0 && d.is_finite()) {
                problems.push(format!("diffusivity {i} must be positive, got {d}"));
            }
        }
        if problems.is_empty() {
            for kk in 0..k {
                let c = &self.couplings[kk][kk];
                let bad = self
                    .sample_points(grid, c)
                    .into_iter()
                    .map(|(i, n)| c.on_grid(grid, i, n))
                    .find(|v| !(*v >= 0.0));
                if let Some(v) = bad {
                    problems.push(format!("diagonal coupling c[{kk}][{kk}] must be non-negative, found {v}"));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Domain(problems.join("; ")))
        }
    }

    /// `min_k min_grid (c_kk - Σ_{ℓ≠k} |c_kℓ|)`. Non-negative exactly when
    /// the stability condition holds; zero means it holds with equality.
    pub fn stability_slack(&self, grid: &Grid) -> f64 {
        let k = self.components();
        let points: Vec<(usize, usize)> = if self.couplings_are_constant() {
            vec![(0, 0)]
        } else {
            (0..=grid.steps).flat_map(|n| (1..grid.cells).map(move |i| (i, n))).collect()
        };
        let mut slack = f64::INFINITY;
        for (i, n) in points {
            for row in 0..k {
                let off: f64 = (0..k)
                    .filter(|&c| c != row)
                    .map(|c| self.couplings[row][c].on_grid(grid, i, n).abs())
                    .sum();
                slack = slack.min(self.couplings[row][row].on_grid(grid, i, n) - off);
            }
        }
        slack
    }
}

/// Row-wise `c_kk ≥ Σ_{ℓ≠k} |c_kℓ|` at every grid point.
pub fn stability_condition(spec: &SystemSpec, grid: &Grid) -> bool {
    spec.stability_slack(grid) >= 0.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        Grid::new(std::f64::consts::PI, 8, 1.0, 10).unwrap()
    }

    #[test]
    fn grid_rejects_degenerate_sizes() {
        let err = Grid::new(-1.0, 1, 0.0, 1).unwrap_err().to_string();
        for key in ["length", "horizon", "cells", "steps"] {
            assert!(err.contains(key), "{err}");
        }
    }

    #[test]
    fn profiles_vanish_at_ends() {
        let l = std::f64::consts::PI;
        for p in [Profile::Sine, Profile::Parabola, Profile::Tent] {
            assert!(p.eval(0.0, l).abs() < 1e-15);
            assert!(p.eval(l, l).abs() < 1e-15);
        }
        assert!((Profile::Tent.eval(l / 2.0, l) - l / 2.0).abs() < 1e-15);
    }

    #[test]
    fn stability_examples() {
        let g = grid();
        let pair = SystemSpec::coupled_pair(1.0, 0.5, PairCase::BothNonzero);
        assert!(stability_condition(&pair, &g));
        assert_eq!(pair.stability_slack(&g), 0.0);
        let triple = SystemSpec::coupled_triple([1.0, 0.5, 0.3], TripleCase::OnlyFirst);
        assert!(stability_condition(&triple, &g));
        let bad = SystemSpec::constant(
            vec![1.0, 0.5],
            vec![1.0, 1.0],
            vec![vec![0.0, 1.0], vec![0.0, 1.0]],
            vec![Profile::Sine, Profile::Zero],
        );
        assert!(!stability_condition(&bad, &g));
    }

    #[test]
    fn time_dependent_coupling_is_checked_pointwise() {
        let g = grid();
        let mut spec = SystemSpec::coupled_pair(1.0, 0.5, PairCase::BothNonzero);
        spec.couplings[0][1] = Field::separable(|_| -1.0, |t| 1.0 + t);
        assert!(!stability_condition(&spec, &g));
        spec.couplings[0][0] = Field::separable(|_| 1.0, |t| 1.0 + t);
        assert!(stability_condition(&spec, &g));
    }

    #[test]
    fn validation_lists_every_problem() {
        let spec = SystemSpec::constant(
            vec![0.5, 0.7],
            vec![1.0, -1.0],
            vec![vec![-1.0, 0.0], vec![0.0, 1.0]],
            vec![Profile::Sine, Profile::Zero],
        );
        let msg = spec.validate(&grid()).unwrap_err().to_string();
        assert!(msg.contains("non-increasing") && msg.contains("diffusivity 1"), "{msg}");
        let spec = SystemSpec::constant(
            vec![0.5, 0.5],
            vec![1.0, 1.0],
            vec![vec![-1.0, 0.0], vec![0.0, 1.0]],
            vec![Profile::Sine, Profile::Zero],
        );
        let msg = spec.validate(&grid()).unwrap_err().to_string();
        assert!(msg.contains("c[0][0]"), "{msg}");
    }

    #[test]
    fn tabulated_field_reads_grid_values() {
        let g = grid();
        let values: Vec<f64> = (0..=g.steps)
            .flat_map(|n| (0..g.nodes()).map(move |i| (n * 100 + i) as f64))
            .collect();
        let f = Field::Tabulated {
            nodes: g.nodes(),
            values: Arc::new(values),
        };
        assert_eq!(f.on_grid(&g, 3, 2), 203.0);
    }
}
