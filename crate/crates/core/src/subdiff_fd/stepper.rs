use super::banded::{BandedMatrix, Factorization};
use super::l1::l1_weights;
use super::{Grid, History, SystemSpec};
use crate::error::{Error, Result};
use crate::mittag_leffler::gamma_fn;

/// Time discretization of the coupling terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Couplings and sources lagged to `t_n`; components decouple.
    SemiImplicit,
    /// Couplings and sources at `t_{n+1}`; one banded block solve per step.
    FullyImplicit,
}

/// `r_k = d_k Γ(2-α_k) Δt^{α_k} / Δx²` and `s_k = Δx² r_k / d_k`.
fn ratios(spec: &SystemSpec, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>)> {
    let (dt, dx) = (grid.dt(), grid.dx());
    let mut r = Vec::with_capacity(spec.components());
    let mut s = Vec::with_capacity(spec.components());
    for (&a, &d) in spec.orders.iter().zip(&spec.diffusivities) {
        let rk = d * gamma_fn(2.0 - a)? * dt.powf(a) / (dx * dx);
        r.push(rk);
        s.push(dx * dx * rk / d);
    }
    Ok((r, s))
}

fn assemble(spec: &SystemSpec, grid: &Grid, n: usize, r: &[f64], s: &[f64]) -> BandedMatrix {
    let k = spec.components();
    let interior = grid.cells - 1;
    let mut a = BandedMatrix::zeros(interior * k, k, k);
    for i in 1..grid.cells {
        for row in 0..k {
            let p = (i - 1) * k + row;
            for col in 0..k {
                let c = spec.couplings[row][col].on_grid(grid, i, n);
                if col == row {
                    a.set(p, p, 1.0 + 2.0 * r[row] + s[row] * c);
                } else {
                    a.set(p, (i - 1) * k + col, s[row] * c);
                }
            }
            if i > 1 {
                a.set(p, p - k, -r[row]);
            }
            if i + 1 < grid.cells {
                a.set(p, p + k, -r[row]);
            }
        }
    }
    a
}

/// Fully implicit system matrix at level `n`, unknowns interleaved by node.
pub fn assemble_block_matrix(spec: &SystemSpec, grid: &Grid, n: usize) -> Result<BandedMatrix> {
    let (r, s) = ratios(spec, grid)?;
    Ok(assemble(spec, grid, n, &r, &s))
}

fn tridiagonal(size: usize, r: f64) -> BandedMatrix {
    let mut m = BandedMatrix::zeros(size, 1, 1);
    for i in 0..size {
        m.set(i, i, 1.0 + 2.0 * r);
        if i > 0 {
            m.set(i, i - 1, -r);
        }
        if i + 1 < size {
            m.set(i, i + 1, -r);
        }
    }
    m
}

fn at_level(e: Error, level: usize) -> Error {
    match e {
        Error::Singular { detail, .. } => Error::Singular { level, detail },
        other => other,
    }
}

/// Advances a [`History`] one level at a time, caching weights and
/// factorizations that do not change between steps.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    spec: &'a SystemSpec,
    grid: Grid,
    scheme: Scheme,
    r: Vec<f64>,
    s: Vec<f64>,
    b: Vec<Vec<f64>>,
    diffs: Vec<Vec<f64>>,
    tridiag: Vec<Factorization>,
    block: Option<Factorization>,
}

impl<'a> Stepper<'a> {
    pub fn new(spec: &'a SystemSpec, grid: &Grid, scheme: Scheme) -> Result<Self> {
        spec.validate(grid)?;
        let (r, s) = ratios(spec, grid)?;
        let mut b = Vec::new();
        let mut diffs = Vec::new();
        for &a in &spec.orders {
            let w = l1_weights(a, grid.steps)?;
            diffs.push(w.differences());
            b.push(w.b);
        }
        let mut tridiag = Vec::new();
        let mut block = None;
        match scheme {
            Scheme::SemiImplicit => {
                for &rk in &r {
                    tridiag.push(Factorization::new(&tridiagonal(grid.cells - 1, rk)).map_err(|e| at_level(e, 1))?);
                }
            }
            Scheme::FullyImplicit => {
                if spec.couplings_are_constant() {
                    let a = assemble(spec, grid, 1, &r, &s);
                    block = Some(Factorization::new(&a).map_err(|e| at_level(e, 1))?);
                }
            }
        }
        Ok(Self {
            spec,
            grid: *grid,
            scheme,
            r,
            s,
            b,
            diffs,
            tridiag,
            block,
        })
    }

    pub fn ratios(&self) -> &[f64] {
        &self.r
    }

    /// `b^n u⁰ + Σ_{j=1}^{n} (b^{n-j} - b^{n-j+1}) u^j` for every component,
    /// laid out like a history level.
    pub fn history_term(&self, history: &History, n: usize) -> Vec<f64> {
        let nodes = history.nodes();
        let k = history.components();
        let mut acc = vec![0.0; k * nodes];
        for c in 0..k {
            let out = &mut acc[c * nodes..(c + 1) * nodes];
            let b0 = self.b[c][n];
            if b0 != 0.0 {
                for (o, u) in out.iter_mut().zip(history.component(0, c)) {
                    *o = b0 * u;
                }
            }
            let d = &self.diffs[c];
            for j in 1..=n {
                let w = d[n - j];
                if w != 0.0 {
                    for (o, u) in out.iter_mut().zip(history.component(j, c)) {
                        *o += w * u;
                    }
                }
            }
        }
        acc
    }

    /// Compute level `n + 1` from levels `0..=n`.
    pub fn next_level(&self, history: &History, n: usize) -> Result<Vec<f64>> {
        if n + 1 > self.grid.steps {
            return Err(Error::Domain(format!("level {} beyond the last step {}", n + 1, self.grid.steps)));
        }
        if history.levels() < n + 1 {
            return Err(Error::Domain(format!("history holds {} levels, level {n} required", history.levels())));
        }
        let grid = &self.grid;
        let k = self.spec.components();
        let nodes = grid.nodes();
        let interior = grid.cells - 1;
        let hist = self.history_term(history, n);
        let mut next = vec![0.0; k * nodes];
        match self.scheme {
            Scheme::SemiImplicit => {
                let current = history.level(n);
                for c in 0..k {
                    let mut rhs = vec![0.0; interior];
                    for i in 1..grid.cells {
                        let mut coupling = 0.0;
                        for l in 0..k {
                            coupling += self.spec.couplings[c][l].on_grid(grid, i, n) * current[l * nodes + i];
                        }
                        let f = self.spec.sources[c].on_grid(grid, i, n);
                        rhs[i - 1] = hist[c * nodes + i] + self.s[c] * (-coupling + f);
                    }
                    let x = self.tridiag[c].solve(&rhs);
                    next[c * nodes + 1..c * nodes + grid.cells].copy_from_slice(&x);
                }
            }
            Scheme::FullyImplicit => {
                let mut rhs = vec![0.0; interior * k];
                for i in 1..grid.cells {
                    for c in 0..k {
                        let f = self.spec.sources[c].on_grid(grid, i, n + 1);
                        rhs[(i - 1) * k + c] = hist[c * nodes + i] + self.s[c] * f;
                    }
                }
                let x = match &self.block {
                    Some(lu) => lu.solve(&rhs),
                    None => {
                        let a = assemble(self.spec, grid, n + 1, &self.r, &self.s);
                        Factorization::new(&a).map_err(|e| at_level(e, n + 1))?.solve(&rhs)
                    }
                };
                for i in 1..grid.cells {
                    for c in 0..k {
                        next[c * nodes + i] = x[(i - 1) * k + c];
                    }
                }
            }
        }
        if let Some(p) = next.iter().position(|v| !v.is_finite()) {
            return Err(Error::Singular {
                level: n + 1,
                detail: format!("non-finite value in component {} at node {}", p / nodes, p % nodes),
            });
        }
        Ok(next)
    }

    /// Append the next level to `history`.
    pub fn step(&self, history: &mut History) -> Result<()> {
        let n = history.levels() - 1;
        let next = self.next_level(history, n)?;
        history.push(&next);
        Ok(())
    }
}

/// Level `n + 1` of the semi-implicit scheme.
pub fn step_semi_implicit(spec: &SystemSpec, grid: &Grid, history: &History, n: usize) -> Result<Vec<f64>> {
    Stepper::new(spec, grid, Scheme::SemiImplicit)?.next_level(history, n)
}

/// Level `n + 1` of the fully implicit scheme.
pub fn step_fully_implicit(spec: &SystemSpec, grid: &Grid, history: &History, n: usize) -> Result<Vec<f64>> {
    Stepper::new(spec, grid, Scheme::FullyImplicit)?.next_level(history, n)
}

/// Run all `N` steps from the initial data.
pub fn simulate(spec: &SystemSpec, grid: &Grid, scheme: Scheme) -> Result<History> {
    let stepper = Stepper::new(spec, grid, scheme)?;
    let mut history = History::new(spec, grid);
    for _ in 0..grid.steps {
        stepper.step(&mut history)?;
    }
    Ok(history)
}
