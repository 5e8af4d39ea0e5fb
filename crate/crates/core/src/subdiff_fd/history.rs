use super::{Grid, SystemSpec};

/// Space-time solution stored densely as `[level][component][node]`.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    components: usize,
    nodes: usize,
    levels: usize,
    values: Vec<f64>,
}

impl History {
    /// A history holding only level 0, the sampled initial data with the
    /// boundary nodes set to zero.
    pub fn new(spec: &SystemSpec, grid: &Grid) -> Self {
        let k = spec.components();
        let nodes = grid.nodes();
        let mut values = Vec::with_capacity((grid.steps + 1) * k * nodes);
        for profile in &spec.initials {
            values.push(0.0);
            for i in 1..grid.cells {
                values.push(profile.eval(grid.x(i), grid.length));
            }
            values.push(0.0);
        }
        Self {
            components: k,
            nodes,
            levels: 1,
            values,
        }
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Number of populated time levels.
    pub fn levels(&self) -> usize {
        self.levels
    }

    /// All components at level `n`, component-major.
    pub fn level(&self, n: usize) -> &[f64] {
        let w = self.components * self.nodes;
        &self.values[n * w..(n + 1) * w]
    }

    pub fn component(&self, n: usize, k: usize) -> &[f64] {
        let start = (n * self.components + k) * self.nodes;
        &self.values[start..start + self.nodes]
    }

    /// Append a level. Boundary nodes are forced to zero.
    ///
    /// # Panics
    /// Panics when the level does not hold `components * nodes` values.
    pub fn push(&mut self, level: &[f64]) {
        assert_eq!(level.len(), self.components * self.nodes, "level size mismatch");
        let start = self.values.len();
        self.values.extend_from_slice(level);
        for k in 0..self.components {
            self.values[start + k * self.nodes] = 0.0;
            self.values[start + (k + 1) * self.nodes - 1] = 0.0;
        }
        self.levels += 1;
    }
}
