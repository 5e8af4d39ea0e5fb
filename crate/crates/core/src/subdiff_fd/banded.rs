use crate::error::{Error, Result};

/// Square band matrix with `kl` sub- and `ku` super-diagonals, stored by
/// rows: entry `(r, c)` lives at `data[r * (kl + ku + 1) + c + kl - r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    pub n: usize,
    pub kl: usize,
    pub ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self {
            n,
            kl,
            ku,
            data: vec![0.0; n * (kl + ku + 1)],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn width(&self) -> usize {
        self.kl + self.ku + 1
    }

    fn in_band(&self, r: usize, c: usize) -> bool {
        r < self.n && c < self.n && c + self.kl >= r && c <= r + self.ku
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        if self.in_band(r, c) {
            self.data[r * self.width() + c + self.kl - r]
        } else {
            0.0
        }
    }

    /// Set an entry inside the band.
    ///
    /// # Panics
    /// Panics when `(r, c)` lies outside the band.
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        assert!(self.in_band(r, c), "({r}, {c}) outside band kl={} ku={}", self.kl, self.ku);
        let w = self.width();
        self.data[r * w + c + self.kl - r] = v;
    }

    pub fn add(&mut self, r: usize, c: usize, v: f64) {
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    /// Column range of row `r` inside the band.
    pub fn row_span(&self, r: usize) -> std::ops::Range<usize> {
        r.saturating_sub(self.kl)..(r + self.ku + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|r| self.row_span(r).map(|c| self.get(r, c) * x[c]).sum())
            .collect()
    }

    /// Row-wise `|a_rr| ≥ Σ_{c≠r} |a_rc|`.
    pub fn is_diagonally_dominant(&self) -> bool {
        gershgorin_disks(self).iter().all(|&(c, r)| c.abs() >= r)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c)).collect()).collect()
    }
}

/// One Gershgorin disk `(center, radius)` per row.
pub fn gershgorin_disks(m: &BandedMatrix) -> Vec<(f64, f64)> {
    (0..m.n)
        .map(|r| {
            let radius = m.row_span(r).filter(|&c| c != r).map(|c| m.get(r, c).abs()).sum();
            (m.get(r, r), radius)
        })
        .collect()
}

/// `min_r (|center_r| - radius_r)` over the Gershgorin disks.
pub fn gershgorin_margin(m: &BandedMatrix) -> f64 {
    gershgorin_disks(m)
        .iter()
        .map(|&(c, r)| c.abs() - r)
        .fold(f64::INFINITY, f64::min)
}

/// True when every disk keeps distance at least 1 from the origin, i.e.
/// `|center| - radius ≥ 1`, allowing for rounding in the assembled entries.
pub fn disks_outside_unit_ball(m: &BandedMatrix) -> bool {
    gershgorin_disks(m)
        .iter()
        .all(|&(c, r)| c.abs() - r >= 1.0 - 64.0 * f64::EPSILON * c.abs())
}

/// A factorization that can be applied to many right-hand sides.
#[derive(Debug, Clone)]
pub enum Factorization {
    Thomas(Thomas),
    Lu(BandedLu),
}

impl Factorization {
    /// Thomas elimination for tridiagonal matrices, banded LU without
    /// pivoting for diagonally dominant ones, partial pivoting otherwise.
    pub fn new(m: &BandedMatrix) -> Result<Self> {
        if m.kl <= 1 && m.ku <= 1 {
            if let Ok(t) = Thomas::new(m) {
                return Ok(Factorization::Thomas(t));
            }
        }
        let pivoting = !m.is_diagonally_dominant();
        Ok(Factorization::Lu(BandedLu::new(m, pivoting)?))
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        match self {
            Factorization::Thomas(t) => t.solve(rhs),
            Factorization::Lu(lu) => lu.solve(rhs),
        }
    }
}

/// Solve `m x = rhs`.
pub fn banded_solve(m: &BandedMatrix, rhs: &[f64]) -> Result<Vec<f64>> {
    if rhs.len() != m.n {
        return Err(Error::Domain(format!("rhs length {} does not match matrix size {}", rhs.len(), m.n)));
    }
    Ok(Factorization::new(m)?.solve(rhs))
}

fn singular(detail: String) -> Error {
    Error::Singular { level: 0, detail }
}

fn pivot_floor(m: &BandedMatrix) -> f64 {
    let scale = (0..m.n)
        .flat_map(|r| m.row_span(r).map(move |c| (r, c)))
        .map(|(r, c)| m.get(r, c).abs())
        .fold(0.0, f64::max);
    scale * f64::EPSILON * m.n.max(1) as f64
}

/// Thomas algorithm, with the forward sweep stored for reuse.
#[derive(Debug, Clone)]
pub struct Thomas {
    sub: Vec<f64>,
    c_prime: Vec<f64>,
    denom: Vec<f64>,
}

impl Thomas {
    pub fn new(m: &BandedMatrix) -> Result<Self> {
        let n = m.n;
        let floor = pivot_floor(m);
        let mut sub = vec![0.0; n];
        let mut c_prime = vec![0.0; n];
        let mut denom = vec![0.0; n];
        for i in 0..n {
            let a = if i > 0 { m.get(i, i - 1) } else { 0.0 };
            let b = m.get(i, i);
            let c = if i + 1 < n { m.get(i, i + 1) } else { 0.0 };
            let d = if i > 0 { b - a * c_prime[i - 1] } else { b };
            if !(d.abs() > floor) {
                return Err(singular(format!("zero pivot in Thomas sweep at row {i}")));
            }
            sub[i] = a;
            denom[i] = d;
            c_prime[i] = c / d;
        }
        Ok(Self { sub, c_prime, denom })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut x = vec![0.0; n];
        for i in 0..n {
            let prev = if i > 0 { x[i - 1] } else { 0.0 };
            x[i] = (rhs[i] - self.sub[i] * prev) / self.denom[i];
        }
        for i in (0..n.saturating_sub(1)).rev() {
            x[i] -= self.c_prime[i] * x[i + 1];
        }
        x
    }
}

/// Banded LU factorization. With pivoting the upper bandwidth of `U`
/// grows to `kl + ku`.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    ku: usize,
    // rows of width 2kl+ku+1, column c of row r at index c + kl - r
    ab: Vec<f64>,
    perm: Option<Vec<usize>>,
}

impl BandedLu {
    pub fn new(m: &BandedMatrix, pivoting: bool) -> Result<Self> {
        let (n, kl) = (m.n, m.kl);
        let ku = if pivoting { m.kl + m.ku } else { m.ku };
        let w = kl + ku + 1;
        let mut ab = vec![0.0; n * w];
        for r in 0..n {
            for c in m.row_span(r) {
                ab[r * w + c + kl - r] = m.get(r, c);
            }
        }
        let idx = |r: usize, c: usize| r * w + c + kl - r;
        let floor = pivot_floor(m);
        let mut perm = if pivoting { Some(vec![0; n]) } else { None };
        for j in 0..n {
            let last_row = (j + kl).min(n - 1);
            let last_col = (j + ku).min(n - 1);
            if let Some(p) = perm.as_mut() {
                let mut best = j;
                for r in j + 1..=last_row {
                    if ab[idx(r, j)].abs() > ab[idx(best, j)].abs() {
                        best = r;
                    }
                }
                p[j] = best;
                if best != j {
                    for c in j..=last_col {
                        ab.swap(idx(j, c), idx(best, c));
                    }
                }
            }
            let piv = ab[idx(j, j)];
            if !(piv.abs() > floor) {
                return Err(singular(format!("pivot {piv:e} at column {j}")));
            }
            for r in j + 1..=last_row {
                let f = ab[idx(r, j)] / piv;
                ab[idx(r, j)] = f;
                if f != 0.0 {
                    for c in j + 1..=last_col {
                        ab[idx(r, c)] -= f * ab[idx(j, c)];
                    }
                }
            }
        }
        Ok(Self { n, kl, ku, ab, perm })
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (n, kl, ku) = (self.n, self.kl, self.ku);
        let w = kl + ku + 1;
        let idx = |r: usize, c: usize| r * w + c + kl - r;
        let mut x = rhs.to_vec();
        for j in 0..n {
            if let Some(p) = &self.perm {
                x.swap(j, p[j]);
            }
            let xj = x[j];
            for r in j + 1..=(j + kl).min(n.saturating_sub(1)) {
                x[r] -= self.ab[idx(r, j)] * xj;
            }
        }
        for j in (0..n).rev() {
            let mut s = x[j];
            for c in j + 1..=(j + ku).min(n - 1) {
                s -= self.ab[idx(j, c)] * x[c];
            }
            x[j] = s / self.ab[idx(j, j)];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &BandedMatrix, x: &[f64], b: &[f64]) -> f64 {
        let r = m.matvec(x);
        let num: f64 = r.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
        let den: f64 = b.iter().map(|q| q * q).sum::<f64>().sqrt();
        num / den
    }

    #[test]
    fn identity_leaves_rhs_unchanged() {
        let m = BandedMatrix::identity(4);
        let b = [1.0, -2.0, 3.5, 0.25];
        assert_eq!(banded_solve(&m, &b).unwrap(), b.to_vec());
        assert!(gershgorin_disks(&m).iter().all(|&d| d == (1.0, 0.0)));
    }

    #[test]
    fn two_by_two_closed_form() {
        let mut m = BandedMatrix::zeros(2, 1, 1);
        m.set(0, 0, 2.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 3.0);
        let x = banded_solve(&m, &[3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
    }

    #[test]
    fn pivoting_handles_a_zero_diagonal() {
        let mut m = BandedMatrix::zeros(3, 1, 1);
        m.set(0, 0, 0.0);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.0);
        m.set(1, 1, 1.0);
        m.set(1, 2, 2.0);
        m.set(2, 1, 1.0);
        m.set(2, 2, 1.0);
        let b = [1.0, 2.0, 3.0];
        let x = banded_solve(&m, &b).unwrap();
        assert!(residual(&m, &x, &b) < 1e-14);
        assert!(matches!(Factorization::new(&m).unwrap(), Factorization::Lu(_)));
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut m = BandedMatrix::zeros(2, 1, 1);
        m.set(0, 0, 1.0);
        m.set(0, 1, 2.0);
        m.set(1, 0, 2.0);
        m.set(1, 1, 4.0);
        assert!(matches!(banded_solve(&m, &[1.0, 1.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn pentadiagonal_without_pivoting() {
        let n = 9;
        let mut m = BandedMatrix::zeros(n, 2, 2);
        for i in 0..n {
            m.set(i, i, 6.0 + i as f64 * 0.1);
            for d in 1..=2usize {
                if i + d < n {
                    m.set(i, i + d, -1.0 / d as f64);
                    m.set(i + d, i, 0.5 / d as f64);
                }
            }
        }
        let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let x = banded_solve(&m, &b).unwrap();
        assert!(residual(&m, &x, &b) < 1e-14);
        let margin = gershgorin_margin(&m);
        assert!(margin > 0.0 && m.is_diagonally_dominant());
    }
}
