//! Dense exact Gaussian elimination over the rationals.
//!
//! Only what the span oracle and the Jordan reduction need: row echelon
//! form, rank, kernel basis, solving a (possibly overdetermined) system and
//! deciding whether one linear equation is implied by others.

use num_traits::Zero;

use crate::scalar::Scalar;

/// Row-major rectangular matrix of rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl Dense {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Dense {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row");
            data.extend(row);
        }
        Dense {
            rows: n,
            cols,
            data,
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn push_row(&mut self, row: Vec<Scalar>) {
        assert_eq!(row.len(), self.cols, "ragged row");
        self.data.extend(row);
        self.rows += 1;
    }

    /// Appends the columns of `other` (same row count).
    pub fn hstack(&self, other: &Dense) -> Dense {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Dense {
            rows: self.rows,
            cols,
            data,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self.get(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(lead, p);
            let inv = self.get(lead, c).recip();
            for k in c..self.cols {
                let v = self.get(lead, k) * &inv;
                self.set(lead, k, v);
            }
            for r in 0..self.rows {
                if r == lead || self.get(r, c).is_zero() {
                    continue;
                }
                let factor = self.get(r, c).clone();
                for k in c..self.cols {
                    let v = self.get(r, k) - &factor * self.get(lead, k);
                    self.set(r, k, v);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel, one vector per free column, in column order.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = num_traits::One::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(r, free).clone();
            }
            basis.push(v);
        }
        basis
    }
}

/// Solves `m x = rhs`. Free variables are set to zero. `None` when inconsistent.
pub fn solve(m: &Dense, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows, rhs.len());
    let rhs_col = Dense::from_rows(rhs.iter().map(|v| vec![v.clone()]).collect(), 1);
    let mut aug = m.hstack(&rhs_col);
    let pivots = aug.rref();
    if pivots.last() == Some(&m.cols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); m.cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, m.cols).clone();
    }
    Some(x)
}

/// Does the linear system `rows` (each `coeffs | rhs`) imply the equation `eq`?
///
/// For a consistent system this is row-space membership; an inconsistent
/// system implies everything.
pub fn implies(rows: &[Vec<Scalar>], eq: &[Scalar]) -> bool {
    let width = eq.len();
    if rows.is_empty() {
        return eq.iter().all(Zero::is_zero);
    }
    let base = Dense::from_rows(rows.to_vec(), width);
    if is_inconsistent(&base) {
        return true;
    }
    let mut stacked = base.clone();
    stacked.push_row(eq.to_vec());
    stacked.rank() == base.rank()
}

/// An augmented system (last column = rhs) with a pivot in the rhs column.
pub fn is_inconsistent(aug: &Dense) -> bool {
    let mut m = aug.clone();
    m.rref().last() == Some(&(aug.cols - 1))
}
