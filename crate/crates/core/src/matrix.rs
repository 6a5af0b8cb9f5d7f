//! Dense 2×2 and 3×3 matrices over exact rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Coefficient, Error, Result};
use crate::linalg::Dense;
use crate::scalar::{self, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SmallMatrix {
    size: usize,
    entries: Vec<Scalar>,
}

fn check_size(size: usize) -> Result<()> {
    if size == 2 || size == 3 {
        Ok(())
    } else {
        Err(Error::UnsupportedSize(size))
    }
}

impl SmallMatrix {
    /// Row-major entries.
    pub fn new(size: usize, entries: Vec<Scalar>) -> Result<Self> {
        check_size(size)?;
        if entries.len() != size * size {
            return Err(Error::EntryCount {
                expected: size * size,
                got: entries.len(),
            });
        }
        Ok(SmallMatrix { size, entries })
    }

    pub fn from_ints(size: usize, entries: &[i64]) -> Result<Self> {
        Self::new(size, entries.iter().map(|&v| scalar::int(v)).collect())
    }

    pub fn m2(rows: [[i64; 2]; 2]) -> Self {
        Self::from_ints(2, rows.as_flattened()).expect("2x2")
    }

    pub fn m3(rows: [[i64; 3]; 3]) -> Self {
        Self::from_ints(3, rows.as_flattened()).expect("3x3")
    }

    pub fn zero(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(SmallMatrix {
            size,
            entries: vec![Scalar::zero(); size * size],
        })
    }

    pub fn identity(size: usize) -> Result<Self> {
        let mut m = Self::zero(size)?;
        for i in 0..size {
            m.entries[i * size + i] = Scalar::one();
        }
        Ok(m)
    }

    /// `E_ij` with 1-based indices.
    pub fn unit(size: usize, i: usize, j: usize) -> Result<Self> {
        let mut m = Self::zero(size)?;
        if i == 0 || j == 0 || i > size || j > size {
            return Err(Error::WrongSize {
                expected: size,
                got: i.max(j),
            });
        }
        m.entries[(i - 1) * size + (j - 1)] = Scalar::one();
        Ok(m)
    }

    /// 3×3 shorthand for `E_ij`.
    pub fn e(i: usize, j: usize) -> Self {
        Self::unit(3, i, j).expect("index in 1..=3")
    }

    /// `J₁ = E₁₂`.
    pub fn j1() -> Self {
        Self::e(1, 2)
    }

    /// `J₂ = E₁₂ + E₂₃`.
    pub fn j2() -> Self {
        &Self::e(1, 2) + &Self::e(2, 3)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// 0-based access.
    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.size + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        self.entries[row * self.size + col] = value;
    }

    /// Entry `a_k` in the row-major numbering `a_1 … a_9` (1-based).
    pub fn a(&self, k: usize) -> &Scalar {
        &self.entries[k - 1]
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        self.entries
            .chunks(self.size)
            .map(<[Scalar]>::to_vec)
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn try_mul(&self, rhs: &SmallMatrix) -> Result<SmallMatrix> {
        if self.size != rhs.size {
            return Err(Error::SizeMismatch(self.size, rhs.size));
        }
        let n = self.size;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero();
                for k in 0..n {
                    let (x, y) = (self.get(i, k), rhs.get(k, j));
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
                out.push(acc);
            }
        }
        Ok(SmallMatrix {
            size: n,
            entries: out,
        })
    }

    pub fn scale(&self, factor: &Scalar) -> SmallMatrix {
        SmallMatrix {
            size: self.size,
            entries: self.entries.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SmallMatrix {
        let mut acc = Self::identity(self.size).expect("valid size");
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn trace(&self) -> Scalar {
        (0..self.size).map(|i| self.get(i, i).clone()).sum()
    }

    /// Sum of the principal 2×2 minors (second characteristic coefficient).
    pub fn sigma2(&self) -> Result<Scalar> {
        if self.size != 3 {
            return Err(Error::WrongSize {
                expected: 3,
                got: self.size,
            });
        }
        let minor =
            |i: usize, j: usize| self.get(i, i) * self.get(j, j) - self.get(i, j) * self.get(j, i);
        Ok(minor(0, 1) + minor(0, 2) + minor(1, 2))
    }

    /// Cofactor expansion along the first row.
    pub fn det(&self) -> Scalar {
        let g = |i, j| self.get(i, j);
        match self.size {
            2 => g(0, 0) * g(1, 1) - g(0, 1) * g(1, 0),
            _ => {
                g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                    - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
            }
        }
    }

    /// First characteristic coefficient that fails to vanish, if any.
    pub fn nilpotency_defect(&self) -> Option<(Coefficient, Scalar)> {
        let tr = self.trace();
        if !tr.is_zero() {
            return Some((Coefficient::Trace, tr));
        }
        if self.size == 3 {
            let s2 = self.sigma2().expect("size 3");
            if !s2.is_zero() {
                return Some((Coefficient::Sigma2, s2));
            }
        }
        let det = self.det();
        if !det.is_zero() {
            return Some((Coefficient::Det, det));
        }
        None
    }

    /// `A^size = 0`.
    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.size as u32).is_zero()
    }

    /// Exact inverse via the adjugate.
    pub fn inverse(&self) -> Result<SmallMatrix> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        let n = self.size;
        let g = |i: usize, j: usize| self.get(i, j);
        let adj: Vec<Scalar> = if n == 2 {
            vec![g(1, 1).clone(), -g(0, 1), -g(1, 0), g(0, 0).clone()]
        } else {
            let mut out = Vec::with_capacity(9);
            for i in 0..3 {
                for j in 0..3 {
                    // adj[i][j] = cofactor(j, i)
                    let rows: Vec<usize> = (0..3).filter(|&r| r != j).collect();
                    let cols: Vec<usize> = (0..3).filter(|&c| c != i).collect();
                    let m = g(rows[0], cols[0]) * g(rows[1], cols[1])
                        - g(rows[0], cols[1]) * g(rows[1], cols[0]);
                    out.push(if (i + j) % 2 == 0 { m } else { -m });
                }
            }
            out
        };
        let inv_det = det.recip();
        Ok(SmallMatrix {
            size: n,
            entries: adj.into_iter().map(|v| v * &inv_det).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        self.to_dense().rank()
    }

    pub fn to_dense(&self) -> Dense {
        Dense::from_rows(self.rows(), self.size)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.size)
            .map(|i| (0..self.size).map(|k| self.get(i, k) * &v[k]).sum())
            .collect()
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<Scalar>]) -> Result<SmallMatrix> {
        let n = cols.len();
        check_size(n)?;
        let mut m = Self::zero(n)?;
        for (j, col) in cols.iter().enumerate() {
            if col.len() != n {
                return Err(Error::EntryCount {
                    expected: n,
                    got: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn is_strictly_upper(&self) -> bool {
        (0..self.size).all(|i| (0..=i).all(|j| self.get(i, j).is_zero()))
    }
}

/// Exact `g A g⁻¹`.
pub fn conjugate(g: &SmallMatrix, a: &SmallMatrix) -> Result<SmallMatrix> {
    let g_inv = g.inverse()?;
    conjugate_with(g, &g_inv, a)
}

/// `g A g⁻¹` with a precomputed inverse.
pub fn conjugate_with(
    g: &SmallMatrix,
    g_inv: &SmallMatrix,
    a: &SmallMatrix,
) -> Result<SmallMatrix> {
    g.try_mul(a)?.try_mul(g_inv)
}

/// `tr(m₁ m₂ ⋯ m_k)`.
pub fn trace_product(ms: &[SmallMatrix]) -> Result<Scalar> {
    trace_product_refs(&ms.iter().collect::<Vec<_>>())
}

pub fn trace_product_refs(ms: &[&SmallMatrix]) -> Result<Scalar> {
    let (first, rest) = ms.split_first().ok_or(Error::EmptyProduct)?;
    let Some((last, middle)) = rest.split_last() else {
        return Ok(first.trace());
    };
    let mut acc = (*first).clone();
    for m in middle {
        acc = acc.try_mul(m)?;
    }
    if acc.size != last.size {
        return Err(Error::SizeMismatch(acc.size, last.size));
    }
    // tr(XY) without forming XY.
    let n = acc.size;
    let mut tr = Scalar::zero();
    for i in 0..n {
        for k in 0..n {
            let (x, y) = (acc.get(i, k), last.get(k, i));
            if !x.is_zero() && !y.is_zero() {
                tr += x * y;
            }
        }
    }
    Ok(tr)
}

impl Mul for &SmallMatrix {
    type Output = SmallMatrix;
    fn mul(self, rhs: &SmallMatrix) -> SmallMatrix {
        self.try_mul(rhs).expect("matrix sizes must match")
    }
}

impl Add for &SmallMatrix {
    type Output = SmallMatrix;
    fn add(self, rhs: &SmallMatrix) -> SmallMatrix {
        assert_eq!(self.size, rhs.size, "matrix sizes must match");
        SmallMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &SmallMatrix {
    type Output = SmallMatrix;
    fn sub(self, rhs: &SmallMatrix) -> SmallMatrix {
        assert_eq!(self.size, rhs.size, "matrix sizes must match");
        SmallMatrix {
            size: self.size,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &SmallMatrix {
    type Output = SmallMatrix;
    fn neg(self) -> SmallMatrix {
        SmallMatrix {
            size: self.size,
            entries: self.entries.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for SmallMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(scalar::format).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn e2(i: usize, j: usize) -> SmallMatrix {
        SmallMatrix::unit(2, i, j).unwrap()
    }

    #[test]
    fn trace_product_examples() {
        assert_eq!(trace_product(&[e2(1, 2), e2(2, 1)]).unwrap(), int(1));
        assert_eq!(trace_product(&[e2(1, 2), e2(1, 2)]).unwrap(), int(0));
        assert_eq!(
            trace_product(&[SmallMatrix::j2(), SmallMatrix::e(3, 2)]).unwrap(),
            int(1)
        );
        assert_eq!(
            trace_product(&[e2(1, 2), SmallMatrix::j2()]),
            Err(Error::SizeMismatch(2, 3))
        );
        assert_eq!(trace_product(&[]), Err(Error::EmptyProduct));
    }

    #[test]
    fn sigma2_examples() {
        assert_eq!(SmallMatrix::identity(3).unwrap().sigma2().unwrap(), int(3));
        assert_eq!(SmallMatrix::j2().sigma2().unwrap(), int(0));
        let c = SmallMatrix::m3([[0, -1, -1], [0, 1, 1], [1, 0, -1]]);
        assert_eq!(c.sigma2().unwrap(), int(0));
        assert!(matches!(e2(1, 1).sigma2(), Err(Error::WrongSize { .. })));
    }

    #[test]
    fn nilpotency_examples() {
        assert!(SmallMatrix::j2().is_nilpotent());
        assert!(!SmallMatrix::e(1, 1).is_nilpotent());
        let d = SmallMatrix::m3([[0, 0, 0], [0, 1, 1], [0, -1, -1]]);
        assert!(d.is_nilpotent());
        assert!((&d * &d).is_zero());
        assert_eq!(
            SmallMatrix::e(1, 1).nilpotency_defect(),
            Some((Coefficient::Trace, int(1)))
        );
        // trace 0, sigma2 = -1
        let rot = SmallMatrix::m3([[0, 1, 0], [1, 0, 0], [0, 0, 0]]);
        assert_eq!(rot.nilpotency_defect().unwrap().0, Coefficient::Sigma2);
    }

    #[test]
    fn conjugation_examples() {
        let id = SmallMatrix::identity(3).unwrap();
        assert_eq!(
            conjugate(&id, &SmallMatrix::j2()).unwrap(),
            SmallMatrix::j2()
        );
        let swap = SmallMatrix::m3([[0, 1, 0], [1, 0, 0], [0, 0, 1]]);
        assert_eq!(
            conjugate(&swap, &SmallMatrix::e(2, 1)).unwrap(),
            SmallMatrix::e(1, 2)
        );
        let singular = SmallMatrix::e(1, 1);
        assert_eq!(
            conjugate(&singular, &SmallMatrix::j2()),
            Err(Error::Singular)
        );
    }

    #[test]
    fn inverse_roundtrip() {
        let g = SmallMatrix::m3([[2, 1, 0], [1, 1, 3], [0, -1, 1]]);
        let gi = g.inverse().unwrap();
        assert_eq!(&g * &gi, SmallMatrix::identity(3).unwrap());
        let h = SmallMatrix::m2([[3, 1], [5, 2]]);
        assert_eq!(
            &h.inverse().unwrap() * &h,
            SmallMatrix::identity(2).unwrap()
        );
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(SmallMatrix::zero(4), Err(Error::UnsupportedSize(4)));
        assert!(SmallMatrix::from_ints(3, &[1, 2]).is_err());
    }
}
