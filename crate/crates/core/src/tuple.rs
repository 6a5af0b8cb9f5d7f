use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{self, SmallMatrix};

/// An ordered tuple of nilpotent matrices of one common size.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NilTuple {
    size: usize,
    mats: Vec<SmallMatrix>,
}

impl NilTuple {
    /// Validates sizes and nilpotency of every member.
    ///
    /// The error names the first failing matrix (1-based) and the first
    /// characteristic coefficient that does not vanish.
    pub fn new(size: usize, mats: Vec<SmallMatrix>) -> Result<Self> {
        if size != 2 && size != 3 {
            return Err(Error::UnsupportedSize(size));
        }
        for (i, m) in mats.iter().enumerate() {
            if m.size() != size {
                return Err(Error::SizeMismatch(size, m.size()));
            }
            if let Some((coefficient, value)) = m.nilpotency_defect() {
                return Err(Error::NotNilpotent {
                    index: i + 1,
                    coefficient,
                    value: crate::scalar::format(&value),
                });
            }
        }
        Ok(NilTuple { size, mats })
    }

    /// Size taken from the first matrix.
    pub fn from_mats(mats: Vec<SmallMatrix>) -> Result<Self> {
        let size = mats.first().map_or(3, SmallMatrix::size);
        Self::new(size, mats)
    }

    pub fn zeros(size: usize, d: usize) -> Result<Self> {
        Self::new(size, vec![SmallMatrix::zero(size)?; d])
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn d(&self) -> usize {
        self.mats.len()
    }

    pub fn mats(&self) -> &[SmallMatrix] {
        &self.mats
    }

    /// 1-based access.
    pub fn mat(&self, index: usize) -> &SmallMatrix {
        &self.mats[index - 1]
    }

    pub fn into_mats(self) -> Vec<SmallMatrix> {
        self.mats
    }

    /// Simultaneous conjugation `(g A₁ g⁻¹, …, g A_d g⁻¹)`.
    pub fn conjugate(&self, g: &SmallMatrix) -> Result<NilTuple> {
        let g_inv = g.inverse()?;
        self.conjugate_with(g, &g_inv)
    }

    pub fn conjugate_with(&self, g: &SmallMatrix, g_inv: &SmallMatrix) -> Result<NilTuple> {
        if g.size() != self.size {
            return Err(Error::SizeMismatch(self.size, g.size()));
        }
        let mats = self
            .mats
            .iter()
            .map(|a| matrix::conjugate_with(g, g_inv, a))
            .collect::<Result<Vec<_>>>()?;
        // similarity preserves nilpotency
        Ok(NilTuple {
            size: self.size,
            mats,
        })
    }

    /// Keeps the matrices at the given 1-based positions, in that order.
    pub fn select(&self, indices: &[usize]) -> NilTuple {
        NilTuple {
            size: self.size,
            mats: indices.iter().map(|&i| self.mats[i - 1].clone()).collect(),
        }
    }

    /// Appends zero matrices up to `d` members.
    pub fn pad_to(&self, d: usize) -> NilTuple {
        let mut mats = self.mats.clone();
        while mats.len() < d {
            mats.push(SmallMatrix::zero(self.size).expect("valid size"));
        }
        NilTuple {
            size: self.size,
            mats,
        }
    }
}

impl fmt::Display for NilTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.mats.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Coefficient;

    #[test]
    fn rejects_non_nilpotent_with_index() {
        let err = NilTuple::new(3, vec![SmallMatrix::j2(), SmallMatrix::e(2, 2)]).unwrap_err();
        match err {
            Error::NotNilpotent {
                index, coefficient, ..
            } => {
                assert_eq!(index, 2);
                assert_eq!(coefficient, Coefficient::Trace);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_mixed_sizes() {
        let m2 = SmallMatrix::unit(2, 1, 2).unwrap();
        assert!(NilTuple::new(3, vec![SmallMatrix::j2(), m2]).is_err());
    }

    #[test]
    fn conjugation_stays_nilpotent() {
        let t = NilTuple::new(3, vec![SmallMatrix::j2(), SmallMatrix::e(3, 1)]).unwrap();
        let g = SmallMatrix::m3([[1, 2, 0], [0, 1, -1], [3, 0, 1]]);
        let c = t.conjugate(&g).unwrap();
        assert!(c.mats().iter().all(SmallMatrix::is_nilpotent));
    }
}
