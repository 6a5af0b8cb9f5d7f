//! Canonical forms under conjugation.
//!
//! * [`nilpotent_jordan`] brings a nilpotent 3×3 matrix to `0`, `J₁` or `J₂`.
//! * [`stab_canon_j1`] / [`stab_canon_j2`] normalize a second matrix using
//!   only changes of basis that fix `J₁` (resp. `J₂`), landing in one of the
//!   templates `V_I–V_IV` (resp. `W_I–W_V`).
//! * [`classify_pair`] reduces a pair of tuples to one of the five cases
//!   `(J₂,J₂)`, `(J₂,J₁)`, `(J₁,J₁)`, `(J₁,0)`, `(J₂,0)` for the first matrices.
//!
//! Entries are numbered row-major `a₁ … a₉` throughout.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Dense;
use crate::matrix::SmallMatrix;
use crate::scalar::Scalar;
use crate::tuple::NilTuple;

/// An invertible 3×3 matrix together with its exact inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeOfBasis {
    g: SmallMatrix,
    g_inv: SmallMatrix,
}

impl ChangeOfBasis {
    pub fn new(g: SmallMatrix) -> Result<Self> {
        let g_inv = g.inverse()?;
        Ok(ChangeOfBasis { g, g_inv })
    }

    pub fn identity() -> Self {
        let id = SmallMatrix::identity(3).expect("3x3");
        ChangeOfBasis {
            g: id.clone(),
            g_inv: id,
        }
    }

    pub fn g(&self) -> &SmallMatrix {
        &self.g
    }

    pub fn g_inv(&self) -> &SmallMatrix {
        &self.g_inv
    }

    pub fn is_identity(&self) -> bool {
        self.g == SmallMatrix::identity(3).expect("3x3")
    }

    /// `g A g⁻¹`.
    pub fn apply(&self, a: &SmallMatrix) -> SmallMatrix {
        &(&self.g * a) * &self.g_inv
    }

    pub fn apply_tuple(&self, t: &NilTuple) -> NilTuple {
        t.conjugate_with(&self.g, &self.g_inv)
            .expect("sizes checked")
    }

    /// `self ∘ first`: apply `first`, then `self`.
    pub fn after(&self, first: &ChangeOfBasis) -> ChangeOfBasis {
        ChangeOfBasis {
            g: &self.g * &first.g,
            g_inv: &first.g_inv * &self.g_inv,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum JordanTag {
    Zero,
    J1,
    J2,
}

impl JordanTag {
    pub fn matrix(self) -> SmallMatrix {
        match self {
            JordanTag::Zero => SmallMatrix::zero(3).expect("3x3"),
            JordanTag::J1 => SmallMatrix::j1(),
            JordanTag::J2 => SmallMatrix::j2(),
        }
    }

    pub fn rank(self) -> usize {
        match self {
            JordanTag::Zero => 0,
            JordanTag::J1 => 1,
            JordanTag::J2 => 2,
        }
    }
}

impl fmt::Display for JordanTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            JordanTag::Zero => "0",
            JordanTag::J1 => "J1",
            JordanTag::J2 => "J2",
        })
    }
}

/// Template tags for the stabilizer normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CanonKind {
    VI,
    VII,
    VIII,
    VIV,
    WI,
    WII,
    WIII,
    WIV,
    WV,
}

impl CanonKind {
    pub const V: [CanonKind; 4] = [
        CanonKind::VI,
        CanonKind::VII,
        CanonKind::VIII,
        CanonKind::VIV,
    ];
    pub const W: [CanonKind; 5] = [
        CanonKind::WI,
        CanonKind::WII,
        CanonKind::WIII,
        CanonKind::WIV,
        CanonKind::WV,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CanonKind::VI => "V_I",
            CanonKind::VII => "V_II",
            CanonKind::VIII => "V_III",
            CanonKind::VIV => "V_IV",
            CanonKind::WI => "W_I",
            CanonKind::WII => "W_II",
            CanonKind::WIII => "W_III",
            CanonKind::WIV => "W_IV",
            CanonKind::WV => "W_V",
        }
    }
}

impl fmt::Display for CanonKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonResult {
    pub g: ChangeOfBasis,
    pub kind: CanonKind,
    pub matrix: SmallMatrix,
}

fn require_nilpotent3(a: &SmallMatrix) -> Result<()> {
    if a.size() != 3 {
        return Err(Error::WrongSize {
            expected: 3,
            got: a.size(),
        });
    }
    if let Some((coefficient, value)) = a.nilpotency_defect() {
        return Err(Error::NotNilpotent {
            index: 1,
            coefficient,
            value: crate::scalar::format(&value),
        });
    }
    Ok(())
}

fn unit_vec(i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); 3];
    v[i] = Scalar::one();
    v
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Change of basis `g` with `g A g⁻¹ ∈ {0, J₁, J₂}`.
///
/// Rank 2: the first standard vector `v` with `A²v ≠ 0` gives the basis
/// `(A²v, Av, v)`. Rank 1: the first `v` with `Av ≠ 0` gives `(Av, v, k)`
/// where `k` is the first kernel basis vector independent of `Av`.
pub fn nilpotent_jordan(a: &SmallMatrix) -> Result<(ChangeOfBasis, JordanTag)> {
    require_nilpotent3(a)?;
    let a2 = a * a;
    let basis = match a.rank() {
        0 => return Ok((ChangeOfBasis::identity(), JordanTag::Zero)),
        2 => {
            let v = (0..3)
                .map(unit_vec)
                .find(|v| !is_zero_vec(&a2.mul_vec(v)))
                .expect("rank 2 nilpotent has A^2 != 0");
            let av = a.mul_vec(&v);
            let a2v = a.mul_vec(&av);
            (vec![a2v, av, v], JordanTag::J2)
        }
        _ => {
            let v = (0..3)
                .map(unit_vec)
                .find(|v| !is_zero_vec(&a.mul_vec(v)))
                .expect("rank 1 matrix is nonzero");
            let av = a.mul_vec(&v);
            let k = a
                .to_dense()
                .kernel()
                .into_iter()
                .find(|k| Dense::from_rows(vec![av.clone(), k.clone()], 3).rank() == 2)
                .expect("kernel of a rank 1 matrix is 2-dimensional");
            (vec![av, v, k], JordanTag::J1)
        }
    };
    let (cols, tag) = basis;
    let p = SmallMatrix::from_columns(&cols)?;
    let g = ChangeOfBasis {
        g_inv: p.clone(),
        g: p.inverse()?,
    };
    Ok((g, tag))
}

fn m3(entries: [Scalar; 9]) -> SmallMatrix {
    SmallMatrix::new(3, entries.to_vec()).expect("3x3")
}

fn z() -> Scalar {
    Scalar::zero()
}

fn o() -> Scalar {
    Scalar::one()
}

/// Stabilizer element of `J₁`: `[[g₁, g₂, g₃], [0, g₁, 0], [0, 0, g₉]]`.
fn stab_j1(g1: Scalar, g2: Scalar, g3: Scalar, g9: Scalar) -> SmallMatrix {
    m3([g1.clone(), g2, g3, z(), g1, z(), z(), z(), g9])
}

/// Stabilizer element of `J₂`: upper triangular Toeplitz `[[g₁, g₂, g₃], [0, g₁, g₂], [0, 0, g₁]]`.
fn stab_j2(g1: Scalar, g2: Scalar, g3: Scalar) -> SmallMatrix {
    m3([
        g1.clone(),
        g2.clone(),
        g3,
        z(),
        g1.clone(),
        g2,
        z(),
        z(),
        g1,
    ])
}

fn finish(g: SmallMatrix, a: &SmallMatrix, kind: CanonKind) -> Result<CanonResult> {
    let g = ChangeOfBasis::new(g)?;
    let matrix = g.apply(a);
    debug_assert!(matches_template(kind, &matrix), "{kind}: {matrix}");
    Ok(CanonResult { g, kind, matrix })
}

/// Normal form of `A₂` under the centralizer of `J₁`.
///
/// Dispatch on `a₄, a₇, a₈`: all zero → `V_I`; `a₄ = a₇ = 0 ≠ a₈` → `V_II`;
/// `a₄ = 0 ≠ a₇` → `V_III`; `a₄ ≠ 0` → `V_IV`. Free parameters are set to 1
/// (`g₁`, `g₉`) or 0 (`g₂` in the `V_II` case).
pub fn stab_canon_j1(a2: &SmallMatrix) -> Result<CanonResult> {
    require_nilpotent3(a2)?;
    let a = |k: usize| a2.a(k).clone();
    let (a4, a7, a8) = (a(4), a(7), a(8));
    if a4.is_zero() && a7.is_zero() && a8.is_zero() {
        return finish(SmallMatrix::identity(3)?, a2, CanonKind::VI);
    }
    if a4.is_zero() && a7.is_zero() {
        let g2 = z();
        let g3 = ((a(1) - a(5)) * &g2 - a(2)) / &a8;
        let g9 = a8.recip();
        return finish(stab_j1(o(), g2, g3, g9), a2, CanonKind::VII);
    }
    if a4.is_zero() {
        let g1 = o();
        let g2 = &g1 * a(8) / &a7;
        let g3 = &g1 * a(9) / &a7;
        let g9 = &g1 / &a7;
        return finish(stab_j1(g1, g2, g3, g9), a2, CanonKind::VIII);
    }
    let g1 = o();
    let g2 = &g1 * a(5) / &a4;
    let g3 = a(6) * &g1 / &a4;
    finish(stab_j1(g1, g2, g3, o()), a2, CanonKind::VIV)
}

/// Normal form of `A₂` under the centralizer of `J₂`.
///
/// Dispatch: `a₄ = a₇ = a₈ = 0` → `W_I`; `a₄ = a₇ = 0 ≠ a₈` → `W_II`;
/// `a₇ = a₈ = 0 ≠ a₄` → `W_III`; `a₇ = 0`, `a₄, a₈ ≠ 0` → `W_IV`;
/// `a₇ ≠ 0` → `W_V`. The free parameter `g₁` is 1.
pub fn stab_canon_j2(a2: &SmallMatrix) -> Result<CanonResult> {
    require_nilpotent3(a2)?;
    let a = |k: usize| a2.a(k).clone();
    let (a4, a7, a8) = (a(4), a(7), a(8));
    let g1 = o();
    if a4.is_zero() && a7.is_zero() && a8.is_zero() {
        return finish(SmallMatrix::identity(3)?, a2, CanonKind::WI);
    }
    if a4.is_zero() && a7.is_zero() {
        let g2 = -(&g1 * a(5)) / &a8;
        let g3 = -(a(2) + (a(1) * a(5) - a(5) * a(5)) / &a8) * &g1 / &a8;
        return finish(stab_j2(g1, g2, g3), a2, CanonKind::WII);
    }
    if a7.is_zero() && a8.is_zero() {
        let g2 = -(&g1 * a(1)) / &a4;
        let g3 = &g1 / (&a4 * &a4) * (a(1) * a(1) + &a4 * a(6) + a(1) * (a(5) - a(9)));
        return finish(stab_j2(g1, g2, g3), a2, CanonKind::WIII);
    }
    if a7.is_zero() {
        let g2 = -(&g1 * a(1)) / &a4;
        let g3 = (a(1) * a(5) / &a4 - a(2)) * &g1 / &a8;
        return finish(stab_j2(g1, g2, g3), a2, CanonKind::WIV);
    }
    let g2 = -(&g1 * &a4) / &a7;
    let g3 = (&a4 * &a4 / &a7 - a(1)) * &g1 / &a7;
    finish(stab_j2(g1, g2, g3), a2, CanonKind::WV)
}

/// Does `m` have the exact shape of the template, side conditions included?
pub fn matches_template(kind: CanonKind, m: &SmallMatrix) -> bool {
    if m.size() != 3 || !m.is_nilpotent() {
        return false;
    }
    let a = |k: usize| m.a(k);
    let zero = |ks: &[usize]| ks.iter().all(|&k| a(k).is_zero());
    let nonzero = |k: usize| !a(k).is_zero();
    match kind {
        CanonKind::VI | CanonKind::WI => zero(&[1, 4, 5, 7, 8, 9]),
        CanonKind::VII => {
            zero(&[1, 2, 4, 7]) && a(8).is_one() && *a(6) == -(a(5) * a(5)) && *a(9) == -a(5)
        }
        CanonKind::VIII => {
            zero(&[4, 8, 9]) && a(7).is_one() && *a(5) == -a(1) && *a(3) == -(a(1) * a(1))
        }
        CanonKind::VIV => zero(&[5, 6]) && nonzero(4) && *a(9) == -a(1),
        CanonKind::WII => zero(&[1, 2, 4, 5, 6, 7, 9]) && nonzero(8),
        CanonKind::WIII => zero(&[1, 2, 5, 6, 7, 8, 9]) && nonzero(4),
        CanonKind::WIV => zero(&[1, 2, 3, 7]) && nonzero(4) && nonzero(8) && *a(9) == -a(5),
        CanonKind::WV => zero(&[1, 4]) && nonzero(7) && *a(9) == -a(5),
    }
}

/// All templates of the family that `m` matches.
pub fn matching_templates(family: &[CanonKind], m: &SmallMatrix) -> Vec<CanonKind> {
    family
        .iter()
        .copied()
        .filter(|&k| matches_template(k, m))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PairCase {
    /// `(J₂, J₂)`
    A,
    /// `(J₂, J₁)`
    B,
    /// `(J₁, J₁)`
    C,
    /// `(J₁, 0)`
    D,
    /// `(J₂, 0)`
    E,
    /// Every matrix of both tuples vanishes.
    Degenerate,
}

impl fmt::Display for PairCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairCase::A => "a",
            PairCase::B => "b",
            PairCase::C => "c",
            PairCase::D => "d",
            PairCase::E => "e",
            PairCase::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairTransforms {
    /// Original 1-based positions kept (those where some matrix is nonzero).
    pub kept: Vec<usize>,
    /// The output `a` came from the input `b`.
    pub swapped: bool,
    /// Conjugation applied to the output `a` (after dropping and swapping).
    pub g_a: ChangeOfBasis,
    /// Conjugation applied to the output `b`.
    pub g_b: ChangeOfBasis,
}

impl PairTransforms {
    pub fn is_identity(&self, d: usize) -> bool {
        self.kept == (1..=d).collect::<Vec<_>>()
            && !self.swapped
            && self.g_a.is_identity()
            && self.g_b.is_identity()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairClassification {
    pub case: PairCase,
    pub a: NilTuple,
    pub b: NilTuple,
    pub transforms: PairTransforms,
}

/// Reduces a pair of 3×3 tuples to one of the cases (a)–(e).
///
/// Positions where both tuples vanish are dropped first. Each tuple is then
/// conjugated independently so its first matrix is a Jordan matrix, and the
/// roles are swapped when the second first-matrix has strictly larger rank.
pub fn classify_pair(a: &NilTuple, b: &NilTuple) -> Result<PairClassification> {
    if a.d() != b.d() {
        return Err(Error::TupleLength(a.d(), b.d()));
    }
    for t in [a, b] {
        if t.size() != 3 {
            return Err(Error::WrongSize {
                expected: 3,
                got: t.size(),
            });
        }
    }
    let kept: Vec<usize> = (1..=a.d())
        .filter(|&i| !(a.mat(i).is_zero() && b.mat(i).is_zero()))
        .collect();
    let (ra, rb) = (a.select(&kept), b.select(&kept));
    if kept.is_empty() {
        return Ok(PairClassification {
            case: PairCase::Degenerate,
            a: ra,
            b: rb,
            transforms: PairTransforms {
                kept,
                swapped: false,
                g_a: ChangeOfBasis::identity(),
                g_b: ChangeOfBasis::identity(),
            },
        });
    }
    let (ga, ta) = nilpotent_jordan(ra.mat(1))?;
    let (gb, tb) = nilpotent_jordan(rb.mat(1))?;
    let swapped = tb.rank() > ta.rank();
    let ((first, g_a, t1), (second, g_b, t2)) = if swapped {
        ((rb, gb, tb), (ra, ga, ta))
    } else {
        ((ra, ga, ta), (rb, gb, tb))
    };
    let case = match (t1, t2) {
        (JordanTag::J2, JordanTag::J2) => PairCase::A,
        (JordanTag::J2, JordanTag::J1) => PairCase::B,
        (JordanTag::J1, JordanTag::J1) => PairCase::C,
        (JordanTag::J1, JordanTag::Zero) => PairCase::D,
        (JordanTag::J2, JordanTag::Zero) => PairCase::E,
        _ => unreachable!("a kept position has a nonzero first matrix"),
    };
    Ok(PairClassification {
        case,
        a: g_a.apply_tuple(&first),
        b: g_b.apply_tuple(&second),
        transforms: PairTransforms {
            kept,
            swapped,
            g_a,
            g_b,
        },
    })
}
