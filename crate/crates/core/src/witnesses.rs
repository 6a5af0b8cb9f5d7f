//! Catalog of explicit witness pairs and the minimality checks they support.
//!
//! A witness for `f` in a set `S` is a pair of tuples that agree on every
//! word of `S ∖ {f}` and disagree on `f`, so `S ∖ {f}` is not separating.
//! The catalog holds the directly transcribed pairs plus the images of
//! those pairs under embedding (extra zero matrices) and index relabeling.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::{all_words_agree, eval_word, first_disagreement, permute_tuple};
use crate::matrix::SmallMatrix;
use crate::scalar::Scalar;
use crate::sets::{builtin, builtin_set, InvariantSet, SetName};
use crate::tuple::NilTuple;
use crate::word::{Permutation, TraceWord};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessRecord {
    pub id: String,
    pub set_name: SetName,
    /// Number of matrices (needed for `S2`).
    pub d: usize,
    pub target: TraceWord,
    pub tuple_a: NilTuple,
    pub tuple_b: NilTuple,
    pub source: String,
}

impl WitnessRecord {
    /// The set whose complement `set ∖ {target}` the pair must not be
    /// separated by. `S33` witnesses are checked against the larger `P33`.
    pub fn comparison_set(&self) -> Result<InvariantSet> {
        match self.set_name {
            SetName::S33 => Ok(builtin(SetName::P33)),
            name => builtin_set(name, self.d),
        }
    }

    pub fn member_set(&self) -> Result<InvariantSet> {
        builtin_set(self.set_name, self.d)
    }

    /// Relabels indices by `π`: position `π(i)` receives matrix `i`.
    pub fn permuted(&self, pi: &Permutation, id: String, source: String) -> Result<WitnessRecord> {
        Ok(WitnessRecord {
            id,
            set_name: self.set_name,
            d: self.d,
            target: self.target.permute(pi)?,
            tuple_a: permute_tuple(&self.tuple_a, pi)?,
            tuple_b: permute_tuple(&self.tuple_b, pi)?,
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessReport {
    pub id: String,
    pub target: TraceWord,
    pub agree_ok: bool,
    pub separate_ok: bool,
    /// First word of `set ∖ {f}` on which the tuples differ.
    pub failing_word: Option<TraceWord>,
    #[serde(serialize_with = "crate::report::ser_scalar")]
    pub value_a: Scalar,
    #[serde(serialize_with = "crate::report::ser_scalar")]
    pub value_b: Scalar,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.agree_ok && self.separate_ok
    }
}

fn malformed(r: &WitnessRecord, reason: impl Into<String>) -> Error {
    Error::MalformedRecord {
        id: r.id.clone(),
        reason: reason.into(),
    }
}

pub fn verify_witness(r: &WitnessRecord) -> Result<WitnessReport> {
    let members = r.member_set().map_err(|e| malformed(r, e.to_string()))?;
    if !members.contains(&r.target) {
        return Err(malformed(
            r,
            format!("target {} not in {}", r.target, r.set_name),
        ));
    }
    let set = r.comparison_set()?;
    for t in [&r.tuple_a, &r.tuple_b] {
        if t.size() != set.size || t.d() != set.d {
            return Err(malformed(
                r,
                format!("tuple shape {}x{} x{}", t.size(), t.size(), t.d()),
            ));
        }
        // re-check nilpotency of the stored matrices
        NilTuple::new(t.size(), t.mats().to_vec()).map_err(|e| malformed(r, e.to_string()))?;
    }
    let rest = set.without(&r.target);
    let failing_word = first_disagreement(&r.tuple_a, &r.tuple_b, &rest)?;
    let value_a = eval_word(&r.tuple_a, &r.target)?;
    let value_b = eval_word(&r.tuple_b, &r.target)?;
    Ok(WitnessReport {
        id: r.id.clone(),
        target: r.target.clone(),
        agree_ok: failing_word.is_none(),
        separate_ok: value_a != value_b,
        failing_word,
        value_a,
        value_b,
    })
}

fn m2(rows: [[i64; 2]; 2]) -> SmallMatrix {
    SmallMatrix::m2(rows)
}

fn e(i: usize, j: usize) -> SmallMatrix {
    SmallMatrix::e(i, j)
}

fn sum(ms: &[SmallMatrix]) -> SmallMatrix {
    ms.iter().skip(1).fold(ms[0].clone(), |acc, m| &acc + m)
}

fn tuple(size: usize, ms: Vec<SmallMatrix>) -> NilTuple {
    NilTuple::new(size, ms).expect("catalog matrices are nilpotent")
}

fn word(s: &str) -> TraceWord {
    s.parse().expect("catalog word")
}

fn record(
    id: &str,
    set: SetName,
    d: usize,
    target: &str,
    a: NilTuple,
    b: NilTuple,
    source: &str,
) -> WitnessRecord {
    WitnessRecord {
        id: id.to_string(),
        set_name: set,
        d,
        target: word(target),
        tuple_a: a,
        tuple_b: b,
        source: source.to_string(),
    }
}

/// The 2×2 witnesses.
pub fn s2_base() -> Vec<WitnessRecord> {
    let e2 = |i, j| SmallMatrix::unit(2, i, j).expect("2x2");
    let c = m2([[1, 1], [-1, -1]]);
    vec![
        record(
            "s2-f12",
            SetName::S2,
            2,
            "12",
            tuple(2, vec![e2(1, 2), e2(1, 2)]),
            tuple(2, vec![e2(1, 2), e2(2, 1)]),
            "2x2, two matrices",
        ),
        record(
            "s2-f123",
            SetName::S2,
            3,
            "123",
            tuple(2, vec![e2(1, 2), -&e2(2, 1), c.clone()]),
            tuple(2, vec![e2(1, 2), c, -&e2(2, 1)]),
            "2x2, three matrices",
        ),
    ]
}

/// The four transcribed pairs for `S_{3,2}`, each with `A₁ = B₁ = J₂`.
pub fn s32_base() -> Vec<WitnessRecord> {
    let pairs: [(&str, SmallMatrix, SmallMatrix); 4] = [
        ("12", e(3, 2), e(1, 2)),
        (
            "112",
            SmallMatrix::m3([[0, 1, 0], [1, 0, -1], [0, 1, 0]]),
            SmallMatrix::m3([[0, 0, 0], [1, 0, 0], [-1, 1, 0]]),
        ),
        (
            "1122",
            SmallMatrix::m3([[0, -2, 1], [2, 0, 1], [2, 2, 0]]),
            SmallMatrix::m3([[0, 0, 2], [0, 0, -1], [2, 4, 0]]),
        ),
        (
            "112212",
            SmallMatrix::m3([[0, 1, 0], [0, 0, 0], [1, 1, 0]]),
            SmallMatrix::m3([[0, 0, -1], [0, 0, 1], [1, 1, 0]]),
        ),
    ];
    pairs
        .into_iter()
        .map(|(f, a2, b2)| {
            record(
                &format!("s32-f{f}"),
                SetName::S32,
                2,
                f,
                tuple(3, vec![SmallMatrix::j2(), a2]),
                tuple(3, vec![SmallMatrix::j2(), b2]),
                "two 3x3 matrices, minimality",
            )
        })
        .collect()
}

/// The three transcribed three-matrix pairs for `S_{3,3}`.
pub fn s33_base() -> Vec<WitnessRecord> {
    let z = SmallMatrix::zero(3).expect("3x3");
    vec![
        record(
            "s33-f123",
            SetName::S33,
            3,
            "123",
            tuple(3, vec![e(3, 1), sum(&[e(1, 2), e(3, 2)]), e(2, 3)]),
            tuple(3, vec![z, e(1, 2), e(2, 1)]),
            "three 3x3 matrices, minimal separation",
        ),
        record(
            "s33-f1123",
            SetName::S33,
            3,
            "1123",
            tuple(3, vec![sum(&[e(2, 1), e(3, 2)]), e(1, 2), e(2, 3)]),
            tuple(
                3,
                vec![sum(&[e(1, 3), e(2, 1)]), e(1, 2), SmallMatrix::j2()],
            ),
            "three 3x3 matrices, minimal separation",
        ),
        record(
            "s33-f11213",
            SetName::S33,
            3,
            "11213",
            tuple(3, vec![sum(&[e(2, 1), e(3, 2)]), e(1, 3), e(2, 3)]),
            tuple(3, vec![sum(&[e(2, 3), e(3, 1)]), e(1, 2), e(1, 3)]),
            "three 3x3 matrices, minimal separation",
        ),
    ]
}

/// Embeds a two-matrix record into three matrices at positions `(i, j)`,
/// the remaining position holding zero.
fn embed_pair(r: &WitnessRecord, set: SetName, i: usize, j: usize) -> WitnessRecord {
    let k = 6 - i - j;
    let padded = |t: &NilTuple| t.pad_to(3);
    // position i ← 1, j ← 2, k ← 3 (the zero)
    let mut images = vec![0; 3];
    images[0] = i;
    images[1] = j;
    images[2] = k;
    let pi = Permutation::new(images).expect("bijection");
    let base = WitnessRecord {
        tuple_a: padded(&r.tuple_a),
        tuple_b: padded(&r.tuple_b),
        d: 3,
        set_name: set,
        ..r.clone()
    };
    base.permuted(
        &pi,
        format!("{}@{i}{j}", r.id),
        format!("{}; embedded at positions {i},{j}", r.source),
    )
    .expect("valid permutation")
}

/// `S_{3,2}` records including the `1↔2` swap of the `tr(Y₁²Y₂)` pair,
/// which witnesses `tr(Y₁Y₂²)`.
pub fn s32_records() -> Vec<WitnessRecord> {
    let mut base = s32_base();
    let swap = Permutation::transposition(2, 1, 2).expect("d=2");
    let f112 = base
        .iter()
        .find(|r| r.id == "s32-f112")
        .expect("present")
        .clone();
    let swapped = f112
        .permuted(
            &swap,
            "s32-f122-swap".into(),
            format!("{}; indices 1<->2 swapped", f112.source),
        )
        .expect("valid");
    // present it as the set's own word 122 rather than the rotation 221
    let swapped = WitnessRecord {
        target: word("122"),
        ..swapped
    };
    base.insert(2, swapped);
    base
}

/// Records for `S_{2,3}`: the three-matrix pair plus the two-matrix pair
/// embedded at each index pair.
pub fn s2_d3_records() -> Vec<WitnessRecord> {
    let base = s2_base();
    let mut out = Vec::new();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        let mut r = embed_pair(&base[0], SetName::S2, i, j);
        r.target = TraceWord::new(vec![i, j]).expect("nonempty");
        out.push(r);
    }
    out.push(base[1].clone());
    out
}

/// Expanded records for `S_{3,3}`: one per element, in set order.
///
/// Two-letter targets reuse the `S_{3,2}` pairs embedded with a zero third
/// matrix; three-letter targets are relabelings of the three base pairs.
/// The relabeling is the lexicographically first permutation mapping the base
/// target onto (a rotation of) the wanted word.
pub fn s33_records() -> Vec<WitnessRecord> {
    let s32 = s32_records();
    let bases = s33_base();
    let mut out = Vec::new();
    for target in builtin(SetName::S33).words {
        let letters: Vec<usize> = {
            let mut l = target.letters().to_vec();
            l.sort_unstable();
            l.dedup();
            l
        };
        if letters.len() == 2 {
            let (i, j) = (letters[0], letters[1]);
            let pattern = target
                .permute(&Permutation::new(relabel_to_12(i, j)).expect("bijection"))
                .expect("in range");
            let src = s32
                .iter()
                .find(|r| r.target.cyclically_equal(&pattern))
                .expect("every S32 word has a record");
            let mut r = embed_pair(src, SetName::S33, i, j);
            r.target = target.clone();
            out.push(r);
            continue;
        }
        let found = bases.iter().find_map(|b| {
            Permutation::all(3).into_iter().find_map(|pi| {
                let img = b.target.permute(&pi).ok()?;
                img.cyclically_equal(&target).then_some((b, pi))
            })
        });
        let (b, pi) = found.expect("every three-letter S33 word is a relabeled base target");
        let mut r = if pi == Permutation::identity(3) {
            b.clone()
        } else {
            b.permuted(
                &pi,
                format!(
                    "{}~{}",
                    b.id,
                    pi.images()
                        .iter()
                        .map(ToString::to_string)
                        .collect::<String>()
                ),
                format!("{}; indices relabeled by {pi}", b.source),
            )
            .expect("valid")
        };
        r.target = target.clone();
        out.push(r);
    }
    out
}

/// Images of the letters `1..=3` sending `i ↦ 1`, `j ↦ 2`, the third ↦ 3.
fn relabel_to_12(i: usize, j: usize) -> Vec<usize> {
    let mut v = vec![3; 3];
    v[i - 1] = 1;
    v[j - 1] = 2;
    v
}

/// Every record: transcribed pairs and their symmetry images.
pub fn catalog() -> Vec<WitnessRecord> {
    let mut out = Vec::new();
    out.push(s2_base()[0].clone());
    out.extend(s2_d3_records());
    out.extend(s32_records());
    out.extend(s33_records());
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub set_name: SetName,
    pub d: usize,
    pub elements: usize,
    pub witnessed: usize,
    /// Elements with no passing record.
    pub missing: Vec<TraceWord>,
    pub records: Vec<WitnessReport>,
}

impl MinimalityReport {
    pub fn passed(&self) -> bool {
        self.missing.is_empty() && self.witnessed == self.elements
    }
}

/// Checks that every element of the set has a passing witness record.
///
/// Supported: `S2` with `d ∈ {2, 3}`, `S32`, `S33`.
pub fn verify_minimality(set_name: SetName, d: usize) -> Result<MinimalityReport> {
    let set = builtin_set(set_name, d)?;
    let records: Vec<WitnessRecord> = catalog()
        .into_iter()
        .filter(|r| r.set_name == set_name && r.d == d)
        .collect();
    let reports = records
        .par_iter()
        .map(verify_witness)
        .collect::<Result<Vec<_>>>()?;
    let missing: Vec<TraceWord> = set
        .words
        .iter()
        .filter(|w| {
            !reports
                .iter()
                .any(|r| r.passed() && r.target.cyclically_equal(w))
        })
        .cloned()
        .collect();
    Ok(MinimalityReport {
        set_name,
        d,
        elements: set.len(),
        witnessed: set.len() - missing.len(),
        missing,
        records: reports,
    })
}

/// Lengths at which the two tuples of the `tr(Y₁²Y₂²Y₁Y₂)` record first
/// differ among all two-letter words.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeBoundReport {
    pub record: String,
    /// First disagreement among words of length `≤ 5`.
    pub below: Option<TraceWord>,
    /// First disagreement among words of length `≤ 6`.
    pub at: Option<TraceWord>,
}

impl DegreeBoundReport {
    pub fn passed(&self) -> bool {
        self.below.is_none() && self.at.is_some()
    }
}

pub fn degree_bound_check() -> Result<DegreeBoundReport> {
    let rec = s32_base()
        .into_iter()
        .find(|r| r.id == "s32-f112212")
        .expect("present");
    Ok(DegreeBoundReport {
        below: all_words_agree(&rec.tuple_a, &rec.tuple_b, 5)?,
        at: all_words_agree(&rec.tuple_a, &rec.tuple_b, 6)?,
        record: rec.id,
    })
}

/// Minimality of `S33`, `S32` and of `S2` for `d = 2, 3`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessSummary {
    pub s33: MinimalityReport,
    pub s32: MinimalityReport,
    pub s2: Vec<MinimalityReport>,
}

impl WitnessSummary {
    pub fn passed(&self) -> bool {
        self.s33.passed() && self.s32.passed() && self.s2.iter().all(MinimalityReport::passed)
    }

    /// `"26/26 S33, 5/5 S32, 2/2 S2"`; the `S2` count is over `d = 2, 3`.
    pub fn line(&self) -> String {
        let s2_ok = self.s2.iter().filter(|r| r.passed()).count();
        format!(
            "{}/{} S33, {}/{} S32, {}/{} S2",
            self.s33.witnessed,
            self.s33.elements,
            self.s32.witnessed,
            self.s32.elements,
            s2_ok,
            self.s2.len()
        )
    }
}

pub fn verify_all_witnesses() -> Result<WitnessSummary> {
    Ok(WitnessSummary {
        s33: verify_minimality(SetName::S33, 3)?,
        s32: verify_minimality(SetName::S32, 2)?,
        s2: vec![
            verify_minimality(SetName::S2, 2)?,
            verify_minimality(SetName::S2, 3)?,
        ],
    })
}
