//! Evaluation-based span membership for invariants.
//!
//! A homogeneous invariant is decomposable when it lies in the span of
//! products of at least two generators of the same multidegree. Both sides
//! are evaluated at random rational points of `N₃^d`; the resulting exact
//! linear system decides membership. An inconsistent system is a proof of
//! non-membership. A consistent one yields coefficients that are then
//! re-checked on a fresh, disjoint batch of points.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::eval::eval_word;
use crate::linalg::{self, Dense};
use crate::sampling::{random_tuple, stream};
use crate::scalar::Scalar;
use crate::sets::InvariantSet;
use crate::tuple::NilTuple;
use crate::word::TraceWord;

/// Validation batches use stream indices from here on, disjoint from the
/// fitting batches.
const VALIDATION_OFFSET: u64 = 1 << 40;

/// Product of trace words. [`product_basis`] only produces products of at
/// least two factors; a single factor stands for the generator itself.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ProductExpression {
    pub factors: Vec<TraceWord>,
    pub multidegree: Vec<usize>,
}

impl ProductExpression {
    pub fn new(factors: Vec<TraceWord>, d: usize) -> Self {
        let mut multidegree = vec![0; d];
        for f in &factors {
            for (i, m) in f.multidegree(d).into_iter().enumerate() {
                if i >= multidegree.len() {
                    multidegree.push(0);
                }
                multidegree[i] += m;
            }
        }
        ProductExpression {
            factors,
            multidegree,
        }
    }

    pub fn generator(w: TraceWord, d: usize) -> Self {
        Self::new(vec![w], d)
    }

    fn eval_cached(&self, cache: &BTreeMap<&TraceWord, Scalar>) -> Scalar {
        let mut acc = Scalar::from_integer(1.into());
        for f in &self.factors {
            let v = &cache[f];
            if v.is_zero() {
                return Scalar::zero();
            }
            acc *= v;
        }
        acc
    }
}

impl fmt::Display for ProductExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|w| format!("tr({w})")).collect();
        f.write_str(&parts.join("*"))
    }
}

/// All multisets of at least two generators whose multidegrees add up to
/// `target`, in lexicographic order of generator positions.
pub fn product_basis(target: &[usize], generators: &InvariantSet) -> Vec<ProductExpression> {
    let d = target.len().max(generators.d);
    let mut target = target.to_vec();
    target.resize(d, 0);
    let gens: Vec<(TraceWord, Vec<usize>)> = generators
        .words
        .iter()
        .map(|w| (w.clone(), w.multidegree(d)))
        .collect();

    fn rec(
        gens: &[(TraceWord, Vec<usize>)],
        start: usize,
        remaining: &mut [usize],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if remaining.iter().all(|&r| r == 0) {
            if chosen.len() >= 2 {
                out.push(chosen.clone());
            }
            return;
        }
        for g in start..gens.len() {
            let md = &gens[g].1;
            if md.iter().zip(remaining.iter()).all(|(m, r)| m <= r) {
                for (r, m) in remaining.iter_mut().zip(md) {
                    *r -= m;
                }
                chosen.push(g);
                rec(gens, g, remaining, chosen, out);
                chosen.pop();
                for (r, m) in remaining.iter_mut().zip(md) {
                    *r += m;
                }
            }
        }
    }

    let mut picks = Vec::new();
    rec(&gens, 0, &mut target, &mut Vec::new(), &mut picks);
    picks
        .into_iter()
        .map(|idx| ProductExpression::new(idx.into_iter().map(|g| gens[g].0.clone()).collect(), d))
        .collect()
}

/// Generators of `set` whose multidegree is exactly `target`.
pub fn generators_of_degree(target: &[usize], set: &InvariantSet) -> Vec<TraceWord> {
    let d = target.len().max(set.d);
    let mut t = target.to_vec();
    t.resize(d, 0);
    set.words
        .iter()
        .filter(|w| w.multidegree(d) == t)
        .cloned()
        .collect()
}

/// Linear combination `Σ cᵢ tr(wᵢ)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordCombination(pub Vec<(Scalar, TraceWord)>);

impl WordCombination {
    pub fn word(w: TraceWord) -> Self {
        WordCombination(vec![(Scalar::from_integer(1.into()), w)])
    }

    pub fn zero() -> Self {
        WordCombination(Vec::new())
    }

    pub fn words(&self) -> impl Iterator<Item = &TraceWord> {
        self.0.iter().map(|(_, w)| w)
    }

    fn eval_cached(&self, cache: &BTreeMap<&TraceWord, Scalar>) -> Scalar {
        self.0.iter().map(|(c, w)| c * &cache[w]).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpanDecision {
    pub member: bool,
    #[serde(serialize_with = "ser_opt_scalars")]
    pub coefficients: Option<Vec<Scalar>>,
    pub samples_used: usize,
    pub seed: u64,
    /// Rank of the candidate evaluation matrix.
    pub rank: usize,
    /// Fresh points on which member coefficients were re-checked.
    pub validation_samples: usize,
}

fn ser_opt_scalars<S: serde::Serializer>(
    x: &Option<Vec<Scalar>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match x {
        None => s.serialize_none(),
        Some(v) => crate::report::ser_scalars(v, s),
    }
}

/// Minimum number of points for `k` candidates.
pub fn min_samples(k: usize) -> usize {
    2 * k + 8
}

fn letters_needed<'a>(words: impl Iterator<Item = &'a TraceWord>) -> usize {
    words.map(TraceWord::max_letter).max().unwrap_or(1)
}

/// Evaluation rows: for each point, candidate values followed by extra
/// columns (target values).
struct Evaluator<'a> {
    candidates: &'a [ProductExpression],
    extras: Vec<WordCombination>,
    d: usize,
    seed: u64,
}

impl Evaluator<'_> {
    fn rows(&self, indices: std::ops::Range<u64>) -> Vec<Vec<Scalar>> {
        indices
            .into_par_iter()
            .map(|i| {
                let t = random_tuple(&mut stream(self.seed, i), 3, self.d);
                self.row(&t)
            })
            .collect()
    }

    fn row(&self, t: &NilTuple) -> Vec<Scalar> {
        let mut cache: BTreeMap<&TraceWord, Scalar> = BTreeMap::new();
        let all = self
            .candidates
            .iter()
            .flat_map(|c| c.factors.iter())
            .chain(self.extras.iter().flat_map(WordCombination::words));
        for w in all {
            if !cache.contains_key(w) {
                cache.insert(w, eval_word(t, w).expect("letters within d"));
            }
        }
        self.candidates
            .iter()
            .map(|c| c.eval_cached(&cache))
            .chain(self.extras.iter().map(|e| e.eval_cached(&cache)))
            .collect()
    }

    fn width(&self) -> usize {
        self.candidates.len() + self.extras.len()
    }

    /// Fits batches of `n` points until the candidate rank is stable between
    /// consecutive batches, up to three batches.
    fn stable_rows(&self, n: usize, rank_cols: usize) -> Result<(Dense, usize)> {
        let mut m = Dense::zeros(0, self.width());
        let mut prev = None;
        let mut history = Vec::new();
        for b in 0..3u64 {
            for row in self.rows(b * n as u64..(b + 1) * n as u64) {
                m.push_row(row);
            }
            let r = leading_rank(&m, rank_cols);
            history.push(r);
            if prev == Some(r) {
                return Ok((m, r));
            }
            prev = Some(r);
        }
        Err(Error::Sampling {
            first: history[0],
            second: history[2],
            n,
            tripled: 3 * n,
        })
    }
}

/// Rank of the first `cols` columns.
fn leading_rank(m: &Dense, cols: usize) -> usize {
    let rows: Vec<Vec<Scalar>> = (0..m.rows).map(|r| m.row(r)[..cols].to_vec()).collect();
    Dense::from_rows(rows, cols).rank()
}

fn split_last_col(m: &Dense) -> (Dense, Vec<Scalar>) {
    let k = m.cols - 1;
    let lhs = Dense::from_rows((0..m.rows).map(|r| m.row(r)[..k].to_vec()).collect(), k);
    let rhs = (0..m.rows).map(|r| m.get(r, k).clone()).collect();
    (lhs, rhs)
}

/// Is `target` a linear combination of `candidates` as functions on `N₃^d`?
pub fn in_span(
    target: &WordCombination,
    candidates: &[ProductExpression],
    n_samples: usize,
    seed: u64,
) -> Result<SpanDecision> {
    let k = candidates.len();
    if n_samples < min_samples(k) {
        return Err(Error::TooFewSamples {
            got: n_samples,
            needed: min_samples(k),
        });
    }
    let d = letters_needed(
        candidates
            .iter()
            .flat_map(|c| c.factors.iter())
            .chain(target.words()),
    );
    let ev = Evaluator {
        candidates,
        extras: vec![target.clone()],
        d,
        seed,
    };
    let (fit, rank) = ev.stable_rows(n_samples, k)?;
    let (lhs, rhs) = split_last_col(&fit);
    let Some(x) = linalg::solve(&lhs, &rhs) else {
        return Ok(SpanDecision {
            member: false,
            coefficients: None,
            samples_used: fit.rows,
            seed,
            rank,
            validation_samples: 0,
        });
    };
    let n_val = 2 * n_samples;
    let val = ev.rows(VALIDATION_OFFSET..VALIDATION_OFFSET + n_val as u64);
    let holds = val.iter().all(|row| {
        let lhs: Scalar = row[..k].iter().zip(&x).map(|(a, c)| a * c).sum();
        lhs == row[k]
    });
    if holds {
        return Ok(SpanDecision {
            member: true,
            coefficients: Some(x),
            samples_used: fit.rows,
            seed,
            rank,
            validation_samples: n_val,
        });
    }
    // The fitted coefficients are wrong somewhere: refit on everything.
    let mut all = fit.clone();
    for row in val {
        all.push_row(row);
    }
    let (lhs, rhs) = split_last_col(&all);
    match linalg::solve(&lhs, &rhs) {
        None => Ok(SpanDecision {
            member: false,
            coefficients: None,
            samples_used: all.rows,
            seed,
            rank: leading_rank(&all, k),
            validation_samples: n_val,
        }),
        Some(_) => Err(Error::Sampling {
            first: rank,
            second: leading_rank(&all, k),
            n: n_samples,
            tripled: all.rows,
        }),
    }
}

/// Result of testing that a family of words is linearly independent
/// modulo a candidate span.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankCheck {
    pub words: Vec<TraceWord>,
    pub candidates: usize,
    pub rank_candidates: usize,
    pub rank_stacked: usize,
    pub samples_used: usize,
    pub seed: u64,
}

impl RankCheck {
    /// `rank(candidates ∪ words) = rank(candidates) + |words|`: no nontrivial
    /// combination of the words lies in the span.
    pub fn independent(&self) -> bool {
        self.rank_stacked == self.rank_candidates + self.words.len()
    }
}

/// Compares the rank of the candidate evaluation matrix with the rank after
/// appending one column per word.
///
/// Independence observed at sample points is a proof: a relation between
/// functions would also hold at every point.
pub fn rank_check(
    words: &[TraceWord],
    candidates: &[ProductExpression],
    n_samples: usize,
    seed: u64,
) -> Result<RankCheck> {
    let k = candidates.len() + words.len();
    if n_samples < min_samples(k) {
        return Err(Error::TooFewSamples {
            got: n_samples,
            needed: min_samples(k),
        });
    }
    let d = letters_needed(
        candidates
            .iter()
            .flat_map(|c| c.factors.iter())
            .chain(words.iter()),
    );
    let ev = Evaluator {
        candidates,
        extras: words.iter().cloned().map(WordCombination::word).collect(),
        d,
        seed,
    };
    let (m, rank_stacked) = ev.stable_rows(n_samples, ev.width())?;
    Ok(RankCheck {
        words: words.to_vec(),
        candidates: candidates.len(),
        rank_candidates: leading_rank(&m, candidates.len()),
        rank_stacked,
        samples_used: m.rows,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{builtin, SetName};
    use crate::word::w;

    fn names(ps: &[ProductExpression]) -> Vec<String> {
        ps.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn product_basis_examples() {
        let p33 = builtin(SetName::P33);
        assert!(product_basis(&[1, 1, 0], &p33).is_empty());
        assert_eq!(
            names(&product_basis(&[2, 2, 0], &p33)),
            vec!["tr(12)*tr(12)"]
        );
        let b = product_basis(&[2, 2, 1], &p33);
        let mut got = names(&b);
        got.sort();
        let mut want = vec![
            "tr(12)*tr(123)",
            "tr(12)*tr(132)",
            "tr(112)*tr(23)",
            "tr(122)*tr(13)",
        ];
        want.sort();
        assert_eq!(got, want);
        assert!(b.iter().all(|p| p.multidegree == vec![2, 2, 1]));
    }

    #[test]
    fn zero_target_is_member() {
        let p33 = builtin(SetName::P33);
        let cands = product_basis(&[2, 2, 0], &p33);
        let dec = in_span(
            &WordCombination::zero(),
            &cands,
            min_samples(cands.len()),
            5,
        )
        .unwrap();
        assert!(dec.member);
        assert!(dec.coefficients.unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn too_few_samples_rejected() {
        let p33 = builtin(SetName::P33);
        let cands = product_basis(&[2, 2, 1], &p33);
        assert!(matches!(
            in_span(&WordCombination::word(w("11223")), &cands, 3, 1),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
