//! Indecomposability of the extra generators of `P_{3,3}` and replay of the
//! hand-picked evaluation points that pin down the coefficients of a
//! hypothetical decomposition.

use serde::Serialize;

use crate::error::Result;
use crate::eval::{cyclic_classes, eval_word};
use crate::linalg::{self, Dense};
use crate::matrix::SmallMatrix;
use crate::scalar::{self, Scalar};
use crate::sets::{builtin, SetName};
use crate::span::{
    generators_of_degree, in_span, min_samples, product_basis, rank_check, ProductExpression,
    RankCheck, SpanDecision, WordCombination,
};
use crate::tuple::NilTuple;
use crate::word::{w, Permutation, TraceWord};

#[derive(Debug, Clone, Serialize)]
pub struct WordVerdict {
    pub word: TraceWord,
    pub multidegree: Vec<usize>,
    pub candidates: usize,
    pub decision: SpanDecision,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndecomposabilityReport {
    pub seed: u64,
    /// `11223` and `22113` together, modulo decomposables.
    pub pair: RankCheck,
    pub item_b: WordVerdict,
    pub item_c: WordVerdict,
    /// Every word of `P'_{3,3}` on its own.
    pub extra: Vec<WordVerdict>,
    /// Words of `P'_{3,3}` sharing a multidegree, jointly.
    pub extra_groups: Vec<RankCheck>,
}

impl IndecomposabilityReport {
    pub fn passed(&self) -> bool {
        self.pair.independent()
            && !self.item_b.decision.member
            && !self.item_c.decision.member
            && self.extra.iter().all(|v| !v.decision.member)
            && self.extra_groups.iter().all(RankCheck::independent)
    }
}

fn mdeg3(word: &TraceWord) -> Vec<usize> {
    word.multidegree(3)
}

fn decomposables(mdeg: &[usize]) -> Vec<ProductExpression> {
    product_basis(mdeg, &builtin(SetName::P33))
}

/// Is `word` outside the span of products in its multidegree?
pub fn word_verdict(word: &TraceWord, seed: u64) -> Result<WordVerdict> {
    let md = mdeg3(word);
    let cands = decomposables(&md);
    let decision = in_span(
        &WordCombination::word(word.clone()),
        &cands,
        min_samples(cands.len()),
        seed,
    )?;
    Ok(WordVerdict {
        word: word.clone(),
        multidegree: md,
        candidates: cands.len(),
        decision,
    })
}

fn group_check(words: &[TraceWord], seed: u64) -> Result<RankCheck> {
    let cands = decomposables(&mdeg3(&words[0]));
    rank_check(words, &cands, min_samples(cands.len() + words.len()), seed)
}

pub fn indecomposability_report(seed: u64) -> Result<IndecomposabilityReport> {
    let pprime = builtin(SetName::Pprime33);
    let mut groups: Vec<Vec<TraceWord>> = Vec::new();
    for word in &pprime.words {
        match groups.iter_mut().find(|g| mdeg3(&g[0]) == mdeg3(word)) {
            Some(g) => g.push(word.clone()),
            None => groups.push(vec![word.clone()]),
        }
    }
    Ok(IndecomposabilityReport {
        seed,
        pair: group_check(&[w("11223"), w("22113")], seed)?,
        item_b: word_verdict(&w("112213"), seed)?,
        item_c: word_verdict(&w("112233"), seed)?,
        extra: pprime
            .words
            .iter()
            .map(|x| word_verdict(x, seed))
            .collect::<Result<_>>()?,
        extra_groups: groups
            .iter()
            .filter(|g| g.len() > 1)
            .map(|g| group_check(g, seed))
            .collect::<Result<_>>()?,
    })
}

/// Membership of a word outside `P_{3,3}` in the span of products and
/// generators of its multidegree.
#[derive(Debug, Clone, Serialize)]
pub struct GenerationCheck {
    pub word: TraceWord,
    pub candidates: Vec<String>,
    pub decision: SpanDecision,
}

impl GenerationCheck {
    pub fn passed(&self) -> bool {
        self.decision.member && self.decision.validation_samples > 0
    }
}

/// Every cyclic class over `1..=d` of length at most `max_len` that is not
/// in `P_{3,3}` is expressed through products and generators.
pub fn generation_sanity(d: usize, max_len: usize, seed: u64) -> Result<Vec<GenerationCheck>> {
    let p33 = builtin(SetName::P33);
    cyclic_classes(d, max_len)
        .into_iter()
        .filter(|x| !p33.contains(x))
        .map(|word| {
            let md = mdeg3(&word);
            let mut cands = product_basis(&md, &p33);
            cands.extend(
                generators_of_degree(&md, &p33)
                    .into_iter()
                    .map(|g| ProductExpression::generator(g, 3)),
            );
            let decision = in_span(
                &WordCombination::word(word.clone()),
                &cands,
                min_samples(cands.len()),
                seed,
            )?;
            Ok(GenerationCheck {
                word,
                candidates: cands.iter().map(ToString::to_string).collect(),
                decision,
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Replay of the pinning evaluations.

/// `fixed + Σ_u (Σ lhs terms of u)·u = Σ_u (Σ rhs terms of u)·u`, an identity
/// between invariants with unknown coefficients `u`.
#[derive(Debug, Clone)]
pub struct PinningIdentity {
    pub unknowns: Vec<&'static str>,
    pub fixed: Option<TraceWord>,
    pub lhs: Vec<(usize, Vec<TraceWord>)>,
    pub rhs: Vec<(usize, Vec<TraceWord>)>,
}

impl PinningIdentity {
    fn product(t: &NilTuple, factors: &[TraceWord]) -> Scalar {
        factors
            .iter()
            .map(|f| eval_word(t, f).expect("three letters"))
            .fold(scalar::one(), |acc, v| acc * v)
    }

    /// Linear equation in the unknowns obtained at `t`, as `coeffs | rhs`.
    pub fn equation(&self, t: &NilTuple) -> Vec<Scalar> {
        let mut row = vec![scalar::zero(); self.unknowns.len() + 1];
        for (u, fs) in &self.lhs {
            row[*u] += Self::product(t, fs);
        }
        for (u, fs) in &self.rhs {
            row[*u] -= Self::product(t, fs);
        }
        if let Some(f) = &self.fixed {
            row[self.unknowns.len()] = -eval_word(t, f).expect("three letters");
        }
        row
    }

    fn unknown(&self, name: &str) -> usize {
        self.unknowns
            .iter()
            .position(|u| *u == name)
            .expect("known unknown")
    }

    /// `Σ c·u = rhs` from named terms.
    fn condition(&self, terms: &[(&str, i64)], rhs: i64) -> Vec<Scalar> {
        let mut row = vec![scalar::zero(); self.unknowns.len() + 1];
        for (name, c) in terms {
            row[self.unknown(name)] += scalar::int(*c);
        }
        row[self.unknowns.len()] = scalar::int(rhs);
        row
    }
}

#[derive(Debug, Clone)]
pub enum Expectation {
    /// Each condition follows from the equations gathered so far.
    Implies(Vec<Vec<Scalar>>),
    /// The new equations are inconsistent with the earlier ones.
    Contradiction,
}

#[derive(Debug, Clone)]
pub struct PinningStep {
    pub label: String,
    pub triples: Vec<NilTuple>,
    pub expect: Expectation,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub part: String,
    pub label: String,
    pub triples: usize,
    pub holds: bool,
    /// `LHS - RHS` at the last triple once the earlier conclusions are
    /// substituted (contradiction steps only).
    #[serde(serialize_with = "ser_opt")]
    pub gap: Option<Scalar>,
}

fn ser_opt<S: serde::Serializer>(x: &Option<Scalar>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => crate::report::ser_scalar(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ReplayReport {
    pub steps: Vec<StepReport>,
}

impl ReplayReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.holds)
    }
}

fn t(mats: [SmallMatrix; 3]) -> NilTuple {
    NilTuple::new(3, mats.to_vec()).expect("pinning triples are nilpotent")
}

fn all_orders(mats: [SmallMatrix; 3]) -> Vec<NilTuple> {
    Permutation::all(3)
        .iter()
        .map(|p| t([0, 1, 2].map(|i| mats[p.images()[i] - 1].clone())))
        .collect()
}

fn e(i: usize, j: usize) -> SmallMatrix {
    SmallMatrix::e(i, j)
}

fn c_mat() -> SmallMatrix {
    SmallMatrix::m3([[0, -1, -1], [0, 1, 1], [1, 0, -1]])
}

fn d_mat() -> SmallMatrix {
    SmallMatrix::m3([[0, 0, 0], [0, 1, 1], [0, -1, -1]])
}

fn words(ws: &[&str]) -> Vec<TraceWord> {
    ws.iter().map(|s| w(s)).collect()
}

pub fn identity_pair() -> PinningIdentity {
    PinningIdentity {
        unknowns: vec!["a1", "a2", "b1", "b2", "b3", "b4"],
        fixed: None,
        lhs: vec![(0, words(&["11223"])), (1, words(&["22113"]))],
        rhs: vec![
            (2, words(&["123", "12"])),
            (3, words(&["132", "12"])),
            (4, words(&["112", "23"])),
            (5, words(&["221", "13"])),
        ],
    }
}

pub fn identity_b() -> PinningIdentity {
    PinningIdentity {
        unknowns: vec!["a1", "a2", "a3", "b1", "b2", "b3", "g"],
        fixed: Some(w("112213")),
        lhs: vec![],
        rhs: vec![
            (0, words(&["1122", "13"])),
            (1, words(&["1123", "12"])),
            (2, words(&["1132", "12"])),
            (3, words(&["112", "123"])),
            (4, words(&["112", "132"])),
            (5, words(&["221", "113"])),
            (6, words(&["12", "12", "13"])),
        ],
    }
}

pub fn identity_c() -> PinningIdentity {
    PinningIdentity {
        unknowns: vec![
            "a1", "a2", "a3", "a4", "a5", "a6", "b1", "b2", "b3", "b4", "b5", "b6", "g",
        ],
        fixed: Some(w("112233")),
        lhs: vec![],
        rhs: vec![
            (0, words(&["1123", "23"])),
            (1, words(&["1132", "23"])),
            (2, words(&["2213", "13"])),
            (3, words(&["2231", "13"])),
            (4, words(&["3312", "12"])),
            (5, words(&["3321", "12"])),
            (6, words(&["123", "123"])),
            (7, words(&["123", "132"])),
            (8, words(&["132", "132"])),
            (9, words(&["112", "332"])),
            (10, words(&["113", "223"])),
            (11, words(&["221", "331"])),
            (12, words(&["12", "13", "23"])),
        ],
    }
}

fn step(label: &str, triples: Vec<NilTuple>, conds: Vec<Vec<Scalar>>) -> PinningStep {
    PinningStep {
        label: label.to_string(),
        triples,
        expect: Expectation::Implies(conds),
    }
}

pub fn steps_pair(id: &PinningIdentity) -> Vec<PinningStep> {
    let j2 = SmallMatrix::j2();
    vec![
        step(
            "b3 = 0",
            vec![t([j2.clone(), &e(2, 3) + &e(3, 1), e(1, 3)])],
            vec![id.condition(&[("b3", 1)], 0)],
        ),
        step(
            "a1 = 0",
            vec![t([j2, c_mat(), e(2, 1)])],
            vec![id.condition(&[("a1", 1)], 0)],
        ),
    ]
}

pub fn steps_b(id: &PinningIdentity) -> Vec<PinningStep> {
    let j2 = SmallMatrix::j2();
    let e31_32 = &e(3, 1) + &e(3, 2);
    let e21m32 = &e(2, 1) - &e(3, 2);
    vec![
        step(
            "a2 = 0",
            vec![t([j2.clone(), e31_32.clone(), e21m32.clone()])],
            vec![id.condition(&[("a2", 1)], 0)],
        ),
        step(
            "g = 0",
            vec![t([j2.clone(), e31_32.clone(), e(3, 2)])],
            vec![id.condition(&[("g", 1)], 0)],
        ),
        step(
            "b2 = a1 + b1",
            vec![t([j2.clone(), c_mat(), e(3, 2)])],
            vec![id.condition(&[("b2", 1), ("a1", -1), ("b1", -1)], 0)],
        ),
        step(
            "a1 = 1",
            vec![t([j2.clone(), c_mat(), e31_32])],
            vec![id.condition(&[("a1", 1)], 1)],
        ),
        step(
            "b1 = 0",
            vec![t([j2, c_mat(), e21m32])],
            vec![id.condition(&[("b1", 1)], 0)],
        ),
        PinningStep {
            label: "0 = -1".to_string(),
            triples: vec![t([
                SmallMatrix::m3([[1, 1, 0], [-1, -1, 1], [0, 0, 0]]),
                SmallMatrix::m3([[0, -1, 1], [1, 0, 0], [1, 0, 0]]),
                e(1, 2),
            ])],
            expect: Expectation::Contradiction,
        },
    ]
}

pub fn steps_c(id: &PinningIdentity) -> Vec<PinningStep> {
    let j2 = SmallMatrix::j2();
    let e23_31 = &e(2, 3) + &e(3, 1);
    let e21_32 = &e(2, 1) + &e(3, 2);
    let alphas: Vec<Vec<Scalar>> = ["a1", "a2", "a3", "a4", "a5", "a6"]
        .iter()
        .map(|a| id.condition(&[(a, 1), ("g", 1)], 0))
        .collect();
    let betas: Vec<Vec<Scalar>> = ["b4", "b5", "b6"]
        .iter()
        .map(|b| id.condition(&[(b, 1), ("g", -1)], 0))
        .collect();
    vec![
        step(
            "b1 = 0",
            vec![t([j2.clone(), e23_31.clone(), e(3, 1)])],
            vec![id.condition(&[("b1", 1)], 0)],
        ),
        step(
            "b3 = 0",
            vec![t([j2.clone(), e(3, 1), e23_31.clone()])],
            vec![id.condition(&[("b3", 1)], 0)],
        ),
        step(
            "b2 = -g",
            vec![t([j2.clone(), &d_mat() + &e(3, 1), e(3, 2)])],
            vec![id.condition(&[("b2", 1), ("g", 1)], 0)],
        ),
        step(
            "a1 = ... = a6 = -g",
            all_orders([j2.clone(), d_mat(), &e(3, 1) + &e(3, 2)]),
            alphas,
        ),
        step(
            "b4 = b5 = b6 = g",
            all_orders([j2.clone(), j2.clone(), e23_31]),
            betas,
        ),
        step(
            "g = 0",
            vec![t([j2.clone(), c_mat(), e21_32.clone()])],
            vec![id.condition(&[("g", 1)], 0)],
        ),
        PinningStep {
            label: "0 = -1".to_string(),
            triples: vec![t([
                SmallMatrix::m3([[0, 0, -1], [0, 0, 1], [1, 1, 0]]),
                j2,
                e21_32,
            ])],
            expect: Expectation::Contradiction,
        },
    ]
}

/// Accumulates the equations of each step and checks its expectation.
pub fn replay(part: &str, id: &PinningIdentity, steps: &[PinningStep]) -> Vec<StepReport> {
    let width = id.unknowns.len() + 1;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let mut out = Vec::new();
    for s in steps {
        let new: Vec<Vec<Scalar>> = s.triples.iter().map(|t| id.equation(t)).collect();
        let (holds, gap) = match &s.expect {
            Expectation::Implies(conds) => {
                rows.extend(new);
                let consistent = !linalg::is_inconsistent(&Dense::from_rows(rows.clone(), width));
                (
                    consistent && conds.iter().all(|c| linalg::implies(&rows, c)),
                    None,
                )
            }
            Expectation::Contradiction => {
                let last = new.last().expect("one triple").clone();
                let gap = forced_gap(&rows, &last);
                rows.extend(new);
                let inconsistent = linalg::is_inconsistent(&Dense::from_rows(rows.clone(), width));
                (inconsistent, gap)
            }
        };
        out.push(StepReport {
            part: part.to_string(),
            label: s.label.clone(),
            triples: s.triples.len(),
            holds,
            gap,
        });
    }
    out
}

/// `LHS - RHS` of the equation `eq` under every solution of `rows`, when the
/// earlier equations determine it.
fn forced_gap(rows: &[Vec<Scalar>], eq: &[Scalar]) -> Option<Scalar> {
    let k = eq.len() - 1;
    let m = Dense::from_rows(rows.iter().map(|r| r[..k].to_vec()).collect(), k);
    let rhs: Vec<Scalar> = rows.iter().map(|r| r[k].clone()).collect();
    let x = linalg::solve(&m, &rhs)?;
    let value: Scalar = eq[..k].iter().zip(&x).map(|(a, b)| a * b).sum();
    let mut forced = eq[..k].to_vec();
    forced.push(value.clone());
    linalg::implies(rows, &forced).then(|| value - &eq[k])
}

/// Replays all three parts.
pub fn replay_pinning_triples() -> ReplayReport {
    let mut steps = Vec::new();
    let a = identity_pair();
    steps.extend(replay("a", &a, &steps_pair(&a)));
    let b = identity_b();
    steps.extend(replay("b", &b, &steps_b(&b)));
    let c = identity_c();
    steps.extend(replay("c", &c, &steps_c(&c)));
    ReplayReport { steps }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn replay_conclusions_hold() {
        let r = replay_pinning_triples();
        for s in &r.steps {
            assert!(s.holds, "{} {}", s.part, s.label);
        }
        let gaps: Vec<_> = r.steps.iter().filter_map(|s| s.gap.clone()).collect();
        assert_eq!(gaps, vec![scalar::int(-1), scalar::int(-1)]);
    }

    #[test]
    fn wrong_conclusion_is_rejected() {
        let id = identity_pair();
        let mut steps = steps_pair(&id);
        steps[0].expect = Expectation::Implies(vec![id.condition(&[("b1", 1)], 0)]);
        assert!(!replay("a", &id, &steps)[0].holds);
    }

    #[test]
    fn d_triples_pin_different_unknowns() {
        let id = identity_c();
        let j2 = SmallMatrix::j2();
        let row = id.equation(&t([j2.clone(), d_mat(), &e(3, 1) + &e(3, 2)]));
        // a1 - b3 + g = 0
        let mut want = vec![scalar::zero(); 14];
        want[0] = scalar::one();
        want[8] = scalar::int(-1);
        want[12] = scalar::one();
        assert_eq!(row, want);
        let rows: Vec<_> = all_orders([j2, &d_mat() + &e(3, 1), e(3, 2)])
            .iter()
            .map(|x| id.equation(x))
            .collect();
        assert!(rows.iter().all(|r| r == &rows[0]));
        assert!(rows[0][..6].iter().all(num_traits::Zero::is_zero));
    }

    #[test]
    fn item_b_not_in_span() {
        let v = word_verdict(&w("112213"), 11).unwrap();
        assert!(!v.decision.member);
    }
}
