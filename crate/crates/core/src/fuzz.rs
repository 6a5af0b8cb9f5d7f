//! Deterministic fuzzing of the separating property of `S_{3,3}` and of the
//! stabilizer canonical forms.
//!
//! Trial `i` of a run with seed `s` draws everything from `stream(s, i)`, so
//! reports do not depend on thread count.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{matching_templates, stab_canon_j1, stab_canon_j2, CanonKind, JordanTag};
use crate::document::ser_tuple;
use crate::error::{Error, Result};
use crate::eval::{evaluate_set, first_disagreement};
use crate::matrix::SmallMatrix;
use crate::sampling::{
    random_nilpotent, random_nilpotent_with, random_strict_upper, random_tuple, random_unimodular,
    stream,
};
use crate::scalar::{self, Scalar};
use crate::sets::{builtin, SetName};
use crate::tuple::NilTuple;

/// Unseparated-by-construction pair shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Template {
    /// Both first matrices `J₂`, second matrices strictly upper, third
    /// matrices with first column zero sharing the `(3,2)` entry.
    J2J2Corner,
    /// Both first matrices `J₂`, third matrices with zero last row sharing
    /// the nonzero `(2,1)` entry.
    J2J2Band,
    /// `(J₁, A₂, A₃)` against `(0, …)`; `A₂`, `A₃` kill `e₁`.
    J1ZeroColumn,
    /// `(J₁, A₂, A₃)` against `(0, …)`; `A₂`, `A₃` have zero second row.
    J1ZeroRow,
    /// `(J₂, A₂, A₃)` with `A₂`, `A₃` strictly upper against `(0, …)`.
    J2ZeroUpper,
}

impl Template {
    pub const ALL: [Template; 5] = [
        Template::J2J2Corner,
        Template::J2J2Band,
        Template::J1ZeroColumn,
        Template::J1ZeroRow,
        Template::J2ZeroUpper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Template::J2J2Corner => "j2j2-corner",
            Template::J2J2Band => "j2j2-band",
            Template::J1ZeroColumn => "j1zero-column",
            Template::J1ZeroRow => "j1zero-row",
            Template::J2ZeroUpper => "j2zero-upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PairFamily {
    Conjugate,
    StrictUpper,
    Template(Template),
    Independent,
}

impl PairFamily {
    pub fn all() -> Vec<PairFamily> {
        let mut v = vec![PairFamily::Conjugate, PairFamily::StrictUpper];
        v.extend(Template::ALL.map(PairFamily::Template));
        v.push(PairFamily::Independent);
        v
    }
}

impl fmt::Display for PairFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairFamily::Conjugate => f.write_str("conjugate"),
            PairFamily::StrictUpper => f.write_str("strict-upper"),
            PairFamily::Template(t) => write!(f, "template:{}", t.as_str()),
            PairFamily::Independent => f.write_str("independent"),
        }
    }
}

impl FromStr for PairFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        match s.as_str() {
            "conjugate" => return Ok(PairFamily::Conjugate),
            "strict-upper" | "strictupper" => return Ok(PairFamily::StrictUpper),
            "independent" => return Ok(PairFamily::Independent),
            _ => {}
        }
        let id = s.strip_prefix("template:").unwrap_or(&s);
        Template::ALL
            .into_iter()
            .find(|t| t.as_str() == id)
            .map(PairFamily::Template)
            .ok_or(Error::UnknownTemplate(s.to_string()))
    }
}

/// Random rational `p/q` with `|p| ≤ range`, `1 ≤ q ≤ range`.
pub fn random_rational(rng: &mut impl Rng, range: i64) -> Scalar {
    let p = rng.gen_range(-range..=range);
    let q = rng.gen_range(1..=range.max(1));
    scalar::frac(p, q)
}

pub fn random_nonzero_rational(rng: &mut impl Rng, range: i64) -> Scalar {
    loop {
        let x = random_rational(rng, range);
        if !x.is_zero() {
            return x;
        }
    }
}

fn mat3(rows: [[Scalar; 3]; 3]) -> SmallMatrix {
    SmallMatrix::new(3, rows.into_iter().flatten().collect()).expect("3x3")
}

/// `[[x, y], [c, -x]]` with `x² + yc = 0`; `c` is given.
fn nilpotent_2x2(rng: &mut impl Rng, range: i64, c: &Scalar) -> [Scalar; 4] {
    if c.is_zero() {
        [
            Scalar::zero(),
            random_rational(rng, range),
            Scalar::zero(),
            Scalar::zero(),
        ]
    } else {
        let x = random_rational(rng, range);
        let y = -(&x * &x) / c;
        [x.clone(), y, c.clone(), -x]
    }
}

fn strict_upper(rng: &mut impl Rng, range: i64) -> SmallMatrix {
    let z = Scalar::zero;
    let r = |rng: &mut _| random_rational(rng, range);
    mat3([[z(), r(rng), r(rng)], [z(), z(), r(rng)], [z(), z(), z()]])
}

fn template_pair(
    t: Template,
    rng: &mut impl Rng,
    range: i64,
) -> (Vec<SmallMatrix>, Vec<SmallMatrix>) {
    let z = Scalar::zero;
    let j2 = SmallMatrix::j2();
    match t {
        Template::J2J2Corner => {
            let c = if rng.gen_bool(0.5) {
                random_rational(rng, range)
            } else {
                Scalar::zero()
            };
            let a2 = strict_upper(rng, range);
            let mut b2 = strict_upper(rng, range);
            if !c.is_zero() {
                b2.set(1, 2, a2.get(1, 2).clone());
            }
            let third = |rng: &mut _| {
                let [x, y, c, w] = nilpotent_2x2(rng, range, &c);
                mat3([
                    [
                        z(),
                        random_rational(rng, range),
                        random_rational(rng, range),
                    ],
                    [z(), x, y],
                    [z(), c, w],
                ])
            };
            let (a3, b3) = (third(rng), third(rng));
            (vec![j2.clone(), a2, a3], vec![j2, b2, b3])
        }
        Template::J2J2Band => {
            let s = random_nonzero_rational(rng, range);
            let a2 = strict_upper(rng, range);
            let mut b2 = strict_upper(rng, range);
            b2.set(0, 1, a2.get(0, 1).clone());
            let third = |rng: &mut _| {
                let x = random_rational(rng, range);
                let y = -(&x * &x) / &s;
                mat3([
                    [x.clone(), y, random_rational(rng, range)],
                    [s.clone(), -x, random_rational(rng, range)],
                    [z(), z(), z()],
                ])
            };
            let (a3, b3) = (third(rng), third(rng));
            (vec![j2.clone(), a2, a3], vec![j2, b2, b3])
        }
        Template::J1ZeroColumn => {
            let a2 = if rng.gen_bool(0.5) {
                strict_upper(rng, range)
            } else {
                let a5 = random_rational(rng, range);
                mat3([
                    [z(), z(), random_rational(rng, range)],
                    [z(), a5.clone(), -(&a5 * &a5)],
                    [z(), scalar::one(), -a5],
                ])
            };
            let c = random_rational(rng, range);
            let [x, y, c, w] = nilpotent_2x2(rng, range, &c);
            let a3 = mat3([
                [
                    z(),
                    random_rational(rng, range),
                    random_rational(rng, range),
                ],
                [z(), x, y],
                [z(), c, w],
            ]);
            with_zero_partner(SmallMatrix::j1(), a2, a3, rng, range)
        }
        Template::J1ZeroRow => {
            let a2 = mat3([
                [z(), random_rational(rng, range), z()],
                [z(), z(), z()],
                [scalar::one(), z(), z()],
            ]);
            let c = random_rational(rng, range);
            let [x, y, c, w] = nilpotent_2x2(rng, range, &c);
            let a3 = mat3([
                [x, random_rational(rng, range), y],
                [z(), z(), z()],
                [c, random_rational(rng, range), w],
            ]);
            with_zero_partner(SmallMatrix::j1(), a2, a3, rng, range)
        }
        Template::J2ZeroUpper => {
            let (a2, a3) = (strict_upper(rng, range), strict_upper(rng, range));
            let (g, g_inv) = random_unimodular(rng, 3, range, 9);
            let b2 = &(&g * &strict_upper(rng, range)) * &g_inv;
            let b3 = &(&g * &strict_upper(rng, range)) * &g_inv;
            (
                vec![j2, a2, a3],
                vec![SmallMatrix::zero(3).expect("3x3"), b2, b3],
            )
        }
    }
}

fn with_zero_partner(
    first: SmallMatrix,
    a2: SmallMatrix,
    a3: SmallMatrix,
    rng: &mut impl Rng,
    range: i64,
) -> (Vec<SmallMatrix>, Vec<SmallMatrix>) {
    let (g, g_inv) = random_unimodular(rng, 3, range, 9);
    let b2 = &(&g * &a2) * &g_inv;
    let b3 = &(&g * &a3) * &g_inv;
    (
        vec![first, a2, a3],
        vec![SmallMatrix::zero(3).expect("3x3"), b2, b3],
    )
}

fn hide(mats: Vec<SmallMatrix>, rng: &mut impl Rng, range: i64) -> NilTuple {
    let (g, g_inv) = random_unimodular(rng, 3, range, 9);
    NilTuple::new(3, mats.iter().map(|m| &(&g * m) * &g_inv).collect())
        .expect("nilpotent by construction")
}

/// A pair of 3-tuples of 3×3 nilpotent matrices from `family`.
///
/// Template pairs are moved by independent random changes of basis.
pub fn gen_pair(family: PairFamily, rng: &mut impl Rng, range: i64) -> (NilTuple, NilTuple) {
    match family {
        PairFamily::Conjugate => {
            let a = random_tuple(rng, 3, 3);
            let (g, g_inv) = random_unimodular(rng, 3, range, 9);
            let b = a.conjugate_with(&g, &g_inv).expect("3x3");
            (a, b)
        }
        PairFamily::StrictUpper => {
            let mut su = || {
                NilTuple::new(
                    3,
                    (0..3).map(|_| random_strict_upper(rng, 3, range)).collect(),
                )
                .expect("nilpotent")
            };
            let a = su();
            (a, su())
        }
        PairFamily::Template(t) => {
            let (a, b) = template_pair(t, rng, range);
            (hide(a, rng, range), hide(b, rng, range))
        }
        PairFamily::Independent => (random_tuple(rng, 3, 3), random_tuple(rng, 3, 3)),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub seed: u64,
    pub trial: u64,
    pub family: String,
    pub word: String,
    #[serde(serialize_with = "ser_tuple")]
    pub a: NilTuple,
    #[serde(serialize_with = "ser_tuple")]
    pub b: NilTuple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub family: String,
    pub seed: u64,
    pub range: i64,
    pub checked: u64,
    pub s33_agreeing: u64,
    /// Template pairs that failed the `S_{3,3}` re-check (not counted as agreeing).
    pub template_rejects: u64,
    pub violations: Vec<Violation>,
}

impl TheoremReport {
    pub fn separated_by_s33(&self) -> u64 {
        self.checked - self.s33_agreeing
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.template_rejects == 0
    }
}

enum Outcome {
    Separated { template: bool },
    Agreeing,
    Violation(Violation),
}

/// For each pair agreeing on `S_{3,3}`, checks agreement on all of `P_{3,3}`.
pub fn fuzz_theorem(trials: u64, seed: u64, family: PairFamily, range: i64) -> TheoremReport {
    let s33 = builtin(SetName::S33);
    let pprime = builtin(SetName::Pprime33);
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let (a, b) = gen_pair(family, &mut stream(seed, i), range);
            if first_disagreement(&a, &b, &s33.words)
                .expect("3 letters")
                .is_some()
            {
                return Outcome::Separated {
                    template: matches!(family, PairFamily::Template(_)),
                };
            }
            match first_disagreement(&a, &b, &pprime.words).expect("3 letters") {
                None => Outcome::Agreeing,
                Some(w) => Outcome::Violation(Violation {
                    seed,
                    trial: i,
                    family: family.to_string(),
                    word: w.to_string(),
                    a,
                    b,
                }),
            }
        })
        .collect();
    let mut report = TheoremReport {
        family: family.to_string(),
        seed,
        range,
        checked: trials,
        s33_agreeing: 0,
        template_rejects: 0,
        violations: Vec::new(),
    };
    for o in outcomes {
        match o {
            Outcome::Separated { template } => report.template_rejects += u64::from(template),
            Outcome::Agreeing => report.s33_agreeing += 1,
            Outcome::Violation(v) => {
                report.s33_agreeing += 1;
                report.violations.push(v);
            }
        }
    }
    report
}

/// Element of the centralizer of `J₁` (`stabilizer = J1`) or `J₂`.
pub fn random_stabilizer(rng: &mut impl Rng, stabilizer: JordanTag, range: i64) -> SmallMatrix {
    let z = Scalar::zero;
    let r = |rng: &mut _| random_rational(rng, range);
    let nz = |rng: &mut _| random_nonzero_rational(rng, range);
    match stabilizer {
        JordanTag::J2 => {
            let (c0, c1, c2) = (nz(rng), r(rng), r(rng));
            mat3([
                [c0.clone(), c1.clone(), c2],
                [z(), c0.clone(), c1],
                [z(), z(), c0],
            ])
        }
        _ => {
            let a = nz(rng);
            mat3([
                [a.clone(), r(rng), r(rng)],
                [z(), a, z()],
                [z(), r(rng), nz(rng)],
            ])
        }
    }
}

/// Random instance of a template with its side conditions.
pub fn random_template_instance(kind: CanonKind, rng: &mut impl Rng, range: i64) -> SmallMatrix {
    let z = Scalar::zero;
    let one = scalar::one;
    let r = |rng: &mut _| random_rational(rng, range);
    let nz = |rng: &mut _| random_nonzero_rational(rng, range);
    match kind {
        CanonKind::VI | CanonKind::WI => strict_upper(rng, range),
        CanonKind::VII => {
            let a5 = r(rng);
            mat3([
                [z(), z(), r(rng)],
                [z(), a5.clone(), -(&a5 * &a5)],
                [z(), one(), -a5],
            ])
        }
        CanonKind::VIII => {
            let a1 = r(rng);
            let (a2, a6) = if a1.is_zero() {
                if rng.gen_bool(0.5) {
                    (z(), r(rng))
                } else {
                    (r(rng), z())
                }
            } else {
                let a2 = nz(rng);
                let a6 = &a1 * &a1 * &a1 / &a2;
                (a2, a6)
            };
            mat3([
                [a1.clone(), a2, -(&a1 * &a1)],
                [z(), -a1, a6],
                [one(), z(), z()],
            ])
        }
        CanonKind::VIV => {
            let (a1, a3, a4, a7) = (r(rng), nz(rng), nz(rng), r(rng));
            let a2 = -(&a1 * &a1 + &a3 * &a7) / &a4;
            let a8 = -(&a1 * &a2) / &a3;
            mat3([[a1.clone(), a2, a3], [a4, z(), z()], [a7, a8, -a1]])
        }
        CanonKind::WII => mat3([[z(), z(), r(rng)], [z(), z(), z()], [z(), nz(rng), z()]]),
        CanonKind::WIII => mat3([[z(), z(), r(rng)], [nz(rng), z(), z()], [z(), z(), z()]]),
        CanonKind::WIV => {
            let (a4, a5, a8) = (nz(rng), r(rng), nz(rng));
            let a6 = -(&a5 * &a5) / &a8;
            mat3([[z(), z(), z()], [a4, a5.clone(), a6], [z(), a8, -a5]])
        }
        CanonKind::WV => {
            let (a7, a8) = (nz(rng), r(rng));
            let a6 = r(rng);
            let a5 = if a6.is_zero() { z() } else { r(rng) };
            let a3 = -(&a5 * &a5 + &a6 * &a8) / &a7;
            let a2 = if a6.is_zero() {
                r(rng)
            } else {
                &a3 * &a5 / &a6
            };
            mat3([[z(), a2, a3], [z(), a5.clone(), a6], [a7, a8, -a5]])
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonFailure {
    pub trial: u64,
    pub reason: String,
    #[serde(serialize_with = "ser_tuple")]
    pub input: NilTuple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonReport {
    pub stabilizer: String,
    pub seed: u64,
    pub trials: u64,
    pub passed_trials: u64,
    pub tags: BTreeMap<String, u64>,
    pub failures: Vec<CanonFailure>,
}

impl CanonReport {
    pub fn all_tags_hit(&self) -> bool {
        self.tags.values().all(|&n| n > 0)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.all_tags_hit()
    }
}

fn canon_sample(
    rng: &mut impl Rng,
    stabilizer: JordanTag,
    family: &[CanonKind],
    range: i64,
) -> SmallMatrix {
    match rng.gen_range(0..3) {
        0 => random_nilpotent(rng, 3),
        1 => {
            let ops = rng.gen_range(0..=2);
            random_nilpotent_with(rng, 3, range, ops)
        }
        _ => {
            let kind = family[rng.gen_range(0..family.len())];
            let m = random_template_instance(kind, rng, range);
            let s = random_stabilizer(rng, stabilizer, range);
            &(&s * &m) * &s.inverse().expect("invertible")
        }
    }
}

fn canon_trial(
    i: u64,
    seed: u64,
    stabilizer: JordanTag,
    range: i64,
) -> std::result::Result<CanonKind, CanonFailure> {
    let family: &[CanonKind] = if stabilizer == JordanTag::J1 {
        &CanonKind::V
    } else {
        &CanonKind::W
    };
    let rng = &mut stream(seed, i);
    let j = stabilizer.matrix();
    let a2 = canon_sample(rng, stabilizer, family, range);
    let a3 = random_nilpotent(rng, 3);
    let input = NilTuple::new(3, vec![j.clone(), a2.clone(), a3.clone()]).expect("nilpotent");
    let fail = |reason: String| CanonFailure {
        trial: i,
        reason,
        input: input.clone(),
    };
    let res = if stabilizer == JordanTag::J1 {
        stab_canon_j1(&a2)
    } else {
        stab_canon_j2(&a2)
    }
    .map_err(|e| fail(e.to_string()))?;
    if res.g.apply(&j) != j {
        return Err(fail("change of basis moves the Jordan matrix".into()));
    }
    if res.g.apply(&a2) != res.matrix {
        return Err(fail("reported matrix differs from g A g^-1".into()));
    }
    let hits = matching_templates(family, &res.matrix);
    if hits != [res.kind] {
        return Err(fail(format!(
            "templates matched: {hits:?}, tag {}",
            res.kind
        )));
    }
    let p33 = builtin(SetName::P33);
    let moved = res.g.apply_tuple(&input);
    if evaluate_set(&input, &p33).expect("3x3") != evaluate_set(&moved, &p33).expect("3x3") {
        return Err(fail("P33 values changed".into()));
    }
    Ok(res.kind)
}

/// Reduces random second matrices under the centralizer of `J₁` or `J₂`.
pub fn fuzz_canon(
    trials: u64,
    seed: u64,
    stabilizer: JordanTag,
    range: i64,
) -> Result<CanonReport> {
    let family: &[CanonKind] = match stabilizer {
        JordanTag::J1 => &CanonKind::V,
        JordanTag::J2 => &CanonKind::W,
        JordanTag::Zero => return Err(Error::Usage("stabilizer must be J1 or J2".into())),
    };
    let results: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|i| canon_trial(i, seed, stabilizer, range))
        .collect();
    let mut tags: BTreeMap<String, u64> =
        family.iter().map(|k| (k.as_str().to_string(), 0)).collect();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(k) => *tags.get_mut(k.as_str()).expect("family tag") += 1,
            Err(f) => failures.push(f),
        }
    }
    Ok(CanonReport {
        stabilizer: stabilizer.to_string(),
        seed,
        trials,
        passed_trials: trials - failures.len() as u64,
        tags,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::matches_template;
    use crate::eval::separate;
    use crate::sampling::DEFAULT_RANGE;

    #[test]
    fn template_instances_match() {
        let mut rng = stream(3, 0);
        for kind in CanonKind::V.iter().chain(CanonKind::W.iter()) {
            for _ in 0..200 {
                let m = random_template_instance(*kind, &mut rng, DEFAULT_RANGE);
                assert!(matches_template(*kind, &m), "{kind} {m}");
            }
        }
    }

    #[test]
    fn stabilizers_fix_jordan() {
        let mut rng = stream(4, 0);
        for tag in [JordanTag::J1, JordanTag::J2] {
            for _ in 0..100 {
                let s = random_stabilizer(&mut rng, tag, DEFAULT_RANGE);
                assert_eq!(&s * &tag.matrix(), &tag.matrix() * &s);
                assert!(!s.det().is_zero());
            }
        }
    }

    #[test]
    fn template_pairs_agree_on_s33() {
        let s33 = builtin(SetName::S33);
        for t in Template::ALL {
            for i in 0..50 {
                let (a, b) = gen_pair(PairFamily::Template(t), &mut stream(9, i), DEFAULT_RANGE);
                assert_eq!(separate(&a, &b, &s33).unwrap(), None, "{}", t.as_str());
            }
        }
    }

    #[test]
    fn strict_upper_pairs_vanish() {
        for i in 0..20 {
            let (a, b) = gen_pair(PairFamily::StrictUpper, &mut stream(1, i), DEFAULT_RANGE);
            for t in [a, b] {
                assert!(evaluate_set(&t, &builtin(SetName::P33))
                    .unwrap()
                    .iter()
                    .all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn family_names_roundtrip() {
        for f in PairFamily::all() {
            assert_eq!(f.to_string().parse::<PairFamily>().unwrap(), f);
        }
        assert_eq!(
            "j2zero-upper".parse::<PairFamily>().unwrap(),
            PairFamily::Template(Template::J2ZeroUpper)
        );
        assert!(matches!(
            "nope".parse::<PairFamily>(),
            Err(Error::UnknownTemplate(_))
        ));
    }

    #[test]
    fn reports_are_reproducible() {
        let a = fuzz_theorem(30, 5, PairFamily::Independent, DEFAULT_RANGE);
        let b = fuzz_theorem(30, 5, PairFamily::Independent, DEFAULT_RANGE);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = fuzz_canon(60, 5, JordanTag::J2, DEFAULT_RANGE).unwrap();
        let d = fuzz_canon(60, 5, JordanTag::J2, DEFAULT_RANGE).unwrap();
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            serde_json::to_string(&d).unwrap()
        );
        assert!(c.failures.is_empty());
    }
}
