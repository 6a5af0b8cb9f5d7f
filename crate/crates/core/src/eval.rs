//! Evaluating trace words and sets on tuples; separation decisions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{trace_product_refs, SmallMatrix};
use crate::scalar::Scalar;
use crate::sets::InvariantSet;
use crate::tuple::NilTuple;
use crate::word::{Permutation, TraceWord};

/// Largest word length `all_words_agree` will enumerate.
pub const MAX_ENUM_LEN: usize = 8;

pub fn eval_word(t: &NilTuple, w: &TraceWord) -> Result<Scalar> {
    let d = t.d();
    let mats = w
        .letters()
        .iter()
        .map(|&l| {
            if l == 0 || l > d {
                Err(Error::LetterOutOfRange { letter: l, d })
            } else {
                Ok(t.mat(l))
            }
        })
        .collect::<Result<Vec<&SmallMatrix>>>()?;
    trace_product_refs(&mats)
}

pub fn check_compatible(t: &NilTuple, s: &InvariantSet) -> Result<()> {
    if t.size() != s.size || t.d() != s.d {
        return Err(Error::Incompatible {
            set: s.name.to_string(),
            expected_d: s.d,
            expected_size: s.size,
            d: t.d(),
            size: t.size(),
        });
    }
    Ok(())
}

/// Values of every word of `s`, in set order.
pub fn evaluate_set(t: &NilTuple, s: &InvariantSet) -> Result<Vec<Scalar>> {
    check_compatible(t, s)?;
    evaluate_words(t, &s.words)
}

pub fn evaluate_words(t: &NilTuple, words: &[TraceWord]) -> Result<Vec<Scalar>> {
    words.iter().map(|w| eval_word(t, w)).collect()
}

/// First word (in order) on which the tuples differ.
pub fn first_disagreement<'a>(
    a: &NilTuple,
    b: &NilTuple,
    words: impl IntoIterator<Item = &'a TraceWord>,
) -> Result<Option<TraceWord>> {
    for w in words {
        if eval_word(a, w)? != eval_word(b, w)? {
            return Ok(Some(w.clone()));
        }
    }
    Ok(None)
}

/// First word of `s` separating `a` from `b`, if any.
pub fn separate(a: &NilTuple, b: &NilTuple, s: &InvariantSet) -> Result<Option<TraceWord>> {
    check_compatible(a, s)?;
    check_compatible(b, s)?;
    first_disagreement(a, b, &s.words)
}

/// Reorders the matrices so that position `π(i)` holds `t_i`.
///
/// Then `eval_word(permute_tuple(t, π), w) = eval_word(t, w.permute(π⁻¹))`.
pub fn permute_tuple(t: &NilTuple, pi: &Permutation) -> Result<NilTuple> {
    if pi.d() != t.d() {
        return Err(Error::InvalidPermutation(t.d()));
    }
    let inv = pi.inverse();
    let order: Vec<usize> = (1..=t.d())
        .map(|j| inv.apply(j).expect("in range"))
        .collect();
    Ok(t.select(&order))
}

/// One representative (the least rotation) per cyclic class of words over
/// `1..=d` with length `1..=max_len`, ordered by length then lexicographically.
pub fn cyclic_classes(d: usize, max_len: usize) -> Vec<TraceWord> {
    let mut out = Vec::new();
    if d == 0 {
        return out;
    }
    for len in 1..=max_len {
        let mut letters = vec![1usize; len];
        loop {
            let w = TraceWord::new(letters.clone()).expect("nonempty");
            if w.is_canonical() {
                out.push(w);
            }
            // odometer increment, last position fastest
            let mut pos = len;
            while pos > 0 && letters[pos - 1] == d {
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
            letters[pos - 1] += 1;
            for l in &mut letters[pos..] {
                *l = 1;
            }
        }
    }
    out
}

/// Brute-force comparison on all cyclic word classes up to `max_len`.
///
/// Growth is roughly `d^max_len / max_len` words; the bound is capped at
/// [`MAX_ENUM_LEN`].
pub fn all_words_agree(a: &NilTuple, b: &NilTuple, max_len: usize) -> Result<Option<TraceWord>> {
    if max_len == 0 || max_len > MAX_ENUM_LEN {
        return Err(Error::LengthBound(max_len));
    }
    if a.d() != b.d() {
        return Err(Error::TupleLength(a.d(), b.d()));
    }
    if a.size() != b.size() {
        return Err(Error::SizeMismatch(a.size(), b.size()));
    }
    let words = cyclic_classes(a.d(), max_len);
    let hits: Vec<Option<usize>> = words
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let differs = eval_word(a, w).expect("letters in range")
                != eval_word(b, w).expect("letters in range");
            differs.then_some(i)
        })
        .collect();
    Ok(hits.into_iter().flatten().next().map(|i| words[i].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use crate::sets::{builtin, SetName};
    use crate::word::w;

    fn t3(ms: Vec<SmallMatrix>) -> NilTuple {
        NilTuple::new(3, ms).unwrap()
    }

    #[test]
    fn eval_word_examples() {
        let t = t3(vec![SmallMatrix::j2(), SmallMatrix::e(3, 2)]);
        assert_eq!(eval_word(&t, &w("12")).unwrap(), int(1));
        assert_eq!(eval_word(&t, &w("1")).unwrap(), int(0));
        assert_eq!(eval_word(&t, &w("2")).unwrap(), int(0));
        assert!(matches!(
            eval_word(&t, &w("13")),
            Err(Error::LetterOutOfRange { letter: 3, d: 2 })
        ));

        let e = |i, j| SmallMatrix::unit(2, i, j).unwrap();
        let c2 = SmallMatrix::m2([[1, 1], [-1, -1]]);
        let a = NilTuple::new(2, vec![e(1, 2), -&e(2, 1), c2.clone()]).unwrap();
        let b = NilTuple::new(2, vec![e(1, 2), c2, -&e(2, 1)]).unwrap();
        assert_eq!(eval_word(&a, &w("123")).unwrap(), int(-1));
        assert_eq!(eval_word(&b, &w("123")).unwrap(), int(1));
    }

    #[test]
    fn separate_examples() {
        let s32 = builtin(SetName::S32);
        let a = t3(vec![SmallMatrix::j2(), SmallMatrix::e(3, 2)]);
        let b = t3(vec![SmallMatrix::j2(), SmallMatrix::e(1, 2)]);
        assert_eq!(separate(&a, &b, &s32).unwrap(), Some(w("12")));
        assert_eq!(separate(&a, &a, &s32).unwrap(), None);

        let a = t3(vec![
            SmallMatrix::j2(),
            SmallMatrix::m3([[0, 1, 0], [1, 0, -1], [0, 1, 0]]),
        ]);
        let b = t3(vec![
            SmallMatrix::j2(),
            SmallMatrix::m3([[0, 0, 0], [1, 0, 0], [-1, 1, 0]]),
        ]);
        assert_eq!(separate(&a, &b, &s32).unwrap(), Some(w("112")));
        assert_eq!(eval_word(&a, &w("112")).unwrap(), int(0));
        assert_eq!(eval_word(&b, &w("112")).unwrap(), int(-1));
    }

    #[test]
    fn evaluate_set_zero_and_mismatch() {
        let z = NilTuple::zeros(3, 3).unwrap();
        let vals = evaluate_set(&z, &builtin(SetName::P33)).unwrap();
        assert!(vals.iter().all(num_traits::Zero::is_zero));
        assert!(evaluate_set(&z, &builtin(SetName::S32)).is_err());
    }

    #[test]
    fn cyclic_class_counts() {
        // necklaces over 2 letters: 2, 3, 4, 6, 8, 14
        let counts: Vec<usize> = (1..=6)
            .map(|n| {
                cyclic_classes(2, n)
                    .iter()
                    .filter(|x| x.degree() == n)
                    .count()
            })
            .collect();
        assert_eq!(counts, vec![2, 3, 4, 6, 8, 14]);
    }

    #[test]
    fn permutation_examples() {
        let t = t3(vec![
            SmallMatrix::j2(),
            SmallMatrix::e(3, 1),
            SmallMatrix::e(2, 1),
        ]);
        let id = Permutation::identity(3);
        assert_eq!(permute_tuple(&t, &id).unwrap(), t);
        let pi = Permutation::new(vec![2, 3, 1]).unwrap();
        let p = permute_tuple(&t, &pi).unwrap();
        assert_eq!(p.mat(2), t.mat(1));
        assert_eq!(p.mat(3), t.mat(2));
        assert_eq!(p.mat(1), t.mat(3));
        for word in builtin(SetName::P33).words {
            assert_eq!(
                eval_word(&p, &word).unwrap(),
                eval_word(&t, &word.permute(&pi.inverse()).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn length_bound_rejected() {
        let z = NilTuple::zeros(3, 2).unwrap();
        assert!(all_words_agree(&z, &z, 9).is_err());
        assert!(all_words_agree(&z, &z, 0).is_err());
        assert_eq!(all_words_agree(&z, &z, 4).unwrap(), None);
    }
}
