//! The named invariant sets.
//!
//! Word order follows the usual display order of each set: for the
//! 3×3 three-matrix sets, the two-letter families are listed pair by pair
//! (`12`, `13`, `23`, each with its five words), then the three-letter
//! words with permutations in lexicographic order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Permutation, TraceWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetName {
    /// `S_{2,d}`: 2×2, any `d`.
    S2,
    /// `S_{3,2}`.
    S32,
    /// `S_{3,3}`, the minimal separating set.
    S33,
    /// `P_{3,3} = S_{3,3} ⊔ P′_{3,3}`, the minimal generating set.
    P33,
    /// `P′_{3,3}`.
    Pprime33,
}

impl SetName {
    pub const ALL: [SetName; 5] = [
        SetName::S2,
        SetName::S32,
        SetName::S33,
        SetName::P33,
        SetName::Pprime33,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SetName::S2 => "S2",
            SetName::S32 => "S32",
            SetName::S33 => "S33",
            SetName::P33 => "P33",
            SetName::Pprime33 => "Pprime33",
        }
    }

    pub fn size(self) -> usize {
        match self {
            SetName::S2 => 2,
            _ => 3,
        }
    }

    /// Fixed number of matrices, `None` for `S2`.
    pub fn fixed_d(self) -> Option<usize> {
        match self {
            SetName::S2 => None,
            SetName::S32 => Some(2),
            _ => Some(3),
        }
    }
}

impl FromStr for SetName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s2" => Ok(SetName::S2),
            "s32" => Ok(SetName::S32),
            "s33" => Ok(SetName::S33),
            "p33" => Ok(SetName::P33),
            "pprime33" | "p'33" => Ok(SetName::Pprime33),
            _ => Err(Error::UnknownSet(s.to_string())),
        }
    }
}

impl fmt::Display for SetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub name: SetName,
    pub words: Vec<TraceWord>,
    pub d: usize,
    pub size: usize,
}

impl InvariantSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Membership up to cyclic rotation.
    pub fn contains(&self, w: &TraceWord) -> bool {
        self.position(w).is_some()
    }

    pub fn position(&self, w: &TraceWord) -> Option<usize> {
        let c = w.canonical();
        self.words
            .iter()
            .position(|x| x.degree() == w.degree() && x.canonical() == c)
    }

    /// Same set with `w` removed (up to rotation).
    pub fn without(&self, w: &TraceWord) -> Vec<TraceWord> {
        let c = w.canonical();
        self.words
            .iter()
            .filter(|x| x.canonical() != c)
            .cloned()
            .collect()
    }
}

fn word(letters: &[usize]) -> TraceWord {
    TraceWord::new(letters.to_vec()).expect("nonempty")
}

/// `tr(Y_iY_j)` for `i<j`, then `tr(Y_iY_jY_k)` for `i<j<k`.
fn s2_words(d: usize) -> Vec<TraceWord> {
    let mut out = Vec::new();
    for i in 1..=d {
        for j in i + 1..=d {
            out.push(word(&[i, j]));
        }
    }
    for i in 1..=d {
        for j in i + 1..=d {
            for k in j + 1..=d {
                out.push(word(&[i, j, k]));
            }
        }
    }
    out
}

/// The five two-letter words `ij, iij, ijj, iijj, iijjij`.
fn pair_words(i: usize, j: usize) -> Vec<TraceWord> {
    vec![
        word(&[i, j]),
        word(&[i, i, j]),
        word(&[i, j, j]),
        word(&[i, i, j, j]),
        word(&[i, i, j, j, i, j]),
    ]
}

fn s33_words() -> Vec<TraceWord> {
    let mut out = Vec::new();
    for (i, j) in [(1, 2), (1, 3), (2, 3)] {
        out.extend(pair_words(i, j));
    }
    out.push(word(&[1, 2, 3]));
    out.push(word(&[1, 3, 2]));
    for p in Permutation::all(3) {
        let [i, j, k] = [p.images()[0], p.images()[1], p.images()[2]];
        out.push(word(&[i, i, j, k]));
    }
    out.push(word(&[1, 1, 2, 1, 3]));
    out.push(word(&[2, 2, 1, 2, 3]));
    out.push(word(&[3, 3, 1, 3, 2]));
    out
}

fn pprime33_words() -> Vec<TraceWord> {
    let perms = Permutation::all(3);
    let ijk = |p: &Permutation| [p.images()[0], p.images()[1], p.images()[2]];
    let mut out = Vec::new();
    for p in &perms {
        let [i, j, k] = ijk(p);
        out.push(word(&[i, i, j, j, k]));
    }
    for p in &perms {
        let [i, j, k] = ijk(p);
        out.push(word(&[i, i, j, j, i, k]));
    }
    out.push(word(&[1, 1, 2, 2, 3, 3]));
    out
}

/// Built-in set by name. `d` is only free for `S2`; for the others it must
/// match the set's fixed count.
pub fn builtin_set(name: SetName, d: usize) -> Result<InvariantSet> {
    if let Some(fixed) = name.fixed_d() {
        if d != fixed {
            return Err(Error::Incompatible {
                set: name.to_string(),
                expected_d: fixed,
                expected_size: name.size(),
                d,
                size: name.size(),
            });
        }
    }
    let words = match name {
        SetName::S2 => s2_words(d),
        SetName::S32 => pair_words(1, 2),
        SetName::S33 => s33_words(),
        SetName::Pprime33 => pprime33_words(),
        SetName::P33 => {
            let mut v = s33_words();
            v.extend(pprime33_words());
            v
        }
    };
    Ok(InvariantSet {
        name,
        words,
        d,
        size: name.size(),
    })
}

/// Built-in set with its natural `d` (`S2` needs an explicit count).
pub fn builtin(name: SetName) -> InvariantSet {
    builtin_set(name, name.fixed_d().unwrap_or(3)).expect("fixed d")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::w;

    fn binom(n: usize, k: usize) -> usize {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn cardinalities() {
        assert_eq!(builtin(SetName::S33).len(), 26);
        assert_eq!(builtin(SetName::P33).len(), 39);
        assert_eq!(builtin(SetName::Pprime33).len(), 13);
        assert_eq!(builtin(SetName::S32).len(), 5);
        for d in 1..=7 {
            assert_eq!(
                builtin_set(SetName::S2, d).unwrap().len(),
                binom(d, 2) + binom(d, 3)
            );
        }
        assert!(builtin_set(SetName::S2, 1).unwrap().is_empty());
    }

    #[test]
    fn s32_order() {
        let s = builtin(SetName::S32);
        let expected: Vec<TraceWord> = ["12", "112", "122", "1122", "112212"]
            .iter()
            .map(|x| w(x))
            .collect();
        assert_eq!(s.words, expected);
    }

    #[test]
    fn p33_is_disjoint_union() {
        let s = builtin(SetName::S33);
        let pp = builtin(SetName::Pprime33);
        let p = builtin(SetName::P33);
        assert!(s.words.iter().all(|x| p.contains(x)));
        assert!(pp.words.iter().all(|x| !s.contains(x)));
        // no two words of P33 are rotations of each other
        for (i, a) in p.words.iter().enumerate() {
            for b in &p.words[i + 1..] {
                assert!(!a.cyclically_equal(b), "{a} ~ {b}");
            }
        }
    }

    #[test]
    fn wrong_d_rejected() {
        assert!(builtin_set(SetName::S33, 2).is_err());
        assert!("S99".parse::<SetName>().is_err());
        assert_eq!("p33".parse::<SetName>().unwrap(), SetName::P33);
    }
}
