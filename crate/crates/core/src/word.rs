//! Trace words `tr(Y_{i₁}⋯Y_{i_k})` and index relabelings.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonempty sequence of 1-based matrix indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct TraceWord(Vec<usize>);

impl TraceWord {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if let Some(&bad) = letters.iter().find(|&&l| l == 0) {
            return Err(Error::LetterOutOfRange { letter: bad, d: 0 });
        }
        Ok(TraceWord(letters))
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Largest letter used.
    pub fn max_letter(&self) -> usize {
        *self.0.iter().max().expect("nonempty")
    }

    /// Per-index letter counts `(t₁, …, t_d)`.
    pub fn multidegree(&self, d: usize) -> Vec<usize> {
        let mut m = vec![0; d.max(self.max_letter())];
        for &l in &self.0 {
            m[l - 1] += 1;
        }
        m
    }

    pub fn rotations(&self) -> impl Iterator<Item = TraceWord> + '_ {
        let n = self.0.len();
        (0..n).map(move |s| {
            let mut v = Vec::with_capacity(n);
            v.extend_from_slice(&self.0[s..]);
            v.extend_from_slice(&self.0[..s]);
            TraceWord(v)
        })
    }

    /// Lexicographically least rotation.
    pub fn canonical(&self) -> TraceWord {
        self.rotations().min().expect("nonempty")
    }

    pub fn is_canonical(&self) -> bool {
        self.rotations().all(|r| self.0 <= r.0)
    }

    pub fn cyclically_equal(&self, other: &TraceWord) -> bool {
        self.0.len() == other.0.len() && self.canonical() == other.canonical()
    }

    /// Relabels every letter `i` as `π(i)`.
    pub fn permute(&self, pi: &Permutation) -> Result<TraceWord> {
        self.0
            .iter()
            .map(|&l| pi.apply(l))
            .collect::<Result<Vec<_>>>()
            .map(TraceWord)
    }
}

impl FromStr for TraceWord {
    type Err = Error;

    /// Digit strings such as `"112212"`; letters are limited to 1–9.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let letters = s
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(v) if v >= 1 => Ok(v as usize),
                _ => Err(Error::InvalidWord(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.is_empty() {
            return Err(Error::InvalidWord(s.to_string()));
        }
        TraceWord::new(letters)
    }
}

impl TryFrom<String> for TraceWord {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TraceWord> for String {
    fn from(w: TraceWord) -> String {
        w.to_string()
    }
}

impl fmt::Display for TraceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l <= 9) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Shorthand for tests and tables: `w("112")`.
pub fn w(s: &str) -> TraceWord {
    s.parse().expect("valid word literal")
}

/// A bijection of `1..=d`, stored as the image list `[π(1), …, π(d)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            if i == 0 || i > d || seen[i - 1] {
                return Err(Error::InvalidPermutation(d));
            }
            seen[i - 1] = true;
        }
        Ok(Permutation(images))
    }

    pub fn identity(d: usize) -> Self {
        Permutation((1..=d).collect())
    }

    /// Swaps `i` and `j`.
    pub fn transposition(d: usize, i: usize, j: usize) -> Result<Self> {
        let mut v: Vec<usize> = (1..=d).collect();
        if i == 0 || j == 0 || i > d || j > d {
            return Err(Error::InvalidPermutation(d));
        }
        v.swap(i - 1, j - 1);
        Ok(Permutation(v))
    }

    pub fn d(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> Result<usize> {
        self.0
            .get(i.wrapping_sub(1))
            .copied()
            .ok_or(Error::LetterOutOfRange {
                letter: i,
                d: self.d(),
            })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p - 1] = i + 1;
        }
        Permutation(inv)
    }

    /// All permutations of `1..=d` in lexicographic order of image lists.
    pub fn all(d: usize) -> Vec<Permutation> {
        fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if prefix.len() == used.len() {
                out.push(Permutation(prefix.clone()));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i + 1);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; d], &mut out);
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_and_multidegree() {
        let x = w("112212");
        assert_eq!(x.degree(), 6);
        assert_eq!(x.multidegree(2), vec![3, 3]);
        assert_eq!(w("123").multidegree(3), vec![1, 1, 1]);
        assert_eq!(w("11").multidegree(3), vec![2, 0, 0]);
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(w("212").canonical(), w("122"));
        assert_eq!(w("3312").canonical(), w("1233"));
        assert!(w("112212").is_canonical());
        assert!(w("1212").cyclically_equal(&w("2121")));
        assert!(!w("123").cyclically_equal(&w("132")));
    }

    #[test]
    fn relabeling() {
        let swap = Permutation::transposition(2, 1, 2).unwrap();
        assert_eq!(w("112").permute(&swap).unwrap(), w("221"));
        assert_eq!(
            w("112").permute(&Permutation::identity(2)).unwrap(),
            w("112")
        );
        let pi = Permutation::new(vec![2, 3, 1]).unwrap();
        assert_eq!(pi.inverse().images(), &[3, 1, 2]);
        assert!(w("14").permute(&pi).is_err());
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<TraceWord>().is_err());
        assert!("102".parse::<TraceWord>().is_err());
        assert!("1a".parse::<TraceWord>().is_err());
        assert!(Permutation::new(vec![1, 1, 2]).is_err());
        assert_eq!(Permutation::all(3).len(), 6);
    }
}
