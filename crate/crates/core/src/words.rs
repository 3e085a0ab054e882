//! Reduced words in a finitely generated free group.
//!
//! Words are stored run-length compressed: a sequence of `(generator, exponent)`
//! runs with nonzero exponents and distinct adjacent generators. The expanded
//! letter sequence of such a word is freely reduced, and every element of the
//! free group has exactly one such representation, so structural equality is
//! group equality.

use serde::{Deserialize, Serialize};

/// A freely reduced word. The identity is the empty word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct FreeWord {
    runs: Vec<(u32, i64)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord { runs: Vec::new() }
    }

    /// Single-run word `gen^exp`.
    pub fn letter(gen: u32, exp: i64) -> Self {
        if exp == 0 {
            Self::identity()
        } else {
            FreeWord {
                runs: vec![(gen, exp)],
            }
        }
    }

    /// Free reduction of an arbitrary run sequence (runs may repeat
    /// generators, carry zero exponents, or cancel).
    pub fn reduce(raw: &[(u32, i64)]) -> Self {
        let mut w = FreeWord::identity();
        for &(g, e) in raw {
            w.push_run(g, e);
        }
        w
    }

    fn push_run(&mut self, gen: u32, exp: i64) {
        if exp == 0 {
            return;
        }
        match self.runs.last_mut() {
            Some((g, e)) if *g == gen => {
                *e += exp;
                if *e == 0 {
                    self.runs.pop();
                }
            }
            _ => self.runs.push((gen, exp)),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Reduced word length (sum of absolute exponents).
    pub fn len(&self) -> u64 {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn runs(&self) -> &[(u32, i64)] {
        &self.runs
    }

    /// Largest generator index appearing in the word, if any.
    pub fn max_generator(&self) -> Option<u32> {
        self.runs.iter().map(|&(g, _)| g).max()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        let mut out = self.clone();
        for &(g, e) in &other.runs {
            out.push_run(g, e);
        }
        out
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            runs: self.runs.iter().rev().map(|&(g, e)| (g, -e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Splits off the maximal trailing power of `gen`: returns `(prefix, k)`
    /// with `self = prefix · gen^k` and `prefix` not ending in `gen^±1`.
    pub fn strip_trailing(&self, gen: u32) -> (FreeWord, i64) {
        match self.runs.last() {
            Some(&(g, e)) if g == gen => {
                let mut prefix = self.clone();
                prefix.runs.pop();
                (prefix, e)
            }
            _ => (self.clone(), 0),
        }
    }

    /// True iff the word is a (possibly zero) power of the single generator `gen`.
    pub fn is_power_of(&self, gen: u32) -> bool {
        match self.runs.as_slice() {
            [] => true,
            [(g, _)] => *g == gen,
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cancellation() {
        // x1 x1^-1 -> identity
        assert_eq!(FreeWord::reduce(&[(0, 1), (0, -1)]), FreeWord::identity());
        // x1 x2 x2^-1 x1 -> x1^2
        assert_eq!(
            FreeWord::reduce(&[(0, 1), (1, 1), (1, -1), (0, 1)]),
            FreeWord::letter(0, 2)
        );
    }

    #[test]
    fn word_times_inverse_is_identity() {
        let w = FreeWord::reduce(&[(0, 2), (1, -1), (2, 3), (0, 1)]);
        assert!(w.mul(&w.inverse()).is_identity());
        assert!(w.inverse().mul(&w).is_identity());
    }

    #[test]
    fn strip_trailing_power() {
        let w = FreeWord::reduce(&[(1, 1), (0, 3)]);
        let (prefix, k) = w.strip_trailing(0);
        assert_eq!(prefix, FreeWord::letter(1, 1));
        assert_eq!(k, 3);
        let (p2, k2) = w.strip_trailing(1);
        assert_eq!(p2, w);
        assert_eq!(k2, 0);
    }

    fn raw_word() -> impl Strategy<Value = Vec<(u32, i64)>> {
        prop::collection::vec((0u32..4, -3i64..=3), 0..24)
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(raw in raw_word()) {
            let w = FreeWord::reduce(&raw);
            prop_assert_eq!(FreeWord::reduce(w.runs()), w);
        }

        #[test]
        fn reduce_never_lengthens(raw in raw_word()) {
            let total: u64 = raw.iter().map(|&(_, e)| e.unsigned_abs()).sum();
            prop_assert!(FreeWord::reduce(&raw).len() <= total);
        }

        #[test]
        fn runs_invariant_holds(raw in raw_word()) {
            let w = FreeWord::reduce(&raw);
            for r in w.runs() {
                prop_assert!(r.1 != 0);
            }
            for pair in w.runs().windows(2) {
                prop_assert!(pair[0].0 != pair[1].0);
            }
        }

        #[test]
        fn mul_matches_concat_reduce(a in raw_word(), b in raw_word()) {
            let wa = FreeWord::reduce(&a);
            let wb = FreeWord::reduce(&b);
            let mut cat = a.clone();
            cat.extend_from_slice(&b);
            prop_assert_eq!(wa.mul(&wb), FreeWord::reduce(&cat));
        }
    }
}
