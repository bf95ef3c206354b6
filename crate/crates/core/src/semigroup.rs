//! Compact numerical semigroups and the child construction used by the tree.
//!
//! A semigroup is stored as a fixed 256-bit membership window. Everything
//! above the Frobenius number is an element, so the window only needs to
//! reach `frobenius + multiplicity` for every semigroup the tree touches,
//! which is at most `3 * genus`. That bounds the supported genus at
//! [`MAX_GENUS`].

use std::fmt;

use thiserror::Error;

/// Number of bits in the membership window.
pub const WINDOW_BITS: u32 = 256;

/// Largest genus whose semigroups (and their children) fit in the window.
///
/// A tree run up to genus `g` needs a window of `3 * g + 3` bits.
pub const MAX_GENUS: u32 = (WINDOW_BITS - 4) / 3;

/// Window length required to enumerate up to `max_genus`.
pub const fn window_for(max_genus: u32) -> u32 {
    3 * max_genus + 3
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemigroupError {
    #[error("{0} is not an effective generator (must be a minimal generator above the Frobenius number {1})")]
    NotEffective(u32, i64),
    #[error("gap set is not closed: {a} + {b} = {sum} is a gap while {a} and {b} are elements")]
    NotClosed { a: u32, b: u32, sum: u32 },
    #[error("0 cannot be a gap")]
    ZeroGap,
    #[error("genus {0} exceeds the window capability (max genus {MAX_GENUS})")]
    WindowExceeded(u32),
}

/// Fixed-width bit set backing the membership window and the generator mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub(crate) struct Bits([u64; 4]);

impl Bits {
    #[inline]
    pub(crate) fn get(&self, i: u32) -> bool {
        i < WINDOW_BITS && (self.0[(i >> 6) as usize] >> (i & 63)) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, i: u32) {
        self.0[(i >> 6) as usize] |= 1 << (i & 63);
    }

    #[inline]
    pub(crate) fn clear(&mut self, i: u32) {
        self.0[(i >> 6) as usize] &= !(1 << (i & 63));
    }

    #[inline]
    pub(crate) fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    /// Bits from `from` (inclusive) upward, everything below cleared.
    #[inline]
    fn above(mut self, from: u32) -> Self {
        let word = (from >> 6) as usize;
        for w in &mut self.0[..word.min(4)] {
            *w = 0;
        }
        if word < 4 {
            self.0[word] &= !0u64 << (from & 63);
        }
        self
    }

    /// Ones in ascending order.
    pub(crate) fn ones(&self) -> Ones {
        Ones {
            words: self.0,
            word: 0,
        }
    }
}

pub(crate) struct Ones {
    words: [u64; 4],
    word: usize,
}

impl Iterator for Ones {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        while self.word < 4 {
            let w = self.words[self.word];
            if w != 0 {
                self.words[self.word] = w & (w - 1);
                return Some(self.word as u32 * 64 + w.trailing_zeros());
            }
            self.word += 1;
        }
        None
    }
}

/// A numerical semigroup with cached genus, Frobenius number, multiplicity
/// and effective generators.
///
/// Values are immutable; [`remove_generator`](Self::remove_generator)
/// returns a fresh semigroup.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct NumericalSemigroup {
    members: Bits,
    effective: Bits,
    genus: u32,
    frobenius: i32,
    multiplicity: u32,
}

impl NumericalSemigroup {
    /// The whole of ℕ₀: genus 0, Frobenius number -1, generated by 1.
    pub fn naturals() -> Self {
        Self::ordinary(0).expect("genus 0 fits the window")
    }

    /// `{0} ∪ {i : i > g}`, the unique semigroup of genus `g` whose gaps are `1..=g`.
    pub fn ordinary(g: u32) -> Result<Self, SemigroupError> {
        if g > MAX_GENUS {
            return Err(SemigroupError::WindowExceeded(g));
        }
        let mut members = Bits([!0; 4]);
        for i in 1..=g {
            members.clear(i);
        }
        let mut effective = Bits::default();
        for e in g + 1..=2 * g + 1 {
            effective.set(e);
        }
        Ok(Self {
            members,
            effective,
            genus: g,
            frobenius: if g == 0 { -1 } else { g as i32 },
            multiplicity: g + 1,
        })
    }

    /// Builds a semigroup from an explicit gap set, validating closure.
    ///
    /// On failure the first violated pair `(a, b)` in lexicographic order is
    /// reported.
    pub fn from_gaps(gaps: &[u32]) -> Result<Self, SemigroupError> {
        let mut sorted = gaps.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.first() == Some(&0) {
            return Err(SemigroupError::ZeroGap);
        }
        let genus = sorted.len() as u32;
        let frobenius = sorted.last().map_or(-1, |&f| f as i64);
        // A closed gap set has frobenius <= 2 * genus - 1, so frobenius plus
        // multiplicity stays inside the window once the genus fits.
        if genus > MAX_GENUS || frobenius >= WINDOW_BITS as i64 {
            return Err(SemigroupError::WindowExceeded(genus));
        }
        let mut members = Bits([!0; 4]);
        for &gap in &sorted {
            members.clear(gap);
        }
        let fro = frobenius.max(0) as u32;
        for a in 1..=fro {
            if !members.get(a) {
                continue;
            }
            for b in a..=fro - a {
                if members.get(b) && !members.get(a + b) {
                    return Err(SemigroupError::NotClosed { a, b, sum: a + b });
                }
            }
        }
        let multiplicity = (1..).find(|&i| members.get(i)).expect("finite gap set");
        let mut s = Self {
            members,
            effective: Bits::default(),
            genus,
            frobenius: frobenius as i32,
            multiplicity,
        };
        for e in s.minimal_generators() {
            if e as i64 > frobenius {
                s.effective.set(e);
            }
        }
        Ok(s)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// Largest gap, or -1 for ℕ₀.
    pub fn frobenius(&self) -> i64 {
        self.frobenius as i64
    }

    /// Smallest nonzero element.
    pub fn multiplicity(&self) -> u32 {
        self.multiplicity
    }

    #[inline]
    pub fn contains(&self, i: u32) -> bool {
        i as i64 > self.frobenius as i64 || self.members.get(i)
    }

    /// Gaps in ascending order.
    pub fn gaps(&self) -> Vec<u32> {
        (1..=self.frobenius.max(0) as u32)
            .filter(|&i| !self.contains(i))
            .collect()
    }

    /// Ascending list of the cached effective generators.
    pub fn effective_generators(&self) -> Vec<u32> {
        self.effective.ones().collect()
    }

    /// Number of effective generators, i.e. the number of tree children.
    #[inline]
    pub fn child_count(&self) -> u32 {
        self.effective.count()
    }

    /// Minimal generators recomputed from scratch by the definition scan.
    ///
    /// Nothing above `frobenius + multiplicity` can be minimal: subtracting
    /// the multiplicity lands above the Frobenius number, inside the semigroup.
    /// ℕ₀ is the one exception, with generator 1 above `-1 + 1`.
    pub fn minimal_generators(&self) -> Vec<u32> {
        let top = self.generator_ceiling();
        (1..=top)
            .filter(|&x| self.contains(x) && !self.is_sum_of_two(x))
            .collect()
    }

    /// Largest value that can be a minimal generator.
    pub fn generator_ceiling(&self) -> u32 {
        ((self.frobenius as i64 + self.multiplicity as i64) as u32).max(self.multiplicity)
    }

    /// True when `x` is a sum of two nonzero elements.
    fn is_sum_of_two(&self, x: u32) -> bool {
        (self.multiplicity..=x / 2).any(|a| self.contains(a) && self.contains(x - a))
    }

    pub fn is_ordinary(&self) -> bool {
        self.multiplicity == self.genus + 1
    }

    pub fn is_symmetric(&self) -> bool {
        self.genus >= 1 && self.frobenius as i64 == 2 * self.genus as i64 - 1
    }

    /// `self ∖ {e}` for an effective generator `e`.
    pub fn remove_generator(&self, e: u32) -> Result<Self, SemigroupError> {
        if !self.effective.get(e) {
            return Err(SemigroupError::NotEffective(e, self.frobenius()));
        }
        if self.genus >= MAX_GENUS {
            return Err(SemigroupError::WindowExceeded(self.genus + 1));
        }
        Ok(self.child(e))
    }

    /// Child construction without validation; `e` must be an effective
    /// generator and the child genus must fit the window.
    ///
    /// Removing the multiplicity of an ordinary semigroup yields the next
    /// ordinary semigroup. Otherwise the multiplicity survives, the parent's
    /// effective generators above `e` stay minimal, and the only new
    /// candidate is `e + multiplicity`.
    #[inline]
    pub(crate) fn child(&self, e: u32) -> Self {
        debug_assert!(self.effective.get(e));
        if e == self.multiplicity {
            return Self::ordinary(self.genus + 1).expect("genus checked by caller");
        }
        let mut members = self.members;
        members.clear(e);
        let mut child = Self {
            members,
            effective: self.effective.above(e + 1),
            genus: self.genus + 1,
            frobenius: e as i32,
            multiplicity: self.multiplicity,
        };
        let candidate = e + self.multiplicity;
        if !child.is_sum_of_two(candidate) {
            child.effective.set(candidate);
        }
        child
    }

    /// The tree parent: `self ∪ {frobenius}`. `None` for ℕ₀.
    pub fn parent(&self) -> Option<Self> {
        let mut gaps = self.gaps();
        gaps.pop()?;
        Some(Self::from_gaps(&gaps).expect("adjoining the Frobenius number keeps closure"))
    }

    /// Tree children in ascending order of the removed generator.
    pub fn children(&self) -> impl Iterator<Item = NumericalSemigroup> + '_ {
        self.effective.ones().map(move |e| self.child(e))
    }
}

impl fmt::Display for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gaps: {}", join(&self.gaps()))
    }
}

impl fmt::Debug for NumericalSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumericalSemigroup")
            .field("gaps", &self.gaps())
            .field("frobenius", &self.frobenius)
            .field("multiplicity", &self.multiplicity)
            .field("effective", &self.effective_generators())
            .finish()
    }
}

/// Comma-separated rendering, no spaces.
pub(crate) fn join(values: &[u32]) -> String {
    values
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaps(g: &[u32]) -> NumericalSemigroup {
        NumericalSemigroup::from_gaps(g).unwrap()
    }

    #[test]
    fn naturals_is_root() {
        let n = NumericalSemigroup::naturals();
        assert_eq!(n.genus(), 0);
        assert_eq!(n.frobenius(), -1);
        assert_eq!(n.multiplicity(), 1);
        assert_eq!(n.effective_generators(), vec![1]);
        assert_eq!(n.minimal_generators(), vec![1]);
        assert!(n.is_ordinary());
        assert!(!n.is_symmetric());
        assert_eq!(n, gaps(&[]));
    }

    #[test]
    fn ordinary_generators() {
        assert_eq!(
            NumericalSemigroup::ordinary(2)
                .unwrap()
                .effective_generators(),
            vec![3, 4, 5]
        );
        assert_eq!(NumericalSemigroup::ordinary(5).unwrap().child_count(), 6);
        assert_eq!(
            NumericalSemigroup::ordinary(3)
                .unwrap()
                .minimal_generators(),
            vec![4, 5, 6, 7]
        );
        assert_eq!(
            NumericalSemigroup::ordinary(4)
                .unwrap()
                .effective_generators(),
            vec![5, 6, 7, 8, 9]
        );
        assert!(NumericalSemigroup::ordinary(7).unwrap().is_ordinary());
        assert_eq!(gaps(&[1, 2]), NumericalSemigroup::ordinary(2).unwrap());
    }

    #[test]
    fn three_five_semigroup() {
        let s = gaps(&[1, 2, 4, 7]);
        assert_eq!(s.minimal_generators(), vec![3, 5]);
        assert!(s.effective_generators().is_empty());
        assert!(s.is_symmetric());
        assert!(!s.is_ordinary());
        assert_eq!(s.to_string(), "gaps: 1,2,4,7");
    }

    #[test]
    fn from_gaps_reports_first_violation() {
        // 2 and 3 are elements but 5 is a gap
        assert_eq!(
            NumericalSemigroup::from_gaps(&[1, 5]),
            Err(SemigroupError::NotClosed { a: 2, b: 3, sum: 5 })
        );
        assert_eq!(
            NumericalSemigroup::from_gaps(&[0, 1]),
            Err(SemigroupError::ZeroGap)
        );
    }

    #[test]
    fn ordinary_children_counts() {
        let o = NumericalSemigroup::ordinary(2).unwrap();
        let c3 = o.remove_generator(3).unwrap();
        assert_eq!(c3, NumericalSemigroup::ordinary(3).unwrap());
        assert_eq!(c3.child_count(), 4);
        assert_eq!(o.remove_generator(4).unwrap().child_count(), 2);
        assert_eq!(o.remove_generator(5).unwrap().child_count(), 0);
    }

    #[test]
    fn parent_undoes_removal() {
        let s = NumericalSemigroup::from_gaps(&[1, 2, 3, 5]).unwrap();
        for e in s.effective_generators() {
            assert_eq!(s.remove_generator(e).unwrap().parent(), Some(s));
        }
        assert_eq!(NumericalSemigroup::naturals().parent(), None);
    }

    #[test]
    fn remove_rejects_non_effective() {
        let o = NumericalSemigroup::ordinary(2).unwrap();
        assert!(matches!(
            o.remove_generator(6),
            Err(SemigroupError::NotEffective(6, 2))
        ));
        let s = gaps(&[1, 2, 4, 7]);
        assert!(s.remove_generator(3).is_err());
        assert!(s.remove_generator(8).is_err());
    }

    #[test]
    fn capacity_limits() {
        assert!(NumericalSemigroup::ordinary(MAX_GENUS).is_ok());
        assert_eq!(
            NumericalSemigroup::ordinary(MAX_GENUS + 1),
            Err(SemigroupError::WindowExceeded(MAX_GENUS + 1))
        );
        let top = NumericalSemigroup::ordinary(MAX_GENUS).unwrap();
        assert!(top.remove_generator(MAX_GENUS + 2).is_err());
        assert!(window_for(MAX_GENUS) <= WINDOW_BITS);
    }

    #[test]
    fn bits_above_and_ones() {
        let mut b = Bits::default();
        for i in [0, 5, 63, 64, 130, 255] {
            b.set(i);
        }
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 5, 63, 64, 130, 255]);
        assert_eq!(b.above(64).ones().collect::<Vec<_>>(), vec![64, 130, 255]);
        assert_eq!(b.above(6).count(), 4);
        assert_eq!(b.above(256).count(), 0);
    }
}
