//! Brute-force ground truth that never touches the tree code.
//!
//! Semigroups of genus `g` are found by scanning every `g`-subset of
//! `{1, …, 2g-1}` (the Frobenius number is at most `2g - 1`) and keeping the
//! ones whose complement is closed under addition.

use itertools::Itertools;
use thiserror::Error;

use crate::semigroup::NumericalSemigroup;

/// Largest genus [`brute_force_count`] accepts by default.
pub const COUNT_MAX_GENUS: u32 = 13;
/// Largest genus [`brute_force_children`] accepts.
pub const CHILDREN_MAX_GENUS: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force is limited to genus {cap} (asked for {asked})")]
    Guard { asked: u32, cap: u32 },
}

/// Gap set of a semigroup of genus `len()`, ascending, as a bit mask over
/// `1..=2g-1` (bit `i` set iff `i` is a gap).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GapSet {
    mask: u64,
}

impl GapSet {
    /// Accepts `gaps` if their complement is a numerical semigroup.
    pub fn new(gaps: &[u32]) -> Option<Self> {
        let g = gaps.len() as u32;
        if gaps.iter().any(|&x| x == 0 || x >= 64) {
            return None;
        }
        let mask = gaps.iter().fold(0u64, |m, &x| m | 1 << x);
        let set = Self { mask };
        (set.genus() == g && set.is_closed()).then_some(set)
    }

    pub fn genus(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn frobenius(&self) -> i64 {
        if self.mask == 0 {
            -1
        } else {
            63 - self.mask.leading_zeros() as i64
        }
    }

    pub fn gaps(&self) -> Vec<u32> {
        (1..64).filter(|&i| self.is_gap(i)).collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.genus() >= 1 && self.frobenius() == 2 * self.genus() as i64 - 1
    }

    fn is_gap(&self, i: u32) -> bool {
        i < 64 && self.mask >> i & 1 == 1
    }

    /// Complement closed under addition. Sums above the largest gap are
    /// automatically elements, so only pairs summing to at most the
    /// Frobenius number are checked. Exits on the first violation.
    fn is_closed(&self) -> bool {
        let f = self.frobenius();
        if f < 0 {
            return true;
        }
        let f = f as u32;
        for a in 1..=f {
            if self.is_gap(a) {
                continue;
            }
            for b in a..=f - a {
                if !self.is_gap(b) && self.is_gap(a + b) {
                    return false;
                }
            }
        }
        true
    }
}

/// All gap sets of genus `g`, in lexicographic order of their gap lists.
pub fn brute_force_gap_sets(g: u32) -> Result<Vec<GapSet>, OracleError> {
    brute_force_gap_sets_capped(g, COUNT_MAX_GENUS)
}

pub fn brute_force_gap_sets_capped(g: u32, cap: u32) -> Result<Vec<GapSet>, OracleError> {
    guard(g, cap.min(32))?;
    if g == 0 {
        return Ok(vec![GapSet { mask: 0 }]);
    }
    Ok((1..2 * g)
        .combinations(g as usize)
        .filter_map(|gaps| GapSet::new(&gaps))
        .collect())
}

/// Number of numerical semigroups of genus `g`, `0 <= g <= 13`.
pub fn brute_force_count(g: u32) -> Result<u64, OracleError> {
    brute_force_count_capped(g, COUNT_MAX_GENUS)
}

pub fn brute_force_count_capped(g: u32, cap: u32) -> Result<u64, OracleError> {
    Ok(brute_force_gap_sets_capped(g, cap)?.len() as u64)
}

/// Every nonzero element whose removal leaves a numerical semigroup.
///
/// An element above `frobenius + multiplicity` is never deletable (it is
/// the multiplicity plus an element), so the scan stops there.
pub fn deletable_elements(s: &NumericalSemigroup) -> Vec<u32> {
    (1..=s.generator_ceiling())
        .filter(|&x| s.contains(x))
        .filter(|&x| {
            let mut gaps = s.gaps();
            gaps.push(x);
            gaps.sort_unstable();
            GapSet::new(&gaps).is_some()
        })
        .collect()
}

/// Tree children found by deletion: the semigroups `s ∖ {x}` that are
/// closed and whose Frobenius number is `x`, i.e. whose parent in the tree
/// (adjoin the Frobenius number) is `s`. Ascending in `x`.
pub fn brute_force_children(
    s: &NumericalSemigroup,
) -> Result<Vec<NumericalSemigroup>, OracleError> {
    guard(s.genus(), CHILDREN_MAX_GENUS)?;
    Ok(deletable_elements(s)
        .into_iter()
        .filter(|&x| x as i64 > s.frobenius())
        .map(|x| {
            let mut gaps = s.gaps();
            gaps.push(x);
            NumericalSemigroup::from_gaps(&gaps).expect("closure checked by GapSet")
        })
        .collect())
}

fn guard(g: u32, cap: u32) -> Result<(), OracleError> {
    if g > cap {
        Err(OracleError::Guard { asked: g, cap })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(brute_force_count(0), Ok(1));
        assert_eq!(brute_force_count(1), Ok(1));
        assert_eq!(brute_force_count(3), Ok(4));
        assert_eq!(brute_force_count(5), Ok(12));
        assert_eq!(
            brute_force_count(14),
            Err(OracleError::Guard { asked: 14, cap: 13 })
        );
    }

    #[test]
    fn genus_three_sets() {
        let sets: Vec<_> = brute_force_gap_sets(3)
            .unwrap()
            .iter()
            .map(GapSet::gaps)
            .collect();
        assert_eq!(
            sets,
            vec![vec![1, 2, 3], vec![1, 2, 4], vec![1, 2, 5], vec![1, 3, 5]]
        );
    }

    #[test]
    fn gap_set_validation() {
        assert!(GapSet::new(&[1, 2, 4, 7]).unwrap().is_symmetric());
        assert!(GapSet::new(&[1, 5]).is_none());
        assert!(GapSet::new(&[0]).is_none());
        assert!(GapSet::new(&[2]).is_none());
        assert_eq!(GapSet::new(&[]).unwrap().frobenius(), -1);
    }

    #[test]
    fn children_examples() {
        let o2 = NumericalSemigroup::ordinary(2).unwrap();
        assert_eq!(brute_force_children(&o2).unwrap().len(), 3);
        let leaf = NumericalSemigroup::from_gaps(&[1, 2, 4, 7]).unwrap();
        assert!(brute_force_children(&leaf).unwrap().is_empty());
        // generators below the Frobenius number are deletable but not tree edges
        assert_eq!(deletable_elements(&leaf), vec![3, 5]);
        let root = NumericalSemigroup::naturals();
        assert_eq!(
            brute_force_children(&root).unwrap(),
            vec![NumericalSemigroup::ordinary(1).unwrap()]
        );
    }
}
