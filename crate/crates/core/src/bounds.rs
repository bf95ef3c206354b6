//! Bound families for `n_g`: the Fibonacci lower bound `2 F_g`, the
//! exponential upper bound `1 + 3 * 2^(g-3)`, Catalan numbers, and the
//! multiset recursions `A_g` and `B_g` whose cardinalities realize the first
//! two.

use std::fmt;
use std::io;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::reference;

/// Largest index whose Fibonacci number fits in 64 bits.
pub const FIBONACCI_MAX_INDEX: u32 = 93;
/// Largest genus for which `A_g` is built (`2 F_g` fits in 64 bits).
pub const MULTISET_A_MAX_GENUS: u32 = 92;
/// Largest genus for which `B_g` is built.
pub const MULTISET_B_MAX_GENUS: u32 = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("{what} is undefined below genus {min} (got {g})")]
    Domain {
        what: &'static str,
        min: u32,
        g: u32,
    },
    #[error("{what} overflows 64 bits at {arg}")]
    Overflow { what: &'static str, arg: u32 },
    #[error("cannot remove {value}: not present in the multiset")]
    MissingElement { value: usize },
    #[error("catalan number C_{0} does not fit in 128 bits")]
    CatalanTooLarge(u32),
}

/// Multiset of small non-negative integers stored as a count per value.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Multiset {
    counts: Vec<u64>,
}

impl Multiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_values(values: &[usize]) -> Self {
        let mut m = Self::new();
        for &v in values {
            m.insert(v, 1);
        }
        m
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        let mut m = Self { counts };
        m.trim();
        m
    }

    pub fn insert(&mut self, value: usize, copies: u64) {
        if copies == 0 {
            return;
        }
        if self.counts.len() <= value {
            self.counts.resize(value + 1, 0);
        }
        self.counts[value] += copies;
    }

    /// Removes exactly one copy of `value`.
    pub fn remove_one(&mut self, value: usize) -> Result<(), BoundsError> {
        match self.counts.get_mut(value) {
            Some(c) if *c > 0 => {
                *c -= 1;
                self.trim();
                Ok(())
            }
            _ => Err(BoundsError::MissingElement { value }),
        }
    }

    pub fn count(&self, value: usize) -> u64 {
        self.counts.get(value).copied().unwrap_or(0)
    }

    /// `(value, multiplicity)` pairs for values present, ascending.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(v, &c)| (v, c))
    }

    /// Every element with repetition, ascending.
    pub fn values(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs()
            .flat_map(|(v, c)| std::iter::repeat_n(v, c as usize))
    }

    /// Total number of elements; `None` on 64-bit overflow.
    pub fn cardinality(&self) -> Option<u64> {
        self.counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
    }

    pub fn max(&self) -> Option<usize> {
        self.pairs().last().map(|(v, _)| v)
    }

    /// Largest element after removing one copy of the maximum.
    pub fn second_max(&self) -> Option<usize> {
        let mut top = self.counts.iter().enumerate().rev().filter(|(_, &c)| c > 0);
        let (v, &c) = top.next()?;
        if c > 1 {
            Some(v)
        } else {
            top.next().map(|(v, _)| v)
        }
    }

    /// Sum of the multisets.
    pub fn union(&self, other: &Multiset) -> Multiset {
        let mut out = self.clone();
        for (v, c) in other.pairs() {
            out.insert(v, c);
        }
        out
    }

    fn trim(&mut self) {
        while self.counts.last() == Some(&0) {
            self.counts.pop();
        }
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.values().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

pub fn fibonacci(i: u32) -> Result<u64, BoundsError> {
    let overflow = BoundsError::Overflow {
        what: "fibonacci",
        arg: i,
    };
    let (mut a, mut b) = (0u64, Some(1u64));
    for _ in 0..i {
        let next = b.and_then(|b| b.checked_add(a));
        a = b.ok_or_else(|| overflow.clone())?;
        b = next;
    }
    Ok(a)
}

/// `2 F_g`, defined for `g >= 2`.
pub fn lower_bound(g: u32) -> Result<u64, BoundsError> {
    if g < 2 {
        return Err(BoundsError::Domain {
            what: "lower bound 2F_g",
            min: 2,
            g,
        });
    }
    fibonacci(g)?.checked_mul(2).ok_or(BoundsError::Overflow {
        what: "lower bound 2F_g",
        arg: g,
    })
}

/// `1 + 3 * 2^(g-3)`, defined for `g >= 3`.
pub fn upper_bound(g: u32) -> Result<u64, BoundsError> {
    if g < 3 {
        return Err(BoundsError::Domain {
            what: "upper bound 1+3*2^(g-3)",
            min: 3,
            g,
        });
    }
    1u64.checked_shl(g - 3)
        .filter(|p| p.leading_zeros() >= 2)
        .and_then(|p| p.checked_mul(3))
        .and_then(|p| p.checked_add(1))
        .ok_or(BoundsError::Overflow {
            what: "upper bound 1+3*2^(g-3)",
            arg: g,
        })
}

/// Exact Catalan number `C_g = binom(2g, g) / (g + 1)`.
///
/// Uses `C_{k+1} = C_k * 2(2k+1) / (k+2)`; every division is exact.
pub fn catalan(g: u32) -> BigUint {
    let mut c = BigUint::from(1u32);
    for k in 0..g as u64 {
        c *= 2 * (2 * k + 1);
        c /= k + 2;
    }
    c
}

/// `A_g` by its recursion from `A_2 = {1, 3}`:
/// `A_g = {g+1} ∪ (⋃_{m ∈ A_{g-1}} {0, …, m-1}) ∖ {g-2}`.
///
/// The union over `m` is a suffix sum over counts: value `v` appears once
/// for every `m > v`.
pub fn multiset_a(g: u32) -> Result<Multiset, BoundsError> {
    check_genus("multiset A_g", g, 2, MULTISET_A_MAX_GENUS)?;
    let mut level = Multiset::from_values(&[1, 3]);
    for h in 3..=g as usize {
        let mut next = suffix_union(&level, 1);
        next.remove_one(h - 2)?;
        next.insert(h + 1, 1);
        level = next;
    }
    Ok(level)
}

/// Closed form of `A_g`: `2 F_{g-2-v}` copies of each `v` in `0..=g-3`,
/// plus `{g-1, g+1}`.
pub fn multiset_a_closed_form(g: u32) -> Result<Multiset, BoundsError> {
    check_genus("multiset A_g", g, 2, MULTISET_A_MAX_GENUS)?;
    let mut m = Multiset::new();
    for v in 0..g.saturating_sub(2) {
        m.insert(v as usize, 2 * fibonacci(g - 2 - v)?);
    }
    m.insert(g as usize - 1, 1);
    m.insert(g as usize + 1, 1);
    Ok(m)
}

/// `B_g` by its recursion from `B_2 = {1, 3}`:
/// `B_g = {0, g+1} ∪ (⋃_{m ∈ B_{g-1}} {1, …, m}) ∖ {g, g-2}`.
pub fn multiset_b(g: u32) -> Result<Multiset, BoundsError> {
    check_genus("multiset B_g", g, 2, MULTISET_B_MAX_GENUS)?;
    let mut level = Multiset::from_values(&[1, 3]);
    for h in 3..=g as usize {
        // m = 0 contributes nothing; value v >= 1 appears once per m >= v
        let mut next = suffix_union(&level, 0);
        if let Some(zero) = next.counts.first_mut() {
            *zero = 0;
        }
        next.remove_one(h)?;
        next.remove_one(h - 2)?;
        next.insert(0, 1);
        next.insert(h + 1, 1);
        level = next;
    }
    Ok(level)
}

/// `⋃_{m ∈ level} {0, …, m - shift}`: value `v` gets one copy for each
/// element `m >= v + shift`.
fn suffix_union(level: &Multiset, shift: usize) -> Multiset {
    let n = level.counts.len();
    let mut counts = vec![0u64; n];
    let mut running = 0u64;
    for v in (0..n).rev() {
        running += level.counts[v];
        if v >= shift {
            counts[v - shift] = running;
        }
    }
    Multiset::from_counts(counts)
}

fn check_genus(what: &'static str, g: u32, min: u32, max: u32) -> Result<(), BoundsError> {
    if g < min {
        Err(BoundsError::Domain { what, min, g })
    } else if g > max {
        Err(BoundsError::Overflow { what, arg: g })
    } else {
        Ok(())
    }
}

/// One row of the genus report. Blank cells are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusRow {
    pub g: u32,
    #[serde(rename = "lower_2Fg", default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<u64>,
    #[serde(rename = "n_g", default, skip_serializing_if = "Option::is_none")]
    pub count: Option<u64>,
    #[serde(
        rename = "upper_1p3x2gm3",
        default,
        skip_serializing_if = "Option::is_none"
    )]
    pub upper: Option<u64>,
    pub catalan: u128,
}

pub const CSV_HEADER: [&str; 5] = ["g", "lower_2Fg", "n_g", "upper_1p3x2gm3", "catalan"];

impl GenusRow {
    /// `lower <= n_g <= upper` where defined, and `n_g <= C_g`.
    /// Vacuously true without a count.
    pub fn sandwich_holds(&self) -> bool {
        let Some(n) = self.count else { return true };
        self.lower.is_none_or(|l| l <= n)
            && self.upper.is_none_or(|u| n <= u)
            && (n as u128) <= self.catalan
    }
}

/// Rows `0..=max_g`. Counts come from `counts` when given, otherwise from
/// the embedded reference data (genus 30 and below).
pub fn genus_table(max_g: u32, counts: Option<&[u64]>) -> Result<Vec<GenusRow>, BoundsError> {
    (0..=max_g)
        .map(|g| {
            let count = match counts {
                Some(c) => c.get(g as usize).copied(),
                None => reference::reference_count(g),
            };
            let catalan =
                u128::try_from(catalan(g)).map_err(|_| BoundsError::CatalanTooLarge(g))?;
            Ok(GenusRow {
                g,
                lower: if g >= 2 { Some(lower_bound(g)?) } else { None },
                count,
                upper: if g >= 3 { Some(upper_bound(g)?) } else { None },
                catalan,
            })
        })
        .collect()
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_csv<W: io::Write>(rows: &[GenusRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            r.g.to_string(),
            cell(r.lower),
            cell(r.count),
            cell(r.upper),
            r.catalan.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: io::Read>(input: R) -> csv::Result<Vec<GenusRow>> {
    csv::Reader::from_reader(input).deserialize().collect()
}
