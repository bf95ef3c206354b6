//! Depth-first traversal of the semigroup tree.
//!
//! The root is ℕ₀; the children of a node are obtained by removing each of
//! its effective generators in ascending order. Every numerical semigroup
//! appears exactly once, at depth equal to its genus.
//!
//! Parallel runs split the tree at `parallel_cutoff_genus`: the nodes at that
//! genus are independent work units and per-unit accumulators are merged by
//! per-genus addition, so the result does not depend on scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::semigroup::{NumericalSemigroup, MAX_GENUS};

/// Largest genus accepted by [`export_tree_dot`].
pub const DOT_MAX_GENUS: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("max genus {0} exceeds the window capability (max {MAX_GENUS})")]
    WindowExceeded(u32),
    #[error("max genus must be at least 1")]
    ZeroGenus,
    #[error("parallel cutoff genus {cutoff} exceeds max genus {max_genus}")]
    CutoffTooDeep { cutoff: u32, max_genus: u32 },
    #[error("at least one worker is required")]
    NoWorkers,
    #[error("tree export is limited to genus {cap} (asked for {asked})")]
    DotTooLarge { asked: u32, cap: u32 },
    #[error("node count at genus {0} overflows 64 bits")]
    Overflow(u32),
    #[error("failed to build worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumConfig {
    pub max_genus: u32,
    pub workers: usize,
    pub collect_stats: bool,
    pub parallel_cutoff_genus: u32,
}

impl EnumConfig {
    /// Single worker, statistics on, default cutoff.
    pub fn new(max_genus: u32) -> Self {
        Self {
            max_genus,
            workers: 1,
            collect_stats: true,
            parallel_cutoff_genus: default_cutoff(max_genus),
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<(), EnumError> {
        if self.max_genus == 0 {
            return Err(EnumError::ZeroGenus);
        }
        if self.max_genus > MAX_GENUS {
            return Err(EnumError::WindowExceeded(self.max_genus));
        }
        if self.parallel_cutoff_genus > self.max_genus {
            return Err(EnumError::CutoffTooDeep {
                cutoff: self.parallel_cutoff_genus,
                max_genus: self.max_genus,
            });
        }
        if self.workers == 0 {
            return Err(EnumError::NoWorkers);
        }
        Ok(())
    }
}

/// Genus at which subtrees become work units. Around genus 15 there are a
/// few thousand nodes, enough to balance the very uneven subtree sizes.
pub fn default_cutoff(max_genus: u32) -> u32 {
    (max_genus / 2).min(15)
}

/// Statistics for the nodes of one genus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenusStats {
    pub genus: u32,
    pub count: u64,
    /// child count → number of nodes with that many children
    pub child_histogram: BTreeMap<u32, u64>,
    pub ordinary: u64,
    pub symmetric: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub levels: Vec<GenusStats>,
}

impl TreeStats {
    pub fn counts(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.count).collect()
    }
}

/// Per-worker accumulator. Histograms are dense vectors indexed by child
/// count (at most `genus + 2`).
#[derive(Debug, Clone, Default)]
struct Accumulator {
    counts: Vec<u64>,
    histograms: Vec<Vec<u64>>,
    ordinary: Vec<u64>,
    symmetric: Vec<u64>,
    overflow: Option<u32>,
}

impl Accumulator {
    fn new(max_genus: u32, stats: bool) -> Self {
        let levels = max_genus as usize + 1;
        Self {
            counts: vec![0; levels],
            histograms: if stats {
                (0..levels).map(|g| vec![0; g + 3]).collect()
            } else {
                Vec::new()
            },
            ordinary: vec![0; if stats { levels } else { 0 }],
            symmetric: vec![0; if stats { levels } else { 0 }],
            overflow: None,
        }
    }

    #[inline]
    fn add_count(&mut self, genus: u32, n: u64) {
        let slot = &mut self.counts[genus as usize];
        match slot.checked_add(n) {
            Some(v) => *slot = v,
            None => self.overflow = self.overflow.or(Some(genus)),
        }
    }

    #[inline]
    fn record(&mut self, s: &NumericalSemigroup) {
        let g = s.genus() as usize;
        self.add_count(s.genus(), 1);
        if self.histograms.is_empty() {
            return;
        }
        self.histograms[g][s.child_count() as usize] += 1;
        self.ordinary[g] += s.is_ordinary() as u64;
        self.symmetric[g] += s.is_symmetric() as u64;
    }

    fn merge(mut self, other: Self) -> Self {
        fn add(into: &mut [u64], from: &[u64], overflow: &mut bool) {
            for (a, b) in into.iter_mut().zip(from) {
                match a.checked_add(*b) {
                    Some(v) => *a = v,
                    None => *overflow = true,
                }
            }
        }
        for (g, (a, b)) in self.counts.iter_mut().zip(&other.counts).enumerate() {
            match a.checked_add(*b) {
                Some(v) => *a = v,
                None => self.overflow = self.overflow.or(Some(g as u32)),
            }
        }
        let mut lost = false;
        for (a, b) in self.histograms.iter_mut().zip(&other.histograms) {
            add(a, b, &mut lost);
        }
        add(&mut self.ordinary, &other.ordinary, &mut lost);
        add(&mut self.symmetric, &other.symmetric, &mut lost);
        self.overflow = match (self.overflow, other.overflow) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        if lost && self.overflow.is_none() {
            self.overflow = Some(0);
        }
        self
    }

    fn finish(self) -> Result<TreeStats, EnumError> {
        if let Some(g) = self.overflow {
            return Err(EnumError::Overflow(g));
        }
        let stats = !self.histograms.is_empty();
        let levels = self
            .counts
            .iter()
            .enumerate()
            .map(|(g, &count)| GenusStats {
                genus: g as u32,
                count,
                child_histogram: if stats {
                    self.histograms[g]
                        .iter()
                        .enumerate()
                        .filter(|(_, &n)| n > 0)
                        .map(|(c, &n)| (c as u32, n))
                        .collect()
                } else {
                    BTreeMap::new()
                },
                ordinary: if stats { self.ordinary[g] } else { 0 },
                symmetric: if stats { self.symmetric[g] } else { 0 },
            })
            .collect();
        Ok(TreeStats { levels })
    }
}

/// Walks the subtree under `root` down to `max_genus`, visiting every node.
fn walk<V>(root: NumericalSemigroup, max_genus: u32, acc: &mut Accumulator, visitor: &V)
where
    V: Fn(&NumericalSemigroup) + ?Sized,
{
    let mut stack = vec![root];
    let mut children = Vec::new();
    while let Some(node) = stack.pop() {
        visitor(&node);
        acc.record(&node);
        if node.genus() < max_genus {
            // push in reverse so children pop in ascending order
            children.extend(node.children());
            stack.extend(children.drain(..).rev());
        }
    }
}

/// Count-only walk: nodes one level above `max_genus` contribute their
/// child count without materializing the children.
fn count_walk(root: NumericalSemigroup, max_genus: u32, acc: &mut Accumulator) {
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        let g = node.genus();
        acc.add_count(g, 1);
        if g + 1 == max_genus {
            acc.add_count(max_genus, node.child_count() as u64);
        } else if g < max_genus {
            stack.extend(node.children());
        }
    }
}

/// Collects the nodes at the cutoff genus, walking (and recording) the ones
/// above it.
fn frontier<V>(
    cfg: &EnumConfig,
    acc: &mut Accumulator,
    visitor: Option<&V>,
) -> Vec<NumericalSemigroup>
where
    V: Fn(&NumericalSemigroup) + ?Sized,
{
    let cutoff = cfg.parallel_cutoff_genus;
    let mut units = Vec::new();
    let mut stack = vec![NumericalSemigroup::naturals()];
    while let Some(node) = stack.pop() {
        if node.genus() == cutoff {
            units.push(node);
            continue;
        }
        if let Some(v) = visitor {
            v(&node);
            acc.record(&node);
        } else {
            acc.add_count(node.genus(), 1);
        }
        let mut kids: Vec<_> = node.children().collect();
        kids.reverse();
        stack.extend(kids);
    }
    units
}

fn run<F>(
    cfg: &EnumConfig,
    seed: Accumulator,
    units: Vec<NumericalSemigroup>,
    work: F,
) -> Result<Accumulator, EnumError>
where
    F: Fn(NumericalSemigroup, &mut Accumulator) + Sync,
{
    let empty = || Accumulator::new(cfg.max_genus, !seed.histograms.is_empty());
    if cfg.workers == 1 {
        let mut acc = seed;
        for u in units {
            work(u, &mut acc);
        }
        return Ok(acc);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| EnumError::Pool(e.to_string()))?;
    let merged = pool.install(|| {
        units
            .into_par_iter()
            .fold(empty, |mut acc, u| {
                work(u, &mut acc);
                acc
            })
            .reduce(empty, Accumulator::merge)
    });
    Ok(seed.merge(merged))
}

/// Number of numerical semigroups of each genus `0..=max_genus`.
pub fn count_by_genus(cfg: &EnumConfig) -> Result<Vec<u64>, EnumError> {
    cfg.validate()?;
    let mut acc = Accumulator::new(cfg.max_genus, false);
    let units = frontier::<fn(&NumericalSemigroup)>(cfg, &mut acc, None);
    let max = cfg.max_genus;
    let acc = run(cfg, acc, units, |u, acc| count_walk(u, max, acc))?;
    Ok(acc.finish()?.counts())
}

/// Full traversal calling `visitor` on every node.
///
/// With more than one worker the visitor runs concurrently from several
/// threads, in no particular order.
pub fn enumerate_with_visitor<V>(cfg: &EnumConfig, visitor: V) -> Result<TreeStats, EnumError>
where
    V: Fn(&NumericalSemigroup) + Sync,
{
    cfg.validate()?;
    let mut acc = Accumulator::new(cfg.max_genus, cfg.collect_stats);
    let units = frontier(cfg, &mut acc, Some(&visitor));
    let max = cfg.max_genus;
    let acc = run(cfg, acc, units, |u, acc| walk(u, max, acc, &visitor))?;
    acc.finish()
}

/// DOT rendering of the tree down to `max_genus`.
pub fn export_tree_dot(max_genus: u32) -> Result<String, EnumError> {
    export_tree_dot_capped(max_genus, DOT_MAX_GENUS)
}

/// [`export_tree_dot`] with a caller-chosen genus cap.
///
/// Node ids are the comma-separated gap lists (empty for ℕ₀); nodes are
/// emitted in depth-first preorder with ascending removed generators.
pub fn export_tree_dot_capped(max_genus: u32, cap: u32) -> Result<String, EnumError> {
    if max_genus > cap {
        return Err(EnumError::DotTooLarge {
            asked: max_genus,
            cap,
        });
    }
    if max_genus > MAX_GENUS {
        return Err(EnumError::WindowExceeded(max_genus));
    }
    let id = |s: &NumericalSemigroup| crate::semigroup::join(&s.gaps());
    let mut nodes = String::new();
    let mut edges = String::new();
    let mut stack = vec![NumericalSemigroup::naturals()];
    while let Some(node) = stack.pop() {
        let node_id = id(&node);
        writeln!(
            nodes,
            "  \"{node_id}\" [label=\"{{{node_id}}}\\ng={} F={}\"];",
            node.genus(),
            node.frobenius()
        )
        .unwrap();
        if node.genus() < max_genus {
            let kids: Vec<_> = node
                .effective_generators()
                .into_iter()
                .map(|e| (e, node.child(e)))
                .collect();
            for (e, kid) in &kids {
                writeln!(
                    edges,
                    "  \"{node_id}\" -> \"{}\" [label=\"-{e}\"];",
                    id(kid)
                )
                .unwrap();
            }
            stack.extend(kids.into_iter().rev().map(|(_, k)| k));
        }
    }
    Ok(format!(
        "digraph semigroup_tree {{\n  node [shape=box];\n{nodes}{edges}}}\n"
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Mutex;

    #[test]
    fn small_counts() {
        assert_eq!(
            count_by_genus(&EnumConfig::new(4)).unwrap(),
            vec![1, 1, 2, 4, 7]
        );
        assert_eq!(count_by_genus(&EnumConfig::new(1)).unwrap(), vec![1, 1]);
        assert_eq!(count_by_genus(&EnumConfig::new(10)).unwrap()[10], 204);
    }

    #[test]
    fn config_errors() {
        assert_eq!(
            count_by_genus(&EnumConfig::new(0)),
            Err(EnumError::ZeroGenus)
        );
        assert_eq!(
            count_by_genus(&EnumConfig::new(MAX_GENUS + 1)),
            Err(EnumError::WindowExceeded(MAX_GENUS + 1))
        );
        let mut cfg = EnumConfig::new(5);
        cfg.parallel_cutoff_genus = 6;
        assert!(matches!(
            count_by_genus(&cfg),
            Err(EnumError::CutoffTooDeep { .. })
        ));
        assert_eq!(
            count_by_genus(&EnumConfig::new(5).with_workers(0)),
            Err(EnumError::NoWorkers)
        );
    }

    #[test]
    fn cutoff_extremes_agree() {
        let expected = count_by_genus(&EnumConfig::new(12)).unwrap();
        for cutoff in [0, 1, 11, 12] {
            for workers in [1, 3] {
                let mut cfg = EnumConfig::new(12).with_workers(workers);
                cfg.parallel_cutoff_genus = cutoff;
                assert_eq!(count_by_genus(&cfg).unwrap(), expected, "cutoff {cutoff}");
                assert_eq!(
                    enumerate_with_visitor(&cfg, |_| {}).unwrap().counts(),
                    expected
                );
            }
        }
    }

    #[test]
    fn genus_two_histogram() {
        let stats = enumerate_with_visitor(&EnumConfig::new(3), |_| {}).unwrap();
        let level = &stats.levels[2];
        assert_eq!(level.child_histogram, BTreeMap::from([(1, 1), (3, 1)]));
        let children: u64 = level
            .child_histogram
            .iter()
            .map(|(c, n)| *c as u64 * n)
            .sum();
        assert_eq!(children, 4);
        assert!(stats.levels.iter().all(|l| l.ordinary == 1));
    }

    #[test]
    fn visitor_sees_preorder() {
        let seen = Mutex::new(Vec::new());
        enumerate_with_visitor(&EnumConfig::new(3), |s| seen.lock().unwrap().push(s.gaps()))
            .unwrap();
        let seen = seen.into_inner().unwrap();
        let expected: Vec<Vec<u32>> = vec![
            vec![],
            vec![1],
            vec![1, 2],
            vec![1, 2, 3],
            vec![1, 2, 4],
            vec![1, 2, 5],
            vec![1, 3],
            vec![1, 3, 5],
        ];
        assert_eq!(seen, expected);
    }

    #[test]
    fn stats_toggle() {
        let mut cfg = EnumConfig::new(5);
        cfg.collect_stats = false;
        let stats = enumerate_with_visitor(&cfg, |_| {}).unwrap();
        assert_eq!(stats.counts(), vec![1, 1, 2, 4, 7, 12]);
        assert!(stats.levels.iter().all(|l| l.child_histogram.is_empty()));
    }

    #[test]
    fn stats_json_shape() {
        let stats = enumerate_with_visitor(&EnumConfig::new(2), |_| {}).unwrap();
        let json = serde_json::to_string(&stats.levels[2]).unwrap();
        assert_eq!(
            json,
            r#"{"genus":2,"count":2,"child_histogram":{"1":1,"3":1},"ordinary":1,"symmetric":1}"#
        );
    }

    #[test]
    fn dot_sizes() {
        let count = |dot: &str, pat: &str| dot.lines().filter(|l| l.contains(pat)).count();
        let d1 = export_tree_dot(1).unwrap();
        assert_eq!((count(&d1, "[label=\"{"), count(&d1, "->")), (2, 1));
        let d3 = export_tree_dot(3).unwrap();
        assert_eq!((count(&d3, "[label=\"{"), count(&d3, "->")), (8, 7));
        let d5 = export_tree_dot(5).unwrap();
        assert_eq!((count(&d5, "[label=\"{"), count(&d5, "->")), (27, 26));
        assert!(d3.contains("  \"1\" -> \"1,2\" [label=\"-2\"];"));
        assert_eq!(export_tree_dot(3).unwrap(), d3);
        assert_eq!(
            export_tree_dot(9),
            Err(EnumError::DotTooLarge { asked: 9, cap: 8 })
        );
    }
}
