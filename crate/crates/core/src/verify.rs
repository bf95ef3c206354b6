//! Verification suites run by `nsg verify` and the acceptance tests.
//!
//! Each suite returns a [`Report`] with one line per check.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use crate::bounds::{self, GenusRow};
use crate::oracle;
use crate::reference::{REFERENCE_MAX_GENUS, REFERENCE_TABLE};
use crate::semigroup::NumericalSemigroup;
use crate::tree::{self, EnumConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Lemma3,
    Lemma4,
    Oracle,
    Table1,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Lemma4,
        Suite::Oracle,
        Suite::Table1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Lemma4 => "lemma4",
            Suite::Oracle => "oracle",
            Suite::Table1 => "table1",
        }
    }

    /// Default genus guard.
    pub fn guard(self) -> u32 {
        match self {
            Suite::Lemma1 => 25,
            Suite::Lemma2 => 20,
            Suite::Lemma3 | Suite::Lemma4 => 15,
            Suite::Oracle => oracle::COUNT_MAX_GENUS,
            Suite::Table1 => REFERENCE_MAX_GENUS,
        }
    }

    /// Smallest genus the suite is defined for.
    pub fn min_genus(self) -> u32 {
        match self {
            Suite::Lemma1 | Suite::Lemma4 => 2,
            Suite::Lemma2 => 3,
            Suite::Lemma3 | Suite::Table1 => 1,
            Suite::Oracle => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Runs `suite` up to `max_genus`. Guards are the caller's business.
pub fn run_suite(suite: Suite, max_genus: u32, workers: usize) -> Report {
    match suite {
        Suite::Lemma1 => lemma1(max_genus),
        Suite::Lemma2 => lemma2(max_genus),
        Suite::Lemma3 => lemma3(max_genus),
        Suite::Lemma4 => lemma4(max_genus),
        Suite::Oracle => oracle_suite(max_genus, workers),
        Suite::Table1 => table1(max_genus, workers),
    }
}

/// Largest index used for the Fibonacci partial-sum identity.
pub const FIBONACCI_IDENTITY_MAX: u32 = 60;

/// `F_i = 1 + Σ_{j=1}^{i-2} F_j` for `2 <= i <= max_index`.
pub fn fibonacci_identity(max_index: u32) -> Result<(), String> {
    let mut partial = 0u64;
    for i in 2..=max_index {
        // partial = Σ_{j=1}^{i-2} F_j
        if i >= 3 {
            partial += bounds::fibonacci(i - 2).map_err(|e| e.to_string())?;
        }
        let f = bounds::fibonacci(i).map_err(|e| e.to_string())?;
        if f != 1 + partial {
            return Err(format!("F_{i} = {f} but 1 + partial sum = {}", 1 + partial));
        }
    }
    Ok(())
}

pub fn lemma1(max_genus: u32) -> Report {
    let mut r = Report::default();
    match fibonacci_identity(FIBONACCI_IDENTITY_MAX) {
        Ok(()) => r.check(
            "fibonacci identity",
            true,
            format!("F_i = 1 + sum F_1..F_(i-2) for 2 <= i <= {FIBONACCI_IDENTITY_MAX}"),
        ),
        Err(e) => r.check("fibonacci identity", false, e),
    }
    for g in 2..=max_genus {
        let name = format!("lemma1 g={g}");
        let (rec, closed, lower) = match (
            bounds::multiset_a(g),
            bounds::multiset_a_closed_form(g),
            bounds::lower_bound(g),
        ) {
            (Ok(a), Ok(b), Ok(l)) => (a, b, l),
            (a, b, l) => {
                let err = [a.err(), b.err(), l.err()].into_iter().flatten().next();
                r.check(name, false, format!("{}", err.expect("one failed")));
                continue;
            }
        };
        let size = rec.cardinality();
        let ok = rec == closed
            && size == Some(lower)
            && rec.max() == Some(g as usize + 1)
            && rec.second_max() == Some(g as usize - 1);
        r.check(
            name,
            ok,
            format!(
                "recursion {} closed form, |A_g| = {} vs 2F_g = {lower}, max {:?}, second max {:?}",
                if rec == closed { "=" } else { "!=" },
                size.map_or("overflow".into(), |s| s.to_string()),
                rec.max(),
                rec.second_max()
            ),
        );
    }
    r
}

pub fn lemma2(max_genus: u32) -> Report {
    let mut r = Report::default();
    for g in 3..=max_genus {
        let name = format!("lemma2 g={g}");
        match (bounds::multiset_b(g), bounds::upper_bound(g)) {
            (Ok(b), Ok(upper)) => {
                let size = b.cardinality();
                let ok = size == Some(upper) && b.max() == Some(g as usize + 1);
                r.check(
                    name,
                    ok,
                    format!(
                        "|B_g| = {} vs 1+3*2^(g-3) = {upper}, max {:?}",
                        size.map_or("overflow".into(), |s| s.to_string()),
                        b.max()
                    ),
                );
            }
            (b, u) => {
                let err = b.err().or(u.err()).expect("one failed");
                r.check(name, false, err.to_string());
            }
        }
    }
    r
}

/// Per-node structural checks for every node of genus `<= max_genus`:
/// incremental effective generators match the definition scan, they lie in
/// `(F, F + m]`, each child has a parent equal to the node, and for
/// non-ordinary nodes the `j`-th child has between `k - j` and `k - j + 1`
/// effective generators.
pub fn lemma3(max_genus: u32) -> Report {
    #[derive(Default, Clone)]
    struct Level {
        nodes: u64,
        non_ordinary: u64,
        children: u64,
        failures: Vec<String>,
    }
    let levels = Mutex::new(vec![Level::default(); max_genus as usize + 1]);
    let cfg = EnumConfig::new(max_genus.max(1));
    let result = tree::enumerate_with_visitor(&cfg, |s| {
        let mut fails = Vec::new();
        let effective = s.effective_generators();
        let scratch: Vec<u32> = s
            .minimal_generators()
            .into_iter()
            .filter(|&e| e as i64 > s.frobenius())
            .collect();
        if effective != scratch {
            fails.push(format!("{s}: cached {effective:?} vs scan {scratch:?}"));
        }
        let top = s.generator_ceiling() as i64;
        if effective
            .iter()
            .any(|&e| (e as i64) <= s.frobenius() || e as i64 > top)
        {
            fails.push(format!("{s}: generator outside (F, max(F+m, m)]"));
        }
        let k = effective.len() as u32;
        let mut children = 0;
        for (j, &e) in effective.iter().enumerate() {
            let j = j as u32 + 1;
            let child = match s.remove_generator(e) {
                Ok(c) => c,
                Err(err) => {
                    fails.push(format!("{s}: {err}"));
                    continue;
                }
            };
            children += 1;
            if child.parent() != Some(*s) {
                fails.push(format!("{s}: re-adding {e} does not restore the parent"));
            }
            let child_k = child
                .minimal_generators()
                .into_iter()
                .filter(|&x| x as i64 > child.frobenius())
                .count() as u32;
            if child_k != child.child_count() {
                fails.push(format!(
                    "{s} minus {e}: incremental count differs from scan"
                ));
            }
            if !s.is_ordinary() && !(k - j..=k - j + 1).contains(&child_k) {
                fails.push(format!(
                    "{s}: removing generator {j} of {k} leaves {child_k} effective generators"
                ));
            }
        }
        let mut levels = levels.lock().unwrap();
        let level = &mut levels[s.genus() as usize];
        level.nodes += 1;
        level.non_ordinary += !s.is_ordinary() as u64;
        level.children += children;
        level.failures.extend(fails);
    });
    let mut r = Report::default();
    if let Err(e) = result {
        r.check("lemma3 traversal", false, e.to_string());
        return r;
    }
    for (g, level) in levels.into_inner().unwrap().into_iter().enumerate() {
        let detail = match level.failures.first() {
            None => format!(
                "{} nodes ({} non-ordinary), {} children within bounds",
                level.nodes, level.non_ordinary, level.children
            ),
            Some(first) => format!("{} failures, first: {first}", level.failures.len()),
        };
        r.check(format!("lemma3 g={g}"), level.failures.is_empty(), detail);
    }
    r
}

/// Effective-generator counts of the children of `ordinary(g)`, in
/// removal order `g+1, g+2, …, 2g+1`, next to the expected values.
pub fn ordinary_child_counts(g: u32) -> Result<Vec<(u32, u32, u32)>, String> {
    let o = NumericalSemigroup::ordinary(g).map_err(|e| e.to_string())?;
    (1..=g + 1)
        .map(|r| {
            let child = o.remove_generator(g + r).map_err(|e| e.to_string())?;
            let expected = match r {
                1 => g + 2,
                2 => g,
                _ => g + 1 - r,
            };
            Ok((g + r, child.child_count(), expected))
        })
        .collect()
}

pub fn lemma4(max_genus: u32) -> Report {
    let mut r = Report::default();
    for g in 2..=max_genus {
        let name = format!("lemma4 g={g}");
        match ordinary_child_counts(g) {
            Ok(rows) => {
                let bad: Vec<_> = rows.iter().filter(|(_, got, want)| got != want).collect();
                let got: Vec<_> = rows.iter().map(|(_, c, _)| *c).collect();
                r.check(
                    name,
                    bad.is_empty(),
                    format!("child effective-generator counts {got:?}"),
                );
            }
            Err(e) => r.check(name, false, e),
        }
    }
    r
}

/// Brute-force counts and symmetric counts against the tree, plus the
/// deletion characterization of children for every node of genus up to
/// `min(max_genus, 12)`.
pub fn oracle_suite(max_genus: u32, workers: usize) -> Report {
    oracle_suite_capped(max_genus, workers, oracle::COUNT_MAX_GENUS)
}

pub fn oracle_suite_capped(max_genus: u32, workers: usize, cap: u32) -> Report {
    let mut r = Report::default();
    let cfg = EnumConfig::new(max_genus.max(1)).with_workers(workers);
    let stats = match tree::enumerate_with_visitor(&cfg, |_| {}) {
        Ok(s) => s,
        Err(e) => {
            r.check("oracle traversal", false, e.to_string());
            return r;
        }
    };
    for g in 0..=max_genus {
        let level = &stats.levels[g as usize];
        match oracle::brute_force_gap_sets_capped(g, cap) {
            Ok(sets) => {
                let sym = sets.iter().filter(|s| s.is_symmetric()).count() as u64;
                let n = sets.len() as u64;
                r.check(
                    format!("oracle count g={g}"),
                    n == level.count && sym == level.symmetric,
                    format!(
                        "brute force {n} (symmetric {sym}), tree {} (symmetric {})",
                        level.count, level.symmetric
                    ),
                );
            }
            Err(e) => r.check(format!("oracle count g={g}"), false, e.to_string()),
        }
    }
    let child_genus = max_genus.min(oracle::CHILDREN_MAX_GENUS);
    let mismatches = Mutex::new((0u64, Vec::<String>::new()));
    let cfg = EnumConfig::new(child_genus.max(1));
    let walked = tree::enumerate_with_visitor(&cfg, |s| {
        if s.genus() > child_genus {
            return;
        }
        let expected = oracle::brute_force_children(s);
        let got: Vec<_> = s.children().collect();
        let mut m = mismatches.lock().unwrap();
        m.0 += 1;
        match expected {
            Ok(e) if e == got => {}
            Ok(e) => m.1.push(format!(
                "{s}: {} deletion children vs {} tree children",
                e.len(),
                got.len()
            )),
            Err(e) => m.1.push(e.to_string()),
        }
    });
    let (nodes, fails) = mismatches.into_inner().unwrap();
    let name = format!("oracle children g<={child_genus}");
    match (walked, fails.first()) {
        (Err(e), _) => r.check(name, false, e.to_string()),
        (Ok(_), None) => r.check(
            name,
            true,
            format!("{nodes} nodes: children by deletion = removal of effective generators"),
        ),
        (Ok(_), Some(first)) => r.check(
            name,
            false,
            format!("{} mismatches, first: {first}", fails.len()),
        ),
    }
    r
}

/// Enumerated counts and computed bound columns against the reference
/// table, plus the bound sandwich.
pub fn table1(max_genus: u32, workers: usize) -> Report {
    let mut r = Report::default();
    let cfg = EnumConfig::new(max_genus.max(1)).with_workers(workers);
    let counts = match tree::count_by_genus(&cfg) {
        Ok(c) => c,
        Err(e) => {
            r.check("table1 enumeration", false, e.to_string());
            return r;
        }
    };
    let rows = match bounds::genus_table(max_genus, Some(&counts)) {
        Ok(rows) => rows,
        Err(e) => {
            r.check("table1 bounds", false, e.to_string());
            return r;
        }
    };
    for row in &rows {
        let mut problems = table_row_problems(row);
        if !row.sandwich_holds() {
            problems.push("bound sandwich violated".to_string());
        }
        r.check(
            format!("table1 g={}", row.g),
            problems.is_empty(),
            if problems.is_empty() {
                format!(
                    "n_g = {} matches, bounds {} / {} / {}",
                    row.count.unwrap_or_default(),
                    opt(row.lower),
                    opt(row.upper),
                    row.catalan
                )
            } else {
                problems.join("; ")
            },
        );
    }
    r
}

/// Differences between a computed row and the reference row of the same
/// genus (empty when the genus is not tabulated).
pub fn table_row_problems(row: &GenusRow) -> Vec<String> {
    let Some(reference) = REFERENCE_TABLE.get(row.g as usize) else {
        return Vec::new();
    };
    let mut problems = Vec::new();
    if row.count != Some(reference.count) {
        problems.push(format!("n_g {:?} != {}", row.count, reference.count));
    }
    if row.lower != reference.lower {
        problems.push(format!("2F_g {:?} != {:?}", row.lower, reference.lower));
    }
    if row.upper != reference.upper {
        problems.push(format!("upper {:?} != {:?}", row.upper, reference.upper));
    }
    if row.catalan != reference.catalan as u128 {
        problems.push(format!("C_g {} != {}", row.catalan, reference.catalan));
    }
    problems
}

fn opt(v: Option<u64>) -> String {
    v.map_or("-".to_string(), |v| v.to_string())
}
