//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on usage or guard
//! errors.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::bounds::{self, GenusRow, Multiset};
use crate::semigroup::MAX_GENUS;
use crate::tree::{self, EnumConfig, DOT_MAX_GENUS};
use crate::verify::{self, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable replacing every genus guard. Unsupported territory.
pub const HARD_CAP_ENV: &str = "NSG_MAX_GENUS_HARD_CAP";

/// Genus up to which cached counts are recomputed before reuse.
const CACHE_REVALIDATE_GENUS: u32 = 8;

#[derive(Debug, Parser)]
#[command(name = "nsg", version, about = "Count numerical semigroups by genus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate the semigroup tree and print n_g next to the bound columns.
    Count {
        #[arg(long)]
        max_genus: u32,
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
        /// Read and update a genus -> n_g cache file.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[arg(long)]
        no_cache: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long)]
        max_genus: u32,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the multiset A_g or B_g.
    Multiset {
        #[arg(value_enum)]
        family: Family,
        genus: u32,
        #[arg(long, value_enum, default_value = "table")]
        format: OutputFormat,
    },
    /// Render the tree down to a small genus as DOT.
    Tree {
        #[arg(long)]
        max_genus: u32,
        #[arg(long, value_enum, default_value = "dot")]
        format: OutputFormat,
    },
    /// Per-genus child-count histograms as JSON.
    Stats {
        #[arg(long)]
        max_genus: u32,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Runs the CLI with guards taken from the environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let hard_cap = std::env::var(HARD_CAP_ENV)
        .ok()
        .and_then(|v| v.parse().ok());
    run_with_cap(args, hard_cap, out, err)
}

/// Runs the CLI; `hard_cap` replaces every genus guard when set.
pub fn run_with_cap<I, T>(
    args: I,
    hard_cap: Option<u32>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count {
            max_genus,
            workers,
            format,
            cache,
            no_cache,
        } => cmd_count(
            max_genus,
            workers_or_default(workers),
            format,
            if no_cache { None } else { cache.as_deref() },
            out,
            err,
        ),
        Command::Verify {
            suite,
            max_genus,
            workers,
        } => cmd_verify(suite, max_genus, workers_or_default(workers), hard_cap, out),
        Command::Multiset {
            family,
            genus,
            format,
        } => cmd_multiset(family, genus, format, hard_cap, out),
        Command::Tree { max_genus, format } => cmd_tree(max_genus, format, hard_cap, out),
        Command::Stats { max_genus, workers } => {
            cmd_stats(max_genus, workers_or_default(workers), out)
        }
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_FAIL
        }
    }
}

enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.into())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn workers_or_default(workers: Option<usize>) -> usize {
    workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn guard(what: &str, asked: u32, default_cap: u32, hard_cap: Option<u32>) -> Result<(), Failure> {
    let cap = hard_cap.unwrap_or(default_cap);
    if asked > cap {
        let how = if hard_cap.is_some() {
            format!("{HARD_CAP_ENV}={cap}")
        } else {
            format!("guard {cap}")
        };
        return Err(usage(format!(
            "{what}: --max-genus {asked} exceeds the {how} ({what} <= {cap})"
        )));
    }
    Ok(())
}

/// Tree counts for genus `0..=max_genus`.
fn enumerate_counts(max_genus: u32, workers: usize) -> Result<Vec<u64>, Failure> {
    let cfg = EnumConfig::new(max_genus.max(1)).with_workers(workers);
    let mut counts = tree::count_by_genus(&cfg).map_err(|e| usage(e.to_string()))?;
    counts.truncate(max_genus as usize + 1);
    Ok(counts)
}

fn read_cache(path: &Path) -> Option<Vec<u64>> {
    let text = fs::read_to_string(path).ok()?;
    let map: BTreeMap<u32, u64> = serde_json::from_str(&text).ok()?;
    // keys must be exactly 0..len
    map.keys()
        .enumerate()
        .all(|(i, &g)| i as u32 == g)
        .then(|| map.into_values().collect())
}

fn write_cache(path: &Path, counts: &[u64]) -> io::Result<()> {
    let map: BTreeMap<u32, u64> = counts
        .iter()
        .enumerate()
        .map(|(g, &n)| (g as u32, n))
        .collect();
    fs::write(path, serde_json::to_string_pretty(&map)? + "\n")
}

/// Cached counts cover `max_genus` and agree with a fresh enumeration up to
/// the revalidation genus.
fn usable_cache(cached: &[u64], max_genus: u32, workers: usize) -> Result<bool, Failure> {
    if cached.len() <= max_genus as usize {
        return Ok(false);
    }
    let check = CACHE_REVALIDATE_GENUS.min(cached.len() as u32 - 1);
    let fresh = enumerate_counts(check, workers)?;
    Ok(fresh[..] == cached[..=check as usize])
}

fn cmd_count(
    max_genus: u32,
    workers: usize,
    format: OutputFormat,
    cache: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    if format == OutputFormat::Dot {
        return Err(usage("--format dot is only valid for the tree subcommand"));
    }
    if max_genus > MAX_GENUS {
        return Err(usage(format!(
            "--max-genus {max_genus} exceeds the window capability (max {MAX_GENUS})"
        )));
    }
    if workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    let cached = cache.and_then(read_cache);
    let counts = match &cached {
        Some(c) if usable_cache(c, max_genus, workers)? => {
            writeln!(err, "using cached counts from {}", cache.unwrap().display())?;
            c[..=max_genus as usize].to_vec()
        }
        _ => {
            if cached.is_some() {
                writeln!(
                    err,
                    "cache does not cover genus {max_genus} or failed revalidation; recomputing"
                )?;
            }
            let counts = enumerate_counts(max_genus, workers)?;
            if let Some(path) = cache {
                write_cache(path, &counts)?;
            }
            counts
        }
    };
    let rows = bounds::genus_table(max_genus, Some(&counts)).map_err(|e| usage(e.to_string()))?;
    write_rows(&rows, format, out)?;
    let broken: Vec<u32> = rows
        .iter()
        .filter(|r| !r.sandwich_holds())
        .map(|r| r.g)
        .collect();
    if broken.is_empty() {
        Ok(EXIT_OK)
    } else {
        writeln!(err, "bound sandwich violated at genus {broken:?}")?;
        Ok(EXIT_FAIL)
    }
}

fn write_rows(rows: &[GenusRow], format: OutputFormat, out: &mut dyn Write) -> Result<(), Failure> {
    match format {
        OutputFormat::Csv => bounds::write_csv(rows, out)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut *out, rows)?;
            writeln!(out)?;
        }
        OutputFormat::Table => write_table(rows, out)?,
        OutputFormat::Dot => unreachable!("rejected by caller"),
    }
    Ok(())
}

/// Aligned text table. The last column is the observed ratio
/// `n_g / n_{g-1}`, informational only.
fn write_table(rows: &[GenusRow], out: &mut dyn Write) -> io::Result<()> {
    let cell = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut lines = vec![[
        "g".to_string(),
        "2F_g".to_string(),
        "n_g".to_string(),
        "1+3*2^(g-3)".to_string(),
        "C_g".to_string(),
        "n_g/n_(g-1)".to_string(),
    ]];
    let mut previous = None;
    for r in rows {
        let ratio = match (previous, r.count) {
            (Some(p), Some(n)) if p > 0 => format!("{:.4}", n as f64 / p as f64),
            _ => String::new(),
        };
        previous = r.count;
        lines.push([
            r.g.to_string(),
            cell(r.lower),
            cell(r.count),
            cell(r.upper),
            r.catalan.to_string(),
            ratio,
        ]);
    }
    let mut widths = [0usize; 6];
    for line in &lines {
        for (w, c) in widths.iter_mut().zip(line) {
            *w = (*w).max(c.len());
        }
    }
    for line in &lines {
        let cells: Vec<String> = line
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end())?;
    }
    Ok(())
}

fn cmd_verify(
    suite: Suite,
    max_genus: u32,
    workers: usize,
    hard_cap: Option<u32>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    guard(
        &format!("suite {suite}"),
        max_genus,
        suite.guard(),
        hard_cap,
    )?;
    if max_genus < suite.min_genus() {
        return Err(usage(format!(
            "suite {suite} needs --max-genus >= {}",
            suite.min_genus()
        )));
    }
    if workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    let report = match suite {
        Suite::Oracle => {
            verify::oracle_suite_capped(max_genus, workers, hard_cap.unwrap_or(suite.guard()))
        }
        _ => verify::run_suite(suite, max_genus, workers),
    };
    write!(out, "{report}")?;
    let verdict = if report.passed() { "pass" } else { "FAIL" };
    writeln!(
        out,
        "suite {suite}: {} checks, {} failed: {verdict}",
        report.checks.len(),
        report.failures()
    )?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_multiset(
    family: Family,
    genus: u32,
    format: OutputFormat,
    hard_cap: Option<u32>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let (name, suite) = match family {
        Family::A => ("multiset A", Suite::Lemma1),
        Family::B => ("multiset B", Suite::Lemma2),
    };
    guard(name, genus, suite.guard(), hard_cap)?;
    let m: Multiset = match family {
        Family::A => bounds::multiset_a(genus),
        Family::B => bounds::multiset_b(genus),
    }
    .map_err(|e| usage(e.to_string()))?;
    match format {
        OutputFormat::Table => writeln!(out, "{m}")?,
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["value", "count"])?;
            for (v, c) in m.pairs() {
                w.write_record([v.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let pairs: BTreeMap<usize, u64> = m.pairs().collect();
            serde_json::to_writer(&mut *out, &pairs)?;
            writeln!(out)?;
        }
        OutputFormat::Dot => {
            return Err(usage("--format dot is only valid for the tree subcommand"))
        }
    }
    Ok(EXIT_OK)
}

fn cmd_tree(
    max_genus: u32,
    format: OutputFormat,
    hard_cap: Option<u32>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    if format != OutputFormat::Dot {
        return Err(usage("the tree subcommand only supports --format dot"));
    }
    guard("tree", max_genus, DOT_MAX_GENUS, hard_cap)?;
    let dot = tree::export_tree_dot_capped(max_genus, hard_cap.unwrap_or(DOT_MAX_GENUS))
        .map_err(|e| usage(e.to_string()))?;
    out.write_all(dot.as_bytes())?;
    Ok(EXIT_OK)
}

fn cmd_stats(max_genus: u32, workers: usize, out: &mut dyn Write) -> Result<i32, Failure> {
    if workers == 0 {
        return Err(usage("--workers must be at least 1"));
    }
    let cfg = EnumConfig::new(max_genus).with_workers(workers);
    let stats = tree::enumerate_with_visitor(&cfg, |_| {}).map_err(|e| usage(e.to_string()))?;
    serde_json::to_writer_pretty(&mut *out, &stats.levels)?;
    writeln!(out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_cap(
            std::iter::once("nsg").chain(args.iter().copied()),
            None,
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn count_genus_zero() {
        let (code, out, _) = run_args(&["count", "--max-genus", "0", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out, "g,lower_2Fg,n_g,upper_1p3x2gm3,catalan\n0,,1,,1\n");
    }

    #[test]
    fn table_layout() {
        let (code, out, _) = run_args(&["count", "--max-genus", "3", "--workers", "1"]);
        assert_eq!(code, 0);
        let lines: Vec<_> = out.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("g  2F_g  n_g"));
        assert!(lines[4].ends_with("2.0000"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["count"]).0, 2);
        assert_eq!(
            run_args(&["count", "--max-genus", "3", "--format", "dot"]).0,
            2
        );
        assert_eq!(run_args(&["count", "--max-genus", "99"]).0, 2);
        assert_eq!(run_args(&["tree", "--max-genus", "9"]).0, 2);
        assert_eq!(
            run_args(&["tree", "--max-genus", "2", "--format", "csv"]).0,
            2
        );
        assert_eq!(
            run_args(&["verify", "--suite", "nope", "--max-genus", "3"]).0,
            2
        );
        assert_eq!(run_args(&["multiset", "C", "3"]).0, 2);
        assert_eq!(run_args(&["multiset", "A", "1"]).0, 2);
        let (code, _, err) = run_args(&["verify", "--suite", "oracle", "--max-genus", "14"]);
        assert_eq!(code, 2);
        assert!(err.contains("guard 13"), "{err}");
        assert_eq!(run_args(&["--help"]).0, 0);
    }

    #[test]
    fn hard_cap_overrides_guard() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with_cap(
            ["nsg", "tree", "--max-genus", "9"],
            Some(9),
            &mut out,
            &mut err,
        );
        assert_eq!(code, 0);
        let code = run_with_cap(
            ["nsg", "tree", "--max-genus", "3"],
            Some(2),
            &mut out,
            &mut err,
        );
        assert_eq!(code, 2);
    }

    #[test]
    fn multiset_formats() {
        assert_eq!(
            run_args(&["multiset", "A", "5"]).1,
            "{0, 0, 0, 0, 1, 1, 2, 2, 4, 6}\n"
        );
        assert_eq!(run_args(&["multiset", "a", "2"]).1, "{1, 3}\n");
        assert_eq!(run_args(&["multiset", "B", "3"]).1, "{0, 1, 2, 4}\n");
        assert_eq!(
            run_args(&["multiset", "B", "4", "--format", "csv"]).1,
            "value,count\n0,1\n1,3\n2,1\n3,1\n5,1\n"
        );
        assert_eq!(
            run_args(&["multiset", "A", "4", "--format", "json"]).1,
            "{\"0\":2,\"1\":2,\"3\":1,\"5\":1}\n"
        );
    }

    #[test]
    fn cache_reuse_and_revalidation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ns_counts.json");
        let p = path.to_str().unwrap();
        let (code, first, _) = run_args(&[
            "count",
            "--max-genus",
            "12",
            "--format",
            "csv",
            "--cache",
            p,
        ]);
        assert_eq!(code, 0);
        assert_eq!(read_cache(&path).unwrap().len(), 13);

        let (code, second, err) = run_args(&[
            "count",
            "--max-genus",
            "10",
            "--format",
            "csv",
            "--cache",
            p,
        ]);
        assert_eq!(code, 0);
        assert!(err.contains("using cached counts"));
        assert_eq!(
            second,
            first
                .lines()
                .take(12)
                .map(|l| format!("{l}\n"))
                .collect::<String>()
        );

        // corrupt a revalidated row: the cache is ignored and rewritten
        let mut counts = read_cache(&path).unwrap();
        counts[5] += 1;
        write_cache(&path, &counts).unwrap();
        let (code, third, err) = run_args(&[
            "count",
            "--max-genus",
            "12",
            "--format",
            "csv",
            "--cache",
            p,
        ]);
        assert_eq!(code, 0);
        assert!(err.contains("recomputing"));
        assert_eq!(third, first);
        assert_eq!(read_cache(&path).unwrap()[5], 12);

        let (_, _, err) = run_args(&["count", "--max-genus", "12", "--cache", p, "--no-cache"]);
        assert!(err.is_empty());
    }
}
