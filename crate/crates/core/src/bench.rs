//! Benchmark formula families, a seeded random generator and the
//! measurement harness.

use std::io;
use std::str::FromStr;
use std::time::Duration;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::proof::Rule;
use crate::search::{prove_formula_with, Algo, SearchConfig, SearchStats, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    E1,
    E2,
    E3,
    Phi,
    Psi,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BenchError {
    #[error("unknown formula family {0:?}")]
    UnknownFamily(String),
    #[error("no formula of size {size} exists over {num_vars} variables")]
    Infeasible { size: usize, num_vars: usize },
}

impl FromStr for Family {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "e1" => Ok(Family::E1),
            "e2" => Ok(Family::E2),
            "e3" => Ok(Family::E3),
            "phi" => Ok(Family::Phi),
            "psi" => Ok(Family::Psi),
            _ => Err(BenchError::UnknownFamily(s.to_string())),
        }
    }
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::E1 => "E1",
            Family::E2 => "E2",
            Family::E3 => "E3",
            Family::Phi => "Phi",
            Family::Psi => "Psi",
        }
    }

    /// Whether the family index `n` matters.
    pub fn indexed(self) -> bool {
        matches!(self, Family::Phi | Family::Psi)
    }

    pub fn label(self, n: usize) -> String {
        if self.indexed() {
            format!("{}{n}", self.name())
        } else {
            self.name().to_string()
        }
    }
}

fn v(name: &str) -> Formula {
    Formula::var(name)
}

fn nv(name: &str) -> Formula {
    Formula::neg_var(name)
}

fn and(a: Formula, b: Formula) -> Formula {
    Formula::and(a, b)
}

fn or(a: Formula, b: Formula) -> Formula {
    Formula::or(a, b)
}

/// `(¬X∧((X∨¬Y)∧(X∨Y))) ∨ (¬X∧((¬X∧Y)∨(¬X∧¬Y)))`, shared by E1 and E2.
fn e_tail() -> Formula {
    or(
        and(nv("X"), and(or(v("X"), nv("Y")), or(v("X"), v("Y")))),
        and(nv("X"), or(and(nv("X"), v("Y")), and(nv("X"), nv("Y")))),
    )
}

fn phi(n: usize) -> Formula {
    let mut f = or(v("X0"), nv("X0"));
    for i in 0..n {
        let (x, y, z) = (format!("X{i}"), format!("Y{i}"), format!("Z{i}"));
        let left = and(and(v(&x), v(&y)), and(v(&x), v(&z)));
        let right = or(or(and(nv(&x), f), nv(&y)), nv(&z));
        f = or(left, right);
    }
    f
}

fn psi(n: usize) -> Formula {
    let mut p1 = Formula::Top;
    let mut p2 = Formula::Bot;
    for i in 0..n {
        p1 = and(p1, v(&format!("X{i}")));
        p2 = or(p2, v(&format!("Y{i}")));
    }
    let p3 = and(or(v("X"), and(v("Y"), p2.clone())), p1.clone());
    let p4 = or(and(v("Y"), or(v("X"), p1)), p2);
    or(p3.negate(), p4)
}

/// A member of one of the benchmark families; `n` is ignored for E1–E3.
pub fn gen_family(family: Family, n: usize) -> Formula {
    match family {
        Family::E1 => or(
            and(or(nv("X"), v("Y")), v("X")),
            or(and(v("X"), nv("Y")), e_tail()),
        ),
        Family::E2 => or(v("X"), e_tail()),
        Family::E3 => or(
            and(
                and(or(v("X"), nv("Y")), or(v("X"), v("Y"))),
                or(nv("X"), and(v("X"), nv("Y"))),
            ),
            or(nv("X"), v("Y")),
        ),
        Family::Phi => phi(n),
        Family::Psi => psi(n),
    }
}

/// Probability of a constant at a size-1 leaf, for each of `⊤` and `⊥`.
const CONSTANT_WEIGHT: f64 = 0.05;

/// A random formula of exactly `size` symbols over `X0..X{num_vars-1}`,
/// deterministic in `seed`.
///
/// Sizes 1 and 2 are leaves (a variable or constant; a negated variable).
/// Larger sizes are a conjunction or disjunction with equal probability,
/// splitting the remaining budget uniformly between the two sides.
pub fn gen_random(size: usize, num_vars: usize, seed: u64) -> Result<Formula, BenchError> {
    if size == 0 || (num_vars == 0 && !feasible_without_vars(size)) {
        return Err(BenchError::Infeasible { size, num_vars });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_of_size(&mut rng, size, num_vars))
}

/// Without variables every leaf is a constant of size 1, so sizes are odd.
fn feasible_without_vars(size: usize) -> bool {
    size % 2 == 1
}

fn random_of_size(rng: &mut ChaCha8Rng, size: usize, num_vars: usize) -> Formula {
    let var = |rng: &mut ChaCha8Rng| format!("X{}", rng.gen_range(0..num_vars));
    match size {
        1 => {
            let u: f64 = rng.gen();
            if num_vars == 0 || u < 2.0 * CONSTANT_WEIGHT {
                if u < CONSTANT_WEIGHT || (num_vars == 0 && rng.gen_bool(0.5)) {
                    Formula::Top
                } else {
                    Formula::Bot
                }
            } else {
                Formula::var(&var(rng))
            }
        }
        2 => Formula::neg_var(&var(rng)),
        _ => {
            let rest = size - 1;
            let left = loop {
                let l = rng.gen_range(1..rest);
                if num_vars > 0 || (feasible_without_vars(l) && feasible_without_vars(rest - l)) {
                    break l;
                }
            };
            let a = random_of_size(rng, left, num_vars);
            let b = random_of_size(rng, rest - left, num_vars);
            if rng.gen_bool(0.5) {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
    }
}

/// One (formula, algorithm) measurement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchRow {
    pub label: String,
    pub algo: Algo,
    pub verdict: Verdict,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    label: &'a str,
    algo: &'static str,
    verdict: &'static str,
    total_rules: usize,
    elapsed_ms: u128,
    visited: usize,
    peak_memo: usize,
    timeout: bool,
}

#[derive(Serialize)]
struct RuleRow<'a> {
    label: &'a str,
    algo: &'static str,
    rule: &'static str,
    count: usize,
}

impl BenchReport {
    /// One row per cell: `label, algo, verdict, total_rules, elapsed_ms,
    /// visited, peak_memo, timeout`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(CsvRow {
                label: &r.label,
                algo: r.algo.name(),
                verdict: r.verdict.name(),
                total_rules: r.stats.total_rules,
                elapsed_ms: r.stats.elapsed.as_millis(),
                visited: r.stats.sequents_visited,
                peak_memo: r.stats.peak_memo,
                timeout: r.verdict == Verdict::Timeout,
            })?;
        }
        w.flush()?;
        Ok(())
    }

    /// Per-rule breakdown: `label, algo, rule, count`, omitting zero counts.
    pub fn write_rules_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            for (rule, &count) in &r.stats.rules_applied {
                w.serialize(RuleRow {
                    label: &r.label,
                    algo: r.algo.name(),
                    rule: Rule::name(*rule),
                    count,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(60);

/// Default configuration for benchmarking: no proof reconstruction, 60 s
/// per cell.
pub fn bench_config() -> SearchConfig {
    SearchConfig {
        build_proof: false,
        timeout: Some(DEFAULT_TIMEOUT),
        forward_filter: true,
    }
}

/// Runs every algorithm on every formula, in order.
pub fn run_bench(formulas: &[(String, Formula)], algos: &[Algo], cfg: &SearchConfig) -> BenchReport {
    let mut rows = Vec::new();
    for (label, f) in formulas {
        for &algo in algos {
            let out = prove_formula_with(f, algo, cfg);
            rows.push(BenchRow {
                label: label.clone(),
                algo,
                verdict: out.verdict,
                stats: out.stats,
            });
        }
    }
    BenchReport { rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn phi_zero() {
        assert_eq!(gen_family(Family::Phi, 0), parse("X0 | ~X0").unwrap());
    }

    #[test]
    fn psi_zero() {
        let expected = parse("~((X | (Y & F)) & T) | ((Y & (X | T)) | F)").unwrap();
        assert_eq!(gen_family(Family::Psi, 0), expected);
        assert_eq!(gen_family(Family::Psi, 0).to_string(), expected.to_string());
    }

    #[test]
    fn e2_text() {
        let expected = parse("X | ((~X & ((X | ~Y) & (X | Y))) | (~X & ((~X & Y) | (~X & ~Y))))").unwrap();
        assert_eq!(gen_family(Family::E2, 7), expected);
    }

    #[test]
    fn phi_one_text() {
        let expected = parse("((X0 & Y0) & (X0 & Z0)) | (((~X0 & (X0 | ~X0)) | ~Y0) | ~Z0)").unwrap();
        assert_eq!(gen_family(Family::Phi, 1), expected);
    }

    #[test]
    fn random_sizes_and_determinism() {
        for seed in 0..200 {
            for size in [1, 2, 3, 7, 20, 100] {
                let f = gen_random(size, 3, seed).unwrap();
                assert_eq!(f.size(), size);
                assert_eq!(f, gen_random(size, 3, seed).unwrap());
            }
        }
        assert!(gen_random(0, 3, 0).is_err());
        assert!(gen_random(4, 0, 0).is_err());
        assert_eq!(gen_random(5, 0, 1).unwrap().size(), 5);
    }

    #[test]
    fn family_parse() {
        assert_eq!("PSI".parse::<Family>().unwrap(), Family::Psi);
        assert!("omega".parse::<Family>().is_err());
    }
}
