//! `ortho`: prove, check, translate, benchmark and refute orthologic formulas.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use orthologic::bench::{bench_config, gen_family, gen_random, run_bench, Family};
use orthologic::models::{refute_validity, verify_ortholattice, FiniteOrtholattice};
use orthologic::ol::{erase_olf, erase_olf0};
use orthologic::olf::translate_olf0_to_olf;
use orthologic::olf0::translate_ol_to_olf0;
use orthologic::proof::LoadError;
use orthologic::search::{prove_bwf_with, prove_formula_with, Algo, SearchConfig, Verdict};
use orthologic::{check, parse, with_big_stack, Calculus, Formula, Proof, Sequent};

#[derive(Parser)]
#[command(name = "ortho", version, about = "Orthologic prover and proof toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a formula (or the sequent ⊢ A, B) is provable.
    Prove(ProveArgs),
    /// Validate a proof file.
    Check { file: PathBuf },
    /// Convert a proof file into another calculus.
    Translate {
        file: PathBuf,
        #[arg(long, value_enum)]
        to: Target,
        /// Output file; standard output by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the benchmark harness and emit CSV.
    Bench(BenchArgs),
    /// Search a finite ortholattice for a valuation falsifying a formula.
    Refute {
        formula: String,
        /// `hexagon`, `boolean2`, or a lattice file. By default the hexagon
        /// is tried first, then the Boolean algebra.
        #[arg(long)]
        lattice: Option<String>,
    },
    /// Print a benchmark or random formula.
    Gen(GenArgs),
}

#[derive(Args)]
struct ProveArgs {
    formula: String,
    /// Second formula B: prove ⊢ ⇑ A, B instead of ⊢ A (bwf only).
    second: Option<String>,
    #[arg(long, value_enum, default_value = "bwf")]
    algo: AlgoArg,
    /// Write the OLf proof as JSON to this file.
    #[arg(long)]
    proof: Option<PathBuf>,
    /// Time limit in seconds.
    #[arg(long)]
    timeout: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Formula families (e1, e2, e3, phi, psi); repeatable.
    #[arg(long)]
    family: Vec<String>,
    /// Indices for indexed families: `5`, `0..10` (inclusive) or `0,5,10`.
    #[arg(long, default_value = "0")]
    n: String,
    /// Algorithms; repeatable. All three by default.
    #[arg(long, value_enum)]
    algo: Vec<AlgoArg>,
    /// Also benchmark random formulas of this size.
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 1)]
    count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    vars: usize,
    /// Time limit per cell in seconds.
    #[arg(long)]
    timeout: Option<f64>,
    /// CSV report destination; standard output by default.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-rule breakdown destination.
    #[arg(long)]
    rules_out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, conflicts_with = "random")]
    family: Option<String>,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long)]
    random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    vars: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Bwf,
    Fwf,
    Diag,
}

impl From<AlgoArg> for Algo {
    fn from(a: AlgoArg) -> Algo {
        match a {
            AlgoArg::Bwf => Algo::Bwf,
            AlgoArg::Fwf => Algo::Fwf,
            AlgoArg::Diag => Algo::Diag,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Ol,
    Olf0,
    Olf,
}

/// Failure with a message and exit status.
struct Fail(u8, String);

type Res = Result<u8, Fail>;

fn usage(msg: impl ToString) -> Fail {
    Fail(2, msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = with_big_stack(move || run(cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Res {
    match cli.command {
        Command::Prove(a) => prove(a),
        Command::Check { file } => check_file(&file),
        Command::Translate { file, to, out } => translate(&file, to, out.as_deref()),
        Command::Bench(a) => bench(a),
        Command::Refute { formula, lattice } => refute(&formula, lattice.as_deref()),
        Command::Gen(a) => gen(a),
    }
}

fn formula(text: &str) -> Result<Formula, Fail> {
    parse(text).map_err(|e| usage(format!("cannot parse {text:?}: {e}")))
}

fn seconds(t: Option<f64>) -> Result<Option<Duration>, Fail> {
    t.map(|s| Duration::try_from_secs_f64(s).map_err(|_| usage(format!("invalid timeout {s}"))))
        .transpose()
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Fail> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write output: {e}"))),
    }
}

fn prove(a: ProveArgs) -> Res {
    let f = formula(&a.formula)?;
    let cfg = SearchConfig {
        build_proof: a.proof.is_some(),
        timeout: seconds(a.timeout)?,
        ..SearchConfig::default()
    };
    let algo = Algo::from(a.algo);
    let outcome = match &a.second {
        Some(b) if algo == Algo::Bwf => {
            prove_bwf_with(&Sequent::rr(f, formula(b)?), &cfg).map_err(|e| usage(e.to_string()))?
        }
        Some(_) => return Err(usage("a second formula is only supported with --algo bwf")),
        None => prove_formula_with(&f, algo, &cfg),
    };
    println!("{}", outcome.verdict.name());
    if let (Some(path), Some(p)) = (&a.proof, outcome.verdict.proof()) {
        write_out(Some(path), &p.to_json())?;
    }
    Ok(match outcome.verdict {
        Verdict::Provable(_) => 0,
        Verdict::Unprovable => 1,
        Verdict::Timeout => 2,
    })
}

/// Loads a proof file; exit status 2 for unreadable or malformed files, 1
/// for nodes that name unknown rules or formulas.
fn load(path: &Path) -> Result<Proof, Fail> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Proof::from_json(&text).map_err(|e| match e {
        LoadError::Malformed(_) => usage(e),
        LoadError::Invalid(_) => Fail(1, e.to_string()),
    })
}

fn check_file(path: &Path) -> Res {
    let p = load(path)?;
    let s = check(&p).map_err(|e| Fail(1, e.to_string()))?;
    println!("valid {} proof of {s}", p.calculus);
    Ok(0)
}

fn translate(path: &Path, to: Target, out: Option<&Path>) -> Res {
    let p = load(path)?;
    check(&p).map_err(|e| Fail(1, e.to_string()))?;
    let fail = |e: orthologic::TransformError| usage(e);
    let to_olf0 = |q: &Proof| translate_ol_to_olf0(q).map_err(fail);
    let to_olf = |q: &Proof| translate_olf0_to_olf(q).map(|r| r.into_proof()).map_err(fail);
    let q = match (p.calculus, to) {
        (Calculus::Ol, Target::Ol) | (Calculus::Olf0, Target::Olf0) | (Calculus::Olf, Target::Olf) => p,
        (Calculus::Ol, Target::Olf0) => to_olf0(&p)?,
        (Calculus::Ol, Target::Olf) => to_olf(&to_olf0(&p)?)?,
        (Calculus::Olf0, Target::Ol) => erase_olf0(&p).map_err(fail)?,
        (Calculus::Olf0, Target::Olf) => to_olf(&p)?,
        (Calculus::Olf, Target::Ol) => erase_olf(&p).map_err(fail)?,
        (Calculus::Olf, Target::Olf0) => to_olf0(&erase_olf(&p).map_err(fail)?)?,
    };
    let s = check(&q).map_err(|e| usage(format!("translation produced an invalid proof: {e}")))?;
    eprintln!("{} proof of {s}", q.calculus);
    write_out(out, &(q.to_json() + "\n"))?;
    Ok(0)
}

/// Parses `5`, `0..10` (inclusive), `0..=10` or `0,5,10`.
fn indices(spec: &str) -> Result<Vec<usize>, Fail> {
    let num = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| usage(format!("invalid index {s:?} in {spec:?}")))
    };
    let mut out = Vec::new();
    for part in spec.split(',') {
        if let Some((lo, hi)) = part.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            out.extend(num(lo)?..=num(hi)?);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(out)
}

fn bench(a: BenchArgs) -> Res {
    let mut formulas = Vec::new();
    for name in &a.family {
        let fam: Family = name.parse().map_err(usage)?;
        let ns = if fam.indexed() { indices(&a.n)? } else { vec![0] };
        formulas.extend(ns.into_iter().map(|n| (fam.label(n), gen_family(fam, n))));
    }
    if let Some(size) = a.random {
        for i in 0..a.count as u64 {
            let seed = a.seed.wrapping_add(i);
            let f = gen_random(size, a.vars, seed).map_err(usage)?;
            formulas.push((format!("Rnd{size}-s{seed}"), f));
        }
    }
    if formulas.is_empty() {
        return Err(usage("nothing to benchmark: give --family or --random"));
    }
    let algos: Vec<Algo> = if a.algo.is_empty() {
        Algo::ALL.to_vec()
    } else {
        a.algo.iter().map(|&x| x.into()).collect()
    };
    let mut cfg = bench_config();
    if let Some(t) = seconds(a.timeout)? {
        cfg.timeout = Some(t);
    }
    let report = run_bench(&formulas, &algos, &cfg);
    let mut csv = Vec::new();
    report.write_csv(&mut csv).map_err(usage)?;
    write_out(a.out.as_deref(), &String::from_utf8_lossy(&csv))?;
    if let Some(path) = &a.rules_out {
        let mut rules = Vec::new();
        report.write_rules_csv(&mut rules).map_err(usage)?;
        write_out(Some(path), &String::from_utf8_lossy(&rules))?;
    }
    Ok(0)
}

fn lattice(spec: &str) -> Result<(String, FiniteOrtholattice), Fail> {
    let l = match spec {
        "hexagon" => FiniteOrtholattice::hexagon(),
        "boolean2" => FiniteOrtholattice::boolean2(),
        path => {
            let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {path}: {e}")))?;
            let l = FiniteOrtholattice::parse(&text).map_err(|e| usage(format!("{path}: {e}")))?;
            let violations = verify_ortholattice(&l);
            if !violations.is_empty() {
                let list: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
                return Err(usage(format!("{path} is not an ortholattice: {}", list.join("; "))));
            }
            l
        }
    };
    Ok((spec.to_string(), l))
}

fn refute(text: &str, spec: Option<&str>) -> Res {
    let f = formula(text)?;
    let lattices = match spec {
        Some(s) => vec![lattice(s)?],
        None => vec![lattice("hexagon")?, lattice("boolean2")?],
    };
    for (name, l) in &lattices {
        if let Some(v) = refute_validity(&f, l) {
            println!("countermodel in {name}: {}", l.show_valuation(&v));
            return Ok(0);
        }
    }
    println!("no countermodel in this lattice");
    Ok(1)
}

fn gen(a: GenArgs) -> Res {
    let f = match (&a.family, a.random) {
        (Some(name), _) => gen_family(name.parse().map_err(usage)?, a.n),
        (None, Some(size)) => gen_random(size, a.vars, a.seed).map_err(usage)?,
        (None, None) => return Err(usage("give --family or --random")),
    };
    println!("{f}");
    Ok(0)
}
