//! Acceptance criteria. Each criterion prints one PASS/FAIL line; the test
//! fails if any criterion fails.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use orthologic::bench::{gen_family, Family};
use orthologic::models::{eval, refute_sequent, refute_validity, verify_ortholattice, FiniteOrtholattice, Valuation};
use orthologic::ol::{ax_expand, erase_olf, erase_olf0, restrict_cw};
use orthologic::olf::{translate_olf0_to_olf, translate_rr_to_olf};
use orthologic::olf0::{
    admissible_cut_traced, ax_expand_focused, and_r2, exchange_rr, reac_swap, swap_ll, top_r2, translate_ol_to_olf0,
    vee_widen, CutKind, Position, Side,
};
use orthologic::proof::{check_concludes, psi_violations};
use orthologic::search::{
    branch_bound, prove_bwf, prove_formula, prove_formula_with, prove_ol_oracle, Algo, OracleVerdict, SearchConfig, Verdict,
};
use orthologic::{check, Formula, Polarity, Proof, SeqKind, Sequent, TransformError, VarId};

/// Wall-clock limits.
const FULL_SWEEP_LIMIT: Duration = Duration::from_secs(300);
const PSI100_BWF_LIMIT: Duration = Duration::from_secs(10);

const CUT_PAIRS_PER_KIND: usize = 500;
const DEPTH_SAMPLE: usize = 1_000;
const PHI_SAMPLE: usize = 10_000;
const ORACLE_SAMPLE: usize = 300;
/// Family members up to this size also get their proofs rebuilt and checked.
const PROOF_SIZE_LIMIT: usize = 150;

fn verdict_cfg(build_proof: bool) -> SearchConfig {
    SearchConfig {
        build_proof,
        ..SearchConfig::default()
    }
}

struct Report {
    lines: Vec<(bool, String)>,
}

impl Report {
    fn record(&mut self, n: usize, name: &str, ok: bool, detail: String) {
        let line = format!("{} criterion {n} ({name}): {detail}", if ok { "PASS" } else { "FAIL" });
        writeln!(std::io::stdout().lock(), "{line}").unwrap();
        self.lines.push((ok, line));
    }
}

fn family_instances() -> Vec<(String, Formula, bool)> {
    let mut out = vec![
        ("E1".to_string(), gen_family(Family::E1, 0), false),
        ("E2".to_string(), gen_family(Family::E2, 0), true),
        ("E3".to_string(), gen_family(Family::E3, 0), true),
    ];
    for n in 0..=20 {
        out.push((Family::Phi.label(n), gen_family(Family::Phi, n), true));
    }
    for n in [0, 5, 10, 20, 100] {
        out.push((Family::Psi.label(n), gen_family(Family::Psi, n), false));
    }
    out
}

fn criterion_1(r: &mut Report) {
    let start = Instant::now();
    let mut wrong = Vec::new();
    let mut psi100 = Duration::ZERO;
    for (label, f, expected) in family_instances() {
        for algo in Algo::ALL {
            let t = Instant::now();
            let out = prove_formula_with(&f, algo, &verdict_cfg(f.size() <= PROOF_SIZE_LIMIT));
            if label == "Psi100" && algo == Algo::Bwf {
                psi100 = t.elapsed();
            }
            let proved = match &out.verdict {
                Verdict::Provable(Some(p)) => {
                    if check_concludes(p, &Sequent::rr(f.clone(), f.clone())).is_err() {
                        wrong.push(format!("{label}/{}: invalid proof", algo.name()));
                    }
                    true
                }
                Verdict::Provable(None) => true,
                _ => false,
            };
            if proved != expected {
                wrong.push(format!("{label}/{}: {}", algo.name(), out.verdict.name()));
            }
        }
    }
    let total = start.elapsed();
    let ok = wrong.is_empty() && total < FULL_SWEEP_LIMIT && psi100 < PSI100_BWF_LIMIT;
    r.record(
        1,
        "benchmark verdicts",
        ok,
        format!(
            "{} mismatches {wrong:?}; sweep {:.2?} (limit {:?}); bwf Psi100 {:.2?} (limit {:?})",
            wrong.len(),
            total,
            FULL_SWEEP_LIMIT,
            psi100,
            PSI100_BWF_LIMIT
        ),
    );
}

fn criterion_2(r: &mut Report) {
    let mut formulas: Vec<(String, Formula)> = random_formulas(DEPTH_SAMPLE, 1..=30, 3, 2)
        .into_iter()
        .enumerate()
        .map(|(i, f)| (format!("random#{i}"), f))
        .collect();
    formulas.extend(family_instances().into_iter().map(|(l, f, _)| (l, f)));
    let mut violations = Vec::new();
    let mut worst = 0.0f64;
    for (label, f) in &formulas {
        let s = Sequent::rr(f.clone(), f.clone());
        let bound = branch_bound(&s).unwrap();
        let depth = prove_formula_with(f, Algo::Bwf, &verdict_cfg(false)).stats.max_depth as u128;
        if depth > bound.psi || depth > bound.sequents {
            violations.push(format!("{label}: depth {depth}, ψ {}, 3n² {}", bound.psi, bound.sequents));
        }
        worst = worst.max(depth as f64 / bound.psi.min(bound.sequents) as f64);
    }
    r.record(
        2,
        "termination bounds",
        violations.is_empty(),
        format!(
            "{} formulas, {} violations {violations:?}; largest depth/bound ratio {worst:.3}",
            formulas.len(),
            violations.len()
        ),
    );
}

/// Proof-producing closure corpus shared by criteria 3 and 4.
#[derive(Default)]
struct Closure {
    checked: usize,
    failures: Vec<String>,
    olf: Vec<Proof>,
}

impl Closure {
    fn expect(&mut self, what: &str, p: Result<Proof, TransformError>, s: &Sequent) -> Option<Proof> {
        self.checked += 1;
        match p {
            Ok(p) => match check_concludes(&p, s) {
                Ok(()) => Some(p),
                Err(e) => {
                    self.failures.push(format!("{what}: {e}"));
                    None
                }
            },
            Err(e) => {
                self.failures.push(format!("{what} on {s}: {e}"));
                None
            }
        }
    }

    /// Translations and lemmas applied to an OL proof of `s`.
    fn ol_chain(&mut self, e: &Proof) {
        let s = e.conclusion.clone();
        let rr = Sequent::rr(s.left.clone(), s.right.clone());
        self.expect("restrict_cw", restrict_cw(e), &s);
        let Some(t) = self.expect("translate_ol_to_olf0", translate_ol_to_olf0(e), &rr) else {
            return;
        };
        self.expect("erase_olf0", erase_olf0(&t), &s);
        if let Some(q) = self.expect("translate_olf0_to_olf", translate_olf0_to_olf(&t).map(|x| x.into_proof()), &rr) {
            self.olf.push(q);
        }
        if let Some(q) = self.expect("translate_rr_to_olf", translate_rr_to_olf(&t), &rr) {
            self.olf.push(q);
        }
        let ex = Sequent::rr(s.right.clone(), s.left.clone());
        self.expect("exchange_rr", exchange_rr(&t), &ex);
        let and = Sequent::rr(s.left.clone(), Formula::and(s.right.clone(), s.right.clone()));
        self.expect("and_r2", and_r2(&t, &t), &and);
        self.olf0_lemmas(&t);
    }

    /// Lemmas applied to every applicable node of an OLf0 proof.
    fn olf0_lemmas(&mut self, t: &Proof) {
        let y = Formula::var("Y");
        let mut nodes = Vec::new();
        t.for_each_node(|_, n| nodes.push(n.clone()));
        for n in nodes.iter().take(40) {
            let (l, rt) = (&n.conclusion.left, &n.conclusion.right);
            match n.conclusion.kind {
                SeqKind::Ll => {
                    let swapped = self.expect("swap_ll", swap_ll(n), &n.conclusion.swapped());
                    if let Some(q) = swapped {
                        if q.size() != n.size() {
                            self.failures.push(format!("swap_ll changed size at {}", n.conclusion));
                        }
                    }
                    if l.is_sync() {
                        let w = Sequent::ll(Formula::or(l.clone(), y.clone()), rt.clone());
                        self.expect("vee_widen ll", vee_widen(Side::Left, Position::Ll, n, &y), &w);
                    }
                }
                SeqKind::Rv => {
                    let rr = Sequent::rr(rt.clone(), l.clone());
                    self.expect("reac_swap", reac_swap(n), &rr);
                    if rt.is_async() {
                        let w = Sequent::rv(Formula::or(y.clone(), rt.clone()), l.clone());
                        self.expect("vee_widen rv right", vee_widen(Side::Right, Position::RvRight, n, &y), &w);
                    }
                    if l.is_sync() {
                        let w = Sequent::rv(Formula::or(l.clone(), y.clone()), rt.clone());
                        self.expect("vee_widen rv left", vee_widen(Side::Left, Position::RvLeft, n, &y), &w);
                    }
                }
                SeqKind::Fc if l.is_sync() => {
                    let w = Sequent::fc(Formula::or(y.clone(), l.clone()), rt.clone());
                    self.expect("vee_widen fc", vee_widen(Side::Right, Position::Fc, n, &y), &w);
                }
                _ => {}
            }
        }
    }
}

fn closure_corpus() -> Vec<Formula> {
    let mut fs = random_formulas(250, 1..=12, 3, 3);
    fs.extend([Family::E1, Family::E2, Family::E3].map(|fam| gen_family(fam, 0)));
    fs.extend((0..=4).map(|n| gen_family(Family::Phi, n)));
    fs.extend((0..=3).map(|n| gen_family(Family::Psi, n)));
    fs
}

fn build_closure(cuts: &[(CutKind, Sequent, Result<Proof, TransformError>)]) -> Closure {
    let mut c = Closure::default();
    let corpus = closure_corpus();
    for a in &corpus {
        let diag = Sequent::rr(a.clone(), a.clone());
        for algo in Algo::ALL {
            if let Verdict::Provable(p) = prove_formula(a, algo).verdict {
                let Some(p) = c.expect(algo.name(), p.ok_or(TransformError::Precondition {
                    op: "search",
                    reason: "no proof built".into(),
                }), &diag) else {
                    continue;
                };
                c.olf.push(p.clone());
                if algo == Algo::Bwf {
                    if let Some(e) = c.expect("erase_olf", erase_olf(&p), &diag.erased()) {
                        c.ol_chain(&e);
                    }
                }
            }
        }
        let mut subs: Vec<Formula> = a.subformulas().into_iter().collect();
        subs.truncate(30);
        for b in &subs {
            c.expect("ax_expand", Ok(ax_expand(b)), &Sequent::ol(b.negate(), b.clone()));
            if b.is_sync_or_neg_var() {
                c.expect("ax_expand_focused", ax_expand_focused(b), &Sequent::rv(b.clone(), b.negate()));
            }
            c.expect("top_r2", Ok(top_r2(b)), &Sequent::rr(b.clone(), Formula::Top));
        }
    }
    // Two-sided sequents ⊢ ⇑ A, ¬A∨B and ⊢ ⇑ A∧B, (¬A∨¬B)∨C.
    let parts = random_formulas(300, 1..=8, 3, 8);
    for w in parts.chunks(3) {
        let (a, b, x) = (&w[0], &w[1], &w[2]);
        let goals = [
            Sequent::rr(a.clone(), Formula::or(a.negate(), b.clone())),
            Sequent::rr(Formula::and(a.clone(), b.clone()), Formula::or(Formula::and(a.clone(), b.clone()).negate(), x.clone())),
        ];
        for s in goals {
            if let Ok(out) = prove_bwf(&s) {
                if let Some(p) = c.expect("bwf pair", out.verdict.proof().cloned().ok_or(TransformError::Precondition {
                    op: "search",
                    reason: "expected a provable pair".into(),
                }), &s) {
                    c.olf.push(p.clone());
                    if let Some(e) = c.expect("erase_olf", erase_olf(&p), &s.erased()) {
                        c.ol_chain(&e);
                    }
                }
            }
        }
    }
    // Unrestricted OL proofs from the loop-checking oracle.
    let pairs = random_formulas(120, 1..=6, 2, 4);
    for w in pairs.chunks(2) {
        let s = Sequent::ol(w[0].clone(), w[1].clone());
        if let OracleVerdict::Provable(p) = prove_ol_oracle(&s, ORACLE_BUDGET) {
            if c.expect("ol oracle", Ok(p.clone()), &s).is_some() {
                c.ol_chain(&p);
            }
        }
    }
    for (kind, s, p) in cuts {
        c.expect(kind.name(), p.clone(), s);
    }
    c
}

fn criterion_3(r: &mut Report, c: &Closure) {
    r.record(
        3,
        "kernel closure",
        c.failures.is_empty(),
        format!(
            "{} constructed proofs checked, {} failures {:?}",
            c.checked,
            c.failures.len(),
            c.failures.iter().take(5).collect::<Vec<_>>()
        ),
    );
}

fn criterion_4(r: &mut Report, c: &Closure) {
    let mut edges = 0;
    let mut bad = Vec::new();
    for p in &c.olf {
        p.for_each_node(|_, n| edges += n.premises.len());
        let v = psi_violations(p);
        if !v.is_empty() {
            bad.push(format!("{}: {} edges", p.conclusion, v.len()));
        }
    }
    r.record(
        4,
        "ψ-monotonicity",
        bad.is_empty(),
        format!("{} OLf proofs, {edges} edges, {} violating proofs {bad:?}", c.olf.len(), bad.len()),
    );
}

fn criterion_5(r: &mut Report) {
    let mut corpus = closure_corpus();
    corpus.extend(random_formulas(ORACLE_SAMPLE, 1..=20, 3, 5));
    let mut disagree = Vec::new();
    let (mut oracle_checked, mut oracle_skipped) = (0, 0);
    for a in &corpus {
        let verdicts: Vec<bool> = Algo::ALL
            .iter()
            .map(|&g| prove_formula_with(a, g, &verdict_cfg(false)).verdict.is_provable())
            .collect();
        if verdicts.iter().any(|&v| v != verdicts[0]) {
            disagree.push(format!("{a}: {verdicts:?}"));
            continue;
        }
        if a.size() <= 20 {
            match prove_ol_oracle(&Sequent::ol(a.clone(), a.clone()), ORACLE_BUDGET) {
                OracleVerdict::BudgetExceeded => oracle_skipped += 1,
                v => {
                    oracle_checked += 1;
                    if v.proof().is_some() != verdicts[0] {
                        disagree.push(format!("{a}: focused {} vs OL oracle", verdicts[0]));
                    }
                }
            }
        }
    }
    r.record(
        5,
        "cross-prover agreement",
        disagree.is_empty(),
        format!(
            "{} formulas, {} disagreements {disagree:?}; OL oracle compared on {oracle_checked}, over budget on {oracle_skipped}",
            corpus.len(),
            disagree.len()
        ),
    );
}

fn criterion_6(r: &mut Report) {
    let (h, b2) = (FiniteOrtholattice::hexagon(), FiniteOrtholattice::boolean2());
    let axioms = verify_ortholattice(&h);
    let mut corpus = random_formulas(400, 1..=14, 3, 6);
    corpus.extend([Family::E2, Family::E3].map(|fam| gen_family(fam, 0)));
    corpus.extend((0..=2).map(|n| gen_family(Family::Phi, n)));
    for w in random_formulas(300, 1..=6, 3, 10).chunks(2) {
        let (a, b) = (&w[0], &w[1]);
        corpus.push(Formula::or(Formula::or(a.clone(), b.clone()), a.negate()));
        corpus.push(Formula::or(Formula::and(a.clone(), b.clone()), Formula::or(a.negate(), b.negate())));
        corpus.push(Formula::or(Formula::and(a.clone(), Formula::or(a.negate(), b.clone())), a.negate()));
    }
    let mut provable = 0;
    let mut refuted = Vec::new();
    for a in &corpus {
        if prove_formula_with(a, Algo::Bwf, &verdict_cfg(false)).verdict.is_provable() {
            provable += 1;
            for (name, l) in [("hexagon", &h), ("boolean2", &b2)] {
                if let Some(v) = refute_validity(a, l) {
                    refuted.push(format!("{a} in {name} at {}", l.show_valuation(&v)));
                }
            }
        }
    }
    let v: Valuation = [("X", "x"), ("Y", "y")]
        .iter()
        .map(|(x, e)| (VarId::new(x).unwrap(), h.element(e).unwrap()))
        .collect();
    let lhs = eval(&f("~Y | X"), &v, &h).unwrap();
    let rhs = eval(&f("~Y | (Y & (~Y | X))"), &v, &h).unwrap();
    let om_sequent = (f("Y & ~X"), f("~Y | (Y & (~Y | X))"));
    let pinned = h.name(lhs) == "x" && h.name(rhs) == "ny";
    let om_refuted = refute_sequent(&om_sequent.0, &om_sequent.1, &h).is_some()
        && !h.leq(h.neg(eval(&om_sequent.0, &v, &h).unwrap()), eval(&om_sequent.1, &v, &h).unwrap());
    let ok = refuted.is_empty() && axioms.is_empty() && pinned && om_refuted;
    r.record(
        6,
        "semantic soundness",
        ok,
        format!(
            "{provable} provable formulas, {} refuted {refuted:?}; hexagon axiom violations {}; \
             orthomodularity at X=x, Y=y: ¬Y∨X = {}, ¬Y∨(Y∧(¬Y∨X)) = {}",
            refuted.len(),
            axioms.len(),
            h.name(lhs),
            h.name(rhs)
        ),
    );
}

fn run_cuts() -> (Vec<(CutKind, Sequent, Result<Proof, TransformError>)>, Vec<(CutKind, usize, usize)>) {
    let mut results = Vec::new();
    let mut stats = Vec::new();
    let cases = cut_corpus(CUT_PAIRS_PER_KIND, 7);
    for kind in CutKind::ALL {
        let mut measured = 0;
        let mut count = 0;
        for c in cases.iter().filter(|c| c.kind == kind) {
            count += 1;
            let out = admissible_cut_traced(kind, &c.p1, &c.p2).map(|(p, t)| {
                measured += t.measured_calls;
                p
            });
            results.push((kind, c.conclusion.clone(), out));
        }
        stats.push((kind, count, measured));
    }
    (results, stats)
}

fn criterion_7(r: &mut Report, cuts: &[(CutKind, Sequent, Result<Proof, TransformError>)], stats: &[(CutKind, usize, usize)]) {
    let mut failures = Vec::new();
    let mut increases = 0;
    for (kind, s, out) in cuts {
        match out {
            Ok(p) => {
                if let Err(e) = check_concludes(p, s) {
                    failures.push(format!("{kind}: {e}"));
                }
            }
            Err(TransformError::MeasureIncrease { .. }) => increases += 1,
            Err(e) => failures.push(format!("{kind}: {e}")),
        }
    }
    let counts_ok = stats.iter().all(|&(_, n, _)| n == CUT_PAIRS_PER_KIND);
    let measured: usize = stats.iter().map(|s| s.2).sum();
    let measure_active = !cfg!(debug_assertions) || measured > 0;
    let ok = failures.is_empty() && increases == 0 && counts_ok && measure_active;
    let per_kind: Vec<String> = stats.iter().map(|(k, n, m)| format!("{k}:{n}/{m}")).collect();
    r.record(
        7,
        "cut admissibility",
        ok,
        format!(
            "{} cuts (kind:pairs/measured steps {}), {} failures {:?}, {increases} measure increases{}",
            cuts.len(),
            per_kind.join(" "),
            failures.len(),
            failures.iter().take(5).collect::<Vec<_>>(),
            if cfg!(debug_assertions) { "" } else { " (measure checks disabled in release)" }
        ),
    );
}

fn criterion_8(r: &mut Report) {
    let bot_d = Sequent::rr(Formula::Bot, f(D));
    let cases = [
        ("OL", ol_example(), Sequent::ol(Formula::Bot, f(D))),
        ("OLf0 unique", olf0_unique_example(), Sequent::rr(f("(X | A) | B"), f("(C | (D | ~X)) & T"))),
        ("OLf0", olf0_example(), bot_d.clone()),
        ("OLf", olf_example(), bot_d),
    ];
    let mut failures = Vec::new();
    for (name, p, s) in &cases {
        if let Err(e) = check_concludes(p, s) {
            failures.push(format!("{name}: {e}"));
        }
    }
    r.record(
        8,
        "example transcriptions",
        failures.is_empty(),
        format!("{} transcriptions, {} failures {failures:?}", cases.len(), failures.len()),
    );
}

fn criterion_9(r: &mut Report) {
    let sample = random_formulas(PHI_SAMPLE, 1..=100, 4, 9);
    let mut bad = Vec::new();
    for a in &sample {
        let n = a.size() as u32;
        if a.phi() >= 1u128 << n {
            bad.push(format!("φ({a}) = {}", a.phi()));
        }
        let na = a.negate();
        if na.negate() != *a {
            bad.push(format!("negate not involutive on {a}"));
        }
        let flipped = match a.polarity() {
            Polarity::Synchronous => Polarity::Asynchronous,
            Polarity::Asynchronous => Polarity::Synchronous,
        };
        if na.polarity() != flipped {
            bad.push(format!("polarity not flipped on {a}"));
        }
    }
    r.record(
        9,
        "φ bound",
        bad.is_empty(),
        format!("{} formulas of size 1..100, {} violations {:?}", sample.len(), bad.len(), bad.iter().take(5).collect::<Vec<_>>()),
    );
}

#[test]
fn acceptance() {
    check(&ol_example()).unwrap();
    let mut r = Report { lines: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    let (cuts, cut_stats) = run_cuts();
    let closure = build_closure(&cuts);
    criterion_3(&mut r, &closure);
    criterion_4(&mut r, &closure);
    criterion_5(&mut r);
    criterion_6(&mut r);
    criterion_7(&mut r, &cuts, &cut_stats);
    criterion_8(&mut r);
    criterion_9(&mut r);
    let failed: Vec<&String> = r.lines.iter().filter(|(ok, _)| !ok).map(|(_, l)| l).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:#?}");
}
