//! Helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use orthologic::bench::gen_random;
use orthologic::olf0::{cut_conclusion, CutKind};
use orthologic::search::{prove_olf0, OracleVerdict};
use orthologic::{parse, Calculus, Formula, Proof, Rule, SeqKind, Sequent};

pub fn f(s: &str) -> Formula {
    parse(s).unwrap()
}

pub fn node(calc: Calculus, rule: &str, kind: SeqKind, l: &str, r: &str, premises: Vec<Proof>) -> Proof {
    let rule = Rule::from_name(rule).unwrap();
    Proof::new(calc, rule, Sequent::new(kind, f(l), f(r)), premises)
}

pub const D: &str = "((X & Y) | ~X) | ~Y";
pub const XD: &str = "(X & Y) | ~X";

/// One-sided OL proof of ⊢ ⊥, D.
pub fn ol_example() -> Proof {
    use SeqKind::Ol;
    let n = |rule, l, r, ps| node(Calculus::Ol, rule, Ol, l, r, ps);
    let left = n(
        "ex",
        "X",
        D,
        vec![n("or1", D, "X", vec![n("or2", XD, "X", vec![n("ax", "~X", "X", vec![])])])],
    );
    let right = n("ex", "Y", D, vec![n("or2", D, "Y", vec![n("ax", "~Y", "Y", vec![])])]);
    let and = n("and", "X & Y", D, vec![left, right]);
    let dd = n("or1", D, D, vec![n("or1", XD, D, vec![and])]);
    n("ex", "F", D, vec![n("cw", D, "F", vec![dd])])
}

/// The unique OLf0 proof of ⊢ ⇑ (X∨A)∨B, (C∨(D∨¬X))∧⊤.
pub fn olf0_unique_example() -> Proof {
    use SeqKind::*;
    let n = |rule, k, l, r, ps| node(Calculus::Olf0, rule, k, l, r, ps);
    let (l, c) = ("(X | A) | B", "C | (D | ~X)");
    let ax = n("ax", Fc, "~X", "X", vec![]);
    let p = n("or1", Fc, "~X", "X | A", vec![ax]);
    let p = n("or1", Fc, "~X", l, vec![p]);
    let p = n("d_l", Ll, l, "~X", vec![p]);
    let p = n("reac_rv", Rv, l, "~X", vec![p]);
    let p = n("reac_f", Fc, l, "~X", vec![p]);
    let p = n("or2", Fc, l, "D | ~X", vec![p]);
    let p = n("or2", Fc, l, c, vec![p]);
    let p = n("d_r", Ll, l, c, vec![p]);
    let p = n("reac_rv", Rv, l, c, vec![p]);
    let top = n("top_rv", Rv, l, "T", vec![]);
    let p = n("and_rv", Rv, l, "(C | (D | ~X)) & T", vec![p, top]);
    n("reac_rr", Rr, l, "(C | (D | ~X)) & T", vec![p])
}

/// OLf0 proof of ⊢ ⇑ ⊥, D.
pub fn olf0_example() -> Proof {
    use SeqKind::*;
    let n = |rule, k, l, r, ps| node(Calculus::Olf0, rule, k, l, r, ps);
    let px = {
        let p = n("ax", Fc, "~X", "X", vec![]);
        let p = n("d_l", Ll, "X", "~X", vec![p]);
        let p = n("reac_rv", Rv, "X", "~X", vec![p]);
        let p = n("reac_f", Fc, "X", "~X", vec![p]);
        let p = n("or2", Fc, "X", XD, vec![p]);
        let p = n("or1", Fc, "X", D, vec![p]);
        let p = n("d_l", Ll, D, "X", vec![p]);
        n("reac_rv", Rv, D, "X", vec![p])
    };
    let py = {
        let p = n("ax", Fc, "~Y", "Y", vec![]);
        let p = n("d_l", Ll, "Y", "~Y", vec![p]);
        let p = n("reac_rv", Rv, "Y", "~Y", vec![p]);
        let p = n("reac_f", Fc, "Y", "~Y", vec![p]);
        let p = n("or2", Fc, "Y", D, vec![p]);
        let p = n("d_l", Ll, D, "Y", vec![p]);
        n("reac_rv", Rv, D, "Y", vec![p])
    };
    let p = n("and_rv", Rv, D, "X & Y", vec![px, py]);
    let p = n("reac_f", Fc, D, "X & Y", vec![p]);
    let p = n("or1", Fc, D, XD, vec![p]);
    let p = n("or1", Fc, D, D, vec![p]);
    let p = n("d_r", Ll, D, D, vec![p]);
    let p = n("cw_r", Ll, "F", D, vec![p]);
    let p = n("reac_rv", Rv, "F", D, vec![p]);
    n("reac_rr", Rr, "F", D, vec![p])
}

/// OLf proof of ⊢ ⇑ ⊥, D.
pub fn olf_example() -> Proof {
    use SeqKind::*;
    let n = |rule, k, l, r, ps| node(Calculus::Olf, rule, k, l, r, ps);
    let px = {
        let p = n("ax", Fc, "~X", "X", vec![]);
        let p = n("d1", Rv, "X", "~X", vec![p]);
        let p = n("reac_f", Fc, "X", "~X", vec![p]);
        let p = n("or2", Fc, "X", XD, vec![p]);
        let p = n("or1", Fc, "X", D, vec![p]);
        n("d1", Rv, D, "X", vec![p])
    };
    let py = {
        let p = n("ax", Fc, "~Y", "Y", vec![]);
        let p = n("d1", Rv, "Y", "~Y", vec![p]);
        let p = n("reac_f", Fc, "Y", "~Y", vec![p]);
        let p = n("or2", Fc, "Y", D, vec![p]);
        n("d1", Rv, D, "Y", vec![p])
    };
    let p = n("and_rv", Rv, D, "X & Y", vec![px, py]);
    let p = n("reac_f", Fc, D, "X & Y", vec![p]);
    let p = n("or1", Fc, D, XD, vec![p]);
    let p = n("or1", Fc, D, D, vec![p]);
    let p = n("cw_rv", Rv, "F", D, vec![p]);
    n("reac_rr", Rr, "F", D, vec![p])
}

/// All formulas over `vars` with up to `max` symbols, grouped by size
/// (index 0 is empty).
pub fn formulas_by_size(max: usize, vars: &[&str]) -> Vec<Vec<Formula>> {
    let mut by: Vec<Vec<Formula>> = vec![Vec::new(); max + 1];
    if max >= 1 {
        by[1] = vars.iter().map(|v| Formula::var(v)).chain([Formula::Top, Formula::Bot]).collect();
    }
    if max >= 2 {
        by[2] = vars.iter().map(|v| Formula::neg_var(v)).collect();
    }
    for n in 3..=max {
        let mut out = Vec::new();
        for l in 1..n - 1 {
            for a in &by[l] {
                for b in &by[n - 1 - l] {
                    out.push(Formula::and(a.clone(), b.clone()));
                    out.push(Formula::or(a.clone(), b.clone()));
                }
            }
        }
        by[n] = out;
    }
    by
}

/// Seeded random formulas with sizes cycling through `sizes`.
pub fn random_formulas(count: usize, sizes: std::ops::RangeInclusive<usize>, vars: usize, seed: u64) -> Vec<Formula> {
    let sizes: Vec<usize> = sizes.collect();
    (0..count)
        .map(|i| gen_random(sizes[i % sizes.len()], vars, seed.wrapping_mul(1_000_003).wrapping_add(i as u64)).unwrap())
        .collect()
}

pub const ORACLE_BUDGET: usize = 200_000;

/// Premise pairs for one cut kind, proved by seeded OLf0 search.
pub struct CutCase {
    pub kind: CutKind,
    pub p1: Proof,
    pub p2: Proof,
    pub conclusion: Sequent,
}

/// `per_kind` matching premise pairs for every cut kind.
///
/// Provable premises are collected over small formulas in two variables;
/// each sampled pair is then re-proved with a fresh seed so that repeated
/// sequents still get varied proofs.
pub fn cut_corpus(per_kind: usize, seed: u64) -> Vec<CutCase> {
    let mut pool: Vec<Formula> = formulas_by_size(3, &["X", "Y"]).concat();
    pool.extend(random_formulas(40, 4..=7, 2, seed));
    pool.sort();
    pool.dedup();
    let kinds = [SeqKind::Rr, SeqKind::Rv, SeqKind::Ll, SeqKind::Fc];
    let mut provable: HashMap<SeqKind, Vec<Sequent>> = HashMap::new();
    for &k in &kinds {
        for a in &pool {
            for b in &pool {
                let s = Sequent::new(k, a.clone(), b.clone());
                if matches!(prove_olf0(&s, 5_000, None), OracleVerdict::Provable(_)) {
                    provable.entry(k).or_default().push(s);
                }
            }
        }
    }
    let mut by_left: HashMap<(SeqKind, Formula), Vec<Sequent>> = HashMap::new();
    let mut by_right: HashMap<(SeqKind, Formula), Vec<Sequent>> = HashMap::new();
    for list in provable.values() {
        for s in list {
            by_left.entry((s.kind, s.left.clone())).or_default().push(s.clone());
            by_right.entry((s.kind, s.right.clone())).or_default().push(s.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for kind in CutKind::ALL {
        let (k1, k2) = kind.premise_kinds();
        let mut pairs = Vec::new();
        for s1 in &provable[&k1] {
            let key = if matches!(kind, CutKind::VCut2 | CutKind::VCut3) { &s1.left } else { &s1.right };
            let index = match kind {
                CutKind::VCut2 | CutKind::VCut3 | CutKind::Cut3 | CutKind::Cut5 => &by_left,
                _ => &by_right,
            };
            for s2 in index.get(&(k2, key.negate())).into_iter().flatten() {
                if let Ok(c) = cut_conclusion(kind, s1, s2) {
                    pairs.push((s1.clone(), s2.clone(), c));
                }
            }
        }
        assert!(!pairs.is_empty(), "no premise pairs for {kind}");
        for i in 0..per_kind {
            let (s1, s2, c) = pairs.choose(&mut rng).unwrap().clone();
            let prove = |s: &Sequent, salt: u64| match prove_olf0(s, 50_000, Some(seed ^ ((i as u64) << 8) ^ salt)) {
                OracleVerdict::Provable(p) => p,
                v => panic!("{s} became {v:?} under reshuffling"),
            };
            out.push(CutCase {
                kind,
                p1: prove(&s1, 1),
                p2: prove(&s2, 2),
                conclusion: c,
            });
        }
    }
    out
}
