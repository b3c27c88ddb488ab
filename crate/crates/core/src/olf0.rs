//! System OLf0: admissible rules on `⊢ ⇑ A, B`, ∨-widening, focused axiom
//! expansion, the admissible cuts, and the translation from OL.
//!
//! All constructions are structural transformations of proof trees. Inputs
//! are assumed to be valid proofs; public entry points check this.

use std::fmt;

use crate::build::{impossible, require_calculus, shape, TransformError, F0};
use crate::formula::Formula;
use crate::ol::restrict_cw;
use crate::proof::{check, Calculus, Proof, Rule, SeqKind, Sequent};

fn two(p: &Proof) -> (&Formula, &Formula) {
    (&p.conclusion.left, &p.conclusion.right)
}

fn prem(p: &Proof, k: usize) -> &Proof {
    &p.premises[k]
}

fn expect_kind(op: &'static str, p: &Proof, kind: SeqKind, expected: &'static str) -> Result<(), TransformError> {
    if p.conclusion.kind == kind {
        Ok(())
    } else {
        Err(shape(op, expected, &p.conclusion))
    }
}

// Admissible rules on ⇑-pair sequents.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AdmRule {
    /// `⊢ ⇑ C, ⊤`.
    TopR2(Formula),
    /// `⊢ ⇑ C, A` and `⊢ ⇑ C, B` give `⊢ ⇑ C, A∧B`.
    AndR2,
    /// `⊢ A ⇑ C` gives `⊢ ⇑ C, A`.
    ReacSwap,
    /// `⊢ ⇑ A, C` gives `⊢ ⇑ C, A`.
    ExchangeRR,
}

pub fn adm_rr(rule: AdmRule, premises: &[Proof]) -> Result<Proof, TransformError> {
    let arity = match rule {
        AdmRule::TopR2(_) => 0,
        AdmRule::AndR2 => 2,
        AdmRule::ReacSwap | AdmRule::ExchangeRR => 1,
    };
    if premises.len() != arity {
        return Err(TransformError::Precondition {
            op: "adm_rr",
            reason: format!("{rule:?} expects {arity} premises, found {}", premises.len()),
        });
    }
    match rule {
        AdmRule::TopR2(c) => Ok(top_r2(&c)),
        AdmRule::AndR2 => and_r2(&premises[0], &premises[1]),
        AdmRule::ReacSwap => reac_swap(&premises[0]),
        AdmRule::ExchangeRR => exchange_rr(&premises[0]),
    }
}

/// `⊢ ⇑ C, ⊤`, by induction on `C`.
pub fn top_r2(c: &Formula) -> Proof {
    match c {
        Formula::Top => F0.top_rr(&Formula::Top),
        Formula::And(a, b) => F0.and_rr(top_r2(a), top_r2(b)),
        _ => F0.reac_rr(F0.top_rv(c)),
    }
}

/// `⊢ ⇑ C, A∧B` from `⊢ ⇑ C, A` and `⊢ ⇑ C, B`.
pub fn and_r2(q1: &Proof, q2: &Proof) -> Result<Proof, TransformError> {
    const OP: &str = "and_r2";
    require_calculus(OP, q1, Calculus::Olf0)?;
    require_calculus(OP, q2, Calculus::Olf0)?;
    expect_kind(OP, q1, SeqKind::Rr, "⊢ ⇑ C, A")?;
    expect_kind(OP, q2, SeqKind::Rr, "⊢ ⇑ C, B")?;
    if q1.conclusion.left != q2.conclusion.left {
        return Err(TransformError::Precondition {
            op: OP,
            reason: "premises have different left formulas".into(),
        });
    }
    let (c, a) = two(q1);
    let b = &q2.conclusion.right;
    match c {
        Formula::Top => Ok(F0.top_rr(&Formula::and(a.clone(), b.clone()))),
        Formula::And(..) => {
            if q1.rule != Rule::AndRr || q2.rule != Rule::AndRr {
                return Err(shape(OP, "an and_rr proof", &q1.conclusion));
            }
            let l = and_r2(prem(q1, 0), prem(q2, 0))?;
            let r = and_r2(prem(q1, 1), prem(q2, 1))?;
            Ok(F0.and_rr(l, r))
        }
        _ => {
            if q1.rule != Rule::ReacRr || q2.rule != Rule::ReacRr {
                return Err(shape(OP, "a reac_rr proof", &q1.conclusion));
            }
            Ok(F0.reac_rr(F0.and_rv(prem(q1, 0).clone(), prem(q2, 0).clone())))
        }
    }
}

/// `⊢ ⇑ C, A` from `⊢ A ⇑ C`, by induction on `C`.
pub fn reac_swap(q: &Proof) -> Result<Proof, TransformError> {
    const OP: &str = "reac_swap";
    require_calculus(OP, q, Calculus::Olf0)?;
    expect_kind(OP, q, SeqKind::Rv, "⊢ A ⇑ C")?;
    let (a, c) = two(q);
    match c {
        Formula::Top => Ok(F0.top_rr(a)),
        Formula::And(..) => {
            if q.rule != Rule::AndRv {
                return Err(shape(OP, "an and_rv proof", &q.conclusion));
            }
            Ok(F0.and_rr(reac_swap(prem(q, 0))?, reac_swap(prem(q, 1))?))
        }
        _ => {
            if q.rule != Rule::ReacRv {
                return Err(shape(OP, "a reac_rv proof", &q.conclusion));
            }
            Ok(F0.reac_rr(F0.reac_rv(swap_ll(prem(q, 0))?)))
        }
    }
}

/// `⊢ ⇑ C, A` from `⊢ ⇑ A, C`, by induction on the proof.
pub fn exchange_rr(q: &Proof) -> Result<Proof, TransformError> {
    const OP: &str = "exchange_rr";
    require_calculus(OP, q, Calculus::Olf0)?;
    expect_kind(OP, q, SeqKind::Rr, "⊢ ⇑ A, C")?;
    match q.rule {
        Rule::AndRr => and_r2(&exchange_rr(prem(q, 0))?, &exchange_rr(prem(q, 1))?),
        Rule::TopRr => Ok(top_r2(&q.conclusion.right)),
        Rule::ReacRr => reac_swap(prem(q, 0)),
        _ => Err(shape(OP, "an OLf0 proof of ⊢ ⇑ A, C", &q.conclusion)),
    }
}

/// `⊢ B, A ⇑` from `⊢ A, B ⇑` with a proof of the same size.
pub fn swap_ll(p: &Proof) -> Result<Proof, TransformError> {
    const OP: &str = "swap_ll";
    require_calculus(OP, p, Calculus::Olf0)?;
    expect_kind(OP, p, SeqKind::Ll, "⊢ A, B ⇑")?;
    let q = prem(p, 0).clone();
    Ok(match p.rule {
        Rule::CwL => F0.cw_r(q, &p.conclusion.right),
        Rule::CwR => F0.cw_l(q, &p.conclusion.left),
        Rule::DL => F0.d_r(q),
        Rule::DR => F0.d_l(q),
        _ => return Err(shape(OP, "an OLf0 proof of ⊢ A, B ⇑", &p.conclusion)),
    })
}

// ∨-widening.

/// Where the new disjunct goes: `Left` widens `A` to `A∨B`, `Right` to `B∨A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Which occurrence of `A` is widened.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// `⊢ C ⇑ A` with `A` asynchronous, giving `⊢ A∨B ⇑ C`.
    RvRight,
    /// `⊢ A ⇑ C` with `A` synchronous, giving `⊢ A∨B ⇑ C`.
    RvLeft,
    /// `⊢ A, C ⇑` with `A` synchronous, giving `⊢ A∨B, C ⇑`.
    Ll,
    /// `⊢ A ⇓ C` with `A` synchronous, giving `⊢ A∨B ⇓ C`.
    Fc,
}

struct Widen<'a> {
    side: Side,
    other: &'a Formula,
}

impl Widen<'_> {
    fn wide(&self, a: &Formula) -> Formula {
        match self.side {
            Side::Left => Formula::or(a.clone(), self.other.clone()),
            Side::Right => Formula::or(self.other.clone(), a.clone()),
        }
    }

    /// `⊢ C ⇓ A` to `⊢ C ⇓ W`.
    fn or(&self, p: Proof) -> Proof {
        match self.side {
            Side::Left => F0.or1(p, self.other),
            Side::Right => F0.or2(self.other, p),
        }
    }

    fn rv_right(&self, p: &Proof) -> Proof {
        F0.reac_rv(F0.d_l(self.or(F0.reac_f(p.clone()))))
    }

    fn rv_left(&self, p: &Proof) -> Result<Proof, TransformError> {
        const OP: &str = "vee_widen";
        let w = self.wide(&p.conclusion.left);
        Ok(match p.rule {
            Rule::AndRv => F0.and_rv(self.rv_left(prem(p, 0))?, self.rv_left(prem(p, 1))?),
            Rule::TopRv => F0.top_rv(&w),
            Rule::ReacRv => F0.reac_rv(self.ll(prem(p, 0))?),
            _ => return Err(shape(OP, "an OLf0 proof of ⊢ A ⇑ C", &p.conclusion)),
        })
    }

    fn ll(&self, p: &Proof) -> Result<Proof, TransformError> {
        const OP: &str = "vee_widen";
        let w = self.wide(&p.conclusion.left);
        Ok(match p.rule {
            Rule::CwL => {
                let diag = diagonal_focus(prem(p, 0))?;
                let widened = self.or(self.fc(&diag)?);
                F0.cw_l(F0.d_r(widened), &p.conclusion.right)
            }
            Rule::CwR => F0.cw_r(prem(p, 0).clone(), &w),
            Rule::DL => F0.d_l(self.or(prem(p, 0).clone())),
            Rule::DR => F0.d_r(self.fc(prem(p, 0))?),
            _ => return Err(shape(OP, "an OLf0 proof of ⊢ A, C ⇑", &p.conclusion)),
        })
    }

    fn fc(&self, p: &Proof) -> Result<Proof, TransformError> {
        const OP: &str = "vee_widen";
        Ok(match p.rule {
            Rule::Or1 | Rule::Or2 => {
                let q = self.fc(prem(p, 0))?;
                let Formula::Or(l, r) = &p.conclusion.right else {
                    return Err(shape(OP, "⊢ A ⇓ C∨D", &p.conclusion));
                };
                if p.rule == Rule::Or1 {
                    F0.or1(q, r)
                } else {
                    F0.or2(l, q)
                }
            }
            Rule::ReacF => F0.reac_f(self.rv_left(prem(p, 0))?),
            _ => return Err(impossible(OP, &p.conclusion)),
        })
    }
}

/// The proof of `⊢ A ⇓ A` found above a proof of `⊢ A, A ⇑`.
fn diagonal_focus(p: &Proof) -> Result<Proof, TransformError> {
    let mut q = p;
    while matches!(q.rule, Rule::CwL | Rule::CwR) {
        q = prem(q, 0);
    }
    match q.rule {
        Rule::DL | Rule::DR => Ok(prem(q, 0).clone()),
        _ => Err(shape("diagonal_focus", "an OLf0 proof of ⊢ A, A ⇑", &p.conclusion)),
    }
}

/// Replaces `A` by `A∨other` (or `other∨A`) at the given position.
pub fn vee_widen(side: Side, position: Position, p: &Proof, other: &Formula) -> Result<Proof, TransformError> {
    const OP: &str = "vee_widen";
    require_calculus(OP, p, Calculus::Olf0)?;
    let w = Widen { side, other };
    let polarity_error = |reason: &str| TransformError::Precondition {
        op: OP,
        reason: reason.to_string(),
    };
    match position {
        Position::RvRight => {
            expect_kind(OP, p, SeqKind::Rv, "⊢ C ⇑ A")?;
            if !p.conclusion.right.is_async() {
                return Err(polarity_error("the widened formula must be asynchronous"));
            }
            Ok(w.rv_right(p))
        }
        Position::RvLeft | Position::Ll | Position::Fc => {
            let (kind, expected) = match position {
                Position::RvLeft => (SeqKind::Rv, "⊢ A ⇑ C"),
                Position::Ll => (SeqKind::Ll, "⊢ A, C ⇑"),
                _ => (SeqKind::Fc, "⊢ A ⇓ C"),
            };
            expect_kind(OP, p, kind, expected)?;
            if !p.conclusion.left.is_sync() {
                return Err(polarity_error("the widened formula must be synchronous"));
            }
            match position {
                Position::RvLeft => w.rv_left(p),
                Position::Ll => w.ll(p),
                _ => w.fc(p),
            }
        }
    }
}

/// `⊢ A ⇑ ¬A` for `A` synchronous or a negated variable.
pub fn ax_expand_focused(a: &Formula) -> Result<Proof, TransformError> {
    if !a.is_sync_or_neg_var() {
        return Err(TransformError::Precondition {
            op: "ax_expand_focused",
            reason: format!("{a} is asynchronous and not a negated variable"),
        });
    }
    Ok(axf(a))
}

fn axf(a: &Formula) -> Proof {
    match a {
        Formula::NegVar(x) => F0.reac_rv(F0.d_r(F0.ax(x))),
        Formula::Var(x) => F0.reac_rv(F0.d_l(F0.ax(x))),
        Formula::Bot => F0.top_rv(a),
        Formula::Or(a1, a2) => {
            let half = |ai: &Formula, side: Side, other: &Formula| {
                let w = Widen { side, other };
                if ai.is_async() {
                    w.rv_right(&axf(&ai.negate()))
                } else {
                    w.rv_left(&axf(ai)).expect("widening a focused axiom expansion")
                }
            };
            F0.and_rv(half(a1, Side::Left, a2), half(a2, Side::Right, a1))
        }
        Formula::Top | Formula::And(..) => unreachable!("checked by ax_expand_focused"),
    }
}

// Cuts.

/// The ten admissible cut rules of OLf0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    VCut1,
    VCut2,
    VCut3,
    Cut1,
    Cut2,
    Cut3,
    Cut4,
    Cut5,
    Cut0,
    Cut0Prime,
}

impl CutKind {
    pub const ALL: [CutKind; 10] = [
        CutKind::VCut1,
        CutKind::VCut2,
        CutKind::VCut3,
        CutKind::Cut1,
        CutKind::Cut2,
        CutKind::Cut3,
        CutKind::Cut4,
        CutKind::Cut5,
        CutKind::Cut0,
        CutKind::Cut0Prime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CutKind::VCut1 => "vcut1",
            CutKind::VCut2 => "vcut2",
            CutKind::VCut3 => "vcut3",
            CutKind::Cut1 => "cut1",
            CutKind::Cut2 => "cut2",
            CutKind::Cut3 => "cut3",
            CutKind::Cut4 => "cut4",
            CutKind::Cut5 => "cut5",
            CutKind::Cut0 => "cut0",
            CutKind::Cut0Prime => "cut0'",
        }
    }

    /// Sequent kinds of the two premises.
    pub fn premise_kinds(self) -> (SeqKind, SeqKind) {
        use SeqKind::*;
        match self {
            CutKind::VCut1 => (Ll, Ll),
            CutKind::VCut2 => (Fc, Fc),
            CutKind::VCut3 => (Rv, Fc),
            CutKind::Cut1 | CutKind::Cut5 => (Rv, Rv),
            CutKind::Cut2 => (Rv, Ll),
            CutKind::Cut3 | CutKind::Cut4 => (Rv, Fc),
            CutKind::Cut0 => (Rr, Rr),
            CutKind::Cut0Prime => (Rr, Rv),
        }
    }
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Checks the premise schema of a cut and returns its conclusion.
pub fn cut_conclusion(kind: CutKind, s1: &Sequent, s2: &Sequent) -> Result<Sequent, TransformError> {
    let bad = |reason: &str| TransformError::Precondition {
        op: "admissible_cut",
        reason: format!("{kind}: {reason} (premises {s1} and {s2})"),
    };
    let (k1, k2) = kind.premise_kinds();
    if s1.kind != k1 || s2.kind != k2 {
        return Err(bad("premise kinds do not match"));
    }
    let (a, b) = (&s1.left, &s1.right);
    let (c, d) = (&s2.left, &s2.right);
    match kind {
        CutKind::VCut1 => {
            if !b.is_var() || *d != b.negate() {
                return Err(bad("expected ⊢ A, X ⇑ and ⊢ C, ¬X ⇑"));
            }
            Ok(Sequent::ll(a.clone(), c.clone()))
        }
        CutKind::VCut2 | CutKind::VCut3 => {
            if !a.is_var() || *c != a.negate() {
                return Err(bad("expected a variable cut against its negation"));
            }
            if !d.is_sync() {
                return Err(bad("C must be synchronous"));
            }
            Ok(Sequent::new(s1.kind, d.clone(), b.clone()))
        }
        CutKind::Cut1 | CutKind::Cut2 | CutKind::Cut3 | CutKind::Cut4 | CutKind::Cut5 => {
            let (dual, other) = match kind {
                CutKind::Cut1 | CutKind::Cut2 | CutKind::Cut4 => (d, c),
                _ => (c, d),
            };
            if *dual != b.negate() {
                return Err(bad("cut formulas are not dual"));
            }
            if matches!(kind, CutKind::Cut1 | CutKind::Cut4) && !(b.is_async() || b.is_var()) {
                return Err(bad("B must be asynchronous or a variable"));
            }
            if kind == CutKind::Cut3 && !b.is_async() {
                return Err(bad("B must be asynchronous"));
            }
            let out = match kind {
                CutKind::Cut3 => SeqKind::Fc,
                CutKind::Cut5 => SeqKind::Rv,
                _ => SeqKind::Ll,
            };
            Ok(Sequent::new(out, a.clone(), other.clone()))
        }
        CutKind::Cut0 => {
            if *d != b.negate() {
                return Err(bad("cut formulas are not dual"));
            }
            Ok(Sequent::rr(a.clone(), c.clone()))
        }
        CutKind::Cut0Prime => {
            if *d != b.negate() {
                return Err(bad("cut formulas are not dual"));
            }
            Ok(Sequent::rv(c.clone(), a.clone()))
        }
    }
}

/// Counters from one cut elimination.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CutTrace {
    /// Recursive calls whose induction measure was checked.
    pub measured_calls: usize,
}

/// Eliminates a cut between two OLf0 proofs.
pub fn admissible_cut(kind: CutKind, p1: &Proof, p2: &Proof) -> Result<Proof, TransformError> {
    admissible_cut_traced(kind, p1, p2).map(|(p, _)| p)
}

/// As [`admissible_cut`], also reporting how many induction steps were
/// checked against their measure (always zero in release builds).
pub fn admissible_cut_traced(kind: CutKind, p1: &Proof, p2: &Proof) -> Result<(Proof, CutTrace), TransformError> {
    require_calculus("admissible_cut", p1, Calculus::Olf0)?;
    require_calculus("admissible_cut", p2, Calculus::Olf0)?;
    check(p1)?;
    check(p2)?;
    let expected = cut_conclusion(kind, &p1.conclusion, &p2.conclusion)?;
    let mut cx = Cuts::default();
    let out = match kind {
        CutKind::VCut1 => cx.vcut1(p1, p2)?,
        CutKind::VCut2 => cx.vcut2(p1, p2, None)?,
        CutKind::VCut3 => cx.vcut3(p1, p2, None)?,
        CutKind::Cut1 => cx.cut1(p1, p2, None)?,
        CutKind::Cut2 => cx.cut2(p1, p2, None)?,
        CutKind::Cut3 => cx.cut3(p1, p2, None)?,
        CutKind::Cut4 => cx.cut4(p1, p2, None)?,
        CutKind::Cut5 => cx.cut5(p1, p2, None)?,
        CutKind::Cut0 => cx.cut0(p1, p2, None)?,
        CutKind::Cut0Prime => cx.cut0p(p1, p2, None)?,
    };
    debug_assert_eq!(out.conclusion, expected);
    Ok((
        out,
        CutTrace {
            measured_calls: cx.measured,
        },
    ))
}

/// Size of a cut formula with literals counted as one symbol, so that a
/// formula and its negation have the same measure.
fn cut_formula_size(f: &Formula) -> usize {
    match f {
        Formula::And(a, b) | Formula::Or(a, b) => 1 + cut_formula_size(a) + cut_formula_size(b),
        _ => 1,
    }
}

type Measure = (usize, usize);

#[derive(Default)]
struct Cuts {
    measured: usize,
}

impl Cuts {
    /// Computes the measure of a recursive call and, in debug builds, checks
    /// that it is below the measure of the calling step.
    fn enter(
        &mut self,
        op: &'static str,
        parent: Option<Measure>,
        measure: impl FnOnce() -> Measure,
    ) -> Result<Option<Measure>, TransformError> {
        if !cfg!(debug_assertions) {
            return Ok(None);
        }
        let m = measure();
        if let Some(pm) = parent {
            self.measured += 1;
            if m >= pm {
                return Err(TransformError::MeasureIncrease {
                    op,
                    parent: format!("{pm:?}"),
                    child: format!("{m:?}"),
                });
            }
        }
        Ok(Some(m))
    }

    /// Cut-formula measure: size of the cut formula, then total premise size.
    fn pair(b: &Formula, p1: &Proof, p2: &Proof) -> Measure {
        (cut_formula_size(b), p1.size() + p2.size())
    }

    /// `⊢ X ⇓ A`, `⊢ ¬X ⇓ C` to `⊢ C ⇓ A`; induction on the left premise.
    fn vcut2(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("vcut2", parent, || (p1.size(), 0))?;
        Ok(match p1.rule {
            Rule::Or1 | Rule::Or2 => {
                let q = self.vcut2(prem(p1, 0), p2, m)?;
                let Formula::Or(l, r) = &p1.conclusion.right else {
                    return Err(shape("vcut2", "⊢ X ⇓ A∨B", &p1.conclusion));
                };
                if p1.rule == Rule::Or1 {
                    F0.or1(q, r)
                } else {
                    F0.or2(l, q)
                }
            }
            Rule::ReacF => F0.reac_f(self.vcut3(prem(p1, 0), p2, m)?),
            _ => return Err(impossible("vcut2", &p1.conclusion)),
        })
    }

    /// `⊢ X ⇑ A`, `⊢ ¬X ⇓ C` to `⊢ C ⇑ A`; induction on the left premise.
    fn vcut3(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("vcut3", parent, || (p1.size(), 0))?;
        let c = &p2.conclusion.right;
        Ok(match p1.rule {
            Rule::AndRv => F0.and_rv(self.vcut3(prem(p1, 0), p2, m)?, self.vcut3(prem(p1, 1), p2, m)?),
            Rule::TopRv => F0.top_rv(c),
            Rule::ReacRv => {
                let q = prem(p1, 0);
                match q.rule {
                    Rule::CwR => F0.reac_rv(F0.cw_r(prem(q, 0).clone(), c)),
                    // ⊢ X, ¬X ⇑ from the axiom: the result is ⊢ C ⇑ ¬X.
                    Rule::DL => F0.reac_rv(F0.d_l(p2.clone())),
                    Rule::DR => F0.reac_rv(F0.d_r(self.vcut2(prem(q, 0), p2, m)?)),
                    _ => return Err(impossible("vcut3", &q.conclusion)),
                }
            }
            _ => return Err(impossible("vcut3", &p1.conclusion)),
        })
    }

    /// `⊢ A, X ⇑`, `⊢ C, ¬X ⇑` to `⊢ A, C ⇑`.
    fn vcut1(&mut self, p1: &Proof, p2: &Proof) -> Result<Proof, TransformError> {
        let (a, c) = (&p1.conclusion.left, &p2.conclusion.left);
        Ok(match p1.rule {
            Rule::CwL => F0.cw_l(prem(p1, 0).clone(), c),
            Rule::DL => match p2.rule {
                Rule::DL => F0.d_l(self.vcut2(prem(p1, 0), prem(p2, 0), None)?),
                Rule::CwL => F0.cw_r(prem(p2, 0).clone(), a),
                _ => return Err(impossible("vcut1", &p2.conclusion)),
            },
            // ⊢ ¬X, X ⇑ from the axiom.
            Rule::DR => swap_ll(p2)?,
            _ => return Err(impossible("vcut1", &p1.conclusion)),
        })
    }

    /// `⊢ A ⇑ B`, `⊢ C ⇑ ¬B` to `⊢ A, C ⇑`.
    fn cut1(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("cut1", parent, || Self::pair(&p1.conclusion.right, p1, p2))?;
        match p2.rule {
            Rule::ReacRv => self.cut2(p1, prem(p2, 0), m),
            _ => Err(impossible("cut1", &p2.conclusion)),
        }
    }

    /// `⊢ A ⇑ B`, `⊢ C, ¬B ⇑` to `⊢ A, C ⇑`.
    fn cut2(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("cut2", parent, || Self::pair(&p1.conclusion.right, p1, p2))?;
        let (a, b) = two(p1);
        let c = &p2.conclusion.left;
        Ok(match p2.rule {
            Rule::CwL => F0.cw_r(prem(p2, 0).clone(), a),
            Rule::CwR => {
                // Contraction on ¬B: cut against ⊢ ¬B ⇓ ¬B, then once more
                // through the disjunction to reach a smaller cut formula.
                let diag = diagonal_focus(prem(p2, 0))?;
                let t = self.cut3(p1, &diag, m)?;
                let aa = self.cut4_or_case(p1, &t, m)?;
                F0.cw_l(aa, c)
            }
            Rule::DL => {
                if b.is_async() {
                    F0.d_r(self.cut3(p1, prem(p2, 0), m)?)
                } else if b.is_var() {
                    if p1.rule != Rule::ReacRv {
                        return Err(impossible("cut2", &p1.conclusion));
                    }
                    self.vcut1(prem(p1, 0), p2)?
                } else {
                    return Err(impossible("cut2", &p2.conclusion));
                }
            }
            Rule::DR => self.cut4(p1, prem(p2, 0), m)?,
            _ => return Err(impossible("cut2", &p2.conclusion)),
        })
    }

    /// `⊢ A ⇑ B`, `⊢ ¬B ⇓ C` to `⊢ A ⇓ C`, for `B` asynchronous.
    fn cut3(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("cut3", parent, || Self::pair(&p1.conclusion.right, p1, p2))?;
        Ok(match p2.rule {
            Rule::Or1 | Rule::Or2 => {
                let q = self.cut3(p1, prem(p2, 0), m)?;
                let Formula::Or(l, r) = &p2.conclusion.right else {
                    return Err(shape("cut3", "⊢ ¬B ⇓ C∨D", &p2.conclusion));
                };
                if p2.rule == Rule::Or1 {
                    F0.or1(q, r)
                } else {
                    F0.or2(l, q)
                }
            }
            Rule::ReacF => F0.reac_f(self.cut5(p1, prem(p2, 0), m)?),
            _ => return Err(impossible("cut3", &p2.conclusion)),
        })
    }

    /// `⊢ A ⇑ B`, `⊢ C ⇓ ¬B` to `⊢ A, C ⇑`, for `B` asynchronous or a
    /// variable.
    fn cut4(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("cut4", parent, || Self::pair(&p1.conclusion.right, p1, p2))?;
        match p2.rule {
            Rule::Ax => {
                if p1.rule != Rule::ReacRv {
                    return Err(impossible("cut4", &p1.conclusion));
                }
                Ok(prem(p1, 0).clone())
            }
            Rule::Or1 | Rule::Or2 => self.cut4_or_case(p1, p2, m),
            // B is a variable: ⊢ C ⇑ ¬X against ⊢ A ⇑ X.
            Rule::ReacF => swap_ll(&self.cut1(prem(p2, 0), p1, m)?),
            _ => Err(impossible("cut4", &p2.conclusion)),
        }
    }

    /// The disjunction case of `cut4`: `⊢ A ⇑ B1∧B2` against
    /// `⊢ C ⇓ ¬B1∨¬B2`, cutting on the chosen `Bi`.
    fn cut4_or_case(&mut self, p1: &Proof, p2: &Proof, m: Option<Measure>) -> Result<Proof, TransformError> {
        let i = match p2.rule {
            Rule::Or1 => 0,
            Rule::Or2 => 1,
            _ => return Err(shape("cut4", "⊢ C ⇓ ¬B1∨¬B2", &p2.conclusion)),
        };
        if p1.rule != Rule::AndRv {
            return Err(impossible("cut4", &p1.conclusion));
        }
        let p1i = prem(p1, i);
        let q = prem(p2, 0);
        if p1i.conclusion.right.is_sync() {
            if q.rule != Rule::ReacF {
                return Err(impossible("cut4", &q.conclusion));
            }
            swap_ll(&self.cut1(prem(q, 0), p1i, m)?)
        } else {
            self.cut4(p1i, q, m)
        }
    }

    /// `⊢ A ⇑ B`, `⊢ ¬B ⇑ C` to `⊢ A ⇑ C`.
    fn cut5(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("cut5", parent, || Self::pair(&p1.conclusion.right, p1, p2))?;
        Ok(match p2.rule {
            Rule::AndRv => F0.and_rv(self.cut5(p1, prem(p2, 0), m)?, self.cut5(p1, prem(p2, 1), m)?),
            Rule::TopRv => F0.top_rv(&p1.conclusion.left),
            Rule::ReacRv => F0.reac_rv(self.cut2(p1, &swap_ll(prem(p2, 0))?, m)?),
            _ => return Err(impossible("cut5", &p2.conclusion)),
        })
    }

    /// `⊢ ⇑ A, B`, `⊢ C ⇑ ¬B` to `⊢ C ⇑ A`; induction on the left premise.
    fn cut0p(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("cut0'", parent, || (p1.size(), 0))?;
        let c = &p2.conclusion.left;
        Ok(match p1.rule {
            Rule::AndRr => F0.and_rv(self.cut0p(prem(p1, 0), p2, m)?, self.cut0p(prem(p1, 1), p2, m)?),
            Rule::TopRr => F0.top_rv(c),
            Rule::ReacRr => {
                let q = prem(p1, 0);
                let b = &q.conclusion.right;
                if b.is_async() || b.is_var() {
                    F0.reac_rv(swap_ll(&self.cut1(q, p2, None)?)?)
                } else {
                    F0.reac_rv(self.cut1(p2, q, None)?)
                }
            }
            _ => return Err(impossible("cut0'", &p1.conclusion)),
        })
    }

    /// `⊢ ⇑ A, B`, `⊢ ⇑ C, ¬B` to `⊢ ⇑ A, C`; induction on the left premise.
    fn cut0(&mut self, p1: &Proof, p2: &Proof, parent: Option<Measure>) -> Result<Proof, TransformError> {
        let m = self.enter("cut0", parent, || (p1.size(), 0))?;
        Ok(match p1.rule {
            Rule::AndRr => F0.and_rr(self.cut0(prem(p1, 0), p2, m)?, self.cut0(prem(p1, 1), p2, m)?),
            Rule::TopRr => F0.top_rr(&p2.conclusion.left),
            Rule::ReacRr => F0.reac_rr(self.cut0p(p2, prem(p1, 0), None)?),
            _ => return Err(impossible("cut0", &p1.conclusion)),
        })
    }
}

// Translation from OL.

/// OLf0 proof of `⊢ ⇑ A, B` from an OL proof of `⊢ A, B`.
pub fn translate_ol_to_olf0(p: &Proof) -> Result<Proof, TransformError> {
    require_calculus("translate_ol_to_olf0", p, Calculus::Ol)?;
    check(p)?;
    translate(&restrict_cw(p)?)
}

fn translate(p: &Proof) -> Result<Proof, TransformError> {
    const OP: &str = "translate_ol_to_olf0";
    let (a, c) = two(p);
    Ok(match p.rule {
        Rule::Ax => {
            if a.is_sync_or_neg_var() {
                F0.reac_rr(axf(a))
            } else {
                reac_swap(&axf(c))?
            }
        }
        Rule::Ex => exchange_rr(&translate(prem(p, 0))?)?,
        Rule::Cw => {
            let q = translate(prem(p, 0))?;
            if q.rule != Rule::ReacRr || prem(&q, 0).rule != Rule::ReacRv {
                return Err(shape(OP, "a proof of ⊢ ⇑ D, D for a disjunction D", &q.conclusion));
            }
            let ll = prem(prem(&q, 0), 0).clone();
            F0.reac_rr(F0.reac_rv(F0.cw_l(ll, c)))
        }
        Rule::Or1 | Rule::Or2 => {
            let Formula::Or(l, r) = a else {
                return Err(shape(OP, "⊢ A∨B, C", &p.conclusion));
            };
            let (chosen, other, side) = if p.rule == Rule::Or1 {
                (l.as_ref(), r.as_ref(), Side::Left)
            } else {
                (r.as_ref(), l.as_ref(), Side::Right)
            };
            let swapped = exchange_rr(&translate(prem(p, 0))?)?;
            let w = Widen { side, other };
            let widened = if chosen.is_sync() {
                w.rv_left(&axf(chosen))?
            } else {
                w.rv_right(&axf(&chosen.negate()))
            };
            F0.reac_rr(Cuts::default().cut0p(&swapped, &widened, None)?)
        }
        Rule::And => F0.and_rr(translate(prem(p, 0))?, translate(prem(p, 1))?),
        Rule::Top => F0.top_rr(c),
        _ => return Err(shape(OP, "an OL rule", &p.conclusion)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::proof::check_concludes;

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    fn ax_rr() -> Proof {
        // ⊢ ⇑ ¬X, X
        F0.reac_rr(axf(&f("~X")))
    }

    #[test]
    fn top_r2_on_variable() {
        check_concludes(&top_r2(&f("X")), &Sequent::rr(f("X"), Formula::Top)).unwrap();
        check_concludes(&top_r2(&f("T & (X | Y)")), &Sequent::rr(f("T & (X | Y)"), Formula::Top)).unwrap();
    }

    #[test]
    fn exchange_of_axiom() {
        let p = ax_rr();
        check_concludes(&p, &Sequent::rr(f("~X"), f("X"))).unwrap();
        let q = adm_rr(AdmRule::ExchangeRR, &[p]).unwrap();
        check_concludes(&q, &Sequent::rr(f("X"), f("~X"))).unwrap();
    }

    #[test]
    fn and_r2_on_axioms() {
        let p = adm_rr(AdmRule::AndR2, &[ax_rr(), ax_rr()]).unwrap();
        check_concludes(&p, &Sequent::rr(f("~X"), f("X & X"))).unwrap();
    }

    #[test]
    fn swap_mirrors_decide() {
        let x = crate::formula::VarId::new("X").unwrap();
        let p = F0.d_l(F0.ax(&x));
        assert_eq!(p.conclusion, Sequent::ll(f("X"), f("~X")));
        let q = swap_ll(&p).unwrap();
        assert_eq!(q.rule, Rule::DR);
        assert_eq!(q.size(), p.size());
        check_concludes(&q, &Sequent::ll(f("~X"), f("X"))).unwrap();
    }

    #[test]
    fn focused_axiom_examples() {
        for s in ["X", "F", "X | ~X", "~X", "(X & Y) | (~Y | F)", "((X | T) & ~Y) | X"] {
            let a = f(s);
            let p = ax_expand_focused(&a).unwrap();
            check_concludes(&p, &Sequent::rv(a.clone(), a.negate())).unwrap();
        }
        assert_eq!(ax_expand_focused(&Formula::Bot).unwrap().size(), 1);
        assert!(ax_expand_focused(&f("X & Y")).is_err());
    }

    #[test]
    fn widen_examples() {
        // ⊢ X, C ⇑ to ⊢ X∨Y, C ⇑ with C = ¬X.
        let x = crate::formula::VarId::new("X").unwrap();
        let p = F0.d_l(F0.ax(&x));
        let q = vee_widen(Side::Left, Position::Ll, &p, &f("Y")).unwrap();
        check_concludes(&q, &Sequent::ll(f("X | Y"), f("~X"))).unwrap();

        // ⊢ C ⇑ ⊤ to ⊢ ⊤∨B ⇑ C.
        let p = F0.top_rv(&f("X"));
        let q = vee_widen(Side::Left, Position::RvRight, &p, &f("Z")).unwrap();
        check_concludes(&q, &Sequent::rv(f("T | Z"), f("X"))).unwrap();

        // ⊢ X ⇓ C to ⊢ B∨X ⇓ C.
        let p = F0.reac_f(axf(&f("X")));
        let q = vee_widen(Side::Right, Position::Fc, &p, &f("Y")).unwrap();
        check_concludes(&q, &Sequent::fc(f("Y | X"), f("~X"))).unwrap();

        assert!(vee_widen(Side::Left, Position::RvLeft, &axf(&f("~X")), &f("Y")).is_err());
    }

    #[test]
    fn cut0_with_top() {
        // ⊢ ⇑ ⊤, ¬X against ⊢ ⇑ ¬X, X (the exchanged form of ⊢ ⇑ X, ¬X).
        let p1 = F0.top_rr(&f("~X"));
        let p2 = ax_rr();
        let out = admissible_cut(CutKind::Cut0, &p1, &p2).unwrap();
        check_concludes(&out, &Sequent::rr(Formula::Top, f("~X"))).unwrap();
    }

    #[test]
    fn vcut1_on_decided_axioms() {
        // ⊢ ¬X, X ⇑ against ⊢ X, ¬X ⇑ gives ⊢ ¬X, X ⇑.
        let x = crate::formula::VarId::new("X").unwrap();
        let p1 = F0.d_r(F0.ax(&x));
        let p2 = F0.d_l(F0.ax(&x));
        let out = admissible_cut(CutKind::VCut1, &p1, &p2).unwrap();
        check_concludes(&out, &Sequent::ll(f("~X"), f("X"))).unwrap();
    }

    #[test]
    fn cut5_with_top_cut_formula() {
        // ⊢ X ⇑ ⊤ against ⊢ ⊥ ⇑ ¬X ∨ X.
        let p1 = F0.top_rv(&f("X"));
        let d = f("X | ~X");
        // ⊢ X∨¬X ⇓ ¬X, then ⊢ X∨¬X ⇓ X∨¬X.
        let half = vee_widen(Side::Left, Position::Fc, &F0.reac_f(axf(&f("X"))), &f("~X")).unwrap();
        let dd = F0.or2(&f("X"), half);
        assert_eq!(dd.conclusion, Sequent::fc(d.clone(), d.clone()));
        let p2 = F0.reac_rv(F0.cw_r(F0.d_r(dd), &Formula::Bot));
        check_concludes(&p2, &Sequent::rv(Formula::Bot, f("X | ~X"))).unwrap();
        let out = admissible_cut(CutKind::Cut5, &p1, &p2).unwrap();
        check_concludes(&out, &Sequent::rv(f("X"), f("X | ~X"))).unwrap();
    }

    #[test]
    fn schema_mismatch_rejected() {
        let p = ax_rr();
        assert!(matches!(
            admissible_cut(CutKind::Cut5, &p, &p),
            Err(TransformError::Precondition { .. })
        ));
    }

    #[test]
    fn translate_axiom_and_top() {
        let p = crate::ol::ax_expand(&f("X"));
        let t = translate_ol_to_olf0(&p).unwrap();
        check_concludes(&t, &Sequent::rr(f("~X"), f("X"))).unwrap();
        let p = crate::build::OL.top_ol(&f("X | Y"));
        let t = translate_ol_to_olf0(&p).unwrap();
        assert_eq!(t.size(), 1);
        assert_eq!(t.rule, Rule::TopRr);
    }
}
