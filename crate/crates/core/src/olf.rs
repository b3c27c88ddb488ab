//! System OLf: translation from OLf0 and cut via OL.

use crate::build::{impossible, require_calculus, shape, TransformError, F};
use crate::formula::Formula;
use crate::ol::{erase_olf, restrict_cw};
use crate::olf0::{admissible_cut, exchange_rr, translate_ol_to_olf0, CutKind};
use crate::proof::{check, Calculus, Proof, Rule, SeqKind};

/// Outcome of translating one OLf0 subproof into OLf.
///
/// The `Diag*` variants carry a proof of `⊢ D ⇓ D` for a disjunction `D`
/// occurring in the original conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TranslationResult {
    /// `⊢ ⇑ A, B` kept as is.
    Rr(Proof),
    /// `⊢ A ⇑ B` or `⊢ A ⇓ B` kept as is.
    Same(Proof),
    /// `⊢ A ⇓ A` for the left formula of `⊢ A ⇑ B` or `⊢ A ⇓ B`.
    Diag(Proof),
    /// `⊢ A, B ⇑` as `⊢ A ⇓ B`, with `B` synchronous.
    FocusRight(Proof),
    /// `⊢ A, B ⇑` as `⊢ B ⇓ A`, with `A` synchronous.
    FocusLeft(Proof),
    /// `⊢ A, B ⇑` as `⊢ A ⇓ A`.
    DiagLeft(Proof),
    /// `⊢ A, B ⇑` as `⊢ B ⇓ B`.
    DiagRight(Proof),
}

impl TranslationResult {
    pub fn proof(&self) -> &Proof {
        match self {
            TranslationResult::Rr(p)
            | TranslationResult::Same(p)
            | TranslationResult::Diag(p)
            | TranslationResult::FocusRight(p)
            | TranslationResult::FocusLeft(p)
            | TranslationResult::DiagLeft(p)
            | TranslationResult::DiagRight(p) => p,
        }
    }

    pub fn into_proof(self) -> Proof {
        match self {
            TranslationResult::Rr(p)
            | TranslationResult::Same(p)
            | TranslationResult::Diag(p)
            | TranslationResult::FocusRight(p)
            | TranslationResult::FocusLeft(p)
            | TranslationResult::DiagLeft(p)
            | TranslationResult::DiagRight(p) => p,
        }
    }
}

/// Translates any OLf0 proof into OLf.
pub fn translate_olf0_to_olf(p: &Proof) -> Result<TranslationResult, TransformError> {
    require_calculus("translate_olf0_to_olf", p, Calculus::Olf0)?;
    check(p)?;
    tr(p)
}

/// OLf proof of `⊢ ⇑ A, B` from an OLf0 proof of the same sequent.
pub fn translate_rr_to_olf(p: &Proof) -> Result<Proof, TransformError> {
    if p.conclusion.kind != SeqKind::Rr {
        return Err(shape("translate_rr_to_olf", "⊢ ⇑ A, B", &p.conclusion));
    }
    match translate_olf0_to_olf(p)? {
        TranslationResult::Rr(q) => Ok(q),
        _ => unreachable!("⇑-pair sequents translate to ⇑-pair sequents"),
    }
}

fn tr(p: &Proof) -> Result<TranslationResult, TransformError> {
    use TranslationResult::*;
    const OP: &str = "translate_olf0_to_olf";
    let t = |k: usize| tr(&p.premises[k]);
    let (left, right) = (&p.conclusion.left, &p.conclusion.right);
    Ok(match p.rule {
        Rule::AndRr => match (t(0)?, t(1)?) {
            (Rr(a), Rr(b)) => Rr(F.and_rr(a, b)),
            _ => unreachable!(),
        },
        Rule::TopRr => Rr(F.top_rr(right)),
        Rule::ReacRr => match t(0)? {
            Same(q) => Rr(F.reac_rr(q)),
            Diag(d) => Rr(F.cw_rr(d, right)),
            _ => unreachable!(),
        },
        Rule::AndRv => match (t(0)?, t(1)?) {
            (Diag(d), _) | (_, Diag(d)) => Diag(d),
            (Same(a), Same(b)) => Same(F.and_rv(a, b)),
            _ => unreachable!(),
        },
        Rule::TopRv => Same(F.top_rv(left)),
        Rule::ReacRv => match t(0)? {
            FocusRight(q) => Same(F.d2(q)),
            FocusLeft(q) => Same(F.d1(q)),
            DiagLeft(d) => Diag(d),
            DiagRight(d) => Same(F.cw_rv(d, left)),
            _ => unreachable!(),
        },
        Rule::CwL | Rule::CwR => {
            let d = match t(0)? {
                FocusRight(q) | FocusLeft(q) | DiagLeft(q) | DiagRight(q) => q,
                _ => unreachable!(),
            };
            if !d.conclusion.left.is_or() {
                return Err(impossible(OP, &p.premises[0].conclusion));
            }
            if p.rule == Rule::CwL {
                DiagLeft(d)
            } else {
                DiagRight(d)
            }
        }
        Rule::DL => match t(0)? {
            Same(q) => FocusLeft(q),
            Diag(d) => DiagRight(d),
            _ => unreachable!(),
        },
        Rule::DR => match t(0)? {
            Same(q) => FocusRight(q),
            Diag(d) => DiagLeft(d),
            _ => unreachable!(),
        },
        Rule::Ax => match left {
            Formula::NegVar(x) => Same(F.ax(x)),
            _ => return Err(shape(OP, "⊢ ¬X ⇓ X", &p.conclusion)),
        },
        Rule::Or1 | Rule::Or2 => match t(0)? {
            Same(q) => {
                let Formula::Or(a, b) = right else {
                    return Err(shape(OP, "⊢ C ⇓ A∨B", &p.conclusion));
                };
                Same(if p.rule == Rule::Or1 { F.or1(q, b) } else { F.or2(a, q) })
            }
            Diag(d) => Diag(d),
            _ => unreachable!(),
        },
        Rule::ReacF => match t(0)? {
            Same(q) => Same(F.reac_f(q)),
            Diag(d) => Diag(d),
            _ => unreachable!(),
        },
        _ => return Err(shape(OP, "an OLf0 rule", &p.conclusion)),
    })
}

/// Cut in OLf: from `⊢ ⇑ A, B` and `⊢ ⇑ ¬B, C`, a proof of `⊢ ⇑ A, C`.
///
/// Both proofs are erased to OL and retranslated to OLf0, where the cut is
/// eliminated; the result is then translated back into OLf.
pub fn cut_olf(p1: &Proof, p2: &Proof) -> Result<Proof, TransformError> {
    const OP: &str = "cut_olf";
    require_calculus(OP, p1, Calculus::Olf)?;
    require_calculus(OP, p2, Calculus::Olf)?;
    check(p1)?;
    check(p2)?;
    for p in [p1, p2] {
        if p.conclusion.kind != SeqKind::Rr {
            return Err(shape(OP, "⊢ ⇑ A, B", &p.conclusion));
        }
    }
    if p2.conclusion.left != p1.conclusion.right.negate() {
        return Err(TransformError::Precondition {
            op: OP,
            reason: format!(
                "cut formulas {} and {} are not dual",
                p1.conclusion.right, p2.conclusion.left
            ),
        });
    }
    let t1 = translate_ol_to_olf0(&restrict_cw(&erase_olf(p1)?)?)?;
    let t2 = exchange_rr(&translate_ol_to_olf0(&restrict_cw(&erase_olf(p2)?)?)?)?;
    let cut = admissible_cut(CutKind::Cut0, &t1, &t2)?;
    translate_rr_to_olf(&cut)
}
