//! System OL: derived and admissible rules, erasure of the focused systems
//! into OL, and cut.

use crate::build::{impossible, require_calculus, shape, TransformError, OL};
use crate::formula::Formula;
use crate::olf0::{admissible_cut, exchange_rr, translate_ol_to_olf0, CutKind};
use crate::proof::{check, Calculus, Proof, Rule, SeqKind};

/// Proof of `⊢ ¬A, A` using only variable axioms.
pub fn ax_expand(a: &Formula) -> Proof {
    match a {
        Formula::Var(_) => OL.ax_ol(a),
        Formula::NegVar(x) => OL.ex(OL.ax_ol(&Formula::Var(x.clone()))),
        Formula::Top => OL.ex(OL.top_ol(&Formula::Bot)),
        Formula::Bot => OL.top_ol(&Formula::Bot),
        Formula::And(l, r) => {
            // ⊢ L, ¬L∨¬R from ⊢ ¬L, L, and likewise for R.
            let (nl, nr) = (l.negate(), r.negate());
            let left = OL.ex(OL.or1_ol(ax_expand(l), &nr));
            let right = OL.ex(OL.or2_ol(&nl, ax_expand(r)));
            OL.ex(OL.and_ol(left, right))
        }
        Formula::Or(l, r) => {
            let left = OL.ex(OL.or1_ol(OL.ex(ax_expand(l)), r));
            let right = OL.ex(OL.or2_ol(l, OL.ex(ax_expand(r))));
            OL.and_ol(left, right)
        }
    }
}

/// Splits a proof of `⊢ A∧B, C` into proofs of `⊢ A, C` and `⊢ B, C`.
///
/// If the input respects the contraction restriction of [`restrict_cw`], so
/// do both outputs.
pub fn reverse_and(p: &Proof) -> Result<(Proof, Proof), TransformError> {
    require_calculus("reverse_and", p, Calculus::Ol)?;
    let Formula::And(a, b) = &p.conclusion.left else {
        return Err(shape("reverse_and", "⊢ A∧B, C", &p.conclusion));
    };
    let parts = [a.as_ref(), b.as_ref()];
    Ok((rev(p, parts, 0, true, false)?, rev(p, parts, 1, true, false)?))
}

/// Replaces the masked occurrences of `parts[0]∧parts[1]` in the conclusion
/// of `p` by `parts[i]`.
fn rev(p: &Proof, parts: [&Formula; 2], i: usize, ml: bool, mr: bool) -> Result<Proof, TransformError> {
    if !ml && !mr {
        return Ok(p.clone());
    }
    let c = &p.conclusion;
    let part = parts[i];
    let put = |f: &Formula, masked: bool| if masked { part.clone() } else { f.clone() };
    let prem = |k: usize| &p.premises[k];
    match p.rule {
        Rule::Ax => {
            if ml && mr {
                return Err(impossible("reverse_and", c));
            }
            let dual = if ml { &c.right } else { &c.left };
            let Formula::Or(n1, n2) = dual else {
                return Err(shape("reverse_and", "an axiom on the conjunction", c));
            };
            let core = OL.ax_ol(part);
            let q = if i == 0 {
                OL.or1_ol(core, n2)
            } else {
                OL.or2_ol(n1, core)
            };
            Ok(if ml { OL.ex(q) } else { q })
        }
        Rule::Ex => Ok(OL.ex(rev(prem(0), parts, i, mr, ml)?)),
        Rule::Cw => {
            if ml {
                let q = rev(prem(0), parts, i, true, true)?;
                Ok(OL.cw(q, &put(&c.right, mr)))
            } else {
                Ok(weaken(prem(0).clone(), part))
            }
        }
        Rule::Or1 | Rule::Or2 => {
            let q = rev(prem(0), parts, i, false, mr)?;
            let Formula::Or(l, r) = &c.left else {
                return Err(shape("reverse_and", "⊢ A∨B, C", c));
            };
            Ok(if p.rule == Rule::Or1 {
                OL.or1_ol(q, r)
            } else {
                OL.or2_ol(l, q)
            })
        }
        Rule::And => {
            if ml {
                rev(prem(i), parts, i, false, mr)
            } else {
                let q0 = rev(prem(0), parts, i, false, mr)?;
                let q1 = rev(prem(1), parts, i, false, mr)?;
                Ok(OL.and_ol(q0, q1))
            }
        }
        Rule::Top => Ok(OL.top_ol(&put(&c.right, mr))),
        _ => Err(shape("reverse_and", "an OL rule", c)),
    }
}

/// `⊢ D, E` from `⊢ D, D`, restricted whenever `D` is a disjunction.
fn weaken(q: Proof, e: &Formula) -> Proof {
    if q.conclusion.left.is_or() {
        cw_adm_or(q, e)
    } else {
        OL.cw(q, e)
    }
}

/// `⊢ D, E` from a restricted proof of `⊢ D, D` with `D` a disjunction.
fn cw_adm_or(q: Proof, e: &Formula) -> Proof {
    match e {
        Formula::Top => OL.ex(OL.top_ol(&q.conclusion.left)),
        Formula::And(e1, e2) => {
            let s1 = OL.ex(cw_adm_or(q.clone(), e1));
            let s2 = OL.ex(cw_adm_or(q, e2));
            OL.ex(OL.and_ol(s1, s2))
        }
        _ => OL.cw(q, e),
    }
}

/// `⊢ D, E` from a restricted proof of `⊢ D, D`.
fn cw_adm(q: Proof, e: &Formula) -> Result<Proof, TransformError> {
    match &q.conclusion.left {
        Formula::Top => Ok(OL.top_ol(e)),
        Formula::And(d1, d2) => {
            let parts = [d1.as_ref(), d2.as_ref()];
            let r0 = rev(&q, parts, 0, true, true)?;
            let r1 = rev(&q, parts, 1, true, true)?;
            Ok(OL.and_ol(cw_adm(r0, e)?, cw_adm(r1, e)?))
        }
        Formula::Or(..) => Ok(cw_adm_or(q, e)),
        _ => Err(impossible("restrict_cw", &q.conclusion)),
    }
}

/// Rewrites `p` so that every `cw` node contracts a disjunction and weakens
/// to a formula that is neither `⊤` nor a conjunction.
pub fn restrict_cw(p: &Proof) -> Result<Proof, TransformError> {
    require_calculus("restrict_cw", p, Calculus::Ol)?;
    restrict(p)
}

fn restrict(p: &Proof) -> Result<Proof, TransformError> {
    let premises = p.premises.iter().map(restrict).collect::<Result<Vec<_>, _>>()?;
    if p.rule == Rule::Cw {
        let q = premises.into_iter().next().expect("cw has one premise");
        cw_adm(q, &p.conclusion.right)
    } else {
        Ok(Proof::new(p.calculus, p.rule, p.conclusion.clone(), premises))
    }
}

/// Whether every `cw` node of `p` has the restricted shape.
pub fn is_cw_restricted(p: &Proof) -> bool {
    let mut ok = true;
    p.for_each_node(|_, q| {
        if q.rule == Rule::Cw {
            let c = &q.conclusion;
            ok &= c.left.is_or() && !matches!(c.right, Formula::Top | Formula::And(..));
        }
    });
    ok
}

/// OL proof of the erased conclusion of an OLf0 proof.
pub fn erase_olf0(p: &Proof) -> Result<Proof, TransformError> {
    require_calculus("erase_olf0", p, Calculus::Olf0)?;
    erase(p)
}

/// OL proof of the erased conclusion of an OLf proof.
pub fn erase_olf(p: &Proof) -> Result<Proof, TransformError> {
    require_calculus("erase_olf", p, Calculus::Olf)?;
    erase(p)
}

fn erase(p: &Proof) -> Result<Proof, TransformError> {
    let c = &p.conclusion;
    if c.kind == SeqKind::Ol {
        return Err(shape("erase", "a focused sequent", c));
    }
    let e = |k: usize| erase(&p.premises[k]);
    let disjuncts = || match &c.right {
        Formula::Or(a, b) => Ok((a.as_ref(), b.as_ref())),
        _ => Err(shape("erase", "⊢ C ⇓ A∨B", c)),
    };
    Ok(match p.rule {
        Rule::AndRr => OL.and_ol(e(0)?, e(1)?),
        Rule::TopRr => OL.top_ol(&c.right),
        Rule::ReacRr | Rule::ReacRv | Rule::DR | Rule::ReacF | Rule::D2 => e(0)?,
        Rule::AndRv => OL.ex(OL.and_ol(OL.ex(e(0)?), OL.ex(e(1)?))),
        Rule::TopRv => OL.ex(OL.top_ol(&c.left)),
        Rule::CwL | Rule::CwRr => OL.cw(e(0)?, &c.right),
        Rule::CwR | Rule::CwRv => OL.ex(OL.cw(e(0)?, &c.left)),
        Rule::DL | Rule::D1 => OL.ex(e(0)?),
        Rule::Ax => OL.ax_ol(&c.right),
        Rule::Or1 => OL.ex(OL.or1_ol(OL.ex(e(0)?), disjuncts()?.1)),
        Rule::Or2 => OL.ex(OL.or2_ol(disjuncts()?.0, OL.ex(e(0)?))),
        Rule::Ex | Rule::Cw | Rule::And | Rule::Top => return Err(shape("erase", "a focused rule", c)),
    })
}

/// Cut in OL: from `⊢ A, B` and `⊢ ¬B, C`, a cut-free proof of `⊢ A, C`.
///
/// Both proofs are translated to OLf0, the second is exchanged, the focused
/// cut is eliminated and the result erased back to OL.
pub fn cut_ol(p1: &Proof, p2: &Proof) -> Result<Proof, TransformError> {
    require_calculus("cut_ol", p1, Calculus::Ol)?;
    require_calculus("cut_ol", p2, Calculus::Ol)?;
    check(p1)?;
    check(p2)?;
    if p2.conclusion.left != p1.conclusion.right.negate() {
        return Err(TransformError::Precondition {
            op: "cut_ol",
            reason: format!(
                "cut formulas {} and {} are not dual",
                p1.conclusion.right, p2.conclusion.left
            ),
        });
    }
    let t1 = translate_ol_to_olf0(p1)?;
    let t2 = exchange_rr(&translate_ol_to_olf0(p2)?)?;
    let cut = admissible_cut(CutKind::Cut0, &t1, &t2)?;
    erase(&cut)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::proof::{check_concludes, Sequent};

    fn f(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn ax_expand_examples() {
        let p = ax_expand(&f("X"));
        assert_eq!(p.size(), 1);
        assert_eq!(p.rule, Rule::Ax);
        for s in ["T", "X & Y", "~X | (Y & F)", "(X | ~Y) & (T | Z)"] {
            let a = f(s);
            let p = ax_expand(&a);
            check_concludes(&p, &Sequent::ol(a.negate(), a.clone())).unwrap();
            p.for_each_node(|_, q| {
                if q.rule == Rule::Ax {
                    assert!(q.conclusion.right.is_var(), "non-variable axiom in {s}");
                }
            });
        }
    }

    #[test]
    fn reverse_and_of_top_pair() {
        let x = f("X");
        let p = OL.and_ol(OL.top_ol(&x), OL.top_ol(&x));
        let (a, b) = reverse_and(&p).unwrap();
        check_concludes(&a, &Sequent::ol(Formula::Top, x.clone())).unwrap();
        check_concludes(&b, &Sequent::ol(Formula::Top, x)).unwrap();
    }

    #[test]
    fn reverse_and_of_expanded_axiom() {
        let p = OL.ex(ax_expand(&f("X & Y")));
        assert_eq!(p.conclusion, Sequent::ol(f("X & Y"), f("~X | ~Y")));
        let (a, b) = reverse_and(&p).unwrap();
        check_concludes(&a, &Sequent::ol(f("X"), f("~X | ~Y"))).unwrap();
        check_concludes(&b, &Sequent::ol(f("Y"), f("~X | ~Y"))).unwrap();
    }

    #[test]
    fn reverse_and_of_and_rule_returns_premises() {
        let (a, b) = (ax_expand(&f("X")), OL.top_ol(&f("X")));
        let p = Proof::new(
            Calculus::Ol,
            Rule::And,
            Sequent::ol(f("~X & T"), f("X")),
            vec![a.clone(), b.clone()],
        );
        assert_eq!(reverse_and(&p).unwrap(), (a, b));
    }

    #[test]
    fn restrict_removes_cw_on_top() {
        let p = OL.cw(OL.top_ol(&Formula::Top), &f("X"));
        let r = restrict_cw(&p).unwrap();
        check_concludes(&r, &p.conclusion).unwrap();
        assert_eq!(r.size(), 1);
        assert_eq!(r.rule, Rule::Top);
    }

    /// `⊢ X∨¬X, X∨¬X` without contraction.
    fn lem() -> Proof {
        let x = f("X");
        let d_x = OL.or2_ol(&x, OL.ax_ol(&x));
        OL.or1_ol(OL.ex(d_x), &f("~X"))
    }

    #[test]
    fn restrict_rewrites_conjunction_contraction() {
        let dd = OL.ex(OL.and_ol(lem(), lem()));
        let p = OL.cw(OL.and_ol(dd.clone(), dd), &f("Y & T"));
        check_concludes(&p, &Sequent::ol(f("(X | ~X) & (X | ~X)"), f("Y & T"))).unwrap();
        assert!(!is_cw_restricted(&p));
        let r = restrict_cw(&p).unwrap();
        check_concludes(&r, &p.conclusion).unwrap();
        assert!(is_cw_restricted(&r));
    }

    #[test]
    fn erase_axiom() {
        let x = crate::formula::VarId::new("X").unwrap();
        let p = crate::build::F0.ax(&x);
        let e = erase_olf0(&p).unwrap();
        check_concludes(&e, &Sequent::ol(f("~X"), f("X"))).unwrap();
        assert_eq!(e.size(), 1);
    }

    #[test]
    fn cut_with_axioms() {
        let p = ax_expand(&f("X"));
        let c = cut_ol(&p, &p).unwrap();
        check_concludes(&c, &Sequent::ol(f("~X"), f("X"))).unwrap();
    }

    #[test]
    fn cut_mismatch_rejected() {
        let p = ax_expand(&f("X"));
        let q = ax_expand(&f("Y"));
        assert!(matches!(cut_ol(&p, &q), Err(TransformError::Precondition { .. })));
    }
}
