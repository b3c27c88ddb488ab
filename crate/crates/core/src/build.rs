//! Node constructors shared by the proof transformations, plus the common
//! error type for transformations.
//!
//! Each constructor computes the conclusion from its premises. In debug
//! builds every node is checked locally against its schema as it is built.

use thiserror::Error;

use crate::formula::{Formula, VarId};
use crate::proof::{check_node, Calculus, CheckError, Proof, Rule, SeqKind, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{op}: expected {expected}, found {found}")]
    Shape {
        op: &'static str,
        expected: &'static str,
        found: Sequent,
    },
    #[error("{op}: precondition violated: {reason}")]
    Precondition { op: &'static str, reason: String },
    #[error("{op}: proof concludes an unprovable sequent {found}")]
    Impossible { op: &'static str, found: Sequent },
    #[error("{op}: input proof belongs to {found}, expected {expected}")]
    WrongCalculus {
        op: &'static str,
        expected: Calculus,
        found: Calculus,
    },
    #[error("input proof is invalid: {0}")]
    Invalid(#[from] CheckError),
    #[error("{op}: induction measure did not decrease ({child} after {parent})")]
    MeasureIncrease {
        op: &'static str,
        parent: String,
        child: String,
    },
}

pub(crate) fn shape(op: &'static str, expected: &'static str, found: &Sequent) -> TransformError {
    TransformError::Shape {
        op,
        expected,
        found: found.clone(),
    }
}

pub(crate) fn impossible(op: &'static str, found: &Sequent) -> TransformError {
    TransformError::Impossible {
        op,
        found: found.clone(),
    }
}

pub(crate) fn require_calculus(op: &'static str, p: &Proof, expected: Calculus) -> Result<(), TransformError> {
    if p.calculus == expected {
        Ok(())
    } else {
        Err(TransformError::WrongCalculus {
            op,
            expected,
            found: p.calculus,
        })
    }
}

/// Builds nodes of one calculus.
#[derive(Debug, Clone, Copy)]
pub struct Builder(pub Calculus);

pub const OL: Builder = Builder(Calculus::Ol);
pub const F0: Builder = Builder(Calculus::Olf0);
pub const F: Builder = Builder(Calculus::Olf);

impl Builder {
    pub fn node(self, rule: Rule, conclusion: Sequent, premises: Vec<Proof>) -> Proof {
        if cfg!(debug_assertions) {
            let prem: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
            if let Err(v) = check_node(self.0, rule, &conclusion, &prem) {
                panic!("built an invalid {} node: {v}", self.0);
            }
        }
        Proof::new(self.0, rule, conclusion, premises)
    }

    fn seq(self, kind: SeqKind, l: &Formula, r: &Formula) -> Sequent {
        Sequent::new(kind, l.clone(), r.clone())
    }

    // OL rules.

    /// `⊢ ¬A, A`.
    pub fn ax_ol(self, a: &Formula) -> Proof {
        self.node(Rule::Ax, Sequent::ol(a.negate(), a.clone()), vec![])
    }

    /// Exchange, cancelling a directly preceding exchange.
    pub fn ex(self, p: Proof) -> Proof {
        if p.rule == Rule::Ex {
            return p.premises.into_iter().next().expect("ex has one premise");
        }
        let c = p.conclusion.swapped();
        self.node(Rule::Ex, c, vec![p])
    }

    /// `⊢ A, A` to `⊢ A, B`.
    pub fn cw(self, p: Proof, b: &Formula) -> Proof {
        let c = self.seq(SeqKind::Ol, &p.conclusion.left, b);
        self.node(Rule::Cw, c, vec![p])
    }

    /// `⊢ A, C` to `⊢ A∨B, C`.
    pub fn or1_ol(self, p: Proof, b: &Formula) -> Proof {
        let c = Sequent::ol(Formula::or(p.conclusion.left.clone(), b.clone()), p.conclusion.right.clone());
        self.node(Rule::Or1, c, vec![p])
    }

    /// `⊢ B, C` to `⊢ A∨B, C`.
    pub fn or2_ol(self, a: &Formula, p: Proof) -> Proof {
        let c = Sequent::ol(Formula::or(a.clone(), p.conclusion.left.clone()), p.conclusion.right.clone());
        self.node(Rule::Or2, c, vec![p])
    }

    pub fn and_ol(self, p: Proof, q: Proof) -> Proof {
        let c = Sequent::ol(
            Formula::and(p.conclusion.left.clone(), q.conclusion.left.clone()),
            p.conclusion.right.clone(),
        );
        self.node(Rule::And, c, vec![p, q])
    }

    /// `⊢ ⊤, C`.
    pub fn top_ol(self, c: &Formula) -> Proof {
        self.node(Rule::Top, self.seq(SeqKind::Ol, &Formula::Top, c), vec![])
    }

    // Focused rules shared by OLf0 and OLf.

    pub fn and_rr(self, p: Proof, q: Proof) -> Proof {
        let c = Sequent::rr(
            Formula::and(p.conclusion.left.clone(), q.conclusion.left.clone()),
            p.conclusion.right.clone(),
        );
        self.node(Rule::AndRr, c, vec![p, q])
    }

    pub fn top_rr(self, c: &Formula) -> Proof {
        self.node(Rule::TopRr, self.seq(SeqKind::Rr, &Formula::Top, c), vec![])
    }

    /// `⊢ A ⇑ C` to `⊢ ⇑ A, C`.
    pub fn reac_rr(self, p: Proof) -> Proof {
        let c = Sequent::rr(p.conclusion.left.clone(), p.conclusion.right.clone());
        self.node(Rule::ReacRr, c, vec![p])
    }

    pub fn and_rv(self, p: Proof, q: Proof) -> Proof {
        let c = Sequent::rv(
            p.conclusion.left.clone(),
            Formula::and(p.conclusion.right.clone(), q.conclusion.right.clone()),
        );
        self.node(Rule::AndRv, c, vec![p, q])
    }

    /// `⊢ A ⇑ ⊤`.
    pub fn top_rv(self, a: &Formula) -> Proof {
        self.node(Rule::TopRv, self.seq(SeqKind::Rv, a, &Formula::Top), vec![])
    }

    /// `⊢ C ⇓ A` premise to `⊢ C ⇓ A∨B`.
    pub fn or1(self, p: Proof, b: &Formula) -> Proof {
        let c = Sequent::fc(p.conclusion.left.clone(), Formula::or(p.conclusion.right.clone(), b.clone()));
        self.node(Rule::Or1, c, vec![p])
    }

    /// `⊢ C ⇓ B` premise to `⊢ C ⇓ A∨B`.
    pub fn or2(self, a: &Formula, p: Proof) -> Proof {
        let c = Sequent::fc(p.conclusion.left.clone(), Formula::or(a.clone(), p.conclusion.right.clone()));
        self.node(Rule::Or2, c, vec![p])
    }

    /// `⊢ ¬X ⇓ X`.
    pub fn ax(self, x: &VarId) -> Proof {
        let c = Sequent::fc(Formula::NegVar(x.clone()), Formula::Var(x.clone()));
        self.node(Rule::Ax, c, vec![])
    }

    /// `⊢ C ⇑ A` to `⊢ C ⇓ A`.
    pub fn reac_f(self, p: Proof) -> Proof {
        let c = Sequent::fc(p.conclusion.left.clone(), p.conclusion.right.clone());
        self.node(Rule::ReacF, c, vec![p])
    }

    // OLf0 only.

    /// `⊢ C, A ⇑` to `⊢ C ⇑ A`.
    pub fn reac_rv(self, p: Proof) -> Proof {
        let c = Sequent::rv(p.conclusion.left.clone(), p.conclusion.right.clone());
        self.node(Rule::ReacRv, c, vec![p])
    }

    /// `⊢ C, C ⇑` to `⊢ C, A ⇑`.
    pub fn cw_l(self, p: Proof, a: &Formula) -> Proof {
        let c = self.seq(SeqKind::Ll, &p.conclusion.left, a);
        self.node(Rule::CwL, c, vec![p])
    }

    /// `⊢ C, C ⇑` to `⊢ A, C ⇑`.
    pub fn cw_r(self, p: Proof, a: &Formula) -> Proof {
        let c = self.seq(SeqKind::Ll, a, &p.conclusion.left);
        self.node(Rule::CwR, c, vec![p])
    }

    /// `⊢ C ⇓ A` to `⊢ A, C ⇑`.
    pub fn d_l(self, p: Proof) -> Proof {
        let c = p.conclusion.swapped();
        let c = Sequent::ll(c.left, c.right);
        self.node(Rule::DL, c, vec![p])
    }

    /// `⊢ C ⇓ A` to `⊢ C, A ⇑`.
    pub fn d_r(self, p: Proof) -> Proof {
        let c = Sequent::ll(p.conclusion.left.clone(), p.conclusion.right.clone());
        self.node(Rule::DR, c, vec![p])
    }

    // OLf only.

    /// `⊢ B∨C ⇓ B∨C` to `⊢ ⇑ B∨C, A`.
    pub fn cw_rr(self, p: Proof, a: &Formula) -> Proof {
        let c = self.seq(SeqKind::Rr, &p.conclusion.left, a);
        self.node(Rule::CwRr, c, vec![p])
    }

    /// `⊢ B∨C ⇓ B∨C` to `⊢ A ⇑ B∨C`.
    pub fn cw_rv(self, p: Proof, a: &Formula) -> Proof {
        let c = self.seq(SeqKind::Rv, a, &p.conclusion.left);
        self.node(Rule::CwRv, c, vec![p])
    }

    /// `⊢ C ⇓ A` to `⊢ A ⇑ C`.
    pub fn d1(self, p: Proof) -> Proof {
        let c = Sequent::rv(p.conclusion.right.clone(), p.conclusion.left.clone());
        self.node(Rule::D1, c, vec![p])
    }

    /// `⊢ C ⇓ A` to `⊢ C ⇑ A`.
    pub fn d2(self, p: Proof) -> Proof {
        let c = Sequent::rv(p.conclusion.left.clone(), p.conclusion.right.clone());
        self.node(Rule::D2, c, vec![p])
    }
}

/// Runs `f` on a thread with a large stack. Proof transformations and
/// searches recurse along proof height, which can exceed the default stack
/// for large inputs.
pub fn with_big_stack<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    const STACK: usize = 1 << 30;
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(STACK)
            .spawn_scoped(s, f)
            .expect("failed to spawn worker thread")
            .join()
            .unwrap_or_else(|e| std::panic::resume_unwind(e))
    })
}
