//! Sequents, proof trees and the proof checker.
//!
//! The checker in this module is the only trusted component: every other
//! module produces [`Proof`] values which are validated here node by node.
//! Each node stores its full conclusion so checking is purely local.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{parse, Formula};

/// The three calculi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Calculus {
    #[serde(rename = "OL")]
    Ol,
    #[serde(rename = "OLf0")]
    Olf0,
    #[serde(rename = "OLf")]
    Olf,
}

impl fmt::Display for Calculus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Calculus::Ol => "OL",
            Calculus::Olf0 => "OLf0",
            Calculus::Olf => "OLf",
        })
    }
}

/// Shape of a two-formula sequent.
///
/// `Ol` is the plain `⊢ A, B`; the others are the focused shapes
/// `⊢ ⇑ A, B` (`Rr`), `⊢ A ⇑ B` (`Rv`), `⊢ A, B ⇑` (`Ll`) and `⊢ A ⇓ B` (`Fc`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeqKind {
    Ol,
    Rr,
    Rv,
    Ll,
    Fc,
}

impl SeqKind {
    pub fn name(self) -> &'static str {
        match self {
            SeqKind::Ol => "OL",
            SeqKind::Rr => "RR",
            SeqKind::Rv => "RV",
            SeqKind::Ll => "LL",
            SeqKind::Fc => "FC",
        }
    }

    pub fn from_name(name: &str) -> Option<SeqKind> {
        Some(match name {
            "OL" => SeqKind::Ol,
            "RR" => SeqKind::Rr,
            "RV" => SeqKind::Rv,
            "LL" => SeqKind::Ll,
            "FC" => SeqKind::Fc,
            _ => return None,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub kind: SeqKind,
    pub left: Formula,
    pub right: Formula,
}

impl Sequent {
    pub fn new(kind: SeqKind, left: Formula, right: Formula) -> Self {
        Sequent { kind, left, right }
    }
    pub fn ol(left: Formula, right: Formula) -> Self {
        Self::new(SeqKind::Ol, left, right)
    }
    pub fn rr(left: Formula, right: Formula) -> Self {
        Self::new(SeqKind::Rr, left, right)
    }
    pub fn rv(left: Formula, right: Formula) -> Self {
        Self::new(SeqKind::Rv, left, right)
    }
    pub fn ll(left: Formula, right: Formula) -> Self {
        Self::new(SeqKind::Ll, left, right)
    }
    pub fn fc(left: Formula, right: Formula) -> Self {
        Self::new(SeqKind::Fc, left, right)
    }

    /// Same formulas, positions exchanged.
    pub fn swapped(&self) -> Self {
        Sequent::new(self.kind, self.right.clone(), self.left.clone())
    }

    /// The plain `⊢ A, B` obtained by dropping phase markers.
    pub fn erased(&self) -> Self {
        Sequent::ol(self.left.clone(), self.right.clone())
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (&self.left, &self.right);
        match self.kind {
            SeqKind::Ol => write!(f, "⊢ {a}, {b}"),
            SeqKind::Rr => write!(f, "⊢ ⇑ {a}, {b}"),
            SeqKind::Rv => write!(f, "⊢ {a} ⇑ {b}"),
            SeqKind::Ll => write!(f, "⊢ {a}, {b} ⇑"),
            SeqKind::Fc => write!(f, "⊢ {a} ⇓ {b}"),
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Rule names of all three calculi. `Ax`, `Or1` and `Or2` are shared names
/// whose schema depends on the calculus of the node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Ax,
    Ex,
    Cw,
    Or1,
    Or2,
    And,
    Top,
    AndRr,
    TopRr,
    ReacRr,
    AndRv,
    TopRv,
    ReacRv,
    CwL,
    CwR,
    DL,
    DR,
    ReacF,
    CwRr,
    CwRv,
    D1,
    D2,
}

impl Rule {
    pub const ALL: [Rule; 22] = [
        Rule::Ax,
        Rule::Ex,
        Rule::Cw,
        Rule::Or1,
        Rule::Or2,
        Rule::And,
        Rule::Top,
        Rule::AndRr,
        Rule::TopRr,
        Rule::ReacRr,
        Rule::AndRv,
        Rule::TopRv,
        Rule::ReacRv,
        Rule::CwL,
        Rule::CwR,
        Rule::DL,
        Rule::DR,
        Rule::ReacF,
        Rule::CwRr,
        Rule::CwRv,
        Rule::D1,
        Rule::D2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Ax => "ax",
            Rule::Ex => "ex",
            Rule::Cw => "cw",
            Rule::Or1 => "or1",
            Rule::Or2 => "or2",
            Rule::And => "and",
            Rule::Top => "top",
            Rule::AndRr => "and_rr",
            Rule::TopRr => "top_rr",
            Rule::ReacRr => "reac_rr",
            Rule::AndRv => "and_rv",
            Rule::TopRv => "top_rv",
            Rule::ReacRv => "reac_rv",
            Rule::CwL => "cw_l",
            Rule::CwR => "cw_r",
            Rule::DL => "d_l",
            Rule::DR => "d_r",
            Rule::ReacF => "reac_f",
            Rule::CwRr => "cw_rr",
            Rule::CwRv => "cw_rv",
            Rule::D1 => "d1",
            Rule::D2 => "d2",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn in_calculus(self, calculus: Calculus) -> bool {
        use Rule::*;
        match calculus {
            Calculus::Ol => matches!(self, Ax | Ex | Cw | Or1 | Or2 | And | Top),
            Calculus::Olf0 => matches!(
                self,
                AndRr | TopRr | ReacRr | AndRv | TopRv | ReacRv | CwL | CwR | DL | DR | Ax | Or1 | Or2 | ReacF
            ),
            Calculus::Olf => matches!(
                self,
                AndRr | TopRr | AndRv | TopRv | CwRr | CwRv | Ax | Or1 | Or2 | ReacRr | ReacF | D1 | D2
            ),
        }
    }

    pub fn arity(self) -> usize {
        use Rule::*;
        match self {
            Ax | Top | TopRr | TopRv => 0,
            And | AndRr | AndRv => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Proof {
    pub calculus: Calculus,
    pub rule: Rule,
    pub conclusion: Sequent,
    pub premises: Vec<Proof>,
}

impl Proof {
    pub fn new(calculus: Calculus, rule: Rule, conclusion: Sequent, premises: Vec<Proof>) -> Self {
        Proof {
            calculus,
            rule,
            conclusion,
            premises,
        }
    }

    pub fn leaf(calculus: Calculus, rule: Rule, conclusion: Sequent) -> Self {
        Self::new(calculus, rule, conclusion, Vec::new())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        let mut stack = vec![self];
        while let Some(p) = stack.pop() {
            n += 1;
            stack.extend(p.premises.iter());
        }
        n
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    /// Visits every node together with its path of premise indices.
    pub fn for_each_node(&self, mut f: impl FnMut(&[usize], &Proof)) {
        let mut stack: Vec<(Vec<usize>, &Proof)> = vec![(Vec::new(), self)];
        while let Some((path, p)) = stack.pop() {
            f(&path, p);
            for (i, q) in p.premises.iter().enumerate().rev() {
                let mut child = path.clone();
                child.push(i);
                stack.push((child, q));
            }
        }
    }

    pub fn rule_count(&self) -> BTreeMap<Rule, usize> {
        let mut counts = BTreeMap::new();
        self.for_each_node(|_, p| *counts.entry(p.rule).or_insert(0) += 1);
        counts
    }
}

impl fmt::Debug for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(p: &Proof, depth: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            writeln!(f, "{:indent$}{} {}", "", p.rule, p.conclusion, indent = depth * 2)?;
            for q in &p.premises {
                go(q, depth + 1, f)?;
            }
            Ok(())
        }
        writeln!(f, "{} proof:", self.calculus)?;
        go(self, 1, f)
    }
}

/// Node path from the root, e.g. `root.0.1` for the second premise of the
/// first premise.
pub fn format_path(path: &[usize]) -> String {
    let mut s = String::from("root");
    for i in path {
        s.push('.');
        s.push_str(&i.to_string());
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid proof node at {}: {violation}", format_path(.path))]
pub struct CheckError {
    pub path: Vec<usize>,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("node belongs to {found} inside a {expected} proof")]
    CalculusMismatch { expected: Calculus, found: Calculus },
    #[error("rule {rule} is not a rule of {calculus}")]
    RuleNotInCalculus { rule: Rule, calculus: Calculus },
    #[error("rule {rule} expects {expected} premises, found {found}")]
    Arity {
        rule: Rule,
        expected: usize,
        found: usize,
    },
    #[error("rule {rule} does not match {conclusion}: {reason}")]
    Schema {
        rule: Rule,
        conclusion: Sequent,
        reason: &'static str,
    },
    #[error("rule {rule}: side condition violated: {reason}")]
    SideCondition { rule: Rule, reason: &'static str },
    #[error("unknown rule name {0:?}")]
    UnknownRule(String),
    #[error("unknown sequent kind {0:?}")]
    UnknownKind(String),
    #[error("unparseable formula {text:?}: {error}")]
    BadFormula { text: String, error: String },
}

/// Checks one node against its rule schema, given the premises' stored
/// conclusions.
pub(crate) fn check_node(calculus: Calculus, rule: Rule, c: &Sequent, prem: &[&Sequent]) -> Result<(), Violation> {
    use Formula as F;
    use SeqKind::*;

    if !rule.in_calculus(calculus) {
        return Err(Violation::RuleNotInCalculus { rule, calculus });
    }
    if prem.len() != rule.arity() {
        return Err(Violation::Arity {
            rule,
            expected: rule.arity(),
            found: prem.len(),
        });
    }
    let schema = |ok: bool, reason: &'static str| {
        if ok {
            Ok(())
        } else {
            Err(Violation::Schema {
                rule,
                conclusion: c.clone(),
                reason,
            })
        }
    };
    let side = |ok: bool, reason: &'static str| {
        if ok {
            Ok(())
        } else {
            Err(Violation::SideCondition { rule, reason })
        }
    };
    let is = |s: &Sequent, k: SeqKind, l: &F, r: &F| s.kind == k && &s.left == l && &s.right == r;
    let (l, r) = (&c.left, &c.right);

    match calculus {
        Calculus::Ol => {
            schema(c.kind == Ol, "OL conclusions are plain sequents")?;
            match rule {
                Rule::Ax => schema(*l == r.negate(), "expected ⊢ ¬A, A"),
                Rule::Ex => schema(is(prem[0], Ol, r, l), "premise must be the exchanged sequent"),
                Rule::Cw => schema(is(prem[0], Ol, l, l), "premise must be ⊢ A, A"),
                Rule::Or1 | Rule::Or2 => {
                    let F::Or(a, b) = l else {
                        return schema(false, "left formula must be a disjunction");
                    };
                    let chosen = if rule == Rule::Or1 { a } else { b };
                    schema(is(prem[0], Ol, chosen, r), "premise does not match the chosen disjunct")
                }
                Rule::And => {
                    let F::And(a, b) = l else {
                        return schema(false, "left formula must be a conjunction");
                    };
                    schema(
                        is(prem[0], Ol, a, r) && is(prem[1], Ol, b, r),
                        "premises must be ⊢ A, C and ⊢ B, C",
                    )
                }
                Rule::Top => schema(*l == F::Top, "left formula must be ⊤"),
                _ => unreachable!("filtered by in_calculus"),
            }
        }
        Calculus::Olf0 | Calculus::Olf => {
            let f0 = calculus == Calculus::Olf0;
            match rule {
                Rule::AndRr => {
                    schema(c.kind == Rr, "conclusion must be ⊢ ⇑ A∧B, C")?;
                    let F::And(a, b) = l else {
                        return schema(false, "left formula must be a conjunction");
                    };
                    schema(
                        is(prem[0], Rr, a, r) && is(prem[1], Rr, b, r),
                        "premises must be ⊢ ⇑ A, C and ⊢ ⇑ B, C",
                    )
                }
                Rule::TopRr => schema(c.kind == Rr && *l == F::Top, "expected ⊢ ⇑ ⊤, C"),
                Rule::ReacRr => {
                    schema(c.kind == Rr, "conclusion must be ⊢ ⇑ A, C")?;
                    schema(is(prem[0], Rv, l, r), "premise must be ⊢ A ⇑ C")
                }
                Rule::AndRv => {
                    schema(c.kind == Rv, "conclusion must be ⊢ C ⇑ A∧B")?;
                    let F::And(a, b) = r else {
                        return schema(false, "right formula must be a conjunction");
                    };
                    schema(
                        is(prem[0], Rv, l, a) && is(prem[1], Rv, l, b),
                        "premises must be ⊢ C ⇑ A and ⊢ C ⇑ B",
                    )
                }
                Rule::TopRv => {
                    schema(c.kind == Rv && *r == F::Top, "expected ⊢ A ⇑ ⊤")?;
                    side(l.is_sync_or_neg_var(), "A must be synchronous or a negated variable")
                }
                Rule::ReacRv => {
                    schema(c.kind == Rv, "conclusion must be ⊢ C ⇑ A")?;
                    schema(is(prem[0], Ll, l, r), "premise must be ⊢ C, A ⇑")
                }
                Rule::CwL => {
                    schema(c.kind == Ll, "conclusion must be ⊢ C, A ⇑")?;
                    schema(is(prem[0], Ll, l, l), "premise must be ⊢ C, C ⇑")?;
                    side(r.is_sync_or_neg_var(), "A must be synchronous or a negated variable")
                }
                Rule::CwR => {
                    schema(c.kind == Ll, "conclusion must be ⊢ A, C ⇑")?;
                    schema(is(prem[0], Ll, r, r), "premise must be ⊢ C, C ⇑")?;
                    side(l.is_sync_or_neg_var(), "A must be synchronous or a negated variable")
                }
                Rule::DL => {
                    schema(c.kind == Ll, "conclusion must be ⊢ A, C ⇑")?;
                    schema(is(prem[0], Fc, r, l), "premise must be ⊢ C ⇓ A")?;
                    side(l.is_sync(), "A must be synchronous")
                }
                Rule::DR => {
                    schema(c.kind == Ll, "conclusion must be ⊢ C, A ⇑")?;
                    schema(is(prem[0], Fc, l, r), "premise must be ⊢ C ⇓ A")?;
                    side(r.is_sync(), "A must be synchronous")
                }
                Rule::Ax => schema(
                    c.kind == Fc && matches!((l, r), (F::NegVar(x), F::Var(y)) if x == y),
                    "expected ⊢ ¬X ⇓ X",
                ),
                Rule::Or1 | Rule::Or2 => {
                    schema(c.kind == Fc, "conclusion must be ⊢ C ⇓ A∨B")?;
                    let F::Or(a, b) = r else {
                        return schema(false, "focused formula must be a disjunction");
                    };
                    let chosen = if rule == Rule::Or1 { a } else { b };
                    schema(is(prem[0], Fc, l, chosen), "premise does not match the chosen disjunct")
                }
                Rule::ReacF => {
                    schema(c.kind == Fc, "conclusion must be ⊢ C ⇓ A")?;
                    schema(is(prem[0], Rv, l, r), "premise must be ⊢ C ⇑ A")?;
                    side(r.is_async(), "A must be asynchronous")
                }
                Rule::CwRr => {
                    schema(c.kind == Rr && l.is_or(), "expected ⊢ ⇑ B∨C, A")?;
                    schema(is(prem[0], Fc, l, l), "premise must be ⊢ B∨C ⇓ B∨C")
                }
                Rule::CwRv => {
                    schema(c.kind == Rv && r.is_or(), "expected ⊢ A ⇑ B∨C")?;
                    schema(is(prem[0], Fc, r, r), "premise must be ⊢ B∨C ⇓ B∨C")?;
                    side(l.is_sync_or_neg_var(), "A must be synchronous or a negated variable")
                }
                Rule::D1 => {
                    schema(c.kind == Rv, "conclusion must be ⊢ A ⇑ C")?;
                    schema(is(prem[0], Fc, r, l), "premise must be ⊢ C ⇓ A")?;
                    side(l.is_sync(), "A must be synchronous")
                }
                Rule::D2 => {
                    schema(c.kind == Rv, "conclusion must be ⊢ C ⇑ A")?;
                    schema(is(prem[0], Fc, l, r), "premise must be ⊢ C ⇓ A")?;
                    side(r.is_sync(), "A must be synchronous")
                }
                _ => unreachable!("filtered by in_calculus"),
            }
            .and_then(|()| {
                // OLf has no ⊢ A, B ⇑ sequents at all.
                if !f0 && c.kind == Ll {
                    schema(false, "OLf has no ⊢ A, B ⇑ sequents")
                } else {
                    Ok(())
                }
            })
        }
    }
}

/// Checks every node of `p` and returns its conclusion.
pub fn check(p: &Proof) -> Result<Sequent, CheckError> {
    let calculus = p.calculus;
    let mut stack: Vec<(Vec<usize>, &Proof)> = vec![(Vec::new(), p)];
    while let Some((path, node)) = stack.pop() {
        let fail = |violation| CheckError {
            path: path.clone(),
            violation,
        };
        if node.calculus != calculus {
            return Err(fail(Violation::CalculusMismatch {
                expected: calculus,
                found: node.calculus,
            }));
        }
        let prem: Vec<&Sequent> = node.premises.iter().map(|q| &q.conclusion).collect();
        check_node(calculus, node.rule, &node.conclusion, &prem).map_err(fail)?;
        for (i, q) in node.premises.iter().enumerate() {
            let mut child = path.clone();
            child.push(i);
            stack.push((child, q));
        }
    }
    Ok(p.conclusion.clone())
}

/// Checks `p` and additionally requires the given conclusion.
pub fn check_concludes(p: &Proof, expected: &Sequent) -> Result<(), String> {
    let got = check(p).map_err(|e| e.to_string())?;
    if &got == expected {
        Ok(())
    } else {
        Err(format!("proof concludes {got}, expected {expected}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no ψ measure for {0} sequents")]
pub struct PsiError(pub &'static str);

/// Sequent measure that strictly decreases from conclusion to premise in
/// every OLf rule.
pub fn psi(s: &Sequent) -> Result<u128, PsiError> {
    let (a, b) = (s.left.phi(), s.right.phi());
    let two = |x: u128| x.saturating_mul(2);
    match s.kind {
        SeqKind::Rr => Ok(two(a).saturating_add(two(b))),
        SeqKind::Rv => Ok(a.saturating_add(two(b))),
        SeqKind::Fc if s.right.is_sync() => Ok(a.saturating_add(b)),
        SeqKind::Fc => Ok(a.saturating_add(two(b)).saturating_add(1)),
        SeqKind::Ll | SeqKind::Ol => Err(PsiError(s.kind.name())),
    }
}

/// Lists every edge (by path of the premise) of an OLf proof along which ψ
/// fails to strictly decrease.
pub fn psi_violations(p: &Proof) -> Vec<Vec<usize>> {
    let mut bad = Vec::new();
    p.for_each_node(|path, node| {
        let Ok(parent) = psi(&node.conclusion) else {
            bad.push(path.to_vec());
            return;
        };
        for (i, q) in node.premises.iter().enumerate() {
            match psi(&q.conclusion) {
                Ok(child) if child < parent => {}
                _ => {
                    let mut at = path.to_vec();
                    at.push(i);
                    bad.push(at);
                }
            }
        }
    });
    bad
}

// Serialized form. Formulas are stored as printed text.

#[derive(Debug, Serialize, Deserialize)]
struct ProofDoc {
    calculus: Calculus,
    rule: String,
    conclusion: SequentDoc,
    #[serde(default)]
    premises: Vec<ProofDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct SequentDoc {
    kind: String,
    left: String,
    right: String,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed proof document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] CheckError),
}

impl Proof {
    fn to_doc(&self) -> ProofDoc {
        ProofDoc {
            calculus: self.calculus,
            rule: self.rule.name().to_string(),
            conclusion: SequentDoc {
                kind: self.conclusion.kind.name().to_string(),
                left: self.conclusion.left.to_string(),
                right: self.conclusion.right.to_string(),
            },
            premises: self.premises.iter().map(Proof::to_doc).collect(),
        }
    }

    fn from_doc(doc: ProofDoc, path: &mut Vec<usize>) -> Result<Proof, CheckError> {
        let fail = |path: &Vec<usize>, violation| CheckError {
            path: path.clone(),
            violation,
        };
        let rule = Rule::from_name(&doc.rule).ok_or_else(|| fail(path, Violation::UnknownRule(doc.rule.clone())))?;
        let kind = SeqKind::from_name(&doc.conclusion.kind)
            .ok_or_else(|| fail(path, Violation::UnknownKind(doc.conclusion.kind.clone())))?;
        let formula = |text: &str| {
            parse(text).map_err(|e| {
                fail(
                    path,
                    Violation::BadFormula {
                        text: text.to_string(),
                        error: e.to_string(),
                    },
                )
            })
        };
        let left = formula(&doc.conclusion.left)?;
        let right = formula(&doc.conclusion.right)?;
        let mut premises = Vec::with_capacity(doc.premises.len());
        for (i, q) in doc.premises.into_iter().enumerate() {
            path.push(i);
            premises.push(Proof::from_doc(q, path)?);
            path.pop();
        }
        Ok(Proof::new(doc.calculus, rule, Sequent::new(kind, left, right), premises))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("proof documents always serialize")
    }

    /// Parses a proof document. Structural JSON problems are reported as
    /// [`LoadError::Malformed`]; unknown rule names or formulas as
    /// [`LoadError::Invalid`] with the offending node path. The result is not
    /// yet checked.
    pub fn from_json(text: &str) -> Result<Proof, LoadError> {
        let mut de = serde_json::Deserializer::from_str(text);
        de.disable_recursion_limit();
        let doc = ProofDoc::deserialize(&mut de)?;
        de.end()?;
        Ok(Proof::from_doc(doc, &mut Vec::new())?)
    }
}
