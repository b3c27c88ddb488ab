//! Finite ortholattices: axiom verification, evaluation of formulas and
//! exhaustive search for countermodels.
//!
//! # Text format
//!
//! ```text
//! # comments start with '#'
//! [elements]
//! bot
//! a
//! top
//! [leq]
//! bot a        # bot ≤ a; the order is the reflexive-transitive closure
//! a top
//! [neg]
//! bot top      # ¬bot = top and ¬top = bot
//! a a
//! ```
//!
//! Element names are whitespace-free tokens, one per line. Each `[leq]` line
//! holds a pair `p q` meaning `p ≤ q`. Each `[neg]` line holds a pair `p q`
//! setting `¬p = q` and `¬q = p`; every element must receive a negation.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::formula::{Formula, VarId};

/// Index of an element in its lattice.
pub type Elem = usize;

/// Interpretation of variables as lattice elements.
pub type Valuation = BTreeMap<VarId, Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("the lattice has no elements")]
    Empty,
    #[error("element {0:?} has no negation")]
    MissingNeg(String),
    #[error("conflicting negations for {0:?}")]
    ConflictingNeg(String),
    #[error("variable {0} has no value")]
    Unbound(VarId),
    #[error("{0}")]
    NotALattice(String),
}

/// A failed ortholattice axiom together with the elements witnessing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: &'static str,
    pub witnesses: Vec<String>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at ({})", self.axiom, self.witnesses.join(", "))
    }
}

/// A finite bounded poset with a negation map, together with its meets and
/// joins where they exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteOrtholattice {
    names: Vec<String>,
    index: HashMap<String, Elem>,
    leq: Vec<Vec<bool>>,
    neg: Vec<Elem>,
    meet: Vec<Vec<Option<Elem>>>,
    join: Vec<Vec<Option<Elem>>>,
    top: Option<Elem>,
    bottom: Option<Elem>,
}

impl FiniteOrtholattice {
    /// Builds the structure from element names, generating pairs of the
    /// order and the negation map (indexed like `names`).
    pub fn new(names: Vec<String>, leq: &[(Elem, Elem)], neg: Vec<Elem>) -> Result<Self, ModelError> {
        let n = names.len();
        if n == 0 {
            return Err(ModelError::Empty);
        }
        let mut index = HashMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(ModelError::DuplicateElement(name.clone()));
            }
        }
        if neg.len() != n {
            return Err(ModelError::MissingNeg(names[neg.len().min(n - 1)].clone()));
        }
        let out_of_range = |e: Elem| ModelError::UnknownElement(format!("#{e}"));
        if let Some(&e) = neg.iter().find(|&&e| e >= n) {
            return Err(out_of_range(e));
        }
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(p, q) in leq {
            if p >= n || q >= n {
                return Err(out_of_range(p.max(q)));
            }
            rel[p][q] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    for j in 0..n {
                        if rel[k][j] {
                            rel[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut l = FiniteOrtholattice {
            names,
            index,
            leq: rel,
            neg,
            meet: Vec::new(),
            join: Vec::new(),
            top: None,
            bottom: None,
        };
        l.top = (0..n).find(|&t| (0..n).all(|p| l.leq[p][t]));
        l.bottom = (0..n).find(|&b| (0..n).all(|p| l.leq[b][p]));
        l.meet = (0..n).map(|p| (0..n).map(|q| l.bound(p, q, false)).collect()).collect();
        l.join = (0..n).map(|p| (0..n).map(|q| l.bound(p, q, true)).collect()).collect();
        Ok(l)
    }

    /// Least upper bound (`upper`) or greatest lower bound of `p` and `q`.
    fn bound(&self, p: Elem, q: Elem, upper: bool) -> Option<Elem> {
        let le = |a: Elem, b: Elem| if upper { self.leq[a][b] } else { self.leq[b][a] };
        let bounds: Vec<Elem> = (0..self.len()).filter(|&u| le(p, u) && le(q, u)).collect();
        bounds.iter().copied().find(|&u| bounds.iter().all(|&v| le(u, v)))
    }

    /// The hexagon `⊥ < ¬y < x < ⊤`, `⊥ < ¬x < y < ⊤`, which is not
    /// orthomodular.
    pub fn hexagon() -> Self {
        let names = ["bot", "ny", "nx", "x", "y", "top"].map(String::from).to_vec();
        let leq = [(0, 1), (0, 2), (1, 3), (2, 4), (3, 5), (4, 5)];
        FiniteOrtholattice::new(names, &leq, vec![5, 4, 3, 2, 1, 0]).expect("well-formed")
    }

    /// The two-element Boolean algebra.
    pub fn boolean2() -> Self {
        let names = ["bot", "top"].map(String::from).to_vec();
        FiniteOrtholattice::new(names, &[(0, 1)], vec![1, 0]).expect("well-formed")
    }

    /// Parses the text format described in the module documentation.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Elements,
            Leq,
            Neg,
        }
        let mut section = Section::None;
        let mut names: Vec<String> = Vec::new();
        let mut leq_names = Vec::new();
        let mut neg_names = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| ModelError::Syntax {
                line: i + 1,
                msg: msg.to_string(),
            };
            match line {
                "[elements]" => section = Section::Elements,
                "[leq]" => section = Section::Leq,
                "[neg]" => section = Section::Neg,
                _ => {
                    let toks: Vec<&str> = line.split_whitespace().collect();
                    match section {
                        Section::None => return Err(err("expected a section header")),
                        Section::Elements if toks.len() == 1 => names.push(toks[0].to_string()),
                        Section::Elements => return Err(err("expected one element name")),
                        _ if toks.len() != 2 => return Err(err("expected a pair of elements")),
                        Section::Leq => leq_names.push((toks[0].to_string(), toks[1].to_string())),
                        Section::Neg => neg_names.push((toks[0].to_string(), toks[1].to_string())),
                    }
                }
            }
        }
        let idx: HashMap<&str, Elem> = names.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        let lookup = |s: &str| idx.get(s).copied().ok_or_else(|| ModelError::UnknownElement(s.to_string()));
        let leq = leq_names
            .iter()
            .map(|(p, q)| Ok((lookup(p)?, lookup(q)?)))
            .collect::<Result<Vec<_>, ModelError>>()?;
        let mut neg: Vec<Option<Elem>> = vec![None; names.len()];
        for (p, q) in &neg_names {
            let (p, q) = (lookup(p)?, lookup(q)?);
            for (a, b) in [(p, q), (q, p)] {
                match neg[a] {
                    Some(c) if c != b => return Err(ModelError::ConflictingNeg(names[a].clone())),
                    _ => neg[a] = Some(b),
                }
            }
        }
        let neg = neg
            .iter()
            .enumerate()
            .map(|(i, e)| e.ok_or_else(|| ModelError::MissingNeg(names[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        FiniteOrtholattice::new(names, &leq, neg)
    }

    /// Renders the lattice in the text format.
    pub fn to_text(&self) -> String {
        let mut s = String::from("[elements]\n");
        for name in &self.names {
            s += &format!("{name}\n");
        }
        s += "[leq]\n";
        for p in 0..self.len() {
            for q in 0..self.len() {
                if p != q && self.leq[p][q] {
                    s += &format!("{} {}\n", self.names[p], self.names[q]);
                }
            }
        }
        s += "[neg]\n";
        for p in 0..self.len() {
            s += &format!("{} {}\n", self.names[p], self.names[self.neg[p]]);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, e: Elem) -> &str {
        &self.names[e]
    }

    pub fn element(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub fn leq(&self, p: Elem, q: Elem) -> bool {
        self.leq[p][q]
    }

    pub fn neg(&self, p: Elem) -> Elem {
        self.neg[p]
    }

    pub fn meet(&self, p: Elem, q: Elem) -> Option<Elem> {
        self.meet[p][q]
    }

    pub fn join(&self, p: Elem, q: Elem) -> Option<Elem> {
        self.join[p][q]
    }

    pub fn top(&self) -> Option<Elem> {
        self.top
    }

    pub fn bottom(&self) -> Option<Elem> {
        self.bottom
    }

    /// Replaces the negation of one element, leaving all others unchanged.
    pub fn with_neg(mut self, p: Elem, q: Elem) -> Self {
        self.neg[p] = q;
        self
    }

    /// Formats a valuation as `X=x, Y=y`.
    pub fn show_valuation(&self, v: &Valuation) -> String {
        v.iter()
            .map(|(x, &e)| format!("{x}={}", self.names[e]))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Every failed ortholattice axiom, with witnesses; empty iff `l` is an
/// ortholattice.
pub fn verify_ortholattice(l: &FiniteOrtholattice) -> Vec<Violation> {
    let n = l.len();
    let mut out = Vec::new();
    let mut fail = |axiom: &'static str, ws: &[Elem]| {
        out.push(Violation {
            axiom,
            witnesses: ws.iter().map(|&e| l.names[e].clone()).collect(),
        })
    };
    for p in 0..n {
        if !l.leq[p][p] {
            fail("reflexivity", &[p]);
        }
        for q in 0..n {
            if p < q && l.leq[p][q] && l.leq[q][p] {
                fail("antisymmetry", &[p, q]);
            }
            for r in 0..n {
                if l.leq[p][q] && l.leq[q][r] && !l.leq[p][r] {
                    fail("transitivity", &[p, q, r]);
                }
            }
        }
    }
    if l.top.is_none() {
        out.push(Violation {
            axiom: "greatest element",
            witnesses: Vec::new(),
        });
    }
    if l.bottom.is_none() {
        out.push(Violation {
            axiom: "least element",
            witnesses: Vec::new(),
        });
    }
    let mut fail = |axiom: &'static str, ws: &[Elem]| {
        out.push(Violation {
            axiom,
            witnesses: ws.iter().map(|&e| l.names[e].clone()).collect(),
        })
    };
    for p in 0..n {
        for q in p..n {
            if l.meet[p][q].is_none() {
                fail("meet exists", &[p, q]);
            }
            if l.join[p][q].is_none() {
                fail("join exists", &[p, q]);
            }
        }
    }
    for p in 0..n {
        if l.neg[l.neg[p]] != p {
            fail("involution", &[p]);
        }
        for q in 0..n {
            if l.leq[p][q] && !l.leq[l.neg[q]][l.neg[p]] {
                fail("order reversal", &[p, q]);
            }
        }
        if let Some(t) = l.top {
            if l.join[p][l.neg[p]] != Some(t) {
                fail("complement", &[p]);
            }
        }
    }
    out
}

/// Value of `f` under `v`.
pub fn eval(f: &Formula, v: &Valuation, l: &FiniteOrtholattice) -> Result<Elem, ModelError> {
    let missing = |what: &str| ModelError::NotALattice(format!("the structure has no {what}"));
    let lookup = |x: &VarId| v.get(x).copied().ok_or_else(|| ModelError::Unbound(x.clone()));
    match f {
        Formula::Var(x) => lookup(x),
        Formula::NegVar(x) => Ok(l.neg[lookup(x)?]),
        Formula::Top => l.top.ok_or_else(|| missing("greatest element")),
        Formula::Bot => l.bottom.ok_or_else(|| missing("least element")),
        Formula::And(a, b) => {
            let (p, q) = (eval(a, v, l)?, eval(b, v, l)?);
            l.meet[p][q].ok_or_else(|| missing("meet for some pair"))
        }
        Formula::Or(a, b) => {
            let (p, q) = (eval(a, v, l)?, eval(b, v, l)?);
            l.join[p][q].ok_or_else(|| missing("join for some pair"))
        }
    }
}

/// Calls `visit` on every valuation of `vars` until it returns `true`, and
/// returns that valuation.
fn find_valuation(
    vars: &[VarId],
    l: &FiniteOrtholattice,
    mut visit: impl FnMut(&Valuation) -> bool,
) -> Option<Valuation> {
    let mut digits = vec![0; vars.len()];
    loop {
        let v: Valuation = vars.iter().cloned().zip(digits.iter().copied()).collect();
        if visit(&v) {
            return Some(v);
        }
        let mut i = 0;
        loop {
            if i == digits.len() {
                return None;
            }
            digits[i] += 1;
            if digits[i] < l.len() {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
    }
}

/// A valuation under which `f` is not `⊤`, if one exists. The search is
/// exhaustive: `|l|^k` valuations for `k` variables.
pub fn refute_validity(f: &Formula, l: &FiniteOrtholattice) -> Option<Valuation> {
    let vars: Vec<VarId> = f.vars().into_iter().collect();
    let top = l.top?;
    find_valuation(&vars, l, |v| eval(f, v, l).map_or(false, |e| e != top))
}

/// A valuation under which `¬A ≤ B` fails, refuting `⊢ A, B`.
pub fn refute_sequent(a: &Formula, b: &Formula, l: &FiniteOrtholattice) -> Option<Valuation> {
    let mut vars: Vec<VarId> = a.vars().into_iter().collect();
    vars.extend(b.vars().into_iter().filter(|x| !a.vars().contains(x)));
    let na = a.negate();
    find_valuation(&vars, l, |v| match (eval(&na, v, l), eval(b, v, l)) {
        (Ok(p), Ok(q)) => !l.leq[p][q],
        _ => false,
    })
}
