//! Proof search: backward search in OLf (bwf), forward saturation (fwf), the
//! diagonal decomposition of `⊢ ⇑ A, A`, and loop-checking searches used as
//! oracles in OL and OLf0.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::build::{with_big_stack, F};
use crate::formula::{Context, Formula, VarId};
use crate::proof::{psi, Calculus, Proof, Rule, SeqKind, Sequent};

/// Counters collected during one search run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Rule instances applied, per rule.
    pub rules_applied: BTreeMap<Rule, usize>,
    pub total_rules: usize,
    /// Distinct sequents examined.
    pub sequents_visited: usize,
    pub elapsed: Duration,
    /// Largest number of nested goals on the backward search stack.
    pub max_depth: usize,
    /// Size of the memo table (bwf) or derivation table (fwf) at the end.
    pub peak_memo: usize,
}

impl SearchStats {
    fn apply(&mut self, rule: Rule) {
        *self.rules_applied.entry(rule).or_default() += 1;
        self.total_rules += 1;
    }

    fn absorb(&mut self, other: SearchStats) {
        for (r, n) in other.rules_applied {
            *self.rules_applied.entry(r).or_default() += n;
        }
        self.total_rules += other.total_rules;
        self.sequents_visited += other.sequents_visited;
        self.max_depth = self.max_depth.max(other.max_depth);
        self.peak_memo = self.peak_memo.max(other.peak_memo);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// The sequent is provable. The proof is present when proof building is
    /// enabled in the configuration.
    Provable(Option<Proof>),
    Unprovable,
    /// The configured time limit was reached first.
    Timeout,
}

impl Verdict {
    pub fn is_provable(&self) -> bool {
        matches!(self, Verdict::Provable(_))
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Verdict::Provable(p) => p.as_ref(),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Provable(_) => "provable",
            Verdict::Unprovable => "unprovable",
            Verdict::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    /// Reconstruct a proof for provable goals. Proofs of some families grow
    /// exponentially, so benchmarks turn this off.
    pub build_proof: bool,
    pub timeout: Option<Duration>,
    /// Restrict forward search to sequents allowed by the strengthened
    /// sub-formula property.
    pub forward_filter: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            build_proof: true,
            timeout: None,
            forward_filter: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algo {
    Bwf,
    Fwf,
    Diag,
}

impl Algo {
    pub const ALL: [Algo; 3] = [Algo::Bwf, Algo::Fwf, Algo::Diag];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Bwf => "bwf",
            Algo::Fwf => "fwf",
            Algo::Diag => "diag",
        }
    }

    pub fn from_name(name: &str) -> Option<Algo> {
        Algo::ALL.into_iter().find(|a| a.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("OLf search has no {0} sequents")]
    UnsupportedKind(&'static str),
}

// Interned sub-formulas.

type Id = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    Var(u32),
    NegVar(u32),
    And(Id, Id),
    Or(Id, Id),
    Top,
    Bot,
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    formulas: Vec<Formula>,
    index: HashMap<Node, Id>,
    vars: HashMap<VarId, u32>,
    var_names: Vec<VarId>,
}

impl Arena {
    fn var(&mut self, x: &VarId) -> u32 {
        if let Some(&v) = self.vars.get(x) {
            return v;
        }
        let v = self.var_names.len() as u32;
        self.var_names.push(x.clone());
        self.vars.insert(x.clone(), v);
        v
    }

    fn intern(&mut self, f: &Formula) -> Id {
        let node = match f {
            Formula::Var(x) => Node::Var(self.var(x)),
            Formula::NegVar(x) => Node::NegVar(self.var(x)),
            Formula::And(a, b) => Node::And(self.intern(a), self.intern(b)),
            Formula::Or(a, b) => Node::Or(self.intern(a), self.intern(b)),
            Formula::Top => Node::Top,
            Formula::Bot => Node::Bot,
        };
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as Id;
        self.nodes.push(node);
        self.formulas.push(f.clone());
        self.index.insert(node, id);
        id
    }

    fn node(&self, id: Id) -> Node {
        self.nodes[id as usize]
    }

    fn formula(&self, id: Id) -> &Formula {
        &self.formulas[id as usize]
    }

    fn sync(&self, id: Id) -> bool {
        matches!(self.node(id), Node::Var(_) | Node::Or(..) | Node::Bot)
    }

    fn sync_or_neg_var(&self, id: Id) -> bool {
        matches!(self.node(id), Node::Var(_) | Node::NegVar(_) | Node::Or(..) | Node::Bot)
    }

    fn is_or(&self, id: Id) -> bool {
        matches!(self.node(id), Node::Or(..))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Kind {
    Rr,
    Rv,
    Fc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Key {
    kind: Kind,
    l: Id,
    r: Id,
}

fn key(kind: Kind, l: Id, r: Id) -> Key {
    Key { kind, l, r }
}

/// One rule instance concluding a sequent, with its premises.
#[derive(Debug, Clone, Copy)]
struct Just {
    rule: Rule,
    premises: [Option<Key>; 2],
}

impl Just {
    fn leaf(rule: Rule) -> Just {
        Just {
            rule,
            premises: [None, None],
        }
    }

    fn one(rule: Rule, p: Key) -> Just {
        Just {
            rule,
            premises: [Some(p), None],
        }
    }

    fn two(rule: Rule, p: Key, q: Key) -> Just {
        Just {
            rule,
            premises: [Some(p), Some(q)],
        }
    }
}

/// Rebuilds the OLf proof of `k` from per-sequent justifications.
fn reconstruct(ar: &Arena, k: Key, just: &dyn Fn(Key) -> Just) -> Proof {
    let j = just(k);
    let sub = |i: usize| reconstruct(ar, j.premises[i].expect("premise recorded"), just);
    let (l, r) = (ar.formula(k.l), ar.formula(k.r));
    match j.rule {
        Rule::AndRr => F.and_rr(sub(0), sub(1)),
        Rule::TopRr => F.top_rr(r),
        Rule::ReacRr => F.reac_rr(sub(0)),
        Rule::CwRr => F.cw_rr(sub(0), r),
        Rule::AndRv => F.and_rv(sub(0), sub(1)),
        Rule::TopRv => F.top_rv(l),
        Rule::CwRv => F.cw_rv(sub(0), l),
        Rule::D1 => F.d1(sub(0)),
        Rule::D2 => F.d2(sub(0)),
        Rule::Ax => match ar.node(k.r) {
            Node::Var(x) => F.ax(&ar.var_names[x as usize]),
            _ => unreachable!("axiom on a non-variable"),
        },
        Rule::Or1 | Rule::Or2 => {
            let Node::Or(a, b) = ar.node(k.r) else {
                unreachable!("or rule on a non-disjunction")
            };
            if j.rule == Rule::Or1 {
                F.or1(sub(0), ar.formula(b))
            } else {
                F.or2(ar.formula(a), sub(0))
            }
        }
        Rule::ReacF => F.reac_f(sub(0)),
        other => unreachable!("{other} is not an OLf rule"),
    }
}

struct Stop;

struct Clock {
    deadline: Option<Instant>,
}

impl Clock {
    fn new(timeout: Option<Duration>) -> Clock {
        Clock {
            deadline: timeout.map(|t| Instant::now() + t),
        }
    }

    fn tick(&self) -> Result<(), Stop> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Stop),
            _ => Ok(()),
        }
    }
}

// Backward search.

struct Bwf<'a> {
    ar: &'a Arena,
    memo: HashMap<Key, Option<Just>>,
    stats: SearchStats,
    depth: usize,
    clock: &'a Clock,
}

impl<'a> Bwf<'a> {
    fn new(ar: &'a Arena, clock: &'a Clock) -> Self {
        Bwf {
            ar,
            memo: HashMap::new(),
            stats: SearchStats::default(),
            depth: 0,
            clock,
        }
    }

    fn prove(&mut self, k: Key) -> Result<bool, Stop> {
        if let Some(e) = self.memo.get(&k) {
            return Ok(e.is_some());
        }
        self.clock.tick()?;
        self.stats.sequents_visited += 1;
        self.depth += 1;
        self.stats.max_depth = self.stats.max_depth.max(self.depth);
        let found = self.search(k);
        self.depth -= 1;
        let found = found?;
        self.memo.insert(k, found);
        Ok(found.is_some())
    }

    fn all(&mut self, rule: Rule, premises: &[Key]) -> Result<Option<Just>, Stop> {
        self.stats.apply(rule);
        for &p in premises {
            if !self.prove(p)? {
                return Ok(None);
            }
        }
        Ok(Some(match premises {
            [] => Just::leaf(rule),
            [p] => Just::one(rule, *p),
            [p, q] => Just::two(rule, *p, *q),
            _ => unreachable!(),
        }))
    }

    fn search(&mut self, k: Key) -> Result<Option<Just>, Stop> {
        let ar = self.ar;
        let (l, r) = (k.l, k.r);
        macro_rules! attempt {
            ($rule:expr, [$($p:expr),*]) => {
                if let Some(j) = self.all($rule, &[$($p),*])? {
                    return Ok(Some(j));
                }
            };
        }
        match k.kind {
            Kind::Rr => {
                match ar.node(l) {
                    Node::And(a, b) => attempt!(Rule::AndRr, [key(Kind::Rr, a, r), key(Kind::Rr, b, r)]),
                    Node::Top => attempt!(Rule::TopRr, []),
                    _ => {}
                }
                attempt!(Rule::ReacRr, [key(Kind::Rv, l, r)]);
                if ar.is_or(l) {
                    attempt!(Rule::CwRr, [key(Kind::Fc, l, l)]);
                }
            }
            Kind::Rv => {
                match ar.node(r) {
                    Node::And(a, b) => attempt!(Rule::AndRv, [key(Kind::Rv, l, a), key(Kind::Rv, l, b)]),
                    Node::Top if ar.sync_or_neg_var(l) => attempt!(Rule::TopRv, []),
                    _ => {}
                }
                if ar.is_or(r) && ar.sync_or_neg_var(l) {
                    attempt!(Rule::CwRv, [key(Kind::Fc, r, r)]);
                }
                if ar.sync(l) {
                    attempt!(Rule::D1, [key(Kind::Fc, r, l)]);
                }
                if ar.sync(r) {
                    attempt!(Rule::D2, [key(Kind::Fc, l, r)]);
                }
            }
            Kind::Fc => match ar.node(r) {
                Node::Var(x) => {
                    if ar.node(l) == Node::NegVar(x) {
                        attempt!(Rule::Ax, []);
                    }
                }
                Node::Or(a, b) => {
                    attempt!(Rule::Or1, [key(Kind::Fc, l, a)]);
                    attempt!(Rule::Or2, [key(Kind::Fc, l, b)]);
                }
                Node::Bot => {}
                Node::NegVar(_) | Node::Top | Node::And(..) => attempt!(Rule::ReacF, [key(Kind::Rv, l, r)]),
            },
        }
        Ok(None)
    }

    fn proof(&self, k: Key) -> Proof {
        reconstruct(self.ar, k, &|k| self.memo[&k].expect("proved sequent"))
    }
}

fn seq_key(ar: &mut Arena, s: &Sequent) -> Result<Key, SearchError> {
    let kind = match s.kind {
        SeqKind::Rr => Kind::Rr,
        SeqKind::Rv => Kind::Rv,
        SeqKind::Fc => Kind::Fc,
        other => return Err(SearchError::UnsupportedKind(other.name())),
    };
    Ok(key(kind, ar.intern(&s.left), ar.intern(&s.right)))
}

/// Decides an OLf sequent by backward search.
pub fn prove_bwf(s: &Sequent) -> Result<SearchOutcome, SearchError> {
    prove_bwf_with(s, &SearchConfig::default())
}

pub fn prove_bwf_with(s: &Sequent, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    let mut ar = Arena::default();
    let k = seq_key(&mut ar, s)?;
    let clock = Clock::new(cfg.timeout);
    let (verdict, mut stats) = with_big_stack(|| {
        let mut b = Bwf::new(&ar, &clock);
        let verdict = match b.prove(k) {
            Err(Stop) => Verdict::Timeout,
            Ok(false) => Verdict::Unprovable,
            Ok(true) => Verdict::Provable(cfg.build_proof.then(|| b.proof(k))),
        };
        b.stats.peak_memo = b.memo.len();
        (verdict, b.stats)
    });
    stats.elapsed = start.elapsed();
    Ok(SearchOutcome { verdict, stats })
}

/// Bounds on the branch length of any OLf proof of a sequent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchBound {
    /// The ψ measure of the sequent.
    pub psi: u128,
    /// `3(|A|+|B|)²`: no sequent repeats along a branch, and there are at
    /// most this many sequents over the sub-formulas.
    pub sequents: u128,
}

pub fn branch_bound(s: &Sequent) -> Result<BranchBound, SearchError> {
    let psi = psi(s).map_err(|e| SearchError::UnsupportedKind(e.0))?;
    let n = (s.left.size() + s.right.size()) as u128;
    Ok(BranchBound {
        psi,
        sequents: 3 * n * n,
    })
}

// Diagonal sequents.

/// First step of deciding `⊢ ⇑ A, A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposition {
    Unprovable,
    Provable,
    /// Provable iff both `⊢ ⇑ B, B` and `⊢ ⇑ C, C` are.
    Split(Formula, Formula),
    /// Provable iff `⊢ B∨C ⇓ B∨C` is.
    Focus(Formula),
}

pub fn diagonal_decompose(a: &Formula) -> Decomposition {
    match a {
        Formula::Var(_) | Formula::NegVar(_) | Formula::Bot => Decomposition::Unprovable,
        Formula::Top => Decomposition::Provable,
        Formula::And(b, c) => Decomposition::Split((**b).clone(), (**c).clone()),
        Formula::Or(..) => Decomposition::Focus(a.clone()),
    }
}

/// The residual focus goals `⊢ D ⇓ D` of `⊢ ⇑ A, A`, or `None` when the
/// decomposition hits an unprovable leaf.
fn focus_goals(a: &Formula, out: &mut Vec<Formula>) -> bool {
    match diagonal_decompose(a) {
        Decomposition::Unprovable => false,
        Decomposition::Provable => true,
        Decomposition::Split(b, c) => focus_goals(&b, out) && focus_goals(&c, out),
        Decomposition::Focus(d) => {
            if !out.contains(&d) {
                out.push(d);
            }
            true
        }
    }
}

/// Assembles `⊢ ⇑ E, D` for `E` a ∧/⊤ tree over the focus goals.
fn assemble(e: &Formula, d: &Formula, focus: &HashMap<Formula, Proof>) -> Proof {
    match e {
        Formula::Top => F.top_rr(d),
        Formula::And(a, b) => F.and_rr(assemble(a, d, focus), assemble(b, d, focus)),
        Formula::Or(..) => F.cw_rr(focus[e].clone(), d),
        _ => unreachable!("decomposition leaves are ⊤ or disjunctions"),
    }
}

/// Decides `⊢ ⇑ A, A` with the given algorithm.
pub fn prove_formula(a: &Formula, algo: Algo) -> SearchOutcome {
    prove_formula_with(a, algo, &SearchConfig::default())
}

pub fn prove_formula_with(a: &Formula, algo: Algo, cfg: &SearchConfig) -> SearchOutcome {
    if algo == Algo::Bwf {
        return prove_bwf_with(&Sequent::rr(a.clone(), a.clone()), cfg).expect("⇑-pair sequents are supported");
    }
    let start = Instant::now();
    let mut goals = Vec::new();
    if !focus_goals(a, &mut goals) {
        let stats = SearchStats {
            elapsed: start.elapsed(),
            ..SearchStats::default()
        };
        return SearchOutcome {
            verdict: Verdict::Unprovable,
            stats,
        };
    }
    let mut ar = Arena::default();
    let ids: Vec<Id> = goals.iter().map(|g| ar.intern(g)).collect();
    let clock = Clock::new(cfg.timeout);
    let (verdict, mut stats) = with_big_stack(|| {
        let mut stats = SearchStats::default();
        let mut proofs = HashMap::new();
        let mut bwf = Bwf::new(&ar, &clock);
        let mut verdict = None;
        for (g, &d) in goals.iter().zip(&ids) {
            let k = key(Kind::Fc, d, d);
            let found = match algo {
                Algo::Diag => bwf.prove(k).map(|ok| ok.then(|| cfg.build_proof.then(|| bwf.proof(k)))),
                _ => {
                    let mut fw = Fwf::new(&ar, d, cfg.forward_filter, &clock);
                    let r = fw.run().map(|ok| ok.then(|| cfg.build_proof.then(|| fw.proof(k))));
                    stats.absorb(std::mem::take(&mut fw.stats));
                    r
                }
            };
            match found {
                Err(Stop) => verdict = Some(Verdict::Timeout),
                Ok(None) => verdict = Some(Verdict::Unprovable),
                Ok(Some(p)) => {
                    if let Some(p) = p {
                        proofs.insert(g.clone(), p);
                    }
                }
            }
            if verdict.is_some() {
                break;
            }
        }
        if algo == Algo::Diag {
            bwf.stats.peak_memo = bwf.memo.len();
            stats.absorb(std::mem::take(&mut bwf.stats));
        }
        let verdict = verdict.unwrap_or_else(|| Verdict::Provable(cfg.build_proof.then(|| assemble(a, a, &proofs))));
        (verdict, stats)
    });
    stats.elapsed = start.elapsed();
    SearchOutcome { verdict, stats }
}

/// Decides `⊢ ⇑ A, A` by the diagonal decomposition and forward saturation.
pub fn prove_fwf(goal: &Formula) -> SearchOutcome {
    prove_formula(goal, Algo::Fwf)
}

// Forward search.

struct Fwf<'a> {
    ar: &'a Arena,
    goal: Id,
    filter: bool,
    clock: &'a Clock,
    subs: Vec<Id>,
    below_and: HashSet<Id>,
    below_or: HashSet<Id>,
    /// Disjunctions and conjunctions directly above each sub-formula, with
    /// whether it is their left child.
    or_parents: HashMap<Id, Vec<(Id, bool)>>,
    and_parents: HashMap<Id, Vec<(Id, bool)>>,
    derived: HashMap<Key, Just>,
    order: Vec<Key>,
    stats: SearchStats,
}

impl<'a> Fwf<'a> {
    fn new(ar: &'a Arena, goal: Id, filter: bool, clock: &'a Clock) -> Self {
        let mut subs = Vec::new();
        let mut seen = HashSet::new();
        let mut below_and = HashSet::new();
        let mut below_or = HashSet::new();
        let mut or_parents: HashMap<Id, Vec<(Id, bool)>> = HashMap::new();
        let mut and_parents: HashMap<Id, Vec<(Id, bool)>> = HashMap::new();
        let mut stack = vec![goal];
        while let Some(id) = stack.pop() {
            if !seen.insert(id) {
                continue;
            }
            subs.push(id);
            match ar.node(id) {
                Node::And(a, b) => {
                    below_and.extend([a, b]);
                    and_parents.entry(a).or_default().push((id, true));
                    and_parents.entry(b).or_default().push((id, false));
                    stack.extend([b, a]);
                }
                Node::Or(a, b) => {
                    below_or.extend([a, b]);
                    or_parents.entry(a).or_default().push((id, true));
                    or_parents.entry(b).or_default().push((id, false));
                    stack.extend([b, a]);
                }
                _ => {}
            }
        }
        Fwf {
            ar,
            goal,
            filter,
            clock,
            subs,
            below_and,
            below_or,
            or_parents,
            and_parents,
            derived: HashMap::new(),
            order: Vec::new(),
            stats: SearchStats::default(),
        }
    }

    fn allowed(&self, k: Key) -> bool {
        if !self.filter {
            return true;
        }
        if self.ar.sync(k.l) && k.l != self.goal && !self.below_and.contains(&k.l) {
            return false;
        }
        match k.kind {
            Kind::Fc => self.ar.sync(k.r) || self.below_or.contains(&k.r),
            Kind::Rv => !self.ar.sync(k.r) || self.below_and.contains(&k.r),
            Kind::Rr => false,
        }
    }

    fn add(&mut self, k: Key, j: Just) {
        if self.derived.contains_key(&k) || !self.allowed(k) {
            return;
        }
        self.stats.apply(j.rule);
        self.derived.insert(k, j);
        self.order.push(k);
    }

    fn run(&mut self) -> Result<bool, Stop> {
        let ar = self.ar;
        let target = key(Kind::Fc, self.goal, self.goal);
        let subs = self.subs.clone();
        let sn: Vec<Id> = subs.iter().copied().filter(|&x| ar.sync_or_neg_var(x)).collect();
        for &x in &subs {
            match ar.node(x) {
                Node::Var(v) => {
                    if let Some(&n) = ar.index.get(&Node::NegVar(v)) {
                        if subs.contains(&n) {
                            self.add(key(Kind::Fc, n, x), Just::leaf(Rule::Ax));
                        }
                    }
                }
                Node::Top => {
                    for &c in &sn {
                        self.add(key(Kind::Rv, c, x), Just::leaf(Rule::TopRv));
                    }
                }
                _ => {}
            }
        }
        let mut next = 0;
        while next < self.order.len() {
            if self.derived.contains_key(&target) {
                break;
            }
            self.clock.tick()?;
            let k = self.order[next];
            next += 1;
            self.stats.sequents_visited += 1;
            let (c, a) = (k.l, k.r);
            match k.kind {
                Kind::Fc => {
                    for &(p, left) in self.or_parents.get(&a).cloned().unwrap_or_default().iter() {
                        let rule = if left { Rule::Or1 } else { Rule::Or2 };
                        self.add(key(Kind::Fc, c, p), Just::one(rule, k));
                    }
                    if ar.sync(a) {
                        self.add(key(Kind::Rv, a, c), Just::one(Rule::D1, k));
                        self.add(key(Kind::Rv, c, a), Just::one(Rule::D2, k));
                    }
                    if c == a && ar.is_or(a) {
                        for &x in &sn {
                            self.add(key(Kind::Rv, x, a), Just::one(Rule::CwRv, k));
                        }
                    }
                }
                Kind::Rv => {
                    if !ar.sync(a) {
                        self.add(key(Kind::Fc, c, a), Just::one(Rule::ReacF, k));
                    }
                    for &(p, left) in self.and_parents.get(&a).cloned().unwrap_or_default().iter() {
                        let Node::And(x, y) = ar.node(p) else { unreachable!() };
                        let other = key(Kind::Rv, c, if left { y } else { x });
                        if self.derived.contains_key(&other) {
                            let (first, second) = if left { (k, other) } else { (other, k) };
                            self.add(key(Kind::Rv, c, p), Just::two(Rule::AndRv, first, second));
                        }
                    }
                }
                Kind::Rr => unreachable!("forward search derives no ⇑-pair sequents"),
            }
        }
        self.stats.peak_memo = self.derived.len();
        Ok(self.derived.contains_key(&target))
    }

    fn proof(&self, k: Key) -> Proof {
        reconstruct(self.ar, k, &|k| self.derived[&k])
    }

    fn sequents(&self) -> Vec<Sequent> {
        self.order
            .iter()
            .map(|k| {
                let kind = if k.kind == Kind::Fc { SeqKind::Fc } else { SeqKind::Rv };
                Sequent::new(kind, self.ar.formula(k.l).clone(), self.ar.formula(k.r).clone())
            })
            .collect()
    }
}

/// Every sequent derived by forward saturation towards `⊢ D ⇓ D`, in
/// derivation order.
pub fn fwf_derivations(d: &Formula, filter: bool) -> Vec<Sequent> {
    let mut ar = Arena::default();
    let goal = ar.intern(d);
    let clock = Clock::new(None);
    let mut fw = Fwf::new(&ar, goal, filter, &clock);
    let _ = fw.run();
    fw.sequents()
}

/// Whether a ⇓ or ⇑ sequent is allowed inside a proof of `⊢ D ⇓ D` by the
/// strengthened sub-formula property.
pub fn strengthened_subformula_ok(d: &Formula, s: &Sequent) -> bool {
    let ctx = d.contexted_subformulas();
    let has = |f: &Formula, c: Context| ctx.contains(&(f.clone(), c));
    let sub = |f: &Formula| ctx.iter().any(|(g, _)| g == f);
    if !sub(&s.left) || !sub(&s.right) {
        return false;
    }
    if s.left.is_sync() && s.left != *d && !has(&s.left, Context::BelowAnd) {
        return false;
    }
    match s.kind {
        SeqKind::Fc => s.right.is_sync() || has(&s.right, Context::BelowOr),
        SeqKind::Rv => !s.right.is_sync() || has(&s.right, Context::BelowAnd),
        _ => false,
    }
}

// Loop-checking searches.

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleVerdict {
    Provable(Proof),
    Unprovable,
    BudgetExceeded,
}

impl OracleVerdict {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            OracleVerdict::Provable(p) => Some(p),
            _ => None,
        }
    }
}

type Expansion = Vec<(Rule, Vec<Sequent>)>;

/// Depth-first search with loop detection along the current branch.
struct LoopSearch {
    calculus: Calculus,
    expand: fn(&Sequent) -> Expansion,
    rng: Option<ChaCha8Rng>,
    proved: HashMap<Sequent, (Rule, Vec<Sequent>)>,
    failed: HashSet<Sequent>,
    path: HashMap<Sequent, usize>,
    steps: usize,
    budget: usize,
}

struct OutOfBudget;

impl LoopSearch {
    /// Returns whether `s` is provable and the smallest depth of an ancestor
    /// whose presence on the path cut the search short.
    fn go(&mut self, s: &Sequent, depth: usize) -> Result<(bool, usize), OutOfBudget> {
        if self.proved.contains_key(s) {
            return Ok((true, usize::MAX));
        }
        if self.failed.contains(s) {
            return Ok((false, usize::MAX));
        }
        if let Some(&d) = self.path.get(s) {
            return Ok((false, d));
        }
        self.path.insert(s.clone(), depth);
        let mut alts = (self.expand)(s);
        if let Some(rng) = &mut self.rng {
            alts.shuffle(rng);
        }
        let mut low = usize::MAX;
        for (rule, premises) in alts {
            self.steps += 1;
            if self.steps > self.budget {
                self.path.remove(s);
                return Err(OutOfBudget);
            }
            let mut ok = true;
            for p in &premises {
                let (found, l) = self.go(p, depth + 1)?;
                low = low.min(l);
                if !found {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.path.remove(s);
                self.proved.insert(s.clone(), (rule, premises));
                return Ok((true, usize::MAX));
            }
        }
        self.path.remove(s);
        if low >= depth {
            self.failed.insert(s.clone());
            Ok((false, usize::MAX))
        } else {
            Ok((false, low))
        }
    }

    fn proof(&self, s: &Sequent) -> Proof {
        let (rule, premises) = &self.proved[s];
        let sub = premises.iter().map(|p| self.proof(p)).collect();
        Proof::new(self.calculus, *rule, s.clone(), sub)
    }

    fn run(calculus: Calculus, expand: fn(&Sequent) -> Expansion, s: &Sequent, budget: usize, seed: Option<u64>) -> OracleVerdict {
        with_big_stack(|| {
            let mut ls = LoopSearch {
                calculus,
                expand,
                rng: seed.map(ChaCha8Rng::seed_from_u64),
                proved: HashMap::new(),
                failed: HashSet::new(),
                path: HashMap::new(),
                steps: 0,
                budget,
            };
            match ls.go(s, 0) {
                Err(OutOfBudget) => OracleVerdict::BudgetExceeded,
                Ok((false, _)) => OracleVerdict::Unprovable,
                Ok((true, _)) => OracleVerdict::Provable(ls.proof(s)),
            }
        })
    }
}

fn expand_ol(s: &Sequent) -> Expansion {
    let (a, b) = (&s.left, &s.right);
    let ol = |l: &Formula, r: &Formula| Sequent::ol(l.clone(), r.clone());
    let mut out = Vec::new();
    if *a == b.negate() {
        out.push((Rule::Ax, vec![]));
    }
    match a {
        Formula::Top => out.push((Rule::Top, vec![])),
        Formula::And(x, y) => out.push((Rule::And, vec![ol(x, b), ol(y, b)])),
        Formula::Or(x, y) => {
            out.push((Rule::Or1, vec![ol(x, b)]));
            out.push((Rule::Or2, vec![ol(y, b)]));
        }
        _ => {}
    }
    if a != b {
        out.push((Rule::Ex, vec![ol(b, a)]));
        out.push((Rule::Cw, vec![ol(a, a)]));
    }
    out
}

fn expand_olf0(s: &Sequent) -> Expansion {
    let (l, r) = (&s.left, &s.right);
    let mk = |k: SeqKind, x: &Formula, y: &Formula| Sequent::new(k, x.clone(), y.clone());
    let mut out = Vec::new();
    match s.kind {
        SeqKind::Rr => {
            match l {
                Formula::And(a, b) => out.push((Rule::AndRr, vec![mk(SeqKind::Rr, a, r), mk(SeqKind::Rr, b, r)])),
                Formula::Top => out.push((Rule::TopRr, vec![])),
                _ => {}
            }
            out.push((Rule::ReacRr, vec![mk(SeqKind::Rv, l, r)]));
        }
        SeqKind::Rv => {
            match r {
                Formula::And(a, b) => out.push((Rule::AndRv, vec![mk(SeqKind::Rv, l, a), mk(SeqKind::Rv, l, b)])),
                Formula::Top if l.is_sync_or_neg_var() => out.push((Rule::TopRv, vec![])),
                _ => {}
            }
            out.push((Rule::ReacRv, vec![mk(SeqKind::Ll, l, r)]));
        }
        SeqKind::Ll => {
            if l != r {
                if r.is_sync_or_neg_var() {
                    out.push((Rule::CwL, vec![mk(SeqKind::Ll, l, l)]));
                }
                if l.is_sync_or_neg_var() {
                    out.push((Rule::CwR, vec![mk(SeqKind::Ll, r, r)]));
                }
            }
            if l.is_sync() {
                out.push((Rule::DL, vec![mk(SeqKind::Fc, r, l)]));
            }
            if r.is_sync() {
                out.push((Rule::DR, vec![mk(SeqKind::Fc, l, r)]));
            }
        }
        SeqKind::Fc => match r {
            Formula::Var(x) => {
                if *l == Formula::NegVar(x.clone()) {
                    out.push((Rule::Ax, vec![]));
                }
            }
            Formula::Or(a, b) => {
                out.push((Rule::Or1, vec![mk(SeqKind::Fc, l, a)]));
                out.push((Rule::Or2, vec![mk(SeqKind::Fc, l, b)]));
            }
            Formula::Bot => {}
            _ => out.push((Rule::ReacF, vec![mk(SeqKind::Rv, l, r)])),
        },
        SeqKind::Ol => {}
    }
    out
}

/// Exhaustive OL search with loop detection, bounded by `budget` rule
/// attempts. Used to cross-validate the focused procedures.
pub fn prove_ol_oracle(s: &Sequent, budget: usize) -> OracleVerdict {
    if s.kind != SeqKind::Ol {
        return OracleVerdict::Unprovable;
    }
    LoopSearch::run(Calculus::Ol, expand_ol, s, budget, None)
}

/// OLf0 search with loop detection. With a seed, alternatives are tried in
/// a seeded random order, which yields varied proofs of the same sequent.
pub fn prove_olf0(s: &Sequent, budget: usize, seed: Option<u64>) -> OracleVerdict {
    if s.kind == SeqKind::Ol {
        return OracleVerdict::Unprovable;
    }
    LoopSearch::run(Calculus::Olf0, expand_olf0, s, budget, seed)
}
