//! Orthologic formulas in negation normal form.
//!
//! Negation is only a constructor on variables; [`Formula::negate`] extends
//! it to every formula by De Morgan duality. Formulas are immutable and share
//! their subtrees through [`Arc`], so cloning is cheap.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A propositional variable name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(Arc<str>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarIdError {
    #[error("empty variable name")]
    Empty,
    #[error("invalid character {ch:?} in variable name {name:?}")]
    InvalidChar { name: String, ch: char },
    #[error("{0:?} is a reserved constant and cannot name a variable")]
    Reserved(String),
}

impl VarId {
    pub fn new(name: &str) -> Result<Self, VarIdError> {
        let mut chars = name.chars();
        let first = chars.next().ok_or(VarIdError::Empty)?;
        if !first.is_ascii_alphabetic() {
            return Err(VarIdError::InvalidChar {
                name: name.to_string(),
                ch: first,
            });
        }
        if let Some(ch) = chars.find(|c| !(c.is_ascii_alphanumeric() || *c == '_')) {
            return Err(VarIdError::InvalidChar {
                name: name.to_string(),
                ch,
            });
        }
        if name == "T" || name == "F" {
            return Err(VarIdError::Reserved(name.to_string()));
        }
        Ok(VarId(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Polarity of a formula, determined by its main connective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Synchronous,
    Asynchronous,
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(VarId),
    NegVar(VarId),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Top,
    Bot,
}

impl Formula {
    /// Builds a variable, panicking on an invalid name. Intended for literals
    /// in code; use [`VarId::new`] for untrusted input.
    pub fn var(name: &str) -> Formula {
        Formula::Var(VarId::new(name).expect("invalid variable name"))
    }

    pub fn neg_var(name: &str) -> Formula {
        Formula::NegVar(VarId::new(name).expect("invalid variable name"))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    /// De Morgan dual: `¬¬X = X`, `¬⊤ = ⊥`, `¬(A∧B) = ¬A∨¬B`, and so on.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Var(x) => Formula::NegVar(x.clone()),
            Formula::NegVar(x) => Formula::Var(x.clone()),
            Formula::And(a, b) => Formula::Or(Arc::new(a.negate()), Arc::new(b.negate())),
            Formula::Or(a, b) => Formula::And(Arc::new(a.negate()), Arc::new(b.negate())),
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
        }
    }

    pub fn polarity(&self) -> Polarity {
        match self {
            Formula::Var(_) | Formula::Bot | Formula::Or(..) => Polarity::Synchronous,
            Formula::NegVar(_) | Formula::Top | Formula::And(..) => Polarity::Asynchronous,
        }
    }

    pub fn is_sync(&self) -> bool {
        self.polarity() == Polarity::Synchronous
    }

    pub fn is_async(&self) -> bool {
        self.polarity() == Polarity::Asynchronous
    }

    pub fn is_neg_var(&self) -> bool {
        matches!(self, Formula::NegVar(_))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    /// Side condition "(s) or (n)": synchronous or a negated variable.
    pub fn is_sync_or_neg_var(&self) -> bool {
        self.is_sync() || self.is_neg_var()
    }

    pub fn is_or(&self) -> bool {
        matches!(self, Formula::Or(..))
    }

    pub fn is_and(&self) -> bool {
        matches!(self, Formula::And(..))
    }

    /// Number of symbols. A negated variable counts two symbols (`¬` and the
    /// variable), every other leaf one, and each binary connective one.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 1,
            Formula::NegVar(_) => 2,
            Formula::And(a, b) | Formula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// The branch-length measure: literals and constants weigh 1, `∧` adds,
    /// `∨` doubles both sides. Saturates at `u128::MAX`, which is only
    /// reachable for formulas with more than 127 symbols.
    pub fn phi(&self) -> u128 {
        match self {
            Formula::Var(_) | Formula::NegVar(_) | Formula::Top | Formula::Bot => 1,
            Formula::And(a, b) => a.phi().saturating_add(b.phi()),
            Formula::Or(a, b) => a
                .phi()
                .saturating_mul(2)
                .saturating_add(b.phi().saturating_mul(2)),
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarId>) {
        match self {
            Formula::Var(x) | Formula::NegVar(x) => {
                out.insert(x.clone());
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Top | Formula::Bot => {}
        }
    }

    /// Distinct sub-formulas, including the formula itself.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if out.insert(f.clone()) {
                if let Formula::And(a, b) | Formula::Or(a, b) = f {
                    stack.push(a);
                    stack.push(b);
                }
            }
        }
        out
    }

    /// Every sub-formula occurrence tagged with the connective immediately
    /// above it, deduplicated.
    pub fn contexted_subformulas(&self) -> BTreeSet<(Formula, Context)> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(self, Context::Root)];
        while let Some((f, ctx)) = stack.pop() {
            if out.insert((f.clone(), ctx)) {
                match f {
                    Formula::And(a, b) => {
                        stack.push((a, Context::BelowAnd));
                        stack.push((b, Context::BelowAnd));
                    }
                    Formula::Or(a, b) => {
                        stack.push((a, Context::BelowOr));
                        stack.push((b, Context::BelowOr));
                    }
                    _ => {}
                }
            }
        }
        out
    }
}

/// Position of a sub-formula occurrence relative to its parent connective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Context {
    Root,
    BelowAnd,
    BelowOr,
}

// Precedence levels for printing: `|` binds loosest.
const PREC_OR: u8 = 0;
const PREC_AND: u8 = 1;
const PREC_ATOM: u8 = 2;

impl Formula {
    fn prec(&self) -> u8 {
        match self {
            Formula::Or(..) => PREC_OR,
            Formula::And(..) => PREC_AND,
            _ => PREC_ATOM,
        }
    }

    fn fmt_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        if self.prec() < min_prec {
            f.write_str("(")?;
            self.fmt_at(f, PREC_OR)?;
            return f.write_str(")");
        }
        match self {
            Formula::Var(x) => write!(f, "{x}"),
            Formula::NegVar(x) => write!(f, "~{x}"),
            Formula::Top => f.write_str("T"),
            Formula::Bot => f.write_str("F"),
            // Both connectives are left-associative: the right operand needs
            // one level tighter binding.
            Formula::And(a, b) => {
                a.fmt_at(f, PREC_AND)?;
                f.write_str(" & ")?;
                b.fmt_at(f, PREC_ATOM)
            }
            Formula::Or(a, b) => {
                a.fmt_at(f, PREC_OR)?;
                f.write_str(" | ")?;
                b.fmt_at(f, PREC_AND)
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_at(f, PREC_OR)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected}, found {found}")]
    Expected {
        expected: &'static str,
        found: String,
    },
    #[error("reserved constant {0:?} used as an identifier")]
    Reserved(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token<'a> {
    Ident(&'a str),
    Top,
    Bot,
    Not,
    And,
    Or,
    LParen,
    RParen,
}

impl Token<'_> {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("identifier {s:?}"),
            Token::Top => "\"T\"".into(),
            Token::Bot => "\"F\"".into(),
            Token::Not => "\"~\"".into(),
            Token::And => "\"&\"".into(),
            Token::Or => "\"|\"".into(),
            Token::LParen => "\"(\"".into(),
            Token::RParen => "\")\"".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token<'_>)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'~' => Token::Not,
            b'&' => Token::And,
            b'|' => Token::Or,
            b'(' => Token::LParen,
            b')' => Token::RParen,
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let word = &text[start..i];
                let tok = match word {
                    "T" => Token::Top,
                    "F" => Token::Bot,
                    _ => Token::Ident(word),
                };
                out.push((start, tok));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError {
                    offset: i,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let offset = self.offset();
        let Some((_, tok)) = self.tokens.get(self.pos).cloned() else {
            return Err(ParseError {
                offset,
                kind: ParseErrorKind::UnexpectedEnd,
            });
        };
        self.pos += 1;
        match tok {
            Token::Not => Ok(self.unary()?.negate()),
            Token::Top => Ok(Formula::Top),
            Token::Bot => Ok(Formula::Bot),
            Token::Ident(name) => match VarId::new(name) {
                Ok(x) => Ok(Formula::Var(x)),
                Err(_) => Err(ParseError {
                    offset,
                    kind: ParseErrorKind::Reserved(name.to_string()),
                }),
            },
            Token::LParen => {
                let inner = self.disjunction()?;
                match self.peek() {
                    Some(Token::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    other => Err(ParseError {
                        offset: self.offset(),
                        kind: match other {
                            None => ParseErrorKind::UnexpectedEnd,
                            Some(t) => ParseErrorKind::Expected {
                                expected: "\")\"",
                                found: t.describe(),
                            },
                        },
                    }),
                }
            }
            other => Err(ParseError {
                offset,
                kind: ParseErrorKind::Expected {
                    expected: "a formula",
                    found: other.describe(),
                },
            }),
        }
    }
}

/// Parses the ASCII formula syntax. `~` applied to a compound formula is
/// pushed to the variables with [`Formula::negate`].
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let f = parser.disjunction()?;
    if let Some(tok) = parser.peek() {
        return Err(ParseError {
            offset: parser.offset(),
            kind: ParseErrorKind::Expected {
                expected: "end of input",
                found: tok.describe(),
            },
        });
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Formula {
        Formula::var("X")
    }
    fn y() -> Formula {
        Formula::var("Y")
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            parse("~(X | Y)").unwrap(),
            Formula::and(Formula::neg_var("X"), Formula::neg_var("Y"))
        );
        assert_eq!(parse("T").unwrap(), Formula::Top);
        assert_eq!(
            parse("X & Y | Z").unwrap(),
            Formula::or(Formula::and(x(), y()), Formula::var("Z"))
        );
        assert_eq!(parse("~~X").unwrap(), x());
        assert_eq!(parse("~T").unwrap(), Formula::Bot);
        assert_eq!(
            parse("X | Y | Z").unwrap(),
            Formula::or(Formula::or(x(), y()), Formula::var("Z"))
        );
    }

    #[test]
    fn parse_errors_carry_offsets() {
        let e = parse("X & ").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        assert_eq!(e.offset, 4);
        let e = parse("X $ Y").unwrap_err();
        assert_eq!(e.offset, 2);
        assert_eq!(e.kind, ParseErrorKind::UnexpectedChar('$'));
        let e = parse("(X | Y").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnexpectedEnd);
        assert!(parse("X Y").is_err());
        assert!(parse("").is_err());
        assert!(parse("1X").is_err());
    }

    #[test]
    fn print_examples() {
        let f = Formula::and(Formula::neg_var("X"), Formula::neg_var("Y"));
        assert_eq!(f.to_string(), "~X & ~Y");
        assert_eq!(Formula::or(x(), Formula::neg_var("X")).to_string(), "X | ~X");
        assert_eq!(Formula::Bot.to_string(), "F");
        let nested = Formula::and(x(), Formula::and(y(), Formula::Top));
        assert_eq!(nested.to_string(), "X & (Y & T)");
        let mixed = Formula::and(Formula::or(x(), y()), Formula::var("Z"));
        assert_eq!(mixed.to_string(), "(X | Y) & Z");
    }

    #[test]
    fn vars_reject_reserved() {
        assert!(matches!(VarId::new("T"), Err(VarIdError::Reserved(_))));
        assert!(matches!(VarId::new("F"), Err(VarIdError::Reserved(_))));
        assert!(VarId::new("T1").is_ok());
        assert!(VarId::new("x_2").is_ok());
        assert!(VarId::new("").is_err());
        assert!(VarId::new("a-b").is_err());
    }

    #[test]
    fn negation_examples() {
        assert_eq!(
            Formula::or(x(), Formula::neg_var("Y")).negate(),
            Formula::and(Formula::neg_var("X"), y())
        );
        assert_eq!(Formula::Top.negate(), Formula::Bot);
        assert_eq!(x().negate(), Formula::neg_var("X"));
    }

    #[test]
    fn polarity_examples() {
        assert_eq!(Formula::Bot.polarity(), Polarity::Synchronous);
        assert_eq!(Formula::Top.polarity(), Polarity::Asynchronous);
        assert_eq!(Formula::neg_var("X").polarity(), Polarity::Asynchronous);
        assert_eq!(x().polarity(), Polarity::Synchronous);
        assert_eq!(Formula::or(x(), y()).polarity(), Polarity::Synchronous);
        assert_eq!(Formula::and(x(), y()).polarity(), Polarity::Asynchronous);
    }

    #[test]
    fn size_and_phi_examples() {
        assert_eq!(x().size(), 1);
        assert_eq!(Formula::and(x(), y()).size(), 3);
        assert_eq!(Formula::or(Formula::Top, Formula::Bot).size(), 3);
        assert_eq!(Formula::neg_var("X").size(), 2);
        assert_eq!(Formula::Top.phi(), 1);
        assert_eq!(Formula::or(x(), y()).phi(), 4);
        assert_eq!(Formula::and(Formula::or(x(), y()), Formula::Top).phi(), 5);
    }

    #[test]
    fn contexted_examples() {
        let or = Formula::or(x(), y());
        let got = or.contexted_subformulas();
        let want: BTreeSet<_> = [
            (or.clone(), Context::Root),
            (x(), Context::BelowOr),
            (y(), Context::BelowOr),
        ]
        .into_iter()
        .collect();
        assert_eq!(got, want);

        let and = Formula::and(x(), y());
        let want: BTreeSet<_> = [
            (and.clone(), Context::Root),
            (x(), Context::BelowAnd),
            (y(), Context::BelowAnd),
        ]
        .into_iter()
        .collect();
        assert_eq!(and.contexted_subformulas(), want);

        let z = Formula::var("Z");
        let f = Formula::or(Formula::and(x(), y()), z.clone());
        let want: BTreeSet<_> = [
            (f.clone(), Context::Root),
            (Formula::and(x(), y()), Context::BelowOr),
            (z, Context::BelowOr),
            (x(), Context::BelowAnd),
            (y(), Context::BelowAnd),
        ]
        .into_iter()
        .collect();
        assert_eq!(f.contexted_subformulas(), want);
    }

    #[test]
    fn same_formula_in_two_contexts() {
        // X occurs both below ∧ and below ∨.
        let f = Formula::or(x(), Formula::and(x(), y()));
        let set = f.contexted_subformulas();
        assert!(set.contains(&(x(), Context::BelowOr)));
        assert!(set.contains(&(x(), Context::BelowAnd)));
    }
}
