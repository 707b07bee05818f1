//! Formulas over `{∧, ∨, →, ⊥, K}`: construction, concrete syntax and
//! structural measures.
//!
//! A [`Formula`] is an immutable, reference-counted tree. Every node caches
//! its minimally parenthesised rendering, and that rendering doubles as the
//! formula's identity: equality, hashing and ordering are all defined on the
//! rendered text. Because `parse(render(f)) == f`, two formulas are equal
//! exactly when they render identically, and sets of formulas iterate in
//! lexicographic order of their text (the canonical order used by every
//! "first applicable" choice in proof search).
//!
//! Concrete syntax:
//!
//! ```text
//! formula := disj ('->' formula)?        right associative
//! disj    := conj ('|' conj)*            left associative
//! conj    := unary ('&' unary)*          left associative
//! unary   := 'K' unary | '~' unary | atom | 'false' | '_|_' | '(' formula ')'
//! atom    := [a-z][a-zA-Z0-9_]*          (except `false`)
//! ```
//!
//! `~A` is sugar for `A -> false`; there is no negation node.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// The shape of a formula node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Var(String),
    Bottom,
    And(Formula, Formula),
    Or(Formula, Formula),
    Imp(Formula, Formula),
    K(Formula),
}

struct Node {
    kind: FormulaKind,
    text: String,
    connectives: usize,
}

/// An immutable propositional epistemic formula.
#[derive(Clone)]
pub struct Formula(Arc<Node>);

/// Returns true if `name` is a legal propositional variable name.
pub fn is_valid_atom(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "false"
}

// Binding strength used by the printer.
const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_PREFIX: u8 = 4;

impl Formula {
    fn from_kind(kind: FormulaKind) -> Formula {
        let connectives = match &kind {
            FormulaKind::Var(_) | FormulaKind::Bottom => 0,
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Imp(a, b) => {
                1 + a.connective_count() + b.connective_count()
            }
            FormulaKind::K(a) => 1 + a.connective_count(),
        };
        let text = render_kind(&kind);
        Formula(Arc::new(Node {
            kind,
            text,
            connectives,
        }))
    }

    /// A propositional variable.
    ///
    /// Panics if `name` is not a legal atom (see [`is_valid_atom`]); use
    /// [`Formula::try_var`] for untrusted input.
    pub fn var(name: impl Into<String>) -> Formula {
        let name = name.into();
        assert!(is_valid_atom(&name), "invalid variable name {name:?}");
        Formula::from_kind(FormulaKind::Var(name))
    }

    pub fn try_var(name: impl Into<String>) -> Result<Formula, ParseError> {
        let name = name.into();
        if is_valid_atom(&name) {
            Ok(Formula::from_kind(FormulaKind::Var(name)))
        } else {
            Err(ParseError::InvalidAtom { name })
        }
    }

    pub fn bottom() -> Formula {
        Formula::from_kind(FormulaKind::Bottom)
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::from_kind(FormulaKind::And(a, b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::from_kind(FormulaKind::Or(a, b))
    }

    pub fn imp(a: Formula, b: Formula) -> Formula {
        Formula::from_kind(FormulaKind::Imp(a, b))
    }

    pub fn k(a: Formula) -> Formula {
        Formula::from_kind(FormulaKind::K(a))
    }

    /// `a -> false`.
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::imp(a, Formula::bottom())
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0.kind
    }

    /// The canonical (minimally parenthesised) text of this formula.
    pub fn text(&self) -> &str {
        &self.0.text
    }

    /// Number of occurrences of `∧`, `∨`, `→` and `K`.
    pub fn connective_count(&self) -> usize {
        self.0.connectives
    }

    pub fn is_var(&self) -> bool {
        matches!(self.kind(), FormulaKind::Var(_))
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self.kind(), FormulaKind::Bottom)
    }

    /// Variables and `⊥`.
    pub fn is_atom(&self) -> bool {
        self.is_var() || self.is_bottom()
    }

    pub fn is_imp(&self) -> bool {
        matches!(self.kind(), FormulaKind::Imp(..))
    }

    pub fn is_k(&self) -> bool {
        matches!(self.kind(), FormulaKind::K(_))
    }

    pub fn var_name(&self) -> Option<&str> {
        match self.kind() {
            FormulaKind::Var(name) => Some(name),
            _ => None,
        }
    }

    /// The body of a `K`-formula.
    pub fn k_body(&self) -> Option<&Formula> {
        match self.kind() {
            FormulaKind::K(a) => Some(a),
            _ => None,
        }
    }

    /// All subtrees, including `self`.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas(&self, out: &mut BTreeSet<Formula>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self.kind() {
            FormulaKind::Var(_) | FormulaKind::Bottom => {}
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Imp(a, b) => {
                a.collect_subformulas(out);
                b.collect_subformulas(out);
            }
            FormulaKind::K(a) => a.collect_subformulas(out),
        }
    }

    /// Names of the variables occurring in the formula.
    pub fn variables(&self) -> BTreeSet<String> {
        self.subformulas()
            .iter()
            .filter_map(|f| f.var_name().map(str::to_owned))
            .collect()
    }

    /// True when `K` does not occur.
    pub fn is_k_free(&self) -> bool {
        match self.kind() {
            FormulaKind::Var(_) | FormulaKind::Bottom => true,
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Imp(a, b) => {
                a.is_k_free() && b.is_k_free()
            }
            FormulaKind::K(_) => false,
        }
    }

    fn precedence(&self) -> u8 {
        match self.kind() {
            FormulaKind::Var(_) | FormulaKind::Bottom | FormulaKind::K(_) => PREC_PREFIX,
            FormulaKind::Imp(_, b) if b.is_bottom() => PREC_PREFIX,
            FormulaKind::And(..) => PREC_AND,
            FormulaKind::Or(..) => PREC_OR,
            FormulaKind::Imp(..) => PREC_IMP,
        }
    }

    fn operand(&self, min_prec: u8) -> String {
        if self.precedence() >= min_prec {
            self.text().to_owned()
        } else {
            format!("({})", self.text())
        }
    }
}

fn render_kind(kind: &FormulaKind) -> String {
    match kind {
        FormulaKind::Var(name) => name.clone(),
        FormulaKind::Bottom => "false".to_owned(),
        FormulaKind::Imp(a, b) if b.is_bottom() => format!("~{}", a.operand(PREC_PREFIX)),
        FormulaKind::K(a) => {
            if a.precedence() == PREC_PREFIX {
                format!("K {}", a.text())
            } else {
                format!("K({})", a.text())
            }
        }
        FormulaKind::And(a, b) => format!("{} & {}", a.operand(PREC_AND), b.operand(PREC_PREFIX)),
        FormulaKind::Or(a, b) => format!("{} | {}", a.operand(PREC_OR), b.operand(PREC_AND)),
        FormulaKind::Imp(a, b) => format!("{} -> {}", a.operand(PREC_OR), b.operand(PREC_IMP)),
    }
}

/// Renders `f` in the concrete syntax accepted by [`parse`].
pub fn render(f: &Formula) -> String {
    f.text().to_owned()
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.text == other.0.text
    }
}

impl Eq for Formula {}

impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.text.hash(state)
    }
}

impl PartialOrd for Formula {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Formula {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.text.cmp(&other.0.text)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.text())
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({})", self.text())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty formula")]
    Empty,
    #[error("unexpected character {found:?} at position {position}")]
    UnexpectedChar { position: usize, found: char },
    #[error("expected {expected} at position {position}, found {found}")]
    Unexpected {
        position: usize,
        expected: &'static str,
        found: String,
    },
    #[error("invalid variable name {name:?}")]
    InvalidAtom { name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Atom(String),
    False,
    K,
    Tilde,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Atom(name) => format!("atom `{name}`"),
            Token::False => "`false`".into(),
            Token::K => "`K`".into(),
            Token::Tilde => "`~`".into(),
            Token::And => "`&`".into(),
            Token::Or => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '(' => tokens.push((start, Token::LParen)),
            ')' => tokens.push((start, Token::RParen)),
            '&' => tokens.push((start, Token::And)),
            '|' => tokens.push((start, Token::Or)),
            '~' => tokens.push((start, Token::Tilde)),
            'K' => tokens.push((start, Token::K)),
            '-' if chars.get(i + 1) == Some(&'>') => {
                tokens.push((start, Token::Arrow));
                i += 1;
            }
            '_' if chars.get(i + 1) == Some(&'|') && chars.get(i + 2) == Some(&'_') => {
                tokens.push((start, Token::False));
                i += 2;
            }
            c if c.is_ascii_lowercase() => {
                let mut end = i + 1;
                while end < chars.len() && (chars[end].is_ascii_alphanumeric() || chars[end] == '_')
                {
                    end += 1;
                }
                let word: String = chars[i..end].iter().collect();
                if word == "false" {
                    tokens.push((start, Token::False));
                } else {
                    tokens.push((start, Token::Atom(word)));
                }
                i = end;
                continue;
            }
            other => {
                return Err(ParseError::UnexpectedChar {
                    position: start,
                    found: other,
                })
            }
        }
        i += 1;
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn found(&self) -> String {
        self.peek()
            .map_or_else(|| "end of input".to_owned(), Token::describe)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Arrow) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
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
        let position = self.position();
        let token = self.peek().cloned();
        match token {
            Some(Token::K) => {
                self.pos += 1;
                Ok(Formula::k(self.unary()?))
            }
            Some(Token::Tilde) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Token::Atom(name)) => {
                self.pos += 1;
                Formula::try_var(name)
            }
            Some(Token::False) => {
                self.pos += 1;
                Ok(Formula::bottom())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(&Token::RParen) {
                    return Err(ParseError::Unexpected {
                        position: self.position(),
                        expected: "`)`",
                        found: self.found(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(ParseError::Unexpected {
                position,
                expected: "a formula",
                found: self.found(),
            }),
        }
    }
}

/// Parses a formula from its concrete syntax.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.chars().count(),
    };
    let formula = parser.implication()?;
    if parser.pos < parser.tokens.len() {
        return Err(ParseError::Unexpected {
            position: parser.position(),
            expected: "end of input",
            found: parser.found(),
        });
    }
    Ok(formula)
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

/// JSON shape: `{"op": "var"|"bot"|"and"|"or"|"imp"|"k", ...}`.
#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum FormulaRepr {
    Var { name: String },
    Bot,
    And { left: Box<FormulaRepr>, right: Box<FormulaRepr> },
    Or { left: Box<FormulaRepr>, right: Box<FormulaRepr> },
    Imp { left: Box<FormulaRepr>, right: Box<FormulaRepr> },
    K { body: Box<FormulaRepr> },
}

impl From<&Formula> for FormulaRepr {
    fn from(f: &Formula) -> Self {
        let pair = |a: &Formula, b: &Formula| (Box::new(a.into()), Box::new(b.into()));
        match f.kind() {
            FormulaKind::Var(name) => FormulaRepr::Var { name: name.clone() },
            FormulaKind::Bottom => FormulaRepr::Bot,
            FormulaKind::And(a, b) => {
                let (left, right) = pair(a, b);
                FormulaRepr::And { left, right }
            }
            FormulaKind::Or(a, b) => {
                let (left, right) = pair(a, b);
                FormulaRepr::Or { left, right }
            }
            FormulaKind::Imp(a, b) => {
                let (left, right) = pair(a, b);
                FormulaRepr::Imp { left, right }
            }
            FormulaKind::K(a) => FormulaRepr::K {
                body: Box::new(a.into()),
            },
        }
    }
}

impl TryFrom<FormulaRepr> for Formula {
    type Error = ParseError;

    fn try_from(repr: FormulaRepr) -> Result<Self, Self::Error> {
        Ok(match repr {
            FormulaRepr::Var { name } => Formula::try_var(name)?,
            FormulaRepr::Bot => Formula::bottom(),
            FormulaRepr::And { left, right } => {
                Formula::and((*left).try_into()?, (*right).try_into()?)
            }
            FormulaRepr::Or { left, right } => {
                Formula::or((*left).try_into()?, (*right).try_into()?)
            }
            FormulaRepr::Imp { left, right } => {
                Formula::imp((*left).try_into()?, (*right).try_into()?)
            }
            FormulaRepr::K { body } => Formula::k((*body).try_into()?),
        })
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FormulaRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Formula {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FormulaRepr::deserialize(deserializer)?;
        Formula::try_from(repr).map_err(serde::de::Error::custom)
    }
}
