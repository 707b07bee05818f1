//! Three-compartment sequents `⟨Θ; Γ ⇒ Δ⟩` with an E-flag, and their
//! classification into axioms, flat sequents and active sequents.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{self, Formula, ParseError};

/// The two logics handled by the toolkit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Logic {
    #[serde(rename = "iel")]
    Iel,
    #[serde(rename = "iel-")]
    IelMinus,
}

impl Logic {
    pub fn name(self) -> &'static str {
        match self {
            Logic::Iel => "iel",
            Logic::IelMinus => "iel-",
        }
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown logic {0:?} (expected `iel` or `iel-`)")]
pub struct UnknownLogic(pub String);

impl FromStr for Logic {
    type Err = UnknownLogic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "iel" => Ok(Logic::Iel),
            "iel-" | "ielminus" | "iel-minus" => Ok(Logic::IelMinus),
            _ => Err(UnknownLogic(s.to_owned())),
        }
    }
}

/// A sequent `⟨Θ; Γ ⇒ Δ⟩`, or `⟨Θ; Γ ⇒ Δ⟩_E` when `e` is set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Sequent {
    pub theta: BTreeSet<Formula>,
    pub gamma: BTreeSet<Formula>,
    pub delta: BTreeSet<Formula>,
    pub e: bool,
}

impl Sequent {
    pub fn new<T, G, D>(theta: T, gamma: G, delta: D, e: bool) -> Sequent
    where
        T: IntoIterator<Item = Formula>,
        G: IntoIterator<Item = Formula>,
        D: IntoIterator<Item = Formula>,
    {
        Sequent {
            theta: theta.into_iter().collect(),
            gamma: gamma.into_iter().collect(),
            delta: delta.into_iter().collect(),
            e,
        }
    }

    /// `⟨; ⇒ f⟩`.
    pub fn goal(f: Formula) -> Sequent {
        Sequent::new([], [], [f], false)
    }

    /// Every formula of every compartment (with repetitions across
    /// compartments).
    pub fn formulas(&self) -> impl Iterator<Item = &Formula> {
        self.theta.iter().chain(&self.gamma).chain(&self.delta)
    }

    /// Total number of connectives over all three compartments.
    pub fn connective_count(&self) -> usize {
        self.formulas().map(Formula::connective_count).sum()
    }

    /// Variables occurring in `Γ`.
    pub fn gamma_vars(&self) -> BTreeSet<String> {
        self.gamma
            .iter()
            .filter_map(|f| f.var_name().map(str::to_owned))
            .collect()
    }

    /// Subformulas of every formula in the sequent.
    pub fn subformulas(&self) -> BTreeSet<Formula> {
        let mut out = BTreeSet::new();
        for f in self.formulas() {
            out.extend(f.subformulas());
        }
        out
    }

    fn bottom_in_gamma(&self) -> bool {
        self.gamma.iter().any(Formula::is_bottom)
    }

    fn gamma_meets_delta(&self) -> bool {
        self.gamma.iter().any(|f| self.delta.contains(f))
    }

    fn delta_atomic(&self) -> bool {
        self.delta.iter().all(Formula::is_atom)
    }
}

fn join(set: &BTreeSet<Formula>) -> String {
    set.iter().map(Formula::text).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [
            join(&self.theta),
            ";".to_owned(),
            join(&self.gamma),
            "=>".to_owned(),
            join(&self.delta),
        ];
        let text = parts
            .iter()
            .filter(|p| !p.is_empty())
            .cloned()
            .collect::<Vec<_>>()
            .join(" ");
        f.write_str(&text)?;
        if self.e {
            f.write_str(" [E]")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentParseError {
    #[error("expected `<theta> ; <gamma> => <delta>`")]
    Shape,
    #[error("in formula {text:?}: {source}")]
    Formula {
        text: String,
        #[source]
        source: ParseError,
    },
}

fn parse_list(text: &str) -> Result<BTreeSet<Formula>, SequentParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(BTreeSet::new());
    }
    text.split(',')
        .map(|item| {
            formula::parse(item).map_err(|source| SequentParseError::Formula {
                text: item.trim().to_owned(),
                source,
            })
        })
        .collect()
}

impl FromStr for Sequent {
    type Err = SequentParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut body = s.trim();
        let mut e = false;
        if let Some(stripped) = body.strip_suffix("[E]") {
            body = stripped;
            e = true;
        }
        let (theta, rest) = body.split_once(';').ok_or(SequentParseError::Shape)?;
        let (gamma, delta) = rest.split_once("=>").ok_or(SequentParseError::Shape)?;
        Ok(Sequent {
            theta: parse_list(theta)?,
            gamma: parse_list(gamma)?,
            delta: parse_list(delta)?,
            e,
        })
    }
}

/// Axiom names of both calculi.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axiom {
    Irr,
    Id,
    #[serde(rename = "eIrr")]
    EIrr,
    #[serde(rename = "eId")]
    EId,
    Sat,
    #[serde(rename = "eSat")]
    ESat,
    #[serde(rename = "kSat")]
    KSat,
}

impl Axiom {
    pub fn name(self) -> &'static str {
        match self {
            Axiom::Irr => "Irr",
            Axiom::Id => "Id",
            Axiom::EIrr => "eIrr",
            Axiom::EId => "eId",
            Axiom::Sat => "Sat",
            Axiom::ESat => "eSat",
            Axiom::KSat => "kSat",
        }
    }

    pub fn is_liel(self) -> bool {
        matches!(self, Axiom::Irr | Axiom::Id | Axiom::EIrr | Axiom::EId)
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Calculus {
    /// Proofs of validity.
    Liel,
    /// Refutations.
    Riel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerminalClass {
    Axiom(Axiom),
    Flat,
    Active,
}

/// The Liel axiom instantiated by `s`, if any. `Irr` wins over `Id`.
pub fn liel_axiom(s: &Sequent) -> Option<Axiom> {
    if s.bottom_in_gamma() {
        Some(if s.e { Axiom::EIrr } else { Axiom::Irr })
    } else if s.gamma_meets_delta() {
        Some(if s.e { Axiom::EId } else { Axiom::Id })
    } else {
        None
    }
}

/// Whether a non-axiom sequent is flat, i.e. no Liel rule applies to it.
pub fn liel_flat(s: &Sequent, logic: Logic) -> bool {
    let gamma_ok = s.gamma.iter().all(|f| {
        f.is_var() || (logic == Logic::IelMinus && !s.e && f.is_k())
    });
    gamma_ok && s.delta_atomic() && !s.gamma_meets_delta()
}

/// The Riel axiom instantiated by `s`, if any.
///
/// Under IEL⁻ a non-E leaf is `Sat` when `Γ ⊆ V` and `kSat` when `Γ` also
/// holds K-formulas.
pub fn riel_axiom(s: &Sequent, logic: Logic) -> Option<Axiom> {
    if !s.delta_atomic() || s.gamma_meets_delta() {
        return None;
    }
    if s.gamma.iter().all(Formula::is_var) {
        return Some(if s.e { Axiom::ESat } else { Axiom::Sat });
    }
    let k_sat = logic == Logic::IelMinus
        && !s.e
        && s.gamma.iter().all(|f| f.is_var() || f.is_k());
    k_sat.then_some(Axiom::KSat)
}

/// True when the global Riel proviso blocks every rule: `⊥ ∈ Γ` or
/// `Γ ∩ Δ ≠ ∅`.
pub fn riel_blocked(s: &Sequent) -> bool {
    s.bottom_in_gamma() || s.gamma_meets_delta()
}

pub fn classify(s: &Sequent, calculus: Calculus, logic: Logic) -> TerminalClass {
    match calculus {
        Calculus::Liel => match liel_axiom(s) {
            Some(ax) => TerminalClass::Axiom(ax),
            None if liel_flat(s, logic) => TerminalClass::Flat,
            None => TerminalClass::Active,
        },
        Calculus::Riel => match riel_axiom(s, logic) {
            Some(ax) => TerminalClass::Axiom(ax),
            None if riel_blocked(s) => TerminalClass::Flat,
            None => TerminalClass::Active,
        },
    }
}
