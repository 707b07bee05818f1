//! Decision procedure returning either a Liel proof or a countermodel of
//! minimal depth.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::formula::Formula;
use crate::kripke::KripkeModel;
use crate::liel::ProofTree;
use crate::search::{Search, SearchOptions, SearchResult, SearchStats};
use crate::sequent::{Logic, Sequent};

/// Exactly one of a proof and a countermodel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Proof(ProofTree),
    Countermodel(KripkeModel),
}

impl Outcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, Outcome::Proof(_))
    }

    pub fn proof(&self) -> Option<&ProofTree> {
        match self {
            Outcome::Proof(p) => Some(p),
            Outcome::Countermodel(_) => None,
        }
    }

    pub fn countermodel(&self) -> Option<&KripkeModel> {
        match self {
            Outcome::Proof(_) => None,
            Outcome::Countermodel(m) => Some(m),
        }
    }
}

impl From<SearchResult> for Outcome {
    fn from(r: SearchResult) -> Self {
        match r {
            SearchResult::Proved(p) => Outcome::Proof(p),
            SearchResult::Refuted { model, .. } => Outcome::Countermodel(model),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
enum OutcomeRepr {
    Valid { proof: ProofTree },
    Invalid { model: KripkeModel },
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let repr = match self.clone() {
            Outcome::Proof(proof) => OutcomeRepr::Valid { proof },
            Outcome::Countermodel(model) => OutcomeRepr::Invalid { model },
        };
        repr.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        Ok(match OutcomeRepr::deserialize(deserializer)? {
            OutcomeRepr::Valid { proof } => Outcome::Proof(proof),
            OutcomeRepr::Invalid { model } => Outcome::Countermodel(model),
        })
    }
}

/// Searches for a proof of `s`; on failure returns a countermodel whose root
/// satisfies `s`.
pub fn piel(s: &Sequent, logic: Logic) -> Outcome {
    piel_with(s, logic, SearchOptions::default()).0
}

/// [`piel`] with explicit options, also reporting search statistics.
pub fn piel_with(s: &Sequent, logic: Logic, options: SearchOptions) -> (Outcome, SearchStats) {
    let mut search = Search::new(logic, options);
    let outcome = search.run(s).into();
    (outcome, search.stats())
}

/// Decides validity of `f`: a proof of `⟨; ⇒ f⟩` or a countermodel.
pub fn decide(f: &Formula, logic: Logic) -> Outcome {
    piel(&Sequent::goal(f.clone()), logic)
}
