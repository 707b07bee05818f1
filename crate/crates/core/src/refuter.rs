//! The refutation calculi Riel (for IEL) and Riel⁻ (for IEL⁻): refutation
//! trees, their checker, model extraction, and the combined procedure `pr`
//! that returns a proof or a refutation.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::formula::Formula;
use crate::kripke::{glue_kl, glue_reaching, single_world, KripkeModel};
use crate::liel::{
    check_global, kl_premises, kr_premises, rule_instantiations, Defect, DefectKind, LielRule,
    ProofTree, KR_SUBSET_LIMIT,
};
use crate::search::{flat_root_reflexive, kr_right_premises, search, SearchResult};
use crate::sequent::{riel_axiom, riel_blocked, Axiom, Logic, Sequent};

/// Rules of Riel. Every rule except `Glue`/`eGlue` has one premise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RielRule {
    AndL,
    AndR1,
    AndR2,
    OrL1,
    OrL2,
    OrR,
    ImpL1,
    ImpL2,
    ImpR1,
    KL1,
    KL2,
    KR1,
    #[serde(rename = "eKL")]
    EKL,
    #[serde(rename = "eKR")]
    EKR,
    #[serde(rename = "eAndL")]
    EAndL,
    #[serde(rename = "eAndR1")]
    EAndR1,
    #[serde(rename = "eAndR2")]
    EAndR2,
    #[serde(rename = "eOrL1")]
    EOrL1,
    #[serde(rename = "eOrL2")]
    EOrL2,
    #[serde(rename = "eOrR")]
    EOrR,
    #[serde(rename = "eImpL1")]
    EImpL1,
    #[serde(rename = "eImpL2")]
    EImpL2,
    #[serde(rename = "eImpR1")]
    EImpR1,
    Glue,
    #[serde(rename = "eGlue")]
    EGlue,
}

impl RielRule {
    /// The refutation rule that keeps premise `index` of a Liel rule.
    pub fn from_liel(rule: LielRule, index: usize) -> Option<RielRule> {
        use LielRule as L;
        use RielRule as R;
        Some(match (rule, index) {
            (L::AndL, 0) => R::AndL,
            (L::OrR, 0) => R::OrR,
            (L::EAndL, 0) => R::EAndL,
            (L::EOrR, 0) => R::EOrR,
            (L::EKL, 0) => R::EKL,
            (L::EKR, 0) => R::EKR,
            (L::AndR, 0) => R::AndR1,
            (L::AndR, 1) => R::AndR2,
            (L::OrL, 0) => R::OrL1,
            (L::OrL, 1) => R::OrL2,
            (L::EAndR, 0) => R::EAndR1,
            (L::EAndR, 1) => R::EAndR2,
            (L::EOrL, 0) => R::EOrL1,
            (L::EOrL, 1) => R::EOrL2,
            (L::ImpL, 0) => R::ImpL1,
            (L::ImpL, 1) => R::ImpL2,
            (L::EImpL, 0) => R::EImpL1,
            (L::EImpL, 1) => R::EImpL2,
            (L::ImpR, 0) => R::ImpR1,
            (L::EImpR, 0) => R::EImpR1,
            (L::KR, 0) => R::KR1,
            (L::KL, 0) => R::KL1,
            (L::KL, 1) => R::KL2,
            _ => return None,
        })
    }

    /// The Liel rule and premise index a single-premise rule is taken from.
    pub fn liel_source(self) -> Option<(LielRule, usize)> {
        use LielRule as L;
        use RielRule as R;
        Some(match self {
            R::AndL => (L::AndL, 0),
            R::OrR => (L::OrR, 0),
            R::EAndL => (L::EAndL, 0),
            R::EOrR => (L::EOrR, 0),
            R::EKL => (L::EKL, 0),
            R::EKR => (L::EKR, 0),
            R::AndR1 => (L::AndR, 0),
            R::AndR2 => (L::AndR, 1),
            R::OrL1 => (L::OrL, 0),
            R::OrL2 => (L::OrL, 1),
            R::EAndR1 => (L::EAndR, 0),
            R::EAndR2 => (L::EAndR, 1),
            R::EOrL1 => (L::EOrL, 0),
            R::EOrL2 => (L::EOrL, 1),
            R::ImpL1 => (L::ImpL, 0),
            R::ImpL2 => (L::ImpL, 1),
            R::EImpL1 => (L::EImpL, 0),
            R::EImpL2 => (L::EImpL, 1),
            R::ImpR1 => (L::ImpR, 0),
            R::EImpR1 => (L::EImpR, 0),
            R::KR1 => (L::KR, 0),
            R::KL1 => (L::KL, 0),
            R::KL2 => (L::KL, 1),
            R::Glue | R::EGlue => return None,
        })
    }

    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }

    pub fn in_logic(self, logic: Logic) -> bool {
        !matches!(self, RielRule::KL1 | RielRule::KL2) || logic == Logic::Iel
    }
}

impl fmt::Display for RielRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// A Riel derivation. Leaves carry `Sat`, `eSat` or `kSat`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Refutation {
    pub sequent: Sequent,
    pub rule: Option<RielRule>,
    pub axiom: Option<Axiom>,
    pub children: Vec<Refutation>,
}

impl Refutation {
    pub fn leaf(sequent: Sequent, axiom: Axiom) -> Refutation {
        Refutation {
            sequent,
            rule: None,
            axiom: Some(axiom),
            children: Vec::new(),
        }
    }

    pub fn node(sequent: Sequent, rule: RielRule, children: Vec<Refutation>) -> Refutation {
        Refutation {
            sequent,
            rule: Some(rule),
            axiom: None,
            children,
        }
    }

    /// Length of the longest root-to-leaf path, in edges.
    pub fn depth(&self) -> usize {
        self.children
            .iter()
            .map(|c| 1 + c.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, indent: usize, out: &mut String) {
        let label = match (self.rule, self.axiom) {
            (Some(r), _) => r.name(),
            (None, Some(a)) => a.name().to_owned(),
            (None, None) => "?".to_owned(),
        };
        out.push_str(&format!("{}{}   ({})\n", "  ".repeat(indent), self.sequent, label));
        for c in &self.children {
            c.write_text(indent + 1, out);
        }
    }

    fn visit<'a>(&'a self, path: &mut Vec<usize>, f: &mut impl FnMut(&'a Refutation, &[usize])) {
        f(self, path);
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            c.visit(path, f);
            path.pop();
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RefutationRepr {
    calculus: String,
    sequent: Sequent,
    rule: Option<RielRule>,
    axiom: Option<Axiom>,
    children: Vec<RefutationRepr>,
}

impl From<&Refutation> for RefutationRepr {
    fn from(r: &Refutation) -> Self {
        RefutationRepr {
            calculus: "riel".to_owned(),
            sequent: r.sequent.clone(),
            rule: r.rule,
            axiom: r.axiom,
            children: r.children.iter().map(RefutationRepr::from).collect(),
        }
    }
}

impl TryFrom<RefutationRepr> for Refutation {
    type Error = String;

    fn try_from(repr: RefutationRepr) -> Result<Self, Self::Error> {
        if repr.calculus != "riel" {
            return Err(format!("expected calculus \"riel\", found {:?}", repr.calculus));
        }
        Ok(Refutation {
            sequent: repr.sequent,
            rule: repr.rule,
            axiom: repr.axiom,
            children: repr
                .children
                .into_iter()
                .map(Refutation::try_from)
                .collect::<Result<_, _>>()?,
        })
    }
}

impl Serialize for Refutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RefutationRepr::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Refutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = RefutationRepr::deserialize(deserializer)?;
        Refutation::try_from(repr).map_err(serde::de::Error::custom)
    }
}

/// Premises required by `Glue` (non-E) or `eGlue` (E) on `s`, or `None`
/// when the side conditions on `Γ` and `Δ` fail.
pub fn glue_instance(s: &Sequent) -> Option<GlueInstance> {
    let k_ok = !s.e;
    let gamma_ok = s
        .gamma
        .iter()
        .all(|f| f.is_var() || f.is_imp() || (k_ok && f.is_k()));
    let delta_ok = s
        .delta
        .iter()
        .all(|f| f.is_atom() || f.is_imp() || (k_ok && f.is_k()));
    if !gamma_ok || !delta_ok {
        return None;
    }
    let imp_left_premises = rule_instantiations(
        if s.e { LielRule::EImpL } else { LielRule::ImpL },
        s,
        Logic::Iel,
    )
    .into_iter()
    .map(|i| i.premises[2].clone())
    .collect();
    let imp_right_premises = rule_instantiations(
        if s.e { LielRule::EImpR } else { LielRule::ImpR },
        s,
        Logic::Iel,
    )
    .into_iter()
    .map(|i| i.premises[1].clone())
    .collect();
    let k_right_premises = kr_right_premises(s).into_iter().collect();
    Some(GlueInstance {
        imp_left_premises,
        imp_right_premises,
        k_right_premises,
    })
}

/// The premise families of a `Glue`/`eGlue` application.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GlueInstance {
    /// `⟨B; Θ, Γ∖{A→B} ⇒ A⟩` for each `A→B ∈ Γ`.
    pub imp_left_premises: Vec<Sequent>,
    /// `⟨; A, Θ, Γ ⇒ B⟩` for each `A→B ∈ Δ`.
    pub imp_right_premises: Vec<Sequent>,
    /// `⟨; Θ, Γ₂ ⇒ B⟩` for each `K B ∈ Δ` (`Glue` only).
    pub k_right_premises: Vec<Sequent>,
}

impl GlueInstance {
    pub fn premises(&self) -> Vec<Sequent> {
        self.imp_left_premises
            .iter()
            .chain(&self.imp_right_premises)
            .chain(&self.k_right_premises)
            .cloned()
            .collect()
    }
}

/// Whether a single-premise refutation rule yields `child` from `s`.
fn valid_single(rule: RielRule, s: &Sequent, child: &Sequent, logic: Logic) -> Result<(), String> {
    let (source, index) = rule.liel_source().expect("single-premise rule");
    if source.on_e_sequents() != s.e {
        return Err(format!("{rule} does not apply to `{s}`"));
    }
    let ok = match source {
        LielRule::KL => {
            if rule == RielRule::KL2 {
                // Only sequents whose left side holds nothing but variables
                // and K-formulas and whose right side is atomic.
                let shape = s.delta.iter().all(Formula::is_atom)
                    && s.gamma.iter().all(|f| f.is_var() || f.is_k());
                if !shape {
                    return Err(format!("KL2 needs atomic right side and left side of variables and K-formulas in `{s}`"));
                }
            }
            s.gamma
                .iter()
                .filter(|f| f.is_k())
                .any(|p| &kl_premises(s, p)[index] == child)
        }
        LielRule::KR => {
            // Any subset of the left K-formulas may be extracted.
            let ks: Vec<Formula> = s.gamma.iter().filter(|f| f.is_k()).cloned().collect();
            s.delta.iter().filter(|f| f.is_k()).any(|target| {
                if ks.len() > KR_SUBSET_LIMIT {
                    return kr_premises(s, target, &ks)[0] == *child;
                }
                (0u32..1 << ks.len()).any(|mask| {
                    let subset: Vec<Formula> = ks
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, f)| f.clone())
                        .collect();
                    kr_premises(s, target, &subset)[0] == *child
                })
            })
        }
        _ => rule_instantiations(source, s, logic)
            .iter()
            .any(|inst| inst.premises[index] == *child),
    };
    if ok {
        Ok(())
    } else {
        Err(format!("child is not a premise of {rule} on `{s}`"))
    }
}

/// Validates a Riel (or Riel⁻) refutation.
pub fn check_refutation(t: &Refutation, logic: Logic) -> Result<(), Vec<Defect>> {
    let mut defects = Vec::new();
    let mut nodes = Vec::new();
    t.visit(&mut Vec::new(), &mut |node, path| {
        nodes.push((path.to_vec(), &node.sequent));
        let defect = |kind, detail: String| Defect {
            kind,
            path: path.to_vec(),
            detail,
        };
        let s = &node.sequent;
        match (node.rule, node.axiom) {
            (None, Some(claimed)) => {
                if !node.children.is_empty() {
                    defects.push(defect(DefectKind::MalformedNode, "axiom node has children".into()));
                }
                match riel_axiom(s, logic) {
                    Some(actual) if actual == claimed => {}
                    Some(actual) => defects.push(defect(
                        DefectKind::WrongAxiom,
                        format!("`{s}` is an instance of {actual}, not {claimed}"),
                    )),
                    None => defects.push(defect(
                        DefectKind::NonAxiomLeaf,
                        format!("`{s}` is not a refutation axiom"),
                    )),
                }
            }
            (Some(rule), None) => {
                if !rule.in_logic(logic) {
                    defects.push(defect(
                        DefectKind::RuleNotInLogic,
                        format!("{rule} is not a rule for {logic}"),
                    ));
                    return;
                }
                if riel_blocked(s) {
                    defects.push(defect(
                        DefectKind::ProvisoViolation,
                        format!("`{s}` has false on the left or shares formulas across sides"),
                    ));
                    return;
                }
                if riel_axiom(s, logic).is_some() {
                    defects.push(defect(
                        DefectKind::RuleOnTerminal,
                        format!("{rule} applied to axiom `{s}`"),
                    ));
                    return;
                }
                let children: Vec<Sequent> =
                    node.children.iter().map(|c| c.sequent.clone()).collect();
                match rule {
                    RielRule::Glue | RielRule::EGlue => {
                        if (rule == RielRule::EGlue) != s.e {
                            defects.push(defect(
                                DefectKind::InvalidRule,
                                format!("{rule} does not apply to `{s}`"),
                            ));
                            return;
                        }
                        let Some(instance) = glue_instance(s) else {
                            defects.push(defect(
                                DefectKind::InvalidRule,
                                format!("side conditions of {rule} fail on `{s}`"),
                            ));
                            return;
                        };
                        let mut expected = instance.premises();
                        if expected.is_empty() {
                            defects.push(defect(
                                DefectKind::EmptyGlue,
                                format!("{rule} on `{s}` has no premises"),
                            ));
                            return;
                        }
                        let mut actual = children;
                        expected.sort();
                        actual.sort();
                        if expected != actual {
                            defects.push(defect(
                                DefectKind::InvalidRule,
                                format!("children are not the premises of {rule} on `{s}`"),
                            ));
                        }
                    }
                    _ => {
                        if children.len() != 1 {
                            defects.push(defect(
                                DefectKind::InvalidRule,
                                format!("{rule} takes exactly one premise"),
                            ));
                        } else if let Err(detail) = valid_single(rule, s, &children[0], logic) {
                            defects.push(defect(DefectKind::InvalidRule, detail));
                        }
                    }
                }
            }
            (None, None) if node.children.is_empty() => defects.push(defect(
                DefectKind::NonAxiomLeaf,
                format!("`{s}` is an unjustified leaf"),
            )),
            _ => defects.push(defect(
                DefectKind::MalformedNode,
                "node must carry exactly one of rule and axiom".into(),
            )),
        }
    });
    check_global(&t.sequent, t.depth(), &nodes, &mut defects);
    if defects.is_empty() {
        Ok(())
    } else {
        Err(defects)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("invalid refutation: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Defect>),
}

/// Builds a countermodel from a checked refutation; its root satisfies the
/// refutation's root sequent.
pub fn extract_model(t: &Refutation, logic: Logic) -> Result<KripkeModel, ExtractError> {
    check_refutation(t, logic).map_err(ExtractError::Invalid)?;
    Ok(extract_unchecked(t, logic))
}

fn extract_unchecked(t: &Refutation, logic: Logic) -> KripkeModel {
    let s = &t.sequent;
    let vars = s.gamma_vars();
    match t.rule {
        None => single_world(&vars, flat_root_reflexive(s, logic)),
        Some(RielRule::KL2) => glue_kl(&vars, &extract_unchecked(&t.children[0], logic))
            .expect("checked refutation keeps root variables"),
        Some(RielRule::Glue | RielRule::EGlue) => {
            let reach_set = kr_right_premises(s);
            let reach: Vec<bool> = t
                .children
                .iter()
                .map(|c| reach_set.contains(&c.sequent))
                .collect();
            let models: Vec<KripkeModel> = t
                .children
                .iter()
                .map(|c| extract_unchecked(c, logic))
                .collect();
            glue_reaching(&vars, &models, &reach, s.e)
                .expect("checked refutation keeps root variables")
        }
        Some(_) => extract_unchecked(&t.children[0], logic),
    }
}

/// Result of [`pr`]: a proof, or a refutation with the model it yields.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum PrOutcome {
    Valid {
        proof: ProofTree,
    },
    Invalid {
        refutation: Refutation,
        model: KripkeModel,
    },
}

impl PrOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, PrOutcome::Valid { .. })
    }
}

/// Proves `s` in Liel or refutes it in Riel (the ⁻ variants under IEL⁻).
pub fn pr(s: &Sequent, logic: Logic) -> PrOutcome {
    match search(s, logic) {
        SearchResult::Proved(proof) => PrOutcome::Valid { proof },
        SearchResult::Refuted { model, refutation } => PrOutcome::Invalid { refutation, model },
    }
}
