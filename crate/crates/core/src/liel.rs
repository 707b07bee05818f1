//! The proof calculi Liel (for IEL) and Liel⁻ (for IEL⁻): rule
//! instantiation, proof trees and an independent proof checker.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, FormulaKind};
use crate::sequent::{classify, liel_axiom, Axiom, Calculus, Logic, Sequent, TerminalClass};

/// Rules of Liel. `e`-prefixed rules act on E-sequents only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LielRule {
    AndL,
    AndR,
    OrL,
    OrR,
    ImpL,
    ImpR,
    KL,
    KR,
    #[serde(rename = "eAndL")]
    EAndL,
    #[serde(rename = "eAndR")]
    EAndR,
    #[serde(rename = "eOrL")]
    EOrL,
    #[serde(rename = "eOrR")]
    EOrR,
    #[serde(rename = "eImpL")]
    EImpL,
    #[serde(rename = "eImpR")]
    EImpR,
    #[serde(rename = "eKL")]
    EKL,
    #[serde(rename = "eKR")]
    EKR,
}

impl LielRule {
    pub const ALL: [LielRule; 16] = [
        LielRule::AndL,
        LielRule::OrR,
        LielRule::EAndL,
        LielRule::EOrR,
        LielRule::EKL,
        LielRule::EKR,
        LielRule::OrL,
        LielRule::AndR,
        LielRule::EOrL,
        LielRule::EAndR,
        LielRule::ImpR,
        LielRule::KR,
        LielRule::EImpR,
        LielRule::ImpL,
        LielRule::EImpL,
        LielRule::KL,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LielRule::AndL => "AndL",
            LielRule::AndR => "AndR",
            LielRule::OrL => "OrL",
            LielRule::OrR => "OrR",
            LielRule::ImpL => "ImpL",
            LielRule::ImpR => "ImpR",
            LielRule::KL => "KL",
            LielRule::KR => "KR",
            LielRule::EAndL => "eAndL",
            LielRule::EAndR => "eAndR",
            LielRule::EOrL => "eOrL",
            LielRule::EOrR => "eOrR",
            LielRule::EImpL => "eImpL",
            LielRule::EImpR => "eImpR",
            LielRule::EKL => "eKL",
            LielRule::EKR => "eKR",
        }
    }

    /// Whether the rule applies to E-sequents (as opposed to plain ones).
    pub fn on_e_sequents(self) -> bool {
        matches!(
            self,
            LielRule::EAndL
                | LielRule::EAndR
                | LielRule::EOrL
                | LielRule::EOrR
                | LielRule::EImpL
                | LielRule::EImpR
                | LielRule::EKL
                | LielRule::EKR
        )
    }

    pub fn in_logic(self, logic: Logic) -> bool {
        self != LielRule::KL || logic == Logic::Iel
    }
}

impl fmt::Display for LielRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One bottom-up application of a rule to a sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instantiation {
    pub rule: LielRule,
    /// The principal formula; for `KR` followed by the extracted `K A_i`.
    pub principal: Vec<Formula>,
    pub premises: Vec<Sequent>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("sequent `{0}` is terminal")]
    Terminal(Sequent),
}

fn without(set: &BTreeSet<Formula>, f: &Formula) -> BTreeSet<Formula> {
    let mut out = set.clone();
    out.remove(f);
    out
}

fn with<'a>(set: &BTreeSet<Formula>, extra: impl IntoIterator<Item = &'a Formula>) -> BTreeSet<Formula> {
    let mut out = set.clone();
    out.extend(extra.into_iter().cloned());
    out
}

fn union<'a>(sets: impl IntoIterator<Item = &'a BTreeSet<Formula>>) -> BTreeSet<Formula> {
    sets.into_iter().flatten().cloned().collect()
}

fn sq(theta: BTreeSet<Formula>, gamma: BTreeSet<Formula>, delta: BTreeSet<Formula>, e: bool) -> Sequent {
    Sequent {
        theta,
        gamma,
        delta,
        e,
    }
}

fn single(f: &Formula) -> BTreeSet<Formula> {
    BTreeSet::from([f.clone()])
}

/// Premises of `KR` on `s` for target `K b ∈ Δ`, extracting `extracted ⊆ Γ`.
pub fn kr_premises(s: &Sequent, target: &Formula, extracted: &[Formula]) -> Vec<Sequent> {
    let b = target.k_body().expect("KR target is a K-formula");
    let mut rest = s.gamma.clone();
    for k in extracted {
        rest.remove(k);
    }
    let bodies: Vec<&Formula> = extracted.iter().filter_map(Formula::k_body).collect();
    let delta = without(&s.delta, target);
    vec![
        sq(
            s.theta.clone(),
            with(&rest, bodies.iter().copied()),
            with(&delta, [b]),
            true,
        ),
        sq(
            BTreeSet::new(),
            with(&union([&rest, &s.theta]), bodies.iter().copied()),
            single(b),
            false,
        ),
    ]
}

/// Premises of `KL` on `s` for principal `K a ∈ Γ`.
pub fn kl_premises(s: &Sequent, principal: &Formula) -> Vec<Sequent> {
    let a = principal.k_body().expect("KL principal is a K-formula");
    let rest = without(&s.gamma, principal);
    let bottom = single(&Formula::bottom());
    vec![
        sq(bottom.clone(), with(&rest, [a]), s.delta.clone(), true),
        sq(
            bottom.clone(),
            with(&union([&rest, &s.theta]), [a]),
            bottom,
            true,
        ),
    ]
}

/// Premises of a rule other than `KR`/`KL` for the given principal, or
/// `None` if the principal has the wrong shape or compartment.
fn premises(rule: LielRule, s: &Sequent, p: &Formula) -> Option<Vec<Sequent>> {
    if rule.on_e_sequents() != s.e {
        return None;
    }
    let e = s.e;
    let theta = &s.theta;
    let left = |f: &Formula| s.gamma.contains(f);
    let right = |f: &Formula| s.delta.contains(f);
    let g = || without(&s.gamma, p);
    let d = || without(&s.delta, p);
    use LielRule::*;
    let out = match (rule, p.kind()) {
        (AndL | EAndL, FormulaKind::And(a, b)) if left(p) => {
            vec![sq(theta.clone(), with(&g(), [a, b]), s.delta.clone(), e)]
        }
        (OrR | EOrR, FormulaKind::Or(a, b)) if right(p) => {
            vec![sq(theta.clone(), s.gamma.clone(), with(&d(), [a, b]), e)]
        }
        (AndR | EAndR, FormulaKind::And(a, b)) if right(p) => vec![
            sq(theta.clone(), s.gamma.clone(), with(&d(), [a]), e),
            sq(theta.clone(), s.gamma.clone(), with(&d(), [b]), e),
        ],
        (OrL | EOrL, FormulaKind::Or(a, b)) if left(p) => vec![
            sq(theta.clone(), with(&g(), [a]), s.delta.clone(), e),
            sq(theta.clone(), with(&g(), [b]), s.delta.clone(), e),
        ],
        (ImpL | EImpL, FormulaKind::Imp(a, b)) if left(p) => vec![
            sq(theta.clone(), with(&g(), [b]), s.delta.clone(), e),
            sq(with(theta, [b]), g(), with(&s.delta, [a]), e),
            sq(single(b), union([theta, &g()]), single(a), false),
        ],
        (ImpR | EImpR, FormulaKind::Imp(a, b)) if right(p) => vec![
            sq(theta.clone(), with(&s.gamma, [a]), with(&d(), [b]), e),
            sq(
                BTreeSet::new(),
                with(&union([theta, &s.gamma]), [a]),
                single(b),
                false,
            ),
        ],
        (EKL, FormulaKind::K(a)) if left(p) => {
            vec![sq(theta.clone(), with(&g(), [a]), s.delta.clone(), e)]
        }
        (EKR, FormulaKind::K(b)) if right(p) => {
            vec![sq(theta.clone(), s.gamma.clone(), with(&d(), [b]), e)]
        }
        _ => return None,
    };
    Some(out)
}

fn left_k_formulas(s: &Sequent) -> Vec<Formula> {
    s.gamma.iter().filter(|f| f.is_k()).cloned().collect()
}

/// All instantiations of one rule on `s`, in canonical principal order.
///
/// `KR` extracts every `K`-formula of `Γ`.
pub fn rule_instantiations(rule: LielRule, s: &Sequent, logic: Logic) -> Vec<Instantiation> {
    if !rule.in_logic(logic) {
        return Vec::new();
    }
    match rule {
        LielRule::KR => {
            if s.e {
                return Vec::new();
            }
            let extracted = left_k_formulas(s);
            s.delta
                .iter()
                .filter(|f| f.is_k())
                .map(|target| {
                    let mut principal = vec![target.clone()];
                    principal.extend(extracted.iter().cloned());
                    Instantiation {
                        rule,
                        premises: kr_premises(s, target, &extracted),
                        principal,
                    }
                })
                .collect()
        }
        LielRule::KL => {
            if s.e {
                return Vec::new();
            }
            s.gamma
                .iter()
                .filter(|f| f.is_k())
                .map(|p| Instantiation {
                    rule,
                    principal: vec![p.clone()],
                    premises: kl_premises(s, p),
                })
                .collect()
        }
        _ => s
            .gamma
            .iter()
            .chain(&s.delta)
            .filter_map(|p| {
                premises(rule, s, p).map(|premises| Instantiation {
                    rule,
                    principal: vec![p.clone()],
                    premises,
                })
            })
            .collect(),
    }
}

/// All rule instantiations applicable to an active sequent.
pub fn instantiations(s: &Sequent, logic: Logic) -> Result<Vec<Instantiation>, RuleError> {
    if classify(s, Calculus::Liel, logic) != TerminalClass::Active {
        return Err(RuleError::Terminal(s.clone()));
    }
    Ok(LielRule::ALL
        .iter()
        .flat_map(|&rule| rule_instantiations(rule, s, logic))
        .collect())
}

/// Maximum number of left `K`-formulas for which the checker tries every
/// subset in `KR`; beyond it only the maximal extraction is accepted.
pub(crate) const KR_SUBSET_LIMIT: usize = 16;

/// Whether `children` are the premises of some instantiation of `rule` on
/// `s`. Unlike [`instantiations`], `KR` may extract any subset of the left
/// `K`-formulas and `KL` any principal.
pub fn is_valid_application(rule: LielRule, s: &Sequent, children: &[Sequent], logic: Logic) -> bool {
    if !rule.in_logic(logic) {
        return false;
    }
    match rule {
        LielRule::KR => {
            if s.e || children.len() != 2 {
                return false;
            }
            let ks = left_k_formulas(s);
            s.delta.iter().filter(|f| f.is_k()).any(|target| {
                if ks.len() > KR_SUBSET_LIMIT {
                    return kr_premises(s, target, &ks) == children;
                }
                (0u32..1 << ks.len()).any(|mask| {
                    let subset: Vec<Formula> = ks
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, f)| f.clone())
                        .collect();
                    kr_premises(s, target, &subset) == children
                })
            })
        }
        _ => rule_instantiations(rule, s, logic)
            .iter()
            .any(|inst| inst.premises == children),
    }
}

/// A Liel derivation. Leaves carry an axiom name, inner nodes a rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofTree {
    pub sequent: Sequent,
    pub rule: Option<LielRule>,
    pub axiom: Option<Axiom>,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    pub fn leaf(sequent: Sequent, axiom: Axiom) -> ProofTree {
        ProofTree {
            sequent,
            rule: None,
            axiom: Some(axiom),
            children: Vec::new(),
        }
    }

    pub fn node(sequent: Sequent, rule: LielRule, children: Vec<ProofTree>) -> ProofTree {
        ProofTree {
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

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTree::size).sum::<usize>()
    }

    /// Indented text rendering, one sequent per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, indent: usize, out: &mut String) {
        let label = match (self.rule, self.axiom) {
            (Some(r), _) => r.name(),
            (None, Some(a)) => a.name(),
            (None, None) => "?",
        };
        out.push_str(&format!("{}{}   ({})\n", "  ".repeat(indent), self.sequent, label));
        for c in &self.children {
            c.write_text(indent + 1, out);
        }
    }

    fn visit<'a>(&'a self, path: &mut Vec<usize>, f: &mut impl FnMut(&'a ProofTree, &[usize])) {
        f(self, path);
        for (i, c) in self.children.iter().enumerate() {
            path.push(i);
            c.visit(path, f);
            path.pop();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DefectKind {
    /// A leaf that is not an axiom.
    NonAxiomLeaf,
    /// A leaf labelled with the wrong axiom.
    WrongAxiom,
    /// A node with both or neither of rule and axiom, or an axiom with children.
    MalformedNode,
    /// A rule applied to an axiom or flat sequent.
    RuleOnTerminal,
    /// A rule that is not part of the calculus for the logic.
    RuleNotInLogic,
    /// Children that are not the premises of the claimed rule.
    InvalidRule,
    /// A refutation rule applied where `⊥ ∈ Γ` or `Γ ∩ Δ ≠ ∅`.
    ProvisoViolation,
    /// A `Glue`/`eGlue` node without premises.
    EmptyGlue,
    DepthExceeded,
    SubformulaViolation,
}

/// A problem found at the node reached from the root by `path` (child
/// indices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Defect {
    pub kind: DefectKind,
    pub path: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {:?}: {}", self.kind, self.path, self.detail)
    }
}

/// Checks depth bound and subformula property of a tree given its nodes'
/// sequents; shared by the proof and refutation checkers.
pub(crate) fn check_global(
    root: &Sequent,
    depth: usize,
    nodes: &[(Vec<usize>, &Sequent)],
    defects: &mut Vec<Defect>,
) {
    let bound = root.connective_count();
    if depth > bound {
        defects.push(Defect {
            kind: DefectKind::DepthExceeded,
            path: Vec::new(),
            detail: format!("depth {depth} exceeds connective count {bound}"),
        });
    }
    let mut allowed = root.subformulas();
    allowed.insert(Formula::bottom());
    for (path, s) in nodes {
        if let Some(f) = s.formulas().find(|f| !allowed.contains(*f)) {
            defects.push(Defect {
                kind: DefectKind::SubformulaViolation,
                path: path.clone(),
                detail: format!("`{f}` is not a subformula of the root sequent"),
            });
        }
    }
}

/// Validates a Liel (or Liel⁻) proof tree.
pub fn check_proof(t: &ProofTree, logic: Logic) -> Result<(), Vec<Defect>> {
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
                match liel_axiom(s) {
                    Some(actual) if actual == claimed => {}
                    Some(actual) => defects.push(defect(
                        DefectKind::WrongAxiom,
                        format!("`{s}` is an instance of {actual}, not {claimed}"),
                    )),
                    None => defects.push(defect(
                        DefectKind::NonAxiomLeaf,
                        format!("`{s}` is not an axiom"),
                    )),
                }
            }
            (Some(rule), None) => {
                if !rule.in_logic(logic) {
                    defects.push(defect(
                        DefectKind::RuleNotInLogic,
                        format!("{rule} is not a rule for {logic}"),
                    ));
                } else if classify(s, Calculus::Liel, logic) != TerminalClass::Active {
                    defects.push(defect(
                        DefectKind::RuleOnTerminal,
                        format!("{rule} applied to terminal sequent `{s}`"),
                    ));
                } else {
                    let children: Vec<Sequent> =
                        node.children.iter().map(|c| c.sequent.clone()).collect();
                    if !is_valid_application(rule, s, &children, logic) {
                        defects.push(defect(
                            DefectKind::InvalidRule,
                            format!("children are not premises of {rule} on `{s}`"),
                        ));
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
