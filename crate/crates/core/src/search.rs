//! The proof-search skeleton shared by [`crate::prover`] and
//! [`crate::refuter`].
//!
//! Every call either proves the sequent or fails with a countermodel
//! together with the refutation that describes where that countermodel came
//! from. The choices made on failure (which premise's model to keep, when to
//! glue) follow the minimal-depth strategy; the refutation records the same
//! choices, so the model extracted from it is the model returned here.

use std::collections::{BTreeSet, HashMap};

use crate::kripke::{depth, glue_kl, glue_reaching, single_world, KripkeModel};
use crate::liel::{kr_premises, rule_instantiations, Instantiation, LielRule, ProofTree};
use crate::refuter::{Refutation, RielRule};
use crate::sequent::{liel_axiom, liel_flat, riel_axiom, Logic, Sequent};

/// Result of searching one sequent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchResult {
    Proved(ProofTree),
    Refuted {
        model: KripkeModel,
        refutation: Refutation,
    },
}

impl SearchResult {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchResult::Proved(_))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchOptions {
    /// Cache results per sequent. Outcomes are identical either way.
    pub memo: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Number of search calls, including cache hits.
    pub calls: usize,
    /// Deepest recursion level reached; the root call is level 0.
    pub max_level: usize,
}

/// Single-premise rules, tried in this order.
const ALPHA: [LielRule; 6] = [
    LielRule::AndL,
    LielRule::OrR,
    LielRule::EAndL,
    LielRule::EOrR,
    LielRule::EKL,
    LielRule::EKR,
];

/// Two-premise invertible rules, tried in this order.
const BETA: [LielRule; 4] = [LielRule::OrL, LielRule::AndR, LielRule::EOrL, LielRule::EAndR];

/// Non-invertible rules; the loop visits them in this order.
const NON_INVERTIBLE: [LielRule; 5] = [
    LielRule::ImpR,
    LielRule::KR,
    LielRule::EImpR,
    LielRule::ImpL,
    LielRule::EImpL,
];

/// Right premises of `KR` on `s` with maximal extraction. A glued root must
/// `E`-reach the root of any submodel refuting one of them.
pub(crate) fn kr_right_premises(s: &Sequent) -> BTreeSet<Sequent> {
    if s.e {
        return BTreeSet::new();
    }
    let ks: Vec<_> = s.gamma.iter().filter(|f| f.is_k()).cloned().collect();
    s.delta
        .iter()
        .filter(|f| f.is_k())
        .map(|target| kr_premises(s, target, &ks).swap_remove(1))
        .collect()
}

/// Root flag of a countermodel for a flat sequent: E-sequents and every
/// flat sequent under IEL get a reflexive `E`, plain flat sequents under
/// IEL⁻ get `E = ∅`.
pub(crate) fn flat_root_reflexive(s: &Sequent, logic: Logic) -> bool {
    s.e || logic == Logic::Iel
}

pub struct Search {
    logic: Logic,
    memo: Option<HashMap<Sequent, SearchResult>>,
    stats: SearchStats,
}

impl Search {
    pub fn new(logic: Logic, options: SearchOptions) -> Search {
        Search {
            logic,
            memo: options.memo.then(HashMap::new),
            stats: SearchStats::default(),
        }
    }

    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    pub fn run(&mut self, s: &Sequent) -> SearchResult {
        self.visit(s, 0)
    }

    fn visit(&mut self, s: &Sequent, level: usize) -> SearchResult {
        self.stats.calls += 1;
        self.stats.max_level = self.stats.max_level.max(level);
        if let Some(hit) = self.memo.as_ref().and_then(|m| m.get(s)) {
            return hit.clone();
        }
        let result = self.step(s, level);
        if let Some(memo) = self.memo.as_mut() {
            memo.insert(s.clone(), result.clone());
        }
        result
    }

    fn first_instantiation(&self, rules: &[LielRule], s: &Sequent) -> Option<Instantiation> {
        rules
            .iter()
            .find_map(|&r| rule_instantiations(r, s, self.logic).into_iter().next())
    }

    fn step(&mut self, s: &Sequent, level: usize) -> SearchResult {
        // Axioms.
        if let Some(axiom) = liel_axiom(s) {
            return SearchResult::Proved(ProofTree::leaf(s.clone(), axiom));
        }
        // Flat sequents.
        if liel_flat(s, self.logic) {
            let axiom = riel_axiom(s, self.logic).expect("flat sequents are refutation axioms");
            return SearchResult::Refuted {
                model: single_world(&s.gamma_vars(), flat_root_reflexive(s, self.logic)),
                refutation: Refutation::leaf(s.clone(), axiom),
            };
        }
        if let Some(inst) = self.first_instantiation(&ALPHA, s) {
            return self.alpha(s, inst, level);
        }
        if let Some(inst) = self.first_instantiation(&BETA, s) {
            return self.beta(s, inst, level);
        }
        let insts: Vec<Instantiation> = NON_INVERTIBLE
            .iter()
            .flat_map(|&r| rule_instantiations(r, s, self.logic))
            .collect();
        if !insts.is_empty() {
            return self.non_invertible(s, insts, level);
        }
        let inst = rule_instantiations(LielRule::KL, s, self.logic)
            .into_iter()
            .next()
            .unwrap_or_else(|| panic!("no rule applies to active sequent `{s}`"));
        self.kl(s, inst, level)
    }

    fn alpha(&mut self, s: &Sequent, inst: Instantiation, level: usize) -> SearchResult {
        let rule = inst.rule;
        match self.visit(&inst.premises[0], level + 1) {
            SearchResult::Proved(p) => {
                SearchResult::Proved(ProofTree::node(s.clone(), rule, vec![p]))
            }
            SearchResult::Refuted { model, refutation } => SearchResult::Refuted {
                model,
                refutation: Refutation::node(s.clone(), riel(rule, 0), vec![refutation]),
            },
        }
    }

    fn beta(&mut self, s: &Sequent, inst: Instantiation, level: usize) -> SearchResult {
        let rule = inst.rule;
        let u1 = self.visit(&inst.premises[0], level + 1);
        let u2 = self.visit(&inst.premises[1], level + 1);
        let wrap = |i: usize, model, refutation| SearchResult::Refuted {
            model,
            refutation: Refutation::node(s.clone(), riel(rule, i), vec![refutation]),
        };
        match (u1, u2) {
            (SearchResult::Proved(p1), SearchResult::Proved(p2)) => {
                SearchResult::Proved(ProofTree::node(s.clone(), rule, vec![p1, p2]))
            }
            (SearchResult::Refuted { model, refutation }, SearchResult::Proved(_)) => {
                wrap(0, model, refutation)
            }
            (SearchResult::Proved(_), SearchResult::Refuted { model, refutation }) => {
                wrap(1, model, refutation)
            }
            (
                SearchResult::Refuted {
                    model: m1,
                    refutation: r1,
                },
                SearchResult::Refuted {
                    model: m2,
                    refutation: r2,
                },
            ) => {
                if depth(&m1) < depth(&m2) {
                    wrap(0, m1, r1)
                } else {
                    wrap(1, m2, r2)
                }
            }
        }
    }

    fn non_invertible(&mut self, s: &Sequent, insts: Vec<Instantiation>, level: usize) -> SearchResult {
        let count = insts.len();
        let mut inv: Vec<(KripkeModel, Refutation)> = Vec::new();
        let mut non_inv: Vec<(KripkeModel, Refutation)> = Vec::new();
        for inst in insts {
            let results: Vec<SearchResult> = inst
                .premises
                .iter()
                .map(|p| self.visit(p, level + 1))
                .collect();
            if results.iter().all(SearchResult::is_proved) {
                let proofs = results
                    .into_iter()
                    .map(|r| match r {
                        SearchResult::Proved(p) => p,
                        SearchResult::Refuted { .. } => unreachable!(),
                    })
                    .collect();
                return SearchResult::Proved(ProofTree::node(s.clone(), inst.rule, proofs));
            }
            let last = results.len() - 1;
            for (i, r) in results.into_iter().enumerate() {
                if let SearchResult::Refuted { model, refutation } = r {
                    if i == last {
                        non_inv.push((model, refutation));
                    } else {
                        let node = Refutation::node(s.clone(), riel(inst.rule, i), vec![refutation]);
                        inv.push((model, node));
                    }
                }
            }
        }
        let glued = (!non_inv.is_empty()).then(|| glue_refutations(s, non_inv));
        if inv.is_empty() {
            let (model, refutation) = glued.expect("some premise of every instantiation failed");
            return SearchResult::Refuted { model, refutation };
        }
        let depths: Vec<usize> = inv.iter().map(|(m, _)| depth(m)).collect();
        let min_depth = *depths.iter().min().expect("inv is nonempty");
        let pick = depths.iter().position(|&d| d == min_depth).expect("minimum exists");
        let (u_model, u_ref) = inv.swap_remove(pick);
        match glued {
            Some((model, refutation)) if refutation.children.len() == count => {
                if depth(&model) < min_depth {
                    SearchResult::Refuted { model, refutation }
                } else {
                    SearchResult::Refuted {
                        model: u_model,
                        refutation: u_ref,
                    }
                }
            }
            _ => SearchResult::Refuted {
                model: u_model,
                refutation: u_ref,
            },
        }
    }

    fn kl(&mut self, s: &Sequent, inst: Instantiation, level: usize) -> SearchResult {
        let u1 = self.visit(&inst.premises[0], level + 1);
        let u2 = self.visit(&inst.premises[1], level + 1);
        match (u1, u2) {
            (SearchResult::Proved(p1), SearchResult::Proved(p2)) => {
                SearchResult::Proved(ProofTree::node(s.clone(), LielRule::KL, vec![p1, p2]))
            }
            (SearchResult::Refuted { model, refutation }, SearchResult::Proved(_)) => {
                SearchResult::Refuted {
                    model,
                    refutation: Refutation::node(s.clone(), RielRule::KL1, vec![refutation]),
                }
            }
            (u1, SearchResult::Refuted { model, refutation }) => {
                let glued = glue_kl(&s.gamma_vars(), &model).expect("premise root keeps Γ's variables");
                let glued_ref = Refutation::node(s.clone(), RielRule::KL2, vec![refutation]);
                match u1 {
                    SearchResult::Refuted {
                        model: m1,
                        refutation: r1,
                    } if depth(&m1) < depth(&glued) => SearchResult::Refuted {
                        model: m1,
                        refutation: Refutation::node(s.clone(), RielRule::KL1, vec![r1]),
                    },
                    _ => SearchResult::Refuted {
                        model: glued,
                        refutation: glued_ref,
                    },
                }
            }
        }
    }
}

/// Glues the models of the collected right premises and records the
/// matching `Glue`/`eGlue` node.
fn glue_refutations(s: &Sequent, parts: Vec<(KripkeModel, Refutation)>) -> (KripkeModel, Refutation) {
    let reach_set = kr_right_premises(s);
    let reach: Vec<bool> = parts
        .iter()
        .map(|(_, r)| reach_set.contains(&r.sequent))
        .collect();
    let (models, refutations): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let model = glue_reaching(&s.gamma_vars(), &models, &reach, s.e)
        .expect("premise roots keep Γ's variables");
    let rule = if s.e { RielRule::EGlue } else { RielRule::Glue };
    (model, Refutation::node(s.clone(), rule, refutations))
}

/// The refutation rule keeping only premise `index` of a Liel rule.
fn riel(rule: LielRule, index: usize) -> RielRule {
    RielRule::from_liel(rule, index)
        .unwrap_or_else(|| panic!("{rule} has no single-premise refutation rule for premise {index}"))
}

/// Runs the search on `s` with default options.
pub fn search(s: &Sequent, logic: Logic) -> SearchResult {
    Search::new(logic, SearchOptions::default()).run(s)
}
