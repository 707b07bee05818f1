//! Brute-force semantic oracle: enumerates every small labelled model and
//! evaluates formulas on bitsets of worlds.
//!
//! The oracle shares no code with the prover beyond the formula and model
//! types, so agreement between the two is meaningful.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::formula::{Formula, FormulaKind};
use crate::kripke::{self, check_frame, KripkeModel};
use crate::liel::check_proof;
use crate::prover::{decide, Outcome};
use crate::sequent::{Logic, Sequent};

/// Largest supported bound; worlds are bits of a `u32`.
pub const MAX_WORLDS: usize = 8;

/// A frame with worlds `0..n`, root `0`, as bitmasks.
#[derive(Debug, Clone)]
struct Frame {
    n: usize,
    /// `up[w]`: worlds `v` with `w ≤ v`.
    up: Vec<u32>,
    /// `e[w]`: worlds `v` with `w E v`.
    e: Vec<u32>,
    /// Upward-closed sets of worlds.
    upsets: Vec<u32>,
    depth: usize,
}

fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask & (1 << i) != 0)
}

/// All partial orders on `0..n` with `0` below every world, as up-set
/// masks.
fn orders(n: usize) -> Vec<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (1..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << pairs.len() {
        let mut up: Vec<u32> = (0..n).map(|w| 1 << w).collect();
        up[0] = (1 << n) - 1;
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if mask & (1 << k) != 0 {
                up[i] |= 1 << j;
            }
        }
        let antisymmetric = (0..n).all(|i| {
            bits(up[i]).all(|j| j == i || up[j] & (1 << i) == 0)
        });
        let transitive = (0..n).all(|i| bits(up[i]).all(|j| up[j] & !up[i] == 0));
        if antisymmetric && transitive {
            out.push(up);
        }
    }
    out
}

fn chain_depth(up: &[u32]) -> usize {
    fn go(up: &[u32], w: usize, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(d) = memo[w] {
            return d;
        }
        let d = 1 + bits(up[w] & !(1 << w))
            .map(|v| go(up, v, memo))
            .max()
            .unwrap_or(0);
        memo[w] = Some(d);
        d
    }
    go(up, 0, &mut vec![None; up.len()])
}

fn upsets(up: &[u32], n: usize) -> Vec<u32> {
    (0u32..1 << n)
        .filter(|&s| bits(s).all(|w| up[w] & !s == 0))
        .collect()
}

/// All frames with at most `max_worlds` worlds satisfying the frame
/// conditions of `logic`.
fn frames(max_worlds: usize, logic: Logic) -> Vec<Frame> {
    assert!(
        (1..=MAX_WORLDS).contains(&max_worlds),
        "bound must lie in 1..={MAX_WORLDS}"
    );
    let mut out = Vec::new();
    for n in 1..=max_worlds {
        for up in orders(n) {
            let leq_pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|w| bits(up[w]).map(move |v| (w, v)))
                .collect();
            let depth = chain_depth(&up);
            let ups = upsets(&up, n);
            for mask in 0u64..1 << leq_pairs.len() {
                let mut e = vec![0u32; n];
                for (k, &(w, v)) in leq_pairs.iter().enumerate() {
                    if mask & (1 << k) != 0 {
                        e[w] |= 1 << v;
                    }
                }
                let im2 = (0..n).all(|w| bits(up[w]).all(|v| e[v] & !e[w] == 0));
                let im3 = logic == Logic::IelMinus || e.iter().all(|&s| s != 0);
                if im2 && im3 {
                    out.push(Frame {
                        n,
                        up: up.clone(),
                        e,
                        upsets: ups.clone(),
                        depth,
                    });
                }
            }
        }
    }
    out
}

/// Truth set of `f` in `frame` under the valuation `val` (one up-set per
/// variable).
fn truth(f: &Formula, frame: &Frame, vars: &BTreeMap<String, usize>, val: &[u32]) -> u32 {
    let all = (1u32 << frame.n) - 1;
    match f.kind() {
        FormulaKind::Var(p) => vars.get(p).map_or(0, |&i| val[i]),
        FormulaKind::Bottom => 0,
        FormulaKind::And(a, b) => truth(a, frame, vars, val) & truth(b, frame, vars, val),
        FormulaKind::Or(a, b) => truth(a, frame, vars, val) | truth(b, frame, vars, val),
        FormulaKind::Imp(a, b) => {
            let bad = truth(a, frame, vars, val) & !truth(b, frame, vars, val);
            (0..frame.n)
                .filter(|&w| frame.up[w] & bad == 0)
                .fold(0, |acc, w| acc | 1 << w)
                & all
        }
        FormulaKind::K(a) => {
            let ta = truth(a, frame, vars, val);
            (0..frame.n)
                .filter(|&w| frame.e[w] & !ta == 0)
                .fold(0, |acc, w| acc | 1 << w)
        }
    }
}

fn valuations(frame: &Frame, nvars: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
    let radix = frame.upsets.len();
    let total = radix.pow(nvars as u32);
    (0..total).map(move |mut k| {
        (0..nvars)
            .map(|_| {
                let s = frame.upsets[k % radix];
                k /= radix;
                s
            })
            .collect()
    })
}

fn to_model(frame: &Frame, names: &[String], val: &[u32]) -> KripkeModel {
    let n = frame.n;
    let leq = (0..n).flat_map(|w| bits(frame.up[w]).map(move |v| (w as u32, v as u32)));
    let e = (0..n).flat_map(|w| bits(frame.e[w]).map(move |v| (w as u32, v as u32)));
    let valuation = (0..n).map(|w| {
        let vars: BTreeSet<String> = names
            .iter()
            .zip(val)
            .filter(|(_, &s)| s & (1 << w) != 0)
            .map(|(name, _)| name.clone())
            .collect();
        (w as u32, vars)
    });
    KripkeModel::new(0..n as u32, 0, leq.collect::<Vec<_>>(), e.collect::<Vec<_>>(), valuation)
        .expect("enumerated frames are well formed")
}

/// Every rooted model with at most `max_worlds` worlds over `vars`:
/// labelled, root `0`, in a fixed deterministic order.
pub fn enumerate_models(
    vars: &BTreeSet<String>,
    max_worlds: usize,
    logic: Logic,
) -> impl Iterator<Item = KripkeModel> {
    let names: Vec<String> = vars.iter().cloned().collect();
    frames(max_worlds, logic).into_iter().flat_map(move |frame| {
        let names = names.clone();
        let vals: Vec<Vec<u32>> = valuations(&frame, names.len()).collect();
        vals.into_iter()
            .map(move |val| to_model(&frame, &names, &val))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub formula: Formula,
    pub logic: Logic,
    pub bound_worlds: usize,
    /// The first enumerated model whose root does not force the formula.
    pub countermodel: Option<KripkeModel>,
    /// Smallest depth of any countermodel within the bound.
    pub min_depth_found: Option<usize>,
    /// Models evaluated. Frames too deep to lower the minimum are skipped.
    pub models_enumerated: usize,
}

/// Searches all models with at most `max_worlds` worlds for one whose root
/// does not force `f`, scanning everything to find the minimal depth.
pub fn brute_force_invalid(f: &Formula, max_worlds: usize, logic: Logic) -> OracleReport {
    brute_force_with(f, max_worlds, logic, true)
}

/// Like [`brute_force_invalid`]; with `full_scan` unset the search stops at
/// the first countermodel and `min_depth_found` is that model's depth.
pub fn brute_force_with(f: &Formula, max_worlds: usize, logic: Logic, full_scan: bool) -> OracleReport {
    let var_names: Vec<String> = f.variables().into_iter().collect();
    let index: BTreeMap<String, usize> = var_names
        .iter()
        .enumerate()
        .map(|(i, v)| (v.clone(), i))
        .collect();
    let mut report = OracleReport {
        formula: f.clone(),
        logic,
        bound_worlds: max_worlds,
        countermodel: None,
        min_depth_found: None,
        models_enumerated: 0,
    };
    'frames: for frame in frames(max_worlds, logic) {
        if report.min_depth_found.is_some_and(|d| frame.depth >= d) {
            continue;
        }
        for val in valuations(&frame, var_names.len()) {
            report.models_enumerated += 1;
            if truth(f, &frame, &index, &val) & 1 != 0 {
                continue;
            }
            let model = to_model(&frame, &var_names, &val);
            assert!(check_frame(&model, logic).is_empty(), "oracle produced a non-model");
            assert!(
                !kripke::forces(&model, 0, f).expect("root exists"),
                "bitset and reference forcing disagree on {f}"
            );
            if report.countermodel.is_none() {
                report.countermodel = Some(model);
            }
            report.min_depth_found = Some(frame.depth);
            if !full_scan {
                break 'frames;
            }
            continue 'frames;
        }
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Contradiction,
}

/// Result of comparing the prover with the oracle on one formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crosscheck {
    pub verdict: Verdict,
    pub prover_valid: bool,
    /// Depth of the prover's countermodel, if the formula is invalid.
    pub prover_depth: Option<usize>,
    pub problems: Vec<String>,
    pub oracle: OracleReport,
}

/// Runs the prover and the oracle on `f` and reports any disagreement.
pub fn crosscheck(f: &Formula, logic: Logic, max_worlds: usize) -> Crosscheck {
    let outcome = decide(f, logic);
    let oracle = brute_force_invalid(f, max_worlds, logic);
    let mut problems = Vec::new();
    let mut prover_depth = None;
    match &outcome {
        Outcome::Proof(proof) => {
            if let Err(defects) = check_proof(proof, logic) {
                problems.push(format!("proof rejected by checker: {} defects", defects.len()));
            }
            if oracle.countermodel.is_some() {
                problems.push("prover says valid but the oracle found a countermodel".into());
            }
        }
        Outcome::Countermodel(model) => {
            let d = kripke::depth(model);
            prover_depth = Some(d);
            if !check_frame(model, logic).is_empty() {
                problems.push("prover's countermodel violates the frame conditions".into());
            } else if !kripke::satisfies(model, model.root(), &Sequent::goal(f.clone()))
                .unwrap_or(false)
            {
                problems.push("prover's countermodel forces the formula at its root".into());
            }
            if let Some(min) = oracle.min_depth_found {
                if min < d {
                    problems.push(format!(
                        "oracle found a countermodel of depth {min} below the prover's depth {d}"
                    ));
                }
            }
        }
    }
    Crosscheck {
        verdict: if problems.is_empty() {
            Verdict::Consistent
        } else {
            Verdict::Contradiction
        },
        prover_valid: outcome.is_valid(),
        prover_depth,
        problems,
        oracle,
    }
}
