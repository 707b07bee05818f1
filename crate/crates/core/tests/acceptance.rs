//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use iel_core::corpus::parse_corpus;
use iel_core::kripke::{check_frame, depth, forces, satisfies, KripkeModel};
use iel_core::oracle::brute_force_invalid;
use iel_core::random::random_formulas;
use iel_core::{
    check_proof, check_refutation, decide, extract_model, parse, pr, Formula, FormulaKind, Logic,
    Outcome, PrOutcome, ProofTree, Refutation, Sequent,
};

const SEED: u64 = 0x1E1_2024;
const RANDOM_STRUCTURAL: usize = 500;
const RANDOM_COHERENCE: usize = 200;
const MAX_CONNECTIVES: usize = 8;
const ORACLE_BOUND: usize = 3;
const CORPUS_BOUND: usize = 4;

fn corpus() -> Vec<(bool, Logic, Formula)> {
    let text = include_str!("../../../corpus/paper.txt");
    parse_corpus(text)
        .expect("shipped corpus parses")
        .into_iter()
        .map(|e| (e.expected_valid, e.logic, e.formula))
        .collect()
}

fn f(text: &str) -> Formula {
    parse(text).unwrap()
}

/// Formulas under test: the corpus formulas followed by random ones.
fn workload(random: usize) -> Vec<Formula> {
    corpus()
        .into_iter()
        .map(|(_, _, f)| f)
        .chain(random_formulas(SEED, random, MAX_CONNECTIVES))
        .collect()
}

fn subformula_closure(f: &Formula, out: &mut BTreeSet<Formula>) {
    out.insert(f.clone());
    match f.kind() {
        FormulaKind::Var(_) | FormulaKind::Bottom => {}
        FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Imp(a, b) => {
            subformula_closure(a, out);
            subformula_closure(b, out);
        }
        FormulaKind::K(a) => subformula_closure(a, out),
    }
}

fn connectives(f: &Formula) -> usize {
    match f.kind() {
        FormulaKind::Var(_) | FormulaKind::Bottom => 0,
        FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Imp(a, b) => {
            1 + connectives(a) + connectives(b)
        }
        FormulaKind::K(a) => 1 + connectives(a),
    }
}

fn sequent_formulas(s: &Sequent) -> impl Iterator<Item = &Formula> {
    s.theta.iter().chain(&s.gamma).chain(&s.delta)
}

/// Edge depth of a tree and whether every node stays within `allowed`.
fn proof_shape(t: &ProofTree, allowed: &BTreeSet<Formula>) -> (usize, bool) {
    let here = sequent_formulas(&t.sequent).all(|g| allowed.contains(g));
    t.children.iter().fold((0, here), |(d, ok), c| {
        let (cd, cok) = proof_shape(c, allowed);
        (d.max(cd + 1), ok && cok)
    })
}

fn refutation_shape(t: &Refutation, allowed: &BTreeSet<Formula>) -> (usize, bool) {
    let here = sequent_formulas(&t.sequent).all(|g| allowed.contains(g));
    t.children.iter().fold((0, here), |(d, ok), c| {
        let (cd, cok) = refutation_shape(c, allowed);
        (d.max(cd + 1), ok && cok)
    })
}

fn refutes(m: &KripkeModel, logic: Logic, f: &Formula) -> bool {
    check_frame(m, logic).is_empty() && !forces(m, m.root(), f).unwrap_or(true)
}

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let spent = start.elapsed();
    ensure(spent < budget, || format!("{what} took {spent:?}, budget {budget:?}"))
}

fn criterion_1() -> Check {
    let cases = [
        ("a -> K a", true),
        ("K(a->b) -> (K a -> K b)", true),
        ("K a -> ~~a", true),
        ("~~(K a -> a)", true),
        ("K a -> a", false),
        ("K a", false),
        ("K(a|b) -> (K a | K b)", false),
    ];
    for (text, valid) in cases {
        let start = Instant::now();
        let got = decide(&f(text), Logic::Iel).is_valid();
        within(start, Duration::from_secs(1), text)?;
        ensure(got == valid, || format!("{text}: expected valid={valid}"))?;
    }
    Ok(format!("{} statuses match", cases.len()))
}

fn criterion_2() -> Check {
    let m = match decide(&f("K a -> a"), Logic::Iel) {
        Outcome::Countermodel(m) => m,
        Outcome::Proof(_) => return Err("K a -> a proved".into()),
    };
    ensure(depth(&m) == 2 && m.len() == 2, || format!("K a -> a: depth {}", depth(&m)))?;
    let root = m.root();
    let top = *m.worlds().iter().find(|&&w| w != root).unwrap();
    let e: BTreeSet<_> = m.e_rel().iter().copied().collect();
    ensure(m.is_leq(root, top), || "worlds not ordered".into())?;
    ensure(e == BTreeSet::from([(root, top), (top, top)]), || format!("E = {e:?}"))?;
    ensure(
        !forces(&m, root, &f("a")).unwrap() && forces(&m, top, &f("a")).unwrap(),
        || "a must hold only at the upper world".into(),
    )?;

    let m = decide(&f("K a"), Logic::Iel).countermodel().cloned().ok_or("K a proved")?;
    ensure(depth(&m) == 1 && m.is_e(m.root(), m.root()), || "K a: expected reflexive single world".into())?;

    let m = decide(&f("K a -> ~~a"), Logic::IelMinus)
        .countermodel()
        .cloned()
        .ok_or("K a -> ~~a proved under iel-")?;
    ensure(depth(&m) == 1 && m.len() == 1 && m.e_rel().is_empty(), || {
        "K a -> ~~a under iel-: expected a single world with empty E".into()
    })?;
    Ok("depths 2, 1, 1 with the expected shapes".into())
}

fn criterion_3() -> Check {
    ensure(!decide(&f("K a -> ~~a"), Logic::IelMinus).is_valid(), || "K a -> ~~a valid in iel-".into())?;
    ensure(decide(&f("K a -> ~~a"), Logic::Iel).is_valid(), || "K a -> ~~a invalid in iel".into())?;
    ensure(
        decide(&f("K(a->b)->(K a->K b)"), Logic::IelMinus).is_valid(),
        || "distribution invalid in iel-".into(),
    )?;
    Ok("reflection separates the logics".into())
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let formulas = workload(RANDOM_STRUCTURAL);
    let mut certificates = 0;
    for formula in &formulas {
        let mut allowed = BTreeSet::from([Formula::bottom()]);
        subformula_closure(formula, &mut allowed);
        let bound = connectives(formula);
        for logic in [Logic::Iel, Logic::IelMinus] {
            let (d, closed) = match pr(&Sequent::goal(formula.clone()), logic) {
                PrOutcome::Valid { proof } => {
                    check_proof(&proof, logic).map_err(|e| format!("{formula} ({logic}): {e:?}"))?;
                    proof_shape(&proof, &allowed)
                }
                PrOutcome::Invalid { refutation, .. } => {
                    check_refutation(&refutation, logic)
                        .map_err(|e| format!("{formula} ({logic}): {e:?}"))?;
                    refutation_shape(&refutation, &allowed)
                }
            };
            ensure(d <= bound, || format!("{formula} ({logic}): depth {d} > {bound}"))?;
            ensure(closed, || format!("{formula} ({logic}): subformula property violated"))?;
            certificates += 1;
        }
    }
    within(start, Duration::from_secs(60), "structural checks")?;
    Ok(format!("{certificates} certificates in {:.1?}", start.elapsed()))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let formulas = random_formulas(SEED, RANDOM_STRUCTURAL, MAX_CONNECTIVES);
    let mut invalid = 0;
    for formula in &formulas {
        for logic in [Logic::Iel, Logic::IelMinus] {
            let oracle = brute_force_invalid(formula, ORACLE_BOUND, logic);
            match decide(formula, logic) {
                Outcome::Proof(_) => ensure(oracle.countermodel.is_none(), || {
                    format!("{formula} ({logic}): proved but the oracle refutes it")
                })?,
                Outcome::Countermodel(m) => {
                    invalid += 1;
                    ensure(refutes(&m, logic, formula), || {
                        format!("{formula} ({logic}): countermodel does not refute")
                    })?;
                    if let Some(min) = oracle.min_depth_found {
                        ensure(min >= depth(&m), || {
                            format!("{formula} ({logic}): oracle depth {min} < prover depth {}", depth(&m))
                        })?;
                    }
                }
            }
        }
    }
    within(start, Duration::from_secs(300), "oracle agreement")?;
    Ok(format!("{} runs, {invalid} invalid, in {:.1?}", formulas.len() * 2, start.elapsed()))
}

fn corpus_oracle() -> Check {
    let start = Instant::now();
    let entries = corpus();
    for (expected, logic, formula) in &entries {
        let outcome = decide(formula, *logic);
        ensure(outcome.is_valid() == *expected, || format!("{formula} ({logic}): wrong status"))?;
        let oracle = brute_force_invalid(formula, CORPUS_BOUND, *logic);
        match outcome {
            Outcome::Proof(_) => ensure(oracle.countermodel.is_none(), || {
                format!("{formula} ({logic}): proved but the oracle refutes it")
            })?,
            Outcome::Countermodel(m) => {
                ensure(refutes(&m, *logic, formula), || format!("{formula} ({logic}): bad model"))?;
                ensure(oracle.min_depth_found.is_some_and(|d| d >= depth(&m)), || {
                    format!("{formula} ({logic}): oracle minimum {:?}", oracle.min_depth_found)
                })?;
            }
        }
    }
    Ok(format!("{} corpus records at bound {CORPUS_BOUND} in {:.1?}", entries.len(), start.elapsed()))
}

fn criterion_6() -> Check {
    let start = Instant::now();
    let formulas = workload(RANDOM_COHERENCE);
    for formula in &formulas {
        let s = Sequent::goal(formula.clone());
        for logic in [Logic::Iel, Logic::IelMinus] {
            let piel = decide(formula, logic);
            match pr(&s, logic) {
                PrOutcome::Valid { .. } => ensure(piel.is_valid(), || {
                    format!("{formula} ({logic}): pr proves, piel refutes")
                })?,
                PrOutcome::Invalid { refutation, .. } => {
                    ensure(!piel.is_valid(), || format!("{formula} ({logic}): pr refutes, piel proves"))?;
                    let m = extract_model(&refutation, logic)
                        .map_err(|e| format!("{formula} ({logic}): {e}"))?;
                    ensure(!forces(&m, m.root(), formula).unwrap(), || {
                        format!("{formula} ({logic}): extracted model forces the formula")
                    })?;
                    ensure(satisfies(&m, m.root(), &s).unwrap(), || {
                        format!("{formula} ({logic}): extracted root does not satisfy the goal")
                    })?;
                }
            }
        }
    }
    within(start, Duration::from_secs(60), "coherence")?;
    Ok(format!("{} formulas under both logics", formulas.len()))
}

fn criterion_7() -> Check {
    let formulas = workload(RANDOM_COHERENCE);
    let mut weak_valid = 0;
    for formula in &formulas {
        if decide(formula, Logic::IelMinus).is_valid() {
            weak_valid += 1;
            ensure(decide(formula, Logic::Iel).is_valid(), || {
                format!("{formula}: valid in iel- but not in iel")
            })?;
        }
    }
    Ok(format!("{weak_valid} of {} valid in iel- are valid in iel", formulas.len()))
}

fn criterion_8() -> Check {
    let cases = [
        ("p -> p", true),
        ("~~(p | ~p)", true),
        ("p | ~p", false),
        ("((p->q)->p)->p", false),
    ];
    for (text, valid) in cases {
        for logic in [Logic::Iel, Logic::IelMinus] {
            let formula = f(text);
            ensure(decide(&formula, logic).is_valid() == valid, || {
                format!("{text} ({logic}): expected valid={valid}")
            })?;
            let oracle = brute_force_invalid(&formula, ORACLE_BOUND, logic);
            ensure(oracle.countermodel.is_none() == valid, || {
                format!("{text} ({logic}): oracle disagrees")
            })?;
        }
    }
    Ok("intuitionistic statuses agree with the oracle".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 reference statuses", criterion_1),
        ("2 countermodel depths", criterion_2),
        ("3 logic separation", criterion_3),
        ("4 certificate structure", criterion_4),
        ("5 oracle agreement", criterion_5),
        ("5b corpus oracle agreement", corpus_oracle),
        ("6 refutation coherence", criterion_6),
        ("7 logic monotonicity", criterion_7),
        ("8 intuitionistic fragment", criterion_8),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
