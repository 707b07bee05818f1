use std::collections::BTreeSet;

use proptest::prelude::*;

use iel_core::kripke::{check_frame, depth, forces, satisfies};
use iel_core::liel::instantiations;
use iel_core::oracle::{brute_force_invalid, enumerate_models};
use iel_core::prover::piel_with;
use iel_core::search::SearchOptions;
use iel_core::sequent::{classify, Calculus, TerminalClass};
use iel_core::{
    check_proof, check_refutation, decide, extract_model, parse, piel, pr, Formula, Logic,
    Outcome, PrOutcome, Sequent,
};

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["a", "b", "c"]).prop_map(Formula::var),
        1 => Just(Formula::bottom()),
    ];
    leaf.prop_recursive(4, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::imp(a, b)),
            inner.clone().prop_map(Formula::k),
            inner.prop_map(Formula::not),
        ]
    })
}

fn logic() -> impl Strategy<Value = Logic> {
    prop_oneof![Just(Logic::Iel), Just(Logic::IelMinus)]
}

fn sequent() -> impl Strategy<Value = Sequent> {
    let set = || prop::collection::btree_set(formula(), 0..3);
    (set(), set(), set(), any::<bool>()).prop_map(|(theta, gamma, delta, e)| Sequent {
        theta,
        gamma,
        delta,
        e,
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn render_parse_round_trip(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(parse(&text).unwrap(), f.clone());
        let json = serde_json::to_string(&f).unwrap();
        prop_assert_eq!(serde_json::from_str::<Formula>(&json).unwrap(), f);
    }

    #[test]
    fn subformulas_are_closed(f in formula()) {
        let subs = f.subformulas();
        prop_assert!(subs.contains(&f));
        for g in &subs {
            prop_assert!(g.subformulas().is_subset(&subs));
            prop_assert!(g.connective_count() <= f.connective_count());
        }
    }

    #[test]
    fn forcing_persists(f in formula(), logic in logic(), pick in any::<prop::sample::Index>()) {
        let models: Vec<_> = enumerate_models(&f.variables(), 3, logic).collect();
        let m = &models[pick.index(models.len())];
        for &w in m.worlds() {
            if forces(m, w, &f).unwrap() {
                for v in m.successors(w) {
                    prop_assert!(forces(m, v, &f).unwrap());
                }
            }
        }
    }

    #[test]
    fn instantiations_are_exhaustive_and_decreasing(s in sequent(), logic in logic()) {
        match classify(&s, Calculus::Liel, logic) {
            TerminalClass::Active => {
                let insts = instantiations(&s, logic).unwrap();
                prop_assert!(!insts.is_empty());
                for inst in insts {
                    for p in &inst.premises {
                        prop_assert!(p.connective_count() < s.connective_count(), "{} from {}", p, s);
                    }
                }
            }
            _ => prop_assert!(instantiations(&s, logic).is_err()),
        }
    }

    #[test]
    fn certificates_check(s in sequent(), logic in logic()) {
        match pr(&s, logic) {
            PrOutcome::Valid { proof } => prop_assert!(check_proof(&proof, logic).is_ok()),
            PrOutcome::Invalid { refutation, model } => {
                prop_assert!(check_refutation(&refutation, logic).is_ok());
                prop_assert!(check_frame(&model, logic).is_empty());
                prop_assert!(satisfies(&model, model.root(), &s).unwrap());
            }
        }
    }

    #[test]
    fn proofs_are_semantically_sound(f in formula(), logic in logic()) {
        let report = brute_force_invalid(&f, 3, logic);
        match decide(&f, logic) {
            Outcome::Proof(_) => prop_assert!(report.countermodel.is_none()),
            Outcome::Countermodel(m) => {
                prop_assert!(!forces(&m, m.root(), &f).unwrap());
                if let Some(min) = report.min_depth_found {
                    prop_assert!(min >= depth(&m));
                }
            }
        }
    }

    #[test]
    fn memo_does_not_change_outcomes(s in sequent(), logic in logic()) {
        let (plain, _) = piel_with(&s, logic, SearchOptions { memo: false });
        let (memo, _) = piel_with(&s, logic, SearchOptions { memo: true });
        prop_assert_eq!(plain, memo);
    }

    #[test]
    fn extracted_model_is_the_search_model(s in sequent(), logic in logic()) {
        let outcome = piel(&s, logic);
        match pr(&s, logic) {
            PrOutcome::Valid { proof } => prop_assert_eq!(outcome, Outcome::Proof(proof)),
            PrOutcome::Invalid { refutation, model } => {
                let extracted = extract_model(&refutation, logic).unwrap();
                prop_assert_eq!(&extracted, &model);
                prop_assert_eq!(outcome, Outcome::Countermodel(model));
            }
        }
    }

    #[test]
    fn weaker_logic_proves_less(f in formula()) {
        if decide(&f, Logic::IelMinus).is_valid() {
            prop_assert!(decide(&f, Logic::Iel).is_valid());
        }
    }

    #[test]
    fn tree_depth_bounded_by_connectives(s in sequent(), logic in logic()) {
        let d = match pr(&s, logic) {
            PrOutcome::Valid { proof } => proof.depth(),
            PrOutcome::Invalid { refutation, .. } => refutation.depth(),
        };
        prop_assert!(d <= s.connective_count());
    }
}

#[test]
fn enumeration_has_no_duplicates() {
    let vars = BTreeSet::from(["a".to_string()]);
    for logic in [Logic::Iel, Logic::IelMinus] {
        let models: Vec<_> = enumerate_models(&vars, 3, logic).collect();
        let distinct: BTreeSet<String> = models
            .iter()
            .map(|m| serde_json::to_string(m).unwrap())
            .collect();
        assert_eq!(distinct.len(), models.len());
    }
}
