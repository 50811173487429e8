mod common;

use common::{atomic_closure, naive_subsumers};
use elrepair_core::corpus::{random_nested_tbox, random_normalized_tbox, random_problem, ProblemParams};
use elrepair_core::normalize::{normalize_tbox, FreshNameGenerator};
use elrepair_core::parse::{parse_tbox, serialize_tbox};
use elrepair_core::reasoner::{entails, saturate, scc, scc_size, PoolMode};
use elrepair_core::repair::{run_strategy, Options, StrategySpec};
use elrepair_core::sweep::{hasse_check, map, permutation_sweep, permutations, Case, Execution};
use elrepair_core::{Axiom, Concept, TBox};
use proptest::prelude::*;

fn atomic_tbox(max: usize) -> impl Strategy<Value = TBox> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..2 * n).prop_map(move |edges| {
            let mut t = TBox::new();
            for i in 0..n {
                t.declare_concept(elrepair_core::Name::new(format!("A{i}")));
            }
            for (a, b) in edges {
                t.insert(Axiom::atomic(&format!("A{a}"), &format!("A{b}")));
            }
            t
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn atomic_entailment_is_the_closure(t in atomic_tbox(15)) {
        let closure = atomic_closure(&t);
        for a in t.signature().concepts.iter() {
            for b in t.signature().concepts.iter() {
                let got = entails(&t, &Axiom::atomic(a.as_str(), b.as_str())).unwrap();
                prop_assert_eq!(got, closure.contains(&(a.to_string(), b.to_string())), "{} ⊑ {}", a, b);
            }
        }
    }

    #[test]
    fn normalized_entailment_matches_reference(seed in any::<u64>()) {
        let t = random_normalized_tbox(seed, 8, 2, 14);
        let reference = naive_subsumers(&t);
        let name = |k: &str| if k == "⊤" { Concept::Top } else { Concept::atomic(k) };
        for (a, ups) in &reference {
            for b in reference.keys() {
                let got = entails(&t, &Axiom::new(name(a), name(b))).unwrap();
                prop_assert_eq!(got, ups.contains(b), "{} ⊑ {}", a, b);
            }
        }
    }

    #[test]
    fn saturation_is_idempotent_and_monotone(seed in any::<u64>(), extra in any::<u64>()) {
        let t = random_normalized_tbox(seed, 8, 2, 12);
        let s = saturate(&t).unwrap();
        let closed = t.add_axioms(&s.atomic_subsumptions()).unwrap();
        prop_assert_eq!(saturate(&closed).unwrap().subsumer_map(), s.subsumer_map());
        let more = random_normalized_tbox(extra, 8, 2, 3);
        let mut bigger = t.clone();
        bigger.extend_signature(more.signature());
        for a in more.axioms() {
            bigger.insert(a.clone());
        }
        let big = saturate(&bigger).unwrap().subsumer_map();
        for (c, ups) in s.subsumer_map() {
            let b = big.get(&c).expect("every node survives");
            prop_assert!(b.is_superset(&ups), "{:?}", c);
        }
    }

    #[test]
    fn normalization_is_sound_and_normal(seed in any::<u64>()) {
        let t = random_nested_tbox(seed, 6, 2, 6, 3);
        let n = normalize_tbox(&t);
        prop_assert!(n.is_normalized());
        for a in t.axioms() {
            prop_assert!(entails(&n, a).unwrap(), "{} lost", a);
        }
        prop_assert_eq!(normalize_tbox(&t), n);
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let t = random_nested_tbox(seed, 6, 2, 6, 3);
        let text = serialize_tbox(&t);
        let back = parse_tbox(&text).unwrap().tbox;
        prop_assert_eq!(back, t);
    }

    #[test]
    fn fingerprint_ignores_order(seed in any::<u64>()) {
        let t = random_normalized_tbox(seed, 6, 2, 10);
        let mut rev: Vec<Axiom> = t.axioms().cloned().collect();
        rev.reverse();
        let r = TBox::from_axioms(rev);
        prop_assert_eq!(r.fingerprint(), TBox::from_axioms(t.axioms().cloned()).fingerprint());
    }

    #[test]
    fn scc_cardinality(seed in any::<u64>()) {
        let (t, n, k) = elrepair_core::corpus::random_signature(seed, 12, 3);
        prop_assert_eq!(scc(&t).len(), scc_size(n, k));
        prop_assert_eq!(scc_size(n, k), (n * n + n) / 2 + k * n);
    }

    #[test]
    fn fresh_names_are_stable_and_distinct(seed in any::<u64>()) {
        let t = random_nested_tbox(seed, 4, 2, 4, 2);
        let mut a = FreshNameGenerator::new(t.signature());
        let mut b = FreshNameGenerator::new(t.signature());
        let mut seen = std::collections::BTreeMap::new();
        for ax in t.axioms() {
            for c in [&ax.lhs, &ax.rhs] {
                if c.is_basic() { continue; }
                let n = a.name_for(c);
                prop_assert_eq!(&n, &b.name_for(c));
                prop_assert!(!t.signature().concepts.contains(&n));
                if let Some(prev) = seen.insert(n.clone(), c.clone()) {
                    prop_assert_eq!(&prev, c);
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_strategy_repairs(seed in any::<u64>(), scc_pool in any::<bool>(), equiv in any::<bool>()) {
        let pool = if scc_pool { PoolMode::Scc } else { PoolMode::Atomic };
        let options = Options { pool, equiv_exclude: equiv, prune: true };
        let c = random_problem(seed, &ProblemParams::default(), options);
        for spec in StrategySpec::all_named() {
            let mut o = c.oracle.clone();
            let r = run_strategy(&c.problem, &spec, None, &mut o).unwrap();
            prop_assert!(r.verdict.valid, "{} seed {}: {:?}", spec, seed, r.verdict);
            for e in &r.completions {
                prop_assert!(!e.completion.axioms.is_empty());
                // Pruning may drop the weakened axiom itself, never what it says.
                let c = TBox::from_axioms(e.completion.axioms.iter().cloned());
                prop_assert!(entails(&c, &e.weakened).unwrap());
            }
        }
    }

    #[test]
    fn lattice_properties_hold(seed in any::<u64>()) {
        let c: Case = random_problem(seed, &ProblemParams::default(), Options::default()).into();
        let h = hasse_check(&[c], Execution::Sequential).unwrap();
        prop_assert!(h.violations.is_empty(), "{:?}", h.violations);
    }

    #[test]
    fn parallel_sweeps_match_sequential(seed in any::<u64>()) {
        let c = random_problem(seed, &ProblemParams::default(), Options::default());
        let orders = permutations(c.problem.wrong().len());
        let spec = StrategySpec::Named(4);
        let a = permutation_sweep(&c.problem, &spec, &c.oracle, &orders, Execution::Parallel).unwrap();
        let b = permutation_sweep(&c.problem, &spec, &c.oracle, &orders, Execution::Sequential).unwrap();
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(&x.final_tbox, &y.final_tbox);
            prop_assert_eq!(x.log.entries(), y.log.entries());
        }
    }

    #[test]
    fn runs_are_deterministic(seed in any::<u64>()) {
        let c = random_problem(seed, &ProblemParams::default(), Options::default());
        let items: Vec<u8> = (1..=13).collect();
        let runs = map(Execution::Parallel, &items, |&n| {
            let mut o = c.oracle.clone();
            run_strategy(&c.problem, &StrategySpec::Named(n), None, &mut o).unwrap()
        });
        for (n, r) in items.iter().zip(&runs) {
            let mut o = c.oracle.clone();
            let again = run_strategy(&c.problem, &StrategySpec::Named(*n), None, &mut o).unwrap();
            prop_assert_eq!(&again.final_tbox, &r.final_tbox);
            prop_assert_eq!(again.log.entries(), r.log.entries());
        }
    }
}
