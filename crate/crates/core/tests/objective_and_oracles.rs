mod common;

use incknap::accuracy::Accuracy;
use incknap::classes::ProfitClasses;
use incknap::oracle::{exact_inverse, exact_opt, exact_restricted_dp, OracleBudget};
use incknap::rational::{int, ratio};
use incknap::statespace::IntervalView;
use incknap::{Instance, Item, Rational};

#[test]
fn objective_forms_agree_on_feasible_solutions() {
    let mut rng = common::rng(11);
    for _ in 0..300 {
        let inst = common::uniform(&mut rng, 8, 4);
        let sol = common::feasible_solution(&mut rng, &inst);
        assert!(inst.check_feasible(&sol).unwrap().is_feasible());
        assert_eq!(inst.objective(&sol).unwrap(), inst.objective_by_items(&sol).unwrap());
    }
}

#[test]
fn oracle_dominates_random_solutions() {
    let mut rng = common::rng(12);
    for _ in 0..60 {
        let inst = common::uniform(&mut rng, 5, 3);
        let (opt, best) = exact_opt(&inst, OracleBudget::default()).unwrap();
        assert_eq!(inst.objective(&best).unwrap(), opt);
        for _ in 0..10 {
            let sol = common::feasible_solution(&mut rng, &inst);
            assert!(inst.objective(&sol).unwrap() <= opt);
        }
    }
}

#[test]
fn inverse_oracle_is_monotone() {
    let mut rng = common::rng(13);
    for _ in 0..40 {
        let inst = common::uniform(&mut rng, 5, 3);
        let (opt, _) = exact_opt(&inst, OracleBudget::default()).unwrap();
        let mut last: Option<Rational> = None;
        for q in 0..=8 {
            let phi = &opt * ratio(q, 8);
            let (w, sol) = exact_inverse(&inst, &phi, OracleBudget::default()).unwrap().unwrap();
            assert!(inst.objective(&sol).unwrap() >= phi);
            if let Some(prev) = &last {
                assert!(prev <= &w);
            }
            last = Some(w);
        }
        assert_eq!(exact_inverse(&inst, &(&opt + int(1)), OracleBudget::default()).unwrap(), None);
    }
}

/// Same instance with every profit replaced by its rounded class profit.
fn rounded_instance(inst: &Instance, classes: &ProfitClasses) -> Instance {
    Instance::new(
        inst.items
            .iter()
            .enumerate()
            .map(|(i, it)| {
                Item::new(
                    classes.rounded_profit(classes.class_of(i)) * classes.scale(),
                    it.weight.clone(),
                )
            })
            .collect(),
        inst.capacities.clone(),
        inst.lambdas.clone(),
    )
}

#[test]
fn restricted_dp_agrees_with_rounded_optimum() {
    let mut rng = common::rng(14);
    let acc = Accuracy::from_inverse(5).unwrap();
    for _ in 0..60 {
        let inst = common::uniform(&mut rng, 6, 3);
        let classes = ProfitClasses::build(&inst, acc);
        let (lo, hi) = (0, classes.max_index().unwrap());
        let table = exact_restricted_dp(
            &inst,
            &classes,
            incknap::classes::ClassInterval::new(lo, hi),
            OracleBudget::default(),
        )
        .unwrap();
        let rounded = rounded_instance(&inst, &classes);
        let (opt, _) = exact_opt(&rounded, OracleBudget::default()).unwrap();
        let cap = inst.capacities.last().unwrap().clone();
        // the prefix exchange keeps the rounded optimum reachable
        assert_eq!(table.best_within(&cap), Some(opt));
    }
}

#[test]
fn rounding_loses_at_most_eps() {
    let mut rng = common::rng(15);
    for k in [5u64, 8, 13] {
        let acc = Accuracy::from_inverse(k).unwrap();
        for _ in 0..100 {
            let inst = common::uniform(&mut rng, 8, 4);
            let classes = ProfitClasses::build(&inst, acc);
            let rounded = rounded_instance(&inst, &classes);
            let sol = common::feasible_solution(&mut rng, &inst);
            let exact = inst.objective(&sol).unwrap();
            let approx = rounded.objective(&sol).unwrap();
            assert!(approx <= exact);
            assert!(approx * acc.growth() >= exact);
        }
    }
}

#[test]
fn restricted_dp_terminal_states() {
    let inst = Instance::new(
        vec![Item::new(int(1), int(1)), Item::new(int(2), int(1))],
        vec![int(2)],
        vec![int(1)],
    );
    let classes = ProfitClasses::build(&inst, Accuracy::from_inverse(5).unwrap());
    let hi = classes.max_index().unwrap();
    let interval = incknap::classes::ClassInterval::new(0, hi);
    let table = exact_restricted_dp(&inst, &classes, interval, OracleBudget::default()).unwrap();
    let view = IntervalView::new(&classes, interval);
    assert_eq!(table.vectors.len(), view.all_vectors().len());
    for (v, counts) in table.vectors.iter().enumerate() {
        let expected = counts.iter().all(|&c| c == 0).then(|| int(0));
        assert_eq!(table.values[0][v], expected);
    }
}
