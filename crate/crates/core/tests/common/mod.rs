#![allow(dead_code)]

use incknap::rational::int;
use incknap::{Instance, Item, Solution};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

fn capacities(rng: &mut ChaCha8Rng, t: usize, step: i64) -> Vec<incknap::Rational> {
    let mut c = 0;
    (0..t)
        .map(|_| {
            c += rng.gen_range(0..=step);
            int(c)
        })
        .collect()
}

/// Integer profits and weights in `1..=10`, lambdas in `1..=5`.
pub fn uniform(rng: &mut ChaCha8Rng, n_max: usize, t_max: usize) -> Instance {
    let n = rng.gen_range(1..=n_max);
    let t = rng.gen_range(1..=t_max);
    let items = (0..n)
        .map(|_| Item::new(int(rng.gen_range(1..=10)), int(rng.gen_range(1..=10))))
        .collect();
    let caps = capacities(rng, t, 15);
    let lambdas = (0..t).map(|_| int(rng.gen_range(1..=5))).collect();
    Instance::new(items, caps, lambdas)
}

/// Few distinct profits so that classes get crowded.
pub fn clustered(rng: &mut ChaCha8Rng, n_max: usize, t_max: usize) -> Instance {
    let n = rng.gen_range(1..=n_max);
    let t = rng.gen_range(1..=t_max);
    let items = (0..n)
        .map(|_| Item::new(int([4, 5, 9][rng.gen_range(0..3)]), int(rng.gen_range(1..=4))))
        .collect();
    let caps = capacities(rng, t, 2 * n as i64 + 2);
    let lambdas = (0..t).map(|_| int(rng.gen_range(1..=5))).collect();
    Instance::new(items, caps, lambdas)
}

/// Lambdas spanning several orders of magnitude.
pub fn geometric(rng: &mut ChaCha8Rng, n_max: usize, t_max: usize) -> Instance {
    let n = rng.gen_range(1..=n_max);
    let t = rng.gen_range(1..=t_max);
    let items = (0..n)
        .map(|_| Item::new(int(rng.gen_range(1..=10)), int(rng.gen_range(1..=10))))
        .collect();
    let caps = capacities(rng, t, 12);
    let mut lam = 1i64;
    let mut lambdas: Vec<_> = (0..t)
        .map(|_| {
            lam *= rng.gen_range(4..=64);
            int(lam)
        })
        .collect();
    lambdas.reverse();
    Instance::new(items, caps, lambdas)
}

/// Random introduction times, then items dropped until capacities hold.
pub fn feasible_solution(rng: &mut ChaCha8Rng, inst: &Instance) -> Solution {
    let t = inst.horizon();
    let mut sol = Solution::new(
        (0..inst.n())
            .map(|_| {
                let v = rng.gen_range(0..=t);
                (v < t).then_some(v)
            })
            .collect(),
    );
    let mut order: Vec<usize> = (0..inst.n()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    for i in order {
        if inst.check_feasible(&sol).unwrap().is_feasible() {
            break;
        }
        sol.intro[i] = None;
    }
    sol
}

/// Up to `max_classes` profit classes (indices in `0..6`, gaps allowed) with
/// up to `max_items` items each; item profits sit exactly on class powers.
pub fn stacked_classes(
    rng: &mut ChaCha8Rng,
    acc: incknap::Accuracy,
    max_classes: usize,
    max_items: usize,
) -> (Instance, incknap::classes::ProfitClasses, incknap::classes::ClassInterval) {
    let count = rng.gen_range(1..=max_classes);
    let mut indices: Vec<usize> = (0..6).collect();
    for i in (1..indices.len()).rev() {
        indices.swap(i, rng.gen_range(0..=i));
    }
    let mut chosen: Vec<usize> = indices[..count].to_vec();
    chosen.sort();
    let base = chosen[0];
    let growth = acc.growth();
    let mut items = Vec::new();
    for &c in &chosen {
        let size = rng.gen_range(1..=max_items);
        for _ in 0..size {
            let w = incknap::rational::ratio(rng.gen_range(1..=12), rng.gen_range(1..=3));
            items.push(Item::new(incknap::rational::pow(&growth, c - base), w));
        }
    }
    let inst = Instance::new(items, vec![int(1000)], vec![int(1)]);
    let classes = incknap::classes::ProfitClasses::build(&inst, acc);
    let interval = incknap::classes::ClassInterval::new(0, chosen[count - 1] - base);
    (inst, classes, interval)
}
