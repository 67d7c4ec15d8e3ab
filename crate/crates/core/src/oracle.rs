//! Exhaustive solvers for small instances.

use num_traits::Zero;

use crate::classes::{ClassInterval, ProfitClasses};
use crate::error::{Error, Result};
use crate::model::{Instance, Solution};
use crate::rational::Rational;
use crate::statespace::IntervalView;

/// Cap on the number of enumerated assignments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_assignments: u128,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_assignments: 2_000_000,
        }
    }
}

impl OracleBudget {
    pub fn new(max_assignments: u128) -> Self {
        Self { max_assignments }
    }

    fn check(&self, required: u128) -> Result<()> {
        if required > self.max_assignments {
            return Err(Error::BudgetExceeded {
                required,
                budget: self.max_assignments,
            });
        }
        Ok(())
    }
}

fn assignment_count(instance: &Instance) -> u128 {
    let base = instance.horizon() as u128 + 1;
    (0..instance.n()).fold(1u128, |acc, _| acc.saturating_mul(base))
}

/// Depth-first walk over introduction times in lexicographic order
/// (`1 < 2 < ... < T < never`), skipping capacity-violating branches.
struct Walker<'a> {
    instance: &'a Instance,
    suffix: Vec<Rational>,
    intro: Vec<Option<usize>>,
    load: Vec<Rational>,
}

impl<'a> Walker<'a> {
    fn new(instance: &'a Instance) -> Self {
        Self {
            instance,
            suffix: instance.suffix_lambdas().values().to_vec(),
            intro: Vec::with_capacity(instance.n()),
            load: vec![Rational::zero(); instance.horizon()],
        }
    }

    fn walk(&mut self, profit: &Rational, weight: &Rational, visit: &mut impl FnMut(&[Option<usize>], &Rational, &Rational)) {
        let i = self.intro.len();
        if i == self.instance.n() {
            visit(&self.intro, profit, weight);
            return;
        }
        let item = &self.instance.items[i];
        for t in 0..self.instance.horizon() {
            let fits = (t..self.instance.horizon())
                .all(|s| &self.load[s] + &item.weight <= self.instance.capacities[s]);
            if !fits {
                continue;
            }
            for s in t..self.instance.horizon() {
                self.load[s] += &item.weight;
            }
            self.intro.push(Some(t));
            let p = profit + &item.profit * &self.suffix[t];
            let w = weight + &item.weight;
            self.walk(&p, &w, visit);
            self.intro.pop();
            for s in t..self.instance.horizon() {
                self.load[s] -= &item.weight;
            }
        }
        self.intro.push(None);
        self.walk(profit, weight, visit);
        self.intro.pop();
    }
}

/// Maximum objective and the lexicographically first solution attaining it.
pub fn exact_opt(instance: &Instance, budget: OracleBudget) -> Result<(Rational, Solution)> {
    instance.validate()?;
    budget.check(assignment_count(instance))?;
    let mut best: Option<(Rational, Vec<Option<usize>>)> = None;
    Walker::new(instance).walk(&Rational::zero(), &Rational::zero(), &mut |intro, p, _| {
        if best.as_ref().is_none_or(|(b, _)| p > b) {
            best = Some((p.clone(), intro.to_vec()));
        }
    });
    let (value, intro) = best.expect("the empty solution is always feasible");
    Ok((value, Solution::new(intro)))
}

/// Minimum `w(S_T)` over feasible solutions with objective at least `phi`;
/// `None` when no solution reaches `phi`.
pub fn exact_inverse(
    instance: &Instance,
    phi: &Rational,
    budget: OracleBudget,
) -> Result<Option<(Rational, Solution)>> {
    instance.validate()?;
    budget.check(assignment_count(instance))?;
    let mut best: Option<(Rational, Vec<Option<usize>>)> = None;
    Walker::new(instance).walk(&Rational::zero(), &Rational::zero(), &mut |intro, p, w| {
        if p >= phi && best.as_ref().is_none_or(|(b, _)| w < b) {
            best = Some((w.clone(), intro.to_vec()));
        }
    });
    Ok(best.map(|(w, intro)| (w, Solution::new(intro))))
}

/// Exact prefix-like DP over every count vector of an interval.
#[derive(Debug, Clone)]
pub struct RestrictedTable {
    /// All vectors of the interval, in mixed-radix order (first class fastest).
    pub vectors: Vec<Vec<usize>>,
    pub weights: Vec<Rational>,
    /// `values[t][v]`, `t = 0..=T`; `None` is unreachable.
    pub values: Vec<Vec<Option<Rational>>>,
}

impl RestrictedTable {
    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    /// Best final value among vectors of weight at most `cap`.
    pub fn best_within(&self, cap: &Rational) -> Option<Rational> {
        let t = self.horizon();
        self.values[t]
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| *w <= cap)
            .filter_map(|(v, _)| v.clone())
            .max()
    }

    pub fn value_of(&self, t: usize, counts: &[usize]) -> Option<Rational> {
        let v = self.vectors.iter().position(|c| c == counts)?;
        self.values[t][v].clone()
    }
}

/// Rounded-profit DP over the full vector space of `interval`: a state may
/// move to any coordinatewise larger vector that fits the period's capacity.
pub fn exact_restricted_dp(
    instance: &Instance,
    classes: &ProfitClasses,
    interval: ClassInterval,
    budget: OracleBudget,
) -> Result<RestrictedTable> {
    let view = IntervalView::new(classes, interval);
    let radix: Vec<usize> = view.classes.iter().map(|c| c.len() + 1).collect();
    let size = radix
        .iter()
        .fold(1u128, |acc, &r| acc.saturating_mul(r as u128));
    budget.check(size)?;
    let size = size as usize;

    let vectors: Vec<Vec<usize>> = (0..size)
        .map(|mut code| {
            radix
                .iter()
                .map(|&r| {
                    let digit = code % r;
                    code /= r;
                    digit
                })
                .collect()
        })
        .collect();
    let class_profit: Vec<Rational> = view
        .classes
        .iter()
        .map(|c| classes.rounded_profit(c.index) * classes.scale())
        .collect();
    let weights: Vec<Rational> = vectors.iter().map(|v| view.weight(v)).collect();
    let profits: Vec<Rational> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .zip(&class_profit)
                .fold(Rational::zero(), |acc, (&n, p)| acc + p * Rational::from_integer(n.into()))
        })
        .collect();
    let suffix = instance.suffix_lambdas();

    let mut values = vec![vectors
        .iter()
        .map(|v| v.iter().all(|&n| n == 0).then(Rational::zero))
        .collect::<Vec<_>>()];
    for t in 0..instance.horizon() {
        let prev = &values[t];
        let row = (0..size)
            .map(|i| {
                if weights[i] > instance.capacities[t] {
                    return None;
                }
                (0..size)
                    .filter(|&j| vectors[j].iter().zip(&vectors[i]).all(|(a, b)| a <= b))
                    .filter_map(|j| {
                        prev[j]
                            .as_ref()
                            .map(|f| f + suffix.at(t) * (&profits[i] - &profits[j]))
                    })
                    .max()
            })
            .collect();
        values.push(row);
    }
    Ok(RestrictedTable {
        vectors,
        weights,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::accuracy::Accuracy;
    use crate::model::Item;
    use crate::rational::int;

    fn e1() -> Instance {
        Instance::new(
            vec![Item::new(int(2), int(1)), Item::new(int(3), int(2))],
            vec![int(2), int(3)],
            vec![int(1), int(1)],
        )
    }

    #[test]
    fn opt_examples() {
        let (v, s) = exact_opt(&e1(), OracleBudget::default()).unwrap();
        assert_eq!(v, int(8));
        assert_eq!(s.intro, vec![Some(1), Some(0)]);

        let none = Instance::new(vec![], vec![int(1)], vec![int(1)]);
        assert_eq!(exact_opt(&none, OracleBudget::default()).unwrap().0, int(0));

        let tight = Instance::new(vec![Item::new(int(5), int(1))], vec![int(0), int(0)], vec![int(1), int(1)]);
        assert_eq!(exact_opt(&tight, OracleBudget::default()).unwrap().0, int(0));
    }

    #[test]
    fn inverse_examples() {
        let (w, _) = exact_inverse(&e1(), &int(8), OracleBudget::default()).unwrap().unwrap();
        assert_eq!(w, int(3));
        let (w, s) = exact_inverse(&e1(), &int(0), OracleBudget::default()).unwrap().unwrap();
        assert_eq!(w, int(0));
        assert!(s.is_empty());
        assert_eq!(exact_inverse(&e1(), &int(9), OracleBudget::default()).unwrap(), None);
    }

    #[test]
    fn budget_is_enforced() {
        let items = vec![Item::new(int(1), int(1)); 20];
        let inst = Instance::new(items, vec![int(1), int(2), int(3)], vec![int(1); 3]);
        assert!(matches!(
            exact_opt(&inst, OracleBudget::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn restricted_dp_small_class() {
        let inst = Instance::new(
            vec![Item::new(int(1), int(1)), Item::new(int(1), int(2))],
            vec![int(1), int(3)],
            vec![int(1), int(1)],
        );
        let classes = ProfitClasses::build(&inst, Accuracy::from_inverse(5).unwrap());
        let t = exact_restricted_dp(&inst, &classes, ClassInterval::new(0, 0), OracleBudget::default()).unwrap();
        assert_eq!(t.vectors, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(t.values[0], vec![Some(int(0)), None, None]);
        assert_eq!(t.value_of(2, &[2]), Some(int(3)));
        assert_eq!(t.best_within(&int(3)), Some(int(3)));
    }

    #[test]
    fn restricted_dp_matches_opt_on_equal_profits() {
        // all profits equal and distinct weights: rounding is exact and the
        // optimum may be taken prefix-like
        let inst = Instance::new(
            vec![Item::new(int(2), int(3)), Item::new(int(2), int(1)), Item::new(int(2), int(2))],
            vec![int(1), int(3), int(6)],
            vec![int(2), int(1), int(1)],
        );
        let classes = ProfitClasses::build(&inst, Accuracy::from_inverse(5).unwrap());
        let t = exact_restricted_dp(&inst, &classes, ClassInterval::new(0, 0), OracleBudget::default()).unwrap();
        let (opt, _) = exact_opt(&inst, OracleBudget::default()).unwrap();
        assert_eq!(t.best_within(&int(6)), Some(opt));
    }
}
