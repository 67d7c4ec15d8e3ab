//! Inverse solver over the pruned vector family, and the scheme for
//! instances whose suffix-lambda ratio is small.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::accuracy::Accuracy;
use crate::classes::{ClassInterval, ProfitClasses};
use crate::error::{Error, Result};
use crate::model::{Instance, PeriodRemap, Solution, SuffixLambdas};
use crate::rational::Rational;
use crate::statespace::{Family, IntervalView};

/// Rounded-profit DP over one interval's family.
///
/// Values are stored as integers; multiply by [`BoundedDpTable::unit`] to get
/// rounded profit in the instance's own units.
#[derive(Debug, Clone)]
pub struct BoundedDpTable {
    pub interval: ClassInterval,
    pub family: Family,
    values: Vec<Vec<Option<BigInt>>>,
    back: Vec<Vec<usize>>,
    unit: Rational,
}

impl BoundedDpTable {
    pub fn horizon(&self) -> usize {
        self.values.len() - 1
    }

    pub fn unit(&self) -> &Rational {
        &self.unit
    }

    /// Rounded profit after `t` periods (`t = 0` is the empty start), or
    /// `None` for an unreachable state.
    pub fn value(&self, t: usize, vector: usize) -> Option<Rational> {
        self.values[t][vector]
            .as_ref()
            .map(|v| Rational::from_integer(v.clone()) * &self.unit)
    }

    /// Vector indices for periods `1..=T` ending at `vector`.
    pub fn chain(&self, vector: usize) -> Vec<usize> {
        let t_max = self.horizon();
        let mut out = vec![0; t_max];
        let mut cur = vector;
        for t in (1..=t_max).rev() {
            out[t - 1] = cur;
            cur = self.back[t][cur];
        }
        out
    }

    pub fn index_of(&self, counts: &[usize]) -> Option<usize> {
        self.family.vectors.iter().position(|v| v.counts == counts)
    }
}

fn lcm_of_denominators<'a>(xs: impl Iterator<Item = &'a Rational>) -> BigInt {
    xs.fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Runs the restricted DP: each period moves to a coordinatewise larger
/// family member whose weight fits, gaining `lambda^{t+}` times the rounded
/// profit of the newly added items.
pub fn dp_solve(
    view: &IntervalView<'_>,
    family: Family,
    capacities: &[Rational],
    suffix: &SuffixLambdas,
    scale: &Rational,
) -> BoundedDpTable {
    let k = view.accuracy().inverse();
    let lo = view.interval.lo;
    let hi = view.interval.hi;
    let kk = BigInt::from(k);
    let k1 = BigInt::from(k + 1);
    let class_value: Vec<BigInt> = view
        .classes
        .iter()
        .map(|c| num_traits::pow(k1.clone(), c.index - lo) * num_traits::pow(kk.clone(), hi - c.index))
        .collect();
    let lam_den = lcm_of_denominators(suffix.values().iter());
    let lam_int: Vec<BigInt> = suffix
        .values()
        .iter()
        .map(|l| (l * Rational::from_integer(lam_den.clone())).to_integer())
        .collect();
    let growth = view.accuracy().growth();
    let unit = scale * crate::rational::pow(&growth, lo)
        / Rational::from_integer(num_traits::pow(kk, hi - lo) * &lam_den);

    let vectors = &family.vectors;
    let size = vectors.len();
    let profit: Vec<BigInt> = vectors
        .iter()
        .map(|v| {
            v.counts
                .iter()
                .zip(&class_value)
                .fold(BigInt::zero(), |acc, (&n, c)| acc + c * BigInt::from(n))
        })
        .collect();
    let preds: Vec<Vec<usize>> = (0..size)
        .map(|i| {
            (0..size)
                .filter(|&j| {
                    vectors[j]
                        .counts
                        .iter()
                        .zip(&vectors[i].counts)
                        .all(|(a, b)| a <= b)
                })
                .collect()
        })
        .collect();

    let horizon = capacities.len();
    let mut values: Vec<Vec<Option<BigInt>>> = Vec::with_capacity(horizon + 1);
    let mut back: Vec<Vec<usize>> = Vec::with_capacity(horizon + 1);
    values.push(
        vectors
            .iter()
            .map(|v| v.counts.iter().all(|&n| n == 0).then(BigInt::zero))
            .collect(),
    );
    back.push(vec![0; size]);
    for t in 0..horizon {
        let lam = &lam_int[t];
        let prev = &values[t];
        let shifted: Vec<Option<BigInt>> = prev
            .iter()
            .zip(&profit)
            .map(|(v, p)| v.as_ref().map(|v| v - lam * p))
            .collect();
        let mut row = vec![None; size];
        let mut brow = vec![0; size];
        for i in 0..size {
            if vectors[i].weight > capacities[t] {
                continue;
            }
            let mut best: Option<(&BigInt, usize)> = None;
            for &j in &preds[i] {
                if let Some(s) = &shifted[j] {
                    if best.is_none_or(|(b, _)| s > b) {
                        best = Some((s, j));
                    }
                }
            }
            if let Some((s, j)) = best {
                row[i] = Some(s + lam * &profit[i]);
                brow[i] = j;
            }
        }
        values.push(row);
        back.push(brow);
    }
    BoundedDpTable {
        interval: view.interval,
        family,
        values,
        back,
        unit,
    }
}

/// Turns per-period counts into introduction times: the `k`-th lightest
/// item of a class enters at the first period whose count reaches `k`.
pub fn prefix_to_solution(
    view: &IntervalView<'_>,
    chain: &[Vec<usize>],
    n_items: usize,
) -> Result<Solution> {
    for t in 1..chain.len() {
        if chain[t].iter().zip(&chain[t - 1]).any(|(a, b)| a < b) {
            return Err(Error::ChainNotMonotone { period: t + 1 });
        }
    }
    let mut intro = vec![None; n_items];
    for (j, class) in view.classes.iter().enumerate() {
        let mut placed = 0;
        for (t, counts) in chain.iter().enumerate() {
            while placed < counts[j] {
                intro[class.items[placed]] = Some(t);
                placed += 1;
            }
        }
    }
    Ok(Solution::new(intro))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseResult {
    pub solution: Solution,
    pub rounded_profit: Rational,
    pub true_profit: Rational,
    pub weight: Rational,
}

#[derive(Debug, Clone)]
struct Entry {
    value: Rational,
    weight: Rational,
    /// `(table, vector)`; `None` is the empty solution.
    source: Option<(usize, usize)>,
}

/// Inverse solver prepared once per instance and accuracy; each profit
/// requirement is then answered by a binary search over final states.
#[derive(Debug, Clone)]
pub struct InverseSolver {
    original: Instance,
    remap: PeriodRemap,
    reduced_horizon: usize,
    accuracy: Accuracy,
    classes: ProfitClasses,
    tables: Vec<BoundedDpTable>,
    entries: Vec<Entry>,
    best_prefix: Vec<usize>,
}

impl InverseSolver {
    pub fn new(instance: &Instance, accuracy: Accuracy) -> Result<Self> {
        instance.validate()?;
        let (reduced, remap) = match instance.preprocess() {
            Ok(pair) => pair,
            Err(Error::AllLambdasZero) => {
                return Ok(Self::trivial(instance, accuracy));
            }
            Err(e) => return Err(e),
        };
        let classes = ProfitClasses::build(&reduced, accuracy);
        let suffix = reduced.suffix_lambdas();
        let rho = suffix.ratio();
        let mut tables = Vec::new();
        let mut entries = vec![Entry {
            value: Rational::zero(),
            weight: Rational::zero(),
            source: None,
        }];
        for interval in classes.candidate_intervals(&rho, None) {
            let view = IntervalView::new(&classes, interval);
            let weights = view
                .classes
                .iter()
                .flat_map(|c| c.items.iter().map(|&i| &reduced.items[i].weight));
            let w_min = weights.clone().min().expect("interval top is non-empty").clone();
            let w_max = weights.max().expect("interval top is non-empty").clone();
            let family = view.enumerate_family(&w_min, &w_max, reduced.n());
            let table = dp_solve(&view, family, &reduced.capacities, &suffix, classes.scale());
            let t_max = table.horizon();
            for (v, vec) in table.family.vectors.iter().enumerate() {
                if let Some(value) = table.value(t_max, v) {
                    entries.push(Entry {
                        value,
                        weight: vec.weight.clone(),
                        source: Some((tables.len(), v)),
                    });
                }
            }
            tables.push(table);
        }
        Ok(Self::finish(
            instance.clone(),
            remap,
            reduced.horizon(),
            accuracy,
            classes,
            tables,
            entries,
        ))
    }

    fn trivial(instance: &Instance, accuracy: Accuracy) -> Self {
        let entries = vec![Entry {
            value: Rational::zero(),
            weight: Rational::zero(),
            source: None,
        }];
        Self::finish(
            instance.clone(),
            PeriodRemap::identity(instance.horizon()),
            instance.horizon(),
            accuracy,
            ProfitClasses::build(&Instance::new(vec![], vec![], vec![]), accuracy),
            Vec::new(),
            entries,
        )
    }

    fn finish(
        original: Instance,
        remap: PeriodRemap,
        reduced_horizon: usize,
        accuracy: Accuracy,
        classes: ProfitClasses,
        tables: Vec<BoundedDpTable>,
        mut entries: Vec<Entry>,
    ) -> Self {
        // value descending; stable sort keeps earlier intervals first on ties
        entries.sort_by(|a, b| b.value.cmp(&a.value));
        let mut best_prefix = Vec::with_capacity(entries.len());
        let mut best = 0;
        for (i, e) in entries.iter().enumerate() {
            if e.weight < entries[best].weight {
                best = i;
            }
            best_prefix.push(best);
        }
        Self {
            original,
            remap,
            reduced_horizon,
            accuracy,
            classes,
            tables,
            entries,
            best_prefix,
        }
    }

    pub fn accuracy(&self) -> Accuracy {
        self.accuracy
    }

    pub fn instance(&self) -> &Instance {
        &self.original
    }

    pub fn tables(&self) -> &[BoundedDpTable] {
        &self.tables
    }

    pub fn classes(&self) -> &ProfitClasses {
        &self.classes
    }

    /// `(1 - 3 eps) * phi`
    pub fn threshold(&self, phi: &Rational) -> Rational {
        self.accuracy.one_minus(3) * phi
    }

    /// Position of the lightest final state meeting the requirement.
    fn select(&self, phi: &Rational) -> Option<usize> {
        let threshold = self.threshold(phi);
        let count = self.entries.partition_point(|e| e.value >= threshold);
        (count > 0).then(|| self.best_prefix[count - 1])
    }

    /// Weight of the answer to `phi`, without building the solution.
    pub fn weight_for(&self, phi: &Rational) -> Option<&Rational> {
        self.select(phi).map(|i| &self.entries[i].weight)
    }

    pub fn solve(&self, phi: &Rational) -> Option<InverseResult> {
        let chosen = self.select(phi)?;
        let entry = &self.entries[chosen];
        let solution = match entry.source {
            None => Solution::empty(self.original.n()),
            Some((t, v)) => {
                let table = &self.tables[t];
                let view = IntervalView::new(&self.classes, table.interval);
                let chain: Vec<Vec<usize>> = table
                    .chain(v)
                    .into_iter()
                    .map(|i| table.family.vectors[i].counts.clone())
                    .collect();
                debug_assert_eq!(chain.len(), self.reduced_horizon);
                let reduced = prefix_to_solution(&view, &chain, self.original.n())
                    .expect("dp chains are monotone");
                self.remap.lift(&reduced)
            }
        };
        let true_profit = self
            .original
            .objective(&solution)
            .expect("dp solutions respect capacities");
        Some(InverseResult {
            solution,
            rounded_profit: entry.value.clone(),
            true_profit,
            weight: entry.weight.clone(),
        })
    }

    /// Largest rounded final value over all candidate intervals.
    pub fn best_value(&self) -> &Rational {
        &self.entries[0].value
    }
}

/// Inverse problem for one profit requirement; `Ok(None)` when no final
/// state meets the `(1 - 3 eps)` criterion.
pub fn solve_inverse(
    instance: &Instance,
    phi: &Rational,
    accuracy: Accuracy,
) -> Result<Option<InverseResult>> {
    Ok(InverseSolver::new(instance, accuracy)?.solve(phi))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedOutcome {
    pub solution: Solution,
    pub profit: Rational,
    /// Number of profit guesses tried, zero included.
    pub guesses: usize,
}

/// Profit guesses `0` and `base * (1 + eps)^k` up to `n * lambda^{1+} * p_max`,
/// where `base` is the smallest lambda coefficient times the smallest profit.
pub fn profit_guesses(instance: &Instance, accuracy: Accuracy) -> Vec<Rational> {
    let mut out = vec![Rational::zero()];
    let (Some(p_min), Some(p_max)) = (instance.min_profit(), instance.max_profit()) else {
        return out;
    };
    let suffix = instance.suffix_lambdas();
    let lam_min = instance
        .lambdas
        .iter()
        .chain(suffix.values())
        .min()
        .expect("nonempty horizon");
    let lam_max = instance
        .lambdas
        .iter()
        .chain(suffix.values())
        .max()
        .expect("nonempty horizon");
    let top = Rational::from_integer(BigInt::from(instance.n())) * lam_max * p_max;
    let growth = accuracy.growth();
    let mut phi = lam_min * p_min;
    if phi.is_zero() {
        return out;
    }
    while phi <= top {
        out.push(phi.clone());
        phi *= &growth;
    }
    out
}

/// Scheme for small suffix-lambda ratio at internal accuracy `eps`: profit at
/// least `(1 - 5 eps)` of optimal.
pub fn solve_bounded(instance: &Instance, accuracy: Accuracy) -> Result<BoundedOutcome> {
    instance.validate()?;
    let (reduced, remap) = match instance.preprocess() {
        Ok(pair) => pair,
        Err(Error::AllLambdasZero) => {
            return Ok(BoundedOutcome {
                solution: Solution::empty(instance.n()),
                profit: Rational::zero(),
                guesses: 1,
            })
        }
        Err(e) => return Err(e),
    };
    let solver = InverseSolver::new(&reduced, accuracy)?;
    let guesses = profit_guesses(&reduced, accuracy);
    let mut best = (Solution::empty(reduced.n()), Rational::zero());
    for phi in &guesses {
        match solver.solve(phi) {
            Some(r) if r.true_profit > best.1 => best = (r.solution, r.true_profit),
            Some(_) => {}
            None => break,
        }
    }
    Ok(BoundedOutcome {
        solution: remap.lift(&best.0),
        profit: best.1,
        guesses: guesses.len(),
    })
}

/// [`solve_bounded`] with a user-facing accuracy in `(0, 1)`.
pub fn solve_bounded_public(instance: &Instance, eps: &Rational) -> Result<BoundedOutcome> {
    solve_bounded(instance, Accuracy::from_public(eps, 5)?)
}
