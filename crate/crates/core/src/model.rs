//! Instances, solutions and the objective.
//!
//! Periods are 0-based inside the library (`0..T`); errors report them 1-based.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub profit: Rational,
    pub weight: Rational,
}

impl Item {
    pub fn new(profit: Rational, weight: Rational) -> Self {
        Self { profit, weight }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub items: Vec<Item>,
    pub capacities: Vec<Rational>,
    pub lambdas: Vec<Rational>,
}

/// Maps periods of a preprocessed instance back to the original horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodRemap {
    pub kept: Vec<usize>,
    pub original_horizon: usize,
}

impl PeriodRemap {
    pub fn identity(horizon: usize) -> Self {
        Self {
            kept: (0..horizon).collect(),
            original_horizon: horizon,
        }
    }

    pub fn to_original(&self, period: usize) -> usize {
        self.kept[period]
    }

    /// Re-indexes a reduced-horizon solution onto the original horizon.
    pub fn lift(&self, solution: &Solution) -> Solution {
        Solution {
            intro: solution
                .intro
                .iter()
                .map(|t| t.map(|t| self.kept[t]))
                .collect(),
        }
    }
}

impl Instance {
    pub fn new(items: Vec<Item>, capacities: Vec<Rational>, lambdas: Vec<Rational>) -> Self {
        Self {
            items,
            capacities,
            lambdas,
        }
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn horizon(&self) -> usize {
        self.capacities.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.capacities.len() != self.lambdas.len() {
            return Err(Error::LengthMismatch {
                capacities: self.capacities.len(),
                lambdas: self.lambdas.len(),
            });
        }
        if self.capacities.is_empty() {
            return Err(Error::EmptyHorizon);
        }
        for (i, item) in self.items.iter().enumerate() {
            if !item.profit.is_positive() {
                return Err(Error::NonPositiveProfit { item: i });
            }
            if !item.weight.is_positive() {
                return Err(Error::NonPositiveWeight { item: i });
            }
        }
        for (t, w) in self.capacities.iter().enumerate() {
            if w.is_negative() {
                return Err(Error::NegativeCapacity { period: t + 1 });
            }
            if t > 0 && *w < self.capacities[t - 1] {
                return Err(Error::DecreasingCapacity { period: t + 1 });
            }
        }
        for (t, l) in self.lambdas.iter().enumerate() {
            if l.is_negative() {
                return Err(Error::NegativeLambda { period: t + 1 });
            }
        }
        Ok(())
    }

    /// Drops every period whose lambda is zero.
    pub fn preprocess(&self) -> Result<(Instance, PeriodRemap)> {
        let kept: Vec<usize> = (0..self.horizon())
            .filter(|&t| !self.lambdas[t].is_zero())
            .collect();
        if kept.is_empty() {
            return Err(Error::AllLambdasZero);
        }
        let reduced = Instance {
            items: self.items.clone(),
            capacities: kept.iter().map(|&t| self.capacities[t].clone()).collect(),
            lambdas: kept.iter().map(|&t| self.lambdas[t].clone()).collect(),
        };
        Ok((
            reduced,
            PeriodRemap {
                kept,
                original_horizon: self.horizon(),
            },
        ))
    }

    pub fn suffix_lambdas(&self) -> SuffixLambdas {
        SuffixLambdas::new(&self.lambdas)
    }

    pub fn max_profit(&self) -> Option<&Rational> {
        self.items.iter().map(|it| &it.profit).max()
    }

    pub fn min_profit(&self) -> Option<&Rational> {
        self.items.iter().map(|it| &it.profit).min()
    }

    pub fn total_profit(&self) -> Rational {
        self.items
            .iter()
            .fold(Rational::zero(), |acc, it| acc + &it.profit)
    }

    /// `w(S_t)` for every period.
    pub fn weights_by_period(&self, solution: &Solution) -> Vec<Rational> {
        let mut added = vec![Rational::zero(); self.horizon()];
        for (item, t) in self.items.iter().zip(&solution.intro) {
            if let Some(t) = *t {
                if t < added.len() {
                    added[t] += &item.weight;
                }
            }
        }
        let mut acc = Rational::zero();
        added
            .into_iter()
            .map(|w| {
                acc += w;
                acc.clone()
            })
            .collect()
    }

    fn check_shape(&self, solution: &Solution) -> Result<()> {
        if solution.intro.len() != self.n() {
            return Err(Error::SolutionShape {
                expected: self.n(),
                got: solution.intro.len(),
            });
        }
        for (i, t) in solution.intro.iter().enumerate() {
            if let Some(t) = *t {
                if t >= self.horizon() {
                    return Err(Error::PeriodOutOfRange {
                        item: i,
                        period: t + 1,
                        horizon: self.horizon(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn check_feasible(&self, solution: &Solution) -> Result<Feasibility> {
        self.check_shape(solution)?;
        for (t, (w, cap)) in self
            .weights_by_period(solution)
            .iter()
            .zip(&self.capacities)
            .enumerate()
        {
            if w > cap {
                return Ok(Feasibility::Violated { period: t });
            }
        }
        Ok(Feasibility::Feasible)
    }

    /// `sum_t lambda_t * p(S_t)`, rejecting infeasible solutions.
    pub fn objective(&self, solution: &Solution) -> Result<Rational> {
        if let Feasibility::Violated { period } = self.check_feasible(solution)? {
            return Err(Error::InfeasibleSolution { period: period + 1 });
        }
        Ok(self.objective_unchecked(solution))
    }

    /// Period-wise form of the objective; ignores capacities.
    pub fn objective_unchecked(&self, solution: &Solution) -> Rational {
        let mut added = vec![Rational::zero(); self.horizon()];
        for (item, t) in self.items.iter().zip(&solution.intro) {
            if let Some(t) = *t {
                added[t] += &item.profit;
            }
        }
        let mut packed = Rational::zero();
        let mut total = Rational::zero();
        for (p, lambda) in added.iter().zip(&self.lambdas) {
            packed += p;
            total += lambda * &packed;
        }
        total
    }

    /// Item-wise form of the objective: `sum_i p_i * lambda^{intro(i)+}`.
    pub fn objective_by_items(&self, solution: &Solution) -> Result<Rational> {
        self.check_shape(solution)?;
        let suffix = self.suffix_lambdas();
        Ok(self
            .items
            .iter()
            .zip(&solution.intro)
            .filter_map(|(item, t)| t.map(|t| &item.profit * suffix.at(t)))
            .fold(Rational::zero(), |acc, x| acc + x))
    }

    pub fn item_contribution(&self, solution: &Solution, item: usize) -> Result<Rational> {
        self.check_shape(solution)?;
        let t = solution
            .intro
            .get(item)
            .copied()
            .flatten()
            .ok_or(Error::ItemNotIntroduced { item })?;
        Ok(&self.items[item].profit * self.suffix_lambdas().at(t))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    /// First period (0-based) whose capacity is exceeded.
    Violated { period: usize },
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible)
    }
}

/// Suffix sums `lambda^{t+} = lambda_t + ... + lambda_T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixLambdas {
    values: Vec<Rational>,
}

impl SuffixLambdas {
    pub fn new(lambdas: &[Rational]) -> Self {
        let mut values = vec![Rational::zero(); lambdas.len()];
        let mut acc = Rational::zero();
        for t in (0..lambdas.len()).rev() {
            acc += &lambdas[t];
            values[t] = acc.clone();
        }
        Self { values }
    }

    pub fn at(&self, period: usize) -> &Rational {
        &self.values[period]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn first(&self) -> &Rational {
        &self.values[0]
    }

    pub fn last(&self) -> &Rational {
        self.values.last().expect("nonempty horizon")
    }

    /// `lambda^{1+} / lambda^{T+}`; requires a positive last lambda.
    pub fn ratio(&self) -> Rational {
        self.first() / self.last()
    }
}

/// Introduction period per item (`None` = never introduced).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Solution {
    pub intro: Vec<Option<usize>>,
}

impl Solution {
    pub fn empty(n: usize) -> Self {
        Self {
            intro: vec![None; n],
        }
    }

    pub fn new(intro: Vec<Option<usize>>) -> Self {
        Self { intro }
    }

    /// Items in `S_t`.
    pub fn packed_at(&self, period: usize) -> impl Iterator<Item = usize> + '_ {
        self.intro
            .iter()
            .enumerate()
            .filter(move |(_, t)| matches!(t, Some(t) if *t <= period))
            .map(|(i, _)| i)
    }

    pub fn is_empty(&self) -> bool {
        self.intro.iter().all(Option::is_none)
    }
}
