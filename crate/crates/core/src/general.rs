//! Approximation scheme for arbitrary lambda profiles.
//!
//! Periods are grouped into geometric bands of `lambda^{t+}`; one band in
//! every `1/eps` is discarded (the offset is enumerated), and the surviving
//! runs of bands form clusters. A DP over (cluster, highest class used,
//! profit target) then splices together single-cluster inverse solutions,
//! each drawing from a contiguous range of profit classes above the ranges
//! used by earlier clusters.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::accuracy::Accuracy;
use crate::bounded::InverseSolver;
use crate::classes::ProfitClasses;
use crate::error::{Error, Result};
use crate::model::{Instance, Item, Solution};
use crate::rational::{positive_part, Rational};

/// Band index (1-based) of every period: band `m` holds the periods with
/// `lambda^{t+}` in `(q^m lambda^{1+}, q^{m-1} lambda^{1+}]`, `q = eps / n`.
pub fn band_indices(instance: &Instance, accuracy: Accuracy) -> Vec<usize> {
    let suffix = instance.suffix_lambdas();
    let q = accuracy.value() / Rational::from_integer(BigInt::from(instance.n().max(1)));
    let top = suffix.first().clone();
    suffix
        .values()
        .iter()
        .map(|v| {
            let mut m = 1;
            let mut threshold = &top * &q;
            while *v <= threshold {
                threshold *= &q;
                m += 1;
            }
            m
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPlan {
    pub offset: u64,
    /// Band of each period (1-based band numbers).
    pub bands: Vec<usize>,
    /// Non-empty clusters in time order, each a sorted list of periods.
    pub clusters: Vec<Vec<usize>>,
}

impl ClusterPlan {
    pub fn is_bad_band(&self, band: usize, accuracy: Accuracy) -> bool {
        band as u64 % accuracy.inverse() == self.offset
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// Cluster (0-based) containing `period`, if it is not in a bad band.
    pub fn cluster_of(&self, period: usize) -> Option<usize> {
        self.clusters.iter().position(|c| c.contains(&period))
    }

    /// Last period of cluster `m` (0-based).
    pub fn end_of(&self, m: usize) -> usize {
        *self.clusters[m].last().expect("clusters are non-empty")
    }
}

/// Groups the periods of good bands into clusters separated by bad bands.
pub fn build_plan(instance: &Instance, accuracy: Accuracy, offset: u64) -> ClusterPlan {
    let k = accuracy.inverse();
    assert!(offset < k, "offset must be below 1/eps");
    let bands = band_indices(instance, accuracy);
    let mut grouped: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (t, &m) in bands.iter().enumerate() {
        let m = m as u64;
        if m % k == offset {
            continue;
        }
        // number of bad bands before band m
        let bad_before = if offset == 0 { m / k } else { (m + k - offset) / k };
        grouped.entry(bad_before).or_default().push(t);
    }
    ClusterPlan {
        offset,
        bands,
        clusters: grouped.into_values().collect(),
    }
}

/// Drops every item introduced in a bad band.
pub fn drop_bad_periods(plan: &ClusterPlan, accuracy: Accuracy, solution: &Solution) -> Solution {
    Solution::new(
        solution
            .intro
            .iter()
            .map(|t| t.filter(|&t| !plan.is_bad_band(plan.bands[t], accuracy)))
            .collect(),
    )
}

/// Discretized profit targets: `0` and `delta * (1 + eps/M)^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfitGrid {
    pub delta: Rational,
    pub step: Rational,
    pub values: Vec<Rational>,
}

impl ProfitGrid {
    /// `delta = (eps/M) lambda_T p_max`. The exponent runs to the larger of
    /// `ceil((M/eps) ln((M/eps) lambda^{1+}/lambda_T))` and the first power
    /// reaching `lambda^{1+} * sum(p)`.
    pub fn new(instance: &Instance, accuracy: Accuracy, clusters: usize) -> Self {
        assert!(clusters > 0);
        let m = Rational::from_integer(BigInt::from(clusters));
        let eps = accuracy.value();
        let suffix = instance.suffix_lambdas();
        let lambda_last = instance.lambdas.last().expect("nonempty horizon");
        let p_max = instance.max_profit().cloned().unwrap_or_else(Rational::zero);
        let delta = &eps / &m * lambda_last * &p_max;
        let step = Rational::one() + &eps / &m;

        let m_over_eps = (&m / &eps).to_f64().unwrap_or(f64::MAX);
        let ratio = (suffix.first() / lambda_last).to_f64().unwrap_or(f64::MAX);
        let log_cap = (m_over_eps * (m_over_eps * ratio).ln()).ceil().max(0.0) as usize;
        let ceiling = suffix.first() * instance.total_profit();

        let mut values = vec![Rational::zero()];
        if delta.is_zero() {
            return Self {
                delta,
                step,
                values,
            };
        }
        let mut phi = delta.clone();
        let mut j = 0;
        loop {
            values.push(phi.clone());
            if j >= log_cap && phi >= ceiling {
                break;
            }
            phi *= &step;
            j += 1;
        }
        Self {
            delta,
            step,
            values,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Items of a class range restricted to one cluster's periods.
#[derive(Debug, Clone)]
pub struct SubInstance {
    pub instance: Instance,
    /// Original index of each sub-instance item.
    pub items: Vec<usize>,
    /// Period of the parent instance for each sub-instance period.
    pub periods: Vec<usize>,
}

/// Items of classes `lo..=hi` (none when `lo > hi`), periods of cluster `m`
/// with capacities reduced by `offset_weight` (clamped at zero), and the
/// lambdas of those periods only.
pub fn single_cluster_instance(
    instance: &Instance,
    classes: &ProfitClasses,
    plan: &ClusterPlan,
    m: usize,
    lo: usize,
    hi: usize,
    offset_weight: &Rational,
) -> Result<SubInstance> {
    let periods = plan
        .clusters
        .get(m)
        .filter(|c| !c.is_empty())
        .ok_or(Error::EmptyCluster { cluster: m })?
        .clone();
    let items: Vec<usize> = (0..instance.n())
        .filter(|&i| {
            let c = classes.class_of(i);
            lo <= c && c <= hi
        })
        .collect();
    let sub = Instance::new(
        items
            .iter()
            .map(|&i| Item::new(instance.items[i].profit.clone(), instance.items[i].weight.clone()))
            .collect(),
        periods
            .iter()
            .map(|&t| positive_part(&instance.capacities[t] - offset_weight))
            .collect(),
        periods.iter().map(|&t| instance.lambdas[t].clone()).collect(),
    );
    Ok(SubInstance {
        instance: sub,
        items,
        periods,
    })
}

/// Per class state and target: best weight and where it came from.
type Layer = Vec<Vec<Option<(Rational, Option<Back>)>>>;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Back {
    prev_state: usize,
    prev_target: usize,
}

/// Minimum weight per (cluster count, class state, profit target).
///
/// Class state `0` stands for "no class yet"; state `s >= 1` is the `s`-th
/// non-empty class in increasing order.
#[derive(Debug, Clone)]
pub struct ClusterDpTable {
    pub class_states: Vec<Option<usize>>,
    pub grid: ProfitGrid,
    cells: Vec<Layer>,
}

impl ClusterDpTable {
    pub fn clusters(&self) -> usize {
        self.cells.len() - 1
    }

    /// `None` is an infeasible (infinite) state.
    pub fn value(&self, m: usize, state: usize, target: usize) -> Option<&Rational> {
        self.cells[m][state][target].as_ref().map(|(w, _)| w)
    }

    /// State index of a class (`None` = no class).
    pub fn state_of(&self, class: Option<usize>) -> Option<usize> {
        self.class_states.iter().position(|&c| c == class)
    }

    pub fn last_state(&self) -> usize {
        self.class_states.len() - 1
    }

    /// Largest target index with a finite value at the final cluster and class.
    pub fn best_target(&self) -> Option<usize> {
        let m = self.clusters();
        let s = self.last_state();
        (0..self.grid.len()).rev().find(|&g| self.cells[m][s][g].is_some())
    }
}

type SolverKey = (usize, usize, usize, Rational);

/// Shared context for one clustering.
struct ClusterContext<'a> {
    instance: &'a Instance,
    classes: &'a ProfitClasses,
    plan: &'a ClusterPlan,
    accuracy: Accuracy,
    class_states: Vec<Option<usize>>,
    solvers: HashMap<SolverKey, (SubInstance, InverseSolver)>,
}

impl ClusterContext<'_> {
    fn class_range(&self, from: usize, to: usize) -> (usize, usize) {
        let lo = self.class_states[from].map_or(0, |c| c + 1);
        let hi = self.class_states[to].expect("target state is a class");
        (lo, hi)
    }

    fn solver(&mut self, m: usize, from: usize, to: usize, omega: &Rational) -> Result<&(SubInstance, InverseSolver)> {
        let key = (m, from, to, omega.clone());
        if !self.solvers.contains_key(&key) {
            let (lo, hi) = self.class_range(from, to);
            let sub = single_cluster_instance(self.instance, self.classes, self.plan, m, lo, hi, omega)?;
            let solver = InverseSolver::new(&sub.instance, self.accuracy.third())?;
            self.solvers.insert(key.clone(), (sub, solver));
        }
        Ok(&self.solvers[&key])
    }
}

fn required_profit(grid: &ProfitGrid, target: usize, prev_target: usize) -> Rational {
    positive_part(&grid.values[target] - &grid.step * &grid.values[prev_target] - &grid.delta)
}

#[allow(clippy::needless_range_loop)]
fn run_cluster_dp(ctx: &mut ClusterContext<'_>, grid: &ProfitGrid) -> Result<ClusterDpTable> {
    let clusters = ctx.plan.cluster_count();
    let states = ctx.class_states.len();
    let g_len = grid.len();
    let mut start: Layer = vec![vec![None; g_len]; states];
    for row in &mut start {
        row[0] = Some((Rational::zero(), None));
    }
    let mut cells = vec![start];
    for m in 1..=clusters {
        let prev = &cells[m - 1];
        let mut layer: Layer = vec![vec![None; g_len]; states];
        layer[0][0] = Some((Rational::zero(), None));
        for s in 1..states {
            for s_prev in 0..=s {
                for g_prev in 0..g_len {
                    let Some((omega, _)) = prev[s_prev][g_prev].clone() else {
                        continue;
                    };
                    for g in g_prev..g_len {
                        let phi = required_profit(grid, g, g_prev);
                        let extra = if phi.is_zero() {
                            Rational::zero()
                        } else {
                            let (_, solver) = ctx.solver(m - 1, s_prev, s, &omega)?;
                            match solver.weight_for(&phi) {
                                Some(w) => w.clone(),
                                None => break,
                            }
                        };
                        let total = &omega + extra;
                        let better = layer[s][g].as_ref().is_none_or(|(w, _)| total < *w);
                        if better {
                            layer[s][g] = Some((
                                total,
                                Some(Back {
                                    prev_state: s_prev,
                                    prev_target: g_prev,
                                }),
                            ));
                        }
                    }
                }
            }
        }
        cells.push(layer);
    }
    Ok(ClusterDpTable {
        class_states: ctx.class_states.clone(),
        grid: grid.clone(),
        cells,
    })
}

/// Traces the table back from the best final target and merges the
/// single-cluster solutions along the path.
fn glue_solutions(ctx: &mut ClusterContext<'_>, table: &ClusterDpTable) -> Result<(Solution, usize)> {
    let mut solution = Solution::empty(ctx.instance.n());
    let best = table.best_target().ok_or(Error::NoFeasibleState)?;
    let (mut s, mut g) = (table.last_state(), best);
    for m in (1..=table.clusters()).rev() {
        let Some((_, Some(back))) = &table.cells[m][s][g] else {
            break;
        };
        let omega = table.cells[m - 1][back.prev_state][back.prev_target]
            .as_ref()
            .map(|(w, _)| w.clone())
            .expect("backpointers lead to finite states");
        let phi = required_profit(&table.grid, g, back.prev_target);
        if !phi.is_zero() {
            let (sub, solver) = ctx.solver(m - 1, back.prev_state, s, &omega)?;
            let result = solver.solve(&phi).expect("value came from this solver");
            for (j, t) in result.solution.intro.iter().enumerate() {
                if let Some(t) = t {
                    solution.intro[sub.items[j]] = Some(sub.periods[*t]);
                }
            }
        }
        s = back.prev_state;
        g = back.prev_target;
    }
    Ok((solution, best))
}

/// Cluster DP for one plan on a preprocessed instance.
pub fn cluster_dp(
    instance: &Instance,
    classes: &ProfitClasses,
    plan: &ClusterPlan,
    grid: &ProfitGrid,
) -> Result<ClusterDpTable> {
    let mut ctx = context(instance, classes, plan);
    run_cluster_dp(&mut ctx, grid)
}

/// Builds the table and glues the solution in one pass.
pub fn cluster_dp_and_glue(
    instance: &Instance,
    classes: &ProfitClasses,
    plan: &ClusterPlan,
    grid: &ProfitGrid,
) -> Result<(ClusterDpTable, Solution)> {
    let mut ctx = context(instance, classes, plan);
    let table = run_cluster_dp(&mut ctx, grid)?;
    let (solution, _) = glue_solutions(&mut ctx, &table)?;
    Ok((table, solution))
}

fn context<'a>(instance: &'a Instance, classes: &'a ProfitClasses, plan: &'a ClusterPlan) -> ClusterContext<'a> {
    let mut class_states = vec![None];
    class_states.extend(classes.indices().into_iter().map(Some));
    ClusterContext {
        instance,
        classes,
        plan,
        accuracy: classes.accuracy(),
        class_states,
        solvers: HashMap::new(),
    }
}

/// Why a solution is not an uncrossing-stars solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StarViolation {
    OutsideClusters { item: usize, period: usize },
    ClassInTwoClusters { class: usize, clusters: (usize, usize) },
    Crossing { low_class: usize, high_class: usize },
}

/// Checks that every class is used by at most one cluster and that the
/// cluster order agrees with the class order.
pub fn audit_uncrossing_stars(
    plan: &ClusterPlan,
    classes: &ProfitClasses,
    solution: &Solution,
) -> std::result::Result<(), StarViolation> {
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    for (item, t) in solution.intro.iter().enumerate() {
        let Some(t) = *t else { continue };
        let m = plan
            .cluster_of(t)
            .ok_or(StarViolation::OutsideClusters { item, period: t })?;
        let class = classes.class_of(item);
        match owner.get(&class) {
            Some(&other) if other != m => {
                return Err(StarViolation::ClassInTwoClusters {
                    class,
                    clusters: (other.min(m), other.max(m)),
                })
            }
            _ => {
                owner.insert(class, m);
            }
        }
    }
    let edges: Vec<(usize, usize)> = owner.into_iter().collect();
    for pair in edges.windows(2) {
        let ((l1, m1), (l2, m2)) = (pair[0], pair[1]);
        if m1 > m2 {
            return Err(StarViolation::Crossing {
                low_class: l1,
                high_class: l2,
            });
        }
    }
    Ok(())
}

/// Outcome of one offset.
#[derive(Debug, Clone)]
pub struct OffsetRun {
    pub plan: ClusterPlan,
    pub delta: Option<Rational>,
    /// Largest profit target reached at the final state.
    pub reached_target: Rational,
    /// Solution on the preprocessed horizon.
    pub reduced_solution: Solution,
    pub profit: Rational,
}

#[derive(Debug, Clone)]
pub struct GeneralReport {
    pub accuracy: Accuracy,
    /// Best solution on the original horizon.
    pub solution: Solution,
    pub profit: Rational,
    pub runs: Vec<OffsetRun>,
    /// Preprocessed instance the runs refer to (`None` if every lambda is zero).
    pub reduced: Option<Instance>,
}

/// Runs every offset at internal accuracy `eps`; profit is at least
/// `(1 - 7 eps)` of optimal.
pub fn solve_with_accuracy(instance: &Instance, accuracy: Accuracy) -> Result<GeneralReport> {
    instance.validate()?;
    let (reduced, remap) = match instance.preprocess() {
        Ok(pair) => pair,
        Err(Error::AllLambdasZero) => {
            return Ok(GeneralReport {
                accuracy,
                solution: Solution::empty(instance.n()),
                profit: Rational::zero(),
                runs: Vec::new(),
                reduced: None,
            })
        }
        Err(e) => return Err(e),
    };
    let classes = ProfitClasses::build(&reduced, accuracy);
    let mut done: HashMap<Vec<Vec<usize>>, (Option<Rational>, Rational, Solution)> = HashMap::new();
    let mut runs = Vec::new();
    for offset in 0..accuracy.inverse() {
        let plan = build_plan(&reduced, accuracy, offset);
        if !done.contains_key(&plan.clusters) {
            let outcome = if plan.cluster_count() == 0 || reduced.n() == 0 {
                (None, Rational::zero(), Solution::empty(reduced.n()))
            } else {
                let grid = ProfitGrid::new(&reduced, accuracy, plan.cluster_count());
                let (table, solution) = cluster_dp_and_glue(&reduced, &classes, &plan, &grid)?;
                let best = table.best_target().ok_or(Error::NoFeasibleState)?;
                (Some(grid.delta.clone()), grid.values[best].clone(), solution)
            };
            done.insert(plan.clusters.clone(), outcome);
        }
        let (delta, reached, solution) = done[&plan.clusters].clone();
        let profit = reduced.objective(&solution)?;
        runs.push(OffsetRun {
            plan,
            delta,
            reached_target: reached,
            reduced_solution: solution,
            profit,
        });
    }
    let best = runs
        .iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.profit.cmp(&b.profit).then(j.cmp(i)))
        .map(|(i, _)| i)
        .expect("at least one offset");
    Ok(GeneralReport {
        accuracy,
        solution: remap.lift(&runs[best].reduced_solution),
        profit: runs[best].profit.clone(),
        runs,
        reduced: Some(reduced),
    })
}

/// Full scheme with a user-facing accuracy in `(0, 1)`: the internal accuracy
/// is `1/max(5, ceil(7/eps))`.
pub fn solve(instance: &Instance, eps: &Rational) -> Result<GeneralReport> {
    solve_with_accuracy(instance, Accuracy::from_public(eps, 7)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn acc(k: u64) -> Accuracy {
        Accuracy::from_inverse(k).unwrap()
    }

    /// Five unit items; suffix lambdas (1, 1/2, 1/50).
    fn banded() -> Instance {
        Instance::new(
            vec![Item::new(int(1), int(1)); 5],
            vec![int(1), int(2), int(3)],
            vec![ratio(1, 2), ratio(24, 50), ratio(1, 50)],
        )
    }

    fn e1() -> Instance {
        Instance::new(
            vec![Item::new(int(2), int(1)), Item::new(int(3), int(2))],
            vec![int(2), int(3)],
            vec![int(1), int(1)],
        )
    }

    #[test]
    fn bands_and_clusters() {
        let inst = banded();
        assert_eq!(
            inst.suffix_lambdas().values(),
            &[int(1), ratio(1, 2), ratio(1, 50)]
        );
        assert_eq!(band_indices(&inst, acc(5)), vec![1, 1, 2]);
        let p0 = build_plan(&inst, acc(5), 0);
        assert_eq!(p0.clusters, vec![vec![0, 1, 2]]);
        let p2 = build_plan(&inst, acc(5), 2);
        assert_eq!(p2.clusters, vec![vec![0, 1]]);
        let p1 = build_plan(&inst, acc(5), 1);
        assert_eq!(p1.clusters, vec![vec![2]]);
    }

    #[test]
    fn uniform_lambda_single_band() {
        let inst = Instance::new(vec![Item::new(int(1), int(1)); 2], vec![int(1); 3], vec![int(1); 3]);
        for offset in 0..5 {
            let plan = build_plan(&inst, acc(5), offset);
            if offset == 1 {
                assert!(plan.clusters.is_empty());
            } else {
                assert_eq!(plan.clusters, vec![vec![0, 1, 2]]);
            }
        }
    }

    #[test]
    fn grid_is_geometric() {
        let grid = ProfitGrid::new(&e1(), acc(5), 1);
        assert_eq!(grid.delta, ratio(3, 5));
        assert_eq!(grid.values[0], int(0));
        for w in grid.values[1..].windows(2) {
            assert_eq!(&w[1] / &w[0], ratio(6, 5));
        }
        assert!(grid.values.last().unwrap() >= &int(2 * 5));
    }

    #[test]
    fn sub_instance_examples() {
        let inst = e1();
        let classes = ProfitClasses::build(&inst, acc(5));
        let plan = build_plan(&inst, acc(5), 0);
        let sub = single_cluster_instance(&inst, &classes, &plan, 0, 0, 2, &int(0)).unwrap();
        assert_eq!(sub.instance.capacities, inst.capacities);
        assert_eq!(sub.items, vec![0, 1]);
        let sub = single_cluster_instance(&inst, &classes, &plan, 0, 0, 2, &int(5)).unwrap();
        assert_eq!(sub.instance.capacities, vec![int(0), int(0)]);
        let sub = single_cluster_instance(&inst, &classes, &plan, 0, 3, 2, &int(0)).unwrap();
        assert_eq!(sub.instance.n(), 0);
        assert!(matches!(
            single_cluster_instance(&inst, &classes, &plan, 4, 0, 2, &int(0)),
            Err(Error::EmptyCluster { .. })
        ));
    }

    #[test]
    fn dp_terminal_rules() {
        let inst = e1();
        let classes = ProfitClasses::build(&inst, acc(5));
        let plan = build_plan(&inst, acc(5), 0);
        let grid = ProfitGrid::new(&inst, acc(5), 1);
        let table = cluster_dp(&inst, &classes, &plan, &grid).unwrap();
        for m in 0..=1 {
            for s in 0..table.class_states.len() {
                assert_eq!(table.value(m, s, 0), Some(&int(0)));
            }
        }
        for g in 1..grid.len() {
            assert_eq!(table.value(0, table.last_state(), g), None);
            assert_eq!(table.value(1, 0, g), None);
        }
    }

    #[test]
    fn general_examples() {
        let report = solve(&e1(), &ratio(1, 2)).unwrap();
        assert!(report.profit >= int(4));
        assert_eq!(e1().objective(&report.solution).unwrap(), report.profit);

        let late = Instance::new(
            vec![Item::new(int(3), int(2))],
            vec![int(1), int(2)],
            vec![int(1), int(2)],
        );
        let report = solve(&late, &ratio(1, 2)).unwrap();
        assert_eq!(report.solution.intro, vec![Some(1)]);
        assert_eq!(report.profit, int(6));
    }

    #[test]
    fn audit_flags_bad_graphs() {
        let inst = e1();
        let classes = ProfitClasses::build(&inst, acc(5));
        let plan = ClusterPlan {
            offset: 0,
            bands: vec![1, 2],
            clusters: vec![vec![0], vec![1]],
        };
        // item 0 (class 0) in cluster 1, item 1 (class 2) in cluster 0: crossing
        let crossed = Solution::new(vec![Some(1), Some(0)]);
        assert!(matches!(
            audit_uncrossing_stars(&plan, &classes, &crossed),
            Err(StarViolation::Crossing { .. })
        ));
        let fine = Solution::new(vec![Some(0), Some(1)]);
        assert_eq!(audit_uncrossing_stars(&plan, &classes, &fine), Ok(()));
        let one_cluster = build_plan(&inst, acc(5), 0);
        assert_eq!(audit_uncrossing_stars(&one_cluster, &classes, &crossed), Ok(()));
    }
}
