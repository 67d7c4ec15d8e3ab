//! Utilization vectors over a class interval, the up-rounding and truncation
//! maps, and direct enumeration of the pruned vector family.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::accuracy::Accuracy;
use crate::classes::{ClassInterval, ProfitClass, ProfitClasses};
use crate::rational::Rational;

/// Smallest power of two (any integer exponent) that is `>= x`, and `0` for `x = 0`.
pub fn pow2_up(x: &Rational) -> Rational {
    if x.is_zero() {
        return Rational::zero();
    }
    assert!(*x > Rational::zero(), "pow2_up needs a nonnegative argument");
    let two = Rational::from_integer(BigInt::from(2));
    let mut p = Rational::one();
    while p < *x {
        p *= &two;
    }
    loop {
        let half = &p / &two;
        if half < *x {
            return p;
        }
        p = half;
    }
}

/// The non-empty classes of one interval, in increasing class order.
///
/// Vectors over the view store one count per non-empty class; empty classes
/// of the interval are implicitly zero but still count towards `|L|`.
#[derive(Debug, Clone)]
pub struct IntervalView<'a> {
    pub interval: ClassInterval,
    pub classes: Vec<&'a ProfitClass>,
    accuracy: Accuracy,
}

/// Counts per non-empty class of an [`IntervalView`], with cached weight.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UtilizationVector {
    pub counts: Vec<usize>,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeavyProfile {
    /// Heavy flag per class of the view.
    pub heavy: Vec<bool>,
    pub excess: Rational,
    pub base: Rational,
    /// Multiplier per class; zero for light classes.
    pub multipliers: Vec<u64>,
}

impl HeavyProfile {
    pub fn multiplier_sum(&self) -> u64 {
        self.multipliers.iter().sum()
    }
}

/// The pruned family of vectors for one interval.
#[derive(Debug, Clone)]
pub struct Family {
    pub vectors: Vec<UtilizationVector>,
    /// Largest multiplier sum among enumerated heavy configurations.
    pub max_multiplier_sum: u64,
    /// `floor(3 |L| / (2 eps))`
    pub multiplier_cap: u64,
}

impl<'a> IntervalView<'a> {
    pub fn new(classes: &'a ProfitClasses, interval: ClassInterval) -> Self {
        Self {
            interval,
            classes: classes.in_interval(interval),
            accuracy: classes.accuracy(),
        }
    }

    pub fn accuracy(&self) -> Accuracy {
        self.accuracy
    }

    fn k(&self) -> usize {
        self.accuracy.inverse() as usize
    }

    pub fn dims(&self) -> usize {
        self.classes.len()
    }

    pub fn vector(&self, counts: Vec<usize>) -> UtilizationVector {
        let weight = self.weight(&counts);
        UtilizationVector { counts, weight }
    }

    pub fn zero(&self) -> UtilizationVector {
        self.vector(vec![0; self.dims()])
    }

    pub fn weight(&self, counts: &[usize]) -> Rational {
        self.classes
            .iter()
            .zip(counts)
            .fold(Rational::zero(), |acc, (c, &n)| acc + c.weight_of_first(n))
    }

    /// Heavy flag per class: more than `1/eps` items picked.
    pub fn classify(&self, counts: &[usize]) -> Vec<bool> {
        counts.iter().map(|&n| n > self.k()).collect()
    }

    /// Weight picked from heavy classes beyond each class's `1/eps` lightest items.
    pub fn heavy_excess(&self, counts: &[usize]) -> Rational {
        let k = self.k();
        self.classes
            .iter()
            .zip(counts)
            .filter(|(_, &n)| n > k)
            .fold(Rational::zero(), |acc, (c, &n)| acc + c.range_weight(k + 1, n))
    }

    fn multiplier_cap(&self) -> u64 {
        (3 * self.interval.len() as u64 * self.accuracy.inverse()) / 2
    }

    /// Largest count in `[1/eps + 1, |P|]` whose excess fits in `budget`.
    fn fill(&self, class: &ProfitClass, budget: &Rational) -> Option<usize> {
        let k = self.k();
        if class.len() <= k {
            return None;
        }
        let base = class.weight_of_first(k);
        let mut best = None;
        let (mut lo, mut hi) = (k + 1, class.len());
        while lo <= hi {
            let mid = (lo + hi) / 2;
            if &(class.weight_of_first(mid) - base) <= budget {
                best = Some(mid);
                lo = mid + 1;
            } else {
                hi = mid - 1;
            }
        }
        best
    }

    /// Rounds each heavy class's excess weight up to a multiple of a shared
    /// power-of-two base and refills the class greedily up to that estimate.
    pub fn up_round(&self, counts: &[usize]) -> (Vec<usize>, HeavyProfile) {
        let heavy = self.classify(counts);
        let excess = self.heavy_excess(counts);
        let len = Rational::from_integer(BigInt::from(self.interval.len()));
        let base = pow2_up(&(&excess * self.accuracy.value() / len));
        let mut rounded = counts.to_vec();
        let mut multipliers = vec![0; counts.len()];
        for (j, class) in self.classes.iter().enumerate() {
            if !heavy[j] {
                continue;
            }
            let own = class.range_weight(self.k() + 1, counts[j]);
            let mu = (own / &base).ceil().to_integer();
            let mu: u64 = mu.try_into().expect("multiplier fits in u64");
            let mu = mu.max(1);
            let budget = Rational::from_integer(BigInt::from(mu)) * &base;
            multipliers[j] = mu;
            rounded[j] = self
                .fill(class, &budget)
                .expect("a heavy class always fits its own excess");
        }
        (
            rounded,
            HeavyProfile {
                heavy,
                excess,
                base,
                multipliers,
            },
        )
    }

    /// Drops the last `ceil(2 eps Delta)` items of each class labelled heavy,
    /// where `Delta` is the count beyond `1/eps`.
    pub fn truncate(&self, counts: &[usize], heavy: &[bool]) -> Vec<usize> {
        truncate_counts(counts, heavy, self.k())
    }

    /// `truncate(up_round(N))`.
    pub fn round_and_truncate(&self, counts: &[usize]) -> Vec<usize> {
        let (up, profile) = self.up_round(counts);
        self.truncate(&up, &profile.heavy)
    }

    /// Powers of two in `[eps w_min / |L|, 2 eps n w_max / |L|]`.
    fn base_range(&self, w_min: &Rational, w_max: &Rational, n: usize) -> Vec<Rational> {
        let len = Rational::from_integer(BigInt::from(self.interval.len()));
        let eps = self.accuracy.value();
        let lo = &eps * w_min / &len;
        let hi = Rational::from_integer(BigInt::from(2 * n.max(1))) * &eps * w_max / &len;
        let mut out = Vec::new();
        let mut b = pow2_up(&lo);
        let two = Rational::from_integer(BigInt::from(2));
        while b <= hi {
            out.push(b.clone());
            b *= &two;
        }
        out
    }

    /// Per heavy-capable class and base, the distinct refill counts reachable
    /// under some multiplier, each with the smallest multiplier reaching it.
    fn refill_options(&self, class: &ProfitClass, base: &Rational, cap: u64) -> Vec<(u64, usize)> {
        let k = self.k();
        let mut best: BTreeMap<usize, u64> = BTreeMap::new();
        for target in k + 1..=class.len() {
            let need = class.range_weight(k + 1, target) / base;
            let mu: u64 = need.ceil().to_integer().try_into().unwrap_or(u64::MAX);
            let mu = mu.max(1);
            if mu > cap {
                break;
            }
            let budget = Rational::from_integer(BigInt::from(mu)) * base;
            let reached = self.fill(class, &budget).expect("target fits");
            let slot = best.entry(reached).or_insert(mu);
            *slot = (*slot).min(mu);
        }
        best.into_iter().map(|(n, mu)| (mu, n)).collect()
    }

    /// Enumerates light/heavy labellings, light counts, power-of-two bases and
    /// bounded multiplier vectors, mapping each configuration to its
    /// truncated vector. Always contains the zero vector.
    pub fn enumerate_family(&self, w_min: &Rational, w_max: &Rational, n: usize) -> Family {
        let k = self.k();
        let cap = self.multiplier_cap();
        let dims = self.dims();
        let bases = self.base_range(w_min, w_max, n);
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![0; dims]);
        let mut max_sum = 0;

        let capable: Vec<usize> = (0..dims).filter(|&j| self.classes[j].len() > k).collect();
        for mask in 0u64..(1u64 << capable.len()) {
            let heavy: Vec<bool> = {
                let mut h = vec![false; dims];
                for (bit, &j) in capable.iter().enumerate() {
                    h[j] = mask >> bit & 1 == 1;
                }
                h
            };
            let light_ranges: Vec<usize> = (0..dims)
                .map(|j| if heavy[j] { 0 } else { self.classes[j].len().min(k) })
                .collect();

            // heavy parts: truncated refill counts, keyed by heavy positions
            let mut heavy_parts: BTreeSet<Vec<usize>> = BTreeSet::new();
            if mask == 0 {
                heavy_parts.insert(Vec::new());
            } else {
                let positions: Vec<usize> = (0..dims).filter(|&j| heavy[j]).collect();
                for base in &bases {
                    let options: Vec<Vec<(u64, usize)>> = positions
                        .iter()
                        .map(|&j| self.refill_options(self.classes[j], base, cap))
                        .collect();
                    if options.iter().any(Vec::is_empty) {
                        continue;
                    }
                    let mut chosen = Vec::with_capacity(positions.len());
                    product_with_cap(&options, cap, 0, &mut chosen, &mut |picked, sum| {
                        max_sum = max_sum.max(sum);
                        let part = picked
                            .iter()
                            .map(|&n1| n1 - (2 * (n1 - k)).div_ceil(k))
                            .collect();
                        heavy_parts.insert(part);
                    });
                }
            }

            for part in &heavy_parts {
                let mut counts = vec![0; dims];
                loop {
                    let mut full = counts.clone();
                    let mut it = part.iter();
                    for j in 0..dims {
                        if heavy[j] {
                            full[j] = *it.next().unwrap();
                        }
                    }
                    found.insert(full);
                    if !odometer(&mut counts, &light_ranges, &heavy) {
                        break;
                    }
                }
            }
        }

        Family {
            vectors: found.into_iter().map(|c| self.vector(c)).collect(),
            max_multiplier_sum: max_sum,
            multiplier_cap: cap,
        }
    }

    /// Every vector with `0 <= N_l <= |P_l|`.
    pub fn all_vectors(&self) -> Vec<Vec<usize>> {
        let limits: Vec<usize> = self.classes.iter().map(|c| c.len()).collect();
        let skip = vec![false; limits.len()];
        let mut counts = vec![0; limits.len()];
        let mut out = Vec::new();
        loop {
            out.push(counts.clone());
            if !odometer(&mut counts, &limits, &skip) {
                return out;
            }
        }
    }
}

pub fn truncate_counts(counts: &[usize], heavy: &[bool], k: usize) -> Vec<usize> {
    counts
        .iter()
        .zip(heavy)
        .map(|(&n, &h)| {
            if h {
                let delta = n - k;
                n - (2 * delta).div_ceil(k)
            } else {
                n
            }
        })
        .collect()
}

fn product_with_cap(
    options: &[Vec<(u64, usize)>],
    cap: u64,
    sum: u64,
    chosen: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize], u64),
) {
    let depth = chosen.len();
    if depth == options.len() {
        emit(chosen, sum);
        return;
    }
    for &(mu, n1) in &options[depth] {
        if sum + mu > cap {
            continue;
        }
        chosen.push(n1);
        product_with_cap(options, cap, sum + mu, chosen, emit);
        chosen.pop();
    }
}

/// Advances `counts` to the next vector with `counts[j] <= limits[j]`,
/// leaving `frozen` positions alone. Returns false after the last one.
fn odometer(counts: &mut [usize], limits: &[usize], frozen: &[bool]) -> bool {
    for j in 0..counts.len() {
        if frozen[j] {
            continue;
        }
        if counts[j] < limits[j] {
            counts[j] += 1;
            return true;
        }
        counts[j] = 0;
    }
    false
}
