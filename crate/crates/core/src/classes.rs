//! Geometric profit classes and candidate class intervals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::accuracy::Accuracy;
use crate::error::{Error, Result};
use crate::model::Instance;
use crate::rational::Rational;

/// Items of one profit class, lightest first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfitClass {
    pub index: usize,
    pub items: Vec<usize>,
    prefix: Vec<Rational>,
}

impl ProfitClass {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Weight of the `k` lightest items.
    pub fn weight_of_first(&self, k: usize) -> &Rational {
        &self.prefix[k]
    }

    /// Weight of the `k1`-th through `k2`-th lightest items (1-based,
    /// inclusive); zero when `k1 > k2`.
    pub fn range_weight(&self, k1: usize, k2: usize) -> Rational {
        if k1 > k2 {
            return Rational::zero();
        }
        &self.prefix[k2] - &self.prefix[k1 - 1]
    }

    pub fn item_weight(&self, k: usize) -> Rational {
        &self.prefix[k] - &self.prefix[k - 1]
    }
}

/// Inclusive range `lo..=hi` of class indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassInterval {
    pub lo: usize,
    pub hi: usize,
}

impl ClassInterval {
    pub fn new(lo: usize, hi: usize) -> Self {
        assert!(lo <= hi, "class interval must be nonempty");
        Self { lo, hi }
    }

    /// Number of class indices covered, empty classes included.
    pub fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, class: usize) -> bool {
        self.lo <= class && class <= self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfitClasses {
    accuracy: Accuracy,
    scale: Rational,
    classes: BTreeMap<usize, ProfitClass>,
    class_of: Vec<usize>,
}

impl ProfitClasses {
    /// Scales profits by the minimum profit and rounds each down to a power
    /// of `1 + eps`. With no items the class map is empty.
    pub fn build(instance: &Instance, accuracy: Accuracy) -> Self {
        let scale = instance
            .min_profit()
            .cloned()
            .unwrap_or_else(Rational::one);
        let growth = accuracy.growth();
        let mut powers = vec![Rational::one()];
        let mut class_of = Vec::with_capacity(instance.n());
        for item in &instance.items {
            let scaled = &item.profit / &scale;
            let mut k = 0;
            loop {
                if powers.len() == k + 1 {
                    let next = &powers[k] * &growth;
                    powers.push(next);
                }
                if powers[k + 1] > scaled {
                    break;
                }
                k += 1;
            }
            class_of.push(k);
        }

        let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, &c) in class_of.iter().enumerate() {
            members.entry(c).or_default().push(i);
        }
        let classes = members
            .into_iter()
            .map(|(index, mut items)| {
                items.sort_by(|&a, &b| {
                    instance.items[a]
                        .weight
                        .cmp(&instance.items[b].weight)
                        .then(a.cmp(&b))
                });
                let mut prefix = Vec::with_capacity(items.len() + 1);
                prefix.push(Rational::zero());
                for &i in &items {
                    let next = prefix.last().unwrap() + &instance.items[i].weight;
                    prefix.push(next);
                }
                (
                    index,
                    ProfitClass {
                        index,
                        items,
                        prefix,
                    },
                )
            })
            .collect();
        Self {
            accuracy,
            scale,
            classes,
            class_of,
        }
    }

    pub fn accuracy(&self) -> Accuracy {
        self.accuracy
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn class_of(&self, item: usize) -> usize {
        self.class_of[item]
    }

    pub fn n_items(&self) -> usize {
        self.class_of.len()
    }

    pub fn get(&self, class: usize) -> Option<&ProfitClass> {
        self.classes.get(&class)
    }

    pub fn class(&self, class: usize) -> Result<&ProfitClass> {
        self.get(class).ok_or(Error::ClassIndexOutOfRange { class })
    }

    /// Non-empty classes in increasing index order.
    pub fn iter(&self) -> impl Iterator<Item = &ProfitClass> {
        self.classes.values()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.classes.keys().copied().collect()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.classes.keys().next_back().copied()
    }

    /// Non-empty classes whose index lies in the interval.
    pub fn in_interval(&self, interval: ClassInterval) -> Vec<&ProfitClass> {
        self.classes
            .range(interval.lo..=interval.hi)
            .map(|(_, c)| c)
            .collect()
    }

    /// Rounded profit `(1 + eps)^class` in scaled units.
    pub fn rounded_profit(&self, class: usize) -> Rational {
        crate::rational::pow(&self.accuracy.growth(), class)
    }

    /// `w(P_class[k1..=k2])` with 1-based counts.
    pub fn prefix_weight(&self, class: usize, k1: usize, k2: usize) -> Result<Rational> {
        let c = self.class(class)?;
        if k1 > k2 {
            return Ok(Rational::zero());
        }
        if k1 == 0 || k2 > c.len() {
            return Err(Error::CountOutOfRange {
                from: k1,
                to: k2,
                len: c.len(),
            });
        }
        Ok(c.range_weight(k1, k2))
    }

    /// Smallest `L` with `(1 + eps)^L >= n * rho / eps`.
    pub fn interval_length(&self, n: usize, rho: &Rational) -> usize {
        let eps = self.accuracy.value();
        let target = Rational::from_integer(BigInt::from(n.max(1))) * rho / eps;
        let growth = self.accuracy.growth();
        let mut acc = Rational::one();
        let mut len = 0;
        while acc < target {
            acc *= &growth;
            len += 1;
        }
        len.max(1)
    }

    /// One interval `[max(top - len + 1, 0, range.lo), top]` per non-empty
    /// class `top` inside `range` (all classes when `range` is `None`).
    pub fn candidate_intervals(
        &self,
        rho: &Rational,
        range: Option<ClassInterval>,
    ) -> Vec<ClassInterval> {
        let len = self.interval_length(self.n_items(), rho);
        let floor = range.map_or(0, |r| r.lo);
        self.classes
            .keys()
            .filter(|&&c| range.is_none_or(|r| r.contains(c)))
            .map(|&top| {
                let lo = (top + 1).saturating_sub(len).max(floor);
                ClassInterval::new(lo, top)
            })
            .collect()
    }
}
