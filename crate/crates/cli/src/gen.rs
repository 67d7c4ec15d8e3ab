//! Seeded random instances.

use std::fmt;
use std::str::FromStr;

use incknap::rational::int;
use incknap::{Instance, Item};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Uniform,
    /// Lambdas fall by a random factor in `2..=16n` from one period to the next.
    GeometricLambda,
    /// Every item has profit equal to its weight.
    SubsetSum,
}

impl Profile {
    pub const ALL: [Profile; 3] = [Profile::Uniform, Profile::GeometricLambda, Profile::SubsetSum];

    pub fn name(self) -> &'static str {
        match self {
            Profile::Uniform => "uniform",
            Profile::GeometricLambda => "geometric-lambda",
            Profile::SubsetSum => "subset-sum",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Profile::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown profile {s:?} (expected uniform, geometric-lambda or subset-sum)"))
    }
}

/// Generates an instance with `n` items and `t` periods; `n` and `t` must be positive.
pub fn generate(seed: u64, n: usize, t: usize, profile: Profile) -> Instance {
    assert!(n >= 1 && t >= 1, "n and t must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = (0..n)
        .map(|_| {
            let w = rng.gen_range(1..=10);
            let p = match profile {
                Profile::SubsetSum => w,
                _ => rng.gen_range(1..=10),
            };
            Item::new(int(p), int(w))
        })
        .collect();
    // capacities grow by random increments, sized so that roughly a few items fit per period
    let step = 5 * n as i64 / t as i64 + 1;
    let mut cap = 0;
    let capacities = (0..t)
        .map(|_| {
            cap += rng.gen_range(0..=step);
            int(cap)
        })
        .collect();
    let lambdas = match profile {
        Profile::GeometricLambda => {
            let mut lam = int(1);
            let mut out: Vec<_> = (0..t)
                .map(|_| {
                    let v = lam.clone();
                    lam *= int(rng.gen_range(2..=16 * n as i64));
                    v
                })
                .collect();
            out.reverse();
            out
        }
        _ => (0..t).map(|_| int(rng.gen_range(1..=5))).collect(),
    };
    Instance::new(items, capacities, lambdas)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_valid() {
        for profile in Profile::ALL {
            for seed in 0..20 {
                let a = generate(seed, 4, 3, profile);
                assert_eq!(a, generate(seed, 4, 3, profile));
                a.validate().unwrap();
            }
        }
        let single = generate(1, 1, 1, Profile::Uniform);
        assert_eq!((single.n(), single.horizon()), (1, 1));
        single.validate().unwrap();
    }

    #[test]
    fn subset_sum_has_equal_profit_and_weight() {
        let inst = generate(7, 9, 2, Profile::SubsetSum);
        assert!(inst.items.iter().all(|it| it.profit == it.weight));
    }

    #[test]
    fn geometric_lambdas_decrease() {
        let inst = generate(3, 5, 6, Profile::GeometricLambda);
        assert!(inst.lambdas.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn profile_names_parse() {
        for p in Profile::ALL {
            assert_eq!(p.name().parse::<Profile>().unwrap(), p);
        }
        assert!("zipf".parse::<Profile>().is_err());
    }
}
