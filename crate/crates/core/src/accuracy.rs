use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Internal accuracy parameter `eps = 1/k` with `k >= 5`.
///
/// Keeping `1/eps` integral makes the light/heavy threshold and every
/// truncation ceiling exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Accuracy {
    inverse: u64,
}

impl Accuracy {
    pub const MIN_INVERSE: u64 = 5;

    pub fn from_inverse(inverse: u64) -> Result<Self> {
        if inverse < Self::MIN_INVERSE {
            return Err(Error::InvalidAccuracy { inverse });
        }
        Ok(Self { inverse })
    }

    /// Maps a user-facing accuracy to the internal one: `1/max(5, ceil(c/eps))`.
    ///
    /// `c` is the constant by which the calling scheme's loss bound exceeds
    /// `eps`, so the wrapper's overall guarantee becomes `1 - eps_public`.
    pub fn from_public(eps_public: &Rational, c: u64) -> Result<Self> {
        if *eps_public <= Rational::zero() || *eps_public >= Rational::one() {
            return Err(Error::InvalidPublicAccuracy);
        }
        let scaled = Rational::from_integer(BigInt::from(c)) / eps_public;
        let k = crate::rational::ceil_u64(&scaled).max(Self::MIN_INVERSE);
        Ok(Self { inverse: k })
    }

    /// `1/eps`
    pub fn inverse(&self) -> u64 {
        self.inverse
    }

    pub fn value(&self) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.inverse))
    }

    /// `1 + eps`
    pub fn growth(&self) -> Rational {
        Rational::new(BigInt::from(self.inverse + 1), BigInt::from(self.inverse))
    }

    /// `eps / 3`, the accuracy handed to the inverse solver by wrappers that
    /// need a `(1 - eps)` profit floor out of its `(1 - 3 eps)` criterion.
    pub fn third(&self) -> Self {
        Self {
            inverse: self.inverse * 3,
        }
    }

    /// `1 - c * eps`
    pub fn one_minus(&self, c: u64) -> Rational {
        Rational::one() - Rational::from_integer(BigInt::from(c)) * self.value()
    }
}

impl std::fmt::Display for Accuracy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "1/{}", self.inverse)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn public_rescaling() {
        assert_eq!(Accuracy::from_public(&ratio(1, 2), 7).unwrap().inverse(), 14);
        assert_eq!(Accuracy::from_public(&ratio(4, 5), 7).unwrap().inverse(), 9);
        assert_eq!(Accuracy::from_public(&ratio(9, 10), 1).unwrap().inverse(), 5);
        assert!(Accuracy::from_public(&ratio(0, 1), 7).is_err());
        assert!(Accuracy::from_public(&ratio(1, 1), 7).is_err());
    }

    #[test]
    fn rejects_coarse_inverse() {
        assert_eq!(
            Accuracy::from_inverse(4),
            Err(Error::InvalidAccuracy { inverse: 4 })
        );
        assert_eq!(Accuracy::from_inverse(5).unwrap().value(), ratio(1, 5));
        assert_eq!(Accuracy::from_inverse(14).unwrap().third().inverse(), 42);
    }
}
