use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AngleError {
    #[error("denominator must be positive")]
    NonPositiveDenominator,
    #[error("interior angle must lie strictly between 0 and 2*pi")]
    OutOfRange,
}

/// Interior angle `pi * p / q` of a rational polygon, stored in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalAngle {
    numer: i64,
    denom: i64,
}

impl RationalAngle {
    pub fn new(numer: i64, denom: i64) -> Result<Self, AngleError> {
        if denom <= 0 {
            return Err(AngleError::NonPositiveDenominator);
        }
        if numer <= 0 || numer >= 2 * denom {
            return Err(AngleError::OutOfRange);
        }
        let g = numer.gcd(&denom);
        Ok(RationalAngle {
            numer: numer / g,
            denom: denom / g,
        })
    }

    /// Numerator p of the reduced fraction p/q.
    pub fn numer(&self) -> i64 {
        self.numer
    }

    /// Denominator q of the reduced fraction p/q.
    pub fn denom(&self) -> i64 {
        self.denom
    }

    /// The angle as an exact fraction of pi.
    pub fn as_ratio(&self) -> Ratio<i64> {
        Ratio::new(self.numer, self.denom)
    }

    /// The angle in radians.
    pub fn radians(&self) -> f64 {
        PI * self.numer as f64 / self.denom as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_to_lowest_terms() {
        let a = RationalAngle::new(2, 4).unwrap();
        assert_eq!((a.numer(), a.denom()), (1, 2));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(RationalAngle::new(0, 2).is_err());
        assert!(RationalAngle::new(4, 2).is_err());
        assert!(RationalAngle::new(1, 0).is_err());
    }
}
