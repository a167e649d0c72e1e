use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

/// Exact nonnegative rational `p/q`, always kept in lowest terms.
///
/// Used for phase scales and decoded phases (in turns). Never converted to
/// floating point except at display time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<u64>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("expected a rational \"p/q\" with q > 0, found {0:?}")]
pub struct RationalParseError(pub String);

impl Rational {
    pub fn new(numer: u64, denom: u64) -> Option<Self> {
        (denom != 0).then(|| Self(Ratio::new(numer, denom)))
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    /// `k · self`, reduced. `None` on overflow.
    pub fn checked_scale(&self, k: u64) -> Option<Self> {
        // Reduce k against the denominator first to keep intermediates small.
        let g = gcd(k, self.denom());
        let numer = (k / g).checked_mul(self.numer())?;
        Self::new(numer, self.denom() / g)
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// Phase in radians when `self` is measured in turns.
    pub fn turns_to_radians(&self) -> f64 {
        std::f64::consts::TAU * self.to_f64()
    }

    pub fn turns_to_degrees(&self) -> f64 {
        360.0 * self.to_f64()
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl FromStr for Rational {
    type Err = RationalParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || RationalParseError(s.to_string());
        let (p, q) = s.split_once('/').ok_or_else(err)?;
        let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        if !digits(p) || !digits(q) {
            return Err(err());
        }
        let p: u64 = p.parse().map_err(|_| err())?;
        let q: u64 = q.parse().map_err(|_| err())?;
        Self::new(p, q).ok_or_else(err)
    }
}
