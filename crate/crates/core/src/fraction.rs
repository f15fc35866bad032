use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Exact nonnegative rational used for every ratio the crate reports.
pub type Rational = Ratio<u64>;

/// Wire form `{"num":..,"den":..}` of a [`Rational`], always in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl From<Rational> for Fraction {
    fn from(r: Rational) -> Self {
        Fraction {
            num: *r.numer(),
            den: *r.denom(),
        }
    }
}

impl From<Fraction> for Rational {
    fn from(f: Fraction) -> Self {
        Ratio::new(f.num, f.den)
    }
}

pub fn ratio(num: usize, den: usize) -> Rational {
    Ratio::new(num as u64, den as u64)
}
