//! Exact rational sum-rates.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

/// A nonnegative-or-signed exact rational in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rate(Ratio<i64>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRateError {
    #[error("`{0}` is not an integer or a `p/q` fraction")]
    Malformed(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

impl Rate {
    pub const ZERO: Rate = Rate(Ratio::new_raw(0, 1));

    /// Panics on a zero denominator.
    pub fn new(numerator: i64, denominator: i64) -> Self {
        Rate(Ratio::new(numerator, denominator))
    }

    pub fn from_integer(n: i64) -> Self {
        Rate(Ratio::from_integer(n))
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn ceil(&self) -> i64 {
        self.0.ceil().to_integer()
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn as_ratio(&self) -> Ratio<i64> {
        self.0
    }

    /// Renders with exactly `digits` fractional digits, rounding half away
    /// from zero.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = 10i128.pow(digits);
        let n = self.numerator() as i128;
        let d = self.denominator() as i128;
        let scaled = n.abs() * scale;
        let (q, r) = scaled.div_rem(&d);
        let rounded = if 2 * r >= d { q + 1 } else { q };
        let sign = if n < 0 && rounded != 0 { "-" } else { "" };
        if digits == 0 {
            return format!("{sign}{rounded}");
        }
        let int = rounded / scale;
        let frac = rounded % scale;
        format!("{sign}{int}.{frac:0width$}", width = digits as usize)
    }
}

impl From<Ratio<i64>> for Rate {
    fn from(r: Ratio<i64>) -> Self {
        Rate(r)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl FromStr for Rate {
    type Err = ParseRateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let malformed = || ParseRateError::Malformed(s.to_string());
        match t.split_once('/') {
            None => t
                .parse::<i64>()
                .map(Rate::from_integer)
                .map_err(|_| malformed()),
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| malformed())?;
                let q: i64 = q.trim().parse().map_err(|_| malformed())?;
                if q == 0 {
                    return Err(ParseRateError::ZeroDenominator(s.to_string()));
                }
                Ok(Rate::new(p, q))
            }
        }
    }
}

impl std::ops::Sub for Rate {
    type Output = Rate;
    fn sub(self, rhs: Rate) -> Rate {
        Rate::from(self.as_ratio() - rhs.as_ratio())
    }
}

/// `⌈a / b⌉` for `b > 0`.
pub fn ceil_div(a: u64, b: u64) -> u64 {
    debug_assert!(b > 0);
    a.div_ceil(b)
}
