//! Arbitrary-precision rationals and the `p/q` text form used everywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number.  Canonical form (positive denominator, reduced)
/// is maintained by `num_rational` on every operation.
pub type Rat = num_rational::BigRational;

/// Integer-valued rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// The fraction `n/d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// True when `2r` is an integer.
pub fn is_half_integer(r: &Rat) -> bool {
    is_integer(&(r * rat(2)))
}

/// Canonical text form: `p/q`, or just `p` when the denominator is 1.
pub fn format_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses the canonical `p/q` form (also plain integers).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

/// Largest absolute value in a slice, or zero for an empty slice.
pub fn max_abs(values: &[Rat]) -> Rat {
    values
        .iter()
        .map(|v| v.abs())
        .max()
        .unwrap_or_else(Rat::zero)
}
