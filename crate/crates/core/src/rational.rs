//! Exact rational arithmetic helpers.
//!
//! All payoffs, probabilities, and polynomial coefficients in this crate are
//! [`Rational`] values so equilibrium ties and polynomial identities can be
//! decided exactly. Floats only appear in the numeric oracles.

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational number used throughout the crate.
pub type Rational = BigRational;

/// Shorthand for an integer-valued rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`. Panics if `d` is zero.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// True when `v` lies in the closed unit interval.
pub fn in_unit_interval(v: &Rational) -> bool {
    !v.is_negative() && *v <= Rational::one()
}

/// Lossy conversion to `f64`, for the float-mode oracles and decimal output.
pub fn to_f64(v: &Rational) -> f64 {
    v.to_f64()
        .unwrap_or_else(|| panic!("rational {} out of f64 range", v))
}

/// Exact square root of a nonnegative rational, when one exists.
///
/// Returns `Some(s)` with `s*s == v` iff both numerator and denominator of
/// the reduced fraction are perfect squares.
pub fn exact_sqrt(v: &Rational) -> Option<Rational> {
    if v.is_negative() {
        return None;
    }
    if v.is_zero() {
        return Some(Rational::zero());
    }
    let num = v.numer();
    let den = v.denom();
    let num_root = num.sqrt();
    let den_root = den.sqrt();
    if &num_root * &num_root == *num && &den_root * &den_root == *den {
        Some(Rational::new(num_root, den_root))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sqrt_of_perfect_squares() {
        assert_eq!(exact_sqrt(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(exact_sqrt(&rat(0)), Some(rat(0)));
        assert_eq!(exact_sqrt(&rat(1)), Some(rat(1)));
    }

    #[test]
    fn exact_sqrt_rejects_non_squares() {
        assert_eq!(exact_sqrt(&rat(2)), None);
        assert_eq!(exact_sqrt(&ratio(1, 3)), None);
        assert_eq!(exact_sqrt(&rat(-4)), None);
    }

    #[test]
    fn unit_interval_bounds_are_inclusive() {
        assert!(in_unit_interval(&rat(0)));
        assert!(in_unit_interval(&rat(1)));
        assert!(in_unit_interval(&ratio(1, 2)));
        assert!(!in_unit_interval(&ratio(-1, 2)));
        assert!(!in_unit_interval(&ratio(3, 2)));
    }
}
