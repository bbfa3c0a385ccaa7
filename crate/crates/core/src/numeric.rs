//! Float helpers for exact big-integer data.
//!
//! Heights are natural logarithms of integers that routinely exceed the
//! `f64` range (orbit coordinates grow doubly exponentially), so logs are
//! taken from the bit representation rather than through a lossy
//! conversion.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Natural log of `|n|`. Requires `n != 0`.
pub fn ln_abs_bigint(n: &BigInt) -> f64 {
    assert!(!n.is_zero(), "ln of zero");
    let mag = n.abs();
    let bits = mag.bits();
    if bits <= 52 {
        return mag.to_f64().expect("small magnitude fits f64").ln();
    }
    // top 53 bits as mantissa, remainder as a power of two
    let shift = bits - 53;
    let top: BigInt = mag >> shift;
    let m = top.to_f64().expect("53-bit mantissa fits f64");
    m.ln() + (shift as f64) * std::f64::consts::LN_2
}

/// Natural log of a positive rational.
pub fn ln_bigrational(r: &BigRational) -> f64 {
    assert!(r.is_positive(), "ln of non-positive rational");
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

/// Round-to-nearest `f64` value of a rational, safe for huge components.
pub fn bigrational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    let sign = if r.is_negative() { -1.0 } else { 1.0 };
    sign * ln_bigrational(&r.abs()).exp()
}
