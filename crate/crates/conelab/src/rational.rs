//! Exact rational scalars and their textual form.
//!
//! All weights, chromatic values and linear-programming data in this crate are
//! arbitrary-precision rationals kept in canonical lowest terms. The textual
//! form is `p` or `p/q` with `q > 0`; formatting always re-emits the canonical
//! form, so parse → format → parse is the identity.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::Error;

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator (maintained by construction).
pub type Rational = BigRational;

/// Shorthand constructor from machine integers. Panics on `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Nonnegative integer power by repeated squaring.
pub fn pow(base: &Rational, exp: usize) -> Rational {
    let mut result = Rational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    result
}

/// Canonical text: `p` when the denominator is 1, otherwise `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (optional leading `-`, `q > 0` after reduction).
pub fn parse_rational(text: &str) -> Result<Rational, Error> {
    let bad = |why: &str| Error::Parse(format!("rational {text:?}: {why}"));
    let (num_text, den_text) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer = parse_int(num_text, true).ok_or_else(|| bad("integer part must be [-]digits"))?;
    let denom = match den_text {
        Some(d) => {
            let d = parse_int(d, false).ok_or_else(|| bad("denominator must be digits"))?;
            if d.is_zero() {
                return Err(bad("zero denominator"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(BigRational::new(numer, denom))
}

fn parse_int(text: &str, allow_sign: bool) -> Option<BigInt> {
    let digits = match text.strip_prefix('-') {
        Some(rest) if allow_sign => rest,
        Some(_) => return None,
        None => text,
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// True iff `r` is a nonnegative integer small enough for `usize`.
pub fn as_usize(r: &Rational) -> Option<usize> {
    if !r.denom().is_one() || r.is_negative() {
        return None;
    }
    r.numer().try_into().ok()
}
