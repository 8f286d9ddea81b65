//! Numeric backends shared by every rule and checker.
//!
//! All quantities in this crate (claims, budgets, awards, rule parameters)
//! are generic over [`Quantity`], which has exactly two implementations:
//!
//! * [`Rational`] (`num_rational::BigRational`) — exact arithmetic, exact
//!   equality. Used for golden values, oracle comparisons, and the axiom
//!   matrix, where "equal" has to mean equal.
//! * `f64` — fast arithmetic for sweeps and threshold searches, with
//!   equality meaning `|a - b| <= 1e-9` absolute unless an operation says
//!   otherwise.
//!
//! Both backends see the same evaluation code; the property suite checks
//! that they agree within [`FLOAT_EQ_TOL`] on rational inputs.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar, the backend used wherever equality must be exact.
pub type Rational = BigRational;

/// Absolute equality tolerance for the `f64` backend.
pub const FLOAT_EQ_TOL: f64 = 1e-9;

/// Failure to parse a quantity literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse {input:?} as a quantity: {reason}")]
pub struct ParseQuantityError {
    pub input: String,
    pub reason: String,
}

impl ParseQuantityError {
    fn new(input: &str, reason: impl Into<String>) -> Self {
        Self {
            input: input.to_owned(),
            reason: reason.into(),
        }
    }
}

/// Scalar contract shared by the exact and floating backends.
///
/// `Num` supplies the ring operations plus `zero`/`one`; the rest of the
/// trait covers construction from literals, lossy export to `f64`, and the
/// backend's notion of equality.
pub trait Quantity:
    Num + Clone + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// True when arithmetic is exact and equality is identity.
    const EXACT: bool;

    /// Build from an integer.
    fn from_int(value: i64) -> Self;

    /// Build from a ratio of integers. Panics if `den == 0`.
    fn ratio(num: i64, den: i64) -> Self;

    /// Parse a decimal literal (`"4.17"`, `"-2"`) or a fraction (`"7/3"`).
    ///
    /// In the exact backend decimals parse losslessly: `"4.17"` becomes
    /// 417/100, never the nearest binary float.
    fn from_decimal_str(text: &str) -> Result<Self, ParseQuantityError>;

    /// Lossy export; exact values round to the nearest `f64`.
    fn to_f64(&self) -> f64;

    /// |self - other|.
    fn abs_diff(&self, other: &Self) -> Self;

    /// Backend equality: identity when exact, `|a - b| <= tol` otherwise.
    fn approx_eq_tol(&self, other: &Self, tol: f64) -> bool;

    /// Backend equality at the default tolerance ([`FLOAT_EQ_TOL`]).
    fn approx_eq(&self, other: &Self) -> bool {
        self.approx_eq_tol(other, FLOAT_EQ_TOL)
    }

    /// Render for reports; must be re-parseable by [`Self::from_decimal_str`].
    fn repr(&self) -> String {
        self.to_string()
    }
}

impl Quantity for f64 {
    const EXACT: bool = false;

    fn from_int(value: i64) -> Self {
        value as f64
    }

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn from_decimal_str(text: &str) -> Result<Self, ParseQuantityError> {
        if let Some((num, den)) = text.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|e| ParseQuantityError::new(text, format!("bad numerator: {e}")))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|e| ParseQuantityError::new(text, format!("bad denominator: {e}")))?;
            if d == 0.0 {
                return Err(ParseQuantityError::new(text, "zero denominator"));
            }
            return Ok(n / d);
        }
        text.trim()
            .parse()
            .map_err(|e| ParseQuantityError::new(text, format!("{e}")))
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }

    fn approx_eq_tol(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }
}

impl Quantity for Rational {
    const EXACT: bool = true;

    fn from_int(value: i64) -> Self {
        Rational::from_integer(BigInt::from(value))
    }

    fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn from_decimal_str(text: &str) -> Result<Self, ParseQuantityError> {
        parse_rational(text)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_diff(&self, other: &Self) -> Self {
        (self - other).abs()
    }

    fn approx_eq_tol(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

/// Parse `"n/d"`, `"-12"`, or `"4.17"` into an exact rational.
fn parse_rational(text: &str) -> Result<Rational, ParseQuantityError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseQuantityError::new(text, "empty literal"));
    }
    if let Some((num, den)) = trimmed.split_once('/') {
        let n = parse_decimal_part(num.trim())
            .ok_or_else(|| ParseQuantityError::new(text, "bad numerator"))?;
        let d = parse_decimal_part(den.trim())
            .ok_or_else(|| ParseQuantityError::new(text, "bad denominator"))?;
        if d.is_zero() {
            return Err(ParseQuantityError::new(text, "zero denominator"));
        }
        return Ok(n / d);
    }
    parse_decimal_part(trimmed).ok_or_else(|| ParseQuantityError::new(text, "not a decimal"))
}

/// Parse a signed decimal literal into an exact rational; `None` on junk.
fn parse_decimal_part(text: &str) -> Option<Rational> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits_ok = |s: &str| s.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return None;
    }
    let mut numer = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse::<BigInt>().ok()?
    };
    let mut denom = BigInt::one();
    for digit in frac_part.chars() {
        numer = numer * 10 + digit.to_digit(10)? as i64;
        denom *= 10;
    }
    let value = Rational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Sum of a slice of quantities.
pub fn total<Q: Quantity>(values: &[Q]) -> Q {
    values.iter().fold(Q::zero(), |acc, v| acc + v.clone())
}
