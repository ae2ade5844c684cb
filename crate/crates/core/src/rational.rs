//! Exact rational thresholds.
//!
//! Every comparison of a degree or a cut size against an expression in
//! `delta` and `n` goes through this module so that ties are decided exactly.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

pub type Rational = num_rational::Ratio<i64>;

/// Parses `p/q`, an integer, or a finite decimal such as `0.8` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::domain(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(Error::domain("zero denominator"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > 12 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" { 0 } else { int.parse().map_err(|_| bad())? };
        let denom = 10i64.pow(frac.len() as u32);
        let frac_part: i64 = frac.parse().map_err(|_| bad())?;
        let mag = int_part.abs() * denom + frac_part;
        return Ok(Rational::new(if negative { -mag } else { mag }, denom));
    }
    s.parse::<i64>().map(Rational::from_integer).map_err(|_| bad())
}

/// Formats as `p/q`, or `p` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn ceil(r: &Rational) -> i64 {
    r.numer().div_ceil(r.denom())
}

pub fn floor(r: &Rational) -> i64 {
    r.numer().div_floor(r.denom())
}

/// `delta` must lie strictly between 0 and 1.
pub fn check_unit_interval(delta: &Rational) -> Result<()> {
    if delta.is_positive() && *delta < Rational::one() {
        Ok(())
    } else {
        Err(Error::domain(format!("delta must lie in (0,1), got {}", format_rational(delta))))
    }
}

/// `count >= r`, exactly.
pub fn at_least(count: usize, r: &Rational) -> bool {
    Rational::from_integer(count as i64) >= *r
}

/// `x < n^{3/2}`, exactly (compares `x^2 < n^3`).
pub fn below_n_three_halves(x: usize, n: usize) -> bool {
    (x as u128) * (x as u128) < (n as u128).pow(3)
}

/// `x > n^{3/4}`, exactly (compares `x^4 > n^3`).
pub fn above_n_three_quarters(x: usize, n: usize) -> bool {
    (x as u128).pow(4) > (n as u128).pow(3)
}

pub fn is_zero(r: &Rational) -> bool {
    r.is_zero()
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
