use serde::Serialize;

use crate::rational::{self, Rational};
use crate::{Error, Result};

/// The explicit bias and failure bounds of the strategies, for given
/// `(n, δ, b)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: u64,
    #[serde(serialize_with = "ser_rational")]
    pub delta: Rational,
    pub b: u64,
    /// `⌊δ²n / (6400 (log₂ n)²)⌋`, the largest bias the edge strategy is guaranteed against.
    pub b_max: u64,
    /// Whether `b_max` was computed exactly (`n` a power of two).
    pub b_max_exact: bool,
    /// `32/δ`: the edge game needs `χ(G)` above this.
    #[serde(serialize_with = "ser_rational")]
    pub chi_threshold_edge: Rational,
    /// `2(b+1)/δ`: the vertex game needs `χ(G)` above this.
    #[serde(serialize_with = "ser_rational")]
    pub chi_threshold_vertex: Rational,
    /// `⌈100 ln n / δ²⌉` random vertices for the dominating set.
    pub dominating_size: u64,
    /// Exponent `e` with failure probability bound `n^e`.
    pub failure_exponent: i64,
    /// `25 log₂ n`, the per-vertex domination margin.
    pub p1_floor: f64,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format_rational(r))
}

impl BoundReport {
    /// `n^{failure_exponent}` as a float (underflows to 0 for large `n`).
    pub fn failure_bound(&self) -> f64 {
        (self.n as f64).powi(self.failure_exponent as i32)
    }
}

pub fn bound_report(n: u64, delta: Rational, b: u64) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::domain("n must be at least 2"));
    }
    rational::check_unit_interval(&delta)?;
    if b == 0 {
        return Err(Error::domain("b must be positive"));
    }
    let (p, q) = (*delta.numer() as u128, *delta.denom() as u128);
    let (b_max, b_max_exact) = if n.is_power_of_two() {
        let k = n.trailing_zeros() as u128;
        ((p * p * n as u128 / (q * q * 6400 * k * k)) as u64, true)
    } else {
        let d = rational::to_f64(&delta);
        let l = (n as f64).log2();
        ((d * d * n as f64 / (6400.0 * l * l)).floor() as u64, false)
    };
    let d = rational::to_f64(&delta);
    let dominating_size = (100.0 * (n as f64).ln() / (d * d)).ceil() as u64;
    // n · exp(−(δ²/2) · 100 ln n / δ²) = n^{1 − 50}; δ cancels.
    let half = Rational::new(1, 2);
    let exponent = Rational::from_integer(1) - half * delta * delta * Rational::from_integer(100) / (delta * delta);
    Ok(BoundReport {
        n,
        delta,
        b,
        b_max,
        b_max_exact,
        chi_threshold_edge: Rational::from_integer(32) / delta,
        chi_threshold_vertex: Rational::from_integer(2 * (b as i64 + 1)) / delta,
        dominating_size,
        failure_exponent: exponent.to_integer(),
        p1_floor: 25.0 * (n as f64).log2(),
    })
}
