//! Exact rational helpers.
//!
//! Instance data uses [`Rational`] (64-bit numerator and denominator). The
//! simplex kernel works over [`BigRational`] so that pivoting can never
//! overflow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = Ratio<i64>;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn to_big(r: &Rational) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Converts back to the 64-bit type, `None` if either part overflows.
pub fn from_big(r: &BigRational) -> Option<Rational> {
    Some(Rational::new(r.numer().to_i64()?, r.denom().to_i64()?))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    match (r.numer().to_f64(), r.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // Shift both parts down until they fit a double.
            let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
            let n = (r.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (r.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            n / d
        }
    }
}

/// `ceil(r)` for a non-negative-or-negative rational.
pub fn ceil(r: &Rational) -> i64 {
    r.ceil().to_integer()
}

/// JSON form used in every file: an integer when possible, else `"p/q"`.
pub fn rational_json(r: &Rational) -> serde_json::Value {
    if r.is_integer() {
        serde_json::Value::from(*r.numer())
    } else {
        serde_json::Value::from(format(r))
    }
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn format(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<i64>().ok().map(Rational::from_integer),
    }
}

/// Draws `true` with probability exactly `p` (clamped to `[0, 1]`) whenever the
/// denominator fits in 64 bits.
pub fn bernoulli<R: rand::Rng + ?Sized>(rng: &mut R, p: &BigRational) -> bool {
    if !p.is_positive() {
        return false;
    }
    if *p >= BigRational::one() {
        return true;
    }
    match (p.numer().to_u64(), p.denom().to_u64()) {
        (Some(n), Some(d)) => rng.random_range(0..d) < n,
        _ => rng.random::<f64>() < big_to_f64(p),
    }
}

/// Inverse-CDF draw from a finite distribution with rational weights summing
/// to one. Returns the index of the sampled outcome.
pub fn sample_index<R: rand::Rng + ?Sized>(rng: &mut R, weights: &[BigRational]) -> usize {
    assert!(
        !weights.is_empty(),
        "cannot sample from an empty distribution"
    );
    let lcm = weights
        .iter()
        .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
    if let Some(total) = lcm.to_u64() {
        let draw = BigInt::from(rng.random_range(0..total));
        let mut acc = BigInt::zero();
        for (i, w) in weights.iter().enumerate() {
            acc += w.numer() * (&lcm / w.denom());
            if draw < acc {
                return i;
            }
        }
    } else {
        let draw: f64 = rng.random();
        let mut acc = 0.0;
        for (i, w) in weights.iter().enumerate() {
            acc += big_to_f64(w);
            if draw < acc {
                return i;
            }
        }
    }
    // Only reachable through float round-off; the last positive weight wins.
    weights
        .iter()
        .rposition(|w| w.is_positive())
        .unwrap_or(weights.len() - 1)
}
