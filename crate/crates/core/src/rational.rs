//! Exact rational helpers shared by every module.
//!
//! Rationals cross text boundaries only as `"num/den"` (or a bare integer).

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

pub fn q_big(n: &BigInt) -> Q {
    Q::from_integer(n.clone())
}

/// Parses `"3"`, `"-3/2"` or `" 7 / 9 "`.
pub fn parse_q(s: &str) -> Result<Q> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a, b),
        None => (t.as_str(), "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Q::new(num, den))
}

/// Canonical `"num/den"` text, or the bare numerator for integers.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Falling factorial `x (x-1) ... (x-k+1)` of a rational.
pub fn falling(x: &Q, k: usize) -> Q {
    let mut acc = Q::one();
    for i in 0..k {
        acc *= x - q(i as i64);
    }
    acc
}

/// Falling factorial of an integer, `(d)_k`.
pub fn falling_int(d: usize, k: usize) -> BigInt {
    if k > d {
        return BigInt::zero();
    }
    ((d - k + 1)..=d).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn pow_q(x: &Q, e: usize) -> Q {
    num::pow::pow(x.clone(), e)
}

/// `(-1)^e` as a rational.
pub fn sign(e: usize) -> Q {
    if e % 2 == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

/// Lossy conversion, only for human-facing ratios in trend reports.
pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-3/2").unwrap(), qf(-3, 2));
        assert_eq!(parse_q(" 6 / 4 ").unwrap(), qf(3, 2));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
        assert!(parse_q("1.5").is_err());
        assert_eq!(fmt_q(&qf(-6, 4)), "-3/2");
        assert_eq!(fmt_q(&q(5)), "5");
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 3), BigInt::zero());
        assert_eq!(falling_int(5, 2), BigInt::from(20));
        assert_eq!(falling_int(3, 4), BigInt::zero());
        assert_eq!(falling(&qf(4, 3), 2), qf(4, 9));
    }
}
