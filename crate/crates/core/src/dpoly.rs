//! Polynomials in the formal variable `1/d`.

use std::fmt;
use std::ops::{Add, Mul};

use num::{One, Signed, Zero};

use crate::rational::{fmt_q, Q};

/// `c_0 + c_1 / d + c_2 / d^2 + ...`
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OneOverDPoly {
    coeffs: Vec<Q>,
}

impl OneOverDPoly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        OneOverDPoly { coeffs }
    }

    pub fn zero() -> Self {
        OneOverDPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    /// Coefficient of `d^{-k}`.
    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    /// Highest power of `1/d` with a nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn add_term(&mut self, k: usize, c: &Q) {
        if self.coeffs.len() <= k {
            self.coeffs.resize(k + 1, Q::zero());
        }
        self.coeffs[k] += c;
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn eval(&self, d: &Q) -> Q {
        let inv = Q::one() / d;
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &inv + c;
        }
        acc
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }
}

impl Add for &OneOverDPoly {
    type Output = OneOverDPoly;

    fn add(self, rhs: &OneOverDPoly) -> OneOverDPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        OneOverDPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Mul for &OneOverDPoly {
    type Output = OneOverDPoly;

    fn mul(self, rhs: &OneOverDPoly) -> OneOverDPoly {
        if self.is_zero() || rhs.is_zero() {
            return OneOverDPoly::zero();
        }
        let mut out = vec![Q::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        OneOverDPoly::new(out)
    }
}

impl fmt::Display for OneOverDPoly {
    /// `5 - 22/d + 32/d^2 - 15/d^3`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let num = if mag.denom().is_one() {
                mag.numer().to_string()
            } else {
                format!("({})", fmt_q(&mag))
            };
            match k {
                0 => write!(f, "{}", fmt_q(&mag))?,
                1 => write!(f, "{num}/d")?,
                _ => write!(f, "{num}/d^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn display() {
        let p = OneOverDPoly::new(vec![q(5), q(-22), q(32), q(-15)]);
        assert_eq!(p.to_string(), "5 - 22/d + 32/d^2 - 15/d^3");
        assert_eq!(OneOverDPoly::new(vec![q(1), q(-1)]).to_string(), "1 - 1/d");
        assert_eq!(OneOverDPoly::new(vec![q(0), qf(1, 2)]).to_string(), "(1/2)/d");
        assert_eq!(OneOverDPoly::new(vec![qf(-3, 2), q(0), q(0)]).to_string(), "-3/2");
        assert_eq!(OneOverDPoly::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic() {
        let a = OneOverDPoly::new(vec![q(1), q(-1)]);
        let b = OneOverDPoly::new(vec![q(2), q(0), q(3)]);
        assert_eq!((&a * &b).coeffs(), &[q(2), q(-2), q(3), q(-3)]);
        assert_eq!((&a + &b).coeffs(), &[q(3), q(-1), q(3)]);
        assert_eq!(a.eval(&q(4)), qf(3, 4));
        assert_eq!((&a * &b).eval(&q(4)), a.eval(&q(4)) * b.eval(&q(4)));
        let mut c = OneOverDPoly::zero();
        c.add_term(2, &q(1));
        c.add_term(2, &q(-1));
        assert!(c.is_zero());
        assert_eq!(c.degree(), None);
    }
}
