//! Truncated formal series with exact rational coefficients.
//!
//! Every series knows the first exponent it does not know (`prec`); asking for
//! a coefficient at or beyond it is a [`Error::Truncation`], never a silent 0.

use std::ops::{Add, Mul, Neg, Sub};

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{q, Q};

/// `sum_{i < prec} c_i x^i + O(x^prec)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Q>,
}

impl PowerSeries {
    /// Coefficients `c_0..c_{N-1}`, exact below `x^N`.
    pub fn new(coeffs: Vec<Q>) -> Self {
        PowerSeries { coeffs }
    }

    /// `x` known to `O(x^prec)`.
    pub fn x(prec: usize) -> Self {
        let mut c = vec![Q::zero(); prec];
        if prec > 1 {
            c[1] = Q::one();
        }
        PowerSeries { coeffs: c }
    }

    pub fn constant(c: Q, prec: usize) -> Self {
        let mut v = vec![Q::zero(); prec];
        if prec > 0 {
            v[0] = c;
        }
        PowerSeries { coeffs: v }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Result<Q> {
        self.coeffs.get(i).cloned().ok_or(Error::Truncation {
            requested: i as i64,
            known: self.prec() as i64,
        })
    }

    pub fn truncate(&self, prec: usize) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().take(prec).cloned().collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// First index with a nonzero coefficient, if any is known.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `1 / f` for `c_0 != 0`.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .coeffs
            .first()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::domain("power series inverse needs a nonzero constant term"))?;
        let n = self.prec();
        let inv0 = Q::one() / c0;
        let mut out = vec![Q::zero(); n];
        out[0] = inv0.clone();
        for k in 1..n {
            let mut acc = Q::zero();
            for i in 1..=k {
                acc += &self.coeffs[i] * &out[k - i];
            }
            out[k] = -acc * &inv0;
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    pub fn derivative(&self) -> Self {
        PowerSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        }
    }

    /// Antiderivative with zero constant term.
    pub fn integrate(&self) -> Self {
        let mut c = vec![Q::zero()];
        c.extend(self.coeffs.iter().enumerate().map(|(i, x)| x / q(i as i64 + 1)));
        PowerSeries { coeffs: c }
    }

    /// `log f` for `c_0 = 1`, as the antiderivative of `f' / f`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs.first().is_some_and(One::is_one) {
            return Err(Error::domain("series log needs constant term 1"));
        }
        Ok(self.derivative().div(&self.truncate(self.prec() - 1))?.integrate())
    }

    /// `self(inner(x))` for an inner series with zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs.first().map_or(true, Zero::is_zero) {
            return Err(Error::domain("composition needs an inner series without constant term"));
        }
        let v = inner.valuation().unwrap_or(inner.prec());
        // Terms c_k inner^k for k >= prec(self) are O(x^{prec(self) v}).
        let prec = inner.prec().min(self.prec().saturating_mul(v.max(1)));
        let inner = inner.truncate(prec);
        let mut out = PowerSeries::constant(Q::zero(), prec);
        let mut power = PowerSeries::constant(Q::one(), prec);
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                power = &power * &inner;
            }
            if !c.is_zero() {
                out = &out + &power.scale(c);
            }
            if k * v >= prec {
                break;
            }
        }
        Ok(out.truncate(prec))
    }

    /// Compositional inverse for `c_0 = 0`, `c_1 != 0`.
    pub fn revert(&self) -> Result<Self> {
        let c1 = match self.coeffs.get(1) {
            Some(c) if self.coeffs[0].is_zero() && !c.is_zero() => c.clone(),
            _ => return Err(Error::domain("reversion needs c_0 = 0 and c_1 != 0")),
        };
        let n = self.prec();
        let mut g = vec![Q::zero(); n];
        g[1] = Q::one() / &c1;
        for k in 2..n {
            let trial = self.compose(&PowerSeries::new(g[..=k].to_vec()))?;
            let excess = trial.coeff(k)?;
            g[k] = -excess / &c1;
        }
        Ok(PowerSeries { coeffs: g })
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;

    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let n = self.prec().min(rhs.prec());
        PowerSeries {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;

    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        self + &(-rhs)
    }
}

impl Neg for &PowerSeries {
    type Output = PowerSeries;

    fn neg(self) -> PowerSeries {
        self.scale(&-Q::one())
    }
}

impl Mul for &PowerSeries {
    type Output = PowerSeries;

    /// Valuations extend the known range: `O(x^a) * x^v g` is `O(x^{a+v})`.
    fn mul(self, rhs: &PowerSeries) -> PowerSeries {
        let va = self.valuation().unwrap_or(self.prec());
        let vb = rhs.valuation().unwrap_or(rhs.prec());
        let n = (self.prec() + vb).min(rhs.prec() + va);
        let mut out = vec![Q::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= n {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= n {
                    break;
                }
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out }
    }
}

/// `sum_i c_i x^{val + i} + O(x^{val + len})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    val: i64,
    coeffs: Vec<Q>,
}

impl LaurentSeries {
    pub fn new(val: i64, coeffs: Vec<Q>) -> Self {
        LaurentSeries { val, coeffs }
    }

    pub fn from_power(p: &PowerSeries) -> Self {
        LaurentSeries {
            val: 0,
            coeffs: p.coeffs.clone(),
        }
    }

    /// Lowest stored exponent (its coefficient may be zero before [`normalize`]).
    ///
    /// [`normalize`]: LaurentSeries::normalize
    pub fn val(&self) -> i64 {
        self.val
    }

    /// First exponent not known.
    pub fn prec(&self) -> i64 {
        self.val + self.coeffs.len() as i64
    }

    pub fn coeff(&self, e: i64) -> Result<Q> {
        if e >= self.prec() {
            return Err(Error::Truncation {
                requested: e,
                known: self.prec(),
            });
        }
        if e < self.val {
            return Ok(Q::zero());
        }
        Ok(self.coeffs[(e - self.val) as usize].clone())
    }

    /// Coefficients from `from` up to (excluding) `prec`.
    pub fn coeffs_from(&self, from: i64) -> Result<Vec<Q>> {
        (from..self.prec()).map(|e| self.coeff(e)).collect()
    }

    /// Drops leading zero coefficients.
    pub fn normalize(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        LaurentSeries {
            val: self.val + skip as i64,
            coeffs: self.coeffs[skip..].to_vec(),
        }
    }

    pub fn shift(&self, by: i64) -> Self {
        LaurentSeries {
            val: self.val + by,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn truncate(&self, prec: i64) -> Self {
        let keep = (prec - self.val).clamp(0, self.coeffs.len() as i64) as usize;
        LaurentSeries {
            val: self.val,
            coeffs: self.coeffs[..keep].to_vec(),
        }
    }

    fn relative(&self) -> PowerSeries {
        PowerSeries::new(self.coeffs.clone())
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.normalize();
        if n.coeffs.is_empty() {
            return Err(Error::domain("cannot invert a series with no known nonzero coefficient"));
        }
        Ok(LaurentSeries {
            val: -n.val,
            coeffs: n.relative().inverse()?.coeffs,
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inverse()?)
    }

    /// `d/dx`.
    pub fn derivative(&self) -> Self {
        LaurentSeries {
            val: self.val - 1,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c * q(self.val + i as i64))
                .collect(),
        }
    }

    /// `d/dz` of a series in `x = 1/z`: `-x^2 d/dx`.
    pub fn derivative_inverse_var(&self) -> Self {
        self.derivative().shift(2).scale(&-Q::one())
    }

    /// The series as a power series, when no negative exponents are present.
    pub fn to_power(&self) -> Result<PowerSeries> {
        let n = self.normalize();
        if n.val < 0 {
            return Err(Error::domain("series has negative exponents"));
        }
        let mut c = vec![Q::zero(); n.val as usize];
        c.extend(n.coeffs);
        Ok(PowerSeries::new(c))
    }
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;

    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        let val = self.val.min(rhs.val);
        let prec = self.prec().min(rhs.prec());
        let coeffs = (val..prec)
            .map(|e| self.coeff(e).expect("in range") + rhs.coeff(e).expect("in range"))
            .collect();
        LaurentSeries { val, coeffs }
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;

    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        self + &rhs.scale(&-Q::one())
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;

    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        let a = self.normalize();
        let b = rhs.normalize();
        let n = a.coeffs.len().min(b.coeffs.len());
        let prod = &a.relative().truncate(n) * &b.relative().truncate(n);
        LaurentSeries {
            val: a.val + b.val,
            coeffs: prod.coeffs[..n.min(prod.coeffs.len())].to_vec(),
        }
    }
}

/// `sum b_{i,j} x^i y^j` known for total degree `i + j < prec`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    prec: usize,
    c: Vec<Vec<Q>>,
}

impl BivariateSeries {
    pub fn zero(prec: usize) -> Self {
        BivariateSeries {
            prec,
            c: (0..prec).map(|i| vec![Q::zero(); prec - i]).collect(),
        }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn get(&self, i: usize, j: usize) -> Result<Q> {
        if i + j >= self.prec {
            return Err(Error::Truncation {
                requested: (i + j) as i64,
                known: self.prec as i64,
            });
        }
        Ok(self.c[i][j].clone())
    }

    pub fn set(&mut self, i: usize, j: usize, v: Q) {
        if i + j < self.prec {
            self.c[i][j] = v;
        }
    }

    fn map2(&self, other: &Self, f: impl Fn(&Q, &Q) -> Q) -> Self {
        let prec = self.prec.min(other.prec);
        let mut out = Self::zero(prec);
        for i in 0..prec {
            for j in 0..prec - i {
                out.c[i][j] = f(&self.c[i][j], &other.c[i][j]);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.map2(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.map2(other, |a, b| a - b)
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut out = self.clone();
        for row in &mut out.c {
            for x in row {
                *x *= s;
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        let mut out = Self::zero(prec);
        for i1 in 0..prec {
            for j1 in 0..prec - i1 {
                let a = &self.c[i1][j1];
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..prec - i1 - j1 {
                    for j2 in 0..prec - i1 - j1 - i2 {
                        out.c[i1 + i2][j1 + j2] += a * &other.c[i2][j2];
                    }
                }
            }
        }
        out
    }

    /// `log f` for constant term 1, as `sum_k (-1)^{k+1} (f - 1)^k / k`;
    /// `(f - 1)^k` has total degree at least `k`, so the sum is finite.
    pub fn log(&self) -> Result<Self> {
        if !self.c.first().and_then(|r| r.first()).is_some_and(One::is_one) {
            return Err(Error::domain("bivariate log needs constant term 1"));
        }
        let mut h = self.clone();
        h.c[0][0] = Q::zero();
        let mut out = Self::zero(self.prec);
        let mut power = h.clone();
        for k in 1..self.prec {
            let term = power.scale(&(Q::one() / q(k as i64)));
            out = if k % 2 == 1 { out.add(&term) } else { out.sub(&term) };
            power = power.mul(&h);
        }
        Ok(out)
    }

    /// `d^2 / dx dy`; precision drops by 2.
    pub fn mixed_derivative(&self) -> Self {
        let prec = self.prec.saturating_sub(2);
        let mut out = Self::zero(prec);
        for i in 0..prec {
            for j in 0..prec - i {
                out.c[i][j] = &self.c[i + 1][j + 1] * q(((i + 1) * (j + 1)) as i64);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, factorial, q_big, qf};

    fn geometric(prec: usize) -> PowerSeries {
        PowerSeries::new(vec![q(1); prec])
    }

    #[test]
    fn inverse_and_mul() {
        let one_minus_x = PowerSeries::new(vec![q(1), q(-1), q(0), q(0), q(0)]);
        assert_eq!(one_minus_x.inverse().unwrap(), geometric(5));
        assert_eq!(&one_minus_x * &geometric(5), PowerSeries::constant(q(1), 5));
        assert!(PowerSeries::new(vec![q(0), q(1)]).inverse().is_err());
    }

    #[test]
    fn valuation_extends_product_precision() {
        let x = PowerSeries::x(6);
        let p = &x * &geometric(4);
        assert_eq!(p.prec(), 5);
        assert_eq!(p.coeff(4).unwrap(), q(1));
        assert!(matches!(p.coeff(5), Err(Error::Truncation { .. })));
    }

    #[test]
    fn log_of_exp() {
        let exp = PowerSeries::new((0..8).map(|k| Q::one() / q_big(&factorial(k))).collect());
        let l = exp.log().unwrap();
        assert_eq!(l.coeff(1).unwrap(), q(1));
        for k in [0, 2, 3, 4, 5, 6, 7] {
            assert!(l.coeff(k).unwrap().is_zero());
        }
        assert!(geometric(4).scale(&q(2)).log().is_err());
    }

    #[test]
    fn compose_and_revert() {
        // x / (1 - x) reverts to x / (1 + x).
        let f = &PowerSeries::x(8) * &geometric(8);
        let g = f.truncate(8).revert().unwrap();
        for k in 1..8 {
            let want = if k % 2 == 1 { q(1) } else { q(-1) };
            assert_eq!(g.coeff(k).unwrap(), want);
        }
        let id = f.truncate(8).compose(&g).unwrap();
        assert_eq!(id, PowerSeries::x(8));
        // Catalan generating function: C(x) = 1 + x C(x)^2; x C reverts to x - x^2.
        let cat: Vec<Q> = (0..8usize)
            .map(|n| if n == 0 { q(0) } else { q_big(&binomial(2 * n - 2, n - 1)) / q(n as i64) })
            .collect();
        let r = PowerSeries::new(cat).revert().unwrap();
        assert_eq!(r.coeff(1).unwrap(), q(1));
        assert_eq!(r.coeff(2).unwrap(), q(-1));
        for k in 3..8 {
            assert!(r.coeff(k).unwrap().is_zero());
        }
        assert!(geometric(3).revert().is_err());
    }

    #[test]
    fn laurent_arithmetic() {
        // 1/(x - a) in x^{-1}: w / (1 - a w).
        let a = qf(3, 2);
        let s = LaurentSeries::new(1, (0..6).map(|k| crate::rational::pow_q(&a, k)).collect());
        let inv = s.inverse().unwrap();
        assert_eq!(inv.val(), -1);
        assert_eq!(inv.coeff(-1).unwrap(), q(1));
        assert_eq!(inv.coeff(0).unwrap(), -a.clone());
        for e in 1..4 {
            assert!(inv.coeff(e).unwrap().is_zero());
        }
        assert!(inv.coeff(5).is_err());
        let d = s.derivative();
        assert_eq!(d.val(), 0);
        assert_eq!(d.coeff(0).unwrap(), q(1));
        assert_eq!(d.coeff(1).unwrap(), &a * q(2));
        let dz = s.derivative_inverse_var();
        assert_eq!(dz.coeff(2).unwrap(), q(-1));
    }

    #[test]
    fn bivariate_log() {
        // log(1 + x + y) mixed derivative = -1 / (1 + x + y)^2 = sum (-1)^{k+1} (k+1) C(k, i) x^i y^{k-i}.
        let mut f = BivariateSeries::zero(7);
        f.set(0, 0, q(1));
        f.set(1, 0, q(1));
        f.set(0, 1, q(1));
        let m = f.log().unwrap().mixed_derivative();
        assert_eq!(m.prec(), 5);
        for i in 0..5 {
            for j in 0..5 - i {
                let k = i + j;
                let sign = if k % 2 == 0 { q(-1) } else { q(1) };
                assert_eq!(m.get(i, j).unwrap(), sign * q((k + 1) as i64) * q_big(&binomial(k, i)));
            }
        }
        assert!(m.get(3, 2).is_err());
    }
}
