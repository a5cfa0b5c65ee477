//! Closed-form families: power `(x - a)^d`, rescaled Hermite and rescaled
//! Laguerre polynomials.

use std::fmt;
use std::str::FromStr;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ffpoly::{CumulantVector, MonicPoly};
use crate::rational::{binomial, factorial, falling, falling_int, fmt_q, parse_q, pow_q, q, q_big, Q};

/// `H^_d`, the monic Hermite polynomial with `kappa_2 = 1` and all other
/// cumulants zero.
pub fn hermite(d: usize) -> Result<MonicPoly> {
    check_degree(d)?;
    let dq = q(d as i64);
    let a = (0..=d)
        .map(|i| {
            if i % 2 == 1 {
                return Q::zero();
            }
            let k = i / 2;
            let v = q_big(&falling_int(d, i))
                / (q_big(&factorial(k)) * pow_q(&q(2), k) * pow_q(&dq, k));
            if k % 2 == 1 {
                -v
            } else {
                v
            }
        })
        .collect();
    MonicPoly::new(a)
}

/// `L^_d^{(lambda)}` with `a_k = (d)_k (d lambda)_k / (d^k k!)`; every
/// cumulant equals `lambda`.
pub fn laguerre(d: usize, lambda: &Q) -> Result<MonicPoly> {
    check_degree(d)?;
    let dq = q(d as i64);
    let dl = &dq * lambda;
    let a = (0..=d)
        .map(|k| {
            q_big(&falling_int(d, k)) * falling(&dl, k) / (pow_q(&dq, k) * q_big(&factorial(k)))
        })
        .collect();
    MonicPoly::new(a)
}

/// `(x - a)^d`.
pub fn power(d: usize, a: &Q) -> Result<MonicPoly> {
    check_degree(d)?;
    let coeffs = (0..=d).map(|k| q_big(&binomial(d, k)) * pow_q(a, k)).collect();
    MonicPoly::new(coeffs)
}

/// `L^ = L^^{(1)}`, whose cumulants are all 1.
pub fn compound_poisson_witness(d: usize) -> Result<MonicPoly> {
    laguerre(d, &Q::one())
}

fn check_degree(d: usize) -> Result<()> {
    if d == 0 {
        Err(Error::domain("degree must be at least 1"))
    } else {
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyKind {
    Power(Q),
    Hermite,
    Laguerre(Q),
}

impl FamilyKind {
    /// Laguerre needs `lambda > 0`.
    pub fn validate(&self) -> Result<()> {
        match self {
            FamilyKind::Laguerre(l) if !l.is_positive() => Err(Error::domain(format!(
                "laguerre parameter must be positive, got {}",
                fmt_q(l)
            ))),
            _ => Ok(()),
        }
    }

    pub fn poly(&self, d: usize) -> Result<MonicPoly> {
        self.validate()?;
        match self {
            FamilyKind::Power(a) => power(d, a),
            FamilyKind::Hermite => hermite(d),
            FamilyKind::Laguerre(l) => laguerre(d, l),
        }
    }

    /// The cumulant profile `kappa_1..kappa_n`, the same for every `d`.
    pub fn cumulant_profile(&self, n: usize) -> Vec<Q> {
        (1..=n)
            .map(|i| match self {
                FamilyKind::Power(a) => {
                    if i == 1 {
                        a.clone()
                    } else {
                        Q::zero()
                    }
                }
                FamilyKind::Hermite => {
                    if i == 2 {
                        Q::one()
                    } else {
                        Q::zero()
                    }
                }
                FamilyKind::Laguerre(l) => l.clone(),
            })
            .collect()
    }

    pub fn cumulants(&self, d: usize) -> CumulantVector {
        CumulantVector::new(d, self.cumulant_profile(d))
    }

    /// Builds a kind from a selector name and the optional parameters.
    pub fn from_selector(name: &str, a: Option<&str>, lambda: Option<&str>) -> Result<Self> {
        let kind = match name {
            "power" => FamilyKind::Power(parse_q(a.unwrap_or("0"))?),
            "hermite" => FamilyKind::Hermite,
            "laguerre" => FamilyKind::Laguerre(parse_q(lambda.unwrap_or("1"))?),
            other => {
                return Err(Error::Parse(format!(
                    "unknown family {other:?} (expected power, hermite or laguerre)"
                )))
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Power(a) => write!(f, "power(a={})", fmt_q(a)),
            FamilyKind::Hermite => write!(f, "hermite"),
            FamilyKind::Laguerre(l) => write!(f, "laguerre(lambda={})", fmt_q(l)),
        }
    }
}

/// A family together with a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub d: usize,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, d: usize) -> Result<Self> {
        kind.validate()?;
        check_degree(d)?;
        Ok(FamilySpec { kind, d })
    }

    pub fn poly(&self) -> Result<MonicPoly> {
        self.kind.poly(self.d)
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    /// `hermite`, `power:2`, `laguerre:1/3`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("power", a)) => FamilyKind::from_selector("power", Some(a), None),
            Some(("laguerre", l)) => FamilyKind::from_selector("laguerre", None, Some(l)),
            Some((other, _)) => FamilyKind::from_selector(other, None, None),
            None => FamilyKind::from_selector(s, None, None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    #[test]
    fn hermite_examples() {
        assert_eq!(hermite(2).unwrap().a(), &[q(1), q(0), qf(-1, 2)]);
        assert_eq!(hermite(4).unwrap().a(), &[q(1), q(0), qf(-3, 2), q(0), qf(3, 16)]);
        assert!(hermite(0).is_err());
    }

    #[test]
    fn laguerre_examples() {
        assert_eq!(
            laguerre(4, &qf(1, 3)).unwrap().a(),
            &[q(1), qf(4, 3), qf(1, 6), qf(-1, 54), qf(5, 2592)]
        );
        assert_eq!(
            laguerre(4, &qf(1, 3)).unwrap().to_string(),
            "x^4 - (4/3)x^3 + (1/6)x^2 + (1/54)x + (5/2592)"
        );
        assert_eq!(laguerre(1, &q(1)).unwrap().a(), &[q(1), q(1)]);
        assert_eq!(compound_poisson_witness(2).unwrap().to_string(), "x^2 - 2x + (1/2)");
        assert_eq!(compound_poisson_witness(1).unwrap().to_string(), "x - 1");
    }

    #[test]
    fn power_examples() {
        assert_eq!(power(5, &q(0)).unwrap(), MonicPoly::monomial(5).unwrap());
        assert_eq!(power(3, &q(1)).unwrap().a(), &[q(1), q(3), q(3), q(1)]);
        let m = power(4, &qf(-2, 3)).unwrap().moments(8);
        for n in 1..=8 {
            assert_eq!(m.get(n), &pow_q(&qf(-2, 3), n));
        }
    }

    #[test]
    fn cumulant_profiles() {
        for d in 1..=10 {
            let zero_but = |k: &CumulantVector, at: usize, v: &Q| {
                for n in 1..=d {
                    let want = if n == at { v.clone() } else { Q::zero() };
                    assert_eq!(k.get(n), &want, "d = {d}, n = {n}");
                }
            };
            zero_but(&power(d, &qf(7, 2)).unwrap().cumulants().unwrap(), 1, &qf(7, 2));
            zero_but(&hermite(d).unwrap().cumulants().unwrap(), 2, &q(1));
            for l in [qf(1, 3), q(1), q(2)] {
                let k = laguerre(d, &l).unwrap().cumulants().unwrap();
                assert!(k.values().iter().all(|x| x == &l));
            }
            let k = compound_poisson_witness(d).unwrap().cumulants().unwrap();
            assert!(k.values().iter().all(|x| x.is_one()));
        }
    }

    #[test]
    fn hermite_moments_table_values() {
        for d in 2..=50 {
            let dq = q(d);
            let m = hermite(d as usize).unwrap().moments(4);
            assert_eq!(m.get(2), &(q(1) - q(1) / &dq));
            if d >= 4 {
                assert_eq!(m.get(4), &(q(2) - q(5) / &dq + q(3) / (&dq * &dq)));
            }
        }
    }

    /// Classical Hermite `H_d` expanded, then rescaled to the monic
    /// `d^{-d/2} H_d(sqrt(d) x)`; even `d - 2k` powers keep the rescaling rational.
    #[test]
    fn hermite_three_way() {
        for d in 1..=10usize {
            let mut ordinary = vec![Q::zero(); d + 1];
            for k in 0..=d / 2 {
                let c = q_big(&falling_int(d, 2 * k)) / (q_big(&factorial(k)) * pow_q(&q(2), k));
                let c = if k % 2 == 1 { -c } else { c };
                // x^{d-2k} coefficient times d^{(d-2k)/2} / d^{d/2} = d^{-k}
                ordinary[2 * k] = c / pow_q(&q(d as i64), k);
            }
            let h = hermite(d).unwrap();
            assert_eq!(h.monomial_coeffs(), ordinary);
            let mut kappa = vec![Q::zero(); d];
            if d >= 2 {
                kappa[1] = Q::one();
            }
            assert_eq!(MonicPoly::from_cumulants(d, &CumulantVector::new(d, kappa)).unwrap(), h);
        }
    }

    /// Classical Laguerre `L_d^{(alpha)}` at `alpha = (lambda - 1) d`, rescaled by
    /// `d! (-d)^{-d} L(d x)`.
    #[test]
    fn laguerre_matches_classical() {
        for d in 1..=8usize {
            for l in [qf(1, 3), q(1), q(2), qf(5, 2)] {
                let dq = q(d as i64);
                let alpha = (&l - q(1)) * &dq;
                let mut ordinary = vec![Q::zero(); d + 1];
                for k in 0..=d {
                    let c = falling(&(&dq + &alpha), d - k)
                        / (q_big(&factorial(k)) * q_big(&factorial(d - k)))
                        * pow_q(&(-dq.clone()), k);
                    ordinary[d - k] = c;
                }
                let scale = q_big(&factorial(d)) / pow_q(&(-dq.clone()), d);
                let ordinary: Vec<Q> = ordinary.into_iter().map(|c| c * &scale).collect();
                assert_eq!(laguerre(d, &l).unwrap().monomial_coeffs(), ordinary);
            }
        }
    }

    #[test]
    fn selectors() {
        assert_eq!("hermite".parse::<FamilyKind>().unwrap(), FamilyKind::Hermite);
        assert_eq!("power:2".parse::<FamilyKind>().unwrap(), FamilyKind::Power(q(2)));
        assert_eq!(
            "laguerre:1/3".parse::<FamilyKind>().unwrap(),
            FamilyKind::Laguerre(qf(1, 3))
        );
        assert!("laguerre:-1".parse::<FamilyKind>().is_err());
        assert!("gauss".parse::<FamilyKind>().is_err());
        assert!(FamilySpec::new(FamilyKind::Hermite, 0).is_err());
    }
}
