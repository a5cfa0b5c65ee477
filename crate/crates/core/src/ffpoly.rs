//! Monic polynomials of degree `d` and the finite free convolutions.
//!
//! `p(x) = sum_i x^{d-i} (-1)^i a_i`, so `a_i` is the `i`-th elementary
//! symmetric function of the roots. Roots are never computed.

use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partitions::type_census;
use crate::rational::{factorial, falling_int, fmt_q, parse_q, pow_q, q, q_big, Q};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonicPoly {
    a: Vec<Q>,
}

impl MonicPoly {
    /// From `a_0..a_d` with `a_0 = 1`.
    pub fn new(a: Vec<Q>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::domain("a monic polynomial needs degree at least 1"));
        }
        if !a[0].is_one() {
            return Err(Error::domain(format!(
                "leading coefficient a_0 must be 1, got {}",
                fmt_q(&a[0])
            )));
        }
        Ok(MonicPoly { a })
    }

    pub fn from_roots(roots: &[Q]) -> Result<Self> {
        if roots.is_empty() {
            return Err(Error::domain("from_roots needs at least one root"));
        }
        let mut e = vec![Q::one()];
        for r in roots {
            e.push(Q::zero());
            for i in (1..e.len()).rev() {
                let prev = e[i - 1].clone();
                e[i] += prev * r;
            }
        }
        Ok(MonicPoly { a: e })
    }

    /// `x^d`.
    pub fn monomial(d: usize) -> Result<Self> {
        Self::from_roots(&vec![Q::zero(); d])
    }

    pub fn d(&self) -> usize {
        self.a.len() - 1
    }

    pub fn a(&self) -> &[Q] {
        &self.a
    }

    /// Ordinary coefficients, highest power first.
    pub fn monomial_coeffs(&self) -> Vec<Q> {
        self.a
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c.clone() })
            .collect()
    }

    /// `m_1..m_upto` via Newton's identities (with `e_i = 0` for `i > d`).
    pub fn moments(&self, upto: usize) -> MomentVector {
        let d = self.d();
        let e = |i: usize| -> Q {
            if i <= d {
                self.a[i].clone()
            } else {
                Q::zero()
            }
        };
        let mut p: Vec<Q> = vec![q(d as i64)];
        for k in 1..=upto {
            let mut acc = Q::zero();
            for i in 1..k {
                let term = e(i) * &p[k - i];
                if i % 2 == 1 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            let last = e(k) * q(k as i64);
            if k % 2 == 1 {
                acc += last;
            } else {
                acc -= last;
            }
            p.push(acc);
        }
        let dq = q(d as i64);
        MomentVector {
            d,
            m: p[1..].iter().map(|x| x / &dq).collect(),
        }
    }

    /// `kappa_1..kappa_d` from the coefficient-cumulant sum over `P(n)`.
    pub fn cumulants(&self) -> Result<CumulantVector> {
        let d = self.d();
        let dq = q(d as i64);
        let mut k = Vec::with_capacity(d);
        for n in 1..=d {
            let mut sum = Q::zero();
            for (ty, count) in type_census(n)?.iter() {
                let blocks = ty.num_blocks();
                let mut term = q(*count as i64) * q_big(&factorial(blocks - 1));
                for (size, &mult) in ty.counts().iter().enumerate() {
                    let size = size + 1;
                    for _ in 0..mult {
                        term *= q_big(&factorial(size)) * &self.a[size];
                        term /= q_big(&falling_int(d, size));
                    }
                }
                if blocks % 2 == 1 {
                    sum -= term;
                } else {
                    sum += term;
                }
            }
            let prefactor = pow_q(&(-dq.clone()), n) / (&dq * q_big(&factorial(n - 1)));
            k.push(prefactor * sum);
        }
        Ok(CumulantVector { d, k })
    }

    /// Inverse of [`MonicPoly::cumulants`]; uses `kappa_1..kappa_d`.
    pub fn from_cumulants(d: usize, k: &CumulantVector) -> Result<Self> {
        if d == 0 {
            return Err(Error::domain("degree must be positive"));
        }
        if k.len() < d {
            return Err(Error::Dimension {
                left: k.len(),
                right: d,
            });
        }
        let dq = q(d as i64);
        let mut a = vec![Q::one()];
        for n in 1..=d {
            let mut sum = Q::zero();
            for (ty, count) in type_census(n)?.iter() {
                let mut term = q(*count as i64)
                    * pow_q(&dq, ty.num_blocks())
                    * q_big(&ty.mobius_zero());
                for (size, &mult) in ty.counts().iter().enumerate() {
                    for _ in 0..mult {
                        term *= &k.k[size];
                    }
                }
                sum += term;
            }
            let prefactor =
                q_big(&falling_int(d, n)) / (pow_q(&dq, n) * q_big(&factorial(n)));
            a.push(prefactor * sum);
        }
        Ok(MonicPoly { a })
    }

    /// `p boxplus_d q`.
    pub fn boxplus(&self, other: &MonicPoly) -> Result<MonicPoly> {
        let d = same_degree(self, other)?;
        let ff: Vec<Q> = (0..=d).map(|i| q_big(&falling_int(d, i))).collect();
        let a = (0..=d)
            .map(|k| {
                let s: Q = (0..=k)
                    .map(|i| &self.a[i] * &other.a[k - i] / (&ff[i] * &ff[k - i]))
                    .sum();
                s * &ff[k]
            })
            .collect();
        Ok(MonicPoly { a })
    }

    /// `p boxtimes_d q`.
    pub fn boxtimes(&self, other: &MonicPoly) -> Result<MonicPoly> {
        let d = same_degree(self, other)?;
        let a = (0..=d)
            .map(|k| {
                &self.a[k] * &other.a[k] * q_big(&factorial(k)) / q_big(&falling_int(d, k))
            })
            .collect();
        Ok(MonicPoly { a })
    }

    /// `x^j D^j p(x) / (d)_j`, computed by differentiating directly.
    pub fn derivative_shift(&self, j: usize) -> Result<MonicPoly> {
        let d = self.d();
        if j > d {
            return Err(Error::domain(format!("derivative order {j} exceeds degree {d}")));
        }
        // The coefficient of x^{d-i} picks up (d-i)_j; terms with d - i < j vanish.
        let dj = q_big(&falling_int(d, j));
        let a = (0..=d)
            .map(|i| &self.a[i] * q_big(&falling_int(d - i, j)) / &dj)
            .collect();
        Ok(MonicPoly { a })
    }

    /// Dilation `t^d p(x / t)`: roots scaled by `t`.
    pub fn dilate(&self, t: &Q) -> Result<MonicPoly> {
        if t.is_zero() {
            return Err(Error::domain("dilation factor must be nonzero"));
        }
        let a = self
            .a
            .iter()
            .enumerate()
            .map(|(i, c)| c * pow_q(t, i))
            .collect();
        Ok(MonicPoly { a })
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            d: self.d(),
            a: self.a.iter().map(fmt_q).collect(),
        }
    }
}

fn same_degree(p: &MonicPoly, q: &MonicPoly) -> Result<usize> {
    if p.d() != q.d() {
        return Err(Error::Dimension {
            left: p.d(),
            right: q.d(),
        });
    }
    Ok(p.d())
}

impl fmt::Display for MonicPoly {
    /// Ordinary form, e.g. `x^3 - 6x^2 + 11x - 6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.d();
        let mut first = true;
        for (i, c) in self.monomial_coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = d - i;
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = !mag.is_one() || power == 0;
            if show_mag {
                if mag.denom().is_one() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({})", fmt_q(&mag))?;
                }
            }
            match power {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{power}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Wire form: `{"d": 4, "a": ["1", "4/3", ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub d: usize,
    pub a: Vec<String>,
}

/// Accepted input: either coefficients `a` or `roots`.
#[derive(Debug, Clone, Deserialize)]
pub struct PolyInput {
    #[serde(default)]
    pub d: Option<usize>,
    #[serde(default)]
    pub a: Option<Vec<String>>,
    #[serde(default)]
    pub roots: Option<Vec<String>>,
}

impl PolyInput {
    pub fn into_poly(self) -> Result<MonicPoly> {
        let p = match (self.a, self.roots) {
            (Some(a), None) => MonicPoly::new(a.iter().map(|s| parse_q(s)).collect::<Result<_>>()?)?,
            (None, Some(r)) => {
                MonicPoly::from_roots(&r.iter().map(|s| parse_q(s)).collect::<Result<Vec<_>>>()?)?
            }
            _ => {
                return Err(Error::Parse(
                    "polynomial input needs exactly one of \"a\" or \"roots\"".into(),
                ))
            }
        };
        if let Some(d) = self.d {
            if d != p.d() {
                return Err(Error::Dimension { left: d, right: p.d() });
            }
        }
        Ok(p)
    }
}

pub fn parse_poly_json(text: &str) -> Result<MonicPoly> {
    let input: PolyInput =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("polynomial JSON: {e}")))?;
    input.into_poly()
}

/// `m_1..m_N` of an empirical root distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentVector {
    d: usize,
    m: Vec<Q>,
}

impl MomentVector {
    pub fn new(d: usize, m: Vec<Q>) -> Self {
        MomentVector { d, m }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[Q] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// 1-based `m_n`.
    pub fn get(&self, n: usize) -> &Q {
        &self.m[n - 1]
    }
}

/// `kappa_1^d..kappa_d^d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CumulantVector {
    d: usize,
    k: Vec<Q>,
}

impl CumulantVector {
    /// A profile for degree `d`; it may be longer than `d` when it feeds
    /// symbolic-`d` sums.
    pub fn new(d: usize, k: Vec<Q>) -> Self {
        CumulantVector { d, k }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn values(&self) -> &[Q] {
        &self.k
    }

    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        self.k.is_empty()
    }

    /// 1-based `kappa_n`.
    pub fn get(&self, n: usize) -> &Q {
        &self.k[n - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, qf};
    use proptest::prelude::*;

    fn poly(a: &[Q]) -> MonicPoly {
        MonicPoly::new(a.to_vec()).unwrap()
    }

    /// Independent oracle: expand `(x - r_1)...(x - r_d)` by repeated
    /// multiplication in the ordinary basis and power-sum the roots directly.
    fn expand_ordinary(roots: &[Q]) -> Vec<Q> {
        let mut c = vec![Q::one()];
        for r in roots {
            let mut next = vec![Q::zero(); c.len() + 1];
            for (i, ci) in c.iter().enumerate() {
                next[i] += ci;
                next[i + 1] -= ci * r;
            }
            c = next;
        }
        c
    }

    fn rational() -> impl Strategy<Value = Q> {
        (-9i64..=9, 1i64..=3).prop_map(|(n, d)| qf(n, d))
    }

    fn random_poly(max_d: usize) -> impl Strategy<Value = MonicPoly> {
        (1..=max_d).prop_flat_map(|d| {
            proptest::collection::vec(rational(), d).prop_map(|mut a| {
                a.insert(0, Q::one());
                MonicPoly::new(a).unwrap()
            })
        })
    }

    fn pair(max_d: usize) -> impl Strategy<Value = (MonicPoly, MonicPoly)> {
        (1..=max_d).prop_flat_map(|d| {
            let one = || {
                proptest::collection::vec(rational(), d).prop_map(|mut a| {
                    a.insert(0, Q::one());
                    MonicPoly::new(a).unwrap()
                })
            };
            (one(), one())
        })
    }

    #[test]
    fn from_roots_examples() {
        assert_eq!(MonicPoly::from_roots(&vec![q(0); 4]).unwrap().a(), &[q(1), q(0), q(0), q(0), q(0)]);
        assert_eq!(MonicPoly::from_roots(&[q(1), q(1)]).unwrap().a(), &[q(1), q(2), q(1)]);
        assert_eq!(
            MonicPoly::from_roots(&[q(1), q(2), q(3)]).unwrap().a(),
            &[q(1), q(6), q(11), q(6)]
        );
        assert!(MonicPoly::from_roots(&[]).is_err());
        assert!(MonicPoly::new(vec![q(2), q(1)]).is_err());
    }

    #[test]
    fn from_roots_matches_ordinary_expansion() {
        let roots = [qf(1, 2), q(-3), qf(7, 3), q(0), q(5)];
        let p = MonicPoly::from_roots(&roots).unwrap();
        assert_eq!(p.monomial_coeffs(), expand_ordinary(&roots));
    }

    #[test]
    fn moments_of_power_polynomial() {
        for d in 1..=6 {
            let a = qf(-5, 3);
            let p = MonicPoly::from_roots(&vec![a.clone(); d]).unwrap();
            let m = p.moments(10);
            for n in 1..=10 {
                assert_eq!(m.get(n), &pow_q(&a, n));
            }
        }
    }

    #[test]
    fn moments_match_direct_power_sums() {
        let roots = [qf(1, 2), q(-3), qf(7, 3), q(0), q(5), q(-1)];
        let p = MonicPoly::from_roots(&roots).unwrap();
        let m = p.moments(12);
        for n in 1..=12 {
            let direct: Q = roots.iter().map(|r| pow_q(r, n)).fold(Q::zero(), |acc, x| acc + x) / q(6);
            assert_eq!(m.get(n), &direct, "n = {n}");
        }
    }

    #[test]
    fn power_polynomial_cumulants() {
        for d in 1..=8 {
            let a = qf(3, 2);
            let k = MonicPoly::from_roots(&vec![a.clone(); d]).unwrap().cumulants().unwrap();
            assert_eq!(k.get(1), &a);
            for n in 2..=d {
                assert!(k.get(n).is_zero());
            }
        }
    }

    #[test]
    fn from_cumulants_examples() {
        let k = CumulantVector::new(4, vec![q(0), q(1), q(0), q(0)]);
        assert_eq!(
            MonicPoly::from_cumulants(4, &k).unwrap().a(),
            &[q(1), q(0), qf(-3, 2), q(0), qf(3, 16)]
        );
        let k = CumulantVector::new(5, vec![q(2), q(0), q(0), q(0), q(0)]);
        assert_eq!(
            MonicPoly::from_cumulants(5, &k).unwrap(),
            MonicPoly::from_roots(&vec![q(2); 5]).unwrap()
        );
        let k = CumulantVector::new(4, vec![q(1); 4]);
        let a: Vec<Q> = (0..=4)
            .map(|j| q_big(&(falling_int(4, j) * falling_int(4, j))) / (pow_q(&q(4), j) * q_big(&factorial(j))))
            .collect();
        assert_eq!(MonicPoly::from_cumulants(4, &k).unwrap().a(), &a[..]);
    }

    #[test]
    fn boxplus_examples() {
        for d in 1..=6 {
            let p1 = MonicPoly::from_roots(&vec![q(1); d]).unwrap();
            let p2 = MonicPoly::from_roots(&vec![q(2); d]).unwrap();
            let p3 = MonicPoly::from_roots(&vec![q(3); d]).unwrap();
            assert_eq!(p1.boxplus(&p2).unwrap(), p3);
            assert_eq!(p1.boxplus(&MonicPoly::monomial(d).unwrap()).unwrap(), p1);
        }
        let p2 = MonicPoly::monomial(2).unwrap();
        assert!(p2.boxplus(&MonicPoly::monomial(3).unwrap()).is_err());
    }

    #[test]
    fn boxtimes_examples() {
        let p = MonicPoly::from_roots(&[q(1), q(2)]).unwrap();
        let r = MonicPoly::from_roots(&[q(1), q(3)]).unwrap();
        assert_eq!(p.boxtimes(&r).unwrap().a(), &[q(1), q(6), q(6)]);
        let p = MonicPoly::from_roots(&[q(1), q(2), qf(-1, 2)]).unwrap();
        assert_eq!(p.boxtimes(&MonicPoly::from_roots(&vec![q(1); 3]).unwrap()).unwrap(), p);
        assert_eq!(
            p.boxtimes(&MonicPoly::monomial(3).unwrap()).unwrap(),
            MonicPoly::monomial(3).unwrap()
        );
        // Additive form written with the binomial normalization, checked independently.
        let d = 3;
        let pa = p.a();
        let rb = MonicPoly::from_roots(&[q(4), q(-2), q(1)]).unwrap();
        let prod = p.boxtimes(&rb).unwrap();
        for k in 0..=d {
            assert_eq!(prod.a()[k], &pa[k] * &rb.a()[k] / q_big(&binomial(d, k)));
        }
    }

    #[test]
    fn derivative_shift_examples() {
        let p = MonicPoly::from_roots(&[q(1), q(2), q(3)]).unwrap();
        assert_eq!(p.derivative_shift(0).unwrap(), p);
        assert_eq!(p.derivative_shift(3).unwrap(), MonicPoly::monomial(3).unwrap());
        assert_eq!(p.derivative_shift(1).unwrap().monomial_coeffs(), vec![q(1), q(-4), qf(11, 3), q(0)]);
        let q1 = MonicPoly::from_roots(&[q(0), q(1), q(1)]).unwrap();
        assert_eq!(p.boxtimes(&q1).unwrap(), p.derivative_shift(1).unwrap());
        assert!(p.derivative_shift(4).is_err());
    }

    #[test]
    fn display_and_json() {
        let p = MonicPoly::from_roots(&[q(1), q(2), q(3)]).unwrap();
        assert_eq!(p.to_string(), "x^3 - 6x^2 + 11x - 6");
        let h = poly(&[q(1), q(0), qf(-1, 2)]);
        assert_eq!(h.to_string(), "x^2 - (1/2)");
        let j = serde_json::to_string(&h.to_json()).unwrap();
        assert_eq!(j, r#"{"d":2,"a":["1","0","-1/2"]}"#);
        assert_eq!(parse_poly_json(&j).unwrap(), h);
        assert_eq!(
            parse_poly_json(r#"{"roots":["1","2","3"]}"#).unwrap(),
            p
        );
        assert!(parse_poly_json(r#"{"a":["2","1"]}"#).is_err());
        assert!(parse_poly_json(r#"{"d":3,"a":["1","1"]}"#).is_err());
        assert!(parse_poly_json(r#"{}"#).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn cumulant_round_trip(p in random_poly(8)) {
            let k = p.cumulants().unwrap();
            prop_assert_eq!(MonicPoly::from_cumulants(p.d(), &k).unwrap(), p);
        }

        #[test]
        fn boxplus_adds_cumulants((p, r) in pair(7)) {
            let kp = p.cumulants().unwrap();
            let kr = r.cumulants().unwrap();
            let ks = p.boxplus(&r).unwrap().cumulants().unwrap();
            for n in 1..=p.d() {
                prop_assert_eq!(ks.get(n), &(kp.get(n) + kr.get(n)));
            }
        }

        #[test]
        fn boxtimes_commutes_and_associates((p, r) in pair(8), seed in 0i64..50) {
            prop_assert_eq!(p.boxtimes(&r).unwrap(), r.boxtimes(&p).unwrap());
            let roots: Vec<Q> = (0..p.d() as i64).map(|i| qf(seed - 3 * i, 2)).collect();
            let s = MonicPoly::from_roots(&roots).unwrap();
            prop_assert_eq!(
                p.boxtimes(&r).unwrap().boxtimes(&s).unwrap(),
                p.boxtimes(&r.boxtimes(&s).unwrap()).unwrap()
            );
        }

        #[test]
        fn derivative_shift_is_boxtimes(p in random_poly(8), j in 0usize..=8) {
            let d = p.d();
            let j = j.min(d);
            let mut roots = vec![Q::zero(); j];
            roots.extend(std::iter::repeat(Q::one()).take(d - j));
            let q1 = MonicPoly::from_roots(&roots).unwrap();
            prop_assert_eq!(p.derivative_shift(j).unwrap(), p.boxtimes(&q1).unwrap());
        }

        #[test]
        fn newton_matches_root_power_sums(roots in proptest::collection::vec(rational(), 1..7)) {
            let p = MonicPoly::from_roots(&roots).unwrap();
            let m = p.moments(9);
            for n in 1..=9 {
                let direct: Q = roots.iter().map(|r| pow_q(r, n)).fold(Q::zero(), |acc, x| acc + x) / q(roots.len() as i64);
                prop_assert_eq!(m.get(n), &direct);
            }
        }
    }
}
