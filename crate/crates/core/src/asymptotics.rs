//! Free probability at the level of truncated formal series.
//!
//! Conventions: `G(z) = sum_{n>=0} m_n w^{n+1}` with `w = 1/z`;
//! `K = G^{<-1>} = 1/z + sum_n kappa_n z^{n-1}`; `R = K - 1/z`;
//! `R_inf = K''/(2K') + 1/z = sum_n kappa'_n z^{n-1}`;
//! `G_inf = G''/(2G') - G'/G = sum_n m'_n w^{n+1}`.

use num::{One, Signed, Zero};
use serde::Serialize;

use crate::annular::{alpha_annular, type_weight};
use crate::census::noncrossing_census;
use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::ffpoly::MonicPoly;
use crate::identity::{annular_first_order, order_d_expansion};
use crate::rational::{abs_q, fmt_q, pow_q, q, Q};
use crate::series::{BivariateSeries, LaurentSeries, PowerSeries};

/// Moments `m_1..m_N` of a limit law; `m_0 = 1` is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentProfile {
    m: Vec<Q>,
}

impl MomentProfile {
    pub fn new(m: Vec<Q>) -> Self {
        MomentProfile { m }
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

    /// `m_n`, 1-based; `get(0)` is 1.
    pub fn get(&self, n: usize) -> Q {
        if n == 0 {
            Q::one()
        } else {
            self.m[n - 1].clone()
        }
    }
}

/// Infinitesimal moments `m'_1..m'_N` and cumulants `kappa'_1..kappa'_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinitesimalProfile {
    pub mp: Vec<Q>,
    pub kp: Vec<Q>,
}

fn need(k: &[Q], n: usize) -> Result<()> {
    if k.len() < n {
        return Err(Error::domain(format!(
            "cumulant profile has {} entries, order {n} needs {n}",
            k.len()
        )));
    }
    Ok(())
}

/// `m_n = sum_{pi in NC(n)} kappa_pi`, `n = 1..N`.
pub fn free_moments_from_cumulants(k: &[Q], order: usize) -> Result<MomentProfile> {
    need(k, order)?;
    let mut m = Vec::with_capacity(order);
    for n in 1..=order {
        let mut acc = Q::zero();
        for (t, _, c) in noncrossing_census(n)?.iter() {
            acc += type_weight(k, t)? * q(*c as i64);
        }
        m.push(acc);
    }
    Ok(MomentProfile { m })
}

/// Inverse of [`free_moments_from_cumulants`]: only `1_n` has type `(0,..,0,1)`,
/// so `kappa_n` is `m_n` minus the sum over the other types.
pub fn free_cumulants_from_moments(m: &MomentProfile, order: usize) -> Result<Vec<Q>> {
    if m.len() < order {
        return Err(Error::domain(format!("moment profile too short for order {order}")));
    }
    let mut k: Vec<Q> = Vec::with_capacity(order);
    for n in 1..=order {
        let mut rest = Q::zero();
        for (t, _, c) in noncrossing_census(n)?.iter() {
            if t.counts()[n - 1] == 1 {
                continue;
            }
            rest += type_weight(&k, t)? * q(*c as i64);
        }
        k.push(m.get(n) - rest);
    }
    Ok(k)
}

/// `kappa_n(mu boxtimes nu) = sum_{pi in NC(n)} kappa_pi(mu) kappa_{Kr(pi)}(nu)`.
pub fn free_boxtimes(ka: &[Q], kb: &[Q], order: usize) -> Result<Vec<Q>> {
    need(ka, order)?;
    need(kb, order)?;
    let mut out = Vec::with_capacity(order);
    for n in 1..=order {
        let mut acc = Q::zero();
        for (t, tk, c) in noncrossing_census(n)?.iter() {
            acc += type_weight(ka, t)? * type_weight(kb, tk)? * q(*c as i64);
        }
        out.push(acc);
    }
    Ok(out)
}

/// `G = w + m_1 w^2 + ... + m_N w^{N+1} + O(w^{N+2})`.
pub fn cauchy_from_moments(m: &MomentProfile) -> LaurentSeries {
    let mut c = vec![Q::one()];
    c.extend(m.values().iter().cloned());
    LaurentSeries::new(1, c)
}

fn check_cauchy(g: &LaurentSeries) -> Result<()> {
    let g = g.normalize();
    if g.val() != 1 || !g.coeff(1)?.is_one() {
        return Err(Error::domain("a Cauchy series must start with exactly 1/z"));
    }
    Ok(())
}

/// `K` as a Laurent series in `z`, exact through `kappa_N z^{N-1}`.
pub fn k_transform(g: &LaurentSeries, order: usize) -> Result<LaurentSeries> {
    check_cauchy(g)?;
    // G as a power series in w, reverted: w(z) = 1/K(z).
    let f = g.to_power()?;
    if f.prec() < order + 2 {
        return Err(Error::Truncation {
            requested: order as i64 + 1,
            known: f.prec() as i64 - 1,
        });
    }
    let w = f.truncate(order + 2).revert()?;
    LaurentSeries::from_power(&w).inverse()
}

/// Exact `1/z`, stored out to `prec`.
fn inv_z(prec: i64) -> LaurentSeries {
    let mut c = vec![Q::zero(); (prec + 1).max(1) as usize];
    c[0] = Q::one();
    LaurentSeries::new(-1, c)
}

/// `R = K - 1/z`, a power series with `[z^{n-1}] = kappa_n`.
pub fn r_transform(k: &LaurentSeries) -> Result<PowerSeries> {
    (k - &inv_z(k.prec())).to_power()
}

/// `G''/(2G') - G'/G`, derivatives in `z`.
pub fn g_inf_from_cauchy(g: &LaurentSeries) -> Result<LaurentSeries> {
    check_cauchy(g)?;
    let g1 = g.derivative_inverse_var();
    let g2 = g1.derivative_inverse_var();
    let a = g2.div(&g1)?.scale(&Q::new(1.into(), 2.into()));
    let b = g1.div(g)?;
    Ok(&a - &b)
}

/// `K''/(2K') + 1/z`, with `[z^{n-1}] = kappa'_n`.
pub fn r_inf_from_k(k: &LaurentSeries) -> Result<PowerSeries> {
    let k1 = k.derivative();
    let k2 = k1.derivative();
    let a = k2.div(&k1)?.scale(&Q::new(1.into(), 2.into()));
    (&a + &inv_z(a.prec())).to_power()
}

/// `-K'(z) G_inf(K(z))`; should equal [`r_inf_from_k`].
pub fn r_inf_via_g_inf(k: &LaurentSeries, g_inf: &LaurentSeries) -> Result<PowerSeries> {
    let w_of_z = k.inverse()?.to_power()?;
    let gi = g_inf.to_power()?;
    let composed = LaurentSeries::from_power(&gi.compose(&w_of_z)?);
    (&k.derivative() * &composed).scale(&-Q::one()).to_power()
}

/// `G_{M(mu)} = -G'/G`.
pub fn markov_transform(g: &LaurentSeries) -> Result<LaurentSeries> {
    check_cauchy(g)?;
    Ok(g.derivative_inverse_var().div(g)?.scale(&-Q::one()))
}

/// `G(z,w)` of the second-order sums as `sum alpha_{r,s} x^{r-1} y^{s-1}`
/// in `x = 1/z`, `y = 1/w`, for `r + s <= N`.
pub fn alpha_series(k: &[Q], order: usize) -> Result<BivariateSeries> {
    need(k, order)?;
    let mut out = BivariateSeries::zero(order.saturating_sub(1));
    for r in 1..order {
        for s in 1..=order - r {
            out.set(r - 1, s - 1, alpha_annular(k, r, s)?);
        }
    }
    Ok(out)
}

/// `d^2/dzdw log((G(w) - G(z))/(z - w))` rewritten in `x = 1/z`, `y = 1/w`
/// and divided by `x^2 y^2`. The quotient is `x y sum_n m_n h_n(x, y)` with
/// `h_n` the complete homogeneous polynomial, and the monomial prefactor dies
/// under the mixed derivative.
pub fn second_order_rhs(m: &MomentProfile, order: usize) -> Result<BivariateSeries> {
    if m.len() < order {
        return Err(Error::domain(format!("moment profile too short for order {order}")));
    }
    let mut h = BivariateSeries::zero(order + 1);
    for n in 0..=order {
        let mn = m.get(n);
        for i in 0..=n {
            h.set(i, n - i, mn.clone());
        }
    }
    Ok(h.log()?.mixed_derivative())
}

/// Both sides of the second-order functional equation agree through
/// `alpha_{r,s}`, `r + s <= N`.
pub fn second_order_functional_check(k: &[Q], order: usize) -> Result<bool> {
    let lhs = alpha_series(k, order)?;
    let rhs = second_order_rhs(&free_moments_from_cumulants(k, order)?, order)?;
    Ok(lhs == rhs)
}

/// `m'_n = -(n/2) sum_{r+s=n} alpha_{r,s}/(rs)` for `n = 1..N`.
pub fn infinitesimal_from_annular(k: &[Q], order: usize) -> Result<Vec<Q>> {
    (1..=order).map(|n| annular_first_order(n, k)).collect()
}

/// `m'_n` read off `G_inf` at `w^{n+1}`.
pub fn infinitesimal_from_series(k: &[Q], order: usize) -> Result<Vec<Q>> {
    let g = cauchy_from_moments(&free_moments_from_cumulants(k, order)?);
    let gi = g_inf_from_cauchy(&g)?;
    (1..=order).map(|n| gi.coeff(n as i64 + 1)).collect()
}

/// `m'_n` as the `1/d` coefficient of the exact finite-`d` expansion.
pub fn infinitesimal_from_expansion(k: &[Q], order: usize) -> Result<Vec<Q>> {
    (1..=order).map(|n| Ok(order_d_expansion(n, k)?.coeff(1))).collect()
}

/// `kappa'_n` from `R_inf`.
pub fn infinitesimal_cumulants(k: &[Q], order: usize) -> Result<Vec<Q>> {
    let g = cauchy_from_moments(&free_moments_from_cumulants(k, order)?);
    let r = r_inf_from_k(&k_transform(&g, order)?)?;
    (0..order).map(|i| r.coeff(i)).collect()
}

/// The three routes to `m'_n` and whether they agree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinitesimalReport {
    pub profile: InfinitesimalProfile,
    pub annular: Vec<Q>,
    pub series: Vec<Q>,
    pub expansion: Vec<Q>,
    pub agree: bool,
}

pub fn infinitesimal_three_paths(k: &[Q], order: usize) -> Result<InfinitesimalReport> {
    let annular = infinitesimal_from_annular(k, order)?;
    let series = infinitesimal_from_series(k, order)?;
    let expansion = infinitesimal_from_expansion(k, order)?;
    let agree = annular == series && series == expansion;
    let kp = infinitesimal_cumulants(k, order)?;
    Ok(InfinitesimalReport {
        profile: InfinitesimalProfile {
            mp: annular.clone(),
            kp,
        },
        annular,
        series,
        expansion,
        agree,
    })
}

/// `-K' G_inf(K) = R_inf` coefficient-wise through `kappa'_N`.
pub fn r_inf_consistency_check(k: &[Q], order: usize) -> Result<bool> {
    let g = cauchy_from_moments(&free_moments_from_cumulants(k, order)?);
    let kt = k_transform(&g, order)?;
    let direct = r_inf_from_k(&kt)?;
    let via = r_inf_via_g_inf(&kt, &g_inf_from_cauchy(&g)?)?;
    for i in 0..order {
        if direct.coeff(i)? != via.coeff(i)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `G_{mu'} = (G_{M(mu)} - G_{M(M(mu))}) / 2` coefficient-wise through `m'_N`.
pub fn markov_identity_check(k: &[Q], order: usize) -> Result<bool> {
    let g = cauchy_from_moments(&free_moments_from_cumulants(k, order)?);
    let m1 = markov_transform(&g)?;
    let m2 = markov_transform(&m1)?;
    let half = (&m1 - &m2).scale(&Q::new(1.into(), 2.into()));
    let gi = g_inf_from_cauchy(&g)?;
    for e in 1..=order as i64 + 1 {
        if half.coeff(e)? != gi.coeff(e)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_t(t: &Q) -> Result<()> {
    if !t.is_positive() || *t >= Q::one() {
        return Err(Error::domain(format!("t must lie in (0, 1), got {}", fmt_q(t))));
    }
    Ok(())
}

/// Moments of `mu^{boxplus 1/t}`, i.e. cumulants `kappa / t`.
pub fn fractional_power_moments(k: &[Q], t: &Q, order: usize) -> Result<MomentProfile> {
    need(k, order)?;
    let scaled: Vec<Q> = k[..order].iter().map(|x| x / t).collect();
    free_moments_from_cumulants(&scaled, order)
}

/// `(1-t) delta_0 + t mu^{boxplus 1/t}` against
/// `Lambda_{1/t}(mu) boxtimes ((1-t) delta_0 + t delta_1)`, moments through `N`.
pub fn fractional_identity_check(k: &[Q], t: &Q, order: usize) -> Result<bool> {
    check_t(t)?;
    let lhs: Vec<Q> = fractional_power_moments(k, t, order)?
        .values()
        .iter()
        .map(|m| m * t)
        .collect();
    let dilated: Vec<Q> = (1..=order).map(|n| &k[n - 1] / pow_q(t, n)).collect();
    let bernoulli = free_cumulants_from_moments(&MomentProfile::new(vec![t.clone(); order]), order)?;
    let product = free_boxtimes(&dilated, &bernoulli, order)?;
    let rhs = free_moments_from_cumulants(&product, order)?;
    Ok(lhs == rhs.values())
}

/// One degree of a finite-`d` trend.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendRow {
    pub d: usize,
    pub value: String,
    pub target: String,
    pub gap: String,
    /// `gap(d) / gap(2d)` when `2d` is also in the run and its gap is nonzero.
    pub ratio: Option<f64>,
    #[serde(skip)]
    pub exact_gap: Q,
}

/// A finite-`d` trend toward a limit moment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendReport {
    pub n: usize,
    pub rows: Vec<TrendRow>,
}

impl TrendReport {
    fn build(n: usize, values: Vec<(usize, Q)>, target: &Q) -> Self {
        let gaps: Vec<Q> = values.iter().map(|(_, v)| abs_q(&(v - target))).collect();
        let rows = values
            .iter()
            .zip(&gaps)
            .map(|((d, v), gap)| {
                let ratio = values
                    .iter()
                    .position(|(d2, _)| *d2 == 2 * d)
                    .filter(|&j| !gaps[j].is_zero())
                    .map(|j| crate::rational::to_f64(&(gap / &gaps[j])));
                TrendRow {
                    d: *d,
                    value: fmt_q(v),
                    target: fmt_q(target),
                    gap: fmt_q(gap),
                    ratio,
                    exact_gap: gap.clone(),
                }
            })
            .collect();
        TrendReport { n, rows }
    }

    /// Every gap is zero, or every available ratio lies in `[lo, hi]` and
    /// no doubling step has a zero gap after a nonzero one.
    pub fn ratios_within(&self, lo: f64, hi: f64) -> bool {
        if self.rows.iter().all(|r| r.exact_gap.is_zero()) {
            return true;
        }
        self.rows.iter().all(|r| {
            let has_double = self.rows.iter().any(|s| s.d == 2 * r.d);
            match r.ratio {
                Some(x) => (lo..=hi).contains(&x),
                None => !has_double,
            }
        })
    }

    pub fn monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].exact_gap <= w[0].exact_gap)
    }
}

/// `m_n` of `D^k p_d` rescaled by `1/t`, `k = floor((1-t) d)`, against
/// `m_n(mu^{boxplus 1/t})`. The moment comes from `p boxtimes_d x^k (x-1)^{d-k}`,
/// which is `x^k` times the normalized `D^k p`.
pub fn derivative_flow_trend(fam: &FamilyKind, t: &Q, n: usize, ds: &[usize]) -> Result<TrendReport> {
    check_t(t)?;
    let target = fractional_power_moments(&fam.cumulant_profile(n), t, n)?.get(n);
    let mut values = Vec::new();
    for &d in ds {
        let k = (Q::from_integer(d.into()) * (Q::one() - t)).floor().to_integer();
        let k: usize = k.try_into().map_err(|_| Error::domain("derivative order overflow"))?;
        if k >= d {
            return Err(Error::domain(format!("d = {d} leaves no roots after {k} derivatives")));
        }
        let p = fam.poly(d)?;
        let mut roots = vec![Q::zero(); k];
        roots.extend(std::iter::repeat(Q::one()).take(d - k));
        let qd = MonicPoly::from_roots(&roots)?;
        let mpq = p.boxtimes(&qd)?.moments(n).get(n).clone();
        let m = mpq * q(d as i64) / q((d - k) as i64) / pow_q(t, n);
        values.push((d, m));
    }
    Ok(TrendReport::build(n, values, &target))
}

/// `m_n(p_d boxtimes_d q_d)` against `m_n(mu boxtimes nu)` for the families'
/// limit laws.
pub fn product_convergence_trend(a: &FamilyKind, b: &FamilyKind, n: usize, ds: &[usize]) -> Result<TrendReport> {
    let k = free_boxtimes(&a.cumulant_profile(n), &b.cumulant_profile(n), n)?;
    let target = free_moments_from_cumulants(&k, n)?.get(n);
    let mut values = Vec::new();
    for &d in ds {
        let pq = a.poly(d)?.boxtimes(&b.poly(d)?)?;
        values.push((d, pq.moments(n).get(n).clone()));
    }
    Ok(TrendReport::build(n, values, &target))
}
