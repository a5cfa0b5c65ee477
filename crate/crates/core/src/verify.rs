//! Seeded verification runs behind `finfree verify`.
//!
//! Each check compares two independently computed exact values per case and
//! stops at nothing: every case is evaluated, the first disagreement is kept as
//! the failure locator.

use std::fmt;
use std::str::FromStr;

use num::{One, Zero};
use serde::Serialize;
use serde_json::json;

use crate::asymptotics::{
    derivative_flow_trend, infinitesimal_three_paths, markov_identity_check, product_convergence_trend,
    r_inf_consistency_check, second_order_functional_check, TrendReport,
};
use crate::error::{Error, Result};
use crate::families::FamilyKind;
use crate::identity::{
    admissible_type_pairs, annular_first_order, annular_layer_sum, compound_poisson_check, count_a,
    count_a_enumerated, count_b, count_b_enumerated, genus_lhs, genus_rhs, mobius_algebra_check,
    noncrossing_kreweras_sum, order_d_expansion, product_cumulant_rhs, product_moment_rhs, WeightSequences,
};
use crate::partitions::enumerate_partitions;
use crate::random::RationalRng;
use crate::rational::{binomial, fmt_q, pow_q, q, q_big, qf, Q};

/// The checkable identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// Cumulants of `p boxtimes_d q` from the pair expansion.
    ProductCumulant,
    /// Moments of `p boxtimes_d q` from the pair expansion.
    ProductMoment,
    /// `m_n(p) = kappa_n(p boxtimes_d L^)`.
    CompoundPoisson,
    /// Order-0 layer against the non-crossing Kreweras sum.
    NoncrossingLayer,
    /// Order-1 layer against the annular sum.
    AnnularLayer,
    /// Every order of the pair expansion against its genus layers.
    Genus,
    /// `1/d` coefficient of `m_n` against the annular formula.
    FirstOrder,
    MobiusAlgebra,
    CountA,
    CountB,
    /// Infinitesimal moments through three paths and their closed forms.
    Infinitesimal,
    /// `R_inf`, its `G_inf` form and the Markov relation.
    Transforms,
    /// The second-order Cauchy functional equation.
    SecondOrder,
    /// Finite-`d` convergence rates.
    Trends,
}

const ALL: [(Check, &str); 14] = [
    (Check::ProductCumulant, "product-cumulant"),
    (Check::ProductMoment, "product-moment"),
    (Check::CompoundPoisson, "compound-poisson"),
    (Check::NoncrossingLayer, "noncrossing-layer"),
    (Check::AnnularLayer, "annular-layer"),
    (Check::Genus, "genus"),
    (Check::FirstOrder, "first-order"),
    (Check::MobiusAlgebra, "mobius-algebra"),
    (Check::CountA, "count-A"),
    (Check::CountB, "count-B"),
    (Check::Infinitesimal, "infinitesimal"),
    (Check::Transforms, "transforms"),
    (Check::SecondOrder, "second-order"),
    (Check::Trends, "trends"),
];

impl Check {
    pub fn all() -> impl Iterator<Item = Check> {
        ALL.iter().map(|x| x.0)
    }

    pub fn name(self) -> &'static str {
        ALL.iter().find(|x| x.0 == self).expect("listed").1
    }

    /// Default largest `n` (or series order).
    fn default_n(self) -> usize {
        match self {
            Check::ProductCumulant | Check::ProductMoment | Check::CompoundPoisson => 8,
            Check::NoncrossingLayer | Check::AnnularLayer | Check::FirstOrder | Check::Infinitesimal => 8,
            Check::Genus | Check::CountA | Check::CountB => 7,
            Check::MobiusAlgebra => 5,
            Check::Transforms => 9,
            Check::SecondOrder => 8,
            Check::Trends => 4,
        }
    }

    fn default_cases(self) -> usize {
        match self {
            Check::ProductCumulant | Check::ProductMoment | Check::CompoundPoisson => 20,
            Check::NoncrossingLayer | Check::AnnularLayer | Check::Genus | Check::FirstOrder => 20,
            Check::MobiusAlgebra => 5,
            _ => 0,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL.iter()
            .find(|x| x.1.eq_ignore_ascii_case(s))
            .map(|x| x.0)
            .ok_or_else(|| {
                let names: Vec<_> = ALL.iter().map(|x| x.1).collect();
                Error::Parse(format!("unknown identity {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

/// Knobs shared by every check; `None` picks the check's default.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub n: Option<usize>,
    /// Inclusive degree range for the polynomial checks.
    pub d: Option<(usize, usize)>,
    pub cases: Option<usize>,
    pub seed: u64,
    pub verbose: bool,
}

/// One compared pair of values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    pub lhs: String,
    pub rhs: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub identity: String,
    pub parameters: serde_json::Value,
    pub cases: usize,
    pub all_passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
}

struct Recorder {
    cases: usize,
    first_failure: Option<Witness>,
    witnesses: Vec<Witness>,
    verbose: bool,
}

impl Recorder {
    fn new(verbose: bool) -> Self {
        Recorder {
            cases: 0,
            first_failure: None,
            witnesses: Vec::new(),
            verbose,
        }
    }

    fn compare(&mut self, label: impl Into<String>, n: Option<usize>, d: Option<usize>, lhs: String, rhs: String) {
        let passed = lhs == rhs;
        self.push(Witness {
            label: label.into(),
            n,
            d,
            lhs,
            rhs,
            passed,
        });
    }

    fn compare_q(&mut self, label: impl Into<String>, n: Option<usize>, d: Option<usize>, lhs: &Q, rhs: &Q) {
        self.compare(label, n, d, fmt_q(lhs), fmt_q(rhs));
    }

    fn flag(&mut self, label: impl Into<String>, n: Option<usize>, ok: bool) {
        self.compare(label, n, None, ok.to_string(), "true".into());
    }

    fn push(&mut self, w: Witness) {
        self.cases += 1;
        if !w.passed && self.first_failure.is_none() {
            self.first_failure = Some(w.clone());
        }
        if self.verbose {
            self.witnesses.push(w);
        }
    }

    fn finish(self, check: Check, parameters: serde_json::Value) -> CheckReport {
        CheckReport {
            identity: check.name().into(),
            parameters,
            cases: self.cases,
            all_passed: self.first_failure.is_none(),
            first_failure: self.first_failure,
            witnesses: self.witnesses,
        }
    }
}

fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("[{}]", parts.join(", "))
}

/// Runs one check. Errors are reserved for bad parameters and caps; identity
/// failures come back inside the report.
pub fn run_check(check: Check, opts: &VerifyOptions) -> Result<CheckReport> {
    let n = opts.n.unwrap_or_else(|| check.default_n());
    let cases = opts.cases.unwrap_or_else(|| check.default_cases());
    let mut rng = RationalRng::new(opts.seed);
    let mut rec = Recorder::new(opts.verbose);
    let mut params = json!({ "n": n, "cases": cases, "seed": opts.seed });
    match check {
        Check::ProductCumulant | Check::ProductMoment | Check::CompoundPoisson => {
            let (lo, hi) = opts.d.unwrap_or((2, 8));
            if lo == 0 || lo > hi {
                return Err(Error::domain(format!("bad degree range {lo}..{hi}")));
            }
            params["d"] = json!([lo, hi]);
            for d in lo..=hi {
                for _ in 0..cases {
                    let p = rng.poly(d);
                    let r = rng.poly(d);
                    product_case(check, &mut rec, &p, &r, n.min(d))?;
                }
            }
        }
        Check::NoncrossingLayer | Check::AnnularLayer | Check::Genus => {
            for m in 1..=n {
                for _ in 0..cases {
                    let w = WeightSequences::new(rng.vector(m), rng.vector(m));
                    match check {
                        Check::NoncrossingLayer => {
                            rec.compare_q("order 0", Some(m), None, &genus_lhs(m, 0, &w)?, &noncrossing_kreweras_sum(m, &w)?);
                        }
                        Check::AnnularLayer if m >= 2 => {
                            rec.compare_q("order 1", Some(m), None, &genus_lhs(m, 1, &w)?, &annular_layer_sum(m, &w)?);
                        }
                        Check::Genus => {
                            for k in 0..m {
                                rec.compare_q(format!("order {k}"), Some(m), None, &genus_lhs(m, k, &w)?, &genus_rhs(m, k, &w)?);
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        Check::FirstOrder => {
            let mut profiles = named_profiles(n);
            for i in 0..cases {
                profiles.push((format!("random #{i}"), rng.vector(n)));
            }
            for (name, k) in &profiles {
                for m in 1..=n {
                    let lhs = order_d_expansion(m, k)?.coeff(1);
                    rec.compare_q(name.clone(), Some(m), None, &lhs, &annular_first_order(m, k)?);
                }
            }
        }
        Check::MobiusAlgebra => {
            for m in 1..=n {
                let size = enumerate_partitions(m)?.len();
                for _ in 0..cases {
                    let f: Vec<Q> = (0..size).map(|_| q(rng.integer(-5, 5))).collect();
                    let g: Vec<Q> = (0..size).map(|_| q(rng.integer(-5, 5))).collect();
                    rec.flag("join convolution", Some(m), mobius_algebra_check(m, &f, &g)?);
                }
                let mut delta = vec![Q::zero(); size];
                delta[0] = Q::one();
                let g: Vec<Q> = (0..size).map(|_| q(rng.integer(-5, 5))).collect();
                rec.flag("delta at 0_n", Some(m), mobius_algebra_check(m, &delta, &g)?);
            }
        }
        Check::CountA | Check::CountB => {
            for m in 1..=n {
                for (s, t) in admissible_type_pairs(m) {
                    let label = format!("{s} {t}");
                    let (closed, brute) = if check == Check::CountA {
                        (count_a(&s, &t)?, count_a_enumerated(&s, &t)?)
                    } else {
                        (count_b(&s, &t)?, count_b_enumerated(&s, &t)?)
                    };
                    rec.compare(label, Some(m), None, closed.to_string(), brute.to_string());
                }
            }
        }
        Check::Infinitesimal => infinitesimal_checks(&mut rec, n)?,
        Check::Transforms => {
            params = json!({ "order": n });
            transform_checks(&mut rec, n)?;
        }
        Check::SecondOrder => {
            params = json!({ "order": n });
            for (name, k) in named_profiles(n) {
                rec.flag(name, Some(n), second_order_functional_check(&k, n)?);
            }
        }
        Check::Trends => {
            let ds = [8, 16, 32, 64];
            params = json!({ "n": n, "ds": ds, "ratio_window": [1.5, 2.5] });
            trend_checks(&mut rec, n, &ds)?;
        }
    }
    Ok(rec.finish(check, params))
}

fn product_case(check: Check, rec: &mut Recorder, p: &crate::ffpoly::MonicPoly, r: &crate::ffpoly::MonicPoly, n: usize) -> Result<()> {
    let d = p.d();
    match check {
        Check::ProductCumulant => {
            let oracle = p.boxtimes(r)?.cumulants()?;
            let (kp, kr) = (p.cumulants()?, r.cumulants()?);
            for m in 1..=n {
                rec.compare_q("cumulant", Some(m), Some(d), &product_cumulant_rhs(m, d, &kp, &kr)?, oracle.get(m));
            }
        }
        Check::ProductMoment => {
            let oracle = p.boxtimes(r)?.moments(n);
            let (kp, mr) = (p.cumulants()?, r.moments(n));
            for m in 1..=n {
                rec.compare_q("moment", Some(m), Some(d), &product_moment_rhs(m, d, &kp, &mr)?, oracle.get(m));
            }
        }
        _ => rec.flag("compound poisson", None, compound_poisson_check(p)?),
    }
    Ok(())
}

/// Semicircle, free Poisson at three rates, and a point mass.
fn named_profiles(n: usize) -> Vec<(String, Vec<Q>)> {
    let mut out = vec![("hermite".to_string(), FamilyKind::Hermite.cumulant_profile(n))];
    for l in [qf(1, 3), q(1), q(2)] {
        out.push((format!("laguerre {}", fmt_q(&l)), FamilyKind::Laguerre(l).cumulant_profile(n)));
    }
    out.push(("dirac 3/2".into(), FamilyKind::Power(qf(3, 2)).cumulant_profile(n)));
    out
}

/// `|m'_n|` of the free Poisson law as polynomials in `lambda`, coefficients
/// of `lambda^1, lambda^2, ...`.
const POISSON_INFINITESIMAL: [&[i64]; 7] = [
    &[],
    &[1],
    &[3, 3],
    &[6, 17, 6],
    &[10, 55, 55, 10],
    &[15, 135, 262, 135, 15],
    &[21, 280, 889, 889, 280, 21],
];

/// Coefficients of the interpolating polynomial through `(x_i, y_i)`.
fn interpolate(xs: &[Q], ys: &[Q]) -> Vec<Q> {
    let n = xs.len();
    let mut out = vec![Q::zero(); n];
    for i in 0..n {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![Q::one()];
        let mut denom = Q::one();
        for j in 0..n {
            if j == i {
                continue;
            }
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * &xs[j];
            }
            basis = next;
            denom *= &xs[i] - &xs[j];
        }
        let scale = &ys[i] / denom;
        for (k, c) in basis.iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    out
}

fn infinitesimal_checks(rec: &mut Recorder, order: usize) -> Result<()> {
    let hermite = infinitesimal_three_paths(&FamilyKind::Hermite.cumulant_profile(order), order)?;
    rec.flag("hermite three paths agree", Some(order), hermite.agree);
    for n in 1..=order {
        let want = if n % 2 == 0 {
            (q_big(&binomial(n, n / 2)) - pow_q(&q(2), n)) / q(2)
        } else {
            Q::zero()
        };
        rec.compare_q("hermite closed form", Some(n), None, &hermite.annular[n - 1], &want);
    }
    let one = infinitesimal_three_paths(&FamilyKind::Laguerre(q(1)).cumulant_profile(order), order)?;
    rec.flag("laguerre 1 three paths agree", Some(order), one.agree);
    for n in 1..=order {
        let want = q_big(&binomial(2 * n, n)) / q(2) - pow_q(&q(4), n - 1);
        rec.compare_q("laguerre 1 closed form", Some(n), None, &one.annular[n - 1], &want);
    }
    // m'_n is a polynomial of degree <= n in lambda; n + 1 samples pin it down.
    let top = order.min(POISSON_INFINITESIMAL.len());
    let xs: Vec<Q> = (1..=top as i64 + 1).map(|i| qf(i, 2)).collect();
    let mut samples = Vec::new();
    for l in &xs {
        let rep = infinitesimal_three_paths(&FamilyKind::Laguerre(l.clone()).cumulant_profile(top), top)?;
        rec.flag(format!("laguerre {} three paths agree", fmt_q(l)), Some(top), rep.agree);
        samples.push(rep.annular);
    }
    for n in 1..=top {
        let ys: Vec<Q> = samples.iter().map(|s| s[n - 1].clone()).collect();
        let got = interpolate(&xs, &ys);
        let mut want = vec![Q::zero(); xs.len()];
        for (i, c) in POISSON_INFINITESIMAL[n - 1].iter().enumerate() {
            want[i + 1] = q(-c);
        }
        rec.compare("laguerre lambda polynomial", Some(n), None, fmt_vec(&got), fmt_vec(&want));
        // Closed form: (sum_k C(n,k)^2 l^k - sum_k C(2n,2k) l^k) / 2.
        let mut closed = vec![Q::zero(); xs.len()];
        for k in 0..=n {
            closed[k] = (q_big(&binomial(n, k)).pow(2) - q_big(&binomial(2 * n, 2 * k))) / q(2);
        }
        rec.compare("laguerre binomial form", Some(n), None, fmt_vec(&got), fmt_vec(&closed));
    }
    Ok(())
}

fn transform_checks(rec: &mut Recorder, order: usize) -> Result<()> {
    let kp = crate::asymptotics::infinitesimal_cumulants(&FamilyKind::Hermite.cumulant_profile(order), order)?;
    for n in 1..=order {
        let want = if n % 2 == 0 { q(-1) } else { Q::zero() };
        rec.compare_q("semicircle infinitesimal cumulant", Some(n), None, &kp[n - 1], &want);
    }
    let poisson = [q(1), q(2)];
    let mut profiles = vec![("semicircle".to_string(), FamilyKind::Hermite.cumulant_profile(order))];
    for l in &poisson {
        profiles.push((format!("free poisson {}", fmt_q(l)), FamilyKind::Laguerre(l.clone()).cumulant_profile(order)));
    }
    profiles.push(("dirac 3/2".into(), FamilyKind::Power(qf(3, 2)).cumulant_profile(order)));
    for (name, k) in &profiles {
        rec.flag(format!("{name}: markov relation"), Some(order), markov_identity_check(k, order)?);
        rec.flag(format!("{name}: R_inf via G_inf"), Some(order), r_inf_consistency_check(k, order)?);
    }
    Ok(())
}

fn trend_checks(rec: &mut Recorder, n: usize, ds: &[usize]) -> Result<()> {
    for m in 1..=n {
        let rep = product_convergence_trend(&FamilyKind::Hermite, &FamilyKind::Laguerre(q(1)), m, ds)?;
        trend_witness(rec, "product gaps", m, &rep);
    }
    for m in 1..=n.min(3) {
        let rep = derivative_flow_trend(&FamilyKind::Hermite, &qf(1, 2), m, ds)?;
        trend_witness(rec, "derivative flow gaps", m, &rep);
    }
    Ok(())
}

/// Identically zero gaps report as `exact`; otherwise the doubling ratios are
/// shown and each must sit in the window.
fn trend_witness(rec: &mut Recorder, label: &str, n: usize, rep: &TrendReport) {
    let (lhs, passed) = if rep.rows.iter().all(|r| r.exact_gap.is_zero()) {
        ("exact (all gaps zero)".to_string(), true)
    } else {
        let ratios: Vec<String> = rep
            .rows
            .iter()
            .filter_map(|r| r.ratio.map(|x| format!("{x:.4}")))
            .collect();
        (format!("ratios [{}]", ratios.join(", ")), rep.ratios_within(1.5, 2.5))
    };
    rec.push(Witness {
        label: label.into(),
        n: Some(n),
        d: None,
        lhs,
        rhs: "window [1.5, 2.5]".into(),
        passed,
    });
}
