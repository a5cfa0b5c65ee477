//! Annular non-crossing permutations `S_NC(r, s)`.
//!
//! Membership is tested through the public permutation API (orbit joins and
//! composed cycle counts), separately from the raw sweep behind the genus
//! census, so that the two can check each other.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num::Zero;

use crate::error::{Error, Result};
use crate::limits::{self, Limits};
use crate::partitions::PartitionType;
use crate::permutations::{compose, for_each_permutation, gamma_rs, Permutation};
use crate::rational::Q;

/// `S_NC(r, s)`: `alpha` with `<alpha, gamma_{r,s}>` transitive and
/// `#(alpha) + #(alpha^{-1} gamma_{r,s}) = r + s`.
pub fn annular_noncrossing(r: usize, s: usize) -> Result<Vec<Permutation>> {
    let n = r + s;
    limits::check("annular r + s", n, Limits::current().annular)?;
    let gamma = gamma_rs(r, s)?;
    let gamma_orbits = gamma.orbit_partition();
    let mut out = Vec::new();
    for_each_permutation(n, |raw| {
        let a = Permutation::from_raw(raw.to_vec());
        let kr = compose(&a.inverse(), &gamma).expect("same n");
        if a.num_cycles() + kr.num_cycles() != n {
            return;
        }
        let joined = a.orbit_partition().join(&gamma_orbits).expect("same n");
        if joined.num_blocks() == 1 {
            out.push(a);
        }
    });
    Ok(out)
}

/// `S_NC(r, s)` grouped by `(type alpha, type Kr_{r,s}(alpha))`.
pub fn annular_census(r: usize, s: usize) -> Result<Arc<Vec<(PartitionType, PartitionType, u64)>>> {
    type Census = Arc<Vec<(PartitionType, PartitionType, u64)>>;
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Census>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("annular cache").get(&(r, s)) {
        return Ok(hit.clone());
    }
    let n = r + s;
    let gamma = gamma_rs(r, s)?;
    let mut counts: HashMap<(PartitionType, PartitionType), u64> = HashMap::new();
    for a in annular_noncrossing(r, s)? {
        let kr = compose(&a.inverse(), &gamma)?;
        let ta = PartitionType::from_sizes(n, &cycle_sizes(&a))?;
        let tk = PartitionType::from_sizes(n, &cycle_sizes(&kr))?;
        *counts.entry((ta, tk)).or_default() += 1;
    }
    let mut out: Vec<_> = counts.into_iter().map(|((a, b), c)| (a, b, c)).collect();
    out.sort_unstable();
    let out = Arc::new(out);
    cache.lock().expect("annular cache").insert((r, s), out.clone());
    Ok(out)
}

fn cycle_sizes(p: &Permutation) -> Vec<usize> {
    p.cycles().iter().map(Vec::len).collect()
}

/// `w_pi = prod_V w_{|V|}` for a type; `w` is 1-based.
pub fn type_weight(w: &[Q], t: &PartitionType) -> Result<Q> {
    let mut acc = Q::from_integer(1.into());
    for (i, &c) in t.counts().iter().enumerate() {
        if c == 0 {
            continue;
        }
        let wi = w.get(i).ok_or_else(|| {
            Error::domain(format!(
                "weight sequence of length {} has no entry {}",
                w.len(),
                i + 1
            ))
        })?;
        if wi.is_zero() {
            return Ok(Q::zero());
        }
        for _ in 0..c {
            acc *= wi;
        }
    }
    Ok(acc)
}

/// `alpha_{r,s} = sum_{pi in S_NC(r,s)} kappa_pi`.
pub fn alpha_annular(kappa: &[Q], r: usize, s: usize) -> Result<Q> {
    let mut acc = Q::zero();
    for (ta, _, c) in annular_census(r, s)?.iter() {
        acc += type_weight(kappa, ta)? * Q::from_integer((*c).into());
    }
    Ok(acc)
}

/// `sum_{alpha in S_NC(r,s)} u_alpha v_{Kr_{r,s}(alpha)}`.
pub fn annular_pair_sum(u: &[Q], v: &[Q], r: usize, s: usize) -> Result<Q> {
    let mut acc = Q::zero();
    for (ta, tk, c) in annular_census(r, s)?.iter() {
        acc += type_weight(u, ta)? * type_weight(v, tk)? * Q::from_integer((*c).into());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, q};
    use num::BigInt;

    #[test]
    fn counts_match_closed_form() {
        for n in 2..=8 {
            for r in 1..n {
                let s = n - r;
                let closed = BigInt::from(2 * r * s) * binomial(2 * r - 1, r) * binomial(2 * s - 1, s)
                    / BigInt::from(n);
                assert_eq!(BigInt::from(annular_noncrossing(r, s).unwrap().len()), closed);
            }
        }
    }

    #[test]
    fn small_cases() {
        assert_eq!(annular_noncrossing(1, 1).unwrap().len(), 1);
        assert_eq!(annular_noncrossing(2, 1).unwrap().len(), 4);
        let a: Permutation = "(1,7,5,4)(3)(2,6)".parse().unwrap();
        assert!(annular_noncrossing(4, 3).unwrap().contains(&a));
    }

    #[test]
    fn alpha_examples() {
        let sc = vec![q(0), q(1), q(0), q(0)];
        assert_eq!(alpha_annular(&sc, 1, 1).unwrap(), q(1));
        let dirac = vec![q(3), q(0), q(0), q(0), q(0)];
        for (r, s) in [(2, 1), (1, 2), (2, 2), (3, 1)] {
            assert!(alpha_annular(&dirac, r, s).unwrap().is_zero());
        }
        let ones = vec![q(1); 4];
        assert_eq!(alpha_annular(&ones, 2, 1).unwrap(), q(4));
    }

    #[test]
    fn cap() {
        assert!(matches!(annular_noncrossing(5, 5), Err(Error::SizeLimit { .. })));
    }
}
