//! Type-grouped counts behind every partition and permutation sum.
//!
//! Each summand in the identities depends on its partitions or permutations
//! only through their types, so one exhaustive sweep per `n` yields counts that
//! any weights can then be folded against.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::Result;
use crate::limits::{self, Limits};
use crate::partitions::{all_types, enumerate_noncrossing, enumerate_partitions, type_index, PartitionType};
use crate::permutations::{count_cycles, for_each_permutation, raw_inv_compose, raw_transitive, CycleType};

/// Counts of pairs `(sigma, tau)` in `P(n)^2` with `sigma v tau = 1_n`,
/// grouped by `(type sigma, type tau)`.
#[derive(Debug, Clone)]
pub struct PairCensus {
    pub n: usize,
    pub types: Vec<PartitionType>,
    /// `(index of type sigma, index of type tau, count)`, nonzero counts only.
    pub classes: Vec<(usize, usize, u64)>,
}

fn type_slot(index: &HashMap<Vec<usize>, usize>, n: usize, sizes: impl Iterator<Item = usize>) -> usize {
    let mut counts = vec![0usize; n];
    for s in sizes {
        counts[s - 1] += 1;
    }
    index[&counts]
}

/// Every pair of `P(n)` is visited; the join is tested by growing the
/// component of element 1 through alternating block unions.
pub fn pair_census(n: usize) -> Result<Arc<PairCensus>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<PairCensus>>>> = OnceLock::new();
    limits::check("pair sweep n", n, Limits::current().pair_sweep)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("pair census cache").get(&n) {
        return Ok(hit.clone());
    }
    let parts = enumerate_partitions(n)?;
    let types = all_types(n);
    let index = type_index(n);
    let t = types.len();
    let masks: Vec<Vec<u64>> = parts.iter().map(|p| p.masks()).collect();
    let tys: Vec<usize> = parts
        .iter()
        .map(|p| index[p.partition_type().counts()])
        .collect();
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let grid = masks
        .par_iter()
        .zip(tys.par_iter())
        .fold(
            || vec![0u64; t * t],
            |mut acc, (sm, &st)| {
                for (tm, &tt) in masks.iter().zip(&tys) {
                    if connected(sm, tm, full) {
                        acc[st * t + tt] += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; t * t],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    let classes = grid
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(i, &c)| (i / t, i % t, c))
        .collect();
    let census = Arc::new(PairCensus { n, types, classes });
    cache.lock().expect("pair census cache").insert(n, census.clone());
    Ok(census)
}

fn connected(a: &[u64], b: &[u64], full: u64) -> bool {
    let mut reach = a[0];
    loop {
        let mut next = reach;
        for &m in b.iter().chain(a) {
            if m & next != 0 {
                next |= m;
            }
        }
        if next == reach {
            return reach == full;
        }
        reach = next;
    }
}

/// Counts of `alpha` in `S_n` transitive with `gamma_zeta`, grouped by
/// `(genus, type alpha, type alpha^{-1} gamma_zeta)`.
#[derive(Debug, Clone)]
pub struct GenusCensus {
    pub zeta: CycleType,
    pub types: Vec<PartitionType>,
    pub classes: Vec<(usize, usize, usize, u64)>,
}

pub fn genus_census(zeta: &CycleType) -> Result<Arc<GenusCensus>> {
    static CACHE: OnceLock<Mutex<HashMap<CycleType, Arc<GenusCensus>>>> = OnceLock::new();
    let n = zeta.n();
    limits::check("permutation n", n, Limits::current().permutations)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("genus census cache").get(zeta) {
        return Ok(hit.clone());
    }
    let types = all_types(n);
    let index = type_index(n);
    let gamma = zeta.canonical_gamma().raw().to_vec();
    let cg = zeta.len();
    let mut counts: HashMap<(usize, usize, usize), u64> = HashMap::new();
    for_each_permutation(n, |a| {
        if !raw_transitive(a, &gamma) {
            return;
        }
        let b = raw_inv_compose(a, &gamma);
        let total = count_cycles(a) + count_cycles(&b) + cg;
        let genus = (n + 2 - total) / 2;
        let ta = type_slot(&index, n, cycle_lengths(a).into_iter());
        let tb = type_slot(&index, n, cycle_lengths(&b).into_iter());
        *counts.entry((genus, ta, tb)).or_default() += 1;
    });
    let mut classes: Vec<_> = counts.into_iter().map(|((g, a, b), c)| (g, a, b, c)).collect();
    classes.sort_unstable();
    let census = Arc::new(GenusCensus {
        zeta: zeta.clone(),
        types,
        classes,
    });
    cache.lock().expect("genus census cache").insert(zeta.clone(), census.clone());
    Ok(census)
}

pub(crate) fn cycle_lengths(image: &[u8]) -> Vec<usize> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    for start in 0..image.len() {
        if seen & (1 << start) != 0 {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while seen & (1 << i) == 0 {
            seen |= 1 << i;
            i = image[i] as usize;
            len += 1;
        }
        out.push(len);
    }
    out
}

/// Counts of `pi` in `NC(n)` grouped by `(type pi, type Kr(pi))`.
pub fn noncrossing_census(n: usize) -> Result<Arc<Vec<(PartitionType, PartitionType, u64)>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(PartitionType, PartitionType, u64)>>>>> =
        OnceLock::new();
    limits::check("non-crossing n", n, Limits::current().noncrossing)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("nc census cache").get(&n) {
        return Ok(hit.clone());
    }
    let mut counts: HashMap<(PartitionType, PartitionType), u64> = HashMap::new();
    for p in enumerate_noncrossing(n)? {
        let k = p.kreweras()?;
        *counts.entry((p.partition_type(), k.partition_type())).or_default() += 1;
    }
    let mut out: Vec<_> = counts.into_iter().map(|((a, b), c)| (a, b, c)).collect();
    out.sort_unstable();
    let out = Arc::new(out);
    cache.lock().expect("nc census cache").insert(n, out.clone());
    Ok(out)
}
