//! Symmetric-group machinery: cycles, types, canonical permutations
//! `gamma_zeta`, transitivity and relative genus.
//!
//! Composition is right-to-left: `compose(a, b)` maps `i` to `a(b(i))`, so the
//! expression `alpha^{-1} gamma` means "apply `gamma`, then `alpha^{-1}`".

use std::fmt;
use std::str::FromStr;

use num::BigInt;

use crate::error::{Error, Result};
use crate::limits::{self, Limits};
use crate::partitions::{orbits_of, PartitionType, SetPartition};
use crate::rational::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    /// 0-based images.
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u8).collect(),
        }
    }

    /// From 1-based images `alpha(1), ..., alpha(n)`.
    pub fn from_image(image: &[usize]) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        let mut out = Vec::with_capacity(n);
        for &x in image {
            if x == 0 || x > n || seen[x - 1] {
                return Err(Error::domain(format!("{image:?} is not a bijection of 1..={n}")));
            }
            seen[x - 1] = true;
            out.push((x - 1) as u8);
        }
        Ok(Permutation { image: out })
    }

    pub(crate) fn from_raw(image: Vec<u8>) -> Self {
        Permutation { image }
    }

    /// From 1-based disjoint cycles on `[n]`; omitted points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<Option<usize>> = vec![None; n];
        for cycle in cycles {
            for (i, &x) in cycle.iter().enumerate() {
                let y = cycle[(i + 1) % cycle.len()];
                if x == 0 || x > n || y == 0 || y > n {
                    return Err(Error::domain(format!("cycle {cycle:?} leaves 1..={n}")));
                }
                if image[x - 1].is_some() {
                    return Err(Error::domain(format!("{x} appears in two cycles")));
                }
                image[x - 1] = Some(y);
            }
        }
        let image: Vec<usize> = image
            .iter()
            .enumerate()
            .map(|(i, y)| y.unwrap_or(i + 1))
            .collect();
        Self::from_image(&image)
    }

    /// Parses cycle notation on an explicit ground set size.
    pub fn parse_with_n(s: &str, n: usize) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        Self::from_cycles(n, &cycles)
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    /// `alpha(i)` for 1-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] as usize + 1
    }

    pub fn image(&self) -> Vec<usize> {
        self.image.iter().map(|&x| x as usize + 1).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.image
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.n()];
        for (i, &x) in self.image.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Permutation { image: inv }
    }

    /// Cycles starting at their least element, ordered by least element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.image[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// `#(alpha)`
    pub fn num_cycles(&self) -> usize {
        count_cycles(&self.image)
    }

    /// `f(alpha)`: the cycles read as blocks.
    pub fn orbit_partition(&self) -> SetPartition {
        let image: Vec<usize> = self.image.iter().map(|&x| x as usize).collect();
        orbits_of(&image)
    }

    pub fn cycle_type(&self) -> CycleType {
        let mut parts: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        CycleType { parts }
    }
}

pub(crate) fn count_cycles(image: &[u8]) -> usize {
    let mut seen = 0u64;
    let mut cycles = 0;
    for start in 0..image.len() {
        if seen & (1 << start) != 0 {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while seen & (1 << i) == 0 {
            seen |= 1 << i;
            i = image[i] as usize;
        }
    }
    cycles
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut rest = t.as_str();
    let mut cycles = Vec::new();
    if rest.is_empty() || rest == "()" {
        return Ok(cycles);
    }
    while !rest.is_empty() {
        let (body, tail) = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| Error::Parse(format!("malformed cycle notation {s:?}")))?;
        let cycle = body
            .split(',')
            .map(|x| {
                x.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("malformed cycle notation {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        cycles.push(cycle);
        rest = tail;
    }
    Ok(cycles)
}

impl FromStr for Permutation {
    type Err = Error;

    /// Ground set size is the largest element mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let cycles = parse_cycles(s)?;
        let n = cycles.iter().flatten().copied().max().unwrap_or(0);
        Self::from_cycles(n, &cycles)
    }
}

impl fmt::Display for Permutation {
    /// Cycle notation with fixed points, e.g. `(1,7,4)(2,5)(3,6)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for cycle in self.cycles() {
            let items: Vec<String> = cycle.iter().map(|x| x.to_string()).collect();
            write!(f, "({})", items.join(","))?;
        }
        Ok(())
    }
}

pub fn compose(a: &Permutation, b: &Permutation) -> Result<Permutation> {
    if a.n() != b.n() {
        return Err(Error::Dimension {
            left: a.n(),
            right: b.n(),
        });
    }
    Ok(Permutation {
        image: b.image.iter().map(|&i| a.image[i as usize]).collect(),
    })
}

/// Integer partition `zeta` of `n`, parts weakly decreasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycleType {
    parts: Vec<usize>,
}

impl CycleType {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(Error::domain(format!("{parts:?} is not an integer partition")));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CycleType { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.parts.iter().sum()
    }

    /// `|zeta|`, the number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `t_i`: how many parts equal `i`.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.parts.iter().filter(|&&p| p == i).count()
    }

    pub fn to_partition_type(&self) -> PartitionType {
        PartitionType::from_sizes(self.n(), &self.parts).expect("valid cycle type")
    }

    /// `gamma_zeta = (1..zeta_1)(zeta_1+1..zeta_1+zeta_2)...`
    pub fn canonical_gamma(&self) -> Permutation {
        let n = self.n();
        let mut image = vec![0u8; n];
        let mut start = 0;
        for &len in &self.parts {
            for j in 0..len {
                image[start + j] = (start + (j + 1) % len) as u8;
            }
            start += len;
        }
        Permutation { image }
    }

    /// `N_zeta = n! / (prod zeta_i * prod t_i!)`, the size of the conjugacy class.
    pub fn type_count(&self) -> BigInt {
        let n = self.n();
        let lengths: BigInt = self.parts.iter().map(|&p| BigInt::from(p)).product();
        let mult: BigInt = (1..=n).map(|i| factorial(self.multiplicity(i))).product();
        factorial(n) / (lengths * mult)
    }

    /// `prod zeta_i * prod t_i!`, the centralizer order `n! / N_zeta`.
    pub fn centralizer_order(&self) -> BigInt {
        factorial(self.n()) / self.type_count()
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", items.join(","))
    }
}

pub fn is_transitive_pair(a: &Permutation, g: &Permutation) -> Result<bool> {
    let joined = a.orbit_partition().join(&g.orbit_partition())?;
    Ok(joined.num_blocks() == 1)
}

/// Genus of `a` relative to `g` from `#(a) + #(a^{-1} g) + #(g) = n + 2(1 - genus)`.
pub fn relative_genus(a: &Permutation, g: &Permutation) -> Result<usize> {
    if !is_transitive_pair(a, g)? {
        return Err(Error::domain(format!(
            "{a} and {g} do not generate a transitive subgroup"
        )));
    }
    let n = a.n();
    let total = a.num_cycles() + compose(&a.inverse(), g)?.num_cycles() + g.num_cycles();
    if total > n + 2 || (n + 2 - total) % 2 != 0 {
        return Err(Error::Invariant(format!(
            "Euler count {total} incompatible with n = {n} for {a} relative to {g}"
        )));
    }
    Ok((n + 2 - total) / 2)
}

/// Lexicographic successor of a permutation image, in place.
pub(crate) fn next_lex(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Visits every element of `S_n` in lexicographic order of its image.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[u8])) {
    let mut p: Vec<u8> = (0..n as u8).collect();
    loop {
        f(&p);
        if !next_lex(&mut p) {
            break;
        }
    }
}

/// Transitivity of `<a, g>` on raw images via union-find.
pub(crate) fn raw_transitive(a: &[u8], g: &[u8]) -> bool {
    let n = a.len();
    let mut reach = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let i = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= 1 << a[i];
            next |= 1 << g[i];
        }
        frontier = next & !reach;
        reach |= next;
    }
    reach.count_ones() as usize == n
}

/// `a^{-1} g` on raw images.
pub(crate) fn raw_inv_compose(a: &[u8], g: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; a.len()];
    for (i, &x) in a.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    g.iter().map(|&x| inv[x as usize]).collect()
}

/// `S_NC^{(g)}[zeta]`: permutations of genus `g` relative to `gamma_zeta` that
/// act transitively together with it, in lexicographic order of image.
pub fn enumerate_snc(zeta: &CycleType, genus: usize) -> Result<Vec<Permutation>> {
    let n = zeta.n();
    limits::check("permutation n", n, Limits::current().permutations)?;
    let gamma = zeta.canonical_gamma();
    let g = gamma.raw().to_vec();
    let cg = zeta.len();
    // #(alpha) + #(alpha^{-1} gamma) = n + 2 - 2 genus - #(gamma)
    let Some(target) = (n + 2).checked_sub(2 * genus + cg) else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for_each_permutation(n, |a| {
        let ca = count_cycles(a);
        // #(alpha^{-1} gamma) >= 1
        if ca >= target {
            return;
        }
        if count_cycles(&raw_inv_compose(a, &g)) + ca == target && raw_transitive(a, &g) {
            out.push(Permutation::from_raw(a.to_vec()));
        }
    });
    Ok(out)
}

/// `gamma_{r,s} = (1..r)(r+1..r+s)`.
pub fn gamma_rs(r: usize, s: usize) -> Result<Permutation> {
    if r == 0 || s == 0 {
        return Err(Error::domain("annulus sizes must be positive"));
    }
    // canonical_gamma sorts parts; keep the outer circle first.
    let n = r + s;
    let mut image = vec![0u8; n];
    for j in 0..r {
        image[j] = ((j + 1) % r) as u8;
    }
    for j in 0..s {
        image[r + j] = (r + (j + 1) % s) as u8;
    }
    Ok(Permutation { image })
}

/// `Kr_{r,s}(a) = a^{-1} gamma_{r,s}` for `a` in `S_NC(r, s)`.
pub fn annular_kreweras(a: &Permutation, r: usize, s: usize) -> Result<Permutation> {
    let gamma = gamma_rs(r, s)?;
    if a.n() != r + s {
        return Err(Error::Dimension {
            left: a.n(),
            right: r + s,
        });
    }
    if !is_transitive_pair(a, &gamma)? || relative_genus(a, &gamma)? != 0 {
        return Err(Error::domain(format!("{a} is not in S_NC({r}, {s})")));
    }
    compose(&a.inverse(), &gamma)
}
