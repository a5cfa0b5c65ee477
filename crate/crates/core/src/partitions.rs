//! The set-partition lattice `P(n)` and its non-crossing sublattice.
//!
//! A partition is stored as its restricted-growth string: `rgs[i]` is the block
//! index of element `i + 1`, with blocks numbered in order of their least
//! element. All public interfaces are 1-based.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, One};

use crate::error::{Error, Result};
use crate::limits::{self, Limits};
use crate::rational::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    rgs: Vec<u8>,
}

impl SetPartition {
    /// Builds a partition from a restricted-growth string (0-based labels).
    pub fn from_rgs(rgs: Vec<u8>) -> Result<Self> {
        if rgs.is_empty() {
            return Err(Error::domain("a partition needs n >= 1"));
        }
        let mut max = 0u8;
        for (i, &b) in rgs.iter().enumerate() {
            let ok = if i == 0 { b == 0 } else { b <= max + 1 };
            if !ok {
                return Err(Error::domain(format!(
                    "not a restricted-growth string: {rgs:?}"
                )));
            }
            max = max.max(b);
        }
        Ok(SetPartition { rgs })
    }

    /// Builds a partition from 1-based blocks covering `1..=n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        let mut label = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::domain("empty block"));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::domain(format!("element {e} outside 1..={n}")));
                }
                if label[e - 1] != usize::MAX {
                    return Err(Error::domain(format!("element {e} appears twice")));
                }
                label[e - 1] = b;
            }
        }
        if label.iter().any(|&l| l == usize::MAX) {
            return Err(Error::domain("blocks do not cover 1..=n"));
        }
        Ok(Self::canonicalize(&label))
    }

    /// Relabels arbitrary block labels into restricted-growth form.
    pub(crate) fn canonicalize(labels: &[usize]) -> Self {
        let mut map: HashMap<usize, u8> = HashMap::new();
        let rgs = labels
            .iter()
            .map(|l| {
                let next = map.len() as u8;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        SetPartition { rgs }
    }

    /// The finest partition `0_n`.
    pub fn zero(n: usize) -> Self {
        SetPartition {
            rgs: (0..n as u8).collect(),
        }
    }

    /// The coarsest partition `1_n`.
    pub fn one(n: usize) -> Self {
        SetPartition { rgs: vec![0; n] }
    }

    pub fn n(&self) -> usize {
        self.rgs.len()
    }

    pub fn rgs(&self) -> &[u8] {
        &self.rgs
    }

    pub fn num_blocks(&self) -> usize {
        self.rgs.iter().copied().max().map_or(0, |m| m as usize + 1)
    }

    /// Blocks in order of least element, elements ascending, 1-based.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize].push(i + 1);
        }
        out
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_blocks()];
        for &b in &self.rgs {
            sizes[b as usize] += 1;
        }
        sizes
    }

    /// Block bitmasks (bit `i` is element `i + 1`); only valid for `n <= 64`.
    pub(crate) fn masks(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.num_blocks()];
        for (i, &b) in self.rgs.iter().enumerate() {
            out[b as usize] |= 1 << i;
        }
        out
    }

    /// `self <= other` in refinement order: every block of `self` sits inside a
    /// block of `other`.
    pub fn refines(&self, other: &SetPartition) -> Result<bool> {
        same_n(self, other)?;
        let mut image = vec![u8::MAX; self.num_blocks()];
        for (a, b) in self.rgs.iter().zip(&other.rgs) {
            let slot = &mut image[*a as usize];
            if *slot == u8::MAX {
                *slot = *b;
            } else if *slot != *b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The finest partition coarser than both arguments.
    pub fn join(&self, other: &SetPartition) -> Result<SetPartition> {
        same_n(self, other)?;
        let n = self.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for rgs in [&self.rgs, &other.rgs] {
            let mut first: Vec<Option<usize>> = vec![None; n];
            for (i, &b) in rgs.iter().enumerate() {
                match first[b as usize] {
                    None => first[b as usize] = Some(i),
                    Some(j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        if ri != rj {
                            parent[ri] = rj;
                        }
                    }
                }
            }
        }
        let labels: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        Ok(Self::canonicalize(&labels))
    }

    /// `mu(0_n, self) = (-1)^{n - |self|} prod (|V| - 1)!`.
    pub fn mobius_zero(&self) -> BigInt {
        let magnitude = self
            .block_sizes()
            .iter()
            .fold(BigInt::one(), |acc, &s| acc * factorial(s - 1));
        if (self.n() - self.num_blocks()) % 2 == 0 {
            magnitude
        } else {
            -magnitude
        }
    }

    pub fn is_noncrossing(&self) -> bool {
        // i < j < k < l with i~k, j~l in different blocks. For each block pair
        // the test reduces to interleaving of their element sequences.
        let n = self.n();
        for i in 0..n {
            for j in i + 1..n {
                if self.rgs[j] == self.rgs[i] {
                    continue;
                }
                for k in j + 1..n {
                    if self.rgs[k] != self.rgs[i] {
                        continue;
                    }
                    for l in k + 1..n {
                        if self.rgs[l] == self.rgs[j] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Kreweras complement: lift to the permutation whose cycles run through
    /// each block in increasing order and read the orbits of `alpha^{-1} gamma_n`.
    pub fn kreweras(&self) -> Result<SetPartition> {
        if !self.is_noncrossing() {
            return Err(Error::domain(format!(
                "Kreweras complement requested for crossing partition {self}"
            )));
        }
        let n = self.n();
        let mut alpha_inv = vec![0usize; n];
        for block in self.blocks() {
            let m = block.len();
            for (idx, &e) in block.iter().enumerate() {
                let next = block[(idx + 1) % m];
                alpha_inv[next - 1] = e - 1;
            }
        }
        // alpha^{-1} gamma_n (i) = alpha^{-1}(i + 1 mod n)
        let image: Vec<usize> = (0..n).map(|i| alpha_inv[(i + 1) % n]).collect();
        Ok(orbits_of(&image))
    }

    pub fn partition_type(&self) -> PartitionType {
        let n = self.n();
        let mut counts = vec![0usize; n];
        for s in self.block_sizes() {
            counts[s - 1] += 1;
        }
        PartitionType { n, counts }
    }
}

/// Orbit partition of a 0-based permutation image.
pub(crate) fn orbits_of(image: &[usize]) -> SetPartition {
    let n = image.len();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let mut i = start;
        while label[i] == usize::MAX {
            label[i] = next;
            i = image[i];
        }
        next += 1;
    }
    SetPartition::canonicalize(&label)
}

fn same_n(a: &SetPartition, b: &SetPartition) -> Result<()> {
    if a.n() != b.n() {
        Err(Error::Dimension {
            left: a.n(),
            right: b.n(),
        })
    } else {
        Ok(())
    }
}

impl fmt::Display for SetPartition {
    /// `{1,3}{2}{4}`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for block in self.blocks() {
            let items: Vec<String> = block.iter().map(|e| e.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        Ok(())
    }
}

impl FromStr for SetPartition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut blocks = Vec::new();
        let mut rest = t.as_str();
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .and_then(|r| r.split_once('}'))
                .ok_or_else(|| Error::Parse(format!("malformed partition {s:?}")))?;
            let block = body
                .0
                .split(',')
                .map(|x| {
                    x.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("malformed partition {s:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(block);
            rest = body.1;
        }
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::from_blocks(n, &blocks)
    }
}

/// Block-size census of a partition: `counts[i - 1]` blocks of size `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionType {
    n: usize,
    counts: Vec<usize>,
}

impl PartitionType {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        let n = counts.len();
        let total: usize = counts.iter().enumerate().map(|(i, c)| (i + 1) * c).sum();
        if total != n || n == 0 {
            return Err(Error::domain(format!(
                "type {counts:?} does not describe a partition of {n}"
            )));
        }
        Ok(PartitionType { n, counts })
    }

    /// From block sizes in any order.
    pub fn from_sizes(n: usize, sizes: &[usize]) -> Result<Self> {
        let mut counts = vec![0usize; n];
        for &s in sizes {
            if s == 0 || s > n {
                return Err(Error::domain(format!("block size {s} outside 1..={n}")));
            }
            counts[s - 1] += 1;
        }
        PartitionType::new(counts)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// `|s|`, the number of blocks.
    pub fn num_blocks(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Block sizes, weakly decreasing.
    pub fn parts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_blocks());
        for size in (1..=self.n).rev() {
            out.extend(std::iter::repeat(size).take(self.counts[size - 1]));
        }
        out
    }

    /// `mu(0_n, pi)` for any `pi` of this type.
    pub fn mobius_zero(&self) -> BigInt {
        let magnitude = self.parts().iter().fold(BigInt::one(), |acc, &s| acc * factorial(s - 1));
        if (self.n - self.num_blocks()) % 2 == 0 {
            magnitude
        } else {
            -magnitude
        }
    }

    /// `s_1! s_2! ... s_n!`
    pub fn multiplicity_factorials(&self) -> BigInt {
        self.counts.iter().fold(BigInt::one(), |acc, &c| acc * factorial(c))
    }

    /// Number of set partitions of `[n]` with this type:
    /// `n! / (prod |V|! * prod s_i!)`.
    pub fn set_partition_count(&self) -> BigInt {
        let blocks = self.parts().iter().fold(BigInt::one(), |acc, &s| acc * factorial(s));
        factorial(self.n) / (blocks * self.multiplicity_factorials())
    }
}

impl fmt::Display for PartitionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", items.join(","))
    }
}

/// Integer partitions of `n` as weakly decreasing part lists, in reverse
/// lexicographic order (`[n]` first, `[1, ..., 1]` last).
pub fn integer_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rem.min(max)).rev() {
            cur.push(part);
            rec(rem - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All partition types of `n`, aligned with [`integer_partitions`].
pub fn all_types(n: usize) -> Vec<PartitionType> {
    integer_partitions(n)
        .iter()
        .map(|parts| PartitionType::from_sizes(n, parts).expect("integer partition"))
        .collect()
}

/// Every element of `P(n)` in lexicographic order of restricted-growth strings.
pub fn enumerate_partitions(n: usize) -> Result<Vec<SetPartition>> {
    limits::check("partition n", n, Limits::current().partitions)?;
    if n == 0 {
        return Err(Error::domain("P(n) needs n >= 1"));
    }
    Ok(PartitionIter::new(n).collect())
}

/// Cursor over `P(n)`; independent per call.
pub struct PartitionIter {
    rgs: Vec<u8>,
    max: Vec<u8>,
    done: bool,
}

impl PartitionIter {
    fn new(n: usize) -> Self {
        PartitionIter {
            rgs: vec![0; n],
            max: vec![0; n],
            done: false,
        }
    }
}

impl Iterator for PartitionIter {
    type Item = SetPartition;

    fn next(&mut self) -> Option<SetPartition> {
        if self.done {
            return None;
        }
        let out = SetPartition {
            rgs: self.rgs.clone(),
        };
        // max[i] = max(rgs[0..i])
        let n = self.rgs.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.rgs[i] <= self.max[i] {
                self.rgs[i] += 1;
                for j in i + 1..n {
                    self.max[j] = self.max[j - 1].max(self.rgs[j - 1]);
                    self.rgs[j] = 0;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Every non-crossing partition of `[n]`, lexicographic in restricted-growth
/// order, generated directly (open blocks form a stack; joining a block
/// closes every block opened after it).
pub fn enumerate_noncrossing(n: usize) -> Result<Vec<SetPartition>> {
    limits::check("non-crossing n", n, Limits::current().noncrossing)?;
    if n == 0 {
        return Err(Error::domain("NC(n) needs n >= 1"));
    }
    fn rec(i: usize, n: usize, rgs: &mut Vec<u8>, stack: &mut Vec<u8>, nb: u8, out: &mut Vec<SetPartition>) {
        if i == n {
            out.push(SetPartition { rgs: rgs.clone() });
            return;
        }
        for pos in 0..stack.len() {
            let b = stack[pos];
            let closed: Vec<u8> = stack.drain(pos + 1..).collect();
            rgs.push(b);
            rec(i + 1, n, rgs, stack, nb, out);
            rgs.pop();
            stack.extend(closed);
        }
        stack.push(nb);
        rgs.push(nb);
        rec(i + 1, n, rgs, stack, nb + 1, out);
        rgs.pop();
        stack.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut Vec::new(), 0, &mut out);
    Ok(out)
}

/// Census of `P(n)` by type: `(type, number of partitions of that type)`,
/// aligned with [`all_types`]. Computed by enumeration and cached.
pub fn type_census(n: usize) -> Result<Arc<Vec<(PartitionType, u64)>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<(PartitionType, u64)>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("census cache").get(&n) {
        return Ok(hit.clone());
    }
    let types = all_types(n);
    let index: HashMap<Vec<usize>, usize> = types
        .iter()
        .enumerate()
        .map(|(i, t)| (t.counts().to_vec(), i))
        .collect();
    let mut counts = vec![0u64; types.len()];
    for p in enumerate_partitions(n)? {
        counts[index[p.partition_type().counts()]] += 1;
    }
    let census = Arc::new(types.into_iter().zip(counts).collect::<Vec<_>>());
    cache.lock().expect("census cache").insert(n, census.clone());
    Ok(census)
}

/// Index of a type within [`all_types`] for the same `n`.
pub(crate) fn type_index(n: usize) -> HashMap<Vec<usize>, usize> {
    all_types(n)
        .iter()
        .enumerate()
        .map(|(i, t)| (t.counts().to_vec(), i))
        .collect()
}
