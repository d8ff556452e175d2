//! The lattice of noncrossing partitions: enumeration, refinement order,
//! Kreweras complementation and the Möbius function.
//!
//! Partitions are kept in canonical form (blocks sorted by minimum, elements
//! ascending), which fixes a deterministic enumeration order and makes the
//! type hashable. The Möbius function comes in two routes: `mobius_brute`
//! runs the defining recursion over an enumerated interval and acts as the
//! ground truth; `mobius_full` is the closed form through the Kreweras
//! complement and signed Catalan factors, checked against the brute route.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num::bigint::BigInt;
use num::{One, Zero};
use thiserror::Error;

use crate::rational::Rat;

/// Largest ground set the enumerator accepts by default. NC(12) already has
/// 208,012 elements; raise via [`enumerate_noncrossing_capped`] if needed.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NcError {
    #[error("ground-set size {n} out of bounds: must be between 1 and {cap}")]
    GroundSetBounds { n: usize, cap: usize },
    #[error("not a partition of 1..={n}: {reason}")]
    NotAPartition { n: usize, reason: String },
    #[error("blocks cross")]
    Crossing,
    #[error("ground sets differ: {left} vs {right}")]
    GroundSetMismatch { left: usize, right: usize },
    #[error("partitions are not comparable: left is not a refinement of right")]
    NotBelow,
    #[error("cannot parse partition text {text:?}: {reason}")]
    BadText { text: String, reason: String },
}

/// A noncrossing partition of `{1, ..., n}` in canonical block form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NoncrossingPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// A value of the Möbius function of a lattice interval. Always an integer;
/// carried as a rational so it can flow into coefficient arithmetic directly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MobiusValue {
    value: Rat,
}

impl MobiusValue {
    fn from_bigint(value: BigInt) -> Self {
        MobiusValue {
            value: Rat::from_bigint(value),
        }
    }

    pub fn value(&self) -> &Rat {
        &self.value
    }

    pub fn into_rat(self) -> Rat {
        self.value
    }
}

impl fmt::Display for MobiusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn validate_partition(n: usize, blocks: &[Vec<usize>]) -> Result<(), NcError> {
    if n == 0 {
        return Err(NcError::NotAPartition {
            n,
            reason: "ground set is empty".to_string(),
        });
    }
    let mut seen = vec![false; n + 1];
    let mut count = 0usize;
    for block in blocks {
        if block.is_empty() {
            return Err(NcError::NotAPartition {
                n,
                reason: "empty block".to_string(),
            });
        }
        for &e in block {
            if e == 0 || e > n {
                return Err(NcError::NotAPartition {
                    n,
                    reason: format!("element {} outside 1..={}", e, n),
                });
            }
            if seen[e] {
                return Err(NcError::NotAPartition {
                    n,
                    reason: format!("element {} appears twice", e),
                });
            }
            seen[e] = true;
            count += 1;
        }
    }
    if count != n {
        return Err(NcError::NotAPartition {
            n,
            reason: format!("covers {} of {} elements", count, n),
        });
    }
    Ok(())
}

/// Single left-to-right sweep: a partition is noncrossing iff every element
/// either opens a new block or continues the innermost open one.
fn crossing_free(n: usize, blocks: &[Vec<usize>]) -> bool {
    let mut owner = vec![usize::MAX; n + 1];
    let mut remaining: Vec<usize> = blocks.iter().map(Vec::len).collect();
    for (bi, block) in blocks.iter().enumerate() {
        for &e in block {
            owner[e] = bi;
        }
    }
    let mut opened = vec![false; blocks.len()];
    let mut stack: Vec<usize> = Vec::new();
    for &b in &owner[1..=n] {
        if stack.last() != Some(&b) {
            if opened[b] {
                return false;
            }
            opened[b] = true;
            stack.push(b);
        }
        remaining[b] -= 1;
        if remaining[b] == 0 {
            stack.pop();
        }
    }
    true
}

/// Checks the crossing predicate on a candidate partition of `{1..n}`.
/// Errors if the blocks do not partition the ground set.
pub fn is_noncrossing(n: usize, blocks: &[Vec<usize>]) -> Result<bool, NcError> {
    validate_partition(n, blocks)?;
    let canonical = canonicalize(blocks);
    Ok(crossing_free(n, &canonical))
}

fn canonicalize(blocks: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    out.sort_unstable();
    out
}

impl NoncrossingPartition {
    /// Validates and canonicalizes. Errors on a non-partition or crossing blocks.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self, NcError> {
        validate_partition(n, &blocks)?;
        let blocks = canonicalize(&blocks);
        if !crossing_free(n, &blocks) {
            return Err(NcError::Crossing);
        }
        Ok(NoncrossingPartition { n, blocks })
    }

    /// `0_n`: all singletons, the minimum of the lattice.
    pub fn singletons(n: usize) -> Result<Self, NcError> {
        if n == 0 {
            return Err(NcError::GroundSetBounds {
                n,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        Ok(NoncrossingPartition {
            n,
            blocks: (1..=n).map(|e| vec![e]).collect(),
        })
    }

    /// `1_n`: one block, the maximum of the lattice.
    pub fn full(n: usize) -> Result<Self, NcError> {
        if n == 0 {
            return Err(NcError::GroundSetBounds {
                n,
                cap: DEFAULT_ENUMERATION_CAP,
            });
        }
        Ok(NoncrossingPartition {
            n,
            blocks: vec![(1..=n).collect()],
        })
    }

    fn from_canonical(n: usize, blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(validate_partition(n, &blocks).is_ok());
        debug_assert!(crossing_free(n, &blocks));
        NoncrossingPartition { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(Vec::len).collect()
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Refinement order: true iff every block of `self` sits inside a block
    /// of `other`.
    pub fn leq(&self, other: &Self) -> Result<bool, NcError> {
        if self.n != other.n {
            return Err(NcError::GroundSetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let mut owner = vec![usize::MAX; self.n + 1];
        for (bi, block) in other.blocks.iter().enumerate() {
            for &e in block {
                owner[e] = bi;
            }
        }
        for block in &self.blocks {
            let target = owner[block[0]];
            if block.iter().any(|&e| owner[e] != target) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Kreweras complement: the maximal partition of the interleaved primed
    /// points whose union with `self` stays noncrossing. Computed through
    /// the cycle identity: with `p` the permutation that walks each block
    /// cyclically in increasing order and `c` the long cycle `(1 2 .. n)`,
    /// the complement is the cycle partition of `p^{-1} ∘ c`.
    pub fn kreweras(&self) -> Self {
        let n = self.n;
        let mut next = vec![0usize; n + 1];
        for block in &self.blocks {
            for i in 0..block.len() {
                next[block[i]] = block[(i + 1) % block.len()];
            }
        }
        let mut prev = vec![0usize; n + 1];
        for e in 1..=n {
            prev[next[e]] = e;
        }
        let mut seen = vec![false; n + 1];
        let mut blocks = Vec::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur);
                cur = prev[cur % n + 1];
            }
            cycle.sort_unstable();
            blocks.push(cycle);
        }
        Self::from_canonical(n, blocks)
    }
}

impl fmt::Display for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (bi, block) in self.blocks.iter().enumerate() {
            if bi > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (i, e) in block.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", e)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for NoncrossingPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for NoncrossingPartition {
    type Err = NcError;

    /// Parses the text form `{{1,3},{2}}`: blocks in braces, comma-separated,
    /// base-10 integers, no whitespace. The ground-set size is the number of
    /// elements listed.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| NcError::BadText {
            text: s.to_string(),
            reason: reason.to_string(),
        };
        let inner = s
            .strip_prefix('{')
            .and_then(|t| t.strip_suffix('}'))
            .ok_or_else(|| bad("missing outer braces"))?;
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix('{')
                .ok_or_else(|| bad("expected '{' starting a block"))?;
            let end = body.find('}').ok_or_else(|| bad("unterminated block"))?;
            let mut block = Vec::new();
            for item in body[..end].split(',') {
                let value: usize = item
                    .parse()
                    .map_err(|_| bad(&format!("bad integer {:?}", item)))?;
                block.push(value);
            }
            blocks.push(block);
            rest = &body[end + 1..];
            if let Some(tail) = rest.strip_prefix(',') {
                if tail.is_empty() {
                    return Err(bad("trailing comma"));
                }
                rest = tail;
            } else if !rest.is_empty() {
                return Err(bad("expected ',' between blocks"));
            }
        }
        if blocks.is_empty() {
            return Err(bad("no blocks"));
        }
        let n = blocks.iter().map(|b| b.len()).sum();
        NoncrossingPartition::new(n, blocks)
    }
}

/// Recursively enumerates the noncrossing partitions of an ordered point
/// list: pick the block of the first point, which walls off independent
/// segments between its consecutive members.
fn nc_blocks_of(points: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let first = points[0];
    let rest = &points[1..];
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << rest.len()) {
        let mut block = vec![first];
        let mut segments: Vec<Vec<usize>> = Vec::new();
        let mut current: Vec<usize> = Vec::new();
        for (i, &p) in rest.iter().enumerate() {
            if mask & (1 << i) != 0 {
                block.push(p);
                segments.push(std::mem::take(&mut current));
            } else {
                current.push(p);
            }
        }
        segments.push(current);
        let mut partials: Vec<Vec<Vec<usize>>> = vec![vec![block]];
        for segment in &segments {
            if segment.is_empty() {
                continue;
            }
            let segment_partitions = nc_blocks_of(segment);
            let mut next = Vec::with_capacity(partials.len() * segment_partitions.len());
            for partial in &partials {
                for seg_blocks in &segment_partitions {
                    let mut combined = partial.clone();
                    combined.extend(seg_blocks.iter().cloned());
                    next.push(combined);
                }
            }
            partials = next;
        }
        out.extend(partials);
    }
    out
}

type NcCache = Mutex<HashMap<usize, Arc<Vec<NoncrossingPartition>>>>;

fn nc_cache() -> &'static NcCache {
    static CACHE: OnceLock<NcCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Cached enumeration of NC(n) in canonical lexicographic order.
pub fn noncrossing_partitions(n: usize) -> Result<Arc<Vec<NoncrossingPartition>>, NcError> {
    noncrossing_partitions_capped(n, DEFAULT_ENUMERATION_CAP)
}

/// Same as [`noncrossing_partitions`] with an explicit cap.
pub fn noncrossing_partitions_capped(
    n: usize,
    cap: usize,
) -> Result<Arc<Vec<NoncrossingPartition>>, NcError> {
    if n == 0 || n > cap {
        return Err(NcError::GroundSetBounds { n, cap });
    }
    let mut cache = nc_cache().lock().expect("noncrossing cache poisoned");
    if let Some(found) = cache.get(&n) {
        return Ok(Arc::clone(found));
    }
    let points: Vec<usize> = (1..=n).collect();
    let mut all = nc_blocks_of(&points);
    all.sort_unstable();
    let list: Vec<NoncrossingPartition> = all
        .into_iter()
        .map(|blocks| NoncrossingPartition::from_canonical(n, blocks))
        .collect();
    let arc = Arc::new(list);
    cache.insert(n, Arc::clone(&arc));
    Ok(arc)
}

/// Owned enumeration of NC(n) in canonical lexicographic order.
pub fn enumerate_noncrossing(n: usize) -> Result<Vec<NoncrossingPartition>, NcError> {
    Ok((*noncrossing_partitions(n)?).clone())
}

/// n-th Catalan number by the convolution recurrence
/// `C_0 = 1, C_{k+1} = sum C_i C_{k-i}`.
pub fn catalan(k: usize) -> BigInt {
    let mut c: Vec<BigInt> = Vec::with_capacity(k + 1);
    c.push(BigInt::one());
    for m in 0..k {
        let mut next = BigInt::zero();
        for i in 0..=m {
            next += &c[i] * &c[m - i];
        }
        c.push(next);
    }
    c[k].clone()
}

/// Möbius function of the interval `[p, q]` by the defining recursion:
/// `mu(p, p) = 1` and the values over `[p, sigma]` sum to zero for every
/// `sigma` strictly above `p`. Serves as the ground-truth oracle.
pub fn mobius_brute(
    p: &NoncrossingPartition,
    q: &NoncrossingPartition,
) -> Result<MobiusValue, NcError> {
    if p.n != q.n {
        return Err(NcError::GroundSetMismatch {
            left: p.n,
            right: q.n,
        });
    }
    if !p.leq(q)? {
        return Err(NcError::NotBelow);
    }
    let all = noncrossing_partitions(p.n)?;
    let mut interval: Vec<&NoncrossingPartition> = Vec::new();
    for sigma in all.iter() {
        if p.leq(sigma)? && sigma.leq(q)? {
            interval.push(sigma);
        }
    }
    // Strict refinement means strictly more blocks, so processing by
    // descending block count visits every interval element after all the
    // elements below it.
    interval.sort_by(|a, b| b.num_blocks().cmp(&a.num_blocks()).then_with(|| a.cmp(b)));
    let mut values: Vec<i128> = vec![0; interval.len()];
    for i in 0..interval.len() {
        if interval[i] == p {
            values[i] = 1;
            continue;
        }
        let mut below_sum: i128 = 0;
        for j in 0..i {
            if interval[j].leq(interval[i])? {
                below_sum += values[j];
            }
        }
        values[i] = -below_sum;
    }
    let pos = interval
        .iter()
        .position(|sigma| *sigma == q)
        .expect("q lies in its own interval");
    Ok(MobiusValue::from_bigint(BigInt::from(values[pos])))
}

/// Möbius function `mu(p, 1_n)` by the closed form: the product over the
/// blocks `W` of the Kreweras complement of `(-1)^(|W|-1) C_(|W|-1)`.
pub fn mobius_full(p: &NoncrossingPartition) -> MobiusValue {
    let complement = p.kreweras();
    let mut value = BigInt::one();
    for block in complement.blocks() {
        let k = block.len() - 1;
        let factor = catalan(k);
        value *= if k % 2 == 0 { factor } else { -factor };
    }
    MobiusValue::from_bigint(value)
}
