//! Weakly decreasing integer sequences and the subtraction combinatorics on
//! them: "subtract one from `j` distinct entries" sets, their anchored
//! variants, and the assembly counts that weight the degeneration formulas.
//!
//! Zero entries are significant here. `(2, 1, 0)` and `(2, 1)` are different
//! objects with different subtraction sets and different assembly counts, so
//! nothing in this module strips zeros. Indices into a partition are 1-based
//! throughout, matching the usual m_1 >= m_2 >= ... notation.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("negative entry {0} is not allowed in a partition")]
    NegativeEntry(i64),
    #[error("entries must be weakly decreasing (violated at position {0})")]
    NotSorted(usize),
    #[error("anchor index {anchor} is out of range 1..={len}")]
    AnchorOutOfRange { anchor: usize, len: usize },
    #[error("anchor index {0} does not end its value block")]
    AnchorNotBlockEnd(usize),
    #[error("value {0} does not occur in the partition")]
    ValueAbsent(u32),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("target sum {target} is smaller than subtracted sum {subtracted}")]
    SumOrder { target: u64, subtracted: u64 },
    #[error("no entry equals the anchored entry minus one")]
    NoAnchorPredecessor,
    #[error("count does not fit in 64 bits")]
    CountOverflow,
}

/// A weakly decreasing sequence of non-negative integers. Zeros allowed
/// and significant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Wraps an already weakly decreasing sequence.
    pub fn new(parts: Vec<u32>) -> Result<Self, PartitionError> {
        for i in 1..parts.len() {
            if parts[i - 1] < parts[i] {
                return Err(PartitionError::NotSorted(i + 1));
            }
        }
        Ok(Self { parts })
    }

    /// Sorts arbitrary signed entries into a partition, rejecting negatives.
    pub fn sort_desc(entries: &[i64]) -> Result<Self, PartitionError> {
        let mut parts = Vec::with_capacity(entries.len());
        for &e in entries {
            if e < 0 {
                return Err(PartitionError::NegativeEntry(e));
            }
            parts.push(e as u32);
        }
        parts.sort_unstable_by(|x, y| y.cmp(x));
        Ok(Self { parts })
    }

    fn from_sorted(parts: Vec<u32>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    /// 1-based entry access; positions past the end read as 0.
    pub fn entry(&self, i: usize) -> u32 {
        assert!(i >= 1, "entry positions are 1-based");
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    pub fn multiplicity(&self, v: u32) -> usize {
        self.parts.iter().filter(|&&p| p == v).count()
    }

    pub fn max_value(&self) -> u32 {
        self.parts.first().copied().unwrap_or(0)
    }

    /// The largest 1-based index whose entry equals `v`, i.e. the end of the
    /// value block of `v`. That position is always a valid anchor.
    pub fn anchor_index(&self, v: u32) -> Result<usize, PartitionError> {
        self.parts
            .iter()
            .rposition(|&p| p == v)
            .map(|p| p + 1)
            .ok_or(PartitionError::ValueAbsent(v))
    }

    /// An anchor must end its value block: either it is the last position or
    /// the next entry is strictly smaller.
    pub fn validate_anchor(&self, i: usize) -> Result<(), PartitionError> {
        if i == 0 || i > self.len() {
            return Err(PartitionError::AnchorOutOfRange {
                anchor: i,
                len: self.len(),
            });
        }
        if i < self.len() && self.parts[i - 1] == self.parts[i] {
            return Err(PartitionError::AnchorNotBlockEnd(i));
        }
        Ok(())
    }

    pub fn is_valid_anchor(&self, i: usize) -> bool {
        self.validate_anchor(i).is_ok()
    }

    /// All valid anchors, i.e. the last position of each value block.
    pub fn block_ends(&self) -> Vec<usize> {
        (1..=self.len())
            .filter(|&i| self.is_valid_anchor(i))
            .collect()
    }

    /// Removes the 1-based position `i`; the result stays sorted.
    pub fn without_entry(&self, i: usize) -> Partition {
        assert!(i >= 1 && i <= self.len());
        let mut parts = self.parts.clone();
        parts.remove(i - 1);
        Partition::from_sorted(parts)
    }

    /// Removes one entry equal to `v` (which one is immaterial: equal entries
    /// leave the same multiset behind).
    pub fn remove_one_value(&self, v: u32) -> Result<Partition, PartitionError> {
        let i = self.anchor_index(v)?;
        Ok(self.without_entry(i))
    }

    /// Partitions obtained by subtracting 1 from `j` distinct positive
    /// entries, deduplicated. `j = 0` yields the partition itself.
    pub fn subtractions(&self, j: usize) -> BTreeSet<Partition> {
        let positive: Vec<usize> = (0..self.parts.len())
            .filter(|&p| self.parts[p] > 0)
            .collect();
        let mut out = BTreeSet::new();
        if j > positive.len() {
            return out;
        }
        for_each_combination(positive.len(), j, &mut |chosen| {
            let mut parts = self.parts.clone();
            for &ci in chosen {
                parts[positive[ci]] -= 1;
            }
            parts.sort_unstable_by(|x, y| y.cmp(x));
            out.insert(Partition::from_sorted(parts));
        });
        out
    }

    /// The subtractions of size `j` whose chosen positions include `anchor`.
    /// Empty when the anchored entry is 0.
    pub fn anchored_subtractions(
        &self,
        j: usize,
        anchor: usize,
    ) -> Result<BTreeSet<Partition>, PartitionError> {
        self.validate_anchor(anchor)?;
        let mut out = BTreeSet::new();
        if j == 0 || self.parts[anchor - 1] == 0 {
            return Ok(out);
        }
        let others: Vec<usize> = (0..self.parts.len())
            .filter(|&p| p != anchor - 1 && self.parts[p] > 0)
            .collect();
        if j - 1 > others.len() {
            return Ok(out);
        }
        for_each_combination(others.len(), j - 1, &mut |chosen| {
            let mut parts = self.parts.clone();
            parts[anchor - 1] -= 1;
            for &ci in chosen {
                parts[others[ci]] -= 1;
            }
            parts.sort_unstable_by(|x, y| y.cmp(x));
            out.insert(Partition::from_sorted(parts));
        });
        Ok(out)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = Vec::<u32>::deserialize(deserializer)?;
        Partition::new(parts).map_err(D::Error::custom)
    }
}

/// Visits every k-subset of `0..n` in lexicographic order.
fn for_each_combination(n: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(
        start: usize,
        n: usize,
        left: usize,
        acc: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if left == 0 {
            f(acc);
            return;
        }
        // not enough positions remain
        if start + left > n {
            return;
        }
        for p in start..=(n - left) {
            acc.push(p);
            rec(p + 1, n, left - 1, acc, f);
            acc.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), f);
}

fn binomial(n: u64, k: u64) -> Result<u64, PartitionError> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul(n - i)
            .ok_or(PartitionError::CountOverflow)?;
        // the running product of i+1 consecutive binomial steps divides evenly
        acc /= i + 1;
    }
    Ok(acc)
}

/// Number of ways to raise `lam` to `m` by adding 1 to a set of distinct
/// positions of `lam` (up to reordering, counted per position subset).
///
/// Closed form: scanning values upward, the number of raised entries of each
/// value is forced, leaving an independent binomial choice per value.
pub fn count_assemblies(m: &Partition, lam: &Partition) -> Result<u64, PartitionError> {
    if m.len() != lam.len() {
        return Err(PartitionError::LengthMismatch(m.len(), lam.len()));
    }
    if m.sum() < lam.sum() {
        return Err(PartitionError::SumOrder {
            target: m.sum(),
            subtracted: lam.sum(),
        });
    }
    let vmax = m.max_value().max(lam.max_value());
    let mut carried: u64 = 0; // raised entries arriving from value v-1
    let mut count: u64 = 1;
    for v in 0..=vmax {
        let have = lam.multiplicity(v) as u64;
        let need = m.multiplicity(v) as u64;
        // need = (have - raised) + carried
        let raised = match (have + carried).checked_sub(need) {
            Some(r) if r <= have => r,
            _ => return Ok(0),
        };
        count = count
            .checked_mul(binomial(have, raised)?)
            .ok_or(PartitionError::CountOverflow)?;
        carried = raised;
    }
    // entries raised past the top value would have nowhere to land
    if carried != 0 {
        return Ok(0);
    }
    Ok(count)
}

/// Assembly count for raising `lam` to `m` when the raise at the anchored
/// position is distinguished: the number of entries of `lam` one below the
/// anchored entry, times the assemblies of the rest.
pub fn anchored_assembly_count(
    m: &Partition,
    anchor: usize,
    lam: &Partition,
) -> Result<u64, PartitionError> {
    m.validate_anchor(anchor)?;
    if m.len() != lam.len() {
        return Err(PartitionError::LengthMismatch(m.len(), lam.len()));
    }
    let target = m.entry(anchor);
    if target == 0 {
        return Err(PartitionError::NoAnchorPredecessor);
    }
    let below = target - 1;
    let choices = lam.multiplicity(below) as u64;
    if choices == 0 {
        return Err(PartitionError::NoAnchorPredecessor);
    }
    let m_rest = m.without_entry(anchor);
    let lam_rest = lam.remove_one_value(below)?;
    choices
        .checked_mul(count_assemblies(&m_rest, &lam_rest)?)
        .ok_or(PartitionError::CountOverflow)
}

/// All partitions of `sum` into positive parts, canonically ordered.
pub fn partitions(sum: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::from_sorted(acc.clone()));
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            acc.push(p);
            rec(remaining - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(sum, sum.max(1), &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// All partitions with sum at most `max_sum` and length between 1 and
/// `max_len`, zero-padded variants included (each padding is a distinct
/// object here). This is the enumeration domain for the exhaustive sweeps.
pub fn weight_bounded_partitions(max_sum: u32, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for s in 0..=max_sum {
        for base in partitions(s) {
            if base.len() > max_len {
                continue;
            }
            for len in base.len().max(1)..=max_len {
                let mut parts = base.parts().to_vec();
                parts.resize(len, 0);
                out.push(Partition::from_sorted(parts));
            }
        }
    }
    out.sort();
    out
}
