//! Multi-index combinatorics: truncation sets, windows, divisor pairs and
//! zero-pattern partitions.
//!
//! Every set-valued result is sorted in graded-lex order: total degree first,
//! then lexicographic on the coordinates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;

use crate::error::{Result, WittError};

/// An exponent vector in `Z_{>=0}^n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(coords: Vec<u32>) -> Self {
        assert!(!coords.is_empty(), "multi-index dimension must be at least 1");
        MultiIndex(coords)
    }

    pub fn zero(n: usize) -> Self {
        MultiIndex::new(vec![0; n])
    }

    /// The standard basis vector `e_i` (0-based `i`).
    pub fn unit(n: usize, i: usize) -> Self {
        let mut c = vec![0; n];
        c[i] = 1;
        MultiIndex::new(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference; `None` unless `other <= self`.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn scale(&self, k: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|a| a * k).collect())
    }

    /// Exact division of every coordinate by `k`.
    pub fn div(&self, k: u32) -> Option<MultiIndex> {
        if k == 0 || self.0.iter().any(|a| a % k != 0) {
            return None;
        }
        Some(MultiIndex(self.0.iter().map(|a| a / k).collect()))
    }

    /// True for a standard basis vector.
    pub fn is_unit(&self) -> bool {
        self.degree() == 1
    }

    /// Comma-joined form used as a JSON object key, e.g. `"2,0,4"`.
    pub fn key(&self) -> String {
        self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }

    pub fn parse_key(s: &str) -> Result<MultiIndex> {
        let coords = s
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| WittError::parse(format!("bad multi-index {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        if coords.is_empty() {
            return Err(WittError::parse("empty multi-index"));
        }
        Ok(MultiIndex(coords))
    }

    /// All `J` with `0 <= J <= self`, in graded-lex order.
    pub fn box_below(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &b in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<u32>| {
                    (0..=b).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        let mut v: Vec<MultiIndex> = out.into_iter().map(MultiIndex).collect();
        v.sort();
        v
    }

    /// All indices of dimension `n` and total degree exactly `d`, graded-lex.
    pub fn of_degree(n: usize, d: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == n {
                prefix.push(d);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for c in 0..=d {
                prefix.push(c);
                rec(n, d - c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(c: &[u32]) -> Self {
        MultiIndex::new(c.to_vec())
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(c: [u32; N]) -> Self {
        MultiIndex::new(c.to_vec())
    }
}

/// Greatest common divisor of the nonzero coordinates.
pub fn gcd_nonzero(index: &MultiIndex) -> Result<u32> {
    let g = index.coords().iter().fold(0u32, |g, &c| g.gcd(&c));
    if g == 0 {
        Err(WittError::ZeroIndex(index.clone()))
    } else {
        Ok(g)
    }
}

pub(crate) fn gcd_of(index: &MultiIndex) -> u32 {
    index.coords().iter().fold(0u32, |g, &c| g.gcd(&c))
}

fn divisors(g: u32) -> Vec<u32> {
    (1..=g).filter(|&k| g.is_multiple_of(k)).collect()
}

/// Result of a division-closure check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Closure {
    Closed,
    /// `k * j` is a member while `j` is not.
    Violation { k: u32, j: MultiIndex },
}

impl Closure {
    pub fn holds(&self) -> bool {
        matches!(self, Closure::Closed)
    }
}

/// Checks that `members` is division-closed: `kJ` a member implies `J` a member.
///
/// The witness reported on failure is the smallest member (graded-lex) with a
/// missing divisor, paired with the smallest such `k`.
pub fn is_truncation_set(n: usize, members: &[MultiIndex]) -> Result<Closure> {
    let set: std::collections::HashSet<&MultiIndex> = members.iter().collect();
    let mut sorted: Vec<&MultiIndex> = members.iter().collect();
    sorted.sort();
    for m in sorted {
        if m.dim() != n {
            return Err(WittError::DimensionMismatch { expected: n, got: m.dim() });
        }
        if m.is_zero() {
            return Err(WittError::ZeroIndex(m.clone()));
        }
        for k in divisors(gcd_of(m)).into_iter().skip(1) {
            let j = m.div(k).expect("k divides the gcd");
            if !set.contains(&j) {
                return Ok(Closure::Violation { k, j });
            }
        }
    }
    Ok(Closure::Closed)
}

/// A finite division-closed subset of `Z_{>=0}^n - 0`.
#[derive(Clone)]
pub struct TruncationSet {
    n: usize,
    members: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl TruncationSet {
    pub fn new(n: usize, members: impl IntoIterator<Item = MultiIndex>) -> Result<Self> {
        let mut members: Vec<MultiIndex> = members.into_iter().collect();
        members.sort();
        members.dedup();
        if n == 0 {
            return Err(WittError::parse("dimension must be at least 1"));
        }
        match is_truncation_set(n, &members)? {
            Closure::Closed => {}
            Closure::Violation { k, j } => return Err(WittError::NotTruncationSet { k, j }),
        }
        Ok(Self::from_sorted_unchecked(n, members))
    }

    fn from_sorted_unchecked(n: usize, members: Vec<MultiIndex>) -> Self {
        let position = members.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        TruncationSet { n, members, position }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in graded-lex order.
    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    pub fn position(&self, index: &MultiIndex) -> Option<usize> {
        self.position.get(index).copied()
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        self.position.contains_key(index)
    }

    pub fn is_subset_of(&self, other: &TruncationSet) -> bool {
        self.n == other.n && self.members.iter().all(|m| other.contains(m))
    }

    /// Pairs `(k, J)` with `kJ = index` and `J` in the set, ordered by increasing `k`.
    pub fn divisor_pairs(&self, index: &MultiIndex) -> Result<Vec<(u32, MultiIndex)>> {
        if !self.contains(index) {
            return Err(WittError::IndexNotInSet { index: index.clone() });
        }
        Ok(self.divisor_pairs_unchecked(index))
    }

    pub(crate) fn divisor_pairs_unchecked(&self, index: &MultiIndex) -> Vec<(u32, MultiIndex)> {
        divisors(gcd_of(index))
            .into_iter()
            .filter_map(|k| index.div(k).filter(|j| self.contains(j)).map(|j| (k, j)))
            .collect()
    }

    /// Same pairs as [`divisor_pairs`](Self::divisor_pairs) but with `J` given by
    /// its position in the set.
    pub(crate) fn divisor_positions(&self, index: &MultiIndex) -> Vec<(u32, usize)> {
        self.divisor_pairs_unchecked(index)
            .into_iter()
            .map(|(k, j)| (k, self.position[&j]))
            .collect()
    }

    /// The blocks `S_Z`, keyed by zero pattern. Empty blocks are omitted.
    pub fn partition_by_zero_pattern(&self) -> BTreeMap<ZeroPattern, TruncationSet> {
        let mut blocks: BTreeMap<ZeroPattern, Vec<MultiIndex>> = BTreeMap::new();
        for m in &self.members {
            blocks.entry(ZeroPattern::of(m)).or_default().push(m.clone());
        }
        blocks
            .into_iter()
            .map(|(z, ms)| (z, TruncationSet::from_sorted_unchecked(self.n, ms)))
            .collect()
    }
}

impl PartialEq for TruncationSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.members == other.members
    }
}

impl Eq for TruncationSet {}

impl fmt::Debug for TruncationSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.members).finish()
    }
}

/// The set of coordinates (0-based) at which every index of a block vanishes.
/// Always a proper subset of `{0, ..., n-1}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ZeroPattern(Vec<usize>);

impl ZeroPattern {
    pub fn new(n: usize, mut zeros: Vec<usize>) -> Result<Self> {
        zeros.sort_unstable();
        zeros.dedup();
        if zeros.len() >= n || zeros.iter().any(|&z| z >= n) {
            return Err(WittError::parse(format!("zero pattern {zeros:?} is not a proper subset of 0..{n}")));
        }
        Ok(ZeroPattern(zeros))
    }

    pub fn of(index: &MultiIndex) -> Self {
        ZeroPattern(
            index
                .coords()
                .iter()
                .enumerate()
                .filter_map(|(i, &c)| (c == 0).then_some(i))
                .collect(),
        )
    }

    pub fn zeros(&self) -> &[usize] {
        &self.0
    }

    /// Delete the coordinates in the pattern.
    pub fn compress_index(&self, index: &MultiIndex) -> MultiIndex {
        MultiIndex::new(
            index
                .coords()
                .iter()
                .enumerate()
                .filter_map(|(i, &c)| (!self.0.contains(&i)).then_some(c))
                .collect(),
        )
    }

    /// Re-insert zeros at the pattern's coordinates.
    pub fn expand_index(&self, n: usize, compressed: &MultiIndex) -> MultiIndex {
        let mut it = compressed.coords().iter();
        MultiIndex::new(
            (0..n)
                .map(|i| if self.0.contains(&i) { 0 } else { *it.next().expect("dimension") })
                .collect(),
        )
    }

    /// Human form with 1-based coordinates, e.g. `[1,3]`.
    pub fn label(&self) -> String {
        format!("[{}]", self.0.iter().map(|z| (z + 1).to_string()).collect::<Vec<_>>().join(","))
    }

    pub fn parse_label(n: usize, s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|t| t.strip_suffix(']'))
            .ok_or_else(|| WittError::parse(format!("bad zero pattern {s:?}")))?;
        let zeros = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|t| match t.trim().parse::<usize>() {
                    Ok(z) if z >= 1 => Ok(z - 1),
                    _ => Err(WittError::parse(format!("bad zero pattern {s:?}"))),
                })
                .collect::<Result<Vec<_>>>()?
        };
        ZeroPattern::new(n, zeros)
    }
}

/// Delete the coordinates in `pattern` from every member of `block`.
///
/// `block` must consist of indices with exactly that zero pattern; the image is
/// a truncation set of dimension `n - |Z|` with no zero coordinates.
pub fn compress(block: &TruncationSet, pattern: &ZeroPattern) -> Result<TruncationSet> {
    if let Some(bad) = block.members().iter().find(|m| ZeroPattern::of(m) != *pattern) {
        return Err(WittError::parse(format!("{bad} does not have zero pattern {}", pattern.label())));
    }
    let m = block.dim() - pattern.zeros().len();
    TruncationSet::new(m, block.members().iter().map(|i| pattern.compress_index(i)))
}

/// Shape of a window, kept for the JSON wire format.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WindowShape {
    Degree(u32),
    Box(MultiIndex),
    Explicit,
}

/// A finite, componentwise downward-closed set of exponents containing zero.
#[derive(Clone)]
pub struct Window {
    n: usize,
    shape: WindowShape,
    members: Vec<MultiIndex>,
    position: HashMap<MultiIndex, usize>,
}

impl Window {
    /// `{I : I <= bound}`.
    pub fn boxed(bound: &MultiIndex) -> Result<Arc<Window>> {
        if bound.is_zero() {
            return Err(WittError::ZeroIndex(bound.clone()));
        }
        Ok(Arc::new(Self::from_sorted(bound.dim(), WindowShape::Box(bound.clone()), bound.box_below())))
    }

    /// `{I : |I| <= d}`.
    pub fn degree(n: usize, d: u32) -> Result<Arc<Window>> {
        if n == 0 || d == 0 {
            return Err(WittError::parse("window_degree needs n >= 1 and d >= 1"));
        }
        let members = (0..=d).flat_map(|k| MultiIndex::of_degree(n, k)).collect();
        Ok(Arc::new(Self::from_sorted(n, WindowShape::Degree(d), members)))
    }

    /// Any downward-closed set; zero is added if missing.
    pub fn explicit(n: usize, members: impl IntoIterator<Item = MultiIndex>) -> Result<Arc<Window>> {
        let mut members: Vec<MultiIndex> = members.into_iter().collect();
        members.push(MultiIndex::zero(n));
        members.sort();
        members.dedup();
        let set: std::collections::HashSet<&MultiIndex> = members.iter().collect();
        for m in &members {
            if m.dim() != n {
                return Err(WittError::DimensionMismatch { expected: n, got: m.dim() });
            }
            for (i, &c) in m.coords().iter().enumerate() {
                if c > 0 {
                    let mut below = m.coords().to_vec();
                    below[i] -= 1;
                    if !set.contains(&MultiIndex::new(below.clone())) {
                        return Err(WittError::NotWindow(format!(
                            "{m} is a member but {} is not",
                            MultiIndex::new(below)
                        )));
                    }
                }
            }
        }
        Ok(Arc::new(Self::from_sorted(n, WindowShape::Explicit, members)))
    }

    /// The window `S ∪ {0}`, provided that set is downward closed.
    pub fn from_truncation_set(set: &TruncationSet) -> Result<Arc<Window>> {
        Self::explicit(set.dim(), set.members().iter().cloned())
    }

    fn from_sorted(n: usize, shape: WindowShape, members: Vec<MultiIndex>) -> Window {
        let position = members.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Window { n, shape, members, position }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &WindowShape {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in graded-lex order; the first is always the zero index.
    pub fn members(&self) -> &[MultiIndex] {
        &self.members
    }

    pub fn position(&self, index: &MultiIndex) -> Option<usize> {
        self.position.get(index).copied()
    }

    pub fn contains(&self, index: &MultiIndex) -> bool {
        self.position.contains_key(index)
    }

    pub fn max_degree(&self) -> u32 {
        self.members.last().map(MultiIndex::degree).unwrap_or(0)
    }

    /// `W - {0}`, which is always division-closed.
    pub fn truncation_set(&self) -> TruncationSet {
        TruncationSet::from_sorted_unchecked(self.n, self.members[1..].to_vec())
    }
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.members == other.members
    }
}

impl Eq for Window {}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Window").field("n", &self.n).field("shape", &self.shape).finish()
    }
}

/// `window_box(B)` as a free function.
pub fn window_box(bound: &MultiIndex) -> Result<Arc<Window>> {
    Window::boxed(bound)
}

/// `window_degree(n, d)` as a free function.
pub fn window_degree(n: usize, d: u32) -> Result<Arc<Window>> {
    Window::degree(n, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mi<const N: usize>(c: [u32; N]) -> MultiIndex {
        MultiIndex::from(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd_nonzero(&mi([2, 0, 4])).unwrap(), 2);
        assert_eq!(gcd_nonzero(&mi([1, 2])).unwrap(), 1);
        assert_eq!(gcd_nonzero(&mi([6, 0, 0])).unwrap(), 6);
        assert!(matches!(gcd_nonzero(&mi([0, 0])), Err(WittError::ZeroIndex(_))));
    }

    #[test]
    fn divisor_pair_examples() {
        let s = TruncationSet::new(2, [mi([1, 1]), mi([2, 2])]).unwrap();
        assert_eq!(s.divisor_pairs(&mi([2, 2])).unwrap(), vec![(1, mi([2, 2])), (2, mi([1, 1]))]);

        let s = TruncationSet::new(2, [mi([1, 2])]).unwrap();
        assert_eq!(s.divisor_pairs(&mi([1, 2])).unwrap(), vec![(1, mi([1, 2]))]);

        let s = TruncationSet::new(2, [mi([1, 0]), mi([2, 0])]).unwrap();
        assert_eq!(s.divisor_pairs(&mi([2, 0])).unwrap(), vec![(1, mi([2, 0])), (2, mi([1, 0]))]);

        assert!(matches!(s.divisor_pairs(&mi([0, 1])), Err(WittError::IndexNotInSet { .. })));
    }

    #[test]
    fn truncation_set_examples() {
        assert!(is_truncation_set(2, &[mi([2, 2]), mi([1, 1])]).unwrap().holds());
        assert_eq!(
            is_truncation_set(2, &[mi([2, 2])]).unwrap(),
            Closure::Violation { k: 2, j: mi([1, 1]) }
        );
        assert!(is_truncation_set(2, &[mi([1, 0]), mi([0, 1])]).unwrap().holds());
        assert!(matches!(
            TruncationSet::new(2, [mi([2, 2])]),
            Err(WittError::NotTruncationSet { k: 2, .. })
        ));
    }

    #[test]
    fn window_examples() {
        let w = window_box(&mi([1, 1])).unwrap();
        assert_eq!(w.members(), &[mi([0, 0]), mi([0, 1]), mi([1, 0]), mi([1, 1])]);

        let w = window_degree(2, 2).unwrap();
        assert_eq!(
            w.members(),
            &[mi([0, 0]), mi([0, 1]), mi([1, 0]), mi([0, 2]), mi([1, 1]), mi([2, 0])]
        );

        let w = window_degree(1, 3).unwrap();
        assert_eq!(w.members(), &[mi([0]), mi([1]), mi([2]), mi([3])]);
        assert!(window_box(&mi([0, 0])).is_err());
    }

    #[test]
    fn explicit_window_rejects_gaps() {
        assert!(Window::explicit(2, [mi([1, 1])]).is_err());
        assert!(Window::explicit(2, [mi([1, 0]), mi([0, 1]), mi([1, 1])]).is_ok());
    }

    #[test]
    fn zero_pattern_examples() {
        let s = TruncationSet::new(2, [mi([1, 0]), mi([0, 1]), mi([1, 1])]).unwrap();
        let parts = s.partition_by_zero_pattern();
        assert_eq!(parts[&ZeroPattern(vec![1])].members(), &[mi([1, 0])]);
        assert_eq!(parts[&ZeroPattern(vec![0])].members(), &[mi([0, 1])]);
        assert_eq!(parts[&ZeroPattern(vec![])].members(), &[mi([1, 1])]);

        let block = TruncationSet::new(2, [mi([1, 0]), mi([2, 0])]).unwrap();
        let c = compress(&block, &ZeroPattern(vec![1])).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.members(), &[mi([1]), mi([2])]);

        let w = window_degree(2, 2).unwrap().truncation_set();
        let parts = w.partition_by_zero_pattern();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[&ZeroPattern(vec![])].members(), &[mi([1, 1])]);
        assert_eq!(parts[&ZeroPattern(vec![0])].members(), &[mi([0, 1]), mi([0, 2])]);
        assert_eq!(parts[&ZeroPattern(vec![1])].members(), &[mi([1, 0]), mi([2, 0])]);
    }

    #[test]
    fn zero_pattern_labels_round_trip() {
        let z = ZeroPattern::new(3, vec![2, 0]).unwrap();
        assert_eq!(z.label(), "[1,3]");
        assert_eq!(ZeroPattern::parse_label(3, "[1,3]").unwrap(), z);
        assert!(ZeroPattern::new(2, vec![0, 1]).is_err());
    }
}
