//! Witt vectors `W_S(R)` on a finite truncation set `S`.
//!
//! The ghost map sends coordinates `r_J` to `w_I = sum_{kJ = I} gcd(J) r_J^k`.
//! Ring operations are evaluated from integer universal polynomials, so the
//! same code path serves `Z/m` and other non-Q-algebras; ghost transport over
//! `Q` is kept only for building those polynomials and as a test oracle.

mod universal;

use std::collections::BTreeMap;
use std::sync::Arc;

pub use universal::{variable_name, Op, TableCache, TableKey, UniversalPolyTable};

use crate::error::{Result, WittError};
use crate::index::{compress, gcd_of, MultiIndex, TruncationSet, ZeroPattern};
use crate::par;
use crate::ring::{Elem, Ring};

pub(crate) fn ghost_components(ring: &Ring, set: &TruncationSet, coords: &[Elem]) -> Vec<Elem> {
    par::map(set.members(), |index| {
        let mut acc = ring.zero();
        for (k, j) in set.divisor_positions(index) {
            let g = gcd_of(&set.members()[j]) as i64;
            let term = ring.mul_int(&ring.pow(&coords[j], k), g);
            acc = ring.add(&acc, &term);
        }
        acc
    })
}

/// Triangular inversion in graded-lex order: every proper divisor of `I`
/// precedes `I`.
pub(crate) fn unghost_components(ring: &Ring, set: &TruncationSet, ghost: &[Elem]) -> Result<Vec<Elem>> {
    let mut coords: Vec<Elem> = Vec::with_capacity(set.len());
    for (pos, index) in set.members().iter().enumerate() {
        let mut numerator = ghost[pos].clone();
        for (k, j) in set.divisor_positions(index) {
            if k >= 2 {
                let g = gcd_of(&set.members()[j]) as i64;
                let term = ring.mul_int(&ring.pow(&coords[j], k), g);
                numerator = ring.sub(&numerator, &term);
            }
        }
        let divisor = ring.from_i64(gcd_of(index) as i64);
        let r = ring
            .div_exact(&numerator, &divisor)
            .map_err(|_| WittError::NonExactDivision { index: Some(index.clone()) })?;
        coords.push(r);
    }
    Ok(coords)
}

/// Coordinates `{r_I : I in S}` over a ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WittVector {
    ring: Ring,
    set: Arc<TruncationSet>,
    coords: Vec<Elem>,
}

/// Ghost components `{w_I : I in S}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GhostVector {
    ring: Ring,
    set: Arc<TruncationSet>,
    ghost: Vec<Elem>,
}

fn check_payloads(ring: &Ring, set: &TruncationSet, values: &[Elem]) -> Result<()> {
    if values.len() != set.len() {
        return Err(WittError::DimensionMismatch { expected: set.len(), got: values.len() });
    }
    if let Some(bad) = values.iter().find(|v| !ring.contains(v)) {
        return Err(WittError::parse(format!("{bad:?} is not an element of {ring}")));
    }
    Ok(())
}

impl WittVector {
    /// `coords` are listed in the set's graded-lex order.
    pub fn new(ring: Ring, set: Arc<TruncationSet>, coords: Vec<Elem>) -> Result<Self> {
        check_payloads(&ring, &set, &coords)?;
        Ok(WittVector { ring, set, coords })
    }

    pub fn from_map(ring: Ring, set: Arc<TruncationSet>, mut coords: BTreeMap<MultiIndex, Elem>) -> Result<Self> {
        let values = set
            .members()
            .iter()
            .map(|i| coords.remove(i).ok_or_else(|| WittError::parse(format!("missing coordinate {i}"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = coords.keys().next() {
            return Err(WittError::IndexNotInSet { index: extra.clone() });
        }
        Self::new(ring, set, values)
    }

    pub fn zero(ring: Ring, set: Arc<TruncationSet>) -> Self {
        let coords = vec![ring.zero(); set.len()];
        WittVector { ring, set, coords }
    }

    /// The multiplicative identity: the unghost of the all-ones ghost vector,
    /// computed over `Z` and mapped into `ring`.
    pub fn one(ring: Ring, set: Arc<TruncationSet>) -> Result<Self> {
        let z = Ring::integers();
        let ones = vec![z.one(); set.len()];
        let coords = unghost_components(&z, &set, &ones)?;
        let mapped = coords.iter().map(|c| ring.from_int(&z.as_integer(c).expect("integer"))).collect();
        Ok(WittVector { ring, set, coords: mapped })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn set(&self) -> &Arc<TruncationSet> {
        &self.set
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    pub fn coord(&self, index: &MultiIndex) -> Option<&Elem> {
        self.set.position(index).map(|p| &self.coords[p])
    }

    pub fn ghost(&self) -> GhostVector {
        GhostVector {
            ring: self.ring.clone(),
            set: self.set.clone(),
            ghost: ghost_components(&self.ring, &self.set, &self.coords),
        }
    }

    fn check_compatible(&self, other: &WittVector) -> Result<()> {
        if self.ring != other.ring {
            return Err(WittError::RingMismatch { left: self.ring.to_string(), right: other.ring.to_string() });
        }
        if !Arc::ptr_eq(&self.set, &other.set) && *self.set != *other.set {
            return Err(WittError::SetMismatch);
        }
        Ok(())
    }

    /// Apply a ring operation through the shared universal-polynomial cache.
    pub fn op(&self, op: Op, other: Option<&WittVector>) -> Result<WittVector> {
        self.op_with(TableCache::global(), op, other)
    }

    pub fn op_with(&self, cache: &TableCache, op: Op, other: Option<&WittVector>) -> Result<WittVector> {
        if op.is_binary() {
            let other = other.ok_or_else(|| WittError::parse(format!("{op} needs two operands")))?;
            self.check_compatible(other)?;
        }
        let table = cache.get(&self.set, op)?;
        let coords = table.evaluate(&self.ring, &self.coords, other.map(|o| o.coords.as_slice()));
        Ok(WittVector { ring: self.ring.clone(), set: self.set.clone(), coords })
    }

    pub fn add(&self, other: &WittVector) -> Result<WittVector> {
        self.op(Op::Add, Some(other))
    }

    pub fn mul(&self, other: &WittVector) -> Result<WittVector> {
        self.op(Op::Mul, Some(other))
    }

    pub fn neg(&self) -> Result<WittVector> {
        self.op(Op::Neg, None)
    }

    pub fn sub(&self, other: &WittVector) -> Result<WittVector> {
        self.add(&other.neg()?)
    }

    /// Drop the coordinates outside `sub`.
    pub fn restrict(&self, sub: &Arc<TruncationSet>) -> Result<WittVector> {
        if !sub.is_subset_of(&self.set) {
            let index = sub.members().iter().find(|m| !self.set.contains(m)).cloned();
            return Err(index.map_or(WittError::SetMismatch, |index| WittError::IndexNotInSet { index }));
        }
        let coords = sub.members().iter().map(|i| self.coord(i).expect("subset").clone()).collect();
        Ok(WittVector { ring: self.ring.clone(), set: sub.clone(), coords })
    }

    /// Split by zero pattern; each block is re-indexed in dimension `n - |Z|`.
    pub fn decompose(&self) -> Result<Decomposition> {
        let mut parts = BTreeMap::new();
        for (pattern, block) in self.set.partition_by_zero_pattern() {
            let compressed = Arc::new(compress(&block, &pattern)?);
            let coords = block.members().iter().map(|i| self.coord(i).expect("block member").clone()).collect();
            parts.insert(pattern, WittVector { ring: self.ring.clone(), set: compressed, coords });
        }
        Ok(Decomposition { n: self.set.dim(), ring: self.ring.clone(), parts })
    }

    /// Image under the canonical map `Z -> target`; `self` must be over `Z`.
    pub fn change_ring(&self, target: &Ring) -> Result<WittVector> {
        if self.ring != Ring::integers() {
            return Err(WittError::UnsupportedRing {
                ring: self.ring.to_string(),
                operation: "change_ring (source must be Z)".into(),
            });
        }
        let coords = self
            .coords
            .iter()
            .map(|c| target.from_int(&self.ring.as_integer(c).expect("integer payload")))
            .collect();
        Ok(WittVector { ring: target.clone(), set: self.set.clone(), coords })
    }
}

impl GhostVector {
    pub fn new(ring: Ring, set: Arc<TruncationSet>, ghost: Vec<Elem>) -> Result<Self> {
        check_payloads(&ring, &set, &ghost)?;
        Ok(GhostVector { ring, set, ghost })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn set(&self) -> &Arc<TruncationSet> {
        &self.set
    }

    pub fn components(&self) -> &[Elem] {
        &self.ghost
    }

    pub fn component(&self, index: &MultiIndex) -> Option<&Elem> {
        self.set.position(index).map(|p| &self.ghost[p])
    }

    /// Inverse of the ghost map; fails with `NonExactDivision` at the first
    /// index whose coordinate is not in the ring.
    pub fn unghost(&self) -> Result<WittVector> {
        let coords = unghost_components(&self.ring, &self.set, &self.ghost)?;
        Ok(WittVector { ring: self.ring.clone(), set: self.set.clone(), coords })
    }

    fn zip(&self, other: &GhostVector, f: impl Fn(&Elem, &Elem) -> Elem) -> Result<GhostVector> {
        if self.ring != other.ring {
            return Err(WittError::RingMismatch { left: self.ring.to_string(), right: other.ring.to_string() });
        }
        if *self.set != *other.set {
            return Err(WittError::SetMismatch);
        }
        let ghost = self.ghost.iter().zip(&other.ghost).map(|(a, b)| f(a, b)).collect();
        Ok(GhostVector { ring: self.ring.clone(), set: self.set.clone(), ghost })
    }

    pub fn add(&self, other: &GhostVector) -> Result<GhostVector> {
        self.zip(other, |a, b| self.ring.add(a, b))
    }

    pub fn mul(&self, other: &GhostVector) -> Result<GhostVector> {
        self.zip(other, |a, b| self.ring.mul(a, b))
    }

    pub fn neg(&self) -> GhostVector {
        GhostVector {
            ring: self.ring.clone(),
            set: self.set.clone(),
            ghost: self.ghost.iter().map(|a| self.ring.neg(a)).collect(),
        }
    }

    pub fn restrict(&self, sub: &TruncationSet) -> Option<Vec<Elem>> {
        sub.members().iter().map(|i| self.component(i).cloned()).collect()
    }
}

/// `W_S(R) = prod_Z W_{S_Z}(R)`: the blocks of a Witt vector by zero pattern.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Decomposition {
    n: usize,
    ring: Ring,
    parts: BTreeMap<ZeroPattern, WittVector>,
}

impl Decomposition {
    pub fn new(n: usize, ring: Ring, parts: BTreeMap<ZeroPattern, WittVector>) -> Result<Self> {
        for (z, w) in &parts {
            if *w.ring() != ring {
                return Err(WittError::RingMismatch { left: ring.to_string(), right: w.ring().to_string() });
            }
            let expected = n - z.zeros().len();
            if w.set().dim() != expected {
                return Err(WittError::DimensionMismatch { expected, got: w.set().dim() });
            }
            if w.set().members().iter().any(|i| i.coords().contains(&0)) {
                return Err(WittError::parse("compressed blocks must not have zero coordinates"));
            }
        }
        Ok(Decomposition { n, ring, parts })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn parts(&self) -> &BTreeMap<ZeroPattern, WittVector> {
        &self.parts
    }

    /// Apply a ring operation blockwise.
    pub fn op(&self, op: Op, other: Option<&Decomposition>) -> Result<Decomposition> {
        let mut parts = BTreeMap::new();
        for (z, w) in &self.parts {
            let o = match other {
                Some(d) => Some(d.parts.get(z).ok_or(WittError::SetMismatch)?),
                None => None,
            };
            parts.insert(z.clone(), w.op(op, o)?);
        }
        Ok(Decomposition { n: self.n, ring: self.ring.clone(), parts })
    }

    pub fn recompose(&self) -> Result<WittVector> {
        let mut coords = BTreeMap::new();
        for (z, w) in &self.parts {
            for (i, c) in w.set().members().iter().zip(w.coords()) {
                coords.insert(z.expand_index(self.n, i), c.clone());
            }
        }
        let set = Arc::new(TruncationSet::new(self.n, coords.keys().cloned())?);
        WittVector::from_map(self.ring.clone(), set, coords)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::window_degree;

    fn set1(k: u32) -> Arc<TruncationSet> {
        Arc::new(TruncationSet::new(1, (1..=k).map(|i| MultiIndex::new(vec![i]))).unwrap())
    }

    fn ints(ring: &Ring, xs: &[i64]) -> Vec<Elem> {
        xs.iter().map(|&x| ring.from_i64(x)).collect()
    }

    #[test]
    fn ghost_classical() {
        let ring = Ring::parse("Z[a,b]").unwrap();
        let w = WittVector::new(ring.clone(), set1(2), vec![ring.var(0).unwrap(), ring.var(1).unwrap()]).unwrap();
        let g = w.ghost();
        assert_eq!(ring.render(&g.components()[0]), "a");
        assert_eq!(ring.render(&g.components()[1]), "2*b + a^2");
    }

    #[test]
    fn ghost_two_dimensional() {
        let ring = Ring::parse("Z[a,b]").unwrap();
        let set = Arc::new(window_degree(2, 4).unwrap().truncation_set());
        let mut coords = vec![ring.zero(); set.len()];
        coords[set.position(&MultiIndex::from([1, 1])).unwrap()] = ring.var(0).unwrap();
        coords[set.position(&MultiIndex::from([2, 2])).unwrap()] = ring.var(1).unwrap();
        let g = WittVector::new(ring.clone(), set, coords).unwrap().ghost();
        assert_eq!(g.component(&MultiIndex::from([2, 2])).unwrap(), &ring.parse_elem("a^2 + 2*b").unwrap());
        assert_eq!(g.component(&MultiIndex::from([1, 1])).unwrap(), &ring.var(0).unwrap());
        assert!(ring.is_zero(g.component(&MultiIndex::from([2, 0])).unwrap()));
    }

    #[test]
    fn zero_ghost() {
        let set = Arc::new(window_degree(2, 3).unwrap().truncation_set());
        let w = WittVector::zero(Ring::modular(6).unwrap(), set);
        assert!(w.ghost().components().iter().all(|c| *c == Elem::Res(0)));
    }

    #[test]
    fn unghost_examples() {
        let q = Ring::parse("Q[a]").unwrap();
        let a = q.var(0).unwrap();
        let g = GhostVector::new(q.clone(), set1(2), vec![a.clone(), q.pow(&a, 2)]).unwrap();
        assert_eq!(g.unghost().unwrap().coords(), &[a, q.zero()]);

        let z = Ring::integers();
        let g = GhostVector::new(z.clone(), set1(2), ints(&z, &[1, 0])).unwrap();
        assert_eq!(
            g.unghost(),
            Err(WittError::NonExactDivision { index: Some(MultiIndex::new(vec![2])) })
        );
    }

    #[test]
    fn addition_over_z() {
        let z = Ring::integers();
        let u = WittVector::new(z.clone(), set1(2), ints(&z, &[1, 0])).unwrap();
        assert_eq!(u.add(&u).unwrap().coords(), ints(&z, &[2, -1]).as_slice());
    }

    #[test]
    fn identity_constructor() {
        let z = Ring::integers();
        let one = WittVector::one(z.clone(), set1(4)).unwrap();
        assert_eq!(one.coords(), ints(&z, &[1, 0, 0, 0]).as_slice());
        let set = Arc::new(window_degree(2, 4).unwrap().truncation_set());
        let one = WittVector::one(z.clone(), set.clone()).unwrap();
        for (i, c) in set.members().iter().zip(one.coords()) {
            let expected = if gcd_of(i) == 1 { 1 } else { 0 };
            assert_eq!(*c, z.from_i64(expected), "{i}");
        }
    }

    #[test]
    fn mismatched_operands() {
        let z = Ring::integers();
        let u = WittVector::zero(z.clone(), set1(2));
        let v = WittVector::zero(z, set1(3));
        assert_eq!(u.add(&v), Err(WittError::SetMismatch));
        let w = WittVector::zero(Ring::rationals(), set1(2));
        assert!(matches!(u.add(&w), Err(WittError::RingMismatch { .. })));
        assert!(u.op(Op::Mul, None).is_err());
    }

    #[test]
    fn restriction_rejects_foreign_indices() {
        let z = Ring::integers();
        let u = WittVector::zero(z, set1(2));
        let bigger = set1(3);
        assert!(matches!(u.restrict(&bigger), Err(WittError::IndexNotInSet { .. })));
        assert_eq!(u.restrict(&set1(1)).unwrap().coords().len(), 1);
    }

    #[test]
    fn decompose_round_trip() {
        let z6 = Ring::modular(6).unwrap();
        let set = Arc::new(window_degree(2, 3).unwrap().truncation_set());
        let coords = (0..set.len()).map(|i| z6.from_i64(i as i64)).collect();
        let w = WittVector::new(z6, set, coords).unwrap();
        let d = w.decompose().unwrap();
        assert_eq!(d.parts().len(), 3);
        assert_eq!(d.recompose().unwrap(), w);
    }
}
