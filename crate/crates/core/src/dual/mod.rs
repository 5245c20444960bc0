//! The graded dual of the polynomial Hopf algebra `R[b_I : I != 0]`.
//!
//! The comultiplication is `Δ(b_I) = sum_{0 <= J <= I} b_J ⊗ b_{I-J}` with
//! `b_0 = 1`. Monomials `b_{I_1} ... b_{I_k}` form a basis in every
//! multidegree; [`DualElement`] holds linear combinations of the dual basis
//! `c_{I_1 ... I_k}`, one multidegree at a time. Multiplication of dual
//! elements is dual to `Δ`, computed from an exact expansion of `Δ(m)` for each
//! target monomial `m`.

mod cexpr;
mod fmap;
mod remark;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Result, WittError};
use crate::index::MultiIndex;
use crate::par;
use crate::ring::{Elem, Ring};

pub use cexpr::{c_expand, c_expand_split, express_in_c, subalgebra_rank, CExpression};
pub use fmap::{f_push_b, f_push_big_c, f_push_c, f_push_cexpr, f_push_dual, multinomial, GradedDual};
pub use remark::{remark_report, RemarkReport, RemarkRow};

/// A multiset of nonzero indices, stored largest first. The empty key is the
/// unit monomial `1 = b_0`.
///
/// Keys order by length, then by their factor lists with the larger list
/// first. In multidegree `(1,1,1)` this gives
/// `(1,1,1)`, `(1,1,0)+(0,0,1)`, `(1,0,1)+(0,1,0)`, `(0,1,1)+(1,0,0)`,
/// `(1,0,0)+(0,1,0)+(0,0,1)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MonomialKey(Vec<MultiIndex>);

impl MonomialKey {
    pub fn new(mut factors: Vec<MultiIndex>) -> Result<Self> {
        if let Some(z) = factors.iter().find(|f| f.is_zero()) {
            return Err(WittError::ZeroIndex(z.clone()));
        }
        if let Some(first) = factors.first() {
            let n = first.dim();
            if let Some(bad) = factors.iter().find(|f| f.dim() != n) {
                return Err(WittError::DimensionMismatch { expected: n, got: bad.dim() });
            }
        }
        factors.sort_by(|a, b| b.cmp(a));
        Ok(MonomialKey(factors))
    }

    pub fn unit() -> Self {
        MonomialKey(Vec::new())
    }

    /// `e_1^{m_1} ... e_n^{m_n}`.
    pub fn units_for(m: &MultiIndex) -> Self {
        let n = m.dim();
        let factors = (0..n).flat_map(|i| std::iter::repeat_n(MultiIndex::unit(n, i), m.coords()[i] as usize)).collect();
        MonomialKey::new(factors).expect("unit vectors are nonzero")
    }

    pub fn factors(&self) -> &[MultiIndex] {
        &self.0
    }

    /// Number of factors, counted with multiplicity.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    /// Distinct factors with multiplicities, largest first.
    pub fn grouped(&self) -> Vec<(MultiIndex, usize)> {
        let mut out: Vec<(MultiIndex, usize)> = Vec::new();
        for f in &self.0 {
            match out.last_mut() {
                Some((g, k)) if g == f => *k += 1,
                _ => out.push((f.clone(), 1)),
            }
        }
        out
    }

    pub fn multidegree(&self, n: usize) -> MultiIndex {
        self.0.iter().fold(MultiIndex::zero(n), |acc, f| acc.add(f))
    }

    /// Multiset union, the key of the product of two monomials.
    pub fn union(&self, other: &MonomialKey) -> MonomialKey {
        let mut f = self.0.clone();
        f.extend(other.0.iter().cloned());
        f.sort_by(|a, b| b.cmp(a));
        MonomialKey(f)
    }

    /// Wire form: `(1,1,0)+(0,0,1)`, or `1` for the unit.
    pub fn key(&self) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("+")
    }

    pub fn parse_key(n: usize, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(MonomialKey::unit());
        }
        let factors = s
            .split('+')
            .map(|part| {
                let inner = part
                    .trim()
                    .strip_prefix('(')
                    .and_then(|p| p.strip_suffix(')'))
                    .ok_or_else(|| WittError::parse(format!("bad monomial key {s:?}")))?;
                let idx = MultiIndex::parse_key(inner)?;
                if idx.dim() != n {
                    return Err(WittError::DimensionMismatch { expected: n, got: idx.dim() });
                }
                Ok(idx)
            })
            .collect::<Result<Vec<_>>>()?;
        MonomialKey::new(factors)
    }

    /// Subscript in the notation of the literature: `e_1e_2e_3` when every
    /// factor is a unit vector, `(1,1,0)(0,0,1)` otherwise, and `2,1` in
    /// dimension one.
    pub fn label(&self) -> String {
        if self.0.is_empty() {
            return "0".to_string();
        }
        if self.0[0].dim() == 1 {
            return self.0.iter().map(|f| f.coords()[0].to_string()).collect::<Vec<_>>().join(",");
        }
        if self.0.iter().all(MultiIndex::is_unit) {
            return self.0.iter().map(unit_label).collect();
        }
        self.0.iter().map(|f| f.to_string()).collect()
    }
}

fn unit_label(f: &MultiIndex) -> String {
    let i = f.coords().iter().position(|&c| c == 1).expect("unit vector");
    format!("e_{}", i + 1)
}

impl Ord for MonomialKey {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MonomialKey {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// All multisets of nonzero indices summing to `d`, in key order.
pub fn monomials_of_multidegree(d: &MultiIndex) -> Vec<MonomialKey> {
    fn go(rest: &MultiIndex, bound: Option<&MultiIndex>, acc: &mut Vec<MultiIndex>, out: &mut Vec<MonomialKey>) {
        if rest.is_zero() {
            out.push(MonomialKey(acc.clone()));
            return;
        }
        for part in rest.box_below().into_iter().rev() {
            if part.is_zero() || bound.is_some_and(|b| part > *b) {
                continue;
            }
            let next = rest.checked_sub(&part).expect("part below rest");
            acc.push(part.clone());
            go(&next, Some(&part), acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(d, None, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// One term `coefficient * left ⊗ right` of a coproduct.
pub type Split = (MonomialKey, MonomialKey, BigInt);

type SplitCache = Mutex<HashMap<(MonomialKey, MultiIndex), Arc<Vec<Split>>>>;

fn split_cache() -> &'static SplitCache {
    static CACHE: OnceLock<SplitCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * i)
}

/// The part of `Δ(m)` whose left factor has multidegree `left`, with integer
/// coefficients. Repeated factors of `m` are handled by choosing a multiset
/// of sub-indices per distinct factor and weighting by its multinomial count.
pub fn delta_split(m: &MonomialKey, left: &MultiIndex) -> Arc<Vec<Split>> {
    let cache_key = (m.clone(), left.clone());
    if let Some(hit) = split_cache().lock().expect("split cache poisoned").get(&cache_key) {
        return hit.clone();
    }
    let groups = m.grouped();
    let mut acc: BTreeMap<(MonomialKey, MonomialKey), BigInt> = BTreeMap::new();
    let mut state = SplitState { groups: &groups, left: Vec::new(), right: Vec::new(), acc: &mut acc };
    state.group(0, left.clone(), BigInt::one());
    let out: Vec<Split> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((l, r), c)| (l, r, c)).collect();
    let out = Arc::new(out);
    split_cache().lock().expect("split cache poisoned").insert(cache_key, out.clone());
    out
}

struct SplitState<'a> {
    groups: &'a [(MultiIndex, usize)],
    left: Vec<MultiIndex>,
    right: Vec<MultiIndex>,
    acc: &'a mut BTreeMap<(MonomialKey, MonomialKey), BigInt>,
}

impl SplitState<'_> {
    fn group(&mut self, g: usize, budget: MultiIndex, weight: BigInt) {
        if g == self.groups.len() {
            if budget.is_zero() {
                let l = MonomialKey::new(self.left.clone()).expect("nonzero parts");
                let r = MonomialKey::new(self.right.clone()).expect("nonzero parts");
                *self.acc.entry((l, r)).or_insert_with(BigInt::zero) += weight;
            }
            return;
        }
        let (index, k) = self.groups[g].clone();
        let choices = index.box_below();
        let mut picks = Vec::with_capacity(k);
        self.choose(g, &index, &choices, 0, k, &budget, &mut picks, &weight);
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &mut self,
        g: usize,
        index: &MultiIndex,
        choices: &[MultiIndex],
        from: usize,
        remaining: usize,
        budget: &MultiIndex,
        picks: &mut Vec<usize>,
        weight: &BigInt,
    ) {
        if remaining == 0 {
            let mut w = factorial(picks.len());
            let mut run = 1;
            for i in 1..=picks.len() {
                if i < picks.len() && picks[i] == picks[i - 1] {
                    run += 1;
                } else {
                    w /= factorial(run);
                    run = 1;
                }
            }
            let (left_len, right_len) = (self.left.len(), self.right.len());
            for &p in picks.iter() {
                let j = &choices[p];
                if !j.is_zero() {
                    self.left.push(j.clone());
                }
                let rest = index.checked_sub(j).expect("choice below index");
                if !rest.is_zero() {
                    self.right.push(rest);
                }
            }
            self.group(g + 1, budget.clone(), weight * w);
            self.left.truncate(left_len);
            self.right.truncate(right_len);
            return;
        }
        for p in from..choices.len() {
            let Some(next) = budget.checked_sub(&choices[p]) else { continue };
            picks.push(p);
            self.choose(g, index, choices, p, remaining - 1, &next, picks, weight);
            picks.pop();
        }
    }
}

/// A linear combination of dual-basis elements in one multidegree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DualElement {
    ring: Ring,
    d: MultiIndex,
    terms: BTreeMap<MonomialKey, Elem>,
}

impl DualElement {
    pub fn new(ring: Ring, d: MultiIndex, terms: BTreeMap<MonomialKey, Elem>) -> Result<Self> {
        let n = d.dim();
        for (k, c) in &terms {
            if k.factors().iter().any(|f| f.dim() != n) {
                return Err(WittError::DimensionMismatch { expected: n, got: k.factors()[0].dim() });
            }
            if k.multidegree(n) != d {
                return Err(WittError::MixedMultidegree);
            }
            if !ring.contains(c) {
                return Err(WittError::parse(format!("coefficient outside {ring}")));
            }
        }
        let terms = terms.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        Ok(DualElement { ring, d, terms })
    }

    pub fn zero(ring: Ring, d: MultiIndex) -> Self {
        DualElement { ring, d, terms: BTreeMap::new() }
    }

    /// The dual of `1 = b_0`, the unit for [`dual_mul`].
    pub fn unit(ring: Ring, n: usize) -> Self {
        let one = ring.one();
        DualElement { ring, d: MultiIndex::zero(n), terms: BTreeMap::from([(MonomialKey::unit(), one)]) }
    }

    /// The dual-basis element `c_key`.
    pub fn basis(ring: Ring, n: usize, key: MonomialKey) -> Result<Self> {
        let d = key.multidegree(n);
        let one = ring.one();
        DualElement::new(ring, d, BTreeMap::from([(key, one)]))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn multidegree(&self) -> &MultiIndex {
        &self.d
    }

    pub fn dim(&self) -> usize {
        self.d.dim()
    }

    pub fn terms(&self) -> &BTreeMap<MonomialKey, Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `<self, m>`.
    pub fn pairing(&self, m: &MonomialKey) -> Elem {
        self.terms.get(m).cloned().unwrap_or_else(|| self.ring.zero())
    }

    fn check(&self, other: &DualElement) -> Result<()> {
        if self.ring != other.ring {
            return Err(WittError::RingMismatch { left: self.ring.to_string(), right: other.ring.to_string() });
        }
        if self.dim() != other.dim() {
            return Err(WittError::DimensionMismatch { expected: self.dim(), got: other.dim() });
        }
        Ok(())
    }

    pub fn add(&self, other: &DualElement) -> Result<DualElement> {
        self.check(other)?;
        if self.d != other.d {
            return Err(WittError::MixedMultidegree);
        }
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let e = terms.entry(k.clone()).or_insert_with(|| self.ring.zero());
            *e = self.ring.add(e, c);
        }
        terms.retain(|_, c| !self.ring.is_zero(c));
        Ok(DualElement { ring: self.ring.clone(), d: self.d.clone(), terms })
    }

    pub fn scale(&self, s: &Elem) -> DualElement {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), self.ring.mul(c, s)))
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        DualElement { ring: self.ring.clone(), d: self.d.clone(), terms }
    }

    /// Product in the graded dual.
    pub fn mul(&self, other: &DualElement) -> Result<DualElement> {
        dual_mul(self, other)
    }
}

/// `<x y, m> = sum over Δ(m) of <x, left> <y, right>`, for every monomial `m`
/// of multidegree `D_1 + D_2`. Target monomials are independent and are
/// evaluated in parallel.
pub fn dual_mul(x: &DualElement, y: &DualElement) -> Result<DualElement> {
    x.check(y)?;
    let ring = &x.ring;
    let d = x.d.add(&y.d);
    if x.is_zero() || y.is_zero() {
        return Ok(DualElement::zero(ring.clone(), d));
    }
    let targets = monomials_of_multidegree(&d);
    let values = par::map(&targets, |m| {
        let mut acc = ring.zero();
        for (l, r, c) in delta_split(m, &x.d).iter() {
            if let (Some(a), Some(b)) = (x.terms.get(l), y.terms.get(r)) {
                acc = ring.add(&acc, &ring.mul(&ring.from_int(c), &ring.mul(a, b)));
            }
        }
        acc
    });
    let terms = targets.into_iter().zip(values).filter(|(_, c)| !ring.is_zero(c)).collect();
    Ok(DualElement { ring: ring.clone(), d, terms })
}

/// A homogeneous element of bidegree `(D_1, D_2)` in the tensor square.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TensorElement {
    ring: Ring,
    left: MultiIndex,
    right: MultiIndex,
    terms: BTreeMap<(MonomialKey, MonomialKey), Elem>,
}

impl TensorElement {
    pub fn new(
        ring: Ring,
        left: MultiIndex,
        right: MultiIndex,
        terms: BTreeMap<(MonomialKey, MonomialKey), Elem>,
    ) -> Result<Self> {
        let n = left.dim();
        for ((l, r), c) in &terms {
            if l.multidegree(n) != left || r.multidegree(n) != right {
                return Err(WittError::MixedMultidegree);
            }
            if !ring.contains(c) {
                return Err(WittError::parse(format!("coefficient outside {ring}")));
            }
        }
        let terms = terms.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        Ok(TensorElement { ring, left, right, terms })
    }

    /// `a ⊗ b`.
    pub fn product(a: &DualElement, b: &DualElement) -> Result<Self> {
        a.check(b)?;
        let ring = a.ring.clone();
        let mut terms = BTreeMap::new();
        for (l, x) in &a.terms {
            for (r, y) in &b.terms {
                terms.insert((l.clone(), r.clone()), ring.mul(x, y));
            }
        }
        TensorElement::new(ring, a.d.clone(), b.d.clone(), terms)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn left(&self) -> &MultiIndex {
        &self.left
    }

    pub fn right(&self) -> &MultiIndex {
        &self.right
    }

    pub fn terms(&self) -> &BTreeMap<(MonomialKey, MonomialKey), Elem> {
        &self.terms
    }
}

/// The `(D_1, D_2)` component of `Δx`: `<Δx, m ⊗ m'> = <x, m m'>`.
pub fn dual_comul(x: &DualElement, left: &MultiIndex) -> Result<TensorElement> {
    let Some(right) = x.d.checked_sub(left) else {
        return Err(WittError::BadSplit { split: left.clone(), total: x.d.clone() });
    };
    let ring = &x.ring;
    let mut terms = BTreeMap::new();
    for l in monomials_of_multidegree(left) {
        for r in monomials_of_multidegree(&right) {
            let c = x.pairing(&l.union(&r));
            if !ring.is_zero(&c) {
                terms.insert((l.clone(), r), c);
            }
        }
    }
    Ok(TensorElement { ring: ring.clone(), left: left.clone(), right, terms })
}

/// `C_M = c_{e_1^{m_1} ... e_n^{m_n}}`.
pub fn c_of(ring: &Ring, m: &MultiIndex) -> Result<DualElement> {
    if m.is_zero() {
        return Err(WittError::ZeroIndex(m.clone()));
    }
    DualElement::basis(ring.clone(), m.dim(), MonomialKey::units_for(m))
}
