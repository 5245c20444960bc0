// Polynomials in the generators C_I and their evaluation in the dual.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{c_of, dual_mul, monomials_of_multidegree, DualElement, MonomialKey};
use crate::error::{Result, WittError};
use crate::index::MultiIndex;
use crate::ring::{rank, solve_linear, Elem, Ring};

/// A polynomial in the formal generators `C_I`. A monomial `C_{I_1} ... C_{I_k}`
/// is stored as the multiset `{I_1, ..., I_k}`, using the same key type and
/// order as dual-basis labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CExpression {
    ring: Ring,
    n: usize,
    terms: BTreeMap<MonomialKey, Elem>,
}

impl CExpression {
    pub fn new(ring: Ring, n: usize, terms: BTreeMap<MonomialKey, Elem>) -> Result<Self> {
        for (k, c) in &terms {
            if let Some(f) = k.factors().iter().find(|f| f.dim() != n) {
                return Err(WittError::DimensionMismatch { expected: n, got: f.dim() });
            }
            if !ring.contains(c) {
                return Err(WittError::parse(format!("coefficient outside {ring}")));
            }
        }
        let terms = terms.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect();
        Ok(CExpression { ring, n, terms })
    }

    pub fn zero(ring: Ring, n: usize) -> Self {
        CExpression { ring, n, terms: BTreeMap::new() }
    }

    /// The single generator `C_I`.
    pub fn generator(ring: Ring, index: &MultiIndex) -> Result<Self> {
        let key = MonomialKey::new(vec![index.clone()])?;
        let one = ring.one();
        Ok(CExpression { ring, n: index.dim(), terms: BTreeMap::from([(key, one)]) })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<MonomialKey, Elem> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &CExpression) -> Result<()> {
        if self.ring != other.ring {
            return Err(WittError::RingMismatch { left: self.ring.to_string(), right: other.ring.to_string() });
        }
        if self.n != other.n {
            return Err(WittError::DimensionMismatch { expected: self.n, got: other.n });
        }
        Ok(())
    }

    fn accumulate(&self, terms: &mut BTreeMap<MonomialKey, Elem>, key: MonomialKey, c: Elem) {
        let e = terms.entry(key).or_insert_with(|| self.ring.zero());
        *e = self.ring.add(e, &c);
    }

    pub fn add(&self, other: &CExpression) -> Result<CExpression> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            self.accumulate(&mut terms, k.clone(), c.clone());
        }
        terms.retain(|_, c| !self.ring.is_zero(c));
        Ok(CExpression { ring: self.ring.clone(), n: self.n, terms })
    }

    pub fn mul(&self, other: &CExpression) -> Result<CExpression> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                self.accumulate(&mut terms, a.union(b), self.ring.mul(x, y));
            }
        }
        terms.retain(|_, c| !self.ring.is_zero(c));
        Ok(CExpression { ring: self.ring.clone(), n: self.n, terms })
    }

    pub fn scale(&self, s: &Elem) -> CExpression {
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (k.clone(), self.ring.mul(c, s)))
            .filter(|(_, c)| !self.ring.is_zero(c))
            .collect();
        CExpression { ring: self.ring.clone(), n: self.n, terms }
    }

    /// Wire form of a monomial: `C(1)^2`, `C(1,1,0)*C(0,0,1)`, or `1`.
    pub fn monomial_key(m: &MonomialKey) -> String {
        if m.is_unit() {
            return "1".to_string();
        }
        m.grouped()
            .iter()
            .map(|(f, k)| if *k == 1 { format!("C{f}") } else { format!("C{f}^{k}") })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn parse_monomial_key(n: usize, s: &str) -> Result<MonomialKey> {
        let s = s.trim();
        if s == "1" {
            return Ok(MonomialKey::unit());
        }
        let bad = || WittError::parse(format!("bad C-monomial {s:?}"));
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim().strip_prefix("C(").ok_or_else(bad)?;
            let (inner, power) = part.split_once(')').ok_or_else(bad)?;
            let k: usize = match power {
                "" => 1,
                p => p.strip_prefix('^').and_then(|p| p.parse().ok()).filter(|&k| k > 0).ok_or_else(bad)?,
            };
            let idx = MultiIndex::parse_key(inner)?;
            if idx.dim() != n {
                return Err(WittError::DimensionMismatch { expected: n, got: idx.dim() });
            }
            factors.extend(std::iter::repeat_n(idx, k));
        }
        MonomialKey::new(factors)
    }

    /// A monomial in the notation of the literature, `C_{e_1}C_{e_2}` or
    /// `C_{(0,1,1)}C_{e_1}`; powers are written out as `^k`.
    pub fn monomial_label(m: &MonomialKey) -> String {
        if m.is_unit() {
            return "1".to_string();
        }
        m.grouped()
            .iter()
            .map(|(f, k)| {
                let sub = if f.dim() == 1 {
                    f.coords()[0].to_string()
                } else if f.is_unit() {
                    format!("e_{}", f.coords().iter().position(|&c| c == 1).expect("unit") + 1)
                } else {
                    f.to_string()
                };
                if *k == 1 {
                    format!("C_{{{sub}}}")
                } else {
                    format!("C_{{{sub}}}^{k}")
                }
            })
            .collect()
    }
}

type ExpansionCache = Mutex<HashMap<(usize, MonomialKey), Arc<DualElement>>>;

fn expansion_cache() -> &'static ExpansionCache {
    static CACHE: OnceLock<ExpansionCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `C_{I_1} ... C_{I_k}` as an integral dual element.
pub(super) fn expand_monomial_z(n: usize, m: &MonomialKey) -> Arc<DualElement> {
    let key = (n, m.clone());
    if let Some(hit) = expansion_cache().lock().expect("expansion cache poisoned").get(&key) {
        return hit.clone();
    }
    let z = Ring::integers();
    let mut acc = DualElement::unit(z.clone(), n);
    for f in m.factors() {
        let c = c_of(&z, f).expect("nonzero factor");
        acc = dual_mul(&acc, &c).expect("same ring");
    }
    let acc = Arc::new(acc);
    expansion_cache().lock().expect("expansion cache poisoned").insert(key, acc.clone());
    acc
}

fn to_ring(ring: &Ring, x: &DualElement) -> DualElement {
    let terms = x
        .terms()
        .iter()
        .map(|(k, c)| (k.clone(), ring.from_int(&x.ring().as_integer(c).expect("integral"))))
        .collect();
    DualElement::new(ring.clone(), x.multidegree().clone(), terms).expect("same shape")
}

pub(super) fn expand_monomial(ring: &Ring, n: usize, m: &MonomialKey) -> DualElement {
    to_ring(ring, &expand_monomial_z(n, m))
}

/// Evaluate each homogeneous part of `e` in the dual.
pub fn c_expand_split(e: &CExpression) -> BTreeMap<MultiIndex, DualElement> {
    let mut out: BTreeMap<MultiIndex, DualElement> = BTreeMap::new();
    for (m, c) in &e.terms {
        let d = m.multidegree(e.n);
        let part = expand_monomial(&e.ring, e.n, m).scale(c);
        let slot = out.entry(d.clone()).or_insert_with(|| DualElement::zero(e.ring.clone(), d));
        *slot = slot.add(&part).expect("same multidegree");
    }
    out.retain(|_, x| !x.is_zero());
    out
}

/// Evaluate a homogeneous `e` in the dual. The zero expression evaluates to
/// zero in multidegree 0.
pub fn c_expand(e: &CExpression) -> Result<DualElement> {
    let degrees: std::collections::BTreeSet<MultiIndex> = e.terms.keys().map(|m| m.multidegree(e.n)).collect();
    if degrees.len() > 1 {
        return Err(WittError::MixedMultidegree);
    }
    let mut parts = c_expand_split(e);
    match degrees.into_iter().next() {
        Some(d) => Ok(parts.remove(&d).unwrap_or_else(|| DualElement::zero(e.ring.clone(), d))),
        None => Ok(DualElement::zero(e.ring.clone(), MultiIndex::zero(e.n))),
    }
}

/// Write the dual-basis element `c_key` as a polynomial in the `C_I`.
///
/// In dimension one this runs the induction on degree and length: for `c` of
/// length `k`, `c - c_{i_1 - 1, ..., i_k - 1} C_k` only involves keys of length
/// greater than `k`, and `c_{1^k} = C_k`. The coefficients are integers, so any
/// ring works. In higher dimensions it solves a linear system over a field;
/// when `c_key` is outside the span the error carries the rank reached.
pub fn express_in_c(ring: &Ring, n: usize, key: &MonomialKey) -> Result<CExpression> {
    if let Some(f) = key.factors().iter().find(|f| f.dim() != n) {
        return Err(WittError::DimensionMismatch { expected: n, got: f.dim() });
    }
    if n == 1 {
        let mut memo = HashMap::new();
        let z = express_n1(key, &mut memo)?;
        let terms = z.iter().map(|(m, c)| (m.clone(), ring.from_int(c))).collect();
        return CExpression::new(ring.clone(), 1, terms);
    }
    if !ring.is_field() {
        return Err(WittError::UnsupportedRing {
            ring: ring.to_string(),
            operation: "express_in_C in dimension > 1 (needs Q or Z/p)".into(),
        });
    }
    let d = key.multidegree(n);
    let basis = monomials_of_multidegree(&d);
    let columns: Vec<DualElement> = basis.iter().map(|m| expand_monomial(ring, n, m)).collect();
    let matrix: Vec<Vec<Elem>> = basis.iter().map(|row| columns.iter().map(|col| col.pairing(row)).collect()).collect();
    let rhs: Vec<Elem> = basis.iter().map(|row| if row == key { ring.one() } else { ring.zero() }).collect();
    match solve_linear(ring, &matrix, &rhs) {
        Ok(lambda) => {
            let terms = basis.into_iter().zip(lambda).collect();
            CExpression::new(ring.clone(), n, terms)
        }
        Err(WittError::NoSolution) => {
            Err(WittError::NotInSubalgebra { rank: rank(ring, &matrix)?, dimension: basis.len() })
        }
        Err(e) => Err(e),
    }
}

type ZExpr = BTreeMap<MonomialKey, BigInt>;

fn zmul(a: &ZExpr, b: &ZExpr) -> ZExpr {
    let mut out = ZExpr::new();
    for (x, p) in a {
        for (y, q) in b {
            *out.entry(x.union(y)).or_insert_with(BigInt::zero) += p * q;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn express_n1(key: &MonomialKey, memo: &mut HashMap<MonomialKey, ZExpr>) -> Result<ZExpr> {
    if let Some(hit) = memo.get(key) {
        return Ok(hit.clone());
    }
    let k = key.len();
    let result = if key.is_unit() {
        ZExpr::from([(MonomialKey::unit(), BigInt::one())])
    } else {
        let c_k = MonomialKey::new(vec![MultiIndex::new(vec![k as u32])])?;
        if key.factors().iter().all(|f| f.coords()[0] == 1) {
            ZExpr::from([(c_k, BigInt::one())])
        } else {
            let lower = MonomialKey::new(
                key.factors().iter().map(|f| f.coords()[0] - 1).filter(|&i| i > 0).map(|i| MultiIndex::new(vec![i])).collect(),
            )?;
            let z = Ring::integers();
            let product = dual_mul(&DualElement::basis(z.clone(), 1, lower.clone())?, &expand_monomial_z(1, &c_k))?;
            let mut result = zmul(&express_n1(&lower, memo)?, &ZExpr::from([(c_k, BigInt::one())]));
            for (m, c) in product.terms() {
                if m == key {
                    if !z.is_one(c) {
                        return Err(WittError::Internal(format!("leading coefficient {c:?} at {key}")));
                    }
                    continue;
                }
                if m.len() <= k {
                    return Err(WittError::Internal(format!("{m} does not lengthen {key}")));
                }
                // c = c_lower C_k - sum_{m} coeff_m c_m
                let coeff = -z.as_integer(c).expect("integral");
                for (mono, x) in express_n1(m, memo)? {
                    *result.entry(mono).or_insert_with(BigInt::zero) += x * &coeff;
                }
            }
            result.retain(|_, c| !c.is_zero());
            result
        }
    };
    memo.insert(key.clone(), result.clone());
    Ok(result)
}

/// Rank of the C-monomial expansions in multidegree `d`, and the dimension of
/// that graded piece.
pub fn subalgebra_rank(ring: &Ring, d: &MultiIndex) -> Result<(usize, usize)> {
    ring.require_field()?;
    let n = d.dim();
    let basis = monomials_of_multidegree(d);
    let matrix: Vec<Vec<Elem>> = basis
        .iter()
        .map(|m| {
            let x = expand_monomial(ring, n, m);
            basis.iter().map(|k| x.pairing(k)).collect()
        })
        .collect();
    Ok((rank(ring, &matrix)?, basis.len()))
}
