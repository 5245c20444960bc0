// The map induced by t -> t_1 + ... + t_n, on generators and on the dual.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;

use super::{CExpression, DualElement, MonomialKey};
use crate::error::{Result, WittError};
use crate::index::MultiIndex;
use crate::ring::{Elem, Ring};

/// `(|I| choose i_1, ..., i_n)`.
pub fn multinomial(index: &MultiIndex) -> BigInt {
    let fact = |k: u32| (1..=k).fold(BigInt::one(), |acc, i| acc * i);
    index.coords().iter().fold(fact(index.degree()), |acc, &i| acc / fact(i))
}

/// Dual elements spread over several multidegrees, one part per multidegree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedDual {
    ring: Ring,
    n: usize,
    parts: BTreeMap<MultiIndex, DualElement>,
}

impl GradedDual {
    pub fn new(ring: Ring, n: usize, parts: impl IntoIterator<Item = DualElement>) -> Result<Self> {
        let mut out = GradedDual { ring, n, parts: BTreeMap::new() };
        for p in parts {
            out.add_part(p)?;
        }
        Ok(out)
    }

    /// Collect `(key, coefficient)` pairs of mixed multidegree.
    pub fn from_terms(ring: Ring, n: usize, terms: impl IntoIterator<Item = (MonomialKey, Elem)>) -> Result<Self> {
        let mut by_degree: BTreeMap<MultiIndex, BTreeMap<MonomialKey, Elem>> = BTreeMap::new();
        for (k, c) in terms {
            let slot = by_degree.entry(k.multidegree(n)).or_default().entry(k).or_insert_with(|| ring.zero());
            *slot = ring.add(slot, &c);
        }
        let parts = by_degree
            .into_iter()
            .map(|(d, t)| DualElement::new(ring.clone(), d, t))
            .collect::<Result<Vec<_>>>()?;
        GradedDual::new(ring, n, parts)
    }

    fn add_part(&mut self, p: DualElement) -> Result<()> {
        if *p.ring() != self.ring {
            return Err(WittError::RingMismatch { left: self.ring.to_string(), right: p.ring().to_string() });
        }
        if p.dim() != self.n {
            return Err(WittError::DimensionMismatch { expected: self.n, got: p.dim() });
        }
        let d = p.multidegree().clone();
        let merged = match self.parts.remove(&d) {
            Some(q) => q.add(&p)?,
            None => p,
        };
        if !merged.is_zero() {
            self.parts.insert(d, merged);
        }
        Ok(())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn parts(&self) -> &BTreeMap<MultiIndex, DualElement> {
        &self.parts
    }

    /// All terms, multidegree by multidegree.
    pub fn terms(&self) -> impl Iterator<Item = (&MonomialKey, &Elem)> {
        self.parts.values().flat_map(|p| p.terms().iter())
    }
}

/// `f(b_I) = multinomial(I) * b_{|I|}`: the coefficient and the target index.
pub fn f_push_b(ring: &Ring, index: &MultiIndex) -> Result<(Elem, MultiIndex)> {
    if index.is_zero() {
        return Err(WittError::ZeroIndex(index.clone()));
    }
    Ok((ring.from_int(&multinomial(index)), MultiIndex::new(vec![index.degree()])))
}

fn check_target(m: u32, n: usize) -> Result<()> {
    if m == 0 {
        return Err(WittError::ZeroIndex(MultiIndex::new(vec![0])));
    }
    if n == 0 {
        return Err(WittError::parse("target dimension must be positive"));
    }
    Ok(())
}

/// `f(C_m) = sum_{|I| = m} C_I`.
pub fn f_push_big_c(ring: &Ring, m: u32, n: usize) -> Result<CExpression> {
    check_target(m, n)?;
    let terms = MultiIndex::of_degree(n, m)
        .into_iter()
        .map(|i| Ok((MonomialKey::new(vec![i])?, ring.one())))
        .collect::<Result<BTreeMap<_, _>>>()?;
    CExpression::new(ring.clone(), n, terms)
}

/// `f(c_m) = sum_{|I| = m} multinomial(I) c_I`.
pub fn f_push_c(ring: &Ring, m: u32, n: usize) -> Result<GradedDual> {
    check_target(m, n)?;
    let x = DualElement::basis(ring.clone(), 1, MonomialKey::new(vec![MultiIndex::new(vec![m])])?)?;
    f_push_dual(&x, n)
}

/// Extend `C_m -> sum_{|I| = m} C_I` multiplicatively to a one-dimensional
/// C-expression.
pub fn f_push_cexpr(e: &CExpression, n: usize) -> Result<CExpression> {
    if e.dim() != 1 {
        return Err(WittError::DimensionMismatch { expected: 1, got: e.dim() });
    }
    let ring = e.ring();
    let mut out = CExpression::zero(ring.clone(), n);
    for (mono, c) in e.terms() {
        let mut term = CExpression::new(ring.clone(), n, BTreeMap::from([(MonomialKey::unit(), c.clone())]))?;
        for f in mono.factors() {
            term = term.mul(&f_push_big_c(ring, f.coords()[0], n)?)?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// The dual map on a one-dimensional dual element:
/// `<f x, b_{I_1} ... b_{I_k}> = prod_j multinomial(I_j) * <x, b_{|I_1|} ... b_{|I_k|}>`.
pub fn f_push_dual(x: &DualElement, n: usize) -> Result<GradedDual> {
    if x.dim() != 1 {
        return Err(WittError::DimensionMismatch { expected: 1, got: x.dim() });
    }
    if n == 0 {
        return Err(WittError::parse("target dimension must be positive"));
    }
    let ring = x.ring();
    let mut terms = Vec::new();
    for (key, c) in x.terms() {
        let groups = key.grouped();
        let mut acc = vec![(Vec::new(), BigInt::one())];
        for (m, k) in groups {
            let choices = MultiIndex::of_degree(n, m.coords()[0]);
            let mut next = Vec::new();
            for (factors, w) in &acc {
                for pick in multisets(choices.len(), k) {
                    let mut f: Vec<MultiIndex> = factors.clone();
                    let mut w = w.clone();
                    for p in pick {
                        w *= multinomial(&choices[p]);
                        f.push(choices[p].clone());
                    }
                    next.push((f, w));
                }
            }
            acc = next;
        }
        for (factors, w) in acc {
            terms.push((MonomialKey::new(factors)?, ring.mul(c, &ring.from_int(&w))));
        }
    }
    GradedDual::from_terms(ring.clone(), n, terms)
}

/// Nondecreasing sequences of length `k` over `0..len`.
fn multisets(len: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(len: usize, k: usize, from: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for p in from..len {
            cur.push(p);
            go(len, k, p, cur, out);
            cur.pop();
        }
    }
    go(len, k, 0, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::super::c_expand_split;
    use super::*;

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&MultiIndex::from([1, 1])), BigInt::from(2));
        assert_eq!(multinomial(&MultiIndex::from([2, 1, 1])), BigInt::from(12));
        assert_eq!(multinomial(&MultiIndex::from([3, 0])), BigInt::from(1));
    }

    #[test]
    fn pushes() {
        let z = Ring::integers();
        assert_eq!(f_push_b(&z, &MultiIndex::from([1, 1])).unwrap(), (z.from_i64(2), MultiIndex::from([2])));

        let c = f_push_big_c(&z, 2, 2).unwrap();
        let keys: Vec<String> = c.terms().keys().map(CExpression::monomial_key).collect();
        assert_eq!(keys, ["C(2,0)", "C(1,1)", "C(0,2)"]);

        let d = f_push_c(&z, 2, 2).unwrap();
        let terms: Vec<(String, String)> = d.terms().map(|(k, c)| (k.key(), z.render(c))).collect();
        assert_eq!(
            terms,
            [("(0,2)".into(), "1".into()), ("(1,1)".into(), "2".into()), ("(2,0)".into(), "1".into())]
        );
    }

    #[test]
    fn pushes_commute_with_expansion() {
        let z = Ring::integers();
        let e = CExpression::new(
            z.clone(),
            1,
            BTreeMap::from([
                (MonomialKey::new(vec![MultiIndex::from([1]), MultiIndex::from([1])]).unwrap(), z.one()),
                (MonomialKey::new(vec![MultiIndex::from([2])]).unwrap(), z.from_i64(-2)),
            ]),
        )
        .unwrap();
        let lhs = GradedDual::new(z.clone(), 2, c_expand_split(&f_push_cexpr(&e, 2).unwrap()).into_values()).unwrap();
        let rhs = GradedDual::new(z.clone(), 2, c_expand_split(&e).into_values().map(|x| f_push_dual(&x, 2).unwrap()).flat_map(|g| g.parts.into_values())).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(rhs, f_push_c(&z, 2, 2).unwrap());
    }
}
