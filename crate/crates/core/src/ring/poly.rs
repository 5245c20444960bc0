//! Sparse multivariate polynomials over a scalar base ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{Elem, Ring};
use crate::error::{Result, WittError};

/// A monomial as sorted `(variable, exponent)` pairs with positive exponents.
///
/// Ordering: total degree ascending; within a degree the monomial with the
/// larger exponent on the earliest differing variable comes first. This is a
/// multiplicative monomial order with `1` as its minimum.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(u32, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: u32) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(u32, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_unstable();
        let mut out: Vec<(u32, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((lv, le)) if *lv == v => *le += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: u32) -> u32 {
        self.0
            .binary_search_by_key(&v, |&(var, _)| var)
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            let d = if j < other.0.len() && other.0[j].0 == v {
                j += 1;
                other.0[j - 1].1
            } else {
                0
            };
            if d > e {
                return None;
            }
            if e > d {
                out.push((v, e - d));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    pub fn variables(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let (a, b) = (&self.0, &other.0);
            for (x, y) in a.iter().zip(b) {
                if x.0 != y.0 {
                    // The earlier variable appears only in `x`'s monomial.
                    return x.0.cmp(&y.0);
                }
                if x.1 != y.1 {
                    return y.1.cmp(&x.1);
                }
            }
            b.len().cmp(&a.len())
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial: monomial -> nonzero scalar coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    pub(crate) terms: BTreeMap<Monomial, Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(base: &Ring, c: Elem) -> Self {
        Poly::monomial(base, Monomial::one(), c)
    }

    pub fn monomial(base: &Ring, m: Monomial, c: Elem) -> Self {
        let mut terms = BTreeMap::new();
        if !base.is_zero(&c) {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Elem)> {
        self.terms.iter()
    }

    /// Number of nonzero terms.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> Option<&Elem> {
        self.terms.get(m)
    }

    /// Every variable that occurs with a nonzero coefficient.
    pub fn variables(&self) -> std::collections::BTreeSet<u32> {
        self.terms.keys().flat_map(|m| m.variables().collect::<Vec<_>>()).collect()
    }

    pub(crate) fn add_term(&mut self, base: &Ring, m: Monomial, c: Elem) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !base.is_zero(&c) {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                let s = base.add(e.get(), &c);
                if base.is_zero(&s) {
                    e.remove();
                } else {
                    e.insert(s);
                }
            }
        }
    }

    pub(crate) fn add(&self, base: &Ring, other: &Poly) -> Poly {
        let (mut acc, rest) = if self.len() >= other.len() { (self.clone(), other) } else { (other.clone(), self) };
        for (m, c) in &rest.terms {
            acc.add_term(base, m.clone(), c.clone());
        }
        acc
    }

    pub(crate) fn neg(&self, base: &Ring) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), base.neg(c))).collect() }
    }

    pub(crate) fn mul(&self, base: &Ring, other: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                acc.add_term(base, ma.mul(mb), base.mul(ca, cb));
            }
        }
        acc
    }

    pub(crate) fn scale(&self, base: &Ring, c: &Elem) -> Poly {
        let mut out = Poly::zero();
        for (m, x) in &self.terms {
            let y = base.mul(x, c);
            if !base.is_zero(&y) {
                out.terms.insert(m.clone(), y);
            }
        }
        out
    }

    /// Exact division using the leading term under the monomial order.
    pub(crate) fn div_exact(&self, base: &Ring, divisor: &Poly) -> Result<Poly> {
        let (lm, lc) = divisor.terms.iter().next_back().ok_or(WittError::NonExactDivision { index: None })?;
        if divisor.len() == 1 {
            // Fast path: monomial divisor.
            let mut out = Poly::zero();
            for (m, c) in &self.terms {
                let q = m.checked_div(lm).ok_or(WittError::NonExactDivision { index: None })?;
                out.terms.insert(q, base.div_exact(c, lc)?);
            }
            return Ok(out);
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.terms.iter().next_back() {
            let qm = rm.checked_div(lm).ok_or(WittError::NonExactDivision { index: None })?;
            let qc = base.div_exact(rc, lc)?;
            let step = Poly::monomial(base, qm.clone(), qc.clone());
            rem = rem.add(base, &divisor.mul(base, &step).neg(base));
            quot.add_term(base, qm, qc);
        }
        Ok(quot)
    }

    pub fn map_coefficients(&self, target: &Ring, f: impl Fn(&Elem) -> Elem) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(target, m.clone(), f(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_graded_then_leading_variable_first() {
        // variables: 0 = x_1, 1 = x_2, 2 = y_1, 3 = y_2
        let x2 = Monomial::var(1);
        let y2 = Monomial::var(3);
        let x1y1 = Monomial::from_pairs(vec![(0, 1), (2, 1)]);
        assert!(x2 < y2);
        assert!(y2 < x1y1);
        assert!(Monomial::one() < x2);
        let x0sq = Monomial::from_pairs(vec![(0, 2)]);
        let x0x1 = Monomial::from_pairs(vec![(0, 1), (1, 1)]);
        assert!(x0sq < x0x1);
    }

    #[test]
    fn monomial_division() {
        let a = Monomial::from_pairs(vec![(0, 2), (3, 1)]);
        let b = Monomial::from_pairs(vec![(0, 1)]);
        assert_eq!(a.checked_div(&b), Some(Monomial::from_pairs(vec![(0, 1), (3, 1)])));
        assert_eq!(b.checked_div(&a), None);
        assert_eq!(a.checked_div(&Monomial::var(2)), None);
    }
}
