//! Exact coefficient rings: `Z`, `Q`, `Z/m` and sparse polynomial rings over
//! those.
//!
//! A [`Ring`] is a cheap, shareable descriptor that knows how to combine
//! payloads ([`Elem`]). Payloads are always in canonical form, so structural
//! equality is value equality. [`RingElem`] pairs a payload with its ring for
//! callers that want descriptor checks on every operation.

mod linalg;
mod parse;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, WittError};

pub use linalg::{determinant_over_q, rank, solve_linear};
pub use poly::{Monomial, Poly};

/// Which ring a descriptor denotes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Integers,
    Rationals,
    Modular(u64),
    Polynomial { base: Ring, vars: Arc<[String]> },
}

/// Shared handle to a [`RingDescriptor`].
#[derive(Clone, Eq)]
pub struct Ring(Arc<RingDescriptor>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl std::hash::Hash for Ring {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

/// Canonical payload of a ring element.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Elem {
    Int(BigInt),
    Rat(BigRational),
    /// Residue in `[0, m)`.
    Res(u64),
    Poly(Poly),
}

impl Ring {
    pub fn integers() -> Ring {
        Ring(Arc::new(RingDescriptor::Integers))
    }

    pub fn rationals() -> Ring {
        Ring(Arc::new(RingDescriptor::Rationals))
    }

    pub fn modular(m: u64) -> Result<Ring> {
        if m < 2 {
            return Err(WittError::parse(format!("modulus must be at least 2, got {m}")));
        }
        Ok(Ring(Arc::new(RingDescriptor::Modular(m))))
    }

    pub fn polynomial(base: Ring, vars: Vec<String>) -> Result<Ring> {
        if matches!(*base.0, RingDescriptor::Polynomial { .. }) {
            return Err(WittError::parse("polynomial rings nest at most one level"));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v.as_str()) {
                return Err(WittError::parse(format!("duplicate or empty variable name {v:?}")));
            }
        }
        Ok(Ring(Arc::new(RingDescriptor::Polynomial { base, vars: vars.into() })))
    }

    /// Parse `Z | Q | Z/<m> | <base>[v1,...,vk]`.
    pub fn parse(spec: &str) -> Result<Ring> {
        parse::parse_ring(spec)
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0
    }

    /// The scalar base of a polynomial ring, or the ring itself.
    pub fn scalars(&self) -> &Ring {
        match &*self.0 {
            RingDescriptor::Polynomial { base, .. } => base,
            _ => self,
        }
    }

    pub fn variables(&self) -> &[String] {
        match &*self.0 {
            RingDescriptor::Polynomial { vars, .. } => vars,
            _ => &[],
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(*self.0, RingDescriptor::Polynomial { .. })
    }

    pub fn is_field(&self) -> bool {
        match &*self.0 {
            RingDescriptor::Rationals => true,
            RingDescriptor::Modular(m) => is_prime(*m),
            _ => false,
        }
    }

    /// Every positive integer is invertible.
    pub fn is_q_algebra(&self) -> bool {
        matches!(*self.scalars().0, RingDescriptor::Rationals)
    }

    pub fn require_field(&self) -> Result<()> {
        if self.is_field() {
            Ok(())
        } else {
            Err(WittError::NotAField(self.to_string()))
        }
    }

    pub fn require_q_algebra(&self) -> Result<()> {
        if self.is_q_algebra() {
            Ok(())
        } else {
            Err(WittError::NotQAlgebra(self.to_string()))
        }
    }

    pub fn zero(&self) -> Elem {
        match &*self.0 {
            RingDescriptor::Integers => Elem::Int(BigInt::zero()),
            RingDescriptor::Rationals => Elem::Rat(BigRational::zero()),
            RingDescriptor::Modular(_) => Elem::Res(0),
            RingDescriptor::Polynomial { .. } => Elem::Poly(Poly::zero()),
        }
    }

    pub fn one(&self) -> Elem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, x: i64) -> Elem {
        self.from_int(&BigInt::from(x))
    }

    /// Image of an integer under the unique ring map `Z -> R`.
    pub fn from_int(&self, x: &BigInt) -> Elem {
        match &*self.0 {
            RingDescriptor::Integers => Elem::Int(x.clone()),
            RingDescriptor::Rationals => Elem::Rat(BigRational::from_integer(x.clone())),
            RingDescriptor::Modular(m) => Elem::Res(reduce(x, *m)),
            RingDescriptor::Polynomial { base, .. } => Elem::Poly(Poly::constant(base, base.from_int(x))),
        }
    }

    pub fn from_rational(&self, x: &BigRational) -> Result<Elem> {
        match &*self.0 {
            RingDescriptor::Rationals => Ok(Elem::Rat(x.clone())),
            RingDescriptor::Polynomial { base, .. } => {
                Ok(Elem::Poly(Poly::constant(base, base.from_rational(x)?)))
            }
            _ => {
                let num = self.from_int(x.numer());
                let den = self.from_int(x.denom());
                self.div_exact(&num, &den)
            }
        }
    }

    /// The `i`-th variable of a polynomial ring.
    pub fn var(&self, i: usize) -> Result<Elem> {
        match &*self.0 {
            RingDescriptor::Polynomial { base, vars } if i < vars.len() => {
                Ok(Elem::Poly(Poly::monomial(base, Monomial::var(i as u32), base.one())))
            }
            _ => Err(WittError::parse(format!("ring {self} has no variable #{i}"))),
        }
    }

    /// True when `x` is a canonical payload of this ring.
    pub fn contains(&self, x: &Elem) -> bool {
        match (&*self.0, x) {
            (RingDescriptor::Integers, Elem::Int(_)) => true,
            (RingDescriptor::Rationals, Elem::Rat(q)) => q.denom().is_positive(),
            (RingDescriptor::Modular(m), Elem::Res(r)) => r < m,
            (RingDescriptor::Polynomial { base, vars }, Elem::Poly(p)) => p.terms().all(|(mon, c)| {
                !base.is_zero(c) && base.contains(c) && mon.variables().all(|v| (v as usize) < vars.len())
            }),
            _ => false,
        }
    }

    pub fn is_zero(&self, x: &Elem) -> bool {
        match x {
            Elem::Int(a) => a.is_zero(),
            Elem::Rat(a) => a.is_zero(),
            Elem::Res(a) => *a == 0,
            Elem::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_one(&self, x: &Elem) -> bool {
        *x == self.one()
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (_, Elem::Int(x), Elem::Int(y)) => Elem::Int(x + y),
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x + y),
            (RingDescriptor::Modular(m), Elem::Res(x), Elem::Res(y)) => {
                Elem::Res(((*x as u128 + *y as u128) % *m as u128) as u64)
            }
            (RingDescriptor::Polynomial { base, .. }, Elem::Poly(x), Elem::Poly(y)) => Elem::Poly(x.add(base, y)),
            _ => panic!("payloads {a:?} and {b:?} do not belong to {self}"),
        }
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        match (&*self.0, a) {
            (_, Elem::Int(x)) => Elem::Int(-x),
            (_, Elem::Rat(x)) => Elem::Rat(-x),
            (RingDescriptor::Modular(m), Elem::Res(x)) => Elem::Res(if *x == 0 { 0 } else { m - x }),
            (RingDescriptor::Polynomial { base, .. }, Elem::Poly(x)) => Elem::Poly(x.neg(base)),
            _ => panic!("payload {a:?} does not belong to {self}"),
        }
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (&*self.0, a, b) {
            (_, Elem::Int(x), Elem::Int(y)) => Elem::Int(x * y),
            (_, Elem::Rat(x), Elem::Rat(y)) => Elem::Rat(x * y),
            (RingDescriptor::Modular(m), Elem::Res(x), Elem::Res(y)) => {
                Elem::Res(((*x as u128 * *y as u128) % *m as u128) as u64)
            }
            (RingDescriptor::Polynomial { base, .. }, Elem::Poly(x), Elem::Poly(y)) => Elem::Poly(x.mul(base, y)),
            _ => panic!("payloads {a:?} and {b:?} do not belong to {self}"),
        }
    }

    /// `k * a` for an integer `k`.
    pub fn mul_int(&self, a: &Elem, k: i64) -> Elem {
        match (&*self.0, a) {
            (_, Elem::Int(x)) => Elem::Int(x * k),
            (_, Elem::Rat(x)) => Elem::Rat(x * BigInt::from(k)),
            (RingDescriptor::Polynomial { base, .. }, Elem::Poly(p)) => Elem::Poly(p.scale(base, &base.from_i64(k))),
            _ => self.mul(a, &self.from_i64(k)),
        }
    }

    pub fn pow(&self, a: &Elem, mut k: u32) -> Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Elem>) -> Elem {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inverse(&self, a: &Elem) -> Option<Elem> {
        match (&*self.0, a) {
            (RingDescriptor::Integers, Elem::Int(x)) => (x.abs().is_one()).then(|| Elem::Int(x.clone())),
            (RingDescriptor::Rationals, Elem::Rat(x)) => (!x.is_zero()).then(|| Elem::Rat(x.recip())),
            (RingDescriptor::Modular(m), Elem::Res(x)) => mod_inverse(*x, *m).map(Elem::Res),
            (RingDescriptor::Polynomial { base, .. }, Elem::Poly(p)) => {
                let (mon, c) = p.terms().next().filter(|_| p.len() == 1)?;
                if !mon.is_one() {
                    return None;
                }
                base.inverse(c).map(|ci| Elem::Poly(Poly::constant(base, ci)))
            }
            _ => None,
        }
    }

    /// `q` with `q * b = a`.
    ///
    /// Over `Z` and `Z[vars]` this is exact divisibility; over a field `b` must
    /// be nonzero; over `Z/m` `b` must be a unit.
    pub fn div_exact(&self, a: &Elem, b: &Elem) -> Result<Elem> {
        let fail = || WittError::NonExactDivision { index: None };
        match (&*self.0, a, b) {
            (RingDescriptor::Integers, Elem::Int(x), Elem::Int(y)) => {
                if y.is_zero() {
                    return Err(fail());
                }
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Ok(Elem::Int(q))
                } else {
                    Err(fail())
                }
            }
            (RingDescriptor::Rationals, Elem::Rat(x), Elem::Rat(y)) => {
                if y.is_zero() {
                    Err(fail())
                } else {
                    Ok(Elem::Rat(x / y))
                }
            }
            (RingDescriptor::Modular(_), Elem::Res(_), Elem::Res(_)) => {
                let inv = self.inverse(b).ok_or_else(fail)?;
                Ok(self.mul(a, &inv))
            }
            (RingDescriptor::Polynomial { base, .. }, Elem::Poly(x), Elem::Poly(y)) => {
                if y.is_zero() {
                    return Err(fail());
                }
                Ok(Elem::Poly(x.div_exact(base, y)?))
            }
            _ => Err(WittError::RingMismatch { left: format!("{a:?}"), right: self.to_string() }),
        }
    }

    /// Integer value of a payload known to lie in `Z` (or `Z[vars]` constant).
    pub fn as_integer(&self, a: &Elem) -> Option<BigInt> {
        match a {
            Elem::Int(x) => Some(x.clone()),
            Elem::Rat(x) => x.is_integer().then(|| x.to_integer()),
            Elem::Res(x) => Some(BigInt::from(*x)),
            Elem::Poly(p) => match p.len() {
                0 => Some(BigInt::zero()),
                1 => {
                    let (m, c) = p.terms().next()?;
                    if m.is_one() {
                        self.scalars().as_integer(c)
                    } else {
                        None
                    }
                }
                _ => None,
            },
        }
    }

    /// Textual rendering (see the crate README for the grammar).
    pub fn render(&self, a: &Elem) -> String {
        parse::render(self, a)
    }

    pub fn parse_elem(&self, s: &str) -> Result<Elem> {
        parse::parse_elem(self, s)
    }

    /// Sign used when rendering a term: true for strictly negative scalars.
    pub(crate) fn is_negative(&self, a: &Elem) -> bool {
        match a {
            Elem::Int(x) => x.is_negative(),
            Elem::Rat(x) => x.is_negative(),
            _ => false,
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::Rationals => write!(f, "Q"),
            RingDescriptor::Modular(m) => write!(f, "Z/{m}"),
            RingDescriptor::Polynomial { base, vars } => write!(f, "{base}[{}]", vars.join(",")),
        }
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({self})")
    }
}

fn reduce(x: &BigInt, m: u64) -> u64 {
    x.mod_floor(&BigInt::from(m)).to_u64().expect("residue fits")
}

fn mod_inverse(x: u64, m: u64) -> Option<u64> {
    let e = BigInt::from(x).extended_gcd(&BigInt::from(m));
    e.gcd.is_one().then(|| reduce(&e.x, m))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub(crate) fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A payload together with its ring; every binary operation checks that the
/// operands share a descriptor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElem {
    ring: Ring,
    value: Elem,
}

impl RingElem {
    pub fn new(ring: Ring, value: Elem) -> Result<Self> {
        if !ring.contains(&value) {
            return Err(WittError::parse(format!("{value:?} is not a canonical element of {ring}")));
        }
        Ok(RingElem { ring, value })
    }

    pub fn parse(ring: &Ring, s: &str) -> Result<Self> {
        Ok(RingElem { ring: ring.clone(), value: ring.parse_elem(s)? })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Elem {
        &self.value
    }

    fn check(&self, other: &RingElem) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(WittError::RingMismatch { left: self.ring.to_string(), right: other.ring.to_string() })
        }
    }

    pub fn add(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem { ring: self.ring.clone(), value: self.ring.add(&self.value, &other.value) })
    }

    pub fn sub(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem { ring: self.ring.clone(), value: self.ring.sub(&self.value, &other.value) })
    }

    pub fn mul(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem { ring: self.ring.clone(), value: self.ring.mul(&self.value, &other.value) })
    }

    pub fn neg(&self) -> RingElem {
        RingElem { ring: self.ring.clone(), value: self.ring.neg(&self.value) }
    }

    pub fn div_exact(&self, other: &RingElem) -> Result<RingElem> {
        self.check(other)?;
        Ok(RingElem { ring: self.ring.clone(), value: self.ring.div_exact(&self.value, &other.value)? })
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.render(&self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(ring: &str, s: &str) -> RingElem {
        let r = Ring::parse(ring).unwrap();
        RingElem::parse(&r, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(el("Q", "2/3").add(&el("Q", "1/6")).unwrap().to_string(), "5/6");
        assert_eq!(el("Z/4", "3").mul(&el("Z/4", "3")).unwrap().to_string(), "1");
        assert_eq!(el("Z[x,y]", "x + 2*y").neg().to_string(), "-x - 2*y");
    }

    #[test]
    fn mismatched_descriptors_are_rejected() {
        assert!(matches!(el("Z", "1").add(&el("Q", "1")), Err(WittError::RingMismatch { .. })));
        assert!(matches!(el("Z/4", "1").mul(&el("Z/6", "1")), Err(WittError::RingMismatch { .. })));
    }

    #[test]
    fn div_exact_examples() {
        assert_eq!(el("Z", "6").div_exact(&el("Z", "3")).unwrap().to_string(), "2");
        assert_eq!(el("Z[x,y]", "2*x^2*y").div_exact(&el("Z[x,y]", "2")).unwrap().to_string(), "x^2*y");
        assert!(matches!(
            el("Z", "1").div_exact(&el("Z", "2")),
            Err(WittError::NonExactDivision { .. })
        ));
        assert!(el("Z/4", "1").div_exact(&el("Z/4", "2")).is_err());
        assert_eq!(el("Z/5", "1").div_exact(&el("Z/5", "2")).unwrap().to_string(), "3");
        assert!(el("Q", "1").div_exact(&el("Q", "0")).is_err());
    }

    #[test]
    fn polynomial_long_division() {
        let q = el("Z[x,y]", "x^2 - y^2").div_exact(&el("Z[x,y]", "x + y")).unwrap();
        assert_eq!(q.to_string(), "x - y");
        assert!(el("Z[x,y]", "x^2 + y^2").div_exact(&el("Z[x,y]", "x + y")).is_err());
        assert!(el("Z[x]", "x^2 + 1").div_exact(&el("Z[x]", "2*x")).is_err());
    }

    #[test]
    fn field_detection() {
        assert!(Ring::parse("Q").unwrap().is_field());
        assert!(Ring::parse("Z/2").unwrap().is_field());
        assert!(Ring::parse("Z/18446744073709551557").unwrap().is_field());
        assert!(!Ring::parse("Z/4").unwrap().is_field());
        assert!(!Ring::parse("Z").unwrap().is_field());
        assert!(!Ring::parse("Q[x]").unwrap().is_field());
        assert!(Ring::parse("Q[x]").unwrap().is_q_algebra());
        assert!(!Ring::parse("Z/7[x]").unwrap().is_q_algebra());
    }

    #[test]
    fn primes_small() {
        let brute = |n: u64| n >= 2 && (2..n).all(|d| !n.is_multiple_of(d));
        for n in 0..2000 {
            assert_eq!(is_prime(n), brute(n), "n = {n}");
        }
    }

    #[test]
    fn powers_and_units() {
        let r = Ring::parse("Z/12").unwrap();
        assert_eq!(r.pow(&Elem::Res(5), 2), Elem::Res(1));
        assert_eq!(r.inverse(&Elem::Res(5)), Some(Elem::Res(5)));
        assert_eq!(r.inverse(&Elem::Res(4)), None);
        let z = Ring::integers();
        assert_eq!(z.pow(&z.from_i64(-3), 3), z.from_i64(-27));
        assert_eq!(z.pow(&z.from_i64(7), 0), z.one());
    }
}
