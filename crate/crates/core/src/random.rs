//! Seeded random values for property checks. The same seed always produces the
//! same values, on every platform.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::index::{gcd_of, MultiIndex, TruncationSet, Window};
use crate::ring::{Elem, Ring, RingDescriptor};
use crate::series::{FactorForm, TruncatedSeries};
use crate::witt::WittVector;

pub type Gen = ChaCha8Rng;

pub fn generator(seed: u64) -> Gen {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Integers in `[-bound, bound]`, rationals with numerator and denominator
/// bounded the same way, uniform residues, and sparse polynomials of degree at
/// most 2 with such coefficients.
pub fn elem(rng: &mut Gen, ring: &Ring, bound: i64) -> Elem {
    match ring.descriptor() {
        RingDescriptor::Integers => ring.from_i64(rng.random_range(-bound..=bound)),
        RingDescriptor::Rationals => {
            let num = rng.random_range(-bound..=bound);
            let den = rng.random_range(1..=bound.max(1));
            ring.from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den))).expect("Q")
        }
        RingDescriptor::Modular(m) => ring.from_i64(rng.random_range(0..*m) as i64),
        RingDescriptor::Polynomial { base, vars } => {
            let mut acc = ring.zero();
            for _ in 0..rng.random_range(0..=3) {
                let mut term = ring.from_int(&BigInt::from(1));
                let c = elem(rng, base, bound);
                term = ring.mul(&term, &scalar_into(ring, base, &c));
                for _ in 0..rng.random_range(0..=2) {
                    let v = ring.var(rng.random_range(0..vars.len())).expect("variable");
                    term = ring.mul(&term, &v);
                }
                acc = ring.add(&acc, &term);
            }
            acc
        }
    }
}

fn scalar_into(ring: &Ring, base: &Ring, c: &Elem) -> Elem {
    match c {
        Elem::Int(x) => ring.from_int(x),
        Elem::Rat(x) => ring.from_rational(x).expect("Q base"),
        Elem::Res(_) => ring.from_int(&base.as_integer(c).expect("residue")),
        Elem::Poly(_) => unreachable!("polynomial rings have scalar bases"),
    }
}

pub fn elems(rng: &mut Gen, ring: &Ring, len: usize, bound: i64) -> Vec<Elem> {
    (0..len).map(|_| elem(rng, ring, bound)).collect()
}

pub fn witt_vector(rng: &mut Gen, ring: &Ring, set: &Arc<TruncationSet>, bound: i64) -> WittVector {
    WittVector::new(ring.clone(), set.clone(), elems(rng, ring, set.len(), bound)).expect("valid payloads")
}

pub fn series(rng: &mut Gen, ring: &Ring, window: &Arc<Window>, bound: i64) -> TruncatedSeries {
    let mut coeffs = elems(rng, ring, window.len(), bound);
    coeffs[0] = ring.one();
    TruncatedSeries::new(ring.clone(), window.clone(), coeffs).expect("valid payloads")
}

pub fn factor_form(rng: &mut Gen, ring: &Ring, window: &Arc<Window>, bound: i64) -> FactorForm {
    FactorForm::new(ring.clone(), window.clone(), elems(rng, ring, window.len() - 1, bound)).expect("valid payloads")
}

/// The division closure of a few random nonzero indices of degree at most `d`.
pub fn truncation_set(rng: &mut Gen, n: usize, d: u32) -> TruncationSet {
    let candidates: Vec<MultiIndex> = (1..=d).flat_map(|k| MultiIndex::of_degree(n, k)).collect();
    let mut members = BTreeSet::new();
    for _ in 0..rng.random_range(1..=4) {
        let i = &candidates[rng.random_range(0..candidates.len())];
        let g = gcd_of(i);
        for k in 1..=g {
            if g.is_multiple_of(k) {
                members.insert(i.div(k).expect("k divides gcd"));
            }
        }
    }
    TruncationSet::new(n, members).expect("division closed by construction")
}
