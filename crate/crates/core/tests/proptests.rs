use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use witt_core::dual::{dual_mul, monomials_of_multidegree, DualElement};
use witt_core::{Elem, MultiIndex, Op, Ring, TruncatedSeries, TruncationSet, Window, WittVector};

fn ring_of(spec: &str) -> Ring {
    Ring::parse(spec).unwrap()
}

fn rings() -> impl Strategy<Value = Ring> {
    prop::sample::select(vec!["Z", "Q", "Z/2", "Z/4", "Z/6", "Z/12"]).prop_map(ring_of)
}

fn elems(ring: &Ring, xs: &[i64]) -> Vec<Elem> {
    xs.iter().map(|&x| ring.from_i64(x)).collect()
}

/// A window together with its dimension, from a small fixed menu.
fn windows() -> impl Strategy<Value = Arc<Window>> {
    (1usize..=3, 1u32..=3, any::<bool>()).prop_map(|(n, d, boxed)| {
        if boxed {
            let bound: Vec<u32> = (0..n).map(|i| 1 + (d + i as u32) % 2).collect();
            Window::boxed(&MultiIndex::new(bound)).unwrap()
        } else {
            Window::degree(n, d).unwrap()
        }
    })
}

fn set_of(w: &Window) -> Arc<TruncationSet> {
    Arc::new(w.truncation_set())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(r in rings(), a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let [a, b, c] = [a, b, c].map(|x| r.from_i64(x));
        prop_assert_eq!(r.mul(&r.add(&a, &b), &c), r.add(&r.mul(&a, &c), &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert!(r.is_zero(&r.sub(&a, &a)));
    }

    #[test]
    fn ghost_is_a_ring_homomorphism(
        r in rings(),
        w in windows(),
        xs in prop::collection::vec(-9i64..9, 40),
        ys in prop::collection::vec(-9i64..9, 40),
    ) {
        let set = set_of(&w);
        let u = WittVector::new(r.clone(), set.clone(), elems(&r, &xs[..set.len()])).unwrap();
        let v = WittVector::new(r.clone(), set.clone(), elems(&r, &ys[..set.len()])).unwrap();
        prop_assert_eq!(u.add(&v).unwrap().ghost(), u.ghost().add(&v.ghost()).unwrap());
        prop_assert_eq!(u.mul(&v).unwrap().ghost(), u.ghost().mul(&v.ghost()).unwrap());
        prop_assert_eq!(u.neg().unwrap().ghost(), u.ghost().neg());
    }

    #[test]
    fn series_round_trip(
        spec in prop::sample::select(vec!["Z", "Q", "Z/4"]),
        w in windows(),
        xs in prop::collection::vec(-9i64..9, 40),
    ) {
        let r = ring_of(spec);
        let mut coeffs = elems(&r, &xs[..w.len()]);
        coeffs[0] = r.one();
        let f = TruncatedSeries::new(r, w, coeffs).unwrap();
        let a = f.factorize();
        prop_assert_eq!(a.expand(), f.clone());
        prop_assert_eq!(a.expand().factorize(), a);
    }

    #[test]
    fn factorization_is_window_compatible(
        r in rings(),
        n in 1usize..=3,
        xs in prop::collection::vec(-9i64..9, 40),
    ) {
        // Restricting a series to a smaller window and factorizing gives the
        // restriction of the factorization.
        let big = Window::degree(n, 3).unwrap();
        let small = Window::degree(n, 2).unwrap();
        let mut coeffs = elems(&r, &xs[..big.len()]);
        coeffs[0] = r.one();
        let f = TruncatedSeries::new(r.clone(), big.clone(), coeffs).unwrap();
        let restricted: BTreeMap<MultiIndex, Elem> =
            small.members().iter().map(|i| (i.clone(), f.coeff(i).unwrap().clone())).collect();
        let g = TruncatedSeries::from_map(r, small.clone(), restricted).unwrap();
        let (fa, ga) = (f.factorize(), g.factorize());
        for i in small.members().iter().filter(|i| !i.is_zero()) {
            prop_assert_eq!(fa.coord(i), ga.coord(i), "a at {}", i);
        }
    }

    #[test]
    fn decomposition_respects_operations(
        spec in prop::sample::select(vec!["Z/6", "Q", "Z"]),
        d in 1u32..=3,
        xs in prop::collection::vec(-9i64..9, 20),
        ys in prop::collection::vec(-9i64..9, 20),
    ) {
        let r = ring_of(spec);
        let set = set_of(&Window::degree(2, d).unwrap());
        let u = WittVector::new(r.clone(), set.clone(), elems(&r, &xs[..set.len()])).unwrap();
        let v = WittVector::new(r.clone(), set.clone(), elems(&r, &ys[..set.len()])).unwrap();
        let (du, dv) = (u.decompose().unwrap(), v.decompose().unwrap());
        prop_assert_eq!(du.recompose().unwrap(), u.clone());
        prop_assert_eq!(du.op(Op::Mul, Some(&dv)).unwrap().recompose().unwrap(), u.mul(&v).unwrap());
        prop_assert_eq!(du.op(Op::Add, Some(&dv)).unwrap().recompose().unwrap(), u.add(&v).unwrap());
    }

    #[test]
    fn dual_product_is_associative_and_commutative(
        degrees in prop::sample::subsequence(vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 0], vec![1, 0], vec![0, 2]], 3),
        seed in any::<u64>(),
    ) {
        let z = Ring::integers();
        let mut rng = witt_core::random::generator(seed);
        let xs: Vec<DualElement> = degrees
            .iter()
            .map(|d| {
                let d = MultiIndex::new(d.clone());
                let terms = monomials_of_multidegree(&d)
                    .into_iter()
                    .map(|k| (k, witt_core::random::elem(&mut rng, &z, 5)))
                    .collect();
                DualElement::new(z.clone(), d, terms).unwrap()
            })
            .collect();
        let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
        prop_assert_eq!(dual_mul(a, b).unwrap(), dual_mul(b, a).unwrap());
        prop_assert_eq!(
            dual_mul(&dual_mul(a, b).unwrap(), c).unwrap(),
            dual_mul(a, &dual_mul(b, c).unwrap()).unwrap()
        );
    }
}
