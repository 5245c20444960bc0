// Brute-force cross-checks for the combinatorial pieces: divisor pairs,
// vector partitions, the dual product and a two-dimensional universal table.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use witt_core::dual::{dual_mul, monomials_of_multidegree, DualElement, MonomialKey};
use witt_core::random;
use witt_core::{Elem, MultiIndex, Op, Ring, TruncationSet, UniversalPolyTable, Window, WittVector};

fn idx(c: &[u32]) -> MultiIndex {
    MultiIndex::new(c.to_vec())
}

fn gcd(i: &MultiIndex) -> u32 {
    i.coords().iter().fold(0, |a, &b| num_integer::gcd(a, b))
}

#[test]
fn divisor_pairs_match_exhaustive_search() {
    let mut rng = random::generator(11);
    for n in 1..=3 {
        for _ in 0..40 {
            let set = random::truncation_set(&mut rng, n, 6);
            for i in set.members() {
                let mut want = Vec::new();
                for k in 1..=i.degree() {
                    for j in set.members() {
                        if j.scale(k) == *i {
                            want.push((k, j.clone()));
                        }
                    }
                }
                assert_eq!(set.divisor_pairs(i).unwrap(), want, "{i} in {set:?}");
            }
        }
    }
}

/// Multisets of nonzero vectors summing to `d`, by unbounded coin change
/// over every nonzero vector in the box below `d`.
fn vector_partitions(d: &MultiIndex) -> u64 {
    let cells = d.box_below();
    let pos: BTreeMap<&MultiIndex, usize> = cells.iter().enumerate().map(|(p, c)| (c, p)).collect();
    let mut ways = vec![0u64; cells.len()];
    ways[pos[&MultiIndex::zero(d.dim())]] = 1;
    let mut by_degree = cells.clone();
    by_degree.sort_by_key(|c| c.degree());
    for coin in cells.iter().filter(|c| !c.is_zero()) {
        for x in &by_degree {
            if let Some(rest) = x.checked_sub(coin) {
                ways[pos[x]] += ways[pos[&rest]];
            }
        }
    }
    ways[pos[d]]
}

#[test]
fn monomial_counts_are_vector_partition_numbers() {
    for d in 1..=8u32 {
        assert_eq!(monomials_of_multidegree(&idx(&[d])).len() as u64, vector_partitions(&idx(&[d])));
    }
    for d in [&[1, 1][..], &[2, 1], &[2, 2], &[3, 2], &[1, 1, 1], &[2, 1, 1], &[2, 2, 1]] {
        let d = idx(d);
        let keys = monomials_of_multidegree(&d);
        assert_eq!(keys.len() as u64, vector_partitions(&d), "at {d}");
        assert!(keys.iter().all(|k| k.multidegree(d.dim()) == d));
        assert!(keys.windows(2).all(|w| w[0] < w[1]), "sorted and distinct at {d}");
    }
    assert_eq!(vector_partitions(&idx(&[1, 1, 1])), 5);
    assert_eq!(vector_partitions(&idx(&[2, 2])), 9);
}

/// `<x y, m>` by expanding `prod_j sum_{0 <= J <= I_j} b_J (x) b_{I_j - J}`
/// one choice tuple at a time.
fn brute_product(x: &DualElement, y: &DualElement, m: &MonomialKey) -> Elem {
    let ring = x.ring();
    let n = x.dim();
    let choices: Vec<Vec<MultiIndex>> = m.factors().iter().map(|i| i.box_below()).collect();
    let mut acc = ring.zero();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut left = Vec::new();
        let mut right = Vec::new();
        for (j, &p) in pick.iter().enumerate() {
            let l = &choices[j][p];
            let r = m.factors()[j].checked_sub(l).expect("below");
            if !l.is_zero() {
                left.push(l.clone());
            }
            if !r.is_zero() {
                right.push(r);
            }
        }
        let (l, r) = (MonomialKey::new(left).unwrap(), MonomialKey::new(right).unwrap());
        if l.multidegree(n) == *x.multidegree() {
            acc = ring.add(&acc, &ring.mul(&x.pairing(&l), &y.pairing(&r)));
        }
        let mut j = 0;
        loop {
            if j == pick.len() {
                return acc;
            }
            pick[j] += 1;
            if pick[j] < choices[j].len() {
                break;
            }
            pick[j] = 0;
            j += 1;
        }
    }
}

fn random_dual(rng: &mut random::Gen, ring: &Ring, d: &MultiIndex) -> DualElement {
    let terms = monomials_of_multidegree(d).into_iter().map(|k| (k, random::elem(rng, ring, 4))).collect();
    DualElement::new(ring.clone(), d.clone(), terms).unwrap()
}

#[test]
fn dual_product_matches_coproduct_expansion() {
    let z = Ring::integers();
    let mut rng = random::generator(12);
    let pairs: &[(&[u32], &[u32])] = &[
        (&[1], &[1]),
        (&[2], &[1]),
        (&[2], &[3]),
        (&[1, 0], &[0, 1]),
        (&[1, 1], &[1, 0]),
        (&[1, 1], &[1, 1]),
        (&[0, 1, 1], &[1, 0, 0]),
        (&[1, 1, 0], &[1, 0, 1]),
    ];
    for (a, b) in pairs {
        let (da, db) = (idx(a), idx(b));
        for _ in 0..5 {
            let x = random_dual(&mut rng, &z, &da);
            let y = random_dual(&mut rng, &z, &db);
            let prod = dual_mul(&x, &y).unwrap();
            for m in monomials_of_multidegree(&da.add(&db)) {
                assert_eq!(prod.pairing(&m), brute_product(&x, &y, &m), "<xy, {m}> at {da} + {db}");
            }
        }
    }
}

/// Ghost components over `Q` from the definition, pair by pair.
fn ghost(members: &[MultiIndex], coords: &[BigRational]) -> Vec<BigRational> {
    members
        .iter()
        .map(|i| {
            let mut w = BigRational::from_integer(0.into());
            for (j, r) in members.iter().zip(coords) {
                for k in 1..=i.degree() {
                    if j.scale(k) == *i {
                        w += BigRational::from_integer(gcd(j).into()) * num_traits::pow(r.clone(), k as usize);
                    }
                }
            }
            w
        })
        .collect()
}

fn as_rational(e: &Elem) -> BigRational {
    match e {
        Elem::Int(i) => BigRational::from_integer(i.clone()),
        Elem::Rat(r) => r.clone(),
        other => panic!("not a number: {other:?}"),
    }
}

#[test]
fn two_dimensional_tables_evaluate_to_ghost_transport() {
    // Evaluating the integer table at integer points must land on the unique
    // vector whose ghost components are the sum or product of the inputs'.
    let z = Ring::integers();
    let mut rng = random::generator(13);
    let set = Arc::new(Window::degree(2, 4).unwrap().truncation_set());
    let members = set.members();
    for op in [Op::Add, Op::Mul] {
        let table = UniversalPolyTable::compute(&set, op).unwrap();
        for _ in 0..20 {
            let u = random::elems(&mut rng, &z, set.len(), 5);
            let v = random::elems(&mut rng, &z, set.len(), 5);
            let out = table.evaluate(&z, &u, Some(&v));
            let gu = ghost(members, &u.iter().map(as_rational).collect::<Vec<_>>());
            let gv = ghost(members, &v.iter().map(as_rational).collect::<Vec<_>>());
            let go = ghost(members, &out.iter().map(as_rational).collect::<Vec<_>>());
            for p in 0..members.len() {
                let want = if op == Op::Add { &gu[p] + &gv[p] } else { &gu[p] * &gv[p] };
                assert_eq!(go[p], want, "{op} at {}", members[p]);
            }
        }
    }
}

#[test]
fn classical_sum_on_one_and_two() {
    let set = Arc::new(TruncationSet::new(1, [idx(&[1]), idx(&[2])]).unwrap());
    let z = Ring::integers();
    let one = WittVector::new(z.clone(), set.clone(), vec![z.one(), z.zero()]).unwrap();
    let two = one.add(&one).unwrap();
    assert_eq!(two.coords(), &[z.from_i64(2), z.from_int(&BigInt::from(-1))]);
}
