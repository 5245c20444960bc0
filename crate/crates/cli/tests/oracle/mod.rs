// Reference computations that share no code with witt-core beyond the data
// types. Everything here is written for clarity, not speed.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use witt_core::{Elem, MultiIndex, Ring};

pub fn q(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn gcd(index: &MultiIndex) -> u32 {
    fn g(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            g(b, a % b)
        }
    }
    index.coords().iter().fold(0, |acc, &c| g(acc, c))
}

/// A ring element as a rational: integers and residues by their
/// representative, rationals as themselves.
pub fn lift(ring: &Ring, e: &Elem) -> BigRational {
    if let Some(i) = ring.as_integer(e) {
        return BigRational::from_integer(i);
    }
    match e {
        Elem::Rat(r) => r.clone(),
        other => panic!("no rational lift for {other:?}"),
    }
}

pub fn lower(ring: &Ring, x: &BigRational) -> Elem {
    ring.from_rational(x).expect("representable")
}

/// `w_I = sum over J in S and k >= 1 with kJ = I of gcd(J) r_J^k`, by trying
/// every pair.
pub fn ghost(members: &[MultiIndex], coords: &[BigRational]) -> Vec<BigRational> {
    members
        .iter()
        .map(|i| {
            let mut w = BigRational::zero();
            for (j, r) in members.iter().zip(coords) {
                for k in 1..=i.degree() {
                    if j.scale(k) == *i {
                        w += q(gcd(j) as i64) * num_traits::pow(r.clone(), k as usize);
                    }
                }
            }
            w
        })
        .collect()
}

/// Sparse polynomial over `Q` in a fixed number of variables.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct QPoly(pub BTreeMap<Vec<u32>, BigRational>);

impl QPoly {
    pub fn constant(nvars: usize, c: BigRational) -> QPoly {
        let mut p = QPoly::default();
        if !c.is_zero() {
            p.0.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, v: usize) -> QPoly {
        let mut e = vec![0; nvars];
        e[v] = 1;
        QPoly(BTreeMap::from([(e, q(1))]))
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut out = self.0.clone();
        for (e, c) in &other.0 {
            let s = out.remove(e).unwrap_or_default() + c;
            if !s.is_zero() {
                out.insert(e.clone(), s);
            }
        }
        QPoly(out)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::default();
        }
        QPoly(self.0.iter().map(|(e, x)| (e.clone(), x * c)).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        let mut out = QPoly::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out = out.add(&QPoly(BTreeMap::from([(e, ca * cb)])));
            }
        }
        out
    }

    pub fn pow(&self, k: u32, nvars: usize) -> QPoly {
        (0..k).fold(QPoly::constant(nvars, q(1)), |acc, _| acc.mul(self))
    }

    pub fn is_integral(&self) -> bool {
        self.0.values().all(|c| c.is_integer())
    }

    /// `3*x_1^2*y_2 - x_2` style, parseable by witt-core.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in &self.0 {
            let mut factors = Vec::new();
            for (v, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(names[v].clone()),
                    _ => factors.push(format!("{}^{k}", names[v])),
                }
            }
            if factors.is_empty() || !c.abs().is_one() {
                factors.insert(0, c.abs().to_string());
            }
            let sign = match (out.is_empty(), c.is_negative()) {
                (true, false) => "",
                (true, true) => "-",
                (false, false) => " + ",
                (false, true) => " - ",
            };
            out.push_str(sign);
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// The universal sum, product or negation polynomials on `members` by
/// transporting the ghost operation and solving for each coordinate in turn.
/// Variable `p` is `x_{members[p]}`, variable `|S| + p` is `y_{members[p]}`.
pub fn ghost_transport(members: &[MultiIndex], op: &str) -> Vec<QPoly> {
    let len = members.len();
    let nvars = if op == "neg" { len } else { 2 * len };
    let ghost_of = |coords: &[QPoly], i: &MultiIndex| {
        let mut w = QPoly::default();
        for (j, r) in members.iter().zip(coords) {
            for k in 1..=i.degree() {
                if j.scale(k) == *i {
                    w = w.add(&r.pow(k, nvars).scale(&q(gcd(j) as i64)));
                }
            }
        }
        w
    };
    let x: Vec<QPoly> = (0..len).map(|p| QPoly::var(nvars, p)).collect();
    let y: Vec<QPoly> = if op == "neg" { Vec::new() } else { (0..len).map(|p| QPoly::var(nvars, len + p)).collect() };
    // Members ordered so every proper divisor precedes its multiples.
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by_key(|&p| members[p].degree());
    let mut out = vec![QPoly::default(); len];
    for p in order {
        let i = &members[p];
        let target = match op {
            "add" => ghost_of(&x, i).add(&ghost_of(&y, i)),
            "mul" => ghost_of(&x, i).mul(&ghost_of(&y, i)),
            "neg" => ghost_of(&x, i).scale(&q(-1)),
            _ => panic!("unknown op {op}"),
        };
        // Everything except the k = 1 term of I itself, whose weight is gcd(I).
        let mut known = out.clone();
        known[p] = QPoly::default();
        let rest = ghost_of(&known, i);
        out[p] = target.add(&rest.scale(&q(-1))).scale(&BigRational::new(BigInt::one(), BigInt::from(gcd(i))));
    }
    out
}

/// Number of words with letter counts `index`, by enumerating all words.
pub fn word_count(index: &MultiIndex) -> BigInt {
    let n = index.dim();
    let len = index.degree() as usize;
    let mut count = BigInt::zero();
    let total = n.pow(len as u32);
    for w in 0..total {
        let mut counts = vec![0u32; n];
        let mut x = w;
        for _ in 0..len {
            counts[x % n] += 1;
            x /= n;
        }
        if counts == index.coords() {
            count += 1;
        }
    }
    count
}

/// Every nonzero index of dimension `n` and degree at most `d`.
pub fn indices_up_to(n: usize, d: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    loop {
        let s: u32 = cur.iter().sum();
        if s > 0 && s <= d {
            out.push(MultiIndex::new(cur.clone()));
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            cur[i] += 1;
            if cur[i] <= d {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// Multisets of nonzero indices whose degrees sum to exactly `d`, each as a
/// nondecreasing list in the order of `indices_up_to(n, d)`.
pub fn multisets_of_total_degree(n: usize, d: u32) -> Vec<Vec<MultiIndex>> {
    let pool = indices_up_to(n, d);
    let mut out = Vec::new();
    fn go(pool: &[MultiIndex], start: usize, left: u32, cur: &mut Vec<MultiIndex>, out: &mut Vec<Vec<MultiIndex>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for p in start..pool.len() {
            if pool[p].degree() <= left {
                cur.push(pool[p].clone());
                go(pool, p, left - pool[p].degree(), cur, out);
                cur.pop();
            }
        }
    }
    go(&pool, 0, d, &mut Vec::new(), &mut out);
    out
}
