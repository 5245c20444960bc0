//! The randomized invariant suite behind `witt verify`.
//!
//! Every check draws from its own seeded generator, so a report depends only
//! on the mode. Reports carry no timings and serialize deterministically.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::dual::{
    c_expand, c_expand_split, c_of, dual_comul, dual_mul, express_in_c, f_push_cexpr, f_push_dual, monomials_of_multidegree,
    remark_report, subalgebra_rank, CExpression, DualElement, GradedDual, MonomialKey, TensorElement,
};
use crate::error::Result;
use crate::index::{MultiIndex, TruncationSet, Window};
use crate::json;
use crate::random::{self, Gen};
use crate::ring::Ring;
use crate::series::witt_series_iso_check;
use crate::witt::{GhostVector, Op, UniversalPolyTable, WittVector};

const SEED: u64 = 0x5749_5454;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Quick,
    Full,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Quick => "quick",
            Mode::Full => "full",
        }
    }

    fn trials(self) -> usize {
        match self {
            Mode::Quick => 50,
            Mode::Full => 200,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// First failure, if any.
    pub detail: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub mode: Mode,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                json!({
                    "name": c.name,
                    "trials": c.trials,
                    "failures": c.failures,
                    "passed": c.passed(),
                    "detail": c.detail,
                })
            })
            .collect();
        json!({"mode": self.mode.name(), "seed": SEED.to_string(), "passed": self.passed(), "checks": checks})
    }
}

/// Tallies trials; an `Err` from a trial counts as a failure.
struct Tally {
    trials: usize,
    failures: usize,
    detail: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { trials: 0, failures: 0, detail: None }
    }

    fn record(&mut self, what: impl FnOnce() -> String, outcome: Result<bool>) {
        self.trials += 1;
        let failure = match outcome {
            Ok(true) => return,
            Ok(false) => what(),
            Err(e) => format!("{}: {e}", what()),
        };
        self.failures += 1;
        self.detail.get_or_insert(failure);
    }

    fn finish(self, name: &'static str) -> CheckResult {
        CheckResult { name, trials: self.trials, failures: self.failures, detail: self.detail }
    }
}

type Check = fn(Mode, &mut Gen) -> Tally;

const CHECKS: &[(&str, Check)] = &[
    ("ring_axioms", ring_axioms),
    ("classical_tables", classical_tables),
    ("table_integrality", table_integrality),
    ("ghost_homomorphism", ghost_homomorphism),
    ("ghost_bijectivity", ghost_bijectivity),
    ("identities", identities),
    ("restriction", restriction),
    ("decomposition", decomposition),
    ("series_factorization", series_factorization),
    ("series_log_exp", series_log_exp),
    ("dual_algebra", dual_algebra),
    ("mu_c_identity", mu_c_identity),
    ("express_in_c", express_soundness),
    ("rank_law", rank_law),
    ("remark", remark),
    ("f_map", f_map),
    ("json_round_trip", json_round_trip),
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|(n, _)| *n).collect()
}

pub fn run(mode: Mode) -> Report {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, (name, check))| {
            let mut rng = random::generator(SEED + i as u64);
            check(mode, &mut rng).finish(name)
        })
        .collect();
    Report { mode, checks }
}

fn rings(specs: &[&str]) -> Vec<Ring> {
    specs.iter().map(|s| Ring::parse(s).expect("static ring spec")).collect()
}

fn ring_axioms(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    for ring in rings(&["Z", "Q", "Z/6", "Z/7", "Q[x,y]", "Z/4[a,b]"]) {
        for _ in 0..mode.trials() {
            let [a, b, c] = [0, 1, 2].map(|_| random::elem(rng, &ring, 20));
            let r = &ring;
            let ok = r.add(&r.add(&a, &b), &c) == r.add(&a, &r.add(&b, &c))
                && r.mul(&r.mul(&a, &b), &c) == r.mul(&a, &r.mul(&b, &c))
                && r.add(&a, &b) == r.add(&b, &a)
                && r.mul(&a, &b) == r.mul(&b, &a)
                && r.mul(&a, &r.add(&b, &c)) == r.add(&r.mul(&a, &b), &r.mul(&a, &c))
                && r.is_zero(&r.add(&a, &r.neg(&a)))
                && r.mul(&a, &r.one()) == a;
            t.record(|| format!("axioms over {ring}"), Ok(ok));
        }
    }
    t
}

fn ghost_sum(op: Op, u: &WittVector, v: &WittVector) -> Result<GhostVector> {
    match op {
        Op::Add => u.ghost().add(&v.ghost()),
        Op::Mul => u.ghost().mul(&v.ghost()),
        Op::Neg => Ok(u.ghost().neg()),
    }
}

fn classical_tables(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let top = if mode == Mode::Quick { 4 } else { 5 };
    let set = Arc::new(TruncationSet::new(1, (1..=top).map(|i| MultiIndex::new(vec![i]))).expect("initial segment"));
    let q = Ring::rationals();
    for op in [Op::Add, Op::Mul, Op::Neg] {
        for _ in 0..mode.trials() {
            let u = random::witt_vector(rng, &q, &set, 9);
            let v = random::witt_vector(rng, &q, &set, 9);
            let outcome = (|| {
                let direct = u.op(op, op.is_binary().then_some(&v))?;
                Ok(direct == ghost_sum(op, &u, &v)?.unghost()?)
            })();
            t.record(|| format!("{op} on {{1..{top}}} against ghost transport"), outcome);
        }
    }
    let outcome = (|| {
        let two = Arc::new(TruncationSet::new(1, [MultiIndex::from([1]), MultiIndex::from([2])])?);
        let table = UniversalPolyTable::compute(&two, Op::Add)?;
        Ok(table.render(&MultiIndex::from([2])).as_deref() == Some("x_2 + y_2 - x_1*y_1"))
    })();
    t.record(|| "rendered sum polynomial at 2".into(), outcome);
    t
}

fn table_integrality(mode: Mode, _rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    for n in 1..=3usize {
        let d = match mode {
            Mode::Quick => 4u32.min(7 - n as u32),
            Mode::Full => 7 - n as u32,
        };
        for op in [Op::Add, Op::Mul, Op::Neg] {
            let outcome = Window::degree(n, d).and_then(|w| {
                let set = Arc::new(w.truncation_set());
                UniversalPolyTable::compute(&set, op).map(|_| true)
            });
            t.record(|| format!("{op} table, n = {n}, degree {d}"), outcome);
        }
    }
    t
}

fn ghost_homomorphism(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let per_config = match mode {
        Mode::Quick => 20,
        Mode::Full => 200,
    };
    for ring in rings(&["Z", "Q", "Z/2", "Z/4", "Z/6", "Z/12"]) {
        for n in 1..=3 {
            for _ in 0..per_config {
                let set = Arc::new(random::truncation_set(rng, n, 4));
                let u = random::witt_vector(rng, &ring, &set, 6);
                let v = random::witt_vector(rng, &ring, &set, 6);
                let outcome = (|| {
                    Ok(u.add(&v)?.ghost() == u.ghost().add(&v.ghost())?
                        && u.mul(&v)?.ghost() == u.ghost().mul(&v.ghost())?
                        && u.neg()?.ghost() == u.ghost().neg())
                })();
                t.record(|| format!("ghost homomorphism over {ring}, S = {:?}", set), outcome);
            }
        }
    }
    t
}

fn ghost_bijectivity(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let q = Ring::rationals();
    for _ in 0..mode.trials() * 5 {
        let n = rng_range(rng, 1, 2);
        let set = Arc::new(Window::degree(n, rng_range(rng, 1, 4) as u32).expect("valid").truncation_set());
        let u = random::witt_vector(rng, &q, &set, 9);
        let g = GhostVector::new(q.clone(), set.clone(), random::elems(rng, &q, set.len(), 9)).expect("valid");
        let outcome = (|| Ok(u.ghost().unghost()? == u && g.unghost()?.ghost() == g))();
        t.record(|| format!("ghost bijection on {set:?}"), outcome);
    }
    t
}

fn rng_range(rng: &mut Gen, lo: usize, hi: usize) -> usize {
    use rand::Rng;
    rng.random_range(lo..=hi)
}

fn identities(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    for ring in rings(&["Z", "Z/4", "Q"]) {
        for _ in 0..mode.trials() {
            let n = rng_range(rng, 1, 3);
            let set = Arc::new(random::truncation_set(rng, n, 4));
            let u = random::witt_vector(rng, &ring, &set, 6);
            let outcome = (|| {
                let zero = WittVector::zero(ring.clone(), set.clone());
                let one = WittVector::one(ring.clone(), set.clone())?;
                Ok(u.add(&zero)? == u && u.mul(&one)? == u && u.add(&u.neg()?)? == zero)
            })();
            t.record(|| format!("identities over {ring} on {set:?}"), outcome);
        }
    }
    t
}

fn restriction(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    for ring in rings(&["Z", "Z/6"]) {
        for _ in 0..mode.trials() {
            let n = rng_range(rng, 1, 3);
            let set = Arc::new(Window::degree(n, 3).expect("valid").truncation_set());
            let sub = Arc::new(random::truncation_set(rng, n, 3));
            let u = random::witt_vector(rng, &ring, &set, 6);
            let v = random::witt_vector(rng, &ring, &set, 6);
            let outcome = (|| {
                let r = |w: &WittVector| w.restrict(&sub);
                Ok(r(&u.add(&v)?)? == r(&u)?.add(&r(&v)?)? && r(&u.mul(&v)?)? == r(&u)?.mul(&r(&v)?)?)
            })();
            t.record(|| format!("restriction to {sub:?} over {ring}"), outcome);
        }
    }
    t
}

fn decomposition(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    for ring in rings(&["Z/6", "Q"]) {
        for _ in 0..mode.trials() {
            let set = Arc::new(Window::degree(2, rng_range(rng, 1, 3) as u32).expect("valid").truncation_set());
            let u = random::witt_vector(rng, &ring, &set, 6);
            let v = random::witt_vector(rng, &ring, &set, 6);
            let outcome = (|| {
                let (du, dv) = (u.decompose()?, v.decompose()?);
                Ok(du.recompose()? == u
                    && du.op(Op::Add, Some(&dv))?.recompose()? == u.add(&v)?
                    && du.op(Op::Mul, Some(&dv))?.recompose()? == u.mul(&v)?
                    && du.op(Op::Neg, None)?.recompose()? == u.neg()?)
            })();
            t.record(|| format!("decomposition over {ring} on {set:?}"), outcome);
        }
    }
    t
}

fn random_window(rng: &mut Gen) -> Arc<Window> {
    let n = rng_range(rng, 1, 3);
    if rng_range(rng, 0, 1) == 0 {
        Window::degree(n, rng_range(rng, 1, 4) as u32).expect("valid")
    } else {
        let bound = MultiIndex::new((0..n).map(|_| rng_range(rng, 1, 2) as u32).collect());
        Window::boxed(&bound).expect("valid")
    }
}

fn series_factorization(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    for ring in rings(&["Z", "Q", "Z/4"]) {
        for _ in 0..mode.trials() {
            let w = random_window(rng);
            let f = random::series(rng, &ring, &w, 6);
            let a = random::factor_form(rng, &ring, &w, 6);
            let b = random::factor_form(rng, &ring, &w, 6);
            let outcome = (|| {
                let mut ok = f.factorize().expand() == f && a.expand().factorize() == a;
                ok &= witt_series_iso_check(&a.to_witt(), &b.to_witt())?;
                if ring.is_q_algebra() {
                    ok &= a.ghost_from_log()? == a.to_witt().ghost();
                }
                Ok(ok)
            })();
            t.record(|| format!("factorization over {ring} on {w:?}"), outcome);
        }
    }
    t
}

fn series_log_exp(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let q = Ring::rationals();
    for _ in 0..mode.trials() {
        let w = random_window(rng);
        let f = random::series(rng, &q, &w, 5);
        let g = random::series(rng, &q, &w, 5);
        let outcome = (|| {
            let one = crate::series::TruncatedSeries::one(q.clone(), w.clone());
            Ok(f.mul(&f.inv())? == one && f.log()?.exp()? == f && f.mul(&g)?.log()? == f.log()?.add(&g.log()?)?)
        })();
        t.record(|| format!("log/exp on {w:?}"), outcome);
    }
    t
}

fn random_dual(rng: &mut Gen, ring: &Ring, d: &MultiIndex) -> DualElement {
    let terms: BTreeMap<MonomialKey, _> =
        monomials_of_multidegree(d).into_iter().map(|k| (k, random::elem(rng, ring, 5))).collect();
    DualElement::new(ring.clone(), d.clone(), terms).expect("keys of multidegree d")
}

fn box_members(bound: &MultiIndex) -> Vec<MultiIndex> {
    bound.box_below().into_iter().filter(|m| !m.is_zero()).collect()
}

fn dual_algebra(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let z = Ring::integers();
    let degrees: Vec<MultiIndex> = box_members(&MultiIndex::from([1, 1, 1])).into_iter().chain(box_members(&MultiIndex::from([1, 1]))).collect();
    for _ in 0..mode.trials() {
        let pick = |rng: &mut Gen, n: usize| {
            let candidates: Vec<&MultiIndex> = degrees.iter().filter(|d| d.dim() == n).collect();
            candidates[rng_range(rng, 0, candidates.len() - 1)].clone()
        };
        let n = rng_range(rng, 2, 3);
        let [da, db, dc] = [0, 1, 2].map(|_| pick(rng, n));
        let (x, y, w) = (random_dual(rng, &z, &da), random_dual(rng, &z, &db), random_dual(rng, &z, &dc));
        let outcome = (|| {
            Ok(dual_mul(&x, &y)? == dual_mul(&y, &x)?
                && dual_mul(&dual_mul(&x, &y)?, &w)? == dual_mul(&x, &dual_mul(&y, &w)?)?)
        })();
        t.record(|| format!("dual product at {da}, {db}, {dc}"), outcome);
    }
    t
}

fn c_or_unit(ring: &Ring, m: &MultiIndex) -> Result<DualElement> {
    if m.is_zero() {
        Ok(DualElement::unit(ring.clone(), m.dim()))
    } else {
        c_of(ring, m)
    }
}

fn mu_c_identity(_mode: Mode, _rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let z = Ring::integers();
    let ms: Vec<MultiIndex> = box_members(&MultiIndex::from([2])).into_iter().chain(box_members(&MultiIndex::from([2, 2]))).collect();
    for m in ms {
        for j in m.box_below() {
            let outcome = (|| {
                let rest = m.checked_sub(&j).expect("j below m");
                let expected = TensorElement::product(&c_or_unit(&z, &j)?, &c_or_unit(&z, &rest)?)?;
                Ok(dual_comul(&c_of(&z, &m)?, &j)? == expected)
            })();
            t.record(|| format!("comultiplication of C_{m} at {j}"), outcome);
        }
    }
    t
}

fn express_soundness(_mode: Mode, _rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let cases: Vec<(Ring, MultiIndex)> = (1..=5)
        .map(|d| (Ring::integers(), MultiIndex::new(vec![d])))
        .chain(box_members(&MultiIndex::from([1, 1, 1])).into_iter().map(|d| (Ring::rationals(), d)))
        .collect();
    for (ring, d) in cases {
        for key in monomials_of_multidegree(&d) {
            let outcome = (|| {
                let e = express_in_c(&ring, d.dim(), &key)?;
                Ok(c_expand(&e)? == DualElement::basis(ring.clone(), d.dim(), key.clone())?)
            })();
            t.record(|| format!("express c_{key} over {ring}"), outcome);
        }
    }
    t
}

fn rank_law(_mode: Mode, _rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let q = Ring::rationals();
    let degrees: Vec<MultiIndex> =
        box_members(&MultiIndex::from([2, 2])).into_iter().chain([MultiIndex::from([1, 1, 1])]).collect();
    for d in degrees {
        let outcome = subalgebra_rank(&q, &d).map(|(r, n)| r == n);
        t.record(|| format!("rank over Q at {d}"), outcome);
    }
    t
}

fn remark(_mode: Mode, _rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let q = remark_report(&Ring::rationals());
    t.record(
        || "remark over Q".into(),
        q.map(|r| *r.determinant.magnitude() == 2u32.into() && r.rank == 5 && r.member),
    );
    let z2 = remark_report(&Ring::modular(2).expect("2 >= 2"));
    t.record(|| "remark over Z/2".into(), z2.map(|r| r.rank == 4 && r.dimension == 5 && !r.member));
    t
}

fn f_map(_mode: Mode, _rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    let z = Ring::integers();
    for m in 1..=4u32 {
        for n in 1..=3usize {
            for mono in monomials_of_multidegree(&MultiIndex::new(vec![m])) {
                let outcome = (|| {
                    let e = CExpression::new(z.clone(), 1, BTreeMap::from([(mono.clone(), z.one())]))?;
                    let lhs = GradedDual::new(z.clone(), n, c_expand_split(&f_push_cexpr(&e, n)?).into_values())?;
                    let pushed = f_push_dual(&c_expand(&e)?, n)?;
                    Ok(lhs == pushed)
                })();
                t.record(|| format!("f commutes with expansion at {mono}, n = {n}"), outcome);
            }
        }
    }
    t
}

fn json_round_trip(mode: Mode, rng: &mut Gen) -> Tally {
    let mut t = Tally::new();
    for ring in rings(&["Z", "Q", "Z/12", "Q[x,y]"]) {
        for _ in 0..mode.trials() {
            let n = rng_range(rng, 1, 3);
            let set = Arc::new(random::truncation_set(rng, n, 4));
            let u = random::witt_vector(rng, &ring, &set, 50);
            let w = random_window(rng);
            let s = random::series(rng, &ring, &w, 50);
            let outcome = (|| {
                let reparse = |v: Value| json::parse(&json::to_canonical_string(&v));
                Ok(json::witt_from_json(&reparse(json::witt_to_json(&u))?)? == u
                    && json::ghost_from_json(&reparse(json::ghost_to_json(&u.ghost()))?)? == u.ghost()
                    && json::series_from_json(&reparse(json::series_to_json(&s))?)? == s
                    && json::factor_from_json(&reparse(json::factor_to_json(&s.factorize()))?)? == s.factorize())
            })();
            t.record(|| format!("JSON round trip over {ring}"), outcome);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::WittError;

    #[test]
    fn names_are_unique() {
        let mut names = check_names();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), CHECKS.len());
    }

    #[test]
    fn tally_keeps_first_failure() {
        let mut t = Tally::new();
        t.record(|| "a".into(), Ok(true));
        t.record(|| "b".into(), Ok(false));
        t.record(|| "c".into(), Err(WittError::NoSolution));
        let r = t.finish("x");
        assert_eq!((r.trials, r.failures, r.detail.as_deref()), (3, 2, Some("b")));
    }
}
