//! Integer universal polynomials for Witt addition, multiplication and
//! negation, and the shared table cache.
//!
//! A table is produced by ghost transport: form the ghost components of the
//! generic vectors `x = (x_J)` and `y = (y_J)` in `Z[x_J, y_J]`, combine them
//! componentwise and run the triangular unghost with exact integer division.
//! A failed division is an [`IntegralityFailure`](WittError::IntegralityFailure);
//! it is never papered over with rational coefficients.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use sha2::{Digest, Sha256};

use super::{ghost_components, unghost_components};
use crate::error::{Result, WittError};
use crate::index::{MultiIndex, TruncationSet};
use crate::par;
use crate::ring::{Elem, Poly, Ring};

/// Witt ring operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    Add,
    Mul,
    Neg,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Add => "add",
            Op::Mul => "mul",
            Op::Neg => "neg",
        }
    }

    pub fn parse(s: &str) -> Result<Op> {
        match s {
            "add" => Ok(Op::Add),
            "mul" => Ok(Op::Mul),
            "neg" => Ok(Op::Neg),
            _ => Err(WittError::parse(format!("unknown op {s:?}"))),
        }
    }

    pub fn is_binary(self) -> bool {
        !matches!(self, Op::Neg)
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Variable name for the generic coordinate `x_J` or `y_J`.
pub fn variable_name(prefix: char, index: &MultiIndex) -> String {
    format!("{prefix}_{}", index.key())
}

/// The polynomials `P_I(x, y)` for every `I` in a truncation set.
///
/// Variable `p` (for `p < |S|`) is `x_{S[p]}`; variable `|S| + p` is `y_{S[p]}`.
#[derive(Clone, PartialEq, Eq)]
pub struct UniversalPolyTable {
    set: Arc<TruncationSet>,
    op: Op,
    polys: Vec<Poly>,
    ring: Ring,
    max_exponent: Vec<u32>,
}

impl UniversalPolyTable {
    /// Compute the table from scratch (no caching).
    pub fn compute(set: &Arc<TruncationSet>, op: Op) -> Result<Self> {
        let ring = Self::variable_ring(set, op)?;
        let len = set.len();
        let generic = |offset: usize| -> Vec<Elem> {
            (0..len).map(|p| ring.var(offset + p).expect("variable exists")).collect()
        };
        let gx = ghost_components(&ring, set, &generic(0));
        let combined: Vec<Elem> = match op {
            Op::Add | Op::Mul => {
                let gy = ghost_components(&ring, set, &generic(len));
                par::map_range(len, |i| {
                    if op == Op::Add {
                        ring.add(&gx[i], &gy[i])
                    } else {
                        ring.mul(&gx[i], &gy[i])
                    }
                })
            }
            Op::Neg => gx.iter().map(|g| ring.neg(g)).collect(),
        };
        let coords = unghost_components(&ring, set, &combined).map_err(|e| match e {
            WittError::NonExactDivision { index: Some(index) } => WittError::IntegralityFailure { index },
            other => other,
        })?;
        let polys = coords
            .into_iter()
            .map(|c| match c {
                Elem::Poly(p) => p,
                _ => unreachable!("polynomial ring payload"),
            })
            .collect();
        let table = Self::from_polys(set.clone(), op, polys)?;
        table.check_locality()?;
        Ok(table)
    }

    /// Assemble a table from already-known polynomials over `Z`.
    pub fn from_polys(set: Arc<TruncationSet>, op: Op, polys: Vec<Poly>) -> Result<Self> {
        if polys.len() != set.len() {
            return Err(WittError::DimensionMismatch { expected: set.len(), got: polys.len() });
        }
        let ring = Self::variable_ring(&set, op)?;
        let nvars = ring.variables().len();
        let mut max_exponent = vec![0u32; nvars];
        for p in &polys {
            for (m, c) in p.terms() {
                if !matches!(c, Elem::Int(_)) {
                    return Err(WittError::parse("universal polynomial coefficients must be integers"));
                }
                for &(v, e) in m.pairs() {
                    let slot = max_exponent
                        .get_mut(v as usize)
                        .ok_or_else(|| WittError::parse("variable out of range"))?;
                    *slot = (*slot).max(e);
                }
            }
        }
        Ok(UniversalPolyTable { set, op, polys, ring, max_exponent })
    }

    /// `Z[x_J, y_J : J in S]` (only `x` for negation).
    pub fn variable_ring(set: &TruncationSet, op: Op) -> Result<Ring> {
        let mut names: Vec<String> = set.members().iter().map(|j| variable_name('x', j)).collect();
        if op.is_binary() {
            names.extend(set.members().iter().map(|j| variable_name('y', j)));
        }
        if names.is_empty() {
            // An empty set still needs a well-formed (if unused) ring.
            return Ok(Ring::integers());
        }
        Ring::polynomial(Ring::integers(), names)
    }

    pub fn dim(&self) -> usize {
        self.set.dim()
    }

    pub fn set(&self) -> &Arc<TruncationSet> {
        &self.set
    }

    pub fn op(&self) -> Op {
        self.op
    }

    pub fn polys(&self) -> &[Poly] {
        &self.polys
    }

    /// The ring the polynomials live in, with variables named `x_<index>`.
    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn poly(&self, index: &MultiIndex) -> Option<&Poly> {
        self.set.position(index).map(|p| &self.polys[p])
    }

    pub fn render(&self, index: &MultiIndex) -> Option<String> {
        self.poly(index).map(|p| self.ring.render(&Elem::Poly(p.clone())))
    }

    /// The polynomial for `I` mentions only `x_J`, `y_J` with `J` dividing `I`.
    pub fn check_locality(&self) -> Result<()> {
        let len = self.set.len();
        for (pos, (index, poly)) in self.set.members().iter().zip(&self.polys).enumerate() {
            let allowed: Vec<usize> = self.set.divisor_positions(index).into_iter().map(|(_, j)| j).collect();
            for v in poly.variables() {
                let j = v as usize % len.max(1);
                if !allowed.contains(&j) {
                    return Err(WittError::Internal(format!(
                        "universal polynomial #{pos} for {index} mentions a non-divisor variable {}",
                        self.ring.variables()[v as usize]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Evaluate every polynomial at `x = u`, `y = v` in `target`.
    pub fn evaluate(&self, target: &Ring, u: &[Elem], v: Option<&[Elem]>) -> Vec<Elem> {
        let len = self.set.len();
        let value = |var: usize| -> &Elem {
            if var < len {
                &u[var]
            } else {
                &v.expect("binary op needs a second operand")[var - len]
            }
        };
        let powers: Vec<Vec<Elem>> = par::map_range(self.max_exponent.len(), |var| {
            let top = self.max_exponent[var];
            let mut pw = Vec::with_capacity(top as usize + 1);
            if top > 0 {
                pw.push(target.one());
                let x = value(var);
                for e in 1..=top as usize {
                    pw.push(target.mul(&pw[e - 1], x));
                }
            }
            pw
        });
        par::map(&self.polys, |poly| {
            let mut acc = target.zero();
            for (m, c) in poly.terms() {
                let Elem::Int(c) = c else { unreachable!("integer coefficients") };
                let mut t = target.from_int(c);
                for &(var, e) in m.pairs() {
                    if target.is_zero(&t) {
                        break;
                    }
                    t = target.mul(&t, &powers[var as usize][e as usize]);
                }
                acc = target.add(&acc, &t);
            }
            acc
        })
    }

    /// Largest absolute coefficient, handy for diagnostics.
    pub fn max_coefficient(&self) -> BigInt {
        use num_traits::Signed;
        self.polys
            .iter()
            .flat_map(|p| p.terms().map(|(_, c)| c.clone()))
            .filter_map(|c| if let Elem::Int(x) = c { Some(x.abs()) } else { None })
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Debug for UniversalPolyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UniversalPolyTable")
            .field("n", &self.set.dim())
            .field("op", &self.op)
            .field("S", &self.set)
            .finish()
    }
}

/// Canonical cache key: dimension, operation, and the graded-lex sorted set.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TableKey {
    n: usize,
    op: Op,
    members: Vec<MultiIndex>,
}

impl TableKey {
    pub fn new(set: &TruncationSet, op: Op) -> Self {
        TableKey { n: set.dim(), op, members: set.members().to_vec() }
    }

    /// Stable text form, hashed to name the on-disk entry.
    pub fn canonical(&self) -> String {
        let members: Vec<String> = self.members.iter().map(|m| format!("[{}]", m.key())).collect();
        format!("n={};op={};S=[{}]", self.n, self.op, members.join(","))
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

type Slot = Arc<OnceLock<Result<Arc<UniversalPolyTable>>>>;

/// Memo table for universal polynomials with get-or-compute semantics.
///
/// Concurrent requests for one key block on a single computation. When a
/// directory is configured, tables are also persisted as JSON files named by
/// the SHA-256 of the canonical key; a damaged file is recomputed and
/// overwritten.
pub struct TableCache {
    dir: Option<PathBuf>,
    entries: Mutex<HashMap<TableKey, Slot>>,
    computed: std::sync::atomic::AtomicUsize,
}

static GLOBAL: OnceLock<TableCache> = OnceLock::new();

impl TableCache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        TableCache { dir, entries: Mutex::new(HashMap::new()), computed: Default::default() }
    }

    /// Install the process-wide cache. Returns false if one was already set.
    pub fn init_global(dir: Option<PathBuf>) -> bool {
        GLOBAL.set(TableCache::new(dir)).is_ok()
    }

    /// The process-wide cache (memory-only unless `init_global` said otherwise).
    pub fn global() -> &'static TableCache {
        GLOBAL.get_or_init(|| TableCache::new(None))
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Number of tables computed from scratch by this cache (disk hits excluded).
    pub fn computations(&self) -> usize {
        self.computed.load(std::sync::atomic::Ordering::SeqCst)
    }

    pub fn get(&self, set: &Arc<TruncationSet>, op: Op) -> Result<Arc<UniversalPolyTable>> {
        let key = TableKey::new(set, op);
        let slot = {
            let mut map = self.entries.lock().expect("cache lock");
            map.entry(key.clone()).or_default().clone()
        };
        slot.get_or_init(|| self.load_or_compute(&key, set, op).map(Arc::new)).clone()
    }

    fn path_for(&self, key: &TableKey) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("universal-{}.json", key.digest())))
    }

    fn load_or_compute(&self, key: &TableKey, set: &Arc<TruncationSet>, op: Op) -> Result<UniversalPolyTable> {
        let path = self.path_for(key);
        if let Some(table) = path.as_ref().and_then(|p| load_table(p, set, op)) {
            return Ok(table);
        }
        let table = UniversalPolyTable::compute(set, op)?;
        self.computed.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
        if let Some(p) = path {
            store_table(&p, &table)?;
        }
        Ok(table)
    }
}

fn load_table(path: &Path, set: &Arc<TruncationSet>, op: Op) -> Option<UniversalPolyTable> {
    let text = std::fs::read_to_string(path).ok()?;
    let value: serde_json::Value = serde_json::from_str(&text).ok()?;
    let table = crate::json::table_from_json(&value).ok()?;
    (table.op() == op && **table.set() == **set).then(|| UniversalPolyTable { set: set.clone(), ..table })
}

fn store_table(path: &Path, table: &UniversalPolyTable) -> Result<()> {
    let io = |e: std::io::Error| WittError::Io(format!("{}: {e}", path.display()));
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    let text = crate::json::to_canonical_string(&crate::json::table_to_json(table));
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}
