//! The JSON wire format.
//!
//! Ring elements are always strings; indices are integer arrays, or
//! comma-joined strings when used as object keys. Objects serialize with
//! sorted keys, so equal values give identical bytes.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::dual::{CExpression, DualElement, GradedDual, MonomialKey, RemarkReport, TensorElement};
use crate::error::{Result, WittError};
use crate::index::{MultiIndex, TruncationSet, Window, WindowShape, ZeroPattern};
use crate::ring::{Elem, Poly, Ring};
use crate::series::{FactorForm, TruncatedSeries, UnnormalizedSeries};
use crate::witt::{Decomposition, GhostVector, Op, UniversalPolyTable, WittVector};

/// Compact serialization with sorted object keys.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialize")
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| WittError::parse(format!("invalid JSON: {e}")))
}

fn schema(msg: impl Into<String>) -> WittError {
    WittError::Parse(msg.into())
}

fn object(v: &Value) -> Result<&Map<String, Value>> {
    v.as_object().ok_or_else(|| schema("expected a JSON object"))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value> {
    object(v)?.get(name).ok_or_else(|| schema(format!("missing field {name:?}")))
}

fn str_field<'a>(v: &'a Value, name: &str) -> Result<&'a str> {
    field(v, name)?.as_str().ok_or_else(|| schema(format!("field {name:?} must be a string")))
}

/// Counts are written as numbers but accepted as numeric strings too.
fn count(v: &Value, what: &str) -> Result<u64> {
    match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.parse().ok(),
        _ => None,
    }
    .ok_or_else(|| schema(format!("{what} must be a non-negative integer")))
}

fn dim_field(v: &Value) -> Result<usize> {
    let n = count(field(v, "n")?, "n")? as usize;
    if n == 0 {
        return Err(schema("n must be positive"));
    }
    Ok(n)
}

fn ring_field(v: &Value) -> Result<Ring> {
    Ring::parse(str_field(v, "ring")?)
}

fn elem_to_json(ring: &Ring, e: &Elem) -> Value {
    Value::String(ring.render(e))
}

fn elem_from_json(ring: &Ring, v: &Value) -> Result<Elem> {
    let s = v.as_str().ok_or_else(|| schema("ring elements must be strings"))?;
    ring.parse_elem(s)
}

pub fn index_to_json(i: &MultiIndex) -> Value {
    Value::Array(i.coords().iter().map(|&c| json!(c)).collect())
}

pub fn index_from_json(n: usize, v: &Value) -> Result<MultiIndex> {
    let coords = v
        .as_array()
        .ok_or_else(|| schema("an index is an array of integers"))?
        .iter()
        .map(|c| count(c, "index coordinate").and_then(|c| u32::try_from(c).map_err(|_| schema("index too large"))))
        .collect::<Result<Vec<_>>>()?;
    if coords.len() != n {
        return Err(WittError::DimensionMismatch { expected: n, got: coords.len() });
    }
    Ok(MultiIndex::new(coords))
}

fn key_from_str(n: usize, s: &str) -> Result<MultiIndex> {
    let i = MultiIndex::parse_key(s)?;
    if i.dim() != n {
        return Err(WittError::DimensionMismatch { expected: n, got: i.dim() });
    }
    Ok(i)
}

pub fn indices_to_json(members: &[MultiIndex]) -> Value {
    Value::Array(members.iter().map(index_to_json).collect())
}

pub fn indices_from_json(n: usize, v: &Value) -> Result<Vec<MultiIndex>> {
    v.as_array()
        .ok_or_else(|| schema("a set is an array of indices"))?
        .iter()
        .map(|i| index_from_json(n, i))
        .collect()
}

pub fn set_from_json(n: usize, v: &Value) -> Result<TruncationSet> {
    TruncationSet::new(n, indices_from_json(n, v)?)
}

fn coefficient_map(ring: &Ring, n: usize, v: &Value) -> Result<BTreeMap<MultiIndex, Elem>> {
    object(v)?.iter().map(|(k, c)| Ok((key_from_str(n, k)?, elem_from_json(ring, c)?))).collect()
}

fn vector_json(ring: &Ring, set: &TruncationSet, values: &[Elem], name: &str) -> Value {
    let coords: Map<String, Value> =
        set.members().iter().zip(values).map(|(i, c)| (i.key(), elem_to_json(ring, c))).collect();
    json!({
        "ring": ring.to_string(),
        "n": set.dim(),
        "S": indices_to_json(set.members()),
        name: coords,
    })
}

/// Set members in order, missing coordinates read as zero.
fn vector_parts(v: &Value, name: &str) -> Result<(Ring, Arc<TruncationSet>, Vec<Elem>)> {
    let ring = ring_field(v)?;
    let n = dim_field(v)?;
    let set = Arc::new(set_from_json(n, field(v, "S")?)?);
    let mut map = coefficient_map(&ring, n, field(v, name)?)?;
    let values = set.members().iter().map(|i| map.remove(i).unwrap_or_else(|| ring.zero())).collect();
    if let Some(extra) = map.keys().next() {
        return Err(WittError::IndexNotInSet { index: extra.clone() });
    }
    Ok((ring, set, values))
}

pub fn witt_to_json(w: &WittVector) -> Value {
    vector_json(w.ring(), w.set(), w.coords(), "coords")
}

pub fn witt_from_json(v: &Value) -> Result<WittVector> {
    let (ring, set, coords) = vector_parts(v, "coords")?;
    WittVector::new(ring, set, coords)
}

pub fn ghost_to_json(g: &GhostVector) -> Value {
    vector_json(g.ring(), g.set(), g.components(), "ghost")
}

pub fn ghost_from_json(v: &Value) -> Result<GhostVector> {
    let (ring, set, ghost) = vector_parts(v, "ghost")?;
    GhostVector::new(ring, set, ghost)
}

pub fn table_to_json(t: &UniversalPolyTable) -> Value {
    let polys: Map<String, Value> = t
        .set()
        .members()
        .iter()
        .map(|i| (i.key(), Value::String(t.render(i).expect("member"))))
        .collect();
    json!({
        "n": t.dim(),
        "op": t.op().name(),
        "S": indices_to_json(t.set().members()),
        "polys": polys,
    })
}

pub fn table_from_json(v: &Value) -> Result<UniversalPolyTable> {
    let n = dim_field(v)?;
    let op = Op::parse(str_field(v, "op")?)?;
    let set = Arc::new(set_from_json(n, field(v, "S")?)?);
    let ring = UniversalPolyTable::variable_ring(&set, op)?;
    let polys_json = object(field(v, "polys")?)?;
    if polys_json.len() != set.len() {
        return Err(WittError::DimensionMismatch { expected: set.len(), got: polys_json.len() });
    }
    let polys = set
        .members()
        .iter()
        .map(|i| {
            let text = polys_json
                .get(&i.key())
                .and_then(Value::as_str)
                .ok_or_else(|| schema(format!("missing polynomial for {i}")))?;
            match ring.parse_elem(text)? {
                Elem::Poly(p) => Ok(p),
                _ => Err(schema("universal polynomial outside its variable ring")),
            }
        })
        .collect::<Result<Vec<Poly>>>()?;
    UniversalPolyTable::from_polys(set, op, polys)
}

pub fn window_to_json(w: &Window) -> Value {
    match w.shape() {
        WindowShape::Degree(d) => json!({"kind": "degree", "d": d}),
        WindowShape::Box(b) => json!({"kind": "box", "B": index_to_json(b)}),
        WindowShape::Explicit => json!({"kind": "set", "members": indices_to_json(&w.members()[1..])}),
    }
}

pub fn window_from_json(n: usize, v: &Value) -> Result<Arc<Window>> {
    match str_field(v, "kind")? {
        "degree" => {
            let d = count(field(v, "d")?, "d")?;
            Window::degree(n, u32::try_from(d).map_err(|_| schema("degree too large"))?)
        }
        "box" => Window::boxed(&index_from_json(n, field(v, "B")?)?),
        "set" => Window::explicit(n, indices_from_json(n, field(v, "members")?)?),
        other => Err(schema(format!("unknown window kind {other:?}"))),
    }
}

fn sparse_json(ring: &Ring, members: &[MultiIndex], values: &[Elem]) -> Value {
    let map: Map<String, Value> = members
        .iter()
        .zip(values)
        .filter(|(_, c)| !ring.is_zero(c))
        .map(|(i, c)| (i.key(), elem_to_json(ring, c)))
        .collect();
    Value::Object(map)
}

fn series_json(ring: &Ring, window: &Window, name: &str, body: Value) -> Value {
    json!({
        "ring": ring.to_string(),
        "n": window.dim(),
        "window": window_to_json(window),
        name: body,
    })
}

fn series_parts(v: &Value, name: &str) -> Result<(Ring, Arc<Window>, BTreeMap<MultiIndex, Elem>)> {
    let ring = ring_field(v)?;
    let n = dim_field(v)?;
    let window = window_from_json(n, field(v, "window")?)?;
    let map = coefficient_map(&ring, n, field(v, name)?)?;
    Ok((ring, window, map))
}

pub fn series_to_json(s: &TruncatedSeries) -> Value {
    let body = sparse_json(s.ring(), s.window().members(), s.coeffs());
    series_json(s.ring(), s.window(), "coeffs", body)
}

pub fn series_from_json(v: &Value) -> Result<TruncatedSeries> {
    let (ring, window, map) = series_parts(v, "coeffs")?;
    TruncatedSeries::from_map(ring, window, map)
}

pub fn unnormalized_to_json(s: &UnnormalizedSeries) -> Value {
    let body = sparse_json(s.ring(), s.window().members(), s.coeffs());
    series_json(s.ring(), s.window(), "coeffs", body)
}

pub fn unnormalized_from_json(v: &Value) -> Result<UnnormalizedSeries> {
    let (ring, window, map) = series_parts(v, "coeffs")?;
    UnnormalizedSeries::from_map(ring, window, map)
}

pub fn factor_to_json(f: &FactorForm) -> Value {
    let body = sparse_json(f.ring(), &f.window().members()[1..], f.coords());
    series_json(f.ring(), f.window(), "a", body)
}

pub fn factor_from_json(v: &Value) -> Result<FactorForm> {
    let (ring, window, map) = series_parts(v, "a")?;
    FactorForm::from_map(ring, window, map)
}

/// Blocks keyed by zero-pattern label (`"[]"`, `"[2]"`, 1-based), each a Witt
/// vector in the compressed dimension.
pub fn decomposition_to_json(d: &Decomposition) -> Value {
    let parts: Map<String, Value> = d.parts().iter().map(|(z, w)| (z.label(), witt_to_json(w))).collect();
    json!({"ring": d.ring().to_string(), "n": d.dim(), "parts": parts})
}

pub fn decomposition_from_json(v: &Value) -> Result<Decomposition> {
    let ring = ring_field(v)?;
    let n = dim_field(v)?;
    let parts = object(field(v, "parts")?)?
        .iter()
        .map(|(label, w)| Ok((ZeroPattern::parse_label(n, label)?, witt_from_json(w)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Decomposition::new(n, ring, parts)
}

fn dual_terms_json(ring: &Ring, terms: &BTreeMap<MonomialKey, Elem>) -> Value {
    Value::Object(terms.iter().map(|(k, c)| (k.key(), elem_to_json(ring, c))).collect())
}

pub fn dual_to_json(x: &DualElement) -> Value {
    json!({
        "ring": x.ring().to_string(),
        "D": index_to_json(x.multidegree()),
        "terms": dual_terms_json(x.ring(), x.terms()),
    })
}

pub fn dual_from_json(v: &Value) -> Result<DualElement> {
    let ring = ring_field(v)?;
    let d_json = field(v, "D")?;
    let n = d_json.as_array().map(Vec::len).ok_or_else(|| schema("D must be an index"))?;
    let d = index_from_json(n, d_json)?;
    let terms = object(field(v, "terms")?)?
        .iter()
        .map(|(k, c)| Ok((MonomialKey::parse_key(n, k)?, elem_from_json(&ring, c)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    DualElement::new(ring, d, terms)
}

/// Mixed-multidegree dual elements, such as images under the transition map.
pub fn graded_dual_to_json(g: &GradedDual) -> Value {
    let terms: Map<String, Value> = g.terms().map(|(k, c)| (k.key(), elem_to_json(g.ring(), c))).collect();
    json!({"ring": g.ring().to_string(), "n": g.dim(), "terms": terms})
}

pub fn graded_dual_from_json(v: &Value) -> Result<GradedDual> {
    let ring = ring_field(v)?;
    let n = dim_field(v)?;
    let terms = object(field(v, "terms")?)?
        .iter()
        .map(|(k, c)| Ok((MonomialKey::parse_key(n, k)?, elem_from_json(&ring, c)?)))
        .collect::<Result<Vec<_>>>()?;
    GradedDual::from_terms(ring, n, terms)
}

/// Tensor keys are `left|right`.
pub fn tensor_to_json(t: &TensorElement) -> Value {
    let terms: Map<String, Value> = t
        .terms()
        .iter()
        .map(|((l, r), c)| (format!("{}|{}", l.key(), r.key()), elem_to_json(t.ring(), c)))
        .collect();
    json!({
        "ring": t.ring().to_string(),
        "D1": index_to_json(t.left()),
        "D2": index_to_json(t.right()),
        "terms": terms,
    })
}

pub fn tensor_from_json(v: &Value) -> Result<TensorElement> {
    let ring = ring_field(v)?;
    let left_json = field(v, "D1")?;
    let n = left_json.as_array().map(Vec::len).ok_or_else(|| schema("D1 must be an index"))?;
    let left = index_from_json(n, left_json)?;
    let right = index_from_json(n, field(v, "D2")?)?;
    let terms = object(field(v, "terms")?)?
        .iter()
        .map(|(k, c)| {
            let (l, r) = k.split_once('|').ok_or_else(|| schema(format!("bad tensor key {k:?}")))?;
            Ok(((MonomialKey::parse_key(n, l)?, MonomialKey::parse_key(n, r)?), elem_from_json(&ring, c)?))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    TensorElement::new(ring, left, right, terms)
}

pub fn cexpr_to_json(e: &CExpression) -> Value {
    let terms: Map<String, Value> =
        e.terms().iter().map(|(m, c)| (CExpression::monomial_key(m), elem_to_json(e.ring(), c))).collect();
    json!({"ring": e.ring().to_string(), "n": e.dim(), "terms": terms})
}

/// `n` may be omitted when some term names a generator.
pub fn cexpr_from_json(v: &Value) -> Result<CExpression> {
    let ring = ring_field(v)?;
    let terms_json = object(field(v, "terms")?)?;
    let n = match object(v)?.get("n") {
        Some(n) => count(n, "n")? as usize,
        None => terms_json
            .keys()
            .find_map(|k| k.split_once('(').and_then(|(_, rest)| rest.split_once(')')).map(|(i, _)| i.split(',').count()))
            .ok_or_else(|| schema("cannot infer n from an expression without generators"))?,
    };
    let terms = terms_json
        .iter()
        .map(|(k, c)| Ok((CExpression::parse_monomial_key(n, k)?, elem_from_json(&ring, c)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    CExpression::new(ring, n, terms)
}

pub fn remark_to_json(r: &RemarkReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "monomial": CExpression::monomial_key(&row.monomial),
                "expansion": dual_terms_json(&r.ring, row.expansion.terms()),
            })
        })
        .collect();
    let matrix: Vec<Value> =
        r.matrix.iter().map(|row| Value::Array(row.iter().map(|x| Value::String(x.to_string())).collect())).collect();
    json!({
        "ring": r.ring.to_string(),
        "D": index_to_json(&r.multidegree),
        "columns": r.columns.iter().map(MonomialKey::key).collect::<Vec<_>>(),
        "rows": rows,
        "matrix": matrix,
        "determinant": r.determinant.to_string(),
        "rank": r.rank,
        "dimension": r.dimension,
        "member": r.member,
        "lines": r.lines(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witt_vector_example_round_trips() {
        let text = r#"{"ring":"Z/4","n":2,"S":[[1,0],[0,1],[1,1]],"coords":{"1,0":"3","0,1":"0","1,1":"2"}}"#;
        let w = witt_from_json(&parse(text).unwrap()).unwrap();
        let out = to_canonical_string(&witt_to_json(&w));
        assert_eq!(out, r#"{"S":[[0,1],[1,0],[1,1]],"coords":{"0,1":"0","1,0":"3","1,1":"2"},"n":2,"ring":"Z/4"}"#);
        assert_eq!(witt_from_json(&parse(&out).unwrap()).unwrap(), w);
    }

    #[test]
    fn table_example() {
        let set = Arc::new(TruncationSet::new(1, [MultiIndex::from([1]), MultiIndex::from([2])]).unwrap());
        let t = UniversalPolyTable::compute(&set, Op::Add).unwrap();
        let v = table_to_json(&t);
        assert_eq!(v["polys"]["2"], "x_2 + y_2 - x_1*y_1");
        assert_eq!(table_from_json(&v).unwrap(), t);
    }

    #[test]
    fn series_example() {
        let text = r#"{"ring":"Z","n":2,"window":{"kind":"degree","d":4},"coeffs":{"0,0":"1","1,0":"-1"}}"#;
        let s = series_from_json(&parse(text).unwrap()).unwrap();
        assert_eq!(to_canonical_string(&series_to_json(&s)), r#"{"coeffs":{"0,0":"1","1,0":"-1"},"n":2,"ring":"Z","window":{"d":4,"kind":"degree"}}"#);
        let f = s.factorize();
        assert_eq!(factor_from_json(&factor_to_json(&f)).unwrap(), f);
        assert!(factor_to_json(&f)["a"].get("0,0").is_none());
    }

    #[test]
    fn window_shapes_round_trip() {
        for text in [r#"{"kind":"box","B":[2,1]}"#, r#"{"kind":"set","members":[[1,0],[2,0],[0,1]]}"#] {
            let w = window_from_json(2, &parse(text).unwrap()).unwrap();
            assert_eq!(window_from_json(2, &window_to_json(&w)).unwrap(), w);
        }
        assert!(window_from_json(2, &parse(r#"{"kind":"set","members":[[2,0]]}"#).unwrap()).is_err());
    }

    #[test]
    fn dual_examples() {
        let text = r#"{"ring":"Q","D":[1,1,1],"terms":{"(1,1,0)+(0,0,1)":"1"}}"#;
        let x = dual_from_json(&parse(text).unwrap()).unwrap();
        assert_eq!(to_canonical_string(&dual_to_json(&x)), r#"{"D":[1,1,1],"ring":"Q","terms":{"(1,1,0)+(0,0,1)":"1"}}"#);

        let text = r#"{"ring":"Z","terms":{"C(1)^2":"1","C(2)":"-2"}}"#;
        let e = cexpr_from_json(&parse(text).unwrap()).unwrap();
        assert_eq!(e.dim(), 1);
        assert_eq!(cexpr_from_json(&cexpr_to_json(&e)).unwrap(), e);
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(witt_from_json(&json!({"ring": "Z"})), Err(WittError::Parse(_))));
        assert!(matches!(parse("{"), Err(WittError::Parse(_))));
        let bad_n = json!({"ring": "Z", "n": 0, "S": [], "coords": {}});
        assert!(witt_from_json(&bad_n).is_err());
    }
}
