//! Truncated power series `1 + sum b_I t^I` on a window, and the bijection with
//! the product form `prod_{I != 0} (1 - a_I t^I)`.
//!
//! The `a_I` are Witt coordinates: multiplying two series adds the
//! corresponding Witt vectors. Over a Q-algebra the logarithm makes this
//! explicit, since `-gcd(I)` times the `t^I` coefficient of
//! `log prod (1 - a_J t^J)` is the ghost component `w_I(a)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Result, WittError};
use crate::index::{gcd_of, MultiIndex, Window};
use crate::par;
use crate::ring::{Elem, Ring};
use crate::witt::{GhostVector, WittVector};

/// `(f g)_I = sum_{0 <= J <= I} f_J g_{I-J}`, truncated to the window.
fn convolve(ring: &Ring, window: &Window, f: &[Elem], g: &[Elem]) -> Vec<Elem> {
    let members = window.members();
    par::map_range(members.len(), |i| {
        let target = &members[i];
        let mut acc = ring.zero();
        for (j, jdx) in members.iter().enumerate().take(i + 1) {
            if ring.is_zero(&f[j]) {
                continue;
            }
            if let Some(rest) = target.checked_sub(jdx) {
                let k = window.position(&rest).expect("window is downward closed");
                if !ring.is_zero(&g[k]) {
                    acc = ring.add(&acc, &ring.mul(&f[j], &g[k]));
                }
            }
        }
        acc
    })
}

fn check_same(ring: &Ring, window: &Arc<Window>, other_ring: &Ring, other_window: &Arc<Window>) -> Result<()> {
    if ring != other_ring {
        return Err(WittError::RingMismatch { left: ring.to_string(), right: other_ring.to_string() });
    }
    if !Arc::ptr_eq(window, other_window) && **window != **other_window {
        return Err(WittError::SetMismatch);
    }
    Ok(())
}

fn coeff_map(ring: &Ring, window: &Window, mut coeffs: BTreeMap<MultiIndex, Elem>) -> Result<Vec<Elem>> {
    let out = window.members().iter().map(|i| coeffs.remove(i).unwrap_or_else(|| ring.zero())).collect();
    if let Some(extra) = coeffs.keys().next() {
        return Err(WittError::IndexNotInSet { index: extra.clone() });
    }
    Ok(out)
}

/// A power series with constant term 1, truncated to a window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncatedSeries {
    ring: Ring,
    window: Arc<Window>,
    coeffs: Vec<Elem>,
}

/// A series with arbitrary constant term. Produced only by [`TruncatedSeries::log`]
/// and consumed only by [`UnnormalizedSeries::exp`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnnormalizedSeries {
    ring: Ring,
    window: Arc<Window>,
    coeffs: Vec<Elem>,
}

/// The coordinates `a_I` of `prod_{I in W - 0} (1 - a_I t^I)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FactorForm {
    ring: Ring,
    window: Arc<Window>,
    /// Indexed like `window.members()[1..]`.
    a: Vec<Elem>,
}

impl TruncatedSeries {
    /// `coeffs` follow `window.members()`; the first must be 1.
    pub fn new(ring: Ring, window: Arc<Window>, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() != window.len() {
            return Err(WittError::DimensionMismatch { expected: window.len(), got: coeffs.len() });
        }
        if !ring.is_one(&coeffs[0]) {
            return Err(WittError::ConstantTerm { expected: "1" });
        }
        if coeffs.iter().any(|c| !ring.contains(c)) {
            return Err(WittError::parse(format!("coefficient outside {ring}")));
        }
        Ok(TruncatedSeries { ring, window, coeffs })
    }

    /// Missing indices are zero; the zero index defaults to 1.
    pub fn from_map(ring: Ring, window: Arc<Window>, mut coeffs: BTreeMap<MultiIndex, Elem>) -> Result<Self> {
        coeffs.entry(MultiIndex::zero(window.dim())).or_insert_with(|| ring.one());
        let v = coeff_map(&ring, &window, coeffs)?;
        Self::new(ring, window, v)
    }

    pub fn one(ring: Ring, window: Arc<Window>) -> Self {
        let mut coeffs = vec![ring.zero(); window.len()];
        coeffs[0] = ring.one();
        TruncatedSeries { ring, window, coeffs }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, index: &MultiIndex) -> Option<&Elem> {
        self.window.position(index).map(|p| &self.coeffs[p])
    }

    pub fn mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries> {
        check_same(&self.ring, &self.window, &other.ring, &other.window)?;
        Ok(TruncatedSeries {
            ring: self.ring.clone(),
            window: self.window.clone(),
            coeffs: convolve(&self.ring, &self.window, &self.coeffs, &other.coeffs),
        })
    }

    /// Multiplicative inverse, computed by the triangular recursion
    /// `g_I = -sum_{0 < J <= I} f_J g_{I-J}`.
    pub fn inv(&self) -> TruncatedSeries {
        let ring = &self.ring;
        let members = self.window.members();
        let mut g: Vec<Elem> = Vec::with_capacity(members.len());
        g.push(ring.one());
        for (i, target) in members.iter().enumerate().skip(1) {
            let mut acc = ring.zero();
            for (j, jdx) in members.iter().enumerate().take(i + 1).skip(1) {
                if ring.is_zero(&self.coeffs[j]) {
                    continue;
                }
                if let Some(rest) = target.checked_sub(jdx) {
                    let k = self.window.position(&rest).expect("downward closed");
                    acc = ring.add(&acc, &ring.mul(&self.coeffs[j], &g[k]));
                }
            }
            g.push(ring.neg(&acc));
        }
        TruncatedSeries { ring: ring.clone(), window: self.window.clone(), coeffs: g }
    }

    /// `log f = sum_{k >= 1} (-1)^{k+1} u^k / k` with `u = f - 1`.
    pub fn log(&self) -> Result<UnnormalizedSeries> {
        self.ring.require_q_algebra()?;
        let ring = &self.ring;
        let mut u = self.coeffs.clone();
        u[0] = ring.zero();
        let mut power = u.clone();
        let mut acc = vec![ring.zero(); u.len()];
        for k in 1..=self.window.max_degree() {
            let scale = ring.from_rational(&num_rational::BigRational::new(
                if k % 2 == 1 { 1.into() } else { (-1).into() },
                k.into(),
            ))?;
            for (a, p) in acc.iter_mut().zip(&power) {
                *a = ring.add(a, &ring.mul(p, &scale));
            }
            power = convolve(ring, &self.window, &power, &u);
        }
        Ok(UnnormalizedSeries { ring: ring.clone(), window: self.window.clone(), coeffs: acc })
    }

    /// Unique `a` with `expand(a) = self`.
    ///
    /// Works degree by degree: with `P` the product of the factors already
    /// fixed, `a_I = P_I - f_I` for every `I` of the current degree `d`, since
    /// factors of degree `d` do not interact below degree `2d`. Division free,
    /// so valid over every ring.
    pub fn factorize(&self) -> FactorForm {
        let ring = &self.ring;
        let window = &self.window;
        let members = window.members();
        let mut product = TruncatedSeries::one(ring.clone(), window.clone()).coeffs;
        let mut a = vec![ring.zero(); members.len() - 1];
        let mut start = 1;
        while start < members.len() {
            let d = members[start].degree();
            let end = members[start..].iter().position(|m| m.degree() != d).map_or(members.len(), |p| start + p);
            for pos in start..end {
                a[pos - 1] = ring.sub(&product[pos], &self.coeffs[pos]);
            }
            for pos in start..end {
                multiply_by_factor(ring, window, &mut product, pos, &a[pos - 1]);
            }
            start = end;
        }
        FactorForm { ring: ring.clone(), window: window.clone(), a }
    }
}

/// `h <- h * (1 - a t^{I})` for `I = members[pos]`, in place.
fn multiply_by_factor(ring: &Ring, window: &Window, h: &mut [Elem], pos: usize, a: &Elem) {
    if ring.is_zero(a) {
        return;
    }
    let members = window.members();
    let step = &members[pos];
    // Descending order reads each h_{K-I} before it is overwritten.
    for k in (pos..members.len()).rev() {
        if let Some(rest) = members[k].checked_sub(step) {
            let src = window.position(&rest).expect("downward closed");
            if !ring.is_zero(&h[src]) {
                h[k] = ring.sub(&h[k], &ring.mul(a, &h[src]));
            }
        }
    }
}

impl UnnormalizedSeries {
    pub fn new(ring: Ring, window: Arc<Window>, coeffs: Vec<Elem>) -> Result<Self> {
        if coeffs.len() != window.len() {
            return Err(WittError::DimensionMismatch { expected: window.len(), got: coeffs.len() });
        }
        if coeffs.iter().any(|c| !ring.contains(c)) {
            return Err(WittError::parse(format!("coefficient outside {ring}")));
        }
        Ok(UnnormalizedSeries { ring, window, coeffs })
    }

    pub fn from_map(ring: Ring, window: Arc<Window>, coeffs: BTreeMap<MultiIndex, Elem>) -> Result<Self> {
        let v = coeff_map(&ring, &window, coeffs)?;
        Self::new(ring, window, v)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, index: &MultiIndex) -> Option<&Elem> {
        self.window.position(index).map(|p| &self.coeffs[p])
    }

    pub fn add(&self, other: &UnnormalizedSeries) -> Result<UnnormalizedSeries> {
        check_same(&self.ring, &self.window, &other.ring, &other.window)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| self.ring.add(a, b)).collect();
        Ok(UnnormalizedSeries { ring: self.ring.clone(), window: self.window.clone(), coeffs })
    }

    /// `exp g = sum_k g^k / k!`; `g` must have constant term 0.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        let ring = &self.ring;
        ring.require_q_algebra()?;
        if !ring.is_zero(&self.coeffs[0]) {
            return Err(WittError::ConstantTerm { expected: "0" });
        }
        let mut term = TruncatedSeries::one(ring.clone(), self.window.clone()).coeffs;
        let mut acc = term.clone();
        for k in 1..=self.window.max_degree() {
            term = convolve(ring, &self.window, &term, &self.coeffs);
            let inv_k = ring.from_rational(&num_rational::BigRational::new(1.into(), k.into()))?;
            term.iter_mut().for_each(|c| *c = ring.mul(c, &inv_k));
            for (a, t) in acc.iter_mut().zip(&term) {
                *a = ring.add(a, t);
            }
        }
        TruncatedSeries::new(ring.clone(), self.window.clone(), acc)
    }
}

impl FactorForm {
    /// `a` follows `window.members()[1..]`.
    pub fn new(ring: Ring, window: Arc<Window>, a: Vec<Elem>) -> Result<Self> {
        if a.len() + 1 != window.len() {
            return Err(WittError::DimensionMismatch { expected: window.len() - 1, got: a.len() });
        }
        if a.iter().any(|c| !ring.contains(c)) {
            return Err(WittError::parse(format!("coefficient outside {ring}")));
        }
        Ok(FactorForm { ring, window, a })
    }

    pub fn from_map(ring: Ring, window: Arc<Window>, mut a: BTreeMap<MultiIndex, Elem>) -> Result<Self> {
        if let Some(zero) = a.keys().find(|k| k.is_zero()) {
            return Err(WittError::ZeroIndex(zero.clone()));
        }
        a.insert(MultiIndex::zero(window.dim()), ring.zero());
        let mut v = coeff_map(&ring, &window, a)?;
        v.remove(0);
        Self::new(ring, window, v)
    }

    /// Read a Witt vector on `W - 0` as factor coordinates.
    pub fn from_witt(w: &WittVector) -> Result<Self> {
        let window = Window::from_truncation_set(w.set())?;
        Self::new(w.ring().clone(), window, w.coords().to_vec())
    }

    pub fn to_witt(&self) -> WittVector {
        let set = Arc::new(self.window.truncation_set());
        WittVector::new(self.ring.clone(), set, self.a.clone()).expect("same shape")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn coords(&self) -> &[Elem] {
        &self.a
    }

    pub fn coord(&self, index: &MultiIndex) -> Option<&Elem> {
        self.window.position(index).filter(|&p| p > 0).map(|p| &self.a[p - 1])
    }

    /// `prod_{I in W - 0} (1 - a_I t^I)`, factors taken in graded-lex order.
    pub fn expand(&self) -> TruncatedSeries {
        let mut h = TruncatedSeries::one(self.ring.clone(), self.window.clone()).coeffs;
        for (p, a) in self.a.iter().enumerate() {
            multiply_by_factor(&self.ring, &self.window, &mut h, p + 1, a);
        }
        TruncatedSeries { ring: self.ring.clone(), window: self.window.clone(), coeffs: h }
    }

    /// `w_I = -gcd(I) * [t^I] log expand(a)`.
    pub fn ghost_from_log(&self) -> Result<GhostVector> {
        self.ring.require_q_algebra()?;
        let log = self.expand().log()?;
        let set = Arc::new(self.window.truncation_set());
        let ghost = set
            .members()
            .iter()
            .zip(&log.coeffs[1..])
            .map(|(i, c)| self.ring.mul_int(c, -(gcd_of(i) as i64)))
            .collect();
        GhostVector::new(self.ring.clone(), set, ghost)
    }
}

/// `expand(u + v) = expand(u) * expand(v)`, with `+` the Witt sum.
pub fn witt_series_iso_check(u: &WittVector, v: &WittVector) -> Result<bool> {
    let sum = u.add(v)?;
    let lhs = FactorForm::from_witt(&sum)?.expand();
    let rhs = FactorForm::from_witt(u)?.expand().mul(&FactorForm::from_witt(v)?.expand())?;
    Ok(lhs == rhs)
}
