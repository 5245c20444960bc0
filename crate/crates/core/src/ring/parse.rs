// Text forms: ring specs and element renderings.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Elem, Monomial, Poly, Ring};
use crate::error::{Result, WittError};

pub(super) fn parse_ring(spec: &str) -> Result<Ring> {
    let spec = spec.trim();
    if let Some(open) = spec.find('[') {
        let inner = spec[open + 1..]
            .strip_suffix(']')
            .ok_or_else(|| WittError::parse(format!("malformed ring spec {spec:?}")))?;
        let base = parse_scalar_ring(&spec[..open])?;
        let vars: Vec<String> = inner.split(',').map(|v| v.trim().to_string()).collect();
        for v in &vars {
            let mut chars = v.chars();
            let ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic())
                && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(WittError::parse(format!("bad variable name {v:?}")));
            }
        }
        return Ring::polynomial(base, vars);
    }
    parse_scalar_ring(spec)
}

fn parse_scalar_ring(spec: &str) -> Result<Ring> {
    match spec.trim() {
        "Z" => Ok(Ring::integers()),
        "Q" => Ok(Ring::rationals()),
        s => {
            let m = s
                .strip_prefix("Z/")
                .and_then(|m| m.parse::<u64>().ok())
                .ok_or_else(|| WittError::parse(format!("malformed ring spec {spec:?}")))?;
            Ring::modular(m)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Tok::Num(digits.parse().expect("digits")));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == ',') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(WittError::parse(format!("unexpected character {c:?} in {s:?}"))),
        }
    }
    Ok(out)
}

struct ElemParser<'a> {
    ring: &'a Ring,
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl ElemParser<'_> {
    fn err(&self) -> WittError {
        WittError::parse(format!("cannot parse {:?} as an element of {}", self.src, self.ring))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Elem> {
        let r = self.ring;
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { r.neg(&first) } else { first };
        while let Some(t) = self.peek().cloned() {
            self.pos += 1;
            let term = self.term()?;
            acc = match t {
                Tok::Plus => r.add(&acc, &term),
                Tok::Minus => r.sub(&acc, &term),
                _ => return Err(self.err()),
            };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.factor()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Elem> {
        let r = self.ring;
        match self.next() {
            Some(Tok::Num(n)) => {
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let Some(Tok::Num(d)) = self.next() else { return Err(self.err()) };
                    if d == BigInt::from(0) {
                        return Err(self.err());
                    }
                    r.from_rational(&BigRational::new(n, d)).map_err(|_| self.err())
                } else {
                    Ok(r.from_int(&n))
                }
            }
            Some(Tok::Ident(name)) => {
                let i = r.variables().iter().position(|v| *v == name).ok_or_else(|| self.err())?;
                let v = r.var(i)?;
                if self.peek() == Some(&Tok::Caret) {
                    self.pos += 1;
                    let Some(Tok::Num(e)) = self.next() else { return Err(self.err()) };
                    let e: u32 = e.try_into().map_err(|_| self.err())?;
                    Ok(r.pow(&v, e))
                } else {
                    Ok(v)
                }
            }
            _ => Err(self.err()),
        }
    }
}

pub(super) fn parse_elem(ring: &Ring, s: &str) -> Result<Elem> {
    let toks = tokenize(s)?;
    let mut p = ElemParser { ring, toks, pos: 0, src: s };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err());
    }
    Ok(e)
}

fn render_scalar(a: &Elem) -> String {
    match a {
        Elem::Int(x) => x.to_string(),
        Elem::Rat(x) => {
            if x.is_integer() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        }
        Elem::Res(x) => x.to_string(),
        Elem::Poly(_) => unreachable!("polynomial coefficients are scalars"),
    }
}

fn render_monomial(vars: &[String], m: &Monomial) -> String {
    m.pairs()
        .iter()
        .map(|&(v, e)| {
            let name = &vars[v as usize];
            if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Render a polynomial whose coefficients lie in `base`, with the given
/// variable names.
pub(crate) fn render_poly(base: &Ring, vars: &[String], p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = base.is_negative(c);
        let abs = if neg { base.neg(c) } else { c.clone() };
        let body = if m.is_one() {
            render_scalar(&abs)
        } else if base.is_one(&abs) {
            render_monomial(vars, m)
        } else {
            format!("{}*{}", render_scalar(&abs), render_monomial(vars, m))
        };
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

pub(super) fn render(ring: &Ring, a: &Elem) -> String {
    match a {
        Elem::Poly(p) => render_poly(ring.scalars(), ring.variables(), p),
        _ => render_scalar(a),
    }
}
