//! Symbols in `k[[x]][xi]` and the Poisson bracket.

use std::collections::BTreeMap;
use std::fmt;

use super::{DiffOp, OrderKind, Precision};
use crate::error::Result;
use crate::poly::{Exponent, Poly};
use crate::scalar::Scalar;

/// Polynomial in `xi` whose coefficients are series in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPoly {
    nvars: usize,
    terms: BTreeMap<Exponent, Poly>,
    degree: Option<u32>,
    precision: Precision,
}

impl SymbolPoly {
    pub fn new<I>(nvars: usize, terms: I, degree: Option<u32>, precision: Precision) -> Self
    where
        I: IntoIterator<Item = (Exponent, Poly)>,
    {
        let mut map: BTreeMap<Exponent, Poly> = BTreeMap::new();
        for (e, c) in terms {
            let c = match precision.bound() {
                Some(n) => c.truncate(n),
                None => c,
            };
            if c.is_zero() {
                continue;
            }
            let slot = map.entry(e.clone()).or_insert_with(|| Poly::zero(nvars));
            *slot = &*slot + &c;
            if slot.is_zero() {
                map.remove(&e);
            }
        }
        SymbolPoly {
            nvars,
            terms: map,
            degree,
            precision,
        }
    }

    /// A symbol with constant coefficients, from a polynomial in `xi`.
    pub fn from_constant(p: &Poly, degree: Option<u32>) -> Self {
        let n = p.nvars();
        Self::new(
            n,
            p.terms()
                .map(|(e, c)| (e.clone(), Poly::constant(n, c.clone()))),
            degree,
            Precision::Exact,
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> Option<u32> {
        self.degree
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Poly)> {
        self.terms.iter()
    }

    /// True when no coefficient depends on `x`.
    pub fn is_constant(&self) -> bool {
        self.terms.values().all(Poly::is_constant)
    }

    pub fn with_precision(&self, n: u32) -> Self {
        Self::new(
            self.nvars,
            self.terms.clone(),
            self.degree,
            self.precision.min(Precision::Trunc(n)),
        )
    }

    /// Equality of the parts both sides know.
    pub fn agrees_with(&self, other: &SymbolPoly) -> bool {
        match self.precision.min(other.precision).bound() {
            Some(n) => self.with_precision(n).terms == other.with_precision(n).terms,
            None => self.terms == other.terms,
        }
    }

    pub fn sub(&self, other: &SymbolPoly) -> SymbolPoly {
        Self::new(
            self.nvars,
            self.terms
                .iter()
                .map(|(e, c)| (e.clone(), c.clone()))
                .chain(other.terms.iter().map(|(e, c)| (e.clone(), -c))),
            self.degree.or(other.degree),
            self.precision.min(other.precision),
        )
    }

    fn xi_derivative(&self, v: usize) -> BTreeMap<Exponent, Poly> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let k = e.0[v];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f.0[v] -= 1;
            out.insert(f, c.scale(&Scalar::from_integer(k.into())));
        }
        out
    }

    fn x_derivative(&self, v: usize) -> BTreeMap<Exponent, Poly> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), c.derivative(v)))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

fn product(
    nvars: usize,
    a: &BTreeMap<Exponent, Poly>,
    b: &BTreeMap<Exponent, Poly>,
    bound: Option<u32>,
) -> Vec<(Exponent, Poly)> {
    let mut out = Vec::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let c = ca.mul_truncated(cb, bound);
            if !c.is_zero() {
                out.push((ea.add(eb), c));
            }
        }
    }
    debug_assert!(out.iter().all(|(e, _)| e.len() == nvars));
    out
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let xnames = Poly::default_names("x", self.nvars);
        let xrefs: Vec<&str> = xnames.iter().map(String::as_str).collect();
        let names = Poly::default_names("xi", self.nvars);
        let nrefs: Vec<&str> = names.iter().map(String::as_str).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = Poly::monomial(e.clone(), Scalar::from_integer(1.into()));
                let m = mono.fmt_with(&nrefs);
                if c.is_constant() {
                    mono.scale(&c.constant_term()).fmt_with(&nrefs)
                } else if e.is_zero() {
                    format!("({})", c.fmt_with(&xrefs))
                } else {
                    format!("({})*{m}", c.fmt_with(&xrefs))
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Top-order part of `P` with `d_i` replaced by `xi_i`.
pub fn principal_symbol(p: &DiffOp) -> Result<SymbolPoly> {
    let m = p.order(OrderKind::Raw)?;
    Ok(SymbolPoly::new(
        p.nvars(),
        p.terms()
            .filter(|(a, _)| a.degree() == m)
            .map(|(a, c)| (a.clone(), c.clone())),
        Some(m),
        p.precision(),
    ))
}

/// Image in `k[xi]` after setting `x = 0`.
pub fn symbol_image(s: &SymbolPoly) -> Poly {
    Poly::from_terms(
        s.nvars,
        s.terms.iter().map(|(e, c)| (e.clone(), c.constant_term())),
    )
}

/// `{s, r} = sum_v ds/dxi_v * d_{x_v} r - dr/dxi_v * d_{x_v} s`.
pub fn poisson_bracket(s: &SymbolPoly, r: &SymbolPoly) -> SymbolPoly {
    assert_eq!(s.nvars, r.nvars, "nvars mismatch in bracket");
    let n = s.nvars;
    let precision = s.precision.min(r.precision);
    let precision = match precision {
        Precision::Trunc(k) => Precision::Trunc(k.saturating_sub(1)),
        p => p,
    };
    let bound = precision.bound();
    let mut terms = Vec::new();
    for v in 0..n {
        terms.extend(product(n, &s.xi_derivative(v), &r.x_derivative(v), bound));
        for (e, c) in product(n, &r.xi_derivative(v), &s.x_derivative(v), bound) {
            terms.push((e, -&c));
        }
    }
    let degree = match (s.degree, r.degree) {
        (Some(i), Some(j)) if i + j >= 1 => Some(i + j - 1),
        _ => None,
    };
    let out = SymbolPoly::new(n, terms, degree, precision);
    debug_assert!(out
        .terms
        .keys()
        .all(|e| degree.is_none_or(|d| e.degree() == d)));
    out
}
