//! Sparse multivariate polynomials over the rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Exponent`], whose ordering is
//! graded lexicographic. Iteration (and therefore every serialized form) is
//! deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{self, Scalar};

/// Exponent multi-index, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(pub Vec<u32>);

impl Exponent {
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other` when `other` divides `self`.
    pub fn checked_sub(&self, other: &Exponent) -> Option<Exponent> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// All multi-indices `g` with `g <= self` componentwise.
    pub fn sub_indices(&self) -> Vec<Exponent> {
        let mut out = vec![Vec::with_capacity(self.len())];
        for &e in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for prefix in &out {
                for k in 0..=e {
                    let mut p = prefix.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(Exponent).collect()
    }

    /// Product of binomial coefficients `C(self_i, g_i)`.
    pub fn binomial(&self, g: &Exponent) -> Scalar {
        let mut acc = num_bigint::BigInt::one();
        for (a, b) in self.0.iter().zip(&g.0) {
            acc *= scalar::binomial(*a, *b);
        }
        Scalar::from_integer(acc)
    }

    /// Every exponent vector in `n` variables of total degree exactly `d`,
    /// in increasing graded-lex order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Exponent> {
        fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Exponent>) {
            if n == 1 {
                prefix.push(d);
                out.push(Exponent(prefix.clone()));
                prefix.pop();
                return;
            }
            for k in 0..=d {
                prefix.push(k);
                rec(n - 1, d - k, prefix, out);
                prefix.pop();
            }
        }
        if n == 0 {
            return if d == 0 {
                vec![Exponent(vec![])]
            } else {
                vec![]
            };
        }
        let mut out = Vec::new();
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
        out.sort();
        out
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `nvars` variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponent, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::monomial(Exponent::zero(nvars), c)
    }

    /// The variable `x_i` (zero-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(
            i < nvars,
            "variable index {i} out of range for {nvars} variables"
        );
        Self::monomial(Exponent::unit(nvars, i), Scalar::one())
    }

    pub fn monomial(exp: Exponent, c: Scalar) -> Self {
        let nvars = exp.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exponent, Scalar> {
        self.terms
    }

    pub fn coeff(&self, e: &Exponent) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Exponent::zero(self.nvars))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponent::is_zero)
    }

    /// Adds `c * x^e` in place.
    pub fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    /// Largest total degree present, `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponent::degree).max()
    }

    /// Smallest total degree present (`ord_M`), `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(Exponent::degree)
    }

    /// Largest term in graded-lex order.
    pub fn leading_term(&self) -> Option<(&Exponent, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Exponent::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Sum of the terms of total degree exactly `d`.
    pub fn homogeneous_part(&self, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops every term of total degree `>= n`.
    pub fn truncate(&self, n: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() < n)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by the monomial `x^e`.
    pub fn shift(&self, e: &Exponent) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.add(e), v.clone()))
                .collect(),
        }
    }

    /// Product with every term of total degree `>= bound` discarded.
    pub fn mul_truncated(&self, other: &Poly, bound: Option<u32>) -> Poly {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch in product");
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            let da = ea.degree();
            if bound.is_some_and(|b| da >= b) {
                // terms are sorted by degree
                break;
            }
            for (eb, cb) in &other.terms {
                if bound.is_some_and(|b| da + eb.degree() >= b) {
                    break;
                }
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.0[i];
            if k == 0 {
                continue;
            }
            let mut f = e.clone();
            f.0[i] -= 1;
            out.add_term(f, c * Scalar::from_integer(k.into()));
        }
        out
    }

    /// Mixed partial derivative `d^g`.
    pub fn derivative_multi(&self, g: &Exponent) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if let Some(rest) = e.checked_sub(g) {
                let mut factor = num_bigint::BigInt::one();
                for (a, b) in e.0.iter().zip(&g.0) {
                    for t in 0..*b {
                        factor *= num_bigint::BigInt::from(a - t);
                    }
                }
                out.add_term(rest, c * Scalar::from_integer(factor));
            }
        }
        out
    }

    /// Sets the listed variables to zero.
    pub fn set_zero(&self, vars: &[usize]) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|&v| e.0[v] == 0))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, k) in point.iter().zip(&e.0) {
                for _ in 0..*k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    ///
    /// A single polynomial is a Gröbner basis of the ideal it generates, so
    /// the division algorithm leaves remainder zero exactly on multiples.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert_eq!(self.nvars, d.nvars);
        let (ld, lc) = d.leading_term()?;
        let (ld, lc) = (ld.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((le, c)) = rem.leading_term() {
            let shift = le.checked_sub(&ld)?;
            let q = c / &lc;
            let step = d.shift(&shift).scale(&q);
            quot.add_term(shift, q);
            rem = &rem - &step;
        }
        Some(quot)
    }

    /// Rescales so the leading coefficient is one.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&(Scalar::one() / c)),
            None => self.clone(),
        }
    }

    /// Renders with the given variable names.
    pub fn fmt_with(&self, names: &[&str]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = scalar::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> =
                e.0.iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| {
                        let name = names.get(i).copied().unwrap_or("?");
                        if k == 1 {
                            name.to_string()
                        } else {
                            format!("{name}^{k}")
                        }
                    })
                    .collect();
            if mono.is_empty() {
                out.push_str(&scalar::fmt_scalar(&abs));
            } else if abs.is_one() {
                out.push_str(&mono.join("*"));
            } else {
                out.push_str(&format!("{}*{}", scalar::fmt_scalar(&abs), mono.join("*")));
            }
        }
        out
    }

    /// Default names `x1, x2, …`.
    pub fn default_names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = Poly::default_names("x", self.nvars);
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.fmt_with(&refs))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in sum");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in difference");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.mul_truncated(rhs, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn x(i: usize) -> Poly {
        Poly::var(2, i)
    }

    #[test]
    fn graded_lex_order() {
        let a = Exponent(vec![0, 2]);
        let b = Exponent(vec![1, 1]);
        let c = Exponent(vec![3, 0]);
        assert!(a < b && b < c);
        assert!(Exponent(vec![1, 0]) > Exponent(vec![0, 1]));
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = &x(0) + &x(1);
        let q = &x(0) - &x(1);
        let prod = &p * &q;
        assert_eq!(prod, &x(0).pow(2) - &x(1).pow(2));
        assert!((&prod - &prod).is_zero());
    }

    #[test]
    fn derivative_and_exact_division() {
        let p = &x(0).pow(3) * &x(1);
        assert_eq!(p.derivative(0), (&x(0).pow(2) * &x(1)).scale(&int(3)));
        let q = &(&x(0) + &x(1)).pow(3) * &(&x(0) - &Poly::one(2));
        let d = &x(0) + &x(1);
        assert_eq!(q.div_exact(&d), Some(&d.pow(2) * &(&x(0) - &Poly::one(2))));
        assert_eq!(x(0).div_exact(&x(1)), None);
        assert_eq!((&x(0) + &Poly::one(2)).div_exact(&x(0)), None);
    }

    #[test]
    fn truncation_and_display() {
        let p = &(&Poly::one(2) + &x(0)).pow(3) * &Poly::constant(2, frac(1, 2));
        assert_eq!(p.truncate(2).total_degree(), Some(1));
        assert_eq!(x(1).scale(&frac(-1, 2)).to_string(), "-1/2*x2");
    }

    #[test]
    fn degree_enumeration() {
        let all = Exponent::all_of_degree(3, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
