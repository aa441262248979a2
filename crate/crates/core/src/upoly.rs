//! Dense univariate polynomials over the rationals, and gcds of bivariate
//! polynomials through them.

use num_traits::{One, Zero};

use crate::poly::{Exponent, Poly};
use crate::scalar::Scalar;

/// Coefficients in increasing degree, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly(Vec<Scalar>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn one() -> Self {
        UPoly(vec![Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.0.last()
    }

    pub fn monic(&self) -> UPoly {
        match self.lead() {
            Some(l) => {
                let inv = l.recip();
                UPoly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new(
            (0..n)
                .map(|i| {
                    let a = self.0.get(i).cloned().unwrap_or_else(Scalar::zero);
                    let b = o.0.get(i).cloned().unwrap_or_else(Scalar::zero);
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead().expect("nonzero").clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Scalar::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1;
            let c = &rem[k] / &lead;
            if !c.is_zero() {
                for (i, x) in d.0.iter().enumerate() {
                    rem[k - dd + i] -= &c * x;
                }
                quot[k - dd] = c;
            }
            rem.pop();
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Exact quotient, or `None`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.0
            .iter()
            .rev()
            .fold(Scalar::zero(), |acc, c| acc * x + c)
    }
}

/// View of a polynomial in two variables as a polynomial in `var` with
/// coefficients in the other variable.
fn split(p: &Poly, var: usize) -> Vec<UPoly> {
    let other = 1 - var;
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (e, c) in p.terms() {
        let (i, j) = (e.0[var] as usize, e.0[other] as usize);
        if rows.len() <= i {
            rows.resize(i + 1, Vec::new());
        }
        if rows[i].len() <= j {
            rows[i].resize(j + 1, Scalar::zero());
        }
        rows[i][j] += c;
    }
    rows.into_iter().map(UPoly::new).collect()
}

fn join(rows: &[UPoly], var: usize) -> Poly {
    let other = 1 - var;
    let mut out = Poly::zero(2);
    for (i, r) in rows.iter().enumerate() {
        for (j, c) in r.coeffs().iter().enumerate() {
            let mut e = Exponent::zero(2);
            e.0[var] = i as u32;
            e.0[other] = j as u32;
            out.add_term(e, c.clone());
        }
    }
    out
}

fn trim(mut rows: Vec<UPoly>) -> Vec<UPoly> {
    while rows.last().is_some_and(UPoly::is_zero) {
        rows.pop();
    }
    rows
}

fn content(rows: &[UPoly]) -> UPoly {
    rows.iter().fold(UPoly::zero(), |g, r| g.gcd(r))
}

fn primitive(rows: &[UPoly]) -> Vec<UPoly> {
    let c = content(rows);
    if c.is_zero() {
        return Vec::new();
    }
    rows.iter()
        .map(|r| r.div_exact(&c).expect("content divides"))
        .collect()
}

/// Pseudo-remainder of `a` by `b` as polynomials in the main variable.
fn prem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut r = a.to_vec();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let lr = r[k].clone();
        // r <- lb * r - lr * x^(k - db) * b
        for x in r.iter_mut() {
            *x = x.mul(&lb);
        }
        for (i, bi) in b.iter().enumerate() {
            r[k - db + i] = r[k - db + i].sub(&lr.mul(bi));
        }
        r = trim(r);
    }
    r
}

/// gcd of two polynomials in two variables, up to a scalar factor.
///
/// Primitive pseudo-remainder sequence in `Q[y][x]`; the result is made
/// monic with respect to the graded-lex leading term.
pub fn gcd2(a: &Poly, b: &Poly) -> Poly {
    assert!(a.nvars() == 2 && b.nvars() == 2, "gcd2 needs two variables");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let (ra, rb) = (trim(split(a, 0)), trim(split(b, 0)));
    let c = content(&ra).gcd(&content(&rb));
    let (mut p, mut q) = (primitive(&ra), primitive(&rb));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = prem(&p, &q);
        p = q;
        q = primitive(&r);
    }
    let g: Vec<UPoly> = p.iter().map(|r| r.mul(&c)).collect();
    join(&g, 0).monic()
}

/// gcd of a list of bivariate polynomials.
pub fn gcd2_all<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Poly {
    let mut g = Poly::zero(2);
    for p in polys {
        g = gcd2(&g, p);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}
