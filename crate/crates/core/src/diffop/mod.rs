//! Differential operators `sum c_a(x) d^a` with power-series coefficients.
//!
//! An operator either has polynomial coefficients known exactly, or series
//! coefficients known modulo `M^N`. Truncations of elements of the completed
//! ring (infinitely many `d_1`-terms whose coefficients go deeper into `M`)
//! carry the `dhat` flag.
//!
//! Precision bookkeeping uses a weight bound. For a term `x^b d^a` the weight
//! is `|a| - |b|`; `loss` bounds the weight of every term of the operator,
//! including the unstored tail. A derivative that lands on a coefficient of
//! the right factor costs one known digit, but the left coefficient it comes
//! with supplies `ord_M` digits back, so a product loses at most `loss(P)`.

mod parse;
mod symbol;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::poly::{Exponent, Poly};
use crate::scalar::{self, Scalar};
use crate::series::TruncatedSeries;

pub use parse::{parse_operator, ParseOptions};
pub use symbol::{poisson_bracket, principal_symbol, symbol_image, SymbolPoly};

/// How much of each coefficient is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    /// Coefficients are polynomials, known exactly.
    Exact,
    /// Coefficients known modulo `M^N`.
    Trunc(u32),
}

impl Precision {
    pub fn min(self, other: Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p,
            (Precision::Trunc(a), Precision::Trunc(b)) => Precision::Trunc(a.min(b)),
        }
    }

    pub fn bound(self) -> Option<u32> {
        match self {
            Precision::Exact => None,
            Precision::Trunc(n) => Some(n),
        }
    }

    /// `self - k`, or `PrecisionExhausted` when nothing is left.
    pub fn lose(self, k: u32) -> Result<Precision> {
        match self {
            Precision::Exact => Ok(Precision::Exact),
            Precision::Trunc(n) if n > k => Ok(Precision::Trunc(n - k)),
            Precision::Trunc(_) => Err(Error::PrecisionExhausted),
        }
    }
}

/// Which notion of order to report.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderKind {
    /// Largest `|a|` among stored terms; depends on the truncation for
    /// completed-ring elements.
    Raw,
    /// For completed-ring elements, the order of the part with coefficients
    /// evaluated at `x = 0`, which does not move as `N` grows. Equal to
    /// [`OrderKind::Raw`] otherwise.
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOp {
    nvars: usize,
    terms: BTreeMap<Exponent, Poly>,
    precision: Precision,
    dhat: bool,
    loss: u32,
}

fn weight_bound<'a>(terms: impl Iterator<Item = (&'a Exponent, &'a Poly)>) -> u32 {
    terms
        .filter_map(|(a, c)| c.min_degree().map(|o| a.degree() as i64 - o as i64))
        .max()
        .unwrap_or(0)
        .max(0) as u32
}

impl DiffOp {
    /// Builds an operator, truncating coefficients and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I, precision: Precision, dhat: bool) -> Self
    where
        I: IntoIterator<Item = (Exponent, Poly)>,
    {
        let mut op = DiffOp {
            nvars,
            terms: BTreeMap::new(),
            precision,
            dhat,
            loss: 0,
        };
        for (a, c) in terms {
            assert_eq!(a.len(), nvars, "operator index length");
            assert_eq!(c.nvars(), nvars, "coefficient nvars");
            op.add_term(a, c);
        }
        op.loss = weight_bound(op.terms.iter());
        op
    }

    fn add_term(&mut self, a: Exponent, c: Poly) {
        let c = match self.precision.bound() {
            Some(n) => c.truncate(n),
            None => c,
        };
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(a.clone())
            .or_insert_with(|| Poly::zero(c.nvars()));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&a);
        }
    }

    /// Overrides the tracked loss, for operators read back from storage.
    pub(crate) fn with_loss(mut self, loss: u32) -> Self {
        self.loss = loss;
        self
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_terms(nvars, [], Precision::Exact, false)
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        Self::from_terms(
            nvars,
            [(Exponent::zero(nvars), Poly::constant(nvars, c))],
            Precision::Exact,
            false,
        )
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    /// `d^a`.
    pub fn d_monomial(a: Exponent) -> Self {
        let n = a.len();
        Self::from_terms(n, [(a, Poly::one(n))], Precision::Exact, false)
    }

    /// `d_i` (zero-based `i`).
    pub fn d(nvars: usize, i: usize) -> Self {
        Self::d_monomial(Exponent::unit(nvars, i))
    }

    /// Multiplication by the polynomial `p`.
    pub fn mult_poly(p: Poly) -> Self {
        let n = p.nvars();
        Self::from_terms(n, [(Exponent::zero(n), p)], Precision::Exact, false)
    }

    /// Multiplication by `x_i` (zero-based `i`).
    pub fn x(nvars: usize, i: usize) -> Self {
        Self::mult_poly(Poly::var(nvars, i))
    }

    /// Multiplication by a truncated series.
    pub fn mult_series(f: &TruncatedSeries) -> Self {
        let n = f.nvars();
        Self::from_terms(
            n,
            [(Exponent::zero(n), f.body().clone())],
            Precision::Trunc(f.precision()),
            false,
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_dhat(&self) -> bool {
        self.dhat
    }

    /// Upper bound on `|a| - ord_M(c_a)` over all terms, clamped at zero.
    pub fn loss(&self) -> u32 {
        self.loss
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Poly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: &Exponent) -> Poly {
        self.terms
            .get(a)
            .cloned()
            .unwrap_or_else(|| Poly::zero(self.nvars))
    }

    /// Coefficient of `d^a` as a truncated series. Exact coefficients get
    /// precision one past their degree.
    pub fn coeff_series(&self, a: &Exponent) -> TruncatedSeries {
        let c = self.coeff(a);
        let n = match self.precision.bound() {
            Some(n) => n,
            None => c.total_degree().map_or(1, |d| d + 1),
        };
        TruncatedSeries::new(c, n)
    }

    /// Zero at stored precision. For exact operators this is exact vanishing.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops information beyond `M^n`.
    pub fn with_precision(&self, n: u32) -> Self {
        let p = self.precision.min(Precision::Trunc(n));
        let mut out = Self::from_terms(self.nvars, self.terms.clone(), p, self.dhat);
        out.loss = out.loss.max(self.loss);
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::from_terms(
            self.nvars,
            self.terms.iter().map(|(a, p)| (a.clone(), p.scale(c))),
            self.precision,
            self.dhat,
        );
        out.loss = self.loss;
        out
    }

    pub fn add(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_nvars(other)?;
        let precision = self.precision.min(other.precision);
        let mut out = Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(a, c)| (a.clone(), c.clone())),
            precision,
            self.dhat || other.dhat,
        );
        out.loss = self.loss.max(other.loss);
        Ok(out)
    }

    pub fn sub(&self, other: &DiffOp) -> Result<DiffOp> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffOp {
        self.scale(&-Scalar::one())
    }

    fn check_nvars(&self, other: &DiffOp) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    /// Precision of `self * other`.
    pub fn product_precision(&self, other: &DiffOp) -> Result<Precision> {
        Ok(self.precision.min(other.precision.lose(self.loss)?))
    }

    /// Leibniz product.
    pub fn mul(&self, other: &DiffOp) -> Result<DiffOp> {
        self.check_nvars(other)?;
        let precision = self.product_precision(other)?;
        let bound = precision.bound();
        let n = self.nvars;
        let mut acc: BTreeMap<Exponent, Poly> = BTreeMap::new();
        for (a, ca) in &self.terms {
            let gammas = a.sub_indices();
            for (b, cb) in &other.terms {
                for g in &gammas {
                    let db = cb.derivative_multi(g);
                    if db.is_zero() {
                        continue;
                    }
                    let coef = ca.mul_truncated(&db, bound).scale(&a.binomial(g));
                    if coef.is_zero() {
                        continue;
                    }
                    let rest = a.checked_sub(g).expect("g <= a").add(b);
                    let slot = acc.entry(rest).or_insert_with(|| Poly::zero(n));
                    *slot = &*slot + &coef;
                }
            }
        }
        let dhat = self.dhat || other.dhat;
        let mut out = Self::from_terms(n, acc, precision, dhat);
        if precision != Precision::Exact || dhat {
            out.loss = out.loss.max(self.loss + other.loss);
        }
        Ok(out)
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &DiffOp) -> Result<DiffOp> {
        let pq = self.mul(other)?;
        let qp = other.mul(self)?;
        let c = pq.sub(&qp)?;
        let ord_bound =
            self.order(OrderKind::Raw).unwrap_or(0) + other.order(OrderKind::Raw).unwrap_or(0);
        if let Ok(o) = c.order(OrderKind::Raw) {
            debug_assert!(ord_bound == 0 || o < ord_bound);
        }
        Ok(c)
    }

    pub fn pow(&self, k: u32) -> Result<DiffOp> {
        let mut acc = DiffOp::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Coefficients evaluated at `x = 0`, as a constant-coefficient operator.
    pub fn at_origin(&self) -> DiffOp {
        Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .map(|(a, c)| (a.clone(), Poly::constant(self.nvars, c.constant_term()))),
            Precision::Exact,
            false,
        )
    }

    fn zero_error(&self) -> Error {
        match self.precision {
            Precision::Exact => Error::ZeroOperator,
            Precision::Trunc(n) => Error::PrecisionZero(n),
        }
    }

    pub fn order(&self, kind: OrderKind) -> Result<u32> {
        let raw = self
            .terms
            .keys()
            .map(Exponent::degree)
            .max()
            .ok_or_else(|| self.zero_error())?;
        match kind {
            OrderKind::Raw => Ok(raw),
            OrderKind::Stable if !self.dhat => Ok(raw),
            OrderKind::Stable => self.at_origin().order(OrderKind::Raw),
        }
    }

    /// Terms of order exactly `m`.
    pub fn homogeneous_part(&self, m: u32) -> DiffOp {
        let mut out = Self::from_terms(
            self.nvars,
            self.terms
                .iter()
                .filter(|(a, _)| a.degree() == m)
                .map(|(a, c)| (a.clone(), c.clone())),
            self.precision,
            self.dhat,
        );
        out.loss = self.loss;
        out
    }

    /// `sum c_a d^a(f)`, known modulo `M^min(N_P, N_f - loss)`.
    pub fn apply(&self, f: &TruncatedSeries) -> Result<TruncatedSeries> {
        if f.nvars() != self.nvars {
            return Err(Error::NvarsMismatch(self.nvars, f.nvars()));
        }
        let p = Precision::Trunc(f.precision())
            .lose(self.loss)?
            .min(self.precision);
        let n = p.bound().expect("finite precision");
        let mut out = Poly::zero(self.nvars);
        for (a, c) in &self.terms {
            let df = f.body().derivative_multi(a);
            if !df.is_zero() {
                out = &out + &c.mul_truncated(&df, Some(n));
            }
        }
        Ok(TruncatedSeries::new(out, n))
    }

    /// Renders with `x1.., d1..` names.
    pub fn fmt_expr(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let xnames = Poly::default_names("x", self.nvars);
        let xrefs: Vec<&str> = xnames.iter().map(String::as_str).collect();
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(a, c)| {
                let dpart: Vec<String> =
                    a.0.iter()
                        .enumerate()
                        .filter(|(_, &k)| k > 0)
                        .map(|(i, &k)| {
                            if k == 1 {
                                format!("d{}", i + 1)
                            } else {
                                format!("d{}^{k}", i + 1)
                            }
                        })
                        .collect();
                let cs = c.fmt_with(&xrefs);
                if dpart.is_empty() {
                    cs
                } else if c.is_constant() && c.constant_term().is_one() {
                    dpart.join("*")
                } else {
                    format!("({cs})*{}", dpart.join("*"))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_expr())?;
        if let Precision::Trunc(n) = self.precision {
            write!(f, " mod M^{n}")?;
        }
        Ok(())
    }
}

/// `:exp(-x_1 d_1): = sum_k (-1)^k x_1^k d_1^k / k!`, truncated below `M^n`.
pub fn normal_ordered_exp(nvars: usize, n: u32) -> DiffOp {
    assert!(nvars >= 1 && n >= 1);
    let terms = (0..n).map(|k| {
        let mut e = Exponent::zero(nvars);
        e.0[0] = k;
        let c = Scalar::new(
            if k % 2 == 0 { 1.into() } else { (-1).into() },
            scalar::factorial(k),
        );
        (e.clone(), Poly::monomial(e, c))
    });
    let mut op = DiffOp::from_terms(nvars, terms, Precision::Trunc(n), true);
    op.loss = 0;
    op
}

/// All pairwise commutators `[ops[i], ops[j]]`, `i < j`, in row order.
pub fn pairwise_commutators(
    ops: &[DiffOp],
    strategy: crate::exec::Strategy,
) -> Vec<((usize, usize), Result<DiffOp>)> {
    let pairs: Vec<(usize, usize)> = (0..ops.len())
        .flat_map(|i| (i + 1..ops.len()).map(move |j| (i, j)))
        .collect();
    let results = strategy.map(&pairs, |&(i, j)| ops[i].commutator(&ops[j]));
    pairs.into_iter().zip(results).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn d1() -> DiffOp {
        DiffOp::d(2, 0)
    }
    fn d2() -> DiffOp {
        DiffOp::d(2, 1)
    }
    fn x1() -> DiffOp {
        DiffOp::x(2, 0)
    }

    #[test]
    fn leibniz_base_cases() {
        let p = d1().mul(&x1()).unwrap();
        let expected = x1().mul(&d1()).unwrap().add(&DiffOp::one(2)).unwrap();
        assert_eq!(p, expected);
        let q = d1().pow(2).unwrap().mul(&x1()).unwrap();
        let expected = x1()
            .mul(&d1().pow(2).unwrap())
            .unwrap()
            .add(&d1().scale(&int(2)))
            .unwrap();
        assert_eq!(q, expected);
        let r = x1().mul(&d1()).unwrap().mul(&d1()).unwrap();
        assert_eq!(r, x1().mul(&d1().pow(2).unwrap()).unwrap());
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(d1().commutator(&x1()).unwrap(), DiffOp::one(2));
        let xd = x1().mul(&d1()).unwrap();
        assert_eq!(xd.commutator(&d1()).unwrap(), d1().neg());
        let a = d2().pow(2).unwrap();
        let b = d1().mul(&d2()).unwrap().add(&d1().pow(2).unwrap()).unwrap();
        assert!(a.commutator(&b).unwrap().is_zero());
    }

    #[test]
    fn orders() {
        let p = d1()
            .mul(&d2())
            .unwrap()
            .add(&x1().mul(&d1()).unwrap())
            .unwrap();
        assert_eq!(p.order(OrderKind::Raw), Ok(2));
        assert_eq!(DiffOp::constant(2, int(5)).order(OrderKind::Raw), Ok(0));
        assert_eq!(
            DiffOp::zero(2).order(OrderKind::Raw),
            Err(Error::ZeroOperator)
        );
        let t = DiffOp::mult_series(&TruncatedSeries::new(Poly::var(2, 0).pow(3), 3));
        assert_eq!(t.order(OrderKind::Raw), Err(Error::PrecisionZero(3)));
    }

    #[test]
    fn exp_acts_as_evaluation() {
        let e = normal_ordered_exp(2, 6);
        let one = TruncatedSeries::one(2, 6);
        assert_eq!(e.apply(&one).unwrap().body(), &Poly::one(2));
        let x1s = TruncatedSeries::new(Poly::var(2, 0), 6);
        assert!(e.apply(&x1s).unwrap().is_zero_at_precision());
        let x2s = TruncatedSeries::new(Poly::var(2, 1), 6);
        assert_eq!(e.apply(&x2s).unwrap().body(), &Poly::var(2, 1));
        let f = &(&Poly::var(2, 0) * &Poly::var(2, 1)) + &Poly::var(2, 1).pow(2);
        let out = e.apply(&TruncatedSeries::new(f, 6)).unwrap();
        assert_eq!(out.body(), &Poly::var(2, 1).pow(2));
    }

    #[test]
    fn apply_examples() {
        let f = TruncatedSeries::new(Poly::var(2, 0).pow(2), 5);
        assert_eq!(
            d1().apply(&f).unwrap().body(),
            &Poly::var(2, 0).scale(&int(2))
        );
        let op = x1().mul(&d1()).unwrap().add(&DiffOp::one(2)).unwrap();
        let g = TruncatedSeries::new(Poly::var(2, 0), 5);
        assert_eq!(
            op.apply(&g).unwrap().body(),
            &Poly::var(2, 0).scale(&int(2))
        );
        assert_eq!(d1().apply(&g).unwrap().precision(), 4);
    }

    #[test]
    fn precision_charges_loss_of_left_factor() {
        let a = DiffOp::mult_series(&TruncatedSeries::new(Poly::one(2), 5));
        let p = d1().pow(2).unwrap().mul(&a).unwrap();
        assert_eq!(p.precision(), Precision::Trunc(3));
        let q = a.mul(&d1().pow(2).unwrap()).unwrap();
        assert_eq!(q.precision(), Precision::Trunc(5));
        let short = DiffOp::mult_series(&TruncatedSeries::new(Poly::one(2), 2));
        assert_eq!(
            d1().pow(2).unwrap().mul(&short),
            Err(Error::PrecisionExhausted)
        );
    }

    #[test]
    fn exp_has_stable_order_zero() {
        let e = normal_ordered_exp(2, 7);
        assert_eq!(e.order(OrderKind::Raw), Ok(6));
        assert_eq!(e.order(OrderKind::Stable), Ok(0));
        assert_eq!(e.loss(), 0);
    }
}
