//! Truncated multivariate power series `k[[x_1..x_n]] / M^N`.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{Exponent, Poly};
use crate::scalar::{int, Scalar};

/// A power series known modulo `M^precision`, `M = (x_1, …, x_n)`.
///
/// Every stored term has total degree `< precision`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    body: Poly,
    precision: u32,
}

impl TruncatedSeries {
    /// Truncates `body` to the given precision.
    pub fn new(body: Poly, precision: u32) -> Self {
        TruncatedSeries {
            body: body.truncate(precision),
            precision,
        }
    }

    pub fn zero(nvars: usize, precision: u32) -> Self {
        Self::new(Poly::zero(nvars), precision)
    }

    pub fn one(nvars: usize, precision: u32) -> Self {
        Self::new(Poly::one(nvars), precision)
    }

    pub fn body(&self) -> &Poly {
        &self.body
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn nvars(&self) -> usize {
        self.body.nvars()
    }

    /// Zero modulo `M^precision`. Never a claim of exact vanishing.
    pub fn is_zero_at_precision(&self) -> bool {
        self.body.is_zero()
    }

    /// `ord_M`, or `None` when the series vanishes at stored precision.
    pub fn ord(&self) -> Option<u32> {
        self.body.min_degree()
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        Self::new(self.body.clone(), precision.min(self.precision))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.body.scale(c), self.precision)
    }

    pub fn derivative(&self, i: usize) -> Self {
        Self::new(self.body.derivative(i), self.precision.saturating_sub(1))
    }

    /// Multiplicative inverse modulo `M^precision` by Newton iteration.
    pub fn invert(&self) -> Result<Self> {
        let c0 = self.body.constant_term();
        if c0.is_zero() {
            return Err(Error::ZeroConstantTerm);
        }
        let n = self.nvars();
        let target = self.precision;
        let mut g = Poly::constant(n, c0.recip());
        let mut known = 1u32;
        let two = Poly::constant(n, int(2));
        while known < target {
            known = (known * 2).min(target);
            // g <- g (2 - f g)
            let fg = self.body.mul_truncated(&g, Some(known));
            g = g.mul_truncated(&(&two - &fg), Some(known));
        }
        Ok(Self::new(g, target))
    }

    pub fn coeff(&self, e: &Exponent) -> Scalar {
        self.body.coeff(e)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::new(&self.body + &rhs.body, self.precision.min(rhs.precision))
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        TruncatedSeries::new(&self.body - &rhs.body, self.precision.min(rhs.precision))
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries::new(-&self.body, self.precision)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let n = self.precision.min(rhs.precision);
        TruncatedSeries::new(self.body.mul_truncated(&rhs.body, Some(n)), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::frac;

    fn x2() -> Poly {
        Poly::var(2, 1)
    }

    #[test]
    fn invert_scalar() {
        let f = TruncatedSeries::new(Poly::constant(2, int(2)), 4);
        assert_eq!(f.invert().unwrap().body(), &Poly::constant(2, frac(1, 2)));
    }

    #[test]
    fn invert_geometric() {
        let f = TruncatedSeries::new(&Poly::one(2) - &x2(), 3);
        let expected = &(&Poly::one(2) + &x2()) + &x2().pow(2);
        assert_eq!(f.invert().unwrap().body(), &expected);
    }

    #[test]
    fn invert_square() {
        let f = TruncatedSeries::new((&Poly::one(2) - &x2()).pow(2), 3);
        let g = f.invert().unwrap();
        let expected = &(&Poly::one(2) + &x2().scale(&int(2))) + &x2().pow(2).scale(&int(3));
        assert_eq!(g.body(), &expected);
        // oracle: the product is one below precision
        assert_eq!((&f * &g).body(), &Poly::one(2));
    }

    #[test]
    fn invert_rejects_nonunit() {
        let f = TruncatedSeries::new(x2(), 5);
        assert_eq!(f.invert(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn precision_is_min() {
        let a = TruncatedSeries::new(x2(), 3);
        let b = TruncatedSeries::new(x2(), 5);
        assert_eq!((&a + &b).precision(), 3);
        assert_eq!((&a * &b).body(), &x2().pow(2));
        assert!((&a * &a.scale(&int(1))).body().total_degree() < Some(3));
    }
}
