//! Windowed elements of `k[[u]]((t))`.
//!
//! A [`UTLaurent`] stores the coefficients of `u^m t^l` for `(m, l)` inside a
//! [`Window`]. Levels below `tmin` are zero, the element is known modulo
//! `u^(umax+1)`, and levels above `tmax` are unknown. Operations shrink the
//! window whenever a coefficient cannot be certified.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub tmin: i64,
    pub tmax: i64,
    pub umax: u32,
}

impl Window {
    pub fn new(tmin: i64, tmax: i64, umax: u32) -> Self {
        Window { tmin, tmax, umax }
    }

    pub fn contains(&self, m: u32, l: i64) -> bool {
        m <= self.umax && self.tmin <= l && l <= self.tmax
    }

    pub fn is_empty(&self) -> bool {
        self.tmin > self.tmax
    }

    /// Window on which both inputs are known.
    pub fn meet(&self, other: &Window) -> Window {
        Window {
            tmin: self.tmin.min(other.tmin),
            tmax: self.tmax.min(other.tmax),
            umax: self.umax.min(other.umax),
        }
    }
}

impl Default for Window {
    fn default() -> Self {
        Window::new(-64, 64, 64)
    }
}

/// Element of `k[[u]]((t))` restricted to a window.
///
/// Keys are `(t-exponent, u-exponent)`, so the first stored key is the
/// rank-two valuation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UTLaurent {
    terms: BTreeMap<(i64, u32), Scalar>,
    window: Window,
}

impl UTLaurent {
    pub fn zero(window: Window) -> Self {
        UTLaurent {
            terms: BTreeMap::new(),
            window,
        }
    }

    pub fn one(window: Window) -> Self {
        Self::monomial(0, 0, Scalar::one(), window).expect("window must contain the unit")
    }

    /// `c * u^m t^l`.
    pub fn monomial(m: u32, l: i64, c: Scalar, window: Window) -> Result<Self> {
        Self::from_terms([(m, l, c)], window)
    }

    pub fn from_terms<I>(terms: I, window: Window) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, i64, Scalar)>,
    {
        let mut out = Self::zero(window);
        for (m, l, c) in terms {
            if !window.contains(m, l) {
                return Err(Error::WindowTooSmall(format!(
                    "term u^{m} t^{l} lies outside window {window:?}"
                )));
            }
            out.add_term(m, l, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, m: u32, l: i64, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (l, m);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as `(u-exponent, t-exponent, coefficient)`, ordered by `(t, u)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i64, &Scalar)> {
        self.terms.iter().map(|(&(l, m), c)| (m, l, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: u32, l: i64) -> Scalar {
        self.terms
            .get(&(l, m))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Lowest stored t-level, without the floor check.
    pub fn t_order(&self) -> Option<i64> {
        self.terms.keys().next().map(|&(l, _)| l)
    }

    /// Highest stored t-level.
    pub fn t_top(&self) -> Option<i64> {
        self.terms.keys().next_back().map(|&(l, _)| l)
    }

    /// Rank-two valuation `(m, l)` with `f = t^l u^m (unit form)`.
    pub fn valuation(&self) -> Result<(u32, i64)> {
        let &(l, m) = self.terms.keys().next().ok_or(Error::ZeroInput)?;
        if l <= self.window.tmin {
            return Err(Error::WindowTooSmall(format!(
                "lowest level t^{l} touches the window floor {}",
                self.window.tmin
            )));
        }
        Ok((m, l))
    }

    /// Restricts to a smaller window, dropping coefficients outside it.
    pub fn restrict(&self, window: Window) -> Self {
        let w = Window {
            tmin: window.tmin.min(self.window.tmin),
            tmax: window.tmax.min(self.window.tmax),
            umax: window.umax.min(self.window.umax),
        };
        UTLaurent {
            terms: self
                .terms
                .iter()
                .filter(|(&(l, m), _)| w.contains(m, l))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
            window: w,
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.window);
        }
        UTLaurent {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
            window: self.window,
        }
    }

    fn level_bound(&self) -> i64 {
        self.t_order().unwrap_or(self.window.tmax + 1)
    }

    /// Product with a conservatively shrunk window.
    pub fn mul(&self, other: &UTLaurent) -> Result<UTLaurent> {
        let (a, b) = (&self.window, &other.window);
        let window = Window {
            tmin: a.tmin + b.tmin,
            tmax: (a.tmax + other.level_bound()).min(b.tmax + self.level_bound()),
            umax: a.umax.min(b.umax),
        };
        if window.is_empty() {
            return Err(Error::EmptyResultWindow);
        }
        let mut out = UTLaurent::zero(window);
        for (&(l1, m1), c1) in &self.terms {
            for (&(l2, m2), c2) in &other.terms {
                let (m, l) = (m1 + m2, l1 + l2);
                if window.contains(m, l) {
                    out.add_term(m, l, c1 * c2);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<UTLaurent> {
        let mut acc = UTLaurent::one(self.window);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplies by `u^m t^l` exactly, shifting the window.
    pub fn shift(&self, m: u32, l: i64) -> UTLaurent {
        UTLaurent {
            terms: self
                .terms
                .iter()
                .map(|(&(tl, tm), c)| ((tl + l, tm + m), c.clone()))
                .collect(),
            window: Window {
                tmin: self.window.tmin + l,
                tmax: self.window.tmax + l,
                umax: self.window.umax + m,
            },
        }
    }

    /// Rebuilds a value from raw keys, used by the coordinate changes.
    pub(crate) fn from_raw(terms: BTreeMap<(i64, u32), Scalar>, window: Window) -> Self {
        UTLaurent { terms, window }
    }
}

impl Add for &UTLaurent {
    type Output = UTLaurent;
    fn add(self, rhs: &UTLaurent) -> UTLaurent {
        let w = self.window.meet(&rhs.window);
        let mut out = self.restrict(w);
        out.window = w;
        for (&(l, m), c) in &rhs.terms {
            if w.contains(m, l) {
                out.add_term(m, l, c.clone());
            }
        }
        out
    }
}

impl Sub for &UTLaurent {
    type Output = UTLaurent;
    fn sub(self, rhs: &UTLaurent) -> UTLaurent {
        self + &(-rhs)
    }
}

impl Neg for &UTLaurent {
    type Output = UTLaurent;
    fn neg(self) -> UTLaurent {
        self.scale(&-Scalar::one())
    }
}

impl fmt::Display for UTLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(m, l, c)| {
                let mut s = scalar::fmt_scalar(c);
                if m > 0 {
                    s.push_str(&format!("*u^{m}"));
                }
                if l != 0 {
                    s.push_str(&format!("*t^{l}"));
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn w() -> Window {
        Window::new(-10, 10, 10)
    }

    fn mono(m: u32, l: i64) -> UTLaurent {
        UTLaurent::monomial(m, l, int(1), w()).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(mono(0, 2).valuation(), Ok((0, 2)));
        assert_eq!(mono(3, -1).valuation(), Ok((3, -1)));
        let f = &(&mono(1, 1) + &mono(1, 2)) + &mono(0, 3);
        assert_eq!(f.valuation(), Ok((1, 1)));
        assert_eq!(UTLaurent::zero(w()).valuation(), Err(Error::ZeroInput));
        assert!(matches!(
            mono(0, -10).valuation(),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn products() {
        assert_eq!(mono(0, -1).mul(&mono(0, 1)).unwrap().terms().count(), 1);
        let one_plus = &UTLaurent::one(w()) + &mono(0, 1);
        let one_minus = &UTLaurent::one(w()) - &mono(0, 1);
        let p = one_plus.mul(&one_minus).unwrap();
        assert_eq!(p.coeff(0, 0), int(1));
        assert_eq!(p.coeff(0, 1), int(0));
        assert_eq!(p.coeff(0, 2), int(-1));
        let q = mono(1, -2).mul(&mono(1, -2)).unwrap();
        assert_eq!(q.valuation(), Ok((2, -4)));
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn product_window_shrinks_by_partner_level() {
        let p = mono(0, -2).mul(&mono(0, -3)).unwrap();
        assert_eq!(p.window().tmax, 10 - 3);
        assert_eq!(p.window().tmin, -20);
    }

    #[test]
    fn sums_meet_windows() {
        let a = UTLaurent::from_terms(
            [(0, 5, int(1)), (0, 7, int(1)), (3, 0, int(1))],
            Window::new(-10, 8, 10),
        )
        .unwrap();
        let b = UTLaurent::monomial(0, 3, int(1), Window::new(-4, 6, 2)).unwrap();
        let s = &a + &b;
        assert_eq!(s.window(), Window::new(-10, 6, 2));
        assert_eq!(s.len(), 2);
    }
}
