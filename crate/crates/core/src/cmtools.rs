//! Cycles of rational functions along curves in `k[x,h]`, and the S2
//! (Cohen-Macaulay) closure of subalgebras of `k[x,h]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::glue::{fmt_xh, DegreeSpan, GlueConfig, MonomialAlgebra};
use crate::linalg::{kernel_modulo, poly_vec, vec_poly, Echelon};
use crate::poly::{Exponent, Poly};
use crate::scalar::Scalar;
use crate::upoly::gcd2;

use num_traits::One;

/// A quotient `num / den` of polynomials in `(x, h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(RationalFn { num, den })
    }

    pub fn poly(p: Poly) -> Self {
        RationalFn {
            num: p,
            den: Poly::one(2),
        }
    }

    pub fn mul(&self, o: &RationalFn) -> RationalFn {
        RationalFn {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    fn add(&self, o: &RationalFn) -> RationalFn {
        RationalFn {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    fn neg(&self) -> RationalFn {
        RationalFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn recip(&self) -> Result<RationalFn> {
        if self.num.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(RationalFn {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    fn pow(&self, k: i64) -> Result<RationalFn> {
        let base = if k < 0 { self.recip()? } else { self.clone() };
        let k = k.unsigned_abs() as u32;
        Ok(RationalFn {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap_or_default()
            .parse()
            .map_err(|_| Error::parse(start, "expected an integer"))
    }

    fn expr(&mut self) -> Result<RationalFn> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFn> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let pos = self.pos;
                let d = self.unary()?;
                acc = acc.mul(
                    &d.recip()
                        .map_err(|_| Error::parse(pos, "division by zero"))?,
                );
            } else if matches!(self.peek(), Some(b'x' | b'h' | b'(')) {
                acc = acc.mul(&self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFn> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let pos = self.pos;
            let k = self.integer()?;
            return base
                .pow(if neg { -k } else { k })
                .map_err(|_| Error::parse(pos, "negative power of zero"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFn> {
        let pos = self.pos;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(RationalFn::poly(Poly::var(2, 0)))
            }
            Some(b'h') => {
                self.pos += 1;
                Ok(RationalFn::poly(Poly::var(2, 1)))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(RationalFn::poly(Poly::constant(
                    2,
                    Scalar::from_integer(n.into()),
                )))
            }
            Some(_) => Err(Error::parse(pos, "expected x, h, a number or '('")),
            None => Err(Error::parse(pos, "unexpected end of input")),
        }
    }
}

/// Parses a rational expression in `x` and `h`.
pub fn parse_rational(src: &str) -> Result<RationalFn> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
    };
    let f = p.expr()?;
    if p.peek().is_some() {
        return Err(Error::parse(p.pos, "unexpected trailing input"));
    }
    Ok(f)
}

/// Parses a polynomial in `x` and `h`.
pub fn parse_poly(src: &str) -> Result<Poly> {
    let f = parse_rational(src)?;
    if !f.den.is_constant() {
        return Err(Error::parse(0, "expected a polynomial"));
    }
    Ok(f.num.scale(&f.den.constant_term().recip()))
}

/// Comma-separated polynomials.
pub fn parse_poly_list(src: &str) -> Result<Vec<Poly>> {
    src.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(parse_poly)
        .collect()
}

/// The local ring of `k[x,h]` at the prime `(p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveLocalization {
    prime: Poly,
}

impl CurveLocalization {
    /// Linear `p` only; others need [`CurveLocalization::assume_irreducible`].
    pub fn new(prime: Poly) -> Result<Self> {
        match prime.total_degree() {
            Some(1) => Ok(CurveLocalization { prime }),
            _ => Err(Error::InvalidInput(format!(
                "{} is not a supported prime",
                fmt_xh(&prime)
            ))),
        }
    }

    /// Accepts a nonconstant `p` the caller vouches for.
    pub fn assume_irreducible(prime: Poly) -> Result<Self> {
        if prime.is_constant() {
            return Err(Error::InvalidInput("a prime must be nonconstant".into()));
        }
        Ok(CurveLocalization { prime })
    }

    pub fn prime(&self) -> &Poly {
        &self.prime
    }

    fn multiplicity(&self, f: &Poly) -> Result<i64> {
        if f.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut f = f.clone();
        let mut k = 0;
        while let Some(q) = f.div_exact(&self.prime) {
            f = q;
            k += 1;
        }
        Ok(k)
    }
}

/// Zeros minus poles of `g` along the curve.
pub fn ord_along(g: &RationalFn, loc: &CurveLocalization) -> Result<i64> {
    Ok(loc.multiplicity(&g.num)? - loc.multiplicity(&g.den)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeilCycle {
    pub components: Vec<(Poly, i64)>,
}

impl std::fmt::Display for WeilCycle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, m)) in self.components.iter().enumerate() {
            let sep = match (i, *m < 0) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            write!(f, "{sep}{}*({})", m.abs(), fmt_xh(p))?;
        }
        Ok(())
    }
}

pub fn cycle_of(g: &RationalFn, primes: &[CurveLocalization]) -> Result<WeilCycle> {
    let mut components = Vec::new();
    for loc in primes {
        let m = ord_along(g, loc)?;
        if m != 0 {
            components.push((loc.prime.clone(), m));
        }
    }
    Ok(WeilCycle { components })
}

/// One adjunction of the closure: `z` with two coprime elements of
/// `{s in A : s z in A}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureStep {
    pub iteration: usize,
    pub adjoined: Poly,
    pub witness: (Poly, Poly),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub algebra: MonomialAlgebra,
    pub trace: Vec<ClosureStep>,
    pub budget: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CmConfig {
    pub glue: GlueConfig,
}

impl Default for CmConfig {
    fn default() -> Self {
        CmConfig {
            glue: GlueConfig {
                budget: 12,
                ..Default::default()
            },
        }
    }
}

/// `{s in A : s z in A}` through the budget, as a list of elements.
fn colon(a: &MonomialAlgebra, z: &Poly, cfg: &GlueConfig) -> Vec<Poly> {
    let top = cfg.budget;
    let dz = z.total_degree().unwrap_or(0);
    let span = a.span(top + dz, cfg);
    let basis: Vec<Poly> = span
        .echelon()
        .basis()
        .map(|v| vec_poly(2, v))
        .filter(|p| p.total_degree().unwrap_or(0) <= top)
        .collect();
    let images: Vec<_> = basis.iter().map(|s| poly_vec(&(s * z))).collect();
    kernel_modulo(&images, span.echelon())
        .into_iter()
        .map(|combo| {
            combo
                .iter()
                .fold(Poly::zero(2), |acc, (i, c)| &acc + &basis[*i].scale(c))
        })
        .collect()
}

/// Two elements with no common factor, if any.
fn coprime_pair(elems: &[Poly]) -> Option<(Poly, Poly)> {
    let mut sorted: Vec<&Poly> = elems.iter().filter(|p| !p.is_constant()).collect();
    sorted.sort_by(|a, b| {
        a.leading_term()
            .map(|t| t.0)
            .cmp(&b.leading_term().map(|t| t.0))
    });
    if let Some(c) = elems.iter().find(|p| p.is_constant() && !p.is_zero()) {
        return Some((c.monic(), c.monic()));
    }
    for (i, a) in sorted.iter().enumerate() {
        for b in &sorted[i + 1..] {
            if gcd2(a, b).is_constant() {
                return Some((a.monic(), b.monic()));
            }
        }
    }
    None
}

/// Monomials of degree `<= budget` outside `A`, in graded-lex order.
fn candidates(a: &MonomialAlgebra, cfg: &GlueConfig) -> Vec<Poly> {
    let span = a.span(cfg.budget, cfg);
    (0..=cfg.budget)
        .flat_map(|d| Exponent::all_of_degree(2, d))
        .map(|e| Poly::monomial(e, Scalar::one()))
        .filter(|m| !span.contains(m))
        .collect()
}

/// Drops generators that lie in the algebra of the earlier, lower-degree ones.
pub fn minimize(a: &MonomialAlgebra, cfg: &GlueConfig) -> MonomialAlgebra {
    let mut gens: Vec<Poly> = a.generators().to_vec();
    gens.sort_by(|p, q| {
        (p.total_degree(), p.leading_term().map(|t| t.0.clone()))
            .cmp(&(q.total_degree(), q.leading_term().map(|t| t.0.clone())))
    });
    let mut kept = MonomialAlgebra::new(vec![]).expect("empty generator list");
    for g in gens {
        if !kept.contains(&g, cfg) {
            kept = kept.with_generator(g);
        }
    }
    kept
}

/// Adjoins elements `z` of `k[x,h]` whose colon ideal has height two, until
/// nothing of degree `<= budget` qualifies.
pub fn s2_closure(a: &MonomialAlgebra, cfg: &CmConfig) -> Result<Closure> {
    let g = &cfg.glue;
    if g.budget == 0 {
        return Err(Error::BudgetExceeded(
            "closure budget must be positive".into(),
        ));
    }
    let mut alg = a.clone();
    let mut trace = Vec::new();
    for iteration in 1.. {
        let cands = candidates(&alg, g);
        let verdicts = g.strategy.map(&cands, |z| coprime_pair(&colon(&alg, z, g)));
        let mut changed = false;
        for (z, w) in cands.into_iter().zip(verdicts) {
            let Some(witness) = w else { continue };
            if changed && alg.contains(&z, g) {
                continue;
            }
            alg = alg.with_generator(z.clone());
            trace.push(ClosureStep {
                iteration,
                adjoined: z,
                witness,
            });
            changed = true;
        }
        if !changed {
            break;
        }
    }
    let algebra = if trace.is_empty() {
        alg
    } else {
        minimize(&alg, g)
    };
    Ok(Closure {
        algebra,
        trace,
        budget: g.budget,
    })
}

/// `A` equals its S2 closure through the budget.
pub fn is_cm(a: &MonomialAlgebra, cfg: &CmConfig) -> Result<bool> {
    Ok(s2_closure(a, cfg)?.trace.is_empty())
}

/// Same subalgebra through degree `budget`.
pub fn same_algebra(a: &MonomialAlgebra, b: &MonomialAlgebra, cfg: &GlueConfig) -> bool {
    let (sa, sb) = (a.span(cfg.budget, cfg), b.span(cfg.budget, cfg));
    let cut = |s: &DegreeSpan| -> Echelon<Exponent> {
        let mut e = Echelon::new();
        for v in s.echelon().basis() {
            if v.keys()
                .next_back()
                .is_some_and(|k| k.degree() <= cfg.budget)
            {
                e.insert(v.clone());
            }
        }
        e
    };
    let (ea, eb) = (cut(&sa), cut(&sb));
    ea.rank() == eb.rank() && ea.basis().all(|v| eb.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Strategy;
    use std::collections::BTreeSet;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn r(s: &str) -> RationalFn {
        parse_rational(s).unwrap()
    }

    fn loc(s: &str) -> CurveLocalization {
        CurveLocalization::new(p(s)).unwrap()
    }

    fn cfg() -> CmConfig {
        let mut c = CmConfig::default();
        c.glue.strategy = Strategy::Sequential;
        c
    }

    fn alg(s: &str) -> MonomialAlgebra {
        MonomialAlgebra::new(parse_poly_list(s).unwrap()).unwrap()
    }

    #[test]
    fn parsing() {
        assert_eq!(p("x^2"), Poly::var(2, 0).pow(2));
        let xh = &Poly::var(2, 0) * &Poly::var(2, 1);
        assert_eq!(
            p("2x h - h"),
            &xh.scale(&Scalar::from_integer(2.into())) - &Poly::var(2, 1)
        );
        let f = r("x/h");
        assert_eq!(f.num, Poly::var(2, 0));
        assert_eq!(f.den, Poly::var(2, 1));
        assert_eq!(r("x^-1").den, Poly::var(2, 0));
        assert!(matches!(parse_poly("x +"), Err(Error::Parse { .. })));
        assert!(matches!(parse_poly("1/x"), Err(Error::Parse { .. })));
        assert!(matches!(parse_rational("x/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn orders() {
        assert_eq!(ord_along(&r("x^2"), &loc("x")), Ok(2));
        assert_eq!(ord_along(&r("h"), &loc("x")), Ok(0));
        assert_eq!(ord_along(&r("x^-1"), &loc("x")), Ok(-1));
        assert_eq!(ord_along(&r("(x-h)^3/(x h)"), &loc("x-h")), Ok(3));
        assert!(CurveLocalization::new(p("x^2+h")).is_err());
        assert!(RationalFn::new(Poly::zero(2), Poly::one(2)).is_err());
    }

    #[test]
    fn cycles() {
        let primes = [loc("x"), loc("h")];
        let c = cycle_of(&r("x^2 h"), &primes).unwrap();
        assert_eq!(c.components, vec![(p("x"), 2), (p("h"), 1)]);
        assert!(cycle_of(&r("1"), &primes).unwrap().components.is_empty());
        let c = cycle_of(&r("x/h"), &primes).unwrap();
        assert_eq!(c.to_string(), "1*(x) - 1*(h)");
    }

    #[test]
    fn closures() {
        let cusp = alg("x^2, x^3, h");
        assert!(is_cm(&cusp, &cfg()).unwrap());
        let poly = MonomialAlgebra::ambient();
        assert!(is_cm(&poly, &cfg()).unwrap());

        let m2 = alg("x^2, x h, h^2, x^3, x^2 h, x h^2, h^3");
        let c = s2_closure(&m2, &cfg()).unwrap();
        assert!(!c.trace.is_empty());
        let names: BTreeSet<String> = c.algebra.generators().iter().map(fmt_xh).collect();
        assert_eq!(names, ["h", "x"].iter().map(|s| s.to_string()).collect());
        for step in &c.trace {
            assert!(gcd2(&step.witness.0, &step.witness.1).is_constant());
        }
        let again = s2_closure(&c.algebra, &cfg()).unwrap();
        assert!(again.trace.is_empty());
        assert!(same_algebra(&again.algebra, &c.algebra, &cfg().glue));
    }
}
