//! Subalgebras of `k[x,h]` and the affine glueing `A = R + I`.
//!
//! All membership questions are answered degree by degree with exact linear
//! algebra. Spans are computed a little past the degree of interest (the
//! `slack`) so that cancellations of top-degree parts are seen.

use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::linalg::{kernel_modulo, poly_vec, vec_poly, Echelon, SparseVec};
use crate::poly::{Exponent, Poly};
use crate::scalar::Scalar;

pub const NAMES: [&str; 2] = ["x", "h"];

pub fn fmt_xh(p: &Poly) -> String {
    p.fmt_with(&NAMES)
}

fn deg(p: &Poly) -> u32 {
    p.total_degree().unwrap_or(0)
}

fn monomials_up_to(d: u32) -> Vec<Poly> {
    (0..=d)
        .flat_map(|k| Exponent::all_of_degree(2, k))
        .map(|e| Poly::monomial(e, Scalar::one()))
        .collect()
}

/// Degree-bounded budgets shared by the glueing and closure tools.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GlueConfig {
    /// Degrees certified.
    pub budget: u32,
    /// Extra degrees explored to catch cancellations.
    pub slack: u32,
    /// Largest `k` tried in monic relations.
    pub max_relation_degree: u32,
    #[serde(skip)]
    pub strategy: Strategy,
}

impl Default for GlueConfig {
    fn default() -> Self {
        GlueConfig {
            budget: 10,
            slack: 2,
            max_relation_degree: 4,
            strategy: Strategy::auto(),
        }
    }
}

/// Echelon span of polynomials, keyed so that pivots are top-degree terms.
#[derive(Clone, Debug, Default)]
pub struct DegreeSpan {
    ech: Echelon<Exponent>,
}

impl DegreeSpan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_polys<'a>(polys: impl IntoIterator<Item = &'a Poly>) -> Self {
        let mut s = Self::new();
        for p in polys {
            s.insert(p);
        }
        s
    }

    pub fn insert(&mut self, p: &Poly) -> bool {
        self.ech.insert(poly_vec(p))
    }

    pub fn contains(&self, p: &Poly) -> bool {
        self.ech.contains(&poly_vec(p))
    }

    /// Basis elements of degree exactly `d`.
    pub fn of_degree(&self, d: u32) -> Vec<Poly> {
        self.ech
            .basis()
            .filter(|v| v.keys().next_back().is_some_and(|e| e.degree() == d))
            .map(|v| vec_poly(2, v))
            .collect()
    }

    /// Dimension of the part of degree `<= d`.
    pub fn dim_at(&self, d: u32) -> usize {
        self.ech.pivots().filter(|e| e.degree() <= d).count()
    }

    pub fn echelon(&self) -> &Echelon<Exponent> {
        &self.ech
    }
}

/// A finitely generated k-subalgebra of `k[x,h]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialAlgebra {
    generators: Vec<Poly>,
}

impl MonomialAlgebra {
    pub fn new(generators: Vec<Poly>) -> Result<Self> {
        for (i, g) in generators.iter().enumerate() {
            if g.nvars() != 2 {
                return Err(Error::NvarsMismatch(2, g.nvars()));
            }
            if g.is_constant() {
                return Err(Error::InvalidInput(format!("generator {i} is constant")));
            }
        }
        Ok(MonomialAlgebra { generators })
    }

    /// `k[x,h]` itself.
    pub fn ambient() -> Self {
        MonomialAlgebra {
            generators: vec![Poly::var(2, 0), Poly::var(2, 1)],
        }
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    pub fn with_generator(&self, g: Poly) -> Self {
        let mut generators = self.generators.clone();
        generators.push(g);
        MonomialAlgebra { generators }
    }

    /// Products of generators with degree `<= top`, including `1`.
    pub fn products(&self, top: u32, strategy: Strategy) -> Vec<Poly> {
        let degs: Vec<u32> = self.generators.iter().map(deg).collect();
        let mut exps = Vec::new();
        let mut stack = vec![(0usize, vec![0u32; degs.len()], 0u32)];
        while let Some((k, e, d)) = stack.pop() {
            if k == degs.len() {
                exps.push(e);
                continue;
            }
            let mut e = e;
            let mut d = d;
            while d <= top {
                stack.push((k + 1, e.clone(), d));
                e[k] += 1;
                d += degs[k];
            }
        }
        exps.sort();
        strategy.map(&exps, |e| {
            self.generators
                .iter()
                .zip(e)
                .filter(|(_, &k)| k > 0)
                .fold(Poly::one(2), |acc, (g, &k)| &acc * &g.pow(k))
        })
    }

    /// Span of the algebra through degree `top + slack`.
    pub fn span(&self, top: u32, cfg: &GlueConfig) -> DegreeSpan {
        DegreeSpan::from_polys(&self.products(top + cfg.slack, cfg.strategy))
    }

    pub fn contains(&self, f: &Poly, cfg: &GlueConfig) -> bool {
        self.span(deg(f), cfg).contains(f)
    }

    /// Generators of `k[x,h]` as an `A`-module found through degree `budget`:
    /// monomials not in the `A`-span of the earlier ones.
    pub fn module_generators(&self, cfg: &GlueConfig) -> Vec<Poly> {
        let top = cfg.budget;
        let a = self.span(top, cfg);
        let a_elems: Vec<Poly> = a
            .echelon()
            .basis()
            .map(|v| vec_poly(2, v))
            .filter(|p| deg(p) <= top)
            .collect();
        let mut module = DegreeSpan::new();
        let mut gens = Vec::new();
        for m in monomials_up_to(top) {
            if module.contains(&m) {
                continue;
            }
            let dm = deg(&m);
            for p in a_elems.iter().filter(|p| deg(p) + dm <= top) {
                module.insert(&(p * &m));
            }
            gens.push(m);
        }
        gens
    }

    /// Generators of the conductor `{f : f k[x,h] ⊆ A}` through degree `budget`.
    pub fn conductor(&self, cfg: &GlueConfig) -> Result<Vec<Poly>> {
        let top = cfg.budget;
        let mgens = self.module_generators(cfg);
        let reach = mgens.iter().map(deg).max().unwrap_or(0);
        let a = self.span(top + reach, cfg);
        // target: one copy of A for each module generator
        let mut target: Echelon<(usize, Exponent)> = Echelon::new();
        for (j, _) in mgens.iter().enumerate() {
            for row in a.echelon().basis() {
                target.insert(
                    row.iter()
                        .map(|(e, c)| ((j, e.clone()), c.clone()))
                        .collect(),
                );
            }
        }
        let monos = monomials_up_to(top);
        let images: Vec<SparseVec<(usize, Exponent)>> = monos
            .iter()
            .map(|m| {
                mgens
                    .iter()
                    .enumerate()
                    .flat_map(|(j, g)| {
                        (m * g)
                            .into_terms()
                            .into_iter()
                            .map(move |(e, c)| ((j, e), c))
                    })
                    .collect()
            })
            .collect();
        let kernel = kernel_modulo(&images, &target);
        let mut conductor = DegreeSpan::new();
        for combo in &kernel {
            let mut f = Poly::zero(2);
            for (i, c) in combo {
                f = &f + &monos[*i].scale(c);
            }
            conductor.insert(&f);
        }
        if conductor.dim_at(top) == 0 {
            return Err(Error::NoConductorFound(top));
        }
        Ok(ideal_generators(&conductor, top))
    }
}

/// Minimal ideal generators of the part of `span` in degrees `<= top`,
/// assuming that part is closed under multiplication by monomials.
fn ideal_generators(span: &DegreeSpan, top: u32) -> Vec<Poly> {
    let mut ideal = DegreeSpan::new();
    let mut gens = Vec::new();
    for d in 0..=top {
        for f in span.of_degree(d) {
            if ideal.contains(&f) {
                continue;
            }
            let f = f.monic();
            for m in monomials_up_to(top - d) {
                ideal.insert(&(&m * &f));
            }
            gens.push(f);
        }
    }
    gens
}

/// Span of the ideal generated by `gens` through degree `top`.
pub fn ideal_span(gens: &[Poly], top: u32) -> DegreeSpan {
    let mut s = DegreeSpan::new();
    for g in gens {
        let dg = deg(g);
        if dg > top {
            continue;
        }
        for m in monomials_up_to(top - dg) {
            s.insert(&(&m * g));
        }
    }
    s
}

/// `I ⊆ k[x,h]` and lifts of generators of `R ⊆ k[x,h]/I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueInput {
    pub ideal_gens: Vec<Poly>,
    pub subring_gens: Vec<Poly>,
}

impl GlueInput {
    fn validate(&self) -> Result<()> {
        if self.ideal_gens.iter().all(Poly::is_zero) {
            return Err(Error::InvalidInput("the ideal must be nonzero".into()));
        }
        if self
            .ideal_gens
            .iter()
            .any(|g| !g.is_zero() && g.is_constant())
        {
            return Err(Error::InvalidInput("the ideal must be proper".into()));
        }
        for p in self.ideal_gens.iter().chain(&self.subring_gens) {
            if p.nvars() != 2 {
                return Err(Error::NvarsMismatch(2, p.nvars()));
            }
        }
        Ok(())
    }

    fn subring(&self) -> MonomialAlgebra {
        MonomialAlgebra {
            generators: self
                .subring_gens
                .iter()
                .filter(|g| !g.is_constant())
                .cloned()
                .collect(),
        }
    }

    /// Span of `R + I` through degree `top + slack`.
    pub fn span(&self, top: u32, cfg: &GlueConfig) -> DegreeSpan {
        let reach = top + cfg.slack;
        let mut s = ideal_span(&self.ideal_gens, reach);
        for p in self.subring().products(reach, cfg.strategy) {
            s.insert(&p);
        }
        s
    }
}

/// `f in R + I`.
pub fn glued_membership(f: &Poly, input: &GlueInput, cfg: &GlueConfig) -> bool {
    input.span(deg(f), cfg).contains(f)
}

/// `f2^k + a_1 f2^{k-1} + ... + a_k = b` with `a_i` in `R` and `b` in `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonicCertificate {
    pub f1: Poly,
    pub f2: Poly,
    pub coeffs: Vec<Poly>,
    pub b: Poly,
}

impl MonicCertificate {
    /// Recomputes `b` from the other data.
    pub fn holds(&self) -> bool {
        let k = self.coeffs.len() as u32;
        let lhs = self
            .coeffs
            .iter()
            .enumerate()
            .fold(self.f2.pow(k), |acc, (i, a)| {
                &acc + &(a * &self.f2.pow(k - 1 - i as u32))
            });
        lhs == self.b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlueResult {
    pub algebra: MonomialAlgebra,
    /// `f1, a_1, ..., a_k, b` with constants and zeros removed.
    pub seed: Vec<Poly>,
    /// Generators added to reach `R + I` through the budget.
    pub saturation: Vec<Poly>,
    pub certificate: MonicCertificate,
    pub budget: u32,
}

/// Is `v` integral over `k[f1, f2]` with a relation of degree `<= kmax`?
fn integral_over(v: &Poly, f1: &Poly, f2: &Poly, kmax: u32) -> bool {
    let top_f = deg(f1).max(deg(f2)).max(1);
    for k in 1..=kmax {
        let bound = k * top_f;
        let base = MonomialAlgebra {
            generators: vec![f1.clone(), f2.clone()],
        }
        .products(bound, Strategy::Sequential);
        let mut span = DegreeSpan::new();
        for i in 0..k {
            let vi = v.pow(i);
            for p in &base {
                span.insert(&(p * &vi));
            }
        }
        if span.contains(&v.pow(k)) {
            return true;
        }
    }
    false
}

fn noether_candidates() -> Vec<Poly> {
    let x = Poly::var(2, 0);
    let h = Poly::var(2, 1);
    vec![x.clone(), h.clone(), &x + &h, &x - &h]
}

/// Finds `f2^k + sum a_i f2^{k-i} in I` with `a_i in R`.
fn monic_relation(
    input: &GlueInput,
    f1: &Poly,
    f2: &Poly,
    cfg: &GlueConfig,
) -> Option<MonicCertificate> {
    let top = cfg.budget + cfg.slack;
    let r_monos = input.subring().products(top, cfg.strategy);
    let ideal_elems: Vec<Poly> = {
        let s = ideal_span(&input.ideal_gens, top);
        s.echelon().basis().map(|v| vec_poly(2, v)).collect()
    };
    for k in 1..=cfg.max_relation_degree {
        if k * deg(f2) > top {
            break;
        }
        let mut ech: Echelon<Exponent> = Echelon::new();
        // tags: Some(i) for r * f2^{k-i}, None for ideal elements
        let mut tags: Vec<(Option<usize>, Poly)> = Vec::new();
        for i in 1..=k as usize {
            let p = f2.pow(k - i as u32);
            for r in &r_monos {
                let v = r * &p;
                if deg(&v) <= top {
                    ech.insert_with_relation(poly_vec(&v)).ok();
                    tags.push((Some(i), r.clone()));
                }
            }
        }
        for g in &ideal_elems {
            ech.insert_with_relation(poly_vec(g)).ok();
            tags.push((None, g.clone()));
        }
        let target = f2.pow(k);
        let Some(combo) = ech.express(&poly_vec(&target)) else {
            continue;
        };
        // target = sum_j c_j v_j, so a_i = -sum c_j r_j over tag i
        let mut coeffs = vec![Poly::zero(2); k as usize];
        let mut b = Poly::zero(2);
        for (j, c) in combo {
            match &tags[j] {
                (Some(i), r) => coeffs[i - 1] = &coeffs[i - 1] - &r.scale(&c),
                (None, g) => b = &b + &g.scale(&c),
            }
        }
        let cert = MonicCertificate {
            f1: f1.clone(),
            f2: f2.clone(),
            coeffs,
            b,
        };
        debug_assert!(cert.holds());
        return Some(cert);
    }
    None
}

fn push_unique(list: &mut Vec<Poly>, p: Poly) {
    if !p.is_constant() && !list.contains(&p) {
        list.push(p);
    }
}

/// `R + I` as a finitely generated algebra, with the monic relation that
/// makes `k[x,h]` finite over the seed subalgebra.
pub fn glue_affine(input: &GlueInput, cfg: &GlueConfig) -> Result<GlueResult> {
    input.validate()?;
    let x = Poly::var(2, 0);
    let h = Poly::var(2, 1);
    let mut found = None;
    'search: for f1 in input.ideal_gens.iter().filter(|g| !g.is_zero()) {
        for f2 in noether_candidates() {
            let k = cfg.max_relation_degree.max(deg(f1));
            if integral_over(&x, f1, &f2, k) && integral_over(&h, f1, &f2, k) {
                if let Some(cert) = monic_relation(input, f1, &f2, cfg) {
                    found = Some(cert);
                    break 'search;
                }
            }
        }
    }
    let certificate = found.ok_or(Error::NoNoetherPair)?;
    let mut seed = Vec::new();
    push_unique(&mut seed, certificate.f1.monic());
    for a in &certificate.coeffs {
        push_unique(&mut seed, a.monic());
    }
    push_unique(&mut seed, certificate.b.monic());

    let target = input.span(cfg.budget, cfg);
    let mut algebra = MonomialAlgebra {
        generators: seed.clone(),
    };
    for g in &seed {
        if !target.contains(g) {
            return Err(Error::InvalidInput(format!(
                "seed element {} is not in R + I",
                fmt_xh(g)
            )));
        }
    }
    let mut saturation = Vec::new();
    for d in 1..=cfg.budget {
        let mut a = algebra.span(d, cfg);
        for f in target.of_degree(d) {
            if a.contains(&f) {
                continue;
            }
            let f = f.monic();
            algebra = algebra.with_generator(f.clone());
            a = algebra.span(d, cfg);
            saturation.push(f);
        }
    }
    Ok(GlueResult {
        algebra,
        seed,
        saturation,
        certificate,
        budget: cfg.budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn x() -> Poly {
        Poly::var(2, 0)
    }
    fn h() -> Poly {
        Poly::var(2, 1)
    }

    fn cfg() -> GlueConfig {
        GlueConfig {
            strategy: Strategy::Sequential,
            ..Default::default()
        }
    }

    fn set(ps: &[Poly]) -> BTreeSet<String> {
        ps.iter().map(fmt_xh).collect()
    }

    fn cusp() -> GlueInput {
        GlueInput {
            ideal_gens: vec![x().pow(2)],
            subring_gens: vec![h()],
        }
    }

    #[test]
    fn cusp_glueing() {
        let r = glue_affine(&cusp(), &cfg()).unwrap();
        assert_eq!(
            set(r.algebra.generators()),
            set(&[h(), x().pow(2), x().pow(3)])
        );
        assert!(r.certificate.holds());
        assert_eq!(r.certificate.f2, h());
        let c = r.algebra.conductor(&cfg()).unwrap();
        assert_eq!(c, vec![x().pow(2)]);
    }

    #[test]
    fn square_of_maximal_ideal() {
        let input = GlueInput {
            ideal_gens: vec![x().pow(2), &x() * &h(), h().pow(2)],
            subring_gens: vec![],
        };
        let r = glue_affine(&input, &cfg()).unwrap();
        let mut expected = Vec::new();
        for d in 2..=3 {
            for e in Exponent::all_of_degree(2, d) {
                expected.push(Poly::monomial(e, Scalar::one()));
            }
        }
        assert_eq!(set(r.algebra.generators()), set(&expected));
        let c = r.algebra.conductor(&cfg()).unwrap();
        assert_eq!(set(&c), set(&[x().pow(2), &x() * &h(), h().pow(2)]));
    }

    #[test]
    fn no_glueing() {
        let input = GlueInput {
            ideal_gens: vec![x()],
            subring_gens: vec![h()],
        };
        let r = glue_affine(&input, &cfg()).unwrap();
        assert_eq!(set(r.algebra.generators()), set(&[x(), h()]));
        assert_eq!(
            MonomialAlgebra::ambient().conductor(&cfg()).unwrap(),
            vec![Poly::one(2)]
        );
    }

    #[test]
    fn membership() {
        let c = cfg();
        assert!(glued_membership(&x().pow(3), &cusp(), &c));
        assert!(!glued_membership(&x(), &cusp(), &c));
        assert!(glued_membership(&h().pow(5), &cusp(), &c));
        assert!(!glued_membership(&(&x() * &h()), &cusp(), &c));
        assert!(glued_membership(
            &(&h() + &(&x().pow(2) * &h())),
            &cusp(),
            &c
        ));
    }

    #[test]
    fn missing_noether_pair() {
        // the top form of f1 vanishes on every candidate line
        let f1 = &(&(&x() * &h()) * &(&x() + &h())) * &(&x() - &h());
        let input = GlueInput {
            ideal_gens: vec![f1],
            subring_gens: vec![],
        };
        assert_eq!(glue_affine(&input, &cfg()), Err(Error::NoNoetherPair));
    }
}
