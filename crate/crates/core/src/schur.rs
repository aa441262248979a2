//! Pairs of subspaces `(A, W)` of `k[[u]]((t))`: filtrations by t-order,
//! the coordinate changes between `(u, t)` and `(z_1^{-1}, z_2)`, data rank,
//! stability and finite-generation diagnostics.
//!
//! A subspace is described by generators and is only ever explored up to a
//! finite t-level. Level `L` means "lowest t-exponent at least `-L`".

use std::collections::BTreeMap;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::graded::{hilbert_leading, GradedAlgebra};
use crate::laurent::{UTLaurent, Window};
use crate::linalg::{Echelon, SparseVec};
use crate::poly::{Exponent, Poly};
use crate::scalar::Scalar;

/// `u^m t^l -> z_1^{-m} z_2^{l+m}`, stored as `(m, l + m)`.
pub fn psi_map(f: &UTLaurent) -> Result<UTLaurent> {
    let w = f.window();
    let mut out = BTreeMap::new();
    for (m, l, c) in f.terms() {
        let l2 = l + m as i64;
        if l2 > w.tmax {
            return Err(Error::WindowOverflow(format!(
                "u^{m} t^{l} maps to z2-exponent {l2} above {}",
                w.tmax
            )));
        }
        out.insert((l2, m), c.clone());
    }
    Ok(UTLaurent::from_raw(out, w))
}

/// `z_2 -> t`, `z_1^{-1} -> u t^{-1}`: `(m, l') -> (m, l' - m)`.
pub fn psi1_map(f: &UTLaurent) -> Result<UTLaurent> {
    let w = f.window();
    let shift = w.umax as i64;
    let target = Window::new(w.tmin - shift, w.tmax - shift, w.umax);
    let mut out = BTreeMap::new();
    for (m, l2, c) in f.terms() {
        let l = l2 - m as i64;
        if l > target.tmax {
            return Err(Error::WindowOverflow(format!(
                "z1^-{m} z2^{l2} maps to t-exponent {l} above {}",
                target.tmax
            )));
        }
        out.insert((l, m), c.clone());
    }
    Ok(UTLaurent::from_raw(out, target))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceKind {
    /// The unital algebra generated by the generators.
    Algebra,
    /// The k-span of the generators, plus the rule family if present.
    Module,
}

/// The family `{u^j t^{-i} : i >= imin, 0 <= j <= slope*i + offsets[i mod len]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleRule {
    pub imin: i64,
    pub slope: i64,
    #[serde(default = "zero_offsets")]
    pub offsets: Vec<i64>,
}

fn zero_offsets() -> Vec<i64> {
    vec![0]
}

impl TriangleRule {
    /// Largest admissible u-exponent at t-level `i`, if any.
    pub fn top(&self, i: i64) -> Option<u32> {
        if i < self.imin {
            return None;
        }
        let off = if self.offsets.is_empty() {
            0
        } else {
            self.offsets[i.rem_euclid(self.offsets.len() as i64) as usize]
        };
        let j = self.slope * i + off;
        (j >= 0).then_some(j as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceUT {
    pub kind: SubspaceKind,
    pub window: Window,
    pub generators: Vec<UTLaurent>,
    pub rule: Option<TriangleRule>,
}

type Key = (i64, u32);

fn key_vec(f: &UTLaurent) -> SparseVec<Key> {
    f.terms().map(|(m, l, c)| ((-l, m), c.clone())).collect()
}

/// t-level of an element: minus its lowest t-exponent.
fn level(f: &UTLaurent) -> Result<i64> {
    Ok(-f.valuation()?.1)
}

/// Limits on explicit enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchurConfig {
    /// Maximum number of elements enumerated for one span.
    pub budget: usize,
    pub strategy: Strategy,
}

impl Default for SchurConfig {
    fn default() -> Self {
        SchurConfig {
            budget: 200_000,
            strategy: Strategy::auto(),
        }
    }
}

impl SubspaceUT {
    pub fn algebra(generators: Vec<UTLaurent>, window: Window) -> Self {
        SubspaceUT {
            kind: SubspaceKind::Algebra,
            window,
            generators,
            rule: None,
        }
    }

    pub fn module(generators: Vec<UTLaurent>, rule: Option<TriangleRule>, window: Window) -> Self {
        SubspaceUT {
            kind: SubspaceKind::Module,
            window,
            generators,
            rule,
        }
    }

    /// Spanning elements with level `<= top`, sorted by `(level, u-exponent)`.
    pub fn elements(&self, top: i64, cfg: &SchurConfig) -> Result<Vec<(i64, UTLaurent)>> {
        let mut out = match self.kind {
            SubspaceKind::Algebra => self.algebra_monomials(top, cfg)?,
            SubspaceKind::Module => {
                let mut out = Vec::new();
                for g in &self.generators {
                    let lv = level(g)?;
                    if lv <= top {
                        out.push((lv, g.clone()));
                    }
                }
                if let Some(rule) = &self.rule {
                    for i in rule.imin..=top {
                        let Some(jmax) = rule.top(i) else { continue };
                        for j in 0..=jmax {
                            if !self.window.contains(j, -i) || -i <= self.window.tmin {
                                return Err(Error::WindowTooSmall(format!(
                                    "rule element u^{j} t^{} lies outside {:?}",
                                    -i, self.window
                                )));
                            }
                            out.push((i, UTLaurent::monomial(j, -i, Scalar::one(), self.window)?));
                            if out.len() > cfg.budget {
                                return Err(Error::BudgetExceeded(format!(
                                    "more than {} rule elements",
                                    cfg.budget
                                )));
                            }
                        }
                    }
                }
                out
            }
        };
        out.sort_by(|a, b| {
            (a.0, a.1.valuation().ok().map(|v| v.0)).cmp(&(b.0, b.1.valuation().ok().map(|v| v.0)))
        });
        Ok(out)
    }

    fn generator_levels(&self) -> Result<Vec<i64>> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let lv = level(g)?;
                if lv < 1 {
                    return Err(Error::InvalidInput(format!(
                        "algebra generator {i} must have negative t-valuation"
                    )));
                }
                Ok(lv)
            })
            .collect()
    }

    /// Exponent vectors of generator monomials with level `<= top`.
    fn monomial_exponents(&self, top: i64, budget: usize) -> Result<Vec<Vec<u32>>> {
        let levels = self.generator_levels()?;
        let mut out = Vec::new();
        let mut stack = vec![(0usize, vec![0u32; levels.len()], 0i64)];
        while let Some((k, exps, lv)) = stack.pop() {
            if k == levels.len() {
                out.push(exps);
                if out.len() > budget {
                    return Err(Error::BudgetExceeded(format!(
                        "more than {budget} algebra monomials up to level {top}"
                    )));
                }
                continue;
            }
            let mut e = exps.clone();
            let mut l = lv;
            while l <= top {
                stack.push((k + 1, e.clone(), l));
                e[k] += 1;
                l += levels[k];
            }
        }
        out.sort();
        Ok(out)
    }

    fn algebra_monomials(&self, top: i64, cfg: &SchurConfig) -> Result<Vec<(i64, UTLaurent)>> {
        let exps = self.monomial_exponents(top, cfg.budget)?;
        let results = cfg.strategy.map(&exps, |e| -> Result<(i64, UTLaurent)> {
            let mut acc = UTLaurent::one(self.window);
            for (g, &k) in self.generators.iter().zip(e) {
                if k > 0 {
                    acc = acc.mul(&g.pow(k)?)?;
                }
            }
            Ok((level(&acc)?, acc))
        });
        results.into_iter().collect()
    }

    /// Echelon span of the elements of level `<= top`.
    pub fn span(&self, top: i64, cfg: &SchurConfig) -> Result<SpanUT> {
        let elems = self.elements(top, cfg)?;
        Ok(SpanUT::from_elements(elems.into_iter().map(|(_, f)| f)))
    }

    /// `dim (S ∩ t^{-nr} k[[u]][[t]])` for `n = 0..=n_max`.
    pub fn filtration_dims(&self, r: u32, n_max: u32, cfg: &SchurConfig) -> Result<Vec<u64>> {
        let top = (n_max * r) as i64;
        let span = self.span(top, cfg)?;
        Ok((0..=n_max).map(|n| span.dim_at((n * r) as i64)).collect())
    }

    /// Successive differences of [`SubspaceUT::filtration_dims`].
    pub fn graded_increments(&self, r: u32, n_max: u32, cfg: &SchurConfig) -> Result<Vec<u64>> {
        let dims = self.filtration_dims(r, n_max, cfg)?;
        Ok(dims.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// Generators as polynomials in `(u, s = t^{-1})`, if all are monomials
    /// with nonpositive t-exponent.
    pub fn monomial_generators(&self) -> Option<Vec<Poly>> {
        self.generators
            .iter()
            .map(|g| {
                let terms: Vec<_> = g.terms().collect();
                match terms.as_slice() {
                    [(m, l, c)] if *l <= 0 => Some(Poly::monomial(
                        Exponent(vec![*m, (-*l) as u32]),
                        (*c).clone(),
                    )),
                    _ => None,
                }
            })
            .collect()
    }
}

/// Echelon basis with pivots at the lowest t-level.
#[derive(Clone, Debug)]
pub struct SpanUT {
    ech: Echelon<Key>,
}

impl SpanUT {
    pub fn from_elements(elems: impl IntoIterator<Item = UTLaurent>) -> Self {
        let mut ech = Echelon::new();
        for f in elems {
            ech.insert(key_vec(&f));
        }
        SpanUT { ech }
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    /// Dimension of the part with level `<= top`.
    pub fn dim_at(&self, top: i64) -> u64 {
        self.ech.pivots().filter(|(k, _)| *k <= top).count() as u64
    }

    /// Membership, decided on the window of `f`.
    pub fn contains(&self, f: &UTLaurent) -> bool {
        let w = f.window();
        self.ech
            .reduce(&key_vec(f))
            .keys()
            .all(|&(k, m)| !w.contains(m, -k))
    }

    fn insert(&mut self, f: &UTLaurent) -> bool {
        if self.contains(f) {
            return false;
        }
        self.ech.insert(key_vec(f))
    }
}

/// `A W ⊂ W`, checked for every generator of `A` against the spanning
/// elements of `W` up to level `n_max`.
pub fn check_stability(
    a: &SubspaceUT,
    w: &SubspaceUT,
    n_max: u32,
    cfg: &SchurConfig,
) -> Result<bool> {
    if a.kind != SubspaceKind::Algebra {
        return Err(Error::InvalidInput(
            "first subspace must be an algebra".into(),
        ));
    }
    let levels = a.generator_levels()?;
    let reach = levels.iter().copied().max().unwrap_or(0);
    let top = n_max as i64;
    let w_span = w.span(top + reach, cfg)?;
    let w_elems = w.elements(top, cfg)?;
    let jobs: Vec<(usize, usize)> = (0..a.generators.len())
        .flat_map(|i| (0..w_elems.len()).map(move |j| (i, j)))
        .collect();
    let results = cfg.strategy.map(&jobs, |&(i, j)| -> Result<bool> {
        let p = a.generators[i].mul(&w_elems[j].1)?;
        Ok(w_span.contains(&p))
    });
    for r in results {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Least `r <= r_max` with `dim W_{nd} = (ndr+1)(ndr+2)/2` for `1 <= n <= n_max`.
pub fn detect_rank(
    w: &SubspaceUT,
    d: u32,
    n_max: u32,
    r_max: u32,
    cfg: &SchurConfig,
) -> Result<u32> {
    let top = (n_max * d * r_max) as i64;
    let span = w.span(top, cfg)?;
    (1..=r_max)
        .find(|&r| {
            (1..=n_max).all(|n| {
                let k = (n * d * r) as u64;
                span.dim_at(k as i64) == (k + 1) * (k + 2) / 2
            })
        })
        .ok_or(Error::NoRankFits(r_max))
}

/// For each level `n = 1..=n_max`, the spanning elements of `W_n` that are
/// not in `W_{n-1} + A W_{n-1}`.
pub fn fg_witness(
    a: &SubspaceUT,
    w: &SubspaceUT,
    r: u32,
    n_max: u32,
    cfg: &SchurConfig,
) -> Result<Vec<Vec<UTLaurent>>> {
    if a.kind != SubspaceKind::Algebra {
        return Err(Error::InvalidInput(
            "first subspace must be an algebra".into(),
        ));
    }
    let r = r as i64;
    let top = n_max as i64 * r;
    let w_elems = w.elements(top, cfg)?;
    let a_elems: Vec<(i64, UTLaurent)> = a
        .elements(top, cfg)?
        .into_iter()
        .filter(|(lv, _)| *lv >= 1)
        .collect();
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max as i64 {
        let prev: Vec<&(i64, UTLaurent)> = w_elems
            .iter()
            .filter(|(lv, _)| *lv <= (n - 1) * r)
            .collect();
        let mut span = SpanUT::from_elements(prev.iter().map(|(_, f)| f.clone()));
        let jobs: Vec<(usize, usize)> = (0..a_elems.len())
            .flat_map(|i| (0..prev.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| a_elems[i].0 + prev[j].0 <= n * r)
            .collect();
        let products = cfg
            .strategy
            .map(&jobs, |&(i, j)| a_elems[i].1.mul(&prev[j].1));
        for p in products {
            let p = p?;
            span.insert(&p);
        }
        let mut witnesses = Vec::new();
        for (lv, f) in &w_elems {
            if *lv > (n - 1) * r && *lv <= n * r && span.insert(f) {
                witnesses.push(f.clone());
            }
        }
        out.push(witnesses);
    }
    Ok(out)
}

/// Self-intersection data read off the filtration of an algebra `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraGrowth {
    pub dims: Vec<u64>,
    pub delta: u32,
    pub veronese_d: Option<u32>,
    pub period: u32,
    pub leading_coeff: Scalar,
    pub self_intersection: Scalar,
    /// Minimal generators with their degrees, in input order first.
    pub generator_degrees: Vec<(UTLaurent, u32)>,
}

/// Filtration of a monomial algebra `A`, its leading coefficient and the
/// degrees of a minimal generating set.
pub fn algebra_growth(
    a: &SubspaceUT,
    n_lo: u32,
    n_hi: u32,
    cfg: &SchurConfig,
) -> Result<AlgebraGrowth> {
    let gens = a.monomial_generators().ok_or_else(|| {
        Error::InvalidInput("growth data needs monomial algebra generators".into())
    })?;
    let dims = a.filtration_dims(1, n_hi, cfg)?;
    let mut alg = GradedAlgebra::new(gens, vec![0, 1])?;
    alg.extend_to(n_hi, 100_000, cfg.strategy)?;
    let delta = alg.delta().max(1);
    let veronese_d = alg.veronese_degree(6, 3);
    let lcm = alg
        .generators()
        .iter()
        .fold(1u32, |acc, (_, d)| num_integer::lcm(acc, *d));
    let period = veronese_d.map_or(lcm, |d| delta * d);
    let c = hilbert_leading(&dims, n_lo as usize, n_hi as usize, period, 2)?;
    let generator_degrees = alg
        .minimal_generators_to(n_hi.min(12))
        .into_iter()
        .map(|(p, deg, _)| {
            let (e, coef) = p.terms().next().expect("nonzero generator");
            let f = UTLaurent::monomial(e.0[0], -(e.0[1] as i64), coef.clone(), a.window)?;
            Ok((f, deg))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AlgebraGrowth {
        dims,
        delta,
        veronese_d,
        period,
        self_intersection: &c * Scalar::from_integer(2.into()),
        leading_coeff: c,
        generator_degrees,
    })
}

/// The pair used throughout: `A = k[t^-2, t^-3, u t^-2]` and
/// `W = <1 + t, u^j t^-i (0 <= j <= i)>`.
pub fn glued_pair(window: Window) -> Result<(SubspaceUT, SubspaceUT)> {
    let mono = |m, l| UTLaurent::monomial(m, l, Scalar::one(), window);
    let a = SubspaceUT::algebra(vec![mono(0, -2)?, mono(0, -3)?, mono(1, -2)?], window);
    let one_plus_t = &mono(0, 0)? + &mono(0, 1)?;
    let w = SubspaceUT::module(
        vec![one_plus_t],
        Some(TriangleRule {
            imin: 1,
            slope: 1,
            offsets: vec![0],
        }),
        window,
    );
    Ok((a, w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn w0() -> Window {
        Window::default()
    }

    fn mono(m: u32, l: i64) -> UTLaurent {
        UTLaurent::monomial(m, l, int(1), w0()).unwrap()
    }

    fn cfg() -> SchurConfig {
        SchurConfig {
            strategy: Strategy::Sequential,
            ..Default::default()
        }
    }

    #[test]
    fn coordinate_changes() {
        assert_eq!(psi_map(&mono(0, -2)).unwrap(), mono(0, -2));
        let z = psi_map(&mono(1, -2)).unwrap();
        assert_eq!(
            z.terms().map(|(m, l, _)| (m, l)).collect::<Vec<_>>(),
            vec![(1, -1)]
        );
        assert_eq!(
            psi_map(&UTLaurent::one(w0())).unwrap(),
            UTLaurent::one(w0())
        );
        let back = psi1_map(&mono(1, 0)).unwrap();
        assert_eq!(
            back.terms().map(|(m, l, _)| (m, l)).collect::<Vec<_>>(),
            vec![(1, -1)]
        );
        let back = psi1_map(&mono(1, -1)).unwrap();
        assert_eq!(
            back.terms().map(|(m, l, _)| (m, l)).collect::<Vec<_>>(),
            vec![(1, -2)]
        );
        assert!(matches!(
            psi_map(&mono(5, 62)),
            Err(Error::WindowOverflow(_))
        ));
    }

    #[test]
    fn glued_pair_filtrations() {
        let (a, w) = glued_pair(w0()).unwrap();
        let dims_w = w.filtration_dims(1, 12, &cfg()).unwrap();
        for (n, d) in dims_w.iter().enumerate() {
            assert_eq!(*d, ((n + 1) * (n + 2) / 2) as u64);
        }
        let dims_a = a.filtration_dims(1, 6, &cfg()).unwrap();
        // oracle: distinct (c, 2a + 3b + 2c) with level <= 6
        let mut pairs = std::collections::BTreeSet::new();
        for x in 0..4 {
            for y in 0..3 {
                for c in 0..4 {
                    let lv = 2 * x + 3 * y + 2 * c;
                    if lv <= 6 {
                        pairs.insert((c, lv));
                    }
                }
            }
        }
        assert_eq!(dims_a[6], pairs.len() as u64);
        assert_eq!(dims_a[6], 13);
        let inc = w.graded_increments(1, 6, &cfg()).unwrap();
        assert_eq!(inc, vec![2, 3, 4, 5, 6, 7]);
        let k = SubspaceUT::algebra(vec![], w0());
        assert_eq!(k.filtration_dims(1, 5, &cfg()).unwrap(), vec![1; 6]);
    }

    #[test]
    fn stability() {
        let (a, w) = glued_pair(w0()).unwrap();
        assert!(check_stability(&a, &w, 10, &cfg()).unwrap());
        let a1 = SubspaceUT::algebra(vec![mono(0, -1)], w0());
        let wu = SubspaceUT::module(vec![mono(1, 0)], None, w0());
        assert!(!check_stability(&a1, &wu, 5, &cfg()).unwrap());
        let k = SubspaceUT::algebra(vec![], w0());
        assert!(check_stability(&k, &wu, 5, &cfg()).unwrap());
    }

    #[test]
    fn ranks() {
        let (_, w) = glued_pair(w0()).unwrap();
        assert_eq!(detect_rank(&w, 1, 10, 4, &cfg()), Ok(1));
        let doubled = SubspaceUT::module(
            vec![UTLaurent::one(w0())],
            Some(TriangleRule {
                imin: 1,
                slope: 1,
                offsets: vec![1, -1],
            }),
            w0(),
        );
        assert_eq!(detect_rank(&doubled, 1, 10, 4, &cfg()), Ok(2));
        let one = SubspaceUT::module(vec![UTLaurent::one(w0())], None, w0());
        assert_eq!(
            detect_rank(&one, 1, 5, 4, &cfg()),
            Err(Error::NoRankFits(4))
        );
    }

    #[test]
    fn witnesses() {
        let (a, w) = glued_pair(w0()).unwrap();
        let wit = fg_witness(&a, &w, 1, 8, &cfg()).unwrap();
        for (i, level) in wit.iter().enumerate() {
            let n = i as i64 + 1;
            assert!(level.contains(&mono(n as u32, -n)));
            if n >= 2 {
                assert_eq!(level.len(), 1);
            }
        }
        let a1 = SubspaceUT::algebra(vec![mono(0, -1)], w0());
        let wit = fg_witness(&a1, &a1, 1, 6, &cfg()).unwrap();
        assert!(wit.iter().all(Vec::is_empty));
        let a23 = SubspaceUT::algebra(vec![mono(0, -2), mono(0, -3)], w0());
        let w1 = SubspaceUT::module(
            vec![UTLaurent::one(w0())],
            Some(TriangleRule {
                imin: 1,
                slope: 0,
                offsets: vec![0],
            }),
            w0(),
        );
        let wit = fg_witness(&a23, &w1, 1, 6, &cfg()).unwrap();
        assert_eq!(wit[0], vec![mono(0, -1)]);
        assert!(wit[1..].iter().all(Vec::is_empty));
    }

    #[test]
    fn algebra_side_growth() {
        let (a, _) = glued_pair(w0()).unwrap();
        let g = algebra_growth(&a, 20, 40, &cfg()).unwrap();
        assert_eq!(g.leading_coeff, frac(1, 4));
        assert_eq!(g.self_intersection, frac(1, 2));
        let degs: Vec<u32> = g.generator_degrees.iter().map(|x| x.1).collect();
        assert_eq!(degs, vec![2, 3, 2]);
    }
}
