//! Subalgebras of a polynomial ring generated by weighted-homogeneous
//! elements: graded pieces, filtration dimensions, Veronese degree and
//! leading Hilbert coefficients.

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::linalg::{poly_vec, vec_poly, Echelon};
use crate::poly::{Exponent, Poly};
use crate::scalar::{self, Scalar};

/// Weighted degree of a monomial.
pub fn weighted_degree(e: &Exponent, weights: &[u32]) -> u32 {
    e.0.iter().zip(weights).map(|(a, w)| a * w).sum()
}

/// Weighted degree of a homogeneous polynomial, `None` if not homogeneous.
pub fn homogeneous_degree(p: &Poly, weights: &[u32]) -> Option<u32> {
    let mut degs = p.terms().map(|(e, _)| weighted_degree(e, weights));
    let d = degs.next()?;
    degs.all(|x| x == d).then_some(d)
}

/// Homogeneous component computed for each degree up to a bound.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    nvars: usize,
    weights: Vec<u32>,
    gens: Vec<(Poly, u32)>,
    /// `pieces[j]` is an echelon basis of the degree-`j` piece.
    pieces: Vec<Echelon<Exponent>>,
}

impl GradedAlgebra {
    /// Every generator must be homogeneous of positive weighted degree.
    pub fn new(gens: Vec<Poly>, weights: Vec<u32>) -> Result<Self> {
        let nvars = weights.len();
        let mut tagged = Vec::with_capacity(gens.len());
        for (i, g) in gens.into_iter().enumerate() {
            if g.nvars() != nvars {
                return Err(Error::NvarsMismatch(nvars, g.nvars()));
            }
            match homogeneous_degree(&g, &weights) {
                Some(d) if d > 0 => tagged.push((g, d)),
                Some(_) => {
                    return Err(Error::InvalidInput(format!(
                        "generator {i} has degree zero"
                    )))
                }
                None => {
                    return Err(Error::InvalidInput(format!(
                        "generator {i} is zero or not homogeneous"
                    )))
                }
            }
        }
        let mut one = Echelon::new();
        one.insert(poly_vec(&Poly::one(nvars)));
        Ok(GradedAlgebra {
            nvars,
            weights,
            gens: tagged,
            pieces: vec![one],
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[(Poly, u32)] {
        &self.gens
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// Fills in the pieces up to degree `m`. `cap` bounds the dimension of
    /// any single piece.
    pub fn extend_to(&mut self, m: u32, cap: usize, strategy: Strategy) -> Result<()> {
        while self.pieces.len() <= m as usize {
            let j = self.pieces.len() as u32;
            let sources: Vec<(usize, Vec<Poly>)> = self
                .gens
                .iter()
                .enumerate()
                .filter(|(_, (_, d))| *d <= j)
                .map(|(i, (_, d))| (i, self.basis((j - d) as usize)))
                .collect();
            let jobs: Vec<(usize, Poly)> = sources
                .into_iter()
                .flat_map(|(i, b)| b.into_iter().map(move |p| (i, p)))
                .collect();
            let products = strategy.map(&jobs, |(i, p)| &self.gens[*i].0 * p);
            let mut ech = Echelon::new();
            for p in &products {
                ech.insert(poly_vec(p));
                if ech.rank() > cap {
                    return Err(Error::BudgetExceeded(format!(
                        "graded piece of degree {j} exceeds {cap} dimensions"
                    )));
                }
            }
            self.pieces.push(ech);
        }
        Ok(())
    }

    pub fn computed_to(&self) -> u32 {
        self.pieces.len() as u32 - 1
    }

    /// Basis of the degree-`j` piece.
    pub fn basis(&self, j: usize) -> Vec<Poly> {
        self.pieces[j]
            .basis()
            .map(|v| vec_poly(self.nvars, v))
            .collect()
    }

    pub fn piece_dim(&self, j: usize) -> usize {
        self.pieces[j].rank()
    }

    pub fn contains_homogeneous(&self, p: &Poly, j: usize) -> bool {
        self.pieces[j].contains(&poly_vec(p))
    }

    /// `dim` of the sum of pieces of degree `<= m`, for `m = 0..=computed_to`.
    pub fn cumulative_dims(&self) -> Vec<u64> {
        let mut acc = 0u64;
        self.pieces
            .iter()
            .map(|e| {
                acc += e.rank() as u64;
                acc
            })
            .collect()
    }

    /// gcd of the positive degrees with a nonzero piece.
    pub fn delta(&self) -> u32 {
        (1..self.pieces.len())
            .filter(|&j| self.pieces[j].rank() > 0)
            .fold(0u32, |g, j| g.gcd(&(j as u32)))
    }

    fn filtered_basis(&self, d: u32) -> Vec<Poly> {
        (0..=d as usize).flat_map(|j| self.basis(j)).collect()
    }

    /// Smallest `d <= d_max` such that the degree-`<= kd` part equals the
    /// span of `k`-fold products of the degree-`<= d` part, for every
    /// `2 <= k` with `kd <= computed_to()` (at least one such `k` is needed).
    pub fn veronese_degree(&self, d_max: u32, k_max: u32) -> Option<u32> {
        let top = self.computed_to();
        let dims = self.cumulative_dims();
        (1..=d_max).find(|&d| {
            if 2 * d > top {
                return false;
            }
            let base = self.filtered_basis(d);
            let mut current = base.clone();
            for k in 2..=k_max {
                if k * d > top {
                    break;
                }
                let mut next = Echelon::new();
                for a in &current {
                    for b in &base {
                        next.insert(poly_vec(&(a * b)));
                    }
                }
                if next.rank() as u64 != dims[(k * d) as usize] {
                    return false;
                }
                current = next.basis().map(|v| vec_poly(self.nvars, v)).collect();
            }
            true
        })
    }

    /// A minimal homogeneous generating set up to the computed degree, as
    /// `(element, degree, index of the input generator if it is one)`.
    pub fn minimal_generators(&self) -> Vec<(Poly, u32, Option<usize>)> {
        self.minimal_generators_to(self.computed_to())
    }

    /// As [`GradedAlgebra::minimal_generators`], stopping at degree `top`.
    pub fn minimal_generators_to(&self, top: u32) -> Vec<(Poly, u32, Option<usize>)> {
        let mut out = Vec::new();
        let top = top.min(self.computed_to()) as usize;
        for j in 1..=top {
            let mut dec: Echelon<Exponent> = Echelon::new();
            for i in 1..=j / 2 {
                for a in self.basis(i) {
                    for b in self.basis(j - i) {
                        dec.insert(poly_vec(&(&a * &b)));
                    }
                }
            }
            let candidates = self
                .gens
                .iter()
                .enumerate()
                .filter(|(_, (_, d))| *d as usize == j)
                .map(|(i, (g, _))| (g.clone(), Some(i)))
                .chain(self.basis(j).into_iter().map(|p| (p, None)));
            for (p, src) in candidates {
                if dec.insert(poly_vec(&p)) {
                    out.push((p, j as u32, src));
                }
            }
        }
        out.sort_by_key(|(_, j, src)| (src.is_none(), src.unwrap_or(0), *j));
        out
    }

    /// Number of variables of the polynomial ring that are algebraically
    /// independent over the sampled pieces, by Jacobian rank of the
    /// minimal generators at random points modulo large primes.
    pub fn transcendence_degree(&self, seed: u64) -> usize {
        let gens: Vec<Poly> = self
            .minimal_generators_to(12)
            .into_iter()
            .map(|g| g.0)
            .collect();
        jacobian_rank(&gens, self.nvars, seed)
    }
}

/// Generic rank of the Jacobian matrix of `polys`.
pub fn jacobian_rank(polys: &[Poly], nvars: usize, seed: u64) -> usize {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0;
    for &p in &crate::linalg::PRIMES[..2] {
        for _ in 0..3 {
            let point: Vec<Scalar> = (0..nvars)
                .map(|_| scalar::int(rng.gen_range(1..1_000_000)))
                .collect();
            let rows: Vec<Vec<u64>> = polys
                .iter()
                .map(|f| {
                    (0..nvars)
                        .map(|v| {
                            let val = f.derivative(v).eval(&point);
                            crate::linalg::reduce_mod(&val, p).unwrap_or(0)
                        })
                        .collect()
                })
                .collect();
            best = best.max(crate::linalg::rank_mod_p(rows, p));
        }
    }
    best
}

/// Leading coefficient `c` with `dims[m] = c m^n + O(m^(n-1))`, fitted by
/// exact `n`-th finite differences along each residue class mod `period`.
pub fn hilbert_leading(dims: &[u64], lo: usize, hi: usize, period: u32, n: u32) -> Result<Scalar> {
    if hi >= dims.len() || lo > hi || period == 0 {
        return Err(Error::InvalidInput(format!(
            "window [{lo}, {hi}] outside table of length {}",
            dims.len()
        )));
    }
    let p = period as usize;
    let mut found: Option<Scalar> = None;
    for r in 0..p {
        let seq: Vec<Scalar> = (lo..=hi)
            .filter(|m| m % p == r)
            .map(|m| Scalar::from_integer(dims[m].into()))
            .collect();
        if seq.len() < n as usize + 2 {
            return Err(Error::NotStabilized(format!(
                "residue class {r} mod {p} has {} points in the window; need {}",
                seq.len(),
                n + 2
            )));
        }
        let mut diff = seq;
        for _ in 0..n {
            diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
        }
        if diff.iter().any(|x| x != &diff[0]) {
            return Err(Error::NotStabilized(format!(
                "order-{n} differences along class {r} mod {p} are not constant"
            )));
        }
        let denom = Scalar::from_integer(scalar::factorial(n))
            * Scalar::from_integer(num_bigint::BigInt::from(p).pow(n));
        let c = &diff[0] / denom;
        match &found {
            Some(prev) if prev != &c => {
                return Err(Error::NotStabilized(format!(
                    "residue classes disagree on the leading coefficient: {} vs {}",
                    scalar::fmt_scalar(prev),
                    scalar::fmt_scalar(&c)
                )))
            }
            _ => found = Some(c),
        }
    }
    let c = found.expect("period >= 1");
    if c.is_zero() {
        return Err(Error::NotStabilized("leading coefficient is zero".into()));
    }
    Ok(c)
}
