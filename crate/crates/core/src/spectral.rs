//! Commutative rings of operators with constant principal symbols: symbol
//! condition, filtration dimensions, Rees data, self-intersection index and
//! the rank of the module `L = D / (x_1 D + ... + x_n D)`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::diffop::{pairwise_commutators, principal_symbol, symbol_image, DiffOp, Precision};
use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::graded::{hilbert_leading as fit_leading, GradedAlgebra};
use crate::linalg::{self, determinant, poly_determinant, poly_vec, Echelon};
use crate::poly::{Exponent, Poly};
use crate::scalar::{self, Scalar};
use crate::upoly::UPoly;

/// Generators of a commutative ring `B`, checked pairwise on construction.
#[derive(Clone, Debug)]
pub struct RingPresentation {
    generators: Vec<DiffOp>,
    /// Smallest precision at which a commutator was certified to vanish;
    /// `None` when every commutator vanished exactly.
    certified: Option<u32>,
}

impl RingPresentation {
    pub fn new(generators: Vec<DiffOp>, strategy: Strategy) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidInput("empty generator list".into()));
        };
        let n = first.nvars();
        if let Some(g) = generators.iter().find(|g| g.nvars() != n) {
            return Err(Error::NvarsMismatch(n, g.nvars()));
        }
        let mut certified: Option<u32> = None;
        for ((i, j), c) in pairwise_commutators(&generators, strategy) {
            let c = c?;
            if !c.is_zero() {
                return Err(Error::NotCommutative(i, j));
            }
            if let Precision::Trunc(k) = c.precision() {
                certified = Some(certified.map_or(k, |m| m.min(k)));
            }
        }
        Ok(RingPresentation {
            generators,
            certified,
        })
    }

    pub fn generators(&self) -> &[DiffOp] {
        &self.generators
    }

    pub fn nvars(&self) -> usize {
        self.generators[0].nvars()
    }

    pub fn certified_precision(&self) -> Option<u32> {
        self.certified
    }
}

/// Images `sigma'(P_i)` in `k[xi]`; fails unless every symbol is constant.
pub fn constant_symbols(ops: &[DiffOp]) -> Result<Vec<Poly>> {
    ops.iter()
        .enumerate()
        .map(|(i, p)| {
            let s = principal_symbol(p)?;
            if !s.is_constant() {
                return Err(Error::NonConstantSymbol(i));
            }
            Ok(symbol_image(&s))
        })
        .collect()
}

/// How the symbol condition was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolMethod {
    /// Degree-zero symbol present; nothing vanishes.
    Unit,
    /// Fewer forms than variables always share a projective zero.
    DimensionCount,
    /// Resultant of two binary forms.
    Resultant,
    /// gcd of binary forms after dehomogenizing.
    BinaryGcd,
    /// Rank of a Macaulay matrix modulo large primes.
    MacaulayModP,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolCheck {
    /// No common projective zero.
    pub holds: bool,
    /// `true` when `holds` is a proof; `false` for a probabilistic answer.
    pub certified: bool,
    pub method: SymbolMethod,
}

/// Coefficients of a binary form of degree `d`, indexed by the power of
/// `xi_2`.
fn binary_coeffs(f: &Poly, d: u32) -> Vec<Scalar> {
    (0..=d)
        .map(|j| f.coeff(&Exponent(vec![d - j, j])))
        .collect()
}

/// Resultant of two binary forms by the Sylvester determinant.
pub fn binary_resultant(f: &Poly, g: &Poly) -> Scalar {
    let d = f.total_degree().unwrap_or(0);
    let e = g.total_degree().unwrap_or(0);
    let size = (d + e) as usize;
    if size == 0 {
        return Scalar::one();
    }
    let (fc, gc) = (binary_coeffs(f, d), binary_coeffs(g, e));
    let mut m = vec![vec![Scalar::zero(); size]; size];
    for r in 0..e as usize {
        for (k, c) in fc.iter().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..d as usize {
        for (k, c) in gc.iter().enumerate() {
            m[e as usize + r][r + k] = c.clone();
        }
    }
    determinant(&m)
}

fn binary_forms_coprime(forms: &[Poly]) -> bool {
    let mut infinity_common = true;
    let mut g = UPoly::zero();
    for f in forms {
        let d = f.total_degree().unwrap_or(0);
        let c = binary_coeffs(f, d);
        // (0 : 1) is a zero iff the xi_2^d coefficient vanishes
        infinity_common &= c[d as usize].is_zero();
        // dehomogenize at xi_1 = 1, in the variable xi_2
        g = g.gcd(&UPoly::new(c));
    }
    !infinity_common && g.degree() == Some(0)
}

/// Full column rank of the degree-`top` Macaulay matrix mod `p`.
fn macaulay_full_rank(forms: &[Poly], n: usize, top: u32, p: u64) -> bool {
    let cols = Exponent::all_of_degree(n, top);
    let index: std::collections::BTreeMap<&Exponent, usize> =
        cols.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut rows = Vec::new();
    for f in forms {
        let d = f.total_degree().unwrap_or(0);
        if d > top {
            continue;
        }
        for m in Exponent::all_of_degree(n, top - d) {
            let mut row = vec![0u64; cols.len()];
            for (e, c) in f.terms() {
                row[index[&e.add(&m)]] = linalg::reduce_mod(c, p).unwrap_or(0);
            }
            rows.push(row);
        }
    }
    linalg::rank_mod_p(rows, p) == cols.len()
}

/// Whether the constant symbols of `ops` have no common projective zero.
pub fn check_symbol_condition(ops: &[DiffOp]) -> Result<SymbolCheck> {
    let forms = constant_symbols(ops)?;
    let n = ops.first().map_or(0, DiffOp::nvars);
    let check = |holds, certified, method| SymbolCheck {
        holds,
        certified,
        method,
    };
    if forms.iter().any(|f| f.total_degree() == Some(0)) {
        return Ok(check(true, true, SymbolMethod::Unit));
    }
    if forms.len() < n {
        return Ok(check(false, true, SymbolMethod::DimensionCount));
    }
    match n {
        1 => Ok(check(false, true, SymbolMethod::DimensionCount)),
        2 if forms.len() == 2 => Ok(check(
            !binary_resultant(&forms[0], &forms[1]).is_zero(),
            true,
            SymbolMethod::Resultant,
        )),
        2 => Ok(check(
            binary_forms_coprime(&forms),
            true,
            SymbolMethod::BinaryGcd,
        )),
        _ => {
            let degs: Vec<u32> = forms
                .iter()
                .map(|f| f.total_degree().unwrap_or(0))
                .collect();
            let top = if forms.len() == n {
                degs.iter().map(|d| d - 1).sum::<u32>() + 1
            } else {
                n as u32 * (degs.iter().max().unwrap() - 1) + 1
            };
            let full = linalg::PRIMES[..3]
                .iter()
                .any(|&p| macaulay_full_rank(&forms, n, top, p));
            // full rank mod p implies full rank over Q
            Ok(check(full, full, SymbolMethod::MacaulayModP))
        }
    }
}

/// `det(d sigma'(P_i) / d xi_j) != 0`, exactly.
pub fn jacobian_nonzero(ops: &[DiffOp]) -> Result<bool> {
    let forms = constant_symbols(ops)?;
    let n = ops.first().map_or(0, DiffOp::nvars);
    if forms.len() != n {
        return Err(Error::InvalidInput(format!(
            "Jacobian needs {n} operators, got {}",
            forms.len()
        )));
    }
    let m: Vec<Vec<Poly>> = forms
        .iter()
        .map(|f| (0..n).map(|j| f.derivative(j)).collect())
        .collect();
    Ok(!poly_determinant(&m, n).is_zero())
}

/// Filtration dimensions of `B` with the data read off them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationTable {
    pub dims: Vec<u64>,
    pub delta: u32,
    pub veronese_d: Option<u32>,
    /// Period used for the quasi-polynomial fit.
    pub period: u32,
    /// Number of variables, the degree of the Hilbert quasi-polynomial.
    pub nvars: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradedConfig {
    pub mmax: u32,
    /// Largest dimension allowed for a single graded piece.
    pub cap: usize,
    pub d_max: u32,
    pub k_max: u32,
    pub strategy: Strategy,
}

impl Default for GradedConfig {
    fn default() -> Self {
        GradedConfig {
            mmax: 40,
            cap: 5000,
            d_max: 6,
            k_max: 3,
            strategy: Strategy::auto(),
        }
    }
}

fn symbol_algebra(b: &RingPresentation) -> Result<GradedAlgebra> {
    let check = check_symbol_condition(b.generators())?;
    if !check.holds {
        return Err(Error::SymbolConditionFailed);
    }
    let forms = constant_symbols(b.generators())?;
    GradedAlgebra::new(forms, vec![1; b.nvars()])
}

fn table_of(alg: &GradedAlgebra, cfg: &GradedConfig) -> FiltrationTable {
    let delta = alg.delta().max(1);
    let veronese_d = alg.veronese_degree(cfg.d_max, cfg.k_max);
    let lcm = alg
        .generators()
        .iter()
        .fold(1u32, |acc, (_, d)| num_integer::lcm(acc, *d));
    FiltrationTable {
        dims: alg.cumulative_dims(),
        delta,
        veronese_d,
        period: veronese_d.map_or(lcm, |d| delta * d),
        nvars: alg.nvars() as u32,
    }
}

/// `dim B_m` for `m <= mmax`, via the span of symbols of generator monomials.
pub fn graded_dims(b: &RingPresentation, cfg: &GradedConfig) -> Result<FiltrationTable> {
    let mut alg = symbol_algebra(b)?;
    alg.extend_to(cfg.mmax, cfg.cap, cfg.strategy)?;
    Ok(table_of(&alg, cfg))
}

/// Exact leading coefficient of the table over `[lo, hi]`.
pub fn hilbert_leading(table: &FiltrationTable, lo: usize, hi: usize) -> Result<Scalar> {
    fit_leading(&table.dims, lo, hi, table.period, table.nvars)
}

/// `(C^n) = n! c` for the leading coefficient `c`.
pub fn self_intersection_from_leading(c: &Scalar, n: u32) -> Scalar {
    Scalar::from_integer(scalar::factorial(n)) * c
}

/// Self-intersection index and the rank of `L`, which is its inverse.
pub fn self_intersection(
    table: &FiltrationTable,
    lo: usize,
    hi: usize,
) -> Result<(Scalar, Scalar)> {
    let c = hilbert_leading(table, lo, hi)?;
    let s = self_intersection_from_leading(&c, table.nvars);
    let rank = s.recip();
    Ok((s, rank))
}

/// Minimal homogeneous generators of the symbol algebra, with degrees.
pub fn rees_generator_degrees(
    b: &RingPresentation,
    up_to: u32,
    cfg: &GradedConfig,
) -> Result<Vec<(Poly, u32)>> {
    let mut alg = symbol_algebra(b)?;
    alg.extend_to(up_to, cfg.cap, cfg.strategy)?;
    Ok(alg
        .minimal_generators_to(up_to)
        .into_iter()
        .map(|(p, d, _)| (p, d))
        .collect())
}

/// Class of `P` in `L`: `sum p_a(0) xi^a`.
pub fn l_project(p: &DiffOp) -> Poly {
    Poly::from_terms(
        p.nvars(),
        p.terms().map(|(a, c)| (a.clone(), c.constant_term())),
    )
}

/// Right action `v . Q` on `L = k[xi]`, with `v . x_i = dv/dxi_i` and
/// `v . d_j = v xi_j`.
pub fn l_act(v: &Poly, q: &DiffOp) -> Result<Poly> {
    if v.nvars() != q.nvars() {
        return Err(Error::NvarsMismatch(v.nvars(), q.nvars()));
    }
    let Some(deg) = v.total_degree() else {
        return Ok(Poly::zero(v.nvars()));
    };
    if let Some(n) = q.precision().bound() {
        if n <= deg {
            return Err(Error::PrecisionExhausted);
        }
    }
    let mut out = Poly::zero(v.nvars());
    for (a, c) in q.terms() {
        for (b, cb) in c.terms() {
            if b.degree() > deg {
                continue;
            }
            // v . x^b = d^b v, forced by d x - x d = 1
            let w = v.derivative_multi(b).scale(cb);
            out = &out + &w.shift(a);
        }
    }
    Ok(out)
}

/// `dim L_m`, computed by closing `{1}` under the action of `x_i` and `d_j`
/// while staying in degree `<= m`.
pub fn l_filtration_dims(nvars: usize, mmax: u32) -> Result<Vec<u64>> {
    let mut moves: Vec<DiffOp> = (0..nvars).map(|i| DiffOp::d(nvars, i)).collect();
    moves.extend((0..nvars).map(|i| DiffOp::x(nvars, i)));
    let mut span: Echelon<Exponent> = Echelon::new();
    let mut frontier = vec![Poly::one(nvars)];
    span.insert(poly_vec(&frontier[0]));
    let mut dims = vec![1u64];
    for m in 1..=mmax {
        let mut next = Vec::new();
        let mut seen: BTreeSet<Vec<(Exponent, Scalar)>> = BTreeSet::new();
        for v in &frontier {
            for q in &moves {
                let w = l_act(v, q)?;
                if w.is_zero() || w.total_degree().is_some_and(|d| d > m) {
                    continue;
                }
                let key: Vec<_> = w.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
                if seen.insert(key) && span.insert(poly_vec(&w)) {
                    next.push(w);
                }
            }
        }
        dims.push(span.rank() as u64);
        frontier = next;
    }
    Ok(dims)
}

/// Hilbert leading coefficient of `L`, from its filtration.
pub fn l_leading(nvars: usize, lo: usize, hi: usize) -> Result<Scalar> {
    let dims = l_filtration_dims(nvars, hi as u32)?;
    fit_leading(&dims, lo, hi, 1, nvars as u32)
}

#[derive(Clone, Debug)]
pub struct AnalyzeConfig {
    pub graded: GradedConfig,
    /// Fit window for the leading coefficient; defaults to `[mmax/2, mmax]`.
    pub window: Option<(usize, usize)>,
    /// Degree up to which minimal generators are searched.
    pub rees_degree: u32,
    /// Caller-supplied data rank for the coherence flag.
    pub rank: Option<u32>,
    pub seed: u64,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            graded: GradedConfig::default(),
            window: None,
            rees_degree: 8,
            rank: None,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralReport {
    pub symbol_check: SymbolCheck,
    /// `None` unless there are exactly `n` generators.
    pub jacobian_nonzero: Option<bool>,
    pub table: FiltrationTable,
    pub window: (usize, usize),
    pub leading_coeff: Scalar,
    pub self_intersection: Scalar,
    pub ba_rank: Scalar,
    /// `rk L` computed independently from the filtration of `L`.
    pub ba_rank_from_l: Scalar,
    pub rees_generators: Vec<(Poly, u32)>,
    pub trdeg: usize,
    /// Precision at which commutation was certified, if not exact.
    pub commutation_precision: Option<u32>,
    /// With a supplied data rank `r`: whether `(C^n) = r`.
    pub coherent_of_rank: Option<bool>,
}

/// Full analysis of a commutative ring with constant symbols.
pub fn analyze_ring(b: &RingPresentation, cfg: &AnalyzeConfig) -> Result<SpectralReport> {
    let gens = b.generators();
    let n = b.nvars();
    let symbol_check = check_symbol_condition(gens)?;
    if !symbol_check.holds {
        return Err(Error::SymbolConditionFailed);
    }
    let jacobian = if gens.len() == n {
        Some(jacobian_nonzero(gens)?)
    } else {
        None
    };
    let mut alg = symbol_algebra(b)?;
    let g = &cfg.graded;
    alg.extend_to(g.mmax, g.cap, g.strategy)?;
    let table = table_of(&alg, g);
    let window = cfg.window.unwrap_or((g.mmax as usize / 2, g.mmax as usize));
    let leading = hilbert_leading(&table, window.0, window.1)?;
    let s = self_intersection_from_leading(&leading, n as u32);
    let c_l = l_leading(n, window.0, window.1)?;
    let rees_generators = alg
        .minimal_generators_to(cfg.rees_degree.min(g.mmax))
        .into_iter()
        .map(|(p, d, _)| (p, d))
        .collect();
    Ok(SpectralReport {
        symbol_check,
        jacobian_nonzero: jacobian,
        window,
        leading_coeff: leading.clone(),
        ba_rank: s.recip(),
        ba_rank_from_l: &c_l / &leading,
        self_intersection: s.clone(),
        rees_generators,
        trdeg: alg.transcendence_degree(cfg.seed),
        commutation_precision: b.certified_precision(),
        coherent_of_rank: cfg.rank.map(|r| s == Scalar::from_integer(r.into())),
        table,
    })
}

/// The constant-symbol check for a commuting partner: given `P_1..P_n`
/// with constant symbols and nonzero Jacobian, and `Q` commuting with each,
/// reports whether `sigma(Q)` is free of `x`.
pub fn partner_symbol_is_constant(family: &[DiffOp], q: &DiffOp) -> Result<bool> {
    if !jacobian_nonzero(family)? {
        return Err(Error::InvalidInput(
            "Jacobian of the family vanishes".into(),
        ));
    }
    for (i, p) in family.iter().enumerate() {
        if !p.commutator(q)?.is_zero() {
            return Err(Error::NotCommutative(i, family.len()));
        }
    }
    Ok(principal_symbol(q)?.is_constant())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::{parse_operator, ParseOptions};
    use crate::scalar::{frac, int};

    fn op(s: &str) -> DiffOp {
        parse_operator(
            s,
            ParseOptions {
                nvars: Some(2),
                precision: 6,
            },
        )
        .unwrap()
    }

    fn ring(srcs: &[&str]) -> RingPresentation {
        RingPresentation::new(srcs.iter().map(|s| op(s)).collect(), Strategy::Sequential).unwrap()
    }

    #[test]
    fn symbol_condition_examples() {
        let c = check_symbol_condition(&[op("d1^2 + d2^2"), op("d1*d2")]).unwrap();
        assert!(c.holds && c.certified);
        assert!(
            !check_symbol_condition(&[op("d1^2"), op("d1*d2")])
                .unwrap()
                .holds
        );
        assert!(
            check_symbol_condition(&[op("d2"), op("d1*d2 + d1^2")])
                .unwrap()
                .holds
        );
        assert_eq!(
            check_symbol_condition(&[op("x2*d1 + d2"), op("d1")]),
            Err(Error::NonConstantSymbol(0))
        );
        let three = check_symbol_condition(&[op("d1"), op("d1*d2"), op("d1^2")]).unwrap();
        assert_eq!(three.method, SymbolMethod::BinaryGcd);
        assert!(!three.holds);
        let two = check_symbol_condition(&[op("d1 + d2"), op("d1*d2 + d2^2")]).unwrap();
        assert!(!two.holds);
        let three = check_symbol_condition(&[op("d2"), op("d1*d2"), op("d2^2")]).unwrap();
        assert!(!three.holds);
        let three = check_symbol_condition(&[op("d1^2"), op("d2^2"), op("d1*d2")]).unwrap();
        assert!(three.holds);
    }

    #[test]
    fn resultant_oracle() {
        // Res(a xi1 + b xi2, c xi1 + d xi2) = ad - bc
        let f = op("2*d1 + 3*d2");
        let g = op("5*d1 + 7*d2");
        let forms = constant_symbols(&[f, g]).unwrap();
        assert_eq!(binary_resultant(&forms[0], &forms[1]), int(2 * 7 - 3 * 5));
    }

    #[test]
    fn three_variables_macaulay() {
        let o = |s: &str| {
            parse_operator(
                s,
                ParseOptions {
                    nvars: Some(3),
                    precision: 4,
                },
            )
            .unwrap()
        };
        let c = check_symbol_condition(&[o("d1"), o("d2"), o("d3")]).unwrap();
        assert!(c.holds && c.certified);
        let c = check_symbol_condition(&[o("d1"), o("d2"), o("d1*d3")]).unwrap();
        assert!(!c.holds && !c.certified);
    }

    #[test]
    fn jacobians() {
        assert!(jacobian_nonzero(&[op("d1"), op("d2")]).unwrap());
        assert!(jacobian_nonzero(&[op("d1^2"), op("d1*d2")]).unwrap());
        assert!(!jacobian_nonzero(&[op("d1"), op("d1")]).unwrap());
    }

    #[test]
    fn remark_ring_pipeline() {
        let b = ring(&["d2", "d1*d2 + d1^2"]);
        let table = graded_dims(
            &b,
            &GradedConfig {
                mmax: 40,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(table.dims[4], 9);
        assert_eq!(table.delta, 1);
        assert_eq!(hilbert_leading(&table, 20, 40), Ok(frac(1, 4)));
        assert_eq!(self_intersection(&table, 20, 40), Ok((frac(1, 2), int(2))));
        let report = analyze_ring(
            &b,
            &AnalyzeConfig {
                rank: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.coherent_of_rank, Some(false));
        assert_eq!(report.ba_rank, int(2));
        assert_eq!(report.ba_rank_from_l, int(2));
        assert_eq!(report.trdeg, 2);
        let degs: Vec<u32> = report.rees_generators.iter().map(|g| g.1).collect();
        assert_eq!(degs, vec![1, 2]);
    }

    #[test]
    fn baseline_ring() {
        let b = ring(&["d1", "d2"]);
        let report = analyze_ring(
            &b,
            &AnalyzeConfig {
                rank: Some(1),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(report.self_intersection, int(1));
        assert_eq!(report.ba_rank, int(1));
        assert_eq!(report.coherent_of_rank, Some(true));
        assert_eq!(report.table.dims[..4], [1, 3, 6, 10]);
    }

    #[test]
    fn bad_rings() {
        let r = RingPresentation::new(vec![op("d1"), op("x1*d2")], Strategy::Sequential);
        assert_eq!(r.err(), Some(Error::NotCommutative(0, 1)));
        assert!(RingPresentation::new(vec![], Strategy::Sequential).is_err());
        let b = ring(&["d1^2", "d1*d2"]);
        assert_eq!(
            graded_dims(&b, &GradedConfig::default()),
            Err(Error::SymbolConditionFailed)
        );
    }

    #[test]
    fn module_l() {
        assert_eq!(l_project(&op("d1^2 + x1*d2")), Poly::var(2, 0).pow(2));
        assert_eq!(l_project(&op("1")), Poly::one(2));
        let xi = |i| Poly::var(2, i);
        assert_eq!(l_act(&Poly::one(2), &op("d1")), Ok(xi(0)));
        assert_eq!(l_act(&xi(0), &op("x1")), Ok(Poly::constant(2, int(1))));
        let v = &xi(0).pow(2) * &xi(1);
        assert_eq!(l_act(&v, &op("x1")), Ok((&xi(0) * &xi(1)).scale(&int(2))));
        // the projection is a module map
        let (p, q) = (op("d1^2*d2 + x2*d1"), op("x1*x2 + d2*x1"));
        assert_eq!(
            l_project(&p.mul(&q).unwrap()),
            l_act(&l_project(&p), &q).unwrap()
        );
        let dims = l_filtration_dims(2, 12).unwrap();
        for (m, d) in dims.iter().enumerate() {
            assert_eq!(*d, ((m + 1) * (m + 2) / 2) as u64);
        }
    }

    #[test]
    fn glued_operator_projects() {
        let p = parse_operator(
            "d2^2 - 2*inv((1-x2)^2)*E",
            ParseOptions {
                nvars: Some(2),
                precision: 5,
            },
        )
        .unwrap();
        let expected = &Poly::var(2, 1).pow(2) - &Poly::constant(2, int(2));
        assert_eq!(l_project(&p), expected);
    }
}
