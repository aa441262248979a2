//! Exact linear algebra over the rationals.
//!
//! Everything here works on sparse vectors indexed by an ordered key. The
//! pivot of a vector is its largest key; callers pick the key type so that
//! "largest" means "leading" for the filtration they care about.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::poly::Poly;
use crate::scalar::Scalar;

pub type SparseVec<K> = BTreeMap<K, Scalar>;

fn axpy<K: Ord + Clone>(v: &mut SparseVec<K>, c: &Scalar, w: &SparseVec<K>) {
    for (k, x) in w {
        let delta = c * x;
        match v.get_mut(k) {
            Some(y) => {
                *y += delta;
                if y.is_zero() {
                    v.remove(k);
                }
            }
            None => {
                if !delta.is_zero() {
                    v.insert(k.clone(), delta);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Row<K> {
    vec: SparseVec<K>,
    combo: SparseVec<usize>,
}

/// Row-echelon basis of a growing subspace, with distinct pivots.
///
/// Every inserted vector gets an index; each stored row remembers which
/// combination of inserted vectors it equals, so membership queries can
/// return a certificate.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, Row<K>>,
    inserted: usize,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon {
            rows: BTreeMap::new(),
            inserted: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn has_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    /// Basis vectors, ordered by pivot.
    pub fn basis(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values().map(|r| &r.vec)
    }

    /// Number of inserted vectors so far (the next insertion index).
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    fn reduce_row(&self, mut row: Row<K>) -> Row<K> {
        loop {
            let lead = match row.vec.keys().next_back() {
                Some(k) => k.clone(),
                None => return row,
            };
            let Some(piv) = self.rows.get(&lead) else {
                return row;
            };
            let c = -row.vec[&lead].clone();
            axpy(&mut row.vec, &c, &piv.vec);
            axpy(&mut row.combo, &c, &piv.combo);
        }
    }

    /// Reduces `v` until its leading key is not a pivot.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        self.reduce_row(Row {
            vec: v.clone(),
            combo: BTreeMap::new(),
        })
        .vec
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Combination of inserted vectors equal to `v`, if `v` is in the span.
    pub fn express(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let row = self.reduce_row(Row {
            vec: v.clone(),
            combo: BTreeMap::new(),
        });
        if row.vec.is_empty() {
            Some(row.combo.into_iter().map(|(k, c)| (k, -c)).collect())
        } else {
            None
        }
    }

    /// Inserts `v`; returns `Ok(index)` if it enlarged the span, otherwise
    /// `Err(relation)` where `relation` is a combination of inserted vectors
    /// (including this one) that vanishes.
    pub fn insert_with_relation(&mut self, v: SparseVec<K>) -> Result<usize, SparseVec<usize>> {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = BTreeMap::new();
        combo.insert(idx, Scalar::one());
        let mut row = self.reduce_row(Row { vec: v, combo });
        match row.vec.keys().next_back().cloned() {
            None => Err(row.combo),
            Some(lead) => {
                let inv = row.vec[&lead].recip();
                row.vec.values_mut().for_each(|x| *x *= &inv);
                row.combo.values_mut().for_each(|x| *x *= &inv);
                self.rows.insert(lead, row);
                Ok(idx)
            }
        }
    }

    /// Inserts `v`, returning whether it was independent.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        self.insert_with_relation(v).is_ok()
    }
}

/// Sparse-vector view of a polynomial.
pub fn poly_vec(p: &Poly) -> SparseVec<crate::poly::Exponent> {
    p.terms().map(|(e, c)| (e.clone(), c.clone())).collect()
}

pub fn vec_poly(nvars: usize, v: &SparseVec<crate::poly::Exponent>) -> Poly {
    Poly::from_terms(nvars, v.iter().map(|(e, c)| (e.clone(), c.clone())))
}

/// Basis of `{ lambda : sum_i lambda_i * images[i] in target }`.
///
/// Each returned vector maps input index to coefficient.
pub fn kernel_modulo<K: Ord + Clone>(
    images: &[SparseVec<K>],
    target: &Echelon<K>,
) -> Vec<SparseVec<usize>> {
    let mut ech: Echelon<K> = Echelon::new();
    let mut out = Vec::new();
    for img in images {
        let residue = target.reduce(img);
        if let Err(rel) = ech.insert_with_relation(residue) {
            out.push(rel);
        }
    }
    out
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let n = m.len();
    if n == 0 {
        return Scalar::one();
    }
    // clear denominators row by row so the elimination stays in Z
    let mut scale = Scalar::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scale *= Scalar::from_integer(l.clone());
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Scalar::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Scalar::from_integer(sign * &a[n - 1][n - 1]) / scale
}

/// Determinant of a small matrix of polynomials by cofactor expansion.
pub fn poly_determinant(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    match n {
        0 => Poly::one(nvars),
        1 => m[0][0].clone(),
        _ => {
            let mut acc = Poly::zero(nvars);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &poly_determinant(&minor, nvars);
                acc = if j % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}

/// Large primes for modular rank computations.
pub const PRIMES: [u64; 5] = [
    2_305_843_009_213_693_951,
    4_611_686_018_427_387_847,
    1_000_000_007,
    998_244_353,
    4_294_967_291,
];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Reduction of a rational mod `p`, or `None` if `p` divides the denominator.
pub fn reduce_mod(c: &Scalar, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = c.numer().mod_floor(&pb).to_u64()?;
    let den = c.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(mulmod(num, powmod(den, p - 2, p), p))
}

/// Rank of a dense matrix over `F_p`.
pub fn rank_mod_p(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = powmod(rows[rank][col], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = mulmod(*x, inv, p);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - mulmod(f, *y, p)) % p;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{frac, int};

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, int(c))).collect()
    }

    #[test]
    fn echelon_rank_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(v(&[(0, 1), (1, 1)])));
        assert!(e.insert(v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(v(&[(0, 1), (1, 2), (2, 1)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(&v(&[(0, 2), (1, 3), (2, 1)])));
        assert!(!e.contains(&v(&[(0, 1)])));
    }

    #[test]
    fn express_gives_certificate() {
        let mut e = Echelon::new();
        e.insert(v(&[(0, 1), (1, 2)]));
        e.insert(v(&[(1, 1)]));
        let target = v(&[(0, 3), (1, 7)]);
        let combo = e.express(&target).unwrap();
        assert_eq!(combo[&0], int(3));
        assert_eq!(combo[&1], int(1));
    }

    #[test]
    fn kernel_finds_relations() {
        let target: Echelon<u32> = Echelon::new();
        let imgs = vec![v(&[(0, 1)]), v(&[(0, 2)]), v(&[(1, 1)])];
        let ker = kernel_modulo(&imgs, &target);
        assert_eq!(ker.len(), 1);
        assert_eq!(ker[0][&1], int(1));
        assert_eq!(ker[0][&0], int(-2));
    }

    #[test]
    fn bareiss_determinant() {
        let m = vec![
            vec![int(2), int(0), int(1)],
            vec![int(1), int(3), int(2)],
            vec![int(1), int(1), int(2)],
        ];
        // 2*(6-2) - 0 + 1*(1-3)
        assert_eq!(determinant(&m), int(6));
        let h = vec![vec![frac(1, 2), int(1)], vec![int(1), int(2)]];
        assert_eq!(determinant(&h), int(0));
        let swap = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(determinant(&swap), int(-1));
    }

    #[test]
    fn modular_rank() {
        let p = PRIMES[2];
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![2, 4]], p), 1);
        assert_eq!(rank_mod_p(vec![vec![1, 2], vec![0, 4]], p), 2);
        assert_eq!(reduce_mod(&frac(1, 2), 7), Some(4));
    }
}
