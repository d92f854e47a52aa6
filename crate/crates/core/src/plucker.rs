//! Plücker coordinates of a polynomial matrix and their coefficient matrix.
//!
//! Minors are listed by size, then lexicographically by row set, then by
//! column set. Each minor of size `k` is expanded along its first row using
//! the already computed minors of size `k − 1`, so every determinant is a
//! single pass over its row.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{Rat, RatMatrix};
use crate::polyring::{Monomial, Poly, PolyMatrix};

/// A pair `(I, J)` of 1-based row and column sets of equal size `≥ 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Result<Self> {
        rows.sort_unstable();
        cols.sort_unstable();
        let distinct = |v: &[usize]| v.windows(2).all(|p| p[0] < p[1]);
        if rows.is_empty() || rows.len() != cols.len() || !distinct(&rows) || !distinct(&cols) {
            return Err(Error::InvalidInput(
                "a minor needs equal-size nonempty row and column sets".into(),
            ));
        }
        if rows[0] == 0 || cols[0] == 0 {
            return Err(Error::InvalidInput("minor indices start at 1".into()));
        }
        Ok(Self { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    fn masks(&self) -> (u64, u64) {
        let mask = |v: &[usize]| v.iter().fold(0u64, |acc, &i| acc | 1 << (i - 1));
        (mask(&self.rows), mask(&self.cols))
    }
}

impl fmt::Display for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "({{{}}},{{{}}})", join(&self.rows), join(&self.cols))
    }
}

impl fmt::Debug for MinorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// `c = Σ_k C(m,k)·C(w,k)`, the number of minors of an `m × w` matrix.
pub fn minor_count(m: usize, w: usize) -> u128 {
    (1..=m.min(w)).map(|k| binom(m, k) * binom(w, k)).sum()
}

/// `k`-subsets of `1..=n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(pos) = (0..k).rev().find(|&i| cur[i] < n - k + i + 1) else {
            return out;
        };
        cur[pos] += 1;
        for i in pos + 1..k {
            cur[i] = cur[i - 1] + 1;
        }
    }
}

/// All minors of an `m × w` matrix in the fixed order: size, then row set,
/// then column set.
pub fn enumerate_minors(m: usize, w: usize) -> Vec<MinorIndex> {
    let mut out = Vec::new();
    for k in 1..=m.min(w) {
        let col_sets = subsets(w, k);
        for rows in subsets(m, k) {
            for cols in &col_sets {
                out.push(MinorIndex {
                    rows: rows.clone(),
                    cols: cols.clone(),
                });
            }
        }
    }
    out
}

/// Plücker coordinates, indexed by [`enumerate_minors`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    pub index: Vec<MinorIndex>,
    pub coords: Vec<Poly>,
}

impl PluckerVector {
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn position(&self, d: &MinorIndex) -> Option<usize> {
        self.index.iter().position(|x| x == d)
    }

    pub fn coord(&self, d: &MinorIndex) -> Option<&Poly> {
        self.position(d).map(|p| &self.coords[p])
    }

    /// `Σ_d w_d · C_d`.
    pub fn pair(&self, w: &[Rat]) -> Poly {
        let mut acc = Poly::zero();
        for (c, x) in self.coords.iter().zip(w) {
            acc.add_scaled(c, x);
        }
        acc
    }

    pub fn total_terms(&self) -> usize {
        self.coords.iter().map(Poly::num_terms).sum()
    }
}

/// Determinants of all minors of `b`.
pub fn plucker_embed(b: &PolyMatrix) -> Result<PluckerVector> {
    plucker_embed_bounded(b, u64::MAX)
}

/// As [`plucker_embed`], failing once the coordinates hold more than
/// `max_terms` terms in total.
pub fn plucker_embed_bounded(b: &PolyMatrix, max_terms: u64) -> Result<PluckerVector> {
    let (m, w) = (b.rows(), b.cols());
    if m == 0 || w == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    if m > 64 || w > 64 {
        return Err(Error::BudgetExceeded {
            what: "matrix dimension for minor enumeration",
            limit: 64,
        });
    }
    let index = enumerate_minors(m, w);
    let mut coords = Vec::with_capacity(index.len());
    let mut prev: HashMap<(u64, u64), usize> = HashMap::new();
    let mut cur: HashMap<(u64, u64), usize> = HashMap::new();
    let mut size = 0;
    let mut terms: u64 = 0;
    for d in &index {
        if d.size() != size {
            size = d.size();
            prev = std::mem::take(&mut cur);
        }
        let (rmask, cmask) = d.masks();
        let top = d.rows[0] - 1;
        let det = if size == 1 {
            b.get(top, d.cols[0] - 1).clone()
        } else {
            let rest_rows = rmask & !(1 << top);
            let mut acc = Poly::zero();
            for (pos, &j) in d.cols.iter().enumerate() {
                let a = b.get(top, j - 1);
                if a.is_zero() {
                    continue;
                }
                let minor = &coords[prev[&(rest_rows, cmask & !(1 << (j - 1)))]];
                let t: Poly = a * minor;
                if pos % 2 == 0 {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            acc
        };
        terms += det.num_terms() as u64;
        if terms > max_terms {
            return Err(Error::BudgetExceeded {
                what: "total Plücker coordinate terms",
                limit: max_terms,
            });
        }
        cur.insert((rmask, cmask), coords.len());
        coords.push(det);
    }
    Ok(PluckerVector { index, coords })
}

/// Rows are the coefficient vectors `v_F` of the nonconstant monomials `F`
/// appearing in the coordinates; columns follow the minor order.
#[derive(Clone, Debug)]
pub struct CoefficientMatrix {
    pub matrix: RatMatrix,
    /// Row labels, ascending in the canonical monomial order.
    pub monomials: Vec<Monomial>,
}

/// Builds the coefficient matrix of `c`. Constant terms are dropped: a
/// constant only shifts the image, and nondegeneracy is a statement about
/// affine hyperplanes.
pub fn coefficient_matrix(c: &PluckerVector) -> CoefficientMatrix {
    let mut rows: BTreeMap<&Monomial, Vec<(usize, Rat)>> = BTreeMap::new();
    for (col, p) in c.coords.iter().enumerate() {
        for (mono, coef) in p.terms() {
            if mono.is_one() {
                continue;
            }
            rows.entry(mono).or_default().push((col, coef.clone()));
        }
    }
    let monomials = rows.keys().map(|m| (*m).clone()).collect();
    let matrix = RatMatrix::from_sparse(c.len(), rows.into_values().collect())
        .expect("columns come from the coordinate index");
    CoefficientMatrix { matrix, monomials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{rank, rat, RatMatrix};
    use crate::polyring::{sym_det, VarId};
    use crate::words::WordSystem;
    use proptest::prelude::*;

    fn brute_count(m: usize, w: usize) -> usize {
        // Every pair of bitmasks with equal nonzero popcount.
        let mut n = 0;
        for r in 1u32..(1 << m) {
            for c in 1u32..(1 << w) {
                if r.count_ones() == c.count_ones() {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn minor_count_matches_brute_force() {
        assert_eq!(minor_count(1, 2), 2);
        assert_eq!(minor_count(2, 4), 14);
        assert_eq!(minor_count(1, 1), 1);
        for m in 1..=3 {
            for w in 1..=8 {
                assert_eq!(minor_count(m, w) as usize, brute_count(m, w));
                assert_eq!(enumerate_minors(m, w).len(), brute_count(m, w));
            }
        }
        assert_eq!(minor_count(2, 6), 27);
        assert_eq!(minor_count(3, 6), 83);
        assert_eq!(minor_count(2, 10), 65);
    }

    #[test]
    fn enumeration_order() {
        let d = enumerate_minors(1, 2);
        assert_eq!(
            d,
            vec![
                MinorIndex::new(vec![1], vec![1]).unwrap(),
                MinorIndex::new(vec![1], vec![2]).unwrap()
            ]
        );
        let d = enumerate_minors(2, 2);
        assert_eq!(d.len(), 5);
        assert!(d[..4].iter().all(|x| x.size() == 1));
        assert_eq!(d[4], MinorIndex::new(vec![1, 2], vec![1, 2]).unwrap());
        assert_eq!(d[1].to_string(), "({1},{2})");
    }

    #[test]
    fn numeric_embedding() {
        let b = PolyMatrix::from_rat(&RatMatrix::from_i64(&[&[1, 2], &[3, 4]]));
        let c = plucker_embed(&b).unwrap();
        let vals: Vec<Rat> = c.coords.iter().map(Poly::constant_term).collect();
        assert_eq!(vals, [1, 2, 3, 4, -2].map(rat).to_vec());
    }

    #[test]
    fn zero_row_kills_its_minors() {
        let b = PolyMatrix::from_rat(&RatMatrix::from_i64(&[&[1, 2, 3], &[0, 0, 0]]));
        let c = plucker_embed(&b).unwrap();
        for (d, p) in c.index.iter().zip(&c.coords) {
            if d.rows.contains(&2) {
                assert!(p.is_zero(), "{d}");
            }
        }
    }

    #[test]
    fn single_row_coordinates_are_entries() {
        let ws = WordSystem::from_letters(1, 2, &[&[1], &[2, 1], &[1, 1]]).unwrap();
        let b = ws.build_psi().unwrap();
        let c = plucker_embed(&b).unwrap();
        assert_eq!(c.coords, b.entries().to_vec());
    }

    #[test]
    fn coefficient_matrix_examples() {
        let ws = WordSystem::from_letters(1, 1, &[&[1], &[1, 1]]).unwrap();
        let cm = coefficient_matrix(&plucker_embed(&ws.build_psi().unwrap()).unwrap());
        assert_eq!(cm.matrix.to_dense(), RatMatrix::identity(2).to_dense());
        assert_eq!(rank(&cm.matrix), 2);

        let empty = PluckerVector {
            index: enumerate_minors(1, 2),
            coords: vec![Poly::zero(), Poly::zero()],
        };
        assert_eq!(coefficient_matrix(&empty).matrix.rows(), 0);

        let ws = WordSystem::from_letters(2, 1, &[&[1]]).unwrap();
        let cm = coefficient_matrix(&plucker_embed(&ws.build_psi().unwrap()).unwrap());
        assert_eq!(cm.monomials.len(), 6);
        assert_eq!(rank(&cm.matrix), 5);
    }

    #[test]
    fn embedding_matches_direct_determinants() {
        let ws = WordSystem::from_letters(3, 2, &[&[1], &[2, 1]]).unwrap();
        let b = ws.build_psi().unwrap();
        let c = plucker_embed(&b).unwrap();
        for (d, p) in c.index.iter().zip(&c.coords) {
            let rows: Vec<usize> = d.rows.iter().map(|i| i - 1).collect();
            let cols: Vec<usize> = d.cols.iter().map(|j| j - 1).collect();
            assert_eq!(&sym_det(&b.submatrix(&rows, &cols)).unwrap(), p, "{d}");
        }
    }

    #[test]
    fn rank_one_matrix_has_no_higher_minors() {
        let b = PolyMatrix::from_fn(3, 4, |i, j| {
            &Poly::var(VarId::param(i + 1)) * &Poly::var(VarId::param(10 + j))
        });
        let c = plucker_embed(&b).unwrap();
        for (d, p) in c.index.iter().zip(&c.coords) {
            assert_eq!(p.is_zero(), d.size() >= 2, "{d}");
        }
    }

    #[test]
    fn block_permutation_keeps_rank() {
        let a = WordSystem::from_letters(2, 2, &[&[1], &[2, 2], &[1, 2]]).unwrap();
        let b = WordSystem::from_letters(2, 2, &[&[1, 2], &[1], &[2, 2]]).unwrap();
        let ra = rank(&coefficient_matrix(&plucker_embed(&a.build_psi().unwrap()).unwrap()).matrix);
        let rb = rank(&coefficient_matrix(&plucker_embed(&b.build_psi().unwrap()).unwrap()).matrix);
        assert_eq!(ra, rb);
    }

    #[test]
    fn term_budget_is_enforced() {
        let ws = WordSystem::from_letters(2, 1, &[&[1], &[1, 1]]).unwrap();
        let err = plucker_embed_bounded(&ws.build_psi().unwrap(), 10).unwrap_err();
        assert!(err.is_budget());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn substitution_commutes_with_embedding(vals in proptest::collection::vec(-4i64..5, 8)) {
            let ws = WordSystem::from_letters(2, 2, &[&[1], &[1, 2]]).unwrap();
            let b = ws.build_psi().unwrap();
            let value = |v: &VarId| match v {
                VarId::Edge(e) => rat(vals[((e.gen - 1) * 4 + (e.from - 1) * 2 + (e.to - 1)) as usize]),
                _ => unreachable!(),
            };
            let sym = plucker_embed(&b).unwrap();
            let num = plucker_embed(&PolyMatrix::from_rat(&b.eval(value))).unwrap();
            for (s, n) in sym.coords.iter().zip(&num.coords) {
                prop_assert_eq!(s.eval(value), n.constant_term());
            }
        }
    }
}
