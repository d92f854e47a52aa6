//! Exact linear algebra over ℚ.
//!
//! Matrices are stored as sparse rows. Elimination keeps a reduced row
//! echelon form that grows one row at a time, so a tall matrix with few
//! columns (the usual shape of a coefficient matrix) costs
//! `O(rows · rank · cols)` rational operations.
//!
//! Large matrices go through a modular pre-pass: rows that are independent
//! modulo a 61-bit prime are independent over ℚ, so they are selected first,
//! eliminated exactly, and the resulting kernel is then checked exactly
//! against every row. Rows that fail the check are added and the loop
//! repeats, so the answer is always the exact rational one.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Matrices with `rows * cols` at or above this use the modular pre-pass.
const DENSE_LIMIT: usize = 64 * 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Rat)>>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, Rat::one())]).collect(),
        }
    }

    /// Dense constructor; every row must have `cols` entries.
    pub fn from_dense(cols: usize, rows: Vec<Vec<Rat>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len());
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.push(
                r.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect(),
            );
        }
        Ok(Self {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_dense(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
        .expect("rectangular input")
    }

    /// Sparse constructor. Entries are sorted, zeros dropped, and repeated
    /// columns summed.
    pub fn from_sparse(cols: usize, rows: Vec<Vec<(usize, Rat)>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len());
        for mut r in rows {
            r.sort_by_key(|(c, _)| *c);
            let mut row: Vec<(usize, Rat)> = Vec::with_capacity(r.len());
            for (c, v) in r {
                if c >= cols {
                    return Err(Error::DimensionMismatch(format!(
                        "column {c} out of range for {cols} columns"
                    )));
                }
                match row.last_mut() {
                    Some((lc, lv)) if *lc == c => *lv += v,
                    _ => row.push((c, v)),
                }
            }
            row.retain(|(_, v)| !v.is_zero());
            data.push(row);
        }
        Ok(Self {
            rows: data.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[(usize, Rat)] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        self.data[i]
            .binary_search_by_key(&j, |(c, _)| *c)
            .map(|p| self.data[i][p].1.clone())
            .unwrap_or_else(|_| Rat::zero())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<Rat>> {
        self.data
            .iter()
            .map(|r| {
                let mut d = vec![Rat::zero(); self.cols];
                for (c, v) in r {
                    d[*c] = v.clone();
                }
                d
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = vec![Vec::new(); self.cols];
        for (i, r) in self.data.iter().enumerate() {
            for (c, v) in r {
                data[*c].push((i, v.clone()));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `v · M`.
    pub fn left_mul(&self, v: &[Rat]) -> Result<Vec<Rat>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        let mut out = vec![Rat::zero(); self.cols];
        for (vi, r) in v.iter().zip(&self.data) {
            if vi.is_zero() {
                continue;
            }
            for (c, x) in r {
                out[*c] += vi * x;
            }
        }
        Ok(out)
    }

    /// `M · w`.
    pub fn right_mul(&self, w: &[Rat]) -> Result<Vec<Rat>> {
        if w.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                w.len(),
                self.cols
            )));
        }
        Ok(self.data.iter().map(|r| sparse_dot(r, w)).collect())
    }
}

fn sparse_dot(row: &[(usize, Rat)], w: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (c, v) in row {
        if !w[*c].is_zero() {
            acc += v * &w[*c];
        }
    }
    acc
}

/// Reduced row echelon form, grown one row at a time.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    /// Pivot rows, each with a leading 1 at its pivot column and zeros in
    /// every other pivot column. Kept sorted by pivot column.
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Reduces `row` against the current basis and adds it if it is
    /// independent. Returns whether the rank grew.
    pub fn insert_sparse(&mut self, row: &[(usize, Rat)]) -> bool {
        let mut work = vec![Rat::zero(); self.cols];
        for (c, v) in row {
            work[*c] = v.clone();
        }
        self.insert_dense(work)
    }

    pub fn insert_dense(&mut self, mut work: Vec<Rat>) -> bool {
        debug_assert_eq!(work.len(), self.cols);
        for (p, prow) in &self.rows {
            if work[*p].is_zero() {
                continue;
            }
            let f = work[*p].clone();
            for (w, x) in work.iter_mut().zip(prow).skip(*p) {
                if !x.is_zero() {
                    *w -= &f * x;
                }
            }
        }
        let Some(pc) = work.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let inv = work[pc].recip();
        for w in work.iter_mut().skip(pc) {
            if !w.is_zero() {
                *w *= &inv;
            }
        }
        for (_, prow) in &mut self.rows {
            if prow[pc].is_zero() {
                continue;
            }
            let f = prow[pc].clone();
            for (x, w) in prow.iter_mut().zip(&work).skip(pc) {
                if !w.is_zero() {
                    *x -= &f * w;
                }
            }
        }
        let pos = self.rows.partition_point(|(p, _)| *p < pc);
        self.rows.insert(pos, (pc, work));
        true
    }

    /// Basis of `{w : R·w = 0}`, one vector per free column in ascending
    /// order, each with a 1 at its free column.
    pub fn nullspace(&self) -> Vec<Vec<Rat>> {
        let mut is_pivot = vec![false; self.cols];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![Rat::zero(); self.cols];
                v[f] = Rat::one();
                for (p, prow) in &self.rows {
                    if !prow[f].is_zero() {
                        v[*p] = -prow[f].clone();
                    }
                }
                v
            })
            .collect()
    }

    pub fn into_matrix(self) -> RatMatrix {
        let cols = self.cols;
        RatMatrix::from_dense(cols, self.rows.into_iter().map(|(_, r)| r).collect())
            .expect("echelon rows have fixed width")
    }
}

/// Exact reduced row echelon form of `m`.
pub fn echelon(m: &RatMatrix) -> Echelon {
    if m.rows * m.cols < DENSE_LIMIT {
        let mut e = Echelon::new(m.cols);
        for r in &m.data {
            e.insert_sparse(r);
            if e.is_full() {
                break;
            }
        }
        e
    } else {
        certified_echelon(m)
    }
}

pub fn rank(m: &RatMatrix) -> usize {
    echelon(m).rank()
}

/// Basis of the right kernel `{w : M·w = 0}`.
pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rat>> {
    echelon(m).nullspace()
}

/// Basis of the left kernel `{v : v·M = 0}`; empty iff `rank(M) = rows`.
pub fn left_kernel_basis(m: &RatMatrix) -> Vec<Vec<Rat>> {
    nullspace(&m.transpose())
}

/// Rows of the reduced echelon form; there are exactly `rank(M)` of them.
pub fn row_space_basis(m: &RatMatrix) -> RatMatrix {
    echelon(m).into_matrix()
}

/// Exact echelon form of the row space of `m`, using modular row selection.
///
/// Every row of `m` lies in the span of the returned echelon form.
pub fn certified_echelon(m: &RatMatrix) -> Echelon {
    let Some(selected) = modular_independent_rows(m) else {
        let mut e = Echelon::new(m.cols);
        for r in &m.data {
            e.insert_sparse(r);
        }
        return e;
    };
    let mut e = Echelon::new(m.cols);
    for &i in &selected {
        e.insert_sparse(&m.data[i]);
    }
    loop {
        if e.is_full() {
            return e;
        }
        let kernel = e.nullspace();
        let mut grew = false;
        for r in &m.data {
            if kernel.iter().any(|k| !sparse_dot(r, k).is_zero()) {
                e.insert_sparse(r);
                grew = true;
                break;
            }
        }
        if !grew {
            return e;
        }
    }
}

const PRIME: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

fn reduce_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(PRIME);
    x.mod_floor(&p).to_u64().expect("residue fits in u64")
}

fn rat_mod(x: &Rat) -> Option<u64> {
    let d = reduce_mod(x.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(reduce_mod(x.numer()), powmod(d, PRIME - 2)))
}

/// Indices of rows independent modulo the prime, in input order.
/// `None` when some denominator vanishes modulo the prime.
fn modular_independent_rows(m: &RatMatrix) -> Option<Vec<usize>> {
    let cols = m.cols;
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut selected = Vec::new();
    for (i, r) in m.data.iter().enumerate() {
        if basis.len() == cols {
            break;
        }
        let mut work = vec![0u64; cols];
        for (c, v) in r {
            work[*c] = rat_mod(v)?;
        }
        for (p, prow) in &basis {
            let f = work[*p];
            if f == 0 {
                continue;
            }
            for (w, x) in work.iter_mut().zip(prow).skip(*p) {
                if *x != 0 {
                    *w = (*w + PRIME - mulmod(f, *x)) % PRIME;
                }
            }
        }
        if let Some(pc) = work.iter().position(|&v| v != 0) {
            let inv = powmod(work[pc], PRIME - 2);
            for w in work.iter_mut() {
                *w = mulmod(*w, inv);
            }
            basis.push((pc, work));
            selected.push(i);
        }
    }
    Some(selected)
}

/// Integer content-normalised copy of `v`: coprime integer entries whose
/// first nonzero entry is positive. Zero vectors are returned unchanged.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = if ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter()
        .map(|x| Rat::from_integer(x / &g * &sign))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RatMatrix::identity(3)), 3);
        assert_eq!(rank(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]])), 1);
        let m = RatMatrix::from_dense(
            2,
            vec![vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), ratio(1, 3)]],
        )
        .unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn left_kernel_examples() {
        let k = left_kernel_basis(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(k.len(), 1);
        assert_eq!(primitive(&k[0]), vec![rat(2), rat(-1)]);
        assert!(left_kernel_basis(&RatMatrix::identity(3)).is_empty());
        let k = left_kernel_basis(&RatMatrix::zeros(2, 2));
        assert_eq!(k.len(), 2);
        assert_eq!(rank(&RatMatrix::from_dense(2, k).unwrap()), 2);
    }

    #[test]
    fn row_space_examples() {
        let b = row_space_basis(&RatMatrix::from_i64(&[&[1, 2], &[2, 4]]));
        assert_eq!(b.to_dense(), vec![vec![rat(1), rat(2)]]);
        assert_eq!(row_space_basis(&RatMatrix::zeros(2, 3)).rows(), 0);
        let b = row_space_basis(&RatMatrix::from_i64(&[&[0, 1], &[1, 0]]));
        assert_eq!(b.rows(), 2);
        assert_eq!(rank(&b), 2);
    }

    #[test]
    fn sparse_constructor_sums_repeats() {
        let m =
            RatMatrix::from_sparse(3, vec![vec![(2, rat(1)), (0, rat(4)), (2, rat(-1))]]).unwrap();
        assert_eq!(m.row(0), &[(0, rat(4))]);
        assert!(RatMatrix::from_sparse(2, vec![vec![(2, rat(1))]]).is_err());
    }

    #[test]
    fn large_matrix_uses_certified_route() {
        // 200 x 30 with rank 17: rows are combinations of 17 fixed rows.
        let base: Vec<Vec<i64>> = (0..17)
            .map(|i| {
                (0..30)
                    .map(|j| ((i * 7 + j * 13) % 11) as i64 - 5 + if i == j { 50 } else { 0 })
                    .collect()
            })
            .collect();
        let rows: Vec<Vec<Rat>> = (0..200)
            .map(|k| {
                let a = k % 17;
                let b = (k * 5 + 3) % 17;
                (0..30)
                    .map(|j| rat(base[a][j] * (k as i64 % 3 + 1) - base[b][j]))
                    .collect()
            })
            .collect();
        let m = RatMatrix::from_dense(30, rows).unwrap();
        let fast = certified_echelon(&m);
        let mut slow = Echelon::new(30);
        for i in 0..m.rows() {
            slow.insert_sparse(m.row(i));
        }
        assert_eq!(fast.rank(), slow.rank());
        assert_eq!(fast.nullspace(), slow.nullspace());
    }

    fn arb_matrix() -> impl Strategy<Value = RatMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..4, c), r).prop_map(
                move |rows| {
                    RatMatrix::from_dense(
                        c,
                        rows.into_iter()
                            .map(|row| row.into_iter().map(rat).collect())
                            .collect(),
                    )
                    .unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn rank_bounded_and_rank_nullity(m in arb_matrix()) {
            let r = rank(&m);
            prop_assert!(r <= m.rows().min(m.cols()));
            let k = left_kernel_basis(&m);
            prop_assert_eq!(r + k.len(), m.rows());
            for v in &k {
                prop_assert!(m.left_mul(v).unwrap().iter().all(Zero::is_zero));
            }
            for w in nullspace(&m) {
                prop_assert!(m.right_mul(&w).unwrap().iter().all(Zero::is_zero));
            }
        }

        #[test]
        fn rank_invariant_under_swaps_and_scaling(m in arb_matrix(), s in 1i64..5) {
            let mut rows = m.to_dense();
            rows.reverse();
            if let Some(r0) = rows.first_mut() {
                for x in r0.iter_mut() { *x *= ratio(s, 3); }
            }
            let m2 = RatMatrix::from_dense(m.cols(), rows).unwrap();
            prop_assert_eq!(rank(&m), rank(&m2));
        }

        #[test]
        fn modular_and_plain_routes_agree(m in arb_matrix()) {
            let fast = certified_echelon(&m);
            let mut slow = Echelon::new(m.cols());
            for i in 0..m.rows() { slow.insert_sparse(m.row(i)); }
            prop_assert_eq!(fast.rank(), slow.rank());
            prop_assert_eq!(fast.nullspace(), slow.nullspace());
        }
    }
}
