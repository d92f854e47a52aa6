use std::collections::HashMap;
use std::fmt;

use super::{Poly, VarId};
use crate::error::{Error, Result};
use crate::exactlinalg::{Rat, RatMatrix};

/// Largest matrix size `sym_det` accepts unless told otherwise.
pub const DEFAULT_DET_LIMIT: usize = 8;

/// Dense matrix of polynomials, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Poly::zero(); rows * cols],
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Poly>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_rat(m: &RatMatrix) -> Self {
        let dense = m.to_dense();
        Self::from_fn(m.rows(), m.cols(), |i, j| {
            Poly::constant(dense[i][j].clone())
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Poly::one() } else { Poly::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at 0-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn entries(&self) -> &[Poly] {
        &self.entries
    }

    pub fn map<F: FnMut(&Poly) -> Poly>(&self, f: F) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn matmul(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = Poly::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc += &(a * b);
                }
            }
            acc
        }))
    }

    pub fn add(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Column-wise direct sum `self ⊕ rhs`: the columns of `self` followed by
    /// those of `rhs`.
    pub fn hcat(&self, rhs: &PolyMatrix) -> Result<PolyMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "direct sum of {} and {} rows",
                self.rows, rhs.rows
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                rhs.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Submatrix on the given 0-based rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    /// Evaluates every entry at a rational point.
    pub fn eval<F: Fn(&VarId) -> Rat>(&self, value: F) -> RatMatrix {
        let rows = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).eval(&value))
                    .collect()
            })
            .collect();
        RatMatrix::from_dense(self.cols, rows).expect("rectangular")
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect();
        f.debug_list().entries(rows).finish()
    }
}

/// The `m × m` matrix whose `(i, t)` entry is the variable `A[i,t,q]`.
pub fn generic_matrix(m: usize, q: usize) -> Result<PolyMatrix> {
    if m == 0 {
        return Err(Error::InvalidInput("matrix size must be at least 1".into()));
    }
    if q == 0 {
        return Err(Error::InvalidInput("generator indices start at 1".into()));
    }
    Ok(PolyMatrix::from_fn(m, m, |i, t| {
        Poly::var(VarId::edge(i + 1, t + 1, q))
    }))
}

/// Determinant by cofactor expansion along rows, memoised on column subsets.
pub fn sym_det(m: &PolyMatrix) -> Result<Poly> {
    sym_det_bounded(m, DEFAULT_DET_LIMIT)
}

pub fn sym_det_bounded(m: &PolyMatrix, limit: usize) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "determinant of a non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let n = m.rows;
    if n > limit {
        return Err(Error::BudgetExceeded {
            what: "determinant size",
            limit: limit as u64,
        });
    }
    if n == 0 {
        return Ok(Poly::one());
    }
    // dets[mask] = det of rows (n - |mask|)..n restricted to the columns in mask.
    let mut dets: HashMap<u32, Poly> = HashMap::new();
    dets.insert(0, Poly::one());
    for size in 1..=n {
        let row = n - size;
        let mut next = HashMap::new();
        for mask in masks_of_size(n, size) {
            let mut acc = Poly::zero();
            let mut pos = 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let a = m.get(row, j);
                let minor = &dets[&(mask & !(1 << j))];
                if !a.is_zero() && !minor.is_zero() {
                    let t = a * minor;
                    if pos % 2 == 0 {
                        acc += &t;
                    } else {
                        acc -= &t;
                    }
                }
                pos += 1;
            }
            next.insert(mask, acc);
        }
        dets = next;
    }
    Ok(dets.remove(&((1u32 << n) - 1)).unwrap_or_else(Poly::zero))
}

fn masks_of_size(n: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..(1 << n)).filter(move |m| m.count_ones() as usize == k)
}

/// Rational determinant by fraction-based elimination; used to cross-check
/// the symbolic route on numeric inputs.
#[cfg(test)]
pub(crate) fn rat_det(m: &[Vec<Rat>]) -> Rat {
    use num_traits::Zero;
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rat::from_integer(1.into());
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let piv = a[col][col].clone();
        det *= &piv;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &piv;
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= &f * y;
            }
        }
    }
    det
}
