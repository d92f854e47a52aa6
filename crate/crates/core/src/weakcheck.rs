//! Weak nonplanarity over ℂ.
//!
//! A manifold `M = f(ℝ^k) ⊂ M_{m,n}` lies in some `ℋ_{A,B} = {Y : det(AY + B) = 0}`
//! with complex `(A, B) ≠ 0` exactly when the coefficient ideal of
//! `det(A·f(x) + B)`, viewed as a polynomial in `x`, has a nonzero complex
//! zero. By the Nullstellensatz that fails only if every entry variable of
//! `A` and `B` has a power in the ideal.
//!
//! A `ComplexSolutionExists` verdict says nothing about real `(A, B)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{Rat, RatMatrix};
use crate::groebner::{radical_member_with, GroebnerConfig};
use crate::polyring::{sym_det_bounded, EntryMatrix, Monomial, Poly, PolyMatrix, VarId};

/// `f : ℝ^k → M_{m,n}` with polynomial entries in `x1, …, xk`.
#[derive(Clone, Debug, PartialEq)]
pub struct Parameterization {
    k: usize,
    entries: PolyMatrix,
}

impl Parameterization {
    pub fn new(k: usize, entries: PolyMatrix) -> Result<Self> {
        if entries.rows() == 0 || entries.cols() == 0 {
            return Err(Error::InvalidInput(
                "parameterisation needs m, n ≥ 1".into(),
            ));
        }
        for p in entries.entries() {
            for v in p.vars() {
                match v {
                    VarId::Param(j) if (1..=k as u32).contains(&j) => {}
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "entry variable {other} is not one of x1..x{k}"
                        )))
                    }
                }
            }
        }
        Ok(Self { k, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.entries.rows()
    }

    pub fn n(&self) -> usize {
        self.entries.cols()
    }

    pub fn entries(&self) -> &PolyMatrix {
        &self.entries
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakConfig {
    /// Largest `n` for which `det(A·f(x) + B)` is expanded.
    pub max_n: usize,
    pub groebner: GroebnerConfig,
}

impl Default for WeakConfig {
    fn default() -> Self {
        Self {
            max_n: 6,
            groebner: GroebnerConfig::default(),
        }
    }
}

fn entry(mat: EntryMatrix, row: usize, col: usize) -> VarId {
    VarId::Entry {
        mat,
        row: row as u32,
        col: col as u32,
    }
}

/// Entries of `A` (`n×m`) then `B` (`n×n`), row by row.
pub fn entry_variables(f: &Parameterization) -> Vec<VarId> {
    let (m, n) = (f.m(), f.n());
    let a = (1..=n).flat_map(|i| (1..=m).map(move |j| entry(EntryMatrix::A, i, j)));
    let b = (1..=n).flat_map(|i| (1..=n).map(move |j| entry(EntryMatrix::B, i, j)));
    a.chain(b).collect()
}

/// `A·f(x) + B` with symbolic `A`, `B`.
fn pencil(f: &Parameterization) -> Result<PolyMatrix> {
    let (m, n) = (f.m(), f.n());
    let a = PolyMatrix::from_fn(n, m, |i, j| Poly::var(entry(EntryMatrix::A, i + 1, j + 1)));
    let b = PolyMatrix::from_fn(n, n, |i, j| Poly::var(entry(EntryMatrix::B, i + 1, j + 1)));
    a.matmul(f.entries())?.add(&b)
}

pub fn coefficient_ideal(f: &Parameterization) -> Result<Vec<Poly>> {
    coefficient_ideal_with(f, &WeakConfig::default())
}

/// Coefficients of `det(A·f(x) + B)` grouped by `x`-monomial, in ascending
/// monomial order. Their common zeros are the `(A, B)` with
/// `det(A·f(x) + B) ≡ 0`.
pub fn coefficient_ideal_with(f: &Parameterization, cfg: &WeakConfig) -> Result<Vec<Poly>> {
    let det = sym_det_bounded(&pencil(f)?, cfg.max_n)?;
    let mut groups: std::collections::BTreeMap<Monomial, Poly> = Default::default();
    for (mono, c) in det.terms() {
        let (x, rest) = mono.split(|v| matches!(v, VarId::Param(_)));
        groups
            .entry(x)
            .or_insert_with(Poly::zero)
            .add_term(rest, c.clone());
    }
    Ok(groups.into_values().filter(|p| !p.is_zero()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WeakStatus {
    /// No nonzero complex `(A, B)` exists, so `M` is weakly nonplanar.
    WeaklyNonplanarComplex,
    /// Some nonzero complex `(A, B)` exists; inconclusive over ℝ.
    ComplexSolutionExists,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakVerdict {
    pub status: WeakStatus,
    /// The first entry variable with no power in the ideal.
    pub free_variable: Option<VarId>,
    pub ideal: Vec<Poly>,
    /// Radical-membership results in test order, up to the first failure.
    pub tested: Vec<(VarId, bool)>,
}

pub fn check_weak_complex(f: &Parameterization) -> Result<WeakVerdict> {
    check_weak_complex_with(f, &WeakConfig::default())
}

pub fn check_weak_complex_with(f: &Parameterization, cfg: &WeakConfig) -> Result<WeakVerdict> {
    let ideal = coefficient_ideal_with(f, cfg)?;
    let mut tested = Vec::new();
    for v in entry_variables(f) {
        let ok = radical_member_with(&v, &ideal, &cfg.groebner)?;
        tested.push((v, ok));
        if !ok {
            return Ok(WeakVerdict {
                status: WeakStatus::ComplexSolutionExists,
                free_variable: Some(v),
                ideal,
                tested,
            });
        }
    }
    Ok(WeakVerdict {
        status: WeakStatus::WeaklyNonplanarComplex,
        free_variable: None,
        ideal,
        tested,
    })
}

/// A complex matrix `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMatrix {
    pub re: RatMatrix,
    pub im: RatMatrix,
}

impl ComplexMatrix {
    pub fn new(re: RatMatrix, im: RatMatrix) -> Result<Self> {
        if (re.rows(), re.cols()) != (im.rows(), im.cols()) {
            return Err(Error::DimensionMismatch(
                "real and imaginary parts differ in shape".into(),
            ));
        }
        Ok(Self { re, im })
    }

    pub fn real(re: RatMatrix) -> Self {
        let im = RatMatrix::zeros(re.rows(), re.cols());
        Self { re, im }
    }

    fn to_poly(&self) -> PolyMatrix {
        let i = Poly::var(VarId::Imag);
        PolyMatrix::from_fn(self.re.rows(), self.re.cols(), |r, c| {
            let re = Poly::constant(self.re.get(r, c));
            &re + &i.scale(&self.im.get(r, c))
        })
    }
}

/// Whether `det(A·f(x) + B)` vanishes identically, computed with `i` as a
/// variable reduced modulo `i² + 1`. `A = B = 0` passes trivially.
pub fn verify_complex_witness(
    f: &Parameterization,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
) -> Result<bool> {
    let (m, n) = (f.m(), f.n());
    if (a.re.rows(), a.re.cols()) != (n, m) || (b.re.rows(), b.re.cols()) != (n, n) {
        return Err(Error::DimensionMismatch(format!(
            "need A {n}x{m} and B {n}x{n}, got A {}x{} and B {}x{}",
            a.re.rows(),
            a.re.cols(),
            b.re.rows(),
            b.re.cols()
        )));
    }
    let y = a.to_poly().matmul(f.entries())?.add(&b.to_poly())?;
    let y = y.map(Poly::reduce_imaginary);
    let det = sym_det_bounded(&y, n.max(1))?;
    Ok(det.reduce_imaginary().is_zero())
}

/// The example `[[x, y], [−y, x]]` together with the pair
/// `A = [[1, i], [0, 0]]`, `B = [[0, 0], [1, i]]` that annihilates it.
pub fn rotation_example() -> (Parameterization, ComplexMatrix, ComplexMatrix) {
    let x = Poly::var(VarId::param(1));
    let y = Poly::var(VarId::param(2));
    let f = PolyMatrix::from_rows(vec![vec![x.clone(), y.clone()], vec![-&y, x]]).expect("square");
    let f = Parameterization::new(2, f).expect("valid");
    let a = ComplexMatrix::new(
        RatMatrix::from_i64(&[&[1, 0], &[0, 0]]),
        RatMatrix::from_i64(&[&[0, 1], &[0, 0]]),
    )
    .expect("same shape");
    let b = ComplexMatrix::new(
        RatMatrix::from_i64(&[&[0, 0], &[1, 0]]),
        RatMatrix::from_i64(&[&[0, 0], &[0, 1]]),
    )
    .expect("same shape");
    (f, a, b)
}

/// Evaluates `det(A·f(x) + B)` at rational `A`, `B`, `x`.
pub fn pencil_det_at(f: &Parameterization, a: &RatMatrix, b: &RatMatrix, x: &[Rat]) -> Result<Rat> {
    let fx = f.entries().eval(|v| match v {
        VarId::Param(j) => x[*j as usize - 1].clone(),
        _ => Rat::from_integer(0.into()),
    });
    let y = PolyMatrix::from_rat(a)
        .matmul(&PolyMatrix::from_rat(&fx))?
        .add(&PolyMatrix::from_rat(b))?;
    Ok(sym_det_bounded(&y, f.n())?.constant_term())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::rat;
    use crate::groebner::{buchberger, ideal_member, TermOrder};
    use crate::polyring::parse_poly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn param(k: usize, rows: &[&[&str]]) -> Parameterization {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_poly(s).unwrap()).collect())
            .collect();
        Parameterization::new(k, PolyMatrix::from_rows(rows).unwrap()).unwrap()
    }

    #[test]
    fn scalar_identity_ideal() {
        let f = param(1, &[&["x1"]]);
        let ideal = coefficient_ideal(&f).unwrap();
        assert_eq!(
            ideal,
            vec![parse_poly("b[1,1]").unwrap(), parse_poly("a[1,1]").unwrap()]
        );
        let v = check_weak_complex(&f).unwrap();
        assert_eq!(v.status, WeakStatus::WeaklyNonplanarComplex);
        assert_eq!(v.tested.len(), 2);
    }

    #[test]
    fn zero_map_leaves_a_free() {
        let f = param(1, &[&["0"]]);
        assert_eq!(
            coefficient_ideal(&f).unwrap(),
            vec![parse_poly("b[1,1]").unwrap()]
        );
        let v = check_weak_complex(&f).unwrap();
        assert_eq!(v.status, WeakStatus::ComplexSolutionExists);
        assert_eq!(v.free_variable, Some(entry(EntryMatrix::A, 1, 1)));
    }

    #[test]
    fn rotation_manifold_has_complex_solution() {
        let (f, a, b) = rotation_example();
        assert_eq!(
            coefficient_ideal(&f)
                .unwrap()
                .iter()
                .flat_map(|p| p.vars())
                .collect::<std::collections::BTreeSet<_>>()
                .len(),
            8
        );
        assert!(verify_complex_witness(&f, &a, &b).unwrap());
        let v = check_weak_complex(&f).unwrap();
        assert_eq!(v.status, WeakStatus::ComplexSolutionExists);
    }

    #[test]
    fn witness_checks() {
        let f = param(1, &[&["x1"]]);
        let one = ComplexMatrix::real(RatMatrix::from_i64(&[&[1]]));
        let zero = ComplexMatrix::real(RatMatrix::from_i64(&[&[0]]));
        assert!(!verify_complex_witness(&f, &one, &zero).unwrap());
        assert!(verify_complex_witness(&f, &zero, &zero).unwrap());
        let wide = ComplexMatrix::real(RatMatrix::zeros(1, 2));
        assert!(verify_complex_witness(&f, &wide, &zero).is_err());
    }

    #[test]
    fn rejects_foreign_variables() {
        let f = PolyMatrix::from_rows(vec![vec![parse_poly("x2").unwrap()]]).unwrap();
        assert!(Parameterization::new(1, f).is_err());
    }

    #[test]
    fn rectangular_shapes() {
        // f(x) = (x, x²) ∈ M_{1,2}: A is 2×1, B is 2×2.
        let f = param(1, &[&["x1", "x1^2"]]);
        assert_eq!(entry_variables(&f).len(), 6);
        let ideal = coefficient_ideal(&f).unwrap();
        assert!(!ideal.is_empty());
        // A = (1, 0)ᵀ, B = [[0,0],[0,0]] kills det since the second row vanishes.
        let a = ComplexMatrix::real(RatMatrix::from_i64(&[&[1], &[0]]));
        let b = ComplexMatrix::real(RatMatrix::zeros(2, 2));
        assert!(verify_complex_witness(&f, &a, &b).unwrap());
        assert_eq!(
            check_weak_complex(&f).unwrap().status,
            WeakStatus::ComplexSolutionExists
        );
    }

    #[test]
    fn ideal_invariant_under_linear_reparameterisation() {
        let (f, _, _) = rotation_example();
        let g = param(2, &[&["x1 + x2", "x1 - x2"], &["x2 - x1", "x1 + x2"]]);
        let fi = coefficient_ideal(&f).unwrap();
        let gi = coefficient_ideal(&g).unwrap();
        let fb = buchberger(&fi, &TermOrder::grevlex()).unwrap();
        let gb = buchberger(&gi, &TermOrder::grevlex()).unwrap();
        assert!(gi.iter().all(|p| ideal_member(p, &fb)));
        assert!(fi.iter().all(|p| ideal_member(p, &gb)));
    }

    #[test]
    fn positive_verdict_survives_random_sampling() {
        let f = param(1, &[&["x1"]]);
        assert_eq!(
            check_weak_complex(&f).unwrap().status,
            WeakStatus::WeaklyNonplanarComplex
        );
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let a = RatMatrix::from_i64(&[&[rng.random_range(-3..=3)]]);
            let b = RatMatrix::from_i64(&[&[rng.random_range(-3..=3)]]);
            if a.nnz() + b.nnz() == 0 {
                continue;
            }
            let vanishes = (0..20).all(|_| {
                let x = vec![rat(rng.random_range(-50..=50))];
                pencil_det_at(&f, &a, &b, &x).unwrap() == rat(0)
            });
            assert!(!vanishes);
        }
    }
}
