//! Sparse commutative polynomials over ℚ and matrices of them.

mod matrix;
mod parse;

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::exactlinalg::Rat;
use crate::multiset::Multiset;

pub use matrix::{generic_matrix, sym_det, sym_det_bounded, PolyMatrix, DEFAULT_DET_LIMIT};
pub use parse::parse_poly;

/// An edge `(i, t, q)` of the multigraph on matrix indices: the entry in
/// row `from`, column `to` of generator `gen`. All indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub from: u32,
    pub to: u32,
    pub gen: u32,
}

impl Edge {
    pub fn new(from: usize, to: usize, gen: usize) -> Self {
        Self {
            from: from as u32,
            to: to as u32,
            gen: gen as u32,
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.from, self.to, self.gen)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EntryMatrix {
    A,
    B,
}

/// A polynomial variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum VarId {
    /// Entry `A[i,t,q] = [X_q]_{i,t}` of a generic generator matrix.
    Edge(Edge),
    /// Free parameter `x_k` of a parameterisation.
    Param(u32),
    /// Entry of one of the unknown matrices in a weak-nonplanarity test,
    /// printed `a[i,j]` / `b[i,j]`.
    Entry {
        mat: EntryMatrix,
        row: u32,
        col: u32,
    },
    /// Auxiliary variable `z_k`.
    Aux(u32),
    /// The imaginary unit, used only with reduction modulo `i² + 1`.
    Imag,
}

impl VarId {
    pub fn edge(from: usize, to: usize, gen: usize) -> Self {
        VarId::Edge(Edge::new(from, to, gen))
    }

    pub fn param(k: usize) -> Self {
        VarId::Param(k as u32)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Edge(e) => write!(f, "A[{},{},{}]", e.from, e.to, e.gen),
            VarId::Param(k) => write!(f, "x{k}"),
            VarId::Entry { mat, row, col } => {
                let c = match mat {
                    EntryMatrix::A => 'a',
                    EntryMatrix::B => 'b',
                };
                write!(f, "{c}[{row},{col}]")
            }
            VarId::Aux(k) => write!(f, "z{k}"),
            VarId::Imag => f.write_str("i"),
        }
    }
}

/// A commutative monomial: a multiset of variables.
///
/// Ordered lexicographically on the ascending list of its variables (with
/// repetition), so `1 < x < x² < xy < y`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Multiset<VarId>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: VarId) -> Self {
        Self(Multiset::singleton(v))
    }

    pub fn from_vars<I: IntoIterator<Item = VarId>>(vars: I) -> Self {
        Self(Multiset::from_items(vars))
    }

    pub fn from_powers<I: IntoIterator<Item = (VarId, u32)>>(powers: I) -> Self {
        Self(Multiset::from_counts(powers))
    }

    pub fn exponents(&self) -> &Multiset<VarId> {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.cardinality()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn power_of(&self, v: &VarId) -> u32 {
        self.0.count(v)
    }

    pub fn powers(&self) -> impl Iterator<Item = (&VarId, u32)> + '_ {
        self.0.iter()
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.is_submultiset(&other.0)
    }

    /// Splits into the part built from variables satisfying `pred` and the rest.
    pub fn split<F: Fn(&VarId) -> bool>(&self, pred: F) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self
            .0
            .iter()
            .map(|(v, c)| (*v, c))
            .partition(|(v, _)| pred(v));
        (Monomial::from_powers(a), Monomial::from_powers(b))
    }
}

impl Mul for &Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.union_sum(&rhs.0))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.expanded().cmp(other.0.expanded())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (n, (v, c)) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str("*")?;
            }
            if c == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{c}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Sparse polynomial with rational coefficients. Zero coefficients are
/// never stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn var(v: VarId) -> Self {
        Self::term(Monomial::var(v), Rat::one())
    }

    pub fn term(m: Monomial, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rat)> + '_ {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, Rat)> {
        self.terms.into_iter()
    }

    /// Coefficient of `m`, zero if absent.
    pub fn coefficient(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coefficient(&Monomial::one())
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms
            .keys()
            .flat_map(|m| m.powers().map(|(v, _)| *v))
            .collect()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Poly, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            self.add_term(m.clone(), v * c);
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at the point given by `value`.
    pub fn eval<F: Fn(&VarId) -> Rat>(&self, value: F) -> Rat {
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.powers() {
                let x = value(v);
                for _ in 0..e {
                    t *= &x;
                }
            }
            acc += t;
        }
        acc
    }

    /// Replaces every variable for which `sub` returns `Some` by that polynomial.
    pub fn substitute<F: Fn(&VarId) -> Option<Poly>>(&self, sub: F) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            let mut kept = Vec::new();
            for (v, e) in m.powers() {
                match sub(v) {
                    Some(p) => t = &t * &p.pow(e),
                    None => kept.push((*v, e)),
                }
            }
            t = &t * &Poly::term(Monomial::from_powers(kept), Rat::one());
            out += &t;
        }
        out
    }

    /// Reduces modulo `i² + 1` in the variable [`VarId::Imag`].
    pub fn reduce_imaginary(&self) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = m.power_of(&VarId::Imag);
            if e < 2 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let rest = m
                .powers()
                .filter(|(v, _)| **v != VarId::Imag)
                .map(|(v, k)| (*v, k));
            let mono = Monomial::from_powers(rest.chain(std::iter::once((VarId::Imag, e % 2))));
            let sign = if (e / 2) % 2 == 0 {
                c.clone()
            } else {
                -c.clone()
            };
            out.add_term(mono, sign);
        }
        out
    }
}

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

impl From<VarId> for Poly {
    fn from(v: VarId) -> Self {
        Poly::var(v)
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Poly> for Poly {
    fn sub_assign(&mut self, rhs: &Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma * mb, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (n, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlinalg::{rat, ratio};
    use proptest::prelude::*;

    fn x() -> Poly {
        Poly::var(VarId::param(1))
    }

    fn y() -> Poly {
        Poly::var(VarId::param(2))
    }

    fn c(n: i64) -> Poly {
        Poly::constant(rat(n))
    }

    #[test]
    fn ring_examples() {
        assert_eq!(&(&x() + &c(1)) + &(&x() - &c(1)), x().scale(&rat(2)));
        let lhs = &(&x() + &y()) * &(&x() - &y());
        assert_eq!(lhs, &(&x() * &x()) - &(&y() * &y()));
    }

    #[test]
    fn coefficient_examples() {
        let p = &(&x() * &x()) + &(&x() * &y()).scale(&rat(3));
        let xy = Monomial::from_vars([VarId::param(1), VarId::param(2)]);
        assert_eq!(p.coefficient(&xy), rat(3));
        assert_eq!(
            (&x() * &x()).coefficient(&Monomial::var(VarId::param(2))),
            rat(0)
        );
        assert_eq!(c(5).coefficient(&Monomial::one()), rat(5));
    }

    #[test]
    fn display_is_descending_canonical() {
        let a121 = Poly::var(VarId::edge(1, 2, 1));
        let a211 = Poly::var(VarId::edge(2, 1, 1));
        let p = &(&(&a121 * &a121) * &a211).scale(&rat(3)) - &Poly::constant(ratio(1, 2));
        assert_eq!(p.to_string(), "3*A[1,2,1]^2*A[2,1,1] - 1/2");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!((-&x()).to_string(), "-x1");
    }

    #[test]
    fn monomial_order_is_lex_on_sorted_lists() {
        let x1 = VarId::param(1);
        let x2 = VarId::param(2);
        let one = Monomial::one();
        let a = Monomial::var(x1);
        let aa = Monomial::from_vars([x1, x1]);
        let ab = Monomial::from_vars([x1, x2]);
        let b = Monomial::var(x2);
        assert!(one < a && a < aa && aa < ab && ab < b);
    }

    #[test]
    fn imaginary_reduction() {
        let i = Poly::var(VarId::Imag);
        assert_eq!((&i * &i).reduce_imaginary(), c(-1));
        assert_eq!(i.pow(3).reduce_imaginary(), -&i);
        assert_eq!(i.pow(4).reduce_imaginary(), c(1));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u32..3, 0u32..3, 0u32..2, -3i64..4), 0..5).prop_map(|ts| {
            Poly::from_terms(ts.into_iter().map(|(a, b, z, k)| {
                (
                    Monomial::from_powers([
                        (VarId::Param(1), a),
                        (VarId::Param(2), b),
                        (VarId::Param(3), z),
                    ]),
                    rat(k),
                )
            }))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&p + &q, &q + &p);
            prop_assert!((&p - &p).is_zero());
        }

        #[test]
        fn display_parse_roundtrip(p in arb_poly()) {
            prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
        }
    }
}
