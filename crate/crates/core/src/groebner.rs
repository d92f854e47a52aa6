//! Gröbner bases over ℚ by Buchberger's algorithm, and radical membership.
//!
//! Polynomials are converted to dense exponent vectors over a fixed variable
//! list for the duration of a computation. Position 0 in that list is the
//! highest variable; the list is the order's priority list followed by every
//! other variable in ascending [`VarId`] order.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::Rat;
use crate::polyring::{Monomial, Poly, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum OrderKind {
    #[default]
    Grevlex,
    Lex,
}

/// A monomial order: graded reverse lexicographic or lexicographic, with the
/// variables listed in `priority` ranked highest, first listed first.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TermOrder {
    pub kind: OrderKind,
    pub priority: Vec<VarId>,
}

impl TermOrder {
    pub fn grevlex() -> Self {
        Self::default()
    }

    pub fn lex(priority: Vec<VarId>) -> Self {
        Self {
            kind: OrderKind::Lex,
            priority,
        }
    }

    pub fn with_priority(mut self, priority: Vec<VarId>) -> Self {
        self.priority = priority;
        self
    }

    /// Variable list for a ring containing `vars`: prioritised variables
    /// first, then the rest in ascending order.
    fn layout(&self, vars: &BTreeSet<VarId>) -> Vec<VarId> {
        let mut out: Vec<VarId> = Vec::new();
        for v in &self.priority {
            if !out.contains(v) {
                out.push(*v);
            }
        }
        out.extend(vars.iter().filter(|v| !self.priority.contains(v)));
        out
    }

    /// Compares two monomials under this order.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let vars: BTreeSet<VarId> = a.powers().chain(b.powers()).map(|(v, _)| *v).collect();
        let ring = Ring::new(self.kind, self.layout(&vars));
        ring.cmp(&ring.exp(a), &ring.exp(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerConfig {
    /// Cap on the number of S-polynomials reduced.
    pub max_pairs: u64,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        Self { max_pairs: 200_000 }
    }
}

type Exp = Vec<u32>;
type Terms = Vec<(Exp, Rat)>;

struct Ring {
    kind: OrderKind,
    vars: Vec<VarId>,
    index: HashMap<VarId, usize>,
}

impl Ring {
    fn new(kind: OrderKind, vars: Vec<VarId>) -> Self {
        let index = vars.iter().enumerate().map(|(k, v)| (*v, k)).collect();
        Self { kind, vars, index }
    }

    fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self.kind {
            OrderKind::Lex => a.cmp(b),
            OrderKind::Grevlex => {
                let da: u64 = a.iter().map(|&e| u64::from(e)).sum();
                let db: u64 = b.iter().map(|&e| u64::from(e)).sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }

    fn exp(&self, m: &Monomial) -> Exp {
        let mut e = vec![0; self.vars.len()];
        for (v, k) in m.powers() {
            e[self.index[v]] = k;
        }
        e
    }

    fn import(&self, f: &Poly) -> Terms {
        let mut t: Terms = f.terms().map(|(m, c)| (self.exp(m), c.clone())).collect();
        t.sort_by(|a, b| self.cmp(&b.0, &a.0));
        t
    }

    fn export(&self, t: &Terms) -> Poly {
        Poly::from_terms(t.iter().map(|(e, c)| {
            let m = Monomial::from_powers(
                self.vars
                    .iter()
                    .zip(e)
                    .filter(|(_, &k)| k > 0)
                    .map(|(v, &k)| (*v, k)),
            );
            (m, c.clone())
        }))
    }

    /// `f − c·x^shift·g`, both sorted descending.
    fn sub_shifted(&self, f: &[(Exp, Rat)], c: &Rat, shift: &[u32], g: &[(Exp, Rat)]) -> Terms {
        let mut out = Vec::with_capacity(f.len() + g.len());
        let mut fi = f.iter().peekable();
        let mut gi = g.iter().map(|(e, k)| (add(e, shift), k * c)).peekable();
        loop {
            let ord = match (fi.peek(), gi.peek()) {
                (Some(a), Some(b)) => self.cmp(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => break,
            };
            match ord {
                Ordering::Greater => out.push(fi.next().expect("peeked").clone()),
                Ordering::Less => {
                    let (e, k) = gi.next().expect("peeked");
                    out.push((e, -k));
                }
                Ordering::Equal => {
                    let (e, a) = fi.next().expect("peeked");
                    let (_, b) = gi.next().expect("peeked");
                    let k = a - b;
                    if !k.is_zero() {
                        out.push((e.clone(), k));
                    }
                }
            }
        }
        out
    }

    /// Full reduction of `f` by the monic polynomials `basis`.
    fn reduce(&self, f: Terms, basis: &[Terms]) -> Terms {
        let mut p = f;
        let mut rem: Terms = Vec::new();
        let mut start = 0;
        while start < p.len() {
            let lead = &p[start].0;
            match basis.iter().find(|g| divides(&g[0].0, lead)) {
                Some(g) => {
                    let shift = sub(lead, &g[0].0);
                    let c = p[start].1.clone() / &g[0].1;
                    let rest = self.sub_shifted(&p[start..], &c, &shift, g);
                    p = rest;
                    start = 0;
                }
                None => {
                    rem.push(p[start].clone());
                    start += 1;
                }
            }
        }
        rem
    }
}

fn add(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

fn monic(mut t: Terms) -> Terms {
    if let Some(lc) = t.first().map(|x| x.1.clone()) {
        for (_, c) in &mut t {
            *c /= &lc;
        }
    }
    t
}

/// A reduced Gröbner basis: monic, no leading monomial divides another term
/// of the basis, sorted by descending leading monomial.
pub struct GroebnerBasis {
    order: TermOrder,
    ring: Ring,
    polys: Vec<Terms>,
}

impl GroebnerBasis {
    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn generators(&self) -> Vec<Poly> {
        self.polys.iter().map(|t| self.ring.export(t)).collect()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|t| {
                Monomial::from_powers(
                    self.ring
                        .vars
                        .iter()
                        .zip(&t[0].0)
                        .filter(|(_, &k)| k > 0)
                        .map(|(v, &k)| (*v, k)),
                )
            })
            .collect()
    }

    /// Whether the ideal is the whole ring, i.e. the basis is `{1}`.
    pub fn is_unit(&self) -> bool {
        self.polys.len() == 1
            && self.polys[0].len() == 1
            && self.polys[0][0].0.iter().all(|&e| e == 0)
    }

    /// The variable list of `self` extended by the variables of `f` that it
    /// lacks, placed below every existing variable. Extending this way keeps
    /// the order on old monomials, so the basis stays a Gröbner basis.
    fn extended(&self, f: &Poly) -> (Ring, Vec<Terms>) {
        let extra: BTreeSet<VarId> = f
            .vars()
            .into_iter()
            .filter(|v| !self.ring.index.contains_key(v))
            .collect();
        if extra.is_empty() {
            let ring = Ring::new(self.ring.kind, self.ring.vars.clone());
            return (ring, self.polys.clone());
        }
        let mut vars = self.ring.vars.clone();
        vars.extend(extra.iter().copied());
        let pad = extra.len();
        let polys = self
            .polys
            .iter()
            .map(|t| {
                t.iter()
                    .map(|(e, c)| {
                        let mut e = e.clone();
                        e.extend(std::iter::repeat_n(0, pad));
                        (e, c.clone())
                    })
                    .collect()
            })
            .collect();
        (Ring::new(self.ring.kind, vars), polys)
    }
}

impl std::fmt::Debug for GroebnerBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list()
            .entries(self.generators().iter().map(|p| p.to_string()))
            .finish()
    }
}

/// The leading monomial and coefficient of `f`, or `None` for zero.
pub fn leading_term(f: &Poly, order: &TermOrder) -> Option<(Monomial, Rat)> {
    f.terms()
        .max_by(|a, b| order.cmp(a.0, b.0))
        .map(|(m, c)| (m.clone(), c.clone()))
}

pub fn buchberger(gens: &[Poly], order: &TermOrder) -> Result<GroebnerBasis> {
    buchberger_with(gens, order, &GroebnerConfig::default())
}

pub fn buchberger_with(
    gens: &[Poly],
    order: &TermOrder,
    cfg: &GroebnerConfig,
) -> Result<GroebnerBasis> {
    let vars: BTreeSet<VarId> = gens.iter().flat_map(|g| g.vars()).collect();
    let ring = Ring::new(order.kind, order.layout(&vars));
    let unit = |ring: Ring| {
        let nv = ring.vars.len();
        GroebnerBasis {
            order: order.clone(),
            ring,
            polys: vec![vec![(vec![0; nv], Rat::one())]],
        }
    };

    let mut basis: Vec<Terms> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let t = monic(ring.import(g));
        if t[0].0.iter().all(|&e| e == 0) {
            return Ok(unit(ring));
        }
        basis.push(t);
    }

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pairs.push((i, j));
        }
    }
    let mut reduced = 0u64;
    while !pairs.is_empty() {
        // Normal strategy: smallest lcm first, ties by position.
        let lcm_of = |&(i, j): &(usize, usize)| lcm(&basis[i][0].0, &basis[j][0].0);
        let pick = (0..pairs.len())
            .min_by(|&a, &b| {
                ring.cmp(&lcm_of(&pairs[a]), &lcm_of(&pairs[b]))
                    .then_with(|| (pairs[a].1, pairs[a].0).cmp(&(pairs[b].1, pairs[b].0)))
            })
            .expect("nonempty");
        let (i, j) = pairs.swap_remove(pick);
        let (li, lj) = (&basis[i][0].0, &basis[j][0].0);
        if coprime(li, lj) {
            continue;
        }
        let l = lcm(li, lj);
        let pending = |a: usize, b: usize| pairs.contains(&(a.min(b), a.max(b)));
        let chain = (0..basis.len()).any(|k| {
            k != i && k != j && divides(&basis[k][0].0, &l) && !pending(i, k) && !pending(j, k)
        });
        if chain {
            continue;
        }
        reduced += 1;
        if reduced > cfg.max_pairs {
            return Err(Error::BudgetExceeded {
                what: "S-polynomial reductions",
                limit: cfg.max_pairs,
            });
        }
        let s = {
            let fi = ring.sub_shifted(&[], &-Rat::one(), &sub(&l, li), &basis[i]);
            ring.sub_shifted(&fi, &Rat::one(), &sub(&l, lj), &basis[j])
        };
        let r = ring.reduce(s, &basis);
        if r.is_empty() {
            continue;
        }
        let r = monic(r);
        if r[0].0.iter().all(|&e| e == 0) {
            return Ok(unit(ring));
        }
        let k = basis.len();
        basis.push(r);
        for a in 0..k {
            pairs.push((a, k));
        }
    }

    // Minimalise, then interreduce.
    let mut keep: Vec<Terms> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis.iter().enumerate().any(|(h, other)| {
            h != k && divides(&other[0].0, &g[0].0) && (other[0].0 != g[0].0 || h < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(keep.len());
    for k in 0..keep.len() {
        let others: Vec<Terms> = keep
            .iter()
            .enumerate()
            .filter(|(h, _)| *h != k)
            .map(|(_, g)| g.clone())
            .collect();
        let head = keep[k][0].clone();
        let tail = ring.reduce(keep[k][1..].to_vec(), &others);
        let mut g = vec![head];
        g.extend(tail);
        out.push(g);
    }
    out.sort_by(|a, b| ring.cmp(&b[0].0, &a[0].0));
    Ok(GroebnerBasis {
        order: order.clone(),
        ring,
        polys: out,
    })
}

/// Remainder of `f` on full reduction by `gb`. Variables of `f` that the
/// basis does not mention rank below all of its variables.
pub fn normal_form(f: &Poly, gb: &GroebnerBasis) -> Poly {
    let (ring, polys) = gb.extended(f);
    let r = ring.reduce(ring.import(f), &polys);
    ring.export(&r)
}

pub fn ideal_member(f: &Poly, gb: &GroebnerBasis) -> bool {
    normal_form(f, gb).is_zero()
}

/// A variable `z_k` occurring neither in `v` nor in `gens`.
fn fresh_aux(v: &VarId, gens: &[Poly]) -> VarId {
    let used = gens
        .iter()
        .flat_map(|g| g.vars())
        .chain(std::iter::once(*v))
        .filter_map(|x| match x {
            VarId::Aux(k) => Some(k),
            _ => None,
        })
        .max();
    VarId::Aux(used.map_or(1, |k| k + 1))
}

pub fn radical_member(v: &VarId, gens: &[Poly]) -> Result<bool> {
    radical_member_with(v, gens, &GroebnerConfig::default())
}

/// Whether some power of `v` lies in `⟨gens⟩`: by Rabinowitsch, exactly when
/// `⟨gens, 1 − z·v⟩` is the unit ideal for a fresh variable `z`.
pub fn radical_member_with(v: &VarId, gens: &[Poly], cfg: &GroebnerConfig) -> Result<bool> {
    let z = fresh_aux(v, gens);
    let mut all = gens.to_vec();
    all.push(&Poly::one() - &(&Poly::var(z) * &Poly::var(*v)));
    Ok(buchberger_with(&all, &TermOrder::grevlex(), cfg)?.is_unit())
}

/// Radical membership by elimination: under lex with `v` lowest, the basis
/// elements free of other variables generate `⟨gens⟩ ∩ ℚ[v]`, and some power
/// of `v` lies in the ideal exactly when that generator is a monomial.
pub fn radical_member_by_elimination(
    v: &VarId,
    gens: &[Poly],
    cfg: &GroebnerConfig,
) -> Result<bool> {
    let mut others: Vec<VarId> = gens
        .iter()
        .flat_map(|g| g.vars())
        .filter(|x| x != v)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    others.push(*v);
    let gb = buchberger_with(gens, &TermOrder::lex(others), cfg)?;
    Ok(gb
        .generators()
        .iter()
        .any(|g| g.vars().iter().all(|x| x == v) && g.num_terms() == 1))
}
