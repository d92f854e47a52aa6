//! Labelled paths in the multigraph `(V, E)` with `V = {1..m}` and
//! `E = V × V × {1..r}`.
//!
//! A path with label `ℓ` walks `v_0 → v_1 → ⋯ → v_k` using generator
//! `f_ℓ(s)` on step `s`, where `p_ℓ = x_{f_ℓ(1)} ⋯ x_{f_ℓ(k)}`. Summing the
//! edge monomials over all such paths from `i` to `t` gives the `(i, t)`
//! entry of `p_ℓ(X)`, which makes this module an independent route to the
//! entries of `ψ`.
//!
//! The second half checks the ordering lemma behind the rank argument by
//! exhaustive search: for a minor `d` it builds the witness collection of
//! paths, then enumerates every other collection with the same edge multiset
//! whose initial vertices and columns are both sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::Rat;
use crate::multiset::Multiset;
use crate::plucker::MinorIndex;
use crate::polyring::{Edge, Monomial, Poly, VarId};
use crate::words::WordSystem;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Path {
    /// 1-based word index `ℓ`.
    pub label: usize,
    /// `v_0, …, v_k`, 1-based.
    pub vertices: Vec<usize>,
}

impl Path {
    pub fn new(ws: &WordSystem, label: usize, vertices: Vec<usize>) -> Result<Self> {
        if label == 0 || label > ws.n() {
            return Err(Error::InvalidInput(format!(
                "label {label} outside 1..={}",
                ws.n()
            )));
        }
        if vertices.len() != ws.word(label).len() + 1 {
            return Err(Error::InvalidInput(format!(
                "label {label} needs {} vertices, got {}",
                ws.word(label).len() + 1,
                vertices.len()
            )));
        }
        if vertices.iter().any(|&v| v == 0 || v > ws.m()) {
            return Err(Error::InvalidInput(format!(
                "vertices must lie in 1..={}",
                ws.m()
            )));
        }
        Ok(Self { label, vertices })
    }

    pub fn initial(&self) -> usize {
        self.vertices[0]
    }

    pub fn terminal(&self) -> usize {
        *self
            .vertices
            .last()
            .expect("paths have at least two vertices")
    }

    /// Global column `⟨t(P), ℓ(P)⟩`.
    pub fn column(&self, ws: &WordSystem) -> usize {
        ws.column(self.terminal(), self.label)
    }

    pub fn edges(&self, ws: &WordSystem) -> Vec<Edge> {
        let letters = ws.word(self.label).letters();
        self.vertices
            .windows(2)
            .zip(letters)
            .map(|(v, &q)| Edge::new(v[0], v[1], q as usize))
            .collect()
    }

    pub fn edge_multiset(&self, ws: &WordSystem) -> Multiset<Edge> {
        Multiset::from_items(self.edges(ws))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.label)?;
        for (k, v) in self.vertices.iter().enumerate() {
            if k > 0 {
                f.write_str("->")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All paths with label `label`, optionally pinned at either end.
/// With both ends pinned there are `m^(k−1)` of them.
pub fn enumerate_paths(
    ws: &WordSystem,
    label: usize,
    initial: Option<usize>,
    terminal: Option<usize>,
) -> Result<Vec<Path>> {
    if label == 0 || label > ws.n() {
        return Err(Error::InvalidInput(format!(
            "label {label} outside 1..={}",
            ws.n()
        )));
    }
    let m = ws.m();
    for v in [initial, terminal].into_iter().flatten() {
        if v == 0 || v > m {
            return Err(Error::InvalidInput(format!("vertex {v} outside 1..={m}")));
        }
    }
    let k = ws.word(label).len();
    let mut out = Vec::new();
    let mut verts = vec![0; k + 1];
    fn rec(
        pos: usize,
        verts: &mut Vec<usize>,
        m: usize,
        label: usize,
        initial: Option<usize>,
        terminal: Option<usize>,
        out: &mut Vec<Path>,
    ) {
        let last = verts.len() - 1;
        if pos > last {
            out.push(Path {
                label,
                vertices: verts.clone(),
            });
            return;
        }
        let pinned = match pos {
            0 => initial,
            p if p == last => terminal,
            _ => None,
        };
        let choices: Vec<usize> = match pinned {
            Some(v) => vec![v],
            None => (1..=m).collect(),
        };
        for v in choices {
            verts[pos] = v;
            rec(pos + 1, verts, m, label, initial, terminal, out);
        }
    }
    rec(0, &mut verts, m, label, initial, terminal, &mut out);
    Ok(out)
}

/// `Σ_P Π_{e∈F(P)} A_e` over paths `i → t` with label `ℓ`.
pub fn path_sum_entry(ws: &WordSystem, i: usize, t: usize, label: usize) -> Result<Poly> {
    let mut acc = Poly::zero();
    for p in enumerate_paths(ws, label, Some(i), Some(t))? {
        let mono = Monomial::from_vars(p.edges(ws).into_iter().map(VarId::Edge));
        acc.add_term(mono, Rat::from_integer(1.into()));
    }
    Ok(acc)
}

/// A finite multiset of paths.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PathCollection {
    pub paths: Multiset<Path>,
}

impl PathCollection {
    pub fn from_paths<I: IntoIterator<Item = Path>>(paths: I) -> Self {
        Self {
            paths: Multiset::from_items(paths),
        }
    }

    /// `I(𝒫)`.
    pub fn initial_vertices(&self) -> Multiset<usize> {
        self.paths
            .msum(|p| Some(Multiset::singleton(p.initial())))
            .expect("total family")
    }

    /// `J(𝒫)`.
    pub fn columns(&self, ws: &WordSystem) -> Multiset<usize> {
        self.paths
            .msum(|p| Some(Multiset::singleton(p.column(ws))))
            .expect("total family")
    }

    /// `F(𝒫) = Σ_{P∈𝒫} F(P)`.
    pub fn edge_multiset(&self, ws: &WordSystem) -> Multiset<Edge> {
        self.paths
            .msum(|p| Some(p.edge_multiset(ws)))
            .expect("total family")
    }

    /// `d(𝒫)` when both `I(𝒫)` and `J(𝒫)` are sets, otherwise `None`.
    pub fn minor_index(&self, ws: &WordSystem) -> Option<MinorIndex> {
        let i = self.initial_vertices();
        let j = self.columns(ws);
        if !i.is_set() || !j.is_set() {
            return None;
        }
        MinorIndex::new(i.support(), j.support()).ok()
    }
}

impl fmt::Display for PathCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, p) in self.paths.expanded().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}

fn check_minor(ws: &WordSystem, d: &MinorIndex) -> Result<()> {
    if d.rows.iter().any(|&i| i > ws.m()) || d.cols.iter().any(|&j| j > ws.width()) {
        return Err(Error::InvalidInput(format!("minor {d} does not fit ψ")));
    }
    Ok(())
}

/// `J[i] = {ℓ : ⟨i, ℓ⟩ ∈ J}`.
fn labels_at(ws: &WordSystem, d: &MinorIndex, i: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for &j in &d.cols {
        let (t, l) = ws.decode_column(j)?;
        if t == i {
            out.push(l);
        }
    }
    Ok(out)
}

/// `f(d) = Σ_{i∈I, J[i]≠∅} min_{ℓ∈J[i]} ‖ℓ‖`.
pub fn f_value(ws: &WordSystem, d: &MinorIndex) -> Result<usize> {
    check_minor(ws, d)?;
    let mut total = 0;
    for &i in &d.rows {
        if let Some(min) = labels_at(ws, d, i)?.iter().map(|&l| ws.word(l).len()).min() {
            total += min;
        }
    }
    Ok(total)
}

/// The collection `{P_i : i ∈ I}` whose paths loop at `i` and then step to
/// `t_i`, where `σ(i) = ⟨t_i, ℓ_i⟩` and `σ` sends each `i` with `J[i] ≠ ∅`
/// to `⟨i, ℓ_i⟩` with `‖ℓ_i‖` minimal (smallest label on ties). The other
/// rows take the remaining columns in ascending order.
pub fn lemma_witness(ws: &WordSystem, d: &MinorIndex) -> Result<PathCollection> {
    check_minor(ws, d)?;
    let mut sigma: Vec<Option<usize>> = vec![None; d.size()];
    let mut taken = vec![false; d.size()];
    for (k, &i) in d.rows.iter().enumerate() {
        let best = labels_at(ws, d, i)?
            .into_iter()
            .min_by_key(|&l| (ws.word(l).len(), l));
        if let Some(l) = best {
            let col = ws.column(i, l);
            let pos = d.cols.iter().position(|&j| j == col).expect("column in J");
            sigma[k] = Some(col);
            taken[pos] = true;
        }
    }
    let mut free = d
        .cols
        .iter()
        .zip(&taken)
        .filter(|(_, t)| !**t)
        .map(|(j, _)| *j);
    for s in sigma.iter_mut().filter(|s| s.is_none()) {
        *s = Some(
            free.next()
                .ok_or_else(|| Error::InvalidInput("no bijection I → J".into()))?,
        );
    }
    let mut paths = Vec::with_capacity(d.size());
    for (&i, col) in d.rows.iter().zip(sigma) {
        let (t, l) = ws.decode_column(col.expect("assigned"))?;
        let k = ws.word(l).len();
        let mut vertices = vec![i; k];
        vertices.push(t);
        paths.push(Path::new(ws, l, vertices)?);
    }
    Ok(PathCollection::from_paths(paths))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub holds: bool,
    pub f_value: usize,
    pub witness: PathCollection,
    /// Search nodes visited, partial collections included.
    pub visited: u64,
    /// Complete collections with the witness's edge multiset and `d ∈ D`.
    pub collections: u64,
    /// A collection `𝒫′ ≠ 𝒫` with `f(d(𝒫′)) ≥ f(d)`, if one exists.
    pub counterexample: Option<PathCollection>,
}

pub const DEFAULT_LEMMA_BUDGET: u64 = 1_000_000;

pub fn verify_lemma(ws: &WordSystem, d: &MinorIndex) -> Result<bool> {
    Ok(verify_lemma_with(ws, d, DEFAULT_LEMMA_BUDGET)?.holds)
}

/// Exhaustively checks that every other collection `𝒫′` with the same edge
/// multiset as the witness and `d(𝒫′) ∈ D` has `f(d(𝒫′)) < f(d)`.
pub fn verify_lemma_with(ws: &WordSystem, d: &MinorIndex, budget: u64) -> Result<LemmaCheck> {
    let witness = lemma_witness(ws, d)?;
    let fd = f_value(ws, d)?;
    let target = witness.edge_multiset(ws);
    let mine: Vec<Path> = witness.paths.expanded().cloned().collect();

    let mut search = Search {
        ws,
        remaining: target,
        chosen: Vec::new(),
        used_initial: vec![false; ws.m() + 1],
        used_column: vec![false; ws.width() + 1],
        visited: 0,
        collections: 0,
        budget,
    };
    let mut counterexample = None;
    search.run(&mut |ws, paths| {
        if paths == mine.as_slice() {
            return true;
        }
        let other = PathCollection::from_paths(paths.iter().cloned());
        let d2 = other.minor_index(ws).expect("search keeps I and J sets");
        let f2 = f_value(ws, &d2).expect("minor fits");
        if f2 >= fd {
            counterexample = Some(other);
            return false;
        }
        true
    })?;
    Ok(LemmaCheck {
        holds: counterexample.is_none(),
        f_value: fd,
        witness,
        visited: search.visited,
        collections: search.collections,
        counterexample,
    })
}

struct Search<'a> {
    ws: &'a WordSystem,
    remaining: Multiset<Edge>,
    chosen: Vec<Path>,
    used_initial: Vec<bool>,
    used_column: Vec<bool>,
    visited: u64,
    collections: u64,
    budget: u64,
}

impl Search<'_> {
    /// Visits every strictly increasing sequence of paths whose edge
    /// multisets sum to the target, with pairwise distinct initial vertices
    /// and columns. Returns `Ok(false)` when `visit` asked to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&WordSystem, &[Path]) -> bool) -> Result<bool> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::BudgetExceeded {
                what: "path collections",
                limit: self.budget,
            });
        }
        if self.remaining.is_empty() {
            if self.chosen.is_empty() {
                return Ok(true);
            }
            self.collections += 1;
            return Ok(visit(self.ws, &self.chosen));
        }
        for p in self.candidates() {
            let edges = p.edge_multiset(self.ws);
            let col = p.column(self.ws);
            self.remaining = self.remaining.checked_sub(&edges).expect("candidate fits");
            self.used_initial[p.initial()] = true;
            self.used_column[col] = true;
            self.chosen.push(p);
            let go_on = self.run(visit)?;
            let p = self.chosen.pop().expect("pushed above");
            self.used_column[col] = false;
            self.used_initial[p.initial()] = false;
            self.remaining = self.remaining.union_sum(&edges);
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Paths greater than the last chosen one that fit in the remaining edges
    /// and keep initial vertices and columns distinct.
    fn candidates(&self) -> Vec<Path> {
        let ws = self.ws;
        let last = self.chosen.last();
        let first_label = last.map_or(1, |p| p.label);
        let mut out = Vec::new();
        let mut pool = self.remaining.clone();
        for label in first_label..=ws.n() {
            let letters = ws.word(label).letters();
            for v0 in 1..=ws.m() {
                if self.used_initial[v0] {
                    continue;
                }
                let mut verts = vec![v0];
                self.extend(letters, &mut verts, &mut pool, &mut |verts: &[usize]| {
                    let t = *verts.last().expect("nonempty");
                    if self.used_column[ws.column(t, label)] {
                        return;
                    }
                    let p = Path {
                        label,
                        vertices: verts.to_vec(),
                    };
                    if last.is_none_or(|l| &p > l) {
                        out.push(p);
                    }
                });
            }
        }
        out
    }

    fn extend(
        &self,
        letters: &[u32],
        verts: &mut Vec<usize>,
        pool: &mut Multiset<Edge>,
        emit: &mut dyn FnMut(&[usize]),
    ) {
        let step = verts.len() - 1;
        if step == letters.len() {
            emit(verts);
            return;
        }
        let from = *verts.last().expect("nonempty");
        for to in 1..=self.ws.m() {
            let e = Edge::new(from, to, letters[step] as usize);
            if pool.remove(&e, 1) {
                verts.push(to);
                self.extend(letters, verts, pool, emit);
                verts.pop();
                pool.insert(e, 1);
            }
        }
    }
}
