//! Strong nonplanarity of `ψ(M_{m,m}^r)` for a word system.
//!
//! `ψ` is polynomial and vanishes at the origin, so its Plücker image spans
//! the coordinate space exactly when the coefficient vectors of its
//! nonconstant monomials do. The verdict is that rank test, done over ℚ.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{certified_echelon, primitive, Rat};
use crate::plucker::{coefficient_matrix, plucker_embed_bounded, MinorIndex, PluckerVector};
use crate::words::WordSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrongConfig {
    pub max_m: usize,
    /// Cap on the total number of terms across all Plücker coordinates.
    pub max_terms: u64,
}

impl Default for StrongConfig {
    fn default() -> Self {
        Self {
            max_m: 4,
            max_terms: 10_000_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongVerdict {
    pub is_strongly_nonplanar: bool,
    pub rank: usize,
    pub c: usize,
    /// Number of distinct nonconstant monomials, i.e. coefficient-matrix rows.
    pub monomials: usize,
    /// Dimension of the space of linear functionals vanishing on the image.
    pub kernel_dim: usize,
    /// For a negative verdict, an integral functional on the minor index set
    /// that annihilates every Plücker coordinate: the kernel vector attached
    /// to the last dependent coordinate in minor order.
    pub witness: Option<Vec<Rat>>,
    pub index: Vec<MinorIndex>,
}

impl StrongVerdict {
    /// Witness entries as `(minor, coefficient)` pairs with nonzero coefficient.
    pub fn witness_terms(&self) -> Vec<(&MinorIndex, &Rat)> {
        match &self.witness {
            Some(w) => self
                .index
                .iter()
                .zip(w)
                .filter(|(_, x)| !num_traits::Zero::is_zero(*x))
                .collect(),
            None => Vec::new(),
        }
    }
}

pub fn check_strong(ws: &WordSystem) -> Result<StrongVerdict> {
    check_strong_with(ws, &StrongConfig::default())
}

pub fn check_strong_with(ws: &WordSystem, cfg: &StrongConfig) -> Result<StrongVerdict> {
    check_strong_detailed(ws, cfg).map(|(v, _)| v)
}

/// Runs the check and also returns the Plücker vector it was computed from.
pub fn check_strong_detailed(
    ws: &WordSystem,
    cfg: &StrongConfig,
) -> Result<(StrongVerdict, PluckerVector)> {
    if ws.m() > cfg.max_m {
        return Err(Error::BudgetExceeded {
            what: "matrix size m",
            limit: cfg.max_m as u64,
        });
    }
    let psi = ws.build_psi()?;
    let plucker = plucker_embed_bounded(&psi, cfg.max_terms)?;
    let cm = coefficient_matrix(&plucker);
    let c = plucker.len();
    let ech = certified_echelon(&cm.matrix);
    let kernel = ech.nullspace();
    let witness = kernel.last().map(|w| primitive(w));
    let verdict = StrongVerdict {
        is_strongly_nonplanar: ech.rank() == c,
        rank: ech.rank(),
        c,
        monomials: cm.monomials.len(),
        kernel_dim: kernel.len(),
        witness,
        index: plucker.index.clone(),
    };
    Ok((verdict, plucker))
}

/// Both sides of the equivalence "strongly nonplanar ⇔ abelianizations distinct".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub strongly_nonplanar: bool,
    pub distinct_abelianizations: bool,
}

impl EquivalenceReport {
    pub fn consistent(&self) -> bool {
        self.strongly_nonplanar == self.distinct_abelianizations
    }
}

pub fn check_equivalence(ws: &WordSystem) -> Result<EquivalenceReport> {
    check_equivalence_with(ws, &StrongConfig::default())
}

pub fn check_equivalence_with(ws: &WordSystem, cfg: &StrongConfig) -> Result<EquivalenceReport> {
    Ok(EquivalenceReport {
        strongly_nonplanar: check_strong_with(ws, cfg)?.is_strongly_nonplanar,
        distinct_abelianizations: ws.distinct_abelianizations(),
    })
}
