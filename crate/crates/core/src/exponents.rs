//! Finite-range estimates of the exponents of irrationality `ω(A)` and
//! multiplicative irrationality `ω_×(A)` of a real `m×n` matrix.
//!
//! Both exponents are limsups over `q ∈ ℤⁿ` of logarithmic ratios. A limsup
//! ignores any bounded set of `q`, so the estimate takes the maximum over the
//! shell `q_min ≤ ‖q‖∞ ≤ Q` rather than the whole box: small `q` give ratios
//! dominated by lucky early approximations (`q = 2` alone gives about 2.08
//! for the golden ratio) that say nothing about the tail. The default inner
//! radius is `⌈√Q⌉`. An optional lower bound on `Π_j (|q_j| ∨ 1)` narrows
//! both scans further; it is off by default and, when set, still gives the
//! two exponents the same candidate set.
//!
//! Only `q` whose first nonzero coordinate is positive are scanned, since `q`
//! and `−q` give the same ratios. `p` is the componentwise nearest integer to
//! `Aq`, which maximises every numerator.

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::Rat;

/// A real matrix, optionally with the exact rational entries its floats
/// approximate.
#[derive(Clone, Debug, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    exact: Option<Vec<Rat>>,
}

impl RealMatrix {
    /// Row-major floats.
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(Self {
            rows,
            cols,
            values,
            exact: None,
        })
    }

    /// Row-major rationals; the floats are their nearest approximations.
    pub fn from_rationals(rows: usize, cols: usize, exact: Vec<Rat>) -> Result<Self> {
        let values = exact
            .iter()
            .map(|r| r.to_f64().unwrap_or(f64::NAN))
            .collect();
        let mut out = Self::new(rows, cols, values)?;
        out.exact = Some(exact);
        Ok(out)
    }

    /// Floats taken as the exact dyadic rationals they are.
    pub fn from_exact_floats(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        let exact = values
            .iter()
            .map(|v| {
                Rat::from_float(*v).ok_or_else(|| Error::InvalidInput("non-finite entry".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out = Self::new(rows, cols, values)?;
        out.exact = Some(exact);
        Ok(out)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateConfig {
    /// Inner radius of the scanned shell; `None` means `⌈√Q⌉`.
    pub q_min: Option<u64>,
    /// Residuals below this are rechecked exactly, or clamped to it.
    pub tolerance: f64,
    pub max_candidates: u64,
    /// Lower bound on `Π_j (|q_j| ∨ 1)`, applied to both exponents.
    pub min_height: Option<u64>,
}

impl Default for EstimateConfig {
    fn default() -> Self {
        Self {
            q_min: None,
            tolerance: 1e-12,
            max_candidates: 500_000_000,
            min_height: None,
        }
    }
}

impl EstimateConfig {
    pub fn with_q_min(q_min: u64) -> Self {
        Self {
            q_min: Some(q_min),
            ..Self::default()
        }
    }
}

/// `⌈√Q⌉`.
pub fn default_q_min(q_max: u64) -> u64 {
    let r = q_max.isqrt();
    if r * r == q_max {
        r
    } else {
        r + 1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    /// Largest ratio seen; meaningless when `infinite` is set.
    pub value: f64,
    /// An exact solution `Aq = p` (or a zero factor for `ω_×`) was found.
    pub infinite: bool,
    pub best_q: Vec<i64>,
    pub best_p: Vec<i64>,
    pub q_max: u64,
    pub q_min: u64,
    /// Candidates whose ratio was evaluated.
    pub candidates: u64,
}

impl ExponentEstimate {
    /// `+∞` when infinite, else the value.
    pub fn as_f64(&self) -> f64 {
        if self.infinite {
            f64::INFINITY
        } else {
            self.value
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Sup,
    Multiplicative,
}

pub fn estimate_omega(a: &RealMatrix, q_max: u64) -> Result<ExponentEstimate> {
    estimate_omega_with(a, q_max, &EstimateConfig::default())
}

/// `max −ln‖Aq − p‖∞ / ln‖q‖∞` over the shell.
pub fn estimate_omega_with(
    a: &RealMatrix,
    q_max: u64,
    cfg: &EstimateConfig,
) -> Result<ExponentEstimate> {
    scan(a, q_max, cfg, Kind::Sup)
}

pub fn estimate_omega_x(a: &RealMatrix, q_max: u64) -> Result<ExponentEstimate> {
    estimate_omega_x_with(a, q_max, &EstimateConfig::default())
}

/// `max −ln Π_i |(Aq − p)_i| / ln Π_j (|q_j| ∨ 1)` over the shell.
pub fn estimate_omega_x_with(
    a: &RealMatrix,
    q_max: u64,
    cfg: &EstimateConfig,
) -> Result<ExponentEstimate> {
    scan(a, q_max, cfg, Kind::Multiplicative)
}

/// Number of `q` with `‖q‖∞ ≤ Q` and first nonzero coordinate positive.
fn half_box(q_max: u64, n: usize) -> Option<u64> {
    let side = 2u64.checked_mul(q_max)?.checked_add(1)?;
    Some((side.checked_pow(n as u32)? - 1) / 2)
}

fn scan(a: &RealMatrix, q_max: u64, cfg: &EstimateConfig, kind: Kind) -> Result<ExponentEstimate> {
    if q_max < 2 {
        return Err(Error::InvalidInput(
            "search bound Q must be at least 2".into(),
        ));
    }
    let q_min = cfg.q_min.unwrap_or_else(|| default_q_min(q_max));
    if q_min == 0 || q_min > q_max {
        return Err(Error::InvalidInput(format!(
            "inner radius {q_min} outside 1..={q_max}"
        )));
    }
    let (m, n) = (a.rows, a.cols);
    match half_box(q_max, n) {
        Some(c) if c <= cfg.max_candidates => {}
        _ => {
            return Err(Error::BudgetExceeded {
                what: "exponent candidates",
                limit: cfg.max_candidates,
            })
        }
    }
    let ln: Vec<f64> = (0..=q_max)
        .map(|k| if k <= 1 { 0.0 } else { (k as f64).ln() })
        .collect();
    let qm = q_max as i64;

    let mut best = ExponentEstimate {
        value: f64::NEG_INFINITY,
        infinite: false,
        best_q: Vec::new(),
        best_p: Vec::new(),
        q_max,
        q_min,
        candidates: 0,
    };
    let mut q = vec![-qm; n];
    let mut s = vec![0.0; m];
    let mut p = vec![0i64; m];
    'outer: loop {
        let leading_positive = q.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0);
        let norm = q.iter().map(|x| x.unsigned_abs()).max().unwrap_or(0);
        let height_ok = cfg.min_height.is_none_or(|h| {
            q.iter()
                .try_fold(1u64, |acc, x| acc.checked_mul(x.unsigned_abs().max(1)))
                .is_none_or(|p| p >= h)
        });
        if leading_positive && norm >= q_min && height_ok {
            let mut zero_factor = false;
            let mut num = 0.0f64;
            let mut sup = 0.0f64;
            for i in 0..m {
                let row = &a.values[i * n..(i + 1) * n];
                s[i] = row.iter().zip(&q).map(|(x, &k)| x * k as f64).sum();
                p[i] = s[i].round() as i64;
                let mut r = (s[i] - p[i] as f64).abs();
                if r < cfg.tolerance {
                    r = match exact_residual(a, i, &q, p[i]) {
                        Some(x) if x > 0.0 => x.max(f64::MIN_POSITIVE),
                        Some(_) => 0.0,
                        None => cfg.tolerance,
                    };
                }
                if r == 0.0 {
                    zero_factor = true;
                } else {
                    num -= r.ln();
                }
                sup = sup.max(r);
            }
            let infinite = match kind {
                Kind::Sup => sup == 0.0,
                Kind::Multiplicative => zero_factor,
            };
            if infinite {
                best.candidates += 1;
                best.infinite = true;
                best.best_q = q.clone();
                best.best_p = p.clone();
                break 'outer;
            }
            let den = match kind {
                Kind::Sup => ln[norm as usize],
                Kind::Multiplicative => q.iter().map(|x| ln[x.unsigned_abs() as usize]).sum(),
            };
            if den > 0.0 {
                best.candidates += 1;
                let ratio = match kind {
                    Kind::Sup => -sup.ln() / den,
                    Kind::Multiplicative => num / den,
                };
                if ratio.partial_cmp(&best.value) == Some(Ordering::Greater) {
                    best.value = ratio;
                    best.best_q = q.clone();
                    best.best_p = p.clone();
                }
            }
        }
        // Odometer step, last coordinate fastest.
        let mut k = n;
        loop {
            if k == 0 {
                break 'outer;
            }
            k -= 1;
            if q[k] < qm {
                q[k] += 1;
                break;
            }
            q[k] = -qm;
        }
    }
    if best.candidates == 0 {
        return Err(Error::InvalidInput(
            "no candidate with a positive denominator".into(),
        ));
    }
    Ok(best)
}

/// `|Σ_j a_ij q_j − p|` computed exactly, when exact entries are known.
fn exact_residual(a: &RealMatrix, i: usize, q: &[i64], p: i64) -> Option<f64> {
    let exact = a.exact.as_ref()?;
    let n = a.cols;
    let mut acc = Rat::from_integer((-p).into());
    for (x, &k) in exact[i * n..(i + 1) * n].iter().zip(q) {
        acc += x * Rat::from_integer(k.into());
    }
    if acc.is_zero() {
        Some(0.0)
    } else {
        Some(acc.abs().to_f64().unwrap_or(f64::MIN_POSITIVE))
    }
}

/// Real approximation to `ψ(X) = X ⊕ X² ⊕ ⋯ ⊕ Xⁿ`, an `m × mn` matrix,
/// computed exactly from the dyadic entries of `x`.
pub fn psi_numeric(m: usize, n: usize, x: &[f64]) -> Result<RealMatrix> {
    if m == 0 || n == 0 || x.len() != m * m {
        return Err(Error::DimensionMismatch(format!(
            "{} entries for a {m}x{m} sample",
            x.len()
        )));
    }
    let xr = x
        .iter()
        .map(|v| Rat::from_float(*v).ok_or_else(|| Error::InvalidInput("non-finite sample".into())))
        .collect::<Result<Vec<_>>>()?;
    let mut power = xr.clone();
    let mut blocks = vec![power.clone()];
    for _ in 1..n {
        let mut next = vec![Rat::zero(); m * m];
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    next[i * m + j] += &power[i * m + k] * &xr[k * m + j];
                }
            }
        }
        power = next;
        blocks.push(power.clone());
    }
    let mut out = Vec::with_capacity(m * m * n);
    for i in 0..m {
        for b in &blocks {
            out.extend_from_slice(&b[i * m..(i + 1) * m]);
        }
    }
    RealMatrix::from_rationals(m, m * n, out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BakerTrial {
    /// Row-major sample `X`.
    pub sample: Vec<f64>,
    pub estimate: ExponentEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BakerReport {
    pub m: usize,
    pub n: usize,
    pub q_max: u64,
    pub q_min: u64,
    pub seed: u64,
    pub trials: Vec<BakerTrial>,
    /// Median of the finite estimates; `None` if there are none.
    pub median: Option<f64>,
    pub max: Option<f64>,
    pub infinite_count: usize,
}

/// `ω_×(ψ(X))` estimates for `trials` samples `X` uniform in `[0, 1)^{m×m}`.
pub fn baker_experiment(
    m: usize,
    n: usize,
    q_max: u64,
    trials: usize,
    seed: u64,
) -> Result<BakerReport> {
    baker_experiment_with(m, n, q_max, trials, seed, &[], &EstimateConfig::default())
}

/// As [`baker_experiment`], with `forced` samples run first and counted
/// towards `trials`.
pub fn baker_experiment_with(
    m: usize,
    n: usize,
    q_max: u64,
    trials: usize,
    seed: u64,
    forced: &[Vec<f64>],
    cfg: &EstimateConfig,
) -> Result<BakerReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("need at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for t in 0..trials {
        let sample = match forced.get(t) {
            Some(s) => s.clone(),
            None => (0..m * m).map(|_| rng.random::<f64>()).collect(),
        };
        let a = psi_numeric(m, n, &sample)?;
        let estimate = estimate_omega_x_with(&a, q_max, cfg)?;
        out.push(BakerTrial { sample, estimate });
    }
    let mut finite: Vec<f64> = out
        .iter()
        .filter(|t| !t.estimate.infinite)
        .map(|t| t.estimate.value)
        .collect();
    finite.sort_by(f64::total_cmp);
    Ok(BakerReport {
        m,
        n,
        q_max,
        q_min: out[0].estimate.q_min,
        seed,
        infinite_count: out.len() - finite.len(),
        median: median(&finite),
        max: finite.last().copied(),
        trials: out,
    })
}

/// Median of a sorted slice; the mean of the middle pair for even lengths.
pub fn median(sorted: &[f64]) -> Option<f64> {
    let k = sorted.len();
    match k {
        0 => None,
        _ if k % 2 == 1 => Some(sorted[k / 2]),
        _ => Some((sorted[k / 2 - 1] + sorted[k / 2]) / 2.0),
    }
}
