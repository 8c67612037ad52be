//! d-level generalization: `d` populations plus one `(α, β)` pair per
//! two-level subspace, and the principal-minor test.
//!
//! For `d > 3` nonnegativity of all principal minors is reported as a
//! necessary condition only; the qutrit-specific quantities (total phase,
//! determinant factorization) have no counterpart here.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basis::{PairIndex, MAX_DIM};
use crate::bloch::QutritCoefficients;
use crate::ensemble;
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_hermitian, principal_minor, ComplexMatrix, IndexSet};
use crate::tolerance::{self, Tolerances};
use crate::validity::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuditCoefficients {
    pub d: usize,
    pub omega: Vec<f64>,
    /// Lexicographic pair order: 12, 13, …, 1d, 23, …
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

pub fn pair_count(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

fn check_dim(d: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

impl QuditCoefficients {
    pub fn new(d: usize, omega: Vec<f64>, alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        check_dim(d)?;
        if omega.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: omega.len() });
        }
        for v in [&alpha, &beta] {
            if v.len() != pair_count(d) {
                return Err(Error::DimensionMismatch { expected: pair_count(d), found: v.len() });
            }
        }
        Ok(QuditCoefficients { d, omega, alpha, beta })
    }

    /// Total number of real coefficients, `d²`.
    pub fn len(&self) -> usize {
        self.omega.len() + self.alpha.len() + self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn trace(&self) -> f64 {
        self.omega.iter().sum()
    }

    pub fn to_qutrit(&self) -> Result<QutritCoefficients> {
        if self.d != 3 {
            return Err(Error::DimensionMismatch { expected: 3, found: self.d });
        }
        let a = |v: &[f64]| [v[0], v[1], v[2]];
        Ok(QutritCoefficients::new(a(&self.omega), a(&self.alpha), a(&self.beta)))
    }
}

impl From<QutritCoefficients> for QuditCoefficients {
    fn from(c: QutritCoefficients) -> Self {
        QuditCoefficients {
            d: 3,
            omega: c.omega.to_vec(),
            alpha: c.alpha.to_vec(),
            beta: c.beta.to_vec(),
        }
    }
}

pub fn decompose_qudit(rho: &ComplexMatrix, d: usize) -> Result<QuditCoefficients> {
    decompose_qudit_with(rho, d, &Tolerances::default())
}

pub fn decompose_qudit_with(rho: &ComplexMatrix, d: usize, tol: &Tolerances) -> Result<QuditCoefficients> {
    check_dim(d)?;
    if rho.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: rho.dim() });
    }
    rho.ensure_hermitian(tol.hermitian)?;
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > tol.trace || !trace.is_finite() {
        return Err(Error::BadTrace { trace, tol: tol.trace });
    }
    let omega = (0..d).map(|k| rho[(k, k)].re).collect();
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    for p in PairIndex::all(d) {
        let (i, j) = p.zero_based();
        alpha.push(2.0 * rho[(i, j)].re);
        beta.push(0.0 - 2.0 * rho[(i, j)].im);
    }
    Ok(QuditCoefficients { d, omega, alpha, beta })
}

pub fn reconstruct_qudit(c: &QuditCoefficients) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(c.d);
    for k in 0..c.d {
        rho[(k, k)] = Complex64::new(c.omega[k], 0.0);
    }
    for (n, p) in PairIndex::all(c.d).into_iter().enumerate() {
        let (i, j) = p.zero_based();
        let z = Complex64::new(c.alpha[n] / 2.0, -c.beta[n] / 2.0);
        rho[(i, j)] = z;
        rho[(j, i)] = z.conj();
    }
    rho
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorEntry {
    /// 1-based levels; empty for the normalization entry.
    pub subset: Vec<usize>,
    pub label: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinorReport {
    pub d: usize,
    /// Normalization first, then every nonempty subset by size, then
    /// lexicographically: `2^d` entries.
    pub entries: Vec<MinorEntry>,
    pub overall: bool,
    pub tolerance: f64,
}

/// Normalization plus all `2^d - 1` principal minors, each passing when
/// `value ≥ -tol` (normalization: `-|Σω - 1| ≥ -tol`).
pub fn necessary_conditions(c: &QuditCoefficients, tol: f64) -> MinorReport {
    let rho = reconstruct_qudit(c);
    let norm = 0.0 - (c.trace() - 1.0).abs();
    let mut entries = vec![MinorEntry {
        subset: Vec::new(),
        label: "trace".into(),
        value: norm,
        pass: norm >= -tol,
    }];
    for set in IndexSet::all_nonempty(c.d) {
        let value = principal_minor(&rho, &set).expect("subset within dimension");
        entries.push(MinorEntry {
            subset: set.indices().iter().map(|i| i + 1).collect(),
            label: format!("minor{set}"),
            value: value + 0.0,
            pass: value >= -tol,
        });
    }
    let overall = entries.iter().all(|e| e.pass);
    MinorReport { d: c.d, entries, overall, tolerance: tol }
}

/// Qubit-subspace Bloch vector `(α_ij, β_ij, ω_i - ω_j)` with the bound
/// `ω_i + ω_j` on its length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubspaceVector {
    pub pair: (usize, usize),
    pub u: [f64; 3],
    pub radius: f64,
}

pub fn subspace_bloch_vectors(c: &QuditCoefficients) -> Result<Vec<SubspaceVector>> {
    let report = necessary_conditions(c, tolerance::VALIDITY);
    if !report.overall {
        return Err(Error::InvalidState("principal-minor conditions fail".into()));
    }
    Ok(PairIndex::all(c.d)
        .into_iter()
        .enumerate()
        .map(|(n, p)| {
            let (i, j) = p.zero_based();
            SubspaceVector {
                pair: (p.i(), p.j()),
                u: [c.alpha[n], c.beta[n], c.omega[i] - c.omega[j]],
                radius: c.omega[i] + c.omega[j],
            }
        })
        .collect())
}

/// Random PSD trace-1 `d×d` state from the Gram construction.
pub fn sample_gram(seed: u64, d: usize) -> Result<QuditCoefficients> {
    check_dim(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    decompose_qudit(&ensemble::gram_state(&mut rng, d, d), d)
}

/// Counts from running the minor test and the eigenvalue oracle side by side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConverseProbe {
    pub d: usize,
    pub trials: usize,
    pub oracle_psd: usize,
    pub minors_pass: usize,
    /// Minors all pass but the matrix is not PSD.
    pub minors_pass_not_psd: usize,
    /// PSD but some minor fails (would contradict necessity).
    pub psd_minor_fails: usize,
}

/// Mixed random ensemble through both tests at tolerance `tol`.
pub fn converse_probe(d: usize, trials: usize, seed: u64, tol: f64) -> Result<ConverseProbe> {
    check_dim(d)?;
    let outcomes: Vec<(bool, bool)> = (0..trials as u64)
        .into_par_iter()
        .map(|n| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, n));
            let (_, rho) = ensemble::mixed_draw(&mut rng, d);
            let psd = eigenvalues_hermitian(&rho).map(|e| e[0] >= -tol).unwrap_or(false);
            let pass = decompose_qudit(&rho, d)
                .map(|c| necessary_conditions(&c, tol).overall)
                .unwrap_or(false);
            (psd, pass)
        })
        .collect();
    let count = |f: &dyn Fn(&(bool, bool)) -> bool| outcomes.iter().filter(|o| f(o)).count();
    Ok(ConverseProbe {
        d,
        trials,
        oracle_psd: count(&|o| o.0),
        minors_pass: count(&|o| o.1),
        minors_pass_not_psd: count(&|o| o.1 && !o.0),
        psd_minor_fails: count(&|o| o.0 && !o.1),
    })
}
