//! Physical validity of qutrit coefficient records.
//!
//! A trace-1 Hermitian 3×3 matrix is a state exactly when all of its
//! principal minors are nonnegative. In Bloch-vector language that becomes
//! the compact constraint list checked by [`check_constraints`]:
//!
//! | id  | constraint |
//! |-----|------------|
//! | i   | `Σ R_ij = 2`, `0 ≤ R_ij ≤ 1` |
//! | ii  | `|u_ij| ≤ R_ij` |
//! | iii | `γ_ij = R_ik - R_jk` |
//! | iv  | `R_ij = (1/3)[2 + (-1)^{i+1} γ_ik + (-1)^j γ_jk]` |
//! | v   | `γ_12 - γ_13 + γ_23 = 0` |
//! | vi  | `1 - Σ d_ij² + 2 d_12 d_13 d_23 cos Φ ≥ 0` |
//!
//! together with the seven nontrivial principal minors themselves.

mod ortho;
mod sampler;

pub use ortho::{orthogonal_pure_mixed, orthogonal_pure_pure, OrthogonalityReport};
pub use sampler::{derive_seed, sample_batch, sample_valid, Sampler, MAX_PHASE_DRAWS, MAX_LENGTH_DRAWS};

use std::fmt;

use serde::Serialize;

use crate::bloch::{
    bloch_triple_unchecked, derived_geometry, radii_from_gammas, QutritCoefficients, PAIRS,
};
use crate::error::{Error, Result};
use crate::bloch::reconstruct;
use crate::linalg::determinant;
use crate::tolerance;

/// One evaluated inequality in canonical `residual ≥ 0` form. Equalities are
/// reported as `-|deviation|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstraintEntry {
    pub id: String,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub entries: Vec<ConstraintEntry>,
    pub overall: bool,
    pub tolerance: f64,
}

impl ValidityReport {
    pub fn entry(&self, id: &str) -> Option<&ConstraintEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ConstraintEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
        for e in &self.entries {
            writeln!(
                f,
                "{:<width$}  {:>25}  {}",
                e.id,
                crate::io::fmt_f64(e.residual),
                if e.pass { "pass" } else { "FAIL" }
            )?;
        }
        write!(
            f,
            "overall: {} (tol {:e})",
            if self.overall { "valid" } else { "invalid" },
            self.tolerance
        )
    }
}

/// Labels of the principal-minor entries, in report order.
pub const MINOR_IDS: [&str; 7] = [
    "minor{1}",
    "minor{2}",
    "minor{3}",
    "minor{1,2}",
    "minor{1,3}",
    "minor{2,3}",
    "minor{1,2,3}",
];

/// Labels of the six compact constraints, in report order.
pub const CONSTRAINT_IDS: [&str; 6] = ["i", "ii", "iii", "iv", "v", "vi"];

fn min_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(f64::INFINITY, |acc, x| if x.is_nan() { f64::NAN } else { acc.min(x) })
}

/// Evaluates constraints (i)–(vi) and all seven nontrivial principal minors.
///
/// Never fails: invalid input produces a report with failing entries. When
/// some `ω_k = 0` the relative lengths are undefined and constraint (vi) is
/// evaluated as the direct determinant instead.
pub fn check_constraints(c: &QutritCoefficients, tol: f64) -> ValidityReport {
    let t = bloch_triple_unchecked(c);
    let gamma = t.gamma();
    let geom = derived_geometry(c);

    let mut raw: Vec<(String, f64)> = Vec::with_capacity(13);

    let r_sum_dev = -(t.radii.iter().sum::<f64>() - 2.0).abs();
    raw.push((
        "i".into(),
        min_of([r_sum_dev].into_iter().chain(t.radii).chain(t.radii.map(|r| 1.0 - r))),
    ));
    let lengths = t.lengths();
    raw.push(("ii".into(), min_of((0..3).map(|n| t.radii[n] - lengths[n]))));
    let iii = [
        gamma[0] - (t.radii[1] - t.radii[2]),
        gamma[1] - (t.radii[0] - t.radii[2]),
        gamma[2] - (t.radii[0] - t.radii[1]),
    ];
    raw.push(("iii".into(), min_of(iii.map(|x| -x.abs()))));
    let from_gamma = radii_from_gammas(gamma);
    raw.push(("iv".into(), min_of((0..3).map(|n| -(from_gamma[n] - t.radii[n]).abs()))));
    raw.push(("v".into(), -(gamma[0] - gamma[1] + gamma[2]).abs()));

    let det = match (geom.determinant_factor(), c.omega.iter().all(|&w| w > 0.0)) {
        (Some(factor), true) => {
            raw.push(("vi".into(), factor));
            c.omega.iter().product::<f64>() * factor
        }
        _ => {
            let det = determinant(&reconstruct(c)).re;
            raw.push(("vi".into(), det));
            det
        }
    };

    for (id, &w) in MINOR_IDS.iter().zip(&c.omega) {
        raw.push(((*id).into(), w));
    }
    for (n, &(i, j, _)) in PAIRS.iter().enumerate() {
        let v2 = c.alpha[n] * c.alpha[n] + c.beta[n] * c.beta[n];
        raw.push((MINOR_IDS[3 + n].into(), c.omega[i] * c.omega[j] - v2 / 4.0));
    }
    raw.push((MINOR_IDS[6].into(), det));

    let entries: Vec<ConstraintEntry> = raw
        .into_iter()
        .map(|(id, residual)| ConstraintEntry {
            id,
            // normalize -0
            residual: residual + 0.0,
            pass: residual >= -tol,
        })
        .collect();
    let overall = entries.iter().all(|e| e.pass);
    ValidityReport {
        entries,
        overall,
        tolerance: tol,
    }
}

/// True when every principal minor (hence every compact constraint) holds.
pub fn is_valid_state(c: &QutritCoefficients, tol: f64) -> bool {
    check_constraints(c, tol).overall
}

/// `1 - Σ d_ij² - 2 d_12 d_13 d_23 ≥ 0`: the state stays valid for every
/// total phase `Φ`.
pub fn all_phi_valid(c: &QutritCoefficients) -> Result<bool> {
    let [a, b, cc] = derived_geometry(c).all_defined().ok_or_else(|| {
        Error::Precondition("relative lengths undefined (some ω = 0)".into())
    })?;
    Ok(1.0 - a * a - b * b - cc * cc - 2.0 * a * b * cc >= -tolerance::VALIDITY)
}

/// For a state with at least one saturated relative length (`d_ij = 1`):
/// returns whether the remaining two relative lengths are equal and the total
/// phase is a multiple of 2π. Every valid such state satisfies both; when the
/// other two lengths vanish the phase no longer enters and is not checked.
pub fn boundary_phase_constraint(c: &QutritCoefficients) -> Result<bool> {
    let geom = derived_geometry(c);
    let d = geom.all_defined().ok_or_else(|| {
        Error::Precondition("relative lengths undefined (some ω = 0)".into())
    })?;
    let sat = (0..3)
        .find(|&n| (d[n] - 1.0).abs() <= tolerance::SATURATION)
        .ok_or_else(|| Error::Precondition(format!("no relative length equals 1: {d:?}")))?;
    let others: Vec<f64> = (0..3).filter(|&n| n != sat).map(|n| d[n]).collect();
    let lengths_equal = (others[0] - others[1]).abs() <= tolerance::SATURATION;
    let phase_irrelevant = others.iter().all(|&x| x <= tolerance::SATURATION);
    let phase_locked = phase_irrelevant || geom.total_phase.abs() <= tolerance::SATURATION;
    Ok(lengths_equal && phase_locked)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::decompose;
    use crate::ensemble;
    use crate::linalg::{eigenvalues_hermitian, ComplexMatrix};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn worked_state() -> QutritCoefficients {
        QutritCoefficients::from_state_vector(&[
            Complex64::new(0.5, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, 2.0 * PI / 3.0),
            Complex64::new(0.5, 0.0),
        ])
    }

    #[test]
    fn report_layout() {
        let r = check_constraints(&QutritCoefficients::maximally_mixed(), 1e-10);
        let ids: Vec<&str> = r.entries.iter().map(|e| e.id.as_str()).collect();
        let expected: Vec<&str> = CONSTRAINT_IDS.iter().chain(MINOR_IDS.iter()).copied().collect();
        assert_eq!(ids, expected);
        assert!(r.overall);
        assert!((r.entry("minor{1,2,3}").unwrap().residual - 1.0 / 27.0).abs() < 1e-16);
        assert!(r.to_string().contains("overall: valid"));
    }

    #[test]
    fn saturated_population_with_coherence_fails() {
        let c = QutritCoefficients::new([1.0, 0.0, 0.0], [0.1, 0.0, 0.0], [0.0; 3]);
        let r = check_constraints(&c, 1e-10);
        assert!(!r.overall);
        let m = r.entry("minor{1,2}").unwrap();
        assert!(!m.pass);
        // α² + β² - 4ω₁ω₂ = 0.01 > 0
        assert!((m.residual * 4.0 + 0.01).abs() < 1e-15);
    }

    #[test]
    fn worked_state_is_boundary_valid() {
        let r = check_constraints(&worked_state(), 1e-10);
        assert!(r.overall, "{r}");
        assert!(r.entry("minor{1,2,3}").unwrap().residual.abs() < 1e-15);
        assert!(r.entry("vi").unwrap().residual.abs() < 1e-14);
    }

    #[test]
    fn gram_states_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let rho = ensemble::gram_state(&mut rng, 3, 3);
            assert!(is_valid_state(&decompose(&rho).unwrap(), 1e-10));
        }
    }

    #[test]
    fn negative_spectrum_is_invalid() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let rho = ensemble::with_spectrum(&mut rng, &[1.2, -0.1, -0.1]);
            let r = check_constraints(&decompose(&rho).unwrap(), 1e-10);
            assert!(!r.overall);
            assert!(MINOR_IDS.iter().any(|id| r.entry(id).unwrap().residual < 0.0));
        }
    }

    #[test]
    fn zero_population_requires_vanishing_coherences() {
        let c = QutritCoefficients::new([0.5, 0.5, 0.0], [1.0, 0.0, 0.0], [0.0; 3]);
        assert!(is_valid_state(&c, 1e-10));
        for (n, x) in [(1usize, 1e-3), (2, 1e-3)] {
            let mut bad = c;
            bad.alpha[n] = x;
            assert!(!is_valid_state(&bad, 1e-10));
        }
        let mut phase = c;
        phase.alpha[0] = (0.7f64).cos();
        phase.beta[0] = (0.7f64).sin();
        assert!(is_valid_state(&phase, 1e-10));
    }

    #[test]
    fn oracle_agreement_small_ensemble() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..3000 {
            let (kind, rho) = ensemble::mixed_draw(&mut rng, 3);
            let c = decompose(&rho).unwrap();
            let oracle = eigenvalues_hermitian(&rho).unwrap()[0] >= -1e-9;
            assert_eq!(is_valid_state(&c, 1e-9), oracle, "{kind:?}\n{rho}");
        }
    }

    #[test]
    fn all_phi_valid_examples() {
        let w = [0.3, 0.3, 0.4];
        let at = |d: f64| QutritCoefficients::from_geometry(w, [d; 3], [0.3, -1.0, 2.0]);
        assert!(all_phi_valid(&at(0.0)).unwrap());
        assert!(all_phi_valid(&at(0.5)).unwrap());
        assert!(!all_phi_valid(&at(0.6)).unwrap());
        let edge = QutritCoefficients::new([0.5, 0.5, 0.0], [0.0; 3], [0.0; 3]);
        assert!(all_phi_valid(&edge).is_err());
    }

    #[test]
    fn all_phi_valid_means_every_phase_is_valid() {
        let w = [0.25, 0.35, 0.4];
        for &d in &[0.2, 0.45, 0.5] {
            let ok = all_phi_valid(&QutritCoefficients::from_geometry(w, [d; 3], [0.0; 3])).unwrap();
            let every = (0..64).all(|k| {
                let phi = -PI + 2.0 * PI * k as f64 / 64.0;
                is_valid_state(&QutritCoefficients::from_geometry(w, [d; 3], [phi, 0.0, 0.0]), 1e-12)
            });
            assert_eq!(ok, every, "d = {d}");
        }
    }

    #[test]
    fn boundary_phase_examples() {
        assert!(boundary_phase_constraint(&worked_state()).unwrap());

        let w = [0.3, 0.3, 0.4];
        let equal = QutritCoefficients::from_geometry(w, [1.0, 0.3, 0.3], [0.4, 0.9, 0.5]);
        assert!(derived_geometry(&equal).total_phase.abs() < 1e-15);
        assert!(boundary_phase_constraint(&equal).unwrap());
        assert!(is_valid_state(&equal, 1e-12));
        // factor = 1 - 1 - 0.09 - 0.09 + 2·0.09 = 0
        assert!(derived_geometry(&equal).determinant_factor().unwrap().abs() < 1e-15);

        let unequal = |phi12: f64| {
            QutritCoefficients::from_geometry(w, [1.0, 0.3, 0.5], [phi12, 0.0, 0.0])
        };
        assert!(!boundary_phase_constraint(&unequal(0.0)).unwrap());
        for k in 0..128 {
            let phi = -PI + 2.0 * PI * k as f64 / 128.0;
            assert!(!is_valid_state(&unequal(phi), 1e-12));
        }

        let unsaturated = QutritCoefficients::from_geometry(w, [0.9, 0.3, 0.3], [0.0; 3]);
        assert!(matches!(boundary_phase_constraint(&unsaturated), Err(Error::Precondition(_))));
    }

    #[test]
    fn boundary_phase_with_null_partners() {
        // only the (1,2) block carries coherence; its phase is free
        let c = QutritCoefficients::from_geometry([0.3, 0.3, 0.4], [1.0, 0.0, 0.0], [1.3, 0.0, 0.0]);
        assert!(is_valid_state(&c, 1e-12));
        assert!(boundary_phase_constraint(&c).unwrap());
    }

    #[test]
    fn valid_saturated_states_pass_boundary_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..500 {
            // rank-2 state with exactly one saturated block: put a pure 2×2 block
            // into levels (1,2) and mix with |3⟩
            let psi = ensemble::random_pure_vector(&mut rng, 2);
            let p: f64 = rand::Rng::random_range(&mut rng, 0.1..0.9);
            let mut rho = ComplexMatrix::zeros(3);
            for i in 0..2 {
                for j in 0..2 {
                    rho[(i, j)] = psi[i] * psi[j].conj() * p;
                }
            }
            rho[(2, 2)] = Complex64::new(1.0 - p, 0.0);
            let c = decompose(&rho).unwrap();
            assert!(boundary_phase_constraint(&c).unwrap());
        }
    }
}
