//! Qutrit density matrices as three coupled qubit-like Bloch vectors.
//!
//! A qutrit state is expanded as
//!
//! ```text
//! ρ = Σ_k ω_k O_k + Σ_{i<j} (α_ij/2 A_ij + β_ij/2 B_ij)
//! ```
//!
//! so that `ρ[i][j] = (α_ij - iβ_ij)/2` above the diagonal and `ρ[k][k] = ω_k`.
//! Each level pair `(i, j)` carries a Bloch vector `u_ij = (α_ij, β_ij, γ_ij)`
//! with `γ_ij = ω_i - ω_j`, living in a sphere of radius `R_ij = 1 - ω_k`.
//!
//! Pair-indexed arrays are always stored in the order `(12, 13, 23)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::basis::PairIndex;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::tolerance::{self, Tolerances};

/// 0-based level indices of each stored pair, and the complementary level.
pub(crate) const PAIRS: [(usize, usize, usize); 3] = [(0, 1, 2), (0, 2, 1), (1, 2, 0)];

/// The nine real expansion coefficients of a qutrit operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QutritCoefficients {
    pub omega: [f64; 3],
    pub alpha: [f64; 3],
    pub beta: [f64; 3],
}

impl QutritCoefficients {
    pub fn new(omega: [f64; 3], alpha: [f64; 3], beta: [f64; 3]) -> Self {
        Self { omega, alpha, beta }
    }

    /// `I/3`.
    pub fn maximally_mixed() -> Self {
        Self::new([1.0 / 3.0; 3], [0.0; 3], [0.0; 3])
    }

    /// `|k⟩⟨k|` for a 1-based level `k`.
    pub fn basis_state(k: usize) -> Result<Self> {
        if !(1..=3).contains(&k) {
            return Err(Error::IndexOutOfRange { index: k, dim: 3 });
        }
        let mut omega = [0.0; 3];
        omega[k - 1] = 1.0;
        Ok(Self::new(omega, [0.0; 3], [0.0; 3]))
    }

    /// `ψψ†` for a (not necessarily normalized) state vector.
    pub fn from_state_vector(psi: &[Complex64; 3]) -> Self {
        let rho = ComplexMatrix::outer(psi);
        read_off(&rho)
    }

    /// Builds coefficients from populations, relative lengths and phases:
    /// `α_ij + iβ_ij = 2 d_ij √(ω_i ω_j) e^{iφ_ij}`.
    pub fn from_geometry(omega: [f64; 3], d: [f64; 3], phi: [f64; 3]) -> Self {
        let mut alpha = [0.0; 3];
        let mut beta = [0.0; 3];
        for (n, &(i, j, _)) in PAIRS.iter().enumerate() {
            let len = 2.0 * d[n] * (omega[i] * omega[j]).max(0.0).sqrt();
            alpha[n] = len * phi[n].cos();
            beta[n] = len * phi[n].sin();
        }
        Self::new(omega, alpha, beta)
    }

    pub fn pair(&self, p: PairIndex) -> (f64, f64) {
        let n = p.position(3);
        (self.alpha[n], self.beta[n])
    }

    pub fn trace(&self) -> f64 {
        self.omega.iter().sum()
    }

    pub fn ensure_normalized(&self, tol: f64) -> Result<()> {
        let trace = self.trace();
        if (trace - 1.0).abs() > tol || !trace.is_finite() {
            return Err(Error::BadTrace { trace, tol });
        }
        Ok(())
    }

    /// `|v_ij| = √(α_ij² + β_ij²)`.
    pub fn planar_lengths(&self) -> [f64; 3] {
        [0, 1, 2].map(|n| self.alpha[n].hypot(self.beta[n]))
    }

    pub fn is_finite(&self) -> bool {
        self.omega
            .iter()
            .chain(&self.alpha)
            .chain(&self.beta)
            .all(|x| x.is_finite())
    }
}

fn read_off(rho: &ComplexMatrix) -> QutritCoefficients {
    let omega = [0, 1, 2].map(|k| rho[(k, k)].re);
    let mut alpha = [0.0; 3];
    let mut beta = [0.0; 3];
    for (n, &(i, j, _)) in PAIRS.iter().enumerate() {
        alpha[n] = 2.0 * rho[(i, j)].re;
        beta[n] = 0.0 - 2.0 * rho[(i, j)].im;
    }
    QutritCoefficients::new(omega, alpha, beta)
}

/// Reads the coefficients off a Hermitian, trace-1, 3×3 matrix.
pub fn decompose(rho: &ComplexMatrix) -> Result<QutritCoefficients> {
    decompose_with(rho, &Tolerances::default())
}

pub fn decompose_with(rho: &ComplexMatrix, tol: &Tolerances) -> Result<QutritCoefficients> {
    if rho.dim() != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: rho.dim(),
        });
    }
    rho.ensure_hermitian(tol.hermitian)?;
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > tol.trace || !trace.is_finite() {
        return Err(Error::BadTrace {
            trace,
            tol: tol.trace,
        });
    }
    Ok(read_off(rho))
}

/// The Hermitian matrix with these coefficients. Never fails; validity is
/// checked elsewhere.
pub fn reconstruct(c: &QutritCoefficients) -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(3);
    for k in 0..3 {
        rho[(k, k)] = Complex64::new(c.omega[k], 0.0);
    }
    for (n, &(i, j, _)) in PAIRS.iter().enumerate() {
        let z = Complex64::new(c.alpha[n] / 2.0, -c.beta[n] / 2.0);
        rho[(i, j)] = z;
        rho[(j, i)] = z.conj();
    }
    rho
}

/// The three Bloch vectors `u_ij = (α_ij, β_ij, γ_ij)` and sphere radii `R_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochTriple {
    pub u: [[f64; 3]; 3],
    pub radii: [f64; 3],
}

impl BlochTriple {
    pub fn gamma(&self) -> [f64; 3] {
        [0, 1, 2].map(|n| self.u[n][2])
    }

    pub fn lengths(&self) -> [f64; 3] {
        [0, 1, 2].map(|n| norm3(&self.u[n]))
    }
}

pub(crate) fn norm3(v: &[f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

pub(crate) fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn bloch_triple(c: &QutritCoefficients) -> Result<BlochTriple> {
    c.ensure_normalized(tolerance::TRACE)?;
    Ok(bloch_triple_unchecked(c))
}

pub(crate) fn bloch_triple_unchecked(c: &QutritCoefficients) -> BlochTriple {
    let mut u = [[0.0; 3]; 3];
    let mut radii = [0.0; 3];
    for (n, &(i, j, k)) in PAIRS.iter().enumerate() {
        u[n] = [c.alpha[n], c.beta[n], c.omega[i] - c.omega[j]];
        radii[n] = 1.0 - c.omega[k];
    }
    BlochTriple { u, radii }
}

/// `R_ij = (1/3)[2 + (-1)^{i+1} γ_ik + (-1)^j γ_jk]`, with reversed
/// subscripts read in increasing order.
pub fn radii_from_gammas(gamma: [f64; 3]) -> [f64; 3] {
    let g = |a: usize, b: usize| {
        let p = PairIndex::new(a, b, 3).expect("qutrit pair");
        gamma[p.position(3)]
    };
    PairIndex::QUTRIT.map(|p| {
        let (i, j, k) = (p.i(), p.j(), p.complement());
        let si = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
        let sj = if j % 2 == 0 { 1.0 } else { -1.0 };
        (2.0 + si * g(i, k) + sj * g(j, k)) / 3.0
    })
}

/// Relative lengths, phases and the total phase of the planar vectors
/// `v_ij = (α_ij, β_ij)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedGeometry {
    /// `|v_ij| / (2√(ω_i ω_j))`; `None` unless `ω_i ω_j > 0`.
    pub d: [Option<f64>; 3],
    /// `atan2(β_ij, α_ij)`, 0 for a null vector.
    pub phi: [f64; 3],
    /// `φ_12 - φ_13 + φ_23` wrapped to `(-π, π]`.
    pub total_phase: f64,
}

impl DerivedGeometry {
    pub fn all_defined(&self) -> Option<[f64; 3]> {
        match self.d {
            [Some(a), Some(b), Some(c)] => Some([a, b, c]),
            _ => None,
        }
    }

    /// `1 - Σ d² + 2 d_12 d_13 d_23 cos Φ`, when every `d` is defined.
    pub fn determinant_factor(&self) -> Option<f64> {
        let [a, b, c] = self.all_defined()?;
        Some(1.0 - a * a - b * b - c * c + 2.0 * a * b * c * self.total_phase.cos())
    }
}

/// Wraps an angle to `(-π, π]`.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

pub fn derived_geometry(c: &QutritCoefficients) -> DerivedGeometry {
    let mut d = [None; 3];
    let mut phi = [0.0; 3];
    for (n, &(i, j, _)) in PAIRS.iter().enumerate() {
        let prod = c.omega[i] * c.omega[j];
        if prod > 0.0 {
            d[n] = Some(c.alpha[n].hypot(c.beta[n]) / (2.0 * prod.sqrt()));
        }
        if c.alpha[n] != 0.0 || c.beta[n] != 0.0 {
            phi[n] = c.beta[n].atan2(c.alpha[n]);
        }
    }
    DerivedGeometry {
        d,
        phi,
        total_phase: wrap_phase(phi[0] - phi[1] + phi[2]),
    }
}

/// `Tr ρ² = Σ ω² + ½ Σ (α² + β²)`.
pub fn purity(c: &QutritCoefficients) -> f64 {
    let diag: f64 = c.omega.iter().map(|w| w * w).sum();
    let off: f64 = (0..3).map(|n| c.alpha[n] * c.alpha[n] + c.beta[n] * c.beta[n]).sum();
    diag + 0.5 * off
}

/// `det ρ = ω_1 ω_2 ω_3 (1 - Σ d² + 2 d_12 d_13 d_23 cos Φ)`.
///
/// Only defined when every `ω_k > 0`; otherwise returns [`Error::Domain`] and
/// the caller should use [`crate::linalg::determinant`] directly.
pub fn det_formula(c: &QutritCoefficients) -> Result<f64> {
    if c.omega.iter().any(|&w| w <= 0.0 || !w.is_finite()) {
        return Err(Error::Domain(format!(
            "determinant factorization needs every ω > 0, got {:?}",
            c.omega
        )));
    }
    let factor = derived_geometry(c)
        .determinant_factor()
        .expect("all relative lengths defined when ω > 0");
    Ok(c.omega.iter().product::<f64>() * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{determinant, eigenvalues_hermitian, trace_inner};
    use crate::basis::{basis_operator, Generator};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn worked_psi() -> [Complex64; 3] {
        [
            Complex64::new(0.5, 0.0),
            Complex64::from_polar(FRAC_1_SQRT_2, 2.0 * PI / 3.0),
            Complex64::new(0.5, 0.0),
        ]
    }

    fn worked_rho() -> ComplexMatrix {
        ComplexMatrix::outer(&worked_psi())
    }

    fn assert_arr(a: [f64; 3], b: [f64; 3], eps: f64) {
        for k in 0..3 {
            assert_abs_diff_eq!(a[k], b[k], epsilon = eps);
        }
    }

    #[test]
    fn decompose_examples() {
        let mixed = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        let c = decompose(&mixed).unwrap();
        assert_eq!(c.omega, [1.0 / 3.0; 3]);
        assert_eq!(c.alpha, [0.0; 3]);
        assert_eq!(c.beta, [0.0; 3]);

        let c = decompose(&worked_rho()).unwrap();
        let s = 1.0 / (2.0 * SQRT_2);
        let b = 6f64.sqrt() / 4.0;
        assert_arr(c.omega, [0.25, 0.5, 0.25], 1e-15);
        assert_arr(c.alpha, [-s, 0.5, -s], 1e-15);
        assert_arr(c.beta, [b, 0.0, -b], 1e-15);

        let e1 = ComplexMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]);
        assert_eq!(decompose(&e1).unwrap(), QutritCoefficients::basis_state(1).unwrap());
    }

    #[test]
    fn decompose_errors() {
        let mut m = ComplexMatrix::identity(3).scale_real(1.0 / 3.0);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(decompose(&m), Err(Error::NotHermitian { .. })));
        assert!(matches!(
            decompose(&ComplexMatrix::identity(3)),
            Err(Error::BadTrace { .. })
        ));
        assert!(matches!(
            decompose(&ComplexMatrix::identity(2).scale_real(0.5)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn reconstruct_examples() {
        let m = reconstruct(&QutritCoefficients::maximally_mixed());
        assert_eq!(m, ComplexMatrix::identity(3).scale_real(1.0 / 3.0));

        let c = decompose(&worked_rho()).unwrap();
        assert!(reconstruct(&c).max_abs_diff(&worked_rho()) <= 1e-15);

        let not_a_state = QutritCoefficients::new([1.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0; 3]);
        let ev = eigenvalues_hermitian(&reconstruct(&not_a_state)).unwrap();
        assert!(ev[0] < 0.0);
    }

    #[test]
    fn bloch_triple_examples() {
        let c = decompose(&worked_rho()).unwrap();
        let t = bloch_triple(&c).unwrap();
        assert_arr(t.gamma(), [-0.25, 0.0, 0.25], 1e-15);
        assert_arr(t.radii, [0.75, 0.5, 0.75], 1e-15);
        assert_arr(t.lengths(), [0.75, 0.5, 0.75], 1e-15);

        let t = bloch_triple(&QutritCoefficients::basis_state(1).unwrap()).unwrap();
        assert_eq!(t.gamma(), [1.0, 1.0, 0.0]);
        assert_eq!(t.radii, [1.0, 1.0, 0.0]);
        assert_eq!(t.lengths().iter().sum::<f64>(), 2.0);

        let t = bloch_triple(&QutritCoefficients::maximally_mixed()).unwrap();
        assert_eq!(t.gamma(), [0.0; 3]);
        assert_arr(t.radii, [2.0 / 3.0; 3], 1e-15);
        assert_eq!(t.lengths(), [0.0; 3]);

        let bad = QutritCoefficients::new([0.5, 0.5, 0.5], [0.0; 3], [0.0; 3]);
        assert!(matches!(bloch_triple(&bad), Err(Error::BadTrace { .. })));
    }

    #[test]
    fn derived_geometry_examples() {
        let g = derived_geometry(&decompose(&worked_rho()).unwrap());
        let d = g.all_defined().unwrap();
        assert_arr(d, [1.0; 3], 1e-15);
        assert_arr(g.phi, [2.0 * PI / 3.0, 0.0, -2.0 * PI / 3.0], 1e-15);
        assert_abs_diff_eq!(g.total_phase, 0.0, epsilon = 1e-15);

        let g = derived_geometry(&QutritCoefficients::maximally_mixed());
        assert_eq!(g.d, [Some(0.0); 3]);
        assert_eq!(g.total_phase, 0.0);

        let c = QutritCoefficients::new([0.5, 0.5, 0.0], [1.0, 0.0, 0.0], [0.0; 3]);
        let g = derived_geometry(&c);
        assert_eq!(g.d, [Some(1.0), None, None]);
        assert_eq!(g.determinant_factor(), None);
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert_abs_diff_eq!(wrap_phase(-PI), PI, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(3.0 * PI / 2.0), -PI / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(wrap_phase(4.0 * PI + 0.1), 0.1, epsilon = 1e-14);
    }

    #[test]
    fn purity_examples() {
        assert_abs_diff_eq!(purity(&QutritCoefficients::maximally_mixed()), 1.0 / 3.0, epsilon = 1e-16);
        assert_abs_diff_eq!(purity(&decompose(&worked_rho()).unwrap()), 1.0, epsilon = 1e-15);
        let c = QutritCoefficients::new([0.5, 0.5, 0.0], [0.0; 3], [0.0; 3]);
        assert_eq!(purity(&c), 0.5);
    }

    #[test]
    fn det_formula_examples() {
        assert_abs_diff_eq!(
            det_formula(&QutritCoefficients::maximally_mixed()).unwrap(),
            1.0 / 27.0,
            epsilon = 1e-17
        );

        // α_13 = 1/2 saturates the (1,3) block: d_13 = 1 and det = 0 both ways
        let c = QutritCoefficients::new([0.25, 0.5, 0.25], [0.0, 0.5, 0.0], [0.0; 3]);
        assert_eq!(derived_geometry(&c).d[1], Some(1.0));
        let direct = determinant(&reconstruct(&c)).re;
        assert_abs_diff_eq!(det_formula(&c).unwrap(), direct, epsilon = 1e-12);
        assert_abs_diff_eq!(direct, 0.0, epsilon = 1e-17);

        // α_13 = 1/4: d_13 = 1/2, det = ½(1/16 - 1/64) = 3/128
        let c = QutritCoefficients::new([0.25, 0.5, 0.25], [0.0, 0.25, 0.0], [0.0; 3]);
        assert_abs_diff_eq!(det_formula(&c).unwrap(), 3.0 / 128.0, epsilon = 1e-15);
        assert_abs_diff_eq!(determinant(&reconstruct(&c)).re, 3.0 / 128.0, epsilon = 1e-15);

        let c = decompose(&worked_rho()).unwrap();
        assert_abs_diff_eq!(derived_geometry(&c).determinant_factor().unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(det_formula(&c).unwrap(), 0.0, epsilon = 1e-15);

        let edge = QutritCoefficients::new([0.5, 0.5, 0.0], [1.0, 0.0, 0.0], [0.0; 3]);
        assert!(matches!(det_formula(&edge), Err(Error::Domain(_))));
    }

    #[test]
    fn phase_quadrant_matters_for_det() {
        // α < 0 in every pair: a bare arctan(β/α) would put φ in the wrong half-plane
        let c = QutritCoefficients::from_geometry(
            [0.3, 0.3, 0.4],
            [0.6, 0.5, 0.7],
            [2.5, -2.8, 1.9],
        );
        let direct = determinant(&reconstruct(&c)).re;
        assert_abs_diff_eq!(det_formula(&c).unwrap(), direct, epsilon = 1e-15);
    }

    #[test]
    fn radii_formula_examples() {
        let t = bloch_triple(&decompose(&worked_rho()).unwrap()).unwrap();
        assert_arr(radii_from_gammas(t.gamma()), t.radii, 1e-15);
        assert_arr(radii_from_gammas([0.0; 3]), [2.0 / 3.0; 3], 1e-15);
    }

    fn any_coefficients() -> impl Strategy<Value = QutritCoefficients> {
        (
            prop::array::uniform3(-1.0f64..1.0),
            prop::array::uniform3(-2.0f64..2.0),
            prop::array::uniform3(-2.0f64..2.0),
        )
            .prop_map(|(o, a, b)| QutritCoefficients::new(o, a, b))
    }

    fn normalized_coefficients() -> impl Strategy<Value = QutritCoefficients> {
        any_coefficients().prop_map(|mut c| {
            c.omega[2] = 1.0 - c.omega[0] - c.omega[1];
            c
        })
    }

    proptest! {
        #[test]
        fn decompose_reconstruct_roundtrip(c in normalized_coefficients()) {
            let back = decompose(&reconstruct(&c)).unwrap();
            prop_assert_eq!(back.alpha, c.alpha);
            prop_assert_eq!(back.beta, c.beta);
            prop_assert_eq!(back.omega, c.omega);
        }

        #[test]
        fn purity_matches_trace_inner(c in any_coefficients()) {
            let rho = reconstruct(&c);
            let tr = trace_inner(&rho, &rho).unwrap();
            prop_assert!((purity(&c) - tr.re).abs() <= 1e-12);
            prop_assert!(tr.im.abs() <= 1e-12);
        }

        #[test]
        fn algebraic_identities(c in normalized_coefficients()) {
            let t = bloch_triple(&c).unwrap();
            let g = t.gamma();
            prop_assert!((t.radii.iter().sum::<f64>() - 2.0).abs() <= 1e-14);
            prop_assert!((g[0] - g[1] + g[2]).abs() <= 1e-14);
            // γ_ij = R_ik - R_jk
            prop_assert!((g[0] - (t.radii[1] - t.radii[2])).abs() <= 1e-14);
            prop_assert!((g[1] - (t.radii[0] - t.radii[2])).abs() <= 1e-14);
            prop_assert!((g[2] - (t.radii[0] - t.radii[1])).abs() <= 1e-14);
            let r = radii_from_gammas(g);
            for (a, b) in r.iter().zip(&t.radii) {
                prop_assert!((a - b).abs() <= 1e-14);
            }
        }

        #[test]
        fn c_expectation_is_gamma(c in normalized_coefficients()) {
            let rho = reconstruct(&c);
            let t = bloch_triple(&c).unwrap();
            for (n, p) in PairIndex::QUTRIT.iter().enumerate() {
                let op = basis_operator(Generator::C(*p), 3).unwrap();
                let ev = trace_inner(&op, &rho).unwrap();
                prop_assert!((ev.re - t.u[n][2]).abs() <= 1e-12);
            }
        }

        #[test]
        fn det_formula_agrees_with_lu(
            w in prop::array::uniform3(0.01f64..1.0),
            d in prop::array::uniform3(0.0f64..1.0),
            phi in prop::array::uniform3(-PI..PI),
        ) {
            let s: f64 = w.iter().sum();
            let c = QutritCoefficients::from_geometry(w.map(|x| x / s), d, phi);
            let direct = determinant(&reconstruct(&c)).re;
            prop_assert!((det_formula(&c).unwrap() - direct).abs() <= 1e-12);
        }
    }
}
