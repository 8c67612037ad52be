//! Unitary evolution `ρ → U ρ U†` with `U = exp(iθG)` for a single basis
//! generator `G`, plus the closed-form laws obeyed by the Bloch quantities.
//!
//! Evolution is always computed in the matrix picture; the closed forms here
//! are predictions to test it against.
//!
//! Sign convention: with `U = exp(iθG)` and positive `θ`, the planar vectors
//! `v_ij = (α_ij, β_ij)` turn clockwise. [`c_rotation_rates`] reports the
//! signed counter-clockwise rate of each pair.

use std::f64::consts::PI;

use serde::Serialize;

use crate::basis::{basis_operator, Generator, PairIndex};
use crate::bloch::{
    bloch_triple_unchecked, decompose, purity, reconstruct, wrap_phase, BlochTriple,
    QutritCoefficients,
};
use crate::error::{Error, Result};
use crate::linalg::matrix_exp_unitary;
use crate::tolerance;
use crate::validity::check_constraints;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub theta: f64,
    pub coefficients: QutritCoefficients,
    pub radii: [f64; 3],
    pub bloch: BlochTriple,
    pub purity: f64,
}

impl TrajectoryPoint {
    fn new(theta: f64, coefficients: QutritCoefficients) -> Self {
        let bloch = bloch_triple_unchecked(&coefficients);
        TrajectoryPoint {
            theta,
            coefficients,
            radii: bloch.radii,
            bloch,
            purity: purity(&coefficients),
        }
    }
}

/// Parameters of `offset + ½·amplitude·f(2θ + phase)`, with `f = sin` for
/// `A`-type and `f = cos` for `B`-type generators. `residual` is the largest
/// pointwise deviation of the samples from the fitted curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationFit {
    pub amplitude: f64,
    pub phase: f64,
    pub offset: f64,
    pub residual: f64,
}

fn ensure_evolvable(c: &QutritCoefficients, g: Generator) -> Result<()> {
    if matches!(g, Generator::O(_)) {
        return Err(Error::InvalidGenerator(format!(
            "{g}: only A, B and C generators drive evolution"
        )));
    }
    let report = check_constraints(c, tolerance::VALIDITY);
    if !report.overall {
        let failed: Vec<&str> = report.failures().map(|e| e.id.as_str()).collect();
        return Err(Error::InvalidState(format!(
            "initial state violates {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn evolve_unchecked(c: &QutritCoefficients, g: Generator, theta: f64) -> Result<QutritCoefficients> {
    let u = matrix_exp_unitary(&basis_operator(g, 3)?, theta)?;
    let rho = &(&u * &reconstruct(c)) * &u.adjoint();
    decompose(&rho.symmetrized())
}

/// `decompose(U ρ U†)` with `U = exp(iθG)`.
pub fn evolve(c: &QutritCoefficients, g: Generator, theta: f64) -> Result<QutritCoefficients> {
    ensure_evolvable(c, g)?;
    evolve_unchecked(c, g, theta)
}

/// `steps` points at `θ = k·theta_max/(steps-1)`.
pub fn trajectory(
    c: &QutritCoefficients,
    g: Generator,
    theta_max: f64,
    steps: usize,
) -> Result<Vec<TrajectoryPoint>> {
    if steps < 2 {
        return Err(Error::Precondition(format!("steps must be at least 2, got {steps}")));
    }
    if !theta_max.is_finite() {
        return Err(Error::Precondition(format!("theta_max must be finite, got {theta_max}")));
    }
    ensure_evolvable(c, g)?;
    let basis = basis_operator(g, 3)?;
    (0..steps)
        .map(|k| {
            let theta = theta_max * k as f64 / (steps - 1) as f64;
            let u = matrix_exp_unitary(&basis, theta)?;
            let rho = &(&u * &reconstruct(c)) * &u.adjoint();
            Ok(TrajectoryPoint::new(theta, decompose(&rho.symmetrized())?))
        })
        .collect()
}

/// Counter-clockwise rotation rate of `v_12`, `v_13`, `v_23` under a `C`
/// generator, in units of `θ`.
pub fn c_rotation_rates(g: Generator) -> Result<[f64; 3]> {
    let Generator::C(p) = g else {
        return Err(Error::InvalidGenerator(format!("{g} is not a C generator")));
    };
    let mut c = [0.0; 3];
    let (a, b) = p.zero_based();
    c[a] = 1.0;
    c[b] = -1.0;
    Ok(PairIndex::QUTRIT.map(|q| {
        let (i, j) = q.zero_based();
        -(c[i] - c[j])
    }))
}

/// Closed-form state after evolving under a `C` generator: populations fixed,
/// each `v_ij` turned by its rate times `θ`.
pub fn c_rotation_closed_form(
    c: &QutritCoefficients,
    g: Generator,
    theta: f64,
) -> Result<QutritCoefficients> {
    let rates = c_rotation_rates(g)?;
    let mut out = *c;
    for (n, rate) in rates.iter().enumerate() {
        let (s, co) = (rate * theta).sin_cos();
        out.alpha[n] = co * c.alpha[n] - s * c.beta[n];
        out.beta[n] = s * c.alpha[n] + co * c.beta[n];
    }
    Ok(out)
}

fn ab_pair(g: Generator) -> Result<(PairIndex, bool)> {
    match g {
        Generator::A(p) => Ok((p, true)),
        Generator::B(p) => Ok((p, false)),
        _ => Err(Error::InvalidGenerator(format!("{g} is not an A or B generator"))),
    }
}

/// `𝒜_ij = √(β_ij² + γ_ij²)` for `A_ij`, `ℬ_ij = √(α_ij² + γ_ij²)` for `B_ij`.
pub fn oscillation_amplitude(c: &QutritCoefficients, g: Generator) -> Result<f64> {
    let (p, is_a) = ab_pair(g)?;
    let n = p.position(3);
    let (i, j) = p.zero_based();
    let gamma = c.omega[i] - c.omega[j];
    Ok(if is_a { c.beta[n].hypot(gamma) } else { c.alpha[n].hypot(gamma) })
}

/// Phase `φ` of the closed form for the `ik` radius, in the same convention
/// as [`OscillationFit::phase`].
pub fn oscillation_phase(c: &QutritCoefficients, g: Generator) -> Result<f64> {
    let (p, is_a) = ab_pair(g)?;
    let n = p.position(3);
    let (i, j) = p.zero_based();
    let gamma = c.omega[i] - c.omega[j];
    Ok(if is_a {
        gamma.atan2(-c.beta[n])
    } else {
        (-c.alpha[n]).atan2(gamma)
    })
}

/// Closed-form radii `(R_12, R_13, R_23)` after evolving by `θ` under an `A`
/// or `B` generator. For `G = A_ij`
/// `R_ik = ½(1 + ω_k + 𝒜 sin(2θ + φ))` and `R_jk = ½(1 + ω_k - 𝒜 sin(2θ + φ))`;
/// `B_ij` is the same with `ℬ cos`. `R_ij` stays `1 - ω_k`.
pub fn radius_closed_form(c: &QutritCoefficients, g: Generator, theta: f64) -> Result<[f64; 3]> {
    let (p, is_a) = ab_pair(g)?;
    let amp = oscillation_amplitude(c, g)?;
    let phase = oscillation_phase(c, g)?;
    let wave = if is_a {
        amp * (2.0 * theta + phase).sin()
    } else {
        amp * (2.0 * theta + phase).cos()
    };
    let (i, j) = (p.i(), p.j());
    let k = p.complement();
    let wk = c.omega[k - 1];
    let mut radii = [0.0; 3];
    radii[p.position(3)] = 1.0 - wk;
    radii[PairIndex::new(i, k, 3)?.position(3)] = 0.5 * (1.0 + wk + wave);
    radii[PairIndex::new(j, k, 3)?.position(3)] = 0.5 * (1.0 + wk - wave);
    Ok(radii)
}

/// Number of samples per period used by [`radius_oscillation_fit`].
pub const FIT_SAMPLES: usize = 256;

/// Least-squares fit of the `R_ik` and `R_jk` trajectories under `G = A_ij`
/// or `B_ij` over one period, frequency fixed at 2.
pub fn radius_oscillation_fit(
    c: &QutritCoefficients,
    g: Generator,
) -> Result<(OscillationFit, OscillationFit)> {
    let (p, is_a) = ab_pair(g)?;
    ensure_evolvable(c, g)?;
    let k = p.complement();
    let ik = PairIndex::new(p.i(), k, 3)?.position(3);
    let jk = PairIndex::new(p.j(), k, 3)?.position(3);

    let n = FIT_SAMPLES;
    let thetas: Vec<f64> = (0..n).map(|m| PI * m as f64 / n as f64).collect();
    let mut r_ik = Vec::with_capacity(n);
    let mut r_jk = Vec::with_capacity(n);
    for &t in &thetas {
        let radii = bloch_triple_unchecked(&evolve_unchecked(c, g, t)?).radii;
        r_ik.push(radii[ik]);
        r_jk.push(radii[jk]);
    }
    Ok((fit(&thetas, &r_ik, is_a), fit(&thetas, &r_jk, is_a)))
}

// Equispaced samples over a full period make the sin/cos/constant columns
// orthogonal, so the least-squares solution is a discrete Fourier sum.
fn fit(thetas: &[f64], ys: &[f64], sine_form: bool) -> OscillationFit {
    let n = ys.len() as f64;
    let offset = ys.iter().sum::<f64>() / n;
    let (mut s, mut co) = (0.0, 0.0);
    for (&t, &y) in thetas.iter().zip(ys) {
        s += (y - offset) * (2.0 * t).sin();
        co += (y - offset) * (2.0 * t).cos();
    }
    s *= 2.0 / n;
    co *= 2.0 / n;
    let residual = thetas
        .iter()
        .zip(ys)
        .map(|(&t, &y)| (y - offset - s * (2.0 * t).sin() - co * (2.0 * t).cos()).abs())
        .fold(0.0, f64::max);
    let amplitude = 2.0 * s.hypot(co);
    let phase = if amplitude == 0.0 {
        0.0
    } else if sine_form {
        co.atan2(s)
    } else {
        (-s).atan2(co)
    };
    OscillationFit {
        amplitude,
        phase: wrap_phase(phase),
        offset,
        residual,
    }
}

/// Expectation value `Tr(ρG)` read off the coefficients.
pub fn expectation(c: &QutritCoefficients, g: Generator) -> Result<f64> {
    let n = |p: PairIndex| p.position(3);
    Ok(match g {
        Generator::A(p) => c.alpha[n(p)],
        Generator::B(p) => c.beta[n(p)],
        Generator::C(p) => {
            let (i, j) = p.zero_based();
            c.omega[i] - c.omega[j]
        }
        Generator::O(k) => {
            if k == 0 || k > 3 {
                return Err(Error::IndexOutOfRange { index: k, dim: 3 });
            }
            c.omega[k - 1]
        }
    })
}
