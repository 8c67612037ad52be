//! Orthogonality of a pure state to another state, in Bloch-vector form.
//!
//! All three expressions equal `2 Tr(ρρ′)`, so the states are orthogonal
//! exactly when they vanish.

use serde::Serialize;

use crate::bloch::{bloch_triple_unchecked, dot3, norm3, purity, QutritCoefficients};
use crate::error::{Error, Result};
use crate::tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    /// `2 Σ ω_i ω_i′ + Σ v_ij · v_ij′`
    pub population_form: f64,
    /// `2 - Σ R_ij R_ij′ + Σ u_ij · u_ij′`
    pub radius_form: f64,
    /// `2 - Σ |u_ij| |u_ij′| (1 - cos θ_ij)`; only for two pure states.
    pub angle_form: Option<f64>,
    pub orthogonal: bool,
}

fn ensure_pure(c: &QutritCoefficients) -> Result<()> {
    let p = purity(c);
    if (p - 1.0).abs() > tolerance::PURITY || (c.trace() - 1.0).abs() > tolerance::PURITY {
        return Err(Error::NotPure { purity: p });
    }
    Ok(())
}

fn population_form(p: &QutritCoefficients, q: &QutritCoefficients) -> f64 {
    let pop: f64 = (0..3).map(|k| p.omega[k] * q.omega[k]).sum();
    let coh: f64 = (0..3).map(|n| p.alpha[n] * q.alpha[n] + p.beta[n] * q.beta[n]).sum();
    2.0 * pop + coh
}

fn radius_form(p: &QutritCoefficients, q: &QutritCoefficients) -> f64 {
    let (a, b) = (bloch_triple_unchecked(p), bloch_triple_unchecked(q));
    let rr: f64 = (0..3).map(|n| a.radii[n] * b.radii[n]).sum();
    let uu: f64 = (0..3).map(|n| dot3(&a.u[n], &b.u[n])).sum();
    2.0 - rr + uu
}

fn angle_form(p: &QutritCoefficients, q: &QutritCoefficients) -> f64 {
    let (a, b) = (bloch_triple_unchecked(p), bloch_triple_unchecked(q));
    let mut s = 0.0;
    for n in 0..3 {
        let (la, lb) = (norm3(&a.u[n]), norm3(&b.u[n]));
        if la == 0.0 || lb == 0.0 {
            continue;
        }
        let cos = (dot3(&a.u[n], &b.u[n]) / (la * lb)).clamp(-1.0, 1.0);
        s += la * lb * (1.0 - cos);
    }
    2.0 - s
}

fn verdict(value: f64) -> bool {
    value.abs() / 2.0 <= tolerance::ORTHOGONALITY
}

/// Orthogonality of a pure `p` to an arbitrary state `q`.
pub fn orthogonal_pure_mixed(
    p: &QutritCoefficients,
    q: &QutritCoefficients,
) -> Result<OrthogonalityReport> {
    ensure_pure(p)?;
    let population_form = population_form(p, q);
    Ok(OrthogonalityReport {
        population_form,
        radius_form: radius_form(p, q),
        angle_form: None,
        orthogonal: verdict(population_form),
    })
}

/// Orthogonality of two pure states, decided by the angle form.
pub fn orthogonal_pure_pure(
    p: &QutritCoefficients,
    q: &QutritCoefficients,
) -> Result<OrthogonalityReport> {
    ensure_pure(p)?;
    ensure_pure(q)?;
    let angle = angle_form(p, q);
    Ok(OrthogonalityReport {
        population_form: population_form(p, q),
        radius_form: radius_form(p, q),
        angle_form: Some(angle),
        orthogonal: verdict(angle),
    })
}
