//! Constructive sampler for valid qutrit states.
//!
//! Draws follow the Bloch-vector parameterization directly:
//!
//! 1. `R_12 ~ U[0,1]` and `u_12` uniform in the ball of radius `R_12`; this
//!    fixes all populations and the (1,2) coherence.
//! 2. `d_13, d_23 ~ U[0,1]`, redrawn until some total phase admits a valid
//!    state (the `Φ = 0` determinant factor is nonnegative).
//! 3. `φ_13, φ_23` uniform, redrawn until the determinant factor at the
//!    resulting `Φ` is nonnegative.
//!
//! The induced measure is not any standard one (Hilbert–Schmidt, Bures).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::check_constraints;
use crate::bloch::{derived_geometry, QutritCoefficients};

pub const MAX_PHASE_DRAWS: usize = 10_000;
pub const MAX_LENGTH_DRAWS: usize = 10_000;

const FINAL_CHECK_TOL: f64 = 1e-12;

fn factor(d: [f64; 3], total_phase: f64) -> f64 {
    let [a, b, c] = d;
    1.0 - a * a - b * b - c * c + 2.0 * a * b * c * total_phase.cos()
}

/// Seeded sampler. The same seed always yields the same sequence.
#[derive(Debug, Clone)]
pub struct Sampler {
    rng: ChaCha8Rng,
    /// Step-3 loops that ran out of draws and fell back to `Φ = 0`.
    pub phase_fallbacks: u64,
    /// Step-2 loops that ran out of draws and fell back to `d_13 = d_23 = 0`.
    pub length_fallbacks: u64,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            phase_fallbacks: 0,
            length_fallbacks: 0,
        }
    }

    pub fn draw(&mut self) -> QutritCoefficients {
        loop {
            let c = self.attempt();
            if check_constraints(&c, FINAL_CHECK_TOL).overall {
                return c;
            }
        }
    }

    fn attempt(&mut self) -> QutritCoefficients {
        let rng = &mut self.rng;

        let r12: f64 = rng.random();
        let z = 2.0 * rng.random::<f64>() - 1.0;
        let az = 2.0 * PI * rng.random::<f64>();
        let len = r12 * rng.random::<f64>().cbrt();
        let s = (1.0 - z * z).max(0.0).sqrt();
        let (ux, uy, uz) = (len * s * az.cos(), len * s * az.sin(), len * z);
        let omega = [(r12 + uz) / 2.0, (r12 - uz) / 2.0, 1.0 - r12];

        let partial = QutritCoefficients::new(omega, [ux, 0.0, 0.0], [uy, 0.0, 0.0]);
        let geom = derived_geometry(&partial);
        let d12 = geom.d[0].unwrap_or(0.0).min(1.0);
        let phi12 = geom.phi[0];

        let mut lengths = None;
        for _ in 0..MAX_LENGTH_DRAWS {
            let d = [d12, rng.random::<f64>(), rng.random::<f64>()];
            if factor(d, 0.0) >= 0.0 {
                lengths = Some(d);
                break;
            }
        }
        let d = lengths.unwrap_or_else(|| {
            self.length_fallbacks += 1;
            [d12, 0.0, 0.0]
        });

        let mut phases = None;
        for _ in 0..MAX_PHASE_DRAWS {
            let p13 = self.rng.random_range(-PI..PI);
            let p23 = self.rng.random_range(-PI..PI);
            if factor(d, phi12 - p13 + p23) >= 0.0 {
                phases = Some([phi12, p13, p23]);
                break;
            }
        }
        let phi = phases.unwrap_or_else(|| {
            self.phase_fallbacks += 1;
            let p13 = 0.0;
            [phi12, p13, p13 - phi12]
        });

        let mut c = QutritCoefficients::from_geometry(omega, d, phi);
        // keep the exact step-1 draw for the (1,2) block
        c.alpha[0] = ux;
        c.beta[0] = uy;
        c
    }
}

/// Single valid state from `seed`.
pub fn sample_valid(seed: u64) -> QutritCoefficients {
    Sampler::new(seed).draw()
}

/// SplitMix64 finalizer applied to `seed + index`; gives each batch element
/// an independent stream.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `count` states, drawn in parallel. The result depends only on `seed` and
/// `count`, not on the thread count.
pub fn sample_batch(seed: u64, count: usize) -> Vec<QutritCoefficients> {
    (0..count as u64)
        .into_par_iter()
        .map(|i| sample_valid(derive_seed(seed, i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{bloch_triple, reconstruct};
    use crate::linalg::eigenvalues_hermitian;
    use crate::validity::is_valid_state;

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(sample_valid(42), sample_valid(42));
        assert_ne!(sample_valid(42), sample_valid(43));
        assert_eq!(sample_batch(9, 64), sample_batch(9, 64));
        assert_eq!(sample_batch(9, 64)[..10], sample_batch(9, 10)[..]);
    }

    #[test]
    fn draws_are_positive_semidefinite() {
        for c in sample_batch(1, 2000) {
            assert!(is_valid_state(&c, 1e-12));
            assert!((c.trace() - 1.0).abs() < 1e-14);
            let lo = eigenvalues_hermitian(&reconstruct(&c)).unwrap()[0];
            assert!(lo >= -1e-12, "{lo}");
        }
    }

    #[test]
    fn seeds_are_spread() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|i| derive_seed(0, i)).collect();
        assert_eq!(seeds.len(), 1000);
    }

    #[test]
    fn marginals_look_reasonable() {
        // R_12 is uniform on [0,1] by construction; check its mean and spread.
        let n = 4000;
        let r12: Vec<f64> = sample_batch(5, n)
            .iter()
            .map(|c| bloch_triple(c).unwrap().radii[0])
            .collect();
        let mean = r12.iter().sum::<f64>() / n as f64;
        let var = r12.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.03, "{mean}");
        assert!((var - 1.0 / 12.0).abs() < 0.01, "{var}");
    }
}
