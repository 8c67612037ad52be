//! Random matrix ensembles for cross-checking the constraint engine against
//! the eigenvalue oracle.
//!
//! None of these are claimed to follow any particular physical measure; they
//! exist to cover valid, invalid and boundary states of every kind.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized vector with i.i.d. complex Gaussian entries.
pub fn random_pure_vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-distributed unitary from Gram–Schmidt on a complex Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    while cols.len() < d {
        let mut v: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
        for c in &cols {
            let ip: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in v.iter_mut().zip(c) {
                *x -= ip * y;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    ComplexMatrix::from_fn(d, |i, j| cols[j][i])
}

/// `U diag(spectrum) U†` with a Haar-random `U`.
pub fn with_spectrum<R: Rng + ?Sized>(rng: &mut R, spectrum: &[f64]) -> ComplexMatrix {
    let u = random_unitary(rng, spectrum.len());
    let d = ComplexMatrix::from_real_diagonal(spectrum);
    (&(&u * &d) * &u.adjoint()).symmetrized()
}

/// `VV† / Tr(VV†)` with `V` a d×rank complex Gaussian matrix. PSD by construction.
pub fn gram_state<R: Rng + ?Sized>(rng: &mut R, d: usize, rank: usize) -> ComplexMatrix {
    let v: Vec<Complex64> = (0..d * rank).map(|_| complex_gaussian(rng)).collect();
    gram_from(d, rank, &v)
}

fn gram_from(d: usize, rank: usize, v: &[Complex64]) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(d, |i, j| {
        (0..rank).map(|k| v[i * rank + k] * v[j * rank + k].conj()).sum()
    });
    let tr = m.trace().re;
    m.scale_real(1.0 / tr)
}

/// Gram state supported on a random subset of levels, leaving at least one
/// population exactly zero.
pub fn gram_state_on_levels<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let keep = rng.random_range(1..d);
    let mut levels: Vec<usize> = (0..d).collect();
    for i in (1..d).rev() {
        levels.swap(i, rng.random_range(0..=i));
    }
    let support = &levels[..keep];
    let rank = rng.random_range(1..=keep);
    let mut v = vec![Complex64::new(0.0, 0.0); d * rank];
    for &l in support {
        for k in 0..rank {
            v[l * rank + k] = complex_gaussian(rng);
        }
    }
    gram_from(d, rank, &v)
}

/// Trace-1 Hermitian matrix with one or two clearly negative eigenvalues
/// (each ≤ -0.01).
pub fn indefinite_state<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let negatives = if d > 2 && rng.random_bool(0.25) { 2 } else { 1 };
    let mut spectrum: Vec<f64> = (0..negatives)
        .map(|_| -rng.random_range(0.01..0.5))
        .collect();
    let neg_sum: f64 = spectrum.iter().sum();
    let pos: Vec<f64> = (negatives..d).map(|_| rng.random_range(0.0..1.0)).collect();
    let pos_sum: f64 = pos.iter().sum::<f64>().max(1e-12);
    spectrum.extend(pos.iter().map(|p| p / pos_sum * (1.0 - neg_sum)));
    with_spectrum(rng, &spectrum)
}

/// `I/d + s·H₀` with `H₀` a traceless Gaussian Hermitian matrix and `s` drawn
/// log-uniformly; lands on both sides of the PSD boundary.
pub fn random_hermitian_trace_one<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, |_, _| complex_gaussian(rng)).symmetrized();
    let shift = g.trace().re / d as f64;
    let traceless = &g - &ComplexMatrix::identity(d).scale_real(shift);
    let scale = 10f64.powf(rng.random_range(-2.0..0.0)) / traceless.frobenius_norm().max(1e-12);
    let mut m = &ComplexMatrix::identity(d).scale_real(1.0 / d as f64) + &traceless.scale_real(scale);
    // pin the trace exactly against roundoff
    let fix = (1.0 - m.trace().re) / d as f64;
    for i in 0..d {
        m[(i, i)] += fix;
    }
    m
}

/// Which construction produced a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Gram,
    RankDeficient,
    ZeroPopulation,
    Pure,
    Indefinite,
    RandomHermitian,
}

/// One draw from the mixed ensemble (valid, boundary and invalid matrices).
pub fn mixed_draw<R: Rng + ?Sized>(rng: &mut R, d: usize) -> (Kind, ComplexMatrix) {
    match rng.random_range(0..6) {
        0 => (Kind::Gram, gram_state(rng, d, d)),
        1 => {
            let rank = rng.random_range(1..d.max(2));
            (Kind::RankDeficient, gram_state(rng, d, rank))
        }
        2 => (Kind::ZeroPopulation, gram_state_on_levels(rng, d)),
        3 => {
            let psi = random_pure_vector(rng, d);
            (Kind::Pure, ComplexMatrix::outer(&psi))
        }
        4 => (Kind::Indefinite, indefinite_state(rng, d)),
        _ => (Kind::RandomHermitian, random_hermitian_trace_one(rng, d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::eigenvalues_hermitian;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn constructions_have_expected_spectra() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in 2..=5 {
            for _ in 0..50 {
                let u = random_unitary(&mut rng, d);
                assert!((&u * &u.adjoint()).max_abs_diff(&ComplexMatrix::identity(d)) < 1e-12);

                let g = gram_state(&mut rng, d, d);
                assert!((g.trace().re - 1.0).abs() < 1e-14);
                assert!(eigenvalues_hermitian(&g).unwrap()[0] > -1e-14);

                let z = gram_state_on_levels(&mut rng, d);
                assert!((0..d).any(|i| z[(i, i)].re == 0.0));
                assert!(eigenvalues_hermitian(&z).unwrap()[0] > -1e-14);

                let n = indefinite_state(&mut rng, d);
                assert!((n.trace().re - 1.0).abs() < 1e-12);
                assert!(eigenvalues_hermitian(&n).unwrap()[0] < -0.009);

                let h = random_hermitian_trace_one(&mut rng, d);
                assert!((h.trace().re - 1.0).abs() < 1e-14);
                assert!(h.is_hermitian(0.0));
            }
        }
    }
}
