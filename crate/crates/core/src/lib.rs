//! Multi-Bloch-vector representation of qutrit (and general d-level)
//! density matrices.
//!
//! A qutrit state is written as
//! `ρ = Σ ω_k O_k + Σ (α_ij/2 A_ij + β_ij/2 B_ij)` over the three level
//! pairs, which packs it into three qubit-like Bloch vectors
//! `u_ij = (α_ij, β_ij, ω_i - ω_j)` with sphere radii `R_ij = 1 - ω_k`.
//! [`validity`] decides positivity directly in those coordinates,
//! [`dynamics`] evolves them under single-generator unitaries and [`qudit`]
//! extends the bookkeeping to `d` levels.

pub mod basis;
pub mod bloch;
pub mod cli;
pub mod dynamics;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod linalg;
pub mod qudit;
pub mod selftest;
pub mod tolerance;
pub mod validity;

pub use num_complex;

pub use basis::{Generator, PairIndex};
pub use bloch::{decompose, reconstruct, QutritCoefficients};
pub use error::{Error, Result};
pub use linalg::ComplexMatrix;
