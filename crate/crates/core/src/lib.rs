//! Exact spectral analysis of t-copy Haar moment operators.
//!
//! The crate computes, in exact rational arithmetic, the spectral
//! decomposition of the density matrix obtained by averaging t copies of a
//! real Haar random state, together with the complex-Haar and binary-phase
//! counterparts; the Schatten distances between them (exact, closed-form, and
//! asymptotic); the harmonic-polynomial eigenbasis and the optimal
//! distinguishing projector; and the copy bounds these distances imply for
//! real-valued state designs and imaginarity testing. Every closed-form
//! quantity is paired with an independent brute-force or Monte Carlo oracle.

pub mod applications;
pub mod combinatorics;
pub mod distances;
pub mod harmonic;
pub mod moments;
pub mod spectra;
pub mod verify;

mod error;
mod ratlin;

pub use applications::{BoundParameter, BoundReport, ImaginarityModel};
pub use combinatorics::{BigNat, Rat};
pub use distances::{DistanceReport, Method, PNorm, Regime};
pub use error::{Error, Result};
pub use harmonic::{Monomial, Poly, SymVector};
pub use moments::{Ensemble, FloatMatrix, RatMatrix, DEFAULT_MATRIX_CAP, RNG_ALGORITHM};
pub use spectra::{EnsembleSpectrum, RealHaarSpectrum, SpectralLine};
