//! Computational laboratory for non-Hermitian random matrices.
//!
//! The crate covers controllability of random linear systems (Kalman rank,
//! PBH left-eigenvector test), eigenvalue-gap statistics with an exact
//! simple-spectrum decision for integer matrices, anti-concentration
//! structure of vectors (compressibility, least common denominator,
//! real-imaginary correlation, Lévy concentration) and digraph spectra,
//! plus a reproducible Monte Carlo campaign runner tying them together.
//!
//! Every random object is a pure function of a 64-bit seed; see [`seed`].

pub mod control;
pub mod ensembles;
pub mod experiments;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod rational;
pub mod seed;
pub mod spectral;
pub mod stats;
pub mod structure;

pub use error::{Error, Result};

/// Version tag embedded in every JSON and CSV export.
pub const SCHEMA_VERSION: u32 = 1;
