//! Normalized many-body coherence of identical bosons or fermions whose
//! internal degrees of freedom are statistically mixed.
//!
//! The coherence `W_C` is the mean modulus of the off-diagonal elements of
//! the external many-body state in the basis of permuted mode assignments.
//! It is 1 for perfectly indistinguishable particles and 0 for fully
//! distinguishable ones. This crate evaluates it
//!
//! * exactly for arbitrary small-`N` internal states ([`coherence::coherence_oracle`],
//!   [`external::build_external`]),
//! * exactly for product states of any size from the single-particle spectrum
//!   ([`coherence::coherence_spectral`]),
//! * through closed forms and large-`N` asymptotics,
//!
//! and provides the two physical scenarios: thermally excited atoms
//! ([`thermal`]) and photons with random arrival times ([`photon`]).
//!
//! Data-parallel loops go through [`exec`]; the `parallel` feature (on by
//! default) backs them with rayon.

pub mod coherence;
pub mod error;
pub mod exec;
pub mod external;
pub mod grid;
pub mod photon;
pub mod scaled;
pub mod state;
pub mod symgroup;
pub mod thermal;

pub use coherence::{CoherenceResult, Method};
pub use error::{Error, Result};
pub use exec::Execution;
pub use external::{ExternalState, Statistics};
pub use scaled::ScaledReal;
pub use state::{DensityMatrix, Spectrum};
pub use symgroup::{CycleType, Permutation};
