//! Accessible information of quantum ensembles, the Holevo bound, and the
//! weaker bound obtained from a reversible gas cycle with measuring
//! membranes:
//!
//! ```text
//! I(A:B) ≤ χ ≤ χ + ΔS,   χ = S(ρ) - Σ p_i S(ρ_i),   ΔS = S(σ) - S(ρ)
//! ```
//!
//! where `σ` is the post-measurement state of `ρ = Σ p_i ρ_i`. The
//! [`thermo`] module replays the cycle as a work ledger in units of
//! `kT ln 2`, and [`blockcoding`] looks at square-root measurements on long
//! sequences.

pub mod blockcoding;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod linops;
pub mod measurement;
pub mod quantum;
pub mod suite;
pub mod thermo;

pub use error::{Error, Result};
pub use linops::{ComplexMatrix, C64};
pub use measurement::Povm;
pub use quantum::{DensityMatrix, Ensemble};
