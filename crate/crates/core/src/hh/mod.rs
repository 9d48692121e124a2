//! Hermite-Hadamard chains, the integration-by-parts identity and the Hölder
//! bound on the identity's left side.

mod bound;
mod chain;
mod identity;

pub use bound::{bound_theorem, bound_theorem_with, derivative_magnitude, BoundReport};
pub use chain::{
    chain_classical_2d, chain_harmonic_1d, chain_harmonic_2d, ChainKind, ChainReport,
    ORDERING_SLACK,
};
pub use identity::{
    identity_lemma, identity_lemma_with, IdentityReport, MixedPartial, RESIDUAL_SLACK,
};
