//! Numerical and exact machinery for the Painlevé III′ Hamiltonian system.
//!
//! The crate covers the canonical system `{q, p; t, H}` of Painlevé III′,
//! its Bäcklund transformations (a realisation of the extended affine Weyl
//! group of B₂⁽¹⁾), the half-shift "corner" canonical transformations that
//! connect the parameter origin to its four lattice neighbours, and the
//! additive/multiplicative identities these maps induce for Hamiltonians,
//! canonical momenta, and τ-functions. A companion Painlevé II system with
//! the Gambier half-shift is included, as are classical-solution tools:
//! parity classification, Bessel-Toeplitz τ determinants, and exact rational
//! solutions in √t generated by shift-operator recurrences.
//!
//! Everything is complex-valued (`num_complex::Complex64`) and pure: values
//! are immutable and safe to share across threads.

pub mod classical;
pub mod corners;
pub mod identities;
pub mod integrator;
pub mod jet;
pub mod pii;
pub mod system;
pub mod weyl;

pub use integrator::{integrate, IntegrationConfig, Trajectory};
pub use system::{
    eom_rhs, hamiltonian, scalar_params, CanonicalState, ParameterPoint, ScalarParams,
};

/// The imaginary unit.
pub const I: num_complex::Complex64 = num_complex::Complex64 { re: 0.0, im: 1.0 };
