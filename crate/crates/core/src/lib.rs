//! Spin-1 XY chain toolkit.
//!
//! The model is a periodic spin-1 chain
//!
//! ```text
//! H = J Σ_i (S^x_i S^x_{i+1} + S^y_i S^y_{i+1}) + ε V + h Σ_i S^z_i
//! ```
//!
//! with a bimagnon pair-exchange perturbation
//! `V = Σ_i (S^+_i)²(S^-_{i+1})² + h.c.` (plus three alternative
//! perturbations behind the same interface). Despite being non-integrable,
//! the chain hosts an exact bond-dimension-2 matrix product eigenstate
//! `|ψ_x⟩` and, at finite Zeeman field, an equally spaced tower of
//! low-entanglement eigenstates obtained by projecting Dicke states of
//! virtual spin-1/2 pairs onto the physical chain.
//!
//! The crate provides:
//!
//! - [`hilbert`]: symmetry-adapted sector bases (magnetization, momentum,
//!   reflection, spin inversion) with lift/project maps,
//! - [`hamiltonian`]: sparse/dense assembly of the Hamiltonian, its
//!   perturbation variants, the twisted-boundary XY chain and the twisted
//!   su(2) generators,
//! - [`spectral`]: dense eigensolvers, level-spacing r-statistics with the
//!   GOE surmise, eigenstate entanglement scans,
//! - [`mps`]: exact transfer-matrix analytics of `|ψ_x⟩` (norm, energy
//!   moments, correlations, reduced-density-matrix spectra, entanglement
//!   profiles) over both `f64` and exact rational scalars,
//! - [`scars`]: the virtual spin-1/2 construction, the projected Dicke
//!   tower and bond-bimagnon states,
//! - [`dynamics`]: exact quench evolution (sector eigendecomposition or
//!   Lanczos propagation) with return probabilities and entanglement
//!   time series.

pub mod dynamics;
pub mod hamiltonian;
pub mod hilbert;
pub mod matrix;
pub mod mps;
pub mod scalar;
pub mod scars;
pub mod spectral;

/// Default floating-point scalar.
pub type Real = f64;

/// Exact rational scalar used by the transfer-matrix analytics.
///
/// All closed forms appearing in the analytics have denominators that are
/// powers of two, so `i128` rationals stay exact up to chain lengths far
/// beyond anything a statevector can reach.
pub type Exact = num_rational::Ratio<i128>;

/// Complex amplitude type used by statevectors and operators.
pub type Complex = num_complex::Complex64;

/// Transfer objects over the default float scalar.
pub type TransferReal = mps::transfer::TransferObjects<Real>;

/// Transfer objects over the exact rational scalar.
pub type TransferExact = mps::transfer::TransferObjects<Exact>;
