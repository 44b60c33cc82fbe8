//! Self-adjoint boundary conditions for the one-dimensional Dirac operator
//! `σₓ(−i d/dx) + mσ_z` on two half-lines `(−∞, −Λ) ∪ (Λ, ∞)` joined by a
//! junction.
//!
//! Extensions of the minimal operator are parametrized by `U ∈ U(2)`.
//! Diagonal `U` give separating conditions `iρ±ψ↑(±Λ) = ψ↓(±Λ)` and the rest
//! give transmitting conditions `ψ(+Λ) = B_α ψ(−Λ)`. This crate converts
//! between the two descriptions, checks them against boundary-value
//! oracles, and solves the plane-wave scattering problem for either kind.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below
//! fix the scalar.
//!
//! ```
//! use junction_core::{alpha_to_u2, u2_to_alpha, AlphaBc64, Mass};
//!
//! let m = Mass::new(0.0).unwrap();
//! let flip = AlphaBc64::real(0.0, 1.0, 1.0, 0.0);
//! let q = alpha_to_u2(&flip, m).unwrap();
//! let back = u2_to_alpha(&q, m).unwrap();
//! assert!(back.max_abs_diff(&flip) < 1e-12);
//! ```
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod correspondence;
pub mod deficiency;
pub mod error;
pub mod matrix2;
pub mod real;
pub mod scattering;

pub use boundary::{
    alpha_to_bd, apply_alpha, bd_to_alpha, current, invert_alpha, make_phase_shift, make_spin_flip, random_alpha,
    random_bd_form, random_rho, random_vector, satisfies_rho, satisfies_rho_face, validate_class, AlphaBc, BdForm,
    ClassReport, ExtendedReal, Face, RhoBc,
};
pub use correspondence::{
    alpha_to_u2, alpha_to_u2_matrix, classify, compare_printed_inverse, diagonal_u2_to_rho, errata_report,
    inverse_identity_residuals, oracle_alpha_from_u2, oracle_rho_from_diagonal, printed_inverse_formula,
    rho_to_diagonal_u2, u2_to_alpha, Agreement, ErrataSummary, ExtensionClass, Mass, PrintedComparison,
};
pub use deficiency::{
    boundary_form, boundary_form_quadrature, eval_deficiency, gram_matrix, ode_residual, ode_residual_of,
    verify_selfadjoint_domain, BoundaryPair, Bump, DeficiencyFunction, GramMatrix, Island, Normalization,
    QuadGrid, SelfAdjointReport, Sign, TrialFunction,
};
pub use error::{Error, Result};
pub use matrix2::{
    compose, decompose_u2, decompose_u2_with_branch, is_diagonal, is_su2, is_unitary, random_nondiagonal_form,
    random_quaternion_form, random_unitary, C2Matrix, C2Vector, DecomposeBranch, QuaternionForm,
};
pub use real::{arg_2pi, wrap_2pi, Real};
pub use scattering::{
    plane_spinors, scatter, scatter_alpha, scatter_rho, sweep, switch_demo, PlaneWaveBasis, ScatteringResult,
    SwitchReport, SwitchUnit, SweepRow,
};

pub type C2Vector64 = C2Vector<f64>;
pub type C2Matrix64 = C2Matrix<f64>;
pub type QuaternionForm64 = QuaternionForm<f64>;
pub type AlphaBc64 = AlphaBc<f64>;
pub type RhoBc64 = RhoBc<f64>;
pub type BdForm64 = BdForm<f64>;
pub type Mass64 = Mass<f64>;
pub type ExtensionClass64 = ExtensionClass<f64>;
pub type ScatteringResult64 = ScatteringResult<f64>;

pub type C2Vector32 = C2Vector<f32>;
pub type C2Matrix32 = C2Matrix<f32>;
pub type QuaternionForm32 = QuaternionForm<f32>;
pub type AlphaBc32 = AlphaBc<f32>;
pub type RhoBc32 = RhoBc<f32>;
pub type Mass32 = Mass<f32>;
