//! Exponential map for Hopf *-algebras carrying a first-order differential
//! calculus.
//!
//! An invariant vector field `X` gives an element `X∘ω` of the dual Hopf
//! algebra; its convolution exponential drives elements `m(t)` and the
//! states `ψ_t(a) = φ(m(t) a m(t)*)`. Four algebras are covered:
//!
//! * ℂ[G] for a finite group ([`group`], [`calculus`], [`expmap`]), with
//!   S₃ built in;
//! * ℂ[ℤ] on a truncated window, with the ₀F₁ closed form and a diffusion
//!   comparison ([`expmap`]);
//! * ℂ_q[SU₂] at numeric `q` ([`qsu2`]);
//! * the 4-dimensional Sweedler–Taft algebra ([`sweedler`]).
//!
//! ```
//! use hopf_exp::calculus::InvariantVectorField;
//! use hopf_exp::expmap::{s3_closed_form, TransferMatrix};
//! use hopf_exp::hopf::DualVector;
//!
//! let x = InvariantVectorField::s3_imaginary(1.0, 1.0 / 3.0, 0.5);
//! let t = TransferMatrix::from_field(&x);
//! let eps = DualVector::counit(x.calculus().domain());
//! let via_matrix = t.apply_exp(1.0, &eps).unwrap();
//! let closed = s3_closed_form(1.0.into(), (1.0 / 3.0).into(), 0.5.into(), 1.0);
//! assert!(via_matrix.max_abs_diff(&closed) < 1e-12);
//! assert!((closed.norm_l2() - 1.0).abs() < 1e-12);
//! ```

pub mod calculus;
pub mod cli;
pub mod error;
pub mod expm;
pub mod expmap;
pub mod group;
pub mod hopf;
pub mod qsu2;
pub mod special;
pub mod sweedler;
pub mod verify;

pub use calculus::{GroupCalculus, IntVectorField, InvariantVectorField};
pub use error::{Error, Result};
pub use group::{s3, FiniteGroup, IntWindow};
pub use hopf::{DualVector, FunctionElement};
