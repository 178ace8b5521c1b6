//! Deformation calculus for hyperbolic 3-manifolds in the upper half-space
//! model.
//!
//! The crate is generic over the real scalar (`f32` or `f64`); the
//! `*64` aliases at the root fix `f64`, which all tolerances assume.
//! Modules built on quadrature, field expressions or representation
//! functionals work in `f64` only.

pub mod boundary;
pub mod calculus;
pub mod cone;
pub mod convex;
pub mod cusp;
pub mod epstein;
pub mod error;
pub mod field;
pub mod forms;
pub mod frame;
pub mod halfspace;
pub mod horosphere;
pub mod jet;
pub mod killing;
pub mod quadrature;
pub mod repvar;
pub mod sample;
pub mod scalar;
pub mod vector;

pub use calculus::Ops;
pub use error::{Error, Result};
pub use field::{jet_of, product_rule_residual, FieldExpr, ScalarJet};
pub use forms::{EForm, Fiber, RForm};
pub use halfspace::{frame_at, hyp_distance, BoundaryPoint, HPoint, Mobius};
pub use horosphere::BoundaryField;
pub use jet::Jet;
pub use killing::{eval_killing, FiberElement, KillingField};
pub use scalar::Real;
pub use vector::VectorField;

pub type HPoint64 = HPoint<f64>;
pub type Mobius64 = Mobius<f64>;
pub type Jet64 = Jet<f64>;
pub type ScalarJet64 = ScalarJet<f64>;
pub type EForm64 = EForm<f64>;
pub type KillingField64 = KillingField<f64>;
pub type FiberElement64 = FiberElement<f64>;
pub type VectorField64 = VectorField<f64>;
