//! Zaremba-Jaumann tangent stiffness tensors for hyperelastic laws written in
//! rate form, with the machinery to construct, cross-check and stress-test them.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: second/fourth-order algebra, special products, Mandel 6×6.
//! - [`kinematics`]: deformation measures, SPD logarithm and its derivative.
//! - [`materials`]: Hencky (compressible and incompressible) and St. Venant-Kirchhoff.
//! - [`rates`]: pointwise objective stress rates.
//! - [`tangents`]: ℍ^ZJ_τ, ℍ^ZJ(σ), the Abaqus-format 𝔻 and the Wang/Li tensor.
//! - [`uniaxial`]: closed-form 1D stress/stiffness relations and monotonicity scans.
//! - [`verify`]: symmetry reports, stability sweeps, Hill/TSTS/determinant
//!   checks, hypoelastic integration and rate-identity audits.

pub mod error;
pub mod kinematics;
pub mod linalg;
pub mod materials;
pub mod path;
pub mod rates;
pub mod sample;
pub mod tangents;
pub mod tensor;
pub mod uniaxial;
pub mod verify;

pub use error::{Error, Result};
pub use tensor::{Tensor2, Tensor4};
