//! Harmonic analysis over the symmetric group and its application to
//! many-particle interference.

pub mod error;
pub mod fourier;
pub mod interference;
pub mod irreps;
pub mod partition;
pub mod perm;
pub mod scalar;
pub mod suppression;
pub mod verify;

pub use error::{Error, Result};
pub use partition::Partition;
pub use perm::{Permutation, Subgroup};
pub use scalar::Real;

pub use interference::CMatrix;
pub use num_complex::Complex64;

pub type IrrepTable = irreps::IrrepTable<f64>;
pub type IrrepTableF32 = irreps::IrrepTable<f32>;
pub type GroupFunction = fourier::GroupFunction<f64>;
pub type GroupFunctionF32 = fourier::GroupFunction<f32>;
pub type SpectralFunction = fourier::SpectralFunction<f64>;
pub type SpectralFunctionF32 = fourier::SpectralFunction<f32>;
