//! Steady-state energy transport between two pure-dephasing thermal
//! reservoirs coupled through a two-site quantum chain.
//!
//! Units: `hbar = k_B = 1`. Energies, temperatures (`k_B T`) and rates share
//! one reference energy scale; currents carry energy squared.

// `!(x >= 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baths;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod sweep;
pub mod thermo;

pub use baths::{BathSpec, RateSet, SpectralDensity, Statistics};
pub use dynamics::{Liouvillian, Model};
pub use error::{Error, Result};
pub use model::{Basis, DensityMatrix, Eigensystem, SystemParams};

pub type C64 = num_complex::Complex64;
pub type Mat2 = nalgebra::Matrix2<C64>;
pub type Mat4 = nalgebra::Matrix4<C64>;
pub type Vec4 = nalgebra::Vector4<C64>;
