//! Exact harmonic analysis on the p-biased cube `{0,1}^n` and on finite
//! product spaces, with checkers for the hypercontractive, isoperimetric,
//! sharp-threshold and invariance inequalities built on it.
//!
//! Every function is a dense table. Bit `i` of an index is coordinate
//! `x_{i+1}`; the same bit of a subset mask means `i+1 ∈ S`.

pub mod cube;
pub mod error;
pub mod generators;
pub mod hyper;
pub mod influence;
pub mod invariance;
pub mod io;
pub mod noise;
pub mod product;
pub mod scalar;
pub mod stability;
pub mod subset;
pub mod threshold;

pub use cube::{BiasedCube, CubeFunction, SpectralForm, DEFAULT_N_CAP};
pub use error::{Error, Result};
pub use generators::Generator;
pub use scalar::Scalar;
pub use subset::Subset;

pub type Cube = BiasedCube<f64>;
pub type Function = CubeFunction<f64>;
pub type Spectrum = SpectralForm<f64>;
pub type Cube32 = BiasedCube<f32>;
pub type Function32 = CubeFunction<f32>;
pub type Spectrum32 = SpectralForm<f32>;
