//! Kernels of multivariate convolution and subdivision operators as
//! exponential-polynomial spaces determined by the zeros of their symbols.

pub mod apolar;
pub mod cli;
pub mod error;
pub mod filters;
pub mod json;
pub(crate) mod linalg;
pub mod mpoly;
pub mod newton;
pub mod spectrum;
pub mod subdivision;

pub use error::{Error, Result};
pub use filters::{ExpPolySeq, Impulse, Window};
pub use mpoly::{LaurentPoly, MultiIndex, Poly, Tolerance, C64};
pub use spectrum::{Spectrum, Zero};
pub use subdivision::Dilation;
