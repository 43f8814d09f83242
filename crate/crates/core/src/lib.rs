//! Oblique duality toolkit for finite frames.

pub mod aliasing;
pub mod duality;
pub mod error;
pub mod frames;
pub mod geometry;
pub mod linalg;
pub mod majorization;
pub mod mat;
pub mod sampling;
pub mod tol;

pub use error::{FrameError, Result};
pub use frames::{Frame, SubspacePair};
pub use majorization::{PotentialSpec, Spectrum};
pub use mat::{C64, Mat};
pub use tol::Tol;
