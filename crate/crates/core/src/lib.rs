pub mod bertrand;
pub mod cli;
pub mod curve;
pub mod direction;
pub mod error;
pub mod frenet;
pub mod interp;
pub mod quadrature;
pub mod spherical;
pub mod surface;

pub use curve::{build_curve, Curve, CurveSpec, Family, Vec3};
pub use error::{Error, Result};
