pub mod error;
pub mod convexity;
pub mod exact;
pub mod fan;
pub mod fixtures;
pub mod io;
pub mod lorentzian;
pub mod matroid;
pub mod minkowski;
pub mod ops;

pub use error::{Error, Result};
