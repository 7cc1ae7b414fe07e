pub mod curve;
pub mod error;
pub mod flux;
pub mod geometry;
pub mod interpolate;
pub mod oracle;
pub mod profile;
pub mod scenario;
pub mod shock;

pub use error::{Error, Result};
