pub mod algebra;
pub mod cli;
pub mod cochain;
pub mod cocycle;
pub mod dual;
pub mod eigen;
pub mod error;
pub mod extension;
pub mod fixtures;
pub mod functors;
pub mod gpd_extension;
pub mod group;
pub mod groupoid;
pub mod io;
pub mod irreps;
pub mod linalg;
pub mod matrix;
pub mod morita;
pub mod random;
pub mod report;
pub mod rep;
pub mod scalar;

pub use error::{Error, Result};
