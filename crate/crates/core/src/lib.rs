pub mod category;
pub mod cli;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod ex;
pub mod fingen;
pub mod hom;
pub mod homotopy;
pub mod io;
pub mod kan;
pub mod report;
pub mod simplex;
pub mod site;
pub mod smap;
pub mod truncated;

pub use error::{Error, Result};
