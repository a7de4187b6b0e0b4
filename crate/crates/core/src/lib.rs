pub mod error;
pub mod lincomb;
pub mod linalg;
pub mod commpoly;
pub mod metabelian;
pub mod wreath;
pub mod constants;
pub mod grassmann;
pub mod kernel;
pub mod exprio;
pub mod sample;
pub mod checks;
pub mod cli;

pub use error::{Error, Result};
pub use lincomb::LinComb;
pub use linalg::Rational;
