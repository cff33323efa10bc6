pub mod arith;
pub mod classgroup;
pub mod hp;
pub mod linalg;
pub mod numberfield;
pub mod poly;
pub mod predictor;
pub mod veritool;
pub mod eisenstein;
pub mod error;

pub use error::{Error, Result};
