pub mod certificates;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod lowerbounds;
pub mod poly;
pub mod symfun;

pub use error::{Error, Result};
