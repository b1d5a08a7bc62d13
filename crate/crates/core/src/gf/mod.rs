//! Prime fields, their extensions F_{p^k}, and the two-level tower
//! F_{p^k} ⊂ F_{p^{2k}}.

mod field;
pub(crate) mod prime;
mod tower;
pub(crate) mod unipoly;

pub use field::{Field, FieldElem, FieldSpec};
pub use prime::{is_irreducible, is_prime};
pub use tower::{FieldTower, Level};
