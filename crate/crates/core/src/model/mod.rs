//! Name and type resolution over a set of parsed units.

mod bind;
mod resolve;
mod scope;
mod types;
mod value;

pub use bind::*;
pub use resolve::{resolve, substitute_generics};
pub use scope::*;
pub use types::*;
pub use value::*;
