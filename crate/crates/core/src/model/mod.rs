//! Polynomial NARMAX models in product form, plus the two-equation NBJ
//! variant.

mod error;
mod monomial;
mod narmax;
mod nbj;
mod text;

pub use error::ModelError;
pub use monomial::{Factor, Mode, Monomial, SignalKind, TermIndexSets};
pub use narmax::{ModelClass, NarmaxModel};
pub use nbj::NbjModel;
pub use text::{format_model_text, parse_model_text};
