//! The NARMAX tree adjoining grammar and model/derivation conversions.

mod catalog;
mod convert;
mod error;

pub use catalog::{
    build_gn, build_gnbj, restrict, token, GnCatalog, GrammarPreset, NbjCatalog, NbjPart, TreeRole,
};
pub use convert::{
    derived_to_model, model_from_yield, model_to_derivation, model_yield, nbj_derived_to_model,
    nbj_model_from_yield, nbj_model_to_derivation, nbj_model_yield, nbj_roundtrip_check,
    roundtrip_check,
};
pub use error::NarmaxError;
