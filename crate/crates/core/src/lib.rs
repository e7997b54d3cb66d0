//! Tree adjoining grammars for polynomial NARMAX model structures.
//!
//! - [`tag`]: generic TAG trees, operations and derivations.
//! - [`model`]: polynomial NARMAX (and NBJ) models in product form.
//! - [`narmax`]: the NARMAX grammar, its presets and NBJ extension, and the
//!   conversions between models and derivation trees.
//! - [`generator`]: bounded enumeration and seeded sampling.

pub mod generator;
pub mod model;
pub mod narmax;
pub mod tag;
