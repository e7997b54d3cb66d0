//! Bounded enumeration and seeded sampling of derivations and models.

mod bounds;
mod enumerate;
mod sample;

pub use bounds::GenBounds;
pub use enumerate::{enumerate_derivations, enumerate_models};
pub use sample::{random_model, sample_model, SampleConfig, Sampler};
