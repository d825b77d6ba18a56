//! countgen generates synthetic object-counting datasets through domain
//! randomization: low-poly meshes are deformed, scattered from a Gaussian
//! mixture, textured with random swatches, lit by random colored lights and
//! rendered over random backgrounds by a small software rasterizer. Every
//! image ships with exact dot annotations, so counts never need hand labeling.
//!
//! The crate is organized around the generation pipeline:
//!
//! * [`geometry`] — triangle meshes, the Wavefront loader and the three
//!   randomizing transforms (axis scale, vertex jitter, solidify).
//! * [`scene`] — placement sampling, texture/background/light assignment and
//!   full scene composition.
//! * [`render`] — pinhole camera, z-buffered perspective-correct rasterizer.
//! * [`annotate`] — dot/count/density ground truth plus flip and crop
//!   augmentations.
//! * [`eval`] — counting error metrics over prediction files.
//! * [`pipeline`] — deterministic parallel dataset generation, manifests and
//!   validation.
//!
//! All randomness flows through [`rng::Rng`], a seeded, portable stream;
//! a dataset is a pure function of its configuration and master seed.

pub mod annotate;
pub mod config;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod manifest;
pub mod pipeline;
pub mod render;
pub mod rng;
pub mod scene;

pub use error::{Error, Result};
