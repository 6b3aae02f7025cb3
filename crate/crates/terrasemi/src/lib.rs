//! Multi-band image augmentation and semi-supervised segmentation toolkit.
//!
//! The crate is organized around a small set of raster types ([`imagecore`])
//! shared by geometric transforms with replayable records ([`geometry`]),
//! photometric augmentation primitives ([`appearance`]), declarative
//! augmentation policies ([`policies`]), the NT-Xent contrastive loss
//! ([`simclr`]), a pseudo-labeling consistency trainer ([`fixmatch`]),
//! dataset split protocols ([`datakit`]) and IoU metrics ([`metrics`]).
//!
//! Everything stochastic takes an explicit [`imagecore::SeedRng`] so any
//! pipeline is reproducible byte-for-byte from a (seed, stream) pair.

pub mod appearance;
pub mod cli;
pub mod datakit;
mod error;
pub mod fixmatch;
pub mod geometry;
pub mod imagecore;
pub mod metrics;
pub mod policies;
pub mod presets;
pub mod simclr;

pub use error::{Error, Result};
