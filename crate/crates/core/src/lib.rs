//! Polar codes for lossy compression of binary sources.
//!
//! The crate implements the polar transform, binary-input channel models,
//! Bhattacharyya-based code construction, a log-domain successive
//! cancellation (SC) engine used both as a channel decoder (MAP decisions)
//! and as a source encoder (randomized rounding), and nested-code pipelines
//! for Wyner-Ziv, Gelfand-Pinsker, storage with defects and the one-helper
//! problem. The [`harness`] module drives reproducible experiments for the
//! `polarlab` command-line tool.

pub mod bits;
pub mod channel;
pub mod codec;
pub mod construction;
mod error;
pub mod harness;
pub mod json;
pub mod rng;
pub mod schemes;
pub mod stats;
pub mod transform;

pub use bits::{BitVector, IndexSet};
pub use channel::{BinaryInputChannel, ChannelFigures, ChannelKind};
pub use codec::{
    CodeSpec, DecisionTrace, ExperimentResult, Metric, Rounding, ScEngine, SourceModel,
};
pub use construction::{ConstructionParams, GapTable, ProfileMethod, ReliabilityProfile};
pub use error::{Error, Result};
pub use schemes::{Containment, NestedCodeSpec, Scheme, SchemeResult};
pub use stats::Estimate;
pub use transform::TransformSpec;

/// Largest supported blocklength exponent.
pub const MAX_EXPONENT: u32 = 24;
