//! Envelope-area optimization for barn-type houses: a rectangular footprint
//! with a symmetric gable roof.
//!
//! Angles are radians throughout the library. Front ends take degrees and
//! convert at the boundary.

pub mod assess;
pub mod compactness;
pub mod error;
pub mod export;
pub mod fields;
pub mod geometry;
pub mod optimize_floor;
pub mod optimize_volume;
pub mod oracle;
pub mod verify;

pub use assess::{assess, Assessment, CaseStudyRow};
pub use compactness::{compactness, CompactnessReport};
pub use error::{BarnError, Result};
pub use geometry::{
    gamma, params_from_ratios, ratios_from_params, surface, volume, EnvelopeBreakdown,
    HouseParams, ShapeRatios, ALPHA_MAX, ALPHA_MIN,
};
pub use optimize_floor::{optimize_fixed_floor, solve_depressed_cubic, FixedFloorOptimum};
pub use optimize_volume::{optimal_ratios, optimize_fixed_volume, FixedVolumeOptimum};
