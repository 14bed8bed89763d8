//! Newcomb's problem as a two-player game with an oracle.
//!
//! * [`decision`]: closed-form expected utilities over predictor-accuracy space,
//!   the choice rule, its affine boundary and decision-region grids.
//! * [`tlg`]: the time-lines graph, retrocausal unfolding, entanglement
//!   closure, per-player timelines, twist detection and DOT export.
//! * [`sim`]: single plays resolved in the oracle's frame and reproducible
//!   parallel Monte Carlo batches.
//! * [`cli`]: configuration parsing and the report/CSV/DOT writers used by the
//!   `newcomb` binary.

pub mod cli;
pub mod decision;
pub mod error;
pub mod sim;
pub mod tlg;

pub use decision::{
    choose, decision_boundary, dominant_choice, expected_utilities, region_grid, Choice,
    DecisionBoundary, PredictorProfile, RegionGrid, SChoice, UtilityMatrix,
};
pub use error::{Error, Result};
