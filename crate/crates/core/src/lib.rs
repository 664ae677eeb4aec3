//! Multi-cell downlink simulator for aerial users served by uptilted sectors.
//!
//! Each base station carries two vertical uniform linear arrays: a
//! conventional downtilted sector for ground users and an uptilted sector
//! pointed at aerial users. The two kinds of sector transmit in disjoint
//! time slots, so an aerial user sees either the full network (uncoordinated
//! slots) or only the uptilted sectors (coordinated slots). The crate
//! models the 19-site wraparound layout, the two-ray ground-reflection
//! channel, per-slot SIR statistics for aerial and ground users, and
//! several optimizers for the per-site uptilt angles that maximize the
//! worst-point aerial SIR.
//!
//! Modules, bottom to top:
//!
//! * [`geometry`] — site layout, wraparound distance, receiver grid
//! * [`antenna`] — vertical element pattern and array factor
//! * [`propagation`] — two-ray link budget with height-dependent path loss
//! * [`network`] — power matrices, association, SIR fields, rate statistics
//! * [`optimize`] — max-min tilt optimization (GA, PSO, local search, baselines)

pub mod antenna;
pub mod geometry;
pub mod network;
pub mod optimize;
pub mod propagation;

mod error;
pub use error::{Error, Result};
