//! Outcome polygons, their payoff images and bargaining sets.

mod bargaining;
mod polygon;

pub use bargaining::*;
pub use polygon::*;
