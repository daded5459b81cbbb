//! Comparative statics over rationality indices.

mod distribution;
mod montecarlo;
mod sweep;
mod welfare;

pub use distribution::*;
pub use montecarlo::*;
pub use sweep::*;
pub use welfare::*;
