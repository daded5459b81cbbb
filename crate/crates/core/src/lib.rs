pub mod expr;
pub mod geometry;
pub mod model;
pub mod solver;
pub mod demand;
pub mod analysis;
pub mod output;
pub mod scenario;
pub mod cli;
