//! Amphicheirality of reduced alternating prime links through flype orbits
//! and checkerboard-graph duality.

pub mod bracket;
pub mod checkerboard;
pub mod chirality;
pub mod conway;
pub mod diagram;
pub mod fixtures;
pub mod flype;
pub mod polyhedra;
