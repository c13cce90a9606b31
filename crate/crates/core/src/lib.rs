//! Finite models of rasters, filterbases, filters and centered spaces.
//!
//! Everything works over a finite universe of points `0..n`, with subsets
//! stored as bit patterns. The modules build on each other:
//!
//! * [`setalgebra`]: subsets, collections, conditions F0–F2 and closures.
//! * [`coincidence`]: functions, coincidence sets, induced relations, germs.
//! * [`spaces`]: centered spaces, morphisms, convergence, topological spaces.
//! * [`categories`]: initial structures, (co)reflections, fibers.
//! * [`document`] and [`suites`]: file formats and verification suites used
//!   by the command-line tool.

pub mod categories;
pub mod coincidence;
pub mod document;
mod error;
pub mod setalgebra;
pub mod spaces;
pub mod suites;

pub use error::{Error, Result};
