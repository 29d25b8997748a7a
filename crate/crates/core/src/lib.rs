//! Computational toolkit for combinatorial horoballs, augmented spaces over
//! Cayley graphs and the coarse-geometry measurements around them.
//!
//! Modules, bottom-up:
//! - [`graph`]: finite graphs, BFS metric, Rips graphs, geodesic enumeration.
//! - [`cayley`]: groups with unique normal forms, Cayley balls, parabolic cosets.
//! - [`horoball`]: restricted horoballs, augmented spaces, geodesic normal forms.
//! - [`analysis`]: four-point hyperbolicity, convexity, local geodesics,
//!   quasi-isometry fits.
//! - [`shortcut`]: bilipschitz cycle-embedding search.
//! - [`experiment`]: configs, pipelines and reports driven by the CLI.

pub mod analysis;
pub mod cayley;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod horoball;
pub mod rational;
pub mod shortcut;

pub use error::{Error, ErrorKind, Result};
pub use rational::Rational;
