//! Finite Cayley-graph balls for a catalog of groups with unique normal
//! forms, and the parabolic coset subgraphs of free products.

mod ball;
mod cosets;
mod group;

pub use ball::{cayley_ball, projected_ball_size, CayleyBall, DEFAULT_MAX_VERTICES};
pub use cosets::{all_coset_families, coset_family, whole_group_family, CosetSubgraph};
pub use group::{
    Factor, FactorElement, FactorKind, Generator, Group, GroupElement, GroupSpec,
    HeisenbergOptions,
};
