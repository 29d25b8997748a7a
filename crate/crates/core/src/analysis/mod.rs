//! Coarse-geometry measurements on finite graphs: four-point hyperbolicity,
//! convexity of vertex sets, local-geodesic and quasigeodesic checks, and
//! quasi-isometry distortion fits.

mod convexity;
mod hyperbolicity;
mod quasi;

pub use convexity::{
    convexity_defect, ConvexityOptions, ConvexityReport, ConvexityScanner, PairFilter, Witness,
};
pub use hyperbolicity::{four_point_delta, twice_four_point, HyperbolicityEstimate, QuadrupleSample};
pub use quasi::{
    displacement_generating_set, is_r_local_geodesic, qi_distortion, quasigeodesic_fit, Fit,
    LocalGeodesicCheck, QiFit, WindowViolation,
};
