//! Combinatorial horoballs truncated at a finite depth, augmented spaces
//! obtained by gluing them onto a base graph, and the normal-form geodesics
//! and shape laws of paths inside a horoball.

mod augmented;
mod restricted;
mod segments;

pub use augmented::{build_augmented, AugmentedSpace, Parabolic, Provenance};
pub use restricted::{level_distance, GeodesicNormalForm, RestrictedHoroball, MAX_DEPTH};
pub use segments::{
    classify_by_level, ClauseCheck, Segment, SegmentClassification, SegmentKind, ShapeClause,
    ShapeReport,
};
