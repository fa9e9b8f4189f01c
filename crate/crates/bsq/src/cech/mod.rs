//! Structured covers of the model pieces, their parameter-dependent
//! coboundary matrices, and cohomology by pointwise rank analysis.

pub mod complex;
pub mod cover;
pub mod report;

pub use complex::{
    coboundary_solve, pointwise_complex, pointwise_h, CechError, Mono, PointwiseComplex,
    SolveOutcome,
};
pub use cover::{
    build_brick_wall, build_ek_cover, build_wall_over_interval, cover_from_layer_specs,
    single_layer_cover,
    BrickWallCover, CircleCover, CoverError, Element, IntersectionTable, Layer, PairData,
    PlaneCover, StructuredCover, TripleData,
};
pub use report::{
    annulus_cohomology, band_cohomology, disc_cohomology, hash_description, CohomologyReport,
    SampleOpts, SupportPoint,
};
