//! Exact sheaf-cohomology computations for geometric quantization on
//! product model spaces.
//!
//! The library computes the Čech cohomology of leafwise-flat sections over
//! cylinder bands and plane discs with structured covers, reassembles global
//! answers by Mayer-Vietoris, delivers higher-dimensional band cohomology
//! through direct-image dimension tables on a bigraded page engine, and, for
//! toric manifolds given as moment polytopes, compares the real-polarization
//! quantization (interior lattice points) with the Kähler one (all lattice
//! points).
//!
//! Everything dimension-valued is exact: coordinates are rationals, phases
//! are roots of unity handled in cyclotomic fields, and coboundary ranks are
//! computed both at the parameter and generically over Q(z). Floats appear
//! only in numeric cross-checks.
//!
//! Start with the runnable examples (`cargo run --example band_cohomology`)
//! or the `bsq` binary (`bsq cech-band --json ...`).

pub mod assembly;
pub mod cech;
pub mod cli;
pub mod geometry;
pub mod jsonio;
pub mod linalg;
pub mod phase;
pub mod rational;
pub mod spectral;
pub mod toric;
