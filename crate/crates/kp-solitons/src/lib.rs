//! KP line-solitons from points of the totally non-negative Grassmannian.
//!
//! The library is organised around one pipeline and its inverse:
//!
//! * [`grassmann`] — points of Gr(k,n), exact Plücker coordinates, positivity
//!   classification, and the spectral parameters κ.
//! * [`positroid`] / [`lediagram`] — Grassmann necklaces, derangements,
//!   Le-diagrams, and sampling points from a positroid cell.
//! * [`tropical`] / [`tau`] — the τ-function, the wave profile u, and the
//!   piecewise-linear approximation whose non-smooth locus is the contour plot.
//! * [`soliton`] / [`asymptotics`] — labeled soliton graphs extracted from
//!   contour plots, and the combinatorial predictions they must match.
//! * [`plabic`] / [`le_plabic`] — generalized plabic graphs, trips the labeling
//!   rules, and the pipe-dream construction of the t≪0 graph.
//! * [`triangulation`] — the Gr(2,n) picture: polygon triangulations, flips,
//!   and the associated plabic graphs.
//! * [`inverse`] — reconstructing the Grassmannian point from a contour plot.
//!
//! Combinatorial predicates run on exact rational arithmetic lifted from the
//! input floats; contour geometry runs on f64.

pub mod asymptotics;
pub mod geometry;
pub mod grassmann;
pub mod inverse;
pub mod io;
pub mod le_plabic;
pub mod lediagram;
pub mod numeric;
pub mod plabic;
pub mod positroid;
pub mod soliton;
pub mod subset;
pub mod svg;
pub mod tau;
pub mod triangulation;
pub mod tropical;
pub mod verify;

pub use grassmann::{GrassmannPoint, KappaParams, Positivity, PositroidMatroid};
pub use lediagram::{LeDiagram, PositroidData};
pub use positroid::{Derangement, GrassmannNecklace};
pub use subset::Subset;
