//! Steklov spectra of compact hyperbolic surfaces with geodesic boundary.
//!
//! The crate is organised bottom-up:
//!
//! * [`hypgeom`]: collars, right-angled hexagons, pairs of pants and the
//!   thick-thin decomposition.
//! * [`topology`]: signatures, pants graphs and separating multicurves.
//! * [`mesh`]: conformal triangulations of pants-glued surfaces and of the
//!   standalone collar models.
//! * [`steklov`]: P1 assembly, the Dirichlet-to-Neumann eigensolver and the
//!   separable collar spectra.
//! * [`bounds`]: lower and upper eigenvalue bounds and eigenfunction
//!   diagnostics.

pub mod bounds;
pub mod error;
pub mod hypgeom;
pub mod mesh;
pub mod steklov;
pub mod topology;

pub use bounds::{BoundConstants, BoundReport};
pub use error::{Error, Result};
pub use hypgeom::{
    epsilon_circ, gudermannian, tube_width, Collar, CollarKind, Hexagon, Pants, ThickThin,
};
pub use mesh::{MeshOptions, SurfaceMesh};
pub use steklov::{solve_steklov, BoundaryCondition, BoundaryConditionMap, SpectrumResult};
pub use topology::{PantsGraph, Signature};
