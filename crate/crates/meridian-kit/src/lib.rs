//! Hyperbolic densities, shortest separating closed geodesics and meridians
//! for finitely connected plane domains.
//!
//! A domain is described by the connected components of its complement
//! (disks, points, simple polygons, and one unbounded cap). The crate solves
//! the Liouville equation for the curvature -1 density on a grid, shortens
//! closed polygonal curves within their homotopy class, and enumerates the
//! meridians of the domain together with the structural checks (simplicity,
//! uniqueness evidence, nesting, class counts).
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod cache;
pub mod curve;
pub mod domain;
pub mod experiments;
pub mod geom;
pub mod meridians;
pub mod metric;
pub mod net;
pub mod report;
pub mod shorten;
pub mod svg;
pub mod topology;

pub use curve::PolyCurve;
pub use domain::{
    gap_distance, make_domain, make_separation, Comp, ComplementComponent, Domain, DomainConfig,
    DomainError, Separation,
};
pub use geom::{pt, Pt};
pub use topology::{
    homology_class, self_intersections, separates, separates_by_parity, separates_simply,
    winding_number, HomologyClass, IntersectionReport,
};
