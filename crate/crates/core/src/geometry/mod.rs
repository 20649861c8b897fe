//! Star-shaped boundary curves and the point layouts built on them.

mod curve;
mod points;
mod quadrature;

pub use curve::{flower_curve, BoundaryCurve};
pub use points::{
    collocation_points, collocation_points_with, interior_grid, source_points, PointRole, PointSet,
    Spacing,
};
