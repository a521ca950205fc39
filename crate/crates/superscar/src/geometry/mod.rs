//! Rational polygons, their dihedral groups, and the unfolding into
//! translation surfaces with explicit charts, gluings, and cone points.

mod angle;
mod dihedral;
mod flow;
mod polygon;
mod surface;

pub use angle::RationalAngle;
pub use dihedral::{dihedral_group, DihedralGroup, GroupElement};
pub use flow::{develop, transport, FlowError, RayTracer, TraceEvent};
pub use polygon::{build_polygon, PolygonError, RationalPolygon};
pub use surface::{
    unfold, Chart, ConePoint, Gluing, SurfacePoint, TranslationSurface, UnfoldError,
};
