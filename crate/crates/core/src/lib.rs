//! Indicator function of planar domains bounded by closed NURBS curves.
//!
//! The boundary is cut into rational polynomial pieces, each piece into
//! boxes on which both coordinates are monotone. Points are then classified
//! by counting ray crossings with those boxes, falling back to a second ray
//! and finally to the winding number when a ray hits a critical case.

pub mod boxes;
pub mod classify;
pub mod domains;
pub mod error;
pub mod geom;
pub mod halton;
pub mod harness;
pub mod io;
pub mod nurbs;
pub mod oracle;
pub mod poly;
pub mod roots;
pub mod winding;

pub use boxes::{build_boxes, Geometry, MonotoneBox};
pub use classify::{classify_batch, Classification, Classifier, ClassifyOptions, Diagnostics, Label};
pub use error::{Error, Result};
pub use geom::{Point2, Rect};
pub use nurbs::{BoundaryCurve, NurbsSide, Orientation};
