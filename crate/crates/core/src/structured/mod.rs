//! Cone expressions over `S^n` built from PSD, halfspace and ray atoms.

mod examples;
mod expr;
mod forcing;
mod form;
mod inventory;
mod psdface;

pub use examples::{example1, example2, Example1, Example2};
pub use expr::{for_each_grid_matrix, rational_grid_values, Closedness, ConeExpr, Node, RiOverlap};
pub use forcing::{additive_face_test, force, restrict_coords, Forced, ForcingStep};
pub use form::{Membership, OutReason, SpCone, SumForm};
pub use inventory::{
    lattice_dual_faces, member_verdict, smallest_exposed_face, DualFace, ExposedHull, FaceSet, InvFace,
    StructuredCone, Trivial,
};
pub use psdface::PsdFace;
