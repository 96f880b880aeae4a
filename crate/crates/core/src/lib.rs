//! Exact verification toolkit for nodal quartic double solids.
//!
//! The crate reconstructs the explicit computations behind the classification
//! of nodal quartic double solids with large automorphism groups: node and
//! trope certification, pencils of quadrics, finite subgroups of PGL(4) and
//! re-derivation of the coefficient families.

pub mod exactfield;
pub mod linalg;
pub mod multipoly;
pub mod projgeom;
pub mod quadpencil;
pub mod matgroup;
pub mod families;
pub mod vcli;
