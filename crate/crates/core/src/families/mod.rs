//! The catalog of explicit families: the `Sys(t; ...)` normal form and its
//! transformation maps, singularity-constraint solving, the Cremona
//! involution, diagonal-weight monomials and the named catalog entries.

mod catalog;
mod constraints;
mod incidence;
mod sys;

pub use catalog::{
    build_family, catalog_keys, named_fingerprint, Claim, ClaimKind, ClaimOutcome, FamilySpec, Object, Payload,
    PrintedFamily, Source, Verdict, NAMED_GROUPS,
};
pub use constraints::{
    cremona_quartic, solve_singularity_constraints, twisted_cubic_solution, vanish_on_twisted_cubic,
    weight_monomials, SolutionSpace,
};
pub use incidence::{derive_incidence_pencil, pencil_ratio, swap_symmetric_members, IncidenceData};
pub use sys::{apply_system_map, recognize_sys, sys_build, system_map, SysParams, SystemMap, SYSTEM_MAP_LABELS};

use crate::exactfield::FieldError;
use crate::matgroup::GroupError;
use crate::multipoly::FormError;
use crate::projgeom::GeomError;
use crate::quadpencil::PencilError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("t must avoid 0 and 1 (got {0})")]
    DegenerateT(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("constraint violated: {0}")]
    ConstraintViolated(String),
    #[error("degree in {0} exceeds 2")]
    DegreeTooHighInVariable(String),
    #[error("unknown system map '{0}'")]
    UnknownMap(String),
    #[error("derivation failed: {0}")]
    Derivation(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Pencil(#[from] PencilError),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Group(#[from] GroupError),
}
