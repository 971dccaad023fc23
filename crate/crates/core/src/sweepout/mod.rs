//! Equivariant sweepout families of doubled-Platonic surfaces.
//!
//! A scheme fixes a polyhedral rotation group and a class of isotropy rays
//! (the neck rays). Surfaces are built face by face on the spherical
//! tessellation whose faces are centred on the neck rays: two concentric
//! sheets, joined through a hole around every neck ray.

mod cone;
mod cutoff;
mod families;
mod frame;
mod retraction;
mod scheme;
mod shell;

use thiserror::Error;

use crate::gaussian::GaussError;
use crate::mesh::MeshError;
use crate::symmetry::SymmetryError;

pub use cutoff::{log_cutoff, CutoffProfile, RadiusMap};
pub use families::*;
pub use frame::{frame_surface, FrameShape};
pub use cone::{cone_segment, ConeSegment};
pub use retraction::{retraction_curves, retraction_distance};
pub use scheme::{Face, PlatonicScheme, SchemeName};
pub use shell::Resolution;

#[derive(Debug, Error)]
pub enum SweepoutError {
    #[error("unknown sweepout scheme {0:?} (expected t12-z3, o24-z4, o24-z3, i60-z5 or i60-z3)")]
    UnknownScheme(String),
    #[error("unknown sweepout family {0:?} (expected sphere, doubled or catenoid)")]
    UnknownFamily(String),
    #[error("invalid sweepout parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Gauss(#[from] GaussError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
}
