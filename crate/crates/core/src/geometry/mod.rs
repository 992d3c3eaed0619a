//! Geometry of the models: regularity of the linear system, smoothness by
//! chart Jacobians, plane censuses over `F_p`, fixed loci of group elements
//! and invariance of ideals.

mod census;
mod fixed;
mod invariance;
mod regularity;

use thiserror::Error;

use crate::exactfield::FieldError;
use crate::grassmann::GrassmannError;
use crate::models::ModelsError;
use crate::polyring::PolyError;
use crate::symmetry::SymmetryError;

pub use census::{
    classify_singularity, plane_census, singular_planes, smooth_at, PlaneCensus, SingularityReport,
    SmoothnessCertificate, Verdict,
};
pub use fixed::{
    certify_free_action, eigenspaces, fixed_locus, fixed_locus_involution, restrict_to_subspace,
    CurveSummary, EigenComponent, FixedLocusSummary, FreeActionCertificate, LocusKind,
    PointSummary, RestrictedSystem, CENSUS_LIMIT,
};
pub use invariance::{ideal_invariance, model_invariance, InvarianceReport};
pub use regularity::{h_dimension, sigma_regularity, skew_forms, Probe, RegularityReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("the linear system is empty")]
    EmptySystem,
    #[error("point does not lie on the model")]
    PointNotOnModel,
    #[error("no affine chart contains the point")]
    NoChartContains,
    #[error("F_{p} has no primitive {order}-th root of unity")]
    FieldLacksRoot { order: u64, p: u64 },
    #[error("element is not an involution")]
    NotInvolution,
    #[error("polynomials of different degrees")]
    MixedDegrees,
    #[error("model is not a linear section of Gr(2,n): {0}")]
    NotLinearSection(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Models(#[from] ModelsError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
