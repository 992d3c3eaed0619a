//! Borel–Weil–Bott on Grassmannians, Koszul computations on zero loci of
//! homogeneous bundles, Hodge numbers, deformation counts and the numerical
//! bookkeeping for free and involutive quotients.

mod bott;
mod hodge;
mod numerics;

use thiserror::Error;

use crate::exactfield::FieldError;
use crate::geometry::GeometryError;

pub use bott::{
    bott_cohomology, box_partitions, euler_characteristic, omega_decompose, weyl_character_euler,
    WeightedBundle,
};
pub use hodge::{
    chi_omega, hodge_linear_section, hodge_q1_model, hodge_zero_locus, restricted_cohomology,
    restricted_euler, staircase_omega, HodgeDiamond, NumericalInvariants, ZeroLocus,
};
pub use numerics::{
    deformation_number, expected_moduli, involution_quotient, normal_map_rank, quotient_invariants,
    surface_from_hilbert, DeformationReport, FixedDatum, InvolutionQuotient,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("bad weight: {0}")]
    BadWeight(String),
    #[error("{p} is out of range 0..={dim}")]
    BadRange { p: usize, dim: usize },
    #[error("ambiguous extension: {0}")]
    AmbiguousExtension(String),
    #[error("{what} = {value} is not divisible by {order}")]
    NotDivisible {
        what: String,
        value: i64,
        order: i64,
    },
    #[error("the action is not free")]
    NotFree,
    #[error("adjunction fails: K·C + C² + 2χ(O_C) = {defect}")]
    AdjunctionViolated { defect: i64 },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Field(#[from] FieldError),
}
