//! Builders for the invariant varieties: the fourfold `Z` and its sections
//! `W_Z`, `S_Z`, the Pfaffian format of `S_Z`, the `Q(1)` model `Y`, the
//! `Gr(3,6)` surface `T`, the Reid-coordinate families and the dual
//! Pfaffian threefold with its Campedelli slice.

mod appendix;
mod dual;
mod gr36;
mod z;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{Field, FieldError};
use crate::grassmann::GrassmannError;
use crate::multilinear::MultilinearError;
use crate::polyring::{PolyError, PolyRing, SparsePoly};
use crate::symmetry::SymmetryError;

pub use appendix::{
    build_appendix_a1, build_appendix_a2, build_appendix_a_models, reid_matrix, reid_orbit_lambda,
    A2Parameters, ReidVariant,
};
pub use dual::{
    build_dual, cubic_span_invariant, printed_dual_matrix, DualModel, DualityDatum, MatrixDiff,
    DUAL_REPRESENTATIVES,
};
pub use gr36::{build_t_gr36, involution_triple, symmetric_alpha, T36Alpha};
pub use z::{
    build_s_format, build_s_format_from_hyperplanes, build_s_z, build_w_z, build_y_quadrics,
    build_z, s_format_action, s_format_matrix, s_format_pipeline_quadrics, solve_epsilons,
    transfer_y_to_z, y_third_row, z_equation_templates, z_parameters_from_section, z_structure,
    ZEquation, S_FORMAT_COORDINATES, Z_PARAMETERS,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelsError {
    #[error("parameter {0} vanishes")]
    ZeroParameter(String),
    #[error("the two invariant hyperplanes do not determine x_2_7 and x_3_6")]
    DegenerateHyperplanes,
    #[error("section is not in the kernel of the contraction")]
    NotInKernel,
    #[error("alpha is not symmetric: {0}")]
    AsymmetricAlpha(String),
    #[error("annihilator has dimension {found}, expected {expected}")]
    AnnihilatorDimensionMismatch { expected: usize, found: usize },
    #[error("{0}")]
    BadInput(String),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Multilinear(#[from] MultilinearError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ambient {
    /// Linear section of codimension `codim` of `Gr(k,n)` in its Plücker space.
    Plucker { k: usize, n: usize, codim: usize },
    /// Explicit projective coordinates.
    Coordinates { dim: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpectedMetadata {
    pub dimension: i64,
    pub degree: Option<i64>,
    /// `K²` for surfaces, `K^dim` in general, when known.
    pub canonical_degree: Option<i64>,
    /// `t` with `ω = O(t)`.
    pub canonical_twist: Option<i64>,
}

/// Named parameter values, as the integers or field elements they were built from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Default)]
pub struct ParameterRecord {
    pub seed: Option<u64>,
    pub values: BTreeMap<String, String>,
}

impl ParameterRecord {
    pub fn with_seed(seed: Option<u64>) -> Self {
        ParameterRecord {
            seed,
            values: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, value: impl ToString) {
        self.values.insert(name.into(), value.to_string());
    }
}

#[derive(Debug, Clone)]
pub struct VarietyModel<F: Field> {
    pub name: String,
    pub ambient: Ambient,
    pub ring: Arc<PolyRing<F>>,
    pub linear: Vec<SparsePoly<F>>,
    /// Plücker quadrics first for Grassmannian models.
    pub nonlinear: Vec<SparsePoly<F>>,
    pub params: ParameterRecord,
    pub expected: ExpectedMetadata,
    /// Name of the group the model is built to be invariant under.
    pub group: Option<String>,
}

impl<F: Field> VarietyModel<F> {
    pub fn equations(&self) -> Vec<SparsePoly<F>> {
        self.linear.iter().chain(&self.nonlinear).cloned().collect()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    /// Whether every equation vanishes at `point`.
    pub fn contains(&self, point: &[F::Elem]) -> Result<bool, PolyError> {
        for e in self.linear.iter().chain(&self.nonlinear) {
            if !self.field().is_zero(&e.eval(point)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Codimension of the model in its ambient projective space.
    pub fn expected_codim(&self) -> usize {
        (self.nvars() as i64 - 1 - self.expected.dimension) as usize
    }

    pub fn export(&self) -> ModelExport {
        ModelExport {
            name: self.name.clone(),
            field: self.field().spec().to_string(),
            ambient: self.ambient.clone(),
            coordinates: self.ring.names.clone(),
            linear: self
                .linear
                .iter()
                .map(|p| p.to_canonical_string())
                .collect(),
            nonlinear: self
                .nonlinear
                .iter()
                .map(|p| p.to_canonical_string())
                .collect(),
            parameters: self.params.clone(),
            expected: self.expected.clone(),
            group: self.group.clone(),
        }
    }
}

/// Serializable bundle of a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelExport {
    pub name: String,
    pub field: String,
    pub ambient: Ambient,
    pub coordinates: Vec<String>,
    pub linear: Vec<String>,
    pub nonlinear: Vec<String>,
    pub parameters: ParameterRecord,
    pub expected: ExpectedMetadata,
    pub group: Option<String>,
}

/// `count` distinct nonzero integers in `[-20, 20]`, reproducible from `seed`.
pub fn generic_integers(seed: u64, count: usize) -> Vec<i64> {
    assert!(count <= 40, "only 40 admissible values");
    let mut pool: Vec<i64> = (-20..=20).filter(|&x| x != 0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(count);
    pool
}

/// Integers that stay nonzero and pairwise distinct modulo every prime in `primes`.
pub fn generic_integers_for(seed: u64, count: usize, primes: &[u64]) -> Vec<i64> {
    for attempt in 0..1000u64 {
        let v = generic_integers(seed.wrapping_add(attempt.wrapping_mul(0x9e37_79b9)), count);
        let ok = primes.iter().all(|&p| {
            let mut r: Vec<i64> = v.iter().map(|x| x.rem_euclid(p as i64)).collect();
            let nonzero = r.iter().all(|&x| x != 0);
            r.sort_unstable();
            r.dedup();
            nonzero && r.len() == v.len()
        });
        if ok {
            return v;
        }
    }
    generic_integers(seed, count)
}

fn check_nonzero(names: &[&str], values: &[i64]) -> Result<(), ModelsError> {
    for (n, v) in names.iter().zip(values) {
        if *v == 0 {
            return Err(ModelsError::ZeroParameter(n.to_string()));
        }
    }
    Ok(())
}

fn check_nonzero_in<F: Field>(f: &F, names: &[&str], values: &[i64]) -> Result<(), ModelsError> {
    for (n, v) in names.iter().zip(values) {
        if f.is_zero(&f.from_i64(*v)) {
            return Err(ModelsError::ZeroParameter(n.to_string()));
        }
    }
    Ok(())
}

/// TeX form `x_{i,j}` of a label `x_i_j`.
pub fn tex_name(label: &str) -> String {
    let mut parts = label.split('_');
    let head = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    if rest.is_empty() {
        head.to_string()
    } else {
        format!("{head}_{{{}}}", rest.join(","))
    }
}
