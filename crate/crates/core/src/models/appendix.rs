use std::sync::Arc;

use serde::Serialize;

use super::{
    generic_integers, Ambient, ExpectedMetadata, ModelsError, ParameterRecord, VarietyModel,
};
use crate::exactfield::Field;
use crate::polyring::{PolyRing, SkewMatrix, SparsePoly};
use crate::symmetry::{perm_model_coordinate_names, reid_coordinate_names};

/// Which version of the Reid-coordinate matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReidVariant {
    /// Transcribed as displayed.
    Printed,
    /// `z` at position `(3,6)` replaced by `−z`.
    Corrected,
}

/// The 7×7 skew matrix in `x_1..x_6, y_1..y_6, z` with first row
/// `x_1+y_1, x_3+y_3, x_2+y_2, x_6+y_6, x_4+y_4, x_5+y_5`.
pub fn reid_matrix<F: Field>(
    ring: &Arc<PolyRing<F>>,
    lambda: &[i64; 6],
    variant: ReidVariant,
) -> SkewMatrix<F> {
    let f = &ring.field;
    let v = |n: String| SparsePoly::var_named(ring, &n).expect("Reid coordinate");
    let x = |i: usize| v(format!("x{i}"));
    let y = |i: usize, s: i64| v(format!("y{i}")).scale(&f.from_i64(s * lambda[i - 1]));
    let z = |s: i64| v("z".into()).scale(&f.from_i64(s));
    let xy = |i: usize| x(i).add(&v(format!("y{i}")));
    let z36 = if variant == ReidVariant::Corrected {
        -1
    } else {
        1
    };
    let rows: Vec<Vec<SparsePoly<F>>> = vec![
        vec![xy(1), xy(3), xy(2), xy(6), xy(4), xy(5)],
        vec![x(4), y(3, 1), z(1), y(5, -1), x(6).neg()],
        vec![x(5), y(2, 1), z(z36), y(1, -1)],
        vec![x(1), y(6, 1), z(1)],
        vec![x(3), y(4, 1)],
        vec![x(2)],
    ];
    let mut m = SkewMatrix::zero(ring, 7);
    for (i, row) in rows.into_iter().enumerate() {
        for (k, e) in row.into_iter().enumerate() {
            m.set(i, i + 1 + k, e);
        }
    }
    m
}

/// `λ` constant on the orbits `{1,2,4}` and `{3,5,6}` of `i ↦ 2i mod 7`.
pub fn reid_orbit_lambda(seed: u64) -> [i64; 6] {
    let v = generic_integers(seed, 2);
    [v[0], v[0], v[1], v[0], v[1], v[1]]
}

/// Surface `V(Pf_4(M))` in the Reid coordinates.
pub fn build_appendix_a1<F: Field>(
    field: &F,
    lambda: &[i64; 6],
    variant: ReidVariant,
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    for (i, l) in lambda.iter().enumerate() {
        if field.is_zero(&field.from_i64(*l)) {
            return Err(ModelsError::ZeroParameter(format!("lambda{}", i + 1)));
        }
    }
    let ring = PolyRing::new(field, reid_coordinate_names());
    let m = reid_matrix(&ring, lambda, variant);
    let mut params = ParameterRecord::with_seed(seed);
    for (i, l) in lambda.iter().enumerate() {
        params.insert(format!("lambda{}", i + 1), l);
    }
    params.insert("variant", format!("{variant:?}").to_lowercase());
    Ok(VarietyModel {
        name: "appA1".into(),
        ambient: Ambient::Coordinates { dim: 12 },
        ring,
        linear: Vec::new(),
        nonlinear: m.sub_pfaffians(4)?,
        params,
        expected: ExpectedMetadata {
            dimension: 2,
            degree: Some(42),
            canonical_degree: Some(42),
            canonical_twist: Some(1),
        },
        group: Some("F21".into()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct A2Parameters {
    pub lambda: i64,
    pub mu: i64,
}

/// The column-permutation model: hyperplane `λΣx_i + μΣy_i` and the 4×4
/// Pfaffians of the displayed matrix in `x_1..x_7, y_1..y_7`.
pub fn build_appendix_a2<F: Field>(
    field: &F,
    p: A2Parameters,
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    for (n, v) in [("lambda", p.lambda), ("mu", p.mu)] {
        if field.is_zero(&field.from_i64(v)) {
            return Err(ModelsError::ZeroParameter(n.into()));
        }
    }
    let ring = PolyRing::new(field, perm_model_coordinate_names());
    let v = |n: String| SparsePoly::var_named(&ring, &n).expect("coordinate");
    let lx = |i: usize| v(format!("x{i}")).scale(&field.from_i64(p.lambda));
    let my = |i: usize| v(format!("y{i}")).scale(&field.from_i64(p.mu));
    let mx = |i: usize| v(format!("x{i}")).scale(&field.from_i64(p.mu));
    let both = |i: usize| lx(i).add(&my(i));
    let rows: Vec<Vec<SparsePoly<F>>> = vec![
        vec![both(6), lx(2), mx(5), my(1), lx(4), both(7)],
        vec![both(5), lx(1), my(4), my(7), lx(3)],
        vec![both(4), lx(7), my(3), my(6)],
        vec![both(3), lx(6), my(2)],
        vec![both(2), lx(5)],
        vec![both(1)],
    ];
    let mut m = SkewMatrix::zero(&ring, 7);
    for (i, row) in rows.into_iter().enumerate() {
        for (k, e) in row.into_iter().enumerate() {
            m.set(i, i + 1 + k, e);
        }
    }
    let h = (1..=7).fold(SparsePoly::zero(&ring), |acc, i| acc.add(&both(i)));
    let mut params = ParameterRecord::with_seed(seed);
    params.insert("lambda", p.lambda);
    params.insert("mu", p.mu);
    Ok(VarietyModel {
        name: "appA2".into(),
        ambient: Ambient::Coordinates { dim: 13 },
        ring,
        linear: vec![h],
        nonlinear: m.sub_pfaffians(4)?,
        params,
        expected: ExpectedMetadata {
            dimension: 2,
            degree: Some(42),
            canonical_degree: Some(42),
            canonical_twist: Some(1),
        },
        group: Some("D7_perm".into()),
    })
}

/// The corrected Reid-coordinate model with orbit-constant `λ` and the
/// column-permutation model, from one seed.
pub fn build_appendix_a_models<F: Field>(
    field: &F,
    seed: u64,
) -> Result<(VarietyModel<F>, VarietyModel<F>), ModelsError> {
    let a1 = build_appendix_a1(
        field,
        &reid_orbit_lambda(seed),
        ReidVariant::Corrected,
        Some(seed),
    )?;
    let v = generic_integers(seed ^ 0xa2, 2);
    let a2 = build_appendix_a2(
        field,
        A2Parameters {
            lambda: v[0],
            mu: v[1],
        },
        Some(seed),
    )?;
    Ok((a1, a2))
}
