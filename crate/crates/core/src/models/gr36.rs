use std::collections::BTreeMap;

use super::{
    generic_integers, Ambient, ExpectedMetadata, ModelsError, ParameterRecord, VarietyModel,
};
use crate::exactfield::Field;
use crate::grassmann::GrassmannianSpec;
use crate::polyring::SparsePoly;
use crate::symmetry::gr36_eigenvalue_classes;

/// Coefficients `α_{i,j,k}` of the seven class forms, keyed by sorted triple.
pub type T36Alpha = BTreeMap<[usize; 3], i64>;

/// Image of a triple under `v_i ↦ v_{7−i}`.
pub fn involution_triple(t: &[usize; 3]) -> [usize; 3] {
    [7 - t[2], 7 - t[1], 7 - t[0]]
}

/// Seeded `α` with `α_t = α_{σ(t)}`: ten free values, one per involution orbit.
pub fn symmetric_alpha(seed: u64) -> T36Alpha {
    let mut reps: Vec<[usize; 3]> = Vec::new();
    for class in gr36_eigenvalue_classes().values() {
        for t in class {
            if !reps.contains(&involution_triple(t)) {
                reps.push(*t);
            }
        }
    }
    let vals = generic_integers(seed, reps.len());
    let mut alpha = T36Alpha::new();
    for (t, v) in reps.iter().zip(vals) {
        alpha.insert(*t, v);
        alpha.insert(involution_triple(t), v);
    }
    alpha
}

/// `T ⊂ Gr(3,6)`: one form `Σ_{i+j+k ≡ c} α_{i,j,k} x_{i,j,k}` per residue `c`.
pub fn build_t_gr36<F: Field>(
    field: &F,
    alpha: &T36Alpha,
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    let classes = gr36_eigenvalue_classes();
    for class in classes.values() {
        for t in class {
            let a = alpha
                .get(t)
                .ok_or_else(|| ModelsError::BadInput(format!("missing alpha for {t:?}")))?;
            let s = involution_triple(t);
            let b = alpha
                .get(&s)
                .ok_or_else(|| ModelsError::BadInput(format!("missing alpha for {s:?}")))?;
            if a != b {
                return Err(ModelsError::AsymmetricAlpha(format!(
                    "alpha{t:?} = {a} but alpha{s:?} = {b}"
                )));
            }
            if field.is_zero(&field.from_i64(*a)) {
                return Err(ModelsError::ZeroParameter(format!("alpha{t:?}")));
            }
        }
    }
    let spec = GrassmannianSpec::new(field, 3, 6)?;
    let linear = classes
        .values()
        .map(|class| {
            class.iter().fold(SparsePoly::zero(&spec.ring), |acc, t| {
                acc.add(&spec.var(t).scale(&field.from_i64(alpha[t])))
            })
        })
        .collect();
    let mut params = ParameterRecord::with_seed(seed);
    for (t, v) in alpha {
        params.insert(format!("alpha_{}_{}_{}", t[0], t[1], t[2]), v);
    }
    Ok(VarietyModel {
        name: "T36".into(),
        ambient: Ambient::Plucker {
            k: 3,
            n: 6,
            codim: 7,
        },
        ring: spec.ring.clone(),
        linear,
        nonlinear: spec.quadrics.clone(),
        params,
        expected: ExpectedMetadata {
            dimension: 2,
            degree: Some(42),
            canonical_degree: Some(42),
            canonical_twist: Some(1),
        },
        group: Some("D7_gr36".into()),
    })
}
