use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GeometryError;
use crate::exactfield::{ExactMatrix, Field};
use crate::models::{Ambient, VarietyModel};
use crate::multilinear::WedgeSpace;

/// Skew matrices `Ω` of the linear forms of a linear section of `Gr(2,n)`,
/// with `ℓ(a∧b) = aᵀ Ω b`.
pub fn skew_forms<F: Field>(model: &VarietyModel<F>) -> Result<Vec<ExactMatrix<F>>, GeometryError> {
    let Ambient::Plucker { k: 2, n, .. } = model.ambient else {
        return Err(GeometryError::NotLinearSection(model.name.clone()));
    };
    let f = model.field();
    let space = WedgeSpace::new(2, n).map_err(crate::grassmann::GrassmannError::from)?;
    model
        .linear
        .iter()
        .map(|l| {
            let c = l
                .linear_coeffs()
                .ok_or_else(|| GeometryError::NotLinearSection("nonlinear form".into()))?;
            let mut m = ExactMatrix::zeros(f, n, n);
            for (pos, w) in space.basis.iter().enumerate() {
                let (i, j) = (w.0[0] - 1, w.0[1] - 1);
                m.set(i, j, c[pos].clone());
                m.set(j, i, f.neg(&c[pos]));
            }
            Ok(m)
        })
        .collect()
}

/// Projective dimension of `H(w) = {b : Ω_k(w, b) = 0 for all k}`.
pub fn h_dimension<F: Field>(
    field: &F,
    forms: &[ExactMatrix<F>],
    w: &[F::Elem],
) -> Result<i64, GeometryError> {
    let Some(first) = forms.first() else {
        return Err(GeometryError::EmptySystem);
    };
    let n = first.rows();
    let mut rows = Vec::with_capacity(forms.len());
    for om in forms {
        rows.push(om.transpose().mul_vec(w)?);
    }
    let m = ExactMatrix::from_rows(field, rows)?;
    Ok(n as i64 - m.rank() as i64 - 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Probe {
    pub label: String,
    pub h: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegularityReport {
    pub forms: usize,
    /// Value at random vectors.
    pub generic: i64,
    pub random_probes: usize,
    /// Random vectors whose value differs from `generic`.
    pub random_jumps: usize,
    pub probes: Vec<Probe>,
}

impl RegularityReport {
    pub fn probe(&self, label: &str) -> Option<i64> {
        self.probes.iter().find(|p| p.label == label).map(|p| p.h)
    }
}

/// `H(w)` at `random` seeded vectors and at the labelled vectors.
pub fn sigma_regularity<F: Field>(
    field: &F,
    forms: &[ExactMatrix<F>],
    random: usize,
    seed: u64,
    labelled: &[(String, Vec<F::Elem>)],
) -> Result<RegularityReport, GeometryError> {
    let Some(first) = forms.first() else {
        return Err(GeometryError::EmptySystem);
    };
    let n = first.rows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(random);
    for _ in 0..random {
        let w: Vec<F::Elem> = (0..n).map(|_| field.random(&mut rng)).collect();
        if w.iter().all(|x| field.is_zero(x)) {
            continue;
        }
        values.push(h_dimension(field, forms, &w)?);
    }
    let generic = *values.iter().min().unwrap_or(&-1);
    let random_jumps = values.iter().filter(|&&h| h != generic).count();
    let probes = labelled
        .iter()
        .map(|(label, w)| {
            Ok(Probe {
                label: label.clone(),
                h: h_dimension(field, forms, w)?,
            })
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;
    Ok(RegularityReport {
        forms: forms.len(),
        generic,
        random_probes: values.len(),
        random_jumps,
        probes,
    })
}
