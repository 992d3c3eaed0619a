use serde::Serialize;

use super::GeometryError;
use crate::exactfield::{ExactMatrix, Field};
use crate::models::VarietyModel;
use crate::polyring::{coefficient_matrix, Monomial, SparsePoly};
use crate::symmetry::transform_poly;

/// Change of basis `A` with `f_i ∘ g = Σ_j A[i][j] f_j`, when the span of the
/// homogeneous polynomials `polys` is preserved by `g`.
pub fn ideal_invariance<F: Field>(
    polys: &[SparsePoly<F>],
    g: &ExactMatrix<F>,
) -> Result<Option<ExactMatrix<F>>, GeometryError> {
    let Some(first) = polys.first() else {
        return Err(GeometryError::EmptySystem);
    };
    let d = first.total_degree();
    if polys
        .iter()
        .any(|p| !p.is_homogeneous() || p.total_degree() != d)
    {
        return Err(GeometryError::MixedDegrees);
    }
    let f = first.field().clone();
    let moved: Vec<SparsePoly<F>> = polys
        .iter()
        .map(|p| transform_poly(p, g))
        .collect::<Result<_, _>>()?;
    let all: Vec<SparsePoly<F>> = polys.iter().chain(&moved).cloned().collect();
    let (m, _) = coefficient_matrix(&all);
    let k = polys.len();
    let own = m
        .select(
            &(0..k).collect::<Vec<_>>(),
            &(0..m.cols()).collect::<Vec<_>>(),
        )
        .transpose();
    let mut rows = Vec::with_capacity(k);
    for i in 0..k {
        let target = m.row(k + i).to_vec();
        match own.solve(&target)? {
            Some(a) => rows.push(a),
            None => return Ok(None),
        }
    }
    Ok(Some(ExactMatrix::from_rows(&f, rows)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvarianceReport {
    pub generator: String,
    /// `(degree, preserved)` for each graded piece checked.
    pub degrees: Vec<(u32, bool)>,
    pub invariant: bool,
}

fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    if d == 0 {
        return vec![Monomial::one()];
    }
    let mut out = Vec::new();
    for m in monomials_of_degree(n, d - 1) {
        let start = m.support().last().unwrap_or(0);
        for v in start..n {
            out.push(m.mul(&Monomial::var(v)));
        }
    }
    out
}

/// Invariance of the ideal of `model` under each generator, checked on the
/// linear forms and on the degree-`d` part spanned by the nonlinear
/// equations together with the multiples of the linear forms.
pub fn model_invariance<F: Field>(
    model: &VarietyModel<F>,
    generators: &[(String, ExactMatrix<F>)],
) -> Result<Vec<InvarianceReport>, GeometryError> {
    let mut pieces: Vec<(u32, Vec<SparsePoly<F>>)> = Vec::new();
    if !model.linear.is_empty() {
        pieces.push((1, model.linear.clone()));
    }
    if let Some(d) = model.nonlinear.first().and_then(|q| q.total_degree()) {
        let mut gens: Vec<SparsePoly<F>> = model.nonlinear.clone();
        if !model.linear.is_empty() {
            let f = model.field();
            for m in monomials_of_degree(model.nvars(), d - 1) {
                for l in &model.linear {
                    gens.push(l.mul_term(&m, &f.one()));
                }
            }
        }
        pieces.push((d, crate::grassmann::independent_subset(&gens)));
    }
    let mut out = Vec::new();
    for (name, g) in generators {
        let mut degrees = Vec::new();
        for (d, polys) in &pieces {
            degrees.push((*d, ideal_invariance(polys, g)?.is_some()));
        }
        let invariant = degrees.iter().all(|x| x.1);
        out.push(InvarianceReport {
            generator: name.clone(),
            degrees,
            invariant,
        });
    }
    Ok(out)
}
