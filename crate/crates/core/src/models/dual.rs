use std::sync::Arc;

use serde::Serialize;

use super::{build_w_z, Ambient, ExpectedMetadata, ModelsError, ParameterRecord, VarietyModel};
use crate::exactfield::{ExactMatrix, Field};
use crate::multilinear::WedgeSpace;
use crate::polyring::{coefficient_matrix, PolyRing, SkewMatrix, SparsePoly};

/// Representative coordinates of the dual `P^6`, one per `τ_7` eigenvalue.
pub const DUAL_REPRESENTATIVES: [&str; 7] = [
    "x_1_2", "x_1_3", "x_1_4", "x_1_5", "x_1_6", "x_1_7", "x_2_7",
];

/// `H^∨ ⊂ ∧²V*` spanned by the seven invariant linear forms and its annihilator `H ⊂ ∧²V`.
#[derive(Debug, Clone)]
pub struct DualityDatum<F: Field> {
    /// One form per representative, scaled so the representative coefficient is 1.
    pub hvee: Vec<Vec<F::Elem>>,
    pub annihilator: Vec<Vec<F::Elem>>,
    pub representatives: Vec<String>,
}

impl<F: Field> DualityDatum<F> {
    /// `⟨h, w⟩ = 0` for every pair.
    pub fn pairing_vanishes(&self, field: &F) -> bool {
        self.hvee.iter().all(|h| {
            self.annihilator.iter().all(|w| {
                field.is_zero(&h.iter().zip(w).fold(field.zero(), |acc, (a, b)| {
                    field.add(&acc, &field.mul(a, b))
                }))
            })
        })
    }
}

/// Entrywise comparison of two skew matrices by the variables they involve.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixDiff {
    /// `(row, column)` 1-based, derived variables, printed variables.
    pub mismatches: Vec<((usize, usize), Vec<String>, Vec<String>)>,
    pub compared: usize,
}

#[derive(Debug, Clone)]
pub struct DualModel<F: Field> {
    pub datum: DualityDatum<F>,
    pub matrix: SkewMatrix<F>,
    /// `W^∨ ⊂ P^6`: the seven 6×6 Pfaffians.
    pub wdual: VarietyModel<F>,
    /// The slice `x_{2,7} = 0` in `P^5`.
    pub slice: VarietyModel<F>,
    pub slice_matrix: SkewMatrix<F>,
    /// Row order of the printed matrix in terms of `V_7` indices (1-based).
    pub printed_order: Vec<usize>,
    pub diff: MatrixDiff,
}

fn dual_ring<F: Field>(field: &F, names: &[&str]) -> Arc<PolyRing<F>> {
    PolyRing::new(field, names.iter().map(|s| s.to_string()).collect())
}

/// The dual matrix as printed, upper triangle by rows, with `λ_1..λ_6`.
pub fn printed_dual_matrix<F: Field>(ring: &Arc<PolyRing<F>>, lambda: &[i64; 6]) -> SkewMatrix<F> {
    let f = &ring.field;
    let v = |n: &str| SparsePoly::var_named(ring, n).expect("representative");
    let l = |i: usize, n: &str, s: i64| v(n).scale(&f.from_i64(s * lambda[i - 1]));
    let one = |n: &str, s: i64| v(n).scale(&f.from_i64(s));
    let rows: Vec<Vec<SparsePoly<F>>> = vec![
        vec![
            one("x_1_2", 1),
            one("x_1_4", 1),
            one("x_1_3", 1),
            one("x_1_7", 1),
            one("x_1_5", 1),
            one("x_1_6", 1),
        ],
        vec![
            one("x_1_5", 1),
            l(3, "x_1_4", 1),
            one("x_2_7", 1),
            l(5, "x_1_6", -1),
            one("x_1_7", -1),
        ],
        vec![
            one("x_1_7", 1),
            l(2, "x_1_4", 1),
            one("x_2_7", 1),
            l(1, "x_1_3", -1),
        ],
        vec![one("x_1_3", 1), l(6, "x_1_7", 1), one("x_2_7", 1)],
        vec![one("x_1_5", 1), l(4, "x_1_5", 1)],
        vec![one("x_1_3", 1)],
    ];
    let mut m = SkewMatrix::zero(ring, 7);
    for (i, row) in rows.into_iter().enumerate() {
        for (k, e) in row.into_iter().enumerate() {
            m.set(i, i + 1 + k, e);
        }
    }
    m
}

fn support_names<F: Field>(p: &SparsePoly<F>) -> Vec<String> {
    p.variables()
        .into_iter()
        .map(|i| p.ring().names[i].clone())
        .collect()
}

/// Builds `H^∨` from `W_Z` (six forms of `Z` plus `h_1`), its annihilator,
/// the dual Pfaffian threefold and the Campedelli slice.
pub fn build_dual<F: Field>(
    field: &F,
    c: &[i64],
    h1: &[i64; 3],
    seed: Option<u64>,
) -> Result<DualModel<F>, ModelsError> {
    let w = build_w_z(field, c, h1, seed)?;
    let names = &w.ring.names;
    let mut hvee = Vec::new();
    for rep in DUAL_REPRESENTATIVES {
        let r = names.iter().position(|n| n == rep).unwrap();
        let form = w
            .linear
            .iter()
            .find(|l| {
                let v = l.linear_coeffs().unwrap();
                !field.is_zero(&v[r])
                    && DUAL_REPRESENTATIVES
                        .iter()
                        .filter(|o| **o != rep)
                        .all(|o| field.is_zero(&v[names.iter().position(|n| n == o).unwrap()]))
            })
            .ok_or_else(|| {
                ModelsError::BadInput(format!("no invariant form with representative {rep}"))
            })?;
        let v = form.linear_coeffs().unwrap();
        let inv = field.inv(&v[r]).unwrap();
        hvee.push(v.iter().map(|x| field.mul(x, &inv)).collect::<Vec<_>>());
    }
    let pairing = ExactMatrix::from_rows(field, hvee.clone())?;
    let annihilator = pairing.kernel_basis();
    if annihilator.len() != 14 {
        return Err(ModelsError::AnnihilatorDimensionMismatch {
            expected: 14,
            found: annihilator.len(),
        });
    }
    let datum: DualityDatum<F> = DualityDatum {
        hvee,
        annihilator,
        representatives: DUAL_REPRESENTATIVES.iter().map(|s| s.to_string()).collect(),
    };

    // N(y) = Σ y_r h_r as a skew form on V_7.
    let ring = dual_ring(field, &DUAL_REPRESENTATIVES);
    let space = WedgeSpace::new(2, 7)?;
    let mut matrix = SkewMatrix::zero(&ring, 7);
    for i in 1..=7 {
        for j in i + 1..=7 {
            let pos = space.signed_position(&[i, j]).unwrap().1;
            let coeffs: Vec<F::Elem> = datum
                .hvee
                .iter()
                .map(|h: &Vec<F::Elem>| h[pos].clone())
                .collect();
            matrix.set(i - 1, j - 1, SparsePoly::linear(&ring, &coeffs));
        }
    }
    let cubics = matrix.sub_pfaffians(6)?;
    let mut params = ParameterRecord::with_seed(seed);
    params.values = w.params.values.clone();
    params.insert("representatives", DUAL_REPRESENTATIVES.join(","));
    let wdual = VarietyModel {
        name: "dual".into(),
        ambient: Ambient::Coordinates { dim: 6 },
        ring: ring.clone(),
        linear: Vec::new(),
        nonlinear: cubics,
        params: params.clone(),
        expected: ExpectedMetadata {
            dimension: 3,
            degree: Some(14),
            canonical_degree: Some(0),
            canonical_twist: Some(0),
        },
        group: Some("Z7_dual".into()),
    };

    let slice_ring = dual_ring(field, &DUAL_REPRESENTATIVES[..6]);
    let images: Vec<SparsePoly<F>> = (0..7)
        .map(|i| {
            if i < 6 {
                SparsePoly::var(&slice_ring, i)
            } else {
                SparsePoly::zero(&slice_ring)
            }
        })
        .collect();
    let slice_matrix = matrix.substitute(&slice_ring, &images);
    let slice = VarietyModel {
        name: "campedelli".into(),
        ambient: Ambient::Coordinates { dim: 5 },
        ring: slice_ring.clone(),
        linear: Vec::new(),
        nonlinear: slice_matrix.sub_pfaffians(6)?,
        params,
        expected: ExpectedMetadata {
            dimension: 2,
            degree: Some(14),
            canonical_degree: Some(14),
            canonical_twist: Some(1),
        },
        group: Some("Z7_dual".into()),
    };

    // Printed row order from its first row (x_{1,k} in column j).
    let printed = printed_dual_matrix(&ring, &[1; 6]);
    let mut printed_order = vec![1];
    for j in 1..7 {
        let s = support_names(&printed.get(0, j));
        let k: usize = s[0].rsplit('_').next().unwrap().parse().unwrap();
        printed_order.push(k);
    }
    let perm0: Vec<usize> = printed_order.iter().map(|k| k - 1).collect();
    let reordered = matrix.permuted(&perm0, &[1; 7]);
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for i in 0..7 {
        for j in i + 1..7 {
            compared += 1;
            let a = support_names(&reordered.get(i, j));
            let b = support_names(&printed.get(i, j));
            if a != b {
                mismatches.push(((i + 1, j + 1), a, b));
            }
        }
    }
    Ok(DualModel {
        datum,
        matrix,
        wdual,
        slice,
        slice_matrix,
        printed_order,
        diff: MatrixDiff {
            mismatches,
            compared,
        },
    })
}

/// Rank test: the span of `polys` is stable under the diagonal substitution
/// `x_r ↦ ζ^{weights[r]} x_r`.
pub fn cubic_span_invariant<F: Field>(
    field: &F,
    polys: &[SparsePoly<F>],
    weights: &[u64],
) -> Result<bool, ModelsError> {
    let z = field.root_of_unity(7)?;
    let ring = polys[0].ring().clone();
    let images: Vec<SparsePoly<F>> = weights
        .iter()
        .enumerate()
        .map(|(i, &w)| SparsePoly::var(&ring, i).scale(&field.pow(&z, w)))
        .collect();
    let moved: Vec<SparsePoly<F>> = polys.iter().map(|p| p.substitute(&ring, &images)).collect();
    let r0 = coefficient_matrix(polys).0.rank();
    let all: Vec<SparsePoly<F>> = polys.iter().chain(&moved).cloned().collect();
    Ok(coefficient_matrix(&all).0.rank() == r0)
}
