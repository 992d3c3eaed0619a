use std::sync::{Arc, OnceLock};

use super::{
    check_nonzero, check_nonzero_in, tex_name, Ambient, ExpectedMetadata, ModelsError,
    ParameterRecord, VarietyModel,
};
use crate::exactfield::{ExactMatrix, Field, PrimeField};
use crate::grassmann::{plucker_ring, GrassmannianSpec};
use crate::multilinear::{contraction_matrix, MultilinearError, QuotientBundleSection};
use crate::polyring::{PolyRing, SkewMatrix, SparsePoly};
use crate::symmetry::{invariant_q1_family, make_group, Carrier, Generator, GroupAction};

/// Parameters of `Z` in order of first appearance in its equations. They are
/// also the `μ_1..μ_6` of the Pfaffian format.
pub const Z_PARAMETERS: [&str; 6] = ["c_2_6", "c_3_5", "c_3_6", "c_4_5", "c_1_2", "c_4_6"];

/// Coordinates of the Pfaffian format: `x_{i,j}`, `2 ≤ i < j ≤ 7`, without `x_{2,7}`, `x_{3,6}`.
pub const S_FORMAT_COORDINATES: [&str; 13] = [
    "x_2_3", "x_2_4", "x_2_5", "x_2_6", "x_3_4", "x_3_5", "x_3_7", "x_4_5", "x_4_6", "x_4_7",
    "x_5_6", "x_5_7", "x_6_7",
];

/// One linear equation `x_lead − Σ c x` of `Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZEquation {
    /// `m` of the section component `λ_m` it comes from.
    pub m: usize,
    pub lead: (usize, usize),
    /// (index into [`Z_PARAMETERS`], coordinate of `Gr(2,7)`), sorted by coordinate.
    pub terms: Vec<(usize, (usize, usize))>,
}

impl ZEquation {
    /// `τ_7` weight `i + j − 2 mod 7` of the leading coordinate.
    pub fn weight(&self) -> usize {
        (self.lead.0 + self.lead.1 - 2) % 7
    }
}

/// Equations of `Z` read off the invariant `Q(1)` family through
/// `x_{1,8−m} = λ_m(p)` and `x_{8−k,8−j} = p_{j,k}`.
pub fn z_structure() -> &'static [ZEquation] {
    static CELL: OnceLock<Vec<ZEquation>> = OnceLock::new();
    CELL.get_or_init(|| {
        // The slot pattern does not depend on the field; F_29 has the needed root of unity.
        let fam = invariant_q1_family(&PrimeField::new(29).expect("prime"))
            .expect("invariant family over F_29");
        (1..=6)
            .map(|m| {
                let mut terms: Vec<(usize, (usize, usize))> = fam
                    .slots
                    .iter()
                    .filter(|s| s.i == m)
                    .map(|s| {
                        let name = &fam.parameters[s.parameter];
                        let idx = Z_PARAMETERS
                            .iter()
                            .position(|p| p == name)
                            .expect("known parameter name");
                        (idx, (8 - s.jk.1, 8 - s.jk.0))
                    })
                    .collect();
                terms.sort_by_key(|t| t.1);
                ZEquation {
                    m,
                    lead: (1, 8 - m),
                    terms,
                }
            })
            .collect()
    })
}

/// Symbolic TeX rendering of the equations, e.g. `x_{1,7}-c_{2,6}x_{2,6}-c_{3,5}x_{3,5}`.
pub fn z_equation_templates() -> Vec<String> {
    z_structure()
        .iter()
        .map(|e| {
            let mut s = format!("x_{{{},{}}}", e.lead.0, e.lead.1);
            for &(p, (i, j)) in &e.terms {
                s.push_str(&format!("-{}x_{{{i},{j}}}", tex_name(Z_PARAMETERS[p])));
            }
            s
        })
        .collect()
}

fn z_linear_forms<F: Field>(spec: &GrassmannianSpec<F>, c: &[i64]) -> Vec<SparsePoly<F>> {
    let f = spec.field();
    z_structure()
        .iter()
        .map(|e| {
            let mut p = spec.var(&[e.lead.0, e.lead.1]);
            for &(k, (i, j)) in &e.terms {
                p = p.sub(&spec.var(&[i, j]).scale(&f.from_i64(c[k])));
            }
            p
        })
        .collect()
}

fn hyperplane<F: Field>(spec: &GrassmannianSpec<F>, h: &[i64; 3]) -> SparsePoly<F> {
    let f = spec.field();
    [[2, 7], [3, 6], [4, 5]]
        .iter()
        .zip(h)
        .fold(SparsePoly::zero(&spec.ring), |acc, (idx, &a)| {
            acc.add(&spec.var(idx).scale(&f.from_i64(a)))
        })
}

fn z_params(c: &[i64], seed: Option<u64>) -> ParameterRecord {
    let mut rec = ParameterRecord::with_seed(seed);
    for (n, v) in Z_PARAMETERS.iter().zip(c) {
        rec.insert(*n, v);
    }
    rec
}

fn check_c<F: Field>(field: &F, c: &[i64]) -> Result<(), ModelsError> {
    if c.len() != 6 {
        return Err(ModelsError::BadInput(format!(
            "{} parameters for Z, expected 6",
            c.len()
        )));
    }
    check_nonzero(&Z_PARAMETERS, c)?;
    check_nonzero_in(field, &Z_PARAMETERS, c)
}

/// The invariant fourfold `Z ⊂ Gr(2,7)`.
pub fn build_z<F: Field>(
    field: &F,
    c: &[i64],
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    check_c(field, c)?;
    let spec = GrassmannianSpec::new(field, 2, 7)?;
    Ok(VarietyModel {
        name: "Z".into(),
        ambient: Ambient::Plucker {
            k: 2,
            n: 7,
            codim: 6,
        },
        ring: spec.ring.clone(),
        linear: z_linear_forms(&spec, c),
        nonlinear: spec.quadrics.clone(),
        params: z_params(c, seed),
        expected: ExpectedMetadata {
            dimension: 4,
            degree: Some(42),
            canonical_degree: Some(42),
            canonical_twist: Some(-1),
        },
        group: Some("D7_rho7".into()),
    })
}

/// `W_Z = Z ∩ {h_1 = 0}` with `h_1` in `x_{2,7}, x_{3,6}, x_{4,5}`.
pub fn build_w_z<F: Field>(
    field: &F,
    c: &[i64],
    h1: &[i64; 3],
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    let mut m = build_z(field, c, seed)?;
    let spec = GrassmannianSpec::new(field, 2, 7)?;
    m.linear.push(hyperplane(&spec, h1));
    m.name = "W_Z".into();
    m.ambient = Ambient::Plucker {
        k: 2,
        n: 7,
        codim: 7,
    };
    m.params.insert("h1", format!("{h1:?}"));
    m.expected = ExpectedMetadata {
        dimension: 3,
        degree: Some(42),
        canonical_degree: Some(0),
        canonical_twist: Some(0),
    };
    Ok(m)
}

/// `S_Z = W_Z ∩ {h_2 = 0}`.
pub fn build_s_z<F: Field>(
    field: &F,
    c: &[i64],
    h1: &[i64; 3],
    h2: &[i64; 3],
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    solve_epsilons(field, h1, h2)?;
    let mut m = build_w_z(field, c, h1, seed)?;
    let spec = GrassmannianSpec::new(field, 2, 7)?;
    m.linear.push(hyperplane(&spec, h2));
    m.name = "S_Z".into();
    m.ambient = Ambient::Plucker {
        k: 2,
        n: 7,
        codim: 8,
    };
    m.params.insert("h2", format!("{h2:?}"));
    m.expected = ExpectedMetadata {
        dimension: 2,
        degree: Some(42),
        canonical_degree: Some(42),
        canonical_twist: Some(1),
    };
    Ok(m)
}

/// `(ε_1, ε_2)` with `x_{2,7} = ε_1 x_{4,5}` and `x_{3,6} = ε_2 x_{4,5}` on both hyperplanes.
pub fn solve_epsilons<F: Field>(
    field: &F,
    h1: &[i64; 3],
    h2: &[i64; 3],
) -> Result<(F::Elem, F::Elem), ModelsError> {
    let e = |x: i64| field.from_i64(x);
    let det = field.sub(
        &field.mul(&e(h1[0]), &e(h2[1])),
        &field.mul(&e(h2[0]), &e(h1[1])),
    );
    let inv = field.inv(&det).ok_or(ModelsError::DegenerateHyperplanes)?;
    // a x + b y = -c for both rows.
    let e1 = field.sub(
        &field.mul(&e(h2[2]), &e(h1[1])),
        &field.mul(&e(h1[2]), &e(h2[1])),
    );
    let e2 = field.sub(
        &field.mul(&e(h2[0]), &e(h1[2])),
        &field.mul(&e(h1[0]), &e(h2[2])),
    );
    Ok((field.mul(&e1, &inv), field.mul(&e2, &inv)))
}

fn s_format_ring<F: Field>(field: &F) -> Arc<PolyRing<F>> {
    PolyRing::new(
        field,
        S_FORMAT_COORDINATES.iter().map(|s| s.to_string()).collect(),
    )
}

/// The skew matrix of the Pfaffian format with first row
/// `(μ1x37+μ2x46, μ3x47+μ4x56, μ5x23+μ6x57, μ6x24+μ5x67, μ3x25+μ4x34, μ1x26+μ2x35)`.
pub fn s_format_matrix<F: Field>(
    ring: &Arc<PolyRing<F>>,
    mu: &[i64],
    eps: &(F::Elem, F::Elem),
) -> SkewMatrix<F> {
    let f = &ring.field;
    let x = |i: usize, j: usize| -> SparsePoly<F> {
        match (i, j) {
            (2, 7) => SparsePoly::var_named(ring, "x_4_5").unwrap().scale(&eps.0),
            (3, 6) => SparsePoly::var_named(ring, "x_4_5").unwrap().scale(&eps.1),
            _ => SparsePoly::var_named(ring, &format!("x_{i}_{j}")).expect("format coordinate"),
        }
    };
    let lin = |a: usize, p: (usize, usize), b: usize, q: (usize, usize)| {
        x(p.0, p.1)
            .scale(&f.from_i64(mu[a - 1]))
            .add(&x(q.0, q.1).scale(&f.from_i64(mu[b - 1])))
    };
    let row1 = [
        lin(1, (3, 7), 2, (4, 6)),
        lin(3, (4, 7), 4, (5, 6)),
        lin(5, (2, 3), 6, (5, 7)),
        lin(6, (2, 4), 5, (6, 7)),
        lin(3, (2, 5), 4, (3, 4)),
        lin(1, (2, 6), 2, (3, 5)),
    ];
    let mut m = SkewMatrix::zero(ring, 7);
    for (j, e) in row1.into_iter().enumerate() {
        m.set(0, j + 1, e);
    }
    for i in 2..=7 {
        for j in i + 1..=7 {
            m.set(i - 1, j - 1, x(i, j));
        }
    }
    m
}

/// `S_Z` in Pfaffian format: the 4×4 Pfaffians of the format matrix in `P^12`.
pub fn build_s_format<F: Field>(
    field: &F,
    mu: &[i64],
    eps: (F::Elem, F::Elem),
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    if mu.len() != 6 {
        return Err(ModelsError::BadInput(format!(
            "{} values of mu, expected 6",
            mu.len()
        )));
    }
    let names = ["mu1", "mu2", "mu3", "mu4", "mu5", "mu6"];
    check_nonzero(&names, mu)?;
    check_nonzero_in(field, &names, mu)?;
    let ring = s_format_ring(field);
    let m = s_format_matrix(&ring, mu, &eps);
    let mut params = ParameterRecord::with_seed(seed);
    for (n, v) in names.iter().zip(mu) {
        params.insert(*n, v);
    }
    params.insert("eps1", field.format(&eps.0));
    params.insert("eps2", field.format(&eps.1));
    Ok(VarietyModel {
        name: "S_fmt".into(),
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
        group: Some("D7_fmt".into()),
    })
}

pub fn build_s_format_from_hyperplanes<F: Field>(
    field: &F,
    mu: &[i64],
    h1: &[i64; 3],
    h2: &[i64; 3],
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    let eps = solve_epsilons(field, h1, h2)?;
    let mut m = build_s_format(field, mu, eps, seed)?;
    m.params.insert("h1", format!("{h1:?}"));
    m.params.insert("h2", format!("{h2:?}"));
    Ok(m)
}

/// Plücker quadrics of `Gr(2,7)` after solving the eight linear equations
/// of `S_Z` for `x_{1,*}`, `x_{2,7}`, `x_{3,6}` by linear algebra, in the
/// ring of the format coordinates.
pub fn s_format_pipeline_quadrics<F: Field>(
    field: &F,
    c: &[i64],
    h1: &[i64; 3],
    h2: &[i64; 3],
) -> Result<Vec<SparsePoly<F>>, ModelsError> {
    let s = build_s_z(field, c, h1, h2, None)?;
    let target = s_format_ring(field);
    let names = &s.ring.names;
    let elim: Vec<usize> = names
        .iter()
        .enumerate()
        .filter(|(_, n)| n.starts_with("x_1_") || *n == "x_2_7" || *n == "x_3_6")
        .map(|(i, _)| i)
        .collect();
    let kept: Vec<usize> = (0..names.len()).filter(|i| !elim.contains(i)).collect();
    // L_e x_elim + L_k x_kept = 0  =>  x_elim = -L_e^{-1} L_k x_kept.
    let rows: Vec<Vec<F::Elem>> = s
        .linear
        .iter()
        .map(|l| l.linear_coeffs().expect("linear"))
        .collect();
    let lm = ExactMatrix::from_rows(field, rows)?;
    let le = lm.select(&(0..lm.rows()).collect::<Vec<_>>(), &elim);
    let lk = lm.select(&(0..lm.rows()).collect::<Vec<_>>(), &kept);
    let inv = le.inverse().ok_or(ModelsError::DegenerateHyperplanes)?;
    let sol = inv.mul(&lk)?.scale(&field.from_i64(-1));
    let mut images = vec![SparsePoly::zero(&target); names.len()];
    for (t, &k) in kept.iter().enumerate() {
        let idx = target
            .index_of(&names[k])
            .expect("kept coordinate in format ring");
        debug_assert_eq!(idx, t);
        images[k] = SparsePoly::var(&target, idx);
    }
    for (r, &e) in elim.iter().enumerate() {
        images[e] = SparsePoly::linear(&target, sol.row(r));
    }
    Ok(s.nonlinear
        .iter()
        .map(|q| q.substitute(&target, &images))
        .collect())
}

/// The dihedral action of `D7_rho7` restricted to the format coordinates.
pub fn s_format_action<F: Field>(field: &F) -> Result<GroupAction<F>, ModelsError> {
    let g = make_group("D7_rho7", field)?;
    let plucker = plucker_ring(field, 2, 7)?;
    let idx: Vec<usize> = S_FORMAT_COORDINATES
        .iter()
        .map(|n| plucker.index_of(n).unwrap())
        .collect();
    let mut gens = Vec::new();
    for (name, m) in g.coordinate_generators()? {
        let sub = m.select(&idx, &idx);
        // The coordinates form a union of orbits, so the restriction is honest.
        let full_cols: usize = idx
            .iter()
            .map(|&j| {
                (0..m.rows())
                    .filter(|&i| !field.is_zero(m.get(i, j)))
                    .count()
            })
            .sum();
        let kept: usize = (0..13)
            .map(|j| (0..13).filter(|&i| !field.is_zero(sub.get(i, j))).count())
            .sum();
        if full_cols != kept {
            return Err(ModelsError::BadInput(format!(
                "{name} does not preserve the format coordinates"
            )));
        }
        gens.push(Generator {
            name,
            matrix: sub,
            twist: 1,
        });
    }
    Ok(GroupAction {
        name: "D7_fmt".into(),
        field: field.clone(),
        carrier: Carrier::Coordinates { dim: 13 },
        generators: gens,
        relations: g.relations.clone(),
        expected_order: 14,
        stated_relations: Vec::new(),
    })
}

fn y_components<F: Field>(
    ring: &Arc<PolyRing<F>>,
    lambda: &QuotientBundleSection<F>,
) -> Vec<SparsePoly<F>> {
    (1..=6)
        .map(|i| {
            lambda.coeffs.iter().filter(|((m, _), _)| *m == i).fold(
                SparsePoly::zero(ring),
                |acc, ((_, (j, k)), c)| {
                    acc.add(
                        &SparsePoly::var_named(ring, &format!("p_{j}_{k}"))
                            .unwrap()
                            .scale(c),
                    )
                },
            )
        })
        .collect()
}

fn check_section<F: Field>(
    field: &F,
    lambda: &QuotientBundleSection<F>,
) -> Result<(), ModelsError> {
    if lambda.n != 6 {
        return Err(ModelsError::BadInput(format!(
            "section on V_{}, expected V_6",
            lambda.n
        )));
    }
    if lambda.coeffs.values().all(|c| field.is_zero(c)) {
        return Err(ModelsError::BadInput("zero section".into()));
    }
    let c = contraction_matrix(field, 6)?;
    if c.mul_vec(&lambda.to_dense(field))?
        .iter()
        .any(|x| !field.is_zero(x))
    {
        return Err(ModelsError::NotInKernel);
    }
    Ok(())
}

/// Third row `(λ_1(p), …, λ_6(p))` of the rank-2 matrix, in the ring of `build_y_quadrics`.
pub fn y_third_row<F: Field>(
    model: &VarietyModel<F>,
    lambda: &QuotientBundleSection<F>,
) -> Vec<SparsePoly<F>> {
    y_components(&model.ring, lambda)
}

/// `Y_λ ⊂ Gr(2,6)`: planes with `λ(a,b) ∈ ⟨a,b⟩`, from the 3×3 minors
/// `p_ij λ_k − p_ik λ_j + p_jk λ_i` of the matrix with rows `a`, `b`, `λ(a,b)`.
pub fn build_y_quadrics<F: Field>(
    field: &F,
    lambda: &QuotientBundleSection<F>,
    seed: Option<u64>,
) -> Result<VarietyModel<F>, ModelsError> {
    check_section(field, lambda)?;
    let spec = GrassmannianSpec::new(field, 2, 6)?;
    let names: Vec<String> = spec
        .ring
        .names
        .iter()
        .map(|n| n.replacen('x', "p", 1))
        .collect();
    let ring = PolyRing::new(field, names);
    let ident: Vec<usize> = (0..15).collect();
    let mut nonlinear: Vec<SparsePoly<F>> = spec
        .quadrics
        .iter()
        .map(|q| q.rename(&ring, &ident))
        .collect();
    let lam = y_components(&ring, lambda);
    let p = |i: usize, j: usize| SparsePoly::var_named(&ring, &format!("p_{i}_{j}")).unwrap();
    for i in 1..=6 {
        for j in i + 1..=6 {
            for k in j + 1..=6 {
                let q = p(i, j)
                    .mul(&lam[k - 1])
                    .sub(&p(i, k).mul(&lam[j - 1]))
                    .add(&p(j, k).mul(&lam[i - 1]));
                nonlinear.push(q);
            }
        }
    }
    let mut params = ParameterRecord::with_seed(seed);
    for (&(i, (j, k)), c) in &lambda.coeffs {
        params.insert(format!("lambda_{i}_{j}_{k}"), field.format(c));
    }
    Ok(VarietyModel {
        name: "Y".into(),
        ambient: Ambient::Plucker {
            k: 2,
            n: 6,
            codim: 4,
        },
        ring,
        linear: Vec::new(),
        nonlinear,
        params,
        expected: ExpectedMetadata {
            dimension: 4,
            degree: Some(42),
            canonical_degree: Some(42),
            canonical_twist: Some(-1),
        },
        group: Some("D7_rho6".into()),
    })
}

/// Image `[λ(p), p]` of a point of `Y_λ` in the Plücker space of `Gr(2,7)`,
/// with `V_7 = ⟨v_1⟩ ⊕ V_6` and `v_j ∈ V_6` sent to `v_{8−j}`:
/// `x_{1,8−m} = λ_m(p)`, `x_{8−k,8−j} = p_{j,k}`.
pub fn transfer_y_to_z<F: Field>(
    field: &F,
    lambda: &QuotientBundleSection<F>,
    p: &[F::Elem],
) -> Result<Vec<F::Elem>, ModelsError> {
    check_section(field, lambda)?;
    if p.len() != 15 {
        return Err(ModelsError::Multilinear(
            MultilinearError::DimensionMismatch(format!("{} Plücker coordinates", p.len())),
        ));
    }
    let sp6 = crate::multilinear::WedgeSpace::new(2, 6)?;
    let sp7 = crate::multilinear::WedgeSpace::new(2, 7)?;
    let mut out = vec![field.zero(); 21];
    let pos7 = |i: usize, j: usize| sp7.signed_position(&[i, j]).unwrap().1;
    for m in 1..=6 {
        let mut acc = field.zero();
        for (&(i, (j, k)), c) in &lambda.coeffs {
            if i == m {
                let pjk = &p[sp6.signed_position(&[j, k]).unwrap().1];
                acc = field.add(&acc, &field.mul(c, pjk));
            }
        }
        out[pos7(1, 8 - m)] = acc;
    }
    for j in 1..=6 {
        for k in j + 1..=6 {
            out[pos7(8 - k, 8 - j)] = p[sp6.signed_position(&[j, k]).unwrap().1].clone();
        }
    }
    Ok(out)
}

/// The six parameters of `Z` read from the slots `v_i ⊗ (v_j* ∧ v_k*)`, `i = j+k mod 7`.
pub fn z_parameters_from_section<F: Field>(
    field: &F,
    lambda: &QuotientBundleSection<F>,
) -> Vec<F::Elem> {
    Z_PARAMETERS
        .iter()
        .map(|n| {
            let v: Vec<usize> = n[2..].split('_').map(|s| s.parse().unwrap()).collect();
            lambda.get(field, (v[0] + v[1]) % 7, (v[0], v[1]))
        })
        .collect()
}
