//! Finite groups acting on `V`, on exterior powers and on coordinate spaces,
//! together with the invariant families they cut out.
//!
//! Every matrix acts on column vectors: `g e_j = Σ_i g[i][j] e_i`. A generator
//! may carry a twist character, a scalar applied on top of the induced action
//! on `∧^k V`; the involutions of the dihedral actions need a `-1` there for
//! the hyperplanes `x_{2,7}, x_{3,6}, x_{4,5}` to be fixed rather than negated.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{ExactMatrix, Field, FieldError};
use crate::multilinear::{
    contraction_matrix, dual_matrix, induced_action, slot_index, slots, wedge_basis,
    MultilinearError, QuotientBundleSection, WedgeSpace,
};
use crate::polyring::{PolyRing, SparsePoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("unknown group {0}")]
    UnknownGroup(String),
    #[error("field has no primitive {0}-th root of unity")]
    FieldTooSmall(u64),
    #[error("relation {0} fails")]
    RelationFailed(String),
    #[error("group closure exceeded {0} elements")]
    OrderExceeded(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Multilinear(#[from] MultilinearError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub const GROUP_NAMES: [&str; 7] = [
    "D7_rho6", "D7_rho7", "Z7", "F21", "G42", "D7_perm", "D7_gr36",
];

/// What the generator matrices act on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Carrier {
    /// `V = F^n`, acting on the Plücker space `∧^k V`.
    Vector { n: usize, k: usize },
    /// A coordinate space acted on directly.
    Coordinates { dim: usize },
}

#[derive(Debug, Clone)]
pub struct Generator<F: Field> {
    pub name: String,
    pub matrix: ExactMatrix<F>,
    /// Scalar applied to the induced action on `∧^k V`, `±1`.
    pub twist: i64,
}

/// `lhs = rhs`, both words in the generators; powers are nonnegative.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub text: String,
    pub lhs: Vec<(usize, u32)>,
    pub rhs: Vec<(usize, u32)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub holds: bool,
}

/// A group element as a matrix on the carrier plus its twist.
#[derive(Debug, Clone)]
pub struct GroupElement<F: Field> {
    pub word: String,
    pub matrix: ExactMatrix<F>,
    pub twist: i64,
}

impl<F: Field> GroupElement<F> {
    pub fn is_identity(&self) -> bool {
        self.twist == 1
            && self.matrix == ExactMatrix::identity(self.matrix.field(), self.matrix.rows())
    }

    /// Multiplicative order, at most `bound`.
    pub fn order(&self, bound: usize) -> Option<usize> {
        let f = self.matrix.field();
        let id = ExactMatrix::identity(f, self.matrix.rows());
        let mut m = self.matrix.clone();
        let mut t = self.twist;
        for k in 1..=bound {
            if m == id && t == 1 {
                return Some(k);
            }
            m = m.mul(&self.matrix).ok()?;
            t *= self.twist;
        }
        None
    }
}

#[derive(Debug, Clone)]
pub struct GroupAction<F: Field> {
    pub name: String,
    pub field: F,
    pub carrier: Carrier,
    pub generators: Vec<Generator<F>>,
    pub relations: Vec<Relation>,
    pub expected_order: usize,
    /// Relations stated in the literature that are checked but not imposed.
    pub stated_relations: Vec<Relation>,
}

fn word_text(gens: &[String], w: &[(usize, u32)]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(g, e)| {
            if e == 1 {
                gens[g].clone()
            } else {
                format!("{}^{e}", gens[g])
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

impl<F: Field> GroupAction<F> {
    pub fn dim(&self) -> usize {
        match self.carrier {
            Carrier::Vector { n, .. } => n,
            Carrier::Coordinates { dim } => dim,
        }
    }

    pub fn generator(&self, name: &str) -> Option<&Generator<F>> {
        self.generators.iter().find(|g| g.name == name)
    }

    fn eval_word(&self, w: &[(usize, u32)]) -> Result<(ExactMatrix<F>, i64), SymmetryError> {
        let mut m = ExactMatrix::identity(&self.field, self.dim());
        let mut t = 1;
        for &(g, e) in w {
            for _ in 0..e {
                m = m.mul(&self.generators[g].matrix)?;
                t *= self.generators[g].twist;
            }
        }
        Ok((m, t))
    }

    fn check(&self, rels: &[Relation]) -> Result<Vec<RelationCheck>, SymmetryError> {
        rels.iter()
            .map(|r| {
                let (a, ta) = self.eval_word(&r.lhs)?;
                let (b, tb) = self.eval_word(&r.rhs)?;
                Ok(RelationCheck {
                    relation: r.text.clone(),
                    holds: a == b && ta == tb,
                })
            })
            .collect()
    }

    /// Defining relations, as exact matrix identities.
    pub fn check_relations(&self) -> Result<Vec<RelationCheck>, SymmetryError> {
        self.check(&self.relations)
    }

    /// Relations quoted from the literature that are not part of the presentation.
    pub fn check_stated_relations(&self) -> Result<Vec<RelationCheck>, SymmetryError> {
        self.check(&self.stated_relations)
    }

    /// All group elements, by breadth-first closure.
    pub fn elements(&self) -> Result<Vec<GroupElement<F>>, SymmetryError> {
        let limit = 1000;
        let id = GroupElement {
            word: "1".into(),
            matrix: ExactMatrix::identity(&self.field, self.dim()),
            twist: 1,
        };
        let mut out = vec![id];
        let mut frontier = 0;
        while frontier < out.len() {
            let cur = out[frontier].clone();
            frontier += 1;
            for g in &self.generators {
                let m = g.matrix.mul(&cur.matrix)?;
                let t = g.twist * cur.twist;
                if out.iter().any(|e| e.twist == t && e.matrix == m) {
                    continue;
                }
                let word = if cur.word == "1" {
                    g.name.clone()
                } else {
                    format!("{}*{}", g.name, cur.word)
                };
                out.push(GroupElement {
                    word,
                    matrix: m,
                    twist: t,
                });
                if out.len() > limit {
                    return Err(SymmetryError::OrderExceeded(limit));
                }
            }
        }
        Ok(out)
    }

    pub fn order(&self) -> Result<usize, SymmetryError> {
        Ok(self.elements()?.len())
    }

    /// Elements of the subgroup generated by the named generators.
    pub fn subgroup(&self, names: &[&str]) -> Result<GroupAction<F>, SymmetryError> {
        let gens: Vec<Generator<F>> = self
            .generators
            .iter()
            .filter(|g| names.contains(&g.name.as_str()))
            .cloned()
            .collect();
        if gens.len() != names.len() {
            return Err(SymmetryError::UnknownGroup(format!(
                "{}<{}>",
                self.name,
                names.join(",")
            )));
        }
        let mut sub = GroupAction {
            name: format!("{}<{}>", self.name, names.join(",")),
            field: self.field.clone(),
            carrier: self.carrier,
            generators: gens,
            relations: Vec::new(),
            expected_order: 0,
            stated_relations: Vec::new(),
        };
        sub.expected_order = sub.order()?;
        Ok(sub)
    }

    /// Matrix of an element on the space the model's coordinates live in:
    /// the twisted induced action on `∧^k V`, or the element itself.
    pub fn coordinate_matrix(
        &self,
        m: &ExactMatrix<F>,
        twist: i64,
    ) -> Result<ExactMatrix<F>, SymmetryError> {
        match self.carrier {
            Carrier::Vector { k, .. } => {
                let w = induced_action(m, k)?;
                Ok(if twist == 1 {
                    w
                } else {
                    w.scale(&self.field.from_i64(twist))
                })
            }
            Carrier::Coordinates { .. } => Ok(m.clone()),
        }
    }

    /// Coordinate matrices of the generators.
    pub fn coordinate_generators(&self) -> Result<Vec<(String, ExactMatrix<F>)>, SymmetryError> {
        self.generators
            .iter()
            .map(|g| Ok((g.name.clone(), self.coordinate_matrix(&g.matrix, g.twist)?)))
            .collect()
    }

    /// Contragredient coordinate matrices, acting on linear forms.
    pub fn dual_coordinate_generators(
        &self,
    ) -> Result<Vec<(String, ExactMatrix<F>)>, SymmetryError> {
        self.coordinate_generators()?
            .into_iter()
            .map(|(n, m)| Ok((n, dual_matrix(&m)?)))
            .collect()
    }
}

/// Simultaneous fixed space of a list of matrices: kernel of the stacked `g - Id`.
pub fn invariant_subspace<F: Field>(
    field: &F,
    mats: &[ExactMatrix<F>],
) -> Result<Vec<Vec<F::Elem>>, SymmetryError> {
    let Some(first) = mats.first() else {
        return Err(SymmetryError::DimensionMismatch("no generators".into()));
    };
    let n = first.rows();
    let id = ExactMatrix::identity(field, n);
    let mut stacked = ExactMatrix::zeros(field, 0, n);
    for m in mats {
        if m.rows() != n || m.cols() != n {
            return Err(SymmetryError::DimensionMismatch(
                "generators of different sizes".into(),
            ));
        }
        stacked = stacked.vstack(&m.sub(&id)?)?;
    }
    let (r, pivots) = stacked.rref();
    // Re-derive the kernel from the reduced form so that the basis is in echelon shape.
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&fc| {
            let mut v = vec![field.zero(); n];
            v[fc] = field.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(r.get(row, fc));
            }
            v
        })
        .collect())
}

fn diag<F: Field>(f: &F, d: &[F::Elem]) -> ExactMatrix<F> {
    let mut m = ExactMatrix::zeros(f, d.len(), d.len());
    for (i, x) in d.iter().enumerate() {
        m.set(i, i, x.clone());
    }
    m
}

/// `g e_j = sign_j e_{images[j]}`, 1-based images.
fn signed_permutation<F: Field>(f: &F, images: &[usize], signs: &[i64]) -> ExactMatrix<F> {
    let n = images.len();
    let mut g = ExactMatrix::zeros(f, n, n);
    for j in 0..n {
        g.set(images[j] - 1, j, f.from_i64(signs[j]));
    }
    g
}

fn rel(gens: &[&str], lhs: &[(usize, u32)], rhs: &[(usize, u32)]) -> Relation {
    let names: Vec<String> = gens.iter().map(|s| s.to_string()).collect();
    Relation {
        text: format!("{} = {}", word_text(&names, lhs), word_text(&names, rhs)),
        lhs: lhs.to_vec(),
        rhs: rhs.to_vec(),
    }
}

/// Dihedral relations `t^7 = s^2 = 1`, `s t = t^6 s`.
fn dihedral_relations(t: &str, s: &str) -> Vec<Relation> {
    let g = [t, s];
    vec![
        rel(&g, &[(0, 7)], &[]),
        rel(&g, &[(1, 2)], &[]),
        rel(&g, &[(1, 1), (0, 1)], &[(0, 6), (1, 1)]),
    ]
}

/// Index of the Reid coordinates `x_1..x_6, y_1..y_6, z`.
pub fn reid_coordinate_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=6).map(|i| format!("x{i}")).collect();
    v.extend((1..=6).map(|i| format!("y{i}")));
    v.push("z".into());
    v
}

/// Coordinates of the alternative dihedral model: `x_1..x_7, y_1..y_7`.
pub fn perm_model_coordinate_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=7).map(|i| format!("x{i}")).collect();
    v.extend((1..=7).map(|i| format!("y{i}")));
    v
}

/// Point map of the Reid coordinates induced by `i ↦ m·i (mod 7)` on both
/// index families, with `z ↦ z_sign · z`.
fn reid_multiplier<F: Field>(f: &F, m: usize, z_sign: i64) -> ExactMatrix<F> {
    let mut images = Vec::with_capacity(13);
    for block in 0..2 {
        for i in 1..=6 {
            images.push(block * 6 + (m * i) % 7);
        }
    }
    images.push(13);
    let mut signs = vec![1; 13];
    signs[12] = z_sign;
    signed_permutation(f, &images, &signs)
}

/// Builds one of the named group actions over `field`, which must contain a
/// primitive 7th root of unity. Relations are verified before returning.
pub fn make_group<F: Field>(name: &str, field: &F) -> Result<GroupAction<F>, SymmetryError> {
    let eps = field
        .root_of_unity(7)
        .map_err(|_| SymmetryError::FieldTooSmall(7))?;
    let f = field;
    let pw = |e: u64| f.pow(&eps, e);
    let action = match name {
        "D7_rho6" | "D7_gr36" => {
            let tau = diag(f, &(1..=6).map(pw).collect::<Vec<_>>());
            let sigma = signed_permutation(f, &[6, 5, 4, 3, 2, 1], &[1; 6]);
            let (k, twist) = if name == "D7_rho6" { (2, -1) } else { (3, 1) };
            GroupAction {
                name: name.into(),
                field: f.clone(),
                carrier: Carrier::Vector { n: 6, k },
                generators: vec![
                    Generator {
                        name: "tau".into(),
                        matrix: tau,
                        twist: 1,
                    },
                    Generator {
                        name: "sigma".into(),
                        matrix: sigma,
                        twist,
                    },
                ],
                relations: dihedral_relations("tau", "sigma"),
                expected_order: 14,
                stated_relations: Vec::new(),
            }
        }
        "D7_rho7" | "Z7" => {
            let tau = diag(f, &(0..7).map(pw).collect::<Vec<_>>());
            let mut gens = vec![Generator {
                name: "tau".into(),
                matrix: tau,
                twist: 1,
            }];
            let mut relations = vec![rel(&["tau"], &[(0, 7)], &[])];
            let mut order = 7;
            if name == "D7_rho7" {
                let mut signs = vec![1; 7];
                signs[0] = -1;
                let sigma = signed_permutation(f, &[1, 7, 6, 5, 4, 3, 2], &signs);
                gens.push(Generator {
                    name: "sigma".into(),
                    matrix: sigma,
                    twist: -1,
                });
                relations = dihedral_relations("tau", "sigma");
                order = 14;
            }
            GroupAction {
                name: name.into(),
                field: f.clone(),
                carrier: Carrier::Vector { n: 7, k: 2 },
                generators: gens,
                relations,
                expected_order: order,
                stated_relations: Vec::new(),
            }
        }
        "F21" | "G42" => {
            let mut d: Vec<F::Elem> = (1..=6).map(pw).collect();
            d.extend((1..=6).map(pw));
            d.push(f.one());
            let a = diag(f, &d);
            let g = ["a", "b"];
            let (gens, relations, order, stated) = if name == "F21" {
                let b = reid_multiplier(f, 2, 1);
                (
                    vec![
                        Generator {
                            name: "a".into(),
                            matrix: a,
                            twist: 1,
                        },
                        Generator {
                            name: "b".into(),
                            matrix: b,
                            twist: 1,
                        },
                    ],
                    vec![
                        rel(&g, &[(0, 7)], &[]),
                        rel(&g, &[(1, 3)], &[]),
                        rel(&g, &[(0, 1), (1, 1)], &[(1, 1), (0, 2)]),
                    ],
                    21,
                    vec![rel(&g, &[(0, 1), (1, 1)], &[(1, 2), (0, 1)])],
                )
            } else {
                let g = ["a", "b'"];
                let bp = reid_multiplier(f, 3, -1);
                (
                    vec![
                        Generator {
                            name: "a".into(),
                            matrix: a,
                            twist: 1,
                        },
                        Generator {
                            name: "b'".into(),
                            matrix: bp,
                            twist: 1,
                        },
                    ],
                    vec![
                        rel(&g, &[(0, 7)], &[]),
                        rel(&g, &[(1, 6)], &[]),
                        rel(&g, &[(0, 1), (1, 1)], &[(1, 1), (0, 3)]),
                    ],
                    42,
                    Vec::new(),
                )
            };
            GroupAction {
                name: name.into(),
                field: f.clone(),
                carrier: Carrier::Coordinates { dim: 13 },
                generators: gens,
                relations,
                expected_order: order,
                stated_relations: stated,
            }
        }
        "D7_perm" => {
            let mut cyc = Vec::with_capacity(14);
            let mut w0 = Vec::with_capacity(14);
            for block in 0..2 {
                for i in 1..=7 {
                    cyc.push(block * 7 + i % 7 + 1);
                    w0.push(block * 7 + if i == 7 { 7 } else { 7 - i });
                }
            }
            GroupAction {
                name: name.into(),
                field: f.clone(),
                carrier: Carrier::Coordinates { dim: 14 },
                generators: vec![
                    Generator {
                        name: "alpha".into(),
                        matrix: signed_permutation(f, &cyc, &[1; 14]),
                        twist: 1,
                    },
                    Generator {
                        name: "w0".into(),
                        matrix: signed_permutation(f, &w0, &[1; 14]),
                        twist: 1,
                    },
                ],
                relations: dihedral_relations("alpha", "w0"),
                expected_order: 14,
                stated_relations: Vec::new(),
            }
        }
        other => return Err(SymmetryError::UnknownGroup(other.into())),
    };
    for c in action.check_relations()? {
        if !c.holds {
            return Err(SymmetryError::RelationFailed(c.relation));
        }
    }
    Ok(action)
}

/// The reflection of a dihedral action on model coordinates. Unlike
/// [`make_group`] no root of unity is needed, so any odd prime works.
pub fn dihedral_involution<F: Field>(
    name: &str,
    field: &F,
) -> Result<ExactMatrix<F>, SymmetryError> {
    let f = field;
    let twisted =
        |m: ExactMatrix<F>, k: usize, twist: i64| -> Result<ExactMatrix<F>, SymmetryError> {
            Ok(induced_action(&m, k)?.scale(&f.from_i64(twist)))
        };
    match name {
        "D7_rho6" => twisted(signed_permutation(f, &[6, 5, 4, 3, 2, 1], &[1; 6]), 2, -1),
        "D7_gr36" => twisted(signed_permutation(f, &[6, 5, 4, 3, 2, 1], &[1; 6]), 3, 1),
        "D7_rho7" => {
            let mut signs = vec![1; 7];
            signs[0] = -1;
            twisted(signed_permutation(f, &[1, 7, 6, 5, 4, 3, 2], &signs), 2, -1)
        }
        "D7_perm" => {
            let w0: Vec<usize> = (0..2)
                .flat_map(|b| (1..=7).map(move |i| b * 7 + if i == 7 { 7 } else { 7 - i }))
                .collect();
            Ok(signed_permutation(f, &w0, &[1; 14]))
        }
        other => Err(SymmetryError::UnknownGroup(format!(
            "{other} has no dihedral reflection"
        ))),
    }
}

/// Matrix of a group element on `V ⊗ ∧²V*`, the domain of the contraction map.
pub fn section_space_matrix<F: Field>(
    g: &ExactMatrix<F>,
    twist: i64,
) -> Result<ExactMatrix<F>, SymmetryError> {
    let f = g.field();
    let n = g.rows();
    let dual2 = induced_action(&dual_matrix(g)?, 2)?;
    let m2 = dual2.rows();
    let dim = n * m2;
    let t = f.from_i64(twist);
    Ok(ExactMatrix::from_fn(f, dim, dim, |r, c| {
        let (i, a) = (r / m2, r % m2);
        let (j, b) = (c / m2, c % m2);
        f.mul(&t, &f.mul(g.get(i, j), dual2.get(a, b)))
    }))
}

/// One slot `v_i ⊗ (v_j* ∧ v_k*)` of an invariant family with its parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilySlot {
    pub i: usize,
    pub jk: (usize, usize),
    pub parameter: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantFamily {
    pub model: String,
    pub parameters: Vec<String>,
    pub slots: Vec<FamilySlot>,
}

impl InvariantFamily {
    /// Member with the given parameter values.
    pub fn section<F: Field>(
        &self,
        field: &F,
        values: &[F::Elem],
    ) -> Result<QuotientBundleSection<F>, SymmetryError> {
        if values.len() != self.parameters.len() {
            return Err(SymmetryError::DimensionMismatch(format!(
                "{} values for {} parameters",
                values.len(),
                self.parameters.len()
            )));
        }
        let coeffs: BTreeMap<_, _> = self
            .slots
            .iter()
            .map(|s| ((s.i, s.jk), values[s.parameter].clone()))
            .collect();
        Ok(QuotientBundleSection::new(field, 6, coeffs)?)
    }

    pub fn parameter_index(&self, name: &str) -> Option<usize> {
        self.parameters.iter().position(|p| p == name)
    }

    pub fn slot_parameter(&self, i: usize, jk: (usize, usize)) -> Option<&str> {
        self.slots
            .iter()
            .find(|s| s.i == i && s.jk == jk)
            .map(|s| self.parameters[s.parameter].as_str())
    }
}

/// Solves the `D7_rho6` equivariance constraints inside `ker(contraction)` on
/// `V_6 ⊗ ∧²V_6*` and names each parameter `c_{j,k}` after the slot
/// `v_i ⊗ (v_j* ∧ v_k*)` with `i ≤ 3` in its support.
pub fn invariant_q1_family<F: Field>(field: &F) -> Result<InvariantFamily, SymmetryError> {
    let group = make_group("D7_rho6", field)?;
    let mut mats = Vec::new();
    for g in &group.generators {
        mats.push(section_space_matrix(&g.matrix, g.twist)?);
    }
    let fixed = invariant_subspace(field, &mats)?;
    let contraction = contraction_matrix(field, 6)?;
    // Intersect the fixed space with the contraction kernel.
    let basis = ExactMatrix::from_rows(field, fixed.clone())?.transpose();
    let image = contraction.mul(&basis)?;
    let combos = image.kernel_basis();
    let mut vectors: Vec<Vec<F::Elem>> = combos
        .iter()
        .map(|c| basis.mul_vec(c))
        .collect::<Result<_, _>>()?;
    // Echelon form so every vector has a unit leading entry.
    if !vectors.is_empty() {
        let (r, pivots) = ExactMatrix::from_rows(field, vectors)?.rref();
        vectors = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
    }
    let all = slots(6);
    let mut parameters = Vec::new();
    let mut fam_slots = Vec::new();
    for (p, v) in vectors.iter().enumerate() {
        let support: Vec<usize> = (0..v.len()).filter(|&c| !field.is_zero(&v[c])).collect();
        let named = support
            .iter()
            .map(|&c| all[c])
            .find(|&(i, _)| i <= 3)
            .ok_or_else(|| {
                SymmetryError::DimensionMismatch("parameter without a slot in v_1..v_3".into())
            })?;
        parameters.push(format!("c_{}_{}", named.1 .0, named.1 .1));
        for c in support {
            if !field.is_one(&v[c]) {
                return Err(SymmetryError::DimensionMismatch(format!(
                    "slot coefficient {} is not 1",
                    field.format(&v[c])
                )));
            }
            let (i, jk) = all[c];
            fam_slots.push(FamilySlot {
                i,
                jk,
                parameter: p,
            });
        }
    }
    fam_slots.sort_by_key(|s| (s.i, s.jk));
    Ok(InvariantFamily {
        model: "Y_lambda/D7_rho6".into(),
        parameters,
        slots: fam_slots,
    })
}

/// Checks `λ(g a, g b) = twist(g) · g λ(a, b)` for every generator of `group`.
pub fn section_equivariant<F: Field>(
    field: &F,
    group: &GroupAction<F>,
    lambda: &QuotientBundleSection<F>,
    a: &[F::Elem],
    b: &[F::Elem],
) -> Result<bool, SymmetryError> {
    let base = lambda.eval(field, a, b);
    for g in &group.generators {
        let ga = g.matrix.mul_vec(a)?;
        let gb = g.matrix.mul_vec(b)?;
        let lhs = lambda.eval(field, &ga, &gb);
        let t = field.from_i64(g.twist);
        let rhs: Vec<F::Elem> = g
            .matrix
            .mul_vec(&base)?
            .iter()
            .map(|x| field.mul(&t, x))
            .collect();
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Triples `i<j<k` in `1..=6` grouped by `i+j+k mod 7`.
pub fn gr36_eigenvalue_classes() -> BTreeMap<u8, Vec<[usize; 3]>> {
    let mut out: BTreeMap<u8, Vec<[usize; 3]>> = (0..7).map(|r| (r, Vec::new())).collect();
    for w in wedge_basis(3, 6).expect("valid range") {
        let t = [w.0[0], w.0[1], w.0[2]];
        out.get_mut(&((w.index_sum() % 7) as u8))
            .expect("residue")
            .push(t);
    }
    out
}

/// Image of a polynomial under the substitution `x ↦ g x`, i.e. `f ∘ g`.
pub fn transform_poly<F: Field>(
    p: &SparsePoly<F>,
    g: &ExactMatrix<F>,
) -> Result<SparsePoly<F>, SymmetryError> {
    let ring = p.ring();
    let n = ring.nvars();
    if g.rows() != n || g.cols() != n {
        return Err(SymmetryError::DimensionMismatch(format!(
            "{}x{} matrix on {} variables",
            g.rows(),
            g.cols(),
            n
        )));
    }
    let images = substitution_images(ring, g);
    Ok(p.substitute(ring, &images))
}

/// `x_i ↦ Σ_j g[i][j] x_j` for each variable.
pub fn substitution_images<F: Field>(
    ring: &std::sync::Arc<PolyRing<F>>,
    g: &ExactMatrix<F>,
) -> Vec<SparsePoly<F>> {
    (0..ring.nvars())
        .map(|i| SparsePoly::linear(ring, g.row(i)))
        .collect()
}

/// Equivariance of the Plücker space coordinate labels: position of each
/// label under a signed permutation, or `None` when the matrix is not monomial.
pub fn monomial_pattern<F: Field>(g: &ExactMatrix<F>) -> Option<Vec<(usize, F::Elem)>> {
    let f = g.field();
    (0..g.cols())
        .map(|j| {
            let nz: Vec<usize> = (0..g.rows()).filter(|&i| !f.is_zero(g.get(i, j))).collect();
            (nz.len() == 1).then(|| (nz[0], g.get(nz[0], j).clone()))
        })
        .collect()
}

/// Position in `∧^k F^n`, for convenience in tests and reports.
pub fn wedge_position(k: usize, n: usize, idx: &[usize]) -> Option<usize> {
    WedgeSpace::new(k, n)
        .ok()?
        .signed_position(idx)
        .map(|(_, p)| p)
}

/// Index of a slot of `V_6 ⊗ ∧²V_6*`.
pub fn q1_slot(i: usize, jk: (usize, usize)) -> usize {
    slot_index(6, i, jk)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{Cyclotomic, PrimeField};

    #[test]
    fn group_orders() {
        let f = PrimeField::new(43).unwrap();
        for (name, order) in [
            ("D7_rho6", 14),
            ("D7_rho7", 14),
            ("Z7", 7),
            ("F21", 21),
            ("G42", 42),
            ("D7_perm", 14),
            ("D7_gr36", 14),
        ] {
            let g = make_group(name, &f).unwrap();
            assert_eq!(g.order().unwrap(), order, "{name}");
            assert_eq!(g.expected_order, order);
        }
        assert!(matches!(
            make_group("D8", &f),
            Err(SymmetryError::UnknownGroup(_))
        ));
        assert!(matches!(
            make_group("Z7", &PrimeField::new(11).unwrap()),
            Err(SymmetryError::FieldTooSmall(7))
        ));
    }

    #[test]
    fn stated_frobenius_relation_is_false() {
        let f = PrimeField::new(29).unwrap();
        let g = make_group("F21", &f).unwrap();
        let stated = g.check_stated_relations().unwrap();
        assert_eq!(stated.len(), 1);
        assert!(!stated[0].holds);
        assert!(g.check_relations().unwrap().iter().all(|c| c.holds));
    }

    #[test]
    fn invariant_hyperplanes() {
        let f = PrimeField::new(29).unwrap();
        let g = make_group("D7_rho7", &f).unwrap();
        let mats: Vec<_> = g
            .dual_coordinate_generators()
            .unwrap()
            .into_iter()
            .map(|(_, m)| m)
            .collect();
        let inv = invariant_subspace(&f, &mats).unwrap();
        assert_eq!(inv.len(), 3);
        let support: Vec<usize> = inv
            .iter()
            .map(|v| v.iter().position(|x| *x != 0).unwrap())
            .collect();
        let expect: Vec<usize> = [[2, 7], [3, 6], [4, 5]]
            .iter()
            .map(|i| wedge_position(2, 7, i).unwrap())
            .collect();
        let mut s = support.clone();
        s.sort();
        let mut e = expect.clone();
        e.sort();
        assert_eq!(s, e);
        for v in &inv {
            assert_eq!(v.iter().filter(|x| **x != 0).count(), 1);
        }
        let g6 = make_group("D7_rho6", &f).unwrap();
        let mats: Vec<_> = g6
            .dual_coordinate_generators()
            .unwrap()
            .into_iter()
            .map(|(_, m)| m)
            .collect();
        assert_eq!(invariant_subspace(&f, &mats).unwrap().len(), 3);
    }

    #[test]
    fn sigma7_fixes_x45() {
        let f = PrimeField::new(29).unwrap();
        let g = make_group("D7_rho7", &f).unwrap();
        let s = g.generator("sigma").unwrap();
        let raw = induced_action(&s.matrix, 2).unwrap();
        let p = wedge_position(2, 7, &[4, 5]).unwrap();
        assert_eq!(*raw.get(p, p), f.from_i64(-1));
        let twisted = g.coordinate_matrix(&s.matrix, s.twist).unwrap();
        assert_eq!(*twisted.get(p, p), 1);
        // With the twist sigma is a plain permutation of the Plücker coordinates.
        assert!(monomial_pattern(&twisted)
            .unwrap()
            .iter()
            .all(|(_, c)| *c == 1));
    }

    #[test]
    fn q1_family_over_cyclotomic() {
        let f = Cyclotomic::new(7);
        let fam = invariant_q1_family(&f).unwrap();
        assert_eq!(fam.parameters.len(), 6);
        assert_eq!(fam.slots.len(), 12);
        assert_eq!(fam.slot_parameter(4, (5, 6)), Some("c_1_2"));
        assert_eq!(fam.slot_parameter(4, (1, 3)), Some("c_4_6"));
        assert_eq!(fam.slot_parameter(6, (1, 5)), Some("c_2_6"));
        for s in &fam.slots {
            assert_eq!((s.jk.0 + s.jk.1) % 7, s.i % 7);
        }
    }

    #[test]
    fn gr36_classes() {
        let c = gr36_eigenvalue_classes();
        assert_eq!(c[&1], vec![[1, 2, 5], [1, 3, 4], [4, 5, 6]]);
        assert_eq!(c[&0], vec![[1, 2, 4], [3, 5, 6]]);
        assert_eq!(c.values().map(Vec::len).sum::<usize>(), 20);
        assert!((1..7).all(|r| c[&r].len() == 3));
    }

    #[test]
    fn reflection_without_root_of_unity() {
        let f = PrimeField::new(29).unwrap();
        for (name, gen) in [
            ("D7_rho6", "sigma"),
            ("D7_gr36", "sigma"),
            ("D7_rho7", "sigma"),
            ("D7_perm", "w0"),
        ] {
            let g = make_group(name, &f).unwrap();
            let s = g.generator(gen).unwrap();
            assert_eq!(
                dihedral_involution(name, &f).unwrap(),
                g.coordinate_matrix(&s.matrix, s.twist).unwrap(),
                "{name}"
            );
        }
        let f13 = PrimeField::new(13).unwrap();
        assert!(make_group("D7_rho7", &f13).is_err());
        let s = dihedral_involution("D7_rho7", &f13).unwrap();
        assert_eq!(s.mul(&s).unwrap(), ExactMatrix::identity(&f13, 21));
        assert!(dihedral_involution("F21", &f).is_err());
    }
}
