use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::GeometryError;
use crate::exactfield::{ExactMatrix, Field, PrimeField};
use crate::models::{Ambient, VarietyModel};
use crate::polyring::{
    buchberger_with_limit, for_each_projective_point, projective_size, saturate_by_form,
    saturate_by_linear_form, solve_zero_dimensional, FpEvaluator, HilbertData, PointSet, PolyRing,
    SparsePoly,
};

/// Largest `|P^{s-1}(F_p)|` enumerated point by point.
pub const CENSUS_LIMIT: u64 = 3_000_000;
const GROEBNER_VARS: usize = 8;
const EXTENSION_TABLE: usize = 6;

/// The equations of a model restricted to a linear subspace, after solving
/// its linear equations there.
#[derive(Debug, Clone)]
pub struct RestrictedSystem {
    pub label: String,
    pub eigenspace_dim: usize,
    /// Basis of the subspace cut out by the linear equations, in model coordinates.
    pub basis: Vec<Vec<u64>>,
    pub ring: Arc<PolyRing<PrimeField>>,
    pub polys: Vec<SparsePoly<PrimeField>>,
}

impl RestrictedSystem {
    pub fn to_model_coords(&self, t: &[u64]) -> Vec<u64> {
        let f = &self.ring.field;
        let n = self.basis.first().map_or(0, Vec::len);
        (0..n)
            .map(|i| (0..t.len()).fold(0, |acc, j| f.add(&acc, &f.mul(&t[j], &self.basis[j][i]))))
            .collect()
    }
}

fn combine(f: &PrimeField, coeffs: &[Vec<u64>], basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = basis.first().map_or(0, Vec::len);
    coeffs
        .iter()
        .map(|k| {
            (0..n)
                .map(|i| (0..k.len()).fold(0, |acc, j| f.add(&acc, &f.mul(&k[j], &basis[j][i]))))
                .collect()
        })
        .collect()
}

fn substitute_basis(
    f: &PrimeField,
    polys: &[SparsePoly<PrimeField>],
    basis: &[Vec<u64>],
    prefix: &str,
) -> (Arc<PolyRing<PrimeField>>, Vec<SparsePoly<PrimeField>>) {
    let ring = PolyRing::new(
        f,
        (0..basis.len()).map(|j| format!("{prefix}{j}")).collect(),
    );
    let n = polys
        .first()
        .map(|p| p.ring().nvars())
        .or_else(|| basis.first().map(Vec::len))
        .unwrap_or(0);
    let images: Vec<SparsePoly<PrimeField>> = (0..n)
        .map(|i| SparsePoly::linear(&ring, &basis.iter().map(|b| b[i]).collect::<Vec<_>>()))
        .collect();
    let out = polys
        .iter()
        .map(|p| p.substitute(&ring, &images))
        .filter(|p| !p.is_zero())
        .collect();
    (ring, out)
}

/// Restricts `model` to the span of `basis` (vectors in model coordinates).
pub fn restrict_to_subspace(
    model: &VarietyModel<PrimeField>,
    label: &str,
    basis: &[Vec<u64>],
) -> Result<RestrictedSystem, GeometryError> {
    let f = model.field();
    let d = basis.len();
    let cut: Vec<Vec<u64>> = if model.linear.is_empty() || d == 0 {
        basis.to_vec()
    } else {
        let rows: Vec<Vec<u64>> = model
            .linear
            .iter()
            .map(|l| {
                let c = l.linear_coeffs().expect("linear equation");
                basis
                    .iter()
                    .map(|b| {
                        b.iter()
                            .zip(&c)
                            .fold(0, |acc, (x, y)| f.add(&acc, &f.mul(x, y)))
                    })
                    .collect()
            })
            .collect();
        let k = ExactMatrix::from_rows(f, rows)?.kernel_basis();
        combine(f, &k, basis)
    };
    let (ring, polys) = substitute_basis(f, &model.nonlinear, &cut, "t");
    Ok(RestrictedSystem {
        label: label.into(),
        eigenspace_dim: d,
        basis: cut,
        ring,
        polys,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusKind {
    Empty,
    Points,
    Curve,
    /// The whole linear space.
    Linear,
    Higher,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSummary {
    pub length: usize,
    pub geometric: usize,
    pub reduced: bool,
    pub degrees: Vec<usize>,
    /// `N_k`, the number of points over `F_{p^k}`, for `k = 1..6`.
    pub counts: Vec<usize>,
    /// Rational points in model coordinates.
    pub rational: Vec<Vec<u64>>,
}

impl PointSummary {
    fn from_set(ps: &PointSet, sys: &RestrictedSystem) -> Self {
        PointSummary {
            length: ps.length(),
            geometric: ps.geometric_points(),
            reduced: ps.is_reduced(),
            degrees: ps.degrees(),
            counts: (1..=EXTENSION_TABLE).map(|k| ps.count_over(k)).collect(),
            rational: ps
                .rational_points()
                .iter()
                .map(|t| sys.to_model_coords(t))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveSummary {
    pub degree: i64,
    pub arithmetic_genus: i64,
    pub hilbert: String,
    /// Projective dimension of the linear span, when recovered.
    pub span_dim: Option<usize>,
    /// Rational points of the curve, from the census.
    pub rational_points: Option<usize>,
    /// `|N - p - 1| ≤ 2g√p`.
    pub hasse_bound: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenComponent {
    pub eigenvalue: String,
    pub eigenspace_dim: usize,
    /// Vector dimension after the linear equations.
    pub section_dim: usize,
    pub kind: LocusKind,
    pub dimension: i64,
    /// Saturated Hilbert polynomial.
    pub hilbert: Option<String>,
    /// Rational points found by enumeration.
    pub census: Option<usize>,
    pub points: Option<PointSummary>,
    pub curve: Option<CurveSummary>,
    /// Points off the curve.
    pub isolated: Option<PointSummary>,
    /// Restricted Plücker quadrics that are single monomials `x_I x_J`.
    pub support: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedLocusSummary {
    pub element: String,
    pub p: u64,
    pub order: u64,
    pub components: Vec<EigenComponent>,
}

impl FixedLocusSummary {
    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|c| c.kind == LocusKind::Empty)
    }

    pub fn is_resolved(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.kind != LocusKind::Unresolved)
    }

    /// Geometric isolated fixed points over all eigenspaces.
    pub fn isolated_points(&self) -> usize {
        self.components
            .iter()
            .map(|c| {
                c.points.as_ref().map_or(0, |p| p.geometric)
                    + c.isolated.as_ref().map_or(0, |p| p.geometric)
            })
            .sum()
    }

    pub fn curves(&self) -> Vec<&CurveSummary> {
        self.components
            .iter()
            .filter_map(|c| c.curve.as_ref())
            .collect()
    }

    /// Hilbert polynomial of the whole fixed locus, the eigenspaces being
    /// disjoint. `None` unless every component is at most a curve.
    pub fn hilbert_polynomial(&self) -> Option<String> {
        let (mut a, mut b) = (0i64, 0i64);
        for c in &self.components {
            match c.kind {
                LocusKind::Empty | LocusKind::Points | LocusKind::Curve => {}
                _ => return None,
            }
            if let Some(cv) = &c.curve {
                a += cv.degree;
                b += 1 - cv.arithmetic_genus;
            }
            for p in c.points.iter().chain(c.isolated.iter()) {
                b += p.length as i64;
            }
        }
        Some(match (a, b) {
            (0, b) => b.to_string(),
            (a, 0) => format!("{a}t"),
            (a, b) if b < 0 => format!("{a}t{b}"),
            (a, b) => format!("{a}t+{b}"),
        })
    }

    /// `N_k` of the isolated points, summed over eigenspaces.
    pub fn isolated_counts(&self) -> Vec<usize> {
        let mut out = vec![0; EXTENSION_TABLE];
        for c in &self.components {
            for p in c.points.iter().chain(c.isolated.iter()) {
                for (o, n) in out.iter_mut().zip(&p.counts) {
                    *o += n;
                }
            }
        }
        out
    }
}

fn census(sys: &RestrictedSystem) -> Option<Vec<Vec<u64>>> {
    let f = &sys.ring.field;
    let s = sys.basis.len();
    if s == 0 || projective_size(f.p(), s) > CENSUS_LIMIT {
        return None;
    }
    let ev = FpEvaluator::new(f, &sys.polys);
    let mut pts = Vec::new();
    for_each_projective_point(f.p(), s, |x| {
        if sys.polys.is_empty() || ev.all_vanish(x) {
            pts.push(x.to_vec());
        }
    });
    Some(pts)
}

fn leading_integer(h: &HilbertData) -> Option<i64> {
    let c = h.polynomial.integer_coeffs()?;
    c.last().copied()
}

fn saturated_hilbert(
    polys: &[SparsePoly<PrimeField>],
    seed: u64,
) -> Result<HilbertData, GeometryError> {
    let sat = saturate_by_linear_form(polys, seed, 2, GROEBNER_VARS)?;
    sat.hilbert
        .ok_or_else(|| GeometryError::Inconclusive("inhomogeneous restriction".into()))
}

fn empty_component(sys: &RestrictedSystem) -> EigenComponent {
    EigenComponent {
        eigenvalue: sys.label.clone(),
        eigenspace_dim: sys.eigenspace_dim,
        section_dim: sys.basis.len(),
        kind: LocusKind::Empty,
        dimension: -1,
        hilbert: None,
        census: None,
        points: None,
        curve: None,
        isolated: None,
        support: Vec::new(),
    }
}

/// Finds the linear span of a curve of degree `d` among the census points by
/// sampling spanning subsets.
fn recover_span(
    sys: &RestrictedSystem,
    pts: &[Vec<u64>],
    d: i64,
    rng: &mut ChaCha8Rng,
) -> Result<Option<Vec<Vec<u64>>>, GeometryError> {
    let f = &sys.ring.field;
    let s = sys.basis.len();
    for r in 1..s.saturating_sub(1) {
        if pts.len() < r + 1 {
            break;
        }
        for _ in 0..60 {
            let pick: Vec<Vec<u64>> = sample(rng, pts.len(), r + 1)
                .into_iter()
                .map(|i| pts[i].clone())
                .collect();
            let m = ExactMatrix::from_rows(f, pick.clone())?;
            if m.rank() != r + 1 {
                continue;
            }
            let (_, restricted) = substitute_basis(f, &sys.polys, &pick, "u");
            if restricted.is_empty() {
                continue;
            }
            let h = saturated_hilbert(&restricted, rng.gen())?;
            if h.projective_dim == 1 && leading_integer(&h) == Some(d) {
                return Ok(Some(pick));
            }
        }
    }
    Ok(None)
}

fn analyze(
    mut sys: RestrictedSystem,
    support: Vec<String>,
    seed: u64,
) -> Result<EigenComponent, GeometryError> {
    let mut comp = empty_component(&sys);
    comp.support = support;
    let s = sys.basis.len();
    if s == 0 {
        return Ok(comp);
    }
    let f = sys.ring.field.clone();
    let p = f.p();
    // Normalize the restricted system to a basis of its span.
    sys.polys = crate::grassmann::independent_subset(&sys.polys);
    if sys.polys.is_empty() {
        comp.kind = LocusKind::Linear;
        comp.dimension = s as i64 - 1;
        return Ok(comp);
    }
    let pts = census(&sys);
    comp.census = pts.as_ref().map(Vec::len);
    if s > GROEBNER_VARS {
        comp.kind = LocusKind::Unresolved;
        return Ok(comp);
    }
    let gb = buchberger_with_limit(&sys.polys, GROEBNER_VARS)?;
    if gb.hilbert.as_ref().is_some_and(|h| h.projective_dim < 0) {
        return Ok(comp);
    }
    let h = saturated_hilbert(&sys.polys, seed)?;
    comp.dimension = h.projective_dim;
    comp.hilbert = Some(h.polynomial.to_string());
    match h.projective_dim {
        d if d < 0 => comp.kind = LocusKind::Empty,
        0 => {
            let ps = solve_zero_dimensional(&sys.polys, seed, GROEBNER_VARS)?;
            comp.kind = LocusKind::Points;
            comp.points = Some(PointSummary::from_set(&ps, &sys));
        }
        1 => {
            comp.kind = LocusKind::Curve;
            let d = leading_integer(&h).ok_or_else(|| {
                GeometryError::Inconclusive("non-integral Hilbert polynomial".into())
            })?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let span = match &pts {
                Some(pts) => recover_span(&sys, pts, d, &mut rng)?,
                None => None,
            };
            let (curve_h, span_dim) = match &span {
                Some(l) => {
                    let (_, restricted) = substitute_basis(&f, &sys.polys, l, "u");
                    (saturated_hilbert(&restricted, seed)?, Some(l.len() - 1))
                }
                // No proper span: the curve is taken to fill the eigenspace.
                None => (h.clone(), if pts.is_some() { Some(s - 1) } else { None }),
            };
            let cc = curve_h.polynomial.integer_coeffs().unwrap_or_default();
            let genus = 1 - cc.first().copied().unwrap_or(0);
            if let Some(l) = &span {
                // Isolated points: saturate by a form vanishing on the span.
                let ann = ExactMatrix::from_rows(&f, l.clone())?.kernel_basis();
                let mut best: Option<PointSet> = None;
                for _ in 0..3 {
                    let coef: Vec<u64> = (0..ann.len()).map(|_| rng.gen_range(1..p)).collect();
                    let ell: Vec<u64> = (0..s)
                        .map(|i| {
                            (0..ann.len())
                                .fold(0, |acc, j| f.add(&acc, &f.mul(&coef[j], &ann[j][i])))
                        })
                        .collect();
                    let sat = saturate_by_form(&sys.polys, &ell, GROEBNER_VARS)?;
                    let ps = if sat.is_unit_ideal() {
                        PointSet {
                            p,
                            nvars: s,
                            classes: Vec::new(),
                        }
                    } else {
                        solve_zero_dimensional(&sat.basis, rng.gen(), GROEBNER_VARS)?
                    };
                    if best.as_ref().is_none_or(|b| ps.length() > b.length()) {
                        best = Some(ps);
                    }
                }
                comp.isolated = best.map(|ps| PointSummary::from_set(&ps, &sys));
            }
            let rational_points = pts
                .as_ref()
                .map(|v| v.len() - comp.isolated.as_ref().map_or(0, |i| i.counts[0]));
            let hasse_bound = rational_points.map(|n| {
                let dev = n as i64 - p as i64 - 1;
                (dev * dev) as u128 <= 4 * (genus.max(0) as u128).pow(2) * p as u128
            });
            comp.curve = Some(CurveSummary {
                degree: d,
                arithmetic_genus: genus,
                hilbert: curve_h.polynomial.to_string(),
                span_dim,
                rational_points,
                hasse_bound,
            });
        }
        _ => comp.kind = LocusKind::Higher,
    }
    Ok(comp)
}

/// Eigenspaces of `g` for the eigenvalues `ζ^j`, `ζ` a primitive `order`-th root of unity.
pub fn eigenspaces(
    g: &ExactMatrix<PrimeField>,
    order: u64,
) -> Result<Vec<(String, Vec<Vec<u64>>)>, GeometryError> {
    let f = g.field();
    let p = f.p();
    if (p - 1) % order != 0 {
        return Err(GeometryError::FieldLacksRoot { order, p });
    }
    let z = f.root_of_unity(order)?;
    let n = g.rows();
    let mut out = Vec::new();
    let mut total = 0;
    for j in 0..order {
        let e = f.pow(&z, j);
        let shifted = g.sub(&ExactMatrix::identity(f, n).scale(&e))?;
        let k = shifted.kernel_basis();
        total += k.len();
        let label = match (order, j) {
            (2, 0) => "+1".to_string(),
            (2, _) => "-1".to_string(),
            (_, 0) => "1".to_string(),
            (_, 1) => format!("zeta{order}"),
            _ => format!("zeta{order}^{j}"),
        };
        out.push((label, k));
    }
    if total != n {
        return Err(GeometryError::Inconclusive(format!(
            "element is not diagonalizable: eigenspaces of total dimension {total} < {n}"
        )));
    }
    Ok(out)
}

fn is_scalar(m: &ExactMatrix<PrimeField>) -> bool {
    let f = m.field();
    let c = *m.get(0, 0);
    !f.is_zero(&c) && *m == ExactMatrix::identity(f, m.rows()).scale(&c)
}

fn support_transcript(model: &VarietyModel<PrimeField>, basis: &[Vec<u64>]) -> Vec<String> {
    if !matches!(model.ambient, Ambient::Plucker { .. }) {
        return Vec::new();
    }
    let mut coords = Vec::new();
    for b in basis {
        let nz: Vec<usize> = (0..b.len()).filter(|&i| b[i] != 0).collect();
        if nz.len() != 1 {
            return Vec::new();
        }
        coords.push(nz[0]);
    }
    let ring = &model.ring;
    let images: Vec<SparsePoly<PrimeField>> = (0..ring.nvars())
        .map(|i| {
            if coords.contains(&i) {
                SparsePoly::var(ring, i)
            } else {
                SparsePoly::zero(ring)
            }
        })
        .collect();
    let mut lines = Vec::new();
    for q in &model.nonlinear {
        let r = q.substitute(ring, &images);
        if r.len() == 1 && r.variables().len() == 2 {
            let v = r.variables();
            lines.push(format!("{}*{}", ring.names[v[0]], ring.names[v[1]]));
        }
    }
    lines.sort();
    lines.dedup();
    lines
}

/// Fixed locus of the projective transformation `g` (model coordinates) of
/// finite order `order`, one component per eigenspace.
pub fn fixed_locus(
    model: &VarietyModel<PrimeField>,
    element: &str,
    g: &ExactMatrix<PrimeField>,
    order: u64,
    seed: u64,
) -> Result<FixedLocusSummary, GeometryError> {
    let f = model.field();
    let mut pw = ExactMatrix::identity(f, g.rows());
    for _ in 0..order {
        pw = pw.mul(g)?;
    }
    if !is_scalar(&pw) {
        return Err(if order == 2 {
            GeometryError::NotInvolution
        } else {
            GeometryError::Inconclusive(format!("{element} does not have order {order}"))
        });
    }
    let mut components = Vec::new();
    for (i, (label, basis)) in eigenspaces(g, order)?.into_iter().enumerate() {
        let support = support_transcript(model, &basis);
        let sys = restrict_to_subspace(model, &label, &basis)?;
        components.push(analyze(sys, support, seed.wrapping_add(i as u64))?);
    }
    Ok(FixedLocusSummary {
        element: element.into(),
        p: f.p(),
        order,
        components,
    })
}

/// [`fixed_locus`] for an involution.
pub fn fixed_locus_involution(
    model: &VarietyModel<PrimeField>,
    element: &str,
    g: &ExactMatrix<PrimeField>,
    seed: u64,
) -> Result<FixedLocusSummary, GeometryError> {
    let f = model.field();
    let sq = g.mul(g)?;
    if !is_scalar(&sq) || is_scalar(g) {
        return Err(GeometryError::NotInvolution);
    }
    if f.p() == 2 {
        return Err(GeometryError::FieldLacksRoot { order: 2, p: 2 });
    }
    fixed_locus(model, element, g, 2, seed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeActionCertificate {
    pub model: String,
    pub p: u64,
    pub elements: Vec<FixedLocusSummary>,
    pub free: bool,
}

/// The action is free when every listed element has empty fixed locus.
pub fn certify_free_action(
    model: &VarietyModel<PrimeField>,
    elements: &[(String, ExactMatrix<PrimeField>, u64)],
    seed: u64,
) -> Result<FreeActionCertificate, GeometryError> {
    let mut out = Vec::new();
    for (name, g, order) in elements {
        out.push(fixed_locus(model, name, g, *order, seed)?);
    }
    let free = out.iter().all(|s| s.is_empty());
    Ok(FreeActionCertificate {
        model: model.name.clone(),
        p: model.field().p(),
        elements: out,
        free,
    })
}
