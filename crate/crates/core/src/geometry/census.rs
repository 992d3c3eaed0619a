use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{skew_forms, GeometryError};
use crate::exactfield::{ExactMatrix, Field, PrimeField};
use crate::grassmann::{chart_pullback, ChartData, GrassmannianSpec};
use crate::models::{Ambient, VarietyModel};
use crate::polyring::SparsePoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Smooth,
    Singular,
    /// Jacobian rank above the codimension: the model is not of the expected dimension here.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub point: Vec<String>,
    /// Pivot columns of the chart used, empty for coordinate models.
    pub chart: Vec<usize>,
    pub jacobian_rank: usize,
    pub expected_rank: usize,
    pub verdict: Verdict,
}

fn verdict(rank: usize, expected: usize) -> Verdict {
    match rank.cmp(&expected) {
        std::cmp::Ordering::Equal => Verdict::Smooth,
        std::cmp::Ordering::Less => Verdict::Singular,
        std::cmp::Ordering::Greater => Verdict::Inconclusive,
    }
}

fn jacobian_rank<F: Field>(
    polys: &[SparsePoly<F>],
    point: &[F::Elem],
) -> Result<usize, GeometryError> {
    Ok(crate::polyring::jacobian_rank_at(polys, point)?)
}

/// Smoothness at `point` by the Jacobian criterion: in an affine chart of
/// the Grassmannian for Plücker models, in the affine cone otherwise.
pub fn smooth_at<F: Field>(
    model: &VarietyModel<F>,
    point: &[F::Elem],
) -> Result<SmoothnessCertificate, GeometryError> {
    let f = model.field();
    if point.len() != model.nvars() || !model.contains(point)? {
        return Err(GeometryError::PointNotOnModel);
    }
    let first = point
        .iter()
        .position(|c| !f.is_zero(c))
        .ok_or(GeometryError::NoChartContains)?;
    let shown = point.iter().map(|c| f.format(c)).collect();
    match model.ambient {
        Ambient::Plucker { k, n, codim } => {
            let spec = GrassmannianSpec::new(f, k, n)?;
            let chart = ChartData::new(&spec, &spec.space.basis[first].0)?;
            let local = chart
                .coordinates(&spec, point)
                .map_err(|_| GeometryError::NoChartContains)?;
            let pulled: Vec<SparsePoly<F>> = chart_pullback(&chart, &model.equations())
                .into_iter()
                .filter(|p| !p.is_zero())
                .collect();
            let rank = jacobian_rank(&pulled, &local)?;
            Ok(SmoothnessCertificate {
                point: shown,
                chart: chart.pivots.clone(),
                jacobian_rank: rank,
                expected_rank: codim,
                verdict: verdict(rank, codim),
            })
        }
        Ambient::Coordinates { .. } => {
            let expected = model.expected_codim();
            let rank = jacobian_rank(&model.equations(), point)?;
            Ok(SmoothnessCertificate {
                point: shown,
                chart: Vec::new(),
                jacobian_rank: rank,
                expected_rank: expected,
                verdict: verdict(rank, expected),
            })
        }
    }
}

/// Type of a singular point whose Jacobian has corank one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub jacobian_rank: usize,
    pub expected_rank: usize,
    /// Rank of the Hessian of the dependent combination on the tangent space.
    pub hessian_rank: Option<usize>,
    pub tangent_dim: usize,
    pub node: bool,
}

/// Local equations at `point`: chart pullbacks for Plücker models, the
/// dehomogenization at the first nonzero coordinate otherwise.
fn local_equations<F: Field>(
    model: &VarietyModel<F>,
    point: &[F::Elem],
) -> Result<(Vec<SparsePoly<F>>, Vec<F::Elem>, usize), GeometryError> {
    let f = model.field();
    let first = point
        .iter()
        .position(|c| !f.is_zero(c))
        .ok_or(GeometryError::NoChartContains)?;
    match model.ambient {
        Ambient::Plucker { k, n, codim } => {
            let spec = GrassmannianSpec::new(f, k, n)?;
            let chart = ChartData::new(&spec, &spec.space.basis[first].0)?;
            let local = chart.coordinates(&spec, point)?;
            let pulled = chart_pullback(&chart, &model.equations())
                .into_iter()
                .filter(|p| !p.is_zero())
                .collect();
            Ok((pulled, local, codim))
        }
        Ambient::Coordinates { .. } => {
            let n = model.nvars();
            let ring = crate::polyring::PolyRing::new(
                f,
                (0..n)
                    .filter(|&i| i != first)
                    .map(|i| model.ring.names[i].clone())
                    .collect(),
            );
            let mut images = Vec::with_capacity(n);
            let mut j = 0;
            for i in 0..n {
                if i == first {
                    images.push(SparsePoly::one(&ring));
                } else {
                    images.push(SparsePoly::var(&ring, j));
                    j += 1;
                }
            }
            let inv = f.inv(&point[first]).unwrap();
            let local = (0..n)
                .filter(|&i| i != first)
                .map(|i| f.mul(&point[i], &inv))
                .collect();
            let eqs = model
                .equations()
                .iter()
                .map(|p| p.substitute(&ring, &images))
                .filter(|p| !p.is_zero())
                .collect();
            Ok((eqs, local, model.expected_codim()))
        }
    }
}

/// Whether a singular point is an ordinary double point: Jacobian of corank
/// one and nondegenerate Hessian of the dependent combination on the
/// tangent space of the other equations.
pub fn classify_singularity<F: Field>(
    model: &VarietyModel<F>,
    point: &[F::Elem],
) -> Result<SingularityReport, GeometryError> {
    let f = model.field();
    if !model.contains(point)? {
        return Err(GeometryError::PointNotOnModel);
    }
    let (eqs, local, codim) = local_equations(model, point)?;
    let nv = local.len();
    let mut jac = ExactMatrix::zeros(f, eqs.len(), nv);
    for (r, e) in eqs.iter().enumerate() {
        for v in 0..nv {
            jac.set(r, v, e.derivative(v).eval(&local)?);
        }
    }
    let rank = jac.rank();
    let tangent = jac.kernel_basis();
    let mut report = SingularityReport {
        jacobian_rank: rank,
        expected_rank: codim,
        hessian_rank: None,
        tangent_dim: tangent.len(),
        node: false,
    };
    // The Hessian test needs a complete intersection presentation.
    if rank + 1 != codim || eqs.len() != codim {
        return Ok(report);
    }
    let lambdas = jac.transpose().kernel_basis();
    let mut best: Option<usize> = None;
    for lam in &lambdas {
        let h = eqs
            .iter()
            .zip(lam)
            .fold(SparsePoly::zero(eqs[0].ring()), |acc, (g, c)| {
                acc.add(&g.scale(c))
            });
        let mut hess = ExactMatrix::zeros(f, nv, nv);
        for a in 0..nv {
            let da = h.derivative(a);
            for b in 0..nv {
                hess.set(a, b, da.derivative(b).eval(&local)?);
            }
        }
        let t = ExactMatrix::from_rows(f, tangent.clone())?;
        let restricted = t.mul(&hess)?.mul(&t.transpose())?;
        let r = restricted.rank();
        best = Some(best.map_or(r, |b: usize| b.max(r)));
    }
    report.hessian_rank = best;
    // Tangent space of the surface cone has dimension dim + 1 in the chart.
    let surface_tangent = nv - codim;
    report.node = best == Some(surface_tangent + 1) && tangent.len() == surface_tangent + 1;
    Ok(report)
}

/// All `F_p`-rational points of a linear section of `Gr(2,n)`, found by
/// running over `a ∈ P^{n-1}(F_p)` and reading off the planes through `a`
/// from the kernel of the rows `aᵀ Ω_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaneCensus {
    pub p: u64,
    pub vectors: u64,
    /// Vectors lying on more than one plane of the section.
    pub multiple: u64,
    /// Normalized Plücker vectors, sorted.
    pub planes: Vec<Vec<u64>>,
}

impl PlaneCensus {
    pub fn count(&self) -> usize {
        self.planes.len()
    }
}

fn mod_kernel(p: u64, rows: &mut [Vec<u64>], n: usize) -> Vec<Vec<u64>> {
    let inv = |a: u64| -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % p, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let s = inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = *x * s % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let t = rows[i][c];
                for j in 0..n {
                    rows[i][j] = (rows[i][j] + (p - t) * rows[r][j]) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![0u64; n];
            v[fc] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - rows[row][fc]) % p;
            }
            v
        })
        .collect()
}

fn wedge(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let n = a.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push((a[i] * b[j] % p + p - a[j] * b[i] % p) % p);
        }
    }
    let f = PrimeField::new(p).expect("prime");
    f.normalize_projective(&mut out);
    out
}

/// Every vector of `F_p^d`, zero included.
fn for_each_vector(p: u64, d: usize, mut visit: impl FnMut(&[u64])) {
    let mut v = vec![0u64; d];
    loop {
        visit(&v);
        let mut i = 0;
        loop {
            if i == d {
                return;
            }
            v[i] += 1;
            if v[i] < p {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

pub fn plane_census(model: &VarietyModel<PrimeField>) -> Result<PlaneCensus, GeometryError> {
    let Ambient::Plucker { k: 2, n, .. } = model.ambient else {
        return Err(GeometryError::NotLinearSection(model.name.clone()));
    };
    let f = model.field().clone();
    let spec = GrassmannianSpec::new(&f, 2, n)?;
    if model.nonlinear.len() != spec.quadrics.len() {
        return Err(GeometryError::NotLinearSection(format!(
            "{} has extra equations",
            model.name
        )));
    }
    let p = f.p();
    let forms: Vec<Vec<Vec<u64>>> = skew_forms(model)?
        .iter()
        .map(|m| (0..n).map(|i| m.row(i).to_vec()).collect())
        .collect();
    if forms.is_empty() {
        return Err(GeometryError::EmptySystem);
    }
    // One task per (leading position, value of the next coordinate).
    let tasks: Vec<(usize, u64)> = (0..n)
        .flat_map(|lead| (0..if lead + 1 < n { p } else { 1 }).map(move |v| (lead, v)))
        .collect();
    let parts: Vec<(BTreeSet<Vec<u64>>, u64, u64)> = tasks
        .par_iter()
        .map(|&(lead, second)| {
            let mut found = BTreeSet::new();
            let mut count = 0u64;
            let mut multiple = 0u64;
            let free = n.saturating_sub(lead + 2);
            let mut a = vec![0u64; n];
            a[lead] = 1;
            if lead + 1 < n {
                a[lead + 1] = second;
            }
            for_each_vector(p, free, |rest| {
                a[(lead + 2).min(n)..].copy_from_slice(rest);
                count += 1;
                let mut rows: Vec<Vec<u64>> = forms
                    .iter()
                    .map(|om| {
                        (0..n)
                            .map(|j| (0..n).fold(0u64, |acc, i| (acc + a[i] * om[i][j]) % p))
                            .collect()
                    })
                    .collect();
                let ker = mod_kernel(p, &mut rows, n);
                if ker.len() < 2 {
                    return;
                }
                if ker.len() > 2 {
                    multiple += 1;
                }
                // Planes ⟨a, b⟩ with b running over P(ker); each appears p+1 times at most.
                let d = ker.len();
                for_each_vector(p, d, |coef| {
                    let b: Vec<u64> = (0..n)
                        .map(|i| (0..d).fold(0u64, |acc, t| (acc + coef[t] * ker[t][i]) % p))
                        .collect();
                    let w = wedge(p, &a, &b);
                    if w.iter().any(|&x| x != 0) {
                        found.insert(w);
                    }
                });
            });
            (found, count, multiple)
        })
        .collect();
    let mut planes = BTreeSet::new();
    let mut vectors = 0;
    let mut multiple = 0;
    for (s, c, m) in parts {
        planes.extend(s);
        vectors += c;
        multiple += m;
    }
    Ok(PlaneCensus {
        p,
        vectors,
        multiple,
        planes: planes.into_iter().collect(),
    })
}

/// Planes of a census at which the model is singular, with their certificates.
pub fn singular_planes(
    model: &VarietyModel<PrimeField>,
    census: &PlaneCensus,
) -> Result<Vec<SmoothnessCertificate>, GeometryError> {
    let Ambient::Plucker { k, n, codim } = model.ambient else {
        return Err(GeometryError::NotLinearSection(model.name.clone()));
    };
    let f = model.field();
    let spec = GrassmannianSpec::new(f, k, n)?;
    let eqs = model.equations();
    let mut charts: HashMap<usize, (ChartData<PrimeField>, Vec<SparsePoly<PrimeField>>)> =
        HashMap::new();
    let mut out = Vec::new();
    for pt in &census.planes {
        let first = pt
            .iter()
            .position(|&c| c != 0)
            .ok_or(GeometryError::NoChartContains)?;
        if !charts.contains_key(&first) {
            let chart = ChartData::new(&spec, &spec.space.basis[first].0)?;
            let pulled = chart_pullback(&chart, &eqs)
                .into_iter()
                .filter(|p| !p.is_zero())
                .collect();
            charts.insert(first, (chart, pulled));
        }
        let (chart, pulled) = &charts[&first];
        let local = chart.coordinates(&spec, pt)?;
        let rank = jacobian_rank(pulled, &local)?;
        if rank < codim {
            out.push(SmoothnessCertificate {
                point: pt.iter().map(|c| c.to_string()).collect(),
                chart: chart.pivots.clone(),
                jacobian_rank: rank,
                expected_rank: codim,
                verdict: Verdict::Singular,
            });
        }
    }
    Ok(out)
}
