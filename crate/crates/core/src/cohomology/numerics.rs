use serde::Serialize;

use super::bott::WeightedBundle;
use super::hodge::{restricted_cohomology, HodgeDiamond, NumericalInvariants, ZeroLocus};
use super::CohomologyError;
use crate::exactfield::{ExactMatrix, Field};
use crate::geometry::skew_forms;
use crate::models::VarietyModel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeformationReport {
    pub dim: i64,
    /// `h^i(T_G|_X)` for `i = 0, 1, 2`.
    pub tangent_restricted: [i64; 3],
    /// `h^i(N_X)`, `N_X = O_X(1)^r`.
    pub normal: [i64; 3],
    /// Rank of `H^0(T_G|_X) → H^0(N_X)`.
    pub normal_map_rank: i64,
    /// True when the rank was not supplied and injectivity was assumed.
    pub rank_assumed: bool,
    pub h0: i64,
    pub h1: i64,
    pub h2: i64,
}

fn degrees(m: &std::collections::BTreeMap<i64, i64>) -> [i64; 3] {
    [0, 1, 2].map(|i| m.get(&i).copied().unwrap_or(0))
}

/// `h^i(T_X)` of a linear section from `0 → T_X → T_G|_X → O_X(1)^r → 0`.
pub fn deformation_number(
    x: &ZeroLocus,
    normal_map_rank: Option<i64>,
) -> Result<DeformationReport, CohomologyError> {
    if x.quotient {
        return Err(CohomologyError::BadWeight(
            "deformations are computed for linear sections only".into(),
        ));
    }
    let r = x.linear as i64;
    let tg = degrees(&restricted_cohomology(
        x,
        &WeightedBundle::tangent(x.k, x.n),
    )?);
    let o1 = degrees(&restricted_cohomology(
        x,
        &WeightedBundle::line(x.k, x.n, 1),
    )?);
    let normal = o1.map(|h| h * r);
    let rank = normal_map_rank.unwrap_or(tg[0]);
    if rank > tg[0].min(normal[0]) {
        return Err(CohomologyError::BadRange {
            p: rank as usize,
            dim: tg[0].min(normal[0]) as usize,
        });
    }
    if normal[1] != 0 {
        return Err(CohomologyError::AmbiguousExtension(
            "H^1(N) is nonzero".into(),
        ));
    }
    let h0 = tg[0] - rank;
    let h1 = normal[0] - rank + tg[1];
    let h2 = if normal[2] == 0 {
        tg[2]
    } else if x.dim() == 2 {
        // H^3(T_X) = 0 forces H^2(T_G|_X) → H^2(N) onto
        if tg[2] < normal[2] {
            return Err(CohomologyError::AmbiguousExtension(
                "H^2(T_G|X) is smaller than H^2(N)".into(),
            ));
        }
        tg[2] - normal[2]
    } else {
        return Err(CohomologyError::AmbiguousExtension(
            "rank of H^2(T_G|X) → H^2(N) undetermined".into(),
        ));
    };
    Ok(DeformationReport {
        dim: x.dim(),
        tangent_restricted: tg,
        normal,
        normal_map_rank: rank,
        rank_assumed: normal_map_rank.is_none(),
        h0,
        h1,
        h2,
    })
}

/// Rank of `gl(V) → ⊕_k ∧²V*/Σ`, `A ↦ (AᵀΩ_k + Ω_k A)_k`: the infinitesimal
/// action on the linear system, which is `H^0(T_G|_X) → H^0(N_X)`.
pub fn normal_map_rank<F: Field>(model: &VarietyModel<F>) -> Result<i64, CohomologyError> {
    let forms = skew_forms(model)?;
    let f = model.field();
    let n = forms
        .first()
        .map(|m| m.rows())
        .ok_or(CohomologyError::BadRange { p: 0, dim: 0 })?;
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let flat = |m: &ExactMatrix<F>| {
        pairs
            .iter()
            .map(|&(i, j)| m.get(i, j).clone())
            .collect::<Vec<_>>()
    };
    let r = forms.len();
    let width = r * pairs.len();
    let mut rows = Vec::new();
    let sigma: Vec<Vec<F::Elem>> = forms.iter().map(flat).collect();
    for k in 0..r {
        for s in &sigma {
            let mut row = vec![f.zero(); width];
            row[k * pairs.len()..(k + 1) * pairs.len()].clone_from_slice(s);
            rows.push(row);
        }
    }
    let base = ExactMatrix::from_rows(f, rows.clone())?.rank();
    for a in 0..n {
        for b in 0..n {
            let mut e = ExactMatrix::zeros(f, n, n);
            e.set(a, b, f.one());
            let mut row = Vec::with_capacity(width);
            for om in &forms {
                let d = e.transpose().mul(om)?.add(&om.mul(&e)?)?;
                row.extend(flat(&d));
            }
            rows.push(row);
        }
    }
    let total = ExactMatrix::from_rows(f, rows)?.rank();
    Ok((total - base) as i64)
}

/// Expected number of moduli `10χ(O) - 2K²` of a surface.
pub fn expected_moduli(chi_o: i64, k_squared: i64) -> i64 {
    10 * chi_o - 2 * k_squared
}

fn divide(what: &str, value: i64, order: i64) -> Result<i64, CohomologyError> {
    if value % order != 0 {
        return Err(CohomologyError::NotDivisible {
            what: what.into(),
            value,
            order,
        });
    }
    Ok(value / order)
}

/// Invariants of the quotient by a free action of a group of order `order`.
/// Surfaces keep `q = 0`; threefolds take `h^{1,1}` of the quotient as input
/// and keep `h^{p,0}`.
pub fn quotient_invariants(
    inv: &NumericalInvariants,
    order: i64,
    free: bool,
    h11_quotient: Option<i64>,
) -> Result<NumericalInvariants, CohomologyError> {
    if !free {
        return Err(CohomologyError::NotFree);
    }
    let e = divide("topological Euler characteristic", inv.e_top, order)?;
    let k_power = inv.k_power.map(|k| divide("K^dim", k, order)).transpose()?;
    let label = format!("{} / {order}", inv.label);
    match inv.dim {
        2 => {
            if inv.q() != 0 {
                return Err(CohomologyError::BadWeight("irregular surface".into()));
            }
            let chi = divide("holomorphic Euler characteristic", inv.chi_o, order)?;
            let pg = chi - 1;
            let h11 = e - 2 - 2 * pg;
            let diamond = HodgeDiamond {
                dim: 2,
                h: vec![vec![1, 0, pg], vec![0, h11, 0], vec![pg, 0, 1]],
            };
            let mut out = NumericalInvariants::from_diamond(label, diamond, k_power);
            if out.k_power.is_none() {
                out.k_power = Some(12 * chi - e);
            }
            Ok(out)
        }
        3 => {
            let h11 = h11_quotient.unwrap_or(1);
            let odd = inv.h(1, 0) + inv.h(2, 0);
            if odd != 0 || e % 2 != 0 {
                return Err(CohomologyError::NotDivisible {
                    what: "χ/2".into(),
                    value: e,
                    order: 2,
                });
            }
            let h12 = h11 - e / 2;
            let mut h = inv.diamond.h.clone();
            h[1][1] = h11;
            h[2][2] = h11;
            for (p, q) in [(1, 2), (2, 1)] {
                h[p][q] = h12;
            }
            let diamond = HodgeDiamond { dim: 3, h };
            let out = NumericalInvariants::from_diamond(label, diamond, k_power);
            if out.e_top != e {
                return Err(CohomologyError::NotDivisible {
                    what: "diamond Euler number".into(),
                    value: out.e_top,
                    order,
                });
            }
            Ok(out)
        }
        d => Err(CohomologyError::BadRange { p: d, dim: 3 }),
    }
}

/// A fixed curve `C` plus isolated fixed points of an involution on a surface.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedDatum {
    pub c_squared: i64,
    pub k_dot_c: i64,
    pub chi_oc: i64,
    pub isolated_points: i64,
}

impl FixedDatum {
    /// `C²` from adjunction `K·C + C² + 2χ(O_C) = 0`.
    pub fn from_adjunction(k_dot_c: i64, chi_oc: i64, isolated_points: i64) -> Self {
        FixedDatum {
            c_squared: -k_dot_c - 2 * chi_oc,
            k_dot_c,
            chi_oc,
            isolated_points,
        }
    }

    pub fn adjunction_defect(&self) -> i64 {
        self.k_dot_c + self.c_squared + 2 * self.chi_oc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvolutionQuotient {
    pub k_squared: i64,
    pub e_top: i64,
    /// Minimal resolution of the nodes coming from the isolated points.
    pub resolution_e_top: i64,
    pub resolution_k_squared: i64,
    pub resolution_chi_o: i64,
    /// `(p_g, q)` of the resolution with `q` inherited from the cover.
    pub resolution_pg_q: (i64, i64),
}

/// `K²_Σ = (K² + C² - 2K·C)/2`, `e(Σ) = (e + e(Fix))/2` with
/// `e(Fix) = 2χ(O_C) + #points`; each node adds 1 to `e` on resolving.
pub fn involution_quotient(
    inv: &NumericalInvariants,
    fix: &FixedDatum,
) -> Result<InvolutionQuotient, CohomologyError> {
    if fix.adjunction_defect() != 0 {
        return Err(CohomologyError::AdjunctionViolated {
            defect: fix.adjunction_defect(),
        });
    }
    let k2 = inv
        .k_power
        .ok_or_else(|| CohomologyError::BadWeight("K² unknown".into()))?;
    let k_squared = divide("K² + C² - 2K·C", k2 + fix.c_squared - 2 * fix.k_dot_c, 2)?;
    let e_top = divide(
        "e + e(Fix)",
        inv.e_top + 2 * fix.chi_oc + fix.isolated_points,
        2,
    )?;
    let resolution_e_top = e_top + fix.isolated_points;
    let chi = divide("K² + e of the resolution", k_squared + resolution_e_top, 12)?;
    let q = inv.q();
    Ok(InvolutionQuotient {
        k_squared,
        e_top,
        resolution_e_top,
        resolution_k_squared: k_squared,
        resolution_chi_o: chi,
        resolution_pg_q: (chi - 1 + q, q),
    })
}

/// Invariants of a smooth surface with `ω = O(t)`, `t ≥ 0`, from the Hilbert
/// data of an arithmetically Cohen–Macaulay embedding: `K² = t²·deg`,
/// `χ(O) = P(0)`, `p_g = h_S(t)`.
pub fn surface_from_hilbert(
    label: impl Into<String>,
    h: &crate::polyring::HilbertData,
    canonical_twist: i64,
) -> Result<NumericalInvariants, CohomologyError> {
    if h.projective_dim != 2 || canonical_twist < 0 {
        return Err(CohomologyError::BadRange {
            p: h.projective_dim.max(0) as usize,
            dim: 2,
        });
    }
    let chi = h
        .polynomial
        .integer_coeffs()
        .and_then(|c| c.first().copied())
        .unwrap_or(0);
    let k2 = canonical_twist * canonical_twist * h.degree;
    let pg = h.hilbert_function(canonical_twist);
    let q = 1 + pg - chi;
    let e = 12 * chi - k2;
    let h11 = e - 2 + 4 * q - 2 * pg;
    let diamond = HodgeDiamond {
        dim: 2,
        h: vec![vec![1, q, pg], vec![q, h11, q], vec![pg, q, 1]],
    };
    Ok(NumericalInvariants::from_diamond(label, diamond, Some(k2)))
}
