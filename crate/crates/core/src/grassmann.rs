//! Plücker embeddings of `Gr(2,n)` (n = 4..7) and `Gr(3,6)`: quadrics,
//! decomposable points, affine charts and Hilbert series.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exactfield::{ExactMatrix, Field, FieldError};
use crate::multilinear::{wedge_of_rows, MultilinearError, TensorVector, WedgeIndex, WedgeSpace};
use crate::polyring::{
    coefficient_matrix, subsets, HilbertData, Monomial, PolyError, PolyRing, SkewMatrix, SparsePoly,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrassmannError {
    #[error("Gr({0},{1}) is not supported")]
    Unsupported(usize, usize),
    #[error("matrix does not have full rank")]
    RankDeficient,
    #[error("pivot set {0:?} is not a valid chart")]
    BadPivots(Vec<usize>),
    #[error("no chart contains the point")]
    NoChartContains,
    #[error("Hilbert series fit failed: {0}")]
    FitFailed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Multilinear(#[from] MultilinearError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub const SUPPORTED: [(usize, usize); 5] = [(2, 4), (2, 5), (2, 6), (2, 7), (3, 6)];

/// A Grassmannian in its Plücker embedding.
#[derive(Debug, Clone)]
pub struct GrassmannianSpec<F: Field> {
    pub k: usize,
    pub n: usize,
    pub space: WedgeSpace,
    pub ring: Arc<PolyRing<F>>,
    pub quadrics: Vec<SparsePoly<F>>,
}

impl<F: Field> GrassmannianSpec<F> {
    pub fn new(field: &F, k: usize, n: usize) -> Result<Self, GrassmannError> {
        let ring = plucker_ring(field, k, n)?;
        let quadrics = plucker_ideal(&ring, k, n)?;
        Ok(GrassmannianSpec {
            k,
            n,
            space: WedgeSpace::new(k, n)?,
            ring,
            quadrics,
        })
    }

    pub fn dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    /// Projective dimension of the Plücker space.
    pub fn ambient_dim(&self) -> usize {
        self.space.dim() - 1
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn var(&self, idx: &[usize]) -> SparsePoly<F> {
        let w = WedgeIndex(idx.to_vec());
        SparsePoly::var(
            &self.ring,
            self.space.position(&w).expect("sorted index in range"),
        )
    }

    /// Plücker coordinate of an unsorted index tuple, with its sign.
    pub fn signed_var(&self, idx: &[usize]) -> Option<SparsePoly<F>> {
        let (s, pos) = self.space.signed_position(idx)?;
        let v = SparsePoly::var(&self.ring, pos);
        Some(if s < 0 { v.neg() } else { v })
    }

    pub fn contains(&self, point: &[F::Elem]) -> Result<bool, GrassmannError> {
        let f = self.field();
        for q in &self.quadrics {
            if !f.is_zero(&q.eval(point)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn check_supported(k: usize, n: usize) -> Result<(), GrassmannError> {
    if SUPPORTED.contains(&(k, n)) {
        Ok(())
    } else {
        Err(GrassmannError::Unsupported(k, n))
    }
}

/// Polynomial ring on the Plücker coordinates, named `x_1_2`, `x_1_2_3`, ...
pub fn plucker_ring<F: Field>(
    field: &F,
    k: usize,
    n: usize,
) -> Result<Arc<PolyRing<F>>, GrassmannError> {
    check_supported(k, n)?;
    Ok(PolyRing::new(field, WedgeSpace::new(k, n)?.labels()))
}

/// Plücker quadrics. For `k = 2` these are the 4×4 sub-Pfaffians of the
/// generic skew matrix; for `Gr(3,6)` a basis of the span of the quadratic
/// shuffle relations, chosen greedily in lexicographic order.
pub fn plucker_ideal<F: Field>(
    ring: &Arc<PolyRing<F>>,
    k: usize,
    n: usize,
) -> Result<Vec<SparsePoly<F>>, GrassmannError> {
    check_supported(k, n)?;
    if k == 2 {
        let m = SkewMatrix::generic(ring, n, |i, j| WedgeIndex(vec![i, j]).label());
        return Ok(m.sub_pfaffians(4)?);
    }
    let rels = shuffle_relations(ring, k, n)?;
    Ok(independent_subset(&rels))
}

/// All relations `Σ_l (-1)^l x_{I ∪ j_l} x_{J \ j_l}` for `|I| = k-1`, `|J| = k+1`.
pub fn shuffle_relations<F: Field>(
    ring: &Arc<PolyRing<F>>,
    k: usize,
    n: usize,
) -> Result<Vec<SparsePoly<F>>, GrassmannError> {
    check_supported(k, n)?;
    let space = WedgeSpace::new(k, n)?;
    let f = &ring.field;
    let mut out = Vec::new();
    for i_set in subsets(n, k - 1) {
        for j_set in subsets(n, k + 1) {
            let mut terms: Vec<(Monomial, F::Elem)> = Vec::new();
            for l in 0..=k {
                let mut a: Vec<usize> = i_set.iter().map(|x| x + 1).collect();
                a.push(j_set[l] + 1);
                let b: Vec<usize> = j_set
                    .iter()
                    .enumerate()
                    .filter(|&(m, _)| m != l)
                    .map(|(_, x)| x + 1)
                    .collect();
                let (Some((sa, pa)), Some((sb, pb))) =
                    (space.signed_position(&a), space.signed_position(&b))
                else {
                    continue;
                };
                let sign = if l % 2 == 0 { 1 } else { -1 } * sa * sb;
                terms.push((
                    Monomial::var(pa).mul(&Monomial::var(pb)),
                    f.from_i64(sign as i64),
                ));
            }
            let p = SparsePoly::from_terms(ring, terms);
            if !p.is_zero() {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Greedy maximal linearly independent subset, in input order.
pub fn independent_subset<F: Field>(polys: &[SparsePoly<F>]) -> Vec<SparsePoly<F>> {
    let mut kept: Vec<SparsePoly<F>> = Vec::new();
    let mut rank = 0;
    for p in polys {
        let mut trial = kept.clone();
        trial.push(p.clone());
        let r = coefficient_matrix(&trial).0.rank();
        if r > rank {
            rank = r;
            kept = trial;
        }
    }
    kept
}

/// Plücker vector of the row space of a `k × n` matrix.
pub fn plucker_point<F: Field>(plane: &ExactMatrix<F>) -> Result<TensorVector<F>, GrassmannError> {
    let space = WedgeSpace::new(plane.rows(), plane.cols())?;
    let v = wedge_of_rows(plane)?;
    let t = TensorVector::from_dense(plane.field(), &space, &v);
    if t.is_zero() {
        return Err(GrassmannError::RankDeficient);
    }
    Ok(t)
}

/// Affine chart `x_P ≠ 0`: the plane is the row space of a matrix with the
/// identity in the pivot columns and free parameters `a_r_c` elsewhere.
#[derive(Debug, Clone)]
pub struct ChartData<F: Field> {
    /// 1-based pivot columns.
    pub pivots: Vec<usize>,
    pub params: Arc<PolyRing<F>>,
    /// Free-parameter positions `(row, column)` in parameter order (1-based column).
    pub slots: Vec<(usize, usize)>,
    /// One polynomial per Plücker coordinate.
    pub substitution: Vec<SparsePoly<F>>,
}

impl<F: Field> ChartData<F> {
    pub fn new(spec: &GrassmannianSpec<F>, pivots: &[usize]) -> Result<Self, GrassmannError> {
        let (k, n) = (spec.k, spec.n);
        let mut piv = pivots.to_vec();
        piv.sort_unstable();
        piv.dedup();
        if piv.len() != k || piv.iter().any(|&p| p == 0 || p > n) {
            return Err(GrassmannError::BadPivots(pivots.to_vec()));
        }
        let mut slots = Vec::new();
        let mut names = Vec::new();
        for r in 0..k {
            for c in 1..=n {
                if !piv.contains(&c) {
                    slots.push((r, c));
                    names.push(format!("a_{}_{}", r + 1, c));
                }
            }
        }
        let params = PolyRing::new(spec.field(), names);
        let f = spec.field();
        // Symbolic matrix entries.
        let entry = |r: usize, c: usize| -> SparsePoly<F> {
            if let Some(pos) = piv.iter().position(|&p| p == c) {
                if pos == r {
                    SparsePoly::one(&params)
                } else {
                    SparsePoly::zero(&params)
                }
            } else {
                let idx = slots.iter().position(|&s| s == (r, c)).unwrap();
                SparsePoly::var(&params, idx)
            }
        };
        let substitution = spec
            .space
            .basis
            .iter()
            .map(|w| {
                let cols = &w.0;
                let m: Vec<Vec<SparsePoly<F>>> = (0..k)
                    .map(|r| cols.iter().map(|&c| entry(r, c)).collect())
                    .collect();
                symbolic_det(&m, f, &params)
            })
            .collect();
        Ok(ChartData {
            pivots: piv,
            params,
            slots,
            substitution,
        })
    }

    /// Chart coordinates of a point with `x_P ≠ 0`.
    pub fn coordinates(
        &self,
        spec: &GrassmannianSpec<F>,
        point: &[F::Elem],
    ) -> Result<Vec<F::Elem>, GrassmannError> {
        let f = spec.field();
        let p0 = spec
            .space
            .position(&WedgeIndex(self.pivots.clone()))
            .unwrap();
        let inv = f.inv(&point[p0]).ok_or(GrassmannError::NoChartContains)?;
        Ok(self
            .slots
            .iter()
            .map(|&(r, c)| {
                let mut idx = self.pivots.clone();
                idx[r] = c;
                let (s, pos) = spec.space.signed_position(&idx).unwrap();
                let v = f.mul(&point[pos], &inv);
                if s < 0 {
                    f.neg(&v)
                } else {
                    v
                }
            })
            .collect())
    }
}

fn symbolic_det<F: Field>(
    m: &[Vec<SparsePoly<F>>],
    f: &F,
    ring: &Arc<PolyRing<F>>,
) -> SparsePoly<F> {
    let k = m.len();
    if k == 1 {
        return m[0][0].clone();
    }
    let mut total = SparsePoly::zero(ring);
    for c in 0..k {
        if m[0][c].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SparsePoly<F>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != c)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let t = m[0][c].mul(&symbolic_det(&minor, f, ring));
        total = if c % 2 == 0 {
            total.add(&t)
        } else {
            total.sub(&t)
        };
    }
    total
}

/// Pulls polynomials in Plücker coordinates back to the chart.
pub fn chart_pullback<F: Field>(
    chart: &ChartData<F>,
    polys: &[SparsePoly<F>],
) -> Vec<SparsePoly<F>> {
    polys
        .iter()
        .map(|p| p.substitute(&chart.params, &chart.substitution))
        .collect()
}

/// Chart `x_P ≠ 0` with `P` the lexicographically first nonzero coordinate.
pub fn chart_containing<F: Field>(
    spec: &GrassmannianSpec<F>,
    point: &[F::Elem],
) -> Result<ChartData<F>, GrassmannError> {
    let f = spec.field();
    let pos = point
        .iter()
        .position(|c| !f.is_zero(c))
        .ok_or(GrassmannError::NoChartContains)?;
    ChartData::new(spec, &spec.space.basis[pos].0)
}

/// `dim H^0(Gr(k,n), O(d))` by the Weyl dimension formula for `(d^k, 0^{n-k})`.
pub fn plucker_hilbert_function(k: usize, n: usize, d: u64) -> BigInt {
    let lambda: Vec<i64> = (0..n).map(|i| if i < k { d as i64 } else { 0 }).collect();
    weyl_dimension(&lambda)
}

/// Weyl dimension of the `GL(n)` module with highest weight `lambda`.
pub fn weyl_dimension(lambda: &[i64]) -> BigInt {
    let n = lambda.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(lambda[i] - lambda[j] + (j - i) as i64);
            den *= BigInt::from((j - i) as i64);
        }
    }
    num / den
}

/// Degree of `Gr(k,n)`: `(k(n-k))! Π_{i<k} i!/(n-k+i)!`.
pub fn grassmannian_degree(k: usize, n: usize) -> BigInt {
    let fact = |m: usize| (1..=m).fold(BigInt::one(), |a, i| a * BigInt::from(i));
    let mut num = fact(k * (n - k));
    let mut den = BigInt::one();
    for i in 0..k {
        num *= fact(i);
        den *= fact(n - k + i);
    }
    num / den
}

/// Hilbert numerators of a Grassmannian recovered from its Hilbert function.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrassmannianSeries {
    pub k: usize,
    pub n: usize,
    /// Numerator over `(1-t)^{N+1}`, `N` the Plücker-space dimension.
    pub ambient_numerator: Vec<i64>,
    /// Numerator over `(1-t)^{dim+1}`; its value at 1 is the degree.
    pub reduced_numerator: Vec<i64>,
    pub degree: i64,
    pub dim: i64,
}

/// Fits the Hilbert series from `dim H^0(O(d))` for `d = 0..=D`.
pub fn hilbert_numerator(
    k: usize,
    n: usize,
    big_d: usize,
) -> Result<GrassmannianSeries, GrassmannError> {
    check_supported(k, n)?;
    let ambient = WedgeSpace::new(k, n)?.dim();
    let dim = k * (n - k);
    let codim = ambient - 1 - dim;
    if big_d < 2 * codim + 4 {
        return Err(GrassmannError::FitFailed(format!(
            "D = {big_d} is below 2*codim + 4 = {}",
            2 * codim + 4
        )));
    }
    let h: Vec<BigInt> = (0..=big_d as u64)
        .map(|d| plucker_hilbert_function(k, n, d))
        .collect();
    // Multiply the truncated series by (1-t)^ambient.
    let mut c: Vec<BigInt> = h.clone();
    for _ in 0..ambient {
        for i in (1..c.len()).rev() {
            let prev = c[i - 1].clone();
            c[i] -= prev;
        }
    }
    let last = c.iter().rposition(|x| !x.is_zero()).unwrap_or(0);
    if big_d - last < dim + 2 {
        return Err(GrassmannError::FitFailed(
            "not enough trailing zero coefficients".into(),
        ));
    }
    let ambient_numerator: Vec<i64> = c[..=last]
        .iter()
        .map(|x| {
            x.to_i64()
                .ok_or_else(|| GrassmannError::FitFailed("coefficient overflow".into()))
        })
        .collect::<Result<_, _>>()?;
    let data = HilbertData::from_numerator(ambient_numerator.clone(), ambient);
    Ok(GrassmannianSeries {
        k,
        n,
        ambient_numerator,
        reduced_numerator: data.reduced_numerator,
        degree: data.degree,
        dim: data.projective_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{PrimeField, Rationals};

    #[test]
    fn quadric_counts() {
        let q = Rationals;
        assert_eq!(GrassmannianSpec::new(&q, 2, 7).unwrap().quadrics.len(), 35);
        assert_eq!(GrassmannianSpec::new(&q, 3, 6).unwrap().quadrics.len(), 35);
        let g24 = GrassmannianSpec::new(&q, 2, 4).unwrap();
        assert_eq!(g24.quadrics.len(), 1);
        assert_eq!(
            g24.quadrics[0].to_canonical_string(),
            "x_1_4*x_2_3 - x_1_3*x_2_4 + x_1_2*x_3_4"
        );
        assert_eq!(
            plucker_ring(&q, 3, 7).unwrap_err(),
            GrassmannError::Unsupported(3, 7)
        );
    }

    #[test]
    fn coordinate_plane() {
        let q = Rationals;
        let plane = ExactMatrix::from_fn(&q, 2, 7, |i, j| if i == j { q.one() } else { q.zero() });
        let t = plucker_point(&plane).unwrap();
        assert_eq!(t.coeffs.len(), 1);
        assert_eq!(t.get(&q, &WedgeIndex(vec![1, 2])), q.one());
        let zero = ExactMatrix::zeros(&q, 2, 7);
        assert_eq!(
            plucker_point(&zero).unwrap_err(),
            GrassmannError::RankDeficient
        );
    }

    #[test]
    fn chart_kills_quadrics() {
        let f = PrimeField::new(11).unwrap();
        for (k, n) in [(2, 7), (3, 6)] {
            let g = GrassmannianSpec::new(&f, k, n).unwrap();
            let piv: Vec<usize> = (1..=k).collect();
            let chart = ChartData::new(&g, &piv).unwrap();
            assert!(chart_pullback(&chart, &g.quadrics)
                .iter()
                .all(|p| p.is_zero()));
            let x = g.var(&piv);
            assert_eq!(
                chart_pullback(&chart, &[x])[0],
                SparsePoly::one(&chart.params)
            );
        }
    }

    #[test]
    fn degrees_and_numerators() {
        assert_eq!(grassmannian_degree(2, 7), BigInt::from(42));
        assert_eq!(grassmannian_degree(3, 6), BigInt::from(42));
        let a = hilbert_numerator(2, 7, 40).unwrap();
        let b = hilbert_numerator(3, 6, 40).unwrap();
        assert_eq!(a.degree, 42);
        assert_eq!(a.reduced_numerator, vec![1, 10, 20, 10, 1]);
        assert_eq!(a.reduced_numerator, b.reduced_numerator);
        assert_eq!(a.ambient_numerator, b.ambient_numerator);
        assert_eq!(
            hilbert_numerator(2, 4, 20).unwrap().reduced_numerator,
            vec![1, 1]
        );
        assert!(matches!(
            hilbert_numerator(2, 7, 5),
            Err(GrassmannError::FitFailed(_))
        ));
    }
}
