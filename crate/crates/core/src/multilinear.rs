//! Exterior powers: wedge bases, induced actions by minors, Plücker vectors
//! and the contraction map `V ⊗ ∧²V* → V*`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactfield::{ExactMatrix, Field, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MultilinearError {
    #[error("wedge range k={k}, n={n} is not supported")]
    BadRange { k: usize, n: usize },
    #[error("generator is singular")]
    SingularGenerator,
    #[error("section is not in the kernel of the contraction map")]
    NotInKernel,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Strictly increasing 1-based index tuple.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WedgeIndex(pub Vec<usize>);

impl WedgeIndex {
    /// Sorts `idx`, returning the sign of the sorting permutation, or `None`
    /// when an index repeats.
    pub fn sorted(idx: &[usize]) -> Option<(i32, WedgeIndex)> {
        let mut v = idx.to_vec();
        let mut sign = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                } else if v[j] == v[j + 1] {
                    return None;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, WedgeIndex(v)))
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    /// Report label, e.g. `x_1_2`.
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        format!("x_{}", parts.join("_"))
    }

    /// Display label, e.g. `x_{1,2}`.
    pub fn tex_label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        format!("x_{{{}}}", parts.join(","))
    }

    pub fn index_sum(&self) -> usize {
        self.0.iter().sum()
    }
}

impl fmt::Display for WedgeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Strictly increasing k-subsets of `1..=n` in lexicographic order.
pub fn wedge_basis(k: usize, n: usize) -> Result<Vec<WedgeIndex>, MultilinearError> {
    if k == 0 || k > n {
        return Err(MultilinearError::BadRange { k, n });
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=k).collect();
    loop {
        out.push(WedgeIndex(cur.clone()));
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
    Ok(out)
}

/// A wedge basis with position lookup.
#[derive(Debug, Clone)]
pub struct WedgeSpace {
    pub k: usize,
    pub n: usize,
    pub basis: Vec<WedgeIndex>,
    lookup: HashMap<WedgeIndex, usize>,
}

impl WedgeSpace {
    pub fn new(k: usize, n: usize) -> Result<Self, MultilinearError> {
        let basis = wedge_basis(k, n)?;
        let lookup = basis
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(WedgeSpace {
            k,
            n,
            basis,
            lookup,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn position(&self, w: &WedgeIndex) -> Option<usize> {
        self.lookup.get(w).copied()
    }

    /// Position and sign for an unsorted index tuple.
    pub fn signed_position(&self, idx: &[usize]) -> Option<(i32, usize)> {
        let (s, w) = WedgeIndex::sorted(idx)?;
        Some((s, self.position(&w)?))
    }

    pub fn labels(&self) -> Vec<String> {
        self.basis.iter().map(|w| w.label()).collect()
    }
}

/// Sparse vector in `∧^k F^n` indexed by wedge indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorVector<F: Field> {
    pub k: usize,
    pub n: usize,
    pub coeffs: BTreeMap<WedgeIndex, F::Elem>,
}

impl<F: Field> TensorVector<F> {
    pub fn from_dense(field: &F, space: &WedgeSpace, v: &[F::Elem]) -> Self {
        let coeffs = space
            .basis
            .iter()
            .zip(v)
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect();
        TensorVector {
            k: space.k,
            n: space.n,
            coeffs,
        }
    }

    pub fn to_dense(&self, field: &F, space: &WedgeSpace) -> Vec<F::Elem> {
        let mut v = vec![field.zero(); space.dim()];
        for (w, c) in &self.coeffs {
            v[space.position(w).expect("index in space")] = c.clone();
        }
        v
    }

    pub fn get(&self, field: &F, w: &WedgeIndex) -> F::Elem {
        self.coeffs.get(w).cloned().unwrap_or_else(|| field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Whether the vector equals a nonzero multiple of `other`.
    pub fn proportional(&self, field: &F, other: &Self) -> bool {
        let Some((w, c)) = self.coeffs.iter().next() else {
            return other.is_zero();
        };
        let Some(d) = other.coeffs.get(w) else {
            return false;
        };
        let r = field.div(d, c).expect("nonzero");
        self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .all(|(w, c)| other.coeffs.get(w).is_some_and(|d| *d == field.mul(c, &r)))
    }
}

/// Matrix of `g` acting on `∧^k V`: entry `(I, J)` is the minor `det g[I, J]`,
/// so re-sorting signs come out of the determinant.
pub fn induced_action<F: Field>(
    g: &ExactMatrix<F>,
    k: usize,
) -> Result<ExactMatrix<F>, MultilinearError> {
    let n = g.rows();
    if g.cols() != n {
        return Err(MultilinearError::DimensionMismatch(
            "generator must be square".into(),
        ));
    }
    if g.det()? == g.field().zero() {
        return Err(MultilinearError::SingularGenerator);
    }
    let space = WedgeSpace::new(k, n)?;
    let dim = space.dim();
    let f = g.field();
    let mut out = ExactMatrix::zeros(f, dim, dim);
    for (a, wi) in space.basis.iter().enumerate() {
        let rows: Vec<usize> = wi.0.iter().map(|i| i - 1).collect();
        for (b, wj) in space.basis.iter().enumerate() {
            let cols: Vec<usize> = wj.0.iter().map(|j| j - 1).collect();
            out.set(a, b, g.select(&rows, &cols).det()?);
        }
    }
    Ok(out)
}

/// Contragredient action on the dual, `(g^{-1})^T`.
pub fn dual_matrix<F: Field>(g: &ExactMatrix<F>) -> Result<ExactMatrix<F>, MultilinearError> {
    Ok(g.inverse()
        .ok_or(MultilinearError::SingularGenerator)?
        .transpose())
}

/// Plücker vector `v_1 ∧ ... ∧ v_k` of the rows of `plane`.
pub fn wedge_of_rows<F: Field>(plane: &ExactMatrix<F>) -> Result<Vec<F::Elem>, MultilinearError> {
    let k = plane.rows();
    let n = plane.cols();
    let space = WedgeSpace::new(k, n)?;
    let rows: Vec<usize> = (0..k).collect();
    space
        .basis
        .iter()
        .map(|w| {
            let cols: Vec<usize> = w.0.iter().map(|j| j - 1).collect();
            Ok(plane.select(&rows, &cols).det()?)
        })
        .collect()
}

/// Index of the slot `v_i ⊗ (v_j* ∧ v_k*)` in the domain of the contraction map.
pub fn slot_index(n: usize, i: usize, jk: (usize, usize)) -> usize {
    let space = WedgeSpace::new(2, n).expect("n >= 2");
    (i - 1) * space.dim()
        + space
            .position(&WedgeIndex(vec![jk.0, jk.1]))
            .expect("j < k")
}

/// All slots `(i, (j, k))` in domain order.
pub fn slots(n: usize) -> Vec<(usize, (usize, usize))> {
    let pairs = wedge_basis(2, n).expect("n >= 2");
    (1..=n)
        .flat_map(|i| pairs.iter().map(move |w| (i, (w.0[0], w.0[1]))))
        .collect()
}

/// Matrix of `(v_j* ∧ v_k*) ⊗ v_i ↦ δ_ij v_k* − δ_ik v_j*`, size `n × n·C(n,2)`.
pub fn contraction_matrix<F: Field>(
    field: &F,
    n: usize,
) -> Result<ExactMatrix<F>, MultilinearError> {
    if n < 2 {
        return Err(MultilinearError::BadRange { k: 2, n });
    }
    let all = slots(n);
    let mut m = ExactMatrix::zeros(field, n, all.len());
    for (col, &(i, (j, k))) in all.iter().enumerate() {
        if i == j {
            m.set(k - 1, col, field.add(m.get(k - 1, col), &field.one()));
        }
        if i == k {
            m.set(j - 1, col, field.sub(m.get(j - 1, col), &field.one()));
        }
    }
    Ok(m)
}

/// `λ = Σ c_{i,j,k} v_i ⊗ (v_j* ∧ v_k*)`, a section of `Q(1)` on `Gr(2, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientBundleSection<F: Field> {
    pub n: usize,
    pub coeffs: BTreeMap<(usize, (usize, usize)), F::Elem>,
}

impl<F: Field> QuotientBundleSection<F> {
    pub fn new(
        field: &F,
        n: usize,
        coeffs: BTreeMap<(usize, (usize, usize)), F::Elem>,
    ) -> Result<Self, MultilinearError> {
        let coeffs: BTreeMap<_, _> = coeffs
            .into_iter()
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        for &(i, (j, k)) in coeffs.keys() {
            if !(1..=n).contains(&i) || !(1 <= j && j < k && k <= n) {
                return Err(MultilinearError::DimensionMismatch(format!(
                    "slot ({i},({j},{k}))"
                )));
            }
        }
        let s = QuotientBundleSection { n, coeffs };
        let v = s.to_dense(field);
        let c = contraction_matrix(field, n)?;
        if c.mul_vec(&v)?.iter().any(|x| !field.is_zero(x)) {
            return Err(MultilinearError::NotInKernel);
        }
        Ok(s)
    }

    pub fn from_dense(field: &F, n: usize, v: &[F::Elem]) -> Result<Self, MultilinearError> {
        let coeffs = slots(n).into_iter().zip(v.iter().cloned()).collect();
        Self::new(field, n, coeffs)
    }

    pub fn to_dense(&self, field: &F) -> Vec<F::Elem> {
        let mut v = vec![field.zero(); self.n * self.n * (self.n - 1) / 2];
        for (&(i, jk), c) in &self.coeffs {
            v[slot_index(self.n, i, jk)] = c.clone();
        }
        v
    }

    pub fn get(&self, field: &F, i: usize, jk: (usize, usize)) -> F::Elem {
        self.coeffs
            .get(&(i, jk))
            .cloned()
            .unwrap_or_else(|| field.zero())
    }

    /// `λ(a, b) = Σ c_{i,j,k} (a_j b_k − a_k b_j) v_i`.
    pub fn eval(&self, field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![field.zero(); self.n];
        for (&(i, (j, k)), c) in &self.coeffs {
            let p = field.sub(
                &field.mul(&a[j - 1], &b[k - 1]),
                &field.mul(&a[k - 1], &b[j - 1]),
            );
            out[i - 1] = field.add(&out[i - 1], &field.mul(c, &p));
        }
        out
    }

    /// The linear map `b ↦ λ(a, b)` as an `n × n` matrix.
    pub fn partial(&self, field: &F, a: &[F::Elem]) -> ExactMatrix<F> {
        let mut m = ExactMatrix::zeros(field, self.n, self.n);
        for (&(i, (j, k)), c) in &self.coeffs {
            // a_j b_k - a_k b_j
            let t = field.mul(c, &a[j - 1]);
            m.set(i - 1, k - 1, field.add(m.get(i - 1, k - 1), &t));
            let t = field.mul(c, &a[k - 1]);
            m.set(i - 1, j - 1, field.sub(m.get(i - 1, j - 1), &t));
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{PrimeField, Rationals};

    fn perm_matrix<F: Field>(f: &F, images: &[usize]) -> ExactMatrix<F> {
        let n = images.len();
        let mut g = ExactMatrix::zeros(f, n, n);
        for (j, &i) in images.iter().enumerate() {
            g.set(i - 1, j, f.one());
        }
        g
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(wedge_basis(2, 7).unwrap().len(), 21);
        assert_eq!(wedge_basis(3, 6).unwrap().len(), 20);
        assert_eq!(wedge_basis(2, 6).unwrap().len(), 15);
        assert!(wedge_basis(0, 3).is_err());
        assert_eq!(WedgeIndex(vec![1, 2]).label(), "x_1_2");
    }

    #[test]
    fn sigma6_sign() {
        let q = Rationals;
        let g = perm_matrix(&q, &[6, 5, 4, 3, 2, 1]);
        let a = induced_action(&g, 2).unwrap();
        let sp = WedgeSpace::new(2, 6).unwrap();
        let col = sp.position(&WedgeIndex(vec![1, 2])).unwrap();
        let row = sp.position(&WedgeIndex(vec![5, 6])).unwrap();
        assert_eq!(*a.get(row, col), q.from_i64(-1));
    }

    #[test]
    fn contraction_kernel_dim() {
        let f = PrimeField::new(29).unwrap();
        let c = contraction_matrix(&f, 6).unwrap();
        assert_eq!((c.rows(), c.cols()), (6, 90));
        assert_eq!(c.rank(), 6);
        assert_eq!(c.kernel_basis().len(), 84);
        let col = slot_index(6, 3, (1, 2));
        assert!(c.column(col).iter().all(|x| *x == 0));
        let col = slot_index(6, 1, (1, 2));
        assert_eq!(c.column(col), vec![0, 1, 0, 0, 0, 0]);
    }
}
