use std::collections::HashMap;
use std::sync::Arc;

use super::{PolyError, PolyRing, SparsePoly};
use crate::exactfield::{ExactMatrix, Field};

/// Skew-symmetric matrix of polynomials, stored by its strict upper triangle.
#[derive(Clone, Debug)]
pub struct SkewMatrix<F: Field> {
    size: usize,
    ring: Arc<PolyRing<F>>,
    upper: Vec<SparsePoly<F>>,
}

impl<F: Field> SkewMatrix<F> {
    pub fn zero(ring: &Arc<PolyRing<F>>, size: usize) -> Self {
        SkewMatrix {
            size,
            ring: ring.clone(),
            upper: vec![SparsePoly::zero(ring); size * (size.saturating_sub(1)) / 2],
        }
    }

    /// The generic skew matrix with entries `x_{i,j}` named in `ring`.
    pub fn generic(
        ring: &Arc<PolyRing<F>>,
        size: usize,
        name: impl Fn(usize, usize) -> String,
    ) -> Self {
        let mut m = Self::zero(ring, size);
        for i in 0..size {
            for j in i + 1..size {
                let v = SparsePoly::var_named(ring, &name(i + 1, j + 1)).expect("variable present");
                m.set(i, j, v);
            }
        }
        m
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j);
        i * self.size - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    /// Sets entry `(i, j)` (0-based) and implicitly `(j, i) = -value`.
    pub fn set(&mut self, i: usize, j: usize, value: SparsePoly<F>) {
        assert_ne!(i, j, "diagonal of a skew matrix is zero");
        if i < j {
            let s = self.slot(i, j);
            self.upper[s] = value;
        } else {
            let s = self.slot(j, i);
            self.upper[s] = value.neg();
        }
    }

    pub fn get(&self, i: usize, j: usize) -> SparsePoly<F> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.upper[self.slot(i, j)].clone(),
            std::cmp::Ordering::Greater => self.upper[self.slot(j, i)].neg(),
            std::cmp::Ordering::Equal => SparsePoly::zero(&self.ring),
        }
    }

    fn get_ref(&self, i: usize, j: usize) -> &SparsePoly<F> {
        &self.upper[self.slot(i, j)]
    }

    /// Conjugation `P M P^T` by a signed permutation: new row `r` is old row
    /// `perm[r]` scaled by `signs[r]`.
    pub fn permuted(&self, perm: &[usize], signs: &[i64]) -> Self {
        let f = &self.ring.field;
        let mut m = Self::zero(&self.ring, self.size);
        for i in 0..self.size {
            for j in i + 1..self.size {
                let s = f.from_i64(signs[i] * signs[j]);
                m.set(i, j, self.get(perm[i], perm[j]).scale(&s));
            }
        }
        m
    }

    /// Applies a substitution to every entry.
    pub fn substitute(&self, target: &Arc<PolyRing<F>>, images: &[SparsePoly<F>]) -> Self {
        SkewMatrix {
            size: self.size,
            ring: target.clone(),
            upper: self
                .upper
                .iter()
                .map(|p| p.substitute(target, images))
                .collect(),
        }
    }

    /// Evaluates at a point into a numeric matrix.
    pub fn eval(&self, point: &[F::Elem]) -> Result<ExactMatrix<F>, PolyError> {
        let f = &self.ring.field;
        let mut m = ExactMatrix::zeros(f, self.size, self.size);
        for i in 0..self.size {
            for j in i + 1..self.size {
                let v = self.get_ref(i, j).eval(point)?;
                m.set(j, i, f.neg(&v));
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Pfaffian of the principal submatrix on the rows in `subset` (0-based).
    pub fn pfaffian(&self, subset: &[usize]) -> Result<SparsePoly<F>, PolyError> {
        let mut memo = HashMap::new();
        self.pfaffian_memo(subset, &mut memo)
    }

    fn pfaffian_memo(
        &self,
        subset: &[usize],
        memo: &mut HashMap<u64, SparsePoly<F>>,
    ) -> Result<SparsePoly<F>, PolyError> {
        if subset.len() % 2 == 1 {
            return Err(PolyError::OddSubset);
        }
        let mut s = subset.to_vec();
        s.sort_unstable();
        Ok(self.pf_sorted(&s, memo))
    }

    fn pf_sorted(&self, s: &[usize], memo: &mut HashMap<u64, SparsePoly<F>>) -> SparsePoly<F> {
        if s.is_empty() {
            return SparsePoly::one(&self.ring);
        }
        if s.len() == 2 {
            return self.get_ref(s[0], s[1]).clone();
        }
        let key = s.iter().fold(0u64, |acc, &i| acc | (1 << i));
        if let Some(p) = memo.get(&key) {
            return p.clone();
        }
        // Pf(S) = sum_k (-1)^(k+1) m_{s0,sk} Pf(S \ {s0, sk})
        let mut total = SparsePoly::zero(&self.ring);
        for k in 1..s.len() {
            let e = self.get_ref(s[0], s[k]);
            if e.is_zero() {
                continue;
            }
            let rest: Vec<usize> = s
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != 0 && i != k)
                .map(|(_, &x)| x)
                .collect();
            let sub = self.pf_sorted(&rest, memo);
            let term = e.mul(&sub);
            total = if k % 2 == 1 {
                total.add(&term)
            } else {
                total.sub(&term)
            };
        }
        memo.insert(key, total.clone());
        total
    }

    /// One Pfaffian per `size`-subset of rows, subsets in lexicographic order.
    pub fn sub_pfaffians(&self, size: usize) -> Result<Vec<SparsePoly<F>>, PolyError> {
        if size % 2 == 1 {
            return Err(PolyError::OddSubset);
        }
        if size > self.size {
            return Err(PolyError::DimensionMismatch(format!(
                "{size} > {}",
                self.size
            )));
        }
        let mut memo = HashMap::new();
        Ok(subsets(self.size, size)
            .iter()
            .map(|s| self.pf_sorted(s, &mut memo))
            .collect())
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Pfaffian of the rows/columns `subset` of `m`.
pub fn pfaffian<F: Field>(m: &SkewMatrix<F>, subset: &[usize]) -> Result<SparsePoly<F>, PolyError> {
    m.pfaffian(subset)
}

/// Pfaffian of a numeric skew matrix by elimination.
pub fn numeric_pfaffian<F: Field>(m: &ExactMatrix<F>) -> F::Elem {
    let f = m.field().clone();
    let n = m.rows();
    if n % 2 == 1 {
        return f.zero();
    }
    let mut a = m.clone();
    let mut pf = f.one();
    let mut k = 0;
    while k < n {
        // Pivot a nonzero entry into position (k, k+1).
        let Some(j) = (k + 1..n).find(|&j| !f.is_zero(a.get(k, j))) else {
            return f.zero();
        };
        if j != k + 1 {
            swap_sym(&mut a, k + 1, j);
            pf = f.neg(&pf);
        }
        let piv = a.get(k, k + 1).clone();
        pf = f.mul(&pf, &piv);
        let pinv = f.inv(&piv).unwrap();
        // Clear rows/cols k and k+1 from the rest with congruence transformations.
        for i in k + 2..n {
            let c1 = f.mul(a.get(k, i), &pinv); // subtract c1 * row(k+1)
            let c2 = f.mul(a.get(k + 1, i), &pinv); // add c2 * row(k)
            for j in 0..n {
                let v = f.add(
                    &f.sub(a.get(i, j), &f.mul(&c1, a.get(k + 1, j))),
                    &f.mul(&c2, a.get(k, j)),
                );
                a.set(i, j, v);
            }
            for j in 0..n {
                let v = f.add(
                    &f.sub(a.get(j, i), &f.mul(&c1, a.get(j, k + 1))),
                    &f.mul(&c2, a.get(j, k)),
                );
                a.set(j, i, v);
            }
        }
        k += 2;
    }
    pf
}

fn swap_sym<F: Field>(a: &mut ExactMatrix<F>, p: usize, q: usize) {
    let n = a.rows();
    for j in 0..n {
        let t = a.get(p, j).clone();
        a.set(p, j, a.get(q, j).clone());
        a.set(q, j, t);
    }
    for i in 0..n {
        let t = a.get(i, p).clone();
        a.set(i, p, a.get(i, q).clone());
        a.set(i, q, t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Rationals;

    fn generic_ring(n: usize) -> Arc<PolyRing<Rationals>> {
        let mut names = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                names.push(format!("m{i}{j}"));
            }
        }
        PolyRing::new(&Rationals, names)
    }

    #[test]
    fn small_pfaffians() {
        let r = generic_ring(4);
        let m = SkewMatrix::generic(&r, 4, |i, j| format!("m{i}{j}"));
        assert_eq!(m.pfaffian(&[0, 1]).unwrap().to_canonical_string(), "m12");
        assert_eq!(
            m.pfaffian(&[0, 1, 2, 3]).unwrap().to_canonical_string(),
            "m14*m23 - m13*m24 + m12*m34"
        );
        assert_eq!(m.sub_pfaffians(4).unwrap().len(), 1);
        assert_eq!(m.pfaffian(&[0, 1, 2]).unwrap_err(), PolyError::OddSubset);
    }

    #[test]
    fn counts() {
        let r = generic_ring(7);
        let m = SkewMatrix::generic(&r, 7, |i, j| format!("m{i}{j}"));
        let p6 = m.pfaffian(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(p6.len(), 15);
        let q = m.sub_pfaffians(4).unwrap();
        assert_eq!(q.len(), 35);
        assert!(q.iter().all(|p| p.total_degree() == Some(2)));
        let c = m.sub_pfaffians(6).unwrap();
        assert_eq!(c.len(), 7);
        assert!(c.iter().all(|p| p.total_degree() == Some(3)));
    }
}
