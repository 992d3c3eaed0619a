//! Sparse multivariate polynomials, skew matrices and Pfaffians, a small
//! Buchberger engine and Hilbert series of monomial ideals.

mod fpeval;
mod groebner;
mod hilbert;
mod pfaffian;
mod zerodim;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exactfield::{ExactMatrix, Field, FieldError};

pub use fpeval::{for_each_projective_point, projective_size, FpEvaluator};
pub use groebner::{
    buchberger, buchberger_with_limit, reduce, saturate_by_form, saturate_by_linear_form,
    GroebnerResult, DEFAULT_VAR_LIMIT,
};
pub use hilbert::{hilbert_numerator, HilbertData, RationalPoly};
pub use pfaffian::{numeric_pfaffian, pfaffian, subsets, SkewMatrix};
pub use zerodim::{char_poly, solve_zero_dimensional, PointSet, ResidueClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("Pfaffian of an odd-sized subset")]
    OddSubset,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} effective variables exceed the Gröbner guard of {1}")]
    ScaleExceeded(usize, usize),
    #[error("polynomials come from different rings")]
    MixedRings,
    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,
    #[error("{0}")]
    Inconclusive(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Maximum number of variables of any ring.
pub const MAX_VARS: usize = 32;

/// Exponent vector. Ordered by graded reverse lexicographic order.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial {
    e: [u8; MAX_VARS],
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { e: [0; MAX_VARS] }
    }

    pub fn var(i: usize) -> Self {
        let mut m = Self::one();
        m.e[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        let mut m = Self::one();
        m.e[..exps.len()].copy_from_slice(exps);
        m
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u8 {
        self.e[i]
    }

    pub fn exponents(&self, nvars: usize) -> &[u8] {
        &self.e[..nvars]
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.e.iter().map(|&x| x as u32).sum()
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.e.iter().zip(&other.e).all(|(a, b)| a <= b)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.e.iter_mut().zip(&other.e) {
            *a += b;
        }
        m
    }

    /// `self / other`, assuming divisibility.
    #[inline]
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.e.iter_mut().zip(&other.e) {
            *a -= b;
        }
        m
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.e.iter_mut().zip(&other.e) {
            *a = (*a).max(*b);
        }
        m
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut m = *self;
        for (a, b) in m.e.iter_mut().zip(&other.e) {
            *a = (*a).min(*b);
        }
        m
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.e.iter().zip(&other.e).all(|(a, b)| *a == 0 || *b == 0)
    }

    pub fn is_one(&self) -> bool {
        self.e.iter().all(|&a| a == 0)
    }

    /// Variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.e
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for i in (0..MAX_VARS).rev() {
            match self.e[i].cmp(&other.e[i]) {
                Ordering::Equal => continue,
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.e.iter().rposition(|&a| a > 0).map_or(0, |i| i + 1);
        write!(f, "{:?}", &self.e[..last])
    }
}

/// Coefficient field plus variable names.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub names: Vec<String>,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: &F, names: Vec<String>) -> Arc<Self> {
        assert!(names.len() <= MAX_VARS, "too many variables");
        Arc::new(PolyRing {
            field: field.clone(),
            names,
        })
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Polynomial with terms sorted by decreasing grevlex order, no zero coefficients.
#[derive(Clone)]
pub struct SparsePoly<F: Field> {
    ring: Arc<PolyRing<F>>,
    terms: Vec<(Monomial, F::Elem)>,
}

impl<F: Field> PartialEq for SparsePoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl<F: Field> Eq for SparsePoly<F> {}

impl<F: Field> fmt::Debug for SparsePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl<F: Field> fmt::Display for SparsePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_canonical_string())
    }
}

impl<F: Field> SparsePoly<F> {
    pub fn zero(ring: &Arc<PolyRing<F>>) -> Self {
        SparsePoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<PolyRing<F>>, c: F::Elem) -> Self {
        Self::from_terms(ring, vec![(Monomial::one(), c)])
    }

    pub fn one(ring: &Arc<PolyRing<F>>) -> Self {
        Self::constant(ring, ring.field.one())
    }

    pub fn var(ring: &Arc<PolyRing<F>>, i: usize) -> Self {
        assert!(i < ring.nvars());
        Self::from_terms(ring, vec![(Monomial::var(i), ring.field.one())])
    }

    pub fn var_named(ring: &Arc<PolyRing<F>>, name: &str) -> Option<Self> {
        ring.index_of(name).map(|i| Self::var(ring, i))
    }

    /// Builds from arbitrary terms, combining duplicates.
    pub fn from_terms(ring: &Arc<PolyRing<F>>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        let f = &ring.field;
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(terms.len());
        for (m, c) in terms {
            match acc.get_mut(&m) {
                Some(v) => *v = f.add(v, &c),
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<(Monomial, F::Elem)> =
            acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        SparsePoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds from terms already sorted decreasingly without duplicates or zeros.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing<F>>, terms: Vec<(Monomial, F::Elem)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        SparsePoly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Linear form `Σ c_i x_i`.
    pub fn linear(ring: &Arc<PolyRing<F>>, coeffs: &[F::Elem]) -> Self {
        let terms = coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (Monomial::var(i), c.clone()))
            .collect();
        Self::from_terms(ring, terms)
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        &self.ring.field
    }

    pub fn terms(&self) -> &[(Monomial, F::Elem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let d = self.total_degree();
        self.terms.iter().all(|t| Some(t.0.degree()) == d)
    }

    pub fn coeff(&self, m: &Monomial) -> F::Elem {
        self.terms
            .iter()
            .find(|t| t.0 == *m)
            .map(|t| t.1.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Variables actually occurring.
    pub fn variables(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for i in m.support() {
                seen[i] = true;
            }
        }
        (0..seen.len()).filter(|&i| seen[i]).collect()
    }

    fn check_ring(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "mixed rings"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_ring(other);
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_ring(other);
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let f = &self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((*m, if negate { f.neg(c) } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate {
                        f.sub(&self.terms[i].1, &other.terms[j].1)
                    } else {
                        f.add(&self.terms[i].1, &other.terms[j].1)
                    };
                    if !f.is_zero(&c) {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        let f = &self.ring.field;
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, f.neg(c))).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, f.mul(a, c))).collect(),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let f = &self.ring.field;
        if f.is_zero(c) {
            return Self::zero(&self.ring);
        }
        SparsePoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(n, a)| (n.mul(m), f.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_ring(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        let f = &self.ring.field;
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(self.len() * other.len());
        for (m, a) in &self.terms {
            for (n, b) in &other.terms {
                let t = f.mul(a, b);
                let k = m.mul(n);
                match acc.get_mut(&k) {
                    Some(v) => *v = f.add(v, &t),
                    None => {
                        acc.insert(k, t);
                    }
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        SparsePoly {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Scales to leading coefficient one.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) => self.scale(&self.ring.field.inv(c).expect("nonzero")),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let f = &self.ring.field;
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(var) > 0)
            .map(|(m, c)| {
                let mut n = *m;
                n.e[var] -= 1;
                (n, f.mul(c, &f.from_i64(m.exp(var) as i64)))
            })
            .collect();
        Self::from_terms(&self.ring, terms)
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::DimensionMismatch(format!(
                "point of length {} for {} variables",
                point.len(),
                self.ring.nvars()
            )));
        }
        let f = &self.ring.field;
        let mut total = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for i in m.support() {
                t = f.mul(&t, &f.pow(&point[i], m.exp(i) as u64));
            }
            total = f.add(&total, &t);
        }
        Ok(total)
    }

    /// Evaluates in another field through a coefficient embedding.
    pub fn eval_in<G: Field>(
        &self,
        target: &G,
        embed: &impl Fn(&F::Elem) -> G::Elem,
        point: &[G::Elem],
    ) -> G::Elem {
        let mut total = target.zero();
        for (m, c) in &self.terms {
            let mut t = embed(c);
            for i in m.support() {
                t = target.mul(&t, &target.pow(&point[i], m.exp(i) as u64));
            }
            total = target.add(&total, &t);
        }
        total
    }

    /// Substitutes `x_i ↦ images[i]`, landing in the ring of the images.
    pub fn substitute(&self, target: &Arc<PolyRing<F>>, images: &[SparsePoly<F>]) -> Self {
        assert_eq!(images.len(), self.ring.nvars(), "one image per variable");
        let mut cache: HashMap<(usize, u8), SparsePoly<F>> = HashMap::new();
        let mut acc: Vec<(Monomial, F::Elem)> = Vec::new();
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(target, c.clone());
            for i in m.support() {
                let e = m.exp(i);
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e as u32))
                    .clone();
                t = t.mul(&p);
            }
            acc.extend(t.terms);
        }
        Self::from_terms(target, acc)
    }

    /// Maps coefficients into a different ring with the same variables.
    pub fn map_coeffs<G: Field>(
        &self,
        target: &Arc<PolyRing<G>>,
        f: impl Fn(&F::Elem) -> G::Elem,
    ) -> SparsePoly<G> {
        let terms = self.terms.iter().map(|(m, c)| (*m, f(c))).collect();
        SparsePoly::from_terms(target, terms)
    }

    /// Reinterprets in a ring with the same field, renumbering variables.
    pub fn rename(&self, target: &Arc<PolyRing<F>>, var_map: &[usize]) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut n = Monomial::one();
                for i in m.support() {
                    n.e[var_map[i]] += m.exp(i);
                }
                (n, c.clone())
            })
            .collect();
        Self::from_terms(target, terms)
    }

    /// Canonical text: terms by decreasing grevlex order, `*` between factors.
    pub fn to_canonical_string(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let f = &self.ring.field;
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let mut cs = f.format(c);
            let neg = cs.starts_with('-');
            if neg {
                cs.remove(0);
            }
            let mono = self.format_monomial(m);
            let body = match (cs.as_str(), mono.is_empty()) {
                (_, true) => cs,
                ("1", false) => mono,
                (_, false) => format!("{cs}*{mono}"),
            };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
                out.push_str(&body);
            } else {
                out.push_str(if neg { " - " } else { " + " });
                out.push_str(&body);
            }
        }
        out
    }

    fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .support()
            .map(|i| {
                if m.exp(i) == 1 {
                    self.ring.names[i].clone()
                } else {
                    format!("{}^{}", self.ring.names[i], m.exp(i))
                }
            })
            .collect();
        parts.join("*")
    }

    /// Coefficient vector of a linear form.
    pub fn linear_coeffs(&self) -> Option<Vec<F::Elem>> {
        let f = &self.ring.field;
        let mut v = vec![f.zero(); self.ring.nvars()];
        for (m, c) in &self.terms {
            if m.degree() != 1 {
                return None;
            }
            v[m.support().next().unwrap()] = c.clone();
        }
        Some(v)
    }
}

/// Coefficient matrix of polynomials w.r.t. the union of their monomials,
/// with the sorted monomial list.
pub fn coefficient_matrix<F: Field>(polys: &[SparsePoly<F>]) -> (ExactMatrix<F>, Vec<Monomial>) {
    let mut monos: Vec<Monomial> = polys
        .iter()
        .flat_map(|p| p.terms.iter().map(|t| t.0))
        .collect();
    monos.sort_by(|a, b| b.cmp(a));
    monos.dedup();
    let field = polys[0].field();
    let index: HashMap<Monomial, usize> = monos.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut m = ExactMatrix::zeros(field, polys.len(), monos.len());
    for (r, p) in polys.iter().enumerate() {
        for (mono, c) in &p.terms {
            m.set(r, index[mono], c.clone());
        }
    }
    (m, monos)
}

/// Dimension of the linear span of the polynomials.
pub fn span_dimension<F: Field>(polys: &[SparsePoly<F>]) -> usize {
    if polys.is_empty() {
        return 0;
    }
    coefficient_matrix(polys).0.rank()
}

/// Rank of the Jacobian matrix of `polys` at `point`.
pub fn jacobian_rank_at<F: Field>(
    polys: &[SparsePoly<F>],
    point: &[F::Elem],
) -> Result<usize, PolyError> {
    let Some(first) = polys.first() else {
        return Ok(0);
    };
    let ring = first.ring().clone();
    let n = ring.nvars();
    if point.len() != n {
        return Err(PolyError::DimensionMismatch(format!(
            "point of length {} for {n} variables",
            point.len()
        )));
    }
    let mut jac = ExactMatrix::zeros(&ring.field, polys.len(), n);
    for (r, p) in polys.iter().enumerate() {
        for v in 0..n {
            jac.set(r, v, p.derivative(v).eval(point)?);
        }
    }
    Ok(jac.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{PrimeField, Rationals};

    #[test]
    fn grevlex_order() {
        // x > y > z; x*z < y^2 in grevlex.
        let xz = Monomial::from_exponents(&[1, 0, 1]);
        let yy = Monomial::from_exponents(&[0, 2, 0]);
        assert!(yy > xz);
        let x = Monomial::var(0);
        assert!(x > Monomial::var(1));
        assert!(Monomial::from_exponents(&[0, 0, 2]) > x);
    }

    #[test]
    fn arithmetic_and_text() {
        let q = Rationals;
        let r = PolyRing::new(&q, vec!["x".into(), "y".into()]);
        let x = SparsePoly::var(&r, 0);
        let y = SparsePoly::var(&r, 1);
        let p = x.add(&y).mul(&x.sub(&y));
        assert_eq!(p.to_canonical_string(), "x^2 - y^2");
        assert_eq!(p.derivative(0).to_canonical_string(), "2*x");
        assert_eq!(
            p.eval(&[q.from_i64(3), q.from_i64(1)]).unwrap(),
            q.from_i64(8)
        );
    }

    #[test]
    fn jacobian_examples() {
        let f = PrimeField::new(11).unwrap();
        let r = PolyRing::new(&f, vec!["x".into(), "y".into()]);
        let x = SparsePoly::var(&r, 0);
        let y = SparsePoly::var(&r, 1);
        assert_eq!(jacobian_rank_at(&[x.mul(&x)], &[0, 0]).unwrap(), 0);
        assert_eq!(jacobian_rank_at(&[x.clone(), y], &[0, 0]).unwrap(), 2);
        assert!(jacobian_rank_at(&[x], &[0]).is_err());
    }
}
