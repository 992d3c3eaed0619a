use super::SparsePoly;
use crate::exactfield::{Field, PrimeField};

/// Flattened polynomial system over `F_p` for fast repeated evaluation.
#[derive(Debug, Clone)]
pub struct FpEvaluator {
    p: u64,
    nvars: usize,
    /// Per polynomial: range into `terms`.
    polys: Vec<(usize, usize)>,
    /// Per term: coefficient and range into `factors`.
    terms: Vec<(u64, u32, u32)>,
    factors: Vec<u8>,
}

impl FpEvaluator {
    pub fn new(field: &PrimeField, polys: &[SparsePoly<PrimeField>]) -> Self {
        let nvars = polys.first().map_or(0, |p| p.ring().nvars());
        let mut out = FpEvaluator {
            p: field.p(),
            nvars,
            polys: Vec::new(),
            terms: Vec::new(),
            factors: Vec::new(),
        };
        for poly in polys {
            let start = out.terms.len();
            for (m, c) in poly.terms() {
                let fs = out.factors.len() as u32;
                for v in m.support() {
                    for _ in 0..m.exp(v) {
                        out.factors.push(v as u8);
                    }
                }
                out.terms.push((*c, fs, out.factors.len() as u32));
            }
            out.polys.push((start, out.terms.len()));
        }
        out
    }

    pub fn len(&self) -> usize {
        self.polys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polys.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    #[inline]
    pub fn eval_one(&self, idx: usize, x: &[u64]) -> u64 {
        let (a, b) = self.polys[idx];
        let p = self.p;
        let mut acc = 0u64;
        for &(c, fs, fe) in &self.terms[a..b] {
            let mut t = c;
            for &v in &self.factors[fs as usize..fe as usize] {
                t = t * x[v as usize] % p;
            }
            acc += t;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }

    /// Whether every polynomial vanishes at `x`; exits at the first nonzero value.
    #[inline]
    pub fn all_vanish(&self, x: &[u64]) -> bool {
        (0..self.polys.len()).all(|i| self.eval_one(i, x) == 0)
    }

    pub fn eval_all(&self, x: &[u64]) -> Vec<u64> {
        (0..self.polys.len()).map(|i| self.eval_one(i, x)).collect()
    }
}

/// Iterates over normalized representatives of `P^{n-1}(F_p)`: the first
/// nonzero coordinate equals one.
pub fn for_each_projective_point(p: u64, n: usize, mut visit: impl FnMut(&[u64])) {
    let mut x = vec![0u64; n];
    for lead in 0..n {
        for v in x.iter_mut() {
            *v = 0;
        }
        x[lead] = 1;
        let free = n - lead - 1;
        let total = p.pow(free as u32);
        for idx in 0..total {
            let mut r = idx;
            for j in (lead + 1..n).rev() {
                x[j] = r % p;
                r /= p;
            }
            visit(&x);
        }
    }
}

/// Number of points of `P^{n-1}(F_p)`.
pub fn projective_size(p: u64, n: usize) -> u64 {
    (0..n as u32).map(|i| p.pow(i)).sum()
}

impl PrimeField {
    /// Normalizes a nonzero vector so its first nonzero entry is one.
    pub fn normalize_projective(&self, v: &mut [u64]) -> bool {
        let Some(i) = v.iter().position(|&a| a != 0) else {
            return false;
        };
        let inv = self.inv(&v[i]).unwrap();
        for a in v.iter_mut() {
            *a = self.mul(a, &inv);
        }
        true
    }
}
