use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::Monomial;

/// Polynomial in one variable with rational coefficients, constant term first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPoly(pub Vec<BigRational>);

impl RationalPoly {
    pub fn from_ints(c: &[i64]) -> Self {
        RationalPoly(
            c.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect(),
        )
        .trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn eval(&self, s: i64) -> BigRational {
        let x = BigRational::from_integer(BigInt::from(s));
        self.0
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Integer coefficients, when all coefficients are integral.
    pub fn integer_coeffs(&self) -> Option<Vec<i64>> {
        self.0
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_i64()
                } else {
                    None
                }
            })
            .collect()
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for k in (0..self.0.len()).rev() {
            let c = &self.0[k];
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            let num = if abs.is_integer() {
                abs.to_integer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            let coeff = if abs.is_one() && k > 0 {
                String::new()
            } else {
                num
            };
            let var = match k {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{k}"),
            };
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            write!(f, "{sign}{coeff}{var}")?;
            first = false;
        }
        Ok(())
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Hilbert series data of `S/I` for a homogeneous ideal `I` in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    pub nvars: usize,
    /// Numerator over `(1-t)^nvars`.
    pub numerator: Vec<i64>,
    /// Numerator over `(1-t)^(projective_dim + 1)`, with `h(1) = degree`.
    pub reduced_numerator: Vec<i64>,
    /// -1 for the empty projective scheme.
    pub projective_dim: i64,
    pub degree: i64,
    pub polynomial: RationalPoly,
}

impl HilbertData {
    pub fn from_numerator(numerator: Vec<i64>, nvars: usize) -> Self {
        let mut h = trim(numerator.clone());
        let mut n = nvars as i64;
        while !h.is_empty() && n > 0 && eval_at_one(&h) == 0 {
            h = divide_by_one_minus_t(&h);
            n -= 1;
        }
        let degree = eval_at_one(&h);
        let projective_dim = if h.is_empty() || n == 0 { -1 } else { n - 1 };
        let polynomial = if projective_dim < 0 {
            RationalPoly(Vec::new())
        } else {
            hilbert_polynomial(&h, projective_dim as usize)
        };
        HilbertData {
            nvars,
            numerator: trim(numerator),
            reduced_numerator: h,
            projective_dim,
            degree,
            polynomial,
        }
    }

    pub fn from_leading_monomials(leads: &[Monomial], nvars: usize) -> Self {
        Self::from_numerator(hilbert_numerator(leads, nvars), nvars)
    }

    /// `dim (S/I)_d`.
    pub fn hilbert_function(&self, d: i64) -> i64 {
        let n = self.nvars as i64;
        self.numerator
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as i64 <= d)
            .map(|(i, &c)| c * binom(d - i as i64 + n - 1, n - 1))
            .sum()
    }
}

fn trim(mut v: Vec<i64>) -> Vec<i64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn eval_at_one(h: &[i64]) -> i64 {
    h.iter().sum()
}

fn divide_by_one_minus_t(h: &[i64]) -> Vec<i64> {
    // h = (1-t) q  =>  q_i = sum_{j<=i} h_j
    let mut q = Vec::with_capacity(h.len());
    let mut acc = 0;
    for &c in &h[..h.len() - 1] {
        acc += c;
        q.push(acc);
    }
    trim(q)
}

pub(crate) fn binom(n: i64, k: i64) -> i64 {
    if k < 0 || n < k || n < 0 {
        if k == 0 && n < 0 {
            return 0;
        }
        return 0;
    }
    let mut r: i128 = 1;
    for i in 0..k {
        r = r * (n - i) as i128 / (i + 1) as i128;
    }
    r as i64
}

/// `sum_i h_i * C(s - i + D, D)` as a polynomial in `s`.
fn hilbert_polynomial(h: &[i64], dim: usize) -> RationalPoly {
    let mut total = vec![BigRational::zero(); dim + 1];
    for (i, &hi) in h.iter().enumerate() {
        if hi == 0 {
            continue;
        }
        // prod_{j=1..D} (s - i + j) / j
        let mut poly = vec![BigRational::one()];
        for j in 1..=dim {
            let shift = BigRational::new(BigInt::from(j as i64 - i as i64), BigInt::from(j as i64));
            let scale = BigRational::new(BigInt::one(), BigInt::from(j as i64));
            let mut next = vec![BigRational::zero(); poly.len() + 1];
            for (k, c) in poly.iter().enumerate() {
                next[k + 1] += c * &scale;
                next[k] += c * &shift;
            }
            poly = next;
        }
        for (k, c) in poly.into_iter().enumerate() {
            total[k] += c * BigRational::from_integer(BigInt::from(hi));
        }
    }
    RationalPoly(total).trimmed()
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &[i64], b: &[i64]) -> Vec<i64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
            .collect(),
    )
}

fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !out.iter().any(|h| h.divides(&g)) {
            out.push(g);
        }
    }
    out
}

/// Numerator `N(t)` of the Hilbert series `N(t)/(1-t)^n` of `k[x]/(leads)`.
pub fn hilbert_numerator(leads: &[Monomial], nvars: usize) -> Vec<i64> {
    let _ = nvars;
    numerator_rec(minimalize(leads.to_vec()))
}

fn numerator_rec(gens: Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return Vec::new();
    }
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.coprime(b)));
    if pairwise_coprime {
        return gens.iter().fold(vec![1], |acc, g| {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            poly_mul(&acc, &f)
        });
    }
    // Pivot on the variable occurring in the most generators.
    let mut counts = [0usize; super::MAX_VARS];
    for g in &gens {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let var = (0..super::MAX_VARS).max_by_key(|&v| counts[v]).unwrap();
    let x = Monomial::var(var);
    // N(I) = N(I + (x)) + t * N(I : x)
    let mut plus: Vec<Monomial> = gens.iter().filter(|g| g.exp(var) == 0).copied().collect();
    plus.push(x);
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| if g.exp(var) > 0 { g.div(&x) } else { *g })
        .collect();
    let a = numerator_rec(minimalize(plus));
    let b = numerator_rec(minimalize(colon));
    let mut tb = vec![0i64];
    tb.extend(b);
    poly_add(&a, &tb)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_quadric_in_p5() {
        let q = Monomial::from_exponents(&[1, 0, 0, 0, 0, 1]);
        let h = HilbertData::from_leading_monomials(&[q], 6);
        assert_eq!(h.reduced_numerator, vec![1, 1]);
        assert_eq!(h.projective_dim, 4);
        assert_eq!(h.degree, 2);
    }

    #[test]
    fn points_and_conic() {
        // x0*x1, x0*x2 in P^2: a line plus a point -> HP = t + 2.
        let h = HilbertData::from_leading_monomials(
            &[
                Monomial::from_exponents(&[1, 1, 0]),
                Monomial::from_exponents(&[1, 0, 1]),
            ],
            3,
        );
        assert_eq!(h.polynomial.to_string(), "t+2");
        assert_eq!(h.hilbert_function(0), 1);
        assert_eq!(h.hilbert_function(3), 5);
    }

    #[test]
    fn display() {
        assert_eq!(RationalPoly::from_ints(&[11, 2]).to_string(), "2t+11");
        assert_eq!(
            RationalPoly::from_ints(&[7, -7, 7]).to_string(),
            "7t^2-7t+7"
        );
        assert_eq!(RationalPoly::from_ints(&[]).to_string(), "0");
    }
}
