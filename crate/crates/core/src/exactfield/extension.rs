use std::sync::Arc;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::uniarith::{self, is_irreducible, monic, mulmod};
use super::{is_prime, prime_factors, Field, FieldError, FieldSpec, PrimeField};

/// `F_p[t]/(f)` with `f` monic irreducible of degree `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionField {
    base: PrimeField,
    k: usize,
    modulus: Arc<Vec<u64>>,
}

/// Largest field size for which `elements` enumerates.
const ENUMERATION_LIMIT: u64 = 1 << 24;

impl ExtensionField {
    /// Validates `modulus` (constant term first) for irreducibility.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let base = PrimeField::new(p)?;
        let m = monic(&modulus.iter().map(|c| c % p).collect::<Vec<_>>(), p);
        let k = uniarith::degree(&m).unwrap_or(0);
        if k == 0 || !is_irreducible(&m, p) {
            return Err(FieldError::ReducibleModulus(modulus, p));
        }
        Ok(ExtensionField {
            base,
            k,
            modulus: Arc::new(m),
        })
    }

    /// Random irreducibility search with a reproducible seed.
    pub fn search(p: u64, k: usize, seed: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if k == 0 {
            return Err(FieldError::InvalidSpec(
                "extension degree must be >= 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (p << 8) ^ k as u64);
        loop {
            let mut f: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
            f.push(1);
            if is_irreducible(&f, p) {
                return Self::with_modulus(p, f);
            }
        }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn size(&self) -> u64 {
        self.base.p().pow(self.k as u32)
    }

    /// Embeds a prime-field residue.
    pub fn embed(&self, a: u64) -> Vec<u64> {
        let mut v = vec![0u64; self.k];
        v[0] = a % self.base.p();
        v
    }

    /// Generator `t` of the extension.
    pub fn generator(&self) -> Vec<u64> {
        self.pad(uniarith::rem(&[0, 1], &self.modulus, self.base.p()))
    }

    fn pad(&self, mut v: Vec<u64>) -> Vec<u64> {
        v.resize(self.k, 0);
        v
    }

    /// Base-p digit encoding of an element.
    pub fn to_index(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.base.p() + c)
    }

    pub fn from_index(&self, mut idx: u64) -> Vec<u64> {
        let p = self.base.p();
        (0..self.k)
            .map(|_| {
                let c = idx % p;
                idx /= p;
                c
            })
            .collect()
    }

    /// Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: &[u64]) -> Vec<u64> {
        self.pow(&a.to_vec(), self.base.p())
    }
}

impl Field for ExtensionField {
    type Elem = Vec<u64>;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Extension {
            p: self.base.p(),
            k: self.k,
            modulus: Some(self.modulus.to_vec()),
        }
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.k]
    }
    fn one(&self) -> Vec<u64> {
        self.embed(1)
    }
    fn from_i64(&self, v: i64) -> Vec<u64> {
        self.embed(self.base.from_i64(v))
    }
    fn from_rational(&self, q: &BigRational) -> Result<Vec<u64>, FieldError> {
        Ok(self.embed(self.base.from_rational(q)?))
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        a.iter().zip(b).map(|(x, y)| self.base.sub(x, y)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        self.pad(mulmod(a, b, &self.modulus, self.base.p()))
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if self.is_zero(a) {
            return None;
        }
        let q = self.size();
        Some(self.pow(a, q - 2))
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn characteristic(&self) -> u64 {
        self.base.p()
    }
    fn order(&self) -> Option<u64> {
        Some(self.size())
    }
    fn root_of_unity(&self, n: u64) -> Result<Vec<u64>, FieldError> {
        let q1 = self.size() - 1;
        if n == 0 || q1 % n != 0 {
            return Err(FieldError::NoRootOfUnity(
                n,
                format!("GF({}^{})", self.base.p(), self.k),
            ));
        }
        let factors = prime_factors(n);
        for idx in 1..=q1 {
            let x = self.from_index(idx);
            let y = self.pow(&x, q1 / n);
            if factors.iter().all(|&r| !self.is_one(&self.pow(&y, n / r))) {
                return Ok(y);
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic")
    }
    fn contains(&self, a: &Vec<u64>) -> bool {
        a.len() == self.k && a.iter().all(|&c| c < self.base.p())
    }
    fn format(&self, a: &Vec<u64>) -> String {
        let mut parts = Vec::new();
        for (i, &c) in a.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(match i {
                0 => c.to_string(),
                1 if c == 1 => "t".to_string(),
                1 => format!("{c}*t"),
                _ if c == 1 => format!("t^{i}"),
                _ => format!("{c}*t^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }
    fn elements(&self) -> Option<Vec<Vec<u64>>> {
        let q = self.size();
        (q <= ENUMERATION_LIMIT).then(|| (0..q).map(|i| self.from_index(i)).collect())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.k)
            .map(|_| rng.gen_range(0..self.base.p()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf_49_has_24th_roots() {
        let f = ExtensionField::search(7, 2, 1).unwrap();
        assert_eq!(f.size(), 49);
        let w = f.root_of_unity(24).unwrap();
        assert_eq!(f.multiplicative_order(&w, 100), Some(24));
        let t = f.generator();
        let ti = f.inv(&t).unwrap();
        assert!(f.is_one(&f.mul(&t, &ti)));
    }

    #[test]
    fn frobenius_fixes_prime_field() {
        let f = ExtensionField::search(13, 3, 7).unwrap();
        for a in 0..13 {
            assert_eq!(f.frobenius(&f.embed(a)), f.embed(a));
        }
        let t = f.generator();
        let mut x = t.clone();
        for _ in 0..3 {
            x = f.frobenius(&x);
        }
        assert_eq!(x, t);
    }
}
