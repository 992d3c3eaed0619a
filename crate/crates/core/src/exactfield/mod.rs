//! Exact scalar fields and dense linear algebra over them.
//!
//! Every downstream module is generic over [`Field`]. Four concrete fields
//! are provided: the rationals, cyclotomic fields `Q(zeta_n)`, prime fields
//! `F_p` and extensions `F_p[t]/(f)`.

mod cyclotomic;
mod extension;
mod matrix;
mod prime;
mod rational;
pub mod uniarith;

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, CyclotomicElem};
pub use extension::ExtensionField;
pub use matrix::{span_rank, ExactMatrix};
pub use prime::PrimeField;
pub use rational::Rationals;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("no primitive {0}-th root of unity in {1}")]
    NoRootOfUnity(u64, String),
    #[error("modulus {0:?} is reducible over F_{1}")]
    ReducibleModulus(Vec<u64>, u64),
    #[error("matrix entries do not belong to a single field")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid field specification: {0}")]
    InvalidSpec(String),
}

/// Serializable description of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FieldSpec {
    Rationals,
    Cyclotomic {
        n: u64,
    },
    Prime {
        p: u64,
    },
    /// `modulus` lists coefficients from the constant term up, monic of degree `k`.
    /// When absent an irreducible modulus is searched for with a fixed seed.
    Extension {
        p: u64,
        k: usize,
        modulus: Option<Vec<u64>>,
    },
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "QQ"),
            FieldSpec::Cyclotomic { n } => write!(f, "QQ(zeta_{n})"),
            FieldSpec::Prime { p } => write!(f, "GF({p})"),
            FieldSpec::Extension { p, k, .. } => write!(f, "GF({p}^{k})"),
        }
    }
}

/// A field together with its element representation.
///
/// Field handles are cheap to clone and immutable.
pub trait Field: Clone + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + fmt::Debug + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of `num/den`; fails when `den` vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem, FieldError>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for characteristic zero.
    fn characteristic(&self) -> u64;
    /// Number of elements for finite fields.
    fn order(&self) -> Option<u64>;
    /// A primitive `n`-th root of unity.
    fn root_of_unity(&self, n: u64) -> Result<Self::Elem, FieldError>;
    /// Whether `a` is a well-formed element of this field.
    fn contains(&self, a: &Self::Elem) -> bool;
    fn format(&self, a: &Self::Elem) -> String;
    /// All elements, for finite fields only.
    fn elements(&self) -> Option<Vec<Self::Elem>>;
    /// A pseudorandom element. Infinite fields draw small integers.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem, FieldError> {
        let bi = self.inv(b).ok_or(FieldError::DivisionByZero)?;
        Ok(self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn from_bigint(&self, n: &BigInt) -> Self::Elem {
        self.from_rational(&BigRational::from_integer(n.clone()))
            .expect("integers always map into a field")
    }

    fn sum<'a, I: IntoIterator<Item = &'a Self::Elem>>(&self, items: I) -> Self::Elem
    where
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    /// Multiplicative order of a nonzero element, searched up to `bound`.
    fn multiplicative_order(&self, a: &Self::Elem, bound: u64) -> Option<u64> {
        if self.is_zero(a) {
            return None;
        }
        let mut x = a.clone();
        for k in 1..=bound {
            if self.is_one(&x) {
                return Some(k);
            }
            x = self.mul(&x, a);
        }
        None
    }
}

/// Runtime-selected field handle.
#[derive(Debug, Clone)]
pub enum AnyField {
    Rationals(Rationals),
    Cyclotomic(Cyclotomic),
    Prime(PrimeField),
    Extension(ExtensionField),
}

impl AnyField {
    pub fn spec(&self) -> FieldSpec {
        match self {
            AnyField::Rationals(f) => f.spec(),
            AnyField::Cyclotomic(f) => f.spec(),
            AnyField::Prime(f) => f.spec(),
            AnyField::Extension(f) => f.spec(),
        }
    }

    /// Whether the field carries a primitive `n`-th root of unity.
    pub fn has_root_of_unity(&self, n: u64) -> bool {
        match self {
            AnyField::Rationals(f) => f.root_of_unity(n).is_ok(),
            AnyField::Cyclotomic(f) => f.root_of_unity(n).is_ok(),
            AnyField::Prime(f) => f.root_of_unity(n).is_ok(),
            AnyField::Extension(f) => f.root_of_unity(n).is_ok(),
        }
    }
}

/// Default seed for the irreducible-modulus search of extension fields.
pub const MODULUS_SEED: u64 = 0x5eed_f1e1d;

pub fn make_field(spec: &FieldSpec) -> Result<AnyField, FieldError> {
    Ok(match spec {
        FieldSpec::Rationals => AnyField::Rationals(Rationals),
        FieldSpec::Cyclotomic { n } => {
            if *n == 0 {
                return Err(FieldError::InvalidSpec(
                    "cyclotomic order must be >= 1".into(),
                ));
            }
            AnyField::Cyclotomic(Cyclotomic::new(*n))
        }
        FieldSpec::Prime { p } => AnyField::Prime(PrimeField::new(*p)?),
        FieldSpec::Extension { p, k, modulus } => AnyField::Extension(match modulus {
            Some(m) => ExtensionField::with_modulus(*p, m.clone())?,
            None => ExtensionField::search(*p, *k, MODULUS_SEED)?,
        }),
    })
}

/// Kernel of `m`, after checking that every entry lies in the matrix's field.
pub fn kernel_basis<F: Field>(m: &ExactMatrix<F>) -> Result<Vec<Vec<F::Elem>>, FieldError> {
    let f = m.field();
    for i in 0..m.rows() {
        if !m.row(i).iter().all(|a| f.contains(a)) {
            return Err(FieldError::MixedFields);
        }
    }
    Ok(m.kernel_basis())
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Distinct prime factors of `n`.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient.
pub fn euler_phi(n: u64) -> u64 {
    let mut r = n;
    for q in prime_factors(n) {
        r = r / q * (q - 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_helpers() {
        assert!(is_prime(29) && is_prime(43) && !is_prime(91));
        assert_eq!(prime_factors(42), vec![2, 3, 7]);
        assert_eq!(euler_phi(7), 6);
        assert_eq!(euler_phi(21), 12);
    }

    #[test]
    fn make_field_examples() {
        let q7 = make_field(&FieldSpec::Cyclotomic { n: 7 }).unwrap();
        match &q7 {
            AnyField::Cyclotomic(c) => assert_eq!(c.degree(), 6),
            _ => unreachable!(),
        }
        let f29 = make_field(&FieldSpec::Prime { p: 29 }).unwrap();
        assert!(f29.has_root_of_unity(7));
        let f11 = make_field(&FieldSpec::Prime { p: 11 }).unwrap();
        match f11 {
            AnyField::Prime(f) => {
                assert!(matches!(
                    f.root_of_unity(7),
                    Err(FieldError::NoRootOfUnity(7, _))
                ))
            }
            _ => unreachable!(),
        }
        assert_eq!(
            make_field(&FieldSpec::Prime { p: 15 }).unwrap_err(),
            FieldError::NotPrime(15)
        );
        assert!(matches!(
            make_field(&FieldSpec::Extension {
                p: 5,
                k: 2,
                modulus: Some(vec![4, 0, 1])
            }),
            Err(FieldError::ReducibleModulus(..))
        ));
    }
}
