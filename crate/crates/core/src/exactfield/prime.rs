use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use super::uniarith::{inv_mod, mul_mod, pow_mod};
use super::{is_prime, prime_factors, Field, FieldError, FieldSpec};

/// The prime field `F_p`, elements as canonical residues in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) || p >= (1 << 31) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> u64 {
        if self.p == 2 {
            return 1;
        }
        let factors = prime_factors(self.p - 1);
        (2..self.p)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&q| pow_mod(g, (self.p - 1) / q, self.p) != 1)
            })
            .expect("F_p^* is cyclic")
    }

    /// Signed representative in (-p/2, p/2].
    pub fn signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime { p: self.p }
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Result<u64, FieldError> {
        let p = BigInt::from(self.p);
        let n = q.numer().mod_floor(&p).to_u64().unwrap();
        let d = q.denom().mod_floor(&p).to_u64().unwrap();
        let di = inv_mod(d, self.p).ok_or(FieldError::DivisionByZero)?;
        Ok(mul_mod(n, di, self.p))
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        inv_mod(*a, self.p)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn order(&self) -> Option<u64> {
        Some(self.p)
    }
    fn root_of_unity(&self, n: u64) -> Result<u64, FieldError> {
        if n == 0 || (self.p - 1) % n != 0 {
            return Err(FieldError::NoRootOfUnity(n, format!("GF({})", self.p)));
        }
        Ok(pow_mod(self.generator(), (self.p - 1) / n, self.p))
    }
    fn contains(&self, a: &u64) -> bool {
        *a < self.p
    }
    fn format(&self, a: &u64) -> String {
        self.signed(*a).to_string()
    }
    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.p).collect())
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
}
