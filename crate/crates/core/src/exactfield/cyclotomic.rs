use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use super::rational::is_negative;
use super::{euler_phi, Field, FieldError, FieldSpec};

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by every Phi_d with d | n, d < n.
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_int(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_int(a: &[BigInt], m: &[BigInt]) -> Vec<BigInt> {
    let dm = m.len() - 1;
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - dm];
    for shift in (0..q.len()).rev() {
        let c = r[shift + dm].clone() / &m[dm];
        for (i, mi) in m.iter().enumerate() {
            r[shift + i] -= &c * mi;
        }
        q[shift] = c;
    }
    debug_assert!(r.iter().all(|c| c.is_zero()));
    q
}

/// `Q(zeta_n)` as `Q[z]/(Phi_n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cyclotomic {
    n: u64,
    modulus: Arc<Vec<BigRational>>,
}

/// Coordinates in the power basis `1, z, ..., z^(phi(n)-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicElem(pub Vec<BigRational>);

impl Cyclotomic {
    pub fn new(n: u64) -> Self {
        let modulus = cyclotomic_polynomial(n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Cyclotomic {
            n,
            modulus: Arc::new(modulus),
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        euler_phi(self.n) as usize
    }

    /// The generator `zeta_n`.
    pub fn zeta(&self) -> CyclotomicElem {
        self.reduce(vec![BigRational::zero(), BigRational::one()])
    }

    fn reduce(&self, mut c: Vec<BigRational>) -> CyclotomicElem {
        let d = self.degree();
        while c.len() > d {
            let top = c.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - d;
            for i in 0..d {
                let t = &top * &self.modulus[i];
                c[shift + i] -= t;
            }
        }
        c.resize(d, BigRational::zero());
        CyclotomicElem(c)
    }
}

fn poly_trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    poly_trim(
        (0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_else(BigRational::zero)
                    - b.get(i).cloned().unwrap_or_else(BigRational::zero)
            })
            .collect(),
    )
}

fn poly_divrem(a: &[BigRational], m: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let m = poly_trim(m.to_vec());
    let dm = m.len() - 1;
    let mut r = poly_trim(a.to_vec());
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - dm];
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r.last().unwrap() / &m[dm];
        for (i, mi) in m.iter().enumerate() {
            let t = &c * mi;
            r[shift + i] -= t;
        }
        q[shift] = c;
        r = poly_trim(r);
        if r.is_empty() {
            break;
        }
    }
    (poly_trim(q), r)
}

impl Field for Cyclotomic {
    type Elem = CyclotomicElem;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Cyclotomic { n: self.n }
    }
    fn zero(&self) -> CyclotomicElem {
        CyclotomicElem(vec![BigRational::zero(); self.degree()])
    }
    fn one(&self) -> CyclotomicElem {
        self.from_i64(1)
    }
    fn from_i64(&self, v: i64) -> CyclotomicElem {
        let mut c = vec![BigRational::zero(); self.degree()];
        c[0] = BigRational::from_integer(BigInt::from(v));
        CyclotomicElem(c)
    }
    fn from_rational(&self, q: &BigRational) -> Result<CyclotomicElem, FieldError> {
        let mut c = vec![BigRational::zero(); self.degree()];
        c[0] = q.clone();
        Ok(CyclotomicElem(c))
    }
    fn add(&self, a: &CyclotomicElem, b: &CyclotomicElem) -> CyclotomicElem {
        CyclotomicElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }
    fn sub(&self, a: &CyclotomicElem, b: &CyclotomicElem) -> CyclotomicElem {
        CyclotomicElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }
    fn mul(&self, a: &CyclotomicElem, b: &CyclotomicElem) -> CyclotomicElem {
        self.reduce(poly_mul(&a.0, &b.0))
    }
    fn neg(&self, a: &CyclotomicElem) -> CyclotomicElem {
        CyclotomicElem(a.0.iter().map(|x| -x).collect())
    }
    fn inv(&self, a: &CyclotomicElem) -> Option<CyclotomicElem> {
        if self.is_zero(a) {
            return None;
        }
        // Extended Euclid: s*a + t*Phi = g, g a nonzero constant since Phi is irreducible.
        let (mut r0, mut r1) = (self.modulus.to_vec(), poly_trim(a.0.clone()));
        let (mut s0, mut s1) = (Vec::<BigRational>::new(), vec![BigRational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let g = r1[0].clone();
        let inv: Vec<BigRational> = s1.iter().map(|c| c / &g).collect();
        Some(self.reduce(inv))
    }
    fn is_zero(&self, a: &CyclotomicElem) -> bool {
        a.0.iter().all(|c| c.is_zero())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn order(&self) -> Option<u64> {
        None
    }
    fn root_of_unity(&self, m: u64) -> Result<CyclotomicElem, FieldError> {
        let z = self.zeta();
        if m == 1 {
            return Ok(self.one());
        }
        if m == 2 {
            return Ok(self.from_i64(-1));
        }
        if m != 0 && self.n % m == 0 {
            return Ok(self.pow(&z, self.n / m));
        }
        if m != 0 && self.n % 2 == 1 && (2 * self.n) % m == 0 {
            let mz = self.neg(&z);
            return Ok(self.pow(&mz, 2 * self.n / m));
        }
        Err(FieldError::NoRootOfUnity(m, format!("QQ(zeta_{})", self.n)))
    }
    fn contains(&self, a: &CyclotomicElem) -> bool {
        a.0.len() == self.degree()
    }
    fn format(&self, a: &CyclotomicElem) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in a.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = is_negative(c);
            let abs = c.abs();
            let coeff = if abs.is_one() && k > 0 {
                String::new()
            } else if abs.denom().is_one() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            let mono = match k {
                0 => String::new(),
                1 => "z".to_string(),
                _ => format!("z^{k}"),
            };
            let body = match (coeff.is_empty(), mono.is_empty()) {
                (true, _) => mono,
                (false, true) => coeff,
                (false, false) => format!("{coeff}*{mono}"),
            };
            if parts.is_empty() {
                parts.push(if neg { format!("-{body}") } else { body });
            } else {
                parts.push(format!("{} {}", if neg { "-" } else { "+" }, body));
            }
        }
        if parts.is_empty() {
            "0".into()
        } else if parts.len() == 1 {
            parts.remove(0)
        } else {
            format!("({})", parts.join(" "))
        }
    }
    fn elements(&self) -> Option<Vec<CyclotomicElem>> {
        None
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> CyclotomicElem {
        CyclotomicElem(
            (0..self.degree())
                .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-5i64..=5))))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_values() {
        let c: Vec<BigInt> = cyclotomic_polynomial(7);
        assert_eq!(c.len(), 7);
        assert!(c.iter().all(|x| x == &BigInt::one()));
        let c12: Vec<i64> = cyclotomic_polynomial(12)
            .iter()
            .map(|x| i64::try_from(x).unwrap())
            .collect();
        assert_eq!(c12, vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_relations() {
        let k = Cyclotomic::new(7);
        let z = k.zeta();
        assert!(k.is_one(&k.pow(&z, 7)));
        for m in 1..7 {
            assert!(!k.is_one(&k.pow(&z, m)));
        }
        let s = (0..7).fold(k.zero(), |acc, i| k.add(&acc, &k.pow(&z, i)));
        assert!(k.is_zero(&s));
        let w = k.root_of_unity(14).unwrap();
        assert_eq!(k.multiplicative_order(&w, 20), Some(14));
        assert!(k.root_of_unity(3).is_err());
    }

    #[test]
    fn inverse() {
        let k = Cyclotomic::new(7);
        let a = k.add(&k.zeta(), &k.from_i64(3));
        let ai = k.inv(&a).unwrap();
        assert!(k.is_one(&k.mul(&a, &ai)));
    }
}
