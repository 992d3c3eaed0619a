//! Dense univariate polynomials over `F_p`, coefficients from the constant
//! term up. Used for extension-field moduli and for factoring characteristic
//! polynomials of multiplication matrices.

pub type UPoly = Vec<u64>;

pub fn trim(mut a: UPoly) -> UPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    Some(pow_mod(a, p - 2, p))
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

#[inline]
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn add(a: &[u64], b: &[u64], p: u64) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn sub(a: &[u64], b: &[u64], p: u64) -> UPoly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

pub fn mul(a: &[u64], b: &[u64], p: u64) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(x, y, p)) % p;
        }
    }
    trim(out)
}

pub fn scale(a: &[u64], c: u64, p: u64) -> UPoly {
    trim(a.iter().map(|&x| mul_mod(x, c, p)).collect())
}

/// Quotient and remainder. Panics on a zero divisor.
pub fn divrem(a: &[u64], m: &[u64], p: u64) -> (UPoly, UPoly) {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = inv_mod(m[dm], p).expect("leading coefficient invertible");
    let mut r: UPoly = trim(a.to_vec());
    if r.len() <= dm {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - dm];
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = mul_mod(r[dr], lead_inv, p);
        let shift = dr - dm;
        q[shift] = c;
        for (i, &mi) in m.iter().enumerate().take(dm + 1) {
            let t = mul_mod(c, mi, p);
            r[shift + i] = (r[shift + i] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

pub fn rem(a: &[u64], m: &[u64], p: u64) -> UPoly {
    divrem(a, m, p).1
}

pub fn monic(a: &[u64], p: u64) -> UPoly {
    match degree(a) {
        None => Vec::new(),
        Some(d) => scale(a, inv_mod(a[d], p).unwrap(), p),
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> UPoly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> UPoly {
    rem(&mul(a, b, p), m, p)
}

pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> UPoly {
    let mut acc = rem(&[1], m, p);
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        e >>= 1;
    }
    acc
}

pub fn derivative(a: &[u64], p: u64) -> UPoly {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % p, p))
            .collect(),
    )
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

/// x^(p^i) mod m, for i = 0..=n.
fn frobenius_powers(m: &[u64], n: usize, p: u64) -> Vec<UPoly> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = rem(&[0, 1], m, p);
    out.push(cur.clone());
    for _ in 0..n {
        cur = powmod(&cur, p as u128, m, p);
        out.push(cur.clone());
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(k) = degree(f) else { return false };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    let f = monic(f, p);
    let fr = frobenius_powers(&f, k, p);
    let x = rem(&[0, 1], &f, p);
    if fr[k] != x {
        return false;
    }
    for q in super::prime_factors(k as u64) {
        let d = k / q as usize;
        let g = gcd(&sub(&fr[d], &x, p), &f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Distinct-degree factorization of a squarefree monic polynomial:
/// pairs (d, product of all irreducible factors of degree d).
pub fn distinct_degree_factorization(f: &[u64], p: u64) -> Vec<(usize, UPoly)> {
    let mut f = monic(f, p);
    let mut out = Vec::new();
    let mut h = rem(&[0, 1], &f, p);
    let mut d = 0usize;
    while let Some(df) = degree(&f) {
        if df == 0 {
            break;
        }
        d += 1;
        if 2 * d > df {
            out.push((df, f.clone()));
            break;
        }
        h = powmod(&h, p as u128, &f, p);
        let g = gcd(&sub(&h, &[0, 1], p), &f, p);
        if degree(&g).unwrap_or(0) > 0 {
            out.push((d, g.clone()));
            f = divrem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
    }
    out
}

pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    let d = derivative(f, p);
    if d.is_empty() {
        return degree(f).unwrap_or(0) == 0;
    }
    degree(&gcd(f, &d, p)) == Some(0)
}

/// Splits a monic squarefree product of irreducibles of degree `d` into its
/// factors (Cantor–Zassenhaus, odd `p`).
pub fn equal_degree_split(f: &[u64], d: usize, p: u64, rng: &mut impl rand::Rng) -> Vec<UPoly> {
    let f = monic(f, p);
    let n = degree(&f).unwrap_or(0);
    if n <= d {
        return vec![f];
    }
    assert!(
        p % 2 == 1,
        "equal-degree splitting needs odd characteristic"
    );
    let e = ((p as u128).pow(d as u32) - 1) / 2;
    loop {
        let a: UPoly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if degree(&a).unwrap_or(0) == 0 {
            continue;
        }
        let g = gcd(&a, &f, p);
        let g = if degree(&g).unwrap_or(0) > 0 {
            g
        } else {
            gcd(&sub(&powmod(&a, e, &f, p), &[1], p), &f, p)
        };
        let dg = degree(&g).unwrap_or(0);
        if dg > 0 && dg < n {
            let h = divrem(&f, &g, p).0;
            let mut out = equal_degree_split(&g, d, p, rng);
            out.extend(equal_degree_split(&h, d, p, rng));
            return out;
        }
    }
}

/// Monic irreducible factors with multiplicities, sorted by (degree, coefficients).
pub fn factor(f: &[u64], p: u64, seed: u64) -> Vec<(UPoly, usize)> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<(UPoly, usize)> = Vec::new();
    factor_rec(&monic(f, p), p, 1, &mut rng, &mut out);
    out.sort_by(|a, b| {
        (a.0.len(), a.0.iter().rev().collect::<Vec<_>>())
            .cmp(&(b.0.len(), b.0.iter().rev().collect()))
    });
    let mut merged: Vec<(UPoly, usize)> = Vec::new();
    for (g, m) in out {
        match merged.last_mut() {
            Some(last) if last.0 == g => last.1 += m,
            _ => merged.push((g, m)),
        }
    }
    merged
}

fn factor_rec(
    f: &[u64],
    p: u64,
    scale: usize,
    rng: &mut impl rand::Rng,
    out: &mut Vec<(UPoly, usize)>,
) {
    if degree(f).unwrap_or(0) == 0 {
        return;
    }
    let d = derivative(f, p);
    if d.is_empty() {
        // f is a p-th power: f(x) = g(x^p) = g(x)^p over F_p.
        let g: UPoly = f.iter().step_by(p as usize).copied().collect();
        factor_rec(&g, p, scale * p as usize, rng, out);
        return;
    }
    let g = gcd(f, &d, p);
    let radical = monic(&divrem(f, &g, p).0, p);
    let mut rest = f.to_vec();
    for (k, prod) in distinct_degree_factorization(&radical, p) {
        for q in equal_degree_split(&prod, k, p, rng) {
            let mut m = 0;
            loop {
                let (quo, r) = divrem(&rest, &q, p);
                if !r.is_empty() {
                    break;
                }
                rest = quo;
                m += 1;
            }
            out.push((q, m * scale));
        }
    }
    // Remaining factors have multiplicity divisible by p.
    factor_rec(&monic(&rest, p), p, scale, rng, out);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility() {
        // x^2 + 1 over F_3 is irreducible, over F_5 it is not.
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(!is_irreducible(&[1, 0, 1], 5));
        // x^4 + x + 1 over F_2
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        // (x^2+x+1)^2 over F_2
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
    }

    #[test]
    fn ddf_degrees() {
        // (x-1)(x-2)(x^2+1) over F_7: x^2+1 irreducible mod 7.
        let f = mul(&mul(&[6, 1], &[5, 1], 7), &[1, 0, 1], 7);
        let parts = distinct_degree_factorization(&f, 7);
        let degs: Vec<(usize, usize)> = parts
            .iter()
            .map(|(d, g)| (*d, degree(g).unwrap()))
            .collect();
        assert_eq!(degs, vec![(1, 2), (2, 2)]);
    }

    #[test]
    fn division_roundtrip() {
        let a = vec![3, 1, 4, 1, 5];
        let m = vec![2, 7, 1];
        let (q, r) = divrem(&a, &m, 11);
        assert_eq!(add(&mul(&q, &m, 11), &r, 11), trim(a));
    }

    #[test]
    fn full_factorization() {
        let p = 7;
        // (x-1)^2 (x^2+1) (x-3)^7
        let mut f = mul(&[6, 1], &[6, 1], p);
        f = mul(&f, &[1, 0, 1], p);
        for _ in 0..7 {
            f = mul(&f, &[4, 1], p);
        }
        let fs = factor(&f, p, 1);
        assert_eq!(
            fs,
            vec![(vec![4, 1], 7), (vec![6, 1], 2), (vec![1, 0, 1], 1)]
        );
    }
}
