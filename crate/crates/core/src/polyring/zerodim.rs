use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::groebner::buchberger_with_limit;
use super::{Monomial, PolyError, PolyRing, SparsePoly};
use crate::exactfield::uniarith;
use crate::exactfield::{ExactMatrix, ExtensionField, Field, PrimeField};

/// Characteristic polynomial `det(t I - A)`, constant term first, via
/// reduction to Hessenberg form.
pub fn char_poly<F: Field>(a: &ExactMatrix<F>) -> Vec<F::Elem> {
    let f = a.field().clone();
    let n = a.rows();
    assert_eq!(n, a.cols(), "square matrix");
    let mut h = a.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(piv) = (j + 1..n).find(|&i| !f.is_zero(h.get(i, j))) else {
            continue;
        };
        if piv != j + 1 {
            for c in 0..n {
                let t = h.get(piv, c).clone();
                h.set(piv, c, h.get(j + 1, c).clone());
                h.set(j + 1, c, t);
            }
            for r in 0..n {
                let t = h.get(r, piv).clone();
                h.set(r, piv, h.get(r, j + 1).clone());
                h.set(r, j + 1, t);
            }
        }
        let inv = f.inv(h.get(j + 1, j)).unwrap();
        for i in j + 2..n {
            let m = f.mul(h.get(i, j), &inv);
            if f.is_zero(&m) {
                continue;
            }
            for c in 0..n {
                let v = f.sub(h.get(i, c), &f.mul(&m, h.get(j + 1, c)));
                h.set(i, c, v);
            }
            for r in 0..n {
                let v = f.add(h.get(r, j + 1), &f.mul(&m, h.get(r, i)));
                h.set(r, j + 1, v);
            }
        }
    }
    // p_k(t) = (t - h_kk) p_{k-1} - sum_{i<k} h_{ik} (prod_{m=i+1..k} h_{m,m-1}) p_{i-1}
    let mut polys: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![f.zero(); k + 2];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] = f.add(&next[d + 1], c);
            next[d] = f.sub(&next[d], &f.mul(h.get(k, k), c));
        }
        let mut prod = f.one();
        for i in (0..k).rev() {
            prod = f.mul(&prod, h.get(i + 1, i));
            let coef = f.mul(h.get(i, k), &prod);
            if f.is_zero(&coef) {
                continue;
            }
            for (d, c) in polys[i].iter().enumerate() {
                next[d] = f.sub(&next[d], &f.mul(&coef, c));
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// One Galois orbit of points: a point over `F_p[z]/(modulus)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueClass {
    pub degree: usize,
    /// Minimal polynomial of the residue field generator, constant term first.
    pub modulus: Vec<u64>,
    /// Normalized projective coordinates, each a polynomial in `z`.
    pub coords: Vec<Vec<u64>>,
    /// Length of the local ring at each point of the orbit.
    pub multiplicity: usize,
}

impl ResidueClass {
    pub fn is_rational(&self) -> bool {
        self.degree == 1
    }

    /// Coordinates of a rational point.
    pub fn rational_coords(&self) -> Option<Vec<u64>> {
        self.is_rational().then(|| {
            self.coords
                .iter()
                .map(|c| c.first().copied().unwrap_or(0))
                .collect()
        })
    }
}

/// Zero-dimensional scheme over `F_p`, returned as its residue classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointSet {
    pub p: u64,
    pub nvars: usize,
    pub classes: Vec<ResidueClass>,
}

impl PointSet {
    /// Length of the scheme.
    pub fn length(&self) -> usize {
        self.classes.iter().map(|c| c.degree * c.multiplicity).sum()
    }

    /// Number of geometric points.
    pub fn geometric_points(&self) -> usize {
        self.classes.iter().map(|c| c.degree).sum()
    }

    /// Number of points over `F_{p^k}`.
    pub fn count_over(&self, k: usize) -> usize {
        self.classes
            .iter()
            .filter(|c| k % c.degree == 0)
            .map(|c| c.degree)
            .sum()
    }

    pub fn is_reduced(&self) -> bool {
        self.classes.iter().all(|c| c.multiplicity == 1)
    }

    pub fn rational_points(&self) -> Vec<Vec<u64>> {
        self.classes
            .iter()
            .filter_map(|c| c.rational_coords())
            .collect()
    }

    /// Residue degrees, sorted.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.classes.iter().map(|c| c.degree).collect();
        d.sort_unstable();
        d
    }
}

fn normal_set(leads: &[Monomial], nvars: usize) -> Result<Vec<Monomial>, PolyError> {
    for v in 0..nvars {
        if !leads
            .iter()
            .any(|m| m.support().all(|u| u == v) && !m.is_one())
        {
            return Err(PolyError::NotZeroDimensional);
        }
    }
    let mut seen: BTreeSet<Monomial> = BTreeSet::new();
    let mut frontier = vec![Monomial::one()];
    if leads.iter().any(|m| m.is_one()) {
        return Ok(Vec::new());
    }
    while let Some(m) = frontier.pop() {
        if !seen.insert(m) {
            continue;
        }
        for v in 0..nvars {
            let n = m.mul(&Monomial::var(v));
            if !seen.contains(&n) && !leads.iter().any(|l| l.divides(&n)) {
                frontier.push(n);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Points of the projective scheme cut out by homogeneous `gens` over `F_p`,
/// found in a random affine chart from multiplication matrices on the normal
/// set. Fails if the scheme is not zero-dimensional.
pub fn solve_zero_dimensional(
    gens: &[SparsePoly<PrimeField>],
    seed: u64,
    limit: usize,
) -> Result<PointSet, PolyError> {
    let Some(first) = gens.first() else {
        return Err(PolyError::DimensionMismatch("empty generator list".into()));
    };
    let ring = first.ring().clone();
    let f = ring.field.clone();
    let p = f.p();
    let n = ring.nvars();
    let gb = buchberger_with_limit(gens, limit)?;
    let hilb = gb
        .hilbert
        .clone()
        .ok_or_else(|| PolyError::Inconclusive("generators are not homogeneous".into()))?;
    if hilb.projective_dim < 0 {
        return Ok(PointSet {
            p,
            nvars: n,
            classes: Vec::new(),
        });
    }
    if hilb.projective_dim > 0 {
        return Err(PolyError::NotZeroDimensional);
    }
    let expected = hilb.degree as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let aff_names: Vec<String> = (0..n - 1).map(|i| format!("y{i}")).collect();
    let aff = PolyRing::new(&f, aff_names);

    for _attempt in 0..12 {
        // y = B x with last row a random form ℓ; the chart is ℓ = 1.
        let mut ell: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        ell[n - 1] = 1;
        let b = ExactMatrix::from_fn(&f, n, n, |i, j| {
            if i == n - 1 {
                ell[j]
            } else if i == j {
                1
            } else {
                0
            }
        });
        let binv = b.inverse().expect("unitriangular");
        // x_i = sum_j binv[i][j] y_j with y_{n-1} = 1.
        let images: Vec<SparsePoly<PrimeField>> = (0..n)
            .map(|i| {
                let mut terms: Vec<(Monomial, u64)> = (0..n - 1)
                    .map(|j| (Monomial::var(j), *binv.get(i, j)))
                    .collect();
                terms.push((Monomial::one(), *binv.get(i, n - 1)));
                SparsePoly::from_terms(&aff, terms)
            })
            .collect();
        let affine: Vec<SparsePoly<PrimeField>> = gb
            .basis
            .iter()
            .map(|g| g.substitute(&aff, &images))
            .filter(|g| !g.is_zero())
            .collect();
        if affine.is_empty() {
            continue;
        }
        let agb = buchberger_with_limit(&affine, limit)?;
        if n == 1 {
            continue;
        }
        let basis = normal_set(&agb.leading, n - 1)?;
        if basis.len() != expected {
            // Part of the scheme lies on the hyperplane at infinity.
            continue;
        }
        let index: HashMap<Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (*m, i)).collect();
        let mult: Vec<ExactMatrix<PrimeField>> = (0..n - 1)
            .map(|v| {
                let mut m = ExactMatrix::zeros(&f, basis.len(), basis.len());
                for (col, mono) in basis.iter().enumerate() {
                    let prod = SparsePoly::from_terms(&aff, vec![(mono.mul(&Monomial::var(v)), 1)]);
                    for (t, c) in agb.normal_form(&prod).terms() {
                        m.set(index[t], col, *c);
                    }
                }
                m
            })
            .collect();
        // Pick the separating combination with the most distinct roots.
        let mut best: Option<(usize, Vec<(Vec<u64>, usize)>, ExactMatrix<PrimeField>)> = None;
        for _ in 0..4 {
            let r: Vec<u64> = (0..n - 1).map(|_| rng.gen_range(0..p)).collect();
            let mut mu = ExactMatrix::zeros(&f, basis.len(), basis.len());
            for (v, m) in mult.iter().enumerate() {
                mu = mu.add(&m.scale(&r[v]))?;
            }
            let chi = char_poly(&mu);
            let factors = uniarith::factor(&chi, p, rng.gen());
            let distinct: usize = factors.iter().map(|(q, _)| q.len() - 1).sum();
            if best.as_ref().is_none_or(|b| distinct > b.0) {
                best = Some((distinct, factors, mu));
            }
            if distinct == basis.len() {
                break;
            }
        }
        let (_, factors, mu) = best.unwrap();
        let mut classes = Vec::new();
        let mut ok = true;
        for (q, m) in factors {
            let d = q.len() - 1;
            let k = ExtensionField::with_modulus(p, q.clone())?;
            let z = k.generator();
            let lift = |a: &ExactMatrix<PrimeField>| a.transpose().map(&k, |c| k.embed(*c));
            let shifted = lift(&mu).sub(&ExactMatrix::identity(&k, basis.len()).scale(&z))?;
            let w = shifted.kernel_basis();
            if w.is_empty() {
                ok = false;
                break;
            }
            let wmat = ExactMatrix::from_rows(&k, w.clone())?.transpose();
            let dim = w.len();
            let dim_inv = k.inv(&k.from_i64(dim as i64)).ok_or_else(|| {
                PolyError::Inconclusive("eigenspace dimension divisible by p".into())
            })?;
            let mut ycoords = Vec::with_capacity(n - 1);
            for mv in &mult {
                // Trace of the transpose action restricted to the eigenspace.
                let mt = lift(mv);
                let mut tr = k.zero();
                for j in 0..dim {
                    let img = mt.mul_vec(&w[j])?;
                    let sol = wmat.solve(&img)?.ok_or_else(|| {
                        PolyError::Inconclusive("eigenspace not invariant".into())
                    })?;
                    tr = k.add(&tr, &sol[j]);
                }
                ycoords.push(k.mul(&tr, &dim_inv));
            }
            ycoords.push(k.one());
            let mut x: Vec<Vec<u64>> = (0..n)
                .map(|i| {
                    (0..n).fold(k.zero(), |acc, j| {
                        k.add(&acc, &k.mul(&k.embed(*binv.get(i, j)), &ycoords[j]))
                    })
                })
                .collect();
            let lead = x.iter().position(|c| !k.is_zero(c)).unwrap();
            let inv = k.inv(&x[lead]).unwrap();
            for c in x.iter_mut() {
                *c = k.mul(c, &inv);
            }
            if !gens
                .iter()
                .all(|g| k.is_zero(&g.eval_in(&k, &|c| k.embed(*c), &x)))
            {
                ok = false;
                break;
            }
            classes.push(ResidueClass {
                degree: d,
                modulus: q,
                coords: x,
                multiplicity: m,
            });
        }
        if !ok {
            continue;
        }
        classes.sort_by(|a, b| (a.degree, &a.coords).cmp(&(b.degree, &b.coords)));
        let out = PointSet {
            p,
            nvars: n,
            classes,
        };
        if out.length() != expected {
            continue;
        }
        return Ok(out);
    }
    Err(PolyError::Inconclusive(
        "no chart separates the points".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::Rationals;

    #[test]
    fn char_poly_companion() {
        let q = Rationals;
        // companion of t^3 - 2t + 5
        let m = ExactMatrix::from_rows(
            &q,
            vec![
                vec![q.from_i64(0), q.from_i64(0), q.from_i64(-5)],
                vec![q.from_i64(1), q.from_i64(0), q.from_i64(2)],
                vec![q.from_i64(0), q.from_i64(1), q.from_i64(0)],
            ],
        )
        .unwrap();
        let cp = char_poly(&m);
        assert_eq!(
            cp,
            vec![q.from_i64(5), q.from_i64(-2), q.from_i64(0), q.from_i64(1)]
        );
    }

    #[test]
    fn conic_meets_line() {
        // x^2 + y^2 - z^2 = 0, x = 0 over F_7: y^2 = z^2 gives two rational points.
        let f = PrimeField::new(7).unwrap();
        let r = PolyRing::new(&f, vec!["x".into(), "y".into(), "z".into()]);
        let v = |i| SparsePoly::var(&r, i);
        let conic = v(0).mul(&v(0)).add(&v(1).mul(&v(1))).sub(&v(2).mul(&v(2)));
        let pts = solve_zero_dimensional(&[conic.clone(), v(0)], 5, 8).unwrap();
        assert_eq!(pts.degrees(), vec![1, 1]);
        assert_eq!(pts.rational_points(), vec![vec![0, 1, 1], vec![0, 1, 6]]);
        // x^2 + y^2 = 0, z = 0: -1 is not a square mod 7, one point of degree 2.
        let pts = solve_zero_dimensional(&[conic, v(2)], 5, 8).unwrap();
        assert_eq!(pts.degrees(), vec![2]);
        assert_eq!(pts.count_over(1), 0);
        assert_eq!(pts.count_over(2), 2);
    }

    #[test]
    fn tangent_line_is_double() {
        let f = PrimeField::new(11).unwrap();
        let r = PolyRing::new(&f, vec!["x".into(), "y".into(), "z".into()]);
        let v = |i| SparsePoly::var(&r, i);
        let conic = v(0).mul(&v(2)).sub(&v(1).mul(&v(1)));
        let pts = solve_zero_dimensional(&[conic, v(0)], 1, 8).unwrap();
        assert_eq!(pts.length(), 2);
        assert_eq!(pts.geometric_points(), 1);
        assert!(!pts.is_reduced());
        assert_eq!(pts.rational_points(), vec![vec![0, 0, 1]]);
    }
}
