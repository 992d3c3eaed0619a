use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{HilbertData, Monomial, PolyError, SparsePoly};
use crate::exactfield::{ExactMatrix, Field};

/// Default guard on the number of variables occurring in a Gröbner computation.
pub const DEFAULT_VAR_LIMIT: usize = 8;

/// Reduced grevlex Gröbner basis.
#[derive(Debug, Clone)]
pub struct GroebnerResult<F: Field> {
    pub basis: Vec<SparsePoly<F>>,
    pub leading: Vec<Monomial>,
    /// Present when every generator is homogeneous.
    pub hilbert: Option<HilbertData>,
    /// Number of S-pairs reduced.
    pub pairs_reduced: usize,
}

impl<F: Field> GroebnerResult<F> {
    pub fn contains(&self, p: &SparsePoly<F>) -> bool {
        reduce(p, &self.basis).is_zero()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.leading.iter().any(|m| m.is_one())
    }

    pub fn normal_form(&self, p: &SparsePoly<F>) -> SparsePoly<F> {
        reduce(p, &self.basis)
    }
}

#[inline]
fn var_mask(m: &Monomial) -> u32 {
    m.support().fold(0u32, |acc, v| acc | (1 << v))
}

struct Reducer<'a, F: Field> {
    basis: &'a [SparsePoly<F>],
    masks: Vec<Option<u32>>,
}

impl<'a, F: Field> Reducer<'a, F> {
    fn new(basis: &'a [SparsePoly<F>]) -> Self {
        let masks = basis
            .iter()
            .map(|g| g.leading_monomial().map(var_mask))
            .collect();
        Reducer { basis, masks }
    }

    /// Skips the entries flagged in `skip`.
    fn filtered(basis: &'a [SparsePoly<F>], skip: &[bool]) -> Self {
        let masks = basis
            .iter()
            .zip(skip)
            .map(|(g, &s)| {
                if s {
                    None
                } else {
                    g.leading_monomial().map(var_mask)
                }
            })
            .collect();
        Reducer { basis, masks }
    }

    fn find(&self, m: &Monomial) -> Option<usize> {
        let mm = var_mask(m);
        (0..self.basis.len()).find(|&i| {
            self.masks[i].is_some_and(|k| k & !mm == 0)
                && self.basis[i].leading_monomial().unwrap().divides(m)
        })
    }

    /// Full reduction; the basis elements need not be monic.
    fn reduce(&self, p: &SparsePoly<F>) -> SparsePoly<F> {
        let f = p.field().clone();
        let mut work: BTreeMap<Monomial, F::Elem> = p.terms().iter().cloned().collect();
        let mut out: Vec<(Monomial, F::Elem)> = Vec::new();
        while let Some((m, c)) = work.pop_last() {
            match self.find(&m) {
                Some(i) => {
                    let g = &self.basis[i];
                    let lm = g.leading_monomial().unwrap();
                    let q = m.div(lm);
                    let factor = f.div(&c, g.leading_coeff().unwrap()).unwrap();
                    for (n, d) in &g.terms()[1..] {
                        let k = n.mul(&q);
                        let t = f.mul(&factor, d);
                        let remove = match work.get_mut(&k) {
                            Some(v) => {
                                *v = f.sub(v, &t);
                                f.is_zero(v)
                            }
                            None => {
                                work.insert(k, f.neg(&t));
                                false
                            }
                        };
                        if remove {
                            work.remove(&k);
                        }
                    }
                }
                None => out.push((m, c)),
            }
        }
        SparsePoly::from_sorted(p.ring(), out)
    }
}

/// Normal form of `p` with respect to `basis` (full reduction).
pub fn reduce<F: Field>(p: &SparsePoly<F>, basis: &[SparsePoly<F>]) -> SparsePoly<F> {
    Reducer::new(basis).reduce(p)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

fn effective_variables<F: Field>(gens: &[SparsePoly<F>]) -> usize {
    let mask = gens
        .iter()
        .flat_map(|g| g.terms().iter())
        .fold(0u32, |acc, (m, _)| acc | var_mask(m));
    mask.count_ones() as usize
}

/// Reduced grevlex basis with the default variable guard.
pub fn buchberger<F: Field>(gens: &[SparsePoly<F>]) -> Result<GroebnerResult<F>, PolyError> {
    buchberger_with_limit(gens, DEFAULT_VAR_LIMIT)
}

/// Buchberger with sugar selection and the Gebauer–Möller criteria.
pub fn buchberger_with_limit<F: Field>(
    gens: &[SparsePoly<F>],
    limit: usize,
) -> Result<GroebnerResult<F>, PolyError> {
    let Some(first) = gens.first() else {
        return Err(PolyError::DimensionMismatch("empty generator list".into()));
    };
    let ring = first.ring().clone();
    if gens
        .iter()
        .any(|g| !Arc::ptr_eq(g.ring(), &ring) && **g.ring() != *ring)
    {
        return Err(PolyError::MixedRings);
    }
    let eff = effective_variables(gens);
    if eff > limit {
        return Err(PolyError::ScaleExceeded(eff, limit));
    }
    let homogeneous = gens.iter().all(|g| g.is_homogeneous());

    let mut basis: Vec<SparsePoly<F>> = Vec::new();
    let mut sugar: Vec<u32> = Vec::new();
    let mut redundant: Vec<bool> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut reduced = 0usize;

    let mut inputs: Vec<SparsePoly<F>> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic())
        .collect();
    inputs.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut queue: Vec<(SparsePoly<F>, u32)> = inputs
        .into_iter()
        .map(|g| {
            let s = g.total_degree().unwrap();
            (g, s)
        })
        .collect();
    queue.reverse();

    loop {
        // Feed pending input polynomials first (smallest first), then S-pairs.
        let next: Option<(SparsePoly<F>, u32)> = if let Some((g, s)) = queue.pop() {
            Some((g, s))
        } else if !pairs.is_empty() {
            let best = (0..pairs.len())
                .min_by(|&a, &b| {
                    (pairs[a].sugar, pairs[a].lcm).cmp(&(pairs[b].sugar, pairs[b].lcm))
                })
                .unwrap();
            let pr = pairs.swap_remove(best);
            reduced += 1;
            Some((spoly(&basis[pr.i], &basis[pr.j], &pr.lcm), pr.sugar))
        } else {
            None
        };
        let Some((p, s)) = next else { break };
        let h = Reducer::filtered(&basis, &redundant).reduce(&p);
        if h.is_zero() {
            continue;
        }
        let h = h.monic();
        if h.leading_monomial().unwrap().is_one() {
            let one = SparsePoly::one(&ring);
            return Ok(GroebnerResult {
                leading: vec![Monomial::one()],
                hilbert: homogeneous
                    .then(|| HilbertData::from_leading_monomials(&[Monomial::one()], ring.nvars())),
                basis: vec![one],
                pairs_reduced: reduced,
            });
        }
        let hs = s.max(h.total_degree().unwrap());
        update(&mut basis, &mut sugar, &mut redundant, &mut pairs, h, hs);
    }

    let mut minimal: Vec<SparsePoly<F>> = basis
        .into_iter()
        .zip(redundant)
        .filter(|(_, r)| !*r)
        .map(|(g, _)| g)
        .collect();
    minimal.sort_by(|a, b| a.leading_monomial().cmp(&b.leading_monomial()));
    let mut keep: Vec<SparsePoly<F>> = Vec::new();
    for g in minimal {
        let lm = *g.leading_monomial().unwrap();
        if !keep
            .iter()
            .any(|k| k.leading_monomial().unwrap().divides(&lm))
        {
            keep.push(g);
        }
    }
    // Interreduce the tails.
    let mut out = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<SparsePoly<F>> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let g = &keep[i];
        let lead = SparsePoly::from_sorted(&ring, vec![g.terms()[0].clone()]);
        let tail = SparsePoly::from_sorted(&ring, g.terms()[1..].to_vec());
        out.push(lead.add(&Reducer::new(&others).reduce(&tail)).monic());
    }
    let leading: Vec<Monomial> = out.iter().map(|g| *g.leading_monomial().unwrap()).collect();
    let hilbert = homogeneous.then(|| HilbertData::from_leading_monomials(&leading, ring.nvars()));
    Ok(GroebnerResult {
        basis: out,
        leading,
        hilbert,
        pairs_reduced: reduced,
    })
}

fn spoly<F: Field>(a: &SparsePoly<F>, b: &SparsePoly<F>, lcm: &Monomial) -> SparsePoly<F> {
    let f = a.field();
    let one = f.one();
    let ta = lcm.div(a.leading_monomial().unwrap());
    let tb = lcm.div(b.leading_monomial().unwrap());
    a.mul_term(&ta, &one).sub(&b.mul_term(&tb, &one))
}

fn update<F: Field>(
    basis: &mut Vec<SparsePoly<F>>,
    sugar: &mut Vec<u32>,
    redundant: &mut Vec<bool>,
    pairs: &mut Vec<Pair>,
    h: SparsePoly<F>,
    hs: u32,
) {
    let k = basis.len();
    let th = *h.leading_monomial().unwrap();
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|g| *g.leading_monomial().unwrap())
        .collect();

    // Candidate pairs (i, k).
    let cands: Vec<(usize, Monomial, bool)> = (0..k)
        .filter(|&i| !redundant[i])
        .map(|i| (i, lms[i].lcm(&th), lms[i].coprime(&th)))
        .collect();
    // Chain criterion among the new pairs.
    let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
    for (idx, c) in cands.iter().enumerate() {
        let dominated = cands
            .iter()
            .enumerate()
            .any(|(jdx, d)| jdx != idx && d.1 != c.1 && d.1.divides(&c.1));
        if !dominated {
            kept.push(*c);
        }
    }
    // Equal lcms: drop the group if one of them is coprime, otherwise keep one.
    let mut new_pairs: Vec<Pair> = Vec::new();
    let mut groups: BTreeMap<Monomial, Vec<(usize, bool)>> = BTreeMap::new();
    for (i, l, cop) in kept {
        groups.entry(l).or_default().push((i, cop));
    }
    for (l, members) in groups {
        if members.iter().any(|m| m.1) {
            continue;
        }
        let i = members[0].0;
        let s = (sugar[i] + l.degree() - lms[i].degree()).max(hs + l.degree() - th.degree());
        new_pairs.push(Pair {
            i,
            j: k,
            lcm: l,
            sugar: s,
        });
    }
    // Chain criterion on old pairs.
    pairs.retain(|p| {
        !(th.divides(&p.lcm) && lms[p.i].lcm(&th) != p.lcm && lms[p.j].lcm(&th) != p.lcm)
    });
    pairs.extend(new_pairs);
    for i in 0..k {
        if !redundant[i] && th.divides(&lms[i]) {
            redundant[i] = true;
        }
    }
    basis.push(h);
    sugar.push(hs);
    redundant.push(false);
}

/// `I : ℓ^∞` for homogeneous `I` and random linear forms `ℓ`, via the
/// grevlex property of the last variable after a coordinate change. Several
/// independent forms are tried and their Hilbert data must agree.
pub fn saturate_by_linear_form<F: Field>(
    gens: &[SparsePoly<F>],
    seed: u64,
    trials: usize,
    limit: usize,
) -> Result<GroebnerResult<F>, PolyError> {
    let Some(first) = gens.first() else {
        return Err(PolyError::DimensionMismatch("empty generator list".into()));
    };
    if !gens.iter().all(|g| g.is_homogeneous()) {
        return Err(PolyError::Inconclusive(
            "saturation needs homogeneous generators".into(),
        ));
    }
    let ring = first.ring().clone();
    let f = ring.field.clone();
    let n = ring.nvars();
    // A form through an associated point lowers the Hilbert polynomial; such forms are skipped.
    let target = buchberger_with_limit(gens, limit)?
        .hilbert
        .map(|h| h.polynomial);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut result: Option<GroebnerResult<F>> = None;
    let mut agreeing = 0;
    for _ in 0..8 * trials.max(1) {
        let mut ell: Vec<F::Elem> = (0..n).map(|_| f.random(&mut rng)).collect();
        ell[n - 1] = f.one();
        let sat = saturate_by_form(gens, &ell, limit)?;
        if sat.hilbert.as_ref().map(|h| &h.polynomial) != target.as_ref() {
            continue;
        }
        match &result {
            None => result = Some(sat),
            Some(prev) => {
                if prev.hilbert != sat.hilbert || prev.leading != sat.leading {
                    return Err(PolyError::Inconclusive(
                        "saturation differs between linear forms".into(),
                    ));
                }
            }
        }
        agreeing += 1;
        if agreeing == trials.max(1) {
            break;
        }
    }
    result.ok_or_else(|| {
        PolyError::Inconclusive("no linear form avoids the associated points".into())
    })
}

/// `I : ℓ^∞` for a given nonzero linear form `ℓ` (coefficient vector).
pub fn saturate_by_form<F: Field>(
    gens: &[SparsePoly<F>],
    ell: &[F::Elem],
    limit: usize,
) -> Result<GroebnerResult<F>, PolyError> {
    let Some(first) = gens.first() else {
        return Err(PolyError::DimensionMismatch("empty generator list".into()));
    };
    if !gens.iter().all(|g| g.is_homogeneous()) {
        return Err(PolyError::Inconclusive(
            "saturation needs homogeneous generators".into(),
        ));
    }
    let ring = first.ring().clone();
    let f = ring.field.clone();
    let n = ring.nvars();
    if ell.len() != n {
        return Err(PolyError::DimensionMismatch(format!(
            "form with {} coefficients in {n} variables",
            ell.len()
        )));
    }
    let Some(pivot) = (0..n).rev().find(|&j| !f.is_zero(&ell[j])) else {
        return Err(PolyError::DimensionMismatch("zero linear form".into()));
    };
    // y = B x: the coordinates other than the pivot, then y_{n-1} = ℓ.
    let others: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
    let b = ExactMatrix::from_fn(&f, n, n, |i, j| {
        if i == n - 1 {
            ell[j].clone()
        } else if others[i] == j {
            f.one()
        } else {
            f.zero()
        }
    });
    let binv = b.inverse().expect("pivot coefficient is nonzero");
    let to_y: Vec<SparsePoly<F>> = (0..n)
        .map(|i| SparsePoly::linear(&ring, &binv.row(i).to_vec()))
        .collect();
    let to_x: Vec<SparsePoly<F>> = (0..n)
        .map(|i| SparsePoly::linear(&ring, &b.row(i).to_vec()))
        .collect();
    let moved: Vec<SparsePoly<F>> = gens.iter().map(|g| g.substitute(&ring, &to_y)).collect();
    let gb = buchberger_with_limit(&moved, limit)?;
    let last = Monomial::var(n - 1);
    let stripped: Vec<SparsePoly<F>> = gb
        .basis
        .iter()
        .map(|g| {
            let k = g
                .terms()
                .iter()
                .map(|(m, _)| m.exp(n - 1))
                .min()
                .unwrap_or(0);
            let mut d = Monomial::one();
            for _ in 0..k {
                d = d.mul(&last);
            }
            let terms = g
                .terms()
                .iter()
                .map(|(m, c)| (m.div(&d), c.clone()))
                .collect();
            SparsePoly::from_terms(&ring, terms)
        })
        .collect();
    let back: Vec<SparsePoly<F>> = stripped
        .iter()
        .map(|g| g.substitute(&ring, &to_x))
        .collect();
    buchberger_with_limit(&back, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::{PrimeField, Rationals};
    use crate::polyring::PolyRing;

    fn ring3<F: Field>(f: &F) -> Arc<PolyRing<F>> {
        PolyRing::new(f, vec!["x".into(), "y".into(), "z".into()])
    }

    #[test]
    fn twisted_cubic() {
        let q = Rationals;
        let r = PolyRing::new(&q, vec!["a".into(), "b".into(), "c".into(), "d".into()]);
        let v = |i| SparsePoly::var(&r, i);
        let gens = vec![
            v(0).mul(&v(2)).sub(&v(1).mul(&v(1))),
            v(1).mul(&v(3)).sub(&v(2).mul(&v(2))),
            v(0).mul(&v(3)).sub(&v(1).mul(&v(2))),
        ];
        let gb = buchberger(&gens).unwrap();
        let h = gb.hilbert.clone().unwrap();
        assert_eq!(h.polynomial.to_string(), "3t+1");
        assert_eq!(h.projective_dim, 1);
        assert!(gb.contains(&gens[0].mul(&v(3))));
    }

    #[test]
    fn unit_ideal_and_guard() {
        let f = PrimeField::new(7).unwrap();
        let r = ring3(&f);
        let x = SparsePoly::var(&r, 0);
        let one = SparsePoly::one(&r);
        let gb = buchberger(&[x.clone(), x.add(&one)]).unwrap();
        assert!(gb.is_unit_ideal());
        assert_eq!(
            buchberger_with_limit(&[x.add(&SparsePoly::var(&r, 1))], 1).unwrap_err(),
            PolyError::ScaleExceeded(2, 1)
        );
    }

    #[test]
    fn saturation_removes_irrelevant_component() {
        // (x) ∩ (x^2, y, z) = (x^2, x*y, x*z); saturating gives (x).
        let f = PrimeField::new(101).unwrap();
        let r = ring3(&f);
        let x = SparsePoly::var(&r, 0);
        let y = SparsePoly::var(&r, 1);
        let z = SparsePoly::var(&r, 2);
        let gens = vec![x.mul(&x), x.mul(&y), x.mul(&z)];
        let raw = buchberger(&gens).unwrap().hilbert.unwrap();
        assert_eq!(raw.hilbert_function(1), 3);
        let sat = saturate_by_linear_form(&gens, 3, 2, 8).unwrap();
        assert_eq!(sat.basis, vec![x]);
        let h = sat.hilbert.unwrap();
        assert_eq!(h.hilbert_function(1), 2);
        assert_eq!(h.polynomial, raw.polynomial);
    }

    #[test]
    fn saturation_in_two_variables() {
        let f = PrimeField::new(13).unwrap();
        let r = PolyRing::new(&f, vec!["x".into(), "y".into()]);
        let x = SparsePoly::var(&r, 0);
        let y = SparsePoly::var(&r, 1);
        let gens = vec![x.mul(&x), x.mul(&y)];
        let gb = buchberger(&gens).unwrap();
        assert_eq!(gb.basis.len(), 2);
        assert_eq!(
            saturate_by_linear_form(&gens, 9, 3, 8).unwrap().basis,
            vec![x.clone()]
        );
        // (x) ∩ (y): removing the line x = 0 leaves y = 0.
        let sat = saturate_by_form(&[x.mul(&y)], &[1, 0], 8).unwrap();
        assert_eq!(sat.basis, vec![y.clone()]);
        let sat = saturate_by_form(&[x.mul(&y)], &[0, 1], 8).unwrap();
        assert_eq!(sat.basis, vec![x]);
    }
}
