use std::collections::BTreeMap;

use num_integer::binomial;
use serde::Serialize;

use super::bott::{
    bott_cohomology, box_partitions, omega_decompose, pieri_exterior, pieri_symmetric,
    WeightedBundle,
};
use super::CohomologyError;
use crate::grassmann::grassmannian_degree;

/// Zero locus in `Gr(k,n)` of a general section of `Q(1)^{⊕e} ⊕ O(1)^{⊕a}`
/// with `e ∈ {0,1}`. `e = 0` is a linear section of codimension `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ZeroLocus {
    pub k: usize,
    pub n: usize,
    pub quotient: bool,
    pub linear: usize,
}

impl ZeroLocus {
    pub fn linear_section(k: usize, n: usize, r: usize) -> Self {
        ZeroLocus {
            k,
            n,
            quotient: false,
            linear: r,
        }
    }

    /// `Q(1) ⊕ O(1)^a` on `Gr(2,6)`.
    pub fn q1_model(a: usize) -> Self {
        ZeroLocus {
            k: 2,
            n: 6,
            quotient: true,
            linear: a,
        }
    }

    pub fn rank(&self) -> usize {
        if self.quotient {
            self.n - self.k + self.linear
        } else {
            self.linear
        }
    }

    pub fn grassmannian_dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    pub fn dim(&self) -> i64 {
        self.grassmannian_dim() as i64 - self.rank() as i64
    }

    /// `t` with `ω_X = O(t)`: `ω_G ⊗ det E` and `det Q(1) = O(n-k+1)`.
    pub fn canonical_twist(&self) -> i64 {
        let q = if self.quotient {
            (self.n - self.k + 1) as i64
        } else {
            0
        };
        q + self.linear as i64 - self.n as i64
    }

    fn check(&self) -> Result<(), CohomologyError> {
        if self.k == 0 || self.k >= self.n {
            return Err(CohomologyError::BadWeight(format!(
                "Gr({},{}) is not a Grassmannian",
                self.k, self.n
            )));
        }
        if self.dim() < 2 {
            return Err(CohomologyError::BadRange {
                p: self.rank(),
                dim: self.grassmannian_dim(),
            });
        }
        Ok(())
    }

    fn quotient_rows(&self) -> usize {
        if self.quotient {
            self.n - self.k
        } else {
            0
        }
    }

    /// `∧^j E* ⊗ F`, `E* = Q*(-1) ⊕ O(-1)^a`.
    pub fn koszul_term(&self, f: &WeightedBundle, j: usize) -> Vec<(WeightedBundle, i64)> {
        let mut out = Vec::new();
        for b in 0..=j.min(self.quotient_rows()) {
            let c = j - b;
            if c > self.linear {
                continue;
            }
            let mult = binomial(self.linear as i64, c as i64);
            for beta in pieri_exterior(&f.beta, b) {
                out.push((
                    WeightedBundle {
                        beta,
                        twist: f.twist - j as i64,
                        ..f.clone()
                    },
                    mult,
                ));
            }
        }
        out
    }

    /// `S^i N* ⊗ F` with `N* = E*|_X`.
    pub fn conormal_symmetric(&self, f: &WeightedBundle, i: usize) -> Vec<(WeightedBundle, i64)> {
        let mut out = Vec::new();
        let bmax = if self.quotient { i } else { 0 };
        for b in 0..=bmax {
            let c = i - b;
            let mult = if self.linear == 0 {
                i64::from(c == 0)
            } else {
                binomial((self.linear + c - 1) as i64, c as i64)
            };
            if mult == 0 {
                continue;
            }
            for beta in pieri_symmetric(&f.beta, b) {
                out.push((
                    WeightedBundle {
                        beta,
                        twist: f.twist - i as i64,
                        ..f.clone()
                    },
                    mult,
                ));
            }
        }
        out
    }
}

/// First page `(s, d) ↦ dim` of a spectral sequence whose term at `(s, d)`
/// contributes to total degree `d - s`.
type Page = BTreeMap<(usize, usize), i64>;

fn add_bott(
    page: &mut Page,
    s: usize,
    b: &WeightedBundle,
    mult: i64,
) -> Result<(), CohomologyError> {
    for (d, h) in bott_cohomology(b)? {
        *page.entry((s, d)).or_insert(0) += mult * h;
    }
    Ok(())
}

fn page_euler(page: &Page) -> i64 {
    page.iter()
        .map(|(&(s, d), &v)| if (d + s) % 2 == 0 { v } else { -v })
        .sum()
}

/// Abuts the page. Differentials run `(s, d) → (s - r, d - r + 1)`. The
/// only forced differential accepted is one killing a term of negative
/// total degree against a single partner; anything else is ambiguous.
fn abut(page: &Page, what: &str) -> Result<BTreeMap<i64, i64>, CohomologyError> {
    let keys: Vec<(usize, usize)> = page
        .iter()
        .filter(|(_, &v)| v != 0)
        .map(|(&k, _)| k)
        .collect();
    let mut pairs = Vec::new();
    for &(s, d) in &keys {
        for &(s2, d2) in &keys {
            if s > s2 && d2 + (s - s2) == d + 1 {
                pairs.push(((s, d), (s2, d2)));
            }
        }
    }
    let mut vals: BTreeMap<(usize, usize), i64> = keys.iter().map(|k| (*k, page[k])).collect();
    for &(src, dst) in &pairs {
        let lonely =
            |x: (usize, usize)| pairs.iter().filter(|(a, b)| *a == x || *b == x).count() == 1;
        let negative = (src.1 as i64) < src.0 as i64;
        if !(negative && lonely(src) && lonely(dst) && vals[&dst] >= vals[&src]) {
            return Err(CohomologyError::AmbiguousExtension(format!(
                "{what}: terms at {src:?} and {dst:?} may cancel"
            )));
        }
        let v = vals[&src];
        *vals.get_mut(&dst).unwrap() -= v;
        vals.insert(src, 0);
    }
    let mut out = BTreeMap::new();
    for ((s, d), v) in vals {
        if v != 0 {
            *out.entry(d as i64 - s as i64).or_insert(0) += v;
        }
    }
    Ok(out)
}

/// `H^•(X, F|_X)` through the Koszul resolution.
pub fn restricted_cohomology(
    x: &ZeroLocus,
    f: &WeightedBundle,
) -> Result<BTreeMap<i64, i64>, CohomologyError> {
    let mut page = Page::new();
    for j in 0..=x.rank() {
        for (b, m) in x.koszul_term(f, j) {
            add_bott(&mut page, j, &b, m)?;
        }
    }
    abut(&page, "Koszul")
}

pub fn restricted_euler(x: &ZeroLocus, f: &WeightedBundle) -> Result<i64, CohomologyError> {
    let mut page = Page::new();
    for j in 0..=x.rank() {
        for (b, m) in x.koszul_term(f, j) {
            add_bott(&mut page, j, &b, m)?;
        }
    }
    Ok(page_euler(&page))
}

/// Double complex for `Ω^p_X(t)`: the conormal resolution
/// `S^i N* ⊗ Ω^{p-i}_G` in column `i`, each resolved by Koszul.
fn omega_page(x: &ZeroLocus, p: usize, t: i64) -> Result<Page, CohomologyError> {
    let mut page = Page::new();
    for i in 0..=p {
        for (om, m0) in omega_decompose(p - i, x.k, x.n, t)? {
            for (sym, m1) in x.conormal_symmetric(&om, i) {
                for j in 0..=x.rank() {
                    for (b, m2) in x.koszul_term(&sym, j) {
                        add_bott(&mut page, i + j, &b, m0 as i64 * m1 * m2)?;
                    }
                }
            }
        }
    }
    Ok(page)
}

/// `χ(Ω^p_X(t))`.
pub fn chi_omega(x: &ZeroLocus, p: usize, t: i64) -> Result<i64, CohomologyError> {
    x.check()?;
    Ok(page_euler(&omega_page(x, p, t)?))
}

/// `h^q(Ω^p_X)` read off the double complex when it degenerates for
/// degree reasons; [`CohomologyError::AmbiguousExtension`] otherwise.
pub fn staircase_omega(x: &ZeroLocus, p: usize) -> Result<BTreeMap<i64, i64>, CohomologyError> {
    x.check()?;
    if p as i64 > x.dim() {
        return Err(CohomologyError::BadRange {
            p,
            dim: x.dim() as usize,
        });
    }
    abut(&omega_page(x, p, 0)?, &format!("Ω^{p}"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HodgeDiamond {
    pub dim: usize,
    /// `h[p][q] = h^{p,q}`.
    pub h: Vec<Vec<i64>>,
}

impl HodgeDiamond {
    pub fn get(&self, p: usize, q: usize) -> i64 {
        self.h.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn euler(&self) -> i64 {
        let mut e = 0;
        for p in 0..=self.dim {
            for q in 0..=self.dim {
                e += if (p + q) % 2 == 0 {
                    self.get(p, q)
                } else {
                    -self.get(p, q)
                };
            }
        }
        e
    }

    pub fn chi_o(&self) -> i64 {
        (0..=self.dim)
            .map(|q| {
                if q % 2 == 0 {
                    self.get(0, q)
                } else {
                    -self.get(0, q)
                }
            })
            .sum()
    }

    /// `h^{p,q} = h^{q,p} = h^{d-p,d-q}`.
    pub fn is_symmetric(&self) -> bool {
        let d = self.dim;
        (0..=d).all(|p| {
            (0..=d).all(|q| {
                self.get(p, q) == self.get(q, p) && self.get(p, q) == self.get(d - p, d - q)
            })
        })
    }

    /// Rows of the diamond, `h^{r,0} … h^{0,r}` for `r = 0..=2d`.
    pub fn rows(&self) -> Vec<Vec<i64>> {
        let d = self.dim;
        (0..=2 * d)
            .map(|r| {
                (0..=r)
                    .rev()
                    .filter(|&p| p <= d && r - p <= d)
                    .map(|p| self.get(p, r - p))
                    .collect()
            })
            .collect()
    }

    pub fn betti(&self, i: usize) -> i64 {
        (0..=i).map(|p| self.get(p, i - p)).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NumericalInvariants {
    pub label: String,
    pub dim: usize,
    pub diamond: HodgeDiamond,
    pub e_top: i64,
    /// `χ(O)`.
    pub chi_o: i64,
    /// `K^dim`, when known.
    pub k_power: Option<i64>,
    /// `h^1(T)`, when computed.
    pub h1_t: Option<i64>,
}

impl NumericalInvariants {
    pub fn from_diamond(
        label: impl Into<String>,
        diamond: HodgeDiamond,
        k_power: Option<i64>,
    ) -> Self {
        NumericalInvariants {
            label: label.into(),
            dim: diamond.dim,
            e_top: diamond.euler(),
            chi_o: diamond.chi_o(),
            diamond,
            k_power,
            h1_t: None,
        }
    }

    pub fn p_g(&self) -> i64 {
        self.diamond.get(self.dim, 0)
    }

    pub fn q(&self) -> i64 {
        self.diamond.get(1, 0)
    }

    pub fn h(&self, p: usize, q: usize) -> i64 {
        self.diamond.get(p, q)
    }

    /// `χ = Σ(-1)^{p+q} h^{p,q}`; for threefolds with `h^{1,0} = h^{2,0} = 0`
    /// this is `2(h^{1,1} - h^{1,2})`.
    pub fn euler(&self) -> i64 {
        self.e_top
    }
}

/// Hodge numbers of a zero locus: outside the middle row they agree with the
/// Grassmannian (Lefschetz, the bundle being ample), the middle row follows
/// from `χ(Ω^p_X)`.
pub fn hodge_zero_locus(x: &ZeroLocus) -> Result<NumericalInvariants, CohomologyError> {
    x.check()?;
    let d = x.dim() as usize;
    let mut h = vec![vec![0i64; d + 1]; d + 1];
    for p in 0..=d {
        if 2 * p < d {
            h[p][p] = box_partitions(p, x.k, x.n) as i64;
        } else if 2 * p > d {
            h[p][p] = box_partitions(d - p, x.k, x.n) as i64;
        }
    }
    for p in 0..=d {
        let q = d - p;
        let chi = chi_omega(x, p, 0)?;
        let rest: i64 = (0..=d)
            .filter(|&j| j != q)
            .map(|j| if j % 2 == 0 { h[p][j] } else { -h[p][j] })
            .sum();
        let v = chi - rest;
        h[p][q] = if q % 2 == 0 { v } else { -v };
        if h[p][q] < 0 {
            return Err(CohomologyError::AmbiguousExtension(format!(
                "negative h^{{{p},{q}}} = {}",
                h[p][q]
            )));
        }
    }
    let diamond = HodgeDiamond { dim: d, h };
    let label = if x.quotient {
        format!("Q(1)+O(1)^{} on Gr({},{})", x.linear, x.k, x.n)
    } else {
        format!("codim {} section of Gr({},{})", x.linear, x.k, x.n)
    };
    let k_power = if x.quotient {
        None
    } else {
        let deg = i64::try_from(grassmannian_degree(x.k, x.n)).ok();
        deg.map(|g| x.canonical_twist().pow(d as u32) * g)
    };
    let mut inv = NumericalInvariants::from_diamond(label, diamond, k_power);
    if d == 2 && inv.k_power.is_none() {
        inv.k_power = Some(12 * inv.chi_o - inv.e_top);
    }
    Ok(inv)
}

/// Linear section of codimension `r` of `Gr(k,n)`.
pub fn hodge_linear_section(
    k: usize,
    n: usize,
    r: usize,
) -> Result<NumericalInvariants, CohomologyError> {
    hodge_zero_locus(&ZeroLocus::linear_section(k, n, r))
}

/// Zero locus of `Q(1) ⊕ O(1)^a` on `Gr(2,6)`.
pub fn hodge_q1_model(a: usize) -> Result<NumericalInvariants, CohomologyError> {
    if a > 2 {
        return Err(CohomologyError::BadRange { p: a, dim: 2 });
    }
    hodge_zero_locus(&ZeroLocus::q1_model(a))
}
