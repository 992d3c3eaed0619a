use num_bigint::BigInt;
use serde::Serialize;

use super::CohomologyError;
use crate::grassmann::weyl_dimension;

/// Homogeneous bundle `Σ^α S* ⊗ Σ^β Q* ⊗ O(t)` on `Gr(k,n)`, with `S` the
/// tautological subbundle of rank `k` and `Q` the quotient of rank `n-k`.
/// `O(1) = det S*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightedBundle {
    pub k: usize,
    pub n: usize,
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
    pub twist: i64,
}

fn decreasing(w: &[i64]) -> bool {
    w.windows(2).all(|p| p[0] >= p[1])
}

pub(crate) fn to_i64(x: BigInt) -> Result<i64, CohomologyError> {
    i64::try_from(&x)
        .map_err(|_| CohomologyError::BadWeight(format!("dimension {x} does not fit in i64")))
}

impl WeightedBundle {
    pub fn new(
        k: usize,
        n: usize,
        alpha: Vec<i64>,
        beta: Vec<i64>,
        twist: i64,
    ) -> Result<Self, CohomologyError> {
        if k == 0 || k >= n {
            return Err(CohomologyError::BadWeight(format!(
                "Gr({k},{n}) is not a Grassmannian"
            )));
        }
        if alpha.len() != k || beta.len() != n - k {
            return Err(CohomologyError::BadWeight(format!(
                "blocks of length {} and {} on Gr({k},{n})",
                alpha.len(),
                beta.len()
            )));
        }
        if !decreasing(&alpha) || !decreasing(&beta) {
            return Err(CohomologyError::BadWeight(format!(
                "{alpha:?} | {beta:?} is not weakly decreasing"
            )));
        }
        Ok(WeightedBundle {
            k,
            n,
            alpha,
            beta,
            twist,
        })
    }

    /// `O(t)`.
    pub fn line(k: usize, n: usize, t: i64) -> Self {
        WeightedBundle {
            k,
            n,
            alpha: vec![0; k],
            beta: vec![0; n - k],
            twist: t,
        }
    }

    /// `T = S* ⊗ Q`.
    pub fn tangent(k: usize, n: usize) -> Self {
        let mut alpha = vec![0; k];
        alpha[0] = 1;
        let mut beta = vec![0; n - k];
        beta[n - k - 1] = -1;
        WeightedBundle {
            k,
            n,
            alpha,
            beta,
            twist: 0,
        }
    }

    pub fn grassmannian_dim(&self) -> usize {
        self.k * (self.n - self.k)
    }

    pub fn twisted(&self, t: i64) -> Self {
        WeightedBundle {
            twist: self.twist + t,
            ..self.clone()
        }
    }

    /// The `GL(n)` weight fed to Bott's algorithm.
    pub fn gl_weight(&self) -> Vec<i64> {
        self.alpha
            .iter()
            .map(|a| a + self.twist)
            .chain(self.beta.iter().copied())
            .collect()
    }

    pub fn rank(&self) -> Result<i64, CohomologyError> {
        to_i64(weyl_dimension(&self.alpha) * weyl_dimension(&self.beta))
    }

    pub fn dual(&self) -> Self {
        let neg = |w: &[i64]| w.iter().rev().map(|x| -x).collect();
        WeightedBundle {
            k: self.k,
            n: self.n,
            alpha: neg(&self.alpha),
            beta: neg(&self.beta),
            twist: -self.twist,
        }
    }
}

/// Bott's theorem: add `ρ`, sort, count inversions. At most one degree is
/// nonzero; an empty list means the bundle is acyclic.
pub fn bott_cohomology(b: &WeightedBundle) -> Result<Vec<(usize, i64)>, CohomologyError> {
    WeightedBundle::new(b.k, b.n, b.alpha.clone(), b.beta.clone(), b.twist)?;
    let g = b.gl_weight();
    let n = g.len();
    let v: Vec<i64> = g
        .iter()
        .enumerate()
        .map(|(i, x)| x + (n - i) as i64)
        .collect();
    let mut sorted = v.clone();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    if sorted.windows(2).any(|p| p[0] == p[1]) {
        return Ok(vec![]);
    }
    let inversions = (0..n)
        .map(|i| (i + 1..n).filter(|&j| v[i] < v[j]).count())
        .sum();
    let mu: Vec<i64> = sorted
        .iter()
        .enumerate()
        .map(|(i, x)| x - (n - i) as i64)
        .collect();
    Ok(vec![(inversions, to_i64(weyl_dimension(&mu))?)])
}

/// `χ` as the alternating sum of [`bott_cohomology`].
pub fn euler_characteristic(b: &WeightedBundle) -> Result<i64, CohomologyError> {
    Ok(bott_cohomology(b)?
        .iter()
        .map(|&(d, h)| if d % 2 == 0 { h } else { -h })
        .sum())
}

/// `χ` from the Weyl dimension polynomial evaluated at the (possibly
/// non-dominant) weight.
pub fn weyl_character_euler(b: &WeightedBundle) -> Result<i64, CohomologyError> {
    to_i64(weyl_dimension(&b.gl_weight()))
}

fn partitions(p: usize, rows: usize, max_part: usize) -> Vec<Vec<usize>> {
    fn rec(
        rem: usize,
        max_part: usize,
        rows: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        if rows == 0 {
            return;
        }
        for f in (1..=rem.min(max_part)).rev() {
            cur.push(f);
            rec(rem - f, f, rows - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, max_part, rows, &mut Vec::new(), &mut out);
    out
}

/// Number of partitions of `p` inside a `k × (n-k)` box, the Betti number
/// `b_{2p}` of `Gr(k,n)`.
pub fn box_partitions(p: usize, k: usize, n: usize) -> usize {
    partitions(p, k, n - k).len()
}

fn conjugate(l: &[usize]) -> Vec<usize> {
    let top = l.first().copied().unwrap_or(0);
    (0..top)
        .map(|i| l.iter().filter(|&&x| x > i).count())
        .collect()
}

/// `Ω^p(t) = ∧^p(S ⊗ Q*)(t) = ⊕_λ Σ^λ S ⊗ Σ^{λ'} Q* (t)` with multiplicities.
pub fn omega_decompose(
    p: usize,
    k: usize,
    n: usize,
    twist: i64,
) -> Result<Vec<(WeightedBundle, u64)>, CohomologyError> {
    if k == 0 || k >= n {
        return Err(CohomologyError::BadWeight(format!(
            "Gr({k},{n}) is not a Grassmannian"
        )));
    }
    let dim = k * (n - k);
    if p > dim {
        return Err(CohomologyError::BadRange { p, dim });
    }
    let mut out = Vec::new();
    for lam in partitions(p, k, n - k) {
        let lc = conjugate(&lam);
        let mut alpha: Vec<i64> = (0..k)
            .map(|i| -(lam.get(k - 1 - i).copied().unwrap_or(0) as i64))
            .collect();
        alpha.sort_unstable_by(|a, b| b.cmp(a));
        let beta: Vec<i64> = (0..n - k)
            .map(|i| lc.get(i).copied().unwrap_or(0) as i64)
            .collect();
        out.push((
            WeightedBundle {
                k,
                n,
                alpha,
                beta,
                twist,
            },
            1,
        ));
    }
    Ok(out)
}

/// Weights `β + e_S` for `S` a set of `b` distinct rows, kept when weakly
/// decreasing: `∧^b Q* ⊗ Σ^β Q*`.
pub(crate) fn pieri_exterior(beta: &[i64], b: usize) -> Vec<Vec<i64>> {
    let m = beta.len();
    let mut out = Vec::new();
    let mut pick = vec![false; m];
    fn rec(i: usize, left: usize, beta: &[i64], pick: &mut Vec<bool>, out: &mut Vec<Vec<i64>>) {
        if i == beta.len() {
            if left == 0 {
                let nb: Vec<i64> = beta
                    .iter()
                    .zip(pick.iter())
                    .map(|(x, &s)| x + s as i64)
                    .collect();
                if decreasing(&nb) {
                    out.push(nb);
                }
            }
            return;
        }
        if left > 0 {
            pick[i] = true;
            rec(i + 1, left - 1, beta, pick, out);
            pick[i] = false;
        }
        rec(i + 1, left, beta, pick, out);
    }
    if b <= m {
        rec(0, b, beta, &mut pick, &mut out);
    }
    out
}

/// Horizontal strips: `S^b Q* ⊗ Σ^β Q*`.
pub(crate) fn pieri_symmetric(beta: &[i64], b: usize) -> Vec<Vec<i64>> {
    fn rec(i: usize, left: usize, beta: &[i64], cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == beta.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let room = if i == 0 {
            left
        } else {
            left.min((beta[i - 1] - beta[i]) as usize)
        };
        for a in 0..=room {
            cur.push(beta[i] + a as i64);
            rec(i + 1, left - a, beta, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, b, beta, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pieri_rules() {
        assert_eq!(pieri_exterior(&[0, 0, 0], 2), vec![vec![1, 1, 0]]);
        assert_eq!(pieri_symmetric(&[0, 0], 3), vec![vec![3, 0]]);
        assert_eq!(pieri_symmetric(&[1, 0], 1).len(), 2);
        assert_eq!(pieri_exterior(&[1, 0], 1), vec![vec![2, 0], vec![1, 1]]);
    }

    #[test]
    fn conjugate_partitions() {
        assert_eq!(conjugate(&[3, 1]), vec![2, 1, 1]);
        assert_eq!(partitions(4, 2, 5), vec![vec![4], vec![3, 1], vec![2, 2]]);
    }
}
