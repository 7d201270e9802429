//! Monotone maps between finite ordinals and the Eilenberg–Zilber normal
//! form of degeneracy words.
//!
//! A monotone map `[p] -> [q]` is stored as the vector of its `p + 1`
//! values. Simplicial operators act contravariantly: a cell `x` of degree
//! `q` pulled back along `θ : [p] -> [q]` is the cell `θ^* x` of degree `p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A monotone map `[p] -> [q]`, listed by its values on `0..=p`.
pub type Monotone = Vec<usize>;

pub fn identity(n: usize) -> Monotone {
    (0..=n).collect()
}

/// The coface `δ_i : [n-1] -> [n]`, which skips `i`.
pub fn coface(n: usize, i: usize) -> Monotone {
    debug_assert!(n >= 1 && i <= n);
    (0..n).map(|x| if x < i { x } else { x + 1 }).collect()
}

/// The codegeneracy `σ_i : [n+1] -> [n]`, which hits `i` twice.
pub fn codegeneracy(n: usize, i: usize) -> Monotone {
    debug_assert!(i <= n);
    (0..=n + 1).map(|x| if x <= i { x } else { x - 1 }).collect()
}

/// `f ∘ g`.
pub fn compose(f: &[usize], g: &[usize]) -> Monotone {
    g.iter().map(|&x| f[x]).collect()
}

pub fn is_monotone(f: &[usize]) -> bool {
    f.windows(2).all(|w| w[0] <= w[1])
}

/// Epi–mono factorisation `θ = η ∘ τ` with `τ` surjective and `η` injective.
pub fn epi_mono(theta: &[usize]) -> (Monotone, Monotone) {
    let mut eta: Monotone = Vec::with_capacity(theta.len());
    let mut tau: Monotone = Vec::with_capacity(theta.len());
    for &v in theta {
        if eta.last() != Some(&v) {
            eta.push(v);
        }
        tau.push(eta.len() - 1);
    }
    (tau, eta)
}

/// Whether an injective `η : [j] -> [q]` is the identity.
pub fn is_identity(f: &[usize], q: usize) -> bool {
    f.len() == q + 1 && f.iter().enumerate().all(|(i, &v)| i == v)
}

/// A degeneracy word `s_{i_1} … s_{i_r}` in normal form: strictly decreasing
/// indices. The empty word marks a nondegenerate simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DegeneracyWord {
    indices: Vec<usize>,
}

impl DegeneracyWord {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "degeneracy word {indices:?} is not strictly decreasing"
            )));
        }
        Ok(Self { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Normal form of an arbitrary composite `s_{a_1} s_{a_2} … s_{a_r}`
    /// (rightmost applied first) acting on a cell of degree `base`.
    pub fn normalize(ops: &[usize], base: usize) -> Result<Self> {
        // s_{a_1} … s_{a_r} x = x ∘ σ_{a_r} ∘ … ∘ σ_{a_1}
        let mut degree = base;
        let mut sigma = identity(base);
        for &a in ops.iter().rev() {
            if a > degree {
                return Err(Error::InvalidArgument(format!(
                    "s_{a} is undefined on degree {degree}"
                )));
            }
            sigma = compose(&sigma, &codegeneracy(degree, a));
            degree += 1;
        }
        Ok(Self::from_surjection(&sigma))
    }

    /// The word whose operator is `σ^*` for a surjection `σ : [m] ->> [k]`.
    pub fn from_surjection(sigma: &[usize]) -> Self {
        let mut indices: Vec<usize> = sigma
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] == w[1])
            .map(|(j, _)| j)
            .collect();
        indices.reverse();
        Self { indices }
    }

    /// The surjection `[base + len] ->> [base]` represented by this word.
    pub fn to_surjection(&self, base: usize) -> Monotone {
        let m = base + self.indices.len();
        (0..=m)
            .map(|x| x - self.indices.iter().filter(|&&j| j < x).count())
            .collect()
    }
}

impl TryFrom<Vec<usize>> for DegeneracyWord {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<DegeneracyWord> for Vec<usize> {
    fn from(w: DegeneracyWord) -> Vec<usize> {
        w.indices
    }
}

impl std::fmt::Display for DegeneracyWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in &self.indices {
            write!(f, "s{i}")?;
        }
        Ok(())
    }
}

/// A cell presented as a degeneracy word applied to a nondegenerate
/// generator. For presentations `generator` is a flat generator index; for
/// truncated simplicial sets it is the index of a nondegenerate cell among
/// the cells of degree `degree - word.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Simplex {
    pub degree: usize,
    pub generator: usize,
    #[serde(default)]
    pub word: DegeneracyWord,
}

impl Simplex {
    pub fn nondegenerate(degree: usize, generator: usize) -> Self {
        Self { degree, generator, word: DegeneracyWord::empty() }
    }

    pub fn generator_degree(&self) -> usize {
        self.degree - self.word.len()
    }
}

/// All surjections `[m] ->> [k]`, in lexicographic order.
pub fn surjections(m: usize, k: usize) -> Vec<Monotone> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    // choose which of the m adjacent pairs are equal: exactly m - k of them
    let mut current = vec![0usize];
    fn rec(m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Monotone>) {
        let pos = current.len();
        let last = *current.last().unwrap();
        if pos == m + 1 {
            if last == k {
                out.push(current.clone());
            }
            return;
        }
        let remaining = m + 1 - pos;
        for next in [last, last + 1] {
            if next <= k && k - next <= remaining - 1 {
                current.push(next);
                rec(m, k, current, out);
                current.pop();
            }
        }
    }
    rec(m, k, &mut current, &mut out);
    out
}

/// All monotone maps `[m] -> [n]`, in lexicographic order.
pub fn monotone_maps(m: usize, n: usize) -> Vec<Monotone> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m + 1);
    fn rec(m: usize, n: usize, current: &mut Vec<usize>, out: &mut Vec<Monotone>) {
        if current.len() == m + 1 {
            out.push(current.clone());
            return;
        }
        let start = current.last().copied().unwrap_or(0);
        for v in start..=n {
            current.push(v);
            rec(m, n, current, out);
            current.pop();
        }
    }
    rec(m, n, &mut current, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_reorders_s0_s0() {
        let w = DegeneracyWord::normalize(&[0, 0], 0).unwrap();
        assert_eq!(w.indices(), &[1, 0]);
    }

    #[test]
    fn normal_form_applies_identity_si_sj() {
        // s_0 s_1 = s_2 s_0 on degree >= 1
        let a = DegeneracyWord::normalize(&[0, 1], 1).unwrap();
        let b = DegeneracyWord::normalize(&[2, 0], 1).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.indices(), &[2, 0]);
    }

    #[test]
    fn rejects_non_decreasing_word() {
        assert!(DegeneracyWord::new(vec![0, 1]).is_err());
        assert!(DegeneracyWord::new(vec![1, 1]).is_err());
    }

    #[test]
    fn surjection_round_trip() {
        for m in 0..6 {
            for k in 0..=m {
                for s in surjections(m, k) {
                    let w = DegeneracyWord::from_surjection(&s);
                    assert_eq!(w.len(), m - k);
                    assert_eq!(w.to_surjection(k), s);
                }
            }
        }
    }

    #[test]
    fn monotone_map_counts() {
        // C(m + n + 1, m + 1)
        assert_eq!(monotone_maps(2, 1).len(), 4);
        assert_eq!(monotone_maps(1, 2).len(), 6);
        assert_eq!(monotone_maps(3, 3).len(), 35);
        assert_eq!(surjections(3, 1).len(), 3);
    }

    #[test]
    fn epi_mono_factorises() {
        for theta in monotone_maps(3, 3) {
            let (tau, eta) = epi_mono(&theta);
            assert_eq!(compose(&eta, &tau), theta);
            assert!(eta.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
