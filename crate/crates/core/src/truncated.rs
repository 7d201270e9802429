//! Degreewise-finite simplicial sets enumerated in degrees `0..=N`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingen::{FinGenSSet, Generator};
use crate::simplex::{epi_mono, DegeneracyWord, Simplex};

/// A simplicial set known in degrees `0..=degree_bound`, with total face
/// and degeneracy tables between adjacent degrees.
///
/// Cells are indices into per-degree lists; each cell carries a canonical
/// name derived from the construction that produced it.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "TruncatedDoc", into = "TruncatedDoc")]
pub struct TruncatedSSet {
    bound: usize,
    names: Vec<Vec<String>>,
    // faces[m][i][x] = d_i x for 1 <= m <= bound
    faces: Vec<Vec<Vec<usize>>>,
    // degens[m][i][x] = s_i x for 0 <= m < bound
    degens: Vec<Vec<Vec<usize>>>,
    cache: Cache,
}

#[derive(Clone, Default)]
struct Cache {
    nondeg: OnceLock<NondegIndex>,
    boundary: OnceLock<Vec<HashMap<Vec<usize>, Vec<usize>>>>,
}

#[derive(Clone)]
struct NondegIndex {
    lists: Vec<Vec<usize>>,
    rank: Vec<Vec<usize>>,
    offsets: Vec<usize>,
}

const NOT_NONDEG: usize = usize::MAX;

impl PartialEq for TruncatedSSet {
    fn eq(&self, other: &Self) -> bool {
        self.bound == other.bound
            && self.names == other.names
            && self.faces == other.faces
            && self.degens == other.degens
    }
}

impl Eq for TruncatedSSet {}

impl fmt::Debug for TruncatedSSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSSet")
            .field("degree_bound", &self.bound)
            .field("counts", &self.counts())
            .finish()
    }
}

/// One violated simplicial identity, with the offending cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityViolation {
    pub identity: String,
    pub degree: usize,
    pub i: usize,
    pub j: usize,
    pub cell: usize,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails for i={}, j={} on cell {} of degree {}",
            self.identity, self.i, self.j, self.cell, self.degree
        )
    }
}

impl TruncatedSSet {
    /// Builds a truncated simplicial set, checking table shapes and every
    /// simplicial identity.
    pub fn new(
        bound: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let x = Self::from_tables_unchecked(bound, names, faces, degens)?;
        if let Some(v) = x.validate_identities().into_iter().next() {
            return Err(Error::InvalidSSet(v.to_string()));
        }
        Ok(x)
    }

    /// Checks only the shapes of the tables. The identities can be
    /// inspected afterwards with [`TruncatedSSet::validate_identities`].
    pub fn from_tables_unchecked(
        bound: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<usize>>>,
        degens: Vec<Vec<Vec<usize>>>,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidSSet(msg));
        if names.len() != bound + 1 || faces.len() != bound + 1 || degens.len() != bound + 1 {
            return bad(format!("tables must cover degrees 0..={bound}"));
        }
        for m in 0..=bound {
            let n_m = names[m].len();
            let expected_faces = if m == 0 { 0 } else { m + 1 };
            if faces[m].len() != expected_faces {
                return bad(format!("degree {m} needs {expected_faces} face maps"));
            }
            for (i, table) in faces[m].iter().enumerate() {
                if table.len() != n_m {
                    return bad(format!("d_{i} on degree {m} has wrong length"));
                }
                if let Some(&v) = table.iter().find(|&&v| v >= names[m - 1].len()) {
                    return bad(format!("d_{i} on degree {m} points to missing cell {v}"));
                }
            }
            let expected_degens = if m == bound { 0 } else { m + 1 };
            if degens[m].len() != expected_degens {
                return bad(format!("degree {m} needs {expected_degens} degeneracy maps"));
            }
            for (i, table) in degens[m].iter().enumerate() {
                if table.len() != n_m {
                    return bad(format!("s_{i} on degree {m} has wrong length"));
                }
                if let Some(&v) = table.iter().find(|&&v| v >= names[m + 1].len()) {
                    return bad(format!("s_{i} on degree {m} points to missing cell {v}"));
                }
            }
        }
        Ok(Self { bound, names, faces, degens, cache: Cache::default() })
    }

    /// The simplicial set with no cells.
    pub fn empty(bound: usize) -> Self {
        let faces = (0..=bound).map(|m| if m == 0 { vec![] } else { vec![vec![]; m + 1] }).collect();
        let degens = (0..=bound).map(|m| if m == bound { vec![] } else { vec![vec![]; m + 1] }).collect();
        Self::from_tables_unchecked(bound, vec![vec![]; bound + 1], faces, degens).unwrap()
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn count(&self, m: usize) -> usize {
        self.names[m].len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.names.iter().map(Vec::len).collect()
    }

    pub fn name(&self, m: usize, x: usize) -> &str {
        &self.names[m][x]
    }

    pub fn names(&self, m: usize) -> &[String] {
        &self.names[m]
    }

    pub fn find_cell(&self, m: usize, name: &str) -> Option<usize> {
        self.names.get(m)?.iter().position(|n| n == name)
    }

    #[inline]
    pub fn face(&self, m: usize, i: usize, x: usize) -> usize {
        self.faces[m][i][x]
    }

    #[inline]
    pub fn degen(&self, m: usize, i: usize, x: usize) -> usize {
        self.degens[m][i][x]
    }

    pub fn face_table(&self, m: usize, i: usize) -> &[usize] {
        &self.faces[m][i]
    }

    pub fn degen_table(&self, m: usize, i: usize) -> &[usize] {
        &self.degens[m][i]
    }

    /// All faces `(d_0 x, …, d_m x)` of a cell of degree `m >= 1`.
    pub fn boundary_of(&self, m: usize, x: usize) -> Vec<usize> {
        (0..=m).map(|i| self.faces[m][i][x]).collect()
    }

    /// Applies a normal-form degeneracy word to a cell of degree `m`.
    pub fn apply_word(&self, x: usize, m: usize, word: &DegeneracyWord) -> Result<usize> {
        let top = m + word.len();
        if top > self.bound {
            return Err(Error::InsufficientBound {
                what: format!("degeneracy {word} of a degree-{m} cell"),
                needed: top,
                bound: self.bound,
            });
        }
        let mut x = x;
        let mut deg = m;
        for &i in word.indices().iter().rev() {
            x = self.degens[deg][i][x];
            deg += 1;
        }
        Ok(x)
    }

    /// Pulls back a cell of degree `m` along a monotone `θ : [p] -> [m]`.
    pub fn act(&self, x: usize, m: usize, theta: &[usize]) -> Result<usize> {
        let (tau, eta) = epi_mono(theta);
        let mut x = x;
        let mut deg = m;
        // η^* : delete the missing vertices, highest first
        let mut j = eta.len();
        for v in (0..=m).rev() {
            if j > 0 && eta[j - 1] == v {
                j -= 1;
            } else {
                x = self.faces[deg][v][x];
                deg -= 1;
            }
        }
        let word = DegeneracyWord::from_surjection(&tau);
        self.apply_word(x, deg, &word)
    }

    pub fn is_nondegenerate(&self, m: usize, x: usize) -> bool {
        self.nondeg_index().rank[m][x] != NOT_NONDEG
    }

    fn compute_degenerate(&self, m: usize, x: usize) -> bool {
        m > 0 && (0..m).any(|i| self.degens[m - 1][i][self.faces[m][i][x]] == x)
    }

    /// Eilenberg–Zilber decomposition of a cell: the unique nondegenerate
    /// cell `y` and normal-form word `w` with `x = w(y)`.
    pub fn ez_normalize(&self, m: usize, x: usize) -> Simplex {
        if m == 0 {
            return Simplex::nondegenerate(0, x);
        }
        let mut indices: Vec<usize> = (0..m)
            .filter(|&j| self.degens[m - 1][j][self.faces[m][j][x]] == x)
            .collect();
        indices.reverse();
        let mut y = x;
        let mut deg = m;
        for &j in &indices {
            y = self.faces[deg][j][y];
            deg -= 1;
        }
        Simplex { degree: m, generator: y, word: DegeneracyWord::new(indices).expect("decreasing") }
    }

    fn nondeg_index(&self) -> &NondegIndex {
        self.cache.nondeg.get_or_init(|| {
            let mut lists = Vec::with_capacity(self.bound + 1);
            let mut rank = Vec::with_capacity(self.bound + 1);
            let mut offsets = Vec::with_capacity(self.bound + 2);
            let mut total = 0;
            for m in 0..=self.bound {
                let mut list = Vec::new();
                let mut r = vec![NOT_NONDEG; self.count(m)];
                for x in 0..self.count(m) {
                    if !self.compute_degenerate(m, x) {
                        r[x] = list.len();
                        list.push(x);
                    }
                }
                offsets.push(total);
                total += list.len();
                lists.push(list);
                rank.push(r);
            }
            offsets.push(total);
            NondegIndex { lists, rank, offsets }
        })
    }

    /// Nondegenerate cells of degree `m`, in cell order.
    pub fn nondegenerate(&self, m: usize) -> &[usize] {
        &self.nondeg_index().lists[m]
    }

    /// Flat index of a nondegenerate cell among the generators of
    /// [`TruncatedSSet::presentation`].
    pub fn generator_index(&self, m: usize, x: usize) -> Option<usize> {
        let idx = self.nondeg_index();
        let r = idx.rank[m][x];
        (r != NOT_NONDEG).then(|| idx.offsets[m] + r)
    }

    /// Cell of the nondegenerate generator with flat index `g`.
    pub fn generator_cell(&self, g: usize) -> (usize, usize) {
        let idx = self.nondeg_index();
        let m = idx.offsets.partition_point(|&o| o <= g) - 1;
        (m, idx.lists[m][g - idx.offsets[m]])
    }

    /// Highest degree carrying a nondegenerate cell, if any cell exists.
    pub fn dimension(&self) -> Option<usize> {
        (0..=self.bound).rev().find(|&m| !self.nondegenerate(m).is_empty())
    }

    /// The presentation of the `N`-skeleton: one generator per
    /// nondegenerate cell, faces in Eilenberg–Zilber form.
    pub fn presentation(&self) -> FinGenSSet {
        let mut gens = Vec::new();
        for m in 0..=self.bound {
            for &x in self.nondegenerate(m) {
                let faces = if m == 0 {
                    vec![]
                } else {
                    (0..=m).map(|i| self.cell_simplex(m - 1, self.faces[m][i][x])).collect()
                };
                gens.push(Generator { name: self.names[m][x].clone(), degree: m, faces });
            }
        }
        FinGenSSet::new(gens).expect("presentation of a valid simplicial set")
    }

    /// A cell as a [`Simplex`] over the generators of the presentation.
    pub fn cell_simplex(&self, m: usize, x: usize) -> Simplex {
        let ez = self.ez_normalize(m, x);
        let k = ez.generator_degree();
        Simplex {
            degree: m,
            generator: self.generator_index(k, ez.generator).expect("nondegenerate"),
            word: ez.word,
        }
    }

    /// The cell denoted by a simplex over the presentation generators.
    pub fn simplex_cell(&self, s: &Simplex) -> Result<usize> {
        let (k, y) = self.generator_cell(s.generator);
        self.apply_word(y, k, &s.word)
    }

    /// Cells of degree `m >= 1` grouped by their full boundary
    /// `(d_0 x, …, d_m x)`. Degree 0 is a single group keyed by `[]`.
    pub fn boundary_index(&self, m: usize) -> &HashMap<Vec<usize>, Vec<usize>> {
        &self.cache.boundary.get_or_init(|| {
            (0..=self.bound)
                .map(|m| {
                    let mut idx: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
                    for x in 0..self.count(m) {
                        let key = if m == 0 { vec![] } else { self.boundary_of(m, x) };
                        idx.entry(key).or_default().push(x);
                    }
                    idx
                })
                .collect()
        })[m]
    }

    /// Lists every violated simplicial identity. Empty iff valid.
    pub fn validate_identities(&self) -> Vec<IdentityViolation> {
        let mut out = Vec::new();
        let mut push = |identity: &str, degree, i, j, cell| {
            out.push(IdentityViolation { identity: identity.to_string(), degree, i, j, cell })
        };
        let n = self.bound;
        for m in 0..=n {
            for x in 0..self.count(m) {
                // d_i d_j = d_{j-1} d_i for i < j
                if m >= 2 {
                    for j in 1..=m {
                        for i in 0..j {
                            let lhs = self.face(m - 1, i, self.face(m, j, x));
                            let rhs = self.face(m - 1, j - 1, self.face(m, i, x));
                            if lhs != rhs {
                                push("d_i d_j = d_{j-1} d_i", m, i, j, x);
                            }
                        }
                    }
                }
                // s_i s_j = s_{j+1} s_i for i <= j
                if m + 2 <= n {
                    for j in 0..=m {
                        for i in 0..=j {
                            let lhs = self.degen(m + 1, i, self.degen(m, j, x));
                            let rhs = self.degen(m + 1, j + 1, self.degen(m, i, x));
                            if lhs != rhs {
                                push("s_i s_j = s_{j+1} s_i", m, i, j, x);
                            }
                        }
                    }
                }
                if m < n {
                    for j in 0..=m {
                        let sx = self.degen(m, j, x);
                        for i in 0..=m + 1 {
                            let lhs = self.face(m + 1, i, sx);
                            if i == j || i == j + 1 {
                                if lhs != x {
                                    push("d_j s_j = d_{j+1} s_j = id", m, i, j, x);
                                }
                            } else if i < j {
                                let rhs = self.degen(m - 1, j - 1, self.face(m, i, x));
                                if lhs != rhs {
                                    push("d_i s_j = s_{j-1} d_i (i < j)", m, i, j, x);
                                }
                            } else {
                                let rhs = self.degen(m - 1, j, self.face(m, i - 1, x));
                                if lhs != rhs {
                                    push("d_i s_j = s_j d_{i-1} (i > j+1)", m, i, j, x);
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Restricts to degrees `0..=bound` (which must not exceed the current bound).
    pub fn truncate_to(&self, bound: usize) -> Result<Self> {
        if bound > self.bound {
            return Err(Error::InsufficientBound {
                what: "truncation".into(),
                needed: bound,
                bound: self.bound,
            });
        }
        let names = self.names[..=bound].to_vec();
        let faces = self.faces[..=bound].to_vec();
        let mut degens = self.degens[..=bound].to_vec();
        degens[bound] = vec![];
        Self::from_tables_unchecked(bound, names, faces, degens)
    }

    /// Disjoint union, cells of `self` first.
    pub fn coproduct(&self, other: &Self) -> Result<Self> {
        if self.bound != other.bound {
            return Err(Error::BoundMismatch(self.bound, other.bound));
        }
        let n = self.bound;
        let names = (0..=n)
            .map(|m| {
                self.names[m]
                    .iter()
                    .map(|s| format!("inl:{s}"))
                    .chain(other.names[m].iter().map(|s| format!("inr:{s}")))
                    .collect()
            })
            .collect();
        let join = |a: &[usize], b: &[usize], shift: usize| -> Vec<usize> {
            a.iter().copied().chain(b.iter().map(|&v| v + shift)).collect()
        };
        let faces = (0..=n)
            .map(|m| {
                (0..self.faces[m].len())
                    .map(|i| join(&self.faces[m][i], &other.faces[m][i], self.count(m - 1)))
                    .collect()
            })
            .collect();
        let degens = (0..=n)
            .map(|m| {
                (0..self.degens[m].len())
                    .map(|i| join(&self.degens[m][i], &other.degens[m][i], self.count(m + 1)))
                    .collect()
            })
            .collect();
        Self::from_tables_unchecked(n, names, faces, degens)
    }

    /// Constant simplicial set on a finite set of points.
    pub fn discrete(points: &[String], bound: usize) -> Self {
        let k = points.len();
        let names = (0..=bound)
            .map(|m| {
                points
                    .iter()
                    .map(|p| if m == 0 { p.clone() } else { format!("{}({p})", "s0".repeat(m)) })
                    .collect()
            })
            .collect();
        let ident: Vec<usize> = (0..k).collect();
        let faces = (0..=bound).map(|m| if m == 0 { vec![] } else { vec![ident.clone(); m + 1] }).collect();
        let degens = (0..=bound).map(|m| if m == bound { vec![] } else { vec![ident.clone(); m + 1] }).collect();
        Self::from_tables_unchecked(bound, names, faces, degens).unwrap()
    }
}

/// On-disk form of a truncated simplicial set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TruncatedDoc {
    pub degree_bound: usize,
    pub cells: Vec<Vec<String>>,
    /// Face tables keyed by source degree: `d["m"][i][x] = d_i x`.
    pub d: BTreeMap<String, Vec<Vec<usize>>>,
    /// Degeneracy tables keyed by source degree: `s["m"][i][x] = s_i x`.
    pub s: BTreeMap<String, Vec<Vec<usize>>>,
}

impl From<TruncatedSSet> for TruncatedDoc {
    fn from(x: TruncatedSSet) -> Self {
        let d = (1..=x.bound).map(|m| (m.to_string(), x.faces[m].clone())).collect();
        let s = (0..x.bound).map(|m| (m.to_string(), x.degens[m].clone())).collect();
        TruncatedDoc { degree_bound: x.bound, cells: x.names, d, s }
    }
}

impl TryFrom<TruncatedDoc> for TruncatedSSet {
    type Error = Error;
    fn try_from(doc: TruncatedDoc) -> Result<Self> {
        let n = doc.degree_bound;
        let mut faces = vec![vec![]];
        for m in 1..=n {
            faces.push(doc.d.get(&m.to_string()).cloned().ok_or_else(|| {
                Error::InvalidSSet(format!("missing face tables for degree {m}"))
            })?);
        }
        let mut degens = Vec::new();
        for m in 0..n {
            degens.push(doc.s.get(&m.to_string()).cloned().ok_or_else(|| {
                Error::InvalidSSet(format!("missing degeneracy tables for degree {m}"))
            })?);
        }
        degens.push(vec![]);
        TruncatedSSet::new(n, doc.cells, faces, degens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::delta;

    #[test]
    fn delta_two_is_valid() {
        let x = delta(2).truncate(4);
        assert!(x.validate_identities().is_empty());
    }

    #[test]
    fn corrupted_face_table_is_reported() {
        let x = delta(1).truncate(2);
        let doc: TruncatedDoc = x.into();
        let mut faces = vec![vec![]];
        for m in 1..=2 {
            faces.push(doc.d[&m.to_string()].clone());
        }
        // swap d_0 and d_1 on the nondegenerate edge
        let e = doc.cells[1].iter().position(|n| n == "[0,1]").unwrap();
        let (a, b) = (faces[1][0][e], faces[1][1][e]);
        faces[1][0][e] = b;
        faces[1][1][e] = a;
        let mut degens: Vec<_> = (0..2).map(|m| doc.s[&m.to_string()].clone()).collect();
        degens.push(vec![]);
        let bad = TruncatedSSet::from_tables_unchecked(2, doc.cells, faces.clone(), degens.clone()).unwrap();
        let report = bad.validate_identities();
        assert!(!report.is_empty());
        assert!(report.iter().any(|v| v.identity.starts_with("d_i d_j")));
        assert!(TruncatedSSet::new(2, bad.names.clone(), faces, degens).is_err());
    }

    #[test]
    fn ez_of_nondegenerate_is_empty_word() {
        let x = delta(2).truncate(3);
        for &c in x.nondegenerate(2) {
            let ez = x.ez_normalize(2, c);
            assert!(ez.word.is_empty());
            assert_eq!(ez.generator, c);
        }
    }

    #[test]
    fn ez_of_double_degeneracy() {
        let x = delta(0).truncate(2);
        let v = 0;
        let s0s0 = x.degen(1, 0, x.degen(0, 0, v));
        let ez = x.ez_normalize(2, s0s0);
        assert_eq!(ez.word.indices(), &[1, 0]);
        assert_eq!(ez.generator, v);
    }

    #[test]
    fn act_matches_faces_and_degeneracies() {
        let x = delta(2).truncate(3);
        for m in 1..=3 {
            for c in 0..x.count(m) {
                for i in 0..=m {
                    let theta = crate::simplex::coface(m, i);
                    assert_eq!(x.act(c, m, &theta).unwrap(), x.face(m, i, c));
                }
            }
        }
        for m in 0..3 {
            for c in 0..x.count(m) {
                for i in 0..=m {
                    let theta = crate::simplex::codegeneracy(m, i);
                    assert_eq!(x.act(c, m, &theta).unwrap(), x.degen(m, i, c));
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let x = delta(2).truncate(3);
        let s = serde_json::to_string(&x).unwrap();
        let y: TruncatedSSet = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }
}
