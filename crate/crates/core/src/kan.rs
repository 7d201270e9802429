//! Lifting checks against horn and boundary inclusions, decided by
//! surjectivity of comparison maps onto fibre products.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{boundary, delta, delta_generator, horn, point};
use crate::error::{Error, Result};
use crate::fingen::FinGenSSet;
use crate::hom::{enumerate_maps, first_extension, postcompose, GenMap};
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Which inclusion a lifting problem is posed against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "k")]
pub enum Shape {
    Horn(usize),
    Boundary,
}

/// An unsolvable lifting problem: a map from the horn (or boundary) into
/// the source, and an `n`-cell of the target extending its image.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub n: usize,
    pub shape: Shape,
    /// Images of the generators of the horn or boundary, as cell indices.
    pub cells: Vec<usize>,
    /// Names of those images, for display.
    pub cell_names: Vec<String>,
    pub target_cell: usize,
    pub target_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftReport {
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub bound_used: usize,
}

impl LiftReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// A square of finite sets
///
/// ```text
///   Z --top--> W
///   |          |
///  left      right
///   v          v
///   X --bot--> Y
/// ```
///
/// given by its four functions; set sizes are the lengths of the domain
/// arrays plus the explicit codomain sizes.
#[derive(Debug, Clone)]
pub struct FinSquare {
    pub top: Vec<usize>,
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub bottom: Vec<usize>,
    pub y_size: usize,
}

/// Whether the comparison map `Z -> X ×_Y W` of a commuting square is
/// surjective.
pub fn is_weak_pullback(sq: &FinSquare) -> Result<bool> {
    let (w, x) = (sq.right.len(), sq.bottom.len());
    if sq.top.len() != sq.left.len() {
        return Err(Error::InvalidArgument("top and left must share their domain".into()));
    }
    let in_range = |f: &[usize], n: usize| f.iter().all(|&v| v < n);
    if !in_range(&sq.top, w) || !in_range(&sq.left, x) || !in_range(&sq.right, sq.y_size) || !in_range(&sq.bottom, sq.y_size) {
        return Err(Error::InvalidArgument("function value out of range".into()));
    }
    for z in 0..sq.top.len() {
        if sq.right[sq.top[z]] != sq.bottom[sq.left[z]] {
            return Err(Error::InvalidArgument(format!("square does not commute at element {z}")));
        }
    }
    let image: HashSet<(usize, usize)> = sq.left.iter().copied().zip(sq.top.iter().copied()).collect();
    Ok(first_uncovered(&sq.bottom, &sq.right, |a, b| image.contains(&(a, b))).is_none())
}

/// The first pair `(a, b)` in lexicographic order with `left[a] == right[b]`
/// that is not `covered`.
pub fn first_uncovered<K: Eq + Hash>(
    left: &[K],
    right: &[K],
    covered: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let mut by_key: HashMap<&K, Vec<usize>> = HashMap::new();
    for (b, k) in right.iter().enumerate() {
        by_key.entry(k).or_default().push(b);
    }
    for (a, k) in left.iter().enumerate() {
        if let Some(bs) = by_key.get(k) {
            for &b in bs {
                if !covered(a, b) {
                    return Some((a, b));
                }
            }
        }
    }
    None
}

/// Restriction of an `n`-cell to the generators of a subcomplex of `Δⁿ`
/// whose generators are named by their vertex sets.
pub(crate) fn restrict_cell(x: &TruncatedSSet, n: usize, cell: usize, sub: &[Vec<usize>]) -> GenMap {
    sub.iter().map(|verts| x.act(cell, n, verts).expect("within bound")).collect()
}

pub(crate) fn vertex_sets(a: &FinGenSSet) -> Vec<Vec<usize>> {
    a.generators()
        .iter()
        .map(|g| {
            g.name
                .trim_matches(|c| c == '[' || c == ']')
                .split(',')
                .map(|v| v.parse().expect("subcomplex of a simplex"))
                .collect()
        })
        .collect()
}

fn shape_complex(n: usize, shape: Shape) -> Result<FinGenSSet> {
    match shape {
        Shape::Horn(k) => horn(n, k),
        Shape::Boundary => Ok(boundary(n)),
    }
}

/// Checks one lifting problem family; returns the first witness.
fn check_shape(f: &SMap, n: usize, shape: Shape) -> Result<Option<Witness>> {
    let (x, y) = (f.source(), f.target());
    let sub = shape_complex(n, shape)?;
    let verts = vertex_sets(&sub);
    let horn_maps = enumerate_maps(&sub, x)?;
    let horn_images: Vec<GenMap> = horn_maps.iter().map(|h| postcompose(f, &sub, h)).collect();
    let y_restr: Vec<GenMap> = (0..y.count(n)).map(|c| restrict_cell(y, n, c, &verts)).collect();
    let index: HashMap<&[usize], usize> = horn_maps.iter().enumerate().map(|(i, h)| (h.as_slice(), i)).collect();
    let image: HashSet<(usize, usize)> = (0..x.count(n))
        .map(|c| (index[restrict_cell(x, n, c, &verts).as_slice()], f.apply(n, c)))
        .collect();
    Ok(first_uncovered(&horn_images, &y_restr, |a, b| image.contains(&(a, b))).map(|(a, b)| {
        let cells = horn_maps[a].clone();
        let cell_names = cells
            .iter()
            .enumerate()
            .map(|(g, &c)| x.name(sub.generator(g).degree, c).to_string())
            .collect();
        Witness { n, shape, cells, cell_names, target_cell: b, target_name: y.name(n, b).to_string() }
    }))
}

fn check_all(f: &SMap, problems: Vec<(usize, Shape)>, n_max: usize) -> Result<LiftReport> {
    let bound = f.source().bound();
    if n_max > bound {
        return Err(Error::InsufficientBound { what: "lifting check".into(), needed: n_max, bound });
    }
    let results: Vec<Result<Option<Witness>>> = problems.par_iter().map(|&(n, s)| check_shape(f, n, s)).collect();
    let mut witnesses = Vec::new();
    for r in results {
        if let Some(w) = r? {
            witnesses.push(w);
        }
    }
    let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(LiftReport { verdict, witnesses, bound_used: n_max })
}

/// Right lifting against `Λⁿₖ ↪ Δⁿ` for `1 ≤ n ≤ n_max`. Witnesses are
/// listed by increasing `(n, k)`, one per failing pair, the first being
/// the minimal one.
pub fn is_kan_fibration(f: &SMap, n_max: usize) -> Result<LiftReport> {
    let problems = (1..=n_max).flat_map(|n| (0..=n).map(move |k| (n, Shape::Horn(k)))).collect();
    check_all(f, problems, n_max)
}

/// Right lifting against `∂Δⁿ ↪ Δⁿ` for `0 ≤ n ≤ n_max`.
pub fn is_trivial_fibration(f: &SMap, n_max: usize) -> Result<LiftReport> {
    let problems = (0..=n_max).map(|n| (n, Shape::Boundary)).collect();
    check_all(f, problems, n_max)
}

pub fn is_kan_complex(x: &Arc<TruncatedSSet>, n_max: usize) -> Result<LiftReport> {
    let pt = Arc::new(point(x.bound()));
    is_kan_fibration(&SMap::to_point(x.clone(), pt)?, n_max)
}

/// Re-runs a witness: true iff the lifting problem is still unsolvable.
pub fn replay_witness(f: &SMap, w: &Witness) -> Result<bool> {
    let sub = shape_complex(w.n, w.shape)?;
    let verts = vertex_sets(&sub);
    let (x, y) = (f.source(), f.target());
    // the problem must be well posed: the square commutes
    if postcompose(f, &sub, &w.cells) != restrict_cell(y, w.n, w.target_cell, &verts) {
        return Err(Error::InvalidArgument("witness square does not commute".into()));
    }
    let lifts = (0..x.count(w.n))
        .any(|c| f.apply(w.n, c) == w.target_cell && restrict_cell(x, w.n, c, &verts) == w.cells);
    Ok(!lifts)
}

/// The first filler of a horn map `Λⁿₖ -> X`, as a map `Δⁿ -> X` over the
/// generators of `Δⁿ`.
pub fn fill_horn(x: &TruncatedSSet, n: usize, k: usize, horn_map: &[usize]) -> Result<Option<GenMap>> {
    let h = horn(n, k)?;
    if horn_map.len() != h.len() {
        return Err(Error::InvalidArgument("horn map has the wrong number of generators".into()));
    }
    let d = delta(n);
    let mut fixed = vec![None; d.len()];
    for (verts, &c) in vertex_sets(&h).iter().zip(horn_map) {
        fixed[delta_generator(n, verts)] = Some(c);
    }
    first_extension(&d, x, &fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FinCategory;
    use crate::constructions::nerve;

    #[test]
    fn delta_one_is_not_kan() {
        let d1 = Arc::new(delta(1).truncate(2));
        let r = is_kan_complex(&d1, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        let w = &r.witnesses[0];
        assert_eq!((w.n, w.shape), (2, Shape::Horn(0)));
        // horn generators: [0],[1],[2],[0,1],[0,2]
        assert_eq!(w.cell_names[3], "[0,1]");
        assert_eq!(w.cell_names[4], "s0([0])");
        let f = SMap::to_point(d1.clone(), Arc::new(point(2))).unwrap();
        assert!(replay_witness(&f, w).unwrap());
        assert!(fill_horn(&d1, 2, 0, &w.cells).unwrap().is_none());
    }

    #[test]
    fn discrete_and_group_nerves_are_kan() {
        let b = Arc::new(boundary(1).truncate(3));
        assert!(is_kan_complex(&b, 3).unwrap().passed());
        let n = Arc::new(nerve(&FinCategory::cyclic_group(2), 4));
        assert!(is_kan_complex(&n, 3).unwrap().passed());
    }

    #[test]
    fn identity_is_trivial_fibration() {
        let d1 = Arc::new(delta(1).truncate(2));
        let id = SMap::identity(d1);
        assert!(is_trivial_fibration(&id, 2).unwrap().passed());
        assert!(is_kan_fibration(&id, 2).unwrap().passed());
    }

    #[test]
    fn restriction_of_cell_is_refilled() {
        let x = nerve(&FinCategory::cyclic_group(3), 3);
        let verts = vertex_sets(&horn(2, 1).unwrap());
        for c in 0..x.count(2) {
            let h = restrict_cell(&x, 2, c, &verts);
            let filler = fill_horn(&x, 2, 1, &h).unwrap().unwrap();
            assert_eq!(*filler.last().unwrap(), c);
        }
    }

    #[test]
    fn weak_pullback_basics() {
        // genuine pullback of 2 -> 1 <- 2
        let sq = FinSquare {
            top: vec![0, 1, 0, 1],
            left: vec![0, 0, 1, 1],
            right: vec![0, 0],
            bottom: vec![0, 0],
            y_size: 1,
        };
        assert!(is_weak_pullback(&sq).unwrap());
        let empty = FinSquare { top: vec![], left: vec![], right: vec![0], bottom: vec![0], y_size: 1 };
        assert!(!is_weak_pullback(&empty).unwrap());
        let bad = FinSquare { top: vec![0], left: vec![0], right: vec![0], bottom: vec![1], y_size: 2 };
        assert!(is_weak_pullback(&bad).is_err());
    }
}
