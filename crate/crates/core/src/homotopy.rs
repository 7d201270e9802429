//! Path components, loop spaces, homotopy groups as sets, and the
//! Dugger–Isaksen lifting test for weak equivalences of Kan complexes.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::constructions::{boundary, boundary_inclusion, collapse_cylinder, delta};
use crate::error::{Error, Result};
use crate::fingen::FinGenSSet;
use crate::hom::{cotensor, cotensor_precompose, enumerate_maps, first_extension, index_maps, postcompose, GenMap};
use crate::kan::{first_uncovered, is_kan_complex, restrict_cell, vertex_sets, LiftReport, Shape, Verdict, Witness};
use crate::simplex::DegeneracyWord;
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

/// Path components of a simplicial set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi0Result {
    /// Vertices of each class, classes ordered by their least vertex.
    pub classes: Vec<Vec<usize>>,
    /// `class_of[v]`: class of vertex `v`.
    pub class_of: Vec<usize>,
}

impl Pi0Result {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

/// A simplicial set with a chosen vertex.
#[derive(Debug, Clone)]
pub struct BasedObject {
    pub space: Arc<TruncatedSSet>,
    pub basepoint: usize,
}

impl BasedObject {
    pub fn new(space: Arc<TruncatedSSet>, basepoint: usize) -> Result<Self> {
        if basepoint >= space.count(0) {
            return Err(Error::InvalidArgument(format!("basepoint {basepoint} is not a vertex")));
        }
        Ok(Self { space, basepoint })
    }
}

/// Coequalizer of `d_0, d_1 : X_1 ⇉ X_0`.
pub fn pi0(x: &TruncatedSSet) -> Result<Pi0Result> {
    if x.bound() < 1 {
        return Err(Error::InsufficientBound { what: "π₀".into(), needed: 1, bound: x.bound() });
    }
    let mut uf = UnionFind::<usize>::new(x.count(0));
    for e in 0..x.count(1) {
        uf.union(x.face(1, 0, e), x.face(1, 1, e));
    }
    let mut class_of = vec![0; x.count(0)];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut id_of_root = HashMap::new();
    for (v, slot) in class_of.iter_mut().enumerate() {
        let id = *id_of_root.entry(uf.find(v)).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[id].push(v);
        *slot = id;
    }
    Ok(Pi0Result { classes, class_of })
}

/// `Ωⁿ(X, x)`: maps `Δᵐ × Δⁿ -> X` that are constant at the basepoint on
/// `Δᵐ × ∂Δⁿ`, as a sub-simplicial set of the cotensor `Δⁿ ⋔ X`.
#[derive(Debug, Clone)]
pub struct LoopSpace {
    pub n: usize,
    pub object: Arc<TruncatedSSet>,
    /// Generator images over the presentation of `Δᵐ × Δⁿ`, per degree.
    pub cells: Vec<Vec<GenMap>>,
    pub weights: Vec<FinGenSSet>,
}

fn basepoint_in_degree(x: &TruncatedSSet, base: usize, d: usize) -> usize {
    let word = DegeneracyWord::new((0..d).rev().collect()).expect("decreasing");
    x.apply_word(base, 0, &word).expect("within bound")
}

/// Rejects inputs that fail the Kan condition up to `n_max`.
fn require_kan(x: &Arc<TruncatedSSet>, what: &str, n_max: usize) -> Result<()> {
    let r = is_kan_complex(x, n_max)?;
    match r.witnesses.first() {
        None => Ok(()),
        Some(w) => {
            let k = match w.shape {
                Shape::Horn(k) => k,
                Shape::Boundary => 0,
            };
            Err(Error::NotKan { what: what.into(), bound: n_max, n: w.n, k })
        }
    }
}

/// The loop space in degrees `0..=bound`; `X` must be known up to
/// `bound + n` and is required to be Kan up to that degree.
pub fn loop_space(x: &BasedObject, n: usize, bound: usize) -> Result<LoopSpace> {
    let space = &x.space;
    let needed = bound + n;
    if space.bound() < needed {
        return Err(Error::InsufficientBound { what: format!("Ω^{n}"), needed, bound: space.bound() });
    }
    require_kan(space, "loop space input", needed)?;
    if n == 0 {
        let cot = cotensor(&delta(0), space, bound)?;
        return Ok(LoopSpace { n, object: cot.object, cells: cot.cells, weights: cot.weights });
    }
    let full = cotensor(&delta(n), space, bound)?;
    let bd = cotensor(&boundary(n), space, bound)?;
    let r = cotensor_precompose(&boundary_inclusion(n), &boundary(n), &delta(n), space, &full, &bd)?;
    let mut keep: Vec<Vec<usize>> = Vec::with_capacity(bound + 1);
    for m in 0..=bound {
        let w = &bd.weights[m];
        let constant: GenMap =
            (0..w.len()).map(|g| basepoint_in_degree(space, x.basepoint, w.generator(g).degree)).collect();
        let c = index_maps(&bd.cells[m])[constant.as_slice()];
        keep.push((0..full.object.count(m)).filter(|&a| r.apply(m, a) == c).collect());
    }
    let sub = sub_sset(&full.object, &keep)?;
    let cells = keep.iter().enumerate().map(|(m, ks)| ks.iter().map(|&a| full.cells[m][a].clone()).collect()).collect();
    Ok(LoopSpace { n, object: Arc::new(sub), cells, weights: full.weights })
}

/// The sub-simplicial set on the listed cells (assumed closed under faces
/// and degeneracies).
fn sub_sset(x: &TruncatedSSet, keep: &[Vec<usize>]) -> Result<TruncatedSSet> {
    let bound = x.bound();
    let pos: Vec<HashMap<usize, usize>> =
        keep.iter().map(|ks| ks.iter().enumerate().map(|(i, &a)| (a, i)).collect()).collect();
    let names = keep.iter().enumerate().map(|(m, ks)| ks.iter().map(|&a| x.name(m, a).to_string()).collect()).collect();
    let lookup = |m: usize, a: usize| -> Result<usize> {
        pos[m].get(&a).copied().ok_or_else(|| Error::InvalidSSet("subobject is not closed".into()))
    };
    let mut faces = vec![vec![]];
    for m in 1..=bound {
        faces.push(
            (0..=m)
                .map(|i| keep[m].iter().map(|&a| lookup(m - 1, x.face(m, i, a))).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let mut degens = Vec::with_capacity(bound + 1);
    for m in 0..bound {
        degens.push(
            (0..=m)
                .map(|i| keep[m].iter().map(|&a| lookup(m + 1, x.degen(m, i, a))).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?,
        );
    }
    degens.push(vec![]);
    TruncatedSSet::from_tables_unchecked(bound, names, faces, degens)
}

/// `πₙ(X, x) = π₀ Ωⁿ(X, x)` as a set of classes.
pub fn pi_n(x: &BasedObject, n: usize) -> Result<Pi0Result> {
    pi0(&loop_space(x, n, 1)?.object)
}

/// The Dugger–Isaksen lifting test for `f : X -> Y` in degrees
/// `0..=n_max`: every `y ∈ Y_n` whose boundary lifts to `b : ∂Δⁿ -> X` is
/// homotopic rel boundary (via `D^{n+1}`) to `f x` for some `x` with
/// boundary `b`. Both sides must be Kan up to `n_max + 1`.
pub fn is_di_weak_equivalence(f: &SMap, n_max: usize) -> Result<LiftReport> {
    let (x, y) = (f.source(), f.target());
    let needed = n_max + 1;
    if x.bound() < needed {
        return Err(Error::InsufficientBound { what: "DI check".into(), needed, bound: x.bound() });
    }
    require_kan(x, "source", needed)?;
    require_kan(y, "target", needed)?;
    let mut witnesses = Vec::new();
    for n in 0..=n_max {
        if let Some(w) = di_witness(f, n)? {
            witnesses.push(w);
        }
    }
    let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(LiftReport { verdict, witnesses, bound_used: n_max })
}

/// The relation "homotopic rel boundary via `D^{n+1}`" on the `n`-cells
/// of `y`, decided one pair at a time by extending the two ends over
/// `D^{n+1}`.
pub struct RelBoundaryHomotopy<'a> {
    y: &'a TruncatedSSet,
    n: usize,
    pres: FinGenSSet,
    ends: (usize, usize),
}

impl<'a> RelBoundaryHomotopy<'a> {
    pub fn new(y: &'a TruncatedSSet, n: usize) -> Result<Self> {
        let cyl = collapse_cylinder(n, n + 1)?;
        let d = &cyl.object;
        let pres = d.presentation();
        let top = *cyl.j0.source().nondegenerate(n).last().expect("Δⁿ has a top cell");
        let end = |j: &SMap| {
            let c = j.apply(n, top);
            d.generator_index(n, c).expect("the ends of D^{n+1} are nondegenerate")
        };
        let ends = (end(&cyl.j0), end(&cyl.j1));
        Ok(RelBoundaryHomotopy { y, n, pres, ends })
    }

    /// Whether some `h : D^{n+1} -> y` has `h ∘ j₀ = a` and `h ∘ j₁ = b`.
    pub fn related(&self, a: usize, b: usize) -> Result<bool> {
        if a == b {
            return Ok(true);
        }
        if self.n > 0 && self.y.boundary_of(self.n, a) != self.y.boundary_of(self.n, b) {
            return Ok(false);
        }
        let mut fixed = vec![None; self.pres.len()];
        fixed[self.ends.0] = Some(a);
        fixed[self.ends.1] = Some(b);
        Ok(first_extension(&self.pres, self.y, &fixed)?.is_some())
    }
}

fn di_witness(f: &SMap, n: usize) -> Result<Option<Witness>> {
    let (x, y) = (f.source(), f.target());
    let bd = boundary(n);
    let verts = vertex_sets(&bd);
    let bmaps = enumerate_maps(&bd, x)?;
    let fb: Vec<GenMap> = bmaps.iter().map(|b| postcompose(f, &bd, b)).collect();
    let y_restr: Vec<GenMap> = (0..y.count(n)).map(|c| restrict_cell(y, n, c, &verts)).collect();
    let index = index_maps(&bmaps);
    let h = RelBoundaryHomotopy::new(y, n)?;
    // images f x grouped by the boundary of x
    let mut by_boundary: HashMap<usize, Vec<usize>> = HashMap::new();
    for c in 0..x.count(n) {
        by_boundary.entry(index[restrict_cell(x, n, c, &verts).as_slice()]).or_default().push(f.apply(n, c));
    }
    let covered = |b: usize, yc: usize| {
        by_boundary.get(&b).is_some_and(|fxs| fxs.iter().any(|&fx| h.related(yc, fx).expect("within bound")))
    };
    Ok(first_uncovered(&fb, &y_restr, covered).map(|(b, yc)| {
        let cells = bmaps[b].clone();
        let cell_names =
            cells.iter().enumerate().map(|(g, &c)| x.name(bd.generator(g).degree, c).to_string()).collect();
        Witness { n, shape: Shape::Boundary, cells, cell_names, target_cell: yc, target_name: y.name(n, yc).to_string() }
    }))
}

/// Whether a map of class indices is injective and surjective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassMap {
    pub injective: bool,
    pub surjective: bool,
}

impl ClassMap {
    fn of(map: &[usize], target_classes: usize) -> Self {
        let set: HashSet<usize> = map.iter().copied().collect();
        ClassMap { injective: set.len() == map.len(), surjective: set.len() == target_classes }
    }
}

/// Comparison of the DI verdict in degrees `0..=n_max` with the
/// homotopy groups. The lifting condition in degree `n` sees injectivity
/// on `π_{n-1}` and surjectivity on `πₙ`, so the expected verdict is:
/// `π_k` bijective for `k < n_max` and surjective for `k = n_max`, at
/// every vertex of the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyCrossCheck {
    pub di: Verdict,
    pub pi0: ClassMap,
    /// `(n, basepoint, πₙ(f))` for `1 ≤ n ≤ n_max`.
    pub pi_n: Vec<(usize, usize, ClassMap)>,
    pub homotopy_groups_match: bool,
    pub agree: bool,
    pub bound_used: usize,
}

/// `πₙ(f) : πₙ(X, x) -> πₙ(Y, f x)` as a map of class indices.
pub fn pi_n_map(f: &SMap, basepoint: usize, n: usize) -> Result<(Vec<usize>, usize)> {
    let lx = loop_space(&BasedObject::new(f.source().clone(), basepoint)?, n, 1)?;
    let ly = loop_space(&BasedObject::new(f.target().clone(), f.apply(0, basepoint))?, n, 1)?;
    let (px, py) = (pi0(&lx.object)?, pi0(&ly.object)?);
    let index = index_maps(&ly.cells[0]);
    let mut map = vec![usize::MAX; px.len()];
    for (v, phi) in lx.cells[0].iter().enumerate() {
        let image = index[postcompose(f, &lx.weights[0], phi).as_slice()];
        map[px.class_of[v]] = py.class_of[image];
    }
    Ok((map, py.len()))
}

pub fn cross_check_homotopy_groups(f: &SMap, n_max: usize) -> Result<HomotopyCrossCheck> {
    let di = is_di_weak_equivalence(f, n_max)?.verdict;
    let (px, py) = (pi0(f.source())?, pi0(f.target())?);
    let mut m0 = vec![0; px.len()];
    for (v, &c) in px.class_of.iter().enumerate() {
        m0[c] = py.class_of[f.apply(0, v)];
    }
    let pi0_map = ClassMap::of(&m0, py.len());
    let mut pi = Vec::new();
    for n in 1..=n_max {
        for v in 0..f.source().count(0) {
            let (map, size) = pi_n_map(f, v, n)?;
            pi.push((n, v, ClassMap::of(&map, size)));
        }
    }
    let expected = |n: usize, c: ClassMap| c.surjective && (n == n_max || c.injective);
    let groups = expected(0, pi0_map) && pi.iter().all(|&(n, _, c)| expected(n, c));
    Ok(HomotopyCrossCheck {
        di,
        pi0: pi0_map,
        pi_n: pi,
        homotopy_groups_match: groups,
        agree: di.passed() == groups,
        bound_used: n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FinCategory;
    use crate::constructions::{nerve, point};

    #[test]
    fn pairwise_homotopy_matches_enumeration() {
        let y = nerve(&FinCategory::indiscrete(2), 2);
        for n in 0..=1 {
            let cyl = collapse_cylinder(n, n + 1).unwrap();
            let pres = cyl.object.presentation();
            let top = *cyl.j0.source().nondegenerate(n).last().unwrap();
            let ends = |j: &SMap| cyl.object.cell_simplex(n, j.apply(n, top));
            let (s0, s1) = (ends(&cyl.j0), ends(&cyl.j1));
            let all: HashSet<(usize, usize)> = enumerate_maps(&pres, &y)
                .unwrap()
                .iter()
                .map(|h| (crate::hom::eval(&pres, &y, h, &s0), crate::hom::eval(&pres, &y, h, &s1)))
                .collect();
            let rel = RelBoundaryHomotopy::new(&y, n).unwrap();
            for a in 0..y.count(n) {
                for b in 0..y.count(n) {
                    assert_eq!(rel.related(a, b).unwrap(), all.contains(&(a, b)), "n={n} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn pi0_basics() {
        assert_eq!(pi0(&boundary(1).truncate(2)).unwrap().len(), 2);
        for n in 0..4 {
            assert_eq!(pi0(&delta(n).truncate(2)).unwrap().len(), 1);
        }
    }

    #[test]
    fn loops_in_group_nerve() {
        let x = Arc::new(nerve(&FinCategory::cyclic_group(2), 3));
        let b = BasedObject::new(x, 0).unwrap();
        let l = loop_space(&b, 1, 1).unwrap();
        assert_eq!(l.object.count(0), 2);
        assert!(l.object.validate_identities().is_empty());
        assert_eq!(pi_n(&b, 1).unwrap().len(), 2);
    }

    #[test]
    fn point_has_trivial_groups() {
        let p = BasedObject::new(Arc::new(point(4)), 0).unwrap();
        for n in 1..=3 {
            assert_eq!(pi_n(&p, n).unwrap().len(), 1);
        }
    }

    #[test]
    fn non_kan_rejected() {
        let d1 = BasedObject::new(Arc::new(delta(1).truncate(3)), 0).unwrap();
        assert!(matches!(loop_space(&d1, 1, 1), Err(Error::NotKan { .. })));
    }

    #[test]
    fn di_small_cases() {
        let x = Arc::new(nerve(&FinCategory::cyclic_group(2), 3));
        assert!(is_di_weak_equivalence(&SMap::identity(x), 2).unwrap().passed());

        let ind = Arc::new(nerve(&FinCategory::indiscrete(2), 3));
        let to_pt = SMap::to_point(ind, Arc::new(point(3))).unwrap();
        assert!(is_di_weak_equivalence(&to_pt, 2).unwrap().passed());

        let pt = Arc::new(point(3));
        let b = Arc::new(boundary(1).truncate(3));
        let f = SMap::new(pt, b, vec![vec![0]; 4]).unwrap();
        let r = is_di_weak_equivalence(&f, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses[0].n, 0);
    }
}
