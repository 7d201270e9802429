//! Enumeration of simplicial maps out of finite presentations, weighted
//! limits and cotensors.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::constructions::{delta, delta_map, product, product_map};
use crate::error::{Error, Result};
use crate::fingen::{FinGenMap, FinGenSSet};
use crate::simplex::{codegeneracy, coface, Simplex};
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

/// A map out of a presentation, given by the cell of the target assigned
/// to each generator (in the generator's degree).
pub type GenMap = Vec<usize>;

/// Errors unless every generator of `a` lies within the bound of `x`.
pub fn check_bound(a: &FinGenSSet, x: &TruncatedSSet) -> Result<()> {
    match a.generators().iter().find(|g| g.degree > x.bound()) {
        Some(g) => Err(Error::BoundTooLow { generator: g.name.clone(), degree: g.degree, bound: x.bound() }),
        None => Ok(()),
    }
}

/// The cell of `x` denoted by a simplex over the generators of `a`.
pub fn eval(a: &FinGenSSet, x: &TruncatedSSet, phi: &[usize], s: &Simplex) -> usize {
    let k = a.generator(s.generator).degree;
    x.apply_word(phi[s.generator], k, &s.word).expect("simplex within bound")
}

struct Search<'a, F> {
    a: &'a FinGenSSet,
    x: &'a TruncatedSSet,
    order: Vec<usize>,
    fixed: Vec<Option<usize>>,
    assign: Vec<usize>,
    visit: F,
}

impl<F: FnMut(&[usize]) -> ControlFlow<()>> Search<'_, F> {
    fn boundary(&self, g: usize) -> Vec<usize> {
        self.a.generator(g).faces.iter().map(|f| eval(self.a, self.x, &self.assign, f)).collect()
    }

    fn run(&mut self, pos: usize) -> ControlFlow<()> {
        if pos == self.order.len() {
            return (self.visit)(&self.assign);
        }
        let g = self.order[pos];
        let k = self.a.generator(g).degree;
        if k == 0 {
            match self.fixed[g] {
                Some(c) => {
                    self.assign[g] = c;
                    self.run(pos + 1)?;
                }
                None => {
                    for c in 0..self.x.count(0) {
                        self.assign[g] = c;
                        self.run(pos + 1)?;
                    }
                }
            }
            return ControlFlow::Continue(());
        }
        let key = self.boundary(g);
        if let Some(c) = self.fixed[g] {
            if self.x.boundary_of(k, c) == key {
                self.assign[g] = c;
                self.run(pos + 1)?;
            }
            return ControlFlow::Continue(());
        }
        let x = self.x;
        if let Some(cands) = x.boundary_index(k).get(&key) {
            for &c in cands {
                self.assign[g] = c;
                self.run(pos + 1)?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Fixes the nondegenerate faces of fixed generators; `None` if two
/// fixed images disagree.
fn propagate_fixed(a: &FinGenSSet, x: &TruncatedSSet, fixed: &[Option<usize>]) -> Option<Vec<Option<usize>>> {
    let mut out = fixed.to_vec();
    out.resize(a.len(), None);
    let mut by_degree: Vec<usize> = (0..a.len()).collect();
    by_degree.sort_by_key(|&g| std::cmp::Reverse(a.generator(g).degree));
    for g in by_degree {
        let (Some(c), k) = (out[g], a.generator(g).degree) else { continue };
        for (i, f) in a.generator(g).faces.iter().enumerate() {
            if !f.word.is_empty() {
                continue;
            }
            let d = x.face(k, i, c);
            match out[f.generator] {
                Some(e) if e != d => return None,
                _ => out[f.generator] = Some(d),
            }
        }
    }
    Some(out)
}

/// Every generator after the generators of its faces, walking down from
/// fixed generators first and then from the highest degrees, so that
/// each cell is checked as soon as its boundary is assigned.
fn search_order(a: &FinGenSSet, fixed: &[Option<usize>]) -> Vec<usize> {
    fn visit(a: &FinGenSSet, g: usize, seen: &mut [bool], order: &mut Vec<usize>) {
        if std::mem::replace(&mut seen[g], true) {
            return;
        }
        for f in &a.generator(g).faces {
            visit(a, f.generator, seen, order);
        }
        order.push(g);
    }
    let mut roots: Vec<usize> = (0..a.len()).collect();
    roots.sort_by_key(|&g| (fixed[g].is_none(), std::cmp::Reverse(a.generator(g).degree)));
    let mut seen = vec![false; a.len()];
    let mut order = Vec::with_capacity(a.len());
    for g in roots {
        visit(a, g, &mut seen, &mut order);
    }
    order
}

/// Calls `visit` on every map `a -> x` agreeing with the `Some` entries of
/// `fixed`, in an order determined by `a` and `fixed`. `visit` may stop
/// the search early by returning `Break`.
pub fn for_each_map(
    a: &FinGenSSet,
    x: &TruncatedSSet,
    fixed: &[Option<usize>],
    visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<()> {
    check_bound(a, x)?;
    if fixed.len() > a.len() {
        return Err(Error::InvalidArgument("more fixed images than generators".into()));
    }
    for (g, c) in fixed.iter().enumerate() {
        if let Some(c) = c {
            if *c >= x.count(a.generator(g).degree) {
                return Err(Error::InvalidArgument(format!("fixed image of generator {g} is out of range")));
            }
        }
    }
    let Some(fixed) = propagate_fixed(a, x, fixed) else { return Ok(()) };
    let order = search_order(a, &fixed);
    let mut s = Search { a, x, order, fixed, assign: vec![0; a.len()], visit };
    let _ = s.run(0);
    Ok(())
}

/// All simplicial maps `a -> x`, sorted.
pub fn enumerate_maps(a: &FinGenSSet, x: &TruncatedSSet) -> Result<Vec<GenMap>> {
    extensions(a, x, &[])
}

pub fn count_maps(a: &FinGenSSet, x: &TruncatedSSet) -> Result<usize> {
    let mut n = 0;
    for_each_map(a, x, &[], |_| {
        n += 1;
        ControlFlow::Continue(())
    })?;
    Ok(n)
}

/// All maps extending the given partial assignment, sorted.
pub fn extensions(a: &FinGenSSet, x: &TruncatedSSet, fixed: &[Option<usize>]) -> Result<Vec<GenMap>> {
    let mut out = Vec::new();
    for_each_map(a, x, fixed, |phi| {
        out.push(phi.to_vec());
        ControlFlow::Continue(())
    })?;
    out.sort_unstable();
    Ok(out)
}

/// The first extension found by the search, if any.
pub fn first_extension(a: &FinGenSSet, x: &TruncatedSSet, fixed: &[Option<usize>]) -> Result<Option<GenMap>> {
    let mut found = None;
    for_each_map(a, x, fixed, |phi| {
        found = Some(phi.to_vec());
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// The weighted limit `{W, X}`: for a set-valued `X` this is `Hom(W, X)`.
pub fn weighted_limit(w: &FinGenSSet, x: &TruncatedSSet) -> Result<Vec<GenMap>> {
    enumerate_maps(w, x)
}

/// `φ ∘ u` for `u : B -> A` and `φ : A -> X`.
pub fn precompose(u: &FinGenMap, a: &FinGenSSet, x: &TruncatedSSet, phi: &[usize]) -> GenMap {
    u.images.iter().map(|s| eval(a, x, phi, s)).collect()
}

/// `f ∘ φ` for `φ : A -> X` and `f : X -> Y`.
pub fn postcompose(f: &SMap, a: &FinGenSSet, phi: &[usize]) -> GenMap {
    phi.iter().enumerate().map(|(g, &c)| f.apply(a.generator(g).degree, c)).collect()
}

/// The truncated map `trunc(A) -> X` determined by `φ`, where `source` is
/// a truncation of `A` at the bound of `x`.
pub fn to_smap(a: &FinGenSSet, source: Arc<TruncatedSSet>, x: Arc<TruncatedSSet>, phi: &[usize]) -> Result<SMap> {
    let components = (0..=source.bound())
        .map(|m| (0..source.count(m)).map(|c| eval(a, &x, phi, &source.cell_simplex(m, c))).collect())
        .collect();
    SMap::new_unchecked(source, x, components)
}

/// The generator images of a map out of a truncation, over its
/// presentation.
pub fn from_smap(f: &SMap) -> GenMap {
    let src = f.source();
    (0..=src.bound()).flat_map(|m| src.nondegenerate(m).iter().map(move |&c| f.apply(m, c))).collect()
}

/// Lookup table from maps to their position in a sorted list.
pub fn index_maps(maps: &[GenMap]) -> HashMap<&[usize], usize> {
    maps.iter().enumerate().map(|(i, m)| (m.as_slice(), i)).collect()
}

/// The cotensor `Z ⋔ X` truncated at `bound`, with the weights
/// `Δᵐ × Z` and the maps representing each cell.
#[derive(Debug, Clone)]
pub struct Cotensor {
    pub object: Arc<TruncatedSSet>,
    pub weights: Vec<FinGenSSet>,
    pub cells: Vec<Vec<GenMap>>,
}

fn z_dimension(z: &FinGenSSet) -> usize {
    z.dimension().unwrap_or(0)
}

/// Presentation of `Δᵐ × Z`.
fn product_weight(m: usize, z: &FinGenSSet) -> FinGenSSet {
    let b = m + z_dimension(z);
    product(&delta(m).truncate(b), &z.truncate(b)).expect("equal bounds").presentation()
}

/// `(Z ⋔ X)_m = Hom(Δᵐ × Z, X)` for `m ≤ bound`, with faces and
/// degeneracies by precomposition with `δ × id` and `σ × id`.
pub fn cotensor(z: &FinGenSSet, x: &TruncatedSSet, bound: usize) -> Result<Cotensor> {
    let needed = bound + z_dimension(z);
    if x.bound() < needed {
        return Err(Error::InsufficientBound { what: "cotensor".into(), needed, bound: x.bound() });
    }
    let mut weights = Vec::with_capacity(bound + 1);
    let mut cells = Vec::with_capacity(bound + 1);
    for m in 0..=bound {
        let w = product_weight(m, z);
        cells.push(enumerate_maps(&w, x)?);
        weights.push(w);
    }
    let index: Vec<HashMap<&[usize], usize>> = cells.iter().map(|c| index_maps(c)).collect();
    let id_z = |b: usize| SMap::identity(Arc::new(z.truncate(b)));
    // map Δᵖ × Z -> Δᵠ × Z induced by θ, as a presentation map
    let induced = |p: usize, q: usize, theta: &[usize]| -> FinGenMap {
        let b = p.max(q) + z_dimension(z);
        let dp = Arc::new(delta(p).truncate(b));
        let dq = Arc::new(delta(q).truncate(b));
        let th = delta_map(p, q, theta).to_smap_between(dp.clone(), dq.clone());
        let idz = id_z(b);
        let src = Arc::new(product(&dp, idz.source()).expect("bounds"));
        let tgt = Arc::new(product(&dq, idz.source()).expect("bounds"));
        let f = product_map(&th, &idz, src, tgt).expect("shapes");
        FinGenMap::from_smap(&f)
    };
    let mut names = Vec::with_capacity(bound + 1);
    for (m, list) in cells.iter().enumerate() {
        names.push(
            list.iter()
                .map(|phi| {
                    let parts: Vec<&str> = phi
                        .iter()
                        .enumerate()
                        .map(|(g, &c)| x.name(weights[m].generator(g).degree, c))
                        .collect();
                    format!("<{}>", parts.join(","))
                })
                .collect(),
        );
    }
    let mut faces = vec![vec![]];
    for m in 1..=bound {
        let tables = (0..=m)
            .map(|i| {
                let u = induced(m - 1, m, &coface(m, i));
                cells[m].iter().map(|phi| index[m - 1][precompose(&u, &weights[m], x, phi).as_slice()]).collect()
            })
            .collect();
        faces.push(tables);
    }
    let mut degens = Vec::with_capacity(bound + 1);
    for m in 0..bound {
        let tables = (0..=m)
            .map(|i| {
                let u = induced(m + 1, m, &codegeneracy(m, i));
                cells[m].iter().map(|phi| index[m + 1][precompose(&u, &weights[m], x, phi).as_slice()]).collect()
            })
            .collect();
        degens.push(tables);
    }
    degens.push(vec![]);
    let object = Arc::new(TruncatedSSet::from_tables_unchecked(bound, names, faces, degens)?);
    Ok(Cotensor { object, weights, cells })
}

/// The map `W ⋔ X -> Z ⋔ X` given by precomposition with `g : Z -> W`.
pub fn cotensor_precompose(
    g: &FinGenMap,
    z: &FinGenSSet,
    w: &FinGenSSet,
    x: &TruncatedSSet,
    cot_w: &Cotensor,
    cot_z: &Cotensor,
) -> Result<SMap> {
    let bound = cot_w.object.bound();
    if cot_z.object.bound() != bound {
        return Err(Error::BoundMismatch(bound, cot_z.object.bound()));
    }
    let mut components = Vec::with_capacity(bound + 1);
    for m in 0..=bound {
        let b = m + z_dimension(z).max(z_dimension(w));
        let dm = Arc::new(delta(m).truncate(b));
        let zt = Arc::new(z.truncate(b));
        let wt = Arc::new(w.truncate(b));
        let gs = g.to_smap_between(zt.clone(), wt.clone());
        let src = Arc::new(product(&dm, &zt)?);
        let tgt = Arc::new(product(&dm, &wt)?);
        let u = FinGenMap::from_smap(&product_map(&SMap::identity(dm), &gs, src, tgt)?);
        let index = index_maps(&cot_z.cells[m]);
        let comp = cot_w.cells[m]
            .iter()
            .map(|phi| index[precompose(&u, &cot_w.weights[m], x, phi).as_slice()])
            .collect();
        components.push(comp);
    }
    SMap::new_unchecked(cot_w.object.clone(), cot_z.object.clone(), components)
}

/// The Yoneda bijection `Hom(Δⁿ, X) -> X_n`: evaluation at the top cell.
pub fn yoneda_cell(phi: &[usize]) -> usize {
    *phi.last().expect("Δⁿ has generators")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FinCategory;
    use crate::constructions::{boundary, boundary_inclusion, horn, nerve, subdivision};

    #[test]
    fn fixed_images_filter_the_full_enumeration() {
        let x = nerve(&FinCategory::indiscrete(2), 2);
        let a = horn(2, 1).unwrap();
        let all = enumerate_maps(&a, &x).unwrap();
        for g in 0..a.len() {
            for c in 0..x.count(a.generator(g).degree) {
                let mut fixed = vec![None; a.len()];
                fixed[g] = Some(c);
                let expect: Vec<GenMap> = all.iter().filter(|p| p[g] == c).cloned().collect();
                assert_eq!(extensions(&a, &x, &fixed).unwrap(), expect);
            }
        }
    }

    #[test]
    fn yoneda_counts() {
        let x = nerve(&FinCategory::cyclic_group(2), 3);
        for n in 0..=3 {
            let maps = enumerate_maps(&delta(n), &x).unwrap();
            assert_eq!(maps.len(), x.count(n));
            let tops: Vec<usize> = maps.iter().map(|p| yoneda_cell(p)).collect();
            let mut sorted = tops.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), x.count(n));
        }
    }

    #[test]
    fn small_hom_counts() {
        let d1 = delta(1).truncate(2);
        assert_eq!(count_maps(&boundary(1), &d1).unwrap(), 4);
        assert_eq!(count_maps(&subdivision(1), &d1).unwrap(), 5);
        assert_eq!(weighted_limit(&horn(2, 1).unwrap(), &d1).unwrap().len(), 4);
        assert_eq!(weighted_limit(&delta(0), &d1).unwrap().len(), d1.count(0));
    }

    #[test]
    fn bound_too_low_names_generator() {
        let d1 = delta(1).truncate(1);
        match enumerate_maps(&delta(2), &d1) {
            Err(Error::BoundTooLow { degree: 2, bound: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn fixed_assignment_restricts() {
        let d1 = delta(1).truncate(2);
        let all = enumerate_maps(&delta(1), &d1).unwrap();
        let fixed = vec![Some(1), None, None];
        let ext = extensions(&delta(1), &d1, &fixed).unwrap();
        assert_eq!(ext.len(), all.iter().filter(|p| p[0] == 1).count());
    }

    #[test]
    fn cotensor_of_point_matches() {
        let x = nerve(&FinCategory::cyclic_group(2), 3);
        let c = cotensor(&delta(0), &x, 3).unwrap();
        assert_eq!(c.object.counts(), x.counts());
        assert!(c.object.validate_identities().is_empty());
        let c1 = cotensor(&delta(1), &x, 1).unwrap();
        assert_eq!(c1.object.count(0), 2);
        assert!(c1.object.validate_identities().is_empty());
    }

    #[test]
    fn restriction_to_boundary_is_simplicial() {
        let x = nerve(&FinCategory::cyclic_group(2), 3);
        let cd = cotensor(&delta(1), &x, 2).unwrap();
        let cb = cotensor(&boundary(1), &x, 2).unwrap();
        let r = cotensor_precompose(&boundary_inclusion(1), &boundary(1), &delta(1), &x, &cd, &cb).unwrap();
        r.validate().unwrap();
    }
}
