//! Local epimorphisms and local lifting properties, decided through
//! covering sieves.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::presheaf::{SPMap, SPresheaf, SetPresheaf, SetPresheafMap};
use super::{Site, Sieve};
use crate::constructions::{boundary, horn, point};
use crate::error::{Error, Result};
use crate::ex::{ex_iter, ex_iter_map};
use crate::fingen::FinGenSSet;
use crate::hom::{enumerate_maps, index_maps, postcompose, GenMap};
use crate::homotopy::RelBoundaryHomotopy;
use crate::kan::{restrict_cell, vertex_sets, Shape, Verdict};
use crate::smap::SMap;

/// The sieve of arrows along which one element of the target lifts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SieveCertificate {
    pub object: String,
    pub element: usize,
    pub element_name: String,
    pub sieve: Vec<String>,
    pub covering: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEpiReport {
    pub verdict: Verdict,
    /// One certificate per element of the target, objects in order.
    pub certificates: Vec<SieveCertificate>,
}

impl LocalEpiReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Local epimorphism test for the inclusion of the subpresheaf `in_image`
/// of `target`. Conditions (ii) (some covering sieve along which the
/// element lifts) and (iii) (the lifting sieve covers) are computed
/// separately and must agree.
pub fn local_epi_of_image(site: &Site, target: &SetPresheaf, in_image: &[Vec<bool>]) -> Result<LocalEpiReport> {
    let c = &site.category;
    let mut certificates = Vec::new();
    for o in 0..c.objects().len() {
        for y in 0..target.size(o) {
            let lifts = |u: usize| in_image[c.morphism(u).dom][target.restrict[u][y]];
            let sieve = Sieve { on: o, arrows: c.arrows_into(o).filter(|&u| lifts(u)).collect() };
            let by_membership = site.topology.covers(&sieve);
            let by_search = site.topology.covers[o].iter().any(|u| u.arrows.iter().all(|&a| lifts(a)));
            if by_membership != by_search {
                return Err(Error::CriterionMismatch { object: c.objects()[o].clone(), element: y });
            }
            certificates.push(SieveCertificate {
                object: c.objects()[o].clone(),
                element: y,
                element_name: target.names[o][y].clone(),
                sieve: sieve.arrow_names(c),
                covering: by_membership,
            });
        }
    }
    let verdict = if certificates.iter().all(|s| s.covering) { Verdict::Pass } else { Verdict::Fail };
    Ok(LocalEpiReport { verdict, certificates })
}

/// Whether `f` is a local epimorphism for the topology of `site`.
pub fn is_local_epi(f: &SetPresheafMap, site: &Site) -> Result<LocalEpiReport> {
    f.validate(&site.category)?;
    let in_image: Vec<Vec<bool>> = f
        .components
        .iter()
        .enumerate()
        .map(|(o, comp)| {
            let mut hit = vec![false; f.target.size(o)];
            for &v in comp {
                hit[v] = true;
            }
            hit
        })
        .collect();
    local_epi_of_image(site, &f.target, &in_image)
}

/// The sieve condition (ii) alone, by search over covering sieves.
pub fn local_epi_condition_ii(f: &SetPresheafMap, site: &Site) -> bool {
    let c = &site.category;
    (0..c.objects().len()).all(|o| {
        (0..f.target.size(o)).all(|y| {
            site.topology.covers[o].iter().any(|u| {
                u.arrows.iter().all(|&a| {
                    let d = c.morphism(a).dom;
                    let ya = f.target.restrict[a][y];
                    f.components[d].contains(&ya)
                })
            })
        })
    })
}

/// The sieve condition (iii) alone: every lifting sieve covers.
pub fn local_epi_condition_iii(f: &SetPresheafMap, site: &Site) -> bool {
    let c = &site.category;
    (0..c.objects().len()).all(|o| {
        (0..f.target.size(o)).all(|y| {
            let arrows: BTreeSet<usize> = c
                .arrows_into(o)
                .filter(|&a| f.components[c.morphism(a).dom].contains(&f.target.restrict[a][y]))
                .collect();
            site.topology.covers(&Sieve { on: o, arrows })
        })
    })
}

/// A failed local lifting problem: the comparison element at `object`
/// whose lifting sieve does not cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalWitness {
    pub n: usize,
    pub shape: Shape,
    pub certificate: SieveCertificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalLiftReport {
    pub verdict: Verdict,
    pub witnesses: Vec<LocalWitness>,
    pub bound_used: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ex_stages: Option<usize>,
}

impl LocalLiftReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }
}

/// Per-object data of a comparison presheaf whose elements are pairs
/// `(a, y)` of a map `a : A -> X(C)` and an `n`-cell `y` of `Y(C)` with
/// matching restrictions.
struct PairData {
    maps: Vec<GenMap>,
    pairs: Vec<(usize, usize)>,
    image: Vec<bool>,
}

fn pair_data(
    f: &SMap,
    sub: &FinGenSSet,
    n: usize,
    covered: &dyn Fn(&[GenMap], usize, usize) -> bool,
) -> Result<PairData> {
    let (x, y) = (f.source(), f.target());
    let verts = vertex_sets(sub);
    let maps = enumerate_maps(sub, x)?;
    let mut by_restriction: HashMap<GenMap, Vec<usize>> = HashMap::new();
    for c in 0..y.count(n) {
        by_restriction.entry(restrict_cell(y, n, c, &verts)).or_default().push(c);
    }
    let mut pairs = Vec::new();
    for (a, h) in maps.iter().enumerate() {
        if let Some(cs) = by_restriction.get(&postcompose(f, sub, h)) {
            pairs.extend(cs.iter().map(|&c| (a, c)));
        }
    }
    let image = pairs.iter().map(|&(a, c)| covered(&maps, a, c)).collect();
    Ok(PairData { maps, pairs, image })
}

/// Assembles the comparison presheaf from per-object pair data.
fn pair_presheaf(
    site: &Site,
    x: &SPresheaf,
    y: &SPresheaf,
    sub: &FinGenSSet,
    n: usize,
    data: &[PairData],
) -> SetPresheaf {
    let c = &site.category;
    let index: Vec<HashMap<(usize, usize), usize>> =
        data.iter().map(|d| d.pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect()).collect();
    let map_index: Vec<HashMap<&[usize], usize>> = data.iter().map(|d| index_maps(&d.maps)).collect();
    let names = data
        .iter()
        .enumerate()
        .map(|(o, d)| {
            d.pairs
                .iter()
                .map(|&(a, cell)| {
                    let xs = &x.sets[o];
                    let parts: Vec<&str> = d.maps[a]
                        .iter()
                        .enumerate()
                        .map(|(g, &v)| xs.name(sub.generator(g).degree, v))
                        .collect();
                    format!("([{}],{})", parts.join(","), y.sets[o].name(n, cell))
                })
                .collect()
        })
        .collect();
    let restrict = c
        .morphisms()
        .iter()
        .enumerate()
        .map(|(u, m)| {
            let (from, to) = (m.cod, m.dom);
            data[from]
                .pairs
                .iter()
                .map(|&(a, cell)| {
                    let h = postcompose(&x.restrict[u], sub, &data[from].maps[a]);
                    let a2 = map_index[to][h.as_slice()];
                    index[to][&(a2, y.restrict[u].apply(n, cell))]
                })
                .collect()
        })
        .collect();
    SetPresheaf { names, restrict }
}

fn shape_complex(n: usize, shape: Shape) -> Result<FinGenSSet> {
    match shape {
        Shape::Horn(k) => horn(n, k),
        Shape::Boundary => Ok(boundary(n)),
    }
}

/// The horn (or boundary) comparison `X_n -> Hom(A, X) ×_{Hom(A, Y)} Y_n`
/// at every object, as a target presheaf with the image marked.
fn lifting_comparison(f: &SPMap, site: &Site, n: usize, shape: Shape) -> Result<(SetPresheaf, Vec<Vec<bool>>)> {
    let sub = shape_complex(n, shape)?;
    let verts = vertex_sets(&sub);
    let data = f
        .components
        .par_iter()
        .map(|fo| {
            let x = fo.source();
            let index: HashMap<GenMap, usize> =
                enumerate_maps(&sub, x)?.into_iter().enumerate().map(|(i, h)| (h, i)).collect();
            let image: HashSet<(usize, usize)> =
                (0..x.count(n)).map(|c| (index[&restrict_cell(x, n, c, &verts)], fo.apply(n, c))).collect();
            pair_data(fo, &sub, n, &|_, a, c| image.contains(&(a, c)))
        })
        .collect::<Result<Vec<_>>>()?;
    let target = pair_presheaf(site, &f.source, &f.target, &sub, n, &data);
    Ok((target, data.into_iter().map(|d| d.image).collect()))
}

/// The Dugger–Isaksen comparison at every object.
fn di_comparison(f: &SPMap, site: &Site, n: usize) -> Result<(SetPresheaf, Vec<Vec<bool>>)> {
    let sub = boundary(n);
    let verts = vertex_sets(&sub);
    let data = f
        .components
        .par_iter()
        .map(|fo| {
            let (x, y) = (fo.source(), fo.target());
            let h = RelBoundaryHomotopy::new(y, n)?;
            let maps = enumerate_maps(&sub, x)?;
            let index = index_maps(&maps);
            let mut by_boundary: HashMap<usize, Vec<usize>> = HashMap::new();
            for c in 0..x.count(n) {
                by_boundary.entry(index[restrict_cell(x, n, c, &verts).as_slice()]).or_default().push(fo.apply(n, c));
            }
            pair_data(fo, &sub, n, &|_, b, yc| {
                by_boundary.get(&b).is_some_and(|fxs| fxs.iter().any(|&fx| h.related(yc, fx).expect("within bound")))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let target = pair_presheaf(site, &f.source, &f.target, &sub, n, &data);
    Ok((target, data.into_iter().map(|d| d.image).collect()))
}

fn collect_report(
    site: &Site,
    comparisons: Vec<(usize, Shape, SetPresheaf, Vec<Vec<bool>>)>,
    n_max: usize,
    ex_stages: Option<usize>,
) -> Result<LocalLiftReport> {
    let mut witnesses = Vec::new();
    for (n, shape, target, image) in comparisons {
        let r = local_epi_of_image(site, &target, &image)?;
        if let Some(cert) = r.certificates.into_iter().find(|c| !c.covering) {
            witnesses.push(LocalWitness { n, shape, certificate: cert });
        }
    }
    let verdict = if witnesses.is_empty() { Verdict::Pass } else { Verdict::Fail };
    Ok(LocalLiftReport { verdict, witnesses, bound_used: n_max, ex_stages })
}

fn check_bound(f: &SPMap, needed: usize) -> Result<()> {
    let bound = f.source.bound();
    if bound < needed {
        return Err(Error::InsufficientBound { what: "local lifting check".into(), needed, bound });
    }
    Ok(())
}

/// Horn comparisons are local epimorphisms for `1 ≤ n ≤ n_max`.
pub fn is_local_kan_fibration(f: &SPMap, site: &Site, n_max: usize) -> Result<LocalLiftReport> {
    check_bound(f, n_max)?;
    let mut comps = Vec::new();
    for n in 1..=n_max {
        for k in 0..=n {
            let (t, img) = lifting_comparison(f, site, n, Shape::Horn(k))?;
            comps.push((n, Shape::Horn(k), t, img));
        }
    }
    collect_report(site, comps, n_max, None)
}

/// Boundary comparisons are local epimorphisms for `0 ≤ n ≤ n_max`.
pub fn is_local_trivial_fibration(f: &SPMap, site: &Site, n_max: usize) -> Result<LocalLiftReport> {
    check_bound(f, n_max)?;
    let mut comps = Vec::new();
    for n in 0..=n_max {
        let (t, img) = lifting_comparison(f, site, n, Shape::Boundary)?;
        comps.push((n, Shape::Boundary, t, img));
    }
    collect_report(site, comps, n_max, None)
}

/// The map to the terminal simplicial presheaf.
pub fn to_terminal(x: &SPresheaf, site: &Site) -> Result<SPMap> {
    let pt = Arc::new(point(x.bound()));
    let target = SPresheaf::constant(&site.category, pt.clone());
    let components = x.sets.iter().map(|s| SMap::to_point(s.clone(), pt.clone())).collect::<Result<Vec<_>>>()?;
    Ok(SPMap { source: x.clone(), target, components })
}

pub fn is_locally_fibrant(x: &SPresheaf, site: &Site, n_max: usize) -> Result<LocalLiftReport> {
    is_local_kan_fibration(&to_terminal(x, site)?, site, n_max)
}

/// Applies `Ex^k` objectwise, truncated at `bound`.
pub fn ex_transport(f: &SPMap, site: &Site, stages: usize, bound: usize) -> Result<SPMap> {
    let c = &site.category;
    let xs = f.source.sets.iter().map(|x| ex_iter(x, stages, bound)).collect::<Result<Vec<_>>>()?;
    let ys = f.target.sets.iter().map(|y| ex_iter(y, stages, bound)).collect::<Result<Vec<_>>>()?;
    let last = |tower: &[crate::ex::ExStage]| tower.last().unwrap().object.clone();
    let transported = |p: &SPresheaf, towers: &[Vec<crate::ex::ExStage>]| -> Result<SPresheaf> {
        let restrict = c
            .morphisms()
            .iter()
            .enumerate()
            .map(|(u, m)| {
                Ok(ex_iter_map(&p.restrict[u], &towers[m.cod], &towers[m.dom])?.pop().unwrap())
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SPresheaf { sets: towers.iter().map(|t| last(t)).collect(), restrict })
    };
    let source = transported(&f.source, &xs)?;
    let target = transported(&f.target, &ys)?;
    let components = (0..c.objects().len())
        .map(|o| Ok(ex_iter_map(&f.components[o], &xs[o], &ys[o])?.pop().unwrap()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SPMap { source, target, components })
}

/// After `ex_stages` objectwise applications of `Ex`, the DI comparison
/// maps in degrees `0..=n_max` are local epimorphisms.
pub fn is_local_weak_equivalence(f: &SPMap, site: &Site, n_max: usize, ex_stages: usize) -> Result<LocalLiftReport> {
    check_bound(f, n_max + 1)?;
    let g = ex_transport(f, site, ex_stages, n_max + 1)?;
    let mut comps = Vec::new();
    for n in 0..=n_max {
        let (t, img) = di_comparison(&g, site, n)?;
        comps.push((n, Shape::Boundary, t, img));
    }
    collect_report(site, comps, n_max, Some(ex_stages))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ut_local_epi, ut_local_fib, ut_local_we, ut_site};

    #[test]
    fn empty_at_t_is_local_epi_only_when_u_covers() {
        let f = ut_local_epi();
        let r = is_local_epi(&f, &ut_site(true)).unwrap();
        assert!(r.passed());
        let at_t = r.certificates.iter().find(|s| s.object == "t").unwrap();
        assert_eq!(at_t.sieve, vec!["u->t".to_string()]);
        assert!(!is_local_epi(&f, &ut_site(false)).unwrap().passed());
    }

    #[test]
    fn non_kan_at_t_is_locally_fibrant() {
        let f = ut_local_fib();
        assert!(is_local_kan_fibration(&f, &ut_site(true), 2).unwrap().passed());
        let r = is_local_kan_fibration(&f, &ut_site(false), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witnesses[0].certificate.object, "t");
        assert!(is_locally_fibrant(&f.source, &ut_site(true), 2).unwrap().passed());
    }

    #[test]
    fn collapsing_components_is_local_we_only_when_u_covers() {
        let f = ut_local_we();
        assert!(is_local_weak_equivalence(&f, &ut_site(true), 1, 1).unwrap().passed());
        let r = is_local_weak_equivalence(&f, &ut_site(false), 1, 1).unwrap();
        assert!(!r.passed());
        assert_eq!(r.witnesses[0].certificate.object, "t");
    }
}
