//! Kan's `Ex` functor: maps out of subdivided simplices, the canonical
//! embedding `X -> Ex X`, iterates and truncated `Ex^∞`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::constructions::{horn, Subdivision};
use crate::error::{Error, Result};
use crate::fingen::FinGenMap;
use crate::hom::{enumerate_maps, first_extension, index_maps, postcompose, precompose, GenMap};
use crate::kan::vertex_sets;
use crate::simplex::{codegeneracy, coface};
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

/// `Ex X` truncated at a bound, with each cell kept as the map
/// `N(Pⁿ) -> X` it stands for.
#[derive(Debug, Clone)]
pub struct ExObject {
    pub object: Arc<TruncatedSSet>,
    /// `cells[n][c]`: generator images over the subdivision of `Δⁿ`.
    pub cells: Vec<Vec<GenMap>>,
    subdivisions: Vec<Subdivision>,
}

fn subdivisions(bound: usize) -> Vec<Subdivision> {
    (0..=bound).map(Subdivision::new).collect()
}

/// `sd(θ)` for every coface and codegeneracy between adjacent degrees.
struct Induced {
    faces: Vec<Vec<FinGenMap>>,
    degens: Vec<Vec<FinGenMap>>,
}

fn induced_maps(sds: &[Subdivision]) -> Induced {
    let bound = sds.len() - 1;
    let faces = (0..=bound)
        .map(|n| {
            if n == 0 {
                vec![]
            } else {
                (0..=n).map(|i| sds[n - 1].induced(&coface(n, i), &sds[n])).collect()
            }
        })
        .collect();
    let degens = (0..=bound)
        .map(|n| {
            if n == bound {
                vec![]
            } else {
                (0..=n).map(|i| sds[n + 1].induced(&codegeneracy(n, i), &sds[n])).collect()
            }
        })
        .collect();
    Induced { faces, degens }
}

fn cell_name(x: &TruncatedSSet, sd: &Subdivision, phi: &[usize]) -> String {
    let parts: Vec<&str> = phi
        .iter()
        .enumerate()
        .filter(|(g, _)| sd.presentation.generator(*g).degree == 0)
        .map(|(_, &c)| x.name(0, c))
        .collect();
    // vertex images do not determine the cell in general; `ex` suffixes
    // repeated names in canonical order
    format!("Ex({})", parts.join(","))
}

/// `Ex X` in degrees `0..=bound`. Requires `X` known up to `bound`.
pub fn ex(x: &TruncatedSSet, bound: usize) -> Result<ExObject> {
    if x.bound() < bound {
        return Err(Error::InsufficientBound { what: "Ex".into(), needed: bound, bound: x.bound() });
    }
    let sds = subdivisions(bound);
    let cells: Vec<Vec<GenMap>> =
        sds.iter().map(|sd| enumerate_maps(&sd.presentation, x)).collect::<Result<_>>()?;
    let index: Vec<HashMap<&[usize], usize>> = cells.iter().map(|c| index_maps(c)).collect();
    let ind = induced_maps(&sds);
    let mut faces = vec![vec![]];
    for n in 1..=bound {
        faces.push(
            ind.faces[n]
                .iter()
                .map(|u| {
                    cells[n]
                        .iter()
                        .map(|phi| index[n - 1][precompose(u, &sds[n].presentation, x, phi).as_slice()])
                        .collect()
                })
                .collect(),
        );
    }
    let mut degens = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        degens.push(
            ind.degens[n]
                .iter()
                .map(|u| {
                    cells[n]
                        .iter()
                        .map(|phi| index[n + 1][precompose(u, &sds[n].presentation, x, phi).as_slice()])
                        .collect()
                })
                .collect(),
        );
    }
    let names = cells
        .iter()
        .enumerate()
        .map(|(n, list)| {
            let mut seen: HashMap<String, usize> = HashMap::new();
            list.iter()
                .map(|phi| {
                    let base = cell_name(x, &sds[n], phi);
                    let k = seen.entry(base.clone()).or_insert(0);
                    *k += 1;
                    if *k == 1 {
                        base
                    } else {
                        format!("{base}#{}", *k - 1)
                    }
                })
                .collect()
        })
        .collect();
    drop(index);
    let object = Arc::new(TruncatedSSet::from_tables_unchecked(bound, names, faces, degens)?);
    Ok(ExObject { object, cells, subdivisions: sds })
}

impl ExObject {
    pub fn bound(&self) -> usize {
        self.object.bound()
    }

    pub fn subdivision(&self, n: usize) -> &Subdivision {
        &self.subdivisions[n]
    }

    /// Index of the cell represented by `phi` in degree `n`.
    pub fn find(&self, n: usize, phi: &[usize]) -> Option<usize> {
        self.cells[n].binary_search_by(|c| c.as_slice().cmp(phi)).ok()
    }
}

/// The image `x ∘ max : N(Pⁿ) -> X` of an `n`-cell under `i_X`.
pub fn embedding_image(x: &TruncatedSSet, sd: &Subdivision, cell: usize) -> GenMap {
    let n = sd.n;
    (0..sd.presentation.len())
        .map(|g| {
            let maxes: Vec<usize> = sd.chain(g).iter().map(|m| 63 - m.leading_zeros() as usize).collect();
            x.act(cell, n, &maxes).expect("within bound")
        })
        .collect()
}

/// The canonical embedding `i_X : X -> Ex X`, `x ↦ x ∘ max`.
pub fn canonical_embedding(x: &Arc<TruncatedSSet>, ex_x: &ExObject) -> Result<SMap> {
    if x.bound() != ex_x.bound() {
        return Err(Error::BoundMismatch(x.bound(), ex_x.bound()));
    }
    let components = (0..=x.bound())
        .map(|n| {
            let sd = ex_x.subdivision(n);
            (0..x.count(n))
                .map(|c| ex_x.find(n, &embedding_image(x, sd, c)).expect("x ∘ max is a map"))
                .collect()
        })
        .collect();
    SMap::new_unchecked(x.clone(), ex_x.object.clone(), components)
}

/// Whether `i_X` is injective in degree `n`, decided on the images
/// `x ∘ max` without enumerating `(Ex X)_n`.
pub fn embedding_injective_in_degree(x: &TruncatedSSet, n: usize) -> bool {
    let sd = Subdivision::new(n);
    let mut seen = std::collections::HashSet::new();
    (0..x.count(n)).all(|c| seen.insert(embedding_image(x, &sd, c)))
}

/// `Ex f : Ex X -> Ex Y`, by postcomposition.
pub fn ex_map(f: &SMap, ex_x: &ExObject, ex_y: &ExObject) -> Result<SMap> {
    let components = (0..=ex_x.bound())
        .map(|n| {
            let sd = &ex_x.subdivision(n).presentation;
            ex_x.cells[n]
                .iter()
                .map(|phi| ex_y.find(n, &postcompose(f, sd, phi)).ok_or_else(|| Error::NotComposable("Ex f image".into())))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    SMap::new_unchecked(ex_x.object.clone(), ex_y.object.clone(), components)
}

/// One stage of the tower `X -> Ex X -> Ex² X -> …`.
#[derive(Debug, Clone)]
pub struct ExStage {
    pub stage: usize,
    pub object: Arc<TruncatedSSet>,
    /// `Ex` data when `stage > 0`.
    pub ex: Option<ExObject>,
    /// The embedding from the previous stage when `stage > 0`.
    pub embedding: Option<SMap>,
}

/// Stages `0..=k` of the tower, each truncated at `bound`.
pub fn ex_iter(x: &Arc<TruncatedSSet>, k: usize, bound: usize) -> Result<Vec<ExStage>> {
    let x0 = if x.bound() == bound { x.clone() } else { Arc::new(x.truncate_to(bound)?) };
    let mut stages = vec![ExStage { stage: 0, object: x0, ex: None, embedding: None }];
    for s in 1..=k {
        let prev = stages[s - 1].object.clone();
        let e = ex(&prev, bound)?;
        let emb = canonical_embedding(&prev, &e)?;
        stages.push(ExStage { stage: s, object: e.object.clone(), ex: Some(e), embedding: Some(emb) });
    }
    Ok(stages)
}

/// `Ex f` applied along a tower: the maps `Exʲ f` for `j = 0..=k`.
pub fn ex_iter_map(f: &SMap, xs: &[ExStage], ys: &[ExStage]) -> Result<Vec<SMap>> {
    let mut maps = vec![f.clone()];
    for j in 1..xs.len().min(ys.len()) {
        let (ex_x, ex_y) = (xs[j].ex.as_ref().unwrap(), ys[j].ex.as_ref().unwrap());
        let prev = maps[j - 1].clone();
        maps.push(ex_map(&prev, ex_x, ex_y)?);
    }
    Ok(maps)
}

/// A filler for a horn `Λⁿₖ -> Ex X`, after embedding into `Ex² X`.
///
/// `ex_x` must be known up to degree `n`. The result is an `n`-cell of
/// `Ex² X`, given as generator images of a map `N(Pⁿ) -> Ex X`, whose
/// restriction to the horn is `i_{Ex X} ∘ horn_cell`.
pub fn horn_filler_next_stage(ex_x: &ExObject, n: usize, k: usize, horn_cell: &[usize]) -> Result<GenMap> {
    let h = horn(n, k)?;
    if horn_cell.len() != h.len() {
        return Err(Error::InvalidArgument("horn map has the wrong number of generators".into()));
    }
    if ex_x.bound() < n {
        return Err(Error::InsufficientBound { what: "horn filler".into(), needed: n, bound: ex_x.bound() });
    }
    let target = &ex_x.object;
    let sd_n = Subdivision::new(n);
    let mut fixed = vec![None; sd_n.presentation.len()];
    let chain_index: HashMap<Vec<u64>, usize> =
        (0..sd_n.presentation.len()).map(|g| (sd_n.chain(g), g)).collect();
    for (verts, &y) in vertex_sets(&h).iter().zip(horn_cell) {
        let m = verts.len() - 1;
        let sd_m = Subdivision::new(m);
        let push = |mask: u64| -> u64 {
            (0..=m).filter(|v| mask & (1 << v) != 0).fold(0, |acc, v| acc | (1u64 << verts[v]))
        };
        let image = embedding_image(target, &sd_m, y);
        for (g, &c) in image.iter().enumerate() {
            let chain: Vec<u64> = sd_m.chain(g).into_iter().map(push).collect();
            fixed[chain_index[&chain]] = Some(c);
        }
    }
    first_extension(&sd_n.presentation, target, &fixed)?.ok_or_else(|| Error::NoFiller(format!("no extension of a Λ^{n}_{k} horn into Ex² X")))
}

/// Truncated `Ex^∞`: the last stage of the tower, with the earliest stage
/// each cell comes from and per-degree stabilization flags.
#[derive(Debug, Clone)]
pub struct ExInfinity {
    pub stages: usize,
    pub object: Arc<TruncatedSSet>,
    /// `provenance[n][c]`: first stage containing the cell.
    pub provenance: Vec<Vec<usize>>,
    pub report: FixpointReport,
}

/// `stable[s][n]`: whether the embedding from stage `s` into stage `s + 1`
/// is bijective in degree `n`. An observation about the truncation only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixpointReport {
    pub counts: Vec<Vec<usize>>,
    pub stable: Vec<Vec<bool>>,
}

pub fn ex_infty_truncated(x: &Arc<TruncatedSSet>, k: usize, bound: usize) -> Result<ExInfinity> {
    let stages = ex_iter(x, k, bound)?;
    let last = stages.last().unwrap().object.clone();
    let mut provenance: Vec<Vec<usize>> = (0..=bound).map(|n| vec![k; last.count(n)]).collect();
    // push each earlier cell forward to the last stage
    for s in (0..k).rev() {
        let mut images: Vec<Vec<usize>> = (0..=bound).map(|n| (0..stages[s].object.count(n)).collect()).collect();
        for t in s + 1..=k {
            let emb = stages[t].embedding.as_ref().unwrap();
            for (n, list) in images.iter_mut().enumerate() {
                for c in list.iter_mut() {
                    *c = emb.apply(n, *c);
                }
            }
        }
        for (n, list) in images.iter().enumerate() {
            for &c in list {
                provenance[n][c] = s;
            }
        }
    }
    let counts = stages.iter().map(|s| s.object.counts()).collect();
    let stable = stages
        .windows(2)
        .map(|w| {
            let emb = w[1].embedding.as_ref().unwrap();
            (0..=bound).map(|n| emb.is_injective() && w[0].object.count(n) == w[1].object.count(n)).collect()
        })
        .collect();
    Ok(ExInfinity { stages: k, object: last, provenance, report: FixpointReport { counts, stable } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FinCategory;
    use crate::constructions::{boundary, delta, nerve};
    use crate::hom::enumerate_maps;

    #[test]
    fn ex_of_delta_one() {
        let d1 = delta(1).truncate(2);
        let e = ex(&d1, 2).unwrap();
        assert_eq!(e.object.count(0), 2);
        assert_eq!(e.object.count(1), 5);
        assert!(e.object.validate_identities().is_empty());
    }

    #[test]
    fn ex_fixes_discrete() {
        let b = boundary(1).truncate(2);
        let e = ex(&b, 2).unwrap();
        assert_eq!(e.object.counts(), b.counts());
    }

    #[test]
    fn embedding_is_injective_simplicial() {
        let x = Arc::new(nerve(&FinCategory::cyclic_group(2), 2));
        let e = ex(&x, 2).unwrap();
        let i = canonical_embedding(&x, &e).unwrap();
        i.validate().unwrap();
        assert!(i.is_injective());
        assert_eq!(i.components()[0], (0..x.count(0)).collect::<Vec<_>>());
    }

    #[test]
    fn horn_fillers_in_ex_squared_of_delta_one() {
        let d1 = delta(1).truncate(2);
        let e = ex(&d1, 2).unwrap();
        let e2 = ex(&e.object, 2).unwrap();
        let i = canonical_embedding(&e.object, &e2).unwrap();
        for k in 0..=2 {
            let h = horn(2, k).unwrap();
            for hc in enumerate_maps(&h, &e.object).unwrap() {
                let filler = horn_filler_next_stage(&e, 2, k, &hc).unwrap();
                let cell = e2.find(2, &filler).unwrap();
                for (verts, &y) in vertex_sets(&h).iter().zip(&hc) {
                    let m = verts.len() - 1;
                    assert_eq!(e2.object.act(cell, 2, verts).unwrap(), i.apply(m, y));
                }
            }
        }
    }
}
