//! The named example files shipped with the tool.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use crate::category::{FinCategory, FinPoset};
use crate::constructions::{boundary, boundary_inclusion, delta, delta_map, horn, nerve, point};
use crate::error::Result;
use crate::io::{self, Document, PresentationMap};
use crate::site::presheaf::{SPMap, SPMapDoc, SPresheaf, SetPresheaf, SetPresheafMap, SetPresheafMapDoc};
use crate::site::{generated_sieve, Site};
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

/// The poset `u ≤ t` as a category with the single arrow `u->t`.
pub fn ut_category() -> FinCategory {
    FinPoset::new(vec!["u".into(), "t".into()], vec![vec![true, true], vec![false, true]])
        .expect("valid poset")
        .as_category()
}

/// `{u ≤ t}` with `u` covering `t`, or with the trivial topology.
pub fn ut_site(covering: bool) -> Site {
    let c = ut_category();
    if !covering {
        return Site::trivial(c);
    }
    let s = generated_sieve(&c, 1, &[c.find_morphism("u->t").unwrap()]).expect("valid sieve");
    Site::new(c, &[vec![], vec![s]]).expect("valid topology")
}

/// Empty at `t`, a point at `u`, into the terminal presheaf. Not
/// surjective at `t`, but the point of `Y(t)` lifts along `u->t`.
pub fn ut_local_epi() -> SetPresheafMap {
    let c = ut_category();
    let ut = c.find_morphism("u->t").unwrap();
    let mut rx = vec![vec![]; c.morphisms().len()];
    rx[c.identity(0)] = vec![0];
    let mut ry = vec![vec![0]; c.morphisms().len()];
    ry[ut] = vec![0];
    let x = SetPresheaf::new(&c, vec![vec!["*".into()], vec![]], rx).unwrap();
    let y = SetPresheaf::new(&c, vec![vec!["*".into()], vec!["*".into()]], ry).unwrap();
    SetPresheafMap::new(&c, x, y, vec![vec![0], vec![]]).unwrap()
}

/// `X(t) = at_t`, `X(u) = pt`, with the unique restriction.
fn point_under(at_t: TruncatedSSet) -> SPresheaf {
    let c = ut_category();
    let at_t = Arc::new(at_t);
    let pt = Arc::new(point(at_t.bound()));
    let sets = vec![pt.clone(), at_t.clone()];
    let restrict = c
        .morphisms()
        .iter()
        .map(|m| {
            if m.dom == m.cod {
                SMap::identity(sets[m.dom].clone())
            } else {
                SMap::to_point(at_t.clone(), pt.clone()).unwrap()
            }
        })
        .collect();
    SPresheaf::new(&c, sets, restrict).unwrap()
}

fn to_terminal(x: SPresheaf) -> SPMap {
    let c = ut_category();
    let pt = Arc::new(point(x.bound()));
    let components = x.sets.iter().map(|s| SMap::to_point(s.clone(), pt.clone()).unwrap()).collect();
    SPMap::new(&c, x, SPresheaf::constant(&c, pt), components).unwrap()
}

/// `Δ¹` at `t` (not Kan) and a point at `u`, into the terminal presheaf.
pub fn ut_local_fib() -> SPMap {
    to_terminal(point_under(delta(1).truncate(3)))
}

/// Two points at `t` and one at `u`, into the terminal presheaf.
pub fn ut_local_we() -> SPMap {
    to_terminal(point_under(boundary(1).truncate(3)))
}

/// The map sending every cell to the degenerate cells on vertex `v`.
pub fn constant_map(x: Arc<TruncatedSSet>, y: Arc<TruncatedSSet>, v: usize) -> SMap {
    let mut cell = v;
    let mut components = Vec::new();
    for m in 0..=x.bound() {
        if m > 0 {
            cell = y.degen(m - 1, 0, cell);
        }
        components.push(vec![cell; x.count(m)]);
    }
    SMap::new(x, y, components).expect("constant maps are simplicial")
}

/// Every corpus file as `(file name, document)`, in a fixed order.
pub fn generate() -> Vec<(String, Document)> {
    let mut out: Vec<(String, Document)> = Vec::new();
    let mut push = |name: &str, d: Document| out.push((format!("{name}.json"), d));
    for n in 0..=3 {
        push(&format!("delta{n}"), Document::Presentation(delta(n)));
    }
    for n in 1..=2 {
        push(&format!("boundary{n}"), Document::Presentation(boundary(n)));
    }
    for (n, k) in [(2, 0), (2, 1), (2, 2), (3, 1)] {
        push(&format!("horn-{n}-{k}"), Document::Presentation(horn(n, k).unwrap()));
    }
    let c2 = Arc::new(nerve(&FinCategory::cyclic_group(2), 4));
    let c3 = Arc::new(nerve(&FinCategory::cyclic_group(3), 3));
    let ind = Arc::new(nerve(&FinCategory::indiscrete(2), 3));
    push("c2-nerve", Document::SSet((*c2).clone()));
    push("c3-nerve", Document::SSet((*c3).clone()));
    push("indiscrete2-nerve", Document::SSet((*ind).clone()));
    push("indiscrete2-to-point", Document::Map(SMap::to_point(ind, Arc::new(point(3))).unwrap()));
    push("c3-trivial-endo", Document::Map(constant_map(c3.clone(), c3, 0)));
    push(
        "delta1-to-point",
        Document::PresentationMap(PresentationMap {
            source: delta(1),
            target: delta(0),
            images: delta_map(1, 0, &[0, 0]).images,
        }),
    );
    push(
        "boundary1-into-delta1",
        Document::PresentationMap(PresentationMap {
            source: boundary(1),
            target: delta(1),
            images: boundary_inclusion(1).images,
        }),
    );
    let c = ut_category();
    push("poset-ut", Document::Site(ut_site(true)));
    push("poset-ut-trivial", Document::Site(ut_site(false)));
    push("ut-local-epi", Document::SetPresheafMap(SetPresheafMapDoc::from_map(&ut_local_epi(), &c)));
    push("ut-local-fib", Document::PresheafMap(SPMapDoc::from_map(&ut_local_fib(), &c)));
    push("ut-local-we", Document::PresheafMap(SPMapDoc::from_map(&ut_local_we(), &c)));
    out
}

/// Writes the corpus into `dir`, returning the file names.
pub fn write(dir: impl AsRef<Path>) -> Result<Vec<String>> {
    fs::create_dir_all(dir.as_ref())?;
    let mut names = Vec::new();
    for (name, doc) in generate() {
        io::save(dir.as_ref().join(&name), &doc)?;
        names.push(name);
    }
    Ok(names)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_loadable() {
        let a: Vec<String> = generate().iter().map(|(_, d)| io::to_string(d)).collect();
        let b: Vec<String> = generate().iter().map(|(_, d)| io::to_string(d)).collect();
        assert_eq!(a, b);
        let c = ut_category();
        for text in &a {
            match io::parse(text).unwrap() {
                Document::Presheaf(p) => drop(p.resolve(&c).unwrap()),
                Document::PresheafMap(p) => drop(p.resolve(&c).unwrap()),
                Document::SetPresheafMap(p) => drop(p.resolve(&c).unwrap()),
                _ => {}
            }
        }
    }
}
