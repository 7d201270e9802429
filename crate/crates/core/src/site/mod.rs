//! Sieves, Grothendieck topologies on finite categories, simplicial
//! presheaves and the local lifting notions built from them.

pub mod local;
pub mod presheaf;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::category::{CategoryDoc, FinCategory};
use crate::error::{Error, Result};

/// A set of morphisms into `on`, closed under precomposition.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sieve {
    pub on: usize,
    pub arrows: BTreeSet<usize>,
}

impl Sieve {
    pub fn new(c: &FinCategory, on: usize, arrows: BTreeSet<usize>) -> Result<Self> {
        let s = Sieve { on, arrows };
        s.validate(c)?;
        Ok(s)
    }

    pub fn validate(&self, c: &FinCategory) -> Result<()> {
        for &f in &self.arrows {
            if c.morphism(f).cod != self.on {
                return Err(Error::InvalidSieve(format!(
                    "`{}` does not have codomain `{}`",
                    c.morphism(f).name,
                    c.objects()[self.on]
                )));
            }
            for g in 0..c.morphisms().len() {
                if let Some(fg) = c.compose(f, g) {
                    if !self.arrows.contains(&fg) {
                        return Err(Error::InvalidSieve(format!(
                            "not closed under precomposition: `{}` ∘ `{}` is missing",
                            c.morphism(f).name,
                            c.morphism(g).name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn maximal(c: &FinCategory, on: usize) -> Self {
        Sieve { on, arrows: c.arrows_into(on).collect() }
    }

    pub fn empty(on: usize) -> Self {
        Sieve { on, arrows: BTreeSet::new() }
    }

    pub fn contains(&self, f: usize) -> bool {
        self.arrows.contains(&f)
    }

    pub fn is_subset(&self, other: &Sieve) -> bool {
        self.on == other.on && self.arrows.is_subset(&other.arrows)
    }

    pub fn arrow_names(&self, c: &FinCategory) -> Vec<String> {
        self.arrows.iter().map(|&f| c.morphism(f).name.clone()).collect()
    }
}

/// The sieve on `on` generated by `arrows`: all composites `f ∘ g`.
pub fn generated_sieve(c: &FinCategory, on: usize, arrows: &[usize]) -> Result<Sieve> {
    let mut out = BTreeSet::new();
    for &f in arrows {
        if c.morphism(f).cod != on {
            return Err(Error::InvalidSieve(format!("`{}` does not have codomain `{}`", c.morphism(f).name, c.objects()[on])));
        }
        for g in 0..c.morphisms().len() {
            if let Some(fg) = c.compose(f, g) {
                out.insert(fg);
            }
        }
    }
    Ok(Sieve { on, arrows: out })
}

/// `u* S = { v : u ∘ v ∈ S }` for `u : D -> C` and a sieve `S` on `C`.
pub fn pullback_sieve(c: &FinCategory, u: usize, s: &Sieve) -> Result<Sieve> {
    let m = c.morphism(u);
    if m.cod != s.on {
        return Err(Error::InvalidSieve(format!("`{}` does not land in `{}`", m.name, c.objects()[s.on])));
    }
    let arrows = c.arrows_into(m.dom).filter(|&v| c.compose(u, v).is_some_and(|uv| s.contains(uv))).collect();
    Ok(Sieve { on: m.dom, arrows })
}

/// Every sieve on `on`, in a canonical order.
pub fn all_sieves(c: &FinCategory, on: usize) -> Vec<Sieve> {
    let into: Vec<usize> = c.arrows_into(on).collect();
    assert!(into.len() < 24, "too many arrows into one object to enumerate sieves");
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << into.len()) {
        let gens: Vec<usize> = (0..into.len()).filter(|i| mask & (1 << i) != 0).map(|i| into[i]).collect();
        out.insert(generated_sieve(c, on, &gens).expect("arrows into `on`"));
    }
    out.into_iter().collect()
}

/// Covering sieves per object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub covers: Vec<BTreeSet<Sieve>>,
}

impl Topology {
    /// Only maximal sieves cover.
    pub fn trivial(c: &FinCategory) -> Self {
        let covers = (0..c.objects().len()).map(|o| BTreeSet::from([Sieve::maximal(c, o)])).collect();
        Topology { covers }
    }

    pub fn covers(&self, s: &Sieve) -> bool {
        self.covers[s.on].contains(s)
    }

    /// Checks maximality, pullback stability and transitivity.
    pub fn validate(&self, c: &FinCategory) -> Result<()> {
        let name = |o: usize| c.objects()[o].clone();
        for o in 0..c.objects().len() {
            if !self.covers[o].contains(&Sieve::maximal(c, o)) {
                return Err(Error::InvalidTopology(format!("maximal sieve on `{}` does not cover", name(o))));
            }
            for s in &self.covers[o] {
                s.validate(c)?;
                for u in c.arrows_into(o) {
                    if !self.covers(&pullback_sieve(c, u, s)?) {
                        return Err(Error::InvalidTopology(format!(
                            "pullback of a cover of `{}` along `{}` does not cover",
                            name(o),
                            c.morphism(u).name
                        )));
                    }
                }
            }
            for r in all_sieves(c, o) {
                if self.covers(&r) {
                    continue;
                }
                for s in &self.covers[o] {
                    let local = s.arrows.iter().all(|&u| self.covers(&pullback_sieve(c, u, &r).expect("into o")));
                    if local {
                        return Err(Error::InvalidTopology(format!(
                            "sieve {:?} on `{}` is locally covering but not covering",
                            r.arrow_names(c),
                            name(o)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The least topology containing `basis` (one list of sieves per
/// object), by saturating the three axioms.
pub fn generate_topology(c: &FinCategory, basis: &[Vec<Sieve>]) -> Result<Topology> {
    let n = c.objects().len();
    if basis.len() != n {
        return Err(Error::InvalidTopology("one basis list per object required".into()));
    }
    let mut covers: Vec<BTreeSet<Sieve>> = (0..n).map(|o| BTreeSet::from([Sieve::maximal(c, o)])).collect();
    for (o, list) in basis.iter().enumerate() {
        for s in list {
            if s.on != o {
                return Err(Error::InvalidSieve(format!("basis sieve listed under `{}` is on another object", c.objects()[o])));
            }
            s.validate(c)?;
            covers[o].insert(s.clone());
        }
    }
    let sieves: Vec<Vec<Sieve>> = (0..n).map(|o| all_sieves(c, o)).collect();
    loop {
        let mut changed = false;
        // pullback stability
        for o in 0..n {
            let current: Vec<Sieve> = covers[o].iter().cloned().collect();
            for s in &current {
                for u in c.arrows_into(o) {
                    let p = pullback_sieve(c, u, s)?;
                    changed |= covers[p.on].insert(p);
                }
            }
        }
        // transitivity
        for o in 0..n {
            for r in &sieves[o] {
                if covers[o].contains(r) {
                    continue;
                }
                let local = covers[o].iter().any(|s| {
                    s.arrows.iter().all(|&u| {
                        let p = pullback_sieve(c, u, r).expect("into o");
                        covers[p.on].contains(&p)
                    })
                });
                if local {
                    covers[o].insert(r.clone());
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(Topology { covers })
}

/// A finite category with a topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SiteDoc", into = "SiteDoc")]
pub struct Site {
    pub category: FinCategory,
    pub topology: Topology,
}

/// On-disk form: the category and, per object name, lists of arrow names
/// each generating a sieve. The topology is the one generated by these.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SiteDoc {
    pub category: CategoryDoc,
    #[serde(default)]
    pub covers: BTreeMap<String, Vec<Vec<String>>>,
}

impl Site {
    pub fn new(category: FinCategory, basis: &[Vec<Sieve>]) -> Result<Self> {
        let topology = generate_topology(&category, basis)?;
        topology.validate(&category)?;
        Ok(Site { category, topology })
    }

    pub fn trivial(category: FinCategory) -> Self {
        let topology = Topology::trivial(&category);
        Site { category, topology }
    }

    /// The same category with only maximal sieves covering.
    pub fn with_trivial_topology(&self) -> Self {
        Site::trivial(self.category.clone())
    }
}

impl TryFrom<SiteDoc> for Site {
    type Error = Error;
    fn try_from(doc: SiteDoc) -> Result<Self> {
        let c = FinCategory::try_from(doc.category)?;
        let mut basis = vec![Vec::new(); c.objects().len()];
        for (obj, lists) in &doc.covers {
            let o = c.find_object(obj).ok_or_else(|| Error::InvalidSieve(format!("unknown object `{obj}`")))?;
            for names in lists {
                let arrows = names
                    .iter()
                    .map(|n| c.find_morphism(n).ok_or_else(|| Error::InvalidSieve(format!("unknown morphism `{n}`"))))
                    .collect::<Result<Vec<_>>>()?;
                basis[o].push(generated_sieve(&c, o, &arrows)?);
            }
        }
        Site::new(c, &basis)
    }
}

impl From<Site> for SiteDoc {
    fn from(s: Site) -> Self {
        let c = &s.category;
        let covers = s
            .topology
            .covers
            .iter()
            .enumerate()
            .map(|(o, set)| (c.objects()[o].clone(), set.iter().map(|sv| sv.arrow_names(c)).collect()))
            .collect();
        SiteDoc { category: s.category.into(), covers }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::FinPoset;

    fn ut() -> FinCategory {
        let p = FinPoset::new(vec!["u".into(), "t".into()], vec![vec![true, true], vec![false, true]]).unwrap();
        p.as_category()
    }

    #[test]
    fn empty_basis_gives_maximal_only() {
        let c = ut();
        let t = generate_topology(&c, &[vec![], vec![]]).unwrap();
        assert_eq!(t, Topology::trivial(&c));
    }

    #[test]
    fn u_covers_t_closure() {
        let c = ut();
        let (u, t) = (0, 1);
        let ut_arrow = c.find_morphism("u->t").unwrap();
        let s = generated_sieve(&c, t, &[ut_arrow]).unwrap();
        let top = generate_topology(&c, &[vec![], vec![s.clone()]]).unwrap();
        assert_eq!(top.covers[t], BTreeSet::from([s, Sieve::maximal(&c, t)]));
        assert_eq!(top.covers[u], BTreeSet::from([Sieve::maximal(&c, u)]));
        top.validate(&c).unwrap();
        // a topology is a fixpoint
        let again: Vec<Vec<Sieve>> = top.covers.iter().map(|s| s.iter().cloned().collect()).collect();
        assert_eq!(generate_topology(&c, &again).unwrap(), top);
    }

    #[test]
    fn sieve_algebra() {
        let c = ut();
        let t = 1;
        let max = Sieve::maximal(&c, t);
        let id_t = c.identity(t);
        assert_eq!(pullback_sieve(&c, id_t, &max).unwrap(), max);
        assert_eq!(generated_sieve(&c, t, &[]).unwrap(), Sieve::empty(t));
        let ut_arrow = c.find_morphism("u->t").unwrap();
        assert_eq!(pullback_sieve(&c, ut_arrow, &max).unwrap(), Sieve::maximal(&c, 0));
        assert!(Sieve::new(&c, t, BTreeSet::from([id_t])).is_err());
    }

    #[test]
    fn site_document_round_trip() {
        let c = ut();
        let ut_arrow = c.find_morphism("u->t").unwrap();
        let s = generated_sieve(&c, 1, &[ut_arrow]).unwrap();
        let site = Site::new(c, &[vec![], vec![s]]).unwrap();
        let json = serde_json::to_string(&site).unwrap();
        let back: Site = serde_json::from_str(&json).unwrap();
        assert_eq!(back, site);
    }
}
