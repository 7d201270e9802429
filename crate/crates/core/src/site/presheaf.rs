//! Presheaves of sets and of truncated simplicial sets on a finite
//! category.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::FinCategory;
use crate::error::{Error, Result};
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

/// `X(C)` per object, and `X(u) : X(C) -> X(D)` per morphism `u : D -> C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPresheaf {
    pub names: Vec<Vec<String>>,
    pub restrict: Vec<Vec<usize>>,
}

impl SetPresheaf {
    pub fn new(c: &FinCategory, names: Vec<Vec<String>>, restrict: Vec<Vec<usize>>) -> Result<Self> {
        let x = SetPresheaf { names, restrict };
        x.validate(c)?;
        Ok(x)
    }

    pub fn size(&self, object: usize) -> usize {
        self.names[object].len()
    }

    pub fn validate(&self, c: &FinCategory) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPresheaf(m));
        if self.names.len() != c.objects().len() || self.restrict.len() != c.morphisms().len() {
            return bad("one set per object and one restriction per morphism required".into());
        }
        for (u, m) in c.morphisms().iter().enumerate() {
            let r = &self.restrict[u];
            if r.len() != self.size(m.cod) || r.iter().any(|&v| v >= self.size(m.dom)) {
                return bad(format!("restriction along `{}` is malformed", m.name));
            }
            if c.is_identity(u) && r.iter().enumerate().any(|(i, &v)| i != v) {
                return bad(format!("identity `{}` does not act trivially", m.name));
            }
        }
        for g in 0..c.morphisms().len() {
            for f in 0..c.morphisms().len() {
                if let Some(gf) = c.compose(g, f) {
                    // X(g ∘ f) = X(f) ∘ X(g)
                    let ok = (0..self.restrict[g].len()).all(|a| self.restrict[gf][a] == self.restrict[f][self.restrict[g][a]]);
                    if !ok {
                        return bad(format!(
                            "restrictions are not functorial on `{}` ∘ `{}`",
                            c.morphism(g).name,
                            c.morphism(f).name
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// A natural transformation of set presheaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPresheafMap {
    pub source: SetPresheaf,
    pub target: SetPresheaf,
    pub components: Vec<Vec<usize>>,
}

impl SetPresheafMap {
    pub fn new(c: &FinCategory, source: SetPresheaf, target: SetPresheaf, components: Vec<Vec<usize>>) -> Result<Self> {
        let f = SetPresheafMap { source, target, components };
        f.validate(c)?;
        Ok(f)
    }

    pub fn validate(&self, c: &FinCategory) -> Result<()> {
        self.source.validate(c)?;
        self.target.validate(c)?;
        for (o, comp) in self.components.iter().enumerate() {
            if comp.len() != self.source.size(o) || comp.iter().any(|&v| v >= self.target.size(o)) {
                return Err(Error::InvalidPresheaf(format!("component at `{}` is malformed", c.objects()[o])));
            }
        }
        for (u, m) in c.morphisms().iter().enumerate() {
            for a in 0..self.source.size(m.cod) {
                let lhs = self.components[m.dom][self.source.restrict[u][a]];
                let rhs = self.target.restrict[u][self.components[m.cod][a]];
                if lhs != rhs {
                    return Err(Error::InvalidPresheaf(format!("not natural along `{}`", m.name)));
                }
            }
        }
        Ok(())
    }
}

/// A presheaf of truncated simplicial sets, all with the same bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPresheaf {
    pub sets: Vec<Arc<TruncatedSSet>>,
    /// `restrict[u] : X(cod u) -> X(dom u)`.
    pub restrict: Vec<SMap>,
}

impl SPresheaf {
    pub fn new(c: &FinCategory, sets: Vec<Arc<TruncatedSSet>>, restrict: Vec<SMap>) -> Result<Self> {
        let x = SPresheaf { sets, restrict };
        x.validate(c)?;
        Ok(x)
    }

    /// `X` at every object with identity restrictions.
    pub fn constant(c: &FinCategory, x: Arc<TruncatedSSet>) -> Self {
        let sets = vec![x.clone(); c.objects().len()];
        let restrict = vec![SMap::identity(x); c.morphisms().len()];
        SPresheaf { sets, restrict }
    }

    pub fn bound(&self) -> usize {
        self.sets.first().map_or(0, |x| x.bound())
    }

    pub fn validate(&self, c: &FinCategory) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidPresheaf(m));
        if self.sets.len() != c.objects().len() || self.restrict.len() != c.morphisms().len() {
            return bad("one simplicial set per object and one restriction per morphism required".into());
        }
        let b = self.bound();
        if self.sets.iter().any(|x| x.bound() != b) {
            return bad("all objects must share one degree bound".into());
        }
        for (u, m) in c.morphisms().iter().enumerate() {
            let r = &self.restrict[u];
            if **r.source() != *self.sets[m.cod] || **r.target() != *self.sets[m.dom] {
                return bad(format!("restriction along `{}` has the wrong source or target", m.name));
            }
            r.validate()?;
            if c.is_identity(u) && r.components().iter().any(|comp| comp.iter().enumerate().any(|(i, &v)| i != v)) {
                return bad(format!("identity `{}` does not act trivially", m.name));
            }
        }
        for n in 0..=b {
            self.degree(n).validate(c)?;
        }
        Ok(())
    }

    /// The set presheaf of `n`-cells.
    pub fn degree(&self, n: usize) -> SetPresheaf {
        SetPresheaf {
            names: self.sets.iter().map(|x| x.names(n).to_vec()).collect(),
            restrict: self.restrict.iter().map(|r| r.components()[n].clone()).collect(),
        }
    }
}

/// A morphism of simplicial presheaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SPMap {
    pub source: SPresheaf,
    pub target: SPresheaf,
    pub components: Vec<SMap>,
}

impl SPMap {
    pub fn new(c: &FinCategory, source: SPresheaf, target: SPresheaf, components: Vec<SMap>) -> Result<Self> {
        let f = SPMap { source, target, components };
        f.validate(c)?;
        Ok(f)
    }

    pub fn identity(x: SPresheaf) -> Self {
        let components = x.sets.iter().map(|s| SMap::identity(s.clone())).collect();
        SPMap { source: x.clone(), target: x, components }
    }

    pub fn validate(&self, c: &FinCategory) -> Result<()> {
        self.source.validate(c)?;
        self.target.validate(c)?;
        if self.components.len() != c.objects().len() {
            return Err(Error::InvalidPresheaf("one component per object required".into()));
        }
        for (o, f) in self.components.iter().enumerate() {
            if **f.source() != *self.source.sets[o] || **f.target() != *self.target.sets[o] {
                return Err(Error::InvalidPresheaf(format!("component at `{}` has the wrong source or target", c.objects()[o])));
            }
            f.validate()?;
        }
        for n in 0..=self.source.bound() {
            self.degree(n).validate(c)?;
        }
        Ok(())
    }

    /// The map of set presheaves of `n`-cells.
    pub fn degree(&self, n: usize) -> SetPresheafMap {
        SetPresheafMap {
            source: self.source.degree(n),
            target: self.target.degree(n),
            components: self.components.iter().map(|f| f.components()[n].clone()).collect(),
        }
    }
}

/// On-disk form of a simplicial presheaf: a simplicial-set document per
/// object name and restriction components per morphism name. Identity
/// restrictions may be omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SPresheafDoc {
    pub objects: BTreeMap<String, TruncatedSSet>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SPMapDoc {
    pub source: SPresheafDoc,
    pub target: SPresheafDoc,
    pub components: BTreeMap<String, Vec<Vec<usize>>>,
}

impl SPresheafDoc {
    pub fn resolve(self, c: &FinCategory) -> Result<SPresheaf> {
        let mut objects = self.objects;
        let sets = c
            .objects()
            .iter()
            .map(|o| {
                objects
                    .remove(o)
                    .map(Arc::new)
                    .ok_or_else(|| Error::InvalidPresheaf(format!("no simplicial set for object `{o}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(o) = objects.keys().next() {
            return Err(Error::InvalidPresheaf(format!("unknown object `{o}`")));
        }
        let mut restrictions = self.restrictions;
        let restrict = c
            .morphisms()
            .iter()
            .enumerate()
            .map(|(u, m)| {
                let (src, tgt) = (sets[m.cod].clone(), sets[m.dom].clone());
                match restrictions.remove(&m.name) {
                    Some(comps) => SMap::new_unchecked(src, tgt, comps),
                    None if c.is_identity(u) => Ok(SMap::identity(src)),
                    None => Err(Error::InvalidPresheaf(format!("no restriction along `{}`", m.name))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(name) = restrictions.keys().next() {
            return Err(Error::InvalidPresheaf(format!("unknown morphism `{name}`")));
        }
        SPresheaf::new(c, sets, restrict)
    }

    pub fn from_presheaf(x: &SPresheaf, c: &FinCategory) -> Self {
        let objects = c.objects().iter().cloned().zip(x.sets.iter().map(|s| (**s).clone())).collect();
        let restrictions = c
            .morphisms()
            .iter()
            .enumerate()
            .filter(|(u, _)| !c.is_identity(*u))
            .map(|(u, m)| (m.name.clone(), x.restrict[u].components().to_vec()))
            .collect();
        SPresheafDoc { objects, restrictions }
    }
}

impl SPMapDoc {
    pub fn resolve(self, c: &FinCategory) -> Result<SPMap> {
        let source = self.source.resolve(c)?;
        let target = self.target.resolve(c)?;
        let mut comps = self.components;
        let components = c
            .objects()
            .iter()
            .enumerate()
            .map(|(o, name)| {
                let data = comps
                    .remove(name)
                    .ok_or_else(|| Error::InvalidPresheaf(format!("no component at object `{name}`")))?;
                SMap::new_unchecked(source.sets[o].clone(), target.sets[o].clone(), data)
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(o) = comps.keys().next() {
            return Err(Error::InvalidPresheaf(format!("unknown object `{o}`")));
        }
        SPMap::new(c, source, target, components)
    }

    pub fn from_map(f: &SPMap, c: &FinCategory) -> Self {
        SPMapDoc {
            source: SPresheafDoc::from_presheaf(&f.source, c),
            target: SPresheafDoc::from_presheaf(&f.target, c),
            components: c
                .objects()
                .iter()
                .cloned()
                .zip(f.components.iter().map(|m| m.components().to_vec()))
                .collect(),
        }
    }
}

/// On-disk form of a presheaf of sets. Identity restrictions may be
/// omitted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetPresheafDoc {
    pub objects: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub restrictions: BTreeMap<String, Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetPresheafMapDoc {
    pub source: SetPresheafDoc,
    pub target: SetPresheafDoc,
    pub components: BTreeMap<String, Vec<usize>>,
}

impl SetPresheafDoc {
    pub fn resolve(self, c: &FinCategory) -> Result<SetPresheaf> {
        let mut objects = self.objects;
        let names = c
            .objects()
            .iter()
            .map(|o| objects.remove(o).ok_or_else(|| Error::InvalidPresheaf(format!("no set for object `{o}`"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(o) = objects.keys().next() {
            return Err(Error::InvalidPresheaf(format!("unknown object `{o}`")));
        }
        let mut restrictions = self.restrictions;
        let restrict = c
            .morphisms()
            .iter()
            .enumerate()
            .map(|(u, m)| match restrictions.remove(&m.name) {
                Some(r) => Ok(r),
                None if c.is_identity(u) => Ok((0..names[m.cod].len()).collect()),
                None => Err(Error::InvalidPresheaf(format!("no restriction along `{}`", m.name))),
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(name) = restrictions.keys().next() {
            return Err(Error::InvalidPresheaf(format!("unknown morphism `{name}`")));
        }
        SetPresheaf::new(c, names, restrict)
    }

    pub fn from_presheaf(x: &SetPresheaf, c: &FinCategory) -> Self {
        let objects = c.objects().iter().cloned().zip(x.names.iter().cloned()).collect();
        let restrictions = c
            .morphisms()
            .iter()
            .enumerate()
            .filter(|(u, _)| !c.is_identity(*u))
            .map(|(u, m)| (m.name.clone(), x.restrict[u].clone()))
            .collect();
        SetPresheafDoc { objects, restrictions }
    }
}

impl SetPresheafMapDoc {
    pub fn resolve(self, c: &FinCategory) -> Result<SetPresheafMap> {
        let source = self.source.resolve(c)?;
        let target = self.target.resolve(c)?;
        let mut comps = self.components;
        let components = c
            .objects()
            .iter()
            .map(|o| comps.remove(o).ok_or_else(|| Error::InvalidPresheaf(format!("no component at object `{o}`"))))
            .collect::<Result<Vec<_>>>()?;
        if let Some(o) = comps.keys().next() {
            return Err(Error::InvalidPresheaf(format!("unknown object `{o}`")));
        }
        SetPresheafMap::new(c, source, target, components)
    }

    pub fn from_map(f: &SetPresheafMap, c: &FinCategory) -> Self {
        SetPresheafMapDoc {
            source: SetPresheafDoc::from_presheaf(&f.source, c),
            target: SetPresheafDoc::from_presheaf(&f.target, c),
            components: c.objects().iter().cloned().zip(f.components.iter().cloned()).collect(),
        }
    }
}
