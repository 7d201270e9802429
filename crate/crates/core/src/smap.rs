use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::truncated::TruncatedSSet;

/// A degreewise map between truncated simplicial sets of the same degree
/// bound, commuting with every face and degeneracy.
#[derive(Clone, PartialEq, Eq)]
pub struct SMap {
    source: Arc<TruncatedSSet>,
    target: Arc<TruncatedSSet>,
    components: Vec<Vec<usize>>,
}

impl std::fmt::Debug for SMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SMap")
            .field("source", &self.source)
            .field("target", &self.target)
            .finish()
    }
}

impl SMap {
    pub fn new(
        source: Arc<TruncatedSSet>,
        target: Arc<TruncatedSSet>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let f = Self::new_unchecked(source, target, components)?;
        f.validate()?;
        Ok(f)
    }

    /// Checks shapes only.
    pub fn new_unchecked(
        source: Arc<TruncatedSSet>,
        target: Arc<TruncatedSSet>,
        components: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if source.bound() != target.bound() {
            return Err(Error::BoundMismatch(source.bound(), target.bound()));
        }
        if components.len() != source.bound() + 1 {
            return Err(Error::NotSimplicial("one component per degree required".into()));
        }
        for (m, comp) in components.iter().enumerate() {
            if comp.len() != source.count(m) || comp.iter().any(|&y| y >= target.count(m)) {
                return Err(Error::NotSimplicial(format!("component in degree {m} is malformed")));
            }
        }
        Ok(Self { source, target, components })
    }

    pub fn identity(x: Arc<TruncatedSSet>) -> Self {
        let components = (0..=x.bound()).map(|m| (0..x.count(m)).collect()).collect();
        Self { source: x.clone(), target: x, components }
    }

    /// The unique map to the one-point simplicial set `point`.
    pub fn to_point(x: Arc<TruncatedSSet>, point: Arc<TruncatedSSet>) -> Result<Self> {
        let components = (0..=x.bound()).map(|m| vec![0; x.count(m)]).collect();
        Self::new(x, point, components)
    }

    pub fn source(&self) -> &Arc<TruncatedSSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<TruncatedSSet> {
        &self.target
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    #[inline]
    pub fn apply(&self, m: usize, x: usize) -> usize {
        self.components[m][x]
    }

    /// Checks commutation with all structure maps.
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        for m in 0..=s.bound() {
            for x in 0..s.count(m) {
                let fx = self.components[m][x];
                if m > 0 {
                    for i in 0..=m {
                        if t.face(m, i, fx) != self.components[m - 1][s.face(m, i, x)] {
                            return Err(Error::NotSimplicial(format!(
                                "d_{i} does not commute at cell `{}` of degree {m}",
                                s.name(m, x)
                            )));
                        }
                    }
                }
                if m < s.bound() {
                    for i in 0..=m {
                        if t.degen(m, i, fx) != self.components[m + 1][s.degen(m, i, x)] {
                            return Err(Error::NotSimplicial(format!(
                                "s_{i} does not commute at cell `{}` of degree {m}",
                                s.name(m, x)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SMap) -> Result<SMap> {
        if other.target != self.source {
            return Err(Error::NotComposable("target of the first map is not the source of the second".into()));
        }
        let components = other
            .components
            .iter()
            .enumerate()
            .map(|(m, c)| c.iter().map(|&x| self.components[m][x]).collect())
            .collect();
        Ok(SMap { source: other.source.clone(), target: self.target.clone(), components })
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().enumerate().all(|(m, c)| {
            let mut seen = vec![false; self.target.count(m)];
            c.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().enumerate().all(|(m, c)| {
            let mut seen = vec![false; self.target.count(m)];
            for &y in c {
                seen[y] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    pub fn truncate_to(&self, bound: usize) -> Result<SMap> {
        let s = Arc::new(self.source.truncate_to(bound)?);
        let t = Arc::new(self.target.truncate_to(bound)?);
        Ok(SMap { source: s, target: t, components: self.components[..=bound].to_vec() })
    }

    /// Replaces source and target by equal copies (e.g. after loading).
    pub fn rebase(&self, source: Arc<TruncatedSSet>, target: Arc<TruncatedSSet>) -> Result<SMap> {
        if *source != *self.source || *target != *self.target {
            return Err(Error::NotComposable("rebase requires equal simplicial sets".into()));
        }
        Ok(SMap { source, target, components: self.components.clone() })
    }
}

/// On-disk form: source and target documents plus per-degree component
/// arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SMapDoc {
    pub source: TruncatedSSet,
    pub target: TruncatedSSet,
    pub components: Vec<Vec<usize>>,
}

impl From<&SMap> for SMapDoc {
    fn from(f: &SMap) -> Self {
        SMapDoc {
            source: (*f.source).clone(),
            target: (*f.target).clone(),
            components: f.components.clone(),
        }
    }
}

impl TryFrom<SMapDoc> for SMap {
    type Error = Error;
    fn try_from(doc: SMapDoc) -> Result<Self> {
        SMap::new(Arc::new(doc.source), Arc::new(doc.target), doc.components)
    }
}
