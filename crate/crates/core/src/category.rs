//! Finite categories and finite posets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

/// A finite category with an explicit composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CategoryDoc", into = "CategoryDoc")]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    // comp[g][f] = g ∘ f when cod f = dom g
    comp: Vec<Vec<Option<usize>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    /// Triples `[g, f, g∘f]` for every composable pair.
    pub composition: Vec<[usize; 3]>,
}

impl TryFrom<CategoryDoc> for FinCategory {
    type Error = Error;
    fn try_from(doc: CategoryDoc) -> Result<Self> {
        FinCategory::new(doc.objects, doc.morphisms, doc.identities, &doc.composition)
    }
}

impl From<FinCategory> for CategoryDoc {
    fn from(c: FinCategory) -> Self {
        let mut composition = Vec::new();
        for g in 0..c.morphisms.len() {
            for f in 0..c.morphisms.len() {
                if let Some(h) = c.comp[g][f] {
                    composition.push([g, f, h]);
                }
            }
        }
        CategoryDoc { objects: c.objects, morphisms: c.morphisms, identities: c.identities, composition }
    }
}

impl FinCategory {
    /// Validates that composition is defined exactly on composable pairs,
    /// unital and associative.
    pub fn new(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<usize>,
        composition: &[[usize; 3]],
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidCategory(m));
        let nm = morphisms.len();
        if identities.len() != objects.len() {
            return bad("one identity per object required".into());
        }
        for m in &morphisms {
            if m.dom >= objects.len() || m.cod >= objects.len() {
                return bad(format!("morphism `{}` has an unknown endpoint", m.name));
            }
        }
        for (o, &id) in identities.iter().enumerate() {
            if id >= nm || morphisms[id].dom != o || morphisms[id].cod != o {
                return bad(format!("identity of object `{}` is not an endomorphism of it", objects[o]));
            }
        }
        let mut comp = vec![vec![None; nm]; nm];
        for &[g, f, h] in composition {
            if g >= nm || f >= nm || h >= nm {
                return bad(format!("composition entry [{g}, {f}, {h}] names a missing morphism"));
            }
            if morphisms[f].cod != morphisms[g].dom {
                return bad(format!("`{}` ∘ `{}` is not composable", morphisms[g].name, morphisms[f].name));
            }
            if morphisms[h].dom != morphisms[f].dom || morphisms[h].cod != morphisms[g].cod {
                return bad(format!("`{}` ∘ `{}` has the wrong type", morphisms[g].name, morphisms[f].name));
            }
            if comp[g][f].replace(h).is_some_and(|old| old != h) {
                return bad(format!("`{}` ∘ `{}` defined twice", morphisms[g].name, morphisms[f].name));
            }
        }
        for g in 0..nm {
            for f in 0..nm {
                if (morphisms[f].cod == morphisms[g].dom) != comp[g][f].is_some() {
                    return bad(format!(
                        "composition of `{}` after `{}` must be defined exactly when composable",
                        morphisms[g].name, morphisms[f].name
                    ));
                }
            }
        }
        for f in 0..nm {
            let (d, c) = (morphisms[f].dom, morphisms[f].cod);
            if comp[identities[c]][f] != Some(f) || comp[f][identities[d]] != Some(f) {
                return bad(format!("unit law fails for `{}`", morphisms[f].name));
            }
        }
        for f in 0..nm {
            for g in 0..nm {
                let Some(gf) = comp[g][f] else { continue };
                for h in 0..nm {
                    let Some(hg) = comp[h][g] else { continue };
                    if comp[h][gf] != comp[hg][f] {
                        return bad(format!(
                            "associativity fails for `{}`, `{}`, `{}`",
                            morphisms[h].name, morphisms[g].name, morphisms[f].name
                        ));
                    }
                }
            }
        }
        Ok(Self { objects, morphisms, identities, comp })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.morphisms[f].dom] == f
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g][f]
    }

    pub fn find_object(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn find_morphism(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Morphisms with the given codomain.
    pub fn arrows_into(&self, object: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(move |&f| self.morphisms[f].cod == object)
    }

    /// The category with one object whose morphisms are the elements of a
    /// group, given by its multiplication table (`mult[a][b] = a·b`,
    /// element 0 the unit). Composition is `g ∘ f = g·f`.
    pub fn group(names: Vec<String>, mult: &[Vec<usize>]) -> Result<Self> {
        let n = names.len();
        let morphisms = names.into_iter().map(|name| Morphism { name, dom: 0, cod: 0 }).collect();
        let composition: Vec<[usize; 3]> =
            (0..n).flat_map(|g| (0..n).map(move |f| [g, f, mult[g][f]])).collect();
        Self::new(vec!["*".into()], morphisms, vec![0], &composition)
    }

    /// The cyclic group of order `n` as a one-object category.
    pub fn cyclic_group(n: usize) -> Self {
        let names = (0..n).map(|k| if k == 0 { "e".to_string() } else { format!("g{k}") }).collect();
        let mult: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::group(names, &mult).expect("cyclic group")
    }

    /// Direct product of two categories.
    pub fn product(a: &Self, b: &Self) -> Self {
        let nb_o = b.objects.len();
        let nb_m = b.morphisms.len();
        let objects = a
            .objects
            .iter()
            .flat_map(|x| b.objects.iter().map(move |y| format!("({x},{y})")))
            .collect();
        let morphisms = a
            .morphisms
            .iter()
            .flat_map(|f| {
                b.morphisms.iter().map(move |g| Morphism {
                    name: format!("({},{})", f.name, g.name),
                    dom: f.dom * nb_o + g.dom,
                    cod: f.cod * nb_o + g.cod,
                })
            })
            .collect();
        let identities = (0..a.objects.len())
            .flat_map(|x| (0..nb_o).map(move |y| (x, y)))
            .map(|(x, y)| a.identities[x] * nb_m + b.identities[y])
            .collect();
        let mut composition = Vec::new();
        for g1 in 0..a.morphisms.len() {
            for f1 in 0..a.morphisms.len() {
                let Some(h1) = a.comp[g1][f1] else { continue };
                for g2 in 0..nb_m {
                    for f2 in 0..nb_m {
                        if let Some(h2) = b.comp[g2][f2] {
                            composition.push([g1 * nb_m + g2, f1 * nb_m + f2, h1 * nb_m + h2]);
                        }
                    }
                }
            }
        }
        Self::new(objects, morphisms, identities, &composition).expect("product of categories")
    }

    /// The groupoid with `k` objects and exactly one morphism between any
    /// two of them.
    pub fn indiscrete(k: usize) -> Self {
        let objects: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        Self::from_relation(objects, |_, _| true)
    }

    /// The discrete category on `k` objects.
    pub fn discrete(k: usize) -> Self {
        let objects: Vec<String> = (0..k).map(|i| format!("x{i}")).collect();
        Self::from_relation(objects, |a, b| a == b)
    }

    /// A thin category from a reflexive transitive relation `rel(a, b)`
    /// meaning a unique morphism `a -> b`.
    fn from_relation(objects: Vec<String>, rel: impl Fn(usize, usize) -> bool) -> Self {
        let n = objects.len();
        let mut morphisms = Vec::new();
        let mut id_of = vec![vec![None; n]; n];
        for a in 0..n {
            for b in 0..n {
                if rel(a, b) {
                    id_of[a][b] = Some(morphisms.len());
                    let name = if a == b { format!("id_{}", objects[a]) } else { format!("{}->{}", objects[a], objects[b]) };
                    morphisms.push(Morphism { name, dom: a, cod: b });
                }
            }
        }
        let identities = (0..n).map(|a| id_of[a][a].expect("reflexive")).collect();
        let mut composition = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let Some(f) = id_of[a][b] else { continue };
                for c in 0..n {
                    if let Some(g) = id_of[b][c] {
                        composition.push([g, f, id_of[a][c].expect("transitive")]);
                    }
                }
            }
        }
        Self::new(objects, morphisms, identities, &composition).expect("thin category")
    }
}

/// A finite partially ordered set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinPoset {
    elements: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl FinPoset {
    pub fn new(elements: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = elements.len();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidPoset("order matrix has the wrong shape".into()));
        }
        for a in 0..n {
            if !leq[a][a] {
                return Err(Error::InvalidPoset(format!("not reflexive at `{}`", elements[a])));
            }
            for b in 0..n {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::InvalidPoset(format!(
                        "not antisymmetric at `{}`, `{}`",
                        elements[a], elements[b]
                    )));
                }
                for c in 0..n {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::InvalidPoset(format!(
                            "not transitive at `{}`, `{}`, `{}`",
                            elements[a], elements[b], elements[c]
                        )));
                    }
                }
            }
        }
        Ok(Self { elements, leq })
    }

    /// The ordinal `[n] = {0 < 1 < … < n}`.
    pub fn ordinal(n: usize) -> Self {
        let elements = (0..=n).map(|i| i.to_string()).collect();
        let leq = (0..=n).map(|a| (0..=n).map(|b| a <= b).collect()).collect();
        Self { elements, leq }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn as_category(&self) -> FinCategory {
        FinCategory::from_relation(self.elements.clone(), |a, b| self.leq[a][b])
    }

    /// Strictly increasing chains of length `k + 1`, lexicographically.
    pub fn strict_chains(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(p: &FinPoset, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k + 1 {
                out.push(cur.clone());
                return;
            }
            for x in 0..p.len() {
                if cur.last().is_none_or(|&l| l != x && p.leq(l, x)) {
                    cur.push(x);
                    rec(p, k, cur, out);
                    cur.pop();
                }
            }
        }
        rec(self, k, &mut cur, &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_is_valid() {
        let c = FinCategory::cyclic_group(3);
        assert_eq!(c.morphisms().len(), 3);
        assert_eq!(c.compose(1, 2), Some(0));
    }

    #[test]
    fn rejects_non_associative_table() {
        // a "magma" on {e, a, b} with a·a = b, a·b = a, b·a = e, b·b = a
        let mult = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 0, 1]];
        let names = vec!["e".into(), "a".into(), "b".into()];
        assert!(matches!(FinCategory::group(names, &mult), Err(Error::InvalidCategory(_))));
    }

    #[test]
    fn rejects_non_antisymmetric_relation() {
        let leq = vec![vec![true, true], vec![true, true]];
        assert!(FinPoset::new(vec!["a".into(), "b".into()], leq).is_err());
    }

    #[test]
    fn indiscrete_groupoid_counts() {
        let c = FinCategory::indiscrete(2);
        assert_eq!(c.morphisms().len(), 4);
    }
}
