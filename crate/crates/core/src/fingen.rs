//! Finitely generated simplicial sets, presented by nondegenerate
//! generators and their faces.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::{
    codegeneracy, coface, compose, epi_mono, is_identity, surjections, DegeneracyWord, Monotone,
    Simplex,
};
use crate::truncated::TruncatedSSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
    /// `d_0 … d_n` of the generator; empty in degree 0.
    #[serde(default)]
    pub faces: Vec<Simplex>,
}

/// A simplicial set freely generated by finitely many nondegenerate cells.
///
/// Generators are kept in a flat list sorted by degree; faces refer to
/// earlier generators by flat index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FinGenDoc", into = "FinGenDoc")]
pub struct FinGenSSet {
    generators: Vec<Generator>,
    offsets: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FinGenDoc {
    pub generators: Vec<Generator>,
}

impl TryFrom<FinGenDoc> for FinGenSSet {
    type Error = Error;
    fn try_from(doc: FinGenDoc) -> Result<Self> {
        FinGenSSet::new(doc.generators)
    }
}

impl From<FinGenSSet> for FinGenDoc {
    fn from(x: FinGenSSet) -> Self {
        FinGenDoc { generators: x.generators }
    }
}

impl FinGenSSet {
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidPresentation(msg));
        if generators.windows(2).any(|w| w[0].degree > w[1].degree) {
            return bad("generators must be sorted by degree".into());
        }
        let top = generators.last().map_or(0, |g| g.degree);
        let mut offsets = vec![0; top + 2];
        for g in &generators {
            offsets[g.degree + 1] += 1;
        }
        for m in 1..offsets.len() {
            offsets[m] += offsets[m - 1];
        }
        for (idx, g) in generators.iter().enumerate() {
            let expected = if g.degree == 0 { 0 } else { g.degree + 1 };
            if g.faces.len() != expected {
                return bad(format!("generator `{}` needs {expected} faces", g.name));
            }
            for (i, f) in g.faces.iter().enumerate() {
                if f.degree + 1 != g.degree
                    || f.generator >= idx
                    || f.word.len() > f.degree
                    || generators[f.generator].degree + f.word.len() != f.degree
                    || f.word.indices().first().is_some_and(|&i1| i1 >= f.degree)
                {
                    return bad(format!("face d_{i} of `{}` is malformed", g.name));
                }
            }
        }
        let x = Self { generators, offsets };
        for (idx, g) in x.generators.iter().enumerate() {
            let n = g.degree;
            if n < 2 {
                continue;
            }
            for j in 1..=n {
                for i in 0..j {
                    let lhs = x.face_of(&g.faces[j], i);
                    let rhs = x.face_of(&g.faces[i], j - 1);
                    if lhs != rhs {
                        return bad(format!(
                            "generator {idx} (`{}`) violates d_{i} d_{j} = d_{} d_{i}",
                            g.name,
                            j - 1
                        ));
                    }
                }
            }
        }
        Ok(x)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, g: usize) -> &Generator {
        &self.generators[g]
    }

    /// Flat indices of generators in degree `m`.
    pub fn degree_range(&self, m: usize) -> std::ops::Range<usize> {
        if m + 1 >= self.offsets.len() {
            return self.generators.len()..self.generators.len();
        }
        self.offsets[m]..self.offsets[m + 1]
    }

    /// Highest generator degree.
    pub fn dimension(&self) -> Option<usize> {
        self.generators.last().map(|g| g.degree)
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// Normal form of `θ^* g` for a monotone `θ : [p] -> [deg g]`.
    pub fn normalize(&self, g: usize, theta: &[usize]) -> Simplex {
        let k = self.generators[g].degree;
        let (tau, eta) = epi_mono(theta);
        if is_identity(&eta, k) {
            return Simplex {
                degree: theta.len() - 1,
                generator: g,
                word: DegeneracyWord::from_surjection(&tau),
            };
        }
        // η misses some vertex i; η = δ_i ∘ η'
        let missing = (0..=k).rev().find(|v| !eta.contains(v)).unwrap();
        let eta_prime: Monotone = eta.iter().map(|&v| if v > missing { v - 1 } else { v }).collect();
        let face = &self.generators[g].faces[missing];
        let rho = face.word.to_surjection(face.generator_degree());
        let next = compose(&rho, &compose(&eta_prime, &tau));
        self.normalize(face.generator, &next)
    }

    /// `θ^* s` for a simplex over this presentation.
    pub fn act_simplex(&self, s: &Simplex, theta: &[usize]) -> Simplex {
        let sigma = s.word.to_surjection(s.generator_degree());
        self.normalize(s.generator, &compose(&sigma, theta))
    }

    pub fn face_of(&self, s: &Simplex, i: usize) -> Simplex {
        self.act_simplex(s, &coface(s.degree, i))
    }

    pub fn degen_of(&self, s: &Simplex, i: usize) -> Simplex {
        self.act_simplex(s, &codegeneracy(s.degree, i))
    }

    /// All cells in degrees `0..=bound`, degenerate ones included.
    ///
    /// Within a degree, cells are ordered by generator and then by the
    /// lexicographic order of the degeneracy surjection, so the
    /// nondegenerate cells appear in generator order.
    pub fn truncate(&self, bound: usize) -> TruncatedSSet {
        let mut cells: Vec<Vec<(usize, Monotone)>> = Vec::with_capacity(bound + 1);
        let mut index: Vec<HashMap<(usize, Monotone), usize>> = Vec::with_capacity(bound + 1);
        for m in 0..=bound {
            let mut list = Vec::new();
            for (g, gen) in self.generators.iter().enumerate() {
                if gen.degree > m {
                    break;
                }
                for sigma in surjections(m, gen.degree) {
                    list.push((g, sigma));
                }
            }
            index.push(list.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect());
            cells.push(list);
        }
        let lookup = |m: usize, s: &Simplex| -> usize {
            let sigma = s.word.to_surjection(s.generator_degree());
            index[m][&(s.generator, sigma)]
        };
        let names = cells
            .iter()
            .map(|list| {
                list.iter()
                    .map(|(g, sigma)| {
                        let w = DegeneracyWord::from_surjection(sigma);
                        let name = &self.generators[*g].name;
                        if w.is_empty() {
                            name.clone()
                        } else {
                            format!("{w}({name})")
                        }
                    })
                    .collect()
            })
            .collect();
        let mut faces = vec![vec![]];
        for m in 1..=bound {
            let tables = (0..=m)
                .map(|i| {
                    let delta = coface(m, i);
                    cells[m]
                        .iter()
                        .map(|(g, sigma)| lookup(m - 1, &self.normalize(*g, &compose(sigma, &delta))))
                        .collect()
                })
                .collect();
            faces.push(tables);
        }
        let mut degens = Vec::with_capacity(bound + 1);
        for m in 0..bound {
            let tables = (0..=m)
                .map(|i| {
                    let s = codegeneracy(m, i);
                    cells[m]
                        .iter()
                        .map(|(g, sigma)| index[m + 1][&(*g, compose(sigma, &s))])
                        .collect()
                })
                .collect();
            degens.push(tables);
        }
        degens.push(vec![]);
        TruncatedSSet::from_tables_unchecked(bound, names, faces, degens)
            .expect("truncation tables are well-shaped")
    }

    /// Disjoint union of presentations, generators of `self` first within
    /// each degree.
    pub fn coproduct(&self, other: &Self) -> Self {
        let top = self.dimension().into_iter().chain(other.dimension()).max().unwrap_or(0);
        let mut gens = Vec::new();
        let mut remap_a = vec![0; self.len()];
        let mut remap_b = vec![0; other.len()];
        for m in 0..=top {
            for g in self.degree_range(m) {
                remap_a[g] = gens.len();
                let gen = &self.generators[g];
                let faces = gen.faces.iter().map(|f| Simplex { generator: remap_a[f.generator], ..f.clone() });
                gens.push(Generator { name: format!("inl:{}", gen.name), degree: m, faces: faces.collect() });
            }
            for g in other.degree_range(m) {
                remap_b[g] = gens.len();
                let gen = &other.generators[g];
                let faces = gen.faces.iter().map(|f| Simplex { generator: remap_b[f.generator], ..f.clone() });
                gens.push(Generator { name: format!("inr:{}", gen.name), degree: m, faces: faces.collect() });
            }
        }
        Self::new(gens).expect("coproduct of valid presentations")
    }
}

/// A simplicial map between presentations, given by the image of each
/// source generator as a simplex over the target generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinGenMap {
    pub images: Vec<Simplex>,
}

impl FinGenMap {
    pub fn new(source: &FinGenSSet, target: &FinGenSSet, images: Vec<Simplex>) -> Result<Self> {
        let f = Self { images };
        f.validate(source, target)?;
        Ok(f)
    }

    pub fn identity(x: &FinGenSSet) -> Self {
        Self {
            images: x.generators.iter().enumerate().map(|(g, gen)| Simplex::nondegenerate(gen.degree, g)).collect(),
        }
    }

    pub fn validate(&self, source: &FinGenSSet, target: &FinGenSSet) -> Result<()> {
        if self.images.len() != source.len() {
            return Err(Error::NotSimplicial("one image per source generator required".into()));
        }
        for (g, gen) in source.generators.iter().enumerate() {
            let img = &self.images[g];
            if img.degree != gen.degree
                || img.generator >= target.len()
                || target.generator(img.generator).degree + img.word.len() != img.degree
            {
                return Err(Error::NotSimplicial(format!("image of `{}` has wrong degree", gen.name)));
            }
            for (i, face) in gen.faces.iter().enumerate() {
                if target.face_of(img, i) != self.apply(target, face) {
                    return Err(Error::NotSimplicial(format!(
                        "d_{i} does not commute on generator `{}`",
                        gen.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Image of a simplex over the source generators.
    pub fn apply(&self, target: &FinGenSSet, s: &Simplex) -> Simplex {
        let img = &self.images[s.generator];
        target.act_simplex(img, &s.word.to_surjection(s.generator_degree()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, target: &FinGenSSet, other: &FinGenMap) -> FinGenMap {
        FinGenMap { images: other.images.iter().map(|s| self.apply(target, s)).collect() }
    }

    /// The induced map of `presentation()` skeleta for a simplicial map of
    /// truncations.
    pub fn from_smap(f: &crate::smap::SMap) -> Self {
        let src = f.source();
        let tgt = f.target();
        let mut images = Vec::new();
        for m in 0..=src.bound() {
            for &x in src.nondegenerate(m) {
                images.push(tgt.cell_simplex(m, f.apply(m, x)));
            }
        }
        FinGenMap { images }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{boundary, delta, horn};

    #[test]
    fn delta_one_counts_are_m_plus_two() {
        let x = delta(1).truncate(5);
        for m in 0..=5 {
            assert_eq!(x.count(m), m + 2);
        }
    }

    #[test]
    fn truncate_then_present_is_identity_on_generators() {
        for a in [delta(2), boundary(2), horn(3, 1).unwrap()] {
            let t = a.truncate(a.dimension().unwrap() + 1);
            assert!(t.validate_identities().is_empty());
            assert_eq!(t.presentation(), a);
        }
    }

    #[test]
    fn rejects_bad_face_identity() {
        // an "edge" whose two faces are fine but a triangle with inconsistent faces
        let v = |name: &str| Generator { name: name.into(), degree: 0, faces: vec![] };
        let e = |name: &str, d0: usize, d1: usize| Generator {
            name: name.into(),
            degree: 1,
            faces: vec![Simplex::nondegenerate(0, d0), Simplex::nondegenerate(0, d1)],
        };
        let gens = vec![
            v("a"),
            v("b"),
            v("c"),
            e("ab", 1, 0),
            e("bc", 2, 1),
            e("ac", 2, 0),
            Generator {
                name: "t".into(),
                degree: 2,
                // d0 should be bc, d1 ac, d2 ab; swap d0 and d2
                faces: vec![
                    Simplex::nondegenerate(1, 3),
                    Simplex::nondegenerate(1, 5),
                    Simplex::nondegenerate(1, 4),
                ],
            },
        ];
        assert!(FinGenSSet::new(gens).is_err());
    }
}
