//! Named simplicial sets and the limits and colimits used to build them.

use std::collections::HashMap;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;

use crate::category::{FinCategory, FinPoset};
use crate::error::{Error, Result};
use crate::fingen::{FinGenMap, FinGenSSet, Generator};
use crate::simplex::{epi_mono, DegeneracyWord, Monotone, Simplex};
use crate::smap::SMap;
use crate::truncated::TruncatedSSet;

fn subset_name(s: &[usize]) -> String {
    let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn mask_of(s: &[usize]) -> u64 {
    s.iter().fold(0, |m, &v| m | (1u64 << v))
}

fn elements_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask & (1 << v) != 0).collect()
}

/// Nonempty subsets of `[n]` satisfying `keep`, as a presentation with
/// faces given by deleting a vertex. `keep` must be closed under taking
/// nonempty subsets.
fn simplex_subcomplex(n: usize, keep: impl Fn(&[usize]) -> bool) -> (FinGenSSet, HashMap<u64, usize>) {
    assert!(n < 64, "standard simplices are limited to dimension 63");
    let mut subsets: Vec<Vec<usize>> = (1u64..(1u64 << (n + 1)))
        .map(elements_of)
        .filter(|s| keep(s))
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let index: HashMap<u64, usize> = subsets.iter().enumerate().map(|(i, s)| (mask_of(s), i)).collect();
    let gens = subsets
        .iter()
        .map(|s| {
            let k = s.len() - 1;
            let faces = if k == 0 {
                vec![]
            } else {
                (0..=k)
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        Simplex::nondegenerate(k - 1, index[&mask_of(&f)])
                    })
                    .collect()
            };
            Generator { name: subset_name(s), degree: k, faces }
        })
        .collect();
    (FinGenSSet::new(gens).expect("subcomplex of a simplex"), index)
}

/// The standard simplex `Δⁿ`: one generator per nonempty subset of `[n]`.
pub fn delta(n: usize) -> FinGenSSet {
    simplex_subcomplex(n, |_| true).0
}

/// Flat generator index of the face of `Δⁿ` spanned by `vertices`
/// (strictly increasing).
pub fn delta_generator(n: usize, vertices: &[usize]) -> usize {
    // generators sorted by size, then lexicographically
    let k = vertices.len();
    let mut before = 0;
    for size in 1..k {
        before += binomial(n + 1, size);
    }
    // rank of `vertices` among k-subsets of [n] in lexicographic order
    let mut rank = 0;
    let mut prev: Option<usize> = None;
    for (pos, &v) in vertices.iter().enumerate() {
        let start = prev.map_or(0, |p| p + 1);
        for smaller in start..v {
            rank += binomial(n - smaller, k - pos - 1);
        }
        prev = Some(v);
    }
    before + rank
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// The simplex `θ` of `Δⁿ` for a monotone `θ : [m] -> [n]`.
pub fn delta_simplex(n: usize, theta: &[usize]) -> Simplex {
    let (tau, eta) = epi_mono(theta);
    Simplex { degree: theta.len() - 1, generator: delta_generator(n, &eta), word: DegeneracyWord::from_surjection(&tau) }
}

/// The boundary `∂Δⁿ`. For `n = 0` this is empty.
pub fn boundary(n: usize) -> FinGenSSet {
    simplex_subcomplex(n, |s| s.len() < n + 1).0
}

/// The horn `Λⁿₖ`: all faces of `Δⁿ` except the top cell and the face
/// opposite vertex `k`.
pub fn horn(n: usize, k: usize) -> Result<FinGenSSet> {
    check_horn(n, k)?;
    Ok(simplex_subcomplex(n, horn_filter(n, k)).0)
}

fn check_horn(n: usize, k: usize) -> Result<()> {
    if n == 0 || k > n {
        return Err(Error::InvalidArgument(format!("horn Λ^{n}_{k} is undefined")));
    }
    Ok(())
}

fn horn_filter(n: usize, k: usize) -> impl Fn(&[usize]) -> bool {
    move |s: &[usize]| s.len() < n + 1 && !(s.len() == n && !s.contains(&k))
}

fn subcomplex_inclusion(n: usize, sub: &FinGenSSet) -> FinGenMap {
    let images = sub
        .generators()
        .iter()
        .map(|g| {
            let vertices = parse_subset(&g.name);
            Simplex::nondegenerate(g.degree, delta_generator(n, &vertices))
        })
        .collect();
    FinGenMap { images }
}

fn parse_subset(name: &str) -> Vec<usize> {
    name.trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|v| v.parse().expect("subset name"))
        .collect()
}

pub fn boundary_inclusion(n: usize) -> FinGenMap {
    subcomplex_inclusion(n, &boundary(n))
}

pub fn horn_inclusion(n: usize, k: usize) -> Result<FinGenMap> {
    Ok(subcomplex_inclusion(n, &horn(n, k)?))
}

/// The vertex `v` of `Δⁿ` as a map `Δ⁰ -> Δⁿ`.
pub fn vertex_inclusion(n: usize, v: usize) -> FinGenMap {
    FinGenMap { images: vec![Simplex::nondegenerate(0, delta_generator(n, &[v]))] }
}

/// The presentation map `Δᵐ -> Δⁿ` induced by a monotone `θ : [m] -> [n]`.
pub fn delta_map(m: usize, n: usize, theta: &[usize]) -> FinGenMap {
    let source = delta(m);
    let images = source
        .generators()
        .iter()
        .map(|g| {
            let verts = parse_subset(&g.name);
            let img: Monotone = verts.iter().map(|&v| theta[v]).collect();
            delta_simplex(n, &img)
        })
        .collect();
    FinGenMap { images }
}

impl FinGenMap {
    /// The induced map of truncations `truncate(source) -> truncate(target)`.
    pub fn to_smap(
        &self,
        source: &FinGenSSet,
        target: &FinGenSSet,
        bound: usize,
    ) -> SMap {
        let src = Arc::new(source.truncate(bound));
        let tgt = Arc::new(target.truncate(bound));
        self.to_smap_between(src, tgt)
    }

    /// As [`FinGenMap::to_smap`] with given truncations of the source and
    /// target presentations.
    pub fn to_smap_between(&self, src: Arc<TruncatedSSet>, tgt: Arc<TruncatedSSet>) -> SMap {
        let components = (0..=src.bound())
            .map(|m| {
                (0..src.count(m))
                    .map(|x| {
                        let s = src.cell_simplex(m, x);
                        let img = &self.images[s.generator];
                        // apply the word of `s` to the image simplex
                        let base = tgt.simplex_cell(img).expect("image within bound");
                        tgt.apply_word(base, img.degree, &s.word).expect("within bound")
                    })
                    .collect()
            })
            .collect();
        SMap::new_unchecked(src, tgt, components).expect("well-shaped induced map")
    }
}

/// Degreewise cartesian product with componentwise structure maps.
pub fn product(x: &TruncatedSSet, y: &TruncatedSSet) -> Result<TruncatedSSet> {
    if x.bound() != y.bound() {
        return Err(Error::BoundMismatch(x.bound(), y.bound()));
    }
    let n = x.bound();
    let idx = |m: usize, a: usize, b: usize| a * y.count(m) + b;
    let names = (0..=n)
        .map(|m| {
            let mut v = Vec::with_capacity(x.count(m) * y.count(m));
            for a in x.names(m) {
                for b in y.names(m) {
                    v.push(format!("({a},{b})"));
                }
            }
            v
        })
        .collect();
    let faces = (0..=n)
        .map(|m| {
            if m == 0 {
                return vec![];
            }
            (0..=m)
                .map(|i| {
                    let mut t = Vec::with_capacity(x.count(m) * y.count(m));
                    for a in 0..x.count(m) {
                        for b in 0..y.count(m) {
                            t.push(idx(m - 1, x.face(m, i, a), y.face(m, i, b)));
                        }
                    }
                    t
                })
                .collect()
        })
        .collect();
    let degens = (0..=n)
        .map(|m| {
            if m == n {
                return vec![];
            }
            (0..=m)
                .map(|i| {
                    let mut t = Vec::with_capacity(x.count(m) * y.count(m));
                    for a in 0..x.count(m) {
                        for b in 0..y.count(m) {
                            t.push(idx(m + 1, x.degen(m, i, a), y.degen(m, i, b)));
                        }
                    }
                    t
                })
                .collect()
        })
        .collect();
    TruncatedSSet::from_tables_unchecked(n, names, faces, degens)
}

/// `f × g : X × Y -> X' × Y'` between products built by [`product`].
pub fn product_map(f: &SMap, g: &SMap, source: Arc<TruncatedSSet>, target: Arc<TruncatedSSet>) -> Result<SMap> {
    let n = source.bound();
    let components = (0..=n)
        .map(|m| {
            let (ys, yt) = (g.source().count(m), g.target().count(m));
            let mut c = Vec::with_capacity(f.source().count(m) * ys);
            for a in 0..f.source().count(m) {
                for b in 0..ys {
                    c.push(f.apply(m, a) * yt + g.apply(m, b));
                }
            }
            c
        })
        .collect();
    SMap::new_unchecked(source, target, components)
}

/// The two projections out of a product built by [`product`].
pub fn projections(
    prod: Arc<TruncatedSSet>,
    x: Arc<TruncatedSSet>,
    y: Arc<TruncatedSSet>,
) -> Result<(SMap, SMap)> {
    let n = prod.bound();
    let p1 = (0..=n).map(|m| (0..prod.count(m)).map(|c| c / y.count(m)).collect()).collect();
    let p2 = (0..=n).map(|m| (0..prod.count(m)).map(|c| c % y.count(m)).collect()).collect();
    Ok((SMap::new_unchecked(prod.clone(), x, p1)?, SMap::new_unchecked(prod, y, p2)?))
}

/// A pushout object with its cocone maps.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: Arc<TruncatedSSet>,
    pub inl: SMap,
    pub inr: SMap,
}

/// Degreewise pushout of `X <- A -> Y`: the quotient of `X ⊔ Y` by the
/// equivalence generated by `f(a) ~ g(a)`.
pub fn pushout(f: &SMap, g: &SMap) -> Result<Pushout> {
    if f.source() != g.source() {
        return Err(Error::NotComposable("pushout legs must share their domain".into()));
    }
    let (x, y) = (f.target().clone(), g.target().clone());
    let n = x.bound();
    if y.bound() != n {
        return Err(Error::BoundMismatch(n, y.bound()));
    }
    let a = f.source();
    // class[m][c] for c in X_m ⊔ Y_m
    let mut class = Vec::with_capacity(n + 1);
    let mut reps = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let nx = x.count(m);
        let total = nx + y.count(m);
        let mut uf = UnionFind::<usize>::new(total);
        for c in 0..a.count(m) {
            uf.union(f.apply(m, c), nx + g.apply(m, c));
        }
        let mut id_of_root = HashMap::new();
        let mut cls = vec![0; total];
        let mut rep = Vec::new();
        for (c, slot) in cls.iter_mut().enumerate() {
            let r = uf.find(c);
            *slot = *id_of_root.entry(r).or_insert_with(|| {
                rep.push(c);
                rep.len() - 1
            });
        }
        class.push(cls);
        reps.push(rep);
    }
    let nx = |m: usize| x.count(m);
    let face_of = |m: usize, i: usize, c: usize| -> usize {
        if c < nx(m) {
            x.face(m, i, c)
        } else {
            nx(m - 1) + y.face(m, i, c - nx(m))
        }
    };
    let degen_of = |m: usize, i: usize, c: usize| -> usize {
        if c < nx(m) {
            x.degen(m, i, c)
        } else {
            nx(m + 1) + y.degen(m, i, c - nx(m))
        }
    };
    let names = (0..=n)
        .map(|m| {
            reps[m]
                .iter()
                .map(|&c| {
                    if c < nx(m) {
                        format!("inl:{}", x.name(m, c))
                    } else {
                        format!("inr:{}", y.name(m, c - nx(m)))
                    }
                })
                .collect()
        })
        .collect();
    let faces = (0..=n)
        .map(|m| {
            if m == 0 {
                return vec![];
            }
            (0..=m).map(|i| reps[m].iter().map(|&c| class[m - 1][face_of(m, i, c)]).collect()).collect()
        })
        .collect();
    let degens = (0..=n)
        .map(|m| {
            if m == n {
                return vec![];
            }
            (0..=m).map(|i| reps[m].iter().map(|&c| class[m + 1][degen_of(m, i, c)]).collect()).collect()
        })
        .collect();
    let object = Arc::new(TruncatedSSet::from_tables_unchecked(n, names, faces, degens)?);
    let inl = (0..=n).map(|m| class[m][..nx(m)].to_vec()).collect();
    let inr = (0..=n).map(|m| class[m][nx(m)..].to_vec()).collect();
    Ok(Pushout {
        inl: SMap::new_unchecked(x, object.clone(), inl)?,
        inr: SMap::new_unchecked(y, object.clone(), inr)?,
        object,
    })
}

/// A pullback object with its two projections.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub object: Arc<TruncatedSSet>,
    pub pr1: SMap,
    pub pr2: SMap,
}

/// Degreewise fibre product `X ×_Z Y` of `f : X -> Z` and `g : Y -> Z`.
pub fn pullback(f: &SMap, g: &SMap) -> Result<Pullback> {
    if f.target() != g.target() {
        return Err(Error::NotComposable("pullback legs must share their codomain".into()));
    }
    let (x, y) = (f.source().clone(), g.source().clone());
    let n = x.bound();
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n + 1);
    let mut index: Vec<HashMap<(usize, usize), usize>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
        for b in 0..y.count(m) {
            by_image.entry(g.apply(m, b)).or_default().push(b);
        }
        let mut list = Vec::new();
        for a in 0..x.count(m) {
            if let Some(bs) = by_image.get(&f.apply(m, a)) {
                list.extend(bs.iter().map(|&b| (a, b)));
            }
        }
        index.push(list.iter().enumerate().map(|(i, &p)| (p, i)).collect());
        pairs.push(list);
    }
    let names = (0..=n)
        .map(|m| pairs[m].iter().map(|&(a, b)| format!("({},{})", x.name(m, a), y.name(m, b))).collect())
        .collect();
    let faces = (0..=n)
        .map(|m| {
            if m == 0 {
                return vec![];
            }
            (0..=m)
                .map(|i| pairs[m].iter().map(|&(a, b)| index[m - 1][&(x.face(m, i, a), y.face(m, i, b))]).collect())
                .collect()
        })
        .collect();
    let degens = (0..=n)
        .map(|m| {
            if m == n {
                return vec![];
            }
            (0..=m)
                .map(|i| pairs[m].iter().map(|&(a, b)| index[m + 1][&(x.degen(m, i, a), y.degen(m, i, b))]).collect())
                .collect()
        })
        .collect();
    let object = Arc::new(TruncatedSSet::from_tables_unchecked(n, names, faces, degens)?);
    let p1 = pairs.iter().map(|l| l.iter().map(|p| p.0).collect()).collect();
    let p2 = pairs.iter().map(|l| l.iter().map(|p| p.1).collect()).collect();
    Ok(Pullback {
        pr1: SMap::new_unchecked(object.clone(), x, p1)?,
        pr2: SMap::new_unchecked(object.clone(), y, p2)?,
        object,
    })
}

/// `D^{n+1}`: the quotient of `Δⁿ × Δ¹` collapsing `∂Δⁿ × Δ¹` onto `∂Δⁿ`,
/// with the quotient map `q` and the two ends `j₀, j₁ : Δⁿ -> D^{n+1}`.
#[derive(Debug, Clone)]
pub struct CollapsedCylinder {
    pub n: usize,
    pub object: Arc<TruncatedSSet>,
    pub q: SMap,
    pub j0: SMap,
    pub j1: SMap,
}

/// Builds `D^{n+1}` truncated at `bound >= n + 1`.
pub fn collapse_cylinder(n: usize, bound: usize) -> Result<CollapsedCylinder> {
    if bound < n + 1 {
        return Err(Error::InsufficientBound { what: format!("D^{}", n + 1), needed: n + 1, bound });
    }
    let dn = Arc::new(delta(n).truncate(bound));
    let d1 = Arc::new(delta(1).truncate(bound));
    let bd = Arc::new(boundary(n).truncate(bound));
    let cyl = Arc::new(product(&dn, &d1)?);
    let bd_cyl = Arc::new(product(&bd, &d1)?);
    let incl = boundary_inclusion(n).to_smap_between(bd.clone(), dn.clone());
    let incl_x_id = product_map(&incl, &SMap::identity(d1.clone()), bd_cyl.clone(), cyl.clone())?;
    let (proj, _) = projections(bd_cyl.clone(), bd.clone(), d1.clone())?;
    let po = pushout(&incl_x_id, &proj)?;
    let q = po.inl.clone();
    let end = |e: usize| -> Result<SMap> {
        // x ↦ (x, constant e)
        let v = delta_generator(1, &[e]);
        let (_, v_cell) = d1.generator_cell(v);
        let components = (0..=bound)
            .map(|m| {
                let word = DegeneracyWord::new((0..m).rev().collect()).expect("decreasing");
                let c = d1.apply_word(v_cell, 0, &word).expect("within bound");
                (0..dn.count(m)).map(|x| x * d1.count(m) + c).collect()
            })
            .collect();
        let into_cyl = SMap::new_unchecked(dn.clone(), cyl.clone(), components)?;
        q.compose(&into_cyl)
    };
    Ok(CollapsedCylinder { n, j0: end(0)?, j1: end(1)?, q, object: po.object })
}

/// The nerve of a finite category: degree-`m` cells are composable
/// strings `x₀ -f₁-> x₁ -> … -fₘ-> xₘ`.
pub fn nerve(c: &FinCategory, bound: usize) -> TruncatedSSet {
    let mut chains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(bound + 1);
    let mut index: Vec<HashMap<Vec<usize>, usize>> = Vec::with_capacity(bound + 1);
    let nobj = c.objects().len();
    // degree 0 cells are objects, encoded as [object]
    chains.push((0..nobj).map(|o| vec![o]).collect());
    for m in 1..=bound {
        let mut next = Vec::new();
        if m == 1 {
            for f in 0..c.morphisms().len() {
                next.push(vec![f]);
            }
        } else {
            for ch in &chains[m - 1] {
                let last = c.morphism(*ch.last().unwrap()).cod;
                for f in 0..c.morphisms().len() {
                    if c.morphism(f).dom == last {
                        let mut v = ch.clone();
                        v.push(f);
                        next.push(v);
                    }
                }
            }
        }
        chains.push(next);
    }
    for list in &chains {
        index.push(list.iter().cloned().enumerate().map(|(i, ch)| (ch, i)).collect());
    }
    let names = chains
        .iter()
        .enumerate()
        .map(|(m, list)| {
            list.iter()
                .map(|ch| {
                    if m == 0 {
                        c.objects()[ch[0]].clone()
                    } else {
                        ch.iter().map(|&f| c.morphism(f).name.as_str()).collect::<Vec<_>>().join("|")
                    }
                })
                .collect()
        })
        .collect();
    let object_at = |ch: &[usize], m: usize, pos: usize| -> usize {
        if m == 0 {
            ch[0]
        } else if pos == 0 {
            c.morphism(ch[0]).dom
        } else {
            c.morphism(ch[pos - 1]).cod
        }
    };
    let mut faces = vec![vec![]];
    for m in 1..=bound {
        let tables = (0..=m)
            .map(|i| {
                chains[m]
                    .iter()
                    .map(|ch| {
                        let key: Vec<usize> = if m == 1 {
                            let f = c.morphism(ch[0]);
                            vec![if i == 0 { f.cod } else { f.dom }]
                        } else if i == 0 {
                            ch[1..].to_vec()
                        } else if i == m {
                            ch[..m - 1].to_vec()
                        } else {
                            let mut v = ch[..i - 1].to_vec();
                            v.push(c.compose(ch[i], ch[i - 1]).expect("composable"));
                            v.extend_from_slice(&ch[i + 1..]);
                            v
                        };
                        index[m - 1][&key]
                    })
                    .collect()
            })
            .collect();
        faces.push(tables);
    }
    let mut degens = Vec::new();
    for m in 0..bound {
        let tables = (0..=m)
            .map(|i| {
                chains[m]
                    .iter()
                    .map(|ch| {
                        let id = c.identity(object_at(ch, m, i));
                        let key = if m == 0 {
                            vec![id]
                        } else {
                            let mut v = ch.clone();
                            v.insert(i, id);
                            v
                        };
                        index[m + 1][&key]
                    })
                    .collect()
            })
            .collect();
        degens.push(tables);
    }
    degens.push(vec![]);
    TruncatedSSet::from_tables_unchecked(bound, names, faces, degens).expect("nerve tables")
}

/// Presentation of the nerve of a finite poset: generators are strict chains.
pub fn poset_nerve(p: &FinPoset) -> (FinGenSSet, HashMap<Vec<usize>, usize>) {
    let mut chains = Vec::new();
    for k in 0..p.len() {
        let cs = p.strict_chains(k);
        if cs.is_empty() {
            break;
        }
        chains.extend(cs);
    }
    let index: HashMap<Vec<usize>, usize> = chains.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let gens = chains
        .iter()
        .map(|ch| {
            let k = ch.len() - 1;
            let faces = if k == 0 {
                vec![]
            } else {
                (0..=k)
                    .map(|i| {
                        let mut f = ch.clone();
                        f.remove(i);
                        Simplex::nondegenerate(k - 1, index[&f])
                    })
                    .collect()
            };
            let name = ch.iter().map(|&x| p.elements()[x].as_str()).collect::<Vec<_>>().join("<");
            Generator { name, degree: k, faces }
        })
        .collect();
    (FinGenSSet::new(gens).expect("nerve of a poset"), index)
}

/// The poset `Pⁿ` of nonempty subsets of `[n]` under inclusion, ordered
/// by size and then lexicographically. Elements are returned as bitmasks
/// alongside the poset.
pub fn poset_p(n: usize) -> (FinPoset, Vec<u64>) {
    let mut subsets: Vec<Vec<usize>> = (1u64..(1u64 << (n + 1))).map(elements_of).collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let masks: Vec<u64> = subsets.iter().map(|s| mask_of(s)).collect();
    let names = subsets
        .iter()
        .map(|s| format!("{{{}}}", s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    let leq = masks.iter().map(|&a| masks.iter().map(|&b| a & b == a).collect()).collect();
    (FinPoset::new(names, leq).expect("subset order"), masks)
}

/// The barycentric subdivision `N(Pⁿ)` of `Δⁿ`, with the bookkeeping
/// needed for induced maps.
#[derive(Debug, Clone)]
pub struct Subdivision {
    pub n: usize,
    pub presentation: FinGenSSet,
    masks: Vec<u64>,
    chains: Vec<Vec<usize>>,
    index: HashMap<Vec<u64>, usize>,
}

impl Subdivision {
    pub fn new(n: usize) -> Self {
        let (p, masks) = poset_p(n);
        let (presentation, idx) = poset_nerve(&p);
        let mut chains = vec![vec![]; idx.len()];
        let mut index = HashMap::with_capacity(idx.len());
        for (ch, g) in idx {
            index.insert(ch.iter().map(|&e| masks[e]).collect(), g);
            chains[g] = ch;
        }
        Self { n, presentation, masks, chains, index }
    }

    /// The chain of subsets (bitmasks) of a generator.
    pub fn chain(&self, g: usize) -> Vec<u64> {
        self.chains[g].iter().map(|&e| self.masks[e]).collect()
    }

    fn simplex_of_chain(&self, chain: &[u64]) -> Simplex {
        let mut distinct: Vec<u64> = Vec::with_capacity(chain.len());
        let mut sigma = Vec::with_capacity(chain.len());
        for &s in chain {
            if distinct.last() != Some(&s) {
                distinct.push(s);
            }
            sigma.push(distinct.len() - 1);
        }
        Simplex {
            degree: chain.len() - 1,
            generator: self.index[&distinct],
            word: DegeneracyWord::from_surjection(&sigma),
        }
    }

    /// `N(P^θ) : N(Pᵐ) -> N(Pⁿ)` for a monotone `θ : [m] -> [n]`, taking
    /// images of subsets; `self` is the source subdivision.
    pub fn induced(&self, theta: &[usize], target: &Subdivision) -> FinGenMap {
        let image = |mask: u64| -> u64 {
            elements_of(mask).into_iter().fold(0, |acc, v| acc | (1u64 << theta[v]))
        };
        let images = (0..self.presentation.len())
            .map(|g| {
                let chain: Vec<u64> = self.chain(g).into_iter().map(image).collect();
                target.simplex_of_chain(&chain)
            })
            .collect();
        FinGenMap { images }
    }

    /// `N(max) : N(Pⁿ) -> Δⁿ`.
    pub fn max_map(&self) -> FinGenMap {
        let images = (0..self.presentation.len())
            .map(|g| {
                let theta: Monotone = self.chain(g).into_iter().map(|m| 63 - m.leading_zeros() as usize).collect();
                delta_simplex(self.n, &theta)
            })
            .collect();
        FinGenMap { images }
    }
}

/// The subdivision `N(Pⁿ)` as a presentation.
pub fn subdivision(n: usize) -> FinGenSSet {
    Subdivision::new(n).presentation
}

/// `max : N(Pⁿ) -> Δⁿ` on truncations at `bound`.
pub fn max_map(n: usize, bound: usize) -> SMap {
    let sd = Subdivision::new(n);
    sd.max_map().to_smap(&sd.presentation, &delta(n), bound)
}

/// The constant simplicial set on one point.
pub fn point(bound: usize) -> TruncatedSSet {
    delta(0).truncate(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::monotone_maps;

    #[test]
    fn delta_generator_matches_order() {
        for n in 0..5 {
            let d = delta(n);
            for (g, gen) in d.generators().iter().enumerate() {
                assert_eq!(delta_generator(n, &parse_subset(&gen.name)), g);
            }
        }
    }

    #[test]
    fn delta_degree_counts() {
        let d0 = delta(0).truncate(4);
        assert!(d0.counts().iter().all(|&c| c == 1));
        assert_eq!(delta(2).truncate(1).count(1), 6);
        assert_eq!(delta(1).truncate(2).count(2), 4);
    }

    #[test]
    fn boundary_one_is_two_points() {
        let b = boundary(1);
        assert_eq!(b.len(), 2);
        assert!(b.generators().iter().all(|g| g.degree == 0));
    }

    #[test]
    fn horn_two_one_cells() {
        let h = horn(2, 1).unwrap();
        assert_eq!(h.degree_range(0).len(), 3);
        assert_eq!(h.degree_range(1).len(), 2);
        assert!(horn(0, 0).is_err());
        let h10 = horn(1, 0).unwrap();
        assert_eq!(h10.len(), 1);
        assert_eq!(h10.generator(0).name, "[0]");
    }

    #[test]
    fn product_counts() {
        let d1 = delta(1).truncate(2);
        let p = product(&d1, &d1).unwrap();
        assert_eq!(p.count(1), 9);
        assert_eq!(p.count(2), 16);
        assert!(p.validate_identities().is_empty());
        let pt = point(2);
        let q = product(&pt, &d1).unwrap();
        assert_eq!(q.counts(), d1.counts());
    }

    #[test]
    fn circle_from_two_edges() {
        let d1 = Arc::new(delta(1).truncate(2));
        let bd = Arc::new(boundary(1).truncate(2));
        let i = boundary_inclusion(1).to_smap_between(bd, d1);
        let po = pushout(&i, &i).unwrap();
        let x = &po.object;
        assert!(x.validate_identities().is_empty());
        assert_eq!(x.nondegenerate(0).len(), 2);
        assert_eq!(x.nondegenerate(1).len(), 2);
        po.inl.validate().unwrap();
        po.inr.validate().unwrap();
    }

    #[test]
    fn collapsed_cylinder_small_cases() {
        let c0 = collapse_cylinder(0, 2).unwrap();
        assert_eq!(c0.object.counts(), delta(1).truncate(2).counts());
        assert_ne!(c0.j0.apply(0, 0), c0.j1.apply(0, 0));
        let c1 = collapse_cylinder(1, 3).unwrap();
        assert!(c1.object.validate_identities().is_empty());
        assert_eq!(c1.object.count(0), 2);
        assert_eq!(c1.object.nondegenerate(1).len(), 3);
        assert_eq!(c1.object.nondegenerate(2).len(), 2);
        for f in [&c1.q, &c1.j0, &c1.j1] {
            f.validate().unwrap();
        }
    }

    #[test]
    fn nerve_of_c2_degree_two() {
        let n = nerve(&FinCategory::cyclic_group(2), 3);
        assert_eq!(n.count(2), 4);
        assert!(n.validate_identities().is_empty());
    }

    #[test]
    fn nerve_of_ordinal_is_delta() {
        for k in 0..4 {
            let nv = nerve(&FinPoset::ordinal(k).as_category(), 3);
            let d = delta(k).truncate(3);
            assert_eq!(nv.counts(), d.counts());
            for m in 0..=3 {
                assert_eq!(nv.count(m), monotone_maps(m, k).len());
            }
        }
    }

    #[test]
    fn subdivision_one() {
        let sd = subdivision(1);
        assert_eq!(sd.degree_range(0).len(), 3);
        assert_eq!(sd.degree_range(1).len(), 2);
        assert_eq!(sd.dimension(), Some(1));
    }

    #[test]
    fn max_map_is_surjective() {
        for n in 0..4 {
            let f = max_map(n, 3);
            f.validate().unwrap();
            assert!(f.is_surjective());
        }
    }
}
