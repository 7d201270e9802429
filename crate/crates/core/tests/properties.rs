use kanset::category::{FinCategory, FinPoset};
use kanset::constructions::{boundary, delta, horn, nerve};
use kanset::fingen::FinGenSSet;
use kanset::hom::count_maps;
use kanset::site::{all_sieves, generate_topology, Sieve};
use proptest::prelude::*;

/// A random partial order on `0..n` refining the usual order.
fn poset() -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let mut leq = vec![vec![false; n]; n];
            for i in 0..n {
                leq[i][i] = true;
                for j in i + 1..n {
                    leq[i][j] = bits[i * n + j];
                }
            }
            for k in 0..n {
                for i in 0..n {
                    for j in 0..n {
                        if leq[i][k] && leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
            leq
        })
    })
}

fn category(leq: &[Vec<bool>]) -> FinCategory {
    let names = (0..leq.len()).map(|i| format!("p{i}")).collect();
    FinPoset::new(names, leq.to_vec()).unwrap().as_category()
}

/// Weakly increasing sequences of length `m + 1`.
fn chains(leq: &[Vec<bool>], m: usize) -> usize {
    let mut counts = vec![1usize; leq.len()];
    for _ in 0..m {
        counts = (0..leq.len()).map(|j| (0..leq.len()).filter(|&i| leq[i][j]).map(|i| counts[i]).sum()).collect();
    }
    counts.iter().sum()
}

fn small_presentations() -> Vec<FinGenSSet> {
    vec![delta(0), delta(1), delta(2), boundary(1), boundary(2), horn(2, 0).unwrap(), horn(2, 1).unwrap()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn poset_nerves_are_valid(leq in poset()) {
        let x = nerve(&category(&leq), 3);
        prop_assert!(x.validate_identities().is_empty());
        for m in 0..=3 {
            prop_assert_eq!(x.count(m), chains(&leq, m));
        }
    }

    #[test]
    fn normal_forms_round_trip(leq in poset(), pick in any::<prop::sample::Index>()) {
        let x = nerve(&category(&leq), 3);
        for m in 0..=3 {
            let c = pick.index(x.count(m));
            let s = x.cell_simplex(m, c);
            prop_assert_eq!(x.simplex_cell(&s).unwrap(), c);
            let ez = x.ez_normalize(m, c);
            let k = ez.generator_degree();
            prop_assert!(x.is_nondegenerate(k, ez.generator));
            prop_assert_eq!(x.apply_word(ez.generator, k, &ez.word).unwrap(), c);
            prop_assert_eq!(x.generator_cell(s.generator), (k, ez.generator));
        }
    }

    #[test]
    fn maps_out_of_a_coproduct_factor(leq in poset(), a in 0usize..7, b in 0usize..7) {
        let x = nerve(&category(&leq), 2);
        let ps = small_presentations();
        let ab = ps[a].coproduct(&ps[b]);
        let lhs = count_maps(&ab, &x).unwrap();
        prop_assert_eq!(lhs, count_maps(&ps[a], &x).unwrap() * count_maps(&ps[b], &x).unwrap());
    }

    #[test]
    fn generated_topologies_validate(leq in poset(), bits in proptest::collection::vec(any::<bool>(), 64)) {
        let c = category(&leq);
        let mut k = 0;
        let basis: Vec<Vec<Sieve>> = (0..leq.len())
            .map(|o| {
                all_sieves(&c, o)
                    .into_iter()
                    .filter(|_| {
                        k += 1;
                        bits[k % bits.len()] && bits[(k * 7) % bits.len()]
                    })
                    .collect()
            })
            .collect();
        let t = generate_topology(&c, &basis).unwrap();
        prop_assert!(t.validate(&c).is_ok());
        for (o, list) in basis.iter().enumerate() {
            for s in list {
                prop_assert!(t.covers[o].contains(s));
            }
        }
        let covers: Vec<Vec<Sieve>> = t.covers.iter().map(|s| s.iter().cloned().collect()).collect();
        prop_assert_eq!(generate_topology(&c, &covers).unwrap(), t);
    }
}
