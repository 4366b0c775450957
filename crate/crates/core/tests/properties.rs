#![allow(clippy::needless_range_loop)]

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stdist::affine::{line, twisted_harmonic_exists};
use stdist::catalog::builtin;
use stdist::checks::{all_characters, random_pool};
use stdist::cyclotomic::Cyclotomic;
use stdist::dual_group::jordan_partition;
use stdist::hypergraph::{isomorphic, OrbitHypergraph};
use stdist::random::{random_closed_graph, shuffle};
use stdist::root_system::{
    chi0_sign, fundamental_group, generate_roots, CartanDatum, Character, Factor, Phase, SimpleType,
};

fn pool() -> Vec<OrbitHypergraph> {
    random_pool(&builtin().unwrap())
}

fn factor() -> impl Strategy<Value = Factor> {
    prop_oneof![
        (1usize..=4).prop_map(|r| Factor::new(SimpleType::A, r).unwrap()),
        Just(Factor::new(SimpleType::C, 2).unwrap()),
        Just(Factor::new(SimpleType::B, 3).unwrap()),
        Just(Factor::new(SimpleType::G, 2).unwrap()),
    ]
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| *x).collect())
                .collect();
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det(&minor)
        })
        .sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_graphs_satisfy_dimension_theorem(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_closed_graph(&pool(), &mut rng);
        prop_assert_eq!(g.harmonic_space().dim(), g.full_closed_vertices().len());
        let s = g.support_function().unwrap();
        prop_assert!(g.check_support(&s, &g.ranks()).is_ok());
        let space = g.harmonic_space();
        for k in 0..s.basis.len() {
            prop_assert!(space.contains(&s.coordinate(k)));
        }
    }

    #[test]
    fn shuffling_preserves_everything(seed in any::<u64>(), pick in 0usize..10) {
        let p = pool();
        let g = &p[pick % p.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = shuffle(g, &mut rng);
        prop_assert_eq!(g.harmonic_space().dim(), h.harmonic_space().dim());
        prop_assert_eq!(g.full_closed_vertices().len(), h.full_closed_vertices().len());
    }

    #[test]
    fn products_multiply_dimensions(i in 0usize..10, j in 0usize..10) {
        let p = pool();
        let a = &p[i % p.len()];
        let b = &p[j % p.len()];
        let b = b
            .with_labels((0..b.labels.len()).map(|k| format!("b{k}")).collect())
            .unwrap();
        let g = a.product(&b).unwrap();
        prop_assert_eq!(
            g.harmonic_space().dim(),
            a.harmonic_space().dim() * b.harmonic_space().dim()
        );
    }

    #[test]
    fn quotient_of_doubled_graph_by_swap(pick in 0usize..10) {
        let p = pool();
        let g = &p[pick % p.len()];
        let n = g.len();
        let two = g.disjoint_union(g, ("l", "r")).unwrap();
        let swap: Vec<usize> = (0..2 * n).map(|v| if v < n { v + n } else { v - n }).collect();
        let q = two.quotient_by_automorphisms(&[swap]).unwrap();
        prop_assert!(isomorphic(&q, g));
    }

    #[test]
    fn root_systems(factors in prop::collection::vec(factor(), 1..=3)) {
        let cd = CartanDatum::from_factors(&factors);
        let rs = generate_roots(&cd).unwrap();
        let expected: usize = factors.iter().map(Factor::root_count).sum();
        prop_assert_eq!(rs.roots.len(), expected);
        for i in 0..rs.rank() {
            for r in &rs.roots {
                prop_assert!(rs.contains(&rs.reflect(i, r)));
            }
        }
        let ad = fundamental_group(&rs);
        let order: i64 = factors.iter().map(|f| det(&f.cartan())).product();
        prop_assert_eq!(ad.order() as i64, order);
        for a in 0..ad.order() {
            for b in 0..ad.order() {
                prop_assert_eq!(
                    chi0_sign(&ad, a) * chi0_sign(&ad, b),
                    chi0_sign(&ad, ad.compose(a, b))
                );
            }
        }
        for chi in all_characters(&ad) {
            prop_assert!(chi.is_homomorphism(&ad));
        }
    }

    #[test]
    fn roots_of_unity_multiply(n in 1usize..13, a in -20i64..20, b in -20i64..20) {
        let za = Cyclotomic::root_of_unity(n, a);
        let zb = Cyclotomic::root_of_unity(n, b);
        prop_assert_eq!(&za * &zb, Cyclotomic::root_of_unity(n, a + b));
        let sum = (0..n as i64).fold(Cyclotomic::zero(n), |acc, k| &acc + &Cyclotomic::root_of_unity(n, k));
        prop_assert_eq!(sum.is_zero(), n > 1);
    }

    #[test]
    fn jordan_partition_of_unitriangular(d in 1usize..7, entries in prop::collection::vec(-2i64..3, 36)) {
        let mut u = vec![vec![0i64; d]; d];
        let mut it = entries.into_iter();
        for i in 0..d {
            u[i][i] = 1;
            for j in i + 1..d {
                u[i][j] = it.next().unwrap_or(0);
            }
        }
        let p = jordan_partition(&u);
        prop_assert_eq!(p.iter().sum::<usize>(), d);
        prop_assert!(p.windows(2).all(|w| w[0] >= w[1]));
        let superdiagonal_full = (0..d.saturating_sub(1)).all(|i| u[i][i + 1] != 0);
        if superdiagonal_full {
            prop_assert_eq!(p, vec![d]);
        }
    }

    #[test]
    fn lines_carry_every_character(len in 1usize..6, k in 0i64..2) {
        let g = line(len).unwrap();
        let ad = fundamental_group(&generate_roots(&CartanDatum::parse("A1").unwrap()).unwrap());
        let chi = Character::from_generator_phases(&ad, &[Phase::new(k, 2)]).unwrap();
        let out = twisted_harmonic_exists(&g, &ad, &[(0, (0..g.len()).collect())], &chi).unwrap();
        prop_assert!(out.exists);
        prop_assert!(out.witness.is_some());
    }
}
