use num_integer::Integer;
use proptest::prelude::*;

use patforce::orders::star_rank;
use patforce::{eta, orp_precedes, parse_pattern, star_precedes, MarkovGraph, Pattern};

/// Uniform random cyclic permutation by Sattolo's algorithm.
fn cyclic(max: usize) -> impl Strategy<Value = Pattern> {
    (2..=max).prop_flat_map(|n| {
        proptest::collection::vec(any::<prop::sample::Index>(), n).prop_map(move |picks| {
            let mut v: Vec<usize> = (1..=n).collect();
            for i in (1..n).rev() {
                let j = picks[i].index(i);
                v.swap(i, j);
            }
            Pattern::new(v).unwrap()
        })
    })
}

fn block_sizes(p: &Pattern) -> Vec<usize> {
    p.block_structures().iter().map(|d| d.block_size).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn classifiers_are_flip_invariant(p in cyclic(12)) {
        let f = p.flip();
        prop_assert_eq!(f.flip(), p.clone());
        prop_assert_eq!(f.over_rotation_pair(), p.over_rotation_pair());
        prop_assert_eq!(f.has_division(), p.has_division());
        prop_assert_eq!(block_sizes(&f), block_sizes(&p));
        prop_assert_eq!(f.is_convergent(), p.is_convergent());
        prop_assert_eq!(f.canonical(), p.canonical());
    }

    #[test]
    fn pair_bounds(p in cyclic(14)) {
        let o = p.over_rotation_pair().unwrap();
        prop_assert_eq!(o.q, p.period());
        prop_assert!(o.p >= 1 && 2 * o.p <= o.q);
        for b in block_sizes(&p) {
            prop_assert!(o.p % b == 0 && o.q % b == 0);
        }
    }

    #[test]
    fn division_is_a_swap_of_halves(p in cyclic(12)) {
        let n = p.period();
        let swaps = n % 2 == 0 && (1..=n).all(|i| (i <= n / 2) != (p.image(i) <= n / 2));
        prop_assert_eq!(p.has_division(), swaps);
        if n > 2 {
            let two_blocks = p.block_structures().iter().any(|d| d.block_size * 2 == n);
            prop_assert_eq!(p.has_division(), two_blocks);
        }
    }

    #[test]
    fn formats_round_trip(p in cyclic(16)) {
        prop_assert_eq!(parse_pattern(&p.to_string()).unwrap(), p.clone());
        prop_assert_eq!(Pattern::from_cycle_notation(&p.to_cycle_notation()).unwrap(), p);
    }

    #[test]
    fn markov_graph_of_flip_is_reversed(p in cyclic(10)) {
        let (g, h) = (MarkovGraph::new(&p).unwrap(), MarkovGraph::new(&p.flip()).unwrap());
        let m = g.vertex_count();
        for i in 1..=m {
            for k in 1..=m {
                prop_assert_eq!(g.has_edge(i, k), h.has_edge(m + 1 - i, m + 1 - k));
            }
        }
    }

    #[test]
    fn star_is_transitive(a in 3usize..1000, b in 3usize..1000, c in 3usize..1000) {
        if star_precedes(a, b).unwrap() && star_precedes(b, c).unwrap() {
            prop_assert!(star_precedes(a, c).unwrap());
        }
    }
}

#[test]
fn star_is_a_strict_total_order() {
    for m in 3..=1000 {
        assert!(!star_precedes(m, m).unwrap());
        for s in 3..=1000 {
            if m != s {
                assert!(
                    star_precedes(m, s).unwrap() ^ star_precedes(s, m).unwrap(),
                    "{m} {s}"
                );
            }
        }
    }
}

#[test]
fn star_chain() {
    // order (*): 4 ≫ 6 ≫ 3 ≫ 8 ≫ 10 ≫ 5 ≫ 12 ≫ 14 ≫ 7 ≫ …
    let mut chain = Vec::new();
    for n in 1..=60 {
        chain.extend([4 * n, 4 * n + 2, 2 * n + 1]);
    }
    for w in chain.windows(2) {
        assert!(star_precedes(w[0], w[1]).unwrap(), "{} {}", w[0], w[1]);
        assert!(
            orp_precedes(eta(w[0]).unwrap(), eta(w[1]).unwrap()),
            "{} {}",
            w[0],
            w[1]
        );
    }
    let mut by_rank: Vec<usize> = (3..=120).collect();
    by_rank.sort_by_key(|&x| star_rank(x));
    let prefix: Vec<usize> = chain.into_iter().filter(|&x| x <= 120).collect();
    assert_eq!(by_rank, prefix);
}

#[test]
fn star_agrees_with_eta_pairs() {
    for m in 3..=300 {
        for s in 3..=300 {
            let (a, b) = (eta(m).unwrap(), eta(s).unwrap());
            assert_eq!(star_precedes(m, s).unwrap(), orp_precedes(a, b), "{m} {s}");
        }
    }
}

#[test]
fn eta_gcds() {
    for n in 1..=200 {
        let odd = eta(2 * n + 1).unwrap();
        assert_eq!((odd.p, odd.q), (n, 2 * n + 1));
        assert_eq!(odd.p.gcd(&odd.q), 1);
        let four = eta(4 * n).unwrap();
        assert_eq!((four.p, four.q), (2 * n - 1, 4 * n));
        assert_eq!(four.p.gcd(&four.q), 1);
        let twice_odd = eta(4 * n + 2).unwrap();
        assert_eq!((twice_odd.p, twice_odd.q), (2 * n, 4 * n + 2));
        assert_eq!(twice_odd.p.gcd(&twice_odd.q), 2);
    }
}

#[test]
fn every_pattern_round_trips() {
    for n in 1..=10 {
        for p in patforce::enumerate_patterns(n) {
            assert_eq!(parse_pattern(&p.to_string()).unwrap(), p);
        }
    }
}
