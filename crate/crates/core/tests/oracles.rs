//! Library results against independent brute-force computations.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use patforce::forcing::{forced_patterns_with, orp_spectrum};
use patforce::verify::{convergent_iff_single_fixed_point, enumerate_patterns, patterns_in_range};
use patforce::walks::CycleEnumerator;
use patforce::{eta, forced_patterns, forces, parse_pattern, Execution, Pattern, Rational};

fn int(x: i128) -> Rational {
    Rational::from_integer(x)
}

/// Cycles of period `q` of the connect-the-dots map, found by trying every
/// sequence of basic intervals and solving for the periodic point.
fn brute_force_forced(a: &Pattern, q: usize) -> BTreeSet<Pattern> {
    let n = a.period();
    let img = |i: usize| a.image(i) as i128;
    // piece on [i, i+1], 1-based
    let piece = |i: usize, x: Rational| {
        let s = img(i + 1) - img(i);
        int(img(i)) + int(s) * (x - int(i as i128))
    };
    let eval = |x: Rational| {
        let i = (x.floor().to_integer() as usize).clamp(1, n - 1);
        piece(i, x)
    };
    let mut out = BTreeSet::new();
    if q == n {
        out.insert(a.canonical());
    }
    if q == 1 {
        out.insert(Pattern::new(vec![1]).unwrap());
        return out;
    }
    let m = n - 1;
    let mut walk = vec![1usize; q];
    loop {
        // compose the pieces along `walk` as x ↦ slope·x + offset
        let (mut slope, mut offset) = (int(1), int(0));
        for &v in &walk {
            let s = int(img(v + 1) - img(v));
            let c = int(img(v)) - s * int(v as i128);
            slope *= s;
            offset = s * offset + c;
        }
        let candidates: Vec<Rational> = if slope == int(1) {
            let w = int(walk[0] as i128);
            vec![w + Rational::new(1, 3), w + Rational::new(2, 3)]
        } else {
            vec![offset / (int(1) - slope)]
        };
        for x0 in candidates {
            let mut orbit = vec![x0];
            let mut ok = true;
            let mut x = x0;
            for (k, &v) in walk.iter().enumerate() {
                if x < int(v as i128) || x > int(v as i128 + 1) || x.is_integer() {
                    ok = false;
                    break;
                }
                x = piece(v, x);
                if k + 1 < q {
                    orbit.push(x);
                }
            }
            ok &= x == x0 && orbit.iter().collect::<BTreeSet<_>>().len() == q;
            if !ok {
                continue;
            }
            for (t, &y) in orbit.iter().enumerate() {
                assert_eq!(eval(y), orbit[(t + 1) % q]);
            }
            let mut sorted = orbit.clone();
            sorted.sort();
            let rank = |y: &Rational| sorted.binary_search(y).unwrap();
            let mut images = vec![0; q];
            for t in 0..q {
                images[rank(&orbit[t])] = rank(&orbit[(t + 1) % q]) + 1;
            }
            out.insert(Pattern::new(images).unwrap().canonical());
        }
        // next sequence in lexicographic order
        let mut i = q;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if walk[i] < m {
                walk[i] += 1;
                for w in walk.iter_mut().skip(i + 1) {
                    *w = 1;
                }
                break;
            }
        }
    }
}

#[test]
fn enumerator_matches_brute_force() {
    for a in patterns_in_range(2, 5) {
        for q in 1..=7 {
            assert_eq!(
                forced_patterns(&a, q).unwrap(),
                brute_force_forced(&a, q),
                "{a} q={q}"
            );
        }
    }
    for a in [
        "4 7 6 5 3 2 1",
        "3 4 5 6 2 1",
        "4 3 5 6 1 2",
        "2 4 7 5 6 3 1",
    ] {
        let a = parse_pattern(a).unwrap();
        for q in [2, 3, 5, 6] {
            assert_eq!(
                forced_patterns(&a, q).unwrap(),
                brute_force_forced(&a, q),
                "{a} q={q}"
            );
        }
    }
}

#[test]
fn pair_restricted_search_is_complete() {
    for a in patterns_in_range(2, 6) {
        let e = CycleEnumerator::new(&a).unwrap();
        for q in 2..=9 {
            let mut all = BTreeSet::new();
            let _ = e.visit::<(), _>(q, |p| {
                all.insert(p.canonical());
                ControlFlow::Continue(())
            });
            for p in 1..=q / 2 {
                let want: BTreeSet<&Pattern> = all
                    .iter()
                    .filter(|x| x.over_rotation_pair().unwrap().p == p)
                    .collect();
                let mut got = BTreeSet::new();
                let _ = e.visit_pair::<(), _>(q, p, |x| {
                    if x.over_rotation_pair().unwrap().p == p {
                        got.insert(x.canonical());
                    }
                    ControlFlow::Continue(())
                });
                assert_eq!(want, got.iter().collect(), "{a} q={q} p={p}");
            }
        }
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn flip_class_counts() {
    // (n−1)! cyclic permutations; flip-symmetric ones are counted once
    for n in 2..=8 {
        let mut symmetric = 0;
        let mut total = 0;
        let mut perm: Vec<usize> = (1..=n).collect();
        loop {
            if let Ok(p) = Pattern::new(perm.clone()) {
                total += 1;
                if p.flip() == p {
                    symmetric += 1;
                }
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        assert_eq!(total, factorial(n - 1));
        assert_eq!(
            enumerate_patterns(n).len(),
            (total + symmetric) / 2,
            "n={n}"
        );
    }
    assert_eq!(enumerate_patterns(4).len(), 4);
}

fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[test]
fn convergence_and_fixed_points() {
    for a in patterns_in_range(2, 8) {
        assert!(convergent_iff_single_fixed_point(&a), "{a}");
    }
}

#[test]
fn forcing_is_a_partial_order() {
    let patterns = patterns_in_range(1, 6);
    let k = patterns.len();
    let rel: Vec<Vec<bool>> = patterns
        .iter()
        .map(|a| patterns.iter().map(|b| forces(a, b).unwrap()).collect())
        .collect();
    for i in 0..k {
        assert!(rel[i][i], "{} does not force itself", patterns[i]);
        for j in 0..k {
            if i != j {
                assert!(
                    !(rel[i][j] && rel[j][i]),
                    "{} and {}",
                    patterns[i],
                    patterns[j]
                );
            }
            for l in 0..k {
                if rel[i][j] && rel[j][l] {
                    assert!(rel[i][l], "{} {} {}", patterns[i], patterns[j], patterns[l]);
                }
            }
        }
    }
}

#[test]
fn no_division_spectrum_contains_eta() {
    for a in patterns_in_range(3, 7)
        .into_iter()
        .filter(|a| !a.has_division())
    {
        let spectrum = orp_spectrum(&a, 9).unwrap();
        assert!(spectrum.contains(&eta(a.period()).unwrap()), "{a}");
    }
}

#[test]
fn forced_sets_are_flip_invariant() {
    for a in patterns_in_range(3, 6) {
        for q in 2..=8 {
            let exec = Execution::Sequential;
            assert_eq!(
                forced_patterns_with(&a, q, exec).unwrap(),
                forced_patterns_with(&a.flip(), q, exec).unwrap(),
                "{a} q={q}"
            );
        }
    }
}
