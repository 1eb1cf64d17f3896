use equigh::bottleneck::bottleneck;
use equigh::field::{default_prime, PrimeField};
use equigh::harness::random_gspace;
use equigh::interleaving::m_multiplicity;
use equigh::persistence::{persist, Bar, Barcode};
use equigh::vr::{build_vr, full_chains, isotypic_project, Label, DEFAULT_MAX_SIMPLICES};
use equigh::{GMetricSpace, Q};
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space(seed: u64, m: usize, n: usize) -> GMetricSpace<Q> {
    random_gspace(&mut ChaCha8Rng::seed_from_u64(seed), m, n).unwrap()
}

/// Rank over F2 of a set of columns given as bitmasks.
fn rank_f2(mut cols: Vec<u128>) -> usize {
    let mut rank = 0;
    while let Some(c) = cols.pop() {
        if c == 0 {
            continue;
        }
        rank += 1;
        let pivot = 127 - c.leading_zeros();
        for other in cols.iter_mut() {
            if *other >> pivot & 1 == 1 {
                *other ^= c;
            }
        }
    }
    rank
}

/// Betti numbers of the Rips complex at scale `t`, from scratch.
fn betti_f2(x: &GMetricSpace<Q>, t: Q, top: usize) -> Vec<usize> {
    let n = x.len();
    let mut by_dim: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top + 2];
    for mask in 1u32..(1 << n) {
        let v: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if v.len() > top + 2 {
            continue;
        }
        if v.iter().all(|&a| v.iter().all(|&b| x.d(a, b) <= t)) {
            by_dim[v.len() - 1].push(v);
        }
    }
    let rank_boundary = |k: usize| -> usize {
        if k == 0 || k > top + 1 {
            return 0;
        }
        let faces = &by_dim[k - 1];
        let cols = by_dim[k]
            .iter()
            .map(|s| {
                (0..s.len()).fold(0u128, |acc, drop| {
                    let face: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != drop).map(|(_, &v)| v).collect();
                    acc | 1u128 << faces.iter().position(|f| *f == face).unwrap()
                })
            })
            .collect();
        rank_f2(cols)
    };
    (0..=top).map(|k| by_dim[k].len() - rank_boundary(k) - rank_boundary(k + 1)).collect()
}

#[test]
fn reduction_matches_betti_curves() {
    for seed in 0..40u64 {
        let x = space(seed, 1, 3 + seed as usize % 5);
        let complex = build_vr(&x, 3, None, DEFAULT_MAX_SIMPLICES).unwrap();
        assert!(complex.len() <= 300);
        let codes = persist(&full_chains(&complex, PrimeField::new(2).unwrap()), &[0, 1, 2]).unwrap();
        let mut scales: Vec<Q> = complex.simplices().iter().map(|s| s.value).collect();
        scales.dedup();
        for t in scales {
            let want = betti_f2(&x, t, 2);
            let got: Vec<usize> = codes.iter().map(|c| c.rank_at(t)).collect();
            assert_eq!(got, want, "seed {seed} at {t}");
        }
    }
}

#[test]
fn eigenspaces_split_homology() {
    for seed in 0..30u64 {
        let m = 2 + seed as usize % 2;
        let x = space(seed, m, 2 + seed as usize % 5);
        let complex = build_vr(&x, 2, None, DEFAULT_MAX_SIMPLICES).unwrap();
        let field = PrimeField::new(default_prime(m)).unwrap();
        let full = persist(&full_chains(&complex, field), &[0, 1]).unwrap();
        let parts: Vec<_> = (0..m)
            .map(|lambda| {
                let chains = isotypic_project(&complex, 1, lambda, field).unwrap();
                assert!(chains.boundary_squares_to_zero() && chains.is_filtered());
                assert_eq!(chains.label, Label::Eigen { g: 1, lambda });
                persist(&chains, &[0, 1]).unwrap()
            })
            .collect();
        for s in complex.simplices() {
            for k in 0..2 {
                let sum: usize = parts.iter().map(|p| p[k].rank_at(s.value)).sum();
                assert_eq!(sum, full[k].rank_at(s.value), "seed {seed}");
            }
        }
    }
}

fn code(bars: &[(i64, i64)]) -> Barcode<Q> {
    let bars = bars.iter().map(|&(b, l)| Bar::finite(Q::new(b, 2), Q::new(b + l, 2))).collect();
    Barcode::new(0, 2, Label::Full, bars)
}

/// Bottleneck by trying every matching, diagonal slots included.
fn brute_bottleneck(a: &[Bar<Q>], b: &[Bar<Q>]) -> Q {
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let half = |bar: &Bar<Q>| (bar.death.unwrap() - bar.birth) / Q::from_integer(2);
    let cost = |i: usize, j: usize| -> Q {
        match (i < na, j < nb) {
            (true, true) => {
                let db = (a[i].birth - b[j].birth).abs();
                let dd = (a[i].death.unwrap() - b[j].death.unwrap()).abs();
                db.max(dd)
            }
            (true, false) => half(&a[i]),
            (false, true) => half(&b[j]),
            (false, false) => Q::from_integer(0),
        }
    };
    fn go(i: usize, n: usize, used: &mut Vec<bool>, cur: Q, best: &mut Q, cost: &dyn Fn(usize, usize) -> Q) {
        if cur >= *best {
            return;
        }
        if i == n {
            *best = cur;
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                go(i + 1, n, used, cur.max(cost(i, j)), best, cost);
                used[j] = false;
            }
        }
    }
    let mut best = Q::from_integer(1_000_000);
    go(0, n, &mut vec![false; n], Q::from_integer(0), &mut best, &cost);
    best
}

fn arb_code() -> impl Strategy<Value = Barcode<Q>> {
    prop::collection::vec((0i64..6, 1i64..6), 0..4).prop_map(|v| code(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn bottleneck_matches_brute_force(a in arb_code(), b in arb_code()) {
        prop_assert_eq!(bottleneck(&a, &b).unwrap(), brute_bottleneck(&a.bars, &b.bars));
    }

    #[test]
    fn bottleneck_is_a_metric(a in arb_code(), b in arb_code(), c in arb_code()) {
        let d = |x: &Barcode<Q>, y: &Barcode<Q>| bottleneck(x, y).unwrap();
        prop_assert_eq!(d(&a, &a), Q::from_integer(0));
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
    }

    #[test]
    fn multiplicities_are_nonincreasing(a in arb_code()) {
        for j in 1..5 {
            prop_assert!(m_multiplicity(&a, j + 1) <= m_multiplicity(&a, j));
        }
    }
}
