use equigh::gh::{
    codistortion, distortion, function_pair_search, ggh_exact, ggh_oracle, map_distortion, GCorrespondence, GhBudget,
};
use equigh::harness::random_gspace;
use equigh::{Error, GMetricSpace, Q};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pair(seed: u64, m: usize, nx: usize, ny: usize) -> (GMetricSpace<Q>, GMetricSpace<Q>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (random_gspace(&mut rng, m, nx).unwrap(), random_gspace(&mut rng, m, ny).unwrap())
}

/// Half the least distortion over every invariant, surjective subset of `X × Y`.
fn brute_force(x: &GMetricSpace<Q>, y: &GMetricSpace<Q>) -> Q {
    let cells: Vec<(usize, usize)> = (0..x.len()).flat_map(|i| (0..y.len()).map(move |j| (i, j))).collect();
    assert!(cells.len() <= 16);
    let mut best: Option<Q> = None;
    for mask in 1u32..(1 << cells.len()) {
        let rel: Vec<(usize, usize)> = (0..cells.len()).filter(|k| mask >> k & 1 == 1).map(|k| cells[k]).collect();
        let onto_x = (0..x.len()).all(|i| rel.iter().any(|p| p.0 == i));
        let onto_y = (0..y.len()).all(|j| rel.iter().any(|p| p.1 == j));
        let invariant = x.group().elements().all(|g| {
            rel.iter().all(|&(i, j)| rel.contains(&(x.action().apply(g, i), y.action().apply(g, j))))
        });
        if !(onto_x && onto_y && invariant) {
            continue;
        }
        let mut dis = Q::from_integer(0);
        for &(a, b) in &rel {
            for &(c, d) in &rel {
                let gap = x.d(a, c) - y.d(b, d);
                let gap = if gap < Q::from_integer(0) { -gap } else { gap };
                if gap > dis {
                    dis = gap;
                }
            }
        }
        if best.map_or(true, |b| dis < b) {
            best = Some(dis);
        }
    }
    best.expect("the full product qualifies") / Q::from_integer(2)
}

#[test]
fn exact_matches_subset_enumeration() {
    for seed in 0..120u64 {
        let m = [1, 2, 3][seed as usize % 3];
        let (x, y) = pair(seed, m, 1 + seed as usize % 4, 1 + (seed as usize / 4) % 4);
        let want = brute_force(&x, &y);
        assert_eq!(ggh_exact(&x, &y, GhBudget::default()).unwrap().value, want, "seed {seed}");
        assert_eq!(ggh_oracle(&x, &y).unwrap().value, want, "seed {seed}");
    }
}

#[test]
fn correspondence_validation() {
    let (x, y) = pair(3, 1, 2, 2);
    assert!(matches!(GCorrespondence::new(&x, &y, vec![]), Err(Error::EmptyRelation)));
    assert!(matches!(GCorrespondence::new(&x, &y, vec![(0, 0)]), Err(Error::NotCorrespondence(_))));
    let z3x = equigh::samples::sample_space(&equigh::samples::SampleSpec::parse("paper:z3_threepoints").unwrap()).unwrap();
    let equigh::AnySpace::Exact(z3x) = z3x else { unreachable!() };
    // identity pairs alone are not closed under the rotation
    assert!(GCorrespondence::new(&z3x, &z3x, vec![(0, 0), (1, 1), (2, 0)]).is_err());
    let r = GCorrespondence::generated(&z3x, &z3x, &[(0, 1)]).unwrap();
    assert_eq!(r.pairs().len(), 3);
    assert_eq!(r.distortion(&z3x, &z3x), Q::from_integer(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distortion_of_function_pair_graph(seed in any::<u64>(), nx in 1usize..5, ny in 1usize..5, maps in any::<u64>()) {
        let (x, y) = pair(seed, 1, nx, ny);
        let phi: Vec<usize> = (0..nx).map(|i| ((maps >> (3 * i)) as usize) % ny).collect();
        let psi: Vec<usize> = (0..ny).map(|j| ((maps >> (3 * j + 20)) as usize) % nx).collect();
        let r = GCorrespondence::from_function_pair(&x, &y, &phi, &psi).unwrap();
        let want = map_distortion(&x, &y, &phi)
            .max(map_distortion(&y, &x, &psi))
            .max(codistortion(&x, &y, &phi, &psi));
        prop_assert_eq!(r.distortion(&x, &y), want);
        prop_assert_eq!(distortion(&x, &y, r.pairs()), want);
    }

    #[test]
    fn function_pairs_bound_the_exact_value(seed in any::<u64>(), m in 1usize..4, nx in 1usize..5, ny in 1usize..5) {
        let (x, y) = pair(seed, m, nx, ny);
        let exact = ggh_exact(&x, &y, GhBudget::default()).unwrap().value;
        if let Some(fp) = function_pair_search(&x, &y, GhBudget::default()).unwrap() {
            prop_assert!(fp.value >= exact);
            if m == 1 {
                prop_assert_eq!(fp.value, exact);
            }
        } else {
            prop_assert!(m > 1);
        }
    }

    #[test]
    fn metric_axioms(seed in any::<u64>(), m in 1usize..4, sizes in (1usize..5, 1usize..5, 1usize..5)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_gspace(&mut rng, m, sizes.0).unwrap();
        let y = random_gspace(&mut rng, m, sizes.1).unwrap();
        let w = random_gspace(&mut rng, m, sizes.2).unwrap();
        let d = |a: &GMetricSpace<Q>, b: &GMetricSpace<Q>| ggh_exact(a, b, GhBudget::default()).unwrap().value;
        prop_assert_eq!(d(&x, &x), Q::from_integer(0));
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &w) <= d(&x, &y) + d(&y, &w));
    }
}
