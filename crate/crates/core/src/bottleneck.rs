//! Bottleneck distance between barcodes.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::persistence::{Bar, Barcode};
use crate::scalar::{max_scalar, Scalar};

/// `L∞` bottleneck distance. Infinite bars are matched by sorted births;
/// finite bars by the smallest threshold admitting a perfect matching, found
/// by binary search over the candidate costs.
pub fn bottleneck<S: Scalar>(a: &Barcode<S>, b: &Barcode<S>) -> Result<S> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch(a.degree, b.degree));
    }
    bottleneck_bars(&a.bars, &b.bars)
}

pub fn bottleneck_bars<S: Scalar>(a: &[Bar<S>], b: &[Bar<S>]) -> Result<S> {
    let births = |bars: &[Bar<S>]| {
        let mut v: Vec<S> = bars.iter().filter(|x| x.death.is_none()).map(|x| x.birth).collect();
        v.sort_by(S::total_cmp);
        v
    };
    let (ia, ib) = (births(a), births(b));
    if ia.len() != ib.len() {
        return Err(Error::InfiniteDistance(ia.len(), ib.len()));
    }
    let infinite_part = max_scalar(ia.iter().zip(&ib).map(|(&x, &y)| x.abs_diff(y))).unwrap_or_else(S::zero);
    let fa: Vec<(S, S)> = a.iter().filter_map(|x| x.death.map(|d| (x.birth, d))).collect();
    let fb: Vec<(S, S)> = b.iter().filter_map(|x| x.death.map(|d| (x.birth, d))).collect();
    Ok(infinite_part.max_of(finite_bottleneck(&fa, &fb)))
}

fn pair_cost<S: Scalar>(x: (S, S), y: (S, S)) -> S {
    x.0.abs_diff(y.0).max_of(x.1.abs_diff(y.1))
}

fn diag_cost<S: Scalar>(x: (S, S)) -> S {
    (x.1 - x.0).half()
}

fn finite_bottleneck<S: Scalar>(a: &[(S, S)], b: &[(S, S)]) -> S {
    let mut cands: Vec<S> = vec![S::zero()];
    cands.extend(a.iter().chain(b).map(|&x| diag_cost(x)));
    for &x in a {
        for &y in b {
            cands.push(pair_cost(x, y));
        }
    }
    cands.sort_by(S::total_cmp);
    cands.dedup_by(|x, y| x.total_cmp(y).is_eq());
    let (mut lo, mut hi) = (0, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(a, b, cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo]
}

/// Left: bars of `a` then one diagonal slot per bar of `b`; right: bars of
/// `b` then one diagonal slot per bar of `a`.
fn perfect_matching<S: Scalar>(a: &[(S, S)], b: &[(S, S)], t: S) -> bool {
    let (na, nb) = (a.len(), b.len());
    let n = na + nb;
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|u| {
            if u < na {
                let mut v: Vec<usize> = (0..nb).filter(|&j| pair_cost(a[u], b[j]) <= t).collect();
                if diag_cost(a[u]) <= t {
                    v.push(nb + u);
                }
                v
            } else {
                let j = u - na;
                let mut v = Vec::new();
                if diag_cost(b[j]) <= t {
                    v.push(j);
                }
                v.extend(nb..nb + na);
                v
            }
        })
        .collect();
    hopcroft_karp(&adj, n) == n
}

/// Maximum matching size in a bipartite graph with `n` right vertices.
pub fn hopcroft_karp(adj: &[Vec<usize>], n_right: usize) -> usize {
    const NONE: usize = usize::MAX;
    let n_left = adj.len();
    let mut match_l = vec![NONE; n_left];
    let mut match_r = vec![NONE; n_right];
    let mut dist = vec![0usize; n_left];
    let mut size = 0;
    loop {
        let mut queue = VecDeque::new();
        for u in 0..n_left {
            if match_l[u] == NONE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == NONE {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return size;
        }
        fn augment(
            u: usize,
            adj: &[Vec<usize>],
            match_l: &mut [usize],
            match_r: &mut [usize],
            dist: &mut [usize],
        ) -> bool {
            for &v in &adj[u] {
                let w = match_r[v];
                if w == usize::MAX || (dist[w] == dist[u] + 1 && augment(w, adj, match_l, match_r, dist)) {
                    match_l[u] = v;
                    match_r[v] = u;
                    return true;
                }
            }
            dist[u] = usize::MAX;
            false
        }
        for u in 0..n_left {
            if match_l[u] == NONE && augment(u, adj, &mut match_l, &mut match_r, &mut dist) {
                size += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Q;
    use crate::vr::Label;

    fn code(bars: &[(i64, Option<i64>)]) -> Barcode<Q> {
        let bars = bars
            .iter()
            .map(|&(b, d)| Bar { birth: Q::from_integer(b), death: d.map(Q::from_integer) })
            .collect();
        Barcode::new(0, 2, Label::Full, bars)
    }

    #[test]
    fn small_cases() {
        let a = code(&[(0, Some(1))]);
        assert_eq!(bottleneck(&a, &a).unwrap(), Q::from_integer(0));
        assert_eq!(bottleneck(&a, &code(&[])).unwrap(), Q::new(1, 2));
        assert_eq!(bottleneck(&code(&[(0, Some(2))]), &a).unwrap(), Q::from_integer(1));
        let three = code(&[(0, Some(1)), (0, Some(1)), (0, Some(1))]);
        let two = code(&[(0, Some(1)), (0, Some(1))]);
        assert_eq!(bottleneck(&three, &two).unwrap(), Q::new(1, 2));
    }

    #[test]
    fn infinite_bars() {
        assert_eq!(bottleneck(&code(&[(0, None)]), &code(&[(2, None)])).unwrap(), Q::from_integer(2));
        assert_eq!(bottleneck(&code(&[(0, None)]), &code(&[])), Err(Error::InfiniteDistance(1, 0)));
    }
}
