//! Shared generators and brute-force oracles for the integration tests.
//!
//! The oracles here deliberately avoid the library's own algorithms: they
//! work on plain vectors and hash sets so they can check the library
//! independently.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use irrq::verification::maximal_interaction;
use irrq::{ConservedQuantity, Interaction, StatePair};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn all_pairs(n: usize) -> Vec<StatePair> {
    (0..n).flat_map(|s| (0..n).map(move |t| StatePair(s, t))).collect()
}

pub fn all_pair_edges(n: usize) -> Vec<(StatePair, StatePair)> {
    let pairs = all_pairs(n);
    let mut out = Vec::new();
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            out.push((pairs[a], pairs[b]));
        }
    }
    out
}

pub fn swaps(n: usize) -> Vec<(StatePair, StatePair)> {
    (0..n).flat_map(|s| (s + 1..n).map(move |t| (StatePair(s, t), StatePair(t, s)))).collect()
}

/// Every interaction on two states: all subsets of the six edges of the
/// pair graph on four vertices.
pub fn all_n2() -> Vec<Interaction> {
    let edges = all_pair_edges(2);
    assert_eq!(edges.len(), 6);
    (0u32..1 << edges.len())
        .map(|mask| {
            let chosen = (0..edges.len()).filter(|k| mask >> k & 1 == 1).map(|k| edges[k]);
            Interaction::new(2, chosen).unwrap()
        })
        .collect()
}

/// Random interaction on `n` states. Three families, equally likely:
/// a uniform subset of all pair edges; all swaps plus a uniform subset; and
/// all swaps plus a subset of the maximal interaction of a random integer
/// quantity (so that a nontrivial quantity is conserved).
pub fn random_interaction<R: Rng>(n: usize, rng: &mut R) -> Interaction {
    let all = all_pair_edges(n);
    let density = rng.random_range(0.05..0.5);
    let pick = |rng: &mut R, from: &[(StatePair, StatePair)], p: f64| -> Vec<(StatePair, StatePair)> {
        from.iter().copied().filter(|_| rng.random_bool(p)).collect()
    };
    match rng.random_range(0..3) {
        0 => Interaction::new(n, pick(rng, &all, density)).unwrap(),
        1 => {
            let extra = pick(rng, &all, density * 0.5);
            Interaction::new(n, swaps(n).into_iter().chain(extra)).unwrap()
        }
        _ => {
            let xi = random_quantity(n, rng, 4);
            let max = maximal_interaction(n, &[xi]);
            let keep = rng.random_range(0.3..1.0);
            let extra = pick(rng, &max.edges().collect::<Vec<_>>(), keep);
            Interaction::new(n, swaps(n).into_iter().chain(extra)).unwrap()
        }
    }
}

pub fn random_quantity<R: Rng>(n: usize, rng: &mut R, max: i64) -> ConservedQuantity {
    ConservedQuantity::from_i64(&(0..n).map(|_| rng.random_range(0..=max)).collect::<Vec<_>>())
}

/// A quantity taking `n` distinct values in `0..=max`.
pub fn random_injective_quantity<R: Rng>(n: usize, rng: &mut R, max: i64) -> ConservedQuantity {
    let mut values: Vec<i64> = (0..=max).collect();
    values.shuffle(rng);
    values.truncate(n);
    ConservedQuantity::from_i64(&values)
}

/// All swaps plus a random subset of the maximal interaction of an
/// injective quantity: always exchangeable and separable.
pub fn random_exchangeable_separable<R: Rng>(n: usize, rng: &mut R, max: i64) -> Interaction {
    let xi = random_injective_quantity(n, rng, max);
    let edges: Vec<_> = maximal_interaction(n, &[xi]).edges().collect();
    let keep = rng.random_range(0.2..0.9);
    let chosen = edges.into_iter().filter(|_| rng.random_bool(keep));
    Interaction::new(n, swaps(n).into_iter().chain(chosen)).unwrap()
}

pub fn sample<R: Rng>(n: usize, count: usize, rng: &mut R) -> Vec<Interaction> {
    (0..count).map(|_| random_interaction(n, rng)).collect()
}

/// Exponent vectors of total degree `d` in `n` variables, lexicographically.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for first in 0..=d {
        for mut rest in monomials(n - 1, d - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Rewriting oracle for the commutative semigroup: breadth-first search
/// from `u` applying every relation `e_s + e_t <-> e_s' + e_t'` in both
/// directions wherever it fits.
pub fn multiset_class(i: &Interaction, u: &[u32]) -> HashSet<Vec<u32>> {
    let rules: Vec<(Vec<u32>, Vec<u32>)> = i
        .edges()
        .flat_map(|(a, b)| {
            let n = i.states();
            let vec_of = |p: StatePair| {
                let mut v = vec![0u32; n];
                v[p.0] += 1;
                v[p.1] += 1;
                v
            };
            [(vec_of(a), vec_of(b)), (vec_of(b), vec_of(a))]
        })
        .collect();
    let mut seen = HashSet::from([u.to_vec()]);
    let mut queue = VecDeque::from([u.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        for (from, to) in &rules {
            if cur.iter().zip(from).all(|(c, f)| c >= f) {
                let next: Vec<u32> = cur.iter().zip(from).zip(to).map(|((c, f), t)| c - f + t).collect();
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// Component labels of the configuration space, by breadth-first search
/// over explicit state vectors. Configurations are listed in
/// lexicographic order; labels are component indices in discovery order.
pub fn brute_components(i: &Interaction, sites: usize, edges: &[(usize, usize)]) -> (Vec<Vec<usize>>, Vec<usize>) {
    let n = i.states();
    let mut configs: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..sites {
        configs = configs
            .into_iter()
            .flat_map(|c| (0..n).map(move |s| {
                let mut c = c.clone();
                c.push(s);
                c
            }))
            .collect();
    }
    let index: HashMap<Vec<usize>, usize> = configs.iter().cloned().enumerate().map(|(k, c)| (c, k)).collect();
    let mut label = vec![usize::MAX; configs.len()];
    let mut next_label = 0;
    for start in 0..configs.len() {
        if label[start] != usize::MAX {
            continue;
        }
        label[start] = next_label;
        let mut queue = VecDeque::from([start]);
        while let Some(k) = queue.pop_front() {
            let eta = &configs[k];
            for &(x, y) in edges {
                for (x, y) in [(x, y), (y, x)] {
                    for nb in i.neighbors(StatePair(eta[x], eta[y])) {
                        let mut e2 = eta.clone();
                        e2[x] = nb.0;
                        e2[y] = nb.1;
                        let j = index[&e2];
                        if label[j] == usize::MAX {
                            label[j] = next_label;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        next_label += 1;
    }
    (configs, label)
}

/// The partition induced by a labelling, as a set of sorted blocks.
pub fn partition(labels: &[usize]) -> BTreeSet<Vec<usize>> {
    let mut blocks: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, &l) in labels.iter().enumerate() {
        blocks.entry(l).or_default().push(k);
    }
    blocks.into_values().collect()
}

/// Checks that `xi` is constant-free conserved by brute force over all
/// edges; used to validate kernels.
pub fn conserves(i: &Interaction, xi: &[i64]) -> bool {
    i.edges().all(|(a, b)| xi[a.0] + xi[a.1] == xi[b.0] + xi[b.1])
}
