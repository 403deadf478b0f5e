//! Configuration spaces and direct checks of the defining properties.
//!
//! Everything here works on explicit configurations `eta in S^X` and the move
//! graph `Phi_E`, independently of the semigroup machinery, so it can be
//! used to validate the algebraic decision.

use std::collections::{BTreeMap, HashSet, VecDeque};

use itertools::Itertools;
use num_rational::BigRational;
use petgraph::unionfind::UnionFind;
use rand::Rng;
use serde::Serialize;

use crate::binomial::GroebnerBasis;
use crate::congruence::{configuration_to_element, presentation_of};
use crate::error::{Error, ResourceError};
use crate::linalg::{rref, IntMatrix};
use crate::model::{ConservedQuantity, Configuration, Interaction, SiteGraph, StatePair};

/// Default bound on `|S|^|X|`.
pub const DEFAULT_SPACE_CAP: u128 = 1_000_000;

/// Largest state count for which [`equivalent`] enumerates bijections.
pub const PERMUTATION_CAP: usize = 8;

fn space_size(n: usize, sites: usize, cap: u128) -> Result<usize, ResourceError> {
    let size = (n as u128).checked_pow(sites as u32).unwrap_or(u128::MAX);
    if size > cap {
        return Err(ResourceError::new("configuration space", size, cap));
    }
    Ok(size as usize)
}

/// Configurations reachable from `eta` in one move.
pub fn moves(i: &Interaction, g: &SiteGraph, eta: &Configuration) -> Vec<Configuration> {
    let s = eta.states();
    let mut out = Vec::new();
    for (x, y) in g.edges() {
        for (x, y) in [(x, y), (y, x)] {
            for &StatePair(a, b) in i.neighbors(StatePair(s[x], s[y])) {
                let mut next = s.to_vec();
                next[x] = a;
                next[y] = b;
                out.push(Configuration::from_states(next));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The full configuration space `S^X` with its component structure.
#[derive(Debug, Clone)]
pub struct ConfigurationSpace {
    states: usize,
    graph: SiteGraph,
    labels: Vec<usize>,
}

impl ConfigurationSpace {
    pub fn graph(&self) -> &SiteGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Index of a configuration; site 0 is the most significant digit, so
    /// index order is lexicographic order.
    pub fn index_of(&self, eta: &Configuration) -> usize {
        assert_eq!(eta.sites(), self.graph.size(), "configuration on wrong site set");
        eta.states().iter().fold(0, |acc, &s| acc * self.states + s)
    }

    pub fn configuration(&self, mut index: usize) -> Configuration {
        let mut states = vec![0; self.graph.size()];
        for slot in states.iter_mut().rev() {
            *slot = index % self.states;
            index /= self.states;
        }
        Configuration::from_states(states)
    }

    /// Component representative for every configuration index.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn same_component(&self, a: &Configuration, b: &Configuration) -> bool {
        self.labels[self.index_of(a)] == self.labels[self.index_of(b)]
    }

    /// Components as sorted member lists, ordered by least member.
    pub fn components(&self) -> Vec<Vec<Configuration>> {
        let mut by_label: BTreeMap<usize, Vec<Configuration>> = BTreeMap::new();
        let mut order = Vec::new();
        for (k, &l) in self.labels.iter().enumerate() {
            let entry = by_label.entry(l).or_default();
            if entry.is_empty() {
                order.push(l);
            }
            entry.push(self.configuration(k));
        }
        order.into_iter().map(|l| by_label.remove(&l).unwrap()).collect()
    }
}

pub fn build_space(i: &Interaction, g: &SiteGraph, cap: u128) -> Result<ConfigurationSpace, ResourceError> {
    let n = i.states();
    let size = space_size(n, g.size(), cap)?;
    let mut space = ConfigurationSpace { states: n, graph: g.clone(), labels: Vec::new() };
    let mut uf = UnionFind::<usize>::new(size);
    let edges: Vec<(usize, usize)> = g.edges().flat_map(|(x, y)| [(x, y), (y, x)]).collect();
    let sites = g.size();
    // weight of each site in the index encoding
    let weight: Vec<usize> = (0..sites).map(|x| n.pow((sites - 1 - x) as u32)).collect();
    for k in 0..size {
        let eta = space.configuration(k);
        let s = eta.states();
        for &(x, y) in &edges {
            for &StatePair(a, b) in i.neighbors(StatePair(s[x], s[y])) {
                let j = k + a * weight[x] + b * weight[y] - s[x] * weight[x] - s[y] * weight[y];
                uf.union(k, j);
            }
        }
    }
    let labels = uf.into_labeling();
    // Relabel by least member for stable output.
    let mut least = vec![usize::MAX; size];
    for (k, &root) in labels.iter().enumerate() {
        if least[root] == usize::MAX {
            least[root] = k;
        }
    }
    space.labels = labels.iter().map(|&r| least[r]).collect();
    Ok(space)
}

/// Breadth-first search from `a` for `b` without enumerating all of `S^X`.
/// `cap` bounds the number of visited configurations.
pub fn reachable(
    i: &Interaction,
    g: &SiteGraph,
    a: &Configuration,
    b: &Configuration,
    cap: u128,
) -> Result<bool, ResourceError> {
    if a == b {
        return Ok(true);
    }
    let mut seen: HashSet<Configuration> = HashSet::from([a.clone()]);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(cur) = queue.pop_front() {
        for next in moves(i, g, &cur) {
            if &next == b {
                return Ok(true);
            }
            if seen.insert(next.clone()) {
                if seen.len() as u128 > cap {
                    return Err(ResourceError::new("component search", seen.len() as u128, cap));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// `eta` and `eta_prime` have equal conserved sums but lie in different
/// components of the configuration space on `graph`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub eta: Configuration,
    pub eta_prime: Configuration,
    pub graph: SiteGraph,
}

impl Serialize for SiteGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            sites: usize,
            edges: Vec<(usize, usize)>,
        }
        Repr { sites: self.size(), edges: self.edges().collect() }.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SearchOutcome {
    Found(Counterexample),
    /// No counterexample on graphs with up to `sites` sites.
    VerifiedUpTo { sites: usize },
}

/// First counterexample on complete graphs of size `1..=max_sites`.
///
/// Within a size, the reported pair is the lexicographically least
/// `(eta, eta')` with `eta < eta'`. Non-exchangeable inputs are always also
/// tried on two sites, where their swap witness appears.
pub fn search_counterexample(i: &Interaction, max_sites: usize, cap: u128) -> Result<SearchOutcome, Error> {
    if max_sites == 0 {
        return Err(Error::Precondition("max_sites must be at least 1".into()));
    }
    let basis = i.conserved_basis(0);
    let mut sizes: Vec<usize> = (1..=max_sites).collect();
    if max_sites < 2 && !i.is_exchangeable() {
        sizes.push(2);
    }
    for sites in sizes {
        let space = build_space(i, &SiteGraph::complete(sites), cap)?;
        let mut groups: BTreeMap<Vec<num_bigint::BigInt>, Vec<usize>> = BTreeMap::new();
        for k in 0..space.len() {
            groups.entry(basis.signature(&space.configuration(k))).or_default().push(k);
        }
        let labels = space.labels();
        let found = groups
            .values()
            .filter_map(|members| {
                let first = members[0];
                members.iter().find(|&&m| labels[m] != labels[first]).map(|&m| (first, m))
            })
            .min();
        if let Some((a, b)) = found {
            return Ok(SearchOutcome::Found(Counterexample {
                eta: space.configuration(a),
                eta_prime: space.configuration(b),
                graph: space.graph().clone(),
            }));
        }
    }
    Ok(SearchOutcome::VerifiedUpTo { sites: max_sites })
}

/// Random trials of: `eta` and `eta` with sites `x, y` transposed share a
/// component. Holds for every exchangeable interaction on a connected graph.
pub fn swap_reachability_check<R: Rng>(
    i: &Interaction,
    g: &SiteGraph,
    trials: usize,
    rng: &mut R,
    cap: u128,
) -> Result<bool, Error> {
    if !i.is_exchangeable() {
        return Err(Error::Precondition("swap reachability needs an exchangeable interaction".into()));
    }
    if g.size() == 1 {
        return Ok(true);
    }
    let space = build_space(i, g, cap)?;
    for _ in 0..trials {
        let eta = space.configuration(rng.random_range(0..space.len()));
        let x = rng.random_range(0..g.size());
        let y = rng.random_range(0..g.size());
        if !space.same_component(&eta, &eta.transposed(x, y)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustively checks that two configurations share a component exactly
/// when their multiset images are congruent in the semigroup.
pub fn lemma37_check(i: &Interaction, g: &SiteGraph, cap: u128, work_limit: usize) -> Result<bool, Error> {
    if !i.is_exchangeable() {
        return Err(Error::Precondition("component/congruence check needs an exchangeable interaction".into()));
    }
    let space = build_space(i, g, cap)?;
    let gb = GroebnerBasis::of_presentation(&presentation_of(i), work_limit)?;
    let n = i.states();
    let forms: Vec<_> = (0..space.len())
        .map(|k| gb.normal_form(&configuration_to_element(&space.configuration(k), n)))
        .collect();
    let labels = space.labels();
    for a in 0..space.len() {
        for b in a + 1..space.len() {
            if (labels[a] == labels[b]) != (forms[a] == forms[b]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Canonical echelon form of the span of conserved quantities.
fn conserved_span(i: &Interaction) -> Vec<Vec<BigRational>> {
    rref(&i.conserved_basis(0).full_matrix()).0
}

/// Searches for a bijection `perm: S -> S'` under which the conserved
/// quantities of `i2` pull back exactly onto those of `i1`. Returns the
/// lexicographically first such `perm`.
pub fn equivalent(i1: &Interaction, i2: &Interaction) -> Result<Option<Vec<usize>>, Error> {
    let n = i1.states();
    if n != i2.states() {
        return Ok(None);
    }
    if n > PERMUTATION_CAP {
        return Err(ResourceError::new("state permutations", n as u128, PERMUTATION_CAP as u128).into());
    }
    let target = conserved_span(i1);
    let other = i2.conserved_basis(0).full_matrix();
    if target.len() != other.rows() {
        return Ok(None);
    }
    for perm in (0..n).permutations(n) {
        let pulled: Vec<Vec<_>> = (0..other.rows())
            .map(|r| (0..n).map(|s| other.get(r, perm[s]).clone()).collect())
            .collect();
        if rref(&IntMatrix::from_rows(n, pulled)).0 == target {
            return Ok(Some(perm));
        }
    }
    Ok(None)
}

/// All edges between distinct pairs `(s, t)`, `(s', t')` on which every
/// given quantity takes equal sums.
pub fn maximal_interaction(n: usize, basis: &[ConservedQuantity]) -> Interaction {
    let pairs: Vec<StatePair> = (0..n).flat_map(|s| (0..n).map(move |t| StatePair(s, t))).collect();
    let sig = |p: StatePair| -> Vec<_> { basis.iter().map(|q| q.value(p.0) + q.value(p.1)).collect() };
    let sigs: Vec<_> = pairs.iter().map(|&p| sig(p)).collect();
    let mut edges = Vec::new();
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            if sigs[a] == sigs[b] {
                edges.push((pairs[a], pairs[b]));
            }
        }
    }
    Interaction::new(n, edges).expect("maximal interaction is well formed")
}
