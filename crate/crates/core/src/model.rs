//! Interactions, conserved quantities, configurations and site graphs.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::LoadError;
use crate::linalg::{rational_kernel, IntMatrix};

/// An ordered pair of states `(s, t)`, a vertex of the pair graph on `S x S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StatePair(pub usize, pub usize);

impl StatePair {
    pub fn swapped(self) -> StatePair {
        StatePair(self.1, self.0)
    }

    fn index(self, n: usize) -> usize {
        self.0 * n + self.1
    }

    fn from_index(i: usize, n: usize) -> StatePair {
        StatePair(i / n, i % n)
    }
}

impl Serialize for Interaction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_file().serialize(s)
    }
}

/// A symmetric, loop-free graph on ordered pairs of states.
///
/// Edges are stored once, as `(a, b)` with `a < b`; the symmetric digraph
/// contains both orientations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interaction {
    n: usize,
    edges: BTreeSet<(StatePair, StatePair)>,
    adjacency: Vec<Vec<StatePair>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InteractionFile {
    states: usize,
    edges: Vec<[[usize; 2]; 2]>,
}

impl Interaction {
    /// Validates and symmetrizes an edge list. Duplicates and reversed
    /// entries collapse to one edge.
    pub fn new(
        n: usize,
        edges: impl IntoIterator<Item = (StatePair, StatePair)>,
    ) -> Result<Self, LoadError> {
        if n == 0 {
            return Err(LoadError::NoStates);
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for s in [a.0, a.1, b.0, b.1] {
                if s >= n {
                    return Err(LoadError::StateOutOfRange { state: s, states: n });
                }
            }
            if a == b {
                return Err(LoadError::LoopEdge(a.0, a.1));
            }
            set.insert(if a < b { (a, b) } else { (b, a) });
        }
        let mut adjacency = vec![Vec::new(); n * n];
        for &(a, b) in &set {
            adjacency[a.index(n)].push(b);
            adjacency[b.index(n)].push(a);
        }
        for list in &mut adjacency {
            list.sort();
        }
        Ok(Interaction { n, edges: set, adjacency })
    }

    /// Interaction with no edges on `n` states.
    pub fn empty(n: usize) -> Result<Self, LoadError> {
        Self::new(n, [])
    }

    /// Builds from `((s, t), (s2, t2))` tuples; handy in tests.
    pub fn from_tuples(
        n: usize,
        edges: &[((usize, usize), (usize, usize))],
    ) -> Result<Self, LoadError> {
        Self::new(n, edges.iter().map(|&((a, b), (c, d))| (StatePair(a, b), StatePair(c, d))))
    }

    pub fn states(&self) -> usize {
        self.n
    }

    /// Unordered edges, each as `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = (StatePair, StatePair)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: StatePair, b: StatePair) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.contains(&key)
    }

    /// Pairs `(s', t')` with `((s, t), (s', t'))` in the digraph.
    pub fn neighbors(&self, p: StatePair) -> &[StatePair] {
        &self.adjacency[p.index(self.n)]
    }

    /// Adds edges, returning a new interaction.
    pub fn with_edges(
        &self,
        extra: impl IntoIterator<Item = (StatePair, StatePair)>,
    ) -> Result<Self, LoadError> {
        Self::new(self.n, self.edges.iter().copied().chain(extra))
    }

    /// Applies a relabeling `s -> perm[s]` of states.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Self, LoadError> {
        assert_eq!(perm.len(), self.n);
        let map = |p: StatePair| StatePair(perm[p.0], perm[p.1]);
        Self::new(self.n, self.edges.iter().map(|&(a, b)| (map(a), map(b))))
    }

    /// Parses the canonical JSON form:
    /// `{"states": n, "edges": [[[s,t],[s2,t2]], ...]}`.
    pub fn from_json(text: &str) -> Result<Self, LoadError> {
        let file: InteractionFile =
            serde_json::from_str(text).map_err(|e| LoadError::Malformed(e.to_string()))?;
        Self::from_file(file)
    }

    fn from_file(file: InteractionFile) -> Result<Self, LoadError> {
        Self::new(
            file.states,
            file.edges.into_iter().map(|[[a, b], [c, d]]| (StatePair(a, b), StatePair(c, d))),
        )
    }

    /// Canonical JSON: edges sorted, each oriented from the smaller pair.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("interaction serializes")
    }

    fn to_file(&self) -> InteractionFile {
        InteractionFile {
            states: self.n,
            edges: self.edges.iter().map(|&(a, b)| [[a.0, a.1], [b.0, b.1]]).collect(),
        }
    }

    /// Connected component of `start` in the pair graph, by frontier
    /// expansion until no new pairs appear.
    pub fn pair_component(&self, start: StatePair) -> BTreeSet<StatePair> {
        assert!(start.0 < self.n && start.1 < self.n, "pair out of range");
        let mut seen = BTreeSet::from([start]);
        let mut frontier = vec![start];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for p in frontier {
                for &q in self.neighbors(p) {
                    if seen.insert(q) {
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
        seen
    }

    /// Component label for every pair, indexed by `s * n + t`.
    fn pair_labels(&self) -> Vec<usize> {
        let total = self.n * self.n;
        let mut label = vec![usize::MAX; total];
        let mut queue = VecDeque::new();
        for root in 0..total {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = root;
            queue.push_back(root);
            while let Some(i) = queue.pop_front() {
                for q in self.neighbors(StatePair::from_index(i, self.n)) {
                    let j = q.index(self.n);
                    if label[j] == usize::MAX {
                        label[j] = root;
                        queue.push_back(j);
                    }
                }
            }
        }
        label
    }

    /// Lexicographically least `(s, t)` whose swap `(t, s)` lies in a
    /// different pair component, or `None` when exchangeable.
    pub fn exchangeability_witness(&self) -> Option<StatePair> {
        let label = self.pair_labels();
        let n = self.n;
        (0..n)
            .flat_map(|s| (0..n).map(move |t| StatePair(s, t)))
            .find(|p| p.0 != p.1 && label[p.index(n)] != label[p.swapped().index(n)])
    }

    pub fn is_exchangeable(&self) -> bool {
        self.exchangeability_witness().is_none()
    }

    /// One row `e_s + e_t - e_s' - e_t'` per edge.
    pub fn relation_matrix(&self) -> IntMatrix {
        let rows = self
            .edges
            .iter()
            .map(|&(a, b)| relation_vector(self.n, a, b))
            .collect();
        IntMatrix::from_rows(self.n, rows)
    }

    /// Integer bases of the conserved quantities and of those vanishing at
    /// `base_point`.
    pub fn conserved_basis(&self, base_point: usize) -> ConservedBasis {
        assert!(base_point < self.n, "base point out of range");
        let relations = self.relation_matrix();
        let full = rational_kernel(&relations);
        let mut rows = relations.row_vecs();
        let mut pin = vec![BigInt::zero(); self.n];
        pin[base_point] = BigInt::from(1);
        rows.push(pin);
        let normalized = rational_kernel(&IntMatrix::from_rows(self.n, rows));
        let wrap = |m: IntMatrix| m.row_vecs().into_iter().map(ConservedQuantity::new).collect();
        ConservedBasis { full: wrap(full), normalized: wrap(normalized), base_point }
    }

    /// Lexicographically least `s < t` not separated by any conserved
    /// quantity, or `None` when separable.
    pub fn separability_witness(&self) -> Option<(usize, usize)> {
        self.conserved_basis(0).separability_witness()
    }

    pub fn is_separable(&self) -> bool {
        self.separability_witness().is_none()
    }
}

pub(crate) fn relation_vector(n: usize, a: StatePair, b: StatePair) -> Vec<BigInt> {
    let mut v = vec![0i64; n];
    v[a.0] += 1;
    v[a.1] += 1;
    v[b.0] -= 1;
    v[b.1] -= 1;
    v.into_iter().map(BigInt::from).collect()
}

/// An integer-valued function on states, one value per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ConservedQuantity {
    #[serde(serialize_with = "crate::serde_big::vec")]
    pub values: Vec<BigInt>,
}

impl ConservedQuantity {
    pub fn new(values: Vec<BigInt>) -> Self {
        ConservedQuantity { values }
    }

    pub fn from_i64(values: &[i64]) -> Self {
        Self::new(values.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn value(&self, state: usize) -> &BigInt {
        &self.values[state]
    }

    /// Checks `xi(s) + xi(t) = xi(s') + xi(t')` on every edge.
    pub fn is_conserved_by(&self, i: &Interaction) -> bool {
        let v = &self.values;
        i.edges().all(|(a, b)| &v[a.0] + &v[a.1] == &v[b.0] + &v[b.1])
    }

    /// Sum of `xi` over the sites of a configuration.
    pub fn conserved_sum(&self, eta: &Configuration) -> BigInt {
        eta.states().iter().map(|&s| &self.values[s]).sum()
    }
}

/// Free function form of [`ConservedQuantity::conserved_sum`].
pub fn conserved_sum(xi: &ConservedQuantity, eta: &Configuration) -> BigInt {
    xi.conserved_sum(eta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConservedBasis {
    pub full: Vec<ConservedQuantity>,
    /// Basis of the quantities with value 0 at `base_point`; together with
    /// the constants it spans `full`.
    pub normalized: Vec<ConservedQuantity>,
    pub base_point: usize,
}

impl ConservedBasis {
    pub fn states(&self) -> usize {
        self.full.first().map_or(0, |q| q.values.len())
    }

    pub fn separability_witness(&self) -> Option<(usize, usize)> {
        let n = self.states();
        (0..n)
            .flat_map(|s| (s + 1..n).map(move |t| (s, t)))
            .find(|&(s, t)| self.normalized.iter().all(|xi| xi.values[s] == xi.values[t]))
    }

    /// Conserved sums of `eta` for every full-basis quantity.
    pub fn signature(&self, eta: &Configuration) -> Vec<BigInt> {
        self.full.iter().map(|xi| xi.conserved_sum(eta)).collect()
    }

    /// Full basis as a matrix, one quantity per row.
    pub fn full_matrix(&self) -> IntMatrix {
        IntMatrix::from_rows(self.states(), self.full.iter().map(|q| q.values.clone()).collect())
    }
}

/// An assignment of states to sites `0..len`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Configuration {
    states: Vec<usize>,
}

impl Configuration {
    pub fn new(states: Vec<usize>, n: usize) -> Result<Self, LoadError> {
        if let Some(&s) = states.iter().find(|&&s| s >= n) {
            return Err(LoadError::StateOutOfRange { state: s, states: n });
        }
        Ok(Configuration { states })
    }

    /// Skips the range check; callers guarantee validity.
    pub(crate) fn from_states(states: Vec<usize>) -> Self {
        Configuration { states }
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn sites(&self) -> usize {
        self.states.len()
    }

    /// The configuration with the states at sites `x` and `y` exchanged.
    pub fn transposed(&self, x: usize, y: usize) -> Configuration {
        let mut states = self.states.clone();
        states.swap(x, y);
        Configuration { states }
    }
}

/// A finite connected graph on sites `0..size`, stored as unordered edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SiteGraph {
    size: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SiteGraph {
    pub fn new(size: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, LoadError> {
        if size == 0 {
            return Err(LoadError::InvalidGraph("no sites".into()));
        }
        let mut set = BTreeSet::new();
        for (x, y) in edges {
            if x >= size || y >= size {
                return Err(LoadError::InvalidGraph(format!("site out of range in ({x}, {y})")));
            }
            if x == y {
                return Err(LoadError::InvalidGraph(format!("loop at site {x}")));
            }
            set.insert((x.min(y), x.max(y)));
        }
        let g = SiteGraph { size, edges: set };
        if !g.connected() {
            return Err(LoadError::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn complete(size: usize) -> Self {
        let edges = (0..size).flat_map(|x| (x + 1..size).map(move |y| (x, y)));
        Self::new(size, edges).expect("complete graph is valid")
    }

    pub fn path(size: usize) -> Self {
        Self::new(size, (1..size).map(|x| (x - 1, x))).expect("path graph is valid")
    }

    /// Site 0 joined to every other site.
    pub fn star(size: usize) -> Self {
        Self::new(size, (1..size).map(|x| (0, x))).expect("star graph is valid")
    }

    pub fn cycle(size: usize) -> Self {
        let mut edges: Vec<_> = (1..size).map(|x| (x - 1, x)).collect();
        if size > 2 {
            edges.push((0, size - 1));
        }
        Self::new(size, edges).expect("cycle graph is valid")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == x {
                Some(b)
            } else if b == x {
                Some(a)
            } else {
                None
            }
        })
    }

    fn connected(&self) -> bool {
        let mut seen = vec![false; self.size];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in self.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Path of sites from `x` to `y` (breadth-first, shortest).
    pub fn path_between(&self, x: usize, y: usize) -> Vec<usize> {
        let mut prev = vec![usize::MAX; self.size];
        prev[x] = x;
        let mut queue = VecDeque::from([x]);
        while let Some(u) = queue.pop_front() {
            if u == y {
                break;
            }
            for v in self.neighbors(u) {
                if prev[v] == usize::MAX {
                    prev[v] = u;
                    queue.push_back(v);
                }
            }
        }
        let mut path = vec![y];
        while *path.last().unwrap() != x {
            path.push(prev[*path.last().unwrap()]);
        }
        path.reverse();
        path
    }
}
