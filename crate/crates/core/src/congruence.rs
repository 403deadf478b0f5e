//! The commutative semigroup presented by an interaction.
//!
//! Generators are the states; every edge `((s, t), (s', t'))` contributes the
//! relation `a_s a_t = a_s' a_t'`. Elements are encoded as exponent vectors,
//! which is only faithful once the interaction is exchangeable (otherwise the
//! word-level semigroup is not commutative).
//!
//! [`congruence_classes`] enumerates a degree slice and connects vectors by
//! single rewrite steps. It is deliberately naive and serves as the oracle
//! for the Gröbner route in [`crate::binomial`].

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, ResourceError};
use crate::linalg::IntMatrix;
use crate::model::{Configuration, Interaction};

/// Default bound on the number of enumerated vectors per degree slice.
pub const DEFAULT_DEGREE_CAP: u128 = 1_000_000;

/// Multiplicities of the generators, i.e. a monomial `x^u`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(counts: Vec<u32>) -> Self {
        ExponentVector(counts)
    }

    pub fn zeros(n: usize) -> Self {
        ExponentVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        ExponentVector(v)
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, if nonnegative.
    pub fn checked_sub(&self, other: &ExponentVector) -> Option<ExponentVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Componentwise `self <= other`, i.e. `x^self` divides `x^other`.
    pub fn divides(&self, other: &ExponentVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn lcm(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn gcd(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// `x^{self - other + replacement}`; the caller guarantees `other | self`.
    pub(crate) fn rewrite(&self, other: &ExponentVector, replacement: &ExponentVector) -> ExponentVector {
        ExponentVector(
            self.0
                .iter()
                .zip(&other.0)
                .zip(&replacement.0)
                .map(|((a, b), c)| a - b + c)
                .collect(),
        )
    }

    /// `self - other` as an integer vector.
    pub fn difference(&self, other: &ExponentVector) -> Vec<BigInt> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| BigInt::from(a) - BigInt::from(b))
            .collect()
    }

    /// Splits an integer vector into its positive and negative parts.
    pub fn split_signed(v: &[BigInt]) -> (ExponentVector, ExponentVector) {
        use num_traits::{Signed, ToPrimitive};
        let part = |keep_positive: bool| {
            ExponentVector(
                v.iter()
                    .map(|x| {
                        let keep = if keep_positive { x.is_positive() } else { x.is_negative() };
                        if keep {
                            x.abs().to_u32().expect("exponent fits in u32")
                        } else {
                            0
                        }
                    })
                    .collect(),
            )
        };
        (part(true), part(false))
    }

    /// Pairing with an integer weight vector.
    pub fn dot(&self, weights: &[BigInt]) -> BigInt {
        self.0.iter().zip(weights).map(|(&c, w)| BigInt::from(c) * w).sum()
    }
}

impl fmt::Debug for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Semigroup length (the number of generators in any expression).
pub fn length(u: &ExponentVector) -> u32 {
    u.degree()
}

/// Degree-2 relations `lhs = rhs`, one per unordered edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    n: usize,
    relations: Vec<(ExponentVector, ExponentVector)>,
}

impl Presentation {
    pub fn new(n: usize, relations: Vec<(ExponentVector, ExponentVector)>) -> Self {
        for (l, r) in &relations {
            assert!(l.vars() == n && r.vars() == n, "relation arity mismatch");
        }
        Presentation { n, relations }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[(ExponentVector, ExponentVector)] {
        &self.relations
    }

    /// `lhs - rhs` for every relation, as matrix rows.
    pub fn relation_vectors(&self) -> IntMatrix {
        IntMatrix::from_rows(self.n, self.relations.iter().map(|(l, r)| l.difference(r)).collect())
    }
}

pub fn presentation_of(i: &Interaction) -> Presentation {
    let n = i.states();
    let pair = |s: usize, t: usize| {
        let mut v = vec![0u32; n];
        v[s] += 1;
        v[t] += 1;
        ExponentVector(v)
    };
    let relations = i.edges().map(|(a, b)| (pair(a.0, a.1), pair(b.0, b.1))).collect();
    Presentation { n, relations }
}

/// Exchangeability is exactly the condition under which the word-level
/// semigroup is commutative, so this is the gate for the exponent-vector
/// encoding.
pub fn is_commutative_consistent(i: &Interaction) -> bool {
    i.is_exchangeable()
}

/// Number of exponent vectors of degree `d` in `n` variables, `C(n+d-1, d)`.
pub fn slice_size(n: usize, d: u32) -> u128 {
    if n == 0 {
        return u128::from(d == 0);
    }
    let mut acc: u128 = 1;
    for k in 1..=u128::from(d) {
        acc = acc.saturating_mul(n as u128 - 1 + k) / k;
    }
    acc
}

/// All exponent vectors of degree `d`, in lexicographic order.
pub fn vectors_of_degree(n: usize, d: u32) -> Vec<ExponentVector> {
    fn go(n: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExponentVector>) {
        if prefix.len() + 1 == n {
            prefix.push(left);
            out.push(ExponentVector(prefix.clone()));
            prefix.pop();
            return;
        }
        for c in 0..=left {
            prefix.push(c);
            go(n, left - c, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Partition of a degree slice into congruence classes.
#[derive(Debug, Clone)]
pub struct CongruenceClasses {
    degree: u32,
    classes: Vec<Vec<ExponentVector>>,
    class_of: HashMap<ExponentVector, usize>,
}

impl CongruenceClasses {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Classes with members sorted, ordered by their least member.
    pub fn classes(&self) -> &[Vec<ExponentVector>] {
        &self.classes
    }

    pub fn class_index(&self, u: &ExponentVector) -> Option<usize> {
        self.class_of.get(u).copied()
    }

    pub fn same_class(&self, u: &ExponentVector, v: &ExponentVector) -> bool {
        match (self.class_index(u), self.class_index(v)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Connected components of the single-step rewrite graph on degree-`d`
/// vectors, with each relation applied in both directions.
pub fn congruence_classes(p: &Presentation, d: u32, cap: u128) -> Result<CongruenceClasses, ResourceError> {
    let size = slice_size(p.n, d);
    if size > cap {
        return Err(ResourceError::new("congruence slice enumeration", size, cap));
    }
    let vectors = vectors_of_degree(p.n, d);
    let index: HashMap<ExponentVector, usize> =
        vectors.iter().cloned().enumerate().map(|(k, v)| (v, k)).collect();
    let mut uf = UnionFind::<usize>::new(vectors.len());
    for (k, u) in vectors.iter().enumerate() {
        for (l, r) in &p.relations {
            for (from, to) in [(l, r), (r, l)] {
                if from.divides(u) {
                    let v = u.rewrite(from, to);
                    uf.union(k, index[&v]);
                }
            }
        }
    }
    let labels = uf.into_labeling();
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut classes: Vec<Vec<ExponentVector>> = Vec::new();
    for (k, u) in vectors.iter().enumerate() {
        let c = *by_root.entry(labels[k]).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(u.clone());
    }
    // Vectors were visited in lexicographic order, so every class is sorted
    // and classes are ordered by their least member.
    let class_of = classes
        .iter()
        .enumerate()
        .flat_map(|(c, members)| members.iter().map(move |u| (u.clone(), c)))
        .collect();
    Ok(CongruenceClasses { degree: d, classes, class_of })
}

/// Congruence by brute-force enumeration of the degree slice.
pub fn congruent(p: &Presentation, u: &ExponentVector, v: &ExponentVector, cap: u128) -> Result<bool, ResourceError> {
    if u == v {
        return Ok(true);
    }
    if length(u) != length(v) {
        return Ok(false);
    }
    Ok(congruence_classes(p, length(u), cap)?.same_class(u, v))
}

/// Multiset image of a configuration: `counts[s]` = sites in state `s`.
pub fn configuration_to_element(eta: &Configuration, n: usize) -> ExponentVector {
    let mut counts = vec![0u32; n];
    for &s in eta.states() {
        counts[s] += 1;
    }
    ExponentVector(counts)
}

/// Canonical configuration with sites sorted by state.
pub fn element_to_configuration(u: &ExponentVector) -> Result<Configuration, Error> {
    if u.degree() == 0 {
        return Err(Error::Precondition("element of length 0 has no configuration".into()));
    }
    let states = u
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(s, &c)| std::iter::repeat_n(s, c as usize))
        .collect();
    Ok(Configuration::from_states(states))
}
