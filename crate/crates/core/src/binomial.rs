//! Pure-difference binomial ideals.
//!
//! A binomial `x^u - x^v` is stored as its two exponent vectors. S-pairs and
//! reductions of such binomials are again pure differences, so Buchberger
//! completion here is exponent arithmetic only: no coefficients are tracked.
//!
//! The ideal generated by the relation binomials of a presentation decides
//! its congruence: `u ~ v` iff `x^u - x^v` reduces to zero.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::congruence::{ExponentVector, Presentation};
use crate::error::{Error, ResourceError};
use crate::linalg::Lattice;

/// Default bound on S-pair reductions per completion.
pub const DEFAULT_WORK_LIMIT: usize = 100_000;

/// Graded reverse lexicographic order over a permutation of the variables.
///
/// `priority[0]` is the most significant variable and the last entry the
/// cheapest one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    priority: Vec<usize>,
}

impl MonomialOrder {
    /// `x_0 > x_1 > ... > x_{n-1}`.
    pub fn degrevlex(n: usize) -> Self {
        MonomialOrder { priority: (0..n).collect() }
    }

    /// Natural order with `var` moved to the cheapest position.
    pub fn degrevlex_with_last(n: usize, var: usize) -> Self {
        let mut priority: Vec<usize> = (0..n).filter(|&v| v != var).collect();
        priority.push(var);
        MonomialOrder { priority }
    }

    pub fn vars(&self) -> usize {
        self.priority.len()
    }

    pub fn cmp(&self, a: &ExponentVector, b: &ExponentVector) -> Ordering {
        let by_degree = a.degree().cmp(&b.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        let (a, b) = (a.counts(), b.counts());
        for &v in self.priority.iter().rev() {
            match a[v].cmp(&b[v]) {
                Ordering::Equal => continue,
                // a smaller power of the cheapest differing variable wins
                other => return other.reverse(),
            }
        }
        Ordering::Equal
    }
}

/// `x^lead - x^trail` with `lead > trail`, or the zero binomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Binomial {
    pub lead: ExponentVector,
    pub trail: ExponentVector,
}

impl Binomial {
    /// Orients `x^u - x^v`. Equal monomials give the canonical zero binomial.
    pub fn new(u: ExponentVector, v: ExponentVector, order: &MonomialOrder) -> Self {
        match order.cmp(&u, &v) {
            Ordering::Greater => Binomial { lead: u, trail: v },
            Ordering::Less => Binomial { lead: v, trail: u },
            Ordering::Equal => Binomial::zero(u.vars()),
        }
    }

    pub fn zero(n: usize) -> Self {
        Binomial { lead: ExponentVector::zeros(n), trail: ExponentVector::zeros(n) }
    }

    pub fn is_zero(&self) -> bool {
        self.lead == self.trail
    }

    pub fn is_homogeneous(&self) -> bool {
        self.lead.degree() == self.trail.degree()
    }

    pub fn degree(&self) -> u32 {
        self.lead.degree()
    }
}

/// Gröbner basis of a binomial ideal. After [`buchberger`] the elements are
/// the reduced basis, sorted by leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    elements: Vec<Binomial>,
}

impl GroebnerBasis {
    pub fn empty(order: MonomialOrder) -> Self {
        GroebnerBasis { order, elements: Vec::new() }
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Binomial] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn vars(&self) -> usize {
        self.order.vars()
    }

    /// Normal form of a monomial: rewrite `lead -> trail` until irreducible.
    pub fn normal_form(&self, m: &ExponentVector) -> ExponentVector {
        normal_form(&self.elements, m)
    }

    /// Normal form of a binomial; the larger monomial is rewritten first.
    pub fn reduce(&self, b: &Binomial) -> Binomial {
        reduce_binomial(&self.elements, b, &self.order)
    }

    /// Membership of `x^u - x^v` in the ideal.
    pub fn contains(&self, u: &ExponentVector, v: &ExponentVector) -> bool {
        u == v || self.normal_form(u) == self.normal_form(v)
    }

    pub fn contains_binomial(&self, b: &Binomial) -> bool {
        self.contains(&b.lead, &b.trail)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.elements.iter().all(Binomial::is_homogeneous)
    }

    /// Gröbner basis of the relation ideal of a presentation.
    pub fn of_presentation(p: &Presentation, work_limit: usize) -> Result<Self, ResourceError> {
        let order = MonomialOrder::degrevlex(p.generators());
        let gens = p
            .relations()
            .iter()
            .map(|(l, r)| Binomial::new(l.clone(), r.clone(), &order))
            .collect();
        buchberger(gens, &order, work_limit)
    }
}

fn normal_form(basis: &[Binomial], m: &ExponentVector) -> ExponentVector {
    let mut m = m.clone();
    'outer: loop {
        for g in basis {
            if g.lead.divides(&m) {
                m = m.rewrite(&g.lead, &g.trail);
                continue 'outer;
            }
        }
        return m;
    }
}

fn find_reducer<'a>(basis: &'a [Binomial], m: &ExponentVector) -> Option<&'a Binomial> {
    basis.iter().find(|g| g.lead.divides(m))
}

fn reduce_binomial(basis: &[Binomial], b: &Binomial, order: &MonomialOrder) -> Binomial {
    let mut cur = Binomial::new(b.lead.clone(), b.trail.clone(), order);
    while !cur.is_zero() {
        let next = if let Some(g) = find_reducer(basis, &cur.lead) {
            (cur.lead.rewrite(&g.lead, &g.trail), cur.trail)
        } else if let Some(g) = find_reducer(basis, &cur.trail) {
            (cur.lead, cur.trail.rewrite(&g.lead, &g.trail))
        } else {
            break;
        };
        cur = Binomial::new(next.0, next.1, order);
    }
    cur
}

fn s_pair(f: &Binomial, g: &Binomial, order: &MonomialOrder) -> Binomial {
    let l = f.lead.lcm(&g.lead);
    Binomial::new(l.rewrite(&f.lead, &f.trail), l.rewrite(&g.lead, &g.trail), order)
}

/// Reduced Gröbner basis of the ideal generated by `gens` under `order`.
///
/// Pairs are processed in order of increasing lcm degree; pairs with
/// coprime leading monomials are skipped. Each S-pair reduction counts
/// against `work_limit`.
pub fn buchberger(
    gens: Vec<Binomial>,
    order: &MonomialOrder,
    work_limit: usize,
) -> Result<GroebnerBasis, ResourceError> {
    let mut basis: Vec<Binomial> = Vec::new();
    for g in gens {
        let r = reduce_binomial(&basis, &g, order);
        if !r.is_zero() && !basis.contains(&r) {
            basis.push(r);
        }
    }
    let mut queue: BinaryHeap<Reverse<(u32, usize, usize)>> = BinaryHeap::new();
    let push_pair = |queue: &mut BinaryHeap<_>, basis: &[Binomial], i: usize, j: usize| {
        if !basis[i].lead.gcd(&basis[j].lead).is_zero() {
            let d = basis[i].lead.lcm(&basis[j].lead).degree();
            queue.push(Reverse((d, i, j)));
        }
    };
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(&mut queue, &basis, i, j);
        }
    }
    let mut work = 0usize;
    while let Some(Reverse((_, i, j))) = queue.pop() {
        work += 1;
        if work > work_limit {
            return Err(ResourceError::new("S-pair reductions", work as u128, work_limit as u128));
        }
        let s = s_pair(&basis[i], &basis[j], order);
        let r = reduce_binomial(&basis, &s, order);
        if r.is_zero() {
            continue;
        }
        basis.push(r);
        let k = basis.len() - 1;
        for i in 0..k {
            push_pair(&mut queue, &basis, i, k);
        }
    }
    Ok(GroebnerBasis { order: order.clone(), elements: interreduce(basis, order) })
}

/// Minimalizes leading monomials, then fully reduces every trail.
fn interreduce(mut basis: Vec<Binomial>, order: &MonomialOrder) -> Vec<Binomial> {
    basis.sort_by(|a, b| order.cmp(&a.lead, &b.lead).then_with(|| order.cmp(&a.trail, &b.trail)));
    let mut minimal: Vec<Binomial> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| h.lead.divides(&g.lead)) {
            minimal.push(g);
        }
    }
    let reduced: Vec<Binomial> = (0..minimal.len())
        .map(|k| {
            let trail = normal_form(&minimal, &minimal[k].trail);
            Binomial::new(minimal[k].lead.clone(), trail, order)
        })
        .collect();
    debug_assert!(reduced.iter().all(|b| !b.is_zero()));
    reduced
}

fn require_homogeneous(gens: &[Binomial]) -> Result<(), Error> {
    if gens.iter().all(Binomial::is_homogeneous) {
        Ok(())
    } else {
        Err(Error::Precondition("saturation requires a homogeneous ideal".into()))
    }
}

/// Reduced basis of `I : x_var^inf`.
///
/// Recomputes the basis in a reverse-lexicographic order where `x_var` is
/// cheapest; for homogeneous ideals, dividing each element by the largest
/// power of `x_var` common to both monomials then yields a basis of the
/// saturation.
pub fn saturate_by_variable(g: &GroebnerBasis, var: usize, work_limit: usize) -> Result<GroebnerBasis, Error> {
    require_homogeneous(&g.elements)?;
    let n = g.vars();
    let tilted = MonomialOrder::degrevlex_with_last(n, var);
    let gb = buchberger(g.elements.clone(), &tilted, work_limit)?;
    let divided = gb
        .elements
        .into_iter()
        .map(|b| {
            let k = b.lead.counts()[var].min(b.trail.counts()[var]);
            let mut common = ExponentVector::zeros(n);
            if k > 0 {
                let mut c = vec![0; n];
                c[var] = k;
                common = ExponentVector::new(c);
            }
            let zero = ExponentVector::zeros(n);
            Binomial::new(b.lead.rewrite(&common, &zero), b.trail.rewrite(&common, &zero), &g.order)
        })
        .collect();
    Ok(buchberger(divided, &g.order, work_limit)?)
}

/// Reduced basis of `I : (x_0 ... x_{n-1})^inf`, by per-variable
/// saturation until a full pass changes nothing.
pub fn saturate_all(g: &GroebnerBasis, work_limit: usize) -> Result<GroebnerBasis, Error> {
    let mut cur = g.clone();
    loop {
        let before = cur.clone();
        for v in 0..cur.vars() {
            cur = saturate_by_variable(&cur, v, work_limit)?;
        }
        if cur == before {
            return Ok(cur);
        }
    }
}

/// Reduced basis of the lattice ideal `I_L = {x^u - x^v : u - v in L}`.
///
/// Built from one binomial per lattice basis vector, then saturated by the
/// product of all variables. The lattice must lie in the degree-zero
/// hyperplane (true for every relation lattice).
pub fn lattice_ideal(l: &Lattice, order: &MonomialOrder, work_limit: usize) -> Result<GroebnerBasis, Error> {
    let gens: Vec<Binomial> = (0..l.rank())
        .map(|r| {
            let (pos, neg) = ExponentVector::split_signed(l.basis().row(r));
            Binomial::new(pos, neg, order)
        })
        .collect();
    require_homogeneous(&gens)?;
    let gb = buchberger(gens, order, work_limit)?;
    saturate_all(&gb, work_limit)
}

/// Equality of ideals via their reduced bases. On inequality, the witness
/// is the order-least element of `g2` outside `g1`, or failing that of `g1`
/// outside `g2`.
pub fn ideal_equal(g1: &GroebnerBasis, g2: &GroebnerBasis) -> (bool, Option<Binomial>) {
    assert_eq!(g1.order, g2.order, "ideal comparison needs a common order");
    if g1.elements == g2.elements {
        return (true, None);
    }
    let outside = |a: &GroebnerBasis, b: &GroebnerBasis| {
        a.elements.iter().find(|e| !b.contains_binomial(e)).cloned()
    };
    let witness = outside(g2, g1).or_else(|| outside(g1, g2));
    (false, witness)
}

/// Congruence of `u` and `v` in the semigroup presented by `p`.
pub fn semigroup_equal(
    p: &Presentation,
    u: &ExponentVector,
    v: &ExponentVector,
    work_limit: usize,
) -> Result<bool, ResourceError> {
    if u == v {
        return Ok(true);
    }
    Ok(GroebnerBasis::of_presentation(p, work_limit)?.contains(u, v))
}
