//! The end-to-end decision of irreducible quantification.
//!
//! Stages, in order:
//!
//! 1. exchangeability of the pair graph;
//! 2. separability by the conserved quantities;
//! 3. torsion of `Z^n / L` for the relation lattice `L`, via Smith form;
//! 4. equality of the relation ideal `I_sigma` with the lattice ideal of
//!    the saturation `L_sat`.
//!
//! An exchangeable, separable interaction is irreducibly quantified exactly
//! when stage 4 reports equality. If stage 1 or 2 fails, later stages are
//! skipped and left as `None` in the [`Verdict`]. When stage 4 fails, an
//! element of `I_{L_sat}` outside `I_sigma` is turned into an explicit pair
//! of configurations and re-verified on the configuration space.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::binomial::{lattice_ideal, saturate_all, Binomial, GroebnerBasis, DEFAULT_WORK_LIMIT};
use crate::congruence::{element_to_configuration, presentation_of};
use crate::error::{Error, Result};
use crate::linalg::{is_torsion_free_quotient, saturate, smith_normal_form, Lattice};
use crate::model::{ConservedBasis, ConservedQuantity, Interaction, SiteGraph, StatePair};
use crate::verification::{reachable, Counterexample, DEFAULT_SPACE_CAP};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideOptions {
    pub base_point: usize,
    /// S-pair reductions allowed per Gröbner completion.
    pub work_limit: usize,
    /// Bound on configurations visited when re-verifying a counterexample.
    pub space_cap: u128,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { base_point: 0, work_limit: DEFAULT_WORK_LIMIT, space_cap: DEFAULT_SPACE_CAP }
    }
}

/// Outcome of [`decide`], with certificates for every stage that ran.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub exchangeable: bool,
    pub exchangeable_witness: Option<StatePair>,
    pub separable: Option<bool>,
    pub separable_witness: Option<(usize, usize)>,
    pub conserved: Option<ConservedBasis>,
    pub torsion_free: Option<bool>,
    #[serde(serialize_with = "serialize_divisors")]
    pub elementary_divisors: Option<Vec<BigInt>>,
    /// `I_sigma` equals its saturation by all variables.
    pub cancellative: Option<bool>,
    pub lattice_ideal_equal: Option<bool>,
    pub lattice_ideal_witness: Option<Binomial>,
    pub irreducibly_quantified: bool,
    pub counterexample: Option<Counterexample>,
}

fn serialize_divisors<S: serde::Serializer>(
    v: &Option<Vec<BigInt>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => crate::serde_big::vec(v, s),
        None => s.serialize_none(),
    }
}

impl Verdict {
    fn rejected_at_exchange(witness: StatePair) -> Self {
        Verdict {
            exchangeable: false,
            exchangeable_witness: Some(witness),
            separable: None,
            separable_witness: None,
            conserved: None,
            torsion_free: None,
            elementary_divisors: None,
            cancellative: None,
            lattice_ideal_equal: None,
            lattice_ideal_witness: None,
            irreducibly_quantified: false,
            counterexample: None,
        }
    }
}

/// Lattice spanned by `e_s + e_t - e_s' - e_t'` over all edges.
pub fn relation_lattice(i: &Interaction) -> Lattice {
    Lattice::from_generators(&i.relation_matrix())
}

/// Decides irreducible quantification of `i`.
///
/// Resource exhaustion in the Gröbner engine surfaces as
/// [`Error::Resources`]; it never turns into a boolean answer.
pub fn decide(i: &Interaction, opts: &DecideOptions) -> Result<Verdict> {
    if opts.base_point >= i.states() {
        return Err(Error::Precondition(format!(
            "base point {} out of range for {} states",
            opts.base_point,
            i.states()
        )));
    }
    if let Some(w) = i.exchangeability_witness() {
        return Ok(Verdict::rejected_at_exchange(w));
    }

    let conserved = i.conserved_basis(opts.base_point);
    let mut verdict = Verdict::rejected_at_exchange(StatePair(0, 0));
    verdict.exchangeable = true;
    verdict.exchangeable_witness = None;
    verdict.separable_witness = conserved.separability_witness();
    verdict.separable = Some(verdict.separable_witness.is_none());
    if verdict.separable_witness.is_some() {
        verdict.conserved = Some(conserved);
        return Ok(verdict);
    }

    let lattice = relation_lattice(i);
    let snf = smith_normal_form(lattice.basis());
    let torsion_free = snf.is_unimodular_part();
    debug_assert_eq!(torsion_free, is_torsion_free_quotient(&lattice));

    let relations = GroebnerBasis::of_presentation(&presentation_of(i), opts.work_limit)?;
    let saturated = saturate(&lattice);
    let target = lattice_ideal(&saturated, relations.order(), opts.work_limit)?;

    // I_sigma is always contained in I_{L_sat}.
    if let Some(b) = relations.elements().iter().find(|b| !target.contains_binomial(b)) {
        return Err(Error::Soundness(format!("relation binomial {b:?} outside the lattice ideal")));
    }
    let witness = target.elements().iter().find(|b| !relations.contains_binomial(b)).cloned();
    let equal = witness.is_none();
    if equal != (relations == target) {
        return Err(Error::Soundness("reduced bases disagree with membership test".into()));
    }

    let cancellative = saturate_all(&relations, opts.work_limit)? == relations;
    if equal != (cancellative && torsion_free) {
        return Err(Error::Soundness(format!(
            "ideal equality {equal} but cancellative {cancellative}, torsion-free {torsion_free}"
        )));
    }

    verdict.torsion_free = Some(torsion_free);
    verdict.elementary_divisors = Some(snf.elementary_divisors);
    verdict.cancellative = Some(cancellative);
    verdict.lattice_ideal_equal = Some(equal);
    verdict.irreducibly_quantified = equal;
    if let Some(w) = &witness {
        verdict.counterexample = Some(counterexample_with_basis(i, &conserved, w, opts.space_cap)?);
    }
    verdict.lattice_ideal_witness = witness;
    verdict.conserved = Some(conserved);
    Ok(verdict)
}

/// Turns a binomial of `I_{L_sat}` outside `I_sigma` into configurations on
/// the complete graph of its degree, and re-verifies both required facts by
/// direct computation.
pub fn counterexample_from_witness(i: &Interaction, w: &Binomial, opts: &DecideOptions) -> Result<Counterexample> {
    counterexample_with_basis(i, &i.conserved_basis(opts.base_point), w, opts.space_cap)
}

fn counterexample_with_basis(
    i: &Interaction,
    basis: &ConservedBasis,
    w: &Binomial,
    space_cap: u128,
) -> Result<Counterexample> {
    if w.is_zero() {
        return Err(Error::Precondition("witness binomial is zero".into()));
    }
    if !w.is_homogeneous() {
        return Err(Error::Precondition("witness binomial is not homogeneous".into()));
    }
    let eta = element_to_configuration(&w.lead)?;
    let eta_prime = element_to_configuration(&w.trail)?;
    let graph = SiteGraph::complete(eta.sites());
    if basis.signature(&eta) != basis.signature(&eta_prime) {
        return Err(Error::Soundness(format!("witness {w:?} separates conserved sums")));
    }
    if reachable(i, &graph, &eta, &eta_prime, space_cap)? {
        return Err(Error::Soundness(format!("witness {w:?} configurations are connected")));
    }
    Ok(Counterexample { eta, eta_prime, graph })
}

/// Homomorphisms to the naturals that, together with length, separate the
/// elements of an irreducibly quantified interaction's semigroup: each
/// normalized conserved quantity shifted to be nonnegative.
pub fn separating_homs(v: &Verdict) -> Result<Vec<ConservedQuantity>> {
    if !v.irreducibly_quantified {
        return Err(Error::Precondition("separating homomorphisms need an irreducibly quantified verdict".into()));
    }
    let basis = v.conserved.as_ref().expect("an irreducibly quantified verdict carries its basis");
    Ok(basis
        .normalized
        .iter()
        .map(|xi| {
            let min = xi.values.iter().min().cloned().unwrap_or_default();
            let shift = if min.is_negative() { -min } else { BigInt::zero() };
            ConservedQuantity::new(xi.values.iter().map(|x| x + &shift).collect())
        })
        .collect())
}
