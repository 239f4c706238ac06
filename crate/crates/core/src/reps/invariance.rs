//! Invariance and compatibility of a representation with respect to an
//! element `tau` of the ambient group, and extension along a cyclic quotient.

use serde::{Deserialize, Serialize};

use super::{DescentProblem, ProjRep, RepError};
use crate::fp_linalg::{centralizer_is_trivial, enumerate_projective, Pgl2Elt, ProjectiveGroup};
use crate::groups::{coset_order, cyclic_quotient_data, FiniteGroup, Subgroup};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strength {
    Plain,
    /// Also require `det(g)` to match `eps(tau)` mod squares.
    Strong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WitnessMode {
    Plain,
    Strong,
    Compatible,
    StronglyCompatible,
}

impl WitnessMode {
    pub fn strength(self) -> Strength {
        match self {
            WitnessMode::Plain | WitnessMode::Compatible => Strength::Plain,
            WitnessMode::Strong | WitnessMode::StronglyCompatible => Strength::Strong,
        }
    }

    pub fn needs_power(self) -> bool {
        matches!(self, WitnessMode::Compatible | WitnessMode::StronglyCompatible)
    }
}

/// A conjugating element `g` for `tau`, tagged with the conditions it meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GTauWitness {
    pub tau: usize,
    pub g: Pgl2Elt,
    pub mode: WitnessMode,
}

impl GTauWitness {
    /// Re-checks the defining equations of the recorded mode.
    pub fn recheck(&self, problem: &DescentProblem) -> bool {
        let g = problem.group();
        let h = problem.sub();
        if !is_invariance_witness(g, h, problem.rho(), self.tau, &self.g) {
            return false;
        }
        if self.mode.strength() == Strength::Strong
            && self.g.det_class() != problem.eps().class(self.tau)
        {
            return false;
        }
        if self.mode.needs_power() {
            let d = coset_order(g, h, self.tau);
            return is_compatibility_witness(g, problem.rho(), self.tau, d, &self.g);
        }
        true
    }
}

/// `rho(tau sigma tau^-1) = g rho(sigma) g^-1` for every `sigma` in `H`.
pub fn is_invariance_witness(
    group: &FiniteGroup,
    h: &Subgroup,
    rho: &ProjRep,
    tau: usize,
    g: &Pgl2Elt,
) -> bool {
    h.members().iter().all(|&sigma| {
        let lhs = rho.image(group.conj(tau, sigma));
        lhs * *g == *g * rho.image(sigma)
    })
}

/// `g^d = rho(tau^d)`.
pub fn is_compatibility_witness(
    group: &FiniteGroup,
    rho: &ProjRep,
    tau: usize,
    d: usize,
    g: &Pgl2Elt,
) -> bool {
    g.pow(d as i64) == rho.image(group.pow(tau, d as i64))
}

/// Every `g` in `PGL_2(F_p)` conjugating `rho` to `rho(tau . tau^-1)`, in
/// enumeration order.
pub fn invariance_witnesses(
    problem: &DescentProblem,
    tau: usize,
    strength: Strength,
) -> Result<Vec<Pgl2Elt>, RepError> {
    let group = problem.group();
    group.check_element(tau).map_err(|_| RepError::BadElement(tau))?;
    let h = problem.sub();
    if !h.is_normal_in(group) {
        return Err(RepError::NotNormal);
    }
    let wanted = problem.eps().class(tau);
    // Each sigma contributes the constraint B g = g A; duplicates are dropped.
    let mut pairs: Vec<(Pgl2Elt, Pgl2Elt)> = h
        .members()
        .iter()
        .map(|&s| (problem.rho().image(s), problem.rho().image(group.conj(tau, s))))
        .filter(|(a, b)| !(a.is_identity() && b.is_identity()))
        .collect();
    pairs.sort();
    pairs.dedup();
    Ok(enumerate_projective(problem.prime(), ProjectiveGroup::Pgl)
        .into_iter()
        .filter(|g| strength == Strength::Plain || g.det_class() == wanted)
        .filter(|g| pairs.iter().all(|(a, b)| *b * *g == *g * *a))
        .collect())
}

/// Invariance witnesses that also satisfy `g^d = rho(tau^d)`, where `d` must
/// be the least positive exponent with `tau^d` in `H`.
pub fn compatibility_witnesses(
    problem: &DescentProblem,
    tau: usize,
    d: usize,
    strength: Strength,
) -> Result<Vec<Pgl2Elt>, RepError> {
    let group = problem.group();
    group.check_element(tau).map_err(|_| RepError::BadElement(tau))?;
    let h = problem.sub();
    if d == 0 || !h.contains(group.pow(tau, d as i64)) {
        return Err(RepError::PowerOutside { d });
    }
    let least = coset_order(group, h, tau);
    if least != d {
        return Err(RepError::NotMinimal { given: d, least });
    }
    let target = problem.rho().image(group.pow(tau, d as i64));
    Ok(invariance_witnesses(problem, tau, strength)?
        .into_iter()
        .filter(|g| g.pow(d as i64) == target)
        .collect())
}

/// Extends `rbar` on a normal subgroup `L` with `G/L` cyclic of order `d`,
/// generated by the coset of `tau`, via `R(tau^n sigma) = g^n rbar(sigma)`.
pub fn lemma1_extend(
    group: &FiniteGroup,
    rbar: &ProjRep,
    tau: usize,
    g_tau: &Pgl2Elt,
    d: usize,
) -> Result<ProjRep, RepError> {
    group.check_element(tau).map_err(|_| RepError::BadElement(tau))?;
    let l = rbar.domain();
    if !l.is_normal_in(group) {
        return Err(RepError::NotNormal);
    }
    if coset_order(group, l, tau) != d || d * l.order() != group.order() {
        return Err(RepError::NotGenerator { d });
    }
    if !is_compatibility_witness(group, rbar, tau, d, g_tau) {
        return Err(RepError::PowerEquation);
    }
    if let Some(&sigma) = l.members().iter().find(|&&s| {
        rbar.image(group.conj(tau, s)) * *g_tau != *g_tau * rbar.image(s)
    }) {
        return Err(RepError::InvarianceEquation { sigma });
    }
    let mut images = vec![None; group.order()];
    let mut tau_n = group.identity();
    let mut g_n = Pgl2Elt::identity(rbar.prime());
    for _ in 0..d {
        for &sigma in l.members() {
            images[group.mul(tau_n, sigma)] = Some(g_n * rbar.image(sigma));
        }
        tau_n = group.mul(tau_n, tau);
        g_n = g_n * *g_tau;
    }
    let ext = ProjRep::new(rbar.prime(), group.whole(), images)?;
    ext.check_homomorphism(group).map_err(RepError::Broken)?;
    Ok(ext)
}

/// Whether the projective centralizer of the image is trivial.
pub fn schur_irreducible(rho: &ProjRep) -> bool {
    centralizer_is_trivial(&rho.image_set())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum CorollaryOutcome {
    /// Descends; `g` is a strong invariance witness for the generator `tau`.
    Descends { tau: usize, g: Pgl2Elt },
    NotApplicable { reason: &'static str },
}

/// One-directional shortcut for cyclic `G/H`: trivial projective centralizer
/// plus strong invariance forces strong compatibility.
pub fn corollary_descent(problem: &DescentProblem) -> Result<CorollaryOutcome, RepError> {
    let Some((tau, _d)) = cyclic_quotient_data(problem.group(), problem.sub()) else {
        return Ok(CorollaryOutcome::NotApplicable {
            reason: "G/H is not cyclic",
        });
    };
    if !schur_irreducible(problem.rho()) {
        return Ok(CorollaryOutcome::NotApplicable {
            reason: "image has a nontrivial projective centralizer",
        });
    }
    match invariance_witnesses(problem, tau, Strength::Strong)?.first() {
        Some(&g) => Ok(CorollaryOutcome::Descends { tau, g }),
        None => Ok(CorollaryOutcome::NotApplicable {
            reason: "not strongly invariant",
        }),
    }
}
