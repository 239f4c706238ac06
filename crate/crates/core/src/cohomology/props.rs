//! The two extension criteria on `N = ker eps`, and the cocycle on `G`
//! rebuilt from a representation of `N`.

use thiserror::Error;

use crate::fp_linalg::{DetClass, Pgl2Elt};
use crate::groups::FiniteGroup;
use crate::reps::{contragredient_rep, DescentProblem, ProjRep, RepViolation};

use super::{verify_cocycle, Cocycle, CocycleViolation, TwistedAction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PropError {
    #[error("eps is trivial on H; use the other criterion")]
    EpsTrivialOnH,
    #[error("eps is nontrivial on H; use the other criterion")]
    EpsNontrivialOnH,
    #[error("element {0} is not in H")]
    NotInH(usize),
    #[error("eps({0}) = +1, an element with eps = -1 is required")]
    EvenElement(usize),
    #[error("element {0} is outside the group")]
    BadElement(usize),
    #[error("r is not defined on exactly ker eps")]
    RbarDomain,
    #[error("r({0}) is not in PSL_2")]
    RbarNotPsl(usize),
    #[error("r({0}) differs from rho({0})")]
    RbarDisagrees(usize),
    #[error("r is not a homomorphism: {0}")]
    RbarNotHom(RepViolation),
    #[error("g is in PSL_2")]
    GInPsl,
}

fn check_element(group: &FiniteGroup, c: usize) -> Result<(), PropError> {
    if c >= group.order() {
        Err(PropError::BadElement(c))
    } else {
        Ok(())
    }
}

/// `r` lives on `N`, takes values in `PSL_2`, is a homomorphism and agrees
/// with `rho` on `H ∩ N`.
fn check_rbar(problem: &DescentProblem, rbar: &ProjRep) -> Result<(), PropError> {
    let n = problem.eps_kernel();
    if rbar.domain() != &n {
        return Err(PropError::RbarDomain);
    }
    for &x in n.members() {
        if !rbar.image(x).in_psl() {
            return Err(PropError::RbarNotPsl(x));
        }
    }
    for &x in problem.sub().members() {
        if n.contains(x) && rbar.image(x) != problem.rho().image(x) {
            return Err(PropError::RbarDisagrees(x));
        }
    }
    rbar.check_homomorphism(problem.group())
        .map_err(PropError::RbarNotHom)
}

/// `eps` nontrivial on `H`, `c in H` with `eps(c) = -1`: true iff
/// `r(c^-1 s c) = rho(c)^-1 r(s) rho(c)` for every `s` in `N`.
pub fn prop3_check(problem: &DescentProblem, rbar: &ProjRep, c: usize) -> Result<bool, PropError> {
    let group = problem.group();
    if problem.eps().is_trivial_on(problem.sub()) {
        return Err(PropError::EpsTrivialOnH);
    }
    check_element(group, c)?;
    if !problem.sub().contains(c) {
        return Err(PropError::NotInH(c));
    }
    if problem.eps().value(c) != -1 {
        return Err(PropError::EvenElement(c));
    }
    check_rbar(problem, rbar)?;
    let rc = problem.rho().image(c);
    let rc_inv = rc.inv();
    let c_inv = group.inv(c);
    Ok(rbar.domain().members().iter().all(|&s| {
        rbar.image(group.mul(group.mul(c_inv, s), c)) == rc_inv * rbar.image(s) * rc
    }))
}

/// `eps` trivial on `H`, `eps(c) = -1`, `g` outside `PSL_2`: true iff
/// `r(c^2) = g^2` and `r(c^-1 s c) = g^-1 r(s) g` for every `s` in `N`.
pub fn prop4_check(
    problem: &DescentProblem,
    rbar: &ProjRep,
    g: &Pgl2Elt,
    c: usize,
) -> Result<bool, PropError> {
    let group = problem.group();
    if !problem.eps().is_trivial_on(problem.sub()) {
        return Err(PropError::EpsNontrivialOnH);
    }
    check_element(group, c)?;
    if problem.eps().value(c) != -1 {
        return Err(PropError::EvenElement(c));
    }
    if g.det_class() != DetClass::NonSquare {
        return Err(PropError::GInPsl);
    }
    check_rbar(problem, rbar)?;
    if rbar.image(group.mul(c, c)) != *g * *g {
        return Ok(false);
    }
    let g_inv = g.inv();
    let c_inv = group.inv(c);
    Ok(rbar.domain().members().iter().all(|&s| {
        rbar.image(group.mul(group.mul(c_inv, s), c)) == g_inv * rbar.image(s) * *g
    }))
}

/// `x_p = (g^-1)^t V`.
pub fn x_p_from_g(g: &Pgl2Elt, v: &Pgl2Elt) -> Pgl2Elt {
    g.contragredient() * *v
}

/// A function on `G` and the outcome of checking it as a cocycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltX {
    pub x: Cocycle,
    pub validity: Result<(), CocycleViolation>,
}

/// `x(s) = r^vee(s)` on `N`, and `x(s) = x_p V r^vee(c^-1 s) V` off `N`.
pub fn build_x(
    group: &FiniteGroup,
    action: &TwistedAction,
    rbar: &ProjRep,
    x_p: &Pgl2Elt,
    c: usize,
) -> Result<BuiltX, PropError> {
    check_element(group, c)?;
    if action.eps().value(c) != -1 {
        return Err(PropError::EvenElement(c));
    }
    let n = action.eps().kernel(group);
    if rbar.domain() != &n {
        return Err(PropError::RbarDomain);
    }
    let dual = contragredient_rep(group, rbar);
    let v = action.v();
    let c_inv = group.inv(c);
    let values = group
        .elements()
        .map(|s| {
            Some(if n.contains(s) {
                dual.image(s)
            } else {
                *x_p * v * dual.image(group.mul(c_inv, s)) * v
            })
        })
        .collect();
    let x = Cocycle::new(rbar.prime(), group.whole(), values, action.clone()).expect("total");
    let validity = verify_cocycle(group, &x);
    Ok(BuiltX { x, validity })
}
