//! The criterion for twists attached to elliptic curves over a cyclic field:
//! `E[p]` is `F_p^2` with the determinant form in place of the Weil pairing.

use serde::Serialize;
use thiserror::Error;

use crate::fp_linalg::{
    classify_involution, det_fiber, enumerate_projective, legendre_class, smallest_nonresidue,
    DetClass, FpError, Gl2Elt, InvolutionClass, Pgl2Elt, Prime, ProjectiveGroup,
};
use crate::groups::{coset_order, cyclic_quotient_data, CharViolation, FiniteGroup, FpChar, QuadChar, Subgroup};
use crate::reps::{verify_lin_rep, DescentProblem, LinRep, ProblemError, RepViolation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EllipticError {
    #[error("H is not normal in G with cyclic quotient")]
    NotCyclic,
    #[error("eps_p must be defined on all of G: {0}")]
    EpsP(CharViolation),
    #[error("rho: {0}")]
    Rep(#[from] RepViolation),
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("no lift of a {class:?} class has determinant {target}")]
    NoLift { target: u32, class: DetClass },
    #[error("contract violated: {0}")]
    Contract(&'static str),
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// `rho : H -> GL_2(F_p)` with `det rho = eps_p`, where `G/H` is cyclic of
/// order `d` generated by the coset of `tau`.
#[derive(Debug, Clone)]
pub struct Thm2Problem {
    group: FiniteGroup,
    sub: Subgroup,
    tau: usize,
    d: usize,
    rho: LinRep,
    eps_p: FpChar,
    eps: QuadChar,
}

impl Thm2Problem {
    pub fn new(
        group: FiniteGroup,
        sub: Subgroup,
        rho: LinRep,
        eps_p: FpChar,
    ) -> Result<Thm2Problem, EllipticError> {
        let (tau, _) = cyclic_quotient_data(&group, &sub).ok_or(EllipticError::NotCyclic)?;
        Thm2Problem::with_tau(group, sub, rho, eps_p, tau)
    }

    /// As [`Thm2Problem::new`] with a chosen generator `tau` of `G/H`.
    pub fn with_tau(
        group: FiniteGroup,
        sub: Subgroup,
        rho: LinRep,
        eps_p: FpChar,
        tau: usize,
    ) -> Result<Thm2Problem, EllipticError> {
        if cyclic_quotient_data(&group, &sub).is_none() {
            return Err(EllipticError::NotCyclic);
        }
        if tau >= group.order() {
            return Err(EllipticError::Contract("tau is an element of G"));
        }
        let d = coset_order(&group, &sub, tau);
        if d * sub.order() != group.order() {
            return Err(EllipticError::Contract("the coset of tau generates G/H"));
        }
        if rho.domain() != &sub {
            return Err(RepViolation::OutsideDomain(
                *rho.domain().members().iter().find(|&&x| !sub.contains(x)).unwrap_or(&0),
            )
            .into());
        }
        let eps = QuadChar::from_fp_char(&group, &eps_p).map_err(EllipticError::EpsP)?;
        verify_lin_rep(&group, &rho, &eps_p)?;
        Ok(Thm2Problem {
            group,
            sub,
            tau,
            d,
            rho,
            eps_p,
            eps,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn sub(&self) -> &Subgroup {
        &self.sub
    }

    pub fn tau(&self) -> usize {
        self.tau
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rho(&self) -> &LinRep {
        &self.rho
    }

    pub fn eps_p(&self) -> &FpChar {
        &self.eps_p
    }

    /// `eps_p` read mod squares.
    pub fn eps(&self) -> &QuadChar {
        &self.eps
    }

    pub fn prime(&self) -> Prime {
        self.rho.prime()
    }

    fn eps_p_at(&self, x: usize) -> u32 {
        self.eps_p.value(x).expect("defined on G")
    }

    /// The projective problem `(G, H, eps, rho^pr)`.
    pub fn projectivized(&self) -> Result<DescentProblem, EllipticError> {
        let p = self.prime();
        Ok(DescentProblem::new(
            self.group.clone(),
            self.sub.clone(),
            self.eps.clone(),
            self.rho.projectivize(),
            p,
            smallest_nonresidue(p),
        )?)
    }
}

/// `h` with `det h = eps_p(tau)`, `rho(tau s tau^-1) = chi(s) h rho(s) h^-1`
/// and `h^d = lambda rho(tau^d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Thm2Witness {
    pub h: Gl2Elt,
    pub chi: FpChar,
    pub lambda: i8,
}

impl Thm2Witness {
    /// Re-checks all three relations from scratch.
    pub fn recheck(&self, problem: &Thm2Problem) -> bool {
        let g = &problem.group;
        let p = problem.prime();
        if self.h.det() != problem.eps_p_at(problem.tau) {
            return false;
        }
        let h_inv = self.h.inv();
        let invariance = problem.sub.members().iter().all(|&s| {
            let Some(c) = self.chi.value(s) else { return false };
            let Ok(rhs) = (self.h * problem.rho.image(s) * h_inv).scale(c) else {
                return false;
            };
            problem.rho.image(g.conj(problem.tau, s)) == rhs
        });
        let lambda = match self.lambda {
            1 => 1,
            -1 => p.minus_one(),
            _ => return false,
        };
        let power = problem.rho.image(g.pow(problem.tau, problem.d as i64));
        invariance && power.scale(lambda).ok() == Some(self.h.pow(problem.d as i64))
    }
}

/// `chi(s)` with `rho(tau s tau^-1) = chi(s) h rho(s) h^-1`, if every ratio
/// is a scalar.
fn extract_chi(problem: &Thm2Problem, h: &Gl2Elt) -> Option<FpChar> {
    let g = &problem.group;
    let h_inv = h.inv();
    let mut values = vec![None; g.order()];
    for &s in problem.sub.members() {
        let target = problem.rho.image(g.conj(problem.tau, s));
        let moved = *h * problem.rho.image(s) * h_inv;
        values[s] = Some(target.mat().scalar_ratio(moved.mat())?);
    }
    Some(FpChar::new(problem.prime(), values))
}

fn witness_for(problem: &Thm2Problem, h: &Gl2Elt) -> Option<Thm2Witness> {
    let p = problem.prime();
    let chi = extract_chi(problem, h)?;
    let power = problem
        .rho
        .image(problem.group.pow(problem.tau, problem.d as i64));
    let lambda = h.pow(problem.d as i64).mat().scalar_ratio(power.mat())?;
    let lambda = match lambda {
        1 => 1,
        l if l == p.minus_one() => -1,
        _ => return None,
    };
    Some(Thm2Witness { h: *h, chi, lambda })
}

/// Every witness, scanning `h` over the determinant fiber in scan order.
pub fn thm2_witnesses(problem: &Thm2Problem) -> Vec<Thm2Witness> {
    det_fiber(problem.prime(), problem.eps_p_at(problem.tau))
        .iter()
        .filter_map(|h| witness_for(problem, h))
        .collect()
}

pub fn thm2_search(problem: &Thm2Problem) -> Option<Thm2Witness> {
    det_fiber(problem.prime(), problem.eps_p_at(problem.tau))
        .iter()
        .find_map(|h| witness_for(problem, h))
}

/// First `g` in `PGL_2` with `rho(tau s tau^-1) g = g rho(s)` on `H`,
/// `g^d = rho(tau^d)` and `det g = eps_p(tau)` mod squares.
pub fn pgl_criterion(problem: &Thm2Problem) -> Option<Pgl2Elt> {
    let g = &problem.group;
    let rho = problem.rho.projectivize();
    let tau = problem.tau;
    let class = problem.eps.class(tau);
    let power = rho.image(g.pow(tau, problem.d as i64));
    enumerate_projective(problem.prime(), ProjectiveGroup::Pgl)
        .into_iter()
        .filter(|x| x.det_class() == class)
        .filter(|x| x.pow(problem.d as i64) == power)
        .find(|x| {
            problem
                .sub
                .members()
                .iter()
                .all(|&s| rho.image(g.conj(tau, s)) * *x == *x * rho.image(s))
        })
}

/// The representative of `g` with determinant `target`, using the smaller
/// of the two admissible scalings.
pub fn lift_witness(g: &Pgl2Elt, target: u32) -> Result<Gl2Elt, EllipticError> {
    let p = g.prime();
    let target = target % p.get();
    let class = g.det_class();
    if target == 0 || legendre_class(target, p)? != class {
        return Err(EllipticError::NoLift { target, class });
    }
    let m = g.representative();
    let ratio = p.mul(target, p.inv(m.det()).expect("invertible"));
    let s = (1..p.get())
        .find(|&s| p.mul(s, s) == ratio)
        .expect("ratio is a square");
    Ok(m.scale(s)?)
}

/// Which involution class `h` falls in when `F` is imaginary quadratic.
pub fn classify_iq(problem: &Thm2Problem, w: &Thm2Witness) -> Result<InvolutionClass, EllipticError> {
    let g = &problem.group;
    let p = problem.prime();
    if problem.d != 2 {
        return Err(EllipticError::Contract("d = 2"));
    }
    if g.mul(problem.tau, problem.tau) != g.identity() {
        return Err(EllipticError::Contract("tau^2 = 1"));
    }
    if problem.eps_p_at(problem.tau) != p.minus_one() {
        return Err(EllipticError::Contract("eps_p(tau) = -1"));
    }
    let class = classify_involution(&w.h)?;
    if p.get() % 4 == 3 {
        assert!(
            !matches!(class, InvolutionClass::ScalarI(_)),
            "h^2 = -I would force det(h) = 1"
        );
    }
    Ok(class)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::groups::{verify_character, AnyChar};

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn klein_example() {
        let prob = fixtures::thm2_klein(p(7));
        let w = thm2_search(&prob).unwrap();
        assert!(w.recheck(&prob));
        // The swap comes first in scan order; diag(1,6) is also a witness.
        let all = thm2_witnesses(&prob);
        let named = all
            .iter()
            .find(|w| w.h.mat().entries() == [1, 0, 0, 6])
            .unwrap();
        assert!(named.chi.is_trivial());
        assert_eq!(named.lambda, 1);
        assert!(all.iter().all(|w| w.recheck(&prob)));
        for w in &all {
            verify_character(prob.group(), AnyChar::Fp(&w.chi)).unwrap();
        }
        let g = pgl_criterion(&prob).unwrap();
        assert_eq!(lift_witness(&g, 6).unwrap(), w.h);
        let diag = Pgl2Elt::from_entries(p(7), [1, 0, 0, 6]).unwrap();
        assert!(enumerate_projective(p(7), ProjectiveGroup::Pgl)
            .into_iter()
            .filter(|x| Some(*x) == pgl_criterion(&prob) || *x == diag)
            .all(|x| x.det_class() == DetClass::NonSquare));
    }

    #[test]
    fn trivial_rho_decouples() {
        let prob = fixtures::thm2_trivial_rho(p(7));
        let all = thm2_witnesses(&prob);
        assert!(all.iter().any(|w| w.h.mat().entries() == [1, 0, 0, 6]));
        // Witnesses are exactly det -1 with h^2 = +-I; at p = 7 only h^2 = I.
        let direct = det_fiber(p(7), 6)
            .into_iter()
            .filter(|h| (*h * *h).mat().as_scalar() == Some(1))
            .count();
        assert_eq!(all.len(), direct);
        assert_eq!(direct, 56);
    }

    #[test]
    fn unipotent_has_no_witness() {
        let prob = fixtures::thm2_c14_unipotent();
        assert!(thm2_search(&prob).is_none());
        assert!(pgl_criterion(&prob).is_none());
        assert_eq!(det_fiber(p(7), 6).len(), 336);
    }

    #[test]
    fn lift_examples() {
        let d = Pgl2Elt::from_entries(p(7), [1, 0, 0, 6]).unwrap();
        assert_eq!(lift_witness(&d, 6).unwrap().mat().entries(), [1, 0, 0, 6]);
        let one = Pgl2Elt::identity(p(7));
        assert_eq!(lift_witness(&one, 4).unwrap().mat().entries(), [2, 0, 0, 2]);
        assert_eq!(
            lift_witness(&one, 3),
            Err(EllipticError::NoLift {
                target: 3,
                class: DetClass::Square
            })
        );
    }

    #[test]
    fn classify_examples() {
        let prob = fixtures::thm2_klein(p(7));
        let named = thm2_witnesses(&prob)
            .into_iter()
            .find(|w| w.h.mat().entries() == [1, 0, 0, 6])
            .unwrap();
        assert_eq!(classify_iq(&prob, &named), Ok(InvolutionClass::DiagOneMinusOne));

        let prob = fixtures::thm2_klein(p(13));
        let all = thm2_witnesses(&prob);
        let five = all.iter().find(|w| w.h.mat().entries() == [5, 0, 0, 5]).unwrap();
        assert_eq!(five.lambda, -1);
        assert_eq!(classify_iq(&prob, five), Ok(InvolutionClass::ScalarI(5)));
        let scalars: Vec<_> = all
            .iter()
            .filter_map(|w| match classify_iq(&prob, w).unwrap() {
                InvolutionClass::ScalarI(i) => Some(i),
                _ => None,
            })
            .collect();
        assert_eq!(scalars, [5, 8]);

        let c14 = fixtures::thm2_c14_unipotent();
        let fake = Thm2Witness {
            h: Gl2Elt::identity(p(7)),
            chi: FpChar::trivial_on(p(7), 14, c14.sub()),
            lambda: 1,
        };
        assert_eq!(c14.d(), 2);
        assert_eq!(classify_iq(&c14, &fake), Err(EllipticError::Contract("tau^2 = 1")));
    }

    #[test]
    fn projectivized_agrees_with_descent() {
        // -1 is a square mod 13, so eps is trivial there.
        assert!(matches!(
            fixtures::thm2_klein(p(13)).projectivized(),
            Err(EllipticError::Problem(ProblemError::TrivialEpsilon))
        ));
        for prob in [
            fixtures::thm2_klein(p(7)),
            fixtures::thm2_trivial_rho(p(11)),
            fixtures::thm2_c14_unipotent(),
        ] {
            let proj = prob.projectivized().unwrap();
            let v = crate::descent::solve_cyclic(&proj).unwrap();
            assert_eq!(v.defined_over_q, pgl_criterion(&prob).is_some());
            assert_eq!(thm2_search(&prob).is_some(), pgl_criterion(&prob).is_some());
        }
    }
}
