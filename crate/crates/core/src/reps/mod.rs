//! Projective and linear representation tables on subgroups, the
//! cyclotomic-determinant condition, and the invariance/compatibility
//! hierarchy used to extend along cyclic quotients.

mod extend;
mod invariance;

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::fp_linalg::{standard_v, DetClass, FpError, Gl2Elt, Pgl2Elt, Prime};
use crate::groups::{verify_character, AnyChar, CharViolation, FiniteGroup, FpChar, QuadChar, Subgroup};

pub use extend::{
    hom_candidates, ExtensionSearch, HomLaw, Law, SearchOutcome, SearchStats,
};
pub use invariance::{
    compatibility_witnesses, corollary_descent, invariance_witnesses, is_compatibility_witness,
    is_invariance_witness, lemma1_extend, schur_irreducible, CorollaryOutcome, GTauWitness,
    Strength, WitnessMode,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepViolation {
    #[error("no image given for element {0} of the domain")]
    MissingImage(usize),
    #[error("image given for element {0} outside the domain")]
    OutsideDomain(usize),
    #[error("image of {0} has the wrong prime")]
    PrimeMismatch(usize),
    #[error("not a homomorphism at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("determinant class at {element} is {got:?} but the character demands {expected:?}")]
    DetMismatch {
        element: usize,
        expected: DetClass,
        got: DetClass,
    },
    #[error("det(rho({element})) = {got}, character value is {expected}")]
    DetValueMismatch { element: usize, expected: u32, got: u32 },
    #[error("character: {0}")]
    Character(#[from] CharViolation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("element {0} is out of range")]
    BadElement(usize),
    #[error("subgroup is not normal; invariance is only defined for normal subgroups here")]
    NotNormal,
    #[error("tau^{d} is not in the subgroup")]
    PowerOutside { d: usize },
    #[error("d = {given} is not minimal: tau^{least} already lies in the subgroup")]
    NotMinimal { given: usize, least: usize },
    #[error("the coset of tau does not generate a cyclic quotient of order {d}")]
    NotGenerator { d: usize },
    #[error("compatibility fails: g^d != r(tau^d)")]
    PowerEquation,
    #[error("invariance fails at sigma = {sigma}: r(tau sigma tau^-1) != g r(sigma) g^-1")]
    InvarianceEquation { sigma: usize },
    #[error("extension is not a homomorphism: {0}")]
    Broken(RepViolation),
    #[error("representation: {0}")]
    Violation(#[from] RepViolation),
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// A homomorphism from a subgroup into `PGL_2(F_p)`, stored as a full table
/// indexed by elements of the ambient group.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjRep {
    p: Prime,
    domain: Subgroup,
    images: Vec<Option<Pgl2Elt>>,
}

impl ProjRep {
    /// Builds the table; images must be present exactly on `domain`.
    /// Homomorphism is not checked here.
    pub fn new(
        p: Prime,
        domain: Subgroup,
        images: Vec<Option<Pgl2Elt>>,
    ) -> Result<ProjRep, RepViolation> {
        for (x, img) in images.iter().enumerate() {
            match (domain.contains(x), img) {
                (true, None) => return Err(RepViolation::MissingImage(x)),
                (false, Some(_)) => return Err(RepViolation::OutsideDomain(x)),
                (true, Some(m)) if m.prime() != p => return Err(RepViolation::PrimeMismatch(x)),
                _ => {}
            }
        }
        if let Some(&x) = domain.members().iter().find(|&&x| x >= images.len()) {
            return Err(RepViolation::MissingImage(x));
        }
        Ok(ProjRep { p, domain, images })
    }

    pub fn from_map(
        p: Prime,
        n: usize,
        domain: Subgroup,
        map: &BTreeMap<usize, Pgl2Elt>,
    ) -> Result<ProjRep, RepViolation> {
        let images = (0..n).map(|x| map.get(&x).copied()).collect();
        ProjRep::new(p, domain, images)
    }

    pub fn trivial(p: Prime, n: usize, domain: &Subgroup) -> ProjRep {
        let images = (0..n)
            .map(|x| domain.contains(x).then(|| Pgl2Elt::identity(p)))
            .collect();
        ProjRep {
            p,
            domain: domain.clone(),
            images,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    /// Image of a domain element; panics outside the domain.
    #[inline]
    pub fn image(&self, x: usize) -> Pgl2Elt {
        self.images[x].unwrap_or_else(|| panic!("element {x} is outside the domain"))
    }

    pub fn get(&self, x: usize) -> Option<Pgl2Elt> {
        self.images.get(x).copied().flatten()
    }

    pub fn images(&self) -> &[Option<Pgl2Elt>] {
        &self.images
    }

    pub fn restrict(&self, sub: &Subgroup) -> ProjRep {
        assert!(sub.is_subgroup_of(&self.domain), "restriction to a non-subgroup");
        let images = self
            .images
            .iter()
            .enumerate()
            .map(|(x, img)| if sub.contains(x) { *img } else { None })
            .collect();
        ProjRep {
            p: self.p,
            domain: sub.clone(),
            images,
        }
    }

    /// Distinct images, sorted.
    pub fn image_set(&self) -> Vec<Pgl2Elt> {
        let mut set: Vec<Pgl2Elt> = self.images.iter().flatten().copied().collect();
        set.sort();
        set.dedup();
        set
    }

    pub fn check_homomorphism(&self, g: &FiniteGroup) -> Result<(), RepViolation> {
        let members = self.domain.members();
        for &a in members {
            let fa = self.image(a);
            for &b in members {
                if fa * self.image(b) != self.image(g.mul(a, b)) {
                    return Err(RepViolation::NotHomomorphism(a, b));
                }
            }
        }
        Ok(())
    }

    /// `det(rep(x))` read mod squares matches `eps(x)` on the domain.
    pub fn check_cyclotomic(&self, eps: &QuadChar) -> Result<(), RepViolation> {
        for &x in self.domain.members() {
            let got = self.image(x).det_class();
            let expected = eps.class(x);
            if got != expected {
                return Err(RepViolation::DetMismatch {
                    element: x,
                    expected,
                    got,
                });
            }
        }
        Ok(())
    }

    /// Conjugates every image by `g`.
    pub fn conjugate_by(&self, g: &Pgl2Elt) -> ProjRep {
        let images = self.images.iter().map(|i| i.map(|x| g.conjugate(&x))).collect();
        ProjRep {
            p: self.p,
            domain: self.domain.clone(),
            images,
        }
    }

    pub fn as_map(&self) -> BTreeMap<usize, Pgl2Elt> {
        self.domain
            .members()
            .iter()
            .map(|&x| (x, self.image(x)))
            .collect()
    }
}

impl Serialize for ProjRep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.domain.order()))?;
        for &x in self.domain.members() {
            map.serialize_entry(&x.to_string(), &self.image(x))?;
        }
        map.end()
    }
}

/// `sigma -> rep(sigma^-1)^t`, pointwise.
pub fn contragredient_rep(g: &FiniteGroup, rep: &ProjRep) -> ProjRep {
    // rep(sigma^-1) = rep(sigma)^-1, so the pointwise contragredient is the same table.
    let images = (0..rep.images.len())
        .map(|x| rep.images[x].map(|_| rep.image(g.inv(x)).transpose()))
        .collect();
    ProjRep {
        p: rep.p,
        domain: rep.domain.clone(),
        images,
    }
}

/// A homomorphism from a subgroup into `GL_2(F_p)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinRep {
    p: Prime,
    domain: Subgroup,
    images: Vec<Option<Gl2Elt>>,
}

impl LinRep {
    pub fn new(
        p: Prime,
        domain: Subgroup,
        images: Vec<Option<Gl2Elt>>,
    ) -> Result<LinRep, RepViolation> {
        for (x, img) in images.iter().enumerate() {
            match (domain.contains(x), img) {
                (true, None) => return Err(RepViolation::MissingImage(x)),
                (false, Some(_)) => return Err(RepViolation::OutsideDomain(x)),
                (true, Some(m)) if m.prime() != p => return Err(RepViolation::PrimeMismatch(x)),
                _ => {}
            }
        }
        if let Some(&x) = domain.members().iter().find(|&&x| x >= images.len()) {
            return Err(RepViolation::MissingImage(x));
        }
        Ok(LinRep { p, domain, images })
    }

    pub fn trivial(p: Prime, n: usize, domain: &Subgroup) -> LinRep {
        let images = (0..n)
            .map(|x| domain.contains(x).then(|| Gl2Elt::identity(p)))
            .collect();
        LinRep {
            p,
            domain: domain.clone(),
            images,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    #[inline]
    pub fn image(&self, x: usize) -> Gl2Elt {
        self.images[x].unwrap_or_else(|| panic!("element {x} is outside the domain"))
    }

    pub fn images(&self) -> &[Option<Gl2Elt>] {
        &self.images
    }

    pub fn projectivize(&self) -> ProjRep {
        ProjRep {
            p: self.p,
            domain: self.domain.clone(),
            images: self.images.iter().map(|i| i.map(|m| m.projectivize())).collect(),
        }
    }

    pub fn as_map(&self) -> BTreeMap<usize, Gl2Elt> {
        self.domain
            .members()
            .iter()
            .map(|&x| (x, self.image(x)))
            .collect()
    }
}

impl Serialize for LinRep {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.domain.order()))?;
        for &x in self.domain.members() {
            map.serialize_entry(&x.to_string(), &self.image(x))?;
        }
        map.end()
    }
}

/// Homomorphism property and `det(rho(sigma)) = eps_p(sigma)` on the domain.
pub fn verify_lin_rep(g: &FiniteGroup, rho: &LinRep, eps_p: &FpChar) -> Result<(), RepViolation> {
    verify_character(g, AnyChar::Fp(eps_p))?;
    let members = rho.domain.members();
    for &x in members {
        let expected = eps_p.value(x).ok_or(CharViolation::Undefined(x))?;
        let got = rho.image(x).det();
        if got != expected {
            return Err(RepViolation::DetValueMismatch {
                element: x,
                expected,
                got,
            });
        }
    }
    for &a in members {
        for &b in members {
            if rho.image(a) * rho.image(b) != rho.image(g.mul(a, b)) {
                return Err(RepViolation::NotHomomorphism(a, b));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProblemError {
    #[error("epsilon is trivial on G; Q(p) must not be contained in the base")]
    TrivialEpsilon,
    #[error("epsilon: {0}")]
    Epsilon(CharViolation),
    #[error("rho is defined on {got:?}, expected the subgroup {expected:?}")]
    DomainMismatch {
        expected: Vec<usize>,
        got: Vec<usize>,
    },
    #[error("rho is over F_{got}, problem is over F_{expected}")]
    PrimeMismatch { expected: Prime, got: Prime },
    #[error("rho: {0}")]
    Rep(#[from] RepViolation),
    #[error(transparent)]
    Fp(#[from] FpError),
}

/// Everything needed to ask whether the twist by `rho` descends to `Q`:
/// the quotient `G = Gal(M/Q)`, the subgroup `H = Gal(M/F)`, the quadratic
/// character `eps` cutting out `Q(p)`, and `rho : H -> PGL_2(F_p)`.
#[derive(Debug, Clone)]
pub struct DescentProblem {
    group: FiniteGroup,
    sub: Subgroup,
    eps: QuadChar,
    rho: ProjRep,
    p: Prime,
    v: u32,
    v_class: Pgl2Elt,
}

impl DescentProblem {
    /// Validates every invariant, including the cyclotomic determinant.
    pub fn new(
        group: FiniteGroup,
        sub: Subgroup,
        eps: QuadChar,
        rho: ProjRep,
        p: Prime,
        v: u32,
    ) -> Result<DescentProblem, ProblemError> {
        let problem = DescentProblem::unvalidated(group, sub, eps, rho, p, v)?;
        verify_proj_rep(&problem)?;
        Ok(problem)
    }

    /// Checks the structural invariants but not the homomorphism or
    /// determinant conditions on `rho`, so broken inputs can be handed to
    /// the verifiers.
    pub fn unvalidated(
        group: FiniteGroup,
        sub: Subgroup,
        eps: QuadChar,
        rho: ProjRep,
        p: Prime,
        v: u32,
    ) -> Result<DescentProblem, ProblemError> {
        verify_character(&group, AnyChar::Quad(&eps)).map_err(ProblemError::Epsilon)?;
        if eps.is_trivial() {
            return Err(ProblemError::TrivialEpsilon);
        }
        if rho.prime() != p {
            return Err(ProblemError::PrimeMismatch {
                expected: p,
                got: rho.prime(),
            });
        }
        if rho.domain() != &sub {
            return Err(ProblemError::DomainMismatch {
                expected: sub.members().to_vec(),
                got: rho.domain().members().to_vec(),
            });
        }
        let (_, v_class) = standard_v(p, v)?;
        Ok(DescentProblem {
            group,
            sub,
            eps,
            rho,
            p,
            v,
            v_class,
        })
    }

    /// Same problem with a different nonresidue.
    pub fn with_v(&self, v: u32) -> Result<DescentProblem, ProblemError> {
        let (_, v_class) = standard_v(self.p, v)?;
        Ok(DescentProblem {
            v,
            v_class,
            ..self.clone()
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn sub(&self) -> &Subgroup {
        &self.sub
    }

    pub fn eps(&self) -> &QuadChar {
        &self.eps
    }

    pub fn rho(&self) -> &ProjRep {
        &self.rho
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    /// Class of `V = [[0, v], [-1, 0]]`.
    pub fn v_class(&self) -> Pgl2Elt {
        self.v_class
    }

    /// `ker eps`, the subgroup fixing `Q(p)`.
    pub fn eps_kernel(&self) -> Subgroup {
        self.eps.kernel(&self.group)
    }
}

/// `det(rho) = eps` mod squares on `H` (checked first, it is linear in
/// `|H|`) and the homomorphism property.
pub fn verify_proj_rep(problem: &DescentProblem) -> Result<(), RepViolation> {
    problem.rho.check_cyclotomic(&problem.eps)?;
    problem.rho.check_homomorphism(&problem.group)
}
