//! Nonabelian 1-cocycles with values in `PSL_2(F_p)`, where `G` acts through
//! `eps` by conjugation with `V`.

mod props;

use std::collections::BTreeMap;
use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::fp_linalg::{enumerate_projective, Pgl2Elt, Prime, ProjectiveGroup};
use crate::groups::{coset_reps, FiniteGroup, QuadChar, Subgroup};
use crate::reps::{contragredient_rep, DescentProblem, ExtensionSearch, Law, RepViolation, SearchOutcome};

pub use props::{build_x, prop3_check, prop4_check, x_p_from_g, BuiltX, PropError};

/// Largest index accepted by the brute-force extension oracle by default.
pub const ORACLE_MAX_INDEX: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("cyclotomic determinant fails at sigma = {0}; xi would leave PSL_2")]
    DetViolated(usize),
    #[error("rho is not a homomorphism: {0}")]
    NotHomomorphism(RepViolation),
    #[error("cocycles have different domains or actions")]
    Mismatched,
    #[error("index {index} exceeds the oracle cap of {cap}")]
    IndexTooLarge { index: usize, cap: usize },
    #[error("domain is not a subgroup of the group")]
    BadDomain,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CocycleViolation {
    #[error("x({0}) is not in PSL_2")]
    NotPsl(usize),
    #[error("x(st) != x(s) * s.x(t) at (s, t) = ({0}, {1})")]
    Identity(usize, usize),
    #[error("x is undefined at {0}")]
    Undefined(usize),
}

/// `G` acting on `PSL_2(F_p)`: conjugation by `V` where `eps = -1`, trivially
/// elsewhere.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TwistedAction {
    eps: QuadChar,
    v: Pgl2Elt,
}

impl TwistedAction {
    pub fn new(eps: QuadChar, v: Pgl2Elt) -> TwistedAction {
        debug_assert!((v * v).is_identity(), "V has projective order 2");
        TwistedAction { eps, v }
    }

    pub fn of_problem(problem: &DescentProblem) -> TwistedAction {
        TwistedAction::new(problem.eps().clone(), problem.v_class())
    }

    pub fn eps(&self) -> &QuadChar {
        &self.eps
    }

    pub fn v(&self) -> Pgl2Elt {
        self.v
    }

    #[inline]
    pub fn act(&self, sigma: usize, x: &Pgl2Elt) -> Pgl2Elt {
        if self.eps.value(sigma) == -1 {
            self.v * *x * self.v
        } else {
            *x
        }
    }
}

/// `eta(sigma)`: identity where `eps = +1`, the class of `V` where `eps = -1`.
pub fn eta(action: &TwistedAction, sigma: usize) -> Pgl2Elt {
    if action.eps.value(sigma) == -1 {
        action.v
    } else {
        Pgl2Elt::identity(action.v.prime())
    }
}

/// Cocycle law `x(a s) = x(a) * a.x(s)` for the extension engine.
pub struct CocycleLaw<'a>(pub &'a TwistedAction);

impl Law for CocycleLaw<'_> {
    #[inline]
    fn combine(&self, a: usize, fa: &Pgl2Elt, fs: &Pgl2Elt) -> Pgl2Elt {
        *fa * self.0.act(a, fs)
    }
}

/// A function on a subgroup with values in `PGL_2(F_p)`, together with the
/// action it is meant to be a cocycle for.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cocycle {
    p: Prime,
    domain: Subgroup,
    values: Vec<Option<Pgl2Elt>>,
    action: TwistedAction,
}

impl Cocycle {
    pub fn new(
        p: Prime,
        domain: Subgroup,
        values: Vec<Option<Pgl2Elt>>,
        action: TwistedAction,
    ) -> Result<Cocycle, CocycleViolation> {
        if let Some(&x) = domain
            .members()
            .iter()
            .find(|&&x| values.get(x).copied().flatten().is_none())
        {
            return Err(CocycleViolation::Undefined(x));
        }
        Ok(Cocycle {
            p,
            domain,
            values,
            action,
        })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn action(&self) -> &TwistedAction {
        &self.action
    }

    #[inline]
    pub fn value(&self, x: usize) -> Pgl2Elt {
        self.values[x].unwrap_or_else(|| panic!("cocycle undefined at {x}"))
    }

    pub fn values(&self) -> &[Option<Pgl2Elt>] {
        &self.values
    }

    pub fn restrict(&self, sub: &Subgroup) -> Cocycle {
        assert!(sub.is_subgroup_of(&self.domain));
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(x, v)| if sub.contains(x) { *v } else { None })
            .collect();
        Cocycle {
            p: self.p,
            domain: sub.clone(),
            values,
            action: self.action.clone(),
        }
    }

    /// `gamma -> a^-1 x(gamma) gamma.a`, a cohomologous cocycle.
    pub fn twist_by(&self, a: &Pgl2Elt) -> Cocycle {
        let a_inv = a.inv();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(x, v)| v.map(|val| a_inv * val * self.action.act(x, a)))
            .collect();
        Cocycle {
            p: self.p,
            domain: self.domain.clone(),
            values,
            action: self.action.clone(),
        }
    }

    pub fn as_map(&self) -> BTreeMap<usize, Pgl2Elt> {
        self.domain
            .members()
            .iter()
            .map(|&x| (x, self.value(x)))
            .collect()
    }
}

impl Serialize for Cocycle {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire<'a> {
            values: BTreeMap<String, Pgl2Elt>,
            epsilon: &'a [i8],
            v: Pgl2Elt,
        }
        Wire {
            values: self
                .as_map()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            epsilon: self.action.eps.values(),
            v: self.action.v,
        }
        .serialize(s)
    }
}

/// `xi(sigma) = rho^vee(sigma) eta(sigma)` on `H`.
pub fn xi_from_rep(problem: &DescentProblem) -> Result<Cocycle, CohomologyError> {
    let group = problem.group();
    let rho = problem.rho();
    if let Err(e) = rho.check_cyclotomic(problem.eps()) {
        return match e {
            RepViolation::DetMismatch { element, .. } => Err(CohomologyError::DetViolated(element)),
            other => Err(CohomologyError::NotHomomorphism(other)),
        };
    }
    rho.check_homomorphism(group)
        .map_err(CohomologyError::NotHomomorphism)?;
    let action = TwistedAction::of_problem(problem);
    let dual = contragredient_rep(group, rho);
    let values = group
        .elements()
        .map(|x| dual.get(x).map(|d| d * eta(&action, x)))
        .collect();
    Ok(Cocycle::new(problem.prime(), problem.sub().clone(), values, action)
        .expect("defined on H"))
}

/// PSL membership of every value and `x(st) = x(s) * s.x(t)` over all pairs.
pub fn verify_cocycle(group: &FiniteGroup, x: &Cocycle) -> Result<(), CocycleViolation> {
    let members = x.domain.members();
    for &s in members {
        if !x.value(s).in_psl() {
            return Err(CocycleViolation::NotPsl(s));
        }
    }
    for &s in members {
        let xs = x.value(s);
        for &t in members {
            if x.value(group.mul(s, t)) != xs * x.action.act(s, &x.value(t)) {
                return Err(CocycleViolation::Identity(s, t));
            }
        }
    }
    Ok(())
}

/// First `a` in `PSL_2` order with `pi(g) = a^-1 pi'(g) g.a` for all `g`.
pub fn are_cohomologous(
    pi: &Cocycle,
    pi_prime: &Cocycle,
) -> Result<Option<Pgl2Elt>, CohomologyError> {
    if pi.domain != pi_prime.domain || pi.action != pi_prime.action {
        return Err(CohomologyError::Mismatched);
    }
    let members = pi.domain.members();
    Ok(enumerate_projective(pi.p, ProjectiveGroup::Psl)
        .into_iter()
        .find(|a| {
            let a_inv = a.inv();
            members
                .iter()
                .all(|&g| pi.value(g) == a_inv * pi_prime.value(g) * pi.action.act(g, a))
        }))
}

/// Result of the brute-force extension oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub extension: Option<Cocycle>,
    /// Partial assignments tried.
    pub nodes: u64,
    /// `|PSL_2|^(index - 1)`, the size of the unpruned space.
    pub space: u128,
}

/// Searches for a cocycle on `G` extending `pi` by assigning `PSL_2` values
/// to the non-identity left-coset representatives `r` of its domain, filling
/// in `x(r gamma) = x(r) * r.pi(gamma)`, and checking the cocycle identity
/// on every triple that is already defined.
pub fn cocycle_extension_search(
    group: &FiniteGroup,
    pi: &Cocycle,
) -> Result<OracleResult, CohomologyError> {
    cocycle_extension_search_capped(group, pi, ORACLE_MAX_INDEX)
}

pub fn cocycle_extension_search_capped(
    group: &FiniteGroup,
    pi: &Cocycle,
    max_index: usize,
) -> Result<OracleResult, CohomologyError> {
    let gamma = &pi.domain;
    if gamma.members().iter().any(|&x| x >= group.order()) || pi.values.len() != group.order() {
        return Err(CohomologyError::BadDomain);
    }
    let reps = coset_reps(group, gamma);
    if reps.len() > max_index {
        return Err(CohomologyError::IndexTooLarge {
            index: reps.len(),
            cap: max_index,
        });
    }
    let psl = enumerate_projective(pi.p, ProjectiveGroup::Psl);
    let space = (psl.len() as u128).pow(reps.len() as u32 - 1);
    let mut oracle = Oracle {
        group,
        pi,
        reps: &reps,
        psl: &psl,
        values: pi.values.clone(),
        coset_of: vec![usize::MAX; group.order()],
        members: vec![Vec::new(); reps.len()],
        nodes: 0,
    };
    for (k, &r) in reps.iter().enumerate() {
        for &y in gamma.members() {
            oracle.coset_of[group.mul(r, y)] = k;
            oracle.members[k].push(group.mul(r, y));
        }
    }
    let found = match oracle.assign(1) {
        ControlFlow::Break(values) => Some(
            Cocycle::new(pi.p, group.whole(), values, pi.action.clone()).expect("total"),
        ),
        ControlFlow::Continue(()) => None,
    };
    Ok(OracleResult {
        extension: found,
        nodes: oracle.nodes,
        space,
    })
}

struct Oracle<'a> {
    group: &'a FiniteGroup,
    pi: &'a Cocycle,
    reps: &'a [usize],
    psl: &'a [Pgl2Elt],
    values: Vec<Option<Pgl2Elt>>,
    coset_of: Vec<usize>,
    members: Vec<Vec<usize>>,
    nodes: u64,
}

impl Oracle<'_> {
    fn assign(&mut self, k: usize) -> ControlFlow<Vec<Option<Pgl2Elt>>> {
        if k == self.reps.len() {
            return ControlFlow::Break(self.values.clone());
        }
        let r = self.reps[k];
        let action = &self.pi.action;
        for &xr in self.psl {
            self.nodes += 1;
            for &y in self.pi.domain.members() {
                let val = xr * action.act(r, &self.pi.value(y));
                self.values[self.group.mul(r, y)] = Some(val);
            }
            if self.consistent_through(k) {
                self.assign(k + 1)?;
            }
        }
        for &y in self.pi.domain.members() {
            self.values[self.group.mul(r, y)] = None;
        }
        ControlFlow::Continue(())
    }

    /// Checks every defined triple `(s, t, st)` touching coset `k`.
    fn consistent_through(&self, k: usize) -> bool {
        let g = self.group;
        let action = &self.pi.action;
        let coset = |x: usize| self.coset_of[x];
        let holds = |s: usize, t: usize, st: usize| {
            self.values[st].expect("defined")
                == self.values[s].expect("defined") * action.act(s, &self.values[t].expect("defined"))
        };
        let newest = &self.members[k];
        let defined = self.members[..=k].iter().flatten().copied();
        for &a in newest {
            for b in defined.clone() {
                // s in coset k.
                let ab = g.mul(a, b);
                if coset(ab) <= k && !holds(a, b, ab) {
                    return false;
                }
                // t in coset k, s older.
                let ba = g.mul(b, a);
                if coset(b) < k && coset(ba) <= k && !holds(b, a, ba) {
                    return false;
                }
                // st in coset k, s and t older.
                let t = g.mul(g.inv(b), a);
                if coset(b) < k && coset(t) < k && !holds(b, t, a) {
                    return false;
                }
            }
        }
        true
    }
}

/// Every cocycle on `domain` for the given action, in search order.
pub fn enumerate_cocycles(
    group: &FiniteGroup,
    domain: &Subgroup,
    action: &TwistedAction,
) -> Vec<Cocycle> {
    let p = action.v.prime();
    let psl = enumerate_projective(p, ProjectiveGroup::Psl);
    let mut base = vec![None; group.order()];
    base[0] = Some(Pgl2Elt::identity(p));
    let search = ExtensionSearch::new(group, domain, base, CocycleLaw(action), |_| psl.clone());
    let mut out = Vec::new();
    let outcome = search.run(u64::MAX, |values| {
        out.push(
            Cocycle::new(p, domain.clone(), values.to_vec(), action.clone()).expect("total"),
        );
        ControlFlow::Continue(())
    });
    debug_assert!(matches!(outcome, SearchOutcome::Finished(_)));
    out
}
