//! Verdicts on descent, by four independent routes that must agree.

mod cross;
mod survey;

use std::ops::ControlFlow;

use serde::Serialize;
use thiserror::Error;

use crate::cohomology::{
    cocycle_extension_search_capped, prop3_check, prop4_check, xi_from_rep, Cocycle,
    CohomologyError, PropError, ORACLE_MAX_INDEX,
};
use crate::fp_linalg::{enumerate_projective, pgl_order, Pgl2Elt, ProjectiveGroup};
use crate::groups::{cyclic_quotient_data, Subgroup};
use crate::reps::{
    compatibility_witnesses, hom_candidates, lemma1_extend, DescentProblem, ExtensionSearch,
    HomLaw, ProjRep, RepError, SearchOutcome, Strength,
};

pub use cross::{
    cross_validate, cross_validate_with, verdicts_across_cp, verdicts_across_nonresidues,
    verify_witness, CrossReport, RouteRun,
};
pub use survey::{proj_rep_classes, survey, survey_choices, Survey, SurveyFile, SurveyRow};

pub const DEFAULT_MAX_NODES: u64 = 100_000_000;
pub const MAX_NODES_ENV: &str = "DESCENT_MAX_NODES";

/// Node budget for the searches, from `DESCENT_MAX_NODES` if set.
pub fn max_nodes() -> u64 {
    std::env::var(MAX_NODES_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_NODES)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Route {
    Thm1Direct,
    CyclicLemma1,
    Prop3,
    Prop4,
    Oracle,
}

/// What a verdict covers. A yes is always complete: an extension through the
/// quotient is an extension of the full Galois group. A no from a search
/// over `G` only rules out extensions factoring through `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    Complete,
    QuotientRelative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Extension { rep: ProjRep },
    Lemma1 { tau: usize, d: usize, g_tau: Pgl2Elt, extension: ProjRep },
    Prop3 { rbar: ProjRep, c_p: usize },
    Prop4 { rbar: ProjRep, g: Pgl2Elt, c: usize },
    Cocycle { x: Cocycle },
}

/// Size of what was exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Candidates actually tried.
    pub scanned: u64,
    /// Size of the unpruned space.
    pub space: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentVerdict {
    #[serde(rename = "defined_over_Q")]
    pub defined_over_q: bool,
    pub route: Route,
    pub witness: Option<Witness>,
    pub certificate: Option<Certificate>,
    pub scope: Scope,
}

impl DescentVerdict {
    fn yes(route: Route, witness: Witness) -> DescentVerdict {
        DescentVerdict {
            defined_over_q: true,
            route,
            witness: Some(witness),
            certificate: None,
            scope: Scope::Complete,
        }
    }

    fn no(route: Route, certificate: Certificate, scope: Scope) -> DescentVerdict {
        DescentVerdict {
            defined_over_q: false,
            route,
            witness: None,
            certificate: Some(certificate),
            scope,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescentError {
    #[error("{route:?}: search estimate {estimate} exceeds the cap {cap}")]
    Refused { route: Route, estimate: u128, cap: u64 },
    #[error("{route:?} does not apply: {reason}")]
    NotApplicable { route: Route, reason: &'static str },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Prop(#[from] PropError),
    #[error("routes disagree:\n{0}")]
    Disagreement(String),
    #[error("no route produced a verdict")]
    NoRoute,
    #[error("{route:?} returned a witness that fails its checker: {reason}")]
    BadWitness { route: Route, reason: String },
}

/// Searches homomorphisms `R : G -> PGL_2(F_p)` with `R|_H = rho` and
/// `det R = eps` mod squares.
pub fn solve_theorem1(problem: &DescentProblem) -> Result<DescentVerdict, DescentError> {
    solve_theorem1_capped(problem, max_nodes())
}

pub fn solve_theorem1_capped(
    problem: &DescentProblem,
    cap: u64,
) -> Result<DescentVerdict, DescentError> {
    let group = problem.group();
    let p = problem.prime();
    let search = ExtensionSearch::new(
        group,
        &group.whole(),
        problem.rho().images().to_vec(),
        HomLaw,
        hom_candidates(p, group, Some(problem.eps())),
    );
    let space = search.estimate();
    let mut found = None;
    let outcome = search.run(cap, |values| {
        found = Some(values.to_vec());
        ControlFlow::Break(())
    });
    match outcome {
        SearchOutcome::Refused { estimate, cap } => Err(DescentError::Refused {
            route: Route::Thm1Direct,
            estimate,
            cap,
        }),
        SearchOutcome::Finished(stats) => Ok(match found {
            Some(values) => {
                let rep = ProjRep::new(p, group.whole(), values).map_err(RepError::from)?;
                DescentVerdict::yes(Route::Thm1Direct, Witness::Extension { rep })
            }
            None => DescentVerdict::no(
                Route::Thm1Direct,
                Certificate {
                    scanned: stats.nodes,
                    space,
                },
                Scope::QuotientRelative,
            ),
        }),
    }
}

/// `G/H` cyclic: descends iff some `g` is strongly compatible.
pub fn solve_cyclic(problem: &DescentProblem) -> Result<DescentVerdict, DescentError> {
    let group = problem.group();
    let Some((tau, d)) = cyclic_quotient_data(group, problem.sub()) else {
        return Err(DescentError::NotApplicable {
            route: Route::CyclicLemma1,
            reason: "H is not normal with cyclic quotient",
        });
    };
    let witnesses = compatibility_witnesses(problem, tau, d, Strength::Strong)?;
    match witnesses.first() {
        Some(&g_tau) => {
            let extension = lemma1_extend(group, problem.rho(), tau, &g_tau, d)?;
            Ok(DescentVerdict::yes(
                Route::CyclicLemma1,
                Witness::Lemma1 {
                    tau,
                    d,
                    g_tau,
                    extension,
                },
            ))
        }
        None => {
            let pgl = pgl_order(problem.prime());
            Ok(DescentVerdict::no(
                Route::CyclicLemma1,
                Certificate {
                    scanned: pgl,
                    space: pgl as u128,
                },
                Scope::Complete,
            ))
        }
    }
}

/// Counts of compatibility witnesses for the generator of a cyclic `G/H`,
/// and whether `rho` extends at all once the determinant is ignored.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompatibilitySummary {
    pub tau: usize,
    pub d: usize,
    pub compatible: usize,
    pub strongly_compatible: usize,
    /// `None` when the search would exceed the node budget.
    pub extends_ignoring_det: Option<bool>,
}

pub fn compatibility_summary(
    problem: &DescentProblem,
) -> Result<Option<CompatibilitySummary>, DescentError> {
    let group = problem.group();
    let Some((tau, d)) = cyclic_quotient_data(group, problem.sub()) else {
        return Ok(None);
    };
    let compatible = compatibility_witnesses(problem, tau, d, Strength::Plain)?.len();
    let strongly_compatible = compatibility_witnesses(problem, tau, d, Strength::Strong)?.len();
    let search = ExtensionSearch::new(
        group,
        &group.whole(),
        problem.rho().images().to_vec(),
        HomLaw,
        hom_candidates(problem.prime(), group, None),
    );
    let mut found = false;
    let extends_ignoring_det = match search.run(max_nodes(), |_| {
        found = true;
        ControlFlow::Break(())
    }) {
        SearchOutcome::Finished(_) => Some(found),
        SearchOutcome::Refused { .. } => None,
    };
    Ok(Some(CompatibilitySummary {
        tau,
        d,
        compatible,
        strongly_compatible,
        extends_ignoring_det,
    }))
}

/// Elements with `eps = -1` admissible as `c_p`: in `H` when `eps` is
/// nontrivial on `H`, anywhere otherwise.
pub fn admissible_cp(problem: &DescentProblem) -> Vec<usize> {
    let h = problem.sub();
    let in_h = !problem.eps().is_trivial_on(h);
    problem
        .group()
        .elements()
        .filter(|&c| problem.eps().value(c) == -1 && (!in_h || h.contains(c)))
        .collect()
}

/// Props 3 and 4 with the smallest admissible `c_p`.
pub fn solve_via_props(problem: &DescentProblem) -> Result<DescentVerdict, DescentError> {
    let c = *admissible_cp(problem)
        .first()
        .expect("eps is nontrivial, so some element has eps = -1");
    solve_via_props_at(problem, c, max_nodes())
}

/// Enumerates homomorphisms `r : N -> PSL_2` extending `rho` on `H ∩ N`
/// and tests each against the criterion for the given `c`.
pub fn solve_via_props_at(
    problem: &DescentProblem,
    c: usize,
    cap: u64,
) -> Result<DescentVerdict, DescentError> {
    let group = problem.group();
    let p = problem.prime();
    let n = problem.eps_kernel();
    let prop3 = !problem.eps().is_trivial_on(problem.sub());
    let route = if prop3 { Route::Prop3 } else { Route::Prop4 };

    let h_cap_n: Subgroup = problem.sub().intersect(&n);
    let base: Vec<Option<Pgl2Elt>> = group
        .elements()
        .map(|x| h_cap_n.contains(x).then(|| problem.rho().image(x)))
        .collect();
    let search = ExtensionSearch::new(
        group,
        &n,
        base,
        HomLaw,
        hom_candidates(p, group, Some(problem.eps())),
    );

    // Candidates for g when eps is trivial on H, filtered per r by g^2 = r(c^2).
    let outside: Vec<Pgl2Elt> = if prop3 {
        Vec::new()
    } else {
        enumerate_projective(p, ProjectiveGroup::Pgl)
            .into_iter()
            .filter(|g| !g.in_psl())
            .collect()
    };
    let c2 = group.mul(c, c);

    let mut scanned = 0u64;
    let mut found: Option<Witness> = None;
    let mut error: Option<PropError> = None;
    let outcome = search.run(cap, |values| {
        let rbar = ProjRep::new(p, n.clone(), values.to_vec()).expect("total on N");
        if prop3 {
            scanned += 1;
            match prop3_check(problem, &rbar, c) {
                Ok(true) => {
                    found = Some(Witness::Prop3 { rbar, c_p: c });
                    return ControlFlow::Break(());
                }
                Ok(false) => {}
                Err(e) => {
                    error = Some(e);
                    return ControlFlow::Break(());
                }
            }
        } else {
            let target = rbar.image(c2);
            for g in outside.iter().filter(|g| **g * **g == target) {
                scanned += 1;
                match prop4_check(problem, &rbar, g, c) {
                    Ok(true) => {
                        found = Some(Witness::Prop4 { rbar, g: *g, c });
                        return ControlFlow::Break(());
                    }
                    Ok(false) => {}
                    Err(e) => {
                        error = Some(e);
                        return ControlFlow::Break(());
                    }
                }
            }
        }
        ControlFlow::Continue(())
    });
    if let Some(e) = error {
        return Err(e.into());
    }
    match outcome {
        SearchOutcome::Refused { estimate, cap } => Err(DescentError::Refused {
            route,
            estimate,
            cap,
        }),
        SearchOutcome::Finished(stats) => Ok(match found {
            Some(w) => DescentVerdict::yes(route, w),
            None => DescentVerdict::no(
                route,
                Certificate {
                    scanned,
                    space: stats.leaves as u128 * if prop3 { 1 } else { outside.len() as u128 },
                },
                Scope::QuotientRelative,
            ),
        }),
    }
}

/// Brute-force extension of `xi` from `H` to `G`.
pub fn solve_oracle(
    problem: &DescentProblem,
    max_index: usize,
) -> Result<DescentVerdict, DescentError> {
    let xi = xi_from_rep(problem)?;
    let res = cocycle_extension_search_capped(problem.group(), &xi, max_index)?;
    Ok(match res.extension {
        Some(x) => DescentVerdict::yes(Route::Oracle, Witness::Cocycle { x }),
        None => DescentVerdict::no(
            Route::Oracle,
            Certificate {
                scanned: res.nodes,
                space: res.space,
            },
            Scope::QuotientRelative,
        ),
    })
}

/// Default oracle with the standard index cap.
pub fn solve_oracle_default(problem: &DescentProblem) -> Result<DescentVerdict, DescentError> {
    solve_oracle(problem, ORACLE_MAX_INDEX)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn theorem1_examples() {
        let whole = fixtures::s3_full();
        let v = solve_theorem1(&whole).unwrap();
        assert!(v.defined_over_q);
        match v.witness.unwrap() {
            Witness::Extension { rep } => assert_eq!(&rep, whole.rho()),
            other => panic!("{other:?}"),
        }

        let s3 = fixtures::s3_diag12();
        let v = solve_theorem1(&s3).unwrap();
        assert!(v.defined_over_q);
        let Some(Witness::Extension { rep }) = v.witness else { panic!() };
        let t = fixtures::s3_transposition(s3.group());
        let swap = Pgl2Elt::from_entries(s3.prime(), [0, 1, 1, 0]).unwrap();
        // Conjugate to the swap: some element of the image's normalizer moves it there.
        assert!(enumerate_projective(s3.prime(), ProjectiveGroup::Pgl)
            .iter()
            .any(|a| a.conjugate(&rep.image(t)) == swap
                && s3.sub().members().iter().all(|&x| a.conjugate(&rep.image(x)) == rep.image(x))));

        let c14 = fixtures::c14_unipotent();
        let v = solve_theorem1(&c14).unwrap();
        assert!(!v.defined_over_q);
        assert_eq!(v.scope, Scope::QuotientRelative);
        let cert = v.certificate.unwrap();
        assert!(cert.scanned > 0 && cert.scanned as u128 <= cert.space);
    }

    #[test]
    fn theorem1_refusal() {
        let c14 = fixtures::c14_unipotent();
        assert!(matches!(
            solve_theorem1_capped(&c14, 1),
            Err(DescentError::Refused { route: Route::Thm1Direct, .. })
        ));
    }

    #[test]
    fn cyclic_examples() {
        let s3 = fixtures::s3_diag12();
        let v = solve_cyclic(&s3).unwrap();
        let Some(Witness::Lemma1 { g_tau, .. }) = v.witness else { panic!() };
        assert_eq!(g_tau.mat().entries(), [0, 1, 1, 0]);

        let c14 = fixtures::c14_unipotent();
        let summary = compatibility_summary(&c14).unwrap().unwrap();
        assert!(summary.compatible > 0);
        assert_eq!(summary.strongly_compatible, 0);
        assert_eq!(summary.extends_ignoring_det, Some(true));
        let v = solve_cyclic(&c14).unwrap();
        assert!(!v.defined_over_q);
        assert_eq!(v.scope, Scope::Complete);
        assert_eq!(v.certificate.unwrap().space, 336);

        let c2 = fixtures::c2_trivial();
        let v = solve_cyclic(&c2).unwrap();
        let Some(Witness::Lemma1 { tau, d, g_tau, .. }) = v.witness else { panic!() };
        // The swap precedes V in enumeration order; both are strongly compatible.
        assert_eq!(g_tau.mat().entries(), [0, 1, 1, 0]);
        let all = compatibility_witnesses(&c2, tau, d, Strength::Strong).unwrap();
        assert!(all.contains(&c2.v_class()));

        // Non-normal H.
        let prob = fixtures::s3_over_transposition();
        assert!(matches!(
            solve_cyclic(&prob),
            Err(DescentError::NotApplicable { .. })
        ));
    }

    #[test]
    fn props_examples() {
        let s3 = fixtures::s3_diag12();
        let v = solve_via_props(&s3).unwrap();
        assert!(v.defined_over_q);
        assert_eq!(v.route, Route::Prop4);

        let c14 = fixtures::c14_unipotent();
        assert!(!solve_via_props(&c14).unwrap().defined_over_q);

        let p = c14.prime();
        for y in enumerate_projective(p, ProjectiveGroup::Psl) {
            if !(y * y).is_identity() {
                continue;
            }
            let prob = fixtures::c4_over_c2(p, y).unwrap();
            let props = solve_via_props(&prob).unwrap();
            assert_eq!(props.route, Route::Prop4);
            let oracle = solve_oracle_default(&prob).unwrap();
            assert_eq!(props.defined_over_q, oracle.defined_over_q, "{y:?}");
        }
    }

    #[test]
    fn verdict_json_shape() {
        let v = solve_cyclic(&fixtures::c2_trivial()).unwrap();
        let json = serde_json::to_value(&v).unwrap();
        assert_eq!(json["defined_over_Q"], true);
        assert_eq!(json["route"], "CyclicLemma1");
        assert_eq!(json["witness"]["kind"], "lemma1");
        assert_eq!(json["scope"], "complete");
    }
}
