//! Runs every applicable route and insists on one answer.

use serde::Serialize;

use super::{
    admissible_cp, compatibility_summary, max_nodes, solve_cyclic, solve_oracle, solve_theorem1_capped,
    solve_via_props_at, CompatibilitySummary, DescentError, DescentVerdict, Route, Scope, Witness,
};
use crate::cohomology::{
    prop3_check, prop4_check, verify_cocycle, xi_from_rep, CohomologyError, ORACLE_MAX_INDEX,
};
use crate::fp_linalg::{legendre_class, DetClass};
use crate::reps::{is_compatibility_witness, DescentProblem, ProjRep};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RouteRun {
    Ran { verdict: DescentVerdict },
    Skipped { route: Route, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossReport {
    #[serde(rename = "defined_over_Q")]
    pub defined_over_q: bool,
    pub scope: Scope,
    pub runs: Vec<RouteRun>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub compatibility: Option<CompatibilitySummary>,
}

impl CrossReport {
    pub fn verdict(&self, route: Route) -> Option<&DescentVerdict> {
        self.runs.iter().find_map(|r| match r {
            RouteRun::Ran { verdict } if verdict.route == route => Some(verdict),
            _ => None,
        })
    }

    pub fn ran(&self) -> impl Iterator<Item = &DescentVerdict> {
        self.runs.iter().filter_map(|r| match r {
            RouteRun::Ran { verdict } => Some(verdict),
            RouteRun::Skipped { .. } => None,
        })
    }
}

fn check_extension(problem: &DescentProblem, rep: &ProjRep) -> Result<(), String> {
    if rep.domain() != &problem.group().whole() {
        return Err("extension is not defined on all of G".into());
    }
    if &rep.restrict(problem.sub()) != problem.rho() {
        return Err("extension does not restrict to rho".into());
    }
    rep.check_cyclotomic(problem.eps()).map_err(|e| e.to_string())?;
    rep.check_homomorphism(problem.group()).map_err(|e| e.to_string())
}

/// Re-checks a yes-verdict's witness with the checker for its kind.
pub fn verify_witness(problem: &DescentProblem, verdict: &DescentVerdict) -> Result<(), String> {
    let Some(witness) = &verdict.witness else {
        return if verdict.defined_over_q {
            Err("yes without a witness".into())
        } else {
            Ok(())
        };
    };
    let expect_true = |r: Result<bool, _>| match r {
        Ok(true) => Ok(()),
        Ok(false) => Err("criterion fails".to_string()),
        Err(e) => Err(format!("{e}")),
    };
    match witness {
        Witness::Extension { rep } => check_extension(problem, rep),
        Witness::Lemma1 {
            tau,
            d,
            g_tau,
            extension,
        } => {
            if !is_compatibility_witness(problem.group(), problem.rho(), *tau, *d, g_tau) {
                return Err("g_tau^d != rho(tau^d)".into());
            }
            if g_tau.det_class() != problem.eps().class(*tau) {
                return Err("det class of g_tau differs from eps(tau)".into());
            }
            if extension.image(*tau) != *g_tau {
                return Err("extension does not send tau to g_tau".into());
            }
            check_extension(problem, extension)
        }
        Witness::Prop3 { rbar, c_p } => expect_true(prop3_check(problem, rbar, *c_p)),
        Witness::Prop4 { rbar, g, c } => expect_true(prop4_check(problem, rbar, g, *c)),
        Witness::Cocycle { x } => {
            if x.domain() != &problem.group().whole() {
                return Err("cocycle is not defined on all of G".into());
            }
            verify_cocycle(problem.group(), x).map_err(|e| e.to_string())?;
            let xi = xi_from_rep(problem).map_err(|e| e.to_string())?;
            if x.restrict(problem.sub()) != xi {
                return Err("cocycle does not restrict to xi".into());
            }
            Ok(())
        }
    }
}

/// All routes with the default caps.
pub fn cross_validate(problem: &DescentProblem) -> Result<CrossReport, DescentError> {
    cross_validate_with(problem, max_nodes(), ORACLE_MAX_INDEX)
}

pub fn cross_validate_with(
    problem: &DescentProblem,
    cap: u64,
    oracle_index: usize,
) -> Result<CrossReport, DescentError> {
    let mut runs = Vec::new();
    let mut record = |route: Route, result: Result<DescentVerdict, DescentError>| {
        let run = match result {
            Ok(verdict) => RouteRun::Ran { verdict },
            Err(e @ DescentError::Refused { .. }) | Err(e @ DescentError::NotApplicable { .. }) => {
                RouteRun::Skipped {
                    route,
                    reason: e.to_string(),
                }
            }
            Err(DescentError::Cohomology(e @ CohomologyError::IndexTooLarge { .. })) => {
                RouteRun::Skipped {
                    route,
                    reason: e.to_string(),
                }
            }
            Err(e) => return Err(e),
        };
        runs.push(run);
        Ok(())
    };
    record(Route::Thm1Direct, solve_theorem1_capped(problem, cap))?;
    record(Route::CyclicLemma1, solve_cyclic(problem))?;
    let c = *admissible_cp(problem).first().expect("eps is nontrivial");
    let props_route = if problem.eps().is_trivial_on(problem.sub()) {
        Route::Prop4
    } else {
        Route::Prop3
    };
    record(props_route, solve_via_props_at(problem, c, cap))?;
    record(Route::Oracle, solve_oracle(problem, oracle_index))?;

    let ran: Vec<&DescentVerdict> = runs
        .iter()
        .filter_map(|r| match r {
            RouteRun::Ran { verdict } => Some(verdict),
            RouteRun::Skipped { .. } => None,
        })
        .collect();
    let Some(first) = ran.first() else {
        return Err(DescentError::NoRoute);
    };
    let answer = first.defined_over_q;
    if ran.iter().any(|v| v.defined_over_q != answer) {
        let dump = serde_json::to_string_pretty(&runs).unwrap_or_else(|e| e.to_string());
        return Err(DescentError::Disagreement(dump));
    }
    for v in &ran {
        verify_witness(problem, v).map_err(|reason| DescentError::BadWitness {
            route: v.route,
            reason,
        })?;
    }
    let scope = if ran.iter().any(|v| v.scope == Scope::Complete) {
        Scope::Complete
    } else {
        Scope::QuotientRelative
    };
    Ok(CrossReport {
        defined_over_q: answer,
        scope,
        runs,
        compatibility: compatibility_summary(problem)?,
    })
}

/// Cross-validated verdict for every nonresidue `v < bound`, used as `V`.
pub fn verdicts_across_nonresidues(
    problem: &DescentProblem,
    bound: u32,
) -> Result<Vec<(u32, bool)>, DescentError> {
    let p = problem.prime();
    (1..bound)
        .filter(|&v| v % p.get() != 0 && legendre_class(v, p) == Ok(DetClass::NonSquare))
        .map(|v| {
            let twisted = problem.with_v(v).expect("nonresidue");
            cross_validate(&twisted).map(|r| (v, r.defined_over_q))
        })
        .collect()
}

/// Props verdict for every admissible `c_p`.
pub fn verdicts_across_cp(problem: &DescentProblem) -> Result<Vec<(usize, bool)>, DescentError> {
    admissible_cp(problem)
        .into_iter()
        .map(|c| solve_via_props_at(problem, c, max_nodes()).map(|v| (c, v.defined_over_q)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_agree() {
        for (prob, expected) in [
            (fixtures::c2_trivial(), true),
            (fixtures::s3_diag12(), true),
            (fixtures::s3_full(), true),
            (fixtures::c14_unipotent(), false),
            (fixtures::affine_borel_index2(), true),
        ] {
            let report = cross_validate(&prob).unwrap();
            assert_eq!(report.defined_over_q, expected);
            assert!(report.ran().count() >= 3);
        }
        // Index 6: the oracle is skipped, the other routes still agree.
        let report = cross_validate(&fixtures::affine_unipotent()).unwrap();
        assert!(report.defined_over_q);
        assert!(report.verdict(Route::Oracle).is_none());
    }

    #[test]
    fn choice_independence() {
        for prob in [fixtures::s3_diag12(), fixtures::c14_unipotent(), fixtures::s3_full()] {
            let vs = verdicts_across_nonresidues(&prob, 20).unwrap();
            assert_eq!(vs.iter().map(|v| v.0).collect::<Vec<_>>(), [3, 5, 6, 10, 12, 13, 17, 19]);
            assert!(vs.windows(2).all(|w| w[0].1 == w[1].1));
            let cs = verdicts_across_cp(&prob).unwrap();
            assert!(!cs.is_empty());
            assert!(cs.iter().all(|c| c.1 == vs[0].1));
        }
    }

    #[test]
    fn tampered_witness_is_caught() {
        let prob = fixtures::s3_diag12();
        let mut v = super::super::solve_theorem1(&prob).unwrap();
        let Some(Witness::Extension { rep }) = &v.witness else { panic!() };
        let t = fixtures::s3_transposition(prob.group());
        let mut images = rep.images().to_vec();
        images[t] = Some(images[t].unwrap() * prob.v_class());
        let bad = ProjRep::new(prob.prime(), prob.group().whole(), images).unwrap();
        v.witness = Some(Witness::Extension { rep: bad });
        assert!(verify_witness(&prob, &v).is_err());
    }
}
