//! Tabulates descent over every projective representation of a subgroup,
//! up to conjugacy in `PGL_2`.

use std::collections::HashSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{cross_validate, DescentError};
use crate::fp_linalg::{enumerate_projective, smallest_nonresidue, Pgl2Elt, Prime, ProjectiveGroup};
use crate::groups::{all_quadratic_chars, all_subgroups, FiniteGroup, GroupSpec, QuadChar, Subgroup};
use crate::reps::{hom_candidates, DescentProblem, ExtensionSearch, HomLaw, ProjRep, SearchOutcome};

/// Input for a survey. Omitted fields range over all choices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurveyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub group: GroupSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup_gens: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<i8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyRow {
    pub subgroup: Vec<usize>,
    pub epsilon: Vec<i8>,
    /// Conjugacy classes of `rho : H -> PGL_2(F_p)` with the cyclotomic
    /// determinant.
    pub classes: usize,
    pub descend: usize,
    pub do_not_descend: usize,
    pub undecided: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Survey {
    pub p: u32,
    pub group_order: usize,
    pub rows: Vec<SurveyRow>,
}

impl Survey {
    pub fn undecided(&self) -> usize {
        self.rows.iter().map(|r| r.undecided).sum()
    }
}

/// One representative per `PGL_2`-conjugacy class of homomorphisms
/// `H -> PGL_2(F_p)` with determinant class `eps` on `H`, in search order.
pub fn proj_rep_classes(
    group: &FiniteGroup,
    sub: &Subgroup,
    eps: &QuadChar,
    p: Prime,
    max_nodes: u64,
) -> Result<Vec<ProjRep>, DescentError> {
    let mut base = vec![None; group.order()];
    base[0] = Some(Pgl2Elt::identity(p));
    let search = ExtensionSearch::new(group, sub, base, HomLaw, hom_candidates(p, group, Some(eps)));
    let pgl = enumerate_projective(p, ProjectiveGroup::Pgl);
    let mut seen: HashSet<Vec<Option<Pgl2Elt>>> = HashSet::new();
    let mut reps = Vec::new();
    let outcome = search.run(max_nodes, |images| {
        if !seen.contains(images) {
            let rep = ProjRep::new(p, sub.clone(), images.to_vec()).expect("total on H");
            for g in &pgl {
                seen.insert(rep.conjugate_by(g).images().to_vec());
            }
            reps.push(rep);
        }
        ControlFlow::Continue(())
    });
    match outcome {
        SearchOutcome::Finished(_) => Ok(reps),
        SearchOutcome::Refused { estimate, cap } => Err(DescentError::Refused {
            route: super::Route::Thm1Direct,
            estimate,
            cap,
        }),
    }
}

/// Cross-validated verdicts for every class, one row per `(H, eps)` pair
/// with `eps` nontrivial on `G`.
pub fn survey(
    group: &FiniteGroup,
    subs: &[Subgroup],
    chars: &[QuadChar],
    p: Prime,
    max_nodes: u64,
) -> Result<Survey, DescentError> {
    let v = smallest_nonresidue(p);
    let mut rows = Vec::new();
    for sub in subs {
        for eps in chars.iter().filter(|e| !e.is_trivial()) {
            let mut row = SurveyRow {
                subgroup: sub.members().to_vec(),
                epsilon: eps.values().to_vec(),
                classes: 0,
                descend: 0,
                do_not_descend: 0,
                undecided: 0,
            };
            for rho in proj_rep_classes(group, sub, eps, p, max_nodes)? {
                row.classes += 1;
                let problem = DescentProblem::new(group.clone(), sub.clone(), eps.clone(), rho, p, v)
                    .expect("enumerated with the cyclotomic determinant");
                match cross_validate(&problem) {
                    Ok(r) if r.defined_over_q => row.descend += 1,
                    Ok(_) => row.do_not_descend += 1,
                    Err(DescentError::NoRoute) => row.undecided += 1,
                    Err(e) => return Err(e),
                }
            }
            rows.push(row);
        }
    }
    Ok(Survey {
        p: p.get(),
        group_order: group.order(),
        rows,
    })
}

/// The subgroups and characters a survey file asks for.
pub fn survey_choices(
    group: &FiniteGroup,
    file: &SurveyFile,
) -> Result<(Vec<Subgroup>, Vec<QuadChar>), String> {
    let subs = match &file.subgroup_gens {
        Some(gens) => vec![crate::groups::subgroup_closure(group, gens)
            .map_err(|e| format!("subgroup_gens: {e}"))?],
        None => all_subgroups(group),
    };
    let chars = match &file.epsilon {
        Some(values) => {
            let eps = QuadChar::new(group, values.clone()).map_err(|e| format!("epsilon: {e}"))?;
            if eps.is_trivial() {
                return Err("epsilon: must be nontrivial".into());
            }
            vec![eps]
        }
        None => all_quadratic_chars(group),
    };
    Ok((subs, chars))
}
