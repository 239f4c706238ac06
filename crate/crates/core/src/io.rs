//! JSON problem files.
//!
//! ```json
//! {
//!   "task": "descent",
//!   "p": 7,
//!   "group": {"perm_gens": [[1, 0]]},
//!   "subgroup_gens": [],
//!   "epsilon": [1, -1],
//!   "rho": {"0": [1, 0, 0, 1]}
//! }
//! ```
//!
//! `rho` maps element indices of `H` to row-major matrices. Elliptic-curve
//! problems use `"task": "thm2"`, give `epsilon_p` (one residue per element)
//! instead of `epsilon`, and may fix `tau`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::Thm2Problem;
use crate::fp_linalg::{smallest_nonresidue, FpError, Gl2Elt, Pgl2Elt, Prime};
use crate::groups::{build_group, subgroup_closure, FpChar, GroupSpec, QuadChar};
use crate::reps::{DescentProblem, LinRep, ProblemError, ProjRep};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    #[default]
    Descent,
    Thm2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default)]
    pub task: Task,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<u32>,
    pub group: GroupSpec,
    #[serde(default)]
    pub subgroup_gens: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Vec<i8>>,
    pub rho: BTreeMap<String, [i64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_p: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Problem {
    Descent(DescentProblem),
    Thm2(Thm2Problem),
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed problem file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl ToString) -> ParseError {
    ParseError::Invalid {
        field: field.into(),
        message: message.to_string(),
    }
}

pub fn parse_problem(path: &Path) -> Result<(ProblemFile, Problem), ParseError> {
    let text = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_problem_str(&text)
}

pub fn parse_problem_str(text: &str) -> Result<(ProblemFile, Problem), ParseError> {
    let file: ProblemFile = serde_json::from_str(text)?;
    let problem = problem_from_file(&file)?;
    Ok((file, problem))
}

fn rho_keys(file: &ProblemFile, n: usize) -> Result<Vec<(usize, [i64; 4])>, ParseError> {
    file.rho
        .iter()
        .map(|(k, m)| {
            let x: usize = k
                .parse()
                .map_err(|_| invalid(format!("rho.{k}"), "key is not an element index"))?;
            if x >= n {
                return Err(invalid(format!("rho.{k}"), "element outside the group"));
            }
            Ok((x, *m))
        })
        .collect()
}

pub fn problem_from_file(file: &ProblemFile) -> Result<Problem, ParseError> {
    let p = Prime::new(file.p).map_err(|e| invalid("p", e))?;
    let group = build_group(&file.group).map_err(|e| invalid("group", e))?;
    let n = group.order();
    let sub = subgroup_closure(&group, &file.subgroup_gens).map_err(|e| invalid("subgroup_gens", e))?;
    let entries = rho_keys(file, n)?;
    match file.task {
        Task::Descent => {
            if file.epsilon_p.is_some() || file.tau.is_some() {
                return Err(invalid("task", "epsilon_p and tau belong to thm2 problems"));
            }
            let eps_values = file
                .epsilon
                .clone()
                .ok_or_else(|| invalid("epsilon", "required for descent problems"))?;
            let eps = QuadChar::new(&group, eps_values).map_err(|e| invalid("epsilon", e))?;
            let mut images = vec![None; n];
            for (x, m) in entries {
                images[x] = Some(
                    Pgl2Elt::from_entries(p, m).map_err(|e| invalid(format!("rho.{x}"), e))?,
                );
            }
            let rho = ProjRep::new(p, sub.clone(), images).map_err(|e| invalid("rho", e))?;
            let v = file.v.unwrap_or_else(|| smallest_nonresidue(p));
            let problem = DescentProblem::new(group, sub, eps, rho, p, v).map_err(|e| match e {
                ProblemError::Epsilon(_) | ProblemError::TrivialEpsilon => invalid("epsilon", e),
                ProblemError::Fp(FpError::SquareV(_)) => invalid("v", e),
                _ => invalid("rho", e),
            })?;
            Ok(Problem::Descent(problem))
        }
        Task::Thm2 => {
            if file.v.is_some() {
                return Err(invalid("v", "not used by thm2 problems"));
            }
            let values = file
                .epsilon_p
                .clone()
                .ok_or_else(|| invalid("epsilon_p", "required for thm2 problems"))?;
            if values.len() != n {
                return Err(invalid("epsilon_p", format!("expected {n} entries")));
            }
            let eps_p = FpChar::on_whole_group(p, &values);
            let mut images = vec![None; n];
            for (x, m) in entries {
                images[x] = Some(
                    Gl2Elt::from_entries(p, m).map_err(|e| invalid(format!("rho.{x}"), e))?,
                );
            }
            let rho = LinRep::new(p, sub.clone(), images).map_err(|e| invalid("rho", e))?;
            let problem = match file.tau {
                Some(tau) => Thm2Problem::with_tau(group, sub, rho, eps_p, tau),
                None => Thm2Problem::new(group, sub, rho, eps_p),
            }
            .map_err(|e| invalid("thm2", e))?;
            if let Some(eps) = &file.epsilon {
                if eps.as_slice() != problem.eps().values() {
                    return Err(invalid("epsilon", "disagrees with epsilon_p mod squares"));
                }
            }
            Ok(Problem::Thm2(problem))
        }
    }
}

pub fn descent_to_file(problem: &DescentProblem, name: Option<&str>) -> ProblemFile {
    let g = problem.group();
    ProblemFile {
        name: name.map(str::to_owned),
        task: Task::Descent,
        p: problem.prime().get() as u64,
        v: Some(problem.v()),
        group: g.to_spec(),
        subgroup_gens: problem.sub().generators(g),
        epsilon: Some(problem.eps().values().to_vec()),
        rho: problem
            .rho()
            .as_map()
            .into_iter()
            .map(|(x, m)| (x.to_string(), m.mat().entries().map(i64::from)))
            .collect(),
        epsilon_p: None,
        tau: None,
    }
}

pub fn thm2_to_file(problem: &Thm2Problem, name: Option<&str>) -> ProblemFile {
    let g = problem.group();
    ProblemFile {
        name: name.map(str::to_owned),
        task: Task::Thm2,
        p: problem.prime().get() as u64,
        v: None,
        group: g.to_spec(),
        subgroup_gens: problem.sub().generators(g),
        epsilon: None,
        rho: problem
            .rho()
            .as_map()
            .into_iter()
            .map(|(x, m)| (x.to_string(), m.mat().entries().map(i64::from)))
            .collect(),
        epsilon_p: Some(
            problem
                .eps_p()
                .values()
                .iter()
                .map(|v| v.expect("defined on G"))
                .collect(),
        ),
        tau: Some(problem.tau()),
    }
}

pub fn problem_to_file(problem: &Problem, name: Option<&str>) -> ProblemFile {
    match problem {
        Problem::Descent(d) => descent_to_file(d, name),
        Problem::Thm2(t) => thm2_to_file(t, name),
    }
}

/// Pretty JSON with a trailing newline.
pub fn emit<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn minimal_c2_file() {
        let text = r#"{"p": 7, "group": {"perm_gens": [[1, 0]]}, "epsilon": [1, -1],
                       "rho": {"0": [1, 0, 0, 1]}}"#;
        let (_, Problem::Descent(prob)) = parse_problem_str(text).unwrap() else { panic!() };
        assert_eq!(prob.v(), 3);
        assert_eq!(prob.sub().order(), 1);
    }

    #[test]
    fn round_trips() {
        for prob in [
            fixtures::c2_trivial(),
            fixtures::s3_diag12(),
            fixtures::c14_unipotent(),
            fixtures::affine_borel_index2(),
        ] {
            let text = emit(&descent_to_file(&prob, Some("x")));
            let (file, Problem::Descent(back)) = parse_problem_str(&text).unwrap() else {
                panic!()
            };
            assert_eq!(emit(&file), text);
            assert_eq!(back.group(), prob.group());
            assert_eq!(back.sub(), prob.sub());
            assert_eq!(back.eps(), prob.eps());
            assert_eq!(back.rho(), prob.rho());
            assert_eq!(back.v(), prob.v());
        }
        let thm2 = fixtures::thm2_klein(Prime::new(13).unwrap());
        let text = emit(&thm2_to_file(&thm2, None));
        let (file, Problem::Thm2(back)) = parse_problem_str(&text).unwrap() else { panic!() };
        assert_eq!(emit(&file), text);
        assert_eq!(back.rho(), thm2.rho());
        assert_eq!(back.tau(), thm2.tau());
    }

    #[test]
    fn rejections_name_the_field() {
        let bad_eps = r#"{"p": 7, "group": {"perm_gens": [[1, 2, 0]]}, "epsilon": [1, -1, 1],
                         "rho": {"0": [1, 0, 0, 1]}}"#;
        let err = parse_problem_str(bad_eps).unwrap_err().to_string();
        assert_eq!(err, "epsilon: not multiplicative at (1, 2)");

        let unknown = r#"{"p": 7, "group": {"perm_gens": [[1, 0]]}, "epsilon": [1, -1],
                         "rho": {"0": [1, 0, 0, 1]}, "extra": 1}"#;
        assert!(matches!(parse_problem_str(unknown), Err(ParseError::Json(_))));

        let small_p = r#"{"p": 5, "group": {"perm_gens": [[1, 0]]}, "epsilon": [1, -1],
                         "rho": {"0": [1, 0, 0, 1]}}"#;
        assert!(parse_problem_str(small_p).unwrap_err().to_string().starts_with("p:"));

        let square_v = r#"{"p": 7, "v": 2, "group": {"perm_gens": [[1, 0]]}, "epsilon": [1, -1],
                          "rho": {"0": [1, 0, 0, 1]}}"#;
        assert!(parse_problem_str(square_v).unwrap_err().to_string().starts_with("v:"));
    }
}
