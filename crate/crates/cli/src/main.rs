use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use descent_core::corpus::corpus;
use descent_core::descent::{
    cross_validate, max_nodes, solve_cyclic, solve_theorem1, solve_via_props, survey,
    survey_choices, DescentError, DescentVerdict, SurveyFile,
};
use descent_core::elliptic::{
    classify_iq, lift_witness, pgl_criterion, thm2_search, thm2_witnesses, Thm2Problem, Thm2Witness,
};
use descent_core::fp_linalg::{Gl2Elt, InvolutionClass, Pgl2Elt, Prime};
use descent_core::groups::build_group;
use descent_core::io::{emit, parse_problem, problem_to_file, Problem, Task};
use descent_core::reps::DescentProblem;

/// Decides whether twists of X(p) by projective mod-p representations
/// descend to Q.
#[derive(Parser)]
#[command(name = "descent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extension search, falling back to the cyclic and Prop routes.
    Check { file: PathBuf },
    /// Runs every applicable route and checks that they agree.
    Verify { file: PathBuf },
    /// The GL_2 lifting criterion for an elliptic-curve problem.
    Thm2 { file: PathBuf },
    /// Involution class of the witnesses when F is imaginary quadratic.
    Classify { file: PathBuf },
    /// Counts descending representations of a group, up to conjugacy.
    Survey {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        p: u64,
    },
    /// Writes the synthetic corpus and a manifest.
    Corpus {
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Refused(String),
    Error(String),
}

impl From<DescentError> for Failure {
    fn from(e: DescentError) -> Failure {
        match e {
            DescentError::Refused { .. } | DescentError::NoRoute => Failure::Refused(e.to_string()),
            e => Failure::Error(e.to_string()),
        }
    }
}

fn error(e: impl ToString) -> Failure {
    Failure::Error(e.to_string())
}

fn load(path: &Path) -> Result<Problem, Failure> {
    parse_problem(path).map(|(_, p)| p).map_err(error)
}

fn load_descent(path: &Path) -> Result<DescentProblem, Failure> {
    match load(path)? {
        Problem::Descent(d) => Ok(d),
        Problem::Thm2(_) => Err(error("expected a descent problem, got a thm2 problem")),
    }
}

fn load_thm2(path: &Path) -> Result<Thm2Problem, Failure> {
    match load(path)? {
        Problem::Thm2(t) => Ok(t),
        Problem::Descent(_) => Err(error("expected a thm2 problem, got a descent problem")),
    }
}

fn check(problem: &DescentProblem) -> Result<DescentVerdict, Failure> {
    let mut refusals = Vec::new();
    for solve in [solve_theorem1, solve_cyclic, solve_via_props] {
        match solve(problem) {
            Ok(v) => return Ok(v),
            Err(e @ (DescentError::Refused { .. } | DescentError::NotApplicable { .. })) => {
                refusals.push(e.to_string())
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(Failure::Refused(refusals.join("; ")))
}

#[derive(Serialize)]
struct Thm2Report {
    holds: bool,
    witness: Option<Thm2Witness>,
    pgl_witness: Option<Pgl2Elt>,
    lifted: Option<Gl2Elt>,
    witness_count: usize,
}

fn thm2_report(problem: &Thm2Problem) -> Result<Thm2Report, Failure> {
    let witness = thm2_search(problem);
    let pgl_witness = pgl_criterion(problem);
    if witness.is_some() != pgl_witness.is_some() {
        return Err(error("GL_2 search and PGL_2 criterion disagree"));
    }
    let target = problem.eps_p().value(problem.tau()).expect("eps_p is total");
    let lifted = pgl_witness
        .as_ref()
        .map(|g| lift_witness(g, target))
        .transpose()
        .map_err(error)?;
    Ok(Thm2Report {
        holds: witness.is_some(),
        witness,
        pgl_witness,
        lifted,
        witness_count: thm2_witnesses(problem).len(),
    })
}

#[derive(Serialize)]
struct ClassifyReport {
    witness: Option<Thm2Witness>,
    class: Option<InvolutionClass>,
    counts: Vec<ClassCount>,
}

#[derive(Serialize)]
struct ClassCount {
    #[serde(flatten)]
    class: InvolutionClass,
    witnesses: usize,
}

fn classify(problem: &Thm2Problem) -> Result<ClassifyReport, Failure> {
    let all = thm2_witnesses(problem);
    let mut counts: Vec<ClassCount> = Vec::new();
    for w in &all {
        let class = classify_iq(problem, w).map_err(error)?;
        match counts.iter_mut().find(|c| c.class == class) {
            Some(c) => c.witnesses += 1,
            None => counts.push(ClassCount { class, witnesses: 1 }),
        }
    }
    Ok(ClassifyReport {
        class: counts.first().map(|c| c.class),
        witness: all.into_iter().next(),
        counts,
    })
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    name: String,
    task: Task,
    p: u64,
    expected: Option<bool>,
}

fn write_corpus(out: &Path) -> Result<String, Failure> {
    fs::create_dir_all(out).map_err(error)?;
    let mut manifest = Vec::new();
    for entry in corpus() {
        let file = problem_to_file(&entry.problem, Some(&entry.name));
        let name = format!("{}.json", entry.name);
        fs::write(out.join(&name), emit(&file)).map_err(error)?;
        manifest.push(ManifestEntry {
            file: name,
            name: entry.name,
            task: file.task,
            p: file.p,
            expected: entry.expected,
        });
    }
    let text = emit(&manifest);
    fs::write(out.join("manifest.json"), &text).map_err(error)?;
    Ok(text)
}

fn run_survey(path: &Path, p: u64) -> Result<(String, bool), Failure> {
    let text = fs::read_to_string(path).map_err(|e| error(format!("{}: {e}", path.display())))?;
    let file: SurveyFile = serde_json::from_str(&text).map_err(error)?;
    let p = Prime::new(p).map_err(|e| error(format!("p: {e}")))?;
    let group = build_group(&file.group).map_err(|e| error(format!("group: {e}")))?;
    let (subs, chars) = survey_choices(&group, &file).map_err(error)?;
    let table = survey(&group, &subs, &chars, p, max_nodes())?;
    Ok((emit(&table), table.undecided() > 0))
}

fn run(command: Command) -> Result<(String, bool), Failure> {
    let done = |s: String| Ok((s, false));
    match command {
        Command::Check { file } => match load(&file)? {
            Problem::Descent(d) => done(emit(&check(&d)?)),
            Problem::Thm2(t) => done(emit(&thm2_report(&t)?)),
        },
        Command::Verify { file } => done(emit(&cross_validate(&load_descent(&file)?)?)),
        Command::Thm2 { file } => done(emit(&thm2_report(&load_thm2(&file)?)?)),
        Command::Classify { file } => done(emit(&classify(&load_thm2(&file)?)?)),
        Command::Survey { group, p } => run_survey(&group, p),
        Command::Corpus { out } => done(write_corpus(&out)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok((report, refused)) => {
            print!("{report}");
            ExitCode::from(if refused { 2 } else { 0 })
        }
        Err(Failure::Refused(why)) => {
            eprintln!("refused: {why}");
            ExitCode::from(2)
        }
        Err(Failure::Error(why)) => {
            eprintln!("error: {why}");
            ExitCode::from(1)
        }
    }
}
