//! Runs the acceptance criteria in order, one line per criterion.

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::Instant;

use descent_core::cohomology::{
    cocycle_extension_search_capped, enumerate_cocycles, verify_cocycle, xi_from_rep,
    CohomologyError, TwistedAction,
};
use descent_core::corpus::{corpus, cyclic_restrictions, CORPUS_SEED};
use descent_core::descent::{
    cross_validate_with, max_nodes, solve_theorem1, verdicts_across_cp,
    verdicts_across_nonresidues, verify_witness, Route,
};
use descent_core::elliptic::{pgl_criterion, thm2_search, thm2_witnesses};
use descent_core::fixtures;
use descent_core::fp_linalg::{
    classify_involution, enumerate_gl2, enumerate_projective, similarity_witness,
    smallest_nonresidue, standard_v, Gl2Elt, InvolutionClass, Prime, ProjectiveGroup,
};
use descent_core::groups::library::small_groups;
use descent_core::groups::{
    all_quadratic_chars, all_subgroups, cyclic_quotient_data, verify_character, AnyChar,
};
use descent_core::io::Problem;
use descent_core::reps::{lemma1_extend, DescentProblem, ProjRep};

type Outcome = Result<String, String>;

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn descent_problems() -> Vec<(String, DescentProblem)> {
    corpus()
        .into_iter()
        .filter_map(|e| match e.problem {
            Problem::Descent(d) => Some((e.name, d)),
            Problem::Thm2(_) => None,
        })
        .collect()
}

fn criterion1() -> Outcome {
    for p in [7u64, 11, 13] {
        let q = prime(p);
        let pgl = enumerate_projective(q, ProjectiveGroup::Pgl).len() as u64;
        let psl = enumerate_projective(q, ProjectiveGroup::Psl).len() as u64;
        let formula = p * (p - 1) * (p + 1);
        if pgl != formula || 2 * psl != formula {
            return Err(format!("p = {p}: |PGL| = {pgl}, |PSL| = {psl}, formula {formula}"));
        }
    }
    Ok("336/1320/2184 and 168/660/1092".into())
}

fn criterion2() -> Outcome {
    let mut cocycles = 0;
    let mut mutants = 0;
    for (name, prob) in descent_problems() {
        let xi = xi_from_rep(&prob).map_err(|e| format!("{name}: {e}"))?;
        verify_cocycle(prob.group(), &xi).map_err(|e| format!("{name}: {e}"))?;
        cocycles += 1;
        let v = prob.v_class();
        for &s in prob.sub().members() {
            let mut images = prob.rho().images().to_vec();
            images[s] = Some(prob.rho().image(s) * v);
            let rho = ProjRep::new(prob.prime(), prob.sub().clone(), images).unwrap();
            if DescentProblem::new(
                prob.group().clone(),
                prob.sub().clone(),
                prob.eps().clone(),
                rho.clone(),
                prob.prime(),
                prob.v(),
            )
            .is_ok()
            {
                return Err(format!("{name}: mutant at {s} accepted by the constructor"));
            }
            let bad = DescentProblem::unvalidated(
                prob.group().clone(),
                prob.sub().clone(),
                prob.eps().clone(),
                rho,
                prob.prime(),
                prob.v(),
            )
            .unwrap();
            match xi_from_rep(&bad) {
                Err(CohomologyError::DetViolated(_)) => mutants += 1,
                other => return Err(format!("{name}: mutant at {s} gave {other:?}")),
            }
        }
    }
    Ok(format!("{cocycles} cocycles verified, {mutants} mutants rejected"))
}

fn criterion3() -> Outcome {
    let p = prime(7);
    let (_, v) = standard_v(p, smallest_nonresidue(p)).unwrap();
    let mut pairs = 0;
    let mut checked = 0;
    let mut blocked = 0;
    for g in small_groups() {
        for eps in all_quadratic_chars(&g) {
            let action = TwistedAction::new(eps, v);
            let global = enumerate_cocycles(&g, &g.whole(), &action);
            for gamma in all_subgroups(&g) {
                pairs += 1;
                let image: HashSet<_> = global.iter().map(|x| x.restrict(&gamma)).collect();
                for pi in enumerate_cocycles(&g, &gamma, &action) {
                    let found = cocycle_extension_search_capped(&g, &pi, 8)
                        .map_err(|e| e.to_string())?
                        .extension;
                    if let Some(x) = &found {
                        if verify_cocycle(&g, x).is_err() || x.restrict(&gamma) != pi {
                            return Err(format!("invalid extension on group of order {}", g.order()));
                        }
                    }
                    if found.is_some() != image.contains(&pi) {
                        return Err(format!(
                            "order {} subgroup {:?}: oracle {} but restriction image {}",
                            g.order(),
                            gamma.members(),
                            found.is_some(),
                            image.contains(&pi)
                        ));
                    }
                    checked += 1;
                    blocked += usize::from(found.is_none());
                }
            }
        }
    }
    if blocked == 0 {
        return Err("no non-extendable cocycle was exercised".into());
    }
    Ok(format!("{pairs} (G, eps, Gamma) triples, {checked} cocycles, {blocked} not extendable"))
}

fn criterion4() -> Outcome {
    let mut yes = 0;
    let mut no = 0;
    let mut routes = 0;
    for (name, prob) in descent_problems() {
        let report = cross_validate_with(&prob, max_nodes(), 8).map_err(|e| format!("{name}: {e}"))?;
        for route in [Route::Thm1Direct, Route::Oracle] {
            if report.verdict(route).is_none() {
                return Err(format!("{name}: {route:?} did not run"));
            }
        }
        if report.verdict(Route::Prop3).is_none() && report.verdict(Route::Prop4).is_none() {
            return Err(format!("{name}: props route did not run"));
        }
        if cyclic_quotient_data(prob.group(), prob.sub()).is_some()
            && report.verdict(Route::CyclicLemma1).is_none()
        {
            return Err(format!("{name}: cyclic route did not run"));
        }
        routes += report.ran().count();
        if report.defined_over_q {
            yes += 1;
        } else {
            no += 1;
        }
    }
    if yes + no < 50 {
        return Err(format!("only {} problems", yes + no));
    }
    Ok(format!("{} problems ({yes} yes, {no} no), {routes} route runs", yes + no))
}

fn criterion5() -> Outcome {
    let s3 = fixtures::s3_diag12();
    let verdict = solve_theorem1(&s3).map_err(|e| e.to_string())?;
    if !verdict.defined_over_q {
        return Err("S3/diag(1,2) verdict no".into());
    }
    verify_witness(&s3, &verdict)?;
    let c14 = fixtures::c14_unipotent();
    let report = cross_validate_with(&c14, max_nodes(), 8).map_err(|e| e.to_string())?;
    if report.defined_over_q {
        return Err("C14 verdict yes".into());
    }
    let summary = report.compatibility.ok_or("C14 report lacks the compatibility summary")?;
    if summary.compatible == 0
        || summary.strongly_compatible != 0
        || summary.extends_ignoring_det != Some(true)
    {
        return Err(format!("C14 summary {summary:?}"));
    }
    Ok(format!(
        "S3 yes, C14 no with {} compatible and 0 strongly compatible",
        summary.compatible
    ))
}

fn criterion6() -> Outcome {
    let mut problems = 0;
    let mut witnesses = 0;
    for entry in corpus() {
        let Problem::Thm2(prob) = &entry.problem else { continue };
        problems += 1;
        let name = &entry.name;
        let criterion = pgl_criterion(prob).is_some();
        let search = thm2_search(prob).is_some();
        if criterion != search {
            return Err(format!("{name}: pgl_criterion {criterion}, thm2_search {search}"));
        }
        for w in thm2_witnesses(prob) {
            verify_character(prob.group(), AnyChar::Fp(&w.chi))
                .map_err(|e| format!("{name}: chi {e}"))?;
            if !w.recheck(prob) || !matches!(w.lambda, 1 | -1) {
                return Err(format!("{name}: witness {:?} fails", w.h));
            }
            witnesses += 1;
        }
    }
    Ok(format!("{problems} problems, {witnesses} witnesses"))
}

fn involutions(p: Prime) -> (Vec<Gl2Elt>, Vec<Gl2Elt>) {
    let m1 = p.minus_one();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for h in enumerate_gl2(p).into_iter().filter(|h| h.det() == m1) {
        match (h * h).mat().as_scalar() {
            Some(1) => plus.push(h),
            Some(c) if c == m1 => minus.push(h),
            _ => {}
        }
    }
    (plus, minus)
}

fn criterion7() -> Outcome {
    let p7 = prime(7);
    let (plus, minus) = involutions(p7);
    let d = Gl2Elt::from_entries(p7, [1, 0, 0, -1]).unwrap();
    if plus.len() != 56 || !minus.is_empty() {
        return Err(format!("GL2(7): {} with h^2 = I, {} with h^2 = -I", plus.len(), minus.len()));
    }
    for h in &plus {
        if similarity_witness(&d, h).is_none() {
            return Err(format!("{:?} not similar to diag(1,-1)", h.mat().entries()));
        }
        if classify_involution(h) != Ok(InvolutionClass::DiagOneMinusOne) {
            return Err(format!("{:?} misclassified", h.mat().entries()));
        }
    }
    let p13 = prime(13);
    let (_, minus) = involutions(p13);
    let scalars: Vec<Option<u32>> = minus.iter().map(|h| h.mat().as_scalar()).collect();
    if scalars != [Some(5), Some(8)] {
        return Err(format!("GL2(13) h^2 = -I witnesses: {scalars:?}"));
    }
    for h in &minus {
        let i = h.mat().as_scalar().unwrap();
        if classify_involution(h) != Ok(InvolutionClass::ScalarI(i)) {
            return Err(format!("{i}I misclassified"));
        }
    }
    Ok("GL2(7): 56, all similar to diag(1,-1), none squaring to -I; GL2(13): 5I, 8I".into())
}

fn criterion8() -> Outcome {
    let mut runs = 0;
    for (name, prob) in descent_problems() {
        let base = cross_validate_with(&prob, max_nodes(), 8)
            .map_err(|e| format!("{name}: {e}"))?
            .defined_over_q;
        for (v, verdict) in verdicts_across_nonresidues(&prob, 20).map_err(|e| format!("{name}: {e}"))? {
            runs += 1;
            if verdict != base {
                return Err(format!("{name}: v = {v} gives {verdict}"));
            }
        }
        for (c, verdict) in verdicts_across_cp(&prob).map_err(|e| format!("{name}: {e}"))? {
            runs += 1;
            if verdict != base {
                return Err(format!("{name}: c_p = {c} gives {verdict}"));
            }
        }
    }
    Ok(format!("{runs} alternative choices"))
}

fn criterion9() -> Outcome {
    let cases = cyclic_restrictions(CORPUS_SEED, 100);
    for (i, case) in cases.iter().enumerate() {
        let prob = &case.problem;
        let report = cross_validate_with(prob, max_nodes(), 8).map_err(|e| format!("#{i}: {e}"))?;
        if !report.defined_over_q {
            return Err(format!("#{i}: restriction verdict no"));
        }
        let g = prob.group();
        let (tau, d) = cyclic_quotient_data(g, prob.sub()).ok_or(format!("#{i}: not cyclic"))?;
        let r = &case.extension;
        let rebuilt = lemma1_extend(g, prob.rho(), tau, &r.image(tau), d)
            .map_err(|e| format!("#{i}: {e}"))?;
        if &rebuilt != r {
            return Err(format!("#{i}: lemma1_extend differs from R"));
        }
    }
    Ok(format!("{} round trips", cases.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("projective group orders", criterion1),
        ("xi is a cocycle, det mutants rejected", criterion2),
        ("extendability iff restriction image", criterion3),
        ("route agreement on the corpus", criterion4),
        ("named fixtures", criterion5),
        ("lifting equivalence", criterion6),
        ("involution classification", criterion7),
        ("choice independence", criterion8),
        ("round-trip closure", criterion9),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = run();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why}; {secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 9 passed in {:.2}s", 9 - failed, start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
