//! The fixed synthetic corpus: named problems plus seeded random ones.

use std::ops::ControlFlow;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elliptic::Thm2Problem;
use crate::fixtures;
use crate::fp_linalg::{
    det_fiber, enumerate_projective, smallest_nonresidue, Gl2Elt, Pgl2Elt, Prime,
    ProjectiveGroup,
};
use crate::groups::library::{cyclic, dihedral, direct_product, klein4, small_groups};
use crate::groups::{
    all_quadratic_chars, all_subgroups, cyclic_quotient_data, element_order, subgroup_closure,
    verify_character, AnyChar, FiniteGroup, FpChar, QuadChar, Subgroup,
};
use crate::io::Problem;
use crate::reps::{hom_candidates, DescentProblem, ExtensionSearch, HomLaw, LinRep, ProjRep};

pub const CORPUS_SEED: u64 = 20_240_607;
pub const CORPUS_PRIMES: [u64; 3] = [7, 11, 13];

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub problem: Problem,
    /// Known answer, when the construction guarantees one.
    pub expected: Option<bool>,
}

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("corpus prime")
}

/// A homomorphism `K -> PGL_2(F_p)` with determinant class `eps`, extending
/// `base` (values on a subgroup of `K`), found by depth-first search over
/// shuffled candidate lists.
pub fn random_hom(
    rng: &mut impl Rng,
    group: &FiniteGroup,
    target: &Subgroup,
    base: Vec<Option<Pgl2Elt>>,
    eps: &QuadChar,
    p: Prime,
) -> Option<ProjRep> {
    let mut cands = hom_candidates(p, group, Some(eps));
    let search = ExtensionSearch::new(group, target, base, HomLaw, |t| {
        let mut c = cands(t);
        c.shuffle(rng);
        c
    });
    let mut found = None;
    search.run(u64::MAX, |values| {
        found = Some(values.to_vec());
        ControlFlow::Break(())
    });
    found.map(|v| ProjRep::new(p, target.clone(), v).expect("total on target"))
}

fn identity_base(group: &FiniteGroup, p: Prime) -> Vec<Option<Pgl2Elt>> {
    let mut base = vec![None; group.order()];
    base[0] = Some(Pgl2Elt::identity(p));
    base
}

/// A random `R : G -> PGL_2` with `det R = eps` and a descent problem
/// `(G, H, eps, R|_H)` built from it.
#[derive(Debug, Clone)]
pub struct Restriction {
    pub problem: DescentProblem,
    pub extension: ProjRep,
}

fn random_groups() -> Vec<FiniteGroup> {
    let mut out: Vec<FiniteGroup> = small_groups().into_iter().filter(|g| g.order() > 1).collect();
    out.push(dihedral(5));
    out.push(dihedral(6));
    out.push(cyclic(12));
    out
}

fn nontrivial_chars(g: &FiniteGroup) -> Vec<QuadChar> {
    all_quadratic_chars(g).into_iter().filter(|c| !c.is_trivial()).collect()
}

/// Draws a restriction problem with `[G : H] <= max_index`; when `cyclic`
/// is set, `H` is normal with cyclic quotient.
pub fn random_restriction(
    rng: &mut impl Rng,
    groups: &[FiniteGroup],
    p: Prime,
    max_index: usize,
    cyclic: bool,
) -> Restriction {
    loop {
        let g = groups.choose(rng).expect("nonempty");
        let chars = nontrivial_chars(g);
        let Some(eps) = chars.choose(rng) else { continue };
        let subs: Vec<Subgroup> = all_subgroups(g)
            .into_iter()
            .filter(|h| h.order() * max_index >= g.order())
            .filter(|h| !cyclic || cyclic_quotient_data(g, h).is_some())
            .collect();
        let Some(h) = subs.choose(rng) else { continue };
        let r = random_hom(rng, g, &g.whole(), identity_base(g, p), eps, p).expect("eta extends");
        let problem = DescentProblem::new(
            g.clone(),
            h.clone(),
            eps.clone(),
            r.restrict(h),
            p,
            smallest_nonresidue(p),
        )
        .expect("restriction of a valid extension");
        return Restriction {
            problem,
            extension: r,
        };
    }
}

/// A random `rho : H -> PGL_2` with the cyclotomic determinant, not
/// necessarily extendable.
pub fn random_rho(
    rng: &mut impl Rng,
    groups: &[FiniteGroup],
    p: Prime,
    max_index: usize,
) -> DescentProblem {
    loop {
        let g = groups.choose(rng).expect("nonempty");
        let chars = nontrivial_chars(g);
        let Some(eps) = chars.choose(rng) else { continue };
        let subs: Vec<Subgroup> = all_subgroups(g)
            .into_iter()
            .filter(|h| !h.is_trivial() && h.order() < g.order() && h.order() * max_index >= g.order())
            .collect();
        let Some(h) = subs.choose(rng) else { continue };
        let Some(rho) = random_hom(rng, g, h, identity_base(g, p), eps, p) else { continue };
        return DescentProblem::new(g.clone(), h.clone(), eps.clone(), rho, p, smallest_nonresidue(p))
            .expect("valid by construction");
    }
}

/// Every character `G -> F_p^*` of a small group.
fn all_fp_chars(g: &FiniteGroup, p: Prime) -> Vec<FpChar> {
    let gens = g.whole().generators(g);
    let units: Vec<u32> = (1..p.get()).collect();
    let mut out = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let mut values = vec![None; g.order()];
        values[0] = Some(1u32);
        let mut queue = vec![0usize];
        let mut ok = true;
        while let Some(x) = queue.pop() {
            for (i, &s) in gens.iter().enumerate() {
                let y = g.mul(x, s);
                let v = p.mul(values[x].expect("set"), units[choice[i]]);
                match values[y] {
                    None => {
                        values[y] = Some(v);
                        queue.push(y);
                    }
                    Some(w) if w != v => ok = false,
                    _ => {}
                }
            }
        }
        if ok {
            let chi = FpChar::new(p, values);
            if verify_character(g, AnyChar::Fp(&chi)).is_ok() {
                out.push(chi);
            }
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return out;
            }
            choice[i] += 1;
            if choice[i] < units.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// A random thm2 problem over a small abelian group, with `H` cyclic.
pub fn random_thm2(rng: &mut impl Rng, p: Prime) -> Thm2Problem {
    let groups = [
        cyclic(2),
        cyclic(4),
        cyclic(6),
        klein4(),
        direct_product(&cyclic(2), &cyclic(4)),
    ];
    loop {
        let g = groups.choose(rng).expect("nonempty");
        let s = rng.gen_range(0..g.order());
        let h = subgroup_closure(g, &[s]).expect("element");
        if h.order() == g.order() || cyclic_quotient_data(g, &h).is_none() {
            continue;
        }
        let chars = all_fp_chars(g, p);
        let eps_p = chars.choose(rng).expect("trivial character exists").clone();
        let order = element_order(g, s) as i64;
        let det = eps_p.value(s).expect("on G");
        let options: Vec<Gl2Elt> = det_fiber(p, det)
            .into_iter()
            .filter(|a| a.pow(order) == Gl2Elt::identity(p))
            .collect();
        let Some(a) = options.choose(rng) else { continue };
        let mut images = vec![None; g.order()];
        let mut x = 0;
        for k in 0..order {
            images[x] = Some(a.pow(k));
            x = g.mul(x, s);
        }
        let rho = LinRep::new(p, h.clone(), images).expect("table");
        if let Ok(problem) = Thm2Problem::new(g.clone(), h, rho, eps_p) {
            return problem;
        }
    }
}

fn named(name: &str, problem: DescentProblem, expected: Option<bool>) -> CorpusEntry {
    CorpusEntry {
        name: name.to_owned(),
        problem: Problem::Descent(problem),
        expected,
    }
}

fn named_thm2(name: &str, problem: Thm2Problem, expected: Option<bool>) -> CorpusEntry {
    CorpusEntry {
        name: name.to_owned(),
        problem: Problem::Thm2(problem),
        expected,
    }
}

/// C2 over the trivial group with trivial `rho`, at any prime.
fn c2_trivial_at(p: Prime) -> DescentProblem {
    let base = fixtures::c2_trivial();
    DescentProblem::new(
        base.group().clone(),
        base.sub().clone(),
        base.eps().clone(),
        ProjRep::trivial(p, 2, base.sub()),
        p,
        smallest_nonresidue(p),
    )
    .expect("valid at every prime")
}

/// The named problems followed by the seeded random ones; identical on
/// every call.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for &p in &CORPUS_PRIMES {
        out.push(named(&format!("c2_trivial_p{p}"), c2_trivial_at(prime(p)), Some(true)));
    }
    out.push(named("s3_diag12", fixtures::s3_diag12(), Some(true)));
    out.push(named("s3_full", fixtures::s3_full(), Some(true)));
    out.push(named("s3_over_transposition", fixtures::s3_over_transposition(), Some(true)));
    out.push(named("c14_unipotent", fixtures::c14_unipotent(), Some(false)));
    out.push(named("agl1_7_translations", fixtures::affine_unipotent(), Some(true)));
    out.push(named("agl1_7_squares", fixtures::affine_borel_index2(), Some(true)));
    for p in [prime(7), prime(13)] {
        let involution = enumerate_projective(p, ProjectiveGroup::Psl)
            .into_iter()
            .find(|y| !y.is_identity() && (*y * *y).is_identity())
            .expect("PSL_2 has involutions");
        for (tag, y) in [("identity", Pgl2Elt::identity(p)), ("involution", involution)] {
            let prob = fixtures::c4_over_c2(p, y).expect("valid");
            out.push(named(&format!("c4_over_c2_{tag}_p{}", p.get()), prob, None));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
    let groups = random_groups();
    // Abelian groups almost always give extendable rho; these mix verdicts.
    let nonabelian: Vec<FiniteGroup> = groups.iter().filter(|g| !g.is_abelian()).cloned().collect();
    for &p in &CORPUS_PRIMES {
        for i in 0..9 {
            let r = random_restriction(&mut rng, &groups, prime(p), 4, false);
            out.push(named(&format!("restriction_p{p}_{i}"), r.problem, Some(true)));
        }
        for i in 0..8 {
            let prob = random_rho(&mut rng, &nonabelian, prime(p), 4);
            out.push(named(&format!("random_rho_p{p}_{i}"), prob, None));
        }
    }

    out.push(named_thm2("thm2_klein_p7", fixtures::thm2_klein(prime(7)), Some(true)));
    out.push(named_thm2("thm2_klein_p13", fixtures::thm2_klein(prime(13)), Some(true)));
    for &p in &CORPUS_PRIMES {
        out.push(named_thm2(
            &format!("thm2_trivial_rho_p{p}"),
            fixtures::thm2_trivial_rho(prime(p)),
            Some(true),
        ));
    }
    out.push(named_thm2("thm2_c14_unipotent", fixtures::thm2_c14_unipotent(), Some(false)));
    for &p in &CORPUS_PRIMES {
        for i in 0..4 {
            out.push(named_thm2(
                &format!("thm2_random_p{p}_{i}"),
                random_thm2(&mut rng, prime(p)),
                None,
            ));
        }
    }
    out
}

/// `count` seeded restrictions over `p = 7` with `H` normal and `G/H`
/// cyclic, for round-trip checks.
pub fn cyclic_restrictions(seed: u64, count: usize) -> Vec<Restriction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let groups: Vec<FiniteGroup> = small_groups().into_iter().filter(|g| g.order() > 1).collect();
    (0..count)
        .map(|_| random_restriction(&mut rng, &groups, prime(7), 8, true))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let c = corpus();
        let descent = c.iter().filter(|e| matches!(e.problem, Problem::Descent(_))).count();
        assert!(descent >= 50, "{descent}");
        for &p in &CORPUS_PRIMES {
            assert!(c.iter().any(|e| match &e.problem {
                Problem::Descent(d) => d.prime().get() as u64 == p,
                Problem::Thm2(_) => false,
            }));
        }
        let mut names: Vec<&str> = c.iter().map(|e| e.name.as_str()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), c.len());
    }

    #[test]
    fn corpus_is_deterministic() {
        let a: Vec<String> = corpus()
            .iter()
            .map(|e| crate::io::emit(&crate::io::problem_to_file(&e.problem, Some(&e.name))))
            .collect();
        let b: Vec<String> = corpus()
            .iter()
            .map(|e| crate::io::emit(&crate::io::problem_to_file(&e.problem, Some(&e.name))))
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn fp_chars_of_c4() {
        let p = prime(13);
        let chars = all_fp_chars(&cyclic(4), p);
        // Homs C4 -> F_13^*: elements of order dividing 4.
        assert_eq!(chars.len(), (1..13u32).filter(|&u| p.pow(u, 4) == 1).count());
    }
}
