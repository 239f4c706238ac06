//! Named problems used throughout the tests, the corpus and the CLI.

use crate::fp_linalg::{legendre_class, Pgl2Elt, Prime};
use crate::elliptic::Thm2Problem;
use crate::fp_linalg::Gl2Elt;
use crate::groups::library::{affine_line, cyclic, klein4, symmetric3};
use crate::groups::{element_order, subgroup_closure, FiniteGroup, FpChar, QuadChar};
use crate::reps::{DescentProblem, LinRep, ProjRep};

fn prime(p: u64) -> Prime {
    Prime::new(p).expect("fixture prime")
}

fn parity_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// `C2` over the trivial subgroup with `rho` trivial; descends via `V`.
pub fn c2_trivial() -> DescentProblem {
    let p = prime(7);
    let g = cyclic(2);
    let eps = QuadChar::new(&g, vec![1, -1]).expect("sign on C2");
    let h = g.trivial();
    let rho = ProjRep::trivial(p, 2, &h);
    DescentProblem::new(g, h, eps, rho, p, 3).expect("valid fixture")
}

/// Smallest transposition of `S3` as built by [`symmetric3`].
pub fn s3_transposition(g: &FiniteGroup) -> usize {
    g.elements()
        .find(|&x| element_order(g, x) == 2)
        .expect("S3 has transpositions")
}

/// `S3` over `A3` with `rho(r) = diag(1, 2)` mod 7 and `eps` the sign.
pub fn s3_diag12() -> DescentProblem {
    let p = prime(7);
    let g = symmetric3();
    let r = g
        .elements()
        .find(|&x| element_order(&g, x) == 3)
        .expect("3-cycle");
    let h = subgroup_closure(&g, &[r]).expect("A3");
    let eps = QuadChar::new(
        &g,
        g.elements()
            .map(|x| parity_sign(g.permutation(x).expect("perm group")))
            .collect(),
    )
    .expect("sign character");
    let d = Pgl2Elt::from_entries(p, [1, 0, 0, 2]).expect("invertible");
    let mut images = vec![None; 6];
    let mut x = 0;
    for k in 0..3 {
        images[x] = Some(d.pow(k));
        x = g.mul(x, r);
    }
    let rho = ProjRep::new(p, h.clone(), images).expect("table");
    DescentProblem::new(g, h, eps, rho, p, 3).expect("valid fixture")
}

/// `S3` over itself: `rho(r) = diag(1, 2)`, `rho(s) = [[0,1],[1,0]]` mod 7.
pub fn s3_full() -> DescentProblem {
    let p = prime(7);
    let g = symmetric3();
    let r = g
        .elements()
        .find(|&x| element_order(&g, x) == 3)
        .expect("3-cycle");
    let s = s3_transposition(&g);
    let eps = QuadChar::new(
        &g,
        g.elements()
            .map(|x| parity_sign(g.permutation(x).expect("perm group")))
            .collect(),
    )
    .expect("sign character");
    let d = Pgl2Elt::from_entries(p, [1, 0, 0, 2]).expect("invertible");
    let w = Pgl2Elt::from_entries(p, [0, 1, 1, 0]).expect("invertible");
    let mut images = vec![None; 6];
    for k in 0..3 {
        for j in 0..2 {
            let x = g.mul(g.pow(r, k), g.pow(s, j));
            images[x] = Some(d.pow(k) * w.pow(j));
        }
    }
    let h = g.whole();
    let rho = ProjRep::new(p, h.clone(), images).expect("table");
    DescentProblem::new(g, h, eps, rho, p, 3).expect("valid fixture")
}

/// `S3` over the non-normal `<s>`, restricting [`s3_full`].
pub fn s3_over_transposition() -> DescentProblem {
    let full = s3_full();
    let t = s3_transposition(full.group());
    let h = subgroup_closure(full.group(), &[t]).expect("<s>");
    DescentProblem::new(
        full.group().clone(),
        h.clone(),
        full.eps().clone(),
        full.rho().restrict(&h),
        full.prime(),
        full.v(),
    )
    .expect("restriction of a valid problem")
}

/// `C14 = <tau>` over `<tau^2>` with `rho(tau^2) = [[1,1],[0,1]]` mod 7.
///
/// An extension exists, but none with the cyclotomic determinant.
pub fn c14_unipotent() -> DescentProblem {
    let p = prime(7);
    let g = cyclic(14);
    let h = subgroup_closure(&g, &[2]).expect("C7");
    let eps = QuadChar::new(&g, (0..14).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect())
        .expect("sign");
    let u = Pgl2Elt::from_entries(p, [1, 1, 0, 1]).expect("invertible");
    let images = (0..14)
        .map(|k| (k % 2 == 0).then(|| u.pow(k as i64 / 2)))
        .collect();
    let rho = ProjRep::new(p, h.clone(), images).expect("table");
    DescentProblem::new(g, h, eps, rho, p, 3).expect("valid fixture")
}

/// `(a, b)` with `perm(x) = a x + b`.
fn affine_coefficients(perm: &[usize], q: usize) -> (usize, usize) {
    let b = perm[0];
    let a = (perm[1] + q - b) % q;
    (a, b)
}

fn affine_problem(p: Prime, squares_only: bool) -> DescentProblem {
    let q = p.get() as usize;
    let g = affine_line(q);
    let coeffs: Vec<(usize, usize)> = g
        .elements()
        .map(|x| affine_coefficients(g.permutation(x).expect("perm group"), q))
        .collect();
    let eps_values: Vec<i8> = coeffs
        .iter()
        .map(|&(a, _)| legendre_class(a as u32, p).expect("unit").sign())
        .collect();
    let eps = QuadChar::new(&g, eps_values).expect("Legendre of the multiplier");
    let members: Vec<usize> = g
        .elements()
        .filter(|&x| {
            let a = coeffs[x].0;
            if squares_only {
                eps.value(x) == 1
            } else {
                a == 1
            }
        })
        .collect();
    let h = subgroup_closure(&g, &members).expect("subgroup");
    assert_eq!(h.order(), members.len());
    let images = g
        .elements()
        .map(|x| {
            h.contains(x).then(|| {
                let (a, b) = coeffs[x];
                Pgl2Elt::from_entries(p, [a as i64, b as i64, 0, 1]).expect("invertible")
            })
        })
        .collect();
    let rho = ProjRep::new(p, h.clone(), images).expect("table");
    let v = crate::fp_linalg::smallest_nonresidue(p);
    DescentProblem::new(g, h, eps, rho, p, v).expect("valid fixture")
}

/// `AGL(1,7)` over its translations with the unipotent `rho`; descends
/// through the natural affine representation (`G/H` cyclic of order 6).
pub fn affine_unipotent() -> DescentProblem {
    affine_problem(prime(7), false)
}

/// `AGL(1,7)` over the index-2 subgroup of square multipliers, with the
/// natural Borel representation. Its projective centralizer is trivial.
pub fn affine_borel_index2() -> DescentProblem {
    affine_problem(prime(7), true)
}

/// `C4 = <t>` over `<t^2>` with `eps(t) = -1` and `rho(t^2) = y`.
pub fn c4_over_c2(p: Prime, y: Pgl2Elt) -> Result<DescentProblem, crate::reps::ProblemError> {
    let g = cyclic(4);
    let h = subgroup_closure(&g, &[2]).expect("C2");
    let eps = QuadChar::new(&g, vec![1, -1, 1, -1]).expect("sign");
    let mut images = vec![None; 4];
    images[0] = Some(Pgl2Elt::identity(p));
    images[2] = Some(y);
    let rho = ProjRep::new(p, h.clone(), images)?;
    let v = crate::fp_linalg::smallest_nonresidue(p);
    DescentProblem::new(g, h, eps, rho, p, v)
}

/// `C2 x C2 = <tau, s>` over `<s>` with `rho(s) = diag(1, -1)` and
/// `eps_p(tau) = eps_p(s) = -1`.
pub fn thm2_klein(p: Prime) -> Thm2Problem {
    let g = klein4();
    // klein4 is Z2 x Z2 with index 2a + b: s = 1, tau = 2.
    let h = subgroup_closure(&g, &[1]).expect("<s>");
    let m1 = p.minus_one();
    let eps_p = FpChar::on_whole_group(p, &[1, m1, m1, 1]);
    let mut images = vec![None; 4];
    images[0] = Some(Gl2Elt::identity(p));
    images[1] = Some(Gl2Elt::from_entries(p, [1, 0, 0, -1]).expect("invertible"));
    let rho = LinRep::new(p, h.clone(), images).expect("table");
    Thm2Problem::new(g, h, rho, eps_p).expect("valid fixture")
}

/// `C2` over the trivial subgroup with `eps_p(tau) = -1`.
pub fn thm2_trivial_rho(p: Prime) -> Thm2Problem {
    let g = cyclic(2);
    let h = g.trivial();
    let eps_p = FpChar::on_whole_group(p, &[1, p.minus_one()]);
    let rho = LinRep::trivial(p, 2, &h);
    Thm2Problem::new(g, h, rho, eps_p).expect("valid fixture")
}

/// `C14` over `<tau^2>` with `rho(tau^2) = [[1,1],[0,1]]` and
/// `eps_p(tau) = -1` mod 7.
pub fn thm2_c14_unipotent() -> Thm2Problem {
    let p = prime(7);
    let g = cyclic(14);
    let h = subgroup_closure(&g, &[2]).expect("C7");
    let values: Vec<u32> = (0..14).map(|k| if k % 2 == 0 { 1 } else { 6 }).collect();
    let eps_p = FpChar::on_whole_group(p, &values);
    let u = Gl2Elt::from_entries(p, [1, 1, 0, 1]).expect("invertible");
    let images = (0..14)
        .map(|k| (k % 2 == 0).then(|| u.pow(k as i64 / 2)))
        .collect();
    let rho = LinRep::new(p, h.clone(), images).expect("table");
    Thm2Problem::new(g, h, rho, eps_p).expect("valid fixture")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        let s3 = s3_diag12();
        assert_eq!(s3.sub().order(), 3);
        assert_eq!(s3.eps().kernel(s3.group()), *s3.sub());
        let c14 = c14_unipotent();
        assert_eq!(c14.sub().order(), 7);
        assert_eq!(affine_unipotent().sub().order(), 7);
        assert_eq!(affine_borel_index2().sub().order(), 21);
        assert_eq!(c2_trivial().sub().order(), 1);
        assert_eq!(s3_full().sub().order(), 6);
        let p = prime(7);
        let y = Pgl2Elt::from_entries(p, [0, 1, -1, 0]).unwrap();
        assert!(c4_over_c2(p, y).is_ok());
        // A NonSquare image on H where eps is trivial is rejected.
        let bad = Pgl2Elt::from_entries(p, [1, 0, 0, -1]).unwrap();
        assert!(c4_over_c2(p, bad).is_err());
    }
}
