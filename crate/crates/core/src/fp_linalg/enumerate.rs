//! Enumeration and conjugacy in GL_2, PGL_2 and PSL_2.

use serde::{Deserialize, Serialize};

use super::field::{DetClass, Prime};
use super::matrix::{Gl2Elt, Mat2, Pgl2Elt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjectiveGroup {
    Pgl,
    Psl,
}

/// Canonical classes of `PGL_2(F_p)` or `PSL_2(F_p)`, sorted by scan order.
///
/// Canonical representatives are exactly `[[0,1],[c,d]]` with `c != 0` and
/// `[[1,b],[c,d]]` with `d != bc`, so they are generated directly in order.
/// `|PGL_2(F_p)| = p (p - 1) (p + 1)`.
pub fn pgl_order(p: Prime) -> u64 {
    let n = p.get() as u64;
    n * (n - 1) * (n + 1)
}

/// `|PSL_2(F_p)|`, half of `|PGL_2(F_p)|` for odd `p`.
pub fn psl_order(p: Prime) -> u64 {
    pgl_order(p) / 2
}

pub fn enumerate_projective(p: Prime, which: ProjectiveGroup) -> Vec<Pgl2Elt> {
    let n = p.get() as i64;
    let mut out = Vec::with_capacity((n * (n * n - 1)) as usize);
    let mut push = |e: [i64; 4]| {
        let m = Mat2::new(p, e);
        if m.is_invertible() {
            let x = Pgl2Elt::from_canonical_entries(p, e).expect("generated canonical");
            if which == ProjectiveGroup::Pgl || x.det_class() == DetClass::Square {
                out.push(x);
            }
        }
    };
    for c in 0..n {
        for d in 0..n {
            push([0, 1, c, d]);
        }
    }
    for b in 0..n {
        for c in 0..n {
            for d in 0..n {
                push([1, b, c, d]);
            }
        }
    }
    out
}

/// All of `GL_2(F_p)` in scan order.
pub fn enumerate_gl2(p: Prime) -> Vec<Gl2Elt> {
    let n = p.get() as i64;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if let Ok(g) = Gl2Elt::from_entries(p, [a, b, c, d]) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

/// Elements of `GL_2(F_p)` with prescribed determinant, in scan order.
pub fn det_fiber(p: Prime, det: u32) -> Vec<Gl2Elt> {
    enumerate_gl2(p)
        .into_iter()
        .filter(|g| g.det() == det % p.get())
        .collect()
}

/// First `S` in scan order with `S A S^-1 = B`.
pub fn similarity_witness(a: &Gl2Elt, b: &Gl2Elt) -> Option<Gl2Elt> {
    assert_eq!(a.prime(), b.prime(), "mixed primes");
    enumerate_gl2(a.prime())
        .into_iter()
        .find(|s| *s * *a == *b * *s)
}

/// Whether only the identity class commutes with every element of `set`.
pub fn centralizer_is_trivial(set: &[Pgl2Elt]) -> bool {
    let p = set.first().expect("nonempty set").prime();
    enumerate_projective(p, ProjectiveGroup::Pgl)
        .iter()
        .filter(|g| set.iter().all(|x| g.commutes_with(x)))
        .all(|g| g.is_identity())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn orders_match_formula() {
        for n in [7u64, 11, 13] {
            let pr = p(n);
            let pgl = enumerate_projective(pr, ProjectiveGroup::Pgl);
            let psl = enumerate_projective(pr, ProjectiveGroup::Psl);
            let expected = (n * (n - 1) * (n + 1)) as usize;
            assert_eq!(pgl.len(), expected);
            assert_eq!(psl.len(), expected / 2);
            assert!(pgl.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
        }
        assert_eq!(enumerate_projective(p(7), ProjectiveGroup::Pgl).len(), 336);
        assert_eq!(enumerate_projective(p(7), ProjectiveGroup::Psl).len(), 168);
        assert_eq!(enumerate_projective(p(11), ProjectiveGroup::Pgl).len(), 1320);
    }

    #[test]
    fn enumeration_matches_dedup_of_gl2() {
        let pr = p(7);
        let gl2 = enumerate_gl2(pr);
        assert_eq!(gl2.len(), 2016);
        let classes: HashSet<Pgl2Elt> = gl2.iter().map(|g| g.projectivize()).collect();
        let listed: HashSet<Pgl2Elt> = enumerate_projective(pr, ProjectiveGroup::Pgl)
            .into_iter()
            .collect();
        assert_eq!(classes, listed);
    }

    #[test]
    fn coset_decomposition_by_v() {
        let pr = p(7);
        let (_, v) = crate::fp_linalg::standard_v(pr, 3).unwrap();
        let psl = enumerate_projective(pr, ProjectiveGroup::Psl);
        let mut all: Vec<Pgl2Elt> = psl.to_vec();
        all.extend(psl.iter().map(|x| *x * v));
        all.sort();
        all.dedup();
        assert_eq!(all, enumerate_projective(pr, ProjectiveGroup::Pgl));
    }

    #[test]
    fn similarity_examples() {
        let pr = p(7);
        let d16 = Gl2Elt::from_entries(pr, [1, 0, 0, 6]).unwrap();
        let d61 = Gl2Elt::from_entries(pr, [6, 0, 0, 1]).unwrap();
        let s = similarity_witness(&d16, &d61).unwrap();
        assert_eq!(s.mat().entries(), [0, 1, 1, 0]);
        let s = similarity_witness(&d16, &d16).unwrap();
        assert_eq!(s * d16 * s.inv(), d16);
        let u = Gl2Elt::from_entries(pr, [1, 1, 0, 1]).unwrap();
        assert_eq!(similarity_witness(&d16, &u), None);
    }

    #[test]
    fn centralizer_examples() {
        let pr = p(7);
        assert!(!centralizer_is_trivial(&[Pgl2Elt::identity(pr)]));
        let d = Pgl2Elt::from_entries(pr, [1, 0, 0, 2]).unwrap();
        let w = Pgl2Elt::from_entries(pr, [0, 1, 1, 0]).unwrap();
        // diag(1,-1) commutes projectively with both generators.
        let flip = Pgl2Elt::from_entries(pr, [1, 0, 0, -1]).unwrap();
        assert!(flip.commutes_with(&d) && flip.commutes_with(&w));
        assert!(!centralizer_is_trivial(&[d, w]));
        let u = Pgl2Elt::from_entries(pr, [1, 1, 0, 1]).unwrap();
        assert!(!centralizer_is_trivial(&[u]));
        assert!(centralizer_is_trivial(&[d, u]));
    }
}
