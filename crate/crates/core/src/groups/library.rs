//! Small named groups used by fixtures, the corpus and tests.

use super::FiniteGroup;

pub fn cyclic(n: usize) -> FiniteGroup {
    let gen: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    FiniteGroup::from_perm_gens(&[gen]).expect("cyclic group")
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
    FiniteGroup::from_perm_gens(&[rot, refl]).expect("dihedral group")
}

pub fn symmetric3() -> FiniteGroup {
    FiniteGroup::from_perm_gens(&[vec![1, 2, 0], vec![1, 0, 2]]).expect("S3")
}

pub fn symmetric4() -> FiniteGroup {
    FiniteGroup::from_perm_gens(&[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]).expect("S4")
}

/// Left-regular action on `{1, i, j, k, -1, -i, -j, -k}`.
pub fn quaternion8() -> FiniteGroup {
    let i = vec![1, 4, 3, 6, 5, 0, 7, 2];
    let j = vec![2, 7, 4, 1, 6, 3, 0, 5];
    FiniteGroup::from_perm_gens(&[i, j]).expect("Q8")
}

pub fn klein4() -> FiniteGroup {
    direct_product(&cyclic(2), &cyclic(2))
}

pub fn elementary_abelian8() -> FiniteGroup {
    direct_product(&klein4(), &cyclic(2))
}

/// `A x B` with `(a, b)` stored at index `a * |B| + b`.
pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let nb = b.order();
    let n = a.order() * nb;
    let rows: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb))
                .collect()
        })
        .collect();
    FiniteGroup::from_cayley(&rows).expect("direct product")
}

/// `x -> a x + b` over `F_q`, generated by translation and multiplication by
/// the smallest primitive root.
pub fn affine_line(q: usize) -> FiniteGroup {
    let root = (2..q)
        .find(|&g| (1..q - 1).all(|k| pow_mod(g, k, q) != 1))
        .expect("prime modulus");
    let shift: Vec<usize> = (0..q).map(|x| (x + 1) % q).collect();
    let scale: Vec<usize> = (0..q).map(|x| x * root % q).collect();
    FiniteGroup::from_perm_gens(&[shift, scale]).expect("affine group")
}

fn pow_mod(b: usize, e: usize, m: usize) -> usize {
    (0..e).fold(1, |acc, _| acc * b % m)
}

/// Every group of order at most 8, up to isomorphism.
pub fn small_groups() -> Vec<FiniteGroup> {
    vec![
        cyclic(1),
        cyclic(2),
        cyclic(3),
        cyclic(4),
        klein4(),
        cyclic(5),
        cyclic(6),
        symmetric3(),
        cyclic(7),
        cyclic(8),
        direct_product(&cyclic(2), &cyclic(4)),
        elementary_abelian8(),
        dihedral(4),
        quaternion8(),
    ]
}
