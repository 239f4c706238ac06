//! Finite groups given by Cayley table or permutation generators.
//!
//! These stand in for `Gal(M/Q)` of a fixed finite Galois extension; subgroups
//! play the role of `G_F`, `G_Q(p)` and their intersection.

mod characters;
pub mod library;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use characters::{all_quadratic_chars, verify_character, AnyChar, CharViolation, FpChar, QuadChar};

/// Largest group order accepted.
pub const MAX_GROUP_ORDER: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty group")]
    Empty,
    #[error("group order {0} exceeds the cap of {MAX_GROUP_ORDER}")]
    TooLarge(usize),
    #[error("Cayley table row {row} has length {len}, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("Cayley table entry ({a},{b}) = {value} is out of range")]
    OutOfRange { a: usize, b: usize, value: usize },
    #[error("element 0 is not a two-sided identity (fails at {0})")]
    IdentityNotZero(usize),
    #[error("element {0} has no inverse")]
    MissingInverse(usize),
    #[error("table is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotPermutation { index: usize, degree: usize },
    #[error("generators act on sets of different sizes")]
    MixedDegrees,
    #[error("element index {0} is out of range")]
    BadElement(usize),
}

/// A group presentation as it appears in problem files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Cayley(Vec<Vec<usize>>),
    PermGens(Vec<Vec<usize>>),
}

/// A verified finite group on the indices `0..n`, with `0` the identity.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    /// Permutations realizing the elements, when built from generators.
    perms: Option<Vec<Vec<usize>>>,
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.n)
    }
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, GroupError> {
    match spec {
        GroupSpec::Cayley(rows) => FiniteGroup::from_cayley(rows),
        GroupSpec::PermGens(gens) => FiniteGroup::from_perm_gens(gens),
    }
}

impl FiniteGroup {
    pub fn from_cayley(rows: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_GROUP_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare { row: a, len: row.len(), n });
            }
            for (b, &value) in row.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::OutOfRange { a, b, value });
                }
                table.push(value as u32);
            }
        }
        let group = FiniteGroup::verify(n, table)?;
        Ok(group)
    }

    /// Closure of permutation generators, ordered by breadth-first discovery
    /// from the identity (right multiplication by each generator in turn).
    pub fn from_perm_gens(gens: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
        let degree = gens.first().map_or(1, Vec::len);
        for (index, g) in gens.iter().enumerate() {
            if g.len() != degree {
                return Err(GroupError::MixedDegrees);
            }
            let mut seen = vec![false; degree];
            for &x in g {
                if x >= degree || seen[x] {
                    return Err(GroupError::NotPermutation { index, degree });
                }
                seen[x] = true;
            }
        }
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index = std::collections::HashMap::new();
        index.insert(identity, 0usize);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in gens {
                let prod = compose(&elements[i], g);
                if !index.contains_key(&prod) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(GroupError::TooLarge(elements.len() + 1));
                    }
                    index.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        let n = elements.len();
        let mut table = Vec::with_capacity(n * n);
        for a in &elements {
            for b in &elements {
                table.push(index[&compose(a, b)] as u32);
            }
        }
        let mut group = FiniteGroup::verify(n, table)?;
        group.perms = Some(elements);
        Ok(group)
    }

    fn verify(n: usize, table: Vec<u32>) -> Result<FiniteGroup, GroupError> {
        let at = |a: usize, b: usize| table[a * n + b] as usize;
        for x in 0..n {
            if at(0, x) != x || at(x, 0) != x {
                return Err(GroupError::IdentityNotZero(x));
            }
        }
        let mut inverse = vec![0u32; n];
        for a in 0..n {
            let b = (0..n)
                .find(|&b| at(a, b) == 0 && at(b, a) == 0)
                .ok_or(GroupError::MissingInverse(a))?;
            inverse[a] = b as u32;
        }
        // Light's test: the elements s with (xs)y = x(sy) for all x, y form a
        // closed set, so it suffices to test a generating set.
        let mut gens = Vec::new();
        let mut reached = vec![false; n];
        reached[0] = true;
        for s in 0..n {
            if !reached[s] {
                gens.push(s);
                reached = closure_in(n, &|a, b| at(a, b), &gens);
            }
        }
        for &s in &gens {
            for x in 0..n {
                let xs = at(x, s);
                for y in 0..n {
                    if at(xs, y) != at(x, at(s, y)) {
                        return Err(GroupError::NotAssociative(x, s, y));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            n,
            table,
            inverse,
            perms: None,
        })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inv(a) } else { a };
        (0..k.unsigned_abs()).fold(0, |acc, _| self.mul(acc, base))
    }

    /// `a b a^-1`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn check_element(&self, g: usize) -> Result<usize, GroupError> {
        if g < self.n {
            Ok(g)
        } else {
            Err(GroupError::BadElement(g))
        }
    }

    pub fn permutation(&self, g: usize) -> Option<&[usize]> {
        self.perms.as_ref().map(|p| p[g].as_slice())
    }

    /// A spec that rebuilds this group with the same element indices:
    /// generating permutations when closing them reproduces the table,
    /// the Cayley table otherwise.
    pub fn to_spec(&self) -> GroupSpec {
        if let Some(perms) = &self.perms {
            let gens: Vec<Vec<usize>> = self
                .whole()
                .generators(self)
                .into_iter()
                .map(|g| perms[g].clone())
                .collect();
            if FiniteGroup::from_perm_gens(&gens).is_ok_and(|rebuilt| rebuilt.table == self.table) {
                return GroupSpec::PermGens(gens);
            }
        }
        GroupSpec::Cayley(self.cayley_rows())
    }

    pub fn cayley_rows(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|a| (0..self.n).map(|b| self.mul(a, b)).collect())
            .collect()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_members(self.n, (0..self.n).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_members(self.n, vec![0])
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }
}

/// `(a * b)(i) = a(b(i))`.
fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&i| a[i]).collect()
}

fn closure_in(n: usize, mul: &dyn Fn(usize, usize) -> usize, gens: &[usize]) -> Vec<bool> {
    let mut member = vec![false; n];
    member[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &g in gens {
            let y = mul(x, g);
            if !member[y] {
                member[y] = true;
                queue.push_back(y);
            }
        }
    }
    member
}

/// A subgroup, stored as a sorted member list plus a membership mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.members)
    }
}

impl Subgroup {
    fn from_members(n: usize, mut members: Vec<usize>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        let mut mask = vec![false; n];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup { members, mask }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, g: usize) -> bool {
        self.mask.get(g).copied().unwrap_or(false)
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&g| other.contains(g))
            .collect();
        Subgroup::from_members(self.mask.len(), members)
    }

    pub fn is_normal_in(&self, g: &FiniteGroup) -> bool {
        g.elements()
            .all(|x| self.members.iter().all(|&h| self.contains(g.conj(x, h))))
    }

    /// Greedy generating set: members in increasing order, each kept only if
    /// it is not already in the span of the earlier ones.
    pub fn generators(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = g.trivial();
        for &x in &self.members {
            if !span.contains(x) {
                gens.push(x);
                span = subgroup_closure(g, &gens).expect("valid members");
            }
        }
        gens
    }

    /// Elements of `g` whose conjugates of `self` stay inside `self`.
    pub fn normalizes(&self, g: &FiniteGroup, x: usize) -> bool {
        self.members.iter().all(|&h| self.contains(g.conj(x, h)))
    }
}

/// Smallest subgroup containing `gens`.
pub fn subgroup_closure(g: &FiniteGroup, gens: &[usize]) -> Result<Subgroup, GroupError> {
    for &x in gens {
        g.check_element(x)?;
    }
    let mask = closure_in(g.order(), &|a, b| g.mul(a, b), gens);
    let members = (0..g.order()).filter(|&x| mask[x]).collect();
    Ok(Subgroup::from_members(g.order(), members))
}

/// Every subgroup, by increasing order then members.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut found = vec![g.trivial()];
    let mut frontier = vec![g.trivial()];
    while let Some(sub) = frontier.pop() {
        let gens = sub.generators(g);
        for x in g.elements().filter(|&x| !sub.contains(x)) {
            let mut more = gens.clone();
            more.push(x);
            let bigger = subgroup_closure(g, &more).expect("valid elements");
            if !found.contains(&bigger) {
                found.push(bigger.clone());
                frontier.push(bigger);
            }
        }
    }
    found.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
    found
}

/// One representative per left coset `xH`, smallest index first.
pub fn coset_reps(g: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in g.elements() {
        if covered[x] {
            continue;
        }
        reps.push(x);
        for &y in h.members() {
            covered[g.mul(x, y)] = true;
        }
    }
    reps
}

/// `(tau, d)` when `H` is normal and `G/H` is cyclic of order `d`, with `tau`
/// the smallest index whose coset generates the quotient.
pub fn cyclic_quotient_data(g: &FiniteGroup, h: &Subgroup) -> Option<(usize, usize)> {
    if !h.is_normal_in(g) {
        return None;
    }
    let d = g.order() / h.order();
    g.elements()
        .find(|&t| coset_order(g, h, t) == d)
        .map(|t| (t, d))
}

/// Least `k >= 1` with `t^k` in `H`.
pub fn coset_order(g: &FiniteGroup, h: &Subgroup, t: usize) -> usize {
    let mut acc = t;
    let mut k = 1;
    while !h.contains(acc) {
        acc = g.mul(acc, t);
        k += 1;
    }
    k
}

pub fn element_order(g: &FiniteGroup, x: usize) -> usize {
    coset_order(g, &g.trivial(), x)
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;

    #[test]
    fn cayley_c2() {
        let g = FiniteGroup::from_cayley(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn perm_gens_s3() {
        // (0 1 2) and (0 1) in one-line notation.
        let g = FiniteGroup::from_perm_gens(&[vec![1, 2, 0], vec![1, 0, 2]]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        let again = FiniteGroup::from_cayley(&g.cayley_rows()).unwrap();
        assert_eq!(again.order(), 6);
    }

    #[test]
    fn rejects_non_associative() {
        // A loop of order 5 that is a Latin square with identity 0 but not a group.
        let rows = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        match FiniteGroup::from_cayley(&rows) {
            Err(GroupError::NotAssociative(x, s, y)) => {
                let at = |a: usize, b: usize| rows[a][b];
                assert_ne!(at(at(x, s), y), at(x, at(s, y)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            FiniteGroup::from_cayley(&[vec![0, 1], vec![1]]),
            Err(GroupError::NotSquare { row: 1, len: 1, n: 2 })
        );
        assert_eq!(
            FiniteGroup::from_cayley(&[vec![1, 0], vec![0, 1]]),
            Err(GroupError::IdentityNotZero(0))
        );
        assert_eq!(
            FiniteGroup::from_cayley(&[vec![0, 1], vec![1, 1]]),
            Err(GroupError::MissingInverse(1))
        );
        assert_eq!(
            FiniteGroup::from_perm_gens(&[vec![0, 0, 1]]),
            Err(GroupError::NotPermutation { index: 0, degree: 3 })
        );
        assert_eq!(
            FiniteGroup::from_perm_gens(&[vec![0, 1], vec![0, 1, 2]]),
            Err(GroupError::MixedDegrees)
        );
    }

    #[test]
    fn closures_and_cosets() {
        let s3 = symmetric3();
        assert_eq!(subgroup_closure(&s3, &[]).unwrap().members(), &[0]);
        let r = (0..6).find(|&x| element_order(&s3, x) == 3).unwrap();
        let c3 = subgroup_closure(&s3, &[r]).unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(coset_reps(&s3, &c3).len(), 2);
        assert_eq!(coset_reps(&s3, &s3.whole()), vec![0]);

        let c14 = cyclic(14);
        let c7 = subgroup_closure(&c14, &[c14.pow(1, 2)]).unwrap();
        assert_eq!(c7.order(), 7);
        assert_eq!(coset_reps(&c14, &c7), vec![0, 1]);
    }

    #[test]
    fn cyclic_quotients() {
        let c14 = cyclic(14);
        let c7 = subgroup_closure(&c14, &[2]).unwrap();
        assert_eq!(cyclic_quotient_data(&c14, &c7), Some((1, 2)));

        let s3 = symmetric3();
        assert_eq!(cyclic_quotient_data(&s3, &s3.trivial()), None);
        let r = (0..6).find(|&x| element_order(&s3, x) == 3).unwrap();
        let c3 = subgroup_closure(&s3, &[r]).unwrap();
        let (t, d) = cyclic_quotient_data(&s3, &c3).unwrap();
        assert_eq!(d, 2);
        assert_eq!(element_order(&s3, t), 2);

        // Non-normal subgroup of S3.
        let t = (0..6).find(|&x| element_order(&s3, x) == 2).unwrap();
        let c2 = subgroup_closure(&s3, &[t]).unwrap();
        assert!(!c2.is_normal_in(&s3));
        assert_eq!(cyclic_quotient_data(&s3, &c2), None);

        assert_eq!(cyclic_quotient_data(&s3, &s3.whole()), Some((0, 1)));
    }

    #[test]
    fn orders() {
        let s3 = symmetric3();
        assert_eq!(element_order(&s3, 0), 1);
        let c7 = cyclic(7);
        assert_eq!(element_order(&c7, 1), 7);
        assert!((0..6).any(|x| element_order(&s3, x) == 2));
        let q8 = quaternion8();
        assert_eq!((0..8).filter(|&x| element_order(&q8, x) == 2).count(), 1);
    }

    #[test]
    fn greedy_generators_generate() {
        for g in small_groups() {
            let gens = g.whole().generators(&g);
            assert_eq!(subgroup_closure(&g, &gens).unwrap().order(), g.order());
        }
    }

    /// Subsets containing the identity and closed under multiplication.
    #[test]
    fn all_subgroups_matches_subset_scan() {
        for g in small_groups() {
            let n = g.order();
            let mut brute = Vec::new();
            for mask in 0u32..(1 << n) {
                if mask & 1 == 0 {
                    continue;
                }
                let inside = |x: usize| mask >> x & 1 == 1;
                if g.elements()
                    .filter(|&a| inside(a))
                    .all(|a| g.elements().filter(|&b| inside(b)).all(|b| inside(g.mul(a, b))))
                {
                    brute.push((0..n).filter(|&x| inside(x)).collect::<Vec<_>>());
                }
            }
            let mut ours: Vec<Vec<usize>> =
                all_subgroups(&g).iter().map(|s| s.members().to_vec()).collect();
            brute.sort();
            ours.sort();
            assert_eq!(ours, brute);
        }
        assert_eq!(all_subgroups(&dihedral(4)).len(), 10);
        assert_eq!(all_subgroups(&elementary_abelian8()).len(), 16);
    }
}
