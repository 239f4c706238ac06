//! Depth-first extension of partial maps `G -> PGL_2(F_p)` along a chain of
//! subgroups `L = S_0 < S_1 < ... < S_m = K`, where `S_i = <S_{i-1}, t_i>` and
//! `t_i` is the smallest element of `K` outside `S_{i-1}`.
//!
//! After an image is chosen for `t_i`, the map is propagated over `S_i` by
//! right multiplication with every generator, and any clash prunes the branch.
//! A map that is consistent on every edge `a -> a s` of the Cayley graph is a
//! homomorphism (or a cocycle, for the twisted law), so leaves need no further
//! checking.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::fp_linalg::{enumerate_projective, Pgl2Elt, Prime, ProjectiveGroup};
use crate::groups::{element_order, subgroup_closure, FiniteGroup, QuadChar, Subgroup};

/// How the value at `a s` is built from the values at `a` and `s`.
pub trait Law {
    fn combine(&self, a: usize, fa: &Pgl2Elt, fs: &Pgl2Elt) -> Pgl2Elt;
}

/// `f(a s) = f(a) f(s)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct HomLaw;

impl Law for HomLaw {
    #[inline]
    fn combine(&self, _a: usize, fa: &Pgl2Elt, fs: &Pgl2Elt) -> Pgl2Elt {
        *fa * *fs
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Candidate images tried, over all levels.
    pub nodes: u64,
    /// Complete maps reached.
    pub leaves: u64,
    /// The node budget ran out before the search finished.
    pub aborted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Finished(SearchStats),
    /// The product of candidate counts exceeds the budget; nothing was run.
    Refused { estimate: u128, cap: u64 },
}

pub struct ExtensionSearch<'a, L: Law> {
    group: &'a FiniteGroup,
    law: L,
    target: Subgroup,
    base: Vec<Option<Pgl2Elt>>,
    base_gens: Vec<usize>,
    steps: Vec<usize>,
    candidates: Vec<Vec<Pgl2Elt>>,
}

impl<'a, L: Law> ExtensionSearch<'a, L> {
    /// `base` holds the known values on a subgroup of `target` (at least the
    /// identity). `candidates(t)` lists the images to try for a new generator.
    pub fn new(
        group: &'a FiniteGroup,
        target: &Subgroup,
        base: Vec<Option<Pgl2Elt>>,
        law: L,
        mut candidates: impl FnMut(usize) -> Vec<Pgl2Elt>,
    ) -> Self {
        assert!(base[0].is_some(), "base must contain the identity");
        let base_members: Vec<usize> = group.elements().filter(|&x| base[x].is_some()).collect();
        let base_sub = subgroup_closure(group, &base_members).expect("valid elements");
        assert_eq!(base_sub.order(), base_members.len(), "base domain must be a subgroup");
        assert!(base_sub.is_subgroup_of(target), "base must lie in the target");
        let base_gens = base_sub.generators(group);

        let mut steps = Vec::new();
        let mut gens = base_gens.clone();
        let mut span = base_sub;
        while let Some(&t) = target.members().iter().find(|&&x| !span.contains(x)) {
            steps.push(t);
            gens.push(t);
            span = subgroup_closure(group, &gens).expect("valid elements");
        }
        let candidates = steps.iter().map(|&t| candidates(t)).collect();
        ExtensionSearch {
            group,
            law,
            target: target.clone(),
            base,
            base_gens,
            steps,
            candidates,
        }
    }

    /// Elements whose images are chosen during the search.
    pub fn steps(&self) -> &[usize] {
        &self.steps
    }

    /// Upper bound on leaves: the product of per-level candidate counts.
    pub fn estimate(&self) -> u128 {
        self.candidates
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// Runs the search, calling `visit` on every complete map over the target.
    pub fn run(
        &self,
        max_nodes: u64,
        mut visit: impl FnMut(&[Option<Pgl2Elt>]) -> ControlFlow<()>,
    ) -> SearchOutcome {
        let estimate = self.estimate();
        if estimate > max_nodes as u128 {
            return SearchOutcome::Refused {
                estimate,
                cap: max_nodes,
            };
        }
        let mut map = self.base.clone();
        let mut stats = SearchStats::default();
        let mut gens = self.base_gens.clone();
        // Propagate the base itself so inconsistent bases yield nothing.
        let mut scratch = Vec::new();
        if self.propagate(&mut map, &gens, &mut scratch) {
            let _ = self.dfs(0, &mut map, &mut gens, &mut stats, max_nodes, &mut visit);
        }
        SearchOutcome::Finished(stats)
    }

    fn dfs(
        &self,
        level: usize,
        map: &mut Vec<Option<Pgl2Elt>>,
        gens: &mut Vec<usize>,
        stats: &mut SearchStats,
        max_nodes: u64,
        visit: &mut impl FnMut(&[Option<Pgl2Elt>]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if level == self.steps.len() {
            stats.leaves += 1;
            debug_assert!(self.target.members().iter().all(|&x| map[x].is_some()));
            return visit(map);
        }
        let t = self.steps[level];
        gens.push(t);
        let mut added = Vec::new();
        for y in &self.candidates[level] {
            if stats.nodes >= max_nodes {
                stats.aborted = true;
                gens.pop();
                return ControlFlow::Break(());
            }
            stats.nodes += 1;
            added.clear();
            map[t] = Some(*y);
            added.push(t);
            let ok = self.propagate(map, gens, &mut added);
            let flow = if ok {
                self.dfs(level + 1, map, gens, stats, max_nodes, visit)
            } else {
                ControlFlow::Continue(())
            };
            for &x in &added {
                map[x] = None;
            }
            if flow.is_break() {
                gens.pop();
                return flow;
            }
        }
        gens.pop();
        ControlFlow::Continue(())
    }

    /// Closes the assigned set under right multiplication by `gens`, checking
    /// every edge. Newly assigned elements are appended to `added`.
    fn propagate(
        &self,
        map: &mut [Option<Pgl2Elt>],
        gens: &[usize],
        added: &mut Vec<usize>,
    ) -> bool {
        let mut queue: VecDeque<usize> = self
            .group
            .elements()
            .filter(|&x| map[x].is_some())
            .collect();
        while let Some(a) = queue.pop_front() {
            let fa = map[a].expect("queued elements are assigned");
            for &s in gens {
                let fs = map[s].expect("generators are assigned");
                let b = self.group.mul(a, s);
                let value = self.law.combine(a, &fa, &fs);
                match map[b] {
                    Some(existing) if existing != value => return false,
                    Some(_) => {}
                    None => {
                        map[b] = Some(value);
                        added.push(b);
                        queue.push_back(b);
                    }
                }
            }
        }
        true
    }
}

/// Candidate images for homomorphisms: `y` with `y^ord(t) = 1` and, when a
/// character is given, determinant class `eps(t)`. Sorted in enumeration order.
pub fn hom_candidates<'a>(
    p: Prime,
    group: &'a FiniteGroup,
    eps: Option<&'a QuadChar>,
) -> impl FnMut(usize) -> Vec<Pgl2Elt> + 'a {
    let all = enumerate_projective(p, ProjectiveGroup::Pgl);
    move |t| {
        let order = element_order(group, t) as i64;
        all.iter()
            .copied()
            .filter(|y| eps.is_none_or(|e| y.det_class() == e.class(t)))
            .filter(|y| y.pow(order).is_identity())
            .collect()
    }
}
