//! Existential winning sets for reachability, safety, Buchi and co-Buchi
//! targets. Each solver returns the set of vertices from which some path
//! satisfies the objective.

use crate::engine::{Graph, Mask, OpCounter, Tracked, VertexSet};
use crate::error::Error;
use crate::scc::{scc_find, Skeleton};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectiveKind {
    Reach,
    Safe,
    Buchi,
    CoBuchi,
}

/// How the safety winning set is computed; both methods agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SafeMethod {
    /// Greatest fixpoint of `W := W ∩ pre(W)` starting from the target.
    Fixpoint,
    /// Backward reachability of the non-trivial components of the target
    /// subgraph, computed inside that subgraph.
    ViaScc,
}

/// How the Buchi winning set is computed; both methods agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuchiMethod {
    /// Backward reachability of every non-trivial component that contains a
    /// target vertex.
    ViaScc,
    /// Per target vertex, test membership in the forward set of its own
    /// successors to detect a cycle through it.
    PerTarget,
}

#[derive(Clone, Debug)]
pub struct ObjectiveQuery {
    pub kind: ObjectiveKind,
    pub target: VertexSet,
}

fn check_universe(g: &Graph, target: &VertexSet) -> Result<(), Error> {
    if target.universe() != g.vertex_count() {
        return Err(Error::UniverseMismatch {
            expected: g.vertex_count(),
            found: target.universe(),
        });
    }
    Ok(())
}

/// Vertices that can reach the target, target included.
pub fn reach(g: &Graph, target: &VertexSet, ctr: &OpCounter) -> Result<VertexSet, Error> {
    check_universe(g, target)?;
    if target.is_empty(ctr) {
        return Ok(VertexSet::empty(g.vertex_count()));
    }
    let (reached, _) = g.backward_search(target, None, ctr)?;
    Ok(reached)
}

/// Vertices from which some infinite path stays inside the target forever.
pub fn safe(
    g: &Graph,
    target: &VertexSet,
    method: SafeMethod,
    ctr: &OpCounter,
) -> Result<VertexSet, Error> {
    check_universe(g, target)?;
    match method {
        SafeMethod::Fixpoint => {
            let mut w = Tracked::new(target.clone(), ctr);
            loop {
                let reaching = g.pre(&w, None, ctr)?;
                let shrunk = w.intersect(&reaching, ctr);
                if shrunk.set_eq(&w, ctr) {
                    return Ok(w.into_inner());
                }
                *w = shrunk;
            }
        }
        SafeMethod::ViaScc => {
            let kernel = Tracked::new(recurrent_kernel(g, target, None, ctr)?, ctr);
            if kernel.is_empty(ctr) {
                return Ok(kernel.into_inner());
            }
            let (reached, _) = g.backward_search(&kernel, Some(Mask::new(target)), ctr)?;
            Ok(reached)
        }
    }
}

/// Vertices from which some path visits the target infinitely often.
pub fn buchi(
    g: &Graph,
    target: &VertexSet,
    method: BuchiMethod,
    ctr: &OpCounter,
) -> Result<VertexSet, Error> {
    check_universe(g, target)?;
    let n = g.vertex_count();
    let on_cycle = match method {
        BuchiMethod::ViaScc => {
            let mut comps = Vec::new();
            scc_find(g, VertexSet::full(n), Skeleton::empty(), ctr, &mut |c| {
                comps.push(c)
            })?;
            let mut kernel = Tracked::new(VertexSet::empty(n), ctr);
            for comp in &comps {
                let hits = comp.intersect(target, ctr);
                if hits.is_empty(ctr) {
                    continue;
                }
                if is_nontrivial(g, comp, ctr)? {
                    kernel.union_in_place(comp, ctr);
                }
            }
            kernel.into_inner()
        }
        BuchiMethod::PerTarget => {
            let mut recurring = Tracked::new(VertexSet::empty(n), ctr);
            for t in target.iter() {
                let step = Tracked::new(
                    g.post(&VertexSet::singleton(n, t), None, ctr)?,
                    ctr,
                );
                if step.is_empty(ctr) {
                    continue;
                }
                let (fw, _) = g.forward_search(&step, None, ctr)?;
                if fw.contains(t) {
                    recurring.union_in_place(&VertexSet::singleton(n, t), ctr);
                }
            }
            recurring.into_inner()
        }
    };
    reach(g, &on_cycle, ctr)
}

/// Vertices from which some path eventually stays inside the target forever.
pub fn cobuchi(g: &Graph, target: &VertexSet, ctr: &OpCounter) -> Result<VertexSet, Error> {
    check_universe(g, target)?;
    let kernel = recurrent_kernel(g, target, None, ctr)?;
    reach(g, &kernel, ctr)
}

pub fn solve(g: &Graph, query: &ObjectiveQuery, ctr: &OpCounter) -> Result<VertexSet, Error> {
    match query.kind {
        ObjectiveKind::Reach => reach(g, &query.target, ctr),
        ObjectiveKind::Safe => safe(g, &query.target, SafeMethod::Fixpoint, ctr),
        ObjectiveKind::Buchi => buchi(g, &query.target, BuchiMethod::ViaScc, ctr),
        ObjectiveKind::CoBuchi => cobuchi(g, &query.target, ctr),
    }
}

/// Union of the non-trivial strongly connected components of the subgraph
/// induced by `domain` (further restricted to `within` when given).
fn recurrent_kernel(
    g: &Graph,
    domain: &VertexSet,
    within: Option<&VertexSet>,
    ctr: &OpCounter,
) -> Result<VertexSet, Error> {
    let n = g.vertex_count();
    let scope = match within {
        Some(w) => domain.intersect(w, ctr),
        None => domain.clone(),
    };
    let mut comps = Vec::new();
    scc_find(g, scope, Skeleton::empty(), ctr, &mut |c| comps.push(c))?;
    let mut kernel = Tracked::new(VertexSet::empty(n), ctr);
    for comp in &comps {
        if is_nontrivial(g, comp, ctr)? {
            kernel.union_in_place(comp, ctr);
        }
    }
    Ok(kernel.into_inner())
}

/// A component is non-trivial when it has at least two vertices or its only
/// vertex carries a self-loop.
fn is_nontrivial(g: &Graph, comp: &VertexSet, ctr: &OpCounter) -> Result<bool, Error> {
    if comp.cardinality(ctr) >= 2 {
        return Ok(true);
    }
    let v = comp.pick_min(ctr)?;
    Ok(g.post(comp, None, ctr)?.contains(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{self, ExplicitGraph};
    use crate::random;
    use crate::reductions::{self, DisjointnessInstance};

    fn assert_set_eq(found: &VertexSet, expected: &VertexSet, what: &str) {
        assert_eq!(
            found.iter().collect::<Vec<_>>(),
            expected.iter().collect::<Vec<_>>(),
            "{what}"
        );
    }

    #[test]
    fn all_objectives_match_the_oracle_on_random_graphs() {
        for i in 0..100u64 {
            let n = 1 + (i as usize * 7) % 40;
            let p = [0.03, 0.08, 0.2, 0.5][i as usize % 4];
            let g = random::digraph(n, p, 0x0b1 + i);
            let target = random::subset(n, 0.4, 0x0b2 + i);
            let explicit = ExplicitGraph::from_graph(&g);
            for kind in [
                ObjectiveKind::Reach,
                ObjectiveKind::Safe,
                ObjectiveKind::Buchi,
                ObjectiveKind::CoBuchi,
            ] {
                let ctr = OpCounter::new();
                let query = ObjectiveQuery {
                    kind,
                    target: target.clone(),
                };
                let found = solve(&g, &query, &ctr).unwrap();
                let expected = oracles::explicit_objective(&explicit, kind, &target);
                assert_set_eq(&found, &expected, &format!("{kind:?} n={n} seed={i}"));
            }
        }
    }

    #[test]
    fn safe_methods_agree() {
        for i in 0..80u64 {
            let n = 1 + (i as usize * 5) % 40;
            let g = random::digraph(n, 0.15, 0x5afe + i);
            let target = random::subset(n, 0.5, 0x5aff + i);
            let ctr = OpCounter::new();
            let a = safe(&g, &target, SafeMethod::Fixpoint, &ctr).unwrap();
            let b = safe(&g, &target, SafeMethod::ViaScc, &ctr).unwrap();
            assert_set_eq(&a, &b, &format!("n={n} seed={i}"));
        }
    }

    #[test]
    fn buchi_methods_agree() {
        for i in 0..80u64 {
            let n = 1 + (i as usize * 5) % 40;
            let g = random::digraph(n, 0.15, 0xb0c1 + i);
            let target = random::subset(n, 0.5, 0xb0c2 + i);
            let ctr = OpCounter::new();
            let a = buchi(&g, &target, BuchiMethod::ViaScc, &ctr).unwrap();
            let b = buchi(&g, &target, BuchiMethod::PerTarget, &ctr).unwrap();
            assert_set_eq(&a, &b, &format!("n={n} seed={i}"));
        }
    }

    #[test]
    fn loop_figure_instance_wins_buchi_through_its_realized_loops() {
        let inst = DisjointnessInstance::from_sets(4, &[2, 3], &[0, 1, 3]).unwrap();
        let (g, _) = reductions::gen_buchi_loops(&inst);
        let ctr = OpCounter::new();
        let full = VertexSet::full(5);
        let won = buchi(&g, &full, BuchiMethod::ViaScc, &ctr).unwrap();
        assert_eq!(won.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3, 4]);

        let without_last = VertexSet::from_indices(5, [0, 1, 2, 3]);
        let won = buchi(&g, &without_last, BuchiMethod::ViaScc, &ctr).unwrap();
        assert_eq!(won.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);

        let safe_won = safe(&g, &without_last, SafeMethod::Fixpoint, &ctr).unwrap();
        assert_eq!(safe_won.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);

        let cobuchi_won = cobuchi(&g, &without_last, &ctr).unwrap();
        assert_eq!(cobuchi_won.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn reach_costs_at_most_diameter_plus_two_steps() {
        for i in 0..60u64 {
            let n = 2 + (i as usize * 7) % 60;
            let g = random::digraph(n, 0.1, 0x4ea + i);
            let target = random::subset(n, 0.3, 0x4eb + i);
            let explicit = ExplicitGraph::from_graph(&g);
            let d = oracles::diameter(&explicit) as u64;
            let ctr = OpCounter::new();
            reach(&g, &target, &ctr).unwrap();
            assert!(
                ctr.one_step() <= d + 2,
                "n={n} seed={i} one_step={} d={d}",
                ctr.one_step()
            );
        }
    }

    #[test]
    fn safe_fixpoint_costs_at_most_target_size_plus_one_steps() {
        for i in 0..60u64 {
            let n = 2 + (i as usize * 7) % 60;
            let g = random::digraph(n, 0.1, 0x5a0 + i);
            let target = random::subset(n, 0.4, 0x5a1 + i);
            let ctr = OpCounter::new();
            safe(&g, &target, SafeMethod::Fixpoint, &ctr).unwrap();
            assert!(
                ctr.one_step() <= target.count() as u64 + 1,
                "n={n} one_step={} target={}",
                ctr.one_step(),
                target.count()
            );
        }
    }

    #[test]
    fn empty_target_wins_nothing() {
        let g = Graph::new(5, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let empty = VertexSet::empty(5);
        let ctr = OpCounter::new();
        assert!(reach(&g, &empty, &ctr).unwrap().is_clear());
        assert!(safe(&g, &empty, SafeMethod::Fixpoint, &ctr).unwrap().is_clear());
        assert!(buchi(&g, &empty, BuchiMethod::ViaScc, &ctr).unwrap().is_clear());
        assert!(cobuchi(&g, &empty, &ctr).unwrap().is_clear());
    }

    #[test]
    fn edgeless_graph_wins_only_reachability() {
        let g = Graph::new(3, &[]).unwrap();
        let full = VertexSet::full(3);
        let ctr = OpCounter::new();
        assert_eq!(reach(&g, &full, &ctr).unwrap().count(), 3);
        assert!(safe(&g, &full, SafeMethod::Fixpoint, &ctr).unwrap().is_clear());
        assert!(buchi(&g, &full, BuchiMethod::PerTarget, &ctr).unwrap().is_clear());
        assert!(cobuchi(&g, &full, &ctr).unwrap().is_clear());
    }

    #[test]
    fn mismatched_universe_is_rejected() {
        let g = Graph::new(4, &[(0, 1)]).unwrap();
        let ctr = OpCounter::new();
        let err = reach(&g, &VertexSet::empty(5), &ctr).unwrap_err();
        assert_eq!(
            err,
            Error::UniverseMismatch {
                expected: 4,
                found: 5
            }
        );
    }
}
