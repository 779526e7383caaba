//! Strongly connected components with skeleton-guided forward searches.
//!
//! A skeleton is one shortest path of a previous forward search; restarting
//! the decomposition from its endpoint keeps the total number of backward
//! steps proportional to the sum of component diameters instead of the
//! number of components times the graph diameter.

use crate::engine::{CounterSnapshot, Graph, Mask, OpCounter, Tracked, VertexSet};
use crate::error::Error;

/// One shortest path of a forward search: `path_set` holds exactly one
/// vertex per BFS level and `endpoint` is the deepest of them. The empty
/// skeleton carries no set at all.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    inner: Option<(VertexSet, usize)>,
}

impl Skeleton {
    pub fn empty() -> Self {
        Skeleton { inner: None }
    }

    pub fn new(path_set: VertexSet, endpoint: usize) -> Self {
        assert!(
            path_set.contains(endpoint),
            "skeleton endpoint {endpoint} not on the path"
        );
        Skeleton {
            inner: Some((path_set, endpoint)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.inner.is_none()
    }

    pub fn path_set(&self) -> Option<&VertexSet> {
        self.inner.as_ref().map(|(p, _)| p)
    }

    pub fn endpoint(&self) -> Option<usize> {
        self.inner.as_ref().map(|&(_, e)| e)
    }

    pub fn into_parts(self) -> Option<(VertexSet, usize)> {
        self.inner
    }
}

/// Result of a full decomposition: components in emission order plus the
/// counter state after the run.
#[derive(Clone, Debug)]
pub struct SccReport {
    pub components: Vec<VertexSet>,
    pub counters: CounterSnapshot,
}

/// Forward search from `v` inside the mask's domain returning the reached
/// set together with a skeleton: one vertex per BFS level, forming a
/// shortest path from `v` to a vertex of maximum BFS depth.
///
/// The levels needed for the backward walk are not all kept alive at once;
/// the search checkpoints the BFS prefix set every `ceil(sqrt(depth + 1))`
/// levels and regenerates one block of levels at a time, so the walk holds
/// O(sqrt(depth)) sets while spending at most a constant factor more
/// one-step operations than the plain search.
pub fn skel_forward(
    g: &Graph,
    mask: Mask<'_>,
    v: usize,
    ctr: &OpCounter,
) -> Result<(VertexSet, Skeleton), Error> {
    let n = g.vertex_count();
    if v >= n {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            universe: n,
        });
    }
    if !mask.domain().contains(v) {
        return Err(Error::VertexOutsideDomain { vertex: v });
    }

    let (fw, depth) = g.forward_search(&VertexSet::singleton(n, v), Some(mask), ctr)?;
    let fw = Tracked::new(fw, ctr);
    if depth == 0 {
        return Ok((fw.into_inner(), Skeleton::new(VertexSet::singleton(n, v), v)));
    }

    // Checkpoint the BFS prefix (all vertices within distance i) every c
    // levels; block j regenerates levels j*c+1 ..= (j+1)*c from checkpoint j.
    let mut c = 1;
    while c * c < depth + 1 {
        c += 1;
    }
    let max_block = (depth - 1) / c;
    let mut checkpoints: Vec<Tracked<'_>> = Vec::with_capacity(max_block + 1);
    {
        let mut u = Tracked::new(VertexSet::singleton(n, v), ctr);
        checkpoints.push(Tracked::new(u.clone(), ctr));
        for i in 1..=max_block * c {
            let img = g.post(&u, Some(mask), ctr)?;
            u.union_in_place(&img, ctr);
            if i % c == 0 {
                checkpoints.push(Tracked::new(u.clone(), ctr));
            }
        }
    }

    let mut path = Tracked::new(VertexSet::empty(n), ctr);
    let mut endpoint = None;
    for j in (0..=max_block).rev() {
        let block_start = j * c;
        let block_end = if j == max_block { depth } else { (j + 1) * c };
        let mut levels: Vec<Tracked<'_>> = Vec::with_capacity(block_end - block_start);
        let mut u = Tracked::new(checkpoints[j].clone(), ctr);
        for _ in block_start + 1..=block_end {
            let level = g.post(&u, Some(mask), ctr)?.minus(&u, ctr);
            debug_assert!(!level.is_clear(), "BFS level up to the depth is non-empty");
            u.union_in_place(&level, ctr);
            levels.push(Tracked::new(level, ctr));
        }
        drop(u);
        for (offset, level) in levels.iter().enumerate().rev() {
            let picked = match endpoint {
                None => {
                    debug_assert_eq!(block_start + 1 + offset, depth);
                    let deepest = level.pick_min(ctr)?;
                    endpoint = Some(deepest);
                    deepest
                }
                Some(_) => {
                    let cand = g.pre(&path, Some(mask), ctr)?.intersect(level, ctr);
                    cand.pick_min(ctr)?
                }
            };
            path.union_in_place(&VertexSet::singleton(n, picked), ctr);
        }
    }
    path.union_in_place(&VertexSet::singleton(n, v), ctr);

    let endpoint = endpoint.expect("depth >= 1 always picks an endpoint");
    Ok((fw.into_inner(), Skeleton::new(path.into_inner(), endpoint)))
}

/// Emits every strongly connected component of the subgraph induced by
/// `domain`, restarting from `skel`'s endpoint when one is given. Components
/// are handed to `emit` as soon as they are complete and are not kept alive
/// inside the algorithm.
pub fn scc_find(
    g: &Graph,
    domain: VertexSet,
    skel: Skeleton,
    ctr: &OpCounter,
    emit: &mut dyn FnMut(VertexSet),
) -> Result<(), Error> {
    scc_find_inner(g, domain, skel, ctr, emit, None)
}

/// Full decomposition over the whole vertex set.
pub fn scc_decomposition(g: &Graph, ctr: &OpCounter) -> SccReport {
    let mut components = Vec::new();
    scc_find(
        g,
        VertexSet::full(g.vertex_count()),
        Skeleton::empty(),
        ctr,
        &mut |c| components.push(c),
    )
    .expect("full-domain decomposition cannot violate its own contract");
    SccReport {
        components,
        counters: ctr.snapshot(),
    }
}

/// Per-call record used by the invariant tests.
#[cfg_attr(not(test), allow(dead_code))]
#[derive(Clone, Debug)]
pub(crate) struct TraceCall {
    pub domain: VertexSet,
    pub skeleton: Option<(VertexSet, usize)>,
    pub component: VertexSet,
    pub loop_pre_ops: u64,
}

#[derive(Default, Debug)]
pub(crate) struct SccTrace {
    pub calls: Vec<TraceCall>,
}

#[cfg(test)]
pub(crate) fn scc_decomposition_traced(g: &Graph, ctr: &OpCounter) -> (SccReport, SccTrace) {
    let mut trace = SccTrace::default();
    let mut components = Vec::new();
    scc_find_inner(
        g,
        VertexSet::full(g.vertex_count()),
        Skeleton::empty(),
        ctr,
        &mut |c| components.push(c),
        Some(&mut trace),
    )
    .expect("full-domain decomposition cannot violate its own contract");
    let report = SccReport {
        components,
        counters: ctr.snapshot(),
    };
    (report, trace)
}

struct Frame<'c> {
    domain: Tracked<'c>,
    path: Option<Tracked<'c>>,
    endpoint: usize,
}

impl<'c> Frame<'c> {
    fn new(domain: Tracked<'c>, skel: Option<(Tracked<'c>, usize)>) -> Self {
        let (path, endpoint) = match skel {
            Some((path, endpoint)) => (Some(path), endpoint),
            None => (None, 0),
        };
        Frame {
            domain,
            path,
            endpoint,
        }
    }
}

fn scc_find_inner(
    g: &Graph,
    domain: VertexSet,
    skel: Skeleton,
    ctr: &OpCounter,
    emit: &mut dyn FnMut(VertexSet),
    mut trace: Option<&mut SccTrace>,
) -> Result<(), Error> {
    let n = g.vertex_count();
    if domain.universe() != n {
        return Err(Error::UniverseMismatch {
            expected: n,
            found: domain.universe(),
        });
    }
    if let Some(path) = skel.path_set() {
        if path.universe() != n {
            return Err(Error::UniverseMismatch {
                expected: n,
                found: path.universe(),
            });
        }
        if let Some(outside) = path.iter().find(|&w| !domain.contains(w)) {
            return Err(Error::VertexOutsideDomain { vertex: outside });
        }
    }

    let initial = Frame::new(
        Tracked::new(domain, ctr),
        skel.into_parts()
            .map(|(p, e)| (Tracked::new(p, ctr), e)),
    );
    let mut stack: Vec<Frame<'_>> = vec![initial];

    while let Some(frame) = stack.pop() {
        if frame.domain.is_empty(ctr) {
            continue;
        }
        let v = match frame.path {
            Some(_) => frame.endpoint,
            None => frame.domain.pick_min(ctr)?,
        };
        let mask = Mask::new(&frame.domain);

        let (fw, fresh_skel) = skel_forward(g, mask, v, ctr)?;
        let fw = Tracked::new(fw, ctr);
        let (fresh_path, fresh_endpoint) = fresh_skel
            .into_parts()
            .expect("skel_forward always returns a non-empty skeleton");
        let fresh_path = Tracked::new(fresh_path, ctr);

        // Grow the component of v backward inside the forward set; each
        // round is one pre operation and the last one detects the fixpoint.
        let mut scc = Tracked::new(VertexSet::singleton(n, v), ctr);
        let mut loop_pre_ops = 0u64;
        loop {
            let reaching = g.pre(&scc, Some(mask), ctr)?;
            loop_pre_ops += 1;
            let inside = reaching.intersect(&fw, ctr);
            if inside.is_subset(&scc, ctr) {
                break;
            }
            scc.union_in_place(&inside, ctr);
        }

        if let Some(trace) = trace.as_deref_mut() {
            trace.calls.push(TraceCall {
                domain: frame.domain.clone(),
                skeleton: frame.path.as_deref().map(|p| (p.clone(), frame.endpoint)),
                component: scc.clone(),
                loop_pre_ops,
            });
        }

        // Remainder outside the forward set keeps the prefix of the old
        // skeleton; its new endpoint is the unique path vertex with an edge
        // into the part of the path swallowed by the component.
        let rest_outside = Tracked::new(frame.domain.minus(&fw, ctr), ctr);
        let skel_outside = match &frame.path {
            Some(old_path) => {
                let surviving = Tracked::new(old_path.minus(&scc, ctr), ctr);
                if surviving.is_empty(ctr) {
                    None
                } else {
                    let swallowed = scc.intersect(old_path, ctr);
                    let feeders = g.pre(&swallowed, Some(mask), ctr)?;
                    let cand = feeders.minus(&scc, ctr).intersect(old_path, ctr);
                    let endpoint = cand.pick_min(ctr)?;
                    Some((surviving, endpoint))
                }
            }
            None => None,
        };

        // Remainder inside the forward set keeps the suffix of the fresh
        // skeleton, which still ends at its deepest vertex.
        let rest_inside = Tracked::new(fw.minus(&scc, ctr), ctr);
        let skel_inside = {
            let surviving = Tracked::new(fresh_path.minus(&scc, ctr), ctr);
            if surviving.is_empty(ctr) {
                None
            } else {
                debug_assert!(surviving.contains(fresh_endpoint));
                Some((surviving, fresh_endpoint))
            }
        };

        emit(scc.into_inner());

        // Process the smaller remainder first; the deferred larger side
        // keeps the pending stack logarithmic in the domain size.
        let outside_size = rest_outside.cardinality(ctr);
        let inside_size = rest_inside.cardinality(ctr);
        let frame_outside = Frame::new(rest_outside, skel_outside);
        let frame_inside = Frame::new(rest_inside, skel_inside);
        if outside_size <= inside_size {
            stack.push(frame_inside);
            stack.push(frame_outside);
        } else {
            stack.push(frame_outside);
            stack.push(frame_inside);
        }
    }
    Ok(())
}
