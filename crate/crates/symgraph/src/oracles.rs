//! Explicit (adjacency-list) reference algorithms used to validate the
//! symbolic implementations: two independent SCC decompositions, all-pairs
//! BFS diameters and condensation-based objective solvers.

use crate::engine::{Graph, VertexSet};
use crate::objectives::ObjectiveKind;

pub const UNREACHABLE: usize = usize::MAX;

/// Adjacency-list view of a graph, with both edge directions materialized.
#[derive(Clone, Debug)]
pub struct ExplicitGraph {
    n: usize,
    fwd: Vec<Vec<usize>>,
    rev: Vec<Vec<usize>>,
}

impl ExplicitGraph {
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut fwd = vec![Vec::new(); n];
        let mut rev = vec![Vec::new(); n];
        for &(u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range");
            fwd[u].push(v);
            rev[v].push(u);
        }
        ExplicitGraph { n, fwd, rev }
    }

    pub fn from_graph(g: &Graph) -> Self {
        ExplicitGraph::from_edges(g.vertex_count(), &g.edges())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn successors(&self, u: usize) -> &[usize] {
        &self.fwd[u]
    }

    /// Same universe with only the edges inside `keep`; vertices outside
    /// `keep` become isolated.
    pub fn induced(&self, keep: &VertexSet) -> ExplicitGraph {
        let mut fwd = vec![Vec::new(); self.n];
        let mut rev = vec![Vec::new(); self.n];
        for u in keep.iter() {
            for &v in &self.fwd[u] {
                if keep.contains(v) {
                    fwd[u].push(v);
                    rev[v].push(u);
                }
            }
        }
        ExplicitGraph {
            n: self.n,
            fwd,
            rev,
        }
    }
}

/// Strongly connected components via iterative Tarjan, each component
/// sorted ascending; component order follows root discovery.
pub fn tarjan_scc(g: &ExplicitGraph) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut index = vec![UNREACHABLE; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next = 0usize;
    let mut comps = Vec::new();

    for root in 0..n {
        if index[root] != UNREACHABLE {
            continue;
        }
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        call.push((root, 0));

        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.1 < g.fwd[v].len() {
                let w = g.fwd[v][frame.1];
                frame.1 += 1;
                if index[w] == UNREACHABLE {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] && index[w] < low[v] {
                    low[v] = index[w];
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0;
                    if low[v] < low[p] {
                        low[p] = low[v];
                    }
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}

/// Strongly connected components via Kosaraju's two DFS passes; independent
/// cross-check for [`tarjan_scc`].
pub fn kosaraju_scc(g: &ExplicitGraph) -> Vec<Vec<usize>> {
    let n = g.n;
    let mut finished = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        call.push((root, 0));
        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if frame.1 < g.fwd[v].len() {
                let w = g.fwd[v][frame.1];
                frame.1 += 1;
                if !seen[w] {
                    seen[w] = true;
                    call.push((w, 0));
                }
            } else {
                call.pop();
                finished.push(v);
            }
        }
    }

    let mut comp_of = vec![UNREACHABLE; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &root in finished.iter().rev() {
        if comp_of[root] != UNREACHABLE {
            continue;
        }
        let id = comps.len();
        let mut comp = vec![root];
        comp_of[root] = id;
        let mut work = vec![root];
        while let Some(v) = work.pop() {
            for &w in &g.rev[v] {
                if comp_of[w] == UNREACHABLE {
                    comp_of[w] = id;
                    comp.push(w);
                    work.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Canonical form for comparing partitions: components sorted internally
/// and ordered by smallest member.
pub fn normalized(mut partition: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for comp in &mut partition {
        comp.sort_unstable();
    }
    partition.sort();
    partition
}

/// BFS distances from `source`; `UNREACHABLE` marks unreached vertices.
pub fn bfs_distances(g: &ExplicitGraph, source: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.n];
    dist[source] = 0;
    let mut queue = std::collections::VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        for &w in &g.fwd[v] {
            if dist[w] == UNREACHABLE {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Largest finite shortest-path distance over all ordered pairs (0 when no
/// edge is usable).
pub fn diameter(g: &ExplicitGraph) -> usize {
    let mut best = 0;
    for v in 0..g.n {
        for &d in &bfs_distances(g, v) {
            if d != UNREACHABLE && d > best {
                best = d;
            }
        }
    }
    best
}

/// Largest finite distance from `v`.
pub fn eccentricity(g: &ExplicitGraph, v: usize) -> usize {
    bfs_distances(g, v)
        .into_iter()
        .filter(|&d| d != UNREACHABLE)
        .max()
        .unwrap_or(0)
}

/// Per-component diameters, aligned with `partition`. Distances between
/// vertices of one component never leave it, so global BFS is exact here.
pub fn scc_diameters(g: &ExplicitGraph, partition: &[Vec<usize>]) -> Vec<usize> {
    let mut comp_of = vec![0usize; g.n];
    for (id, comp) in partition.iter().enumerate() {
        for &v in comp {
            comp_of[v] = id;
        }
    }
    let mut diam = vec![0usize; partition.len()];
    for (id, comp) in partition.iter().enumerate() {
        if comp.len() < 2 {
            continue;
        }
        for &v in comp {
            let dist = bfs_distances(g, v);
            for &w in comp {
                debug_assert_ne!(dist[w], UNREACHABLE);
                if comp_of[w] == id && dist[w] != UNREACHABLE && dist[w] > diam[id] {
                    diam[id] = dist[w];
                }
            }
        }
    }
    diam
}

fn has_internal_edge(g: &ExplicitGraph, comp: &[usize], comp_of: &[usize], id: usize) -> bool {
    comp.iter()
        .any(|&u| g.fwd[u].iter().any(|&w| comp_of[w] == id))
}

fn backward_closure(g: &ExplicitGraph, from: &[usize], within: Option<&VertexSet>) -> VertexSet {
    let mut out = VertexSet::empty(g.n);
    let mut work: Vec<usize> = Vec::new();
    for &v in from {
        if !out.contains(v) {
            out.insert(v);
            work.push(v);
        }
    }
    while let Some(v) = work.pop() {
        for &w in &g.rev[v] {
            if let Some(dom) = within {
                if !dom.contains(w) {
                    continue;
                }
            }
            if !out.contains(w) {
                out.insert(w);
                work.push(w);
            }
        }
    }
    out
}

/// Winning set of an objective under existential path semantics, computed
/// from an explicit SCC condensation; reference for the symbolic solvers.
pub fn explicit_objective(g: &ExplicitGraph, kind: ObjectiveKind, target: &VertexSet) -> VertexSet {
    assert_eq!(target.universe(), g.n, "target universe mismatch");
    match kind {
        ObjectiveKind::Reach => {
            let seeds: Vec<usize> = target.iter().collect();
            backward_closure(g, &seeds, None)
        }
        ObjectiveKind::Safe => {
            let inside = g.induced(target);
            let seeds = cycle_vertices(&inside, Some(target));
            backward_closure(&inside, &seeds, Some(target))
        }
        ObjectiveKind::Buchi => {
            let comps = tarjan_scc(g);
            let mut comp_of = vec![0usize; g.n];
            for (id, comp) in comps.iter().enumerate() {
                for &v in comp {
                    comp_of[v] = id;
                }
            }
            let mut seeds = Vec::new();
            for (id, comp) in comps.iter().enumerate() {
                if comp.iter().any(|&v| target.contains(v))
                    && has_internal_edge(g, comp, &comp_of, id)
                {
                    seeds.extend_from_slice(comp);
                }
            }
            backward_closure(g, &seeds, None)
        }
        ObjectiveKind::CoBuchi => {
            let inside = g.induced(target);
            let seeds = cycle_vertices(&inside, Some(target));
            backward_closure(g, &seeds, None)
        }
    }
}

/// Vertices lying on some cycle, optionally restricted to a domain that the
/// graph has already been induced on.
fn cycle_vertices(g: &ExplicitGraph, within: Option<&VertexSet>) -> Vec<usize> {
    let comps = tarjan_scc(g);
    let mut comp_of = vec![0usize; g.n];
    for (id, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = id;
        }
    }
    let mut out = Vec::new();
    for (id, comp) in comps.iter().enumerate() {
        if let Some(dom) = within {
            if !comp.iter().all(|&v| dom.contains(v)) {
                continue;
            }
        }
        if has_internal_edge(g, comp, &comp_of, id) {
            out.extend_from_slice(comp);
        }
    }
    out
}
