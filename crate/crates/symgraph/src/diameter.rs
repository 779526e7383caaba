//! Exact and approximate diameter computation, including the truncated
//! neighborhood search and the greedy out-dominating set that power the
//! (1 + eps)-approximation.

use crate::engine::{CounterSnapshot, Graph, OpCounter, Tracked, VertexSet};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Out,
    In,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiameterMode {
    Exact,
    TwoApprox,
    EpsApprox,
}

/// A diameter value together with how it was obtained. `x_used` is the
/// neighborhood radius of the approximation, 0 for the exact and the
/// 2-approximate modes.
#[derive(Clone, Debug)]
pub struct DiameterEstimate {
    pub value: usize,
    pub mode: DiameterMode,
    pub x_used: usize,
    pub counters: CounterSnapshot,
}

/// Greedy dominating set: every vertex of `covered_target` (those whose
/// forward ball of radius `x` holds at least `x` vertices) has a member of
/// `set` within forward distance `x`.
#[derive(Clone, Debug)]
pub struct DominatingSetResult {
    pub set: VertexSet,
    pub x: usize,
    pub covered_target: VertexSet,
}

/// Largest finite distance, as the maximum forward eccentricity over all
/// vertices.
pub fn diameter_exact(g: &Graph, ctr: &OpCounter) -> DiameterEstimate {
    let n = g.vertex_count();
    let mut value = 0;
    for v in 0..n {
        let (_, depth) = g
            .forward_search(&VertexSet::singleton(n, v), None, ctr)
            .expect("singleton sources are never empty");
        value = value.max(depth);
    }
    DiameterEstimate {
        value,
        mode: DiameterMode::Exact,
        x_used: 0,
        counters: ctr.snapshot(),
    }
}

/// Half the sum of the forward and backward eccentricities of one vertex,
/// rounded up; requires a strongly connected graph and lands in
/// [ceil(D/2), D].
pub fn diameter_2approx(g: &Graph, ctr: &OpCounter) -> Result<DiameterEstimate, Error> {
    let n = g.vertex_count();
    let full = Tracked::new(VertexSet::full(n), ctr);
    let u = full.pick_min(ctr)?;
    let seed = VertexSet::singleton(n, u);
    let (fw, depth_out) = g.forward_search(&seed, None, ctr)?;
    if !fw.set_eq(&full, ctr) {
        return Err(Error::NotStronglyConnected);
    }
    let (bw, depth_in) = g.backward_search(&seed, None, ctr)?;
    if !bw.set_eq(&full, ctr) {
        return Err(Error::NotStronglyConnected);
    }
    Ok(DiameterEstimate {
        value: (depth_out + depth_in).div_ceil(2),
        mode: DiameterMode::TwoApprox,
        x_used: 0,
        counters: ctr.snapshot(),
    })
}

/// Vertices within distance at most `x` from `v` (direction `Out`) or to
/// `v` (direction `In`), via a truncated search that stops early once the
/// ball stops growing.
pub fn neighborhood(
    g: &Graph,
    v: usize,
    x: usize,
    direction: Direction,
    ctr: &OpCounter,
) -> Result<VertexSet, Error> {
    let n = g.vertex_count();
    if v >= n {
        return Err(Error::VertexOutOfRange {
            vertex: v,
            universe: n,
        });
    }
    let mut reached = Tracked::new(VertexSet::singleton(n, v), ctr);
    let mut frontier = Tracked::new(VertexSet::singleton(n, v), ctr);
    for _ in 0..x {
        let image = match direction {
            Direction::Out => g.post(&frontier, None, ctr)?,
            Direction::In => g.pre(&frontier, None, ctr)?,
        };
        let fresh = image.minus(&reached, ctr);
        if fresh.is_empty(ctr) {
            break;
        }
        reached.union_in_place(&fresh, ctr);
        *frontier = fresh;
    }
    Ok(reached.into_inner())
}

/// Greedy out-dominating set over the radius-`x` neighborhood relation.
///
/// Vertices whose forward ball holds fewer than `x` vertices are marked
/// covered up front and need no dominator. Then, for thresholds 2^j with j
/// from floor(log2 n) down to 0, every vertex whose backward ball still
/// contains at least 2^j uncovered vertices is taken into the set and its
/// backward ball marked covered. Neighborhood sets are recomputed on demand
/// so only a constant number of sets stays alive.
pub fn greedy_dominating_set(
    g: &Graph,
    x: usize,
    ctr: &OpCounter,
) -> Result<DominatingSetResult, Error> {
    if x == 0 {
        return Err(Error::InvalidParameter {
            name: "x",
            message: "radius must be at least 1".to_string(),
        });
    }
    let n = g.vertex_count();
    let mut set = Tracked::new(VertexSet::empty(n), ctr);
    let mut covered = Tracked::new(VertexSet::empty(n), ctr);
    let mut target = Tracked::new(VertexSet::empty(n), ctr);
    for v in 0..n {
        let ball = Tracked::new(neighborhood(g, v, x, Direction::Out, ctr)?, ctr);
        if ball.cardinality(ctr) < x {
            covered.union_in_place(&VertexSet::singleton(n, v), ctr);
        } else {
            target.union_in_place(&VertexSet::singleton(n, v), ctr);
        }
    }
    let max_j = usize::BITS - 1 - n.leading_zeros();
    for j in (0..=max_j).rev() {
        let threshold = 1usize << j;
        for v in 0..n {
            if set.contains(v) {
                continue;
            }
            let ball = Tracked::new(neighborhood(g, v, x, Direction::In, ctr)?, ctr);
            let fresh = ball.minus(&covered, ctr);
            if fresh.cardinality(ctr) >= threshold {
                set.union_in_place(&VertexSet::singleton(n, v), ctr);
                covered.union_in_place(&ball, ctr);
            }
        }
    }
    Ok(DominatingSetResult {
        set: set.into_inner(),
        x,
        covered_target: target.into_inner(),
    })
}

/// Maximum forward eccentricity over the radius-`x` dominating set; lands
/// in [D - x, D] whenever x < D and never exceeds D. When no vertex reaches
/// `x` vertices the dominating set is empty and the estimate falls back to
/// scanning the vertices that have any successor at all.
pub fn diameter_approx_with_x(
    g: &Graph,
    x: usize,
    ctr: &OpCounter,
) -> Result<DiameterEstimate, Error> {
    let n = g.vertex_count();
    let dominating = greedy_dominating_set(g, x, ctr)?;
    let mut value = 0;
    if dominating.set.is_clear() {
        for v in 0..n {
            let seed = VertexSet::singleton(n, v);
            let out = Tracked::new(g.post(&seed, None, ctr)?, ctr);
            if out.is_empty(ctr) {
                continue;
            }
            let (_, depth) = g.forward_search(&seed, None, ctr)?;
            value = value.max(depth);
        }
    } else {
        for u in dominating.set.iter() {
            let (_, depth) = g.forward_search(&VertexSet::singleton(n, u), None, ctr)?;
            value = value.max(depth);
        }
    }
    Ok(DiameterEstimate {
        value,
        mode: DiameterMode::EpsApprox,
        x_used: x,
        counters: ctr.snapshot(),
    })
}

/// Diameter approximation with multiplicative error controlled by `eps`.
///
/// On strongly connected graphs one 2-approximation bounds the diameter
/// from above and fixes the radius; otherwise a doubling search raises a
/// diameter guess `g` until the estimate certifies that the guess passed
/// the true value.
pub fn diameter_approx(g: &Graph, eps: f64, ctr: &OpCounter) -> Result<DiameterEstimate, Error> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            message: format!("must be positive, got {eps}"),
        });
    }
    let n = g.vertex_count();
    match diameter_2approx(g, ctr) {
        Ok(two) => {
            let upper = 2 * two.value;
            let by_eps = (eps * upper as f64 / (2.0 * (1.0 + eps))).floor() as usize;
            let by_sqrt = (upper as f64).sqrt().floor() as usize;
            let x = by_sqrt.min(by_eps).max(1);
            diameter_approx_with_x(g, x, ctr)
        }
        Err(Error::NotStronglyConnected) => {
            let mut guess = 1;
            loop {
                let x = ((guess as f64).sqrt().floor() as usize).max(1);
                let estimate = diameter_approx_with_x(g, x, ctr)?;
                if estimate.value + x < guess || guess > n {
                    return Ok(estimate);
                }
                guess *= 2;
            }
        }
        Err(other) => Err(other),
    }
}
