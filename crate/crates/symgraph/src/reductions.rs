//! Graph families built from set-disjointness instances. Each generator
//! returns the realized graph together with the partition of its edges into
//! definite edges (present for every instance) and possible edges (present
//! or absent depending on one instance bit).

use crate::engine::Graph;
use crate::error::Error;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Two k-bit vectors; the instance is disjoint when no index is set in
/// both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointnessInstance {
    k: usize,
    x: Vec<bool>,
    y: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InstanceMode {
    Random,
    ForcedDisjoint,
    ForcedIntersecting,
}

impl DisjointnessInstance {
    pub fn from_sets(k: usize, xs: &[usize], ys: &[usize]) -> Result<Self, Error> {
        let mut x = vec![false; k];
        let mut y = vec![false; k];
        for (name, indices, bits) in [("x", xs, &mut x), ("y", ys, &mut y)] {
            for &i in indices {
                if i >= k {
                    return Err(Error::InvalidParameter {
                        name,
                        message: format!("index {i} out of range for k={k}"),
                    });
                }
                bits[i] = true;
            }
        }
        Ok(DisjointnessInstance { k, x, y })
    }

    pub fn random(k: usize, mode: InstanceMode, seed: u64) -> Result<Self, Error> {
        if k == 0 {
            return Err(Error::InvalidParameter {
                name: "k",
                message: "universe must not be empty".to_string(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = vec![false; k];
        let mut y = vec![false; k];
        match mode {
            InstanceMode::Random => {
                for i in 0..k {
                    x[i] = rng.gen_bool(0.5);
                    y[i] = rng.gen_bool(0.5);
                }
            }
            InstanceMode::ForcedDisjoint => {
                for i in 0..k {
                    match rng.gen_range(0..3) {
                        0 => {}
                        1 => x[i] = true,
                        _ => y[i] = true,
                    }
                }
            }
            InstanceMode::ForcedIntersecting => {
                for i in 0..k {
                    x[i] = rng.gen_bool(0.5);
                    y[i] = rng.gen_bool(0.5);
                }
                let shared = rng.gen_range(0..k);
                x[shared] = true;
                y[shared] = true;
            }
        }
        Ok(DisjointnessInstance { k, x, y })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn x_bit(&self, i: usize) -> bool {
        self.x[i]
    }

    pub fn y_bit(&self, i: usize) -> bool {
        self.y[i]
    }

    pub fn is_disjoint(&self) -> bool {
        !(0..self.k).any(|i| self.x[i] && self.y[i])
    }
}

/// Which instance bits make a possible edge present.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresenceRule {
    /// Present when at least one side left the bit clear.
    EitherBitZero,
    /// Present when both sides set the bit.
    BothBitsOne,
    /// Present when the first vector left the bit clear.
    AliceBitZero,
    /// Present when the second vector left the bit clear.
    BobBitZero,
}

impl PresenceRule {
    pub fn realized(self, inst: &DisjointnessInstance, bit: usize) -> bool {
        match self {
            PresenceRule::EitherBitZero => !inst.x_bit(bit) || !inst.y_bit(bit),
            PresenceRule::BothBitsOne => inst.x_bit(bit) && inst.y_bit(bit),
            PresenceRule::AliceBitZero => !inst.x_bit(bit),
            PresenceRule::BobBitZero => !inst.y_bit(bit),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PossibleEdge {
    pub from: usize,
    pub to: usize,
    pub bit: usize,
    pub rule: PresenceRule,
}

impl PossibleEdge {
    pub fn realized(&self, inst: &DisjointnessInstance) -> bool {
        self.rule.realized(inst, self.bit)
    }
}

/// Edge partition of a generated graph: the definite edges plus every
/// possible edge with its presence rule. The realized possible edges
/// together with the definite ones reproduce the graph exactly.
#[derive(Clone, Debug)]
pub struct EdgePartition {
    pub definite: Vec<(usize, usize)>,
    pub possible: Vec<PossibleEdge>,
}

impl EdgePartition {
    pub fn realized_edges(&self, inst: &DisjointnessInstance) -> Vec<(usize, usize)> {
        let mut edges = self.definite.clone();
        edges.extend(
            self.possible
                .iter()
                .filter(|e| e.realized(inst))
                .map(|e| (e.from, e.to)),
        );
        edges
    }
}

fn ascending_complete(n: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    edges
}

fn build(n: usize, partition: EdgePartition, inst: &DisjointnessInstance) -> (Graph, EdgePartition) {
    let g = Graph::new(n, &partition.realized_edges(inst))
        .expect("generated edges stay inside the vertex range");
    (g, partition)
}

/// Layered component family: `ell` blocks of `kbar + 1` vertices each,
/// all forward edges definite, and one possible backward edge per bit
/// closing each block step by step. A disjoint instance realizes every
/// backward edge and the graph has exactly `ell` components.
pub fn gen_scc_layered(
    inst: &DisjointnessInstance,
    ell: usize,
    kbar: usize,
) -> Result<(Graph, EdgePartition), Error> {
    if ell == 0 || kbar == 0 || ell * kbar != inst.k() {
        return Err(Error::Divisibility {
            k: inst.k(),
            ell,
            kbar,
        });
    }
    let n = inst.k() + ell;
    let mut possible = Vec::with_capacity(inst.k());
    for i in 0..ell {
        let base = i * (kbar + 1);
        for j in 0..kbar {
            possible.push(PossibleEdge {
                from: base + j + 1,
                to: base + j,
                bit: i * kbar + j,
                rule: PresenceRule::EitherBitZero,
            });
        }
    }
    let partition = EdgePartition {
        definite: ascending_complete(n),
        possible,
    };
    Ok(build(n, partition, inst))
}

/// Singleton-component family on `k + 1` vertices: all forward edges
/// definite, one possible backward edge per bit. A disjoint instance
/// realizes none of them and every vertex is its own component.
pub fn gen_scc_trivial(inst: &DisjointnessInstance) -> (Graph, EdgePartition) {
    let n = inst.k() + 1;
    let possible = (0..inst.k())
        .map(|j| PossibleEdge {
            from: j + 1,
            to: j,
            bit: j,
            rule: PresenceRule::BothBitsOne,
        })
        .collect();
    let partition = EdgePartition {
        definite: ascending_complete(n),
        possible,
    };
    build(n, partition, inst)
}

/// Self-loop family on `k + 1` vertices: all forward edges plus a loop at
/// the last vertex definite, one possible loop per bit. The first vertex
/// can visit `{v0..v_{k-1}}` forever exactly when the instance intersects.
pub fn gen_buchi_loops(inst: &DisjointnessInstance) -> (Graph, EdgePartition) {
    gen_buchi_variant(inst, LoopVariant::Standard)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopVariant {
    /// Definite loop at the last vertex.
    Standard,
    /// The last vertex closes a definite edge back to the first instead of
    /// looping on itself.
    BackEdgeToSource,
    /// Single-block layered graph with a definite loop at the first vertex.
    LayeredWithSourceLoop,
}

pub fn gen_buchi_variant(
    inst: &DisjointnessInstance,
    variant: LoopVariant,
) -> (Graph, EdgePartition) {
    let k = inst.k();
    let n = k + 1;
    if variant == LoopVariant::LayeredWithSourceLoop {
        let (_, mut partition) =
            gen_scc_layered(inst, 1, k).expect("one block of k bits always divides k");
        partition.definite.push((0, 0));
        return build(n, partition, inst);
    }
    let mut definite = ascending_complete(n);
    definite.push(match variant {
        LoopVariant::Standard => (k, k),
        LoopVariant::BackEdgeToSource => (k, 0),
        LoopVariant::LayeredWithSourceLoop => unreachable!(),
    });
    let possible = (0..k)
        .map(|j| PossibleEdge {
            from: j,
            to: j,
            bit: j,
            rule: PresenceRule::BothBitsOne,
        })
        .collect();
    build(n, EdgePartition { definite, possible }, inst)
}

/// Undirected distance gadget on `3s + 2` vertices for `k = s*s` bits: a
/// hub `u` adjacent to `t` and to the rows A and B, `t` adjacent to the
/// column set C, each `a_i` adjacent to `b_i`, and possible edges from A
/// and B into C controlled by one vector each. The diameter is 2 exactly
/// when the instance is disjoint and 3 otherwise.
pub fn gen_diameter_gadget(
    inst: &DisjointnessInstance,
) -> Result<(Graph, EdgePartition), Error> {
    let k = inst.k();
    let s = (k as f64).sqrt().round() as usize;
    if s == 0 || s * s != k {
        return Err(Error::NonSquare { k });
    }
    let n = 3 * s + 2;
    let u = 0;
    let t = 1;
    let a = |i: usize| 2 + i;
    let b = |i: usize| 2 + s + i;
    let c = |j: usize| 2 + 2 * s + j;

    let mut definite = Vec::new();
    let mut both = |p: usize, q: usize| {
        definite.push((p, q));
        definite.push((q, p));
    };
    both(u, t);
    for i in 0..s {
        both(u, a(i));
        both(u, b(i));
        both(a(i), b(i));
    }
    for j in 0..s {
        both(t, c(j));
    }

    let mut possible = Vec::with_capacity(4 * k);
    for i in 0..s {
        for j in 0..s {
            let bit = i * s + j;
            for (from, to) in [(a(i), c(j)), (c(j), a(i))] {
                possible.push(PossibleEdge {
                    from,
                    to,
                    bit,
                    rule: PresenceRule::AliceBitZero,
                });
            }
            for (from, to) in [(b(i), c(j)), (c(j), b(i))] {
                possible.push(PossibleEdge {
                    from,
                    to,
                    bit,
                    rule: PresenceRule::BobBitZero,
                });
            }
        }
    }
    Ok(build(n, EdgePartition { definite, possible }, inst))
}
