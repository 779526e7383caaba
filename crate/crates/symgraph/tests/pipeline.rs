//! End-to-end checks through the public API only: generate an instance,
//! serialize and reload it, then cross-check every solver family against
//! the explicit oracles on the reloaded graph.

use symgraph::diameter::{diameter_2approx, diameter_exact};
use symgraph::fileio::{format_graph, parse_graph};
use symgraph::objectives::{self, ObjectiveKind, ObjectiveQuery};
use symgraph::oracles::{self, ExplicitGraph};
use symgraph::protocol::{self, AlgorithmKind, ReductionKind};
use symgraph::random;
use symgraph::reductions::{DisjointnessInstance, InstanceMode};
use symgraph::scc::scc_decomposition;
use symgraph::{Error, Graph, OpCounter, VertexSet};

fn reload(g: &Graph) -> Graph {
    parse_graph(&format_graph(g)).expect("canonical text reparses")
}

fn reduction_kinds(k: usize) -> Vec<ReductionKind> {
    vec![
        ReductionKind::SccLayered { ell: 4, kbar: k / 4 },
        ReductionKind::SccTrivial,
        ReductionKind::BuchiLoops,
        ReductionKind::DiameterGadget,
    ]
}

#[test]
fn generated_graphs_survive_io_and_agree_with_the_oracles() {
    for seed in 0..12u64 {
        let mode = match seed % 3 {
            0 => InstanceMode::Random,
            1 => InstanceMode::ForcedDisjoint,
            _ => InstanceMode::ForcedIntersecting,
        };
        // k = 16 works for every reduction: divisible by the layer count
        // and a perfect square.
        for kind in reduction_kinds(16) {
            let inst = DisjointnessInstance::random(16, mode, 0xF1FE + seed).unwrap();
            let (g, partition) = protocol::generate(kind, &inst).unwrap();
            let reloaded = reload(&g);
            assert_eq!(g.edges(), reloaded.edges(), "{kind:?} seed={seed}");
            assert_eq!(
                {
                    let mut edges = partition.realized_edges(&inst);
                    edges.sort_unstable();
                    edges.dedup();
                    edges
                },
                g.edges(),
                "partition reconstructs the graph for {kind:?}"
            );

            let eg = ExplicitGraph::from_graph(&reloaded);
            let ctr = OpCounter::new();
            let report = scc_decomposition(&reloaded, &ctr);
            let symbolic: Vec<Vec<usize>> =
                report.components.iter().map(|c| c.iter().collect()).collect();
            assert_eq!(
                oracles::normalized(symbolic),
                oracles::normalized(oracles::tarjan_scc(&eg)),
                "{kind:?} seed={seed}"
            );

            let exact = diameter_exact(&reloaded, &OpCounter::new());
            assert_eq!(exact.value, oracles::diameter(&eg), "{kind:?} seed={seed}");
        }
    }
}

#[test]
fn objectives_agree_with_the_oracle_on_random_and_generated_graphs() {
    let kinds = [
        ObjectiveKind::Reach,
        ObjectiveKind::Safe,
        ObjectiveKind::Buchi,
        ObjectiveKind::CoBuchi,
    ];
    for seed in 0..10u64 {
        let n = 4 + (seed as usize * 9) % 40;
        let g = random::digraph(n, 2.5 / n as f64, 0xF1F0 + seed);
        let target = random::subset(n, 0.4, 0xF1F1 + seed);
        let eg = ExplicitGraph::from_graph(&g);
        for kind in kinds {
            let query = ObjectiveQuery { kind, target: target.clone() };
            let got = objectives::solve(&g, &query, &OpCounter::new()).unwrap();
            let expected = oracles::explicit_objective(&eg, kind, &target);
            assert!(
                got.set_eq(&expected, &OpCounter::new()),
                "{kind:?} seed={seed} n={n}"
            );
        }
    }
}

#[test]
fn instrumented_protocol_runs_return_the_uninstrumented_answers() {
    let algorithms = [
        AlgorithmKind::Scc,
        AlgorithmKind::Reach,
        AlgorithmKind::Safe,
        AlgorithmKind::Buchi,
        AlgorithmKind::CoBuchi,
    ];
    for seed in 0..6u64 {
        let inst = DisjointnessInstance::random(12, InstanceMode::Random, 0xF1F2 + seed).unwrap();
        for kind in [
            ReductionKind::SccLayered { ell: 3, kbar: 4 },
            ReductionKind::SccTrivial,
            ReductionKind::BuchiLoops,
        ] {
            let (g, _) = protocol::generate(kind, &inst).unwrap();
            for algorithm in algorithms {
                let sim = protocol::simulate_detailed(kind, &inst, algorithm).unwrap();
                let plain =
                    protocol::run_algorithm(&g, algorithm, &OpCounter::new()).unwrap();
                assert_eq!(sim.output, plain, "{kind:?} {algorithm:?} seed={seed}");
            }
        }
    }
}

#[test]
fn counters_observe_every_one_step_operation() {
    let g = random::digraph(24, 0.12, 0xF1F3);
    let ctr = OpCounter::new();
    let observed = std::rc::Rc::new(std::cell::Cell::new(0u64));
    let hits = observed.clone();
    ctr.set_observer(Box::new(move |_, _, _| hits.set(hits.get() + 1)));
    let report = scc_decomposition(&g, &ctr);
    ctr.clear_observer();
    assert_eq!(observed.get(), report.counters.one_step);
    assert!(report.counters.peak_sets > 0);
}

#[test]
fn public_error_surfaces_are_reachable() {
    let inst = DisjointnessInstance::random(10, InstanceMode::Random, 1).unwrap();
    assert!(matches!(
        protocol::generate(ReductionKind::SccLayered { ell: 3, kbar: 3 }, &inst),
        Err(Error::Divisibility { .. })
    ));
    assert!(matches!(
        protocol::generate(ReductionKind::DiameterGadget, &inst),
        Err(Error::NonSquare { .. })
    ));
    assert!(matches!(
        protocol::simulate(
            ReductionKind::DiameterGadget,
            &DisjointnessInstance::random(9, InstanceMode::Random, 1).unwrap(),
            AlgorithmKind::Reach,
        ),
        Err(Error::UnsupportedCombination { .. })
    ));

    let g = Graph::new(3, &[(0, 1)]).unwrap();
    let wrong_universe = VertexSet::full(4);
    assert!(matches!(
        objectives::reach(&g, &wrong_universe, &OpCounter::new()),
        Err(Error::UniverseMismatch { .. })
    ));
    assert!(matches!(
        VertexSet::empty(3).pick_min(&OpCounter::new()),
        Err(Error::EmptyPick)
    ));
    assert!(matches!(
        diameter_2approx(&g, &OpCounter::new()),
        Err(Error::NotStronglyConnected)
    ));
}
