mod common;

use common::*;
use regnet::generators::{inject_cross_block_noise, two_block_labels, two_block_sbm};
use regnet::reconstruct::{rank_missing, rank_spurious, score_matrix, ScoreSource};
use regnet::solver::{solve, SolverConfig, SolverKind};
use regnet::{build_graph, Graph};

fn lfnr_source() -> ScoreSource {
    ScoreSource::Solver {
        solver: SolverKind::Lfnr,
        lambda: 0.1,
    }
}

fn lfnr_scores(g: &Graph) -> (regnet::Matrix, regnet::ScoreMatrix) {
    let x = g.adjacency_matrix::<f64>();
    let res = solve(&x, &SolverConfig::default(), SolverKind::Lfnr).unwrap();
    assert!(res.converged);
    let sm = score_matrix(&x, &res.z_star, lfnr_source()).unwrap();
    (x, sm)
}

/// 4-clique on {0,1,2,3} without (0,1), plus isolated nodes 4 and 5.
fn clique_minus_edge() -> Graph {
    build_graph(&[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], Some(6)).unwrap()
}

#[test]
fn removed_clique_edge_scores_highest() {
    let g = clique_minus_edge();
    let (x, sm) = lfnr_scores(&g);
    let others: Vec<f64> = g
        .non_edges()
        .into_iter()
        .filter(|&e| e != (0, 1))
        .map(|e| sm.score(e))
        .collect();
    assert_eq!(others.len(), 9);
    assert!(others.iter().all(|&s| sm.score((0, 1)) > s));

    let ranked = rank_missing(&sm, &x).unwrap();
    assert_eq!(ranked.len(), 10);
    assert_eq!(ranked.position((0, 1)), Some(1));
}

#[test]
fn injected_cross_edge_ranks_among_most_spurious() {
    for seed in [9, 19, 29] {
        let base = two_block_sbm(20, 0.6, 0.0, seed).unwrap();
        let (g, noise) = inject_cross_block_noise(&base, &two_block_labels(20), 1, seed + 1).unwrap();
        let (x, sm) = lfnr_scores(&g);
        let ranked = rank_spurious(&sm, &x).unwrap();
        let pos = ranked.position(noise[0]).unwrap();
        let cutoff = (0.1 * g.edge_count() as f64).ceil() as usize;
        assert!(pos <= cutoff, "seed {seed}: injected edge at {pos} of {}", g.edge_count());
    }
}

#[test]
fn rankings_partition_all_pairs() {
    let g = two_block_sbm(15, 0.5, 0.1, 2).unwrap();
    let (x, sm) = lfnr_scores(&g);
    let missing = rank_missing(&sm, &x).unwrap();
    let spurious = rank_spurious(&sm, &x).unwrap();
    assert_eq!(missing.len() + spurious.len(), 15 * 14 / 2);
    assert!(spurious.edges().all(|(i, j)| g.has_edge(i, j)));
    assert!(missing.edges().all(|(i, j)| !g.has_edge(i, j)));
}

#[test]
fn score_matrix_is_symmetric_for_solved_representation() {
    let mut rng = rng(4);
    let g = two_block_sbm(12, 0.5, 0.2, 4).unwrap();
    let x = g.adjacency_matrix::<f64>();
    let z = random_matrix(&mut rng, 12, 12, 1.0);
    let sm = score_matrix(&x, &z, ScoreSource::External).unwrap();
    let e = sm.entries();
    assert!((e - e.transpose()).amax() <= 1e-12);
}
