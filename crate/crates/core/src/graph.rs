//! Undirected simple graphs and edge sets.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{DenseMatrix, Real};

/// Unordered node pair stored canonically as `(min, max)`.
pub type Edge = (usize, usize);

#[inline]
pub fn canonical(i: usize, j: usize) -> Edge {
    if i <= j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Undirected simple graph over nodes `0..node_count`.
///
/// Edges are kept canonical and sorted, so iteration order is stable.
/// Isolated nodes are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    node_count: usize,
    edges: BTreeSet<Edge>,
}

impl Graph {
    pub fn empty(node_count: usize) -> Self {
        Graph {
            node_count,
            edges: BTreeSet::new(),
        }
    }

    /// Builds a graph from canonical, in-range, loop-free edges.
    pub(crate) fn from_canonical(node_count: usize, edges: BTreeSet<Edge>) -> Self {
        debug_assert!(edges.iter().all(|&(i, j)| i < j && j < node_count));
        Graph { node_count, edges }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_set(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.edges.contains(&canonical(i, j))
    }

    /// Number of unordered node pairs `n(n-1)/2`.
    pub fn pair_count(&self) -> usize {
        self.node_count * self.node_count.saturating_sub(1) / 2
    }

    /// Sorted neighbor lists.
    pub fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for &(i, j) in &self.edges {
            adj[i].push(j);
            adj[j].push(i);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count];
        for &(i, j) in &self.edges {
            deg[i] += 1;
            deg[j] += 1;
        }
        deg
    }

    /// All node pairs `i < j` that are not edges, in lexicographic order.
    pub fn non_edges(&self) -> Vec<Edge> {
        let n = self.node_count;
        let mut out = Vec::with_capacity(self.pair_count() - self.edges.len());
        for i in 0..n {
            for j in (i + 1)..n {
                if !self.edges.contains(&(i, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency_matrix<T: Real>(&self) -> DenseMatrix<T> {
        let n = self.node_count;
        let mut x = DenseMatrix::<T>::zeros(n, n);
        for &(i, j) in &self.edges {
            x[(i, j)] = T::one();
            x[(j, i)] = T::one();
        }
        x
    }

    /// Returns `(g.edges \ remove) ∪ add` on the same node set.
    ///
    /// Every removed edge must exist, every added edge must be new,
    /// in range and not a self-loop.
    pub fn perturb(&self, remove: &EdgeSet, add: &EdgeSet) -> Result<Graph> {
        let mut edges = self.edges.clone();
        for &e in remove.iter() {
            if !edges.remove(&e) {
                return Err(Error::Precondition(format!(
                    "cannot remove non-existent edge ({}, {})",
                    e.0, e.1
                )));
            }
        }
        for &(i, j) in add.iter() {
            if i == j {
                return Err(Error::Precondition(format!("cannot add self-loop ({i}, {i})")));
            }
            if j >= self.node_count {
                return Err(Error::Precondition(format!(
                    "edge ({i}, {j}) out of range for {} nodes",
                    self.node_count
                )));
            }
            if self.edges.contains(&(i, j)) || !edges.insert((i, j)) {
                return Err(Error::Precondition(format!("cannot add existing edge ({i}, {j})")));
            }
        }
        Ok(Graph::from_canonical(self.node_count, edges))
    }

    /// Edge list in canonical order, suitable for `build_graph`.
    pub fn edge_pairs(&self) -> Vec<(i64, i64)> {
        self.edges.iter().map(|&(i, j)| (i as i64, j as i64)).collect()
    }
}

/// Builds a simple undirected graph from raw integer pairs.
///
/// Self-loops are dropped and reversed or repeated pairs merged. Without an
/// explicit `node_count` the graph spans `0..=max index`.
pub fn build_graph(pairs: &[(i64, i64)], node_count: Option<usize>) -> Result<Graph> {
    let mut max_index: Option<usize> = None;
    let mut edges = BTreeSet::new();
    for &(a, b) in pairs {
        if a < 0 || b < 0 {
            return Err(Error::input(format!("negative node index in pair ({a}, {b})")));
        }
        let (a, b) = (a as usize, b as usize);
        if let Some(n) = node_count {
            if a >= n || b >= n {
                return Err(Error::input(format!(
                    "pair ({a}, {b}) exceeds declared node count {n}"
                )));
            }
        }
        max_index = Some(max_index.map_or(a.max(b), |m| m.max(a).max(b)));
        if a != b {
            edges.insert(canonical(a, b));
        }
    }
    let n = node_count.unwrap_or_else(|| max_index.map_or(0, |m| m + 1));
    Ok(Graph::from_canonical(n, edges))
}

/// What an edge set stands for in an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeRole {
    Training,
    Missing,
    Spurious,
    Probe,
    Regulation,
}

/// Ordered list of distinct canonical pairs with a role tag.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    role: EdgeRole,
    edges: Vec<Edge>,
    lookup: BTreeSet<Edge>,
}

impl EdgeSet {
    pub fn new(role: EdgeRole) -> Self {
        EdgeSet {
            role,
            edges: Vec::new(),
            lookup: BTreeSet::new(),
        }
    }

    /// Canonicalizes pairs and keeps the first occurrence of each, preserving order.
    pub fn from_pairs(role: EdgeRole, pairs: impl IntoIterator<Item = Edge>) -> Self {
        let mut set = EdgeSet::new(role);
        for (i, j) in pairs {
            set.push(i, j);
        }
        set
    }

    /// Appends a pair; returns false if it was already present.
    pub fn push(&mut self, i: usize, j: usize) -> bool {
        let e = canonical(i, j);
        if self.lookup.insert(e) {
            self.edges.push(e);
            true
        } else {
            false
        }
    }

    pub fn role(&self) -> EdgeRole {
        self.role
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.lookup.contains(&canonical(i, j))
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.edges.iter()
    }

    pub fn as_slice(&self) -> &[Edge] {
        &self.edges
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(role: EdgeRole, pairs: &[Edge]) -> EdgeSet {
        EdgeSet::from_pairs(role, pairs.iter().copied())
    }

    #[test]
    fn duplicates_merge() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 1)], None).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn self_loop_dropped() {
        let g = build_graph(&[(0, 0), (0, 1)], None).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1)]);
    }

    #[test]
    fn empty_with_declared_count() {
        let g = build_graph(&[], Some(5)).unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn bad_indices() {
        assert!(matches!(build_graph(&[(-1, 2)], None), Err(Error::Input(_))));
        assert!(matches!(build_graph(&[(0, 5)], Some(5)), Err(Error::Input(_))));
    }

    #[test]
    fn perturb_examples() {
        let tri = build_graph(&[(0, 1), (1, 2), (0, 2)], None).unwrap();
        let path = build_graph(&[(0, 1), (1, 2)], None).unwrap();
        let none = EdgeSet::new(EdgeRole::Regulation);
        let r = tri.perturb(&set(EdgeRole::Regulation, &[(0, 2)]), &none).unwrap();
        assert_eq!(r, path);
        let a = path.perturb(&none, &set(EdgeRole::Missing, &[(2, 0)])).unwrap();
        assert_eq!(a, tri);
        assert_eq!(tri.perturb(&none, &none).unwrap(), tri);
    }

    #[test]
    fn perturb_preconditions() {
        let path = build_graph(&[(0, 1), (1, 2)], None).unwrap();
        let none = EdgeSet::new(EdgeRole::Regulation);
        let missing = set(EdgeRole::Regulation, &[(0, 2)]);
        assert!(matches!(path.perturb(&missing, &none), Err(Error::Precondition(_))));
        let existing = set(EdgeRole::Spurious, &[(1, 0)]);
        assert!(matches!(path.perturb(&none, &existing), Err(Error::Precondition(_))));
        let looped = set(EdgeRole::Spurious, &[(1, 1)]);
        assert!(matches!(path.perturb(&none, &looped), Err(Error::Precondition(_))));
    }

    #[test]
    fn edge_set_dedups_in_order() {
        let s = set(EdgeRole::Probe, &[(3, 1), (0, 2), (1, 3)]);
        assert_eq!(s.as_slice(), &[(1, 3), (0, 2)]);
        assert!(s.contains(3, 1));
    }

    fn arb_pairs() -> impl Strategy<Value = Vec<(i64, i64)>> {
        prop::collection::vec((0i64..12, 0i64..12), 0..40)
    }

    proptest! {
        #[test]
        fn build_is_idempotent(pairs in arb_pairs()) {
            let g = build_graph(&pairs, None).unwrap();
            let again = build_graph(&g.edge_pairs(), Some(g.node_count())).unwrap();
            prop_assert_eq!(g, again);
        }

        #[test]
        fn adjacency_is_symmetric_binary(pairs in arb_pairs()) {
            let g = build_graph(&pairs, None).unwrap();
            let x = g.adjacency_matrix::<f64>();
            prop_assert_eq!(&x, &x.transpose());
            for i in 0..g.node_count() {
                prop_assert_eq!(x[(i, i)], 0.0);
            }
            prop_assert!(x.iter().all(|&v| v == 0.0 || v == 1.0));
        }

        #[test]
        fn perturb_round_trip(pairs in arb_pairs(), mask in prop::collection::vec(any::<bool>(), 66)) {
            let g = build_graph(&pairs, Some(12)).unwrap();
            let mut remove = EdgeSet::new(EdgeRole::Regulation);
            let mut add = EdgeSet::new(EdgeRole::Spurious);
            let mut k = 0;
            for i in 0..12 {
                for j in (i + 1)..12 {
                    if mask[k] {
                        if g.has_edge(i, j) { remove.push(i, j); } else { add.push(i, j); }
                    }
                    k += 1;
                }
            }
            let forward = g.perturb(&remove, &add).unwrap();
            let back = forward.perturb(&add, &remove).unwrap();
            prop_assert_eq!(back, g);
        }
    }
}
