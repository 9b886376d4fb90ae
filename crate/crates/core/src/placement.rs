//! Initial placement of logical qubits onto physical nodes.
//!
//! The circuit's early interactions are collected into a graph of maximum
//! degree two (so every component is a line or a ring), rings are opened, and
//! the resulting lines are laid along a greedy walk through the architecture.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::architecture::Architecture;
use crate::circuit::Timestep;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("{qubits} interacting qubits do not fit on {nodes} nodes")]
    TooManyQubits { qubits: usize, nodes: usize },
}

/// Partial bijection between logical qubits and physical nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    forward: Vec<Option<usize>>,
    inverse: Vec<Option<usize>>,
}

impl Mapping {
    pub fn new(num_qubits: usize, num_nodes: usize) -> Self {
        Mapping {
            forward: vec![None; num_qubits],
            inverse: vec![None; num_nodes],
        }
    }

    /// Qubit `i` on node `i`.
    pub fn identity(num_qubits: usize, num_nodes: usize) -> Self {
        let mut m = Mapping::new(num_qubits, num_nodes);
        for q in 0..num_qubits {
            m.assign(q, q);
        }
        m
    }

    /// Builds a mapping from `(qubit, node)` pairs, rejecting conflicts.
    pub fn from_pairs(
        num_qubits: usize,
        num_nodes: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Option<Self> {
        let mut m = Mapping::new(num_qubits, num_nodes);
        for (q, p) in pairs {
            if q >= num_qubits || p >= num_nodes || m.forward[q].is_some() || m.inverse[p].is_some()
            {
                return None;
            }
            m.assign(q, p);
        }
        Some(m)
    }

    pub fn num_qubits(&self) -> usize {
        self.forward.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.inverse.len()
    }

    #[inline]
    pub fn node(&self, qubit: usize) -> Option<usize> {
        self.forward[qubit]
    }

    #[inline]
    pub fn qubit(&self, node: usize) -> Option<usize> {
        self.inverse[node]
    }

    pub fn is_mapped(&self, qubit: usize) -> bool {
        self.forward[qubit].is_some()
    }

    pub fn is_free(&self, node: usize) -> bool {
        self.inverse[node].is_none()
    }

    pub fn mapped_count(&self) -> usize {
        self.forward.iter().filter(|n| n.is_some()).count()
    }

    pub fn is_complete(&self) -> bool {
        self.forward.iter().all(Option::is_some)
    }

    /// Places an unmapped qubit on a free node.
    pub fn assign(&mut self, qubit: usize, node: usize) {
        assert!(
            self.forward[qubit].is_none(),
            "qubit {qubit} already mapped"
        );
        assert!(self.inverse[node].is_none(), "node {node} already occupied");
        self.forward[qubit] = Some(node);
        self.inverse[node] = Some(qubit);
    }

    /// Exchanges the contents of two nodes; either may be empty.
    pub fn swap_nodes(&mut self, a: usize, b: usize) {
        let (qa, qb) = (self.inverse[a], self.inverse[b]);
        self.inverse[a] = qb;
        self.inverse[b] = qa;
        if let Some(q) = qa {
            self.forward[q] = Some(b);
        }
        if let Some(q) = qb {
            self.forward[q] = Some(a);
        }
    }

    /// `(qubit, node)` for every mapped qubit, by qubit.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.forward
            .iter()
            .enumerate()
            .filter_map(|(q, n)| n.map(|n| (q, n)))
    }

    /// Forward and inverse tables agree.
    pub fn is_consistent(&self) -> bool {
        self.forward
            .iter()
            .enumerate()
            .all(|(q, n)| n.is_none_or(|n| self.inverse.get(n) == Some(&Some(q))))
            && self
                .inverse
                .iter()
                .enumerate()
                .all(|(n, q)| q.is_none_or(|q| self.forward.get(q) == Some(&Some(n))))
    }

    pub fn to_map(&self) -> BTreeMap<usize, usize> {
        self.pairs().collect()
    }
}

/// Serialized form of a mapping: logical qubit index to node index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MappingTable(pub BTreeMap<usize, usize>);

impl From<&Mapping> for MappingTable {
    fn from(m: &Mapping) -> Self {
        MappingTable(m.to_map())
    }
}

impl MappingTable {
    pub fn to_mapping(&self, num_qubits: usize, num_nodes: usize) -> Option<Mapping> {
        Mapping::from_pairs(num_qubits, num_nodes, self.0.iter().map(|(&q, &n)| (q, n)))
    }
}

/// Graph over logical qubits in which every vertex has degree at most two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionGraph {
    num_qubits: usize,
    /// Edges in the order they were admitted.
    edges: Vec<(usize, usize)>,
}

impl InteractionGraph {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, q: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(a, b)| a == q || b == q)
            .count()
    }

    fn neighbors(&self, q: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == q {
                Some(b)
            } else if b == q {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Connected components with at least one edge, as vertex sequences along
    /// each path. A path is read from its lower-indexed endpoint. Longest
    /// paths come first; equal lengths keep the order of their first vertex.
    pub fn paths(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.num_qubits];
        let mut paths = Vec::new();
        for start in 0..self.num_qubits {
            if seen[start] || self.degree(start) != 1 {
                continue;
            }
            let mut path = vec![start];
            seen[start] = true;
            let mut cur = start;
            while let Some(next) = self.neighbors(cur).find(|&v| !seen[v]) {
                seen[next] = true;
                path.push(next);
                cur = next;
            }
            paths.push(path);
        }
        debug_assert!(
            (0..self.num_qubits).all(|q| seen[q] || self.degree(q) == 0),
            "ring left after breaking"
        );
        paths.sort_by_key(|p| std::cmp::Reverse(p.len()));
        paths
    }
}

/// Collects early interactions: pairs are visited timestep by timestep (pairs
/// within a timestep in sorted order) and an edge is admitted when both of
/// its qubits still have degree below two. Each ring is then opened by
/// dropping the edge admitted last within it.
pub fn build_interaction_graph(slices: &[Timestep], num_qubits: usize) -> InteractionGraph {
    let mut degree = vec![0u8; num_qubits];
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for step in slices {
        let mut pairs = step.pairs.clone();
        pairs.sort_unstable();
        for (a, b) in pairs {
            if degree[a] < 2 && degree[b] < 2 && !edges.contains(&(a, b)) {
                degree[a] += 1;
                degree[b] += 1;
                edges.push((a, b));
            }
        }
    }

    // Every component now has max degree 2; it is a ring iff all its
    // vertices have degree exactly 2.
    let mut component = vec![usize::MAX; num_qubits];
    let mut adj = vec![Vec::new(); num_qubits];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut drop = Vec::new();
    for start in 0..num_qubits {
        if component[start] != usize::MAX || adj[start].is_empty() {
            continue;
        }
        let mut stack = vec![start];
        let mut members = Vec::new();
        component[start] = start;
        while let Some(v) = stack.pop() {
            members.push(v);
            for &w in &adj[v] {
                if component[w] == usize::MAX {
                    component[w] = start;
                    stack.push(w);
                }
            }
        }
        if members.iter().all(|&v| degree[v] == 2) {
            let last = edges
                .iter()
                .rposition(|&(a, _)| component[a] == start)
                .expect("ring has edges");
            drop.push(last);
        }
    }
    drop.sort_unstable();
    for idx in drop.into_iter().rev() {
        edges.remove(idx);
    }
    InteractionGraph { num_qubits, edges }
}

/// Node of maximum degree; ties go to the smallest eccentricity, then the
/// lowest index.
pub fn start_node(arch: &Architecture) -> usize {
    (0..arch.num_nodes())
        .min_by_key(|&v| (std::cmp::Reverse(arch.degree(v)), arch.eccentricity(v), v))
        .expect("architecture has nodes")
}

/// Lays the interaction paths, concatenated longest first, along a greedy
/// walk: each next qubit goes to the unassigned neighbour of highest degree
/// (lowest index on ties). When the walk dead-ends a new segment starts at
/// the free node closest to the last placed one (highest degree, then lowest
/// index, on ties). Qubits without interaction edges stay unmapped.
pub fn initial_map(
    graph: &InteractionGraph,
    arch: &Architecture,
) -> Result<Mapping, PlacementError> {
    let line: Vec<usize> = graph.paths().into_iter().flatten().collect();
    let mut mapping = Mapping::new(graph.num_qubits(), arch.num_nodes());
    if line.len() > arch.num_nodes() {
        return Err(PlacementError::TooManyQubits {
            qubits: line.len(),
            nodes: arch.num_nodes(),
        });
    }
    let Some((&first, rest)) = line.split_first() else {
        return Ok(mapping);
    };
    let mut cur = start_node(arch);
    mapping.assign(first, cur);
    for &q in rest {
        let next = arch
            .neighbors(cur)
            .iter()
            .copied()
            .filter(|&v| mapping.is_free(v))
            .min_by_key(|&v| (std::cmp::Reverse(arch.degree(v)), v));
        cur = match next {
            Some(v) => v,
            None => (0..arch.num_nodes())
                .filter(|&v| mapping.is_free(v))
                .min_by_key(|&v| (arch.distance(cur, v), std::cmp::Reverse(arch.degree(v)), v))
                .expect("enough free nodes were checked above"),
        };
        mapping.assign(q, cur);
    }
    Ok(mapping)
}

/// Placement for a whole circuit: slice it, build the interaction graph,
/// and map it onto `arch`.
pub fn place(
    circuit: &crate::circuit::Circuit,
    arch: &Architecture,
) -> Result<Mapping, PlacementError> {
    let slices = crate::circuit::slice_timesteps(circuit);
    let graph = build_interaction_graph(&slices, circuit.num_qubits());
    initial_map(&graph, arch)
}
