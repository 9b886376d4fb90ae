//! Device connectivity graphs.
//!
//! An [`Architecture`] is a connected graph over physical nodes `0..n`. Edges
//! may carry a direction, meaning a CNOT is native only from the first node
//! (control) to the second (target). Distances are hop counts on the
//! undirected skeleton and are precomputed for every pair.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArchError {
    #[error("{family} needs a size of at least {min}, got {got}")]
    TooSmall {
        family: &'static str,
        min: usize,
        got: usize,
    },
    #[error("architecture has no nodes")]
    Empty,
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("edge {a}-{b} references a node outside 0..{n}")]
    NodeOutOfRange { a: usize, b: usize, n: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("unknown architecture `{0}`")]
    UnknownName(String),
}

#[derive(Debug, Clone)]
pub struct Architecture {
    name: String,
    num_nodes: usize,
    directed: bool,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    // Dense flags for O(1) edge tests: `directed_edge[a * n + b]` is set when
    // a->b is a native orientation; `skeleton_edge` ignores direction.
    directed_edge: Vec<bool>,
    skeleton_edge: Vec<bool>,
    distance: Vec<u32>,
}

impl PartialEq for Architecture {
    fn eq(&self, other: &Self) -> bool {
        self.num_nodes == other.num_nodes
            && self.directed == other.directed
            && self.edge_set() == other.edge_set()
    }
}

impl Architecture {
    /// Builds a validated undirected architecture. Edge orientation in the
    /// input is irrelevant; `(a, b)` and `(b, a)` are the same edge.
    pub fn undirected(
        name: impl Into<String>,
        num_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ArchError> {
        Architecture::build(name.into(), num_nodes, false, edges.into_iter().collect())
    }

    /// Builds a validated directed architecture where `(a, b)` allows a CNOT
    /// with control `a` and target `b`.
    pub fn directed(
        name: impl Into<String>,
        num_nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, ArchError> {
        Architecture::build(name.into(), num_nodes, true, edges.into_iter().collect())
    }

    fn build(
        name: String,
        n: usize,
        directed: bool,
        raw: Vec<(usize, usize)>,
    ) -> Result<Self, ArchError> {
        if n == 0 {
            return Err(ArchError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(raw.len());
        for (a, b) in raw {
            if a >= n || b >= n {
                return Err(ArchError::NodeOutOfRange { a, b, n });
            }
            if a == b {
                return Err(ArchError::SelfLoop(a));
            }
            let key = if directed {
                (a, b)
            } else {
                (a.min(b), a.max(b))
            };
            if !seen.insert(key) {
                return Err(ArchError::DuplicateEdge(a, b));
            }
            edges.push(key);
        }

        let mut directed_edge = vec![false; n * n];
        let mut skeleton_edge = vec![false; n * n];
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &edges {
            directed_edge[a * n + b] = true;
            if !directed {
                directed_edge[b * n + a] = true;
            }
            if !skeleton_edge[a * n + b] {
                skeleton_edge[a * n + b] = true;
                skeleton_edge[b * n + a] = true;
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut distance = vec![u32::MAX; n * n];
        let mut queue = VecDeque::new();
        for source in 0..n {
            let row = &mut distance[source * n..(source + 1) * n];
            row[source] = 0;
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                for &v in &adjacency[u] {
                    if row[v] == u32::MAX {
                        row[v] = row[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if row.contains(&u32::MAX) {
                return Err(ArchError::Disconnected);
            }
        }

        Ok(Architecture {
            name,
            num_nodes: n,
            directed,
            edges,
            adjacency,
            directed_edge,
            skeleton_edge,
            distance,
        })
    }

    /// Cycle `0 - 1 - ... - (n-1) - 0`.
    pub fn ring(n: usize) -> Result<Self, ArchError> {
        if n < 3 {
            return Err(ArchError::TooSmall {
                family: "ring",
                min: 3,
                got: n,
            });
        }
        Architecture::undirected(format!("ring:{n}"), n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// `side x side` lattice with 4-neighbour connectivity. Node `(row, col)`
    /// has index `row * side + col`.
    pub fn square_grid(side: usize) -> Result<Self, ArchError> {
        if side < 2 {
            return Err(ArchError::TooSmall {
                family: "grid",
                min: 2,
                got: side,
            });
        }
        Architecture::undirected(format!("grid:{side}"), side * side, grid_edges(side, side))
    }

    /// Cyclic butterfly on `r * 2^r` nodes. Node `(w, i)`, with `w` an
    /// `r`-bit row word and `i` a column in `0..r`, has index `w * r + i`.
    /// `(w, i)` connects to `(w, i+1 mod r)` and to `(w ^ (1 << i), i+1 mod r)`.
    pub fn cyclic_butterfly(r: usize) -> Result<Self, ArchError> {
        if r < 2 {
            return Err(ArchError::TooSmall {
                family: "butterfly",
                min: 2,
                got: r,
            });
        }
        let rows = 1usize << r;
        let mut edges = BTreeSet::new();
        for w in 0..rows {
            for i in 0..r {
                let j = (i + 1) % r;
                for v in [w, w ^ (1 << i)] {
                    let (a, b) = (w * r + i, v * r + j);
                    edges.insert((a.min(b), a.max(b)));
                }
            }
        }
        Architecture::undirected(format!("butterfly:{r}"), rows * r, edges)
    }

    /// Every pair of nodes connected.
    pub fn complete(n: usize) -> Result<Self, ArchError> {
        if n < 2 {
            return Err(ArchError::TooSmall {
                family: "complete",
                min: 2,
                got: n,
            });
        }
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b)));
        Architecture::undirected(format!("complete:{n}"), n, edges)
    }

    /// IBM Q 20 Tokyo: a 4x5 lattice (rows 0-4, 5-9, 10-14, 15-19) with
    /// crossed diagonals in six of its squares.
    pub fn ibm_tokyo() -> Self {
        const CROSSES: [(usize, usize); 12] = [
            (1, 7),
            (2, 6),
            (3, 9),
            (4, 8),
            (5, 11),
            (6, 10),
            (7, 13),
            (8, 12),
            (11, 17),
            (12, 16),
            (13, 19),
            (14, 18),
        ];
        let edges = grid_edges(4, 5).chain(CROSSES);
        Architecture::undirected("tokyo", 20, edges).expect("tokyo edge list is valid")
    }

    /// IBM QX5 (Rueschlikon): a directed 2x8 ladder. The upper rail is nodes
    /// 1..=8, the lower rail 0, 15, 14, ..., 9, with rungs 1-0, 2-15, ...,
    /// 8-9. Edge orientation follows the device coupling map.
    pub fn ibmqx5() -> Self {
        const EDGES: [(usize, usize); 22] = [
            (1, 0),
            (1, 2),
            (2, 3),
            (3, 4),
            (3, 14),
            (5, 4),
            (6, 5),
            (6, 7),
            (6, 11),
            (7, 10),
            (8, 7),
            (9, 8),
            (9, 10),
            (11, 10),
            (12, 5),
            (12, 11),
            (12, 13),
            (13, 4),
            (13, 14),
            (15, 0),
            (15, 2),
            (15, 14),
        ];
        Architecture::directed("qx5", 16, EDGES).expect("qx5 edge list is valid")
    }

    /// Rigetti 19Q-Acorn as drawn: four rows of five (0-4, 5-9, 10-14,
    /// 15-19). Node `i` of rows one and three couples to `i + 5` and `i + 6`
    /// in the next row, except at the right border; rows two and three are
    /// joined straight down. Node 3 is the defective qubit on the real chip
    /// and is kept here.
    pub fn rigetti_acorn() -> Self {
        let mut edges = Vec::new();
        for base in [0, 10] {
            for i in 0..5 {
                let a = base + i;
                edges.push((a, a + 5));
                if i < 4 {
                    edges.push((a, a + 6));
                }
            }
        }
        for i in 5..10 {
            edges.push((i, i + 5));
        }
        Architecture::undirected("acorn", 20, edges).expect("acorn edge list is valid")
    }

    /// Resolves the architecture names accepted on the command line:
    /// `ring:N`, `grid:SIDE`, `butterfly:R`, `complete:N`, `tokyo`, `qx5`,
    /// `acorn`.
    pub fn from_name(spec: &str) -> Result<Self, ArchError> {
        let unknown = || ArchError::UnknownName(spec.to_string());
        match spec {
            "tokyo" => return Ok(Architecture::ibm_tokyo()),
            "qx5" | "ibmqx5" => return Ok(Architecture::ibmqx5()),
            "acorn" => return Ok(Architecture::rigetti_acorn()),
            _ => {}
        }
        let (family, size) = spec.split_once(':').ok_or_else(unknown)?;
        let size: usize = size.parse().map_err(|_| unknown())?;
        match family {
            "ring" => Architecture::ring(size),
            "grid" => Architecture::square_grid(size),
            "butterfly" => Architecture::cyclic_butterfly(size),
            "complete" => Architecture::complete(size),
            _ => Err(unknown()),
        }
    }

    /// Parses the edge-list format: a header line `directed N` or
    /// `undirected N`, then one `a b` edge per line. `#` starts a comment.
    pub fn from_edge_list(text: &str) -> Result<Self, ArchError> {
        let mut header: Option<(bool, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let malformed = |msg: &str| ArchError::Malformed {
                line,
                msg: msg.to_string(),
            };
            match header {
                None => {
                    let [kind, count] = fields[..] else {
                        return Err(malformed("expected `directed N` or `undirected N`"));
                    };
                    let directed = match kind {
                        "directed" => true,
                        "undirected" => false,
                        _ => return Err(malformed("expected `directed` or `undirected`")),
                    };
                    let count = count
                        .parse()
                        .map_err(|_| malformed("node count is not an integer"))?;
                    header = Some((directed, count));
                }
                Some(_) => {
                    let [a, b] = fields[..] else {
                        return Err(malformed("expected two node indices"));
                    };
                    let a = a
                        .parse()
                        .map_err(|_| malformed("node index is not an integer"))?;
                    let b = b
                        .parse()
                        .map_err(|_| malformed("node index is not an integer"))?;
                    edges.push((a, b));
                }
            }
        }
        let (directed, n) = header.ok_or(ArchError::Malformed {
            line: 1,
            msg: "missing header".into(),
        })?;
        Architecture::build("file".to_string(), n, directed, edges)
    }

    /// Inverse of [`Architecture::from_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!(
            "{} {}\n",
            if self.directed {
                "directed"
            } else {
                "undirected"
            },
            self.num_nodes
        );
        for (a, b) in &self.edges {
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }

    /// Same graph with each listed edge `(a, b)` made one-way `a -> b`.
    pub fn oriented(&self) -> Architecture {
        Architecture::build(
            format!("{}:directed", self.name),
            self.num_nodes,
            true,
            self.edges.clone(),
        )
        .expect("orienting a valid graph keeps it valid")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Edges as given at construction; normalized to `(min, max)` when
    /// undirected.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().copied().collect()
    }

    /// Undirected skeleton edges as `(min, max)`, ascending.
    pub fn skeleton_edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = (0..self.num_nodes)
            .flat_map(|a| {
                self.adjacency[a]
                    .iter()
                    .filter(move |&&b| b > a)
                    .map(move |&b| (a, b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.num_nodes)
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    /// Adjacent on the undirected skeleton.
    #[inline]
    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.skeleton_edge[a * self.num_nodes + b]
    }

    /// `control -> target` is a native CNOT orientation.
    #[inline]
    pub fn allows_cx(&self, control: usize, target: usize) -> bool {
        self.directed_edge[control * self.num_nodes + target]
    }

    /// Hop distance on the undirected skeleton. Panics on an out-of-range
    /// node; see [`Architecture::try_distance`].
    #[inline]
    pub fn distance(&self, a: usize, b: usize) -> usize {
        self.distance[a * self.num_nodes + b] as usize
    }

    pub fn try_distance(&self, a: usize, b: usize) -> Option<usize> {
        (a < self.num_nodes && b < self.num_nodes).then(|| self.distance(a, b))
    }

    pub fn eccentricity(&self, node: usize) -> usize {
        (0..self.num_nodes)
            .map(|b| self.distance(node, b))
            .max()
            .unwrap_or(0)
    }

    pub fn diameter(&self) -> usize {
        self.distance.iter().copied().max().unwrap_or(0) as usize
    }

    /// Nodes of one shortest path from `a` to `b`, both ends included. Among
    /// equal-length paths the one through lower-indexed nodes is chosen.
    pub fn shortest_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            cur = *self.adjacency[cur]
                .iter()
                .find(|&&v| self.distance(v, b) + 1 == self.distance(cur, b))
                .expect("connected graph has a closer neighbour");
            path.push(cur);
        }
        path
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} nodes, {} edges{})",
            self.name,
            self.num_nodes,
            self.edges.len(),
            if self.directed { ", directed" } else { "" }
        )
    }
}

fn grid_edges(rows: usize, cols: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..rows).flat_map(move |r| {
        (0..cols).flat_map(move |c| {
            let v = r * cols + c;
            let right = (c + 1 < cols).then_some((v, v + 1));
            let down = (r + 1 < rows).then_some((v, v + cols));
            right.into_iter().chain(down)
        })
    })
}
