//! Simple undirected graphs with dense vertex ids and optional role labels.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("edge {0} is not present in the graph")]
    UnknownEdge(Edge),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("malformed graph6: {0}")]
    MalformedGraph6(String),
    #[error("malformed graph json: {0}")]
    MalformedJson(String),
}

/// An unordered vertex pair, stored with the smaller endpoint first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[VertexId; 2]", from = "[VertexId; 2]")]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn lo(self) -> VertexId {
        self.0
    }

    pub fn hi(self) -> VertexId {
        self.1
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.0 == v || self.1 == v
    }

    /// The endpoint that is not `v`. Panics if `v` is not an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        if self.0 == v {
            self.1
        } else {
            assert_eq!(self.1, v, "{v} is not an endpoint of {self}");
            self.0
        }
    }
}

impl From<[VertexId; 2]> for Edge {
    fn from([u, v]: [VertexId; 2]) -> Self {
        Edge::new(u, v)
    }
}

impl From<Edge> for [VertexId; 2] {
    fn from(e: Edge) -> Self {
        [e.0, e.1]
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((u, v): (VertexId, VertexId)) -> Self {
        Edge::new(u, v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// What a vertex stands for in one of the generated gadgets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "role")]
pub enum RoleLabel {
    TerminalA,
    TerminalB,
    TerminalC,
    TerminalD,
    Bottleneck { index: usize },
    WallBranch { row: usize, col: usize },
    PathVertex { path: usize, position: usize },
    Midpoint { edge: Edge, copy: usize },
    Plain,
}

impl RoleLabel {
    /// Short display name used in DOT output.
    pub fn short_name(&self, v: VertexId) -> String {
        match *self {
            RoleLabel::TerminalA => "a*".to_string(),
            RoleLabel::TerminalB => "b*".to_string(),
            RoleLabel::TerminalC => "c*".to_string(),
            RoleLabel::TerminalD => "d*".to_string(),
            RoleLabel::Bottleneck { index } => format!("z{index}"),
            RoleLabel::WallBranch { row, col } => format!("w[{row},{col}]"),
            RoleLabel::PathVertex { path, position } => format!("u[{path},{position}]"),
            RoleLabel::Midpoint { edge, copy } => format!("m[{},{},{copy}]", edge.lo(), edge.hi()),
            RoleLabel::Plain => v.to_string(),
        }
    }

    fn is_terminal(&self) -> bool {
        matches!(
            self,
            RoleLabel::TerminalA
                | RoleLabel::TerminalB
                | RoleLabel::TerminalC
                | RoleLabel::TerminalD
        )
    }
}

/// Undirected simple graph on vertices `0..n`.
///
/// Adjacency lists are kept sorted and the edge list is sorted, so iteration
/// order (and therefore every search built on top) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "crate::io::GraphJson", try_from = "crate::io::GraphJson")]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    edges: Vec<Edge>,
    labels: BTreeMap<VertexId, RoleLabel>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate pairs collapse; loops are rejected.
    pub fn with_vertices<I, E>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let mut set = BTreeSet::new();
        for e in edges {
            let e: Edge = e.into();
            if e.0 == e.1 {
                return Err(GraphError::LoopEdge(e.0));
            }
            if e.1 >= n {
                return Err(GraphError::VertexOutOfRange { vertex: e.1, n });
            }
            set.insert(e);
        }
        let mut adj = vec![Vec::new(); n];
        for e in &set {
            adj[e.0].push(e.1);
            adj[e.1].push(e.0);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            adj,
            edges: set.into_iter().collect(),
            labels: BTreeMap::new(),
        })
    }

    /// Builds a graph whose vertex count is one more than the largest endpoint.
    pub fn from_edges<I, E>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = E>,
        E: Into<Edge>,
    {
        let edges: Vec<Edge> = edges.into_iter().map(Into::into).collect();
        let n = edges.iter().map(|e| e.1 + 1).max().unwrap_or(0);
        Self::with_vertices(n, edges)
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edges: Vec::new(),
            labels: BTreeMap::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| Edge(u, v)));
        Self::with_vertices(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least three vertices");
        Self::with_vertices(n, (0..n).map(|i| Edge::new(i, (i + 1) % n))).expect("cycle is simple")
    }

    pub fn path(n: usize) -> Self {
        Self::with_vertices(n, (1..n).map(|i| Edge(i - 1, i))).expect("path is simple")
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let edges = (0..a).flat_map(|u| (a..a + b).map(move |v| Edge(u, v)));
        Self::with_vertices(a + b, edges).expect("complete bipartite graph is simple")
    }

    /// Attaches role labels. Labels must refer to existing vertices and the
    /// four terminal roles may each occur at most once.
    pub fn with_labels<I>(mut self, labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, RoleLabel)>,
    {
        for (v, label) in labels {
            self.check_vertex(v)?;
            if label == RoleLabel::Plain {
                self.labels.remove(&v);
            } else {
                self.labels.insert(v, label);
            }
        }
        let mut seen = BTreeSet::new();
        for label in self.labels.values().filter(|l| l.is_terminal()) {
            if !seen.insert(*label) {
                return Err(GraphError::MalformedJson(format!(
                    "duplicate terminal role {label:?}"
                )));
            }
        }
        Ok(self)
    }

    pub(crate) fn set_label(&mut self, v: VertexId, label: RoleLabel) {
        if label == RoleLabel::Plain {
            self.labels.remove(&v);
        } else {
            self.labels.insert(v, label);
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.adj.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Position of `e` in [`Graph::edges`].
    pub fn edge_index(&self, e: Edge) -> Option<usize> {
        self.edges.binary_search(&e).ok()
    }

    pub fn label(&self, v: VertexId) -> RoleLabel {
        self.labels.get(&v).copied().unwrap_or(RoleLabel::Plain)
    }

    pub fn labels(&self) -> &BTreeMap<VertexId, RoleLabel> {
        &self.labels
    }

    pub fn find_label(&self, label: RoleLabel) -> Option<VertexId> {
        self.labels
            .iter()
            .find(|(_, l)| **l == label)
            .map(|(v, _)| *v)
    }

    pub fn is_subcubic(&self) -> bool {
        self.max_degree() <= 3
    }

    /// `m - n + c`, the dimension of the cycle space.
    pub fn cycle_rank(&self) -> usize {
        self.m() + self.component_count() - self.n()
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            stack.push(s);
            while let Some(v) = stack.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// `g - removed`: same vertices, fewer edges. Every removed edge must exist.
    pub fn delete_edges<'a, I>(&self, removed: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = &'a Edge>,
    {
        let mut drop = BTreeSet::new();
        for &e in removed {
            if self.edge_index(e).is_none() {
                return Err(GraphError::UnknownEdge(e));
            }
            drop.insert(e);
        }
        let mut out = Graph::with_vertices(
            self.n(),
            self.edges.iter().copied().filter(|e| !drop.contains(e)),
        )
        .expect("subgraph of a simple graph is simple");
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Adds edges (duplicates of existing edges are ignored).
    pub fn add_edges<I>(&self, extra: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut out = Graph::with_vertices(self.n(), self.edges.iter().copied().chain(extra))?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    /// Subgraph induced on `keep`, renumbered in increasing order of the
    /// original ids. Returns the graph and the map new id -> old id.
    pub fn induced_subgraph(&self, keep: &[VertexId]) -> (Graph, Vec<VertexId>) {
        let mut sorted: Vec<VertexId> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut new_id = vec![usize::MAX; self.n()];
        for (i, &v) in sorted.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.0] != usize::MAX && new_id[e.1] != usize::MAX)
            .map(|e| Edge::new(new_id[e.0], new_id[e.1]));
        let mut g = Graph::with_vertices(sorted.len(), edges).expect("induced subgraph is simple");
        for (&v, &l) in &self.labels {
            if new_id[v] != usize::MAX {
                g.labels.insert(new_id[v], l);
            }
        }
        (g, sorted)
    }

    /// Relabels vertices by `perm[old] = new`.
    pub fn permuted(&self, perm: &[VertexId]) -> Graph {
        assert_eq!(perm.len(), self.n());
        let mut g = Graph::with_vertices(
            self.n(),
            self.edges.iter().map(|e| Edge::new(perm[e.0], perm[e.1])),
        )
        .expect("permutation preserves simplicity");
        for (&v, &l) in &self.labels {
            g.labels.insert(perm[v], l);
        }
        g
    }

    /// Repeatedly contracts unprotected degree-2 vertices into an edge between
    /// their neighbours, then renumbers the survivors in increasing order.
    /// A degree-2 vertex whose neighbours are already adjacent is kept, since
    /// contracting it would create a parallel edge.
    ///
    /// Returns the new graph and the map new id -> old id.
    pub fn suppress_degree_two_with_map(
        &self,
        protected: &BTreeSet<VertexId>,
    ) -> Result<(Graph, Vec<VertexId>), GraphError> {
        let n = self.n();
        let mut adj: Vec<BTreeSet<VertexId>> = self
            .adj
            .iter()
            .map(|l| l.iter().copied().collect())
            .collect();
        let mut alive = vec![true; n];
        // Ascending scan to a fixed point keeps the contraction order deterministic.
        loop {
            let mut changed = false;
            for v in 0..n {
                if !alive[v] || protected.contains(&v) || adj[v].len() != 2 {
                    continue;
                }
                let mut it = adj[v].iter();
                let x = *it.next().unwrap();
                let y = *it.next().unwrap();
                if adj[x].contains(&y) {
                    continue;
                }
                adj[x].remove(&v);
                adj[y].remove(&v);
                adj[x].insert(y);
                adj[y].insert(x);
                adj[v].clear();
                alive[v] = false;
                changed = true;
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<VertexId> = (0..n).filter(|&v| alive[v]).collect();
        let mut new_id = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = keep
            .iter()
            .flat_map(|&v| adj[v].iter().filter(move |&&w| v < w).map(move |&w| (v, w)))
            .map(|(v, w)| Edge::new(new_id[v], new_id[w]));
        let mut g = Graph::with_vertices(keep.len(), edges)?;
        for (&v, &l) in &self.labels {
            if alive[v] {
                g.labels.insert(new_id[v], l);
            }
        }
        Ok((g, keep))
    }

    pub fn suppress_degree_two(&self, protected: &BTreeSet<VertexId>) -> Result<Graph, GraphError> {
        self.suppress_degree_two_with_map(protected).map(|(g, _)| g)
    }

    /// True if `vertices` is a simple path in this graph (consecutive entries adjacent).
    pub fn is_path(&self, vertices: &[VertexId]) -> bool {
        if vertices.is_empty() || vertices.iter().any(|&v| v >= self.n()) {
            return false;
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        distinct.len() == vertices.len() && vertices.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// Returns vertices reachable from `start` avoiding `blocked`.
    pub fn reachable_from(&self, start: VertexId, blocked: &[bool]) -> Vec<bool> {
        let mut seen = vec![false; self.n()];
        if blocked[start] {
            return seen;
        }
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &w in &self.adj[v] {
                if !seen[w] && !blocked[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Degree-sequence and edge-count invariant used by the isomorphism checks in tests.
pub fn sorted_degrees(g: &Graph) -> Vec<usize> {
    let mut d = g.degrees();
    d.sort_unstable();
    d
}
