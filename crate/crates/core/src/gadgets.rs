//! Generators for Heinlein walls, elementary grids and walls, walls', edge
//! multiplication, and the counterexample graph `Z`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, RoleLabel, VertexId};
use crate::wall::{Wall, WallError, WallKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("degenerate wall' of size {0}x{1}: every vertex has degree 2 or contraction creates a parallel edge")]
    Degenerate(usize, usize),
    #[error("pattern graph is not subcubic (max degree {0})")]
    NotSubcubic(usize),
    #[error("endpoint pair ({0}, {1}) is only {2}-apart, {3} required")]
    EdgesNotFarApart(VertexId, VertexId, usize, usize),
    #[error("bad incidence: {0}")]
    BadIncidence(String),
    #[error("invalid wall designation: {0}")]
    InvalidDesignation(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Wall(#[from] WallError),
}

/// The four terminals of a linkage gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminals {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
    pub d: VertexId,
}

impl Terminals {
    pub fn as_array(&self) -> [VertexId; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeinleinWall {
    pub graph: Graph,
    pub size: usize,
    pub terminals: Terminals,
    /// `z_0 ..= z_r`; `z_0` is `c*` and `z_r` is `d*`.
    pub bottlenecks: Vec<VertexId>,
    /// `path_vertices[j - 1][i - 1]` is `u^j_i`.
    pub path_vertices: Vec<Vec<VertexId>>,
}

impl HeinleinWall {
    pub fn path_vertex(&self, j: usize, i: usize) -> VertexId {
        self.path_vertices[j - 1][i - 1]
    }

    /// Everything except the four terminals (the graph `W^0`).
    pub fn interior(&self) -> Vec<VertexId> {
        let t = self.terminals.as_array();
        self.graph.vertices().filter(|v| !t.contains(v)).collect()
    }

    pub fn gadget(&self) -> Gadget {
        Gadget {
            graph: self.graph.clone(),
            terminals: self.terminals,
            kind: GadgetKind::Heinlein { size: self.size },
        }
    }
}

/// Builds the Heinlein wall of size `r`.
///
/// Numbering: `z_0..=z_r` are `0..=r`, then `u^j_i` row by row, then `a*`, `b*`.
pub fn heinlein_wall(r: usize) -> Result<HeinleinWall, GadgetError> {
    if r < 1 {
        return Err(GadgetError::InvalidSize(
            "Heinlein wall size must be at least 1".into(),
        ));
    }
    let z = |j: usize| j;
    let u = |j: usize, i: usize| r + 1 + (j - 1) * 2 * r + (i - 1);
    let a = 2 * r * r + r + 1;
    let b = a + 1;
    let n = b + 1;

    let mut edges = Vec::with_capacity(4 * r * r + 2 * r);
    for j in 1..=r {
        for i in 1..2 * r {
            edges.push(Edge::new(u(j, i), u(j, i + 1)));
        }
        edges.push(Edge::new(a, u(j, 1)));
        edges.push(Edge::new(b, u(j, 2 * r)));
        edges.push(Edge::new(z(j - 1), z(j)));
        for i in 1..=r {
            edges.push(Edge::new(z(j - 1), u(j, 2 * i - 1)));
            edges.push(Edge::new(z(j), u(j, 2 * i)));
        }
    }
    let mut labels = vec![
        (a, RoleLabel::TerminalA),
        (b, RoleLabel::TerminalB),
        (z(0), RoleLabel::TerminalC),
        (z(r), RoleLabel::TerminalD),
    ];
    labels.extend((1..r).map(|j| (z(j), RoleLabel::Bottleneck { index: j })));
    for j in 1..=r {
        for i in 1..=2 * r {
            labels.push((
                u(j, i),
                RoleLabel::PathVertex {
                    path: j,
                    position: i,
                },
            ));
        }
    }
    let graph = Graph::with_vertices(n, edges)?.with_labels(labels)?;
    Ok(HeinleinWall {
        graph,
        size: r,
        terminals: Terminals {
            a,
            b,
            c: z(0),
            d: z(r),
        },
        bottlenecks: (0..=r).map(z).collect(),
        path_vertices: (1..=r)
            .map(|j| (1..=2 * r).map(|i| u(j, i)).collect())
            .collect(),
    })
}

/// The `m x n` grid on `v_{i,j}`, numbered row-major from 0.
pub fn elementary_grid(m: usize, n: usize) -> Result<Graph, GadgetError> {
    if m < 1 || n < 1 {
        return Err(GadgetError::InvalidSize(format!("grid size {m}x{n}")));
    }
    let id = |i: usize, j: usize| (i - 1) * n + (j - 1);
    let mut edges = Vec::new();
    for i in 1..=m {
        for j in 1..=n {
            if i < m {
                edges.push(Edge::new(id(i, j), id(i + 1, j)));
            }
            if j < n {
                edges.push(Edge::new(id(i, j), id(i, j + 1)));
            }
        }
    }
    let labels = (1..=m)
        .flat_map(|i| (1..=n).map(move |j| (id(i, j), RoleLabel::WallBranch { row: i, col: j })));
    Ok(Graph::with_vertices(m * n, edges)?.with_labels(labels)?)
}

/// Grid coordinates of every vertex of an elementary wall, indexed by id.
fn wall_coordinates(g: &Graph) -> Vec<(usize, usize)> {
    g.vertices()
        .map(|v| match g.label(v) {
            RoleLabel::WallBranch { row, col } => (row, col),
            other => unreachable!("wall vertex {v} labelled {other:?}"),
        })
        .collect()
}

/// Elementary wall of size `m x n`: the `(m+1) x (2n+2)` grid with every
/// second vertical edge removed, then degree-1 vertices trimmed.
pub fn elementary_wall(m: usize, n: usize) -> Result<Wall, GadgetError> {
    if m < 1 || n < 1 {
        return Err(GadgetError::InvalidSize(format!("wall size {m}x{n}")));
    }
    let (gm, gn) = (m + 1, 2 * n + 2);
    let grid = elementary_grid(gm, gn)?;
    let id = |i: usize, j: usize| (i - 1) * gn + (j - 1);
    let mut removed = Vec::new();
    for i in 1..=m {
        for j in 1..=n + 1 {
            let col = if i % 2 == 1 { 2 * j } else { 2 * j - 1 };
            removed.push(Edge::new(id(i, col), id(i + 1, col)));
        }
    }
    let pruned = grid.delete_edges(&removed)?;

    // Trim degree-1 vertices to a fixed point.
    let mut alive = vec![true; pruned.n()];
    let mut deg = pruned.degrees();
    let mut trimmed = Vec::new();
    loop {
        let leaves: Vec<VertexId> = pruned
            .vertices()
            .filter(|&v| alive[v] && deg[v] == 1)
            .collect();
        if leaves.is_empty() {
            break;
        }
        for v in leaves {
            alive[v] = false;
            trimmed.push(v);
            for &w in pruned.neighbors(v) {
                if alive[w] {
                    deg[w] -= 1;
                }
            }
        }
    }
    let last_corner = if m % 2 == 1 {
        id(m + 1, gn)
    } else {
        id(m + 1, 1)
    };
    trimmed.sort_unstable();
    assert_eq!(
        trimmed,
        {
            let mut t = vec![id(1, gn), last_corner];
            t.sort_unstable();
            t
        },
        "degree-1 trimming must remove exactly the two corners"
    );
    let keep: Vec<VertexId> = pruned.vertices().filter(|&v| alive[v]).collect();
    let (graph, old_ids) = pruned.induced_subgraph(&keep);
    let mut new_id: BTreeMap<(usize, usize), VertexId> = BTreeMap::new();
    let coords = wall_coordinates(&graph);
    for (v, &c) in coords.iter().enumerate() {
        new_id.insert(c, v);
    }
    debug_assert_eq!(old_ids.len(), graph.n());
    let geom = WallGeometry::new(m, n);
    let at = |i: usize, j: usize| new_id.get(&(i, j)).copied();
    let resolve = |seq: Vec<(usize, usize)>| -> Vec<VertexId> {
        seq.into_iter().filter_map(|(i, j)| at(i, j)).collect()
    };
    Ok(Wall::new(
        graph,
        WallKind::Elementary,
        (m, n),
        geom.rows().into_iter().map(resolve).collect(),
        geom.columns().into_iter().map(resolve).collect(),
        geom.bricks().into_iter().map(resolve).collect(),
        resolve(geom.outercycle(&|i, j| at(i, j).is_some())),
    ))
}

/// Coordinate-level description of an elementary wall's rows, columns,
/// bricks and outercycle. Removed corners are filtered out by the caller.
struct WallGeometry {
    m: usize,
    n: usize,
}

impl WallGeometry {
    fn new(m: usize, n: usize) -> Self {
        WallGeometry { m, n }
    }

    fn rows(&self) -> Vec<Vec<(usize, usize)>> {
        (1..=self.m + 1)
            .map(|i| (1..=2 * self.n + 2).map(|j| (i, j)).collect())
            .collect()
    }

    /// Column `k` zig-zags: down at grid column `2k-1` across odd gaps and at
    /// `2k` across even gaps.
    fn columns(&self) -> Vec<Vec<(usize, usize)>> {
        let m = self.m;
        (1..=self.n + 1)
            .map(|k| {
                let mut col = vec![(1, 2 * k - 1)];
                for i in 2..=m {
                    if i % 2 == 0 {
                        col.push((i, 2 * k - 1));
                        col.push((i, 2 * k));
                    } else {
                        col.push((i, 2 * k));
                        col.push((i, 2 * k - 1));
                    }
                }
                col.push(if m % 2 == 1 {
                    (m + 1, 2 * k - 1)
                } else {
                    (m + 1, 2 * k)
                });
                col
            })
            .collect()
    }

    fn bricks(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for i in 1..=self.m {
            for k in 1..=self.n {
                let l = if i % 2 == 1 { 2 * k - 1 } else { 2 * k };
                out.push(vec![
                    (i, l),
                    (i, l + 1),
                    (i, l + 2),
                    (i + 1, l + 2),
                    (i + 1, l + 1),
                    (i + 1, l),
                ]);
            }
        }
        out
    }

    /// First row, last column, last row reversed, first column reversed.
    fn outercycle(&self, exists: &dyn Fn(usize, usize) -> bool) -> Vec<(usize, usize)> {
        let rows = self.rows();
        let cols = self.columns();
        let keep = |seq: &[(usize, usize)]| -> Vec<(usize, usize)> {
            seq.iter().copied().filter(|&(i, j)| exists(i, j)).collect()
        };
        let top = keep(&rows[0]);
        let bottom = keep(&rows[self.m]);
        let right = keep(&cols[self.n]);
        let left = keep(&cols[0]);
        let mut cycle = top;
        cycle.extend(&right[1..]);
        cycle.extend(bottom.iter().rev().skip(1));
        cycle.extend(left.iter().rev().skip(1).take(left.len().saturating_sub(2)));
        cycle
    }
}

/// Elementary wall with every degree-2 vertex suppressed.
///
/// In one-row or one-column walls some degree-2 vertices must stay to keep
/// the graph simple.
///
/// Rows, columns, bricks and the outercycle are the surviving vertices of
/// the corresponding elementary-wall sequences, in the same order.
pub fn wall_prime(m: usize, n: usize) -> Result<Wall, GadgetError> {
    let ew = elementary_wall(m, n)?;
    if m == 1 && n == 1 {
        return Err(GadgetError::Degenerate(m, n));
    }
    let (graph, old_ids) = ew.graph.suppress_degree_two_with_map(&BTreeSet::new())?;
    let mut new_id = vec![None; ew.graph.n()];
    for (v, &old) in old_ids.iter().enumerate() {
        new_id[old] = Some(v);
    }
    let map =
        |seq: &Vec<VertexId>| -> Vec<VertexId> { seq.iter().filter_map(|&v| new_id[v]).collect() };
    Ok(Wall::new(
        graph,
        WallKind::Prime,
        (m, n),
        ew.rows.iter().map(map).collect(),
        ew.columns.iter().map(map).collect(),
        ew.bricks.iter().map(map).collect(),
        map(&ew.outercycle),
    ))
}

/// Replaces edge `e` by `k` internally disjoint paths of length 2. The new
/// midpoints are appended after the existing vertices.
pub fn multiply_edge(g: &Graph, e: Edge, k: usize) -> Result<Graph, GadgetError> {
    if k < 1 {
        return Err(GadgetError::InvalidSize(
            "edge multiplicity must be at least 1".into(),
        ));
    }
    if g.edge_index(e).is_none() {
        return Err(GraphError::UnknownEdge(e).into());
    }
    let n = g.n();
    let edges = g
        .edges()
        .iter()
        .copied()
        .filter(|&f| f != e)
        .chain((0..k).flat_map(|c| [Edge::new(e.lo(), n + c), Edge::new(n + c, e.hi())]));
    let mut out = Graph::with_vertices(n + k, edges)?;
    for (&v, &l) in g.labels() {
        out.set_label(v, l);
    }
    for c in 0..k {
        out.set_label(n + c, RoleLabel::Midpoint { edge: e, copy: c });
    }
    Ok(out)
}

/// A graph with four terminals that gets glued into `Z` in place of the
/// removed edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub graph: Graph,
    pub terminals: Terminals,
    pub kind: GadgetKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GadgetKind {
    Heinlein {
        size: usize,
    },
    /// Two vertex-disjoint terminal paths, each with `len` interior vertices.
    DoublePath {
        len: usize,
    },
    /// Disjoint `a*`-`c*` and `b*`-`d*` paths: no linkage at all.
    CrossedPaths {
        len: usize,
    },
}

/// Control gadget: an `a*`-`b*` path and a disjoint `c*`-`d*` path.
pub fn double_path_gadget(len: usize) -> Gadget {
    two_paths(len, [(0, 1), (2, 3)], GadgetKind::DoublePath { len })
}

/// Control gadget pairing the terminals the other way (`a*`-`c*`, `b*`-`d*`).
pub fn crossed_path_gadget(len: usize) -> Gadget {
    two_paths(len, [(0, 2), (1, 3)], GadgetKind::CrossedPaths { len })
}

fn two_paths(len: usize, pairs: [(VertexId, VertexId); 2], kind: GadgetKind) -> Gadget {
    // a = 0, b = 1, c = 2, d = 3, then the two interiors.
    let mut edges = Vec::new();
    let mut chain = |from: VertexId, to: VertexId, first: VertexId| {
        let mut prev = from;
        for x in first..first + len {
            edges.push(Edge::new(prev, x));
            prev = x;
        }
        edges.push(Edge::new(prev, to));
    };
    chain(pairs[0].0, pairs[0].1, 4);
    chain(pairs[1].0, pairs[1].1, 4 + len);
    let graph = Graph::with_vertices(4 + 2 * len, edges)
        .and_then(|g| {
            g.with_labels([
                (0, RoleLabel::TerminalA),
                (1, RoleLabel::TerminalB),
                (2, RoleLabel::TerminalC),
                (3, RoleLabel::TerminalD),
            ])
        })
        .expect("two disjoint paths form a simple graph");
    Gadget {
        graph,
        terminals: Terminals {
            a: 0,
            b: 1,
            c: 2,
            d: 3,
        },
        kind,
    }
}

/// A wall' sitting inside a pattern graph: `vertex_map[w]` is the pattern
/// vertex playing wall vertex `w`; every wall edge must be a pattern edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallDesignation {
    pub wall: Wall,
    pub vertex_map: Vec<VertexId>,
}

impl WallDesignation {
    /// The pattern graph is the wall itself.
    pub fn identity(wall: Wall) -> Self {
        let vertex_map = wall.graph.vertices().collect();
        WallDesignation { wall, vertex_map }
    }

    fn validate(&self, h: &Graph) -> Result<Vec<Option<VertexId>>, GadgetError> {
        if self.vertex_map.len() != self.wall.graph.n() {
            return Err(GadgetError::InvalidDesignation(
                "vertex map length differs from wall order".into(),
            ));
        }
        let mut inverse = vec![None; h.n()];
        for (w, &x) in self.vertex_map.iter().enumerate() {
            if x >= h.n() {
                return Err(GadgetError::InvalidDesignation(format!(
                    "wall vertex {w} maps outside the pattern"
                )));
            }
            if inverse[x].replace(w).is_some() {
                return Err(GadgetError::InvalidDesignation(format!(
                    "pattern vertex {x} used twice"
                )));
            }
        }
        for e in self.wall.graph.edges() {
            if !h.has_edge(self.vertex_map[e.lo()], self.vertex_map[e.hi()]) {
                return Err(GadgetError::InvalidDesignation(format!(
                    "wall edge {e} is not a pattern edge"
                )));
            }
        }
        Ok(inverse)
    }
}

/// Where the glued gadget ended up inside `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddedGadget {
    pub kind: GadgetKind,
    /// `to_z[x]` is the `Z` vertex of gadget vertex `x`.
    pub to_z: Vec<VertexId>,
    pub terminals: Terminals,
    /// Bottleneck vertices in `Z` (empty for the control gadget).
    pub bottlenecks: Vec<VertexId>,
}

impl EmbeddedGadget {
    /// Gadget vertices other than the terminals, as `Z` ids.
    pub fn interior(&self) -> Vec<VertexId> {
        let t = self.terminals.as_array();
        self.to_z
            .iter()
            .copied()
            .filter(|v| !t.contains(v))
            .collect()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.to_z.contains(&v)
    }
}

/// The subdivided copy of the designated wall inside `Z`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MStar {
    /// `branch[w]` is the `Z` vertex of wall vertex `w`.
    pub branch: Vec<VertexId>,
    /// For every wall edge except `e1`, `e2`: the length-2 path through the
    /// lowest-numbered midpoint.
    pub paths: Vec<(Edge, [VertexId; 3])>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleInstance {
    pub z: Graph,
    pub pattern: Graph,
    /// `star_map[h]` is `h*`.
    pub star_map: Vec<VertexId>,
    pub wall: EmbeddedGadget,
    pub designation: WallDesignation,
    pub m_star: MStar,
    pub r: usize,
    /// `(a, b)` with `a` a proper branch vertex, pattern ids.
    pub e1: (VertexId, VertexId),
    /// `(c, d)` with `c` a proper branch vertex, pattern ids.
    pub e2: (VertexId, VertexId),
    /// Midpoints of each multiplied pattern edge, in copy order.
    #[serde(with = "edge_keyed")]
    pub midpoints: BTreeMap<Edge, Vec<VertexId>>,
}

/// JSON object keys must be strings, so edge-keyed maps go out as pair lists.
mod edge_keyed {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serializer};

    use crate::graph::{Edge, VertexId};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<Edge, Vec<VertexId>>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_seq(m)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<Edge, Vec<VertexId>>, D::Error> {
        Ok(Vec::<(Edge, Vec<VertexId>)>::deserialize(d)?
            .into_iter()
            .collect())
    }
}

impl CounterexampleInstance {
    pub fn e1_edge(&self) -> Edge {
        Edge::new(self.e1.0, self.e1.1)
    }

    pub fn e2_edge(&self) -> Edge {
        Edge::new(self.e2.0, self.e2.1)
    }

    /// The glued gadget as a standalone graph (induced on its `Z` vertices).
    pub fn gadget_graph(&self) -> (Graph, Vec<VertexId>) {
        self.z.induced_subgraph(&self.wall.to_z)
    }
}

/// Default value of the apartness parameter.
pub const DEFAULT_MIN_APART: usize = 70;

/// Builds `Z` with a Heinlein wall of size `2r`.
pub fn build_z(
    h: &Graph,
    designation: &WallDesignation,
    e1: (VertexId, VertexId),
    e2: (VertexId, VertexId),
    r: usize,
    min_apart: usize,
) -> Result<CounterexampleInstance, GadgetError> {
    if r < 1 {
        return Err(GadgetError::InvalidSize("r must be at least 1".into()));
    }
    let gadget = heinlein_wall(2 * r)?.gadget();
    build_z_with_gadget(h, designation, e1, e2, r, min_apart, &gadget)
}

/// As [`build_z`], gluing an arbitrary four-terminal gadget.
pub fn build_z_with_gadget(
    h: &Graph,
    designation: &WallDesignation,
    e1: (VertexId, VertexId),
    e2: (VertexId, VertexId),
    r: usize,
    min_apart: usize,
    gadget: &Gadget,
) -> Result<CounterexampleInstance, GadgetError> {
    if !h.is_subcubic() {
        return Err(GadgetError::NotSubcubic(h.max_degree()));
    }
    if r < 1 {
        return Err(GadgetError::InvalidSize("r must be at least 1".into()));
    }
    for (x, y) in [e1, e2] {
        if !h.has_edge(x, y) {
            return Err(GraphError::UnknownEdge(Edge::new(x, y)).into());
        }
    }
    let inverse = designation.validate(h)?;
    let wall = &designation.wall;
    let wall_vertex = |x: VertexId| -> Result<VertexId, GadgetError> {
        inverse[x].ok_or_else(|| {
            GadgetError::BadIncidence(format!("vertex {x} is not on the designated wall"))
        })
    };
    // Orient each edge so its first end is a proper branch vertex of M.
    let orient = |(x, y): (VertexId, VertexId)| -> Result<(VertexId, VertexId), GadgetError> {
        let (wx, wy) = (wall_vertex(x)?, wall_vertex(y)?);
        if wall.graph.degree(wx) == 3 {
            Ok((x, y))
        } else if wall.graph.degree(wy) == 3 {
            Ok((y, x))
        } else {
            Err(GadgetError::BadIncidence(format!(
                "edge {x}-{y} has no proper branch vertex of the designated wall"
            )))
        }
    };
    let (a, b) = orient(e1)?;
    let (c, d) = orient(e2)?;
    let ends = [a, b, c, d];
    if (0..4).any(|i| (i + 1..4).any(|j| ends[i] == ends[j])) {
        return Err(GadgetError::BadIncidence(
            "e1 and e2 must be vertex-disjoint".into(),
        ));
    }
    for x in [a, b] {
        for y in [c, d] {
            let apart = wall.apartness(wall_vertex(x)?, wall_vertex(y)?)?;
            if apart < min_apart {
                return Err(GadgetError::EdgesNotFarApart(x, y, apart, min_apart));
            }
        }
    }

    let removed = [Edge::new(a, b), Edge::new(c, d)];
    let copies = 2 * r;
    let mut edges = Vec::new();
    let mut midpoints = BTreeMap::new();
    let mut labels: Vec<(VertexId, RoleLabel)> = h.labels().iter().map(|(&v, &l)| (v, l)).collect();
    let mut next = h.n();
    for &f in h.edges().iter().filter(|f| !removed.contains(f)) {
        let mids: Vec<VertexId> = (next..next + copies).collect();
        for (k, &x) in mids.iter().enumerate() {
            edges.push(Edge::new(f.lo(), x));
            edges.push(Edge::new(x, f.hi()));
            labels.push((x, RoleLabel::Midpoint { edge: f, copy: k }));
        }
        next += copies;
        midpoints.insert(f, mids);
    }

    let gt = gadget.terminals;
    let mut to_z = vec![usize::MAX; gadget.graph.n()];
    to_z[gt.a] = a;
    to_z[gt.b] = b;
    to_z[gt.c] = c;
    to_z[gt.d] = d;
    for x in gadget.graph.vertices() {
        if to_z[x] == usize::MAX {
            to_z[x] = next;
            next += 1;
        }
    }
    edges.extend(
        gadget
            .graph
            .edges()
            .iter()
            .map(|e| Edge::new(to_z[e.lo()], to_z[e.hi()])),
    );
    for x in gadget.graph.vertices() {
        let l = gadget.graph.label(x);
        if l != RoleLabel::Plain {
            labels.push((to_z[x], l));
        }
    }
    let z = Graph::with_vertices(next, edges)?.with_labels(labels)?;

    let bottlenecks = match gadget.kind {
        GadgetKind::Heinlein { size } => (0..=size).map(|j| to_z[j]).collect(),
        GadgetKind::DoublePath { .. } | GadgetKind::CrossedPaths { .. } => Vec::new(),
    };
    let m_star = MStar {
        branch: designation.vertex_map.clone(),
        paths: wall
            .graph
            .edges()
            .iter()
            .map(|e| {
                Edge::new(
                    designation.vertex_map[e.lo()],
                    designation.vertex_map[e.hi()],
                )
            })
            .filter(|f| !removed.contains(f))
            .map(|f| (f, [f.lo(), midpoints[&f][0], f.hi()]))
            .collect(),
    };
    Ok(CounterexampleInstance {
        z,
        pattern: h.clone(),
        star_map: h.vertices().collect(),
        wall: EmbeddedGadget {
            kind: gadget.kind,
            to_z,
            terminals: Terminals { a, b, c, d },
            bottlenecks,
        },
        designation: designation.clone(),
        m_star,
        r,
        e1: (a, b),
        e2: (c, d),
        midpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heinlein_r1_by_hand() {
        let w = heinlein_wall(1).unwrap();
        assert_eq!(w.graph.n(), 6);
        assert_eq!(w.graph.m(), 6);
        let (u1, u2) = (w.path_vertex(1, 1), w.path_vertex(1, 2));
        let t = w.terminals;
        let mut expected = vec![
            Edge::new(u1, u2),
            Edge::new(t.c, t.d),
            Edge::new(t.c, u1),
            Edge::new(t.d, u2),
            Edge::new(t.a, u1),
            Edge::new(t.b, u2),
        ];
        expected.sort();
        assert_eq!(w.graph.edges(), expected.as_slice());
        assert_eq!(w.bottlenecks, vec![t.c, t.d]);
    }

    #[test]
    fn heinlein_r2_counts() {
        let w = heinlein_wall(2).unwrap();
        assert_eq!((w.graph.n(), w.graph.m()), (13, 20));
        assert_eq!(w.graph.degree(w.bottlenecks[1]), 6);
        assert_eq!(w.interior().len(), 9);
    }

    #[test]
    fn heinlein_r0_rejected() {
        assert!(matches!(heinlein_wall(0), Err(GadgetError::InvalidSize(_))));
    }

    #[test]
    fn grids() {
        assert_eq!(elementary_grid(1, 1).unwrap().n(), 1);
        let c4 = elementary_grid(2, 2).unwrap();
        assert_eq!((c4.n(), c4.m()), (4, 4));
        assert_eq!(c4.degrees(), vec![2; 4]);
        let g = elementary_grid(3, 4).unwrap();
        assert_eq!((g.n(), g.m()), (12, 17));
        assert!(elementary_grid(0, 3).is_err());
    }

    #[test]
    fn one_by_one_wall_is_a_hexagon() {
        let w = elementary_wall(1, 1).unwrap();
        assert_eq!((w.graph.n(), w.graph.m()), (6, 6));
        assert_eq!(w.graph.degrees(), vec![2; 6]);
        assert_eq!(w.bricks.len(), 1);
        assert_eq!(w.outercycle.len(), 6);
        assert!(matches!(
            wall_prime(1, 1),
            Err(GadgetError::Degenerate(1, 1))
        ));
    }

    #[test]
    fn two_by_two_wall() {
        let w = elementary_wall(2, 2).unwrap();
        assert_eq!(w.graph.n(), 16);
        assert_eq!(w.graph.cycle_rank(), 4);
        let p = wall_prime(2, 2).unwrap();
        assert_eq!(p.graph.cycle_rank(), 4);
        assert!(p.graph.degrees().iter().all(|&d| d == 2 || d == 3));
    }

    #[test]
    fn multiply_edge_shapes() {
        let k2 = Graph::path(2);
        let p3 = multiply_edge(&k2, Edge::new(0, 1), 1).unwrap();
        assert_eq!((p3.n(), p3.m()), (3, 2));
        let theta = multiply_edge(&k2, Edge::new(0, 1), 3).unwrap();
        assert_eq!((theta.n(), theta.m()), (5, 6));
        let c3 = multiply_edge(&Graph::cycle(3), Edge::new(0, 1), 2).unwrap();
        assert_eq!((c3.n(), c3.m()), (5, 6));
        assert_eq!((c3.degree(0), c3.degree(1)), (3, 3));
        assert!(multiply_edge(&k2, Edge::new(0, 2), 1).is_err());
        assert_eq!(
            c3.label(3),
            RoleLabel::Midpoint {
                edge: Edge::new(0, 1),
                copy: 0
            }
        );
    }

    #[test]
    fn double_path_control() {
        let g = double_path_gadget(2);
        assert_eq!((g.graph.n(), g.graph.m()), (8, 6));
        assert!(g.graph.is_path(&[0, 4, 5, 1]));
        assert!(g.graph.is_path(&[2, 6, 7, 3]));
    }
}
