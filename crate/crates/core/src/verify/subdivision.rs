//! Exact search for subdivisions of a pattern graph inside a host graph.
//!
//! Pattern vertices are placed one at a time; as soon as both ends of a
//! pattern edge are placed, the edge is routed along a host path whose
//! interior avoids everything used so far. Paths are tried in order of
//! increasing length. Host vertices with identical neighbourhoods (false
//! twins, e.g. the parallel midpoints of a multiplied edge) are
//! interchangeable, so only the lowest unused member of each twin class is
//! ever tried.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph, VertexId};
use crate::search::{find_first, map_all, Budget, SearchConfig, VerifyError};

/// A subdivision of `h` in `g`: branch vertices plus one path per pattern edge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub branch_map: Vec<VertexId>,
    /// In the pattern's edge order; each path runs from the image of the
    /// edge's lower endpoint to the image of its higher endpoint.
    pub edge_paths: Vec<(Edge, Vec<VertexId>)>,
}

impl Embedding {
    pub fn image_edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .edge_paths
            .iter()
            .flat_map(|(_, p)| p.windows(2).map(|w| Edge::new(w[0], w[1])))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn image_vertices(&self) -> Vec<VertexId> {
        let mut out: Vec<VertexId> = self.branch_map.clone();
        for (_, p) in &self.edge_paths {
            out.extend(&p[1..p.len() - 1]);
        }
        out.sort_unstable();
        out
    }

    /// Checks that this is a genuine subdivision of `h` in `g`.
    pub fn validate(&self, h: &Graph, g: &Graph) -> Result<(), String> {
        if self.branch_map.len() != h.n() {
            return Err("branch map has the wrong length".into());
        }
        let mut owner = vec![usize::MAX; g.n()];
        for (x, &v) in self.branch_map.iter().enumerate() {
            if v >= g.n() {
                return Err(format!("branch vertex {v} out of range"));
            }
            if owner[v] != usize::MAX {
                return Err(format!("host vertex {v} used twice as a branch vertex"));
            }
            owner[v] = x;
        }
        if self.edge_paths.len() != h.m() {
            return Err("wrong number of edge paths".into());
        }
        for (i, (e, p)) in self.edge_paths.iter().enumerate() {
            if *e != h.edges()[i] {
                return Err(format!(
                    "edge path {i} is labelled {e}, expected {}",
                    h.edges()[i]
                ));
            }
            if !g.is_path(p) || p.len() < 2 {
                return Err(format!("route for {e} is not a path"));
            }
            if p[0] != self.branch_map[e.lo()] || *p.last().unwrap() != self.branch_map[e.hi()] {
                return Err(format!("route for {e} has the wrong ends"));
            }
            for &v in &p[1..p.len() - 1] {
                if owner[v] != usize::MAX {
                    return Err(format!("host vertex {v} used twice"));
                }
                owner[v] = usize::MAX - 1;
            }
        }
        Ok(())
    }
}

/// Twin classes of `g`: `prev[v]` is the next-lower vertex with the same
/// open neighbourhood.
fn twin_links(g: &Graph) -> Vec<Option<VertexId>> {
    let mut by_nbhd: BTreeMap<&[VertexId], VertexId> = BTreeMap::new();
    let mut prev = vec![None; g.n()];
    for v in g.vertices() {
        if g.degree(v) == 0 {
            continue;
        }
        if let Some(p) = by_nbhd.insert(g.neighbors(v), v) {
            prev[v] = Some(p);
        }
    }
    prev
}

/// Placement order: repeatedly the unplaced vertex with the most placed
/// neighbours (then highest degree, then lowest id).
fn placement_order(h: &Graph) -> Vec<VertexId> {
    let n = h.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut placed_nbrs = vec![0usize; n];
    for _ in 0..n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| (placed_nbrs[v], h.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed[next] = true;
        order.push(next);
        for &w in h.neighbors(next) {
            placed_nbrs[w] += 1;
        }
    }
    order
}

enum Flow {
    Stop,
    Continue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PathPass {
    Any,
    AvoidReserved,
    UseReserved,
}

struct Matcher<'a> {
    h: &'a Graph,
    g: &'a Graph,
    order: Vec<VertexId>,
    /// For `order[k]`: pattern edges (index, other end) to earlier vertices.
    back_edges: Vec<Vec<(usize, VertexId)>>,
    twin_prev: Vec<Option<VertexId>>,
    budget: &'a Budget,
    used: Vec<bool>,
    branch_of: Vec<Option<VertexId>>,
    /// Pattern vertex whose image is host vertex `v`.
    owner: Vec<Option<VertexId>>,
    routes: Vec<Option<Vec<VertexId>>>,
    pending: Vec<usize>,
    /// Preferred images (search order only; never restricts the answer).
    hint: Option<&'a [VertexId]>,
    /// `hinted[v]`: pattern vertex whose preferred image is `v`.
    hinted: Vec<Option<VertexId>>,
}

impl<'a> Matcher<'a> {
    fn new(h: &'a Graph, g: &'a Graph, budget: &'a Budget, hint: Option<&'a [VertexId]>) -> Self {
        let order = placement_order(h);
        let mut hinted = vec![None; g.n()];
        for (x, &v) in hint.unwrap_or_default().iter().enumerate() {
            hinted[v] = Some(x);
        }
        let mut pos = vec![0; h.n()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        let mut back_edges = vec![Vec::new(); h.n()];
        for (i, e) in h.edges().iter().enumerate() {
            let (x, y) = if pos[e.lo()] > pos[e.hi()] {
                (e.lo(), e.hi())
            } else {
                (e.hi(), e.lo())
            };
            back_edges[pos[x]].push((i, y));
        }
        for list in &mut back_edges {
            list.sort_by_key(|&(_, y)| pos[y]);
        }
        Matcher {
            h,
            g,
            order,
            back_edges,
            twin_prev: twin_links(g),
            budget,
            used: vec![false; g.n()],
            branch_of: vec![None; h.n()],
            owner: vec![None; g.n()],
            routes: vec![None; h.m()],
            pending: h.degrees(),
            hint,
            hinted,
        }
    }

    /// Preferred image of a pattern vertex that is not placed yet.
    fn reserved(&self, v: VertexId) -> bool {
        self.hinted[v].is_some_and(|x| self.branch_of[x].is_none())
    }

    fn eligible(&self, v: VertexId) -> bool {
        !self.used[v] && self.twin_prev[v].is_none_or(|p| self.used[p])
    }

    /// Every placed pattern vertex still has room for its unrouted edges.
    fn feasible(&self) -> bool {
        self.order.iter().all(|&x| {
            let Some(b) = self.branch_of[x] else {
                return true;
            };
            let need = self.pending[x];
            if need == 0 {
                return true;
            }
            let room = self
                .g
                .neighbors(b)
                .iter()
                .filter(|&&w| match self.owner[w] {
                    None => !self.used[w],
                    // A direct edge to a placed neighbour can still carry that edge.
                    Some(y) => self.h.has_edge(x, y) && self.route_between(x, y).is_none(),
                })
                .count();
            room >= need
        })
    }

    fn route_between(&self, x: VertexId, y: VertexId) -> Option<&Vec<VertexId>> {
        let i = self.h.edge_index(Edge::new(x, y))?;
        self.routes[i].as_ref()
    }

    fn place(&mut self, v: VertexId, x: VertexId) {
        self.used[v] = true;
        self.branch_of[x] = Some(v);
        self.owner[v] = Some(x);
    }

    fn unplace(&mut self, v: VertexId, x: VertexId) {
        self.used[v] = false;
        self.branch_of[x] = None;
        self.owner[v] = None;
    }

    /// Candidate images for `order[k]`: reachable from every placed
    /// neighbour, nearest (by total distance) first.
    fn candidates(&self, k: usize) -> Vec<VertexId> {
        let x = self.order[k];
        let need = self.h.degree(x);
        let mut total = vec![0usize; self.g.n()];
        for &(_, y) in &self.back_edges[k] {
            let dist = self.free_distances(self.branch_of[y].unwrap());
            for (t, d) in total.iter_mut().zip(dist) {
                *t = t.saturating_add(d);
            }
        }
        let mut c: Vec<VertexId> = self
            .g
            .vertices()
            .filter(|&v| self.eligible(v) && self.g.degree(v) >= need && total[v] != usize::MAX)
            .collect();
        c.sort_by_key(|&v| (total[v], v));
        if let Some(pos) = self
            .hint
            .and_then(|hint| c.iter().position(|&v| v == hint[x]))
        {
            let v = c.remove(pos);
            c.insert(0, v);
        }
        c
    }

    /// Necessary condition for completing the embedding once every placed
    /// vertex has its back edges routed: each connected block of unplaced
    /// pattern vertices must fit into a single free region of the host that
    /// has enough room, enough high-degree vertices, and enough free
    /// neighbours at every placed vertex attached to the block.
    fn lookahead(&self) -> bool {
        let (g, h) = (self.g, self.h);
        // Free regions of the host.
        let mut region = vec![usize::MAX; g.n()];
        let mut regions: Vec<Vec<usize>> = Vec::new(); // per region: counts of vertices with degree >= t
        for s in g.vertices() {
            if self.used[s] || region[s] != usize::MAX {
                continue;
            }
            let id = regions.len();
            let mut by_degree = vec![0usize; 5];
            region[s] = id;
            let mut stack = vec![s];
            while let Some(v) = stack.pop() {
                by_degree[g.degree(v).min(4)] += 1;
                for &w in g.neighbors(v) {
                    if !self.used[w] && region[w] == usize::MAX {
                        region[w] = id;
                        stack.push(w);
                    }
                }
            }
            // Suffix sums: entry t counts vertices of degree at least t.
            for t in (0..4).rev() {
                by_degree[t] += by_degree[t + 1];
            }
            regions.push(by_degree);
        }
        // Blocks of unplaced pattern vertices.
        let mut seen = vec![false; h.n()];
        for s in h.vertices() {
            if seen[s] || self.branch_of[s].is_some() {
                continue;
            }
            let mut need = [0usize; 5];
            let mut attached: BTreeMap<VertexId, usize> = BTreeMap::new();
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(y) = stack.pop() {
                need[h.degree(y).min(4)] += 1;
                for &z in h.neighbors(y) {
                    if let Some(b) = self.branch_of[z] {
                        *attached.entry(b).or_default() += 1;
                    } else if !seen[z] {
                        seen[z] = true;
                        stack.push(z);
                    }
                }
            }
            for t in (0..4).rev() {
                need[t] += need[t + 1];
            }
            let fits = |id: usize| (0..5).all(|t| regions[id][t] >= need[t]);
            let ok = match attached.keys().next() {
                None => (0..regions.len()).any(fits),
                Some(&b0) => {
                    let mut options: Vec<usize> = g
                        .neighbors(b0)
                        .iter()
                        .filter(|&&w| !self.used[w])
                        .map(|&w| region[w])
                        .collect();
                    options.sort_unstable();
                    options.dedup();
                    options.into_iter().any(|id| {
                        fits(id)
                            && attached.iter().all(|(&b, &c)| {
                                g.neighbors(b)
                                    .iter()
                                    .filter(|&&w| !self.used[w] && region[w] == id)
                                    .count()
                                    >= c
                            })
                    })
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }

    /// BFS distances from `src` through unused vertices; used vertices get a
    /// distance but are not expanded.
    fn free_distances(&self, src: VertexId) -> Vec<usize> {
        self.distances(src, false)
    }

    fn distances(&self, src: VertexId, avoid_reserved: bool) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.g.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in self.g.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    if !self.used[w] && !(avoid_reserved && self.reserved(w)) {
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    fn place_from<F>(&mut self, k: usize, visit: &mut F) -> Result<Flow, VerifyError>
    where
        F: FnMut(&Self) -> Result<Flow, VerifyError>,
    {
        if k == self.order.len() {
            return visit(self);
        }
        let x = self.order[k];
        for v in self.candidates(k) {
            if !self.eligible(v) {
                continue;
            }
            self.budget.tick()?;
            self.place(v, x);
            if self.feasible() {
                if let Flow::Stop = self.route_from(k, 0, visit)? {
                    self.unplace(v, x);
                    return Ok(Flow::Stop);
                }
            }
            self.unplace(v, x);
        }
        Ok(Flow::Continue)
    }

    fn route_from<F>(&mut self, k: usize, ei: usize, visit: &mut F) -> Result<Flow, VerifyError>
    where
        F: FnMut(&Self) -> Result<Flow, VerifyError>,
    {
        if ei == self.back_edges[k].len() {
            if !self.lookahead() {
                return Ok(Flow::Continue);
            }
            return self.place_from(k + 1, visit);
        }
        let (edge_idx, y) = self.back_edges[k][ei];
        let x = self.order[k];
        let from = self.branch_of[x].unwrap();
        let to = self.branch_of[y].unwrap();
        let free = self.used.iter().filter(|&&u| !u).count();
        let mut done = |m: &mut Self, p: &[VertexId]| {
            let e = m.h.edges()[edge_idx];
            let oriented = if m.branch_of[e.lo()] == Some(p[0]) {
                p.to_vec()
            } else {
                p.iter().rev().copied().collect()
            };
            m.routes[edge_idx] = Some(oriented);
            m.pending[x] -= 1;
            m.pending[y] -= 1;
            let flow = if m.feasible() {
                m.route_from(k, ei + 1, visit)?
            } else {
                Flow::Continue
            };
            m.pending[x] += 1;
            m.pending[y] += 1;
            m.routes[edge_idx] = None;
            Ok(flow)
        };
        // Paths avoiding reserved vertices first, then those using at least
        // one; without a hint only the second pass has anything to do.
        let passes: &[PathPass] = if self.hint.is_some() {
            &[PathPass::AvoidReserved, PathPass::UseReserved]
        } else {
            &[PathPass::Any]
        };
        for &pass in passes {
            let dist = self.distances(to, pass == PathPass::AvoidReserved);
            if dist[from] == usize::MAX {
                continue;
            }
            let mut path = vec![from];
            for len in dist[from]..=free + 1 {
                if let Flow::Stop =
                    self.extend_path(&mut path, to, len, &dist, pass, 0, &mut done)?
                {
                    return Ok(Flow::Stop);
                }
            }
        }
        Ok(Flow::Continue)
    }

    /// Enumerates paths of exactly `len` edges from the end of `path` to `to`.
    #[allow(clippy::too_many_arguments)]
    fn extend_path<C>(
        &mut self,
        path: &mut Vec<VertexId>,
        to: VertexId,
        len: usize,
        dist: &[usize],
        pass: PathPass,
        reserved_used: usize,
        done: &mut C,
    ) -> Result<Flow, VerifyError>
    where
        C: FnMut(&mut Self, &[VertexId]) -> Result<Flow, VerifyError>,
    {
        self.budget.tick()?;
        let end = *path.last().unwrap();
        let steps = path.len() - 1;
        for i in 0..self.g.neighbors(end).len() {
            let w = self.g.neighbors(end)[i];
            if w == to {
                if steps + 1 == len && (pass != PathPass::UseReserved || reserved_used > 0) {
                    path.push(w);
                    let flow = done(self, path)?;
                    path.pop();
                    if let Flow::Stop = flow {
                        return Ok(Flow::Stop);
                    }
                }
                continue;
            }
            if !self.eligible(w) || dist[w] == usize::MAX || steps + 1 + dist[w] > len {
                continue;
            }
            let r = self.reserved(w);
            if r && pass == PathPass::AvoidReserved {
                continue;
            }
            self.used[w] = true;
            path.push(w);
            let flow =
                self.extend_path(path, to, len, dist, pass, reserved_used + r as usize, done)?;
            path.pop();
            self.used[w] = false;
            if let Flow::Stop = flow {
                return Ok(Flow::Stop);
            }
        }
        Ok(Flow::Continue)
    }

    fn embedding(&self) -> Embedding {
        Embedding {
            branch_map: self.branch_of.iter().map(|b| b.unwrap()).collect(),
            edge_paths: self
                .h
                .edges()
                .iter()
                .zip(&self.routes)
                .map(|(&e, r)| (e, r.clone().unwrap()))
                .collect(),
        }
    }

    /// Number of host-level embeddings represented by the current canonical one.
    fn expansion(&self) -> u128 {
        let mut class_size: BTreeMap<VertexId, (u128, u128)> = BTreeMap::new();
        for v in self.g.vertices() {
            let mut root = v;
            while let Some(p) = self.twin_prev[root] {
                root = p;
            }
            let entry = class_size.entry(root).or_default();
            entry.0 += 1;
            entry.1 += self.used[v] as u128;
        }
        class_size
            .values()
            .map(|&(s, k)| (0..k).map(|i| s - i).product::<u128>())
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// Top-level choices for the first pattern vertex.
    fn first_candidates(&self) -> Vec<VertexId> {
        if self.order.is_empty() {
            return Vec::new();
        }
        self.candidates(0)
    }

    fn run_from_first<F>(&mut self, first: VertexId, visit: &mut F) -> Result<Flow, VerifyError>
    where
        F: FnMut(&Self) -> Result<Flow, VerifyError>,
    {
        let x = self.order[0];
        self.budget.tick()?;
        self.place(first, x);
        let flow = if self.feasible() {
            self.route_from(0, 0, visit)?
        } else {
            Flow::Continue
        };
        self.unplace(first, x);
        Ok(flow)
    }
}

fn trivially_absent(h: &Graph, g: &Graph) -> bool {
    if h.n() > g.n() || h.m() > g.m() {
        return true;
    }
    let mut hd = h.degrees();
    let mut gd = g.degrees();
    hd.sort_unstable_by(|a, b| b.cmp(a));
    gd.sort_unstable_by(|a, b| b.cmp(a));
    hd.iter().zip(&gd).any(|(a, b)| a > b)
}

/// Finds a subdivision of `h` in `g`. `Ok(None)` means none exists.
pub fn find_subdivision(
    h: &Graph,
    g: &Graph,
    config: &SearchConfig,
) -> Result<Option<Embedding>, VerifyError> {
    let budget = config.budget();
    find_subdivision_with(h, g, None, config.parallel, &budget)
}

/// As [`find_subdivision`], trying `hint[x]` first as the image of `x` and
/// preferring routes that keep hinted images of unplaced vertices free.
/// The hint only orders the search; the answer is the same without it.
pub fn find_subdivision_hinted(
    h: &Graph,
    g: &Graph,
    hint: &[VertexId],
    config: &SearchConfig,
) -> Result<Option<Embedding>, VerifyError> {
    let budget = config.budget();
    find_subdivision_with(h, g, Some(hint), config.parallel, &budget)
}

pub(crate) fn find_subdivision_with(
    h: &Graph,
    g: &Graph,
    hint: Option<&[VertexId]>,
    parallel: bool,
    budget: &Budget,
) -> Result<Option<Embedding>, VerifyError> {
    if h.n() == 0 {
        return Ok(Some(Embedding {
            branch_map: Vec::new(),
            edge_paths: Vec::new(),
        }));
    }
    if trivially_absent(h, g) {
        return Ok(None);
    }
    if let Some(hint) = hint {
        if hint.len() != h.n() || hint.iter().any(|&v| v >= g.n()) {
            return Err(VerifyError::InvalidInput(
                "hint must map every pattern vertex into the host".into(),
            ));
        }
    }
    let firsts = Matcher::new(h, g, budget, hint).first_candidates();
    find_first(&firsts, parallel, |&v| {
        let mut m = Matcher::new(h, g, budget, hint);
        let mut found = None;
        m.run_from_first(v, &mut |m: &Matcher<'_>| {
            found = Some(m.embedding());
            Ok(Flow::Stop)
        })?;
        Ok::<_, VerifyError>(found)
    })
}

/// Enumerates every embedding of `h` in `g` up to permutations of twin
/// vertices, folding each into a per-thread accumulator.
///
/// `fold` receives the canonical embedding and the number of embeddings it
/// stands for. Accumulators are merged in first-vertex order.
pub fn fold_subdivisions<A, F>(
    h: &Graph,
    g: &Graph,
    config: &SearchConfig,
    fold: F,
) -> Result<(A, u64), VerifyError>
where
    A: Default + Send + Merge,
    F: Fn(&mut A, &Embedding, u128) + Sync + Send,
{
    let budget = config.budget();
    if h.n() == 0 || trivially_absent(h, g) {
        let mut acc = A::default();
        if h.n() == 0 {
            fold(
                &mut acc,
                &Embedding {
                    branch_map: Vec::new(),
                    edge_paths: Vec::new(),
                },
                1,
            );
        }
        return Ok((acc, 0));
    }
    let firsts = Matcher::new(h, g, &budget, None).first_candidates();
    let parts = map_all(&firsts, config.parallel, |&v| -> Result<A, VerifyError> {
        let mut m = Matcher::new(h, g, &budget, None);
        let mut acc = A::default();
        m.run_from_first(v, &mut |m: &Matcher<'_>| {
            fold(&mut acc, &m.embedding(), m.expansion());
            Ok(Flow::Continue)
        })?;
        Ok(acc)
    });
    let mut total = A::default();
    for part in parts {
        total.merge(part?);
    }
    Ok((total, budget.used()))
}

/// Combining per-thread accumulators.
pub trait Merge {
    fn merge(&mut self, other: Self);
}

/// Plain embedding counter for [`fold_subdivisions`].
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct EmbeddingCount {
    pub canonical: u64,
    pub expanded: u128,
}

impl Merge for EmbeddingCount {
    fn merge(&mut self, other: Self) {
        self.canonical += other.canonical;
        self.expanded = self.expanded.saturating_add(other.expanded);
    }
}

pub fn count_subdivisions(
    h: &Graph,
    g: &Graph,
    config: &SearchConfig,
) -> Result<EmbeddingCount, VerifyError> {
    fold_subdivisions(h, g, config, |acc: &mut EmbeddingCount, _, x| {
        acc.canonical += 1;
        acc.expanded = acc.expanded.saturating_add(x);
    })
    .map(|(c, _)| c)
}
