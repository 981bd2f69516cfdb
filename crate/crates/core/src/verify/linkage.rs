//! Vertex-disjoint (a-b, c-d) linkages by exhaustive backtracking.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::gadgets::{HeinleinWall, Terminals};
use crate::graph::{Edge, Graph, VertexId};
use crate::search::{find_first, Budget, SearchConfig, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub path_ab: Vec<VertexId>,
    pub path_cd: Vec<VertexId>,
}

impl Linkage {
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .path_ab
            .windows(2)
            .chain(self.path_cd.windows(2))
            .map(|w| Edge::new(w[0], w[1]))
            .collect();
        out.sort_unstable();
        out
    }

    /// Checks both paths and their vertex-disjointness in `g`.
    pub fn is_valid_in(&self, g: &Graph, t: &Terminals) -> bool {
        let ends_ok = |p: &[VertexId], x, y| p.first() == Some(&x) && p.last() == Some(&y);
        g.is_path(&self.path_ab)
            && g.is_path(&self.path_cd)
            && ends_ok(&self.path_ab, t.a, t.b)
            && ends_ok(&self.path_cd, t.c, t.d)
            && self.path_ab.iter().all(|v| !self.path_cd.contains(v))
    }
}

/// Depth-first search over a-b paths in ascending neighbour order.
struct AbSearch<'a> {
    g: &'a Graph,
    t: Terminals,
    budget: &'a Budget,
    on_path: Vec<bool>,
    path: Vec<VertexId>,
    /// Only a-b paths lexicographically greater than this are produced.
    lower_bound: Option<&'a [VertexId]>,
}

impl<'a> AbSearch<'a> {
    fn new(
        g: &'a Graph,
        t: Terminals,
        budget: &'a Budget,
        lower_bound: Option<&'a [VertexId]>,
    ) -> Self {
        AbSearch {
            g,
            t,
            budget,
            on_path: vec![false; g.n()],
            path: Vec::new(),
            lower_bound,
        }
    }

    /// Both a residual c-d route and a route from the path end to b must survive.
    fn viable(&self) -> bool {
        let end = *self.path.last().unwrap();
        let mut blocked = self.on_path.clone();
        blocked[end] = false;
        blocked[self.t.c] = true;
        blocked[self.t.d] = true;
        if !self.g.reachable_from(end, &blocked)[self.t.b] {
            return false;
        }
        self.g.reachable_from(self.t.c, &self.on_path)[self.t.d]
    }

    /// Calls `visit` on every complete a-b path that leaves c and d connected.
    /// `visit` returns `Ok(true)` to stop.
    fn run<F>(&mut self, visit: &mut F) -> Result<bool, VerifyError>
    where
        F: FnMut(&[VertexId], &[bool]) -> Result<bool, VerifyError>,
    {
        self.path.push(self.t.a);
        self.on_path[self.t.a] = true;
        let tight = self.lower_bound.is_some();
        let stop = self.extend(visit, tight)?;
        self.on_path[self.t.a] = false;
        self.path.pop();
        Ok(stop)
    }

    fn extend<F>(&mut self, visit: &mut F, tight: bool) -> Result<bool, VerifyError>
    where
        F: FnMut(&[VertexId], &[bool]) -> Result<bool, VerifyError>,
    {
        self.budget.tick()?;
        let end = *self.path.last().unwrap();
        if end == self.t.b {
            if tight {
                // Equal to the bound: not strictly greater.
                return Ok(false);
            }
            // b itself may have been the last c-d route.
            if !self.g.reachable_from(self.t.c, &self.on_path)[self.t.d] {
                return Ok(false);
            }
            return visit(&self.path, &self.on_path);
        }
        if !self.viable() {
            return Ok(false);
        }
        let depth = self.path.len();
        let floor = match (tight, self.lower_bound) {
            (true, Some(lb)) if depth < lb.len() => Some(lb[depth]),
            (true, Some(_)) => {
                // The bound ended already; every extension is longer, hence greater.
                None
            }
            _ => None,
        };
        for &w in self.g.neighbors(end) {
            if self.on_path[w] || w == self.t.c || w == self.t.d {
                continue;
            }
            if let Some(f) = floor {
                if w < f {
                    continue;
                }
            }
            let still_tight = floor == Some(w);
            self.path.push(w);
            self.on_path[w] = true;
            let stop = self.extend(visit, still_tight)?;
            self.on_path[w] = false;
            self.path.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn bfs_path(g: &Graph, s: VertexId, t: VertexId, blocked: &[bool]) -> Option<Vec<VertexId>> {
    let mut prev = vec![usize::MAX; g.n()];
    prev[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        if v == t {
            let mut path = vec![t];
            let mut x = t;
            while x != s {
                x = prev[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.neighbors(v) {
            if prev[w] == usize::MAX && !blocked[w] {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    None
}

fn check_terminals(g: &Graph, t: &Terminals) -> Result<(), VerifyError> {
    let ends = t.as_array();
    if ends.iter().any(|&v| v >= g.n()) {
        return Err(VerifyError::InvalidInput("terminal out of range".into()));
    }
    if (0..4).any(|i| (i + 1..4).any(|j| ends[i] == ends[j])) {
        return Err(VerifyError::InvalidInput(
            "terminals must be distinct".into(),
        ));
    }
    Ok(())
}

/// Exact linkage search with a node budget.
pub fn find_linkage_budgeted(
    g: &Graph,
    t: Terminals,
    budget: &Budget,
) -> Result<Option<Linkage>, VerifyError> {
    find_linkage_above(g, t, budget, None)
}

fn find_linkage_above(
    g: &Graph,
    t: Terminals,
    budget: &Budget,
    lower_bound: Option<&[VertexId]>,
) -> Result<Option<Linkage>, VerifyError> {
    check_terminals(g, &t)?;
    let mut found = None;
    let mut search = AbSearch::new(g, t, budget, lower_bound);
    search.run(&mut |path, on_path| {
        let cd = bfs_path(g, t.c, t.d, on_path).expect("viability guarantees a c-d route");
        found = Some(Linkage {
            path_ab: path.to_vec(),
            path_cd: cd,
        });
        Ok(true)
    })?;
    Ok(found)
}

/// Returns a linkage if one exists, `None` only if none exists.
///
/// Panics if the four terminals are not distinct vertices of `g`.
pub fn find_linkage(g: &Graph, t: Terminals) -> Option<Linkage> {
    find_linkage_budgeted(g, t, &Budget::unlimited()).expect("unlimited budget and valid terminals")
}

/// Every a-b path (ascending DFS order) that leaves a c-d route.
pub fn ab_paths(
    g: &Graph,
    t: Terminals,
    budget: &Budget,
) -> Result<Vec<Vec<VertexId>>, VerifyError> {
    check_terminals(g, &t)?;
    let mut out = Vec::new();
    AbSearch::new(g, t, budget, None).run(&mut |p, _| {
        out.push(p.to_vec());
        Ok(false)
    })?;
    Ok(out)
}

/// Calls `visit` on every c-d path avoiding `blocked`, stopping when it returns true.
fn for_each_cd_path<F>(
    g: &Graph,
    t: &Terminals,
    blocked: &[bool],
    budget: &Budget,
    visit: &mut F,
) -> Result<bool, VerifyError>
where
    F: FnMut(&[VertexId]) -> Result<bool, VerifyError>,
{
    fn go<F>(
        g: &Graph,
        target: VertexId,
        blocked: &mut Vec<bool>,
        path: &mut Vec<VertexId>,
        budget: &Budget,
        visit: &mut F,
    ) -> Result<bool, VerifyError>
    where
        F: FnMut(&[VertexId]) -> Result<bool, VerifyError>,
    {
        budget.tick()?;
        let end = *path.last().unwrap();
        if end == target {
            return visit(path);
        }
        let mut b = blocked.clone();
        b[end] = false;
        if !g.reachable_from(end, &b)[target] {
            return Ok(false);
        }
        for &w in g.neighbors(end) {
            if blocked[w] {
                continue;
            }
            blocked[w] = true;
            path.push(w);
            let stop = go(g, target, blocked, path, budget, visit)?;
            path.pop();
            blocked[w] = false;
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
    let mut blocked = blocked.to_vec();
    blocked[t.c] = true;
    let mut path = vec![t.c];
    go(g, t.d, &mut blocked, &mut path, budget, visit)
}

/// Outcome of the two-linkage search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoLinkageReport {
    /// Two edge-disjoint linkages, if they exist.
    pub witness: Option<(Linkage, Linkage)>,
    /// Number of first linkages examined.
    pub linkages_examined: u64,
    pub nodes_explored: u64,
}

impl TwoLinkageReport {
    pub fn exists(&self) -> bool {
        self.witness.is_some()
    }
}

/// Decides whether `g` has two edge-disjoint (a-b, c-d) linkages.
///
/// Every linkage `L1` is enumerated; for each, a second linkage is searched
/// in `g - E(L1)` restricted to a-b paths lexicographically greater than the
/// first one (the smaller a-b path of any witness pair is always `L1`'s).
/// Only a completed enumeration yields `witness: None`.
pub fn two_edge_disjoint_linkages(
    g: &Graph,
    t: Terminals,
    config: &SearchConfig,
) -> Result<TwoLinkageReport, VerifyError> {
    check_terminals(g, &t)?;
    let budget = config.budget();
    let firsts = ab_paths(g, t, &budget)?;
    let examined = std::sync::atomic::AtomicU64::new(0);
    let witness = find_first(&firsts, config.parallel, |p1| {
        let mut blocked = vec![false; g.n()];
        for &v in p1 {
            blocked[v] = true;
        }
        let mut found = None;
        for_each_cd_path(g, &t, &blocked, &budget, &mut |q1| {
            examined.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            let l1 = Linkage {
                path_ab: p1.clone(),
                path_cd: q1.to_vec(),
            };
            let rest = g.delete_edges(&l1.edges())?;
            if let Some(l2) = find_linkage_above(&rest, t, &budget, Some(p1))? {
                found = Some((l1, l2));
                return Ok(true);
            }
            Ok(false)
        })?;
        Ok::<_, VerifyError>(found)
    })?;
    Ok(TwoLinkageReport {
        witness,
        linkages_examined: examined.into_inner(),
        nodes_explored: budget.used(),
    })
}

/// Two edge-disjoint linkages never exist in a Heinlein wall; this decides it.
pub fn exists_two_edge_disjoint_linkages(
    w: &HeinleinWall,
    config: &SearchConfig,
) -> Result<TwoLinkageReport, VerifyError> {
    two_edge_disjoint_linkages(&w.graph, w.terminals, config)
}
