//! Wall geometry: rows, columns, bricks, the outercycle, and the d-apart relation.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, VertexId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WallError {
    #[error("vertex sequence {0:?} is not a path in the wall")]
    NotAPath(Vec<VertexId>),
    #[error("brick {0} compared with itself")]
    SameBrick(usize),
    #[error("brick index {0} out of range")]
    UnknownBrick(usize),
    #[error("vertex {0} is not in the wall")]
    UnknownVertex(VertexId),
    #[error("no pair of edges at proper branch vertices is {0}-apart")]
    NoSuchPair(usize),
    #[error("walls with more than 64 rows or columns are not supported")]
    TooLarge,
}

/// An edge given by its endpoints, in a chosen orientation.
pub type VertexPair = (VertexId, VertexId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WallKind {
    Elementary,
    Prime,
}

/// A wall together with its geometry index. Rows, columns, bricks and the
/// outercycle are produced by the generator, never re-detected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub graph: Graph,
    pub kind: WallKind,
    /// Number of brick rows and brick columns (`m x n`).
    pub size: (usize, usize),
    pub rows: Vec<Vec<VertexId>>,
    pub columns: Vec<Vec<VertexId>>,
    /// Each brick as a cyclic vertex sequence.
    pub bricks: Vec<Vec<VertexId>>,
    pub outercycle: Vec<VertexId>,
    row_of: Vec<usize>,
    col_of: Vec<Option<usize>>,
}

impl Wall {
    pub(crate) fn new(
        graph: Graph,
        kind: WallKind,
        size: (usize, usize),
        rows: Vec<Vec<VertexId>>,
        columns: Vec<Vec<VertexId>>,
        bricks: Vec<Vec<VertexId>>,
        outercycle: Vec<VertexId>,
    ) -> Self {
        let n = graph.n();
        let mut row_of = vec![usize::MAX; n];
        for (i, row) in rows.iter().enumerate() {
            for &v in row {
                debug_assert_eq!(row_of[v], usize::MAX, "vertex {v} in two rows");
                row_of[v] = i;
            }
        }
        debug_assert!(
            row_of.iter().all(|&r| r != usize::MAX),
            "vertex without a row"
        );
        let mut col_of = vec![None; n];
        for (k, col) in columns.iter().enumerate() {
            for &v in col {
                debug_assert!(col_of[v].is_none(), "vertex {v} in two columns");
                col_of[v] = Some(k);
            }
        }
        Wall {
            graph,
            kind,
            size,
            rows,
            columns,
            bricks,
            outercycle,
            row_of,
            col_of,
        }
    }

    pub fn row_of(&self, v: VertexId) -> usize {
        self.row_of[v]
    }

    pub fn col_of(&self, v: VertexId) -> Option<usize> {
        self.col_of[v]
    }

    /// Degree-3 vertices of the wall.
    pub fn proper_branch_vertices(&self) -> Vec<VertexId> {
        self.graph
            .vertices()
            .filter(|&v| self.graph.degree(v) == 3)
            .collect()
    }

    pub fn on_outercycle(&self, v: VertexId) -> bool {
        self.outercycle.contains(&v)
    }

    fn check_path(&self, p: &[VertexId]) -> Result<(), WallError> {
        if self.graph.is_path(p) {
            Ok(())
        } else {
            Err(WallError::NotAPath(p.to_vec()))
        }
    }

    pub fn rows_met(&self, p: &[VertexId]) -> Result<usize, WallError> {
        self.check_path(p)?;
        Ok(mask_rows(p.iter().map(|&v| self.row_of[v])).count_ones() as usize)
    }

    pub fn cols_met(&self, p: &[VertexId]) -> Result<usize, WallError> {
        self.check_path(p)?;
        Ok(mask_rows(p.iter().filter_map(|&v| self.col_of[v])).count_ones() as usize)
    }

    fn grid_index(&self) -> Result<GridIndex<'_>, WallError> {
        if self.rows.len() > 64 || self.columns.len() > 64 {
            return Err(WallError::TooLarge);
        }
        Ok(GridIndex {
            graph: &self.graph,
            row_of: self.row_of.iter().map(|&r| Some(r)).collect(),
            col_of: self.col_of.clone(),
        })
    }

    fn outer_mask(&self) -> Vec<bool> {
        let mut on = vec![false; self.graph.n()];
        for &v in &self.outercycle {
            on[v] = true;
        }
        on
    }

    /// Smallest `max(rows met, columns met)` over all paths from `u` to the
    /// outercycle, with a witness path.
    pub fn outer_cost(&self, u: VertexId) -> Result<(usize, Vec<VertexId>), WallError> {
        if u >= self.graph.n() {
            return Err(WallError::UnknownVertex(u));
        }
        let idx = self.grid_index()?;
        Ok(idx.min_cost(u, &self.outer_mask()))
    }

    /// Smallest `max(rows met, columns met)` over all `u`-`v` paths, with a witness.
    pub fn pair_cost(&self, u: VertexId, v: VertexId) -> Result<(usize, Vec<VertexId>), WallError> {
        for x in [u, v] {
            if x >= self.graph.n() {
                return Err(WallError::UnknownVertex(x));
            }
        }
        let idx = self.grid_index()?;
        let mut target = vec![false; self.graph.n()];
        target[v] = true;
        Ok(idx.min_cost(u, &target))
    }

    /// Largest `d` such that `u` and `v` are d-apart, i.e. every `u`-`v`,
    /// `u`-C and `v`-C path meets at least `d + 1` rows or `d + 1` columns.
    ///
    /// Trivial paths count, so a vertex on the outercycle has apartness 0 to
    /// everything. For `u == v` the trivial `u`-`u` path gives 0 as well.
    pub fn apartness(&self, u: VertexId, v: VertexId) -> Result<usize, WallError> {
        Ok(self.apartness_with_witness(u, v)?.0)
    }

    /// Apartness together with a path that meets only `apartness + 1` rows
    /// and columns (and therefore shows `apartness + 1` is not achieved).
    pub fn apartness_with_witness(
        &self,
        u: VertexId,
        v: VertexId,
    ) -> Result<(usize, Vec<VertexId>), WallError> {
        let (cu, pu) = self.outer_cost(u)?;
        let (cv, pv) = self.outer_cost(v)?;
        let (cuv, puv) = self.pair_cost(u, v)?;
        let (cost, witness) = [(cuv, puv), (cu, pu), (cv, pv)]
            .into_iter()
            .min_by_key(|(c, _)| *c)
            .unwrap();
        Ok((cost - 1, witness))
    }

    /// Apartness measured along paths of a host graph containing the wall.
    /// `embed[w]` is the host vertex of wall vertex `w`; host vertices outside
    /// the wall meet no row or column.
    pub fn apartness_in_host(
        &self,
        host: &Graph,
        embed: &[VertexId],
        u: VertexId,
        v: VertexId,
    ) -> Result<usize, WallError> {
        if self.rows.len() > 64 || self.columns.len() > 64 {
            return Err(WallError::TooLarge);
        }
        let mut row_of = vec![None; host.n()];
        let mut col_of = vec![None; host.n()];
        for (w, &h) in embed.iter().enumerate() {
            row_of[h] = Some(self.row_of[w]);
            col_of[h] = self.col_of[w];
        }
        let idx = GridIndex {
            graph: host,
            row_of,
            col_of,
        };
        let mut outer = vec![false; host.n()];
        for &w in &self.outercycle {
            outer[embed[w]] = true;
        }
        let (hu, hv) = (embed[u], embed[v]);
        let mut tv = vec![false; host.n()];
        tv[hv] = true;
        let cost = idx
            .min_cost(hu, &outer)
            .0
            .min(idx.min_cost(hv, &outer).0)
            .min(idx.min_cost(hu, &tv).0);
        Ok(cost - 1)
    }

    /// Two bricks are d-apart if every vertex pair across them is d-apart.
    pub fn bricks_apart(&self, b1: usize, b2: usize, d: usize) -> Result<bool, WallError> {
        for b in [b1, b2] {
            if b >= self.bricks.len() {
                return Err(WallError::UnknownBrick(b));
            }
        }
        if b1 == b2 {
            return Err(WallError::SameBrick(b1));
        }
        for &x in &self.bricks[b1] {
            for &y in &self.bricks[b2] {
                if self.apartness(x, y)? < d {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Index of the brick containing `v`, if any.
    pub fn bricks_containing(&self, v: VertexId) -> Vec<usize> {
        (0..self.bricks.len())
            .filter(|&b| self.bricks[b].contains(&v))
            .collect()
    }

    /// First pair of disjoint edges `(a, b)`, `(c, d)` with `a` and `c` proper
    /// branch vertices such that all four cross pairs are `d`-apart.
    ///
    /// Order: `a`, then `c`, then `b`, then `d`, all ascending.
    pub fn select_far_edge_pair(&self, d: usize) -> Result<(VertexPair, VertexPair), WallError> {
        let branch = self.proper_branch_vertices();
        // Every endpoint needs outercycle cost >= d + 1.
        let mut outer_ok = vec![false; self.graph.n()];
        for v in self.graph.vertices() {
            outer_ok[v] = self.outer_cost(v)?.0 > d;
        }
        let mut memo: HashMap<(VertexId, VertexId), usize> = HashMap::new();
        let mut pair_cost = |x: VertexId, y: VertexId| -> Result<usize, WallError> {
            let key = (x.min(y), x.max(y));
            if let Some(&c) = memo.get(&key) {
                return Ok(c);
            }
            let c = self.pair_cost(key.0, key.1)?.0;
            memo.insert(key, c);
            Ok(c)
        };
        for &a in branch.iter().filter(|&&a| outer_ok[a]) {
            for &c in branch.iter().filter(|&&c| outer_ok[c] && c != a) {
                for &b in self.graph.neighbors(a).iter().filter(|&&b| outer_ok[b]) {
                    for &dd in self.graph.neighbors(c).iter().filter(|&&x| outer_ok[x]) {
                        let ends = [a, b, c, dd];
                        if (0..4).any(|i| (i + 1..4).any(|j| ends[i] == ends[j])) {
                            continue;
                        }
                        let mut ok = true;
                        for (x, y) in [(a, c), (a, dd), (b, c), (b, dd)] {
                            if pair_cost(x, y)? <= d {
                                ok = false;
                                break;
                            }
                        }
                        if ok {
                            return Ok(((a, b), (c, dd)));
                        }
                    }
                }
            }
        }
        Err(WallError::NoSuchPair(d))
    }

    /// All edges incident with a proper branch vertex.
    pub fn branch_edges(&self) -> Vec<Edge> {
        self.graph
            .edges()
            .iter()
            .copied()
            .filter(|e| self.graph.degree(e.lo()) == 3 || self.graph.degree(e.hi()) == 3)
            .collect()
    }
}

fn mask_rows<I: IntoIterator<Item = usize>>(it: I) -> u64 {
    it.into_iter().fold(0u64, |m, r| m | (1u64 << r))
}

/// Row/column lookup over some graph; used for both in-wall and host-graph
/// apartness.
struct GridIndex<'a> {
    graph: &'a Graph,
    row_of: Vec<Option<usize>>,
    col_of: Vec<Option<usize>>,
}

impl GridIndex<'_> {
    fn bits(&self, v: VertexId) -> (u64, u64) {
        (
            self.row_of[v].map_or(0, |r| 1u64 << r),
            self.col_of[v].map_or(0, |c| 1u64 << c),
        )
    }

    /// Minimum over walks from `source` into `target` of the larger of the
    /// number of rows and columns met. Walks suffice: erasing loops only
    /// shrinks both sets.
    fn min_cost(&self, source: VertexId, target: &[bool]) -> (usize, Vec<VertexId>) {
        let mut cap: u32 = 1;
        loop {
            if let Some(path) = self.reach_within(source, target, cap) {
                return (cap as usize, path);
            }
            cap += 1;
            assert!(cap <= 65, "target unreachable from {source}");
        }
    }

    /// Breadth-first search over (vertex, rows used, columns used) with both
    /// set sizes capped at `cap`. Returns a loop-erased witness path.
    fn reach_within(&self, source: VertexId, target: &[bool], cap: u32) -> Option<Vec<VertexId>> {
        type State = (VertexId, u64, u64);
        let (r0, c0) = self.bits(source);
        let start: State = (source, r0, c0);
        let mut prev: HashMap<State, State> = HashMap::new();
        prev.insert(start, start);
        let mut queue = VecDeque::from([start]);
        while let Some(state) = queue.pop_front() {
            let (v, rows, cols) = state;
            if target[v] {
                let mut walk = vec![v];
                let mut s = state;
                while s != start {
                    s = prev[&s];
                    walk.push(s.0);
                }
                walk.reverse();
                return Some(loop_erase(&walk));
            }
            for &w in self.graph.neighbors(v) {
                let (rb, cb) = self.bits(w);
                let next = (w, rows | rb, cols | cb);
                if next.1.count_ones() > cap || next.2.count_ones() > cap {
                    continue;
                }
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(next) {
                    e.insert(state);
                    queue.push_back(next);
                }
            }
        }
        None
    }
}

fn loop_erase(walk: &[VertexId]) -> Vec<VertexId> {
    let mut path: Vec<VertexId> = Vec::with_capacity(walk.len());
    for &v in walk {
        if let Some(pos) = path.iter().position(|&x| x == v) {
            path.truncate(pos + 1);
        } else {
            path.push(v);
        }
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_erasure() {
        assert_eq!(loop_erase(&[1, 2, 3, 2, 4]), vec![1, 2, 4]);
        assert_eq!(loop_erase(&[1, 2, 1, 3]), vec![1, 3]);
    }
}
