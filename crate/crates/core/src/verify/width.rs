//! Exact pathwidth and treewidth by threshold search over vertex subsets,
//! with decompositions that are re-checked independently.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId};
use crate::search::{Budget, SearchConfig, VerifyError};

/// Largest graph the subset searches accept.
pub const MAX_WIDTH_VERTICES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<VertexId>>,
}

impl PathDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    /// Coverage of vertices and edges, plus contiguity of each vertex's bags.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let as_tree = TreeDecomposition {
            bags: self.bags.clone(),
            tree_edges: (1..self.bags.len()).map(|i| (i - 1, i)).collect(),
        };
        as_tree.validate(g)?;
        for v in g.vertices() {
            let hits: Vec<usize> = (0..self.bags.len())
                .filter(|&i| self.bags[i].contains(&v))
                .collect();
            if hits.windows(2).any(|w| w[1] != w[0] + 1) {
                return Err(format!("bags containing {v} are not contiguous"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<Vec<VertexId>>,
    pub tree_edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(1)
            .saturating_sub(1)
    }

    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let k = self.bags.len();
        if g.n() > 0 && k == 0 {
            return Err("no bags".into());
        }
        if k > 0 && self.tree_edges.len() != k - 1 {
            return Err(format!("{} tree edges for {k} bags", self.tree_edges.len()));
        }
        let mut adj = vec![Vec::new(); k];
        for &(x, y) in &self.tree_edges {
            if x >= k || y >= k || x == y {
                return Err(format!("bad tree edge ({x}, {y})"));
            }
            adj[x].push(y);
            adj[y].push(x);
        }
        if k > 0 && connected_part(&adj, &vec![true; k]) != k {
            return Err("decomposition tree is disconnected".into());
        }
        for v in g.vertices() {
            let holds: Vec<bool> = self.bags.iter().map(|b| b.contains(&v)).collect();
            let count = holds.iter().filter(|&&h| h).count();
            if count == 0 {
                return Err(format!("vertex {v} is in no bag"));
            }
            if connected_part(&adj, &holds) != count {
                return Err(format!("bags containing {v} do not form a subtree"));
            }
        }
        for e in g.edges() {
            if !self
                .bags
                .iter()
                .any(|b| b.contains(&e.lo()) && b.contains(&e.hi()))
            {
                return Err(format!("edge {e} is in no bag"));
            }
        }
        Ok(())
    }
}

/// Size of the component (within `allowed`) of the first allowed node.
fn connected_part(adj: &[Vec<usize>], allowed: &[bool]) -> usize {
    let Some(start) = allowed.iter().position(|&a| a) else {
        return 0;
    };
    let mut seen = vec![false; adj.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if allowed[y] && !seen[y] {
                seen[y] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthResult<D> {
    pub width: usize,
    pub ordering: Vec<VertexId>,
    pub decomposition: D,
    pub nodes_explored: u64,
}

fn masks(g: &Graph) -> Result<Vec<u64>, VerifyError> {
    if g.n() > MAX_WIDTH_VERTICES {
        return Err(VerifyError::InvalidInput(format!(
            "exact width search supports at most {MAX_WIDTH_VERTICES} vertices"
        )));
    }
    Ok(g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect())
}

/// Visited-set over subsets: a flat bitmap for small graphs, a hash set otherwise.
enum Seen {
    Dense(Vec<u64>),
    Sparse(HashSet<u64>),
}

impl Seen {
    fn new(n: usize) -> Self {
        if n <= 26 {
            Seen::Dense(vec![0; (1usize << n).div_ceil(64)])
        } else {
            Seen::Sparse(HashSet::new())
        }
    }

    /// Marks `s`; returns false if it was already marked.
    fn insert(&mut self, s: u64) -> bool {
        match self {
            Seen::Dense(bits) => {
                let (w, b) = ((s / 64) as usize, s % 64);
                let fresh = bits[w] >> b & 1 == 0;
                bits[w] |= 1 << b;
                fresh
            }
            Seen::Sparse(set) => set.insert(s),
        }
    }
}

/// Depth-first search for an ordering in which every step's cost stays at
/// most `k`. `cost(prefix, v)` is the cost of placing `v` after `prefix`.
fn ordering_within<F>(
    n: usize,
    k: usize,
    budget: &Budget,
    cost: &F,
) -> Result<Option<Vec<VertexId>>, VerifyError>
where
    F: Fn(u64, VertexId) -> usize,
{
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut seen = Seen::new(n);
    seen.insert(0);
    let mut order = Vec::with_capacity(n);
    // Explicit stack of (set, next candidate to try).
    let mut stack: Vec<(u64, usize)> = vec![(0, 0)];
    while let Some(&mut (set, ref mut next)) = stack.last_mut() {
        if set == full {
            return Ok(Some(order));
        }
        let mut advanced = false;
        while *next < n {
            let v = *next;
            *next += 1;
            if set >> v & 1 == 1 || cost(set, v) > k {
                continue;
            }
            let child = set | 1 << v;
            if !seen.insert(child) {
                continue;
            }
            budget.tick()?;
            order.push(v);
            stack.push((child, 0));
            advanced = true;
            break;
        }
        if !advanced {
            stack.pop();
            order.pop();
        }
    }
    Ok(None)
}

fn boundary(adj: &[u64], set: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if adj[v] & !set != 0 {
            out |= 1 << v;
        }
    }
    out
}

/// Vertices outside `set + v` reachable from `v` through `set`.
fn eliminated_neighbourhood(adj: &[u64], set: u64, v: VertexId) -> u64 {
    let mut inside = 1u64 << v;
    let mut frontier = 1u64 << v;
    let mut outside = 0u64;
    while frontier != 0 {
        let x = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let nb = adj[x];
        outside |= nb & !set & !(1 << v);
        let grow = nb & set & !inside;
        inside |= grow;
        frontier |= grow;
    }
    outside
}

fn bits(mut m: u64) -> Vec<VertexId> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}

/// Exact pathwidth (vertex separation number) with a path decomposition.
pub fn pathwidth_exact(
    g: &Graph,
    config: &SearchConfig,
) -> Result<WidthResult<PathDecomposition>, VerifyError> {
    let adj = masks(g)?;
    let n = g.n();
    let budget = config.budget();
    // Placing v after prefix S creates the bag boundary(S) + v.
    let cost = |set: u64, _v: VertexId| boundary(&adj, set).count_ones() as usize;
    for k in 0..=n {
        if let Some(ordering) = ordering_within(n, k, &budget, &cost)? {
            let mut bags = Vec::with_capacity(n);
            let mut set = 0u64;
            for &v in &ordering {
                let mut bag = bits(boundary(&adj, set));
                bag.push(v);
                bag.sort_unstable();
                bags.push(bag);
                set |= 1 << v;
            }
            let decomposition = PathDecomposition { bags };
            debug_assert!(decomposition.width() <= k);
            return Ok(WidthResult {
                width: k.min(decomposition.width()),
                ordering,
                decomposition,
                nodes_explored: budget.used(),
            });
        }
    }
    unreachable!("every ordering has width below n")
}

/// Exact treewidth by elimination orderings, with a tree decomposition.
pub fn treewidth_exact(
    g: &Graph,
    config: &SearchConfig,
) -> Result<WidthResult<TreeDecomposition>, VerifyError> {
    let adj = masks(g)?;
    let n = g.n();
    let budget = config.budget();
    let cost = |set: u64, v: VertexId| eliminated_neighbourhood(&adj, set, v).count_ones() as usize;
    for k in 0..=n {
        if let Some(ordering) = ordering_within(n, k, &budget, &cost)? {
            let decomposition = elimination_decomposition(&adj, &ordering);
            return Ok(WidthResult {
                width: decomposition.width(),
                ordering,
                decomposition,
                nodes_explored: budget.used(),
            });
        }
    }
    unreachable!("every ordering has width below n")
}

/// Bag of `v` is `v` plus its later neighbours in the filled graph; its
/// parent is the bag of the earliest of those neighbours.
fn elimination_decomposition(adj: &[u64], ordering: &[VertexId]) -> TreeDecomposition {
    let n = ordering.len();
    let mut pos = vec![0; n];
    for (i, &v) in ordering.iter().enumerate() {
        pos[v] = i;
    }
    let mut bags = Vec::with_capacity(n);
    let mut tree_edges = Vec::new();
    let mut set = 0u64;
    for (i, &v) in ordering.iter().enumerate() {
        let later = eliminated_neighbourhood(adj, set, v);
        let mut bag = bits(later);
        if let Some(&p) = bag.iter().min_by_key(|&&w| pos[w]) {
            tree_edges.push((i, pos[p]));
        } else if i + 1 < n {
            tree_edges.push((i, i + 1));
        }
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        set |= 1 << v;
    }
    TreeDecomposition { bags, tree_edges }
}
