//! Vertex separators, fans and the set `B_M`, via unit vertex-capacity flow.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId};

/// `X` separates `sides.0` from `sides.1`; the single source is never in `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separator {
    pub vertices: Vec<VertexId>,
    pub sides: (Vec<VertexId>, Vec<VertexId>),
}

impl Separator {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// No path from the source side to the target side avoids `X`.
    pub fn separates(&self, g: &Graph) -> bool {
        let mut blocked = vec![false; g.n()];
        for &x in &self.vertices {
            blocked[x] = true;
        }
        self.sides.0.iter().all(|&a| {
            let seen = g.reachable_from(a, &blocked);
            self.sides.1.iter().all(|&b| !seen[b])
        })
    }
}

/// Three paths from `center` into a target set, disjoint apart from `center`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    pub center: VertexId,
    pub legs: Vec<Vec<VertexId>>,
}

impl Fan {
    pub fn is_valid_in(&self, g: &Graph, targets: &BTreeSet<VertexId>) -> bool {
        let mut seen = BTreeSet::new();
        self.legs.iter().all(|leg| {
            leg.len() >= 2
                && leg[0] == self.center
                && g.is_path(leg)
                && targets.contains(leg.last().unwrap())
                && leg[1..leg.len() - 1].iter().all(|v| !targets.contains(v))
                && leg[1..].iter().all(|&v| seen.insert(v))
        })
    }
}

/// Unit-capacity flow network with every vertex split into in/out copies.
struct SplitNetwork {
    head: Vec<usize>,
    to: Vec<usize>,
    cap: Vec<i32>,
    next: Vec<usize>,
    source: usize,
    sink: usize,
}

const INF: i32 = 1 << 20;
const NONE: usize = usize::MAX;

impl SplitNetwork {
    fn new(g: &Graph, source: VertexId, targets: &[bool]) -> Self {
        let n = g.n();
        let mut net = SplitNetwork {
            head: vec![NONE; 2 * n + 1],
            to: Vec::new(),
            cap: Vec::new(),
            next: Vec::new(),
            source: 2 * source + 1,
            sink: 2 * n,
        };
        for v in g.vertices() {
            net.arc(2 * v, 2 * v + 1, if v == source { INF } else { 1 });
            if targets[v] {
                net.arc(2 * v + 1, net.sink, 1);
                continue;
            }
            for &w in g.neighbors(v) {
                if w != source {
                    net.arc(2 * v + 1, 2 * w, INF);
                }
            }
        }
        net
    }

    fn arc(&mut self, u: usize, v: usize, c: i32) {
        for (a, b, c) in [(u, v, c), (v, u, 0)] {
            self.to.push(b);
            self.cap.push(c);
            self.next.push(self.head[a]);
            self.head[a] = self.to.len() - 1;
        }
    }

    fn augment(&mut self) -> bool {
        let mut via = vec![NONE; self.head.len()];
        let mut seen = vec![false; self.head.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(u) = queue.pop_front() {
            let mut e = self.head[u];
            while e != NONE {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    via[v] = e;
                    if v == self.sink {
                        let mut x = v;
                        while x != self.source {
                            let arc = via[x];
                            self.cap[arc] -= 1;
                            self.cap[arc ^ 1] += 1;
                            x = self.to[arc ^ 1];
                        }
                        return true;
                    }
                    queue.push_back(v);
                }
                e = self.next[e];
            }
        }
        false
    }

    /// Augments until the flow reaches `limit` or no path remains.
    fn max_flow(&mut self, limit: usize) -> usize {
        let mut flow = 0;
        while flow < limit && self.augment() {
            flow += 1;
        }
        flow
    }

    fn residual_reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.head.len()];
        seen[self.source] = true;
        let mut stack = vec![self.source];
        while let Some(u) = stack.pop() {
            let mut e = self.head[u];
            while e != NONE {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
                e = self.next[e];
            }
        }
        seen
    }

    /// Splits the flow into vertex paths, starting at the source vertex.
    fn paths(&self, source: VertexId) -> Vec<Vec<VertexId>> {
        // Flow on forward arc e is the capacity of its reverse arc.
        let mut used = vec![0i32; self.to.len()];
        let mut out = Vec::new();
        loop {
            let mut path = vec![source];
            let mut node = self.source;
            let mut ok = false;
            loop {
                let mut e = self.head[node];
                let mut moved = false;
                while e != NONE {
                    if e.is_multiple_of(2) && self.cap[e ^ 1] - used[e] > 0 {
                        used[e] += 1;
                        node = self.to[e];
                        moved = true;
                        break;
                    }
                    e = self.next[e];
                }
                if !moved {
                    break;
                }
                if node == self.sink {
                    ok = true;
                    break;
                }
                if node.is_multiple_of(2) {
                    path.push(node / 2);
                }
            }
            if !ok {
                return out;
            }
            out.push(path);
        }
    }
}

fn target_mask(g: &Graph, targets: &[VertexId]) -> Vec<bool> {
    let mut mask = vec![false; g.n()];
    for &t in targets {
        mask[t] = true;
    }
    mask
}

/// Maximum number of `a`-`targets` paths that share only `a`.
pub fn max_fan_size(g: &Graph, a: VertexId, targets: &[VertexId]) -> usize {
    assert!(!targets.contains(&a), "source must not be a target");
    SplitNetwork::new(g, a, &target_mask(g, targets)).max_flow(usize::MAX)
}

/// Smallest vertex set `X` (never containing `a`, possibly containing
/// targets) with no `a`-`targets` path in `g - X`, if one of size at most
/// `bound` exists. Among minimum separators, the one closest to `a`.
pub fn min_vertex_separator(
    g: &Graph,
    a: VertexId,
    targets: &[VertexId],
    bound: usize,
) -> Option<Separator> {
    assert!(!targets.contains(&a), "source must not be a target");
    let mut net = SplitNetwork::new(g, a, &target_mask(g, targets));
    let flow = net.max_flow(bound + 1);
    if flow > bound {
        return None;
    }
    let reach = net.residual_reachable();
    let vertices: Vec<VertexId> = g
        .vertices()
        .filter(|&v| v != a && reach[2 * v] && !reach[2 * v + 1])
        .collect();
    debug_assert_eq!(vertices.len(), flow);
    Some(Separator {
        vertices,
        sides: (vec![a], targets.to_vec()),
    })
}

/// Up to `k` legs from `center` into `targets`, disjoint except at the center.
pub fn max_fan(g: &Graph, center: VertexId, targets: &[VertexId], k: usize) -> Vec<Vec<VertexId>> {
    let mut net = SplitNetwork::new(g, center, &target_mask(g, targets));
    net.max_flow(k);
    net.paths(center)
}

/// A 3-fan from `v` to `s`, if one exists.
pub fn three_fan(g: &Graph, v: VertexId, s: &BTreeSet<VertexId>) -> Option<Fan> {
    if s.contains(&v) {
        return None;
    }
    let targets: Vec<VertexId> = s.iter().copied().collect();
    let legs = max_fan(g, v, &targets, 3);
    (legs.len() == 3).then_some(Fan { center: v, legs })
}

/// Vertices sending a 3-fan to `branch_set`. A member of `branch_set` is
/// included when it has a 3-fan to the rest of the set.
pub fn compute_b_m(g: &Graph, branch_set: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    g.vertices()
        .filter(|&v| {
            if branch_set.contains(&v) {
                let mut rest = branch_set.clone();
                rest.remove(&v);
                three_fan(g, v, &rest).is_some()
            } else {
                three_fan(g, v, branch_set).is_some()
            }
        })
        .collect()
}
