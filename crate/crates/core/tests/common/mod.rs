//! Brute-force reference implementations. Deliberately naive: they share no
//! code with the library beyond the graph type.
#![allow(dead_code)]

use std::collections::BTreeSet;

use eposa_core::gadgets::Terminals;
use eposa_core::wall::Wall;
use eposa_core::{heinlein_wall, wall_prime, Edge, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn gnp(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge::new(u, v));
            }
        }
    }
    Graph::with_vertices(n, edges).unwrap()
}

/// Deterministic random graphs with `lo..=hi` vertices and varied density.
pub fn random_graphs(seed: u64, count: usize, lo: usize, hi: usize) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(lo..=hi);
            let p = rng.gen_range(0.15..0.7);
            gnp(n, p, &mut rng)
        })
        .collect()
}

/// Every gadget of the crate with at most `max_n` vertices.
pub fn small_gadgets(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for r in 1..=6 {
        let w = heinlein_wall(r).unwrap();
        if w.graph.n() <= max_n {
            out.push(w.graph);
        }
    }
    for m in 1..=6 {
        for n in 1..=6 {
            if let Ok(w) = eposa_core::elementary_wall(m, n) {
                if w.graph.n() <= max_n {
                    out.push(w.graph);
                }
            }
            if let Ok(w) = wall_prime(m, n) {
                if w.graph.n() <= max_n {
                    out.push(w.graph);
                }
            }
        }
    }
    out
}

/// All simple paths from `s` to `t` avoiding `blocked`.
pub fn all_paths(g: &Graph, s: usize, t: usize, blocked: &[bool]) -> Vec<Vec<usize>> {
    fn go(
        g: &Graph,
        t: usize,
        blocked: &[bool],
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if v == t {
            out.push(path.clone());
            return;
        }
        for &w in g.neighbors(v) {
            if !seen[w] && !blocked[w] {
                seen[w] = true;
                path.push(w);
                go(g, t, blocked, seen, path, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut out = Vec::new();
    if blocked[s] {
        return out;
    }
    let mut seen = vec![false; g.n()];
    seen[s] = true;
    go(g, t, blocked, &mut seen, &mut vec![s], &mut out);
    out
}

/// All (a-b path, c-d path) pairs that are vertex-disjoint.
pub fn all_linkages(g: &Graph, t: Terminals) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut none = vec![false; g.n()];
    none[t.c] = true;
    none[t.d] = true;
    let mut out = Vec::new();
    for p in all_paths(g, t.a, t.b, &none) {
        let mut blocked = vec![false; g.n()];
        for &v in &p {
            blocked[v] = true;
        }
        for q in all_paths(g, t.c, t.d, &blocked) {
            out.push((p.clone(), q));
        }
    }
    out
}

pub fn has_linkage(g: &Graph, t: Terminals) -> bool {
    !all_linkages(g, t).is_empty()
}

pub fn path_edges(p: &[usize]) -> BTreeSet<Edge> {
    p.windows(2).map(|w| Edge::new(w[0], w[1])).collect()
}

/// Two edge-disjoint linkages by checking every pair.
pub fn has_two_edge_disjoint_linkages(g: &Graph, t: Terminals) -> bool {
    let ls: Vec<BTreeSet<Edge>> = all_linkages(g, t)
        .into_iter()
        .map(|(p, q)| path_edges(&p).union(&path_edges(&q)).copied().collect())
        .collect();
    (0..ls.len()).any(|i| (i + 1..ls.len()).any(|j| ls[i].is_disjoint(&ls[j])))
}

/// Smallest `X` (not containing `a`) meeting every `a`-`targets` path, by
/// trying all subsets in increasing size.
pub fn brute_min_separator(g: &Graph, a: usize, targets: &[usize]) -> usize {
    let others: Vec<usize> = g.vertices().filter(|&v| v != a).collect();
    for k in 0..=others.len() {
        let mut found = false;
        for_each_subset(&others, k, &mut |x| {
            let mut blocked = vec![false; g.n()];
            for &v in x {
                blocked[v] = true;
            }
            let seen = g.reachable_from(a, &blocked);
            if targets.iter().all(|&t| !seen[t]) {
                found = true;
            }
            found
        });
        if found {
            return k;
        }
    }
    unreachable!("removing everything but a separates")
}

pub fn for_each_subset<F: FnMut(&[usize]) -> bool>(items: &[usize], k: usize, f: &mut F) {
    fn go<F: FnMut(&[usize]) -> bool>(
        items: &[usize],
        k: usize,
        start: usize,
        cur: &mut Vec<usize>,
        f: &mut F,
    ) -> bool {
        if cur.len() == k {
            return f(cur);
        }
        for i in start..items.len() {
            cur.push(items[i]);
            if go(items, k, i + 1, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(items, k, 0, &mut Vec::new(), f);
}

/// Largest family of `a`-`targets` paths pairwise disjoint except at `a`,
/// by exhaustive set packing over all candidate paths.
pub fn brute_max_fan(g: &Graph, a: usize, targets: &[usize]) -> usize {
    let is_target: Vec<bool> = g.vertices().map(|v| targets.contains(&v)).collect();
    // Paths stop at the first target they reach.
    let mut paths: Vec<Vec<usize>> = Vec::new();
    fn go(
        g: &Graph,
        is_target: &[bool],
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let v = *path.last().unwrap();
        if path.len() > 1 && is_target[v] {
            out.push(path[1..].to_vec());
            return;
        }
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                path.push(w);
                go(g, is_target, seen, path, out);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut seen = vec![false; g.n()];
    seen[a] = true;
    go(g, &is_target, &mut seen, &mut vec![a], &mut paths);
    fn pack(paths: &[Vec<usize>], i: usize, used: &mut Vec<bool>) -> usize {
        if i == paths.len() {
            return 0;
        }
        let mut best = pack(paths, i + 1, used);
        if paths[i].iter().all(|&v| !used[v]) {
            for &v in &paths[i] {
                used[v] = true;
            }
            best = best.max(1 + pack(paths, i + 1, used));
            for &v in &paths[i] {
                used[v] = false;
            }
        }
        best
    }
    pack(&paths, 0, &mut vec![false; g.n()])
}

/// Rows and columns met by a vertex set, read straight off the wall's lists.
fn cost_of(wall: &Wall, path: &[usize]) -> usize {
    let rows = wall
        .rows
        .iter()
        .filter(|r| r.iter().any(|v| path.contains(v)))
        .count();
    let cols = wall
        .columns
        .iter()
        .filter(|c| c.iter().any(|v| path.contains(v)))
        .count();
    rows.max(cols)
}

/// Minimum cost over simple paths from `u` into `target`, branch and bound.
fn min_simple_path_cost(wall: &Wall, u: usize, target: &[bool]) -> usize {
    fn go(
        wall: &Wall,
        target: &[bool],
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        best: &mut usize,
    ) {
        let c = cost_of(wall, path);
        if c >= *best {
            return;
        }
        if target[*path.last().unwrap()] {
            *best = c;
            return;
        }
        let v = *path.last().unwrap();
        for &w in wall.graph.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                path.push(w);
                go(wall, target, seen, path, best);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut best = usize::MAX;
    let mut seen = vec![false; wall.graph.n()];
    seen[u] = true;
    go(wall, target, &mut seen, &mut vec![u], &mut best);
    best
}

/// The largest `d` such that `u` and `v` are `d`-apart, from simple paths only.
pub fn brute_apartness(wall: &Wall, u: usize, v: usize) -> usize {
    let n = wall.graph.n();
    let mut outer = vec![false; n];
    for &x in &wall.outercycle {
        outer[x] = true;
    }
    let mut just_v = vec![false; n];
    just_v[v] = true;
    let worst = min_simple_path_cost(wall, u, &just_v)
        .min(min_simple_path_cost(wall, u, &outer))
        .min(min_simple_path_cost(wall, v, &outer));
    worst - 1
}

/// Pathwidth as the vertex separation number over all orderings.
pub fn brute_pathwidth(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut best = usize::MAX;
    permutations(n, &mut |order| {
        let mut placed = vec![false; n];
        let mut width = 0;
        for &v in order {
            placed[v] = true;
            let boundary = (0..n)
                .filter(|&x| placed[x] && g.neighbors(x).iter().any(|&y| !placed[y]))
                .count();
            width = width.max(boundary);
        }
        best = best.min(width);
    });
    best
}

/// Treewidth as the minimum over elimination orderings of the largest
/// eliminated-neighbourhood, computed by literally building fill-in.
pub fn brute_treewidth(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    let mut best = usize::MAX;
    permutations(n, &mut |order| {
        let mut adj: Vec<BTreeSet<usize>> = (0..n)
            .map(|v| g.neighbors(v).iter().copied().collect())
            .collect();
        let mut gone = vec![false; n];
        let mut width = 0;
        for &v in order {
            let nb: Vec<usize> = adj[v].iter().copied().filter(|&w| !gone[w]).collect();
            width = width.max(nb.len());
            for &x in &nb {
                for &y in &nb {
                    if x != y {
                        adj[x].insert(y);
                    }
                }
            }
            gone[v] = true;
        }
        best = best.min(width);
    });
    best
}

pub fn permutations<F: FnMut(&[usize])>(n: usize, f: &mut F) {
    fn go<F: FnMut(&[usize])>(k: usize, p: &mut Vec<usize>, f: &mut F) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            go(k + 1, p, f);
            p.swap(k, i);
        }
    }
    go(0, &mut (0..n).collect(), f);
}

/// Number of subdivisions of `h` in `g` (every branch map and every path
/// choice counted separately), by naive backtracking.
pub fn brute_count_subdivisions(h: &Graph, g: &Graph) -> u128 {
    fn place(h: &Graph, g: &Graph, x: usize, map: &mut Vec<usize>, used: &mut Vec<bool>) -> u128 {
        if x == h.n() {
            return route(h, g, 0, map, used);
        }
        let mut total = 0;
        for v in g.vertices() {
            if !used[v] {
                used[v] = true;
                map.push(v);
                total += place(h, g, x + 1, map, used);
                map.pop();
                used[v] = false;
            }
        }
        total
    }
    fn route(h: &Graph, g: &Graph, i: usize, map: &[usize], used: &mut Vec<bool>) -> u128 {
        if i == h.m() {
            return 1;
        }
        let e = h.edges()[i];
        let (s, t) = (map[e.lo()], map[e.hi()]);
        let mut blocked = used.clone();
        blocked[s] = false;
        blocked[t] = false;
        let mut total = 0;
        for p in all_paths(g, s, t, &blocked) {
            // Only interiors must be unused; the ends are branch vertices.
            for &v in &p[1..p.len() - 1] {
                used[v] = true;
            }
            total += route(h, g, i + 1, map, used);
            for &v in &p[1..p.len() - 1] {
                used[v] = false;
            }
        }
        total
    }
    place(h, g, 0, &mut Vec::new(), &mut vec![false; g.n()])
}
