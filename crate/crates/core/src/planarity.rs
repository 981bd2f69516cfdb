//! Planarity testing by incremental face embedding (Demoucron, Malgrange and
//! Pertuiset), run separately on every biconnected block.
//!
//! Quadratic in the block size, which is plenty for gadgets of a few hundred
//! vertices.

use std::collections::BTreeSet;

use crate::graph::{Edge, Graph, VertexId};

pub fn is_planar(g: &Graph) -> bool {
    let n = g.n();
    if n >= 3 && g.m() > 3 * n - 6 {
        return false;
    }
    biconnected_blocks(g)
        .iter()
        .all(|block| block_is_planar(block))
}

/// Edge sets of the biconnected components (bridges form singleton blocks).
pub fn biconnected_blocks(g: &Graph) -> Vec<Vec<Edge>> {
    struct State<'a> {
        g: &'a Graph,
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<Edge>,
        blocks: Vec<Vec<Edge>>,
    }

    fn dfs(st: &mut State<'_>, v: VertexId, parent: Option<VertexId>) {
        st.time += 1;
        st.disc[v] = st.time;
        st.low[v] = st.time;
        for i in 0..st.g.neighbors(v).len() {
            let w = st.g.neighbors(v)[i];
            if Some(w) == parent {
                continue;
            }
            if st.disc[w] == 0 {
                st.stack.push(Edge::new(v, w));
                dfs(st, w, Some(v));
                st.low[v] = st.low[v].min(st.low[w]);
                if st.low[w] >= st.disc[v] {
                    let target = Edge::new(v, w);
                    let mut block = Vec::new();
                    while let Some(e) = st.stack.pop() {
                        block.push(e);
                        if e == target {
                            break;
                        }
                    }
                    st.blocks.push(block);
                }
            } else if st.disc[w] < st.disc[v] {
                st.stack.push(Edge::new(v, w));
                st.low[v] = st.low[v].min(st.disc[w]);
            }
        }
    }

    let mut st = State {
        g,
        disc: vec![0; g.n()],
        low: vec![0; g.n()],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
    };
    for v in g.vertices() {
        if st.disc[v] == 0 {
            dfs(&mut st, v, None);
        }
    }
    st.blocks
}

/// A fragment of the block relative to the embedded part: either a single
/// unembedded chord or a component of the unembedded vertices.
struct Fragment {
    attachments: BTreeSet<VertexId>,
    /// A path between two distinct attachments through the fragment.
    path: Vec<VertexId>,
}

fn block_is_planar(block: &[Edge]) -> bool {
    let mut verts: Vec<VertexId> = block.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
    verts.sort_unstable();
    verts.dedup();
    let nb = verts.len();
    if nb <= 4 {
        return true;
    }
    if block.len() > 3 * nb - 6 {
        return false;
    }
    let local = |v: VertexId| verts.binary_search(&v).unwrap();
    let bg = Graph::with_vertices(
        nb,
        block
            .iter()
            .map(|e| Edge::new(local(e.lo()), local(e.hi()))),
    )
    .expect("block is simple");

    let cycle = find_cycle(&bg);
    let mut embedded_v = vec![false; nb];
    let mut embedded_e: BTreeSet<Edge> = BTreeSet::new();
    for (i, &v) in cycle.iter().enumerate() {
        embedded_v[v] = true;
        embedded_e.insert(Edge::new(v, cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<VertexId>> = vec![cycle.clone(), cycle];

    while embedded_e.len() < bg.m() {
        let fragments = fragments(&bg, &embedded_v, &embedded_e);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.expect("at least one fragment remains");
        let path = &fragments[fi].path;
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, path);
        faces.push(f1);
        faces.push(f2);
        for w in path.windows(2) {
            embedded_e.insert(Edge::new(w[0], w[1]));
        }
        for &v in path {
            embedded_v[v] = true;
        }
    }
    true
}

fn find_cycle(g: &Graph) -> Vec<VertexId> {
    // DFS until a back edge closes a cycle; blocks with >= 3 vertices have one.
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    let mut stack = vec![(0usize, 0usize)];
    depth[0] = 0;
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx < g.neighbors(v).len() {
            let w = g.neighbors(v)[*idx];
            *idx += 1;
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                stack.push((w, 0));
            } else if w != parent[v] && depth[w] < depth[v] {
                let mut cycle = vec![v];
                let mut x = v;
                while x != w {
                    x = parent[x];
                    cycle.push(x);
                }
                return cycle;
            }
        } else {
            stack.pop();
        }
    }
    unreachable!("a biconnected block with at least three vertices contains a cycle")
}

fn fragments(g: &Graph, embedded_v: &[bool], embedded_e: &BTreeSet<Edge>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for &e in g.edges() {
        let (u, v) = e.endpoints();
        if embedded_v[u] && embedded_v[v] && !embedded_e.contains(&e) {
            out.push(Fragment {
                attachments: [u, v].into_iter().collect(),
                path: vec![u, v],
            });
        }
    }
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    for s in 0..n {
        if embedded_v[s] || comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![s];
        comp[s] = id;
        let mut i = 0;
        let mut attachments = BTreeSet::new();
        while i < members.len() {
            let v = members[i];
            i += 1;
            for &w in g.neighbors(v) {
                if embedded_v[w] {
                    attachments.insert(w);
                } else if comp[w] == usize::MAX {
                    comp[w] = id;
                    members.push(w);
                }
            }
        }
        let path = fragment_path(g, embedded_v, &comp, id, &members, &attachments);
        out.push(Fragment { attachments, path });
    }
    out
}

/// Path attachment - component vertices - different attachment.
fn fragment_path(
    g: &Graph,
    embedded_v: &[bool],
    comp: &[usize],
    id: usize,
    members: &[VertexId],
    attachments: &BTreeSet<VertexId>,
) -> Vec<VertexId> {
    debug_assert!(attachments.len() >= 2, "blocks are 2-connected");
    let start_att = *attachments.iter().next().unwrap();
    let start = *members
        .iter()
        .find(|&&v| g.neighbors(v).contains(&start_att))
        .expect("attachment has a neighbour in the fragment");
    let n = g.n();
    let mut prev = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([start]);
    prev[start] = start;
    while let Some(v) = queue.pop_front() {
        if let Some(&end_att) = g
            .neighbors(v)
            .iter()
            .find(|&&w| embedded_v[w] && w != start_att)
        {
            let mut path = vec![end_att, v];
            let mut x = v;
            while x != start {
                x = prev[x];
                path.push(x);
            }
            path.push(start_att);
            path.reverse();
            return path;
        }
        for &w in g.neighbors(v) {
            if !embedded_v[w] && comp[w] == id && prev[w] == usize::MAX {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    unreachable!("fragment of a 2-connected block has two attachments")
}

/// Splits a face (cyclic vertex sequence) by a path whose two ends lie on it.
fn split_face(face: &[VertexId], path: &[VertexId]) -> (Vec<VertexId>, Vec<VertexId>) {
    let x = path[0];
    let y = *path.last().unwrap();
    let k = face.len();
    let ix = face.iter().position(|&v| v == x).unwrap();
    let iy = face.iter().position(|&v| v == y).unwrap();
    let interior = &path[1..path.len() - 1];

    // x -> ... -> y along the face, then back to x through the path.
    let mut f1 = Vec::new();
    let mut i = ix;
    loop {
        f1.push(face[i]);
        if i == iy {
            break;
        }
        i = (i + 1) % k;
    }
    f1.extend(interior.iter().rev());

    let mut f2 = Vec::new();
    let mut i = iy;
    loop {
        f2.push(face[i]);
        if i == ix {
            break;
        }
        i = (i + 1) % k;
    }
    f2.extend(interior.iter());
    (f1, f2)
}
