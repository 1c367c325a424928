use std::collections::VecDeque;

use crate::graph::{strongly_connected_components, Digraph, Vertex, VertexSet};

/// BFS over `g` from `start`, following arcs forward or backward, moving
/// only through vertices flagged in `pass`. `start` itself is included.
fn reach_through(g: &Digraph, start: Vertex, pass: &[bool], forward: bool) -> Vec<bool> {
    let mut seen = vec![false; g.n()];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        let next = if forward { g.out_neighbors(u) } else { g.in_neighbors(u) };
        for &w in next {
            if !seen[w] && pass[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// `H_{i,j}`: for `i ≠ j`, the vertices of directed paths from `f[i]` to
/// `f[j]` whose inner vertices avoid `f` (endpoints included, empty when no
/// such path exists); for `i = j`, the strongly connected component of
/// `f[i]` in `g - (f ∖ {f[i]})` when it has at least two vertices.
pub fn connectivity_set(g: &Digraph, f: &[Vertex], i: usize, j: usize) -> VertexSet {
    let mut outside_f = vec![true; g.n()];
    for &v in f {
        outside_f[v] = false;
    }
    let (vi, vj) = (f[i], f[j]);
    if i == j {
        let mut keep = outside_f.clone();
        keep[vi] = true;
        let (h, map) = g.induced_by_mask(&keep);
        let scc = strongly_connected_components(&h);
        let comp = &scc.components[scc.component_of[map.new_id(vi).unwrap()]];
        if comp.len() < 2 {
            return VertexSet::new();
        }
        return comp.iter().map(|&v| map.old_id(v)).collect();
    }
    let fwd = reach_through(g, vi, &outside_f, true);
    let bwd = reach_through(g, vj, &outside_f, false);
    let direct = g.has_arc(vi, vj);
    let mut set: VertexSet = (0..g.n()).filter(|&x| outside_f[x] && fwd[x] && bwd[x]).collect();
    if direct || !set.is_empty() {
        set.insert(vi);
        set.insert(vj);
    }
    set
}

/// All non-empty connectivity sets, keyed by their index pair.
pub fn connectivity_sets(g: &Digraph, f: &[Vertex]) -> Vec<((usize, usize), VertexSet)> {
    let mut out = Vec::new();
    for i in 0..f.len() {
        for j in 0..f.len() {
            let h = connectivity_set(g, f, i, j);
            if !h.is_empty() {
                out.push(((i, j), h));
            }
        }
    }
    out
}

/// The set `B` of border vertices between connectivity sets, and the largest
/// contribution of a single item for a single pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchSet {
    pub vertices: VertexSet,
    pub max_item: usize,
    pub sets: usize,
}

fn heads_into(g: &Digraph, from: impl Iterator<Item = Vertex>, into: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new();
    for u in from {
        for &w in g.out_neighbors(u) {
            if into.contains(&w) {
                out.insert(w);
            }
        }
    }
    out
}

/// For every pair `H, H'` of distinct connectivity sets, adds
/// `N⁺(H ∖ H') ∩ H'`, `N⁺(H ∩ H') ∩ (H' ∖ H)` and the two symmetric sets.
pub fn build_branch_set_b(g: &Digraph, f: &[Vertex]) -> BranchSet {
    let sets = connectivity_sets(g, f);
    let mut b = VertexSet::new();
    let mut max_item = 0;
    for (a, (_, h)) in sets.iter().enumerate() {
        for (_, h2) in &sets[a + 1..] {
            for (x, y) in [(h, h2), (h2, h)] {
                let only_x: Vec<Vertex> = x.difference(y).copied().collect();
                let both: Vec<Vertex> = x.intersection(y).copied().collect();
                let only_y: VertexSet = y.difference(x).copied().collect();
                let item1 = heads_into(g, only_x.iter().copied(), y);
                let item2 = heads_into(g, both.iter().copied(), &only_y);
                max_item = max_item.max(item1.len()).max(item2.len());
                b.extend(item1);
                b.extend(item2);
            }
        }
    }
    BranchSet {
        vertices: b,
        max_item,
        sets: sets.len(),
    }
}

/// Arcs from `H ∖ H'` or `H ∩ H'` into `H' ∖ H` whose head is not in
/// `forbidden`, over all ordered pairs of distinct connectivity sets.
pub fn unguarded_border_arcs(g: &Digraph, f: &[Vertex], forbidden: &[bool]) -> Vec<(Vertex, Vertex)> {
    let sets = connectivity_sets(g, f);
    let mut bad = Vec::new();
    for (a, (_, h)) in sets.iter().enumerate() {
        for (b, (_, h2)) in sets.iter().enumerate() {
            if a == b || h == h2 {
                continue;
            }
            for &u in h {
                for &w in g.out_neighbors(u) {
                    if h2.contains(&w) && !h.contains(&w) && !forbidden[w] {
                        bad.push((u, w));
                    }
                }
            }
        }
    }
    bad.sort_unstable();
    bad.dedup();
    bad
}
