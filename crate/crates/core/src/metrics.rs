//! Exact, desk-scale computation of the structural parameters: minimum
//! directed feedback vertex set, K-width, longest path, and the
//! "DAG with a Hamiltonian path" test. All of these are exponential in the
//! worst case and take explicit caps.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::{strongly_connected_components, Digraph, Vertex, VertexSet};

pub const DFVS_SOFT_CAP: usize = 8;
pub const DEFAULT_KWIDTH_CAP: usize = 64;
pub const DEFAULT_PATH_CAP: usize = 32;

/// A count that is either exact or known to exceed the cap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capped {
    Exact(usize),
    Exceeds(usize),
}

impl Capped {
    pub fn exact(self) -> Option<usize> {
        match self {
            Capped::Exact(v) => Some(v),
            Capped::Exceeds(_) => None,
        }
    }
}

impl fmt::Display for Capped {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capped::Exact(v) => write!(f, "{v}"),
            Capped::Exceeds(cap) => write!(f, ">{cap}"),
        }
    }
}

impl Serialize for Capped {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Capped::Exact(v) => s.serialize_u64(*v as u64),
            Capped::Exceeds(_) => s.collect_str(self),
        }
    }
}

impl<'de> Deserialize<'de> for Capped {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(usize),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(v) => Ok(Capped::Exact(v)),
            Raw::S(s) => s
                .strip_prefix('>')
                .and_then(|c| c.parse().ok())
                .map(Capped::Exceeds)
                .ok_or_else(|| serde::de::Error::custom(format!("bad capped value `{s}`"))),
        }
    }
}

/// Shortest cycle of `g` avoiding `removed`, by BFS from every vertex.
fn shortest_cycle(g: &Digraph, removed: &[bool]) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut best: Option<Vec<Vertex>> = None;
    let mut parent = vec![usize::MAX; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        if removed[s] {
            continue;
        }
        dist.fill(usize::MAX);
        dist[s] = 0;
        queue.clear();
        queue.push_back(s);
        'bfs: while let Some(u) = queue.pop_front() {
            if best.as_ref().is_some_and(|b| dist[u] + 1 >= b.len()) {
                break;
            }
            for &w in g.out_neighbors(u) {
                if removed[w] {
                    continue;
                }
                if w == s {
                    let mut cycle = vec![u];
                    let mut x = u;
                    while x != s {
                        x = parent[x];
                        cycle.push(x);
                    }
                    cycle.reverse();
                    best = Some(cycle);
                    break 'bfs;
                }
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if best.as_ref().is_some_and(|b| b.len() == 2) {
            break;
        }
    }
    best
}

fn dfvs_search(g: &Digraph, removed: &mut Vec<bool>, budget: usize, chosen: &mut Vec<Vertex>) -> bool {
    let Some(cycle) = shortest_cycle(g, removed) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for v in cycle {
        removed[v] = true;
        chosen.push(v);
        if dfvs_search(g, removed, budget - 1, chosen) {
            return true;
        }
        chosen.pop();
        removed[v] = false;
    }
    false
}

/// A minimum directed feedback vertex set of size at most `limit`, or `None`
/// when every feedback set is larger. Iterative deepening, branching on the
/// vertices of a shortest cycle.
pub fn min_dfvs(g: &Digraph, limit: usize) -> Option<Vec<Vertex>> {
    if limit > DFVS_SOFT_CAP {
        log::warn!("min_dfvs limit {limit} is above the soft cap {DFVS_SOFT_CAP}; this may be slow");
    }
    // vertices outside non-trivial SCCs are on no cycle
    let scc = strongly_connected_components(g);
    let mut base = vec![true; g.n()];
    for comp in scc.components.iter().filter(|c| c.len() >= 2) {
        for &v in comp {
            base[v] = false;
        }
    }
    for size in 0..=limit {
        let mut removed = base.clone();
        let mut chosen = Vec::new();
        if dfvs_search(g, &mut removed, size, &mut chosen) {
            chosen.sort_unstable();
            return Some(chosen);
        }
    }
    None
}

/// True when `g - set` has no directed cycle.
pub fn is_dfvs(g: &Digraph, set: &[Vertex]) -> bool {
    let mut removed = vec![false; g.n()];
    for &v in set {
        removed[v] = true;
    }
    shortest_cycle(g, &removed).is_none()
}

/// Maximum, over ordered pairs `s ≠ t`, of the number of simple directed
/// `st`-paths. Enumeration stops as soon as some pair exceeds `cap`.
pub fn k_width(g: &Digraph, cap: usize) -> Capped {
    let n = g.n();
    let mut best = 0;
    let mut count = vec![0usize; n];
    let mut on_path = vec![false; n];
    for s in 0..n {
        count.fill(0);
        on_path[s] = true;
        // explicit stack of (vertex, next out-neighbor index)
        let mut stack: Vec<(Vertex, usize)> = vec![(s, 0)];
        while let Some(top) = stack.last_mut() {
            let (u, i) = *top;
            if i < g.out_degree(u) {
                top.1 += 1;
                let w = g.out_neighbors(u)[i];
                if on_path[w] {
                    continue;
                }
                count[w] += 1;
                if count[w] > cap {
                    return Capped::Exceeds(cap);
                }
                on_path[w] = true;
                stack.push((w, 0));
            } else {
                on_path[u] = false;
                stack.pop();
            }
        }
        best = best.max(count.iter().copied().max().unwrap_or(0));
    }
    Capped::Exact(best)
}

/// Topological order when `g` is acyclic.
pub fn topological_order(g: &Digraph) -> Option<Vec<Vertex>> {
    let mut indeg: Vec<usize> = g.vertices().map(|v| g.in_degree(v)).collect();
    let mut queue: VecDeque<Vertex> = g.vertices().filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(g.n());
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in g.out_neighbors(u) {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                queue.push_back(w);
            }
        }
    }
    (order.len() == g.n()).then_some(order)
}

/// Length in arcs of a longest simple directed path. Linear DP on acyclic
/// graphs, exhaustive DFS otherwise (stopping once a path longer than `cap`
/// is found).
pub fn longest_path(g: &Digraph, cap: usize) -> Capped {
    let best = if let Some(order) = topological_order(g) {
        let mut len = vec![0usize; g.n()];
        for &u in order.iter().rev() {
            len[u] = g.out_neighbors(u).iter().map(|&w| len[w] + 1).max().unwrap_or(0);
        }
        len.into_iter().max().unwrap_or(0)
    } else {
        let n = g.n();
        let mut best = 0;
        let mut on_path = vec![false; n];
        for s in 0..n {
            on_path[s] = true;
            let mut stack: Vec<(Vertex, usize)> = vec![(s, 0)];
            while let Some(top) = stack.last_mut() {
                let (u, i) = *top;
                if i < g.out_degree(u) {
                    top.1 += 1;
                    let w = g.out_neighbors(u)[i];
                    if on_path[w] {
                        continue;
                    }
                    on_path[w] = true;
                    stack.push((w, 0));
                    best = best.max(stack.len() - 1);
                    if best > cap {
                        return Capped::Exceeds(cap);
                    }
                } else {
                    on_path[u] = false;
                    stack.pop();
                }
            }
        }
        best
    };
    if best > cap {
        Capped::Exceeds(cap)
    } else {
        Capped::Exact(best)
    }
}

/// When `g[r]` is acyclic and has a Hamiltonian path, returns that path
/// (which is then its unique topological order).
pub fn is_dag_with_ham_path(g: &Digraph, r: &VertexSet) -> Option<Vec<Vertex>> {
    let (h, map) = g.induced_subgraph(r);
    let order = topological_order(&h)?;
    order
        .windows(2)
        .all(|w| h.has_arc(w[0], w[1]))
        .then(|| order.into_iter().map(|v| map.old_id(v)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Caps {
    pub dfv_limit: usize,
    pub kwidth: usize,
    pub longest_path: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            dfv_limit: DFVS_SOFT_CAP,
            kwidth: DEFAULT_KWIDTH_CAP,
            longest_path: DEFAULT_PATH_CAP,
        }
    }
}

/// Structural parameters of a graph; vertex sets are given by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamReport {
    pub n: usize,
    pub m: usize,
    pub dfv: Capped,
    pub dfvs: Option<Vec<String>>,
    pub kwidth: Capped,
    pub longest_path: Capped,
    pub knots: usize,
    pub caps: Caps,
}

impl ParamReport {
    pub fn compute(g: &Digraph, caps: Caps) -> Self {
        let dfvs = min_dfvs(g, caps.dfv_limit);
        ParamReport {
            n: g.n(),
            m: g.arc_count(),
            dfv: match &dfvs {
                Some(f) => Capped::Exact(f.len()),
                None => Capped::Exceeds(caps.dfv_limit),
            },
            dfvs: dfvs.map(|f| f.iter().map(|&v| g.label(v).to_string()).collect()),
            kwidth: k_width(g, caps.kwidth),
            longest_path: longest_path(g, caps.longest_path),
            knots: crate::graph::find_knots(g).len(),
            caps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    fn g(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn dfvs_examples() {
        assert_eq!(min_dfvs(&g(3, &[(0, 1), (1, 2)]), 3), Some(vec![]));
        assert_eq!(min_dfvs(&g(3, &[(0, 1), (1, 2), (2, 0)]), 3).unwrap().len(), 1);
        let two = g(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]);
        assert_eq!(min_dfvs(&two, 3).unwrap().len(), 2);
        assert_eq!(min_dfvs(&two, 1), None);
    }

    #[test]
    fn dfvs_is_minimum_on_petersen_like_graph() {
        // complete digraph on 4 vertices needs 3 deletions
        let arcs: Vec<(usize, usize)> = (0..4).cartesian_product(0..4).filter(|(a, b)| a != b).collect();
        let k4 = g(4, &arcs);
        let f = min_dfvs(&k4, 4).unwrap();
        assert_eq!(f.len(), 3);
        assert!(is_dfvs(&k4, &f));
        assert!((0..4).combinations(2).all(|c| !is_dfvs(&k4, &c)));
    }

    #[test]
    fn kwidth_examples() {
        assert_eq!(k_width(&g(2, &[(0, 1)]), 64), Capped::Exact(1));
        let diamond = g(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(k_width(&diamond, 64), Capped::Exact(2));
        assert_eq!(k_width(&diamond, 1), Capped::Exceeds(1));
        assert_eq!(k_width(&Digraph::empty(3), 64), Capped::Exact(0));
    }

    #[test]
    fn longest_path_examples() {
        assert_eq!(longest_path(&g(3, &[(0, 1), (1, 2)]), 32), Capped::Exact(2));
        assert_eq!(longest_path(&g(3, &[(0, 1), (1, 2), (2, 0)]), 32), Capped::Exact(2));
        assert_eq!(longest_path(&g(3, &[(0, 1), (1, 2)]), 1), Capped::Exceeds(1));
    }

    #[test]
    fn ham_path_examples() {
        let path = g(3, &[(0, 1), (1, 2)]);
        let all: VertexSet = (0..3).collect();
        assert_eq!(is_dag_with_ham_path(&path, &all), Some(vec![0, 1, 2]));
        let iso: VertexSet = [0, 2].into();
        assert_eq!(is_dag_with_ham_path(&Digraph::empty(3), &iso), None);
        let diamond = g(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(is_dag_with_ham_path(&diamond, &(0..4).collect()), None);
        let cyc = g(2, &[(0, 1), (1, 0)]);
        assert_eq!(is_dag_with_ham_path(&cyc, &(0..2).collect()), None);
    }

    #[test]
    fn capped_serializes_as_number_or_marker() {
        assert_eq!(serde_json::to_string(&Capped::Exact(3)).unwrap(), "3");
        assert_eq!(serde_json::to_string(&Capped::Exceeds(64)).unwrap(), "\">64\"");
    }
}
