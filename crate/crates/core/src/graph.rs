//! Immutable directed graphs and the structural primitives the solvers share:
//! strongly connected components, knots, sinks, ancestor/descendant closures,
//! induced subgraphs and vertex bypass.
//!
//! Vertex ids are dense (`0..n`). Every operation that removes vertices
//! returns a fresh [`Digraph`] together with an [`IdMap`]; nothing is mutated
//! in place. Neighbor lists are kept sorted so iteration order is always
//! ascending by id.

use std::collections::{BTreeSet, VecDeque};

use crate::error::GraphError;

pub type Vertex = usize;
pub type VertexSet = BTreeSet<Vertex>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Vec<Vertex>>,
    inc: Vec<Vec<Vertex>>,
    labels: Vec<String>,
    arc_count: usize,
}

impl Digraph {
    /// Arcless graph on `n` vertices labelled `1..=n`.
    pub fn empty(n: usize) -> Self {
        Digraph {
            out: vec![Vec::new(); n],
            inc: vec![Vec::new(); n],
            labels: (1..=n).map(|i| i.to_string()).collect(),
            arc_count: 0,
        }
    }

    /// Builds a graph from an arc list. Duplicate arcs are merged; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Digraph::empty(n);
        for (u, v) in arcs {
            if u >= n {
                return Err(GraphError::InvalidVertex { vertex: u, n });
            }
            if v >= n {
                return Err(GraphError::InvalidVertex { vertex: v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.out[u].push(v);
        }
        g.rebuild();
        Ok(g)
    }

    /// Same as [`Digraph::from_arcs`] but silently drops loops.
    pub(crate) fn from_arcs_dropping_loops<I>(n: usize, arcs: I) -> Self
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Digraph::empty(n);
        for (u, v) in arcs {
            if u != v {
                g.out[u].push(v);
            }
        }
        g.rebuild();
        g
    }

    fn rebuild(&mut self) {
        let n = self.out.len();
        for list in &mut self.out {
            list.sort_unstable();
            list.dedup();
        }
        self.inc = vec![Vec::new(); n];
        let mut m = 0;
        for u in 0..n {
            for &v in &self.out[u] {
                self.inc[v].push(u);
                m += 1;
            }
        }
        self.arc_count = m;
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, GraphError> {
        if labels.len() != self.n() {
            return Err(GraphError::LabelCount {
                expected: self.n(),
                found: labels.len(),
            });
        }
        let distinct: BTreeSet<&String> = labels.iter().collect();
        if distinct.len() != labels.len() {
            return Err(GraphError::DuplicateLabel);
        }
        self.labels = labels;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.out.len()
    }

    #[inline]
    pub fn arc_count(&self) -> usize {
        self.arc_count
    }

    #[inline]
    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    #[inline]
    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.inc[v]
    }

    #[inline]
    pub fn out_degree(&self, v: Vertex) -> usize {
        self.out[v].len()
    }

    #[inline]
    pub fn in_degree(&self, v: Vertex) -> usize {
        self.inc[v].len()
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        self.out[u].binary_search(&v).is_ok()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v)))
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    pub fn label(&self, v: Vertex) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn vertex_by_label(&self, label: &str) -> Option<Vertex> {
        self.labels.iter().position(|l| l == label)
    }

    /// True when every label is the default 1-based index.
    pub fn has_default_labels(&self) -> bool {
        self.labels
            .iter()
            .enumerate()
            .all(|(i, l)| *l == (i + 1).to_string())
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::InvalidVertex { vertex: v, n: self.n() })
        }
    }

    pub fn sinks(&self) -> Vec<Vertex> {
        self.vertices().filter(|&v| self.out[v].is_empty()).collect()
    }

    /// Subgraph induced by the vertices flagged in `keep`.
    pub fn induced_by_mask(&self, keep: &[bool]) -> (Digraph, IdMap) {
        debug_assert_eq!(keep.len(), self.n());
        let map = IdMap::from_mask(keep);
        let mut g = Digraph::empty(map.len());
        for (new, &old) in map.to_old.iter().enumerate() {
            g.out[new] = self.out[old]
                .iter()
                .filter_map(|&w| map.to_new[w])
                .collect();
            g.labels[new] = self.labels[old].clone();
        }
        g.rebuild();
        (g, map)
    }

    pub fn induced_subgraph<'a, I>(&self, keep: I) -> (Digraph, IdMap)
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        let mut mask = vec![false; self.n()];
        for &v in keep {
            mask[v] = true;
        }
        self.induced_by_mask(&mask)
    }

    pub fn remove_vertices<'a, I>(&self, removed: I) -> (Digraph, IdMap)
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        let mut mask = vec![true; self.n()];
        for &v in removed {
            mask[v] = false;
        }
        self.induced_by_mask(&mask)
    }

    /// Vertices reachable from `sources` by a non-empty path, following arcs
    /// forward (`forward = true`) or backward.
    fn reach_nonempty(&self, sources: &[Vertex], forward: bool) -> Vec<bool> {
        let adj = if forward { &self.out } else { &self.inc };
        let mut seen = vec![false; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            for &w in &adj[s] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// `A(v)`: vertices reaching `v` through a non-empty path. Contains `v`
    /// only when `v` lies on a cycle.
    pub fn ancestors(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(mask_to_set(&self.reach_nonempty(&[v], false)))
    }

    /// `A[v] = A(v) ∪ {v}`.
    pub fn ancestors_closed(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        let mut set = self.ancestors(v)?;
        set.insert(v);
        Ok(set)
    }

    /// `D(v)`: vertices reachable from `v` through a non-empty path.
    pub fn descendants(&self, v: Vertex) -> Result<VertexSet, GraphError> {
        self.check_vertex(v)?;
        Ok(mask_to_set(&self.reach_nonempty(&[v], true)))
    }

    /// `A(C)`, the union of `A(v)` over `v ∈ C`. Panics on invalid ids.
    pub fn ancestors_of_set(&self, set: &[Vertex]) -> VertexSet {
        mask_to_set(&self.reach_nonempty(set, false))
    }

    /// `A[C] = A(C) ∪ C`.
    pub fn ancestors_closed_of_set(&self, set: &[Vertex]) -> VertexSet {
        let mut out = self.ancestors_of_set(set);
        out.extend(set.iter().copied());
        out
    }

    /// `D(C)`, the union of `D(v)` over `v ∈ C`. Panics on invalid ids.
    pub fn descendants_of_set(&self, set: &[Vertex]) -> VertexSet {
        mask_to_set(&self.reach_nonempty(set, true))
    }

    /// `N⁺(C) = ⋃ N⁺(v) ∖ C`.
    pub fn out_neighborhood(&self, set: &VertexSet) -> VertexSet {
        set.iter()
            .flat_map(|&v| self.out[v].iter().copied())
            .filter(|w| !set.contains(w))
            .collect()
    }

    /// Adjacency of the underlying undirected simple graph.
    pub fn undirected_adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj: Vec<Vec<Vertex>> = (0..self.n())
            .map(|v| {
                let mut list: Vec<Vertex> = self.out[v]
                    .iter()
                    .chain(self.inc[v].iter())
                    .copied()
                    .collect();
                list.sort_unstable();
                list.dedup();
                list
            })
            .collect();
        adj.shrink_to_fit();
        adj
    }
}

fn mask_to_set(mask: &[bool]) -> VertexSet {
    mask.iter()
        .enumerate()
        .filter_map(|(v, &b)| b.then_some(v))
        .collect()
}

/// Correspondence between the ids of a graph and those of a graph derived
/// from it by removing vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdMap {
    to_new: Vec<Option<Vertex>>,
    to_old: Vec<Vertex>,
}

impl IdMap {
    pub fn identity(n: usize) -> Self {
        IdMap {
            to_new: (0..n).map(Some).collect(),
            to_old: (0..n).collect(),
        }
    }

    pub(crate) fn from_mask(keep: &[bool]) -> Self {
        let mut to_new = vec![None; keep.len()];
        let mut to_old = Vec::new();
        for (v, &k) in keep.iter().enumerate() {
            if k {
                to_new[v] = Some(to_old.len());
                to_old.push(v);
            }
        }
        IdMap { to_new, to_old }
    }

    /// Number of surviving vertices.
    pub fn len(&self) -> usize {
        self.to_old.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_old.is_empty()
    }

    pub fn new_id(&self, old: Vertex) -> Option<Vertex> {
        self.to_new.get(old).copied().flatten()
    }

    pub fn old_id(&self, new: Vertex) -> Vertex {
        self.to_old[new]
    }

    pub fn old_ids(&self) -> &[Vertex] {
        &self.to_old
    }

    /// Composes `self: A -> B` with `next: B -> C` into `A -> C`.
    pub fn then(&self, next: &IdMap) -> IdMap {
        IdMap {
            to_new: self
                .to_new
                .iter()
                .map(|id| id.and_then(|b| next.new_id(b)))
                .collect(),
            to_old: next.to_old.iter().map(|&b| self.to_old[b]).collect(),
        }
    }
}

/// Strongly connected components and the condensation DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccInfo {
    /// Components in reverse topological order of the condensation (every
    /// component appears before any component that has an arc into it).
    /// Each component is sorted ascending.
    pub components: Vec<Vec<Vertex>>,
    pub component_of: Vec<usize>,
    /// Condensation out-adjacency, sorted, without duplicates.
    pub condensation: Vec<Vec<usize>>,
}

impl SccInfo {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components with no arc leaving them.
    pub fn sink_components(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&c| self.condensation[c].is_empty())
    }
}

/// Tarjan's algorithm, iterative so deep graphs do not overflow the stack.
pub fn strongly_connected_components(g: &Digraph) -> SccInfo {
    const UNVISITED: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<Vertex> = Vec::new();
    let mut component_of = vec![usize::MAX; n];
    let mut components: Vec<Vec<Vertex>> = Vec::new();
    let mut next_index = 0;
    // (vertex, position in its out-list)
    let mut call: Vec<(Vertex, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let succ = g.out_neighbors(v);
            if *pos < succ.len() {
                let w = succ[*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let id = components.len();
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        component_of[w] = id;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    components.push(comp);
                }
            }
        }
    }

    let mut condensation = vec![Vec::new(); components.len()];
    for (u, v) in g.arcs() {
        let (cu, cv) = (component_of[u], component_of[v]);
        if cu != cv {
            condensation[cu].push(cv);
        }
    }
    for list in &mut condensation {
        list.sort_unstable();
        list.dedup();
    }
    SccInfo {
        components,
        component_of,
        condensation,
    }
}

/// Knots: strongly connected components with at least two vertices and no
/// arc leaving them. Sorted by smallest member.
pub fn find_knots(g: &Digraph) -> Vec<Vec<Vertex>> {
    let scc = strongly_connected_components(g);
    knots_of(&scc)
}

pub(crate) fn knots_of(scc: &SccInfo) -> Vec<Vec<Vertex>> {
    let mut knots: Vec<Vec<Vertex>> = scc
        .sink_components()
        .filter(|&c| scc.components[c].len() >= 2)
        .map(|c| scc.components[c].clone())
        .collect();
    knots.sort();
    knots
}

pub fn is_knot_free(g: &Digraph) -> bool {
    find_knots(g).is_empty()
}

/// Second route to knot-freeness: every vertex has a path to some sink.
pub fn every_vertex_reaches_sink(g: &Digraph) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue: VecDeque<Vertex> = g.sinks().into_iter().collect();
    for &s in &queue {
        seen[s] = true;
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.in_neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// Vertices outside `bypass` lying on a cycle whose other vertices all
/// belong to `bypass`: exactly those whose loop [`bypass_vertices`] drops.
/// Cycles entirely inside `bypass` also vanish, through loops on bypassed
/// vertices; those are not reported here.
pub fn bypass_loops(g: &Digraph, bypass: &VertexSet) -> VertexSet {
    let mut out = VertexSet::new();
    for x in g.vertices().filter(|x| !bypass.contains(x)) {
        let mut seen: VertexSet = g.out_neighbors(x).iter().copied().filter(|w| bypass.contains(w)).collect();
        let mut stack: Vec<Vertex> = seen.iter().copied().collect();
        while let Some(u) = stack.pop() {
            if g.has_arc(u, x) {
                out.insert(x);
                break;
            }
            for &w in g.out_neighbors(u) {
                if bypass.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
    }
    out
}

/// Removes every vertex of `bypass`, joining each in-neighbor to each
/// out-neighbor. Loops created this way are discarded (see
/// [`bypass_loops`]) and parallel arcs merged. Vertices are processed in ascending order; the result does not
/// depend on that order.
pub fn bypass_vertices(g: &Digraph, bypass: &VertexSet) -> (Digraph, IdMap) {
    let n = g.n();
    let mut out: Vec<BTreeSet<Vertex>> = (0..n)
        .map(|v| g.out_neighbors(v).iter().copied().collect())
        .collect();
    let mut inc: Vec<BTreeSet<Vertex>> = (0..n)
        .map(|v| g.in_neighbors(v).iter().copied().collect())
        .collect();
    for &v in bypass {
        let preds: Vec<Vertex> = std::mem::take(&mut inc[v]).into_iter().collect();
        let succs: Vec<Vertex> = std::mem::take(&mut out[v]).into_iter().collect();
        for &x in &preds {
            out[x].remove(&v);
        }
        for &y in &succs {
            inc[y].remove(&v);
        }
        for &x in &preds {
            for &y in &succs {
                if x != y {
                    out[x].insert(y);
                    inc[y].insert(x);
                }
            }
        }
    }
    let keep: Vec<bool> = (0..n).map(|v| !bypass.contains(&v)).collect();
    let map = IdMap::from_mask(&keep);
    let arcs = (0..n).filter(|&u| keep[u]).flat_map(|u| {
        let map = &map;
        out[u]
            .iter()
            .map(move |&w| (map.new_id(u).unwrap(), map.new_id(w).unwrap()))
    });
    let arcs: Vec<_> = arcs.collect();
    let labels = map.old_ids().iter().map(|&v| g.label(v).to_string()).collect();
    let h = Digraph::from_arcs_dropping_loops(map.len(), arcs)
        .with_labels(labels)
        .expect("labels come from a valid graph");
    (h, map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[Vertex]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn rejects_loops_and_merges_duplicates() {
        assert!(matches!(
            Digraph::from_arcs(2, [(1, 1)]),
            Err(GraphError::SelfLoop(1))
        ));
        let g = Digraph::from_arcs(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.arc_count(), 1);
        assert!(Digraph::from_arcs(2, [(0, 2)]).is_err());
    }

    #[test]
    fn scc_examples() {
        let digon = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(strongly_connected_components(&digon).components, vec![vec![0, 1]]);

        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(strongly_connected_components(&path).len(), 3);

        let g = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let scc = strongly_connected_components(&g);
        let mut comps = scc.components.clone();
        comps.sort();
        assert_eq!(comps, vec![vec![0, 1, 2], vec![3]]);
        let c = scc.component_of[0];
        assert_eq!(scc.condensation[c], vec![scc.component_of[3]]);
    }

    #[test]
    fn knot_examples() {
        let digon = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(find_knots(&digon), vec![vec![0, 1]]);
        let escaped = Digraph::from_arcs(3, [(0, 1), (1, 0), (0, 2)]).unwrap();
        assert!(find_knots(&escaped).is_empty());
        assert!(is_knot_free(&Digraph::empty(0)));
        let tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert!(!is_knot_free(&tri));
        assert!(!every_vertex_reaches_sink(&tri));
    }

    #[test]
    fn ancestors_and_descendants() {
        let path = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.ancestors(2).unwrap(), set(&[0, 1]));
        assert_eq!(path.descendants(0).unwrap(), set(&[1, 2]));
        assert!(path.ancestors(3).is_err());

        let digon = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(digon.ancestors(0).unwrap(), set(&[0, 1]));

        let tri = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        for v in 0..3 {
            assert_eq!(tri.ancestors_closed(v).unwrap(), set(&[0, 1, 2]));
        }
        assert_eq!(tri.out_neighborhood(&set(&[0, 1])), set(&[2]));
    }

    #[test]
    fn bypass_examples() {
        // a -> v -> b
        let g = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let (h, map) = bypass_vertices(&g, &set(&[1]));
        assert_eq!(h.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(map.old_id(1), 2);

        // a <-> v: the loop on a disappears
        let g = Digraph::from_arcs(2, [(0, 1), (1, 0)]).unwrap();
        let (h, _) = bypass_vertices(&g, &set(&[1]));
        assert_eq!(h.n(), 1);
        assert_eq!(h.arc_count(), 0);
        assert_eq!(bypass_loops(&g, &set(&[1])), set(&[0]));

        // f -> r1 -> r2 -> r3 -> f, bypass {r2, r3}
        let g = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let (h, _) = bypass_vertices(&g, &set(&[2, 3]));
        assert_eq!(h.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 0)]);
        assert!(bypass_loops(&g, &set(&[2, 3])).is_empty());
        assert_eq!(bypass_loops(&g, &set(&[1, 2, 3])), set(&[0]));
    }

    #[test]
    fn id_map_composition() {
        let g = Digraph::from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        let (h, m1) = g.remove_vertices(&[1]);
        let (_, m2) = h.remove_vertices(&[0]);
        let m = m1.then(&m2);
        assert_eq!(m.old_ids(), &[2, 3, 4]);
        assert_eq!(m.new_id(3), Some(1));
        assert_eq!(m.new_id(0), None);
    }
}
