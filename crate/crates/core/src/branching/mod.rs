//! Branching algorithms parameterized by a designated feedback vertex set
//! `F`: one combined with the K-width of the graph, one with the length of a
//! longest path.
//!
//! Both share the same pipeline: guess how `F` meets a solution (delete,
//! keep as sink, keep as non-sink), reduce, make every arc between strongly
//! connected components run between forbidden vertices, then solve each
//! knot separately. Inside a strongly connected knot the K-width solver
//! branches on the border set `B` of the connectivity sets and finishes with
//! a single sink-star; the path solver contracts two short cycles through
//! feedback vertices.
//!
//! Forbidden vertices are never deleted. Whether a forbidden vertex may end
//! as a sink only narrows which solutions a branch is looking for; every
//! witness is checked for knot-freeness where it is produced, so a wrong
//! guess can lose a branch but never yield an invalid answer.

pub mod connectivity;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, Digraph, Vertex, VertexSet};
use crate::oracle::{verify_solution, Algorithm, DisjointInstance, ResidualCheck, Solution};
use crate::reduction::exhaustive_reduce;

pub use connectivity::{build_branch_set_b, connectivity_set, connectivity_sets, unguarded_border_arcs, BranchSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Raw,
    /// Every arc between strongly connected components has both ends
    /// forbidden.
    Nice,
    /// Nice, strongly connected, and `F` is forbidden.
    SuperNice,
}

/// A branch of the search: the current graph together with the map back to
/// the input, the remaining budget and the per-vertex restrictions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedInstance {
    pub graph: Digraph,
    /// Input id of each vertex; `None` for vertices created by contraction.
    pub origin: Vec<Option<Vertex>>,
    pub k: usize,
    /// May not be deleted.
    pub forbidden: Vec<bool>,
    /// Forbidden, but allowed to end up as a sink.
    pub sink_exempt: Vec<bool>,
    /// Designated feedback vertex set, in local ids, sorted.
    pub dfvs: Vec<Vertex>,
    /// Input ids deleted on the way here.
    pub deleted: Vec<Vertex>,
    pub level: Level,
}

impl NormalizedInstance {
    pub fn from_disjoint(inst: &DisjointInstance) -> Result<Self> {
        let dfvs = inst
            .dfvs()
            .ok_or_else(|| Error::Precondition("a designated feedback vertex set is required".into()))?
            .to_vec();
        let n = inst.graph().n();
        let forbidden: Vec<bool> = (0..n).map(|v| inst.forbidden().contains(&v)).collect();
        let sink_exempt = forbidden.iter().map(|&f| f && !inst.sink_forbidden()).collect();
        Ok(NormalizedInstance {
            graph: inst.graph().clone(),
            origin: (0..n).map(Some).collect(),
            k: inst.budget(),
            forbidden,
            sink_exempt,
            dfvs,
            deleted: Vec::new(),
            level: Level::Raw,
        })
    }

    /// Forbidden and not allowed to become a sink.
    pub fn strict(&self, v: Vertex) -> bool {
        self.forbidden[v] && !self.sink_exempt[v]
    }

    fn restrict(&self, keep: &[bool]) -> Self {
        let (graph, map) = self.graph.induced_by_mask(keep);
        let pick = |flags: &Vec<bool>| map.old_ids().iter().map(|&v| flags[v]).collect::<Vec<bool>>();
        NormalizedInstance {
            origin: map.old_ids().iter().map(|&v| self.origin[v]).collect(),
            forbidden: pick(&self.forbidden),
            sink_exempt: pick(&self.sink_exempt),
            dfvs: self.dfvs.iter().filter_map(|&v| map.new_id(v)).collect(),
            graph,
            k: self.k,
            deleted: self.deleted.clone(),
            level: self.level,
        }
    }

    /// Deletes `set` (which must avoid forbidden vertices) and charges it to
    /// the budget.
    fn delete(&self, set: &VertexSet) -> Self {
        debug_assert!(set.iter().all(|&v| !self.forbidden[v]));
        let keep: Vec<bool> = (0..self.graph.n()).map(|v| !set.contains(&v)).collect();
        let mut next = self.restrict(&keep);
        next.k = self.k - set.len();
        next.deleted.extend(set.iter().map(|&v| self.origin[v].expect("contracted vertices are forbidden")));
        next.level = Level::Raw;
        next
    }

    fn reduced(&self) -> Self {
        let (_, trace) = exhaustive_reduce(&self.graph, self.k);
        let mut keep = vec![false; self.graph.n()];
        for &v in trace.map.old_ids() {
            keep[v] = true;
        }
        self.restrict(&keep)
    }

    fn forbid(&mut self, v: Vertex, strict: bool) {
        if !self.forbidden[v] {
            self.forbidden[v] = true;
            self.sink_exempt[v] = !strict;
        } else if strict {
            self.sink_exempt[v] = false;
        }
    }

    /// Heads and tails of arcs between different strongly connected
    /// components.
    pub fn border(&self) -> (VertexSet, VertexSet) {
        let scc = strongly_connected_components(&self.graph);
        let mut heads = VertexSet::new();
        let mut tails = VertexSet::new();
        for (u, w) in self.graph.arcs() {
            if scc.component_of[u] != scc.component_of[w] {
                tails.insert(u);
                heads.insert(w);
            }
        }
        (heads, tails)
    }

    pub fn is_nice(&self) -> bool {
        let (heads, tails) = self.border();
        self.dfvs.iter().all(|&v| self.forbidden[v]) && heads.iter().chain(&tails).all(|&v| self.forbidden[v])
    }

    pub fn is_super_nice(&self) -> bool {
        self.dfvs.iter().all(|&v| self.strict(v)) && strongly_connected_components(&self.graph).len() <= 1
    }

    fn potential(&self) -> usize {
        self.k + self.dfvs.len()
    }
}

/// Counters collected during a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchStats {
    pub nodes: usize,
    pub leaves: usize,
    pub knot_splits: usize,
    /// Leaves where the cheapest sink-star candidate did not leave a
    /// knot-free graph.
    pub sinkv_violations: usize,
    /// Instances whose number of border heads exceeded `|F|·k`.
    pub border_head_excess: usize,
    /// Instances whose border (heads and tails) exceeded `2·|F|·k`.
    pub border_total_excess: usize,
    pub max_border: usize,
    pub max_b: usize,
    /// Leaves where an arc between connectivity sets had an unforbidden head.
    pub unguarded_arcs: usize,
    pub contractions: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    KWidth,
    Path,
}

/// Branching solver; one value per run, so that statistics accumulate.
#[derive(Clone, Debug)]
pub struct BranchSolver {
    mode: Mode,
    stats: BranchStats,
}

impl BranchSolver {
    pub fn new(mode: Mode) -> Self {
        BranchSolver {
            mode,
            stats: BranchStats::default(),
        }
    }

    pub fn stats(&self) -> BranchStats {
        self.stats
    }

    fn algorithm(&self) -> Algorithm {
        match self.mode {
            Mode::KWidth => Algorithm::DfvKwidth,
            Mode::Path => Algorithm::DfvPath,
        }
    }

    /// Decides the instance; requires a designated feedback vertex set. The
    /// witness is verified against `inst` before it is returned.
    pub fn solve(&mut self, inst: &DisjointInstance) -> Result<Solution> {
        let root = NormalizedInstance::from_disjoint(inst)?;
        let limit = root.potential() + 1;
        for child in branch_dfvs_partition(&root)? {
            if let Some(deleted) = self.cascade(child, limit)? {
                let set: VertexSet = deleted.iter().copied().collect();
                if !verify_solution(inst, &set).valid {
                    return Err(Error::InvalidWitness(format!("{} produced {:?}", self.algorithm(), deleted)));
                }
                return Ok(Solution::yes(inst.graph(), set, self.algorithm()));
            }
        }
        Ok(Solution::no(self.algorithm()))
    }

    /// Reduction, then Branching 2 until nice, then the per-knot split.
    /// `bound` is the potential of the caller, which must strictly drop.
    fn cascade(&mut self, inst: NormalizedInstance, bound: usize) -> Result<Option<Vec<Vertex>>> {
        if inst.potential() >= bound {
            return Err(Error::RecursionGuard(format!(
                "k + |F| = {} did not drop below {bound}",
                inst.potential()
            )));
        }
        self.stats.nodes += 1;
        let inst = inst.reduced();
        if inst.graph.n() == 0 {
            return Ok(Some(inst.deleted));
        }
        let potential = inst.potential();
        for child in branch_scc_border(&inst, &mut self.stats) {
            let found = match child.level {
                Level::Nice => self.split_per_knot(&child)?,
                _ => self.cascade(child, potential)?,
            };
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Solves each knot on its own, with the smallest budget found by binary
    /// search, and answers yes iff the budgets sum to at most `k`.
    pub fn split_per_knot(&mut self, inst: &NormalizedInstance) -> Result<Option<Vec<Vertex>>> {
        self.stats.knot_splits += 1;
        let scc = strongly_connected_components(&inst.graph);
        let knots: Vec<&Vec<Vertex>> = scc.sink_components().map(|c| &scc.components[c]).collect();
        if knots.len() > inst.k {
            return Ok(None);
        }
        let mut deleted = inst.deleted.clone();
        let mut spent = 0;
        for knot in knots {
            let mut keep = vec![false; inst.graph.n()];
            for &v in knot {
                keep[v] = true;
            }
            let mut sub = inst.restrict(&keep);
            sub.deleted.clear();
            sub.level = Level::SuperNice;
            let budget = inst.k - spent;
            sub.k = budget;
            let Some(mut best) = self.solve_super_nice(&sub)? else {
                return Ok(None);
            };
            let (mut lo, mut hi) = (0, budget);
            while lo < hi {
                let mid = (lo + hi) / 2;
                sub.k = mid;
                match self.solve_super_nice(&sub)? {
                    Some(w) => {
                        hi = mid;
                        best = w;
                    }
                    None => lo = mid + 1,
                }
            }
            spent += best.len();
            deleted.extend(best);
        }
        Ok(Some(deleted))
    }

    fn solve_super_nice(&mut self, inst: &NormalizedInstance) -> Result<Option<Vec<Vertex>>> {
        debug_assert!(inst.is_super_nice());
        match self.mode {
            Mode::KWidth => self.solve_supernice_kwidth(inst),
            Mode::Path => self.solve_supernice_path(inst),
        }
    }

    /// Branching 3 over the border set `B`, then the sink-star leaf.
    pub fn solve_supernice_kwidth(&mut self, inst: &NormalizedInstance) -> Result<Option<Vec<Vertex>>> {
        let b = build_branch_set_b(&inst.graph, &inst.dfvs);
        self.stats.max_b = self.stats.max_b.max(b.vertices.len());
        let free: Vec<Vertex> = b.vertices.iter().copied().filter(|&v| !inst.forbidden[v]).collect();
        if free.is_empty() {
            return Ok(self.sink_star_leaf(inst));
        }
        let mut labels = vec![Part::Keep; free.len()];
        self.branch_three_way(inst, &free, 0, &mut labels, &mut VertexSet::new())
    }

    fn branch_three_way(
        &mut self,
        inst: &NormalizedInstance,
        free: &[Vertex],
        idx: usize,
        labels: &mut Vec<Part>,
        doomed: &mut VertexSet,
    ) -> Result<Option<Vec<Vertex>>> {
        if doomed.len() > inst.k {
            return Ok(None);
        }
        if idx == free.len() {
            let mut child = inst.clone();
            for (i, &v) in free.iter().enumerate() {
                if labels[i] == Part::Keep {
                    child.forbid(v, true);
                }
            }
            if doomed.is_empty() {
                let bad = unguarded_border_arcs(&child.graph, &child.dfvs, &child.forbidden);
                if !bad.is_empty() {
                    self.stats.unguarded_arcs += 1;
                }
                return Ok(self.sink_star_leaf(&child));
            }
            let child = child.delete(doomed);
            return self.cascade(child, inst.potential());
        }
        let v = free[idx];
        let kept_or_sink = |labels: &[Part], w: Vertex| {
            free[..idx]
                .iter()
                .zip(labels)
                .any(|(&u, &p)| u == w && p != Part::Delete)
        };
        for part in [Part::Keep, Part::Delete, Part::Sink] {
            let mut added = Vec::new();
            match part {
                Part::Keep => {
                    if doomed.contains(&v) {
                        continue;
                    }
                }
                Part::Delete => {
                    if doomed.insert(v) {
                        added.push(v);
                    }
                }
                Part::Sink => {
                    if doomed.contains(&v) {
                        continue;
                    }
                    let outs = inst.graph.out_neighbors(v);
                    if outs.iter().any(|&w| inst.forbidden[w] || kept_or_sink(labels, w)) {
                        continue;
                    }
                    for &w in outs {
                        if doomed.insert(w) {
                            added.push(w);
                        }
                    }
                }
            }
            labels[idx] = part;
            let found = self.branch_three_way(inst, free, idx + 1, labels, doomed)?;
            for w in added {
                doomed.remove(&w);
            }
            labels[idx] = Part::Keep;
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    /// Turns the cheapest eligible vertex into a sink by deleting its
    /// out-neighbors. Eligible: not strictly forbidden, no forbidden
    /// out-neighbor. Candidates are checked, never trusted.
    fn sink_star_leaf(&mut self, inst: &NormalizedInstance) -> Option<Vec<Vertex>> {
        self.stats.leaves += 1;
        let g = &inst.graph;
        let mut candidates: Vec<Vertex> = g
            .vertices()
            .filter(|&v| !inst.strict(v) && g.out_neighbors(v).iter().all(|&w| !inst.forbidden[w]))
            .collect();
        candidates.sort_by_key(|&v| (g.out_degree(v), v));
        let mut check = ResidualCheck::new(g.n());
        let mut mask = vec![false; g.n()];
        for (rank, &v) in candidates.iter().enumerate() {
            mask.fill(false);
            for &w in g.out_neighbors(v) {
                mask[w] = true;
            }
            let ok = check.knot_free(g, &mask, None);
            if rank == 0 && !ok {
                self.stats.sinkv_violations += 1;
            }
            if g.out_degree(v) > inst.k {
                return None;
            }
            if ok {
                let mut deleted = inst.deleted.clone();
                deleted.extend(g.out_neighbors(v).iter().map(|&w| inst.origin[w].expect("deletable")));
                return Some(deleted);
            }
        }
        None
    }

    /// With one feedback vertex, the sink-star leaf. Otherwise two shortest
    /// paths `P1: v1 → v2` and `P2: v2 → v1` span a strongly connected `C`;
    /// either a vertex of `C` is deleted, or `C` survives whole and is
    /// contracted into a forbidden digon.
    pub fn solve_supernice_path(&mut self, inst: &NormalizedInstance) -> Result<Option<Vec<Vertex>>> {
        if inst.dfvs.len() <= 1 {
            return Ok(self.sink_star_leaf(inst));
        }
        let (v1, v2) = (inst.dfvs[0], inst.dfvs[1]);
        let p1 = shortest_path(&inst.graph, v1, v2).expect("strongly connected");
        let p2 = shortest_path(&inst.graph, v2, v1).expect("strongly connected");
        let c: VertexSet = p1.into_iter().chain(p2).collect();
        let bound = inst.potential();
        if inst.k > 0 {
            for &x in c.iter().filter(|&&x| !inst.forbidden[x]) {
                let child = inst.delete(&VertexSet::from([x]));
                if let Some(found) = self.cascade(child, bound)? {
                    return Ok(Some(found));
                }
            }
        }
        self.stats.contractions += 1;
        self.cascade(contract(inst, &c), bound)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Keep,
    Delete,
    Sink,
}

fn shortest_path(g: &Digraph, s: Vertex, t: Vertex) -> Option<Vec<Vertex>> {
    let mut parent = vec![usize::MAX; g.n()];
    parent[s] = s;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if u == t {
            let mut path = vec![t];
            let mut x = t;
            while x != s {
                x = parent[x];
                path.push(x);
            }
            path.reverse();
            return Some(path);
        }
        for &w in g.out_neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    None
}

/// Replaces the strongly connected set `c` by a forbidden digon
/// `{v_C, v_C'}`: `v_C` takes over every arc between `c` and the rest, `v_C'`
/// is adjacent to `v_C` only, so `v_C` can never become a sink. The new
/// feedback set is `(F ∖ c) ∪ {v_C}`.
pub fn contract(inst: &NormalizedInstance, c: &VertexSet) -> NormalizedInstance {
    let n = inst.graph.n();
    let mut new_id = vec![usize::MAX; n];
    let mut next = 0;
    for (v, id) in new_id.iter_mut().enumerate() {
        if !c.contains(&v) {
            *id = next;
            next += 1;
        }
    }
    let (vc, vc2) = (next, next + 1);
    let lift = |v: Vertex| if c.contains(&v) { vc } else { new_id[v] };
    let mut arcs: Vec<(Vertex, Vertex)> = inst
        .graph
        .arcs()
        .map(|(u, w)| (lift(u), lift(w)))
        .filter(|(a, b)| a != b)
        .collect();
    arcs.extend([(vc, vc2), (vc2, vc)]);
    let mut labels: Vec<String> = (0..n).filter(|v| !c.contains(v)).map(|v| inst.graph.label(v).to_string()).collect();
    let joined: Vec<&str> = c.iter().map(|&v| inst.graph.label(v)).collect();
    labels.push(format!("[{}]", joined.join(",")));
    labels.push(format!("[{}]'", joined.join(",")));
    let graph = Digraph::from_arcs(next + 2, arcs)
        .expect("contraction drops loops")
        .with_labels(labels)
        .expect("contracted labels are distinct");
    let mut origin: Vec<Option<Vertex>> = (0..n).filter(|v| !c.contains(v)).map(|v| inst.origin[v]).collect();
    origin.extend([None, None]);
    let mut forbidden: Vec<bool> = (0..n).filter(|v| !c.contains(v)).map(|v| inst.forbidden[v]).collect();
    forbidden.extend([true, true]);
    let mut sink_exempt: Vec<bool> = (0..n).filter(|v| !c.contains(v)).map(|v| inst.sink_exempt[v]).collect();
    sink_exempt.extend([false, false]);
    let mut dfvs: Vec<Vertex> = inst.dfvs.iter().filter(|v| !c.contains(v)).map(|&v| new_id[v]).collect();
    dfvs.push(vc);
    NormalizedInstance {
        graph,
        origin,
        k: inst.k,
        forbidden,
        sink_exempt,
        dfvs,
        deleted: inst.deleted.clone(),
        level: Level::Raw,
    }
}

/// Branching 1: every split of `F` into kept-non-sink (forbidden), deleted
/// and sink parts. A sink part deletes its out-neighbors. Branches that
/// would delete a forbidden vertex, keep a sink's out-neighbor or overspend
/// are dropped.
pub fn branch_dfvs_partition(inst: &NormalizedInstance) -> Result<Vec<NormalizedInstance>> {
    if let Some(cycle) = crate::oracle::surviving_cycle(&inst.graph, &inst.dfvs) {
        return Err(Error::NotAFeedbackSet(cycle));
    }
    let f = &inst.dfvs;
    let mut children = Vec::new();
    let total = 3usize.pow(f.len() as u32);
    'split: for code in 0..total {
        let mut parts = Vec::with_capacity(f.len());
        let mut c = code;
        for _ in 0..f.len() {
            parts.push(c % 3);
            c /= 3;
        }
        let mut doomed = VertexSet::new();
        for (i, &v) in f.iter().enumerate() {
            match parts[i] {
                0 => {
                    if inst.sink_exempt[v] && inst.forbidden[v] && !inst.strict(v) {
                        // allowed either way; kept as non-sink here
                    }
                }
                1 => {
                    if inst.forbidden[v] {
                        continue 'split;
                    }
                    doomed.insert(v);
                }
                _ => {
                    if inst.strict(v) {
                        continue 'split;
                    }
                    doomed.extend(inst.graph.out_neighbors(v).iter().copied());
                }
            }
        }
        for (i, &v) in f.iter().enumerate() {
            let survives = parts[i] != 1;
            if survives && doomed.contains(&v) {
                continue 'split;
            }
        }
        if doomed.iter().any(|&v| inst.forbidden[v]) || doomed.len() > inst.k {
            continue;
        }
        let mut child = inst.delete(&doomed);
        for (i, &v) in f.iter().enumerate() {
            if parts[i] == 0 {
                if let Some(local) = child.origin.iter().position(|&o| o == inst.origin[v]) {
                    child.forbid(local, true);
                }
            }
        }
        children.push(child);
    }
    Ok(children)
}

/// Branching 2: each endpoint of an arc between strongly connected
/// components is deleted or kept (forbidden from deletion; it may still
/// become a sink). The child that deletes nothing is nice; the others are
/// raw and re-enter the pipeline with a smaller budget.
pub fn branch_scc_border(inst: &NormalizedInstance, stats: &mut BranchStats) -> Vec<NormalizedInstance> {
    let (heads, tails) = inst.border();
    let f = inst.dfvs.len();
    if heads.len() > f * inst.k {
        stats.border_head_excess += 1;
    }
    let border: Vec<Vertex> = heads.union(&tails).copied().collect();
    if border.len() > 2 * f * inst.k {
        stats.border_total_excess += 1;
    }
    stats.max_border = stats.max_border.max(border.len());
    let free: Vec<Vertex> = border.iter().copied().filter(|&v| !inst.forbidden[v]).collect();
    let mut children = Vec::new();
    let mut nice = inst.clone();
    for &v in &free {
        nice.forbid(v, false);
    }
    nice.level = Level::Nice;
    debug_assert!(nice.is_nice());
    children.push(nice);
    // subsets in order of increasing size, so cheap branches come first
    for size in 1..=free.len().min(inst.k) {
        for subset in itertools::Itertools::combinations(free.iter().copied(), size) {
            let s1: VertexSet = subset.iter().copied().collect();
            let mut child = inst.delete(&s1);
            for &v in free.iter().filter(|v| !s1.contains(v)) {
                let local = child.origin.iter().position(|&o| o == inst.origin[v]).expect("kept");
                child.forbid(local, false);
            }
            children.push(child);
        }
    }
    children
}

/// Solves `inst` (which must carry a designated feedback vertex set) with
/// the K-width branching algorithm.
pub fn solve_dfv_kwidth(inst: &DisjointInstance) -> Result<Solution> {
    BranchSolver::new(Mode::KWidth).solve(inst)
}

/// Solves `inst` (which must carry a designated feedback vertex set) with
/// the path-contraction branching algorithm.
pub fn solve_dfv_path(inst: &DisjointInstance) -> Result<Solution> {
    BranchSolver::new(Mode::Path).solve(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_min;

    fn g(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    fn inst(h: &Digraph, k: usize, f: &[Vertex]) -> DisjointInstance {
        DisjointInstance::new(h.clone(), k).with_dfvs(f.to_vec()).unwrap()
    }

    fn both(i: &DisjointInstance) -> (bool, bool) {
        (
            solve_dfv_kwidth(i).unwrap().status.is_yes(),
            solve_dfv_path(i).unwrap().status.is_yes(),
        )
    }

    #[test]
    fn partition_of_one_feedback_vertex() {
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let root = NormalizedInstance::from_disjoint(&inst(&c3, 1, &[0])).unwrap();
        let children = branch_dfvs_partition(&root).unwrap();
        assert_eq!(children.len(), 3);
        // deleting a leaves a path, which reduces away
        let del = &children[1];
        assert_eq!(del.k, 0);
        assert_eq!(del.reduced().graph.n(), 0);
        // making a a sink deletes b; c -> a remains and a is a sink
        let sink = &children[2];
        assert_eq!(sink.deleted, vec![1]);
        assert!(crate::graph::is_knot_free(&sink.graph));
    }

    #[test]
    fn partition_rejects_non_feedback_set() {
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let mut root = NormalizedInstance::from_disjoint(&inst(&c3, 1, &[0])).unwrap();
        root.dfvs.clear();
        assert!(matches!(branch_dfvs_partition(&root), Err(Error::NotAFeedbackSet(_))));
    }

    #[test]
    fn border_branching() {
        let mut stats = BranchStats::default();
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let mut root = NormalizedInstance::from_disjoint(&inst(&c3, 1, &[0])).unwrap();
        root.forbid(0, true);
        assert_eq!(branch_scc_border(&root, &mut stats).len(), 1);
        // two digons joined by b -> c
        let two = g(4, &[(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]);
        let mut root = NormalizedInstance::from_disjoint(&inst(&two, 2, &[0, 2])).unwrap();
        root.forbid(0, true);
        root.forbid(2, true);
        let children = branch_scc_border(&root, &mut stats);
        // border {b, c}; c is already forbidden, so b alone is branched on
        assert_eq!(children.len(), 2);
        assert!(children[0].is_nice());
    }

    #[test]
    fn knot_split() {
        let two = g(4, &[(0, 1), (1, 0), (2, 3), (3, 2)]);
        assert_eq!(both(&inst(&two, 2, &[0, 2])), (true, true));
        assert_eq!(both(&inst(&two, 1, &[0, 2])), (false, false));
    }

    #[test]
    fn super_nice_leaf_examples() {
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let mut base = NormalizedInstance::from_disjoint(&inst(&c3, 1, &[0])).unwrap();
        base.forbid(0, true);
        base.level = Level::SuperNice;
        for mode in [Mode::KWidth, Mode::Path] {
            let mut s = BranchSolver::new(mode);
            let found = s.solve_super_nice(&base).unwrap().unwrap();
            assert_eq!(found.len(), 1);
            assert_ne!(found[0], 0);
            let mut zero = base.clone();
            zero.k = 0;
            assert!(s.solve_super_nice(&zero).unwrap().is_none());
        }
        let digon = g(2, &[(0, 1), (1, 0)]);
        let i = NormalizedInstance::from_disjoint(&inst(&digon, 1, &[0])).unwrap();
        let mut s = BranchSolver::new(Mode::KWidth);
        assert_eq!(s.sink_star_leaf(&i), Some(vec![1]));
    }

    #[test]
    fn driver_examples() {
        let dag = g(3, &[(0, 1), (1, 2)]);
        let sol = solve_dfv_kwidth(&inst(&dag, 0, &[])).unwrap();
        assert!(sol.status.is_yes() && sol.deleted.is_empty());
        let c3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(both(&inst(&c3, 1, &[0])), (true, true));
        assert_eq!(both(&inst(&c3, 0, &[0])), (false, false));
        // 4-cycle v1 -> a -> v2 -> b -> v1
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(both(&inst(&c4, 1, &[0, 2])), (true, true));
    }

    #[test]
    fn contraction_shrinks_the_feedback_set() {
        let c4 = g(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]);
        let mut i = NormalizedInstance::from_disjoint(&inst(&c4, 1, &[0, 2])).unwrap();
        i.forbid(0, true);
        i.forbid(2, true);
        let c: VertexSet = [0, 1, 2, 3].into();
        let out = contract(&i, &c);
        assert_eq!(out.graph.n(), 2);
        assert_eq!(out.dfvs, vec![0]);
        assert!(out.forbidden.iter().all(|&f| f));
        assert_eq!(out.origin, vec![None, None]);
    }

    #[test]
    fn agrees_with_oracle_on_small_random_graphs() {
        for seed in 0..150u64 {
            let n = 3 + (seed % 5) as usize;
            let h = crate::generators::gen_random(n, 0.35, seed).unwrap();
            let f = crate::metrics::min_dfvs(&h, 4).unwrap();
            for k in 0..3 {
                let i = inst(&h, k, &f);
                let expect = brute_force_min(&DisjointInstance::new(h.clone(), k)).status.is_yes();
                assert_eq!(both(&i), (expect, expect), "seed {seed} k {k}");
            }
        }
    }
}
