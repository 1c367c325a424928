//! Problem instances, solutions, the solution verifier and the exhaustive
//! reference solver every other algorithm is checked against.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{strongly_connected_components, Digraph, Vertex, VertexSet};

/// Soft limits of the exhaustive search; beyond them it still runs but logs a
/// warning.
pub const BRUTE_FORCE_SOFT_MAX_N: usize = 16;
pub const BRUTE_FORCE_SOFT_MAX_K: usize = 5;

/// A (Disjoint-)KFVD instance: delete at most `budget` vertices outside
/// `forbidden` so that the rest is knot-free.
///
/// With `sink_forbidden` set, forbidden vertices must also not end up as
/// sinks of the residual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointInstance {
    graph: Digraph,
    budget: usize,
    forbidden: VertexSet,
    dfvs: Option<Vec<Vertex>>,
    sink_forbidden: bool,
}

impl DisjointInstance {
    /// Plain KFVD instance. Budgets above `n` are capped to `n`.
    pub fn new(graph: Digraph, budget: usize) -> Self {
        let budget = budget.min(graph.n());
        DisjointInstance {
            graph,
            budget,
            forbidden: VertexSet::new(),
            dfvs: None,
            sink_forbidden: false,
        }
    }

    pub fn with_forbidden(mut self, forbidden: VertexSet) -> Result<Self> {
        if let Some(&v) = forbidden.iter().find(|&&v| v >= self.graph.n()) {
            return Err(Error::ForbiddenOutOfRange(v));
        }
        self.forbidden = forbidden;
        Ok(self)
    }

    /// Attaches a designated directed feedback vertex set, checking that its
    /// removal leaves the graph acyclic.
    pub fn with_dfvs(mut self, dfvs: Vec<Vertex>) -> Result<Self> {
        for &v in &dfvs {
            self.graph.check_vertex(v)?;
        }
        if let Some(cycle) = surviving_cycle(&self.graph, &dfvs) {
            return Err(Error::NotAFeedbackSet(cycle));
        }
        let mut dfvs = dfvs;
        dfvs.sort_unstable();
        dfvs.dedup();
        self.dfvs = Some(dfvs);
        Ok(self)
    }

    pub fn with_sink_forbidden(mut self, flag: bool) -> Self {
        self.sink_forbidden = flag;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget.min(self.graph.n());
        self
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn forbidden(&self) -> &VertexSet {
        &self.forbidden
    }

    pub fn dfvs(&self) -> Option<&[Vertex]> {
        self.dfvs.as_deref()
    }

    pub fn sink_forbidden(&self) -> bool {
        self.sink_forbidden
    }
}

/// Returns the vertices of some strongly connected component of size ≥ 2 of
/// `g - removed`, in original ids, or `None` when `g - removed` is acyclic.
pub(crate) fn surviving_cycle(g: &Digraph, removed: &[Vertex]) -> Option<Vec<Vertex>> {
    let (h, map) = g.remove_vertices(removed);
    let scc = strongly_connected_components(&h);
    scc.components
        .iter()
        .find(|c| c.len() >= 2)
        .map(|c| c.iter().map(|&v| map.old_id(v)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
}

impl Status {
    pub fn is_yes(self) -> bool {
        self == Status::Yes
    }
}

impl From<bool> for Status {
    fn from(b: bool) -> Self {
        if b {
            Status::Yes
        } else {
            Status::No
        }
    }
}

/// Which solver produced a [`Solution`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    BruteForce,
    TreewidthDp,
    DfvKwidth,
    DfvPath,
    TuringKernel,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::BruteForce,
        Algorithm::TreewidthDp,
        Algorithm::DfvKwidth,
        Algorithm::DfvPath,
        Algorithm::TuringKernel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::BruteForce => "bruteforce",
            Algorithm::TreewidthDp => "tw-dp",
            Algorithm::DfvKwidth => "dfv-kwidth",
            Algorithm::DfvPath => "dfv-path",
            Algorithm::TuringKernel => "turing-kernel",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}`"))
    }
}

impl Serialize for Algorithm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for Algorithm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of a solver run. For `Yes`, `deleted` is a valid deletion set and
/// `sinks` the sinks of the residual graph; for `No` both are empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub status: Status,
    pub deleted: Vec<Vertex>,
    pub sinks: Vec<Vertex>,
    pub algorithm: Algorithm,
}

impl Solution {
    pub fn yes(g: &Digraph, deleted: impl IntoIterator<Item = Vertex>, algorithm: Algorithm) -> Self {
        let mut deleted: Vec<Vertex> = deleted.into_iter().collect();
        deleted.sort_unstable();
        deleted.dedup();
        let sinks = residual_sinks(g, &deleted);
        Solution {
            status: Status::Yes,
            deleted,
            sinks,
            algorithm,
        }
    }

    pub fn no(algorithm: Algorithm) -> Self {
        Solution {
            status: Status::No,
            deleted: Vec::new(),
            sinks: Vec::new(),
            algorithm,
        }
    }

    pub fn size(&self) -> usize {
        self.deleted.len()
    }
}

/// Sinks of `g` minus `deleted`, in ids of `g`.
pub fn residual_sinks(g: &Digraph, deleted: &[Vertex]) -> Vec<Vertex> {
    let mut mask = vec![false; g.n()];
    for &v in deleted {
        mask[v] = true;
    }
    (0..g.n())
        .filter(|&v| !mask[v] && g.out_neighbors(v).iter().all(|&w| mask[w]))
        .collect()
}

/// Knot-freeness of `g` minus the vertices flagged in `deleted`, computed in
/// place without building the residual graph. `no_sink`, when given, flags
/// vertices that must not be sinks of the residual graph.
pub(crate) struct ResidualCheck {
    seen: Vec<bool>,
    queue: VecDeque<Vertex>,
}

impl ResidualCheck {
    pub(crate) fn new(n: usize) -> Self {
        ResidualCheck {
            seen: vec![false; n],
            queue: VecDeque::with_capacity(n),
        }
    }

    pub(crate) fn knot_free(&mut self, g: &Digraph, deleted: &[bool], no_sink: Option<&[bool]>) -> bool {
        let n = g.n();
        self.seen.clear();
        self.seen.resize(n, false);
        self.queue.clear();
        for v in 0..n {
            if deleted[v] {
                continue;
            }
            if g.out_neighbors(v).iter().all(|&w| deleted[w]) {
                if no_sink.is_some_and(|m| m[v]) {
                    return false;
                }
                self.seen[v] = true;
                self.queue.push_back(v);
            }
        }
        while let Some(u) = self.queue.pop_front() {
            for &w in g.in_neighbors(u) {
                if !deleted[w] && !self.seen[w] {
                    self.seen[w] = true;
                    self.queue.push_back(w);
                }
            }
        }
        (0..n).all(|v| deleted[v] || self.seen[v])
    }
}

/// Result of [`verify_solution`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub sinks: Vec<Vertex>,
}

/// Checks `|S| ≤ k`, `S ∩ X = ∅`, knot-freeness of the residual graph and,
/// when the instance forbids it, that no forbidden vertex is a residual sink.
pub fn verify_solution(inst: &DisjointInstance, deleted: &VertexSet) -> Verdict {
    let g = inst.graph();
    let list: Vec<Vertex> = deleted.iter().copied().collect();
    let sinks = residual_sinks(g, &list);
    let valid = deleted.len() <= inst.budget()
        && deleted.iter().all(|v| *v < g.n() && !inst.forbidden().contains(v))
        && {
            let mut mask = vec![false; g.n()];
            for &v in deleted {
                mask[v] = true;
            }
            let no_sink = inst.sink_forbidden().then(|| {
                let mut m = vec![false; g.n()];
                for &x in inst.forbidden() {
                    m[x] = true;
                }
                m
            });
            ResidualCheck::new(g.n()).knot_free(g, &mask, no_sink.as_deref())
        };
    Verdict { valid, sinks }
}

/// Visits the valid deletion sets of exactly `size` vertices in
/// lexicographic order until `visit` returns `false`.
fn for_each_valid_of_size(inst: &DisjointInstance, size: usize, mut visit: impl FnMut(&[Vertex]) -> bool) {
    let g = inst.graph();
    let n = g.n();
    let candidates: Vec<Vertex> = (0..n).filter(|v| !inst.forbidden().contains(v)).collect();
    let no_sink: Option<Vec<bool>> = inst.sink_forbidden().then(|| {
        let mut m = vec![false; n];
        for &x in inst.forbidden() {
            m[x] = true;
        }
        m
    });
    let mut check = ResidualCheck::new(n);
    let mut mask = vec![false; n];
    for combo in candidates.iter().copied().combinations(size) {
        for &v in &combo {
            mask[v] = true;
        }
        let ok = check.knot_free(g, &mask, no_sink.as_deref());
        for &v in &combo {
            mask[v] = false;
        }
        if ok && !visit(&combo) {
            return;
        }
    }
}

/// Exhaustive minimum: tries sizes `0, 1, …, k` and, within a size, subsets
/// of `V ∖ X` in lexicographic order. The first valid set found is returned.
pub fn brute_force_min(inst: &DisjointInstance) -> Solution {
    let n = inst.graph().n();
    if n > BRUTE_FORCE_SOFT_MAX_N {
        log::warn!("brute force on n = {n} exceeds its soft limit {BRUTE_FORCE_SOFT_MAX_N}");
    }
    let max = inst.budget().min(n - inst.forbidden().len().min(n));
    for size in 0..=max {
        if size == BRUTE_FORCE_SOFT_MAX_K + 1 {
            log::warn!("brute force searching past {BRUTE_FORCE_SOFT_MAX_K} deletions (n = {n})");
        }
        let mut found = None;
        for_each_valid_of_size(inst, size, |s| {
            found = Some(s.to_vec());
            false
        });
        if let Some(s) = found {
            return Solution::yes(inst.graph(), s, Algorithm::BruteForce);
        }
    }
    Solution::no(Algorithm::BruteForce)
}

/// Minimum KFVD size of `g` (no budget, no forbidden set) with the
/// lexicographically first optimal witness.
pub fn brute_force_optimum(g: &Digraph) -> (usize, Vec<Vertex>) {
    let sol = brute_force_min(&DisjointInstance::new(g.clone(), g.n()));
    debug_assert!(sol.status.is_yes());
    (sol.deleted.len(), sol.deleted)
}

/// Every valid deletion set of minimum size (empty when the instance is a
/// no-instance).
pub fn all_optimal_solutions(inst: &DisjointInstance) -> Vec<Vec<Vertex>> {
    let n = inst.graph().n();
    let max = inst.budget().min(n - inst.forbidden().len().min(n));
    for size in 0..=max {
        let mut all = Vec::new();
        for_each_valid_of_size(inst, size, |s| {
            all.push(s.to_vec());
            true
        });
        if !all.is_empty() {
            return all;
        }
    }
    Vec::new()
}

/// Drops deleted vertices that no residual sink points to, one at a time
/// (smallest id first), until every deleted vertex is an out-neighbor of a
/// sink. The forbidden set is ignored.
pub fn shrink_solution(inst: &DisjointInstance, deleted: &VertexSet) -> Result<VertexSet> {
    let g = inst.graph();
    let relaxed = DisjointInstance::new(g.clone(), g.n());
    if !verify_solution(&relaxed, deleted).valid {
        return Err(Error::InvalidSolution);
    }
    let mut current = deleted.clone();
    loop {
        let list: Vec<Vertex> = current.iter().copied().collect();
        let sinks = residual_sinks(g, &list);
        let sink_out: VertexSet = sinks
            .iter()
            .flat_map(|&z| g.out_neighbors(z).iter().copied())
            .collect();
        match current.iter().copied().find(|s| !sink_out.contains(s)) {
            Some(s) => {
                current.remove(&s);
                debug_assert!(verify_solution(&relaxed, &current).valid);
            }
            None => return Ok(current),
        }
    }
}
