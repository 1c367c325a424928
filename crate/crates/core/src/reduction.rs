//! The two safe reduction rules and their exhaustive application.
//!
//! Rule 1 removes `A[v]` for a vertex `v` forming an SCC on its own. Rule 2
//! removes `A[U]` for an SCC `U` with more than `k` out-neighbors outside it.
//! Neither touches the budget. Every removed set is closed under taking
//! ancestors, so the strongly connected components of what remains are
//! exactly the untouched components of the input.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::{strongly_connected_components, Digraph, IdMap, SccInfo, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    #[serde(rename = "singleton-scc")]
    SingletonScc,
    #[serde(rename = "heavy-scc")]
    HeavyScc,
}

impl Rule {
    pub fn id(self) -> u8 {
        match self {
            Rule::SingletonScc => 1,
            Rule::HeavyScc => 2,
        }
    }
}

/// One rule application; `removed` holds ids of the original graph, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub rule: Rule,
    pub removed: Vec<Vertex>,
}

/// Audit log of a reduction run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    /// The reduced graph.
    pub graph: Digraph,
    /// Maps ids of `graph` back to the original graph.
    pub map: IdMap,
    /// Budget, identical to the input budget.
    pub k: usize,
}

impl ReductionTrace {
    /// All removed vertices, in original ids, sorted.
    pub fn removed(&self) -> Vec<Vertex> {
        let mut all: Vec<Vertex> = self.steps.iter().flat_map(|s| s.removed.iter().copied()).collect();
        all.sort_unstable();
        all
    }

    /// Re-applies the recorded removals to `original`.
    pub fn replay(&self, original: &Digraph) -> Digraph {
        original.remove_vertices(&self.removed()).0
    }
}

/// Incremental state: a removal mask over the input graph, kept closed
/// under ancestors.
struct Reducer<'a> {
    g: &'a Digraph,
    k: usize,
    scc: SccInfo,
    removed: Vec<bool>,
    steps: Vec<ReductionStep>,
}

impl<'a> Reducer<'a> {
    fn new(g: &'a Digraph, k: usize) -> Self {
        Reducer {
            g,
            k,
            scc: strongly_connected_components(g),
            removed: vec![false; g.n()],
            steps: Vec::new(),
        }
    }

    /// Removes `A[seeds]` in the current graph. Since the removed set is
    /// ancestor-closed, the search can stop at already removed vertices.
    fn remove_ancestors(&mut self, rule: Rule, seeds: &[Vertex]) {
        let mut newly = Vec::new();
        let mut queue = VecDeque::new();
        for &s in seeds {
            if !self.removed[s] {
                self.removed[s] = true;
                newly.push(s);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in self.g.in_neighbors(u) {
                if !self.removed[w] {
                    self.removed[w] = true;
                    newly.push(w);
                    queue.push_back(w);
                }
            }
        }
        newly.sort_unstable();
        self.steps.push(ReductionStep { rule, removed: newly });
    }

    fn alive_component(&self, c: usize) -> bool {
        !self.removed[self.scc.components[c][0]]
    }

    fn external_out_degree(&self, c: usize) -> usize {
        let mut seen: Vec<Vertex> = self.scc.components[c]
            .iter()
            .flat_map(|&v| self.g.out_neighbors(v).iter().copied())
            .filter(|&w| !self.removed[w] && self.scc.component_of[w] != c)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    fn apply_rule1_once(&mut self) -> bool {
        let hit = (0..self.scc.len()).find(|&c| self.scc.components[c].len() == 1 && self.alive_component(c));
        match hit {
            Some(c) => {
                let v = self.scc.components[c][0];
                self.remove_ancestors(Rule::SingletonScc, &[v]);
                true
            }
            None => false,
        }
    }

    fn apply_rule2_once(&mut self) -> bool {
        let hit = (0..self.scc.len()).find(|&c| self.alive_component(c) && self.external_out_degree(c) > self.k);
        match hit {
            Some(c) => {
                let members = self.scc.components[c].clone();
                self.remove_ancestors(Rule::HeavyScc, &members);
                true
            }
            None => false,
        }
    }

    fn finish(self) -> (Digraph, ReductionTrace) {
        let keep: Vec<bool> = self.removed.iter().map(|&r| !r).collect();
        let (graph, map) = self.g.induced_by_mask(&keep);
        let trace = ReductionTrace {
            steps: self.steps,
            graph: graph.clone(),
            map,
            k: self.k,
        };
        (graph, trace)
    }
}

/// One application of rule 1 (the first singleton SCC in reverse
/// topological order), or `None` when every SCC has size at least two.
pub fn rule_singleton_scc(g: &Digraph, k: usize) -> Option<(Digraph, ReductionTrace)> {
    let mut r = Reducer::new(g, k);
    r.apply_rule1_once().then(|| r.finish())
}

/// One application of rule 2, or `None` when every SCC has at most `k`
/// out-neighbors outside it.
pub fn rule_heavy_scc(g: &Digraph, k: usize) -> Option<(Digraph, ReductionTrace)> {
    let mut r = Reducer::new(g, k);
    r.apply_rule2_once().then(|| r.finish())
}

/// Rule 1 to fixpoint, then rule 2, repeated until neither applies.
pub fn exhaustive_reduce(g: &Digraph, k: usize) -> (Digraph, ReductionTrace) {
    let mut r = Reducer::new(g, k);
    loop {
        let mut changed = false;
        while r.apply_rule1_once() {
            changed = true;
        }
        while r.apply_rule2_once() {
            changed = true;
        }
        if !changed {
            break;
        }
    }
    r.finish()
}

/// True when neither rule applies to `(g, k)`.
pub fn is_reduced(g: &Digraph, k: usize) -> bool {
    let r = Reducer::new(g, k);
    (0..r.scc.len()).all(|c| r.scc.components[c].len() >= 2 && r.external_out_degree(c) <= k)
}
