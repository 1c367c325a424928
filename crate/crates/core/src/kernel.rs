//! Turing kernel for instances whose vertex set splits into a feedback set
//! `F` and a part `R` that induces a DAG with a Hamiltonian path.
//!
//! An optimal solution leaves at most one sink on that path. For each guess
//! of where that sink sits, vertices of `R` that are not out-neighbors of a
//! low-degree `F` vertex are bypassed, leaving at most `|F|(k+1)+1` vertices
//! for the oracle.

use crate::error::{Error, Result};
use crate::graph::{bypass_loops, bypass_vertices, Digraph, IdMap, Vertex, VertexSet};
use crate::metrics::{is_dag_with_ham_path, topological_order};
use crate::oracle::{brute_force_min, residual_sinks, verify_solution, Algorithm, DisjointInstance, Solution};

/// Whether the sinks left by deleting `deleted` meet `path` at most once.
pub fn check_single_sink_on_path(g: &Digraph, deleted: &[Vertex], path: &[Vertex]) -> bool {
    residual_sinks(g, deleted).iter().filter(|z| path.contains(z)).count() <= 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelizedInstance {
    /// The bypassed graph, followed by any guard vertices.
    pub graph: Digraph,
    /// Maps the non-guard kernel ids to ids of the input graph.
    pub map: IdMap,
    /// `F` vertices with at most `k` out-neighbors in `R`.
    pub f_small: VertexSet,
    pub f_large: VertexSet,
    /// `R ∩ N⁺(F_{≤k})`, kept.
    pub kept: VertexSet,
    /// `R ∖ kept`, bypassed.
    pub bypassed: VertexSet,
    /// Vertices whose dropped bypass loop was replaced by guard digons,
    /// with the number of guards each received.
    pub guards: Vec<(Vertex, usize)>,
    /// Vertices left with no out-arc once their loop is dropped; when
    /// non-empty no solution avoids `R` with its sinks.
    pub stranded: VertexSet,
}

impl KernelizedInstance {
    /// Maps a deletion set of the kernel back to the input graph, ignoring
    /// guard vertices.
    pub fn lift(&self, deleted: &[Vertex]) -> VertexSet {
        deleted
            .iter()
            .filter(|&&v| v < self.map.len())
            .map(|&v| self.map.old_id(v))
            .collect()
    }
}

/// Bypasses every vertex of `r` that no `F` vertex of out-degree at most
/// `k` into `r` points to.
///
/// A vertex on a cycle through bypassed vertices only would get a loop; it
/// lies in `F_{>k}`, so no budget-`k` solution makes it a sink, yet dropping
/// the loop could let it become one. Such a vertex gets enough digon
/// partners that turning it into a sink costs more than `k`.
pub fn kernelize(g: &Digraph, f: &VertexSet, r: &VertexSet, k: usize) -> Result<KernelizedInstance> {
    if f.iter().chain(r).any(|&v| v >= g.n()) || f.len() + r.len() != g.n() || f.intersection(r).next().is_some() {
        return Err(Error::Precondition("F and R must partition the vertex set".into()));
    }
    if topological_order(&g.induced_subgraph(r).0).is_none() {
        return Err(Error::Precondition("R does not induce an acyclic graph".into()));
    }
    let into_r = |v: Vertex| g.out_neighbors(v).iter().filter(|w| r.contains(w)).count();
    let (f_small, f_large): (VertexSet, VertexSet) = f.iter().partition(|&&v| into_r(v) <= k);
    let kept: VertexSet = f_small
        .iter()
        .flat_map(|&v| g.out_neighbors(v).iter().copied())
        .filter(|w| r.contains(w))
        .collect();
    let bypassed: VertexSet = r.difference(&kept).copied().collect();
    let (bypass_graph, map) = bypass_vertices(g, &bypassed);

    let mut guards = Vec::new();
    let mut stranded = VertexSet::new();
    for u in bypass_loops(g, &bypassed) {
        debug_assert!(f_large.contains(&u));
        let d = bypass_graph.out_degree(map.new_id(u).expect("loop vertices are kept"));
        if d == 0 {
            stranded.insert(u);
        } else if d <= k {
            guards.push((u, k + 1 - d));
        }
    }
    let graph = if guards.is_empty() {
        bypass_graph
    } else {
        let mut arcs: Vec<(Vertex, Vertex)> = bypass_graph.arcs().collect();
        let mut labels = bypass_graph.labels().to_vec();
        for &(u, count) in &guards {
            let nu = map.new_id(u).unwrap();
            for j in 0..count {
                let x = labels.len();
                labels.push(format!("{}~guard{j}", g.label(u)));
                arcs.extend([(nu, x), (x, nu)]);
            }
        }
        let plain = Digraph::from_arcs(labels.len(), arcs)?;
        plain.clone().with_labels(labels).unwrap_or(plain)
    };
    Ok(KernelizedInstance {
        graph,
        map,
        f_small,
        f_large,
        kept,
        bypassed,
        guards,
        stranded,
    })
}

/// Solver for a kernel: returns a deletion set of size at most `k`, in
/// kernel ids, or `None`.
pub type KernelOracle<'a> = dyn FnMut(&Digraph, usize) -> Result<Option<Vec<Vertex>>> + 'a;

/// The default kernel oracle: exhaustive search.
pub fn brute_force_oracle(g: &Digraph, k: usize) -> Result<Option<Vec<Vertex>>> {
    let sol = brute_force_min(&DisjointInstance::new(g.clone(), k));
    Ok(sol.status.is_yes().then_some(sol.deleted))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringOutcome {
    pub solution: Solution,
    /// Vertex count of each kernel handed to the oracle, in call order.
    pub kernel_sizes: Vec<usize>,
    /// `|F|(k+1)+1`.
    pub size_bound: usize,
}

/// Guesses the sink on the Hamiltonian path `r_1 … r_m` of `R = V ∖ F`:
/// for `i < m`, `r_i` is made a sink (its out-neighbors deleted) and joins
/// `F`; the last call moves `r_m` to `F` without forcing it, which also
/// covers solutions leaving no sink on the path. Each resulting instance is
/// kernelized and handed to `oracle`; the answer is yes iff some call is.
/// Guesses whose kernel strands a vertex are skipped without a call.
pub fn turing_kernel_solve(g: &Digraph, f: &VertexSet, k: usize, oracle: &mut KernelOracle<'_>) -> Result<TuringOutcome> {
    if let Some(&v) = f.iter().find(|&&v| v >= g.n()) {
        return Err(Error::ForbiddenOutOfRange(v));
    }
    let r: VertexSet = g.vertices().filter(|v| !f.contains(v)).collect();
    let path = is_dag_with_ham_path(g, &r)
        .ok_or_else(|| Error::Precondition("V ∖ F is not a DAG with a Hamiltonian path".into()))?;
    let size_bound = f.len() * (k + 1) + 1;
    let inst = DisjointInstance::new(g.clone(), k);
    let mut kernel_sizes = Vec::new();
    let mut found: Option<Vec<Vertex>> = None;

    let mut guesses: Vec<(Option<Vertex>, VertexSet)> = Vec::new();
    if path.is_empty() {
        guesses.push((None, VertexSet::new()));
    }
    for (i, &ri) in path.iter().enumerate() {
        let forced: VertexSet = if i + 1 < path.len() {
            g.out_neighbors(ri).iter().copied().collect()
        } else {
            VertexSet::new()
        };
        guesses.push((Some(ri), forced));
    }

    for (guess, forced) in guesses {
        if forced.len() > k {
            continue;
        }
        let budget = k - forced.len();
        let (h, to_g) = g.remove_vertices(&forced);
        let mut fh: VertexSet = f.iter().filter_map(|&v| to_g.new_id(v)).collect();
        if let Some(ri) = guess {
            fh.insert(to_g.new_id(ri).expect("a sink is not its own out-neighbor"));
        }
        let rh: VertexSet = h.vertices().filter(|v| !fh.contains(v)).collect();
        let kernel = kernelize(&h, &fh, &rh, budget)?;
        if !kernel.stranded.is_empty() {
            continue;
        }
        kernel_sizes.push(kernel.graph.n());
        if kernel.graph.n() > size_bound {
            log::warn!("kernel of {} vertices exceeds the bound {size_bound}", kernel.graph.n());
        }
        if found.is_some() {
            continue;
        }
        if let Some(local) = oracle(&kernel.graph, budget)? {
            let mut s: VertexSet = forced.clone();
            s.extend(kernel.lift(&local).into_iter().map(|v| to_g.old_id(v)));
            if !verify_solution(&inst, &s).valid {
                return Err(Error::InvalidWitness(format!("kernel answer {s:?} is not a solution")));
            }
            found = Some(s.into_iter().collect());
        }
    }
    let solution = match found {
        Some(s) => Solution::yes(g, s, Algorithm::TuringKernel),
        None => Solution::no(Algorithm::TuringKernel),
    };
    Ok(TuringOutcome {
        solution,
        kernel_sizes,
        size_bound,
    })
}
