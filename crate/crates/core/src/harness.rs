//! Solver dispatch and cross-checking benchmark records.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::branching::{solve_dfv_kwidth, solve_dfv_path};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex, VertexSet};
use crate::io::graph_to_string;
use crate::kernel::{brute_force_oracle, turing_kernel_solve};
use crate::metrics::{k_width, longest_path, min_dfvs, Capped, Caps};
use crate::oracle::{brute_force_min, brute_force_optimum, Algorithm, DisjointInstance, Solution, Status};
use crate::treewidth::{min_fill_decomposition, solve_treewidth, treewidth_optimum, TreeDecomposition};

/// SHA-256 of the canonical text form of `g`, hex encoded.
pub fn instance_digest(g: &Digraph) -> String {
    hex::encode(Sha256::digest(graph_to_string(g).as_bytes()))
}

/// Largest graph on which the bench cross-checks optima exhaustively.
pub const EXHAUSTIVE_OPTIMUM_LIMIT: usize = 20;

/// Optional inputs some solvers need.
#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Feedback vertex set for the branching solvers and the Turing kernel.
    /// When absent a minimum one is searched for, up to `caps.dfv_limit`.
    pub dfvs: Option<Vec<Vertex>>,
    pub td: Option<TreeDecomposition>,
    pub caps: Caps,
}

#[derive(Clone, Debug)]
pub struct SolveOutput {
    pub solution: Solution,
    pub kernel_sizes: Option<Vec<usize>>,
}

fn feedback_set(g: &Digraph, opts: &SolveOptions) -> Result<Vec<Vertex>> {
    match &opts.dfvs {
        Some(s) => Ok(s.clone()),
        None => min_dfvs(g, opts.caps.dfv_limit)
            .ok_or_else(|| Error::Precondition(format!("no feedback vertex set of size ≤ {}", opts.caps.dfv_limit))),
    }
}

/// Runs one solver on `(g, k)`.
pub fn solve(algo: Algorithm, g: &Digraph, k: usize, opts: &SolveOptions) -> Result<SolveOutput> {
    let plain = |solution| SolveOutput {
        solution,
        kernel_sizes: None,
    };
    match algo {
        Algorithm::BruteForce => Ok(plain(brute_force_min(&DisjointInstance::new(g.clone(), k)))),
        Algorithm::TreewidthDp => solve_treewidth(g, k, opts.td.as_ref()).map(plain),
        Algorithm::DfvKwidth | Algorithm::DfvPath => {
            let inst = DisjointInstance::new(g.clone(), k).with_dfvs(feedback_set(g, opts)?)?;
            let sol = if algo == Algorithm::DfvKwidth {
                solve_dfv_kwidth(&inst)?
            } else {
                solve_dfv_path(&inst)?
            };
            Ok(plain(sol))
        }
        Algorithm::TuringKernel => {
            let f: VertexSet = feedback_set(g, opts)?.into_iter().collect();
            let out = turing_kernel_solve(g, &f, k, &mut brute_force_oracle)?;
            Ok(SolveOutput {
                solution: out.solution,
                kernel_sizes: Some(out.kernel_sizes),
            })
        }
    }
}

/// Structural parameters recorded alongside a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunParams {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub dfv: Option<usize>,
    pub kwidth: Capped,
    pub longest_path: Capped,
    pub tw: Option<usize>,
}

impl RunParams {
    pub fn compute(g: &Digraph, k: usize, caps: Caps) -> Self {
        RunParams {
            k,
            n: g.n(),
            m: g.arc_count(),
            dfv: min_dfvs(g, caps.dfv_limit).map(|s| s.len()),
            kwidth: k_width(g, caps.kwidth),
            longest_path: longest_path(g, caps.longest_path),
            tw: Some(min_fill_decomposition(g).width()),
        }
    }
}

/// One line of the results file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub digest: String,
    pub algorithm: Algorithm,
    /// `None` when the solver refused the instance.
    pub status: Option<Status>,
    pub size: Option<usize>,
    pub wall_us: u64,
    pub params: RunParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_sizes: Option<Vec<usize>>,
}

/// Every applicable solver run on one instance, plus the cross-check.
#[derive(Clone, Debug)]
pub struct BenchResult {
    pub records: Vec<RunRecord>,
    /// Human-readable disagreements; empty when all solvers concur.
    pub disagreements: Vec<String>,
}

/// Runs all algorithms on `(g, k)` and checks that their statuses agree and
/// that the tree-decomposition optimum equals the exhaustive one.
/// Precondition failures are recorded, not treated as disagreement.
pub fn bench_instance(g: &Digraph, k: usize, seed: Option<u64>, opts: &SolveOptions) -> BenchResult {
    let digest = instance_digest(g);
    let params = RunParams::compute(g, k, opts.caps);
    let mut records = Vec::new();
    for algo in Algorithm::ALL {
        let start = Instant::now();
        let out = solve(algo, g, k, opts);
        let wall_us = start.elapsed().as_micros() as u64;
        let mut rec = RunRecord {
            digest: digest.clone(),
            algorithm: algo,
            status: None,
            size: None,
            wall_us,
            params: params.clone(),
            seed,
            error: None,
            kernel_sizes: None,
        };
        match out {
            Ok(o) => {
                rec.status = Some(o.solution.status);
                rec.size = o.solution.status.is_yes().then(|| o.solution.size());
                rec.kernel_sizes = o.kernel_sizes;
            }
            Err(e) => rec.error = Some(e.to_string()),
        }
        records.push(rec);
    }

    let mut disagreements = Vec::new();
    let decided: Vec<&RunRecord> = records.iter().filter(|r| r.status.is_some()).collect();
    if let Some(first) = decided.first() {
        for r in &decided[1..] {
            if r.status != first.status {
                disagreements.push(format!(
                    "{}: {} says {:?}, {} says {:?}",
                    digest, first.algorithm, first.status, r.algorithm, r.status
                ));
            }
        }
    }
    for r in &records {
        if let Some(e) = &r.error {
            if !e.starts_with("precondition unmet") {
                disagreements.push(format!("{digest}: {} failed: {e}", r.algorithm));
            }
        }
    }
    if g.n() > EXHAUSTIVE_OPTIMUM_LIMIT {
        return BenchResult { records, disagreements };
    }
    if let Ok((tw_opt, _)) = treewidth_optimum(g, opts.td.as_ref()) {
        let (bf_opt, _) = brute_force_optimum(g);
        if tw_opt != bf_opt {
            disagreements.push(format!("{digest}: tw-dp optimum {tw_opt}, exhaustive optimum {bf_opt}"));
        }
    }
    BenchResult { records, disagreements }
}
