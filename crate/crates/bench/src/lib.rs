//! Instance families shared by the benchmarks.

use kfvd::generators::gen_random;
use kfvd::metrics::min_dfvs;
use kfvd::{Digraph, DisjointInstance};

/// `pairs` digons `a_i <-> b_i` chained by `b_i -> a_{i+1}`; the last digon
/// is the only knot, so the optimum is 1. Treewidth 1.
pub fn digon_chain(pairs: usize) -> Digraph {
    let mut arcs = Vec::with_capacity(3 * pairs);
    for i in 0..pairs {
        arcs.push((2 * i, 2 * i + 1));
        arcs.push((2 * i + 1, 2 * i));
        if i + 1 < pairs {
            arcs.push((2 * i + 1, 2 * i + 2));
        }
    }
    Digraph::from_arcs(2 * pairs, arcs).expect("valid arcs")
}

/// Seeded random instances with a minimum feedback vertex set attached.
pub fn random_with_dfvs(count: u64, n: usize, p: f64, k: usize) -> Vec<DisjointInstance> {
    (0..count)
        .map(|s| {
            let g = gen_random(n, p, s).expect("valid probability");
            let f = min_dfvs(&g, n).expect("unbounded search");
            DisjointInstance::new(g, k).with_dfvs(f).expect("minimum dfvs")
        })
        .collect()
}
