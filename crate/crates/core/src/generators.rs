//! Instance factories: the hardness gadget built from a multicolored
//! independent set instance, seeded random digraphs and layered OR-model
//! wait-for snapshots.

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MisError {
    #[error("need at least one color class")]
    NoClasses,
    #[error("vertex {vertex} has class {class}, expected < {k}")]
    BadClass { vertex: usize, class: usize, k: usize },
    #[error("color class {0} is empty")]
    EmptyClass(usize),
    #[error("edge {0}-{1} is a loop or leaves the vertex range")]
    BadEdge(usize, usize),
    #[error("edge {0}-{1} joins two vertices of the same color class")]
    IntraClassEdge(usize, usize),
}

/// Multicolored independent set instance: an undirected graph whose vertices
/// are split into `k` color classes; edges join vertices of different classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MisInstance {
    n: usize,
    edges: Vec<(usize, usize)>,
    class_of: Vec<usize>,
    k: usize,
}

impl MisInstance {
    pub fn new(n: usize, edges: Vec<(usize, usize)>, class_of: Vec<usize>, k: usize) -> Result<Self, MisError> {
        if k == 0 {
            return Err(MisError::NoClasses);
        }
        assert_eq!(class_of.len(), n, "one class per vertex");
        for (v, &c) in class_of.iter().enumerate() {
            if c >= k {
                return Err(MisError::BadClass { vertex: v, class: c, k });
            }
        }
        for c in 0..k {
            if !class_of.contains(&c) {
                return Err(MisError::EmptyClass(c));
            }
        }
        let mut norm = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(MisError::BadEdge(u, v));
            }
            if class_of[u] == class_of[v] {
                return Err(MisError::IntraClassEdge(u, v));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        norm.dedup();
        Ok(MisInstance {
            n,
            edges: norm,
            class_of,
            k,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn class_of(&self, v: usize) -> usize {
        self.class_of[v]
    }

    pub fn class(&self, c: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.class_of[v] == c).collect()
    }

    /// Brute force: one vertex per class, pairwise non-adjacent. Returns the
    /// first such choice in lexicographic order.
    pub fn find_multicolored_is(&self) -> Option<Vec<usize>> {
        let classes: Vec<Vec<usize>> = (0..self.k).map(|c| self.class(c)).collect();
        classes
            .iter()
            .map(|c| c.iter().copied())
            .multi_cartesian_product()
            .find(|pick| self.is_independent(pick))
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| !(set.contains(&u) && set.contains(&v)))
    }
}

/// Where each part of a gadget ended up, by role.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetMap {
    /// `w_i` per independent-set vertex.
    pub w: Vec<Vertex>,
    /// `z_i` per independent-set vertex.
    pub z: Vec<Vertex>,
    /// `u_j` per color class.
    pub u: Vec<Vertex>,
    /// `(x^i_p, x^l_p)` per edge `e_p = {v_i, v_l}`, in edge order.
    pub x: Vec<(Vertex, Vertex)>,
}

impl GadgetMap {
    /// Independent-set vertices whose `z` vertex is deleted.
    pub fn selection_from_deletion(&self, deleted: &[Vertex]) -> Vec<usize> {
        (0..self.z.len())
            .filter(|&i| deleted.contains(&self.z[i]))
            .collect()
    }

    pub fn deletion_from_selection(&self, selection: &[usize]) -> VertexSet {
        selection.iter().map(|&i| self.z[i]).collect()
    }

    /// Vertices of the class block `Y_j = {w_i, z_i : v_i ∈ V^j} ∪ {u_j}`.
    pub fn class_block(&self, mis: &MisInstance, class: usize) -> Vec<Vertex> {
        let mut block: Vec<Vertex> = mis
            .class(class)
            .into_iter()
            .flat_map(|i| [self.w[i], self.z[i]])
            .collect();
        block.push(self.u[class]);
        block.sort_unstable();
        block
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gadget {
    pub graph: Digraph,
    pub budget: usize,
    pub map: GadgetMap,
}

/// Builds the KFVD instance whose budget-`k` answer equals the existence of
/// a multicolored independent set:
///
/// * a digon `w_i ↔ z_i` per vertex `v_i`;
/// * a vertex `u_j` per class, with `z_i ↔ u_j` and `u_j → w_i` for `v_i ∈ V^j`;
/// * a digon `x^i_p ↔ x^l_p` per edge `e_p = {v_i, v_l}`, with
///   `x^i_p → z_i` and `x^l_p → z_l`.
pub fn gen_mis_gadget(mis: &MisInstance) -> Gadget {
    let n = mis.n();
    let w: Vec<Vertex> = (0..n).map(|i| 2 * i).collect();
    let z: Vec<Vertex> = (0..n).map(|i| 2 * i + 1).collect();
    let u: Vec<Vertex> = (0..mis.k()).map(|j| 2 * n + j).collect();
    let base = 2 * n + mis.k();
    let x: Vec<(Vertex, Vertex)> = (0..mis.edges().len())
        .map(|p| (base + 2 * p, base + 2 * p + 1))
        .collect();
    let total = base + 2 * mis.edges().len();

    let mut labels = vec![String::new(); total];
    let mut arcs = Vec::new();
    for i in 0..n {
        labels[w[i]] = format!("w_{}", i + 1);
        labels[z[i]] = format!("z_{}", i + 1);
        let uj = u[mis.class_of(i)];
        arcs.extend([(w[i], z[i]), (z[i], w[i]), (z[i], uj), (uj, z[i]), (uj, w[i])]);
    }
    for (j, &uj) in u.iter().enumerate() {
        labels[uj] = format!("u_{}", j + 1);
    }
    for (p, (&(vi, vl), &(xi, xl))) in mis.edges().iter().zip(&x).enumerate() {
        labels[xi] = format!("x{}_{}", vi + 1, p + 1);
        labels[xl] = format!("x{}_{}", vl + 1, p + 1);
        arcs.extend([(xi, xl), (xl, xi), (xi, z[vi]), (xl, z[vl])]);
    }
    let graph = Digraph::from_arcs(total, arcs)
        .expect("gadget arcs are loop-free")
        .with_labels(labels)
        .expect("gadget labels are distinct");
    Gadget {
        graph,
        budget: mis.k(),
        map: GadgetMap { w, z, u, x },
    }
}

/// Every ordered pair `u ≠ v` becomes an arc independently with probability
/// `p`. Deterministic for a fixed seed.
pub fn gen_random(n: usize, p: f64, seed: u64) -> Result<Digraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("arc probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Ok(Digraph::from_arcs(n, arcs).expect("generated arcs are valid"))
}

/// Random multicolored independent set instance; every class gets at least
/// one vertex and every cross-class pair becomes an edge with probability `p`.
pub fn gen_random_mis(n: usize, k: usize, p: f64, seed: u64) -> Result<MisInstance> {
    if k == 0 || k > n {
        return Err(Error::Precondition(format!("need 1 ≤ k ≤ n, got k = {k}, n = {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Precondition(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut class_of: Vec<usize> = (0..n).map(|v| if v < k { v } else { rng.gen_range(0..k) }).collect();
    class_of.shuffle(&mut rng);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if class_of[u] != class_of[v] && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    MisInstance::new(n, edges, class_of, k).map_err(|e| Error::Precondition(e.to_string()))
}

/// Layered OR-model wait-for snapshot. Each process in layer `i` waits on one
/// or two processes of layer `i + 1`; processes of the last layer are active
/// (sinks). `back_arcs` extra waits point from a later layer back to an
/// earlier one, creating cycles and, possibly, deadlocked groups.
pub fn gen_waitfor(layers: &[usize], back_arcs: usize, seed: u64) -> Digraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut offset = Vec::with_capacity(layers.len());
    let mut labels = Vec::new();
    let mut total = 0;
    for (li, &size) in layers.iter().enumerate() {
        offset.push(total);
        for p in 0..size {
            labels.push(format!("p{}_{}", li + 1, p + 1));
        }
        total += size;
    }
    let mut arcs = Vec::new();
    for li in 0..layers.len().saturating_sub(1) {
        let next = layers[li + 1];
        if next == 0 {
            continue;
        }
        for p in 0..layers[li] {
            let waits = rng.gen_range(1..=next.min(2));
            let mut targets: Vec<usize> = (0..next).collect();
            targets.shuffle(&mut rng);
            for &t in targets.iter().take(waits) {
                arcs.push((offset[li] + p, offset[li + 1] + t));
            }
        }
    }
    let populated: Vec<usize> = (0..layers.len()).filter(|&l| layers[l] > 0).collect();
    if populated.len() >= 2 {
        for _ in 0..back_arcs {
            let a = rng.gen_range(0..populated.len() - 1);
            let b = rng.gen_range(a + 1..populated.len());
            let (early, late) = (populated[a], populated[b]);
            let from = offset[late] + rng.gen_range(0..layers[late]);
            let to = offset[early] + rng.gen_range(0..layers[early]);
            arcs.push((from, to));
        }
    }
    Digraph::from_arcs(total, arcs)
        .expect("layered arcs never form loops")
        .with_labels(labels)
        .expect("process labels are distinct")
}
