//! Dynamic program over a nice tree decomposition.
//!
//! A state labels each bag vertex as deleted (S), designated sink (Z),
//! released (F: reaches some designated sink in the partial graph minus S)
//! or blocked (B: not known to be released yet). It also records which bag
//! vertices reach which, inside the partial graph minus S. F and B are not
//! guessed: they follow from the reach relation, so the only choices made
//! are at introduce nodes (delete, sink or neither).
//!
//! A blocked vertex may be forgotten only if it reaches another surviving bag
//! vertex; everything it can still escape through lies in the bag. At the
//! empty root this forces every vertex to reach a designated sink.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Vertex, VertexSet};
use crate::oracle::{Algorithm, Solution};

use super::decomposition::{min_fill_decomposition, validate_td, TreeDecomposition};
use super::nice::{make_nice, NiceTreeDecomposition, NodeKind};

/// Bags are indexed by position; bit `i` refers to the `i`-th smallest
/// vertex of the bag.
pub const MAX_BAG: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct State {
    s: u64,
    z: u64,
    f: u64,
    /// Row `i` is the set of bag positions reachable from position `i`
    /// (reflexive); rows of deleted positions are empty.
    reach: Vec<u64>,
}

impl State {
    fn empty() -> Self {
        State {
            s: 0,
            z: 0,
            f: 0,
            reach: Vec::new(),
        }
    }

    /// Marks as released every surviving non-sink vertex reaching a sink or
    /// a released vertex.
    fn derive_released(&mut self) {
        let targets = self.f | self.z;
        for (i, row) in self.reach.iter().enumerate() {
            if row & targets != 0 {
                self.f |= 1 << i;
            }
        }
        self.f &= !(self.s | self.z);
    }
}

fn insert_bit(mask: u64, p: usize) -> u64 {
    let low = (1u64 << p) - 1;
    (mask & low) | ((mask & !low) << 1)
}

fn remove_bit(mask: u64, p: usize) -> u64 {
    let low = (1u64 << p) - 1;
    (mask & low) | ((mask >> 1) & !low)
}

fn close(reach: &mut [u64]) {
    let len = reach.len();
    for k in 0..len {
        let row_k = reach[k];
        for row in reach.iter_mut() {
            if *row >> k & 1 == 1 {
                *row |= row_k;
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
enum Back {
    Leaf,
    One(usize),
    Two(usize, usize),
}

struct Entry {
    state: State,
    cost: usize,
    back: Back,
}

#[derive(Default)]
struct Table {
    entries: Vec<Entry>,
    index: HashMap<State, usize>,
}

impl Table {
    fn offer(&mut self, state: State, cost: usize, back: Back, bound: usize) {
        if cost > bound {
            return;
        }
        match self.index.get(&state) {
            Some(&i) => {
                if cost < self.entries[i].cost {
                    self.entries[i].cost = cost;
                    self.entries[i].back = back;
                }
            }
            None => {
                self.index.insert(state.clone(), self.entries.len());
                self.entries.push(Entry { state, cost, back });
            }
        }
    }
}

/// Table statistics of one run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DpStats {
    pub nodes: usize,
    pub width: usize,
    pub max_states: usize,
    pub total_states: usize,
}

/// Result of a full run: the optimum (if within the bound) and a witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DpOutcome {
    pub optimum: Option<usize>,
    pub witness: Vec<Vertex>,
    pub stats: DpStats,
}

fn bag_masks(g: &Digraph, bag: &[Vertex], v: Vertex) -> (u64, u64) {
    let mut outs = 0;
    let mut ins = 0;
    for (i, &u) in bag.iter().enumerate() {
        if g.has_arc(v, u) {
            outs |= 1 << i;
        }
        if g.has_arc(u, v) {
            ins |= 1 << i;
        }
    }
    (outs, ins)
}

fn introduce(g: &Digraph, bag: &[Vertex], v: Vertex, child: &Table, out: &mut Table, budget: Option<usize>) {
    let bound = budget.unwrap_or(usize::MAX);
    let p = bag.binary_search(&v).expect("introduced vertex is in the bag");
    let (outs, ins) = bag_masks(g, bag, v);
    let bit = 1u64 << p;
    let sink_allowed = budget.is_none_or(|k| g.out_degree(v) <= k);
    for (ci, e) in child.entries.iter().enumerate() {
        let s = insert_bit(e.state.s, p);
        let z = insert_bit(e.state.z, p);
        let f = insert_bit(e.state.f, p);
        let mut reach: Vec<u64> = e.state.reach.iter().map(|&r| insert_bit(r, p)).collect();
        reach.insert(p, 0);
        let back = Back::One(ci);

        out.offer(
            State {
                s: s | bit,
                z,
                f,
                reach: reach.clone(),
            },
            e.cost + 1,
            back,
            bound,
        );

        // a designated sink pointing at v forces v's deletion
        if ins & z != 0 {
            continue;
        }
        let alive_ins = ins & !s;
        let alive_outs = outs & !s;
        let into: Vec<usize> = (0..bag.len()).filter(|&a| reach[a] & alive_ins != 0).collect();

        if sink_allowed && alive_outs == 0 {
            let mut r = reach.clone();
            r[p] = bit;
            for &a in &into {
                r[a] |= bit;
            }
            let mut st = State { s, z: z | bit, f, reach: r };
            st.derive_released();
            out.offer(st, e.cost, back, bound);
        }

        let mut from = bit;
        for w in (0..bag.len()).filter(|&w| alive_outs >> w & 1 == 1) {
            from |= reach[w];
        }
        let mut r = reach;
        r[p] = from;
        for &a in &into {
            r[a] |= from;
        }
        let mut st = State { s, z, f, reach: r };
        st.derive_released();
        out.offer(st, e.cost, back, bound);
    }
}

fn forget(bag_child: &[Vertex], v: Vertex, child: &Table, out: &mut Table, bound: usize) {
    let p = bag_child.binary_search(&v).expect("forgotten vertex is in the child bag");
    let bit = 1u64 << p;
    for (ci, e) in child.entries.iter().enumerate() {
        let st = &e.state;
        let blocked = st.s & bit == 0 && st.z & bit == 0 && st.f & bit == 0;
        if blocked && st.reach[p] & !bit == 0 {
            continue;
        }
        let mut reach: Vec<u64> = st.reach.iter().map(|&r| remove_bit(r, p)).collect();
        reach.remove(p);
        let next = State {
            s: remove_bit(st.s, p),
            z: remove_bit(st.z, p),
            f: remove_bit(st.f, p),
            reach,
        };
        out.offer(next, e.cost, Back::One(ci), bound);
    }
}

fn join(left: &Table, right: &Table, out: &mut Table, bound: usize) {
    let mut by_key: HashMap<(u64, u64), Vec<usize>> = HashMap::new();
    for (j, e) in right.entries.iter().enumerate() {
        by_key.entry((e.state.s, e.state.z)).or_default().push(j);
    }
    for (i, a) in left.entries.iter().enumerate() {
        let Some(partners) = by_key.get(&(a.state.s, a.state.z)) else {
            continue;
        };
        let shared = a.state.s.count_ones() as usize;
        for &j in partners {
            let b = &right.entries[j];
            let cost = a.cost + b.cost - shared;
            if cost > bound {
                continue;
            }
            let mut reach: Vec<u64> = a.state.reach.iter().zip(&b.state.reach).map(|(x, y)| x | y).collect();
            close(&mut reach);
            let mut st = State {
                s: a.state.s,
                z: a.state.z,
                f: a.state.f | b.state.f,
                reach,
            };
            st.derive_released();
            out.offer(st, cost, Back::Two(i, j), bound);
        }
    }
}

/// Runs the DP bottom-up. With `budget = Some(k)` states costing more than
/// `k` are dropped and vertices of out-degree above `k` are never sinks.
pub fn run(g: &Digraph, nice: &NiceTreeDecomposition, budget: Option<usize>) -> Result<DpOutcome> {
    if nice.width() + 1 > MAX_BAG {
        return Err(Error::Precondition(format!(
            "decomposition width {} exceeds the supported {}",
            nice.width(),
            MAX_BAG - 1
        )));
    }
    let bound = budget.unwrap_or(usize::MAX);
    let mut tables: Vec<Table> = Vec::with_capacity(nice.nodes.len());
    let mut stats = DpStats {
        nodes: nice.nodes.len(),
        width: nice.width(),
        ..DpStats::default()
    };
    for node in &nice.nodes {
        let mut table = Table::default();
        match node.kind {
            NodeKind::Leaf => table.offer(State::empty(), 0, Back::Leaf, bound),
            NodeKind::Introduce(v) => introduce(g, &node.bag, v, &tables[node.children[0]], &mut table, budget),
            NodeKind::Forget(v) => {
                let c = node.children[0];
                forget(&nice.nodes[c].bag, v, &tables[c], &mut table, bound)
            }
            NodeKind::Join => join(&tables[node.children[0]], &tables[node.children[1]], &mut table, bound),
        }
        stats.max_states = stats.max_states.max(table.entries.len());
        stats.total_states += table.entries.len();
        tables.push(table);
    }
    let root = &tables[nice.root];
    let Some(&ri) = root.index.get(&State::empty()) else {
        return Ok(DpOutcome {
            optimum: None,
            witness: Vec::new(),
            stats,
        });
    };
    let optimum = root.entries[ri].cost;

    let mut witness = VertexSet::new();
    let mut stack = vec![(nice.root, ri)];
    while let Some((t, ei)) = stack.pop() {
        let node = &nice.nodes[t];
        let entry = &tables[t].entries[ei];
        if let NodeKind::Introduce(v) = node.kind {
            let p = node.bag.binary_search(&v).unwrap();
            if entry.state.s >> p & 1 == 1 {
                witness.insert(v);
            }
        }
        match entry.back {
            Back::Leaf => {}
            Back::One(c) => stack.push((node.children[0], c)),
            Back::Two(a, b) => {
                stack.push((node.children[0], a));
                stack.push((node.children[1], b));
            }
        }
    }
    Ok(DpOutcome {
        optimum: Some(optimum),
        witness: witness.into_iter().collect(),
        stats,
    })
}

fn prepare(g: &Digraph, td: Option<&TreeDecomposition>) -> Result<NiceTreeDecomposition> {
    match td {
        Some(td) => {
            validate_td(g, td)?;
            Ok(make_nice(td))
        }
        None => Ok(make_nice(&min_fill_decomposition(g))),
    }
}

/// Decides `(g, k)` with the DP; without `td`, a min-fill decomposition is
/// used. The witness is checked before it is returned.
pub fn solve_treewidth(g: &Digraph, k: usize, td: Option<&TreeDecomposition>) -> Result<Solution> {
    let nice = prepare(g, td)?;
    let out = run(g, &nice, Some(k))?;
    match out.optimum {
        Some(cost) if cost <= k => {
            let sol = Solution::yes(g, out.witness, Algorithm::TreewidthDp);
            let inst = crate::oracle::DisjointInstance::new(g.clone(), k);
            if !crate::oracle::verify_solution(&inst, &sol.deleted.iter().copied().collect()).valid {
                return Err(Error::InvalidWitness("tree decomposition witness".into()));
            }
            Ok(sol)
        }
        _ => Ok(Solution::no(Algorithm::TreewidthDp)),
    }
}

/// Minimum deletion size and a witness, without any budget pruning; this is
/// the value stored at the root for the all-empty state.
pub fn treewidth_optimum(g: &Digraph, td: Option<&TreeDecomposition>) -> Result<(usize, Vec<Vertex>)> {
    let nice = prepare(g, td)?;
    let out = run(g, &nice, None)?;
    let opt = out.optimum.expect("deleting everything is always feasible");
    Ok((opt, out.witness))
}

/// Labelled bag state, for inspection and the local consistency test.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BagState {
    pub deleted: VertexSet,
    pub sinks: VertexSet,
    pub released: VertexSet,
    pub blocked: VertexSet,
    /// Pairs `(a, b)` with `a` reaching `b`; reflexive pairs may be omitted.
    pub reach: Vec<(Vertex, Vertex)>,
}

/// Local consistency of a labelled state on `bag`: the four parts partition
/// the bag, no sink has a surviving out-neighbor in the bag, no blocked
/// vertex has an arc or a recorded path to a sink or released vertex, no
/// released vertex is isolated from the rest of the bag and no sink has
/// out-degree above `k` in `g`.
pub fn consistent(g: &Digraph, bag: &[Vertex], state: &BagState, k: usize) -> bool {
    let parts = [&state.deleted, &state.sinks, &state.released, &state.blocked];
    let total: usize = parts.iter().map(|p| p.len()).sum();
    if total != bag.len() || !bag.iter().all(|v| parts.iter().filter(|p| p.contains(v)).count() == 1) {
        return false;
    }
    let alive = |v: &Vertex| !state.deleted.contains(v);
    for &z in &state.sinks {
        if g.out_degree(z) > k || bag.iter().any(|&w| w != z && alive(&w) && g.has_arc(z, w)) {
            return false;
        }
    }
    let good = |v: &Vertex| state.sinks.contains(v) || state.released.contains(v);
    for &b in &state.blocked {
        if bag.iter().any(|w| good(w) && g.has_arc(b, *w)) {
            return false;
        }
        if state.reach.iter().any(|(a, w)| *a == b && good(w)) {
            return false;
        }
    }
    true
}
