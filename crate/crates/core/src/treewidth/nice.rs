use crate::graph::Vertex;

use super::decomposition::TreeDecomposition;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(Vertex),
    Forget(Vertex),
    Join,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NodeKind,
    /// Sorted ascending.
    pub bag: Vec<Vertex>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition. Children always precede their parent in
/// `nodes`, so evaluating in index order is a valid bottom-up pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn count(&self, pred: impl Fn(NodeKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(n.kind)).count()
    }

    /// Checks the structural invariants of a nice decomposition.
    pub fn is_well_formed(&self) -> bool {
        let ok_node = |i: usize, node: &NiceNode| {
            if node.children.iter().any(|&c| c >= i) || !node.bag.windows(2).all(|w| w[0] < w[1]) {
                return false;
            }
            let child = |j: usize| &self.nodes[node.children[j]].bag;
            match (node.kind, node.children.len()) {
                (NodeKind::Leaf, 0) => node.bag.is_empty(),
                (NodeKind::Introduce(v), 1) => {
                    node.bag.contains(&v) && child(0).len() + 1 == node.bag.len() && child(0).iter().all(|u| node.bag.contains(u) && *u != v)
                }
                (NodeKind::Forget(v), 1) => {
                    !node.bag.contains(&v) && node.bag.len() + 1 == child(0).len() && node.bag.iter().all(|u| child(0).contains(u)) && child(0).contains(&v)
                }
                (NodeKind::Join, 2) => child(0) == &node.bag && child(1) == &node.bag,
                _ => false,
            }
        };
        self.nodes.iter().enumerate().all(|(i, n)| ok_node(i, n))
            && self.root + 1 == self.nodes.len()
            && self.nodes[self.root].bag.is_empty()
    }
}

struct Builder {
    nodes: Vec<NiceNode>,
}

impl Builder {
    fn push(&mut self, kind: NodeKind, bag: Vec<Vertex>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Forgets `from ∖ to`, then introduces `to ∖ from`, on top of `node`.
    fn transition(&mut self, mut node: usize, to: &[Vertex]) -> usize {
        let from = self.nodes[node].bag.clone();
        let mut bag = from.clone();
        for v in from.iter().filter(|v| to.binary_search(v).is_err()) {
            bag.retain(|u| u != v);
            node = self.push(NodeKind::Forget(*v), bag.clone(), vec![node]);
        }
        for &v in to.iter().filter(|v| from.binary_search(v).is_err()) {
            let pos = bag.binary_search(&v).unwrap_err();
            bag.insert(pos, v);
            node = self.push(NodeKind::Introduce(v), bag.clone(), vec![node]);
        }
        node
    }
}

/// Converts a decomposition into nice form of the same width, rooted at a
/// tree leaf so that path decompositions produce no join nodes.
pub fn make_nice(td: &TreeDecomposition) -> NiceTreeDecomposition {
    let mut b = Builder { nodes: Vec::new() };
    if td.bags.is_empty() {
        let root = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
        return NiceTreeDecomposition { nodes: b.nodes, root };
    }
    let bags: Vec<Vec<Vertex>> = td
        .bags
        .iter()
        .map(|bag| {
            let mut s = bag.clone();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    let adj = td.tree_adjacency();
    let start = (0..bags.len()).find(|&i| adj[i].len() <= 1).unwrap_or(0);

    // iterative post-order over the decomposition tree
    let mut parent = vec![usize::MAX; bags.len()];
    let mut order = Vec::with_capacity(bags.len());
    let mut stack = vec![start];
    parent[start] = start;
    while let Some(t) = stack.pop() {
        order.push(t);
        for &c in &adj[t] {
            if parent[c] == usize::MAX {
                parent[c] = t;
                stack.push(c);
            }
        }
    }
    let mut top = vec![usize::MAX; bags.len()];
    for &t in order.iter().rev() {
        let kids: Vec<usize> = adj[t].iter().copied().filter(|&c| c != t && parent[c] == t).collect();
        let mut branches: Vec<usize> = kids.iter().map(|&c| b.transition(top[c], &bags[t])).collect();
        let node = if branches.is_empty() {
            let leaf = b.push(NodeKind::Leaf, Vec::new(), Vec::new());
            b.transition(leaf, &bags[t])
        } else {
            let mut acc = branches.remove(0);
            for other in branches {
                acc = b.push(NodeKind::Join, bags[t].clone(), vec![acc, other]);
            }
            acc
        };
        top[t] = node;
    }
    let root = b.transition(top[start], &[]);
    NiceTreeDecomposition { nodes: b.nodes, root }
}
