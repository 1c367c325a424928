use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};
use std::fmt::Write as _;

use crate::error::{ParseError, TdViolation};
use crate::graph::{Digraph, Vertex};

/// Tree decomposition of the underlying undirected graph. Bags keep the
/// vertex order they were read or built with; tree edges join bag indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub n: usize,
    pub bags: Vec<Vec<Vertex>>,
    pub edges: Vec<(usize, usize)>,
}

impl TreeDecomposition {
    /// Largest bag size minus one; `-1` style empty decompositions report 0.
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    fn max_bag(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// One bag holding every vertex.
    pub fn trivial(n: usize) -> Self {
        TreeDecomposition {
            n,
            bags: vec![(0..n).collect()],
            edges: Vec::new(),
        }
    }
}

fn parse_num(tok: Option<&str>, line: usize, what: &str) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| ParseError::syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| ParseError::syntax(line, format!("bad {what} `{tok}`")))
}

/// Reads the `.td` interchange format: `s td <#bags> <width+1> <n>`, then
/// `b <id> <v...>` lines and one `<a> <b>` line per tree edge, all 1-based.
/// Lines starting with `c` are comments.
pub fn read_td(text: &str) -> Result<TreeDecomposition, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<Vertex>>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line == "c" || line.starts_with("c ") {
            continue;
        }
        let mut it = line.split_whitespace();
        let first = it.next().unwrap_or_default();
        match first {
            "s" => {
                if header.is_some() {
                    return Err(ParseError::syntax(line_no, "duplicate header"));
                }
                if it.next() != Some("td") {
                    return Err(ParseError::syntax(line_no, "expected `s td <bags> <width+1> <n>`"));
                }
                let nb = parse_num(it.next(), line_no, "bag count")?;
                let w = parse_num(it.next(), line_no, "bag size")?;
                let n = parse_num(it.next(), line_no, "vertex count")?;
                header = Some((nb, w, n));
                bags = vec![None; nb];
            }
            "b" => {
                let (nb, _, n) = header.ok_or(ParseError::MissingHeader("s td"))?;
                let id = parse_num(it.next(), line_no, "bag id")?;
                if id == 0 || id > nb {
                    return Err(ParseError::syntax(line_no, format!("bag id {id} outside 1..={nb}")));
                }
                if bags[id - 1].is_some() {
                    return Err(ParseError::syntax(line_no, format!("bag {id} listed twice")));
                }
                let mut bag = Vec::new();
                for tok in it {
                    let v = parse_num(Some(tok), line_no, "vertex")?;
                    if v == 0 || v > n {
                        return Err(ParseError::syntax(line_no, format!("vertex {v} outside 1..={n}")));
                    }
                    bag.push(v - 1);
                }
                bags[id - 1] = Some(bag);
            }
            _ => {
                let (nb, _, _) = header.ok_or(ParseError::MissingHeader("s td"))?;
                let a = parse_num(Some(first), line_no, "tree edge endpoint")?;
                let b = parse_num(it.next(), line_no, "tree edge endpoint")?;
                if it.next().is_some() {
                    return Err(ParseError::syntax(line_no, "trailing tokens after tree edge"));
                }
                for x in [a, b] {
                    if x == 0 || x > nb {
                        return Err(ParseError::syntax(line_no, format!("bag id {x} outside 1..={nb}")));
                    }
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (nb, w, n) = header.ok_or(ParseError::MissingHeader("s td"))?;
    let found = bags.iter().filter(|b| b.is_some()).count();
    if found != nb {
        return Err(ParseError::CountMismatch {
            what: "bags",
            declared: nb,
            found,
        });
    }
    let td = TreeDecomposition {
        n,
        bags: bags.into_iter().map(Option::unwrap).collect(),
        edges,
    };
    if td.max_bag() != w {
        return Err(ParseError::CountMismatch {
            what: "maximum bag size",
            declared: w,
            found: td.max_bag(),
        });
    }
    Ok(td)
}

pub fn write_td(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.bags.len(), td.max_bag(), td.n);
    for (i, bag) in td.bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for &v in bag {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(out, "{} {}", a + 1, b + 1);
    }
    out
}

/// Checks the three decomposition axioms against the underlying undirected
/// graph of `g` and that the bag graph is a tree.
pub fn validate_td(g: &Digraph, td: &TreeDecomposition) -> Result<(), TdViolation> {
    if td.n != g.n() {
        return Err(TdViolation::VertexCount {
            expected: g.n(),
            found: td.n,
        });
    }
    for (i, bag) in td.bags.iter().enumerate() {
        if let Some(&v) = bag.iter().find(|&&v| v >= g.n()) {
            return Err(TdViolation::BadVertex { bag: i, vertex: v });
        }
    }
    let nb = td.bags.len();
    if nb == 0 {
        return match g.n() {
            0 => Ok(()),
            _ => Err(TdViolation::UncoveredVertex(0)),
        };
    }
    if td.edges.len() != nb - 1 || td.edges.iter().any(|&(a, b)| a >= nb || b >= nb || a == b) {
        return Err(TdViolation::NotATree);
    }
    let adj = td.tree_adjacency();
    if component_count(&adj, &vec![true; nb]) != 1 {
        return Err(TdViolation::NotATree);
    }
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            if holders[v].last() != Some(&i) {
                holders[v].push(i);
            }
        }
    }
    if let Some(v) = (0..g.n()).find(|&v| holders[v].is_empty()) {
        return Err(TdViolation::UncoveredVertex(v));
    }
    let bag_sets: Vec<BTreeSet<Vertex>> = td.bags.iter().map(|b| b.iter().copied().collect()).collect();
    for (u, v) in g.arcs() {
        if !holders[u].iter().any(|&i| bag_sets[i].contains(&v)) {
            return Err(TdViolation::UncoveredEdge(u.min(v), u.max(v)));
        }
    }
    let mut mask = vec![false; nb];
    for (v, held) in holders.iter().enumerate() {
        mask.fill(false);
        for &i in held {
            mask[i] = true;
        }
        if component_count(&adj, &mask) != 1 {
            return Err(TdViolation::Disconnected(v));
        }
    }
    Ok(())
}

fn component_count(adj: &[Vec<usize>], active: &[bool]) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for s in 0..adj.len() {
        if !active[s] || seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if active[w] && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

fn fill_in(adj: &[BTreeSet<Vertex>], v: Vertex) -> usize {
    let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
    let mut missing = 0;
    for (i, &a) in nbrs.iter().enumerate() {
        for &b in &nbrs[i + 1..] {
            if !adj[a].contains(&b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Heuristic decomposition from a min-fill elimination ordering (ties broken
/// by degree, then id). Fill values are refreshed lazily for the neighbors
/// of each eliminated vertex only, which keeps sparse inputs near-linear.
pub fn min_fill_decomposition(g: &Digraph) -> TreeDecomposition {
    let n = g.n();
    if n == 0 {
        return TreeDecomposition {
            n,
            bags: Vec::new(),
            edges: Vec::new(),
        };
    }
    let mut adj: Vec<BTreeSet<Vertex>> = g
        .undirected_adjacency()
        .into_iter()
        .map(|l| l.into_iter().collect())
        .collect();
    let mut key: Vec<(usize, usize)> = (0..n).map(|v| (fill_in(&adj, v), adj[v].len())).collect();
    let mut heap: BinaryHeap<Reverse<(usize, usize, Vertex)>> = (0..n).map(|v| Reverse((key[v].0, key[v].1, v))).collect();
    let mut position = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut bags: Vec<Vec<Vertex>> = Vec::with_capacity(n);
    while let Some(Reverse((fill, deg, v))) = heap.pop() {
        if position[v] != usize::MAX || (fill, deg) != key[v] {
            continue;
        }
        position[v] = order.len();
        order.push(v);
        let nbrs: Vec<Vertex> = adj[v].iter().copied().collect();
        let mut bag = nbrs.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        for &a in &nbrs {
            adj[a].remove(&v);
        }
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        adj[v].clear();
        for &a in &nbrs {
            key[a] = (fill_in(&adj, a), adj[a].len());
            heap.push(Reverse((key[a].0, key[a].1, a)));
        }
    }
    // bag i belongs to order[i]; its parent is the bag of the neighbor
    // eliminated first after it
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut roots = Vec::new();
    for (i, bag) in bags.iter().enumerate() {
        let parent = bag
            .iter()
            .map(|&u| position[u])
            .filter(|&p| p > i)
            .min();
        match parent {
            Some(p) => edges.push((i, p)),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        edges.push((w[0], w[1]));
    }
    TreeDecomposition { n, bags, edges }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, arcs: &[(usize, usize)]) -> Digraph {
        Digraph::from_arcs(n, arcs.iter().copied()).unwrap()
    }

    #[test]
    fn single_bag_triangle() {
        let k3 = g(3, &[(0, 1), (1, 2), (2, 0)]);
        let td = TreeDecomposition::trivial(3);
        assert_eq!(validate_td(&k3, &td), Ok(()));
        assert_eq!(td.width(), 2);
    }

    #[test]
    fn path_decomposition() {
        let p = g(3, &[(0, 1), (1, 2)]);
        let td = TreeDecomposition {
            n: 3,
            bags: vec![vec![0, 1], vec![1, 2]],
            edges: vec![(0, 1)],
        };
        assert_eq!(validate_td(&p, &td), Ok(()));
        assert_eq!(td.width(), 1);
        let with_chord = g(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(validate_td(&with_chord, &td), Err(TdViolation::UncoveredEdge(0, 2)));
    }

    #[test]
    fn other_violations() {
        let p = g(3, &[(0, 1), (1, 2)]);
        let split = TreeDecomposition {
            n: 3,
            bags: vec![vec![0, 1], vec![2], vec![1, 2]],
            edges: vec![(0, 1), (1, 2)],
        };
        assert_eq!(validate_td(&p, &split), Err(TdViolation::Disconnected(1)));
        let forest = TreeDecomposition {
            n: 3,
            bags: vec![vec![0, 1], vec![1, 2]],
            edges: vec![],
        };
        assert_eq!(validate_td(&p, &forest), Err(TdViolation::NotATree));
        let missing = TreeDecomposition {
            n: 3,
            bags: vec![vec![0, 1]],
            edges: vec![],
        };
        assert_eq!(validate_td(&p, &missing), Err(TdViolation::UncoveredVertex(2)));
    }

    #[test]
    fn td_round_trip() {
        let text = "s td 2 2 3\nb 1 1 2\nb 2 2 3\n1 2\n";
        let td = read_td(text).unwrap();
        assert_eq!(td.bags, vec![vec![0, 1], vec![1, 2]]);
        assert_eq!(write_td(&td), text);
        assert!(read_td("b 1 1\n").is_err());
        assert!(read_td("s td 1 1 2\nb 1 3\n").is_err());
        assert!(read_td("s td 2 1 2\nb 1 1\n").is_err());
    }

    #[test]
    fn min_fill_is_valid_and_tight_on_a_cycle() {
        let c5 = g(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let td = min_fill_decomposition(&c5);
        assert_eq!(validate_td(&c5, &td), Ok(()));
        assert_eq!(td.width(), 2);
        let disconnected = g(4, &[(0, 1), (2, 3)]);
        let td = min_fill_decomposition(&disconnected);
        assert_eq!(validate_td(&disconnected, &td), Ok(()));
        assert_eq!(td.width(), 1);
    }
}
