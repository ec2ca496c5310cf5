//! Brute-force references for strong bridges, 2-edge-connectivity, blocks and
//! dominators.
//!
//! Everything here is quadratic or worse and rebuilt from scratch on every
//! call. None of it shares code with the incremental engine beyond
//! [`Digraph`].

use std::collections::{BTreeMap, VecDeque};

use crate::graph::{Digraph, EdgeId, Vertex};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub strong_bridges: Vec<(Vertex, Vertex)>,
    pub blocks: Vec<Vec<Vertex>>,
    /// Dominator sets of the forward and reverse flow graphs from vertex 0,
    /// present only when the graph is strongly connected.
    pub dom: Option<[Vec<Vec<Vertex>>; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleDominators {
    /// Immediate dominator of each vertex, `None` for the start.
    pub parent: Vec<Option<Vertex>>,
    /// Bridges `(d(v), v)` ordered by head.
    pub bridges: Vec<(Vertex, Vertex)>,
    /// `Dom(v)`, ascending.
    pub dom: Vec<Vec<Vertex>>,
}

/// Kosaraju with reusable buffers, optionally ignoring one edge.
#[derive(Debug, Default)]
struct SccScratch {
    seen: Vec<bool>,
    order: Vec<Vertex>,
    comp: Vec<usize>,
    stack: Vec<(Vertex, usize)>,
}

impl SccScratch {
    /// Component id of each vertex; ids are the smallest member.
    fn run(&mut self, g: &Digraph, skip: Option<EdgeId>) -> &[usize] {
        let n = g.vertex_count();
        self.seen.clear();
        self.seen.resize(n, false);
        self.order.clear();
        for s in 0..n {
            if self.seen[s] {
                continue;
            }
            self.seen[s] = true;
            self.stack.push((s, 0));
            while let Some(&mut (v, ref mut i)) = self.stack.last_mut() {
                let outs = g.out_edges(v);
                if *i < outs.len() {
                    let (e, w) = outs[*i];
                    *i += 1;
                    if Some(e) != skip && !self.seen[w] {
                        self.seen[w] = true;
                        self.stack.push((w, 0));
                    }
                } else {
                    self.order.push(v);
                    self.stack.pop();
                }
            }
        }
        self.comp.clear();
        self.comp.resize(n, usize::MAX);
        let mut members = Vec::new();
        for idx in (0..n).rev() {
            let s = self.order[idx];
            if self.comp[s] != usize::MAX {
                continue;
            }
            members.clear();
            self.comp[s] = s;
            members.push(s);
            let mut k = 0;
            while k < members.len() {
                let v = members[k];
                k += 1;
                for &(e, u) in g.in_edges(v) {
                    if Some(e) != skip && self.comp[u] == usize::MAX {
                        self.comp[u] = s;
                        members.push(u);
                    }
                }
            }
            let min = *members.iter().min().expect("non-empty component");
            for &v in &members {
                self.comp[v] = min;
            }
        }
        &self.comp
    }
}

/// Strongly connected component of each vertex, named by its smallest member.
pub fn scc_labels(g: &Digraph) -> Vec<Vertex> {
    SccScratch::default().run(g, None).to_vec()
}

fn count_distinct(labels: &[usize]) -> usize {
    labels.iter().enumerate().filter(|&(v, &c)| v == c).count()
}

/// Edges whose deletion increases the number of strongly connected
/// components, sorted.
pub fn strong_bridges(g: &Digraph) -> Vec<(Vertex, Vertex)> {
    let mut scratch = SccScratch::default();
    let base = count_distinct(scratch.run(g, None));
    let mut out: Vec<_> = (0..g.edge_count())
        .filter(|&e| count_distinct(scratch.run(g, Some(EdgeId(e as u32)))) > base)
        .map(|e| g.endpoints(EdgeId(e as u32)))
        .collect();
    out.sort_unstable();
    out
}

fn reaches(g: &Digraph, from: Vertex, to: Vertex, skip: Option<EdgeId>) -> bool {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(v) = queue.pop_front() {
        if v == to {
            return true;
        }
        for &(e, w) in g.out_edges(v) {
            if Some(e) != skip && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Whether `u` reaches `v` in `g` with edge `e` removed.
pub fn reaches_without(g: &Digraph, u: Vertex, v: Vertex, e: (Vertex, Vertex)) -> bool {
    let skip = g
        .out_edges(e.0)
        .iter()
        .find(|&&(_, w)| w == e.1)
        .map(|&(id, _)| id);
    reaches(g, u, v, skip)
}

/// `u` and `v` are 2-edge-connected: no single edge deletion separates them in
/// either direction.
pub fn two_ec(g: &Digraph, u: Vertex, v: Vertex) -> bool {
    if u == v {
        return true;
    }
    if !reaches(g, u, v, None) || !reaches(g, v, u, None) {
        return false;
    }
    (0..g.edge_count()).all(|e| {
        let e = Some(EdgeId(e as u32));
        reaches(g, u, v, e) && reaches(g, v, u, e)
    })
}

/// Number of edge-disjoint `u`-`v` paths, capped at `cap`, by augmenting
/// paths on unit capacities.
fn edge_disjoint_paths(g: &Digraph, u: Vertex, v: Vertex, cap: usize) -> usize {
    let m = g.edge_count();
    let mut flow = vec![false; m];
    let mut found = 0;
    while found < cap {
        // BFS in the residual graph; predecessor stores (edge, forward?).
        let mut pred: Vec<Option<(usize, bool)>> = vec![None; g.vertex_count()];
        let mut seen = vec![false; g.vertex_count()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &(e, w) in g.out_edges(x) {
                if !flow[e.index()] && !seen[w] {
                    seen[w] = true;
                    pred[w] = Some((e.index(), true));
                    queue.push_back(w);
                }
            }
            for &(e, w) in g.in_edges(x) {
                if flow[e.index()] && !seen[w] {
                    seen[w] = true;
                    pred[w] = Some((e.index(), false));
                    queue.push_back(w);
                }
            }
        }
        if !seen[v] {
            break;
        }
        let mut x = v;
        while x != u {
            let (e, forward) = pred[x].expect("path back to source");
            flow[e] = forward;
            let (a, b) = g.endpoints(EdgeId(e as u32));
            x = if forward { a } else { b };
        }
        found += 1;
    }
    found
}

/// Same relation as [`two_ec`], via edge-disjoint path counts.
pub fn two_ec_menger(g: &Digraph, u: Vertex, v: Vertex) -> bool {
    u == v || (edge_disjoint_paths(g, u, v, 2) == 2 && edge_disjoint_paths(g, v, u, 2) == 2)
}

/// The 2-edge-connected blocks, each sorted, ordered by smallest member.
///
/// Two vertices are related when they share a component in `G` and in every
/// `G - e`. The relation matrix is checked for transitivity before it is
/// turned into classes.
pub fn blocks(g: &Digraph) -> Result<Vec<Vec<Vertex>>> {
    let n = g.vertex_count();
    let words = n.div_ceil(64);
    let mut scratch = SccScratch::default();
    // related[u] is a bitset row; masks[c] holds the members of component c.
    let mut related = vec![vec![!0u64; words]; n];
    let mut masks = vec![vec![0u64; words]; n];
    let mut refine = |comp: &[usize], related: &mut Vec<Vec<u64>>| {
        for row in masks.iter_mut() {
            row.fill(0);
        }
        for (v, &c) in comp.iter().enumerate() {
            masks[c][v / 64] |= 1 << (v % 64);
        }
        for (u, row) in related.iter_mut().enumerate() {
            for (x, m) in row.iter_mut().zip(&masks[comp[u]]) {
                *x &= m;
            }
        }
    };
    refine(scratch.run(g, None), &mut related);
    for e in 0..g.edge_count() {
        refine(scratch.run(g, Some(EdgeId(e as u32))), &mut related);
    }
    let has = |row: &[u64], v: usize| row[v / 64] >> (v % 64) & 1 == 1;
    for u in 0..n {
        for v in (0..n).filter(|&v| has(&related[u], v)) {
            // Transitivity through v: everything related to v is related to u.
            if let Some(w) = (0..n).find(|&w| has(&related[v], w) && !has(&related[u], w)) {
                return Err(Error::OracleMismatch(format!(
                    "2-edge-connectivity not transitive on {u}, {v}, {w}"
                )));
            }
        }
    }
    let mut classes: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for (u, row) in related.iter().enumerate() {
        let rep = (0..n).find(|&v| has(row, v)).expect("reflexive");
        classes.entry(rep).or_default().push(u);
    }
    Ok(classes.into_values().collect())
}

/// Dominators of the flow graph `g` from `s` by the iterative set equations.
pub fn dominator_tree(g: &Digraph, s: Vertex) -> Result<OracleDominators> {
    let n = g.vertex_count();
    if let Some(v) = (0..n).find(|&v| !reaches(g, s, v, None)) {
        return Err(Error::InvalidInput(format!("vertex {v} unreachable from {s}")));
    }
    let mut dom = vec![vec![true; n]; n];
    dom[s] = vec![false; n];
    dom[s][s] = true;
    let mut changed = true;
    while changed {
        changed = false;
        for v in (0..n).filter(|&v| v != s) {
            let mut next = vec![true; n];
            for &(_, p) in g.in_edges(v) {
                for (x, slot) in next.iter_mut().enumerate() {
                    *slot &= dom[p][x];
                }
            }
            next[v] = true;
            if next != dom[v] {
                dom[v] = next;
                changed = true;
            }
        }
    }
    let dom: Vec<Vec<Vertex>> = dom
        .iter()
        .map(|set| (0..n).filter(|&x| set[x]).collect())
        .collect();
    let parent: Vec<Option<Vertex>> = (0..n)
        .map(|v| {
            dom[v]
                .iter()
                .copied()
                .filter(|&x| x != v)
                .max_by_key(|&x| dom[x].len())
        })
        .collect();
    let bridges = (0..n)
        .filter_map(|v| {
            let p = parent[v]?;
            (g.has_edge(p, v) && !reaches_without(g, s, v, (p, v))).then_some((p, v))
        })
        .collect();
    Ok(OracleDominators { parent, bridges, dom })
}

/// `g` with every edge reversed.
pub fn reversed(g: &Digraph) -> Digraph {
    let mut r = Digraph::new(g.vertex_count()).expect("non-empty");
    for &(u, v) in g.edges() {
        r.add_edge(v, u).expect("in range");
    }
    r
}

pub fn report(g: &Digraph) -> Result<OracleReport> {
    let labels = scc_labels(g);
    let dom = if labels.iter().all(|&c| c == 0) {
        let fwd = dominator_tree(g, 0)?.dom;
        let rev = dominator_tree(&reversed(g), 0)?.dom;
        Some([fwd, rev])
    } else {
        None
    };
    Ok(OracleReport { strong_bridges: strong_bridges(g), blocks: blocks(g)?, dom })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Digraph {
        let mut g = Digraph::new(n).unwrap();
        for &(u, v) in edges {
            g.add_edge(u, v).unwrap();
        }
        g
    }

    fn triangle() -> Digraph {
        graph(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)])
    }

    fn chorded_square() -> Digraph {
        graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0)])
    }

    #[test]
    fn strong_bridges_examples() {
        assert_eq!(strong_bridges(&graph(3, &[(0, 1), (1, 2), (2, 0)])).len(), 3);
        assert!(strong_bridges(&triangle()).is_empty());
        assert_eq!(strong_bridges(&chorded_square()), vec![(0, 1), (1, 2), (2, 3), (3, 0)]);
    }

    #[test]
    fn two_ec_examples() {
        assert!(two_ec(&triangle(), 0, 2));
        assert!(!two_ec(&graph(3, &[(0, 1), (1, 2), (2, 0)]), 0, 2));
        assert!(!two_ec(&graph(2, &[(0, 1)]), 0, 1));
        assert!(two_ec_menger(&triangle(), 0, 2));
    }

    #[test]
    fn blocks_examples() {
        assert_eq!(blocks(&triangle()).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(
            blocks(&chorded_square()).unwrap(),
            vec![vec![0, 2], vec![1], vec![3]]
        );
        assert_eq!(blocks(&Digraph::new(1).unwrap()).unwrap(), vec![vec![0]]);
    }

    #[test]
    fn dominator_examples() {
        let d = dominator_tree(&graph(3, &[(0, 1), (1, 2), (2, 0)]), 0).unwrap();
        assert_eq!(d.parent, vec![None, Some(0), Some(1)]);
        let d = dominator_tree(&triangle(), 0).unwrap();
        assert_eq!(d.parent, vec![None, Some(0), Some(0)]);
        assert!(d.bridges.is_empty());
        let d = dominator_tree(&graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]), 0).unwrap();
        assert_eq!(d.parent, vec![None, Some(0), Some(0), Some(2)]);
        assert_eq!(d.bridges, vec![(0, 1), (2, 3)]);
        assert!(dominator_tree(&graph(2, &[(1, 0)]), 0).is_err());
    }

    #[test]
    fn report_of_disconnected_graph_has_no_dominators() {
        let r = report(&graph(3, &[(0, 1), (1, 0)])).unwrap();
        assert!(r.dom.is_none());
        assert_eq!(r.blocks, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(r.strong_bridges, vec![(0, 1), (1, 0)]);
    }
}
