//! Auxiliary graphs of one flow-graph side.
//!
//! The bridge decomposition splits the dominator tree into trees `V_r`. The
//! auxiliary graph of `r` keeps the edges with both ends in `V_r` and replaces
//! every edge `(u, v)` entering `V_r` from below by a shortcut `(u', v)`, where
//! `u'` is the nearest ancestor of `u` in `V_r`. Bridge edges get no copy.
//!
//! The incremental engine never materializes these graphs; it stores, for
//! every edge, the tail of its copy. [`build_auxiliary_graphs`] exists for
//! inspection and tests.

use crate::dominator::DomTree;
use crate::graph::FlowView;
use crate::{Vertex, NIL};

/// Tail of the auxiliary copy of every edge (indexed by edge id), `NIL` for
/// bridges. The head of a copy is always the head of its edge.
///
/// One depth-first pass over the dominator tree keeps, for each root `r`, the
/// deepest vertex of `V_r` on the current path.
pub fn copy_tails(dom: &DomTree, view: FlowView<'_>) -> Vec<u32> {
    let n = dom.len();
    let mut first = vec![0u32; n + 1];
    for v in 0..n as u32 {
        if let Some(p) = dom.parent(v) {
            first[p as usize + 1] += 1;
        }
    }
    for i in 0..n {
        first[i + 1] += first[i];
    }
    let mut fill = first.clone();
    let mut children = vec![0u32; n.saturating_sub(1)];
    for v in 0..n as u32 {
        if let Some(p) = dom.parent(v) {
            children[fill[p as usize] as usize] = v;
            fill[p as usize] += 1;
        }
    }

    let mut tails = vec![NIL; view.edge_count()];
    let mut cur = vec![NIL; n];
    let mut saved = vec![NIL; n];
    let enter = |v: u32, cur: &mut Vec<u32>, saved: &mut Vec<u32>, tails: &mut Vec<u32>| {
        let r = dom.root(v);
        saved[v as usize] = cur[r as usize];
        cur[r as usize] = v;
        for &(e, h) in view.out(v) {
            let rh = dom.root(h);
            if dom.is_ancestor(rh, v) {
                tails[e as usize] = cur[rh as usize];
            }
        }
    };
    let s = dom.start();
    enter(s, &mut cur, &mut saved, &mut tails);
    let mut stack = vec![(s, first[s as usize])];
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        if top.1 < first[v as usize + 1] {
            let c = children[top.1 as usize];
            top.1 += 1;
            enter(c, &mut cur, &mut saved, &mut tails);
            stack.push((c, first[c as usize]));
        } else {
            cur[dom.root(v) as usize] = saved[v as usize];
            stack.pop();
        }
    }
    tails
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shortcut {
    pub tail: u32,
    pub head: u32,
    /// Edge id of the original edge this shortcut stands for.
    pub origin: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxiliaryGraph {
    pub root: u32,
    /// `V_r`, ascending.
    pub vertices: Vec<u32>,
    /// Edge ids with both endpoints in `V_r`.
    pub ordinary_edges: Vec<u32>,
    pub shortcut_edges: Vec<Shortcut>,
}

/// All auxiliary graphs of one side, ordered by root.
pub fn build_auxiliary_graphs(dom: &DomTree, view: FlowView<'_>) -> Vec<AuxiliaryGraph> {
    let n = dom.len();
    let mut slot = vec![usize::MAX; n];
    let mut graphs = Vec::new();
    for v in 0..n as u32 {
        if dom.root(v) == v {
            slot[v as usize] = graphs.len();
            graphs.push(AuxiliaryGraph {
                root: v,
                vertices: Vec::new(),
                ordinary_edges: Vec::new(),
                shortcut_edges: Vec::new(),
            });
        }
    }
    for v in 0..n as u32 {
        graphs[slot[dom.root(v) as usize]].vertices.push(v);
    }
    for (e, &t) in copy_tails(dom, view).iter().enumerate() {
        let (tail, head) = view.endpoints(e as u32);
        // Shortcuts that collapse onto their own head are loops; they never
        // matter for components and are left out here.
        if t == NIL || t == head {
            continue;
        }
        let g = &mut graphs[slot[dom.root(head) as usize]];
        if t == tail {
            g.ordinary_edges.push(e as u32);
        } else {
            g.shortcut_edges.push(Shortcut { tail: t, head, origin: e as u32 });
        }
    }
    graphs
}

/// `⟨r, c, r^R, c^R⟩`: decomposition roots and auxiliary-component canonical
/// vertices on the forward and reverse sides. Two vertices of one strongly
/// connected component are 2-edge-connected iff their labels are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub r: Vertex,
    pub c: Vertex,
    pub r_rev: Vertex,
    pub c_rev: Vertex,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{CompactGraph, Digraph, Direction};
    use crate::oracle;
    use proptest::prelude::*;

    fn dom_of(g: &CompactGraph, dir: Direction) -> DomTree {
        DomTree::compute(g.view(dir), 0).unwrap()
    }

    #[test]
    fn cycle_has_singleton_graphs() {
        let g = CompactGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let aux = build_auxiliary_graphs(&dom_of(&g, Direction::Forward), g.view(Direction::Forward));
        assert_eq!(aux.len(), 3);
        assert!(aux.iter().all(|a| a.vertices.len() == 1));
        assert!(aux.iter().all(|a| a.ordinary_edges.is_empty() && a.shortcut_edges.is_empty()));
    }

    #[test]
    fn chorded_square() {
        // 0->1->2->3->0 with chords 0->2 and 2->0.
        let g = CompactGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0)]);
        let d = dom_of(&g, Direction::Forward);
        let aux = build_auxiliary_graphs(&d, g.view(Direction::Forward));
        let roots: Vec<_> = aux.iter().map(|a| a.root).collect();
        assert_eq!(roots, vec![0, 1, 3]);
        assert_eq!(aux[0].vertices, vec![0, 2]);
        assert_eq!(aux[0].ordinary_edges, vec![4, 5]);
        assert_eq!(
            aux[0].shortcut_edges,
            vec![Shortcut { tail: 0, head: 2, origin: 1 }, Shortcut { tail: 2, head: 0, origin: 3 }]
        );
        assert!(aux[1].ordinary_edges.is_empty() && aux[1].shortcut_edges.is_empty());
    }

    fn to_digraph(n: usize, edges: impl IntoIterator<Item = (u32, u32)>) -> Digraph {
        let mut g = Digraph::new(n).unwrap();
        for (u, v) in edges {
            g.add_edge(u as usize, v as usize).unwrap();
        }
        g
    }

    proptest! {
        /// For each decomposition tree, the components of its auxiliary graph
        /// are the components of the graph induced by the dominated subtree,
        /// restricted to the tree.
        #[test]
        fn auxiliary_components_restrict_subtree_components(
            n in 2usize..10,
            raw in prop::collection::vec((0usize..10, 0usize..10), 0..40),
            reverse in any::<bool>(),
        ) {
            let dir = if reverse { Direction::Reverse } else { Direction::Forward };
            let mut edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
            for (u, v) in raw {
                let (u, v) = (u % n, v % n);
                if u != v && !edges.contains(&(u, v)) {
                    edges.push((u, v));
                }
            }
            let g = CompactGraph::from_edges(n, &edges);
            let view = g.view(dir);
            let d = DomTree::compute(view, 0).unwrap();
            let aux = build_auxiliary_graphs(&d, view);
            prop_assert_eq!(aux.iter().map(|a| a.vertices.len()).sum::<usize>(), n);
            let copies: usize = aux.iter().map(|a| a.ordinary_edges.len() + a.shortcut_edges.len()).sum();
            prop_assert!(copies + d.bridges().count() <= g.edge_count());
            let full = to_digraph(n, (0..g.edge_count() as u32).map(|e| view.endpoints(e)));
            for a in &aux {
                for sc in &a.shortcut_edges {
                    let (u, _) = view.endpoints(sc.origin);
                    prop_assert!(d.is_ancestor(a.root, u));
                    prop_assert_eq!(d.nearest_ancestor_in(u, a.root).unwrap(), sc.tail);
                }
                let aux_g = to_digraph(
                    n,
                    a.ordinary_edges
                        .iter()
                        .map(|&e| view.endpoints(e))
                        .chain(a.shortcut_edges.iter().map(|s| (s.tail, s.head))),
                );
                let aux_scc = oracle::scc_labels(&aux_g);
                let sub: Vec<usize> = (0..n).filter(|&v| d.is_ancestor(a.root, v as u32)).collect();
                let (induced, map) = full.induced_subgraph(&sub).unwrap();
                let sub_scc = oracle::scc_labels(&induced);
                let pos = |v: u32| map.iter().position(|&x| x == v as usize).unwrap();
                for &x in &a.vertices {
                    for &y in &a.vertices {
                        prop_assert_eq!(
                            aux_scc[x as usize] == aux_scc[y as usize],
                            sub_scc[pos(x)] == sub_scc[pos(y)]
                        );
                    }
                }
            }
        }
    }
}
