//! Directed graph storage with forward and reverse adjacency.

use crate::{Error, Result};

/// Vertices are dense indices `0..n`.
pub type Vertex = usize;

/// Identifier of a stored edge, assigned in insertion order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A simple digraph on a fixed vertex set. Self-loops and parallel edges are
/// never stored.
#[derive(Debug, Clone)]
pub struct Digraph {
    out_adj: Vec<Vec<(EdgeId, Vertex)>>,
    in_adj: Vec<Vec<(EdgeId, Vertex)>>,
    edges: Vec<(Vertex, Vertex)>,
    // Sorted heads per tail, used for the duplicate check.
    present: Vec<Vec<u32>>,
}

impl Digraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("graph needs at least one vertex".into()));
        }
        Ok(Digraph {
            out_adj: vec![Vec::new(); n],
            in_adj: vec![Vec::new(); n],
            edges: Vec::new(),
            present: vec![Vec::new(); n],
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.out_adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn check(&self, v: Vertex) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} out of range for {} vertices",
                self.vertex_count()
            )));
        }
        Ok(())
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.vertex_count() && self.present[u].binary_search(&(v as u32)).is_ok()
    }

    /// Adds `(u, v)`. Returns `Ok(None)` for a self-loop or an edge that is
    /// already present; the graph is unchanged in that case.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<Option<EdgeId>> {
        self.check(u)?;
        self.check(v)?;
        if u == v {
            return Ok(None);
        }
        let slot = match self.present[u].binary_search(&(v as u32)) {
            Ok(_) => return Ok(None),
            Err(slot) => slot,
        };
        self.present[u].insert(slot, v as u32);
        let id = EdgeId(self.edges.len() as u32);
        self.edges.push((u, v));
        self.out_adj[u].push((id, v));
        self.in_adj[v].push((id, u));
        Ok(Some(id))
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.edges[e.index()]
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn out_edges(&self, v: Vertex) -> &[(EdgeId, Vertex)] {
        &self.out_adj[v]
    }

    pub fn in_edges(&self, v: Vertex) -> &[(EdgeId, Vertex)] {
        &self.in_adj[v]
    }

    /// The reverse digraph as a view over the same storage.
    pub fn reverse(&self) -> Reversed<'_> {
        Reversed { g: self }
    }

    /// The subgraph induced by `set`, relabeled to `0..set.len()` in the order
    /// given. Returns the subgraph and the map from new to old vertex.
    pub fn induced_subgraph(&self, set: &[Vertex]) -> Result<(Digraph, Vec<Vertex>)> {
        let mut local = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in set.iter().enumerate() {
            self.check(v)?;
            if local[v] != usize::MAX {
                return Err(Error::InvalidArgument(format!("vertex {v} listed twice")));
            }
            local[v] = i;
        }
        let mut sub = Digraph::new(set.len().max(1))?;
        if set.is_empty() {
            return Ok((sub, Vec::new()));
        }
        for &v in set {
            for &(_, w) in &self.out_adj[v] {
                if local[w] != usize::MAX {
                    sub.add_edge(local[v], local[w])?;
                }
            }
        }
        Ok((sub, set.to_vec()))
    }
}

/// Reverse view: out and in adjacency swapped, edge ids shared.
#[derive(Clone, Copy)]
pub struct Reversed<'a> {
    g: &'a Digraph,
}

impl<'a> Reversed<'a> {
    pub fn vertex_count(&self) -> usize {
        self.g.vertex_count()
    }

    pub fn out_edges(&self, v: Vertex) -> &'a [(EdgeId, Vertex)] {
        self.g.in_edges(v)
    }

    pub fn in_edges(&self, v: Vertex) -> &'a [(EdgeId, Vertex)] {
        self.g.out_edges(v)
    }

    pub fn endpoints(&self, e: EdgeId) -> (Vertex, Vertex) {
        let (u, v) = self.g.endpoints(e);
        (v, u)
    }

    pub fn reverse(&self) -> &'a Digraph {
        self.g
    }
}

/// Which flow graph of a component is meant: `G_s` or its reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Reverse,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Forward, Direction::Reverse];

    pub fn index(self) -> usize {
        match self {
            Direction::Forward => 0,
            Direction::Reverse => 1,
        }
    }
}

/// Dense `u32` adjacency for one strongly connected component. Edge ids are
/// local to the component and shared by both directions.
#[derive(Debug, Clone, Default)]
pub struct CompactGraph {
    out: Vec<Vec<(u32, u32)>>,
    inn: Vec<Vec<(u32, u32)>>,
    edges: Vec<(u32, u32)>,
}

impl CompactGraph {
    pub fn new(n: usize) -> Self {
        CompactGraph {
            out: vec![Vec::new(); n],
            inn: vec![Vec::new(); n],
            edges: Vec::new(),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = CompactGraph::new(n);
        for &(u, v) in edges {
            g.push_edge(u as u32, v as u32);
        }
        g
    }

    pub fn from_digraph(g: &Digraph) -> Self {
        CompactGraph::from_edges(g.vertex_count(), g.edges())
    }

    /// Appends an edge without duplicate checks; returns its local id.
    pub fn push_edge(&mut self, u: u32, v: u32) -> u32 {
        let id = self.edges.len() as u32;
        self.edges.push((u, v));
        self.out[u as usize].push((id, v));
        self.inn[v as usize].push((id, u));
        id
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, e: u32) -> (u32, u32) {
        self.edges[e as usize]
    }

    pub fn view(&self, dir: Direction) -> FlowView<'_> {
        match dir {
            Direction::Forward => FlowView { out: &self.out, inn: &self.inn, edges: &self.edges, reversed: false },
            Direction::Reverse => FlowView { out: &self.inn, inn: &self.out, edges: &self.edges, reversed: true },
        }
    }
}

/// One direction of a [`CompactGraph`]: adjacency entries are `(edge, other
/// endpoint)`.
#[derive(Clone, Copy)]
pub struct FlowView<'a> {
    out: &'a [Vec<(u32, u32)>],
    inn: &'a [Vec<(u32, u32)>],
    edges: &'a [(u32, u32)],
    reversed: bool,
}

impl<'a> FlowView<'a> {
    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn out(&self, v: u32) -> &'a [(u32, u32)] {
        &self.out[v as usize]
    }

    pub fn inn(&self, v: u32) -> &'a [(u32, u32)] {
        &self.inn[v as usize]
    }

    /// `(tail, head)` of edge `e` in this direction.
    pub fn endpoints(&self, e: u32) -> (u32, u32) {
        let (u, v) = self.edges[e as usize];
        if self.reversed {
            (v, u)
        } else {
            (u, v)
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn new_graph_rejects_zero() {
        assert!(matches!(Digraph::new(0), Err(Error::InvalidArgument(_))));
        let g = Digraph::new(1).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edge_count(), 0);
        let g = Digraph::new(3).unwrap();
        assert!((0..3).all(|v| g.out_edges(v).is_empty() && g.in_edges(v).is_empty()));
    }

    #[test]
    fn self_loops_and_duplicates_are_noops() {
        let mut g = Digraph::new(3).unwrap();
        let e = g.add_edge(0, 1).unwrap();
        assert_eq!(e, Some(EdgeId(0)));
        assert_eq!(g.out_edges(0), &[(EdgeId(0), 1)]);
        assert_eq!(g.add_edge(0, 0).unwrap(), None);
        assert_eq!(g.add_edge(0, 1).unwrap(), None);
        assert_eq!(g.edge_count(), 1);
        assert!(g.add_edge(0, 3).is_err());
    }

    #[test]
    fn induced_subgraph_filters_edges() {
        let mut g = Digraph::new(3).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 0).unwrap();
        let (sub, map) = g.induced_subgraph(&[0, 1]).unwrap();
        assert_eq!(sub.edges(), &[(0, 1)]);
        assert_eq!(map, vec![0, 1]);
        let (all, _) = g.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(all.edge_count(), 3);
        let (single, _) = g.induced_subgraph(&[1]).unwrap();
        assert_eq!((single.vertex_count(), single.edge_count()), (1, 0));
    }

    #[test]
    fn reverse_view_swaps_roles() {
        let mut g = Digraph::new(2).unwrap();
        let e = g.add_edge(0, 1).unwrap().unwrap();
        let r = g.reverse();
        assert_eq!(r.out_edges(1), &[(e, 0)]);
        assert_eq!(r.endpoints(e), (1, 0));
        assert_eq!(r.reverse().edges(), g.edges());
    }
}
