//! Pairwise 2-edge-connectivity queries and separating-edge witnesses.

use crate::blocks::{ScBlockState, TwoEcIndex};
use crate::dominator::DomTree;
use crate::graph::{Direction, Vertex};
use crate::{Error, Result, NIL};

/// Why two vertices are not 2-edge-connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    /// Deleting this edge leaves no path between the two vertices in one
    /// direction.
    SeparatingEdge(Vertex, Vertex),
    NotStronglyConnected,
}

/// Outcome of the constant-time comparison, with the number of structure
/// reads it took. A DSU find counts as one read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Probe {
    pub answer: bool,
    pub reads: u32,
}

struct Local<'a> {
    state: &'a ScBlockState,
    u: u32,
    v: u32,
}

impl TwoEcIndex {
    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.vertex_count() {
            return Err(Error::InvalidArgument(format!(
                "vertex {v} out of range for {} vertices",
                self.vertex_count()
            )));
        }
        Ok(())
    }

    /// Shared state and local ids of `u != v`, or `None` when they lie in
    /// different strongly connected components.
    fn locate(&self, u: Vertex, v: Vertex, reads: &mut u32) -> Option<Local<'_>> {
        let (pu, pv) = (self.place[u], self.place[v]);
        *reads += 2;
        if pu.state == NIL || pu.state != pv.state {
            return None;
        }
        *reads += 1;
        let state = self.states[pu.state as usize].as_deref().expect("live state");
        Some(Local { state, u: pu.local, v: pv.local })
    }

    /// Answers a query and reports how many reads it needed.
    pub fn probe(&self, u: Vertex, v: Vertex) -> Result<Probe> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let mut reads = 0;
        if u == v {
            return Ok(Probe { answer: true, reads });
        }
        let Some(l) = self.locate(u, v, &mut reads) else {
            return Ok(Probe { answer: false, reads });
        };
        let mut answer = true;
        for d in Direction::BOTH {
            let (dom, scc) = (l.state.dom(d), l.state.scc(d));
            reads += 4;
            answer &= dom.root(l.u) == dom.root(l.v) && scc.find(l.u) == scc.find(l.v);
        }
        Ok(Probe { answer, reads })
    }

    /// Whether `u` and `v` are 2-edge-connected. Constant time.
    pub fn are_two_edge_connected(&self, u: Vertex, v: Vertex) -> Result<bool> {
        Ok(self.probe(u, v)?.answer)
    }

    /// `None` when `u` and `v` are 2-edge-connected, otherwise the reason
    /// they are not. Constant time.
    pub fn separating_edge(&self, u: Vertex, v: Vertex) -> Result<Option<Witness>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(None);
        }
        let mut reads = 0;
        let Some(l) = self.locate(u, v, &mut reads) else {
            return Ok(Some(Witness::NotStronglyConnected));
        };
        let g = |x: u32| l.state.global()[x as usize];
        for d in Direction::BOTH {
            if let Some((p, t)) = side_witness(l.state.dom(d), l.state.scc(d).find(l.u), l.state.scc(d).find(l.v), l.u, l.v) {
                let (a, b) = match d {
                    Direction::Forward => (p, t),
                    Direction::Reverse => (t, p),
                };
                return Ok(Some(Witness::SeparatingEdge(g(a), g(b))));
            }
        }
        Ok(None)
    }

    /// The blocks, ordered by smallest member, members ascending.
    pub fn report_blocks(&self) -> Vec<Vec<Vertex>> {
        self.blocks()
    }
}

/// Bridge `(d(t), t)` of one side that separates `u` from `v`, if their
/// labels on that side differ.
fn side_witness(dom: &DomTree, cu: u32, cv: u32, u: u32, v: u32) -> Option<(u32, u32)> {
    let (ru, rv) = (dom.root(u), dom.root(v));
    let t = if ru != rv {
        if dom.is_ancestor(rv, ru) {
            ru
        } else {
            rv
        }
    } else if cu != cv {
        ru
    } else {
        return None;
    };
    dom.parent(t).map(|p| (p, t))
}
