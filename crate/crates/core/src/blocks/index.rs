use super::component::ScBlockState;
use super::group_by_keys;
use crate::auxiliary::Label;
use crate::graph::{CompactGraph, Digraph, Vertex};
use crate::inc_scc::{Engine, IncScc};
use crate::{Result, NIL};

/// Where a vertex lives: the id of its component state (the top-level
/// canonical vertex, `NIL` for singleton components) and its local id there.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Place {
    pub(crate) state: u32,
    pub(crate) local: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InsertOutcome {
    /// Self-loop or duplicate edge; nothing changed.
    Noop,
    Inserted,
    /// The edge merged several components; `(canonical, size)` of each.
    Merged(Vec<(Vertex, usize)>),
}

/// Counters of one component lifetime: from the moment its state was built
/// until it merged into a larger component (or until now).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Lifetime {
    pub size: usize,
    pub insertions: u64,
    pub reinits: u64,
    pub fallbacks: u64,
    pub relink_repairs: u64,
    pub max_scans: u32,
    pub scanned: u64,
    pub initial_strong_bridges: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IndexMetrics {
    pub insertions: u64,
    pub noops: u64,
    pub top_merges: u64,
    /// Auxiliary-component merges summed over live components, plus those of
    /// the top level.
    pub unites: u64,
    pub searches: u64,
    pub lifetimes: Vec<Lifetime>,
}

#[derive(Debug, Clone)]
pub struct TwoEcIndex {
    pub(crate) graph: Digraph,
    engine: Engine,
    pub(crate) top: IncScc,
    pub(crate) place: Vec<Place>,
    pub(crate) states: Vec<Option<Box<ScBlockState>>>,
    start_of: Vec<Vertex>,
    /// Scans of each vertex over all lifetimes, both sides.
    scans_total: Vec<u64>,
    retired: Vec<Lifetime>,
    insertions: u64,
    noops: u64,
    top_merges: u64,
}

fn lifetime(s: &ScBlockState) -> Lifetime {
    let m = s.metrics();
    Lifetime {
        size: s.vertex_count(),
        insertions: m.insertions,
        reinits: m.reinits,
        fallbacks: m.fallbacks,
        relink_repairs: m.relink_repairs,
        max_scans: m.max_scans(),
        scanned: m.scans.iter().flatten().map(|&x| x as u64).sum(),
        initial_strong_bridges: m.initial_strong_bridges,
    }
}

impl TwoEcIndex {
    /// Empty graph on `n` vertices.
    pub fn new(n: usize, engine: Engine) -> Result<Self> {
        let graph = Digraph::new(n)?;
        let ids: Vec<u32> = (0..n as u32).collect();
        let top = IncScc::build(Engine::OneWay, &ids, &[(0, ids.clone())], &[], n);
        Ok(TwoEcIndex {
            graph,
            engine,
            top,
            place: vec![Place { state: NIL, local: 0 }; n],
            states: (0..n).map(|_| None).collect(),
            start_of: (0..n).collect(),
            scans_total: vec![0; n],
            retired: Vec::new(),
            insertions: 0,
            noops: 0,
            top_merges: 0,
        })
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Canonical vertex of the strongly connected component of `v`.
    pub fn scc_of(&self, v: Vertex) -> Vertex {
        self.top.find(v as u32) as Vertex
    }

    /// State of the component of `v`, absent for singleton components.
    pub fn component(&self, v: Vertex) -> Option<&ScBlockState> {
        let p = self.place[v];
        (p.state != NIL).then(|| &**self.states[p.state as usize].as_ref().expect("live state"))
    }

    /// States of all components with at least two vertices.
    pub fn components(&self) -> impl Iterator<Item = &ScBlockState> {
        self.states.iter().flatten().map(|b| &**b)
    }

    pub fn label(&self, v: Vertex) -> Label {
        let p = self.place[v];
        match &self.states.get(p.state as usize) {
            Some(Some(s)) => s.label(p.local),
            _ => Label { r: v, c: v, r_rev: v, c_rev: v },
        }
    }

    pub fn insert_edge(&mut self, u: Vertex, v: Vertex) -> Result<InsertOutcome> {
        let Some(e) = self.graph.add_edge(u, v)? else {
            self.noops += 1;
            return Ok(InsertOutcome::Noop);
        };
        self.insertions += 1;
        let (cu, cv) = (self.top.find(u as u32), self.top.find(v as u32));
        if cu == cv {
            let (pu, pv) = (self.place[u], self.place[v]);
            let state = self.states[pu.state as usize].as_mut().expect("component of size two or more");
            for v in state.insert_edge(pu.local, pv.local) {
                self.scans_total[state.global()[v as usize]] += 1;
            }
            return Ok(InsertOutcome::Inserted);
        }
        self.top.link(e.0, u as u32, v as u32);
        let Some(merge) = self.top.fix_edge(e.0) else {
            return Ok(InsertOutcome::Inserted);
        };
        self.top_merges += 1;
        let principal = merge
            .parts
            .iter()
            .copied()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .expect("merge has parts")
            .0;
        let start_global = self.start_of[principal as usize];
        for &(c, _) in &merge.parts {
            if let Some(old) = self.states[c as usize].take() {
                self.retired.push(lifetime(&old));
            }
        }
        let survivor = merge.survivor;
        let mut members = self.top.members(survivor).to_vec();
        members.sort_unstable();
        for (i, &m) in members.iter().enumerate() {
            self.place[m as usize] = Place { state: survivor, local: i as u32 };
        }
        let mut local = CompactGraph::new(members.len());
        for &m in &members {
            for &(_, w) in self.graph.out_edges(m as usize) {
                if self.top.find(w as u32) == survivor {
                    local.push_edge(self.place[m as usize].local, self.place[w].local);
                }
            }
        }
        let start = self.place[start_global].local;
        let global = members.iter().map(|&m| m as Vertex).collect();
        let state = ScBlockState::initialize(local, global, start, self.engine)?;
        self.states[survivor as usize] = Some(Box::new(state));
        self.start_of[survivor as usize] = start_global;
        Ok(InsertOutcome::Merged(
            merge.parts.iter().map(|&(c, k)| (c as Vertex, k)).collect(),
        ))
    }

    /// The 2-edge-connected blocks, ordered by smallest member, members
    /// ascending. Linear time.
    pub fn blocks(&self) -> Vec<Vec<Vertex>> {
        let keys: Vec<[u32; 5]> = (0..self.vertex_count())
            .map(|v| {
                let l = self.label(v);
                [self.top.find(v as u32), l.r as u32, l.c as u32, l.r_rev as u32, l.c_rev as u32]
            })
            .collect();
        group_by_keys(&keys)
    }

    /// Current strong bridges, sorted.
    pub fn strong_bridges(&self) -> Vec<(Vertex, Vertex)> {
        let mut out: Vec<_> = self.components().flat_map(|s| s.strong_bridges()).collect();
        out.sort_unstable();
        out
    }

    pub fn metrics(&self) -> IndexMetrics {
        let mut lifetimes = self.retired.clone();
        lifetimes.extend(self.components().map(lifetime));
        let unites =
            self.top.stats().merges + self.components().map(side_merges).sum::<u64>();
        let searches =
            self.top.stats().searches + self.components().map(side_searches).sum::<u64>();
        IndexMetrics {
            insertions: self.insertions,
            noops: self.noops,
            top_merges: self.top_merges,
            unites,
            searches,
            lifetimes,
        }
    }

    /// Scans of each vertex accumulated over every component lifetime.
    pub fn scans_total(&self) -> &[u64] {
        &self.scans_total
    }

    /// Checks every live component against a recomputation. Meant for tests.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        self.top.check_invariants().map_err(|e| format!("top level: {e}"))?;
        for v in 0..self.vertex_count() {
            let c = self.top.find(v as u32);
            let p = self.place[v];
            let size = self.top.members(c).len();
            if (size > 1) != (p.state == c) || (size == 1 && p.state != NIL) {
                return Err(format!("vertex {v} placed in state {} but component {c} has size {size}", p.state));
            }
        }
        for s in self.components() {
            s.check_invariants()?;
        }
        Ok(())
    }
}

fn side_merges(s: &ScBlockState) -> u64 {
    crate::graph::Direction::BOTH.iter().map(|&d| s.scc(d).stats().merges).sum()
}

fn side_searches(s: &ScBlockState) -> u64 {
    crate::graph::Direction::BOTH.iter().map(|&d| s.scc(d).stats().searches).sum()
}
