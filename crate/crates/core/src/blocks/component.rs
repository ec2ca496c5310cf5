//! State of one strongly connected component: the dominator trees of both
//! flow graphs from a fixed start vertex, their bridge decompositions, and
//! the auxiliary components of every decomposition tree.

use super::{condense, csr};
use crate::auxiliary::{copy_tails, Label};
use crate::dominator::{DomTree, InsertionReport};
use crate::graph::{CompactGraph, Direction, FlowView};
use crate::inc_scc::{Engine, IncScc};
use crate::{Error, Result, Vertex, NIL};

#[derive(Debug, Clone)]
struct Side {
    dom: DomTree,
    scc: IncScc,
    // Scratch, all entries NIL / false between updates.
    local: Vec<u32>,
    moved: Vec<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ComponentMetrics {
    pub insertions: u64,
    /// Rebuilds caused by a locally canceled bridge.
    pub reinits: u64,
    /// Rebuilds caused by a failed internal consistency check. Expected to
    /// stay zero; tests assert it.
    pub fallbacks: u64,
    /// Relinked copies that broke the order and needed a search. Expected to
    /// stay zero; tests assert it.
    pub relink_repairs: u64,
    /// How often each vertex was scanned, per side.
    pub scans: [Vec<u32>; 2],
    /// Depth of each vertex when the component was formed, per side.
    pub initial_depth: [Vec<u32>; 2],
    /// Strong bridges when the component was formed.
    pub initial_strong_bridges: usize,
}

impl ComponentMetrics {
    /// Largest number of scans of a single vertex, both sides together.
    pub fn max_scans(&self) -> u32 {
        self.scans[0]
            .iter()
            .zip(&self.scans[1])
            .map(|(a, b)| a + b)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone)]
pub struct ScBlockState {
    engine: Engine,
    start: u32,
    global: Vec<Vertex>,
    graph: CompactGraph,
    sides: [Side; 2],
    metrics: ComponentMetrics,
}

fn init_side(graph: &CompactGraph, dir: Direction, start: u32, engine: Engine) -> Result<Side> {
    let view = graph.view(dir);
    let n = graph.vertex_count();
    let dom = DomTree::compute(view, start)?;
    let tails = copy_tails(&dom, view);
    let copies: Vec<(u32, u32, u32)> = tails
        .iter()
        .enumerate()
        .filter(|&(_, &t)| t != NIL)
        .map(|(e, &t)| (e as u32, t, view.endpoints(e as u32).1))
        .collect();
    let (first, adj) = csr(n, copies.iter().map(|&(_, t, h)| (t, h)));
    let (comp, count) = condense(&first, &adj);
    let mut canon = vec![NIL; count];
    for v in 0..n as u32 {
        let slot = &mut canon[comp[v as usize] as usize];
        if *slot == NIL {
            *slot = v;
        }
    }
    let comp_of: Vec<u32> = comp.iter().map(|&c| canon[c as usize]).collect();
    let mut by_root: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &c in &canon {
        by_root[dom.root(c) as usize].push(c);
    }
    let lists: Vec<(u32, Vec<u32>)> = by_root
        .into_iter()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(r, l)| (r as u32, l))
        .collect();
    let hint = 2 * graph.edge_count().max(n);
    let scc = IncScc::build(engine, &comp_of, &lists, &copies, hint);
    Ok(Side { dom, scc, local: vec![NIL; n], moved: vec![false; n] })
}

impl ScBlockState {
    /// Builds the state of a strongly connected graph. `global[v]` names
    /// local vertex `v` in the caller's graph.
    pub fn initialize(graph: CompactGraph, global: Vec<Vertex>, start: u32, engine: Engine) -> Result<Self> {
        let n = graph.vertex_count();
        if n == 0 || start as usize >= n || global.len() != n {
            return Err(Error::InvalidArgument(format!(
                "start {start} or name table invalid for {n} vertices"
            )));
        }
        let sides = [
            init_side(&graph, Direction::Forward, start, engine)?,
            init_side(&graph, Direction::Reverse, start, engine)?,
        ];
        let metrics = ComponentMetrics {
            scans: [vec![0; n], vec![0; n]],
            initial_depth: [
                (0..n as u32).map(|v| sides[0].dom.depth(v)).collect(),
                (0..n as u32).map(|v| sides[1].dom.depth(v)).collect(),
            ],
            ..Default::default()
        };
        let mut state = ScBlockState { engine, start, global, graph, sides, metrics };
        state.metrics.initial_strong_bridges = state.strong_bridges().len();
        Ok(state)
    }

    fn reinitialize(&mut self) {
        for d in Direction::BOTH {
            self.sides[d.index()] = init_side(&self.graph, d, self.start, self.engine)
                .expect("component stays strongly connected under insertions");
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.global.len()
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn global(&self) -> &[Vertex] {
        &self.global
    }

    pub fn graph(&self) -> &CompactGraph {
        &self.graph
    }

    pub fn dom(&self, dir: Direction) -> &DomTree {
        &self.sides[dir.index()].dom
    }

    pub fn scc(&self, dir: Direction) -> &IncScc {
        &self.sides[dir.index()].scc
    }

    pub fn metrics(&self) -> &ComponentMetrics {
        &self.metrics
    }

    /// Label of local vertex `v`, in global names.
    pub fn label(&self, v: u32) -> Label {
        let [f, r] = &self.sides;
        let g = |x: u32| self.global[x as usize];
        Label {
            r: g(f.dom.root(v)),
            c: g(f.scc.find(v)),
            r_rev: g(r.dom.root(v)),
            c_rev: g(r.scc.find(v)),
        }
    }

    /// Strong bridges of the component in global names, sorted.
    pub fn strong_bridges(&self) -> Vec<(Vertex, Vertex)> {
        let g = |x: u32| self.global[x as usize];
        let mut out: Vec<_> = self.sides[0]
            .dom
            .bridges()
            .map(|(p, v)| (g(p), g(v)))
            .chain(self.sides[1].dom.bridges().map(|(p, v)| (g(v), g(p))))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Adds the local edge `(x, y)`. The caller guarantees it is new.
    /// Returns the vertices scanned on either side, with repetitions.
    pub fn insert_edge(&mut self, x: u32, y: u32) -> Vec<u32> {
        let e = self.graph.push_edge(x, y);
        self.metrics.insertions += 1;
        let mut reports: [InsertionReport; 2] = Default::default();
        let mut scanned = Vec::new();
        for d in Direction::BOTH {
            let view = self.graph.view(d);
            let (a, b) = view.endpoints(e);
            let rep = self.sides[d.index()].dom.apply_insertion(view, a, b);
            for &v in &rep.scanned {
                self.metrics.scans[d.index()][v as usize] += 1;
            }
            scanned.extend_from_slice(&rep.scanned);
            reports[d.index()] = rep;
        }
        if reports.iter().any(|r| r.locally_canceled) {
            self.metrics.reinits += 1;
            self.reinitialize();
            return scanned;
        }
        for d in Direction::BOTH {
            let view = self.graph.view(d);
            let side = &mut self.sides[d.index()];
            match update_ac(view, side, &reports[d.index()], e) {
                Ok(repairs) => self.metrics.relink_repairs += repairs,
                Err(()) => {
                    self.metrics.fallbacks += 1;
                    self.reinitialize();
                    return scanned;
                }
            }
        }
        scanned
    }

    /// Checks that every vertex was scanned at most as often as its depth
    /// dropped since the component formed.
    pub fn check_scan_accounting(&self) -> std::result::Result<(), String> {
        for d in Direction::BOTH {
            let i = d.index();
            for v in 0..self.vertex_count() as u32 {
                let used = self.metrics.scans[i][v as usize] + self.sides[i].dom.depth(v);
                if used > self.metrics.initial_depth[i][v as usize] {
                    return Err(format!("{d:?} side: vertex {v} scanned {used} beyond its depth budget"));
                }
            }
        }
        Ok(())
    }

    /// Structural checks of both sides plus agreement with a fresh build.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let fresh = ScBlockState::initialize(self.graph.clone(), self.global.clone(), self.start, self.engine)
            .map_err(|e| e.to_string())?;
        for d in Direction::BOTH {
            let (mine, theirs) = (&self.sides[d.index()], &fresh.sides[d.index()]);
            if mine.dom != theirs.dom {
                return Err(format!("{d:?} dominator tree differs from recomputation"));
            }
            mine.scc.check_invariants().map_err(|e| format!("{d:?} side: {e}"))?;
            for v in 0..self.vertex_count() as u32 {
                for w in 0..self.vertex_count() as u32 {
                    let same = mine.scc.find(v) == mine.scc.find(w);
                    if same != (theirs.scc.find(v) == theirs.scc.find(w)) {
                        return Err(format!("{d:?} auxiliary components differ at {v}, {w}"));
                    }
                }
            }
        }
        self.check_scan_accounting()
    }
}

/// Updates the auxiliary components of one side after its dominator tree
/// absorbed edge `e`. Returns the number of relinked copies that needed a
/// search, or `Err` when a consistency check failed and the caller must
/// rebuild.
fn update_ac(view: FlowView<'_>, side: &mut Side, rep: &InsertionReport, e: u32) -> std::result::Result<u64, ()> {
    let Side { dom, scc, local, moved } = side;
    let rz = dom.root(rep.z);
    let mut moved_list = Vec::new();
    let mut outcome = Ok(());

    if let Some((p, _)) = rep.first_bridge {
        // Scanned vertices that were outside z's decomposition tree.
        let outside: Vec<u32> = rep
            .scanned
            .iter()
            .zip(&rep.old_roots)
            .filter(|&(_, &r)| r != rz)
            .map(|(&v, _)| v)
            .collect();
        for (i, &v) in outside.iter().enumerate() {
            local[v as usize] = i as u32;
            if dom.root(v) == rz {
                moved[v as usize] = true;
                moved_list.push(v);
            }
        }
        if !moved_list.is_empty() {
            outcome = merge_moved(view, dom, scc, local, moved, &outside, p, rz);
        }
        for &v in &outside {
            local[v as usize] = NIL;
        }
    }

    let mut changed = Vec::new();
    if outcome.is_ok() {
        let relink = |scc: &mut IncScc, e2: u32, force_in: bool, changed: &mut Vec<u32>| {
            let (a, h) = view.endpoints(e2);
            let rh = dom.root(h);
            let tail = dom.is_ancestor(rh, a).then(|| dom.nearest_ancestor_unchecked(a, rh));
            if scc.relink(e2, tail, h, force_in) {
                changed.push(e2);
            }
        };
        for &v in &rep.scanned {
            for &(e2, h) in view.out(v) {
                relink(scc, e2, moved[h as usize], &mut changed);
            }
        }
        for &v in &moved_list {
            for &(e2, _) in view.inn(v) {
                relink(scc, e2, true, &mut changed);
            }
        }
        let (_, y) = view.endpoints(e);
        relink(scc, e, moved[y as usize], &mut changed);
    }
    for &v in &moved_list {
        moved[v as usize] = false;
    }
    outcome?;

    let mut repairs = 0;
    for &e2 in changed.iter().filter(|&&e2| e2 != e) {
        if scc.violates(e2) {
            repairs += 1;
            scc.fix_edge(e2);
        }
    }
    scc.fix_edge(e);
    Ok(repairs)
}

/// Moves the auxiliary components of the moved vertices into the tree of
/// `rz`: those that reach the component of `p` merge into it, the rest are
/// placed right after it in topological order.
#[allow(clippy::too_many_arguments)]
fn merge_moved(
    view: FlowView<'_>,
    dom: &DomTree,
    scc: &mut IncScc,
    local: &[u32],
    moved: &[bool],
    outside: &[u32],
    p: u32,
    rz: u32,
) -> std::result::Result<(), ()> {
    let fp = scc.find(p);
    let k = outside.len();
    let mut edges = Vec::new();
    let mut to_star = vec![false; k];
    for (i, &v) in outside.iter().enumerate() {
        for &(_, w) in view.out(v) {
            let j = local[w as usize];
            if j != NIL {
                edges.push((i as u32, j));
            } else if dom.root(w) == rz && scc.find(w) == fp {
                to_star[i] = true;
            }
        }
    }
    let (first, adj) = csr(k, edges.iter().copied());
    let (comp, count) = condense(&first, &adj);
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); count];
    for i in 0..k as u32 {
        members[comp[i as usize] as usize].push(i);
    }
    // Components reaching the dummy root; successors come later in the
    // topological order, so a reverse sweep suffices.
    let mut reach = vec![false; count];
    for t in (0..count).rev() {
        let mut r = members[t].iter().any(|&i| to_star[i as usize]);
        for &i in &members[t] {
            for &j in &adj[first[i as usize] as usize..first[i as usize + 1] as usize] {
                let tj = comp[j as usize] as usize;
                r |= tj != t && reach[tj];
            }
        }
        reach[t] = r;
    }

    let mut anchor = fp;
    let mut olds = Vec::new();
    for t in 0..count {
        olds.clear();
        for &i in &members[t] {
            let v = outside[i as usize];
            if moved[v as usize] {
                olds.push(scc.find(v));
            }
        }
        if olds.is_empty() {
            continue;
        }
        olds.sort_unstable();
        olds.dedup();
        // A previous auxiliary component must move as a whole.
        for &c in &olds {
            if scc.members(c).iter().any(|&v| !moved[v as usize]) {
                return Err(());
            }
        }
        if reach[t] {
            for &c in &olds {
                scc.unite(fp, c);
            }
        } else {
            let survivor = olds[0];
            for &c in &olds {
                scc.evict(c);
            }
            for &c in &olds[1..] {
                scc.unite(survivor, c);
            }
            scc.admit_after(survivor, anchor);
            anchor = survivor;
        }
    }
    scc.rebuild_ranks(rz);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Digraph;
    use crate::oracle;
    use proptest::prelude::*;

    fn state(n: usize, edges: &[(usize, usize)], engine: Engine) -> ScBlockState {
        let g = CompactGraph::from_edges(n, edges);
        ScBlockState::initialize(g, (0..n).collect(), 0, engine).unwrap()
    }

    fn partition(s: &ScBlockState) -> Vec<Vec<usize>> {
        let keys: Vec<[u32; 4]> = (0..s.vertex_count() as u32)
            .map(|v| {
                let l = s.label(v);
                [l.r as u32, l.c as u32, l.r_rev as u32, l.c_rev as u32]
            })
            .collect();
        super::super::group_by_keys(&keys)
    }

    #[test]
    fn initialize_examples() {
        let tri = [(0, 1), (1, 0), (1, 2), (2, 1), (0, 2), (2, 0)];
        assert_eq!(partition(&state(3, &tri, Engine::OneWay)), vec![vec![0, 1, 2]]);
        let cyc = [(0, 1), (1, 2), (2, 0)];
        assert_eq!(partition(&state(3, &cyc, Engine::OneWay)), vec![vec![0], vec![1], vec![2]]);
        let sq = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (2, 0)];
        assert_eq!(partition(&state(4, &sq, Engine::TwoWay)), vec![vec![0, 2], vec![1], vec![3]]);
    }

    #[test]
    fn not_strongly_connected_is_rejected() {
        let g = CompactGraph::from_edges(3, &[(0, 1), (1, 0)]);
        assert!(ScBlockState::initialize(g, vec![0, 1, 2], 0, Engine::OneWay).is_err());
    }

    #[test]
    fn square_then_chords() {
        for engine in [Engine::OneWay, Engine::TwoWay] {
            let mut s = state(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], engine);
            s.insert_edge(0, 2);
            assert_eq!(partition(&s), vec![vec![0], vec![1], vec![2], vec![3]]);
            assert_eq!(s.sides[0].dom.root(2), 0);
            s.check_invariants().unwrap();
            s.insert_edge(2, 0);
            assert_eq!(partition(&s), vec![vec![0, 2], vec![1], vec![3]]);
            s.check_invariants().unwrap();
            assert_eq!(s.metrics().fallbacks, 0);
        }
    }

    fn digraph(n: usize, edges: &[(usize, usize)]) -> Digraph {
        let mut g = Digraph::new(n).unwrap();
        for &(u, v) in edges {
            g.add_edge(u, v).unwrap();
        }
        g
    }

    proptest! {
        #[test]
        fn insertions_match_oracle(
            n in 2usize..10,
            raw in prop::collection::vec((0usize..10, 0usize..10), 0..50),
            two_way in any::<bool>(),
        ) {
            let engine = if two_way { Engine::TwoWay } else { Engine::OneWay };
            let mut edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
            let mut s = state(n, &edges, engine);
            for (u, v) in raw {
                let (u, v) = (u % n, v % n);
                if u == v || edges.contains(&(u, v)) {
                    continue;
                }
                edges.push((u, v));
                s.insert_edge(u as u32, v as u32);
                prop_assert_eq!(s.check_invariants(), Ok(()));
                let g = digraph(n, &edges);
                prop_assert_eq!(partition(&s), oracle::blocks(&g).unwrap());
                prop_assert_eq!(s.strong_bridges(), oracle::strong_bridges(&g));
                prop_assert_eq!(s.metrics().fallbacks, 0);
                prop_assert_eq!(s.metrics().relink_repairs, 0);
            }
        }
    }
}
