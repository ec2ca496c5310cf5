//! Dominator tree of one flow graph together with its bridges and bridge
//! decomposition, maintained under edge insertions.
//!
//! Vertices are the dense local ids of a [`FlowView`]. The tree is stored as a
//! parent array plus preorder intervals, so ancestor tests are O(1).

use std::fmt::Write as _;

use crate::graph::FlowView;
use crate::{Error, Result, NIL};

#[derive(Debug, Clone)]
pub struct DomTree {
    start: u32,
    parent: Vec<u32>,
    depth: Vec<u32>,
    pre: Vec<u32>,
    size: Vec<u32>,
    bridge: Vec<bool>,
    root: Vec<u32>,
    scratch: Scratch,
}

#[derive(Debug, Clone, Default)]
struct Scratch {
    bottleneck: Vec<u32>,
    buckets: Vec<Vec<u32>>,
}

impl PartialEq for DomTree {
    fn eq(&self, other: &Self) -> bool {
        self.start == other.start
            && self.parent == other.parent
            && self.depth == other.depth
            && self.pre == other.pre
            && self.size == other.size
            && self.bridge == other.bridge
            && self.root == other.root
    }
}

/// What an edge insertion did to one dominator tree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InsertionReport {
    /// Nearest common ancestor of the endpoints, before the insertion.
    pub z: u32,
    /// Vertices whose outgoing edges were examined, in scan order. These are
    /// exactly the affected vertices and their descendants reached by the
    /// search.
    pub scanned: Vec<u32>,
    /// Bridge-decomposition root of each scanned vertex before the insertion
    /// (parallel to `scanned`).
    pub old_roots: Vec<u32>,
    /// Vertices whose parent changed; all of them are now children of `z`.
    pub affected: Vec<u32>,
    /// Bridges `(d(v), v)` (old parent) that stopped being bridges.
    pub canceled: Vec<(u32, u32)>,
    /// Some canceled bridge has an unaffected head.
    pub locally_canceled: bool,
    /// First bridge on the tree path from `z` to the head, before the
    /// insertion, when the two lie in different decomposition trees.
    pub first_bridge: Option<(u32, u32)>,
}

impl DomTree {
    /// Dominator tree of `view` rooted at `start`, via semidominators and
    /// nearest common ancestors on the DFS tree.
    pub fn compute(view: FlowView<'_>, start: u32) -> Result<Self> {
        let n = view.vertex_count();
        let (order, num, dfs_parent) = dfs_numbering(view, start, n)?;

        let mut semi: Vec<u32> = (0..n as u32).collect();
        let mut label: Vec<u32> = (0..n as u32).collect();
        let mut ancestor = vec![NIL; n];
        let mut idom = dfs_parent.clone();
        let mut path = Vec::new();

        for w in (1..n).rev() {
            for &(_, v) in view.inn(order[w]) {
                let v = num[v as usize];
                let u = eval(v, &mut ancestor, &mut label, &semi, &mut path);
                if semi[u as usize] < semi[w] {
                    semi[w] = semi[u as usize];
                }
            }
            ancestor[w] = dfs_parent[w];
        }
        for w in 1..n {
            let mut x = idom[w];
            while x > semi[w] {
                x = idom[x as usize];
            }
            idom[w] = x;
        }

        let mut parent = vec![NIL; n];
        for w in 1..n {
            parent[order[w] as usize] = order[idom[w] as usize];
        }
        Ok(Self::from_parents(view, start, parent))
    }

    /// Reference computation: the iterative data-flow fixpoint over reverse
    /// postorder. Slower, but simple enough to trust.
    pub fn compute_iterative(view: FlowView<'_>, start: u32) -> Result<Self> {
        let n = view.vertex_count();
        // Fails early on unreachable vertices.
        dfs_numbering(view, start, n)?;
        let mut post = Vec::with_capacity(n);
        let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
        let mut seen = vec![false; n];
        seen[start as usize] = true;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            let outs = view.out(v);
            if *i < outs.len() {
                let w = outs[*i].1;
                *i += 1;
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push((w, 0));
                }
            } else {
                post.push(v);
                stack.pop();
            }
        }
        let mut rpo_num = vec![0u32; n];
        let rpo: Vec<u32> = post.iter().rev().copied().collect();
        for (i, &v) in rpo.iter().enumerate() {
            rpo_num[v as usize] = i as u32;
        }
        let mut idom = vec![NIL; n];
        idom[start as usize] = start;
        let mut changed = true;
        while changed {
            changed = false;
            for &v in rpo.iter().skip(1) {
                let mut new_idom = NIL;
                for &(_, p) in view.inn(v) {
                    if idom[p as usize] == NIL {
                        continue;
                    }
                    new_idom = if new_idom == NIL {
                        p
                    } else {
                        let (mut a, mut b) = (p, new_idom);
                        while a != b {
                            while rpo_num[a as usize] > rpo_num[b as usize] {
                                a = idom[a as usize];
                            }
                            while rpo_num[b as usize] > rpo_num[a as usize] {
                                b = idom[b as usize];
                            }
                        }
                        a
                    };
                }
                if idom[v as usize] != new_idom {
                    idom[v as usize] = new_idom;
                    changed = true;
                }
            }
        }
        idom[start as usize] = NIL;
        Ok(Self::from_parents(view, start, idom))
    }

    fn from_parents(view: FlowView<'_>, start: u32, parent: Vec<u32>) -> Self {
        let n = parent.len();
        let mut t = DomTree {
            start,
            parent,
            depth: vec![0; n],
            pre: vec![0; n],
            size: vec![0; n],
            bridge: vec![false; n],
            root: vec![0; n],
            scratch: Scratch::default(),
        };
        t.relayout();
        t.compute_bridges(view);
        t.relayout();
        t
    }

    /// Recomputes depth, preorder, subtree sizes and decomposition roots from
    /// the parent array and the bridge flags. Children are visited in
    /// ascending id order.
    fn relayout(&mut self) {
        let n = self.parent.len();
        let mut first = vec![0u32; n + 1];
        for v in 0..n {
            let p = self.parent[v];
            if p != NIL {
                first[p as usize + 1] += 1;
            }
        }
        for i in 0..n {
            first[i + 1] += first[i];
        }
        let mut fill = first.clone();
        let mut children = vec![0u32; n.saturating_sub(1)];
        for v in 0..n {
            let p = self.parent[v];
            if p != NIL {
                children[fill[p as usize] as usize] = v as u32;
                fill[p as usize] += 1;
            }
        }

        let mut order = Vec::with_capacity(n);
        let mut stack = vec![self.start];
        self.depth[self.start as usize] = 0;
        while let Some(v) = stack.pop() {
            let vi = v as usize;
            self.pre[vi] = order.len() as u32;
            order.push(v);
            self.root[vi] = if v == self.start || self.bridge[vi] {
                v
            } else {
                self.root[self.parent[vi] as usize]
            };
            let kids = &children[first[vi] as usize..first[vi + 1] as usize];
            for &c in kids.iter().rev() {
                self.depth[c as usize] = self.depth[vi] + 1;
                stack.push(c);
            }
        }
        debug_assert_eq!(order.len(), n);
        for &v in &order {
            self.size[v as usize] = 1;
        }
        for &v in order.iter().rev() {
            let p = self.parent[v as usize];
            if p != NIL {
                self.size[p as usize] += self.size[v as usize];
            }
        }
    }

    /// `(d(v), v)` is a bridge iff it is an edge and every other edge entering
    /// `v` leaves a descendant of `v`.
    fn compute_bridges(&mut self, view: FlowView<'_>) {
        for v in 0..self.parent.len() as u32 {
            let p = self.parent[v as usize];
            self.bridge[v as usize] = p != NIL && {
                let mut from_parent = false;
                let mut ok = true;
                for &(_, u) in view.inn(v) {
                    if u == p {
                        from_parent = true;
                    } else if !self.is_ancestor(v, u) {
                        ok = false;
                        break;
                    }
                }
                ok && from_parent
            };
        }
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Parent in the dominator tree, `None` for the start vertex.
    pub fn parent(&self, v: u32) -> Option<u32> {
        let p = self.parent[v as usize];
        (p != NIL).then_some(p)
    }

    pub fn depth(&self, v: u32) -> u32 {
        self.depth[v as usize]
    }

    pub fn pre(&self, v: u32) -> u32 {
        self.pre[v as usize]
    }

    /// Whether `(d(v), v)` is a bridge of the flow graph.
    pub fn is_bridge(&self, v: u32) -> bool {
        self.bridge[v as usize]
    }

    /// Root of the bridge-decomposition tree containing `v`.
    pub fn root(&self, v: u32) -> u32 {
        self.root[v as usize]
    }

    /// All bridges as `(d(v), v)` pairs, ordered by head.
    pub fn bridges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.len() as u32)
            .filter(|&v| self.bridge[v as usize])
            .map(|v| (self.parent[v as usize], v))
    }

    pub fn is_ancestor(&self, u: u32, v: u32) -> bool {
        let (pu, pv) = (self.pre[u as usize], self.pre[v as usize]);
        pu <= pv && pv < pu + self.size[u as usize]
    }

    pub fn nca(&self, u: u32, v: u32) -> u32 {
        let mut a = u;
        while !self.is_ancestor(a, v) {
            a = self.parent[a as usize];
        }
        a
    }

    /// Deepest ancestor of `v` (inclusive) in the decomposition tree rooted at
    /// `r`.
    pub fn nearest_ancestor_in(&self, v: u32, r: u32) -> Result<u32> {
        if !self.is_ancestor(r, v) {
            return Err(Error::InvalidArgument(format!("{r} is not an ancestor of {v}")));
        }
        Ok(self.nearest_ancestor_unchecked(v, r))
    }

    pub(crate) fn nearest_ancestor_unchecked(&self, v: u32, r: u32) -> u32 {
        let mut u = v;
        while self.root[u as usize] != r {
            u = self.parent[self.root[u as usize] as usize];
        }
        u
    }

    /// Updates the tree after `(x, y)` has been added to the graph behind
    /// `view`.
    pub fn apply_insertion(&mut self, view: FlowView<'_>, x: u32, y: u32) -> InsertionReport {
        if y == self.start {
            return InsertionReport { z: self.start, ..Default::default() };
        }
        let z = self.nca(x, y);
        let mut rep = InsertionReport { z, ..Default::default() };
        if z == y {
            return rep;
        }
        let rz = self.root[z as usize];
        if self.root[y as usize] != rz {
            let mut q = self.root[y as usize];
            while self.root[self.parent[q as usize] as usize] != rz {
                q = self.root[self.parent[q as usize] as usize];
            }
            rep.first_bridge = Some((self.parent[q as usize], q));
        }

        // Child of z on the tree path to y.
        let mut t = y;
        while self.parent[t as usize] != z {
            t = self.parent[t as usize];
        }
        if t == y {
            // No vertex can be affected; only (z, y) can lose bridge status.
            if self.bridge[y as usize] {
                self.bridge[y as usize] = false;
                rep.canceled.push((z, y));
                rep.locally_canceled = true;
                self.relayout();
            }
            return rep;
        }

        // Max-bottleneck search from y over pre-insertion depths. A vertex is
        // reached when some path from y to it stays at depth >= threshold; it
        // is affected iff its bottleneck equals its own depth.
        let threshold = self.depth[z as usize] + 2;
        let n = self.len();
        let mut scratch = std::mem::take(&mut self.scratch);
        if scratch.bottleneck.len() != n {
            scratch.bottleneck = vec![NIL; n];
        }
        let top = self.depth[y as usize] as usize;
        if scratch.buckets.len() <= top {
            scratch.buckets.resize(top + 1, Vec::new());
        }
        let b = &mut scratch.bottleneck;
        let buckets = &mut scratch.buckets;
        let watch_t = self.bridge[t as usize];
        let mut t_reached = false;

        b[y as usize] = top as u32;
        buckets[top].push(y);
        let mut level = top;
        while level >= threshold as usize {
            let Some(v) = buckets[level].pop() else {
                level -= 1;
                continue;
            };
            rep.scanned.push(v);
            rep.old_roots.push(self.root[v as usize]);
            for &(_, w) in view.out(v) {
                if w == t {
                    t_reached |= watch_t;
                    continue;
                }
                if b[w as usize] != NIL {
                    continue;
                }
                let cand = (level as u32).min(self.depth[w as usize]);
                if cand >= threshold {
                    b[w as usize] = cand;
                    buckets[cand as usize].push(w);
                }
            }
        }
        for &v in &rep.scanned {
            if b[v as usize] == self.depth[v as usize] {
                rep.affected.push(v);
            }
            b[v as usize] = NIL;
        }
        self.scratch = scratch;

        for &a in &rep.affected {
            let old = self.parent[a as usize];
            self.parent[a as usize] = z;
            if self.bridge[a as usize] {
                self.bridge[a as usize] = false;
                rep.canceled.push((old, a));
            }
        }
        if t_reached {
            self.bridge[t as usize] = false;
            rep.canceled.push((z, t));
            rep.locally_canceled = true;
        }
        if !rep.affected.is_empty() || t_reached {
            self.relayout();
        }
        rep
    }

    /// One line per vertex: `v d(v) depth r_v bridge`, with `-` for the
    /// missing parent of the start vertex and `0`/`1` for the bridge flag.
    pub fn dump(&self, name: impl Fn(u32) -> String) -> String {
        let mut out = String::new();
        for v in 0..self.len() as u32 {
            let p = self.parent(v).map_or_else(|| "-".to_string(), &name);
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                name(v),
                p,
                self.depth(v),
                name(self.root(v)),
                u8::from(self.is_bridge(v))
            );
        }
        out
    }
}

type Numbering = (Vec<u32>, Vec<u32>, Vec<u32>);

/// DFS preorder from `start`: the vertex order, the number of each vertex and
/// the DFS-tree parent (as a number) of each number.
fn dfs_numbering(view: FlowView<'_>, start: u32, n: usize) -> Result<Numbering> {
    let mut num = vec![NIL; n];
    let mut order = Vec::with_capacity(n);
    let mut dfs_parent = Vec::with_capacity(n);
    num[start as usize] = 0;
    order.push(start);
    dfs_parent.push(NIL);
    let mut stack: Vec<(u32, usize)> = vec![(start, 0)];
    while let Some(&mut (v, ref mut i)) = stack.last_mut() {
        let outs = view.out(v);
        if *i < outs.len() {
            let w = outs[*i].1;
            *i += 1;
            if num[w as usize] == NIL {
                num[w as usize] = order.len() as u32;
                dfs_parent.push(num[v as usize]);
                order.push(w);
                stack.push((w, 0));
            }
        } else {
            stack.pop();
        }
    }
    if order.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} of {n} vertices unreachable from the start vertex",
            n - order.len()
        )));
    }
    Ok((order, num, dfs_parent))
}

fn eval(v: u32, ancestor: &mut [u32], label: &mut [u32], semi: &[u32], path: &mut Vec<u32>) -> u32 {
    if ancestor[v as usize] == NIL {
        return v;
    }
    path.clear();
    let mut x = v;
    while ancestor[ancestor[x as usize] as usize] != NIL {
        path.push(x);
        x = ancestor[x as usize];
    }
    for &x in path.iter().rev() {
        let a = ancestor[x as usize] as usize;
        if semi[label[a] as usize] < semi[label[x as usize] as usize] {
            label[x as usize] = label[a];
        }
        ancestor[x as usize] = ancestor[a];
    }
    label[v as usize]
}
