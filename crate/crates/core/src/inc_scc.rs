//! Incremental strongly connected components over a set of disjoint graphs.
//!
//! Each graph is identified by a list id and holds its components as
//! canonical vertices. Edges are stored as *copies*: an edge id together with
//! the (tail, head) it currently represents, threaded into a circular
//! out-ring of the tail's component. Copies can be relinked when the graph an
//! edge belongs to changes, and components can be moved between lists.
//!
//! Two search strategies are provided:
//!
//! * one-way: a topological order per list, repaired by a forward search
//!   bounded by the rank of the tail;
//! * two-way: pseudo-topological levels with a backward search capped at
//!   `delta` edges and a forward search that raises levels.

use crate::NIL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Engine {
    #[default]
    OneWay,
    TwoWay,
}

impl std::str::FromStr for Engine {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "oneway" => Ok(Engine::OneWay),
            "twoway" => Ok(Engine::TwoWay),
            _ => Err(crate::Error::InvalidArgument(format!("unknown engine {s:?}"))),
        }
    }
}

/// Union-find where every set is named by a chosen canonical vertex and finds
/// are a single lookup. Unions relabel the smaller set.
#[derive(Debug, Clone)]
pub struct CanonicalDsu {
    set_of: Vec<u32>,
    name: Vec<u32>,
    members: Vec<Vec<u32>>,
}

impl CanonicalDsu {
    pub fn new(n: usize) -> Self {
        CanonicalDsu {
            set_of: (0..n as u32).collect(),
            name: (0..n as u32).collect(),
            members: (0..n as u32).map(|v| vec![v]).collect(),
        }
    }

    pub fn find(&self, v: u32) -> u32 {
        self.name[self.set_of[v as usize] as usize]
    }

    /// Members of the set whose canonical vertex is `c`.
    pub fn members(&self, c: u32) -> &[u32] {
        &self.members[self.set_of[c as usize] as usize]
    }

    /// Merges the sets of canonical vertices `p` and `q`; `p` stays canonical.
    pub fn unite(&mut self, p: u32, q: u32) -> u32 {
        let (sp, sq) = (self.set_of[p as usize], self.set_of[q as usize]);
        if sp == sq {
            return p;
        }
        let (big, small) = if self.members[sp as usize].len() >= self.members[sq as usize].len() {
            (sp, sq)
        } else {
            (sq, sp)
        };
        let moved = std::mem::take(&mut self.members[small as usize]);
        for &v in &moved {
            self.set_of[v as usize] = big;
        }
        self.members[big as usize].extend(moved);
        self.name[big as usize] = p;
        p
    }
}

/// Result of a search that closed a cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Merge {
    pub survivor: u32,
    /// Canonical vertex and size of every component that was merged,
    /// survivor included, before the merge.
    pub parts: Vec<(u32, usize)>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SccStats {
    pub searches: u64,
    pub edges_traversed: u64,
    pub merges: u64,
}

#[derive(Debug, Clone)]
pub struct IncScc {
    engine: Engine,
    dsu: CanonicalDsu,
    // Per canonical vertex.
    list_of: Vec<u32>,
    prev: Vec<u32>,
    next: Vec<u32>,
    rank: Vec<u32>,
    level: Vec<u32>,
    out_head: Vec<u32>,
    in_edges: Vec<Vec<u32>>,
    // Per list id.
    first: Vec<u32>,
    last: Vec<u32>,
    // Per edge id.
    copy_tail: Vec<u32>,
    copy_head: Vec<u32>,
    ring_next: Vec<u32>,
    ring_prev: Vec<u32>,
    in_ring: Vec<bool>,
    delta: usize,
    stats: SccStats,
    // Search scratch: epoch-stamped marks per vertex.
    mark: Vec<u32>,
    mark_b: Vec<u32>,
    epoch: u32,
    buf: Vec<u32>,
}

impl IncScc {
    /// `n` singleton components, none of them in a list yet.
    pub fn new(engine: Engine, n: usize) -> Self {
        IncScc {
            engine,
            dsu: CanonicalDsu::new(n),
            list_of: vec![NIL; n],
            prev: vec![NIL; n],
            next: vec![NIL; n],
            rank: vec![0; n],
            level: vec![1; n],
            out_head: vec![NIL; n],
            in_edges: vec![Vec::new(); n],
            first: vec![NIL; n],
            last: vec![NIL; n],
            copy_tail: Vec::new(),
            copy_head: Vec::new(),
            ring_next: Vec::new(),
            ring_prev: Vec::new(),
            in_ring: Vec::new(),
            delta: 1,
            stats: SccStats::default(),
            mark: vec![0; n],
            mark_b: vec![0; n],
            epoch: 0,
            buf: Vec::new(),
        }
    }

    /// Builds the structure from known components.
    ///
    /// `comp_of[v]` is the canonical vertex of `v`; each entry of `lists` is a
    /// list id with its canonical vertices in topological order; `copies` are
    /// `(edge, tail, head)` triples consistent with that order.
    pub fn build(
        engine: Engine,
        comp_of: &[u32],
        lists: &[(u32, Vec<u32>)],
        copies: &[(u32, u32, u32)],
        edge_hint: usize,
    ) -> Self {
        let n = comp_of.len();
        let mut s = IncScc::new(engine, n);
        for v in 0..n as u32 {
            let c = comp_of[v as usize];
            if c != v {
                s.dsu.unite(c, v);
            }
        }
        for (id, order) in lists {
            for &c in order {
                s.push_back(*id, c);
            }
            s.rebuild_ranks(*id);
        }
        for &(e, t, h) in copies {
            s.link(e, t, h);
            let (u, w) = (s.find(t), s.find(h));
            if u != w && engine == Engine::TwoWay {
                s.in_edges[w as usize].push(e);
            }
        }
        s.set_delta_hint(edge_hint.max(copies.len()), n);
        s
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn stats(&self) -> SccStats {
        self.stats
    }

    /// Cap on backward-search edges for the two-way engine, from the expected
    /// edge and vertex counts.
    pub fn set_delta_hint(&mut self, m: usize, n: usize) {
        let (m, n) = (m.max(1) as f64, n.max(1) as f64);
        self.delta = m.sqrt().min(n.powf(2.0 / 3.0)).ceil().max(1.0) as usize;
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn find(&self, v: u32) -> u32 {
        self.dsu.find(v)
    }

    pub fn members(&self, c: u32) -> &[u32] {
        self.dsu.members(c)
    }

    pub fn list_of(&self, c: u32) -> Option<u32> {
        let l = self.list_of[c as usize];
        (l != NIL).then_some(l)
    }

    pub fn rank(&self, c: u32) -> u32 {
        self.rank[c as usize]
    }

    pub fn level(&self, c: u32) -> u32 {
        self.level[c as usize]
    }

    /// Canonical vertices of a list in order.
    pub fn list(&self, id: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut c = self.first[id as usize];
        while c != NIL {
            out.push(c);
            c = self.next[c as usize];
        }
        out
    }

    /// Current copy of edge `e` as `(tail, head)`, if linked.
    pub fn copy(&self, e: u32) -> Option<(u32, u32)> {
        let t = *self.copy_tail.get(e as usize)?;
        (t != NIL).then(|| (t, self.copy_head[e as usize]))
    }

    // ---- lists ----

    fn push_back(&mut self, id: u32, c: u32) {
        let l = self.last[id as usize];
        self.insert_between(id, c, l, NIL);
    }

    fn insert_between(&mut self, id: u32, c: u32, before: u32, after: u32) {
        let ci = c as usize;
        self.list_of[ci] = id;
        self.prev[ci] = before;
        self.next[ci] = after;
        if before == NIL {
            self.first[id as usize] = c;
        } else {
            self.next[before as usize] = c;
        }
        if after == NIL {
            self.last[id as usize] = c;
        } else {
            self.prev[after as usize] = c;
        }
    }

    fn list_remove(&mut self, c: u32) {
        let ci = c as usize;
        let id = self.list_of[ci];
        if id == NIL {
            return;
        }
        let (p, n) = (self.prev[ci], self.next[ci]);
        if p == NIL {
            self.first[id as usize] = n;
        } else {
            self.next[p as usize] = n;
        }
        if n == NIL {
            self.last[id as usize] = p;
        } else {
            self.prev[n as usize] = p;
        }
        self.list_of[ci] = NIL;
        self.prev[ci] = NIL;
        self.next[ci] = NIL;
    }

    /// Assigns ranks 1, 2, ... along a list.
    pub fn rebuild_ranks(&mut self, id: u32) {
        let mut r = 1;
        let mut c = self.first[id as usize];
        while c != NIL {
            self.rank[c as usize] = r;
            r += 1;
            c = self.next[c as usize];
        }
    }

    /// Renumbers from `c` onward: the first `force` vertices unconditionally,
    /// then until the existing ranks are already increasing.
    fn renumber_from(&mut self, c: u32, force: usize) {
        let p = self.prev[c as usize];
        let mut r = if p == NIL { 1 } else { self.rank[p as usize] + 1 };
        let mut cur = c;
        let mut k = 0;
        while cur != NIL {
            if k >= force && self.rank[cur as usize] >= r {
                break;
            }
            self.rank[cur as usize] = r;
            r += 1;
            k += 1;
            cur = self.next[cur as usize];
        }
    }

    /// Removes component `c` from its list. Ranks elsewhere are untouched.
    pub fn evict(&mut self, c: u32) {
        self.list_remove(c);
    }

    /// Places component `c` right after `anchor`, at the anchor's level, with
    /// an empty in-list. Ranks of the list must be rebuilt afterwards.
    pub fn admit_after(&mut self, c: u32, anchor: u32) {
        self.list_remove(c);
        let id = self.list_of[anchor as usize];
        let after = self.next[anchor as usize];
        self.insert_between(id, c, anchor, after);
        self.level[c as usize] = self.level[anchor as usize];
        self.in_edges[c as usize].clear();
    }

    // ---- rings ----

    fn ensure_edge(&mut self, e: u32) {
        let need = e as usize + 1;
        if self.copy_tail.len() < need {
            self.copy_tail.resize(need, NIL);
            self.copy_head.resize(need, NIL);
            self.ring_next.resize(need, NIL);
            self.ring_prev.resize(need, NIL);
            self.in_ring.resize(need, false);
        }
    }

    fn ring_insert(&mut self, c: u32, e: u32) {
        let ei = e as usize;
        let h = self.out_head[c as usize];
        if h == NIL {
            self.ring_next[ei] = e;
            self.ring_prev[ei] = e;
            self.out_head[c as usize] = e;
        } else {
            let hn = self.ring_next[h as usize];
            self.ring_next[h as usize] = e;
            self.ring_prev[ei] = h;
            self.ring_next[ei] = hn;
            self.ring_prev[hn as usize] = e;
        }
        self.in_ring[ei] = true;
    }

    fn ring_remove(&mut self, c: u32, e: u32) {
        let ei = e as usize;
        if !self.in_ring[ei] {
            return;
        }
        let (p, n) = (self.ring_prev[ei], self.ring_next[ei]);
        if n == e {
            self.out_head[c as usize] = NIL;
        } else {
            self.ring_next[p as usize] = n;
            self.ring_prev[n as usize] = p;
            if self.out_head[c as usize] == e {
                self.out_head[c as usize] = n;
            }
        }
        self.in_ring[ei] = false;
    }

    fn ring_splice(&mut self, p: u32, q: u32) {
        let (a, b) = (self.out_head[p as usize], self.out_head[q as usize]);
        self.out_head[q as usize] = NIL;
        if b == NIL {
            return;
        }
        if a == NIL {
            self.out_head[p as usize] = b;
            return;
        }
        let (an, bn) = (self.ring_next[a as usize], self.ring_next[b as usize]);
        self.ring_next[a as usize] = bn;
        self.ring_prev[bn as usize] = a;
        self.ring_next[b as usize] = an;
        self.ring_prev[an as usize] = b;
    }

    /// Appends the out-ring of `c` to the scratch buffer, dropping copies
    /// that have become internal to `c`.
    fn snapshot_ring(&mut self, c: u32) {
        let start = self.out_head[c as usize];
        if start == NIL {
            return;
        }
        let from = self.buf.len();
        let mut e = start;
        loop {
            self.buf.push(e);
            e = self.ring_next[e as usize];
            if e == start {
                break;
            }
        }
        let mut i = from;
        while i < self.buf.len() {
            let e = self.buf[i];
            if self.find(self.copy_head[e as usize]) == c {
                self.ring_remove(c, e);
                self.buf.swap_remove(i);
            } else {
                i += 1;
            }
        }
    }

    /// Stores the copy `(tail, head)` for edge `e` without any search.
    pub fn link(&mut self, e: u32, tail: u32, head: u32) {
        self.ensure_edge(e);
        self.unlink(e);
        self.copy_tail[e as usize] = tail;
        self.copy_head[e as usize] = head;
        let (c, h) = (self.find(tail), self.find(head));
        if c != h {
            self.ring_insert(c, e);
        }
    }

    pub fn unlink(&mut self, e: u32) {
        let Some(&t) = self.copy_tail.get(e as usize) else {
            return;
        };
        if t == NIL {
            return;
        }
        let c = self.find(t);
        self.ring_remove(c, e);
        self.copy_tail[e as usize] = NIL;
        self.copy_head[e as usize] = NIL;
    }

    /// Points edge `e` at a new copy. Returns whether anything changed. When
    /// `force_in` is set, or the copy changed, a same-level copy is recorded
    /// in the head's in-list.
    pub fn relink(&mut self, e: u32, tail: Option<u32>, head: u32, force_in: bool) -> bool {
        let changed = match tail {
            None => {
                let had = self.copy(e).is_some();
                self.unlink(e);
                had
            }
            Some(t) => {
                let changed = self.copy(e) != Some((t, head));
                if changed {
                    self.link(e, t, head);
                }
                changed
            }
        };
        if let Some(t) = tail {
            if (changed || force_in) && self.engine == Engine::TwoWay {
                let (u, w) = (self.find(t), self.find(head));
                if u != w && self.level[u as usize] == self.level[w as usize] {
                    self.in_edges[w as usize].push(e);
                }
            }
        }
        changed
    }

    /// Merges component `q` into `p`; `p` stays canonical and keeps its place
    /// and level. `q` leaves its list.
    pub fn unite(&mut self, p: u32, q: u32) {
        if p == q {
            return;
        }
        self.list_remove(q);
        self.dsu.unite(p, q);
        self.ring_splice(p, q);
        let moved = std::mem::take(&mut self.in_edges[q as usize]);
        self.in_edges[p as usize].extend(moved);
        self.stats.merges += 1;
    }

    fn next_epoch(&mut self) -> u32 {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.mark.fill(0);
            self.mark_b.fill(0);
            self.epoch = 1;
        }
        self.epoch
    }

    /// Whether the copy of `e` breaks the order (one-way) or the levels
    /// (two-way) and so needs a search.
    pub fn violates(&self, e: u32) -> bool {
        let Some((t, h)) = self.copy(e) else { return false };
        let (u, w) = (self.find(t), self.find(h));
        if u == w {
            return false;
        }
        self.list_of[u as usize] != self.list_of[w as usize]
            || match self.engine {
                Engine::OneWay => self.rank[u as usize] >= self.rank[w as usize],
                Engine::TwoWay => self.level[u as usize] > self.level[w as usize],
            }
    }

    // ---- searches ----

    /// Restores the invariants after the copy of `e` was linked. Returns the
    /// merge if the copy closed a cycle.
    pub fn fix_edge(&mut self, e: u32) -> Option<Merge> {
        let (t, h) = self.copy(e)?;
        let (u, w) = (self.find(t), self.find(h));
        if u == w {
            return None;
        }
        debug_assert_eq!(self.list_of[u as usize], self.list_of[w as usize]);
        match self.engine {
            Engine::OneWay => self.fix_one_way(u, w),
            Engine::TwoWay => self.fix_two_way(e, u, w),
        }
    }

    /// Depth-first search from `w` over components accepted by `keep`,
    /// stopping at `u`. Returns the visited components (without `u`) and the
    /// traversed arcs that stay inside the visited set or end at `u`.
    fn forward_collect(&mut self, w: u32, u: u32, keep: impl Fn(&Self, u32) -> bool) -> (Vec<u32>, Vec<(u32, u32)>) {
        let ep = self.next_epoch();
        self.mark[w as usize] = ep;
        let mut visited = vec![w];
        let mut arcs = Vec::new();
        self.buf.clear();
        self.snapshot_ring(w);
        // Frames: (component, cursor, end of its slice, start of its slice).
        let mut stack = vec![(w, 0usize, self.buf.len(), 0usize)];
        while let Some(top) = stack.last_mut() {
            let (x, i, end, from) = *top;
            if i == end {
                stack.pop();
                self.buf.truncate(from);
                continue;
            }
            top.1 += 1;
            let e = self.buf[i];
            self.stats.edges_traversed += 1;
            let y = self.find(self.copy_head[e as usize]);
            if y == u {
                arcs.push((x, u));
                continue;
            }
            if !keep(self, y) {
                continue;
            }
            arcs.push((x, y));
            if self.mark[y as usize] != ep {
                self.mark[y as usize] = ep;
                visited.push(y);
                let from = self.buf.len();
                self.snapshot_ring(y);
                stack.push((y, from, self.buf.len(), from));
            }
        }
        self.buf.clear();
        (visited, arcs)
    }

    /// Members of `visited` from which `u` is reachable along `arcs`.
    fn reaching(&mut self, u: u32, mut arcs: Vec<(u32, u32)>) -> Vec<u32> {
        arcs.sort_unstable_by_key(|&(_, y)| y);
        let ep = self.next_epoch();
        self.mark_b[u as usize] = ep;
        let mut queue = vec![u];
        let mut out = Vec::new();
        while let Some(y) = queue.pop() {
            let lo = arcs.partition_point(|&(_, h)| h < y);
            for &(x, h) in &arcs[lo..] {
                if h != y {
                    break;
                }
                if self.mark_b[x as usize] != ep {
                    self.mark_b[x as usize] = ep;
                    out.push(x);
                    queue.push(x);
                }
            }
        }
        out
    }

    fn merge_all(&mut self, survivor: u32, comps: &[u32]) -> Merge {
        let parts = comps.iter().map(|&c| (c, self.members(c).len())).collect();
        for &c in comps {
            self.unite(survivor, c);
        }
        Merge { survivor, parts }
    }

    fn fix_one_way(&mut self, u: u32, w: u32) -> Option<Merge> {
        if self.rank[u as usize] < self.rank[w as usize] {
            return None;
        }
        self.stats.searches += 1;
        let limit = self.rank[u as usize];
        let (visited, arcs) = self.forward_collect(w, u, |s, y| s.rank[y as usize] < limit);
        let closes = arcs.iter().any(|&(_, y)| y == u);
        let mut cycle = if closes { self.reaching(u, arcs) } else { Vec::new() };
        let ep = self.next_epoch();
        for &c in &cycle {
            self.mark[c as usize] = ep;
        }
        let mut rest: Vec<u32> = visited.into_iter().filter(|&c| self.mark[c as usize] != ep).collect();
        rest.sort_unstable_by_key(|&c| self.rank[c as usize]);
        for &c in &rest {
            self.list_remove(c);
        }
        let mut anchor = u;
        let mut merge = None;
        if !cycle.is_empty() {
            cycle.push(u);
            cycle.sort_unstable_by_key(|&c| self.rank[c as usize]);
            let survivor = cycle[0];
            if survivor != u {
                self.list_remove(survivor);
                let id = self.list_of[u as usize];
                let after = self.next[u as usize];
                self.insert_between(id, survivor, u, after);
            }
            merge = Some(self.merge_all(survivor, &cycle));
            anchor = survivor;
        }
        let id = self.list_of[anchor as usize];
        let mut at = anchor;
        for &c in &rest {
            let after = self.next[at as usize];
            self.insert_between(id, c, at, after);
            at = c;
        }
        self.renumber_from(anchor, 1 + rest.len());
        merge
    }

    fn valid_in(&self, e: u32, x: u32) -> Option<u32> {
        let (t, h) = self.copy(e)?;
        if self.find(h) != x {
            return None;
        }
        let y = self.find(t);
        (y != x && self.level[y as usize] == self.level[x as usize]).then_some(y)
    }

    fn fix_two_way(&mut self, e: u32, u: u32, w: u32) -> Option<Merge> {
        let (ku, kw) = (self.level[u as usize], self.level[w as usize]);
        if ku < kw {
            return None;
        }
        self.stats.searches += 1;

        // Backward search over same-level in-edges, capped at delta.
        let epb = self.next_epoch();
        self.mark_b[u as usize] = epb;
        let mut stack = vec![u];
        let mut traversed = 0usize;
        let mut found = false;
        let mut truncated = false;
        'outer: while let Some(x) = stack.pop() {
            let mut i = 0;
            while i < self.in_edges[x as usize].len() {
                if traversed >= self.delta {
                    truncated = true;
                    break 'outer;
                }
                let e2 = self.in_edges[x as usize][i];
                let Some(y) = self.valid_in(e2, x) else {
                    self.in_edges[x as usize].swap_remove(i);
                    continue;
                };
                i += 1;
                traversed += 1;
                self.stats.edges_traversed += 1;
                if y == w {
                    found = true;
                    break 'outer;
                }
                if self.mark_b[y as usize] != epb {
                    self.mark_b[y as usize] = epb;
                    stack.push(y);
                }
            }
        }
        if found {
            return Some(self.collect_level_cycle(w, u, ku));
        }
        if !truncated && kw == ku {
            self.in_edges[w as usize].push(e);
            return None;
        }

        // Raise w and restore the level invariant forward from it.
        let newk = if truncated { ku + 1 } else { ku };
        self.level[w as usize] = newk;
        self.in_edges[w as usize].clear();
        if newk == ku {
            self.in_edges[w as usize].push(e);
        }
        let mut cycle = false;
        let mut stack = vec![w];
        let mut edges = Vec::new();
        while let Some(b) = stack.pop() {
            self.buf.clear();
            self.snapshot_ring(b);
            std::mem::swap(&mut edges, &mut self.buf);
            let kb = self.level[b as usize];
            for &e2 in &edges {
                self.stats.edges_traversed += 1;
                let c = self.find(self.copy_head[e2 as usize]);
                if c == u || self.mark_b[c as usize] == epb {
                    cycle = true;
                }
                let kc = self.level[c as usize];
                if kc < kb {
                    self.level[c as usize] = kb;
                    self.in_edges[c as usize].clear();
                    self.in_edges[c as usize].push(e2);
                    stack.push(c);
                } else if kc == kb {
                    self.in_edges[c as usize].push(e2);
                }
            }
        }
        if cycle {
            return Some(self.collect_level_cycle(w, u, newk));
        }
        None
    }

    /// Merges every component on a cycle through `u -> w`; all of them sit at
    /// level `k`. The smallest canonical id survives.
    fn collect_level_cycle(&mut self, w: u32, u: u32, k: u32) -> Merge {
        debug_assert_eq!(self.level[u as usize], k);
        let (_, arcs) = self.forward_collect(w, u, |s, y| s.level[y as usize] == k);
        let mut cycle = self.reaching(u, arcs);
        cycle.push(u);
        let survivor = *cycle.iter().min().expect("non-empty");
        self.merge_all(survivor, &cycle)
    }

    /// Checks the structural invariants. Meant for tests.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.list_of.len() as u32;
        for id in 0..n {
            let mut c = self.first[id as usize];
            let mut prev = NIL;
            while c != NIL {
                if self.find(c) != c || self.list_of[c as usize] != id || self.prev[c as usize] != prev {
                    return Err(format!("list {id} broken at {c}"));
                }
                if self.engine == Engine::OneWay && prev != NIL && self.rank[prev as usize] >= self.rank[c as usize] {
                    return Err(format!("ranks not increasing at {c} in list {id}"));
                }
                prev = c;
                c = self.next[c as usize];
            }
        }
        for e in 0..self.copy_tail.len() as u32 {
            let Some((t, h)) = self.copy(e) else { continue };
            let (u, w) = (self.find(t), self.find(h));
            if u == w {
                continue;
            }
            if !self.in_ring[e as usize] {
                return Err(format!("copy {e} ({t}, {h}) missing from ring of {u}"));
            }
            if self.list_of[u as usize] != self.list_of[w as usize] {
                return Err(format!("copy {e} ({t}, {h}) crosses lists"));
            }
            match self.engine {
                Engine::OneWay => {
                    if self.rank[u as usize] >= self.rank[w as usize] {
                        return Err(format!("copy {e} ({t}, {h}) violates the order"));
                    }
                }
                Engine::TwoWay => {
                    let (ku, kw) = (self.level[u as usize], self.level[w as usize]);
                    if ku > kw {
                        return Err(format!("copy {e} ({t}, {h}) violates the levels"));
                    }
                    if ku == kw && !self.in_edges[w as usize].contains(&e) {
                        return Err(format!("copy {e} ({t}, {h}) missing from in-list of {w}"));
                    }
                }
            }
        }
        for c in 0..n {
            let start = self.out_head[c as usize];
            if start == NIL {
                continue;
            }
            if self.find(c) != c {
                return Err(format!("non-canonical {c} owns a ring"));
            }
            let mut e = start;
            loop {
                if !self.in_ring[e as usize] || self.find(self.copy_tail[e as usize]) != c {
                    return Err(format!("ring of {c} holds foreign copy {e}"));
                }
                e = self.ring_next[e as usize];
                if e == start {
                    break;
                }
            }
        }
        Ok(())
    }
}
