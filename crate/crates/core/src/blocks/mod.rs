//! Per-component block maintenance and the top-level index over a general
//! digraph.

pub mod baseline;
pub mod component;
mod index;

pub use crate::inc_scc::Engine;
pub use component::{ComponentMetrics, ScBlockState};
pub use index::{IndexMetrics, InsertOutcome, Lifetime, TwoEcIndex};

use crate::NIL;

/// Compressed adjacency: the successors of `v` are `adj[first[v]..first[v + 1]]`.
pub(crate) fn csr(n: usize, edges: impl Iterator<Item = (u32, u32)> + Clone) -> (Vec<u32>, Vec<u32>) {
    let mut first = vec![0u32; n + 1];
    for (u, _) in edges.clone() {
        first[u as usize + 1] += 1;
    }
    for i in 0..n {
        first[i + 1] += first[i];
    }
    let mut fill = first.clone();
    let mut adj = vec![0u32; first[n] as usize];
    for (u, v) in edges {
        adj[fill[u as usize] as usize] = v;
        fill[u as usize] += 1;
    }
    (first, adj)
}

/// Strongly connected components with a topological numbering: `comp[v]` is
/// the position of `v`'s component in a topological order of the
/// condensation (sources first).
pub(crate) fn condense(first: &[u32], adj: &[u32]) -> (Vec<u32>, usize) {
    let n = first.len() - 1;
    let mut index = vec![NIL; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![NIL; n];
    let mut next_index = 0u32;
    let mut emitted = 0u32;
    let mut call: Vec<(u32, u32)> = Vec::new();
    for root in 0..n as u32 {
        if index[root as usize] != NIL {
            continue;
        }
        index[root as usize] = next_index;
        low[root as usize] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        call.push((root, first[root as usize]));
        while let Some(top) = call.last_mut() {
            let v = top.0;
            if top.1 < first[v as usize + 1] {
                let w = adj[top.1 as usize];
                top.1 += 1;
                if index[w as usize] == NIL {
                    index[w as usize] = next_index;
                    low[w as usize] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, first[w as usize]));
                } else if on_stack[w as usize] {
                    low[v as usize] = low[v as usize].min(index[w as usize]);
                }
            } else {
                call.pop();
                if let Some(&(p, _)) = call.last() {
                    low[p as usize] = low[p as usize].min(low[v as usize]);
                }
                if low[v as usize] == index[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w as usize] = false;
                        comp[w as usize] = emitted;
                        if w == v {
                            break;
                        }
                    }
                    emitted += 1;
                }
            }
        }
    }
    // Tarjan emits sinks first.
    for c in comp.iter_mut() {
        *c = emitted - 1 - *c;
    }
    (comp, emitted as usize)
}

/// Groups `0..n` by equal keys. Keys are tuples of integers below `n`,
/// sorted by stable counting passes from the last coordinate to the first.
/// Groups come out ordered by smallest member, members ascending.
pub(crate) fn group_by_keys<const K: usize>(keys: &[[u32; K]]) -> Vec<Vec<usize>> {
    let n = keys.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    let mut tmp = vec![0u32; n];
    let mut count = vec![0usize; n + 1];
    for k in (0..K).rev() {
        count.fill(0);
        for &v in &order {
            count[keys[v as usize][k] as usize + 1] += 1;
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        for &v in &order {
            let slot = &mut count[keys[v as usize][k] as usize];
            tmp[*slot] = v;
            *slot += 1;
        }
        std::mem::swap(&mut order, &mut tmp);
    }
    // Consecutive runs are groups; place each group at its smallest member.
    let mut by_min: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        while j < n && keys[order[j] as usize] == keys[order[i] as usize] {
            j += 1;
        }
        let group: Vec<usize> = order[i..j].iter().map(|&v| v as usize).collect();
        let min = group[0];
        by_min[min] = group;
        i = j;
    }
    by_min.into_iter().filter(|g| !g.is_empty()).collect()
}
