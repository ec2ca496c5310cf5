//! Static labeling from scratch, used as the reference point for benchmarks.

use super::{condense, csr, group_by_keys, ScBlockState};
use crate::graph::{CompactGraph, Digraph, Vertex};
use crate::inc_scc::Engine;
use crate::Result;

/// Blocks of `g` computed without any incremental state: strongly connected
/// components, then one static labeling per component. Same output order as
/// [`TwoEcIndex::blocks`](super::TwoEcIndex::blocks).
pub fn static_blocks(g: &Digraph, engine: Engine) -> Result<Vec<Vec<Vertex>>> {
    let n = g.vertex_count();
    let (first, adj) = csr(n, g.edges().iter().map(|&(u, v)| (u as u32, v as u32)));
    let (comp, count) = condense(&first, &adj);
    let mut members: Vec<Vec<Vertex>> = vec![Vec::new(); count];
    for v in 0..n {
        members[comp[v] as usize].push(v);
    }
    let mut local = vec![0u32; n];
    let mut keys: Vec<[u32; 5]> = (0..n as u32).map(|v| [comp[v as usize], v, v, v, v]).collect();
    for group in members.iter().filter(|m| m.len() > 1) {
        for (i, &v) in group.iter().enumerate() {
            local[v] = i as u32;
        }
        let c = comp[group[0]];
        let mut h = CompactGraph::new(group.len());
        for &v in group {
            for &(_, w) in g.out_edges(v) {
                if comp[w] == c {
                    h.push_edge(local[v], local[w]);
                }
            }
        }
        let state = ScBlockState::initialize(h, group.clone(), 0, engine)?;
        for &v in group {
            let l = state.label(local[v]);
            keys[v] = [c, l.r as u32, l.c as u32, l.r_rev as u32, l.c_rev as u32];
        }
    }
    Ok(group_by_keys(&keys))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn matches_oracle(
            n in 1usize..10,
            raw in prop::collection::vec((0usize..10, 0usize..10), 0..50),
        ) {
            let mut g = Digraph::new(n).unwrap();
            for (u, v) in raw {
                g.add_edge(u % n, v % n).unwrap();
            }
            prop_assert_eq!(static_blocks(&g, Engine::OneWay).unwrap(), oracle::blocks(&g).unwrap());
        }
    }
}
