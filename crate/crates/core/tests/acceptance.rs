//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 when any
//! criterion fails. Runs under `cargo test` as a harness-less target.

use std::time::Instant;

use inc2ecb::blocks::ScBlockState;
use inc2ecb::cli::{bench, random_insertions};
use inc2ecb::dominator::DomTree;
use inc2ecb::graph::Direction;
use inc2ecb::{oracle, Digraph, Engine, TwoEcIndex, Witness};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL_INSTANCES: usize = 600;
const MEDIUM_INSTANCES: usize = 20;
const MEDIUM_N: usize = 50;
const MEDIUM_M: usize = 1000;
const MEDIUM_EVERY: usize = 25;
const MIN_NEGATIVE_QUERIES: u64 = 10_000;
const MAX_RATIO: f64 = 0.2;
const MAX_READS: u32 = 12;

/// First failure of a criterion, plus how many checks ran.
#[derive(Default)]
struct Tally {
    checks: u64,
    failure: Option<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }
}

#[derive(Default)]
struct Suites {
    blocks: Tally,
    medium: Tally,
    dominators: Tally,
    bridges: Tally,
    witnesses: Tally,
    negative_queries: u64,
    engines: Tally,
    scans: Tally,
    max_scans_ratio: f64,
    max_reinits: u64,
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))).collect()
}

fn local_digraph(c: &ScBlockState, dir: Direction) -> Digraph {
    let mut g = Digraph::new(c.vertex_count()).unwrap();
    let view = c.graph().view(dir);
    for e in 0..view.edge_count() as u32 {
        let (a, b) = view.endpoints(e);
        g.add_edge(a as usize, b as usize).unwrap();
    }
    g
}

fn check_dominators(ix: &TwoEcIndex, with_oracle: bool, t: &mut Tally) {
    for c in ix.components() {
        for d in Direction::BOTH {
            let live = c.dom(d);
            let view = c.graph().view(d);
            let fresh = DomTree::compute(view, c.start()).unwrap();
            t.check(*live == fresh, || format!("{d:?} dominator tree differs from recompute"));
            let iterative = DomTree::compute_iterative(view, c.start()).unwrap();
            t.check(*live == iterative, || format!("{d:?} dominator tree differs from iterative recompute"));
            if with_oracle {
                let o = oracle::dominator_tree(&local_digraph(c, d), c.start() as usize).unwrap();
                let parents: Vec<_> = (0..c.vertex_count() as u32).map(|v| live.parent(v).map(|p| p as usize)).collect();
                let bridges: Vec<_> = live.bridges().map(|(p, v)| (p as usize, v as usize)).collect();
                t.check(parents == o.parent && bridges == o.bridges, || format!("{d:?} dominators differ from oracle"));
            }
        }
    }
}

fn check_bridges(ix: &TwoEcIndex, t: &mut Tally) {
    let bridges = ix.strong_bridges();
    t.check(bridges == oracle::strong_bridges(ix.graph()), || "strong bridges differ from oracle".into());
    for c in ix.components() {
        let k = c.strong_bridges().len();
        let bound = 2 * (c.vertex_count() - 1);
        t.check(k <= bound, || format!("{k} strong bridges in a component of {} vertices", c.vertex_count()));
    }
}

fn check_query(ix: &TwoEcIndex, u: usize, v: usize, s: &mut Suites) {
    let g = ix.graph();
    match ix.separating_edge(u, v).unwrap() {
        Some(Witness::SeparatingEdge(a, b)) => {
            s.negative_queries += 1;
            let separates = g.has_edge(a, b)
                && (!oracle::reaches_without(g, u, v, (a, b)) || !oracle::reaches_without(g, v, u, (a, b)));
            s.witnesses.check(separates, || format!("witness ({a}, {b}) does not separate {u} and {v}"));
        }
        Some(Witness::NotStronglyConnected) => {
            let (ru, rv) = (ix.scc_of(u), ix.scc_of(v));
            s.witnesses.check(ru != rv && !oracle::two_ec(g, u, v), || format!("{u} {v} claimed not strongly connected"));
        }
        None => {}
    }
}

fn check_lifetimes(ix: &TwoEcIndex, s: &mut Suites) {
    let n = ix.vertex_count() as u64;
    for (v, &k) in ix.scans_total().iter().enumerate() {
        s.scans.check(k <= 2 * n, || format!("vertex {v} scanned {k} times, n = {n}"));
        s.max_scans_ratio = s.max_scans_ratio.max(k as f64 / (2 * n) as f64);
    }
    for l in ix.metrics().lifetimes {
        let bound = 2 * (l.size as u64 - 1);
        s.scans.check(l.max_scans as u64 <= bound, || format!("{} scans in a lifetime of size {}", l.max_scans, l.size));
        s.scans.check(l.reinits <= bound, || format!("{} reinits in a lifetime of size {}", l.reinits, l.size));
        s.max_reinits = s.max_reinits.max(l.reinits);
    }
    for c in ix.components() {
        s.scans.check(c.check_scan_accounting().is_ok(), || c.check_scan_accounting().unwrap_err());
    }
}

fn small_suite(s: &mut Suites) {
    for inst in 0..SMALL_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(inst as u64);
        let n = rng.gen_range(2..=12);
        let mut pairs = all_pairs(n);
        pairs.shuffle(&mut rng);
        let mut one = TwoEcIndex::new(n, Engine::OneWay).unwrap();
        let mut two = TwoEcIndex::new(n, Engine::TwoWay).unwrap();
        for &(u, v) in &pairs {
            one.insert_edge(u, v).unwrap();
            two.insert_edge(u, v).unwrap();
            let expected = oracle::blocks(two.graph()).unwrap();
            let got = two.blocks();
            s.blocks.check(got == expected, || format!("instance {inst} after ({u}, {v}): {got:?} vs {expected:?}"));
            s.engines.check(one.blocks() == got, || format!("instance {inst} after ({u}, {v}): engines disagree"));
            check_dominators(&two, true, &mut s.dominators);
            check_dominators(&one, false, &mut s.dominators);
            check_bridges(&two, &mut s.bridges);
            for x in 0..n {
                for y in x + 1..n {
                    check_query(&two, x, y, s);
                }
            }
            for c in two.components() {
                s.scans.check(c.check_scan_accounting().is_ok(), || c.check_scan_accounting().unwrap_err());
            }
        }
        check_lifetimes(&one, s);
        check_lifetimes(&two, s);
    }
}

fn medium_suite(s: &mut Suites) {
    for inst in 0..MEDIUM_INSTANCES {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + inst as u64);
        let mut pairs = all_pairs(MEDIUM_N);
        pairs.shuffle(&mut rng);
        pairs.truncate(MEDIUM_M);
        let mut ix = TwoEcIndex::new(MEDIUM_N, Engine::TwoWay).unwrap();
        for (i, &(u, v)) in pairs.iter().enumerate() {
            ix.insert_edge(u, v).unwrap();
            let checkpoint = (i + 1) % MEDIUM_EVERY == 0 || i + 1 == pairs.len();
            check_dominators(&ix, checkpoint, &mut s.dominators);
            if checkpoint {
                let expected = oracle::blocks(ix.graph()).unwrap();
                s.medium.check(ix.blocks() == expected, || format!("medium instance {inst} after {} insertions", i + 1));
                check_bridges(&ix, &mut s.bridges);
                for _ in 0..100 {
                    let (x, y) = (rng.gen_range(0..MEDIUM_N), rng.gen_range(0..MEDIUM_N));
                    check_query(&ix, x, y, s);
                }
            }
        }
        s.medium.check(ix.check_invariants().is_ok(), || ix.check_invariants().unwrap_err());
        check_lifetimes(&ix, s);
    }
}

fn max_reads(n: usize, m: usize, seed: u64) -> u32 {
    let mut ix = TwoEcIndex::new(n, Engine::TwoWay).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0;
    for (i, (u, v)) in random_insertions(n, m, seed).into_iter().enumerate() {
        ix.insert_edge(u, v).unwrap();
        if (i + 1) % 100 == 0 {
            for _ in 0..1000 {
                let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
                worst = worst.max(ix.probe(x, y).unwrap().reads);
            }
        }
    }
    for x in 0..n.min(100) {
        for y in 0..n {
            worst = worst.max(ix.probe(x, y).unwrap().reads);
        }
    }
    worst
}

struct Line {
    pass: bool,
    text: String,
}

fn verdict(t: &Tally, ok_text: String) -> Line {
    match &t.failure {
        None => Line { pass: true, text: ok_text },
        Some(f) => Line { pass: false, text: format!("{ok_text}; first failure: {f}") },
    }
}

fn main() {
    let started = Instant::now();
    let mut s = Suites::default();
    small_suite(&mut s);
    medium_suite(&mut s);
    let reads = [max_reads(100, 1000, 5), max_reads(2000, 20000, 6)];
    let report = bench(2000, 20000, 1, Engine::TwoWay).unwrap();

    let lines = [
        verdict(
            &s.blocks,
            format!("C1 blocks equal oracle after every insertion: {SMALL_INSTANCES} instances, n in 2..=12, {} checks", s.blocks.checks),
        ),
        verdict(
            &s.medium,
            format!(
                "C2 blocks equal oracle: {MEDIUM_INSTANCES} instances, n={MEDIUM_N}, m={MEDIUM_M}, every {MEDIUM_EVERY}th insertion, {} checks",
                s.medium.checks
            ),
        ),
        verdict(&s.dominators, format!("C3 live dominator trees equal recomputation: {} checks", s.dominators.checks)),
        verdict(&s.bridges, format!("C4 strong bridges equal oracle and at most 2(n_C-1): {} checks", s.bridges.checks)),
        {
            let mut l = verdict(
                &s.witnesses,
                format!("C5 negative queries with verified witness: {} (need >= {MIN_NEGATIVE_QUERIES})", s.negative_queries),
            );
            l.pass &= s.negative_queries >= MIN_NEGATIVE_QUERIES;
            l
        },
        verdict(&s.engines, format!("C6 one-way and two-way engines agree: {} checks", s.engines.checks)),
        verdict(
            &s.scans,
            format!(
                "C7 scan and reinit budgets: max scans/2n = {:.3}, max reinits per lifetime = {}",
                s.max_scans_ratio, s.max_reinits
            ),
        ),
        Line {
            pass: report.ratio() <= MAX_RATIO,
            text: format!(
                "C8 bench n=2000 m=20000: incremental {:.2}s, baseline {:.2}s, ratio {:.4} (need <= {MAX_RATIO})",
                report.incremental_total.as_secs_f64(),
                report.baseline_total.as_secs_f64(),
                report.ratio()
            ),
        },
        Line {
            pass: reads.iter().all(|&r| r <= MAX_READS),
            text: format!("C9 reads per query: n=100 max {}, n=2000 max {} (need <= {MAX_READS})", reads[0], reads[1]),
        },
    ];
    let mut failed = 0;
    for l in &lines {
        println!("{} {}", if l.pass { "PASS" } else { "FAIL" }, l.text);
        failed += usize::from(!l.pass);
    }
    println!("acceptance: {} passed, {failed} failed in {:.1}s", lines.len() - failed, started.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
