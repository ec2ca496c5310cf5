//! Text-protocol batch driver and benchmark harness.
//!
//! Commands, one per line, `#` starts a comment:
//!
//! ```text
//! graph n          start a fresh graph on vertices 1..=n
//! insert u v       add edge (u, v); prints `noop u v` for loops and duplicates
//! query2ec u v     prints `2ec u v true` or `2ec u v false witness a b|nsc`
//! blocks           prints `blocks k`, then one `block ...` line per block
//! bridges          prints one `bridge a b` line per current strong bridge
//! ```
//!
//! Vertices are 1-based here and 0-based in the library.

use std::fmt;
use std::io::{BufRead, Write};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::blocks::baseline::static_blocks;
use crate::blocks::InsertOutcome;
use crate::graph::{Digraph, Direction};
use crate::{oracle, Engine, Error, Result, TwoEcIndex, Vertex, Witness};

/// Largest graph accepted with `oracle_check`.
pub const ORACLE_CHECK_LIMIT: usize = 200;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub oracle_check: bool,
    pub engine: Engine,
    pub metrics: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Graph(usize),
    Insert(Vertex, Vertex),
    Query(Vertex, Vertex),
    Blocks,
    Bridges,
}

fn io_err(e: std::io::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

/// Parses one line. `n` is the current vertex count, `None` before the first
/// `graph` command. Returns 0-based vertices.
pub fn parse_line(line: &str, n: Option<usize>, lineno: usize) -> Result<Option<Command>> {
    let err = |msg: String| Error::Parse { line: lineno, msg };
    let body = line.split('#').next().unwrap_or("");
    let mut tok = body.split_whitespace();
    let Some(cmd) = tok.next() else {
        return Ok(None);
    };
    let args: Vec<&str> = tok.collect();
    let arity = |k: usize| {
        if args.len() == k {
            Ok(())
        } else {
            Err(err(format!("`{cmd}` takes {k} argument(s), got {}", args.len())))
        }
    };
    let number = |s: &str| s.parse::<usize>().map_err(|_| err(format!("not a number: `{s}`")));
    let vertex = |s: &str| -> Result<Vertex> {
        let n = n.ok_or_else(|| err("first command must be `graph n`".into()))?;
        let v = number(s)?;
        if v == 0 || v > n {
            return Err(err(format!("vertex {v} out of range 1..={n}")));
        }
        Ok(v - 1)
    };
    let command = match cmd {
        "graph" => {
            arity(1)?;
            Command::Graph(number(args[0])?)
        }
        "insert" | "query2ec" => {
            arity(2)?;
            let (u, v) = (vertex(args[0])?, vertex(args[1])?);
            if cmd == "insert" {
                Command::Insert(u, v)
            } else {
                Command::Query(u, v)
            }
        }
        "blocks" | "bridges" => {
            arity(0)?;
            n.ok_or_else(|| err("first command must be `graph n`".into()))?;
            if cmd == "blocks" {
                Command::Blocks
            } else {
                Command::Bridges
            }
        }
        other => return Err(err(format!("unknown command `{other}`"))),
    };
    Ok(Some(command))
}

fn format_blocks(blocks: &[Vec<Vertex>], out: &mut impl Write) -> std::io::Result<()> {
    writeln!(out, "blocks {}", blocks.len())?;
    for b in blocks {
        write!(out, "block")?;
        for &v in b {
            write!(out, " {}", v + 1)?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn mismatch(lineno: usize, what: &str, ix: &TwoEcIndex) -> Error {
    let mut edges: Vec<String> = ix.graph().edges().iter().map(|&(a, b)| format!("{} {}", a + 1, b + 1)).collect();
    edges.sort();
    Error::OracleMismatch(format!(
        "line {lineno}: {what}\ngraph {}\nedges:\n{}",
        ix.vertex_count(),
        edges.join("\n")
    ))
}

fn check_query(ix: &TwoEcIndex, u: Vertex, v: Vertex, witness: Option<Witness>, lineno: usize) -> Result<()> {
    let g = ix.graph();
    let ok = match witness {
        None => oracle::two_ec(g, u, v),
        Some(Witness::NotStronglyConnected) => {
            let scc = oracle::scc_labels(g);
            scc[u] != scc[v]
        }
        Some(Witness::SeparatingEdge(a, b)) => {
            g.has_edge(a, b)
                && !oracle::two_ec(g, u, v)
                && (!oracle::reaches_without(g, u, v, (a, b)) || !oracle::reaches_without(g, v, u, (a, b)))
        }
    };
    if ok {
        Ok(())
    } else {
        Err(mismatch(lineno, &format!("query {} {} answered {witness:?}", u + 1, v + 1), ix))
    }
}

fn check_state(ix: &TwoEcIndex, lineno: usize) -> Result<()> {
    let report = oracle::report(ix.graph())?;
    if ix.blocks() != report.blocks {
        return Err(mismatch(lineno, "blocks differ from the oracle", ix));
    }
    if ix.strong_bridges() != report.strong_bridges {
        return Err(mismatch(lineno, "strong bridges differ from the oracle", ix));
    }
    Ok(())
}

fn write_metrics(ix: &TwoEcIndex, out: &mut impl Write) -> std::io::Result<()> {
    let m = ix.metrics();
    let sum = |f: fn(&crate::blocks::Lifetime) -> u64| m.lifetimes.iter().map(f).sum::<u64>();
    let rows: [(&str, u64); 11] = [
        ("insertions", m.insertions),
        ("noops", m.noops),
        ("scc_merges", m.top_merges),
        ("unites", m.unites),
        ("searches", m.searches),
        ("scanned", sum(|l| l.scanned)),
        ("reinits", sum(|l| l.reinits)),
        ("fallbacks", sum(|l| l.fallbacks)),
        ("relink_repairs", sum(|l| l.relink_repairs)),
        ("max_scans_per_vertex", ix.scans_total().iter().copied().max().unwrap_or(0)),
        ("strong_bridges", ix.strong_bridges().len() as u64),
    ];
    for (name, value) in rows {
        writeln!(out, "# metric {name} {value}")?;
    }
    Ok(())
}

/// Executes a command stream, writing one answer line per answering command.
pub fn run_stream(input: impl BufRead, out: &mut impl Write, opts: RunOptions) -> Result<()> {
    let mut ix: Option<TwoEcIndex> = None;
    for (i, line) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(io_err)?;
        let Some(cmd) = parse_line(&line, ix.as_ref().map(|x| x.vertex_count()), lineno)? else {
            continue;
        };
        if let Command::Graph(n) = cmd {
            if opts.oracle_check && n > ORACLE_CHECK_LIMIT {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("oracle check supports at most {ORACLE_CHECK_LIMIT} vertices, got {n}"),
                });
            }
            if let Some(old) = ix.as_ref().filter(|_| opts.metrics) {
                write_metrics(old, out).map_err(io_err)?;
            }
            ix = Some(TwoEcIndex::new(n, opts.engine)?);
            continue;
        }
        let ix = ix.as_mut().expect("parse_line rejects commands before `graph`");
        match cmd {
            Command::Graph(_) => unreachable!(),
            Command::Insert(u, v) => {
                if ix.insert_edge(u, v)? == InsertOutcome::Noop {
                    writeln!(out, "noop {} {}", u + 1, v + 1).map_err(io_err)?;
                }
                if opts.oracle_check {
                    check_state(ix, lineno)?;
                }
            }
            Command::Query(u, v) => {
                let w = ix.separating_edge(u, v)?;
                if opts.oracle_check {
                    check_query(ix, u, v, w, lineno)?;
                }
                let (a, b) = (u + 1, v + 1);
                match w {
                    None => writeln!(out, "2ec {a} {b} true"),
                    Some(Witness::NotStronglyConnected) => writeln!(out, "2ec {a} {b} false nsc"),
                    Some(Witness::SeparatingEdge(x, y)) => {
                        writeln!(out, "2ec {a} {b} false witness {} {}", x + 1, y + 1)
                    }
                }
                .map_err(io_err)?;
            }
            Command::Blocks => {
                let blocks = ix.report_blocks();
                if opts.oracle_check && blocks != oracle::blocks(ix.graph())? {
                    return Err(mismatch(lineno, "blocks differ from the oracle", ix));
                }
                format_blocks(&blocks, out).map_err(io_err)?;
            }
            Command::Bridges => {
                let bridges = ix.strong_bridges();
                if opts.oracle_check && bridges != oracle::strong_bridges(ix.graph()) {
                    return Err(mismatch(lineno, "strong bridges differ from the oracle", ix));
                }
                for (a, b) in bridges {
                    writeln!(out, "bridge {} {}", a + 1, b + 1).map_err(io_err)?;
                }
            }
        }
    }
    if let Some(ix) = ix.as_ref().filter(|_| opts.metrics) {
        write_metrics(ix, out).map_err(io_err)?;
    }
    Ok(())
}

/// Convenience wrapper over [`run_stream`] for in-memory input.
pub fn run_str(input: &str, opts: RunOptions) -> Result<String> {
    let mut out = Vec::new();
    run_stream(input.as_bytes(), &mut out, opts)?;
    Ok(String::from_utf8(out).expect("ascii output"))
}

/// Dominator trees (forward and reverse) of every component with at least two
/// vertices after running the stream's insertions, in the dump format
/// `v d(v) depth(v) r_v bridge?`, 1-based.
pub fn dump_dominators(input: impl BufRead, engine: Engine) -> Result<String> {
    let mut ix: Option<TwoEcIndex> = None;
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(io_err)?;
        match parse_line(&line, ix.as_ref().map(|x| x.vertex_count()), i + 1)? {
            Some(Command::Graph(n)) => ix = Some(TwoEcIndex::new(n, engine)?),
            Some(Command::Insert(u, v)) => {
                ix.as_mut().expect("graph defined").insert_edge(u, v)?;
            }
            _ => {}
        }
    }
    let ix = ix.ok_or_else(|| Error::InvalidInput("no `graph` command".into()))?;
    let mut out = String::new();
    for c in ix.components() {
        for d in Direction::BOTH {
            let side = if d == Direction::Forward { "forward" } else { "reverse" };
            let g = c.global();
            out.push_str(&format!("# component start {} side {side}\n", g[c.start() as usize] + 1));
            out.push_str(&c.dom(d).dump(|x| (g[x as usize] + 1).to_string()));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Percentiles {
    pub p50: Duration,
    pub p90: Duration,
    pub p99: Duration,
    pub max: Duration,
}

impl Percentiles {
    fn of(mut xs: Vec<Duration>) -> Self {
        if xs.is_empty() {
            return Self::default();
        }
        xs.sort_unstable();
        let at = |q: f64| xs[((xs.len() - 1) as f64 * q).round() as usize];
        Percentiles { p50: at(0.5), p90: at(0.9), p99: at(0.99), max: xs[xs.len() - 1] }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub engine: Engine,
    pub effective_insertions: u64,
    pub incremental_total: Duration,
    pub baseline_total: Duration,
    pub incremental: Percentiles,
    pub baseline: Percentiles,
    pub scanned: u64,
    pub reinits: u64,
    pub unites: u64,
    pub blocks: usize,
}

impl BenchReport {
    /// Incremental time over baseline time.
    pub fn ratio(&self) -> f64 {
        self.incremental_total.as_secs_f64() / self.baseline_total.as_secs_f64().max(f64::MIN_POSITIVE)
    }
}

impl fmt::Display for BenchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = |d: Duration| d.as_secs_f64() * 1e3;
        let us = |d: Duration| d.as_secs_f64() * 1e6;
        writeln!(f, "bench n={} m={} seed={} engine={:?}", self.n, self.m, self.seed, self.engine)?;
        writeln!(f, "effective_insertions {}", self.effective_insertions)?;
        for (name, total, p) in [
            ("incremental", self.incremental_total, self.incremental),
            ("baseline", self.baseline_total, self.baseline),
        ] {
            writeln!(
                f,
                "{name} total_ms {:.3} p50_us {:.1} p90_us {:.1} p99_us {:.1} max_us {:.1}",
                ms(total),
                us(p.p50),
                us(p.p90),
                us(p.p99),
                us(p.max)
            )?;
        }
        writeln!(f, "ratio {:.4}", self.ratio())?;
        writeln!(f, "scanned {}", self.scanned)?;
        writeln!(f, "reinits {}", self.reinits)?;
        writeln!(f, "unites {}", self.unites)?;
        write!(f, "blocks {}", self.blocks)
    }
}

/// Seeded random insertion sequence: `m` uniform pairs of distinct vertices.
/// Repeated pairs become no-ops.
pub fn random_insertions(n: usize, m: usize, seed: u64) -> Vec<(Vertex, Vertex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..m)
        .map(|_| {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            (u, v)
        })
        .collect()
}

/// Runs the incremental engine and the recompute-per-insertion baseline on
/// the same random sequence and checks that they end with the same blocks.
pub fn bench(n: usize, m: usize, seed: u64, engine: Engine) -> Result<BenchReport> {
    if n < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!("bench needs n >= 2 and m >= 1, got n={n} m={m}")));
    }
    let seq = random_insertions(n, m, seed);

    let mut ix = TwoEcIndex::new(n, engine)?;
    let mut inc_times = Vec::with_capacity(m);
    let inc_start = Instant::now();
    for &(u, v) in &seq {
        let t = Instant::now();
        ix.insert_edge(u, v)?;
        inc_times.push(t.elapsed());
    }
    let incremental_total = inc_start.elapsed();

    let mut g = Digraph::new(n)?;
    let mut base_times = Vec::with_capacity(m);
    let mut base_blocks = static_blocks(&g, engine)?;
    let base_start = Instant::now();
    for &(u, v) in &seq {
        let t = Instant::now();
        if g.add_edge(u, v)?.is_some() {
            base_blocks = static_blocks(&g, engine)?;
        }
        base_times.push(t.elapsed());
    }
    let baseline_total = base_start.elapsed();

    let blocks = ix.blocks();
    if blocks != base_blocks {
        return Err(Error::OracleMismatch(format!(
            "bench n={n} m={m} seed={seed}: incremental and baseline blocks differ"
        )));
    }
    let metrics = ix.metrics();
    Ok(BenchReport {
        n,
        m,
        seed,
        engine,
        effective_insertions: metrics.insertions,
        incremental_total,
        baseline_total,
        incremental: Percentiles::of(inc_times),
        baseline: Percentiles::of(base_times),
        scanned: metrics.lifetimes.iter().map(|l| l.scanned).sum(),
        reinits: metrics.lifetimes.iter().map(|l| l.reinits).sum(),
        unites: metrics.unites,
        blocks: blocks.len(),
    })
}
