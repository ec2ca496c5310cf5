use std::io::Write;
use std::process::{Command, Stdio};

use inc2ecb::cli::{run_str, RunOptions};
use inc2ecb::Engine;

fn run(input: &str) -> String {
    let mut outputs = Vec::new();
    for engine in [Engine::OneWay, Engine::TwoWay] {
        let opts = RunOptions { oracle_check: true, engine, metrics: false };
        outputs.push(run_str(input, opts).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    outputs.pop().unwrap()
}

#[test]
fn three_cycle_witness() {
    let out = run("graph 3\ninsert 1 2\ninsert 2 3\ninsert 3 1\nquery2ec 1 2\n");
    assert_eq!(out, "2ec 1 2 false witness 1 2\n");
}

#[test]
fn bidirected_triangle_blocks() {
    let out = run("graph 3\ninsert 1 2\ninsert 2 1\ninsert 2 3\ninsert 3 2\ninsert 1 3\ninsert 3 1\nblocks\n");
    assert_eq!(out, "blocks 1\nblock 1 2 3\n");
}

#[test]
fn self_loop_is_noop() {
    assert_eq!(run("graph 2\ninsert 1 1\n"), "noop 1 1\n");
}

#[test]
fn chorded_square_session() {
    let input = "\
graph 4
insert 1 2
insert 2 3
insert 3 4
insert 4 1
insert 1 3
query2ec 1 3
insert 3 1
query2ec 1 3
query2ec 2 4
blocks
bridges
";
    let expected = "\
2ec 1 3 false witness 3 4
2ec 1 3 true
2ec 2 4 false witness 3 4
blocks 3
block 1 3
block 2
block 4
bridge 1 2
bridge 2 3
bridge 3 4
bridge 4 1
";
    assert_eq!(run(input), expected);
}

#[test]
fn output_is_deterministic() {
    let mut input = String::from("graph 30\n");
    for (u, v) in inc2ecb::cli::random_insertions(30, 200, 11) {
        input.push_str(&format!("insert {} {}\nquery2ec {} {}\n", u + 1, v + 1, v + 1, u + 1));
    }
    input.push_str("blocks\nbridges\n");
    let opts = RunOptions { metrics: true, ..Default::default() };
    assert_eq!(run_str(&input, opts).unwrap(), run_str(&input, opts).unwrap());
    run(&input);
}

fn binary(args: &[&str], stdin: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_inc2ecb"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn binary_exit_codes() {
    let (code, out) = binary(&["run", "--oracle-check"], "graph 3\ninsert 1 2\ninsert 2 3\ninsert 3 1\nquery2ec 1 2\n");
    assert_eq!((code, out.as_str()), (0, "2ec 1 2 false witness 1 2\n"));
    assert_eq!(binary(&["run"], "graph 2\ninsert 1 3\n").0, 1);
    assert_eq!(binary(&["run"], "insert 1 2\n").0, 1);
    assert_eq!(binary(&["run", "--engine", "sideways"], "").0, 1);
    assert_eq!(binary(&["--help"], "").0, 0);
}

#[test]
fn binary_dump_dom() {
    let (code, out) = binary(&["dump-dom"], "graph 3\ninsert 1 2\ninsert 2 3\ninsert 3 1\n");
    assert_eq!(code, 0);
    assert!(out.starts_with("# component start 1 side forward\n1 - 0 1 0\n2 1 1 2 1\n3 2 2 3 1\n"), "{out}");
}

#[test]
fn binary_bench_small() {
    let (code, out) = binary(&["bench", "--n", "50", "--m", "500", "--seed", "7"], "");
    assert_eq!(code, 0);
    assert!(out.starts_with("bench n=50 m=500 seed=7"));
}
