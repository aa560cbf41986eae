use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn dyncycle(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dyncycle"))
        .args(args)
        .env_remove("DYNCYCLE_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or_default()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name);
    let path = path.to_str().unwrap().to_string();
    let mut args = vec!["gen", "--out", &path];
    args.extend_from_slice(extra);
    let out = dyncycle(&args, None);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    path
}

#[test]
fn generated_workload_checks_clean_through_stdin() {
    let out = dyncycle(&["gen", "--seed", "1"], None);
    assert!(out.status.success());
    let check = dyncycle(
        &["check", "--structure", "threshold", "--mu", "10"],
        Some(&out.stdout),
    );
    assert_eq!(
        check.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&check.stderr)
    );
    let summary = String::from_utf8(check.stdout).unwrap();
    assert!(summary.ends_with("0 mismatches\n"), "{summary}");
}

#[test]
fn gen_is_reproducible_and_honours_env_seed() {
    let a = dyncycle(&["gen", "--seed", "9", "--n", "15"], None);
    let b = dyncycle(&["gen", "--seed", "9", "--n", "15"], None);
    assert_eq!(a.stdout, b.stdout);
    let c = Command::new(env!("CARGO_BIN_EXE_dyncycle"))
        .args(["gen", "--n", "15"])
        .env("DYNCYCLE_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(a.stdout, c.stdout);
    let d = dyncycle(&["gen", "--seed", "10", "--n", "15"], None);
    assert_ne!(a.stdout, d.stdout);
}

#[test]
fn empty_workload_gives_empty_results() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("empty.jsonl");
    fs::write(&input, "").unwrap();
    let out = dyncycle(
        &[
            "run",
            "--structure",
            "negcycle",
            "--in",
            input.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "query_index,answer\n"
    );
}

#[test]
fn every_structure_checks_clean() {
    let dir = tempfile::tempdir().unwrap();
    let pairs = dir.path().join("pairs.txt");
    fs::write(&pairs, "0 1\n2,3\n4 4\n").unwrap();
    let pairs = pairs.to_str().unwrap();
    let cases: &[(&[&str], &[&str])] = &[
        (&["--structure", "threshold", "--mu", "40"], &[]),
        (&["--structure", "approx", "--eps", "0.25"], &[]),
        (&["--structure", "negcycle"], &["--weights", "signed"]),
        (
            &["--structure", "mpsp", "--pairs", pairs],
            &["--weights", "signed"],
        ),
        (&["--structure", "exact-mincycle", "--delta", "2"], &[]),
        (&["--structure", "oracle"], &["--weights", "signed"]),
        (
            &["--structure", "edge-threshold", "--mu", "60"],
            &["--kind", "edge"],
        ),
    ];
    for (i, (structure, gen_args)) in cases.iter().enumerate() {
        let mut extra = vec!["--n", "10", "--updates", "40", "--W", "20", "--seed"];
        let seed = i.to_string();
        extra.push(&seed);
        extra.extend_from_slice(gen_args);
        let input = gen(dir.path(), &format!("w{i}.jsonl"), &extra);
        let mut args = vec!["check", "--in", &input];
        args.extend_from_slice(structure);
        let out = dyncycle(&args, None);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{structure:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8(out.stdout)
            .unwrap()
            .starts_with("40 queries"));
    }
}

#[test]
fn run_output_verifies_and_corruption_is_caught() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(dir.path(), "w.jsonl", &["--seed", "3", "--n", "12"]);
    let results = dir.path().join("results.csv");
    let results = results.to_str().unwrap();
    let run = dyncycle(
        &[
            "run",
            "--structure",
            "approx",
            "--in",
            &input,
            "--out",
            results,
        ],
        None,
    );
    assert!(run.status.success());
    let text = fs::read_to_string(results).unwrap();
    assert_eq!(text.lines().count(), 101);

    let check = |expected: &str| {
        dyncycle(
            &[
                "check",
                "--structure",
                "approx",
                "--in",
                &input,
                "--expected",
                expected,
            ],
            None,
        )
    };
    assert_eq!(check(results).status.code(), Some(0));

    let mut lines: Vec<String> = text.lines().map(str::to_string).collect();
    lines[5] = "4,12345".into();
    let corrupted = dir.path().join("corrupted.csv");
    fs::write(&corrupted, lines.join("\n") + "\n").unwrap();
    let out = check(corrupted.to_str().unwrap());
    assert_eq!(out.status.code(), Some(1));
    let report = String::from_utf8(out.stderr).unwrap();
    assert!(report.contains("query 4"), "{report}");

    lines.truncate(50);
    fs::write(&corrupted, lines.join("\n") + "\n").unwrap();
    assert_eq!(check(corrupted.to_str().unwrap()).status.code(), Some(1));
}

#[test]
fn malformed_line_reports_its_number() {
    let text = "{\"n\":4,\"weights\":\"nonneg\",\"W\":10}\n{\"op\":\"query\"}\n{\"op\":\"insert_edge\",\"u\":0}\n";
    let out = dyncycle(&["run", "--structure", "oracle"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn invalid_operations_are_input_errors() {
    let text =
        "{\"n\":4,\"weights\":\"nonneg\",\"W\":10}\n{\"op\":\"delete_edge\",\"u\":0,\"v\":1}\n";
    let out = dyncycle(&["check", "--structure", "negcycle"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));

    let text = "{\"n\":4,\"weights\":\"nonneg\",\"W\":10}\n";
    let out = dyncycle(&["run", "--structure", "threshold"], Some(text.as_bytes()));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn answers_are_exact_for_integer_weights() {
    let text = "{\"n\":3,\"weights\":\"signed\",\"W\":10}\n\
{\"op\":\"insert_edge\",\"u\":0,\"v\":1,\"w\":2}\n\
{\"op\":\"insert_edge\",\"u\":1,\"v\":2,\"w\":3}\n\
{\"op\":\"query\"}\n\
{\"op\":\"insert_edge\",\"u\":2,\"v\":0,\"w\":4}\n\
{\"op\":\"query\"}\n\
{\"op\":\"vertex_update\",\"v\":2,\"in\":[[1,-3]],\"out\":[[0,-1]]}\n\
{\"op\":\"query\"}\n";
    let out = dyncycle(&["run", "--structure", "oracle"], Some(text.as_bytes()));
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "query_index,answer\n0,+inf\n1,9\n2,-inf\n"
    );
}

#[test]
fn bench_writes_one_row_per_operation() {
    let dir = tempfile::tempdir().unwrap();
    let input = gen(
        dir.path(),
        "w.jsonl",
        &[
            "--seed",
            "2",
            "--n",
            "10",
            "--updates",
            "20",
            "--query-every",
            "4",
        ],
    );
    let out = dyncycle(
        &["bench", "--structure", "exact-mincycle", "--in", &input],
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    assert_eq!(
        reader.headers().unwrap(),
        vec![
            "op_index",
            "op_kind",
            "wall_ns",
            "dijkstra_calls",
            "update_calls"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 25);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0].parse::<usize>().unwrap(), i);
        assert!(["vertex_update", "query"].contains(&&row[1]));
        row[2].parse::<u128>().unwrap();
        row[3].parse::<u64>().unwrap();
        row[4].parse::<u64>().unwrap();
    }
    assert!(rows.iter().any(|r| r[3].parse::<u64>().unwrap() > 0));
}
