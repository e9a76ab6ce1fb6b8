use std::io::Write;
use std::process::{Command, Output, Stdio};

fn mergecount(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mergecount"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn analyze_table() {
    let o = mergecount(&["analyze", "--from", "1", "--to", "8"], "");
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines[0], "n,B,W,F,twoB_minus_W,A2");
    assert_eq!(lines[5], "5,5,8,2,2,5");
    assert_eq!(lines[8], "8,12,17,0,7,12");
    assert_eq!(lines.len(), 9);
}

#[test]
fn eval_prints_exact_values() {
    let o = mergecount(&["eval", "b", "1000000000000"], "");
    assert_eq!(o.status.code(), Some(0));
    let expected = mergecount::counts::b_recurrence(1_000_000_000_000).unwrap();
    assert_eq!(stdout(&o).trim(), expected.to_string());
    assert_eq!(
        stdout(&mergecount(&["eval", "takagi", "0.375"], "")).trim(),
        "0.625"
    );
    assert_eq!(
        stdout(&mergecount(&["eval", "takagi", "3/2^3"], "")).trim(),
        "0.625"
    );
    let o = mergecount(&["eval", "takagi", "2/3", "--precision", "30"], "");
    assert!(stdout(&o).trim().ends_with("error<=2^-30"));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["eval", "bigF", "0.5"],
        vec!["eval", "takagi", "1/3"],
        vec!["analyze", "--from", "3", "--to", "1"],
        vec!["verify", "--suite", "formulas", "--max-n", "0"],
        vec!["frobnicate"],
    ] {
        let o = mergecount(&args, "");
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_all_passes() {
    let o = mergecount(
        &[
            "verify", "--suite", "all", "--max-n", "300", "--max-m", "16",
        ],
        "",
    );
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
    assert!(out.lines().count() >= 15);
}

#[test]
fn sample_csv() {
    let o = mergecount(
        &[
            "sample",
            "--function",
            "breveF",
            "--from",
            "2",
            "--to",
            "4",
            "--points",
            "9",
        ],
        "",
    );
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("x,y"));
    assert_eq!(out.lines().count(), 10);
    assert!(out.contains("\n3,1\n"));
}

#[test]
fn sortcount_reads_stdin() {
    let o = mergecount(&["sortcount", "--case", "file"], "5\n-2\n9\n0\n0\n");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n=5 comps="));
    assert!(stdout(&o).trim_end().ends_with("B=5 W=8"));
    let o = mergecount(&["sortcount", "--case", "file"], "1\n2.5\n");
    assert_eq!(o.status.code(), Some(2));
    let o = mergecount(&["sortcount", "--case", "worst", "--n", "1000"], "");
    assert_eq!(stdout(&o).trim(), "n=1000 comps=8977 B=4932 W=8977");
}
