use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

const ONE: &str = r#"{"ring":"Z","n":1,"S":[[1],[2]],"coords":{"1":"1","2":"0"}}"#;

fn witt(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(args)
        .current_dir(cwd)
        .env("WITT_CACHE_DIR", cwd.join("cache"))
        .output()
        .expect("spawn witt")
}

fn run(args: &[&str]) -> (String, String, i32) {
    let dir = tempfile::tempdir().unwrap();
    let out = witt(args, dir.path());
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.code().unwrap(),
    )
}

fn ok(args: &[&str]) -> String {
    let (stdout, stderr, code) = run(args);
    assert_eq!(code, 0, "{args:?}: {stderr}");
    stdout
}

#[test]
fn classical_sum() {
    assert_eq!(ok(&["add", "--in", ONE, "--in", ONE]), "{\"S\":[[1],[2]],\"coords\":{\"1\":\"2\",\"2\":\"-1\"},\"n\":1,\"ring\":\"Z\"}\n");
}

#[test]
fn ghost_then_unghost() {
    let g = ok(&["ghost", "--in", ONE]);
    assert_eq!(g, "{\"S\":[[1],[2]],\"ghost\":{\"1\":\"1\",\"2\":\"1\"},\"n\":1,\"ring\":\"Z\"}\n");
    assert_eq!(ok(&["unghost", "--in", g.trim()]), format!("{}\n", canonical(ONE)));
}

fn canonical(text: &str) -> String {
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    serde_json::to_string(&v).unwrap()
}

#[test]
fn universal_sum_table() {
    assert_eq!(
        ok(&["universal", "--n", "1", "--S", "[[1],[2]]", "--op", "add"]),
        "{\"S\":[[1],[2]],\"n\":1,\"op\":\"add\",\"polys\":{\"1\":\"x_1 + y_1\",\"2\":\"x_2 + y_2 - x_1*y_1\"}}\n"
    );
}

#[test]
fn remark_lines_match_golden() {
    let out: serde_json::Value = serde_json::from_str(&ok(&["dual", "remark", "--ring", "Q"])).unwrap();
    let lines: Vec<&str> = out["lines"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    assert_eq!(lines.join("\n") + "\n", include_str!("golden/remark_canonical.txt"));
    assert_eq!(out["determinant"], "-2");
    assert_eq!(out["rank"], 5);
}

#[test]
fn rewriting_and_rank() {
    assert_eq!(ok(&["dual", "express", "--ring", "Z", "--key", "(2)"]), "{\"n\":1,\"ring\":\"Z\",\"terms\":{\"C(1)^2\":\"1\",\"C(2)\":\"-2\"}}\n");
    assert_eq!(ok(&["dual", "rank", "--ring", "Z/2", "--M", "1,1,1"]), "{\"D\":[1,1,1],\"dimension\":5,\"rank\":4,\"ring\":\"Z/2\"}\n");
}

#[test]
fn f_push() {
    assert_eq!(ok(&["fpush", "--op", "b", "--key", "1,1"]), "{\"n\":1,\"ring\":\"Z\",\"terms\":{\"b(2)\":\"2\"}}\n");
    assert_eq!(
        ok(&["fpush", "--op", "C", "--M", "2", "--n", "2"]),
        "{\"n\":2,\"ring\":\"Z\",\"terms\":{\"C(0,2)\":\"1\",\"C(1,1)\":\"1\",\"C(2,0)\":\"1\"}}\n"
    );
}

#[test]
fn iso_check_holds() {
    let other = r#"{"ring":"Z","n":1,"S":[[1],[2]],"coords":{"1":"3","2":"5"}}"#;
    assert_eq!(ok(&["iso-check", "--in", ONE, "--in", other]), "{\"holds\":true}\n");
}

#[test]
fn exit_codes() {
    let (_, err, code) = run(&["ghost", "--in", "{bad"]);
    assert_eq!(code, 2, "{err}");
    assert!(err.starts_with("witt: "));
    assert_eq!(run(&["frobenius"]).2, 2);
    assert_eq!(run(&["add", "--in", ONE]).2, 2);
    let not_closed = r#"{"ring":"Z","n":1,"S":[[2]],"coords":{"2":"1"}}"#;
    assert_eq!(run(&["ghost", "--in", not_closed]).2, 2);

    let series = r#"{"ring":"Z","n":1,"window":{"kind":"degree","d":3},"coeffs":{"0":"1","1":"1"}}"#;
    assert_eq!(run(&["log", "--in", series]).2, 3);
    assert_eq!(run(&["dual", "express", "--ring", "Z/2", "--key", "(1,1,1)"]).2, 3);
    assert_eq!(run(&["dual", "rank", "--ring", "Z", "--M", "1,1,1"]).2, 3);
    let q = r#"{"ring":"Q","n":1,"S":[[1],[2]],"coords":{"1":"1","2":"0"}}"#;
    assert_eq!(run(&["add", "--in", ONE, "--in", q]).2, 3);
}

#[test]
fn output_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let out = witt(&["neg", "--in", ONE, "--out", target.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&target).unwrap();
    assert_eq!(written, "{\"S\":[[1],[2]],\"coords\":{\"1\":\"-1\",\"2\":\"-1\"},\"n\":1,\"ring\":\"Z\"}\n");

    let mut child = Command::new(env!("CARGO_BIN_EXE_witt"))
        .args(["neg", "--in", "-"])
        .env("WITT_CACHE_DIR", dir.path().join("cache"))
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(ONE.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), written);
}

#[test]
fn file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.json");
    std::fs::write(&path, ONE).unwrap();
    let out = witt(&["ghost", "--in", path.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("\"ghost\":{\"1\":\"1\",\"2\":\"1\"}"));
}

#[test]
fn warm_cache_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["universal", "--n", "2", "--window-deg", "3", "--op", "mul"];
    let cold = witt(&args, dir.path());
    assert!(cold.status.success());
    let cached: Vec<_> = std::fs::read_dir(dir.path().join("cache")).unwrap().collect();
    assert_eq!(cached.len(), 1);
    let warm = witt(&args, dir.path());
    assert_eq!(cold.stdout, warm.stdout);

    let x = r#"{"ring":"Z/12","n":2,"S":[[1,0],[0,1],[1,1]],"coords":{"1,0":"5","0,1":"7","1,1":"11"}}"#;
    let cold = witt(&["mul", "--in", x, "--in", x], dir.path());
    let warm = witt(&["mul", "--in", x, "--in", x], dir.path());
    assert!(cold.status.success());
    assert_eq!(cold.stdout, warm.stdout);
}
