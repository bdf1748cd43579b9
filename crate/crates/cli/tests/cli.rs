use std::process::{Command, Output};

fn oca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_oca"))
        .args(args)
        .output()
        .expect("run oca")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn cycles_example() {
    let o = oca(&["cycles", "--rule-f", "90", "--rule-g", "150", "--diameter", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v, serde_json::json!({"pairs": [[1, 1], [15, 1]]}));
}

#[test]
fn orthogonal_example() {
    let o = oca(&["orthogonal", "--rule-f", "90", "--rule-g", "90", "--diameter", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), r#"{"orthogonal":false}"#);
}

#[test]
fn enumerate_linear_example() {
    let o = oca(&["enumerate-linear", "--diameter", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mloca_unordered"], 3);
    assert_eq!(v["loca_unordered"], 21);
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed"));
}

#[test]
fn exit_statuses() {
    assert_eq!(oca(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(oca(&["cycles", "--diameter", "3", "--rule-f", "90", "--bogus"]).status.code(), Some(1));
    let o = oca(&["square", "--rule-f", "30", "--diameter", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bipermutive"));
    assert!(o.stdout.is_empty());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["search", "--diameter", "4", "--format", "csv"];
    let a = oca(&args);
    let b = oca(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let one = oca(&["enumerate-linear", "--diameter", "8", "--threads", "1", "--shards", "1"]);
    let many = oca(&["enumerate-linear", "--diameter", "8", "--threads", "8", "--shards", "8"]);
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn checkpointed_search_matches_plain_run() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().to_str().unwrap();
    let plain = oca(&["search", "--diameter", "4"]);
    let first = oca(&["search", "--diameter", "4", "--shards", "4", "--checkpoint-dir", ckpt]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 4);
    let resumed = oca(&["search", "--diameter", "4", "--shards", "4", "--checkpoint-dir", ckpt]);
    assert_eq!(plain.stdout, first.stdout);
    assert_eq!(plain.stdout, resumed.stdout);
}

#[test]
fn keystream_bits_and_bytes() {
    let bits = oca(&[
        "keystream", "--rule-f", "90", "--rule-g", "150", "--diameter", "3", "--seed", "0x1", "--len", "16",
    ]);
    let bits = stdout(&bits);
    let bits = bits.trim();
    assert_eq!(bits.len(), 64);
    // Period 15: the 16th state equals the first.
    assert_eq!(&bits[..4], &bits[60..]);
    let bytes = oca(&[
        "keystream", "--rule-f", "90", "--rule-g", "150", "--diameter", "3", "--seed", "0x1", "--len", "16",
        "--format", "bytes",
    ]);
    assert_eq!(bytes.stdout.len(), 8);
    let repacked: String = bytes.stdout.iter().map(|b| format!("{b:08b}")).collect();
    assert_eq!(repacked, bits);
}
