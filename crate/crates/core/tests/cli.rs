use std::io::Write;
use std::process::{Command, Output, Stdio};

fn amd_relay(args: &[&str]) -> Output {
    amd_relay_with_stdin(args, None)
}

fn amd_relay_with_stdin(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_amd-relay"))
        .args(args)
        .env_remove("AMD_RELAY_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    if let Some(text) = stdin {
        pipe.write_all(text.as_bytes()).unwrap();
    }
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn encode_then_decode() {
    let enc = amd_relay(&["encode", "1,2,3", "--field", "gf2_16", "--seed", "9"]);
    assert_eq!(code(&enc), 0);
    let cw = stdout(&enc);
    assert_eq!(cw.split_whitespace().count(), 5);
    let dec = amd_relay(&["decode", cw.trim(), "--field", "gf2_16"]);
    assert_eq!((code(&dec), stdout(&dec).trim()), (0, "0001 0002 0003"));
}

#[test]
fn rejected_codeword_prints_bot_and_exits_2() {
    let dec = amd_relay(&["decode", "01 02 03 04 05", "--field", "gf7"]);
    assert_eq!((code(&dec), stdout(&dec).trim()), (2, "BOT"));
}

#[test]
fn encode_with_fixed_point() {
    let enc = amd_relay(&["encode", "1,2,3", "--field", "gf7", "--x", "2"]);
    assert_eq!(stdout(&enc).trim(), "01 02 03 02 03");
}

#[test]
fn errors_exit_1() {
    for args in [
        &["encode", "1", "--field", "gf2_8", "--d", "2"][..],
        &["encode", "1,2,3", "--field", "gf9"],
        &["decode", "1 2", "--field", "gf7"],
        &["no-such-command"],
        &["game", "forge-relay", "no-such-adversary"],
    ] {
        let o = amd_relay(args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(code(&amd_relay(&["--help"])), 0);
}

#[test]
fn share_pipes_into_recover() {
    let share = amd_relay(&[
        "share", "1,2", "--d", "2", "--field", "gf7", "--scheme", "shamir", "--seed", "3",
        "--format", "json",
    ]);
    assert_eq!(code(&share), 0);
    let json = stdout(&share);
    let recover = [
        "recover", "-", "--field", "gf7", "--d", "2", "--scheme", "shamir",
    ];
    let o = amd_relay_with_stdin(&recover, Some(&json));
    assert_eq!((code(&o), stdout(&o).trim()), (0, "01 02"));

    let mut v: serde_json::Value = serde_json::from_str(&json).unwrap();
    v["entries"][0] = serde_json::Value::Null;
    let o = amd_relay_with_stdin(&recover, Some(&v.to_string()));
    assert_eq!((code(&o), stdout(&o).trim()), (0, "01 02"));

    v["entries"][1][0] = "06".into();
    let o = amd_relay_with_stdin(&recover, Some(&v.to_string()));
    assert_eq!((code(&o), stdout(&o).trim()), (2, "BOT"));
}

#[test]
fn tampered_relay_run_and_its_trace() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    let sim = amd_relay(&[
        "relay-sim",
        "--field",
        "gf2_16",
        "--tamper",
        "2:1:1",
        "--format",
        "json",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(code(&sim), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&sim)).unwrap();
    assert_eq!(report["outcome"], "reject");

    let text = std::fs::read_to_string(&trace).unwrap();
    for line in text.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
    let replay = amd_relay(&[
        "replay",
        trace.to_str().unwrap(),
        "--field",
        "gf2_16",
        "--lengths",
        "2,2,2",
    ]);
    assert_eq!(code(&replay), 0);
    let lines: Vec<String> = stdout(&replay).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("tampered true") && lines[1].ends_with("00010001000100010001"));
    assert!(lines[0].contains("tampered false") && lines[2].contains("tampered false"));
}

#[test]
fn dropped_path_is_bot_for_additive_but_not_shamir() {
    let add = amd_relay(&[
        "relay-sim",
        "--field",
        "gf2_16",
        "--drop",
        "1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&add)).unwrap();
    assert_eq!(v["outcome"], "reject");
    let sh = amd_relay(&[
        "relay-sim",
        "--field",
        "gf2_16",
        "--drop",
        "1",
        "--scheme",
        "shamir",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&sh)).unwrap();
    assert_eq!(v["outcome"], "match");
}

#[test]
fn game_csv_has_one_row_per_adversary() {
    let o = amd_relay(&[
        "game",
        "shift-robust",
        "all",
        "--field",
        "gf2_16",
        "--trials",
        "200",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 0);
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "adversary"));
    assert!(reader.records().count() >= 5);
}

#[test]
fn small_field_shift_game_stays_under_its_bound() {
    // GF(16), d = 1: the exact bound 1/8 is large enough to measure.
    let o = amd_relay(&[
        "game",
        "shift-robust",
        "all",
        "--field",
        "gf16",
        "--d",
        "1",
        "--trials",
        "4000",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn attack_reports_the_tag_identity() {
    let o = amd_relay(&[
        "attack", "--delta2", "beef", "--trials", "20", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["success_rate"], 1.0);
    let honest = amd_relay(&["attack", "--honest", "--format", "json"]);
    assert_eq!(code(&honest), 0);
}

#[test]
fn presets_list_two_element_overhead() {
    let o = amd_relay(&["presets", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let mut reader = csv::Reader::from_reader(o.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    let col = headers
        .iter()
        .position(|h| h == "overhead_elements")
        .unwrap();
    let rows: Vec<_> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r[col].is_empty() || &r[col] == "2"));
}
