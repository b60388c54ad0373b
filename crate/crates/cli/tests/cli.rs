use std::process::Command;

fn permpoly(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_permpoly"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn agreeing_case_exits_zero() {
    let (code, out) = permpoly(&["cn", "--p", "3", "--e", "7", "--a", "2", "--no-timing"]);
    assert_eq!(code, 0);
    let rec: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rec["status"], "ok");
    assert_eq!(rec["result"]["value"], 1);
    for key in ["cmd", "inputs", "result", "status", "runtime_ms"] {
        assert!(rec.get(key).is_some(), "{key}");
    }
}

#[test]
fn kernel_case_is_a_usage_error() {
    let (code, out) = permpoly(&["cn", "--p", "3", "--e", "2", "--a", "3"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert_eq!(permpoly(&["no-such-command"]).0, 1);
    assert_eq!(
        permpoly(&["lemma", "power-minus-one", "--p", "3", "--e", "4"]).0,
        1
    );
}

#[test]
fn help_exits_zero() {
    assert_eq!(permpoly(&["--help"]).0, 0);
}

#[test]
fn square_minus_one_closed_form() {
    let (code, out) = permpoly(&[
        "cn",
        "--p",
        "3",
        "--k",
        "2",
        "--e",
        "5",
        "--a",
        "4",
        "--method",
        "closed-form",
    ]);
    assert_eq!(code, 0);
    let rec: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(rec["result"]["n"], "80");
    assert_eq!(rec["result"]["value"], 2);
}

#[test]
fn reports_are_reproducible_and_mirrored() {
    let dir = std::env::temp_dir().join(format!("permpoly-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.jsonl");
    let args = [
        "sweep",
        "--max-card",
        "729",
        "--primes",
        "3,2",
        "--include-even",
        "--kernel",
        "--no-timing",
    ];
    let (code, first) = permpoly(&[&args[..], &["--out", path.to_str().unwrap()]].concat());
    assert_eq!(code, 0);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), first);
    let (_, second) = permpoly(&args);
    assert_eq!(first, second);
    // records are ordered by (q, e, a)
    let keys: Vec<(u64, u64, i64)> = first
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            let i = &v["inputs"];
            (
                i["q"].as_u64().unwrap(),
                i["e"].as_u64().unwrap(),
                i["a"].as_i64().unwrap(),
            )
        })
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    assert!(first.contains("\"q\":2,") && first.contains("\"q\":9,"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn even_prime_needs_the_flag() {
    let (code, out) = permpoly(&["sweep", "--primes", "2"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
}

#[test]
fn tables_and_lemmas() {
    let (code, out) = permpoly(&["tables", "two-term", "--no-timing"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"factors\":\"5·7\""));
    let (code, out) = permpoly(&["lemma", "q-minus-one", "--p", "5", "--e", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("\"closed\":[{\"first\":1,\"values\":[1,0,3]}]"));
    let (code, _) = permpoly(&["hasse", "--p", "3", "--e", "8", "--a", "2"]);
    assert_eq!(code, 0);
}
