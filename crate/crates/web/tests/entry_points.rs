use permpoly_web::{classify, parse_exponents, permutation_map, window_coefficient};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn classify_reports_every_route() {
    let r = parse(classify(3, 1, 7, 2));
    assert_eq!(r["ok"], true);
    assert_eq!(r["n"], "314");
    for route in ["closed_form", "borrow_set", "brute"] {
        assert_eq!(r[route], 1, "{route}");
    }
    assert_eq!(r["kernel_gcd"], 1);
}

#[test]
fn classify_large_field_skips_enumeration() {
    let r = parse(classify(5, 2, 11, 3));
    assert_eq!(r["ok"], true);
    assert!(r.get("brute").is_none());
    assert_eq!(r["closed_form"], r["borrow_set"]);
}

#[test]
fn classify_errors_and_notes() {
    assert_eq!(parse(classify(4, 1, 4, 3))["ok"], false);
    let r = parse(classify(3, 1, 21, 5));
    assert_eq!(r["ok"], true);
    assert!(r["note"].is_string());
}

#[test]
fn permutation_map_of_f32() {
    let r = parse(permutation_map(2, 1, 5, 2));
    assert_eq!(r["ok"], true);
    assert_eq!(r["verdict"]["is_pp"], true);
    let mut images: Vec<u64> = r["images"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    images.sort_unstable();
    assert_eq!(images, (0..32).collect::<Vec<_>>());
    assert_eq!(parse(permutation_map(3, 1, 8, 2))["ok"], false);
}

#[test]
fn window_coefficient_examples() {
    let r = parse(window_coefficient(3, "0:9, 1:4", "0:9, 2:1, 3:3", 13));
    assert_eq!(r["exact"], "4");
    assert_eq!(r["residue"], 4);
    // both target variables sit inside both windows
    let r = parse(window_coefficient(5, "0:7,1:2", "0:5,2:2,3:2", 11));
    assert_eq!(r["exact"], "126");
    assert_eq!(r["residue"], 5);
    assert_eq!(parse(window_coefficient(3, "0-7", "", 11))["ok"], false);
}

#[test]
fn exponent_parsing() {
    let m = parse_exponents(" 0:2, 3:1 ,0:1,").unwrap();
    assert_eq!(m.into_iter().collect::<Vec<_>>(), vec![(0, 3), (3, 1)]);
    assert!(parse_exponents("x:1").is_err());
}
