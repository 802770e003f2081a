use rcinv_web::{balls_json, mr_json, stephen_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn stephen_cycle() {
    let v = parse(stephen_json("@kind special_inverse\n@gens a\n@rel a a a = 1\n", "1", 4).unwrap());
    assert_eq!(v["vertices"], 3);
    assert_eq!(v["stabilized"], true);
    assert_eq!(v["edges"].as_array().unwrap().len(), 3);
    assert!(stephen_json("@kind special_inverse\n@gens a\n", "b", 2).is_err());
}

#[test]
fn mr_pair() {
    let v = parse(mr_json(1, "q0 a0 p0", "q1 a1 p1", 8).unwrap());
    assert_eq!(v["equal"], true);
    assert!(v["chain"].is_array());
    let v = parse(mr_json(1, "q0 a0 a0 p0", "q1 a1 a1 p1", 6).unwrap());
    assert_eq!(v["equal"], false);
    assert!(v["chain"].is_null());
}

#[test]
fn ball_stats() {
    let v = parse(balls_json("z2", 3).unwrap());
    assert_eq!(v["omega"]["passed"], true);
    assert_eq!(v["gamma"]["passed"], true);
    assert!(balls_json("nope", 3).is_err());
}
