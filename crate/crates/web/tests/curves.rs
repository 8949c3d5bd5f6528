use ditent_web::{filter_curve_json, rotation_curve_json, sweep_curve_json};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn ising_sweep_peaks_near_one() {
    let out = parse(
        sweep_curve_json(
            r#"{"model":"ising","sites":8,"partition":"DDABBBCD","fixed":{"h":1},
                "param":"J/h","start":0.5,"stop":1.5,"step":0.1}"#,
        )
        .unwrap(),
    );
    assert_eq!(out["x"].as_array().unwrap().len(), 11);
    assert_eq!(out["columns"]["S_delta"].as_array().unwrap().len(), 11);
    let peak = out["peaks"]["S_delta"].as_f64().unwrap();
    assert!((peak - 1.0).abs() <= 0.1 + 1e-12, "peak {peak}");
    assert_eq!(out["failures"], 0);
}

#[test]
fn filter_curve_ends_at_zero() {
    let out = parse(
        filter_curve_json(r#"{"model":"ising","sites":6,"partition":"DABBCD","fixed":{"J":1}}"#)
            .unwrap(),
    );
    let values = out["values"].as_array().unwrap();
    assert_eq!(values.len(), 60);
    assert_eq!(values.last().unwrap().as_f64().unwrap(), 0.0);
    assert!(out["unfiltered"].as_f64().unwrap() > 0.0);
}

#[test]
fn rotation_keeps_entropy() {
    let out = parse(
        rotation_curve_json(
            r#"{"model":"phi4","sites":4,"partition":"ABCD","fixed":{"lambda":0.3,"kappa":0.5},
                "region":"AB","steps":8}"#,
        )
        .unwrap(),
    );
    let s: Vec<f64> = out["entropy"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(s.len(), 9);
    assert!(s.iter().all(|v| (v - s[0]).abs() < 1e-10));
}

#[test]
fn bad_requests_are_reported() {
    assert!(sweep_curve_json("{").is_err());
    assert!(sweep_curve_json(
        r#"{"model":"ising","sites":8,"partition":"DDABBBCD","param":"lambda","start":0,"stop":1,"step":0.5}"#
    )
    .is_err());
    assert!(filter_curve_json(r#"{"model":"ising","sites":20,"partition":"ABCD"}"#).is_err());
    assert!(
        rotation_curve_json(r#"{"model":"ising","sites":4,"partition":"ABCD","region":"E"}"#)
            .is_err()
    );
}
