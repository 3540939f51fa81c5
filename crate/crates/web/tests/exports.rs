use frob_web::{census_csv, sail_picture, verdict_json, MAX_DEMO_NORM};

#[test]
fn verdict_of_counterexample() {
    let v: serde_json::Value = serde_json::from_str(&verdict_json("1,2,0;0,1,2;-7,0,29").unwrap()).unwrap();
    assert_eq!(v["verdict"]["status"], "non_frobenius");
}

#[test]
fn sail_picture_is_svg() {
    let svg = sail_picture("0,1,0;0,0,1;1,2,-1", 0).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("V=1 E=3 F=2"));
}

#[test]
fn census_rows() {
    let csv = census_csv(3, 4).unwrap();
    assert_eq!(csv.lines().last(), Some("4,240,0"));
    assert!(census_csv(3, MAX_DEMO_NORM + 1).is_err());
}

#[test]
fn errors_are_messages() {
    assert!(verdict_json("1,2;3").unwrap_err().contains("not square"));
}
