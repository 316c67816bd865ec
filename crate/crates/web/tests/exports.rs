use liegen_web::{build_ring_json, descendant_counts_json, porc_counts_json};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn formula_values() {
    let v = parse(&porc_counts_json(7).unwrap());
    assert_eq!(v["total"], 1988);
    assert_eq!(v["parents"][6]["id"], "7.650");
    assert_eq!(v["parents"][6]["expected"], 913);
    assert!(porc_counts_json(9).is_err());
    assert!(porc_counts_json(3).is_err());
}

#[test]
fn ring_summary() {
    let v = parse(&build_ring_json("<a,b | bab, ba^3b, pa, pb, class 6>", 5, None, None, None).unwrap());
    assert_eq!(v["order"], "5^7");
    assert_eq!(v["class"], 6);
    assert_eq!(v["characteristic_p"], true);
    let v = parse(&build_ring_json("<a,b | bab-ba^3, ba^3b-xba^5, pa, pb, class 6>", 5, Some(3), None, None).unwrap());
    assert_eq!(v["dim"], 7);
    let e = build_ring_json("<a,b | bab-xba^3, pa, pb>", 5, None, None, None).unwrap_err();
    assert!(e.contains("not bound"), "{e}");
}

#[test]
fn counts_at_5() {
    let v = parse(&descendant_counts_json(5).unwrap());
    assert_eq!(v["total"], 816);
    assert_eq!(v["match"], true);
    assert_eq!(v["parents"][4]["count"], 25);
    assert!(descendant_counts_json(17).is_err());
}
