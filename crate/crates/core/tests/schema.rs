use std::collections::BTreeSet;

use morava_density::certificate::CertificateJson;
use morava_density::density::{certify, Parameters};
use serde_json::Value;

const SCHEMA: &str = include_str!("../../../docs/certificate.schema.json");

fn keys(v: &Value) -> BTreeSet<String> {
    v.as_object().unwrap().keys().cloned().collect()
}

fn required(s: &Value) -> BTreeSet<String> {
    s["required"].as_array().unwrap().iter().map(|k| k.as_str().unwrap().to_string()).collect()
}

#[test]
fn schema_matches_serialized_fields() {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let props = &schema["properties"];
    for (p, ell) in [(2, 3), (3, 7)] {
        let cert = certify(&Parameters::new(p, ell)).unwrap();
        let doc: Value = serde_json::from_str(&CertificateJson::from(&cert).to_json()).unwrap();
        assert_eq!(keys(&doc), required(&schema));
        for section in ["parameters", "verdicts", "versions"] {
            assert_eq!(keys(&doc[section]), required(&props[section]), "{section}");
            assert_eq!(keys(&doc[section]), keys(&props[section]["properties"]), "{section}");
        }
        let item = &props["witnesses"]["items"];
        let roles: Vec<&str> =
            item["properties"]["role"]["enum"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect();
        for w in doc["witnesses"].as_array().unwrap() {
            assert_eq!(keys(w), required(item));
            assert!(roles.contains(&w["role"].as_str().unwrap()));
        }
    }
}
