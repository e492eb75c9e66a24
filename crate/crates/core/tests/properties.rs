use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use morava_density::certificate::{replay, CertificateJson};
use morava_density::density::{certify, evaluate, DensityCertificate, Parameters, Witness, WitnessRole};
use morava_density::quatalg::{algebra_and_order, enumerate_norm_trace};
use num_bigint::BigInt;
use proptest::prelude::*;

const PAIRS: [(u64, u64); 8] = [(2, 3), (2, 5), (3, 2), (3, 7), (5, 2), (5, 7), (7, 3), (13, 2)];

fn cached(p: u64, ell: u64) -> DensityCertificate {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), DensityCertificate>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().unwrap().get(&(p, ell)) {
        return c.clone();
    }
    let c = certify(&Parameters::new(p, ell)).unwrap();
    cache.lock().unwrap().insert((p, ell), c.clone());
    c
}

fn verdicts(c: &DensityCertificate) -> [String; 3] {
    [c.thm_lambda.label(), c.cor_gamma1.label(), c.thm_gamma.label()]
}

fn bare(c: &DensityCertificate) -> Vec<Witness> {
    c.witnesses.iter().map(|(w, _)| w.clone()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn lower_precision_keeps_verdicts(idx in 0..PAIRS.len(), precision in 2u32..4) {
        let (p, ell) = PAIRS[idx];
        let cert = cached(p, ell);
        let params = Parameters { precision, ..cert.parameters.clone() };
        let lower = evaluate(&params, bare(&cert), cert.failures.clone()).unwrap();
        prop_assert_eq!(verdicts(&lower), verdicts(&cert));
        prop_assert_eq!(lower.span_rank, cert.span_rank);
    }

    #[test]
    fn conjugating_lambda_witnesses_keeps_verdict(idx in 2..PAIRS.len(), pick in 0usize..64, use_unit in any::<bool>()) {
        let (p, ell) = PAIRS[idx];
        let cert = cached(p, ell);
        let (_, order) = algebra_and_order(p).unwrap();
        let u = if use_unit {
            let units = enumerate_norm_trace(&order, &BigInt::from(1), None);
            units[pick % units.len()].element.clone()
        } else {
            cert.witness(WitnessRole::NormEll).unwrap().0.element.clone()
        };
        let u_inv = u.inverse().unwrap();
        let moved: Vec<Witness> = bare(&cert)
            .into_iter()
            .map(|mut w| {
                if w.role.is_lambda() {
                    w.element = &(&u * &w.element) * &u_inv;
                }
                w
            })
            .collect();
        let conj = evaluate(&cert.parameters, moved, cert.failures.clone()).unwrap();
        prop_assert!(conj.thm_lambda.holds(), "{}", conj.thm_lambda.label());
        prop_assert_eq!(conj.span_rank, cert.span_rank);
    }

    #[test]
    fn json_round_trip(idx in 0..PAIRS.len()) {
        let (p, ell) = PAIRS[idx];
        let cert = cached(p, ell);
        let text = CertificateJson::from(&cert).to_json();
        let back = CertificateJson::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        let r = replay(&back).unwrap();
        prop_assert!(r.consistent(), "{:?}", r.mismatches);
    }
}

#[test]
fn verdict_depends_only_on_generation() {
    for (p, ell) in PAIRS {
        let cert = cached(p, ell);
        assert!(cert.thm_lambda.holds() && cert.cor_gamma1.holds(), "p = {p}, l = {ell}");
        assert_eq!(cert.topological_generator, cert.thm_gamma.holds(), "p = {p}, l = {ell}");
        assert_eq!(cert.span_rank, if p == 2 { 4 } else { 2 });
    }
}

#[test]
fn damaged_witness_fails() {
    let cert = cached(5, 2);
    let mut ws = bare(&cert);
    let x = &ws[0].element;
    ws[0].element = x * x;
    let bad = evaluate(&cert.parameters, ws, vec![]).unwrap();
    assert!(!bad.thm_lambda.holds());
    assert!(!bad.thm_gamma.holds());
}
