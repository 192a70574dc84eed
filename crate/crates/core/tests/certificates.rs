use gordian::certify::{
    claimed_sum_diagram, summarize_additivity, verify_certificate, AdditivityVerdict, Certificate, CertifyError, StepKind,
};
use gordian::{fingerprint, signature, KnotTable};

fn bundled(name: &str) -> Certificate {
    Certificate::bundled()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, c)| c)
        .unwrap()
}

fn change_positions(c: &Certificate) -> Vec<usize> {
    (0..c.steps.len())
        .filter(|&i| matches!(c.steps[i].kind, StepKind::Change { .. }))
        .collect()
}

#[test]
fn bundled_certificates_pass() {
    let t = KnotTable::bundled();
    for (name, c) in Certificate::bundled() {
        let r = verify_certificate(&c, t);
        assert!(r.passed(), "{name}:\n{r}");
        assert!(r.verdict_line().ends_with("bound 3: PASS"));
        assert!(r.steps.iter().all(|s| s.passed));
        assert_eq!(verify_certificate(&c, t), r, "replay is deterministic");
    }
}

#[test]
fn start_matches_the_claimed_sum() {
    let t = KnotTable::bundled();
    for (name, c) in Certificate::bundled() {
        let start = gordian::dt_to_diagram(c.start()).unwrap();
        let sum = claimed_sum_diagram(&c, t).unwrap();
        assert_eq!(fingerprint(&start).unwrap(), fingerprint(&sum).unwrap(), "{name}");
    }
    // the mirror choices are the ones with these signatures
    assert_eq!(signature(&claimed_sum_diagram(&bundled("5_1-8_2"), t).unwrap()), 0);
    assert_eq!(signature(&claimed_sum_diagram(&bundled("3_1-10_6"), t).unwrap()).abs(), 2);
}

#[test]
fn additivity_verdicts() {
    let t = KnotTable::bundled();
    let v = |n: &str| summarize_additivity(&bundled(n), t).unwrap();
    assert_eq!(v("4_1-9_10").verdict, AdditivityVerdict::StrictFailureOfAdditivity);
    assert_eq!(v("5_1-8_2").verdict, AdditivityVerdict::StrictFailureOfAdditivity);
    assert_eq!(v("3_1-10_6").verdict, AdditivityVerdict::ConditionalOnRange);
    assert_eq!(v("4_1-9_10").murasugi_floor, 2);
    assert_eq!(v("5_1-8_2").murasugi_floor, 0);
    assert_eq!(v("3_1-10_6").murasugi_floor, 1);
}

fn tampered(c: &Certificate, which: usize) -> Certificate {
    let mut c = c.clone();
    let changes = change_positions(&c);
    match which {
        // change a different crossing
        0 => {
            if let StepKind::Change { index, .. } = &mut c.steps[changes[0]].kind {
                *index += 1;
            }
        }
        // expect a different knot
        1 => {
            if let StepKind::Change { expected_name, .. } = &mut c.steps[changes[1]].kind {
                *expected_name = Some(if expected_name.as_deref() == Some("8_14") { "10_129" } else { "8_14" }.into());
            }
        }
        // substitute a diagram with one crossing switched
        _ => {
            let i = c
                .steps
                .iter()
                .position(|s| matches!(s.kind, StepKind::Substitute { .. }))
                .unwrap();
            if let StepKind::Substitute { dt, .. } = &mut c.steps[i].kind {
                *dt = dt.with_flip(0);
            }
        }
    }
    c
}

#[test]
fn every_tampered_certificate_fails() {
    let t = KnotTable::bundled();
    let mut failures = 0;
    for (name, c) in Certificate::bundled() {
        for which in 0..3 {
            let bad = tampered(&c, which);
            assert_ne!(bad, c);
            let r = verify_certificate(&bad, t);
            assert!(!r.passed(), "{name} tamper {which} still passes:\n{r}");
            assert!(matches!(r.error, Some(CertifyError::StepMismatch { .. })), "{name} {which}: {r}");
            failures += 1;
        }
    }
    assert_eq!(failures, 9);
}

#[test]
fn dropping_the_last_change_leaves_a_knot() {
    let mut c = bundled("4_1-9_10");
    c.steps.pop();
    c.claimed_bound = 2;
    let r = verify_certificate(&c, KnotTable::bundled());
    assert!(matches!(r.error, Some(CertifyError::UnknotNotReached { crossings: 8 })), "{r}");
}
