//! The verification suite in quick mode, and its negative control.

use desitter::conformal::TorsionVariant;
use desitter::suite::*;

#[test]
fn quick_suite_passes() {
    let report = run_suite(&SuiteConfig {
        quick: true,
        ..Default::default()
    });
    for c in &report.criteria {
        assert!(c.pass, "{}", summary_line(c));
        assert!(!c.checks.is_empty());
    }
    assert!(report.pass);
    assert_eq!(report.criteria.len(), CRITERIA.len());
}

#[test]
fn negated_torsion_is_caught() {
    let cfg = SuiteConfig {
        quick: true,
        variant: TorsionVariant::Negated,
        ..Default::default()
    };
    let c = run_criterion(9, &cfg);
    assert!(!c.pass, "{}", summary_line(&c));
    // the bound and the sign identity only see |T|
    assert!(run_criterion(8, &cfg).pass);
}

#[test]
fn report_serializes() {
    let c = run_criterion(
        1,
        &SuiteConfig {
            quick: true,
            ..Default::default()
        },
    );
    let json = serde_json::to_value(&c).unwrap();
    assert_eq!(json["id"], 1);
    assert!(json["checks"][0]["tol"].is_number());
    assert!(summary_line(&c).contains("PASS"));
}
