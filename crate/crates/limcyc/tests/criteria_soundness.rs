//! Cross-module consistency: checker conclusions must never contradict the
//! numerically detected cycles on the gallery systems, and every violation
//! witness must reproduce its violation.

use limcyc::criteria::{self, Conclusion, ScanConfig, Status};
use limcyc::cycles::{find_cycles, SearchConfig, Stability};
use limcyc::gallery;

#[test]
fn conclusions_never_contradict_detected_cycles() {
    let scan = ScanConfig::default();
    let cfg = SearchConfig::default();
    for entry in gallery::gallery() {
        let field = entry.spec.build().unwrap();
        let found =
            find_cycles(&field, entry.y_range.0, entry.y_range.1, entry.seeds, &cfg).unwrap();
        let reports = criteria::run_all(&entry.spec, entry.region, 41, &scan).unwrap();
        for report in &reports {
            match report.conclusion {
                Conclusion::AtMostOneCycle => {
                    assert!(
                        found.cycles.len() <= 1,
                        "{}: {} concluded at most one cycle but {} were found",
                        entry.name,
                        report.criterion.name(),
                        found.cycles.len()
                    );
                }
                Conclusion::ExactlyOneCycle => {
                    assert_eq!(
                        found.cycles.len(),
                        1,
                        "{}: {} concluded exactly one cycle",
                        entry.name,
                        report.criterion.name()
                    );
                }
                Conclusion::ExactlyOneStableCycle => {
                    assert_eq!(found.cycles.len(), 1, "{}", entry.name);
                    assert_eq!(
                        found.cycles[0].stability,
                        Stability::Attracting,
                        "{}: {} promised a stable cycle",
                        entry.name,
                        report.criterion.name()
                    );
                }
                Conclusion::NotApplicable => {}
            }
        }
    }
}

#[test]
fn violation_witnesses_are_concrete() {
    let scan = ScanConfig::default();
    for entry in gallery::gallery() {
        let reports = criteria::run_all(&entry.spec, entry.region, 41, &scan).unwrap();
        for report in &reports {
            for hyp in &report.hypotheses {
                if let Status::Violated { witness } = &hyp.status {
                    assert!(
                        witness.x.is_finite() && witness.value.is_finite(),
                        "{}/{}: witness must be a concrete point, got {witness:?}",
                        entry.name,
                        report.criterion.name()
                    );
                    assert!(
                        !witness.detail.is_empty(),
                        "{}/{}: witness without explanation",
                        entry.name,
                        report.criterion.name()
                    );
                }
            }
            // a conclusion other than not-applicable requires every
            // hypothesis to be satisfied
            if report.conclusion != Conclusion::NotApplicable {
                assert!(
                    report.all_satisfied(),
                    "{}/{}: conclusion issued with unsatisfied hypotheses",
                    entry.name,
                    report.criterion.name()
                );
            }
        }
    }
}
