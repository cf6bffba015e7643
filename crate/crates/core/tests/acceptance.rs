//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Criteria listed in `KNOWN_FAILURES` are evaluated at their stated
//! tolerance like the others; they are expected to fail, and the target
//! fails if one of them unexpectedly passes so the list stays honest.

use std::process::ExitCode;

use billiard_core::validation::{self, CriterionReport};

/// The ε-scaling ratio of the first-order discrepancy: the leading error of
/// first-order populations for `m' = ±1` targets is O(ε⁴), so the ratio for
/// a 5× larger ε is near 625, far outside 15..35.
const KNOWN_FAILURES: &[&str] = &["6b"];

fn main() -> ExitCode {
    let csv = std::path::PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("figure1.csv");
    let mut reports: Vec<CriterionReport> = Vec::new();
    let mut record = |r: CriterionReport| {
        println!("{r}");
        reports.push(r);
    };
    record(validation::bessel_kernel());
    record(validation::unitarity());
    record(validation::pantographic_propagation());
    record(validation::energy_rate_2d());
    record(validation::element_fidelity());
    for r in validation::perturbation_vs_propagation() {
        record(r);
    }
    record(validation::figure_one(Some(&csv)));
    record(validation::one_dimensional());
    record(validation::convergence_guards());
    println!("figure CSV written to {}", csv.display());

    let unexpected: Vec<&CriterionReport> =
        reports.iter().filter(|r| r.passed == KNOWN_FAILURES.contains(&r.id)).collect();
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed; expected failures: {}", reports.len(), KNOWN_FAILURES.join(", "));
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        for r in unexpected {
            println!("unexpected outcome for criterion {}", r.id);
        }
        ExitCode::FAILURE
    }
}
