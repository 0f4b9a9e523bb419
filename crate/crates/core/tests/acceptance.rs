//! The nine acceptance criteria at their stated tolerances, one line each.
//!
//! Kept as a single test so the runtime budgets are not skewed by other
//! tests sharing the machine.

use ghzw_roof::roof::RoofModel;
use ghzw_roof::verify::{run_criterion, VerifyOptions, CRITERIA};

#[test]
fn acceptance_criteria() {
    RoofModel::get().expect("model builds");
    let opts = VerifyOptions::default();
    let mut failed = vec![];
    for (id, _, _) in CRITERIA {
        let (report, gaps) = run_criterion(id, &opts);
        println!("{}", report.line());
        if let Some(g) = gaps {
            println!(
                "    oracle gaps over {} points: max {:.2e}, mean {:.2e}, p99 {:.2e}, min signed {:.2e}",
                g.points, g.max_abs_gap, g.mean_abs_gap, g.p99_abs_gap, g.min_signed_gap
            );
        }
        if !report.passed {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
