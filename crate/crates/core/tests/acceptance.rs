//! Runs every acceptance criterion at full size and prints one line per
//! criterion, followed by its individual checks.

use std::process::ExitCode;

use desitter::suite::{run_criterion, summary_line, SuiteConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    println!("\nacceptance criteria");
    for (id, _) in CRITERIA {
        let r = run_criterion(id, &cfg);
        println!("{}", summary_line(&r));
        for c in &r.checks {
            println!(
                "        {:<60} value {:>12.4e}  tol {:>9.1e}  {}",
                c.name,
                c.value,
                c.tol,
                if c.pass { "ok" } else { "FAIL" }
            );
        }
        for n in &r.notes {
            println!("        note: {n}");
        }
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!(
            "acceptance: {} of {} criteria passed\n",
            CRITERIA.len(),
            CRITERIA.len()
        );
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}\n");
        ExitCode::FAILURE
    }
}
