//! `verify-suite`: every acceptance criterion with a one-line summary each.

use desitter::conformal::TorsionVariant;
use desitter::suite::{run_criterion, summary_line, SuiteConfig, SuiteReport, CRITERIA};
use rayon::prelude::*;

use crate::config::{Mutation, Options};
use crate::error::CliError;
use crate::report::{envelope, print_stdout, to_pretty, to_value, write_file, Outcome, Status};

pub fn run(opts: &Options) -> Result<Outcome, CliError> {
    let cfg = SuiteConfig {
        quick: opts.quick,
        seed: opts.seed.unwrap_or(0),
        variant: match opts.mutate.unwrap_or(Mutation::None) {
            Mutation::None => TorsionVariant::Standard,
            Mutation::NegateTorsion => TorsionVariant::Negated,
        },
    };
    let criteria: Vec<_> = CRITERIA
        .par_iter()
        .map(|(id, _)| run_criterion(*id, &cfg))
        .collect();
    for c in &criteria {
        print_stdout(&summary_line(c));
    }
    let pass = criteria.iter().all(|c| c.pass);
    let failed = criteria.iter().filter(|c| !c.pass).count();
    print_stdout(&format!(
        "{}: {} of {} criteria passed",
        if pass { "PASS" } else { "FAIL" },
        criteria.len() - failed,
        criteria.len()
    ));
    let status = if pass {
        Status::Ok
    } else {
        Status::VerificationFailed
    };
    if let Some(path) = &opts.out_json {
        let report = SuiteReport {
            config: cfg,
            criteria,
            pass,
        };
        write_file(
            path,
            &to_pretty(&envelope("verify-suite", status, opts, to_value(&report))),
        )?;
    }
    Ok(Outcome { status })
}
