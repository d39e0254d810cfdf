//! Running verification suites and rendering a report.
//!
//! ```text
//! cargo run --example verify_report
//! ```

use std::error::Error;

use qcurrent::report::{describe_ope, emit_report, exit_code, run_check, run_suite, Format, Status, Suite, SuiteConfig};

fn main() -> Result<(), Box<dyn Error>> {
    let cfg = SuiteConfig { suites: vec![Suite::DiscreteExact, Suite::ParamMaps], seed: 1, timing: false, ..SuiteConfig::default() };
    let results = run_suite(&cfg)?;
    println!("{}", emit_report(&results, &cfg, Format::Markdown));
    println!("exit code for this run: {}", exit_code(&results));

    let one = run_check("hopf.antipode+.c=1,1,1,1,1", &SuiteConfig { timing: false, ..SuiteConfig::default() })?;
    println!("{}: {}", one.id, one.status.name());
    if one.status == Status::Fail {
        println!("  {}", one.reason.as_deref().unwrap_or("no reason recorded"));
    }

    print!("{}", describe_ope("gamma_q_amended", "X+", "X-", 4)?);
    Ok(())
}
