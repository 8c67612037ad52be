//! Acceptance suite: one PASS/FAIL line per criterion at full sample sizes.
//!
//! Runs without the libtest harness so the report reads top to bottom.
//! Set `QUTRIT_ACCEPTANCE_QUICK=1` for reduced sample sizes.

use std::process::ExitCode;

use qutrit_bloch::selftest::{run_all_iter, Config};

fn main() -> ExitCode {
    let quick = std::env::var_os("QUTRIT_ACCEPTANCE_QUICK").is_some_and(|v| v != "0");
    let cfg = if quick { Config::quick() } else { Config::full() };
    println!(
        "acceptance suite ({} sample sizes)",
        if quick { "quick" } else { "full" }
    );
    let mut failed = Vec::new();
    let mut total = 0;
    for r in run_all_iter(&cfg) {
        println!("{r}");
        total += 1;
        if !r.pass {
            failed.push(r.id);
        }
    }
    println!("{}/{total} criteria passed", total - failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        eprintln!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
