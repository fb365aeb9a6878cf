//! Acceptance run over the desk-scale universes: pair suites on all types
//! of size at most 3 over `U`, `c0`, `c1`, triple suites on size at most 2.
//! Prints one `criterion N: PASS|FAIL` line per criterion and exits
//! non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Duration;

use itsub::harness::{run_suite, SuiteParams, SuiteReport};

#[derive(Default)]
struct Runner {
    reports: BTreeMap<&'static str, SuiteReport>,
    failed: Vec<u32>,
}

impl Runner {
    fn run(&mut self, name: &'static str) -> SuiteReport {
        self.reports
            .entry(name)
            .or_insert_with(|| {
                let report = run_suite(name, &SuiteParams::default()).expect("known suite");
                eprint!("{}", report.to_text());
                eprintln!("  wall time: {:.2?}", report.wall_time);
                report
            })
            .clone()
    }

    fn verdict(&mut self, n: u32, ok: bool, detail: String) {
        println!("criterion {n}: {} ({detail})", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failed.push(n);
        }
    }
}

fn summary(r: &SuiteReport) -> String {
    format!(
        "{} {}: {} cases, {} failures, {:.1?}",
        r.name, r.parameters, r.cases, r.failure_count, r.wall_time
    )
}

fn within(r: &SuiteReport, secs: u64) -> bool {
    r.wall_time < Duration::from_secs(secs)
}

fn main() -> ExitCode {
    let mut runner = Runner::default();

    let r = runner.run("soundness");
    runner.verdict(1, r.passed() && within(&r, 60), format!("{}; limit 60s", summary(&r)));

    let r = runner.run("equivalence");
    runner.verdict(2, r.passed(), summary(&r));

    let r = runner.run("transitivity");
    runner.verdict(3, r.passed() && within(&r, 60), format!("{}; limit 60s", summary(&r)));

    let props: Vec<SuiteReport> = ["prop1", "prop2", "prop3", "prop4"]
        .into_iter()
        .map(|s| runner.run(s))
        .collect();
    let total: Duration = props.iter().map(|r| r.wall_time).sum();
    let ok = props.iter().all(SuiteReport::passed) && total < Duration::from_secs(120);
    let detail: Vec<String> = props.iter().map(summary).collect();
    runner.verdict(4, ok, format!("{}; total {total:.1?}, limit 120s", detail.join("; ")));

    let r = runner.run("witness-completeness");
    runner.verdict(5, r.passed(), summary(&r));

    // certificates of criteria 1 to 3: deciding procedure, translated BCD
    // searches and composed derivations
    let violations: u64 = ["soundness", "equivalence", "transitivity"]
        .into_iter()
        .map(|s| runner.run(s).failures_of("subformula"))
        .sum();
    runner.verdict(6, violations == 0, format!("{violations} violations"));

    let r = runner.run("consistency-upward");
    runner.verdict(7, r.passed(), summary(&r));

    let r = runner.run("roundtrip");
    runner.verdict(8, r.passed(), summary(&r));

    let r = runner.run("lemmas");
    runner.verdict(9, r.passed(), summary(&r));

    if runner.failed.is_empty() {
        println!("all 9 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("failing criteria: {:?}", runner.failed);
        ExitCode::FAILURE
    }
}
