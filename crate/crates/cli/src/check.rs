use std::time::Instant;

use bihv_core::catalog::{check_identity_in, identity_names, CatalogError, Corpus};
use clap::Args;
use serde_json::json;

use crate::output::{RunDir, RunReport};
use crate::{CliError, CliResult, Common};

#[derive(Args, Debug)]
pub struct CheckArgs {
    /// Identity names; see `--list`.
    names: Vec<String>,
    /// Check every registered identity.
    #[arg(long, conflicts_with = "names")]
    all: bool,
    /// Print the registered names and exit.
    #[arg(long)]
    list: bool,
}

pub fn run(args: &CheckArgs, common: &Common) -> CliResult {
    let registered = identity_names();
    if args.list {
        for n in &registered {
            println!("{n}");
        }
        return Ok(());
    }
    let names: Vec<String> = if args.all {
        registered.iter().map(|s| s.to_string()).collect()
    } else if args.names.is_empty() {
        return Err(CliError::Usage("name at least one identity, or pass --all".into()));
    } else {
        args.names.clone()
    };
    if let Some(bad) = names.iter().find(|n| !registered.contains(&n.as_str())) {
        return Err(CliError::Usage(format!("unknown identity `{bad}` (see `bihv check --list`)")));
    }
    let corpus = Corpus::from_env().map_err(|e| CliError::Usage(e.to_string()))?;
    let exec = common.exec();
    let dir = RunDir::create(common, "check")?;
    let mut report = RunReport::new("check", json!({ "identities": names, "corpus": corpus.origin() }));

    let start = Instant::now();
    let results = exec.map(&names, |n| {
        let t = Instant::now();
        (check_identity_in(&corpus, n, exec), t.elapsed())
    });
    for (name, (res, elapsed)) in names.iter().zip(results) {
        report.timings.push((name.clone(), elapsed));
        match res {
            Ok(r) => {
                for line in r.lines() {
                    println!("{line}");
                }
                let detail = r.lines().join("\n");
                report.check(name.as_str(), r.passed(), detail);
            }
            Err(CatalogError::UnknownIdentity(n)) => {
                return Err(CliError::Usage(format!("identity `{n}` is not in corpus {}", corpus.origin())))
            }
            Err(e) => {
                println!("FAIL {name}: {e}");
                report.check(name.as_str(), false, e.to_string());
            }
        }
    }
    report.timings.push(("total".into(), start.elapsed()));
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    println!("{} identities, {} failed", report.checks.len(), failed);
    report.finish(&dir)
}
