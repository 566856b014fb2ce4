use std::time::Instant;

use bihv_core::catalog::{compare, Corpus, Mode};
use bihv_core::derivation::{pk_chain_bounded, DerivationError};
use bihv_core::odesim::CHAIN_TERM_LIMIT;
use clap::Args;
use serde_json::json;

use crate::output::{RunDir, RunReport};
use crate::{CliError, CliResult, Common};

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long)]
    n1: u32,
    #[arg(long, allow_negative_numbers = true)]
    kmax: i64,
    /// Stop once some P_k has more terms than this.
    #[arg(long, default_value_t = CHAIN_TERM_LIMIT)]
    max_terms: usize,
}

pub fn run(args: &ChainArgs, common: &Common) -> CliResult {
    if args.n1 == 0 {
        return Err(CliError::Usage("--n1 must be at least 1".into()));
    }
    let kmax = usize::try_from(args.kmax).map_err(|_| CliError::Usage("--kmax must be non-negative".into()))?;
    let dir = RunDir::create(common, "chain")?;
    let mut report = RunReport::new(
        "chain",
        json!({ "n1": args.n1, "kmax": kmax, "max_terms": args.max_terms }),
    );
    let start = Instant::now();
    let chain = match pk_chain_bounded(args.n1, kmax, args.max_terms) {
        Ok(c) => c,
        Err(e @ DerivationError::SizeGuard { .. }) => return Err(CliError::Aborted(e.to_string())),
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    report.timings.push(("chain".into(), start.elapsed()));

    println!("{:>3} {:>7} {:>10}", "k", "degree", "terms");
    for info in chain.info() {
        println!("{:>3} {:>7} {:>10}", info.k, info.total_degree, info.terms);
        let name = format!("P{}.poly", info.k);
        dir.write(&name, &format!("{}\n", chain.polys[info.k]))?;
        report.artifacts.push(name);
    }
    report.check("generated", true, format!("P_0..P_{kmax}"));

    let corpus = Corpus::from_env().map_err(|e| CliError::Usage(e.to_string()))?;
    if let Ok(expected) = corpus.expected_one("P0", &chain.ring) {
        let v = compare(&chain.polys[0], &expected, Mode::Proportional);
        println!("P0 against the corpus: {v}");
        report.check("P0 matches corpus", v.passed(), v.to_string());
    }
    let table = serde_json::to_string_pretty(&chain.info()).expect("serializable");
    dir.write("table.json", &(table + "\n"))?;
    report.artifacts.push("table.json".into());
    report.finish(&dir)
}
