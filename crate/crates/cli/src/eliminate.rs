use std::path::Path;
use std::time::Instant;

use bihv_core::catalog::{parse_expr, Corpus};
use bihv_core::elimination::{eliminate, EliminationOptions, PrsMode};
use bihv_core::rings::Ring;
use bihv_core::Polynomial;
use clap::Args;
use serde_json::json;

use crate::output::{RunDir, RunReport};
use crate::{CliError, CliResult, Common};

/// Corpus entry whose files list the expected factors of the final remainder.
const FACTOR_ENTRY: &str = "f0-factors";

#[derive(Args, Debug)]
pub struct EliminateArgs {
    /// Higher-degree input, then lower-degree input: file paths, or corpus
    /// names with `--builtin`.
    #[arg(num_args = 2, required = true)]
    inputs: Vec<String>,
    #[arg(long)]
    builtin: bool,
    /// Variable to eliminate.
    #[arg(long, default_value = "tau")]
    var: String,
    /// Ring the inputs are read in.
    #[arg(long, default_value = "lambda")]
    ring: String,
    /// Divide each remainder by the previous pseudo-multiplier instead of
    /// stripping integer content.
    #[arg(long)]
    reduced: bool,
    /// Test the final remainder against the catalogued factors (implied by `--builtin`).
    #[arg(long)]
    check_factors: bool,
}

fn load(arg: &str, builtin: bool, corpus: &Corpus, ring: &Ring) -> Result<Polynomial, CliError> {
    if builtin {
        return corpus.expected_one(arg, ring).map_err(|e| CliError::Usage(format!("{arg}: {e}")));
    }
    let text = std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?;
    parse_expr(&text, ring).map_err(|e| CliError::Usage(format!("{arg}: {e}")))
}

pub fn run(args: &EliminateArgs, common: &Common) -> CliResult {
    let ring = Ring::parse(&args.ring).map_err(|e| CliError::Usage(e.to_string()))?;
    let corpus = Corpus::from_env().map_err(|e| CliError::Usage(e.to_string()))?;
    let hi = load(&args.inputs[0], args.builtin, &corpus, &ring)?;
    let lo = load(&args.inputs[1], args.builtin, &corpus, &ring)?;
    if ring.table().index_of(&args.var).is_err() {
        return Err(CliError::Usage(format!("`{}` is not a variable of ring {}", args.var, args.ring)));
    }
    let exec = common.exec();
    let opts = EliminationOptions {
        mode: if args.reduced { PrsMode::Reduced } else { PrsMode::Primitive },
        exec,
    };
    let dir = RunDir::create(common, "eliminate")?;
    let mut report = RunReport::new(
        "eliminate",
        json!({
            "inputs": args.inputs,
            "builtin": args.builtin,
            "var": args.var,
            "ring": args.ring,
            "mode": if args.reduced { "reduced" } else { "primitive" },
        }),
    );

    let start = Instant::now();
    let mut elim = eliminate(&hi, &lo, &args.var, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
    report.timings.push(("remainder sequence".into(), start.elapsed()));

    let v = ring.table().index_of(&args.var).expect("checked above");
    let lo_deg = lo.degree_in_index(v).unwrap_or(0) as i64;
    println!("{:<6} {:>10} {:>8}", "poly", "deg", "terms");
    for (i, step) in elim.steps.iter().enumerate() {
        let idx = lo_deg - 1 - i as i64;
        let name = if idx >= 0 { format!("f{idx}") } else { format!("r{}", i + 1) };
        let deg = step.remainder.degree_in_index(v).map_or("-".to_string(), |d| d.to_string());
        println!("{name:<6} {deg:>10} {:>8}", step.remainder.num_terms());
        dir.write(&format!("{name}.poly"), &format!("{}\n", step.remainder))?;
        report.artifacts.push(format!("{name}.poly"));
        if step.remainder.is_zero() {
            println!("{name} = 0: the sequence stops here");
            report.check("sequence", true, format!("{name} = 0, stopped after {} steps", i + 1));
        }
    }
    let t = Instant::now();
    let verified = elim.verify_steps();
    report.timings.push(("step verification".into(), t.elapsed()));
    report.check("step identities", verified, format!("{} steps re-expanded", elim.steps.len()));

    let factors: Vec<(String, Polynomial)> = match corpus.entry(FACTOR_ENTRY) {
        Ok(entry) if (args.builtin || args.check_factors) && elim.resultant_like().is_some() => {
            let polys = entry.expected(&ring).unwrap_or_default();
            entry.sources.iter().map(|s| s.file.clone()).zip(polys).collect()
        }
        _ => Vec::new(),
    };
    if !factors.is_empty() {
        let t = Instant::now();
        elim.check_factors(&factors, exec).map_err(|e| CliError::Aborted(e.to_string()))?;
        report.timings.push(("factor division".into(), t.elapsed()));
        for f in &elim.factors {
            let label = f.name.trim_start_matches("identities/").trim_end_matches(".poly");
            println!("{label:<20} {}", if f.divides { "divides" } else { "does not divide" });
            report.check(format!("factor {label}"), f.divides, String::new());
        }
        if let Some(acc) = &elim.cofactor {
            let detail = acc.cofactor.as_ref().map(|c| c.to_string()).unwrap_or_default();
            let terms = acc.cofactor.as_ref().map_or(0, |c| c.num_terms());
            println!(
                "cofactor ({terms} terms): {}",
                if acc.accounted { "accounted" } else { "NOT accounted" }
            );
            report.check("cofactor accounted", acc.accounted, detail);
        }
    }
    dir.write("summary.json", &(elim.to_json(verified) + "\n"))?;
    report.artifacts.push("summary.json".into());
    report.finish(&dir)
}
