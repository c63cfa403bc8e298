//! Command-line front end for the experiment harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgMatches, Command};

use lacunary::harness::experiments::columns;
use lacunary::harness::{run, Experiment, SweepConfig};

fn about(experiment: Experiment) -> &'static str {
    match experiment {
        Experiment::Count => "Lattice-point counts: enumeration, convolution, Jacobi r4 and the λ^{d/2-1} growth",
        Experiment::Kloosterman => "Kloosterman-type sums: brute-force oracle, Σ_q |K| decay and sup_l |K|",
        Experiment::RhoSum => "Weighted sums Σ_q q^β ρ(q,λ)^{1/2} against λ^{(β+1)/2}",
        Experiment::SurfaceDecay => "Decay of the continuous surface-measure transform",
        Experiment::ErrorDecay => "Sampled sup of the error multiplier along a lacunary sequence",
        Experiment::Split => "M1/M2 split of the linearized maximal function on random indicator sets",
        Experiment::WeakType => "Restricted weak-type ratios at the endpoint exponent",
        Experiment::Exponents => "Exponent algebra: critical p(d) and the interpolation root",
        Experiment::Fixtures => "Record or check frozen reference values",
    }
}

fn columns_help(experiment: Experiment) -> String {
    let mut cols: Vec<&str> = columns(experiment).to_vec();
    cols.extend(["seed", "config_hash"]);
    format!(
        "CSV columns ({}.csv):\n  {}\n\nFit summaries and checks are written to {}.json.",
        experiment.name(),
        cols.join(","),
        experiment.name()
    )
}

fn global_args() -> Vec<Arg> {
    vec![
        Arg::new("config")
            .long("config")
            .value_name("PATH")
            .env("LACUNARY_CONFIG")
            .value_parser(value_parser!(PathBuf))
            .global(true)
            .help("TOML configuration file; flags override its values"),
        Arg::new("seed")
            .long("seed")
            .value_name("N")
            .env("LACUNARY_SEED")
            .value_parser(value_parser!(u64))
            .global(true)
            .help("Master seed for sampled quantities"),
        Arg::new("jobs")
            .long("jobs")
            .value_name("N")
            .env("LACUNARY_JOBS")
            .value_parser(value_parser!(usize))
            .global(true)
            .help("Worker threads (default: available cores)"),
        Arg::new("out")
            .long("out")
            .value_name("DIR")
            .env("LACUNARY_OUT")
            .value_parser(value_parser!(PathBuf))
            .global(true)
            .help("Output directory (default: results)"),
        Arg::new("budget")
            .long("budget")
            .value_name("N")
            .env("LACUNARY_BUDGET")
            .value_parser(value_parser!(u64))
            .global(true)
            .help("Work budget: lattice enumeration cap and FFT cell cap"),
        Arg::new("tol")
            .long("tol")
            .value_name("X")
            .env("LACUNARY_TOL")
            .value_parser(value_parser!(f64))
            .global(true)
            .help("Slope slack overriding the per-experiment default"),
    ]
}

fn command() -> Command {
    let mut cmd = Command::new("lacunary-cli")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Numerical experiments for discrete lacunary spherical maximal functions")
        .subcommand_required(true)
        .args(global_args());
    for experiment in Experiment::ALL {
        cmd = cmd.subcommand(
            Command::new(experiment.name())
                .about(about(experiment))
                .after_help(columns_help(experiment)),
        );
    }
    cmd
}

fn load_config(matches: &ArgMatches) -> lacunary::Result<SweepConfig> {
    let mut config = match matches.get_one::<PathBuf>("config") {
        Some(path) => SweepConfig::from_file(path)?,
        None => SweepConfig::default(),
    };
    if let Some(&seed) = matches.get_one::<u64>("seed") {
        config.seed = seed;
    }
    if let Some(&jobs) = matches.get_one::<usize>("jobs") {
        config.jobs = Some(jobs);
    }
    if let Some(out) = matches.get_one::<PathBuf>("out") {
        config.out = Some(out.clone());
    }
    if let Some(&budget) = matches.get_one::<u64>("budget") {
        config.budget = Some(budget);
    }
    if let Some(&tol) = matches.get_one::<f64>("tol") {
        config.tol = Some(tol);
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let matches = command().get_matches();
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let experiment: Experiment = name.parse().expect("subcommands mirror Experiment::ALL");
    let result = load_config(sub).and_then(|config| {
        let report = run(experiment, &config)?;
        let (csv, json) = report.write(&config.out_dir())?;
        Ok((report, csv, json))
    });
    match result {
        Ok((report, csv, json)) => {
            for line in report.summary_lines() {
                println!("{line}");
            }
            println!("wrote {} and {}", csv.display(), json.display());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
