use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gq_cli::config::parse_primes;
use gq_cli::{
    build_export, diamond_markdown, full_report, hodge_command, quotient_command, resolve_group,
    run, run_models, CertificationReport, CliError, ModelName, OutputFormat, RunConfig, Stage,
};

#[derive(Parser)]
#[command(
    name = "gq",
    version,
    about = "Certification runs for Z/7 quotients of Grassmannian sections"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export a model's coordinates and equations as JSON.
    Build {
        #[arg(long, value_enum)]
        model: ModelName,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Work over F_p instead of Q.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Invariance, smoothness, fixed loci and freeness of one model.
    Analyze(RunArgs),
    /// The whole pipeline of one model.
    Run(RunArgs),
    /// Hodge diamond of a linear section.
    Hodge {
        #[arg(long, default_value = "2,7", value_parser = parse_pair)]
        grassmannian: (usize, usize),
        #[arg(long, default_value_t = 8)]
        codim: usize,
        /// Use the zero locus of Q*(1) on Gr(2,6) instead.
        #[arg(long)]
        q1: bool,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Invariants of a free quotient.
    Quotient {
        #[arg(long, default_value = "2,7", value_parser = parse_pair)]
        grassmannian: (usize, usize),
        #[arg(long, default_value_t = 8)]
        codim: usize,
        #[arg(long, default_value_t = 7)]
        order: i64,
        /// h^{1,1} of a threefold quotient.
        #[arg(long)]
        h11: Option<i64>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// The Pfaffian dual and its Campedelli slice.
    Dual(RunArgs),
    /// Every model and the property suites.
    Report(RunArgs),
}

#[derive(Args, Clone)]
struct RunArgs {
    #[arg(long, value_enum)]
    model: Option<ModelName>,
    #[arg(long)]
    group: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Census primes.
    #[arg(long)]
    primes: Option<String>,
    /// Primes for the freeness certificates.
    #[arg(long)]
    free_primes: Option<String>,
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Include the upstream models.
    #[arg(long)]
    full: bool,
    /// Stages to leave out.
    #[arg(long, value_delimiter = ',')]
    skip: Vec<String>,
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let v: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    match v.as_slice() {
        [k, n] => Ok((*k, *n)),
        _ => Err(format!("expected k,n, got {s}")),
    }
}

impl RunArgs {
    fn config(&self, default_model: ModelName) -> Result<RunConfig, CliError> {
        let model = self.model.unwrap_or(default_model);
        let mut cfg = RunConfig::new(model);
        cfg.group = resolve_group(model, self.group.as_deref())?;
        cfg.seed = self.seed;
        if let Some(p) = &self.primes {
            cfg.census_primes = parse_primes(p).map_err(CliError::Config)?;
        }
        if let Some(p) = &self.free_primes {
            cfg.free_primes = parse_primes(p).map_err(CliError::Config)?;
        }
        cfg.extension_depth = self.depth;
        cfg.format = self.format;
        cfg.full = self.full;
        for s in &self.skip {
            let t = &mut cfg.toggles;
            match s.as_str() {
                "invariance" => t.invariance = false,
                "smoothness" => t.smoothness = false,
                "fixed_loci" => t.fixed_loci = false,
                "freeness" => t.freeness = false,
                "hodge" => t.hodge = false,
                "quotient" => t.quotient = false,
                "duality" => t.duality = false,
                other => return Err(CliError::Config(format!("unknown stage {other}"))),
            }
        }
        Ok(cfg)
    }
}

fn emit(report: &CertificationReport) -> ExitCode {
    match report.config.format {
        OutputFormat::Json => print!("{}", report.to_json()),
        OutputFormat::Markdown => print!("{}", report.to_markdown()),
    }
    ExitCode::from(report.exit_code() as u8)
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("output serializes")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<ExitCode, CliError> = (|| match cli.command {
        Command::Build { model, seed, prime } => {
            println!("{}", json(&build_export(model, seed, prime)?));
            Ok(ExitCode::SUCCESS)
        }
        Command::Analyze(args) => {
            let mut cfg = args.config(ModelName::SZ)?;
            cfg.toggles.hodge = false;
            cfg.toggles.quotient = false;
            debug_assert!(Stage::Invariance < Stage::Hodge);
            Ok(emit(&run(&cfg)?))
        }
        Command::Run(args) => Ok(emit(&run(&args.config(ModelName::SZ)?)?)),
        Command::Dual(args) => {
            let cfg = args.config(ModelName::Dual)?;
            Ok(emit(&run_models(&cfg, &[ModelName::Dual])?))
        }
        Command::Report(args) => Ok(emit(&full_report(&args.config(ModelName::SZ)?)?)),
        Command::Hodge {
            grassmannian: (k, n),
            codim,
            q1,
            format,
        } => {
            let out = hodge_command(k, n, codim, q1)?;
            match format {
                OutputFormat::Json => println!("{}", json(&out)),
                OutputFormat::Markdown => {
                    print!(
                        "{}",
                        diamond_markdown(&out.invariants.label, &out.diamond_rows)
                    );
                    println!(
                        "\ne = {}, chi(O) = {}",
                        out.invariants.e_top, out.invariants.chi_o
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Quotient {
            grassmannian: (k, n),
            codim,
            order,
            h11,
            format,
        } => {
            let out = quotient_command(k, n, codim, order, h11)?;
            match format {
                OutputFormat::Json => println!("{}", json(&out)),
                OutputFormat::Markdown => {
                    print!(
                        "{}",
                        diamond_markdown(&out.quotient.label, &out.diamond_rows)
                    );
                    println!(
                        "\ne = {}, chi(O) = {}, K^dim = {:?}",
                        out.quotient.e_top, out.quotient.chi_o, out.quotient.k_power
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    })();
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gq: {e}");
            // an impossible quotient is a failed expectation, everything else inconclusive
            ExitCode::from(
                if matches!(e, CliError::Compute(ref s) if s.contains("not divisible")) {
                    1
                } else {
                    2
                },
            )
        }
    }
}
