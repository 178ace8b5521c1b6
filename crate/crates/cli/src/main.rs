use clap::{Parser, Subcommand};
use hypdef::{emit, exit_code, run_suite, ConfigError, Format, Overrides, SuiteConfig};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hypdef", version, about = "Numerical checks for the hyperbolic deformation calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite.
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// frame-tables, weitzenbock, real-weitzenbock, product-formula,
    /// horosphere, parallel, decay, cusp, cone or repvar
    suite: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance for every check of the suite.
    #[arg(long)]
    tol: Option<f64>,
    /// Cusp shape, e.g. `0.3+1.2i`.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    b2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    k1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k2: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    /// Field expression in z, conj(z) and t.
    #[arg(long)]
    field: Option<String>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// TOML file with `[suite.<name>]` tables; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

fn resolve(args: &VerifyArgs) -> Result<SuiteConfig, ConfigError> {
    let mut cfg = SuiteConfig::new(&args.suite)?;
    if let Some(path) = &args.config {
        if let Some(o) = hypdef::config::load_config(path)?.get(&args.suite) {
            cfg.apply(o)?;
        }
    }
    cfg.apply(&Overrides {
        seed: args.seed,
        samples: args.samples,
        tol: args.tol,
        tau: args.tau.clone(),
        b1: args.b1.clone(),
        b2: args.b2.clone(),
        k1: args.k1,
        k2: args.k2,
        alpha: args.alpha,
        eps: args.eps,
        field: args.field.clone(),
    })?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let Command::Verify(args) = Cli::parse().command;
    let reports = match resolve(&args).and_then(|cfg| run_suite(&cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(emit(&reports, args.format).as_bytes()).and_then(|_| out.flush()) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(exit_code(&reports) as u8)
}
