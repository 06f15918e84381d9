//! Batch driver for fermionic occupation-correlation studies: ground
//! states, the normalized correlator in three realizations, convex-cone
//! entanglement, parameter sweeps, spectrum-file quadrature, and the
//! verification batteries.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};

use entanglab::cli::{
    render_rows, run, write_atomic, FlavorChoice, OutputFormat, RunConfig,
};
use entanglab::cone::{decompose_unique, e1_closed_form, DecompositionStatus};
use entanglab::error::Error;
use entanglab::fock::FockBasis;
use entanglab::probes::{alpha_from_spectrum, cone_states, KernelParams, SpectrumTable};
use entanglab::solver::{ground_state, low_spectrum};
use entanglab::verify::{run_all, ToleranceSet};

#[derive(Parser)]
#[command(
    name = "entanglab",
    about = "Occupation-correlation laboratory for small fermion models",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the configured output path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the configured output format.
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Worker threads for sweep evaluation.
    #[arg(long)]
    threads: Option<usize>,
    /// Override a run tolerance, e.g. --tolerance mode_select=0.1.
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
}

fn parse_format(text: &str) -> Result<OutputFormat, String> {
    match text {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(format!("unknown format `{other}` (csv|json)")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Ground state and low spectrum of the configured model.
    Solve {
        #[command(flatten)]
        common: ConfigArgs,
        /// Number of eigenvalues to report.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Single-point correlator evaluation.
    Alpha {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Correlator plus the entropy-minimal decomposition report.
    Entangle {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Parameter sweep into a tabular file.
    Sweep {
        #[command(flatten)]
        common: ConfigArgs,
    },
    /// Frequency-kernel quadrature of a tabulated spectrum file.
    Kernel {
        /// Two-column spectrum file (omega, S), '#' comments.
        #[arg(long)]
        spectrum: PathBuf,
        #[arg(long)]
        gamma: f64,
        /// Integration window; defaults to 1/gamma.
        #[arg(long)]
        tau: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        mean0: f64,
        #[arg(long, default_value_t = 1.0)]
        mean1: f64,
        /// Relative quadrature tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Run the oracle batteries.
    Verify {
        /// Override a named tolerance, e.g. --tolerance pairing_alpha=1e-10.
        #[arg(long = "tolerance", value_name = "NAME=VALUE")]
        tolerances: Vec<String>,
        /// Worker threads.
        #[arg(long)]
        threads: Option<usize>,
    },
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn install_thread_pool(threads: Option<usize>) -> Result<(), ExitCode> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(fail(EXIT_CONFIG, "--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| fail(EXIT_CONFIG, format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn load_config(common: &ConfigArgs) -> Result<RunConfig, ExitCode> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| fail(EXIT_CONFIG, format!("{}: {e}", common.config.display())))?;
    let mut config = RunConfig::parse(&text).map_err(|e| fail(EXIT_CONFIG, e))?;
    if let Some(path) = &common.output {
        let format = common
            .format
            .or(config.output.as_ref().map(|o| o.format))
            .unwrap_or(OutputFormat::Csv);
        config.output = Some(entanglab::cli::OutputSpec {
            path: path.clone(),
            format,
        });
    } else if let (Some(format), Some(output)) = (common.format, config.output.as_mut()) {
        output.format = format;
    }
    for entry in &common.tolerances {
        let Some((name, value)) = entry.split_once('=') else {
            return Err(fail(
                EXIT_CONFIG,
                format!("expected NAME=VALUE, got `{entry}`"),
            ));
        };
        let value: f64 = value
            .parse()
            .map_err(|e| fail(EXIT_CONFIG, format!("tolerance `{name}`: {e}")))?;
        match name {
            "mode_select" => config.tolerances.mode_select = Some(value),
            other => {
                return Err(fail(
                    EXIT_CONFIG,
                    format!("unknown run tolerance `{other}`; known names: mode_select"),
                ))
            }
        }
    }
    Ok(config)
}

fn emit_rows(config: &RunConfig, rows: &[entanglab::cli::ResultRow]) -> Result<(), ExitCode> {
    match &config.output {
        Some(output) => {
            let text = render_rows(rows, output.format);
            write_atomic(&output.path, &text)
                .map_err(|e| fail(EXIT_CONFIG, format!("{}: {e}", output.path.display())))?;
            eprintln!("wrote {} rows to {}", rows.len(), output.path.display());
        }
        None => {
            print!("{}", render_rows(rows, OutputFormat::Csv));
        }
    }
    Ok(())
}

fn cmd_solve(common: ConfigArgs, k: usize) -> ExitCode {
    let config = match load_config(&common) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let model = match config.model.build() {
        Ok(m) => m,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let opts = config.solver.to_options();
    let basis = if model.operator.conserves_number() {
        let particles = config
            .solver
            .sector
            .unwrap_or(model.mode_basis.fermi_index() as u32);
        FockBasis::sector(model.mode_count(), particles)
    } else {
        FockBasis::full(model.mode_count())
    };
    let basis = match basis {
        Ok(b) => Arc::new(b),
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let k = k.clamp(1, basis.len());
    match low_spectrum(&model.operator, &basis, k, &opts) {
        Ok(spectrum) => {
            println!("model     {}", config.model.model_id());
            println!("dimension {}", basis.len());
            println!(
                "ground energy {}  degeneracy {}",
                spectrum.ground_energy(),
                spectrum.ground_degeneracy
            );
            for (i, e) in spectrum.eigenvalues.iter().enumerate() {
                println!("E[{i}] = {e}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(EXIT_NUMERICAL, e),
    }
}

fn cmd_rows(common: ConfigArgs, sweep_required: bool) -> ExitCode {
    let mut config = match load_config(&common) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if let Err(code) = install_thread_pool(common.threads) {
        return code;
    }
    if sweep_required && config.sweep.is_none() {
        return fail(EXIT_CONFIG, "sweep subcommand needs a [sweep] table");
    }
    if !sweep_required {
        config.sweep = None;
    }
    match run(&config) {
        Ok(outcome) => {
            if let Err(code) = emit_rows(&config, &outcome.rows) {
                return code;
            }
            if outcome.all_failed {
                eprintln!("all rows failed");
                ExitCode::from(EXIT_NUMERICAL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => fail(EXIT_CONFIG, e),
    }
}

fn cmd_entangle(common: ConfigArgs) -> ExitCode {
    let mut config = match load_config(&common) {
        Ok(c) => c,
        Err(code) => return code,
    };
    config.sweep = None;
    if config.flavor != FlavorChoice::Mode {
        return fail(
            EXIT_CONFIG,
            "entangle reports the conditioned-state decomposition, which is \
             defined for the mode flavor",
        );
    }
    let model = match config.model.build() {
        Ok(m) => m,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let opts = config.solver.to_options();
    // Conditioned states change the particle number, so work in the full
    // space regardless of number conservation.
    let basis = match FockBasis::full(model.mode_count()) {
        Ok(b) => Arc::new(b),
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let gs = match ground_state(&model.operator, &basis, &opts) {
        Ok(g) => g,
        Err(e) => return fail(EXIT_NUMERICAL, e),
    };
    let tol = config
        .tolerances
        .mode_select
        .unwrap_or_else(|| config.probes[0].width.min(config.probes[1].width));
    let (lambda_g, lambda0, lambda1) = match cone_states(
        &gs.vector,
        &model.mode_basis,
        &config.probes[0],
        &config.probes[1],
        tol,
    ) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_NUMERICAL, e),
    };
    let decomposition = match decompose_unique(&lambda_g, &lambda0, &lambda1) {
        Ok(d) => d,
        Err(e) => return fail(EXIT_NUMERICAL, e),
    };

    let report = serde_json::json!({
        "model_id": config.model.model_id(),
        "lambda_g_a1": lambda_g.value(1),
        "lambda_0_a1": lambda0.value(1),
        "lambda_1_a1": lambda1.value(1),
        "alpha": decomposition.alpha,
        "weights": decomposition.weights.map(|(w0, w1)| vec![w0, w1]),
        "entanglement": match decomposition.status {
            DecompositionStatus::Ok => e1_closed_form(decomposition.alpha).ok(),
            DecompositionStatus::NegativeAlpha => None,
        },
        "status": match decomposition.status {
            DecompositionStatus::Ok => "ok",
            DecompositionStatus::NegativeAlpha => "negative_alpha",
        },
    });
    let text = format!("{}\n", serde_json::to_string_pretty(&report).unwrap());
    if let Some(output) = &config.output {
        if let Err(e) = write_atomic(&output.path, &text) {
            return fail(EXIT_CONFIG, e);
        }
        eprintln!("wrote report to {}", output.path.display());
    } else {
        print!("{text}");
    }
    ExitCode::SUCCESS
}

fn cmd_kernel(
    spectrum: PathBuf,
    gamma: f64,
    tau: Option<f64>,
    means: (f64, f64),
    tolerance: f64,
) -> ExitCode {
    let text = match std::fs::read_to_string(&spectrum) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_CONFIG, format!("{}: {e}", spectrum.display())),
    };
    let table = match SpectrumTable::parse(&text) {
        Ok(t) => t,
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    let params = match KernelParams::new(gamma, tau.unwrap_or(1.0 / gamma)) {
        Ok(p) => p.with_tolerance(tolerance),
        Err(e) => return fail(EXIT_CONFIG, e),
    };
    match alpha_from_spectrum(&table, means, &params) {
        Ok(result) => {
            println!("alpha             {}", result.alpha);
            println!("error estimate    {:.3e}", result.error_estimate);
            println!("imaginary residue {:.3e}", result.imaginary_residue);
            println!("edge value        {}", result.edge_value);
            ExitCode::SUCCESS
        }
        Err(e @ Error::GridTooCoarse { .. }) => fail(EXIT_NUMERICAL, e),
        Err(e @ Error::ImaginaryResidue { .. }) => fail(EXIT_NUMERICAL, e),
        Err(e) => fail(EXIT_CONFIG, e),
    }
}

fn cmd_verify(overrides: Vec<String>, threads: Option<usize>) -> ExitCode {
    if let Err(code) = install_thread_pool(threads) {
        return code;
    }
    let mut tolerances = ToleranceSet::default();
    for entry in overrides {
        let Some((name, value)) = entry.split_once('=') else {
            return fail(EXIT_CONFIG, format!("expected NAME=VALUE, got `{entry}`"));
        };
        let value: f64 = match value.parse() {
            Ok(v) => v,
            Err(e) => return fail(EXIT_CONFIG, format!("tolerance `{name}`: {e}")),
        };
        if let Err(e) = tolerances.set(name, value) {
            return fail(EXIT_CONFIG, e);
        }
    }
    let results = run_all(&tolerances);
    let mut failed = 0;
    for result in &results {
        println!("{}", result.line());
        if !result.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("all {} batteries passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} batteries failed", results.len());
        ExitCode::from(EXIT_NUMERICAL)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { common, k } => cmd_solve(common, k),
        Command::Alpha { common } => cmd_rows(common, false),
        Command::Sweep { common } => cmd_rows(common, true),
        Command::Entangle { common } => cmd_entangle(common),
        Command::Kernel {
            spectrum,
            gamma,
            tau,
            mean0,
            mean1,
            tolerance,
        } => cmd_kernel(spectrum, gamma, tau, (mean0, mean1), tolerance),
        Command::Verify {
            tolerances,
            threads,
        } => cmd_verify(tolerances, threads),
    }
}
