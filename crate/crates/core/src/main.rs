use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "confscat", version, about = "Poincare-metric expansions, GJMS operators, Q-curvature, renormalized volume and model scattering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the normal form order by order and export the jet.
    Fg {
        #[arg(long)]
        config: String,
    },
    /// Export GJMS operator actions over a Fourier-mode set.
    Gjms {
        #[arg(long)]
        config: String,
    },
    /// Compute the Q-curvature and compare with the explicit-formula oracle.
    Q {
        #[arg(long)]
        config: String,
    },
    /// Volume-expansion coefficients and the log coefficient L.
    Volume {
        #[arg(long)]
        config: String,
    },
    /// Scattering values, sweeps and residues of model problems.
    Scatter {
        #[arg(long)]
        config: Option<String>,
        #[arg(long)]
        model: Option<String>,
        #[arg(long)]
        residue_at: Option<f64>,
        #[arg(long)]
        output: Option<String>,
    },
    /// Run the verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        output: Option<String>,
    },
}

fn main() {
    confscat::init_workers();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(e: &confscat::Error) -> i32 {
    use confscat::Error::*;
    match e {
        Config(_) | Parse { .. } | InvalidParameter(_) => 2,
        _ => 3,
    }
}

fn run(cli: Cli) -> confscat::Result<i32> {
    match cli.command {
        Command::Verify { suite, output } => cmd::verify(&suite, output.as_deref()),
        Command::Scatter {
            config,
            model,
            residue_at,
            output,
        } => cmd::scatter(config.as_deref(), model.as_deref(), residue_at, output.as_deref()),
        Command::Fg { config } => cmd::fg(&config),
        Command::Gjms { config } => cmd::gjms(&config),
        Command::Q { config } => cmd::q(&config),
        Command::Volume { config } => cmd::volume(&config),
    }
}

mod cmd;
