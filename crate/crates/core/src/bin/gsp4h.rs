use std::io::Read;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gsp4h::cli::{
    batch, dispatch, parse_batch, random_sweep, render, worst_status, Command, Format, InputDocument, SocleInput, Status,
};

#[derive(Parser)]
#[command(name = "gsp4h", version, about = "Exact computations for generic crystalline GSp4 Hodge data")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json, global = true)]
    format: FormatArg,
    /// Work over Q(a,b) instead of Q.
    #[arg(long, global = true)]
    symbolic: bool,
    /// Seed for random sweeps.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Input document, or `-` for stdin.
    #[arg(long, global = true)]
    input: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Text,
    Dot,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Text => Format::Text,
            FormatArg::Dot => Format::Dot,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Check structural and genericity conditions, and weak admissibility.
    Validate,
    /// The Hodge flag in standard form.
    Flag,
    /// Kernel of the summed tangent map.
    Kernel,
    /// Hodge parameters from a kernel or round trip from (a, b).
    Recover,
    /// The gluing subspace and the L-invariant plane.
    Glue,
    /// The eight generator matrices.
    Matrices,
    /// Extension dimension ledger.
    Ledger,
    /// Socle diagram of `ps1`, `pi1` or `pimin`.
    Socle {
        kind: Option<String>,
        /// Weyl element for `ps1`.
        #[arg(long)]
        w: Option<String>,
    },
    /// Frobenius polynomial from Hecke eigenvalues, or back.
    Hecke,
    /// Classicality inequalities.
    Classify,
    /// Run a list of `{command, document}` items, or a random sweep with `--seed`.
    Batch {
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
}

fn read_input(path: &Option<String>) -> Result<String, String> {
    match path.as_deref() {
        None => Ok(String::new()),
        Some("-") => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| e.to_string())?;
            Ok(s)
        }
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{p}: {e}")),
    }
}

fn fail(msg: &str) -> ExitCode {
    eprintln!("gsp4h: {msg}");
    ExitCode::from(Status::Invalid.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format: Format = cli.common.format.into();
    let text = match read_input(&cli.common.input) {
        Ok(t) => t,
        Err(e) => return fail(&e),
    };

    if let Cmd::Batch { count } = cli.command {
        let items = if cli.common.input.is_none() {
            match cli.common.seed {
                Some(seed) => random_sweep(&mut ChaCha8Rng::seed_from_u64(seed), count),
                None => return fail("batch needs --input or --seed"),
            }
        } else {
            match parse_batch(&text) {
                Ok(items) => items,
                Err(e) => return fail(&e),
            }
        };
        let reports = batch(&items, cli.common.symbolic);
        let out = match format {
            Format::Json => serde_json::to_string_pretty(&reports).expect("serializable"),
            _ => {
                let mut parts = Vec::new();
                for r in &reports {
                    match render(r, format) {
                        Ok(s) => parts.push(s),
                        Err(e) => return fail(&e),
                    }
                }
                parts.join("\n")
            }
        };
        println!("{out}");
        return ExitCode::from(worst_status(&reports).exit_code() as u8);
    }

    let mut doc = match InputDocument::from_json(&text) {
        Ok(d) => d,
        Err(e) => return fail(&e),
    };
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Flag => Command::Flag,
        Cmd::Kernel => Command::Kernel,
        Cmd::Recover => Command::Recover,
        Cmd::Glue => Command::Glue,
        Cmd::Matrices => Command::Matrices,
        Cmd::Ledger => Command::Ledger,
        Cmd::Socle { kind, w } => {
            if let Some(kind) = kind {
                doc.socle = Some(SocleInput { kind, w });
            }
            Command::Socle
        }
        Cmd::Hecke => Command::Hecke,
        Cmd::Classify => Command::Classify,
        Cmd::Batch { .. } => unreachable!(),
    };
    let report = dispatch(command, &doc, cli.common.symbolic);
    match render(&report, format) {
        Ok(s) => print!("{}{}", s, if s.ends_with('\n') { "" } else { "\n" }),
        Err(e) => return fail(&e),
    }
    ExitCode::from(report.status.exit_code() as u8)
}
