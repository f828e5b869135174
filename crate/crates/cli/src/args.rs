use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "betamix",
    version,
    about = "Log-concavity tools for Beta mixtures"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate f, f', f'', ln f and (ln f)'' on a grid.
    Eval(Flags),
    /// Write a log-concavity certificate.
    Certify(Flags),
    /// Run the discrete and continuous window-inequality sweeps.
    Lemmas(Flags),
    /// Geometric-weight sharpness (--M --r) or kernel failure witness (--M --s).
    Demo(Flags),
    /// Draw from the normalized mixture density.
    Sample(Flags),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Eval(_) => "eval",
            Command::Certify(_) => "certify",
            Command::Lemmas(_) => "lemmas",
            Command::Demo(_) => "demo",
            Command::Sample(_) => "sample",
        }
    }

    pub fn flags(&self) -> &Flags {
        match self {
            Command::Eval(f)
            | Command::Certify(f)
            | Command::Lemmas(f)
            | Command::Demo(f)
            | Command::Sample(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One flat flag namespace shared by every subcommand; each uses what it needs.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Flags {
    /// Mixture file (JSON).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Mixture order; the maximum order for `lemmas`.
    #[arg(long = "M")]
    #[serde(rename = "M")]
    pub m: Option<f64>,
    /// Geometric ratio for the sharpness demo.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Kernel index for the failure demo.
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub n: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    /// Grid size; defaults to 1024, or 4096 sampler cells for `sample`.
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long, default_value_t = 1e-6)]
    pub eps: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Quadrature panels per unit length.
    #[arg(long, default_value_t = 8)]
    pub quad_panels: u32,
    /// Quadrature nodes per panel.
    #[arg(long, default_value_t = 16)]
    pub quad_nodes: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output format; `certify` defaults to json, everything else to csv.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of draws for `sample`.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Random continuous cases for `lemmas`.
    #[arg(long, default_value_t = 50)]
    pub cases: usize,
    /// Flip every expected direction in `lemmas`; checks that failures are caught.
    #[arg(long, hide = true)]
    pub debug_negate: bool,
}
