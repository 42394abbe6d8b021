use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Simulate beam-splitter entanglement concentration on two-qubit
/// polarization states.
///
/// Transmission coefficients are amplitudes: a beam splitter with `eta = 0.5`
/// passes a quarter of the light intensity.
#[derive(Debug, Parser)]
#[command(name = "bsconc", version, about, long_about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print concurrence, EOF, entropy, purity and validation diagnostics.
    Analyze {
        #[command(flatten)]
        state: StateSource,
        #[command(flatten)]
        output: Output,
    },
    /// Apply beam-splitter settings and post-select on coincidences.
    Transform {
        #[command(flatten)]
        state: StateSource,
        /// Transmission amplitudes `va,ha,vb,hb`, each in [0, 1].
        #[arg(long, value_parser = parse_eta, allow_hyphen_values = true)]
        eta: [f64; 4],
        #[command(flatten)]
        output: Output,
    },
    /// Sweep eta_va = eta_vb = eta_v over (0, 1] with both H beam splitters open.
    Sweep {
        #[command(flatten)]
        state: StateSource,
        /// Number of grid points.
        #[arg(short = 'n', long = "points", default_value_t = 512)]
        n_points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Search for settings that concentrate (raise EOF and lower entropy).
    Optimize {
        #[command(flatten)]
        state: StateSource,
        #[arg(long, value_enum, default_value_t = Mode::OneKnob)]
        mode: Mode,
        #[command(flatten)]
        output: Output,
    },
    /// Rebuild the worked example and check it against the reference values.
    Reproduce {
        #[command(flatten)]
        output: Output,
    },
    /// Sweep Werner states over mixing fraction and eta_v.
    WernerDemo {
        /// Pure component `eps1,eps2,phi` (VV/HH form).
        #[arg(long, value_parser = parse_triple, default_value = "1,0.5,0", allow_hyphen_values = true)]
        pure: [f64; 3],
        /// Number of Werner fractions, spaced evenly in (0, 1].
        #[arg(long, default_value_t = 10)]
        fractions: usize,
        /// Grid points per eta_v sweep.
        #[arg(short = 'n', long = "points", default_value_t = 512)]
        n_points: usize,
        #[command(flatten)]
        output: Output,
    },
}

/// Exactly one way of specifying the input state.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Mixed family `eps1,eps2,phi,gamma`: gamma·pure(VV/HH) + (1-gamma)·Psi+.
    #[arg(long, value_parser = parse_quad, allow_hyphen_values = true)]
    pub family: Option<[f64; 4]>,
    /// Pure state `eps1,eps2,phi`: eps1|VV> + eps2·e^{i phi}|HH>, normalised.
    #[arg(long, value_parser = parse_triple, allow_hyphen_values = true)]
    pub pure: Option<[f64; 3]>,
    /// A Bell state.
    #[arg(long, value_enum)]
    pub bell: Option<BellArg>,
    /// JSON state file with fields `basis`, `re`, `im`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    OneKnob,
    AllFour,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BellArg {
    #[value(name = "phi+")]
    PhiPlus,
    #[value(name = "phi-")]
    PhiMinus,
    #[value(name = "psi+")]
    PsiPlus,
    #[value(name = "psi-")]
    PsiMinus,
}

fn parse_list<const N: usize>(s: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!(
            "expected {N} comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        let v: f64 = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
        if !v.is_finite() {
            return Err(format!("`{p}` is not finite"));
        }
        *slot = v;
    }
    Ok(out)
}

fn parse_quad(s: &str) -> Result<[f64; 4], String> {
    parse_list::<4>(s)
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    parse_list::<3>(s)
}

fn parse_eta(s: &str) -> Result<[f64; 4], String> {
    let v = parse_list::<4>(s)?;
    if let Some(x) = v.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(format!("transmission {x} outside [0, 1]"));
    }
    Ok(v)
}
