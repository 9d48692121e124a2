use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "hhcert",
    version,
    about = "Certify or refute harmonic convexity and Hermite-Hadamard type inequalities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a convexity predicate on a lattice of the rectangle.
    Check(CheckArgs),
    /// Evaluate a Hermite-Hadamard chain and its ordering margins.
    Chain(ChainArgs),
    /// Evaluate both sides of the integration-by-parts identity.
    Identity(IdentityArgs),
    /// Compare the identity's left side with the Hölder bound.
    Bound(BoundArgs),
    /// Gauss hypergeometric 2F1(a, b; c; z) by series and Euler integral.
    Hyp2f1(Hyp2f1Args),
    /// Euler Beta function.
    Beta(BetaArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    HarmonicJoint,
    HarmonicCoordinate,
    ClassicalJoint,
    ClassicalCoordinate,
    #[value(name = "harmonic-1d")]
    Harmonic1d,
}

#[derive(Args, Debug)]
pub struct Target {
    /// Function of x and y, e.g. "x*y" or "exp(x+y)".
    #[arg(long = "expr", allow_hyphen_values = true)]
    pub expr: String,

    /// Rectangle as a,b,c,d for [a, b] x [c, d].
    #[arg(long, value_parser = parse_list::<4>)]
    pub rect: Option<[f64; 4]>,
}

#[derive(Args, Debug)]
pub struct Accuracy {
    /// Absolute and relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,

    /// Use finite differences for the mixed partial.
    #[arg(long)]
    pub fd: bool,

    /// Reserved; every computation is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct CheckArgs {
    #[command(flatten)]
    pub target: Target,

    #[arg(long, value_enum, default_value_t = Mode::HarmonicJoint)]
    pub mode: Mode,

    /// Lattice points per axis.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,

    /// Violations up to this size are ignored.
    #[arg(long, default_value_t = 1e-9)]
    pub violation_tol: f64,

    /// Refine a found violation for this many halving rounds.
    #[arg(long)]
    pub refine: Option<usize>,

    /// Reserved; every computation is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[command(flatten)]
    pub target: Target,

    /// Arithmetic means instead of harmonic ones.
    #[arg(long, conflicts_with = "one_d")]
    pub classical: bool,

    /// Three-member chain of a one-variable function.
    #[arg(long)]
    pub one_d: bool,

    /// Interval a,b for --one-d; defaults to the x-side of --rect.
    #[arg(long, value_parser = parse_list::<2>, requires = "one_d")]
    pub interval: Option<[f64; 2]>,

    #[command(flatten)]
    pub accuracy: Accuracy,
}

#[derive(Args, Debug)]
pub struct IdentityArgs {
    #[command(flatten)]
    pub target: Target,

    #[command(flatten)]
    pub accuracy: Accuracy,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[command(flatten)]
    pub target: Target,

    /// Hölder exponent, q > 1.
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,

    /// Also check that |f_xy|^q is harmonically convex on the coordinates.
    #[arg(long)]
    pub preflight: bool,

    /// Lattice size for --preflight.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,

    #[command(flatten)]
    pub accuracy: Accuracy,
}

#[derive(Args, Debug)]
pub struct Hyp2f1Args {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long)]
    pub c: f64,
    #[arg(long)]
    pub z: f64,
}

#[derive(Args, Debug)]
pub struct BetaArgs {
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: f64,
}

fn parse_list<const N: usize>(text: &str) -> Result<[f64; N], String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {}", parts.len()));
    }
    let mut out = [0.0; N];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| format!("`{part}` is not a number"))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<2>("1, 2.5").unwrap(), [1.0, 2.5]);
        assert!(parse_list::<4>("1,2,3").is_err());
        assert!(parse_list::<2>("1,x").is_err());
    }
}
