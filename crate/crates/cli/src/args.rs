use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

#[derive(Parser, Debug)]
#[command(
    name = "bousq",
    version,
    about = "Traveling-wave verification and Boussinesq simulation"
)]
pub struct Cli {
    /// Flat JSON object whose keys mirror the flag names; flags win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample a named solution on an x-t grid as `x,t,u` CSV.
    Eval(EvalArgs),
    /// Run the claim registry and write the report.
    Verify(VerifyArgs),
    /// Integrate the assigned (or sign-flipped) equation pseudospectrally.
    Simulate(SimulateArgs),
    /// Tabulate sn, cn, dn as `z,m,sn,cn,dn` CSV.
    Elliptic(EllipticArgs),
    /// List named solutions and verification claims.
    Catalog(CatalogArgs),
}

/// Config-file values fill whatever the command line left unset.
pub trait Merge: Sized {
    fn merge(self, file: Self) -> Self;
}

macro_rules! merge_impl {
    ($ty:ty; opts: $($o:ident),* ; vecs: $($v:ident),* ; flags: $($b:ident),*) => {
        impl Merge for $ty {
            fn merge(self, file: Self) -> Self {
                Self {
                    $($o: self.$o.or(file.$o),)*
                    $($v: if self.$v.is_empty() { file.$v } else { self.$v },)*
                    $($b: self.$b || file.$b,)*
                }
            }
        }
    };
}

#[derive(Args, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EvalArgs {
    /// Catalog id, see `bousq catalog`.
    #[arg(long)]
    pub solution: Option<String>,
    /// `start:stop:step` or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// `start:stop:step` or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Parameter override `name=value`; repeatable.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    #[serde(default)]
    pub param: Vec<String>,
    /// Output CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
merge_impl!(EvalArgs; opts: solution, x, t, out; vecs: param; flags:);

#[derive(Args, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct VerifyArgs {
    /// `default` or `refined`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Report JSON; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Residual CSV; next to `--out` with a `.csv` extension by default.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Relative tolerance for derived-truth claims.
    #[arg(long)]
    pub derived_tol: Option<f64>,
    /// Relative tolerance for transcribed claims.
    #[arg(long)]
    pub transcribed_tol: Option<f64>,
}
merge_impl!(VerifyArgs; opts: grid, out, csv, derived_tol, transcribed_tol; vecs:; flags:);

#[derive(Args, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SimulateArgs {
    /// `soliton`, `gaussian`, `mode`, `noise` or `zero`.
    #[arg(long)]
    pub initial: Option<String>,
    /// Grid points, a power of two.
    #[arg(long)]
    pub n: Option<usize>,
    /// Domain length.
    #[arg(long = "length")]
    pub length: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Spectral cutoff, or `nyquist` for none.
    #[arg(long)]
    pub k_cut: Option<String>,
    /// `+1` for the assigned equation, `-1` for the well-posed variant.
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<f64>,
    /// Sup-norm limit; 1e3 times the initial sup-norm by default.
    #[arg(long)]
    pub blowup_threshold: Option<f64>,
    /// Steps between stored frames.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Soliton width or gaussian inverse width.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub amplitude: Option<f64>,
    /// Center of the initial profile.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<f64>,
    /// Mode index j for `mode` (k = 2πj/L).
    #[arg(long)]
    pub mode: Option<usize>,
    /// Amplitude of seeded white noise added to the initial field.
    #[arg(long)]
    pub noise: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Directory for frames.csv, diagnostics.csv, summary.json.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Disable the 2/3 rule.
    #[arg(long)]
    #[serde(default)]
    pub no_dealias: bool,
    /// Drop the nonlinear term.
    #[arg(long)]
    #[serde(default)]
    pub linear: bool,
    /// Exit with status 3 on blow-up.
    #[arg(long)]
    #[serde(default)]
    pub fail_on_blowup: bool,
}
merge_impl!(SimulateArgs;
    opts: initial, n, length, dt, t_end, k_cut, sign, blowup_threshold, stride, k, amplitude, x0,
        mode, noise, seed, out_dir;
    vecs:;
    flags: no_dealias, linear, fail_on_blowup);

#[derive(Args, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EllipticArgs {
    /// `start:stop:step` or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// `start:stop:step` or a single value in [0, 1].
    #[arg(long)]
    pub m: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
merge_impl!(EllipticArgs; opts: z, m, out; vecs:; flags:);

#[derive(Args, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CatalogArgs {
    /// Emit JSON instead of a table.
    #[arg(long)]
    #[serde(default)]
    pub json: bool,
}
merge_impl!(CatalogArgs; opts:; vecs:; flags: json);
