//! Command-line flags and the optional flat config file.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};

use crate::output::Format;
use crate::UsageError;

#[derive(Debug, Parser)]
#[command(
    name = "pwkrein",
    version,
    about = "Kernels, mu-functions and Painleve VI checks at arbitrary precision"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// Flat key-value TOML file whose keys mirror the long flag names;
    /// flags given on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate mu over an a-grid by several representations.
    Mu(MuArgs),
    /// Run a verification suite and emit one record per check.
    Verify(VerifyArgs),
    /// Tabulate q, its b-derivatives and the Painleve VI residual.
    Pvi(PviArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Explicit a values, comma separated.
    #[arg(long = "a", value_delimiter = ',', action = ArgAction::Set, num_args = 1, allow_hyphen_values = true)]
    pub a: Option<Vec<String>>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_stop: Option<String>,
    /// Number of evenly spaced points from --a-start to --a-stop (default 11).
    #[arg(long)]
    pub a_count: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Target decimal digits of the working precision.
    #[arg(long, default_value_t = 50)]
    pub digits: u32,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Significant digits of printed numbers (1 to 17).
    #[arg(long, default_value_t = 17, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub sig_digits: u8,
}

#[derive(Debug, Clone, Args)]
pub struct MuArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Representations, comma separated (default: every applicable one).
    #[arg(long, value_delimiter = ',', action = ArgAction::Set, num_args = 1)]
    pub rep: Option<Vec<String>>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PviArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub nu: String,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteName {
    All,
    Detid,
    Pwspace,
    Krein,
    Painleve,
}

impl SuiteName {
    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::All => "all",
            SuiteName::Detid => "detid",
            SuiteName::Pwspace => "pwspace",
            SuiteName::Krein => "krein",
            SuiteName::Painleve => "painleve",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteName::All)]
    pub suite: SuiteName,
    /// Restrict the envelope to one nu.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Restrict the envelope to one n.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Seed of the randomized instances.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn config_path(args: &[OsString]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn value_text(key: &str, v: &toml::Value) -> Result<String, UsageError> {
    Ok(match v {
        toml::Value::String(s) => s.clone(),
        toml::Value::Integer(i) => i.to_string(),
        toml::Value::Float(f) => f.to_string(),
        toml::Value::Array(items) => items
            .iter()
            .map(|i| value_text(key, i))
            .collect::<Result<Vec<_>, _>>()?
            .join(","),
        _ => {
            return Err(UsageError(format!(
                "config key '{key}': unsupported value type"
            )))
        }
    })
}

/// Flag tokens for every entry of a flat TOML document.
pub fn config_tokens(text: &str) -> Result<Vec<OsString>, UsageError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e| UsageError(format!("config file: {e}")))?;
    let mut out = Vec::new();
    for (key, v) in &table {
        if key == "config" {
            return Err(UsageError(
                "config files cannot include other config files".into(),
            ));
        }
        let flag = key.replace('_', "-");
        out.push(OsString::from(format!("--{flag}")));
        out.push(OsString::from(value_text(key, v)?));
    }
    Ok(out)
}

/// Inserts the config file's flags right after the subcommand so that
/// later command-line occurrences override them.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, UsageError> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| UsageError(format!("cannot read config file {}: {e}", path.display())))?;
    let tokens = config_tokens(&text)?;
    let pos = args
        .iter()
        .position(|a| matches!(a.to_str(), Some("mu" | "verify" | "pvi")))
        .ok_or_else(|| UsageError("missing subcommand".into()))?;
    let mut merged = args[..=pos].to_vec();
    merged.extend(tokens);
    merged.extend_from_slice(&args[pos + 1..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(v: &[&str]) -> Cli {
        Cli::try_parse_from(v.iter().map(OsString::from)).unwrap()
    }

    #[test]
    fn later_flags_override_earlier_ones() {
        let cli = parse(&[
            "pwkrein", "mu", "--nu", "0", "--n", "1", "--a", "0.2,0.3", "--rep", "gram", "--a",
            "0.5", "--n", "2",
        ]);
        let Command::Mu(m) = cli.command else {
            panic!()
        };
        assert_eq!(m.n, 2);
        assert_eq!(m.grid.a.unwrap(), ["0.5"]);
        assert_eq!(m.rep.unwrap(), ["gram"]);
    }

    #[test]
    fn config_tokens_are_flat() {
        let t = config_tokens(
            "nu = 0.5\nn = 2\na = [0.25, \"0.5\"]\nsig_digits = 9\nsuite = \"krein\"\n",
        )
        .unwrap();
        let t: Vec<String> = t.into_iter().map(|s| s.into_string().unwrap()).collect();
        assert_eq!(
            t,
            [
                "--a",
                "0.25,0.5",
                "--n",
                "2",
                "--nu",
                "0.5",
                "--sig-digits",
                "9",
                "--suite",
                "krein"
            ]
        );
        assert!(config_tokens("[section]\nx = 1\n").is_err());
        assert!(config_tokens("not toml =").is_err());
    }

    #[test]
    fn config_is_inserted_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "n = 1\ndigits = 30\n").unwrap();
        let args: Vec<OsString> = [
            "pwkrein",
            "--config",
            path.to_str().unwrap(),
            "pvi",
            "--nu",
            "0",
            "--n",
            "2",
            "--a",
            "0.5",
        ]
        .iter()
        .map(OsString::from)
        .collect();
        let cli = Cli::try_parse_from(merge_config(args).unwrap()).unwrap();
        let Command::Pvi(p) = cli.command else {
            panic!()
        };
        assert_eq!(p.n, 2);
        assert_eq!(p.common.digits, 30);
    }
}
