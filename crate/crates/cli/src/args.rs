use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fbas-reward",
    version,
    about = "FBAS quorum analysis and reward distribution"
)]
pub struct Cli {
    /// Only log warnings and errors.
    #[arg(short, long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal quorums, top tier and quorum intersection of an FBAS.
    Analyze(AnalyzeArgs),
    /// Reward share of every node.
    Rank(RankArgs),
    /// Write a synthetic FBAS document.
    Gen(GenArgs),
    /// Median runtime of exact and sampled index computation.
    Bench(BenchArgs),
    /// Error of sampled indices against exact ones.
    Accuracy(AccuracyArgs),
}

#[derive(Debug, Args)]
pub struct InputOutput {
    /// FBAS document, or "-" for standard input.
    #[arg(short, long, default_value = "-")]
    pub input: String,

    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub io: InputOutput,

    #[arg(long, value_enum, default_value_t = AnalyzeFormat::Text)]
    pub format: AnalyzeFormat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AnalyzeFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl From<ReportFormat> for fbas_reward::io::Format {
    fn from(f: ReportFormat) -> Self {
        match f {
            ReportFormat::Json => Self::Json,
            ReportFormat::Csv => Self::Csv,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RankMethod {
    /// Exact for top tiers of at most 15 nodes, sampled otherwise.
    Auto,
    Exact,
    Approx,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub io: InputOutput,

    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    pub format: ReportFormat,

    #[arg(long, value_enum, default_value_t = RankMethod::Auto)]
    pub method: RankMethod,

    /// Number of sampled permutations.
    #[arg(short = 'm', long, value_parser = parse_count)]
    pub samples: Option<u64>,

    /// Seed for sampling; required whenever sampling is used.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Largest top tier enumerated exactly.
    #[arg(long, default_value_t = fbas_reward::DEFAULT_ENUMERATION_CAP)]
    pub cap: usize,

    /// Compute shares even if two quorums may be disjoint.
    #[arg(long)]
    pub ignore_quorum_intersection: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Symmetric,
    #[value(alias = "org")]
    Organizational,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,

    /// Node count of a symmetric system.
    #[arg(short, long)]
    pub nodes: Option<usize>,

    /// Organization count of an organizational system.
    #[arg(long)]
    pub orgs: Option<usize>,

    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Topology sizes shared by the experiment commands. Lists are
/// comma-separated values or inclusive ranges such as `3-14`.
#[derive(Debug, Args)]
pub struct TopologyArgs {
    #[arg(long, value_enum, default_value_t = Kind::Symmetric)]
    pub kind: Kind,

    /// Node counts of symmetric systems.
    #[arg(short, long, value_parser = parse_size_list)]
    pub nodes: Option<SizeList>,

    /// Organization counts of organizational systems.
    #[arg(long, value_parser = parse_size_list)]
    pub orgs: Option<SizeList>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BenchMethodArg {
    Exact,
    Approx,
    Both,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,

    #[arg(long, value_enum, default_value_t = BenchMethodArg::Both)]
    pub method: BenchMethodArg,

    /// Sample counts for the sampled method.
    #[arg(short = 'm', long, value_parser = parse_count_list)]
    pub samples: Option<CountList>,

    #[arg(long)]
    pub reps: Option<usize>,

    /// Largest system timed with exact enumeration; larger ones are skipped.
    #[arg(long)]
    pub cap: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// 50 repetitions and sample counts from 10^2 to 10^6.
    #[arg(long)]
    pub full_scale: bool,

    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub format: ReportFormat,

    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AccuracyArgs {
    #[command(flatten)]
    pub topology: TopologyArgs,

    #[arg(short = 'm', long, value_parser = parse_count_list)]
    pub samples: Option<CountList>,

    #[arg(long)]
    pub reps: Option<usize>,

    #[arg(long)]
    pub cap: Option<usize>,

    /// Run `j` uses seed `seed + j`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Keep every per-run error in JSON output.
    #[arg(long)]
    pub keep_runs: bool,

    /// 50 repetitions and sample counts from 10^2 to 10^6.
    #[arg(long)]
    pub full_scale: bool,

    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    pub format: ReportFormat,

    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SizeList(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountList(pub Vec<u64>);

/// Parses `3,5,7`, `3-14` or a mix such as `3-5,9`.
pub fn parse_size_list(s: &str) -> Result<SizeList, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once('-') {
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad range {part:?}"))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad range {part:?}"))?;
            if lo > hi {
                return Err(format!("empty range {part:?}"));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| format!("bad size {part:?}"))?);
        }
    }
    Ok(SizeList(out))
}

/// Parses comma-separated counts; each may be written as `1e5`.
pub fn parse_count_list(s: &str) -> Result<CountList, String> {
    s.split(',')
        .map(|p| parse_count(p.trim()))
        .collect::<Result<_, _>>()
        .map(CountList)
}

/// Parses a count such as `100000` or `1e5`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Some((mantissa, exp)) = s.split_once(['e', 'E']) {
        let mantissa: u64 = mantissa.parse().map_err(|_| format!("bad count {s:?}"))?;
        let exp: u32 = exp.parse().map_err(|_| format!("bad count {s:?}"))?;
        10u64
            .checked_pow(exp)
            .and_then(|p| p.checked_mul(mantissa))
            .ok_or_else(|| format!("count {s:?} overflows"))
    } else {
        s.parse().map_err(|_| format!("bad count {s:?}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_lists() {
        assert_eq!(parse_size_list("3-6").unwrap().0, vec![3, 4, 5, 6]);
        assert_eq!(parse_size_list("3,5, 7").unwrap().0, vec![3, 5, 7]);
        assert_eq!(parse_size_list("1-2,9").unwrap().0, vec![1, 2, 9]);
        assert!(parse_size_list("5-3").is_err());
        assert!(parse_size_list("x").is_err());
    }

    #[test]
    fn count_lists() {
        assert_eq!(parse_count_list("1e3,20000").unwrap().0, vec![1000, 20000]);
        assert_eq!(parse_count_list("5e2").unwrap().0, vec![500]);
        assert!(parse_count_list("1e30").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
