use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use anyhow::Context;
use fbas_reward::experiments::{
    run_accuracy_study, run_runtime_bench, AccuracyConfig, BenchConfig, ExperimentError,
};
use fbas_reward::generators::TopologySpec;
use fbas_reward::io::{parse_fbas, serialize_fbas, write_report, Report};
use fbas_reward::{
    reward_distribution_with, Fbas, Method, NodeSet, PowerError, QuorumAnalysis, RewardOptions,
};
use serde_json::json;

use crate::args::{
    AccuracyArgs, AnalyzeArgs, AnalyzeFormat, BenchArgs, BenchMethodArg, Command, GenArgs, Kind,
    RankArgs, RankMethod, TopologyArgs,
};
use crate::CliError;

/// Largest top tier the automatic method still enumerates exactly.
const AUTO_EXACT_LIMIT: usize = 15;
/// Sample count used when sampling is chosen without `--samples`.
const DEFAULT_SAMPLES: u64 = 100_000;

const FULL_SCALE_REPS: usize = 50;
const FULL_SCALE_SAMPLES: [u64; 5] = [100, 1_000, 10_000, 100_000, 1_000_000];

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Analyze(args) => analyze(args),
        Command::Rank(args) => rank(args),
        Command::Gen(args) => gen(args),
        Command::Bench(args) => bench(args),
        Command::Accuracy(args) => accuracy(args),
    }
}

fn read_input(input: &str) -> Result<Vec<u8>, CliError> {
    let mut bytes = Vec::new();
    if input == "-" {
        std::io::stdin()
            .read_to_end(&mut bytes)
            .map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
    } else {
        bytes =
            fs::read(input).map_err(|e| CliError::Usage(format!("cannot read {input}: {e}")))?;
    }
    Ok(bytes)
}

fn load_fbas(input: &str) -> Result<Fbas, CliError> {
    let bytes = read_input(input)?;
    let parsed = parse_fbas(&bytes).map_err(|e| CliError::Parse(e.to_string()))?;
    log::info!("loaded {} nodes", parsed.fbas.len());
    Ok(parsed.fbas)
}

fn write_output(output: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        Some(path) => {
            fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))?
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .context("cannot write standard output")?;
            stdout.flush().context("cannot write standard output")?;
        }
    }
    Ok(())
}

fn render<R: Report>(report: &R, format: crate::args::ReportFormat) -> Result<Vec<u8>, CliError> {
    write_report(report, format.into())
        .context("cannot render report")
        .map_err(CliError::from)
}

fn set_list(sets: &[NodeSet]) -> String {
    let inner: Vec<String> = sets.iter().map(NodeSet::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    let fbas = load_fbas(&args.io.input)?;
    let analysis = QuorumAnalysis::of(&fbas);
    log::info!(
        "{} minimal quorums, top tier of {}",
        analysis.minimal_quorums.len(),
        analysis.top_tier.len()
    );
    let bytes = match args.format {
        AnalyzeFormat::Text => format!(
            "nodes: {}\nminimal_quorums: {}\ntop_tier: {}\nquorum_intersection: {}\n",
            analysis.node_count,
            set_list(&analysis.minimal_quorums),
            analysis.top_tier,
            analysis.quorum_intersection
        )
        .into_bytes(),
        AnalyzeFormat::Json => {
            let value = json!({
                "nodes": analysis.node_count,
                "minimal_quorums": analysis.minimal_quorums.iter().map(NodeSet::to_vec).collect::<Vec<_>>(),
                "top_tier": analysis.top_tier.to_vec(),
                "quorum_intersection": analysis.quorum_intersection,
            });
            let mut out = serde_json::to_vec_pretty(&value).context("cannot render analysis")?;
            out.push(b'\n');
            out
        }
    };
    write_output(args.io.output.as_deref(), &bytes)
}

fn choose_method(args: &RankArgs, tier_size: usize) -> Result<Method, CliError> {
    let exact = match args.method {
        RankMethod::Exact => {
            if args.samples.is_some() || args.seed.is_some() {
                return Err(CliError::Usage(
                    "--samples and --seed only apply to --method approx".into(),
                ));
            }
            true
        }
        RankMethod::Approx => false,
        RankMethod::Auto => {
            let exact = tier_size <= AUTO_EXACT_LIMIT.min(args.cap);
            log::info!(
                "top tier of {tier_size} nodes: using {} method",
                if exact { "exact" } else { "approx" }
            );
            exact
        }
    };
    if exact {
        return Ok(Method::Exact);
    }
    let seed = args.seed.ok_or_else(|| {
        CliError::Usage("sampling needs --seed so the result can be reproduced".into())
    })?;
    let samples = args.samples.unwrap_or(DEFAULT_SAMPLES);
    if samples == 0 {
        return Err(CliError::Usage("--samples must be at least 1".into()));
    }
    Ok(Method::Approximate { samples, seed })
}

fn rank(args: RankArgs) -> Result<(), CliError> {
    let fbas = load_fbas(&args.io.input)?;
    let analysis = QuorumAnalysis::of(&fbas);
    let method = choose_method(&args, analysis.top_tier.len())?;
    let options = RewardOptions {
        ignore_quorum_intersection: args.ignore_quorum_intersection,
        enumeration_cap: args.cap,
    };
    if args.ignore_quorum_intersection && !analysis.quorum_intersection {
        log::warn!("FBAS lacks quorum intersection; computing shares anyway");
    }
    let report =
        reward_distribution_with(&fbas, &analysis, method, options).map_err(|e| {
            match e {
        PowerError::NoQuorumIntersection => CliError::Refused(
            "the FBAS lacks quorum intersection; pass --ignore-quorum-intersection to rank anyway"
                .into(),
        ),
        PowerError::NoQuorums => CliError::Refused("the FBAS has no quorums".into()),
        PowerError::PlayerSetTooLarge { players, cap } => CliError::Cap(format!(
            "top tier of {players} nodes exceeds the exact enumeration cap of {cap}; \
             use --method approx"
        )),
        other => CliError::Other(other.into()),
    }
        })?;
    write_output(args.io.output.as_deref(), &render(&report, args.format)?)
}

fn gen(args: GenArgs) -> Result<(), CliError> {
    let spec = match args.kind {
        Kind::Symmetric => {
            if args.orgs.is_some() {
                return Err(CliError::Usage(
                    "--orgs applies to organizational systems".into(),
                ));
            }
            let n = args
                .nodes
                .ok_or_else(|| CliError::Usage("symmetric systems need --nodes".into()))?;
            TopologySpec::symmetric(n)
        }
        Kind::Organizational => {
            if args.nodes.is_some() {
                return Err(CliError::Usage("organizational systems take --orgs".into()));
            }
            let orgs = args
                .orgs
                .ok_or_else(|| CliError::Usage("organizational systems need --orgs".into()))?;
            TopologySpec::organizational(orgs)
        }
    };
    if spec.size == 0 {
        return Err(CliError::Usage("topology size must be at least 1".into()));
    }
    let fbas = spec.build();
    log::info!("generated {} system with {} nodes", spec.kind, fbas.len());
    write_output(args.output.as_deref(), &serialize_fbas(&fbas))
}

/// Topologies requested on the command line, or `None` for the defaults.
fn topologies(args: &TopologyArgs) -> Result<Option<Vec<TopologySpec>>, CliError> {
    let specs: Option<Vec<TopologySpec>> = match args.kind {
        Kind::Symmetric => {
            if args.orgs.is_some() {
                return Err(CliError::Usage(
                    "--orgs applies to organizational systems".into(),
                ));
            }
            args.nodes
                .as_ref()
                .map(|ns| ns.0.iter().map(|&n| TopologySpec::symmetric(n)).collect())
        }
        Kind::Organizational => {
            if args.nodes.is_some() {
                return Err(CliError::Usage("organizational systems take --orgs".into()));
            }
            Some(
                args.orgs
                    .as_ref()
                    .map(|o| o.0.clone())
                    .unwrap_or_else(|| (1..=4).collect())
                    .into_iter()
                    .map(TopologySpec::organizational)
                    .collect(),
            )
        }
    };
    if let Some(specs) = &specs {
        if specs.is_empty() || specs.iter().any(|s| s.size == 0) {
            return Err(CliError::Usage("topology sizes must be at least 1".into()));
        }
    }
    Ok(specs)
}

fn check_samples(samples: &[u64]) -> Result<(), CliError> {
    if samples.contains(&0) {
        return Err(CliError::Usage("sample counts must be at least 1".into()));
    }
    Ok(())
}

fn experiment_error(err: ExperimentError) -> CliError {
    match err {
        ExperimentError::NoRepetitions | ExperimentError::EmptyTopology => {
            CliError::Usage(err.to_string())
        }
        ExperimentError::ExactUnavailable {
            source: PowerError::PlayerSetTooLarge { .. },
            ..
        } => CliError::Cap(format!("{err}; lower the sizes or raise --cap")),
        other => CliError::Other(other.into()),
    }
}

fn bench(args: BenchArgs) -> Result<(), CliError> {
    let mut config = BenchConfig::default();
    if let Some(specs) = topologies(&args.topology)? {
        config.topologies = specs;
    }
    if args.full_scale {
        config.reps = FULL_SCALE_REPS;
        config.samples = FULL_SCALE_SAMPLES.to_vec();
    }
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if let Some(samples) = args.samples {
        config.samples = samples.0;
    }
    if let Some(cap) = args.cap {
        config.cap = cap;
    }
    config.seed = args.seed;
    match args.method {
        BenchMethodArg::Exact => config.samples.clear(),
        BenchMethodArg::Approx => config.exact = false,
        BenchMethodArg::Both => {}
    }
    if config.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    check_samples(&config.samples)?;
    let report = run_runtime_bench(&config).map_err(experiment_error)?;
    write_output(args.output.as_deref(), &render(&report, args.format)?)
}

fn accuracy(args: AccuracyArgs) -> Result<(), CliError> {
    let mut config = AccuracyConfig::default();
    if let Some(specs) = topologies(&args.topology)? {
        config.topologies = specs;
    }
    if args.full_scale {
        config.reps = FULL_SCALE_REPS;
        config.samples = FULL_SCALE_SAMPLES.to_vec();
    }
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if let Some(samples) = args.samples {
        config.samples = samples.0;
    }
    if let Some(cap) = args.cap {
        config.cap = cap;
    }
    config.base_seed = args.seed;
    config.keep_runs = args.keep_runs;
    if config.reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    check_samples(&config.samples)?;
    let report = run_accuracy_study(&config).map_err(experiment_error)?;
    write_output(args.output.as_deref(), &render(&report, args.format)?)
}
