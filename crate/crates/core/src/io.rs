//! JSON documents for FBASs and JSON/CSV output for reports.
//!
//! FBAS documents are arrays of
//! `{"publicKey": .., "quorumSet": {"threshold": .., "validators": [..], "innerQuorumSets": [..]}}`,
//! the layout used by Stellar network crawlers.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::experiments::{AccuracyReport, BenchMethod, BenchReport};
use crate::fbas::{Fbas, FbasError, Node, NodeId, QuorumSet};
use crate::power::{Indices, PowerIndexReport};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    MalformedJson(#[from] serde_json::Error),
    #[error("public key {0:?} appears more than once")]
    DuplicatePublicKey(String),
    #[error("node {public_key:?}: threshold {threshold} outside 1..={members}")]
    InvalidThreshold {
        public_key: String,
        threshold: i64,
        members: usize,
    },
    #[error("node {public_key:?}: validator {validator:?} listed twice in one quorum set")]
    DuplicateValidator {
        public_key: String,
        validator: String,
    },
    #[error(transparent)]
    Model(#[from] FbasError),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct DocNode {
    public_key: String,
    quorum_set: DocQuorumSet,
}

// Field order is alphabetical so serialized keys come out sorted.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct DocQuorumSet {
    #[serde(default)]
    inner_quorum_sets: Vec<DocQuorumSet>,
    threshold: i64,
    #[serde(default)]
    validators: Vec<String>,
}

/// A parsed FBAS plus anything dropped along the way.
#[derive(Debug)]
pub struct ParsedFbas {
    pub fbas: Fbas,
    pub warnings: Vec<String>,
}

/// Parses a JSON FBAS document. Nodes get indices in document order and
/// their public key as alias. Validators naming no node in the document are
/// dropped with a warning; thresholds are kept as written.
pub fn parse_fbas(document: &[u8]) -> Result<ParsedFbas, IoError> {
    let doc: Vec<DocNode> = serde_json::from_slice(document)?;
    let mut index = HashMap::new();
    for (i, node) in doc.iter().enumerate() {
        if index.insert(node.public_key.as_str(), i).is_some() {
            return Err(IoError::DuplicatePublicKey(node.public_key.clone()));
        }
    }

    let mut warnings = Vec::new();
    let mut nodes = Vec::with_capacity(doc.len());
    for (i, node) in doc.iter().enumerate() {
        let quorum_set = resolve(&node.public_key, &node.quorum_set, &index, &mut warnings)?;
        nodes.push(Node {
            id: NodeId(i),
            alias: Some(node.public_key.clone()),
            quorum_set,
        });
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(ParsedFbas {
        fbas: Fbas::new(nodes)?,
        warnings,
    })
}

fn resolve(
    owner: &str,
    doc: &DocQuorumSet,
    index: &HashMap<&str, usize>,
    warnings: &mut Vec<String>,
) -> Result<QuorumSet, IoError> {
    let members = doc.validators.len() + doc.inner_quorum_sets.len();
    if doc.threshold < 1 || doc.threshold as u64 > members as u64 {
        return Err(IoError::InvalidThreshold {
            public_key: owner.to_string(),
            threshold: doc.threshold,
            members,
        });
    }
    let mut seen = HashSet::new();
    let mut validators = Vec::with_capacity(doc.validators.len());
    for v in &doc.validators {
        if !seen.insert(v.as_str()) {
            return Err(IoError::DuplicateValidator {
                public_key: owner.to_string(),
                validator: v.clone(),
            });
        }
        match index.get(v.as_str()) {
            Some(&i) => validators.push(NodeId(i)),
            None => warnings.push(format!("node {owner:?}: dropped unknown validator {v:?}")),
        }
    }
    let inner_sets = doc
        .inner_quorum_sets
        .iter()
        .map(|q| resolve(owner, q, index, warnings))
        .collect::<Result<_, _>>()?;
    Ok(QuorumSet::new(
        doc.threshold as usize,
        validators,
        inner_sets,
    ))
}

fn public_key(fbas: &Fbas, id: NodeId) -> String {
    fbas.alias(id)
        .map(str::to_string)
        .unwrap_or_else(|| id.to_string())
}

fn to_doc(fbas: &Fbas, qset: &QuorumSet) -> DocQuorumSet {
    DocQuorumSet {
        inner_quorum_sets: qset.inner_sets.iter().map(|q| to_doc(fbas, q)).collect(),
        threshold: qset.threshold as i64,
        validators: qset
            .validators
            .iter()
            .map(|&v| public_key(fbas, v))
            .collect(),
    }
}

/// Canonical JSON for an FBAS: nodes in index order, keys sorted, two-space
/// indentation. Nodes without alias use their index as public key.
pub fn serialize_fbas(fbas: &Fbas) -> Vec<u8> {
    let doc: Vec<DocNode> = fbas
        .nodes()
        .iter()
        .map(|node| DocNode {
            public_key: public_key(fbas, node.id),
            quorum_set: to_doc(fbas, &node.quorum_set),
        })
        .collect();
    serde_json::to_vec_pretty(&doc).expect("FBAS documents always serialize")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

/// Reports that can be written as JSON or CSV.
pub trait Report {
    fn to_json(&self) -> serde_json::Value;
    fn write_csv(&self, out: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error>;
}

/// Renders a report. JSON output ends with a newline; CSV has a header row.
pub fn write_report<R: Report + ?Sized>(report: &R, format: Format) -> Result<Vec<u8>, IoError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&report.to_json())?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            report.write_csv(&mut writer)?;
            writer
                .into_inner()
                .map_err(|e| IoError::Csv(e.into_error().into()))
        }
    }
}

/// Formats a float with 17 significant digits in positional notation.
pub fn format_float(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{value:.decimals$}")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl Report for PowerIndexReport {
    fn to_json(&self) -> serde_json::Value {
        let shares: Vec<_> = (0..self.len())
            .map(|i| {
                let mut entry = json!({
                    "node_index": i,
                    "alias": self.aliases[i],
                    "value": self.value(NodeId(i)),
                });
                match &self.indices {
                    Indices::Exact(values) => {
                        entry["numerator"] = json!(values[i].numer().to_string());
                        entry["denominator"] = json!(values[i].denom().to_string());
                    }
                    Indices::Sampled { pivots, .. } => {
                        entry["pivots"] = json!(pivots[i]);
                    }
                }
                entry
            })
            .collect();
        json!({
            "method": self.method_name(),
            "samples": self.samples(),
            "seed": self.seed(),
            "players": self.players.to_vec(),
            "shares": shares,
        })
    }

    fn write_csv(&self, out: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error> {
        let method = self.method_name();
        let samples = opt(self.samples());
        let seed = opt(self.seed());
        match &self.indices {
            Indices::Exact(values) => {
                out.write_record([
                    "node_index",
                    "alias",
                    "value_numerator",
                    "value_denominator",
                    "method",
                    "m",
                    "seed",
                ])?;
                for (i, v) in values.iter().enumerate() {
                    out.write_record([
                        &i.to_string(),
                        self.aliases[i].as_deref().unwrap_or(""),
                        &v.numer().to_string(),
                        &v.denom().to_string(),
                        method,
                        &samples,
                        &seed,
                    ])?;
                }
            }
            Indices::Sampled { .. } => {
                out.write_record(["node_index", "alias", "value_float", "method", "m", "seed"])?;
                for i in 0..self.len() {
                    out.write_record([
                        &i.to_string(),
                        self.aliases[i].as_deref().unwrap_or(""),
                        &format_float(self.value(NodeId(i))),
                        method,
                        &samples,
                        &seed,
                    ])?;
                }
            }
        }
        Ok(())
    }
}

fn bench_method(method: BenchMethod) -> (&'static str, Option<u64>) {
    match method {
        BenchMethod::Exact => ("exact", None),
        BenchMethod::Approximate { samples } => ("approx", Some(samples)),
    }
}

impl Report for BenchReport {
    fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                let (method, samples) = bench_method(r.method);
                json!({
                    "kind": r.kind,
                    "nodes": r.nodes,
                    "method": method,
                    "m": samples,
                    "reps": r.reps,
                    "median_seconds": r.median_seconds,
                    "skipped": r.median_seconds.is_none(),
                })
            })
            .collect();
        json!({ "rows": rows })
    }

    fn write_csv(&self, out: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error> {
        out.write_record([
            "kind",
            "nodes",
            "method",
            "m",
            "reps",
            "median_seconds",
            "status",
        ])?;
        for r in &self.rows {
            let (method, samples) = bench_method(r.method);
            out.write_record([
                &r.kind.to_string(),
                &r.nodes.to_string(),
                method,
                &opt(samples),
                &r.reps.to_string(),
                &opt(r.median_seconds.map(format_float)),
                &String::from(if r.median_seconds.is_some() {
                    "ok"
                } else {
                    "skipped"
                }),
            ])?;
        }
        Ok(())
    }
}

impl Report for AccuracyReport {
    fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "kind": r.kind,
                    "nodes": r.nodes,
                    "m": r.samples,
                    "reps": r.reps,
                    "base_seed": r.base_seed,
                    "mmpe_percent": r.mmpe_percent,
                    "mpe_percent": r.mpe_percent,
                })
            })
            .collect();
        json!({ "rows": rows })
    }

    fn write_csv(&self, out: &mut csv::Writer<Vec<u8>>) -> Result<(), csv::Error> {
        out.write_record(["kind", "nodes", "m", "reps", "base_seed", "mmpe_percent"])?;
        for r in &self.rows {
            out.write_record([
                &r.kind.to_string(),
                &r.nodes.to_string(),
                &r.samples.to_string(),
                &r.reps.to_string(),
                &r.base_seed.to_string(),
                &format_float(r.mmpe_percent),
            ])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_symmetric, hub_example};
    use crate::power::{reward_distribution, Method, RewardOptions};
    use crate::quorum::find_minimal_quorums;

    const HUB_DOC: &str = r#"[
        {"publicKey": "n0", "quorumSet": {"threshold": 3, "validators": ["n0","n1","n2","n3","n4"]}},
        {"publicKey": "n1", "quorumSet": {"threshold": 3, "validators": ["n0","n1","n2"]}},
        {"publicKey": "n2", "quorumSet": {"threshold": 3, "validators": ["n0","n1","n2"]}},
        {"publicKey": "n3", "quorumSet": {"threshold": 3, "validators": ["n0","n3","n4"]}},
        {"publicKey": "n4", "quorumSet": {"threshold": 3, "validators": ["n0","n3","n4"]}}
    ]"#;

    #[test]
    fn parses_hub_document() {
        let parsed = parse_fbas(HUB_DOC.as_bytes()).unwrap();
        assert!(parsed.warnings.is_empty());
        assert_eq!(parsed.fbas, hub_example());
        let mq = find_minimal_quorums(&parsed.fbas);
        assert_eq!(mq.len(), 2);
    }

    #[test]
    fn empty_document() {
        let parsed = parse_fbas(b"[]").unwrap();
        assert!(parsed.fbas.is_empty());
        assert!(find_minimal_quorums(&parsed.fbas).is_empty());
        assert_eq!(serialize_fbas(&parsed.fbas), b"[]");
    }

    #[test]
    fn unknown_validators_are_dropped() {
        let doc = r#"[
            {"publicKey": "a", "quorumSet": {"threshold": 2, "validators": ["a", "b", "ghost"]}},
            {"publicKey": "b", "quorumSet": {"threshold": 2, "validators": ["a", "b"]}}
        ]"#;
        let parsed = parse_fbas(doc.as_bytes()).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert!(parsed.warnings[0].contains("ghost"));
        let q = parsed.fbas.quorum_set(NodeId(0));
        assert_eq!(q.threshold, 2);
        assert_eq!(q.validators, vec![NodeId(0), NodeId(1)]);
        assert!(q.is_satisfiable());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_fbas(b"[{"), Err(IoError::MalformedJson(_))));
        let dup = r#"[
            {"publicKey": "a", "quorumSet": {"threshold": 1, "validators": ["a"]}},
            {"publicKey": "a", "quorumSet": {"threshold": 1, "validators": ["a"]}}
        ]"#;
        assert!(matches!(
            parse_fbas(dup.as_bytes()),
            Err(IoError::DuplicatePublicKey(k)) if k == "a"
        ));
        for t in [0, 2, -1] {
            let doc = format!(
                r#"[{{"publicKey": "a", "quorumSet": {{"threshold": {t}, "validators": ["a"]}}}}]"#
            );
            assert!(matches!(
                parse_fbas(doc.as_bytes()),
                Err(IoError::InvalidThreshold { .. })
            ));
        }
        let twice =
            r#"[{"publicKey": "a", "quorumSet": {"threshold": 1, "validators": ["a", "a"]}}]"#;
        assert!(matches!(
            parse_fbas(twice.as_bytes()),
            Err(IoError::DuplicateValidator { .. })
        ));
    }

    #[test]
    fn symmetric_three_golden() {
        let out = String::from_utf8(serialize_fbas(&gen_symmetric(3))).unwrap();
        let node = |k: &str| {
            format!(
                "  {{\n    \"publicKey\": \"{k}\",\n    \"quorumSet\": {{\n      \"innerQuorumSets\": [],\n      \"threshold\": 3,\n      \"validators\": [\n        \"n0\",\n        \"n1\",\n        \"n2\"\n      ]\n    }}\n  }}"
            )
        };
        let expected = format!("[\n{},\n{},\n{}\n]", node("n0"), node("n1"), node("n2"));
        assert_eq!(out, expected);
    }

    #[test]
    fn exact_report_csv() {
        let fbas = hub_example();
        let report = reward_distribution(&fbas, Method::Exact, RewardOptions::default()).unwrap();
        let csv = String::from_utf8(write_report(&report, Format::Csv).unwrap()).unwrap();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(
            lines[0],
            "node_index,alias,value_numerator,value_denominator,method,m,seed"
        );
        assert_eq!(lines[1], "0,n0,7,15,exact,,");
        assert_eq!(lines[2], "1,n1,2,15,exact,,");
        assert_eq!(lines.len(), 6);
    }

    #[test]
    fn sampled_report_csv_records_seed() {
        let fbas = hub_example();
        let method = Method::Approximate {
            samples: 8,
            seed: 99,
        };
        let report = reward_distribution(&fbas, method, RewardOptions::default()).unwrap();
        let csv = String::from_utf8(write_report(&report, Format::Csv).unwrap()).unwrap();
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("node_index,alias,value_float,method,m,seed")
        );
        for line in lines {
            let fields: Vec<_> = line.split(',').collect();
            assert_eq!(&fields[3..], &["approx", "8", "99"]);
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let report = PowerIndexReport {
            players: crate::NodeSet::empty(0),
            aliases: vec![],
            indices: Indices::Exact(vec![]),
        };
        let csv = String::from_utf8(write_report(&report, Format::Csv).unwrap()).unwrap();
        assert_eq!(csv.lines().count(), 1);
    }

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_float(0.125), "0.12500000000000000");
        assert_eq!(format_float(1.0), "1.0000000000000000");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(2.0 / 15.0), "0.13333333333333333");
    }

    #[test]
    fn json_report_carries_fractions() {
        let fbas = hub_example();
        let report = reward_distribution(&fbas, Method::Exact, RewardOptions::default()).unwrap();
        let value: serde_json::Value =
            serde_json::from_slice(&write_report(&report, Format::Json).unwrap()).unwrap();
        assert_eq!(value["method"], "exact");
        assert_eq!(value["shares"][0]["numerator"], "7");
        assert_eq!(value["shares"][0]["denominator"], "15");
    }
}
