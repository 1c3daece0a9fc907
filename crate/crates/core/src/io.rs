//! Edge-list ingestion and report serialization.
//!
//! CSV output renders floats with six significant digits. JSON output keeps
//! full precision so that parsing it back reproduces the in-memory record.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::ExperimentReport;
use crate::graph::{build_graph, Graph};
use crate::reconstruct::RankedLinks;
use crate::regularity::{RegularityReport, RegulationTrajectory};
use crate::scalar::Real;
use crate::sweep::{RemovalStrategy, SweepPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Delimiter {
    Whitespace,
    Comma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeListFormat {
    pub delimiter: Delimiter,
    /// 0 or 1.
    pub index_base: u8,
    pub comment_prefix: char,
}

impl Default for EdgeListFormat {
    fn default() -> Self {
        EdgeListFormat {
            delimiter: Delimiter::Whitespace,
            index_base: 0,
            comment_prefix: '#',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    /// Lines whose third (weight) column was dropped.
    pub ignored_weights: usize,
}

/// Parses `a b [weight]` lines into a simple undirected graph.
///
/// Blank lines and lines starting with the comment prefix are skipped;
/// direction and weights are discarded.
pub fn parse_edge_list(text: &str, fmt: &EdgeListFormat) -> Result<ParsedEdgeList> {
    if fmt.index_base > 1 {
        return Err(Error::input(format!("index base must be 0 or 1, got {}", fmt.index_base)));
    }
    let base = i64::from(fmt.index_base);
    let mut pairs = Vec::new();
    let mut ignored_weights = 0;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with(fmt.comment_prefix) {
            continue;
        }
        let tokens: Vec<&str> = match fmt.delimiter {
            Delimiter::Whitespace => line.split_whitespace().collect(),
            Delimiter::Comma => line.split(',').map(str::trim).collect(),
        };
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected two node indices, found {:?}", line),
            });
        }
        let parse = |tok: &str| -> Result<i64> {
            let v: i64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("{tok:?} is not an integer node index"),
            })?;
            if v < base {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("node index {v} below index base {base}"),
                });
            }
            Ok(v - base)
        };
        pairs.push((parse(tokens[0])?, parse(tokens[1])?));
        if tokens.len() > 2 {
            ignored_weights += 1;
        }
    }
    if ignored_weights > 0 {
        log::warn!("ignored the weight column on {ignored_weights} lines");
    }
    Ok(ParsedEdgeList {
        graph: build_graph(&pairs, None)?,
        ignored_weights,
    })
}

pub fn read_edge_list(path: &Path, fmt: &EdgeListFormat) -> Result<ParsedEdgeList> {
    let mut text = String::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
    parse_edge_list(&text, fmt)
}

/// Canonical edge list, one `i j` per line, in the given index base.
pub fn format_edge_list(g: &Graph, fmt: &EdgeListFormat) -> String {
    let sep = match fmt.delimiter {
        Delimiter::Whitespace => " ",
        Delimiter::Comma => ",",
    };
    let base = usize::from(fmt.index_base);
    let mut out = String::new();
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{}{sep}{}", i + base, j + base);
    }
    out
}

/// `%g`-style rendering with six significant digits.
pub fn fmt_sig6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..6).contains(&exp) {
        let decimals = (5 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa.to_string()), if exp < 0 { "-" } else { "+" }, exp.abs())
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Serde adapter that writes non-finite floats as the strings `"inf"`,
/// `"-inf"` and `"nan"`, which plain JSON numbers cannot express.
pub mod float_or_inf {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&super::fmt_sig6(*v))
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("unexpected float literal {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Anything the CLI can write to disk.
pub trait Report {
    fn to_json(&self) -> Result<String>;
    fn to_csv(&self) -> Result<String>;
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Serialize(e.to_string()))
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    w.write_record(header).map_err(ser)?;
    for row in rows {
        w.write_record(&row).map_err(ser)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_sig6).unwrap_or_default()
}

/// Flat JSON form of a ranked list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedLinkRow {
    pub i: usize,
    pub j: usize,
    pub score: f64,
    pub rank: usize,
}

pub fn ranked_rows<T: Real>(ranked: &RankedLinks<T>, base: usize) -> Vec<RankedLinkRow> {
    ranked
        .links
        .iter()
        .enumerate()
        .map(|(k, l)| RankedLinkRow {
            i: l.edge.0 + base,
            j: l.edge.1 + base,
            score: l.score.as_f64(),
            rank: k + 1,
        })
        .collect()
}

/// Ranked links with node labels shifted to the input's index base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedLinksReport {
    pub direction: crate::reconstruct::RankDirection,
    pub links: Vec<RankedLinkRow>,
}

impl RankedLinksReport {
    pub fn new<T: Real>(ranked: &RankedLinks<T>, base: usize) -> Self {
        RankedLinksReport {
            direction: ranked.direction,
            links: ranked_rows(ranked, base),
        }
    }
}

impl Report for RankedLinksReport {
    fn to_json(&self) -> Result<String> {
        json(self)
    }

    fn to_csv(&self) -> Result<String> {
        csv_string(
            &["i", "j", "score", "rank"],
            self.links.iter().map(|r| {
                vec![r.i.to_string(), r.j.to_string(), fmt_sig6(r.score), r.rank.to_string()]
            }),
        )
    }
}

/// Both candidate lists of one reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub source: String,
    pub converged: bool,
    pub missing: RankedLinksReport,
    pub spurious: RankedLinksReport,
}

impl Report for ReconstructionReport {
    fn to_json(&self) -> Result<String> {
        json(self)
    }

    /// One table; the `list` column tells the two rankings apart.
    fn to_csv(&self) -> Result<String> {
        let rows = [("missing", &self.missing), ("spurious", &self.spurious)]
            .into_iter()
            .flat_map(|(name, list)| {
                list.links.iter().map(move |r| {
                    vec![
                        name.to_string(),
                        r.i.to_string(),
                        r.j.to_string(),
                        fmt_sig6(r.score),
                        r.rank.to_string(),
                    ]
                })
            });
        csv_string(&["list", "i", "j", "score", "rank"], rows)
    }
}

impl<T: Real> Report for RankedLinks<T> {
    fn to_json(&self) -> Result<String> {
        RankedLinksReport::new(self, 0).to_json()
    }

    fn to_csv(&self) -> Result<String> {
        RankedLinksReport::new(self, 0).to_csv()
    }
}

impl Report for RegulationTrajectory {
    fn to_json(&self) -> Result<String> {
        json(self)
    }

    fn to_csv(&self) -> Result<String> {
        csv_string(
            &["step", "removed_count", "sigma_r", "converged"],
            self.steps.iter().map(|s| {
                vec![
                    s.step.to_string(),
                    s.removed.len().to_string(),
                    fmt_sig6(s.sigma_r),
                    s.converged.to_string(),
                ]
            }),
        )
    }
}

impl Report for ExperimentReport {
    fn to_json(&self) -> Result<String> {
        json(self)
    }

    /// Plot-ready aggregate table, one row per (method, task, metric).
    fn to_csv(&self) -> Result<String> {
        let mut rows = Vec::new();
        for a in &self.aggregates {
            for (metric, mean, std) in [
                ("auc", a.auc_mean, a.auc_std),
                ("accuracy", a.accuracy_mean, a.accuracy_std),
            ] {
                rows.push(vec![
                    a.method.clone(),
                    a.task.name().to_string(),
                    fmt_sig6(a.fraction),
                    metric.to_string(),
                    fmt_sig6(mean),
                    fmt_sig6(std),
                    opt(a.runtime_s),
                ]);
            }
        }
        csv_string(
            &["method", "task", "fraction", "metric", "mean", "std", "runtime_s"],
            rows,
        )
    }
}

/// Regularity of one network with its node and link importances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularitySummary {
    pub regularity: RegularityReport,
    pub node_importance: Vec<f64>,
    /// `(i, j, U_ij)` from least to most important.
    pub link_importance: Vec<(usize, usize, f64)>,
    pub converged: bool,
}

impl Report for RegularitySummary {
    fn to_json(&self) -> Result<String> {
        json(self)
    }

    fn to_csv(&self) -> Result<String> {
        csv_string(
            &["i", "j", "u", "rank"],
            self.link_importance.iter().enumerate().map(|(k, &(i, j, u))| {
                vec![i.to_string(), j.to_string(), fmt_sig6(u), (k + 1).to_string()]
            }),
        )
    }
}

/// Accuracy and regularity along removal sweeps, one block per strategy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub node_count: usize,
    pub edge_count: usize,
    pub sweeps: Vec<(RemovalStrategy, Vec<SweepPoint>)>,
}

fn strategy_name(s: RemovalStrategy) -> &'static str {
    match s {
        RemovalStrategy::Irregular => "irregular",
        RemovalStrategy::Regular => "regular",
        RemovalStrategy::Random { .. } => "random",
    }
}

impl Report for SweepReport {
    fn to_json(&self) -> Result<String> {
        json(self)
    }

    fn to_csv(&self) -> Result<String> {
        csv_string(
            &["strategy", "fraction", "removed", "sigma_r", "accuracy_mean", "accuracy_std"],
            self.sweeps.iter().flat_map(|(strategy, points)| {
                points.iter().map(move |p| {
                    vec![
                        strategy_name(*strategy).to_string(),
                        fmt_sig6(p.fraction),
                        p.removed.to_string(),
                        fmt_sig6(p.sigma_r),
                        fmt_sig6(p.accuracy_mean),
                        fmt_sig6(p.accuracy_std),
                    ]
                })
            }),
        )
    }
}

pub fn render(report: &dyn Report, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn write_report(report: &dyn Report, path: &Path, format: ReportFormat) -> Result<()> {
    write_text(path, &render(report, format)?)
}
