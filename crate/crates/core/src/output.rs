//! Machine-readable records and their CSV / JSON / table renderings.
//!
//! CSV list fields (partition, spacing, positions, lags) are joined with `;`.
//! JSON keys are the field names of [`OutputRecord`] verbatim.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::array::UNIT_SPACING_WAVELENGTHS;
use crate::coarray::CoarrayReport;
use crate::search::{Candidate, DesignResult, Objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Table,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// One optimum of one objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRecord {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "L")]
    pub l: u32,
    pub objective: Objective,
    pub partition: Vec<u32>,
    pub spacing: Vec<u32>,
    pub positions: Vec<u64>,
    pub l_ug: u64,
    pub l_cg: u64,
    pub v_delta: u64,
    pub aperture: u64,
    pub hole_count: u64,
    pub is_joint: bool,
    /// 1-based position in tie-break order.
    pub rank: u32,
    /// Positions in wavelengths, present only when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions_wavelengths: Option<Vec<f64>>,
}

pub const RECORD_HEADER: [&str; 13] = [
    "N",
    "L",
    "objective",
    "partition",
    "spacing",
    "positions",
    "l_ug",
    "l_cg",
    "v_delta",
    "aperture",
    "hole_count",
    "is_joint",
    "rank",
];

impl OutputRecord {
    pub fn new(
        result: &DesignResult,
        objective: Objective,
        candidate: &Candidate,
        rank: u32,
        wavelengths: bool,
    ) -> Self {
        let cfg = &candidate.config;
        OutputRecord {
            n: cfg.total_elements,
            l: cfg.levels() as u32,
            objective,
            partition: cfg.partition.counts().to_vec(),
            spacing: cfg.spacing.spacings().to_vec(),
            positions: cfg.positions.clone(),
            l_ug: candidate.report.unique_count,
            l_cg: candidate.report.consecutive_count,
            v_delta: candidate.report.unit_spacing_count,
            aperture: cfg.aperture,
            hole_count: candidate.report.hole_count,
            is_joint: result.attains_both(candidate),
            rank,
            positions_wavelengths: wavelengths.then(|| to_wavelengths(&cfg.positions)),
        }
    }

    pub fn csv_fields(&self) -> Vec<String> {
        let mut out = vec![
            self.n.to_string(),
            self.l.to_string(),
            self.objective.to_string(),
            join(&self.partition),
            join(&self.spacing),
            join(&self.positions),
            self.l_ug.to_string(),
            self.l_cg.to_string(),
            self.v_delta.to_string(),
            self.aperture.to_string(),
            self.hole_count.to_string(),
            self.is_joint.to_string(),
            self.rank.to_string(),
        ];
        if let Some(w) = &self.positions_wavelengths {
            out.push(join(w));
        }
        out
    }

    /// Parses a row produced by [`OutputRecord::csv_fields`].
    pub fn from_csv_fields(fields: &[&str]) -> Result<Self, String> {
        if fields.len() != 13 && fields.len() != 14 {
            return Err(format!("expected 13 or 14 fields, got {}", fields.len()));
        }
        let num = |i: usize| -> Result<u64, String> {
            fields[i].parse().map_err(|_| {
                format!(
                    "field {} is not an integer: {:?}",
                    RECORD_HEADER[i], fields[i]
                )
            })
        };
        Ok(OutputRecord {
            n: num(0)? as u32,
            l: num(1)? as u32,
            objective: fields[2].parse()?,
            partition: split(fields[3])?,
            spacing: split(fields[4])?,
            positions: split(fields[5])?,
            l_ug: num(6)?,
            l_cg: num(7)?,
            v_delta: num(8)?,
            aperture: num(9)?,
            hole_count: num(10)?,
            is_joint: fields[11]
                .parse()
                .map_err(|_| format!("is_joint is not a bool: {:?}", fields[11]))?,
            rank: num(12)? as u32,
            positions_wavelengths: fields.get(13).map(|s| split(s)).transpose()?,
        })
    }
}

pub fn to_wavelengths(positions: &[u64]) -> Vec<f64> {
    positions
        .iter()
        .map(|&p| p as f64 * UNIT_SPACING_WAVELENGTHS)
        .collect()
}

pub fn join<T: ToString>(values: &[T]) -> String {
    values
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

pub fn split<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, String> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(';')
        .map(|x| x.parse().map_err(|_| format!("bad list entry {x:?}")))
        .collect()
}

/// Records for a design result. With `all_ties` every optimum is listed,
/// otherwise only the recommended one. An empty joint set yields the
/// separate single-objective optima instead.
pub fn design_records(
    result: &DesignResult,
    all_ties: bool,
    wavelengths: bool,
) -> Vec<OutputRecord> {
    let take = |v: &[Candidate]| if all_ties { v.len() } else { v.len().min(1) };
    let mut records = Vec::new();
    let mut push = |objective: Objective, v: &[Candidate]| {
        for (i, c) in v.iter().take(take(v)).enumerate() {
            records.push(OutputRecord::new(
                result,
                objective,
                c,
                i as u32 + 1,
                wavelengths,
            ));
        }
    };
    match &result.separate {
        Some(sep) => {
            push(Objective::Unique, &sep.unique);
            push(Objective::Consecutive, &sep.consecutive);
        }
        None => push(result.query.objective, &result.optima),
    }
    records
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryEcho {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "L")]
    pub l: u32,
    pub objective: Objective,
    pub all_ties: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignDocument {
    pub query: QueryEcho,
    pub unique_max: u64,
    pub consecutive_max: u64,
    pub is_joint: bool,
    pub results: Vec<OutputRecord>,
}

impl DesignDocument {
    pub fn new(result: &DesignResult, all_ties: bool, wavelengths: bool) -> Self {
        DesignDocument {
            query: QueryEcho {
                n: result.query.total_elements,
                l: result.query.levels,
                objective: result.query.objective,
                all_ties,
            },
            unique_max: result.unique_max,
            consecutive_max: result.consecutive_max,
            is_joint: result.is_joint,
            results: design_records(result, all_ties, wavelengths),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => records_csv(&self.results),
            Format::Table => self.table(),
        }
    }

    fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "N={} L={} objective={} max l_ug={} max l_cg={} joint={}",
            self.query.n,
            self.query.l,
            self.query.objective,
            self.unique_max,
            self.consecutive_max,
            self.is_joint
        );
        let _ = writeln!(
            s,
            "{:>4}  {:<11}  {:<24}  {:<24}  {:>6}  {:>6}  {:>7}  {:>8}  {:>5}  {:<5}",
            "rank",
            "objective",
            "partition",
            "spacing",
            "l_ug",
            "l_cg",
            "v_delta",
            "aperture",
            "holes",
            "joint"
        );
        for r in &self.results {
            let _ = writeln!(
                s,
                "{:>4}  {:<11}  {:<24}  {:<24}  {:>6}  {:>6}  {:>7}  {:>8}  {:>5}  {:<5}",
                r.rank,
                r.objective.as_str(),
                bracket(&r.partition),
                bracket(&r.spacing),
                r.l_ug,
                r.l_cg,
                r.v_delta,
                r.aperture,
                r.hole_count,
                r.is_joint
            );
            let _ = writeln!(s, "      positions: {}", bracket(&r.positions));
            if let Some(w) = &r.positions_wavelengths {
                let _ = writeln!(s, "      positions (wavelengths): {}", bracket(w));
            }
        }
        s
    }
}

fn bracket<T: ToString>(v: &[T]) -> String {
    format!(
        "[{}]",
        v.iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    )
}

pub fn records_csv(records: &[OutputRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = RECORD_HEADER.to_vec();
    if records.iter().any(|r| r.positions_wavelengths.is_some()) {
        header.push("positions_wavelengths");
    }
    w.write_record(&header).expect("in-memory write");
    for r in records {
        w.write_record(r.csv_fields()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Parses CSV produced by [`records_csv`].
pub fn parse_records_csv(text: &str) -> Result<Vec<OutputRecord>, String> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.records()
        .map(|row| {
            let row = row.map_err(|e| e.to_string())?;
            let fields: Vec<&str> = row.iter().collect();
            OutputRecord::from_csv_fields(&fields)
        })
        .collect()
}

/// Coarray metrics of an arbitrary geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisRecord {
    pub positions: Vec<u64>,
    #[serde(rename = "N")]
    pub n: u64,
    pub l_ug: u64,
    pub l_cg: u64,
    pub v_delta: u64,
    pub hole_count: u64,
    pub aperture: u64,
    pub lags: Vec<i64>,
    /// Multiplicity of each entry of `lags`, same order.
    pub weights: Vec<u64>,
    pub holes: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions_wavelengths: Option<Vec<f64>>,
}

pub const ANALYSIS_HEADER: [&str; 10] = [
    "positions",
    "N",
    "l_ug",
    "l_cg",
    "v_delta",
    "hole_count",
    "aperture",
    "lags",
    "weights",
    "holes",
];

impl AnalysisRecord {
    pub fn new(positions: &[u64], report: &CoarrayReport, wavelengths: bool) -> Self {
        let mut sorted = positions.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let lags = report.lags();
        AnalysisRecord {
            n: report.element_count,
            l_ug: report.unique_count,
            l_cg: report.consecutive_count,
            v_delta: report.unit_spacing_count,
            hole_count: report.hole_count,
            aperture: (sorted[sorted.len() - 1] - sorted[0]),
            weights: lags.iter().map(|&l| report.weight(l)).collect(),
            lags,
            holes: report.holes(),
            positions_wavelengths: wavelengths.then(|| to_wavelengths(&sorted)),
            positions: sorted,
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                let mut header = ANALYSIS_HEADER.to_vec();
                let mut row = vec![
                    join(&self.positions),
                    self.n.to_string(),
                    self.l_ug.to_string(),
                    self.l_cg.to_string(),
                    self.v_delta.to_string(),
                    self.hole_count.to_string(),
                    self.aperture.to_string(),
                    join(&self.lags),
                    join(&self.weights),
                    join(&self.holes),
                ];
                if let Some(wl) = &self.positions_wavelengths {
                    header.push("positions_wavelengths");
                    row.push(join(wl));
                }
                w.write_record(&header).expect("in-memory write");
                w.write_record(&row).expect("in-memory write");
                String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
            }
            Format::Table => {
                let mut s = String::new();
                let _ = writeln!(s, "positions : {}", bracket(&self.positions));
                if let Some(wl) = &self.positions_wavelengths {
                    let _ = writeln!(s, "positions (wavelengths): {}", bracket(wl));
                }
                let _ = writeln!(s, "N         : {}", self.n);
                let _ = writeln!(s, "aperture  : {}", self.aperture);
                let _ = writeln!(s, "l_ug      : {}", self.l_ug);
                let _ = writeln!(s, "l_cg      : {}", self.l_cg);
                let _ = writeln!(s, "v_delta   : {}", self.v_delta);
                let _ = writeln!(
                    s,
                    "holes     : {} {}",
                    self.hole_count,
                    bracket(&self.holes)
                );
                s
            }
        }
    }
}
