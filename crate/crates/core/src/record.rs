//! Run records and their line-delimited JSON encoding.
//!
//! One record per line. Every line carries `"version": 1`. Unsolved targets
//! have `"queries": null`; non-finite floats are written as the strings
//! `"NaN"`, `"inf"` and `"-inf"`.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const RECORD_VERSION: u32 = 1;

/// Queries needed to reach one relative accuracy, `None` if never reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetCount {
    pub eps: f64,
    pub queries: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub query: u64,
    #[serde(with = "float_repr")]
    pub best: f64,
}

/// Result of one (problem, solver, seed) run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: u32,
    pub problem: String,
    pub solver: String,
    pub seed: u64,
    pub budget: u64,
    pub queries_used: u64,
    pub iterations: u64,
    #[serde(with = "float_repr")]
    pub f0: f64,
    pub f_star: Option<f64>,
    pub queries_to_target: Vec<TargetCount>,
    #[serde(with = "float_repr")]
    pub final_best: f64,
    /// Best value at geometrically spaced query counts.
    pub trace: Vec<TracePoint>,
    /// Set when the run failed; its targets are then all unsolved.
    pub error: Option<String>,
}

impl RunRecord {
    pub fn queries_for(&self, eps: f64) -> Option<Option<u64>> {
        self.queries_to_target
            .iter()
            .find(|t| t.eps == eps)
            .map(|t| t.queries)
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("run records always serialize")
    }
}

pub fn write_records<W: Write>(mut out: W, records: &[RunRecord]) -> std::io::Result<()> {
    for r in records {
        writeln!(out, "{}", r.to_line())?;
    }
    out.flush()
}

/// Parses records, reporting the 1-based line of the first malformed entry.
/// Blank lines are skipped.
pub fn read_records<R: BufRead>(input: R) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: RunRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if record.version != RECORD_VERSION {
            return Err(Error::Parse {
                line: line_no,
                message: format!("unsupported record version {}", record.version),
            });
        }
        records.push(record);
    }
    Ok(records)
}

mod float_repr {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("NaN")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Str(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "NaN" => Ok(f64::NAN),
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                other => Err(de::Error::custom(format!("invalid float `{other}`"))),
            },
        }
    }
}
