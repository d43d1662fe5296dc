//! CSV and JSON path formats.
//!
//! CSV: header `time,v1,...,vd`, one row per sample, LF line endings.
//! JSON: `{"times":[...],"values":[[...],...],"norm":"euclidean|sup|l1"}`.
//! Floats are written in shortest round-trip form.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::norm::NormKind;
use super::sampled::{MetricPath, SampledPath};

#[derive(Debug, Serialize, Deserialize)]
struct PathJson {
    times: Vec<f64>,
    values: Vec<Vec<f64>>,
    #[serde(default)]
    norm: NormKind,
}

pub fn to_csv(path: &SampledPath) -> String {
    let mut out = String::from("time");
    for k in 1..=path.dim() {
        out.push_str(&format!(",v{k}"));
    }
    out.push('\n');
    for (t, v) in path.times().iter().zip(path.values()) {
        out.push_str(&t.to_string());
        for x in v {
            out.push(',');
            out.push_str(&x.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn from_csv(text: &str, norm: NormKind) -> Result<SampledPath> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    if headers.get(0).map(str::trim) != Some("time") || headers.len() < 2 {
        return Err(Error::Parse("CSV header must be `time,v1,...,vd`".into()));
    }
    let dim = headers.len() - 1;
    let mut times = Vec::new();
    let mut data = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != dim + 1 {
            return Err(Error::Parse(format!("row {} has {} fields, expected {}", row + 1, record.len(), dim + 1)));
        }
        let mut fields = record.iter().map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("row {}: `{s}` is not a number", row + 1)))
        });
        times.push(fields.next().expect("nonempty record")?);
        for f in fields {
            data.push(f?);
        }
    }
    SampledPath::from_flat(times, data, dim, norm)
}

pub fn to_json(path: &SampledPath) -> serde_json::Value {
    serde_json::to_value(PathJson {
        times: path.times().to_vec(),
        values: path.values().map(<[f64]>::to_vec).collect(),
        norm: path.norm_kind(),
    })
    .expect("path serializes")
}

pub fn from_json(text: &str) -> Result<SampledPath> {
    let raw: PathJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    SampledPath::new(raw.times, raw.values, raw.norm)
}

/// Reads a path file, choosing the format by extension (`.json` or CSV otherwise).
/// `norm` overrides the norm stored in a JSON file and sets it for CSV.
pub fn read_path(file: &Path, norm: Option<NormKind>) -> Result<SampledPath> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
    let is_json = file.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    if is_json {
        let p = from_json(&text)?;
        Ok(match norm {
            Some(n) => p.with_norm(n),
            None => p,
        })
    } else {
        from_csv(&text, norm.unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let p = SampledPath::new(vec![0.0, 0.5], vec![vec![1.0, -2.5], vec![0.1, 3.0]], NormKind::L1).unwrap();
        assert_eq!(to_csv(&p), "time,v1,v2\n0,1,-2.5\n0.5,0.1,3\n");
    }

    #[test]
    fn json_layout() {
        let p = SampledPath::scalar(vec![0.0, 1.0], vec![2.0, 3.0]).unwrap().with_norm(NormKind::Supremum);
        let s = serde_json::to_string(&to_json(&p)).unwrap();
        assert_eq!(s, r#"{"times":[0.0,1.0],"values":[[2.0],[3.0]],"norm":"sup"}"#);
    }

    #[test]
    fn malformed_csv() {
        assert!(from_csv("t,v1\n0,1\n", NormKind::L1).is_err());
        assert!(from_csv("time,v1\n0,abc\n", NormKind::L1).is_err());
        assert!(from_csv("time,v1\n1,0\n0,1\n", NormKind::L1).is_err());
    }

    proptest! {
        #[test]
        fn csv_and_json_roundtrip(vals in prop::collection::vec(-1e6f64..1e6, 1..20), dim in 1usize..4) {
            let n = vals.len();
            let mut data = Vec::new();
            for v in &vals { for k in 0..dim { data.push(v * (k as f64 + 1.0) / 3.0); } }
            let times: Vec<f64> = (0..n).map(|i| i as f64 / 7.0).collect();
            let p = SampledPath::from_flat(times, data, dim, NormKind::L1).unwrap();
            prop_assert_eq!(from_csv(&to_csv(&p), NormKind::L1).unwrap(), p.clone());
            prop_assert_eq!(from_json(&to_json(&p).to_string()).unwrap(), p);
        }
    }
}
