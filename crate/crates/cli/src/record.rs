use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::CliError;

/// Which part of the pipeline to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, clap::ValueEnum)]
pub enum Mode {
    /// Exhaustive search for the optimal schedule.
    Exact,
    /// Semidefinite relaxation only; reports the lower bound.
    Sdp,
    /// Relaxation followed by randomized rounding.
    #[value(name = "sdp+round")]
    SdpRound,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sdp => "sdp",
            Mode::SdpRound => "sdp+round",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Mode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// One solve of one instance, as written to the benchmark CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "T")]
    pub horizon: usize,
    pub d: usize,
    pub seed: Option<u64>,
    pub mode: Mode,
    pub wall_s: f64,
    pub sdp_bound: Option<f64>,
    pub oracle: Option<f64>,
    pub best_rounded: Option<u64>,
    pub status: String,
}

/// Column names of the run CSV, in order.
pub const CSV_HEADER: &str = "m,n,T,d,seed,mode,wall_s,sdp_bound,oracle,best_rounded,status";

/// Writes the header followed by one row per record.
pub fn write_records<W: Write>(out: W, records: &[RunRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    if records.is_empty() {
        w.write_record(CSV_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| CliError::Io { path: "<output>".into(), source: e })?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rec = RunRecord {
            m: 4,
            n: 2,
            horizon: 4,
            d: 1,
            seed: None,
            mode: Mode::SdpRound,
            wall_s: 0.5,
            sdp_bound: Some(1.0),
            oracle: None,
            best_rounded: Some(1),
            status: "OPTIMAL".into(),
        };
        let mut buf = Vec::new();
        write_records(&mut buf, &[rec]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        assert_eq!(lines.next(), Some("4,2,4,1,,sdp+round,0.5,1.0,,1,OPTIMAL"));
    }

    #[test]
    fn empty_table_keeps_header() {
        let mut buf = Vec::new();
        write_records(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }
}
