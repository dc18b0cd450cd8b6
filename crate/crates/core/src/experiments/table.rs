use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SweepRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "experiment,coord1,coord2,coord3,method,mean_nd,std,stderr,R,seconds";

/// One CSV line as read back from disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRecord {
    pub experiment: String,
    pub coord1: Option<f64>,
    pub coord2: Option<f64>,
    pub coord3: Option<f64>,
    pub method: String,
    pub mean_nd: f64,
    pub std: f64,
    pub stderr: f64,
    #[serde(rename = "R")]
    pub r: usize,
    pub seconds: f64,
}

impl From<&SweepRow> for CsvRecord {
    fn from(row: &SweepRow) -> Self {
        CsvRecord {
            experiment: row.experiment.as_str().to_string(),
            coord1: row.coords[0],
            coord2: row.coords[1],
            coord3: row.coords[2],
            method: row.method.as_str().to_string(),
            mean_nd: row.mean_nd,
            std: row.std,
            stderr: row.stderr,
            r: row.realizations,
            seconds: row.seconds,
        }
    }
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for row in rows {
        w.serialize(CsvRecord::from(row)).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Parse(e.to_string()))
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    std::fs::write(path, buf).map_err(|e| Error::io(path, e))
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRecord>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let header: Vec<String> = r
        .headers()
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    if header.join(",") != CSV_HEADER {
        return Err(Error::Parse(format!("{}: unexpected header {header:?}", path.display())));
    }
    r.deserialize()
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::control::Method;
    use crate::experiments::ExperimentKind;

    fn row(c: f64) -> SweepRow {
        SweepRow {
            experiment: ExperimentKind::RhoSweep,
            coords: [Some(c), None, None],
            method: Method::Et,
            mean_nd: 0.25,
            mean_nd_per_node: 0.25,
            std: 0.1,
            stderr: 0.01,
            realizations: 100,
            seconds: 0.0,
            n_d_samples: vec![],
        }
    }

    #[test]
    fn line_counts() {
        let mut buf = Vec::new();
        write_csv(&[row(0.0), row(0.5), row(1.0)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(text.lines().nth(2).unwrap(), "RHO_SWEEP,0.5,,,ET,0.25,0.1,0.01,100,0.0");
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rows.csv");
        let rows = vec![row(0.1), row(1.0 / 3.0)];
        emit_csv(&rows, &path).unwrap();
        let back = read_csv(&path).unwrap();
        let expect: Vec<CsvRecord> = rows.iter().map(CsvRecord::from).collect();
        assert_eq!(back, expect);
        let missing = dir.path().join("nope").join("x.csv");
        let err = emit_csv(&rows, &missing).unwrap_err();
        assert!(err.to_string().contains("nope"));
    }
}
