//! Result rows as CSV: scenario, method, depth, seed, accuracy,
//! adjustment_degree, wall_seconds, config_hash.

use std::fs::OpenOptions;
use std::io::{BufRead, Write};
use std::path::Path;

use super::HarnessError;
use crate::evalkit::EvalReport;

pub const CSV_HEADER: &str = "scenario,method,depth,seed,accuracy,adjustment_degree,wall_seconds,config_hash";

fn check_field(s: &str) -> Result<(), HarnessError> {
    if s.contains([',', '\n', '\r', '"']) {
        return Err(HarnessError::Config(format!("field '{s}' cannot be written to CSV")));
    }
    Ok(())
}

pub fn csv_row(r: &EvalReport) -> Result<String, HarnessError> {
    check_field(&r.scenario)?;
    check_field(&r.method)?;
    check_field(&r.config_hash)?;
    let degree = r.adjustment_degree.map(|d| format!("{d:?}")).unwrap_or_default();
    Ok(format!(
        "{},{},{},{},{:?},{},{:?},{}",
        r.scenario, r.method, r.depth, r.seed, r.accuracy, degree, r.wall_seconds, r.config_hash
    ))
}

pub fn write_csv<W: Write>(mut w: W, reports: &[EvalReport]) -> Result<(), HarnessError> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in reports {
        writeln!(w, "{}", csv_row(r)?)?;
    }
    Ok(())
}

/// Appends rows, writing the header first if the file is new or empty.
pub fn append_csv(path: &Path, reports: &[EvalReport]) -> Result<(), HarnessError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)?;
    }
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    if f.metadata()?.len() == 0 {
        writeln!(f, "{CSV_HEADER}")?;
    }
    for r in reports {
        writeln!(f, "{}", csv_row(r)?)?;
    }
    Ok(())
}

fn parse_err(line: usize, what: &str) -> HarnessError {
    HarnessError::Csv(format!("line {line}: {what}"))
}

pub fn read_csv<R: BufRead>(r: R) -> Result<Vec<EvalReport>, HarnessError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        if i == 0 {
            if line.trim() != CSV_HEADER {
                return Err(parse_err(n, "unexpected header"));
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(parse_err(n, "expected 8 fields"));
        }
        let num = |s: &str, what: &str| s.parse::<f64>().map_err(|_| parse_err(n, what));
        out.push(EvalReport {
            scenario: f[0].to_string(),
            method: f[1].to_string(),
            depth: f[2].parse().map_err(|_| parse_err(n, "depth"))?,
            seed: f[3].parse().map_err(|_| parse_err(n, "seed"))?,
            accuracy: num(f[4], "accuracy")?,
            adjustment_degree: if f[5].is_empty() {
                None
            } else {
                Some(num(f[5], "adjustment_degree")?)
            },
            wall_seconds: num(f[6], "wall_seconds")?,
            config_hash: f[7].to_string(),
        });
    }
    Ok(out)
}

/// CSV text with the timing column blanked, for reproducibility checks.
pub fn without_timing(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            if f.len() == 8 {
                f[6] = "";
            }
            f.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(method: &str, degree: Option<f64>) -> EvalReport {
        EvalReport {
            method: method.into(),
            scenario: "s".into(),
            depth: 3,
            accuracy: 0.1 + 0.2,
            adjustment_degree: degree,
            seed: u64::MAX,
            config_hash: "abc".into(),
            wall_seconds: 1.0 / 3.0,
        }
    }

    #[test]
    fn round_trip_is_lossless() {
        let rows = vec![report("joint", None), report("separate", Some(37.5))];
        let mut buf = Vec::new();
        write_csv(&mut buf, &rows).unwrap();
        assert_eq!(read_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn append_writes_header_once() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out/r.csv");
        append_csv(&path, &[report("joint", None)]).unwrap();
        append_csv(&path, &[report("concat", Some(1.0))]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("scenario,").count(), 1);
        assert_eq!(read_csv(text.as_bytes()).unwrap().len(), 2);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_csv("nope\n".as_bytes()).is_err());
        assert!(read_csv(format!("{CSV_HEADER}\na,b\n").as_bytes()).is_err());
        let mut bad = report("joint", None);
        bad.scenario = "a,b".into();
        assert!(csv_row(&bad).is_err());
    }

    #[test]
    fn timing_is_blanked() {
        let mut a = report("joint", None);
        let mut b = a.clone();
        a.wall_seconds = 1.0;
        b.wall_seconds = 2.0;
        let (mut x, mut y) = (Vec::new(), Vec::new());
        write_csv(&mut x, &[a]).unwrap();
        write_csv(&mut y, &[b]).unwrap();
        let (x, y) = (String::from_utf8(x).unwrap(), String::from_utf8(y).unwrap());
        assert_ne!(x, y);
        assert_eq!(without_timing(&x), without_timing(&y));
    }
}
