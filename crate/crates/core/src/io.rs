//! CSV ingestion for dyad and ordering files.
//!
//! Dyad files carry a header `node_i,node_j,y,<regressor names...>`;
//! ordering files carry `node,order_value`. Errors report 1-based file lines.

use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::dataset::DyadRow;
use crate::error::{DyadError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DyadTable {
    pub regressor_names: Vec<String>,
    pub rows: Vec<DyadRow>,
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| DyadError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(input)
}

fn parse_err(source: &str, line: usize, msg: impl Into<String>) -> DyadError {
    DyadError::Parse {
        path: source.to_string(),
        line,
        msg: msg.into(),
    }
}

fn number(source: &str, line: usize, field: &str, what: &str) -> Result<f64> {
    let v: f64 = field
        .parse()
        .map_err(|_| parse_err(source, line, format!("{what}: `{field}` is not a number")))?;
    if !v.is_finite() {
        return Err(parse_err(
            source,
            line,
            format!("{what}: `{field}` is not finite"),
        ));
    }
    Ok(v)
}

pub fn read_dyad_csv(path: &Path) -> Result<DyadTable> {
    parse_dyad_csv(open(path)?, &path.display().to_string())
}

pub fn parse_dyad_csv<R: Read>(input: R, source: &str) -> Result<DyadTable> {
    let mut rdr = reader(input);
    let header = rdr
        .headers()
        .map_err(|e| parse_err(source, 1, e.to_string()))?
        .clone();
    if header.len() < 3 {
        return Err(parse_err(
            source,
            1,
            "header must be node_i,node_j,y followed by regressor columns",
        ));
    }
    let regressor_names: Vec<String> = header.iter().skip(3).map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(source, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != header.len() {
            return Err(parse_err(
                source,
                line,
                format!("expected {} fields, found {}", header.len(), rec.len()),
            ));
        }
        let y = number(source, line, &rec[2], "y")?;
        let x = (3..rec.len())
            .map(|c| number(source, line, &rec[c], &header[c]))
            .collect::<Result<Vec<_>>>()?;
        rows.push(DyadRow {
            node_i: rec[0].to_string(),
            node_j: rec[1].to_string(),
            y,
            x,
        });
    }
    Ok(DyadTable {
        regressor_names,
        rows,
    })
}

pub fn read_order_csv(path: &Path) -> Result<Vec<(String, f64)>> {
    parse_order_csv(open(path)?, &path.display().to_string())
}

pub fn parse_order_csv<R: Read>(input: R, source: &str) -> Result<Vec<(String, f64)>> {
    let mut rdr = reader(input);
    let header = rdr
        .headers()
        .map_err(|e| parse_err(source, 1, e.to_string()))?
        .clone();
    if header.len() != 2 {
        return Err(parse_err(source, 1, "header must be node,order_value"));
    }
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(source, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != 2 {
            return Err(parse_err(
                source,
                line,
                format!("expected 2 fields, found {}", rec.len()),
            ));
        }
        out.push((
            rec[0].to_string(),
            number(source, line, &rec[1], "order_value")?,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_dyads() {
        let text = "node_i,node_j,y,dist,fta\nA,B,1.5,2,0\nB,C,-0.5,3,1\n";
        let t = parse_dyad_csv(text.as_bytes(), "d.csv").unwrap();
        assert_eq!(t.regressor_names, ["dist", "fta"]);
        assert_eq!(t.rows.len(), 2);
        assert_eq!(t.rows[1].x, [3.0, 1.0]);
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "node_i,node_j,y,x1\nA,B,1,2\nA,C,oops,3\n";
        let err = parse_dyad_csv(text.as_bytes(), "d.csv").unwrap_err();
        match err {
            DyadError::Parse { line, path, .. } => {
                assert_eq!(line, 3);
                assert_eq!(path, "d.csv");
            }
            other => panic!("unexpected {other:?}"),
        }
        let text = "node_i,node_j,y,x1\nA,B,1\n";
        assert!(matches!(
            parse_dyad_csv(text.as_bytes(), "d.csv"),
            Err(DyadError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn parses_ordering() {
        let text = "node,order_value\nA,2.0\nB, 1\n";
        let o = parse_order_csv(text.as_bytes(), "o.csv").unwrap();
        assert_eq!(o, [("A".to_string(), 2.0), ("B".to_string(), 1.0)]);
        let bad = "node,order_value\nA,NaN\n";
        assert!(parse_order_csv(bad.as_bytes(), "o.csv").is_err());
    }
}
