//! CSV tables with `#` comment headers. Floats are written with 17
//! significant digits so they read back bit-identically.

use std::io::{Read, Write};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { comments: Vec::new(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.headers.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_table<W: Write>(mut out: W, table: &Table) -> Result<(), CliError> {
    for c in &table.comments {
        writeln!(out, "# {c}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.headers)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| format_float(v)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_table<R: Read>(input: R) -> Result<Table, CliError> {
    let mut text = String::new();
    let mut input = input;
    input.read_to_string(&mut text)?;
    let comments = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim_start().to_string())
        .collect();
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = reader.headers()?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .map(|f| f.parse::<f64>().map_err(|e| CliError::Validation(format!("bad number {f:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    Ok(Table { comments, headers, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let mut t = Table::new(&["x", "y"]);
        t.comment("test table");
        for i in 0..50 {
            let x = (i as f64 * 0.37).sin() / 3.0;
            t.rows.push(vec![x, x.exp() * 1e-300, -x * 7e200]);
        }
        t.headers.push("z".into());
        let mut buf = Vec::new();
        write_table(&mut buf, &t).unwrap();
        let back = read_table(buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }
}
