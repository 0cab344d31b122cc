//! CSV and JSON serialization of experiment output.
//!
//! CSV columns: `n,T,seed,index,a_1..a_n,g,f,ratio_lower,ratio_upper,
//! ratio_lower_exact,ratio_upper_exact`. Ratios appear twice: as decimals with
//! 12 significant digits and as exact `p/q` strings.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::SampleRecord;
use crate::model::KnapsackInstance;
use crate::rational::{parse_rational, to_decimal};

pub const DECIMAL_DIGITS: u32 = 12;

pub fn csv_header(n: usize) -> Vec<String> {
    let mut h: Vec<String> = ["n", "T", "seed", "index"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    h.extend((1..=n).map(|i| format!("a_{i}")));
    h.extend(
        [
            "g",
            "f",
            "ratio_lower",
            "ratio_upper",
            "ratio_lower_exact",
            "ratio_upper_exact",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    h
}

fn csv_row(r: &SampleRecord) -> Vec<String> {
    let mut row = vec![
        r.n.to_string(),
        r.t.to_string(),
        r.seed.to_string(),
        r.index.to_string(),
    ];
    row.extend(r.a.entries().iter().map(u64::to_string));
    row.push(r.g.to_string());
    row.push(r.f.to_string());
    row.push(to_decimal(&r.ratio_lower, DECIMAL_DIGITS));
    row.push(to_decimal(&r.ratio_upper, DECIMAL_DIGITS));
    row.push(r.ratio_lower.to_string());
    row.push(r.ratio_upper.to_string());
    row
}

/// Writes the header for dimension `n`, then one row per record.
pub fn write_records_csv<W: Write>(out: W, n: usize, records: &[SampleRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(csv_header(n))?;
    for r in records {
        if r.n != n {
            return Err(Error::LengthMismatch {
                expected: n,
                got: r.n,
            });
        }
        w.write_record(csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn records_csv_string(n: usize, records: &[SampleRecord]) -> Result<String> {
    let mut buf = Vec::new();
    write_records_csv(&mut buf, n, records)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

fn field<T: std::str::FromStr>(row: &csv::StringRecord, i: usize) -> Result<T> {
    row.get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::InvalidParameter(format!("bad CSV field {i}: {:?}", row.get(i))))
}

/// Parses CSV produced by `write_records_csv`, reading the exact ratio columns.
pub fn read_records_csv<R: Read>(input: R) -> Result<Vec<SampleRecord>> {
    let mut rd = csv::Reader::from_reader(input);
    let width = rd.headers()?.len();
    if width < 12 {
        return Err(Error::InvalidParameter("CSV header too short".into()));
    }
    let n = width - 10;
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row?;
        let a: Vec<u64> = (4..4 + n).map(|i| field(&row, i)).collect::<Result<_>>()?;
        let exact = |i: usize| parse_rational(row.get(i).unwrap_or(""));
        out.push(SampleRecord {
            n: field(&row, 0)?,
            t: field(&row, 1)?,
            seed: field(&row, 2)?,
            index: field(&row, 3)?,
            a: KnapsackInstance::from_entries(a)?,
            g: field(&row, 4 + n)?,
            f: field(&row, 5 + n)?,
            ratio_lower: exact(8 + n)?,
            ratio_upper: exact(9 + n)?,
        });
    }
    Ok(out)
}

/// Pretty JSON with exact values as `"p/q"` strings.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}
