//! JSON and CSV emission. CSV carries the scalar table only: one row per
//! record, parameter columns first, then every scalar output. Floats are
//! written with 17 significant digits so they parse back bit-for-bit.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use crate::config::Format;
use crate::error::{CliError, CliResult};
use crate::record::ResultRecord;

/// `d.dddddddddddddddde±x`: 17 significant digits, `.` decimal point.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn columns(record: &ResultRecord, leading: Option<&str>) -> Vec<(String, String)> {
    let mut cols: Vec<(String, String)> = vec![("experiment".into(), record.experiment.name().into())];
    let params = record.parameters.columns();
    let mut push_param = |name: &str, value: f64| {
        let cell = if name == "theta" { format_float(value) } else { format!("{}", value as u64) };
        cols.push((name.into(), cell));
    };
    if let Some(lead) = leading {
        if let Some(&(n, v)) = params.iter().find(|(n, _)| *n == lead) {
            push_param(n, v);
        }
    }
    for &(n, v) in &params {
        if Some(n) != leading {
            push_param(n, v);
        }
    }
    for (k, v) in &record.outputs.scalars {
        cols.push((k.clone(), format_float(*v)));
    }
    cols
}

/// Scalar table for `records`, which must share one experiment. `leading`
/// names a parameter column to put first (the varied one in a sweep).
pub fn write_csv<W: Write>(records: &[ResultRecord], leading: Option<&str>, writer: W) -> CliResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header: Option<Vec<String>> = None;
    for r in records {
        let cols = columns(r, leading);
        let names: Vec<String> = cols.iter().map(|(n, _)| n.clone()).collect();
        match &header {
            None => {
                w.write_record(&names)?;
                header = Some(names);
            }
            Some(h) if *h != names => {
                return Err(CliError::Invariant("records in one table have different columns".into()));
            }
            Some(_) => {}
        }
        w.write_record(cols.iter().map(|(_, v)| v))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(records: &[ResultRecord], writer: W) -> CliResult<()> {
    let mut writer = writer;
    match records {
        [single] => serde_json::to_writer_pretty(&mut writer, single)?,
        many => serde_json::to_writer_pretty(&mut writer, many)?,
    }
    writeln!(writer)?;
    Ok(())
}

pub fn write_records<W: Write>(records: &[ResultRecord], format: Format, leading: Option<&str>, writer: W) -> CliResult<()> {
    match format {
        Format::Json => write_json(records, writer),
        Format::Csv => write_csv(records, leading, writer),
    }
}

pub fn write_record_file(record: &ResultRecord, format: Format, path: &Path) -> CliResult<()> {
    let file = BufWriter::new(File::create(path)?);
    write_records(std::slice::from_ref(record), format, None, file)
}

/// Read a JSON file holding one record or an array of records.
pub fn read_json_records(path: &Path) -> CliResult<Vec<ResultRecord>> {
    let mut text = String::new();
    File::open(path)?.read_to_string(&mut text)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    Ok(if value.is_array() { serde_json::from_value(value)? } else { vec![serde_json::from_value(value)?] })
}

/// Read a CSV table back as one map per row.
pub fn read_csv_rows(path: &Path) -> CliResult<Vec<BTreeMap<String, String>>> {
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    r.records()
        .map(|row| {
            let row = row?;
            Ok(header.iter().zip(row.iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect())
        })
        .collect()
}
