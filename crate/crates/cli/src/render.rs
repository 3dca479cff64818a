//! Output formatting shared by the subcommands.

use std::io::Write;

use boomspec_core::scan::{markdown_table, BetaValue, ScanReport};
use boomspec_core::tables::TableReport;
use boomspec_core::{Error, Result};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

fn unsupported<T>(what: &str, fmt: Format) -> Result<T> {
    Err(Error::Domain(format!("{what} has no {fmt:?} rendering; use --format json")))
}

/// A single JSON object; `md` prints it as a two-column table.
pub fn object<W: Write, T: Serialize>(out: &mut W, fmt: Format, v: &T) -> Result<()> {
    let v = serde_json::to_value(v)?;
    match fmt {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &v)?;
            writeln!(out)?;
        }
        Format::Md | Format::Csv => {
            let Value::Object(map) = v else {
                return unsupported("this value", fmt);
            };
            if fmt == Format::Md {
                writeln!(out, "| key | value |\n|---|---|")?;
                for (k, v) in map {
                    writeln!(out, "| {k} | {v} |")?;
                }
            } else {
                let mut w = csv::Writer::from_writer(&mut *out);
                w.write_record(map.keys())?;
                w.write_record(map.values().map(|v| v.to_string()))?;
                w.flush()?;
            }
        }
    }
    Ok(())
}

/// Two integer columns, e.g. a DDT row or a spectrum.
pub fn pairs<W: Write>(
    out: &mut W,
    fmt: Format,
    header: (&str, &str),
    rows: impl Iterator<Item = (u64, u64)>,
) -> Result<()> {
    match fmt {
        Format::Json => {
            let map: serde_json::Map<String, Value> = rows.map(|(k, v)| (k.to_string(), Value::from(v))).collect();
            serde_json::to_writer(&mut *out, &map)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record([header.0, header.1])?;
            for (k, v) in rows {
                w.write_record([k.to_string(), v.to_string()])?;
            }
            w.flush()?;
        }
        Format::Md => {
            writeln!(out, "| {} | {} |\n|---|---|", header.0, header.1)?;
            for (k, v) in rows {
                writeln!(out, "| {k} | {v} |")?;
            }
        }
    }
    Ok(())
}

/// One JSON object per line, or a CSV with the flattened fields.
pub fn records<W: Write, T: Serialize>(out: &mut W, fmt: Format, recs: &[T]) -> Result<()> {
    match fmt {
        Format::Json => {
            for r in recs {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            for r in recs {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Md => return unsupported("this listing", fmt),
    }
    Ok(())
}

pub fn scan<W: Write>(out: &mut W, fmt: Format, report: &ScanReport) -> Result<()> {
    match fmt {
        Format::Json => {
            for r in &report.records {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
            for c in &report.counterexamples {
                serde_json::to_writer(&mut *out, &serde_json::json!({ "counterexample": c }))?;
                writeln!(out)?;
            }
        }
        Format::Md => write!(out, "{}", markdown_table(&report.records))?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "canon_r", "max_delta_nonzero", "beta", "alg_degree", "gcd", "tags"])?;
            for r in &report.records {
                let beta = match r.beta {
                    BetaValue::Exact(b) => b.to_string(),
                    BetaValue::NotComputed => "not-computed".into(),
                };
                let tags: Vec<String> = r.tags.iter().map(|t| t.to_string()).collect();
                w.write_record([
                    r.n.to_string(),
                    r.canon_r.to_string(),
                    r.max_delta_nonzero.to_string(),
                    beta,
                    r.alg_degree.to_string(),
                    r.gcd.to_string(),
                    tags.join(";"),
                ])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

pub fn verify<W: Write>(out: &mut W, fmt: Format, report: &TableReport) -> Result<()> {
    match fmt {
        Format::Json => {
            serde_json::to_writer(&mut *out, report)?;
            writeln!(out)?;
        }
        Format::Md => {
            writeln!(out, "| status | item | source | detail |\n|---|---|---|---|")?;
            for r in &report.rows {
                let status = if r.pass { "PASS" } else { "FAIL" };
                writeln!(out, "| {status} | {} | {} | {} |", r.item, r.source, r.detail)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["n", "status", "item", "source", "detail"])?;
            for r in &report.rows {
                let status = if r.pass { "PASS" } else { "FAIL" };
                w.write_record([&report.n.to_string(), status, &r.item, &r.source, &r.detail])?;
            }
            w.flush()?;
        }
    }
    Ok(())
}
