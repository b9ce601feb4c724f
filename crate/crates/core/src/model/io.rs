//! Text formats for datasets and scenarios.
//!
//! Dataset CSV: a header row of variable names, an optional `#rank:` line
//! of comma-separated integers, then one row of 0/1 values per
//! observation. Errors carry 1-based line and column numbers.

use std::io::{Read, Write};
use std::path::Path;

use super::dataset::BinaryDataset;
use crate::error::{Error, Result};

const RANK_PREFIX: &str = "#rank:";

pub fn read_dataset_csv<R: Read>(reader: R) -> Result<BinaryDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();

    let header = match records.next() {
        Some(r) => r?,
        None => return Err(Error::Parse { row: 1, column: 1, message: "empty input".into() }),
    };
    let names: Vec<String> = header.iter().map(str::to_string).collect();
    let n = names.len();
    if n == 0 || names.iter().any(String::is_empty) {
        return Err(Error::Parse { row: 1, column: 1, message: "empty variable name".into() });
    }

    let mut rank: Option<Vec<u32>> = None;
    let mut columns: Vec<Vec<u8>> = vec![Vec::new(); n];
    for rec in records {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let first = rec.get(0).unwrap_or("");
        if rank.is_none() && columns[0].is_empty() && first.starts_with(RANK_PREFIX) {
            let mut fields: Vec<&str> = rec.iter().collect();
            fields[0] = fields[0][RANK_PREFIX.len()..].trim();
            if fields.len() != n {
                return Err(Error::Parse {
                    row: line,
                    column: fields.len().min(n) + 1,
                    message: format!("rank line has {} entries, expected {}", fields.len(), n),
                });
            }
            let parsed = fields
                .iter()
                .enumerate()
                .map(|(j, f)| {
                    f.parse::<u32>().map_err(|_| Error::Parse {
                        row: line,
                        column: j + 1,
                        message: format!("rank {f:?} is not a nonnegative integer"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rank = Some(parsed);
            continue;
        }
        if rec.len() == 1 && first.is_empty() {
            continue;
        }
        if rec.len() != n {
            return Err(Error::Parse {
                row: line,
                column: rec.len().min(n) + 1,
                message: format!("expected {} values, found {}", n, rec.len()),
            });
        }
        for (j, field) in rec.iter().enumerate() {
            let v = match field {
                "0" => 0,
                "1" => 1,
                other => {
                    return Err(Error::Parse {
                        row: line,
                        column: j + 1,
                        message: format!("value {other:?} in column {} is not 0 or 1", names[j]),
                    })
                }
            };
            columns[j].push(v);
        }
    }
    if columns[0].is_empty() {
        return Err(Error::Parse { row: 2, column: 1, message: "no data rows".into() });
    }
    BinaryDataset::from_columns(names, rank.unwrap_or_else(|| vec![0; n]), columns)
}

pub fn write_dataset_csv<W: Write>(data: &BinaryDataset, mut w: W) -> Result<()> {
    writeln!(w, "{}", data.names().join(","))?;
    let ranks: Vec<String> = data.rank().iter().map(u32::to_string).collect();
    writeln!(w, "{}{}", RANK_PREFIX, ranks.join(","))?;
    write_rows(&mut w, (0..data.m()).map(|r| data.row(r)))
}

/// Scenarios as CSV: header of variable names, one 0/1 row per scenario.
pub fn write_scenarios_csv<W: Write>(names: &[String], scenarios: &[crate::Scenario], mut w: W) -> Result<()> {
    writeln!(w, "{}", names.join(","))?;
    write_rows(&mut w, scenarios.iter().map(|s| s.assignment.clone()))
}

fn write_rows<W: Write, I: Iterator<Item = Vec<u8>>>(w: &mut W, rows: I) -> Result<()> {
    let mut line = String::new();
    for row in rows {
        line.clear();
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push(',');
            }
            line.push(if *v == 1 { '1' } else { '0' });
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<BinaryDataset> {
    read_dataset_csv(std::fs::File::open(path)?)
}

pub fn save_dataset(data: &BinaryDataset, path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_dataset_csv(data, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}
