use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::BinaryDataset;

/// A T × d table of real values, stored by column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealSeries {
    names: Vec<String>,
    /// Temporal rank used when the series is binarized.
    rank: Vec<u32>,
    columns: Vec<Vec<f64>>,
}

impl RealSeries {
    pub fn new(names: Vec<String>, rank: Vec<u32>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != columns.len() || rank.len() != columns.len() {
            return Err(Error::Invalid("series names, ranks and columns differ in length".into()));
        }
        let t = columns.first().map_or(0, Vec::len);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != t {
                return Err(Error::Invalid(format!("column {name} has {} rows, expected {t}", col.len())));
            }
            if let Some(i) = col.iter().position(|x| !x.is_finite()) {
                return Err(Error::Invalid(format!("column {name} row {i} is not finite")));
            }
        }
        Ok(Self { names, rank, columns })
    }

    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rank(&self) -> &[u32] {
        &self.rank
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.columns[j]
    }

    pub fn column_by_name(&self, name: &str) -> Option<&[f64]> {
        self.names.iter().position(|n| n == name).map(|j| self.column(j))
    }

    /// Columns of `self` followed by those of `other`.
    pub fn join(mut self, other: RealSeries) -> Result<Self> {
        if !self.is_empty() && !other.is_empty() && self.len() != other.len() {
            return Err(Error::Invalid("series lengths differ".into()));
        }
        self.names.extend(other.names);
        self.rank.extend(other.rank);
        self.columns.extend(other.columns);
        Self::new(self.names, self.rank, self.columns)
    }

    pub fn with_rank(mut self, rank: u32) -> Self {
        self.rank = vec![rank; self.width()];
        self
    }
}

/// Read a numeric CSV with a header row. Columns named `date` (any case)
/// are skipped; every other cell must parse as a finite number. All
/// ranks start at zero.
pub fn read_series_csv<R: Read>(reader: R) -> Result<RealSeries> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let header = rdr.headers()?.clone();
    let keep: Vec<usize> = (0..header.len())
        .filter(|&j| !header[j].eq_ignore_ascii_case("date"))
        .collect();
    let names: Vec<String> = keep.iter().map(|&j| header[j].to_string()).collect();
    let mut columns = vec![Vec::new(); keep.len()];
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        for (k, &j) in keep.iter().enumerate() {
            let field = rec.get(j).unwrap_or("");
            let x: f64 = field.parse().map_err(|_| Error::Parse {
                row: line,
                column: j + 1,
                message: format!("{field:?} is not a number"),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    row: line,
                    column: j + 1,
                    message: format!("{field:?} is not finite"),
                });
            }
            columns[k].push(x);
        }
    }
    let n = names.len();
    RealSeries::new(names, vec![0; n], columns)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdMode {
    /// 1 iff the value is strictly positive.
    Zero,
    /// 1 iff the value exceeds its column median.
    #[default]
    Median,
}

/// Threshold each column into up (1) / down (0). Ranks carry over from
/// the series.
pub fn binarize(series: &RealSeries, mode: ThresholdMode) -> Result<BinaryDataset> {
    let columns = series
        .columns
        .iter()
        .map(|col| {
            let cut = match mode {
                ThresholdMode::Zero => 0.0,
                ThresholdMode::Median => median(col),
            };
            col.iter().map(|&x| u8::from(x > cut)).collect()
        })
        .collect();
    BinaryDataset::from_columns(series.names.clone(), series.rank.clone(), columns)
}

fn median(col: &[f64]) -> f64 {
    let mut v = col.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}
