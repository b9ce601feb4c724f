use crate::error::{Error, Result};
use crate::model::BinaryDataset;

/// Fraction of rows where variable `i` is 1.
pub fn empirical_marginal(data: &BinaryDataset, i: usize) -> Result<f64> {
    data.check_index(i)?;
    Ok(ones(data.column(i)) as f64 / data.m() as f64)
}

/// P̂(v = 1 | u = u_value), unsmoothed.
pub fn empirical_conditional(data: &BinaryDataset, v: usize, u: usize, u_value: u8) -> Result<f64> {
    data.check_index(v)?;
    data.check_index(u)?;
    if u == v {
        return Err(Error::Invalid(format!("conditioning variable {u} equals target")));
    }
    let t = PairCounts::new(data.column(u), data.column(v));
    let (hits, total) = if u_value == 1 { (t.n11, t.n1x()) } else { (t.n01, t.n0x()) };
    if total == 0 {
        return Err(Error::EmptyStratum { variable: u, value: u_value });
    }
    Ok(hits as f64 / total as f64)
}

pub(crate) fn ones(col: &[u8]) -> usize {
    col.iter().map(|&x| x as usize).sum()
}

/// 2×2 counts of (a, b): `nab` counts rows with a = `a`, b = `b`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PairCounts {
    pub n00: u64,
    pub n01: u64,
    pub n10: u64,
    pub n11: u64,
}

impl PairCounts {
    pub fn new(a: &[u8], b: &[u8]) -> Self {
        let mut c = [0u64; 4];
        for (&x, &y) in a.iter().zip(b) {
            c[((x << 1) | y) as usize] += 1;
        }
        Self {
            n00: c[0],
            n01: c[1],
            n10: c[2],
            n11: c[3],
        }
    }

    pub fn n0x(&self) -> u64 {
        self.n00 + self.n01
    }

    pub fn n1x(&self) -> u64 {
        self.n10 + self.n11
    }

    /// Whether P(b=1 | a=1) > P(b=1 | a=0), compared exactly. Both strata
    /// must be nonempty.
    pub fn raises(&self) -> bool {
        let (num, _) = self.margin();
        num > 0
    }

    /// P(b|a) − P(b|¬a) as an exact fraction (numerator, denominator).
    pub fn margin(&self) -> (i128, i128) {
        let n1 = self.n1x() as i128;
        let n0 = self.n0x() as i128;
        (self.n11 as i128 * n0 - self.n01 as i128 * n1, n1 * n0)
    }
}
