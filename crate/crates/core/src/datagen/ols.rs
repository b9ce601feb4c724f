use nalgebra::{DMatrix, DVector};

use super::series::RealSeries;
use super::spec::FactorModelSpec;
use crate::error::{Error, Result};
use crate::model::Dag;

/// Relative size below which a diagonal entry of R marks a column as
/// linearly dependent on the columns before it.
const RANK_TOL: f64 = 1e-10;

/// Least-squares fit of `y` on `columns` plus an intercept.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    /// sqrt(RSS / (rows − regressors − 1)).
    pub residual_sd: f64,
}

pub fn ols(y: &[f64], columns: &[&[f64]], names: &[String]) -> Result<OlsFit> {
    let rows = y.len();
    let p = columns.len() + 1;
    if rows <= p {
        return Err(Error::Invalid(format!("{rows} rows cannot fit {p} coefficients")));
    }
    let x = DMatrix::from_fn(rows, p, |r, c| if c == 0 { 1.0 } else { columns[c - 1][r] });
    let qr = x.qr();
    let r = qr.r();
    let scale = (0..p).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    let dependent: Vec<String> = (0..p)
        .filter(|&i| r[(i, i)].abs() <= RANK_TOL * scale.max(1.0))
        .map(|i| if i == 0 { "intercept".to_string() } else { names[i - 1].clone() })
        .collect();
    if !dependent.is_empty() {
        return Err(Error::SingularDesign { columns: dependent });
    }
    let yv = DVector::from_column_slice(y);
    let qty = qr.q().transpose() * &yv;
    let beta = r.solve_upper_triangular(&qty).ok_or_else(|| Error::SingularDesign { columns: names.to_vec() })?;
    let fitted = DMatrix::from_fn(rows, p, |r, c| if c == 0 { 1.0 } else { columns[c - 1][r] }) * &beta;
    let rss: f64 = (yv - fitted).iter().map(|e| e * e).sum();
    Ok(OlsFit {
        intercept: beta[0],
        coefficients: beta.iter().skip(1).copied().collect(),
        residual_sd: (rss / (rows - p) as f64).sqrt(),
    })
}

/// Fit a [`FactorModelSpec`] to aligned daily histories.
///
/// Each return column is regressed on all factor columns lagged by `lag`
/// rows. Factors after the first are regressed on the first factor at the
/// same row, giving the market-driven factor graph.
pub fn estimate_spec(returns: &RealSeries, factors: &RealSeries, lag: usize) -> Result<FactorModelSpec> {
    let t = returns.len();
    let nf = factors.width();
    if factors.len() != t {
        return Err(Error::Invalid(format!("returns have {t} rows but factors have {}", factors.len())));
    }
    if nf == 0 || returns.width() == 0 {
        return Err(Error::Invalid("need at least one factor and one return column".into()));
    }
    if t <= nf + lag + 1 {
        return Err(Error::Invalid(format!(
            "{t} rows are too few for {nf} factors at lag {lag}"
        )));
    }
    let lagged: Vec<&[f64]> = (0..nf).map(|j| &factors.column(j)[..t - lag]).collect();
    let mut stock_betas = Vec::with_capacity(returns.width());
    let mut stock_sigma = Vec::with_capacity(returns.width());
    for i in 0..returns.width() {
        let fit = ols(&returns.column(i)[lag..], &lagged, factors.names())?;
        stock_betas.push(fit.coefficients);
        stock_sigma.push(fit.residual_sd);
    }

    let market = factors.column(0);
    let mut factor_betas = vec![vec![0.0; nf]; nf];
    let mut factor_sigma = vec![0.0; nf];
    let mean = market.iter().sum::<f64>() / t as f64;
    factor_sigma[0] = (market.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1) as f64).sqrt();
    for c in 1..nf {
        let fit = ols(factors.column(c), &[market], &factors.names()[..1])?;
        factor_betas[c][0] = fit.coefficients[0];
        factor_sigma[c] = fit.residual_sd;
    }
    let spec = FactorModelSpec {
        factor_names: factors.names().to_vec(),
        stock_names: returns.names().to_vec(),
        factor_dag: Dag::from_edges(nf, (1..nf).map(|c| (0, c)))?,
        factor_betas,
        factor_sigma,
        stock_betas,
        stock_sigma,
        lag,
    };
    spec.validate()?;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 + 3.0 * v).collect();
        let fit = ols(&y, &[&x], &["x".into()]).unwrap();
        assert!((fit.intercept - 2.0).abs() < 1e-9);
        assert!((fit.coefficients[0] - 3.0).abs() < 1e-9);
        assert!(fit.residual_sd < 1e-9);
    }

    #[test]
    fn collinear_columns_are_named() {
        let x: Vec<f64> = (0..10).map(f64::from).collect();
        let z: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let y = x.clone();
        match ols(&y, &[&x, &z], &["x".into(), "z".into()]) {
            Err(Error::SingularDesign { columns }) => assert_eq!(columns, vec!["z".to_string()]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn too_short_history() {
        let f = RealSeries::new(vec!["a".into(), "b".into()], vec![0, 0], vec![vec![0.0, 1.0, 2.0, 3.0]; 2]).unwrap();
        let r = RealSeries::new(vec!["s".into()], vec![1], vec![vec![0.0, 1.0, 2.0, 3.0]]).unwrap();
        assert!(estimate_spec(&r, &f, 1).is_err());
    }
}
