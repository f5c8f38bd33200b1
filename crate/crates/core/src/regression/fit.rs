//! Logistic regression by iteratively reweighted least squares.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::{DesignMatrix, RegressionError};

pub const MAX_ITERATIONS: usize = 100;
pub const STEP_TOLERANCE: f64 = 1e-8;
/// Coefficients beyond this magnitude with a non-shrinking step indicate
/// separation.
pub const SEPARATION_BOUND: f64 = 15.0;
const MAX_HALVINGS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub z: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub coefficients: Vec<Coefficient>,
    pub log_likelihood: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Log-likelihood after each accepted step, starting at the initial
    /// point.
    pub log_likelihood_trace: Vec<f64>,
}

impl FitResult {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let width = self.coefficients.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = format!(
            "{:<width$}  {:>10}  {:>10}  {:>9}  {:>10}\n",
            "term", "estimate", "std_error", "z", "p_value"
        );
        for c in &self.coefficients {
            out.push_str(&format!(
                "{:<width$}  {:>10.4}  {:>10.4}  {:>9.3}  {:>10.3e}\n",
                c.name, c.estimate, c.std_error, c.z, c.p_value
            ));
        }
        out.push_str(&format!(
            "log_likelihood {:.4}  iterations {}  converged {}\n",
            self.log_likelihood, self.iterations, self.converged
        ));
        out
    }
}

fn sigmoid(eta: f64) -> f64 {
    if eta >= 0.0 {
        1.0 / (1.0 + (-eta).exp())
    } else {
        let e = eta.exp();
        e / (1.0 + e)
    }
}

/// log(1 + e^x) without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

pub fn log_likelihood(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>) -> f64 {
    let eta = x * beta;
    eta.iter().zip(y.iter()).map(|(&e, &yi)| yi * e - softplus(e)).sum()
}

pub fn gradient(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>) -> DVector<f64> {
    let eta = x * beta;
    let resid = DVector::from_iterator(y.len(), eta.iter().zip(y.iter()).map(|(&e, &yi)| yi - sigmoid(e)));
    x.tr_mul(&resid)
}

/// Fisher information XᵀWX with W = μ(1 − μ).
fn information(x: &DMatrix<f64>, beta: &DVector<f64>) -> DMatrix<f64> {
    let eta = x * beta;
    let p = x.ncols();
    let mut info = DMatrix::zeros(p, p);
    for (i, &e) in eta.iter().enumerate() {
        let mu = sigmoid(e);
        let w = mu * (1.0 - mu);
        let row = x.row(i);
        for a in 0..p {
            let wa = w * row[a];
            if wa == 0.0 {
                continue;
            }
            for b in a..p {
                info[(a, b)] += wa * row[b];
            }
        }
    }
    for a in 0..p {
        for b in 0..a {
            info[(a, b)] = info[(b, a)];
        }
    }
    info
}

fn check_rank(design: &DesignMatrix) -> Result<(), RegressionError> {
    let svd = design.x.clone().svd(false, false);
    let max = svd.singular_values.max();
    let tol = max * 1e-10 * design.x.nrows().max(design.x.ncols()) as f64;
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    if rank < design.x.ncols() {
        return Err(RegressionError::SingularDesign {
            rank,
            columns: design.x.ncols(),
        });
    }
    Ok(())
}

pub fn fit(design: &DesignMatrix) -> Result<FitResult, RegressionError> {
    let (x, y) = (&design.x, &design.y);
    let positives = y.iter().filter(|&&v| v > 0.5).count();
    if positives == 0 || positives == y.len() {
        return Err(RegressionError::DegenerateResponse);
    }
    check_rank(design)?;

    let p = x.ncols();
    let mut beta = DVector::zeros(p);
    let mut ll = log_likelihood(x, y, &beta);
    let mut trace = vec![ll];
    let mut converged = false;
    let mut iterations = 0;
    let mut last_step = f64::INFINITY;

    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let info = information(x, &beta);
        let grad = gradient(x, y, &beta);
        let step = info
            .clone()
            .cholesky()
            .map(|c| c.solve(&grad))
            .or_else(|| info.clone().lu().solve(&grad))
            .ok_or(RegressionError::SingularDesign { rank: p - 1, columns: p })?;

        let mut scale = 1.0;
        let mut candidate = &beta + &step;
        let mut candidate_ll = log_likelihood(x, y, &candidate);
        let mut halvings = 0;
        while candidate_ll < ll && halvings < MAX_HALVINGS {
            scale *= 0.5;
            candidate = &beta + &step * scale;
            candidate_ll = log_likelihood(x, y, &candidate);
            halvings += 1;
        }
        if candidate_ll < ll {
            // no ascent along the Newton direction: already at the optimum
            converged = step.amax() * scale < STEP_TOLERANCE.sqrt();
            break;
        }
        let taken = step.amax() * scale;
        beta = candidate;
        ll = candidate_ll;
        trace.push(ll);

        if let Some(j) = (0..p).find(|&j| beta[j].abs() > SEPARATION_BOUND) {
            if taken >= last_step {
                return Err(RegressionError::SeparationDetected {
                    column: design.columns[j].clone(),
                });
            }
        }
        last_step = taken;
        if taken < STEP_TOLERANCE {
            converged = true;
            break;
        }
    }

    let info = information(x, &beta);
    let cov = info
        .clone()
        .try_inverse()
        .ok_or(RegressionError::SingularDesign { rank: p - 1, columns: p })?;
    let coefficients = (0..p)
        .map(|j| {
            let se = cov[(j, j)].max(0.0).sqrt();
            let z = beta[j] / se;
            Coefficient {
                name: design.columns[j].clone(),
                estimate: beta[j],
                std_error: se,
                z,
                p_value: erfc(z.abs() / std::f64::consts::SQRT_2),
            }
        })
        .collect();
    Ok(FitResult {
        coefficients,
        log_likelihood: ll,
        iterations,
        converged,
        log_likelihood_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn design(rows: &[(f64, f64)], ys: &[f64]) -> DesignMatrix {
        let x = DMatrix::from_fn(rows.len(), 2, |i, j| if j == 0 { rows[i].0 } else { rows[i].1 });
        DesignMatrix {
            columns: vec!["(Intercept)".into(), "x".into()],
            x,
            y: DVector::from_column_slice(ys),
            row_keys: Vec::new(),
        }
    }

    #[test]
    fn degenerate_response() {
        let d = design(&[(1.0, 0.0), (1.0, 1.0)], &[1.0, 1.0]);
        assert!(matches!(fit(&d), Err(RegressionError::DegenerateResponse)));
    }

    #[test]
    fn duplicated_column_is_singular() {
        let d = design(&[(1.0, 1.0), (1.0, 1.0), (1.0, 1.0)], &[1.0, 0.0, 1.0]);
        assert!(matches!(fit(&d), Err(RegressionError::SingularDesign { rank: 1, columns: 2 })));
    }

    #[test]
    fn complete_separation_is_flagged() {
        let rows: Vec<(f64, f64)> = (0..20).map(|i| (1.0, i as f64)).collect();
        let ys: Vec<f64> = (0..20).map(|i| if i < 10 { 0.0 } else { 1.0 }).collect();
        assert!(matches!(
            fit(&design(&rows, &ys)),
            Err(RegressionError::SeparationDetected { .. })
        ));
    }

    #[test]
    fn intercept_only_matches_closed_form() {
        let rows = vec![(1.0, 0.0); 10];
        let ys = [1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0];
        let mut d = design(&rows, &ys);
        d.x = d.x.columns(0, 1).into_owned();
        d.columns.truncate(1);
        let r = fit(&d).unwrap();
        let expected = (0.7f64 / 0.3).ln();
        assert!((r.coefficients[0].estimate - expected).abs() < 1e-10);
        // se = 1 / sqrt(n p (1 - p))
        assert!((r.coefficients[0].std_error - 1.0 / (10.0f64 * 0.21).sqrt()).abs() < 1e-8);
        assert!(r.converged);
    }

    #[test]
    fn softplus_is_stable() {
        assert!((softplus(800.0) - 800.0).abs() < 1e-12);
        assert!(softplus(-800.0) >= 0.0);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
    }
}
