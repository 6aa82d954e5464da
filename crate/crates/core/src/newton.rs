//! Damped Newton iteration for maximizing strictly concave functions.
//!
//! The caller supplies the gradient g and Hessian H of the objective. The
//! direction is d = −H⁻¹g; steps are halved until the iterate stays in the
//! domain and ‖g‖₂ decreases by the Armijo factor (1 − 10⁻⁴ t). If no such
//! step exists the largest in-domain step along which the objective still
//! increases (g(x + t d)·d ≥ 0) is taken instead.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub const MAX_HALVINGS: usize = 60;
const ARMIJO: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    /// Convergence when ‖g‖∞ ≤ tol.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            tol: 1e-12,
            max_iter: 100,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonReport {
    pub x: DVector<f64>,
    pub iterations: usize,
    /// ‖g‖∞ at `x`.
    pub residual: f64,
    /// ‖Δx‖∞ of the last accepted step.
    pub last_step: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FailureKind {
    MaxIterations,
    /// No admissible step; `at_boundary` when every trial left the domain.
    Stalled { at_boundary: bool },
    Singular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NewtonFailure {
    pub kind: FailureKind,
    pub report: NewtonReport,
}

impl NewtonFailure {
    pub fn into_error(self) -> Error {
        Error::Convergence {
            iterations: self.report.iterations,
            residual: self.report.residual,
            last_step: self.report.last_step,
        }
    }
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn direction(g: &DVector<f64>, h: &DMatrix<f64>) -> Option<DVector<f64>> {
    // −H is positive definite for a strictly concave objective.
    let neg = -h.clone();
    if let Some(ch) = neg.cholesky() {
        return Some(ch.solve(g));
    }
    let d = h.clone().lu().solve(g)?;
    Some(-d)
}

/// Maximizes a concave function from `x0`.
///
/// `eval` returns (g, H) or an error, which is treated as leaving the
/// domain; `in_domain` is a cheap pre-check applied before `eval`.
pub fn maximize(
    x0: DVector<f64>,
    mut eval: impl FnMut(&DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>)>,
    in_domain: impl Fn(&DVector<f64>) -> bool,
    opts: NewtonOptions,
) -> std::result::Result<NewtonReport, NewtonFailure> {
    let mut x = x0;
    let (mut g, mut h) = match eval(&x) {
        Ok(v) => v,
        Err(_) => {
            return Err(NewtonFailure {
                kind: FailureKind::Stalled { at_boundary: true },
                report: NewtonReport {
                    residual: f64::INFINITY,
                    x,
                    iterations: 0,
                    last_step: 0.0,
                },
            })
        }
    };
    let mut last_step = 0.0;
    for iter in 0..=opts.max_iter {
        let residual = inf_norm(&g);
        let report = |x: &DVector<f64>, last_step| NewtonReport {
            x: x.clone(),
            iterations: iter,
            residual,
            last_step,
        };
        if residual <= opts.tol {
            return Ok(report(&x, last_step));
        }
        if iter == opts.max_iter {
            return Err(NewtonFailure {
                kind: FailureKind::MaxIterations,
                report: report(&x, last_step),
            });
        }
        let Some(d) = direction(&g, &h) else {
            return Err(NewtonFailure {
                kind: FailureKind::Singular,
                report: report(&x, last_step),
            });
        };
        let merit = g.norm();
        let mut t = 1.0;
        let mut accepted = None;
        let mut fallback = None;
        let mut any_inside = false;
        for _ in 0..=MAX_HALVINGS {
            let trial = &x + t * &d;
            if in_domain(&trial) {
                if let Ok((gt, ht)) = eval(&trial) {
                    any_inside = true;
                    if gt.norm() <= (1.0 - ARMIJO * t) * merit {
                        accepted = Some((trial, gt, ht, t));
                        break;
                    }
                    if fallback.is_none() && gt.dot(&d) >= 0.0 {
                        fallback = Some((trial, gt, ht, t));
                    }
                }
            }
            t *= 0.5;
        }
        let Some((xn, gn, hn, tn)) = accepted.or(fallback) else {
            return Err(NewtonFailure {
                kind: FailureKind::Stalled {
                    at_boundary: !any_inside,
                },
                report: report(&x, last_step),
            });
        };
        last_step = tn * inf_norm(&d);
        x = xn;
        g = gn;
        h = hn;
    }
    unreachable!("loop returns on the final iteration")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_in_one_step() {
        let target = DVector::from_vec(vec![1.0, -2.0]);
        let a = DMatrix::from_row_slice(2, 2, &[-2.0, 0.5, 0.5, -1.0]);
        let rep = maximize(
            DVector::zeros(2),
            |x| Ok((&a * (x - &target), a.clone())),
            |_| true,
            NewtonOptions::default(),
        )
        .unwrap();
        assert!(rep.iterations <= 1);
        assert!((rep.x - target).norm() < 1e-14);
    }

    #[test]
    fn respects_domain() {
        // f(x) = ln x − x/5 on x > 0, maximum at x = 5, start far right.
        let rep = maximize(
            DVector::from_vec(vec![0.01]),
            |x| {
                let v = x[0];
                Ok((
                    DVector::from_vec(vec![1.0 / v - 0.2]),
                    DMatrix::from_element(1, 1, -1.0 / (v * v)),
                ))
            },
            |x| x[0] > 0.0,
            NewtonOptions::default(),
        )
        .unwrap();
        assert!((rep.x[0] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn unbounded_objective_stalls() {
        // f(x) = −e^{−x} has no maximizer; Newton runs off to infinity.
        let r = maximize(
            DVector::from_vec(vec![0.0]),
            |x| {
                let e = (-x[0]).exp();
                Ok((DVector::from_vec(vec![e]), DMatrix::from_element(1, 1, -e)))
            },
            |x| x[0] < 30.0,
            NewtonOptions { tol: 1e-20, max_iter: 200 },
        );
        assert!(r.is_err());
    }
}
