//! Fixed-step RK4 integration shared by the packing and pattern flows.
//!
//! Each flow is a gradient flow of a concave energy V after a coordinate
//! change, so V is recorded along the trajectory. Its increment over a step
//! is the line integral of ∇V along the step chord, evaluated by 3-point
//! Gauss–Legendre quadrature.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// Sign convention for the velocity field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Orientation {
    /// Velocity +(K − K̂) in the energy coordinates: ascent of the concave
    /// energy, which converges to the prescribed curvature.
    Ascent,
    /// Velocity −(K − K̂), the sign as usually displayed for these flows.
    Literal,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ascent => 1.0,
            Orientation::Literal => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FlowOptions {
    pub dt: f64,
    pub steps: usize,
    /// Stop early once ‖K − K̂‖∞ falls to this value.
    pub stop_tol: Option<f64>,
    /// Step halvings attempted when a stage leaves the domain.
    pub max_halvings: usize,
    pub orientation: Orientation,
}

impl Default for FlowOptions {
    fn default() -> Self {
        FlowOptions {
            dt: 0.01,
            steps: 1000,
            stop_tol: None,
            max_halvings: 10,
            orientation: Orientation::Ascent,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowRow {
    pub t: f64,
    pub r: Vec<f64>,
    pub k: Vec<f64>,
    /// ‖K − K̂‖∞.
    pub gradnorm: f64,
    /// Energy relative to the initial state.
    pub lyapunov: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlowTrace {
    pub ids: Vec<String>,
    pub rows: Vec<FlowRow>,
    /// Whether every accepted step increased the energy (up to rounding).
    pub monotone: bool,
    /// Smallest energy increment over an accepted step.
    pub min_increment: f64,
    pub halvings: usize,
}

impl FlowTrace {
    pub fn last(&self) -> &FlowRow {
        self.rows.last().expect("trace has the initial row")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("t");
        for id in &self.ids {
            let _ = write!(s, ",r_{id}");
        }
        for id in &self.ids {
            let _ = write!(s, ",K_{id}");
        }
        s.push_str(",gradnorm\n");
        for row in &self.rows {
            let _ = write!(s, "{}", row.t);
            for x in row.r.iter().chain(row.k.iter()) {
                let _ = write!(s, ",{x}");
            }
            let _ = writeln!(s, ",{}", row.gradnorm);
        }
        s
    }
}

/// A flow in some integration variable x.
pub(crate) trait FlowSystem {
    fn in_domain(&self, x: &[f64]) -> bool;
    /// Velocity dx/dt for the given orientation.
    fn velocity(&self, x: &[f64], orientation: Orientation) -> Result<Vec<f64>>;
    /// Radii and curvature (minus the target) at x.
    fn observe(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)>;
    /// Components of ∇V at x paired against dx, i.e. the terms of dV.
    fn energy_rate_terms(&self, x: &[f64], dx: &[f64]) -> Result<Vec<f64>>;
    fn target(&self) -> &[f64];
}

const GL3: [(f64, f64); 3] = [
    (0.112_701_665_379_258_31, 5.0 / 18.0),
    (0.5, 8.0 / 18.0),
    (0.887_298_334_620_741_7, 5.0 / 18.0),
];

fn axpy(x: &[f64], a: f64, y: &[f64]) -> Vec<f64> {
    x.iter().zip(y).map(|(p, q)| p + a * q).collect()
}

fn rk4_step<S: FlowSystem>(sys: &S, x: &[f64], dt: f64, o: Orientation) -> Option<Vec<f64>> {
    let stage = |y: &[f64]| -> Option<Vec<f64>> {
        if !sys.in_domain(y) {
            return None;
        }
        sys.velocity(y, o).ok()
    };
    let k1 = stage(x)?;
    let k2 = stage(&axpy(x, 0.5 * dt, &k1))?;
    let k3 = stage(&axpy(x, 0.5 * dt, &k2))?;
    let k4 = stage(&axpy(x, dt, &k3))?;
    let next: Vec<f64> = (0..x.len())
        .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    if sys.in_domain(&next) && sys.observe(&next).is_ok() {
        Some(next)
    } else {
        None
    }
}

/// Energy increment along the chord x → y, with a rounding bound.
fn increment<S: FlowSystem>(sys: &S, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let dx: Vec<f64> = y.iter().zip(x).map(|(a, b)| a - b).collect();
    let mut total = 0.0;
    let mut scale = 0.0;
    for (s, w) in GL3 {
        let p = axpy(x, s, &dx);
        let terms = sys.energy_rate_terms(&p, &dx)?;
        total += w * terms.iter().sum::<f64>();
        scale += w * terms.iter().map(|t| t.abs()).sum::<f64>();
    }
    Ok((total, 8.0 * f64::EPSILON * scale))
}

pub(crate) fn run<S: FlowSystem>(
    sys: &S,
    ids: Vec<String>,
    x0: Vec<f64>,
    opts: FlowOptions,
) -> Result<FlowTrace> {
    if !(opts.dt > 0.0 && opts.dt.is_finite()) {
        return Err(Error::Input(format!("time step must be positive, got {}", opts.dt)));
    }
    if !sys.in_domain(&x0) {
        return Err(Error::Input("initial state is outside the domain".into()));
    }
    let row = |t: f64, x: &[f64], v: f64| -> Result<FlowRow> {
        let (r, k) = sys.observe(x)?;
        let gradnorm = k
            .iter()
            .zip(sys.target())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        Ok(FlowRow {
            t,
            r,
            k,
            gradnorm,
            lyapunov: v,
        })
    };
    let mut x = x0;
    let mut t = 0.0;
    let mut v = 0.0;
    let mut rows = vec![row(t, &x, v)?];
    let mut monotone = true;
    let mut min_increment = f64::INFINITY;
    let mut halvings = 0;
    for _ in 0..opts.steps {
        if let Some(tol) = opts.stop_tol {
            if rows.last().expect("non-empty").gradnorm <= tol {
                break;
            }
        }
        // Sub-steps of dt/2^m cover one full step when the domain forces halving.
        let mut advanced = 0.0;
        let mut h = opts.dt;
        let mut m = 0;
        while advanced < opts.dt {
            let h_now = h.min(opts.dt - advanced);
            match rk4_step(sys, &x, h_now, opts.orientation) {
                Some(next) => {
                    let (dv, bound) = increment(sys, &x, &next)?;
                    let dv_oriented = dv * opts.orientation.sign();
                    if dv_oriented < -bound {
                        monotone = false;
                    }
                    min_increment = min_increment.min(dv_oriented);
                    v += dv;
                    x = next;
                    advanced += h_now;
                }
                None => {
                    m += 1;
                    halvings += 1;
                    if m > opts.max_halvings {
                        return Err(Error::DomainExit {
                            time: t + advanced,
                            message: format!("step left the domain at state {x:?}"),
                        });
                    }
                    h *= 0.5;
                }
            }
        }
        t += opts.dt;
        rows.push(row(t, &x, v)?);
    }
    Ok(FlowTrace {
        ids,
        rows,
        monotone,
        min_increment,
        halvings,
    })
}
