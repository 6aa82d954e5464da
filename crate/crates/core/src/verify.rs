//! Seeded consistency checks of the triangle laws.
//!
//! For every requested type, random angle triples are drawn, solved with the
//! uniform laws and compared against the per-type tables, the determinant
//! and sine-law identities, and finite-difference Jacobians. The report keeps
//! the measured maxima so regressions stay visible.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::Serialize;

use crate::appendix;
use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::trig::{law_angles_from_lengths, law_length_from_angles, rho, rho_prime, tau, tau_prime, GeneralizedTriangle, TriangleType, VertexType};

/// Samples with some |l| outside this band are redrawn.
pub const LENGTH_BAND: (f64, f64) = (0.05, 3.0);
const MAX_DRAWS_PER_SAMPLE: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct LawSuiteOptions {
    pub types: Vec<TriangleType>,
    pub samples: usize,
    /// Samples per type for the finite-difference Jacobians.
    pub fd_samples: usize,
    pub seed: u64,
    /// Tolerance for the exact identities.
    pub tol: f64,
    pub fd_step: f64,
    /// Tolerance for finite-difference comparisons.
    pub fd_tol: f64,
}

impl Default for LawSuiteOptions {
    fn default() -> Self {
        LawSuiteOptions {
            types: TriangleType::representatives().to_vec(),
            samples: 1000,
            fd_samples: 200,
            seed: 7,
            tol: 1e-9,
            fd_step: 1e-6,
            fd_tol: 1e-5,
        }
    }
}

/// Maximum errors for one triangle type.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypeReport {
    pub ttype: String,
    pub samples: usize,
    pub redraws: usize,
    /// Relative error, uniform vs tabulated lengths from angles.
    pub table_lengths: f64,
    /// Relative error, uniform vs tabulated angles from lengths.
    pub table_angles: f64,
    /// Relative error of angles → lengths → angles.
    pub round_trip: f64,
    /// |det G_l − (−(τ τ ρ)²)|, over all three index choices.
    pub det_lengths: f64,
    pub det_angles: f64,
    /// ‖M G_l · M G_θ − I‖∞.
    pub jacobian_product: f64,
    /// (max − min)/max of the three sine-law ratios.
    pub sine_spread: f64,
    /// |τ'² − τ² − s|.
    pub tau_identity: f64,
    /// |ρ'² + ερ² − 1|.
    pub rho_identity: f64,
    pub fd_samples: usize,
    /// Max entry error of M G_l against central differences, relative to the matrix max.
    pub fd_dl_dtheta: f64,
    pub fd_dtheta_dl: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckSummary {
    pub name: String,
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawReport {
    pub seed: u64,
    pub samples: usize,
    pub fd_samples: usize,
    pub tol: f64,
    pub fd_tol: f64,
    pub pass: bool,
    pub checks: Vec<CheckSummary>,
    pub failures: Vec<String>,
    pub types: Vec<TypeReport>,
}

impl LawReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn sample_angle(rng: &mut SplitMix64, eps: VertexType) -> f64 {
    match eps {
        VertexType::Interior => rng.uniform(0.05, PI - 0.05),
        VertexType::Ideal => rng.uniform(0.1, 4.0),
        VertexType::Hyperideal => rng.uniform(0.1, 3.0),
    }
}

/// A random triangle of type `ttype` with every |l| inside [`LENGTH_BAND`].
pub fn sample_triangle(rng: &mut SplitMix64, ttype: TriangleType) -> Result<(GeneralizedTriangle, usize)> {
    for draws in 0..MAX_DRAWS_PER_SAMPLE {
        let angles = [0, 1, 2].map(|i| sample_angle(rng, ttype.vertex(i)));
        let Ok(lengths) = law_length_from_angles(ttype, angles) else {
            continue;
        };
        if lengths
            .iter()
            .all(|l| (LENGTH_BAND.0..=LENGTH_BAND.1).contains(&l.abs()))
        {
            return Ok((GeneralizedTriangle { ttype, angles, lengths }, draws));
        }
    }
    Err(Error::Input(format!("no admissible sample of type {ttype}")))
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

fn max_rel3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|i| rel(a[i], b[i])).fold(0.0, f64::max)
}

fn fd_jacobian(f: impl Fn([f64; 3]) -> Result<[f64; 3]>, x: [f64; 3], step: f64) -> Result<Matrix3<f64>> {
    let mut m = Matrix3::zeros();
    for j in 0..3 {
        let mut p = x;
        let mut q = x;
        p[j] += step;
        q[j] -= step;
        let (fp, fq) = (f(p)?, f(q)?);
        for i in 0..3 {
            m[(i, j)] = (fp[i] - fq[i]) / (2.0 * step);
        }
    }
    Ok(m)
}

fn scaled_error(analytic: &Matrix3<f64>, fd: &Matrix3<f64>) -> f64 {
    (analytic - fd).amax() / analytic.amax()
}

fn check_type(ttype: TriangleType, stream: u64, opts: &LawSuiteOptions) -> Result<TypeReport> {
    let mut rng = SplitMix64::derived(opts.seed, stream);
    let mut r = TypeReport {
        ttype: ttype.to_string(),
        samples: opts.samples,
        redraws: 0,
        table_lengths: 0.0,
        table_angles: 0.0,
        round_trip: 0.0,
        det_lengths: 0.0,
        det_angles: 0.0,
        jacobian_product: 0.0,
        sine_spread: 0.0,
        tau_identity: 0.0,
        rho_identity: 0.0,
        fd_samples: opts.fd_samples.min(opts.samples),
        fd_dl_dtheta: 0.0,
        fd_dtheta_dl: 0.0,
    };
    for n in 0..opts.samples {
        let (tri, redraws) = sample_triangle(&mut rng, ttype)?;
        r.redraws += redraws;
        let (angles, lengths) = (tri.angles, tri.lengths);

        r.table_lengths = r.table_lengths.max(max_rel3(&lengths, &appendix::lengths_from_angles(ttype, angles)?));
        let back = law_angles_from_lengths(ttype, lengths)?;
        r.round_trip = r.round_trip.max(max_rel3(&back, &angles));
        r.table_angles = r.table_angles.max(max_rel3(&back, &appendix::angles_from_lengths(ttype, lengths)?));

        let (gl, ga) = (tri.gram_lengths().determinant(), tri.gram_angles().determinant());
        for i in 0..3 {
            r.det_lengths = r.det_lengths.max((gl - tri.det_lengths_closed_form(i)).abs());
            r.det_angles = r.det_angles.max((ga - tri.det_angles_closed_form(i)).abs());
        }
        let dl = tri.jacobian_dl_dtheta()?;
        let dt = tri.jacobian_dtheta_dl()?;
        r.jacobian_product = r.jacobian_product.max((dl * dt - Matrix3::identity()).amax());

        let s = tri.sine_ratios();
        let (lo, hi) = s.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        r.sine_spread = r.sine_spread.max((hi - lo) / hi);

        for i in 0..3 {
            let (sg, l) = (ttype.edge_sign(i), lengths[i]);
            let ti = tau_prime(sg, l).powi(2) - tau(sg, l).powi(2) - f64::from(sg);
            r.tau_identity = r.tau_identity.max(ti.abs());
            let (e, a) = (ttype.vertex(i), angles[i]);
            let ri = rho_prime(e, a).powi(2) + f64::from(e.eps()) * rho(e, a).powi(2) - 1.0;
            r.rho_identity = r.rho_identity.max(ri.abs());
        }

        if n < r.fd_samples {
            let fd = fd_jacobian(|a| law_length_from_angles(ttype, a), angles, opts.fd_step)?;
            r.fd_dl_dtheta = r.fd_dl_dtheta.max(scaled_error(&dl, &fd));
            let fd = fd_jacobian(|l| law_angles_from_lengths(ttype, l), lengths, opts.fd_step)?;
            r.fd_dtheta_dl = r.fd_dtheta_dl.max(scaled_error(&dt, &fd));
        }
    }
    Ok(r)
}

type Field = fn(&TypeReport) -> f64;

const IDENTITY_CHECKS: [(&str, Field); 9] = [
    ("table_lengths", |r| r.table_lengths),
    ("table_angles", |r| r.table_angles),
    ("round_trip", |r| r.round_trip),
    ("det_lengths", |r| r.det_lengths),
    ("det_angles", |r| r.det_angles),
    ("jacobian_product", |r| r.jacobian_product),
    ("sine_spread", |r| r.sine_spread),
    ("tau_identity", |r| r.tau_identity),
    ("rho_identity", |r| r.rho_identity),
];

const FD_CHECKS: [(&str, Field); 2] = [("fd_dl_dtheta", |r| r.fd_dl_dtheta), ("fd_dtheta_dl", |r| r.fd_dtheta_dl)];

/// Runs every check on every requested type. Each type draws from its own
/// stream, so a type's numbers do not depend on which others are requested.
pub fn verify_laws(opts: &LawSuiteOptions) -> Result<LawReport> {
    if opts.samples == 0 {
        return Err(Error::Input("at least one sample is required".into()));
    }
    let all = TriangleType::all_ordered();
    let mut types = Vec::with_capacity(opts.types.len());
    for &t in &opts.types {
        let stream = all.iter().position(|&x| x == t).expect("ordered types are complete") as u64;
        types.push(check_type(t, stream, opts)?);
    }
    let mut checks = Vec::new();
    let mut failures = Vec::new();
    let tagged = IDENTITY_CHECKS
        .iter()
        .map(|c| (c, opts.tol))
        .chain(FD_CHECKS.iter().map(|c| (c, opts.fd_tol)));
    for ((name, field), tol) in tagged {
        let max_error = types.iter().map(field).fold(0.0, f64::max);
        for t in &types {
            if !(field(t) <= tol) {
                failures.push(format!("{name} {}: {:e} > {tol:e}", t.ttype, field(t)));
            }
        }
        checks.push(CheckSummary {
            name: name.to_string(),
            max_error,
            tolerance: tol,
            pass: max_error <= tol,
        });
    }
    Ok(LawReport {
        seed: opts.seed,
        samples: opts.samples,
        fd_samples: opts.fd_samples.min(opts.samples),
        tol: opts.tol,
        fd_tol: opts.fd_tol,
        pass: failures.is_empty(),
        checks,
        failures,
        types,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_sample_report() {
        let opts = LawSuiteOptions {
            types: vec![TriangleType::from_eps([1, 1, 1]).unwrap()],
            samples: 1,
            seed: 1,
            ..Default::default()
        };
        let rep = verify_laws(&opts).unwrap();
        assert!(rep.types[0].det_lengths <= 1e-9);
        assert!(rep.pass, "{:?}", rep.failures);
    }

    #[test]
    fn impossible_tolerance_fails() {
        let opts = LawSuiteOptions {
            samples: 20,
            tol: 1e-30,
            ..Default::default()
        };
        let rep = verify_laws(&opts).unwrap();
        assert!(!rep.pass && !rep.failures.is_empty());
    }
}
