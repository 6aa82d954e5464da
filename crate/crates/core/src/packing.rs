//! Generalized circle packings of type (ε, ε, δ).
//!
//! Each triangle (v_0, v_1, v_2) of the surface is split into three SAS
//! triangles of type (ε, ε, δ) meeting at a type-δ centre: the one over side
//! k has sides r(v_i), r(v_j) with included angle Φ(e_k). Their third sides
//! are the edge lengths, which define a type (ε, ε, ε) triangle whose angles
//! sum to the curvature K̃ at each vertex.
//!
//! In u-coordinates (du = dr / τ_{εδ}(r)) the curvature is the gradient of a
//! strictly concave energy, so prescribed curvature is a concave maximization.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3};

use crate::complex::TriangulatedSurface;
use crate::coords;
use crate::error::{Error, Result};
use crate::flow::{self, FlowOptions, FlowSystem, FlowTrace, Orientation};
use crate::newton::{self, FailureKind, NewtonOptions};
use crate::trig::{law_angles_from_lengths, law_sas, rho, rho_prime, tau, GeneralizedTriangle, SasSolution, TriangleType, VertexType};

#[derive(Clone, Debug, PartialEq)]
pub struct PackingConfig {
    pub eps: VertexType,
    pub delta: VertexType,
    /// Weight Φ per edge, indexed like the surface's edges.
    pub phi: Vec<f64>,
}

impl PackingConfig {
    pub fn new(surface: &TriangulatedSurface, eps: VertexType, delta: VertexType, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != surface.edge_count() {
            return Err(Error::Input(format!(
                "{} weights for {} edges",
                phi.len(),
                surface.edge_count()
            )));
        }
        for (e, &p) in phi.iter().enumerate() {
            if !coords::in_angle_interval(delta, p, true) {
                return Err(Error::Input(format!(
                    "weight {p} on edge {} outside I_{delta}",
                    surface.edge_ids()[e]
                )));
            }
        }
        Ok(PackingConfig { eps, delta, phi })
    }

    pub fn uniform(surface: &TriangulatedSurface, eps: VertexType, delta: VertexType, phi: f64) -> Result<Self> {
        Self::new(surface, eps, delta, vec![phi; surface.edge_count()])
    }

    /// The sign εδ of the radius interval.
    pub fn sign(&self) -> i8 {
        self.eps.product(self.delta)
    }

    fn triangle_phi(&self, surface: &TriangulatedSurface, t: usize) -> [f64; 3] {
        [0, 1, 2].map(|k| self.phi[surface.side_edge(t, k)])
    }
}

/// One packing triangle: the three SAS pieces and the resulting
/// (ε, ε, ε) triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct PackingTriangle {
    pub sas: [SasSolution; 3],
    pub triangle: GeneralizedTriangle,
}

impl PackingTriangle {
    /// `phi[k]` is on the side opposite corner k, `r[k]` the radius at corner k.
    pub fn new(eps: VertexType, delta: VertexType, phi: [f64; 3], r: [f64; 3]) -> Result<Self> {
        let mut sas = Vec::with_capacity(3);
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let s = packing_sas(eps, delta, phi[k], r[i], r[j]).map_err(|e| match e {
                Error::Realizability { message, .. } => Error::realizability(format!("side {k}"), message),
                other => other,
            })?;
            sas.push(s);
        }
        let sas: [SasSolution; 3] = [sas[0], sas[1], sas[2]];
        let lengths = [sas[0].third, sas[1].third, sas[2].third];
        let ttype = TriangleType::new(eps, eps, eps);
        let angles = law_angles_from_lengths(ttype, lengths)?;
        Ok(PackingTriangle {
            sas,
            triangle: GeneralizedTriangle { ttype, angles, lengths },
        })
    }

    pub fn lengths(&self) -> [f64; 3] {
        self.triangle.lengths
    }

    pub fn angles(&self) -> [f64; 3] {
        self.triangle.angles
    }

    /// ∂l/∂r: row k holds ρ'_ε of the SAS angle at each endpoint of side k.
    pub fn dl_dr(&self) -> Matrix3<f64> {
        let eps = self.triangle.ttype.vertex(0);
        let mut m = Matrix3::zeros();
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            // The angle at corner i is opposite the side r_j and vice versa.
            m[(k, i)] = rho_prime(eps, self.sas[k].base_angles[1]);
            m[(k, j)] = rho_prime(eps, self.sas[k].base_angles[0]);
        }
        m
    }

    /// ∂θ/∂u for radii `r` at the three corners.
    pub fn jacobian(&self, s: i8, r: [f64; 3]) -> Result<Matrix3<f64>> {
        let d = Matrix3::from_diagonal(&nalgebra::Vector3::from(r.map(|x| tau(s, x))));
        Ok(self.triangle.jacobian_dtheta_dl()? * self.dl_dr() * d)
    }
}

fn packing_sas(eps: VertexType, delta: VertexType, phi: f64, r_i: f64, r_j: f64) -> Result<SasSolution> {
    if eps == VertexType::Hyperideal {
        hyperideal_sas(delta, phi, r_i, r_j)
    } else {
        law_sas(eps, delta, r_i, r_j, phi)
    }
}

/// φ + x + y with a single rounding.
fn sum3(phi: f64, x: f64, y: f64) -> f64 {
    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }
    let (s1, e1) = two_sum(phi, x);
    let (s2, e2) = two_sum(s1, y);
    s2 + (e1 + e2)
}

/// Edge slack φ + u_i + u_j of an ε = −1 packing; the edge is realizable iff positive.
fn edge_slack(s: i8, phi: f64, r_i: f64, r_j: f64) -> Result<f64> {
    Ok(sum3(phi, coords::u_from_r(s, r_i)?, coords::u_from_r(s, r_j)?))
}

/// SAS for an ε = −1 packing edge, in the factored form
/// sinh²(l/2) = ρ_δ((φ+a_i+a_j)/2) ρ_δ(d/2) / (ρ_δ(a_i) ρ_δ(a_j)), a = −u(r),
/// d = φ − a_i − a_j. The direct cosine law cancels catastrophically when
/// l is small and the radii are large.
fn hyperideal_sas(delta: VertexType, phi: f64, r_i: f64, r_j: f64) -> Result<SasSolution> {
    let eps = VertexType::Hyperideal;
    let s = eps.product(delta);
    let d = edge_slack(s, phi, r_i, r_j)?;
    if !(d > 0.0) {
        return Err(Error::realizability(
            format!("SAS ({eps},{eps},{delta})"),
            format!("sides ({r_i}, {r_j}) with included angle {phi} admit no triangle"),
        ));
    }
    let (a_i, a_j) = (-coords::u_from_r(s, r_i)?, -coords::u_from_r(s, r_j)?);
    let q = rho(delta, 0.5 * (phi + a_i + a_j)) * rho(delta, 0.5 * d) / (rho(delta, a_i) * rho(delta, a_j));
    let third = 2.0 * q.sqrt().asinh();
    if !(third > 0.0 && third.is_finite()) {
        return Err(Error::Degenerate(format!("packing edge length {third} from slack {d:e}")));
    }
    let ratio = rho(delta, phi) / third.sinh();
    let base = |l: f64| (ratio * tau(s, l)).asinh();
    let angles = [base(r_i), base(r_j), phi];
    Ok(SasSolution {
        third,
        base_angles: [angles[0], angles[1]],
        triangle: Some(GeneralizedTriangle {
            ttype: TriangleType::new(eps, eps, delta),
            angles,
            lengths: [r_i, r_j, third],
        }),
    })
}

fn check_radii(surface: &TriangulatedSurface, cfg: &PackingConfig, r: &[f64]) -> Result<()> {
    if r.len() != surface.vertex_count() {
        return Err(Error::Input(format!(
            "{} radii for {} vertices",
            r.len(),
            surface.vertex_count()
        )));
    }
    for (v, &x) in r.iter().enumerate() {
        if !coords::in_length_interval(cfg.sign(), x) {
            return Err(Error::Input(format!(
                "radius {x} at vertex {} outside J_{}",
                surface.vertex_ids()[v],
                cfg.sign()
            )));
        }
    }
    Ok(())
}

/// The packing triangle over surface triangle `t`.
pub fn packing_triangle(cfg: &PackingConfig, surface: &TriangulatedSurface, r: &[f64], t: usize) -> Result<PackingTriangle> {
    let c = surface.corners(t);
    PackingTriangle::new(cfg.eps, cfg.delta, cfg.triangle_phi(surface, t), c.map(|v| r[v])).map_err(|e| match e {
        Error::Realizability { location, message } => {
            let k: usize = location.trim_start_matches("side ").parse().unwrap_or(0);
            Error::realizability(
                format!(
                    "edge {} of triangle {}",
                    surface.edge_ids()[surface.side_edge(t, k)],
                    surface.triangle_ids()[t]
                ),
                message,
            )
        }
        other => other,
    })
}

/// Edge lengths, indexed by edge.
pub fn packing_lengths(cfg: &PackingConfig, surface: &TriangulatedSurface, r: &[f64]) -> Result<Vec<f64>> {
    check_radii(surface, cfg, r)?;
    (0..surface.edge_count())
        .map(|e| {
            let [a, b] = surface.edge_endpoints(e);
            packing_sas(cfg.eps, cfg.delta, cfg.phi[e], r[a], r[b])
                .map(|s| s.third)
                .map_err(|err| match err {
                    Error::Realizability { message, .. } => {
                        Error::realizability(format!("edge {}", surface.edge_ids()[e]), message)
                    }
                    other => other,
                })
        })
        .collect()
}

pub fn packing_angles(cfg: &PackingConfig, surface: &TriangulatedSurface, r: &[f64], t: usize) -> Result<[f64; 3]> {
    check_radii(surface, cfg, r)?;
    Ok(packing_triangle(cfg, surface, r, t)?.angles())
}

/// K̃(v): the sum of the generalized angles at v.
pub fn curvature_tilde(cfg: &PackingConfig, surface: &TriangulatedSurface, r: &[f64]) -> Result<Vec<f64>> {
    check_radii(surface, cfg, r)?;
    let mut k = vec![0.0; surface.vertex_count()];
    for t in 0..surface.triangle_count() {
        let a = packing_triangle(cfg, surface, r, t)?.angles();
        for (c, v) in surface.corners(t).into_iter().enumerate() {
            k[v] += a[c];
        }
    }
    Ok(k)
}

/// Thurston's curvature 2π − K̃, meaningful for (1,1,1) only.
pub fn classic_curvature(cfg: &PackingConfig, k_tilde: &[f64]) -> Result<Vec<f64>> {
    if cfg.eps != VertexType::Interior || cfg.delta != VertexType::Interior {
        return Err(Error::Input(format!(
            "classic curvature needs type (1,1,1), got ({},{},{})",
            cfg.eps, cfg.eps, cfg.delta
        )));
    }
    Ok(k_tilde.iter().map(|k| 2.0 * PI - k).collect())
}

/// C(v) with K̃(v) = C(v) e^{−r(v)} for ε = 0.
pub fn eps0_constant(cfg: &PackingConfig, surface: &TriangulatedSurface) -> Result<Vec<f64>> {
    if cfg.eps != VertexType::Ideal {
        return Err(Error::Input(format!("closed form needs eps = 0, got {}", cfg.eps)));
    }
    let mut c = vec![0.0; surface.vertex_count()];
    for t in 0..surface.triangle_count() {
        let phi = cfg.triangle_phi(surface, t);
        let half = phi.map(|p| rho(cfg.delta, 0.5 * p));
        for (k, v) in surface.corners(t).into_iter().enumerate() {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            c[v] += 2.0 * half[k] / (half[i] * half[j]);
        }
    }
    Ok(c)
}

/// ∂θ/∂u for triangle `t`, rows and columns in corner order.
pub fn packing_jacobian(cfg: &PackingConfig, surface: &TriangulatedSurface, r: &[f64], t: usize) -> Result<Matrix3<f64>> {
    coords::check_packing_case(cfg.eps, cfg.delta, &cfg.phi)?;
    check_radii(surface, cfg, r)?;
    let c = surface.corners(t);
    packing_triangle(cfg, surface, r, t)?.jacobian(cfg.sign(), c.map(|v| r[v]))
}

/// ∂K̃/∂u, the Hessian of the packing energy.
pub fn packing_hessian(cfg: &PackingConfig, surface: &TriangulatedSurface, r: &[f64]) -> Result<DMatrix<f64>> {
    coords::check_packing_case(cfg.eps, cfg.delta, &cfg.phi)?;
    check_radii(surface, cfg, r)?;
    Ok(assemble(cfg, surface, r)?.1)
}

fn assemble(cfg: &PackingConfig, surface: &TriangulatedSurface, r: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = surface.vertex_count();
    let mut k = vec![0.0; n];
    let mut h = DMatrix::zeros(n, n);
    for t in 0..surface.triangle_count() {
        let c = surface.corners(t);
        let tri = packing_triangle(cfg, surface, r, t)?;
        let a = tri.jacobian(cfg.sign(), c.map(|v| r[v]))?;
        let ang = tri.angles();
        for p in 0..3 {
            k[c[p]] += ang[p];
            for q in 0..3 {
                h[(c[p], c[q])] += a[(p, q)];
            }
        }
    }
    Ok((k, h))
}

/// Whether u lies in the moduli polyhedron, with margin.
pub fn u_in_domain(cfg: &PackingConfig, surface: &TriangulatedSurface, u: &[f64]) -> bool {
    let s = cfg.sign();
    let lower = if s == -1 { -PI / 2.0 } else { f64::NEG_INFINITY };
    if !u.iter().all(|&x| x.is_finite() && x < 0.0 && x > lower) {
        return false;
    }
    if cfg.eps != VertexType::Hyperideal {
        return true;
    }
    (0..surface.edge_count()).all(|e| {
        let [a, b] = surface.edge_endpoints(e);
        sum3(cfg.phi[e], u[a], u[b]) > 0.0
    })
}

pub fn u_from_radii(cfg: &PackingConfig, r: &[f64]) -> Result<Vec<f64>> {
    r.iter().map(|&x| coords::u_from_r(cfg.sign(), x)).collect()
}

pub fn radii_from_u(cfg: &PackingConfig, u: &[f64]) -> Result<Vec<f64>> {
    u.iter().map(|&x| coords::r_from_u(cfg.sign(), x)).collect()
}

fn check_target(surface: &TriangulatedSurface, target: &[f64]) -> Result<()> {
    if target.len() != surface.vertex_count() {
        return Err(Error::Input(format!(
            "{} target values for {} vertices",
            target.len(),
            surface.vertex_count()
        )));
    }
    if let Some(x) = target.iter().find(|x| !x.is_finite()) {
        return Err(Error::Input(format!("target contains non-finite value {x}")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct PackingSolution {
    pub radii: Vec<f64>,
    pub iterations: usize,
    /// ‖K̃(r) − K̂‖∞.
    pub residual: f64,
}

fn inf_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

/// Radii with K̃(r) = `target`.
pub fn packing_solve(
    cfg: &PackingConfig,
    surface: &TriangulatedSurface,
    target: &[f64],
    opts: NewtonOptions,
) -> Result<PackingSolution> {
    coords::check_packing_case(cfg.eps, cfg.delta, &cfg.phi)?;
    check_target(surface, target)?;
    if cfg.eps != VertexType::Interior {
        if let Some((v, x)) = target.iter().enumerate().find(|(_, &x)| x <= 0.0) {
            return Err(Error::Infeasible {
                message: format!(
                    "target {x} at vertex {} is not positive; generalized angles are",
                    surface.vertex_ids()[v]
                ),
                witness: None,
            });
        }
    }
    if cfg.eps == VertexType::Ideal {
        let c = eps0_constant(cfg, surface)?;
        let radii: Vec<f64> = c.iter().zip(target).map(|(c, k)| (c / k).ln()).collect();
        let residual = inf_dist(&curvature_tilde(cfg, surface, &radii)?, target);
        return Ok(PackingSolution {
            radii,
            iterations: 0,
            residual,
        });
    }
    let mut r0 = vec![1.0; surface.vertex_count()];
    for _ in 0..60 {
        if u_in_domain(cfg, surface, &u_from_radii(cfg, &r0)?) {
            break;
        }
        r0.iter_mut().for_each(|x| *x *= 2.0);
    }
    let u0 = DVector::from_vec(u_from_radii(cfg, &r0)?);
    let res = newton_in_u(cfg, surface, u0, target, opts);
    match res {
        Ok(rep) => Ok(PackingSolution {
            radii: radii_from_u(cfg, rep.x.as_slice())?,
            iterations: rep.iterations,
            residual: rep.residual,
        }),
        Err(f) if cfg.eps == VertexType::Interior && matches!(f.kind, FailureKind::Stalled { .. }) => {
            Err(Error::Infeasible {
                message: format!(
                    "iterates reached the boundary of the radius domain with residual {:.3e}; \
                     target lies outside the curvature polytope",
                    f.report.residual
                ),
                witness: None,
            })
        }
        Err(f) => Err(f.into_error()),
    }
}

type NewtonResult = std::result::Result<newton::NewtonReport, newton::NewtonFailure>;

fn newton_in_u(
    cfg: &PackingConfig,
    surface: &TriangulatedSurface,
    u0: DVector<f64>,
    target: &[f64],
    opts: NewtonOptions,
) -> NewtonResult {
    let kv = DVector::from_column_slice(target);
    let eval = |u: &DVector<f64>| -> Result<(DVector<f64>, DMatrix<f64>)> {
        let r = radii_from_u(cfg, u.as_slice())?;
        let (k, h) = assemble(cfg, surface, &r)?;
        Ok((DVector::from_vec(k) - &kv, h))
    };
    newton::maximize(u0, eval, |u| u_in_domain(cfg, surface, u.as_slice()), opts)
}

/// θ_k of an ε = −1 packing triangle with radii (r_i, r_j, R).
pub fn limit_decay(delta: VertexType, phi: [f64; 3], r_i: f64, r_j: f64, big_r: f64) -> Result<f64> {
    let tri = PackingTriangle::new(VertexType::Hyperideal, delta, phi, [r_i, r_j, big_r])?;
    Ok(tri.angles()[2])
}

struct PackingFlow<'a> {
    cfg: &'a PackingConfig,
    surface: &'a TriangulatedSurface,
    target: &'a [f64],
}

impl FlowSystem for PackingFlow<'_> {
    fn in_domain(&self, u: &[f64]) -> bool {
        u_in_domain(self.cfg, self.surface, u)
    }

    fn velocity(&self, u: &[f64], o: Orientation) -> Result<Vec<f64>> {
        let r = radii_from_u(self.cfg, u)?;
        let k = curvature_tilde(self.cfg, self.surface, &r)?;
        Ok(k.iter().zip(self.target).map(|(a, b)| o.sign() * (a - b)).collect())
    }

    fn observe(&self, u: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let r = radii_from_u(self.cfg, u)?;
        let k = curvature_tilde(self.cfg, self.surface, &r)?;
        Ok((r, k))
    }

    fn energy_rate_terms(&self, u: &[f64], du: &[f64]) -> Result<Vec<f64>> {
        let r = radii_from_u(self.cfg, u)?;
        let k = curvature_tilde(self.cfg, self.surface, &r)?;
        Ok((0..u.len()).map(|i| (k[i] - self.target[i]) * du[i]).collect())
    }

    fn target(&self) -> &[f64] {
        self.target
    }
}

/// Integrates du/dt = ±(K̃ − K̂) by RK4, i.e. dr/dt = ±(K̃ − K̂) τ_{εδ}(r).
pub fn packing_flow(
    cfg: &PackingConfig,
    surface: &TriangulatedSurface,
    r0: &[f64],
    target: &[f64],
    opts: FlowOptions,
) -> Result<FlowTrace> {
    check_radii(surface, cfg, r0)?;
    check_target(surface, target)?;
    let sys = PackingFlow { cfg, surface, target };
    flow::run(&sys, surface.vertex_ids().to_vec(), u_from_radii(cfg, r0)?, opts)
}

/// dr/dt at `r` for the packing flow.
pub fn packing_velocity(
    cfg: &PackingConfig,
    surface: &TriangulatedSurface,
    r: &[f64],
    target: &[f64],
    orientation: Orientation,
) -> Result<Vec<f64>> {
    check_radii(surface, cfg, r)?;
    check_target(surface, target)?;
    let k = curvature_tilde(cfg, surface, r)?;
    Ok((0..r.len())
        .map(|i| orientation.sign() * (k[i] - target[i]) * tau(cfg.sign(), r[i]))
        .collect())
}
