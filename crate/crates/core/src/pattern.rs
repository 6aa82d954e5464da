//! Generalized circle patterns on cellular surfaces.
//!
//! Every edge vv' with faces f, f' spans a quadrilateral (v, f*, v', f'*),
//! the double of the SAS triangle of type (ε, ε, δ) with sides r(f*), r(f'*)
//! meeting at v with angle θ(e). Writing w = w(r) and a = a(angle) with
//!
//! ```text
//! w(l) = ∫_1^l τ_{εδ}^{h−1},     a(θ) = ∫_1^θ ρ_ε^h,
//! ```
//!
//! the 1-form a₁dw₂ + a₂dw₁ of one triangle is closed and its primitive F is
//! strictly concave. The curvature K_h(f*) = Σ 2a(angle at f*) is then the
//! w-gradient of W = Σ_quadrilaterals 2F.

use nalgebra::{DMatrix, DVector, Matrix2};

use crate::complex::{CellularSurface, Quadrilateral};
use crate::coords::{self, QUAD_TOL};
use crate::error::{Error, Result};
use crate::flow::{self, FlowOptions, FlowSystem, FlowTrace, Orientation};
use crate::newton::{self, NewtonOptions};
use crate::quad;
use crate::trig::{law_sas, rho, tau, tau_prime, GeneralizedTriangle, VertexType};

#[derive(Clone, Debug, PartialEq)]
pub struct PatternConfig {
    pub eps: VertexType,
    pub delta: VertexType,
    pub h: f64,
    /// Angle θ per edge, indexed like the surface's edges.
    pub theta: Vec<f64>,
}

impl PatternConfig {
    pub fn new(surface: &CellularSurface, eps: VertexType, delta: VertexType, h: f64, theta: Vec<f64>) -> Result<Self> {
        if !h.is_finite() {
            return Err(Error::Input(format!("h = {h} is not finite")));
        }
        if theta.len() != surface.edge_count() {
            return Err(Error::Input(format!(
                "{} angles for {} edges",
                theta.len(),
                surface.edge_count()
            )));
        }
        for (e, &t) in theta.iter().enumerate() {
            if !coords::in_angle_interval(delta, t, false) {
                return Err(Error::Input(format!(
                    "angle {t} on edge {} outside the open interval I_{delta}",
                    surface.edge_ids()[e]
                )));
            }
        }
        Ok(PatternConfig {
            eps,
            delta,
            h,
            theta,
        })
    }

    pub fn uniform(surface: &CellularSurface, eps: VertexType, delta: VertexType, h: f64, theta: f64) -> Result<Self> {
        Self::new(surface, eps, delta, h, vec![theta; surface.edge_count()])
    }

    /// The sign εδ of the radius interval.
    pub fn sign(&self) -> i8 {
        self.eps.product(self.delta)
    }
}

/// The local data of one quadrilateral: type, exponent and angle at v.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadParams {
    pub eps: VertexType,
    pub delta: VertexType,
    pub h: f64,
    pub theta: f64,
}

impl QuadParams {
    fn sign(&self) -> i8 {
        self.eps.product(self.delta)
    }
}

/// Solved half-quadrilateral at one point of its domain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadPoint {
    /// Lengths (r(f*), r(f'*), l(f*f'*)), angles (at f'*, at f*, θ).
    pub triangle: GeneralizedTriangle,
    /// a-coordinate of the angle at f*, i.e. ∂F/∂w₁.
    pub a_f: f64,
    /// a-coordinate of the angle at f'*, i.e. ∂F/∂w₂.
    pub a_f2: f64,
}

impl QuadPoint {
    pub fn new(p: QuadParams, r_f: f64, r_f2: f64) -> Result<Self> {
        let sas = law_sas(p.eps, p.delta, r_f, r_f2, p.theta)?;
        let triangle = sas
            .triangle
            .ok_or_else(|| Error::Degenerate(format!("straight angle {} at v", p.theta)))?;
        Ok(QuadPoint {
            triangle,
            a_f: coords::a_from_theta(p.h, p.eps, triangle.angles[1])?,
            a_f2: coords::a_from_theta(p.h, p.eps, triangle.angles[0])?,
        })
    }

    pub fn from_w(p: QuadParams, w1: f64, w2: f64) -> Result<Self> {
        let s = p.sign();
        Self::new(p, coords::l_from_w(p.h, s, w1)?, coords::l_from_w(p.h, s, w2)?)
    }

    /// diag(τ^h(l₁), τ^h(l₂)) · B · diag(ρ^{−h}(θ₂), ρ^{−h}(θ₁)) with
    /// B = [[τ'(l₃), ε], [ε, τ'(l₃)]]; symmetric by the sine law.
    pub fn a_matrix(&self, h: f64) -> Matrix2<f64> {
        let t = &self.triangle;
        let eps = t.ttype.vertex(0);
        let s = t.ttype.edge_sign(0);
        let c = tau_prime(eps.product(eps), t.lengths[2]);
        let e = f64::from(eps.eps());
        let left = [tau(s, t.lengths[0]).powf(h), tau(s, t.lengths[1]).powf(h)];
        let right = [
            rho(eps, t.angles[1]).powf(-h),
            rho(eps, t.angles[0]).powf(-h),
        ];
        Matrix2::new(
            left[0] * c * right[0],
            left[0] * e * right[1],
            left[1] * e * right[0],
            left[1] * c * right[1],
        )
    }

    /// ∂(a_f, a_f2)/∂(w₁, w₂) = −√(−det G_l) A⁻¹, the Hessian of F.
    pub fn hessian(&self, h: f64) -> Result<Matrix2<f64>> {
        let root = self.triangle.sqrt_neg_det_lengths();
        if !(root > 0.0) {
            return Err(Error::Degenerate(format!("sqrt(-det G_l) = {root:e}")));
        }
        let inv = self
            .a_matrix(h)
            .try_inverse()
            .ok_or_else(|| Error::Degenerate("singular A matrix".into()))?;
        Ok(-root * inv)
    }
}

/// The triangle f*f'*v over edge `e`.
pub fn pattern_triangle(cfg: &PatternConfig, surface: &CellularSurface, e: usize, r_f: f64, r_f2: f64) -> Result<GeneralizedTriangle> {
    quad_point(cfg, surface, e, r_f, r_f2).map(|q| q.triangle)
}

fn params(cfg: &PatternConfig, e: usize) -> QuadParams {
    QuadParams {
        eps: cfg.eps,
        delta: cfg.delta,
        h: cfg.h,
        theta: cfg.theta[e],
    }
}

fn quad_point(cfg: &PatternConfig, surface: &CellularSurface, e: usize, r_f: f64, r_f2: f64) -> Result<QuadPoint> {
    QuadPoint::new(params(cfg, e), r_f, r_f2).map_err(|err| match err {
        Error::Realizability { message, .. } => {
            Error::realizability(format!("edge {}", surface.edge_ids()[e]), message)
        }
        other => other,
    })
}

/// Integration path from the base point w = (0, 0), i.e. l = (1, 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnergyPath {
    /// Along w₁ first, then w₂.
    FirstAxis,
    /// Along w₂ first, then w₁.
    SecondAxis,
    Diagonal,
}

fn segment(p: QuadParams, from: [f64; 2], to: [f64; 2]) -> Result<f64> {
    let d = [to[0] - from[0], to[1] - from[1]];
    if d == [0.0, 0.0] {
        return Ok(0.0);
    }
    let mut err = None;
    let v = quad::integrate(
        |t| match QuadPoint::from_w(p, from[0] + t * d[0], from[1] + t * d[1]) {
            Ok(q) => q.a_f * d[0] + q.a_f2 * d[1],
            Err(e) => {
                err.get_or_insert(e);
                f64::NAN
            }
        },
        0.0,
        1.0,
        QUAD_TOL,
    );
    match err {
        Some(e) => Err(e),
        None => v,
    }
}

/// F(w₁, w₂) = ∫ a_f dw₁ + a_f2 dw₂ along `path`.
pub fn f_energy_along(p: QuadParams, w1: f64, w2: f64, path: EnergyPath) -> Result<f64> {
    QuadPoint::from_w(p, 0.0, 0.0).map_err(|e| {
        Error::realizability(
            "base point l = (1, 1)",
            format!("outside the domain for angle {}: {e}", p.theta),
        )
    })?;
    match path {
        EnergyPath::FirstAxis => Ok(segment(p, [0.0, 0.0], [w1, 0.0])? + segment(p, [w1, 0.0], [w1, w2])?),
        EnergyPath::SecondAxis => Ok(segment(p, [0.0, 0.0], [0.0, w2])? + segment(p, [0.0, w2], [w1, w2])?),
        EnergyPath::Diagonal => segment(p, [0.0, 0.0], [w1, w2]),
    }
}

/// F by the first path that stays in the domain.
pub fn f_energy(p: QuadParams, w1: f64, w2: f64) -> Result<f64> {
    let mut last = None;
    for path in [EnergyPath::FirstAxis, EnergyPath::SecondAxis, EnergyPath::Diagonal] {
        match f_energy_along(p, w1, w2, path) {
            Ok(v) => return Ok(v),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("three paths tried"))
}

/// (∂F/∂w₁, ∂F/∂w₂) = (a at f*, a at f'*).
pub fn f_gradient(p: QuadParams, w1: f64, w2: f64) -> Result<[f64; 2]> {
    let q = QuadPoint::from_w(p, w1, w2)?;
    Ok([q.a_f, q.a_f2])
}

pub fn f_hessian(p: QuadParams, w1: f64, w2: f64) -> Result<Matrix2<f64>> {
    QuadPoint::from_w(p, w1, w2)?.hessian(p.h)
}

fn check_radii(cfg: &PatternConfig, surface: &CellularSurface, r: &[f64]) -> Result<()> {
    if r.len() != surface.face_count() {
        return Err(Error::Input(format!(
            "{} radii for {} faces",
            r.len(),
            surface.face_count()
        )));
    }
    for (f, &x) in r.iter().enumerate() {
        if !coords::in_length_interval(cfg.sign(), x) {
            return Err(Error::Input(format!(
                "radius {x} at face {} outside J_{}",
                surface.face_ids()[f],
                cfg.sign()
            )));
        }
    }
    Ok(())
}

fn check_target(surface: &CellularSurface, target: &[f64]) -> Result<()> {
    if target.len() != surface.face_count() {
        return Err(Error::Input(format!(
            "{} target values for {} faces",
            target.len(),
            surface.face_count()
        )));
    }
    if let Some(x) = target.iter().find(|x| !x.is_finite()) {
        return Err(Error::Input(format!("target contains non-finite value {x}")));
    }
    Ok(())
}

/// K_h per face.
pub fn kh_curvature(cfg: &PatternConfig, surface: &CellularSurface, r: &[f64]) -> Result<Vec<f64>> {
    check_radii(cfg, surface, r)?;
    let mut k = vec![0.0; surface.face_count()];
    for Quadrilateral { edge, f, f2, .. } in surface.quadrilaterals() {
        let q = quad_point(cfg, surface, edge, r[f], r[f2])?;
        k[f] += 2.0 * q.a_f;
        k[f2] += 2.0 * q.a_f2;
    }
    Ok(k)
}

/// K_h and its w-Jacobian, the Hessian of W.
pub fn pattern_hessian(cfg: &PatternConfig, surface: &CellularSurface, r: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
    check_radii(cfg, surface, r)?;
    let n = surface.face_count();
    let mut k = vec![0.0; n];
    let mut hm = DMatrix::zeros(n, n);
    for Quadrilateral { edge, f, f2, .. } in surface.quadrilaterals() {
        let q = quad_point(cfg, surface, edge, r[f], r[f2])?;
        k[f] += 2.0 * q.a_f;
        k[f2] += 2.0 * q.a_f2;
        let m = q.hessian(cfg.h)?;
        let idx = [f, f2];
        for a in 0..2 {
            for b in 0..2 {
                hm[(idx[a], idx[b])] += 2.0 * m[(a, b)];
            }
        }
    }
    Ok((k, hm))
}

/// W = Σ 2F over quadrilaterals at radii `r`.
pub fn pattern_energy(cfg: &PatternConfig, surface: &CellularSurface, r: &[f64]) -> Result<f64> {
    check_radii(cfg, surface, r)?;
    let w = w_from_radii(cfg, r)?;
    surface
        .quadrilaterals()
        .iter()
        .map(|q| f_energy(params(cfg, q.edge), w[q.f], w[q.f2]).map(|v| 2.0 * v))
        .sum()
}

pub fn w_from_radii(cfg: &PatternConfig, r: &[f64]) -> Result<Vec<f64>> {
    r.iter().map(|&x| coords::w_from_l(cfg.h, cfg.sign(), x)).collect()
}

pub fn radii_from_w(cfg: &PatternConfig, w: &[f64]) -> Result<Vec<f64>> {
    w.iter().map(|&x| coords::l_from_w(cfg.h, cfg.sign(), x)).collect()
}

/// Whether every quadrilateral is realizable at radii `r`.
pub fn radii_in_domain(cfg: &PatternConfig, surface: &CellularSurface, r: &[f64]) -> bool {
    r.len() == surface.face_count()
        && r.iter().all(|&x| coords::in_length_interval(cfg.sign(), x))
        && surface.quadrilaterals().iter().all(|q| {
            matches!(
                coords::d_membership(cfg.eps, cfg.delta, cfg.theta[q.edge], r[q.f], r[q.f2]),
                Ok(true)
            )
        })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PatternSolution {
    pub radii: Vec<f64>,
    pub iterations: usize,
    /// ‖K_h(r) − K̂‖∞.
    pub residual: f64,
}

/// A deterministic realizable start: r ≡ 1, doubled until every
/// quadrilateral exists.
pub fn default_start(cfg: &PatternConfig, surface: &CellularSurface) -> Result<Vec<f64>> {
    let mut r = vec![1.0; surface.face_count()];
    for _ in 0..60 {
        if radii_in_domain(cfg, surface, &r) {
            return Ok(r);
        }
        r.iter_mut().for_each(|x| *x *= 2.0);
    }
    Err(Error::realizability("start", "no uniform radius admits every quadrilateral"))
}

/// Radii with K_h(r) = `target`, from the default start.
pub fn pattern_solve(cfg: &PatternConfig, surface: &CellularSurface, target: &[f64], opts: NewtonOptions) -> Result<PatternSolution> {
    let r0 = default_start(cfg, surface)?;
    pattern_solve_from(cfg, surface, target, &r0, opts)
}

pub fn pattern_solve_from(
    cfg: &PatternConfig,
    surface: &CellularSurface,
    target: &[f64],
    r0: &[f64],
    opts: NewtonOptions,
) -> Result<PatternSolution> {
    check_radii(cfg, surface, r0)?;
    check_target(surface, target)?;
    if !radii_in_domain(cfg, surface, r0) {
        return Err(Error::realizability("start", "initial radii leave some quadrilateral unrealizable"));
    }
    let kv = DVector::from_column_slice(target);
    let eval = |w: &DVector<f64>| -> Result<(DVector<f64>, DMatrix<f64>)> {
        let r = radii_from_w(cfg, w.as_slice())?;
        if !radii_in_domain(cfg, surface, &r) {
            return Err(Error::realizability("line search", "left the domain"));
        }
        let (k, hm) = pattern_hessian(cfg, surface, &r)?;
        Ok((DVector::from_vec(k) - &kv, hm))
    };
    let w0 = DVector::from_vec(w_from_radii(cfg, r0)?);
    let rep = newton::maximize(w0, eval, |w| w.iter().all(|x| x.is_finite()), opts)
        .map_err(|f| f.into_error())?;
    Ok(PatternSolution {
        radii: radii_from_w(cfg, rep.x.as_slice())?,
        iterations: rep.iterations,
        residual: rep.residual,
    })
}

/// dr/dt = ±(K_h − K̂) τ_{εδ}^{1−h}(r).
pub fn pattern_velocity(
    cfg: &PatternConfig,
    surface: &CellularSurface,
    r: &[f64],
    target: &[f64],
    orientation: Orientation,
) -> Result<Vec<f64>> {
    check_target(surface, target)?;
    let k = kh_curvature(cfg, surface, r)?;
    Ok((0..r.len())
        .map(|i| orientation.sign() * (k[i] - target[i]) * tau(cfg.sign(), r[i]).powf(1.0 - cfg.h))
        .collect())
}

struct PatternFlow<'a> {
    cfg: &'a PatternConfig,
    surface: &'a CellularSurface,
    target: &'a [f64],
}

impl FlowSystem for PatternFlow<'_> {
    fn in_domain(&self, r: &[f64]) -> bool {
        radii_in_domain(self.cfg, self.surface, r)
    }

    fn velocity(&self, r: &[f64], o: Orientation) -> Result<Vec<f64>> {
        pattern_velocity(self.cfg, self.surface, r, self.target, o)
    }

    fn observe(&self, r: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((r.to_vec(), kh_curvature(self.cfg, self.surface, r)?))
    }

    fn energy_rate_terms(&self, r: &[f64], dr: &[f64]) -> Result<Vec<f64>> {
        let k = kh_curvature(self.cfg, self.surface, r)?;
        Ok((0..r.len())
            .map(|i| (k[i] - self.target[i]) * coords::dw_dl(self.cfg.h, self.cfg.sign(), r[i]) * dr[i])
            .collect())
    }

    fn target(&self) -> &[f64] {
        self.target
    }
}

/// RK4 integration of the pattern flow in r.
pub fn pattern_flow(
    cfg: &PatternConfig,
    surface: &CellularSurface,
    r0: &[f64],
    target: &[f64],
    opts: FlowOptions,
) -> Result<FlowTrace> {
    check_radii(cfg, surface, r0)?;
    check_target(surface, target)?;
    let sys = PatternFlow { cfg, surface, target };
    flow::run(&sys, surface.face_ids().to_vec(), r0.to_vec(), opts)
}
