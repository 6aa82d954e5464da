//! Uniform cosine and sine laws for generalized hyperbolic triangles.
//!
//! A generalized triangle has three vertices, each of type ε ∈ {−1, 0, 1}
//! (hyperideal, ideal, interior). Its generalized angles θ and opposite
//! generalized lengths l are related by one family of formulas written in
//! terms of
//!
//! ```text
//! ρ_ε(θ) = sin θ | θ | sinh θ           (ε = 1 | 0 | −1)
//! τ_s(l) = ½eˡ − ½s e⁻ˡ                 (s = ε_j ε_k for the edge l_i)
//! ```
//!
//! Corner `i` is opposite edge `i`; edge `i` joins corners `j` and `k`.

use std::fmt;

use nalgebra::Matrix3;

use crate::coords;
use crate::error::{Error, Result};

/// Half-angle expressions and Gram determinants below this are treated as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// Type of a generalized vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexType {
    /// ε = −1: truncated by a perpendicular geodesic; the angle is a distance.
    Hyperideal,
    /// ε = 0: decorated by a horocycle; the angle is twice a horocyclic arc.
    Ideal,
    /// ε = 1: an ordinary point with an ordinary angle.
    Interior,
}

impl VertexType {
    pub const ALL: [VertexType; 3] = [
        VertexType::Hyperideal,
        VertexType::Ideal,
        VertexType::Interior,
    ];

    pub fn eps(self) -> i8 {
        match self {
            VertexType::Hyperideal => -1,
            VertexType::Ideal => 0,
            VertexType::Interior => 1,
        }
    }

    pub fn from_eps(eps: i64) -> Result<Self> {
        match eps {
            -1 => Ok(VertexType::Hyperideal),
            0 => Ok(VertexType::Ideal),
            1 => Ok(VertexType::Interior),
            other => Err(Error::Input(format!(
                "vertex type must be -1, 0 or 1, got {other}"
            ))),
        }
    }

    /// The sign ε·δ that selects τ for an edge joining types `self` and `other`.
    pub fn product(self, other: VertexType) -> i8 {
        self.eps() * other.eps()
    }
}

impl fmt::Display for VertexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.eps())
    }
}

/// Ordered vertex types (ε₁, ε₂, ε₃).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleType(pub [VertexType; 3]);

impl TriangleType {
    pub fn new(e1: VertexType, e2: VertexType, e3: VertexType) -> Self {
        TriangleType([e1, e2, e3])
    }

    pub fn from_eps(eps: [i64; 3]) -> Result<Self> {
        Ok(TriangleType([
            VertexType::from_eps(eps[0])?,
            VertexType::from_eps(eps[1])?,
            VertexType::from_eps(eps[2])?,
        ]))
    }

    pub fn eps(&self, i: usize) -> i8 {
        self.0[i].eps()
    }

    pub fn vertex(&self, i: usize) -> VertexType {
        self.0[i]
    }

    /// τ-sign of edge `i`, i.e. ε_j·ε_k.
    pub fn edge_sign(&self, i: usize) -> i8 {
        let (j, k) = others(i);
        self.0[j].product(self.0[k])
    }

    /// One representative of each of the ten unordered types, in the
    /// vertex order used by the per-type law tables.
    pub fn representatives() -> [TriangleType; 10] {
        use VertexType::*;
        [
            TriangleType([Interior, Interior, Interior]),
            TriangleType([Interior, Interior, Hyperideal]),
            TriangleType([Hyperideal, Hyperideal, Interior]),
            TriangleType([Hyperideal, Hyperideal, Hyperideal]),
            TriangleType([Interior, Interior, Ideal]),
            TriangleType([Interior, Hyperideal, Ideal]),
            TriangleType([Hyperideal, Hyperideal, Ideal]),
            TriangleType([Ideal, Ideal, Interior]),
            TriangleType([Ideal, Ideal, Hyperideal]),
            TriangleType([Ideal, Ideal, Ideal]),
        ]
    }

    /// All 27 ordered types.
    pub fn all_ordered() -> Vec<TriangleType> {
        let mut out = Vec::with_capacity(27);
        for a in VertexType::ALL {
            for b in VertexType::ALL {
                for c in VertexType::ALL {
                    out.push(TriangleType([a, b, c]));
                }
            }
        }
        out
    }

    pub fn permuted(&self, perm: [usize; 3]) -> TriangleType {
        TriangleType([self.0[perm[0]], self.0[perm[1]], self.0[perm[2]]])
    }
}

impl fmt::Display for TriangleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// The two indices other than `i`, in cyclic order.
#[inline]
pub fn others(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

pub fn rho(eps: VertexType, theta: f64) -> f64 {
    match eps {
        VertexType::Interior => theta.sin(),
        VertexType::Ideal => theta,
        VertexType::Hyperideal => theta.sinh(),
    }
}

pub fn rho_prime(eps: VertexType, theta: f64) -> f64 {
    match eps {
        VertexType::Interior => theta.cos(),
        VertexType::Ideal => 1.0,
        VertexType::Hyperideal => theta.cosh(),
    }
}

pub fn tau(s: i8, l: f64) -> f64 {
    match s {
        1 => l.sinh(),
        -1 => l.cosh(),
        0 => 0.5 * l.exp(),
        _ => panic!("tau sign must be -1, 0 or 1, got {s}"),
    }
}

pub fn tau_prime(s: i8, l: f64) -> f64 {
    match s {
        1 => l.cosh(),
        -1 => l.sinh(),
        0 => 0.5 * l.exp(),
        _ => panic!("tau sign must be -1, 0 or 1, got {s}"),
    }
}

/// Inverse of τ'_s restricted to J_s. `None` when `x` has no preimage.
pub fn tau_prime_inverse(s: i8, x: f64) -> Option<f64> {
    if !x.is_finite() {
        return None;
    }
    match s {
        1 if x > 1.0 => Some(x.acosh()),
        -1 if x > 0.0 => Some(x.asinh()),
        0 if x > 0.0 => Some((2.0 * x).ln()),
        _ => None,
    }
}

/// Inverse of θ ↦ 2ρ²_ε(θ/2) on the admissible angle range.
fn angle_from_half_angle_expr(eps: VertexType, q: f64, floor: f64) -> Option<f64> {
    if !(q > floor) || !q.is_finite() {
        return None;
    }
    let half = (0.5 * q).sqrt();
    match eps {
        VertexType::Interior => {
            if half > 1.0 {
                None
            } else {
                Some(2.0 * half.asin())
            }
        }
        VertexType::Ideal => Some(2.0 * half),
        VertexType::Hyperideal => Some(2.0 * half.asinh()),
    }
}

fn check_angle(eps: VertexType, theta: f64, corner: usize, allow_straight: bool) -> Result<()> {
    let ok = theta.is_finite()
        && theta > 0.0
        && match eps {
            VertexType::Interior => {
                theta < std::f64::consts::PI || (allow_straight && theta == std::f64::consts::PI)
            }
            _ => true,
        };
    if ok {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "angle {theta} at corner {} is outside the interval for type {eps}",
            corner + 1
        )))
    }
}

pub(crate) fn check_angles(ttype: TriangleType, angles: &[f64; 3]) -> Result<()> {
    for (i, &theta) in angles.iter().enumerate() {
        check_angle(ttype.vertex(i), theta, i, false)?;
    }
    Ok(())
}

pub(crate) fn check_lengths(ttype: TriangleType, lengths: &[f64; 3]) -> Result<()> {
    for (i, &l) in lengths.iter().enumerate() {
        if !coords::in_length_interval(ttype.edge_sign(i), l) {
            return Err(Error::Input(format!(
                "length {l} of edge {} is outside J_{}",
                i + 1,
                ttype.edge_sign(i)
            )));
        }
    }
    Ok(())
}

/// Lengths from angles: τ'(l_i) = (ρ'_i + ρ'_j ρ'_k) / (ρ_j ρ_k).
pub fn law_length_from_angles(ttype: TriangleType, angles: [f64; 3]) -> Result<[f64; 3]> {
    check_angles(ttype, &angles)?;
    let mut lengths = [0.0; 3];
    for i in 0..3 {
        let (j, k) = others(i);
        let (ei, ej, ek) = (ttype.vertex(i), ttype.vertex(j), ttype.vertex(k));
        let x = (rho_prime(ei, angles[i]) + rho_prime(ej, angles[j]) * rho_prime(ek, angles[k]))
            / (rho(ej, angles[j]) * rho(ek, angles[k]));
        lengths[i] = tau_prime_inverse(ttype.edge_sign(i), x).ok_or_else(|| {
            Error::domain(
                format!("edge {}", i + 1),
                format!("tau' value {x} has no preimage in J_{}", ttype.edge_sign(i)),
            )
        })?;
    }
    Ok(lengths)
}

/// The right-hand side of the half-angle law at corner `i`, i.e. 2ρ²_{ε_i}(θ_i/2).
pub fn half_angle_expr(ttype: TriangleType, lengths: &[f64; 3], i: usize) -> f64 {
    let (j, k) = others(i);
    let ej = f64::from(ttype.eps(j));
    let ek = f64::from(ttype.eps(k));
    let num = tau_prime(ttype.edge_sign(i), lengths[i])
        - 0.5 * ej * (lengths[j] - lengths[k]).exp()
        - 0.5 * ek * (lengths[k] - lengths[j]).exp();
    let den = tau(ttype.edge_sign(j), lengths[j]) * tau(ttype.edge_sign(k), lengths[k]);
    num / den
}

/// Angles from lengths through the half-angle law, so θ ∈ (0, π] is
/// recovered without the arccos ambiguity when ε = 1.
pub fn law_angles_from_lengths(ttype: TriangleType, lengths: [f64; 3]) -> Result<[f64; 3]> {
    check_lengths(ttype, &lengths)?;
    let mut angles = [0.0; 3];
    for i in 0..3 {
        let q = half_angle_expr(ttype, &lengths, i);
        // Only interior neighbours make the numerator a difference; otherwise
        // every term is positive and tiny q is an accurate tiny angle.
        let (j, k) = others(i);
        let floor = if ttype.eps(j) == 1 || ttype.eps(k) == 1 {
            DEGENERACY_TOL
        } else {
            0.0
        };
        angles[i] = angle_from_half_angle_expr(ttype.vertex(i), q, floor).ok_or_else(|| {
            Error::domain(
                format!("corner {}", i + 1),
                format!("half-angle expression {q} admits no angle of type {}", ttype.vertex(i)),
            )
        })?;
    }
    Ok(angles)
}

/// A triangle whose angles and lengths satisfy the uniform laws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeneralizedTriangle {
    pub ttype: TriangleType,
    pub angles: [f64; 3],
    pub lengths: [f64; 3],
}

impl GeneralizedTriangle {
    pub fn from_angles(ttype: TriangleType, angles: [f64; 3]) -> Result<Self> {
        let lengths = law_length_from_angles(ttype, angles)?;
        Ok(GeneralizedTriangle {
            ttype,
            angles,
            lengths,
        })
    }

    pub fn from_lengths(ttype: TriangleType, lengths: [f64; 3]) -> Result<Self> {
        let angles = law_angles_from_lengths(ttype, lengths)?;
        Ok(GeneralizedTriangle {
            ttype,
            angles,
            lengths,
        })
    }

    /// ρ_{ε_i}(θ_i) / τ_{ε_jε_k}(l_i) for each i; equal by the sine law.
    pub fn sine_ratios(&self) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, r) in out.iter_mut().enumerate() {
            *r = rho(self.ttype.vertex(i), self.angles[i])
                / tau(self.ttype.edge_sign(i), self.lengths[i]);
        }
        out
    }

    pub fn gram_lengths(&self) -> Matrix3<f64> {
        gram_lengths(self.ttype, &self.lengths)
    }

    pub fn gram_angles(&self) -> Matrix3<f64> {
        gram_angles(self.ttype, &self.angles)
    }

    /// −(τ(l_j) τ(l_k) ρ(θ_i))², the closed form of det G_l for index `i`.
    pub fn det_lengths_closed_form(&self, i: usize) -> f64 {
        let (j, k) = others(i);
        let t = self.ttype;
        let v = tau(t.edge_sign(j), self.lengths[j])
            * tau(t.edge_sign(k), self.lengths[k])
            * rho(t.vertex(i), self.angles[i]);
        -v * v
    }

    /// −(ρ(θ_j) ρ(θ_k) τ(l_i))², the closed form of det G_θ for index `i`.
    pub fn det_angles_closed_form(&self, i: usize) -> f64 {
        let (j, k) = others(i);
        let t = self.ttype;
        let v = rho(t.vertex(j), self.angles[j])
            * rho(t.vertex(k), self.angles[k])
            * tau(t.edge_sign(i), self.lengths[i]);
        -v * v
    }

    /// √(−det G_l) through its closed form τ(l₂)τ(l₃)ρ(θ₁), which avoids
    /// the cancellation in the raw determinant of nearly flat triangles.
    pub fn sqrt_neg_det_lengths(&self) -> f64 {
        (-self.det_lengths_closed_form(0)).sqrt()
    }

    /// Diagonal M = diag(τ(l_i)) / √(−det G_l).
    pub fn m_matrix(&self) -> Result<Matrix3<f64>> {
        let root = self.sqrt_neg_det_lengths();
        let det_a = self.det_angles_closed_form(0);
        if !(root * root > DEGENERACY_TOL) || det_a > -DEGENERACY_TOL {
            return Err(Error::Degenerate(format!(
                "det G_l = {:e}, det G_theta = {det_a:e}",
                -root * root
            )));
        }
        let scale = root.recip();
        Ok(Matrix3::from_diagonal(&nalgebra::Vector3::new(
            tau(self.ttype.edge_sign(0), self.lengths[0]) * scale,
            tau(self.ttype.edge_sign(1), self.lengths[1]) * scale,
            tau(self.ttype.edge_sign(2), self.lengths[2]) * scale,
        )))
    }

    /// ∂l/∂θ = M G_l.
    pub fn jacobian_dl_dtheta(&self) -> Result<Matrix3<f64>> {
        Ok(self.m_matrix()? * self.gram_lengths())
    }

    /// ∂θ/∂l = M G_θ.
    pub fn jacobian_dtheta_dl(&self) -> Result<Matrix3<f64>> {
        Ok(self.m_matrix()? * self.gram_angles())
    }
}

/// G_l = −[[ε₁, τ'(l₃), τ'(l₂)], [τ'(l₃), ε₂, τ'(l₁)], [τ'(l₂), τ'(l₁), ε₃]].
pub fn gram_lengths(ttype: TriangleType, lengths: &[f64; 3]) -> Matrix3<f64> {
    let c = |i: usize| tau_prime(ttype.edge_sign(i), lengths[i]);
    let e = |i: usize| f64::from(ttype.eps(i));
    -Matrix3::new(
        e(0),
        c(2),
        c(1),
        c(2),
        e(1),
        c(0),
        c(1),
        c(0),
        e(2),
    )
}

/// G_θ = −[[−1, ρ'(θ₃), ρ'(θ₂)], [ρ'(θ₃), −1, ρ'(θ₁)], [ρ'(θ₂), ρ'(θ₁), −1]].
pub fn gram_angles(ttype: TriangleType, angles: &[f64; 3]) -> Matrix3<f64> {
    let c = |i: usize| rho_prime(ttype.vertex(i), angles[i]);
    -Matrix3::new(-1.0, c(2), c(1), c(2), -1.0, c(0), c(1), c(0), -1.0)
}

/// Solution of an SAS problem on a type (ε, ε, δ) triangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SasSolution {
    /// The side opposite the included corner (joins the two type-ε corners).
    pub third: f64,
    /// Angles at the two type-ε corners (opposite the first and second side).
    /// Both are zero for the straight angle θ = π.
    pub base_angles: [f64; 2],
    /// The solved triangle with lengths (l₁, l₂, third) and angles
    /// (base₁, base₂, θ); `None` for the straight angle.
    pub triangle: Option<GeneralizedTriangle>,
}

/// Two sides and the included generalized angle of a type (ε, ε, δ)
/// triangle. Corners are ordered (ε, ε, δ); `l1` is opposite corner 1 and
/// `l2` opposite corner 2, so both touch the included corner.
pub fn law_sas(
    eps: VertexType,
    delta: VertexType,
    l1: f64,
    l2: f64,
    theta: f64,
) -> Result<SasSolution> {
    if !coords::d_membership(eps, delta, theta, l1, l2)? {
        return Err(Error::realizability(
            format!("SAS ({eps},{eps},{delta})"),
            format!("sides ({l1}, {l2}) with included angle {theta} admit no triangle"),
        ));
    }
    let ttype = TriangleType::new(eps, eps, delta);
    let e = f64::from(eps.eps());
    let x = 2.0 * rho(delta, 0.5 * theta).powi(2)
        * tau(eps.product(delta), l1)
        * tau(eps.product(delta), l2)
        + e * (l1 - l2).cosh();
    let third = tau_prime_inverse(eps.product(eps), x).ok_or_else(|| {
        Error::domain(
            "edge 3",
            format!("tau' value {x} has no preimage in J_{}", eps.product(eps)),
        )
    })?;
    if delta == VertexType::Interior && theta == std::f64::consts::PI {
        return Ok(SasSolution {
            third,
            base_angles: [0.0, 0.0],
            triangle: None,
        });
    }
    let lengths = [l1, l2, third];
    let angles = if eps == VertexType::Interior {
        let mut a = law_angles_from_lengths(ttype, lengths)?;
        a[2] = theta;
        a
    } else {
        // ρ_ε is monotone here, so the sine law gives the base angles without
        // the cancellation the half-angle law suffers for long sides.
        let ratio = rho(delta, theta) / tau(eps.product(eps), third);
        let s = eps.product(delta);
        let base = |l: f64| {
            let y = ratio * tau(s, l);
            match eps {
                VertexType::Ideal => y,
                _ => y.asinh(),
            }
        };
        [base(l1), base(l2), theta]
    };
    Ok(SasSolution {
        third,
        base_angles: [angles[0], angles[1]],
        triangle: Some(GeneralizedTriangle {
            ttype,
            angles,
            lengths,
        }),
    })
}
