//! Realizability of SAS data and the coordinate changes used by the energies.
//!
//! Intervals: I_1 = (0, π], I_0 = I_{−1} = (0, ∞); J_{±1} = (0, ∞), J_0 = ℝ.
//!
//! Coordinates, all strictly increasing in their argument:
//!
//! ```text
//! u(r) = −∫_r^∞ dt / τ_{εδ}(t)
//! w(l) =  ∫_1^l τ_{εδ}^{h−1}(t) dt
//! a(θ) =  ∫_1^θ ρ_ε^h(t) dt
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quad;
use crate::trig::{rho, tau, tau_prime, VertexType};

/// Absolute tolerance for the coordinate integrals.
pub const QUAD_TOL: f64 = 1e-12;
const INVERT_TOL: f64 = 1e-15;

/// Membership in J_s.
pub fn in_length_interval(s: i8, l: f64) -> bool {
    l.is_finite() && (s == 0 || l > 0.0)
}

/// Membership in the open angle interval I̊_ε, or in I_ε when `closed` is set.
pub fn in_angle_interval(eps: VertexType, theta: f64, closed: bool) -> bool {
    theta.is_finite()
        && theta > 0.0
        && match eps {
            VertexType::Interior => theta < PI || (closed && theta == PI),
            _ => true,
        }
}

fn check_sas_inputs(eps: VertexType, delta: VertexType, theta: f64, l1: f64, l2: f64) -> Result<()> {
    if !in_angle_interval(delta, theta, true) {
        return Err(Error::Input(format!(
            "included angle {theta} outside I_{delta}"
        )));
    }
    let s = eps.product(delta);
    for l in [l1, l2] {
        if !in_length_interval(s, l) {
            return Err(Error::Input(format!("side {l} outside J_{s}")));
        }
    }
    Ok(())
}

/// Whether two sides `l1`, `l2` with included generalized angle `theta` at a
/// type-δ corner bound a type (ε, ε, δ) triangle.
pub fn d_membership(eps: VertexType, delta: VertexType, theta: f64, l1: f64, l2: f64) -> Result<bool> {
    check_sas_inputs(eps, delta, theta, l1, l2)?;
    if eps != VertexType::Hyperideal {
        return Ok(true);
    }
    Ok(match delta {
        VertexType::Interior => {
            l1.sinh() * l2.sinh() - theta.cos() * l1.cosh() * l2.cosh() > 1.0
        }
        VertexType::Ideal => theta > 2.0 * ((-l1).exp() + (-l2).exp()),
        VertexType::Hyperideal => {
            theta.cosh() * l1.sinh() * l2.sinh() - l1.cosh() * l2.cosh() > 1.0
        }
    })
}

/// Whether a radius triple admits a packing triangle with weights `phi`,
/// where `phi[k]` sits on the edge opposite vertex `k`.
pub fn m_membership(eps: VertexType, delta: VertexType, phi: [f64; 3], r: [f64; 3]) -> Result<bool> {
    check_packing_case(eps, delta, &phi)?;
    for k in 0..3 {
        let (i, j) = ((k + 1) % 3, (k + 2) % 3);
        if !d_membership(eps, delta, phi[k], r[i], r[j])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rejects packing types whose curvature map is not known to be injective.
pub fn check_packing_case(eps: VertexType, delta: VertexType, phi: &[f64]) -> Result<()> {
    if eps == VertexType::Interior {
        if delta != VertexType::Interior {
            return Err(Error::Unsupported(format!(
                "packing type (1,1,{delta}) has no rigidity result"
            )));
        }
        if let Some(p) = phi.iter().find(|&&p| !(PI / 2.0..=PI).contains(&p)) {
            return Err(Error::Unsupported(format!(
                "packing type (1,1,1) needs weights in [pi/2, pi], got {p}"
            )));
        }
    }
    for &p in phi {
        if !in_angle_interval(delta, p, true) {
            return Err(Error::Input(format!("weight {p} outside I_{delta}")));
        }
    }
    Ok(())
}

/// u = −∫_r^∞ dt/τ_s(t) in closed form.
pub fn u_from_r(s: i8, r: f64) -> Result<f64> {
    if !in_length_interval(s, r) {
        return Err(Error::Input(format!("radius {r} outside J_{s}")));
    }
    Ok(match s {
        // ln tanh(r/2)
        1 => {
            let x = (-r).exp();
            let head = if x < 0.5 { (-x).ln_1p() } else { (-(-r).exp_m1()).ln() };
            head - x.ln_1p()
        }
        // 2 arctan(e^r) − π
        -1 => -2.0 * (-r).exp().atan(),
        0 => -2.0 * (-r).exp(),
        _ => return Err(Error::Input(format!("sign must be -1, 0 or 1, got {s}"))),
    })
}

pub fn r_from_u(s: i8, u: f64) -> Result<f64> {
    let ok = u.is_finite() && u < 0.0 && (s != -1 || u > -PI / 2.0);
    if !ok {
        return Err(Error::Input(format!("u = {u} outside the image for sign {s}")));
    }
    let r = match s {
        1 => u.exp().ln_1p() - (-u.exp_m1()).ln(),
        -1 => -(-0.5 * u).tan().ln(),
        0 => -(-0.5 * u).ln(),
        _ => return Err(Error::Input(format!("sign must be -1, 0 or 1, got {s}"))),
    };
    if in_length_interval(s, r) {
        Ok(r)
    } else {
        Err(Error::Input(format!("u = {u} maps to the boundary of J_{s}")))
    }
}

/// du/dr = 1/τ_s(r).
pub fn du_dr(s: i8, r: f64) -> f64 {
    tau(s, r).recip()
}

fn tau_pow(s: i8, p: f64, t: f64) -> f64 {
    tau(s, t).powf(p)
}

fn rho_pow(eps: VertexType, h: f64, t: f64) -> f64 {
    rho(eps, t).powf(h)
}

/// dw/dl = τ_s^{h−1}(l).
pub fn dw_dl(h: f64, s: i8, l: f64) -> f64 {
    if h == 1.0 {
        1.0
    } else {
        tau_pow(s, h - 1.0, l)
    }
}

/// da/dθ = ρ_ε^h(θ).
pub fn da_dtheta(h: f64, eps: VertexType, theta: f64) -> f64 {
    if h == 0.0 {
        1.0
    } else {
        rho_pow(eps, h, theta)
    }
}

fn w_closed(h: f64, s: i8, l: f64) -> Option<f64> {
    if h == 1.0 {
        return Some(l - 1.0);
    }
    if s == 0 {
        let k = h - 1.0;
        return Some(2f64.powf(-k) * ((k * l).exp() - k.exp()) / k);
    }
    if h == 0.0 {
        return Some(u_from_r(s, l).ok()? - u_from_r(s, 1.0).ok()?);
    }
    if h == 2.0 {
        return Some(tau_prime(s, l) - tau_prime(s, 1.0));
    }
    if h == -1.0 {
        return Some(match s {
            1 => 1f64.tanh().recip() - l.tanh().recip(),
            _ => l.tanh() - 1f64.tanh(),
        });
    }
    None
}

/// w(l) = ∫_1^l τ_s^{h−1}.
pub fn w_from_l(h: f64, s: i8, l: f64) -> Result<f64> {
    if !in_length_interval(s, l) || !h.is_finite() {
        return Err(Error::Input(format!("length {l} outside J_{s}")));
    }
    if let Some(w) = w_closed(h, s, l) {
        return Ok(w);
    }
    quad::integrate(|t| tau_pow(s, h - 1.0, t), 1.0, l, QUAD_TOL)
}

pub fn l_from_w(h: f64, s: i8, w: f64) -> Result<f64> {
    if !w.is_finite() {
        return Err(Error::Input(format!("w = {w} is not finite")));
    }
    if h == 1.0 {
        let l = w + 1.0;
        return if in_length_interval(s, l) {
            Ok(l)
        } else {
            Err(Error::Input(format!("w = {w} outside the image for sign {s}")))
        };
    }
    if h == 0.0 && s != 0 {
        return r_from_u(s, w + u_from_r(s, 1.0)?);
    }
    let lo = if s == 0 { f64::NEG_INFINITY } else { 0.0 };
    quad::invert_increasing(
        |l| w_from_l(h, s, l),
        |l| dw_dl(h, s, l),
        w,
        lo,
        f64::INFINITY,
        1.0,
        INVERT_TOL,
    )
}

fn a_closed(h: f64, eps: VertexType, theta: f64) -> Option<f64> {
    use VertexType::*;
    if h == 0.0 {
        return Some(theta - 1.0);
    }
    match (eps, h) {
        (Ideal, h) if h == -1.0 => Some(theta.ln()),
        (Ideal, h) => Some((theta.powf(h + 1.0) - 1.0) / (h + 1.0)),
        (Interior, h) if h == 1.0 => Some(1f64.cos() - theta.cos()),
        (Hyperideal, h) if h == 1.0 => Some(theta.cosh() - 1f64.cosh()),
        (Interior, h) if h == 2.0 => {
            Some(0.5 * (theta - 1.0) - 0.25 * ((2.0 * theta).sin() - 2f64.sin()))
        }
        (Hyperideal, h) if h == 2.0 => {
            Some(0.25 * ((2.0 * theta).sinh() - 2f64.sinh()) - 0.5 * (theta - 1.0))
        }
        (Interior, h) if h == -1.0 => Some((0.5 * theta).tan().ln() - 0.5f64.tan().ln()),
        (Hyperideal, h) if h == -1.0 => Some((0.5 * theta).tanh().ln() - 0.5f64.tanh().ln()),
        _ => None,
    }
}

/// a(θ) = ∫_1^θ ρ_ε^h.
pub fn a_from_theta(h: f64, eps: VertexType, theta: f64) -> Result<f64> {
    if !in_angle_interval(eps, theta, false) || !h.is_finite() {
        return Err(Error::Input(format!("angle {theta} outside the open interval for type {eps}")));
    }
    if let Some(a) = a_closed(h, eps, theta) {
        return Ok(a);
    }
    quad::integrate(|t| rho_pow(eps, h, t), 1.0, theta, QUAD_TOL)
}

pub fn theta_from_a(h: f64, eps: VertexType, a: f64) -> Result<f64> {
    let hi = if eps == VertexType::Interior { PI } else { f64::INFINITY };
    let theta = if h == 0.0 {
        a + 1.0
    } else {
        quad::invert_increasing(
            |t| a_from_theta(h, eps, t),
            |t| da_dtheta(h, eps, t),
            a,
            0.0,
            hi,
            1.0,
            INVERT_TOL,
        )?
    };
    if in_angle_interval(eps, theta, false) {
        Ok(theta)
    } else {
        Err(Error::Input(format!("a = {a} outside the image for type {eps}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use VertexType::*;

    #[test]
    fn d_membership_examples() {
        assert!(d_membership(Interior, Interior, 1.0, 0.3, 7.0).unwrap());
        assert!(d_membership(Hyperideal, Interior, PI / 2.0, 1.0, 1.0).unwrap());
        assert!(!d_membership(Hyperideal, Ideal, 1.0, 0.0, 0.0).unwrap());
        assert!(!d_membership(Hyperideal, Hyperideal, 0.1, 0.1, 0.1).unwrap());
        assert!(d_membership(Interior, Interior, PI, 1.0, 1.0).unwrap());
        assert!(matches!(
            d_membership(Interior, Interior, 4.0, 1.0, 1.0),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            d_membership(Hyperideal, Interior, 1.0, -1.0, 1.0),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn m_membership_examples() {
        assert!(m_membership(Ideal, Ideal, [2.0; 3], [0.0; 3]).unwrap());
        assert!(m_membership(Interior, Interior, [PI; 3], [0.2, 3.0, 9.0]).unwrap());
        assert!(!m_membership(Hyperideal, Hyperideal, [0.1; 3], [0.1; 3]).unwrap());
        assert!(matches!(
            m_membership(Interior, Ideal, [1.0; 3], [1.0; 3]),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            m_membership(Interior, Interior, [1.0; 3], [1.0; 3]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn u_examples() {
        assert!((u_from_r(1, 3f64.ln()).unwrap() + 2f64.ln()).abs() < 1e-15);
        let r = (1.0 + 2f64.sqrt()).ln();
        assert!((u_from_r(-1, r).unwrap() + PI / 4.0).abs() < 1e-15);
        assert!((u_from_r(0, 2f64.ln()).unwrap() + 1.0).abs() < 1e-15);
        assert!(u_from_r(1, 0.0).is_err());
        assert!(r_from_u(-1, -2.0).is_err());
        assert!(r_from_u(1, 0.5).is_err());
    }

    #[test]
    fn w_and_a_examples() {
        for h in [-1.0, 0.0, 0.5, 1.0, 2.0, 3.5] {
            for s in [-1, 0, 1] {
                assert_eq!(w_from_l(h, s, 1.0).unwrap(), 0.0);
            }
            for e in VertexType::ALL {
                assert_eq!(a_from_theta(h, e, 1.0).unwrap(), 0.0);
            }
        }
        assert!((w_from_l(1.0, 1, 2.5).unwrap() - 1.5).abs() < 1e-15);
        assert!((a_from_theta(0.0, Interior, PI / 4.0).unwrap() - (PI / 4.0 - 1.0)).abs() < 1e-15);
        assert!(a_from_theta(0.0, Interior, PI).is_err());
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for s in [-1i8, 0, 1] {
            for h in [-1.0, 0.0, 2.0] {
                for l in [0.3, 1.7, 3.0] {
                    let q = quad::integrate(|t| tau_pow(s, h - 1.0, t), 1.0, l, 1e-13).unwrap();
                    assert!((w_from_l(h, s, l).unwrap() - q).abs() < 1e-11, "s={s} h={h} l={l}");
                }
            }
        }
        for e in VertexType::ALL {
            for h in [-1.0, 1.0, 2.0, 3.0] {
                for t in [0.3, 1.7, 2.9] {
                    let q = quad::integrate(|x| rho_pow(e, h, x), 1.0, t, 1e-13).unwrap();
                    assert!((a_from_theta(h, e, t).unwrap() - q).abs() < 1e-11, "e={e} h={h} t={t}");
                }
            }
        }
    }

    #[test]
    fn inverses_round_trip() {
        for s in [-1i8, 0, 1] {
            for h in [-1.0, 0.0, 0.5, 1.0, 2.0] {
                for l in [0.05, 0.8, 2.5] {
                    let w = w_from_l(h, s, l).unwrap();
                    let back = l_from_w(h, s, w).unwrap();
                    assert!((back - l).abs() < 1e-12, "s={s} h={h} l={l} back={back}");
                }
            }
        }
        for e in VertexType::ALL {
            for h in [-1.0, 0.0, 0.5, 1.0, 2.0] {
                for t in [0.1, 1.3, 3.0] {
                    let a = a_from_theta(h, e, t).unwrap();
                    let back = theta_from_a(h, e, a).unwrap();
                    assert!((back - t).abs() < 1e-12, "e={e} h={h} t={t} back={back}");
                }
            }
        }
    }

    #[test]
    fn w_outside_image_is_rejected() {
        // h = 0, s = 1: w is bounded above by −u(1).
        let bound = -u_from_r(1, 1.0).unwrap();
        assert!(l_from_w(0.0, 1, bound + 0.1).is_err());
        // h = 0.5, s = 1: w is bounded below since ∫_0 t^{-1/2} converges.
        assert!(l_from_w(0.5, 1, -10.0).is_err());
    }
}
