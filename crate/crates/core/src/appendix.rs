//! Per-type cosine laws, one table for each of the ten unordered triangle types.
//!
//! These are written out type by type with ordinary trigonometric and
//! hyperbolic functions, independently of the uniform ρ/τ formulation in
//! [`crate::trig`], so the two can be checked against each other. Ordered
//! types that are not in table order are permuted into a table and back.

use crate::error::{Error, Result};
use crate::trig::{check_angles, check_lengths, GeneralizedTriangle, TriangleType};

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [1, 2, 0],
    [2, 0, 1],
    [0, 2, 1],
    [1, 0, 2],
    [2, 1, 0],
];

/// Which table and vertex permutation handle `ttype`.
fn locate(ttype: TriangleType) -> (usize, [usize; 3]) {
    let reps = TriangleType::representatives();
    for perm in PERMS {
        let p = ttype.permuted(perm);
        if let Some(idx) = reps.iter().position(|r| *r == p) {
            return (idx, perm);
        }
    }
    unreachable!("every ordered type is a permutation of a representative")
}

fn acos(x: f64, what: &str) -> Result<f64> {
    if (-1.0..=1.0).contains(&x) {
        Ok(x.acos())
    } else {
        Err(Error::domain(what, format!("cosine value {x} outside [-1, 1]")))
    }
}

fn acosh(x: f64, what: &str) -> Result<f64> {
    if x >= 1.0 {
        Ok(x.acosh())
    } else {
        Err(Error::domain(what, format!("cosh value {x} below 1")))
    }
}

fn ln_half(x: f64, what: &str) -> Result<f64> {
    // e^l / 2 = x
    if x > 0.0 && x.is_finite() {
        Ok((2.0 * x).ln())
    } else {
        Err(Error::domain(what, format!("e^l/2 value {x} is not positive")))
    }
}

fn sqrt_pos(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 {
        Ok(x.sqrt())
    } else {
        Err(Error::domain(what, format!("squared value {x} is not positive")))
    }
}

fn asinh_pos(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x.asinh())
    } else {
        Err(Error::domain(what, format!("sinh value {x} is not positive")))
    }
}

fn lengths_in_table(table: usize, t: [f64; 3]) -> Result<[f64; 3]> {
    let (c, s) = (|x: f64| x.cos(), |x: f64| x.sin());
    let (ch, sh) = (|x: f64| x.cosh(), |x: f64| x.sinh());
    let mut l = [0.0; 3];
    match table {
        // (1,1,1)
        0 => {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                l[i] = acosh((c(t[i]) + c(t[j]) * c(t[k])) / (s(t[j]) * s(t[k])), "edge")?;
            }
        }
        // (1,1,-1)
        1 => {
            for (i, j) in [(0, 1), (1, 0)] {
                l[i] = asinh_pos((c(t[i]) + c(t[j]) * ch(t[2])) / (s(t[j]) * sh(t[2])), "edge")?;
            }
            l[2] = acosh((ch(t[2]) + c(t[0]) * c(t[1])) / (s(t[0]) * s(t[1])), "edge 3")?;
        }
        // (-1,-1,1)
        2 => {
            for (i, j) in [(0, 1), (1, 0)] {
                l[i] = asinh_pos((ch(t[i]) + ch(t[j]) * c(t[2])) / (sh(t[j]) * s(t[2])), "edge")?;
            }
            l[2] = acosh((c(t[2]) + ch(t[0]) * ch(t[1])) / (sh(t[0]) * sh(t[1])), "edge 3")?;
        }
        // (-1,-1,-1)
        3 => {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                l[i] = acosh((ch(t[i]) + ch(t[j]) * ch(t[k])) / (sh(t[j]) * sh(t[k])), "edge")?;
            }
        }
        // (1,1,0)
        4 => {
            for (i, j) in [(0, 1), (1, 0)] {
                l[i] = ln_half((c(t[i]) + c(t[j])) / (t[2] * s(t[j])), "edge")?;
            }
            l[2] = acosh((1.0 + c(t[0]) * c(t[1])) / (s(t[0]) * s(t[1])), "edge 3")?;
        }
        // (1,-1,0)
        5 => {
            l[0] = ln_half((c(t[0]) + ch(t[1])) / (t[2] * sh(t[1])), "edge 1")?;
            l[1] = ln_half((ch(t[1]) + c(t[0])) / (t[2] * s(t[0])), "edge 2")?;
            l[2] = asinh_pos((1.0 + c(t[0]) * ch(t[1])) / (s(t[0]) * sh(t[1])), "edge 3")?;
        }
        // (-1,-1,0)
        6 => {
            for (i, j) in [(0, 1), (1, 0)] {
                l[i] = ln_half((ch(t[i]) + ch(t[j])) / (t[2] * sh(t[j])), "edge")?;
            }
            l[2] = acosh((1.0 + ch(t[0]) * ch(t[1])) / (sh(t[0]) * sh(t[1])), "edge 3")?;
        }
        // (0,0,1)
        7 => {
            for (i, j) in [(0, 1), (1, 0)] {
                l[i] = ln_half((1.0 + c(t[2])) / (t[j] * s(t[2])), "edge")?;
            }
            l[2] = ln_half((1.0 + c(t[2])) / (t[0] * t[1]), "edge 3")?;
        }
        // (0,0,-1)
        8 => {
            for (i, j) in [(0, 1), (1, 0)] {
                l[i] = ln_half((1.0 + ch(t[2])) / (t[j] * sh(t[2])), "edge")?;
            }
            l[2] = ln_half((1.0 + ch(t[2])) / (t[0] * t[1]), "edge 3")?;
        }
        // (0,0,0)
        _ => {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                l[i] = ln_half(2.0 / (t[j] * t[k]), "edge")?;
            }
        }
    }
    Ok(l)
}

fn angles_in_table(table: usize, l: [f64; 3]) -> Result<[f64; 3]> {
    let (ch, sh, ex) = (|x: f64| x.cosh(), |x: f64| x.sinh(), |x: f64| x.exp());
    let mut t = [0.0; 3];
    match table {
        0 => {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                t[i] = acos((-ch(l[i]) + ch(l[j]) * ch(l[k])) / (sh(l[j]) * sh(l[k])), "corner")?;
            }
        }
        1 => {
            for (i, j) in [(0, 1), (1, 0)] {
                t[i] = acos((-sh(l[i]) + sh(l[j]) * ch(l[2])) / (ch(l[j]) * sh(l[2])), "corner")?;
            }
            t[2] = acosh((ch(l[2]) + sh(l[0]) * sh(l[1])) / (ch(l[0]) * ch(l[1])), "corner 3")?;
        }
        2 => {
            // The hyperideal corners carry cosh θ_i on the left-hand side.
            for (i, j) in [(0, 1), (1, 0)] {
                t[i] = acosh((sh(l[i]) + sh(l[j]) * ch(l[2])) / (ch(l[j]) * sh(l[2])), "corner")?;
            }
            t[2] = acos((-ch(l[2]) + sh(l[0]) * sh(l[1])) / (ch(l[0]) * ch(l[1])), "corner 3")?;
        }
        3 => {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                t[i] = acosh((ch(l[i]) + ch(l[j]) * ch(l[k])) / (sh(l[j]) * sh(l[k])), "corner")?;
            }
        }
        4 => {
            for (i, j) in [(0, 1), (1, 0)] {
                t[i] = acos((-ex(l[i]) + ex(l[j]) * ch(l[2])) / (ex(l[j]) * sh(l[2])), "corner")?;
            }
            let q = 2.0 * (ch(l[2]) - ch(l[0] - l[1])) * 4.0 * ex(-l[0] - l[1]);
            t[2] = sqrt_pos(q, "corner 3")?;
        }
        5 => {
            t[0] = acos((-ex(l[0]) + ex(l[1]) * sh(l[2])) / (ex(l[1]) * ch(l[2])), "corner 1")?;
            t[1] = acosh((ex(l[1]) + ex(l[0]) * sh(l[2])) / (ex(l[0]) * ch(l[2])), "corner 2")?;
            let q = 2.0 * (sh(l[2]) + sh(l[1] - l[0])) * 4.0 * ex(-l[0] - l[1]);
            t[2] = sqrt_pos(q, "corner 3")?;
        }
        6 => {
            for (i, j) in [(0, 1), (1, 0)] {
                t[i] = acosh((ex(l[i]) + ex(l[j]) * ch(l[2])) / (ex(l[j]) * sh(l[2])), "corner")?;
            }
            let q = 2.0 * (ch(l[2]) + ch(l[0] - l[1])) * 4.0 * ex(-l[0] - l[1]);
            t[2] = sqrt_pos(q, "corner 3")?;
        }
        7 => {
            for (i, j) in [(0, 1), (1, 0)] {
                let q = 4.0 * (ex(l[i]) - ex(l[2] - l[j])) / ex(l[j] + l[2]);
                t[i] = sqrt_pos(q, "corner")?;
            }
            let s2 = ex(l[2] - l[0] - l[1]);
            if !(s2 > 0.0 && s2 <= 1.0) {
                return Err(Error::domain("corner 3", format!("sin^2 value {s2} outside (0, 1]")));
            }
            t[2] = 2.0 * s2.sqrt().asin();
        }
        8 => {
            for (i, j) in [(0, 1), (1, 0)] {
                let q = 4.0 * (ex(l[i]) + ex(l[2] - l[j])) / ex(l[j] + l[2]);
                t[i] = sqrt_pos(q, "corner")?;
            }
            t[2] = 2.0 * ex(l[2] - l[0] - l[1]).sqrt().asinh();
        }
        _ => {
            for i in 0..3 {
                let (j, k) = ((i + 1) % 3, (i + 2) % 3);
                t[i] = 2.0 * (0.5 * (l[i] - l[j] - l[k])).exp();
            }
        }
    }
    Ok(t)
}

/// Lengths from angles through the per-type table.
pub fn lengths_from_angles(ttype: TriangleType, angles: [f64; 3]) -> Result<[f64; 3]> {
    check_angles(ttype, &angles)?;
    let (table, perm) = locate(ttype);
    let local = [angles[perm[0]], angles[perm[1]], angles[perm[2]]];
    let res = lengths_in_table(table, local)?;
    let mut out = [0.0; 3];
    for c in 0..3 {
        out[perm[c]] = res[c];
    }
    Ok(out)
}

/// Angles from lengths through the per-type table.
pub fn angles_from_lengths(ttype: TriangleType, lengths: [f64; 3]) -> Result<[f64; 3]> {
    check_lengths(ttype, &lengths)?;
    let (table, perm) = locate(ttype);
    let local = [lengths[perm[0]], lengths[perm[1]], lengths[perm[2]]];
    let res = angles_in_table(table, local)?;
    let mut out = [0.0; 3];
    for c in 0..3 {
        out[perm[c]] = res[c];
    }
    Ok(out)
}

/// Given data for [`solve`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Given {
    Angles([f64; 3]),
    Lengths([f64; 3]),
}

/// Solves a triangle using only the per-type tables.
pub fn solve(ttype: TriangleType, given: Given) -> Result<GeneralizedTriangle> {
    let (angles, lengths) = match given {
        Given::Angles(a) => (a, lengths_from_angles(ttype, a)?),
        Given::Lengths(l) => (angles_from_lengths(ttype, l)?, l),
    };
    Ok(GeneralizedTriangle {
        ttype,
        angles,
        lengths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::{law_angles_from_lengths, law_length_from_angles, VertexType::*};
    use std::f64::consts::PI;

    #[test]
    fn every_ordered_type_has_a_table() {
        for t in TriangleType::all_ordered() {
            let (idx, perm) = locate(t);
            assert_eq!(t.permuted(perm), TriangleType::representatives()[idx]);
        }
    }

    #[test]
    fn regular_examples() {
        let t = TriangleType::new(Interior, Interior, Interior);
        let l = (2.0 + 5f64.sqrt()).acosh();
        let a = angles_from_lengths(t, [l; 3]).unwrap();
        for x in a {
            assert!((x - PI / 5.0).abs() < 1e-12);
        }
        let t = TriangleType::new(Ideal, Ideal, Ideal);
        let tri = solve(t, Given::Angles([2.0; 3])).unwrap();
        for i in 0..3 {
            assert!((tri.angles[i] / tri.lengths[i].exp() - 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hyperideal_pair_with_ideal_corner() {
        let t = TriangleType::new(Hyperideal, Hyperideal, Ideal);
        // Pick θ3 so that the table gives cosh l3 = cosh(1.5).
        let l3: f64 = 1.5;
        let theta3 = (8.0 * (l3.cosh() + 1.0) * (-2.0f64).exp()).sqrt();
        let a = angles_from_lengths(t, [1.0, 1.0, l3]).unwrap();
        assert!((a[2] - theta3).abs() < 1e-13);
        let u = law_angles_from_lengths(t, [1.0, 1.0, l3]).unwrap();
        for i in 0..3 {
            assert!((a[i] - u[i]).abs() < 1e-12 * u[i]);
        }
    }

    #[test]
    fn permuted_types_agree_with_uniform_laws() {
        let angles = [0.7, 1.1, 0.9];
        for t in TriangleType::all_ordered() {
            let Ok(u) = law_length_from_angles(t, angles) else {
                continue;
            };
            let a = lengths_from_angles(t, angles).unwrap();
            for i in 0..3 {
                assert!((a[i] - u[i]).abs() <= 1e-11 * u[i].abs().max(1e-3), "{t}: {a:?} vs {u:?}");
            }
        }
    }
}
