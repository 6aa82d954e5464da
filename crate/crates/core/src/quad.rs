//! Adaptive Gauss–Kronrod quadrature and bracketed inversion of monotone maps.

use crate::error::{Error, Result};

// 15-point Kronrod nodes (non-negative half) with the embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Maximum number of subintervals kept by [`integrate`].
pub const MAX_SUBINTERVALS: usize = 4000;

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// ∫_a^b f with absolute tolerance `tol`. Reversed limits flip the sign.
///
/// Subdivision is global: the interval with the largest error estimate is
/// bisected until the summed estimate drops below `tol`.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Quadrature(format!("non-finite limits [{a}, {b}]")));
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let (v, e) = gk15(&mut f, lo, hi);
    let mut parts = vec![(lo, hi, v, e)];
    loop {
        let total: f64 = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature(format!(
                "integrand is not finite on [{lo}, {hi}]"
            )));
        }
        if err <= tol {
            return Ok(sign * total);
        }
        if parts.len() >= MAX_SUBINTERVALS {
            return Err(Error::Quadrature(format!(
                "error estimate {err:e} above {tol:e} after {} subintervals",
                parts.len()
            )));
        }
        let (idx, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (l, r, _, _) = parts.swap_remove(idx);
        let m = 0.5 * (l + r);
        if m <= l || m >= r {
            return Err(Error::Quadrature(format!(
                "interval [{l}, {r}] cannot be bisected further"
            )));
        }
        let (v1, e1) = gk15(&mut f, l, m);
        let (v2, e2) = gk15(&mut f, m, r);
        parts.push((l, m, v1, e1));
        parts.push((m, r, v2, e2));
    }
}

/// Solves `f(x) = y` for a strictly increasing `f` on the open interval
/// `(lo, hi)` (either end may be infinite) with derivative `df`.
///
/// Newton steps are kept inside a shrinking bracket and replaced by
/// bisection whenever they leave it. Fails with `Error::Input` when `y` is
/// outside the image of `f`.
pub fn invert_increasing(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut df: impl FnMut(f64) -> f64,
    y: f64,
    lo: f64,
    hi: f64,
    x0: f64,
    tol: f64,
) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::Input(format!("cannot invert at non-finite value {y}")));
    }
    let f0 = f(x0)? - y;
    if f0 == 0.0 {
        return Ok(x0);
    }
    // Bracket: walk away from x0 toward the side where the root lies.
    let (mut a, mut b);
    if f0 < 0.0 {
        a = x0;
        let mut step = 1.0f64.max(x0.abs());
        let mut x = x0;
        loop {
            let next = if hi.is_finite() {
                x + 0.5 * (hi - x)
            } else {
                x + step
            };
            if next == x || (hi.is_finite() && hi - next < 1e-15 * hi.abs().max(1.0)) {
                return Err(Error::Input(format!(
                    "value {y} is above the image of the coordinate map"
                )));
            }
            let v = f(next)?;
            if !v.is_finite() || v >= y {
                b = next;
                break;
            }
            a = next;
            x = next;
            step *= 2.0;
            if !hi.is_finite() && step > 1e6 {
                return Err(Error::Input(format!(
                    "value {y} is above the image of the coordinate map"
                )));
            }
        }
    } else {
        b = x0;
        let mut step = 1.0f64.max(x0.abs());
        let mut x = x0;
        loop {
            let next = if lo.is_finite() {
                lo + 0.5 * (x - lo)
            } else {
                x - step
            };
            if next == x || (lo.is_finite() && next - lo < 1e-300) {
                return Err(Error::Input(format!(
                    "value {y} is below the image of the coordinate map"
                )));
            }
            let v = f(next)?;
            if v <= y {
                a = next;
                break;
            }
            b = next;
            x = next;
            step *= 2.0;
            if !lo.is_finite() && step > 1e6 {
                return Err(Error::Input(format!(
                    "value {y} is below the image of the coordinate map"
                )));
            }
        }
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let fx = f(x)? - y;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            a = x;
        } else {
            b = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        let next = if d > 0.0 && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (next - x).abs() <= tol * next.abs() || b - a <= tol * a.abs().max(b.abs()) {
            return Ok(next);
        }
        x = next;
    }
    Ok(x)
}
