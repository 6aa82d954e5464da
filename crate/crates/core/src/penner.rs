//! Decorated ideal triangles and Penner's edge invariants.
//!
//! For a decorated ideal triangle with lengths l (any real numbers),
//!
//! ```text
//! θ_i = 2 exp((l_i − l_j − l_k)/2),     x_i = ½(θ_j + θ_k − θ_i)
//! ```
//!
//! and ω = Σ x_i dl_i integrates to W(l) = 6 − Σθ_i, strictly concave.
//! On a surface, Ψ̃(l)(e) sums x over the two sides glued along e and is the
//! gradient of H = Σ_triangles W.

use nalgebra::{DMatrix, DVector, Matrix3};
use serde::Serialize;

use crate::complex::{enumerate_edge_cycles, EdgeCycle, TriangulatedSurface, DEFAULT_CYCLE_CAP};
use crate::error::{Error, Result};
use crate::newton::{self, NewtonOptions};
use crate::quad;

const MAX_EXPONENT: f64 = 700.0;

pub fn ideal_angles(l: [f64; 3]) -> Result<[f64; 3]> {
    let mut t = [0.0; 3];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let x = 0.5 * (l[i] - l[j] - l[k]);
        if !x.is_finite() || x > MAX_EXPONENT {
            return Err(Error::Overflow(format!(
                "angle exponent {x} at corner {} for lengths {l:?}",
                i + 1
            )));
        }
        t[i] = 2.0 * x.exp();
    }
    Ok(t)
}

pub fn radius_invariants(l: [f64; 3]) -> Result<[f64; 3]> {
    let t = ideal_angles(l)?;
    Ok([
        0.5 * (t[1] + t[2] - t[0]),
        0.5 * (t[2] + t[0] - t[1]),
        0.5 * (t[0] + t[1] - t[2]),
    ])
}

/// W(l) = 6 − Σθ, normalized so that W(0) = 0.
pub fn triangle_energy(l: [f64; 3]) -> Result<f64> {
    let t = ideal_angles(l)?;
    Ok(6.0 - t.iter().sum::<f64>())
}

/// ∂x_i/∂l_j: −Σθ/4 on the diagonal, x_k/2 off it.
pub fn triangle_hessian(l: [f64; 3]) -> Result<Matrix3<f64>> {
    let t = ideal_angles(l)?;
    let x = radius_invariants(l)?;
    let d = -0.25 * (t[0] + t[1] + t[2]);
    Ok(Matrix3::new(
        d,
        0.5 * x[2],
        0.5 * x[1],
        0.5 * x[2],
        d,
        0.5 * x[0],
        0.5 * x[1],
        0.5 * x[0],
        d,
    ))
}

/// ∫_0^1 ω(s·l)(l) ds by quadrature, independent of the closed form.
pub fn energy_by_path_integral(l: [f64; 3], tol: f64) -> Result<f64> {
    let mut err = None;
    let v = quad::integrate(
        |s| match radius_invariants([s * l[0], s * l[1], s * l[2]]) {
            Ok(x) => x[0] * l[0] + x[1] * l[1] + x[2] * l[2],
            Err(e) => {
                err = Some(e);
                f64::NAN
            }
        },
        0.0,
        1.0,
        tol,
    );
    match err {
        Some(e) => Err(e),
        None => v,
    }
}

/// Ideal triangulations need a punctured surface of negative Euler characteristic.
pub fn check_surface(surface: &TriangulatedSurface) -> Result<()> {
    let chi = surface.euler_characteristic() - surface.vertex_count() as i64;
    if chi < 0 {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "punctured surface has Euler characteristic {chi}, needs to be negative"
        )))
    }
}

fn check_len(surface: &TriangulatedSurface, v: &[f64], what: &str) -> Result<()> {
    if v.len() != surface.edge_count() {
        return Err(Error::Input(format!(
            "{what} has {} entries for {} edges",
            v.len(),
            surface.edge_count()
        )));
    }
    if let Some(x) = v.iter().find(|x| !x.is_finite()) {
        return Err(Error::Input(format!("{what} contains non-finite value {x}")));
    }
    Ok(())
}

/// Lengths of the three sides of triangle `t`.
pub fn triangle_lengths(surface: &TriangulatedSurface, l: &[f64], t: usize) -> [f64; 3] {
    [
        l[surface.side_edge(t, 0)],
        l[surface.side_edge(t, 1)],
        l[surface.side_edge(t, 2)],
    ]
}

/// Ψ̃(l), indexed by edge.
pub fn psi_map(surface: &TriangulatedSurface, l: &[f64]) -> Result<Vec<f64>> {
    check_len(surface, l, "length vector")?;
    let mut z = vec![0.0; surface.edge_count()];
    for t in 0..surface.triangle_count() {
        let x = radius_invariants(triangle_lengths(surface, l, t))?;
        for s in 0..3 {
            z[surface.side_edge(t, s)] += x[s];
        }
    }
    Ok(z)
}

/// H(l) = Σ_triangles W.
pub fn total_energy(surface: &TriangulatedSurface, l: &[f64]) -> Result<f64> {
    check_len(surface, l, "length vector")?;
    (0..surface.triangle_count())
        .map(|t| triangle_energy(triangle_lengths(surface, l, t)))
        .sum()
}

pub fn total_hessian(surface: &TriangulatedSurface, l: &[f64]) -> Result<DMatrix<f64>> {
    check_len(surface, l, "length vector")?;
    let n = surface.edge_count();
    let mut h = DMatrix::zeros(n, n);
    for t in 0..surface.triangle_count() {
        let m = triangle_hessian(triangle_lengths(surface, l, t))?;
        for a in 0..3 {
            for b in 0..3 {
                h[(surface.side_edge(t, a), surface.side_edge(t, b))] += m[(a, b)];
            }
        }
    }
    Ok(h)
}

/// Both sides of the cycle identity: Σ Ψ̃(e_i) over the cycle's edges and
/// Σ of the angles between consecutive cycle edges.
pub fn edge_cycle_sums(surface: &TriangulatedSurface, l: &[f64], cycle: &EdgeCycle) -> Result<(f64, f64)> {
    if !cycle.is_valid(surface) {
        return Err(Error::Input(format!("{cycle} is not an edge cycle")));
    }
    let z = psi_map(surface, l)?;
    let lhs = cycle.edges(surface).iter().map(|&e| z[e]).sum();
    let mut rhs = 0.0;
    for s in &cycle.steps {
        rhs += ideal_angles(triangle_lengths(surface, l, s.triangle))?[s.corner()];
    }
    Ok((lhs, rhs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolytopeCheck {
    pub feasible: bool,
    pub cycles_checked: usize,
    /// Smallest cycle sum found.
    pub min_sum: f64,
    /// The cycle attaining `min_sum` when it is not positive.
    #[serde(skip)]
    pub witness: Option<EdgeCycle>,
}

/// Tests Σ z(e_i) > 0 over every edge cycle using each edge at most twice.
pub fn polytope_check(surface: &TriangulatedSurface, z: &[f64], cap: usize) -> Result<PolytopeCheck> {
    check_len(surface, z, "edge invariant")?;
    let cycles = enumerate_edge_cycles(surface, 2, cap)?;
    let mut min_sum = f64::INFINITY;
    let mut argmin = None;
    for c in &cycles {
        let s: f64 = c.edges(surface).iter().map(|&e| z[e]).sum();
        if s < min_sum {
            min_sum = s;
            argmin = Some(c.clone());
        }
    }
    let feasible = min_sum > 0.0;
    Ok(PolytopeCheck {
        feasible,
        cycles_checked: cycles.len(),
        min_sum,
        witness: if feasible { None } else { argmin },
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiSolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub check_feasibility: bool,
    pub cycle_cap: usize,
}

impl Default for PsiSolveOptions {
    fn default() -> Self {
        PsiSolveOptions {
            tol: 1e-12,
            max_iter: 50,
            check_feasibility: true,
            cycle_cap: DEFAULT_CYCLE_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsiSolution {
    pub lengths: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Finds l with Ψ̃(l) = z by maximizing H(l) − ⟨z, l⟩ from l ≡ 0.
pub fn psi_solve(surface: &TriangulatedSurface, z: &[f64], opts: PsiSolveOptions) -> Result<PsiSolution> {
    check_surface(surface)?;
    check_len(surface, z, "edge invariant")?;
    if opts.check_feasibility {
        let check = polytope_check(surface, z, opts.cycle_cap)?;
        if !check.feasible {
            return Err(Error::Infeasible {
                message: format!("edge-cycle sum {} is not positive", check.min_sum),
                witness: check.witness.map(|c| c.describe(surface)),
            });
        }
    }
    let zv = DVector::from_column_slice(z);
    let eval = |l: &DVector<f64>| -> Result<(DVector<f64>, DMatrix<f64>)> {
        let g = DVector::from_vec(psi_map(surface, l.as_slice())?) - &zv;
        Ok((g, total_hessian(surface, l.as_slice())?))
    };
    let res = newton::maximize(
        DVector::zeros(surface.edge_count()),
        eval,
        |_| true,
        NewtonOptions {
            tol: opts.tol,
            max_iter: opts.max_iter,
        },
    );
    let rep = res.map_err(|f| f.into_error())?;
    Ok(PsiSolution {
        lengths: rep.x.as_slice().to_vec(),
        iterations: rep.iterations,
        residual: rep.residual,
    })
}
