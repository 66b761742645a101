//! Expected values and leading 1/n variance coefficients of the rank
//! estimators.
//!
//! Everything is evaluated in copula scale. With C the copula, c its
//! density, Cb(u,v) = 1 - u - v + C(u,v) the survival function and E[.]
//! the expectation under c, the leading coefficients are
//!
//! ```text
//! n Var(tau_n) -> 16 ( E[(C + Cb)^2] - 4 E[C]^2 )
//! n Var(r_n)   -> 36 ( E[((1+u) Cb + (1-u) C)^2] - ((tau+1)/2 - (rho_S+1)/4)^2 )
//!                 + 36 ( Q1 + Q2 + Q3 + Q4 )
//! ```
//!
//! with the correction terms built from two kernels,
//!
//! ```text
//! A(u,v) = int_{u1<=u, v1<=v} u1 c du1 dv1 - int_{u1>=u, v1>=v} u1 c du1 dv1
//! B(u)   = int_{u1>=u} C(u, v1) c(u1, v1) du1 dv1
//! ```
//!
//! Integrating by parts reduces both kernels to one-dimensional integrals
//! of the copula itself,
//!
//! ```text
//! B(u)   = int_0^1 C(u, v1) dv1 - u^2 / 2
//! A(u,v) = v - (1 - u^2)/2 - int_0^1 C(u1, v) du1
//! ```
//!
//! so their tabulation inherits the full tensor-rule accuracy instead of
//! the O(1/m^2) cumulative-sum error. The quadrant pieces A+ and A- are
//! still tabulated on demand for verification. The correction terms are
//!
//! ```text
//! Q1 = -4 E[C B],
//! Q2 =  4 E[u (C - Cb) B] + 2 E[B A-] - 2 E[B A+]   (= 4 E[u (C - Cb) B] - 2 E[B A])
//! Q3 =  2 E[(C + Cb) A]
//! Q4 =  E[A^2] + 2 E[u (Cb - C) A]
//! ```
//!
//! Q3 carries the factor two that reconciles the published component
//! polynomials with the total: without it the FGM closed form
//! 1/4 - 7 t^2/180 is not reproduced, with it the quadrature matches the
//! closed form to machine precision.

use serde::{Deserialize, Serialize};

use crate::copulas::{BivariateModel, Family, Method};
use crate::error::{Error, Result};
use crate::quadrature::{
    cumulative_quadrant, pairwise_sum, CopulaSurface, GaussLegendre, Grid2D, Quadrant,
};

/// Default grid resolution for the variance quadrature.
pub const DEFAULT_RESOLUTION: usize = 512;
/// Resolution cap for the doubling refinement.
pub const MAX_RESOLUTION: usize = 4096;
/// A doubling step must change the coefficient by less than this before
/// the result is accepted.
pub const REFINEMENT_TOL: f64 = 1e-6;

/// Copula-scale kernel tabulation shared by the variance functionals.
pub struct KernelGrids {
    pub u: GaussLegendre,
    pub v: GaussLegendre,
    /// copula density at (u_i, v_j), row-major
    density: Vec<f64>,
    /// copula CDF at (u_i, v_j), row-major
    cdf: Vec<f64>,
    /// int_0^1 C(u1, v_j) du1 per column
    col_int: Vec<f64>,
    /// B(u_i) per row
    b: Vec<f64>,
}

impl KernelGrids {
    pub fn build(surface: &impl CopulaSurface, m: usize) -> Self {
        use rayon::prelude::*;
        let u = GaussLegendre::new(m);
        let v = GaussLegendre::new(m);
        let rows: Vec<Vec<f64>> = (0..m)
            .into_par_iter()
            .map(|i| {
                let ui = u.nodes[i];
                v.nodes.iter().map(|&vj| surface.copula_cdf(ui, vj)).collect()
            })
            .collect();
        let density: Vec<f64> = (0..m)
            .into_par_iter()
            .flat_map_iter(|i| {
                let ui = u.nodes[i];
                v.nodes
                    .iter()
                    .map(move |&vj| surface.copula_density(ui, vj))
                    .collect::<Vec<_>>()
            })
            .collect();

        let mut col_int = vec![0.0; m];
        for (i, row) in rows.iter().enumerate() {
            let wi = u.weights[i];
            for (j, &cij) in row.iter().enumerate() {
                col_int[j] += wi * cij;
            }
        }
        let b: Vec<f64> = (0..m)
            .map(|i| {
                let terms: Vec<f64> = (0..m).map(|j| v.weights[j] * rows[i][j]).collect();
                pairwise_sum(&terms) - u.nodes[i] * u.nodes[i] / 2.0
            })
            .collect();
        let cdf = rows.into_iter().flatten().collect();
        Self {
            u,
            v,
            density,
            cdf,
            col_int,
            b,
        }
    }

    pub fn m(&self) -> usize {
        self.u.len()
    }

    pub fn density_at(&self, i: usize, j: usize) -> f64 {
        self.density[i * self.m() + j]
    }

    pub fn cdf_at(&self, i: usize, j: usize) -> f64 {
        self.cdf[i * self.m() + j]
    }

    /// A(u_i, v_j) by the reduced form.
    pub fn a(&self, i: usize, j: usize) -> f64 {
        let u = self.u.nodes[i];
        self.v.nodes[j] - (1.0 - u * u) / 2.0 - self.col_int[j]
    }

    /// B(u_i).
    pub fn b(&self, i: usize) -> f64 {
        self.b[i]
    }

    /// Lower-left quadrant tabulation of u1 c(u1, v1): A+.
    pub fn a_plus_grid(&self) -> Grid2D {
        cumulative_quadrant(&self.field_u_density(), Quadrant::LowerLeft)
    }

    /// Upper-right quadrant tabulation of u1 c(u1, v1): A-.
    pub fn a_minus_grid(&self) -> Grid2D {
        cumulative_quadrant(&self.field_u_density(), Quadrant::UpperRight)
    }

    fn field_u_density(&self) -> Grid2D {
        let m = self.m();
        let mut values = Vec::with_capacity(m * m);
        for i in 0..m {
            for j in 0..m {
                values.push(self.u.nodes[i] * self.density_at(i, j));
            }
        }
        Grid2D {
            u: self.u.clone(),
            v: self.v.clone(),
            values,
        }
    }

    /// Expectation under the copula density of a node-indexed field.
    pub fn expect(&self, f: impl Fn(usize, usize) -> f64 + Sync) -> f64 {
        use rayon::prelude::*;
        let m = self.m();
        let rows: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|i| {
                let terms: Vec<f64> = (0..m)
                    .map(|j| {
                        self.u.weights[i]
                            * self.v.weights[j]
                            * self.density_at(i, j)
                            * f(i, j)
                    })
                    .collect();
                pairwise_sum(&terms)
            })
            .collect();
        pairwise_sum(&rows)
    }
}

/// Breakdown of the r_n variance quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceComponents {
    pub main: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EstimatorKind {
    Pearson,
    Kendall,
    RNew,
}

/// Leading coefficient c with Var ~ c / n for one estimator and model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    pub estimator: EstimatorKind,
    pub model: BivariateModel,
    pub leading_coeff: f64,
    pub method: Method,
    pub components: Option<VarianceComponents>,
    /// Grid resolution of the accepted quadrature result.
    pub resolution: Option<usize>,
    /// Coefficient change over the last accepted doubling.
    pub refinement_delta: Option<f64>,
}

// ---------------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------------

/// Published FGM closed form for n Var(tau_n): 4/9 - 46 t^2 / 2025.
///
/// Inconsistent with the published component moments; kept verbatim for
/// table reproduction. See [`var_tau_fgm_from_components`].
pub fn var_tau_fgm_published(t: f64) -> f64 {
    4.0 / 9.0 - 46.0 * t * t / 2025.0
}

/// FGM n Var(tau_n) assembled from the published component moments
/// E(F + Fb)^2 = 5/18 + t/9 + t^2/150 and E F = 1/4 + t/18:
/// 16 (E(F+Fb)^2 - 4 (EF)^2) = 4/9 - 184 t^2 / 2025.
///
/// This is what the definitional quadrature converges to and what the
/// published simulations track; it disagrees with the published closed
/// form above in the t^2 coefficient by a factor of four.
pub fn var_tau_fgm_from_components(t: f64) -> f64 {
    let effb2 = 5.0 / 18.0 + t / 9.0 + t * t / 150.0;
    let ef = 0.25 + t / 18.0;
    16.0 * (effb2 - 4.0 * ef * ef)
}

/// FGM closed form for n Var(r_n): 1/4 - 7 t^2 / 180.
pub fn var_r_fgm_closed(t: f64) -> f64 {
    0.25 - 7.0 * t * t / 180.0
}

/// Bivariate normal closed form for n Var(tau_n):
/// 4 (1/9 - 4 arcsin^2(t/2) / pi^2).
pub fn var_tau_normal_closed(t: f64) -> f64 {
    let pi = std::f64::consts::PI;
    let a = (t / 2.0).asin();
    4.0 * (1.0 / 9.0 - 4.0 * a * a / (pi * pi))
}

/// Published FGM polynomials for the r_n variance components
/// (main, Q1, Q2, Q3, Q4); Q3 = Q1 for this family.
pub fn fgm_variance_components_closed(t: f64) -> VarianceComponents {
    let q1 = -1.0 / 12.0 - 2.0 * t / 45.0 - t * t / 180.0;
    VarianceComponents {
        main: 41.0 / 180.0 + t / 12.0 + t * t / 180.0,
        q1,
        q2: 1.0 / 30.0 + 23.0 * t / 1080.0 + 11.0 * t * t / 3240.0,
        q3: q1,
        q4: -1.0 / 40.0 - t / 540.0 + t * t / 540.0,
    }
}

// ---------------------------------------------------------------------------
// quadrature evaluation
// ---------------------------------------------------------------------------

/// n Var(tau_n) by quadrature at a fixed resolution.
pub fn var_tau_quadrature_at(surface: &impl CopulaSurface, m: usize) -> f64 {
    let k = KernelGrids::build(surface, m);
    var_tau_from_grids(&k)
}

fn var_tau_from_grids(k: &KernelGrids) -> f64 {
    let ef = k.expect(|i, j| k.cdf_at(i, j));
    let main = k.expect(|i, j| {
        let c = k.cdf_at(i, j);
        let cb = 1.0 - k.u.nodes[i] - k.v.nodes[j] + c;
        (c + cb) * (c + cb)
    });
    16.0 * (main - 4.0 * ef * ef)
}

/// n Var(r_n) by quadrature at a fixed resolution, with components.
pub fn var_r_quadrature_at(
    surface: &impl CopulaSurface,
    m: usize,
) -> (f64, VarianceComponents) {
    let k = KernelGrids::build(surface, m);
    var_r_from_grids(&k)
}

fn var_r_from_grids(k: &KernelGrids) -> (f64, VarianceComponents) {
    use rayon::prelude::*;
    let m = k.m();
    // fused row pass: [ef, euv, main, E[C B], E[u (C-Cb) B], E[B A],
    //                  E[(C+Cb) A], E[A^2], E[u (Cb-C) A]]
    let rows: Vec<[f64; 9]> = (0..m)
        .into_par_iter()
        .map(|i| {
            let ui = k.u.nodes[i];
            let wi = k.u.weights[i];
            let bi = k.b(i);
            let mut acc = [0.0f64; 9];
            for j in 0..m {
                let w = wi * k.v.weights[j] * k.density_at(i, j);
                let vj = k.v.nodes[j];
                let c = k.cdf_at(i, j);
                let cb = 1.0 - ui - vj + c;
                let a = k.a(i, j);
                let main_term = (1.0 + ui) * cb + (1.0 - ui) * c;
                acc[0] += w * c;
                acc[1] += w * ui * vj;
                acc[2] += w * main_term * main_term;
                acc[3] += w * c * bi;
                acc[4] += w * ui * (c - cb) * bi;
                acc[5] += w * bi * a;
                acc[6] += w * (c + cb) * a;
                acc[7] += w * a * a;
                acc[8] += w * ui * (cb - c) * a;
            }
            acc
        })
        .collect();
    let total = |idx: usize| {
        let col: Vec<f64> = rows.iter().map(|r| r[idx]).collect();
        pairwise_sum(&col)
    };
    let ef = total(0);
    let euv = total(1);
    let main = total(2);
    let tau = 4.0 * ef - 1.0;
    let rho_s = 12.0 * euv - 3.0;
    let centering = (tau + 1.0) / 2.0 - (rho_s + 1.0) / 4.0;
    let q1 = -4.0 * total(3);
    // the two quadrant terms of Q2 collapse: 2 E[B A-] - 2 E[B A+] = -2 E[B A]
    let q2 = 4.0 * total(4) - 2.0 * total(5);
    let q3 = 2.0 * total(6);
    let q4 = total(7) + 2.0 * total(8);
    let main_centered = main - centering * centering;
    let leading = 36.0 * (main_centered + q1 + q2 + q3 + q4);
    (
        leading,
        VarianceComponents {
            main,
            q1,
            q2,
            q3,
            q4,
        },
    )
}

/// Doubles the resolution from `start` until the value moves by less than
/// [`REFINEMENT_TOL`], capping at [`MAX_RESOLUTION`].
fn converge<T>(
    start: usize,
    eval: impl Fn(usize) -> (f64, T),
) -> Result<(f64, T, usize, f64)> {
    let mut m = start;
    let (mut value, _) = eval(m);
    loop {
        let m_next = m * 2;
        let (next, next_extra) = eval(m_next);
        let delta = (next - value).abs();
        if delta < REFINEMENT_TOL {
            return Ok((next, next_extra, m_next, delta));
        }
        if m_next >= MAX_RESOLUTION {
            return Err(Error::QuadratureNotConverged {
                delta,
                m_prev: m,
                m: m_next,
                tol: REFINEMENT_TOL,
            });
        }
        value = next;
        m = m_next;
    }
}

/// Closed form for n Var(tau_n) where one is published.
pub fn var_tau_closed(model: &BivariateModel) -> Option<f64> {
    match model.family {
        Family::Fgm => Some(var_tau_fgm_published(model.t)),
        Family::Normal => Some(var_tau_normal_closed(model.t)),
        Family::Pareto => None,
    }
}

/// Closed form for n Var(r_n) where one is published.
pub fn var_r_closed(model: &BivariateModel) -> Option<f64> {
    match model.family {
        Family::Fgm => Some(var_r_fgm_closed(model.t)),
        _ => None,
    }
}

/// Leading coefficient of Var(tau_n): closed form when published,
/// otherwise converged quadrature.
pub fn var_tau_leading(model: &BivariateModel) -> Result<VarianceReport> {
    if let Some(value) = var_tau_closed(model) {
        return Ok(VarianceReport {
            estimator: EstimatorKind::Kendall,
            model: *model,
            leading_coeff: value,
            method: Method::ClosedForm,
            components: None,
            resolution: None,
            refinement_delta: None,
        });
    }
    var_tau_quadrature(model)
}

/// Converged quadrature evaluation of Var(tau_n) for any model.
pub fn var_tau_quadrature(model: &BivariateModel) -> Result<VarianceReport> {
    let (value, (), m, delta) =
        converge(DEFAULT_RESOLUTION, |m| (var_tau_quadrature_at(model, m), ()))?;
    Ok(VarianceReport {
        estimator: EstimatorKind::Kendall,
        model: *model,
        leading_coeff: value,
        method: Method::Quadrature,
        components: None,
        resolution: Some(m),
        refinement_delta: Some(delta),
    })
}

/// Leading coefficient of Var(r_n): closed form when published, otherwise
/// converged quadrature.
pub fn var_r_leading(model: &BivariateModel) -> Result<VarianceReport> {
    if let Some(value) = var_r_closed(model) {
        return Ok(VarianceReport {
            estimator: EstimatorKind::RNew,
            model: *model,
            leading_coeff: value,
            method: Method::ClosedForm,
            components: Some(fgm_variance_components_closed(model.t)),
            resolution: None,
            refinement_delta: None,
        });
    }
    var_r_quadrature(model)
}

/// Converged quadrature evaluation of Var(r_n) for any model.
pub fn var_r_quadrature(model: &BivariateModel) -> Result<VarianceReport> {
    let (value, components, m, delta) =
        converge(DEFAULT_RESOLUTION, |m| var_r_quadrature_at(model, m))?;
    Ok(VarianceReport {
        estimator: EstimatorKind::RNew,
        model: *model,
        leading_coeff: value,
        method: Method::Quadrature,
        components: Some(components),
        resolution: Some(m),
        refinement_delta: Some(delta),
    })
}

/// Leading coefficient of Var(rho_n) for the bivariate normal: (1 - t^2)^2.
pub fn var_pearson_normal(t: f64) -> Result<VarianceReport> {
    let model = BivariateModel::normal(t)?;
    Ok(VarianceReport {
        estimator: EstimatorKind::Pearson,
        model,
        leading_coeff: (1.0 - t * t) * (1.0 - t * t),
        method: Method::ClosedForm,
        components: None,
        resolution: None,
        refinement_delta: None,
    })
}

// ---------------------------------------------------------------------------
// expected values
// ---------------------------------------------------------------------------

/// E r_n = (1 - 3/(2n-1)) r - 3/(2n-1) + 12 E[F(X,Y)] / (2n-1), with
/// E[F(X,Y)] = (tau + 1)/4.
pub fn expected_r_n(model: &BivariateModel, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let coeffs = model.theoretical_coefficients();
    let r = coeffs.r.value;
    let ef = (coeffs.tau.value + 1.0) / 4.0;
    let d = 2.0 * n as f64 - 1.0;
    Ok((1.0 - 3.0 / d) * r - 3.0 / d + 12.0 * ef / d)
}

/// E r~_n = (3 n tau - (n - 2) rho_S) / (2 (n + 1)).
pub fn expected_r_tilde(model: &BivariateModel, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, min: 2 });
    }
    let coeffs = model.theoretical_coefficients();
    let nf = n as f64;
    Ok((3.0 * nf * coeffs.tau.value - (nf - 2.0) * coeffs.rho_s.value) / (2.0 * (nf + 1.0)))
}

/// The positive parameter where the Pearson and Kendall leading variance
/// coefficients cross for the bivariate normal, by bisection to 1e-8.
pub fn are_crossover_normal() -> f64 {
    let g = |t: f64| (1.0 - t * t) * (1.0 - t * t) - var_tau_normal_closed(t);
    let (mut lo, mut hi) = (0.5, 0.99);
    debug_assert!(g(lo) > 0.0 && g(hi) < 0.0);
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
