//! Tensor-grid Gauss–Legendre integration on the unit square.
//!
//! All distribution-level integrals in this crate are reduced to copula
//! scale first (u = H(x), v = G(y)), which makes every support the unit
//! square and folds the marginal densities away. This module supplies the
//! nodes, plain tensor integration, cumulative quadrant tabulation and the
//! copula-scale rank coefficient functionals.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// A copula surface: CDF and density on (0,1)^2. The conditional CDF
/// `d C(u,v) / du` has a default finite-difference fallback; models with a
/// closed form override it.
pub trait CopulaSurface: Sync {
    fn copula_cdf(&self, u: f64, v: f64) -> f64;
    fn copula_density(&self, u: f64, v: f64) -> f64;

    /// dC/du, the conditional CDF of V given U = u.
    fn copula_cond_u(&self, u: f64, v: f64) -> f64 {
        let h = 1e-6 * u.min(1.0 - u).max(1e-9);
        (self.copula_cdf(u + h, v) - self.copula_cdf(u - h, v)) / (2.0 * h)
    }

    /// dC/dv; exchangeable copulas can keep the default.
    fn copula_cond_v(&self, u: f64, v: f64) -> f64 {
        self.copula_cond_u(v, u)
    }
}

/// Gauss–Legendre nodes and weights on (0, 1); weights sum to 1.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre polynomial, mapped from [-1, 1].
    pub fn new(m: usize) -> Self {
        assert!(m >= 1);
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        let half = m.div_ceil(2);
        for k in 0..half {
            // Tricomi-style initial guess, then Newton on P_m.
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(m, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (_, d2) = legendre_with_derivative(m, x);
                    dp = d2;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            // mirror onto both halves; map [-1,1] -> (0,1), halve weights
            nodes[k] = (1.0 - x) / 2.0;
            nodes[m - 1 - k] = (1.0 + x) / 2.0;
            weights[k] = w / 2.0;
            weights[m - 1 - k] = w / 2.0;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Integral of `f` over (0, 1).
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        pairwise_sum(&terms)
    }
}

fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Summation with a fixed pairwise reduction tree; the result does not
/// depend on chunking or thread schedule.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Values tabulated on a tensor Gauss–Legendre grid; row-major `[i * m + j]`
/// with i indexing u and j indexing v.
#[derive(Debug, Clone)]
pub struct Grid2D {
    pub u: GaussLegendre,
    pub v: GaussLegendre,
    pub values: Vec<f64>,
}

impl Grid2D {
    pub fn tabulate(m: usize, f: impl Fn(f64, f64) -> f64 + Sync + Send) -> Self {
        let u = GaussLegendre::new(m);
        let v = GaussLegendre::new(m);
        let f = &f;
        let values = u
            .nodes
            .par_iter()
            .flat_map_iter(|&ui| v.nodes.iter().map(move |&vj| f(ui, vj)))
            .collect();
        Self { u, v, values }
    }

    pub fn m(&self) -> usize {
        self.u.len()
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.v.len() + j]
    }

    /// Weighted total: rows are summed in index order, the row results are
    /// combined by a pairwise reduction.
    pub fn total(&self) -> f64 {
        let m = self.m();
        let rows: Vec<f64> = (0..m)
            .into_par_iter()
            .map(|i| {
                let terms: Vec<f64> = (0..m)
                    .map(|j| self.u.weights[i] * self.v.weights[j] * self.at(i, j))
                    .collect();
                pairwise_sum(&terms)
            })
            .collect();
        pairwise_sum(&rows)
    }
}

/// Tensor-product Gauss–Legendre integral of `f` over the unit square.
pub fn integrate(f: impl Fn(f64, f64) -> f64 + Sync + Send, m: usize) -> Result<f64> {
    let grid = Grid2D::tabulate(m, f);
    if let Some(idx) = grid.values.iter().position(|v| !v.is_finite()) {
        let (i, j) = (idx / m, idx % m);
        return Err(Error::NonFiniteIntegrand {
            u: grid.u.nodes[i],
            v: grid.v.nodes[j],
        });
    }
    Ok(grid.total())
}

/// Which quadrant a cumulative tabulation covers, relative to each node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrant {
    /// u1 <= u, v1 <= v
    LowerLeft,
    /// u1 >= u, v1 >= v
    UpperRight,
}

/// Running weighted partial sums of a grid field: entry (i, j) approximates
/// the integral of the field over the quadrant anchored at node (u_i, v_j).
/// A node's own cell contributes half per axis (a quarter at the corner),
/// leaving an O(1/m^2) boundary error.
pub fn cumulative_quadrant(grid: &Grid2D, quadrant: Quadrant) -> Grid2D {
    let m = grid.m();
    let w = |i: usize, j: usize| grid.u.weights[i] * grid.v.weights[j] * grid.at(i, j);

    // prefix[i][j] = full sum over k <= i, l <= j (flipped for upper-right)
    let flip = |i: usize| match quadrant {
        Quadrant::LowerLeft => i,
        Quadrant::UpperRight => m - 1 - i,
    };
    let mut prefix = vec![0.0f64; m * m];
    let mut row_prefix = vec![0.0f64; m * m]; // sum over l <= j in row i
    let mut col_prefix = vec![0.0f64; m * m]; // sum over k <= i in column j
    for ii in 0..m {
        for jj in 0..m {
            let cell = w(flip(ii), flip(jj));
            let up = if ii > 0 { prefix[(ii - 1) * m + jj] } else { 0.0 };
            let left = if jj > 0 { prefix[ii * m + jj - 1] } else { 0.0 };
            let diag = if ii > 0 && jj > 0 {
                prefix[(ii - 1) * m + jj - 1]
            } else {
                0.0
            };
            prefix[ii * m + jj] = up + left - diag + cell;
            row_prefix[ii * m + jj] = if jj > 0 { row_prefix[ii * m + jj - 1] } else { 0.0 } + cell;
            col_prefix[ii * m + jj] = if ii > 0 { col_prefix[(ii - 1) * m + jj] } else { 0.0 } + cell;
        }
    }

    let mut values = vec![0.0f64; m * m];
    for ii in 0..m {
        for jj in 0..m {
            let half_cell = prefix[ii * m + jj] - 0.5 * row_prefix[ii * m + jj]
                - 0.5 * col_prefix[ii * m + jj]
                + 0.25 * w(flip(ii), flip(jj));
            values[flip(ii) * m + flip(jj)] = half_cell;
        }
    }
    Grid2D {
        u: grid.u.clone(),
        v: grid.v.clone(),
        values,
    }
}

/// Rank coefficients expressible as copula-scale functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankCoefficient {
    /// rho_S = 12 E[UV] - 3
    RhoS,
    /// tau = 4 E[C(U,V)] - 1
    Tau,
    /// r = 6 E[C(U,V) - UV]
    R,
}

/// Evaluates the requested coefficient functional under the copula density.
pub fn coefficient_by_quadrature(
    surface: &impl CopulaSurface,
    which: RankCoefficient,
    m: usize,
) -> Result<f64> {
    let value = match which {
        RankCoefficient::RhoS => {
            12.0 * integrate(|u, v| u * v * surface.copula_density(u, v), m)? - 3.0
        }
        RankCoefficient::Tau => {
            4.0 * integrate(
                |u, v| surface.copula_cdf(u, v) * surface.copula_density(u, v),
                m,
            )? - 1.0
        }
        RankCoefficient::R => {
            6.0 * integrate(
                |u, v| (surface.copula_cdf(u, v) - u * v) * surface.copula_density(u, v),
                m,
            )?
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    struct FgmSurface {
        t: f64,
    }

    impl CopulaSurface for FgmSurface {
        fn copula_cdf(&self, u: f64, v: f64) -> f64 {
            u * v + self.t * u * (1.0 - u) * v * (1.0 - v)
        }
        fn copula_density(&self, u: f64, v: f64) -> f64 {
            1.0 + self.t * (1.0 - 2.0 * u) * (1.0 - 2.0 * v)
        }
    }

    #[test]
    fn gauss_legendre_five_point_rule() {
        let gl = GaussLegendre::new(5);
        let expect_nodes = [
            0.04691007703066802,
            0.23076534494715845,
            0.5,
            0.7692346550528415,
            0.9530899229693319,
        ];
        let expect_weights = [
            0.11846344252809471,
            0.2393143352496831,
            0.2844444444444445,
            0.2393143352496831,
            0.11846344252809471,
        ];
        for i in 0..5 {
            assert_abs_diff_eq!(gl.nodes[i], expect_nodes[i], epsilon = 1e-14);
            assert_abs_diff_eq!(gl.weights[i], expect_weights[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn weights_normalized_and_nodes_interior() {
        for m in [1, 2, 3, 16, 101, 512] {
            let gl = GaussLegendre::new(m);
            assert_abs_diff_eq!(gl.weights.iter().sum::<f64>(), 1.0, epsilon = 1e-13);
            assert!(gl.nodes.iter().all(|&x| x > 0.0 && x < 1.0));
            assert!(gl.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn exact_on_polynomials_up_to_degree_2m_minus_1() {
        // degree-(2m-1) per axis is the GL exactness bound
        for m in [2usize, 4, 8] {
            for k in 0..(2 * m) {
                let exact = 1.0 / (k as f64 + 1.0);
                let got = integrate(|u, _| u.powi(k as i32), m).unwrap();
                assert_abs_diff_eq!(got, exact, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn refinement_reduces_error_on_smooth_integrand() {
        // int int e^{3uv} = sum_k 3^k / (k! (k+1)^2), summed to convergence
        let f = |u: f64, v: f64| (3.0 * u * v).exp();
        let mut exact = 0.0;
        let mut term = 1.0; // 3^k / k!
        for k in 0..60 {
            let kf = k as f64;
            exact += term / ((kf + 1.0) * (kf + 1.0));
            term *= 3.0 / (kf + 1.0);
        }
        let e4 = (integrate(f, 4).unwrap() - exact).abs();
        let e8 = (integrate(f, 8).unwrap() - exact).abs();
        assert!(e8 < e4, "e8 = {e8:.3e}, e4 = {e4:.3e}");
        assert!(e8 < 1e-10);
    }

    #[test]
    fn integrate_basics() {
        assert_abs_diff_eq!(integrate(|_, _| 1.0, 16).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(integrate(|u, v| u * v, 16).unwrap(), 0.25, epsilon = 1e-12);
    }

    #[test]
    fn integrate_fgm_tau_functional() {
        // E[C] = (tau + 1) / 4 with tau = 4t/18 at t = 0.5
        let s = FgmSurface { t: 0.5 };
        let got = integrate(
            |u, v| s.copula_cdf(u, v) * s.copula_density(u, v),
            32,
        )
        .unwrap();
        let tau = 4.0 * 0.5 / 18.0;
        assert_abs_diff_eq!(got, (tau + 1.0) / 4.0, epsilon = 1e-8);
    }

    #[test]
    fn non_finite_integrand_reported() {
        let err = integrate(|u, _| 1.0 / (u - u), 4).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIntegrand { .. }));
    }

    #[test]
    fn cumulative_quadrant_constant_field() {
        let m = 128;
        let grid = Grid2D::tabulate(m, |_, _| 1.0);
        let ll = cumulative_quadrant(&grid, Quadrant::LowerLeft);
        let bound = 1.0 / (m as f64 * m as f64) * 2.0;
        for &(i, j) in &[(0usize, 0usize), (m / 2, m / 3), (m - 1, m - 1), (5, m - 5)] {
            let expect = grid.u.nodes[i] * grid.v.nodes[j];
            assert!(
                (ll.at(i, j) - expect).abs() < bound.max(5e-5),
                "node ({i},{j}): {} vs {}",
                ll.at(i, j),
                expect
            );
        }
    }

    #[test]
    fn cumulative_quadrant_weighted_field() {
        // independence copula, field u * c = u: lower-left integral u^2 v / 2
        let m = 256;
        let grid = Grid2D::tabulate(m, |u, _| u);
        let ll = cumulative_quadrant(&grid, Quadrant::LowerLeft);
        for &(i, j) in &[(10usize, 200usize), (128, 128), (250, 30)] {
            let (u, v) = (grid.u.nodes[i], grid.v.nodes[j]);
            assert_abs_diff_eq!(ll.at(i, j), u * u * v / 2.0, epsilon = 2e-5);
        }
    }

    #[test]
    fn quadrant_partition_recovers_total() {
        // LL + UR + the two off-quadrant strips partition the square; the
        // off-quadrants come from half-cell 1-d strips minus the LL corner.
        let m = 64;
        let s = FgmSurface { t: -0.7 };
        let grid = Grid2D::tabulate(m, |u, v| s.copula_density(u, v) * (1.0 + u * v));
        let total = grid.total();
        let ll = cumulative_quadrant(&grid, Quadrant::LowerLeft);
        let ur = cumulative_quadrant(&grid, Quadrant::UpperRight);
        for &(i, j) in &[(20usize, 40usize), (32, 32), (0, 63)] {
            let left_strip = strip_u(&grid, i); // u1 <= u_i, all v
            let bottom_strip = strip_v(&grid, j); // v1 <= v_j, all u
            let upper_left = left_strip - ll.at(i, j);
            let lower_right = bottom_strip - ll.at(i, j);
            let four = ll.at(i, j) + ur.at(i, j) + upper_left + lower_right;
            assert_abs_diff_eq!(four, total, epsilon = 1e-10);
        }
    }

    /// Integral over u1 <= u_i, all v; half weight on the boundary row.
    fn strip_u(grid: &Grid2D, i: usize) -> f64 {
        let m = grid.m();
        let mut s = 0.0;
        for ii in 0..=i {
            let scale = if ii == i { 0.5 } else { 1.0 };
            for jj in 0..m {
                s += scale * grid.u.weights[ii] * grid.v.weights[jj] * grid.at(ii, jj);
            }
        }
        s
    }

    /// Integral over v1 <= v_j, all u; half weight on the boundary column.
    fn strip_v(grid: &Grid2D, j: usize) -> f64 {
        let m = grid.m();
        let mut s = 0.0;
        for jj in 0..=j {
            let scale = if jj == j { 0.5 } else { 1.0 };
            for ii in 0..m {
                s += scale * grid.u.weights[ii] * grid.v.weights[jj] * grid.at(ii, jj);
            }
        }
        s
    }

    #[test]
    fn fgm_coefficients_by_quadrature() {
        let s = FgmSurface { t: 1.0 };
        let tau = coefficient_by_quadrature(&s, RankCoefficient::Tau, 64).unwrap();
        assert_abs_diff_eq!(tau, 2.0 / 9.0, epsilon = 1e-8);
        let rho_s = coefficient_by_quadrature(&s, RankCoefficient::RhoS, 64).unwrap();
        assert_abs_diff_eq!(rho_s, 1.0 / 3.0, epsilon = 1e-10);
        let r = coefficient_by_quadrature(&s, RankCoefficient::R, 64).unwrap();
        assert_abs_diff_eq!(r, 1.0 / 6.0, epsilon = 1e-8);
        assert_abs_diff_eq!(r, (3.0 * tau - rho_s) / 2.0, epsilon = 1e-12);
    }

    #[test]
    fn coefficient_identity_across_families_by_quadrature() {
        // r = (3 tau - rho_S) / 2 from three independently evaluated
        // functionals, across the parameter sweep
        use crate::copulas::BivariateModel;
        let models = [
            BivariateModel::fgm(-1.0).unwrap(),
            BivariateModel::fgm(-0.3).unwrap(),
            BivariateModel::fgm(0.6).unwrap(),
            BivariateModel::fgm(1.0).unwrap(),
            BivariateModel::normal(-0.7).unwrap(),
            BivariateModel::normal(0.3).unwrap(),
            BivariateModel::normal(0.9).unwrap(),
            BivariateModel::pareto(0.5).unwrap(),
            BivariateModel::pareto(2.0).unwrap(),
            BivariateModel::pareto(20.0).unwrap(),
        ];
        for model in models {
            let tau = coefficient_by_quadrature(&model, RankCoefficient::Tau, 256).unwrap();
            let rho_s = coefficient_by_quadrature(&model, RankCoefficient::RhoS, 256).unwrap();
            let r = coefficient_by_quadrature(&model, RankCoefficient::R, 256).unwrap();
            assert_abs_diff_eq!(r, (3.0 * tau - rho_s) / 2.0, epsilon = 1e-8);
        }
    }

    #[test]
    fn pairwise_sum_matches_naive_on_benign_data() {
        let data: Vec<f64> = (0..1000).map(|i| (i as f64).sin()).collect();
        let naive: f64 = data.iter().sum();
        assert_abs_diff_eq!(pairwise_sum(&data), naive, epsilon = 1e-9);
    }
}
