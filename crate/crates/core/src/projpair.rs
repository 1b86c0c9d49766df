//! A pair of projections `P`, `Q` in the algebra of continuous `2x2`
//! matrix functions on `[0, 1]` that are diagonal at both endpoints, sampled
//! on a uniform grid.
//!
//! `P + Q` is invertible on `(0, 1]` but not at `0`, and the unique pointwise
//! solution of `(P + Q)^{1/2} X = P` has `x21(t) -> -1/√2` as `t -> 0`, while
//! membership in the algebra forces `x21(0) = 0`. Replacing `Q` by a nearby
//! projection that equals `diag(1, 0)` on `[0, ε]` removes the obstruction.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore;
use crate::matrix::{ComplexMatrix, C64};
use crate::tolerance::ToleranceConfig;

/// Uniform grid `t_i = i / (n - 1)` on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    n_points: usize,
}

impl Grid {
    pub const MIN_POINTS: usize = 3;

    pub fn uniform(n_points: usize) -> Result<Self> {
        if n_points < Self::MIN_POINTS {
            return Err(Error::BadGridSize {
                got: n_points,
                min: Self::MIN_POINTS,
            });
        }
        Ok(Self { n_points })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.n_points - 1) as f64
    }

    /// Node `i`; the last node is exactly `1.0`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            1.0
        } else {
            i as f64 / (self.n_points - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Nearest node to `t`.
    pub fn nearest(&self, t: f64) -> usize {
        ((t * (self.n_points - 1) as f64).round() as usize).min(self.n_points - 1)
    }
}

/// Matrix values on the nodes `first_node..n_points` of a grid. Functions
/// that are undefined at `t = 0` start at node 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridFunctionJson", into = "GridFunctionJson")]
pub struct GridFunction {
    grid: Grid,
    first_node: usize,
    values: Vec<ComplexMatrix>,
}

impl GridFunction {
    pub fn new(grid: Grid, first_node: usize, values: Vec<ComplexMatrix>) -> Result<Self> {
        if first_node + values.len() != grid.n_points() {
            return Err(Error::InvalidMatrix(format!(
                "{} values starting at node {first_node} do not cover a grid of {} points",
                values.len(),
                grid.n_points()
            )));
        }
        if let Some(bad) = values.iter().find(|v| v.shape() != (2, 2)) {
            return Err(Error::ShapeMismatch {
                op: "grid_function",
                left: bad.shape(),
                right: (2, 2),
            });
        }
        Ok(Self {
            grid,
            first_node,
            values,
        })
    }

    fn tabulate(grid: Grid, first_node: usize, f: impl Fn(f64) -> ComplexMatrix) -> Self {
        let values = (first_node..grid.n_points()).map(|i| f(grid.point(i))).collect();
        Self {
            grid,
            first_node,
            values,
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn first_node(&self) -> usize {
        self.first_node
    }

    pub fn values(&self) -> &[ComplexMatrix] {
        &self.values
    }

    /// Value at node `i`, `None` where the function is undefined.
    pub fn at_node(&self, i: usize) -> Option<&ComplexMatrix> {
        i.checked_sub(self.first_node).and_then(|k| self.values.get(k))
    }

    /// `(t, value)` over the defined nodes.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, f64, &ComplexMatrix)> {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.first_node + k, self.grid.point(self.first_node + k), v))
    }

    /// Adds the missing value at `t = 0`. No-op error if already defined.
    pub fn extend_to_origin(mut self, value: ComplexMatrix) -> Result<Self> {
        if self.first_node == 0 {
            return Err(Error::PreconditionFailed("already defined at t = 0".into()));
        }
        if value.shape() != (2, 2) {
            return Err(Error::ShapeMismatch {
                op: "extend_to_origin",
                left: value.shape(),
                right: (2, 2),
            });
        }
        self.values.insert(0, value);
        self.first_node -= 1;
        Ok(self)
    }

    /// Largest `||f(t_{i+1}) - f(t_i)||` between adjacent defined nodes.
    pub fn max_jump(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (&w[1] - &w[0]).op_norm())
            .fold(0.0, f64::max)
    }

    /// CSV with columns `t,re11,im11,re12,im12,re21,im21,re22,im22`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re11,im11,re12,im12,re21,im21,re22,im22\n");
        for (_, t, v) in self.nodes() {
            let _ = write!(out, "{t}");
            for z in v.row_major() {
                let _ = write!(out, ",{},{}", z.re, z.im);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GridFunctionJson {
    n_points: usize,
    #[serde(default)]
    first_node: usize,
    values: Vec<ComplexMatrix>,
}

impl TryFrom<GridFunctionJson> for GridFunction {
    type Error = Error;

    fn try_from(j: GridFunctionJson) -> Result<Self> {
        GridFunction::new(Grid::uniform(j.n_points)?, j.first_node, j.values)
    }
}

impl From<GridFunction> for GridFunctionJson {
    fn from(f: GridFunction) -> Self {
        GridFunctionJson {
            n_points: f.grid.n_points(),
            first_node: f.first_node,
            values: f.values,
        }
    }
}

fn real2(a: f64, b: f64, c: f64, d: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |i, j| C64::new([[a, b], [c, d]][i][j], 0.0))
}

fn angle(t: f64) -> (f64, f64) {
    let theta = FRAC_PI_2 * t;
    (theta.cos(), theta.sin())
}

fn check_domain(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::OutOfDomain(t))
    }
}

pub fn p_at(_t: f64) -> ComplexMatrix {
    real2(1.0, 0.0, 0.0, 0.0)
}

/// Projection onto the line at angle `πt/2`.
pub fn q_at(t: f64) -> ComplexMatrix {
    let (c, s) = angle(t);
    real2(c * c, s * c, s * c, s * s)
}

pub fn canonical_pair(grid: Grid) -> (GridFunction, GridFunction) {
    (
        GridFunction::tabulate(grid, 0, p_at),
        GridFunction::tabulate(grid, 0, q_at),
    )
}

/// Closed form of `(P(t) + Q(t))^{1/2}`.
pub fn sqrt_sum_at(t: f64) -> ComplexMatrix {
    let (c, s) = angle(t);
    let (plus, minus) = ((1.0 + c).sqrt(), (1.0 - c).max(0.0).sqrt());
    let alpha = 0.5 * (2.0 - s) * (plus + minus);
    let beta = 0.5 * s * (plus - minus);
    let gamma = 0.5 * s * (plus + minus);
    real2(alpha, beta, beta, gamma)
}

pub fn sqrt_sum_closed_form(grid: Grid) -> GridFunction {
    GridFunction::tabulate(grid, 0, sqrt_sum_at)
}

/// `(P(t) + Q(t))^{-1/2}`, defined for `t` in `(0, 1]`.
pub fn inv_sqrt_sum_at(t: f64) -> Result<ComplexMatrix> {
    check_domain(t)?;
    if t == 0.0 {
        return Err(Error::SingularAtZero);
    }
    let s = angle(t).1;
    let r = sqrt_sum_at(t);
    let (alpha, beta, gamma) = (r.get(0, 0).re, r.get(0, 1).re, r.get(1, 1).re);
    Ok(real2(gamma, -beta, -beta, alpha).scale(1.0 / s))
}

/// Starts at node 1.
pub fn inv_sqrt_sum(grid: Grid) -> GridFunction {
    GridFunction::tabulate(grid, 1, |t| inv_sqrt_sum_at(t).expect("t > 0"))
}

/// `X(t) = (P + Q)^{-1/2} P`, in closed form. The formula itself extends
/// continuously to `t = 0`; see [`solution_formula`].
pub fn pointwise_solution_at(t: f64) -> Result<ComplexMatrix> {
    check_domain(t)?;
    if t == 0.0 {
        return Err(Error::SingularAtZero);
    }
    Ok(solution_formula(t))
}

/// `½ [[√(1+c) + √(1-c), 0], [-√(1+c) + √(1-c), 0]]` for any `t` in `[0, 1]`.
pub fn solution_formula(t: f64) -> ComplexMatrix {
    let c = angle(t).0;
    let (plus, minus) = ((1.0 + c).sqrt(), (1.0 - c).max(0.0).sqrt());
    real2(0.5 * (plus + minus), 0.0, 0.5 * (minus - plus), 0.0)
}

/// Starts at node 1.
pub fn pointwise_solution(grid: Grid) -> GridFunction {
    GridFunction::tabulate(grid, 1, solution_formula)
}

/// Pointwise `||sqrt_psd(P + Q) X - P||` on the nodes where `x` is defined.
/// The square root is the generic eigenvalue one, not the closed form.
pub fn equation_residuals(
    p: &GridFunction,
    q: &GridFunction,
    x: &GridFunction,
    tol: &ToleranceConfig,
) -> Result<Vec<f64>> {
    x.nodes()
        .map(|(i, _, xv)| {
            let (pv, qv) = match (p.at_node(i), q.at_node(i)) {
                (Some(pv), Some(qv)) => (pv, qv),
                _ => return Err(Error::PreconditionFailed(format!("P or Q undefined at node {i}"))),
            };
            let root = matcore::sqrt_psd(&(pv + qv), tol)?;
            Ok((&(&root * xv) - pv).op_norm())
        })
        .collect()
}

/// Why `(P + Q)^{1/2} X = P` has no solution in the algebra at this grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonexistenceCertificate {
    /// `x21(0)` forced by diagonality at `t = 0`.
    pub boundary_value: f64,
    /// `x21` at the smallest positive node.
    pub interior_limit: f64,
    pub gap: f64,
    pub grid_resolution: usize,
}

pub const CERTIFICATE_MIN_POINTS: usize = 100;

pub fn nonexistence_certificate(grid: Grid) -> Result<NonexistenceCertificate> {
    if grid.n_points() < CERTIFICATE_MIN_POINTS {
        return Err(Error::BadGridSize {
            got: grid.n_points(),
            min: CERTIFICATE_MIN_POINTS,
        });
    }
    let interior_limit = pointwise_solution_at(grid.point(1))?.get(1, 0).re;
    let boundary_value = 0.0;
    Ok(NonexistenceCertificate {
        boundary_value,
        interior_limit,
        gap: (interior_limit - boundary_value).abs(),
        grid_resolution: grid.n_points(),
    })
}

/// `Q` reparametrized to equal `diag(1, 0)` on `[0, ε]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub eps_requested: f64,
    /// `ε` after snapping to a grid node.
    pub eps: f64,
    pub eps_node: usize,
    pub q: GridFunction,
    /// Grid sup of `||Q(t) - Q'(t)||`.
    pub distance: f64,
}

fn snap_eps(grid: Grid, eps: f64) -> Result<(usize, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadEpsilon(eps));
    }
    // Keep ε strictly inside (0, 1) after snapping.
    let node = grid.nearest(eps).clamp(1, grid.n_points() - 2);
    Ok((node, grid.point(node)))
}

/// `t -> (t - ε) / (1 - ε)`, mapping `[ε, 1]` onto `[0, 1]`.
fn reparam(t: f64, eps: f64) -> f64 {
    ((t - eps) / (1.0 - eps)).clamp(0.0, 1.0)
}

pub fn perturb_q(grid: Grid, eps: f64) -> Result<Perturbation> {
    let (eps_node, snapped) = snap_eps(grid, eps)?;
    let values: Vec<ComplexMatrix> = (0..grid.n_points())
        .map(|i| {
            if i <= eps_node {
                q_at(0.0)
            } else {
                q_at(reparam(grid.point(i), snapped))
            }
        })
        .collect();
    let distance = values
        .iter()
        .enumerate()
        .map(|(i, v)| (&q_at(grid.point(i)) - v).op_norm())
        .fold(0.0, f64::max);
    Ok(Perturbation {
        eps_requested: eps,
        eps: snapped,
        eps_node,
        q: GridFunction::new(grid, 0, values)?,
        distance,
    })
}

/// Solution of `(P + Q')^{1/2} X = P` in the algebra: linear `x21` from `0`
/// to `-1/√2` on `[0, ε]`, then the unperturbed solution reparametrized.
pub fn perturbed_solution(grid: Grid, eps: f64) -> Result<GridFunction> {
    let (eps_node, snapped) = snap_eps(grid, eps)?;
    let values = (0..grid.n_points())
        .map(|i| {
            let t = grid.point(i);
            if i <= eps_node {
                real2(FRAC_1_SQRT_2, 0.0, -t / snapped * FRAC_1_SQRT_2, 0.0)
            } else {
                solution_formula(reparam(t, snapped))
            }
        })
        .collect();
    GridFunction::new(grid, 0, values)
}

/// Whether `f` is defined at both endpoints and diagonal there.
pub fn algebra_membership(f: &GridFunction, tol: &ToleranceConfig) -> bool {
    let last = f.grid().n_points() - 1;
    [0, last].into_iter().all(|i| match f.at_node(i) {
        Some(v) => v.get(0, 1).norm() <= tol.residual_atol && v.get(1, 0).norm() <= tol.residual_atol,
        None => false,
    })
}
