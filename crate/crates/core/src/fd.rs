//! Finite-volume discretization of the two-material bar, independent of the
//! closed-form solution.
//!
//! Nodes are placed uniformly on each section so that one node sits exactly
//! on the interface. Each segment between adjacent nodes carries the
//! harmonic-mean conductivity of the material it spans, which keeps the
//! discrete flux continuous across the interface. The Dirichlet end is
//! imposed directly and the convective end is closed with a ghost node. The
//! resulting tridiagonal system is solved by forward elimination and back
//! substitution.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::RodConfig;

/// Nodal solution of the discrete problem.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscreteSolution {
    pub node_positions: Vec<f64>,
    pub node_temperatures: Vec<f64>,
    /// Index of the node at `x = l`.
    pub interface_node: usize,
    /// Conductance of each segment `[x_i, x_{i+1}]`.
    pub segment_conductivities: Vec<f64>,
    /// `−κ_B u′(L)` from a second-order one-sided difference.
    pub numeric_flux_at_end: f64,
}

impl DiscreteSolution {
    pub fn node_count(&self) -> usize {
        self.node_positions.len()
    }

    /// `−κ (u_{i+1} − u_i) / Δx` on every segment.
    pub fn segment_fluxes(&self) -> Vec<f64> {
        self.node_positions
            .windows(2)
            .zip(self.node_temperatures.windows(2))
            .zip(&self.segment_conductivities)
            .map(|((x, u), k)| -k * (u[1] - u[0]) / (x[1] - x[0]))
            .collect()
    }
}

/// Harmonic mean of a piecewise-constant conductivity over `[a, b]`.
fn segment_conductivity(a: f64, b: f64, interface: f64, kappa_a: f64, kappa_b: f64) -> f64 {
    let in_a = (b.min(interface) - a).max(0.0);
    let in_b = (b - a.max(interface)).max(0.0);
    (b - a) / (in_a / kappa_a + in_b / kappa_b)
}

/// Solves `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
/// `lower[0]` and `upper[n-1]` are ignored.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot == 0.0 {
        return Err(Error::SingularSystem { row: 0 });
    }
    c[0] = upper[0] / pivot;
    d[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c[i - 1];
        if pivot == 0.0 || !pivot.is_finite() {
            return Err(Error::SingularSystem { row: i });
        }
        c[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / pivot;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] -= c[i] * x[i + 1];
    }
    Ok(x)
}

/// Splits `n_cells` between the two sections in proportion to their lengths,
/// keeping at least two cells on each side.
fn split_cells(config: &RodConfig, n_cells: usize) -> (usize, usize) {
    let share = config.interface() / config.length();
    let n_a = ((n_cells as f64 * share).round() as usize).clamp(2, n_cells - 2);
    (n_a, n_cells - n_a)
}

pub fn fd_solve(config: &RodConfig, kappa_a: f64, n_cells: usize) -> Result<DiscreteSolution> {
    if n_cells < 4 {
        return Err(Error::OutOfDomain {
            what: "n_cells",
            value: n_cells as f64,
            reason: "at least four cells are required",
        });
    }
    if !(kappa_a.is_finite() && kappa_a > 0.0) {
        return Err(Error::OutOfDomain {
            what: "kappa_a",
            value: kappa_a,
            reason: "conductivity must be positive and finite",
        });
    }
    let (n_a, n_b) = split_cells(config, n_cells);
    let l = config.interface();
    let big_l = config.length();
    let dx_a = l / n_a as f64;
    let dx_b = (big_l - l) / n_b as f64;

    let mut x: Vec<f64> = (0..=n_a).map(|i| i as f64 * dx_a).collect();
    x[n_a] = l;
    x.extend((1..=n_b).map(|i| l + i as f64 * dx_b));
    x[n_a + n_b] = big_l;

    let kb = config.kappa_b();
    let kappa: Vec<f64> = x
        .windows(2)
        .map(|w| segment_conductivity(w[0], w[1], l, kappa_a, kb))
        .collect();
    // Conductance of each segment, κ / Δx.
    let g: Vec<f64> = kappa
        .iter()
        .zip(x.windows(2))
        .map(|(k, w)| k / (w[1] - w[0]))
        .collect();

    let n = x.len();
    let last = n - 1;
    let mut lower = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut upper = vec![0.0; n];
    let mut rhs = vec![0.0; n];

    diag[0] = 1.0;
    rhs[0] = config.source_temperature();
    for i in 1..last {
        lower[i] = -g[i - 1];
        upper[i] = -g[i];
        diag[i] = g[i - 1] + g[i];
    }
    // Ghost node u_{N+1} = u_{N−1} − 2Δx h (u_N − T_a)/κ_B eliminated from the
    // interior stencil at N, then divided by 2Δx.
    let h = config.convection();
    lower[last] = -g[last - 1];
    diag[last] = g[last - 1] + h;
    rhs[last] = h * config.ambient_temperature();

    let u = solve_tridiagonal(&lower, &diag, &upper, &rhs)?;

    let numeric_flux_at_end =
        -kb * (3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) / (2.0 * dx_b);

    Ok(DiscreteSolution {
        node_positions: x,
        node_temperatures: u,
        interface_node: n_a,
        segment_conductivities: kappa,
        numeric_flux_at_end,
    })
}
