//! Five-point second-derivative operator and the implicit-step band
//! coefficients.
//!
//! The symmetric split of the imaginary-time evolution operator, truncated
//! linearly on both sides, gives
//!
//! ```text
//! (I + dtau/2 H) psi'  =  (I - dtau/2 H) psi,      H = -1/2 D2 + v
//! ```
//!
//! with `D2` the five-point stencil
//!
//! ```text
//! D2 psi_j = (-psi_{j-2} + 16 psi_{j-1} - 30 psi_j + 16 psi_{j+1} - psi_{j+2}) / (12 h^2).
//! ```
//!
//! At the first and last interior points the stencil reaches one point past
//! a wall. A hard-wall eigenstate continues antisymmetrically through the
//! wall (both `psi` and, because `v` is finite there, `psi''` vanish on it),
//! so the out-of-range value one step beyond the wall is the negative of the
//! value one step inside: `psi(a - h) = -psi(a + h)`. This keeps the row
//! pentadiagonal and symmetric and preserves the O(h^4) accuracy of the
//! interior stencil; treating the outside value as zero instead would
//! degrade eigenvalues to O(h) through the derivative kink at the wall.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pentasolve::PentaSystem;
use crate::potential::{eval_potential, sample_potential, PotentialSpec};
use crate::quadrature::WaveFunction;

/// Band entries of `I + dtau/2 H` per interior point.
///
/// `alpha..zeta` follow the row layout `alpha_j psi_{j-2} + beta_j psi_{j-1}
/// + gamma_j psi_j + delta_j psi_{j+1} + zeta_j psi_{j+2}`. The off-diagonal
/// bands are constant:
///
/// ```text
/// alpha = zeta = dtau / (48 h^2)
/// beta  = delta = -dtau / (3 h^2)
/// gamma_j = 1 + 5 dtau / (8 h^2) + dtau/2 v(x_j)
/// ```
///
/// The wall-continuation adjustment (subtract `alpha` from the first and
/// last `gamma`) is applied when the band matrix is assembled, not here, so
/// these closed forms hold for every interior `j`.
#[derive(Clone, Debug)]
pub struct PropagatorCoefficients {
    pub alpha: f64,
    pub beta: f64,
    /// Diagonal entries over interior points `j = 2..N-1` (1-based).
    pub gamma: Vec<f64>,
    pub dtau: f64,
    pub h: f64,
}

impl PropagatorCoefficients {
    pub fn delta(&self) -> f64 {
        self.beta
    }

    pub fn zeta(&self) -> f64 {
        self.alpha
    }
}

/// Second derivative of `psi` at each interior point.
///
/// Wall values of `psi` must be zero; out-of-range stencil values use the
/// antisymmetric continuation described in the module docs, so entries less
/// than two steps from a wall differ from the free-space stencil.
pub fn apply_laplacian_5pt(psi: &WaveFunction) -> Vec<f64> {
    let v = &psi.values;
    let n = v.len();
    let m = n - 2;
    let inv12h2 = 1.0 / (12.0 * psi.grid.h * psi.grid.h);
    let mut out = vec![0.0; m];
    for (i, slot) in out.iter_mut().enumerate() {
        let j = i + 1; // grid index of this interior point
        let s = if j == 1 {
            // ghost at j-2 is -psi_j
            -29.0 * v[1] + 16.0 * v[2] - v[3]
        } else if j == n - 2 {
            -v[n - 4] + 16.0 * v[n - 3] - 29.0 * v[n - 2]
        } else {
            -v[j - 2] + 16.0 * v[j - 1] - 30.0 * v[j] + 16.0 * v[j + 1] - v[j + 2]
        };
        *slot = s * inv12h2;
    }
    out
}

/// Band coefficients of the left operator `I + dtau/2 H`.
pub fn assemble_coefficients(
    spec: PotentialSpec,
    grid: &Grid,
    dtau: f64,
) -> Result<PropagatorCoefficients> {
    if !(dtau > 0.0) {
        return Err(Error::NonPositiveDtau(dtau));
    }
    let h2 = grid.h * grid.h;
    let alpha = dtau / (48.0 * h2);
    let beta = -dtau / (3.0 * h2);
    let base = 1.0 + 5.0 * dtau / (8.0 * h2);
    let gamma = (1..grid.n_points - 1)
        .map(|j| base + 0.5 * dtau * eval_potential(spec, grid.x(j)))
        .collect();
    Ok(PropagatorCoefficients {
        alpha,
        beta,
        gamma,
        dtau,
        h: grid.h,
    })
}

/// Right-hand side `xi = (I - dtau/2 H) psi` over interior points.
pub fn assemble_rhs(
    coeffs: &PropagatorCoefficients,
    spec: PotentialSpec,
    grid: &Grid,
    psi: &WaveFunction,
) -> Vec<f64> {
    let mut out = vec![0.0; grid.n_interior()];
    assemble_rhs_into(coeffs, spec, grid, psi, &mut out);
    out
}

/// `assemble_rhs` writing into a caller-provided buffer.
pub fn assemble_rhs_into(
    coeffs: &PropagatorCoefficients,
    spec: PotentialSpec,
    grid: &Grid,
    psi: &WaveFunction,
    out: &mut [f64],
) {
    let v = &psi.values;
    let n = v.len();
    let h2 = grid.h * grid.h;
    let a = -coeffs.dtau / (48.0 * h2); // mirror of alpha
    let b = coeffs.dtau / (3.0 * h2); // mirror of beta
    let dbase = 1.0 - 5.0 * coeffs.dtau / (8.0 * h2);
    debug_assert_eq!(out.len(), n - 2);
    for (i, slot) in out.iter_mut().enumerate() {
        let j = i + 1;
        let diag = dbase - 0.5 * coeffs.dtau * eval_potential(spec, grid.x(j));
        *slot = if j == 1 {
            // wall continuation folds the j-2 term onto the diagonal: -a
            (diag - a) * v[1] + b * v[2] + a * v[3]
        } else if j == n - 2 {
            a * v[n - 4] + b * v[n - 3] + (diag - a) * v[n - 2]
        } else {
            a * v[j - 2] + b * v[j - 1] + diag * v[j] + b * v[j + 1] + a * v[j + 2]
        };
    }
}

/// Assemble the pentadiagonal system `(I + dtau/2 H) x = rhs` (left side
/// only; pair with [`assemble_rhs`]). The wall continuation subtracts
/// `alpha` from the first and last diagonal entries.
pub fn left_system(coeffs: &PropagatorCoefficients) -> PentaSystem {
    let m = coeffs.gamma.len();
    let mut diag = coeffs.gamma.clone();
    diag[0] -= coeffs.alpha;
    diag[m - 1] -= coeffs.alpha;
    PentaSystem {
        sub2: vec![coeffs.alpha; m - 2],
        sub1: vec![coeffs.beta; m - 1],
        diag,
        sup1: vec![coeffs.beta; m - 1],
        sup2: vec![coeffs.alpha; m - 2],
    }
}

/// Interior samples of `-1/2 D2 psi + v psi` (the discrete Hamiltonian
/// applied to `psi`), sharing the stencil and closure with propagation.
pub fn apply_hamiltonian(spec: PotentialSpec, grid: &Grid, psi: &WaveFunction) -> Vec<f64> {
    let lap = apply_laplacian_5pt(psi);
    let v = sample_potential(spec, grid);
    lap.iter()
        .enumerate()
        .map(|(i, l)| -0.5 * l + v[i + 1] * psi.values[i + 1])
        .collect()
}
