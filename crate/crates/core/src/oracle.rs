//! Independent reference eigensolver: direct diagonalization of the
//! discretized Hamiltonian with hard-wall boundaries.
//!
//! Two discretizations are available. The three-point variant is solved by
//! Sturm-sequence bisection on the tridiagonal form and shares no code with
//! the propagation path, making it a fully independent cross-check. The
//! five-point variant uses the same stencil and wall continuation as the
//! propagation engine (eigenvalue counts come from the inertia of the
//! shifted pentadiagonal factorization), so its eigenvalues agree with the
//! imaginary-time fixed points to machine-level accuracy on the same grid.

use crate::compensated::Dd;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pentasolve::PentaSystem;
use crate::potential::{sample_potential, PotentialSpec};
use crate::quadrature::{normalize, WaveFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StencilOrder {
    Three,
    Five,
}

/// Band form of `-1/2 D2 + v` over interior points.
#[derive(Clone, Debug)]
pub struct DiscreteHamiltonian {
    pub spec: PotentialSpec,
    pub grid: Grid,
    pub order: StencilOrder,
    /// Diagonal, including any wall-continuation adjustment.
    diag: Vec<f64>,
    off1: f64,
    off2: f64,
}

impl DiscreteHamiltonian {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Matrix-vector product over interior points.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let m = self.diag.len();
        assert_eq!(x.len(), m);
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut s = self.diag[i] * x[i];
            if i >= 1 {
                s += self.off1 * x[i - 1];
            }
            if i + 1 < m {
                s += self.off1 * x[i + 1];
            }
            if self.order == StencilOrder::Five {
                if i >= 2 {
                    s += self.off2 * x[i - 2];
                }
                if i + 2 < m {
                    s += self.off2 * x[i + 2];
                }
            }
            y[i] = s;
        }
        y
    }

    /// `A - shift I` as a pentadiagonal system (five-point form only).
    fn shifted_system(&self, shift: f64) -> PentaSystem {
        debug_assert_eq!(self.order, StencilOrder::Five);
        let diag = self.diag.iter().map(|d| d - shift).collect();
        PentaSystem::from_constant_bands(self.off2, self.off1, diag, self.off1, self.off2)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let radius = match self.order {
            StencilOrder::Three => 2.0 * self.off1.abs(),
            StencilOrder::Five => 2.0 * self.off1.abs() + 2.0 * self.off2.abs(),
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for d in &self.diag {
            lo = lo.min(d - radius);
            hi = hi.max(d + radius);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `sigma`.
    fn count_below(&self, sigma: f64) -> usize {
        match self.order {
            StencilOrder::Three => {
                // LDL^T Sturm sequence on the tridiagonal form
                let guard = 1e-300_f64;
                let e2 = self.off1 * self.off1;
                let mut count = 0;
                let mut q = self.diag[0] - sigma;
                if q < 0.0 {
                    count += 1;
                }
                for d in &self.diag[1..] {
                    let q_safe = if q.abs() < guard {
                        if q >= 0.0 {
                            guard
                        } else {
                            -guard
                        }
                    } else {
                        q
                    };
                    q = (d - sigma) - e2 / q_safe;
                    if q < 0.0 {
                        count += 1;
                    }
                }
                count
            }
            StencilOrder::Five => {
                // inertia of the shifted band factorization; nudge the shift
                // if elimination lands exactly on a pivot breakdown
                let mut s = sigma;
                for _ in 0..8 {
                    match self.shifted_system(s).factor() {
                        Ok(f) => return f.negative_pivots(),
                        Err(_) => s += (1e-13 * s.abs()).max(1e-13),
                    }
                }
                // final attempt; a persistent breakdown means a genuinely
                // singular shift, count it as "at" the eigenvalue
                match self.shifted_system(s).factor() {
                    Ok(f) => f.negative_pivots(),
                    Err(_) => 0,
                }
            }
        }
    }

    fn dd_rayleigh(&self, x: &[f64]) -> f64 {
        let m = self.diag.len();
        let mut num = Dd::ZERO;
        let mut den = Dd::ZERO;
        for i in 0..m {
            let mut hx = Dd::ZERO.add_prod(self.diag[i], x[i]);
            if i >= 1 {
                hx = hx.add_prod(self.off1, x[i - 1]);
            }
            if i + 1 < m {
                hx = hx.add_prod(self.off1, x[i + 1]);
            }
            if self.order == StencilOrder::Five {
                if i >= 2 {
                    hx = hx.add_prod(self.off2, x[i - 2]);
                }
                if i + 2 < m {
                    hx = hx.add_prod(self.off2, x[i + 2]);
                }
            }
            num = num.add(hx.mul_f64(x[i]));
            den = den.add_prod(x[i], x[i]);
        }
        num.div(den)
    }

    /// Inverse iteration at shift `sigma`; returns a unit 2-norm vector.
    fn inverse_iteration(&self, sigma: f64) -> Result<Vec<f64>> {
        let m = self.diag.len();
        let mut x: Vec<f64> = (0..m)
            .map(|i| 1.0 + 0.37 * ((i * 2654435761) % 1000) as f64 / 1000.0)
            .collect();
        let mut shift = sigma;
        let solver: Box<dyn Fn(&[f64]) -> Result<Vec<f64>>> = match self.order {
            StencilOrder::Five => {
                let mut factor = None;
                for _ in 0..8 {
                    match self.shifted_system(shift).factor() {
                        Ok(f) => {
                            factor = Some(f);
                            break;
                        }
                        Err(_) => shift += (1e-12 * shift.abs()).max(1e-12),
                    }
                }
                let f = factor.ok_or_else(|| {
                    Error::EigenFailure("inverse iteration: shifted factorization failed".into())
                })?;
                Box::new(move |rhs: &[f64]| Ok(f.solve(rhs)))
            }
            StencilOrder::Three => {
                let tri = TridiagFactor::new(&self.diag, self.off1, shift)?;
                Box::new(move |rhs: &[f64]| Ok(tri.solve(rhs)))
            }
        };
        for _ in 0..3 {
            x = solver(&x)?;
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !(nrm.is_finite() && nrm > 0.0) {
                return Err(Error::EigenFailure(
                    "inverse iteration produced a non-finite vector".into(),
                ));
            }
            for v in &mut x {
                *v /= nrm;
            }
        }
        Ok(x)
    }
}

/// Tridiagonal LU without pivoting, used only by the three-point oracle path.
struct TridiagFactor {
    pivot: Vec<f64>,
    low: Vec<f64>,
    off: f64,
}

impl TridiagFactor {
    fn new(diag: &[f64], off: f64, shift: f64) -> Result<TridiagFactor> {
        let m = diag.len();
        let mut pivot = vec![0.0; m];
        let mut low = vec![0.0; m - 1];
        let scale = diag.iter().fold(0.0_f64, |a, d| a.max(d.abs()));
        let mut shift = shift;
        'outer: for _ in 0..8 {
            pivot[0] = diag[0] - shift;
            for i in 1..m {
                if pivot[i - 1].abs() <= 1e-14 * scale {
                    shift += (1e-12 * shift.abs()).max(1e-12);
                    continue 'outer;
                }
                low[i - 1] = off / pivot[i - 1];
                pivot[i] = (diag[i] - shift) - low[i - 1] * off;
            }
            if pivot[m - 1].abs() <= 1e-300 {
                shift += (1e-12 * shift.abs()).max(1e-12);
                continue;
            }
            return Ok(TridiagFactor { pivot, low, off });
        }
        Err(Error::EigenFailure("tridiagonal factorization failed".into()))
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let m = self.pivot.len();
        let mut x = vec![0.0; m];
        x[0] = rhs[0];
        for i in 1..m {
            x[i] = rhs[i] - self.low[i - 1] * x[i - 1];
        }
        x[m - 1] /= self.pivot[m - 1];
        for i in (0..m - 1).rev() {
            x[i] = (x[i] - self.off * x[i + 1]) / self.pivot[i];
        }
        x
    }
}

/// Discretize `-1/2 D2 + v` on the interior points of `grid`.
pub fn build_hamiltonian(
    spec: PotentialSpec,
    grid: &Grid,
    order: StencilOrder,
) -> DiscreteHamiltonian {
    let h2 = grid.h * grid.h;
    let v = sample_potential(spec, grid);
    let m = grid.n_interior();
    match order {
        StencilOrder::Three => {
            let diag = (0..m).map(|i| 1.0 / h2 + v[i + 1]).collect();
            DiscreteHamiltonian {
                spec,
                grid: *grid,
                order,
                diag,
                off1: -0.5 / h2,
                off2: 0.0,
            }
        }
        StencilOrder::Five => {
            let mut diag: Vec<f64> = (0..m).map(|i| 1.25 / h2 + v[i + 1]).collect();
            // antisymmetric wall continuation folds the out-of-range band
            // entry onto the diagonal (see the stencil module)
            diag[0] -= 1.0 / (24.0 * h2);
            diag[m - 1] -= 1.0 / (24.0 * h2);
            DiscreteHamiltonian {
                spec,
                grid: *grid,
                order,
                diag,
                off1: -2.0 / (3.0 * h2),
                off2: 1.0 / (24.0 * h2),
            }
        }
    }
}

/// The `k` smallest eigenvalues, ascending, in the family's reported energy
/// units (see [`PotentialSpec::energy_scale`]).
pub fn lowest_eigenvalues(h: &DiscreteHamiltonian, k: usize) -> Result<Vec<f64>> {
    Ok(lowest_eigenpairs(h, k)?.into_iter().map(|(e, _)| e).collect())
}

/// The `k` smallest eigenpairs. Eigenvalues are scaled to reported units;
/// eigenvectors are quadrature-normalized wavefunctions (walls included).
pub fn lowest_eigenpairs(
    h: &DiscreteHamiltonian,
    k: usize,
) -> Result<Vec<(f64, WaveFunction)>> {
    let m = h.n();
    assert!(k <= m, "requested {k} eigenvalues of a {m}-dimensional operator");
    let (lo0, hi0) = h.gershgorin();
    let scale = h.spec.energy_scale();
    let mut out = Vec::with_capacity(k);
    for idx in 0..k {
        let mut lo = lo0;
        let mut hi = hi0;
        // bisect on the eigenvalue count
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let width = hi - lo;
            if width <= 1e-13 * mid.abs().max(1e-3) {
                break;
            }
            if h.count_below(mid) <= idx {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let approx = 0.5 * (lo + hi);
        // polish with inverse iteration + compensated Rayleigh quotient
        let offset = (1e-11 * approx.abs()).max(1e-11);
        let vec = h.inverse_iteration(approx - offset)?;
        let lam = h.dd_rayleigh(&vec);
        let psi = normalize(&WaveFunction::from_interior(h.grid, &vec))?;
        out.push((lam * scale, psi));
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}
