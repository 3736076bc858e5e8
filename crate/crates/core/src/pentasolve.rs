//! Pentadiagonal linear solver.
//!
//! Banded LU elimination without pivoting, O(M) time and workspace. The
//! implicit-step matrices here are strongly diagonally dominant (or at least
//! symmetric positive definite) in the usable time-step regimes, so pivoting
//! is unnecessary; a zero-pivot guard reports when that assumption breaks so
//! the caller can reduce the time step.

use crate::error::{Error, Result};

/// Relative zero-pivot guard: elimination fails when a pivot magnitude drops
/// below `PIVOT_GUARD * max |diag|`.
pub const PIVOT_GUARD: f64 = 1e-14;

/// Five-band system over `M` unknowns.
///
/// Row `i` reads `sub2[i-2] x_{i-2} + sub1[i-1] x_{i-1} + diag[i] x_i +
/// sup1[i] x_{i+1} + sup2[i] x_{i+2}`; the band vectors have lengths
/// `M-2, M-1, M, M-1, M-2`. In the band notation used for the implicit step
/// these are `alpha, beta, gamma, delta, zeta` respectively.
#[derive(Clone, Debug)]
pub struct PentaSystem {
    pub sub2: Vec<f64>,
    pub sub1: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup1: Vec<f64>,
    pub sup2: Vec<f64>,
}

impl PentaSystem {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Constant-band convenience constructor.
    pub fn from_constant_bands(sub2: f64, sub1: f64, diag: Vec<f64>, sup1: f64, sup2: f64) -> Self {
        let m = diag.len();
        PentaSystem {
            sub2: vec![sub2; m - 2],
            sub1: vec![sub1; m - 1],
            diag,
            sup1: vec![sup1; m - 1],
            sup2: vec![sup2; m - 2],
        }
    }

    /// Band times vector.
    pub fn multiply(&self, x: &[f64]) -> Vec<f64> {
        let m = self.len();
        assert_eq!(x.len(), m);
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut s = self.diag[i] * x[i];
            if i >= 1 {
                s += self.sub1[i - 1] * x[i - 1];
            }
            if i >= 2 {
                s += self.sub2[i - 2] * x[i - 2];
            }
            if i + 1 < m {
                s += self.sup1[i] * x[i + 1];
            }
            if i + 2 < m {
                s += self.sup2[i] * x[i + 2];
            }
            y[i] = s;
        }
        y
    }

    /// Factor the matrix; reuse the factorization across many right-hand
    /// sides (the implicit-step bands do not change between iterations).
    pub fn factor(&self) -> Result<PentaFactor> {
        PentaFactor::new(self)
    }
}

/// LU factorization of a [`PentaSystem`] (unit lower part stored as the
/// elimination multipliers `l1`, `l2`; upper part as `pivot`, `u1`, `u2`).
#[derive(Clone, Debug)]
pub struct PentaFactor {
    pivot: Vec<f64>,
    u1: Vec<f64>,
    u2: Vec<f64>,
    l1: Vec<f64>,
    l2: Vec<f64>,
}

impl PentaFactor {
    fn new(sys: &PentaSystem) -> Result<PentaFactor> {
        let m = sys.len();
        assert!(m >= 5, "need at least 5 unknowns, got {m}");
        let threshold = PIVOT_GUARD
            * sys
                .diag
                .iter()
                .fold(0.0_f64, |acc, &d| acc.max(d.abs()));

        let mut pivot = vec![0.0; m];
        let mut u1 = vec![0.0; m - 1];
        let mut u2 = vec![0.0; m - 2];
        let mut l1 = vec![0.0; m - 1]; // multiplier eliminating x_{i-1} from row i
        let mut l2 = vec![0.0; m - 2]; // multiplier eliminating x_{i-2} from row i

        let guard = |p: f64, row: usize| -> Result<f64> {
            if p.abs() <= threshold || !p.is_finite() {
                Err(Error::SingularPivot {
                    row,
                    pivot: p,
                    threshold,
                })
            } else {
                Ok(p)
            }
        };

        pivot[0] = guard(sys.diag[0], 0)?;
        u1[0] = sys.sup1[0];
        u2[0] = sys.sup2[0];

        l1[0] = sys.sub1[0] / pivot[0];
        pivot[1] = guard(sys.diag[1] - l1[0] * u1[0], 1)?;
        u1[1] = sys.sup1[1] - l1[0] * u2[0];
        if m > 3 {
            u2[1] = sys.sup2[1];
        }

        for i in 2..m {
            let lk2 = sys.sub2[i - 2] / pivot[i - 2];
            let lk1 = (sys.sub1[i - 1] - lk2 * u1[i - 2]) / pivot[i - 1];
            l2[i - 2] = lk2;
            l1[i - 1] = lk1;
            let p = sys.diag[i] - lk2 * u2[i - 2] - lk1 * u1[i - 1];
            pivot[i] = guard(p, i)?;
            if i + 1 < m {
                u1[i] = sys.sup1[i] - lk1 * u2[i - 1];
            }
            if i + 2 < m {
                u2[i] = sys.sup2[i];
            }
        }

        Ok(PentaFactor { pivot, u1, u2, l1, l2 })
    }

    pub fn len(&self) -> usize {
        self.pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivot.is_empty()
    }

    /// Signs of the elimination pivots; by Sylvester's law of inertia the
    /// number of negative pivots of `A - sigma I` counts eigenvalues below
    /// `sigma` for symmetric `A`.
    pub fn negative_pivots(&self) -> usize {
        self.pivot.iter().filter(|p| **p < 0.0).count()
    }

    /// Solve `A x = rhs` using the stored factorization.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; rhs.len()];
        self.solve_into(rhs, &mut x);
        x
    }

    /// `solve` writing into a caller-provided buffer (`rhs` and `out` must
    /// not alias).
    pub fn solve_into(&self, rhs: &[f64], out: &mut [f64]) {
        let m = self.pivot.len();
        assert_eq!(rhs.len(), m);
        assert_eq!(out.len(), m);

        // forward substitution L z = rhs (z stored in out)
        out[0] = rhs[0];
        out[1] = rhs[1] - self.l1[0] * out[0];
        for i in 2..m {
            out[i] = rhs[i] - self.l1[i - 1] * out[i - 1] - self.l2[i - 2] * out[i - 2];
        }
        // back substitution U x = z
        out[m - 1] /= self.pivot[m - 1];
        out[m - 2] = (out[m - 2] - self.u1[m - 2] * out[m - 1]) / self.pivot[m - 2];
        for i in (0..m - 2).rev() {
            out[i] = (out[i] - self.u1[i] * out[i + 1] - self.u2[i] * out[i + 2]) / self.pivot[i];
        }
    }
}

/// One-shot factor-and-solve.
pub fn solve_penta(sys: &PentaSystem, rhs: &[f64]) -> Result<Vec<f64>> {
    Ok(sys.factor()?.solve(rhs))
}
