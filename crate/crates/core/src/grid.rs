//! Uniform spatial mesh over the confinement box.
//!
//! The grid includes the wall points `x_1 = a` and `x_N = b`, where the
//! wavefunction is pinned to zero; interior unknowns are `j = 2..N-1`
//! (1-based). Positions are generated from index arithmetic, never by
//! repeated addition, so large grids do not accumulate drift.

use crate::error::{Error, Result};

/// Box between two impenetrable walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxDomain {
    /// Left wall position (a.u.).
    pub a: f64,
    /// Right wall position (a.u.).
    pub b: f64,
}

impl BoxDomain {
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }
}

/// Uniform mesh with `n_points` points including both walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub domain: BoxDomain,
    pub n_points: usize,
    /// Spacing `h = (b - a) / (N - 1)`.
    pub h: f64,
}

/// A five-point stencil needs at least this many mesh points.
pub const MIN_POINTS: usize = 9;

impl Grid {
    fn new(a: f64, b: f64, n_points: usize) -> Result<Grid> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidGrid(format!(
                "walls must satisfy a < b, got a = {a}, b = {b}"
            )));
        }
        if n_points < MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "need at least {MIN_POINTS} points for the five-point stencil, got {n_points}"
            )));
        }
        let h = (b - a) / (n_points - 1) as f64;
        Ok(Grid {
            domain: BoxDomain { a, b },
            n_points,
            h,
        })
    }

    /// Position of point `j` (0-based, `0..n_points`).
    #[inline]
    pub fn x(&self, j: usize) -> f64 {
        self.domain.a + j as f64 * self.h
    }

    /// All positions, walls included.
    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Number of interior points (excluding the two walls).
    #[inline]
    pub fn n_interior(&self) -> usize {
        self.n_points - 2
    }
}

/// Symmetric box `[-R, +R]`.
pub fn make_symmetric_grid(r: f64, n_points: usize) -> Result<Grid> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "half-width R must be positive, got {r}"
        )));
    }
    Grid::new(-r, r, n_points)
}

/// Box of width `L` centered at `d`: walls at `-L/2 + d` and `L/2 + d`.
pub fn make_asymmetric_grid(length: f64, d: f64, n_points: usize) -> Result<Grid> {
    if !(length.is_finite() && length > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "box length L must be positive, got {length}"
        )));
    }
    if !d.is_finite() {
        return Err(Error::InvalidGrid(format!("offset d must be finite, got {d}")));
    }
    Grid::new(-0.5 * length + d, 0.5 * length + d, n_points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulps_apart(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn table_grids() {
        let g = make_symmetric_grid(0.5, 101).unwrap();
        assert_eq!(g.h, 0.01);
        assert_eq!(g.domain, BoxDomain { a: -0.5, b: 0.5 });

        let g = make_symmetric_grid(5.0, 101).unwrap();
        assert_eq!(g.h, 0.1);
    }

    #[test]
    fn below_stencil_minimum_rejected() {
        assert!(make_symmetric_grid(1.0, 3).is_err());
        assert!(make_symmetric_grid(1.0, 8).is_err());
        assert!(make_symmetric_grid(1.0, 9).is_ok());
    }

    #[test]
    fn nonpositive_extent_rejected() {
        assert!(make_symmetric_grid(0.0, 101).is_err());
        assert!(make_symmetric_grid(-1.0, 101).is_err());
        assert!(make_asymmetric_grid(0.0, 1.0, 101).is_err());
        assert!(make_asymmetric_grid(-2.0, 0.0, 101).is_err());
    }

    #[test]
    fn asymmetric_domains() {
        let g = make_asymmetric_grid(2.0, 0.0, 101).unwrap();
        assert_eq!(g.domain, BoxDomain { a: -1.0, b: 1.0 });

        let g = make_asymmetric_grid(2.0, 3.0, 101).unwrap();
        assert_eq!(g.domain, BoxDomain { a: 2.0, b: 4.0 });
        assert!((g.domain.width() - 2.0).abs() < 1e-15);

        let g = make_asymmetric_grid(2.0, 0.36, 2001).unwrap();
        assert!((g.h - 0.001).abs() < 1e-18);
    }

    #[test]
    fn endpoint_reconstruction_within_4_ulp() {
        for &(r, n) in &[(0.5, 101), (5.0, 2001), (1.0, 777), (10.0, 20001)] {
            let g = make_symmetric_grid(r, n).unwrap();
            let rebuilt = g.x(n - 1);
            assert!(
                ulps_apart(rebuilt, g.domain.b) <= 4,
                "R={r} N={n}: {rebuilt:e} vs {:e}",
                g.domain.b
            );
            assert_eq!(g.x(0), g.domain.a);
        }
    }

    #[test]
    fn symmetric_equals_asymmetric_with_zero_offset() {
        for &(r, n) in &[(0.5, 101), (3.25, 513)] {
            let s = make_symmetric_grid(r, n).unwrap();
            let a = make_asymmetric_grid(2.0 * r, 0.0, n).unwrap();
            assert_eq!(s, a);
        }
    }
}
