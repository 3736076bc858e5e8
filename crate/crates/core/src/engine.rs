//! Imaginary-time iteration: propagate, deflate, normalize, evaluate the
//! energy expectation, test convergence; states are computed sequentially
//! from the bottom of the spectrum up.

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::pentasolve::PentaFactor;
use crate::potential::PotentialSpec;
use crate::quadrature::{
    energy_expectation, normalize, overlap, position_moments, WaveFunction, COLLAPSE_THRESHOLD,
};
use crate::stencil::{assemble_coefficients, assemble_rhs_into, left_system, PropagatorCoefficients};

/// Trial-function selector.
///
/// The parity-pure Gaussians select parity sectors on symmetric boxes; the
/// centered Gaussian is the default for asymmetric problems, where
/// Gram-Schmidt deflation alone separates the states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrialKind {
    /// `exp(-((x-c)/w)^2)` with `c` the box midpoint.
    EvenGaussian,
    /// `(x-c) exp(-((x-c)/w)^2)`.
    OddGaussian,
    /// Same shape as `EvenGaussian`; kept distinct so spectrum runs do not
    /// alternate parity (asymmetric potentials have none to alternate).
    GaussianAtCenter,
}

impl std::str::FromStr for TrialKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "even-gaussian" => Ok(TrialKind::EvenGaussian),
            "odd-gaussian" => Ok(TrialKind::OddGaussian),
            "gaussian-at-center" => Ok(TrialKind::GaussianAtCenter),
            _ => Err(format!(
                "unknown trial '{s}' (expected even-gaussian, odd-gaussian or gaussian-at-center)"
            )),
        }
    }
}

impl TrialKind {
    pub fn name(&self) -> &'static str {
        match self {
            TrialKind::EvenGaussian => "even-gaussian",
            TrialKind::OddGaussian => "odd-gaussian",
            TrialKind::GaussianAtCenter => "gaussian-at-center",
        }
    }
}

/// Iteration parameters.
#[derive(Clone, Copy, Debug)]
pub struct ItpConfig {
    /// Imaginary-time step. The converged energy does not depend on it (the
    /// implicit-step pencil shares eigenvectors with the discrete
    /// Hamiltonian), so the default trades nothing but iteration count.
    pub dtau: f64,
    /// Convergence threshold on the energy change per iteration.
    pub tol: f64,
    pub max_iter: usize,
    /// Consecutive sub-`tol` iterations required before declaring
    /// convergence.
    pub sustain: usize,
    pub trial: TrialKind,
    /// Gaussian width of the trial function.
    pub trial_width: f64,
}

impl Default for ItpConfig {
    fn default() -> Self {
        ItpConfig {
            dtau: 1e-3,
            tol: 1e-13,
            max_iter: 1_000_000,
            sustain: 3,
            trial: TrialKind::EvenGaussian,
            trial_width: 1.0,
        }
    }
}

impl ItpConfig {
    fn validate(&self) -> Result<()> {
        if !(self.dtau > 0.0) {
            return Err(Error::NonPositiveDtau(self.dtau));
        }
        if !(self.tol > 0.0) || self.max_iter == 0 || self.sustain == 0 || !(self.trial_width > 0.0)
        {
            return Err(Error::InvalidGrid(format!(
                "invalid iteration config: tol={}, max_iter={}, sustain={}, trial_width={}",
                self.tol, self.max_iter, self.sustain, self.trial_width
            )));
        }
        Ok(())
    }
}

/// Converged (or abandoned) state of one solve.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub state_index: usize,
    /// Energy in the family's reported units (see
    /// [`PotentialSpec::energy_scale`]).
    pub energy: f64,
    pub psi: WaveFunction,
    pub iterations: usize,
    /// Energy after every iteration, reported units.
    pub energy_history: Vec<f64>,
    /// `(<x^2>, <x^4>)`.
    pub moments: (f64, f64),
    pub converged: bool,
    /// Time step actually used (smaller than requested if the restart
    /// policy had to back off).
    pub dtau: f64,
}

/// Sample a trial function on the grid: a unit-width-`w` Gaussian (or its
/// odd sibling) centered on the box midpoint, walls zeroed, normalized.
pub fn trial_function(kind: TrialKind, grid: &Grid) -> WaveFunction {
    trial_function_with_width(kind, 1.0, grid)
}

pub fn trial_function_with_width(kind: TrialKind, width: f64, grid: &Grid) -> WaveFunction {
    // u_j = (j - mid) h is exactly antisymmetric in floating point, so
    // parity-pure trials come out bit-exact palindromes
    let mid = (grid.n_points - 1) as f64 / 2.0;
    let values = (0..grid.n_points)
        .map(|j| {
            let u = (j as f64 - mid) * grid.h;
            let g = (-(u / width) * (u / width)).exp();
            match kind {
                TrialKind::EvenGaussian | TrialKind::GaussianAtCenter => g,
                TrialKind::OddGaussian => u * g,
            }
        })
        .collect();
    let wf = WaveFunction::from_values(*grid, values);
    normalize(&wf).expect("gaussian trial cannot collapse")
}

/// Remove the projections of `psi` onto `lower_states` (assumed mutually
/// orthonormal). Residual overlaps are driven below 1e-12 with a second
/// Gram-Schmidt pass when the first leaves them too large.
pub fn deflate(psi: &WaveFunction, lower_states: &[WaveFunction]) -> Result<WaveFunction> {
    if lower_states.is_empty() {
        return Ok(psi.clone());
    }
    let mut out = psi.clone();
    out.normalized = false;
    for _pass in 0..2 {
        let mut max_overlap = 0.0_f64;
        for phi in lower_states {
            let c = overlap(&out, phi)?;
            max_overlap = max_overlap.max(c.abs());
            for (o, p) in out.values.iter_mut().zip(&phi.values) {
                *o -= c * p;
            }
        }
        if max_overlap <= 1e-12 {
            break;
        }
    }
    let ns = overlap(&out, &out)?;
    if !(ns > COLLAPSE_THRESHOLD) {
        return Err(Error::Collapse { norm_sq: ns });
    }
    Ok(out)
}

/// Factored implicit-step operator, reusable across iterations.
pub struct Propagator {
    pub spec: PotentialSpec,
    pub grid: Grid,
    pub coeffs: PropagatorCoefficients,
    factor: PentaFactor,
}

impl Propagator {
    pub fn new(spec: PotentialSpec, grid: &Grid, dtau: f64) -> Result<Propagator> {
        let coeffs = assemble_coefficients(spec, grid, dtau)?;
        let factor = left_system(&coeffs).factor()?;
        Ok(Propagator {
            spec,
            grid: *grid,
            coeffs,
            factor,
        })
    }

    pub fn dtau(&self) -> f64 {
        self.coeffs.dtau
    }

    /// One implicit step; the result is unnormalized.
    pub fn step(&self, psi: &WaveFunction) -> Result<WaveFunction> {
        let m = self.grid.n_interior();
        let mut rhs = vec![0.0; m];
        assemble_rhs_into(&self.coeffs, self.spec, &self.grid, psi, &mut rhs);
        let mut interior = vec![0.0; m];
        self.factor.solve_into(&rhs, &mut interior);
        Ok(WaveFunction::from_interior(self.grid, &interior))
    }
}

/// Standalone step matching the loop body: solve, with walls staying zero.
pub fn propagate_step(psi: &WaveFunction, propagator: &Propagator) -> Result<WaveFunction> {
    propagator.step(psi)
}

fn build_propagator_with_restarts(
    spec: PotentialSpec,
    grid: &Grid,
    dtau0: f64,
) -> Result<Propagator> {
    let mut dtau = dtau0;
    let mut last_err = None;
    for _ in 0..=5 {
        match Propagator::new(spec, grid, dtau) {
            Ok(p) => return Ok(p),
            Err(e @ Error::SingularPivot { .. }) => {
                last_err = Some(e);
                dtau *= 0.5;
            }
            Err(e) => return Err(e),
        }
    }
    Err(last_err.unwrap())
}

fn raw_dot(a: &WaveFunction, b: &WaveFunction) -> f64 {
    a.values.iter().zip(&b.values).map(|(x, y)| x * y).sum()
}

/// Converge one state by imaginary-time iteration, deflating against the
/// previously converged `lower_states` every step.
///
/// Per-iteration order: propagate, deflate, normalize, evaluate the energy,
/// test the energy change. Non-convergence after `max_iter` is reported via
/// the `converged` flag, not as an error.
pub fn solve_state(
    spec: PotentialSpec,
    grid: &Grid,
    config: &ItpConfig,
    lower_states: &[WaveFunction],
) -> Result<SolveResult> {
    config.validate()?;
    let scale = spec.energy_scale();
    let propagator = build_propagator_with_restarts(spec, grid, config.dtau)?;

    let trial = trial_function_with_width(config.trial, config.trial_width, grid);
    let mut psi = normalize(&deflate(&trial, lower_states)?)?;

    let mut history = Vec::new();
    let mut prev_energy = f64::NAN;
    let mut streak = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;

    for it in 1..=config.max_iter {
        let stepped = propagator.step(&psi)?;
        let deflated = deflate(&stepped, lower_states)?;
        let mut next = normalize(&deflated)?;
        if raw_dot(&next, &psi) < 0.0 {
            for v in &mut next.values {
                *v = -*v;
            }
        }
        psi = next;
        let energy = energy_expectation(&psi, spec)? * scale;
        history.push(energy);
        iterations = it;
        let delta = energy - prev_energy;
        prev_energy = energy;
        if delta.abs() <= config.tol {
            streak += 1;
            if streak >= config.sustain {
                converged = true;
                break;
            }
        } else {
            streak = 0;
        }
    }

    // canonical sign: largest-magnitude sample positive
    let flip = psi
        .values
        .iter()
        .fold((0.0_f64, 1.0_f64), |(mx, sign), &v| {
            if v.abs() > mx {
                (v.abs(), v.signum())
            } else {
                (mx, sign)
            }
        })
        .1
        < 0.0;
    if flip {
        for v in &mut psi.values {
            *v = -*v;
        }
    }

    let moments = position_moments(&psi)?;
    Ok(SolveResult {
        state_index: lower_states.len(),
        energy: prev_energy,
        psi,
        iterations,
        energy_history: history,
        moments,
        converged,
        dtau: propagator.dtau(),
    })
}

/// Compute the `n_states` lowest states in increasing order, deflating each
/// against all previously converged ones.
///
/// Trial parity alternates with the state index when the configured trial is
/// parity-pure (symmetric boxes: eigenstates alternate even/odd up the
/// ladder). `GaussianAtCenter` is reused for every state; deflation alone
/// orders the ladder, which is the only mechanism available without parity.
/// Within a degenerate pair the member that converges first is decided by
/// iteration history; energies match to tolerance either way.
pub fn solve_spectrum(
    spec: PotentialSpec,
    grid: &Grid,
    config: &ItpConfig,
    n_states: usize,
) -> Result<Vec<SolveResult>> {
    assert!(n_states >= 1, "n_states must be at least 1");
    let mut results: Vec<SolveResult> = Vec::with_capacity(n_states);
    let mut lower: Vec<WaveFunction> = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let trial = match (config.trial, k % 2) {
            (TrialKind::GaussianAtCenter, _) => TrialKind::GaussianAtCenter,
            (TrialKind::EvenGaussian, 0) | (TrialKind::OddGaussian, 1) => TrialKind::EvenGaussian,
            _ => TrialKind::OddGaussian,
        };
        let state_config = ItpConfig { trial, ..*config };
        let result = solve_state(spec, grid, &state_config, &lower).map_err(|e| e.for_state(k))?;
        lower.push(result.psi.clone());
        results.push(result);
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_asymmetric_grid, make_symmetric_grid};
    use crate::oracle::{build_hamiltonian, lowest_eigenpairs, StencilOrder};
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn trial_shapes() {
        let grid = make_symmetric_grid(1.0, 101).unwrap();
        let even = trial_function(TrialKind::EvenGaussian, &grid);
        let odd = trial_function(TrialKind::OddGaussian, &grid);
        let n = grid.n_points;
        assert_eq!(even.values[0], 0.0);
        assert_eq!(even.values[n - 1], 0.0);
        for j in 0..n {
            assert_eq!(even.values[j], even.values[n - 1 - j], "even parity at {j}");
            assert_eq!(odd.values[j], -odd.values[n - 1 - j], "odd parity at {j}");
        }
        assert_eq!(odd.values[(n - 1) / 2], 0.0);
    }

    #[test]
    fn centered_trial_peaks_at_midpoint() {
        // asymmetric box [2, 4]: peak at x = 3
        let grid = make_asymmetric_grid(2.0, 3.0, 101).unwrap();
        let t = trial_function(TrialKind::GaussianAtCenter, &grid);
        let peak = t
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_abs_diff_eq!(grid.x(peak), 3.0, epsilon = grid.h);
    }

    #[test]
    fn step_is_identity_at_tiny_dtau() {
        let grid = make_symmetric_grid(1.0, 101).unwrap();
        let psi = trial_function(TrialKind::EvenGaussian, &grid);
        let prop = Propagator::new(PotentialSpec::harmonic(), &grid, 1e-14).unwrap();
        let out = prop.step(&psi).unwrap();
        for (a, b) in out.values.iter().zip(&psi.values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn step_preserves_discrete_eigenvector_direction() {
        let grid = make_symmetric_grid(1.0, 201).unwrap();
        let spec = PotentialSpec::harmonic();
        let (_, u) = lowest_eigenpairs(&build_hamiltonian(spec, &grid, StencilOrder::Five), 1)
            .unwrap()
            .remove(0);
        let prop = Propagator::new(spec, &grid, 0.01).unwrap();
        let stepped = prop.step(&u).unwrap();
        let out = normalize(&stepped).unwrap();
        for (a, b) in out.values.iter().zip(&u.values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-11);
        }
    }

    #[test]
    fn two_level_contamination_shrinks_at_known_rate() {
        // psi = (u0 + u1)/sqrt(2): after k steps the overlap with u1 shrinks
        // by [g(e1)/g(e0)]^k, g(e) = (1 - dtau e/2)/(1 + dtau e/2)
        let grid = make_symmetric_grid(1.0, 201).unwrap();
        let spec = PotentialSpec::harmonic();
        let h = build_hamiltonian(spec, &grid, StencilOrder::Five);
        let pairs = lowest_eigenpairs(&h, 2).unwrap();
        let (e0, u0) = (&pairs[0].0, &pairs[0].1);
        let (e1, u1) = (&pairs[1].0, &pairs[1].1);
        let dtau = 0.05;
        let g = |e: f64| (1.0 - 0.5 * dtau * e) / (1.0 + 0.5 * dtau * e);
        let ratio = g(*e1) / g(*e0);

        let mixed: Vec<f64> = u0
            .values
            .iter()
            .zip(&u1.values)
            .map(|(a, b)| (a + b) / 2.0_f64.sqrt())
            .collect();
        let mut psi = normalize(&WaveFunction::from_values(grid, mixed)).unwrap();
        let prop = Propagator::new(spec, &grid, dtau).unwrap();
        let c0 = overlap(&psi, u1).unwrap() / overlap(&psi, u0).unwrap();
        let k = 12;
        for _ in 0..k {
            psi = normalize(&prop.step(&psi).unwrap()).unwrap();
        }
        let ck = overlap(&psi, u1).unwrap() / overlap(&psi, u0).unwrap();
        let predicted = c0 * ratio.powi(k);
        assert_abs_diff_eq!(ck, predicted, epsilon = 1e-9 * predicted.abs().max(1e-6));
    }

    #[test]
    fn deflating_a_state_against_itself_collapses() {
        let grid = make_symmetric_grid(1.0, 101).unwrap();
        let phi = trial_function(TrialKind::EvenGaussian, &grid);
        // phi minus its own projection leaves only rounding dust, which the
        // second pass removes entirely
        match deflate(&phi, &[phi.clone()]) {
            Err(Error::Collapse { .. }) => {}
            Ok(w) => {
                let leftover = norm_of(&w);
                panic!("expected collapse, got residual norm {leftover:.3e}");
            }
            Err(e) => panic!("unexpected error {e:?}"),
        }
    }

    fn norm_of(w: &WaveFunction) -> f64 {
        crate::quadrature::norm(w)
    }

    #[test]
    fn odd_state_untouched_by_even_deflation() {
        let grid = make_symmetric_grid(1.0, 101).unwrap();
        let even = trial_function(TrialKind::EvenGaussian, &grid);
        let odd = trial_function(TrialKind::OddGaussian, &grid);
        let out = deflate(&odd, &[even]).unwrap();
        for (a, b) in out.values.iter().zip(&odd.values) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn deflation_matches_dense_projector() {
        let grid = make_symmetric_grid(1.0, 101).unwrap();
        let spec = PotentialSpec::harmonic();
        let h = build_hamiltonian(spec, &grid, StencilOrder::Five);
        let states: Vec<WaveFunction> = lowest_eigenpairs(&h, 3)
            .unwrap()
            .into_iter()
            .map(|(_, v)| v)
            .collect();
        let psi = {
            let vals = (0..grid.n_points)
                .map(|j| {
                    let x = grid.x(j);
                    (3.0 * x).sin() + 0.2 * x
                })
                .collect();
            WaveFunction::from_values(grid, vals)
        };
        let fast = deflate(&psi, &states).unwrap();
        // explicit projector application with quadrature-weighted inner products
        let w = crate::quadrature::weights(&grid);
        let mut dense = psi.values.clone();
        for _ in 0..2 {
            for phi in &states {
                let c: f64 = (0..grid.n_points)
                    .map(|j| dense[j] * phi.values[j] * w[j])
                    .sum();
                for j in 0..grid.n_points {
                    dense[j] -= c * phi.values[j];
                }
            }
        }
        for (a, b) in fast.values.iter().zip(&dense) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-11);
        }
        for phi in &states {
            assert!(overlap(&fast, phi).unwrap().abs() <= 1e-12);
        }
    }

    #[test]
    fn ground_state_of_box_is_analytic() {
        let grid = make_symmetric_grid(1.0, 401).unwrap();
        let config = ItpConfig::default();
        let r = solve_state(PotentialSpec::Zero, &grid, &config, &[]).unwrap();
        assert!(r.converged);
        assert_abs_diff_eq!(r.energy, PI * PI / 8.0, epsilon = 1e-7);
    }

    #[test]
    fn spectrum_alternates_parity_and_stays_ordered() {
        let grid = make_symmetric_grid(1.0, 201).unwrap();
        let config = ItpConfig::default();
        let states = solve_spectrum(PotentialSpec::harmonic(), &grid, &config, 4).unwrap();
        for w in states.windows(2) {
            assert!(w[1].energy >= w[0].energy - 2.0 * config.tol);
        }
        for (i, s) in states.iter().enumerate() {
            assert_eq!(s.state_index, i);
            assert!(s.converged, "state {i} did not converge");
        }
        // orthogonality of the ladder
        for i in 0..states.len() {
            for j in 0..i {
                let o = overlap(&states[i].psi, &states[j].psi).unwrap();
                assert!(o.abs() <= 1e-10, "overlap({i},{j}) = {o:.2e}");
            }
        }
    }

    #[test]
    fn non_convergence_reported_via_flag() {
        let grid = make_symmetric_grid(1.0, 101).unwrap();
        let config = ItpConfig {
            max_iter: 4,
            tol: 1e-30,
            ..ItpConfig::default()
        };
        let r = solve_state(PotentialSpec::harmonic(), &grid, &config, &[]).unwrap();
        assert!(!r.converged);
        assert_eq!(r.iterations, 4);
        assert_eq!(r.energy_history.len(), 4);
    }
}
