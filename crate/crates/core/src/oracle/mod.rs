//! Independent numerical verification of the closed-form solution:
//!
//! * a Volterra integro-differential solver for the amplitude equations with
//!   the exponential reservoir kernel, reduced to a 3-variable linear ODE;
//! * a discretized-mode single-excitation Schrödinger solver that samples
//!   the Lorentzian spectral density directly;
//! * a truncated-matrix checker for the deformed ladder-operator algebra.
//!
//! Both solvers share one adaptive Runge-Kutta scheme with dense output.

pub mod integrator;
pub mod wigner;

pub use integrator::{Stats, DEFAULT_TOLERANCE};
pub use wigner::{check_wigner_algebra, DeformedFockSpace, WignerReport};

use num_complex::Complex64;

use crate::dynamics::{AmplitudePair, GridSpec, SourceTag, Trajectory, INIT_NORM_TOL};
use crate::error::{Error, Result};
use crate::model::{derive_constants, spectral_density, SystemParams};

/// Solve the memory-kernel amplitude equations
///
///   ċᵢ(t) = −(2ν+1)·rᵢ·𝓡²·∫₀ᵗ e^{−λ′(t−t′)} [r1c1(t′) + r2c2(t′)] dt′
///
/// by the exponential-kernel reduction to a linear ODE in (c1, c2, u) with
/// u(t) = ∫₀ᵗ e^{−λ′(t−t′)}(r1c1 + r2c2)dt′, u̇ = −λ′u + r1c1 + r2c2.
///
/// The kernel weight 𝓡² is the full spectral weight of the Lorentzian
/// (Σ g_k² → W² in the continuum limit), i.e. twice [`crate::model::memory_kernel`].
pub fn solve_volterra(
    params: &SystemParams,
    init: &AmplitudePair,
    grid: &GridSpec,
) -> Result<Trajectory> {
    GridSpec::new(grid.t_end, grid.n_points)?;
    let consts = derive_constants(params)?;
    let norm_sqr = init.norm_sqr();
    if (norm_sqr - 1.0).abs() > INIT_NORM_TOL {
        return Err(Error::UnnormalizedInitialState { norm_sqr });
    }

    let (r1, r2) = (params.r1, params.r2);
    let two_nu_plus_1 = 2.0 * params.nu + 1.0;
    let kernel_weight = consts.vacuum_rabi * consts.vacuum_rabi;
    let lambda_prime = consts.lambda_prime;

    let times = grid.times();
    let mut amplitudes = vec![AmplitudePair::new(Complex64::default(), Complex64::default(), 0.0); times.len()];

    let y0 = [init.c1, init.c2, Complex64::default()];
    integrator::integrate_dense(
        |_t, y, dy| {
            let drive = -two_nu_plus_1 * kernel_weight * y[2];
            dy[0] = r1 * drive;
            dy[1] = r2 * drive;
            dy[2] = -lambda_prime * y[2] + r1 * y[0] + r2 * y[1];
        },
        &y0,
        0.0,
        &times,
        DEFAULT_TOLERANCE,
        DEFAULT_TOLERANCE,
        |idx, t, y| {
            amplitudes[idx] = AmplitudePair::new(y[0], y[1], t);
        },
    )?;

    Trajectory::from_parts(*params, times, amplitudes, SourceTag::Volterra)
}

/// Finite sampling of the Lorentzian reservoir: mode frequencies on a
/// uniform grid over [ω0 − Δ − Kλ, ω0 − Δ + Kλ] (midpoint rule) and
/// couplings g_k² = J(ω_k)·Δω.
#[derive(Debug, Clone)]
pub struct DiscretizedReservoir {
    pub omegas: Vec<f64>,
    pub couplings: Vec<f64>,
    pub n_modes: usize,
    pub cutoff: f64,
}

impl DiscretizedReservoir {
    pub fn build(params: &SystemParams, n_modes: usize, cutoff: f64) -> Result<Self> {
        params.validate()?;
        if n_modes == 0 || !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::InvalidParams(format!(
                "reservoir needs n_modes > 0 and cutoff > 0, got {n_modes}, {cutoff}"
            )));
        }
        let center = params.omega0 - params.delta;
        let half_width = cutoff * params.lambda_width;
        let dw = 2.0 * half_width / n_modes as f64;
        let mut omegas = Vec::with_capacity(n_modes);
        let mut couplings = Vec::with_capacity(n_modes);
        for k in 0..n_modes {
            let w = center - half_width + (k as f64 + 0.5) * dw;
            omegas.push(w);
            couplings.push((spectral_density(params, w) * dw).sqrt());
        }
        Ok(Self {
            omegas,
            couplings,
            n_modes,
            cutoff,
        })
    }

    /// Σ g_k²; converges to W² times the covered fraction of the Lorentzian.
    pub fn coupling_weight(&self) -> f64 {
        self.couplings.iter().map(|g| g * g).sum()
    }

    /// Fraction of the Lorentzian weight inside ±Kλ: (2/π)·arctan(K).
    pub fn coverage_fraction(&self) -> f64 {
        2.0 / std::f64::consts::PI * self.cutoff.atan()
    }

    /// Discrete reservoir correlation function
    /// Σ_k g_k² e^{−i(−ω0+(2ν+1)ω_k)τ}; converges to W²e^{−λ′τ}.
    pub fn kernel_sum(&self, params: &SystemParams, tau: f64) -> Complex64 {
        let two_nu_plus_1 = 2.0 * params.nu + 1.0;
        self.omegas
            .iter()
            .zip(self.couplings.iter())
            .map(|(&w, &g)| {
                let theta = -params.omega0 + two_nu_plus_1 * w;
                Complex64::from_polar(g * g, -theta * tau)
            })
            .sum()
    }
}

/// Output of the discretized-mode solve: the qubit amplitudes plus the total
/// norm |c1|² + |c2|² + Σ|c_k|² per grid point (a unitarity diagnostic).
#[derive(Debug, Clone)]
pub struct DiscretizedRun {
    pub trajectory: Trajectory,
    pub norms: Vec<f64>,
}

impl DiscretizedRun {
    pub fn max_norm_drift(&self) -> f64 {
        self.norms
            .iter()
            .map(|n| (n - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Integrate the (N+2)-amplitude single-excitation Schrödinger system
///
///   i·ċ₁ = √(2ν+1)·r1·Σ_k g_k c_k e^{−iθ_k t}
///   i·ċ₂ = √(2ν+1)·r2·Σ_k g_k c_k e^{−iθ_k t}
///   i·ċ_k = √(2ν+1)·g_k e^{+iθ_k t}(r1c1 + r2c2),   θ_k = −ω0 + (2ν+1)ω_k.
pub fn solve_discretized(
    params: &SystemParams,
    init: &AmplitudePair,
    reservoir: &DiscretizedReservoir,
    grid: &GridSpec,
) -> Result<DiscretizedRun> {
    GridSpec::new(grid.t_end, grid.n_points)?;
    params.validate()?;
    let norm_sqr = init.norm_sqr();
    if (norm_sqr - 1.0).abs() > INIT_NORM_TOL {
        return Err(Error::UnnormalizedInitialState { norm_sqr });
    }

    let n = reservoir.n_modes;
    let (r1, r2) = (params.r1, params.r2);
    let root = (2.0 * params.nu + 1.0).sqrt();
    let thetas: Vec<f64> = reservoir
        .omegas
        .iter()
        .map(|&w| -params.omega0 + (2.0 * params.nu + 1.0) * w)
        .collect();
    let couplings = reservoir.couplings.clone();

    let times = grid.times();
    let mut amplitudes =
        vec![AmplitudePair::new(Complex64::default(), Complex64::default(), 0.0); times.len()];
    let mut norms = vec![0.0; times.len()];

    let mut y0 = vec![Complex64::default(); n + 2];
    y0[0] = init.c1;
    y0[1] = init.c2;

    let minus_i = Complex64::new(0.0, -1.0);
    integrator::integrate_dense(
        |t, y, dy| {
            let sup = r1 * y[0] + r2 * y[1];
            let mut field = Complex64::default();
            for k in 0..n {
                let phase = Complex64::from_polar(1.0, -thetas[k] * t);
                field += couplings[k] * y[2 + k] * phase;
                dy[2 + k] = minus_i * root * couplings[k] * phase.conj() * sup;
            }
            dy[0] = minus_i * root * r1 * field;
            dy[1] = minus_i * root * r2 * field;
        },
        &y0,
        0.0,
        &times,
        DEFAULT_TOLERANCE,
        DEFAULT_TOLERANCE,
        |idx, t, y| {
            amplitudes[idx] = AmplitudePair::new(y[0], y[1], t);
            norms[idx] = y.iter().map(|c| c.norm_sqr()).sum();
        },
    )?;

    Ok(DiscretizedRun {
        trajectory: Trajectory::from_parts(*params, times, amplitudes, SourceTag::Discretized)?,
        norms,
    })
}

/// Sup-norm amplitude difference between two trajectories on the same grid.
pub fn sup_amplitude_difference(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    Ok(a.amplitudes
        .iter()
        .zip(b.amplitudes.iter())
        .map(|(x, y)| (x.c1 - y.c1).norm().max((x.c2 - y.c2).norm()))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::evolve;
    use approx::assert_abs_diff_eq;

    fn sym(nu: f64, rr: f64) -> SystemParams {
        SystemParams::symmetric(nu, rr).unwrap()
    }

    #[test]
    fn volterra_constant_at_zero_coupling() {
        let params = sym(0.3, 0.0);
        let init = AmplitudePair::from_angles(0.8, 0.4);
        let traj = solve_volterra(&params, &init, &GridSpec::new(10.0, 101).unwrap()).unwrap();
        for a in &traj.amplitudes {
            assert!((a.c1 - init.c1).norm() < 1e-12);
            assert!((a.c2 - init.c2).norm() < 1e-12);
        }
    }

    #[test]
    fn volterra_matches_closed_form_markovian() {
        let params = sym(0.0, 0.4);
        let init = AmplitudePair::charger_excited();
        let grid = GridSpec::new(20.0, 801).unwrap();
        let volterra = solve_volterra(&params, &init, &grid).unwrap();
        let closed = evolve(&params, &init, &grid).unwrap();
        let sup = sup_amplitude_difference(&volterra, &closed).unwrap();
        assert!(sup < 1e-8, "sup-norm difference {sup}");
    }

    #[test]
    fn volterra_matches_closed_form_strong_coupling() {
        let params = sym(-0.3, 50.0);
        let init = AmplitudePair::charger_excited();
        let grid = GridSpec::new(0.5, 2001).unwrap();
        let volterra = solve_volterra(&params, &init, &grid).unwrap();
        let closed = evolve(&params, &init, &grid).unwrap();
        let sup = sup_amplitude_difference(&volterra, &closed).unwrap();
        assert!(sup < 1e-7, "sup-norm difference {sup}");
        // first charging peak reproduced by the oracle alone
        let peak = volterra
            .amplitudes
            .iter()
            .map(|a| a.c2.norm_sqr())
            .fold(0.0, f64::max);
        assert_abs_diff_eq!(peak, 0.980, epsilon = 1e-3);
    }

    #[test]
    fn reservoir_weight_matches_coverage() {
        let params = sym(0.0, 0.4);
        for cutoff in [20.0, 40.0] {
            let res = DiscretizedReservoir::build(&params, 2000, cutoff).unwrap();
            let w2 = params.vacuum_rabi().powi(2);
            let expected = w2 * res.coverage_fraction();
            let got = res.coupling_weight();
            assert!(
                (got - expected).abs() <= 1e-3 * expected,
                "coverage {cutoff}: {got} vs {expected}"
            );
        }
    }

    #[test]
    fn discrete_kernel_sum_approaches_exponential() {
        // Sum over modes vs W^2 e^{-lambda' tau}, i.e. twice the printed
        // half-weight correlation function. At finite cutoff K the residual
        // is dominated by the Lorentzian weight outside the window,
        // (1 - (2/pi) arctan K) W^2, and shrinks as K grows.
        let params = sym(-0.3, 0.4);
        let consts = derive_constants(&params).unwrap();
        let w2 = consts.vacuum_rabi * consts.vacuum_rabi;
        let mut worst = Vec::new();
        for cutoff in [40.0, 80.0] {
            let res = DiscretizedReservoir::build(&params, 4000, cutoff).unwrap();
            let tail_bound = (1.0 - res.coverage_fraction()) * w2;
            let mut max_err = 0.0f64;
            for k in 0..=25 {
                let tau = 0.2 * k as f64;
                let discrete = res.kernel_sum(&params, tau);
                let exact = w2 * (-consts.lambda_prime * tau).exp();
                let twice_half = 2.0 * crate::model::memory_kernel(&consts, tau).unwrap();
                assert!((exact - twice_half).norm() < 1e-14);
                max_err = max_err.max((discrete - exact).norm());
            }
            assert!(
                max_err <= 1.05 * tail_bound,
                "K={cutoff}: error {max_err} beyond the tail bound {tail_bound}"
            );
            worst.push(max_err);
        }
        // K = 80 is inside 1e-2 relative of the full kernel weight
        assert!(worst[1] <= 1e-2 * w2, "K=80 error {}", worst[1]);
        assert!(worst[1] < worst[0]);
    }

    #[test]
    fn discretized_solver_tracks_closed_form() {
        // coarse reservoir keeps this test quick; the acceptance suite runs
        // the full N = 4000 configuration
        let params = sym(0.0, 0.4);
        let init = AmplitudePair::charger_excited();
        let grid = GridSpec::new(10.0, 201).unwrap();
        let res = DiscretizedReservoir::build(&params, 600, 20.0).unwrap();
        let run = solve_discretized(&params, &init, &res, &grid).unwrap();
        let closed = evolve(&params, &init, &grid).unwrap();
        let sup = sup_amplitude_difference(&run.trajectory, &closed).unwrap();
        assert!(sup < 1e-2, "sup-norm difference {sup}");
        assert!(run.max_norm_drift() < 1e-8, "norm drift {}", run.max_norm_drift());
        assert_abs_diff_eq!(run.norms[0], 1.0, epsilon = 1e-14);
    }
}
