//! Closed-form single-excitation dynamics: the survival amplitude p(t), the
//! charger/battery excitation amplitudes, the two-qubit density matrix, the
//! reduced battery state and the steady state.
//!
//! The amplitudes live in the single-excitation sector, and the two coupling
//! eigenmodes drive everything:
//!
//! * subradiant combination r2·c1 − r1·c2 — decoupled from the reservoir,
//!   conserved exactly;
//! * superradiant combination r1·c1 + r2·c2 — decays as p(t).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{derive_constants, DerivedConstants, SystemParams};

/// Tolerance on |c1(0)|² + |c2(0)|² = 1 for initial states.
pub const INIT_NORM_TOL: f64 = 1e-10;

/// |βt| below which p(t) switches to its critically damped limit
/// e^{−λ′t/2}(1 + λ′t/2); the cosh/sinh ratio is unstable there.
const BETA_T_SERIES_SWITCH: f64 = 1e-6;

/// Excitation amplitudes of charger (c1) and battery (c2) at time t.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub c1: Complex64,
    pub c2: Complex64,
    pub t: f64,
}

impl AmplitudePair {
    pub fn new(c1: Complex64, c2: Complex64, t: f64) -> Self {
        Self { c1, c2, t }
    }

    /// A t = 0 amplitude pair, checked to be normalized.
    pub fn initial(c1: Complex64, c2: Complex64) -> Result<Self> {
        let norm_sqr = c1.norm_sqr() + c2.norm_sqr();
        if (norm_sqr - 1.0).abs() > INIT_NORM_TOL {
            return Err(Error::UnnormalizedInitialState { norm_sqr });
        }
        Ok(Self { c1, c2, t: 0.0 })
    }

    /// Bloch-like parametrization of the single-excitation family:
    /// c1 = cos(θ/2), c2 = e^{iφ} sin(θ/2).
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let c1 = Complex64::new((theta / 2.0).cos(), 0.0);
        let c2 = Complex64::from_polar((theta / 2.0).sin(), phi);
        Self { c1, c2, t: 0.0 }
    }

    /// Charger fully excited, battery empty: the default charging scenario.
    pub fn charger_excited() -> Self {
        Self {
            c1: Complex64::new(1.0, 0.0),
            c2: Complex64::new(0.0, 0.0),
            t: 0.0,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }
}

/// Survival amplitude of the superradiant mode,
/// p(t) = e^{−λ′t/2}[cosh(βt/2) + (λ′/β)sinh(βt/2)].
///
/// Evaluated in the overflow-safe exponential form
/// p = [(λ′+β)e^{(β−λ′)t/2} − (λ′−β)e^{−(β+λ′)t/2}] / (2β), whose exponents
/// have nonpositive real part for every admissible parameter set. Even in β,
/// so the branch of the square root does not matter.
pub fn survival_amplitude(consts: &DerivedConstants, t: f64) -> Complex64 {
    debug_assert!(t >= 0.0, "survival_amplitude requires t >= 0, got {t}");
    let lp = consts.lambda_prime;
    let beta = consts.beta;
    if (beta * t).norm() < BETA_T_SERIES_SWITCH {
        return (-lp * t / 2.0).exp() * (1.0 + lp * t / 2.0);
    }
    let half_t = 0.5 * t;
    ((lp + beta) * ((beta - lp) * half_t).exp() - (lp - beta) * (-(beta + lp) * half_t).exp())
        / (2.0 * beta)
}

/// Closed-form amplitudes at time t for a normalized initial pair:
///
/// c1(t) = r2[r2c1(0) − r1c2(0)] + r1[r1c1(0) + r2c2(0)]p(t)
/// c2(t) = −r1[r2c1(0) − r1c2(0)] + r2[r1c1(0) + r2c2(0)]p(t)
pub fn amplitudes_at(params: &SystemParams, init: &AmplitudePair, t: f64) -> Result<AmplitudePair> {
    let consts = derive_constants(params)?;
    let p = survival_amplitude(&consts, t);
    Ok(amplitudes_from_survival(params, init, p, t)?)
}

/// Amplitudes for a precomputed survival value; shared by the batch and
/// search paths so p(t) is evaluated once per grid point.
pub(crate) fn amplitudes_from_survival(
    params: &SystemParams,
    init: &AmplitudePair,
    p: Complex64,
    t: f64,
) -> Result<AmplitudePair> {
    let norm_sqr = init.norm_sqr();
    if (norm_sqr - 1.0).abs() > INIT_NORM_TOL {
        return Err(Error::UnnormalizedInitialState { norm_sqr });
    }
    let (r1, r2) = (params.r1, params.r2);
    let sub = r2 * init.c1 - r1 * init.c2;
    let sup = r1 * init.c1 + r2 * init.c2;
    Ok(AmplitudePair {
        c1: r2 * sub + r1 * sup * p,
        c2: -r1 * sub + r2 * sup * p,
        t,
    })
}

/// t → ∞ limit of the amplitudes: only the conserved subradiant component
/// survives. At zero coupling (𝓡 = 0) nothing decays and the initial state
/// is returned, since p(t) ≡ 1.
pub fn steady_state_amplitudes(
    params: &SystemParams,
    init: &AmplitudePair,
) -> Result<AmplitudePair> {
    params.validate()?;
    let norm_sqr = init.norm_sqr();
    if (norm_sqr - 1.0).abs() > INIT_NORM_TOL {
        return Err(Error::UnnormalizedInitialState { norm_sqr });
    }
    if params.rabi_ratio == 0.0 {
        return Ok(AmplitudePair { t: f64::INFINITY, ..*init });
    }
    let (r1, r2) = (params.r1, params.r2);
    let sub = r2 * init.c1 - r1 * init.c2;
    Ok(AmplitudePair {
        c1: r2 * sub,
        c2: -r1 * sub,
        t: f64::INFINITY,
    })
}

/// Time horizon after which the amplitudes have converged to the steady
/// state: 50 decay times of the slowest mode (e^{−50} is below double
/// precision noise). `None` at zero coupling, where nothing decays.
pub fn steady_state_horizon(params: &SystemParams) -> Result<Option<f64>> {
    let consts = derive_constants(params)?;
    if params.rabi_ratio == 0.0 {
        return Ok(None);
    }
    let beta_is_real = consts.beta.im.abs() <= 1e-12 * (1.0 + consts.beta.norm());
    let rate = if beta_is_real {
        (consts.lambda_prime - consts.beta).re
    } else {
        consts.lambda_prime.re
    };
    if rate <= 0.0 {
        return Ok(None);
    }
    Ok(Some(50.0 / rate))
}

/// Two-qubit charger-battery density matrix in the basis
/// {|ee⟩, |eg⟩, |ge⟩, |gg⟩}. Only the single-excitation X-structure entries
/// are populated:
///
/// ρ\[1,1\] = |c1|², ρ\[2,2\] = |c2|², ρ\[1,2\] = c1·c2*,
/// ρ\[3,3\] = 1 − |c1|² − |c2|², everything else 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargerBatteryState {
    matrix: DMatrix<Complex64>,
}

impl ChargerBatteryState {
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    /// Population of the excited battery level, ρ\[2,2\].
    pub fn battery_population(&self) -> f64 {
        self.matrix[(2, 2)].re
    }

    /// Population of the excited charger level, ρ\[1,1\].
    pub fn charger_population(&self) -> f64 {
        self.matrix[(1, 1)].re
    }

    /// Hermiticity, trace and positivity check.
    pub fn validate(&self) -> Result<()> {
        linalg::validate_density_matrix(&self.matrix)
    }
}

/// Build the X-structured two-qubit state from an amplitude pair.
/// Positive semidefinite by construction (the middle block is rank one).
pub fn density_matrix(amps: &AmplitudePair) -> ChargerBatteryState {
    let zero = Complex64::new(0.0, 0.0);
    let mut m = DMatrix::from_element(4, 4, zero);
    let p1 = amps.c1.norm_sqr();
    let p2 = amps.c2.norm_sqr();
    m[(1, 1)] = Complex64::new(p1, 0.0);
    m[(2, 2)] = Complex64::new(p2, 0.0);
    m[(1, 2)] = amps.c1 * amps.c2.conj();
    m[(2, 1)] = amps.c1.conj() * amps.c2;
    m[(3, 3)] = Complex64::new((1.0 - p1 - p2).max(0.0), 0.0);
    ChargerBatteryState { matrix: m }
}

/// Partial trace over the charger qubit. Valid for any two-qubit state in
/// the {|ee⟩, |eg⟩, |ge⟩, |gg⟩} ordering; for X-structured inputs the result
/// is diagonal, diag(|c2|², 1 − |c2|²).
pub fn reduce_to_battery(state: &ChargerBatteryState) -> DMatrix<Complex64> {
    let m = state.matrix();
    let mut rho_b = DMatrix::from_element(2, 2, Complex64::new(0.0, 0.0));
    for b in 0..2 {
        for bp in 0..2 {
            // basis index of |a b> is 2a + b with a the charger level
            rho_b[(b, bp)] = m[(b, bp)] + m[(2 + b, 2 + bp)];
        }
    }
    rho_b
}

/// Which solution path produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SourceTag {
    ClosedForm,
    Volterra,
    Discretized,
}

/// Uniform output grid on [0, t_end] with n_points samples (t_0 = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_end: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn new(t_end: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 grid points, got {n_points}"
            )));
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "degenerate grid: t_end must be > 0, got {t_end}"
            )));
        }
        Ok(Self { t_end, n_points })
    }

    pub fn times(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|k| self.t_end * k as f64 / (n - 1) as f64)
            .collect()
    }

    pub fn step(&self) -> f64 {
        self.t_end / (self.n_points - 1) as f64
    }
}

/// Amplitudes sampled on a uniform time grid, tagged with the solver that
/// produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub params: SystemParams,
    pub times: Vec<f64>,
    pub amplitudes: Vec<AmplitudePair>,
    pub source: SourceTag,
}

impl Trajectory {
    /// Assemble a trajectory from parts, checking the grid invariants
    /// (strictly increasing, uniform spacing, one amplitude per point).
    pub fn from_parts(
        params: SystemParams,
        times: Vec<f64>,
        amplitudes: Vec<AmplitudePair>,
        source: SourceTag,
    ) -> Result<Self> {
        if times.is_empty() {
            return Err(Error::InvalidGrid("empty time grid".into()));
        }
        if times.len() != amplitudes.len() {
            return Err(Error::InvalidGrid(format!(
                "{} times vs {} amplitude samples",
                times.len(),
                amplitudes.len()
            )));
        }
        if times.len() > 1 {
            let dt = times[1] - times[0];
            for w in times.windows(2) {
                let step = w[1] - w[0];
                if step <= 0.0 || (step - dt).abs() > 1e-9 * dt.max(1e-300) {
                    return Err(Error::InvalidGrid(
                        "time grid must be strictly increasing and uniform".into(),
                    ));
                }
            }
        }
        Ok(Self {
            params,
            times,
            amplitudes,
            source,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// Evaluate the closed-form dynamics on a uniform grid.
pub fn evolve(params: &SystemParams, init: &AmplitudePair, grid: &GridSpec) -> Result<Trajectory> {
    GridSpec::new(grid.t_end, grid.n_points)?;
    let consts = derive_constants(params)?;
    let norm_sqr = init.norm_sqr();
    if (norm_sqr - 1.0).abs() > INIT_NORM_TOL {
        return Err(Error::UnnormalizedInitialState { norm_sqr });
    }
    let times = grid.times();
    let amplitudes = times
        .iter()
        .map(|&t| {
            let p = survival_amplitude(&consts, t);
            amplitudes_from_survival(params, init, p, t)
        })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::from_parts(*params, times, amplitudes, SourceTag::ClosedForm)
}
