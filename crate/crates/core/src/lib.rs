//! Simulation core for the environment-mediated ("wireless") charging of a
//! two-qubit open quantum battery coupled to a parity-deformed Lorentzian
//! reservoir.
//!
//! A charger qubit and a battery qubit share a common zero-temperature
//! reservoir and never interact directly; restricting the dynamics to the
//! single-excitation sector makes the reduced two-qubit state exactly
//! solvable. The crate provides:
//!
//! * [`model`] — validated parameters, derived spectral constants, the
//!   Lorentzian spectral density and the exponential memory kernel;
//! * [`dynamics`] — survival amplitude, closed-form amplitudes, density
//!   matrices, steady state and trajectory evaluation;
//! * [`energetics`] — stored energy, ergotropy and charging efficiency;
//! * [`nonmarkovianity`] — trace distance, information-backflow detection
//!   and the BLP measure with its pair maximization;
//! * [`oracle`] — independent numerical cross-checks (Volterra solver,
//!   discretized-mode solver, deformed-algebra checker).
//!
//! All quantities are dimensionless with the reservoir spectral width λ as
//! the frequency unit (1/λ the time unit).

pub mod dynamics;
pub mod energetics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod nonmarkovianity;
pub mod optim;
pub mod oracle;

pub use dynamics::{
    amplitudes_at, density_matrix, evolve, reduce_to_battery, steady_state_amplitudes,
    survival_amplitude, AmplitudePair, ChargerBatteryState, GridSpec, SourceTag, Trajectory,
};
pub use energetics::{
    efficiency, energetics_along, ergotropy_general, ergotropy_qubit_diagonal, stored_energy,
    EnergeticsReport, QubitHamiltonian,
};
pub use error::{Error, Result};
pub use model::{
    classify_regime, derive_constants, memory_kernel, spectral_density, DerivedConstants, Regime,
    RegimeReport, SystemParams,
};
pub use nonmarkovianity::{
    blp_measure, default_blp_grid, distinguishability_series, nonmarkovianity_vs_nu,
    trace_distance, InitialPair, NonMarkovianityResult, NuTableRow, PairAngles, SearchSpec,
};
pub use oracle::{
    check_wigner_algebra, solve_discretized, solve_volterra, sup_amplitude_difference,
    DiscretizedReservoir, DiscretizedRun, WignerReport,
};
