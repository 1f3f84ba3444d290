//! Charging figures of merit: stored energy ΔE_B(t), ergotropy 𝒲(t) and
//! efficiency η(t) = 𝒲/ΔE_B.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::dynamics::{reduce_to_battery, Trajectory};
use crate::error::{Error, Result};
use crate::linalg;

/// Stored-energy values below ε_floor = 1e−9·ω0 leave the efficiency
/// undefined (avoids 0/0 at t = 0 while staying above rounding noise).
pub const EFFICIENCY_FLOOR_FACTOR: f64 = 1e-9;

/// Battery Hamiltonian H_B = (ω0/2)σ_z in the {|e⟩, |g⟩} basis:
/// eigenvalues +ω0/2 for |e⟩ and −ω0/2 for |g⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitHamiltonian {
    pub omega0: f64,
}

impl QubitHamiltonian {
    pub fn new(omega0: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidParams(format!(
                "omega0 must be > 0, got {omega0}"
            )));
        }
        Ok(Self { omega0 })
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        let half = self.omega0 / 2.0;
        DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(half, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-half, 0.0),
            ],
        )
    }
}

fn expectation(rho: &DMatrix<Complex64>, h: &DMatrix<Complex64>) -> f64 {
    linalg::trace(&(rho * h)).re
}

/// Average energy transferred into the battery between t = 0 and t:
/// Tr(ρ_B(t)H_B) − Tr(ρ_B(0)H_B).
pub fn stored_energy(
    rho_b_t: &DMatrix<Complex64>,
    rho_b_0: &DMatrix<Complex64>,
    h: &QubitHamiltonian,
) -> Result<f64> {
    linalg::validate_density_matrix(rho_b_t)?;
    linalg::validate_density_matrix(rho_b_0)?;
    if rho_b_t.nrows() != 2 || rho_b_0.nrows() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            got: rho_b_t.nrows().max(rho_b_0.nrows()),
        });
    }
    let hm = h.matrix();
    Ok(expectation(rho_b_t, &hm) - expectation(rho_b_0, &hm))
}

/// Maximum work extractable by cyclic unitary driving,
///
/// 𝒲 = Σ_{ij} r_j ε_i (|⟨r_j|ε_i⟩|² − δ_ij),
///
/// with Hamiltonian eigenvalues ε_i ascending and state eigenvalues r_j
/// descending. Equivalent to Tr(ρH) − min_U Tr(UρU†H); zero exactly when ρ
/// is passive. Within a degenerate block any eigenvector ordering gives the
/// same value, so the decomposition's deterministic order is kept as is.
pub fn ergotropy_general(rho: &DMatrix<Complex64>, h: &DMatrix<Complex64>) -> Result<f64> {
    linalg::validate_density_matrix(rho)?;
    if h.nrows() != h.ncols() {
        return Err(Error::InvalidState("Hamiltonian must be square".into()));
    }
    if !linalg::is_hermitian(h, 1e-12) {
        return Err(Error::InvalidState("Hamiltonian must be Hermitian".into()));
    }
    if rho.nrows() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            got: rho.nrows(),
        });
    }
    let d = rho.nrows();
    let (eps, eps_vecs) = linalg::hermitian_eigen_ascending(h);
    let (pops_asc, pop_vecs_asc) = linalg::hermitian_eigen_ascending(rho);
    // state populations r_j descending, paired with their eigenvectors
    let pops: Vec<f64> = pops_asc.iter().rev().copied().collect();
    let mut w = 0.0;
    for j in 0..d {
        let r_vec = pop_vecs_asc.column(d - 1 - j);
        for i in 0..d {
            let overlap: Complex64 = r_vec
                .iter()
                .zip(eps_vecs.column(i).iter())
                .map(|(r, e)| r.conj() * e)
                .sum();
            let delta = if i == j { 1.0 } else { 0.0 };
            w += pops[j] * eps[i] * (overlap.norm_sqr() - delta);
        }
    }
    // clamp the tiny negative rounding left by the two eigen solves
    Ok(if w < 0.0 && w > -1e-12 { 0.0 } else { w })
}

/// Fast path for a battery state diagonal in the energy basis:
/// 𝒲 = ω0·max(0, 2p_e − 1).
pub fn ergotropy_qubit_diagonal(p_e: f64, omega0: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p_e) {
        return Err(Error::OutOfRange(format!(
            "excited population must be in [0, 1], got {p_e}"
        )));
    }
    Ok(omega0 * (2.0 * p_e - 1.0).max(0.0))
}

/// η = 𝒲/ΔE_B where the stored energy exceeds ε_floor = 1e−9·ω0;
/// `None` (undefined, not an error) otherwise.
pub fn efficiency(ergotropy: f64, stored: f64, omega0: f64) -> Option<f64> {
    if stored > EFFICIENCY_FLOOR_FACTOR * omega0 {
        Some(ergotropy / stored)
    } else {
        None
    }
}

/// Stored energy, ergotropy and efficiency along a trajectory.
/// Energies are reported in units of ω0 (so the fully inverted qubit stores 1).
#[derive(Debug, Clone, PartialEq)]
pub struct EnergeticsReport {
    pub times: Vec<f64>,
    pub stored_energy: Vec<f64>,
    pub ergotropy: Vec<f64>,
    pub efficiency: Vec<Option<f64>>,
    pub omega0: f64,
}

/// Pointwise energetics of a trajectory; the reference state ρ_B(0) is the
/// battery reduction of the trajectory's first sample.
pub fn energetics_along(traj: &Trajectory, h: &QubitHamiltonian) -> Result<EnergeticsReport> {
    if traj.is_empty() {
        return Err(Error::InvalidGrid("empty trajectory".into()));
    }
    let hm = h.matrix();
    let rho_b_0 = reduce_to_battery(&crate::dynamics::density_matrix(&traj.amplitudes[0]));
    let e0 = expectation(&rho_b_0, &hm);

    let mut stored = Vec::with_capacity(traj.len());
    let mut ergo = Vec::with_capacity(traj.len());
    let mut eff = Vec::with_capacity(traj.len());
    for amp in &traj.amplitudes {
        let rho_b = reduce_to_battery(&crate::dynamics::density_matrix(amp));
        let de = expectation(&rho_b, &hm) - e0;
        let w = ergotropy_general(&rho_b, &hm)?;
        eff.push(efficiency(w, de, h.omega0));
        stored.push(de / h.omega0);
        ergo.push(w / h.omega0);
    }
    Ok(EnergeticsReport {
        times: traj.times.clone(),
        stored_energy: stored,
        ergotropy: ergo,
        efficiency: eff,
        omega0: h.omega0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, AmplitudePair, GridSpec, SourceTag, Trajectory};
    use crate::model::SystemParams;
    use approx::assert_abs_diff_eq;

    fn diag2(a: f64, b: f64) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(a, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(b, 0.0),
            ],
        )
    }

    #[test]
    fn stored_energy_basics() {
        let h = QubitHamiltonian::new(5.0).unwrap();
        let ground = diag2(0.0, 1.0);
        assert_abs_diff_eq!(
            stored_energy(&ground, &ground, &h).unwrap(),
            0.0,
            epsilon = 1e-15
        );
        // symmetric steady state from an empty battery: 0.25 w0
        let quarter = diag2(0.25, 0.75);
        assert_abs_diff_eq!(
            stored_energy(&quarter, &ground, &h).unwrap(),
            0.25 * 5.0,
            epsilon = 1e-13
        );
        // near-full non-Markovian charge
        let charged = diag2(0.980, 0.020);
        assert_abs_diff_eq!(
            stored_energy(&charged, &ground, &h).unwrap(),
            0.980 * 5.0,
            epsilon = 1e-12
        );
        // invalid state is rejected
        let bad = diag2(0.7, 0.7);
        assert!(stored_energy(&bad, &ground, &h).is_err());
    }

    #[test]
    fn ergotropy_passive_and_inverted() {
        let h = QubitHamiltonian::new(1.0).unwrap();
        let hm = h.matrix();
        assert_abs_diff_eq!(
            ergotropy_general(&diag2(0.3, 0.7), &hm).unwrap(),
            0.0,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            ergotropy_general(&diag2(1.0, 0.0), &hm).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn ergotropy_uniform_superposition() {
        // |+><+| has eigenvalues (1, 0), <H> = 0, passive energy -w0/2
        let h = QubitHamiltonian::new(2.0).unwrap();
        let half = Complex64::new(0.5, 0.0);
        let plus = DMatrix::from_row_slice(2, 2, &[half, half, half, half]);
        assert_abs_diff_eq!(
            ergotropy_general(&plus, &h.matrix()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn qubit_diagonal_fast_path_matches_general() {
        let h = QubitHamiltonian::new(5.0).unwrap();
        let hm = h.matrix();
        for pe in [0.0, 0.1, 0.5, 0.5000001, 0.75, 0.980, 1.0] {
            let fast = ergotropy_qubit_diagonal(pe, h.omega0).unwrap();
            let general = ergotropy_general(&diag2(pe, 1.0 - pe), &hm).unwrap();
            assert_abs_diff_eq!(fast, general, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            ergotropy_qubit_diagonal(0.980, 1.0).unwrap(),
            0.960,
            epsilon = 1e-14
        );
        assert!(ergotropy_qubit_diagonal(-0.1, 1.0).is_err());
        assert!(ergotropy_qubit_diagonal(1.1, 1.0).is_err());
    }

    #[test]
    fn efficiency_definition() {
        assert_abs_diff_eq!(
            efficiency(0.96, 0.98, 1.0).unwrap(),
            0.9795918367346939,
            epsilon = 1e-12
        );
        assert!(efficiency(0.0, 0.0, 1.0).is_none());
        assert!(efficiency(0.0, 5e-10, 1.0).is_none());
        assert_abs_diff_eq!(efficiency(0.0, 0.25, 1.0).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn markovian_undeformed_run_has_zero_ergotropy() {
        let params = SystemParams::symmetric(0.0, 0.4).unwrap();
        let traj = evolve(
            &params,
            &AmplitudePair::charger_excited(),
            &GridSpec::new(60.0, 1001).unwrap(),
        )
        .unwrap();
        let h = QubitHamiltonian::new(params.omega0).unwrap();
        let report = energetics_along(&traj, &h).unwrap();
        assert!(report.ergotropy.iter().all(|&w| w == 0.0));
        // stored energy monotone, ending at 0.25 w0
        for w in report.stored_energy.windows(2) {
            assert!(w[1] >= w[0] - 1e-12);
        }
        assert_abs_diff_eq!(*report.stored_energy.last().unwrap(), 0.25, epsilon = 1e-4);
        assert!(report.efficiency[0].is_none());
        assert_abs_diff_eq!(report.efficiency.last().unwrap().unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn single_point_trajectory_gives_zero_report() {
        let params = SystemParams::symmetric(0.0, 0.4).unwrap();
        let traj = Trajectory::from_parts(
            params,
            vec![0.0],
            vec![AmplitudePair::charger_excited()],
            SourceTag::ClosedForm,
        )
        .unwrap();
        let h = QubitHamiltonian::new(params.omega0).unwrap();
        let report = energetics_along(&traj, &h).unwrap();
        assert_eq!(report.stored_energy, vec![0.0]);
        assert_eq!(report.ergotropy, vec![0.0]);
        assert_eq!(report.efficiency, vec![None]);
    }

    #[test]
    fn report_invariants_from_ground_start() {
        let params = SystemParams::symmetric(-0.3, 50.0).unwrap();
        let traj = evolve(
            &params,
            &AmplitudePair::charger_excited(),
            &GridSpec::new(2.0, 2001).unwrap(),
        )
        .unwrap();
        let h = QubitHamiltonian::new(params.omega0).unwrap();
        let report = energetics_along(&traj, &h).unwrap();
        assert_eq!(report.stored_energy[0], 0.0);
        for k in 0..report.times.len() {
            assert!(report.ergotropy[k] >= 0.0);
            assert!(report.ergotropy[k] <= report.stored_energy[k] + 1e-12);
            if let Some(eta) = report.efficiency[k] {
                assert!((-1e-12..=1.0 + 1e-12).contains(&eta), "eta = {eta}");
            }
        }
        // the non-Markovian run does extract work at its charging peak
        let max_w = report.ergotropy.iter().cloned().fold(0.0f64, f64::max);
        assert!(max_w > 0.9);
    }
}
