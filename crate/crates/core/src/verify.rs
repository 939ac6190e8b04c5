//! Seeded cross-check of the closed-form optima against the oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracle::{brute_force_floor_min, brute_force_gamma_min, default_width_bounds};
use crate::optimize_floor::optimize_fixed_floor;
use crate::optimize_volume::optimize_fixed_volume;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CASES: usize = 25;
/// Relative agreement required in both argmin and minimum value.
pub const AGREEMENT_TOLERANCE: f64 = 1e-6;

pub const GAMMA_GRID_BOUNDS: (f64, f64) = (0.05, 20.0);
pub const GAMMA_GRID_RESOLUTION: usize = 400;
pub const FLOOR_GRID_RESOLUTION: usize = 2000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeCase {
    #[serde(rename = "V")]
    pub volume: f64,
    pub alpha_deg: f64,
    pub closed_form: [f64; 2],
    pub oracle: [f64; 2],
    pub closed_form_surface: f64,
    pub oracle_surface: f64,
    pub argmin_error: f64,
    pub value_error: f64,
    pub oracle_converged: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorCase {
    #[serde(rename = "F")]
    pub floor: f64,
    #[serde(rename = "H")]
    pub height: f64,
    pub alpha_deg: f64,
    pub closed_form_width: f64,
    pub oracle_width: f64,
    pub closed_form_surface: f64,
    pub oracle_surface: f64,
    pub argmin_error: f64,
    pub value_error: f64,
    pub oracle_converged: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub cases: usize,
    pub tolerance: f64,
    pub volume_cases: Vec<VolumeCase>,
    pub floor_cases: Vec<FloorCase>,
    pub all_passed: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> (Vec<&VolumeCase>, Vec<&FloorCase>) {
        (
            self.volume_cases.iter().filter(|c| !c.passed).collect(),
            self.floor_cases.iter().filter(|c| !c.passed).collect(),
        )
    }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Random fixed-volume problems `(V, alpha_deg)`.
pub fn volume_cases(seed: u64, n: usize) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.random_range(50.0..5000.0), rng.random_range(5.0..75.0)))
        .collect()
}

/// Random fixed-floor problems `(F, H, alpha_deg)`, drawn from a stream
/// separate from [`volume_cases`].
pub fn floor_cases(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    (0..n)
        .map(|_| {
            (
                rng.random_range(40.0..600.0),
                rng.random_range(2.5..8.0),
                rng.random_range(5.0..75.0),
            )
        })
        .collect()
}

/// Runs the oracle on `cases` random problems of each kind.
///
/// `perturbation` multiplies the closed-form values of the first case of each
/// kind by `1 + perturbation`; it exists to exercise the failure path.
pub fn run_verification(
    seed: u64,
    cases: usize,
    perturbation: Option<f64>,
) -> Result<VerificationReport> {
    let bump = |i: usize| match perturbation {
        Some(p) if i == 0 => 1.0 + p,
        _ => 1.0,
    };

    let mut volume_results = Vec::with_capacity(cases);
    for (i, (v, d)) in volume_cases(seed, cases).into_iter().enumerate() {
        let alpha = d.to_radians();
        let closed = optimize_fixed_volume(v, alpha)?;
        let oracle = brute_force_gamma_min(
            alpha,
            GAMMA_GRID_BOUNDS,
            GAMMA_GRID_BOUNDS,
            GAMMA_GRID_RESOLUTION,
        )?;
        let closed_form = [closed.r_min * bump(i), closed.k_min * bump(i)];
        let closed_surface = closed.surface_min * bump(i);
        let oracle_surface = v.powf(2.0 / 3.0) * oracle.min_value;
        let argmin_error = rel(oracle.argmin[0], closed_form[0]).max(rel(oracle.argmin[1], closed_form[1]));
        let value_error = rel(oracle_surface, closed_surface);
        volume_results.push(VolumeCase {
            volume: v,
            alpha_deg: d,
            closed_form,
            oracle: [oracle.argmin[0], oracle.argmin[1]],
            closed_form_surface: closed_surface,
            oracle_surface,
            argmin_error,
            value_error,
            oracle_converged: oracle.converged,
            passed: argmin_error <= AGREEMENT_TOLERANCE && value_error <= AGREEMENT_TOLERANCE,
        });
    }

    let mut floor_results = Vec::with_capacity(cases);
    for (i, (f, h, d)) in floor_cases(seed, cases).into_iter().enumerate() {
        let alpha = d.to_radians();
        let closed = optimize_fixed_floor(f, h, alpha)?;
        let oracle = brute_force_floor_min(f, h, alpha, default_width_bounds(f), FLOOR_GRID_RESOLUTION)?;
        let closed_width = closed.width * bump(i);
        let closed_surface = closed.surface_min * bump(i);
        let argmin_error = rel(oracle.argmin[0], closed_width);
        let value_error = rel(oracle.min_value, closed_surface);
        floor_results.push(FloorCase {
            floor: f,
            height: h,
            alpha_deg: d,
            closed_form_width: closed_width,
            oracle_width: oracle.argmin[0],
            closed_form_surface: closed_surface,
            oracle_surface: oracle.min_value,
            argmin_error,
            value_error,
            oracle_converged: oracle.converged,
            passed: argmin_error <= AGREEMENT_TOLERANCE && value_error <= AGREEMENT_TOLERANCE,
        });
    }

    let all_passed =
        volume_results.iter().all(|c| c.passed) && floor_results.iter().all(|c| c.passed);
    Ok(VerificationReport {
        seed,
        cases,
        tolerance: AGREEMENT_TOLERANCE,
        volume_cases: volume_results,
        floor_cases: floor_results,
        all_passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let a = run_verification(7, 5, None).unwrap();
        let b = run_verification(7, 5, None).unwrap();
        assert!(a.all_passed, "{a:#?}");
        assert_eq!(a, b);
        assert_eq!(a.volume_cases.len(), 5);
        assert_eq!(a.floor_cases.len(), 5);
    }

    #[test]
    fn perturbation_is_detected() {
        let rep = run_verification(7, 3, Some(1e-3)).unwrap();
        assert!(!rep.all_passed);
        let (v, f) = rep.failures();
        assert_eq!(v.len(), 1);
        assert_eq!(f.len(), 1);
    }
}
