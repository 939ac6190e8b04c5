//! Scale-free compactness `S / S_min`, where `S_min` is the smallest barn
//! envelope enclosing the same volume at the same roof slope.

use serde::{Deserialize, Serialize};

use crate::error::{BarnError, Result};
use crate::geometry::{check_solver_slope, gamma, ratios_from_params, surface, volume};
use crate::geometry::{HouseParams, ShapeRatios};
use crate::optimize_volume::{optimal_ratios_unchecked, optimize_fixed_volume, FixedVolumeOptimum};

const DUAL_PATH_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub design: HouseParams,
    #[serde(rename = "S")]
    pub surface: f64,
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "S_min")]
    pub surface_min: f64,
    /// `S / S_min`, never below one up to rounding.
    pub ratio: f64,
    /// `S - S_min` in m².
    pub headroom: f64,
    pub optimum: FixedVolumeOptimum,
}

/// Slope-only factor `c(α)` such that `S / S_min = gamma(r, k) · c(α)`.
pub fn slope_factor(alpha: f64) -> Result<f64> {
    check_solver_slope(alpha)?;
    let (s, c) = alpha.sin_cos();
    let root = (s + 0.25).sqrt();
    let rk = (2.0 * s + 2.0 * root + 1.0) / (4.0 * c);
    Ok(rk.powf(2.0 / 3.0) * 2.0 * c / (3.0 * s + 6.0 * root + 3.0))
}

/// Compactness through the factorized route `gamma(r, k) · c(α)`.
pub fn factorized_ratio(s: &ShapeRatios) -> Result<f64> {
    Ok(gamma(s)? * slope_factor(s.alpha)?)
}

/// Compactness of a shape given only its proportions: `gamma(r, k) / gamma(r_min, k_min)`.
pub fn ratio_of_shape(s: &ShapeRatios) -> Result<f64> {
    check_solver_slope(s.alpha)?;
    let (r_min, k_min) = optimal_ratios_unchecked(s.alpha);
    let best = gamma(&ShapeRatios::new(r_min, k_min, s.alpha)?)?;
    Ok(gamma(s)? / best)
}

pub fn compactness(p: &HouseParams) -> Result<CompactnessReport> {
    p.validate()?;
    check_solver_slope(p.alpha)?;
    let v = volume(p)?;
    let s = surface(p)?.total;
    let optimum = optimize_fixed_volume(v, p.alpha)?;
    let ratio = s / optimum.surface_min;

    let factorized = factorized_ratio(&ratios_from_params(p)?)?;
    if ((factorized - ratio) / ratio).abs() > DUAL_PATH_TOLERANCE {
        return Err(BarnError::SolverFailure(format!(
            "direct ratio {ratio} disagrees with factorized ratio {factorized}"
        )));
    }

    Ok(CompactnessReport {
        design: *p,
        surface: s,
        volume: v,
        surface_min: optimum.surface_min,
        ratio,
        headroom: s - optimum.surface_min,
        optimum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleCheck {
    pub scale: f64,
    pub ratio: f64,
    pub scaled_ratio: f64,
    pub agrees: bool,
}

/// Compares the measure of `p` with that of `p` scaled uniformly by `scale`.
pub fn compactness_is_scale_free(p: &HouseParams, scale: f64) -> Result<ScaleCheck> {
    let ratio = compactness(p)?.ratio;
    let scaled_ratio = compactness(&p.scaled(scale)?)?.ratio;
    Ok(ScaleCheck {
        scale,
        ratio,
        scaled_ratio,
        agrees: ((scaled_ratio - ratio) / ratio).abs() <= DUAL_PATH_TOLERANCE,
    })
}
