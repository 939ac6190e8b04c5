//! Closed-form envelope minimum at fixed volume and roof slope.
//!
//! Minimizing `S` at fixed `V` reduces to minimizing the shape factor
//! `gamma(r, k)`. Its unique interior stationary point is
//!
//! ```text
//! r_min = sqrt(sin α + 1/4) + 1/2
//! k_min = (sqrt(4 sin α + 1) + 1) / (4 cos α)
//! ```
//!
//! and every optimal dimension carries the prefactor `V^(1/3)`.

use serde::{Deserialize, Serialize};

use crate::error::{positive, BarnError, Result};
use crate::geometry::{
    check_slope, check_solver_slope, params_from_ratios, surface, HouseParams, ShapeRatios,
};

/// Agreement required between the heavy closed form for `S_min` and the
/// envelope recomputed from the optimal dimensions.
const SURFACE_CROSS_CHECK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedVolumeOptimum {
    #[serde(rename = "V")]
    pub volume: f64,
    pub alpha: f64,
    pub alpha_deg: f64,
    pub r_min: f64,
    pub k_min: f64,
    #[serde(rename = "W_min")]
    pub width: f64,
    #[serde(rename = "L_min")]
    pub length: f64,
    #[serde(rename = "H_min")]
    pub height: f64,
    #[serde(rename = "S_min")]
    pub surface_min: f64,
}

impl FixedVolumeOptimum {
    pub fn params(&self) -> HouseParams {
        HouseParams {
            width: self.width,
            length: self.length,
            height: self.height,
            alpha: self.alpha,
        }
    }

    pub fn ratios(&self) -> ShapeRatios {
        ShapeRatios {
            r: self.r_min,
            k: self.k_min,
            alpha: self.alpha,
        }
    }
}

/// Optimal `(r, k)` for the given slope.
pub fn optimal_ratios(alpha: f64) -> Result<(f64, f64)> {
    check_solver_slope(alpha)?;
    Ok(optimal_ratios_unchecked(alpha))
}

pub(crate) fn optimal_ratios_unchecked(alpha: f64) -> (f64, f64) {
    let s = alpha.sin();
    let r = (s + 0.25).sqrt() + 0.5;
    let k = ((4.0 * s + 1.0).sqrt() + 1.0) / (4.0 * alpha.cos());
    (r, k)
}

/// The minimal envelope written out in closed form (no intermediate ratios).
pub fn min_surface_closed_form(volume: f64, alpha: f64) -> Result<f64> {
    positive("V", volume)?;
    check_solver_slope(alpha)?;
    let (s, c) = alpha.sin_cos();
    let root = (s + 0.25).sqrt();
    let numerator = volume.powf(2.0 / 3.0) * (3.0 * s + 6.0 * root + 3.0);
    let rk = (2.0 * s + 2.0 * root + 1.0) / (4.0 * c);
    Ok(numerator / (2.0 * c * rk.powf(2.0 / 3.0)))
}

pub fn optimize_fixed_volume(volume: f64, alpha: f64) -> Result<FixedVolumeOptimum> {
    positive("V", volume)?;
    check_solver_slope(alpha)?;
    let (r_min, k_min) = optimal_ratios_unchecked(alpha);
    let p = params_from_ratios(&ShapeRatios::new(r_min, k_min, alpha)?, volume)?;
    let surface_min = surface(&p)?.total;

    let closed = min_surface_closed_form(volume, alpha)?;
    if ((closed - surface_min) / surface_min).abs() > SURFACE_CROSS_CHECK {
        return Err(BarnError::SolverFailure(format!(
            "closed-form S_min {closed} disagrees with envelope of optimum {surface_min}"
        )));
    }

    Ok(FixedVolumeOptimum {
        volume,
        alpha,
        alpha_deg: alpha.to_degrees(),
        r_min,
        k_min,
        width: p.width,
        length: p.length,
        height: p.height,
        surface_min,
    })
}

/// Analytic partial derivatives `(dγ/dr, dγ/dk)`.
pub fn gamma_gradient(s: &ShapeRatios) -> Result<(f64, f64)> {
    s.validate()?;
    check_slope(s.alpha)?;
    let ShapeRatios { r, k, alpha } = *s;
    let (sin, cos) = alpha.sin_cos();
    let denom = 3.0 * cos * (r * k).powf(5.0 / 3.0);
    let d_r = k * (r - sin - 4.0 * k * cos + 2.0 * r * k * cos) / denom;
    let d_k = -r * (2.0 * r + sin - 2.0 * k * cos - 2.0 * r * k * cos) / denom;
    Ok((d_r, d_k))
}

/// Element-wise [`optimize_fixed_volume`] over a list of slopes, in input order.
pub fn alpha_sweep(volume: f64, alphas: &[f64]) -> Result<Vec<FixedVolumeOptimum>> {
    positive("V", volume)?;
    alphas
        .iter()
        .enumerate()
        .map(|(index, &alpha)| {
            optimize_fixed_volume(volume, alpha).map_err(|e| BarnError::AtIndex {
                index,
                source: Box::new(e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{gamma, volume, ALPHA_MAX, ALPHA_MIN};
    use approx::assert_relative_eq;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn optimal_ratio_examples() {
        let (r, k) = optimal_ratios(deg(30.0)).unwrap();
        assert!((r - 1.3660).abs() <= 5e-5 && (k - 0.7887).abs() <= 5e-5);
        let (r, k) = optimal_ratios(deg(45.0)).unwrap();
        assert!((r - 1.4783).abs() <= 5e-5 && (k - 1.0453).abs() <= 5e-5);
        // approaching the flat roof: open-bottom box optimum (1, 1/2)
        let (r, k) = optimal_ratios(ALPHA_MIN).unwrap();
        assert!((r - 1.0).abs() < 1e-2 && (k - 0.5).abs() < 1e-2);
        let (r, k) = optimal_ratios_unchecked(1e-12);
        assert!((r - 1.0).abs() < 1e-11 && (k - 0.5).abs() < 1e-11);
    }

    #[test]
    fn worked_example_300() {
        let o = optimize_fixed_volume(300.0, deg(30.0)).unwrap();
        for (got, want) in [
            (o.surface_min, 238.7161),
            (o.width, 6.5301),
            (o.length, 8.9203),
            (o.height, 5.1501),
        ] {
            assert!((got - want).abs() <= 5e-4, "{got} vs {want}");
        }
    }

    #[test]
    fn house_a_optimum() {
        let o = optimize_fixed_volume(1567.1, deg(35.0)).unwrap();
        for (got, want) in [
            (o.surface_min, 737.58),
            (o.width, 10.9),
            (o.length, 15.34),
            (o.height, 9.36),
        ] {
            assert!((got - want).abs() <= 0.05, "{got} vs {want}");
        }
    }

    #[test]
    fn lengths_scale_with_cube_root_of_volume() {
        let small = optimize_fixed_volume(1.0, deg(30.0)).unwrap();
        let big = optimize_fixed_volume(1000.0, deg(30.0)).unwrap();
        assert_relative_eq!(big.width, 10.0 * small.width, max_relative = 1e-12);
        assert_relative_eq!(big.length, 10.0 * small.length, max_relative = 1e-12);
        assert_relative_eq!(big.height, 10.0 * small.height, max_relative = 1e-12);
        assert_relative_eq!(big.surface_min, 100.0 * small.surface_min, max_relative = 1e-12);
    }

    #[test]
    fn optimum_is_self_consistent() {
        for d in [0.5, 5.0, 30.0, 60.0, 89.5] {
            let o = optimize_fixed_volume(437.0, deg(d)).unwrap();
            assert_relative_eq!(volume(&o.params()).unwrap(), 437.0, max_relative = 1e-9);
            assert_relative_eq!(o.length, o.r_min * o.width, max_relative = 1e-10);
            assert_relative_eq!(o.height, o.k_min * o.width, max_relative = 1e-10);
            assert_relative_eq!(
                min_surface_closed_form(437.0, deg(d)).unwrap(),
                o.surface_min,
                max_relative = 1e-9
            );
            let g = gamma(&o.ratios()).unwrap();
            assert_relative_eq!(437f64.powf(2.0 / 3.0) * g, o.surface_min, max_relative = 1e-10);
        }
    }

    #[test]
    fn gradient_vanishes_at_optimum() {
        let (r, k) = optimal_ratios(deg(30.0)).unwrap();
        let (dr, dk) = gamma_gradient(&ShapeRatios::new(r, k, deg(30.0)).unwrap()).unwrap();
        assert!(dr.abs() < 1e-10 && dk.abs() < 1e-10);
    }

    #[test]
    fn gradient_regression_fixture() {
        // central differences (h = 1e-6) at (1, 1, 45°), evaluated in 30-digit arithmetic
        let (dr, dk) = gamma_gradient(&ShapeRatios::new(1.0, 1.0, deg(45.0)).unwrap()).unwrap();
        assert!((dr - -0.528_595_479_21).abs() < 1e-9, "{dr}");
        assert!((dk - 0.057_190_958_42).abs() < 1e-9, "{dk}");
    }

    #[test]
    fn sweep_reports_failing_index() {
        let err = alpha_sweep(300.0, &[deg(30.0), deg(89.9), deg(10.0)]).unwrap_err();
        match err {
            BarnError::AtIndex { index, source } => {
                assert_eq!(index, 1);
                assert!(matches!(*source, BarnError::OutOfDomain { name: "alpha", .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
        let one = alpha_sweep(300.0, &[deg(30.0)]).unwrap();
        assert_eq!(one, vec![optimize_fixed_volume(300.0, deg(30.0)).unwrap()]);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            optimize_fixed_volume(0.0, deg(30.0)),
            Err(BarnError::InvalidParameter { name: "V", .. })
        ));
        assert!(matches!(
            optimize_fixed_volume(1.0, ALPHA_MAX + 1e-6),
            Err(BarnError::OutOfDomain { name: "alpha", .. })
        ));
        assert!(optimal_ratios(deg(0.1)).is_err());
    }
}
