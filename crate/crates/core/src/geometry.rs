//! Parametric barn model: rectangular footprint, vertical walls and a
//! symmetric gable roof without overhangs.
//!
//! The envelope counts the four walls, both roof planes and the two gable
//! triangles. The face in contact with the ground is not part of it.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{positive, BarnError, Result};

/// Smallest roof slope accepted by the solvers (0.5 degrees).
pub const ALPHA_MIN: f64 = 0.5 * std::f64::consts::PI / 180.0;
/// Largest roof slope accepted by the solvers (89.5 degrees).
pub const ALPHA_MAX: f64 = 89.5 * std::f64::consts::PI / 180.0;

/// Roof slope check for plain evaluations: any angle strictly inside (0, π/2).
pub(crate) fn check_slope(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 0.0 && alpha < FRAC_PI_2 {
        Ok(alpha)
    } else {
        Err(BarnError::OutOfDomain {
            name: "alpha",
            value: alpha,
            min: 0.0,
            max: FRAC_PI_2,
        })
    }
}

/// Roof slope check for the optimizers, fields and oracles.
pub fn check_solver_slope(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && (ALPHA_MIN..=ALPHA_MAX).contains(&alpha) {
        Ok(alpha)
    } else {
        Err(BarnError::OutOfDomain {
            name: "alpha",
            value: alpha,
            min: ALPHA_MIN,
            max: ALPHA_MAX,
        })
    }
}

/// One barn design. Lengths in meters, `alpha` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HouseParams {
    #[serde(rename = "W")]
    pub width: f64,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "H")]
    pub height: f64,
    pub alpha: f64,
}

impl HouseParams {
    pub fn new(width: f64, length: f64, height: f64, alpha: f64) -> Result<Self> {
        let p = Self {
            width,
            length,
            height,
            alpha,
        };
        p.validate()?;
        Ok(p)
    }

    /// Same as [`HouseParams::new`] with the slope given in degrees.
    pub fn from_degrees(width: f64, length: f64, height: f64, alpha_deg: f64) -> Result<Self> {
        Self::new(width, length, height, alpha_deg.to_radians())
    }

    pub fn validate(&self) -> Result<()> {
        positive("W", self.width)?;
        positive("L", self.length)?;
        positive("H", self.height)?;
        check_slope(self.alpha)?;
        Ok(())
    }

    /// Uniformly scales all three lengths; the slope is unchanged.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        positive("scale", factor)?;
        Self::new(
            self.width * factor,
            self.length * factor,
            self.height * factor,
            self.alpha,
        )
    }

    /// Footprint area `W·L`.
    pub fn floor_area(&self) -> f64 {
        self.width * self.length
    }
}

/// Dimensionless description of a design: `r = L/W`, `k = H/W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeRatios {
    pub r: f64,
    pub k: f64,
    pub alpha: f64,
}

impl ShapeRatios {
    pub fn new(r: f64, k: f64, alpha: f64) -> Result<Self> {
        let s = Self { r, k, alpha };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        positive("r", self.r)?;
        positive("k", self.k)?;
        check_slope(self.alpha)?;
        Ok(())
    }
}

/// Envelope area split by component, all in m².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeBreakdown {
    /// The two long walls, `2·L·H`.
    pub walls_long: f64,
    /// The two short walls, `2·W·H`.
    pub walls_short: f64,
    /// Both roof planes, `L·W / cos α`.
    pub roof: f64,
    /// Both gable triangles, `W² tan α / 2`.
    pub gables: f64,
    pub total: f64,
}

/// Enclosed volume below the eaves, `W·L·H`.
pub fn volume(p: &HouseParams) -> Result<f64> {
    p.validate()?;
    Ok(p.width * p.length * p.height)
}

pub fn surface(p: &HouseParams) -> Result<EnvelopeBreakdown> {
    p.validate()?;
    let HouseParams {
        width: w,
        length: l,
        height: h,
        alpha,
    } = *p;
    let walls_long = 2.0 * l * h;
    let walls_short = 2.0 * w * h;
    let roof = l * w / alpha.cos();
    let gables = w * w * alpha.tan() / 2.0;
    Ok(EnvelopeBreakdown {
        walls_long,
        walls_short,
        roof,
        gables,
        total: walls_short + walls_long + roof + gables,
    })
}

pub fn ratios_from_params(p: &HouseParams) -> Result<ShapeRatios> {
    p.validate()?;
    Ok(ShapeRatios {
        r: p.length / p.width,
        k: p.height / p.width,
        alpha: p.alpha,
    })
}

/// Rebuilds the design with the given proportions that encloses `volume`.
pub fn params_from_ratios(s: &ShapeRatios, volume: f64) -> Result<HouseParams> {
    s.validate()?;
    positive("V", volume)?;
    let width = (volume / (s.r * s.k)).cbrt();
    HouseParams::new(width, width * s.r, width * s.k, s.alpha)
}

/// Volume-free shape factor: `S = V^(2/3) · gamma(r, k)` at fixed slope.
pub fn gamma(s: &ShapeRatios) -> Result<f64> {
    s.validate()?;
    Ok(gamma_unchecked(s.r, s.k, s.alpha))
}

pub(crate) fn gamma_unchecked(r: f64, k: f64, alpha: f64) -> f64 {
    let numerator = 2.0 * k + 2.0 * r * k + r / alpha.cos() + alpha.tan() / 2.0;
    numerator / (r * k).powf(2.0 / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn volume_examples() {
        let a = HouseParams::new(19.9, 15.75, 5.0, deg(35.0)).unwrap();
        assert!((volume(&a).unwrap() - 1567.1).abs() <= 0.05);
        let unit = HouseParams::new(1.0, 1.0, 1.0, deg(10.0)).unwrap();
        assert_eq!(volume(&unit).unwrap(), 1.0);
        let c = HouseParams::new(8.0, 13.5, 5.8, deg(40.0)).unwrap();
        assert!((volume(&c).unwrap() - 626.4).abs() <= 0.05);
    }

    #[test]
    fn surface_examples() {
        let a = HouseParams::new(19.9, 15.75, 5.0, deg(35.0)).unwrap();
        assert!((surface(&a).unwrap().total - 877.76).abs() <= 0.05);
        let b = HouseParams::new(12.4, 20.5, 4.1, deg(35.0)).unwrap();
        assert!((surface(&b).unwrap().total - 633.93).abs() <= 0.05);
        // flat-roof limit: four unit walls plus a unit roof
        let flat = HouseParams::new(1.0, 1.0, 1.0, 1e-12).unwrap();
        assert_relative_eq!(surface(&flat).unwrap().total, 5.0, max_relative = 1e-10);
    }

    #[test]
    fn breakdown_components_sum_to_total() {
        let p = HouseParams::new(7.3, 11.2, 2.9, deg(42.0)).unwrap();
        let b = surface(&p).unwrap();
        let sum = b.walls_long + b.walls_short + b.roof + b.gables;
        assert_relative_eq!(sum, b.total, max_relative = 1e-12);
        assert!(b.walls_long >= 0.0 && b.walls_short >= 0.0 && b.roof >= 0.0 && b.gables >= 0.0);
    }

    #[test]
    fn ratio_examples() {
        let s = ratios_from_params(&HouseParams::new(2.0, 3.0, 1.0, deg(30.0)).unwrap()).unwrap();
        assert_eq!((s.r, s.k), (1.5, 0.5));
        let s = ratios_from_params(&HouseParams::new(19.9, 15.75, 5.0, deg(35.0)).unwrap()).unwrap();
        assert!((s.r - 0.7915).abs() < 5e-5);
        assert!((s.k - 0.2513).abs() < 5e-5);
        let s = ratios_from_params(&HouseParams::new(1.0, 1.0, 1.0, deg(45.0)).unwrap()).unwrap();
        assert_eq!((s.r, s.k), (1.0, 1.0));
    }

    #[test]
    fn params_from_ratios_examples() {
        let p = params_from_ratios(&ShapeRatios::new(1.0, 1.0, deg(20.0)).unwrap(), 27.0).unwrap();
        assert_relative_eq!(p.width, 3.0, max_relative = 1e-14);
        assert_relative_eq!(p.length, 3.0, max_relative = 1e-14);
        assert_relative_eq!(p.height, 3.0, max_relative = 1e-14);

        let p = params_from_ratios(&ShapeRatios::new(1.3660, 0.7887, deg(30.0)).unwrap(), 300.0)
            .unwrap();
        assert!((p.width - 6.5301).abs() < 5e-4);
        assert!((p.length - 8.9203).abs() < 5e-4);
        assert!((p.height - 5.1501).abs() < 5e-4);
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&ShapeRatios::new(1.0, 0.5, 1e-12).unwrap()).unwrap();
        assert!((g - 4.7622).abs() < 5e-5);
        let g = gamma(&ShapeRatios::new(1.3660, 0.7887, deg(30.0)).unwrap()).unwrap();
        assert!((300f64.powf(2.0 / 3.0) * g - 238.7161).abs() < 5e-4);
        assert!((g - 238.7161 / 300f64.powf(2.0 / 3.0)).abs() < 5e-6);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            HouseParams::new(0.0, 1.0, 1.0, 0.3),
            Err(BarnError::InvalidParameter { name: "W", .. })
        ));
        assert!(matches!(
            HouseParams::new(1.0, -1.0, 1.0, 0.3),
            Err(BarnError::InvalidParameter { name: "L", .. })
        ));
        assert!(matches!(
            HouseParams::new(1.0, 1.0, f64::NAN, 0.3),
            Err(BarnError::InvalidParameter { name: "H", .. })
        ));
        assert!(matches!(
            HouseParams::new(1.0, 1.0, 1.0, FRAC_PI_2),
            Err(BarnError::OutOfDomain { name: "alpha", .. })
        ));
        assert!(HouseParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(params_from_ratios(&ShapeRatios { r: 1.0, k: 1.0, alpha: 0.3 }, 0.0).is_err());
        // fields are public, so operations re-validate
        let bogus = HouseParams { width: -2.0, length: 1.0, height: 1.0, alpha: 0.3 };
        assert!(volume(&bogus).is_err());
        assert!(surface(&bogus).is_err());
    }

    #[test]
    fn solver_domain_is_half_degree_clamped() {
        assert!(check_solver_slope(deg(0.5)).is_ok());
        assert!(check_solver_slope(deg(89.5)).is_ok());
        assert!(check_solver_slope(deg(0.4)).is_err());
        assert!(check_solver_slope(deg(89.9)).is_err());
        assert!(check_solver_slope(deg(90.0)).is_err());
    }
}
