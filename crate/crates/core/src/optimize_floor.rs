//! Envelope minimum at fixed floor area, wall height and roof slope.
//!
//! With `F = W·L` fixed, `S(W) = 2WH + 2FH/W + F/cos α + W² tan α / 2` and
//! `S'(W) = 0` becomes the cubic `tan α · W³ + 2H · W² − 2FH = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{positive, BarnError, Result};
use crate::geometry::{check_slope, check_solver_slope, surface, HouseParams};

/// Relative residual accepted from [`solve_cubic`].
pub const CUBIC_RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Which branch of the cubic solver produced the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RootMethod {
    /// Cardano's radicals, real discriminant.
    Cardano,
    /// Trigonometric form, used when the radicals go through complex values.
    Trigonometric,
    /// Bracketed bisection after both closed forms missed the residual target.
    Bisection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRoot {
    pub root: f64,
    pub method: RootMethod,
    /// `|f(x)| / (|a|x³ + |b|x² + |c|)`.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedFloorOptimum {
    #[serde(rename = "F")]
    pub floor: f64,
    #[serde(rename = "H")]
    pub height: f64,
    pub alpha: f64,
    pub alpha_deg: f64,
    #[serde(rename = "W_min")]
    pub width: f64,
    #[serde(rename = "L_min")]
    pub length: f64,
    #[serde(rename = "S_min")]
    pub surface_min: f64,
    pub cubic_residual: f64,
    pub root_method: RootMethod,
    /// Whether `H < tan α · sqrt(27F/16)`. Diagnostic only; the positive
    /// root is unique either way.
    pub uniqueness_condition: bool,
}

impl FixedFloorOptimum {
    pub fn params(&self) -> HouseParams {
        HouseParams {
            width: self.width,
            length: self.length,
            height: self.height,
            alpha: self.alpha,
        }
    }
}

fn cubic(a: f64, b: f64, c: f64, x: f64) -> f64 {
    (a * x + b) * x * x + c
}

fn relative_residual(a: f64, b: f64, c: f64, x: f64) -> f64 {
    let scale = a.abs() * x.powi(3) + b.abs() * x * x + c.abs();
    cubic(a, b, c, x).abs() / scale
}

/// Cardano's formula for the real root of `a x³ + b x² + c = 0`.
/// `None` when the square root argument is negative.
fn cardano(a: f64, b: f64, c: f64) -> Option<f64> {
    let disc = 4.0 * a * a * b.powi(3) * c + 27.0 * a.powi(4) * c * c;
    if disc.is_nan() || disc < 0.0 {
        return None;
    }
    let inner = (-2.0 * b.powi(3) - 27.0 * a * a * c + 3.0 * 3f64.sqrt() * disc.sqrt()).cbrt();
    if inner == 0.0 || !inner.is_finite() {
        return None;
    }
    let cbrt2 = 2f64.cbrt();
    let x = -b / (3.0 * a) + cbrt2 * b * b / (3.0 * a * inner) + inner / (3.0 * a * cbrt2);
    x.is_finite().then_some(x)
}

/// Largest real root via the trigonometric form of the depressed cubic
/// (three real roots case).
fn trigonometric(a: f64, b: f64, c: f64) -> Option<f64> {
    // x = t - b/(3a) turns a x³ + b x² + c into t³ + p t + q
    let p = -b * b / (3.0 * a * a);
    let q = (2.0 * b.powi(3) + 27.0 * a * a * c) / (27.0 * a.powi(3));
    if p >= 0.0 {
        return None;
    }
    let m = 2.0 * (-p / 3.0).sqrt();
    let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
    let t = m * (arg.acos() / 3.0).cos();
    let x = t - b / (3.0 * a);
    x.is_finite().then_some(x)
}

fn newton_polish(a: f64, b: f64, c: f64, mut x: f64) -> f64 {
    let mut best = x;
    let mut best_res = relative_residual(a, b, c, x);
    for _ in 0..3 {
        let slope = (3.0 * a * x + 2.0 * b) * x;
        if slope == 0.0 {
            break;
        }
        x -= cubic(a, b, c, x) / slope;
        let res = relative_residual(a, b, c, x);
        if res.is_nan() || res >= best_res {
            break;
        }
        best = x;
        best_res = res;
    }
    best
}

fn bisect(a: f64, b: f64, c: f64) -> f64 {
    // f(0) = c < 0 and both bounds below make f positive
    let mut lo = 0.0;
    let mut hi = (-c / a).cbrt().min((-c / b).sqrt()) * (1.0 + 1e-12);
    while cubic(a, b, c, hi) <= 0.0 {
        hi *= 2.0;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cubic(a, b, c, mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if relative_residual(a, b, c, lo) <= relative_residual(a, b, c, hi) {
        lo
    } else {
        hi
    }
}

/// Unique positive root of `a x³ + b x² + c = 0` with `a > 0`, `b > 0`, `c < 0`,
/// along with the branch that produced it.
pub fn solve_cubic(a: f64, b: f64, c: f64) -> Result<CubicRoot> {
    let valid = a.is_finite() && b.is_finite() && c.is_finite();
    if !(valid && a > 0.0 && b > 0.0 && c < 0.0) {
        return Err(BarnError::Precondition(format!(
            "cubic needs a > 0, b > 0, c < 0 (got a = {a}, b = {b}, c = {c})"
        )));
    }

    let (candidate, method) = match cardano(a, b, c) {
        Some(x) => (Some(x), RootMethod::Cardano),
        None => (trigonometric(a, b, c), RootMethod::Trigonometric),
    };
    if let Some(x) = candidate.filter(|x| *x > 0.0) {
        let root = newton_polish(a, b, c, x);
        let residual = relative_residual(a, b, c, root);
        if root > 0.0 && residual <= CUBIC_RESIDUAL_TOLERANCE {
            return Ok(CubicRoot {
                root,
                method,
                residual,
            });
        }
    }

    let root = bisect(a, b, c);
    let residual = relative_residual(a, b, c, root);
    if residual > CUBIC_RESIDUAL_TOLERANCE {
        return Err(BarnError::SolverFailure(format!(
            "cubic residual {residual:e} above tolerance for a = {a}, b = {b}, c = {c}"
        )));
    }
    Ok(CubicRoot {
        root,
        method: RootMethod::Bisection,
        residual,
    })
}

/// Unique positive root of `a x³ + b x² + c = 0` with `a > 0`, `b > 0`, `c < 0`.
pub fn solve_depressed_cubic(a: f64, b: f64, c: f64) -> Result<f64> {
    solve_cubic(a, b, c).map(|r| r.root)
}

/// Envelope of the design with width `W` and length `F / W`.
pub fn surface_of_width(width: f64, floor: f64, height: f64, alpha: f64) -> Result<f64> {
    positive("W", width)?;
    positive("F", floor)?;
    Ok(surface(&HouseParams::new(width, floor / width, height, alpha)?)?.total)
}

/// `dS/dW = 2H − 2FH/W² + W tan α`.
pub fn surface_of_width_derivative(width: f64, floor: f64, height: f64, alpha: f64) -> Result<f64> {
    positive("W", width)?;
    positive("F", floor)?;
    positive("H", height)?;
    check_slope(alpha)?;
    Ok(2.0 * height - 2.0 * floor * height / (width * width) + width * alpha.tan())
}

/// `H < tan α · sqrt(27F/16)`.
pub fn uniqueness_condition(floor: f64, height: f64, alpha: f64) -> bool {
    height < alpha.tan() * (27.0 * floor / 16.0).sqrt()
}

pub fn optimize_fixed_floor(floor: f64, height: f64, alpha: f64) -> Result<FixedFloorOptimum> {
    positive("F", floor)?;
    positive("H", height)?;
    check_solver_slope(alpha)?;

    let a = alpha.tan();
    let b = 2.0 * height;
    let c = -2.0 * floor * height;
    let root = solve_cubic(a, b, c)?;
    let width = root.root;
    let length = floor / width;
    let surface_min = surface(&HouseParams::new(width, length, height, alpha)?)?.total;

    // derivative changes sign from negative to positive across the root
    let delta = 1e-3 * width;
    let left = surface_of_width_derivative(width - delta, floor, height, alpha)?;
    let right = surface_of_width_derivative(width + delta, floor, height, alpha)?;
    if !(left < 0.0 && right > 0.0) {
        return Err(BarnError::SolverFailure(format!(
            "W = {width} is not a minimizer (S' = {left} / {right})"
        )));
    }

    Ok(FixedFloorOptimum {
        floor,
        height,
        alpha,
        alpha_deg: alpha.to_degrees(),
        width,
        length,
        surface_min,
        cubic_residual: root.residual,
        root_method: root.method,
        uniqueness_condition: uniqueness_condition(floor, height, alpha),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn constructed_root() {
        let r = solve_cubic(1.0, 1.0, -2.0).unwrap();
        assert_relative_eq!(r.root, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn worked_example_coefficients() {
        let x = solve_depressed_cubic(deg(30.0).tan(), 6.0, -600.0).unwrap();
        // companion-matrix eigenvalue of the same cubic: 7.599984774510...
        assert!((x - 7.599_984_774_51).abs() < 1e-9, "{x}");
        assert!((x - 7.60).abs() <= 0.005);
    }

    #[test]
    fn casus_irreducibilis_uses_trigonometric_branch() {
        // tall walls on a small floor with a shallow roof: condition fails
        let (f, h, alpha) = (20.0, 10.0, deg(5.0));
        assert!(!uniqueness_condition(f, h, alpha));
        let r = solve_cubic(alpha.tan(), 2.0 * h, -2.0 * f * h).unwrap();
        assert_eq!(r.method, RootMethod::Trigonometric);
        assert!(r.root > 0.0 && r.residual <= CUBIC_RESIDUAL_TOLERANCE);
        let o = optimize_fixed_floor(f, h, alpha).unwrap();
        assert!(!o.uniqueness_condition);
        assert_relative_eq!(o.width, r.root);
    }

    #[test]
    fn cardano_branch_when_condition_holds() {
        let r = solve_cubic(deg(30.0).tan(), 6.0, -600.0).unwrap();
        assert_eq!(r.method, RootMethod::Cardano);
        assert!(uniqueness_condition(100.0, 3.0, deg(30.0)));
    }

    #[test]
    fn precondition_violations() {
        for (a, b, c) in [(0.0, 1.0, -1.0), (1.0, 0.0, -1.0), (1.0, 1.0, 0.0), (-1.0, 1.0, -1.0)] {
            assert!(matches!(solve_cubic(a, b, c), Err(BarnError::Precondition(_))));
        }
        assert!(solve_cubic(f64::NAN, 1.0, -1.0).is_err());
    }

    #[test]
    fn floor_worked_example() {
        let o = optimize_fixed_floor(100.0, 3.0, deg(30.0)).unwrap();
        assert!((o.width - 7.60).abs() <= 0.005);
        assert!((o.length - 13.16).abs() <= 0.005);
        assert!((o.surface_min - 256.69).abs() <= 0.05);
        let s = surface_of_width(7.60, 100.0, 3.0, deg(30.0)).unwrap();
        assert!((s - 256.69).abs() <= 0.05);
    }

    #[test]
    fn table_rows() {
        let a = optimize_fixed_floor(313.42, 5.0, deg(35.0)).unwrap();
        assert!((a.width - 12.84).abs() <= 0.05);
        assert!((a.length - 24.39).abs() <= 0.05);
        assert!((a.surface_min - 812.84).abs() <= 0.05);

        let c = optimize_fixed_floor(108.0, 5.8, deg(40.0)).unwrap();
        assert!((c.width - 8.23).abs() <= 0.05);
        assert!((c.length - 13.12).abs() <= 0.05);
        assert!((c.surface_min - 417.09).abs() <= 0.05);
        let actual = surface(&HouseParams::from_degrees(8.0, 13.5, 5.8, 40.0).unwrap())
            .unwrap()
            .total;
        assert!((actual / c.surface_min - 1.0003).abs() <= 5e-4);
    }

    #[test]
    fn flat_roof_limit_is_roof_only() {
        let s = surface_of_width(10.0, 100.0, 1e-12, 1e-12).unwrap();
        assert_relative_eq!(s, 100.0, max_relative = 1e-9);
    }

    #[test]
    fn matches_expanded_formula() {
        let (w, f, h, al) = (6.3, 88.0, 2.7, deg(33.0));
        let expanded = 2.0 * w * h + 2.0 * f * h / w + f / al.cos() + w * w * al.tan() / 2.0;
        assert_relative_eq!(surface_of_width(w, f, h, al).unwrap(), expanded, max_relative = 1e-12);
    }

    #[test]
    fn optimum_invariants() {
        let o = optimize_fixed_floor(254.2, 4.1, deg(35.0)).unwrap();
        assert_relative_eq!(o.width * o.length, 254.2, max_relative = 1e-10);
        assert!(o.cubic_residual <= 1e-10);
        assert_relative_eq!(
            o.surface_min,
            surface(&o.params()).unwrap().total,
            max_relative = 1e-10
        );
        let d = 1e-3 * o.width;
        let s = |w: f64| surface_of_width(w, 254.2, 4.1, deg(35.0)).unwrap();
        assert!(s(o.width - d) > o.surface_min && s(o.width + d) > o.surface_min);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            optimize_fixed_floor(100.0, 3.0, deg(90.0)),
            Err(BarnError::OutOfDomain { name: "alpha", .. })
        ));
        assert!(matches!(
            optimize_fixed_floor(-1.0, 3.0, deg(30.0)),
            Err(BarnError::InvalidParameter { name: "F", .. })
        ));
        assert!(matches!(
            optimize_fixed_floor(100.0, 0.0, deg(30.0)),
            Err(BarnError::InvalidParameter { name: "H", .. })
        ));
        assert!(surface_of_width(0.0, 1.0, 1.0, 0.5).is_err());
    }
}
