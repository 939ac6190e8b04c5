//! Derivative-free reference minimizers used to check the closed forms.
//!
//! Both problems are solved by exhaustive evaluation on a log-spaced grid
//! followed by local refinement: a 2-D Nelder-Mead simplex for `gamma(r, k)`
//! and golden-section search for `S(W)`. Nothing here calls the closed-form
//! solvers.

use serde::{Deserialize, Serialize};

use crate::error::{positive, BarnError, Result};
use crate::geometry::{check_solver_slope, gamma_unchecked};

pub const MIN_RESOLUTION: usize = 64;
/// Relative simplex diameter / bracket width at which refinement stops.
pub const SIMPLEX_TOLERANCE: f64 = 1e-9;
pub const BRACKET_TOLERANCE: f64 = 1e-10;
pub const MAX_SIMPLEX_ITERATIONS: usize = 500;
const MAX_GOLDEN_ITERATIONS: usize = 500;

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Lower bound per axis.
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Samples per axis, log-spaced.
    pub resolution: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    /// `[r, k]` for the fixed-volume problem, `[W]` for the fixed-floor one.
    pub argmin: Vec<f64>,
    pub min_value: f64,
    /// Best value seen on the grid before refinement.
    pub grid_min_value: f64,
    pub grid_spec: GridSpec,
    pub refinement_iterations: usize,
    pub converged: bool,
}

fn check_bounds(name: &'static str, (lo, hi): (f64, f64)) -> Result<()> {
    positive(name, lo)?;
    positive(name, hi)?;
    if lo >= hi {
        return Err(BarnError::InvalidParameter {
            name,
            value: hi,
            reason: "upper bound must exceed lower bound",
        });
    }
    Ok(())
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < MIN_RESOLUTION {
        return Err(BarnError::InvalidParameter {
            name: "resolution",
            value: resolution as f64,
            reason: "oracle grids need at least 64 samples per axis",
        });
    }
    Ok(())
}

/// `n` log-spaced samples covering `[lo, hi]`, endpoints included.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| match i {
            0 => lo,
            _ if i == n - 1 => hi,
            _ => (a + (b - a) * (i as f64) / ((n - 1) as f64)).exp(),
        })
        .collect()
}

/// Nelder-Mead on a 2-D objective. Returns (best point, best value, iterations, converged).
fn nelder_mead_2d<F>(f: F, start: [f64; 2], step: [f64; 2]) -> ([f64; 2], f64, usize, bool)
where
    F: Fn([f64; 2]) -> f64,
{
    let mut simplex = [
        start,
        [start[0] + step[0], start[1]],
        [start[0], start[1] + step[1]],
    ];
    let mut values = simplex.map(&f);

    let lerp = |from: [f64; 2], to: [f64; 2], t: f64| {
        [from[0] + t * (to[0] - from[0]), from[1] + t * (to[1] - from[1])]
    };

    for iteration in 0..MAX_SIMPLEX_ITERATIONS {
        // stable ordering keeps the run deterministic under ties
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
        simplex = order.map(|i| simplex[i]);
        values = order.map(|i| values[i]);

        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| [(v[0] - simplex[0][0]).abs(), (v[1] - simplex[0][1]).abs()])
            .fold(0.0_f64, f64::max);
        if diameter < SIMPLEX_TOLERANCE {
            return (simplex[0], values[0], iteration, true);
        }

        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let worst = simplex[2];
        let reflected = lerp(centroid, worst, -REFLECTION);
        let f_reflected = f(reflected);

        if f_reflected < values[0] {
            let expanded = lerp(centroid, worst, -REFLECTION * EXPANSION);
            let f_expanded = f(expanded);
            if f_expanded < f_reflected {
                simplex[2] = expanded;
                values[2] = f_expanded;
            } else {
                simplex[2] = reflected;
                values[2] = f_reflected;
            }
            continue;
        }
        if f_reflected < values[1] {
            simplex[2] = reflected;
            values[2] = f_reflected;
            continue;
        }

        let (candidate, f_candidate, accept) = if f_reflected < values[2] {
            let outside = lerp(centroid, reflected, CONTRACTION);
            let fo = f(outside);
            (outside, fo, fo <= f_reflected)
        } else {
            let inside = lerp(centroid, worst, CONTRACTION);
            let fi = f(inside);
            (inside, fi, fi < values[2])
        };
        if accept {
            simplex[2] = candidate;
            values[2] = f_candidate;
            continue;
        }

        for i in 1..3 {
            simplex[i] = lerp(simplex[0], simplex[i], SHRINK);
            values[i] = f(simplex[i]);
        }
    }

    let best = (0..3)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)))
        .unwrap_or(0);
    (simplex[best], values[best], MAX_SIMPLEX_ITERATIONS, false)
}

/// Grid search plus simplex refinement of the shape factor `gamma(r, k)`.
pub fn brute_force_gamma_min(
    alpha: f64,
    r_bounds: (f64, f64),
    k_bounds: (f64, f64),
    resolution: usize,
) -> Result<OracleResult> {
    check_solver_slope(alpha)?;
    check_bounds("r", r_bounds)?;
    check_bounds("k", k_bounds)?;
    check_resolution(resolution)?;

    let rs = log_space(r_bounds.0, r_bounds.1, resolution);
    let ks = log_space(k_bounds.0, k_bounds.1, resolution);

    // row-major scan: strict improvement keeps the lowest r, then lowest k, on ties
    let mut best = (0, 0, f64::INFINITY);
    for (i, &r) in rs.iter().enumerate() {
        for (j, &k) in ks.iter().enumerate() {
            let g = gamma_unchecked(r, k, alpha);
            if g < best.2 {
                best = (i, j, g);
            }
        }
    }
    let (i, j, grid_min) = best;

    let step = [
        (r_bounds.1 / r_bounds.0).ln() / (resolution - 1) as f64,
        (k_bounds.1 / k_bounds.0).ln() / (resolution - 1) as f64,
    ];
    let objective = |u: [f64; 2]| gamma_unchecked(u[0].exp(), u[1].exp(), alpha);
    let (point, value, iterations, converged) =
        nelder_mead_2d(objective, [rs[i].ln(), ks[j].ln()], step);

    // refinement only ever moves downhill from the grid point
    let (argmin, min_value) = if value <= grid_min {
        (vec![point[0].exp(), point[1].exp()], value)
    } else {
        (vec![rs[i], ks[j]], grid_min)
    };

    Ok(OracleResult {
        argmin,
        min_value,
        grid_min_value: grid_min,
        grid_spec: GridSpec {
            lower: vec![r_bounds.0, k_bounds.0],
            upper: vec![r_bounds.1, k_bounds.1],
            resolution,
        },
        refinement_iterations: iterations,
        converged,
    })
}

fn floor_surface(width: f64, floor: f64, height: f64, alpha: f64) -> f64 {
    2.0 * width * height
        + 2.0 * floor * height / width
        + floor / alpha.cos()
        + width * width * alpha.tan() / 2.0
}

/// Grid search plus golden-section refinement of `S(W)` at fixed floor area.
pub fn brute_force_floor_min(
    floor: f64,
    height: f64,
    alpha: f64,
    w_bounds: (f64, f64),
    resolution: usize,
) -> Result<OracleResult> {
    positive("F", floor)?;
    positive("H", height)?;
    check_solver_slope(alpha)?;
    check_bounds("W", w_bounds)?;
    check_resolution(resolution)?;

    let ws = log_space(w_bounds.0, w_bounds.1, resolution);
    let s = |w: f64| floor_surface(w, floor, height, alpha);
    let mut best = (0, f64::INFINITY);
    for (i, &w) in ws.iter().enumerate() {
        let v = s(w);
        if v < best.1 {
            best = (i, v);
        }
    }
    let (i, grid_min) = best;

    let mut lo = ws[i.saturating_sub(1)];
    let mut hi = ws[(i + 1).min(resolution - 1)];
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (s(x1), s(x2));
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_GOLDEN_ITERATIONS {
        if (hi - lo) / (0.5 * (hi + lo)) < BRACKET_TOLERANCE {
            converged = true;
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = s(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = s(x2);
        }
        iterations += 1;
    }
    let mid = 0.5 * (lo + hi);
    let f_mid = s(mid);
    let (argmin, min_value) = if f_mid <= grid_min {
        (mid, f_mid)
    } else {
        (ws[i], grid_min)
    };

    Ok(OracleResult {
        argmin: vec![argmin],
        min_value,
        grid_min_value: grid_min,
        grid_spec: GridSpec {
            lower: vec![w_bounds.0],
            upper: vec![w_bounds.1],
            resolution,
        },
        refinement_iterations: iterations,
        converged,
    })
}

/// Default search interval for `W` at fixed floor area: `[1e-3, 10] · sqrt(F)`.
/// The minimizer always lies below `sqrt(F)`.
pub fn default_width_bounds(floor: f64) -> (f64, f64) {
    let side = floor.sqrt();
    (1e-3 * side, 10.0 * side)
}

/// True when the sequence decreases then increases (at most one sign change
/// of its forward differences, from negative to positive).
pub fn is_unimodal(samples: &[f64]) -> bool {
    let mut rising = false;
    for pair in samples.windows(2) {
        let d = pair[1] - pair[0];
        if d > 0.0 {
            rising = true;
        } else if d < 0.0 && rising {
            return false;
        }
    }
    true
}
