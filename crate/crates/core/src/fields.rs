//! Sampled fields and curves over the design space, for plotting and the
//! explorer UI. Every node value comes from the geometry, compactness and
//! optimizer modules; nothing is re-derived here.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::compactness::ratio_of_shape;
use crate::error::{positive, BarnError, Result};
use crate::geometry::{check_solver_slope, gamma, ShapeRatios};
use crate::optimize_floor::{optimize_fixed_floor, surface_of_width};
use crate::optimize_volume::{alpha_sweep, optimize_fixed_volume};

pub const MIN_FIELD_RESOLUTION: usize = 16;
pub const MAX_FIELD_RESOLUTION: usize = 4096;
/// Default number of intervals per axis.
pub const DEFAULT_FIELD_RESOLUTION: usize = 128;
/// Default `r` and `k` range for design-space fields.
pub const DEFAULT_RATIO_RANGE: AxisRange = AxisRange { min: 0.2, max: 4.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
}

impl AxisRange {
    pub fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    fn check(&self, name: &'static str) -> Result<()> {
        positive(name, self.min)?;
        positive(name, self.max)?;
        if self.max <= self.min {
            return Err(BarnError::InvalidParameter {
                name,
                value: self.max,
                reason: "range maximum must exceed its minimum",
            });
        }
        Ok(())
    }

    /// `intervals + 1` evenly spaced nodes. Node `i` is computed from the
    /// fraction `i / intervals`, so doubling `intervals` reproduces every
    /// existing node bit for bit.
    pub fn nodes(&self, intervals: usize) -> Vec<f64> {
        (0..=intervals)
            .map(|i| {
                let t = i as f64 / intervals as f64;
                self.min + (self.max - self.min) * t
            })
            .collect()
    }

    fn contains(&self, x: f64) -> bool {
        (self.min..=self.max).contains(&x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Axis {
    fn new(name: &str, unit: &str, values: Vec<f64>) -> Self {
        Self {
            name: name.to_owned(),
            unit: unit.to_owned(),
            values,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Marker {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// Row-major samples: `values[i][j]` sits at `(x.values[j], y.values[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField2D {
    pub x: Axis,
    pub y: Axis,
    pub values: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub marker: Option<Marker>,
}

impl ScalarField2D {
    /// Smallest sampled value.
    pub fn min_value(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_resolution(resolution: usize) -> Result<()> {
    if !(MIN_FIELD_RESOLUTION..=MAX_FIELD_RESOLUTION).contains(&resolution) {
        return Err(BarnError::OutOfDomain {
            name: "resolution",
            value: resolution as f64,
            min: MIN_FIELD_RESOLUTION as f64,
            max: MAX_FIELD_RESOLUTION as f64,
        });
    }
    Ok(())
}

/// Axis nodes and row-major samples.
type Sampled = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

fn sample_ratio_field<F>(
    alpha: f64,
    r_range: AxisRange,
    k_range: AxisRange,
    resolution: usize,
    value: F,
) -> Result<Sampled>
where
    F: Fn(&ShapeRatios) -> Result<f64>,
{
    check_solver_slope(alpha)?;
    r_range.check("r")?;
    k_range.check("k")?;
    check_resolution(resolution)?;
    let rs = r_range.nodes(resolution);
    let ks = k_range.nodes(resolution);
    let values = ks
        .iter()
        .map(|&k| {
            rs.iter()
                .map(|&r| value(&ShapeRatios { r, k, alpha }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((rs, ks, values))
}

/// Envelope `S(r, k)` at fixed volume, marked at the closed-form optimum.
pub fn surface_field(
    volume: f64,
    alpha: f64,
    r_range: AxisRange,
    k_range: AxisRange,
    resolution: usize,
) -> Result<ScalarField2D> {
    positive("V", volume)?;
    let scale = volume.powf(2.0 / 3.0);
    let (rs, ks, values) =
        sample_ratio_field(alpha, r_range, k_range, resolution, |s| Ok(scale * gamma(s)?))?;
    let optimum = optimize_fixed_volume(volume, alpha)?;
    let marker = (r_range.contains(optimum.r_min) && k_range.contains(optimum.k_min)).then_some(
        Marker {
            x: optimum.r_min,
            y: optimum.k_min,
            value: optimum.surface_min,
        },
    );
    Ok(ScalarField2D {
        x: Axis::new("r", "1", rs),
        y: Axis::new("k", "1", ks),
        values,
        marker,
    })
}

/// Compactness `S / S_min` over `(r, k)`; independent of volume.
pub fn compactness_field(
    alpha: f64,
    r_range: AxisRange,
    k_range: AxisRange,
    resolution: usize,
) -> Result<ScalarField2D> {
    let (rs, ks, values) = sample_ratio_field(alpha, r_range, k_range, resolution, ratio_of_shape)?;
    let optimum = optimize_fixed_volume(1.0, alpha)?;
    let marker = if r_range.contains(optimum.r_min) && k_range.contains(optimum.k_min) {
        Some(Marker {
            x: optimum.r_min,
            y: optimum.k_min,
            value: ratio_of_shape(&optimum.ratios())?,
        })
    } else {
        None
    };
    Ok(ScalarField2D {
        x: Axis::new("r", "1", rs),
        y: Axis::new("k", "1", ks),
        values,
        marker,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourLevel {
    pub level: f64,
    /// Each polyline is a list of `[r, k]` vertices; closed curves repeat
    /// their first vertex at the end.
    pub polylines: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourSet {
    pub alpha: f64,
    pub levels: Vec<f64>,
    pub contours: Vec<ContourLevel>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeKey {
    /// Between nodes (i, j) and (i, j + 1).
    Horizontal(usize, usize),
    /// Between nodes (i, j) and (i + 1, j).
    Vertical(usize, usize),
}

/// Marching squares with linear interpolation along cell edges. Saddle
/// cells are resolved with the mean of the four corners.
pub fn marching_squares(field: &ScalarField2D, level: f64) -> Vec<Vec<[f64; 2]>> {
    let xs = &field.x.values;
    let ys = &field.y.values;
    let v = &field.values;
    let (rows, cols) = (ys.len(), xs.len());
    if rows < 2 || cols < 2 {
        return Vec::new();
    }

    let point = |key: EdgeKey| -> [f64; 2] {
        let ((i0, j0), (i1, j1)) = match key {
            EdgeKey::Horizontal(i, j) => ((i, j), (i, j + 1)),
            EdgeKey::Vertical(i, j) => ((i, j), (i + 1, j)),
        };
        let (a, b) = (v[i0][j0], v[i1][j1]);
        let t = if b == a { 0.5 } else { (level - a) / (b - a) };
        [
            xs[j0] + t * (xs[j1] - xs[j0]),
            ys[i0] + t * (ys[i1] - ys[i0]),
        ]
    };

    let mut segments: Vec<(EdgeKey, EdgeKey)> = Vec::new();
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            let corners = [v[i][j], v[i][j + 1], v[i + 1][j + 1], v[i + 1][j]];
            let case = corners
                .iter()
                .enumerate()
                .fold(0u8, |acc, (n, &c)| acc | (u8::from(c >= level) << n));
            let bottom = EdgeKey::Horizontal(i, j);
            let right = EdgeKey::Vertical(i, j + 1);
            let top = EdgeKey::Horizontal(i + 1, j);
            let left = EdgeKey::Vertical(i, j);
            let centre_high = corners.iter().sum::<f64>() / 4.0 >= level;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                // corners 0 and 2 high
                5 => {
                    if centre_high {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                // corners 1 and 3 high
                10 => {
                    if centre_high {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }

    // each crossing edge is shared by at most two segments
    let mut adjacency: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (n, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(n);
        adjacency.entry(b).or_default().push(n);
    }

    let mut used = vec![false; segments.len()];
    let mut polylines = Vec::new();
    let walk = |start: EdgeKey, used: &mut Vec<bool>| -> Option<Vec<[f64; 2]>> {
        let mut keys = vec![start];
        let mut current = start;
        loop {
            let next_seg = adjacency[&current].iter().copied().find(|&s| !used[s]);
            let Some(seg) = next_seg else { break };
            used[seg] = true;
            let (a, b) = segments[seg];
            current = if a == current { b } else { a };
            keys.push(current);
        }
        (keys.len() > 1).then(|| keys.into_iter().map(point).collect())
    };

    // open chains start at the domain boundary, where an edge has one segment
    let ends: Vec<EdgeKey> = adjacency
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(k, _)| *k)
        .collect();
    for key in ends {
        if adjacency[&key].iter().all(|&s| used[s]) {
            continue;
        }
        if let Some(line) = walk(key, &mut used) {
            polylines.push(line);
        }
    }
    let starts: Vec<EdgeKey> = adjacency.keys().copied().collect();
    for key in starts {
        if adjacency[&key].iter().all(|&s| used[s]) {
            continue;
        }
        if let Some(line) = walk(key, &mut used) {
            polylines.push(line);
        }
    }
    polylines
}

/// Level curves of the compactness measure.
pub fn compactness_contours(
    alpha: f64,
    levels: &[f64],
    r_range: AxisRange,
    k_range: AxisRange,
    resolution: usize,
) -> Result<ContourSet> {
    for (n, &level) in levels.iter().enumerate() {
        if !level.is_finite() {
            return Err(BarnError::InvalidParameter {
                name: "levels",
                value: level,
                reason: "contour levels must be finite",
            });
        }
        if n > 0 && level <= levels[n - 1] {
            return Err(BarnError::InvalidParameter {
                name: "levels",
                value: level,
                reason: "contour levels must be strictly ascending",
            });
        }
    }
    let field = compactness_field(alpha, r_range, k_range, resolution)?;
    let contours = levels
        .iter()
        .map(|&level| ContourLevel {
            level,
            polylines: marching_squares(&field, level),
        })
        .collect();
    Ok(ContourSet {
        alpha,
        levels: levels.to_vec(),
        contours,
    })
}

/// Optimal dimensions as functions of the roof slope at fixed volume.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCurves {
    #[serde(rename = "V")]
    pub volume: f64,
    pub alpha_deg: Vec<f64>,
    #[serde(rename = "W_min")]
    pub width: Vec<f64>,
    #[serde(rename = "L_min")]
    pub length: Vec<f64>,
    #[serde(rename = "H_min")]
    pub height: Vec<f64>,
}

/// `samples` slopes evenly spaced over `[alpha_min, alpha_max]` (radians).
pub fn sweep_curves(volume: f64, alpha_min: f64, alpha_max: f64, samples: usize) -> Result<SweepCurves> {
    check_solver_slope(alpha_min)?;
    check_solver_slope(alpha_max)?;
    if samples < 2 {
        return Err(BarnError::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "a sweep needs at least two samples",
        });
    }
    if alpha_max <= alpha_min {
        return Err(BarnError::InvalidParameter {
            name: "alpha_max",
            value: alpha_max,
            reason: "sweep end must exceed its start",
        });
    }
    let alphas = AxisRange::new(alpha_min, alpha_max).nodes(samples - 1);
    let optima = alpha_sweep(volume, &alphas)?;
    Ok(SweepCurves {
        volume,
        alpha_deg: optima.iter().map(|o| o.alpha_deg).collect(),
        width: optima.iter().map(|o| o.width).collect(),
        length: optima.iter().map(|o| o.length).collect(),
        height: optima.iter().map(|o| o.height).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve1D {
    pub x: Axis,
    pub y_name: String,
    pub y_unit: String,
    pub values: Vec<f64>,
    pub marker: Marker,
}

/// `S(W)` at fixed floor area, marked at the cubic's root. Without an
/// explicit range the curve spans `[0.25, 3] · W_min`.
pub fn floor_curve(
    floor: f64,
    height: f64,
    alpha: f64,
    w_range: Option<AxisRange>,
    samples: usize,
) -> Result<Curve1D> {
    let optimum = optimize_fixed_floor(floor, height, alpha)?;
    let range =
        w_range.unwrap_or_else(|| AxisRange::new(0.25 * optimum.width, 3.0 * optimum.width));
    range.check("W")?;
    if samples < 2 {
        return Err(BarnError::InvalidParameter {
            name: "samples",
            value: samples as f64,
            reason: "a curve needs at least two samples",
        });
    }
    let ws = range.nodes(samples - 1);
    let values = ws
        .iter()
        .map(|&w| surface_of_width(w, floor, height, alpha))
        .collect::<Result<Vec<_>>>()?;
    Ok(Curve1D {
        x: Axis::new("W", "m", ws),
        y_name: "S".to_owned(),
        y_unit: "m^2".to_owned(),
        values,
        marker: Marker {
            x: optimum.width,
            y: optimum.surface_min,
            value: optimum.surface_min,
        },
    })
}
