//! Shared serializers. The CLI and the HTTP service both go through these,
//! so equal inputs give byte-identical output.
//!
//! JSON objects have sorted keys and floats use the shortest representation
//! that round-trips.

use std::fmt::Write as _;

use serde::Serialize;

use crate::fields::{ContourSet, Curve1D, ScalarField2D, SweepCurves};

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    // round-tripping through Value sorts object keys (BTreeMap-backed maps)
    let tree = serde_json::to_value(value)?;
    let mut out = serde_json::to_string_pretty(&tree)?;
    out.push('\n');
    Ok(out)
}

/// Header row `k/r,<r nodes...>`, then one row per `k` node prefixed by its value.
pub fn field_to_csv(field: &ScalarField2D) -> String {
    let mut out = format!("{}/{}", field.y.name, field.x.name);
    for x in &field.x.values {
        let _ = write!(out, ",{x}");
    }
    out.push('\n');
    for (y, row) in field.y.values.iter().zip(&field.values) {
        let _ = write!(out, "{y}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

pub fn sweep_to_csv(sweep: &SweepCurves) -> String {
    let mut out = String::from("alpha_deg,W_min,L_min,H_min\n");
    for i in 0..sweep.alpha_deg.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            sweep.alpha_deg[i], sweep.width[i], sweep.length[i], sweep.height[i]
        );
    }
    out
}

pub fn curve_to_csv(curve: &Curve1D) -> String {
    let mut out = format!("{},{}\n", curve.x.name, curve.y_name);
    for (x, y) in curve.x.values.iter().zip(&curve.values) {
        let _ = writeln!(out, "{x},{y}");
    }
    out
}

/// One vertex per row: `level,polyline,r,k`.
pub fn contours_to_csv(set: &ContourSet) -> String {
    let mut out = String::from("level,polyline,r,k\n");
    for c in &set.contours {
        for (n, line) in c.polylines.iter().enumerate() {
            for [x, y] in line {
                let _ = writeln!(out, "{},{n},{x},{y}", c.level);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{compactness_field, AxisRange};

    #[test]
    fn json_keys_sorted() {
        #[derive(Serialize)]
        struct T {
            zeta: f64,
            alpha: f64,
        }
        let s = to_json(&T { zeta: 0.1, alpha: 2.0 }).unwrap();
        assert!(s.find("alpha").unwrap() < s.find("zeta").unwrap());
        assert!(s.contains("0.1"));
        assert!(s.ends_with('\n'));
    }

    #[test]
    fn field_csv_shape() {
        let f = compactness_field(0.7, AxisRange::new(1.0, 2.0), AxisRange::new(0.5, 1.5), 16).unwrap();
        let csv = field_to_csv(&f);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 18);
        assert!(lines[0].starts_with("k/r,1,"));
        assert_eq!(lines[1].split(',').count(), 18);
    }
}
