use std::fmt::Write as _;

use barn_core::fields::{ContourSet, ScalarField2D};
use barn_core::verify::VerificationReport;
use barn_core::{Assessment, CaseStudyRow, FixedFloorOptimum, FixedVolumeOptimum};
use serde::Serialize;
use serde_json::Value;

use crate::CliError;

/// Degrees as typed, without radian round-trip noise.
fn deg(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

fn lines(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("  {k:<width$}  {v}\n")).collect()
}

pub fn volume_text(o: &FixedVolumeOptimum) -> String {
    format!(
        "Fixed volume V = {} m^3, alpha = {}°\n{}",
        o.volume,
        deg(o.alpha_deg),
        lines(&[
            ("r = L/W", format!("{:.4}", o.r_min)),
            ("k = H/W", format!("{:.4}", o.k_min)),
            ("W_min", format!("{:.4} m", o.width)),
            ("L_min", format!("{:.4} m", o.length)),
            ("H_min", format!("{:.4} m", o.height)),
            ("S_min", format!("{:.4} m^2", o.surface_min)),
        ])
    )
}

pub fn floor_text(o: &FixedFloorOptimum) -> String {
    format!(
        "Fixed floor F = {} m^2, H = {} m, alpha = {}°\n{}",
        o.floor,
        o.height,
        deg(o.alpha_deg),
        lines(&[
            ("W_min", format!("{:.4} m", o.width)),
            ("L_min", format!("{:.4} m", o.length)),
            ("S_min", format!("{:.4} m^2", o.surface_min)),
            ("cubic residual", format!("{:.1e}", o.cubic_residual)),
        ])
    )
}

pub fn assess_text(a: &Assessment) -> String {
    let d = &a.design;
    let v = &a.fixed_volume;
    let f = &a.fixed_floor;
    format!(
        "Design W = {} m, L = {} m, H = {} m, alpha = {}°\n{}\nAt fixed volume\n{}\nAt fixed floor area and height\n{}",
        d.width,
        d.length,
        d.height,
        deg(d.alpha.to_degrees()),
        lines(&[
            ("V", format!("{:.2} m^3", v.volume)),
            ("F", format!("{:.2} m^2", d.floor_area())),
            ("S", format!("{:.2} m^2", v.surface)),
        ]),
        lines(&[
            ("W_min, L_min, H_min", format!("{:.2}, {:.2}, {:.2} m", v.optimum.width, v.optimum.length, v.optimum.height)),
            ("S_min", format!("{:.2} m^2", v.surface_min)),
            ("S/S_min", format!("{:.4}", v.ratio)),
            ("S-S_min", format!("{:.2} m^2", v.headroom)),
        ]),
        lines(&[
            ("W_min, L_min", format!("{:.2}, {:.2} m", f.optimum.width, f.optimum.length)),
            ("S_min", format!("{:.2} m^2", f.optimum.surface_min)),
            ("S/S_min", format!("{:.4}", f.ratio)),
            ("S-S_min", format!("{:.2} m^2", f.headroom)),
        ]),
    )
}

/// Left-aligned first column, right-aligned rest.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let render = |cells: Vec<String>| {
        let mut line = String::new();
        for (n, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if n == 0 {
                let _ = write!(line, "{cell:<w$}");
            } else {
                let _ = write!(line, "  {cell:>w$}");
            }
        }
        line.trim_end().to_owned() + "\n"
    };
    let mut out = render(header.iter().map(|h| h.to_string()).collect());
    for row in rows {
        out += &render(row.clone());
    }
    out
}

pub fn audit_text(rows: &[CaseStudyRow]) -> String {
    let volume: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let m = &r.volume_mode;
            vec![
                r.name.clone(),
                format!("{:.2}", r.volume),
                format!("{:.2}", r.surface),
                format!("{:.2}", m.width),
                format!("{:.2}", m.length),
                format!("{:.2}", m.height),
                format!("{:.2}", m.surface_min),
                format!("{:.4}", m.ratio),
                format!("{:.2}", m.headroom),
            ]
        })
        .collect();
    let floor: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let m = &r.floor_mode;
            vec![
                r.name.clone(),
                format!("{:.2}", r.floor),
                format!("{:.2}", r.height),
                format!("{:.2}", r.surface),
                format!("{:.2}", m.width),
                format!("{:.2}", m.length),
                format!("{:.2}", m.surface_min),
                format!("{:.4}", m.ratio),
                format!("{:.2}", m.headroom),
            ]
        })
        .collect();
    format!(
        "Fixed volume and roof slope\n{}\nFixed floor area, wall height and roof slope\n{}",
        table(&["name", "V", "S", "W_min", "L_min", "H_min", "S_min", "S/S_min", "S-S_min"], &volume),
        table(&["name", "F", "H", "S", "W_min", "L_min", "S_min", "S/S_min", "S-S_min"], &floor),
    )
}

fn flatten(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_owned() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(n, v)| flatten(&key(&n.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_owned(), s.clone())),
        Value::Null => out.push((prefix.to_owned(), String::new())),
        other => out.push((prefix.to_owned(), other.to_string())),
    }
}

fn flat_record<T: Serialize>(value: &T) -> Result<Vec<(String, String)>, CliError> {
    let tree = serde_json::to_value(value)
        .map_err(|e| CliError::Internal(format!("serialization failed: {e}")))?;
    let mut cells = Vec::new();
    flatten("", &tree, &mut cells);
    Ok(cells)
}

fn write_csv(records: &[Vec<(String, String)>]) -> Result<String, CliError> {
    let internal = |e: csv::Error| CliError::Internal(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    if let Some(first) = records.first() {
        w.write_record(first.iter().map(|(k, _)| k)).map_err(internal)?;
    }
    for rec in records {
        w.write_record(rec.iter().map(|(_, v)| v)).map_err(internal)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(e.to_string()))
}

/// Header of dotted key paths and a single value row.
pub fn flat_csv<T: Serialize>(value: &T) -> Result<String, CliError> {
    write_csv(&[flat_record(value)?])
}

/// One wide row per house.
pub fn rows_csv(rows: &[CaseStudyRow]) -> Result<String, CliError> {
    let records = rows.iter().map(flat_record).collect::<Result<Vec<_>, _>>()?;
    if records.is_empty() {
        return Ok(String::new());
    }
    write_csv(&records)
}

pub fn field_text(f: &ScalarField2D) -> String {
    let span = |v: &[f64]| format!("[{}, {}]", v[0], v[v.len() - 1]);
    let mut out = format!(
        "{} x {} samples over {} {}, {} {}\nsmallest sample {:.6}\n",
        f.x.values.len(),
        f.y.values.len(),
        f.x.name,
        span(&f.x.values),
        f.y.name,
        span(&f.y.values),
        f.min_value()
    );
    if let Some(m) = f.marker {
        let _ = writeln!(out, "optimum at ({:.4}, {:.4}) = {:.6}", m.x, m.y, m.value);
    }
    out
}

pub fn contours_text(set: &ContourSet) -> String {
    set.contours
        .iter()
        .map(|c| {
            let closed = c.polylines.iter().filter(|p| p.first() == p.last()).count();
            format!(
                "level {}: {} polylines ({} closed), {} vertices\n",
                c.level,
                c.polylines.len(),
                closed,
                c.polylines.iter().map(Vec::len).sum::<usize>()
            )
        })
        .collect()
}

pub fn verify_text(r: &VerificationReport) -> String {
    let max = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0_f64, f64::max);
    let vol_ok = r.volume_cases.iter().filter(|c| c.passed).count();
    let floor_ok = r.floor_cases.iter().filter(|c| c.passed).count();
    format!(
        "seed {}, tolerance {:e} relative\nfixed volume: {}/{} agree (max argmin error {:.1e}, max value error {:.1e})\nfixed floor:  {}/{} agree (max argmin error {:.1e}, max value error {:.1e})\n{}\n",
        r.seed,
        r.tolerance,
        vol_ok,
        r.volume_cases.len(),
        max(&mut r.volume_cases.iter().map(|c| c.argmin_error)),
        max(&mut r.volume_cases.iter().map(|c| c.value_error)),
        floor_ok,
        r.floor_cases.len(),
        max(&mut r.floor_cases.iter().map(|c| c.argmin_error)),
        max(&mut r.floor_cases.iter().map(|c| c.value_error)),
        if r.all_passed { "PASS" } else { "FAIL" }
    )
}
