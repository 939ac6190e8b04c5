//! Combined assessment of one design under both optimization settings.

use serde::{Deserialize, Serialize};

use crate::compactness::{compactness, CompactnessReport};
use crate::error::Result;
use crate::geometry::{surface, HouseParams};
use crate::optimize_floor::{optimize_fixed_floor, FixedFloorOptimum};

/// The design compared with the best layout on the same floor area, wall
/// height and slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloorComparison {
    #[serde(rename = "S")]
    pub surface: f64,
    pub ratio: f64,
    pub headroom: f64,
    pub optimum: FixedFloorOptimum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub design: HouseParams,
    pub fixed_volume: CompactnessReport,
    pub fixed_floor: FloorComparison,
}

pub fn compare_fixed_floor(p: &HouseParams) -> Result<FloorComparison> {
    let s = surface(p)?.total;
    let optimum = optimize_fixed_floor(p.floor_area(), p.height, p.alpha)?;
    Ok(FloorComparison {
        surface: s,
        ratio: s / optimum.surface_min,
        headroom: s - optimum.surface_min,
        optimum,
    })
}

pub fn assess(p: &HouseParams) -> Result<Assessment> {
    Ok(Assessment {
        design: *p,
        fixed_volume: compactness(p)?,
        fixed_floor: compare_fixed_floor(p)?,
    })
}

/// One row of the case-study summary. Every derived column is recomputed
/// from the four inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseStudyRow {
    pub name: String,
    #[serde(rename = "W")]
    pub width: f64,
    #[serde(rename = "L")]
    pub length: f64,
    #[serde(rename = "H")]
    pub height: f64,
    pub alpha_deg: f64,
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "F")]
    pub floor: f64,
    #[serde(rename = "S")]
    pub surface: f64,
    pub volume_mode: VolumeColumns,
    pub floor_mode: FloorColumns,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeColumns {
    #[serde(rename = "W_min")]
    pub width: f64,
    #[serde(rename = "L_min")]
    pub length: f64,
    #[serde(rename = "H_min")]
    pub height: f64,
    #[serde(rename = "S_min")]
    pub surface_min: f64,
    pub ratio: f64,
    pub headroom: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloorColumns {
    #[serde(rename = "W_min")]
    pub width: f64,
    #[serde(rename = "L_min")]
    pub length: f64,
    #[serde(rename = "S_min")]
    pub surface_min: f64,
    pub ratio: f64,
    pub headroom: f64,
}

impl CaseStudyRow {
    pub fn evaluate(name: &str, width: f64, length: f64, height: f64, alpha_deg: f64) -> Result<Self> {
        let p = HouseParams::from_degrees(width, length, height, alpha_deg)?;
        let a = assess(&p)?;
        let v = &a.fixed_volume;
        let f = &a.fixed_floor;
        Ok(Self {
            name: name.to_owned(),
            width,
            length,
            height,
            alpha_deg,
            volume: v.volume,
            floor: p.floor_area(),
            surface: v.surface,
            volume_mode: VolumeColumns {
                width: v.optimum.width,
                length: v.optimum.length,
                height: v.optimum.height,
                surface_min: v.surface_min,
                ratio: v.ratio,
                headroom: v.headroom,
            },
            floor_mode: FloorColumns {
                width: f.optimum.width,
                length: f.optimum.length,
                surface_min: f.optimum.surface_min,
                ratio: f.ratio,
                headroom: f.headroom,
            },
        })
    }
}
