//! Geometry export: global corners of every set and their images.

use std::io::Write;

use crate::blender::{build_initial_hsets, propagate_hsets, BlenderError, Construction};
use crate::construction::ConstructionData;
use crate::hset::HSet;
use crate::interval::Interval;
use crate::linalg::IVec3;
use crate::map::{henon_image, HenonParams};

pub const DEFAULT_GEOMETRY_XI: f64 = 1.1;

/// One row per set: the mother set, then the chains in order.
#[derive(Debug, Clone, PartialEq)]
pub struct GeometryRow {
    pub label: String,
    /// 1-based; 0 for the mother set.
    pub branch: usize,
    pub step: usize,
    pub c: Option<usize>,
    pub corners: [[f64; 3]; 8],
    pub images: [[f64; 3]; 8],
}

fn header() -> Vec<String> {
    let mut h = vec!["label".to_string(), "branch".into(), "step".into(), "c".into()];
    for kind in ["corner", "image"] {
        for k in 0..8 {
            for axis in ["x", "y", "z"] {
                h.push(format!("{kind}{k}_{axis}"));
            }
        }
    }
    h
}

fn row(label: &str, branch: usize, step: usize, c: Option<usize>, h: &HSet, params: &HenonParams) -> GeometryRow {
    let mut corners = [[0.0; 3]; 8];
    let mut images = [[0.0; 3]; 8];
    for (k, u) in h.local_corners().iter().enumerate() {
        let g = h.chart.to_global(&IVec3::from_points(*u));
        let gp = g.midpoint();
        let img = henon_image(params, &IVec3::from_points(gp)).midpoint();
        corners[k] = gp;
        images[k] = img;
    }
    GeometryRow {
        label: label.to_string(),
        branch,
        step,
        c,
        corners,
        images,
    }
}

/// All 451 sets at the point `xi`.
pub fn geometry_rows(data: &ConstructionData, xi: f64) -> Result<Vec<GeometryRow>, BlenderError> {
    let c = Construction::build(data, Interval::point(xi))?;
    let initial = build_initial_hsets(data, &c.mother);
    let chains = propagate_hsets(&c, data, &initial);
    let mut out = vec![row("M", 0, 0, None, &c.mother, &c.params)];
    for (i, chain) in chains.iter().enumerate() {
        let (a, idx) = (i / data.subdivisions, i % data.subdivisions);
        for (b, h) in chain.iter().enumerate() {
            out.push(row(&h.label, a + 1, b, Some(idx), h, &c.params));
        }
    }
    Ok(out)
}

pub fn write_geometry_csv<W: Write>(rows: &[GeometryRow], w: W) -> Result<(), csv::Error> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(header())?;
    for r in rows {
        let mut rec = vec![
            r.label.clone(),
            r.branch.to_string(),
            r.step.to_string(),
            r.c.map(|c| c.to_string()).unwrap_or_default(),
        ];
        for p in r.corners.iter().chain(r.images.iter()) {
            rec.extend(p.iter().map(f64::to_string));
        }
        wr.write_record(&rec)?;
    }
    wr.flush()?;
    Ok(())
}
