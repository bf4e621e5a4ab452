//! H-sets: boxes in affine local coordinates with designated exit directions.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::interval::{Interval, IntervalError};
use crate::linalg::{point_mat_vec, verified_inverse, IMat3, IVec3, Mat3};
use crate::map::MapModel;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("chart matrix rejected: {0}")]
    Chart(#[from] IntervalError),
    #[error("h-set {label}: local box has no interior in dimension {dim}")]
    DegenerateBox { label: String, dim: usize },
    #[error("h-set {label}: invalid exit dimensions {dims:?}")]
    ExitDims { label: String, dims: Vec<usize> },
    #[error("cone constants must be positive and finite, got ({0}, {1})")]
    Cone(f64, f64),
}

/// Affine chart `gamma(z) = A^{-1} (z - p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    matrix: Mat3,
    inverse: IMat3,
    center: IVec3,
}

impl Chart {
    pub fn new(matrix: Mat3, center: IVec3) -> Result<Self, GeometryError> {
        let inverse = verified_inverse(&matrix)?;
        Ok(Chart {
            matrix,
            inverse,
            center,
        })
    }

    pub fn identity() -> Self {
        Chart::new([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]], IVec3::zero()).expect("identity is invertible")
    }

    /// Same frame, different origin. Reuses the verified inverse.
    pub fn with_center(&self, center: IVec3) -> Self {
        Chart { center, ..self.clone() }
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.matrix
    }

    pub fn inverse(&self) -> &IMat3 {
        &self.inverse
    }

    pub fn center(&self) -> &IVec3 {
        &self.center
    }

    /// `A u + p`
    pub fn to_global(&self, u: &IVec3) -> IVec3 {
        point_mat_vec(&self.matrix, u) + self.center
    }

    /// `A^{-1} (z - p)`
    pub fn to_local(&self, z: &IVec3) -> IVec3 {
        self.inverse.mat_vec(&(*z - self.center))
    }

    /// Same matrix and center, compared bitwise.
    pub fn same_as(&self, other: &Chart) -> bool {
        self.matrix == other.matrix && self.center == other.center
    }
}

#[derive(Serialize, Deserialize)]
struct ChartRepr {
    matrix: Mat3,
    center: IVec3,
}

impl Serialize for Chart {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ChartRepr {
            matrix: self.matrix,
            center: self.center,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Chart {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = ChartRepr::deserialize(d)?;
        Chart::new(r.matrix, r.center).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Face {
    pub dim: usize,
    pub side: Side,
    pub local: IVec3,
}

/// A box in the local coordinates of a chart.
///
/// Bounds are stored in natural units, e.g. `[-0.1, 0.1] x [-2, 2] x [-0.4, 0.4]`,
/// and every check compares against those bounds directly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HSet {
    pub label: String,
    pub chart: Chart,
    pub local_box: IVec3,
    pub exit_dims: Vec<usize>,
}

#[derive(Deserialize)]
struct HSetRepr {
    label: String,
    chart: Chart,
    local_box: IVec3,
    exit_dims: Vec<usize>,
}

impl<'de> Deserialize<'de> for HSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let r = HSetRepr::deserialize(d)?;
        HSet::new(r.label, r.chart, r.local_box, r.exit_dims).map_err(serde::de::Error::custom)
    }
}

impl HSet {
    pub fn new(
        label: impl Into<String>,
        chart: Chart,
        local_box: IVec3,
        exit_dims: Vec<usize>,
    ) -> Result<Self, GeometryError> {
        let label = label.into();
        if let Some(dim) = (0..3).find(|&i| !(local_box[i].lo() < local_box[i].hi())) {
            return Err(GeometryError::DegenerateBox { label, dim });
        }
        let mut sorted = exit_dims.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != exit_dims.len() || sorted.iter().any(|&d| d >= 3) {
            return Err(GeometryError::ExitDims { label, dims: exit_dims });
        }
        Ok(HSet {
            label,
            chart,
            local_box,
            exit_dims,
        })
    }

    /// Exit dimension 0 only, the shape of every set in the blender family.
    pub fn with_dx1(label: impl Into<String>, chart: Chart, local_box: IVec3) -> Result<Self, GeometryError> {
        HSet::new(label, chart, local_box, vec![0])
    }

    pub fn dx(&self) -> usize {
        self.exit_dims.len()
    }

    pub fn entry_dims(&self) -> Vec<usize> {
        (0..3).filter(|d| !self.exit_dims.contains(d)).collect()
    }

    pub fn to_global(&self, u: &IVec3) -> IVec3 {
        self.chart.to_global(u)
    }

    pub fn to_local(&self, z: &IVec3) -> IVec3 {
        self.chart.to_local(z)
    }

    /// Global enclosure of the whole set.
    pub fn global_box(&self) -> IVec3 {
        self.to_global(&self.local_box)
    }

    /// The eight local corners, ordered by bit pattern (bit k picks the upper
    /// bound of coordinate k).
    pub fn local_corners(&self) -> [[f64; 3]; 8] {
        let b = &self.local_box;
        std::array::from_fn(|k| std::array::from_fn(|d| if k >> d & 1 == 1 { b[d].hi() } else { b[d].lo() }))
    }
}

/// Both faces of every exit dimension, lower face first.
pub fn exit_faces(h: &HSet) -> Vec<Face> {
    let mut out = Vec::with_capacity(2 * h.dx());
    for &dim in &h.exit_dims {
        for side in [Side::Lower, Side::Upper] {
            out.push(face(h, dim, side));
        }
    }
    out
}

/// Faces of the entry dimensions, for completeness checks.
pub fn entry_faces(h: &HSet) -> Vec<Face> {
    let mut out = Vec::new();
    for dim in h.entry_dims() {
        for side in [Side::Lower, Side::Upper] {
            out.push(face(h, dim, side));
        }
    }
    out
}

/// The local box with coordinate `dim` pinned to one of its bounds.
pub fn face(h: &HSet, dim: usize, side: Side) -> Face {
    let b = &h.local_box;
    let mut local = *b;
    let v = match side {
        Side::Lower => b[dim].lo(),
        Side::Upper => b[dim].hi(),
    };
    local[dim] = Interval::point(v);
    Face { dim, side, local }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub kappa_u: f64,
    pub kappa_s: f64,
}

impl ConeSpec {
    pub fn new(kappa_u: f64, kappa_s: f64) -> Result<Self, GeometryError> {
        let ok = |k: f64| k.is_finite() && k > 0.0;
        if !ok(kappa_u) || !ok(kappa_s) {
            return Err(GeometryError::Cone(kappa_u, kappa_s));
        }
        Ok(ConeSpec { kappa_u, kappa_s })
    }

    pub fn uniform(kappa: f64) -> Result<Self, GeometryError> {
        ConeSpec::new(kappa, kappa)
    }
}

/// Enclosure of `Df_ji` over the local box `u` of `src`.
pub fn transition_jacobian<M: MapModel + ?Sized>(m: &M, src: &HSet, dst: &HSet, u: &IVec3) -> IMat3 {
    let df = m.jacobian(&src.to_global(u));
    let a_src = IMat3::from_points(*src.chart.matrix());
    dst.chart.inverse().mat_mul(&df.mat_mul(&a_src))
}

/// Enclosure of `f_ji(u) = gamma_j(f(gamma_i^{-1}(u)))`.
///
/// The direct composition is intersected with the mean-value form
/// `f_ji(c) + [Df_ji(u)] (u - c)`, which avoids most of the wrapping the
/// chart changes introduce.
pub fn transition_image<M: MapModel + ?Sized>(m: &M, src: &HSet, dst: &HSet, u: &IVec3) -> IVec3 {
    let direct = dst.to_local(&m.image(&src.to_global(u)));
    let c = u.center();
    if c == *u {
        return direct;
    }
    let fc = dst.to_local(&m.image(&src.to_global(&c)));
    let j = transition_jacobian(m, src, dst, u);
    let mean_value = fc + j.mat_vec(&(*u - c));
    // Both contain the true image, so they cannot be disjoint.
    direct.intersect(&mean_value).unwrap_or(direct)
}
