//! Construction data for the blender: the mother set, the charts along the two
//! homoclinic excursions, and the subdivision parameters.

use std::fs;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decimal::{enclose, Decimal};
use crate::hset::{Chart, ConeSpec, HSet};
use crate::interval::Interval;
use crate::linalg::{verified_inverse, IVec3, Mat3};

pub const DATA_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn invalid(path: impl Into<String>, message: impl Into<String>) -> DataError {
    DataError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Step {
    pub matrix: Mat3,
    /// Printed `(X, Y)` of the chart center; `Z` follows from the recursion.
    pub anchor: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Branch {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstructionData {
    pub schema_version: u32,
    pub mu: Decimal,
    pub beta: Decimal,
    /// Local box of the mother set, `[[x], [y_u], [y_s]]`.
    pub mother_box: [[f64; 2]; 3],
    pub mother_matrix: Mat3,
    pub mother_anchor: [f64; 2],
    /// Exactly two excursions. The first ends below the mother center in
    /// `Z`, the second above it.
    pub branches: Vec<Branch>,
    /// Spacing of the initial `y_u` intervals; each has width `2 delta`.
    pub delta: Decimal,
    pub subdivisions: usize,
    /// Cone constant of the initial sets.
    pub kappa: f64,
    /// Cone constant of the mother set.
    pub mother_kappa: f64,
    /// `x2` range of the large set around the mother set in the
    /// hyperbolicity loops.
    pub l0_x2_range: [f64; 2],
}

const A_M: Mat3 = [
    [0.131936, 0.0, -0.998261],
    [0.984126, 0.0, 0.0447916],
    [0.118698, 1.0, -0.0383312],
];

const BRANCH_1: [(Mat3, [f64; 2]); 4] = [
    (
        [
            [0.15187, 0.0, -0.64804],
            [1.0123, 0.0, 0.039354],
            [0.17202, 1.0, -0.038011],
        ],
        [3.3127, 2.5032],
    ),
    (
        [
            [0.15622, 0.0, 0.85005],
            [0.78914, 0.0, 0.056412],
            [0.18542, 1.0, -0.053097],
        ],
        [2.5032, -2.2401],
    ),
    (
        [
            [0.12178, 0.0, 1.2185],
            [-0.53836, 0.0, 0.04927],
            [0.15326, 1.0, -0.043093],
        ],
        [-2.2401, -3.7312],
    ),
    (
        [
            [-0.08308, 0.0, 1.0643],
            [0.62561, 0.0, -0.046216],
            [-0.057064, 1.0, 0.040401],
        ],
        [-3.7312, 3.7495],
    ),
];

const BRANCH_2: [(Mat3, [f64; 2]); 3] = [
    (
        [
            [-0.15209, 0.0, -0.78781],
            [-1.0012, 0.0, 0.053503],
            [-0.17003, 1.0, -0.050450],
        ],
        [3.2714, 2.2300],
    ),
    (
        [
            [-0.15451, 0.0, 1.1557],
            [-0.69615, 0.0, 0.049190],
            [-0.18337, 1.0, -0.043018],
        ],
        [2.2300, -3.5459],
    ),
    (
        [
            [-0.10743, 0.0, 1.0625],
            [0.75471, 0.0, -0.046214],
            [-0.13856, 1.0, 0.040391],
        ],
        [-3.5459, 3.7421],
    ),
];

/// `X` of the mother center as printed.
pub const MOTHER_X: f64 = 3.4319;
/// `Y` of the mother center used by default. The printed value 3.4319 puts
/// both exit faces of the first links on the same side; 3.2919 sits between
/// the `Y` values of the two first anchors and lets every link cover.
pub const MOTHER_Y: f64 = 3.2919;
pub const PRINTED_MOTHER_Y: f64 = 3.4319;

fn branch(steps: &[(Mat3, [f64; 2])]) -> Branch {
    Branch {
        steps: steps.iter().map(|&(matrix, anchor)| Step { matrix, anchor }).collect(),
    }
}

impl Default for ConstructionData {
    fn default() -> Self {
        ConstructionData {
            schema_version: DATA_SCHEMA_VERSION,
            mu: "-9.5".parse().expect("literal"),
            beta: "0.3".parse().expect("literal"),
            mother_box: [[-0.1, 0.1], [-2.0, 2.0], [-0.4, 0.4]],
            mother_matrix: A_M,
            mother_anchor: [MOTHER_X, MOTHER_Y],
            branches: vec![branch(&BRANCH_1), branch(&BRANCH_2)],
            delta: "0.04".parse().expect("literal"),
            subdivisions: 50,
            kappa: 0.02,
            mother_kappa: 0.02,
            l0_x2_range: [-100.0, 100.0],
        }
    }
}

impl ConstructionData {
    /// The default data with the mother center exactly as printed.
    pub fn printed_anchor() -> Self {
        ConstructionData {
            mother_anchor: [MOTHER_X, PRINTED_MOTHER_Y],
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), DataError> {
        if self.schema_version != DATA_SCHEMA_VERSION {
            return Err(invalid(
                "schema_version",
                format!("expected {DATA_SCHEMA_VERSION}, got {}", self.schema_version),
            ));
        }
        for (name, d) in [("mu", &self.mu), ("beta", &self.beta)] {
            if !d.to_f64().is_finite() {
                return Err(invalid(name, "out of range"));
            }
        }
        for (i, [lo, hi]) in self.mother_box.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(invalid(format!("mother_box[{i}]"), "needs finite lo < hi"));
            }
        }
        check_matrix("mother_matrix", &self.mother_matrix)?;
        check_point("mother_anchor", &self.mother_anchor)?;
        if self.branches.len() != 2 {
            return Err(invalid(
                "branches",
                format!("expected 2 branches, got {}", self.branches.len()),
            ));
        }
        for (a, br) in self.branches.iter().enumerate() {
            if br.steps.is_empty() {
                return Err(invalid(format!("branches[{a}].steps"), "empty"));
            }
            for (b, st) in br.steps.iter().enumerate() {
                check_matrix(&format!("branches[{a}].steps[{b}].matrix"), &st.matrix)?;
                check_point(&format!("branches[{a}].steps[{b}].anchor"), &st.anchor)?;
            }
        }
        if !self.delta.value().is_positive() {
            return Err(invalid("delta", "must be positive"));
        }
        if self.subdivisions == 0 {
            return Err(invalid("subdivisions", "must be at least 1"));
        }
        for (name, k) in [("kappa", self.kappa), ("mother_kappa", self.mother_kappa)] {
            if !(k.is_finite() && k > 0.0) {
                return Err(invalid(name, "must be positive"));
            }
        }
        let [lo, hi] = self.l0_x2_range;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid("l0_x2_range", "needs finite lo < hi"));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, DataError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let data: ConstructionData = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            invalid(
                if path == "." { "<root>".to_string() } else { path },
                e.into_inner().to_string(),
            )
        })?;
        data.validate()?;
        Ok(data)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("construction data serializes")
    }

    pub fn mu_enclosure(&self) -> Interval {
        self.mu.enclose()
    }

    pub fn beta_enclosure(&self) -> Interval {
        self.beta.enclose()
    }

    pub fn mother_local_box(&self) -> IVec3 {
        IVec3::from_intervals(
            self.mother_box
                .map(|[lo, hi]| Interval::new(lo, hi).expect("validated box")),
        )
    }

    pub fn mother_cone(&self) -> ConeSpec {
        ConeSpec::uniform(self.mother_kappa).expect("validated kappa")
    }

    pub fn initial_cone(&self) -> ConeSpec {
        ConeSpec::uniform(self.kappa).expect("validated kappa")
    }

    /// Number of charts along branch `a`, counting the mother chart.
    pub fn branch_len(&self, a: usize) -> usize {
        self.branches[a].steps.len() + 1
    }

    /// Matrix of chart `b` on branch `a`; `b = 0` is the mother chart.
    pub fn matrix(&self, a: usize, b: usize) -> &Mat3 {
        if b == 0 {
            &self.mother_matrix
        } else {
            &self.branches[a].steps[b - 1].matrix
        }
    }

    pub fn anchor(&self, a: usize, b: usize) -> [f64; 2] {
        if b == 0 {
            self.mother_anchor
        } else {
            self.branches[a].steps[b - 1].anchor
        }
    }

    /// `Y` coordinates of the anchors along branch `a`, mother first.
    pub fn anchor_ys(&self, a: usize) -> Vec<f64> {
        (0..self.branch_len(a)).map(|b| self.anchor(a, b)[1]).collect()
    }

    /// Exact `y_u` interval of initial set `c` on branch `a`:
    /// `s c delta + [-delta, delta]` with `s = +1` for the first branch and
    /// `-1` for the second.
    pub fn initial_interval_exact(&self, a: usize, c: usize) -> (BigRational, BigRational) {
        let d = self.delta.value();
        let mut center = d * BigRational::from_integer(c.into());
        if a == 1 {
            center = -center;
        }
        (&center - d, &center + d)
    }

    /// Outward enclosure of [`Self::initial_interval_exact`].
    pub fn initial_interval(&self, a: usize, c: usize) -> Interval {
        let (lo, hi) = self.initial_interval_exact(a, c);
        let lo = if lo.is_zero() { 0.0 } else { enclose(&lo).lo() };
        let hi = if hi.is_zero() { 0.0 } else { enclose(&hi).hi() };
        Interval::new(lo, hi).expect("ordered")
    }

    /// The mother set in a chart centered at `center`.
    pub fn mother_set(&self, center: IVec3) -> HSet {
        let chart = Chart::new(self.mother_matrix, center).expect("validated matrix");
        HSet::with_dx1("M", chart, self.mother_local_box()).expect("validated box")
    }
}

fn check_matrix(path: &str, m: &Mat3) -> Result<(), DataError> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(invalid(path, "non-finite entry"));
    }
    verified_inverse(m).map_err(|e| invalid(path, e.to_string()))?;
    Ok(())
}

fn check_point(path: &str, p: &[f64; 2]) -> Result<(), DataError> {
    if p.iter().any(|x| !x.is_finite()) {
        return Err(invalid(path, "non-finite coordinate"));
    }
    Ok(())
}

pub fn load_construction(path: Option<&Path>) -> Result<ConstructionData, DataError> {
    match path {
        None => Ok(ConstructionData::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|source| DataError::Io {
                path: p.display().to_string(),
                source,
            })?;
            ConstructionData::from_json(&text)
        }
    }
}

pub fn save_construction(data: &ConstructionData, path: &Path) -> Result<(), DataError> {
    fs::write(path, data.to_json() + "\n").map_err(|source| DataError::Io {
        path: path.display().to_string(),
        source,
    })
}
