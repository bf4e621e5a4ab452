//! The large sets `L` around the two covering loops, their coverings and the
//! strong hyperbolicity form, plus the transitivity bookkeeping.
//!
//! Local coordinates are `(x1, x2, y) = (x, y_u, y_s)`, so the sets share the
//! charts of the blender construction and the form is `Q = diag(1, 1, -1)`.

use serde::{Deserialize, Serialize};

use crate::blender::{build_initial_hsets, propagate_hsets, Construction};
use crate::construction::ConstructionData;
use crate::hset::{face, transition_image, HSet, Side};
use crate::interval::Interval;
use crate::linalg::IVec3;
use crate::verify::{verify_covering_appendix, verify_strong_hyperbolicity, CoveringVerdict, PdVerdict, QForm, X2Rule};

pub const ALPHA: [u8; 5] = [1, 0, 0, 0, 0];
pub const BETA: [u8; 4] = [1, 0, 0, 0];

/// Relative gap left between the destination `x2` range and the images of
/// the source `x2` faces.
const X2_GAP: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct LSetFamily {
    pub l0: HSet,
    /// `[branch][step - 1]`: `L_11 .. L_14` and `L_21 .. L_23`.
    pub branches: Vec<Vec<HSet>>,
}

impl LSetFamily {
    /// The two loops as index paths, each starting and ending at `L_0`.
    pub fn loops(&self) -> Vec<Vec<&HSet>> {
        self.branches
            .iter()
            .map(|br| {
                std::iter::once(&self.l0)
                    .chain(br.iter())
                    .chain(std::iter::once(&self.l0))
                    .collect()
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        1 + self.branches.iter().map(Vec::len).sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `x2` range for the next set: everything strictly between the images of
/// the two `x2` faces of `src`, less a relative gap of `X2_GAP`.
fn next_x2_range(c: &Construction, src: &HSet, template: &HSet) -> Option<Interval> {
    let lo_img = transition_image(&c.params, src, template, &face(src, 1, Side::Lower).local)[1];
    let hi_img = transition_image(&c.params, src, template, &face(src, 1, Side::Upper).local)[1];
    let (a, b) = if lo_img.midpoint() <= hi_img.midpoint() {
        (lo_img.hi(), hi_img.lo())
    } else {
        (hi_img.hi(), lo_img.lo())
    };
    let gap = X2_GAP * (b - a);
    let lo = (a + gap).next_up();
    let hi = (b - gap).next_down();
    Interval::new(lo, hi).ok().filter(|r| r.lo() < r.hi())
}

pub fn build_l_sets(c: &Construction, data: &ConstructionData) -> LSetFamily {
    let mb = c.mother.local_box;
    let [lo, hi] = data.l0_x2_range;
    let l0_box = IVec3::from_intervals([mb[0], Interval::new(lo, hi).expect("validated"), mb[2]]);
    let l0 = HSet::new("L_0", c.mother.chart.clone(), l0_box, vec![0, 1]).expect("L_0 box");
    let branches = (0..2)
        .map(|a| {
            let mut out: Vec<HSet> = Vec::new();
            for b in 1..data.branch_len(a) {
                let src = out.last().unwrap_or(&l0);
                let template = HSet::new("", c.chart(a, b).clone(), l0_box, vec![0, 1]).expect("template");
                // A degenerate range can only come from absurd data; fall
                // back to the image hull so the covering check reports it.
                let x2 = next_x2_range(c, src, &template)
                    .unwrap_or_else(|| transition_image(&c.params, src, &template, &src.local_box)[1].widen_ulp());
                let bx = IVec3::from_intervals([mb[0], x2, mb[2]]);
                out.push(HSet::new(format!("L_{}{}", a + 1, b), c.chart(a, b).clone(), bx, vec![0, 1]).expect("box"));
            }
            out
        })
        .collect();
    LSetFamily { l0, branches }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LSetRecord {
    pub label: String,
    pub x2: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub src: String,
    pub dst: String,
    pub x2_rule: X2Rule,
    pub covering: CoveringVerdict,
    /// Outcome of the literal rule that the whole `x2` image stays inside the
    /// destination. Informational only.
    pub x2_contained: bool,
    pub pd: PdVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentRecord {
    pub checked: usize,
    pub pass: bool,
    pub mother_in_l0: bool,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitivityNote {
    pub alpha: Vec<u8>,
    pub beta: Vec<u8>,
    pub statement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityBlock {
    pub l_sets: Vec<LSetRecord>,
    pub transitions: Vec<TransitionRecord>,
    pub containment: ContainmentRecord,
    pub transitivity: Option<TransitivityNote>,
    pub pass: bool,
}

impl HyperbolicityBlock {
    pub fn pd_pass(&self) -> bool {
        self.transitions.iter().all(|t| t.pd.pass)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for t in &self.transitions {
            if !t.covering.pass {
                out.push(format!("{} => {}: appendix covering", t.src, t.dst));
            }
            if !t.pd.pass {
                out.push(format!("{} => {}: strong hyperbolicity", t.src, t.dst));
            }
        }
        out.extend(self.containment.failures.iter().map(|f| format!("containment: {f}")));
        out
    }
}

/// Every `N_abc` inside `L_ab` and `M` inside `L_0`, compared in shared
/// local coordinates.
pub fn check_containment(family: &LSetFamily, mother: &HSet, chains: &[Vec<HSet>]) -> ContainmentRecord {
    let inside = |n: &HSet, l: &HSet| n.chart.same_as(&l.chart) && n.local_box.subset(&l.local_box);
    let mother_in_l0 = inside(mother, &family.l0);
    let mut failures = Vec::new();
    let mut checked = 1;
    if !mother_in_l0 {
        failures.push(format!("{} not in {}", mother.label, family.l0.label));
    }
    for chain in chains {
        for (b, n) in chain.iter().enumerate() {
            let a = n.label.as_bytes()[2] - b'1';
            let l = if b == 0 {
                &family.l0
            } else {
                &family.branches[a as usize][b - 1]
            };
            checked += 1;
            if !inside(n, l) {
                failures.push(format!("{} not in {}", n.label, l.label));
            }
        }
    }
    ContainmentRecord {
        checked,
        pass: failures.is_empty(),
        mother_in_l0,
        failures,
    }
}

/// Appendix coverings and the strong hyperbolicity form for all transitions
/// of both loops.
pub fn verify_hyperbolicity(c: &Construction, family: &LSetFamily) -> Vec<TransitionRecord> {
    let q = QForm::new(2, 1).expect("2 + 1 = 3");
    let mut out = Vec::new();
    for path in family.loops() {
        for w in path.windows(2) {
            let (src, dst) = (w[0], w[1]);
            out.push(TransitionRecord {
                src: src.label.clone(),
                dst: dst.label.clone(),
                x2_rule: X2Rule::Exit,
                covering: verify_covering_appendix(&c.params, src, dst, X2Rule::Exit),
                x2_contained: verify_covering_appendix(&c.params, src, dst, X2Rule::Contained).pass,
                pd: verify_strong_hyperbolicity(&c.params, src, dst, &q),
            });
        }
    }
    out
}

/// The transitivity form has the same enclosure as the hyperbolicity form,
/// so it holds exactly when every PD check passed.
pub fn record_transitivity(transitions: &[TransitionRecord]) -> Option<TransitivityNote> {
    (!transitions.is_empty() && transitions.iter().all(|t| t.pd.pass)).then(|| TransitivityNote {
        alpha: ALPHA.to_vec(),
        beta: BETA.to_vec(),
        statement: "verified via identical enclosure: the invariant set is conjugate to the subshift on words \
                    alpha = 1 0 0 0 0 and beta = 1 0 0 0"
            .to_string(),
    })
}

pub fn hyperbolicity_block(c: &Construction, data: &ConstructionData) -> HyperbolicityBlock {
    let family = build_l_sets(c, data);
    let initial = build_initial_hsets(data, &c.mother);
    let chains = propagate_hsets(c, data, &initial);
    let containment = check_containment(&family, &c.mother, &chains);
    let transitions = verify_hyperbolicity(c, &family);
    let transitivity = record_transitivity(&transitions);
    let l_sets = std::iter::once(&family.l0)
        .chain(family.branches.iter().flatten())
        .map(|h| LSetRecord {
            label: h.label.clone(),
            x2: h.local_box[1],
        })
        .collect();
    let pass = containment.pass && transitions.iter().all(|t| t.covering.pass && t.pd.pass);
    HyperbolicityBlock {
        l_sets,
        transitions,
        containment,
        transitivity,
        pass,
    }
}
