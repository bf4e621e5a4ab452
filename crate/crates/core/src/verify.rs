//! Checkable sufficient conditions: coverings, cones, the overlap condition on
//! the initial sets, and positive definiteness of the hyperbolicity form.
//!
//! A failing verdict means "not verified". None of these checks can disprove
//! anything.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hset::{face, transition_image, transition_jacobian, ConeSpec, HSet, Side};
use crate::interval::Interval;
use crate::linalg::IVec3;
use crate::map::MapModel;
use crate::rounding::{mul_up, sub_down};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Preserving,
    Reversing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoveringVerdict {
    pub pass: bool,
    /// One entry per checked exit dimension.
    pub orientation: Vec<Orientation>,
    /// Lower-face then upper-face margin for each checked exit dimension.
    pub exit_margins: Vec<f64>,
    /// One entry per dimension checked for containment.
    pub entry_margins: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeVerdict {
    pub pass: bool,
    pub ratio_u: Option<Interval>,
    pub ratio_s: Option<Interval>,
    pub wx: Interval,
    /// `kappa_dst - |ratio|` for the tighter of the two directions.
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdVerdict {
    pub pass: bool,
    pub minor_lower_bounds: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct B1Verdict {
    pub pass: bool,
    /// The initial intervals tile the mother range with no gaps and nothing outside.
    pub covers: bool,
    pub delta: f64,
    /// How much larger `delta` could be before a disk falls between two sets.
    pub margin: f64,
    pub hull: Interval,
    pub sets: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum B1Error {
    #[error("set {0} does not share the mother chart")]
    ChartMismatch(String),
    #[error("set {0} differs from the mother set outside the y_u direction")]
    ShapeMismatch(String),
    #[error("no initial sets")]
    Empty,
}

/// Signature matrix `diag(Id_{d_u}, -Id_{d_s})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QForm {
    pub d_u: usize,
    pub d_s: usize,
}

impl QForm {
    pub fn new(d_u: usize, d_s: usize) -> Option<Self> {
        (d_u + d_s == 3).then_some(QForm { d_u, d_s })
    }

    pub fn signs(&self) -> [f64; 3] {
        std::array::from_fn(|i| if i < self.d_u { 1.0 } else { -1.0 })
    }
}

/// How the weak exit direction `x2` is checked for the hyperbolicity loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum X2Rule {
    /// The full image stays strictly inside the destination `x2` range.
    Contained,
    /// The `x2` faces map strictly past the destination `x2` bounds.
    Exit,
}

/// Margins for both faces of `src_dim`, against `dst_dim` of the destination,
/// in the better of the two orientations.
fn exit_check<M: MapModel + ?Sized>(
    m: &M,
    src: &HSet,
    dst: &HSet,
    src_dim: usize,
    dst_dim: usize,
) -> (Orientation, [f64; 2]) {
    let target = dst.local_box[dst_dim];
    let lo_img = transition_image(m, src, dst, &face(src, src_dim, Side::Lower).local)[dst_dim];
    let hi_img = transition_image(m, src, dst, &face(src, src_dim, Side::Upper).local)[dst_dim];
    let preserving = [sub_down(target.lo(), lo_img.hi()), sub_down(hi_img.lo(), target.hi())];
    let reversing = [sub_down(lo_img.lo(), target.hi()), sub_down(target.lo(), hi_img.hi())];
    let worst = |m: [f64; 2]| m[0].min(m[1]);
    if worst(reversing) > worst(preserving) {
        (Orientation::Reversing, reversing)
    } else {
        (Orientation::Preserving, preserving)
    }
}

fn containment_margin(img: Interval, target: Interval) -> f64 {
    sub_down(target.hi(), img.hi()).min(sub_down(img.lo(), target.lo()))
}

/// Covering check for one exit direction.
///
/// Passes when both exit faces land strictly beyond the destination exit
/// bounds (in either orientation) and the image of the whole box lies
/// strictly inside the destination entry box.
pub fn verify_covering_dx1<M: MapModel + ?Sized>(m: &M, src: &HSet, dst: &HSet) -> CoveringVerdict {
    if src.dx() != 1 || dst.dx() != 1 {
        return CoveringVerdict {
            pass: false,
            orientation: vec![],
            exit_margins: vec![],
            entry_margins: vec![],
        };
    }
    let (orientation, exit) = exit_check(m, src, dst, src.exit_dims[0], dst.exit_dims[0]);
    let img = transition_image(m, src, dst, &src.local_box);
    let entry: Vec<f64> = dst
        .entry_dims()
        .into_iter()
        .map(|d| containment_margin(img[d], dst.local_box[d]))
        .collect();
    let pass = exit.iter().chain(&entry).all(|&x| x > 0.0);
    CoveringVerdict {
        pass,
        orientation: vec![orientation],
        exit_margins: exit.to_vec(),
        entry_margins: entry,
    }
}

/// Covering check for the hyperbolicity loops, with coordinates
/// `(x1, x2, y)`: strong exit, weak direction, entry.
pub fn verify_covering_appendix<M: MapModel + ?Sized>(m: &M, src: &HSet, dst: &HSet, rule: X2Rule) -> CoveringVerdict {
    let (o1, e1) = exit_check(m, src, dst, 0, 0);
    let img = transition_image(m, src, dst, &src.local_box);
    let mut orientation = vec![o1];
    let mut exit_margins = e1.to_vec();
    let mut entry_margins = Vec::with_capacity(2);
    match rule {
        X2Rule::Contained => entry_margins.push(containment_margin(img[1], dst.local_box[1])),
        X2Rule::Exit => {
            let (o2, e2) = exit_check(m, src, dst, 1, 1);
            orientation.push(o2);
            exit_margins.extend(e2);
        }
    }
    entry_margins.push(containment_margin(img[2], dst.local_box[2]));
    let pass = exit_margins.iter().chain(&entry_margins).all(|&x| x > 0.0);
    CoveringVerdict {
        pass,
        orientation,
        exit_margins,
        entry_margins,
    }
}

/// Enclosure of `w = [Df_ji] (1, [-ku, ku], [-ks, ks])` over the source box.
pub fn cone_image<M: MapModel + ?Sized>(m: &M, src: &HSet, src_cone: &ConeSpec, dst: &HSet) -> IVec3 {
    let j = transition_jacobian(m, src, dst, &src.local_box);
    let v = IVec3::from_intervals([
        Interval::ONE,
        Interval::symmetric(src_cone.kappa_u).expect("finite cone"),
        Interval::symmetric(src_cone.kappa_s).expect("finite cone"),
    ]);
    j.mat_vec(&v)
}

/// Hulls of `w_yu / w_x` and `w_ys / w_x`, or `None` when `0` is in `w_x`.
pub fn cone_ratios(w: &IVec3) -> Option<(Interval, Interval)> {
    let ru = w[1].checked_div(w[0]).ok()?;
    let rs = w[2].checked_div(w[0]).ok()?;
    Some((ru, rs))
}

pub fn verify_cone<M: MapModel + ?Sized>(
    m: &M,
    src: &HSet,
    src_cone: &ConeSpec,
    dst: &HSet,
    dst_cone: &ConeSpec,
) -> ConeVerdict {
    let w = cone_image(m, src, src_cone, dst);
    match cone_ratios(&w) {
        None => ConeVerdict {
            pass: false,
            ratio_u: None,
            ratio_s: None,
            wx: w[0],
            margin: None,
        },
        Some((ru, rs)) => {
            let margin = sub_down(dst_cone.kappa_u, ru.mag()).min(sub_down(dst_cone.kappa_s, rs.mag()));
            ConeVerdict {
                pass: margin >= 0.0,
                ratio_u: Some(ru),
                ratio_s: Some(rs),
                wx: w[0],
                margin: Some(margin),
            }
        }
    }
}

/// Leading principal minors of the symmetric part of `J^T Q J - Q`, with
/// `J` the transition Jacobian over the whole source box.
pub fn hyperbolicity_minors<M: MapModel + ?Sized>(m: &M, src: &HSet, dst: &HSet, q: &QForm) -> [Interval; 3] {
    let j = transition_jacobian(m, src, dst, &src.local_box);
    let sg = q.signs();
    // For every point matrix the form is symmetric, so computing each
    // entry once gives the symmetric part directly.
    let mut s = [[Interval::ZERO; 3]; 3];
    for a in 0..3 {
        for b in a..3 {
            let mut acc = Interval::ZERO;
            for (k, &sgn) in sg.iter().enumerate() {
                let term = if a == b {
                    j.get(k, a).sqr()
                } else {
                    j.get(k, a) * j.get(k, b)
                };
                acc = acc + term * sgn;
            }
            if a == b {
                acc = acc - Interval::point(sg[a]);
            }
            s[a][b] = acc;
            s[b][a] = acc;
        }
    }
    let m1 = s[0][0];
    let m2 = s[0][0] * s[1][1] - s[0][1].sqr();
    let m3 = s[0][0] * (s[1][1] * s[2][2] - s[1][2].sqr()) - s[0][1] * (s[0][1] * s[2][2] - s[1][2] * s[0][2])
        + s[0][2] * (s[0][1] * s[1][2] - s[1][1] * s[0][2]);
    [m1, m2, m3]
}

pub fn verify_strong_hyperbolicity<M: MapModel + ?Sized>(m: &M, src: &HSet, dst: &HSet, q: &QForm) -> PdVerdict {
    let minors = hyperbolicity_minors(m, src, dst, q);
    let lb = minors.map(|x| x.lo());
    PdVerdict {
        pass: lb.iter().all(|&x| x > 0.0),
        minor_lower_bounds: lb,
    }
}

/// Checks that every horizontal disk of the mother set lies inside one of
/// the initial sets.
///
/// A disk with slope at most `kappa_u` moves at most
/// `delta = kappa_u * width(x) / 2` in `y_u` from its value at the center, so
/// it fits in `I` whenever that center value lies in `I` shrunk by `delta`.
/// The shrunk intervals must cover the centers of all disks that fit in the
/// mother set.
pub fn verify_b1_overlap(mother: &HSet, mother_cone: &ConeSpec, initial: &[HSet]) -> Result<B1Verdict, B1Error> {
    if initial.is_empty() {
        return Err(B1Error::Empty);
    }
    for h in initial {
        if !h.chart.same_as(&mother.chart) {
            return Err(B1Error::ChartMismatch(h.label.clone()));
        }
        if h.local_box[0] != mother.local_box[0] || h.local_box[2] != mother.local_box[2] {
            return Err(B1Error::ShapeMismatch(h.label.clone()));
        }
    }
    let range = mother.local_box[1];
    let delta = mul_up(mother_cone.kappa_u, mother.local_box[0].width()) / 2.0;
    let mut tiles: Vec<Interval> = initial.iter().map(|h| h.local_box[1]).collect();
    tiles.sort_by(|a, b| a.lo().total_cmp(&b.lo()).then(b.hi().total_cmp(&a.hi())));
    let hull = tiles.iter().skip(1).fold(tiles[0], |acc, t| acc.hull(*t));

    let mut covers = tiles[0].lo() <= range.lo();
    let mut margin = f64::INFINITY;
    let mut cur = tiles[0];
    margin = margin.min(sub_down(cur.width() / 2.0, delta));
    for &t in &tiles[1..] {
        if t.hi() <= cur.hi() {
            continue;
        }
        let overlap = sub_down(cur.hi(), t.lo());
        if overlap < 0.0 {
            covers = false;
        }
        margin = margin.min(sub_down(overlap / 2.0, delta));
        margin = margin.min(sub_down(t.width() / 2.0, delta));
        cur = t;
    }
    covers &= cur.hi() >= range.hi() && hull.subset(range);
    let pass = covers && margin > 0.0;
    Ok(B1Verdict {
        pass,
        covers,
        delta,
        margin,
        hull,
        sets: initial.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkVerdict {
    pub covering: CoveringVerdict,
    pub cone: ConeVerdict,
}

impl LinkVerdict {
    pub fn pass(&self) -> bool {
        self.covering.pass && self.cone.pass
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequenceVerdict {
    pub pass: bool,
    pub links: Vec<LinkVerdict>,
    pub first_failure: Option<usize>,
}

/// Checks `N_0 => N_1 => ... => N_k` with cone conditions on every link.
///
/// Chains with fewer than two sets have no links and do not pass.
pub fn verify_sequence<M: MapModel + ?Sized>(m: &M, chain: &[(HSet, ConeSpec)]) -> SequenceVerdict {
    let links: Vec<LinkVerdict> = chain
        .windows(2)
        .map(|w| {
            let ((src, sc), (dst, dc)) = (&w[0], &w[1]);
            LinkVerdict {
                covering: verify_covering_dx1(m, src, dst),
                cone: verify_cone(m, src, sc, dst, dc),
            }
        })
        .collect();
    let first_failure = links.iter().position(|l| !l.pass());
    SequenceVerdict {
        pass: !links.is_empty() && first_failure.is_none(),
        links,
        first_failure,
    }
}

/// `1.01 * max|ratio|`, rounded up: the cone constant handed to the next set.
pub fn propagate_kappa(ratio: Interval) -> f64 {
    mul_up(ratio.mag(), 1.01).max(f64::MIN_POSITIVE)
}
