//! The blender construction for one `xi` subinterval: `z_M`, chart centers,
//! initial and propagated sets, the overlap condition and the covering
//! chains back to the mother set.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::ConstructionData;
use crate::hset::{transition_image, Chart, ConeSpec, GeometryError, HSet};
use crate::interval::{Interval, IntervalError};
use crate::linalg::IVec3;
use crate::map::{HenonParams, ModelError};
use crate::verify::{
    cone_image, cone_ratios, propagate_kappa, verify_b1_overlap, verify_sequence, B1Error, B1Verdict, ConeVerdict,
    CoveringVerdict,
};

#[derive(Debug, Error)]
pub enum BlenderError {
    #[error("z_M denominator 2 - xi^n1 - xi^n2 contains 0 for xi in {0}")]
    SingularZm(Interval),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    B1(#[from] B1Error),
}

/// `z_M` and the two side conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZmRecord {
    pub xi: Interval,
    pub z_m: Interval,
    /// `(l1(z_M) + l2(z_M))/2 - z_M`
    pub residual: Interval,
    pub residual_contains_zero: bool,
    /// `l1(z_M) - z_M`, required to be negative.
    pub l1_minus_z: Interval,
    /// `l2(z_M) - z_M`, required to be positive.
    pub l2_minus_z: Interval,
    pub side_conditions: bool,
}

impl ZmRecord {
    pub fn pass(&self) -> bool {
        self.residual_contains_zero && self.side_conditions
    }
}

/// `l = xi^n z + c(xi)` for the `Z` recursion `z_{k+1} = xi z_k + Y_k`
/// run over the anchors `ys`.
fn affine_excursion(xi: Interval, ys: &[f64]) -> (Interval, Interval) {
    let c = ys.iter().fold(Interval::ZERO, |acc, &y| xi * acc + y);
    (xi.powi(ys.len() as u32), c)
}

/// Solves `(l1(z) + l2(z))/2 = z` in closed form and checks
/// `l1(z_M) < z_M < l2(z_M)`.
pub fn solve_zm(data: &ConstructionData, xi: Interval) -> Result<ZmRecord, BlenderError> {
    solve_zm_with(&data.anchor_ys(0), &data.anchor_ys(1), xi)
}

/// [`solve_zm`] for explicit anchor `Y` lists, mother first.
pub fn solve_zm_with(ys1: &[f64], ys2: &[f64], xi: Interval) -> Result<ZmRecord, BlenderError> {
    let (p1, c1) = affine_excursion(xi, ys1);
    let (p2, c2) = affine_excursion(xi, ys2);
    let denom = Interval::point(2.0) - p1 - p2;
    if denom.contains_zero() {
        return Err(BlenderError::SingularZm(xi));
    }
    let z = (c1 + c2).checked_div(denom)?;
    let l1 = p1 * z + c1;
    let l2 = p2 * z + c2;
    let residual = (l1 + l2) * 0.5 - z;
    // Each side condition as one expression, so z enters once.
    let l1_minus_z = (p1 - 1.0) * z + c1;
    let l2_minus_z = (p2 - 1.0) * z + c2;
    Ok(ZmRecord {
        xi,
        z_m: z,
        residual,
        residual_contains_zero: residual.contains_zero(),
        l1_minus_z,
        l2_minus_z,
        side_conditions: l1_minus_z.certainly_negative() && l2_minus_z.certainly_positive(),
    })
}

/// Chart centers `p_ab = (X_ab, Y_ab, z_ab)` with `z_a0 = z_M` and
/// `z_a(b+1) = xi z_ab + Y_ab`. Indexed `[branch][step]`, step 0 being `p_M`.
pub fn build_centers(data: &ConstructionData, xi: Interval, zm: Interval) -> Vec<Vec<IVec3>> {
    (0..2)
        .map(|a| {
            let mut z = zm;
            (0..data.branch_len(a))
                .map(|b| {
                    let [x, y] = data.anchor(a, b);
                    let p = IVec3::from_intervals([Interval::point(x), Interval::point(y), z]);
                    z = xi * z + y;
                    p
                })
                .collect()
        })
        .collect()
}

pub fn set_label(a: usize, b: usize, c: usize) -> String {
    format!("N_{}{}_{}", a + 1, b, c)
}

/// Everything the checks need for one subinterval.
#[derive(Debug, Clone)]
pub struct Construction {
    pub params: HenonParams,
    pub zm: ZmRecord,
    /// `z_M` at the midpoint of the subinterval, used for the chart centers.
    pub zm_center: f64,
    pub mother: HSet,
    /// `[branch][step]`, step 0 being the mother chart.
    pub charts: Vec<Vec<Chart>>,
}

impl Construction {
    /// Charts are centered at point values computed at the midpoint of
    /// `xi`. Any fixed choice of center gives valid h-sets; an interval
    /// center would throw away the correlation between `xi` and `z_M`.
    pub fn build(data: &ConstructionData, xi: Interval) -> Result<Self, BlenderError> {
        let params = HenonParams::new(data.mu_enclosure(), data.beta_enclosure(), xi)?;
        let zm = solve_zm(data, xi)?;
        let xm = Interval::point(xi.midpoint());
        let zm_center = solve_zm(data, xm)?.z_m.midpoint();
        let centers = build_centers(data, xm, Interval::point(zm_center));
        let mut charts = Vec::with_capacity(2);
        for (a, row) in centers.iter().enumerate() {
            let mut v = Vec::with_capacity(row.len());
            for (b, p) in row.iter().enumerate() {
                v.push(Chart::new(*data.matrix(a, b), p.center())?);
            }
            charts.push(v);
        }
        let mother = data.mother_set(charts[0][0].center().center());
        Ok(Construction {
            params,
            zm,
            zm_center,
            mother,
            charts,
        })
    }

    pub fn chart(&self, a: usize, b: usize) -> &Chart {
        &self.charts[a][b]
    }
}

/// The 2 x `subdivisions` initial sets in the mother chart, first branch first.
pub fn build_initial_hsets(data: &ConstructionData, mother: &HSet) -> Vec<HSet> {
    let mb = mother.local_box;
    (0..2)
        .flat_map(|a| (0..data.subdivisions).map(move |c| (a, c)))
        .map(|(a, c)| {
            let b = IVec3::from_intervals([mb[0], data.initial_interval(a, c), mb[2]]);
            HSet::with_dx1(set_label(a, 0, c), mother.chart.clone(), b).expect("initial box has interior")
        })
        .collect()
}

/// Smallest stored `y_u` interval around a propagated image: the hull grown
/// by 1% of its width on each side, plus one ulp.
pub fn propagation_inflate(hull: Interval) -> Interval {
    hull.inflate(0.01 * hull.width()).widen_ulp()
}

/// Chains `N_a0c, N_a1c, ..., N_akc` for every initial set, in the order of
/// `initial`.
pub fn propagate_hsets(c: &Construction, data: &ConstructionData, initial: &[HSet]) -> Vec<Vec<HSet>> {
    let mb = c.mother.local_box;
    initial
        .iter()
        .enumerate()
        .map(|(i, first)| {
            let a = i / data.subdivisions;
            let idx = i % data.subdivisions;
            let mut chain = vec![first.clone()];
            for b in 1..data.branch_len(a) {
                let template = HSet::with_dx1("", c.chart(a, b).clone(), mb).expect("mother box");
                let prev = chain.last().expect("nonempty");
                let img = transition_image(&c.params, prev, &template, &prev.local_box);
                let yu = propagation_inflate(img[1]);
                let bx = IVec3::from_intervals([mb[0], yu, mb[2]]);
                chain.push(HSet::with_dx1(set_label(a, b, idx), c.chart(a, b).clone(), bx).expect("box"));
            }
            chain
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkRecord {
    pub src: String,
    pub dst: String,
    /// Cone constants assigned to the destination.
    pub kappa_dst: ConeSpec,
    pub covering: CoveringVerdict,
    pub cone: ConeVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainRecord {
    pub branch: usize,
    pub c: usize,
    pub pass: bool,
    pub first_failure: Option<usize>,
    pub links: Vec<LinkRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlenderBlock {
    pub mother_center: [f64; 3],
    pub b1: B1Verdict,
    pub links: usize,
    pub links_passed: usize,
    pub chains: Vec<ChainRecord>,
    pub pass: bool,
}

impl BlenderBlock {
    /// One line per failed check.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.b1.pass {
            out.push(format!("B1: margin {}", self.b1.margin));
        }
        for ch in &self.chains {
            for l in &ch.links {
                if !l.covering.pass {
                    out.push(format!("{} => {}: covering", l.src, l.dst));
                }
                if !l.cone.pass {
                    out.push(format!("{} => {}: cone", l.src, l.dst));
                }
            }
        }
        out
    }
}

/// Cone constants along `sets`: the initial set gets `kappa`, each later set
/// gets 1.01 times the achieved ratio of the link into it, and the last set
/// (the mother set) gets `mother_cone`.
pub fn propagate_cones(params: &HenonParams, sets: &[HSet], first: ConeSpec, mother_cone: ConeSpec) -> Vec<ConeSpec> {
    let mut cones = vec![first];
    for (i, w) in sets.windows(2).enumerate() {
        let last = i + 2 == sets.len();
        let next = if last {
            mother_cone
        } else {
            let src_cone = cones[i];
            match cone_ratios(&cone_image(params, &w[0], &src_cone, &w[1])) {
                Some((ru, rs)) => ConeSpec::new(propagate_kappa(ru), propagate_kappa(rs)).unwrap_or(src_cone),
                None => src_cone,
            }
        };
        cones.push(next);
    }
    cones
}

fn check_chain(c: &Construction, data: &ConstructionData, sets: Vec<HSet>, index: usize) -> ChainRecord {
    let mut sets = sets;
    sets.push(c.mother.clone());
    let cones = propagate_cones(&c.params, &sets, data.initial_cone(), data.mother_cone());
    let chain: Vec<(HSet, ConeSpec)> = sets.into_iter().zip(cones).collect();
    let verdict = verify_sequence(&c.params, &chain);
    let links = verdict
        .links
        .into_iter()
        .enumerate()
        .map(|(k, l)| LinkRecord {
            src: chain[k].0.label.clone(),
            dst: chain[k + 1].0.label.clone(),
            kappa_dst: chain[k + 1].1,
            covering: l.covering,
            cone: l.cone,
        })
        .collect();
    ChainRecord {
        branch: index / data.subdivisions + 1,
        c: index % data.subdivisions,
        pass: verdict.pass,
        first_failure: verdict.first_failure,
        links,
    }
}

/// All covering chains plus the overlap condition for one construction.
pub fn verify_blender_with(c: &Construction, data: &ConstructionData) -> Result<BlenderBlock, BlenderError> {
    let initial = build_initial_hsets(data, &c.mother);
    let b1 = verify_b1_overlap(&c.mother, &data.mother_cone(), &initial)?;
    let chains_sets = propagate_hsets(c, data, &initial);
    let chains: Vec<ChainRecord> = chains_sets
        .into_par_iter()
        .enumerate()
        .map(|(i, sets)| check_chain(c, data, sets, i))
        .collect();
    let links = chains.iter().map(|ch| ch.links.len()).sum();
    let links_passed = chains
        .iter()
        .flat_map(|ch| &ch.links)
        .filter(|l| l.covering.pass && l.cone.pass)
        .count();
    let pass = b1.pass && chains.iter().all(|ch| ch.pass);
    let center = c.mother.chart.center().midpoint();
    Ok(BlenderBlock {
        mother_center: center,
        b1,
        links,
        links_passed,
        chains,
        pass,
    })
}

pub fn verify_blender(data: &ConstructionData, xi: Interval) -> Result<(Construction, BlenderBlock), BlenderError> {
    let c = Construction::build(data, xi)?;
    let block = verify_blender_with(&c, data)?;
    Ok((c, block))
}
