//! The `xi` sweep and the proof certificate.

use std::time::Instant;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blender::{verify_blender_with, BlenderBlock, Construction, ZmRecord};
use crate::construction::ConstructionData;
use crate::decimal::{enclose, rational_grid, Decimal};
use crate::hyperbolic::{hyperbolicity_block, HyperbolicityBlock};
use crate::interval::Interval;

pub const CERTIFICATE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("xi_min must be greater than 1, got {0}")]
    XiMin(String),
    #[error("xi range is empty or inverted: [{0}, {1}]")]
    Range(String, String),
    #[error("xi width must be positive, got {0}")]
    Width(String),
    #[error("jobs must be at least 1")]
    Jobs,
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XiSweepConfig {
    pub xi_min: Decimal,
    pub xi_max: Decimal,
    pub width: Decimal,
    /// Worker threads; `None` uses every core.
    #[serde(skip)]
    pub jobs: Option<usize>,
}

impl Default for XiSweepConfig {
    fn default() -> Self {
        XiSweepConfig {
            xi_min: "1.01".parse().expect("literal"),
            xi_max: "1.125".parse().expect("literal"),
            width: "0.001".parse().expect("literal"),
            jobs: None,
        }
    }
}

/// One subinterval of the sweep: exact decimal ends and their enclosure.
#[derive(Debug, Clone, PartialEq)]
pub struct XiBlock {
    pub index: usize,
    pub lo: BigRational,
    pub hi: BigRational,
    pub xi: Interval,
}

impl XiSweepConfig {
    pub fn new(xi_min: &str, xi_max: &str, width: &str) -> Result<Self, ConfigError> {
        let parse = |s: &str| s.parse::<Decimal>();
        let cfg = XiSweepConfig {
            xi_min: parse(xi_min).map_err(|_| ConfigError::XiMin(xi_min.to_string()))?,
            xi_max: parse(xi_max).map_err(|_| ConfigError::Range(xi_min.to_string(), xi_max.to_string()))?,
            width: parse(width).map_err(|_| ConfigError::Width(width.to_string()))?,
            jobs: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let one = BigRational::from_integer(1.into());
        if self.xi_min.value() <= &one {
            return Err(ConfigError::XiMin(self.xi_min.to_string()));
        }
        if self.xi_min.value() >= self.xi_max.value() {
            return Err(ConfigError::Range(self.xi_min.to_string(), self.xi_max.to_string()));
        }
        if self.width.value() <= &BigRational::from_integer(0.into()) {
            return Err(ConfigError::Width(self.width.to_string()));
        }
        if self.jobs == Some(0) {
            return Err(ConfigError::Jobs);
        }
        Ok(())
    }

    /// Subintervals `[min + k w, min + (k + 1) w]`, the last one clipped at
    /// `max`. Ends are exact rationals, so a run over one subinterval sees
    /// exactly the same enclosure as the corresponding block of a longer run.
    pub fn blocks(&self) -> Vec<XiBlock> {
        rational_grid(self.xi_min.value(), self.xi_max.value(), self.width.value())
            .unwrap_or_default()
            .into_iter()
            .enumerate()
            .map(|(index, (lo, hi))| {
                let xi = Interval::new(enclose(&lo).lo(), enclose(&hi).hi()).expect("ordered grid");
                XiBlock { index, lo, hi, xi }
            })
            .collect()
    }
}

/// Which parts of the proof to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Parts {
    pub blender: bool,
    pub hyperbolicity: bool,
}

impl Parts {
    pub const ALL: Parts = Parts {
        blender: true,
        hyperbolicity: true,
    };
    pub const HYPERBOLICITY: Parts = Parts {
        blender: false,
        hyperbolicity: true,
    };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub index: usize,
    /// Exact decimal ends of the subinterval.
    pub xi_exact: [String; 2],
    pub xi: Interval,
    pub z_m: Option<ZmRecord>,
    pub blender: Option<BlenderBlock>,
    pub hyperbolicity: Option<HyperbolicityBlock>,
    pub pass: bool,
    pub failures: Vec<String>,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSettings {
    pub xi_min: Decimal,
    pub xi_max: Decimal,
    pub xi_width: Decimal,
    pub mu: Decimal,
    pub beta: Decimal,
    pub blender: bool,
    pub hyperbolicity: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub blocks: usize,
    pub passing_blocks: usize,
    pub failing_blocks: Vec<usize>,
    pub b1_verdicts: usize,
    pub covering_verdicts: usize,
    pub cone_verdicts: usize,
    pub appendix_covering_verdicts: usize,
    pub pd_verdicts: usize,
    pub failed_verdicts: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub generator: String,
    pub settings: SweepSettings,
    pub data: ConstructionData,
    pub notes: Vec<String>,
    pub summary: Summary,
    pub blocks: Vec<Block>,
    pub pass: bool,
    pub elapsed_ms: f64,
}

pub fn notes() -> Vec<String> {
    vec![
        "The mother set's cone constants are assumed equal to those of the initial sets (kappa_M = 0.02).".into(),
        "Overlap condition: every horizontal disk of the mother set moves at most delta = kappa_u * width(x) / 2 in \
         y_u, so the initial intervals shrunk by delta must cover the mother y_u range shrunk by delta."
            .into(),
        "The L-sets have two exit directions, yet the literal size rule asks the x2 image to stay inside the \
         destination x2 range. That rule cannot hold around a closed loop because x2 expands by at least xi per \
         step. Appendix coverings here require the x2 faces to map past the destination x2 bounds instead, which \
         is a covering by a straight-line homotopy to a diagonal linear map. The literal rule's outcome is \
         recorded per transition as x2_contained."
            .into(),
        "Chart centers are point values computed at the midpoint of each xi subinterval; z_M as an interval over \
         the whole subinterval is used for the residual and side conditions."
            .into(),
        "The default mother center is (3.4319, 3.2919). With the printed Y = 3.4319 the first links of both \
         excursions do not cover."
            .into(),
        "Symbols with no computed counterpart (invariant set, its stable and unstable manifolds, walls, horizontal \
         disks, the conjugacy to the shift) are conclusions of the verified conditions, not data."
            .into(),
    ]
}

fn elapsed_ms(t: Instant) -> f64 {
    (t.elapsed().as_secs_f64() * 1e3 * 1e3).round() / 1e3
}

pub fn run_block(data: &ConstructionData, xb: &XiBlock, parts: Parts) -> Block {
    let t = Instant::now();
    let xi_exact = [fmt_rational(&xb.lo), fmt_rational(&xb.hi)];
    let mut failures = Vec::new();
    let mut block = Block {
        index: xb.index,
        xi_exact,
        xi: xb.xi,
        z_m: None,
        blender: None,
        hyperbolicity: None,
        pass: false,
        failures: vec![],
        elapsed_ms: 0.0,
    };
    match Construction::build(data, xb.xi) {
        Err(e) => failures.push(format!("construction: {e}")),
        Ok(c) => {
            if !c.zm.residual_contains_zero {
                failures.push("z_M residual excludes 0".into());
            }
            if !c.zm.side_conditions {
                failures.push("z_M side conditions".into());
            }
            block.z_m = Some(c.zm.clone());
            if parts.blender {
                match verify_blender_with(&c, data) {
                    Ok(b) => {
                        failures.extend(b.failures());
                        block.blender = Some(b);
                    }
                    Err(e) => failures.push(format!("blender: {e}")),
                }
            }
            if parts.hyperbolicity {
                let h = hyperbolicity_block(&c, data);
                failures.extend(h.failures());
                block.hyperbolicity = Some(h);
            }
        }
    }
    block.pass = failures.is_empty()
        && block.z_m.as_ref().is_some_and(ZmRecord::pass)
        && (!parts.blender || block.blender.as_ref().is_some_and(|b| b.pass))
        && (!parts.hyperbolicity || block.hyperbolicity.as_ref().is_some_and(|h| h.pass));
    block.failures = failures;
    block.elapsed_ms = elapsed_ms(t);
    block
}

/// Shortest decimal text for an exact grid point.
fn fmt_rational(r: &BigRational) -> String {
    use num_bigint::BigInt;
    use num_traits::{One, Signed, Zero};
    let mut den = r.denom().clone();
    let (mut twos, mut fives) = (0usize, 0usize);
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return format!("{}/{}", r.numer(), r.denom());
    }
    let scale = twos.max(fives);
    let n = (r * BigRational::from_integer(num_traits::pow(BigInt::from(10), scale))).to_integer();
    let digits = format!("{:0>width$}", n.abs().to_string(), width = scale + 1);
    let (int, frac) = digits.split_at(digits.len() - scale);
    let sign = if n.is_negative() { "-" } else { "" };
    if scale == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{frac}")
    }
}

fn summarize(blocks: &[Block]) -> Summary {
    let mut s = Summary {
        blocks: blocks.len(),
        passing_blocks: blocks.iter().filter(|b| b.pass).count(),
        failing_blocks: blocks.iter().filter(|b| !b.pass).map(|b| b.index).collect(),
        b1_verdicts: 0,
        covering_verdicts: 0,
        cone_verdicts: 0,
        appendix_covering_verdicts: 0,
        pd_verdicts: 0,
        failed_verdicts: 0,
    };
    for b in blocks {
        if let Some(bl) = &b.blender {
            s.b1_verdicts += 1;
            s.failed_verdicts += usize::from(!bl.b1.pass);
            for l in bl.chains.iter().flat_map(|c| &c.links) {
                s.covering_verdicts += 1;
                s.cone_verdicts += 1;
                s.failed_verdicts += usize::from(!l.covering.pass) + usize::from(!l.cone.pass);
            }
        }
        if let Some(h) = &b.hyperbolicity {
            for t in &h.transitions {
                s.appendix_covering_verdicts += 1;
                s.pd_verdicts += 1;
                s.failed_verdicts += usize::from(!t.covering.pass) + usize::from(!t.pd.pass);
            }
        }
    }
    s
}

/// Runs every subinterval, in parallel, and collects the blocks in order.
pub fn sweep_xi(data: &ConstructionData, cfg: &XiSweepConfig, parts: Parts) -> Result<Certificate, ConfigError> {
    cfg.validate()?;
    let t = Instant::now();
    let xbs = cfg.blocks();
    let run = || xbs.par_iter().map(|xb| run_block(data, xb, parts)).collect::<Vec<_>>();
    let blocks = match cfg.jobs {
        None => run(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| ConfigError::Pool(e.to_string()))?
            .install(run),
    };
    let summary = summarize(&blocks);
    let pass = !blocks.is_empty() && blocks.iter().all(|b| b.pass);
    Ok(Certificate {
        schema_version: CERTIFICATE_SCHEMA_VERSION,
        generator: concat!("blendcert ", env!("CARGO_PKG_VERSION")).to_string(),
        settings: SweepSettings {
            xi_min: cfg.xi_min.clone(),
            xi_max: cfg.xi_max.clone(),
            xi_width: cfg.width.clone(),
            mu: data.mu.clone(),
            beta: data.beta.clone(),
            blender: parts.blender,
            hyperbolicity: parts.hyperbolicity,
        },
        data: data.clone(),
        notes: notes(),
        summary,
        blocks,
        pass,
        elapsed_ms: elapsed_ms(t),
    })
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    /// Failed checks across all blocks, tagged with the block's `xi` range.
    pub fn failures(&self) -> Vec<String> {
        self.blocks
            .iter()
            .flat_map(|b| {
                b.failures
                    .iter()
                    .map(move |f| format!("xi [{}, {}]: {f}", b.xi_exact[0], b.xi_exact[1]))
            })
            .collect()
    }
}
