//! Whole-sweep behaviour: determinism, independence of blocks, refinement
//! and failure localization.

use blendcert_core::certificate::{sweep_xi, Certificate, Parts, XiSweepConfig};
use blendcert_core::construction::ConstructionData;
use blendcert_core::hset::ConeSpec;
use blendcert_core::{verify_sequence, Chart, HSet, IVec3, Interval, LinearMap};
use serde_json::Value;

fn run(lo: &str, hi: &str, w: &str, jobs: Option<usize>) -> Certificate {
    let mut cfg = XiSweepConfig::new(lo, hi, w).unwrap();
    cfg.jobs = jobs;
    sweep_xi(&ConstructionData::default(), &cfg, Parts::ALL).unwrap()
}

/// JSON with every `elapsed_ms` removed.
fn untimed(v: &mut Value) {
    match v {
        Value::Object(m) => {
            m.remove("elapsed_ms");
            m.values_mut().for_each(untimed);
        }
        Value::Array(a) => a.iter_mut().for_each(untimed),
        _ => {}
    }
}

fn json(c: &Certificate) -> Value {
    let mut v = serde_json::to_value(c).unwrap();
    untimed(&mut v);
    v
}

#[test]
fn reruns_are_identical_apart_from_timing() {
    let a = run("1.1", "1.104", "0.001", None);
    let b = run("1.1", "1.104", "0.001", Some(1));
    assert_eq!(json(&a), json(&b));
    assert!(a.pass);
}

#[test]
fn single_block_equals_block_of_full_sweep() {
    let full = run("1.01", "1.125", "0.001", None);
    assert_eq!(full.blocks.len(), 115);
    assert!(full.pass, "{:?}", full.failures());
    let one = run("1.1", "1.101", "0.001", None);
    let mut a = serde_json::to_value(&full.blocks[90]).unwrap();
    let mut b = serde_json::to_value(&one.blocks[0]).unwrap();
    untimed(&mut a);
    untimed(&mut b);
    a["index"] = Value::Null;
    b["index"] = Value::Null;
    assert_eq!(full.blocks[90].xi_exact, ["1.1".to_string(), "1.101".to_string()]);
    assert_eq!(a, b);
}

#[test]
fn halving_the_width_keeps_passing() {
    let coarse = run("1.05", "1.053", "0.001", None);
    let fine = run("1.05", "1.053", "0.0005", None);
    assert!(coarse.pass && fine.pass);
    assert_eq!(fine.blocks.len(), 2 * coarse.blocks.len());
    for (k, b) in fine.blocks.iter().enumerate() {
        let parent = &coarse.blocks[k / 2];
        assert!(b.xi.subset(parent.xi));
        let (zf, zc) = (b.z_m.as_ref().unwrap(), parent.z_m.as_ref().unwrap());
        assert!(zf.z_m.subset(zc.z_m));
    }
}

#[test]
fn failure_is_localized_past_the_proven_range() {
    let cert = run("1.19", "1.21", "0.001", None);
    assert!(!cert.pass);
    assert_eq!(cert.blocks.len(), 20);
    assert!(!cert.summary.failing_blocks.is_empty());
    let failures = cert.failures();
    assert!(
        failures
            .iter()
            .any(|f| f.contains("N_14_") && f.ends_with("=> M: covering")),
        "{failures:?}"
    );
    let b = cert.blocks.iter().find(|b| b.xi_exact[0] == "1.2").unwrap();
    assert!(!b.pass);
    let bl = b.blender.as_ref().unwrap();
    assert!(bl.links_passed < bl.links);
    assert!(bl
        .chains
        .iter()
        .filter(|c| c.branch == 1)
        .any(|c| c.first_failure == Some(4)));
}

#[test]
fn printed_anchor_fails_first_links() {
    let data = ConstructionData::printed_anchor();
    let cfg = XiSweepConfig::new("1.1", "1.101", "0.001").unwrap();
    let cert = sweep_xi(&data, &cfg, Parts::ALL).unwrap();
    assert!(!cert.pass);
    let f = cert.failures();
    for c in [0, 17, 49] {
        assert!(
            f.iter()
                .any(|x| x.ends_with(&format!("N_10_{c} => N_11_{c}: covering"))),
            "{c}"
        );
    }
    // the hyperbolicity loops do not depend on the initial cover
    let h = cert.blocks[0].hyperbolicity.as_ref().unwrap();
    assert!(h.transitions.iter().all(|t| t.pd.pass));
}

#[test]
fn hyperbolicity_only_sweep() {
    let cfg = XiSweepConfig::new("1.01", "1.125", "0.001").unwrap();
    let cert = sweep_xi(&ConstructionData::default(), &cfg, Parts::HYPERBOLICITY).unwrap();
    assert!(cert.pass);
    assert!(cert.blocks.iter().all(|b| b.blender.is_none()));
    assert_eq!(cert.summary.pd_verdicts, 115 * 9);
    assert_eq!(cert.summary.covering_verdicts, 0);
}

#[test]
fn sequence_reports_identity_link() {
    let unit = IVec3::from_intervals([Interval::new(-1.0, 1.0).unwrap(); 3]);
    let u = HSet::with_dx1("U", Chart::identity(), unit).unwrap();
    // chart matching the map exactly: the transition into it is the identity
    let v_chart = Chart::new([[3.0, 0.0, 0.0], [0.0, 0.5, 0.0], [0.0, 0.0, 0.5]], IVec3::zero()).unwrap();
    let v = HSet::with_dx1("V", v_chart, unit).unwrap();
    let f = LinearMap::diag([3.0, 0.5, 0.5]);
    let k = ConeSpec::uniform(0.5).unwrap();
    let s = verify_sequence(&f, &[(u.clone(), k), (u.clone(), k), (v, k)]);
    assert!(!s.pass);
    assert_eq!(s.first_failure, Some(1));
    assert!(s.links[0].pass());
    assert!(!verify_sequence(&f, &[(u.clone(), k)]).pass);
}

#[test]
fn invalid_configs() {
    for (lo, hi, w) in [
        ("1.2", "1.1", "0.001"),
        ("0.99", "1.1", "0.001"),
        ("1.01", "1.1", "-1"),
        ("1.01", "abc", "0.001"),
    ] {
        assert!(XiSweepConfig::new(lo, hi, w).is_err(), "{lo} {hi} {w}");
    }
    let cfg = XiSweepConfig {
        jobs: Some(0),
        ..XiSweepConfig::default()
    };
    assert!(sweep_xi(&ConstructionData::default(), &cfg, Parts::ALL).is_err());
}
