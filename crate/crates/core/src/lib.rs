//! Validated interval verification of blenders in the Hénon-like family
//! `f(X, Y, Z) = (Y, mu + Y^2 + beta X, xi Z + Y)`.

mod rounding;

pub mod blender;
pub mod certificate;
pub mod construction;
pub mod decimal;
pub mod hset;
pub mod hyperbolic;
pub mod interval;
pub mod linalg;
pub mod map;
pub mod report;
pub mod verify;

pub use hset::{exit_faces, transition_image, transition_jacobian, Chart, ConeSpec, HSet, Side};
pub use interval::{Interval, IntervalError};
pub use linalg::{verified_inverse, IMat3, IMatrix, IVec3, IVector, Mat3};
pub use map::{fixed_points, henon_image, henon_jacobian, HenonParams, LinearMap, MapModel};
pub use verify::{
    verify_b1_overlap, verify_cone, verify_covering_appendix, verify_covering_dx1, verify_sequence,
    verify_strong_hyperbolicity, B1Verdict, ConeVerdict, CoveringVerdict, PdVerdict, QForm, X2Rule,
};
