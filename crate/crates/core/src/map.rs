//! The Hénon-like family `f(X, Y, Z) = (Y, mu + Y^2 + beta X, xi Z + Y)` and
//! the map interface the verifiers work against.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalError};
use crate::linalg::{IMat3, IVec3};

/// A diffeomorphism of R^3 known through box enclosures.
///
/// Both methods must be inclusion monotone: a smaller input box never gives
/// a larger output.
pub trait MapModel: Sync {
    fn image(&self, z: &IVec3) -> IVec3;
    fn jacobian(&self, z: &IVec3) -> IMat3;
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("xi must be strictly greater than 1, got {0}")]
    XiNotExpanding(Interval),
    #[error("fixed-point discriminant is not positive: {0}")]
    NegativeDiscriminant(Interval),
    #[error(transparent)]
    Interval(#[from] IntervalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HenonParams {
    pub mu: Interval,
    pub beta: Interval,
    pub xi: Interval,
}

impl HenonParams {
    pub fn new(mu: Interval, beta: Interval, xi: Interval) -> Result<Self, ModelError> {
        if xi.lo() <= 1.0 {
            return Err(ModelError::XiNotExpanding(xi));
        }
        Ok(HenonParams { mu, beta, xi })
    }

    /// Parameters with a point `mu` and `beta` given as binary64 values.
    pub fn with_points(mu: f64, beta: f64, xi: Interval) -> Result<Self, ModelError> {
        Self::new(Interval::point(mu), Interval::point(beta), xi)
    }

    /// Same family at another `xi`.
    pub fn at_xi(&self, xi: Interval) -> Result<Self, ModelError> {
        Self::new(self.mu, self.beta, xi)
    }
}

impl MapModel for HenonParams {
    fn image(&self, z: &IVec3) -> IVec3 {
        henon_image(self, z)
    }

    fn jacobian(&self, z: &IVec3) -> IMat3 {
        henon_jacobian(self, z)
    }
}

pub fn henon_image(p: &HenonParams, z: &IVec3) -> IVec3 {
    let (x, y, zz) = (z[0], z[1], z[2]);
    IVec3::from_intervals([y, p.mu + y.sqr() + p.beta * x, p.xi * zz + y])
}

pub fn henon_jacobian(p: &HenonParams, z: &IVec3) -> IMat3 {
    let o = Interval::ZERO;
    let one = Interval::ONE;
    IMat3::from_intervals([[o, one, o], [p.beta, z[1] * 2.0, o], [o, one, p.xi]])
}

/// Enclosures of the fixed points `p+` and `p-`, in that order.
///
/// Both have `X = Y = rho` with `rho = (1 - beta)/2 +- sqrt((1 - beta)^2 - 4 mu)/2`
/// and `Z = rho / (1 - xi)`.
pub fn fixed_points(p: &HenonParams) -> Result<(IVec3, IVec3), ModelError> {
    let omb = Interval::ONE - p.beta;
    let disc = omb.sqr() - p.mu * 4.0;
    if !disc.certainly_positive() {
        return Err(ModelError::NegativeDiscriminant(disc));
    }
    let root = disc.sqrt()?;
    let half = Interval::point(0.5);
    let base = omb * half;
    let rho_plus = base + root * half;
    let rho_minus = base - root * half;
    let denom = Interval::ONE - p.xi;
    let point =
        |rho: Interval| -> Result<IVec3, ModelError> { Ok(IVec3::from_intervals([rho, rho, rho.checked_div(denom)?])) };
    Ok((point(rho_plus)?, point(rho_minus)?))
}

/// A constant linear map `z -> M z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap(pub IMat3);

impl LinearMap {
    pub fn diag(d: [f64; 3]) -> Self {
        LinearMap(IMat3::diag(d))
    }

    pub fn identity() -> Self {
        LinearMap(IMat3::identity())
    }
}

impl MapModel for LinearMap {
    fn image(&self, z: &IVec3) -> IVec3 {
        self.0.mat_vec(z)
    }

    fn jacobian(&self, _z: &IVec3) -> IMat3 {
        self.0
    }
}
