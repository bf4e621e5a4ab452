//! Small fixed-size interval vectors and matrices.
//!
//! Dimensions are const generics, so mixing sizes fails to compile instead of
//! failing at run time.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::interval::{Interval, IntervalError};

#[derive(Clone, Copy, PartialEq)]
pub struct IVector<const N: usize>(pub [Interval; N]);

pub type IVec3 = IVector<3>;

#[derive(Clone, Copy, PartialEq)]
pub struct IMatrix<const N: usize>(pub [[Interval; N]; N]);

pub type IMat3 = IMatrix<3>;

/// Plain binary64 3x3 matrix, row-major.
pub type Mat3 = [[f64; 3]; 3];

impl<const N: usize> IVector<N> {
    pub fn from_points(x: [f64; N]) -> Self {
        IVector(x.map(Interval::point))
    }

    pub fn from_intervals(x: [Interval; N]) -> Self {
        IVector(x)
    }

    pub fn zero() -> Self {
        IVector([Interval::ZERO; N])
    }

    pub fn midpoint(&self) -> [f64; N] {
        self.0.map(|c| c.midpoint())
    }

    /// Point box at the componentwise midpoint.
    pub fn center(&self) -> Self {
        Self::from_points(self.midpoint())
    }

    pub fn subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a.subset(*b))
    }

    pub fn hull(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            out.0[i] = self.0[i].hull(other.0[i]);
        }
        out
    }

    /// Componentwise intersection; `None` if any component is disjoint.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let mut out = *self;
        for i in 0..N {
            out.0[i] = self.0[i].intersect(other.0[i])?;
        }
        Some(out)
    }

    pub fn max_width(&self) -> f64 {
        self.0.iter().map(|c| c.width()).fold(0.0, f64::max)
    }

    pub fn contains_point(&self, x: &[f64; N]) -> bool {
        self.0.iter().zip(x).all(|(c, v)| c.contains(*v))
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.0.iter()
    }
}

impl<const N: usize> Index<usize> for IVector<N> {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl<const N: usize> IndexMut<usize> for IVector<N> {
    fn index_mut(&mut self, i: usize) -> &mut Interval {
        &mut self.0[i]
    }
}

impl<const N: usize> Add for IVector<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            out.0[i] = self.0[i] + rhs.0[i];
        }
        out
    }
}

impl<const N: usize> Sub for IVector<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            out.0[i] = self.0[i] - rhs.0[i];
        }
        out
    }
}

impl<const N: usize> fmt::Debug for IVector<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<const N: usize> Serialize for IVector<N> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter())
    }
}

impl<'de, const N: usize> Deserialize<'de> for IVector<N> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<Interval>::deserialize(d)?;
        let n = v.len();
        let arr: [Interval; N] = v
            .try_into()
            .map_err(|_| D::Error::custom(format!("expected {N} components, got {n}")))?;
        Ok(IVector(arr))
    }
}

impl<const N: usize> IMatrix<N> {
    pub fn identity() -> Self {
        let mut m = [[Interval::ZERO; N]; N];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = Interval::ONE;
        }
        IMatrix(m)
    }

    pub fn from_intervals(a: [[Interval; N]; N]) -> Self {
        IMatrix(a)
    }

    pub fn from_points(a: [[f64; N]; N]) -> Self {
        IMatrix(a.map(|row| row.map(Interval::point)))
    }

    pub fn diag(d: [f64; N]) -> Self {
        let mut m = [[Interval::ZERO; N]; N];
        for i in 0..N {
            m[i][i] = Interval::point(d[i]);
        }
        IMatrix(m)
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.0[i][j]
    }

    pub fn transpose(&self) -> Self {
        let mut t = self.0;
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        IMatrix(t)
    }

    pub fn mat_vec(&self, v: &IVector<N>) -> IVector<N> {
        let mut out = [Interval::ZERO; N];
        for (o, row) in out.iter_mut().zip(&self.0) {
            *o = dot(row, &v.0);
        }
        IVector(out)
    }

    pub fn mat_mul(&self, rhs: &Self) -> Self {
        let mut out = [[Interval::ZERO; N]; N];
        for i in 0..N {
            for j in 0..N {
                let mut s = self.0[i][0] * rhs.0[0][j];
                for k in 1..N {
                    s = s + self.0[i][k] * rhs.0[k][j];
                }
                out[i][j] = s;
            }
        }
        IMatrix(out)
    }

    pub fn subset(&self, other: &Self) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(r, s)| r.iter().zip(s).all(|(a, b)| a.subset(*b)))
    }

    pub fn contains_identity(&self) -> bool {
        Self::identity().subset(self)
    }

    pub fn midpoint(&self) -> [[f64; N]; N] {
        self.0.map(|row| row.map(|c| c.midpoint()))
    }
}

fn dot<const N: usize>(a: &[Interval; N], b: &[Interval; N]) -> Interval {
    let mut s = Interval::ZERO;
    for k in 0..N {
        s = s + a[k] * b[k];
    }
    s
}

impl<const N: usize> Sub for IMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self.0;
        for i in 0..N {
            for j in 0..N {
                out[i][j] = self.0[i][j] - rhs.0[i][j];
            }
        }
        IMatrix(out)
    }
}

impl<const N: usize> Add for IMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        for i in 0..N {
            for j in 0..N {
                out[i][j] = self.0[i][j] + rhs.0[i][j];
            }
        }
        IMatrix(out)
    }
}

impl<const N: usize> fmt::Debug for IMatrix<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

impl<const N: usize> Serialize for IMatrix<N> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|r| r.as_slice()))
    }
}

/// Point matrix-vector product `A u` in interval arithmetic.
pub fn point_mat_vec(a: &Mat3, u: &IVec3) -> IVec3 {
    IMatrix::from_points(*a).mat_vec(u)
}

/// Enclosure of `det(A)` for a point matrix.
pub fn determinant(a: &Mat3) -> Interval {
    let m = IMatrix::from_points(*a).0;
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Enclosure of `A^{-1}` via the adjugate divided by the determinant.
pub fn verified_inverse(a: &Mat3) -> Result<IMat3, IntervalError> {
    let m = IMatrix::from_points(*a).0;
    let det = determinant(a);
    if det.contains_zero() {
        return Err(IntervalError::SingularMatrix);
    }
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    // adj(A)[i][j] = cofactor(A)[j][i]
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    let mut inv = [[Interval::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            inv[i][j] = adj[i][j].checked_div(det)?;
        }
    }
    Ok(IMatrix(inv))
}
