//! Arithmetic in Lorentz-Minkowski 3-space R^3_1 with signature (-,+,+),
//! causal classification, and the isometries used to assemble surfaces:
//! reflections about non-null lines and planes and rotation about the
//! x0-axis.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::{Add, Index, Mul, Neg, Sub};

/// Default absolute tolerance for causal classification.
pub const EPS_CAUSAL: f64 = 1e-9;

/// A point or vector (x0, x1, x2) of R^3_1; x0 is the timelike coordinate.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct MinkVec3 {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
}

impl MinkVec3 {
    pub const ZERO: MinkVec3 = MinkVec3 { x0: 0.0, x1: 0.0, x2: 0.0 };

    pub fn new(x0: f64, x1: f64, x2: f64) -> Self {
        MinkVec3 { x0, x1, x2 }
    }

    pub fn from_array(a: [f64; 3]) -> Self {
        MinkVec3 { x0: a[0], x1: a[1], x2: a[2] }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x0, self.x1, self.x2]
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite()
    }

    /// Euclidean norm, used as auxiliary metric for mesh predicates.
    pub fn norm_euclid(self) -> f64 {
        (self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2).sqrt()
    }

    /// Euclidean cross product (auxiliary metric).
    pub fn cross_euclid(self, o: MinkVec3) -> MinkVec3 {
        MinkVec3::new(
            self.x1 * o.x2 - self.x2 * o.x1,
            self.x2 * o.x0 - self.x0 * o.x2,
            self.x0 * o.x1 - self.x1 * o.x0,
        )
    }

    pub fn dot_euclid(self, o: MinkVec3) -> f64 {
        self.x0 * o.x0 + self.x1 * o.x1 + self.x2 * o.x2
    }

    pub fn scale(self, s: f64) -> MinkVec3 {
        MinkVec3::new(self.x0 * s, self.x1 * s, self.x2 * s)
    }
}

impl Add for MinkVec3 {
    type Output = MinkVec3;
    fn add(self, o: MinkVec3) -> MinkVec3 {
        MinkVec3::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl Sub for MinkVec3 {
    type Output = MinkVec3;
    fn sub(self, o: MinkVec3) -> MinkVec3 {
        MinkVec3::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl Neg for MinkVec3 {
    type Output = MinkVec3;
    fn neg(self) -> MinkVec3 {
        MinkVec3::new(-self.x0, -self.x1, -self.x2)
    }
}

impl Mul<f64> for MinkVec3 {
    type Output = MinkVec3;
    fn mul(self, s: f64) -> MinkVec3 {
        self.scale(s)
    }
}

impl Index<usize> for MinkVec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        match i {
            0 => &self.x0,
            1 => &self.x1,
            2 => &self.x2,
            _ => panic!("MinkVec3 index out of range"),
        }
    }
}

/// The indefinite inner product -u0 v0 + u1 v1 + u2 v2.
pub fn minkowski_dot(u: MinkVec3, v: MinkVec3) -> f64 {
    -u.x0 * v.x0 + u.x1 * v.x1 + u.x2 * v.x2
}

/// Causal character of a vector (or of a surface patch via its tangents).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalType {
    Spacelike,
    Timelike,
    Lightlike,
}

impl CausalType {
    pub fn as_u8(self) -> u8 {
        match self {
            CausalType::Spacelike => 0,
            CausalType::Timelike => 1,
            CausalType::Lightlike => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CausalType::Spacelike => "spacelike",
            CausalType::Timelike => "timelike",
            CausalType::Lightlike => "lightlike",
        }
    }
}

/// Classify `v` by the sign of <v,v> with absolute tolerance `eps`.
pub fn causal_type(v: MinkVec3, eps: f64) -> CausalType {
    let n = minkowski_dot(v, v);
    if n.abs() <= eps {
        CausalType::Lightlike
    } else if n > 0.0 {
        CausalType::Spacelike
    } else {
        CausalType::Timelike
    }
}

/// Row-major 3x3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn apply(&self, v: MinkVec3) -> MinkVec3 {
        let a = &self.0;
        MinkVec3::new(
            a[0][0] * v.x0 + a[0][1] * v.x1 + a[0][2] * v.x2,
            a[1][0] * v.x0 + a[1][1] * v.x1 + a[1][2] * v.x2,
            a[2][0] * v.x0 + a[2][1] * v.x1 + a[2][2] * v.x2,
        )
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        let mut r = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    r[i][j] += self.0[i][k] * o.0[k][j];
                }
            }
        }
        Mat3(r)
    }

    pub fn transpose(&self) -> Mat3 {
        let a = &self.0;
        Mat3([
            [a[0][0], a[1][0], a[2][0]],
            [a[0][1], a[1][1], a[2][1]],
            [a[0][2], a[1][2], a[2][2]],
        ])
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Solve A x = rhs by Cramer's rule; None if |det| <= tol.
    pub fn solve(&self, rhs: MinkVec3, tol: f64) -> Option<MinkVec3> {
        let d = self.det();
        if d.abs() <= tol {
            return None;
        }
        let mut out = [0.0; 3];
        for j in 0..3 {
            let mut m = *self;
            for i in 0..3 {
                m.0[i][j] = rhs[i];
            }
            out[j] = m.det() / d;
        }
        Some(MinkVec3::from_array(out))
    }

    /// Deviation of A^T J A from J where J = diag(-1,1,1).
    pub fn minkowski_defect(&self) -> f64 {
        let j = Mat3([[-1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        let m = self.transpose().mul(&j).mul(&self.0.into());
        let mut worst: f64 = 0.0;
        for r in 0..3 {
            for c in 0..3 {
                worst = worst.max((m.0[r][c] - j.0[r][c]).abs());
            }
        }
        worst
    }
}

impl From<[[f64; 3]; 3]> for Mat3 {
    fn from(a: [[f64; 3]; 3]) -> Mat3 {
        Mat3(a)
    }
}

/// An affine isometry of R^3_1 stored as a linear part plus translation.
///
/// Stored in this flat form so composed assembly chains stay one matrix
/// product away from the data, never a tower of closures.
#[derive(Clone, Copy, Debug)]
pub struct Isometry {
    pub linear: Mat3,
    pub translation: MinkVec3,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        linear: Mat3::IDENTITY,
        translation: MinkVec3::ZERO,
    };

    pub fn apply(&self, p: MinkVec3) -> MinkVec3 {
        self.linear.apply(p) + self.translation
    }

    /// Apply only the linear part (for directions).
    pub fn apply_dir(&self, d: MinkVec3) -> MinkVec3 {
        self.linear.apply(d)
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            linear: self.linear.mul(&other.linear),
            translation: self.linear.apply(other.translation) + self.translation,
        }
    }

    pub fn translation(t: MinkVec3) -> Isometry {
        Isometry { linear: Mat3::IDENTITY, translation: t }
    }

    /// Rotation by pi about the line through `point` with direction `dir`.
    ///
    /// Uses the Minkowski-orthogonal decomposition x = proj_L(x) + (x - proj_L(x));
    /// requires <dir,dir> != 0.
    pub fn reflect_about_line(point: MinkVec3, dir: MinkVec3) -> Result<Isometry> {
        let dd = minkowski_dot(dir, dir);
        if dd.abs() <= EPS_CAUSAL {
            return Err(Error::NullAxis { eps: EPS_CAUSAL });
        }
        // linear part: x -> 2 <x,d> d / <d,d> - x
        let j = [-dir.x0, dir.x1, dir.x2]; // J d
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = 2.0 * dir[r] * j[c] / dd - if r == c { 1.0 } else { 0.0 };
            }
        }
        let linear = Mat3(m);
        let translation = point - linear.apply(point);
        Ok(Isometry { linear, translation })
    }

    /// Reflection about the plane through `point` with non-null normal `normal`.
    pub fn reflect_about_plane(point: MinkVec3, normal: MinkVec3) -> Result<Isometry> {
        let nn = minkowski_dot(normal, normal);
        if nn.abs() <= EPS_CAUSAL {
            return Err(Error::NullNormal { eps: EPS_CAUSAL });
        }
        // x -> x - 2 <x,n> n / <n,n>
        let j = [-normal.x0, normal.x1, normal.x2];
        let mut m = [[0.0; 3]; 3];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] = if r == c { 1.0 } else { 0.0 } - 2.0 * normal[r] * j[c] / nn;
            }
        }
        let linear = Mat3(m);
        let translation = point - linear.apply(point);
        Ok(Isometry { linear, translation })
    }

    /// Euclidean rotation in the x1x2-plane by `angle`; x0 fixed.
    pub fn rotate_x0(angle: f64) -> Isometry {
        let (s, c) = angle.sin_cos();
        Isometry {
            linear: Mat3([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]]),
            translation: MinkVec3::ZERO,
        }
    }

    /// Max deviation of the linear part from the Minkowski orthogonal group.
    pub fn minkowski_defect(&self) -> f64 {
        self.linear.minkowski_defect()
    }
}

/// Reflect `p` about the line (point, dir); convenience wrapper.
pub fn reflect_about_line(point: MinkVec3, dir: MinkVec3, p: MinkVec3) -> Result<MinkVec3> {
    Ok(Isometry::reflect_about_line(point, dir)?.apply(p))
}

/// Reflect `p` about the plane (point, normal); convenience wrapper.
pub fn reflect_about_plane(point: MinkVec3, normal: MinkVec3, p: MinkVec3) -> Result<MinkVec3> {
    Ok(Isometry::reflect_about_plane(point, normal)?.apply(p))
}

/// Rotate `p` about the x0-axis by `angle`.
pub fn rotate_x0(angle: f64, p: MinkVec3) -> MinkVec3 {
    Isometry::rotate_x0(angle).apply(p)
}
