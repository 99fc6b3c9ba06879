//! Pointwise evaluation of the spacelike maximal immersion and its
//! companion Euclidean minimal immersion, singular-set analysis on |z| = 1,
//! and finite-difference verification of conformality and zero mean
//! curvature.

use crate::error::{Error, Result};
use crate::minkowski::{minkowski_dot, MinkVec3};
use crate::quad::{integrate_segments, CVec3, QuadOpts, QuadValue};
use crate::riemann::{phi0_integrand, SurfaceParams, BRANCH_POINT_MARGIN};
use num_complex::Complex64 as C64;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Which singular points the surface has for a given associate angle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SingularityClass {
    ConeLike,
    Fold,
    CuspidalEdge,
    Other,
}

/// Evaluator for f_{a,theta} = Re int Phi_theta with base point z = 0 on
/// the sheet w(0) = +1, integrating radially along the real axis and then
/// along a circular arc. Radial prefix integrals are cached on a fixed
/// grid so meshes and repeated stencils stay cheap.
pub struct MaxfaceEvaluator {
    params: SurfaceParams,
    theta: f64,
    /// prefix integrals of Phi_0 along the real axis at r = k * RADIAL_STEP
    radial_prefix: Vec<CVec3>,
}

const RADIAL_GRID: usize = 512;
const RADIAL_STEP: f64 = 1.0 / RADIAL_GRID as f64;

impl MaxfaceEvaluator {
    pub fn new(params: SurfaceParams, theta: f64) -> Result<Self> {
        let b = params.b();
        let o = QuadOpts { tol: 1e-13, max_panels: 256, initial_splits: 1 };
        let mut radial_prefix = Vec::with_capacity(RADIAL_GRID + 1);
        let mut acc = CVec3::ZERO;
        radial_prefix.push(acc);
        let f = |t: f64| {
            let t4 = t.powi(4);
            let w = C64::new((t4 * t4 + b * t4 + 1.0).sqrt(), 0.0);
            phi0_integrand(C64::new(t, 0.0), w)
        };
        for k in 0..RADIAL_GRID {
            let seg = integrate_segments(&f, &[k as f64 * RADIAL_STEP, (k + 1) as f64 * RADIAL_STEP], &o)?;
            acc = acc.add(seg);
            radial_prefix.push(acc);
        }
        Ok(MaxfaceEvaluator { params, theta, radial_prefix })
    }

    pub fn params(&self) -> &SurfaceParams {
        &self.params
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Complex integral of Phi_0 from 0 to z along the radial-then-angular
    /// path; the surface point is Re(e^{i theta} * this).
    pub fn integral_phi0(&self, z: C64) -> Result<CVec3> {
        let r = z.norm();
        if r > 1.0 + 1e-12 {
            return Err(Error::OutOfRange(format!("|z| = {r} > 1")));
        }
        if r == 0.0 {
            return Ok(CVec3::ZERO);
        }
        let b = self.params.b();
        let o = QuadOpts { tol: 1e-12, max_panels: 1 << 14, initial_splits: 2 };
        // radial part: cached prefix plus adaptive remainder
        let k = ((r / RADIAL_STEP).floor() as usize).min(RADIAL_GRID - 1);
        let f = |t: f64| {
            let t4 = t.powi(4);
            let w = C64::new((t4 * t4 + b * t4 + 1.0).sqrt(), 0.0);
            phi0_integrand(C64::new(t, 0.0), w)
        };
        let mut acc = self.radial_prefix[k]
            .add(integrate_segments(&f, &[k as f64 * RADIAL_STEP, r], &o)?);
        // angular part with branch tracking along the arc
        let phi = z.arg();
        if phi != 0.0 {
            let w_start = C64::new(self.params.curve_poly_real(r).sqrt(), 0.0);
            acc = acc.add(arc_integral(&self.params, r, 0.0, phi, w_start)?.0);
        }
        Ok(acc)
    }

    /// The spacelike immersion value in R^3_1.
    pub fn eval(&self, z: C64) -> Result<MinkVec3> {
        let v = self.integral_phi0(z)?;
        let rot = C64::from_polar(1.0, self.theta);
        let re = v.mul_c(rot).re();
        Ok(MinkVec3::from_array(re))
    }

    /// The companion Euclidean minimal immersion with the same data,
    /// (1-G^2, i(1+G^2), 2G) e^{i theta} dz/w, as a Euclidean 3-vector.
    pub fn eval_minimal_r3(&self, z: C64) -> Result<[f64; 3]> {
        let v = self.integral_phi0(z)?;
        let rot = C64::from_polar(1.0, self.theta);
        let i = C64::new(0.0, 1.0);
        let m = CVec3::new(-i * v.0[2], i * v.0[1], -v.0[0]);
        Ok(m.mul_c(rot).re())
    }

    /// Value at the ramification corner z = a e^{i pi/4} through the
    /// diagonal path, where the 1/sqrt endpoint is removed by the
    /// substitution rho = a - sigma^2.
    pub fn corner_integral_phi0(&self) -> Result<CVec3> {
        let a = self.params.a();
        let e = C64::from_polar(1.0, FRAC_PI_4);
        let f = |sig: f64| {
            let rho = a - sig * sig;
            // w = sqrt(a^4 - rho^4) * sqrt(1/a^4 - rho^4) on the diagonal,
            // with (a^4 - rho^4) = (a - rho)(a^3 + a^2 rho + a rho^2 + rho^3)
            let cubic = a * a * a + a * a * rho + a * rho * rho + rho * rho * rho;
            let g = (cubic * (1.0 / a.powi(4) - rho.powi(4))).sqrt();
            let z = e * rho;
            // dz = e * drho = e * (-2 sigma) dsigma; 1/sqrt(a-rho) = 1/sigma
            phi0_integrand(z, C64::new(g, 0.0)).mul_c(e * 2.0)
        };
        integrate_segments(&f, &[0.0, a.sqrt()], &QuadOpts::with_tol(1e-12))
    }

    pub fn corner_point(&self) -> Result<MinkVec3> {
        let v = self.corner_integral_phi0()?;
        let rot = C64::from_polar(1.0, self.theta);
        Ok(MinkVec3::from_array(v.mul_c(rot).re()))
    }
}

/// Integrate Phi_0 along the arc of radius r from angle phi0 to phi1,
/// tracking the w-branch; returns the integral and the end w.
pub fn arc_integral(
    params: &SurfaceParams,
    r: f64,
    phi0: f64,
    phi1: f64,
    w_start: C64,
) -> Result<(CVec3, C64)> {
    if phi0 == phi1 {
        return Ok((CVec3::ZERO, w_start));
    }
    // phase 1: march left to right, bisecting until each step's branch
    // choice is unambiguous; every accepted node's w derives from the
    // already-continued left value
    let mut angles = vec![phi0];
    let mut ws = vec![w_start];
    march(params, r, phi0, w_start, phi1, 0, &mut angles, &mut ws)?;
    // phase 2: adaptive quadrature per sub-interval; inside each one the
    // correct branch is the root nearest the linear interpolation of the
    // endpoint w values
    let o = QuadOpts { tol: 1e-12 / angles.len() as f64, max_panels: 1 << 14, initial_splits: 1 };
    let mut total = CVec3::ZERO;
    for k in 0..angles.len() - 1 {
        let (a0, a1) = (angles[k], angles[k + 1]);
        let (w0, w1) = (ws[k], ws[k + 1]);
        let f = |phi: f64| {
            let z = C64::from_polar(r, phi);
            let t = (phi - a0) / (a1 - a0);
            let w_ref = w0 * (1.0 - t) + w1 * t;
            let w = nearest_root_to(params.curve_poly(z).sqrt(), w_ref);
            let dz = C64::new(0.0, 1.0) * z;
            phi0_integrand(z, w).mul_c(dz)
        };
        total = total.add(integrate_segments(&f, &[a0, a1], &o)?);
    }
    Ok((total, ws[ws.len() - 1]))
}

#[allow(clippy::too_many_arguments)]
fn march(
    params: &SurfaceParams,
    r: f64,
    a0: f64,
    w0: C64,
    a1: f64,
    depth: u32,
    angles: &mut Vec<f64>,
    ws: &mut Vec<C64>,
) -> Result<()> {
    let z1 = C64::from_polar(r, a1);
    let d = params.distance_to_branch_points(z1);
    if d < BRANCH_POINT_MARGIN {
        return Err(Error::BranchPointProximity { dist: d, margin: BRANCH_POINT_MARGIN });
    }
    let w1 = nearest_root(params, z1, w0);
    let close = (w1 - w0).norm() <= 0.25 * (w0.norm() + w1.norm());
    if close && (a1 - a0).abs() < 0.35 {
        angles.push(a1);
        ws.push(w1);
        return Ok(());
    }
    if depth >= 48 {
        return Err(Error::BranchPointProximity { dist: d, margin: BRANCH_POINT_MARGIN });
    }
    let mid = 0.5 * (a0 + a1);
    march(params, r, a0, w0, mid, depth + 1, angles, ws)?;
    let wm = *ws.last().unwrap();
    march(params, r, mid, wm, a1, depth + 1, angles, ws)
}

fn nearest_root(params: &SurfaceParams, z: C64, w_ref: C64) -> C64 {
    nearest_root_to(params.curve_poly(z).sqrt(), w_ref)
}

fn nearest_root_to(w: C64, w_ref: C64) -> C64 {
    if (w - w_ref).norm() <= (w + w_ref).norm() {
        w
    } else {
        -w
    }
}

/// dG/(G^2 eta_theta) evaluated on the singular set z = e^{it} with the
/// surface branch of w: equals e^{-i theta} sqrt(2 cos 4t + b).
pub fn singular_criterion(params: &SurfaceParams, theta: f64, t: f64) -> C64 {
    let root = (2.0 * (4.0 * t).cos() + params.b()).sqrt();
    C64::from_polar(root, -theta)
}

/// Surface branch of w on |z| = 1 (the branch continued from w(0) = +1):
/// w(e^{it}) = + e^{2it} sqrt(2 cos 4t + b).
pub fn w_on_circle(params: &SurfaceParams, t: f64) -> C64 {
    let root = (2.0 * (4.0 * t).cos() + params.b()).sqrt();
    C64::from_polar(root, 2.0 * t)
}

const CLASSIFY_GRID: usize = 4096;
const ANGLE_TOL: f64 = 1e-12;

/// theta = 0 gives cone-like points, theta = pi/2 gives folds, and every
/// other member of the family has cuspidal edges only; for those the
/// criterion Im(dG/(G^2 eta)) != 0 is verified on a dense grid.
pub fn classify_singularities(params: &SurfaceParams, theta: f64) -> Result<SingularityClass> {
    let th = theta.rem_euclid(std::f64::consts::PI);
    if th.abs() < ANGLE_TOL || (std::f64::consts::PI - th) < ANGLE_TOL {
        return Ok(SingularityClass::ConeLike);
    }
    if (th - FRAC_PI_2).abs() < ANGLE_TOL {
        return Ok(SingularityClass::Fold);
    }
    for k in 0..CLASSIFY_GRID {
        let t = 2.0 * std::f64::consts::PI * k as f64 / CLASSIFY_GRID as f64;
        let im = singular_criterion(params, th, t).im;
        if im == 0.0 {
            return Err(Error::CriterionViolation(format!(
                "Im(criterion) vanished at t = {t} for theta = {theta}"
            )));
        }
    }
    Ok(SingularityClass::CuspidalEdge)
}

/// Central-difference conformality defect at z:
/// returns (<f_x,f_x> - <f_y,f_y>, <f_x,f_y>); both are O(h^2) on the
/// immersed part.
pub fn conformality_residual(
    ev: &MaxfaceEvaluator,
    z: C64,
    h: f64,
) -> Result<(f64, f64)> {
    let fx = (ev.eval(z + h)? - ev.eval(z - h)?) * (0.5 / h);
    let iy = C64::new(0.0, h);
    let fy = (ev.eval(z + iy)? - ev.eval(z - iy)?) * (0.5 / h);
    Ok((minkowski_dot(fx, fx) - minkowski_dot(fy, fy), minkowski_dot(fx, fy)))
}

/// First fundamental form quantities by central differences.
fn stencil(f: &dyn Fn(C64) -> Result<MinkVec3>, z: C64, h: f64) -> Result<[MinkVec3; 6]> {
    let e = |dx: f64, dy: f64| f(z + C64::new(dx, dy));
    let c = e(0.0, 0.0)?;
    let fx = (e(h, 0.0)? - e(-h, 0.0)?) * (0.5 / h);
    let fy = (e(0.0, h)? - e(0.0, -h)?) * (0.5 / h);
    let fxx = (e(h, 0.0)? + e(-h, 0.0)? - c * 2.0) * (1.0 / (h * h));
    let fyy = (e(0.0, h)? + e(0.0, -h)? - c * 2.0) * (1.0 / (h * h));
    let fxy = (e(h, h)? - e(h, -h)? - e(-h, h)? + e(-h, -h)?) * (0.25 / (h * h));
    Ok([fx, fy, fxx, fyy, fxy, c])
}

/// |H| for any spacelike patch given as a map z -> R^3_1, by central
/// differences; used with the evaluator and with synthetic test patches.
pub fn mean_curvature_of_patch(
    f: &dyn Fn(C64) -> Result<MinkVec3>,
    z: C64,
    h: f64,
) -> Result<f64> {
    let [fx, fy, fxx, fyy, fxy, _] = stencil(f, z, h)?;
    let e = minkowski_dot(fx, fx);
    let ff = minkowski_dot(fx, fy);
    let g = minkowski_dot(fy, fy);
    // Minkowski normal: J (fx x fy); timelike for a spacelike patch
    let n_e = fx.cross_euclid(fy);
    let n = MinkVec3::new(-n_e.x0, n_e.x1, n_e.x2);
    let nn = minkowski_dot(n, n);
    if nn >= 0.0 {
        return Err(Error::OutOfRange("patch is not spacelike at the stencil".into()));
    }
    let unit = n * (1.0 / (-nn).sqrt());
    let l = minkowski_dot(fxx, unit);
    let m = minkowski_dot(fxy, unit);
    let nq = minkowski_dot(fyy, unit);
    let denom = 2.0 * (e * g - ff * ff);
    Ok(((l * g - 2.0 * m * ff + nq * e) / denom).abs())
}

/// |H| of the maximal immersion at z by finite differences.
pub fn mean_curvature_residual(ev: &MaxfaceEvaluator, z: C64, h: f64) -> Result<f64> {
    mean_curvature_of_patch(&|zz| ev.eval(zz), z, h)
}

/// Smallest singular value of the differential at z, estimated by central
/// differences; vanishes linearly at the fold |z| = 1.
pub fn min_singular_value(ev: &MaxfaceEvaluator, z: C64, h: f64) -> Result<f64> {
    let fx = (ev.eval(z + h)? - ev.eval(z - h)?) * (0.5 / h);
    let iy = C64::new(0.0, h);
    let fy = (ev.eval(z + iy)? - ev.eval(z - iy)?) * (0.5 / h);
    // Euclidean Gram matrix singular values
    let a = fx.dot_euclid(fx);
    let b = fx.dot_euclid(fy);
    let c = fy.dot_euclid(fy);
    let tr = a + c;
    let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
    Ok((0.5 * (tr - disc)).max(0.0).sqrt())
}
