//! The hyperelliptic curve w^2 = z^8 + b z^4 + 1 (genus 3) with b = a^4 + a^-4,
//! its marked arcs and loops, the deck transformations, and continuous
//! tracking of the w-branch along sampled paths.

use crate::error::{Error, Result};
use crate::quad::CVec3;
use num_complex::Complex64 as C64;

/// Margin kept between integration paths and branch points (in z).
pub const BRANCH_POINT_MARGIN: f64 = 1e-6;

/// Family parameter a in (0,1) together with the derived coefficient
/// b = a^4 + a^-4 (always recomputed, never stored independently).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfaceParams {
    a: f64,
    b: f64,
}

impl SurfaceParams {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) || !a.is_finite() {
            return Err(Error::OutOfRange(format!("a = {a} not in (0,1)")));
        }
        let a4 = a.powi(4);
        Ok(SurfaceParams { a, b: a4 + 1.0 / a4 })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// z^8 + b z^4 + 1.
    pub fn curve_poly(&self, z: C64) -> C64 {
        let z4 = z.powu(4);
        z4 * z4 + self.b * z4 + C64::new(1.0, 0.0)
    }

    /// Real version for z on the real or imaginary axis (argument is |z| or t).
    pub fn curve_poly_real(&self, t: f64) -> f64 {
        let t4 = t.powi(4);
        t4 * t4 + self.b * t4 + 1.0
    }

    /// The eight branch points satisfy z^4 = -a^4 or z^4 = -a^-4.
    pub fn branch_points(&self) -> [C64; 8] {
        let mut out = [C64::new(0.0, 0.0); 8];
        for (k, slot) in out.iter_mut().enumerate() {
            let radius = if k < 4 { self.a } else { 1.0 / self.a };
            let ang = std::f64::consts::FRAC_PI_4 + (k % 4) as f64 * std::f64::consts::FRAC_PI_2;
            *slot = C64::from_polar(radius, ang);
        }
        out
    }

    pub fn distance_to_branch_points(&self, z: C64) -> f64 {
        self.branch_points()
            .iter()
            .map(|p| (z - p).norm())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Construct parameters, checking the range.
pub fn make_params(a: f64) -> Result<SurfaceParams> {
    SurfaceParams::new(a)
}

/// A point (z, w) with w^2 = z^8 + b z^4 + 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SurfacePoint {
    pub z: C64,
    pub w: C64,
}

impl SurfacePoint {
    /// |w^2 - (z^8 + b z^4 + 1)| scaled by 1 + |z|^8.
    pub fn residual(&self, params: &SurfaceParams) -> f64 {
        let p = params.curve_poly(self.z);
        (self.w * self.w - p).norm() / (1.0 + self.z.norm().powi(8))
    }
}

/// The four marked arcs. C1/C2 have unbounded parameter ranges which are
/// sampled through the tangent compactification below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcId {
    C1,
    C2,
    C3,
    C4,
}

impl ArcId {
    /// Parameter range (lo, hi); infinite for C1/C2.
    pub fn range(self) -> (f64, f64) {
        match self {
            ArcId::C1 => (f64::NEG_INFINITY, 0.0),
            ArcId::C2 => (0.0, f64::INFINITY),
            ArcId::C3 => (-1.0, 1.0),
            ArcId::C4 => (-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2),
        }
    }
}

/// The two marked loops, optionally pushed forward by powers of the
/// quarter-turn deck transformation (z,w) -> (iz, w).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopSpec {
    pub id: LoopId,
    /// Number of quarter-turn applications, 0..=3.
    pub deck_power: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopId {
    Gamma1,
    Gamma2,
}

impl LoopId {
    pub fn range(self) -> (f64, f64) {
        match self {
            LoopId::Gamma1 => (f64::NEG_INFINITY, f64::INFINITY),
            LoopId::Gamma2 => (-2.0, std::f64::consts::PI),
        }
    }
}

/// Map sigma in [-1,1] to t in [-inf,inf]; the standard compactification
/// for the unbounded arc parameters.
pub fn tangent_sub(sigma: f64) -> f64 {
    (sigma * std::f64::consts::FRAC_PI_2).tan()
}

/// Evaluate an arc at parameter t, exactly as written:
/// c1 = (-it, +sqrt(P)), c2 = (t, +sqrt(P)), c3 = (-it, +sqrt(P)),
/// c4 = (e^{it}, -e^{2it} sqrt(2 cos 4t + b)); square roots positive real.
pub fn arc_point(params: &SurfaceParams, arc: ArcId, t: f64) -> Result<SurfacePoint> {
    let (lo, hi) = arc.range();
    if !(t >= lo && t <= hi) {
        return Err(Error::OutOfRange(format!("arc parameter {t} outside [{lo},{hi}]")));
    }
    let p = match arc {
        ArcId::C1 => SurfacePoint {
            z: C64::new(0.0, -t),
            w: C64::new(params.curve_poly_real(t).sqrt(), 0.0),
        },
        ArcId::C2 => SurfacePoint {
            z: C64::new(t, 0.0),
            w: C64::new(params.curve_poly_real(t).sqrt(), 0.0),
        },
        ArcId::C3 => SurfacePoint {
            z: C64::new(0.0, -t),
            w: C64::new(params.curve_poly_real(t).sqrt(), 0.0),
        },
        ArcId::C4 => {
            let z = C64::from_polar(1.0, t);
            let root = (2.0 * (4.0 * t).cos() + params.b).sqrt();
            SurfacePoint { z, w: -C64::from_polar(root, 2.0 * t) }
        }
    };
    Ok(p)
}

/// The deck transformations:
/// phi1 = (conj z, conj w), phi2 = (z, -w), phi3 = (iz, w), phi4 = (1/z, w/z^4).
pub fn deck_phi(j: u8, p: SurfacePoint) -> Result<SurfacePoint> {
    let i = C64::new(0.0, 1.0);
    let out = match j {
        1 => SurfacePoint { z: p.z.conj(), w: p.w.conj() },
        2 => SurfacePoint { z: p.z, w: -p.w },
        3 => SurfacePoint { z: i * p.z, w: p.w },
        4 => {
            if p.z.norm() == 0.0 {
                return Err(Error::PoleInput { z: p.z });
            }
            SurfacePoint { z: 1.0 / p.z, w: p.w / p.z.powu(4) }
        }
        _ => return Err(Error::OutOfRange(format!("deck index {j} not in 1..=4"))),
    };
    Ok(out)
}

/// A loop point. Gamma1 is c1 then c2 (s in [-inf,inf]); Gamma2 is
/// c3(s+1) on [-2,0] then c4(s-pi/2) on [0,pi]. The deck power applies
/// phi3 afterwards.
pub fn loop_point(params: &SurfaceParams, spec: LoopSpec, s: f64) -> Result<SurfacePoint> {
    let (lo, hi) = spec.id.range();
    if !(s >= lo && s <= hi) {
        return Err(Error::OutOfRange(format!("loop parameter {s} outside [{lo},{hi}]")));
    }
    let mut p = match spec.id {
        LoopId::Gamma1 => {
            if s <= 0.0 {
                arc_point(params, ArcId::C1, s)?
            } else {
                arc_point(params, ArcId::C2, s)?
            }
        }
        LoopId::Gamma2 => {
            if s <= 0.0 {
                arc_point(params, ArcId::C3, s + 1.0)?
            } else {
                arc_point(params, ArcId::C4, s - std::f64::consts::FRAC_PI_2)?
            }
        }
    };
    for _ in 0..(spec.deck_power % 4) {
        p = deck_phi(3, p)?;
    }
    Ok(p)
}

/// Continuously tracked branch of w along a z-path.
///
/// Nearest-root continuation: each step chooses the sign of sqrt(P(z))
/// closest to the previous w; steps are halved (up to `MAX_HALVINGS`)
/// until the choice is unambiguous.
pub struct BranchTracker<'a> {
    params: &'a SurfaceParams,
    z: C64,
    w: C64,
}

const MAX_HALVINGS: u32 = 40;

impl<'a> BranchTracker<'a> {
    /// Start at z0 with a given w0 (must satisfy the curve equation).
    pub fn start(params: &'a SurfaceParams, z0: C64, w0: C64) -> Result<Self> {
        let p = SurfacePoint { z: z0, w: w0 };
        if p.residual(params) > 1e-8 {
            return Err(Error::OutOfRange(format!(
                "w_start^2 does not match the curve at path start (residual {:.3e})",
                p.residual(params)
            )));
        }
        Ok(BranchTracker { params, z: z0, w: w0 })
    }

    pub fn current(&self) -> SurfacePoint {
        SurfacePoint { z: self.z, w: self.w }
    }

    /// Advance to z_next along the straight segment from the current z,
    /// subdividing as needed. Fails near branch points.
    pub fn advance_to(&mut self, z_next: C64) -> Result<C64> {
        self.advance_rec(z_next, 0)?;
        Ok(self.w)
    }

    fn advance_rec(&mut self, z_next: C64, depth: u32) -> Result<()> {
        let d = self.params.distance_to_branch_points(z_next);
        if d < BRANCH_POINT_MARGIN {
            return Err(Error::BranchPointProximity { dist: d, margin: BRANCH_POINT_MARGIN });
        }
        let w_new = self.params.curve_poly(z_next).sqrt();
        let keep = (w_new - self.w).norm();
        let flip = (w_new + self.w).norm();
        // unambiguous when the move is well under the branch separation 2|w|
        if keep.min(flip) < 0.5 * (self.w.norm() + w_new.norm()).max(1e-300) {
            self.w = if keep <= flip { w_new } else { -w_new };
            self.z = z_next;
            return Ok(());
        }
        if depth >= MAX_HALVINGS {
            return Err(Error::BranchPointProximity { dist: d, margin: BRANCH_POINT_MARGIN });
        }
        let mid = 0.5 * (self.z + z_next);
        self.advance_rec(mid, depth + 1)?;
        self.advance_rec(z_next, depth + 1)
    }
}

/// Continue the branch along a sampled z-path starting from w_start;
/// returns the surface points at the given samples.
pub fn continue_branch(
    params: &SurfaceParams,
    path: &[C64],
    w_start: C64,
) -> Result<Vec<SurfacePoint>> {
    if path.is_empty() {
        return Ok(Vec::new());
    }
    let mut tracker = BranchTracker::start(params, path[0], w_start)?;
    let mut out = Vec::with_capacity(path.len());
    out.push(tracker.current());
    for &z in &path[1..] {
        tracker.advance_to(z)?;
        out.push(tracker.current());
    }
    Ok(out)
}

/// The pulled-back Weierstrass integrand (-2z, 1+z^2, i(1-z^2)) dz / w
/// as a C^3 value; callers multiply by e^{i theta} and the parameter
/// derivative of z.
pub fn phi0_integrand(z: C64, w: C64) -> CVec3 {
    let i = C64::new(0.0, 1.0);
    let z2 = z * z;
    CVec3::new(-2.0 * z / w, (1.0 + z2) / w, i * (1.0 - z2) / w)
}

/// Integrand of the companion Euclidean minimal immersion,
/// (1 - z^2, i(1 + z^2), 2z) dz / w.
pub fn minimal_r3_integrand(z: C64, w: C64) -> CVec3 {
    let i = C64::new(0.0, 1.0);
    let z2 = z * z;
    CVec3::new((1.0 - z2) / w, i * (1.0 + z2) / w, 2.0 * z / w)
}
