//! Loop integrals of the Weierstrass forms, the four q-values with their
//! dual closed forms, the two 3x4 period matrices, and the lattices the
//! period columns must land in.

use crate::error::{Error, Result};
use crate::minkowski::MinkVec3;
use crate::quad::{integrate_segments, CVec3, QuadOpts, QuadValue};
use crate::riemann::{ArcId, LoopId, LoopSpec, SurfaceParams};
use num_complex::Complex64 as C64;
use serde::Serialize;

/// Which immersion the 1-form generates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormVariant {
    /// (-2G, 1+G^2, i(1-G^2)) eta_theta: spacelike maximal immersion in R^3_1.
    Maxface,
    /// (1-G^2, i(1+G^2), 2G) eta_theta: companion minimal immersion in R^3.
    MinimalR3,
}

/// A Weierstrass form e^{i theta} (...) dz/w on the curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeierstrassForm {
    pub theta: f64,
    pub variant: FormVariant,
}

impl WeierstrassForm {
    pub fn maxface(theta: f64) -> Self {
        WeierstrassForm { theta, variant: FormVariant::Maxface }
    }

    pub fn minimal_r3(theta: f64) -> Self {
        WeierstrassForm { theta, variant: FormVariant::MinimalR3 }
    }
}

/// The MinimalR3 components are a fixed complex-linear image of the
/// Maxface components: (M1, M2, M3) = (-i F3, i F2, -F1).
fn to_minimal_r3(v: CVec3) -> CVec3 {
    let i = C64::new(0.0, 1.0);
    CVec3::new(-i * v.0[2], i * v.0[1], -v.0[0])
}

/// A path the period integrator understands.
#[derive(Clone, Copy, Debug)]
pub enum FormPath {
    Loop(LoopSpec),
    Arc(ArcId),
}

fn opts() -> QuadOpts {
    QuadOpts::with_tol(1e-11)
}

/// sqrt(t^8 + b t^4 + 1) for real t.
fn w_real(b: f64, t: f64) -> f64 {
    let t4 = t.powi(4);
    (t4 * t4 + b * t4 + 1.0).sqrt()
}

/// sqrt(2 cos 4t + b).
fn w_circ(b: f64, t: f64) -> f64 {
    (2.0 * (4.0 * t).cos() + b).sqrt()
}

/// Loop integral of Phi_0 over (phi3)^deck ∘ gamma_k, as an exact complex
/// 3-vector. The unbounded c1/c2 ranges are folded to [0,1] through
/// t -> 1/t, which maps the integrands onto the same polynomial.
pub fn loop_integral_phi0(params: &SurfaceParams, spec: LoopSpec) -> Result<CVec3> {
    let b = params.b();
    let m = C64::new(0.0, 1.0).powu(spec.deck_power as u32 % 4);
    let m2 = m * m;
    let i = C64::new(0.0, 1.0);
    let o = opts();
    match spec.id {
        LoopId::Gamma1 => {
            // c1 outer: t in (-inf,-1], folded via t = -1/u, u: 0 -> 1
            let f_outer_in = |u: f64| {
                let wl = w_real(b, u);
                CVec3::new(
                    -2.0 * m2 * u / wl,
                    -i * m * (u * u - m2) / wl,
                    m * (u * u + m2) / wl,
                )
            };
            // c1 inner: t in [-1, 0]
            let f_c1 = |t: f64| {
                let wl = w_real(b, t);
                CVec3::new(
                    2.0 * m2 * t / wl,
                    -i * m * (1.0 - m2 * t * t) / wl,
                    m * (1.0 + m2 * t * t) / wl,
                )
            };
            // c2 inner: t in [0, 1]
            let f_c2 = |t: f64| {
                let wl = w_real(b, t);
                CVec3::new(
                    -2.0 * m2 * t / wl,
                    m * (1.0 + m2 * t * t) / wl,
                    i * m * (1.0 - m2 * t * t) / wl,
                )
            };
            // c2 outer: t in [1, inf), folded via t = 1/u, u: 1 -> 0
            let f_outer_out = |u: f64| {
                let wl = w_real(b, u);
                CVec3::new(
                    -2.0 * m2 * u / wl,
                    m * (u * u + m2) / wl,
                    i * m * (u * u - m2) / wl,
                )
            };
            let mut acc = integrate_segments(&f_outer_in, &[0.0, 1.0], &o)?;
            acc = acc.add(integrate_segments(&f_c1, &[-1.0, 0.0], &o)?);
            acc = acc.add(integrate_segments(&f_c2, &[0.0, 1.0], &o)?);
            acc = acc.add(integrate_segments(&f_outer_out, &[0.0, 1.0], &o)?);
            Ok(acc)
        }
        LoopId::Gamma2 => {
            let f_c3 = |t: f64| {
                let wl = w_real(b, t);
                CVec3::new(
                    2.0 * m2 * t / wl,
                    -i * m * (1.0 - m2 * t * t) / wl,
                    m * (1.0 + m2 * t * t) / wl,
                )
            };
            let f_c4 = |t: f64| {
                let r = w_circ(b, t);
                let e_m = C64::from_polar(1.0, -t);
                let e_p = C64::from_polar(1.0, t);
                CVec3::new(
                    2.0 * i * m2 / r,
                    -i * m * (e_m + m2 * e_p) / r,
                    m * (e_m - m2 * e_p) / r,
                )
            };
            let mut acc = integrate_segments(&f_c3, &[-1.0, 0.0, 1.0], &o)?;
            let h = std::f64::consts::FRAC_PI_2;
            acc = acc.add(integrate_segments(&f_c4, &[-h, 0.0, h], &o)?);
            Ok(acc)
        }
    }
}

fn add(a: CVec3, b: CVec3) -> CVec3 {
    use crate::quad::QuadValue;
    a.add(b)
}

/// Integral of a single arc's Phi_0 pullback (used for cross checks and
/// by `integrate_form` with an Arc path).
pub fn arc_integral_phi0(params: &SurfaceParams, arc: ArcId) -> Result<CVec3> {
    let b = params.b();
    let i = C64::new(0.0, 1.0);
    let o = opts();
    let one = C64::new(1.0, 0.0);
    match arc {
        ArcId::C1 => {
            let outer = |u: f64| {
                let wl = w_real(b, u);
                CVec3::new((-2.0 * u / wl) * one, -i * (u * u - one) / wl, (u * u + one) / wl)
            };
            let inner = |t: f64| {
                let wl = w_real(b, t);
                CVec3::new((2.0 * t / wl) * one, -i * (1.0 - t * t) / wl, (1.0 + t * t) * one / wl)
            };
            Ok(add(
                integrate_segments(&outer, &[0.0, 1.0], &o)?,
                integrate_segments(&inner, &[-1.0, 0.0], &o)?,
            ))
        }
        ArcId::C2 => {
            let inner = |t: f64| {
                let wl = w_real(b, t);
                CVec3::new((-2.0 * t / wl) * one, (1.0 + t * t) * one / wl, i * (1.0 - t * t) / wl)
            };
            let outer = |u: f64| {
                let wl = w_real(b, u);
                CVec3::new((-2.0 * u / wl) * one, (u * u + one) / wl, i * (u * u - one) / wl)
            };
            Ok(add(
                integrate_segments(&inner, &[0.0, 1.0], &o)?,
                integrate_segments(&outer, &[0.0, 1.0], &o)?,
            ))
        }
        ArcId::C3 => {
            let f = |t: f64| {
                let wl = w_real(b, t);
                CVec3::new((2.0 * t / wl) * one, -i * (1.0 - t * t) / wl, (1.0 + t * t) * one / wl)
            };
            integrate_segments(&f, &[-1.0, 0.0, 1.0], &o)
        }
        ArcId::C4 => {
            let f = |t: f64| {
                let r = w_circ(b, t);
                let e_m = C64::from_polar(1.0, -t);
                let e_p = C64::from_polar(1.0, t);
                CVec3::new(2.0 * i / r, -i * (e_m + e_p) / r, (e_m - e_p) / r)
            };
            let h = std::f64::consts::FRAC_PI_2;
            integrate_segments(&f, &[-h, 0.0, h], &o)
        }
    }
}

/// Full complex integral of the requested form along a loop or arc;
/// the real part is the surface displacement.
pub fn integrate_form(params: &SurfaceParams, form: &WeierstrassForm, path: FormPath) -> Result<CVec3> {
    let base = match path {
        FormPath::Loop(spec) => loop_integral_phi0(params, spec)?,
        FormPath::Arc(arc) => arc_integral_phi0(params, arc)?,
    };
    let rotated = base.mul_c(C64::from_polar(1.0, form.theta));
    Ok(match form.variant {
        FormVariant::Maxface => rotated,
        FormVariant::MinimalR3 => to_minimal_r3(rotated),
    })
}

/// The four positive constants from the period computation.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct QValues {
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub q4: f64,
}

impl QValues {
    pub fn as_array(&self) -> [f64; 4] {
        [self.q1, self.q2, self.q3, self.q4]
    }
}

const CROSS_CHECK_TOL: f64 = 1e-8;

/// Integrate g over [lo, hi) + a tail [hi, inf) via t = hi + u/(1-u).
fn with_tail(g: &dyn Fn(f64) -> f64, pts: &[f64], o: &QuadOpts) -> Result<f64> {
    let finite = integrate_segments(&|t| g(t), pts, o)?;
    let hi = *pts.last().unwrap();
    let tail_f = |u: f64| {
        let om = 1.0 - u;
        g(hi + u / om) / (om * om)
    };
    // stop just short of u=1; the integrands decay like 1/t^2 so the
    // remainder beyond t ~ 1e12 is far below tolerance
    let tail = integrate_segments(&tail_f, &[0.0, 1.0 - 1e-12], o)?;
    Ok(finite + tail)
}

/// q1..q4 from their first closed forms, cross-checked against the second
/// forms (finite-interval integrals) where the latter exist; returns the
/// finite-form values for q1..q3 and the infinite-form value for q4.
pub fn q_values(params: &SurfaceParams) -> Result<QValues> {
    let b = params.b();
    let o = opts();
    let pts = &[0.0, 0.7, 0.9, 1.0, 1.1, 1.4];

    // stable rational-quartic integrands (scaled for large s)
    let big = 1e3;
    let q1_inf_f = |s: f64| {
        if s.abs() < big {
            4.0 / ((b + 2.0) * s.powi(4) - 2.0 * (b - 6.0) * s * s + b + 2.0).sqrt()
        } else {
            let r = 1.0 / (s * s);
            4.0 * r / ((b + 2.0) - 2.0 * (b - 6.0) * r + (b + 2.0) * r * r).sqrt()
        }
    };
    let q2_inf_f = |s: f64| {
        if s.abs() < big {
            1.0 / (s.powi(4) + s * s + (b + 2.0) / 16.0).sqrt()
        } else {
            let r = 1.0 / (s * s);
            r / (1.0 + r + (b + 2.0) / 16.0 * r * r).sqrt()
        }
    };
    let q3_inf_f = |s: f64| {
        if s.abs() < big {
            4.0 / ((b + 2.0) * s.powi(4) + 2.0 * (b - 6.0) * s * s + b + 2.0).sqrt()
        } else {
            let r = 1.0 / (s * s);
            4.0 * r / ((b + 2.0) + 2.0 * (b - 6.0) * r + (b + 2.0) * r * r).sqrt()
        }
    };
    let q4_inf_f = |s: f64| {
        if s.abs() < big {
            1.0 / (s.powi(4) - s * s + (b + 2.0) / 16.0).sqrt()
        } else {
            let r = 1.0 / (s * s);
            r / (1.0 - r + (b + 2.0) / 16.0 * r * r).sqrt()
        }
    };

    let q1_inf = with_tail(&q1_inf_f, pts, &o)?;
    let q2_inf = with_tail(&q2_inf_f, pts, &o)?;
    let q3_inf = with_tail(&q3_inf_f, pts, &o)?;
    let q4 = with_tail(&q4_inf_f, pts, &o)?;

    let q1_fin = integrate_segments(&|t: f64| 8.0 * t / w_real(b, t), &[0.0, 0.3, 1.0], &o)?;
    let q2_fin =
        integrate_segments(&|t: f64| 2.0 * (1.0 + t * t) / w_real(b, t), &[0.0, 0.3, 1.0], &o)?;
    let h = std::f64::consts::FRAC_PI_2;
    let q3_fin = integrate_segments(&|t: f64| 2.0 / w_circ(b, t), &[-h, 0.0, h], &o)?;

    for (name, a, bb) in [("q1", q1_inf, q1_fin), ("q2", q2_inf, q2_fin), ("q3", q3_inf, q3_fin)] {
        let rel = (a - bb).abs() / bb.abs().max(1e-300);
        if rel > CROSS_CHECK_TOL {
            return Err(Error::CrossCheckFailure { what: name.into(), rel, tol: CROSS_CHECK_TOL });
        }
    }
    Ok(QValues { q1: q1_fin, q2: q2_fin, q3: q3_fin, q4 })
}

/// 3x4 real matrix, columns indexed by the deck power of the loop.
pub type PeriodMatrix = [[f64; 4]; 3];

/// Column j of P_k(theta): Re(e^{i theta} ∮_{(phi3)^j ∘ gamma_k} Phi_0),
/// by direct integration of each rotated loop.
pub fn period_matrix(params: &SurfaceParams, k: u8, theta: f64) -> Result<PeriodMatrix> {
    let id = match k {
        1 => LoopId::Gamma1,
        2 => LoopId::Gamma2,
        _ => return Err(Error::OutOfRange(format!("period matrix index {k} not in {{1,2}}"))),
    };
    let rot = C64::from_polar(1.0, theta);
    let mut out = [[0.0; 4]; 3];
    for j in 0..4u8 {
        let z = loop_integral_phi0(params, LoopSpec { id, deck_power: j })?;
        for r in 0..3 {
            out[r][j as usize] = (z.0[r] * rot).re;
        }
    }
    Ok(out)
}

/// P_k(theta) through the linearity identity
/// P_k(theta) = cos(theta) P_k(0) + sin(theta) P_k(pi/2).
pub fn period_matrix_via_identity(
    p0: &PeriodMatrix,
    p_half: &PeriodMatrix,
    theta: f64,
) -> PeriodMatrix {
    let (s, c) = theta.sin_cos();
    let mut out = [[0.0; 4]; 3];
    for r in 0..3 {
        for j in 0..4 {
            out[r][j] = c * p0[r][j] + s * p_half[r][j];
        }
    }
    out
}

pub fn matrix_max_diff(a: &PeriodMatrix, b: &PeriodMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for r in 0..3 {
        for j in 0..4 {
            worst = worst.max((a[r][j] - b[r][j]).abs());
        }
    }
    worst
}

pub fn matrix_column(m: &PeriodMatrix, j: usize) -> MinkVec3 {
    MinkVec3::new(m[0][j], m[1][j], m[2][j])
}

/// A rank-3 lattice in R^3_1 with a membership tolerance.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Lattice3 {
    pub generators: [MinkVec3; 3],
    pub tol: f64,
}

impl Lattice3 {
    pub fn new(generators: [MinkVec3; 3]) -> Result<Self> {
        let scale = generators.iter().map(|g| g.norm_euclid()).fold(0.0, f64::max);
        let det = det3(&generators);
        if det.abs() <= 1e-12 * scale.powi(3).max(1e-300) {
            return Err(Error::DegenerateLattice { det });
        }
        Ok(Lattice3 { generators, tol: 1e-7 * scale })
    }

    /// Integer coordinates of `v` if it lies in the lattice within `tol`.
    pub fn contains(&self, v: MinkVec3) -> Option<[i64; 3]> {
        let coef = solve3(&self.generators, v)?;
        let rounded = [coef[0].round(), coef[1].round(), coef[2].round()];
        let mut resid = MinkVec3::ZERO;
        for k in 0..3 {
            resid = resid + self.generators[k] * rounded[k];
        }
        resid = resid - v;
        if resid.norm_euclid() <= self.tol {
            Some([rounded[0] as i64, rounded[1] as i64, rounded[2] as i64])
        } else {
            None
        }
    }
}

fn det3(g: &[MinkVec3; 3]) -> f64 {
    g[0].x0 * (g[1].x1 * g[2].x2 - g[1].x2 * g[2].x1)
        - g[1].x0 * (g[0].x1 * g[2].x2 - g[0].x2 * g[2].x1)
        + g[2].x0 * (g[0].x1 * g[1].x2 - g[0].x2 * g[1].x1)
}

/// Solve sum_k c_k g_k = v for the coefficient vector (columns are generators).
fn solve3(g: &[MinkVec3; 3], v: MinkVec3) -> Option<[f64; 3]> {
    let d = det3(g);
    let scale = g.iter().map(|x| x.norm_euclid()).fold(0.0, f64::max);
    if d.abs() <= 1e-12 * scale.powi(3).max(1e-300) {
        return None;
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        let mut m = *g;
        m[k] = v;
        out[k] = det3(&m) / d;
    }
    Some(out)
}

/// Lattice generated by (q1,0,0), (0,q2,0), (0,0,q2).
pub fn lattice_lambda(q: &QValues) -> Result<Lattice3> {
    Lattice3::new([
        MinkVec3::new(q.q1, 0.0, 0.0),
        MinkVec3::new(0.0, q.q2, 0.0),
        MinkVec3::new(0.0, 0.0, q.q2),
    ])
}

/// Lattice generated by (q3,q4,0), (q3,0,q4), (q3,0,-q4).
pub fn lattice_lambda_prime(q: &QValues) -> Result<Lattice3> {
    Lattice3::new([
        MinkVec3::new(q.q3, q.q4, 0.0),
        MinkVec3::new(q.q3, 0.0, q.q4),
        MinkVec3::new(q.q3, 0.0, -q.q4),
    ])
}

/// Everything the periods pipeline produces for one parameter value.
#[derive(Clone, Debug, Serialize)]
pub struct PeriodTable {
    pub a: f64,
    pub b: f64,
    pub q: [f64; 4],
    #[serde(rename = "P1_0")]
    pub p1_0: PeriodMatrix,
    #[serde(rename = "P2_0")]
    pub p2_0: PeriodMatrix,
    #[serde(rename = "P1_half")]
    pub p1_half: PeriodMatrix,
    #[serde(rename = "P2_half")]
    pub p2_half: PeriodMatrix,
}

/// Compute the full period table at parameter a (filling the matrices at
/// theta = 0 and theta = pi/2).
pub fn period_table(params: &SurfaceParams) -> Result<PeriodTable> {
    let q = q_values(params)?;
    let h = std::f64::consts::FRAC_PI_2;
    Ok(PeriodTable {
        a: params.a(),
        b: params.b(),
        q: q.as_array(),
        p1_0: period_matrix(params, 1, 0.0)?,
        p2_0: period_matrix(params, 2, 0.0)?,
        p1_half: period_matrix(params, 1, h)?,
        p2_half: period_matrix(params, 2, h)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::riemann::make_params;
    use approx::assert_abs_diff_eq;

    fn schwarz_a() -> f64 {
        (3.0f64.sqrt() - 1.0) / 2.0f64.sqrt()
    }

    #[test]
    fn q_dual_forms_agree() {
        // frozen oracle values from 25-digit quadrature of the stated forms
        let params = make_params(schwarz_a()).unwrap();
        let q = q_values(&params).unwrap();
        assert_abs_diff_eq!(q.q1, 2.156515647499643, epsilon = 1e-10);
        assert_abs_diff_eq!(q.q2, 1.685750354812596, epsilon = 1e-10);
        assert_abs_diff_eq!(q.q3, 1.685750354812596, epsilon = 1e-10);
        assert_abs_diff_eq!(q.q4, 2.156515647499643, epsilon = 1e-10);

        let params = make_params(0.1).unwrap();
        let q = q_values(&params).unwrap();
        assert_abs_diff_eq!(q.q1, 0.2119326951417532, epsilon = 1e-10);
        assert_abs_diff_eq!(q.q2, 0.3691205099036280, epsilon = 1e-10);
        assert_abs_diff_eq!(q.q3, 0.0628318532288755, epsilon = 1e-10);
        assert_abs_diff_eq!(q.q4, 0.3725093622529705, epsilon = 1e-10);

        let params = make_params(0.9).unwrap();
        let q = q_values(&params).unwrap();
        assert_abs_diff_eq!(q.q1, 3.107069137702854, epsilon = 1e-9);
        assert_abs_diff_eq!(q.q2, 2.203119930590053, epsilon = 1e-9);
        assert_abs_diff_eq!(q.q3, 5.829605725279510, epsilon = 1e-9);
        assert_abs_diff_eq!(q.q4, 5.109621775895298, epsilon = 1e-9);
    }

    #[test]
    fn q_positive_on_grid() {
        for k in 1..=19 {
            let a = 0.05 * k as f64;
            let q = q_values(&make_params(a).unwrap()).unwrap();
            for v in q.as_array() {
                assert!(v > 0.0, "q not positive at a={a}");
            }
        }
    }

    #[test]
    fn loop_integrals_match_q_structure() {
        for a in [0.1, 0.346014, 0.52, 0.9] {
            let params = make_params(a).unwrap();
            let q = q_values(&params).unwrap();
            let g1 = loop_integral_phi0(&params, LoopSpec { id: LoopId::Gamma1, deck_power: 0 }).unwrap();
            let g2 = loop_integral_phi0(&params, LoopSpec { id: LoopId::Gamma2, deck_power: 0 }).unwrap();
            // gamma1 -> (-q1, q2, q2), purely real
            assert_abs_diff_eq!(g1.0[0].re, -q.q1, epsilon = 1e-6 * q.q1);
            assert_abs_diff_eq!(g1.0[1].re, q.q2, epsilon = 1e-6 * q.q2);
            assert_abs_diff_eq!(g1.0[2].re, q.q2, epsilon = 1e-6 * q.q2);
            assert!(g1.im().iter().all(|x| x.abs() < 1e-9));
            // gamma2 -> (i q3, -i q4, q2)
            assert_abs_diff_eq!(g2.0[0].im, q.q3, epsilon = 1e-6 * q.q3);
            assert_abs_diff_eq!(g2.0[1].im, -q.q4, epsilon = 1e-6 * q.q4);
            assert_abs_diff_eq!(g2.0[2].re, q.q2, epsilon = 1e-6 * q.q2);
            assert!(g2.0[0].re.abs() < 1e-9 && g2.0[1].re.abs() < 1e-9 && g2.0[2].im.abs() < 1e-9);
        }
    }

    #[test]
    fn deck_power_acts_by_the_symmetry_matrix() {
        // M3 = [[-1,0,0],[0,0,1],[0,-1,0]] acting on the loop integral
        let params = make_params(0.52).unwrap();
        for id in [LoopId::Gamma1, LoopId::Gamma2] {
            let base = loop_integral_phi0(&params, LoopSpec { id, deck_power: 0 }).unwrap();
            let mut pred = base;
            for j in 1..4u8 {
                pred = CVec3::new(-pred.0[0], pred.0[2], -pred.0[1]);
                let direct = loop_integral_phi0(&params, LoopSpec { id, deck_power: j }).unwrap();
                for r in 0..3 {
                    assert_abs_diff_eq!((direct.0[r] - pred.0[r]).norm(), 0.0, epsilon = 1e-8);
                }
            }
        }
    }

    #[test]
    fn period_matrices_structure() {
        let params = make_params(0.52).unwrap();
        let q = q_values(&params).unwrap();
        let p1_0 = period_matrix(&params, 1, 0.0).unwrap();
        let p2_0 = period_matrix(&params, 2, 0.0).unwrap();
        let h = std::f64::consts::FRAC_PI_2;
        let p1_h = period_matrix(&params, 1, h).unwrap();
        let p2_h = period_matrix(&params, 2, h).unwrap();
        // P1(0) follows the (-q1 q1 -q1 q1 / q2 q2 -q2 -q2 / q2 -q2 -q2 q2) pattern
        let sgn1: [[f64; 4]; 3] = [[-1.0, 1.0, -1.0, 1.0], [1.0, 1.0, -1.0, -1.0], [1.0, -1.0, -1.0, 1.0]];
        let mags1 = [q.q1, q.q2, q.q2];
        for r in 0..3 {
            for j in 0..4 {
                assert_abs_diff_eq!(p1_0[r][j], sgn1[r][j] * mags1[r], epsilon = 1e-8);
            }
        }
        // P2(0): first row zero, (0 q2 0 -q2 / q2 0 -q2 0) below
        let p2_expect: [[f64; 4]; 3] =
            [[0.0; 4], [0.0, q.q2, 0.0, -q.q2], [q.q2, 0.0, -q.q2, 0.0]];
        for r in 0..3 {
            for j in 0..4 {
                assert_abs_diff_eq!(p2_0[r][j], p2_expect[r][j], epsilon = 1e-8);
            }
        }
        // P1(pi/2) = O
        for r in 0..3 {
            for j in 0..4 {
                assert!(p1_h[r][j].abs() < 1e-9);
            }
        }
        // P2(pi/2) pattern: (-q3 q3 -q3 q3 / q4 0 -q4 0 / 0 -q4 0 q4)
        let p2h_expect: [[f64; 4]; 3] = [
            [-q.q3, q.q3, -q.q3, q.q3],
            [q.q4, 0.0, -q.q4, 0.0],
            [0.0, -q.q4, 0.0, q.q4],
        ];
        for r in 0..3 {
            for j in 0..4 {
                assert_abs_diff_eq!(p2_h[r][j], p2h_expect[r][j], epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn theta_linearity() {
        let params = make_params(0.43).unwrap();
        let h = std::f64::consts::FRAC_PI_2;
        for k in [1u8, 2] {
            let p0 = period_matrix(&params, k, 0.0).unwrap();
            let ph = period_matrix(&params, k, h).unwrap();
            // deterministic pseudo-random thetas
            for n in 0..10 {
                let theta = (n as f64 * 0.317 + 0.05) % h;
                let direct = period_matrix(&params, k, theta).unwrap();
                let via = period_matrix_via_identity(&p0, &ph, theta);
                assert!(matrix_max_diff(&direct, &via) < 1e-8);
            }
        }
    }

    #[test]
    fn lattice_membership() {
        let params = make_params(schwarz_a()).unwrap();
        let q = q_values(&params).unwrap();
        let lam = lattice_lambda(&q).unwrap();
        let lamp = lattice_lambda_prime(&q).unwrap();
        // (-q1, q2, q2) has coordinates (-1, 1, 1)
        assert_eq!(lam.contains(MinkVec3::new(-q.q1, q.q2, q.q2)), Some([-1, 1, 1]));
        // generators have unit coordinates; zero is a member
        assert_eq!(lam.contains(lam.generators[0]), Some([1, 0, 0]));
        assert_eq!(lam.contains(MinkVec3::ZERO), Some([0, 0, 0]));
        // a generator scaled by 1.5 is not a member
        assert_eq!(lam.contains(lam.generators[0] * 1.5), None);
        // all 8 columns at theta=0 lie in Lambda with coordinates in {-1,0,1}
        let p1_0 = period_matrix(&params, 1, 0.0).unwrap();
        let p2_0 = period_matrix(&params, 2, 0.0).unwrap();
        for m in [&p1_0, &p2_0] {
            for j in 0..4 {
                let c = lam.contains(matrix_column(m, j)).expect("column in Lambda");
                assert!(c.iter().all(|&x| x.abs() <= 1));
            }
        }
        // all 8 columns at theta=pi/2 lie in Lambda'
        let h = std::f64::consts::FRAC_PI_2;
        let p1_h = period_matrix(&params, 1, h).unwrap();
        let p2_h = period_matrix(&params, 2, h).unwrap();
        for m in [&p1_h, &p2_h] {
            for j in 0..4 {
                let c = lamp.contains(matrix_column(m, j)).expect("column in Lambda'");
                assert!(c.iter().all(|&x| x.abs() <= 1));
            }
        }
        // degenerate generators are rejected
        assert!(Lattice3::new([
            MinkVec3::new(1.0, 0.0, 0.0),
            MinkVec3::new(2.0, 0.0, 0.0),
            MinkVec3::new(0.0, 0.0, 1.0),
        ])
        .is_err());
    }

    #[test]
    fn minimal_r3_linear_map() {
        // the two variants are linked pointwise by a constant matrix, so
        // the loop periods must be too
        let params = make_params(0.52).unwrap();
        let spec = LoopSpec { id: LoopId::Gamma1, deck_power: 0 };
        let f_max = integrate_form(&params, &WeierstrassForm::maxface(0.3), FormPath::Loop(spec)).unwrap();
        let f_min = integrate_form(&params, &WeierstrassForm::minimal_r3(0.3), FormPath::Loop(spec)).unwrap();
        let i = C64::new(0.0, 1.0);
        assert_abs_diff_eq!((f_min.0[0] - -i * f_max.0[2]).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((f_min.0[1] - i * f_max.0[1]).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((f_min.0[2] - -f_max.0[0]).norm(), 0.0, epsilon = 1e-12);
    }
}
