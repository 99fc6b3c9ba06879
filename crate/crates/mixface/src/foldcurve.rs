//! The lightlike fold curve gamma_a, its timelike extension by the
//! d'Alembert midpoint formula, the height reparametrization, and the
//! convexity and immersion checks attached to them.

use crate::error::{Error, Result};
use crate::minkowski::MinkVec3;
use crate::quad::{integrate, integrate_segments, QuadOpts};
use crate::riemann::SurfaceParams;

use std::f64::consts::{FRAC_PI_2, PI};

/// xi_a(t) = 2 / sqrt(2 cos 4t + b); positive, even, with period pi/2.
pub fn xi(params: &SurfaceParams, t: f64) -> f64 {
    2.0 / (2.0 * (4.0 * t).cos() + params.b()).sqrt()
}

/// d xi / dt.
pub fn xi_prime(params: &SurfaceParams, t: f64) -> f64 {
    let den = 2.0 * (4.0 * t).cos() + params.b();
    8.0 * (4.0 * t).sin() * den.powf(-1.5)
}

const TABLE_STEPS: usize = 4096; // step pi/2048 over one 2*pi period

/// Cached quadrature of gamma_a(s) = integral of xi_a(t) (1, -cos t, -sin t)
/// and of the height function tau(s) = integral of xi_a.
///
/// The integrand is 2*pi-periodic, so prefix sums over one period plus the
/// full-period totals give uniform accuracy for all s.
pub struct FoldCurve {
    params: SurfaceParams,
    /// prefix[k] = gamma(k * h) for k = 0..=TABLE_STEPS, h = 2 pi / TABLE_STEPS
    prefix: Vec<[f64; 3]>,
    /// gamma(2 pi) (only the x0 entry is nonzero)
    period_total: [f64; 3],
    /// tau(pi/2), the x0 gained per xi-period
    tau_quarter: f64,
}

impl FoldCurve {
    pub fn new(params: SurfaceParams) -> Result<Self> {
        let h = 2.0 * PI / TABLE_STEPS as f64;
        let o = QuadOpts { tol: 1e-13, max_panels: 4096, initial_splits: 1 };
        let mut prefix = Vec::with_capacity(TABLE_STEPS + 1);
        let mut acc = [0.0f64; 3];
        prefix.push(acc);
        let integrand = |t: f64| {
            let x = xi(&params, t);
            [x, -x * t.cos(), -x * t.sin()]
        };
        for k in 0..TABLE_STEPS {
            let step: [f64; 3] =
                integrate(&integrand, k as f64 * h, (k + 1) as f64 * h, &o)?;
            acc = [acc[0] + step[0], acc[1] + step[1], acc[2] + step[2]];
            prefix.push(acc);
        }
        let period_total = acc;
        let tau_quarter = prefix[TABLE_STEPS / 4][0];
        Ok(FoldCurve { params, prefix, period_total, tau_quarter })
    }

    pub fn params(&self) -> &SurfaceParams {
        &self.params
    }

    /// gamma_a(s) for any real s.
    pub fn gamma(&self, s: f64) -> MinkVec3 {
        let period = 2.0 * PI;
        let k = (s / period).floor();
        let r = s - k * period;
        let h = period / TABLE_STEPS as f64;
        let idx = ((r / h).floor() as usize).min(TABLE_STEPS - 1);
        let s0 = idx as f64 * h;
        let o = QuadOpts { tol: 1e-13, max_panels: 4096, initial_splits: 1 };
        let integrand = |t: f64| {
            let x = xi(&self.params, t);
            [x, -x * t.cos(), -x * t.sin()]
        };
        let tail: [f64; 3] = integrate(&integrand, s0, r, &o).unwrap_or([f64::NAN; 3]);
        let base = self.prefix[idx];
        MinkVec3::new(
            k * self.period_total[0] + base[0] + tail[0],
            k * self.period_total[1] + base[1] + tail[1],
            k * self.period_total[2] + base[2] + tail[2],
        )
    }

    /// tau(s): the x0-component of gamma(s); strictly increasing.
    pub fn tau(&self, s: f64) -> f64 {
        // reduce by the pi/2 periodicity of xi for uniform accuracy
        let t_period = FRAC_PI_2;
        let k = (s / t_period).floor();
        let r = s - k * t_period;
        let o = QuadOpts { tol: 1e-13, max_panels: 4096, initial_splits: 2 };
        let frac = integrate(&|t: f64| xi(&self.params, t), 0.0, r, &o).unwrap_or(f64::NAN);
        k * self.tau_quarter + frac
    }

    /// tau(pi), the full height period.
    pub fn c_a(&self) -> f64 {
        2.0 * self.tau_quarter
    }

    /// Inverse of tau by safeguarded Newton (xi is the exact derivative).
    pub fn tau_inv(&self, height: f64) -> Result<f64> {
        let t_period = FRAC_PI_2;
        let tq = self.tau_quarter;
        let k = (height / tq).floor();
        let hr = height - k * tq; // in [0, tq)
        // solve tau(s) = hr on [0, pi/2]
        let (mut lo, mut hi) = (0.0f64, t_period);
        let mut s = hr / tq * t_period; // monotone initial guess
        for _ in 0..100 {
            let f = self.tau(s) - hr;
            if f.abs() < 1e-12 {
                return Ok(k * t_period + s);
            }
            if f > 0.0 {
                hi = s;
            } else {
                lo = s;
            }
            let step = f / xi(&self.params, s);
            let mut next = s - step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            s = next;
        }
        Err(Error::RootFindFailure(format!("tau_inv({height}) did not converge")))
    }

    /// gamma reparametrized by height: gamma~(h) = gamma(tau^{-1}(h)).
    pub fn gamma_by_height(&self, h: f64) -> Result<MinkVec3> {
        Ok(self.gamma(self.tau_inv(h)?))
    }

    /// The timelike extension f~(u,v) = (gamma(u+v) + gamma(u-v)) / 2.
    pub fn f_tilde(&self, u: f64, v: f64) -> MinkVec3 {
        (self.gamma(u + v) + self.gamma(u - v)) * 0.5
    }

    /// f checked against the height parameters:
    /// f_check(alpha, beta) = (gamma~(alpha+beta) + gamma~(alpha-beta)) / 2.
    pub fn check_f(&self, alpha: f64, beta: f64) -> Result<MinkVec3> {
        Ok((self.gamma_by_height(alpha + beta)? + self.gamma_by_height(alpha - beta)?) * 0.5)
    }

    /// (alpha, beta) = ((tau(u+v)+tau(u-v))/2, (tau(u+v)-tau(u-v))/2).
    pub fn uv_to_ab(&self, u: f64, v: f64) -> (f64, f64) {
        let tp = self.tau(u + v);
        let tm = self.tau(u - v);
        (0.5 * (tp + tm), 0.5 * (tp - tm))
    }

    /// Inverse of `uv_to_ab` through tau^{-1}.
    pub fn ab_to_uv(&self, alpha: f64, beta: f64) -> Result<(f64, f64)> {
        let sp = self.tau_inv(alpha + beta)?;
        let sm = self.tau_inv(alpha - beta)?;
        Ok((0.5 * (sp + sm), 0.5 * (sp - sm)))
    }

    /// gamma'(s) = xi(s) (1, -cos s, -sin s): lightlike for every s.
    pub fn gamma_prime(&self, s: f64) -> MinkVec3 {
        let x = xi(&self.params, s);
        MinkVec3::new(x, -x * s.cos(), -x * s.sin())
    }

    /// Signed curvature of the x1x2-projection of gamma, from the analytic
    /// first and second derivatives.
    pub fn projected_curvature(&self, s: f64) -> f64 {
        let x = xi(&self.params, s);
        let xp = xi_prime(&self.params, s);
        let (sin, cos) = s.sin_cos();
        let d1 = [-x * cos, -x * sin];
        let d2 = [-xp * cos + x * sin, -xp * sin - x * cos];
        let num = d1[0] * d2[1] - d1[1] * d2[0];
        let speed2 = d1[0] * d1[0] + d1[1] * d1[1];
        num / speed2.powf(1.5)
    }

    /// True iff gamma'(u+v) and gamma'(u-v) are linearly independent,
    /// i.e. f~ is an immersion at (u,v); fails exactly when v = 0 mod pi.
    pub fn immersion_check(&self, u: f64, v: f64) -> bool {
        let p = self.gamma_prime(u + v);
        let q = self.gamma_prime(u - v);
        let cross = p.cross_euclid(q);
        cross.norm_euclid() > 1e-9 * p.norm_euclid() * q.norm_euclid()
    }
}

/// Convenience wrapper matching the operation signature.
pub fn gamma(params: &SurfaceParams, s: f64) -> Result<MinkVec3> {
    Ok(FoldCurve::new(*params)?.gamma(s))
}

/// x2-drop of the spacelike piece along the real axis:
/// c = integral_0^1 (1-t^2)/sqrt(t^8 + b t^4 + 1) dt. The plane holding the
/// planar boundary curve of the spacelike fundamental piece is x1 - x2 = -c.
pub fn x2_offset(params: &SurfaceParams) -> Result<f64> {
    let b = params.b();
    integrate_segments(
        &|t: f64| {
            let t4 = t.powi(4);
            (1.0 - t * t) / (t4 * t4 + b * t4 + 1.0).sqrt()
        },
        &[0.0, 0.5, 1.0],
        &QuadOpts::with_tol(1e-12),
    )
}
