//! Python bindings: the main scalar operations, period data, surface
//! evaluation and the assembly/verification entry points.

use mixface::analysis;
use mixface::assembly;
use mixface::foldcurve::{self, FoldCurve};
use mixface::maxface::{self, MaxfaceEvaluator};
use mixface::periods;
use mixface::riemann::{self, LoopId, LoopSpec};
use num_complex::Complex64 as C64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn params(a: f64) -> PyResult<riemann::SurfaceParams> {
    riemann::make_params(a).map_err(err)
}

/// b = a^4 + a^-4 for a in (0,1).
#[pyfunction]
fn b_of(a: f64) -> PyResult<f64> {
    Ok(params(a)?.b())
}

/// The parameter with b = 14.
#[pyfunction]
fn classical_parameter() -> f64 {
    mixface::classical_parameter()
}

/// (q1, q2, q3, q4), cross-checked against their dual closed forms.
#[pyfunction]
fn q_values(a: f64) -> PyResult<(f64, f64, f64, f64)> {
    let q = periods::q_values(&params(a)?).map_err(err)?;
    Ok((q.q1, q.q2, q.q3, q.q4))
}

/// The 3x4 period matrix P_k(theta), k in {1, 2}.
#[pyfunction]
fn period_matrix(a: f64, k: u8, theta: f64) -> PyResult<Vec<Vec<f64>>> {
    let m = periods::period_matrix(&params(a)?, k, theta).map_err(err)?;
    Ok(m.iter().map(|row| row.to_vec()).collect())
}

/// Complex loop integral of the base form over (phi3)^deck . gamma_k,
/// returned as three (re, im) pairs.
#[pyfunction]
fn loop_integral(a: f64, k: u8, deck: u8) -> PyResult<Vec<(f64, f64)>> {
    let id = match k {
        1 => LoopId::Gamma1,
        2 => LoopId::Gamma2,
        _ => return Err(PyValueError::new_err("k must be 1 or 2")),
    };
    let v = periods::loop_integral_phi0(&params(a)?, LoopSpec { id, deck_power: deck }).map_err(err)?;
    Ok(v.0.iter().map(|c| (c.re, c.im)).collect())
}

/// The spacelike immersion at z = re + i*im (base point 0).
#[pyfunction]
fn eval_maxface(a: f64, theta: f64, re: f64, im: f64) -> PyResult<(f64, f64, f64)> {
    let ev = MaxfaceEvaluator::new(params(a)?, theta).map_err(err)?;
    let p = ev.eval(C64::new(re, im)).map_err(err)?;
    Ok((p.x0, p.x1, p.x2))
}

/// The companion Euclidean minimal immersion at z.
#[pyfunction]
fn eval_minimal_r3(a: f64, theta: f64, re: f64, im: f64) -> PyResult<(f64, f64, f64)> {
    let ev = MaxfaceEvaluator::new(params(a)?, theta).map_err(err)?;
    let p = ev.eval_minimal_r3(C64::new(re, im)).map_err(err)?;
    Ok((p[0], p[1], p[2]))
}

/// xi_a(t) = 2 / sqrt(2 cos 4t + b).
#[pyfunction]
fn xi(a: f64, t: f64) -> PyResult<f64> {
    Ok(foldcurve::xi(&params(a)?, t))
}

/// The lightlike fold curve gamma_a(s).
#[pyfunction]
fn gamma(a: f64, s: f64) -> PyResult<(f64, f64, f64)> {
    let fc = FoldCurve::new(params(a)?).map_err(err)?;
    let p = fc.gamma(s);
    Ok((p.x0, p.x1, p.x2))
}

/// Height function tau(s) and its full period tau(pi).
#[pyfunction]
fn tau(a: f64, s: f64) -> PyResult<f64> {
    Ok(FoldCurve::new(params(a)?).map_err(err)?.tau(s))
}

#[pyfunction]
fn c_a(a: f64) -> PyResult<f64> {
    Ok(FoldCurve::new(params(a)?).map_err(err)?.c_a())
}

/// The timelike extension f~(u, v).
#[pyfunction]
fn f_tilde(a: f64, u: f64, v: f64) -> PyResult<(f64, f64, f64)> {
    let fc = FoldCurve::new(params(a)?).map_err(err)?;
    let p = fc.f_tilde(u, v);
    Ok((p.x0, p.x1, p.x2))
}

/// The height-parametrized extension f_check(alpha, beta).
#[pyfunction]
fn check_f(a: f64, alpha: f64, beta: f64) -> PyResult<(f64, f64, f64)> {
    let fc = FoldCurve::new(params(a)?).map_err(err)?;
    let p = fc.check_f(alpha, beta).map_err(err)?;
    Ok((p.x0, p.x1, p.x2))
}

/// Signed curvature of the projected fold curve.
#[pyfunction]
fn projected_curvature(a: f64, s: f64) -> PyResult<f64> {
    Ok(FoldCurve::new(params(a)?).map_err(err)?.projected_curvature(s))
}

/// "cone_like" | "fold" | "cuspidal_edge" for the given associate angle.
#[pyfunction]
fn classify_singularities(a: f64, theta: f64) -> PyResult<String> {
    let c = maxface::classify_singularities(&params(a)?, theta).map_err(err)?;
    Ok(match c {
        maxface::SingularityClass::ConeLike => "cone_like",
        maxface::SingularityClass::Fold => "fold",
        maxface::SingularityClass::CuspidalEdge => "cuspidal_edge",
        maxface::SingularityClass::Other => "other",
    }
    .to_string())
}

/// Period-closure defect at (a, theta).
#[pyfunction]
fn gyroid_residual(a: f64, theta: f64) -> PyResult<f64> {
    Ok(analysis::gyroid_residual(&params(a)?, theta).map_err(err)?.residual)
}

/// Search a box for the intermediate period closure; returns
/// (a, theta, residual).
#[pyfunction]
fn gyroid_search(
    a_min: f64,
    a_max: f64,
    theta_min: f64,
    theta_max: f64,
    grid: usize,
) -> PyResult<(f64, f64, f64)> {
    let r = analysis::gyroid_search((a_min, a_max), (theta_min, theta_max), grid).map_err(err)?;
    Ok((r.a, r.theta, r.residual))
}

/// Assemble the 32-copy block and report
/// (genus, embedded, lhat_b, lhat_c, max_containment_violation).
#[pyfunction]
fn assemble_stats(a: f64, res_u: usize, res_v: usize) -> PyResult<(i64, bool, f64, f64, f64)> {
    let p = params(a)?;
    let om1 = assembly::join_omega1(
        &assembly::mesh_omega_max(&p, res_u, res_v).map_err(err)?,
        &assembly::mesh_omega_min(&p, res_v, (3 * res_v) / 2).map_err(err)?,
    )
    .map_err(err)?;
    let asm = assembly::extend_to_omega32(&p, &om1).map_err(err)?;
    let genus = assembly::quotient_genus(&asm).map_err(err)?;
    let hits = mixface::intersect::self_intersection_scan(&asm.mesh);
    let violation = assembly::prism_containment(&om1).map_err(err)?.max_violation;
    Ok((genus, hits.is_empty(), asm.lhat_b, asm.lhat_c, violation))
}

/// The joined fundamental block as (vertices, faces, face_causal_types)
/// with causal types 0 = spacelike, 1 = timelike, 2 = lightlike.
#[pyfunction]
fn mesh_omega1(
    a: f64,
    res_u: usize,
    res_v: usize,
    res_w: usize,
) -> PyResult<(Vec<(f64, f64, f64)>, Vec<(u32, u32, u32)>, Vec<u8>)> {
    let p = params(a)?;
    let om1 = assembly::join_omega1(
        &assembly::mesh_omega_max(&p, res_u, res_v).map_err(err)?,
        &assembly::mesh_omega_min(&p, res_v, res_w).map_err(err)?,
    )
    .map_err(err)?;
    let m = om1.canonicalized();
    Ok((
        m.vertices.iter().map(|v| (v.x0, v.x1, v.x2)).collect(),
        m.faces.iter().map(|f| (f[0], f[1], f[2])).collect(),
        m.face_tags.iter().map(|t| t.as_u8()).collect(),
    ))
}

#[pymodule]
fn mixface_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(b_of, m)?)?;
    m.add_function(wrap_pyfunction!(classical_parameter, m)?)?;
    m.add_function(wrap_pyfunction!(q_values, m)?)?;
    m.add_function(wrap_pyfunction!(period_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(loop_integral, m)?)?;
    m.add_function(wrap_pyfunction!(eval_maxface, m)?)?;
    m.add_function(wrap_pyfunction!(eval_minimal_r3, m)?)?;
    m.add_function(wrap_pyfunction!(xi, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(c_a, m)?)?;
    m.add_function(wrap_pyfunction!(f_tilde, m)?)?;
    m.add_function(wrap_pyfunction!(check_f, m)?)?;
    m.add_function(wrap_pyfunction!(projected_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(classify_singularities, m)?)?;
    m.add_function(wrap_pyfunction!(gyroid_residual, m)?)?;
    m.add_function(wrap_pyfunction!(gyroid_search, m)?)?;
    m.add_function(wrap_pyfunction!(assemble_stats, m)?)?;
    m.add_function(wrap_pyfunction!(mesh_omega1, m)?)?;
    Ok(())
}
