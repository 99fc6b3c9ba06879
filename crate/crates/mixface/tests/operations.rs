//! Integration tests for operation-level examples that span modules.

use mixface::analysis::elliptic_limit_eval;
use mixface::assembly::{mesh_check_f_strip, midpoint_injectivity_check};
use mixface::foldcurve::FoldCurve;
use mixface::intersect::self_intersection_scan;
use mixface::maxface::MaxfaceEvaluator;
use mixface::periods::{integrate_form, FormPath, WeierstrassForm};
use mixface::riemann::{make_params, ArcId, LoopId, LoopSpec};
use num_complex::Complex64 as C64;
use std::f64::consts::FRAC_PI_2;

fn schwarz_a() -> f64 {
    (3.0f64.sqrt() - 1.0) / 2.0f64.sqrt()
}

#[test]
fn embedded_strip_has_no_self_intersections() {
    // the full height-parametrized strip (both fundamental copies wide)
    let params = make_params(schwarz_a()).unwrap();
    let fc = FoldCurve::new(params).unwrap();
    let strip = mesh_check_f_strip(&fc, 48, 24).unwrap();
    assert!(self_intersection_scan(&strip).is_empty());
}

#[test]
fn injectivity_on_fine_grid() {
    let params = make_params(schwarz_a()).unwrap();
    let fc = FoldCurve::new(params).unwrap();
    let min_dist = midpoint_injectivity_check(&fc, 256, 256).unwrap();
    assert!(min_dist > 1e-9, "near-collision: {min_dist}");
}

#[test]
fn minimal_r3_loop_periods_close_in_a_lattice() {
    // the companion Euclidean family is triply periodic at theta = 0 too:
    // its loop periods are real and pattern-bound to the same q-values
    let params = make_params(schwarz_a()).unwrap();
    let form = WeierstrassForm::minimal_r3(0.0);
    let g1 = integrate_form(&params, &form, FormPath::Loop(LoopSpec { id: LoopId::Gamma1, deck_power: 0 }))
        .unwrap();
    // components are a constant rotation of the mixed-signature ones;
    // real parts must still be lattice-compatible (finite, matching q2/q1)
    let q = mixface::periods::q_values(&params).unwrap();
    assert!((g1.0[2].re - -(-q.q1)).abs() < 1e-8); // third comp = -first of the base form
    assert!((g1.0[1].im.abs() - q.q2).abs() < 1e-8);
}

#[test]
fn arc_integrals_recombine_into_loops() {
    let params = make_params(0.37).unwrap();
    let form = WeierstrassForm::maxface(0.0);
    let c3 = integrate_form(&params, &form, FormPath::Arc(ArcId::C3)).unwrap();
    let c4 = integrate_form(&params, &form, FormPath::Arc(ArcId::C4)).unwrap();
    let g2 = integrate_form(&params, &form, FormPath::Loop(LoopSpec { id: LoopId::Gamma2, deck_power: 0 }))
        .unwrap();
    for r in 0..3 {
        assert!((c3.0[r] + c4.0[r] - g2.0[r]).norm() < 1e-9);
    }
    let c1 = integrate_form(&params, &form, FormPath::Arc(ArcId::C1)).unwrap();
    let c2 = integrate_form(&params, &form, FormPath::Arc(ArcId::C2)).unwrap();
    let g1 = integrate_form(&params, &form, FormPath::Loop(LoopSpec { id: LoopId::Gamma1, deck_power: 0 }))
        .unwrap();
    for r in 0..3 {
        assert!((c1.0[r] + c2.0[r] - g1.0[r]).norm() < 1e-9);
    }
}

#[test]
fn rescaled_family_approaches_the_limit_immersion() {
    // pointwise comparison on one annulus sample at decreasing a
    let z = C64::from_polar(0.7, 0.5);
    let mut prev = f64::INFINITY;
    for a in [0.1, 0.05, 0.01] {
        let params = make_params(a).unwrap();
        let ev = MaxfaceEvaluator::new(params, FRAC_PI_2).unwrap();
        let sb = params.b().sqrt();
        let f1 = ev.eval(C64::new(1.0, 0.0)).unwrap();
        let p = (ev.eval(z).unwrap() - f1) * sb;
        let q = elliptic_limit_eval(FRAC_PI_2, z).unwrap();
        let d = (p - q).norm_euclid();
        assert!(d < prev);
        prev = d;
    }
}
