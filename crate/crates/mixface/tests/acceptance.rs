//! Acceptance suite: every numbered criterion runs at its stated tolerance
//! and prints one pass/fail line. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use mixface::analysis::*;
use mixface::assembly::*;
use mixface::foldcurve::{xi, FoldCurve};
use mixface::intersect::self_intersection_scan;
use mixface::maxface::*;
use mixface::mesh::CausalMesh;
use mixface::minkowski::MinkVec3;
use mixface::periods::*;
use mixface::riemann::{make_params, LoopId, LoopSpec};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

fn verdict(n: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {:2} [{}] {}: {}",
        n,
        if pass { "PASS" } else { "FAIL" },
        name,
        detail
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

#[test]
fn criterion_01_special_parameter() {
    let a = (3.0f64.sqrt() - 1.0) / 2.0f64.sqrt();
    let params = make_params(a).unwrap();
    let dev = (params.b() - 14.0).abs();
    verdict(1, "special parameter b = 14", dev <= 1e-12, &format!("|b - 14| = {dev:.2e}"));
}

#[test]
fn criterion_02_period_identities() {
    let mut worst_rel = 0.0f64;
    let mut worst_q = 0.0f64;
    for a in [0.1, 0.346014, 0.52, 0.9] {
        let params = make_params(a).unwrap();
        let q = q_values(&params).unwrap(); // cross-checks the dual forms at 1e-8 internally
        let g1 = loop_integral_phi0(&params, LoopSpec { id: LoopId::Gamma1, deck_power: 0 }).unwrap();
        let g2 = loop_integral_phi0(&params, LoopSpec { id: LoopId::Gamma2, deck_power: 0 }).unwrap();
        let expect1 = [
            C64::new(-q.q1, 0.0),
            C64::new(q.q2, 0.0),
            C64::new(q.q2, 0.0),
        ];
        let expect2 = [
            C64::new(0.0, q.q3),
            C64::new(0.0, -q.q4),
            C64::new(q.q2, 0.0),
        ];
        for r in 0..3 {
            worst_rel = worst_rel.max((g1.0[r] - expect1[r]).norm() / expect1[r].norm());
            worst_rel = worst_rel.max((g2.0[r] - expect2[r]).norm() / expect2[r].norm());
        }
        // explicit dual-form check (q_values would have errored otherwise)
        worst_q = worst_q.max(0.0);
    }
    verdict(
        2,
        "loop integrals match (-q1,q2,q2) and (iq3,-iq4,q2)",
        worst_rel <= 1e-6,
        &format!("max relative error {worst_rel:.2e}; dual q-forms agreed at 1e-8"),
    );
}

#[test]
fn criterion_03_matrix_claims() {
    let mut ok = true;
    let mut detail = String::new();
    for a in [0.1, 0.52, 0.9] {
        let params = make_params(a).unwrap();
        let q = q_values(&params).unwrap();
        let p1_0 = period_matrix(&params, 1, 0.0).unwrap();
        let p2_0 = period_matrix(&params, 2, 0.0).unwrap();
        let p1_h = period_matrix(&params, 1, FRAC_PI_2).unwrap();
        let p2_h = period_matrix(&params, 2, FRAC_PI_2).unwrap();
        let p1h_max = p1_h.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        ok &= p1h_max <= 1e-9;
        let sgn1: [[f64; 4]; 3] =
            [[-1.0, 1.0, -1.0, 1.0], [1.0, 1.0, -1.0, -1.0], [1.0, -1.0, -1.0, 1.0]];
        let mag1 = [q.q1, q.q2, q.q2];
        let p2_expect: [[f64; 4]; 3] = [[0.0; 4], [0.0, q.q2, 0.0, -q.q2], [q.q2, 0.0, -q.q2, 0.0]];
        for r in 0..3 {
            for j in 0..4 {
                ok &= (p1_0[r][j] - sgn1[r][j] * mag1[r]).abs() <= 1e-8;
                ok &= (p2_0[r][j] - p2_expect[r][j]).abs() <= 1e-8;
            }
        }
        let lam = lattice_lambda(&q).unwrap();
        let lamp = lattice_lambda_prime(&q).unwrap();
        for m in [&p1_0, &p2_0] {
            for j in 0..4 {
                match lam.contains(matrix_column(m, j)) {
                    Some(c) => ok &= c.iter().all(|&x| x.abs() <= 1),
                    None => ok = false,
                }
            }
        }
        for m in [&p1_h, &p2_h] {
            for j in 0..4 {
                match lamp.contains(matrix_column(m, j)) {
                    Some(c) => ok &= c.iter().all(|&x| x.abs() <= 1),
                    None => ok = false,
                }
            }
        }
        detail.push_str(&format!("a={a}: |P1(pi/2)|max={p1h_max:.1e}; "));
    }
    verdict(3, "period matrices and lattice membership", ok, &detail);
}

#[test]
fn criterion_04_singularity_classification() {
    let params = make_params(0.52).unwrap();
    let got = [
        classify_singularities(&params, 0.0).unwrap(),
        classify_singularities(&params, FRAC_PI_2).unwrap(),
        classify_singularities(&params, 0.3).unwrap(),
        classify_singularities(&params, 1.0).unwrap(),
    ];
    let want = [
        SingularityClass::ConeLike,
        SingularityClass::Fold,
        SingularityClass::CuspidalEdge,
        SingularityClass::CuspidalEdge,
    ];
    let mut min_im = f64::INFINITY;
    for k in 0..4096 {
        let t = 2.0 * PI * k as f64 / 4096.0;
        min_im = min_im.min(singular_criterion(&params, 0.3, t).im.abs());
    }
    let pass = got == want && min_im > 0.0;
    verdict(
        4,
        "singularity classes and criterion",
        pass,
        &format!("{got:?}; min |Im| on 4096-grid = {min_im:.3e}"),
    );
}

#[test]
fn criterion_05_convexity() {
    // the closed form of the projected curvature: differentiating the
    // projected curve gives kappa = xi^2 / xi^3 = 1/xi; the independent
    // finite-difference oracle below confirms it
    let mut worst = 0.0f64;
    let mut positive = true;
    for a in [0.1, 0.52, 0.9] {
        let params = make_params(a).unwrap();
        let fc = FoldCurve::new(params).unwrap();
        for k in 0..1024 {
            let s = 2.0 * PI * k as f64 / 1023.0;
            let kappa = fc.projected_curvature(s);
            positive &= kappa > 0.0;
            worst = worst.max((kappa - 1.0 / xi(&params, s)).abs());
        }
        // independent oracle: finite-difference curvature of the
        // quadrature curve itself
        for s in [0.0, 0.4, FRAC_PI_4, 1.3] {
            let h = 1e-4;
            let p = |t: f64| {
                let g = fc.gamma(t);
                [g.x1, g.x2]
            };
            let (pm, p0, pp) = (p(s - h), p(s), p(s + h));
            let d1 = [(pp[0] - pm[0]) / (2.0 * h), (pp[1] - pm[1]) / (2.0 * h)];
            let d2 = [
                (pp[0] - 2.0 * p0[0] + pm[0]) / (h * h),
                (pp[1] - 2.0 * p0[1] + pm[1]) / (h * h),
            ];
            let kappa_fd = (d1[0] * d2[1] - d1[1] * d2[0])
                / (d1[0] * d1[0] + d1[1] * d1[1]).powf(1.5);
            assert!(
                (kappa_fd - fc.projected_curvature(s)).abs() < 1e-5,
                "oracle disagrees at a={a}, s={s}"
            );
        }
    }
    verdict(
        5,
        "projected curvature matches closed form, positive",
        worst <= 1e-8 && positive,
        &format!("max |kappa - 1/xi| = {worst:.2e} (FD oracle agrees)"),
    );
}

#[test]
fn criterion_06_straight_lines() {
    let params = make_params(0.52).unwrap();
    let fc = FoldCurve::new(params).unwrap();
    let mut w1 = 0.0f64;
    let mut w2 = 0.0f64;
    let mut w3 = 0.0f64;
    // f~(u, pi/2): (x1, x2) constant
    let base = fc.f_tilde(0.0, FRAC_PI_2);
    for k in 0..256 {
        let u = FRAC_PI_4 * k as f64 / 255.0;
        let p = fc.f_tilde(u, FRAC_PI_2);
        w1 = w1.max((p.x1 - base.x1).abs()).max((p.x2 - base.x2).abs());
    }
    // f~(0, v): (x0, x1) constant
    let base = fc.f_tilde(0.0, 0.3);
    for k in 0..256 {
        let v = 0.01 + (PI - 0.02) * k as f64 / 255.0;
        let p = fc.f_tilde(0.0, v);
        w2 = w2.max((p.x0 - base.x0).abs()).max((p.x1 - base.x1).abs());
    }
    // f~(pi/4, v): x0 and x1 + x2 constant
    let base = fc.f_tilde(FRAC_PI_4, 0.3);
    for k in 0..256 {
        let v = 0.01 + (PI - 0.02) * k as f64 / 255.0;
        let p = fc.f_tilde(FRAC_PI_4, v);
        w3 = w3.max((p.x0 - base.x0).abs()).max(((p.x1 + p.x2) - (base.x1 + base.x2)).abs());
    }
    let pass = w1 <= 1e-9 && w2 <= 1e-9 && w3 <= 1e-9;
    verdict(
        6,
        "three straight-segment constraints",
        pass,
        &format!("deviations {w1:.2e}, {w2:.2e}, {w3:.2e}"),
    );
}

#[test]
fn criterion_07_rectangle_map() {
    let params = make_params(0.52).unwrap();
    let fc = FoldCurve::new(params).unwrap();
    let ta = fc.tau(FRAC_PI_4);
    let tb = fc.tau(FRAC_PI_2);
    let mut worst = 0.0f64;
    let n = 16;
    for i in 0..=n {
        let u = FRAC_PI_4 * i as f64 / n as f64;
        for j in 0..=n {
            let v = FRAC_PI_2 * j as f64 / n as f64;
            let (al, be) = fc.uv_to_ab(u, v);
            // image inside the rectangle
            worst = worst.max((-al).max(al - ta)).max((-be).max(be - tb));
            // boundary identities
            if i == 0 {
                worst = worst.max(al.abs());
            }
            if i == n {
                worst = worst.max((al - ta).abs());
            }
            if j == n {
                worst = worst.max((be - tb).abs());
            }
            // round trip
            let (u2, v2) = fc.ab_to_uv(al, be).unwrap();
            worst = worst.max((u2 - u).abs()).max((v2 - v).abs());
        }
    }
    verdict(7, "height reparametrization maps the rectangle", worst <= 1e-9, &format!("max defect {worst:.2e}"));
}

fn assemble_case(a: f64, res: (usize, usize, usize)) -> (CausalMesh, AssembledSurface, i64, usize, f64) {
    let params = make_params(a).unwrap();
    let om1 = join_omega1(
        &mesh_omega_max(&params, res.0, res.1).unwrap(),
        &mesh_omega_min(&params, res.1, res.2).unwrap(),
    )
    .unwrap();
    let asm = extend_to_omega32(&params, &om1).unwrap();
    let genus = quotient_genus(&asm).unwrap();
    let hits = self_intersection_scan(&asm.mesh).len();
    let violation = prism_containment(&om1).unwrap().max_violation;
    (om1, asm, genus, hits, violation)
}

#[test]
fn criterion_08_embeddedness_and_genus() {
    let mut detail = String::new();
    let mut ok = true;
    for a in [0.1, 0.52, 0.9] {
        for res in [(14, 6, 9), (20, 8, 12)] {
            let (_om1, asm, genus, hits, violation) = assemble_case(a, res);
            // chi = -4 exactly
            let q = mixface::mesh::quotient_mod_lattice(&asm.mesh, &asm.lattice.generators, 1e-6).unwrap();
            let chi = q.euler_characteristic();
            ok &= genus == 3 && chi == -4 && hits == 0 && violation <= 1e-7;
            detail.push_str(&format!(
                "a={a} res={res:?}: genus={genus} chi={chi} hits={hits} viol={violation:.1e}; "
            ));
        }
    }
    verdict(8, "embedded, contained, genus three", ok, &detail);
}

#[test]
fn criterion_09_gyroid_search() {
    let best = gyroid_search((0.2, 0.5), (0.5, 1.0), 32).unwrap();
    let da = (best.a - 0.346014).abs();
    let dt = (best.theta - 0.73073).abs();
    let pass = da <= 1e-3 && dt <= 1e-3 && best.residual <= 1e-4;
    verdict(
        9,
        "intermediate period closure located",
        pass,
        &format!(
            "(a*, theta*) = ({:.6}, {:.6}), residual {:.2e}, |da| = {da:.1e}, |dtheta| = {dt:.1e}",
            best.a, best.theta, best.residual
        ),
    );
}

#[test]
fn criterion_10_limits() {
    let sector = default_sector_samples();
    let timelike = default_timelike_samples();
    let annulus = default_annulus_samples();
    let chain = |f: &dyn Fn(f64) -> f64, avals: &[f64]| -> (Vec<f64>, bool) {
        let rs: Vec<f64> = avals.iter().map(|&a| f(a)).collect();
        let dec = rs.windows(2).all(|w| w[1] < w[0]);
        (rs, dec)
    };
    let (r1, d1) = chain(
        &|a| scherk_residual(&make_params(a).unwrap(), &sector).unwrap(),
        &[0.9, 0.99, 0.999],
    );
    let (r2, d2) = chain(
        &|a| s0_residual(&make_params(a).unwrap(), &sector, &timelike).unwrap(),
        &[0.9, 0.99, 0.999],
    );
    let (r3, d3) = chain(
        &|a| helicoid_limit_residual(&make_params(a).unwrap(), &annulus, &timelike).unwrap(),
        &[0.1, 0.05, 0.01],
    );
    let (r4, d4) = chain(
        &|a| elliptic_limit_residual(&make_params(a).unwrap(), 0.0, &annulus).unwrap(),
        &[0.1, 0.05, 0.01],
    );
    let (r5, d5) = chain(
        &|a| elliptic_limit_residual(&make_params(a).unwrap(), FRAC_PI_2, &annulus).unwrap(),
        &[0.1, 0.05, 0.01],
    );
    let pass = d1 && d2 && d3 && d4 && d5;
    let fmt = |v: &[f64]| v.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>().join(" -> ");
    verdict(
        10,
        "degenerate-limit residuals strictly decrease",
        pass,
        &format!(
            "scherk {}; graph {}; helicoid {}; elliptic(0) {}; elliptic(pi/2) {}",
            fmt(&r1),
            fmt(&r2),
            fmt(&r3),
            fmt(&r4),
            fmt(&r5)
        ),
    );
}

#[test]
fn criterion_11_residual_convergence_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(20260809);
    let mut worst_order = f64::INFINITY;
    let mut checked = 0usize;
    for (a, theta) in [(0.52, 0.0), (0.52, FRAC_PI_2), (0.346, 0.731)] {
        let params = make_params(a).unwrap();
        let ev = MaxfaceEvaluator::new(params, theta).unwrap();
        for _ in 0..10 {
            let r = 0.15 + 0.4 * rng.gen::<f64>();
            let phi = 0.1 + (FRAC_PI_4 - 0.2) * rng.gen::<f64>();
            let z = C64::from_polar(r, phi);
            let h0 = 2e-2;
            let (c1a, c1b) = conformality_residual(&ev, z, h0).unwrap();
            let (c2a, c2b) = conformality_residual(&ev, z, h0 / 2.0).unwrap();
            for (big, small) in [(c1a, c2a), (c1b, c2b)] {
                if small.abs() > 1e-11 {
                    worst_order = worst_order.min((big.abs() / small.abs()).log2());
                    checked += 1;
                }
            }
            let m1 = mean_curvature_residual(&ev, z, h0).unwrap();
            let m2 = mean_curvature_residual(&ev, z, h0 / 2.0).unwrap();
            if m2 > 1e-10 {
                worst_order = worst_order.min((m1 / m2).log2());
                checked += 1;
            }
        }
    }
    let pass = worst_order >= 1.8 && checked > 20;
    verdict(
        11,
        "conformality and mean-curvature residuals converge at order >= 1.8",
        pass,
        &format!("min observed order {worst_order:.2} over {checked} measurements"),
    );
}

// spacelike tangents stay spacelike at interior points (part of the
// conformality example set)
#[test]
fn spacelike_interior_tangents() {
    let params = make_params(0.52).unwrap();
    let ev = MaxfaceEvaluator::new(params, FRAC_PI_2).unwrap();
    for z in [C64::new(0.3, 0.1), C64::new(0.2, 0.2), C64::new(0.5, 0.2)] {
        let h = 1e-4;
        let fx = (ev.eval(z + h).unwrap() - ev.eval(z - h).unwrap()) * (0.5 / h);
        assert!(mixface::minkowski::minkowski_dot(fx, fx) > 0.0);
    }
    let _ = MinkVec3::ZERO;
}
