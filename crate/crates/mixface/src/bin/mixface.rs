//! Command-line interface: period tables, surface meshes, assembly with
//! verification reports, the period-closure search, limit checks, and the
//! invariant suites.
//!
//! Exit codes: 0 success, 1 usage/validation, 2 numerical cross-check
//! failure, 3 invariant-suite failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use mixface::analysis::{
    default_annulus_samples, default_sector_samples, default_timelike_samples,
    elliptic_limit_residual, gyroid_search, helicoid_limit_residual, s0_residual, scherk_residual,
    GyroidScanner,
};
use mixface::assembly::{
    extend_to_omega32, join_omega1, mesh_omega_max, mesh_omega_min, prism_containment,
    quotient_genus,
};
use mixface::error::Error;
use mixface::foldcurve::{xi, FoldCurve};
use mixface::intersect::self_intersection_scan;
use mixface::maxface::{
    classify_singularities, conformality_residual, mean_curvature_residual, singular_criterion,
    MaxfaceEvaluator, SingularityClass,
};
use mixface::mesh::CausalMesh;
use mixface::periods::{
    lattice_lambda, lattice_lambda_prime, matrix_column, matrix_max_diff, period_matrix,
    period_matrix_via_identity, period_table, q_values,
};
use mixface::riemann::make_params;
use mixface::{classical_parameter, SurfaceParams};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs::File;
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mixface", version, about = "triply periodic zero mean curvature surfaces of mixed causal type in R^3_1")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute the period table (q-values and period matrices) as JSON.
    Periods(PeriodsArgs),
    /// Mesh one member of the associate family over its fundamental sector.
    Surface(SurfaceArgs),
    /// Mesh the timelike extension patch only.
    Extend(ExtendArgs),
    /// Assemble the 32-copy translational block and verify it.
    Assemble(AssembleArgs),
    /// Scan the (a, theta) plane for the intermediate period closure.
    GyroidSearch(GyroidArgs),
    /// Run the degenerate-limit residual chains.
    Limits(LimitsArgs),
    /// Run invariant suites; exit 3 if any check fails.
    Verify(VerifyArgs),
}

fn parse_angle(s: &str) -> Result<f64, String> {
    let t = s.trim();
    if let Some(d) = t.strip_suffix("deg") {
        let v: f64 = d.trim().parse().map_err(|e| format!("bad angle: {e}"))?;
        Ok(v.to_radians())
    } else {
        t.parse().map_err(|e| format!("bad angle: {e}"))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Obj,
    Ply,
    Json,
}

#[derive(Args)]
struct PeriodsArgs {
    /// family parameter in (0,1); defaults to the value with a^4+a^-4 = 14
    #[arg(long, default_value_t = classical_parameter())]
    a: f64,
    /// optional associate angle; adds the matrices at this angle to the table
    #[arg(long, value_parser = parse_angle)]
    theta: Option<f64>,
    /// output file (stdout when omitted)
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SurfaceArgs {
    #[arg(long, default_value_t = classical_parameter())]
    a: f64,
    /// associate angle (radians, or a number with a `deg` suffix)
    #[arg(long, value_parser = parse_angle, default_value = "1.5707963267948966")]
    theta: f64,
    /// radial resolution
    #[arg(long, default_value_t = 24)]
    res_u: usize,
    /// angular resolution
    #[arg(long, default_value_t = 12)]
    res_v: usize,
    #[arg(long)]
    out: String,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    format: Format,
}

#[derive(Args)]
struct ExtendArgs {
    #[arg(long, default_value_t = classical_parameter())]
    a: f64,
    #[arg(long, default_value_t = 16)]
    res_u: usize,
    #[arg(long, default_value_t = 24)]
    res_v: usize,
    #[arg(long)]
    out: String,
    #[arg(long, value_enum, default_value_t = Format::Obj)]
    format: Format,
}

#[derive(Args)]
struct AssembleArgs {
    #[arg(long, default_value_t = classical_parameter())]
    a: f64,
    /// radial resolution of the spacelike piece
    #[arg(long, default_value_t = 18)]
    res_u: usize,
    /// angular resolution (shared by both pieces along the fold seam)
    #[arg(long, default_value_t = 8)]
    res_v: usize,
    /// mesh output path; the JSON report goes to stdout or --report
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    report: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Ply)]
    format: Format,
}

#[derive(Args)]
struct GyroidArgs {
    #[arg(long, default_value_t = 0.2)]
    a_min: f64,
    #[arg(long, default_value_t = 0.5)]
    a_max: f64,
    #[arg(long, value_parser = parse_angle, default_value = "0.5")]
    theta_min: f64,
    #[arg(long, value_parser = parse_angle, default_value = "1.0")]
    theta_max: f64,
    #[arg(long, default_value_t = 32)]
    grid: usize,
    /// also dump the residual grid as JSON rows
    #[arg(long)]
    emit_grid: bool,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct LimitsArgs {
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = classical_parameter())]
    a: f64,
    /// periods | singularities | convexity | assembly | limits | all
    #[arg(long, default_value = "all")]
    suite: String,
    /// seed for the sample-based checks
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long)]
    out: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help/version are not errors
            use clap::error::ErrorKind::*;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, DisplayHelp | DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::OutOfRange(_) | Error::Io(_) => 1,
                Error::CrossCheckFailure { .. } | Error::QuadratureFailure { .. } => 2,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn out_writer(path: &Option<String>) -> mixface::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(std::io::stdout()),
    })
}

fn validated_params(a: f64) -> mixface::Result<SurfaceParams> {
    make_params(a)
}

fn write_mesh(mesh: &CausalMesh, path: &str, format: Format) -> mixface::Result<()> {
    let mut f = File::create(path)?;
    match format {
        Format::Obj => mixface::io::write_obj(mesh, &mut f),
        Format::Ply => mixface::io::write_ply(mesh, &mut f),
        Format::Json => {
            #[derive(Serialize)]
            struct MeshJson {
                vertices: Vec<[f64; 3]>,
                faces: Vec<[u32; 3]>,
                causal_type: Vec<u8>,
            }
            let c = mesh.canonicalized();
            let j = MeshJson {
                vertices: c.vertices.iter().map(|v| v.to_array()).collect(),
                faces: c.faces.clone(),
                causal_type: c.face_tags.iter().map(|t| t.as_u8()).collect(),
            };
            mixface::io::write_json(&j, &mut f)
        }
    }
}

fn run(cli: Cli) -> mixface::Result<ExitCode> {
    match cli.cmd {
        Cmd::Periods(args) => {
            let params = validated_params(args.a)?;
            let table = period_table(&params)?;
            let mut w = out_writer(&args.out)?;
            match args.theta {
                None => mixface::io::write_json(&table, &mut w)?,
                Some(theta) => {
                    #[derive(Serialize)]
                    struct WithTheta {
                        #[serde(flatten)]
                        table: mixface::periods::PeriodTable,
                        theta: f64,
                        #[serde(rename = "P1_theta")]
                        p1_theta: mixface::periods::PeriodMatrix,
                        #[serde(rename = "P2_theta")]
                        p2_theta: mixface::periods::PeriodMatrix,
                    }
                    let ext = WithTheta {
                        p1_theta: period_matrix(&params, 1, theta)?,
                        p2_theta: period_matrix(&params, 2, theta)?,
                        theta,
                        table,
                    };
                    mixface::io::write_json(&ext, &mut w)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Surface(args) => {
            if args.res_u == 0 || args.res_v == 0 {
                return Err(Error::OutOfRange("resolution must be positive".into()));
            }
            let params = validated_params(args.a)?;
            let mesh = if (args.theta - FRAC_PI_2).abs() < 1e-12 {
                mesh_omega_max(&params, args.res_u, args.res_v)?
            } else {
                mesh_maxface_sector(&params, args.theta, args.res_u, args.res_v)?
            };
            write_mesh(&mesh, &args.out, args.format)?;
            #[derive(Serialize)]
            struct SurfaceReport {
                a: f64,
                theta: f64,
                singularities: String,
                vertices: usize,
                faces: usize,
            }
            let report = SurfaceReport {
                a: args.a,
                theta: args.theta,
                singularities: format!("{:?}", classify_singularities(&params, args.theta)?),
                vertices: mesh.vertices.len(),
                faces: mesh.faces.len(),
            };
            mixface::io::write_json(&report, &mut std::io::stdout())?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Extend(args) => {
            if args.res_u == 0 || args.res_v == 0 {
                return Err(Error::OutOfRange("resolution must be positive".into()));
            }
            let params = validated_params(args.a)?;
            let mesh = mesh_omega_min(&params, args.res_u, args.res_v)?;
            write_mesh(&mesh, &args.out, args.format)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Assemble(args) => {
            let params = validated_params(args.a)?;
            let om1 = join_omega1(
                &mesh_omega_max(&params, args.res_u, args.res_v)?,
                &mesh_omega_min(&params, args.res_v, (3 * args.res_v) / 2)?,
            )?;
            let asm = extend_to_omega32(&params, &om1)?;
            let genus = quotient_genus(&asm)?;
            let hits = self_intersection_scan(&asm.mesh);
            let containment = prism_containment(&om1)?;
            let (lo, hi) = asm.mesh.bounding_box();
            #[derive(Serialize)]
            struct AssembleReport {
                a: f64,
                genus: i64,
                embedded: bool,
                intersecting_pairs: usize,
                lhat_b: f64,
                lhat_c: f64,
                lattice: [[f64; 3]; 3],
                containment: mixface::assembly::ContainmentReport,
                box_extent: [f64; 3],
            }
            let report = AssembleReport {
                a: args.a,
                genus,
                embedded: hits.is_empty(),
                intersecting_pairs: hits.len(),
                lhat_b: asm.lhat_b,
                lhat_c: asm.lhat_c,
                lattice: [
                    asm.lattice.generators[0].to_array(),
                    asm.lattice.generators[1].to_array(),
                    asm.lattice.generators[2].to_array(),
                ],
                containment,
                box_extent: (hi - lo).to_array(),
            };
            if let Some(path) = &args.out {
                write_mesh(&asm.mesh, path, args.format)?;
            }
            let mut w = out_writer(&args.report)?;
            mixface::io::write_json(&report, &mut w)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::GyroidSearch(args) => {
            let best = gyroid_search(
                (args.a_min, args.a_max),
                (args.theta_min, args.theta_max),
                args.grid,
            )?;
            let mut w = out_writer(&args.out)?;
            if args.emit_grid {
                #[derive(Serialize)]
                struct Row {
                    a: f64,
                    theta: f64,
                    residual: f64,
                }
                #[derive(Serialize)]
                struct GridReport {
                    minimizer: mixface::analysis::GyroidResidual,
                    grid: Vec<Row>,
                }
                let mut scan = GyroidScanner::new();
                let mut rows = Vec::new();
                let n = args.grid.max(8);
                for i in 0..=n {
                    let a = args.a_min + (args.a_max - args.a_min) * i as f64 / n as f64;
                    for j in 0..=n {
                        let theta = args.theta_min
                            + (args.theta_max - args.theta_min) * j as f64 / n as f64;
                        let r = scan.residual(a, theta)?;
                        rows.push(Row { a, theta, residual: r.residual });
                    }
                }
                mixface::io::write_json(&GridReport { minimizer: best, grid: rows }, &mut w)?;
            } else {
                mixface::io::write_json(&best, &mut w)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Limits(args) => {
            #[derive(Serialize)]
            struct Chain {
                kind: &'static str,
                a: Vec<f64>,
                residuals: Vec<f64>,
                strictly_decreasing: bool,
            }
            let mut chains = Vec::new();
            let sector = default_sector_samples();
            let timelike = default_timelike_samples();
            let annulus = default_annulus_samples();
            let run_chain = |kind: &'static str,
                             avals: &[f64],
                             f: &dyn Fn(&SurfaceParams) -> mixface::Result<f64>|
             -> mixface::Result<Chain> {
                let mut residuals = Vec::new();
                for &a in avals {
                    residuals.push(f(&make_params(a)?)?);
                }
                let dec = residuals.windows(2).all(|w| w[1] < w[0]);
                Ok(Chain { kind, a: avals.to_vec(), residuals, strictly_decreasing: dec })
            };
            chains.push(run_chain("scherk", &[0.9, 0.99, 0.999], &|p| {
                scherk_residual(p, &sector)
            })?);
            chains.push(run_chain("entire_graph", &[0.9, 0.99, 0.999], &|p| {
                s0_residual(p, &sector, &timelike)
            })?);
            chains.push(run_chain("helicoid", &[0.1, 0.05, 0.01], &|p| {
                helicoid_limit_residual(p, &annulus, &timelike)
            })?);
            chains.push(run_chain("elliptic_pointwise", &[0.1, 0.05, 0.01], &|p| {
                elliptic_limit_residual(p, FRAC_PI_2, &annulus)
            })?);
            let mut w = out_writer(&args.out)?;
            mixface::io::write_json(&chains, &mut w)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify(args) => {
            let mut failures = 0usize;
            let mut out: Box<dyn Write> = out_writer(&args.out)?;
            let suites: Vec<&str> = match args.suite.as_str() {
                "all" => vec!["periods", "singularities", "convexity", "assembly", "limits"],
                s @ ("periods" | "singularities" | "convexity" | "assembly" | "limits") => vec![s],
                other => {
                    return Err(Error::OutOfRange(format!("unknown suite '{other}'")));
                }
            };
            for s in suites {
                match s {
                    "periods" => verify_periods(args.a, &mut out, &mut failures)?,
                    "singularities" => verify_singularities(args.a, args.seed, &mut out, &mut failures)?,
                    "convexity" => verify_convexity(args.a, &mut out, &mut failures)?,
                    "assembly" => verify_assembly(args.a, &mut out, &mut failures)?,
                    "limits" => verify_limits(&mut out, &mut failures)?,
                    _ => unreachable!(),
                }
            }
            if failures > 0 {
                writeln!(out, "{failures} check(s) failed")?;
                Ok(ExitCode::from(3))
            } else {
                writeln!(out, "all checks passed")?;
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn report(out: &mut dyn Write, failures: &mut usize, name: &str, pass: bool, detail: String) -> mixface::Result<()> {
    if !pass {
        *failures += 1;
    }
    writeln!(out, "{} {} ({})", if pass { "PASS" } else { "FAIL" }, name, detail)?;
    Ok(())
}

fn verify_periods(a: f64, out: &mut dyn Write, failures: &mut usize) -> mixface::Result<()> {
    let params = validated_params(a)?;
    let q = q_values(&params)?;
    report(out, failures, "periods.q_positive", q.as_array().iter().all(|&v| v > 0.0),
        format!("q = {:?}", q.as_array()))?;
    let p1_0 = period_matrix(&params, 1, 0.0)?;
    let p2_0 = period_matrix(&params, 2, 0.0)?;
    let p1_h = period_matrix(&params, 1, FRAC_PI_2)?;
    let p2_h = period_matrix(&params, 2, FRAC_PI_2)?;
    let p1h_max = p1_h.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    report(out, failures, "periods.P1_half_vanishes", p1h_max < 1e-9, format!("max entry {p1h_max:.3e}"))?;
    let lam = lattice_lambda(&q)?;
    let lamp = lattice_lambda_prime(&q)?;
    let mut in_lambda = true;
    for m in [&p1_0, &p2_0] {
        for j in 0..4 {
            in_lambda &= lam
                .contains(matrix_column(m, j))
                .is_some_and(|c| c.iter().all(|&x| x.abs() <= 1));
        }
    }
    report(out, failures, "periods.columns_in_Lambda", in_lambda, "theta = 0".into())?;
    let mut in_lambda_p = true;
    for m in [&p1_h, &p2_h] {
        for j in 0..4 {
            in_lambda_p &= lamp
                .contains(matrix_column(m, j))
                .is_some_and(|c| c.iter().all(|&x| x.abs() <= 1));
        }
    }
    report(out, failures, "periods.columns_in_LambdaPrime", in_lambda_p, "theta = pi/2".into())?;
    let mut worst = 0.0f64;
    for k in [1u8, 2] {
        let p0 = period_matrix(&params, k, 0.0)?;
        let ph = period_matrix(&params, k, FRAC_PI_2)?;
        for n in 0..10 {
            let theta = 0.05 + 0.14 * n as f64;
            let direct = period_matrix(&params, k, theta)?;
            let via = period_matrix_via_identity(&p0, &ph, theta);
            worst = worst.max(matrix_max_diff(&direct, &via));
        }
    }
    report(out, failures, "periods.theta_linearity", worst < 1e-8, format!("max diff {worst:.3e}"))?;
    Ok(())
}

fn verify_singularities(a: f64, seed: u64, out: &mut dyn Write, failures: &mut usize) -> mixface::Result<()> {
    let params = validated_params(a)?;
    let expects = [
        (0.0, SingularityClass::ConeLike),
        (FRAC_PI_2, SingularityClass::Fold),
        (0.3, SingularityClass::CuspidalEdge),
        (1.0, SingularityClass::CuspidalEdge),
    ];
    for (theta, want) in expects {
        let got = classify_singularities(&params, theta)?;
        report(out, failures, "singularities.class", got == want, format!("theta={theta}: {got:?}"))?;
    }
    let mut min_im = f64::INFINITY;
    for k in 0..4096 {
        let t = 2.0 * std::f64::consts::PI * k as f64 / 4096.0;
        min_im = min_im.min(singular_criterion(&params, 0.3, t).im.abs());
    }
    report(out, failures, "singularities.criterion_nonzero", min_im > 0.0, format!("min |Im| {min_im:.3e}"))?;
    // conformality / mean-curvature convergence at seeded interior points
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ev = MaxfaceEvaluator::new(params, FRAC_PI_2)?;
    let mut ok = true;
    let mut worst_order = f64::INFINITY;
    for _ in 0..3 {
        let r = 0.15 + 0.45 * rng.gen::<f64>();
        let phi = 0.05 + (FRAC_PI_4 - 0.1) * rng.gen::<f64>();
        let z = C64::from_polar(r, phi);
        let h0 = 2e-2;
        let (c1, _) = conformality_residual(&ev, z, h0)?;
        let (c2, _) = conformality_residual(&ev, z, h0 / 2.0)?;
        if c2.abs() > 1e-14 {
            let order = (c1.abs() / c2.abs()).log2();
            worst_order = worst_order.min(order);
            ok &= order >= 1.8 || c2.abs() < 1e-12;
        }
        let m1 = mean_curvature_residual(&ev, z, h0)?;
        let m2 = mean_curvature_residual(&ev, z, h0 / 2.0)?;
        if m2 > 1e-12 {
            let order = (m1 / m2).log2();
            worst_order = worst_order.min(order);
            ok &= order >= 1.8 || m2 < 1e-10;
        }
    }
    report(out, failures, "singularities.residual_convergence", ok, format!("min order {worst_order:.2}"))?;
    Ok(())
}

fn verify_convexity(a: f64, out: &mut dyn Write, failures: &mut usize) -> mixface::Result<()> {
    let params = validated_params(a)?;
    let fc = FoldCurve::new(params)?;
    let mut worst = 0.0f64;
    let mut positive = true;
    for k in 0..1024 {
        let s = 2.0 * std::f64::consts::PI * k as f64 / 1023.0;
        let kappa = fc.projected_curvature(s);
        positive &= kappa > 0.0;
        worst = worst.max((kappa - 1.0 / xi(&params, s)).abs());
    }
    report(out, failures, "convexity.curvature_closed_form", worst <= 1e-8, format!("max |kappa - 1/xi| = {worst:.3e}"))?;
    report(out, failures, "convexity.positive", positive, "1024-point grid".into())?;
    Ok(())
}

fn verify_assembly(a: f64, out: &mut dyn Write, failures: &mut usize) -> mixface::Result<()> {
    let params = validated_params(a)?;
    let om1 = join_omega1(
        &mesh_omega_max(&params, 14, 6)?,
        &mesh_omega_min(&params, 6, 9)?,
    )?;
    let rep = prism_containment(&om1)?;
    report(out, failures, "assembly.prism_containment", rep.max_violation <= 1e-7,
        format!("max violation {:.3e}", rep.max_violation))?;
    let asm = extend_to_omega32(&params, &om1)?;
    let genus = quotient_genus(&asm)?;
    report(out, failures, "assembly.genus", genus == 3, format!("genus {genus}"))?;
    let hits = self_intersection_scan(&asm.mesh);
    report(out, failures, "assembly.embedded", hits.is_empty(), format!("{} intersecting pairs", hits.len()))?;
    Ok(())
}

fn verify_limits(out: &mut dyn Write, failures: &mut usize) -> mixface::Result<()> {
    let sector = default_sector_samples();
    let timelike = default_timelike_samples();
    let annulus = default_annulus_samples();
    let chain = |name: &str,
                     avals: &[f64],
                     f: &dyn Fn(&SurfaceParams) -> mixface::Result<f64>,
                     out: &mut dyn Write,
                     failures: &mut usize|
     -> mixface::Result<()> {
        let mut rs = Vec::new();
        for &a in avals {
            rs.push(f(&make_params(a)?)?);
        }
        let dec = rs.windows(2).all(|w| w[1] < w[0]);
        let detail = rs.iter().map(|r| format!("{r:.3e}")).collect::<Vec<_>>().join(" -> ");
        report(out, failures, name, dec, detail)?;
        Ok(())
    };
    chain("limits.scherk_decreasing", &[0.9, 0.99, 0.999], &|p| scherk_residual(p, &sector), out, failures)?;
    chain("limits.entire_graph_decreasing", &[0.9, 0.99, 0.999], &|p| s0_residual(p, &sector, &timelike), out, failures)?;
    chain("limits.helicoid_decreasing", &[0.1, 0.05, 0.01], &|p| helicoid_limit_residual(p, &annulus, &timelike), out, failures)?;
    chain("limits.elliptic_pointwise_decreasing", &[0.1, 0.05, 0.01], &|p| elliptic_limit_residual(p, FRAC_PI_2, &annulus), out, failures)?;
    Ok(())
}

/// Sector mesh of a general associate-family member (rim at |z| = 1 by
/// direct integration; only the fold member snaps its rim to the curve).
fn mesh_maxface_sector(
    params: &SurfaceParams,
    theta: f64,
    n_r: usize,
    n_t: usize,
) -> mixface::Result<CausalMesh> {
    use mixface::maxface::arc_integral;
    use mixface::mesh::{marker, MarkerSet};
    use mixface::quad::QuadValue;
    if n_r < 4 || n_t < 4 {
        return Err(Error::OutOfRange("mesh resolution must be at least 4".into()));
    }
    let a = params.a();
    let ev = MaxfaceEvaluator::new(*params, theta)?;
    let rot = C64::from_polar(1.0, theta);
    let mut rvals: Vec<f64> = (1..=n_r)
        .map(|i| i as f64 / n_r as f64)
        .filter(|r| (r - a).abs() > 2e-3)
        .collect();
    rvals.push(a);
    rvals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let svals: Vec<f64> = (0..=n_t).map(|j| j as f64 * FRAC_PI_4 / n_t as f64).collect();
    let mut mesh = CausalMesh::new();
    let center = mesh.add_vertex(
        mixface::MinkVec3::ZERO,
        MarkerSet::with(marker::LA | marker::LC_MAX),
    );
    let mut grid: Vec<Vec<u32>> = Vec::new();
    for &r in &rvals {
        let mut row = Vec::new();
        let mut acc = ev.integral_phi0(C64::new(r, 0.0))?;
        let mut w = C64::new(params.curve_poly_real(r).sqrt(), 0.0);
        let is_a_row = (r - a).abs() < 1e-12;
        for (j, &s) in svals.iter().enumerate() {
            if j > 0 {
                if is_a_row && j == n_t {
                    let corner = ev.corner_integral_phi0()?;
                    let p = mixface::MinkVec3::from_array(corner.mul_c(rot).re());
                    row.push(mesh.add_vertex(p, MarkerSet::with(marker::LC_MAX | marker::LB)));
                    continue;
                }
                let (step, w2) = arc_integral(params, r, svals[j - 1], s, w)?;
                acc = acc.add(step);
                w = w2;
            }
            let mut m = 0u8;
            if j == 0 {
                m |= marker::LA;
            }
            if j == n_t {
                m |= if r > a { marker::LB } else { marker::LC_MAX };
            }
            let p = mixface::MinkVec3::from_array(acc.mul_c(rot).re());
            row.push(mesh.add_vertex(p, MarkerSet::with(m)));
        }
        grid.push(row);
    }
    for j in 0..n_t {
        mesh.add_face(center, grid[0][j], grid[0][j + 1]);
    }
    for i in 0..rvals.len() - 1 {
        for j in 0..n_t {
            let (v00, v01) = (grid[i][j], grid[i][j + 1]);
            let (v10, v11) = (grid[i + 1][j], grid[i + 1][j + 1]);
            mesh.add_face(v00, v10, v11);
            mesh.add_face(v00, v11, v01);
        }
    }
    Ok(mesh)
}
