//! Fundamental pieces of the fold member, their join along the fold curve,
//! the reflection-group extension to the 32-copy block, the translation
//! lattice, and the embeddedness / containment / genus verifications.

use crate::error::{Error, Result};
use crate::foldcurve::FoldCurve;
use crate::maxface::{arc_integral, MaxfaceEvaluator};
use crate::mesh::{marker, quotient_mod_lattice, CausalMesh, MarkerSet};
use crate::minkowski::{CausalType, Isometry, MinkVec3};
use crate::periods::Lattice3;
use crate::quad::{CVec3, QuadValue};
use crate::riemann::SurfaceParams;
use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Offset of the outermost quadrature row from the singular set.
const RIM_DELTA: f64 = 1e-3;
/// Weld tolerance for seams produced by reflections.
pub const WELD_TOL: f64 = 1e-8;

/// Triangulated image of the sector {0 <= |z| <= 1-delta, 0 <= arg z <= pi/4}
/// under the fold member (theta = pi/2), translated so the singular rim is
/// the fold curve itself; the rim row is evaluated from the closed-form
/// curve, not as a limit of the integral.
///
/// The radial grid always contains |z| = a, so the boundary column has a
/// vertex exactly at the corner where the planar boundary curve meets the
/// straight segment; without it the copies cannot be glued watertight.
pub fn mesh_omega_max(params: &SurfaceParams, n_r: usize, n_t: usize) -> Result<CausalMesh> {
    if n_r < 4 || n_t < 4 {
        return Err(Error::OutOfRange("mesh resolution must be at least 4".into()));
    }
    let a = params.a();
    let theta = FRAC_PI_2;
    let ev = MaxfaceEvaluator::new(*params, theta)?;
    let fc = FoldCurve::new(*params)?;
    let rot = C64::from_polar(1.0, theta);

    // base shift: rim snaps onto gamma, i.e. subtract f(1)
    let f1 = MinkVec3::from_array(ev.integral_phi0(C64::new(1.0, 0.0))?.mul_c(rot).re());

    // the image gap between the offset row and the rim shrinks like
    // delta^2 at a fold (with an a-dependent constant), so grow delta
    // until the gap clears the weld tolerance comfortably
    let mut delta = RIM_DELTA;
    loop {
        let p = MinkVec3::from_array(ev.integral_phi0(C64::new(1.0 - delta, 0.0))?.mul_c(rot).re());
        let gap = (p - f1).norm_euclid();
        if gap >= 20.0 * WELD_TOL || delta > 0.05 {
            break;
        }
        delta *= 2.0;
    }

    // radial grid with |z| = a inserted
    let mut rvals: Vec<f64> = (1..=n_r)
        .map(|i| i as f64 / n_r as f64 * (1.0 - delta))
        .filter(|r| (r - a).abs() > 2e-3)
        .collect();
    rvals.push(a);
    rvals.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let svals: Vec<f64> = (0..=n_t).map(|j| j as f64 * FRAC_PI_4 / n_t as f64).collect();

    let mut mesh = CausalMesh::new();
    let center = mesh.add_vertex(
        MinkVec3::from_array(CVec3::ZERO.mul_c(rot).re()) - f1,
        MarkerSet::with(marker::LA | marker::LC_MAX),
    );
    let mut grid: Vec<Vec<u32>> = Vec::with_capacity(rvals.len());
    for &r in &rvals {
        let mut row = Vec::with_capacity(svals.len());
        let mut acc = ev.integral_phi0(C64::new(r, 0.0))?;
        let mut w = C64::new(params.curve_poly_real(r).sqrt(), 0.0);
        let is_a_row = (r - a).abs() < 1e-12;
        for (j, &s) in svals.iter().enumerate() {
            if j > 0 {
                if is_a_row && j == n_t {
                    // ramification corner: dedicated diagonal path
                    let corner = ev.corner_integral_phi0()?;
                    let p = MinkVec3::from_array(corner.mul_c(rot).re()) - f1;
                    row.push(mesh.add_vertex(p, MarkerSet::with(marker::LC_MAX | marker::LB)));
                    continue;
                }
                let (step, w_next) = arc_integral(params, r, svals[j - 1], s, w)?;
                acc = acc.add(step);
                w = w_next;
            }
            let mut m = 0u8;
            if j == 0 {
                m |= marker::LA;
            }
            if j == n_t {
                m |= if r > a { marker::LB } else { marker::LC_MAX };
            }
            let p = MinkVec3::from_array(acc.mul_c(rot).re()) - f1;
            row.push(mesh.add_vertex(p, MarkerSet::with(m)));
        }
        grid.push(row);
    }
    // rim row from the closed-form curve
    let mut rim = Vec::with_capacity(svals.len());
    for (j, &s) in svals.iter().enumerate() {
        let mut m = marker::FOLD;
        if j == 0 {
            m |= marker::LA;
        }
        if j == n_t {
            m |= marker::LB;
        }
        rim.push(mesh.add_vertex(fc.gamma(s), MarkerSet::with(m)));
    }
    // faces: center fan, then the quad bands, then the rim band
    let sl = CausalType::Spacelike;
    for j in 0..n_t {
        mesh.add_face_tagged(center, grid[0][j], grid[0][j + 1], sl);
    }
    for i in 0..rvals.len() - 1 {
        for j in 0..n_t {
            let (v00, v01) = (grid[i][j], grid[i][j + 1]);
            let (v10, v11) = (grid[i + 1][j], grid[i + 1][j + 1]);
            mesh.add_face_tagged(v00, v10, v11, sl);
            mesh.add_face_tagged(v00, v11, v01, sl);
        }
    }
    let last = rvals.len() - 1;
    for j in 0..n_t {
        let (v00, v01) = (grid[last][j], grid[last][j + 1]);
        let (v10, v11) = (rim[j], rim[j + 1]);
        mesh.add_face_tagged(v00, v10, v11, sl);
        mesh.add_face_tagged(v00, v11, v01, sl);
    }
    Ok(mesh)
}

/// Triangulated image of the timelike extension over
/// (u,v) in [0, pi/4] x (0, pi/2], with the v -> 0 row snapped to the fold
/// curve (the same parameter samples as the spacelike rim).
pub fn mesh_omega_min(params: &SurfaceParams, n_u: usize, n_v: usize) -> Result<CausalMesh> {
    if n_u < 4 || n_v < 4 {
        return Err(Error::OutOfRange("mesh resolution must be at least 4".into()));
    }
    let fc = FoldCurve::new(*params)?;
    let mut mesh = CausalMesh::new();
    let mut grid: Vec<Vec<u32>> = Vec::new();
    for i in 0..=n_u {
        let u = i as f64 * FRAC_PI_4 / n_u as f64;
        let mut row = Vec::with_capacity(n_v + 1);
        for j in 0..=n_v {
            let v = j as f64 * FRAC_PI_2 / n_v as f64;
            let p = if j == 0 { fc.gamma(u) } else { fc.f_tilde(u, v) };
            let mut m = 0u8;
            if j == 0 {
                m |= marker::FOLD;
            }
            if j == n_v {
                m |= marker::LC_MIN;
            }
            if i == 0 {
                m |= marker::LA;
            }
            if i == n_u {
                m |= marker::LB;
            }
            row.push(mesh.add_vertex(p, MarkerSet::with(m)));
        }
        grid.push(row);
    }
    for i in 0..n_u {
        for j in 0..n_v {
            let (v00, v01) = (grid[i][j], grid[i][j + 1]);
            let (v10, v11) = (grid[i + 1][j], grid[i + 1][j + 1]);
            mesh.add_face_tagged(v00, v10, v11, CausalType::Timelike);
            mesh.add_face_tagged(v00, v11, v01, CausalType::Timelike);
        }
    }
    Ok(mesh)
}

/// Identify the two rims (sampled at the same fold-curve parameters) and
/// weld the pieces into the connected block Omega^1.
pub fn join_omega1(max_mesh: &CausalMesh, min_mesh: &CausalMesh) -> Result<CausalMesh> {
    let rim_a = max_mesh.marked_vertices(marker::FOLD);
    let rim_b = min_mesh.marked_vertices(marker::FOLD);
    if rim_a.len() != rim_b.len() {
        return Err(Error::WeldMismatch(format!(
            "rim sample counts differ: {} vs {}",
            rim_a.len(),
            rim_b.len()
        )));
    }
    // both rims are sorted by construction (increasing fold parameter)
    for (k, (&ia, &ib)) in rim_a.iter().zip(&rim_b).enumerate() {
        let d = (max_mesh.vertices[ia as usize] - min_mesh.vertices[ib as usize]).norm_euclid();
        if d > WELD_TOL {
            return Err(Error::SeamMismatch { index: k, dist: d, tol: WELD_TOL });
        }
    }
    let joined = CausalMesh::merged(&[max_mesh, min_mesh]).welded(WELD_TOL);
    // the join must be connected
    if connected_components(&joined) != 1 {
        return Err(Error::WeldMismatch("joined block is not connected".into()));
    }
    Ok(joined)
}

pub fn connected_components(mesh: &CausalMesh) -> usize {
    let n = mesh.vertices.len();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(p: &mut Vec<u32>, i: u32) -> u32 {
        let mut i = i;
        while p[i as usize] != i {
            p[i as usize] = p[p[i as usize] as usize];
            i = p[i as usize];
        }
        i
    }
    for f in &mesh.faces {
        let a = find(&mut parent, f[0]);
        let b = find(&mut parent, f[1]);
        let c = find(&mut parent, f[2]);
        parent[b as usize] = a;
        parent[c as usize] = a;
    }
    let mut roots = std::collections::BTreeSet::new();
    for i in 0..n as u32 {
        roots.insert(find(&mut parent, i));
    }
    roots.len()
}

/// A straight boundary segment recovered from marked vertices.
struct FittedLine {
    point: MinkVec3,
    dir: MinkVec3,
}

fn fit_line(points: &[MinkVec3]) -> Result<FittedLine> {
    if points.len() < 2 {
        return Err(Error::WeldMismatch("not enough marked vertices for a line".into()));
    }
    let n = points.len() as f64;
    let mut centroid = MinkVec3::ZERO;
    for p in points {
        centroid = centroid + *p;
    }
    centroid = centroid * (1.0 / n);
    // direction: the farthest pair
    let mut best = (0usize, 0usize, 0.0f64);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = (points[i] - points[j]).norm_euclid();
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let dir = (points[best.1] - points[best.0]) * (1.0 / best.2);
    // collinearity residual
    let mut worst: f64 = 0.0;
    for p in points {
        let d = *p - centroid;
        let along = d.dot_euclid(dir);
        let off = d - dir * along;
        worst = worst.max(off.norm_euclid());
    }
    if worst > 1e-7 {
        return Err(Error::WeldMismatch(format!("marked vertices not collinear (dev {worst:.2e})")));
    }
    Ok(FittedLine { point: centroid, dir })
}

/// The assembled 32-copy block together with its translation lattice.
#[derive(Clone)]
pub struct AssembledSurface {
    pub mesh: CausalMesh,
    pub lattice: Lattice3,
    pub lhat_b: f64,
    pub lhat_c: f64,
    /// L_C^max lies in the plane x1 - x2 = plane_offset.
    pub plane_offset: f64,
    pub faces_omega1: usize,
}

/// Apply the reflection sequence to the joined block:
/// plane of L_C^max, the lines L_A and L_A', a quarter-turn about the
/// x0-axis, then the lines through one bottom horizontal segment and one
/// connecting vertical segment; copies are welded along the shared
/// boundary segments.
pub fn extend_to_omega32(params: &SurfaceParams, omega1: &CausalMesh) -> Result<AssembledSurface> {
    let faces_omega1 = omega1.faces.len();

    // plane of L_C^max: x1 - x2 = k, normal (0,1,-1)
    let lc_pts: Vec<MinkVec3> = omega1
        .marked_vertices(marker::LC_MAX)
        .iter()
        .map(|&i| omega1.vertices[i as usize])
        .collect();
    if lc_pts.len() < 3 {
        return Err(Error::WeldMismatch("too few planar-boundary vertices".into()));
    }
    let k_c = lc_pts.iter().map(|p| p.x1 - p.x2).sum::<f64>() / lc_pts.len() as f64;
    let planarity = lc_pts
        .iter()
        .map(|p| (p.x1 - p.x2 - k_c).abs())
        .fold(0.0f64, f64::max);
    if planarity > 1e-8 {
        return Err(Error::WeldMismatch(format!(
            "planar boundary curve deviates from its plane by {planarity:.2e}"
        )));
    }
    let r1 = Isometry::reflect_about_plane(MinkVec3::new(0.0, k_c, 0.0), MinkVec3::new(0.0, 1.0, -1.0))?;
    let omega2 = CausalMesh::merged(&[omega1, &omega1.transformed(&r1)]).welded(WELD_TOL);

    // L_A and its mirror image (fit from the single block, where the
    // marker identifies one line only)
    let la_pts: Vec<MinkVec3> = omega1
        .marked_vertices(marker::LA)
        .iter()
        .map(|&i| omega1.vertices[i as usize])
        .collect();
    let la = fit_line(&la_pts)?;
    let r2 = Isometry::reflect_about_line(la.point, la.dir)?;
    let la_p = (r1.apply(la.point), r1.apply_dir(la.dir));
    let r3 = Isometry::reflect_about_line(la_p.0, la_p.1)?;
    let omega4 = CausalMesh::merged(&[&omega2, &omega2.transformed(&r2)]);
    let omega8 = CausalMesh::merged(&[&omega4, &omega4.transformed(&r3)]).welded(WELD_TOL);

    // quarter turn so the straight boundary segments align with the axes
    let rot = Isometry::rotate_x0(FRAC_PI_4);
    let omega8 = omega8.transformed(&rot);

    // one horizontal boundary line parallel to the x1-axis: group the
    // straight-segment vertices by (x0, x2); quantization can produce
    // spurious tiny clusters (vertices a fold-gap apart share a bucket),
    // so only groups of substantial extent along the line count
    let lb_groups = keep_long(group_marked(&omega8, marker::LB, |p| (p.x0, p.x2)), |p| p.x1);
    let lb_key = lb_groups
        .keys()
        .min_by(|a, b| a.partial_cmp(b).unwrap())
        .copied()
        .ok_or_else(|| Error::WeldMismatch("no horizontal boundary lines found".into()))?;
    let lb_pts = &lb_groups[&lb_key];
    let h0 = lb_pts.iter().map(|p| p.x0).sum::<f64>() / lb_pts.len() as f64;
    let k0 = lb_pts.iter().map(|p| p.x2).sum::<f64>() / lb_pts.len() as f64;
    let (x1_lo, x1_hi) = extent(lb_pts.iter().map(|p| p.x1));
    let lhat_b = x1_hi - x1_lo;

    // a vertical boundary line connecting to an endpoint of the one above
    let lc_groups = keep_long(group_marked(&omega8, marker::LC_MIN, |p| (p.x1, p.x2)), |p| p.x0);
    let lc_key = lc_groups
        .keys()
        .min_by(|a, b| {
            let da = dist_to_ends(**a, (x1_lo, x1_hi, k0));
            let db = dist_to_ends(**b, (x1_lo, x1_hi, k0));
            da.partial_cmp(&db).unwrap()
        })
        .copied()
        .ok_or_else(|| Error::WeldMismatch("no vertical boundary lines found".into()))?;
    let lc_pts8 = &lc_groups[&lc_key];
    let c1 = lc_pts8.iter().map(|p| p.x1).sum::<f64>() / lc_pts8.len() as f64;
    let c2 = lc_pts8.iter().map(|p| p.x2).sum::<f64>() / lc_pts8.len() as f64;
    let (x0_lo, x0_hi) = extent(lc_pts8.iter().map(|p| p.x0));
    let lhat_c = x0_hi - x0_lo;

    let r4 = Isometry::reflect_about_line(MinkVec3::new(h0, 0.0, k0), MinkVec3::new(0.0, 1.0, 0.0))?;
    let r5 = Isometry::reflect_about_line(MinkVec3::new(0.0, c1, c2), MinkVec3::new(1.0, 0.0, 0.0))?;
    // independent oracle for the measured vertical segment: a pair of
    // fused copies spans twice the height of one piece, 2 tau(pi/4)
    let fc = FoldCurve::new(*params)?;
    let expect = 2.0 * fc.tau(std::f64::consts::FRAC_PI_4);
    if (lhat_c - expect).abs() > 1e-8 {
        return Err(Error::CrossCheckFailure {
            what: "vertical boundary segment length vs quadrature".into(),
            rel: (lhat_c - expect).abs() / expect,
            tol: 1e-8,
        });
    }

    let omega16 = CausalMesh::merged(&[&omega8, &omega8.transformed(&r4)]);
    let mut omega32 = CausalMesh::merged(&[&omega16, &omega16.transformed(&r5)]).welded(WELD_TOL);

    if omega32.faces.len() != 32 * faces_omega1 {
        return Err(Error::WeldMismatch(format!(
            "expected {} faces after 32 copies, found {}",
            32 * faces_omega1,
            omega32.faces.len()
        )));
    }
    omega32.orient_consistently()?;

    let lattice = Lattice3::new([
        MinkVec3::new(2.0 * lhat_c, 0.0, 0.0),
        MinkVec3::new(0.0, 2.0 * lhat_b, 0.0),
        MinkVec3::new(0.0, 0.0, 2.0 * lhat_b),
    ])?;
    Ok(AssembledSurface { mesh: omega32, lattice, lhat_b, lhat_c, plane_offset: k_c, faces_omega1 })
}

fn extent(vals: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in vals {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    (lo, hi)
}

fn dist_to_ends(key: (i64, i64), ends: (f64, f64, f64)) -> f64 {
    let x1 = key.0 as f64 * 1e-5;
    let x2 = key.1 as f64 * 1e-5;
    let (lo, hi, k0) = ends;
    ((x1 - lo).abs().min((x1 - hi).abs())) + (x2 - k0).abs()
}

/// Keep only candidate groups that look like well-sampled segments: long
/// along the line axis, with no sampling gap comparable to the whole
/// extent (quantization can bucket a few far-apart coincident vertices
/// from different lines together).
fn keep_long(
    groups: std::collections::BTreeMap<(i64, i64), Vec<MinkVec3>>,
    along: impl Fn(&MinkVec3) -> f64,
) -> std::collections::BTreeMap<(i64, i64), Vec<MinkVec3>> {
    let extent_of = |v: &Vec<MinkVec3>| {
        let (lo, hi) = extent(v.iter().map(&along));
        hi - lo
    };
    let well_sampled = |v: &Vec<MinkVec3>| {
        let mut xs: Vec<f64> = v.iter().map(&along).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let ext = xs.last().unwrap() - xs.first().unwrap();
        let max_gap = xs.windows(2).map(|w| w[1] - w[0]).fold(0.0f64, f64::max);
        max_gap <= 0.6 * ext
    };
    let longest = groups.values().map(extent_of).fold(0.0f64, f64::max);
    groups
        .into_iter()
        .filter(|(_, v)| extent_of(v) >= 0.5 * longest && well_sampled(v))
        .collect()
}

/// Group marked vertices into straight lines by a quantized coordinate pair.
fn group_marked(
    mesh: &CausalMesh,
    bit: u8,
    key: impl Fn(&MinkVec3) -> (f64, f64),
) -> std::collections::BTreeMap<(i64, i64), Vec<MinkVec3>> {
    let mut groups: std::collections::BTreeMap<(i64, i64), Vec<MinkVec3>> = Default::default();
    for &i in &mesh.marked_vertices(bit) {
        let p = mesh.vertices[i as usize];
        let (a, b) = key(&p);
        let q = ((a * 1e5).round() as i64, (b * 1e5).round() as i64);
        groups.entry(q).or_default().push(p);
    }
    groups.retain(|_, v| v.len() >= 3);
    groups
}

/// Genus of the quotient surface: boundary vertices congruent modulo the
/// lattice are identified; errors if any boundary edge remains unpaired.
pub fn quotient_genus(assembled: &AssembledSurface) -> Result<i64> {
    let gens = assembled.lattice.generators;
    let q = quotient_mod_lattice(&assembled.mesh, &gens, 1e-6)?;
    let unpaired = q.boundary_edges().len();
    if unpaired > 0 {
        return Err(Error::NotClosed { unpaired });
    }
    if q.edge_face_counts().values().any(|&c| c != 2) {
        return Err(Error::NotClosed { unpaired: 0 });
    }
    let chi = q.euler_characteristic();
    Ok((2 - chi) / 2)
}

/// Prism-containment report for the joined block.
#[derive(Clone, Debug, Serialize)]
pub struct ContainmentReport {
    /// Largest signed violation: positive means a vertex escapes the prism.
    pub max_violation: f64,
    /// x0-extent of the vertical boundary segment (the prism height).
    pub height: f64,
    /// |leg1| - |leg2| of the projected boundary triangle.
    pub isosceles_defect: f64,
    /// The three triangle corners in the x1x2-plane.
    pub triangle: [[f64; 2]; 3],
}

/// Verify the joined block lies inside the vertical prism over the
/// projected boundary triangle, with the vertical segment's extent as
/// height. Lines are recovered from boundary markers.
pub fn prism_containment(omega1: &CausalMesh) -> Result<ContainmentReport> {
    let pts = |bit: u8| -> Vec<MinkVec3> {
        omega1
            .marked_vertices(bit)
            .iter()
            .map(|&i| omega1.vertices[i as usize])
            .collect()
    };
    let la = pts(marker::LA);
    let lb = pts(marker::LB);
    let lc = pts(marker::LC_MAX);
    let lcmin = pts(marker::LC_MIN);
    if la.is_empty() || lb.is_empty() || lc.is_empty() || lcmin.is_empty() {
        return Err(Error::WeldMismatch("missing boundary markers".into()));
    }
    // projected boundary lines: x1 = kA (from L_A), x1 + x2 = kB (L_B),
    // x1 - x2 = kC (planar curve)
    let k_a = la.iter().map(|p| p.x1).sum::<f64>() / la.len() as f64;
    let k_b = lb.iter().map(|p| p.x1 + p.x2).sum::<f64>() / lb.len() as f64;
    let k_c = lc.iter().map(|p| p.x1 - p.x2).sum::<f64>() / lc.len() as f64;
    // triangle corners
    let corner_ab = [k_a, k_b - k_a];
    let corner_ac = [k_a, k_a - k_c];
    let corner_bc = [(k_b + k_c) / 2.0, (k_b - k_c) / 2.0];
    let leg1 = ((corner_bc[0] - corner_ab[0]).powi(2) + (corner_bc[1] - corner_ab[1]).powi(2)).sqrt();
    let leg2 = ((corner_bc[0] - corner_ac[0]).powi(2) + (corner_bc[1] - corner_ac[1]).powi(2)).sqrt();
    // interior side of each line, from the projected centroid
    let n = omega1.vertices.len() as f64;
    let cx = omega1.vertices.iter().map(|p| p.x1).sum::<f64>() / n;
    let cy = omega1.vertices.iter().map(|p| p.x2).sum::<f64>() / n;
    let sides = [
        (1.0, 0.0, k_a),  // x1 = kA
        (1.0, 1.0, k_b),  // x1 + x2 = kB
        (1.0, -1.0, k_c), // x1 - x2 = kC
    ];
    let signs: Vec<f64> = sides
        .iter()
        .map(|(a, b, k)| (a * cx + b * cy - k).signum())
        .collect();
    let (h_lo, h_hi) = extent(lcmin.iter().map(|p| p.x0));
    let mut max_violation = f64::NEG_INFINITY;
    for p in &omega1.vertices {
        for ((a, b, k), s) in sides.iter().zip(&signs) {
            // distance beyond the line (outside the triangle)
            let val = (a * p.x1 + b * p.x2 - k) * s / (a * a + b * b).sqrt();
            max_violation = max_violation.max(-val);
        }
        max_violation = max_violation.max(h_lo - p.x0).max(p.x0 - h_hi);
    }
    Ok(ContainmentReport {
        max_violation,
        height: h_hi - h_lo,
        isosceles_defect: leg1 - leg2,
        triangle: [corner_ab, corner_ac, corner_bc],
    })
}

/// Direct injectivity probe of the height-parametrized extension on a grid
/// over [-c_a, c_a] x (0, c_a): points sharing a height may not collide.
/// Returns the smallest pairwise distance among equal-height samples.
pub fn midpoint_injectivity_check(fc: &FoldCurve, n_alpha: usize, n_beta: usize) -> Result<f64> {
    // convexity precondition
    for k in 0..256 {
        let s = 2.0 * std::f64::consts::PI * k as f64 / 255.0;
        if fc.projected_curvature(s) <= 0.0 {
            return Err(Error::CriterionViolation("projected curve not convex".into()));
        }
    }
    let ca = fc.c_a();
    let mut min_dist = f64::INFINITY;
    for i in 0..=n_alpha {
        let alpha = -ca + 2.0 * ca * i as f64 / n_alpha as f64;
        let mut col: Vec<MinkVec3> = Vec::with_capacity(n_beta);
        for j in 1..=n_beta {
            let beta = ca * j as f64 / (n_beta as f64 + 1.0);
            col.push(fc.check_f(alpha, beta)?);
        }
        for x in 0..col.len() {
            for y in x + 1..col.len() {
                min_dist = min_dist.min((col[x] - col[y]).norm_euclid());
            }
        }
    }
    Ok(min_dist)
}

/// Mesh of the height-parametrized extension over
/// [-c_a, c_a] x (0, c_a) (the full embedded strip).
pub fn mesh_check_f_strip(fc: &FoldCurve, n_alpha: usize, n_beta: usize) -> Result<CausalMesh> {
    let ca = fc.c_a();
    let mut mesh = CausalMesh::new();
    let mut grid = Vec::new();
    for i in 0..=n_alpha {
        let alpha = -ca + 2.0 * ca * i as f64 / n_alpha as f64;
        let mut row = Vec::new();
        for j in 0..=n_beta {
            let beta = ca * (j as f64 + 0.5) / (n_beta as f64 + 1.0);
            row.push(mesh.add_vertex(fc.check_f(alpha, beta)?, MarkerSet::NONE));
        }
        grid.push(row);
    }
    for i in 0..n_alpha {
        for j in 0..n_beta {
            mesh.add_face_tagged(grid[i][j], grid[i + 1][j], grid[i + 1][j + 1], CausalType::Timelike);
            mesh.add_face_tagged(grid[i][j], grid[i + 1][j + 1], grid[i][j + 1], CausalType::Timelike);
        }
    }
    Ok(mesh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intersect::self_intersection_scan;
    use crate::minkowski::CausalType;
    use crate::riemann::make_params;
    use approx::assert_abs_diff_eq;

    #[test]
    fn omega1_shape_and_tags() {
        let params = make_params(0.52).unwrap();
        let mmax = mesh_omega_max(&params, 10, 6).unwrap();
        let mmin = mesh_omega_min(&params, 6, 8).unwrap();
        // causal tags: spacelike piece and timelike piece
        let census_max = mmax.causal_census();
        assert_eq!(census_max[CausalType::Timelike.as_u8() as usize], 0);
        assert!(census_max[CausalType::Spacelike.as_u8() as usize] > 0);
        let census_min = mmin.causal_census();
        assert_eq!(census_min[CausalType::Spacelike.as_u8() as usize], 0);
        assert!(census_min[CausalType::Timelike.as_u8() as usize] > 0);
        // vertex accounting through the weld
        let shared = mmax.marked_vertices(marker::FOLD).len();
        let om1 = join_omega1(&mmax, &mmin).unwrap();
        assert_eq!(
            om1.vertices.len(),
            mmax.vertices.len() + mmin.vertices.len() - shared
        );
        assert_eq!(om1.euler_characteristic(), 1); // a disk
        assert_eq!(connected_components(&om1), 1);
        // the projection of the spacelike piece is injective on vertices
        let mut seen: Vec<(i64, i64)> = mmax
            .vertices
            .iter()
            .map(|p| ((p.x1 * 1e7).round() as i64, (p.x2 * 1e7).round() as i64))
            .collect();
        seen.sort_unstable();
        let before = seen.len();
        seen.dedup();
        assert_eq!(seen.len(), before, "projection collides");
        // L_A vertices: constant (x0, x1)
        for &i in &mmax.marked_vertices(marker::LA) {
            let p = mmax.vertices[i as usize];
            assert!(p.x0.abs() < 1e-9 && p.x1.abs() < 1e-9);
        }
    }

    #[test]
    fn seam_mismatch_is_detected() {
        let params = make_params(0.52).unwrap();
        let mmax = mesh_omega_max(&params, 10, 6).unwrap();
        let mut mmin = mesh_omega_min(&params, 6, 8).unwrap();
        // displace one rim vertex
        let rim = mmin.marked_vertices(marker::FOLD);
        mmin.vertices[rim[2] as usize].x1 += 1e-5;
        assert!(matches!(
            join_omega1(&mmax, &mmin),
            Err(Error::SeamMismatch { .. })
        ));
    }

    #[test]
    fn assembled_block_properties() {
        let params = make_params(0.52).unwrap();
        let om1 = join_omega1(
            &mesh_omega_max(&params, 10, 6).unwrap(),
            &mesh_omega_min(&params, 6, 8).unwrap(),
        )
        .unwrap();
        let asm = extend_to_omega32(&params, &om1).unwrap();
        assert_eq!(asm.mesh.faces.len(), 32 * om1.faces.len());
        // bounding box = [0, 2|LC|] x (2|LB|)^2 up to tolerance
        let (lo, hi) = asm.mesh.bounding_box();
        let ext = hi - lo;
        assert_abs_diff_eq!(ext.x0, 2.0 * asm.lhat_c, epsilon = 1e-8);
        assert_abs_diff_eq!(ext.x1, 2.0 * asm.lhat_b, epsilon = 1e-8);
        assert_abs_diff_eq!(ext.x2, 2.0 * asm.lhat_b, epsilon = 1e-8);
        // |LC| = 2 tau(pi/4) = c_a / 2: adjacent vertical segments fuse
        let fc = FoldCurve::new(params).unwrap();
        assert_abs_diff_eq!(asm.lhat_c, 2.0 * fc.tau(FRAC_PI_4), epsilon = 1e-8);
        assert_abs_diff_eq!(asm.lhat_c, fc.c_a() / 2.0, epsilon = 1e-8);
        // causal census scales by 32
        let c1 = om1.causal_census();
        let c32 = asm.mesh.causal_census();
        assert_eq!(c32[0], 32 * c1[0]);
        assert_eq!(c32[1], 32 * c1[1]);
        // genus three
        let g = quotient_genus(&asm).unwrap();
        assert_eq!(g, 3);
        // and the embedded block has no self-intersections
        assert!(self_intersection_scan(&asm.mesh).is_empty());
    }

    #[test]
    fn containment_and_injectivity() {
        let params = make_params(0.52).unwrap();
        let om1 = join_omega1(
            &mesh_omega_max(&params, 10, 6).unwrap(),
            &mesh_omega_min(&params, 6, 8).unwrap(),
        )
        .unwrap();
        let rep = prism_containment(&om1).unwrap();
        assert!(rep.max_violation <= 1e-7, "violation {}", rep.max_violation);
        assert!(rep.isosceles_defect.abs() < 1e-7);
        let fc = FoldCurve::new(params).unwrap();
        assert_abs_diff_eq!(rep.height, fc.tau(FRAC_PI_4), epsilon = 1e-8);
        // a displaced vertex is reported
        let mut bad = om1.clone();
        bad.vertices[10].x1 += 0.3;
        let rep2 = prism_containment(&bad).unwrap();
        assert!(rep2.max_violation > 0.1);
        // injectivity of the strip
        let d = midpoint_injectivity_check(&fc, 40, 24).unwrap();
        assert!(d > 1e-6, "near-collision at distance {d}");
    }
}
