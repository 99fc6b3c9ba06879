//! Self-intersection scan: uniform-grid broad phase over face bounding
//! boxes, exact-enough triangle/triangle narrow phase in the Euclidean
//! auxiliary metric. Face pairs sharing a vertex index are excluded.

use crate::mesh::CausalMesh;
use crate::minkowski::MinkVec3;
use std::collections::{BTreeSet, HashMap};

const EPS: f64 = 1e-10;

fn sub(a: MinkVec3, b: MinkVec3) -> [f64; 3] {
    [a.x0 - b.x0, a.x1 - b.x1, a.x2 - b.x2]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

/// Does the segment [p,q] cross triangle (a,b,c) properly (Moller-Trumbore
/// with a small parametric margin so shared boundaries do not count)?
fn segment_hits_triangle(p: MinkVec3, q: MinkVec3, a: MinkVec3, b: MinkVec3, c: MinkVec3) -> bool {
    let dir = sub(q, p);
    let e1 = sub(b, a);
    let e2 = sub(c, a);
    let h = cross(dir, e2);
    let det = dot(e1, h);
    let scale = norm(e1) * norm(e2) * norm(dir).max(1e-300);
    if det.abs() <= 1e-12 * scale {
        return false; // parallel to the plane; coplanar overlap handled separately
    }
    let inv = 1.0 / det;
    let s = sub(p, a);
    let u = dot(s, h) * inv;
    if !(EPS..=1.0 - EPS).contains(&u) {
        return false;
    }
    let qv = cross(s, e1);
    let v = dot(dir, qv) * inv;
    if v < EPS || u + v > 1.0 - EPS {
        return false;
    }
    let t = dot(e2, qv) * inv;
    (EPS..=1.0 - EPS).contains(&t)
}

/// Proper intersection test of two triangles: any edge of one piercing the
/// interior of the other. Touching along shared boundary points is not an
/// intersection.
pub fn triangles_intersect(t1: [MinkVec3; 3], t2: [MinkVec3; 3]) -> bool {
    for i in 0..3 {
        let (p, q) = (t1[i], t1[(i + 1) % 3]);
        if segment_hits_triangle(p, q, t2[0], t2[1], t2[2]) {
            return true;
        }
        let (p, q) = (t2[i], t2[(i + 1) % 3]);
        if segment_hits_triangle(p, q, t1[0], t1[1], t1[2]) {
            return true;
        }
    }
    false
}

/// All intersecting face pairs (broad phase + narrow phase); pairs sharing
/// at least one vertex index are skipped. The result is sorted, so the
/// scan is deterministic.
pub fn self_intersection_scan(mesh: &CausalMesh) -> Vec<(u32, u32)> {
    let nf = mesh.faces.len();
    if nf == 0 {
        return Vec::new();
    }
    // cell size: twice the median face extent
    let mut extents: Vec<f64> = Vec::with_capacity(nf);
    let mut boxes: Vec<([f64; 3], [f64; 3])> = Vec::with_capacity(nf);
    for f in &mesh.faces {
        let pts = [
            mesh.vertices[f[0] as usize],
            mesh.vertices[f[1] as usize],
            mesh.vertices[f[2] as usize],
        ];
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for p in pts {
            let arr = p.to_array();
            for k in 0..3 {
                lo[k] = lo[k].min(arr[k]);
                hi[k] = hi[k].max(arr[k]);
            }
        }
        extents.push((hi[0] - lo[0]).max(hi[1] - lo[1]).max(hi[2] - lo[2]));
        boxes.push((lo, hi));
    }
    let mut sorted = extents.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let cell = (2.0 * sorted[nf / 2]).max(1e-9);
    let mut grid: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
    let key = |x: f64| (x / cell).floor() as i64;
    for (fi, (lo, hi)) in boxes.iter().enumerate() {
        for ix in key(lo[0])..=key(hi[0]) {
            for iy in key(lo[1])..=key(hi[1]) {
                for iz in key(lo[2])..=key(hi[2]) {
                    grid.entry((ix, iy, iz)).or_default().push(fi as u32);
                }
            }
        }
    }
    let shares_vertex = |f: &[u32; 3], g: &[u32; 3]| {
        f.iter().any(|a| g.contains(a))
    };
    let mut hits: BTreeSet<(u32, u32)> = BTreeSet::new();
    let mut candidates: BTreeSet<(u32, u32)> = BTreeSet::new();
    for list in grid.values() {
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                let (a, b) = (list[i].min(list[j]), list[i].max(list[j]));
                candidates.insert((a, b));
            }
        }
    }
    for (a, b) in candidates {
        let (fa, fb) = (&mesh.faces[a as usize], &mesh.faces[b as usize]);
        if shares_vertex(fa, fb) {
            continue;
        }
        let (la, ha) = boxes[a as usize];
        let (lb, hb) = boxes[b as usize];
        if (0..3).any(|k| ha[k] < lb[k] - EPS || hb[k] < la[k] - EPS) {
            continue;
        }
        let t1 = [
            mesh.vertices[fa[0] as usize],
            mesh.vertices[fa[1] as usize],
            mesh.vertices[fa[2] as usize],
        ];
        let t2 = [
            mesh.vertices[fb[0] as usize],
            mesh.vertices[fb[1] as usize],
            mesh.vertices[fb[2] as usize],
        ];
        if triangles_intersect(t1, t2) {
            hits.insert((a, b));
        }
    }
    hits.into_iter().collect()
}
