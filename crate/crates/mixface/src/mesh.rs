//! Indexed triangle meshes whose faces carry a causal-type tag and whose
//! vertices carry boundary markers, plus welding, orientation and Euler
//! characteristic utilities.

use crate::error::{Error, Result};
use crate::minkowski::{minkowski_dot, CausalType, Isometry, MinkVec3};
use std::collections::HashMap;

/// Vertex markers, stored as a small bit set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MarkerSet(pub u8);

pub mod marker {
    pub const LA: u8 = 1;
    pub const LB: u8 = 2;
    pub const LC_MAX: u8 = 4;
    pub const LC_MIN: u8 = 8;
    pub const FOLD: u8 = 16;
}

impl MarkerSet {
    pub const NONE: MarkerSet = MarkerSet(0);

    pub fn with(bits: u8) -> Self {
        MarkerSet(bits)
    }

    pub fn has(self, bit: u8) -> bool {
        self.0 & bit != 0
    }

    pub fn union(self, o: MarkerSet) -> MarkerSet {
        MarkerSet(self.0 | o.0)
    }
}

/// Indexed triangle mesh in R^3_1.
#[derive(Clone, Debug, Default)]
pub struct CausalMesh {
    pub vertices: Vec<MinkVec3>,
    pub markers: Vec<MarkerSet>,
    pub faces: Vec<[u32; 3]>,
    pub face_tags: Vec<CausalType>,
}

impl CausalMesh {
    pub fn new() -> Self {
        Default::default()
    }

    pub fn add_vertex(&mut self, p: MinkVec3, m: MarkerSet) -> u32 {
        self.vertices.push(p);
        self.markers.push(m);
        (self.vertices.len() - 1) as u32
    }

    /// Push a face with an explicit causal tag (used by the fundamental
    /// piece meshes, whose analytic causal type is known; secant planes of
    /// triangles touching the fold curve would misclassify).
    pub fn add_face_tagged(&mut self, i: u32, j: u32, k: u32, tag: CausalType) {
        self.faces.push([i, j, k]);
        self.face_tags.push(tag);
    }

    /// Push a face, tagging it by the causal type of its own plane.
    pub fn add_face(&mut self, i: u32, j: u32, k: u32) {
        let tag = face_causal_type(
            self.vertices[i as usize],
            self.vertices[j as usize],
            self.vertices[k as usize],
        );
        self.faces.push([i, j, k]);
        self.face_tags.push(tag);
    }

    pub fn marked_vertices(&self, bit: u8) -> Vec<u32> {
        (0..self.vertices.len() as u32)
            .filter(|&i| self.markers[i as usize].has(bit))
            .collect()
    }

    /// Apply an affine isometry; orientation-reversing maps flip windings
    /// so the copy can weld into a consistently oriented surface.
    pub fn transformed(&self, iso: &Isometry) -> CausalMesh {
        let mut out = self.clone();
        for v in &mut out.vertices {
            *v = iso.apply(*v);
        }
        if iso.linear.det() < 0.0 {
            for f in &mut out.faces {
                f.swap(1, 2);
            }
        }
        out
    }

    pub fn translated(&self, t: MinkVec3) -> CausalMesh {
        self.transformed(&Isometry::translation(t))
    }

    /// Concatenate meshes (no welding).
    pub fn merged(parts: &[&CausalMesh]) -> CausalMesh {
        let mut out = CausalMesh::new();
        for m in parts {
            let off = out.vertices.len() as u32;
            out.vertices.extend_from_slice(&m.vertices);
            out.markers.extend_from_slice(&m.markers);
            for (f, t) in m.faces.iter().zip(&m.face_tags) {
                out.faces.push([f[0] + off, f[1] + off, f[2] + off]);
                out.face_tags.push(*t);
            }
        }
        out
    }

    /// Merge vertices closer than `tol` (max-norm), drop degenerate faces.
    pub fn welded(&self, tol: f64) -> CausalMesh {
        let inv = 1.0 / (4.0 * tol);
        let mut buckets: HashMap<(i64, i64, i64), Vec<u32>> = HashMap::new();
        let mut remap: Vec<u32> = Vec::with_capacity(self.vertices.len());
        let mut verts: Vec<MinkVec3> = Vec::new();
        let mut marks: Vec<MarkerSet> = Vec::new();
        for (i, p) in self.vertices.iter().enumerate() {
            let key = (
                (p.x0 * inv).round() as i64,
                (p.x1 * inv).round() as i64,
                (p.x2 * inv).round() as i64,
            );
            let mut found: Option<u32> = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(list) = buckets.get(&(key.0 + dx, key.1 + dy, key.2 + dz)) {
                            for &cand in list {
                                let q = verts[cand as usize];
                                if (q.x0 - p.x0).abs() <= tol
                                    && (q.x1 - p.x1).abs() <= tol
                                    && (q.x2 - p.x2).abs() <= tol
                                {
                                    found = Some(cand);
                                    break 'search;
                                }
                            }
                        }
                    }
                }
            }
            match found {
                Some(idx) => {
                    remap.push(idx);
                    marks[idx as usize] = marks[idx as usize].union(self.markers[i]);
                }
                None => {
                    let idx = verts.len() as u32;
                    verts.push(*p);
                    marks.push(self.markers[i]);
                    buckets.entry(key).or_default().push(idx);
                    remap.push(idx);
                }
            }
        }
        let mut out = CausalMesh { vertices: verts, markers: marks, faces: Vec::new(), face_tags: Vec::new() };
        for (f, t) in self.faces.iter().zip(&self.face_tags) {
            let g = [remap[f[0] as usize], remap[f[1] as usize], remap[f[2] as usize]];
            if g[0] != g[1] && g[1] != g[2] && g[2] != g[0] {
                out.faces.push(g);
                out.face_tags.push(*t);
            }
        }
        out
    }

    /// Edges with their face counts, keyed by sorted endpoints.
    pub fn edge_face_counts(&self) -> HashMap<(u32, u32), u32> {
        let mut map = HashMap::new();
        for f in &self.faces {
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let key = (e.0.min(e.1), e.0.max(e.1));
                *map.entry(key).or_insert(0u32) += 1;
            }
        }
        map
    }

    /// Edges on the boundary (exactly one adjacent face).
    pub fn boundary_edges(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .edge_face_counts()
            .into_iter()
            .filter_map(|(e, c)| (c == 1).then_some(e))
            .collect();
        out.sort_unstable();
        out
    }

    /// V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        let e = self.edge_face_counts().len() as i64;
        self.vertices.len() as i64 - e + self.faces.len() as i64
    }

    /// Flip face windings so neighbouring faces traverse shared edges in
    /// opposite directions; errors if the mesh is non-orientable or an
    /// edge has more than two faces.
    pub fn orient_consistently(&mut self) -> Result<()> {
        let mut edge_faces: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let key = (e.0.min(e.1), e.0.max(e.1));
                edge_faces.entry(key).or_default().push(fi as u32);
            }
        }
        if let Some((e, fs)) = edge_faces.iter().find(|(_, fs)| fs.len() > 2) {
            return Err(Error::WeldMismatch(format!(
                "edge {:?} has {} adjacent faces",
                e,
                fs.len()
            )));
        }
        let dir = |f: &[u32; 3], a: u32, b: u32| -> bool {
            // true if edge (a,b) appears as a->b in the face cycle
            (f[0] == a && f[1] == b) || (f[1] == a && f[2] == b) || (f[2] == a && f[0] == b)
        };
        let nf = self.faces.len();
        let mut visited = vec![false; nf];
        let mut flip = vec![false; nf];
        for seed in 0..nf {
            if visited[seed] {
                continue;
            }
            visited[seed] = true;
            let mut stack = vec![seed as u32];
            while let Some(fi) = stack.pop() {
                let f = self.faces[fi as usize];
                let f_or = if flip[fi as usize] { [f[0], f[2], f[1]] } else { f };
                for e in [(f_or[0], f_or[1]), (f_or[1], f_or[2]), (f_or[2], f_or[0])] {
                    let key = (e.0.min(e.1), e.0.max(e.1));
                    for &gi in &edge_faces[&key] {
                        if gi == fi {
                            continue;
                        }
                        let g = self.faces[gi as usize];
                        let g_or = if flip[gi as usize] { [g[0], g[2], g[1]] } else { g };
                        let same_dir = dir(&g_or, e.0, e.1);
                        if !visited[gi as usize] {
                            visited[gi as usize] = true;
                            if same_dir {
                                flip[gi as usize] = !flip[gi as usize];
                            }
                            stack.push(gi);
                        } else if same_dir {
                            return Err(Error::WeldMismatch("mesh is non-orientable".into()));
                        }
                    }
                }
            }
        }
        for (fi, f) in self.faces.iter_mut().enumerate() {
            if flip[fi] {
                f.swap(1, 2);
            }
        }
        Ok(())
    }

    /// Reorder vertices lexicographically by rounded coordinates and sort
    /// faces, so emitted files are reproducible byte for byte.
    pub fn canonicalized(&self) -> CausalMesh {
        let mut order: Vec<u32> = (0..self.vertices.len() as u32).collect();
        let key = |i: &u32| {
            let p = self.vertices[*i as usize];
            (
                (p.x0 * 1e9).round() as i64,
                (p.x1 * 1e9).round() as i64,
                (p.x2 * 1e9).round() as i64,
            )
        };
        order.sort_by_key(key);
        let mut remap = vec![0u32; self.vertices.len()];
        for (new, &old) in order.iter().enumerate() {
            remap[old as usize] = new as u32;
        }
        let mut out = CausalMesh::new();
        out.vertices = order.iter().map(|&i| self.vertices[i as usize]).collect();
        out.markers = order.iter().map(|&i| self.markers[i as usize]).collect();
        let mut faces: Vec<([u32; 3], CausalType)> = self
            .faces
            .iter()
            .zip(&self.face_tags)
            .map(|(f, t)| {
                let g = [remap[f[0] as usize], remap[f[1] as usize], remap[f[2] as usize]];
                // rotate the cycle so the smallest index leads (orientation kept)
                let m = (0..3).min_by_key(|&k| g[k]).unwrap();
                ([g[m], g[(m + 1) % 3], g[(m + 2) % 3]], *t)
            })
            .collect();
        faces.sort_unstable_by_key(|(f, _)| *f);
        for (f, t) in faces {
            out.faces.push(f);
            out.face_tags.push(t);
        }
        out
    }

    /// Euclidean bounding box (min corner, max corner).
    pub fn bounding_box(&self) -> (MinkVec3, MinkVec3) {
        let mut lo = MinkVec3::new(f64::INFINITY, f64::INFINITY, f64::INFINITY);
        let mut hi = MinkVec3::new(f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in &self.vertices {
            lo = MinkVec3::new(lo.x0.min(v.x0), lo.x1.min(v.x1), lo.x2.min(v.x2));
            hi = MinkVec3::new(hi.x0.max(v.x0), hi.x1.max(v.x1), hi.x2.max(v.x2));
        }
        (lo, hi)
    }

    /// Counts per causal tag (spacelike, timelike, lightlike).
    pub fn causal_census(&self) -> [usize; 3] {
        let mut out = [0usize; 3];
        for t in &self.face_tags {
            out[t.as_u8() as usize] += 1;
        }
        out
    }
}

/// Causal type of the triangle's plane from the Gram determinant of its
/// edge vectors (positive definite = spacelike, indefinite = timelike).
pub fn face_causal_type(a: MinkVec3, b: MinkVec3, c: MinkVec3) -> CausalType {
    let e1 = b - a;
    let e2 = c - a;
    let g11 = minkowski_dot(e1, e1);
    let g12 = minkowski_dot(e1, e2);
    let g22 = minkowski_dot(e2, e2);
    let det = g11 * g22 - g12 * g12;
    let scale = (e1.norm_euclid() * e2.norm_euclid()).powi(2).max(1e-300);
    if det > 1e-9 * scale {
        CausalType::Spacelike
    } else if det < -1e-9 * scale {
        CausalType::Timelike
    } else {
        CausalType::Lightlike
    }
}

/// Identify vertices congruent modulo the lattice and return the quotient
/// mesh: coordinates are reduced into the fundamental cell spanned by the
/// generators (anchored at the bounding-box minimum).
pub fn quotient_mod_lattice(mesh: &CausalMesh, gens: &[MinkVec3; 3], tol: f64) -> Result<CausalMesh> {
    // coefficient solve: columns are generators
    let det = {
        let g = gens;
        g[0].x0 * (g[1].x1 * g[2].x2 - g[1].x2 * g[2].x1)
            - g[1].x0 * (g[0].x1 * g[2].x2 - g[0].x2 * g[2].x1)
            + g[2].x0 * (g[0].x1 * g[1].x2 - g[0].x2 * g[1].x1)
    };
    if det.abs() < 1e-12 {
        return Err(Error::DegenerateLattice { det });
    }
    let (lo, _) = mesh.bounding_box();
    let solve = |v: MinkVec3| -> [f64; 3] {
        let mut out = [0.0; 3];
        for k in 0..3 {
            let mut m = *gens;
            m[k] = v;
            let d = m[0].x0 * (m[1].x1 * m[2].x2 - m[1].x2 * m[2].x1)
                - m[1].x0 * (m[0].x1 * m[2].x2 - m[0].x2 * m[2].x1)
                + m[2].x0 * (m[0].x1 * m[1].x2 - m[0].x2 * m[1].x1);
            out[k] = d / det;
        }
        out
    };
    let gen_scale = gens.iter().map(|g| g.norm_euclid()).fold(0.0, f64::max);
    let ctol = tol / gen_scale;
    let mut out = mesh.clone();
    for v in &mut out.vertices {
        let c = solve(*v - lo);
        let mut r = MinkVec3::ZERO;
        for k in 0..3 {
            let mut frac = c[k] - c[k].floor();
            if frac > 1.0 - ctol {
                frac = 0.0;
            }
            if frac < ctol {
                frac = 0.0;
            }
            r = r + gens[k] * frac;
        }
        *v = r;
    }
    Ok(out.welded(tol))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_tetra() -> CausalMesh {
        let mut m = CausalMesh::new();
        let a = m.add_vertex(MinkVec3::new(0.0, 0.0, 0.0), MarkerSet::NONE);
        let b = m.add_vertex(MinkVec3::new(0.0, 1.0, 0.0), MarkerSet::NONE);
        let c = m.add_vertex(MinkVec3::new(0.0, 0.0, 1.0), MarkerSet::NONE);
        let d = m.add_vertex(MinkVec3::new(1.0, 0.3, 0.3), MarkerSet::NONE);
        m.add_face(a, b, c);
        m.add_face(a, b, d);
        m.add_face(b, c, d);
        m.add_face(c, a, d);
        m
    }

    #[test]
    fn euler_of_closed_genus_zero() {
        let m = unit_tetra();
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.boundary_edges().is_empty());
    }

    #[test]
    fn orientation_fixup() {
        let mut m = unit_tetra();
        // scramble one winding
        m.faces[2].swap(0, 1);
        m.orient_consistently().unwrap();
        // after fixing, every edge is traversed once in each direction
        let mut dir_count: HashMap<(u32, u32), i32> = HashMap::new();
        for f in &m.faces {
            for e in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                *dir_count.entry(e).or_insert(0) += 1;
            }
        }
        for (&(a, b), &c) in &dir_count {
            assert_eq!(c, 1);
            assert_eq!(dir_count.get(&(b, a)), Some(&1));
        }
    }

    #[test]
    fn weld_and_canonical_order() {
        let mut m = CausalMesh::new();
        let a = m.add_vertex(MinkVec3::new(0.0, 0.0, 0.0), MarkerSet::with(marker::LA));
        let b = m.add_vertex(MinkVec3::new(0.0, 1.0, 0.0), MarkerSet::NONE);
        let c = m.add_vertex(MinkVec3::new(0.0, 0.0, 1.0), MarkerSet::NONE);
        m.add_face(a, b, c);
        let a2 = m.add_vertex(MinkVec3::new(1e-12, 0.0, 0.0), MarkerSet::with(marker::LB));
        let d = m.add_vertex(MinkVec3::new(0.0, -1.0, 0.0), MarkerSet::NONE);
        m.add_face(a2, d, b);
        let w = m.welded(1e-9);
        assert_eq!(w.vertices.len(), 4);
        // markers union at the welded vertex
        let i = w
            .vertices
            .iter()
            .position(|p| p.norm_euclid() < 1e-9)
            .unwrap();
        assert!(w.markers[i].has(marker::LA) && w.markers[i].has(marker::LB));
        let c1 = w.canonicalized();
        let c2 = w.canonicalized().canonicalized();
        assert_eq!(c1.vertices.len(), c2.vertices.len());
        assert_eq!(c1.faces, c2.faces);
    }

    #[test]
    fn face_tags() {
        // spacelike plane {x0 = 0}
        assert_eq!(
            face_causal_type(
                MinkVec3::new(0.0, 0.0, 0.0),
                MinkVec3::new(0.0, 1.0, 0.0),
                MinkVec3::new(0.0, 0.0, 1.0)
            ),
            CausalType::Spacelike
        );
        // timelike plane {x2 = 0}
        assert_eq!(
            face_causal_type(
                MinkVec3::new(0.0, 0.0, 0.0),
                MinkVec3::new(1.0, 0.0, 0.0),
                MinkVec3::new(0.0, 1.0, 0.0)
            ),
            CausalType::Timelike
        );
        // lightlike plane spanned by (1,1,0) and (0,0,1)
        assert_eq!(
            face_causal_type(
                MinkVec3::new(0.0, 0.0, 0.0),
                MinkVec3::new(1.0, 1.0, 0.0),
                MinkVec3::new(0.0, 0.0, 1.0)
            ),
            CausalType::Lightlike
        );
    }

    #[test]
    fn quotient_of_flat_torus() {
        // unit square grid meshed and reduced modulo Z^2 x {x0}: a torus
        let mut m = CausalMesh::new();
        let n = 8usize;
        let mut idx = vec![vec![0u32; n + 1]; n + 1];
        for i in 0..=n {
            for j in 0..=n {
                idx[i][j] = m.add_vertex(
                    MinkVec3::new(0.0, i as f64 / n as f64, j as f64 / n as f64),
                    MarkerSet::NONE,
                );
            }
        }
        for i in 0..n {
            for j in 0..n {
                m.add_face(idx[i][j], idx[i + 1][j], idx[i + 1][j + 1]);
                m.add_face(idx[i][j], idx[i + 1][j + 1], idx[i][j + 1]);
            }
        }
        let gens = [
            MinkVec3::new(7.0, 0.0, 0.0), // unused direction
            MinkVec3::new(0.0, 1.0, 0.0),
            MinkVec3::new(0.0, 0.0, 1.0),
        ];
        let q = quotient_mod_lattice(&m, &gens, 1e-9).unwrap();
        assert!(q.boundary_edges().is_empty());
        assert_eq!(q.euler_characteristic(), 0); // torus
    }
}
