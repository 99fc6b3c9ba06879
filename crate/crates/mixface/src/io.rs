//! Serialization: OBJ with causal-type groups, binary little-endian PLY
//! with a per-face causal_type property, and JSON reports. Meshes are
//! canonicalized first, so identical configurations give byte-identical
//! files.

use crate::error::Result;
use crate::mesh::CausalMesh;
use crate::minkowski::CausalType;
use std::io::Write;

/// OBJ text with faces grouped as `spacelike` / `timelike` / `lightlike`.
/// Vertex lines carry (x0, x1, x2) in that order.
pub fn write_obj(mesh: &CausalMesh, out: &mut dyn Write) -> Result<()> {
    let m = mesh.canonicalized();
    writeln!(out, "# causal triangle mesh, coordinates (x0, x1, x2)")?;
    for v in &m.vertices {
        writeln!(out, "v {} {} {}", v.x0, v.x1, v.x2)?;
    }
    for tag in [CausalType::Spacelike, CausalType::Timelike, CausalType::Lightlike] {
        let faces: Vec<&[u32; 3]> = m
            .faces
            .iter()
            .zip(&m.face_tags)
            .filter_map(|(f, t)| (*t == tag).then_some(f))
            .collect();
        if faces.is_empty() {
            continue;
        }
        writeln!(out, "g {}", tag.name())?;
        for f in faces {
            writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1)?;
        }
    }
    Ok(())
}

/// Binary little-endian PLY: double vertex coordinates, uchar+int32 face
/// lists, and an int32 per-face property `causal_type` with
/// 0 = spacelike, 1 = timelike, 2 = lightlike.
pub fn write_ply(mesh: &CausalMesh, out: &mut dyn Write) -> Result<()> {
    let m = mesh.canonicalized();
    write!(
        out,
        "ply\nformat binary_little_endian 1.0\n\
         element vertex {}\n\
         property double x0\nproperty double x1\nproperty double x2\n\
         element face {}\n\
         property list uchar int vertex_indices\n\
         property int causal_type\n\
         end_header\n",
        m.vertices.len(),
        m.faces.len()
    )?;
    for v in &m.vertices {
        out.write_all(&v.x0.to_le_bytes())?;
        out.write_all(&v.x1.to_le_bytes())?;
        out.write_all(&v.x2.to_le_bytes())?;
    }
    for (f, t) in m.faces.iter().zip(&m.face_tags) {
        out.write_all(&[3u8])?;
        for &i in f {
            out.write_all(&(i as i32).to_le_bytes())?;
        }
        out.write_all(&(t.as_u8() as i32).to_le_bytes())?;
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: serde::Serialize>(value: &T, out: &mut dyn Write) -> Result<()> {
    let s = serde_json::to_string_pretty(value).expect("serializable");
    out.write_all(s.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}
