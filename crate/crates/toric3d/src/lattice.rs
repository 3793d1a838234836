//! Cubic lattices in 3D: the periodic lattice of the toric code and the
//! solid (rough-boundary) lattice with half edges, plus the dual picture
//! used by the bit-flip and erasure decoders.
//!
//! Coordinates are stored doubled so that every element has integer
//! coordinates: vertices sit at all-even triples, edge midpoints are odd in
//! exactly one coordinate, face centers in two, cube centers in three. On
//! the periodic lattice coordinates wrap modulo `2*ell`.
//!
//! Solid lattice layout: real vertices at x,y in 0..=ell and z in 1..=ell.
//! Every (x,y) column carries a half edge below z=1 and above z=ell; each
//! half edge ends in its own dummy cap vertex. Dummy vertices carry no
//! checks and the caps are pairwise non-adjacent, which in the dual view
//! makes them degree-1 "pocket" cells behind each boundary qubit.

use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LatticeKind {
    Periodic,
    Solid,
}

/// Axis of an edge, or the normal axis of a face.
pub type Axis = u8;
pub const AXIS_X: Axis = 0;
pub const AXIS_Y: Axis = 1;
pub const AXIS_Z: Axis = 2;

#[derive(Clone, Debug)]
pub struct Vertex {
    /// Doubled coordinates (all components even for real vertices; dummy
    /// caps sit half a step beyond the boundary).
    pub coord: [i32; 3],
    pub dummy: bool,
}

#[derive(Clone, Debug)]
pub struct Edge {
    /// Doubled midpoint; odd in exactly the `axis` component.
    pub coord: [i32; 3],
    pub axis: Axis,
    /// Endpoint vertex indices; a half edge has one real and one dummy end.
    pub vertices: [usize; 2],
    pub half: bool,
    pub dummy: bool,
}

#[derive(Clone, Debug)]
pub struct Face {
    /// Doubled center; odd in the two in-plane components.
    pub coord: [i32; 3],
    /// Normal axis: xy faces have normal z, and so on.
    pub normal: Axis,
    /// Boundary edges, 4 for full faces and 3 on the rough boundary.
    pub edges: Vec<usize>,
    pub dummy: bool,
}

#[derive(Clone, Debug)]
pub struct Cube {
    /// Doubled center; all components odd.
    pub coord: [i32; 3],
    /// Bounding faces: 6 for interior cells, 5 for the half-open cells
    /// against a rough boundary.
    pub faces: Vec<usize>,
    pub dummy: bool,
}

#[derive(Clone, Debug)]
pub struct Lattice3D {
    pub kind: LatticeKind,
    pub ell: usize,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub faces: Vec<Face>,
    pub cubes: Vec<Cube>,
    /// Edges incident on each vertex.
    pub vertex_edges: Vec<Vec<usize>>,
    /// Faces containing each edge.
    pub edge_faces: Vec<Vec<usize>>,
    /// Cubes containing each face.
    pub face_cubes: Vec<Vec<usize>>,
    num_real_vertices: usize,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("periodic lattice needs ell >= 2, got {0}")]
    PeriodicTooSmall(usize),
    #[error("solid lattice needs ell >= 1, got {0}")]
    SolidTooSmall(usize),
}

impl Lattice3D {
    pub fn num_qubits(&self) -> usize {
        self.edges.len()
    }

    /// Real (check-carrying) vertices; indices `0..num_real_vertices()`.
    pub fn num_real_vertices(&self) -> usize {
        self.num_real_vertices
    }

    pub fn is_dummy_vertex(&self, v: usize) -> bool {
        self.vertices[v].dummy
    }

    /// The other endpoint of an edge.
    pub fn edge_other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].vertices;
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    /// One debug line per element, with doubled coordinates.
    pub fn dump(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        for (i, v) in self.vertices.iter().enumerate() {
            writeln!(out, "vertex {i} coord={:?} dummy={}", v.coord, v.dummy)?;
        }
        for (i, e) in self.edges.iter().enumerate() {
            writeln!(
                out,
                "edge {i} coord={:?} axis={} ends={:?} half={}",
                e.coord, e.axis, e.vertices, e.half
            )?;
        }
        for (i, f) in self.faces.iter().enumerate() {
            writeln!(
                out,
                "face {i} coord={:?} normal={} edges={:?}",
                f.coord, f.normal, f.edges
            )?;
        }
        for (i, c) in self.cubes.iter().enumerate() {
            writeln!(out, "cube {i} coord={:?} faces={:?}", c.coord, c.faces)?;
        }
        Ok(())
    }
}

fn sort_key(coord: [i32; 3], orientation: Axis) -> ([i32; 3], Axis) {
    (coord, orientation)
}

/// Periodic cubic lattice of linear size `ell`; everything wraps mod `ell`.
pub fn build_periodic(ell: usize) -> Result<Lattice3D, LatticeError> {
    if ell < 2 {
        return Err(LatticeError::PeriodicTooSmall(ell));
    }
    let l = ell as i32;
    let wrap = move |c: i32| c.rem_euclid(2 * l);
    let wrap3 = move |c: [i32; 3]| [wrap(c[0]), wrap(c[1]), wrap(c[2])];

    let mut vertices = Vec::new();
    for x in 0..l {
        for y in 0..l {
            for z in 0..l {
                vertices.push(Vertex {
                    coord: [2 * x, 2 * y, 2 * z],
                    dummy: false,
                });
            }
        }
    }
    vertices.sort_by_key(|v| sort_key(v.coord, 0));
    let vertex_at: HashMap<[i32; 3], usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.coord, i))
        .collect();

    let mut edges = Vec::new();
    for x in 0..l {
        for y in 0..l {
            for z in 0..l {
                let base = [2 * x, 2 * y, 2 * z];
                for axis in 0..3u8 {
                    let mut mid = base;
                    mid[axis as usize] += 1;
                    let mut far = base;
                    far[axis as usize] = wrap(far[axis as usize] + 2);
                    edges.push(Edge {
                        coord: mid,
                        axis,
                        vertices: [vertex_at[&base], vertex_at[&far]],
                        half: false,
                        dummy: false,
                    });
                }
            }
        }
    }
    edges.sort_by_key(|e| sort_key(e.coord, e.axis));
    let edge_at: HashMap<[i32; 3], usize> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| (e.coord, i))
        .collect();

    let mut faces = Vec::new();
    for x in 0..l {
        for y in 0..l {
            for z in 0..l {
                let base = [2 * x, 2 * y, 2 * z];
                for normal in 0..3u8 {
                    let (a, b) = in_plane_axes(normal);
                    let mut center = base;
                    center[a] += 1;
                    center[b] += 1;
                    // The four sides: shift the center one step along one
                    // in-plane axis to land on the midpoint of the edge
                    // running parallel to the other in-plane axis.
                    let mut boundary = Vec::with_capacity(4);
                    for shift_axis in [a, b] {
                        for offset in [-1i32, 1] {
                            let mut em = center;
                            em[shift_axis] = wrap(em[shift_axis] + offset);
                            boundary.push(edge_at[&wrap3(em)]);
                        }
                    }
                    faces.push(Face {
                        coord: center,
                        normal,
                        edges: boundary,
                        dummy: false,
                    });
                }
            }
        }
    }
    faces.sort_by_key(|f| sort_key(f.coord, f.normal));
    let face_at: HashMap<[i32; 3], usize> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.coord, i))
        .collect();

    let mut cubes = Vec::new();
    for x in 0..l {
        for y in 0..l {
            for z in 0..l {
                let center = [2 * x + 1, 2 * y + 1, 2 * z + 1];
                let mut bound = Vec::with_capacity(6);
                for axis in 0..3usize {
                    for offset in [-1i32, 1] {
                        let mut fc = center;
                        fc[axis] = wrap(fc[axis] + offset);
                        bound.push(face_at[&fc]);
                    }
                }
                cubes.push(Cube {
                    coord: center,
                    faces: bound,
                    dummy: false,
                });
            }
        }
    }
    cubes.sort_by_key(|c| sort_key(c.coord, 0));

    Ok(finish(
        LatticeKind::Periodic,
        ell,
        vertices,
        edges,
        faces,
        cubes,
    ))
}

/// Solid lattice (rough top and bottom boundaries) of linear size `ell`.
pub fn build_solid(ell: usize) -> Result<Lattice3D, LatticeError> {
    if ell < 1 {
        return Err(LatticeError::SolidTooSmall(ell));
    }
    let l = ell as i32;

    let mut vertices = Vec::new();
    for x in 0..=l {
        for y in 0..=l {
            for z in 1..=l {
                vertices.push(Vertex {
                    coord: [2 * x, 2 * y, 2 * z],
                    dummy: false,
                });
            }
        }
    }
    vertices.sort_by_key(|v| sort_key(v.coord, 0));
    let num_real_vertices = vertices.len();
    // Dummy caps: one per half edge, below the bottom layer and above the
    // top layer, appended after all real vertices.
    let mut caps = Vec::new();
    for x in 0..=l {
        for y in 0..=l {
            caps.push(Vertex {
                coord: [2 * x, 2 * y, 0],
                dummy: true,
            });
            caps.push(Vertex {
                coord: [2 * x, 2 * y, 2 * l + 2],
                dummy: true,
            });
        }
    }
    caps.sort_by_key(|v| sort_key(v.coord, 0));
    vertices.extend(caps);
    let vertex_at: HashMap<[i32; 3], usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.coord, i))
        .collect();

    let mut edges = Vec::new();
    // Horizontal edges inside each layer.
    for z in 1..=l {
        for x in 0..=l {
            for y in 0..=l {
                if x < l {
                    edges.push(Edge {
                        coord: [2 * x + 1, 2 * y, 2 * z],
                        axis: AXIS_X,
                        vertices: [
                            vertex_at[&[2 * x, 2 * y, 2 * z]],
                            vertex_at[&[2 * x + 2, 2 * y, 2 * z]],
                        ],
                        half: false,
                        dummy: false,
                    });
                }
                if y < l {
                    edges.push(Edge {
                        coord: [2 * x, 2 * y + 1, 2 * z],
                        axis: AXIS_Y,
                        vertices: [
                            vertex_at[&[2 * x, 2 * y, 2 * z]],
                            vertex_at[&[2 * x, 2 * y + 2, 2 * z]],
                        ],
                        half: false,
                        dummy: false,
                    });
                }
            }
        }
    }
    // Full vertical edges between layers, plus half edges at both rough
    // boundaries.
    for x in 0..=l {
        for y in 0..=l {
            for z in 1..l {
                edges.push(Edge {
                    coord: [2 * x, 2 * y, 2 * z + 1],
                    axis: AXIS_Z,
                    vertices: [
                        vertex_at[&[2 * x, 2 * y, 2 * z]],
                        vertex_at[&[2 * x, 2 * y, 2 * z + 2]],
                    ],
                    half: false,
                    dummy: false,
                });
            }
            edges.push(Edge {
                coord: [2 * x, 2 * y, 1],
                axis: AXIS_Z,
                vertices: [vertex_at[&[2 * x, 2 * y, 0]], vertex_at[&[2 * x, 2 * y, 2]]],
                half: true,
                dummy: false,
            });
            edges.push(Edge {
                coord: [2 * x, 2 * y, 2 * l + 1],
                axis: AXIS_Z,
                vertices: [
                    vertex_at[&[2 * x, 2 * y, 2 * l]],
                    vertex_at[&[2 * x, 2 * y, 2 * l + 2]],
                ],
                half: true,
                dummy: false,
            });
        }
    }
    edges.sort_by_key(|e| sort_key(e.coord, e.axis));
    let edge_at: HashMap<[i32; 3], usize> = edges
        .iter()
        .enumerate()
        .map(|(i, e)| (e.coord, i))
        .collect();

    let mut faces = Vec::new();
    // Horizontal faces, one per cell per layer.
    for z in 1..=l {
        for x in 0..l {
            for y in 0..l {
                faces.push(Face {
                    coord: [2 * x + 1, 2 * y + 1, 2 * z],
                    normal: AXIS_Z,
                    edges: vec![
                        edge_at[&[2 * x + 1, 2 * y, 2 * z]],
                        edge_at[&[2 * x + 1, 2 * y + 2, 2 * z]],
                        edge_at[&[2 * x, 2 * y + 1, 2 * z]],
                        edge_at[&[2 * x + 2, 2 * y + 1, 2 * z]],
                    ],
                    dummy: false,
                });
            }
        }
    }
    // Vertical faces with normal y (xz orientation) and normal x (yz
    // orientation), at interior levels and the two rough-boundary levels.
    for zc in 0..=l {
        // Face level: zc=0 is the bottom boundary (center z=1 doubled),
        // zc=l the top boundary, otherwise between layers zc and zc+1.
        let center_z = 2 * zc + 1;
        let weight3 = zc == 0 || zc == l;
        for y in 0..=l {
            for x in 0..l {
                let mut boundary = vec![
                    edge_at[&[2 * x, 2 * y, center_z]],
                    edge_at[&[2 * x + 2, 2 * y, center_z]],
                ];
                if weight3 {
                    let horiz_z = if zc == 0 { 2 } else { 2 * l };
                    boundary.push(edge_at[&[2 * x + 1, 2 * y, horiz_z]]);
                } else {
                    boundary.push(edge_at[&[2 * x + 1, 2 * y, center_z - 1]]);
                    boundary.push(edge_at[&[2 * x + 1, 2 * y, center_z + 1]]);
                }
                faces.push(Face {
                    coord: [2 * x + 1, 2 * y, center_z],
                    normal: AXIS_Y,
                    edges: boundary,
                    dummy: false,
                });
            }
        }
        for x in 0..=l {
            for y in 0..l {
                let mut boundary = vec![
                    edge_at[&[2 * x, 2 * y, center_z]],
                    edge_at[&[2 * x, 2 * y + 2, center_z]],
                ];
                if weight3 {
                    let horiz_z = if zc == 0 { 2 } else { 2 * l };
                    boundary.push(edge_at[&[2 * x, 2 * y + 1, horiz_z]]);
                } else {
                    boundary.push(edge_at[&[2 * x, 2 * y + 1, center_z - 1]]);
                    boundary.push(edge_at[&[2 * x, 2 * y + 1, center_z + 1]]);
                }
                faces.push(Face {
                    coord: [2 * x, 2 * y + 1, center_z],
                    normal: AXIS_X,
                    edges: boundary,
                    dummy: false,
                });
            }
        }
    }
    faces.sort_by_key(|f| sort_key(f.coord, f.normal));
    let face_at: HashMap<[i32; 3], usize> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.coord, i))
        .collect();

    // Cells: full cubes between consecutive layers plus the half-open cells
    // against each rough boundary (5 faces, open toward the boundary).
    let mut cubes = Vec::new();
    for zc in 0..=l {
        let center_z = 2 * zc + 1;
        for x in 0..l {
            for y in 0..l {
                let mut bound = vec![
                    face_at[&[2 * x + 1, 2 * y, center_z]],
                    face_at[&[2 * x + 1, 2 * y + 2, center_z]],
                    face_at[&[2 * x, 2 * y + 1, center_z]],
                    face_at[&[2 * x + 2, 2 * y + 1, center_z]],
                ];
                if zc > 0 {
                    bound.push(face_at[&[2 * x + 1, 2 * y + 1, center_z - 1]]);
                }
                if zc < l {
                    bound.push(face_at[&[2 * x + 1, 2 * y + 1, center_z + 1]]);
                }
                cubes.push(Cube {
                    coord: [2 * x + 1, 2 * y + 1, center_z],
                    faces: bound,
                    dummy: false,
                });
            }
        }
    }
    cubes.sort_by_key(|c| sort_key(c.coord, 0));

    let mut lattice = finish(LatticeKind::Solid, ell, vertices, edges, faces, cubes);
    lattice.num_real_vertices = num_real_vertices;
    Ok(lattice)
}

fn in_plane_axes(normal: Axis) -> (usize, usize) {
    match normal {
        AXIS_X => (1, 2),
        AXIS_Y => (0, 2),
        AXIS_Z => (0, 1),
        _ => unreachable!(),
    }
}

fn finish(
    kind: LatticeKind,
    ell: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    cubes: Vec<Cube>,
) -> Lattice3D {
    let mut vertex_edges = vec![Vec::new(); vertices.len()];
    for (i, e) in edges.iter().enumerate() {
        vertex_edges[e.vertices[0]].push(i);
        vertex_edges[e.vertices[1]].push(i);
    }
    let mut edge_faces = vec![Vec::new(); edges.len()];
    for (i, f) in faces.iter().enumerate() {
        for &e in &f.edges {
            edge_faces[e].push(i);
        }
    }
    let mut face_cubes = vec![Vec::new(); faces.len()];
    for (i, c) in cubes.iter().enumerate() {
        for &f in &c.faces {
            face_cubes[f].push(i);
        }
    }
    for list in vertex_edges
        .iter_mut()
        .chain(edge_faces.iter_mut())
        .chain(face_cubes.iter_mut())
    {
        list.sort_unstable();
    }
    let num_real_vertices = vertices.len();
    Lattice3D {
        kind,
        ell,
        vertices,
        edges,
        faces,
        cubes,
        vertex_edges,
        edge_faces,
        face_cubes,
        num_real_vertices,
    }
}

/// Dual picture of a lattice: qubits sit on dual faces, Z checks on dual
/// edges and X checks on dual cubes. Under the index-preserving duality a
/// dual cube is a primal vertex, a dual face a primal edge, a dual edge a
/// primal face, and a dual vertex a primal cube. For solid lattices the
/// dummy cap vertices act as the degree-1 pocket cells behind each
/// boundary qubit, so every qubit-face separates exactly two cells.
#[derive(Clone, Debug)]
pub struct DualView<'a> {
    pub lattice: &'a Lattice3D,
}

pub fn dual_view(lattice: &Lattice3D) -> DualView<'_> {
    DualView { lattice }
}

impl<'a> DualView<'a> {
    /// Cells of the dual lattice (dual cubes), including pocket cells.
    pub fn num_cells(&self) -> usize {
        self.lattice.vertices.len()
    }

    pub fn is_dummy_cell(&self, cell: usize) -> bool {
        self.lattice.vertices[cell].dummy
    }

    /// The two cells sharing a qubit-face.
    pub fn cells_of_qubit(&self, qubit: usize) -> [usize; 2] {
        self.lattice.edges[qubit].vertices
    }

    /// Qubit-faces on a cell's boundary.
    pub fn qubits_of_cell(&self, cell: usize) -> &[usize] {
        &self.lattice.vertex_edges[cell]
    }

    /// Primal cube index of a dual vertex (identity map).
    pub fn dual_vertex_to_cube(&self, dual_vertex: usize) -> usize {
        dual_vertex
    }

    /// Primal vertex index of a dual cube (identity map).
    pub fn dual_cube_to_vertex(&self, dual_cube: usize) -> usize {
        dual_cube
    }

    /// Primal face index of a dual edge (identity map).
    pub fn dual_edge_to_face(&self, dual_edge: usize) -> usize {
        dual_edge
    }

    /// Primal edge index of a dual face (identity map).
    pub fn dual_face_to_edge(&self, dual_face: usize) -> usize {
        dual_face
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solid_qubits(ell: usize) -> usize {
        3 * ell.pow(3) + 5 * ell.pow(2) + 3 * ell + 1
    }

    #[test]
    fn periodic_rejects_small_ell() {
        assert_eq!(
            build_periodic(1).unwrap_err(),
            LatticeError::PeriodicTooSmall(1)
        );
        assert_eq!(
            build_periodic(0).unwrap_err(),
            LatticeError::PeriodicTooSmall(0)
        );
    }

    #[test]
    fn periodic_ell2_element_counts() {
        let lat = build_periodic(2).unwrap();
        assert_eq!(lat.vertices.len(), 8);
        assert_eq!(lat.edges.len(), 24);
        assert_eq!(lat.faces.len(), 24);
        assert_eq!(lat.cubes.len(), 8);
    }

    #[test]
    fn periodic_ell3_degrees() {
        let lat = build_periodic(3).unwrap();
        assert_eq!(lat.vertices.len(), 27);
        assert_eq!(lat.edges.len(), 81);
        for v in 0..lat.vertices.len() {
            assert_eq!(lat.vertex_edges[v].len(), 6);
        }
    }

    #[test]
    fn periodic_ell4_face_edge_incidence() {
        let lat = build_periodic(4).unwrap();
        for f in &lat.faces {
            assert_eq!(f.edges.len(), 4);
            let mut distinct = f.edges.clone();
            distinct.dedup();
            assert_eq!(distinct.len(), 4);
        }
        for e in 0..lat.edges.len() {
            assert_eq!(lat.edge_faces[e].len(), 4);
        }
    }

    #[test]
    fn periodic_face_boundary_is_a_cycle() {
        let lat = build_periodic(3).unwrap();
        for f in &lat.faces {
            let mut touches: HashMap<usize, usize> = HashMap::new();
            for &e in &f.edges {
                for &v in &lat.edges[e].vertices {
                    *touches.entry(v).or_default() += 1;
                }
            }
            assert_eq!(touches.len(), 4);
            assert!(touches.values().all(|&c| c == 2));
        }
    }

    #[test]
    fn solid_counting_formulas() {
        for ell in 1..=6 {
            let lat = build_solid(ell).unwrap();
            assert_eq!(lat.num_qubits(), solid_qubits(ell), "qubits at ell={ell}");
            assert_eq!(lat.num_real_vertices(), ell * (ell + 1) * (ell + 1));
            let vertical: Vec<_> = lat.faces.iter().filter(|f| f.normal != AXIS_Z).collect();
            assert_eq!(vertical.len(), 2 * ell * (ell + 1) * (ell + 1));
            let weight3 = vertical.iter().filter(|f| f.edges.len() == 3).count();
            assert_eq!(weight3, 4 * ell * (ell + 1));
            let horizontal = lat.faces.iter().filter(|f| f.normal == AXIS_Z).count();
            assert_eq!(horizontal, ell.pow(3));
        }
    }

    #[test]
    fn solid_ell1_shape() {
        let lat = build_solid(1).unwrap();
        assert_eq!(lat.num_qubits(), 12);
        assert_eq!(lat.num_real_vertices(), 4);
        assert_eq!(lat.faces.len(), 9);
        assert_eq!(lat.faces.iter().filter(|f| f.edges.len() == 3).count(), 8);
        assert_eq!(lat.faces.iter().filter(|f| f.edges.len() == 4).count(), 1);
    }

    #[test]
    fn half_edges_have_one_dummy_end() {
        let lat = build_solid(3).unwrap();
        let mut count = 0;
        for e in &lat.edges {
            if e.half {
                count += 1;
                let dummies = e
                    .vertices
                    .iter()
                    .filter(|&&v| lat.vertices[v].dummy)
                    .count();
                assert_eq!(dummies, 1);
            } else {
                assert!(e.vertices.iter().all(|&v| !lat.vertices[v].dummy));
            }
        }
        assert_eq!(count, 2 * (3 + 1) * (3 + 1));
    }

    #[test]
    fn incidence_is_symmetric() {
        for lat in [build_periodic(3).unwrap(), build_solid(2).unwrap()] {
            for (e, edge) in lat.edges.iter().enumerate() {
                for &v in &edge.vertices {
                    assert!(lat.vertex_edges[v].contains(&e));
                }
            }
            for (v, inc) in lat.vertex_edges.iter().enumerate() {
                for &e in inc {
                    assert!(lat.edges[e].vertices.contains(&v));
                }
            }
            for (f, face) in lat.faces.iter().enumerate() {
                for &e in &face.edges {
                    assert!(lat.edge_faces[e].contains(&f));
                }
            }
            for (c, cube) in lat.cubes.iter().enumerate() {
                for &f in &cube.faces {
                    assert!(lat.face_cubes[f].contains(&c));
                }
            }
        }
    }

    #[test]
    fn dual_periodic_every_face_has_two_cells() {
        let lat = build_periodic(2).unwrap();
        let dual = dual_view(&lat);
        assert_eq!(lat.cubes.len(), 8);
        for q in 0..lat.num_qubits() {
            let [a, b] = dual.cells_of_qubit(q);
            assert_ne!(a, b);
            assert!(!dual.is_dummy_cell(a) && !dual.is_dummy_cell(b));
        }
        // Primal duality: the cubes adjacent through face f are exactly the
        // dual vertices joined by f's dual edge.
        for f in 0..lat.faces.len() {
            assert_eq!(lat.face_cubes[f].len(), 2);
        }
    }

    #[test]
    fn dual_solid_pockets_are_degree_one_and_disjoint() {
        for ell in [1, 2] {
            let lat = build_solid(ell).unwrap();
            let dual = dual_view(&lat);
            let mut seen_qubits = std::collections::HashSet::new();
            for cell in 0..dual.num_cells() {
                if dual.is_dummy_cell(cell) {
                    let qs = dual.qubits_of_cell(cell);
                    assert_eq!(qs.len(), 1, "pocket cells touch exactly one qubit");
                    assert!(
                        seen_qubits.insert(qs[0]),
                        "pockets are pairwise non-adjacent"
                    );
                }
            }
            for q in 0..lat.num_qubits() {
                let [a, b] = dual.cells_of_qubit(q);
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn solid_cube_faces() {
        let lat = build_solid(2).unwrap();
        assert_eq!(lat.cubes.len(), 2 * 2 * 3);
        for c in &lat.cubes {
            let open = c.coord[2] == 1 || c.coord[2] == 2 * 2 + 1;
            assert_eq!(c.faces.len(), if open { 5 } else { 6 });
        }
    }
}
