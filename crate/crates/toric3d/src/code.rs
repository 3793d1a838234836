//! CSS code instances built from lattices: check matrices, logical
//! representatives, the Z-weld construction, syndrome extraction and
//! logical-failure classification.

use crate::gf2::{BitMatrix, BitVec};
use crate::lattice::{self, Lattice3D, AXIS_Z};
use std::collections::BTreeSet;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Periodic3d { ell: usize },
    Solid { ell: usize },
    Welded { ell: usize, r: usize },
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Family::Periodic3d { .. } => write!(f, "periodic3d"),
            Family::Solid { .. } => write!(f, "solid"),
            Family::Welded { .. } => write!(f, "welded"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CodeError {
    #[error("frame length {got} does not match code qubit count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("residual has nonzero syndrome in the {0} sector")]
    ResidualSyndrome(&'static str),
    #[error("construction self-check failed: {0}")]
    Construction(String),
    #[error("internal decoder error: {0}")]
    Internal(String),
    #[error(transparent)]
    Lattice(#[from] lattice::LatticeError),
}

/// Sparse GF(2) check matrix with both row and column adjacency.
#[derive(Clone, Debug)]
pub struct CheckMatrix {
    pub n: usize,
    /// Sorted qubit support of each check row.
    pub rows: Vec<Vec<usize>>,
    /// Rows containing each qubit.
    pub qubit_rows: Vec<Vec<usize>>,
}

impl CheckMatrix {
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Self {
        let mut qubit_rows = vec![Vec::new(); n];
        for (r, support) in rows.iter().enumerate() {
            debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
            for &q in support {
                qubit_rows[q].push(r);
            }
        }
        CheckMatrix {
            n,
            rows,
            qubit_rows,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Syndrome of an error given as a bit vector over qubits.
    pub fn syndrome_of(&self, error: &BitVec) -> BitVec {
        let mut s = BitVec::zeros(self.rows.len());
        for q in error.ones() {
            for &r in &self.qubit_rows[q] {
                s.toggle(r);
            }
        }
        s
    }

    pub fn to_bit_matrix(&self) -> BitMatrix {
        BitMatrix::from_row_supports(self.n, &self.rows)
    }

    pub fn write_sparse(&self, out: &mut impl std::io::Write) -> std::io::Result<()> {
        for (r, support) in self.rows.iter().enumerate() {
            write!(out, "{r}:")?;
            for q in support {
                write!(out, " {q}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// An error or estimate as X and Z bit sequences over the qubits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PauliFrame {
    pub x: BitVec,
    pub z: BitVec,
}

impl PauliFrame {
    pub fn zero(n: usize) -> Self {
        PauliFrame {
            x: BitVec::zeros(n),
            z: BitVec::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn xor_assign(&mut self, other: &PauliFrame) {
        self.x.xor_assign(&other.x);
        self.z.xor_assign(&other.z);
    }
}

/// Syndrome pair: `sigma` over X checks (violated by Z errors) and `tau`
/// over Z checks (violated by X errors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syndrome {
    pub sigma: BitVec,
    pub tau: BitVec,
}

/// Result of one decoding attempt. `Failure` is a counted outcome, not an
/// error: the decoder could not produce a syndrome-consistent estimate
/// under its policy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeOutcome {
    Estimate(BitVec),
    Failure(&'static str),
}

impl DecodeOutcome {
    pub fn estimate(&self) -> Option<&BitVec> {
        match self {
            DecodeOutcome::Estimate(e) => Some(e),
            DecodeOutcome::Failure(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QubitMeta {
    /// Rough-boundary qubit: a half edge, or a weld-plane qubit.
    pub boundary: bool,
    pub welded: bool,
    /// Solid codes this qubit belongs to (welded family; empty otherwise).
    pub solids: Vec<u32>,
    pub geom: GeomId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeomId {
    /// Lattice edge with doubled midpoint coordinates.
    Edge { coord: [i32; 3], axis: u8 },
    /// Interior edge of one solid inside a welded code.
    SolidEdge {
        solid: u32,
        coord: [i32; 3],
        axis: u8,
    },
    /// Welded qubit at weld plane `plane`, grid position (x, y).
    Weld { plane: u32, x: u32, y: u32 },
}

/// Geometry backing a welded code: one solid-template lattice plus the
/// mapping from (solid, template edge) to global qubit index.
#[derive(Debug)]
pub struct WeldedGeometry {
    pub template: Lattice3D,
    pub r: usize,
    /// Welded qubits occupy global indices `0..num_welded`.
    pub num_welded: usize,
    /// `qubit_of[s][e]` is the global qubit of template edge `e` in solid `s`.
    pub qubit_of: Vec<Vec<usize>>,
    /// Template edge ids of the interior (non-half) edges, in the order
    /// their private qubits are laid out per solid.
    pub interior_edges: Vec<usize>,
    /// H-check rows per solid: row of (solid s, vertex v) is `s * this + v`.
    pub vertex_rows_per_solid: usize,
}

impl WeldedGeometry {
    pub fn num_solids(&self) -> usize {
        self.r.pow(3)
    }

    /// Solid and template edge of an interior qubit.
    pub fn interior_of(&self, qubit: usize) -> Option<(usize, usize)> {
        if qubit < self.num_welded {
            return None;
        }
        let offset = qubit - self.num_welded;
        let per_solid = self.interior_edges.len();
        Some((offset / per_solid, self.interior_edges[offset % per_solid]))
    }
}

#[derive(Debug)]
pub enum Geometry {
    Lattice(Arc<Lattice3D>),
    Welded(Arc<WeldedGeometry>),
}

/// A CSS code instance. `h` holds the X checks (one per vertex), `t` the
/// Z checks (one per face, welded boundary faces merged). Construction
/// verifies commutation, logical pairing and `k` from GF(2) ranks.
#[derive(Debug)]
pub struct CodeSpec {
    pub family: Family,
    pub n: usize,
    pub k: usize,
    pub h: CheckMatrix,
    pub t: CheckMatrix,
    pub logicals_x: Vec<Vec<usize>>,
    pub logicals_z: Vec<Vec<usize>>,
    pub qubit_meta: Vec<QubitMeta>,
    pub geometry: Geometry,
}

impl CodeSpec {
    pub fn periodic(ell: usize) -> Result<Self, CodeError> {
        build_toric3d(lattice::build_periodic(ell)?)
    }

    pub fn solid(ell: usize) -> Result<Self, CodeError> {
        build_toric3d(lattice::build_solid(ell)?)
    }

    pub fn welded(ell: usize, r: usize) -> Result<Self, CodeError> {
        build_welded(ell, r)
    }

    pub fn lattice(&self) -> Option<&Arc<Lattice3D>> {
        match &self.geometry {
            Geometry::Lattice(l) => Some(l),
            Geometry::Welded(_) => None,
        }
    }

    pub fn welded_geometry(&self) -> Option<&Arc<WeldedGeometry>> {
        match &self.geometry {
            Geometry::Welded(w) => Some(w),
            Geometry::Lattice(_) => None,
        }
    }

    fn check_frame(&self, frame: &PauliFrame) -> Result<(), CodeError> {
        if frame.len() != self.n {
            return Err(CodeError::LengthMismatch {
                expected: self.n,
                got: frame.len(),
            });
        }
        Ok(())
    }
}

/// `sigma = H z^t`, `tau = T x^t`.
pub fn syndrome(code: &CodeSpec, error: &PauliFrame) -> Result<Syndrome, CodeError> {
    code.check_frame(error)?;
    Ok(Syndrome {
        sigma: code.h.syndrome_of(&error.z),
        tau: code.t.syndrome_of(&error.x),
    })
}

/// Classify a zero-syndrome residual: `(z_failed, x_failed)`. The caller
/// must only pass residuals whose syndrome vanishes; a nonzero syndrome
/// means the calling decoder already failed and is reported as an error.
pub fn is_logical_failure(
    code: &CodeSpec,
    residual: &PauliFrame,
) -> Result<(bool, bool), CodeError> {
    code.check_frame(residual)?;
    if !code.h.syndrome_of(&residual.z).is_zero() {
        return Err(CodeError::ResidualSyndrome("Z"));
    }
    if !code.t.syndrome_of(&residual.x).is_zero() {
        return Err(CodeError::ResidualSyndrome("X"));
    }
    let odd = |support: &[usize], bits: &BitVec| {
        support.iter().filter(|&&q| bits.get(q)).count() % 2 == 1
    };
    let z_failed = code.logicals_x.iter().any(|lx| odd(lx, &residual.z));
    let x_failed = code.logicals_z.iter().any(|lz| odd(lz, &residual.x));
    Ok((z_failed, x_failed))
}

/// 3D toric code on a periodic or solid lattice: one X check per real
/// vertex (incident edges), one Z check per face (boundary edges).
pub fn build_toric3d(lat: Lattice3D) -> Result<CodeSpec, CodeError> {
    let n = lat.num_qubits();
    let h_rows: Vec<Vec<usize>> = (0..lat.num_real_vertices())
        .map(|v| lat.vertex_edges[v].clone())
        .collect();
    let t_rows: Vec<Vec<usize>> = lat
        .faces
        .iter()
        .map(|f| {
            let mut support = f.edges.clone();
            support.sort_unstable();
            support
        })
        .collect();

    let (family, logicals_x, logicals_z, expected_k) = match lat.kind {
        lattice::LatticeKind::Solid => {
            // Z string: the half and full vertical edges in the (0,0)
            // column, top to bottom; weight ell+1.
            let z_string: Vec<usize> = (0..n)
                .filter(|&e| {
                    let edge = &lat.edges[e];
                    edge.axis == AXIS_Z && edge.coord[0] == 0 && edge.coord[1] == 0
                })
                .collect();
            // X plane: every half edge on the bottom rough boundary;
            // weight (ell+1)^2.
            let x_plane: Vec<usize> = (0..n)
                .filter(|&e| lat.edges[e].half && lat.edges[e].coord[2] == 1)
                .collect();
            (
                Family::Solid { ell: lat.ell },
                vec![x_plane],
                vec![z_string],
                1,
            )
        }
        lattice::LatticeKind::Periodic => {
            // One winding Z loop and one crossing X plane per axis, both
            // anchored at the lowest lattice position.
            let mut lx = Vec::new();
            let mut lz = Vec::new();
            for axis in 0..3usize {
                let (a, b) = match axis {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                let loop_z: Vec<usize> = (0..n)
                    .filter(|&e| {
                        let edge = &lat.edges[e];
                        edge.axis as usize == axis && edge.coord[a] == 0 && edge.coord[b] == 0
                    })
                    .collect();
                let plane_x: Vec<usize> = (0..n)
                    .filter(|&e| {
                        let edge = &lat.edges[e];
                        edge.axis as usize == axis && edge.coord[axis] == 1
                    })
                    .collect();
                debug_assert_eq!(loop_z.len(), lat.ell);
                debug_assert_eq!(plane_x.len(), lat.ell * lat.ell);
                lx.push(plane_x);
                lz.push(loop_z);
            }
            (Family::Periodic3d { ell: lat.ell }, lx, lz, 3)
        }
    };

    let qubit_meta = (0..n)
        .map(|e| {
            let edge = &lat.edges[e];
            QubitMeta {
                boundary: edge.half,
                welded: false,
                solids: Vec::new(),
                geom: GeomId::Edge {
                    coord: edge.coord,
                    axis: edge.axis,
                },
            }
        })
        .collect();

    let code = CodeSpec {
        family,
        n,
        k: 0,
        h: CheckMatrix::new(n, h_rows),
        t: CheckMatrix::new(n, t_rows),
        logicals_x,
        logicals_z,
        qubit_meta,
        geometry: Geometry::Lattice(Arc::new(lat)),
    };
    finish_code(code, expected_k)
}

/// Z-weld of R^3 solid codes of size ell, stacked R layers high with R^2
/// solids per layer. At each of the R+1 weld planes the half edges of all
/// adjacent solids at equal grid position (x, y) are identified into one
/// welded qubit; the corresponding weight-3 boundary Z checks merge into
/// one check per face position whose support is the union of the merged
/// faces (welded qubits counted once).
pub fn build_welded(ell: usize, r: usize) -> Result<CodeSpec, CodeError> {
    if ell < 1 || r < 1 {
        return Err(CodeError::Construction(format!(
            "welded code needs ell >= 1 and R >= 1, got ell={ell}, R={r}"
        )));
    }
    let template = lattice::build_solid(ell)?;
    let num_solids = r * r * r;
    let per_layer = r * r;
    let grid = ell + 1;
    let num_welded = (r + 1) * grid * grid;

    let weld_index = |plane: usize, x: usize, y: usize| plane * grid * grid + x * grid + y;

    // Interior (non-half) template edges keep one private qubit per solid.
    let mut interior_id = vec![usize::MAX; template.edges.len()];
    let mut interior_edges = Vec::new();
    for (e, edge) in template.edges.iter().enumerate() {
        if !edge.half {
            interior_id[e] = interior_edges.len();
            interior_edges.push(e);
        }
    }
    let num_interior = interior_edges.len();
    let n = num_welded + num_solids * num_interior;

    let layer_of = |s: usize| s / per_layer;
    let qubit_of: Vec<Vec<usize>> = (0..num_solids)
        .map(|s| {
            let k = layer_of(s);
            template
                .edges
                .iter()
                .enumerate()
                .map(|(e, edge)| {
                    if edge.half {
                        let x = (edge.coord[0] / 2) as usize;
                        let y = (edge.coord[1] / 2) as usize;
                        let plane = if edge.coord[2] == 1 { k } else { k + 1 };
                        weld_index(plane, x, y)
                    } else {
                        num_welded + s * num_interior + interior_id[e]
                    }
                })
                .collect()
        })
        .collect();

    // X checks: each solid keeps its vertex checks, re-indexed.
    let nv = template.num_real_vertices();
    let mut h_rows = Vec::with_capacity(num_solids * nv);
    for q_map in &qubit_of {
        for v in 0..nv {
            let mut support: Vec<usize> =
                template.vertex_edges[v].iter().map(|&e| q_map[e]).collect();
            support.sort_unstable();
            h_rows.push(support);
        }
    }

    // Z checks: private interior faces, then one welded check per weld
    // plane and boundary-face position.
    let mut t_rows = Vec::new();
    for q_map in &qubit_of {
        for f in &template.faces {
            if f.edges.len() == 4 {
                let mut support: Vec<usize> = f.edges.iter().map(|&e| q_map[e]).collect();
                support.sort_unstable();
                t_rows.push(support);
            }
        }
    }
    let bottom_faces: Vec<&lattice::Face> = template
        .faces
        .iter()
        .filter(|f| f.edges.len() == 3 && f.coord[2] == 1)
        .collect();
    let top_l = 2 * ell as i32 + 1;
    let top_face_at = |coord: [i32; 3]| {
        template
            .faces
            .iter()
            .find(|f| f.coord == [coord[0], coord[1], top_l])
            .expect("matching top boundary face")
    };
    for plane in 0..=r {
        for fb in &bottom_faces {
            let ft = top_face_at(fb.coord);
            let mut support = BTreeSet::new();
            for (s, q_map) in qubit_of.iter().enumerate() {
                let k = layer_of(s);
                if plane > 0 && k == plane - 1 {
                    for &e in &ft.edges {
                        support.insert(q_map[e]);
                    }
                }
                if plane < r && k == plane {
                    for &e in &fb.edges {
                        support.insert(q_map[e]);
                    }
                }
            }
            t_rows.push(support.into_iter().collect());
        }
    }

    // Logical Z: the vertical strings of all solids at grid position
    // (0, 0), threading the welded qubits w(., 0, 0).
    let mut logical_z = BTreeSet::new();
    for plane in 0..=r {
        logical_z.insert(weld_index(plane, 0, 0));
    }
    for q_map in &qubit_of {
        for (e, edge) in template.edges.iter().enumerate() {
            if edge.axis == AXIS_Z && !edge.half && edge.coord[0] == 0 && edge.coord[1] == 0 {
                logical_z.insert(q_map[e]);
            }
        }
    }
    // Logical X: the horizontal plane of welded qubits at the bottom weld.
    let logical_x: Vec<usize> = (0..grid * grid)
        .map(|i| weld_index(0, i / grid, i % grid))
        .collect();

    let mut qubit_meta: Vec<QubitMeta> = Vec::with_capacity(n);
    for plane in 0..=r {
        let solids: Vec<u32> = (0..num_solids)
            .filter(|&s| {
                let k = layer_of(s);
                (plane > 0 && k == plane - 1) || (plane < r && k == plane)
            })
            .map(|s| s as u32)
            .collect();
        for x in 0..grid {
            for y in 0..grid {
                debug_assert_eq!(qubit_meta.len(), weld_index(plane, x, y));
                qubit_meta.push(QubitMeta {
                    boundary: true,
                    // A weld position touching a single solid welds
                    // nothing; at R=1 the code degrades to the solid code
                    // and these stay ordinary rough-boundary qubits.
                    welded: solids.len() > 1,
                    solids: solids.clone(),
                    geom: GeomId::Weld {
                        plane: plane as u32,
                        x: x as u32,
                        y: y as u32,
                    },
                });
            }
        }
    }
    for (s, q_map) in qubit_of.iter().enumerate() {
        for (e, edge) in template.edges.iter().enumerate() {
            if !edge.half {
                debug_assert_eq!(qubit_meta.len(), q_map[e]);
                qubit_meta.push(QubitMeta {
                    boundary: false,
                    welded: false,
                    solids: vec![s as u32],
                    geom: GeomId::SolidEdge {
                        solid: s as u32,
                        coord: edge.coord,
                        axis: edge.axis,
                    },
                });
            }
        }
    }

    let code = CodeSpec {
        family: Family::Welded { ell, r },
        n,
        k: 0,
        h: CheckMatrix::new(n, h_rows),
        t: CheckMatrix::new(n, t_rows),
        logicals_x: vec![logical_x],
        logicals_z: vec![logical_z.into_iter().collect()],
        qubit_meta,
        geometry: Geometry::Welded(Arc::new(WeldedGeometry {
            template,
            r,
            num_welded,
            qubit_of,
            interior_edges,
            vertex_rows_per_solid: nv,
        })),
    };
    finish_code(code, 1)
}

/// Commutation self-check plus k from GF(2) ranks. Rejects any built code
/// that does not satisfy the CSS constraints exactly.
fn finish_code(mut code: CodeSpec, expected_k: usize) -> Result<CodeSpec, CodeError> {
    // Every X check must overlap every Z check evenly. Only rows sharing
    // support can overlap at all, so count shared qubits per row pair.
    let mut overlap: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for (tr, t_support) in code.t.rows.iter().enumerate() {
        overlap.clear();
        for &q in t_support {
            for &hr in &code.h.qubit_rows[q] {
                *overlap.entry(hr).or_default() += 1;
            }
        }
        if let Some((&hr, _)) = overlap.iter().find(|(_, &c)| c % 2 == 1) {
            return Err(CodeError::Construction(format!(
                "X check {hr} anticommutes with Z check {tr}"
            )));
        }
    }
    let parity = |support: &[usize], other: &[usize]| -> usize {
        let set: std::collections::HashSet<usize> = support.iter().copied().collect();
        other.iter().filter(|q| set.contains(q)).count() % 2
    };
    for (i, lx) in code.logicals_x.iter().enumerate() {
        if code.t.rows.iter().any(|t| parity(lx, t) == 1) {
            return Err(CodeError::Construction(format!(
                "X logical {i} anticommutes with a Z check"
            )));
        }
    }
    for (i, lz) in code.logicals_z.iter().enumerate() {
        if code.h.rows.iter().any(|h| parity(lz, h) == 1) {
            return Err(CodeError::Construction(format!(
                "Z logical {i} anticommutes with an X check"
            )));
        }
    }
    for (i, lx) in code.logicals_x.iter().enumerate() {
        for (j, lz) in code.logicals_z.iter().enumerate() {
            let expect = usize::from(i == j);
            if parity(lx, lz) != expect {
                return Err(CodeError::Construction(format!(
                    "logical pairing broken between X[{i}] and Z[{j}]"
                )));
            }
        }
    }

    let rank_h = code.h.to_bit_matrix().rank();
    let rank_t = code.t.to_bit_matrix().rank();
    let k = code
        .n
        .checked_sub(rank_h + rank_t)
        .ok_or_else(|| CodeError::Construction("rank sum exceeds qubit count".into()))?;
    if k != expected_k {
        return Err(CodeError::Construction(format!(
            "expected k={expected_k}, ranks give k={k}"
        )));
    }
    code.k = k;
    Ok(code)
}

pub fn solid_qubit_count(ell: usize) -> usize {
    3 * ell.pow(3) + 5 * ell.pow(2) + 3 * ell + 1
}

pub fn welded_qubit_count(ell: usize, r: usize) -> usize {
    let n = solid_qubit_count(ell);
    r.pow(3) * n - (ell + 1).pow(2) * (2 * r.pow(3) - r - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solid_ell1_parameters() {
        let code = CodeSpec::solid(1).unwrap();
        assert_eq!(code.n, 12);
        assert_eq!(code.k, 1);
        assert_eq!(code.h.to_bit_matrix().rank(), 4);
        assert_eq!(code.t.to_bit_matrix().rank(), 7);
    }

    #[test]
    fn periodic_ell2_parameters() {
        let code = CodeSpec::periodic(2).unwrap();
        assert_eq!(code.n, 24);
        assert_eq!(code.k, 3);
    }

    #[test]
    fn solid_z_distance_representative() {
        let code = CodeSpec::solid(2).unwrap();
        assert_eq!(code.logicals_z[0].len(), 3);
        assert_eq!(code.logicals_x[0].len(), 9);
    }

    #[test]
    fn solid_check_count_identity() {
        for ell in 1..=4 {
            let code = CodeSpec::solid(ell).unwrap();
            let independent = code.h.to_bit_matrix().rank() + code.t.to_bit_matrix().rank();
            assert_eq!(independent, 3 * ell.pow(3) + 5 * ell.pow(2) + 3 * ell);
        }
    }

    #[test]
    fn welded_counts() {
        assert_eq!(CodeSpec::welded(1, 1).unwrap().n, 12);
        let code = CodeSpec::welded(1, 2).unwrap();
        assert_eq!(code.n, 44);
        assert_eq!(code.n, welded_qubit_count(1, 2));
        assert_eq!(code.k, 1);
    }

    #[test]
    fn welded_interior_check_weight() {
        let code = CodeSpec::welded(2, 2).unwrap();
        // Welded checks at the interior weld plane merge 2R^2 weight-3
        // faces sharing 2 welded qubits, giving weight 2R^2 + 2.
        let interior: Vec<_> = code
            .t
            .rows
            .iter()
            .filter(|row| {
                let welded: Vec<_> = row.iter().filter(|&&q| code.qubit_meta[q].welded).collect();
                !welded.is_empty()
                    && welded
                        .iter()
                        .all(|&&q| matches!(code.qubit_meta[q].geom, GeomId::Weld { plane: 1, .. }))
            })
            .collect();
        assert!(!interior.is_empty());
        for row in interior {
            assert_eq!(row.len(), 2 * 2 * 2 + 2);
        }
    }

    #[test]
    fn welded_qubit_formula_sweep() {
        for ell in 1..=3 {
            for r in 1..=3 {
                let code = CodeSpec::welded(ell, r).unwrap();
                assert_eq!(code.n, welded_qubit_count(ell, r), "ell={ell} R={r}");
                assert_eq!(code.k, 1);
            }
        }
    }

    #[test]
    fn syndrome_of_zero_frame_is_zero() {
        let code = CodeSpec::solid(2).unwrap();
        let syn = syndrome(&code, &PauliFrame::zero(code.n)).unwrap();
        assert!(syn.sigma.is_zero());
        assert!(syn.tau.is_zero());
    }

    #[test]
    fn single_z_interior_flips_two_checks() {
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        let interior = (0..code.n).find(|&e| !lat.edges[e].half).unwrap();
        let mut frame = PauliFrame::zero(code.n);
        frame.z.set(interior, true);
        let syn = syndrome(&code, &frame).unwrap();
        assert_eq!(syn.sigma.count_ones(), 2);
    }

    #[test]
    fn single_z_half_edge_flips_one_check() {
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        let half = (0..code.n).find(|&e| lat.edges[e].half).unwrap();
        let mut frame = PauliFrame::zero(code.n);
        frame.z.set(half, true);
        let syn = syndrome(&code, &frame).unwrap();
        assert_eq!(syn.sigma.count_ones(), 1);
    }

    #[test]
    fn syndrome_rejects_length_mismatch() {
        let code = CodeSpec::solid(1).unwrap();
        assert!(matches!(
            syndrome(&code, &PauliFrame::zero(5)),
            Err(CodeError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn failure_classification() {
        let code = CodeSpec::solid(2).unwrap();
        // A stabilizer row is not a failure.
        let mut stab = PauliFrame::zero(code.n);
        for &q in &code.t.rows[0] {
            stab.z.set(q, true);
        }
        assert_eq!(is_logical_failure(&code, &stab).unwrap(), (false, false));
        // The Z logical representative fails the Z sector.
        let mut zbar = PauliFrame::zero(code.n);
        for &q in &code.logicals_z[0] {
            zbar.z.set(q, true);
        }
        assert_eq!(is_logical_failure(&code, &zbar).unwrap(), (true, false));
        assert_eq!(
            is_logical_failure(&code, &PauliFrame::zero(code.n)).unwrap(),
            (false, false)
        );
    }

    #[test]
    fn failure_contract_rejects_nonzero_syndrome() {
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        let interior = (0..code.n).find(|&e| !lat.edges[e].half).unwrap();
        let mut frame = PauliFrame::zero(code.n);
        frame.z.set(interior, true);
        assert!(matches!(
            is_logical_failure(&code, &frame),
            Err(CodeError::ResidualSyndrome("Z"))
        ));
    }

    #[test]
    fn solid_cell_face_relations() {
        // A cell's four vertical faces multiply to its horizontal faces,
        // and all vertical faces of one cell column multiply to identity.
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        for cube in &lat.cubes {
            let mut acc = BitVec::zeros(code.n);
            for &f in &cube.faces {
                let face = &lat.faces[f];
                for &e in &face.edges {
                    acc.toggle(e);
                }
            }
            let vertical_only = cube
                .faces
                .iter()
                .filter(|&&f| lat.faces[f].normal != AXIS_Z)
                .count();
            assert_eq!(vertical_only, 4);
            // acc is the XOR of vertical and horizontal supports; the
            // relation says it cancels exactly.
            assert!(acc.is_zero(), "cell relation fails at {:?}", cube.coord);
        }
        for cx in 0..2 {
            for cy in 0..2 {
                let mut acc = BitVec::zeros(code.n);
                for cube in lat
                    .cubes
                    .iter()
                    .filter(|c| c.coord[0] == 2 * cx + 1 && c.coord[1] == 2 * cy + 1)
                {
                    for &f in &cube.faces {
                        let face = &lat.faces[f];
                        if face.normal != AXIS_Z {
                            for &e in &face.edges {
                                acc.toggle(e);
                            }
                        }
                    }
                }
                assert!(acc.is_zero(), "stack dependency fails at ({cx},{cy})");
            }
        }
    }

    #[test]
    fn welded_single_z_on_interior_weld_qubit() {
        let code = CodeSpec::welded(1, 2).unwrap();
        // Interior weld plane is plane 1; its qubits touch 2R^2 = 8 vertex
        // checks.
        let q = (0..code.n)
            .find(|&q| {
                matches!(
                    code.qubit_meta[q].geom,
                    GeomId::Weld {
                        plane: 1,
                        x: 0,
                        y: 0
                    }
                )
            })
            .unwrap();
        let mut frame = PauliFrame::zero(code.n);
        frame.z.set(q, true);
        let syn = syndrome(&code, &frame).unwrap();
        assert_eq!(syn.sigma.count_ones(), 8);
    }
}
