//! Phase-error decoder: BFS shortest paths on the lattice plus exact
//! minimum-weight perfect matching on an auxiliary defect graph. On the
//! solid code every defect gets a boundary node whose edge weight is the
//! hop distance to the nearest rough boundary; boundary nodes form a
//! zero-weight clique so unused ones match among themselves.

use crate::blossom;
use crate::code::{CodeError, CodeSpec};
use crate::gf2::BitVec;
use crate::lattice::{Lattice3D, LatticeKind};
use std::collections::VecDeque;

const NO_PRED: usize = usize::MAX;
pub const UNREACHED: u32 = u32::MAX;

/// BFS result from one source vertex: hop distances over non-dummy paths
/// (half edges may step onto a dummy cap, which measures the boundary
/// distance) and one canonical predecessor edge per vertex. Neighbors are
/// explored in ascending edge order, so ties resolve deterministically.
#[derive(Clone, Debug)]
pub struct DistanceMap {
    pub source: usize,
    pub dist: Vec<u32>,
    pub pred_edge: Vec<usize>,
    /// Nearest dummy cap (solid lattices), with its distance.
    pub nearest_boundary: Option<(usize, u32)>,
}

impl DistanceMap {
    /// Edges of the canonical shortest path from the source to `target`.
    pub fn path_to(&self, target: usize, lattice: &Lattice3D) -> Vec<usize> {
        let mut path = Vec::new();
        let mut v = target;
        while v != self.source {
            let e = self.pred_edge[v];
            assert!(e != NO_PRED, "target unreachable from source");
            path.push(e);
            v = lattice.edge_other_end(e, v);
        }
        path
    }
}

/// Breadth-first hop distances from every vertex in `sources`.
pub fn lattice_distances(lattice: &Lattice3D, sources: &[usize]) -> Vec<DistanceMap> {
    sources.iter().map(|&s| bfs(lattice, s)).collect()
}

fn bfs(lattice: &Lattice3D, source: usize) -> DistanceMap {
    let mut dist = vec![UNREACHED; lattice.vertices.len()];
    let mut pred_edge = vec![NO_PRED; lattice.vertices.len()];
    let mut nearest_boundary = None;
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        if lattice.is_dummy_vertex(v) {
            // Caps terminate paths; the first one dequeued is the nearest.
            if nearest_boundary.is_none() {
                nearest_boundary = Some((v, dist[v]));
            }
            continue;
        }
        for &e in &lattice.vertex_edges[v] {
            let w = lattice.edge_other_end(e, v);
            if dist[w] == UNREACHED {
                dist[w] = dist[v] + 1;
                pred_edge[w] = e;
                queue.push_back(w);
            }
        }
    }
    DistanceMap {
        source,
        dist,
        pred_edge,
        nearest_boundary,
    }
}

/// Auxiliary matching graph: defect nodes `0..d`, and on solid lattices a
/// boundary node `d + i` for each defect `i` (indices into `defects`).
#[derive(Clone, Debug)]
pub struct AuxGraph {
    pub num_nodes: usize,
    pub num_defects: usize,
    pub edges: Vec<(usize, usize, i64)>,
}

pub fn build_aux_graph(lattice: &Lattice3D, defects: &[usize], maps: &[DistanceMap]) -> AuxGraph {
    let d = defects.len();
    let with_boundary = lattice.kind == LatticeKind::Solid;
    let mut edges = Vec::new();
    for (i, map) in maps.iter().enumerate() {
        for (j, &defect) in defects.iter().enumerate().skip(i + 1) {
            let w = map.dist[defect];
            debug_assert!(w != UNREACHED);
            edges.push((i, j, w as i64));
        }
    }
    if with_boundary {
        for (i, map) in maps.iter().enumerate() {
            let (_, w) = map.nearest_boundary.expect("solid lattice has caps");
            edges.push((i, d + i, w as i64));
        }
        for i in 0..d {
            for j in i + 1..d {
                edges.push((d + i, d + j, 0));
            }
        }
    }
    AuxGraph {
        num_nodes: if with_boundary { 2 * d } else { d },
        num_defects: d,
        edges,
    }
}

/// Decode a phase-error syndrome into a Z estimate whose syndrome equals
/// `sigma` exactly.
pub fn decode_phase(code: &CodeSpec, sigma: &BitVec) -> Result<BitVec, CodeError> {
    let lattice = code
        .lattice()
        .ok_or_else(|| CodeError::Internal("matching decoder needs a lattice code".into()))?;
    if sigma.len() != code.h.num_rows() {
        return Err(CodeError::LengthMismatch {
            expected: code.h.num_rows(),
            got: sigma.len(),
        });
    }
    let defects: Vec<usize> = sigma.ones().collect();
    let mut estimate = BitVec::zeros(code.n);
    if defects.is_empty() {
        return Ok(estimate);
    }
    if lattice.kind == LatticeKind::Periodic && !defects.len().is_multiple_of(2) {
        return Err(CodeError::Internal(
            "odd defect count on a periodic lattice".into(),
        ));
    }
    let maps = lattice_distances(lattice, &defects);
    let aux = build_aux_graph(lattice, &defects, &maps);
    let mate = blossom::min_weight_perfect_matching(aux.num_nodes, &aux.edges)
        .map_err(|e| CodeError::Internal(format!("matching infeasible: {e}")))?;

    let d = defects.len();
    for i in 0..d {
        let m = mate[i];
        if m < d {
            if m > i {
                for e in maps[i].path_to(defects[m], lattice) {
                    estimate.toggle(e);
                }
            }
        } else {
            // Matched to its boundary node: correct along the path to the
            // nearest cap, half edge included.
            let (cap, _) = maps[i].nearest_boundary.expect("boundary node exists");
            for e in maps[i].path_to(cap, lattice) {
                estimate.toggle(e);
            }
        }
    }
    // Boundary-boundary pairs contribute nothing by construction.

    let achieved = code.h.syndrome_of(&estimate);
    if &achieved != sigma {
        return Err(CodeError::Internal(
            "matching estimate does not reproduce the syndrome".into(),
        ));
    }
    Ok(estimate)
}
