//! Erasure decoders for the welded code. Welded qubits are hyperedges, so
//! cycle and volume arguments break on them; both decoders therefore make
//! their freezing decisions on the unwelded interior qubits only (welded
//! erasures are temporarily set aside), then peel with the welded qubits
//! back in, and hand anything left to the exact solver. A plain
//! Gaussian-elimination decoder is included as the comparison baseline.

use crate::code::{CodeError, CodeSpec, DecodeOutcome, PauliFrame, Syndrome, WeldedGeometry};
use crate::erasure::{StuckPolicy, TannerGraph};
use crate::gf2::{BitMatrix, BitVec, Solve};

/// Split of an erasure into welded and interior parts, with per-solid
/// sub-erasures, as the welded algorithms see it.
#[derive(Clone, Debug)]
pub struct WeldedErasureContext {
    pub welded_erased: Vec<usize>,
    pub interior_erased: Vec<usize>,
    /// Interior erased qubits per solid, template-edge ids.
    pub per_solid: Vec<Vec<usize>>,
}

pub fn split_erasure(code: &CodeSpec, erased: &[usize]) -> Result<WeldedErasureContext, CodeError> {
    let geom = code
        .welded_geometry()
        .ok_or_else(|| CodeError::Internal("welded decoder needs a welded code".into()))?;
    let mut welded_erased = Vec::new();
    let mut interior_erased = Vec::new();
    let mut per_solid = vec![Vec::new(); geom.num_solids()];
    for &q in erased {
        if code.qubit_meta[q].welded {
            welded_erased.push(q);
        } else {
            interior_erased.push(q);
            if let Some((s, e)) = geom.interior_of(q) {
                per_solid[s].push(e);
            }
        }
    }
    Ok(WeldedErasureContext {
        welded_erased,
        interior_erased,
        per_solid,
    })
}

fn welded_graph(
    check: &crate::code::CheckMatrix,
    erased: &[usize],
    syndrome: &BitVec,
) -> TannerGraph {
    TannerGraph::new(
        erased,
        |q| check.qubit_rows[q].clone(),
        |r| syndrome.get(r),
        &[],
    )
}

/// Decode erasure-induced phase errors on the welded code: peel; if stuck,
/// set the erased welded qubits aside, freeze one interior qubit per cycle
/// via a spanning forest of the interior erased lattice, bring the welded
/// qubits back, peel again, and solve whatever remains exactly.
pub fn decode_welded_z(
    code: &CodeSpec,
    erased: &[usize],
    sigma: &BitVec,
) -> Result<BitVec, CodeError> {
    if sigma.len() != code.h.num_rows() {
        return Err(CodeError::LengthMismatch {
            expected: code.h.num_rows(),
            got: sigma.len(),
        });
    }
    let geom = code
        .welded_geometry()
        .ok_or_else(|| CodeError::Internal("welded decoder needs a welded code".into()))?
        .clone();
    let mut graph = welded_graph(&code.h, erased, sigma);
    graph.peel();
    if graph.has_nonzero_syndrome() {
        // Forest over the live interior qubits; interior edges connect two
        // real vertices of one solid, so the graphic-matroid argument of
        // the solid code applies per component.
        let nv = geom.vertex_rows_per_solid;
        let live = graph.live_qubits();
        let mut parent: Vec<usize> = (0..geom.num_solids() * nv).collect();
        fn find(parent: &mut [usize], v: usize) -> usize {
            let mut root = v;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = v;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        for &q in &live {
            let Some((s, e)) = geom.interior_of(q) else {
                continue; // welded qubits stay out of the forest step
            };
            let [a, b] = geom.template.edges[e].vertices;
            let ra = find(&mut parent, s * nv + a);
            let rb = find(&mut parent, s * nv + b);
            if ra == rb {
                graph.freeze(q);
            } else {
                parent[ra] = rb;
            }
        }
        graph.peel();
        if graph.has_nonzero_syndrome() {
            graph.solve_residual()?;
        }
    }
    let estimate = graph.into_estimate(code.n);
    if &code.h.syndrome_of(&estimate) != sigma {
        return Err(CodeError::Internal(
            "welded Z estimate does not reproduce the syndrome".into(),
        ));
    }
    Ok(estimate)
}

/// One trapping pass inside a single solid: flood the full template cell
/// complex (real cells and rough-boundary pockets) through qubits that
/// are neither unresolved nor shared with another solid, and return the
/// first region whose erased cut is a nonempty kernel element free of
/// hyper-welded qubits. Hyper-welded qubits are walls: a region reaching
/// one picks it up in its cut and disqualifies itself, which keeps all
/// freezing decisions on single-solid stabilizers. With R=1 nothing is
/// hyper-welded and this is exactly the solid-code trapping algorithm.
fn trap_solid(
    code: &CodeSpec,
    geom: &WeldedGeometry,
    solid: usize,
    unresolved: &BitVec,
) -> Option<Vec<usize>> {
    let template = &geom.template;
    let q_map = &geom.qubit_of[solid];
    let num_cells = template.vertices.len();
    let hyper = |e: usize| code.qubit_meta[q_map[e]].welded;
    let mut region_of = vec![usize::MAX; num_cells];
    let mut num_regions = 0;
    let mut regions: Vec<Vec<usize>> = Vec::new();
    for start in 0..num_cells {
        if region_of[start] != usize::MAX {
            continue;
        }
        let id = num_regions;
        num_regions += 1;
        let mut cells = vec![start];
        let mut stack = vec![start];
        region_of[start] = id;
        while let Some(v) = stack.pop() {
            for &e in &template.vertex_edges[v] {
                if hyper(e) || unresolved.get(q_map[e]) {
                    continue;
                }
                let other = template.edge_other_end(e, v);
                if region_of[other] == usize::MAX {
                    region_of[other] = id;
                    cells.push(other);
                    stack.push(other);
                }
            }
        }
        regions.push(cells);
    }
    // Cut of each region: template edges with exactly one end inside.
    let mut cuts: Vec<Vec<usize>> = vec![Vec::new(); num_regions];
    for (e, edge) in template.edges.iter().enumerate() {
        let [a, b] = edge.vertices;
        let (ra, rb) = (region_of[a], region_of[b]);
        if ra != rb {
            cuts[ra].push(e);
            cuts[rb].push(e);
        }
    }
    for cut in cuts {
        if cut.is_empty()
            || cut.iter().any(|&e| hyper(e))
            || cut.iter().any(|&e| !unresolved.get(q_map[e]))
        {
            continue;
        }
        let candidate: Vec<usize> = {
            let mut qs: Vec<usize> = cut.iter().map(|&e| q_map[e]).collect();
            qs.sort_unstable();
            qs
        };
        if in_z_kernel(code, &candidate) {
            return Some(candidate);
        }
    }
    None
}

/// Does T annihilate this support? Pocket-including cuts can carry an
/// open half-edge face, which this rejects.
fn in_z_kernel(code: &CodeSpec, support: &[usize]) -> bool {
    let mut odd: std::collections::HashMap<usize, bool> = std::collections::HashMap::new();
    for &q in support {
        for &r in &code.t.qubit_rows[q] {
            *odd.entry(r).or_default() ^= true;
        }
    }
    odd.values().all(|&o| !o)
}

/// Decode erasure-induced bit flips on the welded code: peel, and while
/// stuck run the trapping algorithm inside each solid over its unresolved
/// unwelded erasures, freezing one qubit per usable stabilizer found. With
/// nothing left to trap, the stuck policy picks between declaring failure
/// and the exact solve.
pub fn decode_welded_x(
    code: &CodeSpec,
    erased: &[usize],
    tau: &BitVec,
    policy: StuckPolicy,
) -> Result<DecodeOutcome, CodeError> {
    if tau.len() != code.t.num_rows() {
        return Err(CodeError::LengthMismatch {
            expected: code.t.num_rows(),
            got: tau.len(),
        });
    }
    let geom = code
        .welded_geometry()
        .ok_or_else(|| CodeError::Internal("welded decoder needs a welded code".into()))?
        .clone();
    let mut graph = welded_graph(&code.t, erased, tau);
    loop {
        graph.peel();
        if !graph.has_nonzero_syndrome() {
            let estimate = graph.into_estimate(code.n);
            debug_assert_eq!(&code.t.syndrome_of(&estimate), tau);
            return Ok(DecodeOutcome::Estimate(estimate));
        }
        let unresolved = BitVec::from_indices(code.n, graph.live_qubits());
        let mut frozen = false;
        for solid in 0..geom.num_solids() {
            if let Some(candidate) = trap_solid(code, &geom, solid, &unresolved) {
                graph.freeze(candidate[0]);
                frozen = true;
                break;
            }
        }
        if !frozen {
            match policy {
                StuckPolicy::DeclareFailure => {
                    return Ok(DecodeOutcome::Failure("no stabilizer left to trap"));
                }
                StuckPolicy::Gauss => {
                    graph.solve_residual()?;
                    let estimate = graph.into_estimate(code.n);
                    if &code.t.syndrome_of(&estimate) != tau {
                        return Err(CodeError::Internal(
                            "welded X estimate does not reproduce the syndrome".into(),
                        ));
                    }
                    return Ok(DecodeOutcome::Estimate(estimate));
                }
            }
        }
    }
}

/// Comparison baseline: solve both restricted systems outright with
/// Gaussian elimination (canonical solutions, columns in qubit order).
pub fn decode_welded_gauss(
    code: &CodeSpec,
    erased: &[usize],
    syndrome: &Syndrome,
) -> Result<PauliFrame, CodeError> {
    let solve_sector =
        |check: &crate::code::CheckMatrix, rhs: &BitVec| -> Result<BitVec, CodeError> {
            let mut restricted = BitMatrix::new(check.num_rows(), erased.len());
            for (c, &q) in erased.iter().enumerate() {
                for &r in &check.qubit_rows[q] {
                    restricted.set(r, c, true);
                }
            }
            match restricted.solve(rhs) {
                Solve::Solution(x) => {
                    let mut bits = BitVec::zeros(code.n);
                    for (c, &q) in erased.iter().enumerate() {
                        if x.get(c) {
                            bits.set(q, true);
                        }
                    }
                    Ok(bits)
                }
                Solve::Inconsistent => Err(CodeError::Internal(
                    "restricted welded system inconsistent".into(),
                )),
            }
        };
    Ok(PauliFrame {
        x: solve_sector(&code.t, &syndrome.tau)?,
        z: solve_sector(&code.h, &syndrome.sigma)?,
    })
}
