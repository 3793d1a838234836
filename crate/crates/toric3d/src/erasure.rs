//! Erasure decoders for the periodic and solid 3D toric codes: peeling on
//! the restricted Tanner graph, spanning-forest freezing for the Z sector,
//! the dual-lattice trapping algorithm for the X sector, and an exact
//! GF(2) solver as the final fallback.

use crate::code::{CodeError, CodeSpec, DecodeOutcome};
use crate::gf2::{BitMatrix, BitVec, Solve};
use crate::lattice::DualView;
use std::collections::HashMap;
use std::collections::VecDeque;

/// What to do when the X-sector decoder is stuck with no usable trapped
/// region: give up (the reproduction default) or solve the residual system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum StuckPolicy {
    #[default]
    DeclareFailure,
    Gauss,
}

/// Z-sector algorithm variant: freeze every cycle up front via a spanning
/// forest, or interleave peeling with one freeze at a time.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ZVariant {
    #[default]
    FreezeFirst,
    Alternating,
}

const NONE: usize = usize::MAX;

/// Tanner graph of a check matrix restricted to a set of erased qubits.
/// Check nodes carry the current syndrome; dummy check nodes (the cap
/// vertices of a solid lattice, Z sector only) carry no syndrome and are
/// never peeling pivots.
pub struct TannerGraph {
    /// Global qubit ids, ascending.
    pub qubits: Vec<usize>,
    qubit_pos: HashMap<usize, usize>,
    /// Global row id per check node (dummy nodes use synthetic ids).
    pub checks: Vec<usize>,
    pub dummy: Vec<bool>,
    adj_check: Vec<Vec<usize>>,
    adj_qubit: Vec<Vec<usize>>,
    qubit_alive: Vec<bool>,
    degree: Vec<usize>,
    pub syndrome: Vec<bool>,
    /// Assigned error bits, by local qubit index.
    assigned: Vec<Option<bool>>,
}

impl TannerGraph {
    /// Restriction of `rows` to `erased`; `row_syndrome` gives each row's
    /// current syndrome bit. Extra degree-1 dummy rows may be attached
    /// (used for the solid-code caps).
    pub fn new(
        erased: &[usize],
        qubit_rows: impl Fn(usize) -> Vec<usize>,
        row_syndrome: impl Fn(usize) -> bool,
        dummy_rows: &[(usize, usize)],
    ) -> TannerGraph {
        let qubits: Vec<usize> = erased.to_vec();
        let qubit_pos: HashMap<usize, usize> =
            qubits.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut checks = Vec::new();
        let mut check_pos: HashMap<usize, usize> = HashMap::new();
        let mut adj_check: Vec<Vec<usize>> = Vec::new();
        let mut adj_qubit: Vec<Vec<usize>> = vec![Vec::new(); qubits.len()];
        let mut dummy = Vec::new();
        let mut syndrome = Vec::new();
        for (local_q, &q) in qubits.iter().enumerate() {
            for row in qubit_rows(q) {
                let local_c = *check_pos.entry(row).or_insert_with(|| {
                    checks.push(row);
                    adj_check.push(Vec::new());
                    dummy.push(false);
                    syndrome.push(row_syndrome(row));
                    checks.len() - 1
                });
                adj_check[local_c].push(local_q);
                adj_qubit[local_q].push(local_c);
            }
        }
        for &(dummy_id, q) in dummy_rows {
            if let Some(&local_q) = qubit_pos.get(&q) {
                checks.push(dummy_id);
                adj_check.push(vec![local_q]);
                dummy.push(true);
                syndrome.push(false);
                adj_qubit[local_q].push(checks.len() - 1);
            }
        }
        let degree = adj_check.iter().map(|a| a.len()).collect();
        let n = qubits.len();
        TannerGraph {
            qubits,
            qubit_pos,
            checks,
            dummy,
            adj_check,
            adj_qubit,
            qubit_alive: vec![true; n],
            degree,
            syndrome,
            assigned: vec![None; n],
        }
    }

    pub fn num_live_qubits(&self) -> usize {
        self.qubit_alive.iter().filter(|&&a| a).count()
    }

    pub fn live_qubits(&self) -> Vec<usize> {
        (0..self.qubits.len())
            .filter(|&i| self.qubit_alive[i])
            .map(|i| self.qubits[i])
            .collect()
    }

    pub fn has_nonzero_syndrome(&self) -> bool {
        self.syndrome.iter().any(|&s| s)
    }

    /// Freeze a qubit: force its error bit to zero and drop it from the
    /// graph without touching any syndrome.
    pub fn freeze(&mut self, qubit: usize) {
        let local_q = self.qubit_pos[&qubit];
        assert!(self.qubit_alive[local_q], "freezing a resolved qubit");
        self.remove_qubit(local_q, false);
        self.assigned[local_q] = Some(false);
    }

    fn remove_qubit(&mut self, local_q: usize, flip_syndromes: bool) {
        self.qubit_alive[local_q] = false;
        for &c in &self.adj_qubit[local_q] {
            self.degree[c] -= 1;
            if flip_syndromes {
                self.syndrome[c] = !self.syndrome[c];
            }
        }
    }

    /// Peel every resolvable qubit: repeatedly take a non-dummy check of
    /// degree one, assign its qubit the check's syndrome bit, and remove
    /// both. The peeled assignment is forced, so the worklist order only
    /// affects internal bookkeeping, not the result.
    pub fn peel(&mut self) {
        let mut worklist: VecDeque<usize> = (0..self.checks.len())
            .filter(|&c| !self.dummy[c] && self.degree[c] == 1)
            .collect();
        while let Some(c) = worklist.pop_front() {
            if self.degree[c] != 1 || self.dummy[c] {
                continue;
            }
            let &local_q = self.adj_check[c]
                .iter()
                .find(|&&q| self.qubit_alive[q])
                .expect("degree-one check has a live qubit");
            let value = self.syndrome[c];
            self.assigned[local_q] = Some(value);
            self.qubit_alive[local_q] = false;
            for &c2 in &self.adj_qubit[local_q] {
                self.degree[c2] -= 1;
                if value {
                    self.syndrome[c2] = !self.syndrome[c2];
                }
                if !self.dummy[c2] && self.degree[c2] == 1 {
                    worklist.push_back(c2);
                }
            }
        }
    }

    /// Estimate over all qubits of the code: peeled bits where assigned,
    /// zero elsewhere (frozen and unresolved qubits).
    pub fn into_estimate(&self, n: usize) -> BitVec {
        let mut est = BitVec::zeros(n);
        for (i, &q) in self.qubits.iter().enumerate() {
            if self.assigned[i] == Some(true) {
                est.set(q, true);
            }
        }
        est
    }

    /// Residual linear system over the live qubits (columns in ascending
    /// qubit order) and the live non-dummy checks.
    pub fn residual_system(&self) -> (Vec<usize>, BitMatrix, BitVec) {
        let live: Vec<usize> = (0..self.qubits.len())
            .filter(|&i| self.qubit_alive[i])
            .collect();
        let col_of: HashMap<usize, usize> = live.iter().enumerate().map(|(c, &i)| (i, c)).collect();
        let rows: Vec<usize> = (0..self.checks.len())
            .filter(|&c| !self.dummy[c] && self.degree[c] > 0)
            .collect();
        let mut matrix = BitMatrix::new(rows.len(), live.len());
        let mut rhs = BitVec::zeros(rows.len());
        for (r, &c) in rows.iter().enumerate() {
            for &local_q in &self.adj_check[c] {
                if let Some(&col) = col_of.get(&local_q) {
                    matrix.set(r, col, true);
                }
            }
            rhs.set(r, self.syndrome[c]);
        }
        let live_globals = live.iter().map(|&i| self.qubits[i]).collect();
        (live_globals, matrix, rhs)
    }

    /// Solve the residual system and fold the solution into assignments.
    pub fn solve_residual(&mut self) -> Result<(), CodeError> {
        let (live, matrix, rhs) = self.residual_system();
        match matrix.solve(&rhs) {
            Solve::Solution(x) => {
                for (col, &q) in live.iter().enumerate() {
                    let local_q = self.qubit_pos[&q];
                    self.assigned[local_q] = Some(x.get(col));
                    self.remove_qubit(local_q, x.get(col));
                }
                Ok(())
            }
            Solve::Inconsistent => Err(CodeError::Internal(
                "residual erasure system inconsistent".into(),
            )),
        }
    }
}

/// Z-sector Tanner graph: X checks (vertices) restricted to the erasure,
/// plus one dummy check per cap vertex touching an erased half edge.
fn z_graph(code: &CodeSpec, erased: &[usize], sigma: &BitVec) -> TannerGraph {
    let dummy_rows: Vec<(usize, usize)> = match code.lattice() {
        Some(lat) => erased
            .iter()
            .filter(|&&q| lat.edges[q].half)
            .map(|&q| {
                let [a, b] = lat.edges[q].vertices;
                let cap = if lat.is_dummy_vertex(a) { a } else { b };
                (cap, q)
            })
            .collect(),
        None => Vec::new(),
    };
    TannerGraph::new(
        erased,
        |q| code.h.qubit_rows[q].clone(),
        |r| sigma.get(r),
        &dummy_rows,
    )
}

/// X-sector Tanner graph: Z checks (faces) restricted to the erasure.
fn x_graph(code: &CodeSpec, erased: &[usize], tau: &BitVec) -> TannerGraph {
    TannerGraph::new(
        erased,
        |q| code.t.qubit_rows[q].clone(),
        |r| tau.get(r),
        &[],
    )
}

/// Spanning forest of the erased sublattice, rooted at dummy caps where
/// present and with at most one cap per tree; every erased qubit outside
/// the forest is frozen. Qubits are taken in ascending index order, so the
/// forest (and the frozen set) is deterministic.
pub fn freeze_by_forest_z(code: &CodeSpec, erased: &[usize]) -> Result<Vec<usize>, CodeError> {
    let lat = code
        .lattice()
        .ok_or_else(|| CodeError::Internal("forest freezing needs a lattice code".into()))?;
    let mut parent: Vec<usize> = (0..lat.vertices.len()).collect();
    let mut dummies: Vec<usize> = lat.vertices.iter().map(|v| usize::from(v.dummy)).collect();
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
    let mut frozen = Vec::new();
    for &q in erased {
        let [a, b] = lat.edges[q].vertices;
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb || dummies[ra] + dummies[rb] >= 2 {
            // A cycle, or a string joining two rough-boundary caps:
            // either way a kernel element, so this qubit can be frozen.
            frozen.push(q);
        } else {
            parent[ra] = rb;
            dummies[rb] += dummies[ra];
        }
    }
    Ok(frozen)
}

/// One trapped region of the dual lattice: the cells a particle moving
/// through unerased qubits can reach, and the erased boundary they cut.
#[derive(Clone, Debug)]
pub struct Region {
    pub cells: Vec<usize>,
    /// GF(2) boundary of the region: qubits with exactly one side inside.
    /// Equals the sum of the region's cube checks when no pocket cells are
    /// involved.
    pub candidate: Vec<usize>,
    /// Candidate is nonempty, fully erased, and annihilated by T (a true
    /// kernel element, safe to freeze against).
    pub usable: bool,
}

#[derive(Clone, Debug)]
pub struct RegionReport {
    pub regions: Vec<Region>,
}

/// Flood-fill the dual cells (real cells plus boundary pockets) through
/// unerased qubits and report each region's erased boundary.
pub fn trap(code: &CodeSpec, dual: &DualView, erased: &BitVec) -> RegionReport {
    let lat = dual.lattice;
    let num_cells = dual.num_cells();
    let mut region_of = vec![NONE; num_cells];
    let mut regions: Vec<Region> = Vec::new();
    for start in 0..num_cells {
        if region_of[start] != NONE {
            continue;
        }
        let id = regions.len();
        let mut cells = Vec::new();
        let mut stack = vec![start];
        region_of[start] = id;
        while let Some(cell) = stack.pop() {
            cells.push(cell);
            for &q in dual.qubits_of_cell(cell) {
                if erased.get(q) {
                    continue;
                }
                let other = lat.edge_other_end(q, cell);
                if region_of[other] == NONE {
                    region_of[other] = id;
                    stack.push(other);
                }
            }
        }
        cells.sort_unstable();
        regions.push(Region {
            cells,
            candidate: Vec::new(),
            usable: false,
        });
    }
    for q in erased.ones() {
        let [a, b] = dual.cells_of_qubit(q);
        if region_of[a] != region_of[b] {
            regions[region_of[a]].candidate.push(q);
            regions[region_of[b]].candidate.push(q);
        }
    }
    for region in &mut regions {
        region.candidate.sort_unstable();
        region.usable = !region.candidate.is_empty()
            && region.candidate.iter().all(|&q| erased.get(q))
            && in_z_kernel(code, &region.candidate);
    }
    RegionReport { regions }
}

/// Does T annihilate this support? Sums of cube checks always pass; the
/// check matters for regions that include boundary pockets, whose cut can
/// carry an open half-edge face.
fn in_z_kernel(code: &CodeSpec, support: &[usize]) -> bool {
    let mut odd: HashMap<usize, bool> = HashMap::new();
    for &q in support {
        for &r in &code.t.qubit_rows[q] {
            *odd.entry(r).or_default() ^= true;
        }
    }
    odd.values().all(|&o| !o)
}

/// Decode erasure-induced phase errors: freeze the forest complement (or
/// alternate freeze/peel), peel, and solve whatever remains. The returned
/// estimate always satisfies `H e^t = sigma` with support in the erasure.
pub fn decode_erasure_z(
    code: &CodeSpec,
    erased: &[usize],
    sigma: &BitVec,
    variant: ZVariant,
) -> Result<BitVec, CodeError> {
    if sigma.len() != code.h.num_rows() {
        return Err(CodeError::LengthMismatch {
            expected: code.h.num_rows(),
            got: sigma.len(),
        });
    }
    let estimate = match variant {
        ZVariant::FreezeFirst => {
            let frozen = freeze_by_forest_z(code, erased)?;
            let mut graph = z_graph(code, erased, sigma);
            for q in frozen {
                graph.freeze(q);
            }
            graph.peel();
            if graph.has_nonzero_syndrome() {
                graph.solve_residual()?;
            }
            graph.into_estimate(code.n)
        }
        ZVariant::Alternating => decode_z_alternating(code, erased, sigma)?,
    };
    if &code.h.syndrome_of(&estimate) != sigma {
        return Err(CodeError::Internal(
            "erasure Z estimate does not reproduce the syndrome".into(),
        ));
    }
    Ok(estimate)
}

/// Alternating variant: peel until stuck, then freeze one qubit from a
/// kernel element (a cycle of the live erased subgraph, or a live string
/// joining two caps), and repeat; solve exactly when no kernel support is
/// left.
fn decode_z_alternating(
    code: &CodeSpec,
    erased: &[usize],
    sigma: &BitVec,
) -> Result<BitVec, CodeError> {
    let lat = code
        .lattice()
        .ok_or_else(|| CodeError::Internal("alternating decoder needs a lattice code".into()))?
        .clone();
    let mut graph = z_graph(code, erased, sigma);
    loop {
        graph.peel();
        if !graph.has_nonzero_syndrome() {
            return Ok(graph.into_estimate(code.n));
        }
        // Deterministic kernel-support search over the live qubits.
        let live = graph.live_qubits();
        let mut parent: Vec<usize> = (0..lat.vertices.len()).collect();
        let mut dummies: Vec<usize> = lat.vertices.iter().map(|v| usize::from(v.dummy)).collect();
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
        let mut to_freeze = None;
        for &q in &live {
            let [a, b] = lat.edges[q].vertices;
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, b);
            if ra == rb || dummies[ra] + dummies[rb] >= 2 {
                to_freeze = Some(q);
                break;
            }
            parent[ra] = rb;
            dummies[rb] += dummies[ra];
        }
        match to_freeze {
            Some(q) => graph.freeze(q),
            None => {
                graph.solve_residual()?;
                return Ok(graph.into_estimate(code.n));
            }
        }
    }
}

/// Decode erasure-induced bit flips: peel, and when stuck ask the trapping
/// algorithm for a region whose erased boundary is a kernel element;
/// freeze its lowest qubit and continue. With no usable region left the
/// stuck policy decides between declaring failure and solving exactly.
pub fn decode_erasure_x(
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
    let lat = code
        .lattice()
        .ok_or_else(|| CodeError::Internal("trapping decoder needs a lattice code".into()))?
        .clone();
    let dual = DualView { lattice: &lat };
    let mut graph = x_graph(code, erased, tau);
    loop {
        graph.peel();
        if !graph.has_nonzero_syndrome() {
            let estimate = graph.into_estimate(code.n);
            debug_assert_eq!(&code.t.syndrome_of(&estimate), tau);
            return Ok(DecodeOutcome::Estimate(estimate));
        }
        let live = BitVec::from_indices(code.n, graph.live_qubits());
        let report = trap(code, &dual, &live);
        match report.regions.iter().find(|r| r.usable) {
            Some(region) => graph.freeze(region.candidate[0]),
            None => match policy {
                StuckPolicy::DeclareFailure => {
                    return Ok(DecodeOutcome::Failure("no usable trapped region"));
                }
                StuckPolicy::Gauss => {
                    graph.solve_residual()?;
                    let estimate = graph.into_estimate(code.n);
                    if &code.t.syndrome_of(&estimate) != tau {
                        return Err(CodeError::Internal(
                            "erasure X estimate does not reproduce the syndrome".into(),
                        ));
                    }
                    return Ok(DecodeOutcome::Estimate(estimate));
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{self, PauliFrame};
    use crate::lattice::dual_view;
    use crate::noise;

    fn erased_set(code: &CodeSpec, qubits: &[usize]) -> Vec<usize> {
        let mut v = qubits.to_vec();
        v.sort_unstable();
        v.dedup();
        assert!(v.iter().all(|&q| q < code.n));
        v
    }

    fn z_residual_ok(code: &CodeSpec, truth: &BitVec, est: &BitVec) -> (bool, bool) {
        let mut residual = PauliFrame::zero(code.n);
        residual.z = truth.clone();
        residual.z.xor_assign(est);
        code::is_logical_failure(code, &residual).unwrap()
    }

    #[test]
    fn forest_freezes_one_qubit_per_cycle() {
        let code = CodeSpec::solid(2).unwrap();
        let cycle = code.t.rows[0].clone();
        assert_eq!(cycle.len(), 3); // boundary face: 2 half edges + 1 horizontal
        let square = code.t.rows.iter().find(|r| r.len() == 4).unwrap().clone();
        let frozen = freeze_by_forest_z(&code, &erased_set(&code, &square)).unwrap();
        assert_eq!(frozen.len(), 1);
    }

    #[test]
    fn forest_splits_boundary_to_boundary_strings() {
        let code = CodeSpec::solid(2).unwrap();
        // The Z-logical string runs cap to cap; exactly one of its qubits
        // must be frozen.
        let string = code.logicals_z[0].clone();
        let frozen = freeze_by_forest_z(&code, &erased_set(&code, &string)).unwrap();
        assert_eq!(frozen.len(), 1);
    }

    #[test]
    fn forest_keeps_trees_intact() {
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        // Three edges around one vertex: a star, no cycle, no double cap.
        let v = (0..lat.num_real_vertices())
            .find(|&v| lat.vertex_edges[v].len() == 6)
            .unwrap();
        let star: Vec<usize> = lat.vertex_edges[v][..3].to_vec();
        let frozen = freeze_by_forest_z(&code, &erased_set(&code, &star)).unwrap();
        assert!(frozen.is_empty());
    }

    #[test]
    fn peel_resolves_chains_and_leaves_loops() {
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        // A path of two interior edges sharing one vertex.
        let v = (0..lat.num_real_vertices())
            .find(|&v| lat.vertex_edges[v].len() == 6)
            .unwrap();
        let chain: Vec<usize> = lat.vertex_edges[v][..2].to_vec();
        let mut frame = PauliFrame::zero(code.n);
        frame.z.set(chain[0], true);
        let sigma = code.h.syndrome_of(&frame.z);
        let mut graph = z_graph(&code, &erased_set(&code, &chain), &sigma);
        graph.peel();
        assert!(!graph.has_nonzero_syndrome());
        assert_eq!(graph.num_live_qubits(), 0);
        assert_eq!(graph.into_estimate(code.n), frame.z);

        // A fully erased 4-cycle peels nothing: every check has degree 2.
        let square = code.t.rows.iter().find(|r| r.len() == 4).unwrap().clone();
        let mut graph = z_graph(
            &code,
            &erased_set(&code, &square),
            &BitVec::zeros(code.h.num_rows()),
        );
        graph.peel();
        assert_eq!(graph.num_live_qubits(), 4);
    }

    #[test]
    fn trap_isolated_cell_yields_its_check() {
        let code = CodeSpec::periodic(3).unwrap();
        let lat = code.lattice().unwrap();
        let dual = dual_view(lat);
        let v = 0;
        let erased = BitVec::from_indices(code.n, lat.vertex_edges[v].iter().copied());
        let report = trap(&code, &dual, &erased);
        let isolated: Vec<_> = report
            .regions
            .iter()
            .filter(|r| r.cells == vec![v])
            .collect();
        assert_eq!(isolated.len(), 1);
        let mut expect = lat.vertex_edges[v].clone();
        expect.sort_unstable();
        assert_eq!(isolated[0].candidate, expect);
        assert!(isolated[0].usable);
    }

    #[test]
    fn trap_periodic_winding_plane_gives_empty_candidate() {
        let code = CodeSpec::periodic(3).unwrap();
        let lat = code.lattice().unwrap();
        let dual = dual_view(lat);
        // Erase the X-logical winding plane (all x-edges crossing x=1/2):
        // the lattice stays connected around the wrap, so one region and
        // nothing cut.
        let erased = BitVec::from_indices(code.n, code.logicals_x[0].iter().copied());
        let report = trap(&code, &dual, &erased);
        assert_eq!(report.regions.len(), 1);
        assert!(report.regions[0].candidate.is_empty());
        assert!(!report.regions[0].usable);
    }

    #[test]
    fn trap_solid_plane_separates_above_and_below() {
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        let dual = dual_view(lat);
        // Erase the full vertical edges between layers 1 and 2.
        let plane: Vec<usize> = (0..code.n)
            .filter(|&e| {
                let edge = &lat.edges[e];
                edge.axis == crate::lattice::AXIS_Z && !edge.half
            })
            .collect();
        assert_eq!(plane.len(), 9);
        let erased = BitVec::from_indices(code.n, plane.iter().copied());
        let report = trap(&code, &dual, &erased);
        let usable: Vec<_> = report.regions.iter().filter(|r| r.usable).collect();
        assert_eq!(usable.len(), 2, "one region above, one below");
        let mut expect = plane.clone();
        expect.sort_unstable();
        for region in usable {
            assert_eq!(region.candidate, expect);
        }
    }

    #[test]
    fn trap_solid_bottom_half_edge_plane() {
        let code = CodeSpec::solid(2).unwrap();
        let lat = code.lattice().unwrap();
        let dual = dual_view(lat);
        let plane = code.logicals_x[0].clone();
        let erased = BitVec::from_indices(code.n, plane.iter().copied());
        let report = trap(&code, &dual, &erased);
        // Each isolated bottom cap cuts only its own half edge, which T
        // does not annihilate; the big region's boundary is the plane.
        let usable: Vec<_> = report.regions.iter().filter(|r| r.usable).collect();
        assert_eq!(usable.len(), 1);
        let mut expect = plane;
        expect.sort_unstable();
        assert_eq!(usable[0].candidate, expect);
        let single_cap = report
            .regions
            .iter()
            .filter(|r| r.cells.len() == 1 && lat.is_dummy_vertex(r.cells[0]));
        for region in single_cap {
            assert!(!region.usable);
            assert_eq!(region.candidate.len(), 1);
        }
    }

    #[test]
    fn decode_z_no_erasure_and_single_qubit() {
        let code = CodeSpec::solid(2).unwrap();
        let zero = BitVec::zeros(code.h.num_rows());
        for variant in [ZVariant::FreezeFirst, ZVariant::Alternating] {
            let est = decode_erasure_z(&code, &[], &zero, variant).unwrap();
            assert!(est.is_zero());
            for q in 0..code.n {
                let truth = BitVec::from_indices(code.n, [q]);
                let sigma = code.h.syndrome_of(&truth);
                let est = decode_erasure_z(&code, &[q], &sigma, variant).unwrap();
                assert_eq!(est, truth, "qubit {q} exact recovery");
            }
        }
    }

    #[test]
    fn decode_z_stabilizer_loop_up_to_stabilizer() {
        let code = CodeSpec::solid(2).unwrap();
        let square = code.t.rows.iter().find(|r| r.len() == 4).unwrap().clone();
        let erased = erased_set(&code, &square);
        // All 16 induced patterns on the loop decode to within a
        // stabilizer of the truth.
        for pattern in 0..16u32 {
            let mut truth = BitVec::zeros(code.n);
            for (bit, &q) in erased.iter().enumerate() {
                if pattern >> bit & 1 == 1 {
                    truth.set(q, true);
                }
            }
            let sigma = code.h.syndrome_of(&truth);
            for variant in [ZVariant::FreezeFirst, ZVariant::Alternating] {
                let est = decode_erasure_z(&code, &erased, &sigma, variant).unwrap();
                let (z_failed, _) = z_residual_ok(&code, &truth, &est);
                assert!(!z_failed, "pattern {pattern} failed");
            }
        }
    }

    #[test]
    fn decode_x_single_cube_up_to_stabilizer() {
        let code = CodeSpec::periodic(2).unwrap();
        let lat = code.lattice().unwrap();
        // Erase all 6 faces of one dual cube (= edges of one vertex).
        let erased = erased_set(&code, &lat.vertex_edges[0]);
        for pattern in 0..64u32 {
            let mut truth = BitVec::zeros(code.n);
            for (bit, &q) in erased.iter().enumerate() {
                if pattern >> bit & 1 == 1 {
                    truth.set(q, true);
                }
            }
            let tau = code.t.syndrome_of(&truth);
            let out = decode_erasure_x(&code, &erased, &tau, StuckPolicy::DeclareFailure).unwrap();
            let est = match out {
                DecodeOutcome::Estimate(e) => e,
                DecodeOutcome::Failure(r) => panic!("pattern {pattern} declared failure: {r}"),
            };
            let mut residual = PauliFrame::zero(code.n);
            residual.x = truth;
            residual.x.xor_assign(&est);
            let (_, x_failed) = code::is_logical_failure(&code, &residual).unwrap();
            assert!(!x_failed, "pattern {pattern} flipped a logical");
        }
    }

    #[test]
    fn decode_x_erased_logical_plane_declares_failure() {
        let code = CodeSpec::periodic(2).unwrap();
        let erased = erased_set(&code, &code.logicals_x[0]);
        let mut truth = BitVec::zeros(code.n);
        for &q in &erased {
            truth.set(q, true);
        }
        let tau = code.t.syndrome_of(&truth);
        assert!(tau.is_zero(), "a logical has zero syndrome");
        // Nonzero syndrome from half the plane: peeling is stuck and no
        // region is usable.
        let mut half = BitVec::zeros(code.n);
        for &q in erased.iter().take(2) {
            half.set(q, true);
        }
        let tau = code.t.syndrome_of(&half);
        let out = decode_erasure_x(&code, &erased, &tau, StuckPolicy::DeclareFailure).unwrap();
        assert!(matches!(out, DecodeOutcome::Failure(_)));
        // The Gauss policy still produces a consistent estimate.
        let out = decode_erasure_x(&code, &erased, &tau, StuckPolicy::Gauss).unwrap();
        let est = out.estimate().expect("gauss policy always solves");
        assert_eq!(code.t.syndrome_of(est), tau);
    }

    #[test]
    fn random_erasures_reproduce_syndromes() {
        for code in [CodeSpec::periodic(3).unwrap(), CodeSpec::solid(3).unwrap()] {
            for trial in 0..200u64 {
                let mut rng = noise::trial_rng(31, 4, trial);
                let sample = noise::sample_erasure(code.n, 0.15, &mut rng).unwrap();
                let syn = code::syndrome(&code, &sample.induced).unwrap();
                let est =
                    decode_erasure_z(&code, &sample.erased, &syn.sigma, ZVariant::FreezeFirst)
                        .unwrap();
                assert_eq!(code.h.syndrome_of(&est), syn.sigma);
                for q in est.ones() {
                    assert!(sample.erased.binary_search(&q).is_ok(), "support escape");
                }
                if let DecodeOutcome::Estimate(est) =
                    decode_erasure_x(&code, &sample.erased, &syn.tau, StuckPolicy::Gauss).unwrap()
                {
                    assert_eq!(code.t.syndrome_of(&est), syn.tau);
                    for q in est.ones() {
                        assert!(sample.erased.binary_search(&q).is_ok(), "support escape");
                    }
                }
            }
        }
    }

    #[test]
    fn freeze_first_equals_canonical_gauss_solve() {
        // The ascending-order forest and ascending-column pivoting pick
        // the same matroid basis, so the freeze-first estimate must equal
        // the canonical particular solution of the restricted system
        // bit for bit.
        for code in [CodeSpec::solid(3).unwrap(), CodeSpec::periodic(3).unwrap()] {
            for trial in 0..200u64 {
                let mut rng = noise::trial_rng(41, 9, trial);
                let sample = noise::sample_erasure(code.n, 0.22, &mut rng).unwrap();
                let syn = code::syndrome(&code, &sample.induced).unwrap();
                let est =
                    decode_erasure_z(&code, &sample.erased, &syn.sigma, ZVariant::FreezeFirst)
                        .unwrap();
                // Canonical solve over the restricted columns.
                let cols = sample.erased.clone();
                let mut restricted = BitMatrix::new(code.h.num_rows(), cols.len());
                for (c, &q) in cols.iter().enumerate() {
                    for &r in &code.h.qubit_rows[q] {
                        restricted.set(r, c, true);
                    }
                }
                match restricted.solve(&syn.sigma) {
                    Solve::Solution(x) => {
                        let mut expect = BitVec::zeros(code.n);
                        for (c, &q) in cols.iter().enumerate() {
                            if x.get(c) {
                                expect.set(q, true);
                            }
                        }
                        assert_eq!(est, expect, "trial {trial} diverged from gauss");
                    }
                    Solve::Inconsistent => panic!("channel syndrome must be consistent"),
                }
            }
        }
    }

    #[test]
    fn alternating_matches_freeze_first_classification() {
        let code = CodeSpec::solid(3).unwrap();
        for trial in 0..300u64 {
            let mut rng = noise::trial_rng(35, 6, trial);
            let sample = noise::sample_erasure(code.n, 0.2, &mut rng).unwrap();
            let syn = code::syndrome(&code, &sample.induced).unwrap();
            let a =
                decode_erasure_z(&code, &sample.erased, &syn.sigma, ZVariant::FreezeFirst).unwrap();
            let b =
                decode_erasure_z(&code, &sample.erased, &syn.sigma, ZVariant::Alternating).unwrap();
            let fa = z_residual_ok(&code, &sample.induced.z, &a).0;
            let fb = z_residual_ok(&code, &sample.induced.z, &b).0;
            assert_eq!(fa, fb, "trial {trial}: variants disagree on failure");
        }
    }
}
