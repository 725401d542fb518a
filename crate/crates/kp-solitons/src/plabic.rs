//! Generalized plabic graphs: disk-embedded bicolored graphs with optional
//! X-crossing nodes, their trips, faces, and region/edge labelings.
//!
//! Rotations store the counterclockwise edge order at each vertex. Trips
//! follow the rules of the road: at black exit via the ccw-successor of the
//! arriving edge (a right turn), at white via the ccw-predecessor, straight
//! through crossings, and through degree-2 vertices either way. Faces are
//! traced so that each face lies to the LEFT of its darts; region labeling
//! ("place i left of T_i") is then a dart → face lookup. Virtual arcs
//! between consecutive boundary vertices close the disk, so every unbounded
//! region is a separate face and the outside of the disk can be discarded.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::positroid::{Derangement, DerangementError};
use crate::subset::Subset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VertexKind {
    Black,
    White,
    Crossing,
    Boundary(usize),
}

impl VertexKind {
    pub fn is_boundary(&self) -> bool {
        matches!(self, VertexKind::Boundary(_))
    }

    pub fn boundary_label(&self) -> Option<usize> {
        match self {
            VertexKind::Boundary(l) => Some(*l),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PlabicError {
    #[error("edge {0} is a self-loop or has a bad endpoint")]
    BadEdge(usize),
    #[error("rotation at vertex {0} does not list exactly its incident edges")]
    RotationMismatch(usize),
    #[error("boundary vertex {0} must have degree 1")]
    BoundaryDegree(usize),
    #[error("crossing vertex {0} must have degree 4")]
    CrossingDegree(usize),
    #[error("internal vertex {0} must have degree >= 2")]
    InternalDegree(usize),
    #[error("boundary order must list each boundary vertex exactly once with labels 1..n")]
    BoundaryOrder,
    #[error("a connected component touches no boundary vertex")]
    FloatingComponent,
    #[error("no boundary vertex carries label {0}")]
    MissingLabel(usize),
    #[error("trip from boundary {0} never returned to the boundary")]
    StuckTrip(usize),
    #[error("edge {0} is traversed twice in the same direction")]
    DartReused(usize),
    #[error("edge {0} is not covered by trips in both directions")]
    UncoveredDart(usize),
    #[error("region labels do not all have the same size")]
    InconsistentLabels,
    #[error("exchange condition fails across edge {0}")]
    ExchangeViolation(usize),
}

#[derive(Debug, Clone)]
pub struct GeneralizedPlabicGraph {
    kinds: Vec<VertexKind>,
    edges: Vec<(usize, usize)>,
    rotations: Vec<Vec<usize>>,
    boundary_ccw: Vec<usize>,
    positions: Option<Vec<(f64, f64)>>,
}

impl GeneralizedPlabicGraph {
    pub fn new(
        kinds: Vec<VertexKind>,
        edges: Vec<(usize, usize)>,
        rotations: Vec<Vec<usize>>,
        boundary_ccw: Vec<usize>,
    ) -> Result<GeneralizedPlabicGraph, PlabicError> {
        let nv = kinds.len();
        if rotations.len() != nv {
            return Err(PlabicError::RotationMismatch(rotations.len()));
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u == v || u >= nv || v >= nv {
                return Err(PlabicError::BadEdge(e));
            }
            incident[u].push(e);
            incident[v].push(e);
        }
        for v in 0..nv {
            let mut a = incident[v].clone();
            let mut b = rotations[v].clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(PlabicError::RotationMismatch(v));
            }
            let deg = rotations[v].len();
            match kinds[v] {
                VertexKind::Boundary(_) => {
                    if deg != 1 {
                        return Err(PlabicError::BoundaryDegree(v));
                    }
                }
                VertexKind::Crossing => {
                    if deg != 4 {
                        return Err(PlabicError::CrossingDegree(v));
                    }
                }
                _ => {
                    if deg < 2 {
                        return Err(PlabicError::InternalDegree(v));
                    }
                }
            }
        }
        let boundary: BTreeSet<usize> =
            (0..nv).filter(|&v| kinds[v].is_boundary()).collect();
        if boundary_ccw.len() != boundary.len()
            || boundary_ccw.iter().any(|v| !boundary.contains(v))
            || boundary_ccw.iter().collect::<BTreeSet<_>>().len() != boundary_ccw.len()
        {
            return Err(PlabicError::BoundaryOrder);
        }
        let labels: BTreeSet<usize> =
            boundary.iter().filter_map(|&v| kinds[v].boundary_label()).collect();
        let m = boundary.len();
        if labels != (1..=m).collect() {
            return Err(PlabicError::BoundaryOrder);
        }
        // Graphs may be disconnected (non-interacting soliton groups), but
        // every component must reach the boundary circle.
        let mut seen = vec![false; nv];
        let mut stack: Vec<usize> = boundary_ccw.clone();
        for &b in &boundary_ccw {
            seen[b] = true;
        }
        while let Some(v) = stack.pop() {
            for &e in &rotations[v] {
                let (a, b) = edges[e];
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(PlabicError::FloatingComponent);
        }
        Ok(GeneralizedPlabicGraph { kinds, edges, rotations, boundary_ccw, positions: None })
    }

    pub fn with_positions(mut self, positions: Vec<(f64, f64)>) -> GeneralizedPlabicGraph {
        assert_eq!(positions.len(), self.kinds.len());
        self.positions = Some(positions);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn kind(&self, v: usize) -> &VertexKind {
        &self.kinds[v]
    }

    pub fn kinds(&self) -> &[VertexKind] {
        &self.kinds
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn boundary_ccw(&self) -> &[usize] {
        &self.boundary_ccw
    }

    pub fn positions(&self) -> Option<&[(f64, f64)]> {
        self.positions.as_deref()
    }

    /// Number of boundary vertices (the n of the cell).
    pub fn boundary_count(&self) -> usize {
        self.boundary_ccw.len()
    }

    pub fn boundary_vertex(&self, label: usize) -> Option<usize> {
        self.boundary_ccw
            .iter()
            .copied()
            .find(|&v| self.kinds[v].boundary_label() == Some(label))
    }

    /// Boundary labels in counterclockwise disk order.
    pub fn boundary_labels_ccw(&self) -> Vec<usize> {
        self.boundary_ccw
            .iter()
            .map(|&v| self.kinds[v].boundary_label().expect("boundary vertex"))
            .collect()
    }

    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn trips(&self) -> Result<TripDecomposition, PlabicError> {
        let n = self.boundary_count();
        let cap = 2 * self.edges.len() + 2;
        let mut paths = Vec::with_capacity(n);
        for label in 1..=n {
            let b = self.boundary_vertex(label).ok_or(PlabicError::MissingLabel(label))?;
            let mut e = self.rotations[b][0];
            let mut tail = b;
            let mut darts = Vec::new();
            loop {
                if darts.len() > cap {
                    return Err(PlabicError::StuckTrip(label));
                }
                let head = self.other(e, tail);
                darts.push((e, self.edges[e].0 == tail));
                match &self.kinds[head] {
                    VertexKind::Boundary(l) => {
                        paths.push(TripPath { from: label, to: *l, darts });
                        break;
                    }
                    kind => {
                        let rot = &self.rotations[head];
                        let d = rot.len();
                        let p = rot
                            .iter()
                            .position(|&x| x == e)
                            .ok_or(PlabicError::RotationMismatch(head))?;
                        let q = match kind {
                            VertexKind::Black => (p + 1) % d,
                            VertexKind::White => (p + d - 1) % d,
                            VertexKind::Crossing => (p + 2) % 4,
                            VertexKind::Boundary(_) => unreachable!(),
                        };
                        e = rot[q];
                        tail = head;
                    }
                }
            }
        }
        Ok(TripDecomposition { paths })
    }

    /// Position of vertex v in the ccw boundary cycle, if it is a boundary vertex.
    fn boundary_pos(&self, v: usize) -> Option<usize> {
        self.boundary_ccw.iter().position(|&b| b == v)
    }

    fn face_next(&self, d: FDart) -> FDart {
        let m = self.boundary_count();
        match d {
            FDart::Real(e, fwd) => {
                let head = if fwd { self.edges[e].1 } else { self.edges[e].0 };
                match self.kinds[head] {
                    VertexKind::Boundary(_) => {
                        let q = self.boundary_pos(head).expect("boundary vertex in cycle");
                        FDart::Arc(q, true)
                    }
                    _ => {
                        let rot = &self.rotations[head];
                        let deg = rot.len();
                        let p = rot.iter().position(|&x| x == e).expect("edge in rotation");
                        let f = rot[(p + deg - 1) % deg];
                        FDart::Real(f, self.edges[f].0 == head)
                    }
                }
            }
            FDart::Arc(i, true) => {
                let q = (i + 1) % m;
                let b = self.boundary_ccw[q];
                let e = self.rotations[b][0];
                FDart::Real(e, self.edges[e].0 == b)
            }
            FDart::Arc(i, false) => FDart::Arc((i + m - 1) % m, false),
        }
    }

    /// Faces of the disk embedding. The face outside the boundary circle is
    /// dropped; unbounded regions are the faces carrying a forward arc.
    pub fn faces(&self) -> Faces {
        let m = self.boundary_count();
        let mut all: Vec<FDart> = Vec::new();
        for e in 0..self.edges.len() {
            all.push(FDart::Real(e, true));
            all.push(FDart::Real(e, false));
        }
        for i in 0..m {
            all.push(FDart::Arc(i, true));
            all.push(FDart::Arc(i, false));
        }
        let mut assigned: BTreeSet<FDart> = BTreeSet::new();
        let mut faces = Vec::new();
        let mut dart_face = BTreeMap::new();
        let mut arc_face = BTreeMap::new();
        for &start in &all {
            if assigned.contains(&start) {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = start;
            loop {
                orbit.push(d);
                assigned.insert(d);
                d = self.face_next(d);
                if d == start {
                    break;
                }
            }
            let only_backward_arcs = orbit.iter().all(|x| matches!(x, FDart::Arc(_, false)));
            if only_backward_arcs {
                continue; // outside of the disk
            }
            let id = faces.len();
            let mut real_darts = Vec::new();
            let mut fwd_arcs = Vec::new();
            for x in orbit {
                match x {
                    FDart::Real(e, fwd) => {
                        dart_face.insert((e, fwd), id);
                        real_darts.push((e, fwd));
                    }
                    FDart::Arc(i, true) => {
                        arc_face.insert(i, id);
                        fwd_arcs.push(i);
                    }
                    FDart::Arc(_, false) => {}
                }
            }
            faces.push(Face { real_darts, fwd_arcs });
        }
        Faces { faces, dart_face, arc_face }
    }

    /// Trips, faces, and the induced edge/region labels, with the exchange
    /// condition checked across every edge.
    pub fn face_labeling(&self) -> Result<FaceLabeling, PlabicError> {
        let trips = self.trips()?;
        let faces = self.faces();
        let ne = self.edges.len();
        let mut edge_trips: Vec<[Option<usize>; 2]> = vec![[None, None]; ne];
        for path in &trips.paths {
            for &(e, fwd) in &path.darts {
                let slot = if fwd { 0 } else { 1 };
                if edge_trips[e][slot].is_some() {
                    return Err(PlabicError::DartReused(e));
                }
                edge_trips[e][slot] = Some(path.from);
            }
        }
        let mut label_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); faces.faces.len()];
        for path in &trips.paths {
            for &(e, fwd) in &path.darts {
                let f = faces.face_of_dart(e, fwd).expect("trip dart has a face");
                label_sets[f].insert(path.from);
            }
        }
        let region_labels: Vec<Subset> = label_sets
            .iter()
            .map(|s| Subset::from_elems(&s.iter().copied().collect::<Vec<_>>()))
            .collect();
        let k = region_labels.first().map(|s| s.len()).unwrap_or(0);
        if region_labels.iter().any(|s| s.len() != k) {
            return Err(PlabicError::InconsistentLabels);
        }
        for e in 0..ne {
            let [fi, bi] = edge_trips[e];
            let (Some(i), Some(j)) = (fi, bi) else {
                return Err(PlabicError::UncoveredDart(e));
            };
            let lf = region_labels[faces.face_of_dart(e, true).unwrap()];
            let lb = region_labels[faces.face_of_dart(e, false).unwrap()];
            if !lf.contains(i) || !lb.contains(j) || lf.remove(i) != lb.remove(j) {
                return Err(PlabicError::ExchangeViolation(e));
            }
        }
        Ok(FaceLabeling { trips, faces, region_labels, edge_trips })
    }

    /// Necessary conditions for reducedness; not sufficient, but they catch
    /// round trips, repeated edges, and same-order double crossings.
    pub fn reduced_heuristic(&self) -> HeuristicResult {
        if self.kinds.iter().any(|k| matches!(k, VertexKind::Crossing)) {
            return HeuristicResult::Fail("graph has X-crossings".into());
        }
        let trips = match self.trips() {
            Ok(t) => t,
            Err(e) => return HeuristicResult::Fail(format!("trips failed: {e}")),
        };
        let mut used: BTreeSet<(usize, bool)> = BTreeSet::new();
        for path in &trips.paths {
            let mut edges_seen: BTreeSet<usize> = BTreeSet::new();
            for &(e, fwd) in &path.darts {
                if !edges_seen.insert(e) {
                    return HeuristicResult::Fail(format!(
                        "trip {} uses edge {} twice",
                        path.from, e
                    ));
                }
                if !used.insert((e, fwd)) {
                    return HeuristicResult::Fail(format!("edge {e} traversed twice one way"));
                }
            }
        }
        if used.len() < 2 * self.edges.len() {
            return HeuristicResult::Fail("uncovered edge directions (round trip present)".into());
        }
        // Bad double crossing: two trips traversing two shared edges in the
        // same relative order.
        let n = trips.paths.len();
        for a in 0..n {
            for b in a + 1..n {
                let pos_a: BTreeMap<usize, usize> = trips.paths[a]
                    .darts
                    .iter()
                    .enumerate()
                    .map(|(p, &(e, _))| (e, p))
                    .collect();
                let shared: Vec<(usize, usize)> = trips.paths[b]
                    .darts
                    .iter()
                    .enumerate()
                    .filter_map(|(p, &(e, _))| pos_a.get(&e).map(|&pa| (pa, p)))
                    .collect();
                for x in 0..shared.len() {
                    for y in x + 1..shared.len() {
                        let (a1, b1) = shared[x];
                        let (a2, b2) = shared[y];
                        if (a1 < a2) == (b1 < b2) {
                            return HeuristicResult::Fail(format!(
                                "trips {} and {} double-cross",
                                trips.paths[a].from, trips.paths[b].from
                            ));
                        }
                    }
                }
            }
        }
        HeuristicResult::Pass
    }

    /// Contract internal degree-2 vertices (crossings and boundary kept).
    pub fn normalize(&self) -> GeneralizedPlabicGraph {
        let mut s = GraphScratch::from_graph(self);
        s.contract_degree2();
        let order: Vec<usize> = self.boundary_ccw.clone();
        s.finish(order).expect("normalization preserves validity")
    }

    /// Contract every internal edge whose endpoints have the same color.
    /// Graphs that differ only in how a high-degree vertex was resolved into
    /// trivalent ones have the same contraction, so this is the right form
    /// for comparing a constructed graph with an observed one.
    pub fn contract_same_color(&self) -> GeneralizedPlabicGraph {
        let mut s = GraphScratch::from_graph(self);
        loop {
            let found = (0..s.edges.len()).find(|&e| {
                let Some((u, v)) = s.edges[e] else { return false };
                matches!(
                    (&s.kinds[u], &s.kinds[v]),
                    (Some(VertexKind::Black), Some(VertexKind::Black))
                        | (Some(VertexKind::White), Some(VertexKind::White))
                )
            });
            match found {
                Some(e) => s.contract_edge(e),
                None => break,
            }
        }
        let order: Vec<usize> = self.boundary_ccw.clone();
        s.finish(order).expect("contraction preserves validity")
    }

    /// Orientation-preserving isomorphism respecting vertex kinds, boundary
    /// labels, rotations, and the ccw boundary cycle. Returns the vertex and
    /// edge maps from `a` into `b`.
    pub fn label_isomorphism(
        a: &GeneralizedPlabicGraph,
        b: &GeneralizedPlabicGraph,
    ) -> Option<Isomorphism> {
        if a.kinds.len() != b.kinds.len()
            || a.edges.len() != b.edges.len()
            || a.boundary_count() != b.boundary_count()
        {
            return None;
        }
        let ca = a.boundary_labels_ccw();
        let cb = b.boundary_labels_ccw();
        let pa = ca.iter().position(|&l| l == 1)?;
        let pb = cb.iter().position(|&l| l == 1)?;
        let m = ca.len();
        for i in 0..m {
            if ca[(pa + i) % m] != cb[(pb + i) % m] {
                return None;
            }
        }
        let mut vmap: Vec<Option<usize>> = vec![None; a.kinds.len()];
        let mut emap: Vec<Option<usize>> = vec![None; a.edges.len()];
        let mut vused = vec![false; b.kinds.len()];
        let mut eused = vec![false; b.edges.len()];
        let mut queue = std::collections::VecDeque::new();
        for label in 1..=m {
            let va = a.boundary_vertex(label)?;
            let vb = b.boundary_vertex(label)?;
            vmap[va] = Some(vb);
            vused[vb] = true;
            queue.push_back((va, vb, a.rotations[va][0], b.rotations[vb][0]));
        }
        while let Some((va, vb, ea, eb)) = queue.pop_front() {
            // Map the edges and walk to the far endpoints.
            match emap[ea] {
                Some(x) if x != eb => return None,
                Some(_) => {}
                None => {
                    if eused[eb] {
                        return None;
                    }
                    emap[ea] = Some(eb);
                    eused[eb] = true;
                }
            }
            let wa = a.other(ea, va);
            let wb = b.other(eb, vb);
            match vmap[wa] {
                Some(x) if x != wb => return None,
                Some(_) => {}
                None => {
                    if vused[wb] {
                        return None;
                    }
                    vmap[wa] = Some(wb);
                    vused[wb] = true;
                }
            }
            if a.kinds[wa] != b.kinds[wb] {
                return None;
            }
            if a.kinds[wa].is_boundary() {
                continue;
            }
            let ra = &a.rotations[wa];
            let rb = &b.rotations[wb];
            if ra.len() != rb.len() {
                return None;
            }
            let qa = ra.iter().position(|&x| x == ea)?;
            let qb = rb.iter().position(|&x| x == eb)?;
            let deg = ra.len();
            for o in 1..deg {
                let fa = ra[(qa + o) % deg];
                let fb = rb[(qb + o) % deg];
                match emap[fa] {
                    Some(x) if x != fb => return None,
                    Some(_) => {}
                    None => queue.push_back((wa, wb, fa, fb)),
                }
            }
        }
        if vmap.iter().any(|v| v.is_none()) || emap.iter().any(|e| e.is_none()) {
            return None; // should not happen for connected graphs
        }
        Some(Isomorphism {
            vertex_map: vmap.into_iter().map(|v| v.unwrap()).collect(),
            edge_map: emap.into_iter().map(|e| e.unwrap()).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum FDart {
    /// Directed real edge: (edge id, true = tail→head as stored).
    Real(usize, bool),
    /// Virtual boundary arc i: boundary_ccw[i] → boundary_ccw[i+1] when
    /// forward.
    Arc(usize, bool),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripPath {
    pub from: usize,
    pub to: usize,
    pub darts: Vec<(usize, bool)>,
}

#[derive(Debug, Clone)]
pub struct TripDecomposition {
    pub paths: Vec<TripPath>,
}

impl TripDecomposition {
    /// π(i) for i = 1..n as an image list.
    pub fn perm(&self) -> Vec<usize> {
        self.paths.iter().map(|p| p.to).collect()
    }

    pub fn derangement(&self) -> Result<Derangement, DerangementError> {
        Derangement::new(self.perm())
    }

    pub fn path(&self, from: usize) -> &TripPath {
        &self.paths[from - 1]
    }
}

#[derive(Debug, Clone)]
pub struct Face {
    pub real_darts: Vec<(usize, bool)>,
    pub fwd_arcs: Vec<usize>,
}

impl Face {
    pub fn is_unbounded(&self) -> bool {
        !self.fwd_arcs.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct Faces {
    pub faces: Vec<Face>,
    dart_face: BTreeMap<(usize, bool), usize>,
    arc_face: BTreeMap<usize, usize>,
}

impl Faces {
    pub fn face_of_dart(&self, e: usize, forward: bool) -> Option<usize> {
        self.dart_face.get(&(e, forward)).copied()
    }

    /// Face of the unbounded region between boundary positions i and i+1.
    pub fn face_of_fwd_arc(&self, i: usize) -> usize {
        self.arc_face[&i]
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct FaceLabeling {
    pub trips: TripDecomposition,
    pub faces: Faces,
    /// One label per face, same order as `faces.faces`.
    pub region_labels: Vec<Subset>,
    /// Per edge: the trips using it [forward, backward].
    pub edge_trips: Vec<[Option<usize>; 2]>,
}

impl FaceLabeling {
    /// Soliton type of an edge: the two trips through it as (min, max).
    pub fn edge_type(&self, e: usize) -> Option<(usize, usize)> {
        match self.edge_trips[e] {
            [Some(i), Some(j)] => Some((i.min(j), i.max(j))),
            _ => None,
        }
    }

    /// Labels of unbounded regions, one per boundary arc, in ccw order
    /// starting from the arc leaving boundary position 0.
    pub fn unbounded_labels_ccw(&self) -> Vec<Subset> {
        (0..self.arc_count())
            .map(|i| self.region_labels[self.faces.face_of_fwd_arc(i)])
            .collect()
    }

    fn arc_count(&self) -> usize {
        self.faces.faces.iter().map(|f| f.fwd_arcs.len()).sum()
    }

    pub fn bounded_labels(&self) -> Vec<Subset> {
        self.faces
            .faces
            .iter()
            .zip(&self.region_labels)
            .filter(|(f, _)| !f.is_unbounded())
            .map(|(_, &l)| l)
            .collect()
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum HeuristicResult {
    Pass,
    Fail(String),
}

impl HeuristicResult {
    pub fn passed(&self) -> bool {
        matches!(self, HeuristicResult::Pass)
    }
}

#[derive(Debug, Clone)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

/// Mutable graph-under-construction with stable ids, used by the modules
/// that build plabic graphs (pipe grids, contours, triangulations). Deleted
/// slots stay as `None` until `finish` compacts everything.
#[derive(Debug, Clone, Default)]
pub struct GraphScratch {
    kinds: Vec<Option<VertexKind>>,
    rot: Vec<Vec<usize>>,
    edges: Vec<Option<(usize, usize)>>,
    pos: Vec<(f64, f64)>,
}

impl GraphScratch {
    pub fn new() -> GraphScratch {
        GraphScratch::default()
    }

    pub fn from_graph(g: &GeneralizedPlabicGraph) -> GraphScratch {
        GraphScratch {
            kinds: g.kinds.iter().cloned().map(Some).collect(),
            rot: g.rotations.clone(),
            edges: g.edges.iter().copied().map(Some).collect(),
            pos: g
                .positions
                .clone()
                .unwrap_or_else(|| vec![(0.0, 0.0); g.kinds.len()]),
        }
    }

    pub fn add_vertex(&mut self, kind: VertexKind, pos: (f64, f64)) -> usize {
        self.kinds.push(Some(kind));
        self.rot.push(Vec::new());
        self.pos.push(pos);
        self.kinds.len() - 1
    }

    /// Adds an edge, appending it to both rotations. Callers either build in
    /// ccw order or fix rotations afterwards.
    pub fn add_edge(&mut self, u: usize, v: usize) -> usize {
        let id = self.edges.len();
        self.edges.push(Some((u, v)));
        self.rot[u].push(id);
        self.rot[v].push(id);
        id
    }

    pub fn set_rotation(&mut self, v: usize, rotation: Vec<usize>) {
        self.rot[v] = rotation;
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn kind(&self, v: usize) -> Option<&VertexKind> {
        self.kinds[v].as_ref()
    }

    pub fn set_kind(&mut self, v: usize, kind: VertexKind) {
        self.kinds[v] = Some(kind);
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e].expect("live edge")
    }

    pub fn other(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.endpoints(e);
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn position(&self, v: usize) -> (f64, f64) {
        self.pos[v]
    }

    pub fn set_position(&mut self, v: usize, p: (f64, f64)) {
        self.pos[v] = p;
    }

    pub fn delete_edge(&mut self, e: usize) {
        let (u, v) = self.endpoints(e);
        self.rot[u].retain(|&x| x != e);
        self.rot[v].retain(|&x| x != e);
        self.edges[e] = None;
    }

    pub fn delete_isolated_vertex(&mut self, v: usize) {
        assert!(self.rot[v].is_empty(), "vertex {v} still has edges");
        self.kinds[v] = None;
    }

    /// Reconnect one endpoint of edge `e` from `from` to `to`, preserving
    /// the rotation slot at the far end. The caller inserts `e` into `to`'s
    /// rotation.
    pub fn reattach(&mut self, e: usize, from: usize, to: usize) {
        let (a, b) = self.endpoints(e);
        self.edges[e] = Some(if a == from { (to, b) } else { (a, to) });
        self.rot[from].retain(|&x| x != e);
    }

    pub fn rotation_mut(&mut self, v: usize) -> &mut Vec<usize> {
        &mut self.rot[v]
    }

    /// Contract all internal non-crossing degree-2 vertices.
    pub fn contract_degree2(&mut self) {
        loop {
            let target = (0..self.kinds.len()).find(|&v| {
                matches!(self.kinds[v], Some(VertexKind::Black) | Some(VertexKind::White))
                    && self.rot[v].len() == 2
            });
            let Some(v) = target else {
                break;
            };
            let e1 = self.rot[v][0];
            let e2 = self.rot[v][1];
            let a = self.other(e1, v);
            let b = self.other(e2, v);
            assert_ne!(e1, e2, "parallel pair at degree-2 vertex");
            assert!(a != v && b != v, "self-loop at degree-2 vertex");
            // Reuse e1 as the contracted edge a—b; e2 disappears.
            self.edges[e1] = Some((a, b));
            for slot in self.rot[b].iter_mut() {
                if *slot == e2 {
                    *slot = e1;
                }
            }
            self.edges[e2] = None;
            self.rot[v].clear();
            self.kinds[v] = None;
        }
    }

    /// Contract edge `e`, merging its head into its tail while splicing the
    /// rotation so the cyclic order is preserved.
    pub fn contract_edge(&mut self, e: usize) {
        let (u, v) = self.endpoints(e);
        assert_ne!(u, v);
        let pu = self.rot[u].iter().position(|&x| x == e).unwrap();
        let pv = self.rot[v].iter().position(|&x| x == e).unwrap();
        let mut spliced: Vec<usize> = Vec::with_capacity(self.rot[u].len() + self.rot[v].len() - 2);
        spliced.extend_from_slice(&self.rot[u][..pu]);
        for o in 1..self.rot[v].len() {
            spliced.push(self.rot[v][(pv + o) % self.rot[v].len()]);
        }
        spliced.extend_from_slice(&self.rot[u][pu + 1..]);
        for &f in &spliced[pu..pu + self.rot[v].len() - 1] {
            let (a, b) = self.endpoints(f);
            assert!(!(a == u || b == u) || !(a == v || b == v), "contraction creates self-loop");
            self.edges[f] = Some(if a == v { (u, b) } else if b == v { (a, u) } else { (a, b) });
        }
        self.rot[u] = spliced;
        self.rot[v].clear();
        self.edges[e] = None;
        self.kinds[v] = None;
    }

    pub fn live_vertices(&self) -> Vec<usize> {
        (0..self.kinds.len()).filter(|&v| self.kinds[v].is_some()).collect()
    }

    /// Sort every rotation counterclockwise by the angle toward the other
    /// endpoint. Valid when edges are geometrically straight.
    pub fn sort_rotations_by_position(&mut self) {
        for v in 0..self.kinds.len() {
            if self.kinds[v].is_none() {
                continue;
            }
            let (x0, y0) = self.pos[v];
            let mut rot = self.rot[v].clone();
            rot.sort_by(|&e1, &e2| {
                let a1 = {
                    let (x, y) = self.pos[self.other(e1, v)];
                    (y - y0).atan2(x - x0)
                };
                let a2 = {
                    let (x, y) = self.pos[self.other(e2, v)];
                    (y - y0).atan2(x - x0)
                };
                a1.partial_cmp(&a2).unwrap()
            });
            self.rot[v] = rot;
        }
    }

    /// Compact into an immutable graph. `boundary_ccw` uses scratch ids.
    pub fn finish(self, boundary_ccw: Vec<usize>) -> Result<GeneralizedPlabicGraph, PlabicError> {
        let mut vmap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut kinds = Vec::new();
        let mut pos = Vec::new();
        for (v, k) in self.kinds.iter().enumerate() {
            if let Some(k) = k {
                vmap.insert(v, kinds.len());
                kinds.push(k.clone());
                pos.push(self.pos[v]);
            }
        }
        let mut emap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut edges = Vec::new();
        for (e, ep) in self.edges.iter().enumerate() {
            if let Some((u, v)) = ep {
                emap.insert(e, edges.len());
                edges.push((vmap[u], vmap[v]));
            }
        }
        let mut rotations = vec![Vec::new(); kinds.len()];
        for (v, rot) in self.rot.iter().enumerate() {
            if let Some(&nv) = vmap.get(&v) {
                rotations[nv] = rot.iter().map(|e| emap[e]).collect();
            }
        }
        let order: Vec<usize> = boundary_ccw.iter().map(|v| vmap[v]).collect();
        GeneralizedPlabicGraph::new(kinds, edges, rotations, order).map(|g| g.with_positions(pos))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr12_graph() -> GeneralizedPlabicGraph {
        GeneralizedPlabicGraph::new(
            vec![VertexKind::Boundary(1), VertexKind::Boundary(2)],
            vec![(0, 1)],
            vec![vec![0], vec![0]],
            vec![0, 1],
        )
        .unwrap()
    }

    /// The t≪0 graph of the TP cell of Gr(2,4): a square of alternating
    /// colors with one boundary leg per vertex.
    fn square_graph() -> GeneralizedPlabicGraph {
        let kinds = vec![
            VertexKind::White,       // 0: w11
            VertexKind::Black,       // 1: b11
            VertexKind::Black,       // 2: b12
            VertexKind::White,       // 3: w21
            VertexKind::Boundary(1), // 4
            VertexKind::Boundary(2), // 5
            VertexKind::Boundary(3), // 6
            VertexKind::Boundary(4), // 7
        ];
        let edges = vec![
            (0, 1), // e0
            (0, 2), // e1
            (1, 3), // e2
            (2, 3), // e3
            (2, 4), // e4
            (0, 5), // e5
            (1, 6), // e6
            (3, 7), // e7
        ];
        let rotations = vec![
            vec![5, 0, 1],
            vec![0, 6, 2],
            vec![4, 1, 3],
            vec![3, 2, 7],
            vec![4],
            vec![5],
            vec![6],
            vec![7],
        ];
        GeneralizedPlabicGraph::new(kinds, edges, rotations, vec![4, 5, 6, 7]).unwrap()
    }

    #[test]
    fn single_edge_trips_and_labels() {
        let g = gr12_graph();
        let trips = g.trips().unwrap();
        assert_eq!(trips.perm(), vec![2, 1]);
        let lab = g.face_labeling().unwrap();
        assert_eq!(lab.faces.len(), 2);
        let unbounded = lab.unbounded_labels_ccw();
        let as_labels: Vec<String> = unbounded.iter().map(|s| s.label()).collect();
        assert_eq!(as_labels, vec!["2", "1"]);
        assert_eq!(lab.edge_type(0), Some((1, 2)));
        assert!(g.reduced_heuristic().passed());
    }

    #[test]
    fn square_graph_trips_and_labels() {
        let g = square_graph();
        let trips = g.trips().unwrap();
        assert_eq!(trips.perm(), vec![3, 4, 1, 2]);
        let lab = g.face_labeling().unwrap();
        assert_eq!(lab.faces.len(), 5);
        let bounded = lab.bounded_labels();
        assert_eq!(bounded.len(), 1);
        assert_eq!(bounded[0].label(), "13");
        let unbounded: Vec<String> =
            lab.unbounded_labels_ccw().iter().map(|s| s.label()).collect();
        assert_eq!(unbounded, vec!["23", "34", "14", "12"]);
        assert!(g.reduced_heuristic().passed());
    }

    #[test]
    fn crossing_passes_straight() {
        let kinds = vec![
            VertexKind::Crossing,
            VertexKind::Boundary(1),
            VertexKind::Boundary(2),
            VertexKind::Boundary(3),
            VertexKind::Boundary(4),
        ];
        let edges = vec![(0, 1), (0, 2), (0, 3), (0, 4)];
        let rotations = vec![vec![0, 1, 2, 3], vec![0], vec![1], vec![2], vec![3]];
        let g = GeneralizedPlabicGraph::new(kinds, edges, rotations, vec![1, 2, 3, 4]).unwrap();
        let trips = g.trips().unwrap();
        assert_eq!(trips.perm(), vec![3, 4, 1, 2]);
        let lab = g.face_labeling().unwrap();
        let unbounded: Vec<String> =
            lab.unbounded_labels_ccw().iter().map(|s| s.label()).collect();
        assert_eq!(unbounded, vec!["23", "34", "14", "12"]);
    }

    #[test]
    fn bigon_fails_heuristic() {
        let kinds = vec![
            VertexKind::White,
            VertexKind::Black,
            VertexKind::Boundary(1),
            VertexKind::Boundary(2),
        ];
        let edges = vec![(0, 1), (0, 1), (0, 2), (1, 3)];
        let rotations = vec![vec![0, 2, 1], vec![3, 0, 1], vec![2], vec![3]];
        let g = GeneralizedPlabicGraph::new(kinds, edges, rotations, vec![2, 3]).unwrap();
        assert!(!g.reduced_heuristic().passed());
    }

    #[test]
    fn normalization_contracts_degree_two() {
        // Subdivide edge e0 of the square with a degree-2 white vertex.
        let kinds = vec![
            VertexKind::White,
            VertexKind::Black,
            VertexKind::Black,
            VertexKind::White,
            VertexKind::Boundary(1),
            VertexKind::Boundary(2),
            VertexKind::Boundary(3),
            VertexKind::Boundary(4),
            VertexKind::White, // 8: subdivision point
        ];
        let edges = vec![
            (0, 8), // e0a
            (0, 2),
            (1, 3),
            (2, 3),
            (2, 4),
            (0, 5),
            (1, 6),
            (3, 7),
            (8, 1), // e0b
        ];
        let rotations = vec![
            vec![5, 0, 1],
            vec![8, 6, 2],
            vec![4, 1, 3],
            vec![3, 2, 7],
            vec![4],
            vec![5],
            vec![6],
            vec![7],
            vec![0, 8],
        ];
        let g = GeneralizedPlabicGraph::new(kinds, edges, rotations, vec![4, 5, 6, 7]).unwrap();
        let norm = g.normalize();
        assert_eq!(norm.vertex_count(), 8);
        assert!(GeneralizedPlabicGraph::label_isomorphism(&norm, &square_graph()).is_some());
        // Trips are unchanged by subdivision even before normalization.
        assert_eq!(g.trips().unwrap().perm(), vec![3, 4, 1, 2]);
    }

    #[test]
    fn isomorphism_respects_orientation_and_colors() {
        let g = square_graph();
        assert!(GeneralizedPlabicGraph::label_isomorphism(&g, &g).is_some());
        // Mirror image: reverse all rotations and the boundary cycle.
        let mirrored = GeneralizedPlabicGraph::new(
            g.kinds().to_vec(),
            g.edges().to_vec(),
            (0..g.vertex_count())
                .map(|v| g.rotation(v).iter().rev().copied().collect())
                .collect(),
            g.boundary_ccw().iter().rev().copied().collect(),
        )
        .unwrap();
        assert!(GeneralizedPlabicGraph::label_isomorphism(&g, &mirrored).is_none());
        // Color swap.
        let swapped = GeneralizedPlabicGraph::new(
            g.kinds()
                .iter()
                .map(|k| match k {
                    VertexKind::Black => VertexKind::White,
                    VertexKind::White => VertexKind::Black,
                    other => other.clone(),
                })
                .collect(),
            g.edges().to_vec(),
            (0..g.vertex_count()).map(|v| g.rotation(v).to_vec()).collect(),
            g.boundary_ccw().to_vec(),
        )
        .unwrap();
        assert!(GeneralizedPlabicGraph::label_isomorphism(&g, &swapped).is_none());
    }

    #[test]
    fn contract_edge_splices_rotation() {
        // Path b1 - u - v - b2 with an extra leaf on each internal vertex;
        // contracting the u-v edge must keep ccw order (leaf_u, leaf_v).
        let mut s = GraphScratch::new();
        let b1 = s.add_vertex(VertexKind::Boundary(1), (0.0, 0.0));
        let u = s.add_vertex(VertexKind::White, (1.0, 0.0));
        let v = s.add_vertex(VertexKind::White, (2.0, 0.0));
        let b2 = s.add_vertex(VertexKind::Boundary(2), (3.0, 0.0));
        let b3 = s.add_vertex(VertexKind::Boundary(3), (1.0, 1.0));
        let b4 = s.add_vertex(VertexKind::Boundary(4), (2.0, -1.0));
        let e_b1 = s.add_edge(b1, u);
        let e_uv = s.add_edge(u, v);
        let e_b2 = s.add_edge(v, b2);
        let e_b3 = s.add_edge(u, b3);
        let e_b4 = s.add_edge(v, b4);
        s.set_rotation(u, vec![e_b1, e_uv, e_b3]);
        s.set_rotation(v, vec![e_uv, e_b2, e_b4]);
        s.contract_edge(e_uv);
        assert_eq!(s.rotation(u), &[e_b1, e_b2, e_b4, e_b3]);
        let g = s.finish(vec![b1, b4, b2, b3]).unwrap();
        assert_eq!(g.vertex_count(), 5);
    }
}
