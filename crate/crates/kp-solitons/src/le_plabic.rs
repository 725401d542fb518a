//! From a Le-diagram to its plabic graph. Pipes enter at the southeast
//! border of the Young diagram (steps labeled 1..n from the northeast
//! corner) and leave through the north and west borders. Each + box becomes
//! an elbow pair — one white vertex joining the E and N sides, one black
//! vertex joining S and W, connected by an internal edge — and each 0 box
//! becomes a crossing. The straight runs from the border to the first elbow
//! are erased, and degree-2 leftovers are contracted.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::grassmann::KappaParams;
use crate::lediagram::{irreducible_fillings_of_shape, LeDiagram};
use crate::plabic::{GeneralizedPlabicGraph, GraphScratch, VertexKind};
use crate::positroid::{shape_from_pivots, Derangement};
use crate::subset::Subset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Side {
    E,
    N,
    W,
    S,
}

#[derive(Debug, Clone, Copy)]
enum Heading {
    North,
    West,
}

/// Collects (ccw rank, edge) pairs per vertex so rotations can be emitted in
/// the fixed port order of each vertex kind.
#[derive(Debug, Default)]
struct RankedEdges(Vec<Vec<(u8, usize)>>);

impl RankedEdges {
    fn push(&mut self, v: usize, rank: u8, e: usize) {
        while self.0.len() <= v {
            self.0.push(Vec::new());
        }
        self.0[v].push((rank, e));
    }

    fn apply(&self, s: &mut GraphScratch) {
        for (v, list) in self.0.iter().enumerate() {
            let mut list = list.clone();
            list.sort_unstable();
            s.set_rotation(v, list.into_iter().map(|(_, e)| e).collect());
        }
    }
}

/// Follow each pipe through the box grid: heading west pipes turn north at a
/// + box, heading north pipes turn west, and crossings pass straight. The
/// exit points give the boundary labels of the north and west borders.
fn pipe_exits(le: &LeDiagram) -> (Vec<usize>, Vec<usize>) {
    let k = le.k();
    let w = le.width();
    let mut exit_n: Vec<Option<usize>> = vec![None; w];
    let mut exit_w: Vec<Option<usize>> = vec![None; k];
    let mut entries: Vec<(usize, usize, Heading, usize)> = Vec::new();
    for r in 0..k {
        entries.push((r, le.shape()[r] - 1, Heading::West, le.row_label(r)));
    }
    for c in 0..w {
        entries.push((le.col_height(c) - 1, c, Heading::North, le.col_label(c)));
    }
    for (mut r, mut c, mut h, label) in entries {
        loop {
            if le.is_plus(r, c) {
                h = match h {
                    Heading::West => Heading::North,
                    Heading::North => Heading::West,
                };
            }
            match h {
                Heading::North => {
                    if r == 0 {
                        assert!(exit_n[c].replace(label).is_none(), "two pipes at one exit");
                        break;
                    }
                    r -= 1;
                }
                Heading::West => {
                    if c == 0 {
                        assert!(exit_w[r].replace(label).is_none(), "two pipes at one exit");
                        break;
                    }
                    c -= 1;
                }
            }
        }
    }
    (
        exit_n.into_iter().map(|x| x.expect("every north exit gets a pipe")).collect(),
        exit_w.into_iter().map(|x| x.expect("every west exit gets a pipe")).collect(),
    )
}

// Port ranks in ccw order. White owns the E and N sides of its box plus the
// internal edge pointing southwest: angles 0°, 90°, 225°. Black owns the
// internal edge (45°), W (180°), S (270°). Crossings own all four sides.
const WHITE_E: u8 = 0;
const WHITE_N: u8 = 1;
const WHITE_I: u8 = 2;
const BLACK_I: u8 = 0;
const BLACK_W: u8 = 1;
const BLACK_S: u8 = 2;

fn cross_rank(side: Side) -> u8 {
    match side {
        Side::E => 0,
        Side::N => 1,
        Side::W => 2,
        Side::S => 3,
    }
}

pub fn build_g_minus(le: &LeDiagram) -> GeneralizedPlabicGraph {
    assert!(le.is_irreducible(), "plabic construction needs an irreducible Le-diagram");
    let k = le.k();
    let w = le.width();
    let shape = le.shape().to_vec();
    let mut s = GraphScratch::new();
    let mut ranked = RankedEdges::default();

    // (elbow-or-crossing vertex, black partner for + boxes)
    let mut cell: Vec<Vec<(usize, Option<usize>)>> = Vec::new();
    for r in 0..k {
        let mut row = Vec::new();
        for c in 0..shape[r] {
            let (x, y) = (c as f64, -(r as f64));
            if le.is_plus(r, c) {
                let wv = s.add_vertex(VertexKind::White, (x + 0.7, y - 0.3));
                let bv = s.add_vertex(VertexKind::Black, (x + 0.3, y - 0.7));
                row.push((wv, Some(bv)));
            } else {
                let xv = s.add_vertex(VertexKind::Crossing, (x + 0.5, y - 0.5));
                row.push((xv, None));
            }
        }
        cell.push(row);
    }

    let owner = |r: usize, c: usize, side: Side| -> (usize, u8) {
        let (a, b) = cell[r][c];
        match b {
            Some(bv) => match side {
                Side::E => (a, WHITE_E),
                Side::N => (a, WHITE_N),
                Side::W => (bv, BLACK_W),
                Side::S => (bv, BLACK_S),
            },
            None => (a, cross_rank(side)),
        }
    };
    fn connect(
        s: &mut GraphScratch,
        ranked: &mut RankedEdges,
        a: (usize, u8),
        b: (usize, u8),
    ) -> usize {
        let e = s.add_edge(a.0, b.0);
        ranked.push(a.0, a.1, e);
        ranked.push(b.0, b.1, e);
        e
    }

    for r in 0..k {
        for c in 0..shape[r] {
            if let (wv, Some(bv)) = cell[r][c] {
                connect(&mut s, &mut ranked, (wv, WHITE_I), (bv, BLACK_I));
            }
        }
    }
    let mut wire_w: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut wire_n: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for r in 0..k {
        for c in 1..shape[r] {
            let e = connect(&mut s, &mut ranked, owner(r, c - 1, Side::E), owner(r, c, Side::W));
            wire_w.insert((r, c), e);
        }
    }
    for r in 1..k {
        for c in 0..shape[r] {
            let e = connect(&mut s, &mut ranked, owner(r - 1, c, Side::S), owner(r, c, Side::N));
            wire_n.insert((r, c), e);
        }
    }

    let (exit_n, exit_w) = pipe_exits(le);
    let mut boundary_order = Vec::new();
    for c in (0..w).rev() {
        let b = s.add_vertex(VertexKind::Boundary(exit_n[c]), (c as f64 + 0.7, 0.6));
        connect(&mut s, &mut ranked, (b, 0), owner(0, c, Side::N));
        boundary_order.push(b);
    }
    for r in 0..k {
        let b = s.add_vertex(VertexKind::Boundary(exit_w[r]), (-0.6, -(r as f64 + 0.7)));
        connect(&mut s, &mut ranked, (b, 0), owner(r, 0, Side::W));
        boundary_order.push(b);
    }
    ranked.apply(&mut s);

    // Erase the straight runs entering from the southeast border: westward
    // from each row end and northward from each column bottom, up to the
    // first elbow. Coverage (a + in every row and column) bounds the loops.
    for r in 0..k {
        let mut c = shape[r] - 1;
        while !le.is_plus(r, c) {
            s.delete_edge(wire_w[&(r, c)]);
            c -= 1;
        }
    }
    for c in 0..w {
        let mut r = le.col_height(c) - 1;
        while !le.is_plus(r, c) {
            s.delete_edge(wire_n[&(r, c)]);
            r -= 1;
        }
    }
    // A crossing cut on one strand keeps only the other; cut on both, it
    // disappears entirely.
    for row in &cell {
        for &(a, b) in row {
            if b.is_none() {
                match s.degree(a) {
                    4 => {}
                    2 => s.set_kind(a, VertexKind::White),
                    0 => s.delete_isolated_vertex(a),
                    d => unreachable!("crossing with {d} strands"),
                }
            }
        }
    }
    s.contract_degree2();
    s.finish(boundary_order).expect("pipe graph is well formed")
}

#[derive(Debug, Error)]
pub enum LeSearchError {
    #[error("no Le-diagram realizes the trip permutation {0:?}")]
    NotFound(Vec<usize>),
}

/// Inverts the trips map: find the unique Le-diagram whose plabic graph has
/// the given trip permutation. The pivots fix the shape; the fill is found
/// by checking each irreducible Le-filling.
pub fn lediagram_from_derangement(pi: &Derangement) -> Result<LeDiagram, LeSearchError> {
    let n = pi.n();
    let exc = pi.excedances();
    let k = exc.len();
    let shape = shape_from_pivots(Subset::from_elems(&exc), k, n);
    for le in irreducible_fillings_of_shape(k, n, &shape) {
        let g = build_g_minus(&le);
        let trips = g.trips().expect("pipe graphs are well formed");
        if trips.perm() == pi.images() {
            return Ok(le);
        }
    }
    Err(LeSearchError::NotFound(pi.images().to_vec()))
}

/// Predicted soliton graph for t ≪ 0: the plabic graph of the diagram, with
/// an X-crossing inserted for every pair of unbounded rays whose κ-order
/// disagrees with the graph's boundary order. For all-plus diagrams this is
/// the plabic graph itself.
pub fn predict_graph_t_neg(le: &LeDiagram, kappa: &KappaParams) -> GeneralizedPlabicGraph {
    let g = build_g_minus(le);
    let pi = g.trips().expect("pipe graphs are well formed").perm();
    let n = pi.len();
    let pair_sum = |i: usize| kappa.value(i) + kappa.value(pi[i - 1]);

    // Target ccw boundary labels in the plane: top rays right-to-left (by
    // increasing κ_i + κ_{π(i)} over excedances), then bottom rays
    // left-to-right (increasing κ_{π(j)} + κ_j over non-excedances). A ray
    // carries the label of the trip entering there, which is π of its index.
    let mut top: Vec<usize> = (1..=n).filter(|&i| pi[i - 1] > i).collect();
    top.sort_by(|&a, &b| pair_sum(a).partial_cmp(&pair_sum(b)).unwrap());
    let mut bottom: Vec<usize> = (1..=n).filter(|&j| pi[j - 1] < j).collect();
    bottom.sort_by(|&a, &b| pair_sum(a).partial_cmp(&pair_sum(b)).unwrap());
    let tau: Vec<usize> =
        top.iter().chain(bottom.iter()).map(|&i| pi[i - 1]).collect();
    let top_count = top.len();
    let is_top: Vec<bool> = {
        let mut t = vec![false; n + 1];
        for &i in &top {
            t[pi[i - 1]] = true;
        }
        t
    };

    // Rotate the graph's boundary cycle so the top-ray labels lead. The top
    // group is contiguous in the cycle for pipe graphs.
    let sigma = g.boundary_labels_ccw();
    let start = (0..n)
        .find(|&p| !is_top[sigma[(p + n - 1) % n]] && is_top[sigma[p]])
        .expect("boundary cycle mixes top and bottom rays");
    let rotated: Vec<usize> = (0..n).map(|o| sigma[(start + o) % n]).collect();
    assert!(
        rotated[..top_count].iter().all(|&l| is_top[l])
            && rotated[top_count..].iter().all(|&l| !is_top[l]),
        "top rays are not contiguous on the boundary"
    );

    let mut target_pos = vec![0usize; n + 1];
    for (p, &l) in tau.iter().enumerate() {
        target_pos[l] = p;
    }
    let mut s = GraphScratch::from_graph(&g);
    let mut order: Vec<usize> = rotated
        .iter()
        .map(|&l| g.boundary_vertex(l).expect("label present"))
        .collect();
    let mut labels = rotated;
    // Bubble toward the target; each adjacent swap is one ray crossing.
    loop {
        let mut swapped = false;
        for p in 0..n - 1 {
            if target_pos[labels[p]] > target_pos[labels[p + 1]] {
                insert_crossing(&mut s, order[p], order[p + 1]);
                order.swap(p, p + 1);
                labels.swap(p, p + 1);
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    s.finish(order).expect("crossing insertion keeps the graph well formed")
}

/// Cross the legs of two ccw-adjacent boundary vertices a, b: both legs are
/// cut, routed through a new crossing, and the boundary endpoints trade
/// places.
fn insert_crossing(s: &mut GraphScratch, bnd_a: usize, bnd_b: usize) {
    let e_a = s.rotation(bnd_a)[0];
    let e_b = s.rotation(bnd_b)[0];
    let pa = s.position(bnd_a);
    let pb = s.position(bnd_b);
    let mid = ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0);
    let x = s.add_vertex(VertexKind::Crossing, mid);
    s.reattach(e_a, bnd_a, x);
    s.reattach(e_b, bnd_b, x);
    let f_a = s.add_edge(x, bnd_a);
    let f_b = s.add_edge(x, bnd_b);
    s.set_rotation(bnd_a, vec![f_a]);
    s.set_rotation(bnd_b, vec![f_b]);
    // ccw at the crossing: in_b, in_a, out_b, out_a — opposite ports pair,
    // so the trips still reach their original boundary vertices.
    s.set_rotation(x, vec![e_b, e_a, f_b, f_a]);
    s.set_position(bnd_a, pb);
    s.set_position(bnd_b, pa);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::validate_kappa;
    use crate::lediagram::enumerate_irreducible;
    use crate::plabic::VertexKind;

    fn le(text: &str) -> LeDiagram {
        LeDiagram::from_text(text).unwrap()
    }

    #[test]
    fn all_plus_two_by_two() {
        let g = build_g_minus(&le("++\n++"));
        assert_eq!(g.trips().unwrap().perm(), vec![3, 4, 1, 2]);
        assert_eq!(g.boundary_labels_ccw(), vec![1, 2, 3, 4]);
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edge_count(), 8);
        let lab = g.face_labeling().unwrap();
        assert_eq!(lab.bounded_labels().iter().map(|s| s.label()).collect::<Vec<_>>(), vec!["13"]);
        let unbounded: Vec<String> =
            lab.unbounded_labels_ccw().iter().map(|s| s.label()).collect();
        assert_eq!(unbounded, vec!["23", "34", "14", "12"]);
        assert!(g.reduced_heuristic().passed());
    }

    #[test]
    fn zero_box_keeps_crossing() {
        let g = build_g_minus(&le("0+\n++"));
        assert_eq!(g.trips().unwrap().perm(), vec![2, 4, 1, 3]);
        assert_eq!(g.boundary_labels_ccw(), vec![1, 3, 2, 4]);
        assert_eq!(
            g.kinds().iter().filter(|k| matches!(k, VertexKind::Crossing)).count(),
            1
        );
    }

    #[test]
    fn staircase_shape() {
        let g = build_g_minus(&le("++\n+"));
        assert_eq!(g.trips().unwrap().perm(), vec![3, 1, 4, 2]);
        assert_eq!(g.boundary_labels_ccw(), vec![1, 2, 3, 4]);
    }

    #[test]
    fn disconnected_cell_builds() {
        let g = build_g_minus(&le("+0\n0+"));
        assert_eq!(g.trips().unwrap().perm(), vec![4, 3, 2, 1]);
        assert_eq!(g.boundary_labels_ccw(), vec![2, 1, 4, 3]);
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn trips_match_matroid_necklace_derangement() {
        // Independent oracle: a random point of the cell, its Plücker
        // matroid, the necklace of lexicographically minimal bases, and the
        // derangement read off the necklace.
        for n in 3..=5 {
            for k in 1..n.min(4) {
                for le in enumerate_irreducible(k, n) {
                    let g = build_g_minus(&le);
                    let perm = g.trips().unwrap().perm();
                    let point = le.random_point(7);
                    let pi = point.cell_derangement(1e-9).unwrap();
                    assert_eq!(perm, pi.images(), "diagram:\n{}", le.to_text());
                }
            }
        }
    }

    #[test]
    fn derangement_search_round_trips() {
        for n in 3..=5 {
            for k in 1..n.min(4) {
                for le in enumerate_irreducible(k, n) {
                    let pi = build_g_minus(&le).trips().unwrap().derangement().unwrap();
                    let back = lediagram_from_derangement(&pi).unwrap();
                    assert_eq!(back.to_text(), le.to_text());
                }
            }
        }
    }

    #[test]
    fn prediction_inserts_ray_crossings() {
        let diagram = le("+0\n0+");
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let g = predict_graph_t_neg(&diagram, &kappa);
        assert_eq!(
            g.kinds().iter().filter(|k| matches!(k, VertexKind::Crossing)).count(),
            1
        );
        assert_eq!(g.trips().unwrap().perm(), vec![4, 3, 2, 1]);
        assert_eq!(g.boundary_labels_ccw(), vec![4, 3, 1, 2]);
        let lab = g.face_labeling().unwrap();
        let unbounded: Vec<String> =
            lab.unbounded_labels_ccw().iter().map(|s| s.label()).collect();
        assert_eq!(unbounded, vec!["13", "12", "24", "34"]);

        // Other κ ordering: the crossing moves to the top pair.
        let kappa2 = validate_kappa(&[-3.0, -2.4, 0.5, 2.0], 2).unwrap();
        let g2 = predict_graph_t_neg(&diagram, &kappa2);
        assert_eq!(
            g2.kinds().iter().filter(|k| matches!(k, VertexKind::Crossing)).count(),
            1
        );
        assert_eq!(g2.boundary_labels_ccw(), vec![3, 4, 2, 1]);
    }

    #[test]
    fn prediction_is_plain_graph_for_all_plus() {
        let diagram = le("++\n++");
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let g = predict_graph_t_neg(&diagram, &kappa);
        assert!(g.kinds().iter().all(|k| !matches!(k, VertexKind::Crossing)));
        assert!(GeneralizedPlabicGraph::label_isomorphism(&g, &build_g_minus(&diagram)).is_some());
    }
}
