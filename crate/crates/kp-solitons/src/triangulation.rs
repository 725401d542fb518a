//! The Gr(2,n) picture: triangulations of a labeled convex n-gon, diagonal
//! flips, the induced soliton graphs, and the Ptolemy-style cluster
//! parameterization that realizes each triangulation as an actual contour
//! plot.

use std::collections::{BTreeMap, VecDeque};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::grassmann::{GrassmannPoint, KappaParams};
use crate::plabic::{GeneralizedPlabicGraph, GraphScratch, VertexKind};
use crate::soliton::{soliton_graph, SolitonGraph};
use crate::subset::Subset;
use crate::tropical::{contour_plot, tropical_field};

#[derive(Debug, Error)]
pub enum TriangulationError {
    #[error("{0}-{1} is not a chord of the polygon")]
    BadChord(usize, usize),
    #[error("chord {0}-{1} appears twice")]
    DuplicateChord(usize, usize),
    #[error("chords {0}-{1} and {2}-{3} cross")]
    CrossingChords(usize, usize, usize, usize),
    #[error("a triangulation of an {n}-gon needs {want} diagonals, got {got}")]
    WrongCount { n: usize, want: usize, got: usize },
    #[error("{0}-{1} is not a diagonal of this triangulation")]
    NotADiagonal(usize, usize),
    #[error("no point/time pair out of {tried} attempts produced this soliton graph")]
    NotRealized { tried: usize },
}

/// A triangulation of a convex polygon with vertices 1..n counterclockwise.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Triangulation {
    n: usize,
    diagonals: Vec<(usize, usize)>,
}

fn cyclically_adjacent(n: usize, a: usize, b: usize) -> bool {
    b - a == 1 || (a == 1 && b == n)
}

fn chords_cross(x: (usize, usize), y: (usize, usize)) -> bool {
    let inside = |p: usize, (a, b): (usize, usize)| a < p && p < b;
    inside(y.0, x) != inside(y.1, x) && !(y.0 == x.0 || y.0 == x.1 || y.1 == x.0 || y.1 == x.1)
}

impl Triangulation {
    pub fn new(n: usize, diagonals: Vec<(usize, usize)>) -> Result<Triangulation, TriangulationError> {
        let mut ds: Vec<(usize, usize)> = Vec::with_capacity(diagonals.len());
        for &(i, j) in &diagonals {
            let (a, b) = (i.min(j), i.max(j));
            if a == 0 || b > n || a == b || cyclically_adjacent(n, a, b) {
                return Err(TriangulationError::BadChord(i, j));
            }
            if ds.contains(&(a, b)) {
                return Err(TriangulationError::DuplicateChord(a, b));
            }
            ds.push((a, b));
        }
        if n < 3 || ds.len() != n - 3 {
            return Err(TriangulationError::WrongCount { n, want: n.saturating_sub(3), got: ds.len() });
        }
        for i in 0..ds.len() {
            for j in i + 1..ds.len() {
                if chords_cross(ds[i], ds[j]) {
                    return Err(TriangulationError::CrossingChords(
                        ds[i].0, ds[i].1, ds[j].0, ds[j].1,
                    ));
                }
            }
        }
        ds.sort_unstable();
        Ok(Triangulation { n, diagonals: ds })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> &[(usize, usize)] {
        &self.diagonals
    }

    fn has_side(&self, a: usize, b: usize) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        cyclically_adjacent(self.n, a, b) || self.diagonals.contains(&(a, b))
    }

    /// The n−2 triangles, as sorted corner triples.
    pub fn triangles(&self) -> Vec<(usize, usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                if !self.has_side(a, b) {
                    continue;
                }
                for c in b + 1..=n {
                    if self.has_side(b, c) && self.has_side(a, c) {
                        out.push((a, b, c));
                    }
                }
            }
        }
        debug_assert_eq!(out.len(), n - 2);
        out
    }

    /// Replace diagonal d by the opposite diagonal of its quadrilateral.
    pub fn flip(&self, d: (usize, usize)) -> Result<Triangulation, TriangulationError> {
        let key = (d.0.min(d.1), d.0.max(d.1));
        if !self.diagonals.contains(&key) {
            return Err(TriangulationError::NotADiagonal(d.0, d.1));
        }
        let apexes: Vec<usize> = (1..=self.n)
            .filter(|&v| v != key.0 && v != key.1 && self.has_side(key.0, v) && self.has_side(v, key.1))
            .filter(|&v| {
                // v must close a triangle of T, not merely touch both ends.
                let mut t = [key.0, key.1, v];
                t.sort_unstable();
                self.triangles().contains(&(t[0], t[1], t[2]))
            })
            .collect();
        assert_eq!(apexes.len(), 2, "diagonal must bound exactly two triangles");
        let new_d = (apexes[0].min(apexes[1]), apexes[0].max(apexes[1]));
        let mut ds = self.diagonals.clone();
        ds.retain(|&x| x != key);
        ds.push(new_d);
        Triangulation::new(self.n, ds)
    }
}

/// All triangulations of the n-gon (Catalan number C_{n−2} of them).
pub fn enumerate_triangulations(n: usize) -> Vec<Triangulation> {
    fn rec(verts: &[usize], n: usize) -> Vec<Vec<(usize, usize)>> {
        if verts.len() < 3 {
            return vec![Vec::new()];
        }
        let a = verts[0];
        let b = *verts.last().unwrap();
        let mut out = Vec::new();
        for i in 1..verts.len() - 1 {
            let m = verts[i];
            let lefts = rec(&verts[..=i], n);
            let rights = rec(&verts[i..], n);
            for l in &lefts {
                for r in &rights {
                    let mut ds = l.clone();
                    ds.extend_from_slice(r);
                    for &(x, y) in &[(a.min(m), a.max(m)), (m.min(b), m.max(b))] {
                        if !cyclically_adjacent(n, x, y) && !ds.contains(&(x, y)) {
                            ds.push((x, y));
                        }
                    }
                    out.push(ds);
                }
            }
        }
        out
    }
    let verts: Vec<usize> = (1..=n).collect();
    let mut ts: Vec<Triangulation> = rec(&verts, n)
        .into_iter()
        .map(|ds| Triangulation::new(n, ds).expect("recursion yields valid triangulations"))
        .collect();
    ts.sort();
    ts.dedup();
    ts
}

/// Soliton graph of a triangulation: a black vertex inside each triangle,
/// white (black) polygon vertices according to diagonal incidence, star
/// edges, same-color contraction, one boundary ray per polygon vertex, and a
/// fan resolution of any vertex left with more than three edges.
pub fn psi(t: &Triangulation) -> GeneralizedPlabicGraph {
    let n = t.n;
    let mut s = GraphScratch::new();
    let pos_of = |j: usize| {
        let ang = 2.0 * std::f64::consts::PI * (j as f64 - 1.0) / n as f64;
        (ang.cos(), ang.sin())
    };
    let corner: Vec<usize> = (1..=n)
        .map(|j| {
            let white = t.diagonals.iter().any(|&(a, b)| a == j || b == j);
            s.add_vertex(if white { VertexKind::White } else { VertexKind::Black }, pos_of(j))
        })
        .collect();
    for &(a, b, c) in &t.triangles() {
        let (pa, pb, pc) = (pos_of(a), pos_of(b), pos_of(c));
        let center = ((pa.0 + pb.0 + pc.0) / 3.0, (pa.1 + pb.1 + pc.1) / 3.0);
        let v = s.add_vertex(VertexKind::Black, center);
        for x in [a, b, c] {
            s.add_edge(v, corner[x - 1]);
        }
    }
    // The ray at polygon vertex j carries boundary label j-1 (cyclically):
    // with this choice the region that a chord (a,b) passes through is the one
    // whose trip label is exactly {a,b}, and the trip permutation stays
    // j -> j-2.
    let mut boundary = Vec::new();
    for j in 1..=n {
        let (x, y) = pos_of(j);
        let label = (j + n - 2) % n + 1;
        let leg = s.add_vertex(VertexKind::Boundary(label), (1.3 * x, 1.3 * y));
        s.add_edge(corner[j - 1], leg);
        boundary.push(leg);
    }
    s.sort_rotations_by_position();

    // Contract internal same-color adjacencies (always star-center against a
    // ray-bearing polygon vertex, so the center survives).
    loop {
        let live = s.live_vertices();
        let mut found = None;
        'outer: for &v in &live {
            let kv = s.kind(v).cloned().unwrap();
            if kv.is_boundary() {
                continue;
            }
            for &e in s.rotation(v) {
                let w = s.other(e, v);
                if s.kind(w) == Some(&kv) && s.endpoints(e).0 == v {
                    found = Some(e);
                    break 'outer;
                }
            }
        }
        match found {
            Some(e) => s.contract_edge(e),
            None => break,
        }
    }

    // Fan-resolve vertices of degree > 3, preserving the rotation order.
    loop {
        let v = s
            .live_vertices()
            .into_iter()
            .find(|&v| !s.kind(v).unwrap().is_boundary() && s.degree(v) > 3);
        let Some(v) = v else { break };
        let kind = s.kind(v).cloned().unwrap();
        let rot = s.rotation(v).to_vec();
        let m = rot.len();
        let base = s.position(v);
        let mut prev = v;
        let mut prev_rot = vec![rot[0], rot[1]];
        for i in 1..=m - 3 {
            let main = rot[i + 1];
            let toward = s.position(s.other(main, v));
            let f = 0.18 * i as f64;
            let w = s.add_vertex(
                kind.clone(),
                (base.0 + f * (toward.0 - base.0), base.1 + f * (toward.1 - base.1)),
            );
            let link = s.add_edge(prev, w);
            prev_rot.push(link);
            s.set_rotation(prev, prev_rot);
            s.reattach(main, v, w);
            prev_rot = vec![link, main];
            prev = w;
        }
        let last = rot[m - 1];
        s.reattach(last, v, prev);
        prev_rot.push(last);
        s.set_rotation(prev, prev_rot);
    }

    s.finish(boundary).expect("psi output is a valid plabic graph")
}

/// Three-term Plücker identity on a<b<c<d, checked at 1e-10 relative.
pub fn exchange_check(point: &GrassmannPoint, quad: (usize, usize, usize, usize)) -> bool {
    let (a, b, c, d) = quad;
    assert!(a < b && b < c && c < d);
    let m = |x, y| point.pluecker_f64(Subset::from_elems(&[x, y]));
    let lhs = m(a, c) * m(b, d);
    let rhs = m(a, b) * m(c, d) + m(a, d) * m(b, c);
    (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1e-300)
}

/// TP Gr(2,n) point whose Plücker coordinate on each polygon edge is 1 and on
/// each diagonal of `t` is the given value; every other coordinate follows
/// from the exchange relation, so it is positive.
pub fn cluster_point(t: &Triangulation, diag_values: &[f64]) -> GrassmannPoint {
    assert_eq!(diag_values.len(), t.diagonals.len());
    let n = t.n;
    let mut val: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for j in 1..=n {
        val.insert((j, if j == n { 1 } else { j + 1 }), 1.0);
        val.insert((j.min(if j == n { 1 } else { j + 1 }), j.max(if j == n { 1 } else { j + 1 })), 1.0);
    }
    for (&d, &v) in t.diagonals.iter().zip(diag_values) {
        val.insert(d, v);
    }
    let get = |a: usize, b: usize| val[&(a.min(b), a.max(b))];

    let tris = t.triangles();
    let mut vecs: Vec<Option<(f64, f64)>> = vec![None; n + 1];
    let (a, b, c) = tris[0];
    vecs[a] = Some((1.0, 0.0));
    vecs[b] = Some((0.0, get(a, b)));
    vecs[c] = Some((-get(b, c) / get(a, b), get(a, c)));
    let mut done = vec![false; tris.len()];
    done[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(ti) = queue.pop_front() {
        for (tj, &(p, q, r)) in tris.iter().enumerate() {
            if done[tj] {
                continue;
            }
            let known: Vec<usize> =
                [p, q, r].into_iter().filter(|&x| vecs[x].is_some()).collect();
            if known.len() < 2 {
                continue;
            }
            let _ = ti;
            let unknowns: Vec<usize> =
                [p, q, r].into_iter().filter(|&x| vecs[x].is_none()).collect();
            done[tj] = true;
            queue.push_back(tj);
            if unknowns.is_empty() {
                continue;
            }
            let w = unknowns[0];
            let (x, y) = (known[0], known[1]);
            let vx = vecs[x].unwrap();
            let vy = vecs[y].unwrap();
            // det(v_x, v_w) and det(v_y, v_w) are the (signed) assigned minors.
            let rx = if x < w { get(x, w) } else { -get(w, x) };
            let ry = if y < w { get(y, w) } else { -get(w, y) };
            let det = vx.0 * vy.1 - vx.1 * vy.0;
            vecs[w] = Some(((vy.0 * rx - vx.0 * ry) / det, (vy.1 * rx - vx.1 * ry) / det));
        }
    }
    let rows = vec![
        (1..=n).map(|j| vecs[j].unwrap().0).collect(),
        (1..=n).map(|j| vecs[j].unwrap().1).collect(),
    ];
    GrassmannPoint::from_rows(2, n, rows).expect("cluster matrix has full rank")
}

pub struct Realization {
    pub point: GrassmannPoint,
    pub time: f64,
    pub graph: SolitonGraph,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for rest in permutations(k - 1) {
        for slot in 0..k {
            let mut p = rest.clone();
            p.insert(slot, k - 1);
            out.push(p);
        }
    }
    out
}

/// Search for an actual contour plot whose soliton graph is label-isomorphic
/// to psi(t): cluster points with large diagonal coordinates (uniform, then
/// seeded jitter, then ramp permutations and a coarse grid) crossed with a
/// time scan over −10..10.
pub fn realize(t: &Triangulation, kappa: &KappaParams) -> Result<Realization, TriangulationError> {
    // Compare same-color contractions: which trivalent resolution of a fan
    // center shows up in a contour depends on the point, and any of them is a
    // faithful realization of psi(t).
    let target = psi(t).contract_same_color();
    let nd = t.diagonals.len();
    // Realization windows between consecutive flips can be narrower than one
    // time unit, so the grid is fine near zero and coarse further out.
    let times: Vec<f64> = {
        let mut ts = vec![0.0];
        for s in [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0] {
            ts.push(-s);
            ts.push(s);
        }
        ts
    };
    // Stages of diagonal log-height assignments, cheapest family first:
    // uniform levels with seeded jitter, then every monotising ramp
    // permutation (skewed windows like (1,6,9) exist), then a coarse grid.
    let mut stages: Vec<Vec<Vec<f64>>> = Vec::new();
    {
        let mut a: Vec<Vec<f64>> =
            [4.0, 2.0, 6.0, 8.0].iter().map(|&l: &f64| vec![l; nd]).collect();
        for seed in 0..8u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            a.push((0..nd).map(|_| rng.gen_range(2.0..7.0)).collect());
        }
        stages.push(a);
    }
    if nd >= 2 {
        let mut a = Vec::new();
        for scale in [1.0, 0.6, 1.5] {
            for perm in permutations(nd) {
                let ramp: Vec<f64> = (0..nd)
                    .map(|i| scale * (1.0 + 9.0 * i as f64 / (nd as f64 - 1.0)))
                    .collect();
                a.push(perm.iter().map(|&p| ramp[p]).collect());
            }
        }
        stages.push(a);
    }
    if nd >= 1 && nd <= 3 {
        let levels = [1.0, 4.0, 6.5, 9.0, 12.0];
        let mut a = vec![vec![0.0; nd]];
        for _ in 0..nd {
            a = a
                .into_iter()
                .flat_map(|v| {
                    levels.iter().map(move |&l| {
                        let mut w = v.clone();
                        w.remove(0);
                        w.push(l);
                        w
                    })
                })
                .collect();
        }
        stages.push(a);
    }
    let mut tried = 0;
    for assignments in &stages {
        for vals in assignments {
            let point =
                cluster_point(t, &vals.iter().map(|&l| l.exp()).collect::<Vec<f64>>());
            let Ok(field) = tropical_field(&point, kappa) else { continue };
            for &t0 in &times {
                tried += 1;
                let Ok(plot) = contour_plot(&field, t0, None) else { continue };
                let Ok(sg) = soliton_graph(&plot) else { continue };
                if GeneralizedPlabicGraph::label_isomorphism(
                    &sg.graph.contract_same_color(),
                    &target,
                )
                .is_some()
                {
                    return Ok(Realization { point, time: t0, graph: sg });
                }
            }
        }
    }
    Err(TriangulationError::NotRealized { tried })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    use crate::grassmann::validate_kappa;
    use crate::le_plabic::build_g_minus;
    use crate::lediagram::LeDiagram;

    #[test]
    fn validation_catches_bad_inputs() {
        assert!(matches!(
            Triangulation::new(4, vec![(1, 2)]),
            Err(TriangulationError::BadChord(1, 2))
        ));
        assert!(matches!(
            Triangulation::new(4, vec![(1, 4)]),
            Err(TriangulationError::BadChord(1, 4))
        ));
        assert!(matches!(
            Triangulation::new(5, vec![(1, 3), (2, 4)]),
            Err(TriangulationError::CrossingChords(1, 3, 2, 4))
        ));
        assert!(matches!(
            Triangulation::new(5, vec![(1, 3)]),
            Err(TriangulationError::WrongCount { n: 5, want: 2, got: 1 })
        ));
        assert!(Triangulation::new(4, vec![(1, 3)]).is_ok());
    }

    #[test]
    fn square_flip_is_the_other_diagonal() {
        let t = Triangulation::new(4, vec![(1, 3)]).unwrap();
        let f = t.flip((1, 3)).unwrap();
        assert_eq!(f.diagonals(), &[(2, 4)]);
        assert_eq!(f.flip((2, 4)).unwrap(), t);
        assert!(matches!(t.flip((2, 4)), Err(TriangulationError::NotADiagonal(2, 4))));
    }

    #[test]
    fn catalan_counts() {
        assert_eq!(enumerate_triangulations(3).len(), 1);
        assert_eq!(enumerate_triangulations(4).len(), 2);
        assert_eq!(enumerate_triangulations(5).len(), 5);
        assert_eq!(enumerate_triangulations(6).len(), 14);
        assert_eq!(enumerate_triangulations(7).len(), 42);
        assert_eq!(enumerate_triangulations(8).len(), 132);
    }

    #[test]
    fn psi_square_is_the_t_negative_square() {
        let t = Triangulation::new(4, vec![(1, 3)]).unwrap();
        let g = psi(&t);
        assert_eq!(g.trips().unwrap().perm(), vec![3, 4, 1, 2]);
        let lab = g.face_labeling().unwrap();
        assert_eq!(lab.bounded_labels().iter().map(|s| s.label()).collect::<Vec<_>>(), ["13"]);
        let le = LeDiagram::all_plus(2, 4, vec![2, 2]).unwrap();
        assert!(GeneralizedPlabicGraph::label_isomorphism(&g, &build_g_minus(&le).normalize())
            .is_some());
        let other = psi(&t.flip((1, 3)).unwrap());
        let lab2 = other.face_labeling().unwrap();
        assert_eq!(lab2.bounded_labels().iter().map(|s| s.label()).collect::<Vec<_>>(), ["24"]);
        assert_eq!(other.trips().unwrap().perm(), vec![3, 4, 1, 2]);
    }

    #[test]
    fn hexagon_triangulations_all_give_the_tp_graph() {
        let ts = enumerate_triangulations(6);
        assert_eq!(ts.len(), 14);
        let edge_labels: BTreeSet<String> =
            ["12", "23", "34", "45", "56", "16"].iter().map(|s| s.to_string()).collect();
        for t in &ts {
            let g = psi(t);
            assert_eq!(g.trips().unwrap().perm(), vec![5, 6, 1, 2, 3, 4]);
            assert!(g.reduced_heuristic().passed());
            let lab = g.face_labeling().unwrap();
            let bounded: BTreeSet<String> =
                lab.bounded_labels().iter().map(|s| s.label()).collect();
            let want: BTreeSet<String> = t
                .diagonals()
                .iter()
                .map(|&(a, b)| Subset::from_elems(&[a, b]).label())
                .collect();
            assert_eq!(bounded, want);
            let unbounded: BTreeSet<String> =
                lab.unbounded_labels_ccw().iter().map(|s| s.label()).collect();
            assert_eq!(unbounded, edge_labels);
        }
    }

    #[test]
    fn hexagon_flip_graph_is_three_regular_and_connected() {
        let ts = enumerate_triangulations(6);
        let index: BTreeMap<&Triangulation, usize> =
            ts.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); ts.len()];
        for (i, t) in ts.iter().enumerate() {
            for &d in t.diagonals() {
                let f = t.flip(d).unwrap();
                let j = index[&f];
                assert_ne!(i, j);
                adj[i].insert(j);
            }
        }
        assert!(adj.iter().all(|s| s.len() == 3));
        let mut seen = vec![false; ts.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn exchange_relation_on_gr24_and_a_boundary_point() {
        let p = GrassmannPoint::from_rows(
            2,
            4,
            vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]],
        )
        .unwrap();
        assert!(exchange_check(&p, (1, 2, 3, 4)));
        let q = GrassmannPoint::from_rows(
            2,
            4,
            vec![vec![1.0, 0.0, 0.0, -1.0], vec![0.0, 1.0, 1.0, 0.0]],
        )
        .unwrap();
        assert!(exchange_check(&q, (1, 2, 3, 4)));
    }

    #[test]
    fn exchange_relation_on_random_tp_gr26_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let mut xs: Vec<f64> = (0..6).map(|_| rng.gen_range(-3.0..3.0)).collect();
            xs.sort_by(f64::total_cmp);
            let cs: Vec<f64> = (0..6).map(|_| rng.gen_range(0.5..2.0)).collect();
            let rows = vec![
                cs.clone(),
                cs.iter().zip(&xs).map(|(c, x)| c * x).collect(),
            ];
            let p = GrassmannPoint::from_rows(2, 6, rows).unwrap();
            for a in 1..=3 {
                for b in a + 1..=4 {
                    for c in b + 1..=5 {
                        for d in c + 1..=6 {
                            assert!(exchange_check(&p, (a, b, c, d)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cluster_point_hits_the_prescribed_minors() {
        let t = Triangulation::new(6, vec![(1, 3), (3, 6), (3, 5)]).unwrap();
        let p = cluster_point(&t, &[7.0, 11.0, 5.0]);
        for (&(a, b), want) in t.diagonals().iter().zip([7.0, 11.0, 5.0]) {
            let got = p.pluecker_f64(Subset::from_elems(&[a, b]));
            assert!((got - want).abs() <= 1e-9 * want, "Δ{a}{b} = {got}");
        }
        for j in 1..=6usize {
            let e = Subset::from_elems(&[j, if j == 6 { 1 } else { j + 1 }]);
            let got = p.pluecker_f64(e);
            assert!((got - 1.0).abs() <= 1e-9, "edge {} = {got}", e.label());
        }
        let (pos, _) = p.classify_default().unwrap();
        assert_eq!(pos, crate::grassmann::Positivity::TotallyPositive);
    }

    #[test]
    fn realize_square_and_pentagon() {
        let kappa4 = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        for t in enumerate_triangulations(4) {
            let r = realize(&t, &kappa4).unwrap();
            assert_eq!(r.graph.derangement.images(), &[3, 4, 1, 2]);
        }
        let kappa5 = validate_kappa(&[-2.7, -1.1, 0.2, 1.4, 2.9], 2).unwrap();
        for t in enumerate_triangulations(5) {
            let r = realize(&t, &kappa5).unwrap();
            assert_eq!(r.graph.derangement.images(), &[4, 5, 1, 2, 3]);
        }
    }

    #[test]
    fn realize_all_hexagon_triangulations() {
        let kappa = validate_kappa(&[-2.95, -1.73, -0.62, 0.58, 1.81, 3.07], 2).unwrap();
        for t in enumerate_triangulations(6) {
            let r = realize(&t, &kappa)
                .unwrap_or_else(|e| panic!("triangulation {:?}: {e}", t.diagonals()));
            assert_eq!(r.graph.derangement.images(), &[5, 6, 1, 2, 3, 4]);
            let bounded: BTreeSet<String> =
                r.graph.bounded_geometric.iter().map(|s| s.label()).collect();
            let want: BTreeSet<String> = t
                .diagonals()
                .iter()
                .map(|&(a, b)| Subset::from_elems(&[a, b]).label())
                .collect();
            assert_eq!(bounded, want);
        }
    }
}
