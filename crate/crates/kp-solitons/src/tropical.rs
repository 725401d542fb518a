//! Piecewise-linear shadow of ln τ: one affine function per matroid basis,
//! whose pointwise max is linear exactly away from the contour plot. The
//! extractor clips each basis's dominance region out of a bounding box and
//! reads edges, vertices, and their soliton types off the shared borders.

use thiserror::Error;

use crate::geometry::{
    cluster_points, convex_contains, cross, dist, dot, norm, sub, DisjointSets,
    HalfPlane, Pt, TaggedPolygon,
};
use crate::grassmann::{GrassmannPoint, KappaParams};
use crate::numeric::ln_rational_abs;
use crate::subset::Subset;
use num_traits::Zero;

#[derive(Debug, Error)]
pub enum TropicalError {
    #[error("no basis has a nonzero Plücker coordinate")]
    EmptyMatroid,
    #[error("basis {0} is negative after sign normalization; the τ-sum is not positive")]
    NegativeBasis(String),
    #[error("κ must be validated for rank ≥ {need}, got rank bound {got}")]
    RankBoundTooLow { need: usize, got: usize },
    #[error("κ list has {got} entries but the point lives in Gr(k,{need})")]
    SizeMismatch { need: usize, got: usize },
    #[error("terms {a} and {b} coincide; the plot is degenerate at this time")]
    DegenerateTie { a: String, b: String },
    #[error("adjacent bases {a} and {b} differ in more than one index")]
    AdjacentBasesDiffer { a: String, b: String },
}

/// Affine exponent ℓ(x,y,t) = c + p·x + q·y + r·t of one τ-summand.
#[derive(Clone, Debug)]
pub struct TropicalTerm {
    pub basis: Subset,
    pub c: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl TropicalTerm {
    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        self.c + self.p * x + self.q * y + self.r * t
    }
}

/// All exponent functions of a point's τ-sum; f_A = max over terms.
#[derive(Clone, Debug)]
pub struct TropicalField {
    k: usize,
    n: usize,
    kappa: KappaParams,
    terms: Vec<TropicalTerm>,
}

pub fn tropical_field(
    point: &GrassmannPoint,
    kappa: &KappaParams,
) -> Result<TropicalField, TropicalError> {
    if kappa.n() != point.n() {
        return Err(TropicalError::SizeMismatch { need: point.n(), got: kappa.n() });
    }
    if kappa.k() < point.k() {
        return Err(TropicalError::RankBoundTooLow { need: point.k(), got: kappa.k() });
    }
    let sign = point.sign_normalization();
    let mut terms = Vec::new();
    for (s, v) in point.pluecker() {
        if v.is_zero() {
            continue;
        }
        let negative = (*v < num_rational::BigRational::zero()) != (sign < 0);
        if negative {
            return Err(TropicalError::NegativeBasis(s.label()));
        }
        terms.push(TropicalTerm {
            basis: *s,
            c: ln_rational_abs(v) + kappa.ln_vandermonde(*s),
            p: kappa.sum(*s),
            q: kappa.sum_sq(*s),
            r: kappa.sum_cube(*s),
        });
    }
    if terms.is_empty() {
        return Err(TropicalError::EmptyMatroid);
    }
    Ok(TropicalField { k: point.k(), n: point.n(), kappa: kappa.clone(), terms })
}

impl TropicalField {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kappa(&self) -> &KappaParams {
        &self.kappa
    }

    pub fn terms(&self) -> &[TropicalTerm] {
        &self.terms
    }

    pub fn term_index(&self, basis: Subset) -> Option<usize> {
        self.terms.iter().position(|t| t.basis == basis)
    }

    /// f_A(x,y,t): the max-plus surrogate of ln τ.
    pub fn f_a(&self, x: f64, y: f64, t: f64) -> f64 {
        self.terms.iter().map(|tm| tm.eval(x, y, t)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the dominant term (first of the maxima).
    pub fn dominant(&self, x: f64, y: f64, t: f64) -> usize {
        let mut best = 0;
        let mut bv = f64::NEG_INFINITY;
        for (i, tm) in self.terms.iter().enumerate() {
            let v = tm.eval(x, y, t);
            if v > bv {
                bv = v;
                best = i;
            }
        }
        best
    }

    /// Offset of the [i,j] line-soliton separating bases I ∋ i and J ∋ j:
    /// points on the edge satisfy x + (κi+κj)y + (κi²+κiκj+κj²)t = offset.
    pub fn soliton_offset(&self, basis_i: Subset, basis_j: Subset) -> f64 {
        let ti = self.term_index(basis_i).expect("basis of the field");
        let tj = self.term_index(basis_j).expect("basis of the field");
        let di = basis_i.difference(basis_j).min_elem().expect("one-element difference");
        let dj = basis_j.difference(basis_i).min_elem().expect("one-element difference");
        let (ki, kj) = (self.kappa.value(di), self.kappa.value(dj));
        (self.terms[ti].c - self.terms[tj].c) / (kj - ki)
    }
}

/// Algebraic balancing residual of a trivalent vertex with soliton types
/// [i,j],[j,l],[i,l]: weights (κ·−κ·) on directions (κ·+κ·, −1) must cancel.
pub fn balancing_residual(i: usize, j: usize, l: usize, kappa: &KappaParams) -> (f64, f64) {
    let (ki, kj, kl) = (kappa.value(i), kappa.value(j), kappa.value(l));
    let x = (kj - ki) * (ki + kj) + (kl - kj) * (kj + kl) - (kl - ki) * (ki + kl);
    let y = -(kj - ki) - (kl - kj) + (kl - ki);
    (x, y)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn diag(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn on_boundary(&self, p: Pt, tol: f64) -> bool {
        (p.0 - self.xmin).abs() <= tol
            || (p.0 - self.xmax).abs() <= tol
            || (p.1 - self.ymin).abs() <= tol
            || (p.1 - self.ymax).abs() <= tol
    }

    /// Arc length from the SW corner, walking the boundary counterclockwise.
    pub fn perimeter_pos(&self, p: Pt) -> f64 {
        let (w, h) = (self.width(), self.height());
        let db = (p.1 - self.ymin).abs();
        let dr = (self.xmax - p.0).abs();
        let dt = (self.ymax - p.1).abs();
        let dl = (p.0 - self.xmin).abs();
        let m = db.min(dr).min(dt).min(dl);
        if m == db {
            (p.0 - self.xmin).clamp(0.0, w)
        } else if m == dr {
            w + (p.1 - self.ymin).clamp(0.0, h)
        } else if m == dt {
            w + h + (self.xmax - p.0).clamp(0.0, w)
        } else {
            w + h + w + (self.ymax - p.1).clamp(0.0, h)
        }
    }

    pub fn perimeter_len(&self) -> f64 {
        2.0 * (self.width() + self.height())
    }

    /// Inverse of `perimeter_pos`.
    pub fn perimeter_point(&self, s: f64) -> Pt {
        let (w, h) = (self.width(), self.height());
        let s = s.rem_euclid(self.perimeter_len());
        if s <= w {
            (self.xmin + s, self.ymin)
        } else if s <= w + h {
            (self.xmax, self.ymin + (s - w))
        } else if s <= w + h + w {
            (self.xmax - (s - w - h), self.ymax)
        } else {
            (self.xmin, self.ymax - (s - w - h - w))
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContourRegion {
    pub basis: Subset,
    /// Counterclockwise vertex list of the clipped dominance cell.
    pub polygon: Vec<Pt>,
}

#[derive(Clone, Debug)]
pub struct ContourEdge {
    /// The two dominant bases, lexicographically ordered.
    pub bases: (Subset, Subset),
    /// Soliton type [i,j], i < j.
    pub stype: (usize, usize),
    /// Endpoints with p0 below p1 (edges are never horizontal).
    pub p0: Pt,
    pub p1: Pt,
    /// Contour-vertex ids; `None` where the edge leaves the bounding box.
    pub v0: Option<usize>,
    pub v1: Option<usize>,
}

impl ContourEdge {
    pub fn is_unbounded(&self) -> bool {
        self.v0.is_none() || self.v1.is_none()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexClass {
    TrivalentBlack,
    TrivalentWhite,
    XCrossing,
    Degenerate,
}

#[derive(Clone, Debug)]
pub struct ContourVertex {
    pub pos: Pt,
    pub class: VertexClass,
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ContourPlot {
    pub k: usize,
    pub n: usize,
    pub time: f64,
    pub bbox: Rect,
    pub regions: Vec<ContourRegion>,
    pub edges: Vec<ContourEdge>,
    pub vertices: Vec<ContourVertex>,
    /// False iff some vertex is neither trivalent nor an X-crossing.
    pub generic: bool,
}

impl ContourPlot {
    pub fn region_index(&self, basis: Subset) -> Option<usize> {
        self.regions.iter().position(|r| r.basis == basis)
    }

    /// Region containing `p`, by point-in-polygon over the dominance cells.
    pub fn region_of_point(&self, p: Pt) -> Option<usize> {
        let tight = 1e-9 * self.bbox.diag();
        for tol in [tight, 1e-6 * self.bbox.diag()] {
            for (i, r) in self.regions.iter().enumerate() {
                if convex_contains(&r.polygon, p, tol) {
                    return Some(i);
                }
            }
        }
        None
    }

    /// One (edge, outgoing direction, exit point) triple per unbounded ray;
    /// doubly-unbounded edges contribute two rays.
    pub fn rays(&self) -> Vec<Ray> {
        let mut out = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            if e.v1.is_none() {
                out.push(Ray { edge: ei, exit: e.p1, dir: normalized_dir(e.p0, e.p1), upward: true });
            }
            if e.v0.is_none() {
                out.push(Ray { edge: ei, exit: e.p0, dir: normalized_dir(e.p1, e.p0), upward: false });
            }
        }
        out
    }

    /// Region indices of the unbounded regions in counterclockwise boundary
    /// order. The starting arc is the one counterclockwise of the exit with
    /// the smallest perimeter position.
    pub fn unbounded_regions_ccw(&self) -> Vec<usize> {
        let rays = self.rays();
        if rays.is_empty() {
            return if self.regions.len() == 1 { vec![0] } else { Vec::new() };
        }
        let mut exits: Vec<f64> =
            rays.iter().map(|r| self.bbox.perimeter_pos(r.exit)).collect();
        exits.sort_by(f64::total_cmp);
        let total = self.bbox.perimeter_len();
        let mut out = Vec::new();
        for w in 0..exits.len() {
            let a = exits[w];
            let b = if w + 1 == exits.len() { exits[0] + total } else { exits[w + 1] };
            let mid = self.bbox.perimeter_point((a + b) / 2.0);
            if let Some(r) = self.region_of_point(mid) {
                out.push(r);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Ray {
    pub edge: usize,
    pub exit: Pt,
    pub dir: Pt,
    /// True iff the ray heads toward y → +∞.
    pub upward: bool,
}

fn normalized_dir(from: Pt, to: Pt) -> Pt {
    let d = sub(to, from);
    let n = norm(d).max(1e-300);
    (d.0 / n, d.1 / n)
}

fn nearest_center(centers: &[Pt], p: Pt, tol: f64) -> Option<usize> {
    let mut best = None;
    let mut bd = tol;
    for (i, &c) in centers.iter().enumerate() {
        let d = dist(c, p);
        if d <= bd {
            bd = d;
            best = Some(i);
        }
    }
    best
}

/// Candidate bbox: every point where three terms tie at the pointwise max,
/// padded by 20% plus a unit margin; bisector probes cover vertex-free plots.
fn auto_bbox(field: &TropicalField, consts: &[f64]) -> Rect {
    let m = field.terms.len();
    let mut cand: Vec<Pt> = Vec::new();
    let value = |i: usize, p: Pt| consts[i] + field.terms[i].p * p.0 + field.terms[i].q * p.1;
    let near_max = |p: Pt, v: f64| {
        let fmax = (0..m).map(|i| value(i, p)).fold(f64::NEG_INFINITY, f64::max);
        v >= fmax - 1e-6 * (1.0 + fmax.abs())
    };
    for i in 0..m {
        for j in i + 1..m {
            for l in j + 1..m {
                let a11 = field.terms[i].p - field.terms[j].p;
                let a12 = field.terms[i].q - field.terms[j].q;
                let a21 = field.terms[i].p - field.terms[l].p;
                let a22 = field.terms[i].q - field.terms[l].q;
                let det = a11 * a22 - a12 * a21;
                if det.abs() < 1e-12 {
                    continue;
                }
                let b1 = consts[j] - consts[i];
                let b2 = consts[l] - consts[i];
                let x = (b1 * a22 - a12 * b2) / det;
                let y = (a11 * b2 - b1 * a21) / det;
                if near_max((x, y), value(i, (x, y))) {
                    cand.push((x, y));
                }
            }
        }
    }
    if cand.is_empty() {
        // No triple maxima: probe along pairwise bisectors for stretches where
        // the pair is jointly dominant (single-soliton style plots).
        for i in 0..m {
            for j in i + 1..m {
                let a = field.terms[i].p - field.terms[j].p;
                let b = field.terms[i].q - field.terms[j].q;
                let d = consts[i] - consts[j];
                let n2 = a * a + b * b;
                if n2 < 1e-24 {
                    continue;
                }
                let base = (-d * a / n2, -d * b / n2);
                let u = (-b / n2.sqrt(), a / n2.sqrt());
                for s in [0.0, 1.0, -1.0, 5.0, -5.0, 25.0, -25.0] {
                    let p = (base.0 + s * u.0, base.1 + s * u.1);
                    let v = value(i, p);
                    if (v - value(j, p)).abs() <= 1e-6 * (1.0 + v.abs()) && near_max(p, v) {
                        cand.push(p);
                    }
                }
            }
        }
    }
    if cand.is_empty() {
        return Rect { xmin: -1.0, xmax: 1.0, ymin: -1.0, ymax: 1.0 };
    }
    let xmin = cand.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let xmax = cand.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let ymin = cand.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let ymax = cand.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let mx = 0.2 * (xmax - xmin) + 1.0;
    let my = 0.2 * (ymax - ymin) + 1.0;
    Rect { xmin: xmin - mx, xmax: xmax + mx, ymin: ymin - my, ymax: ymax + my }
}

pub fn contour_plot(
    field: &TropicalField,
    t0: f64,
    bbox_override: Option<Rect>,
) -> Result<ContourPlot, TropicalError> {
    let m = field.terms.len();
    let consts: Vec<f64> = field.terms.iter().map(|tm| tm.c + tm.r * t0).collect();
    for i in 0..m {
        for j in i + 1..m {
            if (field.terms[i].p - field.terms[j].p).abs() < 1e-9
                && (field.terms[i].q - field.terms[j].q).abs() < 1e-9
                && (consts[i] - consts[j]).abs() < 1e-9
            {
                return Err(TropicalError::DegenerateTie {
                    a: field.terms[i].basis.label(),
                    b: field.terms[j].basis.label(),
                });
            }
        }
    }
    let bbox = bbox_override.unwrap_or_else(|| auto_bbox(field, &consts));
    let diag = bbox.diag();
    let snap = 1e-9 * diag;
    let min_area = 1e-12 * diag * diag;
    let sliver = 1e-8 * diag;
    let cluster_tol = 1e-6 * diag;
    let boundary_tol = 1e-7 * diag;

    // Dominance cell per term: bbox clipped by every rival's half-plane.
    // Tags 0..4 mark bbox sides, 4+j marks the border against term j.
    let mut cells: Vec<Option<TaggedPolygon>> = Vec::with_capacity(m);
    for i in 0..m {
        let mut poly = TaggedPolygon::rect(bbox.xmin, bbox.xmax, bbox.ymin, bbox.ymax, [0, 1, 2, 3]);
        for j in 0..m {
            if i == j {
                continue;
            }
            let hp = HalfPlane {
                a: field.terms[i].p - field.terms[j].p,
                b: field.terms[i].q - field.terms[j].q,
                c: consts[i] - consts[j],
            };
            poly = poly.clip(&hp, 4 + j);
            if poly.pts.len() < 3 {
                break;
            }
        }
        let poly = poly.dedup(snap);
        cells.push(if poly.is_degenerate(min_area) { None } else { Some(poly) });
    }

    let mut regions = Vec::new();
    let mut region_of_term = vec![usize::MAX; m];
    for (i, c) in cells.iter().enumerate() {
        if let Some(poly) = c {
            region_of_term[i] = regions.len();
            regions.push(ContourRegion { basis: field.terms[i].basis, polygon: poly.pts.clone() });
        }
    }

    // Shared borders; the copy clipped out of the lexicographically smaller
    // term wins so the result does not depend on traversal order.
    let mut raw: std::collections::BTreeMap<(usize, usize), (Pt, Pt)> = Default::default();
    for (ti, c) in cells.iter().enumerate() {
        let Some(poly) = c else { continue };
        let len = poly.pts.len();
        for e in 0..len {
            let tag = poly.src[e];
            if tag < 4 {
                continue;
            }
            let tj = tag - 4;
            let a = poly.pts[e];
            let b = poly.pts[(e + 1) % len];
            if dist(a, b) < sliver {
                continue;
            }
            let key = (ti.min(tj), ti.max(tj));
            if ti < tj || !raw.contains_key(&key) {
                raw.insert(key, (a, b));
            }
        }
    }

    let mut edges = Vec::new();
    // A crossing of two line-solitons generically shows up as a short
    // phase-shift segment whose sides differ in two indices and whose length
    // depends only on κ; each one is collapsed to a single X vertex below.
    let mut shifts: Vec<(Pt, Pt, Subset, Subset)> = Vec::new();
    for (&(ti, tj), &(a, b)) in &raw {
        let bi = field.terms[ti].basis;
        let bj = field.terms[tj].basis;
        let di = bi.difference(bj);
        let dj = bj.difference(bi);
        if di.len() == 2 && dj.len() == 2 {
            shifts.push((a, b, bi, bj));
            continue;
        }
        if di.len() != 1 || dj.len() != 1 {
            return Err(TropicalError::AdjacentBasesDiffer { a: bi.label(), b: bj.label() });
        }
        let i = di.min_elem().unwrap();
        let j = dj.min_elem().unwrap();
        let (p0, p1) = if a.1 <= b.1 { (a, b) } else { (b, a) };
        edges.push(ContourEdge {
            bases: if bi < bj { (bi, bj) } else { (bj, bi) },
            stype: (i.min(j), i.max(j)),
            p0,
            p1,
            v0: None,
            v1: None,
        });
    }

    // Cluster interior endpoints into contour vertices.
    let mut pts = Vec::new();
    let mut owners = Vec::new();
    for (ei, e) in edges.iter().enumerate() {
        if !bbox.on_boundary(e.p0, boundary_tol) {
            pts.push(e.p0);
            owners.push((ei, 0));
        }
        if !bbox.on_boundary(e.p1, boundary_tol) {
            pts.push(e.p1);
            owners.push((ei, 1));
        }
    }
    let (centers, ids) = cluster_points(&pts, cluster_tol);
    // Collapse each phase-shift segment by merging its endpoint clusters.
    let mut merge = DisjointSets::new(centers.len());
    for &(a, b, bi, bj) in &shifts {
        let fail = || TropicalError::AdjacentBasesDiffer { a: bi.label(), b: bj.label() };
        if bbox.on_boundary(a, boundary_tol) || bbox.on_boundary(b, boundary_tol) {
            return Err(fail());
        }
        let ca = nearest_center(&centers, a, cluster_tol).ok_or_else(fail)?;
        let cb = nearest_center(&centers, b, cluster_tol).ok_or_else(fail)?;
        merge.union(ca, cb);
    }
    let mut vertex_of_cluster = vec![usize::MAX; centers.len()];
    let mut members: Vec<Vec<usize>> = Vec::new();
    for c in 0..centers.len() {
        let r = merge.find(c);
        if vertex_of_cluster[r] == usize::MAX {
            vertex_of_cluster[r] = members.len();
            members.push(Vec::new());
        }
        let v = vertex_of_cluster[r];
        vertex_of_cluster[c] = v;
        members[v].push(c);
    }
    let positions: Vec<Pt> = members
        .iter()
        .map(|cs| {
            let s = cs.iter().fold((0.0, 0.0), |acc, &c| (acc.0 + centers[c].0, acc.1 + centers[c].1));
            (s.0 / cs.len() as f64, s.1 / cs.len() as f64)
        })
        .collect();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); members.len()];
    for (w, &(ei, end)) in owners.iter().enumerate() {
        let v = vertex_of_cluster[ids[w]];
        incident[v].push((ei, end));
        if end == 0 {
            edges[ei].v0 = Some(v);
        } else {
            edges[ei].v1 = Some(v);
        }
    }

    let mut vertices = Vec::new();
    let mut generic = true;
    for (v, inc) in incident.iter().enumerate() {
        let class = classify_vertex(&edges, inc);
        if class == VertexClass::Degenerate {
            generic = false;
        }
        vertices.push(ContourVertex {
            pos: positions[v],
            class,
            edges: inc.iter().map(|&(e, _)| e).collect(),
        });
    }

    let _ = region_of_term;
    Ok(ContourPlot {
        k: field.k,
        n: field.n,
        time: t0,
        bbox,
        regions,
        edges,
        vertices,
        generic,
    })
}

fn classify_vertex(edges: &[ContourEdge], inc: &[(usize, usize)]) -> VertexClass {
    // Outgoing unit direction of each incident edge end.
    let dirs: Vec<Pt> = inc
        .iter()
        .map(|&(e, end)| {
            let (a, b) = if end == 0 {
                (edges[e].p0, edges[e].p1)
            } else {
                (edges[e].p1, edges[e].p0)
            };
            normalized_dir(a, b)
        })
        .collect();
    let types: Vec<(usize, usize)> = inc.iter().map(|&(e, _)| edges[e].stype).collect();
    match inc.len() {
        3 => {
            let mut idx: Vec<usize> = types.iter().flat_map(|&(i, j)| [i, j]).collect();
            idx.sort_unstable();
            idx.dedup();
            if idx.len() != 3 {
                return VertexClass::Degenerate;
            }
            let mut want: Vec<(usize, usize)> =
                vec![(idx[0], idx[1]), (idx[0], idx[2]), (idx[1], idx[2])];
            let mut have = types.clone();
            have.sort_unstable();
            want.sort_unstable();
            if have != want {
                return VertexClass::Degenerate;
            }
            let down = dirs.iter().filter(|d| d.1 < 0.0).count();
            match down {
                1 => VertexClass::TrivalentBlack,
                2 => VertexClass::TrivalentWhite,
                _ => VertexClass::Degenerate,
            }
        }
        4 => {
            // X-crossing: two anti-parallel pairs of equal type.
            let mut used = [false; 4];
            for a in 0..4 {
                if used[a] {
                    continue;
                }
                let mut found = None;
                for b in a + 1..4 {
                    if used[b]
                        || types[a] != types[b]
                        || cross(dirs[a], dirs[b]).abs() > 1e-6
                        || dot(dirs[a], dirs[b]) > 0.0
                    {
                        continue;
                    }
                    found = Some(b);
                    break;
                }
                match found {
                    Some(b) => {
                        used[a] = true;
                        used[b] = true;
                    }
                    None => return VertexClass::Degenerate,
                }
            }
            VertexClass::XCrossing
        }
        _ => VertexClass::Degenerate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::validate_kappa;

    fn one_soliton_field() -> TropicalField {
        let p = GrassmannPoint::from_rows(1, 2, vec![vec![1.0, 1.0]]).unwrap();
        let kappa = validate_kappa(&[-1.0, 1.0], 1).unwrap();
        tropical_field(&p, &kappa).unwrap()
    }

    #[test]
    fn one_soliton_terms() {
        let f = one_soliton_field();
        assert_eq!(f.terms().len(), 2);
        // ℓ₁ = −x+y−t, ℓ₂ = x+y+t (K=1, lnΔ=0)
        let t1 = &f.terms()[0];
        let t2 = &f.terms()[1];
        assert_eq!(t1.basis.label(), "1");
        assert!((t1.c, t1.p, t1.q, t1.r) == (0.0, -1.0, 1.0, -1.0));
        assert!((t2.c, t2.p, t2.q, t2.r) == (0.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn one_soliton_contour_at_two_times() {
        let f = one_soliton_field();
        for (t, want_x) in [(0.0, 0.0), (1.0, -1.0)] {
            let cp = contour_plot(&f, t, None).unwrap();
            assert_eq!(cp.regions.len(), 2);
            assert_eq!(cp.edges.len(), 1);
            assert!(cp.vertices.is_empty());
            assert!(cp.generic);
            let e = &cp.edges[0];
            assert_eq!(e.stype, (1, 2));
            assert!(e.is_unbounded());
            assert!((e.p0.0 - want_x).abs() < 1e-9, "t={t}: {:?}", e.p0);
            assert!((e.p1.0 - want_x).abs() < 1e-9);
            // left region dominated by E₁
            let left = cp.region_of_point((cp.bbox.xmin + 0.1, 0.0)).unwrap();
            assert_eq!(cp.regions[left].basis.label(), "1");
        }
    }

    #[test]
    fn tp_gr24_t_negative_structure() {
        let p = GrassmannPoint::from_rows(
            2,
            4,
            vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]],
        )
        .unwrap();
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let f = tropical_field(&p, &kappa).unwrap();
        let cp = contour_plot(&f, -8.0, None).unwrap();
        assert!(cp.generic);
        assert_eq!(cp.regions.len(), 5);
        // bounded square around the {1,3} region: 4 corners, 4 sides, 4 rays
        assert_eq!(cp.vertices.len(), 4);
        assert_eq!(cp.edges.len(), 8);
        let blacks = cp
            .vertices
            .iter()
            .filter(|v| v.class == VertexClass::TrivalentBlack)
            .count();
        assert_eq!(blacks, 2);
        let mut ray_kinds: Vec<((usize, usize), bool)> =
            cp.rays().iter().map(|r| (cp.edges[r.edge].stype, r.upward)).collect();
        ray_kinds.sort_unstable();
        assert_eq!(
            ray_kinds,
            vec![((1, 3), false), ((1, 3), true), ((2, 4), false), ((2, 4), true)]
        );
        // every edge's bases differ by one index
        for e in &cp.edges {
            assert_eq!(e.bases.0.difference(e.bases.1).len(), 1);
        }
        // the {2,4} basis is the hidden one at t ≪ 0
        assert!(cp.region_index(Subset::from_elems(&[2, 4])).is_none());
        assert!(cp.region_index(Subset::from_elems(&[1, 3])).is_some());
    }

    #[test]
    fn slope_and_offset_identities() {
        let p = GrassmannPoint::from_rows(
            2,
            4,
            vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]],
        )
        .unwrap();
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let f = tropical_field(&p, &kappa).unwrap();
        let cp = contour_plot(&f, -2.0, None).unwrap();
        for e in &cp.edges {
            let d = normalized_dir(e.p0, e.p1);
            let slope = kappa.value(e.stype.0) + kappa.value(e.stype.1);
            assert!((d.0 + slope * d.1).abs() < 1e-9, "type {:?}", e.stype);
            // basis containing the smaller type index goes on the I side
            let (bi, bj) = if e.bases.0.contains(e.stype.0) {
                (e.bases.0, e.bases.1)
            } else {
                (e.bases.1, e.bases.0)
            };
            let off = f.soliton_offset(bi, bj);
            for pt in [e.p0, e.p1] {
                let lhs = pt.0
                    + slope * pt.1
                    + (kappa.value(e.stype.0).powi(2)
                        + kappa.value(e.stype.0) * kappa.value(e.stype.1)
                        + kappa.value(e.stype.1).powi(2))
                        * cp.time;
                assert!((lhs - off).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn balancing_is_identity() {
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let (x, y) = balancing_residual(1, 2, 4, &kappa);
        assert!(x.abs() < 1e-12 && y.abs() < 1e-12);
    }
}
