//! Small planar toolkit backing the contour extraction: convex polygon
//! clipping against half-planes (with provenance tags), point clustering, and
//! segment utilities.

pub type Pt = (f64, f64);

pub fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

pub fn dot(a: Pt, b: Pt) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

pub fn cross(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

pub fn norm(a: Pt) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: Pt, b: Pt) -> f64 {
    norm(sub(a, b))
}

pub fn midpoint(a: Pt, b: Pt) -> Pt {
    ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0)
}

/// Unit vector from `a` toward `b`; (0,0) if the points coincide.
pub fn direction(a: Pt, b: Pt) -> Pt {
    let d = sub(b, a);
    let n = norm(d);
    if n == 0.0 {
        (0.0, 0.0)
    } else {
        (d.0 / n, d.1 / n)
    }
}

/// Distance from `p` to the segment [a, b].
pub fn point_segment_dist(p: Pt, a: Pt, b: Pt) -> f64 {
    let ab = sub(b, a);
    let len2 = dot(ab, ab);
    if len2 == 0.0 {
        return dist(p, a);
    }
    let t = (dot(sub(p, a), ab) / len2).clamp(0.0, 1.0);
    dist(p, (a.0 + t * ab.0, a.1 + t * ab.1))
}

/// Signed area (positive for counterclockwise vertex order).
pub fn polygon_area(pts: &[Pt]) -> f64 {
    let mut s = 0.0;
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        s += cross(a, b);
    }
    s / 2.0
}

pub fn polygon_centroid(pts: &[Pt]) -> Pt {
    let a = polygon_area(pts);
    if a.abs() < 1e-300 {
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        return (sx / n, sy / n);
    }
    let mut cx = 0.0;
    let mut cy = 0.0;
    for i in 0..pts.len() {
        let p = pts[i];
        let q = pts[(i + 1) % pts.len()];
        let w = cross(p, q);
        cx += (p.0 + q.0) * w;
        cy += (p.1 + q.1) * w;
    }
    (cx / (6.0 * a), cy / (6.0 * a))
}

/// Point-in-convex-polygon test for counterclockwise polygons; boundary points
/// within `tol` count as inside.
pub fn convex_contains(pts: &[Pt], p: Pt, tol: f64) -> bool {
    for i in 0..pts.len() {
        let a = pts[i];
        let b = pts[(i + 1) % pts.len()];
        let edge = sub(b, a);
        let n = norm(edge).max(1e-300);
        if cross(edge, sub(p, a)) / n < -tol {
            return false;
        }
    }
    true
}

/// Closed half-plane a·x + b·y + c ≥ 0.
#[derive(Clone, Copy, Debug)]
pub struct HalfPlane {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl HalfPlane {
    pub fn eval(&self, p: Pt) -> f64 {
        self.a * p.0 + self.b * p.1 + self.c
    }
}

/// Convex polygon whose edge from `pts[i]` to `pts[i+1]` lies on the
/// constraint identified by `src[i]`. Tags survive clipping, which is how a
/// clipped cell remembers which competitor produced each of its borders.
#[derive(Clone, Debug)]
pub struct TaggedPolygon {
    pub pts: Vec<Pt>,
    pub src: Vec<usize>,
}

impl TaggedPolygon {
    pub fn rect(xmin: f64, xmax: f64, ymin: f64, ymax: f64, tags: [usize; 4]) -> TaggedPolygon {
        TaggedPolygon {
            pts: vec![(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)],
            src: tags.to_vec(),
        }
    }

    pub fn is_degenerate(&self, min_area: f64) -> bool {
        self.pts.len() < 3 || polygon_area(&self.pts).abs() < min_area
    }

    /// Sutherland–Hodgman clip against one half-plane. New edges created on
    /// the clip line get tag `tag`; surviving edges keep theirs.
    pub fn clip(&self, hp: &HalfPlane, tag: usize) -> TaggedPolygon {
        let mut pts = Vec::new();
        let mut src = Vec::new();
        let m = self.pts.len();
        for i in 0..m {
            let u = self.pts[i];
            let v = self.pts[(i + 1) % m];
            let t = self.src[i];
            let fu = hp.eval(u);
            let fv = hp.eval(v);
            if fu >= 0.0 {
                pts.push(u);
                src.push(t);
            }
            if (fu >= 0.0) != (fv >= 0.0) {
                let s = fu / (fu - fv);
                let w = (u.0 + s * (v.0 - u.0), u.1 + s * (v.1 - u.1));
                if fu >= 0.0 {
                    // leaving the half-plane: boundary continues along the clip line
                    pts.push(w);
                    src.push(tag);
                } else {
                    pts.push(w);
                    src.push(t);
                }
            }
        }
        TaggedPolygon { pts, src }
    }

    /// Merge consecutive vertices closer than `tol`; drops the zero-length
    /// edge and keeps the tag of the surviving predecessor edge.
    pub fn dedup(&self, tol: f64) -> TaggedPolygon {
        let mut pts: Vec<Pt> = Vec::new();
        let mut src: Vec<usize> = Vec::new();
        for (i, &p) in self.pts.iter().enumerate() {
            if let Some(&last) = pts.last() {
                if dist(last, p) < tol {
                    // replace the tag of the edge leaving the merged vertex
                    *src.last_mut().unwrap() = self.src[i];
                    continue;
                }
            }
            pts.push(p);
            src.push(self.src[i]);
        }
        while pts.len() >= 2 && dist(pts[0], *pts.last().unwrap()) < tol {
            pts.pop();
            src.pop();
        }
        TaggedPolygon { pts, src }
    }
}

/// Union-find over 0..n.
pub struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> DisjointSets {
        DisjointSets { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let r = self.find(self.parent[x]);
            self.parent[x] = r;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Cluster points within `tol` of each other (transitively). Returns cluster
/// centroids plus the cluster id of every input point; ids are assigned in
/// first-appearance order, so the output is deterministic.
pub fn cluster_points(pts: &[Pt], tol: f64) -> (Vec<Pt>, Vec<usize>) {
    let n = pts.len();
    let mut sets = DisjointSets::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if dist(pts[i], pts[j]) <= tol {
                sets.union(i, j);
            }
        }
    }
    let mut cluster_of_root = std::collections::HashMap::new();
    let mut ids = Vec::with_capacity(n);
    let mut members: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let r = sets.find(i);
        let next = members.len();
        let id = *cluster_of_root.entry(r).or_insert(next);
        if id == members.len() {
            members.push(Vec::new());
        }
        members[id].push(i);
        ids.push(id);
    }
    let centers = members
        .iter()
        .map(|m| {
            let sx: f64 = m.iter().map(|&i| pts[i].0).sum();
            let sy: f64 = m.iter().map(|&i| pts[i].1).sum();
            (sx / m.len() as f64, sy / m.len() as f64)
        })
        .collect();
    (centers, ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clip_square_by_diagonal() {
        let sq = TaggedPolygon::rect(0.0, 1.0, 0.0, 1.0, [0, 1, 2, 3]);
        // keep x + y <= 1, i.e. -x - y + 1 >= 0
        let hp = HalfPlane { a: -1.0, b: -1.0, c: 1.0 };
        let cut = sq.clip(&hp, 9).dedup(1e-12);
        assert_eq!(cut.pts.len(), 3);
        assert!((polygon_area(&cut.pts) - 0.5).abs() < 1e-12);
        assert_eq!(cut.src.iter().filter(|&&t| t == 9).count(), 1);
    }

    #[test]
    fn clip_keeps_tags_of_survivors() {
        let sq = TaggedPolygon::rect(0.0, 2.0, 0.0, 2.0, [0, 1, 2, 3]);
        let hp = HalfPlane { a: 1.0, b: 0.0, c: -1.0 }; // x >= 1
        let cut = sq.clip(&hp, 7).dedup(1e-12);
        assert_eq!(cut.pts.len(), 4);
        assert!((polygon_area(&cut.pts) - 2.0).abs() < 1e-12);
        // bottom edge keeps tag 0, right keeps 1, top keeps 2, new left edge tagged 7
        let mut tags = cut.src.clone();
        tags.sort_unstable();
        assert_eq!(tags, vec![0, 1, 2, 7]);
    }

    #[test]
    fn empty_intersection_vanishes() {
        let sq = TaggedPolygon::rect(0.0, 1.0, 0.0, 1.0, [0, 1, 2, 3]);
        let hp = HalfPlane { a: 1.0, b: 0.0, c: -5.0 }; // x >= 5
        let cut = sq.clip(&hp, 9);
        assert!(cut.is_degenerate(1e-12));
    }

    #[test]
    fn clustering_is_transitive_and_ordered() {
        let pts = vec![(0.0, 0.0), (5.0, 0.0), (0.6, 0.0), (0.3, 0.0), (5.0, 0.1)];
        let (centers, ids) = cluster_points(&pts, 0.4);
        assert_eq!(ids, vec![0, 1, 0, 0, 1]);
        assert_eq!(centers.len(), 2);
        assert!((centers[0].0 - 0.3).abs() < 1e-12);
    }

    #[test]
    fn segment_distance() {
        assert!((point_segment_dist((0.0, 1.0), (-1.0, 0.0), (1.0, 0.0)) - 1.0).abs() < 1e-12);
        assert!((point_segment_dist((3.0, 4.0), (-1.0, 0.0), (1.0, 0.0)) - (4.0f64 + 16.0).sqrt()).abs() < 1e-12);
    }
}
