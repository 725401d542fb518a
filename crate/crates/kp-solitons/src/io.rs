//! JSON and text forms of the pipeline's artifacts.
//!
//! Writers round every float to 12 significant digits and keep a fixed key
//! order, so identical inputs produce byte-identical files. Schemas:
//!
//! * matrix — `{"k":…,"n":…,"rows":[[…],…]}`
//! * Plücker map — `{"12":…, "13":…, …}`, subsets as concatenated indices
//! * necklace — `[[1,2,5,7],…]`; derangement — `[6,7,1,2,8,3,9,4,5]`
//! * graph — vertices (id, color, optional boundary label/position),
//!   edge list, ccw rotation lists, boundary order, crossing pairings
//! * plot — `{"time","bbox","regions":[{"basis","polygon"}],`
//!   `"edges":[{"type","p0","p1","ray"?}],"vertices":[{"pos","class"}]}`;
//!   `"ray"` marks which endpoints exit the box instead of ending at a vertex
//! * triangulation — `{"n":…,"diagonals":[[i,j],…]}`

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::asymptotics::Asymptotics;
use crate::geometry::{dist, midpoint, sub, Pt};
use crate::grassmann::{GrassmannError, GrassmannPoint};
use crate::inverse::{LogPlueckerSystem, LogSolution, ReconstructionReport, Tier};
use crate::numeric::round_sig;
use crate::plabic::{GeneralizedPlabicGraph, PlabicError, VertexKind};
use crate::positroid::{Derangement, GrassmannNecklace};
use crate::subset::Subset;
use crate::triangulation::{Triangulation, TriangulationError};
use crate::tropical::{
    ContourEdge, ContourPlot, ContourRegion, ContourVertex, Rect, VertexClass,
};
use crate::verify::VerifyReport;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad artifact: {0}")]
    Bad(String),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
    #[error(transparent)]
    Plabic(#[from] PlabicError),
    #[error(transparent)]
    Triangulation(#[from] TriangulationError),
}

fn r12(x: f64) -> f64 {
    round_sig(x, 12)
}

fn rp(p: Pt) -> [f64; 2] {
    [r12(p.0), r12(p.1)]
}

/// Pretty JSON plus trailing newline; field order is declaration order.
pub fn to_json_string<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("artifact structs serialize");
    s.push('\n');
    s
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<(), IoError> {
    fs::write(path, to_json_string(v))?;
    Ok(())
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, IoError> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

// ---------------------------------------------------------------- matrix

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub k: usize,
    pub n: usize,
    pub rows: Vec<Vec<f64>>,
}

pub fn matrix_to_json(point: &GrassmannPoint) -> MatrixJson {
    MatrixJson {
        k: point.k(),
        n: point.n(),
        rows: point.rows_f64().iter().map(|r| r.iter().map(|&x| r12(x)).collect()).collect(),
    }
}

pub fn point_from_matrix_json(m: &MatrixJson) -> Result<GrassmannPoint, IoError> {
    Ok(GrassmannPoint::from_rows(m.k, m.n, m.rows.clone())?)
}

/// All Plücker coordinates keyed by subset label; sorted keys keep the
/// output stable.
pub fn pluecker_to_json(point: &GrassmannPoint) -> std::collections::BTreeMap<String, f64> {
    Subset::k_subsets(point.n(), point.k())
        .into_iter()
        .map(|s| (s.label(), r12(point.pluecker_f64(s))))
        .collect()
}

// ------------------------------------------------- necklace / derangement

pub fn necklace_to_json(neck: &GrassmannNecklace) -> Vec<Vec<usize>> {
    neck.terms().iter().map(|s| s.elems()).collect()
}

pub fn derangement_to_json(pi: &Derangement) -> Vec<usize> {
    pi.images().to_vec()
}

// ----------------------------------------------------------------- graph

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphVertexJson {
    pub id: usize,
    pub color: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pos: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<GraphVertexJson>,
    pub edges: Vec<(usize, usize)>,
    /// Counterclockwise edge ids at each vertex.
    pub rotations: Vec<Vec<usize>>,
    pub boundary_ccw: Vec<usize>,
    /// Opposite-edge pairings at each crossing vertex, in rotation order.
    pub crossings: Vec<[[usize; 2]; 2]>,
}

pub fn graph_to_json(g: &GeneralizedPlabicGraph) -> GraphJson {
    let vertices = g
        .kinds()
        .iter()
        .enumerate()
        .map(|(id, k)| {
            let color = match k {
                VertexKind::Black => "black",
                VertexKind::White => "white",
                VertexKind::Crossing => "crossing",
                VertexKind::Boundary(_) => "boundary",
            };
            GraphVertexJson {
                id,
                color: color.into(),
                label: k.boundary_label(),
                pos: g.positions().map(|p| rp(p[id])),
            }
        })
        .collect();
    let crossings = g
        .kinds()
        .iter()
        .enumerate()
        .filter(|(_, k)| matches!(k, VertexKind::Crossing))
        .map(|(v, _)| {
            let r = g.rotation(v);
            [[r[0], r[2]], [r[1], r[3]]]
        })
        .collect();
    GraphJson {
        vertices,
        edges: g.edges().to_vec(),
        rotations: (0..g.vertex_count()).map(|v| g.rotation(v).to_vec()).collect(),
        boundary_ccw: g.boundary_ccw().to_vec(),
        crossings,
    }
}

pub fn graph_from_json(gj: &GraphJson) -> Result<GeneralizedPlabicGraph, IoError> {
    let mut kinds = Vec::new();
    for v in &gj.vertices {
        let kind = match (v.color.as_str(), v.label) {
            ("black", _) => VertexKind::Black,
            ("white", _) => VertexKind::White,
            ("crossing", _) => VertexKind::Crossing,
            ("boundary", Some(l)) => VertexKind::Boundary(l),
            ("boundary", None) => {
                return Err(IoError::Bad(format!("boundary vertex {} has no label", v.id)))
            }
            (c, _) => return Err(IoError::Bad(format!("unknown vertex color {:?}", c))),
        };
        kinds.push(kind);
    }
    let g = GeneralizedPlabicGraph::new(
        kinds,
        gj.edges.clone(),
        gj.rotations.clone(),
        gj.boundary_ccw.clone(),
    )?;
    if gj.vertices.iter().all(|v| v.pos.is_some()) && !gj.vertices.is_empty() {
        let pos = gj.vertices.iter().map(|v| { let p = v.pos.unwrap(); (p[0], p[1]) }).collect();
        Ok(g.with_positions(pos))
    } else {
        Ok(g)
    }
}

// ------------------------------------------------------------------ plot

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BboxJson {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlotRegionJson {
    pub basis: String,
    pub polygon: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlotEdgeJson {
    #[serde(rename = "type")]
    pub stype: (usize, usize),
    pub p0: [f64; 2],
    pub p1: [f64; 2],
    /// "0", "1" or "01": which endpoints leave the box along a ray.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ray: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlotVertexJson {
    pub pos: [f64; 2],
    pub class: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlotJson {
    pub time: f64,
    pub bbox: BboxJson,
    pub regions: Vec<PlotRegionJson>,
    pub edges: Vec<PlotEdgeJson>,
    pub vertices: Vec<PlotVertexJson>,
}

pub fn plot_to_json(plot: &ContourPlot) -> PlotJson {
    PlotJson {
        time: r12(plot.time),
        bbox: BboxJson {
            xmin: r12(plot.bbox.xmin),
            xmax: r12(plot.bbox.xmax),
            ymin: r12(plot.bbox.ymin),
            ymax: r12(plot.bbox.ymax),
        },
        regions: plot
            .regions
            .iter()
            .map(|r| PlotRegionJson {
                basis: r.basis.label(),
                polygon: r.polygon.iter().map(|&p| rp(p)).collect(),
            })
            .collect(),
        edges: plot
            .edges
            .iter()
            .map(|e| {
                let mut ray = String::new();
                if e.v0.is_none() {
                    ray.push('0');
                }
                if e.v1.is_none() {
                    ray.push('1');
                }
                PlotEdgeJson {
                    stype: e.stype,
                    p0: rp(e.p0),
                    p1: rp(e.p1),
                    ray: if ray.is_empty() { None } else { Some(ray) },
                }
            })
            .collect(),
        vertices: plot
            .vertices
            .iter()
            .map(|v| PlotVertexJson {
                pos: rp(v.pos),
                class: match v.class {
                    VertexClass::TrivalentBlack => "black",
                    VertexClass::TrivalentWhite => "white",
                    VertexClass::XCrossing => "x",
                    VertexClass::Degenerate => "degenerate",
                }
                .into(),
            })
            .collect(),
    }
}

/// Rebuilds the engine's plot form. Vertex incidences come from endpoint
/// positions; edge adjacencies (which regions an edge separates) come from
/// point-in-polygon probes just off the edge midpoint.
pub fn plot_from_json(pj: &PlotJson) -> Result<ContourPlot, IoError> {
    if pj.edges.is_empty() {
        return Err(IoError::Bad("plot has no edges".into()));
    }
    let n = pj
        .edges
        .iter()
        .flat_map(|e| [e.stype.0, e.stype.1])
        .max()
        .expect("edges nonempty");
    let bbox =
        Rect { xmin: pj.bbox.xmin, xmax: pj.bbox.xmax, ymin: pj.bbox.ymin, ymax: pj.bbox.ymax };
    let mut regions = Vec::new();
    for r in &pj.regions {
        let basis = Subset::parse_label(&r.basis, n)
            .ok_or_else(|| IoError::Bad(format!("bad basis label {:?}", r.basis)))?;
        regions.push(ContourRegion {
            basis,
            polygon: r.polygon.iter().map(|p| (p[0], p[1])).collect(),
        });
    }
    let k = regions
        .first()
        .map(|r| r.basis.len())
        .ok_or_else(|| IoError::Bad("plot has no regions".into()))?;
    let vclasses: Vec<VertexClass> = pj
        .vertices
        .iter()
        .map(|v| match v.class.as_str() {
            "black" => Ok(VertexClass::TrivalentBlack),
            "white" => Ok(VertexClass::TrivalentWhite),
            "x" => Ok(VertexClass::XCrossing),
            "degenerate" => Ok(VertexClass::Degenerate),
            c => Err(IoError::Bad(format!("unknown vertex class {:?}", c))),
        })
        .collect::<Result<_, _>>()?;
    let vpos: Vec<Pt> = pj.vertices.iter().map(|v| (v.pos[0], v.pos[1])).collect();
    let tol = 1e-6 * bbox.diag().max(1.0);
    let find_vertex = |p: Pt| -> Option<usize> {
        let mut best = None;
        let mut bd = tol;
        for (i, &q) in vpos.iter().enumerate() {
            let d = dist(p, q);
            if d < bd {
                bd = d;
                best = Some(i);
            }
        }
        best
    };
    // A probe plot: regions only, for the adjacency lookups below.
    let probe = ContourPlot {
        k,
        n,
        time: pj.time,
        bbox,
        regions: regions.clone(),
        edges: Vec::new(),
        vertices: Vec::new(),
        generic: true,
    };
    let mut edges = Vec::new();
    for (ei, e) in pj.edges.iter().enumerate() {
        let p0 = (e.p0[0], e.p0[1]);
        let p1 = (e.p1[0], e.p1[1]);
        let ray = e.ray.as_deref().unwrap_or("");
        let v0 = if ray.contains('0') { None } else { find_vertex(p0) };
        let v1 = if ray.contains('1') { None } else { find_vertex(p1) };
        if (v0.is_none() && !ray.contains('0')) || (v1.is_none() && !ray.contains('1')) {
            return Err(IoError::Bad(format!("edge {} endpoint matches no vertex", ei)));
        }
        let m = midpoint(p0, p1);
        let d = sub(p1, p0);
        let len = dist(p0, p1).max(1e-300);
        let nrm = (-d.1 / len, d.0 / len);
        let mut found = None;
        for step in [1e-7, 1e-5, 1e-3] {
            let h = step * bbox.diag().max(1.0);
            let a = probe.region_of_point((m.0 + h * nrm.0, m.1 + h * nrm.1));
            let b = probe.region_of_point((m.0 - h * nrm.0, m.1 - h * nrm.1));
            if let (Some(a), Some(b)) = (a, b) {
                if a != b {
                    found = Some((a, b));
                    break;
                }
            }
        }
        let Some((ra, rb)) = found else {
            return Err(IoError::Bad(format!("edge {} separates no two regions", ei)));
        };
        let (ba, bb) = (regions[ra].basis, regions[rb].basis);
        let (i, j) = e.stype;
        let bases = if ba.contains(i) && !ba.contains(j) {
            (ba, bb)
        } else {
            (bb, ba)
        };
        if !(bases.0.contains(i) && bases.1.contains(j))
            || bases.0.difference(bases.1) != Subset::from_elems(&[i])
        {
            return Err(IoError::Bad(format!(
                "edge {} of type [{},{}] does not separate matching labels",
                ei, i, j
            )));
        }
        edges.push(ContourEdge { bases, stype: e.stype, p0, p1, v0, v1 });
    }
    let mut vertices: Vec<ContourVertex> = vclasses
        .iter()
        .zip(&vpos)
        .map(|(&class, &pos)| ContourVertex { pos, class, edges: Vec::new() })
        .collect();
    for (ei, e) in edges.iter().enumerate() {
        for v in [e.v0, e.v1].into_iter().flatten() {
            vertices[v].edges.push(ei);
        }
    }
    let generic = !vclasses.iter().any(|c| matches!(c, VertexClass::Degenerate));
    Ok(ContourPlot { k, n, time: pj.time, bbox, regions, edges, vertices, generic })
}

// --------------------------------------------------------- triangulation

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub n: usize,
    pub diagonals: Vec<(usize, usize)>,
}

pub fn triangulation_to_json(t: &Triangulation) -> TriangulationJson {
    TriangulationJson { n: t.n(), diagonals: t.diagonals().to_vec() }
}

pub fn triangulation_from_json(tj: &TriangulationJson) -> Result<Triangulation, IoError> {
    Ok(Triangulation::new(tj.n, tj.diagonals.clone())?)
}

// --------------------------------------------------------------- reports

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReportJson {
    pub k: usize,
    pub n: usize,
    pub time: f64,
    pub all_passed: bool,
    pub checks: Vec<CheckJson>,
}

pub fn verify_report_json(rep: &VerifyReport) -> VerifyReportJson {
    VerifyReportJson {
        k: rep.k,
        n: rep.n,
        time: r12(rep.time),
        all_passed: rep.all_passed(),
        checks: rep
            .checks
            .iter()
            .map(|c| CheckJson {
                name: c.name.to_string(),
                passed: c.passed,
                detail: c.detail.clone(),
            })
            .collect(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InvertReportJson {
    pub tier: String,
    pub time: f64,
    /// Weighted residual of the log-ratio least squares.
    pub log_residual: f64,
    /// Worst cycle sum seen when assembling the ratio system.
    pub worst_cycle: f64,
    /// RMS of the cell-fit residuals (0 for the chamber tier).
    pub fit_rms: f64,
    /// Worst observed-vs-reconstructed log-ratio deviation.
    pub log_misfit: f64,
    pub matrix: MatrixJson,
}

pub fn invert_report_json(
    sys: &LogPlueckerSystem,
    sol: &LogSolution,
    rep: &ReconstructionReport,
) -> InvertReportJson {
    InvertReportJson {
        tier: match rep.tier {
            Tier::Chamber => "chamber".into(),
            Tier::CellFit => "cell-fit".into(),
        },
        time: r12(rep.time),
        log_residual: r12(sol.residual),
        worst_cycle: r12(sys.worst_cycle),
        fit_rms: r12(rep.fit_rms),
        log_misfit: r12(rep.log_misfit),
        matrix: matrix_to_json(&rep.point),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AsymptoticsJson {
    pub pi: Vec<usize>,
    pub x_neg_label: String,
    pub top: Vec<(usize, usize)>,
    pub bottom: Vec<(usize, usize)>,
    pub unbounded_ccw: Vec<String>,
}

pub fn asymptotics_json(pi: &Derangement, a: &Asymptotics) -> AsymptoticsJson {
    AsymptoticsJson {
        pi: pi.images().to_vec(),
        x_neg_label: a.x_neg_label.label(),
        top: a.top.clone(),
        bottom: a.bottom.clone(),
        unbounded_ccw: a.unbounded_ccw.iter().map(|s| s.label()).collect(),
    }
}
