//! From contour plot to labeled soliton graph: contour vertices become
//! colored internal vertices, rays become boundary legs labeled by the
//! derangement, and the face labeling is recomputed combinatorially so it can
//! be checked against the geometric region labels.

use thiserror::Error;

use crate::asymptotics::{read_derangement, AsymptoticsError};
use crate::plabic::{FaceLabeling, GeneralizedPlabicGraph, GraphScratch, PlabicError, VertexKind};
use crate::positroid::Derangement;
use crate::subset::Subset;
use crate::tropical::{contour_plot, ContourPlot, TropicalError, TropicalField, VertexClass};

#[derive(Debug, Error)]
pub enum SolitonError {
    #[error("contour plot is not generic; no soliton graph")]
    NonGeneric,
    #[error(transparent)]
    Rays(#[from] AsymptoticsError),
    #[error(transparent)]
    Graph(#[from] PlabicError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error("graph did not stabilize by t = {last_t}")]
    NoStabilization { last_t: f64 },
}

/// A generalized plabic graph read off a generic contour plot, together with
/// both label sets: the combinatorial one from trips and the geometric one
/// from dominant exponentials.
#[derive(Clone, Debug)]
pub struct SolitonGraph {
    pub graph: GeneralizedPlabicGraph,
    pub labeling: FaceLabeling,
    /// π read from the ray types.
    pub derangement: Derangement,
    /// Graph edge index → contour edge index (the identity by construction).
    pub edge_contour: Vec<usize>,
    /// Dominant bases of the unbounded regions, counterclockwise; entry `i`
    /// sits between boundary vertices `i` and `i+1`, matching the arc
    /// indexing of [`FaceLabeling::unbounded_labels_ccw`].
    pub unbounded_geometric: Vec<Subset>,
    /// Dominant bases of the bounded regions, lexicographic.
    pub bounded_geometric: Vec<Subset>,
}

pub fn soliton_graph(cp: &ContourPlot) -> Result<SolitonGraph, SolitonError> {
    if !cp.generic {
        return Err(SolitonError::NonGeneric);
    }
    let derangement = read_derangement(cp)?;

    let mut s = GraphScratch::new();
    let internal: Vec<usize> = cp
        .vertices
        .iter()
        .map(|v| {
            let kind = match v.class {
                VertexClass::TrivalentBlack => VertexKind::Black,
                VertexClass::TrivalentWhite => VertexKind::White,
                VertexClass::XCrossing => VertexKind::Crossing,
                VertexClass::Degenerate => unreachable!("generic plot"),
            };
            s.add_vertex(kind, v.pos)
        })
        .collect();
    // Eligible boundary legs, one per ray; labels follow the ray type.
    let mut legs: Vec<usize> = Vec::new();
    for e in &cp.edges {
        let lo = match e.v0 {
            Some(v) => internal[v],
            None => {
                let leg = s.add_vertex(VertexKind::Boundary(e.stype.0), e.p0);
                legs.push(leg);
                leg
            }
        };
        let hi = match e.v1 {
            Some(v) => internal[v],
            None => {
                let leg = s.add_vertex(VertexKind::Boundary(e.stype.1), e.p1);
                legs.push(leg);
                leg
            }
        };
        s.add_edge(lo, hi);
    }
    s.sort_rotations_by_position();
    legs.sort_by(|&a, &b| {
        let pa = cp.bbox.perimeter_pos(s.position(a));
        let pb = cp.bbox.perimeter_pos(s.position(b));
        pa.total_cmp(&pb)
    });
    let graph = s.finish(legs)?;
    let labeling = graph.face_labeling()?;

    let unbounded_geometric: Vec<Subset> = cp
        .unbounded_regions_ccw()
        .iter()
        .map(|&r| cp.regions[r].basis)
        .collect();
    let unbounded_set: std::collections::BTreeSet<Subset> =
        unbounded_geometric.iter().copied().collect();
    let bounded_geometric: Vec<Subset> = cp
        .regions
        .iter()
        .map(|r| r.basis)
        .filter(|b| !unbounded_set.contains(b))
        .collect();
    let edge_contour = (0..cp.edges.len()).collect();
    Ok(SolitonGraph {
        graph,
        labeling,
        derangement,
        edge_contour,
        unbounded_geometric,
        bounded_geometric,
    })
}

/// A contour plot whose soliton graph no longer changes as t decreases.
#[derive(Clone, Debug)]
pub struct StabilizedPlot {
    pub t: f64,
    pub plot: ContourPlot,
    pub graph: SolitonGraph,
}

/// Double |t| from 1 until two consecutive plots give label-isomorphic
/// graphs with the same derangement; |t| is capped at 2^20.
pub fn stabilized_t_neg(field: &TropicalField) -> Result<StabilizedPlot, SolitonError> {
    let cap = -(2f64.powi(20));
    let mut t = -1.0;
    let mut prev: Option<SolitonGraph> = None;
    while t >= cap {
        let attempt = contour_plot(field, t, None)
            .map_err(SolitonError::from)
            .and_then(|cp| soliton_graph(&cp).map(|sg| (cp, sg)));
        match attempt {
            Ok((cp, sg)) => {
                if let Some(psg) = &prev {
                    if psg.derangement == sg.derangement
                        && GeneralizedPlabicGraph::label_isomorphism(&psg.graph, &sg.graph)
                            .is_some()
                    {
                        return Ok(StabilizedPlot { t, plot: cp, graph: sg });
                    }
                }
                prev = Some(sg);
            }
            // Slope ties do not depend on t; everything else might.
            Err(SolitonError::Tropical(e @ TropicalError::DegenerateTie { .. })) => {
                return Err(SolitonError::Tropical(e));
            }
            Err(_) => prev = None,
        }
        t *= 2.0;
    }
    Err(SolitonError::NoStabilization { last_t: t / 2.0 })
}
