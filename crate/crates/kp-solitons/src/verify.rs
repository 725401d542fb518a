//! Cross-validation: one matrix in, a pass/fail table out.
//!
//! The checks tie the numeric contour plot back to the combinatorics of
//! the cell the point belongs to — derangement, necklace, trips of the
//! pipe-dream graph — then audit the plot's geometry edge by edge, and
//! close the loop by re-deriving the point from its own plot.

use thiserror::Error;

use crate::asymptotics::{necklace_check, read_derangement};
use crate::geometry::{cross, norm, sub};
use crate::grassmann::{GrassmannPoint, KappaParams, Positivity};
use crate::inverse::invert_plot;
use crate::le_plabic::build_g_minus;
use crate::le_plabic::lediagram_from_derangement;
use crate::positroid::{derangement_from_necklace, necklace_from_derangement, necklace_from_matroid};
use crate::subset::Subset;
use crate::tau::Wave;
use crate::tropical::{contour_plot, tropical_field, ContourPlot, TropicalError, TropicalField, VertexClass};

pub const DEFAULT_VERIFY_TOL: f64 = 1e-9;
/// Relative Plücker-ratio tolerance for the plot → point → plot loop.
pub const ROUND_TRIP_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("point is in Gr({pk},{pn}) but κ is for Gr({kk},{kn})")]
    Mismatch { pk: usize, pn: usize, kk: usize, kn: usize },
    #[error("point cannot be classified: {0}")]
    Unclassifiable(String),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub k: usize,
    pub n: usize,
    pub time: f64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Worst-case geometric residuals of a plot against its field.
#[derive(Debug, Clone, Copy)]
pub struct GeometricChecks {
    pub edges: usize,
    /// Every edge's region labels differ in exactly its soliton pair.
    pub labels_ok: bool,
    /// |x + (κᵢ+κⱼ)y + (κᵢ²+κᵢκⱼ+κⱼ²)t − offset| over edge endpoints.
    pub worst_line_residual: f64,
    /// Angle defect between each edge and its predicted direction.
    pub worst_slope_residual: f64,
    /// Worst residual of the weighted direction sum at trivalent vertices.
    pub worst_balance: f64,
    /// f_A ≤ ln τ ≤ f_A + ln(#terms) on a sample grid.
    pub sandwich_ok: bool,
    pub sandwich_samples: usize,
}

pub fn geometric_checks(field: &TropicalField, plot: &ContourPlot) -> GeometricChecks {
    let kappa = field.kappa();
    let t = plot.time;
    let mut labels_ok = true;
    let mut worst_line = 0.0f64;
    let mut worst_slope = 0.0f64;
    for e in &plot.edges {
        let (i, j) = e.stype;
        let diff_i = e.bases.0.difference(e.bases.1);
        let diff_j = e.bases.1.difference(e.bases.0);
        if diff_i != Subset::from_elems(&[i]) || diff_j != Subset::from_elems(&[j]) {
            labels_ok = false;
        }
        let (ki, kj) = (kappa.value(i), kappa.value(j));
        let offset = field.soliton_offset(e.bases.0, e.bases.1);
        for p in [e.p0, e.p1] {
            let r = (p.0 + (ki + kj) * p.1 + (ki * ki + ki * kj + kj * kj) * t - offset).abs();
            worst_line = worst_line.max(r);
        }
        let d = sub(e.p1, e.p0);
        let pred = (-(ki + kj), 1.0);
        let s = cross(d, pred).abs() / (norm(d) * norm(pred)).max(1e-300);
        worst_slope = worst_slope.max(s);
    }
    let mut worst_balance = 0.0f64;
    for (vi, v) in plot.vertices.iter().enumerate() {
        if !matches!(v.class, VertexClass::TrivalentBlack | VertexClass::TrivalentWhite) {
            continue;
        }
        let (mut bx, mut by) = (0.0, 0.0);
        for &ei in &v.edges {
            let e = &plot.edges[ei];
            // Outgoing direction, normalized to |dy| = 1 (edges are never
            // horizontal); weight κⱼ−κᵢ gives the flux balance at the vertex.
            let d = if e.v0 == Some(vi) { sub(e.p1, e.p0) } else { sub(e.p0, e.p1) };
            let (i, j) = e.stype;
            let w = kappa.value(j) - kappa.value(i);
            bx += w * d.0 / d.1.abs();
            by += w * d.1.signum();
        }
        worst_balance = worst_balance.max(bx.hypot(by));
    }
    let wave = Wave::from_field(field.clone());
    let ln_m = (field.terms().len() as f64).ln();
    let mut sandwich_ok = true;
    let side = 32;
    for iy in 0..side {
        for ix in 0..side {
            let x = plot.bbox.xmin + plot.bbox.width() * (ix as f64 + 0.5) / side as f64;
            let y = plot.bbox.ymin + plot.bbox.height() * (iy as f64 + 0.5) / side as f64;
            let f = field.f_a(x, y, t);
            let lt = wave.log_tau(x, y, t);
            let eps = 1e-9 * (1.0 + f.abs());
            if !(f <= lt + eps && lt <= f + ln_m + eps) {
                sandwich_ok = false;
            }
        }
    }
    GeometricChecks {
        edges: plot.edges.len(),
        labels_ok,
        worst_line_residual: worst_line,
        worst_slope_residual: worst_slope,
        worst_balance,
        sandwich_ok,
        sandwich_samples: side * side,
    }
}

/// Runs the whole suite on one point at one time. Stable check order, so
/// identical inputs print identical tables.
pub fn verify_point(
    point: &GrassmannPoint,
    kappa: &KappaParams,
    t: f64,
    tol: f64,
) -> Result<VerifyReport, VerifyError> {
    if point.k() != kappa.k() || point.n() != kappa.n() {
        return Err(VerifyError::Mismatch {
            pk: point.k(),
            pn: point.n(),
            kk: kappa.k(),
            kn: kappa.n(),
        });
    }
    let (positivity, matroid) = point
        .classify_default()
        .map_err(|e| VerifyError::Unclassifiable(e.to_string()))?;
    let mut checks = Vec::new();
    if positivity == Positivity::Neither {
        checks.push(Check {
            name: "positivity",
            passed: false,
            detail: "point has minors of both signs".into(),
        });
        return Ok(VerifyReport { k: point.k(), n: point.n(), time: t, checks });
    }
    checks.push(Check {
        name: "positivity",
        passed: true,
        detail: format!("{:?}, {} bases", positivity, matroid.bases().len()),
    });

    let neck = necklace_from_matroid(&matroid).expect("positroid matroid yields a necklace");
    let pi = derangement_from_necklace(&neck);
    let field = tropical_field(point, kappa)?;
    let plot = contour_plot(&field, t, None)?;

    match read_derangement(&plot) {
        Ok(read) => checks.push(Check {
            name: "derangement",
            passed: read == pi,
            detail: format!("plot {}, cell {}", read.cycle_string(), pi.cycle_string()),
        }),
        Err(e) => checks.push(Check { name: "derangement", passed: false, detail: e.to_string() }),
    }
    match necklace_check(&plot) {
        Ok(read) => {
            let want = necklace_from_derangement(&pi);
            checks.push(Check {
                name: "necklace",
                passed: read == want,
                detail: format!("{} terms", read.terms().len()),
            });
        }
        Err(e) => checks.push(Check { name: "necklace", passed: false, detail: e.to_string() }),
    }
    match lediagram_from_derangement(&pi) {
        Ok(le) => {
            let trips = build_g_minus(&le)
                .trips()
                .expect("pipe-dream graph is well formed")
                .derangement()
                .expect("pipe-dream trips form a derangement");
            checks.push(Check {
                name: "trip-permutation",
                passed: trips == pi,
                detail: format!("trips {}", trips.cycle_string()),
            });
        }
        Err(e) => {
            checks.push(Check { name: "trip-permutation", passed: false, detail: e.to_string() })
        }
    }

    let g = geometric_checks(&field, &plot);
    checks.push(Check {
        name: "edge-labels",
        passed: g.labels_ok,
        detail: format!("{} edges", g.edges),
    });
    checks.push(Check {
        name: "line-equation",
        passed: g.worst_line_residual <= tol,
        detail: format!("worst {:.3e}", g.worst_line_residual),
    });
    checks.push(Check {
        name: "slope",
        passed: g.worst_slope_residual <= tol,
        detail: format!("worst {:.3e}", g.worst_slope_residual),
    });
    checks.push(Check {
        name: "balancing",
        passed: g.worst_balance <= tol,
        detail: format!("worst {:.3e}", g.worst_balance),
    });
    checks.push(Check {
        name: "sandwich",
        passed: g.sandwich_ok,
        detail: format!("{} samples", g.sandwich_samples),
    });

    match invert_plot(&plot, kappa) {
        Ok(rep) => {
            let anchor = point.lex_first_basis();
            let base_a = point.pluecker_f64(anchor);
            let base_b = rep.point.pluecker_f64(anchor);
            let worst = Subset::k_subsets(point.n(), point.k())
                .into_iter()
                .map(|s| {
                    let ra = point.pluecker_f64(s) / base_a;
                    let rb = rep.point.pluecker_f64(s) / base_b;
                    (ra - rb).abs() / ra.abs().max(1.0)
                })
                .fold(0.0, f64::max);
            checks.push(Check {
                name: "inverse-round-trip",
                passed: worst <= ROUND_TRIP_TOL,
                detail: format!("{:?} tier, ratio err {:.3e}", rep.tier, worst),
            });
        }
        Err(e) => checks.push(Check {
            name: "inverse-round-trip",
            passed: false,
            detail: e.to_string(),
        }),
    }

    Ok(VerifyReport { k: point.k(), n: point.n(), time: t, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::validate_kappa;
    use crate::lediagram::LeDiagram;

    #[test]
    fn tp_gr24_suite_passes_at_t_negative() {
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let point = LeDiagram::all_plus(2, 4, vec![2, 2]).unwrap().random_point(11);
        let rep = verify_point(&point, &kappa, -8.0, DEFAULT_VERIFY_TOL).unwrap();
        let names: Vec<&str> = rep.checks.iter().map(|c| c.name).collect();
        assert_eq!(
            names,
            [
                "positivity",
                "derangement",
                "necklace",
                "trip-permutation",
                "edge-labels",
                "line-equation",
                "slope",
                "balancing",
                "sandwich",
                "inverse-round-trip"
            ]
        );
        for c in &rep.checks {
            assert!(c.passed, "{} failed: {}", c.name, c.detail);
        }
    }

    #[test]
    fn mixed_sign_point_fails_positivity() {
        let point =
            GrassmannPoint::from_rows(2, 3, vec![vec![1.0, 1.0, 0.0], vec![0.0, -1.0, 1.0]])
                .unwrap();
        let kappa = validate_kappa(&[-1.0, 0.2, 1.1], 2).unwrap();
        let rep = verify_point(&point, &kappa, -2.0, DEFAULT_VERIFY_TOL).unwrap();
        assert!(!rep.all_passed());
        assert_eq!(rep.checks.len(), 1);
        assert_eq!(rep.checks[0].name, "positivity");
    }
}
