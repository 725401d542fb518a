//! Reconstructing the Grassmannian point from an observed contour plot.
//!
//! Each [i,j] edge pins the ratio of the Plücker coordinates labeling the
//! two regions it separates, so the edges of a plot form a difference
//! system on the logs of the observed coordinates, solvable up to one
//! additive constant. The point itself then comes either from the chamber
//! formula (RREF entries as ratios of single-swap minors, when all of them
//! were observed) or from a damped least-squares fit over the cell's
//! network weights.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::asymptotics::read_derangement;
use crate::geometry::{dist, midpoint, DisjointSets, Pt};
use crate::grassmann::{GrassmannPoint, KappaParams};
use crate::lediagram::{LeDiagram, PositroidData};
use crate::positroid::Derangement;
use crate::subset::Subset;
use crate::tropical::ContourPlot;

/// Worst allowed cycle sum of the ratio equations before the plot is
/// rejected as not coming from any single point. Engine-generated plots
/// stay below 1e-8; the slack is for digitized input.
pub const DEFAULT_CYCLE_TOL: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum InverseError {
    #[error("plot has no regions")]
    Empty,
    #[error("edge {edge} refers to region {region}, but there are only {count} labels")]
    BadRegionIndex { edge: usize, region: usize, count: usize },
    #[error("edge {edge} separates {a} and {b}, which do not differ in exactly its soliton pair")]
    LabelMismatch { edge: usize, a: String, b: String },
    #[error("region adjacency graph is disconnected")]
    Disconnected,
    #[error("label {0} does not fit the given Gr(k,n)")]
    BadLabel(String),
    #[error("cycle inconsistency {worst:.3e} exceeds {tol:.1e}: the offsets do not come from one point")]
    InconsistentCycle { worst: f64, tol: f64 },
    #[error("log-ratio system is rank deficient")]
    RankDeficient,
    #[error("label {0} is not a basis of the given cell")]
    NotACellBasis(String),
    #[error("observed labels cannot pin down the point; unobserved cell bases: {missing:?}")]
    InsufficientLabels { missing: Vec<String> },
    #[error("no fit start converged; best log-RMS {best:.3e}")]
    NoConvergence { best: f64 },
    #[error("could not identify the cell from the plot: {0}")]
    CellIdentification(String),
}

/// One soliton edge of an observed plot: its type, a point on its line, a
/// confidence weight (the visible length when read off a plot), and the two
/// regions it separates as indices into the label list, the first one
/// containing the smaller type element.
#[derive(Debug, Clone)]
pub struct ObservedEdge {
    pub stype: (usize, usize),
    pub point: Pt,
    pub weight: f64,
    pub regions: (usize, usize),
}

/// The structured form a contour plot takes as input to the inverse
/// problem: the time, the region labels, and one position per edge.
#[derive(Debug, Clone)]
pub struct ObservedContour {
    pub time: f64,
    pub labels: Vec<Subset>,
    pub edges: Vec<ObservedEdge>,
}

impl ObservedContour {
    /// Validates label sizes, edge/label consistency (adjacent labels must
    /// differ in exactly the edge's soliton pair), and connectivity, and
    /// orients each edge so its first region contains the smaller element.
    pub fn new(
        time: f64,
        labels: Vec<Subset>,
        mut edges: Vec<ObservedEdge>,
    ) -> Result<ObservedContour, InverseError> {
        if labels.is_empty() {
            return Err(InverseError::Empty);
        }
        for (ei, e) in edges.iter_mut().enumerate() {
            for r in [e.regions.0, e.regions.1] {
                if r >= labels.len() {
                    return Err(InverseError::BadRegionIndex {
                        edge: ei,
                        region: r,
                        count: labels.len(),
                    });
                }
            }
            let (i, j) = e.stype;
            let (a, b) = (labels[e.regions.0], labels[e.regions.1]);
            let fwd = a.difference(b) == Subset::from_elems(&[i])
                && b.difference(a) == Subset::from_elems(&[j]);
            let rev = b.difference(a) == Subset::from_elems(&[i])
                && a.difference(b) == Subset::from_elems(&[j]);
            if rev {
                e.regions = (e.regions.1, e.regions.0);
            } else if !fwd {
                return Err(InverseError::LabelMismatch { edge: ei, a: a.label(), b: b.label() });
            }
        }
        let mut ds = DisjointSets::new(labels.len());
        for e in &edges {
            ds.union(e.regions.0, e.regions.1);
        }
        let root = ds.find(0);
        if (1..labels.len()).any(|r| ds.find(r) != root) {
            return Err(InverseError::Disconnected);
        }
        Ok(ObservedContour { time, labels, edges })
    }

    /// Reads the plot as produced by the contour engine: one equation per
    /// edge through its midpoint, weighted by visible length.
    pub fn from_plot(plot: &ContourPlot) -> Result<ObservedContour, InverseError> {
        let labels: Vec<Subset> = plot.regions.iter().map(|r| r.basis).collect();
        let mut edges = Vec::new();
        for e in &plot.edges {
            let r0 = plot.region_index(e.bases.0).expect("edge bases are regions");
            let r1 = plot.region_index(e.bases.1).expect("edge bases are regions");
            edges.push(ObservedEdge {
                stype: e.stype,
                point: midpoint(e.p0, e.p1),
                weight: dist(e.p0, e.p1).max(1e-12),
                regions: (r0, r1),
            });
        }
        ObservedContour::new(plot.time, labels, edges)
    }
}

/// One difference equation ln Δ_I − ln Δ_J = rhs between observed labels.
#[derive(Debug, Clone, Copy)]
pub struct LogEquation {
    pub i: usize,
    pub j: usize,
    pub rhs: f64,
    pub weight: f64,
}

/// The edge-difference system on the observed labels, anchored at the
/// label that dominates x ≪ 0 (smallest κ-sum).
#[derive(Debug, Clone)]
pub struct LogPlueckerSystem {
    pub labels: Vec<Subset>,
    pub equations: Vec<LogEquation>,
    pub anchor: usize,
    /// Worst cycle sum seen while checking consistency.
    pub worst_cycle: f64,
}

/// Turns the edge positions into log-Plücker difference equations:
/// ln Δ_I − ln Δ_J = (κⱼ−κᵢ)(x + (κᵢ+κⱼ)y + (κᵢ²+κᵢκⱼ+κⱼ²)t) − ln K_I + ln K_J
/// for an [i,j] edge through (x,y) with I ∋ i on one side and J ∋ j on the
/// other. Fails when some cycle of equations is inconsistent beyond
/// `DEFAULT_CYCLE_TOL`.
pub fn offsets_to_ratios(
    oc: &ObservedContour,
    kappa: &KappaParams,
) -> Result<LogPlueckerSystem, InverseError> {
    offsets_to_ratios_with_tol(oc, kappa, DEFAULT_CYCLE_TOL)
}

pub fn offsets_to_ratios_with_tol(
    oc: &ObservedContour,
    kappa: &KappaParams,
    cycle_tol: f64,
) -> Result<LogPlueckerSystem, InverseError> {
    for &l in &oc.labels {
        let ok = l.len() == kappa.k() && l.elems().iter().all(|&e| 1 <= e && e <= kappa.n());
        if !ok {
            return Err(InverseError::BadLabel(l.label()));
        }
    }
    let mut equations = Vec::new();
    for e in &oc.edges {
        let (i, j) = e.stype;
        let (ki, kj) = (kappa.value(i), kappa.value(j));
        let (x, y) = e.point;
        let line = x + (ki + kj) * y + (ki * ki + ki * kj + kj * kj) * oc.time;
        let (li, lj) = (oc.labels[e.regions.0], oc.labels[e.regions.1]);
        let rhs = (kj - ki) * line - kappa.ln_vandermonde(li) + kappa.ln_vandermonde(lj);
        equations.push(LogEquation { i: e.regions.0, j: e.regions.1, rhs, weight: e.weight });
    }
    // Potentials along a spanning tree; every equation is then re-checked
    // against them, which catches exactly the independent cycle sums.
    let mut phi = vec![f64::NAN; oc.labels.len()];
    phi[0] = 0.0;
    let mut changed = true;
    while changed {
        changed = false;
        for eq in &equations {
            if phi[eq.i].is_nan() && !phi[eq.j].is_nan() {
                phi[eq.i] = phi[eq.j] + eq.rhs;
                changed = true;
            } else if phi[eq.j].is_nan() && !phi[eq.i].is_nan() {
                phi[eq.j] = phi[eq.i] - eq.rhs;
                changed = true;
            }
        }
    }
    if phi.iter().any(|v| v.is_nan()) {
        return Err(InverseError::Disconnected);
    }
    let worst = equations
        .iter()
        .map(|eq| (phi[eq.i] - phi[eq.j] - eq.rhs).abs())
        .fold(0.0, f64::max);
    if worst > cycle_tol {
        return Err(InverseError::InconsistentCycle { worst, tol: cycle_tol });
    }
    let anchor = (0..oc.labels.len())
        .min_by(|&a, &b| kappa.sum(oc.labels[a]).total_cmp(&kappa.sum(oc.labels[b])))
        .expect("labels nonempty");
    Ok(LogPlueckerSystem { labels: oc.labels.clone(), equations, anchor, worst_cycle: worst })
}

/// Least-squares solution of the difference system, gauge-fixed to
/// log Δ = 0 at the anchor label.
#[derive(Debug, Clone)]
pub struct LogSolution {
    pub logs: BTreeMap<Subset, f64>,
    /// Weighted ℓ₂ norm of the equation residuals at the solution.
    pub residual: f64,
}

pub fn solve_logs(sys: &LogPlueckerSystem) -> Result<LogSolution, InverseError> {
    let u = sys.labels.len();
    if u == 0 {
        return Err(InverseError::Empty);
    }
    if u == 1 {
        let logs = BTreeMap::from([(sys.labels[0], 0.0)]);
        return Ok(LogSolution { logs, residual: 0.0 });
    }
    // Column per label except the anchor, which is pinned to 0.
    let col: Vec<Option<usize>> = {
        let mut c = Vec::with_capacity(u);
        let mut next = 0;
        for i in 0..u {
            if i == sys.anchor {
                c.push(None);
            } else {
                c.push(Some(next));
                next += 1;
            }
        }
        c
    };
    let m = sys.equations.len();
    let mut a = DMatrix::zeros(m, u - 1);
    let mut b = DVector::zeros(m);
    for (r, eq) in sys.equations.iter().enumerate() {
        let w = eq.weight.abs().sqrt();
        if let Some(c) = col[eq.i] {
            a[(r, c)] += w;
        }
        if let Some(c) = col[eq.j] {
            a[(r, c)] -= w;
        }
        b[r] = w * eq.rhs;
    }
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let eps = 1e-10 * smax.max(1.0);
    if svd.rank(eps) < u - 1 {
        return Err(InverseError::RankDeficient);
    }
    let x = svd.solve(&b, eps).map_err(|_| InverseError::RankDeficient)?;
    let residual = (&a * &x - &b).norm();
    let mut logs = BTreeMap::new();
    for (i, &l) in sys.labels.iter().enumerate() {
        logs.insert(l, col[i].map_or(0.0, |c| x[c]));
    }
    Ok(LogSolution { logs, residual })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    /// Every single-swap minor of the pivot set was observed, so the RREF
    /// entries are read straight off as ratios.
    Chamber,
    /// Damped least-squares fit over the cell's network weights.
    CellFit,
}

#[derive(Debug, Clone)]
pub struct ReconstructionReport {
    pub point: GrassmannPoint,
    pub tier: Tier,
    pub time: f64,
    /// Worst |log-ratio(reconstructed) − log-ratio(observed)| over the
    /// observed labels; the uniqueness diagnostic.
    pub log_misfit: f64,
    /// RMS of the fit residuals; zero for the chamber tier.
    pub fit_rms: f64,
}

/// ln |det| of the k×k submatrix on the label's columns (1-based).
fn ln_minor_f64(rows: &[Vec<f64>], label: Subset) -> f64 {
    let cols = label.elems();
    let k = cols.len();
    let mut m: Vec<Vec<f64>> =
        (0..k).map(|r| cols.iter().map(|&j| rows[r][j - 1]).collect()).collect();
    let mut ln_det = 0.0;
    for c in 0..k {
        let p = (c..k)
            .max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))
            .expect("nonempty pivot range");
        m.swap(c, p);
        let piv = m[c][c];
        if piv == 0.0 {
            return f64::NEG_INFINITY;
        }
        ln_det += piv.abs().ln();
        for r in c + 1..k {
            let f = m[r][c] / piv;
            for cc in c..k {
                m[r][cc] -= f * m[c][cc];
            }
        }
    }
    ln_det
}

/// Log-minors of the cell matrix at weights e^θ, relative to the anchor.
fn predicted_logs(le: &LeDiagram, theta: &[f64], labels: &[Subset], anchor: Subset) -> Vec<f64> {
    let w: Vec<f64> = theta.iter().map(|&t| t.exp()).collect();
    let rows = le.cell_matrix_f64(&w).expect("θ length is the cell dimension");
    let base = ln_minor_f64(&rows, anchor);
    labels.iter().map(|&l| ln_minor_f64(&rows, l) - base).collect()
}

fn fit_jacobian(
    le: &LeDiagram,
    theta: &[f64],
    labels: &[Subset],
    anchor: Subset,
) -> DMatrix<f64> {
    let h = 1e-6;
    let mut j = DMatrix::zeros(labels.len(), theta.len());
    for c in 0..theta.len() {
        let mut tp = theta.to_vec();
        let mut tm = theta.to_vec();
        tp[c] += h;
        tm[c] -= h;
        let fp = predicted_logs(le, &tp, labels, anchor);
        let fm = predicted_logs(le, &tm, labels, anchor);
        for r in 0..labels.len() {
            j[(r, c)] = (fp[r] - fm[r]) / (2.0 * h);
        }
    }
    j
}

/// Levenberg–Marquardt on θ ↦ predicted − target; returns (θ, final cost).
fn lm_fit(
    le: &LeDiagram,
    labels: &[Subset],
    targets: &[f64],
    anchor: Subset,
    theta0: Vec<f64>,
) -> (Vec<f64>, f64) {
    let d = theta0.len();
    let resid = |th: &[f64]| -> DVector<f64> {
        let p = predicted_logs(le, th, labels, anchor);
        DVector::from_iterator(labels.len(), p.iter().zip(targets).map(|(a, b)| a - b))
    };
    let mut theta = theta0;
    let mut r = resid(&theta);
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    for _ in 0..200 {
        if cost < 1e-24 {
            break;
        }
        let j = fit_jacobian(le, &theta, labels, anchor);
        let jt = j.transpose();
        let g = &jt * &r;
        if g.norm() < 1e-13 {
            break;
        }
        let jtj = &jt * &j;
        let mut improved = false;
        while lambda < 1e12 {
            let mut a = jtj.clone();
            for i in 0..d {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 4.0;
                continue;
            };
            let delta = chol.solve(&-&g);
            let cand: Vec<f64> =
                theta.iter().zip(delta.iter()).map(|(t, d)| (t + d).clamp(-30.0, 30.0)).collect();
            let rc = resid(&cand);
            let cc = rc.norm_squared();
            if cc.is_finite() && cc < cost {
                theta = cand;
                r = rc;
                cost = cc;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    (theta, cost)
}

/// Builds the point of the given cell whose Plücker logs match the solved
/// values. Chamber tier when the pivot label and all its observed-basis
/// single swaps are present; otherwise a multi-start fit over the cell's
/// network weights. `time` is carried through to the report.
pub fn reconstruct(
    logs: &BTreeMap<Subset, f64>,
    cell: &PositroidData,
    kappa: &KappaParams,
    time: f64,
) -> Result<ReconstructionReport, InverseError> {
    let (k, n) = (cell.k, cell.n);
    if logs.is_empty() {
        return Err(InverseError::Empty);
    }
    let matroid = cell.matroid();
    for l in logs.keys() {
        if l.len() != k || l.elems().iter().any(|&e| e < 1 || e > n) {
            return Err(InverseError::BadLabel(l.label()));
        }
        if !matroid.is_basis(*l) {
            return Err(InverseError::NotACellBasis(l.label()));
        }
    }
    let anchor = *logs
        .keys()
        .min_by(|a, b| kappa.sum(**a).total_cmp(&kappa.sum(**b)))
        .expect("logs nonempty");

    let pivots = cell.le.pivots();
    let pv = pivots.elems();
    let mut chamber_ok = logs.contains_key(&pivots);
    let mut swaps: Vec<(usize, usize, Subset)> = Vec::new();
    for (r, &p) in pv.iter().enumerate() {
        for j in 1..=n {
            if pivots.contains(j) {
                continue;
            }
            let l = pivots.remove(p).insert(j);
            if !matroid.is_basis(l) {
                continue;
            }
            if logs.contains_key(&l) {
                swaps.push((r, j, l));
            } else {
                chamber_ok = false;
            }
        }
    }

    let (point, tier, fit_rms) = if chamber_ok {
        let base = logs[&pivots];
        let mut rows = vec![vec![0.0; n]; k];
        for (r, &p) in pv.iter().enumerate() {
            rows[r][p - 1] = 1.0;
        }
        for &(r, j, l) in &swaps {
            // Δ_{(P∖p_r)∪j} = (−1)^{r+pos(j)} a_{r,j} with pos the 1-based
            // position of j among the sorted columns of the minor.
            let pos = l.elems().iter().position(|&e| e == j).expect("j in its own swap") + 1;
            let sign = if (r + 1 + pos) % 2 == 0 { 1.0 } else { -1.0 };
            rows[r][j - 1] = sign * (logs[&l] - base).exp();
        }
        let point = GrassmannPoint::from_rows(k, n, rows)
            .expect("pivot columns form an identity block");
        (point, Tier::Chamber, 0.0)
    } else {
        let d = cell.dimension;
        let fit_labels: Vec<Subset> = logs.keys().filter(|&&l| l != anchor).cloned().collect();
        let targets: Vec<f64> =
            fit_labels.iter().map(|l| logs[l] - logs[&anchor]).collect();
        let insufficient = || {
            let missing: Vec<String> = matroid
                .bases()
                .iter()
                .filter(|b| !logs.contains_key(b))
                .map(|b| b.label())
                .collect();
            InverseError::InsufficientLabels { missing }
        };
        if d > 0 {
            let j0 = fit_jacobian(&cell.le, &vec![0.0; d], &fit_labels, anchor);
            let svd = j0.svd(false, false);
            let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
            if svd.rank(1e-8 * smax.max(1.0)) < d {
                return Err(insufficient());
            }
        }
        let mut starts = vec![vec![0.0; d]];
        for seed in 1..=4u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            starts.push((0..d).map(|_| rng.gen_range(-1.5..1.5)).collect());
        }
        let mut best: Option<(Vec<f64>, f64)> = None;
        for th0 in starts {
            let (th, cost) = lm_fit(&cell.le, &fit_labels, &targets, anchor, th0);
            if best.as_ref().map_or(true, |(_, c)| cost < *c) {
                best = Some((th, cost));
            }
        }
        let (theta, cost) = best.expect("at least one start");
        let rms = (cost / fit_labels.len().max(1) as f64).sqrt();
        if rms > 1e-7 {
            return Err(InverseError::NoConvergence { best: rms });
        }
        let weights: Vec<BigRational> = theta
            .iter()
            .map(|&t| BigRational::from_float(t.exp()).expect("finite positive weight"))
            .collect();
        let point =
            cell.le.point_from_weights(&weights).expect("θ length is the cell dimension");
        (point, Tier::CellFit, rms)
    };

    let base_obs = logs[&anchor];
    let base_new = point.ln_pluecker_abs(anchor);
    let log_misfit = logs
        .iter()
        .map(|(l, v)| ((point.ln_pluecker_abs(*l) - base_new) - (v - base_obs)).abs())
        .fold(0.0, f64::max);
    Ok(ReconstructionReport { point, tier, time, log_misfit, fit_rms })
}

/// Everything the full inversion produces, for reporting.
pub struct InversionOutcome {
    pub system: LogPlueckerSystem,
    pub solution: LogSolution,
    pub derangement: Derangement,
    pub report: ReconstructionReport,
}

/// Full pipeline: plot → ratio system → logs → cell (read off the rays) →
/// point of that cell.
pub fn invert_plot_full(
    plot: &ContourPlot,
    kappa: &KappaParams,
) -> Result<InversionOutcome, InverseError> {
    invert_plot_full_with_tol(plot, kappa, DEFAULT_CYCLE_TOL)
}

pub fn invert_plot_full_with_tol(
    plot: &ContourPlot,
    kappa: &KappaParams,
    cycle_tol: f64,
) -> Result<InversionOutcome, InverseError> {
    let oc = ObservedContour::from_plot(plot)?;
    let sys = offsets_to_ratios_with_tol(&oc, kappa, cycle_tol)?;
    let sol = solve_logs(&sys)?;
    let pi = read_derangement(plot)
        .map_err(|e| InverseError::CellIdentification(e.to_string()))?;
    let cell = PositroidData::from_derangement(&pi)
        .map_err(|e| InverseError::CellIdentification(e.to_string()))?;
    let report = reconstruct(&sol.logs, &cell, kappa, plot.time)?;
    Ok(InversionOutcome { system: sys, solution: sol, derangement: pi, report })
}

pub fn invert_plot(
    plot: &ContourPlot,
    kappa: &KappaParams,
) -> Result<ReconstructionReport, InverseError> {
    Ok(invert_plot_full(plot, kappa)?.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::validate_kappa;
    use crate::lediagram::LeDiagram;
    use crate::positroid::Derangement;
    use crate::tropical::{contour_plot, tropical_field};

    fn tp_cell(k: usize, n: usize) -> PositroidData {
        let shape = vec![n - k; k];
        PositroidData::from_lediagram(&LeDiagram::all_plus(k, n, shape).unwrap())
    }

    /// Max over bases of the relative error between Plücker ratios
    /// (numerator basis over anchor basis) of the two points.
    fn worst_ratio_err(a: &GrassmannPoint, b: &GrassmannPoint) -> f64 {
        let anchor = a.lex_first_basis();
        let base_a = a.pluecker_f64(anchor);
        let base_b = b.pluecker_f64(anchor);
        Subset::k_subsets(a.n(), a.k())
            .into_iter()
            .map(|s| {
                let ra = a.pluecker_f64(s) / base_a;
                let rb = b.pluecker_f64(s) / base_b;
                (ra - rb).abs() / ra.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn single_edge_plot_recovers_the_crest() {
        let kappa = validate_kappa(&[-1.0, 1.0], 1).unwrap();
        // Edge through x=−1 at t=1: the time term cancels the offset, so the
        // ratio is 1 and the point is (1,1) up to scale.
        let oc = ObservedContour::new(
            1.0,
            vec![Subset::from_elems(&[1]), Subset::from_elems(&[2])],
            vec![ObservedEdge {
                stype: (1, 2),
                point: (-1.0, 0.0),
                weight: 1.0,
                regions: (0, 1),
            }],
        )
        .unwrap();
        let sys = offsets_to_ratios(&oc, &kappa).unwrap();
        assert_eq!(sys.equations.len(), 1);
        assert!(sys.equations[0].rhs.abs() < 1e-12);
        let sol = solve_logs(&sys).unwrap();
        assert!(sol.logs.values().all(|v| v.abs() < 1e-12));
        let cell = PositroidData::from_derangement(&Derangement::new(vec![2, 1]).unwrap()).unwrap();
        let rep = reconstruct(&sol.logs, &cell, &kappa, 1.0).unwrap();
        assert_eq!(rep.tier, Tier::Chamber);
        let ratio = rep.point.pluecker_f64(Subset::from_elems(&[2]))
            / rep.point.pluecker_f64(Subset::from_elems(&[1]));
        assert!((ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn engine_plot_ratios_match_the_planted_point() {
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let point = tp_cell(2, 4).le.random_point(3);
        let field = tropical_field(&point, &kappa).unwrap();
        let plot = contour_plot(&field, -8.0, None).unwrap();
        let oc = ObservedContour::from_plot(&plot).unwrap();
        let sys = offsets_to_ratios(&oc, &kappa).unwrap();
        assert!(sys.worst_cycle <= 1e-8, "cycle sum {}", sys.worst_cycle);
        let sol = solve_logs(&sys).unwrap();
        let anchor = sys.labels[sys.anchor];
        for (l, v) in &sol.logs {
            let planted = point.ln_pluecker_abs(*l) - point.ln_pluecker_abs(anchor);
            assert!((v - planted).abs() < 1e-8, "{}: {} vs {}", l.label(), v, planted);
        }
    }

    #[test]
    fn jittered_positions_stay_close() {
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let point = tp_cell(2, 4).le.random_point(3);
        let field = tropical_field(&point, &kappa).unwrap();
        let plot = contour_plot(&field, -8.0, None).unwrap();
        let mut oc = ObservedContour::from_plot(&plot).unwrap();
        for (i, e) in oc.edges.iter_mut().enumerate() {
            e.point.0 += if i % 2 == 0 { 1e-6 } else { -1e-6 };
        }
        let sol = solve_logs(&offsets_to_ratios(&oc, &kappa).unwrap()).unwrap();
        let anchor = oc.labels.iter().cloned().min().unwrap();
        for (l, v) in &sol.logs {
            let planted = point.ln_pluecker_abs(*l) - point.ln_pluecker_abs(anchor);
            assert!((v - planted).abs() < 1e-5, "{}: {} vs {}", l.label(), v, planted);
        }
    }

    #[test]
    fn inconsistent_positions_are_rejected() {
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let point = tp_cell(2, 4).le.random_point(3);
        let field = tropical_field(&point, &kappa).unwrap();
        let plot = contour_plot(&field, -8.0, None).unwrap();
        let mut oc = ObservedContour::from_plot(&plot).unwrap();
        // Shift one bounded edge well off its line: some cycle must break.
        let bounded = plot.edges.iter().position(|e| !e.is_unbounded()).unwrap();
        oc.edges[bounded].point.0 += 0.1;
        match offsets_to_ratios(&oc, &kappa) {
            Err(InverseError::InconsistentCycle { worst, .. }) => assert!(worst > 1e-3),
            other => panic!("expected InconsistentCycle, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn chamber_formula_matches_gaussian_elimination() {
        for (k, n, seed) in [(2, 4, 1), (2, 5, 2), (3, 5, 3)] {
            let cell = tp_cell(k, n);
            let point = cell.le.random_point(seed);
            // Oracle: the RREF computed by Gaussian elimination.
            let rref = point.rref();
            let logs: BTreeMap<Subset, f64> = Subset::k_subsets(n, k)
                .into_iter()
                .map(|s| (s, point.ln_pluecker_abs(s)))
                .collect();
            let vals: &[f64] = if n == 4 {
                &[-3.0, -1.0, 0.5, 2.0]
            } else {
                &[-2.7, -1.1, 0.2, 1.4, 2.9]
            };
            let kappa = validate_kappa(vals, k).unwrap();
            let rep = reconstruct(&logs, &cell, &kappa, -5.0).unwrap();
            assert_eq!(rep.tier, Tier::Chamber);
            assert!(rep.log_misfit < 1e-9, "misfit {}", rep.log_misfit);
            for (ra, rb) in rep.point.rows_f64().iter().zip(rref.rows_f64()) {
                for (a, b) in ra.iter().zip(rb) {
                    assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
                }
            }
        }
    }

    #[test]
    fn gauge_shift_leaves_the_point_unchanged() {
        let cell = tp_cell(2, 4);
        let point = cell.le.random_point(5);
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let logs: BTreeMap<Subset, f64> = Subset::k_subsets(4, 2)
            .into_iter()
            .map(|s| (s, point.ln_pluecker_abs(s)))
            .collect();
        let shifted: BTreeMap<Subset, f64> =
            logs.iter().map(|(l, v)| (*l, v + 5.0)).collect();
        let a = reconstruct(&logs, &cell, &kappa, 0.0).unwrap();
        let b = reconstruct(&shifted, &cell, &kappa, 0.0).unwrap();
        assert!(worst_ratio_err(&a.point, &b.point) < 1e-12);
    }

    #[test]
    fn cell_fit_round_trip_from_a_t_negative_plot() {
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let point = tp_cell(2, 4).le.random_point(7);
        let field = tropical_field(&point, &kappa).unwrap();
        let plot = contour_plot(&field, -8.0, None).unwrap();
        let rep = invert_plot(&plot, &kappa).unwrap();
        // The t≪0 plot shows 5 of the 6 labels, so the chamber set is
        // incomplete and the fit tier must engage.
        assert_eq!(rep.tier, Tier::CellFit);
        assert!(rep.log_misfit < 1e-7, "misfit {}", rep.log_misfit);
        assert!(
            worst_ratio_err(&point, &rep.point) < 1e-6,
            "ratio err {}",
            worst_ratio_err(&point, &rep.point)
        );
    }

    #[test]
    fn too_few_labels_is_reported_with_the_missing_ones() {
        let cell = tp_cell(2, 4);
        let point = cell.le.random_point(5);
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let logs: BTreeMap<Subset, f64> = [&[1, 2][..], &[1, 3][..]]
            .iter()
            .map(|e| {
                let s = Subset::from_elems(e);
                (s, point.ln_pluecker_abs(s))
            })
            .collect();
        match reconstruct(&logs, &cell, &kappa, -5.0) {
            Err(InverseError::InsufficientLabels { missing }) => {
                assert_eq!(missing.len(), 4);
                assert!(missing.contains(&"24".to_string()));
            }
            other => panic!("expected InsufficientLabels, got {:?}", other.map(|_| ())),
        }
    }
}
