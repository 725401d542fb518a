//! What the unbounded part of a contour plot must look like for a cell with
//! derangement π: ray types top and bottom, their left-to-right order, and the
//! dominant exponentials of the unbounded regions — plus the reverse reading.

use thiserror::Error;

use crate::grassmann::KappaParams;
use crate::positroid::{
    derangement_from_necklace, is_tp_schubert, Derangement, DerangementError, GrassmannNecklace,
    NecklaceError,
};
use crate::subset::Subset;
use crate::tropical::ContourPlot;

#[derive(Debug, Error)]
pub enum AsymptoticsError {
    #[error("expected {want_top} upward and {want_bottom} downward rays, found {top} and {bottom}")]
    MalformedPlot { want_top: usize, want_bottom: usize, top: usize, bottom: usize },
    #[error("two rays assign π({0}) differently")]
    ConflictingRays(usize),
    #[error("no ray determines π({0})")]
    MissingRay(usize),
    #[error("ray types do not assemble into a derangement: {0}")]
    NotADerangement(#[from] DerangementError),
    #[error("the plot's cell is not a TP Schubert cell")]
    NotASchubertCell,
    #[error("unbounded labels miss the excedance set {0}")]
    AnchorMissing(String),
    #[error("unbounded labels do not form a Grassmann necklace: {0}")]
    NecklaceViolation(#[from] NecklaceError),
    #[error("unbounded labels form a necklace of a different derangement")]
    WrongNecklace,
}

/// Predicted unbounded structure of any contour plot for the cell of π.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Asymptotics {
    /// Types [i,π(i)] at y ≫ 0, left to right (decreasing κ-pair sum).
    pub top: Vec<(usize, usize)>,
    /// Types [π(j),j] at y ≪ 0, left to right (increasing κ-pair sum).
    pub bottom: Vec<(usize, usize)>,
    /// Dominant exponential at x ≪ 0: the excedance positions of π.
    pub x_neg_label: Subset,
    /// Unbounded-region labels counterclockwise starting from the x ≪ 0
    /// region (crossing the bottom rays left to right first).
    pub unbounded_ccw: Vec<Subset>,
}

pub fn predict_asymptotics(pi: &Derangement, kappa: &KappaParams) -> Asymptotics {
    let n = pi.n();
    let pair_sum = |a: usize, b: usize| kappa.value(a) + kappa.value(b);
    let mut top: Vec<(usize, usize)> = pi
        .excedances()
        .iter()
        .map(|&i| (i, pi.image(i)))
        .collect();
    top.sort_by(|x, y| pair_sum(y.0, y.1).total_cmp(&pair_sum(x.0, x.1)));
    let mut bottom: Vec<(usize, usize)> = (1..=n)
        .filter(|&j| pi.image(j) < j)
        .map(|j| (pi.image(j), j))
        .collect();
    bottom.sort_by(|x, y| pair_sum(x.0, x.1).total_cmp(&pair_sum(y.0, y.1)));

    let x_neg_label = Subset::from_elems(&pi.excedances());
    let mut unbounded_ccw = vec![x_neg_label];
    let mut current = x_neg_label;
    // counterclockwise walk: bottom rays left→right, then top rays right→left
    let crossings = bottom.iter().chain(top.iter().rev());
    for &(a, b) in crossings {
        let (inside, outside) = if current.contains(a) && !current.contains(b) {
            (a, b)
        } else if current.contains(b) && !current.contains(a) {
            (b, a)
        } else {
            unreachable!("ray [{a},{b}] does not separate label {}", current.label())
        };
        current = current.remove(inside).insert(outside);
        unbounded_ccw.push(current);
    }
    let wrapped = unbounded_ccw.pop();
    debug_assert_eq!(wrapped, Some(x_neg_label), "full turn must return to the x≪0 label");
    Asymptotics { top, bottom, x_neg_label, unbounded_ccw }
}

/// Derangement read off a contour plot's rays: an upward ray of type [a,b]
/// forces π(a)=b, a downward one forces π(b)=a.
pub fn read_derangement(cp: &ContourPlot) -> Result<Derangement, AsymptoticsError> {
    let n = cp.n;
    let mut img = vec![0usize; n + 1];
    let mut top = 0;
    let mut bottom = 0;
    for ray in cp.rays() {
        let (a, b) = cp.edges[ray.edge].stype;
        let src = if ray.upward {
            top += 1;
            a
        } else {
            bottom += 1;
            b
        };
        let dst = if ray.upward { b } else { a };
        if img[src] != 0 && img[src] != dst {
            return Err(AsymptoticsError::ConflictingRays(src));
        }
        img[src] = dst;
    }
    if top != cp.k || bottom != cp.n - cp.k {
        return Err(AsymptoticsError::MalformedPlot {
            want_top: cp.k,
            want_bottom: cp.n - cp.k,
            top,
            bottom,
        });
    }
    for i in 1..=n {
        if img[i] == 0 {
            return Err(AsymptoticsError::MissingRay(i));
        }
    }
    Ok(Derangement::new(img[1..].to_vec())?)
}

/// For a TP Schubert cell, the unbounded labels read counterclockwise from
/// the x ≪ 0 region form the cell's Grassmann necklace.
pub fn necklace_check(cp: &ContourPlot) -> Result<GrassmannNecklace, AsymptoticsError> {
    let pi = read_derangement(cp)?;
    if !is_tp_schubert(&pi) {
        return Err(AsymptoticsError::NotASchubertCell);
    }
    let labels: Vec<Subset> = cp
        .unbounded_regions_ccw()
        .iter()
        .map(|&r| cp.regions[r].basis)
        .collect();
    let anchor = Subset::from_elems(&pi.excedances());
    let pos = labels
        .iter()
        .position(|&l| l == anchor)
        .ok_or_else(|| AsymptoticsError::AnchorMissing(anchor.label()))?;
    let mut rotated = labels[pos..].to_vec();
    rotated.extend_from_slice(&labels[..pos]);
    let neck = GrassmannNecklace::new(cp.k, cp.n, rotated)?;
    if derangement_from_necklace(&neck) != pi {
        return Err(AsymptoticsError::WrongNecklace);
    }
    Ok(neck)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::{validate_kappa, GrassmannPoint};
    use crate::positroid::necklace_from_derangement;
    use crate::tropical::{contour_plot, tropical_field};

    pub fn kappa9() -> KappaParams {
        validate_kappa(&[-4.13, -3.26, -2.27, -1.28, -0.19, 0.88, 1.82, 3.0, 4.12], 4).unwrap()
    }

    #[test]
    fn example_nine_soliton_prediction() {
        let pi = Derangement::new(vec![6, 7, 1, 2, 8, 3, 9, 4, 5]).unwrap();
        let a = predict_asymptotics(&pi, &kappa9());
        assert_eq!(a.top, vec![(7, 9), (5, 8), (2, 7), (1, 6)]);
        assert_eq!(a.bottom, vec![(1, 3), (2, 4), (3, 6), (4, 8), (5, 9)]);
        assert_eq!(a.x_neg_label.label(), "1257");
        let neck = necklace_from_derangement(&pi);
        assert_eq!(a.unbounded_ccw, neck.terms());
        let labels: Vec<String> = a.unbounded_ccw.iter().map(|s| s.label()).collect();
        assert_eq!(
            labels,
            vec!["1257", "2357", "3457", "4567", "5678", "6789", "1789", "1289", "1259"]
        );
    }

    #[test]
    fn one_soliton_prediction() {
        let pi = Derangement::new(vec![2, 1]).unwrap();
        let kappa = validate_kappa(&[-1.0, 1.0], 1).unwrap();
        let a = predict_asymptotics(&pi, &kappa);
        assert_eq!(a.top, vec![(1, 2)]);
        assert_eq!(a.bottom, vec![(1, 2)]);
        assert_eq!(a.x_neg_label.label(), "1");
        assert_eq!(a.unbounded_ccw.len(), 2);
    }

    #[test]
    fn derangement_read_from_gr12_contour() {
        let p = GrassmannPoint::from_rows(1, 2, vec![vec![1.0, 1.0]]).unwrap();
        let kappa = validate_kappa(&[-1.0, 1.0], 1).unwrap();
        let f = tropical_field(&p, &kappa).unwrap();
        let cp = contour_plot(&f, 0.0, None).unwrap();
        let pi = read_derangement(&cp).unwrap();
        assert_eq!(pi.images(), &[2, 1]);
        let neck = necklace_check(&cp).unwrap();
        assert_eq!(neck.terms().len(), 2);
        assert_eq!(neck.term(1).label(), "1");
        assert_eq!(neck.term(2).label(), "2");
    }

    #[test]
    fn necklace_read_from_tp_gr24_contour() {
        let p = GrassmannPoint::from_rows(
            2,
            4,
            vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]],
        )
        .unwrap();
        let kappa = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let f = tropical_field(&p, &kappa).unwrap();
        let cp = contour_plot(&f, -8.0, None).unwrap();
        let pi = read_derangement(&cp).unwrap();
        assert_eq!(pi.images(), &[3, 4, 1, 2]);
        let neck = necklace_check(&cp).unwrap();
        let labels: Vec<String> = neck.terms().iter().map(|s| s.label()).collect();
        assert_eq!(labels, vec!["12", "23", "34", "14"]);
    }
}
