//! Points of Gr(k,n) and the spectral parameters κ.
//!
//! A point is a full-rank k×n matrix modulo row operations. Matrix entries
//! arrive as f64 but are lifted exactly into rationals, so Plücker
//! coordinates, matroid support, and row reduction are exact: a minor that
//! vanishes identically in the cell parameters really comes out as zero.
//! Floating point is reserved for the contour geometry downstream.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::numeric::ln_rational_abs;
use crate::subset::Subset;

#[derive(Debug, Error, PartialEq)]
pub enum KappaError {
    #[error("need at least two kappa values, got {0}")]
    TooFew(usize),
    #[error("rank k={k} out of range for n={n}")]
    BadRank { k: usize, n: usize },
    #[error("kappa values must be strictly increasing: kappa[{0}] >= kappa[{1}] (1-based)")]
    NotIncreasing(usize, usize),
    #[error("kappa not generic: {d}-element sums for {a:?} and {b:?} coincide")]
    NotGeneric { d: usize, a: Vec<usize>, b: Vec<usize> },
}

/// Strictly increasing spectral parameters κ_1 < … < κ_n, validated so that
/// for every 2 ≤ d ≤ k all d-element sums are pairwise distinct. That rules
/// out coinciding region slopes for any point of Gr(k,n) with these κ.
#[derive(Debug, Clone, PartialEq)]
pub struct KappaParams {
    values: Vec<f64>,
    k: usize,
}

pub fn validate_kappa(values: &[f64], k: usize) -> Result<KappaParams, KappaError> {
    let n = values.len();
    if n < 2 {
        return Err(KappaError::TooFew(n));
    }
    if k == 0 || k >= n {
        return Err(KappaError::BadRank { k, n });
    }
    for i in 0..n - 1 {
        if values[i] >= values[i + 1] {
            return Err(KappaError::NotIncreasing(i + 1, i + 2));
        }
    }
    for d in 2..=k {
        let subsets = Subset::k_subsets(n, d);
        let mut sums: Vec<(f64, Subset)> = subsets
            .iter()
            .map(|&s| (s.elems().iter().map(|&e| values[e - 1]).sum(), s))
            .collect();
        sums.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in sums.windows(2) {
            let (sa, a) = w[0];
            let (sb, b) = w[1];
            let tol = 1e-9 * sa.abs().max(sb.abs()).max(1.0);
            if (sb - sa).abs() <= tol {
                return Err(KappaError::NotGeneric { d, a: a.elems(), b: b.elems() });
            }
        }
    }
    Ok(KappaParams { values: values.to_vec(), k })
}

impl KappaParams {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// κ_i, 1-based.
    pub fn value(&self, i: usize) -> f64 {
        self.values[i - 1]
    }

    pub fn sum(&self, s: Subset) -> f64 {
        s.elems().iter().map(|&e| self.value(e)).sum()
    }

    pub fn sum_sq(&self, s: Subset) -> f64 {
        s.elems().iter().map(|&e| self.value(e).powi(2)).sum()
    }

    pub fn sum_cube(&self, s: Subset) -> f64 {
        s.elems().iter().map(|&e| self.value(e).powi(3)).sum()
    }

    /// ln Π_{l<m in S} (κ_m − κ_l); positive factors since κ is increasing.
    pub fn ln_vandermonde(&self, s: Subset) -> f64 {
        let e = s.elems();
        let mut acc = 0.0;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                acc += (self.value(e[j]) - self.value(e[i])).ln();
            }
        }
        acc
    }
}

#[derive(Debug, Error)]
pub enum GrassmannError {
    #[error("matrix shape does not match k={k}, n={n}")]
    BadDimensions { k: usize, n: usize },
    #[error("k={k} out of range for n={n}")]
    BadRank { k: usize, n: usize },
    #[error("matrix entry at row {row}, column {col} is not finite")]
    NonFiniteEntry { row: usize, col: usize },
    #[error("matrix does not have full rank {k}")]
    RankDeficient { k: usize },
    #[error("minors too close to zero to classify (relative magnitude within the ambiguity band): {labels:?}")]
    AmbiguousSign { labels: Vec<String> },
}

/// Positivity class of a point with respect to its Plücker sign pattern,
/// after normalizing the overall sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Positivity {
    TotallyPositive,
    TotallyNonNegative,
    Neither,
}

/// The set of k-subsets with nonvanishing Plücker coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositroidMatroid {
    k: usize,
    n: usize,
    bases: Vec<Subset>,
}

impl PositroidMatroid {
    pub fn new(k: usize, n: usize, mut bases: Vec<Subset>) -> PositroidMatroid {
        bases.sort();
        bases.dedup();
        PositroidMatroid { k, n, bases }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.bases.binary_search(&s).is_ok()
    }
}

/// Default relative tolerance for treating a minor as numerically suspect.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct GrassmannPoint {
    k: usize,
    n: usize,
    rows: Vec<Vec<BigRational>>,
    rows_f64: Vec<Vec<f64>>,
    pluecker: BTreeMap<Subset, BigRational>,
}

fn lift(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Exact determinant by fraction-aware Gaussian elimination.
fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::from_integer(BigInt::from(1));
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            return BigRational::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= pv.clone();
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

impl GrassmannPoint {
    pub fn from_rows(k: usize, n: usize, rows: Vec<Vec<f64>>) -> Result<GrassmannPoint, GrassmannError> {
        if k == 0 || k > n {
            return Err(GrassmannError::BadRank { k, n });
        }
        if rows.len() != k || rows.iter().any(|r| r.len() != n) {
            return Err(GrassmannError::BadDimensions { k, n });
        }
        let mut rat = Vec::with_capacity(k);
        for (i, row) in rows.iter().enumerate() {
            let mut rr = Vec::with_capacity(n);
            for (j, &x) in row.iter().enumerate() {
                match lift(x) {
                    Some(v) => rr.push(v),
                    None => return Err(GrassmannError::NonFiniteEntry { row: i + 1, col: j + 1 }),
                }
            }
            rat.push(rr);
        }
        Self::from_rational_rows(k, n, rat)
    }

    pub fn from_rational_rows(
        k: usize,
        n: usize,
        rows: Vec<Vec<BigRational>>,
    ) -> Result<GrassmannPoint, GrassmannError> {
        if k == 0 || k > n {
            return Err(GrassmannError::BadRank { k, n });
        }
        if rows.len() != k || rows.iter().any(|r| r.len() != n) {
            return Err(GrassmannError::BadDimensions { k, n });
        }
        let mut pluecker = BTreeMap::new();
        let mut any_nonzero = false;
        for s in Subset::k_subsets(n, k) {
            let cols = s.elems();
            let sub: Vec<Vec<BigRational>> = (0..k)
                .map(|r| cols.iter().map(|&c| rows[r][c - 1].clone()).collect())
                .collect();
            let d = det_rational(sub);
            any_nonzero |= !d.is_zero();
            pluecker.insert(s, d);
        }
        if !any_nonzero {
            return Err(GrassmannError::RankDeficient { k });
        }
        let rows_f64 = rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_f64().unwrap_or(f64::NAN)).collect())
            .collect();
        Ok(GrassmannPoint { k, n, rows, rows_f64, pluecker })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows_f64(&self) -> &[Vec<f64>] {
        &self.rows_f64
    }

    pub fn rational_rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    pub fn pluecker(&self) -> &BTreeMap<Subset, BigRational> {
        &self.pluecker
    }

    pub fn pluecker_coord(&self, s: Subset) -> &BigRational {
        &self.pluecker[&s]
    }

    pub fn pluecker_f64(&self, s: Subset) -> f64 {
        self.pluecker[&s].to_f64().unwrap_or(f64::NAN)
    }

    /// ln |Δ_S|; requires Δ_S ≠ 0.
    pub fn ln_pluecker_abs(&self, s: Subset) -> f64 {
        ln_rational_abs(&self.pluecker[&s])
    }

    /// First (lexicographic) subset with a nonzero minor.
    pub fn lex_first_basis(&self) -> Subset {
        *self
            .pluecker
            .iter()
            .find(|(_, v)| !v.is_zero())
            .map(|(s, _)| s)
            .expect("full rank guaranteed at construction")
    }

    /// Overall sign normalization factor: +1 or −1 so the first nonzero
    /// minor becomes positive.
    pub fn sign_normalization(&self) -> i8 {
        let first = self.lex_first_basis();
        if self.pluecker[&first].is_negative() {
            -1
        } else {
            1
        }
    }

    /// Classify the sign pattern of the Plücker vector after normalization,
    /// and return the support matroid.
    ///
    /// Exact zeros are trusted. A nonzero minor whose magnitude falls within
    /// `10·tol` of the largest minor's scaled zero band signals an
    /// ill-conditioned input and aborts with `AmbiguousSign` instead of
    /// guessing a cell.
    pub fn classify(&self, tol: f64) -> Result<(Positivity, PositroidMatroid), GrassmannError> {
        let sign = self.sign_normalization() as i64;
        let max_abs = self
            .pluecker
            .values()
            .filter(|v| !v.is_zero())
            .map(|v| ln_rational_abs(v))
            .fold(f64::NEG_INFINITY, f64::max);
        let band = max_abs + (10.0 * tol).ln();
        let mut ambiguous = Vec::new();
        let mut bases = Vec::new();
        let mut any_zero = false;
        let mut any_negative = false;
        for (s, v) in &self.pluecker {
            if v.is_zero() {
                any_zero = true;
                continue;
            }
            if ln_rational_abs(v) <= band {
                ambiguous.push(s.label());
                continue;
            }
            bases.push(*s);
            let normalized_negative = (v.is_negative() as i64 * -2 + 1) * sign < 0;
            any_negative |= normalized_negative;
        }
        if !ambiguous.is_empty() {
            return Err(GrassmannError::AmbiguousSign { labels: ambiguous });
        }
        let class = if any_negative {
            Positivity::Neither
        } else if any_zero {
            Positivity::TotallyNonNegative
        } else {
            Positivity::TotallyPositive
        };
        Ok((class, PositroidMatroid::new(self.k, self.n, bases)))
    }

    pub fn classify_default(&self) -> Result<(Positivity, PositroidMatroid), GrassmannError> {
        self.classify(DEFAULT_TOL)
    }

    /// Exact reduced row echelon form of the same row span.
    pub fn rref(&self) -> GrassmannPoint {
        let (rows, _pivots) = rref_rational(&self.rows);
        GrassmannPoint::from_rational_rows(self.k, self.n, rows)
            .expect("row operations preserve rank")
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        rref_rational(&self.rows).1
    }

    /// Irreducibility of the cell: the reduced form has no zero column and
    /// every row carries a nonzero entry besides its pivot.
    pub fn is_irreducible(&self) -> bool {
        let (rows, pivots) = rref_rational(&self.rows);
        for c in 0..self.n {
            if (0..self.k).all(|r| rows[r][c].is_zero()) {
                return false;
            }
        }
        for (r, &p) in pivots.iter().enumerate() {
            let extra = (0..self.n).any(|c| c != p && !rows[r][c].is_zero());
            if !extra {
                return false;
            }
        }
        true
    }
}

/// Exact Gauss–Jordan; returns the reduced rows and 0-based pivot columns.
fn rref_rational(rows: &[Vec<BigRational>]) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let k = rows.len();
    let n = rows[0].len();
    let mut m: Vec<Vec<BigRational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == k {
            break;
        }
        let Some(p) = (r..k).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pv = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x /= pv.clone();
        }
        for i in 0..k {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..n {
                    let sub = &f * &m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tp_gr24() -> GrassmannPoint {
        GrassmannPoint::from_rows(2, 4, vec![vec![1.0, 0.0, -1.0, -2.0], vec![0.0, 1.0, 2.0, 3.0]])
            .unwrap()
    }

    #[test]
    fn pluecker_values_of_tp_point() {
        let p = tp_gr24();
        let expect = [("12", 1.0), ("13", 2.0), ("14", 3.0), ("23", 1.0), ("24", 2.0), ("34", 1.0)];
        for (label, v) in expect {
            let s = Subset::parse_label(label, 4).unwrap();
            assert_eq!(p.pluecker_f64(s), v, "minor {label}");
        }
        let (class, matroid) = p.classify_default().unwrap();
        assert_eq!(class, Positivity::TotallyPositive);
        assert_eq!(matroid.bases().len(), 6);
    }

    #[test]
    fn identity_padding_is_tnn_not_tp_and_reducible() {
        let p = GrassmannPoint::from_rows(2, 4, vec![vec![1.0, 0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0, 0.0]])
            .unwrap();
        let (class, matroid) = p.classify_default().unwrap();
        assert_eq!(class, Positivity::TotallyNonNegative);
        assert_eq!(matroid.bases(), &[Subset::from_elems(&[1, 2])]);
        assert!(!p.is_irreducible());
    }

    #[test]
    fn mixed_signs_classify_as_neither() {
        // Columns 1,4 and 2,3 coincide up to sign, so {2,4} and {3,4} minors
        // come out negative while {1,2} and {1,3} stay positive.
        let p = GrassmannPoint::from_rows(2, 4, vec![vec![1.0, 0.0, 0.0, 1.0], vec![0.0, 1.0, 1.0, 0.0]])
            .unwrap();
        let (class, _) = p.classify_default().unwrap();
        assert_eq!(class, Positivity::Neither);
    }

    #[test]
    fn one_row_ones_is_irreducible() {
        let p = GrassmannPoint::from_rows(1, 2, vec![vec![1.0, 1.0]]).unwrap();
        assert!(p.is_irreducible());
        let (class, _) = p.classify_default().unwrap();
        assert_eq!(class, Positivity::TotallyPositive);
    }

    #[test]
    fn rref_preserves_pluecker_ratios() {
        let p = GrassmannPoint::from_rows(2, 4, vec![vec![2.0, 1.0, -1.0, 0.5], vec![1.0, 1.0, 2.0, 3.0]])
            .unwrap();
        let r = p.rref();
        // Proportionality: Δ_S(r) * Δ_T(p) = Δ_T(r) * Δ_S(p) for all S, T.
        let s0 = p.lex_first_basis();
        for (s, v) in p.pluecker() {
            let lhs = r.pluecker_coord(*s) * p.pluecker_coord(s0);
            let rhs = r.pluecker_coord(s0) * v;
            assert_eq!(lhs, rhs);
        }
        assert_eq!(r.pivot_columns(), vec![0, 1]);
    }

    #[test]
    fn rank_deficient_rejected() {
        let err = GrassmannPoint::from_rows(2, 3, vec![vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]);
        assert!(matches!(err, Err(GrassmannError::RankDeficient { .. })));
    }

    #[test]
    fn kappa_validation() {
        assert!(validate_kappa(&[-1.0, 1.0], 1).is_ok());
        assert!(matches!(
            validate_kappa(&[-2.0, -1.0, 1.0, 2.0], 2),
            Err(KappaError::NotGeneric { d: 2, .. })
        ));
        // 2-sums −1−0 and −3+2 tie, so this classic-looking choice fails at k=2
        // even though each κ is distinct.
        assert!(matches!(
            validate_kappa(&[-3.0, -1.0, 0.0, 2.0], 2),
            Err(KappaError::NotGeneric { d: 2, .. })
        ));
        assert!(validate_kappa(&[-3.0, -1.0, 0.0, 2.0], 1).is_ok());
        assert!(validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).is_ok());
        assert!(matches!(
            validate_kappa(&[0.0, 0.0, 1.0], 1),
            Err(KappaError::NotIncreasing(1, 2))
        ));
    }

    #[test]
    fn kappa_sums() {
        let kp = validate_kappa(&[-3.0, -1.0, 0.5, 2.0], 2).unwrap();
        let s = Subset::from_elems(&[1, 3]);
        assert_eq!(kp.sum(s), -2.5);
        assert_eq!(kp.sum_sq(s), 9.25);
        assert_eq!(kp.sum_cube(s), -26.875);
        assert!((kp.ln_vandermonde(s) - (3.5f64).ln()).abs() < 1e-12);
    }
}
