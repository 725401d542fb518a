//! Positroid combinatorics: Grassmann necklaces and derangements.
//!
//! Conventions: the necklace (I_1, …, I_n) satisfies, for each i (cyclically),
//! I_{i+1} = (I_i \ {i}) ∪ {j} for some j; when j ≠ i we set π(j) = i, and a
//! fixed point would only arise from I_{i+1} = I_i with i ∈ I_i, which the
//! irreducibility-style validation below rejects. So every validated necklace
//! determines a derangement. Note the direction: π(j) = i, not π(i) = j.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::grassmann::PositroidMatroid;
use crate::subset::Subset;

#[derive(Debug, Error, PartialEq)]
pub enum NecklaceError {
    #[error("necklace must have n terms of size k; term {0} breaks that")]
    BadShape(usize),
    #[error("necklace step at i={i} violates the exchange condition: exactly {i} must leave and one element must enter")]
    BadStep { i: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum DerangementError {
    #[error("not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("fixed point at {0}")]
    FixedPoint(usize),
}

/// A sequence (I_1, …, I_n) of k-subsets of [n] obeying the exchange
/// condition at every cyclic step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassmannNecklace {
    k: usize,
    n: usize,
    terms: Vec<Subset>,
}

impl GrassmannNecklace {
    pub fn new(k: usize, n: usize, terms: Vec<Subset>) -> Result<GrassmannNecklace, NecklaceError> {
        if terms.len() != n {
            return Err(NecklaceError::BadShape(terms.len()));
        }
        for (idx, t) in terms.iter().enumerate() {
            if t.len() != k || t.elems().last().is_some_and(|&e| e > n) {
                return Err(NecklaceError::BadShape(idx + 1));
            }
        }
        for i in 1..=n {
            let cur = terms[i - 1];
            let next = terms[i % n];
            // Leaving set must be exactly {i}; exactly one element enters.
            let out = cur.difference(next);
            let inc = next.difference(cur);
            if out != Subset::from_elems(&[i]) || inc.len() != 1 {
                return Err(NecklaceError::BadStep { i });
            }
        }
        Ok(GrassmannNecklace { k, n, terms })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[Subset] {
        &self.terms
    }

    /// I_i, 1-based.
    pub fn term(&self, i: usize) -> Subset {
        self.terms[i - 1]
    }
}

/// A fixed-point-free permutation of [n], stored as the image list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derangement {
    images: Vec<usize>,
}

impl Derangement {
    pub fn new(images: Vec<usize>) -> Result<Derangement, DerangementError> {
        let n = images.len();
        let mut seen = vec![false; n + 1];
        for (i, &v) in images.iter().enumerate() {
            if v == 0 || v > n || seen[v] {
                return Err(DerangementError::NotPermutation(n));
            }
            seen[v] = true;
            if v == i + 1 {
                return Err(DerangementError::FixedPoint(i + 1));
            }
        }
        Ok(Derangement { images })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// π(i), 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Derangement {
        let n = self.n();
        let mut inv = vec![0; n];
        for i in 1..=n {
            inv[self.image(i) - 1] = i;
        }
        Derangement { images: inv }
    }

    /// Positions i with π(i) > i.
    pub fn excedances(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&i| self.image(i) > i).collect()
    }

    /// One-line cycle notation for display, smallest element first per cycle.
    pub fn cycle_string(&self) -> String {
        let n = self.n();
        let mut seen = vec![false; n + 1];
        let mut out = String::new();
        for start in 1..=n {
            if seen[start] {
                continue;
            }
            out.push('(');
            let mut i = start;
            loop {
                seen[i] = true;
                out.push_str(&i.to_string());
                i = self.image(i);
                if i == start {
                    break;
                }
                out.push(' ');
            }
            out.push(')');
        }
        out
    }
}

/// Reads the derangement off a validated necklace: at the step where i leaves
/// and j enters, π(j) = i.
pub fn derangement_from_necklace(neck: &GrassmannNecklace) -> Derangement {
    let n = neck.n();
    let mut images = vec![0; n];
    for i in 1..=n {
        let cur = neck.term(i);
        let next = neck.terms[i % n];
        let j = next.difference(cur).min_elem().expect("validated step adds one element");
        images[j - 1] = i;
    }
    Derangement::new(images).expect("validated necklace yields a derangement")
}

/// Rebuilds the necklace from π: I_1 is the excedance set, and the element
/// entering at step i is π^{-1}(i).
pub fn necklace_from_derangement(pi: &Derangement) -> GrassmannNecklace {
    let n = pi.n();
    let inv = pi.inverse();
    let i1 = Subset::from_elems(&pi.excedances());
    let k = i1.len();
    let mut terms = vec![i1];
    for i in 1..n {
        let prev = terms[i - 1];
        terms.push(prev.swap(i, inv.image(i)));
    }
    GrassmannNecklace::new(k, n, terms).expect("derangement induces a valid necklace")
}

/// Necklace of a matroid: I_i is the lexicographically minimal basis in the
/// cyclically shifted order i < i+1 < … < n < 1 < … < i−1.
pub fn necklace_from_matroid(matroid: &PositroidMatroid) -> Result<GrassmannNecklace, NecklaceError> {
    let n = matroid.n();
    let k = matroid.k();
    let mut terms = Vec::with_capacity(n);
    for i in 1..=n {
        let key = |s: &Subset| -> Vec<usize> {
            let mut v: Vec<usize> = s.elems().iter().map(|&e| (e + n - i) % n).collect();
            v.sort_unstable();
            v
        };
        let best = matroid
            .bases()
            .iter()
            .min_by_key(|s| key(s))
            .copied()
            .ok_or(NecklaceError::BadShape(0))?;
        terms.push(best);
    }
    GrassmannNecklace::new(k, n, terms)
}

/// A cell is of Schubert type when π^{-1} has at most one descent; those are
/// exactly the cells whose generic contour needs no crossings at t ≪ 0.
pub fn is_tp_schubert(pi: &Derangement) -> bool {
    let inv = pi.inverse();
    let n = inv.n();
    let descents = (1..n).filter(|&i| inv.image(i) > inv.image(i + 1)).count();
    descents <= 1
}

/// Partition shape attached to the pivot set I_1 = {i_1 < … < i_k} in Gr(k,n):
/// λ_r = (n − k) − (i_r − r). Rows may be zero; the shape is weakly decreasing.
pub fn shape_from_pivots(pivots: Subset, k: usize, n: usize) -> Vec<usize> {
    let e = pivots.elems();
    assert_eq!(e.len(), k, "pivot set must have k elements");
    e.iter().enumerate().map(|(r, &i)| (n - k) - (i - (r + 1))).collect()
}

/// Convenience: map from each i to the pair (i, π(i)) sorted by i.
pub fn arc_map(pi: &Derangement) -> BTreeMap<usize, usize> {
    (1..=pi.n()).map(|i| (i, pi.image(i))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn subset(label: &str, n: usize) -> Subset {
        Subset::parse_label(label, n).unwrap()
    }

    fn running_example_necklace() -> GrassmannNecklace {
        let labels = ["1257", "2357", "3457", "4567", "5678", "6789", "1789", "1289", "1259"];
        let terms = labels.iter().map(|l| subset(l, 9)).collect();
        GrassmannNecklace::new(4, 9, terms).unwrap()
    }

    #[test]
    fn necklace_to_derangement_round_trip() {
        let neck = running_example_necklace();
        let pi = derangement_from_necklace(&neck);
        assert_eq!(pi.images(), &[6, 7, 1, 2, 8, 3, 9, 4, 5]);
        let back = necklace_from_derangement(&pi);
        assert_eq!(back, neck);
    }

    #[test]
    fn excedances_equal_first_term() {
        let neck = running_example_necklace();
        let pi = derangement_from_necklace(&neck);
        assert_eq!(Subset::from_elems(&pi.excedances()), neck.term(1));
    }

    #[test]
    fn invalid_necklace_step_rejected() {
        // Tamper with one term of a valid necklace.
        let mut terms: Vec<Subset> =
            running_example_necklace().terms().to_vec();
        terms[2] = subset("3456", 9);
        assert!(matches!(
            GrassmannNecklace::new(4, 9, terms),
            Err(NecklaceError::BadStep { .. })
        ));
    }

    #[test]
    fn derangement_validation() {
        assert!(Derangement::new(vec![2, 1]).is_ok());
        assert_eq!(Derangement::new(vec![1, 2]), Err(DerangementError::FixedPoint(1)));
        assert_eq!(Derangement::new(vec![2, 2]), Err(DerangementError::NotPermutation(2)));
    }

    #[test]
    fn schubert_criterion() {
        let yes = Derangement::new(vec![6, 7, 1, 2, 8, 3, 9, 4, 5]).unwrap();
        assert!(is_tp_schubert(&yes));
        let no = Derangement::new(vec![7, 4, 2, 8, 1, 3, 9, 6, 5]).unwrap();
        assert!(!is_tp_schubert(&no));
        // The TP cell of Gr(2,4): pi = (3,4,1,2).
        let tp = Derangement::new(vec![3, 4, 1, 2]).unwrap();
        assert!(is_tp_schubert(&tp));
    }

    #[test]
    fn shapes_from_pivot_sets() {
        assert_eq!(shape_from_pivots(subset("1257", 9), 4, 9), vec![5, 5, 3, 2]);
        assert_eq!(shape_from_pivots(subset("1247", 9), 4, 9), vec![5, 5, 4, 2]);
        assert_eq!(shape_from_pivots(subset("12", 4), 2, 4), vec![2, 2]);
    }

    #[test]
    fn matroid_necklace_matches_direct_construction() {
        // Full uniform matroid of Gr(2,4): necklace is (12, 23, 34, 14).
        let bases = Subset::k_subsets(4, 2);
        let m = PositroidMatroid::new(2, 4, bases);
        let neck = necklace_from_matroid(&m).unwrap();
        let labels: Vec<String> = neck.terms().iter().map(|s| s.label()).collect();
        assert_eq!(labels, vec!["12", "23", "34", "14"]);
        let pi = derangement_from_necklace(&neck);
        assert_eq!(pi.images(), &[3, 4, 1, 2]);
    }

    #[test]
    fn matroid_with_forbidden_basis() {
        // All 2-subsets of [4] except {3,4}: necklace (12, 23, 13, 14), pi = (2,4,1,3).
        let bases: Vec<Subset> = Subset::k_subsets(4, 2)
            .into_iter()
            .filter(|s| *s != Subset::from_elems(&[3, 4]))
            .collect();
        let m = PositroidMatroid::new(2, 4, bases);
        let neck = necklace_from_matroid(&m).unwrap();
        let labels: Vec<String> = neck.terms().iter().map(|s| s.label()).collect();
        assert_eq!(labels, vec!["12", "23", "13", "14"]);
        let pi = derangement_from_necklace(&neck);
        assert_eq!(pi.images(), &[2, 4, 1, 3]);
    }
}
