//! Le-diagrams: {0,+} fillings of a Young diagram inside a k×(n−k) box,
//! their border labels, and the planar network that parameterizes the cell.
//!
//! Border labeling walks the southeast border of the shape from the
//! northeast corner of the rectangle: south steps pick up row labels (the
//! pivot set I_1), west steps pick up column labels. The Le-property forbids
//! a 0 that has a + above it in its column and a + to its left in its row.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::grassmann::{GrassmannError, GrassmannPoint};
use crate::positroid::{Derangement, GrassmannNecklace};
use crate::subset::Subset;

#[derive(Debug, Error, PartialEq)]
pub enum LeError {
    #[error("shape must be weakly decreasing with at most n-k columns and k rows")]
    BadShape,
    #[error("filling does not match shape at row {0}")]
    FillMismatch(usize),
    #[error("Le-property violated at row {row}, column {col}: 0 with a + above and a + to its left")]
    LeViolation { row: usize, col: usize },
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("text form is empty or has a widening row")]
    BadText,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeDiagram {
    k: usize,
    n: usize,
    shape: Vec<usize>,
    fill: Vec<Vec<bool>>,
}

impl LeDiagram {
    pub fn new(k: usize, n: usize, shape: Vec<usize>, fill: Vec<Vec<bool>>) -> Result<LeDiagram, LeError> {
        if k == 0 || k >= n || shape.len() != k {
            return Err(LeError::BadShape);
        }
        let width = n - k;
        for r in 0..k {
            if shape[r] > width || (r > 0 && shape[r] > shape[r - 1]) {
                return Err(LeError::BadShape);
            }
        }
        if fill.len() != k {
            return Err(LeError::FillMismatch(fill.len()));
        }
        for (r, row) in fill.iter().enumerate() {
            if row.len() != shape[r] {
                return Err(LeError::FillMismatch(r));
            }
        }
        let d = LeDiagram { k, n, shape, fill };
        for r in 0..k {
            for c in 0..d.shape[r] {
                if !d.fill[r][c] && d.zero_violates(r, c) {
                    return Err(LeError::LeViolation { row: r, col: c });
                }
            }
        }
        Ok(d)
    }

    fn zero_violates(&self, r: usize, c: usize) -> bool {
        let above = (0..r).any(|r2| self.fill[r2][c]);
        let left = (0..c).any(|c2| self.fill[r][c2]);
        above && left
    }

    pub fn all_plus(k: usize, n: usize, shape: Vec<usize>) -> Result<LeDiagram, LeError> {
        let fill = shape.iter().map(|&w| vec![true; w]).collect();
        LeDiagram::new(k, n, shape, fill)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn width(&self) -> usize {
        self.n - self.k
    }

    /// 0-based box query; (r, c) must lie inside the shape.
    pub fn is_plus(&self, r: usize, c: usize) -> bool {
        self.fill[r][c]
    }

    /// Column heights λ'_c for 0-based c in 0..n-k.
    pub fn col_height(&self, c: usize) -> usize {
        self.shape.iter().filter(|&&w| w > c).count()
    }

    /// Border label of row r (0-based): position of its south step.
    pub fn row_label(&self, r: usize) -> usize {
        (r + 1) + self.width() - self.shape[r]
    }

    /// Border label of column c (0-based): position of its west step.
    pub fn col_label(&self, c: usize) -> usize {
        self.col_height(c) + self.width() - c
    }

    /// Pivot set I_1 = row labels.
    pub fn pivots(&self) -> Subset {
        Subset::from_elems(&(0..self.k).map(|r| self.row_label(r)).collect::<Vec<_>>())
    }

    /// Number of + boxes = dimension of the cell.
    pub fn dimension(&self) -> usize {
        self.fill.iter().map(|row| row.iter().filter(|&&b| b).count()).sum()
    }

    /// + boxes in reading order (top row first, left to right).
    pub fn plus_boxes(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for r in 0..self.k {
            for c in 0..self.shape[r] {
                if self.fill[r][c] {
                    out.push((r, c));
                }
            }
        }
        out
    }

    /// Full width, nonempty last row, and a + in every row and column.
    pub fn is_irreducible(&self) -> bool {
        if self.shape[0] != self.width() || self.shape[self.k - 1] == 0 {
            return false;
        }
        for r in 0..self.k {
            if !self.fill[r].iter().any(|&b| b) {
                return false;
            }
        }
        for c in 0..self.width() {
            let h = self.col_height(c);
            if h == 0 || !(0..h).any(|r| self.fill[r][c]) {
                return false;
            }
        }
        true
    }

    pub fn to_text(&self) -> String {
        self.fill
            .iter()
            .map(|row| row.iter().map(|&b| if b { '+' } else { '0' }).collect::<String>())
            .collect::<Vec<_>>()
            .join("\n")
    }

    /// Parses rows of '+'/'0'. The first row must be the widest; k and n are
    /// inferred as (#rows, #rows + first-row width), which is exactly the
    /// irreducible situation.
    pub fn from_text(text: &str) -> Result<LeDiagram, LeError> {
        let mut shape = Vec::new();
        let mut fill = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for ch in line.chars() {
                match ch {
                    '+' => row.push(true),
                    '0' => row.push(false),
                    _ => return Err(LeError::BadText),
                }
            }
            shape.push(row.len());
            fill.push(row);
        }
        let k = fill.len();
        if k == 0 || shape[0] == 0 {
            return Err(LeError::BadText);
        }
        let n = k + shape[0];
        LeDiagram::new(k, n, shape, fill)
    }

    /// The cell's matrix in reduced row echelon form, from one positive
    /// weight per + box (reading order). Entries are exact rationals, so
    /// minors outside the cell's matroid vanish identically.
    ///
    /// Row r's source sits at its south border step; paths step left along
    /// rows of + boxes and down columns, exiting at a column's west step.
    /// The down edge out of a + box carries that box's weight. The entry in
    /// a non-pivot column is the path sum times (−1)^(#pivots between).
    pub fn cell_matrix(&self, weights: &[BigRational]) -> Result<Vec<Vec<BigRational>>, LeError> {
        let boxes = self.plus_boxes();
        if weights.len() != boxes.len() {
            return Err(LeError::WeightCount { expected: boxes.len(), got: weights.len() });
        }
        Ok(cell_matrix_generic(self, weights))
    }

    /// Same construction over f64, for iterative fits that re-evaluate the
    /// matrix many times and don't need exact zeros.
    pub fn cell_matrix_f64(&self, weights: &[f64]) -> Result<Vec<Vec<f64>>, LeError> {
        let boxes = self.plus_boxes();
        if weights.len() != boxes.len() {
            return Err(LeError::WeightCount { expected: boxes.len(), got: weights.len() });
        }
        Ok(cell_matrix_generic(self, weights))
    }

    pub fn point_from_weights(&self, weights: &[BigRational]) -> Result<GrassmannPoint, LeError> {
        let rows = self.cell_matrix(weights)?;
        GrassmannPoint::from_rational_rows(self.k, self.n, rows)
            .map_err(|_| LeError::BadShape)
    }

    /// Deterministic sample of the cell: dyadic weights m/1024 with
    /// m ∈ [512, 2048], drawn from a seeded stream.
    pub fn random_point(&self, seed: u64) -> GrassmannPoint {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<BigRational> = (0..self.dimension())
            .map(|_| {
                let m: i64 = rng.gen_range(512..=2048);
                BigRational::new(BigInt::from(m), BigInt::from(1024))
            })
            .collect();
        self.point_from_weights(&weights).expect("weight count matches dimension")
    }
}

fn cell_matrix_generic<T>(le: &LeDiagram, weights: &[T]) -> Vec<Vec<T>>
where
    T: Clone + Zero + One + std::ops::AddAssign + std::ops::Neg<Output = T>,
{
    let boxes = le.plus_boxes();
    let widx: BTreeMap<(usize, usize), usize> =
        boxes.iter().enumerate().map(|(i, &b)| (b, i)).collect();
    // paths[(r,c)][c2] = weighted path sum from box (r,c) to the sink of column c2.
    let mut paths: BTreeMap<(usize, usize), BTreeMap<usize, T>> = BTreeMap::new();
    for r in (0..le.k).rev() {
        for c in 0..le.shape[r] {
            if !le.fill[r][c] {
                continue;
            }
            let w = &weights[widx[&(r, c)]];
            let mut acc: BTreeMap<usize, T> = BTreeMap::new();
            let below = (r + 1..le.k).find(|&r2| le.shape[r2] > c && le.fill[r2][c]);
            match below {
                Some(r2) => {
                    for (dest, v) in &paths[&(r2, c)] {
                        *acc.entry(*dest).or_insert_with(T::zero) += w.clone() * v.clone();
                    }
                }
                None => {
                    *acc.entry(c).or_insert_with(T::zero) += w.clone();
                }
            }
            if let Some(c2) = (0..c).rev().find(|&c2| le.fill[r][c2]) {
                for (dest, v) in &paths[&(r, c2)] {
                    *acc.entry(*dest).or_insert_with(T::zero) += v.clone();
                }
            }
            paths.insert((r, c), acc);
        }
    }
    let pivots: Vec<usize> = (0..le.k).map(|r| le.row_label(r)).collect();
    let mut rows = vec![vec![T::zero(); le.n]; le.k];
    for r in 0..le.k {
        rows[r][pivots[r] - 1] = T::one();
        let Some(entry) = le.fill[r].iter().rposition(|&b| b) else {
            continue;
        };
        for (c2, v) in &paths[&(r, entry)] {
            let j = le.col_label(*c2);
            let between = pivots.iter().filter(|&&p| pivots[r] < p && p < j).count();
            rows[r][j - 1] = if between % 2 == 1 { -v.clone() } else { v.clone() };
        }
    }
    rows
}

/// All irreducible Le-diagrams of Gr(k,n): full-width shapes with nonempty
/// last row, fillings satisfying the Le-property with a + in every row and
/// column. Deterministic order (shapes lex-descending, fillings by DFS).
pub fn enumerate_irreducible(k: usize, n: usize) -> Vec<LeDiagram> {
    let mut out = Vec::new();
    let width = n - k;
    if k == 0 || width == 0 {
        return out;
    }
    let mut shape = vec![0usize; k];
    shape[0] = width;
    enumerate_shapes(k, width, 1, &mut shape, &mut |shape| {
        let mut fill: Vec<Vec<bool>> = shape.iter().map(|&w| vec![false; w]).collect();
        fill_boxes(shape, &mut fill, 0, 0, &mut |fill| {
            out.push(LeDiagram {
                k,
                n,
                shape: shape.to_vec(),
                fill: fill.to_vec(),
            });
        });
    });
    out
}

/// Irreducible Le-fillings of one fixed shape, in a stable DFS order.
pub fn irreducible_fillings_of_shape(k: usize, n: usize, shape: &[usize]) -> Vec<LeDiagram> {
    let mut out = Vec::new();
    let mut fill: Vec<Vec<bool>> = shape.iter().map(|&w| vec![false; w]).collect();
    fill_boxes(shape, &mut fill, 0, 0, &mut |fill| {
        out.push(LeDiagram { k, n, shape: shape.to_vec(), fill: fill.to_vec() });
    });
    out
}

/// All all-plus irreducible diagrams (the TP Schubert cells) of Gr(k,n).
pub fn enumerate_all_plus(k: usize, n: usize) -> Vec<LeDiagram> {
    enumerate_irreducible_shapes(k, n)
        .into_iter()
        .map(|shape| LeDiagram::all_plus(k, n, shape).expect("all-+ satisfies the Le-property"))
        .collect()
}

pub fn enumerate_irreducible_shapes(k: usize, n: usize) -> Vec<Vec<usize>> {
    let width = n - k;
    let mut out = Vec::new();
    if k == 0 || width == 0 {
        return out;
    }
    let mut shape = vec![0usize; k];
    shape[0] = width;
    enumerate_shapes(k, width, 1, &mut shape, &mut |s| out.push(s.to_vec()));
    out
}

fn enumerate_shapes(k: usize, _width: usize, r: usize, shape: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if r == k {
        f(shape);
        return;
    }
    for w in (1..=shape[r - 1]).rev() {
        shape[r] = w;
        enumerate_shapes(k, _width, r + 1, shape, f);
    }
    shape[r] = 0;
}

fn fill_boxes(
    shape: &[usize],
    fill: &mut Vec<Vec<bool>>,
    r: usize,
    c: usize,
    f: &mut impl FnMut(&Vec<Vec<bool>>),
) {
    let k = shape.len();
    if r == k {
        f(fill);
        return;
    }
    if c == shape[r] {
        // Row complete: needs at least one +.
        if !fill[r].iter().any(|&b| b) {
            return;
        }
        fill_boxes(shape, fill, r + 1, 0, f);
        return;
    }
    let col_bottom = !(r + 1..k).any(|r2| shape[r2] > c);
    for &plus in &[true, false] {
        if !plus {
            let above = (0..r).any(|r2| fill[r2][c]);
            let left = (0..c).any(|c2| fill[r][c2]);
            if above && left {
                continue; // Le-property
            }
            if col_bottom && !above {
                continue; // column would end with no +
            }
        }
        fill[r][c] = plus;
        fill_boxes(shape, fill, r, c + 1, f);
    }
    fill[r][c] = false;
}

/// Cell data bundle: derangement, necklace, and Le-diagram of one
/// irreducible positroid cell, plus derived flags.
#[derive(Debug, Clone)]
pub struct PositroidData {
    pub k: usize,
    pub n: usize,
    pub derangement: Derangement,
    pub necklace: GrassmannNecklace,
    pub le: LeDiagram,
    pub tp_schubert: bool,
    pub dimension: usize,
}

impl PositroidData {
    pub fn from_derangement(pi: &Derangement) -> Result<PositroidData, crate::le_plabic::LeSearchError> {
        let le = crate::le_plabic::lediagram_from_derangement(pi)?;
        Ok(Self::assemble(pi.clone(), le))
    }

    pub fn from_lediagram(le: &LeDiagram) -> PositroidData {
        let g = crate::le_plabic::build_g_minus(le);
        let pi = g
            .trips()
            .expect("G- of a Le-diagram is well formed")
            .derangement()
            .expect("G- trips form a derangement");
        Self::assemble(pi, le.clone())
    }

    fn assemble(pi: Derangement, le: LeDiagram) -> PositroidData {
        let necklace = crate::positroid::necklace_from_derangement(&pi);
        let tp_schubert = crate::positroid::is_tp_schubert(&pi);
        let dimension = le.dimension();
        PositroidData {
            k: le.k(),
            n: le.n(),
            derangement: pi,
            necklace,
            le,
            tp_schubert,
            dimension,
        }
    }

    /// Classified matroid of a sample point of the cell.
    pub fn matroid(&self) -> crate::grassmann::PositroidMatroid {
        let p = self.le.random_point(17);
        let (_, m) = p.classify_default().expect("cell sample classifies cleanly");
        m
    }
}

impl GrassmannPoint {
    /// Matroid → necklace → derangement for this point, via classification.
    pub fn cell_derangement(&self, tol: f64) -> Result<Derangement, GrassmannError> {
        let (_, matroid) = self.classify(tol)?;
        let neck = crate::positroid::necklace_from_matroid(&matroid)
            .expect("positroid matroid yields a necklace");
        Ok(crate::positroid::derangement_from_necklace(&neck))
    }
}
