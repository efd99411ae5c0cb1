//! Dense polynomial matrices with exact fraction-free determinants.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::{CoefPoly, PolyError, VarTable};

/// Threshold above which the memoized cofactor expansion is preferred.
const SPARSE_ZERO_FRACTION: f64 = 0.6;
/// Mask-based expansion only pays off (and fits) for small dimensions.
const SPARSE_MAX_DIM: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMatrix {
    table: Arc<VarTable>,
    conductor: u64,
    rows: usize,
    cols: usize,
    entries: Vec<CoefPoly>,
}

struct Component {
    rows: Vec<usize>,
    cols: Vec<usize>,
}

/// Sign of the permutation sending position i to order[i].
fn permutation_sign(order: &[usize]) -> i32 {
    let mut seen = vec![false; order.len()];
    let mut sign = 1;
    for start in 0..order.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = order[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl PolyMatrix {
    pub fn new(
        table: Arc<VarTable>,
        conductor: u64,
        rows: usize,
        cols: usize,
        entries: Vec<CoefPoly>,
    ) -> PolyMatrix {
        assert_eq!(rows * cols, entries.len());
        PolyMatrix {
            table,
            conductor,
            rows,
            cols,
            entries,
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> CoefPoly>(
        table: Arc<VarTable>,
        conductor: u64,
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        PolyMatrix::new(table, conductor, rows, cols, entries)
    }

    pub fn identity(table: Arc<VarTable>, conductor: u64, n: usize) -> PolyMatrix {
        PolyMatrix::from_fn(table.clone(), conductor, n, n, |i, j| {
            if i == j {
                CoefPoly::one(table.clone(), conductor)
            } else {
                CoefPoly::zero(table.clone(), conductor)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn at(&self, i: usize, j: usize) -> &CoefPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: CoefPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub fn transpose(&self) -> PolyMatrix {
        PolyMatrix::from_fn(
            self.table.clone(),
            self.conductor,
            self.cols,
            self.rows,
            |i, j| self.at(j, i).clone(),
        )
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols, other.rows);
        PolyMatrix::from_fn(
            self.table.clone(),
            self.conductor,
            self.rows,
            other.cols,
            |i, j| {
                let mut acc = CoefPoly::zero(self.table.clone(), self.conductor);
                for k in 0..self.cols {
                    acc = acc.add(&self.at(i, k).mul(other.at(k, j)));
                }
                acc
            },
        )
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self.at(i, j) != self.at(j, i) {
                    return false;
                }
            }
        }
        true
    }

    fn zero_fraction(&self) -> f64 {
        if self.entries.is_empty() {
            return 0.0;
        }
        let zeros = self.entries.iter().filter(|e| e.is_zero()).count();
        zeros as f64 / self.entries.len() as f64
    }

    /// Exact determinant. The nonzero bipartite graph is split into
    /// connected components first (the determinant factors over them);
    /// each component then goes through fraction-free Bareiss elimination
    /// with a fewest-terms pivot, or through a memoized expansion along
    /// fewest-nonzero rows when it is at least 60% zeros.
    pub fn det_fraction_free(&self) -> Result<CoefPoly, PolyError> {
        if self.rows != self.cols {
            return Err(PolyError::NonSquareMatrix);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(CoefPoly::one(self.table.clone(), self.conductor));
        }
        let comps = self.components();
        for comp in &comps {
            if comp.rows.len() != comp.cols.len() {
                // Structurally singular: no permutation avoids a zero.
                return Ok(CoefPoly::zero(self.table.clone(), self.conductor));
            }
        }
        if comps.len() == 1 {
            return Ok(self.det_connected());
        }
        let mut row_order = Vec::with_capacity(n);
        let mut col_order = Vec::with_capacity(n);
        let mut det = CoefPoly::one(self.table.clone(), self.conductor);
        for comp in &comps {
            row_order.extend_from_slice(&comp.rows);
            col_order.extend_from_slice(&comp.cols);
            let block = PolyMatrix::from_fn(
                self.table.clone(),
                self.conductor,
                comp.rows.len(),
                comp.cols.len(),
                |i, j| self.at(comp.rows[i], comp.cols[j]).clone(),
            );
            det = det.mul(&block.det_connected());
            if det.is_zero() {
                return Ok(det);
            }
        }
        if permutation_sign(&row_order) * permutation_sign(&col_order) < 0 {
            det = det.neg();
        }
        Ok(det)
    }

    /// Connected components of the bipartite nonzero graph, each as
    /// (sorted rows, sorted cols).
    fn components(&self) -> Vec<Component> {
        let n = self.rows;
        let mut row_seen = vec![false; n];
        let mut col_seen = vec![false; n];
        let mut comps = Vec::new();
        for start in 0..n {
            if row_seen[start] {
                continue;
            }
            let mut rows = Vec::new();
            let mut cols = Vec::new();
            let mut stack = vec![(true, start)];
            row_seen[start] = true;
            while let Some((is_row, idx)) = stack.pop() {
                if is_row {
                    rows.push(idx);
                    for c in 0..n {
                        if !col_seen[c] && !self.at(idx, c).is_zero() {
                            col_seen[c] = true;
                            stack.push((false, c));
                        }
                    }
                } else {
                    cols.push(idx);
                    for r in 0..n {
                        if !row_seen[r] && !self.at(r, idx).is_zero() {
                            row_seen[r] = true;
                            stack.push((true, r));
                        }
                    }
                }
            }
            rows.sort_unstable();
            cols.sort_unstable();
            comps.push(Component { rows, cols });
        }
        // Columns touched by no row at all form their own zero blocks.
        for c in 0..n {
            if !col_seen[c] {
                comps.push(Component {
                    rows: vec![],
                    cols: vec![c],
                });
            }
        }
        comps
    }

    fn det_connected(&self) -> CoefPoly {
        let n = self.rows;
        if n == 0 {
            return CoefPoly::one(self.table.clone(), self.conductor);
        }
        if n <= SPARSE_MAX_DIM && self.zero_fraction() >= SPARSE_ZERO_FRACTION {
            return self.det_sparse();
        }
        self.det_bareiss()
    }

    fn det_bareiss(&self) -> CoefPoly {
        let n = self.rows;
        let mut m: Vec<Vec<CoefPoly>> = (0..n)
            .map(|i| (0..n).map(|j| self.at(i, j).clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = CoefPoly::one(self.table.clone(), self.conductor);
        for k in 0..n - 1 {
            // Pivot with the fewest terms; ties broken by row then column.
            let mut pivot: Option<(usize, usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if m[i][j].is_zero() {
                        continue;
                    }
                    let t = m[i][j].num_terms();
                    if pivot.map(|(_, _, best)| t < best).unwrap_or(true) {
                        pivot = Some((i, j, t));
                    }
                }
            }
            let (pi, pj, _) = match pivot {
                Some(p) => p,
                None => return CoefPoly::zero(self.table.clone(), self.conductor),
            };
            if pi != k {
                m.swap(pi, k);
                sign = -sign;
            }
            if pj != k {
                for row in m.iter_mut() {
                    row.swap(pj, k);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                    m[i][j] = num
                        .exact_div(&prev)
                        .expect("fraction-free elimination divides exactly");
                }
            }
            prev = m[k][k].clone();
        }
        let det = m[n - 1][n - 1].clone();
        if sign < 0 {
            det.neg()
        } else {
            det
        }
    }

    fn det_sparse(&self) -> CoefPoly {
        let n = self.rows;
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        let mut memo: HashMap<(u32, u32), CoefPoly> = HashMap::new();
        self.det_sparse_rec(full, full, &mut memo)
    }

    fn det_sparse_rec(
        &self,
        rows_mask: u32,
        cols_mask: u32,
        memo: &mut HashMap<(u32, u32), CoefPoly>,
    ) -> CoefPoly {
        if rows_mask == 0 {
            return CoefPoly::one(self.table.clone(), self.conductor);
        }
        if let Some(hit) = memo.get(&(rows_mask, cols_mask)) {
            return hit.clone();
        }
        // Expand along the active row with the fewest nonzero active entries.
        let mut best_row = None;
        let mut best_count = usize::MAX;
        for r in 0..self.rows {
            if rows_mask & (1 << r) == 0 {
                continue;
            }
            let count = (0..self.cols)
                .filter(|&c| cols_mask & (1 << c) != 0 && !self.at(r, c).is_zero())
                .count();
            if count < best_count {
                best_count = count;
                best_row = Some(r);
            }
        }
        let r = best_row.expect("nonempty row mask");
        let mut acc = CoefPoly::zero(self.table.clone(), self.conductor);
        if best_count > 0 {
            let row_pos = (rows_mask & ((1 << r) - 1)).count_ones();
            for c in 0..self.cols {
                if cols_mask & (1 << c) == 0 || self.at(r, c).is_zero() {
                    continue;
                }
                let col_pos = (cols_mask & ((1 << c) - 1)).count_ones();
                let minor =
                    self.det_sparse_rec(rows_mask & !(1 << r), cols_mask & !(1 << c), memo);
                let term = self.at(r, c).mul(&minor);
                if (row_pos + col_pos) % 2 == 0 {
                    acc = acc.add(&term);
                } else {
                    acc = acc.sub(&term);
                }
            }
        }
        memo.insert((rows_mask, cols_mask), acc.clone());
        acc
    }

    pub fn to_string_grid(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let grid = self.to_string_grid();
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| grid.iter().map(|row| row[j].len()).max().unwrap_or(0))
            .collect();
        for row in &grid {
            write!(f, "[ ")?;
            for (j, cell) in row.iter().enumerate() {
                write!(f, "{:>width$}", cell, width = widths[j])?;
                if j + 1 < self.cols {
                    write!(f, "  ")?;
                }
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}
