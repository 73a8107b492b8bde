//! Dense labelled matrices over GF(q).

use std::fmt;

use crate::field::{Elem, Field, Sesqui};
use crate::{Error, Label, Result};

/// A dense matrix over a finite field with labelled rows and columns.
#[derive(Clone, PartialEq, Eq)]
pub struct FMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
    row_labels: Vec<Label>,
    col_labels: Vec<Label>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix over {:?} rows={:?} cols={:?}", self.field, self.row_labels, self.col_labels)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

fn check_distinct(labels: &[Label]) -> Result<()> {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateLabel(w[0]));
        }
    }
    Ok(())
}

impl FMatrix {
    /// Zero matrix with labels `0..rows` and `0..cols`.
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> FMatrix {
        FMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
            row_labels: (0..rows as Label).collect(),
            col_labels: (0..cols as Label).collect(),
        }
    }

    pub fn identity(field: &Field, n: usize) -> FMatrix {
        let mut m = FMatrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when there are no rows.
    pub fn from_rows(field: &Field, cols: usize, rows: &[Vec<Elem>]) -> Result<FMatrix> {
        let mut m = FMatrix::zeros(field, rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &x) in row.iter().enumerate() {
                if x as usize >= field.order() {
                    return Err(Error::DimensionMismatch(format!(
                        "entry {x} is not an element of GF({})",
                        field.order()
                    )));
                }
                m.set(r, c, x);
            }
        }
        Ok(m)
    }

    pub fn with_labels(mut self, row_labels: Vec<Label>, col_labels: Vec<Label>) -> Result<FMatrix> {
        if row_labels.len() != self.rows || col_labels.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix given {} row and {} column labels",
                self.rows,
                self.cols,
                row_labels.len(),
                col_labels.len()
            )));
        }
        check_distinct(&row_labels)?;
        check_distinct(&col_labels)?;
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.col_labels
    }

    pub fn row_pos(&self, label: Label) -> Option<usize> {
        self.row_labels.iter().position(|&l| l == label)
    }

    pub fn col_pos(&self, label: Label) -> Option<usize> {
        self.col_labels.iter().position(|&l| l == label)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, x: Elem) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        self.rows().map(|r| r.to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols && self.row_labels == self.col_labels
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    /// Submatrix by positions; labels follow.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> FMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                data.push(self.get(r, c));
            }
        }
        FMatrix {
            field: self.field.clone(),
            rows: rows.len(),
            cols: cols.len(),
            data,
            row_labels: rows.iter().map(|&r| self.row_labels[r]).collect(),
            col_labels: cols.iter().map(|&c| self.col_labels[c]).collect(),
        }
    }

    /// Submatrix by labels.
    pub fn select(&self, rows: &[Label], cols: &[Label]) -> Result<FMatrix> {
        let rp = rows
            .iter()
            .map(|&l| self.row_pos(l).ok_or(Error::UnknownVertex(l)))
            .collect::<Result<Vec<_>>>()?;
        let cp = cols
            .iter()
            .map(|&l| self.col_pos(l).ok_or(Error::UnknownVertex(l)))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.submatrix(&rp, &cp))
    }

    pub fn transpose(&self) -> FMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c));
            }
        }
        FMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            data,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    /// Applies `f` entrywise.
    pub fn map(&self, f: impl Fn(Elem) -> Elem) -> FMatrix {
        let mut m = self.clone();
        for x in m.data.iter_mut() {
            *x = f(*x);
        }
        m
    }

    /// Matrix product; rows labelled by `self`, columns by `other`.
    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = FMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out.row_labels = self.row_labels.clone();
        out.col_labels = other.col_labels.clone();
        Ok(out)
    }

    /// Product after padding both operands with zeros so that the inner
    /// dimensions agree.
    pub fn mul_padded(&self, other: &FMatrix) -> FMatrix {
        let f = &self.field;
        let mut out = FMatrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols.min(other.rows) {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add(out.get(r, c), f.mul(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix sum of different shapes".into()));
        }
        let mut m = self.clone();
        for (x, &y) in m.data.iter_mut().zip(&other.data) {
            *x = self.field.add(*x, y);
        }
        Ok(m)
    }

    /// Horizontal concatenation `(self | other)`; column labels of `other`
    /// are shifted past those of `self` when they would clash.
    pub fn hcat(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.rows, other.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.extend_from_slice(other.row(r));
            rows.push(row);
        }
        let mut m = FMatrix::from_rows(&self.field, self.cols + other.cols, &rows).unwrap();
        m.row_labels = self.row_labels.clone();
        m
    }

    /// Vertical concatenation.
    pub fn vcat(&self, other: &FMatrix) -> FMatrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.to_rows();
        rows.extend(other.to_rows());
        let mut m = FMatrix::from_rows(&self.field, self.cols, &rows).unwrap();
        m.col_labels = self.col_labels.clone();
        m
    }

    /// Block matrix `[[a, b], [c, d]]`.
    pub fn block(a: &FMatrix, b: &FMatrix, c: &FMatrix, d: &FMatrix) -> FMatrix {
        a.hcat(b).vcat(&c.hcat(d))
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    /// Reduced row echelon form and the pivot column positions.
    pub fn rref(&self) -> (FMatrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c));
            for j in 0..m.cols {
                let v = f.mul(m.get(r, j), inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                let a = m.get(i, c);
                if i != r && a != 0 {
                    for j in 0..m.cols {
                        let v = f.sub(m.get(i, j), f.mul(a, m.get(r, j)));
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
        self.row_labels.swap(a, b);
    }
}

fn rank_gf2(m: &FMatrix) -> usize {
    let words = m.cols.div_ceil(64);
    let mut rows: Vec<Vec<u64>> = (0..m.rows)
        .map(|r| {
            let mut w = vec![0u64; words];
            for (c, &x) in m.row(r).iter().enumerate() {
                if x != 0 {
                    w[c / 64] |= 1 << (c % 64);
                }
            }
            w
        })
        .collect();
    let mut rank = 0;
    for c in 0..m.cols {
        let (wi, bit) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][wi] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[wi] & bit != 0 {
                for (a, b) in row.iter_mut().zip(&pivot) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over the matrix's field. Empty matrices have rank 0.
pub fn rank(m: &FMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    if m.field.is_binary() {
        return rank_gf2(m);
    }
    m.rref().1.len()
}

/// The update `m'[i,j] = m[i,j] - sigma(cx(i)) cy(j) / sigma(t) - sigma(cy(i)) cx(j) / t`
/// on a square matrix; `cx` and `cy` are given by position.
pub fn star(m: &FMatrix, sigma: &Sesqui, cx: &[Elem], cy: &[Elem], t: Elem) -> Result<FMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows, m.cols));
    }
    star_rect(m, sigma, (cx, cy), (cx, cy), t)
}

/// Rectangular form of [`star`]: `rows` gives `(cx, cy)` evaluated at the
/// row indices and `cols` at the column indices.
pub fn star_rect(
    m: &FMatrix,
    sigma: &Sesqui,
    rows: (&[Elem], &[Elem]),
    cols: (&[Elem], &[Elem]),
    t: Elem,
) -> Result<FMatrix> {
    if t == 0 {
        return Err(Error::ZeroT);
    }
    if sigma.field() != m.field() {
        return Err(Error::FieldMismatch);
    }
    if rows.0.len() != m.rows || rows.1.len() != m.rows || cols.0.len() != m.cols || cols.1.len() != m.cols {
        return Err(Error::DimensionMismatch("star coefficient vectors do not match the matrix".into()));
    }
    let f = m.field();
    let inv_st = f.inv(sigma.apply(t));
    let inv_t = f.inv(t);
    let mut out = m.clone();
    for i in 0..m.rows {
        let a = f.mul(sigma.apply(rows.0[i]), inv_st);
        let b = f.mul(sigma.apply(rows.1[i]), inv_t);
        if a == 0 && b == 0 {
            continue;
        }
        for j in 0..m.cols {
            let d = f.add(f.mul(a, cols.1[j]), f.mul(b, cols.0[j]));
            out.set(i, j, f.sub(out.get(i, j), d));
        }
    }
    Ok(out)
}

pub fn is_sigma_symmetric(m: &FMatrix, sigma: &Sesqui) -> Result<bool> {
    if !m.is_square() {
        return Err(Error::NotSquare(m.rows, m.cols));
    }
    for i in 0..m.rows {
        for j in 0..m.cols {
            if m.get(i, j) != sigma.apply(m.get(j, i)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Finds `u` with `u . basis = target`, if `target` lies in the row space.
pub fn solve_row(target: &[Elem], basis: &FMatrix) -> Option<Vec<Elem>> {
    let f = basis.field();
    let (k, n) = (basis.nrows(), basis.ncols());
    if target.len() != n {
        return None;
    }
    // Solve basis^t u^t = target^t: n equations in k unknowns.
    let mut rows: Vec<Vec<Elem>> = (0..n)
        .map(|c| {
            let mut row: Vec<Elem> = (0..k).map(|r| basis.get(r, c)).collect();
            row.push(target[c]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]);
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            let a = row[c];
            if i != r && a != 0 {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x = f.sub(*x, f.mul(a, y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| row[k] != 0) {
        return None;
    }
    let mut u = vec![0; k];
    for (i, &c) in pivots.iter().enumerate() {
        u[c] = rows[i][k];
    }
    Some(u)
}

/// Positions of a greedy maximal independent set of rows, scanning in order.
pub fn greedy_row_basis(m: &FMatrix) -> Vec<usize> {
    let f = m.field();
    let mut echelon: Vec<(usize, Vec<Elem>)> = Vec::new();
    let mut chosen = Vec::new();
    for r in 0..m.nrows() {
        let mut v = m.row(r).to_vec();
        for (pc, prow) in &echelon {
            let a = v[*pc];
            if a != 0 {
                for (x, &y) in v.iter_mut().zip(prow) {
                    *x = f.sub(*x, f.mul(a, y));
                }
            }
        }
        if let Some(pc) = v.iter().position(|&x| x != 0) {
            let inv = f.inv(v[pc]);
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
            echelon.push((pc, v));
            chosen.push(r);
        }
    }
    chosen
}
