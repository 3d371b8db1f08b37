//! Compressed sparse row matrices over f64.
//!
//! Stored entries are kept sorted by column within each row and exact zeros
//! are pruned at construction time, so `nnz` counts structurally nonzero
//! values only.

use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            row_ptr: vec![0; rows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn scaled_identity(n: usize, alpha: f64) -> Self {
        Self::identity(n).scaled(alpha)
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let triplets: Vec<(usize, usize, f64)> =
            d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(d.len(), d.len(), &triplets).expect("diagonal triplets are in range")
    }

    /// Builds a matrix from (row, col, value) triplets. Duplicate positions
    /// are summed; entries that end up exactly zero are dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        for &(i, j, _) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::dim(format!(
                    "triplet ({i}, {j}) out of range for {rows}x{cols} matrix"
                )));
            }
        }
        let mut sorted: Vec<(usize, usize, f64)> = triplets.to_vec();
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_ptr = vec![0usize; rows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());

        let mut k = 0;
        while k < sorted.len() {
            let (i, j, _) = sorted[k];
            let mut sum = 0.0;
            while k < sorted.len() && sorted[k].0 == i && sorted[k].1 == j {
                sum += sorted[k].2;
                k += 1;
            }
            if sum != 0.0 {
                row_ptr[i + 1] += 1;
                col_idx.push(j);
                values.push(sum);
            }
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseMatrix { rows, cols, row_ptr, col_idx, values })
    }

    /// Assembles directly from CSR arrays. The caller guarantees sorted,
    /// in-range column indices per row and consistent pointer offsets.
    pub(crate) fn from_csr_parts(
        rows: usize,
        cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(row_ptr.len(), rows + 1);
        debug_assert_eq!(col_idx.len(), values.len());
        debug_assert_eq!(*row_ptr.last().unwrap_or(&0), col_idx.len());
        debug_assert!(col_idx.iter().all(|&j| j < cols));
        SparseMatrix { rows, cols, row_ptr, col_idx, values }
    }

    pub fn from_dense(a: &DenseMatrix) -> Self {
        let mut triplets = Vec::new();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let v = a.get(i, j);
                if v != 0.0 {
                    triplets.push((i, j, v));
                }
            }
        }
        Self::from_triplets(a.rows(), a.cols(), &triplets).expect("dense entries are in range")
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row `i` expanded to a dense vector.
    pub fn row_dense(&self, i: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        let (cols, vals) = self.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            out[j] = v;
        }
        out
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let lo = self.row_ptr[i];
        let hi = self.row_ptr[i + 1];
        (&self.col_idx[lo..hi], &self.values[lo..hi])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterates stored entries as (row, col, value).
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// y = A x
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::dim(format!(
                "spmv: vector length {} does not match {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut y = vec![0.0; self.rows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// y = A x without allocation; lengths must already agree.
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            y[i] = acc;
        }
    }

    /// y += A x
    pub fn spmv_add_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.cols);
        assert_eq!(y.len(), self.rows);
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                acc += v * x[j];
            }
            y[i] += acc;
        }
    }

    /// y = A^T x computed without forming the transpose.
    pub fn spmv_transpose(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.rows {
            return Err(Error::dim(format!(
                "transpose spmv: vector length {} does not match {} rows",
                x.len(),
                self.rows
            )));
        }
        let mut y = vec![0.0; self.cols];
        for i in 0..self.rows {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                y[j] += v * xi;
            }
        }
        Ok(y)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut row_ptr = vec![0usize; self.cols + 1];
        for &j in &self.col_idx {
            row_ptr[j + 1] += 1;
        }
        for j in 0..self.cols {
            row_ptr[j + 1] += row_ptr[j];
        }
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut next = row_ptr.clone();
        for i in 0..self.rows {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let p = next[j];
                col_idx[p] = i;
                values[p] = v;
                next[j] += 1;
            }
        }
        SparseMatrix { rows: self.cols, cols: self.rows, row_ptr, col_idx, values }
    }

    pub fn scaled(&self, alpha: f64) -> SparseMatrix {
        if alpha == 0.0 {
            return SparseMatrix::zeros(self.rows, self.cols);
        }
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= alpha;
        }
        out
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(1.0, other)
    }

    pub fn sub(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        self.add_scaled(-1.0, other)
    }

    /// self + alpha * other, merging rows; exact zeros in the result are dropped.
    pub fn add_scaled(&self, alpha: f64, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::dim(format!(
                "add: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.rows {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() || q < cb.len() {
                let (j, v) = if q >= cb.len() || (p < ca.len() && ca[p] < cb[q]) {
                    let out = (ca[p], va[p]);
                    p += 1;
                    out
                } else if p >= ca.len() || cb[q] < ca[p] {
                    let out = (cb[q], alpha * vb[q]);
                    q += 1;
                    out
                } else {
                    let out = (ca[p], va[p] + alpha * vb[q]);
                    p += 1;
                    q += 1;
                    out
                };
                if v != 0.0 {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(SparseMatrix { rows: self.rows, cols: self.cols, row_ptr, col_idx, values })
    }

    pub fn matmul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::dim(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        let mut acc = vec![0.0f64; other.cols];
        let mut mark = vec![false; other.cols];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..self.rows {
            let (ca, va) = self.row(i);
            for (&k, &av) in ca.iter().zip(va) {
                let (cb, vb) = other.row(k);
                for (&j, &bv) in cb.iter().zip(vb) {
                    if !mark[j] {
                        mark[j] = true;
                        touched.push(j);
                    }
                    acc[j] += av * bv;
                }
            }
            touched.sort_unstable();
            for &j in &touched {
                if acc[j] != 0.0 {
                    col_idx.push(j);
                    values.push(acc[j]);
                }
                acc[j] = 0.0;
                mark[j] = false;
            }
            touched.clear();
            row_ptr.push(col_idx.len());
        }
        Ok(SparseMatrix { rows: self.rows, cols: other.cols, row_ptr, col_idx, values })
    }

    /// Multiplies row i by d[i].
    pub fn scale_rows(&self, d: &[f64]) -> Result<SparseMatrix> {
        if d.len() != self.rows {
            return Err(Error::dim("scale_rows: length mismatch".to_string()));
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let lo = out.row_ptr[i];
            let hi = out.row_ptr[i + 1];
            for v in &mut out.values[lo..hi] {
                *v *= d[i];
            }
        }
        Ok(out.pruned())
    }

    /// Multiplies column j by d[j].
    pub fn scale_cols(&self, d: &[f64]) -> Result<SparseMatrix> {
        if d.len() != self.cols {
            return Err(Error::dim("scale_cols: length mismatch".to_string()));
        }
        let mut out = self.clone();
        for (v, &j) in out.values.iter_mut().zip(&out.col_idx) {
            *v *= d[j];
        }
        Ok(out.pruned())
    }

    fn pruned(&self) -> SparseMatrix {
        if self.values.iter().all(|&v| v != 0.0) {
            return self.clone();
        }
        let mut row_ptr = Vec::with_capacity(self.rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.rows {
            let (cs, vs) = self.row(i);
            for (&j, &v) in cs.iter().zip(vs) {
                if v != 0.0 {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix { rows: self.rows, cols: self.cols, row_ptr, col_idx, values }
    }

    /// (A + A^T) / 2
    pub fn symmetric_part(&self) -> Result<SparseMatrix> {
        if !self.is_square() {
            return Err(Error::dim("symmetric_part requires a square matrix".to_string()));
        }
        Ok(self.add(&self.transpose())?.scaled(0.5))
    }

    /// (A - A^T) / 2
    pub fn skew_part(&self) -> Result<SparseMatrix> {
        if !self.is_square() {
            return Err(Error::dim("skew_part requires a square matrix".to_string()));
        }
        Ok(self.sub(&self.transpose())?.scaled(0.5))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::dim("trace requires a square matrix".to_string()));
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// trace(A B) accumulated without forming the product.
    pub fn trace_of_product(&self, other: &SparseMatrix) -> Result<f64> {
        if self.cols != other.rows || self.rows != other.cols {
            return Err(Error::dim(format!(
                "trace_of_product: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        // trace(A B) = sum_i <row_i(A), col_i(B)>
        let bt = other.transpose();
        let mut acc = 0.0;
        for i in 0..self.rows {
            let (ca, va) = self.row(i);
            let (cb, vb) = bt.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() && q < cb.len() {
                if ca[p] < cb[q] {
                    p += 1;
                } else if cb[q] < ca[p] {
                    q += 1;
                } else {
                    acc += va[p] * vb[q];
                    p += 1;
                    q += 1;
                }
            }
        }
        Ok(acc)
    }

    /// Main-diagonal entries as a vector of length min(rows, cols).
    pub fn diag_vector(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.iter().all(|(i, j, _)| i == j)
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.iter().all(|(i, j, _)| j <= i)
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.iter().all(|(i, j, _)| j >= i)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        match self.sub(&self.transpose()) {
            Ok(d) => d.max_abs() <= tol,
            Err(_) => false,
        }
    }

    /// Solves T x = r for lower (forward) or upper (backward) triangular T.
    /// Entries on the wrong side of the diagonal are rejected.
    pub fn triangular_solve(&self, r: &[f64], lower: bool) -> Result<Vec<f64>> {
        if !self.is_square() {
            return Err(Error::dim("triangular_solve requires a square matrix".to_string()));
        }
        if r.len() != self.rows {
            return Err(Error::dim(format!(
                "triangular_solve: rhs length {} does not match order {}",
                r.len(),
                self.rows
            )));
        }
        if lower && !self.is_lower_triangular() {
            return Err(Error::invalid("matrix has entries above the diagonal"));
        }
        if !lower && !self.is_upper_triangular() {
            return Err(Error::invalid("matrix has entries below the diagonal"));
        }
        let n = self.rows;
        let mut x = vec![0.0; n];
        let order: Box<dyn Iterator<Item = usize>> =
            if lower { Box::new(0..n) } else { Box::new((0..n).rev()) };
        for i in order {
            let (cols, vals) = self.row(i);
            let mut acc = r[i];
            let mut diag = 0.0;
            for (&j, &v) in cols.iter().zip(vals) {
                if j == i {
                    diag = v;
                } else {
                    acc -= v * x[j];
                }
            }
            if diag == 0.0 {
                return Err(Error::ZeroDiagonal { row: i });
            }
            x[i] = acc / diag;
        }
        Ok(x)
    }

    /// Assembles [[a11, a12], [a21, a22]] from four conforming blocks.
    pub fn block_2x2(
        a11: &SparseMatrix,
        a12: &SparseMatrix,
        a21: &SparseMatrix,
        a22: &SparseMatrix,
    ) -> Result<SparseMatrix> {
        if a11.rows != a12.rows
            || a21.rows != a22.rows
            || a11.cols != a21.cols
            || a12.cols != a22.cols
        {
            return Err(Error::dim("block_2x2: blocks do not conform".to_string()));
        }
        let n = a11.rows;
        let k = a11.cols;
        let rows = n + a21.rows;
        let cols = k + a12.cols;
        let nnz = a11.nnz() + a12.nnz() + a21.nnz() + a22.nnz();
        let mut row_ptr = Vec::with_capacity(rows + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for i in 0..n {
            let (c1, v1) = a11.row(i);
            col_idx.extend_from_slice(c1);
            values.extend_from_slice(v1);
            let (c2, v2) = a12.row(i);
            col_idx.extend(c2.iter().map(|&j| j + k));
            values.extend_from_slice(v2);
            row_ptr.push(col_idx.len());
        }
        for i in 0..a21.rows {
            let (c1, v1) = a21.row(i);
            col_idx.extend_from_slice(c1);
            values.extend_from_slice(v1);
            let (c2, v2) = a22.row(i);
            col_idx.extend(c2.iter().map(|&j| j + k));
            values.extend_from_slice(v2);
            row_ptr.push(col_idx.len());
        }
        Ok(SparseMatrix { rows, cols, row_ptr, col_idx, values })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SparseMatrix {
        SparseMatrix::from_triplets(3, 3, &[(0, 0, 2.0), (0, 2, 1.0), (1, 1, 3.0), (2, 0, -1.0)])
            .unwrap()
    }

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let a = SparseMatrix::from_triplets(
            2,
            2,
            &[(0, 0, 1.0), (0, 0, 2.0), (1, 1, 5.0), (1, 1, -5.0), (0, 1, 0.0)],
        )
        .unwrap();
        assert_eq!(a.nnz(), 1);
        assert_eq!(a.get(0, 0), 3.0);
        assert_eq!(a.get(1, 1), 0.0);
    }

    #[test]
    fn triplets_out_of_range() {
        let e = SparseMatrix::from_triplets(2, 2, &[(2, 0, 1.0)]);
        assert!(matches!(e, Err(Error::Dimension(_))));
    }

    #[test]
    fn spmv_matches_dense() {
        let a = sample();
        let y = a.spmv(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(y, vec![5.0, 6.0, -1.0]);
        assert!(a.spmv(&[1.0]).is_err());
    }

    #[test]
    fn spmv_transpose_matches_explicit_transpose() {
        let a = sample();
        let x = [1.5, -2.0, 0.5];
        let via_t = a.transpose().spmv(&x).unwrap();
        let direct = a.spmv_transpose(&x).unwrap();
        assert_eq!(via_t, direct);
    }

    #[test]
    fn transpose_involution() {
        let a = sample();
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn add_cancellation_prunes() {
        let a = sample();
        let d = a.sub(&a).unwrap();
        assert_eq!(d.nnz(), 0);
    }

    #[test]
    fn matmul_against_dense() {
        let a = sample();
        let b = SparseMatrix::from_triplets(3, 2, &[(0, 0, 1.0), (1, 1, -2.0), (2, 0, 4.0)]).unwrap();
        let c = a.matmul(&b).unwrap();
        assert_eq!((c.rows(), c.cols()), (3, 2));
        let cd = a.to_dense().matmul(&b.to_dense());
        for i in 0..3 {
            for j in 0..2 {
                assert_eq!(c.get(i, j), cd.get(i, j));
            }
        }
    }

    #[test]
    fn rectangular_product_usable_downstream() {
        let b = SparseMatrix::from_triplets(2, 4, &[(0, 1, 1.0), (1, 3, 2.0), (0, 0, -1.0)]).unwrap();
        let g = b.matmul(&b.transpose()).unwrap();
        assert_eq!((g.rows(), g.cols()), (2, 2));
        let eye = SparseMatrix::identity(2);
        let shifted = g.add(&eye).unwrap();
        assert_eq!(shifted.get(0, 0), 3.0);
        assert_eq!(shifted.get(1, 1), 5.0);
    }

    #[test]
    fn symmetric_and_skew_parts_recompose() {
        let a = sample();
        let s = a.symmetric_part().unwrap();
        let k = a.skew_part().unwrap();
        let back = s.add(&k).unwrap();
        let diff = back.sub(&a).unwrap();
        assert!(diff.max_abs() <= 1e-15 * a.max_abs());
        // skew part is exactly antisymmetric
        assert!(k.add(&k.transpose()).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn triangular_solves() {
        let l = SparseMatrix::from_triplets(3, 3, &[(0, 0, 2.0), (1, 0, 1.0), (1, 1, 4.0), (2, 2, 1.0)])
            .unwrap();
        let x = l.triangular_solve(&[2.0, 6.0, 3.0], true).unwrap();
        assert_eq!(x, vec![1.0, 1.25, 3.0]);
        let u = l.transpose();
        let y = u.triangular_solve(&[2.0, 6.0, 3.0], false).unwrap();
        // backward: x2 = 3, x1 = 6/4, x0 = (2 - 1*1.5)/2
        assert_eq!(y, vec![0.25, 1.5, 3.0]);
    }

    #[test]
    fn triangular_solve_rejects_zero_diagonal() {
        let l = SparseMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        match l.triangular_solve(&[1.0, 1.0], true) {
            Err(Error::ZeroDiagonal { row }) => assert_eq!(row, 1),
            other => panic!("expected zero diagonal error, got {other:?}"),
        }
    }

    #[test]
    fn trace_of_product_matches_dense() {
        let a = sample();
        let b = SparseMatrix::from_triplets(3, 3, &[(0, 1, 2.0), (1, 0, -1.0), (2, 2, 3.0)]).unwrap();
        let t = a.trace_of_product(&b).unwrap();
        let dense = a.to_dense().matmul(&b.to_dense());
        let mut expect = 0.0;
        for i in 0..3 {
            expect += dense.get(i, i);
        }
        assert!((t - expect).abs() < 1e-15);
    }

    #[test]
    fn block_assembly() {
        let a = SparseMatrix::identity(2);
        let b = SparseMatrix::from_triplets(2, 1, &[(0, 0, 5.0)]).unwrap();
        let c = SparseMatrix::from_triplets(1, 2, &[(0, 1, -3.0)]).unwrap();
        let d = SparseMatrix::from_triplets(1, 1, &[(0, 0, 7.0)]).unwrap();
        let m = SparseMatrix::block_2x2(&a, &b, &c, &d).unwrap();
        assert_eq!(m.rows(), 3);
        assert_eq!(m.cols(), 3);
        assert_eq!(m.get(0, 2), 5.0);
        assert_eq!(m.get(2, 1), -3.0);
        assert_eq!(m.get(2, 2), 7.0);
    }
}
