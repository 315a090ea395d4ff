//! Dense matrices over GF(2^r) and the structured classes built on them.
//!
//! Linear algebra is plain Gaussian elimination; the pivot is the first
//! nonzero entry in the current column, so every result (including the row
//! order of intermediate states) is deterministic.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldSpec};

/// A dense row-major matrix over one field.
#[derive(Clone)]
pub struct Matrix<'f> {
    field: &'f FieldSpec,
    nrows: usize,
    ncols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.nrows == other.nrows
            && self.ncols == other.ncols
            && self.data == other.data
    }
}

impl Eq for Matrix<'_> {}

impl fmt::Debug for Matrix<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}x{} [", self.field, self.nrows, self.ncols)?;
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

/// Whether the Type-I builder enforces the parameter domain of the original
/// definition (all of `a`, `a_i` outside {0, 1}) or accepts any field elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Type1Domain {
    #[default]
    Strict,
    Relaxed,
}

impl<'f> Matrix<'f> {
    pub fn new(field: &'f FieldSpec, nrows: usize, ncols: usize, data: Vec<Elem>) -> Result<Self> {
        if nrows == 0 || ncols == 0 {
            return Err(Error::DimensionMismatch("matrix must have at least one row and column".into()));
        }
        if data.len() != nrows * ncols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {nrows}x{ncols} matrix",
                data.len()
            )));
        }
        for &x in &data {
            field.check(x)?;
        }
        Ok(Matrix { field, nrows, ncols, data })
    }

    pub(crate) fn from_raw(field: &'f FieldSpec, nrows: usize, ncols: usize, data: Vec<Elem>) -> Self {
        debug_assert_eq!(data.len(), nrows * ncols);
        Matrix { field, nrows, ncols, data }
    }

    pub fn from_rows(field: &'f FieldSpec, rows: &[Vec<Elem>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("rows have different lengths".into()));
        }
        Matrix::new(field, nrows, ncols, rows.concat())
    }

    pub fn zeros(field: &'f FieldSpec, nrows: usize, ncols: usize) -> Self {
        Matrix::from_raw(field, nrows, ncols, vec![Elem::ZERO; nrows * ncols])
    }

    pub fn identity(field: &'f FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = Elem::ONE;
        }
        m
    }

    pub fn diagonal(field: &'f FieldSpec, diag: &[Elem]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyRow);
        }
        let n = diag.len();
        let mut m = Matrix::zeros(field, n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = field.check(d)?;
        }
        Ok(m)
    }

    /// `Circ(row)`: entry (i, j) is `row[(j - i) mod n]`.
    pub fn circulant(field: &'f FieldSpec, first_row: &[Elem]) -> Result<Self> {
        let n = first_row.len();
        if n == 0 {
            return Err(Error::EmptyRow);
        }
        for &x in first_row {
            field.check(x)?;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(first_row[(j + n - i) % n]);
            }
        }
        Ok(Matrix::from_raw(field, n, n, data))
    }

    /// `Had(row)`: entry (i, j) is `row[i XOR j]`.
    pub fn hadamard(field: &'f FieldSpec, first_row: &[Elem]) -> Result<Self> {
        let n = first_row.len();
        if n == 0 {
            return Err(Error::EmptyRow);
        }
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        for &x in first_row {
            field.check(x)?;
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(first_row[i ^ j]);
            }
        }
        Ok(Matrix::from_raw(field, n, n, data))
    }

    /// `TypeI(a, Circ(inner_row))`: border row and column `(a, 1, ..., 1)`
    /// around the circulant block. `inner_row` must start with 1.
    pub fn type1(field: &'f FieldSpec, a: Elem, inner_row: &[Elem], domain: Type1Domain) -> Result<Self> {
        if inner_row.first() != Some(&Elem::ONE) {
            return Err(Error::InnerRowMustStartWithOne);
        }
        field.check(a)?;
        if domain == Type1Domain::Strict {
            let bad = |x: Elem| x == Elem::ZERO || x == Elem::ONE;
            if bad(a) {
                return Err(Error::ParameterDomain(format!("a = {a} must be outside {{0, 1}}")));
            }
            if let Some(&x) = inner_row[1..].iter().find(|&&x| bad(x)) {
                return Err(Error::ParameterDomain(format!("a_i = {x} must be outside {{0, 1}}")));
            }
        }
        let inner = Matrix::circulant(field, inner_row)?;
        let n = inner_row.len() + 1;
        let mut m = Matrix::zeros(field, n, n);
        m.data[0] = a;
        for k in 1..n {
            m.data[k] = Elem::ONE;
            m.data[k * n] = Elem::ONE;
        }
        for i in 1..n {
            for j in 1..n {
                m.data[i * n + j] = inner.get(i - 1, j - 1);
            }
        }
        Ok(m)
    }

    /// `TypeII(Circ(inner_row))` = `[[A, A^-1], [A^3 + A, A]]`.
    pub fn type2(field: &'f FieldSpec, inner_row: &[Elem]) -> Result<Self> {
        let a = Matrix::circulant(field, inner_row)?;
        let a_inv = a.inverse().map_err(|_| Error::SingularGenerator)?;
        let a2 = a.matmul(&a)?;
        let a3_plus_a = a2.matmul(&a)?.add(&a)?;
        Matrix::from_blocks(&a, &a_inv, &a3_plus_a, &a)
    }

    /// `[[tl, tr], [bl, br]]`.
    pub fn from_blocks(tl: &Matrix<'f>, tr: &Matrix<'f>, bl: &Matrix<'f>, br: &Matrix<'f>) -> Result<Self> {
        let field = tl.field;
        if [tr, bl, br].iter().any(|m| m.field != field) {
            return Err(Error::FieldMismatch);
        }
        if tl.nrows != tr.nrows || bl.nrows != br.nrows || tl.ncols != bl.ncols || tr.ncols != br.ncols {
            return Err(Error::DimensionMismatch("incompatible block shapes".into()));
        }
        let nrows = tl.nrows + bl.nrows;
        let ncols = tl.ncols + tr.ncols;
        let mut data = Vec::with_capacity(nrows * ncols);
        for (left, right) in [(tl, tr), (bl, br)] {
            for i in 0..left.nrows {
                data.extend_from_slice(left.row(i));
                data.extend_from_slice(right.row(i));
            }
        }
        Ok(Matrix::from_raw(field, nrows, ncols, data))
    }

    pub fn field(&self) -> &'f FieldSpec {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Order of a square matrix; errors otherwise.
    pub fn order(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.nrows)
        } else {
            Err(Error::NotSquare { nrows: self.nrows, ncols: self.ncols })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.ncols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Elem) -> Result<()> {
        self.field.check(x)?;
        self.data[i * self.ncols + j] = x;
        Ok(())
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.data.chunks(self.ncols)
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        self.rows().map(<[Elem]>::to_vec).collect()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.ncols {
            for i in 0..self.nrows {
                data.push(self.get(i, j));
            }
        }
        Matrix::from_raw(self.field, self.ncols, self.nrows, data)
    }

    pub fn add(&self, other: &Matrix<'f>) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if (self.nrows, self.ncols) != (other.nrows, other.ncols) {
            return Err(Error::DimensionMismatch("matrix sum of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&x, &y)| x + y).collect();
        Ok(Matrix::from_raw(self.field, self.nrows, self.ncols, data))
    }

    pub fn scale(&self, s: Elem) -> Self {
        let data = self.data.iter().map(|&x| self.field.mul(s, x)).collect();
        Matrix::from_raw(self.field, self.nrows, self.ncols, data)
    }

    pub fn matmul(&self, other: &Matrix<'f>) -> Result<Self> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.ncols != other.nrows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let f = self.field;
        let mut data = vec![Elem::ZERO; self.nrows * other.ncols];
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let x = self.get(i, k);
                if x.is_zero() {
                    continue;
                }
                let out = &mut data[i * other.ncols..(i + 1) * other.ncols];
                for (o, &y) in out.iter_mut().zip(other.row(k)) {
                    *o += f.mul(x, y);
                }
            }
        }
        Ok(Matrix::from_raw(f, self.nrows, other.ncols, data))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.nrows).all(|i| {
                (0..self.ncols).all(|j| self.get(i, j) == if i == j { Elem::ONE } else { Elem::ZERO })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// The submatrix on strictly increasing `rows` x `cols`.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        validate_index_set(rows, self.nrows)?;
        validate_index_set(cols, self.ncols)?;
        Ok(self.submatrix_unchecked(rows, cols))
    }

    pub(crate) fn submatrix_unchecked(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        Matrix::from_raw(self.field, rows.len(), cols.len(), data)
    }

    /// Contiguous block of `h` rows and `w` columns starting at (`i0`, `j0`).
    pub fn block(&self, i0: usize, j0: usize, h: usize, w: usize) -> Result<Self> {
        if i0 + h > self.nrows || j0 + w > self.ncols || h == 0 || w == 0 {
            return Err(Error::DimensionMismatch("block outside the matrix".into()));
        }
        let rows: Vec<usize> = (i0..i0 + h).collect();
        let cols: Vec<usize> = (j0..j0 + w).collect();
        Ok(self.submatrix_unchecked(&rows, &cols))
    }

    pub fn det(&self) -> Result<Elem> {
        let n = self.order()?;
        let mut buf = self.data.clone();
        Ok(det_in_place(self.field, &mut buf, n))
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.data.clone();
        rank_in_place(self.field, &mut buf, self.nrows, self.ncols)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.order()?;
        let f = self.field;
        let w = 2 * n;
        let mut aug = vec![Elem::ZERO; n * w];
        for i in 0..n {
            aug[i * w..i * w + n].copy_from_slice(self.row(i));
            aug[i * w + n + i] = Elem::ONE;
        }
        for k in 0..n {
            let p = (k..n).find(|&i| !aug[i * w + k].is_zero()).ok_or(Error::SingularMatrix)?;
            if p != k {
                for j in 0..w {
                    aug.swap(p * w + j, k * w + j);
                }
            }
            let pinv = f.inv(aug[k * w + k])?;
            for j in 0..w {
                aug[k * w + j] = f.mul(pinv, aug[k * w + j]);
            }
            for i in 0..n {
                let factor = aug[i * w + k];
                if i == k || factor.is_zero() {
                    continue;
                }
                for j in 0..w {
                    let t = f.mul(factor, aug[k * w + j]);
                    aug[i * w + j] += t;
                }
            }
        }
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            data.extend_from_slice(&aug[i * w + n..(i + 1) * w]);
        }
        Ok(Matrix::from_raw(f, n, n, data))
    }

    /// Adjugate from cofactors: `adj[j][i] = det(M without row i, column j)`
    /// (signs vanish in characteristic 2).
    pub fn adjugate(&self) -> Result<Self> {
        let n = self.order()?;
        let f = self.field;
        if n == 1 {
            return Ok(Matrix::identity(f, 1));
        }
        let mut data = vec![Elem::ZERO; n * n];
        let mut buf = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            for j in 0..n {
                buf.clear();
                for ii in (0..n).filter(|&ii| ii != i) {
                    for jj in (0..n).filter(|&jj| jj != j) {
                        buf.push(self.get(ii, jj));
                    }
                }
                data[j * n + i] = det_in_place(f, &mut buf, n - 1);
            }
        }
        Ok(Matrix::from_raw(f, n, n, data))
    }

    /// `self^e` for square matrices.
    pub fn pow(&self, e: u32) -> Result<Self> {
        let n = self.order()?;
        let mut acc = Matrix::identity(self.field, n);
        for _ in 0..e {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }
}

pub(crate) fn validate_index_set(idx: &[usize], bound: usize) -> Result<()> {
    if idx.is_empty() {
        return Err(Error::InvalidIndexSet);
    }
    for w in idx.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidIndexSet);
        }
    }
    if let Some(&last) = idx.last() {
        if last >= bound {
            return Err(Error::IndexOutOfRange { index: last, bound });
        }
    }
    Ok(())
}

/// Determinant of the `n`x`n` row-major matrix in `buf`, destroying it.
pub(crate) fn det_in_place(f: &FieldSpec, buf: &mut [Elem], n: usize) -> Elem {
    match n {
        1 => return buf[0],
        2 => return f.mul(buf[0], buf[3]) + f.mul(buf[1], buf[2]),
        _ => {}
    }
    let mut det = Elem::ONE;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !buf[i * n + k].is_zero()) else {
            return Elem::ZERO;
        };
        if p != k {
            for j in k..n {
                buf.swap(p * n + j, k * n + j);
            }
        }
        let pivot = buf[k * n + k];
        det = f.mul(det, pivot);
        let pinv = f.inv(pivot).expect("pivot is nonzero");
        for i in k + 1..n {
            let lead = buf[i * n + k];
            if lead.is_zero() {
                continue;
            }
            let factor = f.mul(lead, pinv);
            for j in k + 1..n {
                let t = f.mul(factor, buf[k * n + j]);
                buf[i * n + j] += t;
            }
        }
    }
    det
}

/// Row rank of the `rows`x`cols` row-major matrix in `buf`, destroying it.
pub(crate) fn rank_in_place(f: &FieldSpec, buf: &mut [Elem], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !buf[i * cols + c].is_zero()) else {
            continue;
        };
        if p != rank {
            for j in c..cols {
                buf.swap(p * cols + j, rank * cols + j);
            }
        }
        let pinv = f.inv(buf[rank * cols + c]).expect("pivot is nonzero");
        for i in rank + 1..rows {
            let lead = buf[i * cols + c];
            if lead.is_zero() {
                continue;
            }
            let factor = f.mul(lead, pinv);
            for j in c..cols {
                let t = f.mul(factor, buf[rank * cols + j]);
                buf[i * cols + j] += t;
            }
        }
        rank += 1;
    }
    rank
}

/// Advance `idx` to the next strictly increasing `k`-subset of `0..n` in
/// lexicographic order. Returns false once the last subset has been passed.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Reset `idx` to the first `k`-subset `[0, 1, ..., k-1]`.
pub(crate) fn first_combination(idx: &mut Vec<usize>, k: usize) {
    idx.clear();
    idx.extend(0..k);
}
