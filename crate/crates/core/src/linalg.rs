//! Dense linear algebra and polynomials over a [`Field`].

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

/// A dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FieldMatrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from elements in row-major order.
    pub fn new(field: &Field, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut data = Vec::with_capacity(entries.len());
        for e in &entries {
            field.check_same(e.field())?;
            data.push(e.value());
        }
        Ok(FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from canonical element indices in row-major order.
    pub fn from_values(field: &Field, rows: usize, cols: usize, values: &[u32]) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|&&v| v >= field.order()) {
            return Err(Error::Parse(format!("{v} is not an element of GF({})", field.order())));
        }
        Ok(FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data: values.to_vec(),
        })
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert!(e.field() == field, "entry from a different field");
                data.push(e.value());
            }
        }
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let q = field.order();
        let data = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        FieldMatrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// A single row vector.
    pub fn row_vector(field: &Field, entries: &[FieldElement]) -> Result<Self> {
        Self::new(field, 1, entries.len(), entries.to_vec())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        FieldElement::from_raw(self.field.clone(), self.raw(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, value: &FieldElement) -> Result<()> {
        self.field.check_same(value.field())?;
        self.data[i * self.cols + j] = value.value();
        Ok(())
    }

    /// Canonical indices in row-major order.
    pub fn values(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<FieldElement> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    #[inline]
    pub(crate) fn raw(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    fn check_compatible(&self, other: &FieldMatrix) -> Result<()> {
        self.field.check_same(&other.field)
    }

    /// Exact matrix product.
    pub fn mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_compatible(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = FieldMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.raw(i, k);
                if a == 0 {
                    continue;
                }
                let src = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.add_raw(*d, f.mul_raw(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_compatible(other)?;
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add_raw(a, b))
            .collect();
        Ok(FieldMatrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_compatible(other)?;
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub_raw(a, b))
            .collect();
        Ok(FieldMatrix { data, ..self.clone() })
    }

    pub fn scale(&self, c: &FieldElement) -> Result<FieldMatrix> {
        self.field.check_same(c.field())?;
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul_raw(a, c.value())).collect();
        Ok(FieldMatrix { data, ..self.clone() })
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, c: &FieldElement, other: &FieldMatrix) -> Result<()> {
        self.check_compatible(other)?;
        self.field.check_same(c.field())?;
        self.check_same_shape(other)?;
        let f = self.field.clone();
        let c = c.value();
        if c == 0 {
            return Ok(());
        }
        for (d, &b) in self.data.iter_mut().zip(&other.data) {
            *d = f.add_raw(*d, f.mul_raw(c, b));
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &FieldMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.raw(i, j);
            }
        }
        out
    }

    /// Columns `start..start + len`.
    pub fn column_block(&self, start: usize, len: usize) -> FieldMatrix {
        self.select_columns(&(start..start + len).collect::<Vec<_>>())
    }

    /// Rows `start..start + len`.
    pub fn row_block(&self, start: usize, len: usize) -> FieldMatrix {
        FieldMatrix {
            field: self.field.clone(),
            rows: len,
            cols: self.cols,
            data: self.data[start * self.cols..(start + len) * self.cols].to_vec(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> FieldMatrix {
        let mut data = Vec::with_capacity(self.rows * cols.len());
        for i in 0..self.rows {
            for &j in cols {
                data.push(self.raw(i, j));
            }
        }
        FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: cols.len(),
            data,
        }
    }

    /// Copy with zero columns appended up to `cols`.
    pub fn pad_columns(&self, cols: usize) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(&self.field, self.rows, cols.max(self.cols));
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * out.cols + j] = self.raw(i, j);
            }
        }
        out
    }

    /// Copy with zero rows appended up to `rows`.
    pub fn pad_rows(&self, rows: usize) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(&self.field, rows.max(self.rows), self.cols);
        out.data[..self.data.len()].copy_from_slice(&self.data);
        out
    }

    /// Vertical concatenation.
    pub fn stack(&self, below: &FieldMatrix) -> Result<FieldMatrix> {
        self.check_compatible(below)?;
        if self.cols != below.cols {
            return Err(Error::DimensionMismatch("stacking matrices of different widths".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(FieldMatrix {
            field: self.field.clone(),
            rows: self.rows + below.rows,
            cols: self.cols,
            data,
        })
    }

    /// Row-reduces in place to reduced row echelon form; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.raw(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv_raw(self.raw(r, c)).expect("pivot is nonzero");
            for j in 0..self.cols {
                let idx = r * self.cols + j;
                self.data[idx] = f.mul_raw(self.data[idx], inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.raw(i, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..self.cols {
                    let sub = f.mul_raw(factor, self.raw(r, j));
                    let idx = i * self.cols + j;
                    self.data[idx] = f.sub_raw(self.data[idx], sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Inverse by Gauss-Jordan elimination on `[A | I]`.
    pub fn inverse(&self) -> Result<FieldMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot invert a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = FieldMatrix::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i * 2 * n + j] = self.raw(i, j);
            }
            aug.data[i * 2 * n + n + i] = 1;
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut out = FieldMatrix::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = aug.raw(i, n + j);
            }
        }
        Ok(out)
    }

    /// Basis of the right nullspace `{v : A v^T = 0}`. One vector per free
    /// column in ascending order, with a 1 in that column.
    pub fn nullspace(&self) -> Vec<Vec<FieldElement>> {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0u32; self.cols];
                v[fc] = 1;
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = f.neg_raw(reduced.raw(r, fc));
                }
                v.into_iter().map(|x| FieldElement::from_raw(f.clone(), x)).collect()
            })
            .collect()
    }

    /// Whether `v` lies in the row space.
    pub fn row_space_contains(&self, v: &[FieldElement]) -> Result<bool> {
        let row = FieldMatrix::row_vector(&self.field, v)?;
        let stacked = self.stack(&row)?;
        Ok(stacked.rank() == self.rank())
    }

    /// Parses the text matrix format (see [`fmt::Display`]).
    pub fn parse(text: &str) -> Result<FieldMatrix> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("bad matrix header '{header}'")));
        }
        let rows: usize = parts[0].parse().map_err(|_| Error::Parse("bad row count".into()))?;
        let cols: usize = parts[1].parse().map_err(|_| Error::Parse("bad column count".into()))?;
        let field: Field = parts[2].parse()?;
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing row {}", i + 1)))?;
            let row: Vec<&str> = line.split_whitespace().collect();
            if row.len() != cols {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            for tok in row {
                data.push(field.parse_element(tok)?.value());
            }
        }
        if lines.next().is_some() {
            return Err(Error::Parse("trailing rows after matrix".into()));
        }
        Ok(FieldMatrix { field, rows, cols, data })
    }
}

/// Text format: a header line `rows cols fieldspec`, then one line per row of
/// space-separated elements.
impl fmt::Display for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format_raw(self.raw(i, j)))
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldMatrix(")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.field.format_raw(self.raw(i, j)))
                .collect();
            write!(f, "[{}]", row.join(" "))?;
        }
        write!(f, ")")
    }
}

/// A univariate polynomial, coefficients low degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldPolynomial {
    field: Field,
    coeffs: Vec<u32>,
}

impl FieldPolynomial {
    pub fn new(field: &Field, coeffs: &[FieldElement]) -> Result<Self> {
        for c in coeffs {
            field.check_same(c.field())?;
        }
        Ok(FieldPolynomial {
            field: field.clone(),
            coeffs: coeffs.iter().map(|c| c.value()).collect(),
        })
    }

    pub fn from_values(field: &Field, coeffs: &[u32]) -> Result<Self> {
        if coeffs.iter().any(|&c| c >= field.order()) {
            return Err(Error::Parse("coefficient outside the field".into()));
        }
        Ok(FieldPolynomial {
            field: field.clone(),
            coeffs: coeffs.to_vec(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Coefficient of `x^i` (zero past the stored length).
    pub fn coefficient(&self, i: usize) -> FieldElement {
        FieldElement::from_raw(self.field.clone(), self.coeffs.get(i).copied().unwrap_or(0))
    }

    pub fn coefficients(&self) -> Vec<FieldElement> {
        self.coeffs
            .iter()
            .map(|&c| FieldElement::from_raw(self.field.clone(), c))
            .collect()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement> {
        self.field.check_same(x.field())?;
        Ok(FieldElement::from_raw(self.field.clone(), self.eval_raw(x.value())))
    }

    pub(crate) fn eval_raw(&self, x: u32) -> u32 {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| f.add_raw(f.mul_raw(acc, x), c))
    }

    /// The unique polynomial of degree `< points.len()` through `points`.
    pub fn interpolate(points: &[(FieldElement, FieldElement)]) -> Result<FieldPolynomial> {
        let (first, _) = points
            .first()
            .ok_or_else(|| Error::InvalidParams("interpolation needs at least one point".into()))?;
        let field = first.field().clone();
        let mut xs = Vec::with_capacity(points.len());
        for (x, y) in points {
            field.check_same(x.field())?;
            field.check_same(y.field())?;
            xs.push(x.value());
        }
        let basis = lagrange_basis(&field, &xs)?;
        let n = points.len();
        let mut coeffs = vec![0u32; n];
        for ((_, y), l) in points.iter().zip(&basis) {
            for (c, &b) in coeffs.iter_mut().zip(l) {
                *c = field.add_raw(*c, field.mul_raw(y.value(), b));
            }
        }
        Ok(FieldPolynomial { field, coeffs })
    }
}

impl fmt::Debug for FieldPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|&c| self.field.format_raw(c)).collect();
        write!(f, "FieldPolynomial[{}]", terms.join(", "))
    }
}

/// Coefficient vectors of the Lagrange basis polynomials on distinct nodes.
fn lagrange_basis(field: &Field, xs: &[u32]) -> Result<Vec<Vec<u32>>> {
    let n = xs.len();
    for i in 0..n {
        if xs[i + 1..].contains(&xs[i]) {
            return Err(Error::DuplicatePoint);
        }
    }
    // master(x) = prod (x - x_j), degree n.
    let mut master = vec![0u32; n + 1];
    master[0] = 1;
    for (deg, &xj) in xs.iter().enumerate() {
        let neg = field.neg_raw(xj);
        for k in (0..=deg + 1).rev() {
            let shifted = if k > 0 { master[k - 1] } else { 0 };
            master[k] = field.add_raw(shifted, field.mul_raw(master[k], neg));
        }
    }
    let mut basis = Vec::with_capacity(n);
    for (k, &xk) in xs.iter().enumerate() {
        // master / (x - x_k) by synthetic division.
        let mut quot = vec![0u32; n];
        let mut carry = 0u32;
        for d in (0..n).rev() {
            carry = field.add_raw(master[d + 1], field.mul_raw(carry, xk));
            quot[d] = carry;
        }
        let denom = xs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .fold(1u32, |acc, (_, &xj)| field.mul_raw(acc, field.sub_raw(xk, xj)));
        let w = field.inv_raw(denom).expect("nodes are distinct");
        basis.push(quot.into_iter().map(|c| field.mul_raw(c, w)).collect());
    }
    Ok(basis)
}

/// A polynomial with matrix coefficients, `h(x) = sum_k C_k x^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPolynomial {
    coeffs: Vec<FieldMatrix>,
}

impl MatrixPolynomial {
    pub fn coefficients(&self) -> &[FieldMatrix] {
        &self.coeffs
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldMatrix> {
        let first = &self.coeffs[0];
        first.field().check_same(x.field())?;
        let mut acc = FieldMatrix::zeros(first.field(), first.rows(), first.cols());
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(x)?.add(c)?;
        }
        Ok(acc)
    }

    /// Interpolates every entry independently from `(x_k, H_k)` samples. The
    /// Lagrange basis is shared across entries, so each entry's coefficients
    /// equal those of [`FieldPolynomial::interpolate`] on that entry's samples.
    pub fn interpolate(points: &[(FieldElement, &FieldMatrix)]) -> Result<MatrixPolynomial> {
        let (x0, y0) = points
            .first()
            .ok_or_else(|| Error::InvalidParams("interpolation needs at least one point".into()))?;
        let field = x0.field().clone();
        let shape = y0.shape();
        let mut xs = Vec::with_capacity(points.len());
        for (x, y) in points {
            field.check_same(x.field())?;
            field.check_same(y.field())?;
            if y.shape() != shape {
                return Err(Error::DimensionMismatch("samples have different shapes".into()));
            }
            xs.push(x.value());
        }
        let basis = lagrange_basis(&field, &xs)?;
        let mut coeffs = vec![FieldMatrix::zeros(&field, shape.0, shape.1); points.len()];
        for ((_, y), l) in points.iter().zip(&basis) {
            for (c, &b) in coeffs.iter_mut().zip(l) {
                c.add_scaled(&FieldElement::from_raw(field.clone(), b), y)?;
            }
        }
        Ok(MatrixPolynomial { coeffs })
    }
}
