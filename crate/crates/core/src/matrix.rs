//! Exact integer and rational matrices: Smith normal form, determinant,
//! signature by congruence diagonalization.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("degenerate form (determinant is zero)")]
    DegenerateForm,
    #[error("ragged row data")]
    Ragged,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Result<Self, MatrixError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(MatrixError::Ragged);
            }
            data.extend(row.iter().map(|&x| x.into()));
        }
        Ok(IntMatrix { rows: r, cols: c, data })
    }

    pub fn diagonal<T: Into<BigInt> + Copy>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        use num_traits::ToPrimitive;
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_i64()).collect())
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, t: &BigInt) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * t).collect() }
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &IntMatrix) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    pub fn to_rational(&self) -> RationalMatrix {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| BigRational::from_integer(x.clone())).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += f * row[src]
    fn add_row(&mut self, dst: usize, src: usize, f: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * f;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += f * col[src]
    fn add_col(&mut self, dst: usize, src: usize, f: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * f;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + j];
            self.data[i * self.cols + j] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn scale(&self, t: &BigRational) -> RationalMatrix {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * t).collect() }
    }

    /// Some(integer matrix) when every entry is integral.
    pub fn to_integer(&self) -> Option<IntMatrix> {
        if self.data.iter().all(|x| x.is_integer()) {
            Some(IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x.to_integer()).collect() })
        } else {
            None
        }
    }

    /// Gauss–Jordan inverse.
    pub fn inverse(&self) -> Result<RationalMatrix, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RationalMatrix::zeros(n, n);
        for i in 0..n {
            inv.set(i, i, BigRational::one());
        }
        for c in 0..n {
            let p = (c..n).find(|&r| !a.get(r, c).is_zero()).ok_or(MatrixError::DegenerateForm)?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a.get(c, c).clone();
            for j in 0..n {
                let x = a.get(c, j) / &piv;
                a.set(c, j, x);
                let y = inv.get(c, j) / &piv;
                inv.set(c, j, y);
            }
            for r in 0..n {
                if r == c || a.get(r, c).is_zero() {
                    continue;
                }
                let f = a.get(r, c).clone();
                for j in 0..n {
                    let x = a.get(r, j) - &f * a.get(c, j);
                    a.set(r, j, x);
                    let y = inv.get(r, j) - &f * inv.get(c, j);
                    inv.set(r, j, y);
                }
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect();
        write!(f, "{rows:?}")
    }
}

/// Result of [`smith_normal_form`]: `left * m * right == diag`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub left: IntMatrix,
    pub diag: IntMatrix,
    pub right: IntMatrix,
}

impl Smith {
    /// Diagonal entries d_1 | d_2 | ... (length min(rows, cols)).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.diag.rows.min(self.diag.cols)).map(|i| self.diag.get(i, i).clone()).collect()
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivot: smallest absolute value in the active block, ties to the
/// smallest (row, column) index, so the factors are reproducible.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut left = IntMatrix::identity(rows);
    let mut right = IntMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = d.get(i, j);
                    if v.is_zero() {
                        continue;
                    }
                    if best.map_or(true, |(bi, bj)| v.abs() < d.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(left, d, right);
            };
            d.swap_rows(t, pi);
            left.swap_rows(t, pi);
            d.swap_cols(t, pj);
            right.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d.get(i, t).is_zero() {
                    continue;
                }
                let q = -d.get(i, t).div_floor(d.get(t, t));
                d.add_row(i, t, &q);
                left.add_row(i, t, &q);
                if !d.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d.get(t, j).is_zero() {
                    continue;
                }
                let q = -d.get(t, j).div_floor(d.get(t, t));
                d.add_col(j, t, &q);
                right.add_col(j, t, &q);
                if !d.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block by the pivot
            let piv = d.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&piv)));
            match bad {
                Some(i) => {
                    d.add_row(t, i, &BigInt::one());
                    left.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            left.negate_row(t);
        }
    }
    finish(left, d, right)
}

fn finish(left: IntMatrix, mut diag: IntMatrix, mut right: IntMatrix) -> Smith {
    for t in 0..diag.rows.min(diag.cols) {
        if diag.get(t, t).is_negative() {
            diag.negate_col(t);
            right.negate_col(t);
        }
    }
    Smith { left, diag, right }
}

/// Fraction-free (Bareiss) determinant.
pub fn det_exact(m: &IntMatrix) -> Result<BigInt, MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                a.set(i, j, v);
            }
        }
        prev = a.get(k, k).clone();
    }
    Ok(sign * a.get(n - 1, n - 1))
}

/// (s_+, s_-) via exact symmetric elimination over Q.
pub fn signature_of_symmetric(m: &IntMatrix) -> Result<(usize, usize), MatrixError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.rows, cols: m.cols });
    }
    if !m.is_symmetric() {
        return Err(MatrixError::NotSymmetric);
    }
    let n = m.rows;
    let mut a = m.to_rational();
    let (mut pos, mut neg) = (0, 0);
    for k in 0..n {
        if a.get(k, k).is_zero() {
            if let Some(i) = (k + 1..n).find(|&i| !a.get(i, i).is_zero()) {
                sym_swap(&mut a, k, i);
            } else {
                // all remaining diagonal entries vanish: fold an off-diagonal
                // entry into the diagonal (hyperbolic block)
                let pair = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !a.get(i, j).is_zero());
                let Some((i, j)) = pair else {
                    return Err(MatrixError::DegenerateForm);
                };
                sym_add(&mut a, i, j, &BigRational::one());
                sym_swap(&mut a, k, i);
            }
        }
        let piv = a.get(k, k).clone();
        if piv.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for r in k + 1..n {
            if a.get(r, k).is_zero() {
                continue;
            }
            let f = -(a.get(r, k) / &piv);
            sym_add(&mut a, r, k, &f);
        }
    }
    Ok((pos, neg))
}

fn sym_swap(a: &mut RationalMatrix, i: usize, j: usize) {
    if i == j {
        return;
    }
    let n = a.rows;
    for c in 0..n {
        a.data.swap(i * n + c, j * n + c);
    }
    for r in 0..n {
        a.data.swap(r * n + i, r * n + j);
    }
}

/// Congruence by the elementary matrix e_dst += f * e_src.
fn sym_add(a: &mut RationalMatrix, dst: usize, src: usize, f: &BigRational) {
    let n = a.rows;
    for c in 0..n {
        let v = a.get(src, c) * f;
        a.data[dst * n + c] += v;
    }
    for r in 0..n {
        let v = a.get(r, src) * f;
        a.data[r * n + dst] += v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check_smith(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a);
        assert_eq!(s.left.mul(a).mul(&s.right), s.diag);
        assert_eq!(det_exact(&s.left).unwrap().abs(), BigInt::one());
        assert_eq!(det_exact(&s.right).unwrap().abs(), BigInt::one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[0].is_zero() && w[1].is_zero() || !w[0].is_zero() && w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn smith_of_a2_is_diag_1_3() {
        let s = check_smith(&m(&[vec![-2, 1], vec![1, -2]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(3)]);
    }

    #[test]
    fn smith_of_unimodular() {
        let s = check_smith(&m(&[vec![0, 1], vec![1, 0]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(1)]);
        let s = check_smith(&IntMatrix::identity(3));
        assert_eq!(s.diag, IntMatrix::identity(3));
    }

    #[test]
    fn smith_rectangular_and_singular() {
        check_smith(&m(&[vec![2, 4, 4], vec![-6, 6, 12]]));
        let s = check_smith(&m(&[vec![1, 2], vec![2, 4]]));
        assert_eq!(s.invariant_factors(), vec![BigInt::from(1), BigInt::from(0)]);
    }

    #[test]
    fn determinants() {
        assert_eq!(det_exact(&m(&[vec![-4, 1], vec![1, -2]])).unwrap(), BigInt::from(7));
        let l17 = m(&[vec![-2, 1, 0, 1], vec![1, -2, 0, 0], vec![0, 0, -2, 1], vec![1, 0, 1, -4]]);
        assert_eq!(det_exact(&l17).unwrap(), BigInt::from(17));
        assert_eq!(det_exact(&m(&[vec![6]])).unwrap(), BigInt::from(6));
        assert_eq!(det_exact(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn signatures() {
        assert_eq!(signature_of_symmetric(&m(&[vec![0, 1], vec![1, 0]])).unwrap(), (1, 1));
        assert_eq!(signature_of_symmetric(&m(&[vec![2, 1], vec![1, -2]])).unwrap(), (1, 1));
        assert_eq!(signature_of_symmetric(&m(&[vec![-2, 1], vec![1, -2]])).unwrap(), (0, 2));
        assert_eq!(signature_of_symmetric(&m(&[vec![0, 0], vec![0, 0]])), Err(MatrixError::DegenerateForm));
        assert_eq!(signature_of_symmetric(&m(&[vec![0, 1], vec![2, 0]])), Err(MatrixError::NotSymmetric));
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[vec![-2, 1], vec![1, -2]]).to_rational();
        let inv = a.inverse().unwrap();
        let three = BigRational::from_integer(BigInt::from(3));
        let scaled = inv.scale(&three).to_integer().unwrap();
        assert_eq!(scaled, m(&[vec![-2, -1], vec![-1, -2]]));
    }
}
