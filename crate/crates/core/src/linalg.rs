//! Dense matrices over GF(q) with deterministic reduced row echelon form.

use std::fmt;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::gf::Field;

/// Row-major matrix over a finite field.
#[derive(Clone)]
pub struct Mat {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<u16>,
}

pub(crate) fn digit_char(v: u16) -> char {
    if v < 10 {
        (b'0' + v as u8) as char
    } else {
        (b'a' + (v - 10) as u8) as char
    }
}

pub(crate) fn char_digit(c: char, q: u32) -> Result<u16> {
    let v = match c {
        '0'..='9' => c as u16 - '0' as u16,
        'a'..='z' => c as u16 - 'a' as u16 + 10,
        _ => return Err(Error::Parse(format!("bad digit {c:?}"))),
    };
    if (v as u32) < q {
        Ok(v)
    } else {
        Err(Error::Parse(format!("digit {v} out of range for q={q}")))
    }
}

impl Mat {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            field: field.clone(),
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        let mut m = Mat::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u16>]) -> Mat {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            for &v in r {
                debug_assert!((v as u32) < field.q());
                data.push(v);
            }
        }
        Mat {
            rows: rows.len(),
            cols,
            field: field.clone(),
            data,
        }
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> u16) -> Mat {
        let mut m = Mat::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Single row vector as a 1 x n matrix.
    pub fn row_vec(field: &Field, v: &[u16]) -> Mat {
        Mat::from_rows(field, &[v.to_vec()])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u16 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u16) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u16] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_to_vec(&self, i: usize) -> Vec<u16> {
        self.row(i).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            field: f.clone(),
            data,
        })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_same_shape(other)?;
        let f = &self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            field: f.clone(),
            data,
        })
    }

    pub fn scale(&self, c: u16) -> Mat {
        let f = &self.field;
        Mat {
            rows: self.rows,
            cols: self.cols,
            field: f.clone(),
            data: self.data.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// self (r x k) times other (k x c).
    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zero(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, other.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let rows: Vec<Vec<u16>> = idx.iter().map(|&i| self.row_to_vec(i)).collect();
        if rows.is_empty() {
            return Mat::zero(&self.field, 0, self.cols);
        }
        Mat::from_rows(&self.field, &rows)
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, self.rows, idx.len(), |i, j| self.get(i, idx[j]))
    }

    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.cols != other.cols || self.field != other.field {
            return Err(Error::ShapeMismatch("vstack".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field.clone(),
            data,
        })
    }

    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        if self.rows != other.rows || self.field != other.field {
            return Err(Error::ShapeMismatch("hstack".into()));
        }
        let mut out = Mat::zero(&self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        Ok(out)
    }

    /// Flatten row-major into a 1 x (rows*cols) vector.
    pub fn flatten(&self) -> Vec<u16> {
        self.data.clone()
    }

    pub fn from_flat(field: &Field, rows: usize, cols: usize, flat: &[u16]) -> Result<Mat> {
        if flat.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "flat length {} != {}x{}",
                flat.len(),
                rows,
                cols
            )));
        }
        Ok(Mat {
            rows,
            cols,
            field: field.clone(),
            data: flat.to_vec(),
        })
    }

    fn check_same_shape(&self, other: &Mat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.q(), other.field.q()));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    #[inline]
    fn row_axpy(&mut self, dst: usize, src: usize, c: u16) {
        // row[dst] += c * row[src]
        if c == 0 {
            return;
        }
        let f = self.field.clone();
        let cols = self.cols;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * cols);
            (&mut lo[dst * cols..dst * cols + cols], &hi[..cols])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * cols);
            (&mut hi[..cols], &lo[src * cols..src * cols + cols])
        };
        if f.p() == 2 && f.degree() == 1 && c == 1 {
            for (x, &y) in a.iter_mut().zip(b.iter()) {
                *x ^= y;
            }
        } else {
            for (x, &y) in a.iter_mut().zip(b.iter()) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
    }

    fn scale_row(&mut self, i: usize, c: u16) {
        let f = self.field.clone();
        for j in 0..self.cols {
            let v = self.get(i, j);
            self.set(i, j, f.mul(v, c));
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data
                .swap(i * self.cols + c, j * self.cols + c);
        }
    }

    /// In-place reduced row echelon form with leftmost/topmost pivot choice.
    /// Returns the rank and the pivot columns.
    pub fn rref_in_place(&mut self) -> (usize, Vec<usize>) {
        let f = self.field.clone();
        let mut rank = 0;
        let mut pivots = Vec::new();
        for col in 0..self.cols {
            let mut piv = None;
            for r in rank..self.rows {
                if self.get(r, col) != 0 {
                    piv = Some(r);
                    break;
                }
            }
            let Some(piv) = piv else { continue };
            self.swap_rows(rank, piv);
            let lead = self.get(rank, col);
            if lead != 1 {
                let inv = f.inv(lead).expect("nonzero pivot");
                self.scale_row(rank, inv);
            }
            for r in 0..self.rows {
                if r != rank {
                    let c = self.get(r, col);
                    if c != 0 {
                        let nc = f.neg(c);
                        self.row_axpy(r, rank, nc);
                    }
                }
            }
            pivots.push(col);
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        (rank, pivots)
    }

    /// RREF copy together with the rank.
    pub fn rref(&self) -> (Mat, usize) {
        let mut m = self.clone();
        let (rank, _) = m.rref_in_place();
        (m, rank)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of `{v : self * v^T = 0}` as rows of a matrix.
    pub fn kernel(&self) -> Mat {
        let mut r = self.clone();
        let (rank, pivots) = r.rref_in_place();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![0u16; self.cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = f.neg(r.get(i, fc));
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Mat::zero(f, 0, self.cols)
        } else {
            Mat::from_rows(f, &rows)
        }
    }

    pub fn inverse(&self) -> Result<Mat> {
        if self.rows != self.cols {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let mut aug = self.hstack(&Mat::identity(&self.field, n))?;
        let (_, pivots) = aug.rref_in_place();
        // invertible exactly when every pivot lands in the left block
        if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
            return Err(Error::NotInvertible);
        }
        Ok(Mat::from_fn(&self.field, n, n, |i, j| aug.get(i, n + j)))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// One line of digits per row.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(digit_char(self.get(i, j)));
            }
            if i + 1 < self.rows {
                s.push('\n');
            }
        }
        s
    }

    pub fn parse_rows(field: &Field, lines: &[&str]) -> Result<Mat> {
        let mut rows = Vec::with_capacity(lines.len());
        for line in lines {
            let mut row = Vec::new();
            for c in line.trim().chars() {
                row.push(char_digit(c, field.q())?);
            }
            rows.push(row);
        }
        if !rows.is_empty() {
            let w = rows[0].len();
            if rows.iter().any(|r| r.len() != w) {
                return Err(Error::Parse("ragged matrix rows".into()));
            }
        }
        Ok(Mat::from_rows(field, &rows))
    }
}

impl PartialEq for Mat {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.field == other.field
            && self.data == other.data
    }
}
impl Eq for Mat {}

impl Hash for Mat {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.field.q().hash(state);
        self.data.hash(state);
    }
}

impl PartialOrd for Mat {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Mat {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Mat{}x{}/GF({})[{}]",
            self.rows,
            self.cols,
            self.field.q(),
            self.to_text().replace('\n', "|")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> Field {
        Field::gf(2, 1).unwrap()
    }

    #[test]
    fn rref_zero_and_identity() {
        let f = f2();
        assert_eq!(Mat::zero(&f, 3, 3).rank(), 0);
        assert_eq!(Mat::identity(&f, 4).rank(), 4);
    }

    #[test]
    fn rref_dependent_rows() {
        let f = f2();
        // rows sum to zero -> rank 2
        let m = Mat::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn rref_is_canonical_gf3() {
        let f = Field::gf(3, 1).unwrap();
        let m = Mat::from_rows(&f, &[vec![2, 1], vec![1, 1]]);
        let (r, rank) = m.rref();
        assert_eq!(rank, 2);
        assert_eq!(r, Mat::identity(&f, 2));
        // pivot columns may skip: rows [[2,1,0],[1,2,1]] reduce with pivots {0,2}
        let m2 = Mat::from_rows(&f, &[vec![2, 1, 0], vec![1, 2, 1]]);
        let (r2, rank2) = m2.rref();
        assert_eq!(rank2, 2);
        assert_eq!(r2, Mat::from_rows(&f, &[vec![1, 2, 0], vec![0, 0, 1]]));
    }

    #[test]
    fn kernel_and_inverse() {
        let f = f2();
        let m = Mat::from_rows(&f, &[vec![1, 1, 0], vec![0, 1, 1]]);
        let k = m.kernel();
        assert_eq!(k.rows(), 1);
        assert!(m.mul(&k.transpose()).unwrap().is_zero());

        let a = Mat::from_rows(&f, &[vec![1, 1], vec![0, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Mat::identity(&f, 2));
        let sing = Mat::from_rows(&f, &[vec![1, 1], vec![1, 1]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn text_roundtrip() {
        let f = Field::gf(3, 1).unwrap();
        let m = Mat::from_rows(&f, &[vec![0, 1, 2], vec![2, 2, 0]]);
        let t = m.to_text();
        assert_eq!(t, "012\n220");
        let back = Mat::parse_rows(&f, &t.lines().collect::<Vec<_>>()).unwrap();
        assert_eq!(back, m);
    }
}
