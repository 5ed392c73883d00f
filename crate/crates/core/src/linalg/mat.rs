use super::modulus::Modulus;
use crate::error::{Error, Result};
use std::fmt;

/// Dense row-major matrix over Z/N. Rows are the images of basis vectors,
/// so a map X -> Y between free modules of ranks p and q is a p x q matrix
/// acting on row vectors from the right.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    m: Modulus,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Mat {
    pub fn zeros(m: Modulus, rows: usize, cols: usize) -> Mat {
        Mat { m, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(m: Modulus, n: usize) -> Mat {
        let mut a = Mat::zeros(m, n, n);
        for i in 0..n {
            a.data[i * n + i] = 1 % m.n();
        }
        a
    }

    pub fn scalar(m: Modulus, n: usize, c: u32) -> Mat {
        let mut a = Mat::zeros(m, n, n);
        for i in 0..n {
            a.data[i * n + i] = c % m.n();
        }
        a
    }

    pub fn from_fn(m: Modulus, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> i64) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(m.reduce(f(i, j)));
            }
        }
        Mat { m, rows, cols, data }
    }

    pub fn from_rows(m: Modulus, rows: &[Vec<i64>]) -> Result<Mat> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat::from_fn(m, rows.len(), cols, |i, j| rows[i][j]))
    }

    /// Builds from residue rows; `cols` is needed when there are no rows.
    pub fn from_vecs(m: Modulus, cols: usize, rows: &[Vec<u32>]) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "row length");
            data.extend(r.iter().map(|&x| x % m.n()));
        }
        Mat { m, rows: rows.len(), cols, data }
    }

    pub fn from_data(m: Modulus, rows: usize, cols: usize, data: Vec<u32>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        let data = data.into_iter().map(|x| x % m.n()).collect();
        Mat { m, rows, cols, data }
    }

    pub fn modulus(&self) -> Modulus {
        self.m
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u32) {
        self.data[i * self.cols + j] = x % self.m.n();
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn to_i64_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&x| x as i64).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.m, other.m, "modulus mismatch in product");
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let n = self.m.n() as u64;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            let orow = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o = (*o + a * b as u64) % n;
                }
            }
        }
        Mat { m: self.m, rows: self.rows, cols: other.cols, data: out.into_iter().map(|x| x as u32).collect() }
    }

    pub fn try_mul(&self, other: &Mat) -> Result<Mat> {
        if self.m != other.m {
            return Err(Error::ModulusMismatch(self.m.n(), other.m.n()));
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(self.mul(other))
    }

    /// Row vector times matrix.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        assert_eq!(x.len(), self.rows);
        let n = self.m.n() as u64;
        let mut out = vec![0u64; self.cols];
        for (k, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let brow = self.row(k);
            for (o, &b) in out.iter_mut().zip(brow) {
                *o = (*o + a as u64 * b as u64) % n;
            }
        }
        out.into_iter().map(|x| x as u32).collect()
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.m.add(a, b)).collect();
        Mat { m: self.m, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| self.m.sub(a, b)).collect();
        Mat { m: self.m, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|&a| self.m.neg(a)).collect();
        Mat { m: self.m, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: u32) -> Mat {
        let data = self.data.iter().map(|&a| self.m.mul(a, c)).collect();
        Mat { m: self.m, rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.m, self.cols, self.rows, |i, j| self.get(j, i) as i64)
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Mat { m: self.m, rows: self.rows, cols, data }
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Mat { m: self.m, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block diagonal sum.
    pub fn dsum(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(self.m, self.rows + other.rows, self.cols + other.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, other);
        out
    }

    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = block.get(i, j);
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.m, rows, cols, |i, j| self.get(r0 + i, c0 + j) as i64)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Mat { m: self.m, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(self.m, self.rows, idx.len(), |i, j| self.get(i, idx[j]) as i64)
    }

    /// Reduction Z/l^R -> Z/l^c entry-wise.
    pub fn reduce_to(&self, target: Modulus) -> Mat {
        assert_eq!(target.l(), self.m.l());
        assert!(target.r() <= self.m.r(), "reduction must lower the exponent");
        Mat::from_data(target, self.rows, self.cols, self.data.clone())
    }

    /// Least nonnegative integer lift Z/l^c -> Z/l^R.
    pub fn lift_to(&self, target: Modulus) -> Mat {
        assert_eq!(target.l(), self.m.l());
        assert!(target.r() >= self.m.r(), "lift must raise the exponent");
        Mat { m: target, rows: self.rows, cols: self.cols, data: self.data.clone() }
    }

    /// Multiplication by l^e as a map Z/l^c -> Z/l^(c+e), entry-wise.
    pub fn shift_up(&self, target: Modulus, e: u32) -> Mat {
        let f = target.pow_l(e);
        self.lift_to(target).scale(f)
    }

    /// Division by l^e of a matrix whose entries are all divisible by l^e,
    /// landing in Z/l^(c-e).
    pub fn divide_down(&self, target: Modulus, e: u32) -> Option<Mat> {
        let p = self.m.l().pow(e);
        if self.data.iter().any(|&x| x % p != 0) {
            return None;
        }
        Some(Mat::from_data(target, self.rows, self.cols, self.data.iter().map(|&x| x / p).collect()))
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat<{}>{:?}", self.m, self.to_i64_rows())
    }
}

/// Kronecker product A (x) B.
pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let m = a.modulus();
    Mat::from_fn(m, a.rows() * b.rows(), a.cols() * b.cols(), |i, j| {
        m.mul(a.get(i / b.rows(), j / b.cols()), b.get(i % b.rows(), j % b.cols())) as i64
    })
}
