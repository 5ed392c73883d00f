use super::mat::Mat;
use super::modulus::Modulus;
use crate::error::{Error, Result};

fn axpy(m: Modulus, q: &mut [u32], k: u32, p: &[u32], from: usize) {
    // q -= k * p
    if k == 0 {
        return;
    }
    let n = m.n() as u64;
    let nk = (n - k as u64 % n) % n;
    for j in from..q.len() {
        let pj = p[j];
        if pj != 0 {
            q[j] = ((q[j] as u64 + nk * pj as u64) % n) as u32;
        }
    }
}

fn scale_row(m: Modulus, p: &mut [u32], c: u32, from: usize) {
    for x in p[from..].iter_mut() {
        *x = m.mul(*x, c);
    }
}

/// Howell echelon form of a list of rows, pivoting only in columns `< pivot_cols`
/// (all columns are still carried). Returns the rows and their pivot columns.
pub(crate) fn echelon(m: Modulus, mut work: Vec<Vec<u32>>, pivot_cols: usize) -> (Vec<Vec<u32>>, Vec<usize>) {
    work.retain(|r| r.iter().any(|&x| x != 0));
    let mut out: Vec<Vec<u32>> = Vec::new();
    let mut piv = Vec::new();
    for c in 0..pivot_cols {
        if work.is_empty() {
            break;
        }
        let mut best: Option<(u32, usize)> = None;
        for (i, row) in work.iter().enumerate() {
            let x = row[c];
            if x != 0 {
                let v = m.val(x);
                if best.is_none_or(|(bv, _)| v < bv) {
                    best = Some((v, i));
                    if v == 0 {
                        break;
                    }
                }
            }
        }
        let Some((v, i)) = best else { continue };
        let mut p = work.remove(i);
        let (u, _) = m.split(p[c]);
        scale_row(m, &mut p, m.inv(u).unwrap(), c);
        let pv = p[c];
        for q in work.iter_mut() {
            if q[c] != 0 {
                let k = q[c] / pv;
                axpy(m, q, k, &p, c);
            }
        }
        if v > 0 {
            let mut a = p.clone();
            scale_row(m, &mut a, m.l().pow(m.r() - v), c);
            work.push(a);
        }
        work.retain(|r| r.iter().any(|&x| x != 0));
        out.push(p);
        piv.push(c);
    }
    for i in 0..out.len() {
        let c = piv[i];
        let pv = out[i][c];
        let (head, tail) = out.split_at_mut(i);
        let pi = &tail[0];
        for row in head.iter_mut() {
            if row[c] >= pv {
                let k = row[c] / pv;
                axpy(m, row, k, pi, c);
            }
        }
    }
    // rows that never received a pivot (only possible when pivot_cols < width)
    for r in work {
        out.push(r);
        piv.push(usize::MAX);
    }
    (out, piv)
}

/// Canonical Howell normal form: same row span, zero rows dropped.
pub fn howell_form(a: &Mat) -> Mat {
    let (rows, _) = echelon(a.modulus(), a.row_vecs(), a.cols());
    Mat::from_vecs(a.modulus(), a.cols(), &rows)
}

/// Rows spanning { x : x A = 0 } exactly, in Howell form.
pub fn kernel(a: &Mat) -> Mat {
    let m = a.modulus();
    let aug = a.hstack(&Mat::identity(m, a.rows()));
    let (rows, piv) = echelon(m, aug.row_vecs(), aug.cols());
    let ker: Vec<Vec<u32>> =
        rows.iter().zip(&piv).filter(|(_, &c)| c >= a.cols()).map(|(r, _)| r[a.cols()..].to_vec()).collect();
    Mat::from_vecs(m, a.rows(), &ker)
}

/// Precomputed elimination data for repeated solves of x A = b.
#[derive(Clone, Debug)]
pub struct Solver {
    m: Modulus,
    nrows: usize,
    ncols: usize,
    piv: Vec<(usize, Vec<u32>, Vec<u32>)>,
}

impl Solver {
    pub fn new(a: &Mat) -> Solver {
        let m = a.modulus();
        let aug = a.hstack(&Mat::identity(m, a.rows()));
        let (rows, piv) = echelon(m, aug.row_vecs(), a.cols());
        let piv = rows
            .into_iter()
            .zip(piv)
            .filter(|(_, c)| *c < a.cols())
            .map(|(r, c)| (c, r[..a.cols()].to_vec(), r[a.cols()..].to_vec()))
            .collect();
        Solver { m, nrows: a.rows(), ncols: a.cols(), piv }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.ncols, "right-hand side length");
        let m = self.m;
        let mut v: Vec<u32> = b.iter().map(|&x| x % m.n()).collect();
        let mut x = vec![0u32; self.nrows];
        for (c, ra, rt) in &self.piv {
            let c = *c;
            if v[c] == 0 {
                continue;
            }
            let pv = ra[c];
            if !v[c].is_multiple_of(pv) {
                return None;
            }
            let k = v[c] / pv;
            axpy(m, &mut v, k, ra, c);
            for (xi, &t) in x.iter_mut().zip(rt) {
                *xi = m.add(*xi, m.mul(k, t));
            }
        }
        if v.iter().any(|&y| y != 0) {
            return None;
        }
        Some(x)
    }

    pub fn contains(&self, b: &[u32]) -> bool {
        self.solve(b).is_some()
    }

    /// Solves X A = B row by row.
    pub fn solve_mat(&self, b: &Mat) -> Option<Mat> {
        let mut rows = Vec::with_capacity(b.rows());
        for i in 0..b.rows() {
            rows.push(self.solve(b.row(i))?);
        }
        Some(Mat::from_vecs(self.m, self.nrows, &rows))
    }
}

/// Some x with x A = b, or None when b is outside the row span.
pub fn solve(a: &Mat, b: &[u32]) -> Result<Option<Vec<u32>>> {
    if b.len() != a.cols() {
        return Err(Error::Dimension(format!("rhs length {} for {} columns", b.len(), a.cols())));
    }
    Ok(Solver::new(a).solve(b))
}

/// Rank of A mod l over the residue field.
pub fn rank_mod_l(a: &Mat) -> usize {
    let f = a.modulus().residue_field();
    let red = a.reduce_to(f);
    let (rows, _) = echelon(f, red.row_vecs(), red.cols());
    rows.len()
}

pub fn is_split_mono(a: &Mat) -> bool {
    rank_mod_l(a) == a.rows()
}

pub fn is_split_epi(a: &Mat) -> bool {
    rank_mod_l(a) == a.cols()
}

pub fn span_eq(a: &Mat, b: &Mat) -> bool {
    howell_form(a) == howell_form(b)
}

pub fn span_contains(a: &Mat, b: &Mat) -> bool {
    let s = Solver::new(a);
    (0..b.rows()).all(|i| s.contains(b.row(i)))
}

pub fn inverse(a: &Mat) -> Option<Mat> {
    if !a.is_square() {
        return None;
    }
    Solver::new(a).solve_mat(&Mat::identity(a.modulus(), a.rows()))
}

/// A right inverse (section) of a split epimorphism: S with S A = I.
pub fn section(a: &Mat) -> Option<Mat> {
    Solver::new(a).solve_mat(&Mat::identity(a.modulus(), a.cols()))
}

/// A left inverse (retraction) of a split monomorphism: R with A R = I.
pub fn retraction(a: &Mat) -> Option<Mat> {
    section(&a.transpose()).map(|s| s.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> Modulus {
        Modulus::from_order(n).unwrap()
    }

    #[test]
    fn spec_examples() {
        let m = z(4);
        let id = Mat::identity(m, 2);
        assert_eq!(howell_form(&id), id);
        assert_eq!(howell_form(&Mat::from_rows(m, &[vec![3]]).unwrap()), Mat::from_rows(m, &[vec![1]]).unwrap());
        let d = Mat::from_rows(m, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(howell_form(&d), d);

        assert_eq!(kernel(&id).rows(), 0);
        let k = kernel(&Mat::from_rows(m, &[vec![2]]).unwrap());
        assert_eq!(k, Mat::from_rows(m, &[vec![2]]).unwrap());
        assert_eq!(kernel(&Mat::from_rows(m, &[vec![1, 2]]).unwrap()).rows(), 0);

        let a = Mat::from_rows(m, &[vec![2]]).unwrap();
        let x = solve(&a, &[2]).unwrap().unwrap();
        assert!(x == vec![1] || x == vec![3]);
        assert_eq!(solve(&a, &[1]).unwrap(), None);
        assert!(solve(&a, &[1, 2]).is_err());

        assert!(!is_split_mono(&a) && !is_split_epi(&a));
        let c = Mat::from_rows(m, &[vec![1], vec![2]]).unwrap();
        // [[1],[2]] read as a map from rank 1 into rank 2 is its transpose in row convention
        let c = c.transpose();
        assert!(is_split_mono(&c));
        assert!(!is_split_epi(&c));
    }

    #[test]
    fn howell_property_needs_annihilator_rows() {
        // span of (2,1) over Z/4 contains (0,2)
        let m = z(4);
        let a = Mat::from_rows(m, &[vec![2, 1]]).unwrap();
        let h = howell_form(&a);
        assert_eq!(h, Mat::from_rows(m, &[vec![2, 1], vec![0, 2]]).unwrap());
        assert!(Solver::new(&h).contains(&[0, 2]));
    }
}
