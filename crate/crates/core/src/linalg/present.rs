use super::howell::{howell_form, inverse, kernel, Solver};
use super::mat::Mat;
use super::modulus::Modulus;
use crate::error::{Error, Result};

/// A finite l-group span(Z)/span(B) written as a sum of cyclic groups,
/// with a projection from the ambient space and a lift back.
#[derive(Clone, Debug)]
pub struct FiniteModulePresentation {
    m: Modulus,
    ambient: usize,
    exps: Vec<u32>,
    gens: Mat,
    solver: Solver,
    // columns of the diagonalising transform, one per kept coordinate
    vcols: Mat,
    lift: Mat,
}

/// Column-diagonalisation over Z/l^r: returns exponents e_t (order of the
/// t-th cyclic factor of (Z/N)^k / span(rel)) and V with span(rel V) diagonal.
fn smith_cols(m: Modulus, rel: &Mat, k: usize) -> (Vec<u32>, Mat) {
    let n = m.n() as u64;
    let mut work: Vec<Vec<u32>> = rel.row_vecs();
    let mut v = Mat::identity(m, k);
    let mut exps = vec![m.r(); k];
    let mut t = 0;
    while t < k {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in work.iter().enumerate() {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 {
                    let val = m.val(x);
                    if best.is_none_or(|(bv, _, _)| val < bv) {
                        best = Some((val, i, j));
                    }
                }
            }
        }
        let Some((val, i, j)) = best else { break };
        if j != t {
            for row in work.iter_mut() {
                row.swap(j, t);
            }
            for r in 0..k {
                let (a, b) = (v.get(r, j), v.get(r, t));
                v.set(r, j, b);
                v.set(r, t, a);
            }
        }
        let mut p = work.remove(i);
        let (u, _) = m.split(p[t]);
        let ui = m.inv(u).unwrap();
        for x in p.iter_mut() {
            *x = m.mul(*x, ui);
        }
        let pv = p[t];
        for q in work.iter_mut() {
            if q[t] != 0 {
                let c = (n - (q[t] / pv) as u64) % n;
                for (qj, &pj) in q.iter_mut().zip(&p) {
                    *qj = ((*qj as u64 + c * pj as u64) % n) as u32;
                }
            }
        }
        for jj in t + 1..k {
            if p[jj] != 0 {
                let c = p[jj] / pv;
                // column jj -= c * column t
                for r in 0..k {
                    let x = m.sub(v.get(r, jj), m.mul(c, v.get(r, t)));
                    v.set(r, jj, x);
                }
                for q in work.iter_mut() {
                    q[jj] = m.sub(q[jj], m.mul(c, q[t]));
                }
            }
        }
        exps[t] = val;
        work.retain(|r| r.iter().any(|&x| x != 0));
        t += 1;
    }
    (exps, v)
}

impl FiniteModulePresentation {
    pub fn modulus(&self) -> Modulus {
        self.m
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    /// Exponents e_i with cyclic orders l^{e_i}, weakly decreasing.
    pub fn exps(&self) -> &[u32] {
        &self.exps
    }
    pub fn ngens(&self) -> usize {
        self.exps.len()
    }
    pub fn cyclic_orders(&self) -> Vec<u64> {
        self.exps.iter().map(|&e| (self.m.l() as u64).pow(e)).collect()
    }
    pub fn order(&self) -> u64 {
        self.cyclic_orders().iter().product()
    }
    pub fn is_trivial(&self) -> bool {
        self.exps.is_empty()
    }
    /// Howell generators of the cycle span.
    pub fn gens(&self) -> &Mat {
        &self.gens
    }
    pub fn lift_mat(&self) -> &Mat {
        &self.lift
    }

    /// Coordinates of an element of span(Z); error when outside span(Z).
    pub fn project(&self, z: &[u32]) -> Result<Vec<u32>> {
        let c = self
            .solver
            .solve(z)
            .ok_or_else(|| Error::Precondition("vector outside the cycle span".into()))?;
        let y = self.vcols.apply(&c);
        Ok(self.normalize(&y))
    }

    pub fn normalize(&self, y: &[u32]) -> Vec<u32> {
        y.iter().zip(&self.exps).map(|(&x, &e)| x % self.m.l().pow(e)).collect()
    }

    pub fn lift(&self, coords: &[u32]) -> Vec<u32> {
        assert_eq!(coords.len(), self.exps.len());
        self.lift.apply(coords)
    }

    pub fn is_zero_class(&self, z: &[u32]) -> Result<bool> {
        Ok(self.project(z)?.iter().all(|&x| x == 0))
    }
}

/// span(Z)/span(B) as a finite l-group. Requires span(B) inside span(Z).
pub fn subquotient(z: &Mat, b: &Mat) -> Result<FiniteModulePresentation> {
    let m = z.modulus();
    if b.cols() != z.cols() {
        return Err(Error::Dimension("subquotient operands differ in width".into()));
    }
    let gens = howell_form(z);
    let k = gens.rows();
    let solver = Solver::new(&gens);
    let mut rel = kernel(&gens);
    let mut brows = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        let c = solver
            .solve(b.row(i))
            .ok_or_else(|| Error::Precondition("boundary span not contained in cycle span".into()))?;
        brows.push(c);
    }
    rel = rel.vstack(&Mat::from_vecs(m, k, &brows));
    let (exps, v) = smith_cols(m, &rel, k);
    let vinv = inverse(&v).expect("column transform is invertible");
    let mut keep: Vec<usize> = (0..k).filter(|&t| exps[t] > 0).collect();
    keep.sort_by(|&a, &b| exps[b].cmp(&exps[a]).then(a.cmp(&b)));
    let vcols = v.select_cols(&keep);
    let lift = vinv.select_rows(&keep).mul(&gens);
    let exps = keep.iter().map(|&t| exps[t]).collect();
    Ok(FiniteModulePresentation { m, ambient: z.cols(), exps, gens, solver, vcols, lift })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let m = Modulus::from_order(4).unwrap();
        let p = subquotient(&Mat::identity(m, 3), &Mat::zeros(m, 0, 3)).unwrap();
        assert_eq!(p.cyclic_orders(), vec![4, 4, 4]);
        let p = subquotient(&Mat::from_rows(m, &[vec![1]]).unwrap(), &Mat::from_rows(m, &[vec![2]]).unwrap()).unwrap();
        assert_eq!(p.cyclic_orders(), vec![2]);
        assert_eq!(p.project(&[2]).unwrap(), vec![0]);
        assert_eq!(p.project(&[3]).unwrap(), vec![1]);
        let z = Mat::from_rows(m, &[vec![1, 2], vec![0, 2]]).unwrap();
        let p = subquotient(&z, &z).unwrap();
        assert!(p.is_trivial());
    }

    #[test]
    fn containment_is_checked() {
        let m = Modulus::from_order(4).unwrap();
        let z = Mat::from_rows(m, &[vec![2]]).unwrap();
        let b = Mat::from_rows(m, &[vec![1]]).unwrap();
        assert!(subquotient(&z, &b).is_err());
    }

    #[test]
    fn mixed_orders() {
        let m = Modulus::from_order(8).unwrap();
        let z = Mat::identity(m, 2);
        let b = Mat::from_rows(m, &[vec![2, 4], vec![0, 4]]).unwrap();
        let p = subquotient(&z, &b).unwrap();
        assert_eq!(p.order(), 8);
        for y0 in 0..p.cyclic_orders()[0] as u32 {
            let mut y = vec![0; p.ngens()];
            y[0] = y0;
            assert_eq!(p.project(&p.lift(&y)).unwrap(), p.normalize(&y));
        }
    }
}
