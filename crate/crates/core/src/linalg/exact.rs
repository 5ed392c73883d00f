//! Maps between finite abelian l-groups given as products of cyclic factors,
//! encoded as lattices in (Z/l^R)^k with relation rows l^{e_i} e_i.

use super::howell::{kernel, span_contains, span_eq, Solver};
use super::mat::Mat;
use super::modulus::Modulus;

/// A finite abelian l-group Z/l^{e_1} x ... x Z/l^{e_k} with all e_i <= R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicGroup {
    pub exps: Vec<u32>,
}

impl CyclicGroup {
    pub fn new(exps: Vec<u32>) -> Self {
        CyclicGroup { exps }
    }
    pub fn rank(&self) -> usize {
        self.exps.len()
    }
    /// Relation rows l^{e_i} e_i over the ambient ring.
    pub fn relations(&self, m: Modulus) -> Mat {
        let k = self.rank();
        Mat::from_fn(m, k, k, |i, j| if i == j { m.pow_l(self.exps[i]) as i64 } else { 0 })
    }
}

fn with_rel(a: &Mat, g: &CyclicGroup) -> Mat {
    a.vstack(&g.relations(a.modulus()))
}

/// f: A -> B (rows are images of generators) is a well-defined homomorphism.
pub fn respects_orders(a: &CyclicGroup, b: &CyclicGroup, f: &Mat) -> bool {
    let m = f.modulus();
    span_contains(&b.relations(m), &a.relations(m).mul(f))
}

/// The composite A -> B -> C vanishes.
pub fn composite_zero(f: &Mat, g: &Mat, c: &CyclicGroup) -> bool {
    let m = f.modulus();
    span_contains(&c.relations(m), &f.mul(g))
}

/// Lattice of ker(g: B -> C), including the relations of B.
pub fn kernel_lattice(b: &CyclicGroup, g: &Mat, c: &CyclicGroup) -> Mat {
    let k = kernel(&with_rel(g, c));
    let cols: Vec<usize> = (0..b.rank()).collect();
    with_rel(&k.select_cols(&cols), b)
}

/// Lattice of im(f: A -> B), including the relations of B.
pub fn image_lattice(f: &Mat, b: &CyclicGroup) -> Mat {
    with_rel(f, b)
}

/// Outcome of comparing im f with ker g inside B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    /// An element of ker g outside im f.
    KernelLarger(Vec<u32>),
    /// An element of im f outside ker g.
    ImageLarger(Vec<u32>),
}

fn outside(span: &Mat, rows: &Mat) -> Option<Vec<u32>> {
    let s = Solver::new(span);
    (0..rows.rows()).find(|&i| !s.contains(rows.row(i))).map(|i| rows.row(i).to_vec())
}

/// Exactness of A -f-> B -g-> C at B.
pub fn exact_at(f: &Mat, b: &CyclicGroup, g: &Mat, c: &CyclicGroup) -> Exactness {
    let im = image_lattice(f, b);
    let ker = kernel_lattice(b, g, c);
    if span_eq(&im, &ker) {
        return Exactness::Exact;
    }
    if let Some(v) = outside(&im, &ker) {
        return Exactness::KernelLarger(v);
    }
    Exactness::ImageLarger(outside(&ker, &im).unwrap_or_default())
}

/// An element of A outside its relations that f kills, if any.
pub fn injectivity_witness(a: &CyclicGroup, f: &Mat, b: &CyclicGroup) -> Option<Vec<u32>> {
    let ker = kernel_lattice(a, f, b);
    outside(&a.relations(f.modulus()), &ker)
}

/// An element of B outside the image of f, if any.
pub fn surjectivity_witness(f: &Mat, b: &CyclicGroup) -> Option<Vec<u32>> {
    let m = f.modulus();
    outside(&image_lattice(f, b), &Mat::identity(m, b.rank()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_to_z4_by_two() {
        let m = Modulus::from_order(4).unwrap();
        let z4 = CyclicGroup::new(vec![2]);
        let z2 = CyclicGroup::new(vec![1]);
        // Z/2 -2-> Z/4 -1-> Z/2
        let f = Mat::from_rows(m, &[vec![2]]).unwrap();
        let g = Mat::from_rows(m, &[vec![1]]).unwrap();
        assert!(respects_orders(&z2, &z4, &f));
        assert!(respects_orders(&z4, &z2, &g));
        assert!(composite_zero(&f, &g, &z2));
        assert_eq!(exact_at(&f, &z4, &g, &z2), Exactness::Exact);
        assert!(injectivity_witness(&z2, &f, &z4).is_none());
        assert!(surjectivity_witness(&g, &z2).is_none());
        // Z/2 -0-> Z/4 -1-> Z/2 fails at the middle
        let zero = Mat::zeros(m, 1, 1);
        assert!(matches!(exact_at(&zero, &z4, &g, &z2), Exactness::KernelLarger(_)));
        assert!(!respects_orders(&z2, &z4, &g));
    }

    #[test]
    fn empty_groups() {
        let m = Modulus::from_order(8).unwrap();
        let zero = CyclicGroup::new(vec![]);
        let z8 = CyclicGroup::new(vec![3]);
        let into = Mat::zeros(m, 0, 1);
        let out = Mat::zeros(m, 1, 0);
        assert_eq!(exact_at(&into, &z8, &out, &zero), Exactness::KernelLarger(vec![1]));
        assert!(injectivity_witness(&zero, &into, &z8).is_none());
        assert!(surjectivity_witness(&out, &zero).is_none());
    }
}
