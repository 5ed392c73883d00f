//! Matrix factorizations V(-1) -> U -> V -> U(1), their morphisms, Delta and gamma.

use super::category::{key_positions, Arrow, Background, ExactCategory, Key};
use crate::error::{Error, Result};
use crate::linalg::{howell_form, kernel, rank_mod_l, Mat, Solver};

/// The reduction data: an instance category and a background functor.
#[derive(Clone, Debug)]
pub struct Reduction<C, B> {
    pub cat: C,
    pub bg: B,
}

/// A diagram V(-1) -a-> U -b-> V -a(1)-> U(1) with both composites sigma.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFObject<O> {
    pub u: O,
    pub v: O,
    /// V(-1) -> U
    pub a: Mat,
    /// U -> V
    pub b: Mat,
}

/// A pair (fU, fV) making both squares of the diagram commute.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFMorphism<O> {
    pub src: MFObject<O>,
    pub tgt: MFObject<O>,
    pub fu: Mat,
    pub fv: Mat,
}

impl<O: Clone + PartialEq> MFMorphism<O> {
    pub fn then(&self, next: &MFMorphism<O>) -> Result<MFMorphism<O>> {
        if self.tgt != next.src {
            return Err(Error::Precondition("composing non-composable diagram morphisms".into()));
        }
        Ok(MFMorphism { src: self.src.clone(), tgt: next.tgt.clone(), fu: self.fu.mul(&next.fu), fv: self.fv.mul(&next.fv) })
    }
    pub fn add(&self, other: &MFMorphism<O>) -> MFMorphism<O> {
        MFMorphism { src: self.src.clone(), tgt: self.tgt.clone(), fu: self.fu.add(&other.fu), fv: self.fv.add(&other.fv) }
    }
    pub fn scale(&self, c: u32) -> MFMorphism<O> {
        MFMorphism { src: self.src.clone(), tgt: self.tgt.clone(), fu: self.fu.scale(c), fv: self.fv.scale(c) }
    }
}

/// Delta(U, V): the image of pi(U) -> pi(V), with a key-homogeneous basis
/// (rows in pi(V) coordinates) and the epi from pi(U) onto it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub keys: Vec<Key>,
    pub basis: Mat,
    pub epi: Mat,
}

impl Delta {
    pub fn dim(&self) -> usize {
        self.keys.len()
    }
}

/// The pi-images of the three structure maps of a diagram.
struct PiMaps {
    a: Mat,
    b: Mat,
    a1: Mat,
}

impl<C: ExactCategory, B: Background<C>> Reduction<C, B> {
    pub fn new(cat: C, bg: B) -> Self {
        Reduction { cat, bg }
    }

    /// pi of a matrix between two objects.
    pub fn pi(&self, x: &C::Obj, y: &C::Obj, mat: &Mat) -> Mat {
        self.bg.map(&Arrow { src: x.clone(), tgt: y.clone(), mat: mat.clone() })
    }

    pub fn pi_dim(&self, x: &C::Obj) -> usize {
        self.bg.keys(x).len()
    }

    /// Checked constructor of an object of the category of diagrams (both composites sigma).
    pub fn mf(&self, u: C::Obj, v: C::Obj, a: Mat, b: Mat) -> Result<MFObject<C::Obj>> {
        let c = &self.cat;
        let v1 = c.twist(&v, -1);
        c.check(&v1, &u, &a)?;
        c.check(&u, &v, &b)?;
        if a.mul(&b) != c.sigma(&v1) {
            return Err(Error::Precondition("b after a is not sigma".into()));
        }
        if b.mul(&a) != c.sigma(&u) {
            return Err(Error::Precondition("a(1) after b is not sigma".into()));
        }
        Ok(MFObject { u, v, a, b })
    }

    fn pi_maps(&self, x: &MFObject<C::Obj>) -> PiMaps {
        let c = &self.cat;
        PiMaps {
            a: self.pi(&c.twist(&x.v, -1), &x.u, &x.a),
            b: self.pi(&x.u, &x.v, &x.b),
            a1: self.pi(&x.v, &c.twist(&x.u, 1), &x.a),
        }
    }

    /// H-membership: the pi-image four-term sequence is exact at pi(U) and pi(V).
    pub fn in_h(&self, x: &MFObject<C::Obj>) -> bool {
        let p = self.pi_maps(x);
        let (ra, rb, ra1) = (rank_mod_l(&p.a), rank_mod_l(&p.b), rank_mod_l(&p.a1));
        p.a.mul(&p.b).is_zero()
            && p.b.mul(&p.a1).is_zero()
            && ra + rb == self.pi_dim(&x.u)
            && rb + ra1 == self.pi_dim(&x.v)
    }

    pub fn check_h(&self, x: &MFObject<C::Obj>) -> Result<()> {
        if self.in_h(x) {
            Ok(())
        } else {
            Err(Error::Precondition("diagram fails the exactness condition under the background".into()))
        }
    }

    pub fn delta(&self, x: &MFObject<C::Obj>) -> Result<Delta> {
        self.check_h(x)?;
        let pb = self.pi(&x.u, &x.v, &x.b);
        let basis = howell_form(&pb);
        let vkeys = self.bg.keys(&x.v);
        let keys = (0..basis.rows())
            .map(|i| {
                let c = basis.row(i).iter().position(|&e| e != 0).unwrap();
                vkeys[c]
            })
            .collect();
        let epi = Solver::new(&basis).solve_mat(&pb).expect("rows span the image");
        Ok(Delta { keys, basis, epi })
    }

    /// gamma(X) = (X, X) with a = sigma_{X(-1)} and b = identity.
    pub fn gamma(&self, x: &C::Obj) -> MFObject<C::Obj> {
        let c = &self.cat;
        let x1 = c.twist(x, -1);
        MFObject { u: x.clone(), v: x.clone(), a: c.sigma(&x1), b: Mat::identity(c.field(), c.dim(x)) }
    }

    pub fn gamma_mor(&self, f: &Arrow<C::Obj>) -> MFMorphism<C::Obj> {
        MFMorphism { src: self.gamma(&f.src), tgt: self.gamma(&f.tgt), fu: f.mat.clone(), fv: f.mat.clone() }
    }

    /// (X, X(1)) with a = identity and b = sigma_X: a diagram with Delta = 0.
    pub fn zeta(&self, x: &C::Obj) -> MFObject<C::Obj> {
        let c = &self.cat;
        MFObject { u: x.clone(), v: c.twist(x, 1), a: Mat::identity(c.field(), c.dim(x)), b: c.sigma(x) }
    }

    pub fn zero_mf(&self) -> MFObject<C::Obj> {
        self.gamma(&self.cat.zero_object())
    }

    pub fn mf_sum(&self, parts: &[&MFObject<C::Obj>]) -> Result<MFObject<C::Obj>> {
        let f = self.cat.field();
        let us: Vec<&C::Obj> = parts.iter().map(|x| &x.u).collect();
        let vs: Vec<&C::Obj> = parts.iter().map(|x| &x.v).collect();
        let mut a = Mat::zeros(f, 0, 0);
        let mut b = Mat::zeros(f, 0, 0);
        for x in parts {
            a = a.dsum(&x.a);
            b = b.dsum(&x.b);
        }
        self.mf(self.cat.direct_sum(&us)?, self.cat.direct_sum(&vs)?, a, b)
    }

    /// Checked morphism of diagrams.
    pub fn mor(&self, src: &MFObject<C::Obj>, tgt: &MFObject<C::Obj>, fu: Mat, fv: Mat) -> Result<MFMorphism<C::Obj>> {
        let c = &self.cat;
        c.check(&src.u, &tgt.u, &fu)?;
        c.check(&src.v, &tgt.v, &fv)?;
        if src.b.mul(&fv) != fu.mul(&tgt.b) {
            return Err(Error::Precondition("U -> V square does not commute".into()));
        }
        if src.a.mul(&fu) != fv.mul(&tgt.a) {
            return Err(Error::Precondition("V(-1) -> U square does not commute".into()));
        }
        Ok(MFMorphism { src: src.clone(), tgt: tgt.clone(), fu, fv })
    }

    pub fn identity_mor(&self, x: &MFObject<C::Obj>) -> MFMorphism<C::Obj> {
        let f = self.cat.field();
        MFMorphism {
            src: x.clone(),
            tgt: x.clone(),
            fu: Mat::identity(f, self.cat.dim(&x.u)),
            fv: Mat::identity(f, self.cat.dim(&x.v)),
        }
    }

    pub fn zero_mor(&self, x: &MFObject<C::Obj>, y: &MFObject<C::Obj>) -> MFMorphism<C::Obj> {
        let (f, c) = (self.cat.field(), &self.cat);
        MFMorphism {
            src: x.clone(),
            tgt: y.clone(),
            fu: Mat::zeros(f, c.dim(&x.u), c.dim(&y.u)),
            fv: Mat::zeros(f, c.dim(&x.v), c.dim(&y.v)),
        }
    }

    /// Delta(f) as a matrix Delta(src) -> Delta(tgt).
    pub fn delta_mor(&self, f: &MFMorphism<C::Obj>) -> Result<Mat> {
        let ds = self.delta(&f.src)?;
        let dt = self.delta(&f.tgt)?;
        self.delta_mor_with(f, &ds, &dt)
    }

    pub fn delta_mor_with(&self, f: &MFMorphism<C::Obj>, ds: &Delta, dt: &Delta) -> Result<Mat> {
        let img = ds.basis.mul(&self.pi(&f.src.v, &f.tgt.v, &f.fv));
        if dt.dim() == 0 {
            return Ok(Mat::zeros(self.cat.field(), ds.dim(), 0));
        }
        Solver::new(&dt.basis)
            .solve_mat(&img)
            .ok_or_else(|| Error::Precondition("pi(fV) does not preserve the Delta images".into()))
    }

    /// Basis of morphisms of diagrams s -> t.
    pub fn hom_h(&self, s: &MFObject<C::Obj>, t: &MFObject<C::Obj>) -> Result<Vec<MFMorphism<C::Obj>>> {
        let c = &self.cat;
        let f = c.field();
        let hu = c.hom_basis(&s.u, &t.u)?;
        let hv = c.hom_basis(&s.v, &t.v)?;
        let ncols = c.dim(&s.u) * c.dim(&t.v) + c.dim(&s.v) * c.dim(&t.u);
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(hu.len() + hv.len());
        for m in &hu {
            let mut r = m.mul(&t.b).neg().flatten();
            r.extend(s.a.mul(m).flatten());
            rows.push(r);
        }
        for m in &hv {
            let mut r = s.b.mul(m).flatten();
            r.extend(m.mul(&t.a).neg().flatten());
            rows.push(r);
        }
        let ker = kernel(&Mat::from_vecs(f, ncols, &rows));
        let mut out = Vec::with_capacity(ker.rows());
        for k in ker.row_vecs() {
            let mut fu = Mat::zeros(f, c.dim(&s.u), c.dim(&t.u));
            let mut fv = Mat::zeros(f, c.dim(&s.v), c.dim(&t.v));
            for (i, m) in hu.iter().enumerate() {
                fu = fu.add(&m.scale(k[i]));
            }
            for (i, m) in hv.iter().enumerate() {
                fv = fv.add(&m.scale(k[hu.len() + i]));
            }
            out.push(MFMorphism { src: s.clone(), tgt: t.clone(), fu, fv });
        }
        Ok(out)
    }

    /// Positions of a basis of Hom_E(pi x, pi y).
    pub fn hom_e_positions(&self, x: &C::Obj, y: &C::Obj) -> Vec<(usize, usize)> {
        key_positions(&self.bg.keys(x), &self.bg.keys(y))
    }
}
