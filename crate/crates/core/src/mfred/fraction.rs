//! The Ore pullback, fractions s^-1 f compared by their Delta-images, and the
//! exact structure read off through Delta.

use super::category::{Background, ExactCategory};
use super::object::{MFMorphism, MFObject, Reduction};
use crate::error::{Error, Result};
use crate::linalg::{inverse, kernel, rank_mod_l, Mat, Modulus, Solver};
use serde::Serialize;

/// A matrix assembled from blocks; `None` is a zero block sized by its row and column.
pub(crate) fn blocks(m: Modulus, rows: &[usize], cols: &[usize], parts: &[&[Option<&Mat>]]) -> Mat {
    let mut out = Mat::zeros(m, rows.iter().sum(), cols.iter().sum());
    let mut r0 = 0;
    for (i, row) in parts.iter().enumerate() {
        let mut c0 = 0;
        for (j, b) in row.iter().enumerate() {
            if let Some(b) = b {
                debug_assert_eq!((b.rows(), b.cols()), (rows[i], cols[j]));
                out.paste(r0, c0, b);
            }
            c0 += cols[j];
        }
        r0 += rows[i];
    }
    out
}

/// The fibered object of a span (S,T) -> (K,L) <- (U,V) with its two projections.
#[derive(Clone, Debug)]
pub struct OrePullback<O> {
    pub obj: MFObject<O>,
    pub pr_left: MFMorphism<O>,
    pub pr_right: MFMorphism<O>,
}

/// A morphism of the localized category: a roof src <-denom- (P,Q) -numer-> tgt with
/// Delta(denom) invertible, together with its Delta-image delta = Delta(denom)^-1 Delta(numer).
#[derive(Clone, Debug)]
pub struct Fraction<O> {
    pub denom: MFMorphism<O>,
    pub numer: MFMorphism<O>,
    pub delta: Mat,
}

impl<O> Fraction<O> {
    pub fn src(&self) -> &MFObject<O> {
        &self.denom.tgt
    }
    pub fn tgt(&self) -> &MFObject<O> {
        &self.numer.tgt
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub mono: bool,
    pub epi: bool,
}

impl<C: ExactCategory, B: Background<C>> Reduction<C, B> {
    /// P = S x_K (U + L(-1)) over phiU and (psiU, a_K), Q = T + V, with the structure
    /// maps of the fibered construction (minus sign on V(-1) -> L(-1)).
    pub fn ore_pullback(&self, phi: &MFMorphism<C::Obj>, psi: &MFMorphism<C::Obj>) -> Result<OrePullback<C::Obj>> {
        if phi.tgt != psi.tgt {
            return Err(Error::Precondition("span legs have different targets".into()));
        }
        let dk = self.delta(&psi.tgt)?;
        if rank_mod_l(&self.delta_mor(psi)?) != dk.dim() {
            return Err(Error::Precondition("right leg of the span is not an epi on Delta".into()));
        }
        let c = &self.cat;
        let f = c.field();
        let (st, uv, kl) = (&phi.src, &psi.src, &phi.tgt);
        let l1 = c.twist(&kl.v, -1);
        let (ds, du, dl, dk_) = (c.dim(&st.u), c.dim(&uv.u), c.dim(&l1), c.dim(&kl.u));
        let (dt, dv) = (c.dim(&st.v), c.dim(&uv.v));
        let big = c.direct_sum(&[&st.u, &uv.u, &l1])?;
        let (npsi, nak) = (psi.fu.neg(), kl.a.neg());
        let d = blocks(f, &[ds, du, dl], &[dk_], &[&[Some(&phi.fu)], &[Some(&npsi)], &[Some(&nak)]]);
        let d = c.arrow(&big, &kl.u, d)?;
        let inc = c.kernel(&d)?;
        let q = c.direct_sum(&[&st.v, &uv.v])?;
        let bmap = blocks(f, &[ds, du, dl], &[dt, dv], &[&[Some(&st.b), None], &[None, Some(&uv.b)], &[None, None]]);
        let b = inc.mat.mul(&bmap);
        let npsiv = psi.fv.neg();
        let rhs = blocks(
            f,
            &[dt, dv],
            &[ds, du, dl],
            &[&[Some(&st.a), None, Some(&phi.fv)], &[None, Some(&uv.a), Some(&npsiv)]],
        );
        let a = Solver::new(&inc.mat)
            .solve_mat(&rhs)
            .ok_or_else(|| Error::NoSolution("structure map does not land in the fibered product".into()))?;
        let obj = self.mf(inc.src.clone(), q, a, b)?;
        self.check_h(&obj)?;
        let sel = |k: usize| {
            let (rows, off) = match k {
                0 => (ds, 0),
                _ => (du, ds),
            };
            let mut m = Mat::zeros(f, ds + du + dl, rows);
            for i in 0..rows {
                m.set(off + i, i, 1);
            }
            m
        };
        let selv = |k: usize| {
            let (rows, off) = match k {
                0 => (dt, 0),
                _ => (dv, dt),
            };
            let mut m = Mat::zeros(f, dt + dv, rows);
            for i in 0..rows {
                m.set(off + i, i, 1);
            }
            m
        };
        let pr_left = self.mor(&obj, st, inc.mat.mul(&sel(0)), selv(0))?;
        let pr_right = self.mor(&obj, uv, inc.mat.mul(&sel(1)), selv(1))?;
        Ok(OrePullback { obj, pr_left, pr_right })
    }

    /// Delta(P,Q) -> Delta(S,T) + Delta(U,V) is injective with image the fibered product
    /// of Delta(phi) and Delta(psi).
    pub fn check_delta_pullback(
        &self,
        phi: &MFMorphism<C::Obj>,
        psi: &MFMorphism<C::Obj>,
        pb: &OrePullback<C::Obj>,
    ) -> Result<bool> {
        let dphi = self.delta_mor(phi)?;
        let dpsi = self.delta_mor(psi)?;
        let joint = self.delta_mor(&pb.pr_left)?.hstack(&self.delta_mor(&pb.pr_right)?);
        let diff = dphi.vstack(&dpsi.neg());
        let fibre = kernel(&diff);
        let dp = self.delta(&pb.obj)?.dim();
        let injective = rank_mod_l(&joint) == dp;
        let inside = joint.mul(&diff).is_zero();
        Ok(injective && inside && fibre.rows() == dp)
    }

    pub fn fraction(&self, denom: MFMorphism<C::Obj>, numer: MFMorphism<C::Obj>) -> Result<Fraction<C::Obj>> {
        if denom.src != numer.src {
            return Err(Error::Precondition("roof legs start at different objects".into()));
        }
        let inv = inverse(&self.delta_mor(&denom)?)
            .ok_or_else(|| Error::Precondition("denominator is not invertible on Delta".into()))?;
        let delta = inv.mul(&self.delta_mor(&numer)?);
        Ok(Fraction { denom, numer, delta })
    }

    /// The fraction id^-1 f of a morphism of diagrams.
    pub fn from_mor(&self, f: &MFMorphism<C::Obj>) -> Result<Fraction<C::Obj>> {
        self.fraction(self.identity_mor(&f.src), f.clone())
    }

    pub fn identity_fraction(&self, x: &MFObject<C::Obj>) -> Result<Fraction<C::Obj>> {
        self.from_mor(&self.identity_mor(x))
    }

    /// f followed by g, rewriting numer_f and denom_g through the Ore pullback.
    pub fn compose(&self, f: &Fraction<C::Obj>, g: &Fraction<C::Obj>) -> Result<Fraction<C::Obj>> {
        if f.tgt() != g.src() {
            return Err(Error::Precondition("fractions are not composable".into()));
        }
        let pb = self.ore_pullback(&f.numer, &g.denom)?;
        let denom = pb.pr_left.then(&f.denom)?;
        let numer = pb.pr_right.then(&g.numer)?;
        let out = self.fraction(denom, numer)?;
        if out.delta != f.delta.mul(&g.delta) {
            return Err(Error::Precondition("composite Delta-image differs from the product".into()));
        }
        Ok(out)
    }

    /// Equality in the localized category, decided by endpoints and Delta-images.
    pub fn equal_fractions(&self, f: &Fraction<C::Obj>, g: &Fraction<C::Obj>) -> bool {
        f.src() == g.src() && f.tgt() == g.tgt() && f.delta == g.delta
    }

    pub fn admissibility(&self, f: &Fraction<C::Obj>) -> Admissibility {
        let r = rank_mod_l(&f.delta);
        Admissibility { mono: r == f.delta.rows(), epi: r == f.delta.cols() }
    }

    /// X -f-> Y -g-> Z is short exact in the localized category iff it is under Delta.
    pub fn short_exact(&self, f: &Fraction<C::Obj>, g: &Fraction<C::Obj>) -> bool {
        f.tgt() == g.src() && delta_short_exact(&f.delta, &g.delta)
    }

    /// Kernel of a Delta-epi morphism of diagrams: the Ore pullback along the zero map.
    pub fn kernel_in_g(&self, psi: &MFMorphism<C::Obj>) -> Result<(MFObject<C::Obj>, MFMorphism<C::Obj>)> {
        let z = self.zero_mf();
        let phi = self.zero_mor(&z, &psi.tgt);
        let pb = self.ore_pullback(&phi, psi)?;
        Ok((pb.obj, pb.pr_right))
    }
}

/// 0 -> A -f-> B -g-> C -> 0 exact for linear maps of split spaces.
pub fn delta_short_exact(f: &Mat, g: &Mat) -> bool {
    f.cols() == g.rows()
        && f.mul(g).is_zero()
        && rank_mod_l(f) == f.rows()
        && rank_mod_l(g) == g.cols()
        && f.rows() + g.cols() == f.cols()
}
