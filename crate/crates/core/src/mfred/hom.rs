//! Hom between gamma-images in the localized category, enumerated through roofs
//! over a growing list of admissible-epi denominators, and the witnesses
//! for the exact-surjectivity properties of gamma.

use super::category::{Arrow, Background, ExactCategory};
use super::fraction::Fraction;
use super::object::{MFMorphism, MFObject, Reduction};
use crate::error::{Error, Result};
use crate::linalg::{howell_form, kernel, rank_mod_l, section, span_eq, Mat, Solver};
use serde::Serialize;

/// Hom(gamma X, gamma Y) as a subspace of Hom_E(pi X, pi Y).
#[derive(Clone, Debug)]
pub struct HomG<O> {
    pub x: O,
    pub y: O,
    /// Basis, each a dim pi X x dim pi Y matrix.
    pub basis: Vec<Mat>,
    /// Dimension of the realizable subspace at each denominator level.
    pub level_dims: Vec<usize>,
    /// The last two levels agree.
    pub stabilized: bool,
    /// More than the identity denominator was needed.
    pub bound_raised: bool,
    /// One roof per basis element.
    pub fractions: Vec<Fraction<O>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub a_prime: bool,
    pub b_prime: bool,
    pub c_prime: bool,
    pub d_prime: bool,
}

impl WitnessReport {
    pub fn ok(&self) -> bool {
        self.a_prime && self.b_prime && self.c_prime && self.d_prime
    }
}

impl<C: ExactCategory, B: Background<C>> Reduction<C, B> {
    /// Denominators of levels 1..=max_level: identity, cover, cover of the cover.
    pub fn denominators(&self, x: &C::Obj, max_level: usize) -> Result<Vec<Arrow<C::Obj>>> {
        let c = &self.cat;
        let mut out = vec![c.identity(x)];
        if max_level >= 2 {
            out.push(c.cover(x)?);
        }
        for _ in 3..=max_level {
            let last = out.last().unwrap().clone();
            out.push(c.cover(&last.src)?.then(&last)?);
        }
        Ok(out)
    }

    /// psi in Hom_E(pi X, pi Y) with pi(d) psi in pi(Hom(D, Y)), as flattened rows.
    pub fn realizable(&self, d: &Arrow<C::Obj>, y: &C::Obj) -> Result<Mat> {
        let (x, dd) = (&d.tgt, &d.src);
        let f = self.cat.field();
        let pos = self.hom_e_positions(x, y);
        let (px, py, pd) = (self.pi_dim(x), self.pi_dim(y), self.pi_dim(dd));
        let pimap = self.bg.map(d);
        let gs: Vec<Mat> = self.cat.hom_basis(dd, y)?.iter().map(|g| self.pi(dd, y, g)).collect();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(pos.len() + gs.len());
        for &(i, j) in &pos {
            let mut r = vec![0u32; pd * py];
            for k in 0..pd {
                r[k * py + j] = pimap.get(k, i);
            }
            rows.push(r);
        }
        for g in &gs {
            rows.push(g.neg().flatten());
        }
        let ker = kernel(&Mat::from_vecs(f, pd * py, &rows));
        let psis: Vec<Vec<u32>> = ker
            .row_vecs()
            .into_iter()
            .map(|k| {
                let mut v = vec![0u32; px * py];
                for (t, &(i, j)) in pos.iter().enumerate() {
                    v[i * py + j] = k[t];
                }
                v
            })
            .collect();
        Ok(howell_form(&Mat::from_vecs(f, px * py, &psis)))
    }

    /// Hom(gamma X, gamma Y), raising the denominator level up to max_level (>= 2).
    pub fn hom_g(&self, x: &C::Obj, y: &C::Obj, max_level: usize) -> Result<HomG<C::Obj>> {
        let dens = self.denominators(x, max_level.max(2))?;
        let mut spaces = Vec::with_capacity(dens.len());
        for d in &dens {
            spaces.push(self.realizable(d, y)?);
        }
        let n = spaces.len();
        let stabilized = span_eq(&spaces[n - 1], &spaces[n - 2]);
        let bound_raised = !span_eq(&spaces[0], &spaces[n - 1]);
        let (px, py) = (self.pi_dim(x), self.pi_dim(y));
        let f = self.cat.field();
        let top = &spaces[n - 1];
        let mut basis = Vec::with_capacity(top.rows());
        let mut fractions = Vec::with_capacity(top.rows());
        for r in top.row_vecs() {
            let psi = Mat::from_data(f, px, py, r.clone());
            let level = (0..n).find(|&k| Solver::new(&spaces[k]).contains(&r)).unwrap();
            let (frac, _) = self.realize(&psi, &dens[level.max(1)], y)?;
            basis.push(psi);
            fractions.push(frac);
        }
        Ok(HomG {
            x: x.clone(),
            y: y.clone(),
            basis,
            level_dims: spaces.iter().map(|s| s.rows()).collect(),
            stabilized,
            bound_raised,
            fractions,
        })
    }

    /// g: D -> Y with pi(d) psi = pi(g), if one exists.
    pub fn lift_numerator(&self, psi: &Mat, d: &Arrow<C::Obj>, y: &C::Obj) -> Result<Option<Arrow<C::Obj>>> {
        let f = self.cat.field();
        let dd = &d.src;
        let hom = self.cat.hom_basis(dd, y)?;
        let target = self.bg.map(d).mul(psi).flatten();
        let size = target.len();
        if hom.is_empty() {
            return Ok(if target.iter().all(|&v| v == 0) { Some(self.cat.zero_arrow(dd, y)) } else { None });
        }
        let rows: Vec<Vec<u32>> = hom.iter().map(|g| self.pi(dd, y, g).flatten()).collect();
        let Some(lam) = Solver::new(&Mat::from_vecs(f, size, &rows)).solve(&target) else {
            return Ok(None);
        };
        let mut g = Mat::zeros(f, self.cat.dim(dd), self.cat.dim(y));
        for (m, &l) in hom.iter().zip(&lam) {
            g = g.add(&m.scale(l));
        }
        Ok(Some(Arrow { src: dd.clone(), tgt: y.clone(), mat: g }))
    }

    /// A roof gamma X <- (D, V') -> gamma Y with Delta-image psi, built from an admissible
    /// epi d: D -> X and g: D -> Y with pi(d) psi = pi(g). Here K = ker d and V' is the
    /// cokernel of K -> D + K(1), k -> (k, -sigma k).
    pub fn realize(&self, psi: &Mat, d: &Arrow<C::Obj>, y: &C::Obj) -> Result<(Fraction<C::Obj>, Arrow<C::Obj>)> {
        let c = &self.cat;
        let f = c.field();
        let (x, dd) = (&d.tgt, &d.src);
        let g = self
            .lift_numerator(psi, d, y)?
            .ok_or_else(|| Error::NoSolution("psi is not realizable through this denominator".into()))?;
        let inc = c.kernel(d)?;
        let k = &inc.src;
        let h = c.divide_by_sigma(&inc.then(&g)?)?;
        let (ndd, nk) = (c.dim(dd), c.dim(k));
        let sum = c.direct_sum(&[dd, &c.twist(k, 1)])?;
        let cmat = inc.mat.hstack(&c.sigma(k).neg());
        let cok = c.cokernel(&c.arrow(k, &sum, cmat)?)?;
        let sec = section(&cok.mat).ok_or_else(|| Error::NoSolution("cokernel projection is not surjective".into()))?;
        let b = Mat::identity(f, ndd).hstack(&Mat::zeros(f, ndd, nk)).mul(&cok.mat);
        let a = sec.mul(&c.sigma(&c.twist(dd, -1)).vstack(&inc.mat));
        let obj = self.mf(dd.clone(), cok.tgt.clone(), a, b)?;
        self.check_h(&obj)?;
        let sv = sec.mul(&d.mat.vstack(&Mat::zeros(f, nk, c.dim(x))));
        let fv = sec.mul(&g.mat.vstack(&h.mat));
        let denom = self.mor(&obj, &self.gamma(x), d.mat.clone(), sv)?;
        let numer = self.mor(&obj, &self.gamma(y), g.mat.clone(), fv)?;
        let frac = self.fraction(denom, numer)?;
        if frac.delta != *psi {
            return Err(Error::Precondition("realized roof has a different Delta-image".into()));
        }
        Ok((frac, g))
    }

    /// (b'): the natural Delta-epi (id_U, b): gamma(U) -> (U, V).
    pub fn witness_b(&self, t: &MFObject<C::Obj>) -> Result<MFMorphism<C::Obj>> {
        let f = self.cat.field();
        let w = self.mor(&self.gamma(&t.u), t, Mat::identity(f, self.cat.dim(&t.u)), t.b.clone())?;
        if rank_mod_l(&self.delta_mor(&w)?) != self.delta(t)?.dim() {
            return Err(Error::Precondition("gamma(U) -> (U,V) is not an epi on Delta".into()));
        }
        Ok(w)
    }

    /// (c'): for a roof between gamma-images, the admissible epi X' -> X and the map
    /// X' -> Y read off its U-components, with the triangle checked on Delta.
    pub fn witness_c(&self, frac: &Fraction<C::Obj>) -> Result<(Arrow<C::Obj>, Arrow<C::Obj>)> {
        let c = &self.cat;
        let xp = &frac.denom.src.u;
        let e = c.arrow(xp, &frac.denom.tgt.u, frac.denom.fu.clone())?;
        let g = c.arrow(xp, &frac.numer.tgt.u, frac.numer.fu.clone())?;
        if *frac.src() != self.gamma(&e.tgt) || *frac.tgt() != self.gamma(&g.tgt) {
            return Err(Error::Precondition("fraction is not between gamma-images".into()));
        }
        if !c.is_adm_epi(&e) {
            return Err(Error::Precondition("U-component of the denominator is not an admissible epi".into()));
        }
        if self.bg.map(&e).mul(&frac.delta) != self.bg.map(&g) {
            return Err(Error::Precondition("witness triangle does not commute".into()));
        }
        Ok((e, g))
    }

    /// (d'): for gamma X -> T represented by a morphism of diagrams, the map X -> U and
    /// the epi gamma(U) -> T; the triangle commutes already among diagrams.
    pub fn witness_d(&self, f: &MFMorphism<C::Obj>) -> Result<(Arrow<C::Obj>, MFMorphism<C::Obj>)> {
        let x = &f.src.u;
        if f.src != self.gamma(x) {
            return Err(Error::Precondition("source is not a gamma-image".into()));
        }
        let m = self.cat.arrow(x, &f.tgt.u, f.fu.clone())?;
        let e = self.witness_b(&f.tgt)?;
        if self.gamma_mor(&m).then(&e)? != *f {
            return Err(Error::Precondition("witness triangle does not commute".into()));
        }
        Ok((m, e))
    }

    /// (a'): for a Delta-epi T -> gamma X represented by a morphism of diagrams, the
    /// admissible epi U -> X and gamma(U) -> T making the triangle commute.
    pub fn witness_a(&self, f: &MFMorphism<C::Obj>) -> Result<(Arrow<C::Obj>, MFMorphism<C::Obj>)> {
        let x = &f.tgt.u;
        if f.tgt != self.gamma(x) {
            return Err(Error::Precondition("target is not a gamma-image".into()));
        }
        if rank_mod_l(&self.delta_mor(f)?) != self.delta(&f.tgt)?.dim() {
            return Err(Error::Precondition("morphism is not an epi on Delta".into()));
        }
        let e = self.cat.arrow(&f.src.u, x, f.fu.clone())?;
        if !self.cat.is_adm_epi(&e) {
            return Err(Error::Precondition("U-component is not an admissible epi".into()));
        }
        let w = self.witness_b(&f.src)?;
        if w.then(f)? != self.gamma_mor(&e) {
            return Err(Error::Precondition("witness triangle does not commute".into()));
        }
        Ok((e, w))
    }
}
