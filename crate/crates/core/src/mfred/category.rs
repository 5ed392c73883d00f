//! The interface an exact category with a twist, sigma and a background functor must provide.

use crate::error::{Error, Result};
use crate::linalg::{Mat, Modulus};
use serde::Serialize;
use std::fmt::Debug;

/// A morphism of an instance category, as a dim src x dim tgt matrix on row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow<O> {
    pub src: O,
    pub tgt: O,
    pub mat: Mat,
}

impl<O: Clone + PartialEq> Arrow<O> {
    /// self followed by next; no validity check beyond composability.
    pub fn then(&self, next: &Arrow<O>) -> Result<Arrow<O>> {
        if self.tgt != next.src {
            return Err(Error::Precondition("composing non-composable arrows".into()));
        }
        Ok(Arrow { src: self.src.clone(), tgt: next.tgt.clone(), mat: self.mat.mul(&next.mat) })
    }
}

/// An additive category of finite-dimensional F_p-objects with an exact structure,
/// an autoequivalence X -> X(1), a natural sigma: X -> X(1), kernels of admissible
/// epis, cokernels of admissible monos and a supply of relatively projective covers.
pub trait ExactCategory: Send + Sync {
    type Obj: Clone + PartialEq + Debug + Send + Sync;

    fn field(&self) -> Modulus;
    fn dim(&self, x: &Self::Obj) -> usize;
    /// Validates a candidate morphism matrix x -> y.
    fn check(&self, x: &Self::Obj, y: &Self::Obj, mat: &Mat) -> Result<()>;
    fn zero_object(&self) -> Self::Obj;
    fn direct_sum(&self, parts: &[&Self::Obj]) -> Result<Self::Obj>;
    fn twist(&self, x: &Self::Obj, k: i32) -> Self::Obj;
    /// The matrix of sigma_X: X -> X(1).
    fn sigma(&self, x: &Self::Obj) -> Mat;
    fn is_adm_mono(&self, f: &Arrow<Self::Obj>) -> bool;
    fn is_adm_epi(&self, f: &Arrow<Self::Obj>) -> bool;
    /// Inclusion of the kernel of an admissible epi.
    fn kernel(&self, e: &Arrow<Self::Obj>) -> Result<Arrow<Self::Obj>>;
    /// Projection onto the cokernel of an admissible mono.
    fn cokernel(&self, i: &Arrow<Self::Obj>) -> Result<Arrow<Self::Obj>>;
    /// g: X -> Y(-1) with f = g sigma_{Y(-1)}, for f: X -> Y annihilated by the background.
    fn divide_by_sigma(&self, f: &Arrow<Self::Obj>) -> Result<Arrow<Self::Obj>>;
    /// An admissible epi onto x from a relatively projective object.
    fn cover(&self, x: &Self::Obj) -> Result<Arrow<Self::Obj>>;
    /// A basis of Hom(x, y).
    fn hom_basis(&self, x: &Self::Obj, y: &Self::Obj) -> Result<Vec<Mat>>;

    fn arrow(&self, x: &Self::Obj, y: &Self::Obj, mat: Mat) -> Result<Arrow<Self::Obj>> {
        self.check(x, y, &mat)?;
        Ok(Arrow { src: x.clone(), tgt: y.clone(), mat })
    }
    fn identity(&self, x: &Self::Obj) -> Arrow<Self::Obj> {
        Arrow { src: x.clone(), tgt: x.clone(), mat: Mat::identity(self.field(), self.dim(x)) }
    }
    fn zero_arrow(&self, x: &Self::Obj, y: &Self::Obj) -> Arrow<Self::Obj> {
        Arrow { src: x.clone(), tgt: y.clone(), mat: Mat::zeros(self.field(), self.dim(x), self.dim(y)) }
    }
    fn twist_arrow(&self, f: &Arrow<Self::Obj>, k: i32) -> Arrow<Self::Obj> {
        Arrow { src: self.twist(&f.src, k), tgt: self.twist(&f.tgt, k), mat: f.mat.clone() }
    }
    fn sigma_arrow(&self, x: &Self::Obj) -> Arrow<Self::Obj> {
        Arrow { src: x.clone(), tgt: self.twist(x, 1), mat: self.sigma(x) }
    }
}

/// Basis labels of the split graded background category: a degree, or the
/// untwisted component (on which the twist acts as the identity).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Key {
    Deg(i32),
    Flat,
}

impl Key {
    pub fn shift(self, k: i32) -> Key {
        match self {
            Key::Deg(d) => Key::Deg(d + k),
            Key::Flat => Key::Flat,
        }
    }
}

/// A background functor into key-labelled vector spaces with key-preserving maps:
/// exact-conservative, killing sigma, and detecting sigma-divisibility.
pub trait Background<C: ExactCategory>: Send + Sync {
    fn name(&self) -> &'static str;
    fn keys(&self, x: &C::Obj) -> Vec<Key>;
    fn map(&self, f: &Arrow<C::Obj>) -> Mat;
}

/// Basis of key-preserving maps between labelled spaces, as (row, col) positions.
pub fn key_positions(src: &[Key], tgt: &[Key]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in src.iter().enumerate() {
        for (j, b) in tgt.iter().enumerate() {
            if a == b {
                out.push((i, j));
            }
        }
    }
    out
}
