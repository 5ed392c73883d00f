//! Seeded random objects for the batteries.

use crate::error::Result;
use crate::ext::{ses_of_class, ExtPresentation, Resolution, ShortExactSequence};
use crate::group::{hom_g, FiniteGroup, GModule, GMorphism};
use crate::linalg::{inverse, Mat, Modulus};
use rand::Rng;
use std::sync::Arc;

/// Uniformly random invertible matrix (rejection sampling).
pub fn random_invertible<R: Rng>(m: Modulus, n: usize, rng: &mut R) -> Mat {
    loop {
        let a = Mat::from_fn(m, n, n, |_, _| rng.gen_range(0..m.n()) as i64);
        if inverse(&a).is_some() {
            return a;
        }
    }
}

/// Random G-map M -> N: a random combination of a basis of Hom_G.
pub fn random_morphism<R: Rng>(mm: &GModule, nn: &GModule, rng: &mut R) -> Result<GMorphism> {
    let m = mm.modulus();
    let basis = hom_g(mm, nn)?;
    let c: Vec<u32> = (0..basis.rows()).map(|_| rng.gen_range(0..m.n())).collect();
    let flat = if basis.rows() == 0 { vec![0; mm.rank() * nn.rank()] } else { basis.apply(&c) };
    GMorphism::new(mm, nn, Mat::from_data(m, mm.rank(), nn.rank(), flat))
}

/// Trivial module and the nontrivial characters of order dividing l.
pub fn rank_one_modules(group: &Arc<FiniteGroup>, m: Modulus) -> Vec<GModule> {
    let mut v = vec![GModule::trivial(group.clone(), m, 1)];
    v.extend(GModule::order_l_characters(group.clone(), m));
    v
}

pub fn random_rank_one<R: Rng>(group: &Arc<FiniteGroup>, m: Modulus, rng: &mut R) -> GModule {
    let v = rank_one_modules(group, m);
    v[rng.gen_range(0..v.len())].clone()
}

/// Middle term of a random extension of two rank-one modules, in a random basis.
pub fn random_rank_two<R: Rng>(group: &Arc<FiniteGroup>, m: Modulus, rng: &mut R) -> Result<GModule> {
    let a = random_rank_one(group, m, rng);
    let b = random_rank_one(group, m, rng);
    let s = random_ses(&a, &b, rng)?;
    let p = random_invertible(m, 2, rng);
    s.middle().conjugate(&p)
}

/// A -> E -> B with a random class and the middle term in a random basis.
pub fn random_ses<R: Rng>(a: &GModule, b: &GModule, rng: &mut R) -> Result<ShortExactSequence> {
    let res = Resolution::free_cover(b);
    let z = ExtPresentation::new(&res, a, 1)?.random(rng);
    let s = ses_of_class(&z)?;
    let p = random_invertible(a.modulus(), s.middle().rank(), rng);
    s.conjugate_middle(&p)
}
