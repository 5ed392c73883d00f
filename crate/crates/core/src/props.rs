//! Seeded property batteries for the Ext calculus.

use crate::error::Result;
use crate::ext::{
    class_of_ses, commuting_squares, factor_ext, morphism_of_sequences, pullback, pushforward, secondary_product,
    square_filler, syzygy_class, yoneda, ExtPresentation, Resolution, ResolutionCache,
};
use crate::gen::{random_invertible, random_morphism, random_rank_one, random_rank_two, random_ses, rank_one_modules};
use crate::group::{FiniteGroup, GModule, GMorphism};
use crate::linalg::Modulus;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::sync::Arc;

/// Outcome of one property over a number of seeded cases.
#[derive(Clone, Debug, Serialize)]
pub struct PropReport {
    pub name: String,
    pub cases: usize,
    pub passed: usize,
    /// Cases exercising the nontrivial side (an existing map, a nonzero class).
    pub nontrivial: usize,
    pub failures: Vec<String>,
}

impl PropReport {
    pub fn ok(&self) -> bool {
        self.passed == self.cases
    }
}

struct CaseResult {
    pass: bool,
    nontrivial: bool,
    note: String,
}

fn run<F>(name: &str, seed: u64, cases: usize, f: F) -> PropReport
where
    F: Fn(&mut ChaCha8Rng) -> Result<CaseResult> + Sync,
{
    let salt = name.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
    let results: Vec<(usize, Result<CaseResult>)> = (0..cases)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15));
            (i, f(&mut rng))
        })
        .collect();
    let mut rep = PropReport { name: name.into(), cases, passed: 0, nontrivial: 0, failures: vec![] };
    for (i, r) in results {
        match r {
            Ok(c) => {
                if c.pass {
                    rep.passed += 1;
                } else {
                    rep.failures.push(format!("case {i}: {}", c.note));
                }
                if c.nontrivial {
                    rep.nontrivial += 1;
                }
            }
            Err(e) => rep.failures.push(format!("case {i}: error {e}")),
        }
    }
    rep
}

fn small_context<R: Rng>(rng: &mut R) -> (Arc<FiniteGroup>, Modulus) {
    let choices: [(&str, u64); 9] =
        [("C2", 2), ("C2", 4), ("C3", 3), ("C4", 2), ("C4", 4), ("C2xC2", 2), ("S3", 3), ("S3", 2), ("C3", 9)];
    let (g, n) = choices[rng.gen_range(0..choices.len())];
    (Arc::new(FiniteGroup::by_name(g).unwrap()), Modulus::from_order(n).unwrap())
}

fn small_module<R: Rng>(g: &Arc<FiniteGroup>, m: Modulus, rng: &mut R) -> Result<GModule> {
    if rng.gen_bool(0.2) {
        random_rank_two(g, m, rng)
    } else {
        Ok(random_rank_one(g, m, rng))
    }
}

/// fz = wg in Ext^1(X, V) iff a morphism of sequences Z -> W extends f and g.
pub fn fz_wg(seed: u64, cases: usize) -> PropReport {
    run("fz=wg", seed, cases, |rng| {
        let (g, m) = small_context(rng);
        let x = small_module(&g, m, rng)?;
        let y = small_module(&g, m, rng)?;
        let v = small_module(&g, m, rng)?;
        let zs = random_ses(&y, &x, rng)?;
        let f = random_morphism(&y, &v, rng)?;
        let (ws, gm) = if rng.gen_bool(0.5) {
            let (w, _) = zs.pushout(&f)?;
            let p = random_invertible(m, w.middle().rank(), rng);
            (w.conjugate_middle(&p)?, GMorphism::identity(&x))
        } else {
            let u = small_module(&g, m, rng)?;
            (random_ses(&v, &u, rng)?, random_morphism(&x, &u, rng)?)
        };
        let u = ws.quotient().clone();
        let cache = ResolutionCache::new();
        let z = class_of_ses(&zs, &cache.get(&x))?;
        let w = class_of_ses(&ws, &cache.get(&u))?;
        let f0 = ExtPresentation::new(&cache.get(&y), &v, 0)?.from_morphism(&f)?;
        let g0 = ExtPresentation::new(&cache.get(&x), &u, 0)?.from_morphism(&gm)?;
        let eq = yoneda(&f0, &z)? == yoneda(&w, &g0)?;
        let h = morphism_of_sequences(&zs, &ws, &f, &gm)?.is_some();
        Ok(CaseResult { pass: eq == h, nontrivial: h && !z.is_zero(), note: format!("fz=wg {eq}, map exists {h}") })
    })
}

/// lz + xv = 0 for 3x3 diagrams S1 (x) S2 of random sequences.
pub fn three_by_three(seed: u64, cases: usize) -> PropReport {
    run("3x3", seed, cases, |rng| {
        let (g, m) = small_context(rng);
        let (a, c) = (random_rank_one(&g, m, rng), random_rank_one(&g, m, rng));
        let (a2, c2) = (random_rank_one(&g, m, rng), random_rank_one(&g, m, rng));
        let s1 = random_ses(&a, &c, rng)?;
        let s2 = random_ses(&a2, &c2, rng)?;
        let top = s2.tensor_left(&a);
        let bottom = s2.tensor_left(&c);
        let left = s1.tensor_module(&a2);
        let right = s1.tensor_module(&c2);
        let cache = ResolutionCache::new();
        let l = class_of_ses(&top, &cache.get(top.quotient()))?;
        let z = class_of_ses(&right, &cache.get(right.quotient()))?;
        let v = class_of_ses(&bottom, &cache.get(bottom.quotient()))?;
        let x = class_of_ses(&left, &cache.get(left.quotient()))?;
        let lz = yoneda(&l, &z)?;
        let xv = yoneda(&x, &v)?;
        let sum = lz.add(&xv)?;
        Ok(CaseResult { pass: sum.is_zero(), nontrivial: !lz.is_zero(), note: format!("lz {:?} xv {:?}", lz.coords(), xv.coords()) })
    })
}

fn random_square<R: Rng>(
    top: &crate::ext::ShortExactSequence,
    bottom: &crate::ext::ShortExactSequence,
    rng: &mut R,
) -> Result<(GMorphism, GMorphism)> {
    let m = top.sub().modulus();
    if rng.gen_bool(0.3) {
        let h = random_morphism(top.middle(), bottom.middle(), rng)?;
        return Ok((top.mono().then(&h)?, h.then(bottom.epi())?));
    }
    let basis = commuting_squares(top, bottom)?;
    let mut f = GMorphism::zero(top.sub(), bottom.middle());
    let mut g = GMorphism::zero(top.middle(), bottom.quotient());
    for (bf, bg) in basis {
        let c = rng.gen_range(0..m.n());
        f = f.add(&bf.scale(c));
        g = g.add(&bg.scale(c));
    }
    Ok((f, g))
}

/// The secondary product: vanishing iff a filler exists, naturality under pushout
/// of the lower sequence, additivity in the square.
pub fn secondary(seed: u64, cases: usize) -> PropReport {
    run("secondary product", seed, cases, |rng| {
        let (g, m) = small_context(rng);
        let (k, mm) = (random_rank_one(&g, m, rng), small_module(&g, m, rng)?);
        let (u, w) = (random_rank_one(&g, m, rng), random_rank_one(&g, m, rng));
        let top = random_ses(&k, &mm, rng)?;
        let bottom = random_ses(&u, &w, rng)?;
        let res = Resolution::free_cover(&mm);
        let (f, gg) = random_square(&top, &bottom, rng)?;
        let class = secondary_product(&top, &bottom, &f, &gg, &res)?;
        let filler = square_filler(&top, &bottom, &f, &gg)?.is_some();
        let part_b = class.is_zero() == filler;
        let u2 = small_module(&g, m, rng)?;
        let uu = random_morphism(&u, &u2, rng)?;
        let (bottom2, vmap) = bottom.pushout(&uu)?;
        let class2 = secondary_product(&top, &bottom2, &f.then(&vmap)?, &gg, &res)?;
        let part_c = class2 == pushforward(&uu, &class)?;
        let (f2, g2) = random_square(&top, &bottom, rng)?;
        let sum = secondary_product(&top, &bottom, &f.add(&f2), &gg.add(&g2), &res)?;
        let part_d = sum == class.add(&secondary_product(&top, &bottom, &f2, &g2, &res)?)?;
        Ok(CaseResult {
            pass: part_b && part_c && part_d,
            nontrivial: !class.is_zero(),
            note: format!("(b) {part_b} (c) {part_c} (d) {part_d}"),
        })
    })
}

/// For a in Ext^n_F(X, Y) and b in Ext^m(eta Y, W) with b.eta(a) = 0, m >= 1,
/// the witness Y' = Omega^n X, f = factor of a through the syzygy class, a' = that class
/// gives a = f a' and b eta(f) = 0.
pub fn prop_a(seed: u64, cases: usize) -> PropReport {
    run("syzygy witness", seed, cases, |rng| {
        let groups = ["C2", "C3", "C4", "C2xC2", "S3"];
        let g = Arc::new(FiniteGroup::by_name(groups[rng.gen_range(0..groups.len())])?);
        let l = if rng.gen_bool(0.5) { 2 } else { 3 };
        let big_r = rng.gen_range(2..=3);
        let amb = Modulus::new(l, big_r)?;
        let c = rng.gen_range(1..big_r);
        let pool = rank_one_modules(&g, amb);
        let pick = |rng: &mut ChaCha8Rng| pool[rng.gen_range(0..pool.len())].clone();
        let (x, y, w) = (pick(rng), pick(rng), pick(rng));
        let n = rng.gen_range(0..=2);
        let mdeg = rng.gen_range(1..=2);
        let resx = Resolution::free_cover(&x);
        let a = ExtPresentation::new(&resx, &y, n)?.random(rng);
        let ea = a.reduce(c)?;
        let resy = Resolution::free_cover(&y).reduce(c)?;
        let bp = ExtPresentation::new(&resy, &w.reduce(c)?, mdeg)?;
        let mut killers = Vec::new();
        for b in bp.elements().into_iter().take(512) {
            if yoneda(&b, &ea)?.is_zero() {
                killers.push(b);
            }
        }
        let b = killers.swap_remove(rng.gen_range(0..killers.len()));
        let (_, syz) = syzygy_class(&resx, n)?;
        let f = factor_ext(&a, &syz)?;
        let first = pushforward(&f, &syz)? == a;
        let ef = f.reduce(c)?;
        let tail = resx.tail(n)?.reduce(c)?;
        let second = pullback(&b, &ef, &tail)?.is_zero();
        Ok(CaseResult {
            pass: first && second,
            nontrivial: !b.is_zero() && !a.is_zero(),
            note: format!("a = f a' {first}, b eta(f) = 0 {second}"),
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass() {
        for rep in [fz_wg(1, 100), three_by_three(1, 100), secondary(1, 100), prop_a(1, 100)] {
            eprintln!("{} {}/{} nontrivial {}", rep.name, rep.passed, rep.cases, rep.nontrivial);
            assert!(rep.ok(), "{rep:?}");
        }
    }
}
