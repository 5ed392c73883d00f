use super::*;
use crate::filtered::{random_filtered, FilteredObject};
use crate::group::{FiniteGroup, GModule};
use crate::linalg::{rank_mod_l, Mat, Modulus};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

fn red(name: &str, p: u32) -> Reduction<FilteredCategory, GrBackground> {
    let g = Arc::new(FiniteGroup::by_name(name).unwrap());
    Reduction::new(FilteredCategory::new(g, Modulus::field(p).unwrap()).unwrap(), GrBackground)
}

#[test]
fn gamma_images_and_delta() {
    let r = red("C2", 2);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let x = random_filtered(r.cat.group(), r.cat.field(), 4, &mut rng).unwrap();
    let gx = r.gamma(&x);
    assert!(r.in_h(&gx));
    let d = r.delta(&gx).unwrap();
    assert_eq!(d.basis, Mat::identity(r.cat.field(), 4));
    let z = r.zeta(&FilteredObject::unit(r.cat.group().clone(), r.cat.field(), 0));
    assert!(r.in_h(&z));
    assert_eq!(r.delta(&z).unwrap().dim(), 0);
    assert_eq!(r.delta(&r.zero_mf()).unwrap().dim(), 0);
}

#[test]
fn ore_pullback_and_composition() {
    let r = red("C2", 2);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (g, p) = (r.cat.group().clone(), r.cat.field());
    let k = random_filtered(&g, p, 3, &mut rng).unwrap();
    let s = random_filtered(&g, p, 2, &mut rng).unwrap();
    let cov = r.cat.cover(&k).unwrap();
    let psi = r.gamma_mor(&cov);
    let homs = r.cat.hom_basis(&s, &k).unwrap();
    let phi_mat = homs.iter().fold(Mat::zeros(p, 2, 3), |acc, m| acc.add(m));
    let phi = r.gamma_mor(&r.cat.arrow(&s, &k, phi_mat).unwrap());
    let pb = r.ore_pullback(&phi, &psi).unwrap();
    assert!(r.check_delta_pullback(&phi, &psi, &pb).unwrap());
    let id = r.identity_mor(&r.gamma(&k));
    let pb2 = r.ore_pullback(&phi, &id).unwrap();
    assert!(r.check_delta_pullback(&phi, &id, &pb2).unwrap());
    let (kobj, kinc) = r.kernel_in_g(&psi).unwrap();
    let dk = r.delta_mor(&kinc).unwrap();
    assert!(delta_short_exact(&dk, &r.delta_mor(&psi).unwrap()));
    assert_eq!(r.delta(&kobj).unwrap().dim(), cov.src.dim() - 3);
}

#[test]
fn hom_g_regular_c2() {
    let r = red("C2", 2);
    let (g, p) = (r.cat.group().clone(), r.cat.field());
    let reg = FilteredObject::i_adic(&GModule::regular(g.clone(), p)).unwrap();
    let h = r.hom_g(&reg, &reg, 3).unwrap();
    eprintln!("{:?} stab {} raised {}", h.level_dims, h.stabilized, h.bound_raised);
    assert!(h.stabilized);
    for (psi, fr) in h.basis.iter().zip(&h.fractions) {
        assert_eq!(&fr.delta, psi);
        r.witness_c(fr).unwrap();
    }
    let u0 = FilteredObject::unit(g.clone(), p, 0);
    let h = r.hom_g(&u0, &u0.twist(1), 3).unwrap();
    eprintln!("{:?} stab {} raised {}", h.level_dims, h.stabilized, h.bound_raised);
    let h = r.hom_g(&u0.twist(1), &u0, 3).unwrap();
    eprintln!("{:?} stab {} raised {}", h.level_dims, h.stabilized, h.bound_raised);
    let _ = rank_mod_l(&Mat::zeros(p, 0, 0));
}

#[test]
fn segment_small_cases() {
    for (name, p) in [("1", 2), ("C2", 2), ("C4", 2), ("C3", 3)] {
        let r = red(name, p);
        let (g, pp) = (r.cat.group().clone(), r.cat.field());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let reg = FilteredObject::i_adic(&GModule::regular(g.clone(), pp)).unwrap();
        let u0 = FilteredObject::unit(g.clone(), pp, 0);
        let mut pool = vec![u0.clone(), u0.twist(1), reg.clone()];
        for _ in 0..3 {
            pool.push(random_filtered(&g, pp, 3, &mut rng).unwrap());
        }
        for x in &pool {
            for y in &pool {
                let rep = first_bockstein_segment(&r, x, y).unwrap();
                assert!(rep.ok());
                let ind = independence_compare(&r.cat, x, y, x.dim() <= 3 && y.dim() <= 3).unwrap();
                assert!(ind.ok(), "{ind:?}");
            }
        }
    }
}

#[test]
fn connecting_map_detects_unliftable_graded_map() {
    let r = red("C2", 2);
    let (g, p) = (r.cat.group().clone(), r.cat.field());
    let gen = Mat::from_rows(p, &[vec![1, 1], vec![0, 1]]).unwrap();
    let y = FilteredObject::new(GModule::from_generators(g.clone(), p, 2, &[gen]).unwrap(), vec![0, 2]).unwrap();
    let x = FilteredObject::unit(g, p, 0);
    let rep = first_bockstein_segment(&r, &x, &y).unwrap();
    assert!(rep.ok(), "{rep:?}");
    assert!(rep.connecting_nonzero);
    assert_eq!(rep.dims[..3], [1, 1, 1]);
    assert!(rep.bound_raised);
}

#[test]
fn segment_statistics_on_random_pairs() {
    let mut raised = 0;
    let mut nonzero = 0;
    for (name, p) in [("C2", 2), ("C4", 2), ("C3", 3)] {
        let r = red(name, p);
        let (g, pp) = (r.cat.group().clone(), r.cat.field());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..12 {
            let x = random_filtered(&g, pp, 2, &mut rng).unwrap();
            let y = random_filtered(&g, pp, 3, &mut rng).unwrap();
            let rep = first_bockstein_segment(&r, &x, &y).unwrap();
            assert!(rep.ok(), "{rep:?}");
            raised += rep.bound_raised as usize;
            nonzero += rep.connecting_nonzero as usize;
        }
    }
    eprintln!("bound raised {raised}, connecting nonzero {nonzero}");
    assert!(nonzero > 0);
}

#[test]
fn suite_case_c2() {
    let rep = run_mf_case("C2", 2, 5, 10, 10).unwrap();
    eprintln!("{}", serde_json::to_string(&rep).unwrap());
    assert!(rep.ok());
}

#[test]
#[ignore]
fn full_suite_timing() {
    let t = std::time::Instant::now();
    for r in mf_suite(0) {
        let r = r.unwrap();
        eprintln!("{} ok {} gamma {:?} spans {:?} seq {:?} seg {:?} ind {:?} raised {} nonzero {} {:?}", r.group, r.ok(), r.gamma, r.spans, r.sequences, r.segment, r.independence, r.bound_raised, r.connecting_nonzero, &r.failures[..r.failures.len().min(3)]);
    }
    eprintln!("{:?}", t.elapsed());
}
