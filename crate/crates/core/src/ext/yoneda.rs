use super::group::{ExtElement, ExtPresentation};
use super::resolution::Resolution;
use crate::error::{Error, Result};
use crate::group::{factor_through_epi, free_map, GModule, GMorphism};

/// The product x.y of y in Ext^j(M,N) and x in Ext^i(N,L), living in Ext^{i+j}(M,L)
/// over the resolution of y. Computed by lifting y to a chain map into the
/// resolution of x and composing with the cocycle of x.
pub fn yoneda(x: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
    if y.target() != x.source() {
        return Err(Error::Precondition("yoneda: target of y is not the source of x".into()));
    }
    let (i, j) = (x.degree(), y.degree());
    let yres = y.parent().resolution();
    let xres = x.parent().resolution();
    let phi = yres.lift_chain(j, &y.cocycle_gens(), xres, i)?;
    let xfull = free_map(&xres.term(i)?, x.target(), &x.cocycle_gens());
    let vals = phi[i].mul(xfull.mat());
    let p = ExtPresentation::new(yres, x.target(), i + j)?;
    p.from_cocycle(&vals.flatten())
}

/// f.z for a morphism f out of the target of z.
pub fn pushforward(f: &GMorphism, z: &ExtElement) -> Result<ExtElement> {
    if f.src() != z.target() {
        return Err(Error::Precondition("pushforward: morphism does not start at the target".into()));
    }
    let vals = z.cocycle_gens().mul(f.mat());
    let p = ExtPresentation::new(z.parent().resolution(), f.tgt(), z.degree())?;
    p.from_cocycle(&vals.flatten())
}

/// z.g for a morphism g into the source of z, over the given resolution of g's source.
pub fn pullback(z: &ExtElement, g: &GMorphism, res: &Resolution) -> Result<ExtElement> {
    let p0 = ExtPresentation::new(res, g.tgt(), 0)?;
    yoneda(z, &p0.from_morphism(g)?)
}

/// Omega^n M and the class b in Ext^n(M, Omega^n M) of the augmentation P_n -> Omega^n.
/// For n = 0 this is M with the identity class.
pub fn syzygy_class(res: &Resolution, n: usize) -> Result<(GModule, ExtElement)> {
    let syz = res.syzygy(n)?;
    let p = ExtPresentation::new(res, &syz.omega, n)?;
    let vals = if n == 0 {
        res.dgen(0)?
    } else {
        let g = res.group().order();
        let rows: Vec<usize> = (0..res.rank(n)?).map(|j| j * g).collect();
        syz.eps.mat().select_rows(&rows)
    };
    let b = p.from_cocycle(&vals.flatten())?;
    Ok((syz.omega, b))
}

/// q: Omega^n -> target with z = q.b, where z lives over a reduction (or the ambient)
/// of the resolution carrying the syzygy class b.
pub fn factor_ext(z: &ExtElement, b: &ExtElement) -> Result<GMorphism> {
    let n = z.degree();
    if b.degree() != n {
        return Err(Error::Precondition("factor_ext: degrees differ".into()));
    }
    let res = z.parent().resolution();
    let syz = res.syzygy(n)?;
    let c = z.parent().modulus().r();
    if b.target().reduce(c)? != syz.omega || b.source().reduce(c)? != *z.source() {
        return Err(Error::Precondition("factor_ext: syzygy class does not match".into()));
    }
    factor_through_epi(&syz.eps, &z.cocycle_map()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::group::ext_group;
    use crate::group::FiniteGroup;
    use crate::linalg::Modulus;
    use std::sync::Arc;

    fn triv(n: u64) -> GModule {
        GModule::trivial(Arc::new(FiniteGroup::cyclic(2)), Modulus::from_order(n).unwrap(), 1)
    }

    #[test]
    fn c2_orders() {
        let k = triv(2);
        for n in 0..5 {
            assert_eq!(ext_group(&k, &k, n).unwrap().cyclic_orders(), vec![2]);
        }
        let k4 = triv(4);
        assert_eq!(ext_group(&k4, &k4, 0).unwrap().cyclic_orders(), vec![4]);
        for n in 1..5 {
            assert_eq!(ext_group(&k4, &k4, n).unwrap().cyclic_orders(), vec![2]);
        }
        assert!(ext_group(&k, &k, 5).is_err());
    }

    #[test]
    fn trivial_group_vanishes() {
        let g = Arc::new(FiniteGroup::trivial());
        let m = Modulus::from_order(9).unwrap();
        let a = GModule::trivial(g.clone(), m, 2);
        let b = GModule::trivial(g, m, 1);
        assert_eq!(ext_group(&a, &b, 0).unwrap().order(), 9 * 9);
        for n in 1..4 {
            assert!(ext_group(&a, &b, n).unwrap().presentation().is_trivial());
        }
    }

    #[test]
    fn u_squared_generates() {
        let k = triv(2);
        let r = Resolution::free_cover(&k);
        let e1 = ExtPresentation::new(&r, &k, 1).unwrap();
        let u = e1.generators().remove(0);
        let uu = yoneda(&u, &u).unwrap();
        assert_eq!(uu.coords(), &[1]);
        let uuu = yoneda(&u, &uu).unwrap();
        assert_eq!(uuu.coords(), &[1]);
        assert!(yoneda(&u, &e1.zero()).unwrap().is_zero());
    }

    #[test]
    fn syzygy_and_factor() {
        let k = triv(4);
        let r = Resolution::free_cover(&k);
        let (om, b) = syzygy_class(&r, 1).unwrap();
        // the augmentation ideal of Z/4[C2] is the sign character
        assert_eq!(om.act(1).get(0, 0), 3);
        assert!(!b.is_zero());
        let rs = r.reduce(1).unwrap();
        let k2 = k.reduce(1).unwrap();
        let z = ExtPresentation::new(&rs, &k2, 1).unwrap().generators().remove(0);
        let q = factor_ext(&z, &b).unwrap();
        let bz = b.reduce(1).unwrap();
        assert_eq!(pushforward(&q, &bz).unwrap(), z);
        let (om2, b2) = syzygy_class(&r, 2).unwrap();
        assert!(om2.is_trivial_action());
        let id = GMorphism::identity(&om2);
        assert_eq!(factor_ext(&b2, &b2).unwrap(), id);
    }
}
