use crate::error::{Error, Result};
use crate::ext::{factor_ext, pushforward, syzygy_class, yoneda, ExtElement, ExtPresentation, Resolution, ResolutionCache};
use crate::group::{factor_through_epi, free_cover, free_map, BocksteinSetup, GModule, GMorphism};
use serde::Serialize;

/// The three reduced categories of a setup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Cat {
    T,
    ST,
    S,
}

impl Cat {
    pub fn label(self) -> &'static str {
        match self {
            Cat::T => "t",
            Cat::ST => "st",
            Cat::S => "s",
        }
    }
}

pub fn exponent(setup: &BocksteinSetup, c: Cat) -> u32 {
    match c {
        Cat::T => setup.b,
        Cat::ST => setup.a + setup.b,
        Cat::S => setup.a,
    }
}

/// sigma_0(p) for p: eta_t(X) -> eta_t(Y) (X, Y ambient): the map f with
/// f pi = s * (lift of p pi) for the free cover pi mod st.
pub fn sigma0(setup: &BocksteinSetup, p: &GMorphism, x: &GModule, y: &GModule) -> Result<GMorphism> {
    let st = setup.mod_st();
    if *p.src() != setup.eta_t(x)? || *p.tgt() != setup.eta_t(y)? {
        return Err(Error::Precondition("sigma0 expects a morphism eta_t(X) -> eta_t(Y)".into()));
    }
    let x = setup.eta_st(x)?;
    let y = setup.eta_st(y)?;
    let (cover, pi) = free_cover(&x);
    let g = x.group().order();
    let rows: Vec<usize> = (0..x.rank()).map(|j| j * g).collect();
    let gens_t = pi.mat().select_rows(&rows).reduce_to(setup.mod_t());
    let vals = gens_t.mul(p.mat()).shift_up(st, setup.a);
    let f = free_map(&cover, &y, &vals);
    factor_through_epi(&pi, &f)
}

/// r^0(f): reduction mod s.
pub fn r0(setup: &BocksteinSetup, f: &GMorphism) -> Result<GMorphism> {
    if f.modulus() != setup.mod_st() {
        return Err(Error::Precondition("r0 expects a morphism mod st".into()));
    }
    f.reduce(setup.a)
}

/// d^0(q) in Ext^1_t for q: eta_s(X) -> eta_s(Y), with `res` an ambient free-cover
/// resolution of X: lift q on the cover to Z/st, restrict to the first syzygy,
/// divide by s and read the result as a cocycle mod t.
pub fn d0(setup: &BocksteinSetup, q: &GMorphism, res: &Resolution, y: &GModule) -> Result<ExtElement> {
    let (st, t) = (setup.mod_st(), setup.mod_t());
    if *q.src() != setup.eta_s(res.module())? || *q.tgt() != setup.eta_s(y)? {
        return Err(Error::Precondition("d0 expects a morphism eta_s(X) -> eta_s(Y)".into()));
    }
    let rst = res.reduce(setup.a + setup.b)?;
    let yst = y.reduce(setup.a + setup.b)?;
    let eps = rst.dgen(0)?.reduce_to(setup.mod_s());
    let lifted = eps.mul(q.mat()).lift_to(st);
    let full = free_map(&rst.term(0)?, &yst, &lifted);
    let on_d1 = rst.dgen(1)?.mul(full.mat());
    let vals = on_d1
        .divide_down(t, setup.a)
        .ok_or_else(|| Error::NoSolution("lifted map is not divisible by s on the syzygy".into()))?;
    let p = ExtPresentation::new(&res.reduce(setup.b)?, &y.reduce(setup.b)?, 1)?;
    p.from_cocycle(&vals.flatten())
}

/// Ambient resolutions shared by the categories of one setup.
pub struct Bockstein {
    pub setup: BocksteinSetup,
    cache: ResolutionCache,
}

impl Bockstein {
    pub fn new(setup: BocksteinSetup) -> Self {
        Bockstein { setup, cache: ResolutionCache::new() }
    }

    fn check_ambient(&self, x: &GModule) -> Result<()> {
        if x.modulus() != self.setup.ambient() {
            return Err(Error::ModulusMismatch(x.modulus().n(), self.setup.ambient().n()));
        }
        Ok(())
    }

    pub fn ambient_res(&self, x: &GModule) -> Result<Resolution> {
        self.check_ambient(x)?;
        Ok(self.cache.get(x))
    }

    pub fn res(&self, x: &GModule, c: Cat) -> Result<Resolution> {
        self.ambient_res(x)?.reduce(exponent(&self.setup, c))
    }

    pub fn eta(&self, x: &GModule, c: Cat) -> Result<GModule> {
        x.reduce(exponent(&self.setup, c))
    }

    /// Ext^n in category c between reductions of ambient modules.
    pub fn ext(&self, x: &GModule, y: &GModule, n: usize, c: Cat) -> Result<ExtPresentation> {
        self.check_ambient(y)?;
        ExtPresentation::new(&self.res(x, c)?, &self.eta(y, c)?, n)
    }

    /// Ambient Ext^n_F.
    pub fn ext_ambient(&self, x: &GModule, y: &GModule, n: usize) -> Result<ExtPresentation> {
        self.check_ambient(y)?;
        ExtPresentation::new(&self.ambient_res(x)?, y, n)
    }

    /// eta^n_c of an ambient class.
    pub fn eta_class(&self, a: &ExtElement, c: Cat) -> Result<ExtElement> {
        a.reduce(exponent(&self.setup, c))
    }

    /// q with z = q . eta^n(b), b the syzygy class of the ambient module x;
    /// `extra` adds a map out of P_{n-1} restricted to the syzygy (another valid factorization).
    pub fn factor(&self, x: &GModule, z: &ExtElement, extra: Option<&GMorphism>) -> Result<(GMorphism, ExtElement)> {
        let res = self.ambient_res(x)?;
        let n = z.degree();
        let (_, b) = syzygy_class(&res, n)?;
        let mut q = factor_ext(z, &b)?;
        if let Some(e) = extra {
            if n == 0 {
                return Err(Error::Precondition("degree 0 factorizations are unique".into()));
            }
            let syz = z.parent().resolution().syzygy(n)?;
            q = q.add(&syz.inc.unwrap().then(e)?);
        }
        Ok((q, b))
    }

    /// sigma_n: Ext^n_t -> Ext^n_st.
    pub fn sigma_n(&self, x: &GModule, y: &GModule, z: &ExtElement, extra: Option<&GMorphism>) -> Result<ExtElement> {
        let (q, b) = self.factor(x, z, extra)?;
        pushforward(&sigma0(&self.setup, &q, b.target(), y)?, &self.eta_class(&b, Cat::ST)?)
    }

    /// r^n: Ext^n_st -> Ext^n_s.
    pub fn r_n(&self, x: &GModule, z: &ExtElement, extra: Option<&GMorphism>) -> Result<ExtElement> {
        let (q, b) = self.factor(x, z, extra)?;
        pushforward(&r0(&self.setup, &q)?, &self.eta_class(&b, Cat::S)?)
    }

    /// delta^n: Ext^n_s -> Ext^{n+1}_t, as d0(q) . eta_t^n(b).
    pub fn delta_n(&self, x: &GModule, y: &GModule, z: &ExtElement, extra: Option<&GMorphism>) -> Result<ExtElement> {
        let n = z.degree();
        let (q, b) = self.factor(x, z, extra)?;
        let tail = self.ambient_res(x)?.tail(n)?;
        let d = d0(&self.setup, &q, &tail, y)?;
        yoneda(&d, &self.eta_class(&b, Cat::T)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;
    use crate::linalg::Mat;
    use std::sync::Arc;

    fn c2_setup() -> (BocksteinSetup, GModule, GModule) {
        let st = BocksteinSetup::new(2, 2, 1, 1).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let triv = GModule::trivial(g.clone(), st.ambient(), 1);
        let chi = GModule::character(g, st.ambient(), &[3]).unwrap();
        (st, triv, chi)
    }

    #[test]
    fn sigma0_of_identity_is_s() {
        let (st, triv, _) = c2_setup();
        let id = GMorphism::identity(&st.eta_t(&triv).unwrap());
        let f = sigma0(&st, &id, &triv, &triv).unwrap();
        assert_eq!(f.mat().get(0, 0), 2);
        assert_eq!(r0(&st, &f).unwrap().mat().get(0, 0), 0);
        let z = GMorphism::zero(id.src(), id.tgt());
        assert!(sigma0(&st, &z, &triv, &triv).unwrap().is_zero());
    }

    #[test]
    fn d0_of_nonliftable_identity() {
        let (st, triv, chi) = c2_setup();
        let bs = Bockstein::new(st);
        let res = bs.ambient_res(&triv).unwrap();
        let q = GMorphism::new(&st.eta_s(&triv).unwrap(), &st.eta_s(&chi).unwrap(), Mat::identity(st.mod_s(), 1)).unwrap();
        let d = d0(&st, &q, &res, &chi).unwrap();
        assert_eq!(d.parent().cyclic_orders(), vec![2]);
        assert_eq!(d.coords(), &[1]);
        // the reduction of a map triv -> triv lifts, so its d0 vanishes
        let q2 = GMorphism::identity(&st.eta_s(&triv).unwrap());
        assert!(d0(&st, &q2, &res, &triv).unwrap().is_zero());
    }

    #[test]
    fn c3_over_z9_obstruction() {
        let st = BocksteinSetup::new(3, 2, 1, 1).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(3));
        let triv = GModule::trivial(g.clone(), st.ambient(), 1);
        let chi = GModule::character(g, st.ambient(), &[4]).unwrap();
        let bs = Bockstein::new(st);
        let res = bs.ambient_res(&triv).unwrap();
        let q = GMorphism::new(&st.eta_s(&triv).unwrap(), &st.eta_s(&chi).unwrap(), Mat::identity(st.mod_s(), 1)).unwrap();
        assert!(!d0(&st, &q, &res, &chi).unwrap().is_zero());
    }

    #[test]
    fn higher_maps_in_degree_zero_agree() {
        let (st, triv, chi) = c2_setup();
        let bs = Bockstein::new(st);
        let e = bs.ext(&triv, &chi, 0, Cat::S).unwrap();
        for z in e.elements() {
            let d = bs.delta_n(&triv, &chi, &z, None).unwrap();
            let q = z.cocycle_map().unwrap();
            let q = factor_through_epi(&bs.res(&triv, Cat::S).unwrap().syzygy(0).unwrap().eps, &q).unwrap();
            let direct = d0(&st, &q, &bs.ambient_res(&triv).unwrap(), &chi).unwrap();
            assert_eq!(d, direct);
        }
    }
}
