use super::resolution::Resolution;
use crate::error::{Error, Result};
use crate::group::{free_map, GModule, GMorphism};
use crate::linalg::{kernel, subquotient, FiniteModulePresentation, Mat, Modulus};
use rand::Rng;
use std::fmt;
use std::sync::Arc;

/// Default cap on Ext degrees.
pub const DEFAULT_MAX_DEGREE: usize = 4;

pub(crate) struct PresData {
    pres: FiniteModulePresentation,
    k: usize,
}

/// Ext^n(M, N) as a finite l-group: cocycles Hom_G(P_n, N) modulo coboundaries,
/// for a fixed resolution P of M. Cochains are generator values, flattened as j*rank(N)+c.
#[derive(Clone)]
pub struct ExtPresentation {
    res: Resolution,
    target: GModule,
    n: usize,
    data: Arc<PresData>,
}

impl fmt::Debug for ExtPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ext^{}({:?}, {:?}) = {:?}", self.n, self.res.module(), self.target, self.cyclic_orders())
    }
}

/// Matrix of the coboundary C^n -> C^{n+1} on flattened generator values.
pub fn coboundary(res: &Resolution, target: &GModule, n: usize) -> Result<Mat> {
    let m = target.modulus();
    let d = target.rank();
    let g = target.group().order();
    let kn = res.rank(n)?;
    let kn1 = res.rank(n + 1)?;
    let dg = res.dgen(n + 1)?;
    let mut out = Mat::zeros(m, kn * d, kn1 * d);
    for i in 0..kn1 {
        for j in 0..kn {
            for h in 0..g {
                let lam = dg.get(i, j * g + h);
                if lam == 0 {
                    continue;
                }
                let rho = target.act(h);
                for c in 0..d {
                    for c2 in 0..d {
                        let v = rho.get(c, c2);
                        if v != 0 {
                            let (r, col) = (j * d + c, i * d + c2);
                            out.set(r, col, m.add(out.get(r, col), m.mul(lam, v)));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

impl ExtPresentation {
    /// Ext^n(res.module, target), cached on the resolution.
    pub fn new(res: &Resolution, target: &GModule, n: usize) -> Result<ExtPresentation> {
        let src = res.module();
        if !src.same_group(target) {
            return Err(Error::Precondition("modules over different groups".into()));
        }
        if src.modulus() != target.modulus() {
            return Err(Error::ModulusMismatch(src.modulus().n(), target.modulus().n()));
        }
        let cached = {
            let cache = res.ext_cache().lock().unwrap();
            cache.iter().find(|(t, k, _)| *k == n && t == target).map(|(_, _, d)| d.clone())
        };
        let data = match cached {
            Some(d) => d,
            None => {
                let m = target.modulus();
                let dz = coboundary(res, target, n)?;
                let z = kernel(&dz);
                let b = if n == 0 { Mat::zeros(m, 0, dz.rows()) } else { coboundary(res, target, n - 1)? };
                let pres = subquotient(&z, &b)?;
                let d = Arc::new(PresData { pres, k: res.rank(n)? });
                res.ext_cache().lock().unwrap().push((target.clone(), n, d.clone()));
                d
            }
        };
        Ok(ExtPresentation { res: res.clone(), target: target.clone(), n, data })
    }

    pub fn degree(&self) -> usize {
        self.n
    }
    pub fn source(&self) -> &GModule {
        self.res.module()
    }
    pub fn target(&self) -> &GModule {
        &self.target
    }
    pub fn resolution(&self) -> &Resolution {
        &self.res
    }
    pub fn modulus(&self) -> Modulus {
        self.target.modulus()
    }
    pub fn presentation(&self) -> &FiniteModulePresentation {
        &self.data.pres
    }
    pub fn cyclic_orders(&self) -> Vec<u64> {
        self.data.pres.cyclic_orders()
    }
    pub fn order(&self) -> u64 {
        self.data.pres.order()
    }
    pub fn ngens(&self) -> usize {
        self.data.pres.ngens()
    }
    pub fn cochain_dim(&self) -> usize {
        self.data.k * self.target.rank()
    }

    /// Same resolution, target and degree.
    pub fn compatible(&self, other: &ExtPresentation) -> bool {
        self.n == other.n && self.res.same_as(&other.res) && self.target == other.target
    }

    pub fn element(&self, coords: &[u32]) -> Result<ExtElement> {
        if coords.len() != self.ngens() {
            return Err(Error::Dimension(format!("expected {} coordinates", self.ngens())));
        }
        let coords = self.data.pres.normalize(coords);
        let cocycle = self.data.pres.lift(&coords);
        Ok(ExtElement { parent: self.clone(), coords, cocycle })
    }

    pub fn from_cocycle(&self, cocycle: &[u32]) -> Result<ExtElement> {
        if cocycle.len() != self.cochain_dim() {
            return Err(Error::Dimension("cocycle length".into()));
        }
        let coords = self.data.pres.project(cocycle)?;
        Ok(ExtElement { parent: self.clone(), coords, cocycle: cocycle.to_vec() })
    }

    /// Degree-0 class of a G-map source -> target.
    pub fn from_morphism(&self, f: &GMorphism) -> Result<ExtElement> {
        if self.n != 0 {
            return Err(Error::Precondition("morphisms live in degree 0".into()));
        }
        if f.src() != self.source() || f.tgt() != &self.target {
            return Err(Error::Precondition("morphism does not match Hom pair".into()));
        }
        let vals = self.res.dgen(0)?.mul(f.mat());
        self.from_cocycle(&vals.flatten())
    }

    pub fn zero(&self) -> ExtElement {
        self.element(&vec![0; self.ngens()]).unwrap()
    }

    pub fn generators(&self) -> Vec<ExtElement> {
        (0..self.ngens())
            .map(|i| {
                let mut c = vec![0; self.ngens()];
                c[i] = 1;
                self.element(&c).unwrap()
            })
            .collect()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> ExtElement {
        let c: Vec<u32> = self.cyclic_orders().iter().map(|&o| rng.gen_range(0..o) as u32).collect();
        self.element(&c).unwrap()
    }

    /// Every element, for small groups.
    pub fn elements(&self) -> Vec<ExtElement> {
        let orders = self.cyclic_orders();
        let mut out = Vec::new();
        let mut c = vec![0u32; orders.len()];
        loop {
            out.push(self.element(&c).unwrap());
            let mut i = 0;
            loop {
                if i == c.len() {
                    return out;
                }
                c[i] += 1;
                if (c[i] as u64) < orders[i] {
                    break;
                }
                c[i] = 0;
                i += 1;
            }
        }
    }
}

/// Ext^n(M, N) for a fresh free-cover resolution of M, with the degree cap.
pub fn ext_group(mm: &GModule, nn: &GModule, n: usize) -> Result<ExtPresentation> {
    ext_group_capped(mm, nn, n, DEFAULT_MAX_DEGREE)
}

pub fn ext_group_capped(mm: &GModule, nn: &GModule, n: usize, cap: usize) -> Result<ExtPresentation> {
    if n > cap {
        return Err(Error::Cap(format!("degree {n} exceeds cap {cap}")));
    }
    ExtPresentation::new(&Resolution::free_cover(mm), nn, n)
}

/// A class in an Ext presentation with a representing cocycle.
#[derive(Clone)]
pub struct ExtElement {
    parent: ExtPresentation,
    coords: Vec<u32>,
    cocycle: Vec<u32>,
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExtElement(deg {}, {:?} in {:?})", self.parent.n, self.coords, self.parent.cyclic_orders())
    }
}

impl PartialEq for ExtElement {
    fn eq(&self, other: &Self) -> bool {
        self.parent.compatible(&other.parent) && self.coords == other.coords
    }
}

impl ExtElement {
    pub fn parent(&self) -> &ExtPresentation {
        &self.parent
    }
    pub fn degree(&self) -> usize {
        self.parent.n
    }
    pub fn coords(&self) -> &[u32] {
        &self.coords
    }
    pub fn cocycle(&self) -> &[u32] {
        &self.cocycle
    }
    pub fn source(&self) -> &GModule {
        self.parent.source()
    }
    pub fn target(&self) -> &GModule {
        self.parent.target()
    }
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    /// Generator values of the cocycle: a k_n x rank(N) matrix.
    pub fn cocycle_gens(&self) -> Mat {
        let d = self.parent.target.rank();
        Mat::from_data(self.parent.modulus(), self.parent.data.k, d, self.cocycle.clone())
    }

    /// The cocycle as a G-map P_n -> N.
    pub fn cocycle_map(&self) -> Result<GMorphism> {
        Ok(free_map(&self.parent.res.term(self.parent.n)?, &self.parent.target, &self.cocycle_gens()))
    }

    fn check_same(&self, other: &ExtElement) -> Result<()> {
        if !self.parent.compatible(&other.parent) {
            return Err(Error::Precondition("Ext elements live in different presentations".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &ExtElement) -> Result<ExtElement> {
        self.check_same(other)?;
        let m = self.parent.modulus();
        let c: Vec<u32> = self.cocycle.iter().zip(&other.cocycle).map(|(&a, &b)| m.add(a, b)).collect();
        self.parent.from_cocycle(&c)
    }

    pub fn sub(&self, other: &ExtElement) -> Result<ExtElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ExtElement {
        self.scale_signed(-1)
    }

    pub fn scale(&self, c: u32) -> ExtElement {
        let m = self.parent.modulus();
        let z: Vec<u32> = self.cocycle.iter().map(|&a| m.mul(a, c)).collect();
        self.parent.from_cocycle(&z).unwrap()
    }

    pub fn scale_signed(&self, c: i64) -> ExtElement {
        self.scale(self.parent.modulus().reduce(c))
    }

    /// Image in the reduced category mod l^c, over the reduced resolution.
    pub fn reduce(&self, c: u32) -> Result<ExtElement> {
        let res = self.parent.res.reduce(c)?;
        let tgt = self.parent.target.reduce(c)?;
        let p = ExtPresentation::new(&res, &tgt, self.parent.n)?;
        let t = p.modulus();
        let z: Vec<u32> = self.cocycle.iter().map(|&a| a % t.n()).collect();
        p.from_cocycle(&z)
    }
}
