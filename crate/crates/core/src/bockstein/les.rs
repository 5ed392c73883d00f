use super::maps::{Bockstein, Cat};
use crate::error::{Error, Result};
use crate::ext::{ExtElement, ExtPresentation};
use crate::group::GModule;
use crate::linalg::{
    composite_zero, exact_at, injectivity_witness, respects_orders, CyclicGroup, Exactness, Mat, Modulus,
};
use serde::Serialize;

/// One term Ext^n in a reduced category.
#[derive(Clone, Debug, Serialize)]
pub struct TermInfo {
    pub label: String,
    pub cat: Cat,
    pub degree: usize,
    pub orders: Vec<u64>,
}

/// A map between consecutive terms: row i holds the image of generator i,
/// with coordinates read in Z/l^R.
#[derive(Clone, Debug, Serialize)]
pub struct MapMatrix {
    pub name: String,
    pub from: usize,
    pub to: usize,
    pub rows: Vec<Vec<u32>>,
}

impl MapMatrix {
    pub fn mat(&self, m: Modulus, cols: usize) -> Mat {
        Mat::from_vecs(m, cols, &self.rows)
    }
}

/// Ext_t^0 -> Ext_st^0 -> Ext_s^0 -> Ext_t^1 -> ... -> Ext_s^nmax -> Ext_t^{nmax+1}.
#[derive(Clone, Debug, Serialize)]
pub struct LongSequence {
    pub nmax: usize,
    pub terms: Vec<TermInfo>,
    pub maps: Vec<MapMatrix>,
    #[serde(skip)]
    pub(crate) pres: Vec<ExtPresentation>,
    #[serde(skip)]
    pub(crate) ambient: Option<Modulus>,
}

impl LongSequence {
    pub fn presentation(&self, i: usize) -> &ExtPresentation {
        &self.pres[i]
    }

    fn modulus(&self) -> Modulus {
        self.ambient.unwrap()
    }

    pub fn group_of(&self, i: usize) -> CyclicGroup {
        CyclicGroup::new(self.pres[i].presentation().exps().to_vec())
    }

    pub fn map_mat(&self, k: usize) -> Mat {
        self.maps[k].mat(self.modulus(), self.terms[k + 1].orders.len())
    }

    /// Exactness at every interior term, injectivity at the first, composites and orders.
    pub fn check(&self) -> ExactnessReport {
        let mut rep = ExactnessReport::default();
        for k in 0..self.maps.len() {
            let f = self.map_mat(k);
            let (a, b) = (self.group_of(k), self.group_of(k + 1));
            if !respects_orders(&a, &b, &f) {
                rep.order_failures.push(self.maps[k].name.clone());
            }
            if k + 1 < self.maps.len() && !composite_zero(&f, &self.map_mat(k + 1), &self.group_of(k + 2)) {
                rep.composite_failures.push(format!("{} then {}", self.maps[k].name, self.maps[k + 1].name));
            }
        }
        if !self.maps.is_empty() {
            let w = injectivity_witness(&self.group_of(0), &self.map_mat(0), &self.group_of(1));
            rep.checks.push(TermCheck {
                index: 0,
                label: self.terms[0].label.clone(),
                kind: "injective".into(),
                ok: w.is_none(),
                witness: w,
            });
        }
        for k in 1..self.maps.len() {
            let e = exact_at(&self.map_mat(k - 1), &self.group_of(k), &self.map_mat(k), &self.group_of(k + 1));
            let (ok, witness) = match e {
                Exactness::Exact => (true, None),
                Exactness::KernelLarger(v) | Exactness::ImageLarger(v) => (false, Some(v)),
            };
            rep.checks.push(TermCheck { index: k, label: self.terms[k].label.clone(), kind: "exact".into(), ok, witness });
        }
        rep.interior = self.maps.len().saturating_sub(1);
        rep
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TermCheck {
    pub index: usize,
    pub label: String,
    pub kind: String,
    pub ok: bool,
    /// Coordinates of an offending element.
    pub witness: Option<Vec<u32>>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ExactnessReport {
    pub interior: usize,
    pub checks: Vec<TermCheck>,
    pub order_failures: Vec<String>,
    pub composite_failures: Vec<String>,
}

impl ExactnessReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok) && self.order_failures.is_empty() && self.composite_failures.is_empty()
    }
    pub fn exact_terms(&self) -> usize {
        self.checks.iter().filter(|c| c.kind == "exact" && c.ok).count()
    }
}

fn coords_of(target: &ExtPresentation, z: &ExtElement) -> Result<Vec<u32>> {
    if !target.compatible(z.parent()) {
        return Err(Error::Precondition("image does not live in the expected presentation".into()));
    }
    Ok(z.coords().to_vec())
}

fn map_of<F>(name: String, from: usize, src: &ExtPresentation, tgt: &ExtPresentation, f: F) -> Result<MapMatrix>
where
    F: Fn(&ExtElement) -> Result<ExtElement>,
{
    let rows = src.generators().iter().map(|z| coords_of(tgt, &f(z)?)).collect::<Result<Vec<_>>>()?;
    Ok(MapMatrix { name, from, to: from + 1, rows })
}

/// The categorical long sequence for ambient X, Y up to degree nmax, with its exactness report.
pub fn assemble_les(bs: &Bockstein, x: &GModule, y: &GModule, nmax: usize) -> Result<(LongSequence, ExactnessReport)> {
    let mut terms = Vec::new();
    let mut pres = Vec::new();
    for n in 0..=nmax + 1 {
        let cats: &[Cat] = if n <= nmax { &[Cat::T, Cat::ST, Cat::S] } else { &[Cat::T] };
        for &c in cats {
            let p = bs.ext(x, y, n, c)?;
            terms.push(TermInfo { label: format!("Ext^{n}_{}", c.label()), cat: c, degree: n, orders: p.cyclic_orders() });
            pres.push(p);
        }
    }
    let mut maps = Vec::new();
    for k in 0..pres.len() - 1 {
        let n = terms[k].degree;
        let m = match terms[k].cat {
            Cat::T => map_of(format!("sigma_{n}"), k, &pres[k], &pres[k + 1], |z| bs.sigma_n(x, y, z, None))?,
            Cat::ST => map_of(format!("r_{n}"), k, &pres[k], &pres[k + 1], |z| bs.r_n(x, z, None))?,
            Cat::S => map_of(format!("delta_{n}"), k, &pres[k], &pres[k + 1], |z| bs.delta_n(x, y, z, None))?,
        };
        maps.push(m);
    }
    let les = LongSequence { nmax, terms, maps, pres, ambient: Some(bs.setup.ambient()) };
    let rep = les.check();
    Ok((les, rep))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{BocksteinSetup, FiniteGroup};
    use std::sync::Arc;

    #[test]
    fn c2_trivial_exact_at_eleven_terms() {
        let st = BocksteinSetup::new(2, 2, 1, 1).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let triv = GModule::trivial(g, st.ambient(), 1);
        let bs = Bockstein::new(st);
        let (les, rep) = assemble_les(&bs, &triv, &triv, 3).unwrap();
        assert_eq!(les.terms.len(), 13);
        assert_eq!(rep.interior, 11);
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.exact_terms(), 11);
        assert_eq!(les.maps[0].rows, vec![vec![2]]);
    }

    #[test]
    fn trivial_group_degenerates() {
        let st = BocksteinSetup::new(3, 3, 1, 2).unwrap();
        let g = Arc::new(FiniteGroup::trivial());
        let x = GModule::trivial(g.clone(), st.ambient(), 2);
        let y = GModule::trivial(g, st.ambient(), 1);
        let bs = Bockstein::new(st);
        let (les, rep) = assemble_les(&bs, &x, &y, 2).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(les.terms[0].orders, vec![9, 9]);
        assert_eq!(les.terms[1].orders, vec![27, 27]);
        assert_eq!(les.terms[2].orders, vec![3, 3]);
        assert!(les.terms[3..].iter().all(|t| t.orders.is_empty()));
    }

    #[test]
    fn zero_module() {
        let st = BocksteinSetup::new(2, 3, 1, 1).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let x = GModule::zero(g.clone(), st.ambient());
        let y = GModule::trivial(g, st.ambient(), 1);
        let bs = Bockstein::new(st);
        let (les, rep) = assemble_les(&bs, &x, &y, 2).unwrap();
        assert!(rep.ok());
        assert!(les.terms.iter().all(|t| t.orders.is_empty()));
    }
}
