use super::les::{ExactnessReport, LongSequence, MapMatrix, TermInfo};
use super::maps::{exponent, Bockstein, Cat};
use crate::error::{Error, Result};
use crate::ext::{coboundary, ExtElement, ExtPresentation, Resolution};
use crate::group::{free_map, GModule};
use crate::linalg::{injectivity_witness, surjectivity_witness, CyclicGroup, Mat};
use serde::Serialize;

/// Largest (|G|-1)^(nmax+1) * rank(X) * |G| for which the bar resolution is used.
const BAR_BUDGET: usize = 1200;

/// How the oracle sequence compares with the categorical one.
#[derive(Clone, Debug, Serialize)]
pub struct OracleComparison {
    /// "bar" or "free cover of the trivial module", tensored with X.
    pub resolution: String,
    pub orders_match: bool,
    /// The comparison map is an isomorphism on every term.
    pub comparison_iso: bool,
    pub sigma_agree: Vec<bool>,
    pub r_agree: Vec<bool>,
    /// Per degree: +1 or -1 when delta agrees up to that sign, None when neither holds.
    pub delta_sign: Vec<Option<i8>>,
    pub oracle_exactness: ExactnessReport,
}

impl OracleComparison {
    pub fn ok(&self) -> bool {
        self.orders_match
            && self.comparison_iso
            && self.sigma_agree.iter().all(|&b| b)
            && self.r_agree.iter().all(|&b| b)
            && self.delta_sign.iter().all(|s| s.is_some())
            && self.oracle_exactness.ok()
    }
}

struct Oracle<'a> {
    bs: &'a Bockstein,
    tx: Resolution,
    y: GModule,
}

impl Oracle<'_> {
    fn res(&self, c: Cat) -> Result<Resolution> {
        self.tx.reduce(exponent(&self.bs.setup, c))
    }

    fn pres(&self, n: usize, c: Cat) -> Result<ExtPresentation> {
        ExtPresentation::new(&self.res(c)?, &self.bs.eta(&self.y, c)?, n)
    }

    fn sigma(&self, u: &ExtElement) -> Result<ExtElement> {
        let st = self.bs.setup.mod_st();
        let v = u.cocycle_gens().shift_up(st, self.bs.setup.a);
        self.pres(u.degree(), Cat::ST)?.from_cocycle(&v.flatten())
    }

    fn r(&self, u: &ExtElement) -> Result<ExtElement> {
        let v = u.cocycle_gens().reduce_to(self.bs.setup.mod_s());
        self.pres(u.degree(), Cat::S)?.from_cocycle(&v.flatten())
    }

    /// Snake map: lift to Z/st, apply the coboundary, divide by s.
    fn delta(&self, u: &ExtElement) -> Result<ExtElement> {
        let setup = &self.bs.setup;
        let n = u.degree();
        let lifted = Mat::from_data(setup.mod_st(), 1, u.cocycle().len(), u.cocycle().to_vec()).lift_to(setup.mod_st());
        let d = coboundary(&self.res(Cat::ST)?, &self.bs.eta(&self.y, Cat::ST)?, n)?;
        let v = lifted
            .mul(&d)
            .divide_down(setup.mod_t(), setup.a)
            .ok_or_else(|| Error::NoSolution("coboundary of a lift is not divisible by s".into()))?;
        self.pres(n + 1, Cat::T)?.from_cocycle(&v.flatten())
    }
}

fn coords_matrix<F>(src: &ExtPresentation, f: F) -> Result<Vec<Vec<u32>>>
where
    F: Fn(&ExtElement) -> Result<ExtElement>,
{
    src.generators().iter().map(|z| Ok(f(z)?.coords().to_vec())).collect()
}

/// The sequence of the coefficient sequence 0 -> Y_t -s-> Y_st -> Y_s -> 0 on cochains
/// of a second resolution of X, compared with the categorical sequence `les`.
pub fn snake_oracle(bs: &Bockstein, x: &GModule, y: &GModule, les: &LongSequence) -> Result<(LongSequence, OracleComparison)> {
    let nmax = les.nmax;
    let g = x.group().order();
    let amb = bs.setup.ambient();
    let bar_cost = (g - 1).pow(nmax as u32 + 1) * x.rank().max(1) * g;
    let (t, label) = if bar_cost <= BAR_BUDGET {
        (Resolution::bar(x.group().clone(), amb), "bar")
    } else {
        (Resolution::free_cover(&GModule::trivial(x.group().clone(), amb, 1)), "free cover of the trivial module")
    };
    let tx = Resolution::tensor(&t, x)?;
    let oracle = Oracle { bs, tx: tx.clone(), y: y.clone() };

    let mut terms = Vec::new();
    let mut pres = Vec::new();
    for info in &les.terms {
        let p = oracle.pres(info.degree, info.cat)?;
        terms.push(TermInfo { label: info.label.clone(), cat: info.cat, degree: info.degree, orders: p.cyclic_orders() });
        pres.push(p);
    }
    let mut maps = Vec::new();
    for k in 0..pres.len() - 1 {
        let n = terms[k].degree;
        let (name, rows) = match terms[k].cat {
            Cat::T => (format!("sigma_{n}"), coords_matrix(&pres[k], |u| oracle.sigma(u))?),
            Cat::ST => (format!("r_{n}"), coords_matrix(&pres[k], |u| oracle.r(u))?),
            Cat::S => (format!("delta_{n}"), coords_matrix(&pres[k], |u| oracle.delta(u))?),
        };
        maps.push(MapMatrix { name, from: k, to: k + 1, rows });
    }
    let oseq = LongSequence { nmax, terms, maps, pres, ambient: Some(amb) };
    let oracle_exactness = oseq.check();

    // chain map from the categorical resolution into T (x) X over the identity of X
    let res_x = bs.ambient_res(x)?;
    let phi = res_x.lift_chain(0, &res_x.dgen(0)?, &tx, nmax + 1)?;
    let pull = |u: &ExtElement, c: Cat| -> Result<ExtElement> {
        let n = u.degree();
        let e = exponent(&bs.setup, c);
        let m = bs.setup.ambient().with_exp(e)?;
        let full = free_map(&oracle.res(c)?.term(n)?, u.target(), &u.cocycle_gens());
        let vals = phi[n].reduce_to(m).mul(full.mat());
        bs.ext(x, y, n, c)?.from_cocycle(&vals.flatten())
    };

    let orders_match = les.terms.iter().zip(&oseq.terms).all(|(a, b)| a.orders == b.orders);
    let mut comparison_iso = orders_match;
    if orders_match {
        for (i, p) in oseq.pres.iter().enumerate() {
            let rows = coords_matrix(p, |u| pull(u, oseq.terms[i].cat))?;
            let grp = CyclicGroup::new(p.presentation().exps().to_vec());
            let f = Mat::from_vecs(amb, grp.rank(), &rows);
            if injectivity_witness(&grp, &f, &grp).is_some() || surjectivity_witness(&f, &grp).is_some() {
                comparison_iso = false;
            }
        }
    }

    let mut sigma_agree = Vec::new();
    let mut r_agree = Vec::new();
    let mut delta_sign = Vec::new();
    for (k, p) in oseq.pres.iter().enumerate().take(oseq.pres.len() - 1) {
        let cat = oseq.terms[k].cat;
        let mut same = true;
        let mut opposite = true;
        for u in p.generators() {
            let cat_side = pull(&u, cat)?;
            let (lhs, rhs) = match cat {
                Cat::T => (bs.sigma_n(x, y, &cat_side, None)?, pull(&oracle.sigma(&u)?, Cat::ST)?),
                Cat::ST => (bs.r_n(x, &cat_side, None)?, pull(&oracle.r(&u)?, Cat::S)?),
                Cat::S => (bs.delta_n(x, y, &cat_side, None)?, pull(&oracle.delta(&u)?, Cat::T)?),
            };
            same &= lhs == rhs;
            opposite &= lhs == rhs.neg();
        }
        match cat {
            Cat::T => sigma_agree.push(same),
            Cat::ST => r_agree.push(same),
            Cat::S => delta_sign.push(if same {
                Some(1)
            } else if opposite {
                Some(-1)
            } else {
                None
            }),
        }
    }

    let cmp = OracleComparison {
        resolution: label.into(),
        orders_match,
        comparison_iso,
        sigma_agree,
        r_agree,
        delta_sign,
        oracle_exactness,
    };
    Ok((oseq, cmp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bockstein::assemble_les;
    use crate::group::{BocksteinSetup, FiniteGroup};
    use crate::linalg::{exact_at, Exactness};
    use std::sync::Arc;

    fn segment_exact(seq: &LongSequence, k: usize) -> bool {
        exact_at(&seq.map_mat(k - 1), &seq.group_of(k), &seq.map_mat(k), &seq.group_of(k + 1)) == Exactness::Exact
    }

    #[test]
    fn c2_oracle_agrees() {
        let st = BocksteinSetup::new(2, 3, 1, 1).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(2));
        let bs = Bockstein::new(st);
        let triv = GModule::trivial(g.clone(), st.ambient(), 1);
        let chi = GModule::character(g.clone(), st.ambient(), &[7]).unwrap();
        for (x, y) in [(&triv, &triv), (&triv, &chi), (&chi, &triv)] {
            let (les, _) = assemble_les(&bs, x, y, 3).unwrap();
            let (oseq, cmp) = snake_oracle(&bs, x, y, &les).unwrap();
            assert!(cmp.ok(), "{cmp:?}");
            assert_eq!(cmp.resolution, "bar");
            assert_eq!(oseq.maps[0].rows, les.maps[0].rows);
            assert!(segment_exact(&oseq, 1));
        }
    }
}
