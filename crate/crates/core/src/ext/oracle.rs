use super::group::ExtPresentation;
use super::resolution::Resolution;
use crate::error::{Error, Result};
use crate::group::{hom_module, GModule};
use crate::linalg::{kernel, subquotient, Mat};

/// Orders of the cyclic factors of Ext^n(M, N) for a cyclic group, from the
/// periodic resolution: H^0 = ker(g-1), odd = ker N / im(g-1), even = ker(g-1) / im N.
pub fn periodic_orders(mm: &GModule, nn: &GModule, n: usize) -> Result<Vec<u64>> {
    let g = mm.group();
    let gen = g.cyclic_generator().ok_or_else(|| Error::Group(format!("{} is not cyclic", g.name())))?;
    let a = hom_module(mm, nn);
    let m = a.modulus();
    let d = a.rank();
    let t = a.act(gen).sub(&Mat::identity(m, d));
    let norm = (0..g.order()).fold(Mat::zeros(m, d, d), |acc, h| acc.add(a.act(h)));
    let empty = Mat::zeros(m, 0, d);
    let p = if n == 0 {
        subquotient(&kernel(&t), &empty)?
    } else if n % 2 == 1 {
        subquotient(&kernel(&norm), &t)?
    } else {
        subquotient(&kernel(&t), &norm)?
    };
    Ok(p.cyclic_orders())
}

/// Orders of H^n(G, Hom(M, N)) from the normalized bar resolution.
pub fn bar_orders(mm: &GModule, nn: &GModule, n: usize) -> Result<Vec<u64>> {
    let bar = Resolution::bar(mm.group().clone(), mm.modulus());
    Ok(ExtPresentation::new(&bar, &hom_module(mm, nn), n)?.cyclic_orders())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ext::group::ext_group;
    use crate::group::FiniteGroup;
    use crate::linalg::Modulus;
    use std::sync::Arc;

    #[test]
    fn three_computations_agree_on_c4() {
        let g = Arc::new(FiniteGroup::cyclic(4));
        let m = Modulus::from_order(4).unwrap();
        let k = GModule::trivial(g.clone(), m, 1);
        let chi = GModule::character(g.clone(), m, &[3]).unwrap();
        let reg = GModule::regular(g, m);
        for (x, y) in [(&k, &k), (&k, &chi), (&chi, &reg), (&reg, &k)] {
            for n in 0..4 {
                let p = periodic_orders(x, y, n).unwrap();
                assert_eq!(bar_orders(x, y, n).unwrap(), p, "bar {n}");
                assert_eq!(ext_group(x, y, n).unwrap().cyclic_orders(), p, "cover {n}");
            }
        }
    }
}
