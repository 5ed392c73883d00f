//! Finite-dimensional F_p[G]-modules with a finite decreasing filtration
//! satisfying (g - 1) F^n in F^{n+1}, stored in an adapted basis: basis
//! vector i spans part of F^{deg_i} and F^n is spanned by the vectors of degree >= n.

use crate::error::{Error, Result};
use crate::group::{hom_g, FiniteGroup, GModule};
use crate::linalg::{howell_form, kernel, rank_mod_l, span_eq, subquotient, FiniteModulePresentation, Mat, Modulus, Solver};
use rand::Rng;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Largest cochain space |G| dim X dim Y handled by ext1_filtered.
pub const EXT1_CAP: usize = 8192;

/// A sum of shifted copies of F_p[G] with the I-adic filtration.
#[derive(Debug)]
struct FreeData {
    gens: Vec<i32>,
    // adapted basis of the regular module in group-element coordinates
    basis: Mat,
}

#[derive(Clone, Debug)]
pub struct FilteredObject {
    module: GModule,
    degrees: Vec<i32>,
    free: Option<Arc<FreeData>>,
}

impl PartialEq for FilteredObject {
    fn eq(&self, other: &Self) -> bool {
        self.degrees == other.degrees && self.module == other.module
    }
}
impl Eq for FilteredObject {}

fn check_coefficients(module: &GModule) -> Result<()> {
    let m = module.modulus();
    if m.r() != 1 {
        return Err(Error::Filtration(format!("coefficients {m} are not a prime field")));
    }
    let g = module.group();
    match g.prime_power() {
        None if g.order() == 1 => Ok(()),
        Some(p) if p == m.l() => Ok(()),
        _ => Err(Error::Filtration(format!("{} is not a {}-group", g.name(), m.l()))),
    }
}

/// Entries (i, j) of a map from degrees `a` to degrees `b` allowed when it raises filtration by >= k.
fn allowed(a: &[i32], b: &[i32], i: usize, j: usize, k: i32) -> bool {
    b[j] >= a[i] + k
}

fn masked(mat: &Mat, a: &[i32], b: &[i32], keep: impl Fn(i32, i32) -> bool) -> Mat {
    Mat::from_fn(mat.modulus(), mat.rows(), mat.cols(), |i, j| if keep(a[i], b[j]) { mat.get(i, j) as i64 } else { 0 })
}

impl FilteredObject {
    /// Checked constructor from a module already written in an adapted basis.
    pub fn new(module: GModule, degrees: Vec<i32>) -> Result<Self> {
        check_coefficients(&module)?;
        if degrees.len() != module.rank() {
            return Err(Error::Dimension(format!("{} degrees for rank {}", degrees.len(), module.rank())));
        }
        let m = module.modulus();
        let id = Mat::identity(m, module.rank());
        for g in 0..module.group().order() {
            let n = module.act(g).sub(&id);
            for i in 0..n.rows() {
                for j in 0..n.cols() {
                    if n.get(i, j) != 0 && !allowed(&degrees, &degrees, i, j, 1) {
                        return Err(Error::Filtration(format!(
                            "(g-1) does not raise the filtration at ({i},{j}) for g = {g}"
                        )));
                    }
                }
            }
        }
        Ok(FilteredObject { module, degrees, free: None })
    }

    /// The trivial one-dimensional module concentrated in degree d.
    pub fn unit(group: Arc<FiniteGroup>, p: Modulus, d: i32) -> Self {
        FilteredObject { module: GModule::trivial(group, p, 1), degrees: vec![d], free: None }
    }

    pub fn zero(group: Arc<FiniteGroup>, p: Modulus) -> Self {
        FilteredObject { module: GModule::trivial(group, p, 0), degrees: vec![], free: None }
    }

    /// From a chain of row spans: chain[k] spans F^{top+k}, chain[0] is everything
    /// and F^{top + chain.len()} = 0. The module is rewritten in an adapted basis.
    pub fn from_chain(module: &GModule, top: i32, chain: &[Mat]) -> Result<Self> {
        Ok(Self::from_chain_with_basis(module, top, chain)?.0)
    }

    fn from_chain_with_basis(module: &GModule, top: i32, chain: &[Mat]) -> Result<(Self, Mat)> {
        check_coefficients(module)?;
        let m = module.modulus();
        let d = module.rank();
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(d);
        let mut degs: Vec<i32> = Vec::with_capacity(d);
        for k in (0..chain.len()).rev() {
            for r in howell_form(&chain[k]).row_vecs() {
                let mut trial = rows.clone();
                trial.push(r.clone());
                if rank_mod_l(&Mat::from_vecs(m, d, &trial)) == trial.len() {
                    rows = trial;
                    degs.push(top + k as i32);
                }
            }
        }
        if rows.len() != d {
            return Err(Error::Filtration("the top filtration step is not the whole module".into()));
        }
        for (k, step) in chain.iter().enumerate() {
            let idx: Vec<usize> = (0..d).filter(|&i| degs[i] >= top + k as i32).collect();
            let sub = Mat::from_vecs(m, d, &idx.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>());
            if !span_eq(&sub, step) {
                return Err(Error::Filtration(format!("filtration step {} is not decreasing", top + k as i32)));
            }
        }
        let basis = Mat::from_vecs(m, d, &rows);
        let obj = FilteredObject::new(module.conjugate(&basis)?, degs)?;
        Ok((obj, basis))
    }

    /// The I-adic filtration F^n = M I^n, top degree 0.
    pub fn i_adic(module: &GModule) -> Result<Self> {
        Ok(Self::i_adic_with_basis(module)?.0)
    }

    fn i_adic_with_basis(module: &GModule) -> Result<(Self, Mat)> {
        check_coefficients(module)?;
        let m = module.modulus();
        let d = module.rank();
        let id = Mat::identity(m, d);
        let mut chain = vec![id.clone()];
        loop {
            let last = chain.last().unwrap();
            let mut next = Mat::zeros(m, 0, d);
            for g in 0..module.group().order() {
                next = next.vstack(&last.mul(&module.act(g).sub(&id)));
            }
            let next = howell_form(&next);
            if next.rows() == 0 {
                break;
            }
            if chain.len() > d {
                return Err(Error::Filtration("augmentation ideal does not act nilpotently".into()));
            }
            chain.push(next);
        }
        Self::from_chain_with_basis(module, 0, &chain)
    }

    /// F_p[G] with the I-adic filtration and its adapted basis in group-element coordinates.
    fn regular(group: &Arc<FiniteGroup>, p: Modulus) -> Result<(Self, Mat)> {
        Self::i_adic_with_basis(&GModule::regular(group.clone(), p))
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }
    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }
    pub fn field(&self) -> Modulus {
        self.module.modulus()
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.module.group()
    }
    /// Generator degrees when this is a filtered free module built by `cover`.
    pub fn free_generators(&self) -> Option<&[i32]> {
        self.free.as_ref().map(|f| f.gens.as_slice())
    }

    /// X(k): the filtration F(k)^n = F^{n-k}, i.e. every degree raised by k.
    pub fn twist(&self, k: i32) -> Self {
        let free = self.free.as_ref().map(|f| Arc::new(FreeData { gens: f.gens.iter().map(|d| d + k).collect(), basis: f.basis.clone() }));
        FilteredObject { module: self.module.clone(), degrees: self.degrees.iter().map(|d| d + k).collect(), free }
    }

    /// Indices of the basis vectors spanning F^n.
    pub fn step(&self, n: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] >= n).collect()
    }

    pub fn gr(&self) -> GradedObject {
        GradedObject { field: self.field(), degrees: self.degrees.clone() }
    }

    /// The operator induced by g - 1 on gr, raising degree by one.
    pub fn gr_operator(&self, g: usize) -> Mat {
        let n = self.module.act(g).sub(&Mat::identity(self.field(), self.dim()));
        masked(&n, &self.degrees, &self.degrees, |a, b| b == a + 1)
    }

    pub fn direct_sum(parts: &[&FilteredObject]) -> Result<Self> {
        let first = parts.first().ok_or_else(|| Error::Precondition("empty direct sum".into()))?;
        let mut module = first.module.clone();
        let mut degrees = first.degrees.clone();
        for x in &parts[1..] {
            if !x.module.same_group(&module) || x.field() != module.modulus() {
                return Err(Error::Precondition("direct sum over different groups or fields".into()));
            }
            module = module.direct_sum(&x.module);
            degrees.extend_from_slice(&x.degrees);
        }
        let free = if parts.iter().all(|x| x.free.is_some()) {
            let basis = first.free.as_ref().unwrap().basis.clone();
            let gens = parts.iter().flat_map(|x| x.free.as_ref().unwrap().gens.iter().copied()).collect();
            Some(Arc::new(FreeData { gens, basis }))
        } else {
            None
        };
        Ok(FilteredObject { module, degrees, free })
    }
}

/// A G-map preserving the filtrations, as a dim src x dim tgt matrix on row vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredMorphism {
    src: FilteredObject,
    tgt: FilteredObject,
    mat: Mat,
}

impl FilteredMorphism {
    pub fn new(src: &FilteredObject, tgt: &FilteredObject, mat: Mat) -> Result<Self> {
        if mat.rows() != src.dim() || mat.cols() != tgt.dim() || mat.modulus() != src.field() {
            return Err(Error::Dimension(format!("{}x{} matrix for {} -> {}", mat.rows(), mat.cols(), src.dim(), tgt.dim())));
        }
        if !src.module.same_group(&tgt.module) || src.field() != tgt.field() {
            return Err(Error::Precondition("morphism between objects over different groups or fields".into()));
        }
        for &g in src.group().generators() {
            if mat.mul(tgt.module.act(g)) != src.module.act(g).mul(&mat) {
                return Err(Error::NotEquivariant(format!("fails at generator {g}")));
            }
        }
        for i in 0..mat.rows() {
            for j in 0..mat.cols() {
                if mat.get(i, j) != 0 && !allowed(&src.degrees, &tgt.degrees, i, j, 0) {
                    return Err(Error::Filtration(format!("entry ({i},{j}) lowers the filtration")));
                }
            }
        }
        Ok(FilteredMorphism { src: src.clone(), tgt: tgt.clone(), mat })
    }

    pub(crate) fn unchecked(src: &FilteredObject, tgt: &FilteredObject, mat: Mat) -> Self {
        debug_assert_eq!((mat.rows(), mat.cols()), (src.dim(), tgt.dim()));
        FilteredMorphism { src: src.clone(), tgt: tgt.clone(), mat }
    }

    pub fn identity(x: &FilteredObject) -> Self {
        Self::unchecked(x, x, Mat::identity(x.field(), x.dim()))
    }

    pub fn zero(x: &FilteredObject, y: &FilteredObject) -> Self {
        Self::unchecked(x, y, Mat::zeros(x.field(), x.dim(), y.dim()))
    }

    /// sigma_X: X -> X(1), the identity on the underlying module.
    pub fn sigma(x: &FilteredObject) -> Self {
        Self::unchecked(x, &x.twist(1), Mat::identity(x.field(), x.dim()))
    }

    pub fn src(&self) -> &FilteredObject {
        &self.src
    }
    pub fn tgt(&self) -> &FilteredObject {
        &self.tgt
    }
    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    /// self followed by next.
    pub fn then(&self, next: &FilteredMorphism) -> Result<Self> {
        if self.tgt != next.src {
            return Err(Error::Precondition("composing non-composable filtered maps".into()));
        }
        Ok(Self::unchecked(&self.src, &next.tgt, self.mat.mul(&next.mat)))
    }

    pub fn add(&self, other: &FilteredMorphism) -> Self {
        Self::unchecked(&self.src, &self.tgt, self.mat.add(&other.mat))
    }
    pub fn neg(&self) -> Self {
        Self::unchecked(&self.src, &self.tgt, self.mat.neg())
    }
    pub fn scale(&self, c: u32) -> Self {
        Self::unchecked(&self.src, &self.tgt, self.mat.scale(c))
    }
    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn twist(&self, k: i32) -> Self {
        Self::unchecked(&self.src.twist(k), &self.tgt.twist(k), self.mat.clone())
    }

    pub fn gr(&self) -> GradedMorphism {
        GradedMorphism {
            src: self.src.gr(),
            tgt: self.tgt.gr(),
            mat: masked(&self.mat, &self.src.degrees, &self.tgt.degrees, |a, b| a == b),
        }
    }

    /// g: X -> Y(-1) with self = g followed by sigma_{Y(-1)}; exists exactly when gr(self) = 0.
    pub fn divide_by_sigma(&self) -> Result<Self> {
        if !self.gr().is_zero() {
            return Err(Error::Precondition("gr of the map is nonzero, so it is not divisible by sigma".into()));
        }
        FilteredMorphism::new(&self.src, &self.tgt.twist(-1), self.mat.clone())
    }

    /// Admissible (gr-split) monomorphism: gr is injective in every degree.
    pub fn is_adm_mono(&self) -> bool {
        rank_mod_l(&self.gr().mat) == self.src.dim()
    }

    /// Admissible epimorphism: gr is surjective in every degree.
    pub fn is_adm_epi(&self) -> bool {
        rank_mod_l(&self.gr().mat) == self.tgt.dim()
    }
}

/// A finitely supported graded F_p-vector space (trivial G-action), one degree per basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedObject {
    pub field: Modulus,
    pub degrees: Vec<i32>,
}

impl GradedObject {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }
    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for &d in &self.degrees {
            *out.entry(d).or_insert(0) += 1;
        }
        out
    }
}

/// A degree-preserving linear map of graded spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMorphism {
    pub src: GradedObject,
    pub tgt: GradedObject,
    pub mat: Mat,
}

impl GradedMorphism {
    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }
    pub fn rank(&self) -> usize {
        rank_mod_l(&self.mat)
    }
}

/// Basis of Hom_F(X, Y): G-maps preserving the filtrations.
pub fn hom_filtered(x: &FilteredObject, y: &FilteredObject) -> Result<Vec<FilteredMorphism>> {
    let m = x.field();
    if let Some(free) = &x.free {
        let mut out = Vec::new();
        for (i, &d) in free.gens.iter().enumerate() {
            for j in y.step(d) {
                let mut imgs = Mat::zeros(m, free.gens.len(), y.dim());
                imgs.set(i, j, 1);
                out.push(free_map(x, y, &imgs)?);
            }
        }
        return Ok(out);
    }
    let basis = hom_g(&x.module, &y.module)?;
    let dy = y.dim();
    let bad: Vec<usize> =
        (0..x.dim() * dy).filter(|&idx| !allowed(&x.degrees, &y.degrees, idx / dy, idx % dy, 0)).collect();
    let rows = if bad.is_empty() || basis.rows() == 0 {
        basis
    } else {
        howell_form(&kernel(&basis.select_cols(&bad)).mul(&basis))
    };
    Ok(rows
        .row_vecs()
        .into_iter()
        .map(|r| FilteredMorphism::unchecked(x, y, Mat::from_data(m, x.dim(), dy, r)))
        .collect())
}

/// The canonical admissible epi onto X from a filtered free module: one copy of
/// F_p[G](d) per adapted basis vector of degree d, its generator sent to that vector.
pub fn cover(x: &FilteredObject) -> Result<FilteredMorphism> {
    let (reg, basis) = FilteredObject::regular(x.group(), x.field())?;
    let copies: Vec<FilteredObject> = x.degrees.iter().map(|&d| reg.twist(d)).collect();
    let p = if copies.is_empty() {
        FilteredObject { free: None, ..FilteredObject::zero(x.group().clone(), x.field()) }
    } else {
        FilteredObject::direct_sum(&copies.iter().collect::<Vec<_>>())?
    };
    let p = FilteredObject { free: Some(Arc::new(FreeData { gens: x.degrees.clone(), basis })), ..p };
    free_map(&p, x, &Mat::identity(x.field(), x.dim()))
}

/// The map out of a filtered free module sending generator i to row i of `images`.
pub fn free_map(p: &FilteredObject, y: &FilteredObject, images: &Mat) -> Result<FilteredMorphism> {
    let free = p.free.as_ref().ok_or_else(|| Error::Precondition("free_map needs a filtered free source".into()))?;
    let m = p.field();
    let n = p.group().order();
    let k = free.gens.len();
    if images.rows() != k || images.cols() != y.dim() {
        return Err(Error::Dimension("free_map image matrix has the wrong shape".into()));
    }
    let mut mat = Mat::zeros(m, k * n, y.dim());
    for i in 0..k {
        let orbit = Mat::from_vecs(m, y.dim(), &(0..n).map(|h| y.module.act(h).apply(images.row(i))).collect::<Vec<_>>());
        mat.paste(i * n, 0, &free.basis.mul(&orbit));
    }
    FilteredMorphism::new(p, y, mat)
}

/// Kernel of an admissible epi with the induced filtration, as its inclusion.
pub fn kernel_filtered(e: &FilteredMorphism) -> Result<FilteredMorphism> {
    if !e.is_adm_epi() {
        return Err(Error::Precondition("kernel_filtered needs an admissible epi".into()));
    }
    let y = &e.src;
    let m = y.field();
    let mut levels: Vec<i32> = y.degrees.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut degs = Vec::new();
    for &n in levels.iter().rev() {
        let idx = y.step(n);
        let ker = kernel(&e.mat.select_rows(&idx));
        for r in ker.row_vecs() {
            let mut v = vec![0u32; y.dim()];
            for (c, &i) in idx.iter().enumerate() {
                v[i] = r[c];
            }
            let mut trial = rows.clone();
            trial.push(v);
            if rank_mod_l(&Mat::from_vecs(m, y.dim(), &trial)) == trial.len() {
                rows = trial;
                degs.push(n);
            }
        }
    }
    let basis = Mat::from_vecs(m, y.dim(), &rows);
    let solver = Solver::new(&basis);
    let action = (0..y.group().order())
        .map(|g| solver.solve_mat(&basis.mul(y.module.act(g))).ok_or_else(|| Error::Module("kernel is not G-stable".into())))
        .collect::<Result<Vec<_>>>()?;
    let kmod = GModule::new(y.group().clone(), m, rows.len(), action)?;
    let k = FilteredObject::new(kmod, degs)?;
    FilteredMorphism::new(&k, y, basis)
}

/// Cokernel of an admissible mono with the quotient filtration, as its projection.
pub fn cokernel_filtered(i: &FilteredMorphism) -> Result<FilteredMorphism> {
    if !i.is_adm_mono() {
        return Err(Error::Precondition("cokernel_filtered needs an admissible mono".into()));
    }
    let y = &i.tgt;
    let m = y.field();
    let d = y.dim();
    let unit = |j: usize| {
        let mut v = vec![0u32; d];
        v[j] = 1;
        v
    };
    let mut levels: Vec<i32> = y.degrees.clone();
    levels.sort_unstable();
    levels.dedup();
    let mut chosen: Vec<usize> = Vec::new();
    for &n in levels.iter().rev() {
        let mut span = i.mat.row_vecs();
        span.extend((0..d).filter(|&j| y.degrees[j] > n).map(unit));
        span.extend(chosen.iter().filter(|&&j| y.degrees[j] == n).map(|&j| unit(j)));
        let mut r = rank_mod_l(&Mat::from_vecs(m, d, &span));
        for j in (0..d).filter(|&j| y.degrees[j] == n) {
            span.push(unit(j));
            let r2 = rank_mod_l(&Mat::from_vecs(m, d, &span));
            if r2 > r {
                chosen.push(j);
                r = r2;
            } else {
                span.pop();
            }
        }
    }
    chosen.sort_unstable();
    let mut rows = i.mat.row_vecs();
    rows.extend(chosen.iter().map(|&j| unit(j)));
    let full = Mat::from_vecs(m, d, &rows);
    let inv = crate::linalg::inverse(&full).ok_or_else(|| Error::Precondition("image is not a direct summand".into()))?;
    let proj = inv.block(0, i.src.dim(), d, chosen.len());
    let comp = Mat::from_vecs(m, d, &chosen.iter().map(|&j| unit(j)).collect::<Vec<_>>());
    let action = (0..y.group().order()).map(|g| comp.mul(y.module.act(g)).mul(&proj)).collect();
    let cmod = GModule::new(y.group().clone(), m, chosen.len(), action)?;
    let c = FilteredObject::new(cmod, chosen.iter().map(|&j| y.degrees[j]).collect())?;
    FilteredMorphism::new(y, &c, proj)
}

/// A filtered linear (not necessarily equivariant) section s of an admissible epi: s e = 1.
pub fn filtered_section(e: &FilteredMorphism) -> Result<Mat> {
    let m = e.src.field();
    let (x, big) = (&e.tgt, &e.src);
    let mut s = Mat::zeros(m, x.dim(), big.dim());
    for i in 0..x.dim() {
        let idx = big.step(x.degrees[i]);
        let mut unit = vec![0u32; x.dim()];
        unit[i] = 1;
        let sol = Solver::new(&e.mat.select_rows(&idx))
            .solve(&unit)
            .ok_or_else(|| Error::Precondition("map is not an admissible epi".into()))?;
        for (c, &j) in idx.iter().enumerate() {
            s.set(i, j, sol[c]);
        }
    }
    Ok(s)
}

/// Cocycle of a gr-split extension K -> E -> X: c(g) inc = s act_E(g) - act_X(g) s
/// for the filtered section s, one dim X x dim K matrix per group element.
pub fn cocycle_of_extension(inc: &FilteredMorphism, e: &FilteredMorphism) -> Result<Vec<Mat>> {
    if inc.tgt != e.src {
        return Err(Error::Precondition("extension maps are not composable".into()));
    }
    let s = filtered_section(e)?;
    let solver = Solver::new(&inc.mat);
    let (x, big) = (&e.tgt, &e.src);
    (0..x.group().order())
        .map(|g| {
            let rhs = s.mul(big.module.act(g)).sub(&x.module.act(g).mul(&s));
            solver.solve_mat(&rhs).ok_or_else(|| Error::Precondition("sequence is not exact in the middle".into()))
        })
        .collect()
}

/// Ext^1_F(X, Y) = Z^1(G, Hom^(1)(X, Y)) / d Hom^(0)(X, Y), where Hom^(k) are linear maps
/// raising the filtration by >= k; cocycles satisfy c(gh) = c(g) act_Y(h) + act_X(g) c(h).
#[derive(Clone, Debug)]
pub struct Ext1Filtered {
    x: FilteredObject,
    y: FilteredObject,
    cocycles: Mat,
    pres: FiniteModulePresentation,
}

pub fn ext1_filtered(x: &FilteredObject, y: &FilteredObject) -> Result<Ext1Filtered> {
    let m = x.field();
    let g = x.group();
    let n = g.order();
    let (dx, dy) = (x.dim(), y.dim());
    let d = dx * dy;
    if n * d > EXT1_CAP {
        return Err(Error::Cap(format!("cochain space of dimension {} exceeds {EXT1_CAP}", n * d)));
    }
    let mut seconds: Vec<usize> = g.generators().to_vec();
    seconds.push(g.identity());
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| seconds.iter().map(move |&b| (a, b))).collect();
    let var = |a: usize, i: usize, j: usize| a * d + i * dy + j;
    let masked_vars: Vec<usize> =
        (0..n * d).filter(|&v| !allowed(&x.degrees, &y.degrees, (v % d) / dy, v % dy, 1)).collect();
    let mut a = Mat::zeros(m, n * d, pairs.len() * d + masked_vars.len());
    let bump = |a: &mut Mat, r: usize, c: usize, val: u32| {
        let cur = a.get(r, c);
        a.set(r, c, m.add(cur, val));
    };
    for (pi, &(g1, h)) in pairs.iter().enumerate() {
        let gh = g.mul(g1, h);
        let (ay, ax) = (y.module.act(h), x.module.act(g1));
        for i in 0..dx {
            for j in 0..dy {
                let col = pi * d + i * dy + j;
                bump(&mut a, var(gh, i, j), col, 1);
                for k in 0..dy {
                    bump(&mut a, var(g1, i, k), col, m.neg(ay.get(k, j)));
                }
                for k in 0..dx {
                    bump(&mut a, var(h, k, j), col, m.neg(ax.get(i, k)));
                }
            }
        }
    }
    for (t, &v) in masked_vars.iter().enumerate() {
        a.set(v, pairs.len() * d + t, 1);
    }
    let cocycles = kernel(&a);
    let mut bounds = Vec::new();
    for i in 0..dx {
        for j in 0..dy {
            if !allowed(&x.degrees, &y.degrees, i, j, 0) {
                continue;
            }
            let mut v = vec![0u32; n * d];
            for h in 0..n {
                let (ay, ax) = (y.module.act(h), x.module.act(h));
                for c in 0..dy {
                    v[var(h, i, c)] = m.add(v[var(h, i, c)], ay.get(j, c));
                }
                for r in 0..dx {
                    v[var(h, r, j)] = m.sub(v[var(h, r, j)], ax.get(r, i));
                }
            }
            bounds.push(v);
        }
    }
    let pres = subquotient(&cocycles, &Mat::from_vecs(m, n * d, &bounds))?;
    Ok(Ext1Filtered { x: x.clone(), y: y.clone(), cocycles, pres })
}

impl Ext1Filtered {
    pub fn source(&self) -> &FilteredObject {
        &self.x
    }
    pub fn target(&self) -> &FilteredObject {
        &self.y
    }
    pub fn presentation(&self) -> &FiniteModulePresentation {
        &self.pres
    }
    pub fn dim(&self) -> usize {
        self.pres.ngens()
    }
    pub fn order(&self) -> u64 {
        self.pres.order()
    }
    pub fn cocycle_space(&self) -> &Mat {
        &self.cocycles
    }

    /// Flattened cochain of per-element matrices.
    pub fn flatten(c: &[Mat]) -> Vec<u32> {
        c.iter().flat_map(|a| a.data().iter().copied()).collect()
    }

    /// Class coordinates of a cocycle; errors if it is not one.
    pub fn coords(&self, c: &[Mat]) -> Result<Vec<u32>> {
        let v = Self::flatten(c);
        if v.len() != self.pres.ambient_dim() {
            return Err(Error::Dimension("cochain of the wrong size".into()));
        }
        if !Solver::new(&self.cocycles).contains(&v) {
            return Err(Error::Precondition("cochain is not a filtered cocycle".into()));
        }
        self.pres.project(&v)
    }

    /// The cocycle (per-element matrices) lifting class coordinates.
    pub fn cocycle(&self, coords: &[u32]) -> Vec<Mat> {
        let v = self.pres.lift(coords);
        let (dx, dy) = (self.x.dim(), self.y.dim());
        v.chunks(dx * dy).map(|c| Mat::from_data(self.x.field(), dx, dy, c.to_vec())).collect()
    }
}

/// A random object of dimension `dim` with degrees in 0..=3: for a cyclic group the
/// generator acts as 1 + N with N strictly raising degrees, resampled until
/// (1 + N)^|G| = 1 (N = 0 is the fallback).
pub fn random_filtered<R: Rng>(group: &Arc<FiniteGroup>, p: Modulus, dim: usize, rng: &mut R) -> Result<FilteredObject> {
    let degrees: Vec<i32> = (0..dim).map(|_| rng.gen_range(0..=3)).collect();
    if group.order() == 1 {
        return FilteredObject::new(GModule::trivial(group.clone(), p, dim), degrees);
    }
    if group.generators().len() != 1 || !group.is_cyclic() {
        return Err(Error::Precondition("random_filtered supports trivial and cyclic groups".into()));
    }
    for _ in 0..32 {
        let gen = Mat::from_fn(p, dim, dim, |i, j| {
            if i == j {
                1
            } else if degrees[j] > degrees[i] {
                rng.gen_range(0..p.n()) as i64
            } else {
                0
            }
        });
        if let Ok(module) = GModule::from_generators(group.clone(), p, dim, &[gen]) {
            return FilteredObject::new(module, degrees);
        }
    }
    FilteredObject::new(GModule::trivial(group.clone(), p, dim), degrees)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c2() -> (Arc<FiniteGroup>, Modulus) {
        (Arc::new(FiniteGroup::cyclic(2)), Modulus::field(2).unwrap())
    }

    #[test]
    fn unit_and_regular_gr() {
        let (g, p) = c2();
        let u = FilteredObject::unit(g.clone(), p, 3);
        assert_eq!(u.gr().dims(), BTreeMap::from([(3, 1)]));
        let reg = FilteredObject::i_adic(&GModule::regular(g, p)).unwrap();
        assert_eq!(reg.gr().dims(), BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn twist_and_sigma() {
        let (g, p) = c2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_filtered(&g, p, 4, &mut rng).unwrap();
        assert_eq!(x.twist(0), x);
        assert_eq!(x.twist(2).twist(-2), x);
        assert_eq!(FilteredObject::unit(g, p, 1).twist(1).degrees(), &[2]);
        let s1 = FilteredMorphism::sigma(&x.twist(-1));
        let s2 = FilteredMorphism::sigma(&x);
        let s = s1.then(&s2).unwrap();
        assert_eq!(s.tgt(), &x.twist(1));
        assert_eq!(s.mat(), &Mat::identity(p, 4));
        assert!(s2.gr().is_zero());
    }

    #[test]
    fn divide_by_sigma_cases() {
        let (g, p) = c2();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x = random_filtered(&g, p, 3, &mut rng).unwrap();
        let s = FilteredMorphism::sigma(&x);
        assert_eq!(s.divide_by_sigma().unwrap(), FilteredMorphism::identity(&x));
        let z = FilteredMorphism::zero(&x, &x);
        assert!(z.divide_by_sigma().unwrap().is_zero());
        assert!(FilteredMorphism::identity(&x).divide_by_sigma().is_err());
    }

    #[test]
    fn ext1_examples() {
        let (g, p) = c2();
        let u0 = FilteredObject::unit(g.clone(), p, 0);
        assert_eq!(ext1_filtered(&u0, &u0).unwrap().order(), 1);
        assert_eq!(ext1_filtered(&u0, &u0.twist(1)).unwrap().order(), 2);
        assert_eq!(ext1_filtered(&u0, &u0.twist(-1)).unwrap().order(), 1);
        let triv = Arc::new(FiniteGroup::trivial());
        let a = FilteredObject::new(GModule::trivial(triv.clone(), p, 2), vec![0, 1]).unwrap();
        let b = FilteredObject::new(GModule::trivial(triv, p, 2), vec![1, 2]).unwrap();
        assert_eq!(ext1_filtered(&a, &b).unwrap().order(), 1);
    }

    #[test]
    fn regular_extension_class_is_nonzero() {
        let (g, p) = c2();
        let reg = FilteredObject::i_adic(&GModule::regular(g, p)).unwrap();
        let top = reg.step(1);
        assert_eq!(top.len(), 1);
        let inc_mat = Mat::from_fn(p, 1, 2, |_, j| (j == top[0]) as i64);
        let k = FilteredObject::new(
            GModule::trivial(reg.group().clone(), p, 1),
            vec![1],
        )
        .unwrap();
        let inc = FilteredMorphism::new(&k, &reg, inc_mat).unwrap();
        let e = cokernel_filtered(&inc).unwrap();
        assert_eq!(e.tgt().degrees(), &[0]);
        let c = cocycle_of_extension(&inc, &e).unwrap();
        let ext = ext1_filtered(e.tgt(), &k).unwrap();
        assert_eq!(ext.coords(&c).unwrap(), vec![1]);
    }

    #[test]
    fn cover_kernel_cokernel_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (name, p) in [("C2", 2), ("C4", 2), ("C3", 3), ("1", 2)] {
            let g = Arc::new(FiniteGroup::by_name(name).unwrap());
            let p = Modulus::field(p).unwrap();
            for _ in 0..5 {
                let x = random_filtered(&g, p, 3, &mut rng).unwrap();
                let c = cover(&x).unwrap();
                assert!(c.is_adm_epi());
                let k = kernel_filtered(&c).unwrap();
                assert!(k.is_adm_mono());
                assert!(k.then(&c).unwrap().is_zero());
                let q = cokernel_filtered(&k).unwrap();
                assert_eq!(q.tgt().gr().dims(), x.gr().dims());
                let gens = c.src().free_generators().unwrap();
                let expected: usize = gens.iter().map(|&d| x.step(d).len()).sum();
                assert_eq!(hom_filtered(c.src(), &x).unwrap().len(), expected);
            }
        }
    }

    /// dim Ext^1 through the cover 0 -> K -> P -> X: Hom_F(K, Y) modulo restrictions from P.
    fn ext1_via_cover(x: &FilteredObject, y: &FilteredObject) -> usize {
        let c = cover(x).unwrap();
        let k = kernel_filtered(&c).unwrap();
        let hk = hom_filtered(k.src(), y).unwrap();
        let restricted: Vec<Vec<u32>> =
            hom_filtered(c.src(), y).unwrap().iter().map(|f| k.mat().mul(f.mat()).flatten()).collect();
        let dim = k.src().dim() * y.dim();
        hk.len() - rank_mod_l(&Mat::from_vecs(x.field(), dim, &restricted))
    }

    #[test]
    fn ext1_matches_cover_computation() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for (name, p) in [("C2", 2), ("C4", 2), ("C3", 3), ("1", 2)] {
            let g = Arc::new(FiniteGroup::by_name(name).unwrap());
            let p = Modulus::field(p).unwrap();
            for _ in 0..6 {
                let dx = rng.gen_range(1..=3);
                let dy = rng.gen_range(1..=3);
                let x = random_filtered(&g, p, dx, &mut rng).unwrap();
                let y = random_filtered(&g, p, dy, &mut rng).unwrap().twist(rng.gen_range(-1..=1));
                let e = ext1_filtered(&x, &y).unwrap();
                assert_eq!(e.dim(), ext1_via_cover(&x, &y), "{name} {:?} {:?}", x.degrees(), y.degrees());
                if name == "1" {
                    assert_eq!(e.dim(), 0);
                }
            }
        }
    }

    #[test]
    fn regular_module_is_relatively_projective() {
        let (g, p) = c2();
        let reg = FilteredObject::i_adic(&GModule::regular(g.clone(), p)).unwrap();
        for d in -1..=2 {
            let y = FilteredObject::unit(g.clone(), p, d);
            assert_eq!(ext1_filtered(&reg, &y).unwrap().dim(), 0);
        }
    }
}
