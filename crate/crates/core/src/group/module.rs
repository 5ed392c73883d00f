use super::finite::FiniteGroup;
use crate::error::{Error, Result};
use crate::linalg::{self, kernel, Mat, Modulus, Solver};
use std::fmt;
use std::sync::Arc;

pub const DEFAULT_RANK_CAP: usize = 16;

struct ModuleData {
    m: Modulus,
    group: Arc<FiniteGroup>,
    rank: usize,
    action: Vec<Mat>,
    // Some(k) when this is the free module on k generators with the standard basis
    free: Option<usize>,
}

/// A free Z/l^r-module with a right G-action x |-> x * action(g), so
/// action(g) * action(h) = action(gh).
#[derive(Clone)]
pub struct GModule(Arc<ModuleData>);

impl PartialEq for GModule {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.m == other.0.m
                && self.0.rank == other.0.rank
                && (Arc::ptr_eq(&self.0.group, &other.0.group) || *self.0.group == *other.0.group)
                && self.0.action == other.0.action)
    }
}
impl Eq for GModule {}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GModule<{:?}, {}, rank {}>", self.0.group, self.0.m, self.0.rank)
    }
}

fn check_action(group: &FiniteGroup, m: Modulus, rank: usize, action: &[Mat]) -> Result<()> {
    if action.len() != group.order() {
        return Err(Error::Module(format!("{} action matrices for a group of order {}", action.len(), group.order())));
    }
    for a in action {
        if a.rows() != rank || a.cols() != rank || a.modulus() != m {
            return Err(Error::Module("action matrix of wrong shape or modulus".into()));
        }
    }
    if action[0] != Mat::identity(m, rank) {
        return Err(Error::Module("identity does not act trivially".into()));
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            if action[g].mul(&action[h]) != action[group.mul(g, h)] {
                return Err(Error::Module(format!("action(g)action(h) != action(gh) for g={g}, h={h}")));
            }
        }
    }
    for a in action {
        if !linalg::is_split_mono(a) || !linalg::is_split_epi(a) {
            return Err(Error::Module("action matrix not invertible".into()));
        }
    }
    Ok(())
}

impl GModule {
    /// Checked constructor from the action of every element.
    pub fn new(group: Arc<FiniteGroup>, m: Modulus, rank: usize, action: Vec<Mat>) -> Result<GModule> {
        check_action(&group, m, rank, &action)?;
        Ok(GModule(Arc::new(ModuleData { m, group, rank, action, free: None })))
    }

    pub(crate) fn unchecked(group: Arc<FiniteGroup>, m: Modulus, rank: usize, action: Vec<Mat>, free: Option<usize>) -> GModule {
        GModule(Arc::new(ModuleData { m, group, rank, action, free }))
    }

    /// Extends images of the group's generators to all elements and checks the result.
    pub fn from_generators(group: Arc<FiniteGroup>, m: Modulus, rank: usize, gen_images: &[Mat]) -> Result<GModule> {
        if gen_images.len() != group.generators().len() {
            return Err(Error::Module(format!(
                "{} generator images for {} generators",
                gen_images.len(),
                group.generators().len()
            )));
        }
        for a in gen_images {
            if a.rows() != rank || a.cols() != rank || a.modulus() != m {
                return Err(Error::Module("generator image of wrong shape or modulus".into()));
            }
        }
        let action = group
            .words()
            .iter()
            .map(|w| w.iter().fold(Mat::identity(m, rank), |acc, &gi| acc.mul(&gen_images[gi])))
            .collect();
        GModule::new(group, m, rank, action)
    }

    pub fn trivial(group: Arc<FiniteGroup>, m: Modulus, rank: usize) -> GModule {
        let action = vec![Mat::identity(m, rank); group.order()];
        GModule::unchecked(group, m, rank, action, None)
    }

    pub fn zero(group: Arc<FiniteGroup>, m: Modulus) -> GModule {
        GModule::free(group, m, 0)
    }

    /// The free module Lambda^k, Lambda = Z/l^r[G]; basis index j*|G| + h.
    pub fn free(group: Arc<FiniteGroup>, m: Modulus, k: usize) -> GModule {
        let n = group.order();
        let action = (0..n)
            .map(|g| {
                let mut a = Mat::zeros(m, k * n, k * n);
                for j in 0..k {
                    for h in 0..n {
                        a.set(j * n + h, j * n + group.mul(h, g), 1);
                    }
                }
                a
            })
            .collect();
        GModule::unchecked(group, m, k * n, action, Some(k))
    }

    pub fn regular(group: Arc<FiniteGroup>, m: Modulus) -> GModule {
        GModule::free(group, m, 1)
    }

    /// Rank-one module from unit values on the generators.
    pub fn character(group: Arc<FiniteGroup>, m: Modulus, values: &[u32]) -> Result<GModule> {
        if values.iter().any(|&v| !m.is_unit(v)) {
            return Err(Error::Module("character values must be units".into()));
        }
        let imgs: Vec<Mat> = values.iter().map(|&v| Mat::scalar(m, 1, v)).collect();
        GModule::from_generators(group, m, 1, &imgs)
            .map_err(|e| Error::Module(format!("character is not a homomorphism: {e}")))
    }

    /// Nontrivial characters whose values all have order dividing l, in a fixed order.
    pub fn order_l_characters(group: Arc<FiniteGroup>, m: Modulus) -> Vec<GModule> {
        let units: Vec<u32> = (1..m.n()).filter(|&u| m.is_unit(u) && pow_mod(m, u, m.l()) == 1).collect();
        let k = group.generators().len();
        let mut out = Vec::new();
        let mut idx = vec![0usize; k];
        if units.is_empty() || k == 0 {
            return out;
        }
        loop {
            let vals: Vec<u32> = idx.iter().map(|&i| units[i]).collect();
            if vals.iter().any(|&v| v != 1) {
                if let Ok(c) = GModule::character(group.clone(), m, &vals) {
                    out.push(c);
                }
            }
            let mut p = 0;
            loop {
                if p == k {
                    return out;
                }
                idx[p] += 1;
                if idx[p] < units.len() {
                    break;
                }
                idx[p] = 0;
                p += 1;
            }
        }
    }

    pub fn modulus(&self) -> Modulus {
        self.0.m
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.0.group
    }
    pub fn rank(&self) -> usize {
        self.0.rank
    }
    pub fn act(&self, g: usize) -> &Mat {
        &self.0.action[g]
    }
    pub fn actions(&self) -> &[Mat] {
        &self.0.action
    }
    /// Number of free generators when this module is Lambda^k.
    pub fn free_gens(&self) -> Option<usize> {
        self.0.free
    }
    pub fn is_trivial_action(&self) -> bool {
        let id = Mat::identity(self.0.m, self.0.rank);
        self.0.action.iter().all(|a| *a == id)
    }

    pub fn same_group(&self, other: &GModule) -> bool {
        Arc::ptr_eq(&self.0.group, &other.0.group) || *self.0.group == *other.0.group
    }

    pub fn check(&self) -> Result<()> {
        check_action(&self.0.group, self.0.m, self.0.rank, &self.0.action)
    }

    pub fn direct_sum(&self, other: &GModule) -> GModule {
        assert!(self.same_group(other) && self.modulus() == other.modulus());
        let action = (0..self.group().order()).map(|g| self.act(g).dsum(other.act(g))).collect();
        GModule::unchecked(self.0.group.clone(), self.0.m, self.rank() + other.rank(), action, None)
    }

    /// Reduction mod l^c.
    pub fn reduce(&self, c: u32) -> Result<GModule> {
        if c > self.0.m.r() || c == 0 {
            return Err(Error::Precondition(format!("cannot reduce {} to exponent {c}", self.0.m)));
        }
        if c == self.0.m.r() {
            return Ok(self.clone());
        }
        let t = self.0.m.with_exp(c)?;
        let action = self.0.action.iter().map(|a| a.reduce_to(t)).collect();
        Ok(GModule::unchecked(self.0.group.clone(), t, self.0.rank, action, self.0.free))
    }

    /// Conjugate module with basis change P: new action P act(g) P^{-1}.
    pub fn conjugate(&self, p: &Mat) -> Result<GModule> {
        let pinv = linalg::inverse(p).ok_or_else(|| Error::Precondition("basis change not invertible".into()))?;
        let action = self.0.action.iter().map(|a| p.mul(a).mul(&pinv)).collect();
        GModule::new(self.0.group.clone(), self.0.m, self.0.rank, action)
    }
}

fn pow_mod(m: Modulus, x: u32, e: u32) -> u32 {
    (0..e).fold(1 % m.n(), |acc, _| m.mul(acc, x))
}

/// A G-equivariant map, stored as a rank_src x rank_tgt matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct GMorphism {
    src: GModule,
    tgt: GModule,
    mat: Mat,
}

impl fmt::Debug for GMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GMorphism({:?})", self.mat)
    }
}

impl GMorphism {
    pub fn new(src: &GModule, tgt: &GModule, mat: Mat) -> Result<GMorphism> {
        if !src.same_group(tgt) {
            return Err(Error::Precondition("morphism between modules over different groups".into()));
        }
        if src.modulus() != tgt.modulus() || mat.modulus() != src.modulus() {
            return Err(Error::ModulusMismatch(src.modulus().n(), mat.modulus().n()));
        }
        if mat.rows() != src.rank() || mat.cols() != tgt.rank() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for ranks {} -> {}",
                mat.rows(),
                mat.cols(),
                src.rank(),
                tgt.rank()
            )));
        }
        for &g in src.group().generators() {
            if mat.mul(tgt.act(g)) != src.act(g).mul(&mat) {
                return Err(Error::NotEquivariant(format!("fails at generator {g}")));
            }
        }
        Ok(GMorphism { src: src.clone(), tgt: tgt.clone(), mat })
    }

    pub(crate) fn unchecked(src: &GModule, tgt: &GModule, mat: Mat) -> GMorphism {
        debug_assert_eq!((mat.rows(), mat.cols()), (src.rank(), tgt.rank()));
        GMorphism { src: src.clone(), tgt: tgt.clone(), mat }
    }

    pub fn zero(src: &GModule, tgt: &GModule) -> GMorphism {
        GMorphism::unchecked(src, tgt, Mat::zeros(src.modulus(), src.rank(), tgt.rank()))
    }
    pub fn identity(x: &GModule) -> GMorphism {
        GMorphism::unchecked(x, x, Mat::identity(x.modulus(), x.rank()))
    }
    /// Multiplication by a scalar c on X.
    pub fn scalar(x: &GModule, c: u32) -> GMorphism {
        GMorphism::unchecked(x, x, Mat::scalar(x.modulus(), x.rank(), c))
    }

    pub fn src(&self) -> &GModule {
        &self.src
    }
    pub fn tgt(&self) -> &GModule {
        &self.tgt
    }
    pub fn mat(&self) -> &Mat {
        &self.mat
    }
    pub fn modulus(&self) -> Modulus {
        self.mat.modulus()
    }

    /// self followed by next.
    pub fn then(&self, next: &GMorphism) -> Result<GMorphism> {
        if self.tgt != next.src {
            return Err(Error::Precondition("composing morphisms with mismatched ends".into()));
        }
        Ok(GMorphism::unchecked(&self.src, &next.tgt, self.mat.mul(&next.mat)))
    }

    pub fn add(&self, other: &GMorphism) -> GMorphism {
        GMorphism::unchecked(&self.src, &self.tgt, self.mat.add(&other.mat))
    }
    pub fn sub(&self, other: &GMorphism) -> GMorphism {
        GMorphism::unchecked(&self.src, &self.tgt, self.mat.sub(&other.mat))
    }
    pub fn scale(&self, c: u32) -> GMorphism {
        GMorphism::unchecked(&self.src, &self.tgt, self.mat.scale(c))
    }
    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    pub fn reduce(&self, c: u32) -> Result<GMorphism> {
        let s = self.src.reduce(c)?;
        let t = self.tgt.reduce(c)?;
        Ok(GMorphism::unchecked(&s, &t, self.mat.reduce_to(s.modulus())))
    }

    pub fn is_split_mono(&self) -> bool {
        linalg::is_split_mono(&self.mat)
    }
    pub fn is_split_epi(&self) -> bool {
        linalg::is_split_epi(&self.mat)
    }
}

/// Flattened intertwiners M -> N: rows span exactly the matrices F with
/// F act_N(g) = act_M(g) F (index i * rank_N + j).
pub fn hom_g(mm: &GModule, nn: &GModule) -> Result<Mat> {
    if !mm.same_group(nn) || mm.modulus() != nn.modulus() {
        return Err(Error::Precondition("hom between modules over different groups or rings".into()));
    }
    let m = mm.modulus();
    let (dm, dn) = (mm.rank(), nn.rank());
    let gens = mm.group().generators();
    let d = dm * dn;
    let mut a = Mat::zeros(m, d, gens.len() * d);
    for (gi, &g) in gens.iter().enumerate() {
        let rn = nn.act(g);
        let rm = mm.act(g);
        for i in 0..dm {
            for j in 0..dn {
                let row = i * dn + j;
                // E_ij act_N(g): row i equals row j of act_N(g)
                for c in 0..dn {
                    let x = rn.get(j, c);
                    if x != 0 {
                        let col = gi * d + i * dn + c;
                        a.set(row, col, m.add(a.get(row, col), x));
                    }
                }
                // - act_M(g) E_ij: column j equals column i of act_M(g)
                for r in 0..dm {
                    let x = rm.get(r, i);
                    if x != 0 {
                        let col = gi * d + r * dn + j;
                        a.set(row, col, m.sub(a.get(row, col), x));
                    }
                }
            }
        }
    }
    Ok(kernel(&a))
}

/// The module Hom(M,N) of all Z/l^r-linear maps with right action
/// phi . g = act_M(g^-1) phi act_N(g); its invariants are hom_g(M,N).
pub fn hom_module(mm: &GModule, nn: &GModule) -> GModule {
    let m = mm.modulus();
    let g = mm.group();
    let (dm, dn) = (mm.rank(), nn.rank());
    let action = (0..g.order())
        .map(|x| {
            let a = mm.act(g.inv(x));
            let b = nn.act(x);
            // phi -> a phi b on flattened phi
            Mat::from_fn(m, dm * dn, dm * dn, |row, col| {
                let (i, j) = (row / dn, row % dn);
                let (r, c) = (col / dn, col % dn);
                m.mul(a.get(r, i), b.get(j, c)) as i64
            })
        })
        .collect();
    GModule::unchecked(g.clone(), m, dm * dn, action, None)
}

/// Evaluation map from d copies of the regular module onto M.
pub fn free_cover(x: &GModule) -> (GModule, GMorphism) {
    let n = x.group().order();
    let d = x.rank();
    let p = GModule::free(x.group().clone(), x.modulus(), d);
    let mut eps = Mat::zeros(x.modulus(), d * n, d);
    for j in 0..d {
        for h in 0..n {
            for c in 0..d {
                eps.set(j * n + h, c, x.act(h).get(j, c));
            }
        }
    }
    (p.clone(), GMorphism::unchecked(&p, x, eps))
}

/// The G-map Lambda^k -> X sending generator j to row j of `images`.
pub fn free_map(p: &GModule, x: &GModule, images: &Mat) -> GMorphism {
    let k = p.free_gens().expect("source must be a free module");
    let n = x.group().order();
    assert_eq!(images.rows(), k);
    let mut mat = Mat::zeros(x.modulus(), k * n, x.rank());
    for j in 0..k {
        for h in 0..n {
            let v = x.act(h).apply(images.row(j));
            for (c, &val) in v.iter().enumerate() {
                mat.set(j * n + h, c, val);
            }
        }
    }
    GMorphism::unchecked(p, x, mat)
}

/// Lifts f: P -> T through a split epi e: E -> T, giving g: P -> E with g e = f.
/// P must be relatively projective; free modules are handled generator-wise.
pub fn lift_through(f: &GMorphism, e: &GMorphism) -> Result<GMorphism> {
    if f.tgt() != e.tgt() {
        return Err(Error::Precondition("lift_through: targets differ".into()));
    }
    let p = f.src();
    let solver = Solver::new(e.mat());
    if let Some(k) = p.free_gens() {
        let n = p.group().order();
        let mut imgs = Vec::with_capacity(k);
        for j in 0..k {
            let x = solver
                .solve(f.mat().row(j * n))
                .ok_or_else(|| Error::NoSolution("lift_through: epi is not surjective".into()))?;
            imgs.push(x);
        }
        return Ok(free_map(p, e.src(), &Mat::from_vecs(p.modulus(), e.src().rank(), &imgs)));
    }
    // general relatively projective source: search Hom_G(P, E)
    let basis = hom_g(p, e.src())?;
    let (dp, de, dt) = (p.rank(), e.src().rank(), e.tgt().rank());
    let m = p.modulus();
    let img = Mat::from_fn(m, basis.rows(), dp * dt, |b, idx| {
        let gm = Mat::from_data(m, dp, de, basis.row(b).to_vec());
        let comp = gm.mul(e.mat());
        comp.get(idx / dt, idx % dt) as i64
    });
    let coeffs = Solver::new(&img)
        .solve(f.mat().data())
        .ok_or_else(|| Error::NoSolution("lift_through: no equivariant lift".into()))?;
    let flat = basis.apply(&coeffs);
    Ok(GMorphism::unchecked(p, e.src(), Mat::from_data(m, dp, de, flat)))
}

/// Factors f: X -> Z through a split epi e: X -> Y when f vanishes on ker e,
/// giving h: Y -> Z with e h = f.
pub fn factor_through_epi(e: &GMorphism, f: &GMorphism) -> Result<GMorphism> {
    if e.src() != f.src() {
        return Err(Error::Precondition("factor_through_epi: sources differ".into()));
    }
    let sec = linalg::section(e.mat()).ok_or_else(|| Error::Precondition("map is not a split epi".into()))?;
    let h = sec.mul(f.mat());
    if e.mat().mul(&h) != *f.mat() {
        return Err(Error::NoSolution("map does not vanish on the kernel".into()));
    }
    Ok(GMorphism::unchecked(e.tgt(), f.tgt(), h))
}

/// Factors f: Z -> X through a split mono i: Y -> X when the image of f lies in Y,
/// giving h: Z -> Y with h i = f.
pub fn factor_through_mono(i: &GMorphism, f: &GMorphism) -> Result<GMorphism> {
    if i.tgt() != f.tgt() {
        return Err(Error::Precondition("factor_through_mono: targets differ".into()));
    }
    let h = Solver::new(i.mat())
        .solve_mat(f.mat())
        .ok_or_else(|| Error::NoSolution("image not contained in the subobject".into()))?;
    Ok(GMorphism::unchecked(f.src(), i.src(), h))
}

/// Kernel of a split epi as a submodule: returns (K, inclusion K -> X).
pub fn kernel_module(e: &GMorphism) -> Result<(GModule, GMorphism)> {
    if !e.is_split_epi() {
        return Err(Error::Precondition("kernel_module needs a split epi".into()));
    }
    let x = e.src();
    let m = x.modulus();
    // rows of the projection I - e S onto the kernel; any rows independent mod l form a basis
    let sec = linalg::section(e.mat()).expect("split epi has a section");
    let proj = Mat::identity(m, x.rank()).sub(&e.mat().mul(&sec));
    let k = x.rank() - e.tgt().rank();
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(k);
    for r in 0..proj.rows() {
        if rows.len() == k {
            break;
        }
        let mut trial = rows.clone();
        trial.push(proj.row(r).to_vec());
        if linalg::rank_mod_l(&Mat::from_vecs(m, x.rank(), &trial)) == trial.len() {
            rows = trial;
        }
    }
    if rows.len() != k {
        return Err(Error::Precondition("kernel is not free of the expected rank".into()));
    }
    let basis = Mat::from_vecs(m, x.rank(), &rows);
    let solver = Solver::new(&basis);
    let action = (0..x.group().order())
        .map(|g| solver.solve_mat(&basis.mul(x.act(g))).expect("kernel is G-stable"))
        .collect();
    let kmod = GModule::unchecked(x.group().clone(), x.modulus(), k, action, None);
    let inc = GMorphism::unchecked(&kmod, x, basis);
    Ok((kmod, inc))
}

/// Cokernel of a split mono: returns (C, projection X -> C).
pub fn cokernel_module(i: &GMorphism) -> Result<(GModule, GMorphism)> {
    if !i.is_split_mono() {
        return Err(Error::Precondition("cokernel_module needs a split mono".into()));
    }
    let x = i.tgt();
    let m = x.modulus();
    // complement basis: standard vectors completing the image to a basis
    let mut rows = i.mat().row_vecs();
    let mut comp = Vec::new();
    for c in 0..x.rank() {
        let mut e = vec![0u32; x.rank()];
        e[c] = 1;
        let mut trial = rows.clone();
        trial.push(e.clone());
        let t = Mat::from_vecs(m, x.rank(), &trial);
        if linalg::rank_mod_l(&t) == trial.len() {
            rows = trial;
            comp.push(e);
        }
    }
    let basis = Mat::from_vecs(m, x.rank(), &rows);
    let binv = linalg::inverse(&basis).expect("completed basis is invertible");
    let k = i.src().rank();
    let cr = comp.len();
    // coordinates in the completed basis; projection keeps the complement part
    let proj = binv.block(0, k, x.rank(), cr);
    let compm = Mat::from_vecs(m, x.rank(), &comp);
    let action = (0..x.group().order()).map(|g| compm.mul(x.act(g)).mul(&proj)).collect();
    let cmod = GModule::unchecked(x.group().clone(), m, cr, action, None);
    Ok((cmod.clone(), GMorphism::unchecked(x, &cmod, proj)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::cyclic(2))
    }

    #[test]
    fn standard_modules() {
        let m = Modulus::from_order(4).unwrap();
        let reg = GModule::regular(c2(), m);
        assert_eq!(reg.act(1), &Mat::from_rows(m, &[vec![0, 1], vec![1, 0]]).unwrap());
        assert!(reg.check().is_ok());
        let m9 = Modulus::from_order(9).unwrap();
        let chi = GModule::character(Arc::new(FiniteGroup::cyclic(3)), m9, &[4]).unwrap();
        assert!(chi.reduce(1).unwrap().is_trivial_action());
        assert!(!chi.is_trivial_action());
        assert!(GModule::character(c2(), m9, &[4]).is_err());
    }

    #[test]
    fn hom_examples() {
        let m = Modulus::from_order(4).unwrap();
        let reg = GModule::regular(c2(), m);
        let h = hom_g(&reg, &reg).unwrap();
        assert_eq!(linalg::subquotient(&h, &Mat::zeros(m, 0, 4)).unwrap().order(), 16);
        let triv = GModule::trivial(c2(), m, 1);
        let chi = GModule::character(c2(), m, &[3]).unwrap();
        let h = hom_g(&triv, &chi).unwrap();
        assert_eq!(linalg::howell_form(&h), Mat::from_rows(m, &[vec![2]]).unwrap());
    }

    #[test]
    fn reduce_examples() {
        let m = Modulus::from_order(4).unwrap();
        let chi = GModule::character(c2(), m, &[3]).unwrap();
        assert!(chi.reduce(1).unwrap().is_trivial_action());
        let reg = GModule::regular(c2(), m).reduce(1).unwrap();
        assert_eq!(reg, GModule::regular(c2(), Modulus::from_order(2).unwrap()));
        assert!(chi.reduce(3).is_err());
    }

    #[test]
    fn cover_and_lift() {
        let m2 = Modulus::from_order(2).unwrap();
        let triv = GModule::trivial(c2(), m2, 1);
        let (p, eps) = free_cover(&triv);
        assert_eq!(p, GModule::regular(c2(), m2));
        assert_eq!(eps.mat(), &Mat::from_rows(m2, &[vec![1], vec![1]]).unwrap());
        assert!(eps.is_split_epi());
        let m4 = Modulus::from_order(4).unwrap();
        let reg = GModule::regular(c2(), m4);
        let (p, eps) = free_cover(&reg);
        assert_eq!(p.rank(), 4);
        assert!(eps.is_split_epi());
        let zero = GModule::zero(c2(), m4);
        let (p0, e0) = free_cover(&zero);
        assert_eq!((p0.rank(), e0.mat().rows()), (0, 0));

        // lift the identity of the trivial module through the Z/4 augmentation of the regular module
        let triv4 = GModule::trivial(c2(), m4, 1);
        let (_, aug) = free_cover(&triv4);
        let id = GMorphism::identity(&triv4);
        let (p, eps) = free_cover(&triv4);
        let f = eps.then(&id).unwrap();
        let g = lift_through(&f, &aug).unwrap();
        assert_eq!(g.then(&aug).unwrap(), f);
        assert!(GMorphism::new(g.src(), g.tgt(), g.mat().clone()).is_ok());
        assert_eq!(p.rank(), 2);
    }

    #[test]
    fn kernels_and_cokernels() {
        let m = Modulus::from_order(4).unwrap();
        let triv = GModule::trivial(c2(), m, 1);
        let (_, eps) = free_cover(&triv);
        let (k, inc) = kernel_module(&eps).unwrap();
        assert_eq!(k.rank(), 1);
        assert!(k.check().is_ok());
        // augmentation ideal of Z/4[C2] is the sign character
        assert_eq!(k.act(1), &Mat::scalar(m, 1, 3));
        let (c, proj) = cokernel_module(&inc).unwrap();
        assert!(c.check().is_ok());
        assert!(inc.then(&proj).unwrap().is_zero());
        assert!(c.is_trivial_action());
    }
}
