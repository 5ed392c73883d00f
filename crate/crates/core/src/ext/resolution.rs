use crate::error::{Error, Result};
use crate::group::{free_map, kernel_module, FiniteGroup, GModule, GMorphism};
use crate::linalg::{Mat, Modulus, Solver};
use std::sync::{Arc, Mutex, OnceLock};

/// Hard cap on resolution length.
pub const MAX_RESOLUTION_LEN: usize = 12;

/// The syzygy data of a free-cover resolution at level n.
#[derive(Clone, Debug)]
pub struct Syzygy {
    /// Omega^n (Omega^0 is the resolved module).
    pub omega: GModule,
    /// Omega^n -> P_{n-1}, absent at n = 0.
    pub inc: Option<GMorphism>,
    /// P_n -> Omega^n.
    pub eps: GMorphism,
}

struct Level {
    term: GModule,
    // generator rows of d_n: P_n -> P_{n-1} (n >= 1) or of the augmentation P_0 -> M
    dgen: Mat,
    syz: Option<Syzygy>,
    full: OnceLock<Mat>,
    solver: OnceLock<Solver>,
}

impl Level {
    fn new(term: GModule, dgen: Mat, syz: Option<Syzygy>) -> Level {
        Level { term, dgen, syz, full: OnceLock::new(), solver: OnceLock::new() }
    }
}

enum Source {
    FreeCover,
    Reduced(Arc<ResCore>, u32),
    Bar,
    Tensor(Arc<ResCore>, GModule),
}

struct ResCore {
    module: GModule,
    source: Source,
    levels: Mutex<Vec<Arc<Level>>>,
}

/// A resolution of a module by free Lambda-modules, Lambda = Z/l^r[G], split over Z/l^r.
/// Levels are computed on demand.
#[derive(Clone)]
pub struct Resolution {
    core: Arc<ResCore>,
    offset: usize,
    module: GModule,
    derived: Arc<Derived>,
}

pub(crate) type ExtCache = Mutex<Vec<(GModule, usize, Arc<super::group::PresData>)>>;

#[derive(Default)]
struct Derived {
    head: OnceLock<Arc<Level>>,
    reduced: Mutex<Vec<(u32, Resolution)>>,
    tails: Mutex<Vec<(usize, Resolution)>>,
    ext: ExtCache,
}

impl std::fmt::Debug for Resolution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Resolution(offset {}, {:?})", self.offset, self.module)
    }
}

/// Basis rows of `omega` (standard vectors) that generate it as a Lambda-module, chosen greedily.
fn lambda_generators(omega: &GModule) -> Mat {
    let m = omega.modulus();
    let d = omega.rank();
    let n = omega.group().order();
    let mut span_rows: Vec<Vec<u32>> = Vec::new();
    let mut gens: Vec<Vec<u32>> = Vec::new();
    let mut solver: Option<Solver> = None;
    for c in 0..d {
        let mut e = vec![0u32; d];
        e[c] = 1;
        let inside = solver.as_ref().is_some_and(|s| s.contains(&e));
        if !inside {
            for h in 0..n {
                span_rows.push(omega.act(h).row(c).to_vec());
            }
            gens.push(e);
            solver = Some(Solver::new(&Mat::from_vecs(m, d, &span_rows)));
        }
    }
    Mat::from_vecs(m, d, &gens)
}

fn bar_tuples(group: &FiniteGroup, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for t in &out {
            for g in 1..group.order() {
                let mut u = t.clone();
                u.push(g);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

fn tuple_index(t: &[usize], base: usize) -> usize {
    t.iter().fold(0, |acc, &g| acc * base + (g - 1))
}

impl ResCore {
    fn ensure(&self, upto: usize) -> Result<Vec<Arc<Level>>> {
        if upto > MAX_RESOLUTION_LEN {
            return Err(Error::Cap(format!("resolution length {upto} exceeds {MAX_RESOLUTION_LEN}")));
        }
        let mut levels = self.levels.lock().unwrap();
        while levels.len() <= upto {
            let n = levels.len();
            let lvl = self.compute(n, &levels)?;
            levels.push(Arc::new(lvl));
        }
        Ok(levels[..=upto].to_vec())
    }

    fn compute(&self, n: usize, prev: &[Arc<Level>]) -> Result<Level> {
        let group = self.module.group().clone();
        let m = self.module.modulus();
        match &self.source {
            Source::FreeCover => {
                let (omega, inc) = if n == 0 {
                    (self.module.clone(), None)
                } else {
                    let syz = prev[n - 1].syz.as_ref().unwrap();
                    let (k, inc) = kernel_module(&syz.eps)?;
                    (k, Some(inc))
                };
                let gens = lambda_generators(&omega);
                let term = GModule::free(group, m, gens.rows());
                let eps = free_map(&term, &omega, &gens);
                let dgen = match &inc {
                    None => gens,
                    Some(i) => gens.mul(i.mat()),
                };
                Ok(Level::new(term, dgen, Some(Syzygy { omega, inc, eps })))
            }
            Source::Reduced(parent, c) => {
                let pl = parent.ensure(n)?.pop().unwrap();
                let t = m;
                let syz = match &pl.syz {
                    None => None,
                    Some(s) => Some(Syzygy {
                        omega: s.omega.reduce(*c)?,
                        inc: s.inc.as_ref().map(|i| i.reduce(*c)).transpose()?,
                        eps: s.eps.reduce(*c)?,
                    }),
                };
                Ok(Level::new(pl.term.reduce(*c)?, pl.dgen.reduce_to(t), syz))
            }
            Source::Bar => {
                let g = group.order();
                let base = g - 1;
                let k = base.pow(n as u32);
                let term = GModule::free(group.clone(), m, k);
                if n == 0 {
                    return Ok(Level::new(term, Mat::identity(m, 1), None));
                }
                let width = base.pow(n as u32 - 1) * g;
                let mut dgen = Mat::zeros(m, k, width);
                for t in bar_tuples(&group, n) {
                    let row = tuple_index(&t, base);
                    let mut add = |tup: &[usize], h: usize, c: i64| {
                        let col = tuple_index(tup, base) * g + h;
                        let x = dgen.get(row, col) as i64 + c;
                        dgen.set(row, col, m.reduce(x));
                    };
                    add(&t[..n - 1], t[n - 1], 1);
                    for i in 0..n - 1 {
                        let prod = group.mul(t[i], t[i + 1]);
                        if prod != 0 {
                            let mut u = t[..i].to_vec();
                            u.push(prod);
                            u.extend_from_slice(&t[i + 2..]);
                            let sign = if (n - 1 - i).is_multiple_of(2) { 1 } else { -1 };
                            add(&u, 0, sign);
                        }
                    }
                    add(&t[1..], 0, if n.is_multiple_of(2) { 1 } else { -1 });
                }
                Ok(Level::new(term, dgen, None))
            }
            Source::Tensor(tcore, x) => {
                let tl = tcore.ensure(n)?.pop().unwrap();
                let d = x.rank();
                let g = group.order();
                let kt = tl.term.free_gens().unwrap();
                let term = GModule::free(group.clone(), m, kt * d);
                if n == 0 {
                    // augmentation: e_j (x) x_c -> eps_T(e_j) x_c
                    let mut dgen = Mat::zeros(m, kt * d, d);
                    for j in 0..kt {
                        for c in 0..d {
                            dgen.set(j * d + c, c, tl.dgen.get(j, 0));
                        }
                    }
                    return Ok(Level::new(term, dgen, None));
                }
                let kprev = tl.dgen.cols() / g;
                let mut dgen = Mat::zeros(m, kt * d, kprev * d * g);
                let invs: Vec<&Mat> = (0..g).map(|h| x.act(group.inv(h))).collect();
                for j in 0..kt {
                    for i in 0..kprev {
                        for h in 0..g {
                            let lam = tl.dgen.get(j, i * g + h);
                            if lam == 0 {
                                continue;
                            }
                            let r = invs[h];
                            for c in 0..d {
                                for c2 in 0..d {
                                    let v = r.get(c, c2);
                                    if v != 0 {
                                        let col = (i * d + c2) * g + h;
                                        let old = dgen.get(j * d + c, col);
                                        dgen.set(j * d + c, col, m.add(old, m.mul(lam, v)));
                                    }
                                }
                            }
                        }
                    }
                }
                Ok(Level::new(term, dgen, None))
            }
        }
    }
}

impl Resolution {
    fn from_core(core: ResCore) -> Resolution {
        let module = core.module.clone();
        Resolution { core: Arc::new(core), offset: 0, module, derived: Arc::default() }
    }

    /// Resolution by free covers on Lambda-generating sets of successive syzygies.
    pub fn free_cover(x: &GModule) -> Resolution {
        Resolution::from_core(ResCore { module: x.clone(), source: Source::FreeCover, levels: Mutex::new(vec![]) })
    }

    /// Normalized bar resolution of the trivial module Z/l^r.
    pub fn bar(group: Arc<FiniteGroup>, m: Modulus) -> Resolution {
        let triv = GModule::trivial(group, m, 1);
        Resolution::from_core(ResCore { module: triv, source: Source::Bar, levels: Mutex::new(vec![]) })
    }

    /// T (x) X with diagonal action, a resolution of X when T resolves the trivial module.
    pub fn tensor(t: &Resolution, x: &GModule) -> Result<Resolution> {
        if t.offset != 0 || t.module.rank() != 1 || !t.module.is_trivial_action() {
            return Err(Error::Precondition("tensor needs a resolution of the trivial module".into()));
        }
        Ok(Resolution::from_core(ResCore {
            module: x.clone(),
            source: Source::Tensor(t.core.clone(), x.clone()),
            levels: Mutex::new(vec![]),
        }))
    }

    /// Reduction mod l^c; the result resolves the reduced module. Repeated calls
    /// return the same resolution, so classes over it stay comparable.
    pub fn reduce(&self, c: u32) -> Result<Resolution> {
        if c == self.modulus().r() {
            return Ok(self.clone());
        }
        let mut cache = self.derived.reduced.lock().unwrap();
        if let Some((_, r)) = cache.iter().find(|(k, _)| *k == c) {
            return Ok(r.clone());
        }
        let r = self.reduce_fresh(c)?;
        cache.push((c, r.clone()));
        Ok(r)
    }

    fn reduce_fresh(&self, c: u32) -> Result<Resolution> {
        let module = self.core.module.reduce(c)?;
        let core = Arc::new(ResCore {
            module: module.clone(),
            source: Source::Reduced(self.core.clone(), c),
            levels: Mutex::new(vec![]),
        });
        let tail_module = if self.offset == 0 { module } else { self.module.reduce(c)? };
        Ok(Resolution { core, offset: self.offset, module: tail_module, derived: Arc::default() })
    }

    /// The shifted resolution of Omega^n (free-cover resolutions only).
    pub fn tail(&self, n: usize) -> Result<Resolution> {
        if n == 0 {
            return Ok(self.clone());
        }
        let mut cache = self.derived.tails.lock().unwrap();
        if let Some((_, r)) = cache.iter().find(|(k, _)| *k == n) {
            return Ok(r.clone());
        }
        let syz = self.syzygy(n)?;
        let r = Resolution { core: self.core.clone(), offset: self.offset + n, module: syz.omega, derived: Arc::default() };
        cache.push((n, r.clone()));
        Ok(r)
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }
    pub fn modulus(&self) -> Modulus {
        self.module.modulus()
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.module.group()
    }

    pub(crate) fn ext_cache(&self) -> &ExtCache {
        &self.derived.ext
    }

    pub fn same_as(&self, other: &Resolution) -> bool {
        Arc::ptr_eq(&self.core, &other.core) && self.offset == other.offset
    }

    fn level(&self, n: usize) -> Result<Arc<Level>> {
        if n == 0 && self.offset > 0 {
            if let Some(l) = self.derived.head.get() {
                return Ok(l.clone());
            }
            let base = self.core.ensure(self.offset)?.pop().unwrap();
            let syz = base.syz.clone().unwrap();
            let k = base.term.free_gens().unwrap();
            let gcount = base.term.group().order();
            let rows: Vec<usize> = (0..k).map(|j| j * gcount).collect();
            let dgen = syz.eps.mat().select_rows(&rows);
            let lvl = Arc::new(Level::new(
                base.term.clone(),
                dgen,
                Some(Syzygy { omega: syz.omega.clone(), inc: None, eps: syz.eps.clone() }),
            ));
            let _ = self.derived.head.set(lvl);
            return Ok(self.derived.head.get().unwrap().clone());
        }
        Ok(self.core.ensure(self.offset + n)?.pop().unwrap())
    }

    /// P_n.
    pub fn term(&self, n: usize) -> Result<GModule> {
        Ok(self.level(n)?.term.clone())
    }

    /// Number of free generators of P_n.
    pub fn rank(&self, n: usize) -> Result<usize> {
        Ok(self.level(n)?.term.free_gens().unwrap())
    }

    /// Generator rows of d_n (n >= 1) or of the augmentation (n = 0).
    pub fn dgen(&self, n: usize) -> Result<Mat> {
        Ok(self.level(n)?.dgen.clone())
    }

    /// Target of d_n: P_{n-1}, or the module for n = 0.
    pub fn dtarget(&self, n: usize) -> Result<GModule> {
        if n == 0 {
            Ok(self.module.clone())
        } else {
            self.term(n - 1)
        }
    }

    /// Full matrix of d_n (or of the augmentation).
    pub fn dfull(&self, n: usize) -> Result<Mat> {
        let lvl = self.level(n)?;
        if let Some(f) = lvl.full.get() {
            return Ok(f.clone());
        }
        let tgt = self.dtarget(n)?;
        let f = free_map(&lvl.term, &tgt, &lvl.dgen).mat().clone();
        let _ = lvl.full.set(f);
        Ok(lvl.full.get().unwrap().clone())
    }

    /// Solves x d_n = v for x in P_n.
    pub fn solve_d(&self, n: usize, v: &[u32]) -> Result<Option<Vec<u32>>> {
        let lvl = self.level(n)?;
        if lvl.solver.get().is_none() {
            let f = self.dfull(n)?;
            let _ = lvl.solver.set(Solver::new(&f));
        }
        Ok(lvl.solver.get().unwrap().solve(v))
    }

    /// Omega^n with its structure maps (free-cover resolutions only).
    pub fn syzygy(&self, n: usize) -> Result<Syzygy> {
        self.level(n)?
            .syz
            .clone()
            .ok_or_else(|| Error::Precondition("this resolution does not record syzygies".into()))
    }

    pub fn has_syzygies(&self) -> bool {
        matches!(self.core.source, Source::FreeCover)
            || matches!(&self.core.source, Source::Reduced(p, _) if matches!(p.source, Source::FreeCover))
    }

    /// The G-map P_n -> N given by values on generators.
    pub fn cochain_map(&self, n: usize, target: &GModule, values: &Mat) -> Result<GMorphism> {
        Ok(free_map(&self.term(n)?, target, values))
    }

    /// Lifts a map P_j(self) -> other.module (generator rows) to a chain map
    /// Phi_k: P_{j+k}(self) -> P_k(other), k = 0..=upto. Returns generator rows.
    pub fn lift_chain(&self, j: usize, f0: &Mat, other: &Resolution, upto: usize) -> Result<Vec<Mat>> {
        let m = self.modulus();
        let mut out: Vec<Mat> = Vec::with_capacity(upto + 1);
        let mut rows = Vec::with_capacity(f0.rows());
        for a in 0..f0.rows() {
            let x = other
                .solve_d(0, f0.row(a))?
                .ok_or_else(|| Error::NoSolution("augmentation is not surjective".into()))?;
            rows.push(x);
        }
        out.push(Mat::from_vecs(m, other.term(0)?.rank(), &rows));
        for k in 1..=upto {
            let prev_full = free_map(&self.term(j + k - 1)?, &other.term(k - 1)?, &out[k - 1]);
            let d = self.dgen(j + k)?;
            let target = d.mul(prev_full.mat());
            let mut rows = Vec::with_capacity(target.rows());
            for a in 0..target.rows() {
                let x = other
                    .solve_d(k, target.row(a))?
                    .ok_or_else(|| Error::NoSolution("chain map does not lift".into()))?;
                rows.push(x);
            }
            out.push(Mat::from_vecs(m, other.term(k)?.rank(), &rows));
        }
        Ok(out)
    }
}

/// Free-cover resolutions keyed by module, so that repeated requests for the
/// same module give comparable Ext classes.
#[derive(Default)]
pub struct ResolutionCache {
    entries: Mutex<Vec<(GModule, Resolution)>>,
}

impl ResolutionCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, x: &GModule) -> Resolution {
        let mut e = self.entries.lock().unwrap();
        if let Some((_, r)) = e.iter().find(|(k, _)| k == x) {
            return r.clone();
        }
        let r = Resolution::free_cover(x);
        e.push((x.clone(), r.clone()));
        r
    }

    /// Registers a resolution for its module unless one is already present.
    pub fn insert(&self, r: &Resolution) {
        let mut e = self.entries.lock().unwrap();
        if !e.iter().any(|(k, _)| k == r.module()) {
            e.push((r.module().clone(), r.clone()));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::kernel;

    fn exact_at(res: &Resolution, n: usize) -> bool {
        // image of d_{n+1} equals kernel of d_n as Z/l^r-spans
        let dn = res.dfull(n).unwrap();
        let dn1 = res.dfull(n + 1).unwrap();
        crate::linalg::span_eq(&kernel(&dn), &dn1) && dn1.mul(&dn).is_zero()
    }

    #[test]
    fn free_cover_resolution_is_exact() {
        let m = Modulus::from_order(4).unwrap();
        for g in [FiniteGroup::cyclic(2), FiniteGroup::klein(), FiniteGroup::symmetric3()] {
            let g = Arc::new(g);
            let x = GModule::trivial(g.clone(), m, 1);
            let r = Resolution::free_cover(&x);
            for n in 0..3 {
                assert!(exact_at(&r, n));
            }
            assert!(r.dfull(0).unwrap().rows() > 0);
            assert!(crate::linalg::is_split_epi(&r.dfull(0).unwrap()));
        }
    }

    #[test]
    fn trivial_module_of_c2_has_rank_one_terms() {
        let m = Modulus::from_order(2).unwrap();
        let x = GModule::trivial(Arc::new(FiniteGroup::cyclic(2)), m, 1);
        let r = Resolution::free_cover(&x);
        for n in 0..5 {
            assert_eq!(r.rank(n).unwrap(), 1);
        }
        let syz = r.syzygy(1).unwrap();
        assert!(syz.omega.is_trivial_action());
    }

    #[test]
    fn bar_and_tensor_are_exact() {
        let m = Modulus::from_order(4).unwrap();
        for g in [FiniteGroup::cyclic(3), FiniteGroup::klein()] {
            let g = Arc::new(g);
            let b = Resolution::bar(g.clone(), m);
            for n in 0..3 {
                assert!(exact_at(&b, n), "bar at {n}");
            }
            let chi = GModule::regular(g.clone(), m);
            let t = Resolution::tensor(&b, &chi).unwrap();
            for n in 0..2 {
                assert!(exact_at(&t, n), "tensor at {n}");
            }
        }
    }

    #[test]
    fn tails_and_reductions() {
        let m = Modulus::from_order(8).unwrap();
        let g = Arc::new(FiniteGroup::cyclic(4));
        let x = GModule::trivial(g, m, 1);
        let r = Resolution::free_cover(&x);
        let t = r.tail(2).unwrap();
        assert_eq!(t.module(), &r.syzygy(2).unwrap().omega);
        assert!(exact_at(&t, 0));
        let red = r.reduce(2).unwrap();
        for n in 0..3 {
            assert!(exact_at(&red, n));
        }
        let redt = t.reduce(1).unwrap();
        assert!(exact_at(&redt, 0));
        assert_eq!(redt.module(), &t.module().reduce(1).unwrap());
    }
}
