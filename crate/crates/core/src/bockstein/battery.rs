use super::laws::{check_laws, LawReport};
use super::les::{assemble_les, ExactnessReport};
use super::maps::{d0, Bockstein};
use super::snake::{snake_oracle, OracleComparison};
use crate::error::Result;
use crate::gen::random_rank_two;
use crate::group::{hom_g, BocksteinSetup, FiniteGroup, GModule, GMorphism};
use crate::linalg::Mat;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Groups of the full battery.
pub const BATTERY_GROUPS: [&str; 7] = ["C2", "C3", "C4", "C2xC2", "S3", "D4", "Q8"];
/// Groups of the smoke subset.
pub const SMOKE_GROUPS: [&str; 2] = ["C2", "C3"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatteryCase {
    pub group: String,
    pub l: u32,
    pub big_r: u32,
    pub a: u32,
    pub b: u32,
}

impl BatteryCase {
    pub fn id(&self) -> String {
        format!("{}/l{}/R{}/a{}b{}", self.group, self.l, self.big_r, self.a, self.b)
    }

    pub fn setup(&self) -> Result<BocksteinSetup> {
        BocksteinSetup::new(self.l, self.big_r, self.a, self.b)
    }
}

/// Groups x l in {2,3} x (a,b) in {(1,1),(1,2),(2,1)} x R in {a+b, a+b+1}.
pub fn battery_cases(groups: &[&str]) -> Vec<BatteryCase> {
    let mut out = Vec::new();
    for g in groups {
        for l in [2, 3] {
            for (a, b) in [(1, 1), (1, 2), (2, 1)] {
                for big_r in [a + b, a + b + 1] {
                    out.push(BatteryCase { group: g.to_string(), l, big_r, a, b });
                }
            }
        }
    }
    out
}

/// Short name of a module of the pool.
pub fn module_label(x: &GModule, tag: &str) -> String {
    if tag != "char" {
        return tag.into();
    }
    let vals: Vec<String> = x.group().generators().iter().map(|&g| x.act(g).get(0, 0).to_string()).collect();
    format!("chi[{}]", vals.join(","))
}

/// Trivial, regular, the first order-l character (when one exists) and a seeded random rank-2 module.
pub fn module_pool(setup: &BocksteinSetup, group: &Arc<FiniteGroup>, seed: u64) -> Result<Vec<(String, GModule)>> {
    let m = setup.ambient();
    let mut pool = vec![
        ("triv".to_string(), GModule::trivial(group.clone(), m, 1)),
        ("reg".to_string(), GModule::regular(group.clone(), m)),
    ];
    if let Some(c) = GModule::order_l_characters(group.clone(), m).into_iter().next() {
        pool.push((module_label(&c, "char"), c));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.push(("rank2".to_string(), random_rank_two(group, m, &mut rng)?));
    Ok(pool)
}

/// All ordered pairs of the pool.
pub fn module_pairs(pool: &[(String, GModule)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..pool.len() {
        for j in 0..pool.len() {
            out.push((i, j));
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct PairReport {
    pub x: String,
    pub y: String,
    pub orders: Vec<Vec<u64>>,
    pub exactness: ExactnessReport,
    pub oracle: OracleComparison,
}

impl PairReport {
    pub fn ok(&self) -> bool {
        self.exactness.ok() && self.oracle.ok()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub id: String,
    pub case: BatteryCase,
    pub seed: u64,
    pub pairs: Vec<PairReport>,
    pub laws: Option<LawReport>,
}

impl CaseReport {
    pub fn ok(&self) -> bool {
        self.pairs.iter().all(|p| p.ok()) && self.laws.as_ref().is_none_or(|l| l.ok())
    }
    pub fn interior_checked(&self) -> usize {
        self.pairs.iter().map(|p| p.exactness.checks.len()).sum()
    }
}

/// Long sequence, oracle comparison and (when `triples > 0`) the law battery for one case.
pub fn run_case(case: &BatteryCase, nmax: usize, seed: u64, triples: usize) -> Result<CaseReport> {
    let setup = case.setup()?;
    let group = Arc::new(FiniteGroup::by_name(&case.group)?);
    let case_seed = seed ^ case.id().bytes().fold(0u64, |h, b| h.wrapping_mul(131).wrapping_add(b as u64));
    let pool = module_pool(&setup, &group, case_seed)?;
    let bs = Bockstein::new(setup);
    let mut pairs = Vec::new();
    for (i, j) in module_pairs(&pool) {
        let (x, y) = (&pool[i].1, &pool[j].1);
        let (les, exactness) = assemble_les(&bs, x, y, nmax)?;
        let (_, oracle) = snake_oracle(&bs, x, y, &les)?;
        pairs.push(PairReport {
            x: pool[i].0.clone(),
            y: pool[j].0.clone(),
            orders: les.terms.iter().map(|t| t.orders.clone()).collect(),
            exactness,
            oracle,
        });
    }
    let laws = if triples > 0 {
        let mods: Vec<GModule> = pool.iter().map(|(_, m)| m.clone()).collect();
        Some(check_laws(&bs, &mods, case_seed, triples)?)
    } else {
        None
    };
    Ok(CaseReport { id: case.id(), case: case.clone(), seed: case_seed, pairs, laws })
}

/// A non-liftable identity: X trivial, Y a character congruent to 1 mod s.
#[derive(Clone, Debug, Serialize)]
pub struct ControlReport {
    pub name: String,
    /// Number of G-maps X -> Y over Z/l^R inspected by the lift search.
    pub maps_searched: u64,
    pub lift_exists: bool,
    pub d0_coords: Vec<u32>,
    pub d0_nonzero: bool,
}

impl ControlReport {
    /// The obstruction is nonzero exactly when no lift exists.
    pub fn ok(&self) -> bool {
        self.d0_nonzero == !self.lift_exists
    }
}

/// Exhaustive search for a G-map X -> Y over the ambient ring reducing to q mod s,
/// and the value d0(q).
pub fn lift_control(name: &str, group: &str, l: u32, big_r: u32, chi: u32) -> Result<ControlReport> {
    let setup = BocksteinSetup::new(l, big_r, 1, big_r - 1)?;
    let g = Arc::new(FiniteGroup::by_name(group)?);
    let m = setup.ambient();
    let x = GModule::trivial(g.clone(), m, 1);
    let y = GModule::character(g, m, &[chi])?;
    let q = GMorphism::new(&setup.eta_s(&x)?, &setup.eta_s(&y)?, Mat::identity(setup.mod_s(), 1))?;
    let mut lift_exists = false;
    let mut searched = 0u64;
    for v in 0..m.n() {
        let f = Mat::from_data(m, 1, 1, vec![v]);
        if GMorphism::new(&x, &y, f.clone()).is_ok() {
            searched += 1;
            if f.reduce_to(setup.mod_s()) == *q.mat() {
                lift_exists = true;
            }
        }
    }
    debug_assert_eq!(searched as usize, hom_elements(&x, &y)?);
    let bs = Bockstein::new(setup);
    let d = d0(&setup, &q, &bs.ambient_res(&x)?, &y)?;
    Ok(ControlReport {
        name: name.into(),
        maps_searched: searched,
        lift_exists,
        d0_coords: d.coords().to_vec(),
        d0_nonzero: !d.is_zero(),
    })
}

fn hom_elements(x: &GModule, y: &GModule) -> Result<usize> {
    let h = hom_g(x, y)?;
    let m = x.modulus();
    let mut count = 0;
    for v in 0..m.n() {
        let row = vec![v];
        if crate::linalg::span_contains(&h, &Mat::from_data(m, 1, 1, row)) {
            count += 1;
        }
    }
    Ok(count)
}

/// The C3 over Z/9 and C2 over Z/4 non-liftable characters, plus a liftable control.
pub fn negative_controls() -> Result<Vec<ControlReport>> {
    Ok(vec![
        lift_control("C3 over Z/9, chi(g) = 4", "C3", 3, 2, 4)?,
        lift_control("C2 over Z/4, chi(g) = 3", "C2", 2, 2, 3)?,
        lift_control("C2 over Z/4, trivial (liftable)", "C2", 2, 2, 1)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn controls() {
        let reps = negative_controls().unwrap();
        assert!(reps[0].d0_nonzero && !reps[0].lift_exists);
        assert!(reps[1].d0_nonzero && !reps[1].lift_exists);
        assert_eq!(reps[1].maps_searched, 2);
        assert!(!reps[2].d0_nonzero && reps[2].lift_exists);
        assert!(reps.iter().all(|r| r.ok()));
    }

    #[test]
    fn smoke_case() {
        let case = &battery_cases(&["C2"])[0];
        let rep = run_case(case, 3, 0, 10).unwrap();
        assert!(rep.ok(), "{rep:?}");
        assert_eq!(rep.pairs.len(), 16);
    }
}
