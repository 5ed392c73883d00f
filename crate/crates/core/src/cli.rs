//! Batch driver: JSON case configurations, per-case verification records and the
//! versioned JSON report.

use crate::bockstein::{assemble_les, snake_oracle, Bockstein};
use crate::error::Error;
use crate::ext::{bar_orders, ext_group_capped, periodic_orders};
use crate::group::{group_from_generators, BocksteinSetup, FiniteGroup, GModule};
use crate::linalg::{Mat, Modulus};
use crate::mfred::run_mf_case;
use crate::props::{fz_wg, prop_a, secondary, three_by_three, PropReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::sync::Arc;

pub const REPORT_VERSION: u32 = 1;
/// Upper bounds accepted from configurations.
pub const MAX_DEGREE_CAP: usize = 6;
pub const MAX_PROP_CASES: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ext,
    Les,
    Mfred,
    Props,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GroupSpec {
    Named { name: String },
    Permutations { permutations: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ModuleSpec {
    Named { name: String },
    Character { character: Vec<i64> },
    /// One square matrix (list of rows) per group generator.
    Action { action: Vec<Vec<Vec<i64>>> },
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusSpec {
    pub l: u32,
    pub r: u32,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SetupSpec {
    pub l: u32,
    pub big_r: u32,
    pub a: u32,
    pub b: u32,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct CaseConfig {
    #[serde(default)]
    pub id: Option<String>,
    pub kind: Kind,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    /// Coefficients Z/l^r for `ext`.
    #[serde(default)]
    pub modulus: Option<ModulusSpec>,
    /// (l, R, a, b) for `les`.
    #[serde(default)]
    pub setup: Option<SetupSpec>,
    /// Prime p for `mfred`.
    #[serde(default)]
    pub field: Option<u32>,
    #[serde(default)]
    pub modules: Vec<ModuleSpec>,
    /// Ordered pairs of module indices; all pairs when absent.
    #[serde(default)]
    pub pairs: Option<Vec<[usize; 2]>>,
    #[serde(default)]
    pub max_degree: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Instances per battery for `props`.
    #[serde(default)]
    pub cases: Option<usize>,
    /// Random spans and short exact sequences for `mfred`.
    #[serde(default)]
    pub spans: Option<usize>,
    #[serde(default)]
    pub sequences: Option<usize>,
    /// Law triples for `les`.
    #[serde(default)]
    pub triples: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub version: Option<u32>,
    #[serde(default)]
    pub cases: Vec<CaseConfig>,
}

/// Command-line overrides applied to every case.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub max_degree: Option<usize>,
    pub cases: Option<usize>,
    pub timing: bool,
}

/// An input error with its location in the configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub location: String,
    pub message: String,
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationRecord {
    pub id: String,
    pub kind: Kind,
    pub seed: Option<u64>,
    pub ok: bool,
    pub assertions: Vec<Assertion>,
    pub data: Value,
    /// Wall time, recorded only when requested so that reports stay reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub cases: Vec<VerificationRecord>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.cases.iter().all(|c| c.ok)
    }
}

pub fn parse_config(text: &str, path: &str) -> Result<Config, InputError> {
    let cfg: Config = serde_json::from_str(text).map_err(|e| InputError {
        location: format!("{path}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    if let Some(v) = cfg.version {
        if v != REPORT_VERSION {
            return Err(InputError { location: format!("{path}: version"), message: format!("unsupported version {v}") });
        }
    }
    Ok(cfg)
}

/// A case whose inputs have been turned into validated objects.
enum Prepared {
    Ext { modules: Vec<GModule>, pairs: Vec<(usize, usize)>, nmax: usize },
    Les { setup: BocksteinSetup, modules: Vec<GModule>, pairs: Vec<(usize, usize)>, nmax: usize, triples: usize, seed: u64 },
    Mfred { group: String, p: u32, seed: u64, spans: usize, sequences: usize },
    Props { seed: u64, cases: usize },
}

fn input_err(loc: &str, e: impl std::fmt::Display) -> InputError {
    InputError { location: loc.to_string(), message: e.to_string() }
}

fn build_group(spec: &Option<GroupSpec>, loc: &str) -> Result<Arc<FiniteGroup>, InputError> {
    let loc = format!("{loc}.group");
    match spec {
        None => Err(input_err(&loc, "missing group")),
        Some(GroupSpec::Named { name }) => FiniteGroup::by_name(name).map(Arc::new).map_err(|e| input_err(&loc, e)),
        Some(GroupSpec::Permutations { permutations }) => {
            group_from_generators(permutations).map(Arc::new).map_err(|e| input_err(&loc, e))
        }
    }
}

fn build_module(group: &Arc<FiniteGroup>, m: Modulus, spec: &ModuleSpec, loc: &str) -> Result<GModule, InputError> {
    let r = match spec {
        ModuleSpec::Named { name } => match name.as_str() {
            "trivial" | "triv" => Ok(GModule::trivial(group.clone(), m, 1)),
            "regular" | "reg" => Ok(GModule::regular(group.clone(), m)),
            _ => Err(Error::Module(format!("unknown module name {name:?}"))),
        },
        ModuleSpec::Character { character } => {
            let vals: Vec<u32> = character.iter().map(|&v| m.reduce(v)).collect();
            GModule::character(group.clone(), m, &vals)
        }
        ModuleSpec::Action { action } => {
            let mats: Result<Vec<Mat>, Error> = action.iter().map(|rows| Mat::from_rows(m, rows)).collect();
            mats.and_then(|mats| {
                let rank = mats.first().map_or(0, |a| a.rows());
                GModule::from_generators(group.clone(), m, rank, &mats)
            })
        }
    };
    r.map_err(|e| input_err(loc, e))
}

fn build_pairs(pairs: &Option<Vec<[usize; 2]>>, n: usize, loc: &str) -> Result<Vec<(usize, usize)>, InputError> {
    match pairs {
        None => Ok((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect()),
        Some(ps) => ps
            .iter()
            .enumerate()
            .map(|(k, &[i, j])| {
                if i < n && j < n {
                    Ok((i, j))
                } else {
                    Err(input_err(&format!("{loc}.pairs[{k}]"), format!("index out of range for {n} modules")))
                }
            })
            .collect(),
    }
}

fn degree(case: &CaseConfig, ov: &Overrides, default: usize, loc: &str) -> Result<usize, InputError> {
    let n = ov.max_degree.or(case.max_degree).unwrap_or(default);
    if n > MAX_DEGREE_CAP {
        return Err(input_err(&format!("{loc}.max_degree"), format!("{n} exceeds the cap {MAX_DEGREE_CAP}")));
    }
    Ok(n)
}

fn prepare(case: &CaseConfig, ov: &Overrides, loc: &str) -> Result<Prepared, InputError> {
    let seed = ov.seed.or(case.seed).unwrap_or(0);
    match case.kind {
        Kind::Ext => {
            let g = build_group(&case.group, loc)?;
            let ms = case.modulus.ok_or_else(|| input_err(&format!("{loc}.modulus"), "missing modulus"))?;
            let m = Modulus::new(ms.l, ms.r).map_err(|e| input_err(&format!("{loc}.modulus"), e))?;
            let modules = modules(&g, m, &case.modules, loc)?;
            let pairs = build_pairs(&case.pairs, modules.len(), loc)?;
            Ok(Prepared::Ext { modules, pairs, nmax: degree(case, ov, 4, loc)? })
        }
        Kind::Les => {
            let g = build_group(&case.group, loc)?;
            let s = case.setup.ok_or_else(|| input_err(&format!("{loc}.setup"), "missing setup"))?;
            let setup = BocksteinSetup::new(s.l, s.big_r, s.a, s.b).map_err(|e| input_err(&format!("{loc}.setup"), e))?;
            let modules = modules(&g, setup.ambient(), &case.modules, loc)?;
            let pairs = build_pairs(&case.pairs, modules.len(), loc)?;
            let nmax = degree(case, ov, 3, loc)?;
            Ok(Prepared::Les { setup, modules, pairs, nmax, triples: case.triples.unwrap_or(0), seed })
        }
        Kind::Mfred => {
            let g = build_group(&case.group, loc)?;
            let p = case.field.ok_or_else(|| input_err(&format!("{loc}.field"), "missing field"))?;
            let name = match &case.group {
                Some(GroupSpec::Named { name }) => name.clone(),
                _ => return Err(input_err(&format!("{loc}.group"), "mfred cases take a named group")),
            };
            let f = Modulus::field(p).map_err(|e| input_err(&format!("{loc}.field"), e))?;
            crate::mfred::FilteredCategory::new(g, f).map_err(|e| input_err(&format!("{loc}.field"), e))?;
            Ok(Prepared::Mfred {
                group: name,
                p,
                seed,
                spans: case.spans.unwrap_or(50),
                sequences: case.sequences.unwrap_or(25),
            })
        }
        Kind::Props => {
            let cases = ov.cases.or(case.cases).unwrap_or(100);
            if cases > MAX_PROP_CASES {
                return Err(input_err(&format!("{loc}.cases"), format!("{cases} exceeds the cap {MAX_PROP_CASES}")));
            }
            Ok(Prepared::Props { seed, cases })
        }
    }
}

fn modules(g: &Arc<FiniteGroup>, m: Modulus, specs: &[ModuleSpec], loc: &str) -> Result<Vec<GModule>, InputError> {
    if specs.is_empty() {
        return Ok(vec![GModule::trivial(g.clone(), m, 1)]);
    }
    specs.iter().enumerate().map(|(i, s)| build_module(g, m, s, &format!("{loc}.modules[{i}]"))).collect()
}

fn assertion(name: impl Into<String>, ok: bool, witness: Option<Value>) -> Assertion {
    Assertion { name: name.into(), ok, witness }
}

fn error_record(id: String, kind: Kind, seed: Option<u64>, e: Error) -> VerificationRecord {
    VerificationRecord {
        id,
        kind,
        seed,
        ok: false,
        assertions: vec![assertion("computation", false, Some(json!(e.to_string())))],
        data: Value::Null,
        elapsed_ms: None,
    }
}

fn run_prepared(id: String, kind: Kind, p: Prepared) -> VerificationRecord {
    match p {
        Prepared::Ext { modules, pairs, nmax } => {
            let mut assertions = Vec::new();
            let mut data = Vec::new();
            for (i, j) in pairs {
                let (x, y) = (&modules[i], &modules[j]);
                let mut orders = Vec::new();
                for n in 0..=nmax {
                    match ext_group_capped(x, y, n, MAX_DEGREE_CAP) {
                        Ok(e) => orders.push(e.order()),
                        Err(e) => return error_record(id, kind, None, e),
                    }
                }
                let cyclic: Vec<Option<bool>> = (0..=nmax)
                    .map(|n| {
                        let o = match periodic_orders(x, y, n) {
                            Ok(o) => Some(o),
                            Err(_) if n <= 2 => bar_orders(x, y, n).ok(),
                            Err(_) => None,
                        };
                        o.map(|o| o.iter().product::<u64>() == orders[n])
                    })
                    .collect();
                let agree = cyclic.iter().all(|c| c.unwrap_or(true));
                assertions.push(assertion(
                    format!("pair ({i},{j}) periodic oracle"),
                    agree,
                    if agree { None } else { Some(json!(orders)) },
                ));
                data.push(json!({ "x": i, "y": j, "orders": orders }));
            }
            finish(id, kind, None, assertions, json!(data))
        }
        Prepared::Les { setup, modules, pairs, nmax, triples, seed } => {
            let bs = Bockstein::new(setup);
            let mut assertions = Vec::new();
            let mut data = Vec::new();
            for (i, j) in pairs {
                let (x, y) = (&modules[i], &modules[j]);
                let res = (|| {
                    let (les, exact) = assemble_les(&bs, x, y, nmax)?;
                    let (_, oracle) = snake_oracle(&bs, x, y, &les)?;
                    Ok::<_, Error>((les, exact, oracle))
                })();
                let (les, exact, oracle) = match res {
                    Ok(r) => r,
                    Err(e) => return error_record(id, kind, Some(seed), e),
                };
                let degenerate = les.terms.iter().all(|t| t.degree == 0 || t.orders.iter().all(|&o| o == 1));
                let failing: Vec<&crate::bockstein::TermCheck> = exact.checks.iter().filter(|c| !c.ok).collect();
                assertions.push(assertion(
                    format!("pair ({i},{j}) exact"),
                    exact.ok(),
                    if exact.ok() { None } else { Some(json!(failing)) },
                ));
                assertions.push(assertion(format!("pair ({i},{j}) snake oracle"), oracle.ok(), None));
                data.push(json!({
                    "x": i,
                    "y": j,
                    "terms": les.terms.iter().map(|t| json!({"label": t.label, "orders": t.orders})).collect::<Vec<_>>(),
                    "interior_checked": exact.checks.len(),
                    "degenerate": degenerate,
                    "delta_sign": oracle.delta_sign,
                }));
            }
            if triples > 0 {
                match crate::bockstein::check_laws(&bs, &modules, seed, triples) {
                    Ok(l) => {
                        assertions.push(assertion("equation laws", l.ok(), if l.ok() { None } else { Some(json!(l.failures)) }));
                        data.push(json!({ "laws": l }));
                    }
                    Err(e) => return error_record(id, kind, Some(seed), e),
                }
            }
            finish(id, kind, Some(seed), assertions, json!(data))
        }
        Prepared::Mfred { group, p, seed, spans, sequences } => match run_mf_case(&group, p, seed, spans, sequences) {
            Ok(r) => {
                let w = |f: &[String]| if f.is_empty() { None } else { Some(json!(f)) };
                let assertions = vec![
                    assertion("(i) gamma-images", r.gamma.ok(), None),
                    assertion("(ii) Ore pullback", r.spans.ok(), None),
                    assertion("(iii) exact structure", r.sequences.ok(), None),
                    assertion("(iv) six-term segment", r.segment.ok(), None),
                    assertion("(v) background independence", r.independence.ok(), w(&r.failures)),
                ];
                finish(id, kind, Some(seed), assertions, json!(r))
            }
            Err(e) => error_record(id, kind, Some(seed), e),
        },
        Prepared::Props { seed, cases } => {
            let reps: Vec<PropReport> = vec![fz_wg(seed, cases), three_by_three(seed, cases), secondary(seed, cases), prop_a(seed, cases)];
            let assertions = reps
                .iter()
                .map(|r| assertion(r.name.clone(), r.ok(), if r.ok() { None } else { Some(json!(r.failures)) }))
                .collect();
            finish(id, kind, Some(seed), assertions, json!(reps))
        }
    }
}

fn finish(id: String, kind: Kind, seed: Option<u64>, assertions: Vec<Assertion>, data: Value) -> VerificationRecord {
    let ok = assertions.iter().all(|a| a.ok);
    VerificationRecord { id, kind, seed, ok, assertions, data, elapsed_ms: None }
}

/// Validates every selected case, then runs them on the worker pool. Any input
/// error aborts before computation.
pub fn run_config(cfg: &Config, only: Option<Kind>, ov: &Overrides, path: &str) -> Result<Report, InputError> {
    let mut prepared = Vec::new();
    for (i, case) in cfg.cases.iter().enumerate() {
        if only.is_some_and(|k| k != case.kind) {
            continue;
        }
        let loc = format!("{path}: cases[{i}]");
        let id = case.id.clone().unwrap_or_else(|| format!("case{i}"));
        prepared.push((id, case.kind, prepare(case, ov, &loc)?));
    }
    let cases = prepared
        .into_par_iter()
        .map(|(id, kind, p)| {
            let start = std::time::Instant::now();
            let mut rec = run_prepared(id, kind, p);
            if ov.timing {
                rec.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            rec
        })
        .collect();
    Ok(Report { version: REPORT_VERSION, cases })
}

/// The configuration used by a subcommand when no file is given.
pub fn default_config(kind: Kind) -> Config {
    let named = |n: &str| Some(GroupSpec::Named { name: n.into() });
    let triv = || ModuleSpec::Named { name: "trivial".into() };
    let base = CaseConfig {
        id: None,
        kind,
        group: None,
        modulus: None,
        setup: None,
        field: None,
        modules: vec![],
        pairs: None,
        max_degree: None,
        seed: None,
        cases: None,
        spans: None,
        sequences: None,
        triples: None,
    };
    let cases = match kind {
        Kind::Ext => vec![CaseConfig {
            id: Some("C2 over Z/2, trivial".into()),
            group: named("C2"),
            modulus: Some(ModulusSpec { l: 2, r: 1 }),
            modules: vec![triv()],
            ..base
        }],
        Kind::Les => vec![CaseConfig {
            id: Some("trivial group, l=2, R=2, a=b=1".into()),
            group: named("1"),
            setup: Some(SetupSpec { l: 2, big_r: 2, a: 1, b: 1 }),
            modules: vec![triv()],
            ..base
        }],
        Kind::Mfred => crate::mfred::MF_CASES
            .iter()
            .map(|&(g, p)| CaseConfig {
                id: Some(format!("filtered {g} over F_{p}")),
                group: named(g),
                field: Some(p),
                ..base.clone()
            })
            .collect(),
        Kind::Props => vec![CaseConfig { id: Some("property batteries".into()), ..base }],
    };
    Config { version: Some(REPORT_VERSION), cases }
}

/// Text summary: one line per case and one per failing assertion.
pub fn summary(report: &Report) -> String {
    let mut out = String::new();
    for c in &report.cases {
        let passed = c.assertions.iter().filter(|a| a.ok).count();
        out.push_str(&format!(
            "{} [{:?}] {}: {}/{} assertions\n",
            if c.ok { "PASS" } else { "FAIL" },
            c.kind,
            c.id,
            passed,
            c.assertions.len()
        ));
        if let Some(ms) = c.elapsed_ms {
            out.push_str(&format!("  elapsed {ms} ms\n"));
        }
        if c.kind == Kind::Props {
            if let Some(rows) = c.data.as_array() {
                for r in rows {
                    out.push_str(&format!(
                        "  {}: {}/{} instances passed, {} nontrivial\n",
                        r["name"].as_str().unwrap_or(""),
                        r["passed"],
                        r["cases"],
                        r["nontrivial"]
                    ));
                }
            }
        }
        if c.kind == Kind::Ext {
            if let Some(rows) = c.data.as_array() {
                for r in rows {
                    out.push_str(&format!("  ({},{}) orders {}\n", r["x"], r["y"], r["orders"]));
                }
            }
        }
        if c.kind == Kind::Les {
            if let Some(rows) = c.data.as_array() {
                for r in rows.iter().filter(|r| r.get("x").is_some()) {
                    out.push_str(&format!(
                        "  ({},{}) interior checks {} three-term degeneration {}\n",
                        r["x"], r["y"], r["interior_checked"], r["degenerate"]
                    ));
                }
            }
        }
        for a in c.assertions.iter().filter(|a| !a.ok) {
            out.push_str(&format!("  failed: {}\n", a.name));
        }
    }
    let ok = report.cases.iter().filter(|c| c.ok).count();
    out.push_str(&format!("{}/{} cases passed\n", ok, report.cases.len()));
    out
}
