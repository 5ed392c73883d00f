//! Acceptance run: one PASS/FAIL line per criterion.

mod common;

use bockstein::bockstein::{battery_cases, negative_controls, run_case, CaseReport, BATTERY_GROUPS, SMOKE_GROUPS};
use bockstein::ext::{bar_orders, ext_group, periodic_orders};
use bockstein::gen::rank_one_modules;
use bockstein::group::FiniteGroup;
use bockstein::linalg::*;
use bockstein::mfred::mf_suite;
use bockstein::props::{fz_wg, prop_a, secondary, three_by_three};
use common::brute::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

const SPAN_CAP: usize = 4096;

struct Outcome {
    ok: bool,
    detail: String,
}

fn linalg_instance(m: Modulus, seed: u64) -> Result<[bool; 2], String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let a = random_mat(&mut rng, m, r, c);
    let h = howell_form(&a);
    if howell_form(&h) != h {
        return Err(format!("seed {seed}: Howell form not idempotent"));
    }
    let u = random_unimodular(&mut rng, m, r);
    if howell_form(&u.mul(&a)) != h {
        return Err(format!("seed {seed}: Howell form changes under row operations"));
    }
    let mut exhaustive = [false; 2];
    if let Some(sa) = span_set(&a, SPAN_CAP) {
        exhaustive[0] = true;
        if span_set(&h, SPAN_CAP).as_ref() != Some(&sa) {
            return Err(format!("seed {seed}: Howell form changes the span"));
        }
    }
    let k = kernel(&a);
    if !k.mul(&a).is_zero() {
        return Err(format!("seed {seed}: kernel rows do not vanish"));
    }
    if (m.n() as usize).pow(r as u32) <= SPAN_CAP {
        let ks = span_set(&k, SPAN_CAP).unwrap();
        let zeros = all_vectors(m, r).into_iter().filter(|x| a.apply(x).iter().all(|&y| y == 0)).count();
        if ks.len() != zeros {
            return Err(format!("seed {seed}: kernel has {} elements, enumeration finds {zeros}", ks.len()));
        }
    }
    // retraction R with A R = I exists iff every unit vector is in the row span of A^T
    let mono = is_split_mono(&a);
    match retraction(&a) {
        Some(rt) if a.mul(&rt) != Mat::identity(m, r) => return Err(format!("seed {seed}: bad retraction")),
        x if x.is_some() != mono => return Err(format!("seed {seed}: split-mono test disagrees with retraction")),
        _ => {}
    }
    if let Some(e) = unit_vectors_in_span(&a.transpose(), SPAN_CAP) {
        exhaustive[1] = true;
        if e != mono {
            return Err(format!("seed {seed}: split mono {mono}, exhaustive retraction search {e}"));
        }
    }
    let epi = is_split_epi(&a);
    match section(&a) {
        Some(s) if s.mul(&a) != Mat::identity(m, c) => return Err(format!("seed {seed}: bad section")),
        x if x.is_some() != epi => return Err(format!("seed {seed}: split-epi test disagrees with section")),
        _ => {}
    }
    if let Some(e) = unit_vectors_in_span(&a, SPAN_CAP) {
        exhaustive[1] = true;
        if e != epi {
            return Err(format!("seed {seed}: split epi {epi}, exhaustive section search {e}"));
        }
    }
    Ok(exhaustive)
}

fn criterion_linalg() -> Outcome {
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for n in [4u64, 8, 9] {
        let m = Modulus::from_order(n).unwrap();
        let res: Vec<_> = (0..1000u64).into_par_iter().map(|s| linalg_instance(m, s * 31 + n)).collect();
        let (mut spans, mut splits) = (0, 0);
        for r in res {
            match r {
                Ok([a, b]) => {
                    spans += a as usize;
                    splits += b as usize;
                }
                Err(e) => failures.push(format!("Z/{n} {e}")),
            }
        }
        counts.push(format!("Z/{n}: 1000 matrices, {spans} exhaustive spans, {splits} exhaustive split checks"));
    }
    Outcome { ok: failures.is_empty(), detail: if failures.is_empty() { counts.join("; ") } else { failures.join("; ") } }
}

fn criterion_ext_oracle() -> Outcome {
    let mut failures = Vec::new();
    let mut compared = 0;
    for g in ["C2", "C3", "C4"] {
        let group = Arc::new(FiniteGroup::by_name(g).unwrap());
        for (l, r) in [(2, 1), (2, 2), (3, 1), (3, 2)] {
            let m = Modulus::new(l, r).unwrap();
            let pool = rank_one_modules(&group, m);
            for x in &pool {
                for y in &pool {
                    for n in 0..=4 {
                        let bar = bar_orders(x, y, n).unwrap();
                        let per = periodic_orders(x, y, n).unwrap();
                        let main = ext_group(x, y, n).unwrap().cyclic_orders();
                        compared += 1;
                        if bar != per || main != per {
                            failures.push(format!("{g} Z/{} n={n}: bar {bar:?} periodic {per:?} main {main:?}", m.n()));
                        }
                    }
                }
            }
        }
    }
    let c2 = Arc::new(FiniteGroup::by_name("C2").unwrap());
    let t = bockstein::group::GModule::trivial(c2, Modulus::from_order(4).unwrap(), 1);
    let orders: Vec<u64> = (0..=4).map(|n| ext_group(&t, &t, n).unwrap().order()).collect();
    if orders != [4, 2, 2, 2, 2] {
        failures.push(format!("C2 over Z/4 trivial: {orders:?}"));
    }
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{compared} (X, Y, n) triples agree; C2 over Z/4 trivial {orders:?}")
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_batteries() -> Outcome {
    let reps = [fz_wg(0, 100), three_by_three(0, 100), secondary(0, 100), prop_a(0, 100)];
    let ok = reps.iter().all(|r| r.ok());
    let detail = reps
        .iter()
        .map(|r| format!("{} {}/{} ({} nontrivial){}", r.name, r.passed, r.cases, r.nontrivial, r.failures.first().map(|f| format!(" first failure {f}")).unwrap_or_default()))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { ok, detail }
}

fn run_battery(groups: &[&str], triples: usize) -> (Vec<Result<CaseReport, String>>, Duration) {
    let start = Instant::now();
    let reps = battery_cases(groups)
        .par_iter()
        .map(|c| run_case(c, 3, 0, triples).map_err(|e| format!("{}: {e}", c.id())))
        .collect();
    (reps, start.elapsed())
}

fn criterion_les(full: &[Result<CaseReport, String>], full_time: Duration) -> Outcome {
    let (smoke, smoke_time) = run_battery(&SMOKE_GROUPS, 0);
    let mut failures = Vec::new();
    let (mut pairs, mut interior) = (0, 0);
    for r in full.iter().chain(&smoke) {
        match r {
            Ok(rep) => {
                pairs += rep.pairs.len();
                interior += rep.interior_checked();
                if rep.pairs.len() < 4 {
                    failures.push(format!("{}: only {} pairs", rep.id, rep.pairs.len()));
                }
                for p in rep.pairs.iter().filter(|p| !p.ok()) {
                    failures.push(format!("{} ({}, {})", rep.id, p.x, p.y));
                }
            }
            Err(e) => failures.push(e.clone()),
        }
    }
    let groups: std::collections::BTreeSet<&str> = full.iter().flatten().map(|r| r.case.group.as_str()).collect();
    if groups.len() != 7 {
        failures.push(format!("battery covers {} groups", groups.len()));
    }
    if full_time > Duration::from_secs(1800) || smoke_time > Duration::from_secs(60) {
        failures.push(format!("time budget exceeded: full {full_time:?}, smoke {smoke_time:?}"));
    }
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            format!(
                "{} cases, {pairs} pairs, {interior} interior terms exact and matching the snake oracle; full {:.1}s, smoke {:.1}s",
                full.len() + smoke.len(),
                full_time.as_secs_f64(),
                smoke_time.as_secs_f64()
            )
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_laws(full: &[Result<CaseReport, String>]) -> Outcome {
    let mut failures = Vec::new();
    let (mut checked, mut sign) = (0, 0);
    for rep in full.iter().flatten() {
        match &rep.laws {
            Some(l) => {
                for c in [&l.r_of_ambient, &l.r_multiplicative, &l.sigma_law, &l.delta_law, &l.independence, &l.sign_probe] {
                    checked += c.checked;
                    sign += c.sign_sensitive;
                }
                if !l.ok() || l.triples != 50 {
                    failures.push(format!("{}: {:?}", rep.id, l.failures.first()));
                }
            }
            None => failures.push(format!("{}: laws not run", rep.id)),
        }
    }
    if full.iter().any(|r| r.is_err()) {
        failures.push("battery case errored".into());
    }
    if sign == 0 {
        failures.push("no instance distinguishes the sign".into());
    }
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{checked} law instances hold, {sign} of them fail without the (-1)^i sign")
        } else {
            failures.join("; ")
        },
    }
}

fn criterion_mfred() -> Outcome {
    let start = Instant::now();
    let reps = mf_suite(0);
    let elapsed = start.elapsed();
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    for r in &reps {
        match r {
            Ok(c) if c.ok() => parts.push(format!(
                "{}/F_{}: segment {}/{}, independence {}/{}",
                c.group, c.p, c.segment.passed, c.segment.run, c.independence.passed, c.independence.run
            )),
            Ok(c) => failures.push(format!("{}/F_{}: {:?}", c.group, c.p, c.failures)),
            Err(e) => failures.push(e.to_string()),
        }
    }
    if elapsed > Duration::from_secs(900) {
        failures.push(format!("took {elapsed:?}"));
    }
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() { format!("{} in {:.1}s", parts.join("; "), elapsed.as_secs_f64()) } else { failures.join("; ") },
    }
}

fn criterion_controls() -> Outcome {
    let mut failures = Vec::new();
    let mut parts = Vec::new();
    match negative_controls() {
        Ok(reps) => {
            for r in reps {
                if !r.ok() {
                    failures.push(format!("{}: lift {} d0 {:?}", r.name, r.lift_exists, r.d0_coords));
                }
                parts.push(format!("{}: d0 nonzero {}", r.name, r.d0_nonzero));
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    let dir = std::env::temp_dir().join(format!("bockstein-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let corrupted = [
        ("non-multiplicative action", r#"{"cases":[{"kind":"ext","group":{"name":"C2"},"modulus":{"l":2,"r":2},"modules":[{"action":[[[0,1],[1,1]]]}]}]}"#),
        ("wrong generator count", r#"{"cases":[{"kind":"ext","group":{"name":"C2"},"modulus":{"l":2,"r":1},"modules":[{"action":[[[1]],[[1]]]}]}]}"#),
        ("truncated file", r#"{"cases":[{"kind":"ext","#),
        ("unknown field", r#"{"cases":[{"kind":"ext","grup":{"name":"C2"}}]}"#),
    ];
    for (name, text) in corrupted {
        let path = dir.join("case.json");
        std::fs::write(&path, text).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_bockstein")).args(["run", "--config"]).arg(&path).output().unwrap();
        if out.status.code() != Some(2) {
            failures.push(format!("{name}: exit {:?}", out.status.code()));
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    Outcome {
        ok: failures.is_empty(),
        detail: if failures.is_empty() {
            format!("{}; {} corrupted configs exit 2", parts.join("; "), corrupted.len())
        } else {
            failures.join("; ")
        },
    }
}

fn main() {
    let (full, full_time) = run_battery(&BATTERY_GROUPS, 50);
    let results = [
        ("1 linear algebra kernel", criterion_linalg()),
        ("2 Ext oracle cross-check", criterion_ext_oracle()),
        ("3 lemma batteries", criterion_batteries()),
        ("4 Bockstein sequence exactness", criterion_les(&full, full_time)),
        ("5 equation laws", criterion_laws(&full)),
        ("6 filtered reduction suite", criterion_mfred()),
        ("7 negative controls", criterion_controls()),
    ];
    let mut all = true;
    for (name, o) in &results {
        all &= o.ok;
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
