//! The acceptance battery and the brute-force oracles it is checked against.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::cohomology::{h0, h1, h2, split_extension};
use crate::embedding::{
    cross_check_routes, decide_pprime_profinite, decide_strong_solvability, hom_count, EmbeddingProblem, PprimeData,
};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{
    alternating4, automorphisms, cyclic, dihedral8, direct_product, elementary_abelian, frattini_of_p_group, klein4,
    normal_closure, quaternion8, quotient_group, semidirect_product, symmetric, Automorphism, ExtensionData,
    FiniteGroup,
};
use crate::hasse_witt::{clifford_bijection, common_splitting_field, transfer_delta_over, CoverDatum};
use crate::matrix::FqMatrix;
use crate::modrep::{
    are_isomorphic, composition_factors, decompose_over_extension, inflate, rational_classes, simple_modules, GModule,
};
use crate::projectives::{projective_table, verify_fixed_part_of_projectives};
use crate::settings::Settings;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} {:<28} {}  ({} cases, {} skipped)",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.cases,
            self.skipped
        )
    }
}

struct Tally {
    cases: usize,
    skipped: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { cases: 0, skipped: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(label());
        }
    }

    fn error(&mut self, label: &str, e: &Error) {
        self.cases += 1;
        self.failures.push(format!("{label}: {e}"));
    }

    fn finish(self, id: usize, name: &'static str) -> CriterionReport {
        CriterionReport {
            id,
            name,
            passed: self.failures.is_empty() && self.cases > 0,
            cases: self.cases,
            skipped: self.skipped,
            failures: self.failures,
        }
    }
}

pub const CRITERIA: [&str; 9] = [
    "genus bookkeeping",
    "transfer consistency",
    "gap",
    "trivial-group specialization",
    "route equivalence",
    "cohomology oracle",
    "MeatAxe oracle",
    "fixed part of projectives",
    "anomaly freedom",
];

pub fn run_criterion(id: usize, settings: &Settings) -> CriterionReport {
    let name = CRITERIA[id - 1];
    let tally = match id {
        1 => genus_bookkeeping(settings),
        2 => transfer_consistency(settings),
        3 => gap(settings),
        4 => trivial_group_specialization(settings),
        5 => route_equivalence(settings),
        6 => cohomology_oracle(settings),
        7 => meataxe_oracle(settings),
        8 => fixed_parts(settings),
        _ => anomaly_freedom(settings),
    };
    tally.finish(id, name)
}

pub fn run_all(settings: &Settings) -> Vec<CriterionReport> {
    (1..=9).map(|i| run_criterion(i, settings)).collect()
}

// ---------------------------------------------------------------- battery

pub fn battery_groups() -> Vec<FiniteGroup> {
    vec![cyclic(2), cyclic(3), cyclic(4), klein4(), symmetric(3).unwrap(), alternating4()]
}

/// `G → G/N` for the first normal subgroup N of the given order that is
/// the normal closure of one element.
fn quotient_by_order(g: &FiniteGroup, order: usize) -> Option<ExtensionData> {
    let n = (0..g.order()).map(|x| normal_closure(g, &[x])).find(|n| n.order() == order)?;
    let (_, proj) = quotient_group(g, &n).ok()?;
    ExtensionData::from_epimorphism(proj).ok()
}

/// Extensions with p-group kernel: `(label, extension, p)`.
pub fn extension_battery() -> Vec<(String, ExtensionData, u32)> {
    let mut out = Vec::new();
    for p in [2u32, 3] {
        let cp = cyclic(p as usize);
        let cp2 = cyclic((p * p) as usize);
        out.push((format!("C{p} -> 1"), ExtensionData::over_trivial(&cp), p));
        out.push((format!("C{} -> 1", p * p), ExtensionData::over_trivial(&cp2), p));
        out.push((format!("C{} -> C{p}", p * p), quotient_by_order(&cp2, p as usize).unwrap(), p));
        let e2 = elementary_abelian(p as usize, 2);
        out.push((format!("C{p}^2 -> C{p}"), quotient_by_order(&e2, p as usize).unwrap(), p));
    }
    let c6 = direct_product(&cyclic(2), &cyclic(3));
    out.push(("C2xC3 -> C3".into(), quotient_by_order(&c6, 2).unwrap(), 2));
    out.push(("C2xC3 -> C2".into(), quotient_by_order(&c6, 3).unwrap(), 3));
    out.push(("A4 -> C3".into(), quotient_by_order(&alternating4(), 4).unwrap(), 2));
    out.push(("S3 -> C2".into(), quotient_by_order(&symmetric(3).unwrap(), 3).unwrap(), 3));
    out.push(("S4 -> S3".into(), quotient_by_order(&symmetric(4).unwrap(), 4).unwrap(), 2));
    out.push(("D4 -> V4".into(), quotient_by_order(&dihedral8(), 2).unwrap(), 2));
    out.push(("Q8 -> V4".into(), quotient_by_order(&quaternion8(), 2).unwrap(), 2));
    out.push(("D4 -> 1".into(), ExtensionData::over_trivial(&dihedral8()), 2));
    out.push(("S3 -> S3".into(), ExtensionData::identity(&symmetric(3).unwrap()), 3));
    out
}

/// Split extensions of H by each of its F_p-simple modules.
pub fn gap_battery(settings: &Settings) -> Result<Vec<(String, ExtensionData, GModule, u32)>> {
    let bases: Vec<(FiniteGroup, u32)> = vec![
        (FiniteGroup::trivial(), 2),
        (FiniteGroup::trivial(), 3),
        (cyclic(2), 2),
        (cyclic(2), 3),
        (cyclic(3), 2),
        (cyclic(4), 3),
        (klein4(), 3),
        (symmetric(3).unwrap(), 2),
        (symmetric(3).unwrap(), 3),
        (cyclic(5), 2),
    ];
    let mut out = Vec::new();
    for (h, p) in bases {
        let fp = Field::prime(p)?;
        for (i, m) in simple_modules(&h, &fp, settings)?.iter().enumerate() {
            let ext = split_extension(m, settings.group_cap)?;
            out.push((format!("{h:?} by F_{p}-simple {i} (dim {})", m.dim()), ext, m.clone(), p));
        }
    }
    Ok(out)
}

fn p_groups(p: u32) -> Vec<(String, FiniteGroup)> {
    let p_us = p as usize;
    let mut v = vec![
        (format!("C{p}"), cyclic(p_us)),
        (format!("C{}", p * p), cyclic(p_us * p_us)),
        (format!("C{p}^2"), elementary_abelian(p_us, 2)),
    ];
    if p == 2 {
        v.push(("D4".into(), dihedral8()));
        v.push(("Q8".into(), quaternion8()));
    }
    v
}

fn compose(a: &Automorphism, b: &Automorphism) -> Automorphism {
    b.iter().map(|&x| a[x]).collect()
}

/// Automorphisms of order dividing n.
fn actions_of_cyclic(pg: &FiniteGroup, n: usize) -> Vec<Automorphism> {
    let id: Automorphism = (0..pg.order()).collect();
    automorphisms(pg)
        .into_iter()
        .filter(|a| {
            let mut x = id.clone();
            for _ in 0..n {
                x = compose(a, &x);
            }
            x == id
        })
        .collect()
}

/// Conjugation-invariant δ-tables with entries in `0..=max`.
fn invariant_tables(h: &FiniteGroup, k: &Field, max: u64, settings: &Settings) -> Result<Vec<Vec<i64>>> {
    let fp = Field::prime(k.characteristic())?;
    let classes = rational_classes(&simple_modules(h, &fp, settings)?, &simple_modules(h, k, settings)?, settings)?;
    let nfp = classes.members.len();
    let mut out = Vec::new();
    let total = (max + 1).pow(nfp as u32);
    for code in 0..total {
        let mut c = code;
        let mut table = vec![0; classes.class_of.len()];
        for members in &classes.members {
            let d = (c % (max + 1)) as i64;
            c /= max + 1;
            for &j in members {
                table[j] = d;
            }
        }
        out.push(table);
    }
    Ok(out)
}

// ---------------------------------------------------------------- criteria

fn genus_bookkeeping(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    for h in battery_groups() {
        for p in [2u32, 3, 5] {
            for g_x in 1..=3u64 {
                let label = format!("{h:?}, p = {p}, g_X = {g_x}");
                let cover = match CoverDatum::ordinary(&h, p, g_x, settings) {
                    Ok(c) => c,
                    Err(Error::InconsistentCoverData(_)) => {
                        t.skipped += 1;
                        continue;
                    }
                    Err(e) => {
                        t.error(&label, &e);
                        continue;
                    }
                };
                match projective_table(&cover.simples, settings) {
                    Ok(table) => {
                        let lhs = table.dim_omega2 as i64
                            + table.dim_pv.iter().zip(&cover.delta).map(|(&a, &d)| a as i64 * d as i64).sum::<i64>();
                        let rhs = h.order() as i64 * (g_x as i64 - 1) + 1;
                        t.check(lhs == rhs, || format!("{label}: {lhs} != {rhs}"));
                    }
                    Err(e) => t.error(&label, &e),
                }
            }
        }
    }
    t
}

fn transfer_consistency(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    for (label, ext, p) in extension_battery() {
        for g_x in 1..=3u64 {
            let label = format!("{label}, g_X = {g_x}");
            let run = || -> Result<Option<bool>> {
                let field = common_splitting_field(&[&ext.g, &ext.h], p, settings)?;
                let y = match CoverDatum::ordinary_over(&ext.h, &field, g_x, settings) {
                    Ok(y) => y,
                    Err(Error::InconsistentCoverData(_)) => return Ok(None),
                    Err(e) => return Err(e),
                };
                let direct = CoverDatum::ordinary_over(&ext.g, &field, g_x, settings);
                Ok(Some(match (transfer_delta_over(&y, &ext, &field, settings), direct) {
                    (Ok(z), Ok(d)) => z.delta == d.delta,
                    (Err(Error::NegativeTransfer(_)), Err(Error::InconsistentCoverData(_))) => true,
                    (Err(e), _) if !matches!(e, Error::NegativeTransfer(_)) => return Err(e),
                    _ => false,
                }))
            };
            match run() {
                Ok(Some(ok)) => t.check(ok, || format!("{label}: transferred table differs from the ordinary one")),
                Ok(None) => t.skipped += 1,
                Err(e) => t.error(&label, &e),
            }
        }
    }
    // the chain 1 → C_p → C_{p²}, in two steps and in one
    for p in [2u32, 3] {
        for g_x in 1..=3u64 {
            let label = format!("chain 1 -> C{p} -> C{}, g_X = {g_x}", p * p);
            let run = || -> Result<bool> {
                let cp2 = cyclic((p * p) as usize);
                let field = Field::prime(p)?;
                let lower = quotient_by_order(&cp2, p as usize).unwrap();
                let cp = lower.h.clone();
                let base = CoverDatum::ordinary_over(&FiniteGroup::trivial(), &field, g_x, settings)?;
                let first = transfer_delta_over(&base, &ExtensionData::over_trivial(&cp), &field, settings)?;
                let second = transfer_delta_over(&first, &lower, &field, settings)?;
                let direct = transfer_delta_over(&base, &ExtensionData::over_trivial(&cp2), &field, settings)?;
                let ordinary = CoverDatum::ordinary_over(&cp2, &field, g_x, settings)?;
                Ok(second.delta == direct.delta && direct.delta == ordinary.delta)
            };
            match run() {
                Ok(ok) => t.check(ok, || format!("{label}: steps disagree")),
                Err(e) => t.error(&label, &e),
            }
        }
    }
    t
}

fn gap(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    let battery = match gap_battery(settings) {
        Ok(b) => b,
        Err(e) => {
            t.error("building the battery", &e);
            return t;
        }
    };
    for (label, ext, m, p) in battery {
        let run = || -> Result<Vec<i64>> {
            let field = common_splitting_field(&[&ext.g, &ext.h], p, settings)?;
            let sh = simple_modules(&ext.h, &field, settings)?;
            let mut gaps = Vec::new();
            for v in decompose_over_extension(&m, &field, settings)? {
                let v = sh.get(sh.index_of(&v).ok_or_else(|| Error::EngineAnomaly("summand not simple".into()))?);
                gaps.push(h1(&inflate(v, &ext.q)?, settings)? as i64 - h1(v, settings)? as i64);
            }
            Ok(gaps)
        };
        match run() {
            Ok(gaps) => {
                for g in gaps {
                    t.check(g == 1, || format!("{label}: h1 difference {g}"));
                }
            }
            Err(e) => t.error(&label, &e),
        }
    }
    t
}

fn trivial_group_specialization(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    for p in [2u32, 3] {
        for (name, pg) in p_groups(p) {
            let d = match frattini_of_p_group(&pg, p) {
                Ok((_, d)) => d as u64,
                Err(e) => {
                    t.error(&name, &e);
                    continue;
                }
            };
            for gamma in 0..=4u64 {
                let label = format!("{name}, p = {p}, γ = {gamma}");
                let run = || -> Result<(bool, bool)> {
                    let cover = CoverDatum::from_gamma(p, gamma, settings)?;
                    let problem = EmbeddingProblem::new(cover, ExtensionData::over_trivial(&pg))?;
                    let strong = decide_strong_solvability(&problem, settings)?.solvable;
                    let pprime = decide_pprime_profinite(
                        &FiniteGroup::trivial(),
                        p,
                        &pg,
                        &[],
                        &PprimeData::Gamma(gamma),
                        settings,
                    )?
                    .solvable;
                    Ok((strong, pprime))
                };
                match run() {
                    Ok((s, q)) => {
                        t.check(s == (d <= gamma) && q == s, || format!("{label}: d = {d}, strong {s}, p' route {q}"))
                    }
                    Err(e) => t.error(&label, &e),
                }
            }
        }
    }
    t
}

fn route_equivalence(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    let cases: Vec<(FiniteGroup, u32)> =
        vec![(FiniteGroup::trivial(), 2), (FiniteGroup::trivial(), 3), (cyclic(3), 2), (cyclic(2), 3)];
    for (h, p) in cases {
        let tables: Vec<CoverDatum> = match route_tables(&h, p, settings) {
            Ok(v) => v,
            Err(e) => {
                t.error(&format!("tables for {h:?}"), &e);
                continue;
            }
        };
        let mut kernels = p_groups(p);
        kernels.push(("1".into(), FiniteGroup::trivial()));
        for (name, pg) in kernels {
            let actions: Vec<Vec<Automorphism>> = if h.order() == 1 {
                vec![Vec::new()]
            } else {
                actions_of_cyclic(&pg, h.order()).into_iter().map(|a| vec![a]).collect()
            };
            for (ai, action) in actions.iter().enumerate() {
                let (_, _, proj) = match semidirect_product(&pg, &h, action) {
                    Ok(v) => v,
                    Err(e) => {
                        t.error(&format!("{name} ⋊ {h:?}"), &e);
                        continue;
                    }
                };
                let ext = ExtensionData::from_epimorphism(proj).unwrap();
                for (ti, cover) in tables.iter().enumerate() {
                    let label = format!("{name} ⋊_{ai} {h:?}, p = {p}, table {ti} {:?}", cover.delta);
                    let run = || -> Result<bool> {
                        let problem = EmbeddingProblem::new(cover.clone(), ext.clone())?;
                        let routes = cross_check_routes(&problem, settings)?;
                        let direct = decide_pprime_profinite(&h, p, &pg, action, &PprimeData::Cover(cover), settings)?;
                        Ok(routes.strong == routes.pprime && direct.solvable == routes.strong)
                    };
                    match run() {
                        Ok(ok) => t.check(ok, || format!("{label}: routes disagree")),
                        Err(e) => t.error(&label, &e),
                    }
                }
            }
        }
    }
    t
}

fn route_tables(h: &FiniteGroup, p: u32, settings: &Settings) -> Result<Vec<CoverDatum>> {
    if h.order() == 1 {
        return (0..=4).map(|g| CoverDatum::from_gamma(p, g, settings)).collect();
    }
    let k = common_splitting_field(&[h], p, settings)?;
    let mut out = Vec::new();
    for g_x in 1..=3 {
        if let Ok(c) = CoverDatum::ordinary_over(h, &k, g_x, settings) {
            out.push(c);
        }
    }
    for table in invariant_tables(h, &k, 2, settings)? {
        out.push(CoverDatum::user_supplied(h, p, 2, table, settings)?);
    }
    Ok(out)
}

fn cohomology_oracle(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    let small = [FiniteGroup::trivial(), cyclic(2), cyclic(3), cyclic(4), klein4()];
    for g in &small {
        for p in [2u32, 3] {
            let fp = Field::prime(p).unwrap();
            let modules = match simple_modules(g, &fp, settings) {
                Ok(s) => s.iter().filter(|m| m.dim() == 1).cloned().collect::<Vec<_>>(),
                Err(e) => {
                    t.error(&format!("{g:?}"), &e);
                    continue;
                }
            };
            for m in modules {
                let label = format!("{g:?} over F_{p}, traces {:?}", m.trace_vector());
                let Some(brute) = oracle::cohomology(&m, 1 << 20) else {
                    t.skipped += 1;
                    continue;
                };
                match (h1(&m, settings), h2(&m, settings)) {
                    (Ok(a), Ok(b)) => {
                        let engine = (h0(&m), a, b);
                        t.check(engine == brute, || format!("{label}: engine {engine:?}, exhaustive {brute:?}"));
                    }
                    (Err(e), _) | (_, Err(e)) => t.error(&label, &e),
                }
            }
        }
    }
    // coprime vanishing
    let mut groups = battery_groups();
    groups.push(cyclic(5));
    for g in &groups {
        for p in [2u32, 3, 5] {
            if g.order() % p as usize == 0 {
                continue;
            }
            let run = || -> Result<Vec<(usize, usize)>> {
                let k = common_splitting_field(&[g], p, settings)?;
                simple_modules(g, &k, settings)?.iter().map(|v| Ok((h1(v, settings)?, h2(v, settings)?))).collect()
            };
            let label = format!("{g:?}, p = {p}");
            match run() {
                Ok(v) => {
                    for (a, b) in v {
                        t.check(a == 0 && b == 0, || format!("{label}: h1 = {a}, h2 = {b} in coprime order"));
                    }
                }
                Err(e) => t.error(&label, &e),
            }
        }
    }
    t
}

/// Modules of dimension at most 4 over F_2 and F_3 built from the battery.
pub fn small_modules(settings: &Settings) -> Vec<(String, GModule)> {
    let mut out = Vec::new();
    let mut groups = battery_groups();
    groups.push(dihedral8());
    groups.push(symmetric(4).unwrap());
    groups.push(quaternion8());
    for p in [2u32, 3] {
        let fp = Field::prime(p).unwrap();
        for g in &groups {
            if g.order() <= 4 {
                out.push((format!("regular {g:?} over F_{p}"), GModule::regular(g, &fp)));
            }
            if let Ok(m) = GModule::permutation(g, &fp) {
                if m.dim() <= 4 {
                    out.push((format!("permutation {g:?} over F_{p}"), m));
                }
            }
            let Ok(simples) = simple_modules(g, &fp, settings) else {
                continue;
            };
            let list: Vec<GModule> = simples.iter().cloned().collect();
            for (i, a) in list.iter().enumerate() {
                for b in &list[i..] {
                    if a.dim() + b.dim() <= 4 {
                        out.push((format!("sum of simples {g:?} over F_{p}"), a.direct_sum(b).unwrap()));
                    }
                }
            }
        }
    }
    out
}

fn meataxe_oracle(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    for (label, m) in small_modules(settings) {
        let brute = oracle::composition_factors(&m);
        let engine = composition_factors(&m, settings);
        let mut remaining: Vec<(GModule, usize)> = engine.into_iter().map(|c| (c.module, c.multiplicity)).collect();
        let mut ok = true;
        for s in &brute {
            match remaining.iter_mut().find(|(e, n)| *n > 0 && verified_isomorphic(s, e, settings.seed)) {
                Some(slot) => slot.1 -= 1,
                None => ok = false,
            }
        }
        ok &= remaining.iter().all(|(_, n)| *n == 0);
        t.check(ok, || format!("{label}: composition factors differ from exhaustive search"));
    }
    for (label, ext, p) in extension_battery() {
        let run = || -> Result<bool> {
            let k = common_splitting_field(&[&ext.g, &ext.h], p, settings)?;
            let sg = simple_modules(&ext.g, &k, settings)?;
            let sh = simple_modules(&ext.h, &k, settings)?;
            clifford_bijection(&sh, &sg, &ext)?;
            Ok(sg.len() == sh.len())
        };
        match run() {
            Ok(ok) => t.check(ok, || format!("{label}: simple counts differ")),
            Err(e) => t.error(&label, &e),
        }
    }
    t
}

/// An isomorphism found by the engine, re-verified directly.
fn verified_isomorphic(a: &GModule, b: &GModule, seed: u64) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let Some(tm) = are_isomorphic(a, b, seed) else {
        return false;
    };
    tm.is_invertible() && a.gen_matrices().iter().zip(b.gen_matrices()).all(|(x, y)| tm.mul(x) == y.mul(&tm))
}

fn fixed_parts(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    for (label, ext, p) in extension_battery() {
        let run = || -> Result<bool> {
            let k = common_splitting_field(&[&ext.g, &ext.h], p, settings)?;
            Ok(verify_fixed_part_of_projectives(&ext, &k, settings)?.passed())
        };
        match run() {
            Ok(ok) => t.check(ok, || format!("{label}: a fixed part is not the expected projective")),
            Err(e) => t.error(&label, &e),
        }
    }
    t
}

fn is_anomaly(e: &Error) -> bool {
    matches!(e, Error::MultiplicityAnomaly(_) | Error::ConjugateAnomaly(_))
}

fn anomaly_freedom(settings: &Settings) -> Tally {
    let mut t = Tally::new();
    let mut record = |label: String, r: Result<()>| match r {
        Err(e) if is_anomaly(&e) => {
            t.cases += 1;
            t.failures.push(format!("{label}: {e}"));
        }
        _ => t.cases += 1,
    };
    let mut groups = battery_groups();
    groups.extend([dihedral8(), quaternion8(), symmetric(4).unwrap(), cyclic(5), FiniteGroup::trivial()]);
    for g in &groups {
        for p in [2u32, 3, 5] {
            let r = (|| -> Result<()> {
                let k = common_splitting_field(&[g], p, settings)?;
                let fp = Field::prime(p)?;
                let fps = simple_modules(g, &fp, settings)?;
                let ks = simple_modules(g, &k, settings)?;
                rational_classes(&fps, &ks, settings)?;
                for g_x in 1..=3 {
                    let Ok(cover) = CoverDatum::ordinary_over(g, &k, g_x, settings) else {
                        continue;
                    };
                    for v in fps.iter() {
                        hom_count(&cover, v, settings)?;
                    }
                }
                Ok(())
            })();
            record(format!("{g:?}, p = {p}"), r);
        }
    }
    // every problem in the gap and extension batteries, decided with ordinary tables
    let problems: Vec<(String, ExtensionData, u32)> = match gap_battery(settings) {
        Ok(b) => b.into_iter().map(|(l, e, _, p)| (l, e, p)).chain(extension_battery()).collect(),
        Err(e) => {
            record("gap battery".into(), Err(e));
            extension_battery()
        }
    };
    for (label, ext, p) in problems {
        for g_x in 1..=3 {
            let r = (|| -> Result<()> {
                let k = common_splitting_field(&[&ext.h], p, settings)?;
                let Ok(cover) = CoverDatum::ordinary_over(&ext.h, &k, g_x, settings) else {
                    return Ok(());
                };
                decide_strong_solvability(&EmbeddingProblem::new(cover, ext.clone())?, settings)?;
                Ok(())
            })();
            record(format!("{label}, g_X = {g_x}"), r);
        }
    }
    t
}

// ---------------------------------------------------------------- oracles

/// Exhaustive checks that share no code with the linear-algebra engine.
pub mod oracle {
    use super::*;

    /// A module over a prime field as explicit tables on its q^d elements.
    struct SetModule {
        p: u32,
        add: Vec<Vec<usize>>,
        act: Vec<Vec<usize>>,
    }

    fn encode(v: &[u32], p: u32) -> usize {
        v.iter().rev().fold(0, |acc, &c| acc * p as usize + c as usize)
    }

    fn decode(mut x: usize, p: u32, d: usize) -> Vec<u32> {
        (0..d)
            .map(|_| {
                let c = (x % p as usize) as u32;
                x /= p as usize;
                c
            })
            .collect()
    }

    fn apply(m: &FqMatrix, v: &[u32], p: u32) -> Vec<u32> {
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j) as u64 * v[j] as u64).sum::<u64>() as u32 % p).collect()
    }

    impl SetModule {
        fn from_module(m: &GModule) -> SetModule {
            let p = m.field().characteristic();
            let d = m.dim();
            let n = (p as usize).pow(d as u32);
            let vecs: Vec<Vec<u32>> = (0..n).map(|x| decode(x, p, d)).collect();
            let add = (0..n)
                .map(|a| {
                    (0..n)
                        .map(|b| encode(&vecs[a].iter().zip(&vecs[b]).map(|(x, y)| (x + y) % p).collect::<Vec<_>>(), p))
                        .collect()
                })
                .collect();
            let act =
                m.gen_matrices().iter().map(|g| (0..n).map(|x| encode(&apply(g, &vecs[x], p), p)).collect()).collect();
            SetModule { p, add, act }
        }

        fn size(&self) -> usize {
            self.add.len()
        }

        /// Smallest subset containing 0 and `x` closed under addition and the action.
        fn closure(&self, x: usize) -> BTreeSet<usize> {
            let mut set: BTreeSet<usize> = [0, x].into_iter().collect();
            let mut queue: VecDeque<usize> = [x].into_iter().collect();
            while let Some(y) = queue.pop_front() {
                let mut new = Vec::new();
                for &z in &set {
                    new.push(self.add[y][z]);
                }
                for g in &self.act {
                    new.push(g[y]);
                }
                for w in new {
                    if set.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            set
        }

        fn quotient(&self, sub: &BTreeSet<usize>) -> SetModule {
            let n = self.size();
            let mut rep = vec![usize::MAX; n];
            let mut reps = Vec::new();
            for x in 0..n {
                if rep[x] == usize::MAX {
                    let id = reps.len();
                    reps.push(x);
                    for &s in sub {
                        rep[self.add[x][s]] = id;
                    }
                }
            }
            let add = reps.iter().map(|&a| reps.iter().map(|&b| rep[self.add[a][b]]).collect()).collect();
            let act = self.act.iter().map(|g| reps.iter().map(|&a| rep[g[a]]).collect()).collect();
            SetModule { p: self.p, add, act }
        }

        fn restrict(&self, sub: &BTreeSet<usize>) -> SetModule {
            let elems: Vec<usize> = sub.iter().copied().collect();
            let index: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
            let add = elems.iter().map(|&a| elems.iter().map(|&b| index[&self.add[a][b]]).collect()).collect();
            let act = self.act.iter().map(|g| elems.iter().map(|&a| index[&g[a]]).collect()).collect();
            SetModule { p: self.p, add, act }
        }

        fn scale(&self, c: u32, x: usize) -> usize {
            (0..c).fold(0, |acc, _| self.add[acc][x])
        }

        /// Matrices in a basis found by enumeration.
        fn to_module(&self, group: &FiniteGroup) -> GModule {
            let p = self.p;
            let mut basis: Vec<usize> = Vec::new();
            let mut coords: HashMap<usize, Vec<u32>> = [(0, Vec::new())].into_iter().collect();
            for x in 0..self.size() {
                if coords.contains_key(&x) {
                    continue;
                }
                basis.push(x);
                let mut next = HashMap::new();
                for (&e, v) in &coords {
                    for c in 0..p {
                        let mut w = v.clone();
                        w.push(c);
                        next.insert(self.add[e][self.scale(c, x)], w);
                    }
                }
                coords = next;
            }
            let d = basis.len();
            for v in coords.values_mut() {
                v.resize(d, 0);
            }
            let field = Field::prime(p).unwrap();
            if group.order() == 1 {
                return GModule::trivial_group(group, &field, d);
            }
            let gens = self
                .act
                .iter()
                .map(|g| {
                    let cols: Vec<Vec<u32>> = basis.iter().map(|&b| coords[&g[b]].clone()).collect();
                    FqMatrix::from_rows(&field, d, &cols).transpose()
                })
                .collect();
            GModule::new(group, &field, gens).expect("restricted action is a module")
        }
    }

    /// Composition factors by repeatedly splitting off a smallest nonzero
    /// invariant subset, which is a simple submodule.
    pub fn composition_factors(m: &GModule) -> Vec<GModule> {
        assert!(m.field().is_prime_field());
        let mut out = Vec::new();
        let mut stack = vec![SetModule::from_module(m)];
        while let Some(x) = stack.pop() {
            if x.size() == 1 {
                continue;
            }
            let simple = (1..x.size()).map(|v| x.closure(v)).min_by_key(|s| s.len()).unwrap();
            out.push(x.restrict(&simple).to_module(m.group()));
            if simple.len() < x.size() {
                stack.push(x.quotient(&simple));
            }
        }
        out
    }

    /// `(h⁰, h¹, h²)` by enumerating all inhomogeneous cochains, when
    /// there are at most `limit` 2-cochains.
    pub fn cohomology(m: &GModule, limit: u64) -> Option<(usize, usize, usize)> {
        assert!(m.field().is_prime_field());
        let g = m.group();
        let n = g.order();
        let p = m.field().characteristic();
        let sm = SetModule::from_module(m);
        let q = sm.size();
        let c2 = (q as u64).checked_pow((n * n) as u32)?;
        if c2 > limit {
            return None;
        }
        let act: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                let mat = m.element_matrix(x);
                (0..q).map(|v| encode(&apply(mat, &decode(v, p, m.dim()), p), p)).collect()
            })
            .collect();
        let neg: Vec<usize> = (0..q).map(|v| (0..q).find(|&w| sm.add[v][w] == 0).unwrap()).collect();
        let sub = |a: usize, b: usize| sm.add[a][neg[b]];
        let log = |mut x: u64| {
            let mut k = 0;
            while x > 1 {
                x /= p as u64;
                k += 1;
            }
            k
        };
        let fixed = (0..q).filter(|&v| (0..n).all(|x| act[x][v] == v)).count() as u64;
        let mut z1 = 0u64;
        for code in 0..(q as u64).pow(n as u32) {
            let f: Vec<usize> = decode(code as usize, q as u32, n).into_iter().map(|c| c as usize).collect();
            let ok = (0..n).all(|x| (0..n).all(|y| f[g.mul(x, y)] == sm.add[f[x]][act[x][f[y]]]));
            z1 += ok as u64;
        }
        let mut z2 = 0u64;
        for code in 0..c2 {
            let f: Vec<usize> = decode(code as usize, q as u32, n * n).into_iter().map(|c| c as usize).collect();
            let at = |x: usize, y: usize| f[x * n + y];
            let ok = (0..n).all(|x| {
                (0..n).all(|y| {
                    (0..n).all(|z| {
                        // x·f(y,z) − f(xy,z) + f(x,yz) − f(x,y) = 0
                        let lhs = sm.add[act[x][at(y, z)]][at(x, g.mul(y, z))];
                        let rhs = sm.add[at(g.mul(x, y), z)][at(x, y)];
                        sub(lhs, rhs) == 0
                    })
                })
            });
            z2 += ok as u64;
        }
        let c1 = (q as u64).pow(n as u32);
        let b1 = q as u64 / fixed;
        let b2 = c1 / z1;
        Some((log(fixed), log(z1 / b1), log(z2 / b2)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_cohomology_small_cases() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(oracle::cohomology(&GModule::trivial(&cyclic(2), &f2), 1 << 20), Some((1, 1, 1)));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(oracle::cohomology(&GModule::trivial(&cyclic(2), &f3), 1 << 20), Some((1, 0, 0)));
        assert_eq!(oracle::cohomology(&GModule::trivial(&klein4(), &f2), 1 << 20), Some((1, 2, 3)));
    }

    #[test]
    fn oracle_composition_factors() {
        let f2 = Field::prime(2).unwrap();
        let reg = GModule::regular(&cyclic(3), &f2);
        let mut dims: Vec<usize> = oracle::composition_factors(&reg).iter().map(|m| m.dim()).collect();
        dims.sort_unstable();
        assert_eq!(dims, vec![1, 2]);
        let reg = GModule::regular(&klein4(), &f2);
        assert_eq!(oracle::composition_factors(&reg).len(), 4);
    }
}
