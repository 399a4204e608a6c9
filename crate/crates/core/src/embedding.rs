//! Deciding strong solvability of embedding problems with p-group kernel.
//!
//! The verdict comes from the slack table `δ_{Y,V} − h¹(G,q*V) + h¹(H,V)`.
//! Independently, the problem is reduced through Frattini and simple
//! quotients down to base cases with simple elementary abelian kernel,
//! which are decided by their extension class; the two answers must agree.

use serde::Serialize;

use crate::cohomology::{extension_class, h1, h2, is_trivial_class, kernel_module};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{frattini_of_subgroup, semidirect_product, Automorphism, ExtensionData, FiniteGroup, Subgroup};
use crate::hasse_witt::{common_splitting_field, transfer_delta_over, CoverDatum};
use crate::matrix::Vector;
use crate::modrep::{
    decompose_over_extension, hom_space, inflate, is_irreducible, lcm, rational_classes, simple_modules, GModule,
};
use crate::settings::Settings;

/// `1 → P → G → H → 1` together with the cover Y → X with group H.
#[derive(Clone, Debug)]
pub struct EmbeddingProblem {
    pub cover: CoverDatum,
    pub extension: ExtensionData,
}

impl EmbeddingProblem {
    pub fn new(cover: CoverDatum, extension: ExtensionData) -> Result<EmbeddingProblem> {
        if extension.h != *cover.group() {
            return Err(Error::InvalidInput("the extension's quotient is not the cover's group".into()));
        }
        if !extension.kernel_is_p_group(cover.p) {
            return Err(Error::NotPGroup { p: cover.p, order: extension.kernel.order() });
        }
        Ok(EmbeddingProblem { cover, extension })
    }

    pub fn p(&self) -> u32 {
        self.cover.p
    }

    /// A field splitting both G and H that contains the cover's field.
    pub fn working_field(&self, settings: &Settings) -> Result<Field> {
        let ext = &self.extension;
        let common = common_splitting_field(&[&ext.g, &ext.h], self.p(), settings)?;
        let m = lcm(common.degree(), self.cover.field().degree());
        if m > settings.field_cap {
            return Err(Error::SplittingCapExceeded { needed: m, cap: settings.field_cap });
        }
        Field::new(self.p(), m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlackEntry {
    pub simple: usize,
    pub dim: usize,
    pub h1_g: usize,
    pub h1_h: usize,
    pub delta: u64,
    pub slack: i64,
}

/// Slack `δ_{Y,V} − h¹(G,q*V) + h¹(H,V)` for every simple V of H.
pub fn kani_check(problem: &EmbeddingProblem, settings: &Settings) -> Result<Vec<SlackEntry>> {
    let field = problem.working_field(settings)?;
    let cover = problem.cover.over_field(&field, settings)?;
    slack_table(&problem.extension, &cover, settings)
}

fn slack_table(ext: &ExtensionData, cover: &CoverDatum, settings: &Settings) -> Result<Vec<SlackEntry>> {
    let mut out = Vec::with_capacity(cover.simples.len());
    for (i, v) in cover.simples.iter().enumerate() {
        let h1_h = h1(v, settings)?;
        let h1_g = h1(&inflate(v, &ext.q)?, settings)?;
        let delta = cover.delta[i];
        let slack = delta as i64 - h1_g as i64 + h1_h as i64;
        out.push(SlackEntry { simple: i, dim: v.dim(), h1_g, h1_h, delta, slack });
    }
    Ok(out)
}

fn satisfied(slack: &[SlackEntry]) -> bool {
    slack.iter().all(|e| e.slack >= 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StepKind {
    FrattiniQuotient,
    SimpleQuotient,
}

/// Collapsing a normal subgroup O ⊆ P at some node of the reduction tree.
#[derive(Clone, Debug, Serialize)]
pub struct ReductionStep {
    /// Nesting depth: problems over G/O are one level below their parent.
    pub depth: usize,
    pub kind: StepKind,
    pub group_order: usize,
    pub kernel_order: usize,
    pub collapsed_order: usize,
    pub parent_kani: bool,
    pub child_kani: bool,
    #[serde(skip)]
    pub collapsed: Subgroup,
    #[serde(skip)]
    pub result: ExtensionData,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ClassKind {
    Trivial,
    Nontrivial,
}

#[derive(Clone, Debug, Serialize)]
pub struct BaseCase {
    pub depth: usize,
    pub group_order: usize,
    pub quotient_order: usize,
    pub kernel_order: usize,
    /// dim_{F_p} of the kernel.
    pub kernel_dim: usize,
    pub class: ClassKind,
    /// Indices of the simples V of H dividing k ⊗ P.
    pub divisors: Vec<usize>,
    pub delta: u64,
    /// `h¹(G,q*V) − h¹(H,V)` for V dividing k ⊗ P.
    pub h1_gap: i64,
    pub hom_count: u64,
    pub h2_side: u64,
    pub solvable: bool,
    pub rationale: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub solvable: bool,
    pub slack: Vec<SlackEntry>,
    pub trace: Vec<ReductionStep>,
    pub base_cases: Vec<BaseCase>,
    pub seed: u64,
    pub field: String,
    pub notes: Vec<String>,
}

/// Result of the reduction route: the tree flattened in visiting order.
struct RouteLog {
    steps: Vec<ReductionStep>,
    base_cases: Vec<BaseCase>,
}

enum NextMove {
    Done,
    Collapse(StepKind, Subgroup),
    Base,
}

fn next_move(ext: &ExtensionData, p: u32, settings: &Settings) -> Result<NextMove> {
    if ext.kernel.order() == 1 {
        return Ok(NextMove::Done);
    }
    let (phi, _) = frattini_of_subgroup(&ext.kernel, p)?;
    if !phi.is_trivial() {
        return Ok(NextMove::Collapse(StepKind::FrattiniQuotient, phi));
    }
    let (kmod, kc) = kernel_module(ext, p)?;
    if is_irreducible(&kmod, settings) {
        return Ok(NextMove::Base);
    }
    // kernel of P ↠ Q for the least simple Q admitting a nonzero map
    let fp = kmod.field().clone();
    let simples = simple_modules(&ext.h, &fp, settings)?;
    for s in simples.iter() {
        let homs = hom_space(&kmod, s)?;
        let Some(t) = homs.first() else { continue };
        let kernel = t.kernel_basis();
        let mut members = Vec::new();
        let dim = kernel.rows();
        let total = (p as usize).pow(dim as u32);
        for code in 0..total {
            let mut c = code;
            let mut v: Vector = vec![0; kmod.dim()];
            for row in kernel.row_vecs() {
                let a = (c % p as usize) as u32;
                c /= p as usize;
                for (x, &r) in v.iter_mut().zip(&row) {
                    *x = fp.mul_add(a, r, *x);
                }
            }
            members.push(kc.element[&v]);
        }
        let o = Subgroup::from_members(&ext.g, &members)?;
        if !o.is_normal() {
            return Err(Error::EngineAnomaly("kernel of a module map is not normal".into()));
        }
        return Ok(NextMove::Collapse(StepKind::SimpleQuotient, o));
    }
    Err(Error::EngineAnomaly("a reducible kernel has no simple quotient".into()))
}

/// The route through reductions and base cases; returns its verdict.
fn route(
    ext: &ExtensionData,
    cover: &CoverDatum,
    field: &Field,
    depth: usize,
    log: &mut RouteLog,
    settings: &Settings,
) -> Result<bool> {
    let p = cover.p;
    let here = satisfied(&slack_table(ext, cover, settings)?);
    let verdict = match next_move(ext, p, settings)? {
        NextMove::Done => true,
        NextMove::Base => {
            let b = classify_at(ext, cover, field, depth, settings)?;
            let solvable = b.solvable;
            log.base_cases.push(b);
            solvable
        }
        NextMove::Collapse(kind, o) => {
            let (lower, proj) = ext.quotient_by(&o)?;
            let child = satisfied(&slack_table(&lower, cover, settings)?);
            if here && !child {
                return Err(Error::EngineAnomaly(format!(
                    "collapsing a subgroup of order {} broke the Kani inequalities",
                    o.order()
                )));
            }
            log.steps.push(ReductionStep {
                depth,
                kind,
                group_order: ext.g.order(),
                kernel_order: ext.kernel.order(),
                collapsed_order: o.order(),
                parent_kani: here,
                child_kani: child,
                collapsed: o,
                result: lower.clone(),
            });
            if !route(&lower, cover, field, depth + 1, log, settings)? {
                false
            } else {
                let z = transfer_delta_over(cover, &lower, field, settings)?;
                let upper = ExtensionData::from_epimorphism(proj)?;
                route(&upper, &z, field, depth + 1, log, settings)?
            }
        }
    };
    if verdict != here {
        return Err(Error::RouteDivergence(format!(
            "reduction route says {verdict}, slack criterion says {here} (|G| = {}, |P| = {})",
            ext.g.order(),
            ext.kernel.order()
        )));
    }
    Ok(verdict)
}

/// The reduction steps of the problem, in visiting order.
pub fn reduction_trace(problem: &EmbeddingProblem, settings: &Settings) -> Result<Vec<ReductionStep>> {
    let field = problem.working_field(settings)?;
    let cover = problem.cover.over_field(&field, settings)?;
    let mut log = RouteLog { steps: Vec::new(), base_cases: Vec::new() };
    route(&problem.extension, &cover, &field, 0, &mut log, settings)?;
    Ok(log.steps)
}

/// Classifies a problem whose kernel is elementary abelian and simple as an F_p[H]-module.
pub fn classify_base_case(problem: &EmbeddingProblem, settings: &Settings) -> Result<BaseCase> {
    let field = problem.working_field(settings)?;
    let cover = problem.cover.over_field(&field, settings)?;
    classify_at(&problem.extension, &cover, &field, 0, settings)
}

fn classify_at(
    ext: &ExtensionData,
    cover: &CoverDatum,
    field: &Field,
    depth: usize,
    settings: &Settings,
) -> Result<BaseCase> {
    let p = cover.p;
    if ext.kernel.order() == 1 {
        return Err(Error::KernelNotReduced("the kernel is trivial".into()));
    }
    let (kmod, _) = match kernel_module(ext, p) {
        Ok(v) => v,
        Err(Error::KernelNotElementaryAbelian) => {
            return Err(Error::KernelNotReduced("the kernel is not elementary abelian".into()))
        }
        Err(e) => return Err(e),
    };
    if !is_irreducible(&kmod, settings) {
        return Err(Error::KernelNotReduced("the kernel is not a simple module".into()));
    }
    let class =
        if is_trivial_class(&extension_class(ext, p)?).is_some() { ClassKind::Trivial } else { ClassKind::Nontrivial };
    let cover = cover.over_field(field, settings)?;
    let (hom, h2_side) = hom_count(&cover, &kmod, settings)?;
    let divisors = divisor_indices(&cover, &kmod, settings)?;
    let delta = cover.delta[divisors[0]];
    let mut gaps = Vec::with_capacity(divisors.len());
    for &i in &divisors {
        let v = cover.simples.get(i);
        gaps.push(h1(&inflate(v, &ext.q)?, settings)? as i64 - h1(v, settings)? as i64);
    }
    if gaps.iter().any(|&g| g != gaps[0]) {
        return Err(Error::ConjugateAnomaly("conjugate simples have different h1 gaps".into()));
    }
    let h1_gap = gaps[0];
    let expected_gap = if class == ClassKind::Trivial { 1 } else { 0 };
    if h1_gap != expected_gap {
        return Err(Error::EngineAnomaly(format!("h1 gap {h1_gap} for a {class:?} extension by a simple kernel")));
    }
    let strict = hom > h2_side;
    if strict != (delta > 0) {
        return Err(Error::EngineAnomaly("counting identity disagrees with δ > 0".into()));
    }
    let (solvable, rationale) = match class {
        ClassKind::Nontrivial => (true, "nontrivial extension class: solvable without any condition on δ".to_string()),
        ClassKind::Trivial => {
            (delta > 0, format!("split extension: solvable iff δ > 0 for V dividing the kernel (δ = {delta})"))
        }
    };
    Ok(BaseCase {
        depth,
        group_order: ext.g.order(),
        quotient_order: ext.h.order(),
        kernel_order: ext.kernel.order(),
        kernel_dim: kmod.dim(),
        class,
        divisors,
        delta,
        h1_gap,
        hom_count: hom,
        h2_side,
        solvable,
        rationale,
    })
}

fn divisor_indices(cover: &CoverDatum, pm: &GModule, settings: &Settings) -> Result<Vec<usize>> {
    let parts = decompose_over_extension(pm, cover.field(), settings)?;
    let mut out = parts
        .iter()
        .map(|v| {
            cover
                .simples
                .index_of(v)
                .ok_or_else(|| Error::ConjugateAnomaly("a summand of k ⊗ P is missing from the simple set".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_unstable();
    Ok(out)
}

/// `deg P·(h²(H,V) + δ_{Y,V})` and `deg P·h²(H,V)` for an F_p[H]-simple P.
///
/// Every V dividing k ⊗ P must give the same values.
pub fn hom_count(cover: &CoverDatum, pm: &GModule, settings: &Settings) -> Result<(u64, u64)> {
    if pm.group() != cover.group() {
        return Err(Error::InvalidInput("module and cover have different groups".into()));
    }
    let divisors = divisor_indices(cover, pm, settings)?;
    let deg = divisors.len() as u64;
    let mut values = Vec::with_capacity(divisors.len());
    for &i in &divisors {
        let h2v = h2(cover.simples.get(i), settings)? as u64;
        values.push((deg * (h2v + cover.delta[i]), deg * h2v));
    }
    if values.iter().any(|v| *v != values[0]) {
        return Err(Error::ConjugateAnomaly(format!(
            "simples dividing the same F_p-module give different counts {values:?}"
        )));
    }
    Ok(values[0])
}

/// The verdict with its full evidence: slack table, reduction trace and base cases.
pub fn decide_strong_solvability(problem: &EmbeddingProblem, settings: &Settings) -> Result<Verdict> {
    let field = problem.working_field(settings)?;
    let cover = problem.cover.over_field(&field, settings)?;
    let slack = slack_table(&problem.extension, &cover, settings)?;
    let solvable = satisfied(&slack);
    let mut log = RouteLog { steps: Vec::new(), base_cases: Vec::new() };
    let by_route = route(&problem.extension, &cover, &field, 0, &mut log, settings)?;
    if by_route != solvable {
        return Err(Error::RouteDivergence("reduction route disagrees with the slack criterion".into()));
    }
    Ok(Verdict {
        solvable,
        slack,
        trace: log.steps,
        base_cases: log.base_cases,
        seed: settings.seed,
        field: field.to_string(),
        notes: cover.notes.clone(),
    })
}

/// How the coefficients δ_𝒱 of the p′ criterion are supplied.
#[derive(Clone, Debug)]
pub enum PprimeData<'a> {
    /// Only γ; determines δ when H is trivial.
    Gamma(u64),
    /// δ_𝒱 indexed by the canonical F_p-simples of H.
    FpTable(Vec<u64>),
    /// A δ-table over a splitting field; δ_𝒱 = deg 𝒱·δ_{Y,V} for V dividing k ⊗ 𝒱.
    Cover(&'a CoverDatum),
}

#[derive(Clone, Debug, Serialize)]
pub struct PprimeEntry {
    pub simple: usize,
    pub dim: usize,
    pub deg: usize,
    pub h1: usize,
    pub delta: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PprimeVerdict {
    pub solvable: bool,
    pub entries: Vec<PprimeEntry>,
}

/// Builds `P ⋊ H` from an action and applies the criterion
/// `dim_{F_p} H¹(P ⋊ H, 𝒱) ≤ δ_𝒱` for all F_p-simples 𝒱 of H.
pub fn decide_pprime_profinite(
    h: &FiniteGroup,
    p: u32,
    pg: &FiniteGroup,
    action: &[Automorphism],
    data: &PprimeData<'_>,
    settings: &Settings,
) -> Result<PprimeVerdict> {
    if !pg.is_p_group(p) && pg.order() != 1 {
        return Err(Error::NotPGroup { p, order: pg.order() });
    }
    let (_, _, proj) = semidirect_product(pg, h, action)?;
    pprime_criterion(&ExtensionData::from_epimorphism(proj)?, p, data, settings)
}

/// The p′ criterion on an extension of a p′-group H by a p-group.
pub fn pprime_criterion(
    ext: &ExtensionData,
    p: u32,
    data: &PprimeData<'_>,
    settings: &Settings,
) -> Result<PprimeVerdict> {
    let h = &ext.h;
    if !h.is_p_prime(p) {
        return Err(Error::NotPPrime { p, order: h.order() });
    }
    if !ext.kernel_is_p_group(p) {
        return Err(Error::NotPGroup { p, order: ext.kernel.order() });
    }
    let fp = Field::prime(p)?;
    let fp_simples = simple_modules(h, &fp, settings)?;
    let deltas: Vec<u64> = match data {
        PprimeData::Gamma(g) => {
            if h.order() != 1 {
                return Err(Error::InvalidInput("γ alone does not determine the action of H; supply a δ-table".into()));
            }
            vec![*g]
        }
        PprimeData::FpTable(t) => {
            if t.len() != fp_simples.len() {
                return Err(Error::InvalidInput(format!(
                    "{} coefficients for {} simple F_p-modules",
                    t.len(),
                    fp_simples.len()
                )));
            }
            t.clone()
        }
        PprimeData::Cover(cover) => {
            if cover.group() != h {
                return Err(Error::InvalidInput("the cover's group is not H".into()));
            }
            let classes = rational_classes(&fp_simples, &cover.simples, settings)?;
            (0..fp_simples.len())
                .map(|i| {
                    let members = &classes.members[i];
                    let d = cover.delta[members[0]];
                    if members.iter().any(|&j| cover.delta[j] != d) {
                        return Err(Error::ConjugateAnomaly("conjugate simples carry different coefficients".into()));
                    }
                    Ok(members.len() as u64 * d)
                })
                .collect::<Result<_>>()?
        }
    };
    let mut entries = Vec::with_capacity(fp_simples.len());
    for (i, v) in fp_simples.iter().enumerate() {
        let h1_fp = h1(&inflate(v, &ext.q)?, settings)?;
        let deg = crate::modrep::end_dim(v);
        entries.push(PprimeEntry { simple: i, dim: v.dim(), deg, h1: h1_fp, delta: deltas[i] });
    }
    let solvable = entries.iter().all(|e| e.h1 as u64 <= e.delta);
    Ok(PprimeVerdict { solvable, entries })
}

#[derive(Clone, Debug, Serialize)]
pub struct RouteReport {
    pub strong: bool,
    pub pprime: bool,
}

/// Runs both criteria on a problem with p′ quotient group and demands agreement.
pub fn cross_check_routes(problem: &EmbeddingProblem, settings: &Settings) -> Result<RouteReport> {
    let strong = decide_strong_solvability(problem, settings)?;
    let pprime = pprime_criterion(&problem.extension, problem.p(), &PprimeData::Cover(&problem.cover), settings)?;
    if strong.solvable != pprime.solvable {
        return Err(Error::RouteDivergence(format!(
            "slack criterion {} vs p' criterion {}: slack {:?}, p' entries {:?}",
            strong.solvable, pprime.solvable, strong.slack, pprime.entries
        )));
    }
    Ok(RouteReport { strong: strong.solvable, pprime: pprime.solvable })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::split_extension;
    use crate::group::{automorphisms, cyclic, direct_product, elementary_abelian, GroupHom};

    fn s() -> Settings {
        Settings::default()
    }

    fn over_trivial(g: &FiniteGroup, gamma: u64, p: u32) -> EmbeddingProblem {
        EmbeddingProblem::new(CoverDatum::from_gamma(p, gamma, &s()).unwrap(), ExtensionData::over_trivial(g)).unwrap()
    }

    #[test]
    fn kani_examples() {
        let slack = kani_check(&over_trivial(&cyclic(3), 2, 3), &s()).unwrap();
        assert_eq!(slack[0].slack, 1);
        let slack = kani_check(&over_trivial(&elementary_abelian(3, 3), 2, 3), &s()).unwrap();
        assert_eq!(slack[0].slack, -1);
        let c3 = cyclic(3);
        let cover = CoverDatum::ordinary(&c3, 2, 2, &s()).unwrap();
        let id = EmbeddingProblem::new(cover.clone(), ExtensionData::identity(&c3)).unwrap();
        let slack = kani_check(&id, &s()).unwrap();
        assert!(slack.iter().zip(&cover.delta).all(|(e, &d)| e.slack == d as i64));
    }

    #[test]
    fn trivial_base_rank_pairs() {
        let v = decide_strong_solvability(&over_trivial(&elementary_abelian(2, 2), 2, 2), &s()).unwrap();
        assert!(v.solvable);
        let v = decide_strong_solvability(&over_trivial(&elementary_abelian(2, 3), 2, 2), &s()).unwrap();
        assert!(!v.solvable);
    }

    #[test]
    fn z4_over_z2_is_nontrivial_and_solvable() {
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let q = GroupHom::from_gen_images(&c4, &c2, &[c2.gens()[0]]).unwrap();
        let ext = ExtensionData::from_epimorphism(q).unwrap();
        let cover = CoverDatum::ordinary(&c2, 2, 1, &s()).unwrap();
        assert_eq!(cover.delta, vec![0]);
        let problem = EmbeddingProblem::new(cover, ext).unwrap();
        let b = classify_base_case(&problem, &s()).unwrap();
        assert_eq!(b.class, ClassKind::Nontrivial);
        let v = decide_strong_solvability(&problem, &s()).unwrap();
        assert!(v.solvable);
        assert_eq!(v.slack[0].slack, 0);
        // the verdict does not depend on δ
        for d in 1..4 {
            let other = CoverDatum::user_supplied(&c2, 2, 1, vec![d], &s()).unwrap();
            let problem = EmbeddingProblem::new(other, problem.extension.clone()).unwrap();
            assert!(decide_strong_solvability(&problem, &s()).unwrap().solvable);
        }
    }

    #[test]
    fn split_base_case_needs_positive_delta() {
        let c2 = cyclic(2);
        let f2 = Field::prime(2).unwrap();
        let ext = split_extension(&GModule::trivial(&c2, &f2), 5000).unwrap();
        let cover = CoverDatum::ordinary(&c2, 2, 2, &s()).unwrap();
        let problem = EmbeddingProblem::new(cover, ext.clone()).unwrap();
        let b = classify_base_case(&problem, &s()).unwrap();
        assert_eq!(b.class, ClassKind::Trivial);
        assert_eq!(b.h1_gap, 1);
        assert_eq!((b.hom_count, b.h2_side), (2, 1));
        assert!(decide_strong_solvability(&problem, &s()).unwrap().solvable);
        let zero = CoverDatum::user_supplied(&c2, 2, 2, vec![0], &s()).unwrap();
        let problem = EmbeddingProblem::new(zero, ext).unwrap();
        assert!(!decide_strong_solvability(&problem, &s()).unwrap().solvable);
    }

    #[test]
    fn traces() {
        let t = reduction_trace(&over_trivial(&cyclic(4), 1, 2), &s()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].kind, StepKind::FrattiniQuotient);
        // A4 over Z/3: the kernel is already simple
        let v4 = elementary_abelian(2, 2);
        let c3 = cyclic(3);
        let auts = automorphisms(&v4);
        let rot = auts.iter().find(|a| (1..4).all(|x| a[x] != x)).unwrap().clone();
        let (_, _, proj) = semidirect_product(&v4, &c3, &[rot]).unwrap();
        let ext = ExtensionData::from_epimorphism(proj).unwrap();
        let cover = CoverDatum::ordinary(&c3, 2, 2, &s()).unwrap();
        let problem = EmbeddingProblem::new(cover.clone(), ext.clone()).unwrap();
        assert!(reduction_trace(&problem, &s()).unwrap().is_empty());
        let b = classify_base_case(&problem, &s()).unwrap();
        assert_eq!(b.class, ClassKind::Trivial);
        assert_eq!(b.divisors.len(), 2);
        let fp = Field::prime(2).unwrap();
        let (kmod, _) = kernel_module(&ext, 2).unwrap();
        assert_eq!(kmod.field(), &fp);
        let (count, h2_side) =
            hom_count(&cover.over_field(&problem.working_field(&s()).unwrap(), &s()).unwrap(), &kmod, &s()).unwrap();
        assert_eq!((count, h2_side), (2, 0));
        // (Z/2)² with trivial Z/3 action reduces through one simple quotient
        let g = direct_product(&v4, &c3);
        let q = GroupHom::from_gen_images(&g, &c3, &[0, 0, c3.gens()[0]]).unwrap();
        let problem = EmbeddingProblem::new(cover, ExtensionData::from_epimorphism(q).unwrap()).unwrap();
        let t = reduction_trace(&problem, &s()).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].kind, StepKind::SimpleQuotient);
    }

    #[test]
    fn pprime_examples() {
        let t = FiniteGroup::trivial();
        for gamma in 0..4 {
            let v = decide_pprime_profinite(&t, 2, &elementary_abelian(2, 2), &[], &PprimeData::Gamma(gamma), &s())
                .unwrap();
            assert_eq!(v.solvable, gamma >= 2);
        }
        assert!(matches!(
            decide_pprime_profinite(&cyclic(2), 2, &cyclic(2), &[vec![0, 1]], &PprimeData::Gamma(3), &s()),
            Err(Error::NotPPrime { .. })
        ));
        let v = decide_pprime_profinite(&t, 3, &cyclic(3), &[], &PprimeData::FpTable(vec![0]), &s()).unwrap();
        assert!(!v.solvable);
    }

    #[test]
    fn routes_agree_on_a4() {
        let v4 = elementary_abelian(2, 2);
        let c3 = cyclic(3);
        let rot = automorphisms(&v4).into_iter().find(|a| (1..4).all(|x| a[x] != x)).unwrap();
        let (_, _, proj) = semidirect_product(&v4, &c3, &[rot]).unwrap();
        let cover = CoverDatum::ordinary(&c3, 2, 2, &s()).unwrap();
        let problem = EmbeddingProblem::new(cover, ExtensionData::from_epimorphism(proj).unwrap()).unwrap();
        let r = cross_check_routes(&problem, &s()).unwrap();
        assert!(r.strong && r.pprime);
    }
}
