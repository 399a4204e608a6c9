//! Modules over group algebras F_q[G] given by generator matrices.
//!
//! Vectors are columns: `ρ(g)·v`. Invariant subspaces are kept as
//! [`EchelonBasis`] values so sub- and quotient modules read their coordinates
//! straight off the pivots.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Field, FieldEmbedding};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::matrix::{EchelonBasis, FqMatrix, Vector};
use crate::poly::{self, Poly};
use crate::settings::Settings;

/// Exhaustive relation checks run up to this group order.
const VERIFY_LIMIT: usize = 512;
/// Largest number of projective points enumerated by exhaustive searches.
const ENUM_LIMIT: u64 = 1 << 16;

#[derive(Clone)]
pub struct GModule {
    group: FiniteGroup,
    field: Field,
    dim: usize,
    gens: Vec<FqMatrix>,
    elems: OnceLock<Arc<Vec<FqMatrix>>>,
}

impl fmt::Debug for GModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GModule(dim {} over {:?} for {:?})", self.dim, self.field, self.group)
    }
}

impl GModule {
    /// A module from generator matrices, with every relation of the group checked.
    pub fn new(group: &FiniteGroup, field: &Field, gens: Vec<FqMatrix>) -> Result<GModule> {
        if gens.len() != group.num_gens() {
            return Err(Error::InvalidModule(format!("{} matrices for {} generators", gens.len(), group.num_gens())));
        }
        let dim = gens.first().map_or(0, |m| m.rows());
        for (i, m) in gens.iter().enumerate() {
            if m.field() != field {
                return Err(Error::FieldMismatch(format!("matrix {i} is over {:?}, expected {field:?}", m.field())));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "matrix {i} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_invertible() {
                return Err(Error::InvalidModule(format!("matrix {i} is singular")));
            }
        }
        if group.num_gens() == 0 && group.order() == 1 {
            return Err(Error::InvalidModule("use GModule::trivial_group for the trivial group".into()));
        }
        let m = GModule::new_unchecked(group, field, dim, gens);
        m.verify_relations()?;
        Ok(m)
    }

    /// A module of the trivial group (which has no generators) of given dimension.
    pub fn trivial_group(group: &FiniteGroup, field: &Field, dim: usize) -> GModule {
        assert_eq!(group.order(), 1);
        GModule::new_unchecked(group, field, dim, Vec::new())
    }

    pub(crate) fn new_unchecked(group: &FiniteGroup, field: &Field, dim: usize, gens: Vec<FqMatrix>) -> GModule {
        GModule { group: group.clone(), field: field.clone(), dim, gens, elems: OnceLock::new() }
    }

    fn verify_relations(&self) -> Result<()> {
        let n = self.group.order();
        let elems = self.element_matrices();
        let limit = if n <= VERIFY_LIMIT { n } else { VERIFY_LIMIT };
        let step = n.div_ceil(limit);
        for x in (0..n).step_by(step.max(1)) {
            for (si, &s) in self.group.gens().iter().enumerate() {
                if elems[x].mul(&self.gens[si]) != elems[self.group.mul(x, s)] {
                    return Err(Error::InvalidModule(format!(
                        "matrices violate a relation at element {}",
                        self.group.label(x)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: &FiniteGroup, field: &Field) -> GModule {
        GModule::scalar_character(group, field, &vec![1; group.num_gens()])
    }

    /// The 1-dimensional module with the given generator values; unchecked
    /// beyond the relation pass, so callers pass a genuine character.
    pub fn character(group: &FiniteGroup, field: &Field, values: &[u32]) -> Result<GModule> {
        if group.order() == 1 {
            return Ok(GModule::trivial_group(group, field, 1));
        }
        let gens = values.iter().map(|&v| FqMatrix::from_rows(field, 1, &[vec![v]])).collect();
        GModule::new(group, field, gens)
    }

    fn scalar_character(group: &FiniteGroup, field: &Field, values: &[u32]) -> GModule {
        let gens = values.iter().map(|&v| FqMatrix::from_rows(field, 1, &[vec![v]])).collect();
        GModule::new_unchecked(group, field, 1, gens)
    }

    /// Sign character of a permutation group.
    pub fn sign(group: &FiniteGroup, field: &Field) -> Result<GModule> {
        let signs = group
            .generator_signs()
            .ok_or_else(|| Error::InvalidInput("sign character needs a permutation group".into()))?;
        let minus = field.neg(1);
        let values: Vec<u32> = signs.iter().map(|&odd| if odd { minus } else { 1 }).collect();
        Ok(GModule::scalar_character(group, field, &values))
    }

    /// Left regular module: basis indexed by elements, `g·e_x = e_{gx}`.
    pub fn regular(group: &FiniteGroup, field: &Field) -> GModule {
        let n = group.order();
        let perm_matrix = |g: usize| {
            let mut m = FqMatrix::zero(field, n, n);
            for x in 0..n {
                m.set(group.mul(g, x), x, 1);
            }
            m
        };
        let gens: Vec<FqMatrix> = group.gens().iter().map(|&s| perm_matrix(s)).collect();
        let module = GModule::new_unchecked(group, field, n, gens);
        let all: Vec<FqMatrix> = (0..n).map(perm_matrix).collect();
        let _ = module.elems.set(Arc::new(all));
        module
    }

    /// Natural permutation module of a permutation group: `g·e_i = e_{g(i)}`.
    pub fn permutation(group: &FiniteGroup, field: &Field) -> Result<GModule> {
        let perms = group
            .permutation_generators()
            .ok_or_else(|| Error::InvalidInput("permutation module needs a permutation group".into()))?;
        let n = perms.first().map_or(0, |p| p.len());
        let gens = perms
            .iter()
            .map(|p| {
                let mut m = FqMatrix::zero(field, n, n);
                for (i, &j) in p.iter().enumerate() {
                    m.set(j, i, 1);
                }
                m
            })
            .collect();
        if group.order() == 1 {
            return Ok(GModule::trivial_group(group, field, n));
        }
        GModule::new(group, field, gens)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gen_matrices(&self) -> &[FqMatrix] {
        &self.gens
    }

    /// Matrices of all elements, filled along the group's word tree.
    pub fn element_matrices(&self) -> &[FqMatrix] {
        self.elems.get_or_init(|| {
            let n = self.group.order();
            let mut out = Vec::with_capacity(n);
            out.push(FqMatrix::identity(&self.field, self.dim));
            for x in 1..n {
                let (y, s) = self.group.tree_parent(x).unwrap();
                let m = out[y].mul(&self.gens[s]);
                out.push(m);
            }
            Arc::new(out)
        })
    }

    pub fn element_matrix(&self, g: usize) -> &FqMatrix {
        &self.element_matrices()[g]
    }

    /// Traces of all element matrices, in element order.
    pub fn trace_vector(&self) -> Vec<u32> {
        self.element_matrices().iter().map(|m| m.trace()).collect()
    }

    /// The isomorphism-invariant sort key used for simple modules.
    pub fn canonical_key(&self) -> (usize, Vec<u32>) {
        (self.dim, self.trace_vector())
    }

    fn same_context(&self, other: &GModule) -> Result<()> {
        if self.group != other.group {
            return Err(Error::InvalidInput("modules of different groups".into()));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(format!("{:?} vs {:?}", self.field, other.field)));
        }
        Ok(())
    }

    /// The submodule spanned by an invariant subspace.
    pub fn submodule(&self, basis: &EchelonBasis) -> GModule {
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vector> =
                    basis.rows().iter().map(|b| basis.coords(&g.mul_vec(b)).expect("subspace is invariant")).collect();
                FqMatrix::from_rows(&self.field, basis.len(), &cols).transpose()
            })
            .collect();
        GModule::new_unchecked(&self.group, &self.field, basis.len(), gens)
    }

    /// `M/U` for an invariant subspace U, on the non-pivot coordinates.
    pub fn quotient(&self, basis: &EchelonBasis) -> GModule {
        let mut is_pivot = vec![false; self.dim];
        for &p in basis.pivots() {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.dim).filter(|&j| !is_pivot[j]).collect();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vector> = free
                    .iter()
                    .map(|&j| {
                        let mut e = vec![0; self.dim];
                        e[j] = 1;
                        let r = basis.reduce(&g.mul_vec(&e));
                        free.iter().map(|&i| r[i]).collect()
                    })
                    .collect();
                FqMatrix::from_rows(&self.field, free.len(), &cols).transpose()
            })
            .collect();
        GModule::new_unchecked(&self.group, &self.field, free.len(), gens)
    }

    pub fn base_change(&self, big: &Field) -> Result<GModule> {
        if big == &self.field {
            return Ok(self.clone());
        }
        let emb = FieldEmbedding::new(&self.field, big)?;
        let gens = self.gens.iter().map(|g| g.embed(&emb)).collect::<Result<Vec<_>>>()?;
        Ok(GModule::new_unchecked(&self.group, big, self.dim, gens))
    }

    /// Restriction along `hom: K → G`.
    pub fn restrict(&self, hom: &GroupHom) -> Result<GModule> {
        if hom.target() != &self.group {
            return Err(Error::InvalidInput("restriction along a map into another group".into()));
        }
        let k = hom.source();
        let gens = k.gens().iter().map(|&s| self.element_matrix(hom.apply(s)).clone()).collect();
        Ok(GModule::new_unchecked(k, &self.field, self.dim, gens))
    }

    pub fn direct_sum(&self, other: &GModule) -> Result<GModule> {
        self.same_context(other)?;
        let d = self.dim + other.dim;
        let gens = self
            .gens
            .iter()
            .zip(&other.gens)
            .map(|(a, b)| {
                let mut m = FqMatrix::zero(&self.field, d, d);
                for i in 0..self.dim {
                    for j in 0..self.dim {
                        m.set(i, j, a.get(i, j));
                    }
                }
                for i in 0..other.dim {
                    for j in 0..other.dim {
                        m.set(self.dim + i, self.dim + j, b.get(i, j));
                    }
                }
                m
            })
            .collect();
        Ok(GModule::new_unchecked(&self.group, &self.field, d, gens))
    }

    /// `T·ρ(g)·T⁻¹` for an invertible T.
    pub fn conjugate_by(&self, t: &FqMatrix) -> Result<GModule> {
        let ti = t.inverse().ok_or_else(|| Error::InvalidInput("conjugating matrix is singular".into()))?;
        let gens = self.gens.iter().map(|g| t.mul(g).mul(&ti)).collect();
        Ok(GModule::new_unchecked(&self.group, &self.field, self.dim, gens))
    }

    /// Fixed vectors of the whole group.
    pub fn fixed_space(&self) -> FqMatrix {
        fixed_vectors(&self.field, self.dim, self.gens.iter())
    }

    pub fn is_trivial_action(&self) -> bool {
        let id = FqMatrix::identity(&self.field, self.dim);
        self.gens.iter().all(|g| g == &id)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("module dim={} field={}^{}\n", self.dim, self.field.characteristic(), self.field.degree());
        for (i, g) in self.gens.iter().enumerate() {
            s.push_str(&format!("gen {}\n", i + 1));
            s.push_str(&g.to_text());
        }
        s
    }

    /// Parse the format produced by [`GModule::to_text`]; the field is the
    /// default one for the stated `p^m`.
    pub fn from_text(group: &FiniteGroup, text: &str) -> Result<GModule> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty()).peekable();
        let header = lines.next().ok_or_else(|| Error::parse(1, 1, "empty module text"))?;
        let mut dim = None;
        let mut field = None;
        let mut words = header.split_whitespace();
        if words.next() != Some("module") {
            return Err(Error::parse(1, 1, "expected `module dim=<d> field=p^m`"));
        }
        for w in words {
            if let Some(v) = w.strip_prefix("dim=") {
                dim = Some(v.parse::<usize>().map_err(|_| Error::parse(1, 1, "bad dim"))?);
            } else if let Some(v) = w.strip_prefix("field=") {
                let (p, m) = v.split_once('^').unwrap_or((v, "1"));
                let p = p.parse::<u32>().map_err(|_| Error::parse(1, 1, "bad field"))?;
                let m = m.parse::<usize>().map_err(|_| Error::parse(1, 1, "bad field"))?;
                field = Some(Field::new(p, m)?);
            }
        }
        let (dim, field) = match (dim, field) {
            (Some(d), Some(f)) => (d, f),
            _ => return Err(Error::parse(1, 1, "header needs dim= and field=")),
        };
        let mut gens = Vec::new();
        while let Some(line) = lines.next() {
            if !line.starts_with("gen") {
                return Err(Error::InvalidInput(format!("expected `gen <i>`, found {line:?}")));
            }
            let mut block = String::new();
            for _ in 0..dim {
                let row = lines.next().ok_or_else(|| Error::InvalidInput("truncated matrix block".into()))?;
                block.push_str(row);
                block.push('\n');
            }
            let m = FqMatrix::from_text(&field, &block)?;
            if m.cols() != dim {
                return Err(Error::DimensionMismatch(format!("row length {} for dim {dim}", m.cols())));
            }
            gens.push(m);
        }
        if group.order() == 1 && gens.is_empty() {
            return Ok(GModule::trivial_group(group, &field, dim));
        }
        GModule::new(group, &field, gens)
    }
}

fn fixed_vectors<'a>(field: &Field, dim: usize, mats: impl Iterator<Item = &'a FqMatrix>) -> FqMatrix {
    let id = FqMatrix::identity(field, dim);
    let mut stacked = FqMatrix::zero(field, 0, dim);
    for m in mats {
        stacked = stacked.vstack(&m.sub(&id));
    }
    stacked.kernel_basis()
}

/// Smallest subspace containing `seeds` and stable under `mats`.
pub fn spin_under(field: &Field, dim: usize, mats: &[FqMatrix], seeds: &[Vector]) -> EchelonBasis {
    let mut basis = EchelonBasis::new(field, dim);
    let mut queue: Vec<Vector> = Vec::new();
    for s in seeds {
        if let Some(r) = basis.insert(s) {
            queue.push(r);
        }
    }
    while let Some(v) = queue.pop() {
        if basis.len() == dim {
            break;
        }
        for m in mats {
            if let Some(r) = basis.insert(&m.mul_vec(&v)) {
                queue.push(r);
            }
        }
    }
    basis
}

pub fn spin(m: &GModule, seeds: &[Vector]) -> EchelonBasis {
    spin_under(&m.field, m.dim, &m.gens, seeds)
}

/// Evidence that a module is irreducible.
#[derive(Clone, Debug)]
pub struct IrreducibilityCertificate {
    /// Irreducible factor f with `dim ker f(θ) = deg f`, empty for dimension ≤ 1.
    pub factor: Poly,
    pub null_vector: Vector,
    pub transpose_vector: Vector,
    /// Whether the certificate came from the exhaustive fallback.
    pub exhaustive: bool,
}

#[derive(Clone, Debug)]
pub enum Irreducibility {
    Irreducible(IrreducibilityCertificate),
    /// A proper nonzero invariant subspace.
    Reducible(EchelonBasis),
}

impl Irreducibility {
    pub fn is_irreducible(&self) -> bool {
        matches!(self, Irreducibility::Irreducible(_))
    }
}

fn random_algebra_element(m: &GModule, rng: &mut ChaCha8Rng) -> FqMatrix {
    let n = m.group.order();
    let q = m.field.order();
    let terms = n.min(4);
    let mut theta = FqMatrix::zero(&m.field, m.dim, m.dim);
    for _ in 0..terms {
        let g = rng.gen_range(0..n);
        let c = rng.gen_range(1..q);
        theta = theta.add(&m.element_matrix(g).scale(c));
    }
    theta
}

/// Norton-style irreducibility test with the Holt–Rees factor refinement.
///
/// For a random algebra element θ and an irreducible factor f of its
/// characteristic polynomial: if a null vector of f(θ) or of f(θ)ᵀ spins to a
/// proper subspace the module is reducible; if both fill the space and
/// `dim ker f(θ) = deg f` the module is irreducible.
pub fn meataxe_is_irreducible(m: &GModule, seed: u64, budget: usize) -> Irreducibility {
    assert!(m.dim >= 1, "irreducibility of the zero module is undefined");
    if m.dim == 1 {
        return Irreducibility::Irreducible(IrreducibilityCertificate {
            factor: Vec::new(),
            null_vector: vec![1],
            transpose_vector: vec![1],
            exhaustive: false,
        });
    }
    let tgens: Vec<FqMatrix> = m.gens.iter().map(|g| g.transpose()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, FqMatrix)> = None;
    let mut attempts = 0;
    loop {
        // after the budget, retry the exhaustive path once per further budget
        if attempts >= budget && (attempts - budget).is_multiple_of(budget.max(1)) {
            if let Some(v) = exhaustive_fallback(m, &tgens, best.as_ref().map(|b| &b.1)) {
                return v;
            }
        }
        attempts += 1;
        let theta = random_algebra_element(m, &mut rng);
        for f in poly::distinct_factors(&m.field, &theta.charpoly()) {
            let ft = theta.eval_poly(&f);
            let ker = ft.kernel_basis();
            let v = ker.row(0).to_vec();
            let u = spin(m, std::slice::from_ref(&v));
            if u.len() < m.dim {
                return Irreducibility::Reducible(u);
            }
            let kt = ft.transpose().kernel_basis();
            let w = kt.row(0).to_vec();
            let ut = spin_under(&m.field, m.dim, &tgens, std::slice::from_ref(&w));
            if ut.len() < m.dim {
                return Irreducibility::Reducible(annihilator(&m.field, m.dim, &ut));
            }
            let deg = f.len() - 1;
            if ker.rows() == deg {
                return Irreducibility::Irreducible(IrreducibilityCertificate {
                    factor: f,
                    null_vector: v,
                    transpose_vector: w,
                    exhaustive: false,
                });
            }
            if best.as_ref().is_none_or(|b| ker.rows() < b.0) {
                best = Some((ker.rows(), ft));
            }
        }
    }
}

/// `{x : u·x = 0 for all u ∈ U}`, an invariant subspace when U is stable under transposes.
fn annihilator(field: &Field, dim: usize, u: &EchelonBasis) -> EchelonBasis {
    let k = FqMatrix::from_rows(field, dim, u.rows()).kernel_basis();
    let mut out = EchelonBasis::new(field, dim);
    for r in k.row_vecs() {
        out.insert(&r);
    }
    out
}

fn projective_points(field: &Field, basis: &FqMatrix) -> Option<Vec<Vector>> {
    let k = basis.rows();
    let q = field.order() as u64;
    let count = (0..k).try_fold(1u64, |acc, _| acc.checked_mul(q))?;
    if count > ENUM_LIMIT {
        return None;
    }
    let mut out = Vec::new();
    for code in 1..count {
        let mut c = code;
        let mut coeffs = Vec::with_capacity(k);
        for _ in 0..k {
            coeffs.push((c % q) as u32);
            c /= q;
        }
        // normalized: last nonzero coefficient equals 1
        if coeffs.iter().rev().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let mut v = vec![0; basis.cols()];
        for (i, &a) in coeffs.iter().enumerate() {
            if a != 0 {
                for (x, &b) in v.iter_mut().zip(basis.row(i)) {
                    *x = field.mul_add(a, b, *x);
                }
            }
        }
        out.push(v);
    }
    Some(out)
}

/// Deterministic completion: spin every standard basis vector, then every
/// projective point of ker θ and ker θᵀ for the most selective θ seen. By
/// Norton's argument a proper submodule meets one of the two kernels.
fn exhaustive_fallback(m: &GModule, tgens: &[FqMatrix], theta: Option<&FqMatrix>) -> Option<Irreducibility> {
    for i in 0..m.dim {
        let mut e = vec![0; m.dim];
        e[i] = 1;
        let u = spin(m, &[e]);
        if u.len() < m.dim {
            return Some(Irreducibility::Reducible(u));
        }
    }
    let theta = theta?;
    let ker = theta.kernel_basis();
    let kert = theta.transpose().kernel_basis();
    let vs = projective_points(&m.field, &ker)?;
    let ws = projective_points(&m.field, &kert)?;
    for v in &vs {
        let u = spin(m, std::slice::from_ref(v));
        if u.len() < m.dim {
            return Some(Irreducibility::Reducible(u));
        }
    }
    for w in &ws {
        let ut = spin_under(&m.field, m.dim, tgens, std::slice::from_ref(w));
        if ut.len() < m.dim {
            return Some(Irreducibility::Reducible(annihilator(&m.field, m.dim, &ut)));
        }
    }
    Some(Irreducibility::Irreducible(IrreducibilityCertificate {
        factor: Vec::new(),
        null_vector: vs[0].clone(),
        transpose_vector: ws[0].clone(),
        exhaustive: true,
    }))
}

pub fn is_irreducible(m: &GModule, settings: &Settings) -> bool {
    meataxe_is_irreducible(m, settings.seed, settings.meataxe_budget).is_irreducible()
}

/// A simple constituent and its multiplicity.
#[derive(Clone, Debug)]
pub struct CompositionFactor {
    pub module: GModule,
    pub multiplicity: usize,
}

/// Composition factors up to isomorphism, sorted canonically.
///
/// Simple modules are matched by dimension and trace vector: the traces of
/// pairwise non-isomorphic simple modules over a finite field are distinct
/// functions on the group algebra.
pub fn composition_factors(m: &GModule, settings: &Settings) -> Vec<CompositionFactor> {
    let mut found: BTreeMap<(usize, Vec<u32>), CompositionFactor> = BTreeMap::new();
    let mut stack = vec![m.clone()];
    let mut round = 0u64;
    while let Some(x) = stack.pop() {
        if x.dim == 0 {
            continue;
        }
        round += 1;
        let seed = settings.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(round);
        match meataxe_is_irreducible(&x, seed, settings.meataxe_budget) {
            Irreducibility::Irreducible(_) => {
                found
                    .entry(x.canonical_key())
                    .and_modify(|c| c.multiplicity += 1)
                    .or_insert(CompositionFactor { module: x, multiplicity: 1 });
            }
            Irreducibility::Reducible(u) => {
                stack.push(x.quotient(&u));
                stack.push(x.submodule(&u));
            }
        }
    }
    found.into_values().collect()
}

/// Basis of Hom_G(M, N) as `dim N × dim M` matrices T with `T·ρ_M = ρ_N·T`.
pub fn hom_space(m: &GModule, n: &GModule) -> Result<Vec<FqMatrix>> {
    m.same_context(n)?;
    let (dm, dn) = (m.dim, n.dim);
    let unknowns = dm * dn;
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    let f = &m.field;
    let mut rows: Vec<Vector> = Vec::new();
    for (a, b) in m.gens.iter().zip(&n.gens) {
        // (T a - b T)_{ij} = Σ_k T_ik a_kj - Σ_k b_ik T_kj
        for i in 0..dn {
            for j in 0..dm {
                let mut row = vec![0; unknowns];
                for k in 0..dm {
                    let v = a.get(k, j);
                    if v != 0 {
                        row[i * dm + k] = f.add(row[i * dm + k], v);
                    }
                }
                for k in 0..dn {
                    let v = b.get(i, k);
                    if v != 0 {
                        row[k * dm + j] = f.sub(row[k * dm + j], v);
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = FqMatrix::from_rows(f, unknowns, &rows);
    let kernel = if rows.is_empty() { FqMatrix::identity(f, unknowns) } else { system.kernel_basis() };
    Ok(kernel
        .row_vecs()
        .into_iter()
        .map(|v| {
            let chunks: Vec<Vector> = v.chunks(dm).map(|c| c.to_vec()).collect();
            FqMatrix::from_rows(f, dm, &chunks)
        })
        .collect())
}

pub fn end_dim(m: &GModule) -> usize {
    hom_space(m, m).map(|h| h.len()).unwrap_or(0)
}

/// An invertible intertwiner `T` with `T·ρ_M(g) = ρ_N(g)·T`, if one exists.
pub fn are_isomorphic(m: &GModule, n: &GModule, seed: u64) -> Option<FqMatrix> {
    if m.same_context(n).is_err() || m.dim != n.dim {
        return None;
    }
    if m.dim == 0 {
        return Some(FqMatrix::zero(&m.field, 0, 0));
    }
    if m.trace_vector() != n.trace_vector() {
        return None;
    }
    let basis = hom_space(m, n).ok()?;
    if let Some(t) = basis.iter().find(|t| t.is_invertible()) {
        return Some(t.clone());
    }
    if basis.len() < 2 {
        return None;
    }
    let f = &m.field;
    let combine = |coeffs: &[u32]| {
        let mut t = FqMatrix::zero(f, n.dim, m.dim);
        for (c, b) in coeffs.iter().zip(&basis) {
            if *c != 0 {
                t = t.add(&b.scale(*c));
            }
        }
        t
    };
    let q = f.order() as u64;
    let total = (0..basis.len()).try_fold(1u64, |acc, _| acc.checked_mul(q));
    if let Some(total) = total.filter(|&t| t <= ENUM_LIMIT) {
        for code in 1..total {
            let mut c = code;
            let coeffs: Vec<u32> = (0..basis.len())
                .map(|_| {
                    let d = (c % q) as u32;
                    c /= q;
                    d
                })
                .collect();
            let t = combine(&coeffs);
            if t.is_invertible() {
                return Some(t);
            }
        }
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..512 {
        let coeffs: Vec<u32> = (0..basis.len()).map(|_| rng.gen_range(0..f.order())).collect();
        let t = combine(&coeffs);
        if t.is_invertible() {
            return Some(t);
        }
    }
    None
}

/// A complete, canonically ordered list of simple modules.
#[derive(Clone, Debug)]
pub struct SimpleSet {
    group: FiniteGroup,
    field: Field,
    simples: Vec<GModule>,
}

impl SimpleSet {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.simples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simples.is_empty()
    }

    pub fn get(&self, i: usize) -> &GModule {
        &self.simples[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &GModule> {
        self.simples.iter()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.simples.iter().map(|s| s.dim).collect()
    }

    /// Index of the trivial module.
    pub fn trivial_index(&self) -> usize {
        self.simples
            .iter()
            .position(|s| s.dim == 1 && s.is_trivial_action())
            .expect("the trivial module is always simple")
    }

    /// Index of the listed simple isomorphic to a simple module `s`.
    pub fn index_of(&self, s: &GModule) -> Option<usize> {
        if s.group != self.group || s.field != self.field {
            return None;
        }
        let key = s.canonical_key();
        let i = self.simples.iter().position(|t| t.canonical_key() == key)?;
        // confirm with a nonzero intertwiner (Schur: then an isomorphism)
        match hom_space(s, &self.simples[i]) {
            Ok(h) if !h.is_empty() => Some(i),
            _ => None,
        }
    }
}

pub fn simple_modules(group: &FiniteGroup, field: &Field, settings: &Settings) -> Result<SimpleSet> {
    if group.order() > settings.group_cap {
        return Err(Error::GroupTooLarge { context: "simple modules".into(), limit: settings.group_cap });
    }
    if group.order() == 1 {
        return Ok(SimpleSet {
            group: group.clone(),
            field: field.clone(),
            simples: vec![GModule::trivial_group(group, field, 1)],
        });
    }
    let reg = GModule::regular(group, field);
    let simples = composition_factors(&reg, settings).into_iter().map(|c| c.module).collect();
    Ok(SimpleSet { group: group.clone(), field: field.clone(), simples })
}

/// Least m such that F_{p^m} splits G: the lcm of the endomorphism-field
/// degrees of the F_p-simples, certified by `dim End = 1` after extension.
pub fn splitting_field_degree(group: &FiniteGroup, p: u32, settings: &Settings) -> Result<usize> {
    let fp = Field::prime(p)?;
    let simples = simple_modules(group, &fp, settings)?;
    let mut m = 1;
    for s in simples.iter() {
        m = lcm(m, end_dim(s));
    }
    if m > settings.field_cap {
        return Err(Error::SplittingCapExceeded { needed: m, cap: settings.field_cap });
    }
    let k = Field::new(p, m)?;
    let over_k = simple_modules(group, &k, settings)?;
    if over_k.iter().any(|s| end_dim(s) != 1) {
        return Err(Error::NotSplit(format!("{k:?} for {group:?}")));
    }
    Ok(m)
}

/// The least splitting field F_{p^m} of G.
pub fn splitting_field(group: &FiniteGroup, p: u32, settings: &Settings) -> Result<Field> {
    Field::new(p, splitting_field_degree(group, p, settings)?)
}

pub fn is_splitting_field(set: &SimpleSet) -> bool {
    set.iter().all(|s| end_dim(s) == 1)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// `q*V` for `q: G ↠ H` and an H-module V.
pub fn inflate(v: &GModule, q: &GroupHom) -> Result<GModule> {
    if q.target() != &v.group {
        return Err(Error::InvalidInput("inflation along a map to another group".into()));
    }
    let g = q.source();
    if g.order() == 1 {
        return Ok(GModule::trivial_group(g, &v.field, v.dim));
    }
    let gens = g.gens().iter().map(|&s| v.element_matrix(q.apply(s)).clone()).collect();
    Ok(GModule::new_unchecked(g, &v.field, v.dim, gens))
}

/// `q_*(M^P)`: vectors fixed by the normal subgroup P with the induced action of G/P.
pub fn fixed_point_module(m: &GModule, p: &Subgroup, proj: &GroupHom) -> Result<GModule> {
    if p.parent() != &m.group || proj.source() != &m.group {
        return Err(Error::InvalidInput("subgroup and projection must belong to the module's group".into()));
    }
    if !p.is_normal() {
        return Err(Error::NotNormal("fixed points need a normal subgroup".into()));
    }
    if proj.kernel() != *p {
        return Err(Error::InvalidInput("projection kernel differs from the subgroup".into()));
    }
    let fixed = fixed_vectors(&m.field, m.dim, p.generators().iter().map(|&x| m.element_matrix(x)));
    let mut basis = EchelonBasis::new(&m.field, m.dim);
    for r in fixed.row_vecs() {
        basis.insert(&r);
    }
    let q = proj.target();
    if q.order() == 1 {
        return Ok(GModule::trivial_group(q, &m.field, basis.len()));
    }
    let section = proj.section().ok_or_else(|| Error::NotSurjective("projection".into()))?;
    let gens = q
        .gens()
        .iter()
        .map(|&t| {
            let g = m.element_matrix(section[t]);
            let cols: Vec<Vector> =
                basis.rows().iter().map(|b| basis.coords(&g.mul_vec(b)).expect("fixed space is stable")).collect();
            FqMatrix::from_rows(&m.field, basis.len(), &cols).transpose()
        })
        .collect();
    Ok(GModule::new_unchecked(q, &m.field, basis.len(), gens))
}

/// Simple summands of `k ⊗ 𝒱` for an F_p-simple 𝒱; their number is deg 𝒱.
///
/// The base change is checked to be semisimple and multiplicity free.
pub fn decompose_over_extension(v: &GModule, big: &Field, settings: &Settings) -> Result<Vec<GModule>> {
    let vk = v.base_change(big)?;
    let factors = composition_factors(&vk, settings);
    if let Some(c) = factors.iter().find(|c| c.multiplicity > 1) {
        return Err(Error::MultiplicityAnomaly(format!(
            "a summand of dimension {} occurs {} times in the base change of a {}-dimensional simple",
            c.module.dim, c.multiplicity, v.dim
        )));
    }
    // semisimple iff the socle is everything: Σ dim S · dim Hom(S, M) / dim End S = dim M
    let mut socle = 0;
    for c in &factors {
        let hom = hom_space(&c.module, &vk)?.len();
        socle += c.module.dim * hom / end_dim(&c.module).max(1);
    }
    if socle != vk.dim {
        return Err(Error::ConjugateAnomaly(format!(
            "base change of a {}-dimensional simple is not semisimple (socle {socle})",
            v.dim
        )));
    }
    Ok(factors.into_iter().map(|c| c.module).collect())
}

/// Whether the simple module `s` (over the big field) is a summand of `k ⊗ 𝒱`.
pub fn divides(s: &GModule, v: &GModule, settings: &Settings) -> Result<bool> {
    let parts = decompose_over_extension(v, s.field(), settings)?;
    let key = s.canonical_key();
    Ok(parts.iter().any(|t| t.canonical_key() == key))
}

/// Correspondence between simples over F_p and over a splitting field k.
#[derive(Clone, Debug)]
pub struct RationalClasses {
    pub fp: SimpleSet,
    pub k: SimpleSet,
    /// For each k-simple, the F_p-simple it divides.
    pub class_of: Vec<usize>,
    /// For each F_p-simple, the k-simples dividing it (ascending).
    pub members: Vec<Vec<usize>>,
}

impl RationalClasses {
    pub fn deg(&self, fp_index: usize) -> usize {
        self.members[fp_index].len()
    }
}

pub fn rational_classes(fp_set: &SimpleSet, k_set: &SimpleSet, settings: &Settings) -> Result<RationalClasses> {
    let mut class_of = vec![usize::MAX; k_set.len()];
    let mut members = vec![Vec::new(); fp_set.len()];
    for (i, v) in fp_set.iter().enumerate() {
        for part in decompose_over_extension(v, k_set.field(), settings)? {
            let j = k_set
                .index_of(&part)
                .ok_or_else(|| Error::ConjugateAnomaly("summand missing from the simple set".into()))?;
            if class_of[j] != usize::MAX {
                return Err(Error::ConjugateAnomaly(format!("k-simple {j} divides two F_p-simples")));
            }
            class_of[j] = i;
            members[i].push(j);
        }
        members[i].sort_unstable();
    }
    if class_of.contains(&usize::MAX) {
        return Err(Error::ConjugateAnomaly("some k-simple divides no F_p-simple".into()));
    }
    Ok(RationalClasses { fp: fp_set.clone(), k: k_set.clone(), class_of, members })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, direct_product, library, symmetric};

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn element_matrices_follow_words() {
        let g = symmetric(3).unwrap();
        let f = Field::prime(2).unwrap();
        let reg = GModule::regular(&g, &f);
        for x in 0..6 {
            let m = reg.element_matrix(x);
            for y in 0..6 {
                assert_eq!(m.get(g.mul(x, y), y), 1);
            }
            assert_eq!(reg.element_matrix(x).mul(reg.element_matrix(g.inv(x))), FqMatrix::identity(&f, 6));
        }
        let traces = reg.trace_vector();
        assert_eq!(traces[0], 0); // 6 = 0 in F_2
        assert!(traces[1..].iter().all(|&t| t == 0));
        let f5 = Field::prime(5).unwrap();
        let reg5 = GModule::regular(&g, &f5);
        assert_eq!(reg5.trace_vector()[0], 1);
    }

    #[test]
    fn relation_check_rejects_bad_matrices() {
        let c3 = cyclic(3);
        let f = Field::prime(2).unwrap();
        // order-2 matrix cannot represent a generator of order 3
        let swap = FqMatrix::from_ints(&f, &[vec![0, 1], vec![1, 0]]);
        assert!(GModule::new(&c3, &f, vec![swap]).is_err());
        let comp = FqMatrix::from_ints(&f, &[vec![0, 1], vec![1, 1]]);
        assert!(GModule::new(&c3, &f, vec![comp]).is_ok());
    }

    #[test]
    fn spin_examples() {
        let c2 = cyclic(2);
        let f = Field::prime(2).unwrap();
        let reg = GModule::regular(&c2, &f);
        assert_eq!(spin(&reg, &[vec![0, 0]]).len(), 0);
        assert_eq!(spin(&reg, &[vec![1, 1]]).len(), 1);
        assert_eq!(spin(&reg, &[vec![1, 0]]).len(), 2);
    }

    #[test]
    fn meataxe_examples() {
        let c2 = cyclic(2);
        let f2 = Field::prime(2).unwrap();
        match meataxe_is_irreducible(&GModule::regular(&c2, &f2), 1, 200) {
            Irreducibility::Reducible(u) => {
                assert_eq!(u.len(), 1);
                assert!(u.contains(&[1, 1]));
            }
            _ => panic!("regular F_2[C2] is reducible"),
        }
        let c3 = cyclic(3);
        let comp = FqMatrix::from_ints(&f2, &[vec![0, 1], vec![1, 1]]);
        let m = GModule::new(&c3, &f2, vec![comp]).unwrap();
        assert!(meataxe_is_irreducible(&m, 1, 200).is_irreducible());
        // tiny budget forces the exhaustive path
        assert!(meataxe_is_irreducible(&m, 1, 0).is_irreducible());
        assert_eq!(end_dim(&m), 2);
    }

    #[test]
    fn composition_factor_examples() {
        let f3 = Field::prime(3).unwrap();
        let c3 = cyclic(3);
        let cf = composition_factors(&GModule::regular(&c3, &f3), &s());
        assert_eq!(cf.len(), 1);
        assert_eq!((cf[0].module.dim(), cf[0].multiplicity), (1, 3));
        let s3 = symmetric(3).unwrap();
        let f2 = Field::prime(2).unwrap();
        let cf = composition_factors(&GModule::regular(&s3, &f2), &s());
        let shape: Vec<(usize, usize)> = cf.iter().map(|c| (c.module.dim(), c.multiplicity)).collect();
        assert_eq!(shape, vec![(1, 2), (2, 2)]);
    }

    #[test]
    fn simple_module_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(simple_modules(&cyclic(3), &f3, &s()).unwrap().dims(), vec![1]);
        assert_eq!(simple_modules(&symmetric(3).unwrap(), &f3, &s()).unwrap().dims(), vec![1, 1]);
        let f2 = Field::prime(2).unwrap();
        assert_eq!(simple_modules(&cyclic(3), &f2, &s()).unwrap().dims(), vec![1, 2]);
        let t = simple_modules(&crate::group::FiniteGroup::trivial(), &f2, &s()).unwrap();
        assert_eq!(t.dims(), vec![1]);
    }

    #[test]
    fn isomorphism_examples() {
        let s3 = symmetric(3).unwrap();
        let f5 = Field::prime(5).unwrap();
        let triv = GModule::trivial(&s3, &f5);
        let sign = GModule::sign(&s3, &f5).unwrap();
        assert!(are_isomorphic(&triv, &sign, 1).is_none());
        assert!(hom_space(&triv, &sign).unwrap().is_empty());
        assert!(are_isomorphic(&sign, &sign, 1).is_some());
        let f2 = Field::prime(2).unwrap();
        let simples = simple_modules(&s3, &f2, &s()).unwrap();
        let two = simples.get(1).clone();
        let t = FqMatrix::from_ints(&f2, &[vec![1, 1], vec![0, 1]]);
        let conj = two.conjugate_by(&t).unwrap();
        let found = are_isomorphic(&two, &conj, 1).unwrap();
        // T recovered up to scalar; over F_2 exactly
        assert_eq!(found, t);
    }

    #[test]
    fn splitting_degrees() {
        assert_eq!(splitting_field_degree(&symmetric(3).unwrap(), 3, &s()).unwrap(), 1);
        assert_eq!(splitting_field_degree(&cyclic(3), 2, &s()).unwrap(), 2);
        assert_eq!(splitting_field_degree(&cyclic(5), 2, &s()).unwrap(), 4);
        let tight = Settings { field_cap: 3, ..s() };
        assert!(matches!(
            splitting_field_degree(&cyclic(5), 2, &tight),
            Err(Error::SplittingCapExceeded { needed: 4, cap: 3 })
        ));
    }

    #[test]
    fn inflation_and_fixed_points() {
        let s3 = symmetric(3).unwrap();
        let c2 = cyclic(2);
        let g = direct_product(&s3, &c2);
        let f2 = Field::prime(2).unwrap();
        // projection S3 x C2 -> S3 sends the C2 generator to 1
        let mut imgs: Vec<usize> = s3.gens().to_vec();
        imgs.push(0);
        let q = GroupHom::from_gen_images(&g, &s3, &imgs).unwrap();
        let two = simple_modules(&s3, &f2, &s()).unwrap().get(1).clone();
        let inf = inflate(&two, &q).unwrap();
        assert!(is_irreducible(&inf, &s()));
        assert_eq!(inflate(&two, &GroupHom::identity(&s3)).unwrap().gen_matrices(), two.gen_matrices());

        let reg = GModule::regular(&g, &f2);
        let kernel = q.kernel();
        let fixed = fixed_point_module(&reg, &kernel, &q).unwrap();
        assert_eq!(fixed.dim(), 6);
        let same = fixed_point_module(&reg, &g.trivial_subgroup(), &GroupHom::identity(&g)).unwrap();
        assert_eq!(same.dim(), 12);

        // a faithful character of C3 over F_4 has no fixed vectors
        let c3 = cyclic(3);
        let f4 = Field::new(2, 2).unwrap();
        let chi = GModule::character(&c3, &f4, &[2]).unwrap();
        let t = crate::group::FiniteGroup::trivial();
        let to_t = GroupHom::from_images(&c3, &t, vec![0; 3]).unwrap();
        assert_eq!(fixed_point_module(&chi, &c3.whole(), &to_t).unwrap().dim(), 0);
    }

    #[test]
    fn extension_decomposition() {
        let c3 = cyclic(3);
        let f2 = Field::prime(2).unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let fp = simple_modules(&c3, &f2, &s()).unwrap();
        let parts = decompose_over_extension(fp.get(1), &f4, &s()).unwrap();
        assert_eq!(parts.iter().map(|p| p.dim()).collect::<Vec<_>>(), vec![1, 1]);
        assert_eq!(decompose_over_extension(fp.get(0), &f4, &s()).unwrap().len(), 1);
        let k = simple_modules(&c3, &f4, &s()).unwrap();
        let rc = rational_classes(&fp, &k, &s()).unwrap();
        assert_eq!(rc.deg(0), 1);
        assert_eq!(rc.deg(1), 2);
        for j in 0..k.len() {
            let expect = j != k.trivial_index();
            assert_eq!(divides(k.get(j), fp.get(1), &s()).unwrap(), expect);
        }
        let s3 = symmetric(3).unwrap();
        let f3 = Field::prime(3).unwrap();
        let sset = simple_modules(&s3, &f3, &s()).unwrap();
        let sign = GModule::sign(&s3, &f3).unwrap();
        let triv = GModule::trivial(&s3, &f3);
        assert!(divides(&triv, &triv, &s()).unwrap());
        assert!(!divides(&sign, &triv, &s()).unwrap());
        assert_eq!(sset.len(), 2);
    }

    #[test]
    fn text_roundtrip() {
        let g = library("S3").unwrap();
        let f4 = Field::new(2, 2).unwrap();
        let m = simple_modules(&g, &f4, &s()).unwrap().get(1).clone();
        let back = GModule::from_text(&g, &m.to_text()).unwrap();
        assert_eq!(back.gen_matrices(), m.gen_matrices());
    }
}
