//! The Jacobson radical of F_q[G], projective indecomposables P(V) realized
//! as left ideals F_q[G]·e, and the dimensions of Ω k and Ω² k.
//!
//! Group-algebra elements are coefficient vectors indexed by group elements.

use std::fmt;

use serde::Serialize;

use crate::cohomology::h1;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{ExtensionData, FiniteGroup};
use crate::matrix::{EchelonBasis, FqMatrix, Vector};
use crate::modrep::{
    are_isomorphic, fixed_point_module, inflate, is_splitting_field, simple_modules, spin, GModule, SimpleSet,
};
use crate::settings::Settings;

/// Product in the group algebra: `(a·b)_z = Σ_{xy=z} a_x b_y`.
pub fn algebra_mul(g: &FiniteGroup, f: &Field, a: &[u32], b: &[u32]) -> Vector {
    let n = g.order();
    let mut out = vec![0; n];
    for x in (0..n).filter(|&x| a[x] != 0) {
        for y in (0..n).filter(|&y| b[y] != 0) {
            let z = g.mul(x, y);
            out[z] = f.mul_add(a[x], b[y], out[z]);
        }
    }
    out
}

/// Image of a group-algebra element in a module: `Σ a_x ρ(x)`.
pub fn represent(m: &GModule, a: &[u32]) -> FqMatrix {
    let f = m.field();
    let mut out = FqMatrix::zero(f, m.dim(), m.dim());
    for (x, &c) in a.iter().enumerate().filter(|(_, &c)| c != 0) {
        out = out.add(&m.element_matrix(x).scale(c));
    }
    out
}

/// Rows: one per group element, holding the entries of ρ_S(x) for all simples S.
fn stacked_representation(simples: &SimpleSet) -> FqMatrix {
    let g = simples.group();
    let f = simples.field();
    let width: usize = simples.iter().map(|s| s.dim() * s.dim()).sum();
    let rows: Vec<Vector> = (0..g.order())
        .map(|x| {
            let mut row = Vec::with_capacity(width);
            for s in simples.iter() {
                let m = s.element_matrix(x);
                for i in 0..s.dim() {
                    row.extend_from_slice(m.row(i));
                }
            }
            row
        })
        .collect();
    FqMatrix::from_rows(f, width, &rows)
}

/// Basis of rad F_q[G], the common kernel of all simple representations.
///
/// The ideal is checked to be nilpotent before it is returned.
pub fn algebra_radical(g: &FiniteGroup, field: &Field, settings: &Settings) -> Result<EchelonBasis> {
    let simples = simple_modules(g, field, settings)?;
    radical_from_simples(&simples)
}

fn radical_from_simples(simples: &SimpleSet) -> Result<EchelonBasis> {
    let g = simples.group();
    let f = simples.field();
    let n = g.order();
    // a lies in the radical iff a^T · stacked = 0
    let kernel = stacked_representation(simples).transpose().kernel_basis();
    let mut rad = EchelonBasis::new(f, n);
    for r in kernel.row_vecs() {
        rad.insert(&r);
    }
    // J ⊋ J² ⊋ ... must reach zero within n steps
    let mut power = rad.clone();
    let mut steps = 0;
    while !power.is_empty() {
        steps += 1;
        if steps > n + 1 {
            return Err(Error::EngineAnomaly("radical candidate is not nilpotent".into()));
        }
        let mut next = EchelonBasis::new(f, n);
        for a in power.rows() {
            for b in rad.rows() {
                next.insert(&algebra_mul(g, f, a, b));
            }
        }
        if next.len() >= power.len() && !power.is_empty() {
            return Err(Error::EngineAnomaly("radical candidate is not nilpotent".into()));
        }
        power = next;
    }
    Ok(rad)
}

/// A lifted primitive idempotent `e` and the projective indecomposable `F_q[G]·e`.
#[derive(Clone, Debug)]
pub struct ProjectiveCover {
    pub simple_index: usize,
    pub idempotent: Vector,
    pub module: GModule,
}

fn require_split(simples: &SimpleSet) -> Result<()> {
    if is_splitting_field(simples) {
        Ok(())
    } else {
        Err(Error::NotSplit(format!("{:?} does not split {:?}", simples.field(), simples.group())))
    }
}

/// Idempotent lifting `e ← 3e² − 2e³`; exact once `e² = e`.
fn lift_idempotent(g: &FiniteGroup, f: &Field, mut e: Vector) -> Result<Vector> {
    let three = f.from_int(3);
    let two = f.from_int(2);
    for _ in 0..=g.order() {
        let e2 = algebra_mul(g, f, &e, &e);
        if e2 == e {
            return Ok(e);
        }
        let e3 = algebra_mul(g, f, &e2, &e);
        e = e2.iter().zip(&e3).map(|(&a, &b)| f.sub(f.mul(three, a), f.mul(two, b))).collect();
    }
    Err(Error::EngineAnomaly("idempotent lifting did not converge".into()))
}

/// Projective covers of every simple in `simples`, which must be split.
pub fn projective_covers(simples: &SimpleSet) -> Result<Vec<ProjectiveCover>> {
    require_split(simples)?;
    let g = simples.group();
    let f = simples.field();
    let stacked = stacked_representation(simples);
    // unknowns a_x; equations Σ_x a_x ρ_S(x)_{ij} = target_{S,ij}
    let system = stacked.transpose();
    let reg = GModule::regular(g, f);
    let mut covers = Vec::with_capacity(simples.len());
    let mut offset = 0;
    for (i, s) in simples.iter().enumerate() {
        let mut target = vec![0; system.rows()];
        target[offset] = 1; // E_11 in the block of S
        offset += s.dim() * s.dim();
        let a = system
            .solve(&target)?
            .ok_or_else(|| Error::EngineAnomaly("no preimage of a matrix unit in the group algebra".into()))?;
        let e = lift_idempotent(g, f, a)?;
        let ideal = spin(&reg, std::slice::from_ref(&e));
        covers.push(ProjectiveCover { simple_index: i, idempotent: e, module: reg.submodule(&ideal) });
    }
    Ok(covers)
}

/// dim P(V) per simple, radical dimension, and the Ω bookkeeping.
#[derive(Clone, Debug, Serialize)]
pub struct ProjectiveTable {
    #[serde(skip)]
    pub group: FiniteGroup,
    #[serde(skip)]
    pub field: Field,
    pub field_order: u32,
    pub group_order: usize,
    pub dim_v: Vec<usize>,
    pub dim_pv: Vec<usize>,
    pub h1: Vec<usize>,
    pub dim_rad: usize,
    pub dim_omega1: usize,
    pub dim_omega2: usize,
}

impl ProjectiveTable {
    pub fn len(&self) -> usize {
        self.dim_v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dim_v.is_empty()
    }
}

impl fmt::Display for ProjectiveTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>6} {:>6} {:>8} {:>6}", "simple", "dim V", "dim P(V)", "h1")?;
        for i in 0..self.len() {
            writeln!(f, "{:>6} {:>6} {:>8} {:>6}", i, self.dim_v[i], self.dim_pv[i], self.h1[i])?;
        }
        writeln!(f, "radical {}", self.dim_rad)?;
        writeln!(f, "omega1 {}", self.dim_omega1)?;
        write!(f, "omega2 {}", self.dim_omega2)
    }
}

/// The table for `(G, field)`; the field must split G.
pub fn projective_dims(g: &FiniteGroup, field: &Field, settings: &Settings) -> Result<ProjectiveTable> {
    let simples = simple_modules(g, field, settings)?;
    projective_table(&simples, settings)
}

pub fn projective_table(simples: &SimpleSet, settings: &Settings) -> Result<ProjectiveTable> {
    let g = simples.group();
    let covers = projective_covers(simples)?;
    let rad = radical_from_simples(simples)?;
    let dim_v = simples.dims();
    let dim_pv: Vec<usize> = covers.iter().map(|c| c.module.dim()).collect();
    let h1s = simples.iter().map(|s| h1(s, settings)).collect::<Result<Vec<_>>>()?;
    let total: usize = dim_v.iter().zip(&dim_pv).map(|(a, b)| a * b).sum();
    if total != g.order() {
        return Err(Error::EngineAnomaly(format!(
            "projective dimensions give Σ dim P(V)·dim V = {total}, group order {}",
            g.order()
        )));
    }
    if dim_v.iter().zip(&dim_pv).any(|(v, p)| p < v) {
        return Err(Error::EngineAnomaly("a projective cover is smaller than its head".into()));
    }
    let semisimple_dim: usize = dim_v.iter().map(|d| d * d).sum();
    if rad.len() + semisimple_dim != g.order() {
        return Err(Error::EngineAnomaly("radical dimension disagrees with the semisimple quotient".into()));
    }
    let dim_omega1 = dim_pv[simples.trivial_index()] - 1;
    let weighted: usize = dim_pv.iter().zip(&h1s).map(|(p, h)| p * h).sum();
    let dim_omega2 = weighted
        .checked_sub(dim_omega1)
        .ok_or_else(|| Error::EngineAnomaly("negative dimension for the second syzygy".into()))?;
    Ok(ProjectiveTable {
        group: g.clone(),
        field: simples.field().clone(),
        field_order: simples.field().order(),
        group_order: g.order(),
        dim_v,
        dim_pv,
        h1: h1s,
        dim_rad: rad.len(),
        dim_omega1,
        dim_omega2,
    })
}

pub fn omega_dims(g: &FiniteGroup, field: &Field, settings: &Settings) -> Result<(usize, usize)> {
    let t = projective_dims(g, field, settings)?;
    Ok((t.dim_omega1, t.dim_omega2))
}

/// Outcome of checking one simple U of G.
#[derive(Clone, Debug, Serialize)]
pub struct FixedPartEntry {
    /// Index of U in the simples of G.
    pub simple: usize,
    /// Index of V in the simples of H when U is inflated from V.
    pub inflated_from: Option<usize>,
    pub fixed_dim: usize,
    pub expected_dim: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FixedPartReport {
    pub entries: Vec<FixedPartEntry>,
}

impl FixedPartReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// For every simple U of G, compares `q_*(P_G(U)^P)` with `P_H(V)` when
/// `U = q*V`, and with zero otherwise.
pub fn verify_fixed_part_of_projectives(
    ext: &ExtensionData,
    field: &Field,
    settings: &Settings,
) -> Result<FixedPartReport> {
    let p = field.characteristic();
    if !ext.kernel_is_p_group(p) {
        return Err(Error::NotPGroup { p, order: ext.kernel.order() });
    }
    let sg = simple_modules(&ext.g, field, settings)?;
    let sh = simple_modules(&ext.h, field, settings)?;
    let covers_g = projective_covers(&sg)?;
    let covers_h = projective_covers(&sh)?;
    let inflated: Vec<GModule> = sh.iter().map(|v| inflate(v, &ext.q)).collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(sg.len());
    for (i, cover) in covers_g.iter().enumerate() {
        let u = sg.get(i);
        let source = inflated.iter().position(|w| are_isomorphic(w, u, settings.seed).is_some());
        let fixed = fixed_point_module(&cover.module, &ext.kernel, &ext.q)?;
        let (expected_dim, passed) = match source {
            Some(j) => {
                let target = &covers_h[j].module;
                let iso = fixed.dim() == target.dim() && are_isomorphic(&fixed, target, settings.seed).is_some();
                (target.dim(), iso)
            }
            None => (0, fixed.dim() == 0),
        };
        entries.push(FixedPartEntry { simple: i, inflated_from: source, fixed_dim: fixed.dim(), expected_dim, passed });
    }
    Ok(FixedPartReport { entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, direct_product, elementary_abelian, symmetric, GroupHom};

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn radical_examples() {
        let f2 = Field::prime(2).unwrap();
        let f3 = Field::prime(3).unwrap();
        assert_eq!(algebra_radical(&cyclic(3), &f2, &s()).unwrap().len(), 0);
        assert_eq!(algebra_radical(&cyclic(3), &f3, &s()).unwrap().len(), 2);
        assert_eq!(algebra_radical(&FiniteGroup::trivial(), &f3, &s()).unwrap().len(), 0);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(algebra_radical(&cyclic(5), &f5, &s()).unwrap().len(), 4);
    }

    #[test]
    fn projective_examples() {
        let f3 = Field::prime(3).unwrap();
        let t = projective_dims(&cyclic(3), &f3, &s()).unwrap();
        assert_eq!(t.dim_pv, vec![3]);
        assert_eq!((t.dim_omega1, t.dim_omega2), (2, 1));
        let t = projective_dims(&symmetric(3).unwrap(), &f3, &s()).unwrap();
        assert_eq!(t.dim_pv, vec![3, 3]);
        let f5 = Field::prime(5).unwrap();
        let t = projective_dims(&symmetric(3).unwrap(), &f5, &s()).unwrap();
        assert_eq!(t.dim_pv, t.dim_v);
        assert_eq!((t.dim_omega1, t.dim_omega2), (0, 0));
        let f2 = Field::prime(2).unwrap();
        let t = projective_dims(&elementary_abelian(2, 2), &f2, &s()).unwrap();
        assert_eq!(t.dim_pv, vec![4]);
        assert_eq!((t.dim_omega1, t.dim_omega2), (3, 5));
    }

    #[test]
    fn non_splitting_field_is_rejected() {
        let f2 = Field::prime(2).unwrap();
        assert!(matches!(projective_dims(&cyclic(3), &f2, &s()), Err(Error::NotSplit(_))));
        let f4 = Field::new(2, 2).unwrap();
        let t = projective_dims(&cyclic(3), &f4, &s()).unwrap();
        assert_eq!(t.dim_pv, vec![1, 1, 1]);
    }

    #[test]
    fn fixed_parts() {
        let f3 = Field::prime(3).unwrap();
        let c3 = cyclic(3);
        let r = verify_fixed_part_of_projectives(&ExtensionData::identity(&c3), &f3, &s()).unwrap();
        assert!(r.passed());
        let r = verify_fixed_part_of_projectives(&ExtensionData::over_trivial(&c3), &f3, &s()).unwrap();
        assert!(r.passed());
        assert_eq!(r.entries[0].fixed_dim, 1);
        // Z/3 × Z/2 → Z/2 over F_3
        let c2 = cyclic(2);
        let g = direct_product(&c3, &c2);
        let mut imgs = vec![0; g.num_gens()];
        *imgs.last_mut().unwrap() = c2.gens()[0];
        let q = GroupHom::from_gen_images(&g, &c2, &imgs).unwrap();
        let ext = ExtensionData::from_epimorphism(q).unwrap();
        let r = verify_fixed_part_of_projectives(&ext, &f3, &s()).unwrap();
        assert!(r.passed());
        assert_eq!(r.entries.len(), 2);
        assert!(r.entries.iter().all(|e| e.fixed_dim == 1));
    }
}
