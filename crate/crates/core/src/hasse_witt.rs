//! Hasse–Witt coefficient tables δ_{Y,V} of étale covers Y → X with group H.
//!
//! Tables are never computed from a curve: they come either from the
//! ordinary formula or from the user, and are indexed by the canonical simple
//! order over a splitting field.

use serde::Serialize;

use crate::cohomology::{h0, h1};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{ExtensionData, FiniteGroup};
use crate::modrep::{
    inflate, is_splitting_field, lcm, rational_classes, simple_modules, splitting_field_degree, GModule, SimpleSet,
};
use crate::projectives::projective_table;
use crate::settings::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeltaSource {
    OrdinaryFormula,
    UserSupplied,
}

/// A cover `Y → X` with group H, base genus `g_X` and its δ-table.
#[derive(Clone, Debug)]
pub struct CoverDatum {
    pub p: u32,
    pub g_x: u64,
    pub simples: SimpleSet,
    pub delta: Vec<u64>,
    pub source: DeltaSource,
    /// Caveats about the input that the engine cannot check.
    pub notes: Vec<String>,
}

/// δ of a V-ordinary cover: `dim V·(g_X − 1) − h¹(H,V) + h⁰(H,V)`.
pub fn delta_ordinary(v: &GModule, g_x: u64, settings: &Settings) -> Result<u64> {
    let h = v.group();
    if h.order() > 1 && g_x == 0 {
        return Err(Error::InconsistentCoverData(format!(
            "a genus 0 curve has no connected étale cover with group of order {}",
            h.order()
        )));
    }
    let value = v.dim() as i64 * (g_x as i64 - 1) - h1(v, settings)? as i64 + h0(v) as i64;
    if value < 0 {
        return Err(Error::InconsistentCoverData(format!(
            "ordinary coefficient {value} for a {}-dimensional simple at g_X = {g_x}",
            v.dim()
        )));
    }
    Ok(value as u64)
}

/// Smallest field splitting every listed group in characteristic p.
pub fn common_splitting_field(groups: &[&FiniteGroup], p: u32, settings: &Settings) -> Result<Field> {
    let mut m = 1;
    for g in groups {
        m = lcm(m, splitting_field_degree(g, p, settings)?);
    }
    if m > settings.field_cap {
        return Err(Error::SplittingCapExceeded { needed: m, cap: settings.field_cap });
    }
    Field::new(p, m)
}

fn caveats(h: &FiniteGroup, g_x: u64) -> Vec<String> {
    let mut notes = Vec::new();
    if g_x == 1 && !h.is_abelian() {
        notes.push(
            "g_X = 1 with nonabelian H: an elliptic curve has abelian fundamental group, \
             so this cover is taken on trust"
                .to_string(),
        );
    }
    notes
}

impl CoverDatum {
    /// The table of an ordinary cover, over the least splitting field of H.
    pub fn ordinary(h: &FiniteGroup, p: u32, g_x: u64, settings: &Settings) -> Result<CoverDatum> {
        let field = common_splitting_field(&[h], p, settings)?;
        CoverDatum::ordinary_over(h, &field, g_x, settings)
    }

    pub fn ordinary_over(h: &FiniteGroup, field: &Field, g_x: u64, settings: &Settings) -> Result<CoverDatum> {
        let simples = split_simples(h, field, settings)?;
        let delta = simples.iter().map(|v| delta_ordinary(v, g_x, settings)).collect::<Result<Vec<_>>>()?;
        Ok(CoverDatum {
            p: field.characteristic(),
            g_x,
            simples,
            delta,
            source: DeltaSource::OrdinaryFormula,
            notes: caveats(h, g_x),
        })
    }

    /// A user-supplied table in canonical simple order over the least splitting field.
    pub fn user_supplied(
        h: &FiniteGroup,
        p: u32,
        g_x: u64,
        delta: Vec<i64>,
        settings: &Settings,
    ) -> Result<CoverDatum> {
        let field = common_splitting_field(&[h], p, settings)?;
        let simples = split_simples(h, &field, settings)?;
        if delta.len() != simples.len() {
            return Err(Error::InconsistentCoverData(format!(
                "{} coefficients for {} simple modules",
                delta.len(),
                simples.len()
            )));
        }
        if let Some(&d) = delta.iter().find(|&&d| d < 0) {
            return Err(Error::InconsistentCoverData(format!("negative coefficient {d}")));
        }
        // Galois-conjugate simples carry equal coefficients on any cover
        let fp_simples = simple_modules(h, &Field::prime(p)?, settings)?;
        let classes = rational_classes(&fp_simples, &simples, settings)?;
        for members in &classes.members {
            if members.iter().any(|&j| delta[j] != delta[members[0]]) {
                return Err(Error::InconsistentCoverData(format!(
                    "simples {members:?} are Galois conjugate but have coefficients {:?}",
                    members.iter().map(|&j| delta[j]).collect::<Vec<_>>()
                )));
            }
        }
        if h.order() > 1 && g_x == 0 {
            return Err(Error::InconsistentCoverData("g_X = 0 admits no nontrivial étale cover".into()));
        }
        Ok(CoverDatum {
            p,
            g_x,
            simples,
            delta: delta.into_iter().map(|d| d as u64).collect(),
            source: DeltaSource::UserSupplied,
            notes: caveats(h, g_x),
        })
    }

    /// X itself as a cover with trivial group and Hasse–Witt invariant γ.
    pub fn from_gamma(p: u32, gamma: u64, settings: &Settings) -> Result<CoverDatum> {
        let t = FiniteGroup::trivial();
        let simples = split_simples(&t, &Field::prime(p)?, settings)?;
        Ok(CoverDatum {
            p,
            g_x: gamma,
            simples,
            delta: vec![gamma],
            source: DeltaSource::UserSupplied,
            notes: Vec::new(),
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        self.simples.group()
    }

    pub fn field(&self) -> &Field {
        self.simples.field()
    }

    /// Re-indexes the table by the simples over a larger field.
    pub fn over_field(&self, big: &Field, settings: &Settings) -> Result<CoverDatum> {
        if big == self.field() {
            return Ok(self.clone());
        }
        let big_simples = split_simples(self.group(), big, settings)?;
        if big_simples.len() != self.simples.len() {
            return Err(Error::NotSplit(format!("{:?} does not split the table's group", self.field())));
        }
        let mut delta = vec![0; big_simples.len()];
        let mut seen = vec![false; big_simples.len()];
        for (i, v) in self.simples.iter().enumerate() {
            let j = big_simples
                .index_of(&v.base_change(big)?)
                .ok_or_else(|| Error::NotSplit("a simple module splits further over the larger field".into()))?;
            if seen[j] {
                return Err(Error::EngineAnomaly("two simples became isomorphic after base change".into()));
            }
            seen[j] = true;
            delta[j] = self.delta[i];
        }
        Ok(CoverDatum { simples: big_simples, delta, ..self.clone() })
    }

    pub fn ordinary_value(&self, i: usize, settings: &Settings) -> Result<Option<u64>> {
        match delta_ordinary(self.simples.get(i), self.g_x, settings) {
            Ok(v) => Ok(Some(v)),
            Err(Error::InconsistentCoverData(_)) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Whether `δ_{Y,V}` equals the ordinary value for the simple with index `i`.
    pub fn is_v_ordinary(&self, i: usize, settings: &Settings) -> Result<bool> {
        Ok(self.ordinary_value(i, settings)? == Some(self.delta[i]))
    }

    pub fn is_ordinary(&self, settings: &Settings) -> Result<bool> {
        for i in 0..self.delta.len() {
            if !self.is_v_ordinary(i, settings)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(dim V, δ)` pairs in canonical order.
    pub fn pairs(&self) -> Vec<(usize, u64)> {
        self.simples.dims().into_iter().zip(self.delta.iter().copied()).collect()
    }
}

fn split_simples(h: &FiniteGroup, field: &Field, settings: &Settings) -> Result<SimpleSet> {
    let simples = simple_modules(h, field, settings)?;
    if !is_splitting_field(&simples) {
        return Err(Error::NotSplit(format!("{field:?} does not split {h:?}")));
    }
    Ok(simples)
}

/// For each simple of H, the index of its inflation among the simples of G.
///
/// With a p-group kernel this is a bijection; that is checked here.
pub fn clifford_bijection(sh: &SimpleSet, sg: &SimpleSet, ext: &ExtensionData) -> Result<Vec<usize>> {
    let mut map = Vec::with_capacity(sh.len());
    let mut hit = vec![false; sg.len()];
    for v in sh.iter() {
        let u = inflate(v, &ext.q)?;
        let j = sg.index_of(&u).ok_or_else(|| Error::EngineAnomaly("an inflated simple is not simple".into()))?;
        if hit[j] {
            return Err(Error::EngineAnomaly("two simples inflate to the same module".into()));
        }
        hit[j] = true;
        map.push(j);
    }
    if hit.iter().any(|&h| !h) {
        return Err(Error::EngineAnomaly(format!("{} simples of G but only {} inflated from H", sg.len(), sh.len())));
    }
    Ok(map)
}

/// `δ_Z(q*V) = δ_Y(V) + h¹(H,V) − h¹(G,q*V)` along `q: G ↠ H` with p-group kernel.
pub fn transfer_delta_along_quotient(y: &CoverDatum, ext: &ExtensionData, settings: &Settings) -> Result<CoverDatum> {
    if ext.h != *y.group() {
        return Err(Error::InvalidInput("the extension's quotient is not the cover's group".into()));
    }
    if !ext.kernel_is_p_group(y.p) {
        return Err(Error::NotPGroup { p: y.p, order: ext.kernel.order() });
    }
    let field = common_splitting_field(&[&ext.g, &ext.h], y.p, settings)?;
    let field = Field::new(y.p, lcm(field.degree(), y.field().degree()))?;
    transfer_delta_over(y, ext, &field, settings)
}

/// As [`transfer_delta_along_quotient`], over a given field splitting G.
pub fn transfer_delta_over(
    y: &CoverDatum,
    ext: &ExtensionData,
    field: &Field,
    settings: &Settings,
) -> Result<CoverDatum> {
    if ext.h != *y.group() {
        return Err(Error::InvalidInput("the extension's quotient is not the cover's group".into()));
    }
    if !ext.kernel_is_p_group(y.p) {
        return Err(Error::NotPGroup { p: y.p, order: ext.kernel.order() });
    }
    let y = y.over_field(field, settings)?;
    let sg = split_simples(&ext.g, field, settings)?;
    let map = clifford_bijection(&y.simples, &sg, ext)?;
    let mut delta = vec![0; sg.len()];
    for (i, v) in y.simples.iter().enumerate() {
        let u = sg.get(map[i]);
        let value = y.delta[i] as i64 + h1(v, settings)? as i64 - h1(u, settings)? as i64;
        if value < 0 {
            return Err(Error::NegativeTransfer(format!(
                "coefficient {value} for the inflation of simple {i} (dim {})",
                v.dim()
            )));
        }
        delta[map[i]] = value as u64;
    }
    Ok(CoverDatum {
        p: y.p,
        g_x: y.g_x,
        simples: sg,
        delta,
        source: DeltaSource::UserSupplied,
        notes: caveats(&ext.g, y.g_x),
    })
}

/// Étale Hurwitz: a degree n cover of a genus g_X curve has genus `n(g_X − 1) + 1`.
pub fn genus_of_cover(g_x: u64, n: u64) -> i64 {
    n as i64 * (g_x as i64 - 1) + 1
}

/// `γ_Y = dim Ω² k + Σ_V dim P(V)·δ_{Y,V}`.
pub fn gamma_from_table(y: &CoverDatum, settings: &Settings) -> Result<u64> {
    let table = projective_table(&y.simples, settings)?;
    let sum: u64 = table.dim_pv.iter().zip(&y.delta).map(|(&p, &d)| p as u64 * d).sum();
    Ok(table.dim_omega2 as u64 + sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, direct_product, elementary_abelian, GroupHom};

    fn s() -> Settings {
        Settings::default()
    }

    #[test]
    fn ordinary_examples() {
        let t = FiniteGroup::trivial();
        let y = CoverDatum::ordinary(&t, 2, 2, &s()).unwrap();
        assert_eq!(y.delta, vec![2]);
        let y = CoverDatum::ordinary(&cyclic(3), 2, 2, &s()).unwrap();
        let t = y.simples.trivial_index();
        for (i, &(dim, d)) in y.pairs().iter().enumerate() {
            assert_eq!(dim, 1);
            assert_eq!(d, if i == t { 2 } else { 1 });
        }
        let y = CoverDatum::ordinary(&cyclic(3), 3, 2, &s()).unwrap();
        assert_eq!(y.delta, vec![1]);
        assert!(y.is_ordinary(&s()).unwrap());
    }

    #[test]
    fn negative_ordinary_value_is_an_error() {
        let v4 = elementary_abelian(2, 2);
        assert!(matches!(CoverDatum::ordinary(&v4, 2, 1, &s()), Err(Error::InconsistentCoverData(_))));
        assert!(matches!(CoverDatum::ordinary(&cyclic(2), 2, 0, &s()), Err(Error::InconsistentCoverData(_))));
    }

    #[test]
    fn decremented_entry_breaks_ordinarity_there() {
        let mut y = CoverDatum::ordinary(&cyclic(3), 2, 3, &s()).unwrap();
        y.delta[1] -= 1;
        y.source = DeltaSource::UserSupplied;
        assert!(!y.is_v_ordinary(1, &s()).unwrap());
        assert!(y.is_v_ordinary(0, &s()).unwrap());
        assert!(y.is_v_ordinary(2, &s()).unwrap());
    }

    #[test]
    fn transfer_examples() {
        let c2 = cyclic(2);
        let base = CoverDatum::ordinary(&FiniteGroup::trivial(), 2, 2, &s()).unwrap();
        let z = transfer_delta_along_quotient(&base, &ExtensionData::over_trivial(&c2), &s()).unwrap();
        assert_eq!(z.delta, vec![1]);
        assert_eq!(z.delta, CoverDatum::ordinary(&c2, 2, 2, &s()).unwrap().delta);
        let same = transfer_delta_along_quotient(&z, &ExtensionData::identity(&c2), &s()).unwrap();
        assert_eq!(same.delta, z.delta);
        // Z/2 × Z/3 → Z/3 over p = 2
        let c3 = cyclic(3);
        let g = direct_product(&c2, &c3);
        let q = GroupHom::from_gen_images(&g, &c3, &[0, c3.gens()[0]]).unwrap();
        let ext = ExtensionData::from_epimorphism(q).unwrap();
        let y = CoverDatum::ordinary(&c3, 2, 2, &s()).unwrap();
        let z = transfer_delta_along_quotient(&y, &ext, &s()).unwrap();
        let direct = CoverDatum::ordinary(&g, 2, 2, &s()).unwrap();
        assert_eq!(z.delta, direct.delta);
    }

    #[test]
    fn negative_transfer_is_reported() {
        let base = CoverDatum::user_supplied(&FiniteGroup::trivial(), 2, 2, vec![0], &s()).unwrap();
        let err = transfer_delta_along_quotient(&base, &ExtensionData::over_trivial(&cyclic(2)), &s());
        assert!(matches!(err, Err(Error::NegativeTransfer(_))));
    }

    #[test]
    fn genus_and_gamma() {
        assert_eq!(genus_of_cover(5, 1), 5);
        assert_eq!(genus_of_cover(1, 7), 1);
        assert_eq!(genus_of_cover(2, 3), 4);
        let y = CoverDatum::ordinary(&FiniteGroup::trivial(), 3, 2, &s()).unwrap();
        assert_eq!(gamma_from_table(&y, &s()).unwrap(), 2);
        let y = CoverDatum::ordinary(&cyclic(3), 3, 2, &s()).unwrap();
        assert_eq!(gamma_from_table(&y, &s()).unwrap(), 4);
        let y = CoverDatum::ordinary(&elementary_abelian(2, 2), 2, 2, &s()).unwrap();
        assert_eq!(y.delta, vec![0]);
        assert_eq!(gamma_from_table(&y, &s()).unwrap(), 5);
    }
}
