//! Dimensions of H⁰, H¹, H² and the 2-cocycle of an extension.
//!
//! Cochains are parametrized along the breadth-first word tree of the group.
//! A crossed homomorphism is fixed by its values on generators; a normalized
//! 2-cocycle is cohomologous to one vanishing on every tree edge `(y, s)`, and
//! is then fixed by its values on the remaining pairs `(x, s)`. In both cases
//! the cocycle identity only has to be imposed with a generator in the last
//! slot: the coboundary of the defect vanishes, which propagates the identity
//! to every triple by induction on word length.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::group::{close, ExtensionData, FiniteGroup, GroupHom};
use crate::matrix::{EchelonBasis, FqMatrix, Vector};
use crate::modrep::GModule;
use crate::settings::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CohomDims {
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
}

pub fn h0(m: &GModule) -> usize {
    m.fixed_space().rows()
}

/// Dense linear form in `cols` unknowns, one row per module coordinate.
#[derive(Clone)]
struct Affine {
    rows: Vec<Vector>,
}

impl Affine {
    fn zero(d: usize, cols: usize) -> Affine {
        Affine { rows: vec![vec![0; cols]; d] }
    }
}

fn add_into(f: &Field, acc: &mut [u32], v: &[u32]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        if b != 0 {
            *a = f.add(*a, b);
        }
    }
}

fn sub_into(f: &Field, acc: &mut [u32], v: &[u32]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        if b != 0 {
            *a = f.sub(*a, b);
        }
    }
}

/// `rho · form` where form is a d × cols matrix of rows.
fn act(f: &Field, rho: &FqMatrix, form: &Affine) -> Affine {
    let d = rho.rows();
    let cols = form.rows.first().map_or(0, |r| r.len());
    let mut out = Affine::zero(d, cols);
    for i in 0..d {
        for k in 0..d {
            let c = rho.get(i, k);
            if c == 0 {
                continue;
            }
            let src = &form.rows[k];
            let dst = &mut out.rows[i];
            for (a, &b) in dst.iter_mut().zip(src) {
                if b != 0 {
                    *a = f.mul_add(c, b, *a);
                }
            }
        }
    }
    out
}

/// Block selector: unknowns `block·d .. block·d + d` as the identity form.
fn selector(d: usize, cols: usize, block: usize) -> Affine {
    let mut a = Affine::zero(d, cols);
    for i in 0..d {
        a.rows[i][block * d + i] = 1;
    }
    a
}

/// Rank of a growing system, inserted row by row.
struct RankCounter {
    basis: EchelonBasis,
    full: usize,
}

impl RankCounter {
    fn new(f: &Field, cols: usize) -> RankCounter {
        RankCounter { basis: EchelonBasis::new(f, cols), full: cols }
    }
    fn push(&mut self, row: &[u32]) {
        if self.basis.len() < self.full && row.iter().any(|&x| x != 0) {
            self.basis.insert(row);
        }
    }
    fn rank(&self) -> usize {
        self.basis.len()
    }
    fn saturated(&self) -> bool {
        self.basis.len() == self.full
    }
}

/// The linear forms `f(x)` of a crossed homomorphism in terms of its
/// generator values, and the rank of the consistency system.
fn crossed_hom_system(m: &GModule) -> (Vec<Affine>, RankCounter) {
    let g = m.group();
    let f = m.field();
    let d = m.dim();
    let k = g.num_gens();
    let cols = k * d;
    let rho = m.element_matrices();
    let mut forms: Vec<Affine> = Vec::with_capacity(g.order());
    forms.push(Affine::zero(d, cols));
    for x in 1..g.order() {
        let (y, s) = g.tree_parent(x).unwrap();
        let mut a = act(f, &rho[y], &selector(d, cols, s));
        for (r, base) in a.rows.iter_mut().zip(&forms[y].rows) {
            add_into(f, r, base);
        }
        forms.push(a);
    }
    let mut rank = RankCounter::new(f, cols);
    for y in 0..g.order() {
        for (s, &gs) in g.gens().iter().enumerate() {
            let x = g.mul(y, gs);
            if g.tree_parent(x) == Some((y, s)) {
                continue;
            }
            // f(x) - f(y) - y·f(s) = 0
            let ys = act(f, &rho[y], &selector(d, cols, s));
            for i in 0..d {
                let mut row = forms[x].rows[i].clone();
                sub_into(f, &mut row, &forms[y].rows[i]);
                sub_into(f, &mut row, &ys.rows[i]);
                rank.push(&row);
            }
            if rank.saturated() {
                return (forms, rank);
            }
        }
    }
    (forms, rank)
}

fn z1_dim(m: &GModule) -> usize {
    let (_, rank) = crossed_hom_system(m);
    m.group().num_gens() * m.dim() - rank.rank()
}

pub fn h1(m: &GModule, settings: &Settings) -> Result<usize> {
    let n = m.group().order();
    if n > settings.h1_cap {
        return Err(Error::GroupTooLarge { context: "group too large for h1".into(), limit: settings.h1_cap });
    }
    if n == 1 || m.dim() == 0 {
        return Ok(0);
    }
    Ok(z1_dim(m) - (m.dim() - h0(m)))
}

pub fn h2(m: &GModule, settings: &Settings) -> Result<usize> {
    let g = m.group();
    let n = g.order();
    if n > settings.h2_cap {
        return Err(Error::GroupTooLarge { context: "group too large for h2".into(), limit: settings.h2_cap });
    }
    if n == 1 || m.dim() == 0 {
        return Ok(0);
    }
    let f = m.field();
    let d = m.dim();
    let k = g.num_gens();
    // unknown blocks: pairs (x, s), x ≠ 1, that are not tree edges
    let mut block = vec![usize::MAX; n * k];
    let mut nblocks = 0;
    for x in 1..n {
        for (s, &gs) in g.gens().iter().enumerate() {
            if g.tree_parent(g.mul(x, gs)) != Some((x, s)) {
                block[x * k + s] = nblocks;
                nblocks += 1;
            }
        }
    }
    let cols = nblocks * d;
    let rho = m.element_matrices();
    let u = |x: usize, s: usize| -> Option<Affine> {
        let b = block[x * k + s];
        (b != usize::MAX).then(|| selector(d, cols, b))
    };
    let mut rank = RankCounter::new(f, cols);
    'outer: for x in 0..n {
        // F[y] = f(x, y) as a form in the unknowns, filled along the tree in y
        let mut forms: Vec<Affine> = Vec::with_capacity(n);
        forms.push(Affine::zero(d, cols));
        let step = |forms: &Vec<Affine>, y0: usize, s: usize| -> Affine {
            // f(x, y0 s) = f(x, y0) + f(x y0, s) - x·f(y0, s)
            let mut a = forms[y0].clone();
            if let Some(t) = u(g.mul(x, y0), s) {
                for (r, tr) in a.rows.iter_mut().zip(&t.rows) {
                    add_into(f, r, tr);
                }
            }
            if let Some(t) = u(y0, s) {
                let xt = act(f, &rho[x], &t);
                for (r, tr) in a.rows.iter_mut().zip(&xt.rows) {
                    sub_into(f, r, tr);
                }
            }
            a
        };
        for y in 1..n {
            let (y0, s) = g.tree_parent(y).unwrap();
            let a = step(&forms, y0, s);
            forms.push(a);
        }
        for y0 in 0..n {
            for (s, &gs) in g.gens().iter().enumerate() {
                let y = g.mul(y0, gs);
                if g.tree_parent(y) == Some((y0, s)) {
                    continue;
                }
                let want = step(&forms, y0, s);
                for i in 0..d {
                    let mut row = forms[y].rows[i].clone();
                    sub_into(f, &mut row, &want.rows[i]);
                    rank.push(&row);
                }
                if rank.saturated() {
                    break 'outer;
                }
            }
        }
    }
    let z2 = cols - rank.rank();
    // coboundaries vanishing on tree edges come from 1-cochains fixed by
    // their generator values, modulo crossed homomorphisms
    let fresh = (0..k).filter(|&s| g.tree_parent(g.gens()[s]) == Some((0, s))).count();
    let b2 = fresh * d - z1_dim(m);
    Ok(z2 - b2)
}

pub fn cohomology_dims(m: &GModule, settings: &Settings) -> Result<CohomDims> {
    Ok(CohomDims { h0: h0(m), h1: h1(m, settings)?, h2: h2(m, settings)? })
}

/// A normalized 2-cocycle `f: H × H → M`.
#[derive(Clone)]
pub struct TwoCocycle {
    module: GModule,
    values: Vec<Vector>,
}

impl fmt::Debug for TwoCocycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoCocycle({:?})", self.module)
    }
}

impl TwoCocycle {
    /// Validates normalization and the cocycle identity on every triple.
    pub fn new(module: &GModule, values: Vec<Vector>) -> Result<TwoCocycle> {
        let g = module.group();
        let n = g.order();
        let d = module.dim();
        if values.len() != n * n || values.iter().any(|v| v.len() != d) {
            return Err(Error::NotACocycle(format!("expected {n}x{n} values of length {d}")));
        }
        let c = TwoCocycle { module: module.clone(), values };
        c.check()?;
        Ok(c)
    }

    pub fn zero(module: &GModule) -> TwoCocycle {
        let n = module.group().order();
        TwoCocycle { module: module.clone(), values: vec![vec![0; module.dim()]; n * n] }
    }

    fn check(&self) -> Result<()> {
        let g = self.module.group();
        let n = g.order();
        let f = self.module.field();
        for x in 0..n {
            if self.at(0, x).iter().any(|&v| v != 0) || self.at(x, 0).iter().any(|&v| v != 0) {
                return Err(Error::NotACocycle(format!("not normalized at {}", g.label(x))));
            }
        }
        let rho = self.module.element_matrices();
        for h in 1..n {
            for h1 in 1..n {
                let hh1 = g.mul(h, h1);
                for h2 in 1..n {
                    let mut v = rho[h].mul_vec(self.at(h1, h2));
                    sub_into(f, &mut v, self.at(hh1, h2));
                    add_into(f, &mut v, self.at(h, g.mul(h1, h2)));
                    sub_into(f, &mut v, self.at(h, h1));
                    if v.iter().any(|&c| c != 0) {
                        return Err(Error::NotACocycle(format!(
                            "identity fails at ({}, {}, {})",
                            g.label(h),
                            g.label(h1),
                            g.label(h2)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn group(&self) -> &FiniteGroup {
        self.module.group()
    }

    pub fn at(&self, h: usize, h1: usize) -> &[u32] {
        &self.values[h * self.module.group().order() + h1]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&c| c == 0))
    }

    pub fn sub(&self, other: &TwoCocycle) -> Result<TwoCocycle> {
        if self.module.gen_matrices() != other.module.gen_matrices() || self.group() != other.group() {
            return Err(Error::InvalidInput("cocycles with different coefficient modules".into()));
        }
        let f = self.module.field();
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| {
                let mut v = a.clone();
                sub_into(f, &mut v, b);
                v
            })
            .collect();
        Ok(TwoCocycle { module: self.module.clone(), values })
    }

    /// `f(i,j) = v` lines for the nonzero entries.
    pub fn to_text(&self) -> String {
        let n = self.group().order();
        let f = self.module.field();
        let mut s = String::new();
        for i in 0..n {
            for j in 0..n {
                let v = self.at(i, j);
                if v.iter().any(|&c| c != 0) {
                    let toks: Vec<String> = v.iter().map(|&c| f.format_elem(c)).collect();
                    s.push_str(&format!("f({i},{j}) = {}\n", toks.join(" ")));
                }
            }
        }
        s
    }

    pub fn from_text(module: &GModule, text: &str) -> Result<TwoCocycle> {
        let n = module.group().order();
        let d = module.dim();
        let f = module.field();
        let mut values = vec![vec![0; d]; n * n];
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| Error::parse(ln + 1, 1, "expected `f(i,j) = v`"))?;
            let (i, j) = parse_pair(lhs).ok_or_else(|| Error::parse(ln + 1, 1, "expected `f(i,j)`"))?;
            if i >= n || j >= n {
                return Err(Error::parse(ln + 1, 1, format!("index out of range for order {n}")));
            }
            let v = rhs.split_whitespace().map(|t| f.parse_elem(t)).collect::<Result<Vec<_>>>()?;
            if v.len() != d {
                return Err(Error::parse(ln + 1, lhs.len() + 2, format!("vector needs {d} entries")));
            }
            values[i * n + j] = v;
        }
        TwoCocycle::new(module, values)
    }
}

pub(crate) fn parse_pair(lhs: &str) -> Option<(usize, usize)> {
    let inner = lhs.trim().strip_prefix("f(")?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

/// `δc(h, h') = h·c(h') − c(hh') + c(h)` for a normalized 1-cochain.
pub fn coboundary(module: &GModule, c: &[Vector]) -> Result<TwoCocycle> {
    let g = module.group();
    let n = g.order();
    let f = module.field();
    if c.len() != n || c[0].iter().any(|&x| x != 0) {
        return Err(Error::InvalidInput("1-cochain must be normalized with one value per element".into()));
    }
    let rho = module.element_matrices();
    let mut values = Vec::with_capacity(n * n);
    for h in 0..n {
        for h1 in 0..n {
            let mut v = rho[h].mul_vec(&c[h1]);
            sub_into(f, &mut v, &c[g.mul(h, h1)]);
            add_into(f, &mut v, &c[h]);
            values.push(v);
        }
    }
    Ok(TwoCocycle { module: module.clone(), values })
}

/// A 1-cochain c with `f = δc`, if the class of f is trivial.
pub fn is_trivial_class(cocycle: &TwoCocycle) -> Option<Vec<Vector>> {
    let m = &cocycle.module;
    let g = m.group();
    let n = g.order();
    let d = m.dim();
    let f = m.field();
    let k = g.num_gens();
    if d == 0 || n == 1 {
        return Some(vec![vec![0; d]; n]);
    }
    let cols = k * d + 1; // last column holds the constant term
    let rho = m.element_matrices();
    let sel = |s: usize| selector(d, cols, s);
    let constant = |v: &[u32]| {
        let mut a = Affine::zero(d, cols);
        for i in 0..d {
            a.rows[i][cols - 1] = v[i];
        }
        a
    };
    // c(y s) = c(y) + y·c(s) − f(y, s) along tree edges
    let mut forms: Vec<Affine> = vec![Affine::zero(d, cols)];
    for x in 1..n {
        let (y, s) = g.tree_parent(x).unwrap();
        let mut a = act(f, &rho[y], &sel(s));
        let fc = constant(cocycle.at(y, g.gens()[s]));
        for i in 0..d {
            add_into(f, &mut a.rows[i], &forms[y].rows[i]);
            sub_into(f, &mut a.rows[i], &fc.rows[i]);
        }
        forms.push(a);
    }
    let mut rows: Vec<Vector> = Vec::new();
    for y in 0..n {
        for (s, &gs) in g.gens().iter().enumerate() {
            let x = g.mul(y, gs);
            if g.tree_parent(x) == Some((y, s)) {
                continue;
            }
            let ys = act(f, &rho[y], &sel(s));
            let fc = constant(cocycle.at(y, gs));
            for i in 0..d {
                let mut row = forms[x].rows[i].clone();
                sub_into(f, &mut row, &forms[y].rows[i]);
                sub_into(f, &mut row, &ys.rows[i]);
                add_into(f, &mut row, &fc.rows[i]);
                rows.push(row);
            }
        }
    }
    let unknowns = k * d;
    let solution: Vector = if rows.is_empty() {
        vec![0; unknowns]
    } else {
        // row·(u, 1) = 0  ⇔  A u = −b
        let a: Vec<Vector> = rows.iter().map(|r| r[..unknowns].to_vec()).collect();
        let b: Vector = rows.iter().map(|r| f.neg(r[unknowns])).collect();
        FqMatrix::from_rows(f, unknowns, &a).solve(&b).ok()??
    };
    let mut ext = solution.clone();
    ext.push(1);
    let c: Vec<Vector> = forms
        .iter()
        .map(|a| a.rows.iter().map(|r| r.iter().zip(&ext).fold(0, |acc, (&x, &y)| f.mul_add(x, y, acc))).collect())
        .collect();
    debug_assert!(coboundary(m, &c).map(|b| b.values == cocycle.values).unwrap_or(false));
    Some(c)
}

/// Extension of H by M defined by a cocycle: the set M × H with
/// `(a,h)(b,h') = (a + h·b + f(h,h'), hh')`.
///
/// Generators are the standard basis of M followed by the generators of H,
/// so the kernel basis read back by [`extension_class`] is the standard one.
pub fn extension_from_cocycle(cocycle: &TwoCocycle, cap: usize) -> Result<ExtensionData> {
    let m = &cocycle.module;
    let h = m.group();
    let f = m.field();
    if !f.is_prime_field() {
        return Err(Error::FieldMismatch("extension kernels are F_p-modules".into()));
    }
    let d = m.dim();
    let rho = m.element_matrices();
    let mut gens: Vec<(Vector, usize)> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            (e, 0)
        })
        .collect();
    gens.extend(h.gens().iter().map(|&s| (vec![0; d], s)));
    let (elems, g) = close(
        (vec![0u32; d], 0usize),
        &gens,
        |(a, x): &(Vector, usize), (b, y): &(Vector, usize)| {
            let mut v = rho[*x].mul_vec(b);
            add_into(f, &mut v, a);
            add_into(f, &mut v, cocycle.at(*x, *y));
            (v, h.mul(*x, *y))
        },
        cap,
        "extension",
    )?;
    let q = GroupHom::from_images(&g, h, elems.iter().map(|(_, x)| *x).collect())?;
    let mut ext = ExtensionData::from_epimorphism(q)?;
    ext.cocycle = Some(cocycle.clone());
    Ok(ext)
}

/// The split extension M ⋊ H.
pub fn split_extension(m: &GModule, cap: usize) -> Result<ExtensionData> {
    extension_from_cocycle(&TwoCocycle::zero(m), cap)
}

/// Coordinates on an elementary abelian kernel.
#[derive(Clone, Debug)]
pub struct KernelCoordinates {
    pub p: u32,
    /// Basis elements of the kernel (indices into G), chosen greedily by index.
    pub basis: Vec<usize>,
    /// Coordinate vector of each kernel element.
    pub coords: HashMap<usize, Vector>,
    /// Kernel element with given coordinates.
    pub element: HashMap<Vector, usize>,
}

/// Greedy basis and coordinates of an elementary abelian p-group kernel.
pub fn kernel_coordinates(ext: &ExtensionData, p: u32) -> Result<KernelCoordinates> {
    let g = &ext.g;
    let ker = &ext.kernel;
    let members = ker.members();
    let order = ker.order();
    if order == 1 {
        let mut coords = HashMap::new();
        coords.insert(0, Vec::new());
        let mut element = HashMap::new();
        element.insert(Vec::new(), 0);
        return Ok(KernelCoordinates { p, basis: Vec::new(), coords, element });
    }
    if !power_of(order, p as usize) {
        return Err(Error::NotPGroup { p, order });
    }
    let elementary =
        members.iter().all(|&a| g.pow(a, p as u64) == 0 && members.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    if !elementary {
        return Err(Error::KernelNotElementaryAbelian);
    }
    let mut basis = Vec::new();
    let mut span: HashMap<usize, Vector> = HashMap::new();
    span.insert(0, Vec::new());
    for &x in members {
        if span.contains_key(&x) {
            continue;
        }
        basis.push(x);
        let mut next = HashMap::new();
        for (&e, v) in &span {
            let mut y = e;
            for c in 0..p {
                let mut w = v.clone();
                w.push(c);
                next.insert(y, w);
                y = g.mul(y, x);
            }
        }
        span = next;
    }
    let d = basis.len();
    let coords: HashMap<usize, Vector> = span
        .into_iter()
        .map(|(e, mut v)| {
            v.resize(d, 0);
            (e, v)
        })
        .collect();
    let element = coords.iter().map(|(&e, v)| (v.clone(), e)).collect();
    Ok(KernelCoordinates { p, basis, coords, element })
}

fn power_of(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// The kernel as an F_p[H]-module under conjugation by the least-index section.
pub fn kernel_module(ext: &ExtensionData, p: u32) -> Result<(GModule, KernelCoordinates)> {
    let kc = kernel_coordinates(ext, p)?;
    let fp = Field::prime(kc.p)?;
    let h = &ext.h;
    let d = kc.basis.len();
    if h.order() == 1 {
        return Ok((GModule::trivial_group(h, &fp, d), kc));
    }
    let section = ext.q.section().expect("extension map is surjective");
    let gens: Vec<FqMatrix> = h
        .gens()
        .iter()
        .map(|&t| {
            let s = section[t];
            let cols: Vec<Vector> = kc.basis.iter().map(|&b| kc.coords[&ext.g.conjugate(s, b)].clone()).collect();
            FqMatrix::from_rows(&fp, d, &cols).transpose()
        })
        .collect();
    let m = if d == 0 { GModule::new_unchecked(h, &fp, 0, gens) } else { GModule::new(h, &fp, gens)? };
    Ok((m, kc))
}

/// The class of an extension with elementary abelian kernel, as
/// `f(h, h') = s(h)·s(h')·s(hh')⁻¹` in kernel coordinates.
pub fn extension_class(ext: &ExtensionData, p: u32) -> Result<TwoCocycle> {
    let (m, kc) = kernel_module(ext, p)?;
    let h = &ext.h;
    let g = &ext.g;
    let n = h.order();
    let section = ext.q.section().expect("extension map is surjective");
    let mut values = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let x = g.mul(g.mul(section[a], section[b]), g.inv(section[h.mul(a, b)]));
            values.push(kc.coords[&x].clone());
        }
    }
    TwoCocycle::new(&m, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cyclic, elementary_abelian, find_isomorphism, klein4, library, symmetric};

    fn s() -> Settings {
        Settings::default()
    }

    fn dims(g: &FiniteGroup, p: u32) -> CohomDims {
        let f = Field::prime(p).unwrap();
        cohomology_dims(&GModule::trivial(g, &f), &s()).unwrap()
    }

    #[test]
    fn trivial_coefficients() {
        assert_eq!(dims(&cyclic(2), 2), CohomDims { h0: 1, h1: 1, h2: 1 });
        assert_eq!(dims(&cyclic(3), 3), CohomDims { h0: 1, h1: 1, h2: 1 });
        assert_eq!(dims(&cyclic(2), 3), CohomDims { h0: 1, h1: 0, h2: 0 });
        assert_eq!(dims(&klein4(), 2), CohomDims { h0: 1, h1: 2, h2: 3 });
        assert_eq!(dims(&elementary_abelian(3, 2), 3), CohomDims { h0: 1, h1: 2, h2: 3 });
        assert_eq!(dims(&cyclic(4), 2), CohomDims { h0: 1, h1: 1, h2: 1 });
        assert_eq!(dims(&library("Q8").unwrap(), 2), CohomDims { h0: 1, h1: 2, h2: 2 });
        assert_eq!(dims(&library("D4").unwrap(), 2), CohomDims { h0: 1, h1: 2, h2: 3 });
        assert_eq!(dims(&symmetric(3).unwrap(), 2).h1, 1);
        assert_eq!(dims(&FiniteGroup::trivial(), 2), CohomDims { h0: 1, h1: 0, h2: 0 });
    }

    #[test]
    fn regular_module_is_acyclic() {
        let g = symmetric(3).unwrap();
        let f = Field::prime(3).unwrap();
        let reg = GModule::regular(&g, &f);
        assert_eq!(cohomology_dims(&reg, &s()).unwrap(), CohomDims { h0: 1, h1: 0, h2: 0 });
    }

    #[test]
    fn caps() {
        let tight = Settings { h2_cap: 3, h1_cap: 3, ..s() };
        let f = Field::prime(2).unwrap();
        let m = GModule::trivial(&cyclic(4), &f);
        assert!(matches!(h2(&m, &tight), Err(Error::GroupTooLarge { .. })));
        assert!(matches!(h1(&m, &tight), Err(Error::GroupTooLarge { .. })));
    }

    fn z4_cocycle() -> TwoCocycle {
        let c2 = cyclic(2);
        let f = Field::prime(2).unwrap();
        let m = GModule::trivial(&c2, &f);
        TwoCocycle::new(&m, vec![vec![0], vec![0], vec![0], vec![1]]).unwrap()
    }

    #[test]
    fn z4_from_cocycle() {
        let c = z4_cocycle();
        let ext = extension_from_cocycle(&c, 5000).unwrap();
        assert_eq!(ext.g.order_census(), vec![1, 2, 4, 4]);
        assert!(is_trivial_class(&c).is_none());
        let back = extension_class(&ext, 2).unwrap();
        assert!(is_trivial_class(&back.sub(&c).unwrap()).is_some());
        assert!(find_isomorphism(&ext.g, &cyclic(4)).is_some());
        let (q, _) = crate::group::quotient_group(&ext.g, &ext.kernel).unwrap();
        assert!(find_isomorphism(&q, &cyclic(2)).is_some());
    }

    #[test]
    fn split_and_trivial_classes() {
        let f = Field::prime(2).unwrap();
        let c3 = cyclic(3);
        let m = crate::modrep::simple_modules(&c3, &f, &s()).unwrap().get(1).clone();
        let ext = split_extension(&m, 5000).unwrap();
        assert!(find_isomorphism(&ext.g, &library("A4").unwrap()).is_some());
        let cls = extension_class(&ext, 2).unwrap();
        assert!(is_trivial_class(&cls).is_some());
        // a random coboundary is trivial
        let c: Vec<Vector> = (0..3).map(|x| if x == 0 { vec![0, 0] } else { vec![1, x as u32 % 2] }).collect();
        let b = coboundary(&m, &c).unwrap();
        let w = is_trivial_class(&b).unwrap();
        assert_eq!(coboundary(&m, &w).unwrap().values, b.values);
        assert!(TwoCocycle::new(&m, vec![vec![1, 0]; 9]).is_err());
        // trivial H gives the module itself
        let t = FiniteGroup::trivial();
        let mt = GModule::trivial_group(&t, &f, 2);
        let e = split_extension(&mt, 100).unwrap();
        assert!(find_isomorphism(&e.g, &klein4()).is_some());
    }

    #[test]
    fn cocycle_text_roundtrip() {
        let c = z4_cocycle();
        let text = c.to_text();
        assert_eq!(text, "f(1,1) = 1\n");
        let back = TwoCocycle::from_text(c.module(), &text).unwrap();
        assert!(back.sub(&c).unwrap().is_zero());
    }

    #[test]
    fn kernel_not_elementary() {
        let c4 = cyclic(4);
        let ext = ExtensionData::over_trivial(&c4);
        assert!(matches!(extension_class(&ext, 2), Err(Error::KernelNotElementaryAbelian)));
    }
}
