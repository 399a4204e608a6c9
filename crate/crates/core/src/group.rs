//! Finite groups as fully materialized multiplication tables.
//!
//! Every group is produced by a breadth-first closure from its generators:
//! element 0 is the identity and element `x·s` discovered from `x` records the
//! tree edge `(x, s)`, so stored words are shortest in the given generator
//! order. The full table is filled along those tree edges and then certified
//! associative by Light's test on generators.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::cohomology::TwoCocycle;
use crate::error::{Error, Result};

/// Closure cap for permutation generators.
pub const PERM_CAP: usize = 5000;
/// Default cap for groups built by the engine.
pub const DEFAULT_GROUP_CAP: usize = 2000;

const NO_GEN: u32 = u32::MAX;

struct GroupData {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    gens: Vec<usize>,
    parent: Vec<(u32, u32)>,
    words: Vec<Vec<u32>>,
    labels: Option<Vec<String>>,
    name: Option<String>,
    perm_gens: Option<Vec<Vec<usize>>>,
}

/// A finite group with a complete multiplication table. Cheap to clone.
#[derive(Clone)]
pub struct FiniteGroup(Arc<GroupData>);

impl PartialEq for FiniteGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.n == other.0.n && self.0.gens == other.0.gens && self.0.mul == other.0.mul)
    }
}
impl Eq for FiniteGroup {}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.name {
            Some(name) => write!(f, "{name} (order {})", self.0.n),
            None => write!(f, "group of order {}", self.0.n),
        }
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.name {
            Some(name) => write!(f, "{name}"),
            None => write!(f, "<order {}>", self.0.n),
        }
    }
}

/// Breadth-first closure of `gens` under right multiplication.
///
/// Returns the elements in index order and the closed group.
pub fn close<E, F>(identity: E, gens: &[E], mul: F, cap: usize, context: &str) -> Result<(Vec<E>, FiniteGroup)>
where
    E: Clone + Eq + Hash,
    F: Fn(&E, &E) -> E,
{
    let k = gens.len();
    let mut index: HashMap<E, usize> = HashMap::new();
    let mut elems = vec![identity.clone()];
    index.insert(identity, 0);
    let mut parent = vec![(0u32, NO_GEN)];
    let mut right: Vec<u32> = Vec::new();
    let mut head = 0;
    while head < elems.len() {
        let x = elems[head].clone();
        for (si, s) in gens.iter().enumerate() {
            let y = mul(&x, s);
            let j = match index.get(&y) {
                Some(&j) => j,
                None => {
                    if elems.len() >= cap {
                        return Err(Error::GroupTooLarge { context: context.to_string(), limit: cap });
                    }
                    let j = elems.len();
                    index.insert(y.clone(), j);
                    elems.push(y);
                    parent.push((head as u32, si as u32));
                    j
                }
            };
            right.push(j as u32);
        }
        head += 1;
    }
    let group = FiniteGroup::from_right_table(elems.len(), k, &right, parent)?;
    Ok((elems, group))
}

impl FiniteGroup {
    fn from_right_table(n: usize, k: usize, right: &[u32], parent: Vec<(u32, u32)>) -> Result<FiniteGroup> {
        let gens: Vec<usize> = (0..k).map(|s| right[s] as usize).collect();
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            let row = &mut mul[x * n..(x + 1) * n];
            row[0] = x as u32;
            for y in 1..n {
                let (py, s) = parent[y];
                row[y] = right[row[py as usize] as usize * k + s as usize];
            }
        }
        // Light's test: (xy)s = x(ys) for all x, y and generators s.
        for x in 0..n {
            for y in 0..n {
                let xy = mul[x * n + y] as usize;
                for s in 0..k {
                    let lhs = right[xy * k + s];
                    let ys = right[y * k + s] as usize;
                    if lhs != mul[x * n + ys] {
                        return Err(Error::InvalidInput("multiplication is not associative".into()));
                    }
                }
            }
        }
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            if inv[x] != u32::MAX {
                continue;
            }
            let y = (0..n)
                .find(|&y| mul[x * n + y] == 0)
                .ok_or_else(|| Error::InvalidInput(format!("element {x} has no inverse")))?;
            inv[x] = y as u32;
            inv[y] = x as u32;
        }
        let mut words: Vec<Vec<u32>> = vec![Vec::new(); n];
        for y in 1..n {
            let (py, s) = parent[y];
            let mut w = words[py as usize].clone();
            w.push(s);
            words[y] = w;
        }
        Ok(FiniteGroup(Arc::new(GroupData {
            n,
            mul,
            inv,
            gens,
            parent,
            words,
            labels: None,
            name: None,
            perm_gens: None,
        })))
    }

    fn with_meta(self, labels: Option<Vec<String>>, name: Option<String>) -> FiniteGroup {
        let mut data = Arc::try_unwrap(self.0).unwrap_or_else(|arc| GroupData {
            n: arc.n,
            mul: arc.mul.clone(),
            inv: arc.inv.clone(),
            gens: arc.gens.clone(),
            parent: arc.parent.clone(),
            words: arc.words.clone(),
            labels: arc.labels.clone(),
            name: arc.name.clone(),
            perm_gens: arc.perm_gens.clone(),
        });
        if labels.is_some() {
            data.labels = labels;
        }
        if name.is_some() {
            data.name = name;
        }
        FiniteGroup(Arc::new(data))
    }

    /// Attach a display name.
    pub fn named(self, name: impl Into<String>) -> FiniteGroup {
        self.with_meta(None, Some(name.into()))
    }

    pub fn trivial() -> FiniteGroup {
        close(0u8, &[], |_, _| 0, 1, "trivial group").unwrap().1.named("1")
    }

    /// Closure of permutations of `{1..degree}` (given 0-based as image lists).
    ///
    /// Composition is `(g·h)(x) = g(h(x))`.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup> {
        Self::from_permutations_capped(degree, gens, PERM_CAP)
    }

    pub fn from_permutations_capped(degree: usize, gens: &[Vec<usize>], cap: usize) -> Result<FiniteGroup> {
        for g in gens {
            check_permutation(degree, g)?;
        }
        let identity: Vec<usize> = (0..degree).collect();
        let (elems, group) = close(
            identity,
            gens,
            |g: &Vec<usize>, h: &Vec<usize>| h.iter().map(|&x| g[x]).collect(),
            cap,
            "permutation closure",
        )?;
        let labels = elems.iter().map(|e| cycle_string(e)).collect();
        let group = group.with_meta(Some(labels), None);
        let mut data = Arc::try_unwrap(group.0).ok().expect("fresh group is uniquely owned");
        data.perm_gens = Some(gens.to_vec());
        Ok(FiniteGroup(Arc::new(data)))
    }

    /// Generators as 0-based permutations, for groups built from permutations.
    pub fn permutation_generators(&self) -> Option<&[Vec<usize>]> {
        self.0.perm_gens.as_deref()
    }

    /// A group from an explicit table with the given generators.
    pub fn from_table(table: &[Vec<usize>], gens: &[usize]) -> Result<FiniteGroup> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidInput("multiplication table must be square with entries < n".into()));
        }
        if gens.iter().any(|&g| g >= n) {
            return Err(Error::InvalidInput("generator index out of range".into()));
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidInput("table has no identity".into()))?;
        let gen_elems: Vec<usize> = gens.to_vec();
        let (elems, group) = close(e, &gen_elems, |&x, &s| table[x][s], n, "table closure")?;
        if elems.len() != n {
            return Err(Error::InvalidInput(format!("generators span only {} of {} elements", elems.len(), n)));
        }
        for x in 0..n {
            for y in 0..n {
                if table[elems[x]][elems[y]] != elems[group.mul(x, y)] {
                    return Err(Error::InvalidInput("multiplication is not associative".into()));
                }
            }
        }
        let labels = elems.iter().map(|e| format!("t{e}")).collect();
        Ok(group.with_meta(Some(labels), None))
    }

    pub fn order(&self) -> usize {
        self.0.n
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.0.mul[x * self.0.n + y] as usize
    }

    #[inline]
    pub fn inv(&self, x: usize) -> usize {
        self.0.inv[x] as usize
    }

    pub fn gens(&self) -> &[usize] {
        &self.0.gens
    }

    pub fn num_gens(&self) -> usize {
        self.0.gens.len()
    }

    /// Generator indices of the stored shortest word of `x`.
    pub fn word(&self, x: usize) -> &[u32] {
        &self.0.words[x]
    }

    /// Breadth-first tree edge: `x = y·gens[s]`; `None` for the identity.
    pub fn tree_parent(&self, x: usize) -> Option<(usize, usize)> {
        let (y, s) = self.0.parent[x];
        (s != NO_GEN).then_some((y as usize, s as usize))
    }

    pub fn name(&self) -> Option<&str> {
        self.0.name.as_deref()
    }

    pub fn label(&self, x: usize) -> String {
        match &self.0.labels {
            Some(l) => l[x].clone(),
            None => format!("e{x}"),
        }
    }

    pub fn pow(&self, x: usize, mut e: u64) -> usize {
        let mut acc = 0;
        let mut base = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    /// Sorted multiset of element orders.
    pub fn order_census(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|x| self.element_order(x)).collect();
        v.sort_unstable();
        v
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn is_abelian(&self) -> bool {
        let g = self.gens();
        g.iter().all(|&a| g.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Evaluate a word in the generators.
    pub fn eval_word(&self, word: &[u32]) -> usize {
        word.iter().fold(0, |acc, &s| self.mul(acc, self.0.gens[s as usize]))
    }

    /// Parity of each generator in the natural permutation action.
    pub fn generator_signs(&self) -> Option<Vec<bool>> {
        let perms = self.permutation_generators()?;
        Some(perms.iter().map(|g| permutation_is_odd(g)).collect())
    }

    pub fn is_p_group(&self, p: u32) -> bool {
        is_power_of(self.order(), p as usize)
    }

    pub fn is_p_prime(&self, p: u32) -> bool {
        !self.order().is_multiple_of(p as usize)
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::from_sorted(self, (0..self.order()).collect())
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup::from_sorted(self, vec![0])
    }

    pub fn derived_subgroup(&self) -> Subgroup {
        let g = self.gens();
        let seeds: Vec<usize> =
            g.iter().flat_map(|&a| g.iter().map(move |&b| (a, b))).map(|(a, b)| self.commutator(a, b)).collect();
        normal_closure(self, &seeds)
    }

    /// Minimum size of a generating set, by exhaustive search (small groups only).
    pub fn min_generating_set_size(&self) -> usize {
        let n = self.order();
        if n == 1 {
            return 0;
        }
        for k in 1..=n {
            let mut chosen = Vec::new();
            if self.search_generators(k, 1, &mut chosen) {
                return k;
            }
        }
        unreachable!()
    }

    fn search_generators(&self, k: usize, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() == k {
            return subgroup_generated(self, chosen).order() == self.order();
        }
        for x in start..self.order() {
            chosen.push(x);
            if self.search_generators(k, x + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
}

fn is_power_of(mut n: usize, p: usize) -> bool {
    if p < 2 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

fn permutation_is_odd(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    let mut transpositions = 0;
    for start in 0..perm.len() {
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        transpositions += len.max(1) - 1;
    }
    transpositions % 2 == 1
}

fn check_permutation(degree: usize, g: &[usize]) -> Result<()> {
    if g.len() != degree {
        return Err(Error::InvalidPermutation(format!("expected {degree} images, got {}", g.len())));
    }
    let mut seen = vec![false; degree];
    for &x in g {
        if x >= degree || seen[x] {
            return Err(Error::InvalidPermutation(format!("{g:?} is not a bijection")));
        }
        seen[x] = true;
    }
    Ok(())
}

fn cycle_string(perm: &[usize]) -> String {
    let mut seen = vec![false; perm.len()];
    let mut out = String::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            out.push_str(&(x + 1).to_string());
            first = false;
            x = perm[x];
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// A subgroup of a materialized group, stored as a sorted member list.
#[derive(Clone)]
pub struct Subgroup {
    parent: FiniteGroup,
    members: Vec<usize>,
    mask: Vec<bool>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {:?})", self.members.len(), self.parent)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent == other.parent && self.members == other.members
    }
}

impl Subgroup {
    fn from_sorted(parent: &FiniteGroup, members: Vec<usize>) -> Subgroup {
        let mut mask = vec![false; parent.order()];
        for &m in &members {
            mask[m] = true;
        }
        Subgroup { parent: parent.clone(), members, mask }
    }

    /// Validated constructor: the set must be closed and contain the identity.
    pub fn from_members(parent: &FiniteGroup, members: &[usize]) -> Result<Subgroup> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.iter().any(|&x| x >= parent.order()) {
            return Err(Error::InvalidInput("subgroup member out of range".into()));
        }
        let s = Subgroup::from_sorted(parent, m);
        if !s.mask[0] {
            return Err(Error::InvalidInput("subgroup must contain the identity".into()));
        }
        for &x in &s.members {
            if !s.mask[parent.inv(x)] || s.members.iter().any(|&y| !s.mask[parent.mul(x, y)]) {
                return Err(Error::InvalidInput("subset is not closed".into()));
            }
        }
        Ok(s)
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.mask[x]
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_normal(&self) -> bool {
        let g = &self.parent;
        g.gens().iter().all(|&s| self.members.iter().all(|&x| self.contains(g.conjugate(s, x))))
    }

    /// Greedy generating set: members in increasing order not yet spanned.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = subgroup_generated(&self.parent, &[]);
        for &x in &self.members {
            if !span.contains(x) {
                gens.push(x);
                span = subgroup_generated(&self.parent, &gens);
            }
        }
        gens
    }

    /// The subgroup as a group in its own right, with its inclusion.
    pub fn to_group(&self) -> (FiniteGroup, GroupHom) {
        let g = &self.parent;
        let gens = self.generators();
        let (elems, sub) = close(0usize, &gens, |&x, &s| g.mul(x, s), usize::MAX, "subgroup")
            .expect("subgroup closure of a finite group");
        let labels = elems.iter().map(|&e| g.label(e)).collect();
        let sub = sub.with_meta(Some(labels), None);
        let incl = GroupHom { source: sub, target: g.clone(), images: elems };
        (incl.source.clone(), incl)
    }
}

pub fn subgroup_generated(g: &FiniteGroup, seeds: &[usize]) -> Subgroup {
    let mut mask = vec![false; g.order()];
    let mut members = vec![0];
    mask[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(x) = queue.pop_front() {
        for &s in seeds {
            let y = g.mul(x, s);
            if !mask[y] {
                mask[y] = true;
                members.push(y);
                queue.push_back(y);
            }
        }
    }
    members.sort_unstable();
    Subgroup { parent: g.clone(), members, mask }
}

pub fn normal_closure(g: &FiniteGroup, seeds: &[usize]) -> Subgroup {
    let mut current: Vec<usize> = seeds.to_vec();
    loop {
        let s = subgroup_generated(g, &current);
        let mut grew = false;
        for &x in &s.members {
            for &t in g.gens() {
                let c = g.conjugate(t, x);
                if !s.contains(c) {
                    current.push(c);
                    grew = true;
                }
            }
        }
        if !grew {
            return s;
        }
    }
}

/// Frattini subgroup of a p-group together with d = log_p [P : Φ(P)].
///
/// For a p-group Φ is the normal closure of the p-th powers and pairwise
/// commutators of any generating set.
pub fn frattini_of_p_group(pg: &FiniteGroup, p: u32) -> Result<(Subgroup, usize)> {
    if !pg.is_p_group(p) && pg.order() != 1 {
        return Err(Error::NotPGroup { p, order: pg.order() });
    }
    let gens = pg.gens();
    let mut seeds: Vec<usize> = gens.iter().map(|&s| pg.pow(s, p as u64)).collect();
    for &a in gens {
        for &b in gens {
            seeds.push(pg.commutator(a, b));
        }
    }
    let phi = normal_closure(pg, &seeds);
    let index = pg.order() / phi.order();
    Ok((phi, log_exact(index, p as usize)))
}

/// Frattini subgroup of a normal p-subgroup `sub` of its parent.
pub fn frattini_of_subgroup(sub: &Subgroup, p: u32) -> Result<(Subgroup, usize)> {
    let (pg, incl) = sub.to_group();
    let (phi, d) = frattini_of_p_group(&pg, p)?;
    let members: Vec<usize> = phi.members().iter().map(|&x| incl.apply(x)).collect();
    Ok((Subgroup::from_members(sub.parent(), &members)?, d))
}

fn log_exact(mut n: usize, p: usize) -> usize {
    let mut k = 0;
    while n > 1 {
        debug_assert_eq!(n % p, 0);
        n /= p;
        k += 1;
    }
    k
}

/// A homomorphism between materialized groups.
#[derive(Clone)]
pub struct GroupHom {
    source: FiniteGroup,
    target: FiniteGroup,
    images: Vec<usize>,
}

impl fmt::Debug for GroupHom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupHom({:?} -> {:?})", self.source, self.target)
    }
}

impl GroupHom {
    /// Extend generator images along stored words and certify the result.
    ///
    /// The check `φ(x·s) = φ(x)·φ(s)` for every element x and generator s is
    /// exhaustive and implies multiplicativity on all pairs.
    pub fn from_gen_images(source: &FiniteGroup, target: &FiniteGroup, gen_images: &[usize]) -> Result<GroupHom> {
        if gen_images.len() != source.num_gens() {
            return Err(Error::NotAHomomorphism(format!(
                "{} generator images given for {} generators",
                gen_images.len(),
                source.num_gens()
            )));
        }
        if gen_images.iter().any(|&t| t >= target.order()) {
            return Err(Error::NotAHomomorphism("image index out of range".into()));
        }
        let images: Vec<usize> = (0..source.order())
            .map(|x| source.word(x).iter().fold(0, |acc, &s| target.mul(acc, gen_images[s as usize])))
            .collect();
        GroupHom::from_images(source, target, images)
    }

    pub fn from_images(source: &FiniteGroup, target: &FiniteGroup, images: Vec<usize>) -> Result<GroupHom> {
        if images.len() != source.order() || images.iter().any(|&t| t >= target.order()) {
            return Err(Error::NotAHomomorphism("image table has wrong shape".into()));
        }
        if images[0] != 0 {
            return Err(Error::NotAHomomorphism("identity not sent to identity".into()));
        }
        for x in 0..source.order() {
            for &s in source.gens() {
                if images[source.mul(x, s)] != target.mul(images[x], images[s]) {
                    return Err(Error::NotAHomomorphism(format!("fails on {} * {}", source.label(x), source.label(s))));
                }
            }
        }
        Ok(GroupHom { source: source.clone(), target: target.clone(), images })
    }

    pub fn identity(g: &FiniteGroup) -> GroupHom {
        GroupHom { source: g.clone(), target: g.clone(), images: (0..g.order()).collect() }
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GroupHom) -> Result<GroupHom> {
        if self.target != next.source {
            return Err(Error::NotAHomomorphism("composition of mismatched maps".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: next.target.clone(),
            images: self.images.iter().map(|&y| next.images[y]).collect(),
        })
    }

    pub fn kernel(&self) -> Subgroup {
        let members = (0..self.source.order()).filter(|&x| self.images[x] == 0).collect();
        Subgroup::from_sorted(&self.source, members)
    }

    pub fn is_epimorphism(&self) -> bool {
        let mut hit = vec![false; self.target.order()];
        for &y in &self.images {
            hit[y] = true;
        }
        hit.into_iter().all(|b| b)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    /// Some preimage of each target element (least index), if surjective.
    pub fn section(&self) -> Option<Vec<usize>> {
        let mut s = vec![usize::MAX; self.target.order()];
        for x in (0..self.source.order()).rev() {
            s[self.images[x]] = x;
        }
        s.iter().all(|&v| v != usize::MAX).then_some(s)
    }
}

pub fn kernel_of(hom: &GroupHom) -> Subgroup {
    hom.kernel()
}

pub fn is_epimorphism(hom: &GroupHom) -> bool {
    hom.is_epimorphism()
}

/// `G/N` with its projection.
pub fn quotient_group(g: &FiniteGroup, nsub: &Subgroup) -> Result<(FiniteGroup, GroupHom)> {
    if nsub.parent() != g {
        return Err(Error::InvalidInput("subgroup of a different group".into()));
    }
    if !nsub.is_normal() {
        return Err(Error::NotNormal(format!("subgroup of order {} in {:?}", nsub.order(), g)));
    }
    let n = g.order();
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset[x] == usize::MAX {
            let c = reps.len();
            reps.push(x);
            for &m in nsub.members() {
                coset[g.mul(x, m)] = c;
            }
        }
    }
    let gen_cosets: Vec<usize> = g.gens().iter().map(|&s| coset[s]).collect();
    let (elems, q) = close(coset[0], &gen_cosets, |&a, &b| coset[g.mul(reps[a], reps[b])], usize::MAX, "quotient")?;
    let mut pos = vec![0; elems.len()];
    for (i, &c) in elems.iter().enumerate() {
        pos[c] = i;
    }
    let images = (0..n).map(|x| pos[coset[x]]).collect();
    let labels = elems.iter().map(|&c| format!("{}N", g.label(reps[c]))).collect();
    let q = q.with_meta(Some(labels), None);
    let proj = GroupHom::from_images(g, &q, images)?;
    Ok((q, proj))
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let mut gens: Vec<(usize, usize)> = a.gens().iter().map(|&s| (s, 0)).collect();
    gens.extend(b.gens().iter().map(|&t| (0, t)));
    let (elems, g) =
        close((0usize, 0usize), &gens, |&(x, y), &(s, t)| (a.mul(x, s), b.mul(y, t)), usize::MAX, "direct product")
            .expect("product of finite groups closes");
    let labels = elems.iter().map(|&(x, y)| format!("[{},{}]", a.label(x), b.label(y))).collect();
    let name = match (a.name(), b.name()) {
        (Some(x), Some(y)) => Some(format!("{x}x{y}")),
        _ => None,
    };
    g.with_meta(Some(labels), name)
}

/// An automorphism of a group given as the full image table.
pub type Automorphism = Vec<usize>;

fn is_automorphism(pg: &FiniteGroup, phi: &[usize]) -> bool {
    if phi.len() != pg.order() || phi[0] != 0 {
        return false;
    }
    let mut hit = vec![false; pg.order()];
    for &y in phi {
        if y >= pg.order() || hit[y] {
            return false;
        }
        hit[y] = true;
    }
    (0..pg.order()).all(|x| pg.gens().iter().all(|&s| phi[pg.mul(x, s)] == pg.mul(phi[x], phi[s])))
}

/// `P ⋊ H` for an action given by one automorphism of P per generator of H,
/// with `(a, h)(b, h') = (a·φ_h(b), hh')`.
///
/// Generators of the product are those of P followed by those of H.
pub fn semidirect_product(
    pg: &FiniteGroup,
    hg: &FiniteGroup,
    action: &[Automorphism],
) -> Result<(FiniteGroup, GroupHom, GroupHom)> {
    if action.len() != hg.num_gens() {
        return Err(Error::InvalidAction(format!("{} automorphisms for {} generators", action.len(), hg.num_gens())));
    }
    for (i, phi) in action.iter().enumerate() {
        if !is_automorphism(pg, phi) {
            return Err(Error::InvalidAction(format!("map for generator {i} is not an automorphism")));
        }
    }
    let np = pg.order();
    // φ_h for every h, extended along words and certified well defined.
    let mut phis: Vec<Vec<usize>> = vec![Vec::new(); hg.order()];
    phis[0] = (0..np).collect();
    for h in 1..hg.order() {
        let (y, s) = hg.tree_parent(h).unwrap();
        let next: Vec<usize> = (0..np).map(|a| phis[y][action[s][a]]).collect();
        phis[h] = next;
    }
    for h in 0..hg.order() {
        for (si, &s) in hg.gens().iter().enumerate() {
            let hs = hg.mul(h, s);
            if (0..np).any(|a| phis[hs][a] != phis[h][action[si][a]]) {
                return Err(Error::InvalidAction("generator automorphisms violate the relations of H".into()));
            }
        }
    }
    let mut gens: Vec<(usize, usize)> = pg.gens().iter().map(|&s| (s, 0)).collect();
    gens.extend(hg.gens().iter().map(|&t| (0, t)));
    let (elems, g) = close(
        (0usize, 0usize),
        &gens,
        |&(a, h), &(b, k)| (pg.mul(a, phis[h][b]), hg.mul(h, k)),
        usize::MAX,
        "semidirect product",
    )?;
    let mut pos = HashMap::new();
    for (i, &e) in elems.iter().enumerate() {
        pos.insert(e, i);
    }
    let labels = elems.iter().map(|&(a, h)| format!("[{},{}]", pg.label(a), hg.label(h))).collect();
    let g = g.with_meta(Some(labels), None);
    let incl = GroupHom::from_images(pg, &g, (0..np).map(|a| pos[&(a, 0)]).collect())?;
    let proj = GroupHom::from_images(&g, hg, elems.iter().map(|&(_, h)| h).collect())?;
    Ok((g, incl, proj))
}

/// An exact sequence `1 → P → G → H → 1`.
#[derive(Clone, Debug)]
pub struct ExtensionData {
    pub g: FiniteGroup,
    pub h: FiniteGroup,
    pub kernel: Subgroup,
    pub q: GroupHom,
    pub cocycle: Option<TwoCocycle>,
}

impl ExtensionData {
    pub fn from_epimorphism(q: GroupHom) -> Result<ExtensionData> {
        if !q.is_epimorphism() {
            return Err(Error::NotSurjective(format!("{:?} -> {:?}", q.source(), q.target())));
        }
        Ok(ExtensionData { g: q.source().clone(), h: q.target().clone(), kernel: q.kernel(), q, cocycle: None })
    }

    /// `G → G` with trivial kernel.
    pub fn identity(g: &FiniteGroup) -> ExtensionData {
        ExtensionData::from_epimorphism(GroupHom::identity(g)).unwrap()
    }

    /// `G → 1`.
    pub fn over_trivial(g: &FiniteGroup) -> ExtensionData {
        let t = FiniteGroup::trivial();
        let q = GroupHom::from_images(g, &t, vec![0; g.order()]).unwrap();
        ExtensionData::from_epimorphism(q).unwrap()
    }

    pub fn kernel_is_p_group(&self, p: u32) -> bool {
        self.kernel.order() == 1 || is_power_of(self.kernel.order(), p as usize)
    }

    /// The induced extension `G/O → H` for a normal subgroup O inside the kernel.
    pub fn quotient_by(&self, o: &Subgroup) -> Result<(ExtensionData, GroupHom)> {
        if !o.is_subgroup_of(&self.kernel) {
            return Err(Error::InvalidInput("collapsed subgroup must lie in the kernel".into()));
        }
        let (gq, proj) = quotient_group(&self.g, o)?;
        let sec = proj.section().unwrap();
        let images = (0..gq.order()).map(|c| self.q.apply(sec[c])).collect();
        let q = GroupHom::from_images(&gq, &self.h, images)?;
        Ok((ExtensionData::from_epimorphism(q)?, proj))
    }
}

/// Backtracking search for an isomorphism `a → b` on generator images.
pub fn find_isomorphism(a: &FiniteGroup, b: &FiniteGroup) -> Option<GroupHom> {
    if a.order() != b.order() || a.order_census() != b.order_census() {
        return None;
    }
    let orders_b: Vec<usize> = (0..b.order()).map(|y| b.element_order(y)).collect();
    let wanted: Vec<usize> = a.gens().iter().map(|&s| a.element_order(s)).collect();
    let mut chosen = Vec::new();
    search_homs(a, b, &orders_b, &wanted, &mut chosen, &mut |hom| hom.is_injective())
}

/// All automorphisms of a group (small groups only).
pub fn automorphisms(g: &FiniteGroup) -> Vec<Automorphism> {
    let orders: Vec<usize> = (0..g.order()).map(|y| g.element_order(y)).collect();
    let wanted: Vec<usize> = g.gens().iter().map(|&s| g.element_order(s)).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    search_homs(g, g, &orders, &wanted, &mut chosen, &mut |hom| {
        if hom.is_injective() {
            out.push(hom.images().to_vec());
        }
        false
    });
    out.sort();
    out
}

fn search_homs(
    a: &FiniteGroup,
    b: &FiniteGroup,
    orders_b: &[usize],
    wanted: &[usize],
    chosen: &mut Vec<usize>,
    accept: &mut dyn FnMut(&GroupHom) -> bool,
) -> Option<GroupHom> {
    let i = chosen.len();
    if i == wanted.len() {
        let hom = GroupHom::from_gen_images(a, b, chosen).ok()?;
        return accept(&hom).then_some(hom);
    }
    for y in 0..b.order() {
        if orders_b[y] != wanted[i] {
            continue;
        }
        chosen.push(y);
        let found = search_homs(a, b, orders_b, wanted, chosen, accept);
        chosen.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Parse `(1 2)(3 4)` cycle notation (1-based) into a 0-based image list.
pub fn parse_cycles(degree: usize, text: &str) -> Result<Vec<usize>> {
    let mut perm: Vec<usize> = (0..degree).collect();
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(Error::InvalidPermutation("empty permutation".into()));
    }
    if rest == "1" || rest == "id" {
        return Ok(perm);
    }
    // Cycles are applied right to left, matching composition order.
    let mut cycles = Vec::new();
    while !rest.is_empty() {
        if !rest.starts_with('(') {
            return Err(Error::InvalidPermutation(format!("expected '(' in {text:?}")));
        }
        let close = rest.find(')').ok_or_else(|| Error::InvalidPermutation(format!("unclosed cycle in {text:?}")))?;
        let body = &rest[1..close];
        let pts: Vec<usize> = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .ok()
                    .filter(|&v| v >= 1 && v <= degree)
                    .ok_or_else(|| Error::InvalidPermutation(format!("bad point {t:?} for degree {degree}")))
            })
            .collect::<Result<_>>()?;
        let mut seen = std::collections::HashSet::new();
        if !pts.iter().all(|p| seen.insert(*p)) {
            return Err(Error::InvalidPermutation(format!("repeated point in cycle ({body})")));
        }
        cycles.push(pts);
        rest = rest[close + 1..].trim_start();
    }
    for pts in cycles.iter().rev() {
        let mut c: Vec<usize> = (0..degree).collect();
        for i in 0..pts.len() {
            c[pts[i] - 1] = pts[(i + 1) % pts.len()] - 1;
        }
        perm = perm.iter().map(|&x| c[x]).collect();
    }
    Ok(perm)
}

fn cycle_perm(degree: usize, pts: &[usize]) -> Vec<usize> {
    let mut c: Vec<usize> = (0..degree).collect();
    for i in 0..pts.len() {
        c[pts[i]] = pts[(i + 1) % pts.len()];
    }
    c
}

pub fn cyclic(n: usize) -> FiniteGroup {
    if n == 1 {
        return FiniteGroup::trivial().named("C1");
    }
    let gen = cycle_perm(n, &(0..n).collect::<Vec<_>>());
    FiniteGroup::from_permutations(n, &[gen]).unwrap().named(format!("C{n}"))
}

pub fn symmetric(n: usize) -> Result<FiniteGroup> {
    if !(1..=5).contains(&n) {
        return Err(Error::InvalidInput(format!("S{n}: only n <= 5 is in the library")));
    }
    if n == 1 {
        return Ok(FiniteGroup::trivial().named("S1"));
    }
    let gens = if n == 2 {
        vec![cycle_perm(2, &[0, 1])]
    } else {
        vec![cycle_perm(n, &[0, 1]), cycle_perm(n, &(0..n).collect::<Vec<_>>())]
    };
    Ok(FiniteGroup::from_permutations(n, &gens)?.named(format!("S{n}")))
}

/// Dihedral group of order 8 on the square's vertices.
pub fn dihedral8() -> FiniteGroup {
    let gens = [cycle_perm(4, &[0, 1, 2, 3]), cycle_perm(4, &[0, 2])];
    FiniteGroup::from_permutations(4, &gens).unwrap().named("D4")
}

/// Quaternion group in its regular permutation representation.
pub fn quaternion8() -> FiniteGroup {
    // points 1..8 = 1, i, j, k, -1, -i, -j, -k; left multiplication by i and j
    let i = parse_cycles(8, "(1 2 5 6)(3 4 7 8)").unwrap();
    let j = parse_cycles(8, "(1 3 5 7)(2 8 6 4)").unwrap();
    FiniteGroup::from_permutations(8, &[i, j]).unwrap().named("Q8")
}

pub fn alternating4() -> FiniteGroup {
    let gens = [cycle_perm(4, &[0, 1, 2]), parse_cycles(4, "(1 2)(3 4)").unwrap()];
    FiniteGroup::from_permutations(4, &gens).unwrap().named("A4")
}

pub fn klein4() -> FiniteGroup {
    let gens = [parse_cycles(4, "(1 2)(3 4)").unwrap(), parse_cycles(4, "(1 3)(2 4)").unwrap()];
    FiniteGroup::from_permutations(4, &gens).unwrap().named("V4")
}

/// Elementary abelian group `(Z/p)^d` as permutations on `p·d` points.
pub fn elementary_abelian(p: usize, d: usize) -> FiniteGroup {
    if d == 0 {
        return FiniteGroup::trivial();
    }
    let gens: Vec<Vec<usize>> = (0..d).map(|i| cycle_perm(p * d, &(i * p..(i + 1) * p).collect::<Vec<_>>())).collect();
    FiniteGroup::from_permutations(p * d, &gens).unwrap().named(format!("C{p}^{d}"))
}

/// Look up a library group: `1`, `Cn`, `Sn` (n ≤ 5), `D4`, `Q8`, `A4`, `V4`,
/// powers `X^k` and products `XxY`.
pub fn library(name: &str) -> Result<FiniteGroup> {
    let name = name.trim();
    if let Some((a, b)) = split_product(name) {
        let g = direct_product(&library(a)?, &library(b)?);
        return Ok(g.named(name));
    }
    if let Some((base, k)) = name.rsplit_once('^') {
        let k: usize = k.parse().map_err(|_| Error::InvalidInput(format!("bad exponent in {name:?}")))?;
        let b = library(base)?;
        let mut g = FiniteGroup::trivial();
        for _ in 0..k {
            g = direct_product(&g, &b);
        }
        return Ok(g.named(name));
    }
    let g = match name {
        "1" | "C1" | "trivial" => FiniteGroup::trivial().named("1"),
        "D4" | "D8" => dihedral8(),
        "Q8" => quaternion8(),
        "A4" => alternating4(),
        "V4" => klein4(),
        _ => {
            let (head, num) = name.split_at(1);
            let n: usize = num
                .parse()
                .ok()
                .filter(|&n| n >= 1)
                .ok_or_else(|| Error::InvalidInput(format!("unknown group {name:?}")))?;
            match head {
                "C" => {
                    if n > PERM_CAP {
                        return Err(Error::GroupTooLarge { context: name.into(), limit: PERM_CAP });
                    }
                    cyclic(n)
                }
                "S" => symmetric(n)?,
                _ => return Err(Error::InvalidInput(format!("unknown group {name:?}"))),
            }
        }
    };
    Ok(g)
}

fn split_product(name: &str) -> Option<(&str, &str)> {
    // split on the first 'x' that separates two factors
    let i = name.find('x')?;
    Some((&name[..i], &name[i + 1..]))
}

/// Parse `perm <deg>; g1 = (1 2); g2 = (1 2 3)` or a library name.
pub fn parse_group(text: &str) -> Result<FiniteGroup> {
    let t = text.trim();
    let Some(rest) = t.strip_prefix("perm") else {
        return library(t);
    };
    let mut parts = rest.split(';');
    let degree: usize = parts
        .next()
        .and_then(|d| d.trim().parse().ok())
        .ok_or_else(|| Error::InvalidInput("perm: missing degree".into()))?;
    let mut gens = Vec::new();
    for part in parts {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let body = match part.split_once('=') {
            Some((_, b)) => b,
            None => part,
        };
        gens.push(parse_cycles(degree, body)?);
    }
    FiniteGroup::from_permutations(degree, &gens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_basics() {
        let c3 = FiniteGroup::from_permutations(3, &[vec![1, 2, 0]]).unwrap();
        assert_eq!(c3.order(), 3);
        assert!(c3.is_abelian());
        assert_eq!(FiniteGroup::from_permutations(3, &[]).unwrap().order(), 1);
        let s3 = parse_group("perm 3; g1 = (1 2); g2 = (1 2 3)").unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        for x in 0..6 {
            assert_eq!(s3.eval_word(s3.word(x)), x);
            assert_eq!(s3.mul(x, s3.inv(x)), 0);
        }
    }

    #[test]
    fn s3_table_matches_composition() {
        let s3 = symmetric(3).unwrap();
        let perms: Vec<Vec<usize>> = (0..6).map(|x| parse_cycles(3, &s3.label(x)).unwrap()).collect();
        for x in 0..6 {
            for y in 0..6 {
                let composed: Vec<usize> = perms[y].iter().map(|&i| perms[x][i]).collect();
                assert_eq!(perms[s3.mul(x, y)], composed);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = FiniteGroup::from_permutations_capped(5, &[vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]], 50);
        assert!(matches!(err, Err(Error::GroupTooLarge { .. })));
    }

    #[test]
    fn bad_permutation() {
        assert!(FiniteGroup::from_permutations(3, &[vec![0, 0, 1]]).is_err());
        assert!(parse_cycles(3, "(1 4)").is_err());
    }

    #[test]
    fn normal_closure_of_transposition() {
        let s3 = symmetric(3).unwrap();
        let t = (0..6).find(|&x| s3.label(x) == "(1 2)").unwrap();
        assert_eq!(subgroup_generated(&s3, &[t]).order(), 2);
        assert_eq!(normal_closure(&s3, &[t]).order(), 6);
        assert_eq!(subgroup_generated(&s3, &[0]).order(), 1);
        assert_eq!(subgroup_generated(&s3, s3.gens()).order(), 6);
    }

    #[test]
    fn quotients() {
        let c4 = cyclic(4);
        let sq = c4.pow(c4.gens()[0], 2);
        let n = subgroup_generated(&c4, &[sq]);
        let (q, proj) = quotient_group(&c4, &n).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(proj.kernel().order(), 2);
        let (q1, _) = quotient_group(&c4, &c4.whole()).unwrap();
        assert_eq!(q1.order(), 1);
        let (q4, _) = quotient_group(&c4, &c4.trivial_subgroup()).unwrap();
        assert!(find_isomorphism(&q4, &c4).is_some());
        let s3 = symmetric(3).unwrap();
        let t = subgroup_generated(&s3, &[s3.gens()[0]]);
        assert!(matches!(quotient_group(&s3, &t), Err(Error::NotNormal(_))));
    }

    #[test]
    fn frattini_examples() {
        let (phi, d) = frattini_of_p_group(&klein4(), 2).unwrap();
        assert_eq!((phi.order(), d), (1, 2));
        let (phi, d) = frattini_of_p_group(&cyclic(4), 2).unwrap();
        assert_eq!((phi.order(), d), (2, 1));
        let (phi, d) = frattini_of_p_group(&quaternion8(), 2).unwrap();
        assert_eq!((phi.order(), d), (2, 2));
        let (_, d) = frattini_of_p_group(&dihedral8(), 2).unwrap();
        assert_eq!(d, 2);
        assert!(matches!(frattini_of_p_group(&symmetric(3).unwrap(), 2), Err(Error::NotPGroup { .. })));
    }

    #[test]
    fn d_matches_minimal_generating_sets() {
        for (g, p) in [
            (cyclic(2), 2),
            (cyclic(4), 2),
            (cyclic(8), 2),
            (klein4(), 2),
            (elementary_abelian(2, 3), 2),
            (dihedral8(), 2),
            (quaternion8(), 2),
            (cyclic(9), 3),
            (elementary_abelian(3, 2), 3),
            (library("C4xC2").unwrap(), 2),
        ] {
            let (_, d) = frattini_of_p_group(&g, p).unwrap();
            assert_eq!(d, g.min_generating_set_size(), "{g:?}");
        }
    }

    #[test]
    fn frattini_is_characteristic() {
        for g in [dihedral8(), quaternion8(), library("C4xC2").unwrap()] {
            let (phi, _) = frattini_of_p_group(&g, 2).unwrap();
            for a in automorphisms(&g) {
                assert!(phi.members().iter().all(|&x| phi.contains(a[x])));
            }
        }
    }

    #[test]
    fn semidirect_a4() {
        let v = klein4();
        let c3 = cyclic(3);
        // the automorphism cycling the three involutions
        let auts = automorphisms(&v);
        assert_eq!(auts.len(), 6);
        let phi = auts
            .into_iter()
            .find(|a| {
                let v2 = (0..4).map(|x| a[a[x]]).collect::<Vec<_>>();
                let v3 = (0..4).map(|x| a[v2[x]]).collect::<Vec<_>>();
                v2 != (0..4).collect::<Vec<_>>() && v3 == (0..4).collect::<Vec<_>>()
            })
            .unwrap();
        let (g, incl, proj) = semidirect_product(&v, &c3, &[phi]).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.derived_subgroup().order(), 4);
        assert!(find_isomorphism(&g, &alternating4()).is_some());
        assert!(incl.then(&proj).unwrap().images().iter().all(|&x| x == 0));
        assert_eq!(proj.kernel().order(), 4);
        // trivial action gives the direct product
        let (d, _, _) = semidirect_product(&v, &c3, &[(0..4).collect()]).unwrap();
        assert!(d.is_abelian());
        // trivial H gives P back
        let (pp, _, _) = semidirect_product(&v, &FiniteGroup::trivial(), &[]).unwrap();
        assert!(find_isomorphism(&pp, &v).is_some());
        // an order-2 automorphism cannot be the image of a generator of C3
        let swap = automorphisms(&v)
            .into_iter()
            .find(|a| a.iter().enumerate().any(|(i, &x)| i != x) && (0..4).all(|x| a[a[x]] == x))
            .unwrap();
        assert!(matches!(semidirect_product(&v, &c3, &[swap]), Err(Error::InvalidAction(_))));
    }

    #[test]
    fn homs_and_kernels() {
        let c4 = cyclic(4);
        let c2 = cyclic(2);
        let proj = GroupHom::from_gen_images(&c4, &c2, &[c2.gens()[0]]).unwrap();
        assert!(proj.is_epimorphism());
        assert_eq!(kernel_of(&proj).order(), 2);
        assert_eq!(kernel_of(&GroupHom::identity(&c4)).order(), 1);
        let c3 = cyclic(3);
        assert!(GroupHom::from_gen_images(&c4, &c3, &[c3.gens()[0]]).is_err());
        assert!(symmetric(3).unwrap().is_p_prime(5));
        assert!(!symmetric(3).unwrap().is_p_prime(3));
    }

    #[test]
    fn library_groups() {
        assert_eq!(library("Q8").unwrap().order_census(), vec![1, 2, 4, 4, 4, 4, 4, 4]);
        assert_eq!(library("D4").unwrap().order(), 8);
        assert_eq!(library("S4").unwrap().order(), 24);
        assert_eq!(library("C2^3").unwrap().order(), 8);
        assert_eq!(library("C3xC2").unwrap().order(), 6);
        assert!(find_isomorphism(&library("C3xC2").unwrap(), &cyclic(6)).is_some());
        assert!(find_isomorphism(&library("Q8").unwrap(), &dihedral8()).is_none());
        assert!(library("S6").is_err());
        assert!(library("Z7").is_err());
    }
}
