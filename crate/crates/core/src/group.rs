//! Finite groups as explicit multiplication tables, with conjugacy
//! structure, products, quotients and the derived series.
//!
//! Element ids are dense 0-based integers and the identity is always id 0
//! after normalization; conjugacy classes are listed with the class of the
//! identity first, each class sorted with its minimal element as
//! representative. Everything is immutable once built.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, GroupDefect, Result};

/// Default cap for closures and product constructions.
pub const DEFAULT_ORDER_LIMIT: usize = 20_000;

/// Tables at or below this order get exhaustive associativity validation;
/// larger ones get a randomized sweep of 10^5 triples.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 256;
const RANDOM_ASSOC_TRIPLES: usize = 100_000;

#[derive(Debug)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    class_of: Vec<u32>,
    classes: Vec<Vec<u32>>,
    class_sizes: Vec<usize>,
    exponent: usize,
    name: Option<String>,
}

impl FiniteGroup {
    /// Build from a full multiplication table. The table is validated
    /// against the group axioms and relabeled so the identity is id 0.
    pub fn from_cayley(table: Vec<Vec<u32>>) -> Result<Arc<FiniteGroup>> {
        Self::from_cayley_named(table, None)
    }

    pub fn from_cayley_named(
        table: Vec<Vec<u32>>,
        name: Option<String>,
    ) -> Result<Arc<FiniteGroup>> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NotAGroup(GroupDefect::NoIdentity));
        }
        for row in &table {
            if row.len() != n || row.iter().any(|&x| x as usize >= n) {
                return Err(Error::NotAGroup(GroupDefect::NonAssociative));
            }
        }
        let mut flat = vec![0u32; n * n];
        for (i, row) in table.iter().enumerate() {
            flat[i * n..(i + 1) * n].copy_from_slice(row);
        }
        let e = find_identity(&flat, n).ok_or(Error::NotAGroup(GroupDefect::NoIdentity))?;
        if e != 0 {
            flat = relabel_swap(&flat, n, e);
        }
        Self::from_flat_table(flat, n, name)
    }

    /// Close a set of permutations of {0..k-1} under composition and return
    /// the resulting group; element 0 is the identity.
    pub fn from_permutations(
        generators: &[Vec<usize>],
        order_limit: usize,
    ) -> Result<Arc<FiniteGroup>> {
        let k = generators.first().map_or(1, Vec::len);
        for g in generators {
            let mut seen = vec![false; k];
            if g.len() != k {
                return Err(Error::NotAGroup(GroupDefect::NonAssociative));
            }
            for &img in g {
                if img >= k || seen[img] {
                    return Err(Error::NotAGroup(GroupDefect::NoInverse));
                }
                seen[img] = true;
            }
        }
        let identity: Vec<usize> = (0..k).collect();
        let mut elems: Vec<Vec<usize>> = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, u32> = HashMap::new();
        index.insert(identity, 0);
        let mut head = 0;
        while head < elems.len() {
            let cur = elems[head].clone();
            head += 1;
            for g in generators {
                let prod: Vec<usize> = (0..k).map(|i| cur[g[i]]).collect();
                if !index.contains_key(&prod) {
                    if elems.len() >= order_limit {
                        return Err(Error::OrderLimitExceeded {
                            limit: order_limit,
                            needed: elems.len() + 1,
                        });
                    }
                    index.insert(prod.clone(), elems.len() as u32);
                    elems.push(prod);
                }
            }
        }
        let n = elems.len();
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..k).map(|i| elems[a][elems[b][i]]).collect();
                flat[a * n + b] = index[&prod];
            }
        }
        Self::from_flat_table(flat, n, None)
    }

    pub(crate) fn from_flat_table(
        flat: Vec<u32>,
        n: usize,
        name: Option<String>,
    ) -> Result<Arc<FiniteGroup>> {
        validate_table(&flat, n)?;
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| flat[x * n + y] == 0)
                .ok_or(Error::NotAGroup(GroupDefect::NoInverse))?;
            if flat[y * n + x] != 0 {
                return Err(Error::NotAGroup(GroupDefect::NoInverse));
            }
            inv[x] = y as u32;
        }
        let (class_of, classes) = conjugacy_classes(&flat, &inv, n);
        let class_sizes = classes.iter().map(Vec::len).collect();
        let exponent = {
            let mut e: usize = 1;
            for cls in &classes {
                let ord = element_order_in(&flat, n, cls[0]);
                e = num_integer::lcm(e, ord);
            }
            e
        };
        debug_assert_eq!(n % exponent, 0);
        Ok(Arc::new(FiniteGroup {
            order: n,
            mul: flat,
            inv,
            class_of,
            classes,
            class_sizes,
            exponent,
            name,
        }))
    }

    pub fn trivial() -> Arc<FiniteGroup> {
        FiniteGroup::from_cayley(vec![vec![0]]).expect("trivial table is a group")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    /// g * x * g^-1
    #[inline]
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn power(&self, x: u32, k: usize) -> u32 {
        let mut acc = 0u32;
        for _ in 0..k {
            acc = self.mul(acc, x);
        }
        acc
    }

    pub fn element_order(&self, x: u32) -> usize {
        element_order_in(&self.mul, self.order, x)
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    #[inline]
    pub fn class_of(&self, x: u32) -> usize {
        self.class_of[x as usize] as usize
    }

    pub fn class_members(&self, k: usize) -> &[u32] {
        &self.classes[k]
    }

    pub fn class_rep(&self, k: usize) -> u32 {
        self.classes[k][0]
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    /// Class of the inverses of class k.
    pub fn inverse_class(&self, k: usize) -> usize {
        self.class_of(self.inv(self.class_rep(k)))
    }

    pub fn is_abelian(&self) -> bool {
        self.classes.len() == self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(self: &Arc<Self>, name: &str) -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup {
            order: self.order,
            mul: self.mul.clone(),
            inv: self.inv.clone(),
            class_of: self.class_of.clone(),
            classes: self.classes.clone(),
            class_sizes: self.class_sizes.clone(),
            exponent: self.exponent,
            name: Some(name.to_string()),
        })
    }

    /// Same abstract table, not just same allocation.
    pub fn same_group(a: &FiniteGroup, b: &FiniteGroup) -> bool {
        std::ptr::eq(a, b) || (a.order == b.order && a.mul == b.mul)
    }
}

fn find_identity(flat: &[u32], n: usize) -> Option<usize> {
    (0..n).find(|&e| (0..n).all(|x| flat[e * n + x] == x as u32 && flat[x * n + e] == x as u32))
}

fn relabel_swap(flat: &[u32], n: usize, e: usize) -> Vec<u32> {
    let perm = |x: u32| -> u32 {
        if x as usize == e {
            0
        } else if x == 0 {
            e as u32
        } else {
            x
        }
    };
    let mut out = vec![0u32; n * n];
    for a in 0..n as u32 {
        for b in 0..n as u32 {
            out[perm(a) as usize * n + perm(b) as usize] = perm(flat[a as usize * n + b as usize]);
        }
    }
    out
}

fn validate_table(flat: &[u32], n: usize) -> Result<()> {
    if find_identity(flat, n) != Some(0) {
        return Err(Error::NotAGroup(GroupDefect::NoIdentity));
    }
    let mul = |a: usize, b: usize| flat[a * n + b] as usize;
    if n <= EXHAUSTIVE_ASSOC_LIMIT {
        for a in 0..n {
            for b in 0..n {
                let ab = mul(a, b);
                for c in 0..n {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(Error::NotAGroup(GroupDefect::NonAssociative));
                    }
                }
            }
        }
    } else {
        // deterministic xorshift so validation is reproducible
        let mut state = 0x9E37_79B9_7F4A_7C15u64 ^ (n as u64);
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % n as u64) as usize
        };
        for _ in 0..RANDOM_ASSOC_TRIPLES {
            let (a, b, c) = (next(), next(), next());
            if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                return Err(Error::NotAGroup(GroupDefect::NonAssociative));
            }
        }
    }
    Ok(())
}

fn element_order_in(flat: &[u32], n: usize, x: u32) -> usize {
    let mut acc = x;
    let mut ord = 1;
    while acc != 0 {
        acc = flat[acc as usize * n + x as usize];
        ord += 1;
    }
    ord
}

/// Orbit sweep under conjugation by all elements: O(#classes * n) products.
fn conjugacy_classes(flat: &[u32], inv: &[u32], n: usize) -> (Vec<u32>, Vec<Vec<u32>>) {
    let mul = |a: u32, b: u32| flat[a as usize * n + b as usize];
    let mut class_of = vec![u32::MAX; n];
    let mut classes: Vec<Vec<u32>> = Vec::new();
    for x in 0..n as u32 {
        if class_of[x as usize] != u32::MAX {
            continue;
        }
        let k = classes.len() as u32;
        let mut members = Vec::new();
        for g in 0..n as u32 {
            let y = mul(mul(g, x), inv[g as usize]);
            if class_of[y as usize] == u32::MAX {
                class_of[y as usize] = k;
                members.push(y);
            }
        }
        members.sort_unstable();
        classes.push(members);
    }
    (class_of, classes)
}

/// Smallest subset containing the seeds, the identity, and closed under the
/// group law (equivalently, the subgroup generated by the seeds).
pub(crate) fn closure_elements(g: &FiniteGroup, seeds: &[u32]) -> Vec<u32> {
    let mut member = vec![false; g.order()];
    member[0] = true;
    let mut list = vec![0u32];
    let mut head = 0;
    while head < list.len() {
        let x = list[head];
        head += 1;
        for &s in seeds {
            let t = g.mul(x, s);
            if !member[t as usize] {
                member[t as usize] = true;
                list.push(t);
            }
        }
    }
    list.sort_unstable();
    list
}

/// A subgroup given by its sorted element list inside a parent group.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<u32>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {}) {:?}", self.elements.len(), self.elements)
    }
}

impl Subgroup {
    /// Validate and wrap an element list (identity present, closed under
    /// product and inverse, Lagrange).
    pub fn new(parent: Arc<FiniteGroup>, mut elements: Vec<u32>) -> Result<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) || parent.order() % elements.len() != 0 {
            return Err(Error::NotASubgroup);
        }
        if elements.iter().any(|&x| x as usize >= parent.order()) {
            return Err(Error::NotASubgroup);
        }
        let mut member = vec![false; parent.order()];
        for &x in &elements {
            member[x as usize] = true;
        }
        for &x in &elements {
            if !member[parent.inv(x) as usize] {
                return Err(Error::NotASubgroup);
            }
            for &y in &elements {
                if !member[parent.mul(x, y) as usize] {
                    return Err(Error::NotASubgroup);
                }
            }
        }
        Ok(Subgroup { parent, elements })
    }

    /// Wrap a list already known to be a sorted subgroup (closure outputs).
    pub(crate) fn from_sorted_unchecked(parent: Arc<FiniteGroup>, elements: Vec<u32>) -> Subgroup {
        debug_assert_eq!(elements.first(), Some(&0));
        Subgroup { parent, elements }
    }

    pub fn generated_by(parent: &Arc<FiniteGroup>, seeds: &[u32]) -> Subgroup {
        let elements = closure_elements(parent, seeds);
        Subgroup::from_sorted_unchecked(Arc::clone(parent), elements)
    }

    pub fn whole(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup::from_sorted_unchecked(
            Arc::clone(parent),
            (0..parent.order() as u32).collect(),
        )
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> Subgroup {
        Subgroup::from_sorted_unchecked(Arc::clone(parent), vec![0])
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a subgroup always contains the identity
    }

    pub fn index(&self) -> usize {
        self.parent.order() / self.elements.len()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// The conjugate subgroup g H g^-1.
    pub fn conjugate_by(&self, g: u32) -> Subgroup {
        let mut elements: Vec<u32> = self
            .elements
            .iter()
            .map(|&h| self.parent.conj(g, h))
            .collect();
        elements.sort_unstable();
        Subgroup {
            parent: Arc::clone(&self.parent),
            elements,
        }
    }

    pub fn is_normal(&self) -> bool {
        (0..self.parent.order() as u32)
            .all(|g| self.elements.iter().all(|&h| self.contains(self.parent.conj(g, h))))
    }

    /// Realize the subgroup as a group in its own right; local ids follow
    /// the sorted parent-element order, so the identity stays id 0.
    pub fn as_group(&self) -> Result<EmbeddedSubgroup> {
        let h = self.elements.len();
        let mut local = vec![u32::MAX; self.parent.order()];
        for (i, &x) in self.elements.iter().enumerate() {
            local[x as usize] = i as u32;
        }
        let mut flat = vec![0u32; h * h];
        for i in 0..h {
            for j in 0..h {
                let t = self.parent.mul(self.elements[i], self.elements[j]);
                let l = local[t as usize];
                if l == u32::MAX {
                    return Err(Error::NotASubgroup);
                }
                flat[i * h + j] = l;
            }
        }
        let group = FiniteGroup::from_flat_table(flat, h, None)?;
        Ok(EmbeddedSubgroup {
            sub: self.clone(),
            group,
            local,
        })
    }
}

/// A subgroup together with its realization as a standalone group.
pub struct EmbeddedSubgroup {
    pub sub: Subgroup,
    pub group: Arc<FiniteGroup>,
    local: Vec<u32>,
}

impl EmbeddedSubgroup {
    /// Parent element id of local id i.
    #[inline]
    pub fn to_parent(&self, i: u32) -> u32 {
        self.sub.elements()[i as usize]
    }

    /// Local id of a parent element, if it belongs to the subgroup.
    #[inline]
    pub fn to_local(&self, x: u32) -> Option<u32> {
        match self.local[x as usize] {
            u32::MAX => None,
            l => Some(l),
        }
    }
}

/// A homomorphism recorded as a per-element image map.
#[derive(Clone)]
pub struct GroupHom {
    pub source: Arc<FiniteGroup>,
    pub target: Arc<FiniteGroup>,
    pub image: Vec<u32>,
}

impl GroupHom {
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.image[x as usize]
    }

    /// Check image(xy) = image(x)image(y) and image(1) = 1 on all pairs.
    pub fn verify(&self) -> bool {
        if self.image.len() != self.source.order() || self.image[0] != 0 {
            return false;
        }
        let n = self.source.order() as u32;
        (0..n).all(|x| {
            (0..n).all(|y| {
                self.target.mul(self.apply(x), self.apply(y)) == self.apply(self.source.mul(x, y))
            })
        })
    }
}

/// A direct product with its component embeddings; ids are encoded
/// left-fastest: id = left + |G1| * right.
pub struct DirectProduct {
    pub group: Arc<FiniteGroup>,
    pub left: Arc<FiniteGroup>,
    pub right: Arc<FiniteGroup>,
    pub embed_left: GroupHom,
    pub embed_right: GroupHom,
}

impl DirectProduct {
    #[inline]
    pub fn encode(&self, a: u32, b: u32) -> u32 {
        a + (self.left.order() as u32) * b
    }

    #[inline]
    pub fn decode(&self, x: u32) -> (u32, u32) {
        let n1 = self.left.order() as u32;
        (x % n1, x / n1)
    }
}

pub fn direct_product(
    g1: &Arc<FiniteGroup>,
    g2: &Arc<FiniteGroup>,
    order_limit: usize,
) -> Result<DirectProduct> {
    let (n1, n2) = (g1.order(), g2.order());
    let n = n1.checked_mul(n2).ok_or(Error::OrderLimitExceeded {
        limit: order_limit,
        needed: usize::MAX,
    })?;
    if n > order_limit {
        return Err(Error::OrderLimitExceeded {
            limit: order_limit,
            needed: n,
        });
    }
    let mut flat = vec![0u32; n * n];
    for a2 in 0..n2 {
        for a1 in 0..n1 {
            let a = a1 + n1 * a2;
            for b2 in 0..n2 {
                let c2 = g2.mul(a2 as u32, b2 as u32) as usize;
                for b1 in 0..n1 {
                    let b = b1 + n1 * b2;
                    let c1 = g1.mul(a1 as u32, b1 as u32) as usize;
                    flat[a * n + b] = (c1 + n1 * c2) as u32;
                }
            }
        }
    }
    let name = match (g1.name(), g2.name()) {
        (Some(a), Some(b)) => Some(format!("{a} x {b}")),
        _ => None,
    };
    let group = FiniteGroup::from_flat_table(flat, n, name)?;
    let embed_left = GroupHom {
        source: Arc::clone(g1),
        target: Arc::clone(&group),
        image: (0..n1 as u32).collect(),
    };
    let embed_right = GroupHom {
        source: Arc::clone(g2),
        target: Arc::clone(&group),
        image: (0..n2 as u32).map(|b| (n1 as u32) * b).collect(),
    };
    Ok(DirectProduct {
        group,
        left: Arc::clone(g1),
        right: Arc::clone(g2),
        embed_left,
        embed_right,
    })
}

/// Quotient by a normal subgroup: cosets keyed by their minimal element,
/// listed in ascending key order so the identity coset is id 0.
pub fn quotient(g: &Arc<FiniteGroup>, n: &Subgroup) -> Result<(Arc<FiniteGroup>, GroupHom)> {
    if !Arc::ptr_eq(n.parent(), g) && !FiniteGroup::same_group(n.parent(), g) {
        return Err(Error::NotASubgroup);
    }
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let order = g.order();
    let mut coset_of = vec![u32::MAX; order];
    let mut reps: Vec<u32> = Vec::new();
    for x in 0..order as u32 {
        if coset_of[x as usize] != u32::MAX {
            continue;
        }
        let k = reps.len() as u32;
        for &h in n.elements() {
            coset_of[g.mul(x, h) as usize] = k;
        }
        reps.push(x);
    }
    let q = reps.len();
    let mut flat = vec![0u32; q * q];
    for i in 0..q {
        for j in 0..q {
            flat[i * q + j] = coset_of[g.mul(reps[i], reps[j]) as usize];
        }
    }
    let qgroup = FiniteGroup::from_flat_table(flat, q, None)?;
    let proj = GroupHom {
        source: Arc::clone(g),
        target: Arc::clone(&qgroup),
        image: coset_of,
    };
    Ok((qgroup, proj))
}

/// The commutator subgroup [G, G].
pub fn derived_subgroup(g: &Arc<FiniteGroup>) -> Subgroup {
    derived_of_elements(g, None)
}

fn derived_of_elements(g: &Arc<FiniteGroup>, within: Option<&[u32]>) -> Subgroup {
    let all: Vec<u32>;
    let elems = match within {
        Some(e) => e,
        None => {
            all = (0..g.order() as u32).collect();
            &all
        }
    };
    let mut comm = vec![false; g.order()];
    for &x in elems {
        for &y in elems {
            let c = g.mul(g.mul(g.inv(x), g.inv(y)), g.mul(x, y));
            comm[c as usize] = true;
        }
    }
    let gens: Vec<u32> = (0..g.order() as u32).filter(|&x| comm[x as usize]).collect();
    Subgroup::generated_by(g, &gens)
}

/// Derived series, strictly decreasing until stable.
pub fn derived_series(g: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut series = vec![Subgroup::whole(g)];
    loop {
        let last = series.last().unwrap();
        let next = derived_of_elements(g, Some(last.elements()));
        if next.len() == last.len() {
            return series;
        }
        series.push(next);
    }
}

pub fn is_solvable(g: &Arc<FiniteGroup>) -> bool {
    derived_series(g).last().unwrap().len() == 1
}

/// On-disk group description: either a full Cayley table or a permutation
/// generating set.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cayley: Option<Vec<Vec<u32>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub permutation_generators: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<GroupFile> {
        let file: GroupFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidGroupFile(e.to_string()))?;
        match (&file.cayley, &file.permutation_generators) {
            (Some(_), None) | (None, Some(_)) => Ok(file),
            _ => Err(Error::InvalidGroupFile(
                "exactly one of \"cayley\" or \"permutation_generators\" is required".into(),
            )),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("group file serializes")
    }

    pub fn build(&self, order_limit: usize) -> Result<Arc<FiniteGroup>> {
        match (&self.cayley, &self.permutation_generators) {
            (Some(table), None) => FiniteGroup::from_cayley_named(table.clone(), self.name.clone()),
            (None, Some(gens)) => {
                let g = FiniteGroup::from_permutations(gens, order_limit)?;
                Ok(match &self.name {
                    Some(n) => g.with_name(n),
                    None => g,
                })
            }
            _ => Err(Error::InvalidGroupFile(
                "exactly one of \"cayley\" or \"permutation_generators\" is required".into(),
            )),
        }
    }
}
