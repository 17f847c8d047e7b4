//! Subgroup enumeration up to conjugacy.
//!
//! Layered closure: start from the cyclic subgroups, then repeatedly extend
//! every newly found class representative H by one outside element to
//! <H, g>, dedup by canonical key, and iterate to a fixpoint. Every subgroup
//! is reachable by adjoining generators one at a time, and replacing a
//! subgroup by a conjugate replaces its extensions by conjugates, so the
//! sweep is complete up to conjugacy.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{closure_elements, FiniteGroup, Subgroup};
use crate::par;

/// Default cap on the number of conjugacy classes of subgroups.
pub const DEFAULT_CLASS_LIMIT: usize = 100_000;

/// One conjugacy class of subgroups.
#[derive(Debug)]
pub struct SubgroupClass {
    /// The canonical representative: its element list equals `canonical_key`.
    pub representative: Subgroup,
    /// Lexicographically minimal sorted element list over all conjugates.
    pub canonical_key: Vec<u32>,
    pub order: usize,
    pub is_normal: bool,
    /// Generating set of the representative, kept small for cheap extension.
    gens: Vec<u32>,
}

impl SubgroupClass {
    pub fn generators(&self) -> &[u32] {
        &self.gens
    }
}

/// Smallest subgroup containing the seeds.
pub fn closure(g: &Arc<FiniteGroup>, seeds: &[u32]) -> Subgroup {
    Subgroup::generated_by(g, seeds)
}

/// Canonical key of a subgroup: minimize the sorted element list over all
/// conjugates. Returns (key, conjugator achieving it, whether H is normal).
fn canonical_key_of(g: &FiniteGroup, elems: &[u32]) -> (Vec<u32>, u32, bool) {
    let mut best = elems.to_vec();
    let mut best_g = 0u32;
    let mut normal = true;
    let mut buf = vec![0u32; elems.len()];
    for x in 1..g.order() as u32 {
        for (slot, &h) in buf.iter_mut().zip(elems) {
            *slot = g.conj(x, h);
        }
        buf.sort_unstable();
        if buf[..] != *elems {
            normal = false;
        }
        if buf[..] < best[..] {
            best.copy_from_slice(&buf);
            best_g = x;
        }
    }
    (best, best_g, normal)
}

/// All subgroups of `g` up to conjugacy, including the trivial subgroup and
/// `g` itself, sorted by descending order then ascending canonical key.
pub fn subgroup_classes(g: &Arc<FiniteGroup>, class_limit: usize) -> Result<Vec<SubgroupClass>> {
    let n = g.order() as u32;
    let mut seen_sets: HashSet<Vec<u32>> = HashSet::new();
    let mut known_keys: HashSet<Vec<u32>> = HashSet::new();
    let mut classes: Vec<SubgroupClass> = Vec::new();

    // set-dedup sequentially, canonicalize the novel sets in parallel, then
    // key-dedup sequentially in candidate order (deterministic either way)
    let admit_layer = |candidates: Vec<(Vec<u32>, Vec<u32>)>,
                           seen: &mut HashSet<Vec<u32>>,
                           keys: &mut HashSet<Vec<u32>>,
                           classes: &mut Vec<SubgroupClass>|
     -> Result<Vec<usize>> {
        let novel: Vec<(Vec<u32>, Vec<u32>)> = candidates
            .into_iter()
            .filter(|(elems, _)| seen.insert(elems.clone()))
            .collect();
        let canonical = par::map_vec(&novel, |(elems, _)| canonical_key_of(g, elems));
        let mut fresh = Vec::new();
        for ((_, gens), (key, conjugator, normal)) in novel.into_iter().zip(canonical) {
            if !keys.insert(key.clone()) {
                continue;
            }
            if classes.len() >= class_limit {
                return Err(Error::SearchBudgetExceeded { limit: class_limit });
            }
            let rep_gens: Vec<u32> = gens.iter().map(|&u| g.conj(conjugator, u)).collect();
            let order = key.len();
            classes.push(SubgroupClass {
                representative: Subgroup::from_sorted_unchecked(Arc::clone(g), key.clone()),
                canonical_key: key,
                order,
                is_normal: normal,
                gens: rep_gens,
            });
            fresh.push(classes.len() - 1);
        }
        Ok(fresh)
    };

    // layer 0: trivial subgroup and all cyclic subgroups
    let mut layer0: Vec<(Vec<u32>, Vec<u32>)> = vec![(vec![0], vec![])];
    layer0.extend(par::map_range(1..n as usize, |x| {
        let x = x as u32;
        (closure_elements(g, &[x]), vec![x])
    }));
    let mut frontier = admit_layer(layer0, &mut seen_sets, &mut known_keys, &mut classes)?;

    // layered <H, g> extension to fixpoint
    while !frontier.is_empty() {
        let mut tasks: Vec<(Vec<u32>, u32)> = Vec::new();
        for &ci in &frontier {
            let class = &classes[ci];
            if class.order == g.order() {
                continue;
            }
            for x in 1..n {
                if !class.representative.contains(x) {
                    tasks.push((class.gens.clone(), x));
                }
            }
        }
        let candidates: Vec<(Vec<u32>, Vec<u32>)> = par::map_vec(&tasks, |(gens, x)| {
            let mut seeds = gens.clone();
            seeds.push(*x);
            (closure_elements(g, &seeds), seeds)
        });
        frontier = admit_layer(candidates, &mut seen_sets, &mut known_keys, &mut classes)?;
    }

    classes.sort_by(|a, b| {
        b.order
            .cmp(&a.order)
            .then_with(|| a.canonical_key.cmp(&b.canonical_key))
    });
    Ok(classes)
}

/// Exactly the conjugation-invariant subgroups.
pub fn normal_subgroups(g: &Arc<FiniteGroup>, class_limit: usize) -> Result<Vec<Subgroup>> {
    Ok(subgroup_classes(g, class_limit)?
        .into_iter()
        .filter(|c| c.is_normal)
        .map(|c| c.representative)
        .collect())
}
