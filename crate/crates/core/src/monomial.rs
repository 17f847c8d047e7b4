//! Certificate-producing monomiality classifiers.
//!
//! A `SearchContext` caches, for one group, the subgroup classes, their
//! linear characters, and the multiplicity fingerprint of every induced
//! linear character against Irr(G). All witness searches are deterministic
//! scans over that cache: subgroup classes by descending order (ties by
//! canonical key), then linear character index. Reported witnesses are
//! re-verified by replaying induction and inner products from scratch.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chartab::{
    character_table, induce, linear_characters, outer_product, CharacterTable, ClassFunction,
};
use crate::error::{Error, Result};
use crate::group::{DirectProduct, FiniteGroup, Subgroup, DEFAULT_ORDER_LIMIT};
use crate::lattice::{subgroup_classes, SubgroupClass, DEFAULT_CLASS_LIMIT};
use crate::par;
use crate::wreath::{CliffordCase, WreathAnalysis};

#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    pub subgroup_limit: usize,
    pub order_limit: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            subgroup_limit: DEFAULT_CLASS_LIMIT,
            order_limit: DEFAULT_ORDER_LIMIT,
        }
    }
}

/// Certificate that lambda^G = d * chi for a linear lambda on a subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialWitness {
    pub subgroup_key: Vec<u32>,
    pub linear_index: usize,
    pub d: u64,
}

/// Certificate that chi_i is a constituent of lambda^G while chi_j is not.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub pair: (usize, usize),
    pub subgroup_key: Vec<u32>,
    pub linear_index: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessMode {
    Strict,
    Quasi,
}

/// Search state for one group: lattice, linear characters, fingerprints.
pub struct SearchContext {
    group: Arc<FiniteGroup>,
    table: CharacterTable,
    classes: Vec<SubgroupClass>,
    /// fingerprints[c][l][i] = <lambda_l^G, chi_i> for subgroup class c
    fingerprints: Vec<Vec<Vec<u64>>>,
}

fn induced_fingerprints(
    g: &Arc<FiniteGroup>,
    table: &CharacterTable,
    sub: &Subgroup,
) -> Result<Vec<Vec<u64>>> {
    let emb = sub.as_group()?;
    let lin = linear_characters(&emb)?;
    lin.iter()
        .map(|lam| {
            let ind = induce(lam, &emb, g)?;
            table
                .irreducibles()
                .iter()
                .map(|chi| {
                    let ip = crate::chartab::inner_product(&ind, chi)?;
                    if !ip.is_integer() {
                        return Err(Error::NotACharacter);
                    }
                    ip.to_integer().to_u64().ok_or(Error::NotACharacter)
                })
                .collect()
        })
        .collect()
}

impl SearchContext {
    pub fn build(group: &Arc<FiniteGroup>, limits: &SearchLimits) -> Result<SearchContext> {
        let table = character_table(group)?;
        Self::from_table(table, limits)
    }

    /// Build around an already computed character table.
    pub fn from_table(table: CharacterTable, limits: &SearchLimits) -> Result<SearchContext> {
        let group = Arc::clone(table.parent());
        let classes = subgroup_classes(&group, limits.subgroup_limit)?;
        let fingerprints: Vec<Result<Vec<Vec<u64>>>> = par::map_vec(&classes, |class| {
            induced_fingerprints(&group, &table, &class.representative)
        });
        let fingerprints = fingerprints.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(SearchContext {
            group,
            table,
            classes,
            fingerprints,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn table(&self) -> &CharacterTable {
        &self.table
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    /// First (H, lambda) in scan order with lambda^G = d * chi.
    pub fn monomial_witness(&self, chi_index: usize, mode: WitnessMode) -> Option<MonomialWitness> {
        for (c, class) in self.classes.iter().enumerate() {
            for (l, fp) in self.fingerprints[c].iter().enumerate() {
                let d = fp[chi_index];
                if d == 0 || (mode == WitnessMode::Strict && d != 1) {
                    continue;
                }
                if fp
                    .iter()
                    .enumerate()
                    .all(|(i, &m)| i == chi_index || m == 0)
                {
                    return Some(MonomialWitness {
                        subgroup_key: class.canonical_key.clone(),
                        linear_index: l,
                        d,
                    });
                }
            }
        }
        None
    }

    /// First (H, lambda) separating the ordered pair: chi_i a constituent of
    /// lambda^G and chi_j not.
    pub fn separation_witness(
        &self,
        i: usize,
        j: usize,
        normal_only: bool,
    ) -> Option<SeparationWitness> {
        for (c, class) in self.classes.iter().enumerate() {
            if normal_only && !class.is_normal {
                continue;
            }
            for (l, fp) in self.fingerprints[c].iter().enumerate() {
                if fp[i] > 0 && fp[j] == 0 {
                    return Some(SeparationWitness {
                        pair: (i, j),
                        subgroup_key: class.canonical_key.clone(),
                        linear_index: l,
                    });
                }
            }
        }
        None
    }

    /// Classify against all four monomiality notions, with full witness
    /// sets, every reported witness replay-verified.
    pub fn classify(&self) -> Result<Classification> {
        let r = self.table.len();
        let strict: Vec<Option<MonomialWitness>> = (0..r)
            .map(|i| self.monomial_witness(i, WitnessMode::Strict))
            .collect();
        let quasi: Vec<Option<MonomialWitness>> = (0..r)
            .map(|i| self.monomial_witness(i, WitnessMode::Quasi))
            .collect();
        let pairs: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| (0..r).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        let separations: Vec<PairOutcome> = par::map_vec(&pairs, |&(i, j)| PairOutcome {
            pair: (i, j),
            witness: self.separation_witness(i, j, false),
        });
        let normal_separations: Vec<PairOutcome> = par::map_vec(&pairs, |&(i, j)| PairOutcome {
            pair: (i, j),
            witness: self.separation_witness(i, j, true),
        });

        let classification = Classification {
            irreducible_degrees: self.table.degrees().to_vec(),
            monomial: strict.iter().all(Option::is_some),
            quasi_monomial: quasi.iter().all(Option::is_some),
            almost_monomial: separations.iter().all(|o| o.witness.is_some()),
            normally_almost_monomial: normal_separations.iter().all(|o| o.witness.is_some()),
            monomial_witnesses: strict,
            quasi_witnesses: quasi,
            separations,
            normal_separations,
        };
        self.replay_verify(&classification)?;
        debug_assert!(!classification.monomial || classification.quasi_monomial);
        debug_assert!(!classification.quasi_monomial || classification.almost_monomial);
        debug_assert!(!classification.normally_almost_monomial || classification.almost_monomial);
        Ok(classification)
    }

    /// Independently recompute the fingerprint of every (subgroup, lambda)
    /// pair named by a witness and recheck the claimed conditions.
    fn replay_verify(&self, c: &Classification) -> Result<()> {
        let mut used: BTreeSet<(Vec<u32>, usize)> = BTreeSet::new();
        for w in c.monomial_witnesses.iter().chain(&c.quasi_witnesses).flatten() {
            used.insert((w.subgroup_key.clone(), w.linear_index));
        }
        for o in c.separations.iter().chain(&c.normal_separations) {
            if let Some(w) = &o.witness {
                used.insert((w.subgroup_key.clone(), w.linear_index));
            }
        }
        // one fresh recomputation per distinct subgroup, then row lookups
        let keys: Vec<Vec<u32>> = {
            let mut ks: Vec<Vec<u32>> = used.iter().map(|(k, _)| k.clone()).collect();
            ks.dedup();
            ks
        };
        let fresh: Vec<Result<Vec<Vec<u64>>>> = par::map_vec(&keys, |key| {
            let sub = Subgroup::new(Arc::clone(&self.group), key.clone())?;
            induced_fingerprints(&self.group, &self.table, &sub)
        });
        let per_key: std::collections::BTreeMap<Vec<u32>, Vec<Vec<u64>>> = keys
            .into_iter()
            .zip(fresh.into_iter().collect::<Result<Vec<_>>>()?)
            .collect();
        let mut lookup: std::collections::BTreeMap<(Vec<u32>, usize), Vec<u64>> =
            std::collections::BTreeMap::new();
        for (key, l) in used {
            let row = per_key
                .get(&key)
                .and_then(|rows| rows.get(l))
                .ok_or(Error::WitnessReplayFailed)?;
            lookup.insert((key, l), row.clone());
        }

        let r = self.table.len();
        for witnesses in [&c.monomial_witnesses, &c.quasi_witnesses] {
            for (i, w) in witnesses.iter().enumerate() {
                if let Some(w) = w {
                    let fp = lookup
                        .get(&(w.subgroup_key.clone(), w.linear_index))
                        .ok_or(Error::WitnessReplayFailed)?;
                    let ok = (0..r).all(|k| fp[k] == if k == i { w.d } else { 0 });
                    if !ok || w.d == 0 {
                        return Err(Error::WitnessReplayFailed);
                    }
                }
            }
        }
        for o in c.separations.iter().chain(&c.normal_separations) {
            if let Some(w) = &o.witness {
                let fp = lookup
                    .get(&(w.subgroup_key.clone(), w.linear_index))
                    .ok_or(Error::WitnessReplayFailed)?;
                if !(fp[w.pair.0] > 0 && fp[w.pair.1] == 0) {
                    return Err(Error::WitnessReplayFailed);
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub pair: (usize, usize),
    /// None is an exhaustive-NONE marker, not a skipped search.
    pub witness: Option<SeparationWitness>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Classification {
    pub irreducible_degrees: Vec<usize>,
    pub monomial: bool,
    pub quasi_monomial: bool,
    pub almost_monomial: bool,
    pub normally_almost_monomial: bool,
    pub monomial_witnesses: Vec<Option<MonomialWitness>>,
    pub quasi_witnesses: Vec<Option<MonomialWitness>>,
    pub separations: Vec<PairOutcome>,
    pub normal_separations: Vec<PairOutcome>,
}

impl Classification {
    /// Internal consistency of flags and witness sets.
    pub fn validate(&self) -> std::result::Result<(), String> {
        let checks = [
            (
                self.monomial,
                self.monomial_witnesses.iter().all(Option::is_some),
            ),
            (
                self.quasi_monomial,
                self.quasi_witnesses.iter().all(Option::is_some),
            ),
            (
                self.almost_monomial,
                self.separations.iter().all(|o| o.witness.is_some()),
            ),
            (
                self.normally_almost_monomial,
                self.normal_separations.iter().all(|o| o.witness.is_some()),
            ),
        ];
        for (flag, complete) in checks {
            if flag != complete {
                return Err("flag disagrees with witness completeness".into());
            }
        }
        for o in self.separations.iter().chain(&self.normal_separations) {
            if let Some(w) = &o.witness {
                if w.pair != o.pair {
                    return Err("separation witness pair mismatch".into());
                }
            }
        }
        Ok(())
    }
}

/// Replay a monomial witness from scratch: rebuild the subgroup, recompute
/// its linear characters, induce, and compare with d * chi exactly.
pub fn verify_monomial_witness(
    g: &Arc<FiniteGroup>,
    table: &CharacterTable,
    chi_index: usize,
    w: &MonomialWitness,
) -> Result<bool> {
    let sub = Subgroup::new(Arc::clone(g), w.subgroup_key.clone())?;
    let emb = sub.as_group()?;
    let lin = linear_characters(&emb)?;
    let Some(lam) = lin.get(w.linear_index) else {
        return Ok(false);
    };
    let ind = induce(lam, &emb, g)?;
    Ok(ind == table.irreducible(chi_index).scaled(w.d))
}

/// Replay a separation witness from scratch.
pub fn verify_separation_witness(
    g: &Arc<FiniteGroup>,
    table: &CharacterTable,
    w: &SeparationWitness,
) -> Result<bool> {
    let sub = Subgroup::new(Arc::clone(g), w.subgroup_key.clone())?;
    let emb = sub.as_group()?;
    let lin = linear_characters(&emb)?;
    let Some(lam) = lin.get(w.linear_index) else {
        return Ok(false);
    };
    let ind = induce(lam, &emb, g)?;
    let hit = crate::chartab::inner_product(&ind, table.irreducible(w.pair.0))?;
    let miss = crate::chartab::inner_product(&ind, table.irreducible(w.pair.1))?;
    Ok(hit > num_rational::BigRational::zero() && miss.is_zero())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HypothesisKind {
    FactorMonomiality,
    Main,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisCase {
    pub chi_index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monomial_witness: Option<MonomialWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separation: Option<SeparationWitness>,
    pub found: bool,
}

/// Did the implication premise hold, and if so, did the conclusion?
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConclusionCheck {
    pub premise_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion_holds: Option<bool>,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub kind: HypothesisKind,
    pub cases: Vec<HypothesisCase>,
    pub overall: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conclusion: Option<ConclusionCheck>,
}

impl HypothesisReport {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.overall != self.cases.iter().all(|c| c.found) {
            return Err("overall flag disagrees with per-case outcomes".into());
        }
        for c in &self.cases {
            if c.found != (c.monomial_witness.is_some() || c.separation.is_some()) {
                return Err("case found flag disagrees with its witness".into());
            }
        }
        Ok(())
    }
}

/// For every extension-case irreducible of W (chi restricted to B equal to
/// phi x ... x phi), demand that phi is strictly monomial in A. When that
/// holds and A is quasi-monomial, also evaluate whether W is quasi-monomial.
pub fn check_factor_monomiality_hypothesis(
    analysis: &WreathAnalysis,
    ctx_a: &SearchContext,
    ctx_w: impl FnOnce() -> Result<SearchContext>,
) -> Result<HypothesisReport> {
    let mut cases = Vec::new();
    for (chi_index, case) in analysis.cases.iter().enumerate() {
        let CliffordCase::Extension { phi } = case else {
            continue;
        };
        let witness = ctx_a.monomial_witness(*phi, WitnessMode::Strict);
        if let Some(w) = &witness {
            if !verify_monomial_witness(ctx_a.group(), ctx_a.table(), *phi, w)? {
                return Err(Error::WitnessReplayFailed);
            }
        }
        cases.push(HypothesisCase {
            chi_index,
            phi_index: Some(*phi),
            beta_index: None,
            found: witness.is_some(),
            monomial_witness: witness,
            separation: None,
        });
    }
    let overall = cases.iter().all(|c| c.found);
    let mut conclusion = None;
    if overall {
        let a_quasi = (0..ctx_a.table().len())
            .all(|i| ctx_a.monomial_witness(i, WitnessMode::Quasi).is_some());
        if a_quasi {
            let ctx_w = ctx_w()?;
            let w_quasi = (0..ctx_w.table().len())
                .all(|i| ctx_w.monomial_witness(i, WitnessMode::Quasi).is_some());
            conclusion = Some(ConclusionCheck {
                premise_holds: true,
                conclusion_holds: Some(w_quasi),
                consistent: w_quasi,
            });
        } else {
            conclusion = Some(ConclusionCheck {
                premise_holds: false,
                conclusion_holds: None,
                consistent: true,
            });
        }
    }
    Ok(HypothesisReport {
        kind: HypothesisKind::FactorMonomiality,
        cases,
        overall,
        conclusion,
    })
}

/// For every extension-case irreducible chi of W and every nontrivial
/// linear beta of W/B, demand a separation of (chi, beta*chi) by an induced
/// linear character. When that holds and A is almost monomial, also
/// evaluate whether W is almost monomial.
pub fn check_main_hypothesis(
    analysis: &WreathAnalysis,
    ctx_a: &SearchContext,
    ctx_w: &SearchContext,
) -> Result<HypothesisReport> {
    let betas = analysis.wreath.outer_linear_characters();
    let mut cases = Vec::new();
    for (chi_index, case) in analysis.cases.iter().enumerate() {
        if !matches!(case, CliffordCase::Extension { .. }) {
            continue;
        }
        let chi = analysis.table.irreducible(chi_index);
        for (beta_index, beta) in betas.iter().enumerate().skip(1) {
            let beta_chi = beta.pointwise_mul(chi);
            let target = analysis
                .table
                .index_of(&beta_chi)
                .ok_or(Error::DichotomyViolation { chi_index })?;
            let witness = ctx_w.separation_witness(chi_index, target, false);
            if let Some(w) = &witness {
                if !verify_separation_witness(ctx_w.group(), ctx_w.table(), w)? {
                    return Err(Error::WitnessReplayFailed);
                }
            }
            cases.push(HypothesisCase {
                chi_index,
                phi_index: None,
                beta_index: Some(beta_index),
                found: witness.is_some(),
                monomial_witness: None,
                separation: witness,
            });
        }
    }
    let overall = cases.iter().all(|c| c.found);
    let mut conclusion = None;
    if overall {
        let a_almost = ctx_a.classify()?.almost_monomial;
        if a_almost {
            let w_almost = ctx_w.classify()?.almost_monomial;
            conclusion = Some(ConclusionCheck {
                premise_holds: true,
                conclusion_holds: Some(w_almost),
                consistent: w_almost,
            });
        } else {
            conclusion = Some(ConclusionCheck {
                premise_holds: false,
                conclusion_holds: None,
                consistent: true,
            });
        }
    }
    Ok(HypothesisReport {
        kind: HypothesisKind::Main,
        cases,
        overall,
        conclusion,
    })
}

/// The composed witness of the product lemma: from quasi witnesses for
/// chi_1 and chi_2, the pair (H_1 x H_2, lambda_1 x lambda_2) with
/// d = d_1 * d_2.
pub struct ComposedQuasiWitness {
    pub subgroup: Subgroup,
    pub d: u64,
    /// (lambda_1 x lambda_2)^(G1 x G2) computed directly
    pub induced: ClassFunction,
    /// lambda_1^G1 x lambda_2^G2 computed factorwise
    pub factorwise: ClassFunction,
}

impl ComposedQuasiWitness {
    pub fn verifies_against(&self, chi1xchi2: &ClassFunction) -> bool {
        self.induced == self.factorwise && self.induced == chi1xchi2.scaled(self.d)
    }
}

pub fn compose_quasi_witness(
    prod: &DirectProduct,
    ctx1: &SearchContext,
    w1: &MonomialWitness,
    ctx2: &SearchContext,
    w2: &MonomialWitness,
) -> Result<ComposedQuasiWitness> {
    let g1 = ctx1.group();
    let g2 = ctx2.group();
    let sub1 = Subgroup::new(Arc::clone(g1), w1.subgroup_key.clone())?;
    let sub2 = Subgroup::new(Arc::clone(g2), w2.subgroup_key.clone())?;
    let emb1 = sub1.as_group()?;
    let emb2 = sub2.as_group()?;
    let lam1 = linear_characters(&emb1)?
        .into_iter()
        .nth(w1.linear_index)
        .ok_or(Error::WitnessReplayFailed)?;
    let lam2 = linear_characters(&emb2)?
        .into_iter()
        .nth(w2.linear_index)
        .ok_or(Error::WitnessReplayFailed)?;

    let mut elements = Vec::with_capacity(sub1.len() * sub2.len());
    for &h2 in sub2.elements() {
        for &h1 in sub1.elements() {
            elements.push(prod.encode(h1, h2));
        }
    }
    elements.sort_unstable();
    let sub = Subgroup::new(Arc::clone(&prod.group), elements)?;
    let emb = sub.as_group()?;
    let lam = ClassFunction::from_element_values(&emb.group, |local| {
        let (x, y) = prod.decode(emb.to_parent(local));
        let v1 = lam1.value_on_class(emb1.group.class_of(emb1.to_local(x).unwrap()));
        let v2 = lam2.value_on_class(emb2.group.class_of(emb2.to_local(y).unwrap()));
        v1.mul(v2)
    });
    let induced = induce(&lam, &emb, &prod.group)?;
    let ind1 = induce(&lam1, &emb1, g1)?;
    let ind2 = induce(&lam2, &emb2, g2)?;
    let factorwise = outer_product(&ind1, &ind2, prod);
    Ok(ComposedQuasiWitness {
        subgroup: sub,
        d: w1.d * w2.d,
        induced,
        factorwise,
    })
}

/// One survey row of the counterexample search.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurveyEntry {
    pub base: String,
    pub p: usize,
    pub base_almost_monomial: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_almost_monomial: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_overall: Option<bool>,
    /// base almost monomial but the wreath product is not
    pub counterexample: bool,
    /// hypothesis held yet the conclusion failed (would falsify the theorem)
    pub divergence: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Survey {
    pub entries: Vec<SurveyEntry>,
    pub counterexample_found: bool,
}

/// Sweep wreath products of the given bases and primes, looking for an
/// almost monomial base whose wreath product fails to be almost monomial.
/// Per-entry order blowups are recorded, not fatal.
pub fn counterexample_search(
    bases: &[(String, Arc<FiniteGroup>)],
    primes: &[usize],
    limits: &SearchLimits,
) -> Result<Survey> {
    let mut entries = Vec::new();
    for (name, a) in bases {
        let ctx_a = SearchContext::build(a, limits)?;
        let base_almost = ctx_a.classify()?.almost_monomial;
        for &p in primes {
            if !base_almost {
                entries.push(SurveyEntry {
                    base: name.clone(),
                    p,
                    base_almost_monomial: false,
                    skipped: Some("base group is not almost monomial".into()),
                    w_order: None,
                    w_almost_monomial: None,
                    hypothesis_overall: None,
                    counterexample: false,
                    divergence: false,
                });
                continue;
            }
            let wreath = match crate::wreath::WreathGroup::build(a, p, limits.order_limit) {
                Ok(w) => w,
                Err(Error::OrderLimitExceeded { limit, needed }) => {
                    entries.push(SurveyEntry {
                        base: name.clone(),
                        p,
                        base_almost_monomial: true,
                        skipped: Some(format!(
                            "order limit exceeded: needs {needed}, limit {limit}"
                        )),
                        w_order: None,
                        w_almost_monomial: None,
                        hypothesis_overall: None,
                        counterexample: false,
                        divergence: false,
                    });
                    continue;
                }
                Err(e) => return Err(e),
            };
            let analysis = WreathAnalysis::analyze(wreath)?;
            let ctx_w = SearchContext::from_table(analysis.table.clone(), limits)?;
            let w_almost = ctx_w.classify()?.almost_monomial;
            let report = check_main_hypothesis(&analysis, &ctx_a, &ctx_w)?;
            entries.push(SurveyEntry {
                base: name.clone(),
                p,
                base_almost_monomial: true,
                skipped: None,
                w_order: Some(analysis.wreath.group().order()),
                w_almost_monomial: Some(w_almost),
                hypothesis_overall: Some(report.overall),
                counterexample: !w_almost,
                divergence: report.overall && !w_almost,
            });
        }
    }
    let counterexample_found = entries.iter().any(|e| e.counterexample);
    Ok(Survey {
        entries,
        counterexample_found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn ctx(name: &str) -> SearchContext {
        SearchContext::build(&catalog(name).unwrap(), &SearchLimits::default()).unwrap()
    }

    #[test]
    fn abelian_groups_check_every_flag() {
        let c = ctx("C6");
        let cls = c.classify().unwrap();
        assert!(cls.monomial && cls.quasi_monomial);
        assert!(cls.almost_monomial && cls.normally_almost_monomial);
        // every witness is (G, chi, d = 1)
        for w in cls.monomial_witnesses.iter().flatten() {
            assert_eq!(w.subgroup_key.len(), 6);
            assert_eq!(w.d, 1);
        }
        cls.validate().unwrap();
    }

    #[test]
    fn linear_characters_witness_themselves() {
        let c = ctx("S3");
        let w = c.monomial_witness(0, WitnessMode::Strict).unwrap();
        assert_eq!(w.subgroup_key.len(), 6); // H = G
        assert_eq!(w.d, 1);
    }

    #[test]
    fn degree_two_of_s3_is_induced_from_c3() {
        let c = ctx("S3");
        let deg2 = (0..3).find(|&i| c.table().degrees()[i] == 2).unwrap();
        let w = c.monomial_witness(deg2, WitnessMode::Strict).unwrap();
        assert_eq!(w.subgroup_key.len(), 3); // H = the cyclic C3
        assert_eq!(w.d, 1);
        assert!(verify_monomial_witness(c.group(), c.table(), deg2, &w).unwrap());
    }

    #[test]
    fn s3_classifies_fully_monomial() {
        let cls = ctx("S3").classify().unwrap();
        assert!(cls.monomial);
        assert!(cls.quasi_monomial);
        assert!(cls.almost_monomial);
        assert!(cls.normally_almost_monomial);
        cls.validate().unwrap();
    }

    #[test]
    fn sl23_degree_two_characters_have_no_witness() {
        let c = ctx("SL(2,3)");
        for (i, &d) in c.table().degrees().iter().enumerate() {
            if d == 2 {
                assert!(c.monomial_witness(i, WitnessMode::Strict).is_none());
                assert!(c.monomial_witness(i, WitnessMode::Quasi).is_none());
            }
        }
    }

    #[test]
    fn sl23_classification_matches_known_values() {
        let cls = ctx("SL(2,3)").classify().unwrap();
        assert!(!cls.monomial);
        assert!(!cls.quasi_monomial);
        assert!(cls.almost_monomial);
        cls.validate().unwrap();
    }

    #[test]
    fn d10_is_normally_almost_monomial() {
        let cls = ctx("D10").classify().unwrap();
        assert!(cls.monomial);
        assert!(cls.normally_almost_monomial);
    }

    #[test]
    fn separation_scan_is_deterministic() {
        let c = ctx("S4");
        let a = c.classify().unwrap();
        let b = c.classify().unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn composed_witness_on_s3_squared() {
        let c1 = ctx("S3");
        let c2 = ctx("S3");
        let prod = crate::group::direct_product(c1.group(), c2.group(), 100).unwrap();
        let tp = character_table(&prod.group).unwrap();
        let deg2 = (0..3).find(|&i| c1.table().degrees()[i] == 2).unwrap();
        let w1 = c1.monomial_witness(deg2, WitnessMode::Quasi).unwrap();
        let w2 = c2.monomial_witness(0, WitnessMode::Quasi).unwrap();
        let composed = compose_quasi_witness(&prod, &c1, &w1, &c2, &w2).unwrap();
        let chi12 = outer_product(
            c1.table().irreducible(deg2),
            c2.table().irreducible(0),
            &prod,
        );
        assert!(composed.verifies_against(&chi12));
        assert!(tp.index_of(&chi12).is_some());
    }

    #[test]
    fn factor_monomiality_hypothesis_on_small_wreath() {
        // A abelian: every invariant-restriction character comes from a
        // linear (hence monomial) phi, so the hypothesis holds
        let a = catalog("C2").unwrap();
        let w = crate::wreath::WreathGroup::build(&a, 2, 1000).unwrap();
        let analysis = WreathAnalysis::analyze(w).unwrap();
        let limits = SearchLimits::default();
        let ctx_a = SearchContext::build(&a, &limits).unwrap();
        let report = check_factor_monomiality_hypothesis(&analysis, &ctx_a, || {
            SearchContext::from_table(analysis.table.clone(), &limits)
        })
        .unwrap();
        assert!(report.overall);
        assert_eq!(report.cases.len(), 4); // p * fixed labels
        let conclusion = report.conclusion.as_ref().unwrap();
        assert!(conclusion.premise_holds);
        assert_eq!(conclusion.conclusion_holds, Some(true));
        report.validate().unwrap();
    }

    #[test]
    fn main_hypothesis_on_dihedral_of_order_eight() {
        let a = catalog("C2").unwrap();
        let w = crate::wreath::WreathGroup::build(&a, 2, 1000).unwrap();
        let analysis = WreathAnalysis::analyze(w).unwrap();
        let limits = SearchLimits::default();
        let ctx_a = SearchContext::build(&a, &limits).unwrap();
        let ctx_w = SearchContext::from_table(analysis.table.clone(), &limits).unwrap();
        let report = check_main_hypothesis(&analysis, &ctx_a, &ctx_w).unwrap();
        assert!(report.overall);
        // 4 extension characters x 1 nontrivial beta
        assert_eq!(report.cases.len(), 4);
        assert!(report.conclusion.as_ref().unwrap().consistent);
        report.validate().unwrap();
    }

    #[test]
    fn tiny_counterexample_survey_is_clean() {
        let bases: Vec<(String, Arc<FiniteGroup>)> = ["C1", "C2", "C3"]
            .iter()
            .map(|n| (n.to_string(), catalog(n).unwrap()))
            .collect();
        let survey = counterexample_search(&bases, &[2, 3], &SearchLimits::default()).unwrap();
        assert_eq!(survey.entries.len(), 6);
        assert!(!survey.counterexample_found);
        assert!(survey
            .entries
            .iter()
            .all(|e| e.w_almost_monomial == Some(true)));
        assert!(survey.entries.iter().all(|e| !e.divergence));
    }
}
