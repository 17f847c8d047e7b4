//! Wreath products W = A wr C_p with explicit structure: the base subgroup
//! B = A^p, the coordinate-shift generator, the outer-product irreducibles
//! of B, the restriction dichotomy for prime-index normal subgroups, and
//! extension fibers over shift-invariant base characters.

use std::sync::Arc;

use crate::chartab::{
    character_table, constituents, induce, restrict, CharacterTable, ClassFunction,
};
use crate::cyclo::Cyclotomic;
use crate::error::{Error, Result};
use crate::group::{EmbeddedSubgroup, FiniteGroup, Subgroup};
use crate::par;

/// Label for an irreducible of B = A^p: one index into Irr(A) per copy.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BaseLabel(pub Vec<usize>);

impl std::fmt::Display for BaseLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl BaseLabel {
    pub fn is_diagonal(&self) -> bool {
        self.0.iter().all(|&i| i == self.0[0])
    }
}

/// W = A wr C_p as a concrete group: ids are mixed-radix,
/// id = shift * |A|^p + sum_k a_k * |A|^k.
pub struct WreathGroup {
    group: Arc<FiniteGroup>,
    factor: Arc<FiniteGroup>,
    copies: usize,
    base: EmbeddedSubgroup,
    shift_generator: u32,
    factor_table: CharacterTable,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl WreathGroup {
    /// Build the full multiplication table of A wr C_p. The top group acts
    /// by cyclically shifting base coordinates.
    pub fn build(a: &Arc<FiniteGroup>, p: usize, order_limit: usize) -> Result<WreathGroup> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let na = a.order();
        let base_order = na.checked_pow(p as u32).ok_or(Error::OrderLimitExceeded {
            limit: order_limit,
            needed: usize::MAX,
        })?;
        let n = base_order.checked_mul(p).ok_or(Error::OrderLimitExceeded {
            limit: order_limit,
            needed: usize::MAX,
        })?;
        if n > order_limit {
            return Err(Error::OrderLimitExceeded {
                limit: order_limit,
                needed: n,
            });
        }
        // decode every id once, then fill the table
        let mut tuples = vec![0u32; n * p];
        let mut shifts = vec![0u32; n];
        for id in 0..n {
            let mut rest = id;
            for k in 0..p {
                tuples[id * p + k] = (rest % na) as u32;
                rest /= na;
            }
            shifts[id] = rest as u32;
        }
        let rows: Vec<Vec<u32>> = par::map_range(0..n, |x| {
            let tx = &tuples[x * p..(x + 1) * p];
            let i = shifts[x] as usize;
            let mut row = vec![0u32; n];
            let mut c = vec![0u32; p];
            for (y, slot) in row.iter_mut().enumerate() {
                let ty = &tuples[y * p..(y + 1) * p];
                for (k, ck) in c.iter_mut().enumerate() {
                    // sigma^i shifts coordinates: sigma^i(b)_k = b_{(k-i) mod p}
                    *ck = a.mul(tx[k], ty[(k + p - i) % p]);
                }
                let j = (shifts[x] + shifts[y]) as usize % p;
                let mut id = j;
                for ck in c.iter().rev() {
                    id = id * na + *ck as usize;
                }
                *slot = id as u32;
            }
            row
        });
        let mut flat = vec![0u32; n * n];
        for (x, row) in rows.into_iter().enumerate() {
            flat[x * n..(x + 1) * n].copy_from_slice(&row);
        }
        let name = a.name().map(|an| format!("{an} wr C{p}"));
        let group = FiniteGroup::from_flat_table(flat, n, name)?;
        let base = Subgroup::from_sorted_unchecked(
            Arc::clone(&group),
            (0..base_order as u32).collect(),
        )
        .as_group()?;
        let factor_table = character_table(a)?;
        Ok(WreathGroup {
            group,
            factor: Arc::clone(a),
            copies: p,
            base,
            shift_generator: base_order as u32,
            factor_table,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn factor(&self) -> &Arc<FiniteGroup> {
        &self.factor
    }

    pub fn factor_table(&self) -> &CharacterTable {
        &self.factor_table
    }

    pub fn copies(&self) -> usize {
        self.copies
    }

    pub fn base(&self) -> &EmbeddedSubgroup {
        &self.base
    }

    pub fn shift_generator(&self) -> u32 {
        self.shift_generator
    }

    pub fn encode(&self, tuple: &[u32], shift: usize) -> u32 {
        let na = self.factor.order();
        let mut id = shift % self.copies;
        for &t in tuple.iter().rev() {
            id = id * na + t as usize;
        }
        id as u32
    }

    pub fn decode(&self, id: u32) -> (Vec<u32>, usize) {
        let na = self.factor.order();
        let mut rest = id as usize;
        let tuple = (0..self.copies)
            .map(|_| {
                let t = (rest % na) as u32;
                rest /= na;
                t
            })
            .collect();
        (tuple, rest)
    }

    pub fn shift_of(&self, id: u32) -> usize {
        id as usize / self.factor.order().pow(self.copies as u32)
    }

    /// The top cyclic subgroup T = <t>, realized as its own group.
    pub fn top_subgroup(&self) -> Result<EmbeddedSubgroup> {
        let elems: Vec<u32> = (0..self.copies as u32)
            .map(|i| i * self.shift_generator)
            .collect();
        Subgroup::from_sorted_unchecked(Arc::clone(&self.group), elems).as_group()
    }

    /// All |Irr(A)|^p outer-product labels in lexicographic order.
    pub fn base_labels(&self) -> Vec<BaseLabel> {
        let r = self.factor_table.len();
        let p = self.copies;
        let mut out = Vec::with_capacity(r.pow(p as u32));
        let mut cur = vec![0usize; p];
        loop {
            out.push(BaseLabel(cur.clone()));
            let mut k = p;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < r {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// The outer-product irreducible of B named by a label.
    pub fn base_character(&self, label: &BaseLabel) -> ClassFunction {
        let p = self.copies;
        let na = self.factor.order();
        ClassFunction::from_element_values(&self.base.group, |id| {
            let mut rest = id as usize;
            let mut acc = Cyclotomic::one();
            for k in 0..p {
                let a_k = (rest % na) as u32;
                rest /= na;
                acc = acc.mul(self.factor_table.irreducible(label.0[k]).value_at(a_k));
            }
            acc
        })
    }

    /// All base irreducibles with their labels, in label order.
    pub fn base_irreducibles(&self) -> Vec<(BaseLabel, ClassFunction)> {
        let labels = self.base_labels();
        let chars = par::map_vec(&labels, |l| self.base_character(l));
        labels.into_iter().zip(chars).collect()
    }

    /// Cyclically rotate a label by k positions (the action induced by
    /// conjugating with the shift generator, iterated k times).
    pub fn shift_label(&self, label: &BaseLabel, k: usize) -> BaseLabel {
        let p = self.copies;
        BaseLabel((0..p).map(|j| label.0[(j + p - k % p) % p]).collect())
    }

    /// Orbit of a label under all shifts; size 1 or p since p is prime.
    pub fn label_orbit(&self, label: &BaseLabel) -> Vec<BaseLabel> {
        let mut orbit: Vec<BaseLabel> =
            (0..self.copies).map(|k| self.shift_label(label, k)).collect();
        orbit.sort();
        orbit.dedup();
        orbit
    }

    /// The p linear characters of W with kernel containing B: index j sends
    /// an element of shift class s to zeta_p^(j*s). Index 0 is trivial and
    /// indices add mod p under pointwise product.
    pub fn outer_linear_characters(&self) -> Vec<ClassFunction> {
        let p = self.copies as i64;
        (0..p)
            .map(|j| {
                ClassFunction::from_element_values(&self.group, |x| {
                    Cyclotomic::zeta(p as u64, j * self.shift_of(x) as i64)
                })
            })
            .collect()
    }
}

/// Outcome of the prime-index restriction dichotomy for one irreducible.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CliffordCase {
    /// chi = theta^W for a label with a full orbit of p distinct shifts;
    /// chi restricted to B is the sum over the orbit.
    Induced { orbit: Vec<BaseLabel> },
    /// chi restricted to B stays irreducible, hence shift-invariant and of
    /// the form phi x phi x ... x phi.
    Extension { phi: usize },
}

/// A wreath product together with its full character-theoretic census.
pub struct WreathAnalysis {
    pub wreath: WreathGroup,
    pub table: CharacterTable,
    base_irrs: Vec<(BaseLabel, ClassFunction)>,
    pub cases: Vec<CliffordCase>,
}

/// Counts driven by the label census alone, cross-checked against Irr(W).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusSummary {
    pub fixed_labels: usize,
    pub full_orbits: usize,
    pub case_induced: usize,
    pub case_extension: usize,
    pub irr_count: usize,
    /// sum of squared degrees predicted from the label census alone
    pub predicted_degree_square_sum: usize,
}

impl WreathAnalysis {
    pub fn analyze(wreath: WreathGroup) -> Result<WreathAnalysis> {
        let table = character_table(&wreath.group)?;
        let base_irrs = wreath.base_irreducibles();
        let cases: Vec<Result<CliffordCase>> = par::map_range(0..table.len(), |i| {
            classify_irreducible(&wreath, &table, &base_irrs, i)
        });
        let cases = cases.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(WreathAnalysis {
            wreath,
            table,
            base_irrs,
            cases,
        })
    }

    pub fn base_irreducibles(&self) -> &[(BaseLabel, ClassFunction)] {
        &self.base_irrs
    }

    pub fn census(&self) -> CensusSummary {
        let p = self.wreath.copies;
        let labels = self.wreath.base_labels();
        let fixed = labels.iter().filter(|l| l.is_diagonal()).count();
        let full_orbits = (labels.len() - fixed) / p;
        let degrees = self.wreath.factor_table.degrees();
        let label_degree = |l: &BaseLabel| -> usize { l.0.iter().map(|&i| degrees[i]).product() };
        let mut predicted = 0usize;
        let mut seen_orbit_reps = std::collections::HashSet::new();
        for l in &labels {
            if l.is_diagonal() {
                predicted += p * label_degree(l).pow(2);
            } else {
                let rep = self.wreath.label_orbit(l)[0].clone();
                if seen_orbit_reps.insert(rep) {
                    predicted += (p * label_degree(l)).pow(2);
                }
            }
        }
        CensusSummary {
            fixed_labels: fixed,
            full_orbits,
            case_induced: self
                .cases
                .iter()
                .filter(|c| matches!(c, CliffordCase::Induced { .. }))
                .count(),
            case_extension: self
                .cases
                .iter()
                .filter(|c| matches!(c, CliffordCase::Extension { .. }))
                .count(),
            irr_count: self.table.len(),
            predicted_degree_square_sum: predicted,
        }
    }

    /// The p irreducible constituents of theta^W for a shift-invariant
    /// (diagonal) label, as indices into Irr(W).
    pub fn gallagher_fiber(&self, label: &BaseLabel) -> Result<Vec<usize>> {
        if !label.is_diagonal() || label.0.len() != self.wreath.copies {
            return Err(Error::NotInvariant);
        }
        let theta = self.wreath.base_character(label);
        let induced = induce(&theta, &self.wreath.base, &self.wreath.group)?;
        let cons = constituents(&induced, &self.table)?;
        let fiber: Vec<usize> = cons.keys().copied().collect();
        if fiber.len() != self.wreath.copies || cons.values().any(|&m| m != 1) {
            return Err(Error::DichotomyViolation {
                chi_index: *fiber.first().unwrap_or(&0),
            });
        }
        Ok(fiber)
    }
}

fn classify_irreducible(
    wreath: &WreathGroup,
    table: &CharacterTable,
    base_irrs: &[(BaseLabel, ClassFunction)],
    chi_index: usize,
) -> Result<CliffordCase> {
    let violation = || Error::DichotomyViolation { chi_index };
    let chi = table.irreducible(chi_index);
    let chi_b = restrict(chi, &wreath.base)?;
    let mut found: Vec<(usize, u64)> = Vec::new();
    for (li, (_, theta)) in base_irrs.iter().enumerate() {
        let ip = crate::chartab::inner_product(&chi_b, theta).map_err(|_| violation())?;
        if num_traits::Zero::is_zero(&ip) {
            continue;
        }
        if !ip.is_integer() {
            return Err(violation());
        }
        use num_traits::ToPrimitive;
        found.push((li, ip.to_integer().to_u64().ok_or_else(violation)?));
    }
    if found.len() == 1 && found[0].1 == 1 {
        let label = &base_irrs[found[0].0].0;
        if !label.is_diagonal() {
            return Err(violation());
        }
        // single irreducible constituent of multiplicity 1: chi_B = theta
        if chi_b != base_irrs[found[0].0].1 {
            return Err(violation());
        }
        return Ok(CliffordCase::Extension { phi: label.0[0] });
    }
    // otherwise: one full orbit, each label once, and chi = theta^W
    if found.len() != wreath.copies || found.iter().any(|&(_, m)| m != 1) {
        return Err(violation());
    }
    let labels: Vec<BaseLabel> = found
        .iter()
        .map(|&(li, _)| base_irrs[li].0.clone())
        .collect();
    let orbit = wreath.label_orbit(&labels[0]);
    if labels != orbit {
        return Err(violation());
    }
    let theta = &base_irrs[found[0].0].1;
    let induced = induce(theta, &wreath.base, &wreath.group)?;
    if &induced != chi {
        return Err(violation());
    }
    Ok(CliffordCase::Induced { orbit })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;
    use crate::group::DEFAULT_ORDER_LIMIT;

    fn wreath(a: &str, p: usize) -> WreathGroup {
        WreathGroup::build(&catalog(a).unwrap(), p, DEFAULT_ORDER_LIMIT).unwrap()
    }

    #[test]
    fn trivial_base_gives_cyclic_top() {
        let w = wreath("C1", 2);
        assert_eq!(w.group().order(), 2);
        assert_eq!(w.group().class_count(), 2);
    }

    #[test]
    fn c2_wr_c2_is_dihedral_of_order_eight() {
        let w = wreath("C2", 2);
        assert_eq!(w.group().order(), 8);
        assert_eq!(w.group().class_count(), 5);
        assert_eq!(w.group().exponent(), 4);
        // base is normal of index p and the shift has order p
        assert!(w.base().sub.is_normal());
        assert_eq!(w.base().sub.index(), 2);
        assert_eq!(w.group().element_order(w.shift_generator()), 2);
    }

    #[test]
    fn encode_decode_round_trip() {
        let w = wreath("S3", 2);
        for id in 0..w.group().order() as u32 {
            let (tuple, shift) = w.decode(id);
            assert_eq!(w.encode(&tuple, shift), id);
        }
        // conjugating a base tuple by t rotates coordinates
        let g = w.group();
        let t = w.shift_generator();
        let p = w.copies();
        for x in [1u32, 7, 20, 41] {
            let (tup, _) = w.decode(x % g.order() as u32);
            let conj = g.conj(t, w.encode(&tup, 0));
            let (shifted, s) = w.decode(conj);
            assert_eq!(s, 0);
            for k in 0..p {
                assert_eq!(shifted[k], tup[(k + p - 1) % p]);
            }
        }
    }

    #[test]
    fn rejects_composite_copies_and_blowups() {
        let c2 = catalog("C2").unwrap();
        assert!(matches!(
            WreathGroup::build(&c2, 4, DEFAULT_ORDER_LIMIT),
            Err(Error::NotPrime(4))
        ));
        let d10 = catalog("D10").unwrap();
        assert!(matches!(
            WreathGroup::build(&d10, 5, DEFAULT_ORDER_LIMIT),
            Err(Error::OrderLimitExceeded { .. })
        ));
    }

    #[test]
    fn base_label_enumeration() {
        let w = wreath("C2", 2);
        let labels: Vec<BaseLabel> = w.base_labels();
        assert_eq!(
            labels,
            vec![
                BaseLabel(vec![0, 0]),
                BaseLabel(vec![0, 1]),
                BaseLabel(vec![1, 0]),
                BaseLabel(vec![1, 1])
            ]
        );
        // degrees multiply
        let w = wreath("S3", 2);
        let mut degs: Vec<u64> = w
            .base_irreducibles()
            .iter()
            .map(|(_, c)| c.degree().unwrap())
            .collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 1, 1, 2, 2, 2, 2, 4]);
    }

    #[test]
    fn shift_label_orbits() {
        let w = wreath("S3", 3);
        let diag = BaseLabel(vec![2, 2, 2]);
        for k in 0..3 {
            assert_eq!(w.shift_label(&diag, k), diag);
        }
        let w2 = wreath("C2", 2);
        assert_eq!(
            w2.shift_label(&BaseLabel(vec![0, 1]), 1),
            BaseLabel(vec![1, 0])
        );
        // A = S3, p = 3: 27 labels, 3 fixed, 8 orbits of size 3
        let labels = w.base_labels();
        assert_eq!(labels.len(), 27);
        let fixed = labels.iter().filter(|l| l.is_diagonal()).count();
        assert_eq!(fixed, 3);
        let mut orbits = std::collections::HashSet::new();
        for l in &labels {
            if !l.is_diagonal() {
                orbits.insert(w.label_orbit(l));
            }
        }
        assert_eq!(orbits.len(), 8);
        assert!(orbits.iter().all(|o| o.len() == 3));
    }

    #[test]
    fn outer_linear_character_family() {
        let w = wreath("C2", 3);
        let betas = w.outer_linear_characters();
        assert_eq!(betas.len(), 3);
        assert!(betas[0].values().iter().all(Cyclotomic::is_one));
        let t = w.shift_generator();
        assert_eq!(*betas[1].value_at(t), Cyclotomic::zeta(3, 1));
        assert_eq!(*betas[2].value_at(t), Cyclotomic::zeta(3, 2));
        for j in 0..3 {
            for k in 0..3 {
                let prod = betas[j].pointwise_mul(&betas[k]);
                assert_eq!(prod, betas[(j + k) % 3]);
            }
        }
        // they are exactly the inflations of the quotient's characters
        let (q, proj) = crate::group::quotient(w.group(), &w.base().sub).unwrap();
        let qt = character_table(&q).unwrap();
        for qchi in qt.irreducibles() {
            let lifted = crate::chartab::inflate(qchi, &proj);
            assert!(betas.contains(&lifted));
        }
    }

    #[test]
    fn c2_wr_c2_census_and_cases() {
        let analysis = WreathAnalysis::analyze(wreath("C2", 2)).unwrap();
        let census = analysis.census();
        assert_eq!(census.fixed_labels, 2);
        assert_eq!(census.full_orbits, 1);
        assert_eq!(census.case_induced, 1);
        assert_eq!(census.case_extension, 4);
        assert_eq!(census.irr_count, 5);
        assert_eq!(census.predicted_degree_square_sum, 8);

        // the degree-2 irreducible is induced from the orbit {(0,1),(1,0)}
        let deg2 = (0..5).find(|&i| analysis.table.degrees()[i] == 2).unwrap();
        assert_eq!(
            analysis.cases[deg2],
            CliffordCase::Induced {
                orbit: vec![BaseLabel(vec![0, 1]), BaseLabel(vec![1, 0])]
            }
        );
        // the trivial character extends the trivial diagonal label
        let triv = analysis.table.index_of_trivial();
        let triv_phi = analysis.wreath.factor_table().index_of_trivial();
        assert!(matches!(
            analysis.cases[triv],
            CliffordCase::Extension { phi } if phi == triv_phi
        ));
    }

    #[test]
    fn gallagher_fiber_of_trivial_label() {
        let analysis = WreathAnalysis::analyze(wreath("C2", 2)).unwrap();
        let fiber = analysis.gallagher_fiber(&BaseLabel(vec![0, 0])).unwrap();
        assert_eq!(fiber.len(), 2);
        // the fiber consists of degree-1 characters whose sum is theta^W
        let theta = analysis.wreath.base_character(&BaseLabel(vec![0, 0]));
        let induced = induce(&theta, analysis.wreath.base(), analysis.wreath.group()).unwrap();
        let sum = analysis
            .table
            .irreducible(fiber[0])
            .add(analysis.table.irreducible(fiber[1]));
        assert_eq!(sum, induced);
        // non-diagonal labels are rejected
        assert!(matches!(
            analysis.gallagher_fiber(&BaseLabel(vec![0, 1])),
            Err(Error::NotInvariant)
        ));
    }
}
