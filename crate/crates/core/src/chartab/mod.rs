//! Class functions, exact character tables, and the induction/restriction
//! algebra built on them.

mod dixon;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclo::{Accumulator, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::{DirectProduct, EmbeddedSubgroup, FiniteGroup, GroupHom};

/// A function constant on conjugacy classes, stored as one exact value per
/// class in the parent's class order.
#[derive(Clone)]
pub struct ClassFunction {
    parent: Arc<FiniteGroup>,
    values: Vec<Cyclotomic>,
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        FiniteGroup::same_group(&self.parent, &other.parent) && self.values == other.values
    }
}

impl std::fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl ClassFunction {
    pub fn from_class_values(parent: Arc<FiniteGroup>, values: Vec<Cyclotomic>) -> ClassFunction {
        assert_eq!(values.len(), parent.class_count());
        ClassFunction { parent, values }
    }

    /// Build from a per-element rule; debug builds check class constancy.
    pub fn from_element_values(
        parent: &Arc<FiniteGroup>,
        f: impl Fn(u32) -> Cyclotomic,
    ) -> ClassFunction {
        let values: Vec<Cyclotomic> =
            (0..parent.class_count()).map(|k| f(parent.class_rep(k))).collect();
        #[cfg(debug_assertions)]
        for x in 0..parent.order() as u32 {
            debug_assert_eq!(f(x), values[parent.class_of(x)], "not a class function");
        }
        ClassFunction {
            parent: Arc::clone(parent),
            values,
        }
    }

    pub fn trivial(parent: &Arc<FiniteGroup>) -> ClassFunction {
        ClassFunction {
            parent: Arc::clone(parent),
            values: vec![Cyclotomic::one(); parent.class_count()],
        }
    }

    /// |G| at the identity, 0 elsewhere.
    pub fn regular(parent: &Arc<FiniteGroup>) -> ClassFunction {
        let mut values = vec![Cyclotomic::zero(); parent.class_count()];
        values[0] = Cyclotomic::from_integer(parent.order() as i64);
        ClassFunction {
            parent: Arc::clone(parent),
            values,
        }
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn values(&self) -> &[Cyclotomic] {
        &self.values
    }

    pub fn value_on_class(&self, k: usize) -> &Cyclotomic {
        &self.values[k]
    }

    pub fn value_at(&self, x: u32) -> &Cyclotomic {
        &self.values[self.parent.class_of(x)]
    }

    /// Value at the identity, when it is a nonnegative integer.
    pub fn degree(&self) -> Option<u64> {
        self.values[0].as_nonneg_integer()
    }

    pub fn add(&self, other: &ClassFunction) -> ClassFunction {
        assert!(FiniteGroup::same_group(&self.parent, &other.parent));
        ClassFunction {
            parent: Arc::clone(&self.parent),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    /// Pointwise product (the product character when both are characters).
    pub fn pointwise_mul(&self, other: &ClassFunction) -> ClassFunction {
        assert!(FiniteGroup::same_group(&self.parent, &other.parent));
        ClassFunction {
            parent: Arc::clone(&self.parent),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a.mul(b))
                .collect(),
        }
    }

    pub fn scaled(&self, k: u64) -> ClassFunction {
        let s = BigRational::from_integer(BigInt::from(k));
        ClassFunction {
            parent: Arc::clone(&self.parent),
            values: self.values.iter().map(|v| v.scale(&s)).collect(),
        }
    }
}

/// The exact table of irreducible characters, in a deterministic order
/// (degree, then lexicographic numeric embedding of the value rows).
#[derive(Clone)]
pub struct CharacterTable {
    parent: Arc<FiniteGroup>,
    irreducibles: Vec<ClassFunction>,
    degrees: Vec<usize>,
}

impl CharacterTable {
    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn irreducibles(&self) -> &[ClassFunction] {
        &self.irreducibles
    }

    pub fn irreducible(&self, i: usize) -> &ClassFunction {
        &self.irreducibles[i]
    }

    pub fn len(&self) -> usize {
        self.irreducibles.len()
    }

    pub fn is_empty(&self) -> bool {
        false // every group has the trivial character
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Index of an exact row match, if any.
    pub fn index_of(&self, cf: &ClassFunction) -> Option<usize> {
        self.irreducibles.iter().position(|chi| chi == cf)
    }

    pub fn index_of_trivial(&self) -> usize {
        self.irreducibles
            .iter()
            .position(|chi| chi.values.iter().all(Cyclotomic::is_one))
            .expect("trivial character present")
    }
}

/// Compute the full character table of a finite group.
pub fn character_table(g: &Arc<FiniteGroup>) -> Result<CharacterTable> {
    dixon::character_table(g)
}

/// Normalized inner product (1/|G|) sum_g a(g) conj(b(g)), computed
/// classwise with class sizes. Exact.
pub fn inner_product(a: &ClassFunction, b: &ClassFunction) -> Result<BigRational> {
    if !FiniteGroup::same_group(a.parent(), b.parent()) {
        return Err(Error::ParentMismatch);
    }
    let g = a.parent();
    let mut acc = Accumulator::new();
    for k in 0..g.class_count() {
        let size = BigRational::from_integer(BigInt::from(g.class_sizes()[k]));
        acc.add_mul_conj(&a.values[k], &b.values[k], &size);
    }
    let scale = BigRational::new(BigInt::one(), BigInt::from(g.order()));
    acc.finish()
        .scale(&scale)
        .as_rational()
        .ok_or(Error::IrrationalInnerProduct)
}

/// Decompose a character into irreducible multiplicities. Errors with
/// `NotACharacter` if any inner product fails to be a nonnegative integer.
pub fn constituents(
    chi: &ClassFunction,
    table: &CharacterTable,
) -> Result<BTreeMap<usize, u64>> {
    if !FiniteGroup::same_group(chi.parent(), table.parent()) {
        return Err(Error::ParentMismatch);
    }
    let mut out = BTreeMap::new();
    for (i, irr) in table.irreducibles.iter().enumerate() {
        let ip = match inner_product(chi, irr) {
            Ok(ip) => ip,
            Err(Error::IrrationalInnerProduct) => return Err(Error::NotACharacter),
            Err(e) => return Err(e),
        };
        if ip.is_zero() {
            continue;
        }
        if !ip.is_integer() || ip < BigRational::zero() {
            return Err(Error::NotACharacter);
        }
        let m = ip.to_integer();
        use num_traits::ToPrimitive;
        out.insert(i, m.to_u64().ok_or(Error::NotACharacter)?);
    }
    Ok(out)
}

/// Induce a class function on an embedded subgroup up to the parent. On the
/// class of g this is (1/|H|) sum_{x in G} theta0(x g x^-1), which collapses
/// classwise to |G| / (|H| |C|) * sum over the class-intersection with H.
pub fn induce(
    theta: &ClassFunction,
    emb: &EmbeddedSubgroup,
    g: &Arc<FiniteGroup>,
) -> Result<ClassFunction> {
    if !FiniteGroup::same_group(emb.sub.parent(), g) {
        return Err(Error::NotASubgroup);
    }
    if !FiniteGroup::same_group(theta.parent(), &emb.group) {
        return Err(Error::ParentMismatch);
    }
    let h = emb.sub.len();
    let mut sums: Vec<Accumulator> = (0..g.class_count()).map(|_| Accumulator::new()).collect();
    for local in 0..h as u32 {
        let k = g.class_of(emb.to_parent(local));
        sums[k].add(theta.value_on_class(emb.group.class_of(local)));
    }
    let values: Vec<Cyclotomic> = sums
        .into_iter()
        .enumerate()
        .map(|(k, acc)| {
            let scale = BigRational::new(
                BigInt::from(g.order()),
                BigInt::from(h * g.class_sizes()[k]),
            );
            acc.finish().scale(&scale)
        })
        .collect();
    Ok(ClassFunction {
        parent: Arc::clone(g),
        values,
    })
}

/// Restrict a class function on the parent to an embedded subgroup, fusing
/// classes by element membership.
pub fn restrict(chi: &ClassFunction, emb: &EmbeddedSubgroup) -> Result<ClassFunction> {
    if !FiniteGroup::same_group(chi.parent(), emb.sub.parent()) {
        return Err(Error::NotASubgroup);
    }
    let values: Vec<Cyclotomic> = (0..emb.group.class_count())
        .map(|k| {
            let parent_el = emb.to_parent(emb.group.class_rep(k));
            chi.value_at(parent_el).clone()
        })
        .collect();
    Ok(ClassFunction {
        parent: Arc::clone(&emb.group),
        values,
    })
}

/// Pull a class function on a quotient back along the projection.
pub fn inflate(chibar: &ClassFunction, proj: &GroupHom) -> ClassFunction {
    assert!(FiniteGroup::same_group(chibar.parent(), &proj.target));
    let values: Vec<Cyclotomic> = (0..proj.source.class_count())
        .map(|k| {
            let rep = proj.source.class_rep(k);
            chibar.value_at(proj.apply(rep)).clone()
        })
        .collect();
    ClassFunction {
        parent: Arc::clone(&proj.source),
        values,
    }
}

/// Outer product on a direct product: value at the class of (x, y) is
/// c1(x) * c2(y). Maps Irr x Irr onto Irr of the product.
pub fn outer_product(
    c1: &ClassFunction,
    c2: &ClassFunction,
    prod: &DirectProduct,
) -> ClassFunction {
    assert!(FiniteGroup::same_group(c1.parent(), &prod.left));
    assert!(FiniteGroup::same_group(c2.parent(), &prod.right));
    let values: Vec<Cyclotomic> = (0..prod.group.class_count())
        .map(|k| {
            let (x, y) = prod.decode(prod.group.class_rep(k));
            c1.value_at(x).mul(c2.value_at(y))
        })
        .collect();
    ClassFunction {
        parent: Arc::clone(&prod.group),
        values,
    }
}

/// The linear characters of an embedded subgroup: the inflations of the full
/// character table of H/[H,H], all of whose irreducibles are linear.
pub fn linear_characters(emb: &EmbeddedSubgroup) -> Result<Vec<ClassFunction>> {
    let h = &emb.group;
    let derived = crate::group::derived_subgroup(h);
    let (q, proj) = crate::group::quotient(h, &derived)?;
    let table = character_table(&q)?;
    debug_assert!(table.degrees().iter().all(|&d| d == 1));
    Ok(table
        .irreducibles()
        .iter()
        .map(|lam| inflate(lam, &proj))
        .collect())
}
