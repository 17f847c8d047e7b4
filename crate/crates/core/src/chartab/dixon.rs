//! Exact character tables by simultaneous eigenspace splitting of the
//! class-multiplication matrices over a suitable prime field, followed by a
//! discrete-Fourier lift of the eigenvalue data back to cyclotomic values.
//!
//! The prime p is the smallest with p = 1 (mod exponent) and p > 2*sqrt(|G|):
//! the class algebra then splits completely over F_p and degrees and root-of-
//! unity multiplicities are small enough to be read off from their residues.

use std::sync::Arc;

use num_rational::BigRational;

use crate::cyclo::{Accumulator, Cyclotomic};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;

use super::{ClassFunction, CharacterTable};

#[derive(Clone, Copy)]
struct Fp {
    p: u64,
}

impl Fp {
    #[inline]
    fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }
    #[inline]
    fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }
    #[inline]
    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
    fn inv(self, a: u64) -> u64 {
        self.pow(a, self.p - 2)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn admissible_primes(exponent: u64, order: u64) -> impl Iterator<Item = u64> {
    let bound = (2.0 * (order as f64).sqrt()).floor() as u64;
    (1u64..)
        .map(move |k| k * exponent + 1)
        .filter(move |&p| p > bound && is_prime(p))
}

fn primitive_root(fp: Fp) -> u64 {
    let mut factors = Vec::new();
    let mut m = fp.p - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        factors.push(m);
    }
    (2..fp.p)
        .find(|&w| factors.iter().all(|&q| fp.pow(w, (fp.p - 1) / q) != 1))
        .expect("prime field has a primitive root")
}

/// Class-multiplication matrix M_i with (M_i)[j][k] = a_{ijk}, the number of
/// ways to write a fixed element of class k as (class i) * (class j).
fn class_matrix(g: &FiniteGroup, i: usize) -> Vec<u64> {
    let r = g.class_count();
    let n = g.order() as u32;
    let mut counts = vec![0u64; r * r];
    for &x in g.class_members(i) {
        for y in 0..n {
            let j = g.class_of(y);
            let k = g.class_of(g.mul(x, y));
            counts[j * r + k] += 1;
        }
    }
    for j in 0..r {
        for k in 0..r {
            let sz = g.class_sizes()[k] as u64;
            debug_assert_eq!(counts[j * r + k] % sz, 0);
            counts[j * r + k] /= sz;
        }
    }
    counts
}

/// A subspace in reduced form: vecs[t] is 1 at pivots[t] and 0 at every
/// other pivot coordinate.
struct Block {
    vecs: Vec<Vec<u64>>,
    pivots: Vec<usize>,
}

/// Row-reduce a list of independent vectors into reduced echelon form.
fn echelonize(fp: Fp, mut rows: Vec<Vec<u64>>) -> Block {
    let dim = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut next = 0usize;
    for col in 0..dim {
        let Some(r) = (next..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(next, r);
        let inv = fp.inv(rows[next][col]);
        for v in rows[next].iter_mut() {
            *v = fp.mul(*v, inv);
        }
        for r in 0..rows.len() {
            if r != next && rows[r][col] != 0 {
                let f = rows[r][col];
                for c in 0..dim {
                    let t = fp.mul(f, rows[next][c]);
                    rows[r][c] = fp.sub(rows[r][c], t);
                }
            }
        }
        pivots.push(col);
        next += 1;
        if next == rows.len() {
            break;
        }
    }
    assert_eq!(pivots.len(), rows.len(), "independent vectors expected");
    Block { vecs: rows, pivots }
}

/// Nullspace basis of a square matrix over F_p.
fn nullspace(fp: Fp, mut a: Vec<Vec<u64>>) -> Vec<Vec<u64>> {
    let d = a.len();
    let mut pivot_of_col = vec![usize::MAX; d];
    let mut next = 0usize;
    for col in 0..d {
        let Some(r) = (next..d).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(next, r);
        let inv = fp.inv(a[next][col]);
        for v in a[next].iter_mut() {
            *v = fp.mul(*v, inv);
        }
        for r in 0..d {
            if r != next && a[r][col] != 0 {
                let f = a[r][col];
                for c in 0..d {
                    let t = fp.mul(f, a[next][c]);
                    a[r][c] = fp.sub(a[r][c], t);
                }
            }
        }
        pivot_of_col[col] = next;
        next += 1;
    }
    let mut basis = Vec::new();
    for free in 0..d {
        if pivot_of_col[free] != usize::MAX {
            continue;
        }
        let mut v = vec![0u64; d];
        v[free] = 1;
        for col in 0..d {
            let r = pivot_of_col[col];
            if r != usize::MAX {
                v[col] = fp.sub(0, a[r][free]);
            }
        }
        basis.push(v);
    }
    basis
}

/// Split every block into common eigenspaces of the class matrices; returns
/// one vector per irreducible or None if some block refuses to split.
fn split_to_lines(fp: Fp, g: &FiniteGroup) -> Option<Vec<Vec<u64>>> {
    let r = g.class_count();
    let mut blocks = vec![echelonize(
        fp,
        (0..r)
            .map(|i| {
                let mut v = vec![0u64; r];
                v[i] = 1;
                v
            })
            .collect(),
    )];
    for i in 1..r {
        if blocks.iter().all(|b| b.vecs.len() == 1) {
            break;
        }
        let m: Vec<u64> = class_matrix(g, i).iter().map(|&x| x % fp.p).collect();
        let apply = |v: &[u64]| -> Vec<u64> {
            (0..r)
                .map(|row| {
                    let mut acc = 0u64;
                    for (col, &x) in v.iter().enumerate() {
                        if x != 0 {
                            acc = fp.add(acc, fp.mul(m[row * r + col], x));
                        }
                    }
                    acc
                })
                .collect()
        };
        let mut next_blocks = Vec::new();
        for block in blocks {
            let d = block.vecs.len();
            if d == 1 {
                next_blocks.push(block);
                continue;
            }
            // restricted action: coefficients read off at the pivot rows
            let images: Vec<Vec<u64>> = block.vecs.iter().map(|v| apply(v)).collect();
            let action: Vec<Vec<u64>> = (0..d)
                .map(|t| (0..d).map(|j| images[j][block.pivots[t]]).collect())
                .collect();
            let mut found = 0usize;
            let mut lambda = 0u64;
            while lambda < fp.p && found < d {
                let mut shifted = action.clone();
                for (t, row) in shifted.iter_mut().enumerate() {
                    row[t] = fp.sub(row[t], lambda);
                }
                let null = nullspace(fp, shifted);
                if !null.is_empty() {
                    found += null.len();
                    let vecs: Vec<Vec<u64>> = null
                        .iter()
                        .map(|coeffs| {
                            let mut v = vec![0u64; r];
                            for (j, &c) in coeffs.iter().enumerate() {
                                if c != 0 {
                                    for (slot, &b) in v.iter_mut().zip(&block.vecs[j]) {
                                        *slot = fp.add(*slot, fp.mul(c, b));
                                    }
                                }
                            }
                            v
                        })
                        .collect();
                    next_blocks.push(echelonize(fp, vecs));
                }
                lambda += 1;
            }
            if found != d {
                return None; // not diagonalizable mod p: bad prime
            }
        }
        blocks = next_blocks;
    }
    if blocks.iter().any(|b| b.vecs.len() != 1) {
        return None;
    }
    Some(blocks.into_iter().map(|b| b.vecs.into_iter().next().unwrap()).collect())
}

struct ModularCharacter {
    degree: u64,
    values: Vec<u64>, // per class, mod p
}

fn modular_characters(fp: Fp, g: &FiniteGroup) -> Option<Vec<ModularCharacter>> {
    let r = g.class_count();
    let n = g.order() as u64;
    let lines = split_to_lines(fp, g)?;
    let mut out = Vec::with_capacity(r);
    for w in lines {
        if w[0] == 0 {
            return None; // central character must be 1 on the identity class
        }
        let inv0 = fp.inv(w[0]);
        let omega: Vec<u64> = w.iter().map(|&x| fp.mul(x, inv0)).collect();
        // sum_k omega_k * omega_{k'} / |C_k| = |G| / d^2
        let mut s = 0u64;
        for k in 0..r {
            let kk = g.inverse_class(k);
            let t = fp.mul(omega[k], omega[kk]);
            s = fp.add(s, fp.mul(t, fp.inv(g.class_sizes()[k] as u64 % fp.p)));
        }
        if s == 0 {
            return None;
        }
        let dsq = fp.mul(n % fp.p, fp.inv(s));
        let degree = (1..fp.p).find(|&d| fp.mul(d, d) == dsq)?;
        if degree * degree > n {
            return None;
        }
        let values: Vec<u64> = (0..r)
            .map(|k| {
                let inv_size = fp.inv(g.class_sizes()[k] as u64 % fp.p);
                fp.mul(degree, fp.mul(omega[k], inv_size))
            })
            .collect();
        out.push(ModularCharacter { degree, values });
    }
    Some(out)
}

/// Lift one modular character to exact cyclotomic values: on a class with
/// representative of order m, the value is a sum of m-th roots of unity
/// whose multiplicities are recovered by an inverse DFT mod p.
fn lift_character(
    fp: Fp,
    g: &FiniteGroup,
    z: u64, // fixed element of order = exponent in F_p*
    chi: &ModularCharacter,
) -> Option<Vec<Cyclotomic>> {
    let e = g.exponent() as u64;
    let r = g.class_count();
    let mut values = Vec::with_capacity(r);
    for k in 0..r {
        let rep = g.class_rep(k);
        let m = g.element_order(rep) as u64;
        let zm = fp.pow(z, e / m);
        let zm_inv = fp.inv(zm);
        let m_inv = fp.inv(m % fp.p);
        let chi_on_powers: Vec<u64> = (0..m)
            .map(|j| chi.values[g.class_of(g.power(rep, j as usize))])
            .collect();
        let mut acc = Accumulator::new();
        for t in 0..m {
            let mut c = 0u64;
            for (j, &v) in chi_on_powers.iter().enumerate() {
                c = fp.add(c, fp.mul(v, fp.pow(zm_inv, (j as u64 * t) % m)));
            }
            c = fp.mul(c, m_inv);
            if c == 0 {
                continue;
            }
            if c > chi.degree {
                return None; // multiplicities are bounded by the degree
            }
            acc.add_scaled(
                &Cyclotomic::zeta(m, t as i64),
                &BigRational::from_integer(c.into()),
            );
        }
        values.push(acc.finish());
    }
    if values[0] != Cyclotomic::from_integer(chi.degree as i64) {
        return None;
    }
    Some(values)
}

pub(crate) fn character_table(g: &Arc<FiniteGroup>) -> Result<CharacterTable> {
    let r = g.class_count();
    let n = g.order() as u64;
    let mut tried = Vec::new();
    'primes: for p in admissible_primes(g.exponent() as u64, n).take(5) {
        tried.push(p);
        let fp = Fp { p };
        let Some(modular) = modular_characters(fp, g) else {
            continue;
        };
        let sum_sq: u64 = modular.iter().map(|c| c.degree * c.degree).sum();
        if sum_sq != n {
            continue;
        }
        let z = fp.pow(primitive_root(fp), (p - 1) / (g.exponent() as u64));
        let mut rows: Vec<(usize, Vec<Cyclotomic>)> = Vec::with_capacity(r);
        for chi in &modular {
            match lift_character(fp, g, z, chi) {
                Some(values) => rows.push((chi.degree as usize, values)),
                None => continue 'primes,
            }
        }
        // row norms must come out exactly 1
        for (_, values) in &rows {
            let cf = ClassFunction::from_class_values(Arc::clone(g), values.clone());
            match super::inner_product(&cf, &cf) {
                Ok(ip) if ip == BigRational::from_integer(1.into()) => {}
                _ => continue 'primes,
            }
        }
        // deterministic order: by degree, then by numeric embedding
        let mut keyed: Vec<(usize, Vec<(f64, f64)>, Vec<Cyclotomic>)> = rows
            .into_iter()
            .map(|(d, values)| {
                let key: Vec<(f64, f64)> = values
                    .iter()
                    .map(|v| {
                        let c = v.to_complex();
                        (c.re, c.im)
                    })
                    .collect();
                (d, key, values)
            })
            .collect();
        keyed.sort_by(|a, b| {
            a.0.cmp(&b.0).then_with(|| {
                for (x, y) in a.1.iter().zip(&b.1) {
                    let o = x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1));
                    if o != std::cmp::Ordering::Equal {
                        return o;
                    }
                }
                std::cmp::Ordering::Equal
            })
        });
        let degrees: Vec<usize> = keyed.iter().map(|k| k.0).collect();
        let irreducibles: Vec<ClassFunction> = keyed
            .into_iter()
            .map(|(_, _, values)| ClassFunction::from_class_values(Arc::clone(g), values))
            .collect();
        return Ok(CharacterTable {
            parent: Arc::clone(g),
            irreducibles,
            degrees,
        });
    }
    Err(Error::InternalSplitFailure { tried })
}
