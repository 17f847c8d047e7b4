//! Independent verification oracles.
//!
//! Everything here recomputes results of the main engine by a different,
//! deliberately naive route: literal evaluation of the induction sum,
//! exhaustive subgroup enumeration without conjugacy dedup, and a
//! floating-point simultaneous eigendecomposition of the class algebra.
//! The integration tests pin the fast paths against these.

use std::collections::HashSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

use crate::chartab::ClassFunction;
use crate::cyclo::Accumulator;
use crate::error::Result;
use crate::group::{closure_elements, EmbeddedSubgroup, FiniteGroup};

/// Literal induced-character formula: value at g is
/// (1/|H|) * sum over x in G of theta0(x g x^-1).
pub fn induce_bruteforce(
    theta: &ClassFunction,
    emb: &EmbeddedSubgroup,
    g: &Arc<FiniteGroup>,
) -> Result<ClassFunction> {
    let scale = BigRational::new(BigInt::from(1), BigInt::from(emb.sub.len()));
    let values = (0..g.class_count())
        .map(|k| {
            let rep = g.class_rep(k);
            let mut acc = Accumulator::new();
            for x in 0..g.order() as u32 {
                let conj = g.conj(x, rep);
                if let Some(local) = emb.to_local(conj) {
                    acc.add(theta.value_on_class(emb.group.class_of(local)));
                }
            }
            acc.finish().scale(&scale)
        })
        .collect();
    Ok(ClassFunction::from_class_values(Arc::clone(g), values))
}

/// Every subgroup of g, as sorted element lists, found by saturating
/// one-generator extensions over all subgroups (no conjugacy dedup).
pub fn all_subgroups(g: &Arc<FiniteGroup>) -> Vec<Vec<u32>> {
    let n = g.order() as u32;
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut frontier: Vec<Vec<u32>> = Vec::new();
    let admit = |elems: Vec<u32>, seen: &mut HashSet<Vec<u32>>, frontier: &mut Vec<Vec<u32>>| {
        if seen.insert(elems.clone()) {
            frontier.push(elems);
        }
    };
    admit(vec![0], &mut seen, &mut frontier);
    for x in 1..n {
        admit(closure_elements(g, &[x]), &mut seen, &mut frontier);
    }
    while let Some(current) = frontier.pop() {
        if current.len() == g.order() {
            continue;
        }
        for x in 1..n {
            if current.binary_search(&x).is_err() {
                let mut seeds = current.clone();
                seeds.push(x);
                admit(closure_elements(g, &seeds), &mut seen, &mut frontier);
            }
        }
    }
    let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
    out.sort();
    out
}

/// Floating-point character table via simultaneous eigendecomposition of
/// the class-multiplication matrices: rescale them to a commuting normal
/// family, take a random Hermitian combination, and Jacobi-diagonalize.
/// Returns one row per irreducible, in no particular order.
pub fn float_character_table(g: &Arc<FiniteGroup>) -> Vec<Vec<Complex64>> {
    let r = g.class_count();
    let n = g.order();
    let sizes: Vec<f64> = g.class_sizes().iter().map(|&s| s as f64).collect();

    // class matrices, recomputed here from scratch
    let mut matrices: Vec<Vec<f64>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut counts = vec![0f64; r * r];
        for &x in g.class_members(i) {
            for y in 0..n as u32 {
                let j = g.class_of(y);
                let k = g.class_of(g.mul(x, y));
                counts[j * r + k] += 1.0;
            }
        }
        for j in 0..r {
            for k in 0..r {
                counts[j * r + k] /= sizes[k];
            }
        }
        matrices.push(counts);
    }

    // T_i = D^(-1/2) M_i D^(1/2) is normal; split into Hermitian parts and
    // take a random combination with a deterministic generator
    let mut state = 0x2545_F491_4F6C_DD1Du64;
    let mut rnd = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    'attempt: for _ in 0..8 {
        let mut h = vec![Complex64::new(0.0, 0.0); r * r];
        for m in &matrices {
            let (c1, c2) = (rnd(), rnd());
            for j in 0..r {
                for k in 0..r {
                    let t_jk = m[j * r + k] * (sizes[k] / sizes[j]).sqrt();
                    let t_kj = m[k * r + j] * (sizes[j] / sizes[k]).sqrt();
                    let sym = 0.5 * (t_jk + t_kj);
                    let skew = 0.5 * (t_jk - t_kj);
                    // (T + T^t)/2 + i-part of (T - T^t)/(2i): contributes
                    // sym to the real part and -skew to the imaginary part
                    h[j * r + k] += Complex64::new(c1 * sym, c2 * skew);
                }
            }
        }
        let (eigvals, v) = jacobi_hermitian(&h, r);
        // demand simple spectrum so eigenvectors are determined
        for a in 0..r {
            for b in (a + 1)..r {
                if (eigvals[a] - eigvals[b]).abs() < 1e-8 {
                    continue 'attempt;
                }
            }
        }
        let mut rows = Vec::with_capacity(r);
        for col in 0..r {
            // u_k = e^(i phi) sqrt(|C_k|/|G|) chi(g_k), and u_0 pins the phase
            let u0 = v[col];
            let phase = u0.conj() / u0.norm();
            let row: Vec<Complex64> = (0..r)
                .map(|k| v[k * r + col] * phase * (n as f64).sqrt() / sizes[k].sqrt())
                .collect();
            rows.push(row);
        }
        return rows;
    }
    panic!("failed to draw a combination with simple spectrum");
}

/// Cyclic Jacobi for a complex Hermitian matrix (row-major, dimension d).
/// Returns (eigenvalues, eigenvector columns as a row-major matrix).
fn jacobi_hermitian(input: &[Complex64], d: usize) -> (Vec<f64>, Vec<Complex64>) {
    let mut a = input.to_vec();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..d {
            for q in (p + 1)..d {
                off = off.max(a[p * d + q].norm());
            }
        }
        if off <= 1e-14 * scale {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let b = a[p * d + q];
                if b.norm() <= 1e-300 {
                    continue;
                }
                let beta = b / b.norm();
                let app = a[p * d + p].re;
                let aqq = a[q * d + q].re;
                let theta = 0.5 * (2.0 * b.norm()).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let sb = beta * s;
                // columns: new_p = c*e_p - s*conj(beta)*e_q, new_q = s*beta*e_p + c*e_q
                for k in 0..d {
                    let akp = a[k * d + p];
                    let akq = a[k * d + q];
                    a[k * d + p] = akp * c - akq * sb.conj();
                    a[k * d + q] = akp * sb + akq * c;
                }
                for k in 0..d {
                    let apk = a[p * d + k];
                    let aqk = a[q * d + k];
                    a[p * d + k] = apk * c - aqk * sb;
                    a[q * d + k] = apk * sb.conj() + aqk * c;
                }
                for k in 0..d {
                    let vkp = v[k * d + p];
                    let vkq = v[k * d + q];
                    v[k * d + p] = vkp * c - vkq * sb.conj();
                    v[k * d + q] = vkp * sb + vkq * c;
                }
            }
        }
    }
    let eig = (0..d).map(|i| a[i * d + i].re).collect();
    (eig, v)
}
