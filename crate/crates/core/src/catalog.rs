//! Built-in group catalog.
//!
//! Naming follows the order convention for dihedral groups: `D10` is the
//! dihedral group OF ORDER 10. Generator choices are pinned so element and
//! class orderings (and hence witness indices in reports) are reproducible:
//!
//! * `Cn`: the n-cycle (0 1 ... n-1).
//! * `Dn` (n even, n >= 6): rotation (0 1 ... m-1) and the reflection
//!   i -> (m - i) mod m, where m = n/2.
//! * `Sn`: the transposition (0 1) and the n-cycle.
//! * `An`: the 3-cycle (0 1 2) plus (0 1 ... n-1) for odd n, or
//!   (1 2 ... n-1) for even n.
//! * `Q8`: the unit quaternions with ids (sign, axis) -> 4*sign + axis.
//! * `SL(2,3)`: closure of [[1,1],[0,1]] and [[0,-1],[1,0]] over F_3 in
//!   breadth-first discovery order.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, DEFAULT_ORDER_LIMIT};

pub fn cyclic(n: usize) -> Result<Arc<FiniteGroup>> {
    if n == 1 {
        return Ok(FiniteGroup::trivial().with_name("C1"));
    }
    let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
    Ok(FiniteGroup::from_permutations(&[cycle], DEFAULT_ORDER_LIMIT)?
        .with_name(&format!("C{n}")))
}

/// Dihedral group of order n (n even, n >= 6).
pub fn dihedral(n: usize) -> Result<Arc<FiniteGroup>> {
    if n % 2 != 0 || n < 6 {
        return Err(Error::UnknownGroup(format!("D{n}")));
    }
    let m = n / 2;
    let rot: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
    let refl: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
    Ok(
        FiniteGroup::from_permutations(&[rot, refl], DEFAULT_ORDER_LIMIT)?
            .with_name(&format!("D{n}")),
    )
}

pub fn symmetric(n: usize) -> Result<Arc<FiniteGroup>> {
    match n {
        0 | 1 => Ok(FiniteGroup::trivial().with_name("S1")),
        2 => Ok(cyclic(2)?.with_name("S2")),
        _ => {
            let mut swap: Vec<usize> = (0..n).collect();
            swap.swap(0, 1);
            let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
            Ok(
                FiniteGroup::from_permutations(&[swap, cycle], DEFAULT_ORDER_LIMIT)?
                    .with_name(&format!("S{n}")),
            )
        }
    }
}

pub fn alternating(n: usize) -> Result<Arc<FiniteGroup>> {
    match n {
        0..=2 => Ok(FiniteGroup::trivial().with_name("A2")),
        3 => Ok(cyclic(3)?.with_name("A3")),
        _ => {
            let three: Vec<usize> = (0..n).map(|i| match i {
                0 => 1,
                1 => 2,
                2 => 0,
                other => other,
            })
            .collect();
            let big: Vec<usize> = if n % 2 == 1 {
                (0..n).map(|i| (i + 1) % n).collect()
            } else {
                // (1 2 ... n-1), fixing 0
                (0..n).map(|i| if i == 0 { 0 } else { i % (n - 1) + 1 }).collect()
            };
            Ok(
                FiniteGroup::from_permutations(&[three, big], DEFAULT_ORDER_LIMIT)?
                    .with_name(&format!("A{n}")),
            )
        }
    }
}

/// The quaternion group of order 8.
pub fn quaternion8() -> Result<Arc<FiniteGroup>> {
    // axis products: (sign flip, axis) for i,j,k multiplication
    const AXIS: [[(u32, u32); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    let mut table = vec![vec![0u32; 8]; 8];
    for s1 in 0..2u32 {
        for u1 in 0..4u32 {
            for s2 in 0..2u32 {
                for u2 in 0..4u32 {
                    let (flip, u) = AXIS[u1 as usize][u2 as usize];
                    let s = (s1 + s2 + flip) % 2;
                    table[(4 * s1 + u1) as usize][(4 * s2 + u2) as usize] = 4 * s + u;
                }
            }
        }
    }
    Ok(FiniteGroup::from_cayley_named(table, Some("Q8".into()))?)
}

/// SL(2,3) as the closure of its two standard generators over F_3.
pub fn special_linear_2_3() -> Result<Arc<FiniteGroup>> {
    type Mat = [u32; 4]; // row-major [a, b, c, d] mod 3
    fn mmul(x: &Mat, y: &Mat) -> Mat {
        [
            (x[0] * y[0] + x[1] * y[2]) % 3,
            (x[0] * y[1] + x[1] * y[3]) % 3,
            (x[2] * y[0] + x[3] * y[2]) % 3,
            (x[2] * y[1] + x[3] * y[3]) % 3,
        ]
    }
    let gens: [Mat; 2] = [[1, 1, 0, 1], [0, 2, 1, 0]];
    let identity: Mat = [1, 0, 0, 1];
    let mut elems: Vec<Mat> = vec![identity];
    let mut index: HashMap<Mat, u32> = HashMap::from([(identity, 0)]);
    let mut head = 0;
    while head < elems.len() {
        let cur = elems[head];
        head += 1;
        for g in &gens {
            let p = mmul(&cur, g);
            if !index.contains_key(&p) {
                index.insert(p, elems.len() as u32);
                elems.push(p);
            }
        }
    }
    let n = elems.len();
    let mut table = vec![vec![0u32; n]; n];
    for a in 0..n {
        for b in 0..n {
            table[a][b] = index[&mmul(&elems[a], &elems[b])];
        }
    }
    Ok(FiniteGroup::from_cayley_named(table, Some("SL(2,3)".into()))?)
}

/// Look a group up by catalog name.
pub fn catalog(name: &str) -> Result<Arc<FiniteGroup>> {
    let unknown = || Error::UnknownGroup(name.to_string());
    match name {
        "Q8" => return quaternion8(),
        "SL(2,3)" => return special_linear_2_3(),
        _ => {}
    }
    let (kind, digits) = name.split_at(1);
    let n: usize = digits.parse().map_err(|_| unknown())?;
    match kind {
        "C" if n >= 1 => cyclic(n),
        "D" => dihedral(n).map_err(|_| unknown()),
        "S" if n >= 1 => symmetric(n),
        "A" if n >= 2 => alternating(n),
        _ => Err(unknown()),
    }
}

/// The battery of named groups of order <= 24 used throughout the tests.
pub fn standard_small_names() -> Vec<&'static str> {
    vec![
        "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10", "C12", "C24", "D6", "D8",
        "D10", "D12", "S3", "S4", "A4", "Q8", "SL(2,3)",
    ]
}
