//! Exact arithmetic in the cyclotomic fields Q(zeta_m).
//!
//! A value is held in the power basis of Q[x]/(Phi_m) with rational
//! coefficients, canonically reduced: the stored conductor is the smallest m
//! whose field contains the value. Rationals therefore always sit at
//! conductor 1, and conductors congruent to 2 mod 4 never survive reduction
//! (Q(zeta_{2d}) = Q(zeta_d) for odd d). With that invariant, mathematical
//! equality is plain structural equality.
//!
//! [`to_common_conductor`] is the one escape hatch that returns
//! non-canonical re-encodings; everything else reduces its result.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub fn euler_phi(mut m: u64) -> usize {
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut pk = 1;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if m > 1 {
        phi *= m - 1;
    }
    phi as usize
}

fn prime_divisors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn proper_divisors(m: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..m).filter(|d| m % d == 0).collect();
    out.sort_unstable();
    out
}

type Poly = Vec<BigInt>; // dense, ascending exponents

static PHI_CACHE: OnceLock<Mutex<HashMap<u64, Arc<Poly>>>> = OnceLock::new();
static LIFT_CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<Vec<Vec<BigRational>>>>>> =
    OnceLock::new();

/// Exact quotient of integer polynomials; the divisor must be monic and the
/// division must come out even (it always does for x^m - 1 by Phi_d).
fn poly_div_exact(num: &Poly, den: &Poly) -> Poly {
    let mut rem = num.clone();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for j in (dd..rem.len()).rev() {
        let c = rem[j].clone();
        if c.is_zero() {
            continue;
        }
        quot[j - dd] = c.clone();
        for (k, dc) in den.iter().enumerate() {
            rem[j - dd + k] -= &c * dc;
        }
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

/// The m-th cyclotomic polynomial, computed once per conductor by dividing
/// x^m - 1 by the cyclotomic polynomials of the proper divisors.
pub(crate) fn cyclotomic_poly(m: u64) -> Arc<Poly> {
    let cache = PHI_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return Arc::clone(p);
    }
    let poly = if m == 1 {
        vec![BigInt::from(-1), BigInt::from(1)]
    } else {
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::from(1);
        let mut acc = num;
        for d in proper_divisors(m) {
            let phi_d = cyclotomic_poly(d);
            acc = poly_div_exact(&acc, &phi_d);
        }
        acc
    };
    debug_assert_eq!(poly.len(), euler_phi(m) + 1);
    let arc = Arc::new(poly);
    cache
        .lock()
        .unwrap()
        .entry(m)
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// Reduce an arbitrary-degree rational polynomial modulo Phi_m, returning
/// exactly phi(m) coefficients.
fn reduce_mod_phi(mut poly: Vec<BigRational>, m: u64) -> Vec<BigRational> {
    let phi = cyclotomic_poly(m);
    let deg = phi.len() - 1;
    if poly.len() < deg {
        poly.resize(deg, BigRational::zero());
        return poly;
    }
    for j in (deg..poly.len()).rev() {
        if poly[j].is_zero() {
            continue;
        }
        let c = std::mem::replace(&mut poly[j], BigRational::zero());
        for (k, pc) in phi.iter().enumerate().take(deg) {
            let t = &c * BigRational::from(pc.clone());
            poly[j - deg + k] -= t;
        }
    }
    poly.truncate(deg);
    poly
}

/// Re-express coefficients at conductor m in the basis at conductor big
/// (m must divide big): zeta_m = zeta_big^(big/m).
fn lift_coeffs(coeffs: &[BigRational], m: u64, big: u64) -> Vec<BigRational> {
    if m == big {
        return coeffs.to_vec();
    }
    debug_assert_eq!(big % m, 0);
    let step = (big / m) as usize;
    let mut poly = vec![BigRational::zero(); (coeffs.len() - 1) * step + 1];
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            poly[i * step] = c.clone();
        }
    }
    reduce_mod_phi(poly, big)
}

/// Matrix whose columns are the conductor-big images of the power basis of
/// conductor d. Cached: descent attempts reuse it heavily.
fn lift_matrix(big: u64, d: u64) -> Arc<Vec<Vec<BigRational>>> {
    let cache = LIFT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(mx) = cache.lock().unwrap().get(&(big, d)) {
        return Arc::clone(mx);
    }
    let cols = euler_phi(d);
    let mut mx = Vec::with_capacity(cols);
    for i in 0..cols {
        let mut basis = vec![BigRational::zero(); i + 1];
        basis[i] = BigRational::one();
        mx.push(lift_coeffs(&basis, d, big));
    }
    let arc = Arc::new(mx);
    cache
        .lock()
        .unwrap()
        .entry((big, d))
        .or_insert_with(|| Arc::clone(&arc));
    arc
}

/// Solve (columns of `mat`) * y = rhs over the rationals, or None if rhs is
/// outside the column span.
fn solve_in_span(mat: &[Vec<BigRational>], rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let cols = mat.len();
    let rows = rhs.len();
    // augmented row-major copy
    let mut a: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..cols).map(|c| mat[c][r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivot_row_of_col = vec![usize::MAX; cols];
    let mut next_row = 0usize;
    for col in 0..cols {
        let Some(p) = (next_row..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(next_row, p);
        let inv = a[next_row][col].clone();
        for v in a[next_row][col..].iter_mut() {
            *v /= &inv;
        }
        for r in 0..rows {
            if r != next_row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=cols {
                    let t = &f * &a[next_row][c];
                    a[r][c] -= t;
                }
            }
        }
        pivot_row_of_col[col] = next_row;
        next_row += 1;
    }
    // consistency: rows without pivots must have zero rhs
    if a[next_row..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    Some(
        (0..cols)
            .map(|c| {
                let r = pivot_row_of_col[c];
                if r == usize::MAX {
                    BigRational::zero()
                } else {
                    a[r][cols].clone()
                }
            })
            .collect(),
    )
}

/// An exact element of a cyclotomic field, canonically reduced.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![BigRational::from(BigInt::from(n))],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    /// The root of unity zeta_m^k (k taken mod m), in canonical form.
    pub fn zeta(m: u64, k: i64) -> Self {
        assert!(m >= 1, "conductor must be positive");
        let k = k.rem_euclid(m as i64) as u64;
        let g = gcd(k, m);
        let (mut m, mut k) = (m / g, k / g);
        let mut negate = false;
        if m % 4 == 2 {
            // zeta_{2d}^k = (-1)^k * zeta_d^{k(d+1)/2} for odd d
            let d = m / 2;
            negate = k % 2 == 1;
            k = (k % d) * ((d + 1) / 2) % d;
            m = d;
        }
        if m == 1 {
            return Cyclotomic::from_integer(if negate { -1 } else { 1 });
        }
        if m == 2 {
            return Cyclotomic::from_integer(if negate { 1 } else { -1 });
        }
        let mut poly = vec![BigRational::zero(); k as usize + 1];
        poly[k as usize] = BigRational::one();
        let mut coeffs = reduce_mod_phi(poly, m);
        if negate {
            for c in &mut coeffs {
                *c = -std::mem::take(c);
            }
        }
        // a primitive m-th root (m not 2 mod 4) already has minimal conductor
        Cyclotomic { conductor: m, coeffs }
    }

    /// Canonicalize arbitrary (conductor, coefficients) data: greedily
    /// descend to the smallest cyclotomic subfield containing the value.
    fn canonical(mut m: u64, mut coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), euler_phi(m));
        'outer: loop {
            if m == 1 {
                return Cyclotomic { conductor: 1, coeffs };
            }
            if coeffs[1..].iter().all(|c| c.is_zero()) {
                let c0 = coeffs.swap_remove(0);
                return Cyclotomic {
                    conductor: 1,
                    coeffs: vec![c0],
                };
            }
            for q in prime_divisors(m) {
                let d = m / q;
                let mx = lift_matrix(m, d);
                if let Some(smaller) = solve_in_span(&mx, &coeffs) {
                    m = d;
                    coeffs = smaller;
                    continue 'outer;
                }
            }
            return Cyclotomic { conductor: m, coeffs };
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.coeffs[0].is_one()
    }

    /// Exact rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.conductor == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Exact nonnegative integer value, if the element is one.
    pub fn as_nonneg_integer(&self) -> Option<u64> {
        let q = self.as_rational()?;
        if q.is_integer() && !q.is_negative() {
            q.to_integer().to_u64()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Cyclotomic) -> Cyclotomic {
        let m = lcm(self.conductor, other.conductor);
        let mut a = lift_coeffs(&self.coeffs, self.conductor, m);
        let b = lift_coeffs(&other.coeffs, other.conductor, m);
        for (x, y) in a.iter_mut().zip(&b) {
            *x += y;
        }
        Cyclotomic::canonical(m, a)
    }

    pub fn sub(&self, other: &Cyclotomic) -> Cyclotomic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Cyclotomic {
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Cyclotomic) -> Cyclotomic {
        let m = lcm(self.conductor, other.conductor);
        let a = lift_coeffs(&self.coeffs, self.conductor, m);
        let b = lift_coeffs(&other.coeffs, other.conductor, m);
        Cyclotomic::canonical(m, mul_raw(&a, &b, m))
    }

    pub fn scale(&self, s: &BigRational) -> Cyclotomic {
        if s.is_zero() {
            return Cyclotomic::zero();
        }
        Cyclotomic {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Complex conjugation: the basis automorphism zeta -> zeta^(m-1).
    pub fn conjugate(&self) -> Cyclotomic {
        if self.conductor == 1 {
            return self.clone();
        }
        let coeffs = conj_raw(&self.coeffs, self.conductor);
        // an automorphism preserves the minimal conductor
        Cyclotomic {
            conductor: self.conductor,
            coeffs,
        }
    }

    /// Numeric embedding zeta_m -> exp(2*pi*i/m).
    pub fn to_complex(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        let m = self.conductor as f64;
        for (i, c) in self.coeffs.iter().enumerate() {
            let Some(x) = c.to_f64() else { continue };
            let ang = 2.0 * std::f64::consts::PI * (i as f64) / m;
            acc += Complex64::new(ang.cos(), ang.sin()) * x;
        }
        acc
    }

    /// Re-express both values over the lcm of their conductors. The outputs
    /// are equal to the inputs as field elements but are *not* canonically
    /// reduced; feed them back through arithmetic to re-canonicalize.
    pub fn to_common_conductor(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
        let m = lcm(a.conductor, b.conductor);
        (
            Cyclotomic {
                conductor: m,
                coeffs: lift_coeffs(&a.coeffs, a.conductor, m),
            },
            Cyclotomic {
                conductor: m,
                coeffs: lift_coeffs(&b.coeffs, b.conductor, m),
            },
        )
    }
}

fn mul_raw(a: &[BigRational], b: &[BigRational], m: u64) -> Vec<BigRational> {
    let mut prod = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                prod[i + j] += x * y;
            }
        }
    }
    reduce_mod_phi(prod, m)
}

fn conj_raw(coeffs: &[BigRational], m: u64) -> Vec<BigRational> {
    let mut poly = vec![BigRational::zero(); m as usize];
    for (i, c) in coeffs.iter().enumerate() {
        if !c.is_zero() {
            let e = (i as u64 * (m - 1) % m) as usize;
            poly[e] += c;
        }
    }
    reduce_mod_phi(poly, m)
}

/// Accumulator for long sums of products: works at a running common
/// conductor and canonicalizes once at the end.
pub struct Accumulator {
    conductor: u64,
    coeffs: Vec<BigRational>,
}

impl Default for Accumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl Accumulator {
    pub fn new() -> Self {
        Accumulator {
            conductor: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    fn widen(&mut self, m: u64) {
        let big = lcm(self.conductor, m);
        if big != self.conductor {
            self.coeffs = lift_coeffs(&self.coeffs, self.conductor, big);
            self.conductor = big;
        }
    }

    pub fn add(&mut self, z: &Cyclotomic) {
        self.widen(z.conductor);
        let lifted = lift_coeffs(&z.coeffs, z.conductor, self.conductor);
        for (x, y) in self.coeffs.iter_mut().zip(&lifted) {
            *x += y;
        }
    }

    pub fn add_scaled(&mut self, z: &Cyclotomic, s: &BigRational) {
        if s.is_zero() || z.is_zero() {
            return;
        }
        self.widen(z.conductor);
        let lifted = lift_coeffs(&z.coeffs, z.conductor, self.conductor);
        for (x, y) in self.coeffs.iter_mut().zip(&lifted) {
            *x += y * s;
        }
    }

    /// Accumulate a * conj(b) without intermediate canonicalization.
    pub fn add_mul_conj(&mut self, a: &Cyclotomic, b: &Cyclotomic, scale: &BigRational) {
        if a.is_zero() || b.is_zero() || scale.is_zero() {
            return;
        }
        let m = lcm(a.conductor, b.conductor);
        self.widen(m);
        let m = self.conductor;
        let av = lift_coeffs(&a.coeffs, a.conductor, m);
        let bv = conj_raw(&lift_coeffs(&b.coeffs, b.conductor, m), m);
        let prod = mul_raw(&av, &bv, m);
        for (x, y) in self.coeffs.iter_mut().zip(&prod) {
            *x += y * scale;
        }
    }

    pub fn finish(self) -> Cyclotomic {
        Cyclotomic::canonical(self.conductor, self.coeffs)
    }
}

impl std::fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

impl std::fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.conductor == 1 {
            return write!(f, "{}", self.coeffs[0]);
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write!(f, "z{}", self.conductor)?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CycloRepr {
    conductor: u64,
    coeffs: Vec<String>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycloRepr {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        if repr.conductor == 0 || repr.coeffs.len() != euler_phi(repr.conductor) {
            return Err(D::Error::custom("bad cyclotomic encoding"));
        }
        let coeffs = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigRational>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| D::Error::custom(format!("bad rational: {e}")))?;
        Ok(Cyclotomic::canonical(repr.conductor, coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn roots_of_unity_basics() {
        assert_eq!(Cyclotomic::zeta(1, 0), Cyclotomic::one());
        assert_eq!(Cyclotomic::zeta(2, 1), Cyclotomic::from_integer(-1));
        let i = Cyclotomic::zeta(4, 1);
        assert_eq!(i.mul(&i), Cyclotomic::from_integer(-1));
    }

    #[test]
    fn primitive_cube_roots_sum_to_minus_one() {
        let s = Cyclotomic::zeta(3, 1).add(&Cyclotomic::zeta(3, 2));
        assert_eq!(s, Cyclotomic::from_integer(-1));
        assert_eq!(s.conductor(), 1);
    }

    #[test]
    fn fifth_roots_sum_is_rational() {
        let mut acc = Accumulator::new();
        for k in 1..5 {
            acc.add(&Cyclotomic::zeta(5, k));
        }
        assert_eq!(acc.finish().as_rational(), Some(q(-1, 1)));
    }

    #[test]
    fn zeta8_is_irrational() {
        assert_eq!(Cyclotomic::zeta(8, 1).as_rational(), None);
    }

    #[test]
    fn conjugate_times_self_is_one() {
        let z = Cyclotomic::zeta(3, 1);
        assert_eq!(z.conjugate().mul(&z), Cyclotomic::one());
    }

    #[test]
    fn conductor_descends_to_subfield() {
        assert_eq!(Cyclotomic::zeta(6, 2), Cyclotomic::zeta(3, 1));
        // zeta_6 lives in Q(zeta_3)
        assert_eq!(Cyclotomic::zeta(6, 1).conductor(), 3);
    }

    #[test]
    fn common_conductor_is_lcm_of_stored_conductors() {
        let (a, b) = Cyclotomic::to_common_conductor(
            &Cyclotomic::from_integer(2),
            &Cyclotomic::zeta(3, 1),
        );
        assert_eq!(a.conductor(), 3);
        assert_eq!(b.conductor(), 3);
        let (a, b) =
            Cyclotomic::to_common_conductor(&Cyclotomic::zeta(8, 1), &Cyclotomic::zeta(3, 1));
        assert_eq!((a.conductor(), b.conductor()), (24, 24));
        assert!((a.to_complex() - Cyclotomic::zeta(8, 1).to_complex()).norm() < 1e-12);
    }

    #[test]
    fn subtraction_cancels_to_conductor_one() {
        let z = Cyclotomic::zeta(12, 5);
        let d = z.sub(&z);
        assert!(d.is_zero());
        assert_eq!(d.conductor(), 1);
    }

    #[test]
    fn nonneg_integer_extraction() {
        assert_eq!(Cyclotomic::from_integer(7).as_nonneg_integer(), Some(7));
        assert_eq!(Cyclotomic::from_integer(-7).as_nonneg_integer(), None);
        assert_eq!(Cyclotomic::from_rational(q(1, 2)).as_nonneg_integer(), None);
    }

    #[test]
    fn serde_round_trip() {
        let z = Cyclotomic::zeta(12, 7).add(&Cyclotomic::from_rational(q(3, 2)));
        let text = serde_json::to_string(&z).unwrap();
        let back: Cyclotomic = serde_json::from_str(&text).unwrap();
        assert_eq!(z, back);
    }
}
