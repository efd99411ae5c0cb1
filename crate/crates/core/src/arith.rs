//! Exact arithmetic kernel: arbitrary-precision rationals, roots of unity
//! stored as reduced fractions of the circle, and elements of the cyclotomic
//! field Q(zeta_N) in the power basis modulo the N-th cyclotomic polynomial.

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator.
pub type Rat = BigRational;

/// Hard ceiling on conductors; sessions may configure a lower one.
pub const DEFAULT_CONDUCTOR_CAP: u64 = 100_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("fraction {0}/{1} is not reduced")]
    NotReduced(i64, u64),
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("incompatible conductor: {conductor} is not a multiple of the order {order}")]
    IncompatibleConductor { conductor: u64, order: u64 },
    #[error("zero divisor in field")]
    DivisionByZero,
    #[error("conductor {0} exceeds the configured cap {1}")]
    ConductorTooLarge(u64, u64),
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// A root of unity exp(2*pi*i * k/d), stored as the reduced fraction k/d
/// of the circle with 0 <= k < d.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnityRoot {
    k: u64,
    d: u64,
}

impl UnityRoot {
    /// Canonicalizes an arbitrary signed fraction k/d of the circle.
    pub fn new(k: i64, d: u64) -> Result<UnityRoot, ArithError> {
        if d == 0 {
            return Err(ArithError::ZeroDenominator);
        }
        let di = d as i64;
        let mut k = k.rem_euclid(di) as u64;
        let mut d = d;
        let g = k.gcd(&d);
        if g > 1 {
            k /= g;
            d /= g;
        }
        if k == 0 {
            d = 1;
        }
        Ok(UnityRoot { k, d })
    }

    /// Accepts only an already-reduced fraction; the sign may be negative.
    pub fn from_reduced_fraction(k: i64, d: u64) -> Result<UnityRoot, ArithError> {
        if d == 0 {
            return Err(ArithError::ZeroDenominator);
        }
        if k != 0 && (k.unsigned_abs().gcd(&d) != 1 || k.unsigned_abs() >= d) {
            return Err(ArithError::NotReduced(k, d));
        }
        if k == 0 && d != 1 {
            return Err(ArithError::NotReduced(k, d));
        }
        UnityRoot::new(k, d)
    }

    pub fn one() -> UnityRoot {
        UnityRoot { k: 0, d: 1 }
    }

    pub fn minus_one() -> UnityRoot {
        UnityRoot { k: 1, d: 2 }
    }

    pub fn is_one(&self) -> bool {
        self.k == 0
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.d
    }

    pub fn numerator(&self) -> u64 {
        self.k
    }

    pub fn inverse(&self) -> UnityRoot {
        if self.k == 0 {
            *self
        } else {
            UnityRoot {
                k: self.d - self.k,
                d: self.d,
            }
        }
    }

    pub fn mul(&self, other: &UnityRoot) -> UnityRoot {
        let d = self.d.lcm(&other.d);
        let k = (self.k as u128 * (d / self.d) as u128 + other.k as u128 * (d / other.d) as u128)
            % d as u128;
        UnityRoot::new(k as i64, d).expect("lcm is nonzero")
    }

    pub fn pow(&self, e: i64) -> UnityRoot {
        let k = (self.k as i128 * e as i128).rem_euclid(self.d as i128);
        UnityRoot::new(k as i64, self.d).expect("order is nonzero")
    }

    /// The fraction of the circle as a rational in [0, 1).
    pub fn circle_fraction(&self) -> Rat {
        Rat::new(BigInt::from(self.k), BigInt::from(self.d))
    }
}

impl fmt::Display for UnityRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            write!(f, "1")
        } else if self.d == 2 {
            write!(f, "-1")
        } else {
            write!(f, "{}/{}", self.k, self.d)
        }
    }
}

/// The multiplicative order of a root of unity.
pub fn unityroot_order(q: &UnityRoot) -> u64 {
    q.order()
}

pub fn phi(n: u64) -> u64 {
    let mut result = n;
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

pub fn prime_factors(n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut n = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Coefficients of the N-th cyclotomic polynomial, ascending degree, monic.
/// Computed by exact division of x^N - 1 by the proper-divisor cyclotomics
/// and memoized process-wide (reduction runs on every field operation).
pub fn cyclotomic_polynomial(n: u64) -> std::sync::Arc<Vec<BigInt>> {
    use std::collections::HashMap;
    use std::sync::{Arc, Mutex, OnceLock};
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    assert!(n >= 1, "conductor must be positive");
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&n) {
        return hit.clone();
    }
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let phi_d = cyclotomic_polynomial(d);
        num = int_poly_exact_div(&num, phi_d.as_slice());
    }
    let arc = Arc::new(num);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Exact division of integer polynomials with monic divisor.
fn int_poly_exact_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    let mut rem: Vec<BigInt> = a.to_vec();
    let da = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for i in (0..=(da - db)).rev() {
        let c = rem[i + db].clone();
        if !c.is_zero() {
            quot[i] = c.clone();
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

/// An element of Q(zeta_N): coordinates in the power basis
/// 1, zeta, ..., zeta^(phi(N)-1) modulo the N-th cyclotomic polynomial.
#[derive(Debug, Clone)]
pub struct CycloNumber {
    conductor: u64,
    coeffs: Vec<Rat>,
}

impl CycloNumber {
    pub fn zero(conductor: u64) -> CycloNumber {
        CycloNumber {
            conductor,
            coeffs: vec![Rat::zero(); phi(conductor) as usize],
        }
    }

    pub fn one(conductor: u64) -> CycloNumber {
        CycloNumber::from_rat(Rat::one(), conductor)
    }

    pub fn from_rat(r: Rat, conductor: u64) -> CycloNumber {
        let mut coeffs = vec![Rat::zero(); phi(conductor) as usize];
        coeffs[0] = r;
        CycloNumber { conductor, coeffs }
    }

    pub fn from_int(n: i64, conductor: u64) -> CycloNumber {
        CycloNumber::from_rat(rat_int(n), conductor)
    }

    /// zeta_conductor^e as a canonical field element.
    pub fn zeta_power(conductor: u64, e: i64) -> CycloNumber {
        let e = e.rem_euclid(conductor as i64) as usize;
        let mut dense = vec![Rat::zero(); conductor as usize];
        dense[e] = Rat::one();
        CycloNumber::reduce_dense(conductor, dense)
    }

    /// Embeds a root of unity into Q(zeta_conductor).
    pub fn embed_root(q: &UnityRoot, conductor: u64) -> Result<CycloNumber, ArithError> {
        if conductor % q.order() != 0 {
            return Err(ArithError::IncompatibleConductor {
                conductor,
                order: q.order(),
            });
        }
        Ok(CycloNumber::zeta_power(
            conductor,
            (q.numerator() * (conductor / q.order())) as i64,
        ))
    }

    /// Reduces a dense polynomial in zeta (degree < conductor) to the
    /// canonical power basis mod Phi_N.
    fn reduce_dense(conductor: u64, mut dense: Vec<Rat>) -> CycloNumber {
        let modulus = cyclotomic_polynomial(conductor);
        let deg_phi = modulus.len() - 1;
        for i in (deg_phi..dense.len()).rev() {
            if dense[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut dense[i], Rat::zero());
            for (j, m) in modulus.iter().enumerate().take(deg_phi) {
                let delta = &c * Rat::from_integer(m.clone());
                dense[i - deg_phi + j] -= delta;
            }
        }
        dense.truncate(deg_phi);
        dense.resize(deg_phi, Rat::zero());
        CycloNumber {
            conductor,
            coeffs: dense,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Some(r) when the element lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Lifts to a multiple of the current conductor.
    pub fn lift(&self, conductor: u64) -> Result<CycloNumber, ArithError> {
        if conductor == self.conductor {
            return Ok(self.clone());
        }
        if conductor % self.conductor != 0 {
            return Err(ArithError::IncompatibleConductor {
                conductor,
                order: self.conductor,
            });
        }
        let step = (conductor / self.conductor) as usize;
        let mut dense = vec![Rat::zero(); conductor as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                dense[i * step] = c.clone();
            }
        }
        Ok(CycloNumber::reduce_dense(conductor, dense))
    }

    fn lift_pair(a: &CycloNumber, b: &CycloNumber) -> (CycloNumber, CycloNumber) {
        if a.conductor == b.conductor {
            (a.clone(), b.clone())
        } else {
            let c = a.conductor.lcm(&b.conductor);
            (
                a.lift(c).expect("lcm is a multiple"),
                b.lift(c).expect("lcm is a multiple"),
            )
        }
    }

    pub fn add(&self, other: &CycloNumber) -> CycloNumber {
        let (mut a, b) = CycloNumber::lift_pair(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }

    pub fn sub(&self, other: &CycloNumber) -> CycloNumber {
        let (mut a, b) = CycloNumber::lift_pair(self, other);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }

    pub fn neg(&self) -> CycloNumber {
        let mut a = self.clone();
        for c in a.coeffs.iter_mut() {
            *c = -c.clone();
        }
        a
    }

    pub fn mul(&self, other: &CycloNumber) -> CycloNumber {
        let (a, b) = CycloNumber::lift_pair(self, other);
        let n = a.conductor as usize;
        // Exponents wrap mod N since zeta^N = 1 in the quotient.
        let mut dense = vec![Rat::zero(); n];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let k = (i + j) % n;
                dense[k] += x * y;
            }
        }
        CycloNumber::reduce_dense(a.conductor, dense)
    }

    pub fn scale(&self, r: &Rat) -> CycloNumber {
        let mut a = self.clone();
        for c in a.coeffs.iter_mut() {
            *c *= r;
        }
        a
    }

    pub fn inverse(&self) -> Result<CycloNumber, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        if let Some(r) = self.as_rat() {
            return Ok(CycloNumber::from_rat(Rat::one() / r, self.conductor));
        }
        // Extended Euclid in Q[x] against Phi_N, which is irreducible over Q.
        let modulus: Vec<Rat> = cyclotomic_polynomial(self.conductor)
            .iter()
            .cloned()
            .map(Rat::from_integer)
            .collect();
        let inv = rat_poly_modular_inverse(&self.coeffs, &modulus)
            .expect("nonzero element of a field has an inverse");
        let mut coeffs = inv;
        coeffs.resize(self.coeffs.len(), Rat::zero());
        Ok(CycloNumber {
            conductor: self.conductor,
            coeffs,
        })
    }

    pub fn div(&self, other: &CycloNumber) -> Result<CycloNumber, ArithError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: u64) -> CycloNumber {
        let mut result = CycloNumber::one(self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }
}

impl PartialEq for CycloNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let (a, b) = CycloNumber::lift_pair(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycloNumber {}

fn rat_poly_deg(a: &[Rat]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

fn rat_poly_divmod(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let db = rat_poly_deg(b).expect("division by zero polynomial");
    let mut rem: Vec<Rat> = a.to_vec();
    let da = match rat_poly_deg(&rem) {
        Some(d) if d >= db => d,
        _ => return (vec![], rem),
    };
    let lead = b[db].clone();
    let mut quot = vec![Rat::zero(); da - db + 1];
    for i in (0..=(da - db)).rev() {
        let c = &rem[i + db] / &lead;
        if !c.is_zero() {
            quot[i] = c.clone();
            for j in 0..=db {
                let delta = &c * &b[j];
                rem[i + j] -= delta;
            }
        }
    }
    (quot, rem)
}

fn rat_poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let (da, db) = match (rat_poly_deg(a), rat_poly_deg(b)) {
        (Some(da), Some(db)) => (da, db),
        _ => return vec![],
    };
    let mut out = vec![Rat::zero(); da + db + 1];
    for i in 0..=da {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..=db {
            if !b[j].is_zero() {
                out[i + j] += &a[i] * &b[j];
            }
        }
    }
    out
}

fn rat_poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    out
}

/// u with u*a = 1 mod m, via the extended Euclidean algorithm over Q[x].
fn rat_poly_modular_inverse(a: &[Rat], m: &[Rat]) -> Option<Vec<Rat>> {
    let mut r0: Vec<Rat> = m.to_vec();
    let mut r1: Vec<Rat> = a.to_vec();
    let mut s0: Vec<Rat> = vec![];
    let mut s1: Vec<Rat> = vec![Rat::one()];
    while rat_poly_deg(&r1).is_some() {
        let (q, r) = rat_poly_divmod(&r0, &r1);
        let s = rat_poly_sub(&s0, &rat_poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is now the gcd, a nonzero constant.
    let d = rat_poly_deg(&r0)?;
    if d != 0 {
        return None;
    }
    let c = r0[0].clone();
    let (_, rem) = rat_poly_divmod(&s0, m);
    Some(rem.into_iter().map(|x| x / &c).collect())
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
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
            let unit_coeff = abs.is_one() && i > 0;
            if !unit_coeff {
                write!(f, "{}", abs)?;
            }
            if i > 0 {
                if !unit_coeff {
                    write!(f, "*")?;
                }
                write!(f, "zeta({})", self.conductor)?;
                if i > 1 {
                    write!(f, "^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unity_root_orders() {
        assert_eq!(UnityRoot::new(1, 1).unwrap().order(), 1);
        assert_eq!(UnityRoot::new(1, 2).unwrap().order(), 2);
        assert_eq!(UnityRoot::new(4, 27).unwrap().order(), 27);
    }

    #[test]
    fn unity_root_canonicalization() {
        let q = UnityRoot::new(-4, 27).unwrap();
        assert_eq!(q.numerator(), 23);
        assert_eq!(q.order(), 27);
        assert_eq!(q, UnityRoot::new(4, 27).unwrap().inverse());
        assert!(UnityRoot::from_reduced_fraction(2, 4).is_err());
        assert!(UnityRoot::from_reduced_fraction(-4, 27).is_ok());
    }

    #[test]
    fn cyclotomic_small() {
        // Phi_1 = x - 1, Phi_2 = x + 1, Phi_3 = x^2 + x + 1, Phi_4 = x^2 + 1.
        assert_eq!(
            *cyclotomic_polynomial(3),
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]
        );
        assert_eq!(
            *cyclotomic_polynomial(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
        // Phi_105 is the first with a coefficient of magnitude 2.
        let p105 = cyclotomic_polynomial(105);
        assert_eq!(p105.len() as u64 - 1, phi(105));
        assert!(p105.iter().any(|c| c.abs() == BigInt::from(2)));
    }

    #[test]
    fn embed_defining_relations() {
        let minus_one = CycloNumber::embed_root(&UnityRoot::new(1, 2).unwrap(), 2).unwrap();
        assert_eq!(minus_one, CycloNumber::from_int(-1, 2));

        let i = CycloNumber::embed_root(&UnityRoot::new(1, 4).unwrap(), 4).unwrap();
        assert_eq!(i.mul(&i), CycloNumber::from_int(-1, 4));

        let z3 = CycloNumber::embed_root(&UnityRoot::new(1, 3).unwrap(), 3).unwrap();
        let sum = CycloNumber::one(3).add(&z3).add(&z3.mul(&z3));
        assert!(sum.is_zero());

        let err = CycloNumber::embed_root(&UnityRoot::new(1, 4).unwrap(), 6);
        assert!(matches!(
            err,
            Err(ArithError::IncompatibleConductor { .. })
        ));
    }

    #[test]
    fn embedded_roots_are_primitive() {
        for d in 1..=12u64 {
            for k in 0..d {
                let q = match UnityRoot::from_reduced_fraction(k as i64, d) {
                    Ok(q) => q,
                    Err(_) => continue,
                };
                for mult in [1u64, 2, 3] {
                    let c = q.order() * mult;
                    let z = CycloNumber::embed_root(&q, c).unwrap();
                    assert!(z.pow(q.order()).is_one());
                    for e in 1..q.order() {
                        assert!(!z.pow(e).is_one(), "q={q} not primitive at power {e}");
                    }
                }
            }
        }
    }

    #[test]
    fn product_of_roots() {
        let z3 = CycloNumber::zeta_power(3, 1);
        let z3sq = CycloNumber::zeta_power(3, 2);
        assert!(z3.mul(&z3sq).is_one());
    }

    #[test]
    fn root_product_identity_small() {
        // prod_{i=1}^{n-1} (1 - q^i) = n for every primitive n-th root q.
        for n in 2..=12u64 {
            let q = CycloNumber::zeta_power(n, 1);
            let mut prod = CycloNumber::one(n);
            for i in 1..n {
                prod = prod.mul(&CycloNumber::one(n).sub(&q.pow(i)));
            }
            assert_eq!(prod, CycloNumber::from_int(n as i64, n), "failed at n={n}");
        }
    }

    #[test]
    fn quartic_case_of_product_identity() {
        let q = CycloNumber::zeta_power(4, 1);
        let one = CycloNumber::one(4);
        let p = one
            .sub(&q)
            .mul(&one.sub(&q.pow(2)))
            .mul(&one.sub(&q.pow(3)));
        assert_eq!(p, CycloNumber::from_int(4, 4));
    }

    #[test]
    fn mixed_conductor_equality() {
        let a = CycloNumber::zeta_power(6, 2);
        let b = CycloNumber::zeta_power(3, 1);
        assert_eq!(a, b);
        let c = a.add(&CycloNumber::one(2));
        assert_eq!(c.conductor(), 6);
    }

    #[test]
    fn inverse_round_trip() {
        let z = CycloNumber::zeta_power(12, 5).add(&CycloNumber::from_rat(rat(3, 7), 12));
        let inv = z.inverse().unwrap();
        assert!(z.mul(&inv).is_one());
        assert!(CycloNumber::zero(5).inverse().is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_cyclo(conductor: u64) -> impl Strategy<Value = CycloNumber> {
            let deg = phi(conductor) as usize;
            proptest::collection::vec((-6i64..=6, 1i64..=4), deg).prop_map(move |cs| {
                let coeffs = cs.into_iter().map(|(n, d)| rat(n, d)).collect();
                CycloNumber {
                    conductor,
                    coeffs,
                }
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn field_axioms(a in arb_cyclo(12), b in arb_cyclo(12), c in arb_cyclo(12)) {
                prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                if !a.is_zero() {
                    prop_assert!(a.mul(&a.inverse().unwrap()).is_one());
                }
            }

            #[test]
            fn add_commutes_across_conductors(a in arb_cyclo(6), b in arb_cyclo(4)) {
                prop_assert_eq!(a.add(&b), b.add(&a));
                prop_assert_eq!(a.mul(&b), b.mul(&a));
            }
        }
    }
}
