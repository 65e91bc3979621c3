use std::fmt;

use num_bigint::{BigInt, BigUint, RandBigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Identifies the ring a matrix or polynomial lives in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Integers,
    PrimeField {
        #[serde(with = "crate::json::dec_biguint")]
        modulus: BigUint,
    },
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Integers => write!(f, "Z"),
            RingDescriptor::PrimeField { modulus } => write!(f, "F_{modulus}"),
        }
    }
}

/// A commutative ring passed around as a runtime value.
///
/// Elements carry no reference to their ring; every operation goes through
/// the ring object so that moduli can be chosen at runtime.
pub trait Ring: Clone + fmt::Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of an integer under the canonical map Z -> R.
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    /// Canonical integer representative (`[0, p)` for prime fields).
    fn to_bigint(&self, a: &Self::Elem) -> BigInt;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// `a / b` when `b` divides `a` exactly in this ring.
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn descriptor(&self) -> RingDescriptor;

    /// Whether `v` is a canonical representative of an element.
    fn is_canonical(&self, v: &BigInt) -> bool;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// A prime field `Z/pZ`.
pub trait Field: Ring {
    /// Possibly unreduced sum used by long multiply-subtract chains.
    type Acc: Clone + Send + Sync;

    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn acc_from(&self, a: &Self::Elem) -> Self::Acc;
    /// `acc -= q * x`
    fn acc_submul(&self, acc: &mut Self::Acc, q: &Self::Elem, x: &Self::Elem);
    /// Canonical value of `acc`; resets `acc` to zero.
    fn acc_take(&self, acc: &mut Self::Acc) -> Self::Elem;
    /// Cheap test that may report `false` for an unreduced zero.
    fn acc_is_trivially_zero(&self, acc: &Self::Acc) -> bool;

    fn modulus(&self) -> BigUint;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;

    /// `base^exp` by square-and-multiply.
    fn pow(&self, base: &Self::Elem, exp: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..exp.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if exp.bit(i) {
                acc = self.mul(&acc, base);
            }
        }
        acc
    }

    fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem {
        loop {
            let x = self.random(rng);
            if !self.is_zero(&x) {
                return x;
            }
        }
    }
}

/// The integers with arbitrary precision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Ring for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_i64(&self, v: i64) -> BigInt {
        BigInt::from(v)
    }
    fn from_bigint(&self, v: &BigInt) -> BigInt {
        v.clone()
    }
    fn to_bigint(&self, a: &BigInt) -> BigInt {
        a.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn div_exact(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = a.div_rem(b);
        r.is_zero().then_some(q)
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Integers
    }
    fn is_canonical(&self, _v: &BigInt) -> bool {
        true
    }
}

/// Prime field with a modulus below `2^64`; elements are `u64` in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fp64 {
    p: u64,
}

impl Fp64 {
    /// Caller guarantees `p` is an odd prime; use [`crate::arith::PrimeField`] to check.
    pub fn new_unchecked(p: u64) -> Self {
        assert!(p > 2, "modulus must be an odd prime");
        Fp64 { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce_u128(&self, x: u128) -> u64 {
        (x % self.p as u128) as u64
    }
}

impl Ring for Fp64 {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }
    fn from_bigint(&self, v: &BigInt) -> u64 {
        let r = v.mod_floor(&BigInt::from(self.p));
        r.to_u64().expect("reduced value fits")
    }
    fn to_bigint(&self, a: &u64) -> BigInt {
        BigInt::from(*a)
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let (s, o) = a.overflowing_add(*b);
        if o || s >= self.p {
            s.wrapping_sub(self.p)
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a.wrapping_sub(*b).wrapping_add(self.p)
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.reduce_u128(*a as u128 * *b as u128)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn div_exact(&self, a: &u64, b: &u64) -> Option<u64> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::PrimeField {
            modulus: BigUint::from(self.p),
        }
    }
    fn is_canonical(&self, v: &BigInt) -> bool {
        v.sign() != Sign::Minus && *v < BigInt::from(self.p)
    }
}

impl Field for Fp64 {
    type Acc = u128;

    fn acc_from(&self, a: &u64) -> u128 {
        *a as u128
    }
    #[inline]
    fn acc_submul(&self, acc: &mut u128, q: &u64, x: &u64) {
        // each product is below p^2; for p < 2^62 reduce only near 2^127
        *acc += *q as u128 * (self.p - x) as u128;
        if self.p >= 1 << 62 || *acc >= 1 << 127 {
            *acc %= self.p as u128;
        }
    }
    #[inline]
    fn acc_take(&self, acc: &mut u128) -> u64 {
        let r = self.reduce_u128(*acc);
        *acc = 0;
        r
    }
    #[inline]
    fn acc_is_trivially_zero(&self, acc: &u128) -> bool {
        *acc == 0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let (mut r0, mut r1) = (self.p as i128, *a as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if r0 != 1 {
            return None;
        }
        Some(t0.rem_euclid(self.p as i128) as u64)
    }
    fn modulus(&self) -> BigUint {
        BigUint::from(self.p)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.p
    }
}

/// Prime field with an arbitrary-size modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpBig {
    p: BigUint,
}

impl FpBig {
    pub fn new_unchecked(p: BigUint) -> Self {
        assert!(p > BigUint::from(2u8), "modulus must be an odd prime");
        FpBig { p }
    }
}

impl Ring for FpBig {
    type Elem = BigUint;

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn one(&self) -> BigUint {
        BigUint::one()
    }
    fn from_i64(&self, v: i64) -> BigUint {
        self.from_bigint(&BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigUint {
        let p = BigInt::from(self.p.clone());
        v.mod_floor(&p).to_biguint().expect("non-negative after mod_floor")
    }
    fn to_bigint(&self, a: &BigUint) -> BigInt {
        BigInt::from(a.clone())
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        let s = a + b;
        if s >= self.p {
            s - &self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &BigUint, b: &BigUint) -> BigUint {
        if a >= b {
            a - b
        } else {
            &self.p - b + a
        }
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.p
    }
    fn neg(&self, a: &BigUint) -> BigUint {
        if a.is_zero() {
            BigUint::zero()
        } else {
            &self.p - a
        }
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn div_exact(&self, a: &BigUint, b: &BigUint) -> Option<BigUint> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::PrimeField {
            modulus: self.p.clone(),
        }
    }
    fn is_canonical(&self, v: &BigInt) -> bool {
        !v.is_negative() && v.magnitude() < &self.p
    }
}

impl Field for FpBig {
    type Acc = BigUint;

    fn acc_from(&self, a: &BigUint) -> BigUint {
        a.clone()
    }
    fn acc_submul(&self, acc: &mut BigUint, q: &BigUint, x: &BigUint) {
        *acc = self.sub(acc, &self.mul(q, x));
    }
    fn acc_take(&self, acc: &mut BigUint) -> BigUint {
        std::mem::take(acc)
    }
    fn acc_is_trivially_zero(&self, acc: &BigUint) -> bool {
        acc.is_zero()
    }
    fn inv(&self, a: &BigUint) -> Option<BigUint> {
        if a.is_zero() {
            return None;
        }
        let a = BigInt::from(a.clone());
        let p = BigInt::from(self.p.clone());
        let g = a.extended_gcd(&p);
        if !g.gcd.is_one() {
            return None;
        }
        g.x.mod_floor(&p).to_biguint()
    }
    fn modulus(&self) -> BigUint {
        self.p.clone()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigUint {
        rng.gen_biguint_below(&self.p)
    }
    fn from_u64(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.p
    }
}
