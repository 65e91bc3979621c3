//! Integers, prime fields, prime generation and centered CRT reconstruction.

mod ring;

pub use ring::{Field, Fp64, FpBig, Integers, Ring, RingDescriptor};

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

const MILLER_RABIN_ROUNDS: usize = 64;

const SMALL_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// A validated odd prime modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: BigUint,
}

impl PrimeField {
    /// Checks primality (Miller–Rabin, 64 rounds) with a fixed-seed witness
    /// generator, so construction is deterministic.
    pub fn new(p: BigUint) -> Result<Self> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_0f_9e1d);
        if p <= BigUint::from(2u8) || !is_probable_prime(&p, &mut rng) {
            return Err(Error::NotPrime(p.to_string()));
        }
        Ok(PrimeField { p })
    }

    pub fn from_u64(p: u64) -> Result<Self> {
        Self::new(BigUint::from(p))
    }

    pub fn modulus(&self) -> &BigUint {
        &self.p
    }

    pub fn bit_length(&self) -> u64 {
        self.p.bits()
    }

    /// Word-sized field context, when the modulus fits in a `u64`.
    pub fn fp64(&self) -> Option<Fp64> {
        self.p.to_u64().map(Fp64::new_unchecked)
    }

    pub fn fp_big(&self) -> FpBig {
        FpBig::new_unchecked(self.p.clone())
    }
}

/// An element of a prime field, carried together with its field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Residue {
    value: BigUint,
    field: PrimeField,
}

impl Residue {
    pub fn new(value: &BigInt, field: &PrimeField) -> Self {
        let p = BigInt::from(field.p.clone());
        let value = value.mod_floor(&p).to_biguint().expect("non-negative");
        Residue {
            value,
            field: field.clone(),
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn mul(&self, other: &Residue) -> Residue {
        debug_assert_eq!(self.field, other.field);
        Residue {
            value: (&self.value * &other.value) % &self.field.p,
            field: self.field.clone(),
        }
    }

    pub fn inverse(&self) -> Result<Residue> {
        mod_inverse(self)
    }
}

pub fn mod_inverse(a: &Residue) -> Result<Residue> {
    let inv = a.field.fp_big().inv(&a.value).ok_or(Error::NonInvertible)?;
    Ok(Residue {
        value: inv,
        field: a.field.clone(),
    })
}

/// Miller–Rabin with random bases after trial division by small primes.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigUint, rng: &mut R) -> bool {
    let two = BigUint::from(2u8);
    if *n < two {
        return false;
    }
    for &sp in SMALL_PRIMES.iter() {
        let sp = BigUint::from(sp);
        if *n == sp {
            return true;
        }
        if (n % &sp).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - 1u8;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for _ in 0..MILLER_RABIN_ROUNDS {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// A random prime with exactly `bits` bits.
pub fn gen_prime<R: Rng + ?Sized>(bits: u64, rng: &mut R) -> Result<PrimeField> {
    if bits < 3 {
        return Err(Error::InvalidArgument(format!(
            "prime bit length must be at least 3, got {bits}"
        )));
    }
    loop {
        let mut cand = rng.gen_biguint(bits);
        cand.set_bit(bits - 1, true);
        cand.set_bit(0, true);
        if is_probable_prime(&cand, rng) {
            return Ok(PrimeField { p: cand });
        }
    }
}

/// Draws primes of a fixed size, never returning the same modulus twice.
#[derive(Debug)]
pub struct PrimeStream {
    bits: u64,
    used: Vec<PrimeField>,
}

impl PrimeStream {
    pub fn new(bits: u64) -> Self {
        PrimeStream {
            bits,
            used: Vec::new(),
        }
    }

    pub fn next_prime<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<PrimeField> {
        // small bit sizes can run out of distinct primes
        for _ in 0..1000 {
            let p = gen_prime(self.bits, rng)?;
            if !self.used.contains(&p) {
                self.used.push(p.clone());
                return Ok(p);
            }
        }
        Err(Error::InvalidArgument(format!(
            "no fresh {}-bit prime found",
            self.bits
        )))
    }

    pub fn used(&self) -> &[PrimeField] {
        &self.used
    }
}

/// Maps `x` in `[0, n)` to its representative in `(-n/2, n/2]`.
pub fn centered(x: &BigUint, n: &BigUint) -> BigInt {
    let x = BigInt::from(x.clone());
    if &x * 2 > BigInt::from(n.clone()) {
        x - BigInt::from(n.clone())
    } else {
        x
    }
}

/// Incremental Chinese remainder state: `value mod modulus` with `value` in `[0, modulus)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrtState {
    pub value: BigUint,
    pub modulus: BigUint,
}

impl CrtState {
    pub fn new(value: &BigUint, p: &PrimeField) -> Self {
        CrtState {
            value: value % &p.p,
            modulus: p.p.clone(),
        }
    }

    /// Combines with `r mod p`; `p` must be coprime to the current modulus.
    pub fn extend(&self, r: &BigUint, p: &PrimeField) -> Result<CrtState> {
        let pm = &p.p;
        if (&self.modulus % pm).is_zero() {
            return Err(Error::DuplicateModulus(pm.to_string()));
        }
        let field = p.fp_big();
        let n_inv = field.inv(&(&self.modulus % pm)).ok_or(Error::NonInvertible)?;
        let diff = field.sub(&(r % pm), &(&self.value % pm));
        let t = field.mul(&diff, &n_inv);
        Ok(CrtState {
            value: &self.value + &self.modulus * t,
            modulus: &self.modulus * pm,
        })
    }

    pub fn centered(&self) -> BigInt {
        centered(&self.value, &self.modulus)
    }
}

/// The unique `x` in `(-n/2, n/2]`, `n = prod p_i`, with `x = v_i mod p_i` for all `i`.
pub fn crt_combine(residues: &[(BigInt, PrimeField)]) -> Result<BigInt> {
    let Some(((v0, p0), rest)) = residues.split_first() else {
        return Err(Error::InvalidArgument("empty residue system".into()));
    };
    let to_residue = |v: &BigInt, p: &PrimeField| -> Result<BigUint> {
        let pb = BigInt::from(p.p.clone());
        if v.sign() == num_bigint::Sign::Minus || *v >= pb {
            return Err(Error::InvalidArgument(format!("residue {v} outside [0, {pb})")));
        }
        Ok(v.magnitude().clone())
    };
    let mut state = CrtState::new(&to_residue(v0, p0)?, p0);
    for (i, (v, p)) in rest.iter().enumerate() {
        if residues[..=i].iter().any(|(_, q)| q == p) {
            return Err(Error::DuplicateModulus(p.p.to_string()));
        }
        state = state.extend(&to_residue(v, p)?, p)?;
    }
    Ok(state.centered())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pf(p: u64) -> PrimeField {
        PrimeField::from_u64(p).unwrap()
    }

    #[test]
    fn three_bit_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let p = gen_prime(3, &mut rng).unwrap();
            assert!(*p.modulus() == BigUint::from(5u8) || *p.modulus() == BigUint::from(7u8));
        }
    }

    #[test]
    fn eight_bit_prime_has_eight_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = gen_prime(8, &mut rng).unwrap();
        assert_eq!(p.bit_length(), 8);
        assert!(PrimeField::from_u64(251).is_ok());
    }

    #[test]
    fn gen_prime_is_seed_deterministic() {
        let a = gen_prime(64, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = gen_prime(64, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_composites_and_tiny_moduli() {
        assert!(PrimeField::from_u64(2).is_err());
        assert!(PrimeField::from_u64(561).is_err()); // Carmichael
        assert!(PrimeField::from_u64(1_000_001).is_err());
        assert!(gen_prime(2, &mut ChaCha8Rng::seed_from_u64(0)).is_err());
    }

    #[test]
    fn crt_examples() {
        let r = |v: i64, p: u64| (BigInt::from(v), pf(p));
        assert_eq!(crt_combine(&[r(2, 5), r(3, 7)]).unwrap(), BigInt::from(17));
        assert_eq!(crt_combine(&[r(3, 7)]).unwrap(), BigInt::from(3));
        assert_eq!(crt_combine(&[r(6, 7)]).unwrap(), BigInt::from(-1));
        assert!(matches!(
            crt_combine(&[r(1, 7), r(2, 7)]),
            Err(Error::DuplicateModulus(_))
        ));
        assert!(crt_combine(&[r(7, 7)]).is_err());
    }

    #[test]
    fn mod_inverse_examples() {
        let f = pf(7);
        let inv = |a: i64| mod_inverse(&Residue::new(&BigInt::from(a), &f));
        assert_eq!(inv(1).unwrap().value(), &BigUint::from(1u8));
        assert_eq!(inv(3).unwrap().value(), &BigUint::from(5u8));
        assert_eq!(inv(0), Err(Error::NonInvertible));
    }

    #[test]
    fn prime_stream_never_repeats() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut s = PrimeStream::new(3);
        let a = s.next_prime(&mut rng).unwrap();
        let b = s.next_prime(&mut rng).unwrap();
        assert_ne!(a, b);
        assert!(s.next_prime(&mut rng).is_err());
    }
}
